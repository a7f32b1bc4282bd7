//! Bibundles of functors, their composition, inversion and application to bundles.

use std::sync::Arc;

use groupoid_calculus::bibundle::{apply_bibundle, bibundle_from_functor, bibundle_isomorphism, compose_bibundles, invert_bibundle};
use groupoid_calculus::bundle::unit_bundle;
use groupoid_calculus::corpus::transitive_groupoid;
use groupoid_calculus::functor::GroupoidMap;
use groupoid_calculus::group::FinGroup;
use groupoid_calculus::groupoid::FinGroupoid;
use groupoid_calculus::morita::{is_morita_morphism, isotropy_inclusion};
use groupoid_calculus::search::Meter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c2 = FinGroup::cyclic(2);
    let big = Arc::new(transitive_groupoid(&c2, 2, "x"));
    let inc = isotropy_inclusion(&big, 0);
    let p = bibundle_from_functor(&inc);
    println!("<inc>: {} points, biprincipal = {}, Morita = {}", p.len(), p.is_biprincipal(), is_morita_morphism(&inc)?.is_morita());

    let q = invert_bibundle(&p)?;
    let round = compose_bibundles(&p, &q)?.bibundle;
    let id = bibundle_from_functor(&GroupoidMap::identity(inc.dom().clone()));
    let same = bibundle_isomorphism(&round, &id, &mut Meter::default())?.is_found();
    println!("<inc> then its inverse is isomorphic to <id>: {same}");

    let z4 = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(4), "pt"));
    let z2 = Arc::new(FinGroupoid::from_group(&c2, "pt"));
    let quotient = GroupoidMap::new(z4.clone(), z2, vec![0], vec![0, 1, 0, 1])?;
    let r = bibundle_from_functor(&quotient);
    println!("<Z/4 -> Z/2>: {} points, biprincipal = {}", r.len(), r.is_biprincipal());
    println!("violations: {}", r.biprincipality());

    let applied = apply_bibundle(&r, &unit_bundle(&z4))?.bundle;
    println!("applied to the unit bundle of Z/4: {} points, validation: {}", applied.carrier().len(), applied.validate());
    Ok(())
}
