//! Principal bundles: validation, trivialization, pullback and the gauge groupoid.

use std::sync::Arc;

use groupoid_calculus::bundle::{gauge_groupoid, pullback_bundle, trivialize, unit_bundle};
use groupoid_calculus::corpus::transitive_groupoid;
use groupoid_calculus::group::FinGroup;
use groupoid_calculus::iso::groupoid_isomorphic;
use groupoid_calculus::search::Meter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(transitive_groupoid(&FinGroup::cyclic(3), 2, "x"));

    // Arrows of g, fibered over their source and acted on by precomposition.
    let b = unit_bundle(&g);
    println!("unit bundle: {} points over {} base points, validation: {}", b.carrier().len(), b.base().len(), b.validate());

    let t = trivialize(&b)?;
    let section: Vec<&str> = t.section.iter().map(|&p| b.carrier()[p].as_str()).collect();
    println!("global section: {section:?}");

    let gauge = gauge_groupoid(&b)?;
    let iso = groupoid_isomorphic(&gauge.groupoid, &g, &mut Meter::default());
    println!("gauge groupoid has {} arrows, isomorphic to g: {}", gauge.groupoid.num_arrows(), iso.is_found());

    let pulled = pullback_bundle(&b, &["m", "n", "o"], &[0, 1, 1])?;
    println!("pulled back to 3 base points: {} points, validation: {}", pulled.carrier().len(), pulled.validate());
    Ok(())
}
