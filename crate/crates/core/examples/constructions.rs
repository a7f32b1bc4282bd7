//! Pullback groupoids along object maps and fiber products of functors.

use std::sync::Arc;

use groupoid_calculus::construct::{fiber_product_groupoid, pullback_groupoid};
use groupoid_calculus::corpus::standard_extensions;
use groupoid_calculus::group::FinGroup;
use groupoid_calculus::groupoid::FinGroupoid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z2 = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(2), "pt"));

    // Three new objects all sent to the single object of Z/2.
    let pb = pullback_groupoid(&z2, &["p", "q", "r"], &[0, 0, 0])?;
    let g = &pb.groupoid;
    println!("pullback: {} objects, {} arrows, transitive = {}", g.num_objects(), g.num_arrows(), g.is_transitive());
    println!("isotropy at p has order {}", g.isotropy_group("p")?.order());
    println!("projection is a functor: {}", pb.projection.validate().is_ok());

    let (_, e) = standard_extensions().into_iter().find(|(n, _)| *n == "z4-to-z2").expect("bundled");
    let fp = fiber_product_groupoid(e.phi(), e.phi())?;
    let k = &fp.groupoid;
    println!("Z/4 x_(Z/2) Z/4: {} objects, {} arrows", k.num_objects(), k.num_arrows());
    for (x, (a, alpha, b)) in fp.object_triples.iter().enumerate() {
        println!(
            "  object {} = ({}, {}, {})",
            k.object_id(x),
            e.dom().object_id(*a),
            e.cod().arrow_id(*alpha),
            e.dom().object_id(*b)
        );
    }
    println!("legs are functors: {} {}", fp.to_left.validate().is_ok(), fp.to_right.validate().is_ok());
    Ok(())
}
