//! Morita morphisms and Morita equivalence of finite groupoids.

use std::sync::Arc;

use groupoid_calculus::corpus::transitive_groupoid;
use groupoid_calculus::functor::GroupoidMap;
use groupoid_calculus::group::FinGroup;
use groupoid_calculus::groupoid::FinGroupoid;
use groupoid_calculus::morita::{are_morita_equivalent, is_morita_morphism, isotropy_inclusion, skeleton};
use groupoid_calculus::search::{Meter, Search};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s3 = FinGroup::symmetric(3);
    let big = Arc::new(transitive_groupoid(&s3, 3, "x"));
    let one = FinGroupoid::from_group(&s3, "pt");

    let sk = skeleton(&big);
    println!("skeleton: representatives {:?}, isotropy orders {:?}", sk.orbit_reps, sk.iso_classes.iter().map(|k| k.order()).collect::<Vec<_>>());

    match are_morita_equivalent(&big, &one, &mut Meter::default()) {
        Search::Found(m) => println!("3 objects over S3 ~ S3, matching {m:?}"),
        Search::NotFound => println!("not equivalent"),
        Search::BudgetExceeded => println!("undecided"),
    }

    let inc = isotropy_inclusion(&big, 0);
    let r = is_morita_morphism(&inc)?;
    println!("isotropy inclusion: Morita = {}, surjective on objects = {}", r.is_morita(), r.surjective_on_objects);

    let units = Arc::new(FinGroupoid::unit_groupoid(&["a", "b"]));
    let point = Arc::new(FinGroupoid::unit_groupoid(&["pt"]));
    let collapse = GroupoidMap::new(units.clone(), point.clone(), vec![0, 0], vec![0, 0])?;
    let r = is_morita_morphism(&collapse)?;
    println!("two points -> one point: Morita = {}, reason: {}", r.is_morita(), r.failure.as_deref().unwrap_or("-"));
    println!("two points ~ one point: {}", are_morita_equivalent(&units, &point, &mut Meter::default()).is_found());
    Ok(())
}
