//! Build groupoids by hand and from groups, then inspect orbits and isotropy.

use groupoid_calculus::format::{parse_groupoid, render_groupoid};
use groupoid_calculus::group::FinGroup;
use groupoid_calculus::groupoid::{FinGroupoid, GroupoidBuilder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The pair groupoid on {a, b}: exactly one arrow between any two objects.
    let mut b = GroupoidBuilder::new();
    for x in ["a", "b"] {
        b.object(x)?;
    }
    for (id, s, t) in [("ida", "a", "a"), ("idb", "b", "b"), ("ab", "a", "b"), ("ba", "b", "a")] {
        b.arrow(id, s, t)?;
    }
    b.unit("a", "ida")?;
    b.unit("b", "idb")?;
    for (f, g) in [("ida", "ida"), ("idb", "idb"), ("ab", "ba"), ("ba", "ab")] {
        b.inverse(f, g)?;
    }
    for (g, f, h) in [
        ("ida", "ida", "ida"),
        ("idb", "idb", "idb"),
        ("ab", "ida", "ab"),
        ("idb", "ab", "ab"),
        ("ba", "idb", "ba"),
        ("ida", "ba", "ba"),
        ("ba", "ab", "ida"),
        ("ab", "ba", "idb"),
    ] {
        b.compose(g, f, h)?;
    }
    let pair = b.build()?;
    println!("pair groupoid: {} arrows, transitive = {}, validation: {}", pair.num_arrows(), pair.is_transitive(), pair.validate());

    let z3 = FinGroup::cyclic(3);
    let action = FinGroupoid::action_groupoid(&z3, &["u", "v", "w"], |k, x| (k + x) % 3)?;
    println!("Z/3 acting on three points: orbits {:?}", action.orbit_ids());

    let q8 = FinGroupoid::from_group(&FinGroup::quaternion(), "pt");
    let k = q8.isotropy_group("pt")?;
    println!("quaternions: order {}, abelian = {}, element orders {:?}", k.order(), k.is_abelian(), k.order_profile());

    let mixed = FinGroupoid::disjoint_union(&pair, &action);
    println!("disjoint union: {} objects in {} orbits", mixed.num_objects(), mixed.orbits().len());

    let text = render_groupoid(&pair);
    assert_eq!(render_groupoid(&parse_groupoid(&text)?), text);
    println!("\n{text}");
    Ok(())
}
