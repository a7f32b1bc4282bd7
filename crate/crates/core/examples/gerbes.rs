//! Gerbe certificates of extensions and reconstruction of an extension from its bibundle.

use groupoid_calculus::corpus::standard_extensions;
use groupoid_calculus::gerbe::{certify_gerbe, roundtrip_extension};
use groupoid_calculus::search::Meter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, e) in standard_extensions() {
        let mut meter = Meter::default();
        let c = certify_gerbe(&e, &mut meter)?;
        let fp = &c.fiber_product.groupoid;
        print!("{name:>20}: fiber product {}/{}, transitive = {}", fp.num_objects(), fp.num_arrows(), c.transitive);
        match (&c.isotropy_k, &c.orbit_report) {
            (Some(k), _) => print!(", |K| = {}", k.order()),
            (None, Some(orbits)) => print!(", orbits {orbits:?}"),
            _ => {}
        }
        println!(", certified = {}", c.certified());

        let r = roundtrip_extension(&e, &mut meter)?;
        println!("{:>20}  gauge groupoid {}/{}, theta valid = {}", "", r.gauge.num_objects(), r.gauge.num_arrows(), r.theta_report.is_ok());
    }
    Ok(())
}
