//! Twisted metric, connection and Ricci tensor on the hyperboloid (a = b = 1).

use twistcalc::geometry::{signature_label, GeometryContext, GeometryObject};
use twistcalc::{Mode, Scalar};

fn main() {
    let geo = GeometryContext::hyperboloid(Scalar::c_pow(1), 6, Mode::Exact).unwrap();
    for object in [GeometryObject::GStar, GeometryObject::Nabla, GeometryObject::Ricci] {
        println!("{object}:");
        for r in geo.table(object).unwrap() {
            println!("  {:6} {}", r.pair, r.value);
        }
    }
    println!("ricci scalar = {}", geo.ricci_scalar().unwrap());
    for c in [Scalar::from_ratio(-1, 2), Scalar::from_int(1)] {
        println!("c = {c}: {:?}", signature_label(&c));
    }
}
