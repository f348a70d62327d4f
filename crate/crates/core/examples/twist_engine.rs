//! The Jordanian twist: series, axioms, twisted coproducts.

use twistcalc::twist::hopf_closed_form_checks;
use twistcalc::{Mode, StarContext, Surds};

fn main() {
    let ctx = StarContext::hyperboloid(&Surds::from_ints(2, 3), 3, Mode::Exact).unwrap();
    let t = ctx.twist();
    let names = t.lie().names().to_vec();
    println!("F    = {}", t.f().fmt_with(&names));
    println!("beta = {}", t.beta().fmt_with(&names));
    println!("R    = {}", t.r().fmt_with(&names));
    let e = t.lie().named("E-").unwrap();
    println!("Delta_F(E-) = {}", t.twisted_coproduct(&e).fmt_with(&names));
    for c in t.check_axioms().iter().chain(&hopf_closed_form_checks(t).unwrap()) {
        println!("{:32} {:?}", c.id, c.status);
    }
}
