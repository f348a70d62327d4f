//! The undeformed calculus algebra: normal ordering, Leibniz, forms.

use twistcalc::expr::{parse, ExprContext};
use twistcalc::Surds;

fn main() {
    let ctx = ExprContext::new(Surds::unit());
    for src in ["d+ * y-", "d0 * y0^2", "eta+ * eta- + eta- * eta+", "D+ * y+"] {
        println!("{src:28} = {}", parse(src, &ctx).unwrap());
    }
}
