//! Star products, braided commutativity and the exact/truncated agreement.

use twistcalc::{Mode, StarContext, Surds};

fn main() {
    let s = Surds::from_ints(2, 3);
    let exact = StarContext::hyperboloid(&s, 6, Mode::Exact).unwrap();
    let truncated = StarContext::hyperboloid(&s, 6, Mode::Truncated).unwrap();
    for src in ["y+ * y-", "y- * y+", "d- * y+", "eta+ * eta0", "(y0^2) * y-"] {
        let e = exact.cut(&exact.parse(src).unwrap());
        let t = truncated.parse(src).unwrap();
        println!("{src:14} = {e}   (truncated agrees: {})", e == t);
    }
    let (a, b) = (exact.parse("y+").unwrap(), exact.parse("y-").unwrap());
    println!("{}", exact.braided_commutativity("y+,y-", &a, &b).unwrap().status_line());
}
