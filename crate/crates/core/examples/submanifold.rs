//! The hyperboloid ideal: reduction, star stability, the dependence relation.

use twistcalc::submanifold::{dependence_relations, SubmanifoldIdeal};
use twistcalc::{Mode, Scalar, StarContext, Surds};

fn main() {
    let s = Surds::from_ints(2, 3);
    let ctx = StarContext::hyperboloid(&s, 6, Mode::Exact).unwrap();
    let ideal = SubmanifoldIdeal::hyperboloid(&s, Scalar::c_pow(1));
    println!("f_c  = {}", ideal.f());
    println!("df_c = {}", ideal.df());
    let a = ctx.parse("y+ y- y0 + eta0 y0").unwrap();
    println!("reduce({a}) = {}", ideal.reduce(&a).unwrap());
    for c in ideal.star_stability(&ctx, "y+", &ctx.parse("y+").unwrap()).unwrap() {
        println!("{}", c.status_line());
    }
    let (classical, printed, rederived) = dependence_relations(&ctx).unwrap();
    println!("classical dependence relation -> {classical}");
    println!("printed dependence relation   -> {printed}");
    println!("rederived dependence relation -> {rederived}");
}
