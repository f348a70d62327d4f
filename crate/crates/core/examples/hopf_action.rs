//! The enveloping algebra of the hyperboloid symmetries acting on the calculus.

use twistcalc::{LieAlgebra, Mode, StarContext, Surds};

fn main() {
    let s = Surds::from_ints(2, 3);
    let lie = LieAlgebra::sl2(&s);
    let ctx = StarContext::hyperboloid(&s, 4, Mode::Exact).unwrap();
    let names = lie.names().to_vec();
    for name in ["H", "E+", "E-"] {
        let g = lie.named(name).unwrap();
        println!("Delta({name}) = {}", lie.coproduct(&g).fmt_with(&names));
        println!("S({name})     = {}", lie.antipode(&g).fmt_with(&names));
        for f in ["y+", "y0", "eta-", "d0"] {
            println!("  {name} |> {f:4} = {}", ctx.act(&g, &ctx.parse(f).unwrap()).unwrap());
        }
    }
}
