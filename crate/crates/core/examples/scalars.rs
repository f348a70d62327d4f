//! Exact coefficients: Gaussian rationals in nu, c and the formal surds.

use twistcalc::{Scalar, Surds};

fn main() {
    let s = Surds::from_ints(2, 3);
    let ra = Scalar::sqrt_a(&s);
    let x = &(&Scalar::i() * &Scalar::nu()) + &ra;
    println!("x          = {x}");
    println!("x^2        = {}", x.pow(2));
    println!("sqrtA^2    = {}", ra.pow(2));
    println!("c^-1 * 2c  = {}", &Scalar::c_pow(-1) * &(&Scalar::from_int(2) * &Scalar::c_pow(1)));
}
