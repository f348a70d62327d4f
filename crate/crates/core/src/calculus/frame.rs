//! Linear change between the Cartesian frame `x1 x2 x3` and the weight frame
//! `y+ = x1 + sqrtB x3`, `y- = x1 - sqrtB x3`, `y0 = x2` of R^3.

use std::sync::Arc;

use super::{CalcElement, Frame, MINUS, PLUS, ZERO};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Surds};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    X,
    Xi,
    D,
}

fn gen(kind: GenKind, frame: Frame, i: usize) -> CalcElement {
    match kind {
        GenKind::X => CalcElement::x(frame, 3, i),
        GenKind::Xi => CalcElement::xi(frame, 3, i),
        GenKind::D => CalcElement::d(frame, 3, i),
    }
}

/// Image of the generator `kind_i` of the other frame, written in `target`.
pub fn generator_image(kind: GenKind, i: usize, target: Frame, surds: &Arc<Surds>) -> CalcElement {
    let half = Scalar::from_ratio(1, 2);
    let sb = Scalar::sqrt_b(surds);
    let inv_sb = Scalar::sqrt_b(surds).inverse_unit().expect("sqrtB invertible");
    let g = |j: usize| gen(kind, target, j);
    match (target, kind) {
        (Frame::Weight, GenKind::X | GenKind::Xi) => match i {
            0 => (&g(PLUS) + &g(MINUS)).scale(&half),
            1 => g(ZERO),
            _ => (&g(PLUS) - &g(MINUS)).scale(&(&half * &inv_sb)),
        },
        (Frame::Weight, GenKind::D) => match i {
            0 => &g(PLUS) + &g(MINUS),
            1 => g(ZERO),
            _ => (&g(PLUS) - &g(MINUS)).scale(&sb),
        },
        (Frame::Cartesian, GenKind::X | GenKind::Xi) => match i {
            PLUS => &g(0) + &g(2).scale(&sb),
            MINUS => &g(0) - &g(2).scale(&sb),
            _ => g(1),
        },
        (Frame::Cartesian, GenKind::D) => match i {
            PLUS => (&g(0) + &g(2).scale(&inv_sb)).scale(&half),
            MINUS => (&g(0) - &g(2).scale(&inv_sb)).scale(&half),
            _ => g(1),
        },
    }
}

/// Rewrite `a` in the `target` frame. Only n = 3 is supported.
pub fn change_frame(a: &CalcElement, target: Frame, surds: &Arc<Surds>) -> Result<CalcElement> {
    if a.frame() == target {
        return Ok(a.clone());
    }
    if a.dim() != 3 {
        return Err(Error::Dimension(format!("frame change needs n = 3, got {}", a.dim())));
    }
    let images = |kind| -> Vec<CalcElement> { (0..3).map(|i| generator_image(kind, i, target, surds)).collect() };
    let xs = images(GenKind::X);
    let xis = images(GenKind::Xi);
    let ds = images(GenKind::D);
    let mut out = CalcElement::zero(target, 3);
    for (m, c) in a.terms() {
        let mut acc = CalcElement::scalar(target, 3, c.clone());
        for i in m.xi_indices() {
            acc = &acc * &xis[i];
        }
        for i in 0..3 {
            for _ in 0..m.x[i] {
                acc = &acc * &xs[i];
            }
        }
        for i in 0..3 {
            for _ in 0..m.d[i] {
                acc = &acc * &ds[i];
            }
        }
        out += &acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_coordinate_definition() {
        let s = Surds::from_ints(2, 3);
        let yp = CalcElement::x(Frame::Weight, 3, PLUS);
        let got = change_frame(&yp, Frame::Cartesian, &s).unwrap();
        let expected = &CalcElement::x(Frame::Cartesian, 3, 0)
            + &CalcElement::x(Frame::Cartesian, 3, 2).scale(&Scalar::sqrt_b(&s));
        assert_eq!(got, expected);
    }

    #[test]
    fn round_trip() {
        let s = Surds::from_ints(2, 3);
        let c = Frame::Cartesian;
        let a = &(&CalcElement::xi(c, 3, 2) * &CalcElement::x(c, 3, 0)) * &CalcElement::d(c, 3, 2);
        let a = &a + &(&CalcElement::x(c, 3, 2) * &CalcElement::x(c, 3, 2));
        let w = change_frame(&a, Frame::Weight, &s).unwrap();
        assert_eq!(change_frame(&w, c, &s).unwrap(), a);
    }

    #[test]
    fn derivatives_stay_dual() {
        let s = Surds::from_ints(5, 7);
        for i in 0..3 {
            for j in 0..3 {
                let d = generator_image(GenKind::D, i, Frame::Cartesian, &s);
                let x = generator_image(GenKind::X, j, Frame::Cartesian, &s);
                let comm = d.commutator(&x);
                let expected =
                    if i == j { CalcElement::one(Frame::Cartesian, 3) } else { CalcElement::zero(Frame::Cartesian, 3) };
                assert_eq!(comm, expected, "d{i} vs y{j}");
            }
        }
    }
}
