//! Lie algebras of affine vector fields, their enveloping algebras, and the
//! Hopf action on the differential calculus.

mod lie;
mod uea;

pub use lie::{LieAlgebra, Tau};
pub use uea::{pbw_degree, pbw_word, Pbw, Uea, UeaTensor};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{CalcElement, Frame, MINUS, PLUS, ZERO};
    use crate::expr::{parse, ExprContext};
    use crate::scalar::{Scalar, Surds};

    fn lie() -> LieAlgebra {
        LieAlgebra::sl2(&Surds::from_ints(2, 1))
    }

    fn named(l: &LieAlgebra, w: &[&str]) -> Uea {
        let mut acc = l.one();
        for name in w {
            acc = l.mul(&acc, &l.named(name).unwrap(), None);
        }
        acc
    }

    #[test]
    fn sl2_brackets() {
        let l = lie();
        let (em, h, ep) = (0, 1, 2);
        assert_eq!(l.structure_constant(h, ep, ep), &Scalar::from_int(2));
        assert_eq!(l.structure_constant(h, em, em), &Scalar::from_int(-2));
        assert_eq!(l.structure_constant(ep, em, h), &Scalar::from_int(-1));
        assert!(l.jacobi_holds());
        // real form: every generator is anti-Hermitian
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { Scalar::from_int(-1) } else { Scalar::zero() };
                assert_eq!(l.star_row(a)[b], want);
            }
        }
    }

    #[test]
    fn pbw_products() {
        let l = lie();
        let epem = named(&l, &["E+", "E-"]);
        let want = named(&l, &["E-", "E+"]).sub(&l.named("H").unwrap());
        assert_eq!(epem, want);
        let hep = named(&l, &["H", "E+"]);
        let want = named(&l, &["E+", "H"]).add(&l.named("E+").unwrap().scale(&Scalar::from_int(2)));
        assert_eq!(hep, want);
    }

    #[test]
    fn antipode_and_counit() {
        let l = lie();
        let ep = l.named("E+").unwrap();
        assert_eq!(l.antipode(&ep), ep.scale(&Scalar::from_int(-1)));
        let hep = named(&l, &["H", "E+"]);
        assert!(l.counit(&hep).is_zero());
        assert_eq!(l.antipode(&hep), named(&l, &["E+", "H"]));
    }

    #[test]
    fn coproduct_is_multiplicative() {
        let l = lie();
        let h = l.named("H").unwrap();
        let ep = l.named("E+").unwrap();
        let dh = l.coproduct(&h);
        let one = l.one();
        assert_eq!(dh, UeaTensor::pure(&h, &one).add(&UeaTensor::pure(&one, &h)));
        let lhs = l.coproduct(&l.mul(&h, &ep, None));
        let rhs = l.tensor_mul(&dh, &l.coproduct(&ep), None);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_on_coordinates() {
        let s = Surds::from_ints(2, 1);
        let l = LieAlgebra::sl2(&s);
        let y = |i| CalcElement::x(Frame::Weight, 3, i);
        let h = l.named("H").unwrap();
        let ep = l.named("E+").unwrap();
        assert_eq!(l.act(&h, &y(PLUS), None).unwrap(), y(PLUS).scale(&Scalar::from_int(2)));
        let inv = Scalar::sqrt_a(&s).inverse_unit().unwrap();
        assert_eq!(l.act(&ep, &y(ZERO), None).unwrap(), y(PLUS).scale(&inv));
        assert!(l.act(&ep, &y(PLUS), None).unwrap().is_zero());
        let two_sa = &Scalar::from_int(2) * &Scalar::sqrt_a(&s);
        assert_eq!(l.act(&ep, &y(MINUS), None).unwrap(), y(ZERO).scale(&-two_sa));
        let ctx = ExprContext::new(s.clone());
        let yy = parse("y0 y0", &ctx).unwrap();
        let want = parse("2/sqrtA * y+ y0", &ctx).unwrap();
        assert_eq!(l.act(&ep, &yy, None).unwrap(), want);
    }

    #[test]
    fn action_on_forms_and_derivatives_is_contragredient() {
        // the pairing d_i(x^j) = delta is invariant, so g |> (d_i x^j - x^j d_i) = 0
        let s = Surds::from_ints(3, 1);
        let l = LieAlgebra::sl2(&s);
        for a in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let d = CalcElement::d(Frame::Weight, 3, i);
                    let x = CalcElement::x(Frame::Weight, 3, j);
                    let comm = d.commutator(&x);
                    assert!(l.act_gen(a, &comm).is_zero());
                    let xi = CalcElement::xi(Frame::Weight, 3, j);
                    let wedge = &xi * &CalcElement::xi(Frame::Weight, 3, i);
                    // derivation on the exterior product
                    let lhs = l.act_gen(a, &wedge);
                    let rhs = &(&l.act_gen(a, &xi) * &CalcElement::xi(Frame::Weight, 3, i))
                        + &(&xi * &l.act_gen(a, &CalcElement::xi(Frame::Weight, 3, i)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn json_round_trip_matches_fields() {
        let src = r#"{
            "basis": ["L12"],
            "C": [[["0"]]],
            "tau": {"L12": [["0","0"],["0","-1"],["1","0"]]},
            "star": {"L12": ["-1"]}
        }"#;
        let l = LieAlgebra::from_json(src).unwrap();
        let ctx = ExprContext::cartesian(Surds::unit(), 2);
        assert_eq!(l.field(0), &parse("x2 d1 - x1 d2", &ctx).unwrap());
        let bad = src.replace(r#""C": [[["0"]]]"#, r#""C": [[["1"]]]"#);
        assert!(LieAlgebra::from_json(&bad).is_err());
    }

    #[test]
    fn tau_matrix_composes() {
        let l = lie();
        let u = named(&l, &["E+", "E-"]);
        let m = l.tau_matrix(&u);
        // u |> y^i = y^mu tau^{mu i}(u)
        for i in 0..3 {
            let yi = CalcElement::x(Frame::Weight, 3, i);
            let mut want = yi.zero_like();
            for mu in 0..3 {
                want += &CalcElement::x(Frame::Weight, 3, mu).scale(&m[mu + 1][i + 1]);
            }
            assert_eq!(l.act(&u, &yi, None).unwrap(), want);
        }
    }
}
