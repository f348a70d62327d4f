//! Closed forms of the twisted coproduct and antipode of the Jordanian twist
//! `exp(H/2 (x) log(1 + i nu E+))`, with `1/(1 + i nu E+)` expanded as a
//! series.

use crate::error::{Error, Result};
use crate::hopf::{Uea, UeaTensor};
use crate::report::Check;
use crate::scalar::Scalar;

use super::{geometric_inverse, TwistSeries};

/// `(name, closed form)` for `Delta_F(H)`, `Delta_F(E+)`, `Delta_F(E-)`.
pub fn coproduct_closed_forms(twist: &TwistSeries) -> Result<Vec<(&'static str, UeaTensor)>> {
    let lie = twist.lie();
    let n = twist.order();
    let mul = |a: &Uea, b: &Uea| lie.mul(a, b, Some(n));
    let (h, ep, em) = (lie.named("H")?, lie.named("E+")?, lie.named("E-")?);
    let inu = Scalar::i_nu();
    let g = geometric_inverse(lie, &ep, n);
    let ep_g = mul(&ep, &g);
    let t = |a: &Uea, b: &Uea| UeaTensor::pure(a, b);

    let d_h = lie.coproduct(&h).sub(&t(&h, &ep_g).scale(&inu));
    let d_ep = lie.coproduct(&ep).add(&t(&ep, &ep).scale(&inu));
    // H + i nu E+/(1 + i nu E+)
    let inner = h.add(&ep_g.scale(&inu));
    let d_em = lie
        .coproduct(&em)
        .sub(&t(&h, &mul(&inner, &g)).scale(&(&inu * &Scalar::from_ratio(1, 2))))
        .sub(&t(&em, &ep_g).scale(&inu))
        .sub(&t(&mul(&h, &h), &mul(&ep_g, &g)).scale(&Scalar::nu_pow(2).scale_rational(&crate::scalar::rat(1, 4))));
    Ok(vec![("H", d_h.truncate(n)), ("E+", d_ep.truncate(n)), ("E-", d_em.truncate(n))])
}

/// `(name, closed form)` for `S_F(H)`, `S_F(E+)`, `S_F(E-)`.
pub fn antipode_closed_forms(twist: &TwistSeries) -> Result<Vec<(&'static str, Uea)>> {
    let lie = twist.lie();
    let n = twist.order();
    let mul = |a: &Uea, b: &Uea| lie.mul(a, b, Some(n));
    let (h, ep, em) = (lie.named("H")?, lie.named("E+")?, lie.named("E-")?);
    let inu = Scalar::i_nu();
    let g = geometric_inverse(lie, &ep, n);
    let one_plus = lie.one().add(&ep.scale(&inu));
    let inner = h.add(&mul(&ep, &g).scale(&inu));

    let s_h = mul(&lie.antipode(&h), &one_plus);
    let s_ep = mul(&lie.antipode(&ep), &g);
    let s_em = mul(&lie.antipode(&em), &one_plus)
        .sub(&mul(&mul(&h, &one_plus), &inner).scale(&(&inu * &Scalar::from_ratio(1, 2))))
        .add(
            &mul(&mul(&mul(&h, &one_plus), &h), &ep)
                .scale(&Scalar::nu_pow(2).scale_rational(&crate::scalar::rat(1, 4))),
        );
    Ok(vec![("H", s_h.truncate(n)), ("E+", s_ep.truncate(n)), ("E-", s_em.truncate(n))])
}

/// Definitional `Delta_F`, `S_F` against the closed forms, plus the
/// classical limit.
pub fn hopf_closed_form_checks(twist: &TwistSeries) -> Result<Vec<Check>> {
    if !twist.is_jordanian() {
        return Err(Error::Unsupported("closed forms are stated for the Jordanian twist".into()));
    }
    let lie = twist.lie();
    let names = lie.names();
    let mut out = Vec::new();
    for (name, closed) in coproduct_closed_forms(twist)? {
        let h = lie.named(name)?;
        let got = twist.twisted_coproduct(&h);
        out.push(Check::tensors(format!("hopf.coproduct.{name}"), &got, &closed, names));
        out.push(Check::tensors(
            format!("hopf.coproduct-classical.{name}"),
            &got.nu_coefficient(0),
            &lie.coproduct(&h),
            names,
        ));
    }
    for (name, closed) in antipode_closed_forms(twist)? {
        let h = lie.named(name)?;
        let got = twist.twisted_antipode(&h);
        out.push(Check::ueas(format!("hopf.antipode.{name}"), &got, &closed, names));
        out.push(Check::ueas(
            format!("hopf.antipode-classical.{name}"),
            &got.nu_coefficient(0),
            &lie.antipode(&h),
            names,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::LieAlgebra;
    use crate::scalar::Surds;
    use std::sync::Arc;

    #[test]
    fn closed_forms_against_definitions() {
        let s = Surds::from_ints(2, 3);
        let lie = Arc::new(LieAlgebra::sl2(&s));
        let (h, e) = (lie.index_of("H").unwrap(), lie.index_of("E+").unwrap());
        let twist = TwistSeries::jordanian(lie, h, e, 6).unwrap();
        let checks = hopf_closed_form_checks(&twist).unwrap();
        assert_eq!(checks.len(), 12);
        for c in checks {
            assert!(c.passed(), "{}: {}", c.id, c.residual);
        }
    }
}
