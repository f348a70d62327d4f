//! Drinfel'd twists as truncated `nu`-series, with their inverse, `beta`,
//! the braiding, twisted Hopf structure and the axiom checks.

mod closed;
mod exact;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use closed::{antipode_closed_forms, coproduct_closed_forms, hopf_closed_form_checks};
pub use exact::JordanianExact;

use crate::calculus::CalcElement;
use crate::error::{Error, Result};
use crate::hopf::{LieAlgebra, Pbw, Uea, UeaTensor};
use crate::report::Check;
use crate::scalar::Scalar;

/// Default truncation order.
pub const DEFAULT_ORDER: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistKind {
    Identity,
    Abelian {
        pairs: Vec<(usize, usize)>,
    },
    Jordanian {
        h: usize,
        e: usize,
    },
    /// User supplied or mutated series.
    Custom,
}

/// Two-leg operators applied to `a (x) b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOp {
    F,
    FInv,
    /// `F-bar` with its legs swapped.
    FInv21,
    R,
    RInv,
}

#[derive(Clone, Debug)]
pub struct TwistSeries {
    lie: Arc<LieAlgebra>,
    order: u32,
    kind: TwistKind,
    f: UeaTensor,
    f_inv: UeaTensor,
    beta: Uea,
    beta_inv: Uea,
    s_beta: Uea,
    r: UeaTensor,
    r_inv: UeaTensor,
    exact: Option<JordanianExact>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl TwistSeries {
    fn build(lie: Arc<LieAlgebra>, f: UeaTensor, order: u32, kind: TwistKind) -> Result<Self> {
        let d = lie.dim();
        let one = UeaTensor::one(d, 2);
        if f.nu_coefficient(0) != one {
            return Err(Error::Config("twist must start with 1 (x) 1".into()));
        }
        let f = f.truncate(order);
        // Neumann series: F = 1 + X, F-bar = sum_k (-X)^k
        let minus_x = one.sub(&f);
        let mut f_inv = one.clone();
        let mut power = one.clone();
        for _ in 0..order {
            power = lie.tensor_mul(&power, &minus_x, Some(order));
            if power.is_zero() {
                break;
            }
            f_inv = f_inv.add(&power);
        }
        let beta = lie.contract(&f.map_leg(1, |m| lie.antipode_mono(m))).truncate(order);
        let beta_inv = lie.contract(&f_inv.map_leg(0, |m| lie.antipode_mono(m))).truncate(order);
        let s_beta = lie.antipode(&beta);
        let r = lie.tensor_mul(&f.flip(), &f_inv, Some(order));
        let r_inv = lie.tensor_mul(&f, &f_inv.flip(), Some(order));
        let exact = match kind {
            TwistKind::Jordanian { h, e } => JordanianExact::new(lie.clone(), h, e).ok(),
            _ => None,
        };
        Ok(TwistSeries { lie, order, kind, f, f_inv, beta, beta_inv, s_beta, r, r_inv, exact })
    }

    pub fn identity(lie: Arc<LieAlgebra>, order: u32) -> Self {
        let one = UeaTensor::one(lie.dim(), 2);
        Self::build(lie, one, order, TwistKind::Identity).expect("identity twist")
    }

    /// `exp(i nu P)` with `P = 1/2 sum (e (x) f - f (x) e)`; all listed
    /// elements must commute.
    pub fn abelian(lie: Arc<LieAlgebra>, pairs: &[(usize, usize)], order: u32) -> Result<Self> {
        let d = lie.dim();
        let elems: Vec<usize> = pairs.iter().flat_map(|&(e, f)| [e, f]).collect();
        for &u in &elems {
            for &v in &elems {
                if !lie.commutator(&lie.gen(u), &lie.gen(v)).is_zero() {
                    return Err(Error::Bracket(format!(
                        "abelian twist needs commuting elements, [{}, {}] != 0",
                        lie.names()[u],
                        lie.names()[v]
                    )));
                }
            }
        }
        let mut p = UeaTensor::zero(d, 2);
        let half = Scalar::from_ratio(1, 2);
        for &(e, f) in pairs {
            let ef = UeaTensor::pure(&lie.gen(e), &lie.gen(f));
            p = p.add(&ef.sub(&ef.flip()).scale(&half));
        }
        let x = p.scale(&Scalar::i_nu());
        let f = exp_series(&lie, &x, order);
        Self::build(lie, f, order, TwistKind::Abelian { pairs: pairs.to_vec() })
    }

    /// `exp(1/2 H (x) log(1 + i nu E))`, requiring `[H, E] = 2E`.
    pub fn jordanian(lie: Arc<LieAlgebra>, h: usize, e: usize, order: u32) -> Result<Self> {
        let (hu, eu) = (lie.gen(h), lie.gen(e));
        if lie.commutator(&hu, &eu) != eu.scale(&Scalar::from_int(2)) {
            return Err(Error::Bracket(format!(
                "Jordanian twist needs [{}, {}] = 2 {}",
                lie.names()[h],
                lie.names()[e],
                lie.names()[e]
            )));
        }
        // log(1 + i nu E) truncated
        let ine = eu.scale(&Scalar::i_nu());
        let mut log = Uea::zero(lie.dim());
        let mut power = lie.one();
        for k in 1..=order {
            power = lie.mul(&power, &ine, Some(order));
            let sign = if k % 2 == 1 { 1 } else { -1 };
            log = log.add(&power.scale(&Scalar::from_ratio(sign, k as i64)));
        }
        // sum_m (1/2)^m / m! H^m (x) log^m
        let mut f = UeaTensor::one(lie.dim(), 2);
        let mut hm = lie.one();
        let mut lm = lie.one();
        let mut coeff = rat(1, 1);
        for m in 1..=order {
            hm = lie.mul(&hm, &hu, None);
            lm = lie.mul(&lm, &log, Some(order));
            coeff *= rat(1, 2 * m as i64);
            if lm.is_zero() {
                break;
            }
            f = f.add(&UeaTensor::pure(&hm, &lm).scale(&Scalar::from_rational(coeff.clone())));
        }
        Self::build(lie, f, order, TwistKind::Jordanian { h, e })
    }

    /// Twist from an explicit series; no structural assumptions are made.
    pub fn from_tensor(lie: Arc<LieAlgebra>, f: UeaTensor, order: u32) -> Result<Self> {
        Self::build(lie, f, order, TwistKind::Custom)
    }

    /// Replace the `nu^k` coefficient, producing a custom series.
    pub fn with_coefficient(&self, k: u32, coeff: &UeaTensor) -> Result<Self> {
        let f = self.f.sub(&self.f.nu_coefficient(k).map_coefficients(|c| c.shift_nu(k)));
        let f = f.add(&coeff.map_coefficients(|c| c.shift_nu(k)));
        Self::build(self.lie.clone(), f, self.order, TwistKind::Custom)
    }

    pub fn lie(&self) -> &Arc<LieAlgebra> {
        &self.lie
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kind(&self) -> &TwistKind {
        &self.kind
    }

    pub fn is_jordanian(&self) -> bool {
        matches!(self.kind, TwistKind::Jordanian { .. })
    }

    pub fn exact(&self) -> Option<&JordanianExact> {
        self.exact.as_ref()
    }

    pub fn f(&self) -> &UeaTensor {
        &self.f
    }

    pub fn f_inv(&self) -> &UeaTensor {
        &self.f_inv
    }

    pub fn beta(&self) -> &Uea {
        &self.beta
    }

    pub fn beta_inv(&self) -> &Uea {
        &self.beta_inv
    }

    pub fn s_beta(&self) -> &Uea {
        &self.s_beta
    }

    pub fn r(&self) -> &UeaTensor {
        &self.r
    }

    pub fn r_inv(&self) -> &UeaTensor {
        &self.r_inv
    }

    /// Coefficient of `nu^k` in `F`.
    pub fn coefficient(&self, k: u32) -> UeaTensor {
        self.f.nu_coefficient(k)
    }

    fn tmul(&self, a: &UeaTensor, b: &UeaTensor) -> UeaTensor {
        self.lie.tensor_mul(a, b, Some(self.order))
    }

    fn umul(&self, a: &Uea, b: &Uea) -> Uea {
        self.lie.mul(a, b, Some(self.order))
    }

    // ---- twisted Hopf structure ----

    /// `F Delta(h) F-bar`.
    pub fn twisted_coproduct(&self, h: &Uea) -> UeaTensor {
        self.tmul(&self.tmul(&self.f, &self.lie.coproduct(h)), &self.f_inv)
    }

    /// `beta S(h) beta^{-1}`.
    pub fn twisted_antipode(&self, h: &Uea) -> Uea {
        self.umul(&self.umul(&self.beta, &self.lie.antipode(h)), &self.beta_inv)
    }

    /// `F Delta(.) F-bar` applied to one leg of a tensor, by conjugating the
    /// untwisted coproduct with `F` placed on the split legs.
    fn twisted_coproduct_leg(&self, t: &UeaTensor, leg: usize) -> UeaTensor {
        let split = self.lie.coproduct_leg(t, leg);
        let (f3, fi3) = match leg {
            0 => (self.f.embed3(0, 1), self.f_inv.embed3(0, 1)),
            _ => (self.f.embed3(1, 2), self.f_inv.embed3(1, 2)),
        };
        self.tmul(&self.tmul(&f3, &split), &fi3)
    }

    // ---- leg actions ----

    fn pair_tensor(&self, op: PairOp) -> UeaTensor {
        match op {
            PairOp::F => self.f.clone(),
            PairOp::FInv => self.f_inv.clone(),
            PairOp::FInv21 => self.f_inv.flip(),
            PairOp::R => self.r.clone(),
            PairOp::RInv => self.r_inv.clone(),
        }
    }

    /// Apply a two-leg operator to `a (x) b`, returning a sum of pairs.
    /// Exact mode needs a Jordanian twist with diagonal `H`.
    pub fn apply2(
        &self,
        op: PairOp,
        a: &CalcElement,
        b: &CalcElement,
        exact: bool,
    ) -> Result<Vec<(CalcElement, CalcElement)>> {
        if exact {
            let ex =
                self.exact.as_ref().ok_or_else(|| Error::Unsupported("exact mode needs a Jordanian twist".into()))?;
            return match op {
                PairOp::F => ex.right_leg(1, a, b),
                PairOp::FInv => ex.right_leg(-1, a, b),
                PairOp::FInv21 => ex.left_leg(-1, a, b),
                PairOp::R => {
                    let mut out = Vec::new();
                    for (x, y) in ex.right_leg(-1, a, b)? {
                        out.extend(ex.left_leg(1, &x, &y)?);
                    }
                    Ok(out)
                }
                PairOp::RInv => {
                    let mut out = Vec::new();
                    for (x, y) in ex.left_leg(-1, a, b)? {
                        out.extend(ex.right_leg(1, &x, &y)?);
                    }
                    Ok(out)
                }
            };
        }
        let t = self.pair_tensor(op);
        let order = Some(self.order);
        // group by the second leg so each distinct action is computed once
        let mut grouped: BTreeMap<&Pbw, Vec<(&Pbw, &Scalar)>> = BTreeMap::new();
        for (legs, c) in t.terms() {
            grouped.entry(&legs[1]).or_default().push((&legs[0], c));
        }
        let mut left_cache: BTreeMap<&Pbw, CalcElement> = BTreeMap::new();
        let mut out = Vec::with_capacity(grouped.len());
        for (m1, firsts) in grouped {
            let right = self.lie.act_mono(m1, b);
            if right.is_zero() {
                continue;
            }
            let mut left = a.zero_like();
            for (m0, c) in firsts {
                let act = left_cache.entry(m0).or_insert_with(|| self.lie.act_mono(m0, a));
                left += &act.map_coefficients(|x| c.mul_truncated(x, order));
            }
            if !left.is_zero() {
                out.push((left, right));
            }
        }
        Ok(out)
    }

    /// `beta |> a`.
    pub fn beta_act(&self, a: &CalcElement, exact: bool) -> Result<CalcElement> {
        match (exact, &self.exact) {
            (true, Some(ex)) => ex.beta_act(a),
            (true, None) => Err(Error::Unsupported("exact mode needs a Jordanian twist".into())),
            (false, _) => self.lie.act(&self.beta, a, Some(self.order)),
        }
    }

    /// `S(beta) |> a`.
    pub fn s_beta_act(&self, a: &CalcElement, exact: bool) -> Result<CalcElement> {
        match (exact, &self.exact) {
            (true, Some(ex)) => ex.s_beta_act(a),
            (true, None) => Err(Error::Unsupported("exact mode needs a Jordanian twist".into())),
            (false, _) => self.lie.act(&self.s_beta, a, Some(self.order)),
        }
    }

    // ---- axiom checks ----

    fn names(&self) -> &[String] {
        self.lie.names()
    }

    pub fn check_inverse(&self) -> Check {
        let one = UeaTensor::one(self.lie.dim(), 2);
        let lhs = self.tmul(&self.f, &self.f_inv);
        let mut c = Check::tensors("twist.inverse", &lhs, &one, self.names());
        if c.passed() {
            c = Check::tensors("twist.inverse", &self.tmul(&self.f_inv, &self.f), &one, self.names());
        }
        c
    }

    pub fn check_normalization(&self) -> Check {
        let one = UeaTensor::one(self.lie.dim(), 1);
        let left = self.f.counit_leg(0);
        let c = Check::tensors("twist.normalization", &left, &one, self.names());
        if !c.passed() {
            return c;
        }
        Check::tensors("twist.normalization", &self.f.counit_leg(1), &one, self.names())
    }

    pub fn check_cocycle(&self) -> Check {
        let lhs = self.tmul(&self.f.embed3(0, 1), &self.lie.coproduct_leg(&self.f, 0));
        let rhs = self.tmul(&self.f.embed3(1, 2), &self.lie.coproduct_leg(&self.f, 1));
        Check::tensors("twist.cocycle", &lhs, &rhs, self.names())
    }

    pub fn check_beta(&self) -> Check {
        let lhs = self.umul(&self.beta, &self.beta_inv);
        Check::ueas("twist.beta-inverse", &lhs, &self.lie.one(), self.names())
    }

    pub fn check_r_inverse(&self) -> Check {
        let lhs = self.tmul(&self.r, &self.r_inv);
        Check::tensors("twist.r-inverse", &lhs, &UeaTensor::one(self.lie.dim(), 2), self.names())
    }

    /// `R_2 (x) R_1 = R-bar`.
    pub fn check_r_flip(&self) -> Check {
        Check::tensors("twist.r-flip", &self.r.flip(), &self.r_inv, self.names())
    }

    /// `(Delta_F (x) id) R = R_13 R_23` and `(id (x) Delta_F) R = R_13 R_12`.
    pub fn check_hexagons(&self) -> Vec<Check> {
        let r = &self.r;
        let lhs1 = self.twisted_coproduct_leg(r, 0);
        let rhs1 = self.tmul(&r.embed3(0, 2), &r.embed3(1, 2));
        let lhs2 = self.twisted_coproduct_leg(r, 1);
        let rhs2 = self.tmul(&r.embed3(0, 2), &r.embed3(0, 1));
        vec![
            Check::tensors("twist.hexagon-left", &lhs1, &rhs1, self.names()),
            Check::tensors("twist.hexagon-right", &lhs2, &rhs2, self.names()),
        ]
    }

    /// `(* (x) *) F = F-bar`.
    pub fn check_unitary(&self) -> Check {
        Check::tensors("twist.unitary", &self.lie.tensor_star(&self.f), &self.f_inv, self.names())
    }

    /// `(* (x) *) F = (S (x) S) F_21`.
    pub fn check_real(&self) -> Check {
        let rhs = self.lie.tensor_antipode(&self.f.flip());
        Check::tensors("twist.real", &self.lie.tensor_star(&self.f), &rhs, self.names())
    }

    /// The structural checks every twist must pass.
    pub fn check_axioms(&self) -> Vec<Check> {
        let mut out = vec![
            self.check_normalization(),
            self.check_inverse(),
            self.check_cocycle(),
            self.check_beta(),
            self.check_r_inverse(),
            self.check_r_flip(),
        ];
        out.extend(self.check_hexagons());
        out
    }
}

/// `exp(x)` for `x` of positive `nu`-valuation.
fn exp_series(lie: &LieAlgebra, x: &UeaTensor, order: u32) -> UeaTensor {
    let mut out = UeaTensor::one(lie.dim(), 2);
    let mut power = out.clone();
    for k in 1..=order {
        power = lie.tensor_mul(&power, x, Some(order)).scale(&Scalar::from_ratio(1, k as i64));
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
    }
    out
}

/// `(1 + i nu u)^{-1}` as a truncated series.
pub fn geometric_inverse(lie: &LieAlgebra, u: &Uea, order: u32) -> Uea {
    let x = u.scale(&-Scalar::i_nu());
    let mut out = lie.one();
    let mut power = lie.one();
    for _ in 0..order {
        power = lie.mul(&power, &x, Some(order));
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{Frame, PLUS, ZERO};
    use crate::scalar::Surds;

    fn sl2(order: u32) -> TwistSeries {
        let lie = Arc::new(LieAlgebra::sl2(&Surds::from_ints(2, 1)));
        let (h, e) = (lie.index_of("H").unwrap(), lie.index_of("E+").unwrap());
        TwistSeries::jordanian(lie, h, e, order).unwrap()
    }

    #[test]
    fn jordanian_low_orders() {
        let t = sl2(3);
        let lie = t.lie().clone();
        let (h, e) = (lie.named("H").unwrap(), lie.named("E+").unwrap());
        let half_i = Scalar::i().scale_rational(&rat(1, 2));
        assert_eq!(t.coefficient(1), UeaTensor::pure(&h, &e).scale(&half_i));
        assert_eq!(t.f_inv().nu_coefficient(1), UeaTensor::pure(&h, &e).scale(&-half_i.clone()));
        // beta = F_1 S(F_2): order one is -(i/2) H E
        assert_eq!(t.beta().nu_coefficient(1), lie.mul(&h, &e, None).scale(&-half_i.clone()));
        // R at order one: (i/2)(E (x) H - H (x) E)
        let r1 = UeaTensor::pure(&e, &h).sub(&UeaTensor::pure(&h, &e)).scale(&half_i);
        assert_eq!(t.r().nu_coefficient(1), r1);
    }

    #[test]
    fn jordanian_axioms() {
        let t = sl2(4);
        for c in t.check_axioms() {
            assert!(c.passed(), "{} failed: {}", c.id, c.residual);
        }
        assert!(t.check_unitary().passed());
    }

    #[test]
    fn jordanian_needs_bracket() {
        let lie = Arc::new(LieAlgebra::sl2(&Surds::unit()));
        let (h, e) = (lie.index_of("H").unwrap(), lie.index_of("E-").unwrap());
        assert!(matches!(TwistSeries::jordanian(lie, h, e, 3), Err(Error::Bracket(_))));
    }

    #[test]
    fn corrupted_coefficient_breaks_cocycle() {
        let t = sl2(3);
        let bad = t.with_coefficient(2, &UeaTensor::zero(t.lie().dim(), 2)).unwrap();
        let c = bad.check_cocycle();
        assert!(!c.passed());
        assert_eq!(c.first_failing_order, Some(2));
    }

    #[test]
    fn identity_twist_is_trivial() {
        let lie = Arc::new(LieAlgebra::sl2(&Surds::unit()));
        let t = TwistSeries::identity(lie, 3);
        assert!(t.check_axioms().iter().all(|c| c.passed()));
        assert!(t.check_unitary().passed() && t.check_real().passed());
    }

    #[test]
    fn exact_power_on_y0() {
        let s = Surds::from_ints(3, 1);
        let lie = Arc::new(LieAlgebra::sl2(&s));
        let (h, e) = (lie.index_of("H").unwrap(), lie.index_of("E+").unwrap());
        let ex = JordanianExact::new(lie, h, e).unwrap();
        let y = |i| CalcElement::x(Frame::Weight, 3, i);
        let got = ex.power_act(&rat(-1, 1), &y(ZERO)).unwrap();
        let inv_sa = Scalar::sqrt_a(&s).inverse_unit().unwrap();
        let want = &y(ZERO) - &y(PLUS).scale(&(&Scalar::i_nu() * &inv_sa));
        assert_eq!(got, want);
        assert_eq!(ex.power_act(&rat(0, 1), &y(ZERO)).unwrap(), y(ZERO));
    }

    #[test]
    fn exact_matches_truncated_pairs() {
        let t = sl2(6);
        let y = |i| CalcElement::x(Frame::Weight, 3, i);
        let a = &y(ZERO) * &y(ZERO);
        let b = &y(crate::calculus::MINUS) * &y(ZERO);
        for op in [PairOp::F, PairOp::FInv, PairOp::FInv21, PairOp::R, PairOp::RInv] {
            let sum = |pairs: Vec<(CalcElement, CalcElement)>| {
                let mut s = a.zero_like();
                for (x, y) in pairs {
                    s += &x.mul_trunc(&y, Some(6));
                }
                s
            };
            let ex = sum(t.apply2(op, &a, &b, true).unwrap()).truncate(6);
            let tr = sum(t.apply2(op, &a, &b, false).unwrap());
            assert_eq!(ex, tr, "{op:?}");
        }
    }
}
