//! Exact evaluation of the Jordanian twist legs on polynomial elements.
//!
//! `H` acts diagonally on every generator, so a leg `H^m` acting on a
//! weight-`l` component is multiplication by `l^m`. The sums over `m` then
//! collapse to powers `(1 + i nu E)^s`, which terminate because `E` raises
//! the weight of a fixed-degree polynomial.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::calculus::{CalcElement, Monomial};
use crate::error::{Error, Result};
use crate::hopf::LieAlgebra;
use crate::scalar::Scalar;

/// Upper bound on the number of `E` applications in one power series.
const NILPOTENCY_GUARD: usize = 4096;

#[derive(Clone, Debug)]
pub struct JordanianExact {
    lie: Arc<LieAlgebra>,
    e: usize,
    /// `H`-weight of `x^j` (and of `xi^j`); `d_j` carries the opposite.
    weights: Vec<i64>,
}

impl JordanianExact {
    pub fn new(lie: Arc<LieAlgebra>, h: usize, e: usize) -> Result<Self> {
        let t = lie.tau(h);
        let n = lie.ambient_dim();
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            if !t.shift[j].is_zero() || (0..n).any(|i| i != j && !t.lin[i][j].is_zero()) {
                return Err(Error::Unsupported("exact Jordanian mode needs H to act diagonally".into()));
            }
            let w = t.lin[j][j]
                .as_rational()
                .filter(|r| r.is_integer())
                .ok_or_else(|| Error::Unsupported("exact Jordanian mode needs integer H-weights".into()))?;
            weights.push(i64::try_from(w.to_integer()).map_err(|_| Error::Unsupported("weight overflow".into()))?);
        }
        Ok(JordanianExact { lie, e, weights })
    }

    pub fn weight(&self, m: &Monomial) -> i64 {
        let n = self.weights.len();
        let mut w = 0i64;
        for j in 0..n {
            w += self.weights[j] * (m.x[j] as i64 - m.d[j] as i64);
            if m.xi & (1 << j) != 0 {
                w += self.weights[j];
            }
        }
        w
    }

    /// Split into `H`-eigencomponents.
    pub fn weight_components(&self, a: &CalcElement) -> BTreeMap<i64, CalcElement> {
        let mut out: BTreeMap<i64, CalcElement> = BTreeMap::new();
        for (m, c) in a.terms() {
            out.entry(self.weight(m)).or_insert_with(|| a.zero_like()).add_term(*m, c);
        }
        out
    }

    /// `(1 + i nu E)^s |> a` for rational `s`, as an exact polynomial in `nu`.
    pub fn power_act(&self, s: &BigRational, a: &CalcElement) -> Result<CalcElement> {
        if s.is_zero() {
            return Ok(a.clone());
        }
        let mut out = a.clone();
        let mut term = a.clone();
        let mut binom = BigRational::one();
        for k in 0..NILPOTENCY_GUARD {
            term = self.lie.act_gen(self.e, &term);
            if term.is_zero() {
                return Ok(out);
            }
            let kk = BigRational::from_integer(BigInt::from(k));
            binom = binom * (s - &kk) / (kk + BigRational::one());
            if binom.is_zero() {
                return Ok(out);
            }
            let coeff = Scalar::from_rational(binom.clone()).mul_truncated(&Scalar::i_nu().pow(k as u32 + 1), None);
            out += &term.scale(&coeff);
        }
        Err(Error::Unsupported("E does not act nilpotently on this element".into()))
    }

    fn half(l: i64) -> BigRational {
        BigRational::new(BigInt::from(l), BigInt::from(2))
    }

    /// `sum_l a_l (x) (1 + i nu E)^{sign l/2} |> b`.
    pub fn right_leg(&self, sign: i64, a: &CalcElement, b: &CalcElement) -> Result<Vec<(CalcElement, CalcElement)>> {
        self.weight_components(a)
            .into_iter()
            .map(|(l, al)| Ok((al, self.power_act(&Self::half(sign * l), b)?)))
            .collect()
    }

    /// `sum_l (1 + i nu E)^{sign l/2} |> a (x) b_l`.
    pub fn left_leg(&self, sign: i64, a: &CalcElement, b: &CalcElement) -> Result<Vec<(CalcElement, CalcElement)>> {
        self.weight_components(b)
            .into_iter()
            .map(|(l, bl)| Ok((self.power_act(&Self::half(sign * l), a)?, bl)))
            .collect()
    }

    /// `S(beta) |> a`: weight-`l` components pick up `(1 + i nu E)^{-l/2}`.
    pub fn s_beta_act(&self, a: &CalcElement) -> Result<CalcElement> {
        let mut out = a.zero_like();
        for (l, al) in self.weight_components(a) {
            out += &self.power_act(&Self::half(-l), &al)?;
        }
        Ok(out)
    }

    /// `beta |> a = sum_k C((l+2k)/2, k) (-i nu)^k E^k |> a_l`.
    pub fn beta_act(&self, a: &CalcElement) -> Result<CalcElement> {
        let mut out = a.zero_like();
        let minus_i_nu = -Scalar::i_nu();
        for (l, al) in self.weight_components(a) {
            out += &al;
            let mut term = al;
            for k in 1..NILPOTENCY_GUARD {
                term = self.lie.act_gen(self.e, &term);
                if term.is_zero() {
                    break;
                }
                if k + 1 == NILPOTENCY_GUARD {
                    return Err(Error::Unsupported("E does not act nilpotently on this element".into()));
                }
                let s = Self::half(l + 2 * k as i64);
                let mut binom = BigRational::one();
                for j in 0..k {
                    let jj = BigRational::from_integer(BigInt::from(j));
                    binom = binom * (&s - &jj) / (jj + BigRational::one());
                }
                let coeff = Scalar::from_rational(binom).mul_truncated(&minus_i_nu.pow(k as u32), None);
                out += &term.scale(&coeff);
            }
        }
        Ok(out)
    }
}
