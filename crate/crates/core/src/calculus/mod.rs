//! The differential calculus algebra of R^n: coordinates `x^i`, one-forms
//! `xi^i` and partial derivatives `d_i`, with `d_i x^j = x^j d_i + delta`,
//! anticommuting forms, and everything else commuting.
//!
//! Elements are kept in the normal order forms, then coordinates, then
//! derivatives. The weight frame for n = 3 uses the same relations with the
//! generators renamed (`y+ y- y0`, `eta+ eta- eta0`, `d+ d- d0`); index 0 is
//! `+`, 1 is `-` and 2 is `0`.

mod frame;

pub use frame::{change_frame, generator_image, GenKind};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 6;

/// Weight-frame index of `y+`, `eta+`, `d+`.
pub const PLUS: usize = 0;
/// Weight-frame index of `y-`, `eta-`, `d-`.
pub const MINUS: usize = 1;
/// Weight-frame index of `y0`, `eta0`, `d0`.
pub const ZERO: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    Cartesian,
    Weight,
}

/// A basis element `xi^p x^q d^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub xi: u8,
    pub x: [u16; MAX_DIM],
    pub d: [u16; MAX_DIM],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { xi: 0, x: [0; MAX_DIM], d: [0; MAX_DIM] };

    pub fn x_gen(i: usize) -> Self {
        let mut m = Self::ONE;
        m.x[i] = 1;
        m
    }

    pub fn xi_gen(i: usize) -> Self {
        Monomial { xi: 1 << i, ..Self::ONE }
    }

    pub fn d_gen(i: usize) -> Self {
        let mut m = Self::ONE;
        m.d[i] = 1;
        m
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::ONE
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi.count_ones()
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum()
    }

    pub fn d_degree(&self) -> u32 {
        self.d.iter().map(|&e| e as u32).sum()
    }

    pub fn degree(&self) -> u32 {
        self.xi_degree() + self.x_degree() + self.d_degree()
    }

    /// The `(natural, sharp)` grading: form degree and `q - r`.
    pub fn grade(&self) -> (u32, i64) {
        (self.xi_degree(), self.x_degree() as i64 - self.d_degree() as i64)
    }

    pub fn xi_indices(&self) -> Vec<usize> {
        (0..MAX_DIM).filter(|i| self.xi & (1 << i) != 0).collect()
    }

    pub fn with_x(&self, x: [u16; MAX_DIM]) -> Self {
        Monomial { x, ..*self }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.x.cmp(&self.x))
            .then_with(|| other.xi.reverse_bits().cmp(&self.xi.reverse_bits()))
            .then_with(|| other.d.cmp(&self.d))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of `xi^a xi^b` brought to ascending order, `None` if they overlap.
pub(crate) fn xi_merge_sign(a: u8, b: u8) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for j in 0..8 {
        if b & (1 << j) != 0 {
            swaps += (a >> (j + 1)).count_ones();
        }
    }
    Some(swaps % 2 == 1)
}

/// Sign of an arbitrary word of one-form indices brought to ascending order.
pub(crate) fn xi_word_sign(word: &[usize]) -> Option<(u8, bool)> {
    let mut mask = 0u8;
    let mut negative = false;
    for &i in word {
        let neg = xi_merge_sign(mask, 1 << i)?;
        negative ^= neg;
        mask |= 1 << i;
    }
    Some((mask, negative))
}

fn falling(q: u16, k: u16) -> i128 {
    (0..k).map(|t| (q - t) as i128).product()
}

fn binom(n: u16, k: u16) -> i128 {
    let mut acc: i128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as i128 / (t + 1) as i128;
    }
    acc
}

/// Product of two basis monomials, expanded in the basis.
pub fn mul_monomials(a: &Monomial, b: &Monomial, n: usize) -> Vec<(Monomial, i128)> {
    let negative = match xi_merge_sign(a.xi, b.xi) {
        Some(s) => s,
        None => return Vec::new(),
    };
    let sign: i128 = if negative { -1 } else { 1 };
    let xi = a.xi | b.xi;
    let mut limits = [0u16; MAX_DIM];
    for i in 0..n {
        limits[i] = a.d[i].min(b.x[i]);
    }
    let mut out = Vec::new();
    let mut k = [0u16; MAX_DIM];
    loop {
        let mut coeff = sign;
        let mut m = Monomial { xi, ..Monomial::ONE };
        for i in 0..n {
            coeff *= binom(a.d[i], k[i]) * falling(b.x[i], k[i]);
            m.x[i] = a.x[i] + b.x[i] - k[i];
            m.d[i] = a.d[i] - k[i] + b.d[i];
        }
        out.push((m, coeff));
        // odometer over k
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            if k[pos] < limits[pos] {
                k[pos] += 1;
                break;
            }
            k[pos] = 0;
            pos += 1;
        }
    }
}

/// An element of the calculus algebra in normal order.
#[derive(Clone, PartialEq, Eq)]
pub struct CalcElement {
    frame: Frame,
    n: u8,
    terms: BTreeMap<Monomial, Scalar>,
}

impl std::fmt::Debug for CalcElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CalcElement[{:?}, n={}]({})", self.frame, self.n, self)
    }
}

impl CalcElement {
    pub fn zero(frame: Frame, n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        assert!(frame == Frame::Cartesian || n == 3, "weight frame needs n = 3");
        CalcElement { frame, n: n as u8, terms: BTreeMap::new() }
    }

    pub fn monomial(frame: Frame, n: usize, m: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero(frame, n);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn scalar(frame: Frame, n: usize, c: Scalar) -> Self {
        Self::monomial(frame, n, Monomial::ONE, c)
    }

    pub fn one(frame: Frame, n: usize) -> Self {
        Self::scalar(frame, n, Scalar::one())
    }

    pub fn x(frame: Frame, n: usize, i: usize) -> Self {
        Self::monomial(frame, n, Monomial::x_gen(i), Scalar::one())
    }

    pub fn xi(frame: Frame, n: usize, i: usize) -> Self {
        Self::monomial(frame, n, Monomial::xi_gen(i), Scalar::one())
    }

    pub fn d(frame: Frame, n: usize, i: usize) -> Self {
        Self::monomial(frame, n, Monomial::d_gen(i), Scalar::one())
    }

    pub fn from_terms(frame: Frame, n: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut e = Self::zero(frame, n);
        for (m, c) in terms {
            e.add_term(m, &c);
        }
        e
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.frame, self.dim())
    }

    pub fn one_like(&self) -> Self {
        Self::one(self.frame, self.dim())
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn check_compatible(&self, other: &CalcElement) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::Frame(format!("{:?} vs {:?}", self.frame, other.frame)));
        }
        if self.n != other.n {
            return Err(Error::Dimension(format!("{} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    /// Normal-ordered product, optionally dropping `nu`-orders above `order`.
    pub fn try_mul(&self, other: &CalcElement, order: Option<u32>) -> Result<CalcElement> {
        self.check_compatible(other)?;
        let n = self.dim();
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = mul_monomials(m1, m2, n);
                if prod.is_empty() {
                    continue;
                }
                let c = c1.mul_truncated(c2, order);
                if c.is_zero() {
                    continue;
                }
                for (m, k) in prod {
                    let term = if k == 1 { c.clone() } else { c.scale_int(&BigInt::from(k)) };
                    match acc.get_mut(&m) {
                        Some(cur) => *cur += &term,
                        None => {
                            acc.insert(m, term);
                        }
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(CalcElement { frame: self.frame, n: self.n, terms: acc })
    }

    pub fn mul_trunc(&self, other: &CalcElement, order: Option<u32>) -> CalcElement {
        self.try_mul(other, order).expect("incompatible calculus elements")
    }

    /// Plain commutator `ab - ba`.
    pub fn commutator(&self, other: &CalcElement) -> CalcElement {
        self * other - other * self
    }

    pub fn scale(&self, c: &Scalar) -> CalcElement {
        if c.is_zero() {
            return self.zero_like();
        }
        let mut out = self.zero_like();
        for (m, v) in &self.terms {
            out.add_term(*m, &(v * c));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> CalcElement {
        let mut out = self.zero_like();
        for (m, v) in &self.terms {
            out.add_term(*m, &v.scale_rational(r));
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> CalcElement {
        let mut out = self.zero_like();
        for (m, v) in &self.terms {
            out.add_term(*m, &f(v));
        }
        out
    }

    pub fn truncate(&self, order: u32) -> CalcElement {
        self.map_coefficients(|c| c.truncate(order))
    }

    pub fn nu_coefficient(&self, k: u32) -> CalcElement {
        self.map_coefficients(|c| c.nu_coefficient(k))
    }

    /// The `nu = 0` limit.
    pub fn classical(&self) -> CalcElement {
        self.nu_coefficient(0)
    }

    pub fn nu_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(|c| c.nu_degree()).max()
    }

    /// The undeformed involution: coefficients conjugated, `x`, `xi`
    /// Hermitian, `d` anti-Hermitian, order reversed.
    pub fn involution(&self) -> CalcElement {
        let n = self.dim();
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            // (xi^p x^q d^r)^* = (-1)^{|r|} d^r x^q (xi^p reversed)
            let p = m.xi_degree();
            let mut negative = m.d_degree() % 2 == 1;
            negative ^= (p * p.saturating_sub(1) / 2) % 2 == 1;
            let dpart = Monomial { d: m.d, ..Monomial::ONE };
            let xpart = Monomial { x: m.x, ..Monomial::ONE };
            let xipart = Monomial { xi: m.xi, ..Monomial::ONE };
            let cc = if negative { -c.conj() } else { c.conj() };
            for (m1, k1) in mul_monomials(&dpart, &xpart, n) {
                for (m2, k2) in mul_monomials(&xipart, &m1, n) {
                    out.add_term(m2, &cc.scale_int(&BigInt::from(k1 * k2)));
                }
            }
        }
        out
    }

    /// All `(natural, sharp)` gradings present.
    pub fn grades(&self) -> BTreeSet<(u32, i64)> {
        self.terms.keys().map(|m| m.grade()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_function(&self) -> bool {
        self.terms.keys().all(|m| m.xi == 0 && m.d_degree() == 0)
    }

    /// Coefficient functions `X^i` when the element is `sum_i X^i d_i`.
    pub fn vector_components(&self) -> Option<Vec<CalcElement>> {
        let n = self.dim();
        let mut comps = vec![self.zero_like(); n];
        for (m, c) in &self.terms {
            if m.xi != 0 || m.d_degree() != 1 {
                return None;
            }
            let i = (0..n).find(|&i| m.d[i] == 1)?;
            comps[i].add_term(Monomial { d: [0; MAX_DIM], ..*m }, c);
        }
        Some(comps)
    }

    pub fn is_vector_field(&self) -> bool {
        self.vector_components().is_some()
    }

    /// `sum_i comps[i] d_i` for coefficient functions `comps`.
    pub fn from_vector_components(frame: Frame, n: usize, comps: &[CalcElement]) -> CalcElement {
        let mut out = Self::zero(frame, n);
        for (i, f) in comps.iter().enumerate() {
            for (m, c) in &f.terms {
                let mut m = *m;
                m.d[i] += 1;
                out.add_term(m, c);
            }
        }
        out
    }

    /// Coefficient functions `w_i` when the element is `sum_i xi^i w_i`.
    pub fn form_components(&self) -> Option<Vec<CalcElement>> {
        let n = self.dim();
        let mut comps = vec![self.zero_like(); n];
        for (m, c) in &self.terms {
            if m.xi_degree() != 1 || m.d_degree() != 0 {
                return None;
            }
            let i = m.xi.trailing_zeros() as usize;
            comps[i].add_term(Monomial { xi: 0, ..*m }, c);
        }
        Some(comps)
    }

    /// Keep only the terms of derivative degree `r`.
    pub fn d_degree_part(&self, r: u32) -> CalcElement {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            if m.d_degree() == r {
                out.add_term(*m, c);
            }
        }
        out
    }

    /// Keep only the terms of form degree `p`.
    pub fn xi_degree_part(&self, p: u32) -> CalcElement {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            if m.xi_degree() == p {
                out.add_term(*m, c);
            }
        }
        out
    }

    /// Form degree when homogeneous.
    pub fn form_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.xi_degree());
        let first = it.next().unwrap_or(0);
        it.all(|p| p == first).then_some(first)
    }

    /// Pointwise evaluation of a function-valued element's terms into a map,
    /// used by golden comparisons.
    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }
}

impl<'a> Add<&'a CalcElement> for &'a CalcElement {
    type Output = CalcElement;
    fn add(self, rhs: &CalcElement) -> CalcElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for CalcElement {
    type Output = CalcElement;
    fn add(mut self, rhs: CalcElement) -> CalcElement {
        self += &rhs;
        self
    }
}

impl AddAssign<&CalcElement> for CalcElement {
    fn add_assign(&mut self, rhs: &CalcElement) {
        self.check_compatible(rhs).expect("incompatible calculus elements");
        for (m, c) in &rhs.terms {
            self.add_term(*m, c);
        }
    }
}

impl AddAssign for CalcElement {
    fn add_assign(&mut self, rhs: CalcElement) {
        *self += &rhs;
    }
}

impl SubAssign<&CalcElement> for CalcElement {
    fn sub_assign(&mut self, rhs: &CalcElement) {
        self.check_compatible(rhs).expect("incompatible calculus elements");
        for (m, c) in &rhs.terms {
            self.add_term(*m, &-c);
        }
    }
}

impl<'a> Sub<&'a CalcElement> for &'a CalcElement {
    type Output = CalcElement;
    fn sub(self, rhs: &CalcElement) -> CalcElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for CalcElement {
    type Output = CalcElement;
    fn sub(mut self, rhs: CalcElement) -> CalcElement {
        self -= &rhs;
        self
    }
}

impl Neg for &CalcElement {
    type Output = CalcElement;
    fn neg(self) -> CalcElement {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for CalcElement {
    type Output = CalcElement;
    fn neg(self) -> CalcElement {
        -&self
    }
}

impl<'a> Mul<&'a CalcElement> for &'a CalcElement {
    type Output = CalcElement;
    fn mul(self, rhs: &CalcElement) -> CalcElement {
        self.mul_trunc(rhs, None)
    }
}

impl Mul for CalcElement {
    type Output = CalcElement;
    fn mul(self, rhs: CalcElement) -> CalcElement {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cart(n: usize) -> impl Fn(&str, usize) -> CalcElement {
        move |kind, i| match kind {
            "x" => CalcElement::x(Frame::Cartesian, n, i),
            "xi" => CalcElement::xi(Frame::Cartesian, n, i),
            _ => CalcElement::d(Frame::Cartesian, n, i),
        }
    }

    #[test]
    fn heisenberg_relation() {
        let g = cart(3);
        let lhs = &g("d", 0) * &g("x", 0);
        let mut m = Monomial::x_gen(0);
        m.d[0] = 1;
        let expected =
            CalcElement::from_terms(Frame::Cartesian, 3, [(m, Scalar::one()), (Monomial::ONE, Scalar::one())]);
        assert_eq!(lhs, expected);
        // different indices commute
        assert_eq!(&g("d", 0) * &g("x", 1), &g("x", 1) * &g("d", 0));
    }

    #[test]
    fn forms_anticommute() {
        let g = cart(3);
        assert!((&g("xi", 0) * &g("xi", 0)).is_zero());
        let a = &g("xi", 0) * &g("xi", 1);
        let b = &g("xi", 1) * &g("xi", 0);
        assert_eq!(a, -b);
    }

    #[test]
    fn double_derivative_on_product() {
        // d1 d2 x1 x2 = x1 x2 d1 d2 + x1 d1 + x2 d2 + 1
        let g = cart(3);
        let lhs = &(&g("d", 0) * &g("d", 1)) * &(&g("x", 0) * &g("x", 1));
        assert_eq!(lhs.len(), 4);
        // oracle: d_i x_i = x_i d_i + 1 applied once per index
        let x1 = g("x", 0);
        let x2 = g("x", 1);
        let d1 = g("d", 0);
        let d2 = g("d", 1);
        let one = CalcElement::one(Frame::Cartesian, 3);
        let expected = &(&(&(&x1 * &x2) * &(&d1 * &d2)) + &(&x1 * &d1)) + &(&(&x2 * &d2) + &one);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn unit_is_two_sided() {
        let g = cart(2);
        let one = CalcElement::one(Frame::Cartesian, 2);
        for e in [g("x", 0), g("xi", 1), g("d", 1)] {
            assert_eq!(&one * &e, e);
            assert_eq!(&e * &one, e);
        }
    }

    #[test]
    fn involution_on_generators() {
        let g = cart(3);
        assert_eq!(g("x", 0).involution(), g("x", 0));
        assert_eq!(g("xi", 2).involution(), g("xi", 2));
        assert_eq!(g("d", 0).involution(), -g("d", 0));
        // (d1 x1)^* = x1^* d1^* = -x1 d1
        let a = &g("d", 0) * &g("x", 0);
        assert_eq!(a.involution(), -(&g("x", 0) * &g("d", 0)));
        assert_eq!(a.involution().involution(), a);
    }

    #[test]
    fn gradings() {
        let g = cart(3);
        let e = &(&g("xi", 0) * &g("x", 1)) * &g("d", 2);
        assert_eq!(e.grades().into_iter().collect::<Vec<_>>(), vec![(1, 0)]);
        let one = CalcElement::one(Frame::Cartesian, 3);
        assert_eq!(one.grades().into_iter().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn vector_field_components_round_trip() {
        let g = cart(3);
        let v = &(&g("x", 0) * &g("d", 1)) - &(&g("x", 1) * &g("d", 0));
        let comps = v.vector_components().unwrap();
        assert_eq!(CalcElement::from_vector_components(Frame::Cartesian, 3, &comps), v);
        assert!(g("xi", 0).vector_components().is_none());
    }
}
