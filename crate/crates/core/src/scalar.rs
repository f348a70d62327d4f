//! Coefficient ring: Gaussian-rational polynomials in the deformation
//! parameter `nu`, the formal surds `sqrtA`, `sqrtB` (with `sqrtA^2 = a`,
//! `sqrtB^2 = b`) and Laurent monomials in the family parameter `c`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Values of the two surd parameters `a = sqrtA^2` and `b = sqrtB^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surds {
    pub a: BigRational,
    pub b: BigRational,
}

impl Surds {
    pub fn new(a: BigRational, b: BigRational) -> Result<Arc<Self>> {
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::Config(format!("surd parameters must be positive rationals, got a={a}, b={b}")));
        }
        Ok(Arc::new(Surds { a, b }))
    }

    pub fn from_ints(a: i64, b: i64) -> Arc<Self> {
        Self::new(rat(a, 1), rat(b, 1)).expect("positive surd parameters")
    }

    /// The circular case `a = b = 1`.
    pub fn unit() -> Arc<Self> {
        static UNIT: OnceLock<Arc<Surds>> = OnceLock::new();
        UNIT.get_or_init(|| Surds::from_ints(1, 1)).clone()
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponents of a scalar monomial `nu^nu * sqrtA^s * sqrtB^t * c^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarKey {
    pub nu: u32,
    pub s: u8,
    pub t: u8,
    pub c: i32,
}

impl ScalarKey {
    pub const ONE: ScalarKey = ScalarKey { nu: 0, s: 0, t: 0, c: 0 };
}

/// `re + I*im` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }
    pub fn real(re: BigRational) -> Self {
        GaussRational { re, im: BigRational::zero() }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -&self.im }
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn scale(&self, r: &BigRational) -> Self {
        GaussRational { re: &self.re * r, im: &self.im * r }
    }
    fn add_assign(&mut self, o: &Self) {
        self.re += &o.re;
        self.im += &o.im;
    }
    fn inverse(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(GaussRational { re: &self.re / &norm, im: -&self.im / &norm })
    }
}

/// An element of `Q(i)[nu, sqrtA, sqrtB, c, 1/c]` in canonical form.
///
/// No zero coefficients are stored and surd exponents are always 0 or 1.
/// Scalars without surd terms are compatible with any [`Surds`] setting; the
/// setting is adopted from whichever operand carries one.
#[derive(Clone)]
pub struct Scalar {
    terms: BTreeMap<ScalarKey, GaussRational>,
    surds: Arc<Surds>,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new(), surds: Surds::unit() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::monomial(ScalarKey::ONE, GaussRational::real(r), Surds::unit())
    }

    pub fn from_gauss(g: GaussRational) -> Self {
        Self::monomial(ScalarKey::ONE, g, Surds::unit())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::monomial(ScalarKey::ONE, GaussRational::new(BigRational::zero(), BigRational::one()), Surds::unit())
    }

    /// The deformation parameter.
    pub fn nu() -> Self {
        Self::nu_pow(1)
    }

    pub fn nu_pow(k: u32) -> Self {
        Self::monomial(ScalarKey { nu: k, ..ScalarKey::ONE }, GaussRational::real(BigRational::one()), Surds::unit())
    }

    /// `i * nu`, the combination that appears in every Jordanian twist.
    pub fn i_nu() -> Self {
        &Self::i() * &Self::nu()
    }

    pub fn sqrt_a(surds: &Arc<Surds>) -> Self {
        Self::monomial(ScalarKey { s: 1, ..ScalarKey::ONE }, GaussRational::real(BigRational::one()), surds.clone())
    }

    pub fn sqrt_b(surds: &Arc<Surds>) -> Self {
        Self::monomial(ScalarKey { t: 1, ..ScalarKey::ONE }, GaussRational::real(BigRational::one()), surds.clone())
    }

    /// `a` as a plain rational scalar.
    pub fn a(surds: &Arc<Surds>) -> Self {
        Self::from_rational(surds.a.clone())
    }

    pub fn b(surds: &Arc<Surds>) -> Self {
        Self::from_rational(surds.b.clone())
    }

    /// The symbolic family parameter `c` raised to an integer power.
    pub fn c_pow(k: i32) -> Self {
        Self::monomial(ScalarKey { c: k, ..ScalarKey::ONE }, GaussRational::real(BigRational::one()), Surds::unit())
    }

    pub fn monomial(key: ScalarKey, coeff: GaussRational, surds: Arc<Surds>) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(key, coeff);
        }
        let mut s = Scalar { terms, surds };
        s.normalize_surds();
        s
    }

    pub fn surds(&self) -> &Arc<Surds> {
        &self.surds
    }

    fn has_surd_terms(&self) -> bool {
        self.terms.keys().any(|k| k.s > 0 || k.t > 0)
    }

    fn normalize_surds(&mut self) {
        if !self.terms.keys().any(|k| k.s > 1 || k.t > 1) {
            return;
        }
        let old = std::mem::take(&mut self.terms);
        for (k, v) in old {
            let mut v = v;
            let mut key = k;
            while key.s >= 2 {
                key.s -= 2;
                v = v.scale(&self.surds.a);
            }
            while key.t >= 2 {
                key.t -= 2;
                v = v.scale(&self.surds.b);
            }
            accumulate(&mut self.terms, key, &v);
        }
    }

    fn merged_surds(&self, other: &Scalar) -> Arc<Surds> {
        if Arc::ptr_eq(&self.surds, &other.surds) {
            return self.surds.clone();
        }
        match (self.has_surd_terms(), other.has_surd_terms()) {
            (true, true) => {
                assert!(*self.surds == *other.surds, "scalars built with different surd parameters were combined");
                self.surds.clone()
            }
            (true, false) => self.surds.clone(),
            (false, true) => other.surds.clone(),
            (false, false) => {
                if *self.surds != *Surds::unit() {
                    self.surds.clone()
                } else {
                    other.surds.clone()
                }
            }
        }
    }

    /// Replace `sqrtA`, `sqrtB` by rational roots where `a`, `b` are rational
    /// squares; other surds stay formal.
    pub fn resolve_surds(&self) -> Scalar {
        let ra = rational_sqrt(&self.surds.a);
        let rb = rational_sqrt(&self.surds.b);
        if ra.is_none() && rb.is_none() || !self.has_surd_terms() {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let mut key = *k;
            let mut v = v.clone();
            if let (1, Some(r)) = (key.s, &ra) {
                key.s = 0;
                v = v.scale(r);
            }
            if let (1, Some(r)) = (key.t, &rb) {
                key.t = 0;
                v = v.scale(r);
            }
            accumulate(&mut terms, key, &v);
        }
        Scalar { terms, surds: self.surds.clone() }
    }

    /// Re-home a scalar onto explicit surd parameters.
    pub fn with_surds(mut self, surds: &Arc<Surds>) -> Self {
        if self.has_surd_terms() {
            assert!(*self.surds == **surds, "surd parameter mismatch");
        }
        self.surds = surds.clone();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&ScalarKey::ONE).map(|g| g.re.is_one() && g.im.is_zero()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ScalarKey, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Complex conjugation: `I -> -I`, with `nu`, the surds and `c` real.
    pub fn conj(&self) -> Self {
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect(), surds: self.surds.clone() }
    }

    /// Drop every term of `nu`-order above `order`.
    pub fn truncate(&self, order: u32) -> Self {
        Scalar {
            terms: self.terms.iter().filter(|(k, _)| k.nu <= order).map(|(k, v)| (*k, v.clone())).collect(),
            surds: self.surds.clone(),
        }
    }

    /// Coefficient of `nu^k`, as a `nu`-free scalar.
    pub fn nu_coefficient(&self, k: u32) -> Self {
        Scalar {
            terms: self
                .terms
                .iter()
                .filter(|(key, _)| key.nu == k)
                .map(|(key, v)| (ScalarKey { nu: 0, ..*key }, v.clone()))
                .collect(),
            surds: self.surds.clone(),
        }
    }

    /// Highest power of `nu` present, `None` for zero.
    pub fn nu_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.nu).max()
    }

    /// Lowest power of `nu` present, `None` for zero.
    pub fn nu_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.nu).min()
    }

    /// Evaluate at `nu = 0`.
    pub fn classical(&self) -> Self {
        self.nu_coefficient(0)
    }

    /// Multiply by `nu^k`.
    pub fn shift_nu(&self, k: u32) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(key, v)| (ScalarKey { nu: key.nu + k, ..*key }, v.clone())).collect(),
            surds: self.surds.clone(),
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Scalar { terms: BTreeMap::new(), surds: self.surds.clone() };
        }
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, v.scale(r))).collect(), surds: self.surds.clone() }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale_rational(&BigRational::from_integer(n.clone()))
    }

    /// Product followed by truncation, skipping terms above `order` early.
    pub fn mul_truncated(&self, other: &Scalar, order: Option<u32>) -> Scalar {
        let surds = self.merged_surds(other);
        let mut terms = BTreeMap::new();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let nu = k1.nu + k2.nu;
                if let Some(n) = order {
                    if nu > n {
                        continue;
                    }
                }
                let mut key = ScalarKey { nu, s: k1.s + k2.s, t: k1.t + k2.t, c: k1.c + k2.c };
                let mut v = v1.mul(v2);
                if key.s >= 2 {
                    key.s -= 2;
                    v = v.scale(&surds.a);
                }
                if key.t >= 2 {
                    key.t -= 2;
                    v = v.scale(&surds.b);
                }
                accumulate(&mut terms, key, &v);
            }
        }
        Scalar { terms, surds }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one().with_surds(&self.surds);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit monomial (single `nu`-free term). Surds invert as
    /// `1/sqrtA = sqrtA/a`.
    pub fn inverse_unit(&self) -> Option<Scalar> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, v) = self.terms.iter().next().unwrap();
        if k.nu != 0 {
            return None;
        }
        let mut inv = v.inverse()?;
        if k.s == 1 {
            inv = inv.scale(&(BigRational::one() / &self.surds.a));
        }
        if k.t == 1 {
            inv = inv.scale(&(BigRational::one() / &self.surds.b));
        }
        let key = ScalarKey { nu: 0, s: k.s, t: k.t, c: -k.c };
        Some(Scalar::monomial(key, inv, self.surds.clone()))
    }

    /// `Some(r)` when the scalar is a plain rational (possibly zero).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (k, v) = self.terms.iter().next().unwrap();
                (*k == ScalarKey::ONE && v.im.is_zero()).then(|| v.re.clone())
            }
            _ => None,
        }
    }

    /// Split into printable atoms: `(key, rational, imaginary?)`.
    pub fn atoms(&self) -> Vec<(ScalarKey, BigRational, bool)> {
        let mut out = Vec::new();
        for (k, v) in &self.terms {
            if !v.re.is_zero() {
                out.push((*k, v.re.clone(), false));
            }
            if !v.im.is_zero() {
                out.push((*k, v.im.clone(), true));
            }
        }
        out
    }
}

fn accumulate(terms: &mut BTreeMap<ScalarKey, GaussRational>, key: ScalarKey, v: &GaussRational) {
    if v.is_zero() {
        return;
    }
    match terms.get_mut(&key) {
        Some(cur) => {
            cur.add_assign(v);
            if cur.is_zero() {
                terms.remove(&key);
            }
        }
        None => {
            terms.insert(key, v.clone());
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.surds = self.merged_surds(rhs);
        for (k, v) in &rhs.terms {
            accumulate(&mut self.terms, *k, v);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self += &(-rhs);
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, v)| (*k, GaussRational::new(-&v.re, -&v.im))).collect(),
            surds: self.surds.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_truncated(rhs, None)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render the non-rational part of an atom, e.g. `I*nu^2*sqrtA*c^-1`.
pub(crate) fn fmt_atom_symbols(k: &ScalarKey, imaginary: bool) -> Vec<String> {
    let mut parts = Vec::new();
    if imaginary {
        parts.push("I".to_string());
    }
    match k.nu {
        0 => {}
        1 => parts.push("nu".into()),
        n => parts.push(format!("nu^{n}")),
    }
    if k.s == 1 {
        parts.push("sqrtA".into());
    }
    if k.t == 1 {
        parts.push("sqrtB".into());
    }
    match k.c {
        0 => {}
        1 => parts.push("c".into()),
        n => parts.push(format!("c^{n}")),
    }
    parts
}

/// Render one atom times an optional trailing factor, returning the sign
/// separately so callers can join summands with ` + ` / ` - `.
pub(crate) fn fmt_atom(k: &ScalarKey, r: &BigRational, imaginary: bool, tail: Option<&str>) -> (bool, String) {
    let negative = r.is_negative();
    let mag = r.abs();
    let mut parts = Vec::new();
    let symbols = fmt_atom_symbols(k, imaginary);
    let bare = symbols.is_empty() && tail.is_none();
    if !mag.is_one() || bare {
        parts.push(fmt_rational(&mag));
    }
    parts.extend(symbols);
    if let Some(t) = tail {
        parts.push(t.to_string());
    }
    (negative, parts.join("*"))
}

pub(crate) fn join_signed(items: Vec<(bool, String)>) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (neg, body)) in items.into_iter().enumerate() {
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self.atoms().iter().map(|(k, r, im)| fmt_atom(k, r, *im, None)).collect();
        f.write_str(&join_signed(items))
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_identity_and_inverse() {
        let x = &Scalar::nu() * &Scalar::from_int(3) + Scalar::i();
        assert_eq!(&Scalar::zero() + &x, x);
        let inu = Scalar::i_nu();
        assert!((&inu + &(-&inu)).is_zero());
    }

    #[test]
    fn like_terms_combine() {
        let s = Surds::unit();
        let nus = &Scalar::nu() * &Scalar::sqrt_a(&s);
        let two = &nus + &nus;
        assert_eq!(two, &Scalar::from_int(2) * &nus);
        assert_eq!(two.len(), 1);
    }

    #[test]
    fn surd_reduction() {
        let s = Surds::unit();
        assert!((&Scalar::sqrt_a(&s) * &Scalar::sqrt_a(&s)).is_one());
        let s3 = Surds::from_ints(3, 5);
        assert_eq!(&Scalar::sqrt_a(&s3) * &Scalar::sqrt_a(&s3), Scalar::from_int(3));
        assert_eq!(&Scalar::sqrt_b(&s3) * &Scalar::sqrt_b(&s3), Scalar::from_int(5));
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        let inu = Scalar::i_nu();
        let v = &(&inu * &inu) * &Scalar::from_int(2);
        assert_eq!(v, &Scalar::nu_pow(2) * &Scalar::from_int(-2));
    }

    #[test]
    fn conjugation() {
        assert_eq!(Scalar::i().conj(), -Scalar::i());
        let s = Surds::from_ints(2, 1);
        let x = &(&Scalar::from_int(2) * &Scalar::i_nu()) * &Scalar::sqrt_a(&s);
        assert_eq!(x.conj(), -&x);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn truncation() {
        let x = &Scalar::one() + &Scalar::nu_pow(3);
        assert!(x.truncate(2).is_one());
        let y = &Scalar::from_int(2) * &Scalar::nu_pow(2);
        assert_eq!(y.truncate(2), y);
        assert_eq!(x.truncate(2).truncate(2), x.truncate(2));
    }

    #[test]
    fn unit_inverse() {
        let s = Surds::from_ints(2, 3);
        let x = &(&Scalar::from_ratio(3, 4) * &Scalar::sqrt_a(&s)) * &Scalar::c_pow(2);
        let inv = x.inverse_unit().unwrap();
        assert!((&x * &inv).is_one());
        assert!(Scalar::nu().inverse_unit().is_none());
    }

    #[test]
    fn display() {
        let s = Surds::unit();
        let x = &(&Scalar::from_int(2) * &Scalar::i_nu()) * &Scalar::sqrt_a(&s);
        assert_eq!(x.to_string(), "2*I*nu*sqrtA");
        assert_eq!(Scalar::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::zero().to_string(), "0");
    }
}

#[cfg(test)]
pub(crate) mod proptests {
    use super::*;
    use proptest::prelude::*;

    /// Sums of up to three terms `p/q nu^k I^e c^m sqrtA^s` over `a = 2, b = 3`.
    pub(crate) fn scalar() -> impl Strategy<Value = Scalar> {
        let term = (-3i64..=3, 1i64..=3, 0u32..=2, any::<bool>(), -1i32..=1, any::<bool>());
        prop::collection::vec(term, 0..4).prop_map(|terms| {
            let s = Surds::from_ints(2, 3);
            let mut out = Scalar::zero();
            for (n, d, nu, i, c, sa) in terms {
                let mut t = &Scalar::from_ratio(n, d) * &Scalar::nu().pow(nu);
                if i {
                    t = &t * &Scalar::i();
                }
                t = &t * &Scalar::c_pow(c);
                if sa {
                    t = &t * &Scalar::sqrt_a(&s);
                }
                out += &t;
            }
            out
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in scalar(), b in scalar(), c in scalar()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a * &Scalar::one(), a.clone());
        }

        #[test]
        fn sqrt_a_squares_to_a(a in scalar()) {
            let ra = Scalar::sqrt_a(&Surds::from_ints(2, 3));
            prop_assert_eq!(&(&a * &ra) * &ra, &a * &Scalar::from_int(2));
        }
    }
}
