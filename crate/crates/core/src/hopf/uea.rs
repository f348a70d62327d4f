//! Elements of the enveloping algebra and of its tensor powers, stored in
//! PBW normal form. Multiplication needs the structure constants and is
//! therefore provided by [`LieAlgebra`](super::LieAlgebra).

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// Exponent vector over the ordered basis: `e_1^{k_1} e_2^{k_2} ...`.
pub type Pbw = Vec<u16>;

pub fn pbw_degree(m: &Pbw) -> u32 {
    m.iter().map(|&k| k as u32).sum()
}

/// The basis word of a PBW monomial, lowest index first.
pub fn pbw_word(m: &Pbw) -> Vec<usize> {
    let mut w = Vec::new();
    for (a, &k) in m.iter().enumerate() {
        for _ in 0..k {
            w.push(a);
        }
    }
    w
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Uea {
    dim: usize,
    terms: BTreeMap<Pbw, Scalar>,
}

impl Uea {
    pub fn zero(dim: usize) -> Self {
        Uea { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], Scalar::one())
    }

    pub fn monomial(m: Pbw, c: Scalar) -> Self {
        let mut u = Uea::zero(m.len());
        u.add_term(m, &c);
        u
    }

    /// The basis element `e_a`.
    pub fn gen(dim: usize, a: usize) -> Self {
        let mut m = vec![0; dim];
        m[a] = 1;
        Self::monomial(m, Scalar::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Pbw, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Pbw) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Pbw, c: &Scalar) {
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

    pub fn add(&self, other: &Uea) -> Uea {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Uea) -> Uea {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Uea {
        let mut out = Uea::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * s));
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Uea {
        let mut out = Uea::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn truncate(&self, order: u32) -> Uea {
        self.map_coefficients(|c| c.truncate(order))
    }

    pub fn nu_coefficient(&self, k: u32) -> Uea {
        self.map_coefficients(|c| c.nu_coefficient(k))
    }

    /// Counit: the coefficient of the empty monomial.
    pub fn counit(&self) -> Scalar {
        self.coefficient(&vec![0; self.dim])
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        format_terms(self.terms.iter().map(|(m, c)| (vec![m.clone()], c.clone())), names)
    }
}

impl fmt::Debug for Uea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|a| format!("e{a}")).collect();
        write!(f, "Uea({})", self.fmt_with(&names))
    }
}

/// A rank-2 or rank-3 tensor of PBW monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct UeaTensor {
    dim: usize,
    rank: usize,
    terms: BTreeMap<Vec<Pbw>, Scalar>,
}

impl UeaTensor {
    pub fn zero(dim: usize, rank: usize) -> Self {
        UeaTensor { dim, rank, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize, rank: usize) -> Self {
        let mut t = Self::zero(dim, rank);
        t.add_term(vec![vec![0; dim]; rank], &Scalar::one());
        t
    }

    /// `a (x) b`.
    pub fn pure(a: &Uea, b: &Uea) -> Self {
        let mut t = Self::zero(a.dim(), 2);
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                t.add_term(vec![m1.clone(), m2.clone()], &(c1 * c2));
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Pbw>, &Scalar)> {
        self.terms.iter()
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

    pub fn add_term(&mut self, legs: Vec<Pbw>, c: &Scalar) {
        debug_assert_eq!(legs.len(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&legs) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&legs);
                }
            }
            None => {
                self.terms.insert(legs, c.clone());
            }
        }
    }

    pub fn add(&self, other: &UeaTensor) -> UeaTensor {
        assert_eq!(self.rank, other.rank, "tensor rank mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &UeaTensor) -> UeaTensor {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> UeaTensor {
        self.map_coefficients(|c| c * s)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> UeaTensor {
        let mut out = UeaTensor::zero(self.dim, self.rank);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn truncate(&self, order: u32) -> UeaTensor {
        self.map_coefficients(|c| c.truncate(order))
    }

    pub fn nu_coefficient(&self, k: u32) -> UeaTensor {
        self.map_coefficients(|c| c.nu_coefficient(k))
    }

    /// Lowest `nu`-order with a nonzero coefficient.
    pub fn nu_valuation(&self) -> Option<u32> {
        self.terms.values().filter_map(|c| c.nu_valuation()).min()
    }

    /// Reorder the legs: output leg `i` is input leg `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> UeaTensor {
        assert_eq!(perm.len(), self.rank);
        let mut out = UeaTensor::zero(self.dim, self.rank);
        for (legs, c) in &self.terms {
            out.add_term(perm.iter().map(|&p| legs[p].clone()).collect(), c);
        }
        out
    }

    /// The flip `a (x) b -> b (x) a` of a rank-2 tensor.
    pub fn flip(&self) -> UeaTensor {
        self.permute(&[1, 0])
    }

    /// Place a rank-2 tensor on legs `(i, j)` of a rank-3 tensor, with the
    /// unit on the remaining leg. `i` and `j` may be in either order.
    pub fn embed3(&self, i: usize, j: usize) -> UeaTensor {
        assert_eq!(self.rank, 2);
        let mut out = UeaTensor::zero(self.dim, 3);
        for (legs, c) in &self.terms {
            let mut new = vec![vec![0; self.dim]; 3];
            new[i] = legs[0].clone();
            new[j] = legs[1].clone();
            out.add_term(new, c);
        }
        out
    }

    /// Apply a linear map to one leg.
    pub fn map_leg(&self, leg: usize, f: impl Fn(&Pbw) -> Uea) -> UeaTensor {
        let mut out = UeaTensor::zero(self.dim, self.rank);
        for (legs, c) in &self.terms {
            for (m, k) in f(&legs[leg]).terms() {
                let mut new = legs.clone();
                new[leg] = m.clone();
                out.add_term(new, &(c * k));
            }
        }
        out
    }

    /// Split one leg with a rank-2 valued map, raising the rank by one.
    pub fn split_leg(&self, leg: usize, f: impl Fn(&Pbw) -> UeaTensor) -> UeaTensor {
        let mut out = UeaTensor::zero(self.dim, self.rank + 1);
        for (legs, c) in &self.terms {
            for (pair, k) in f(&legs[leg]).terms() {
                let mut new = Vec::with_capacity(self.rank + 1);
                new.extend_from_slice(&legs[..leg]);
                new.push(pair[0].clone());
                new.push(pair[1].clone());
                new.extend_from_slice(&legs[leg + 1..]);
                out.add_term(new, &(c * k));
            }
        }
        out
    }

    /// Apply the counit to one leg, lowering the rank.
    pub fn counit_leg(&self, leg: usize) -> UeaTensor {
        let keep: Vec<usize> = (0..self.rank).filter(|&l| l != leg).collect();
        let mut out = UeaTensor::zero(self.dim, keep.len());
        for (legs, c) in &self.terms {
            if pbw_degree(&legs[leg]) == 0 {
                out.add_term(keep.iter().map(|&l| legs[l].clone()).collect(), c);
            }
        }
        out
    }

    /// View a rank-1 tensor as an algebra element.
    pub fn to_uea(&self) -> Uea {
        assert_eq!(self.rank, 1);
        let mut u = Uea::zero(self.dim);
        for (legs, c) in &self.terms {
            u.add_term(legs[0].clone(), c);
        }
        u
    }

    /// First `nu`-order at which `self` and `other` differ.
    pub fn first_difference(&self, other: &UeaTensor) -> Option<u32> {
        self.sub(other).nu_valuation()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        format_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())), names)
    }
}

impl fmt::Debug for UeaTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|a| format!("e{a}")).collect();
        write!(f, "UeaTensor({})", self.fmt_with(&names))
    }
}

pub(crate) fn pbw_text(m: &Pbw, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (a, &k) in m.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(names[a].clone()),
            _ => parts.push(format!("{}^{k}", names[a])),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn format_terms(terms: impl Iterator<Item = (Vec<Pbw>, Scalar)>, names: &[String]) -> String {
    let mut rows: Vec<(u32, String, Scalar)> = terms
        .map(|(legs, c)| {
            let text = legs.iter().map(|m| pbw_text(m, names)).collect::<Vec<_>>().join(" (x) ");
            (c.nu_valuation().unwrap_or(0), text, c)
        })
        .collect();
    rows.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    if rows.is_empty() {
        return "0".into();
    }
    rows.iter().map(|(_, t, c)| format!("({c}) {t}")).collect::<Vec<_>>().join(" + ")
}
