use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use serde::Deserialize;

use super::uea::{pbw_degree, pbw_word, Pbw, Uea, UeaTensor};
use crate::calculus::{xi_word_sign, CalcElement, Frame, Monomial, MAX_DIM};
use crate::error::{Error, Result};
use crate::expr::{parse_scalar, sl2_fields};
use crate::scalar::{Scalar, Surds};

/// Affine representation data of one basis element: the vector field
/// `sum_j (sum_mu tau^{mu j} x^mu) d_j` with `x^0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tau {
    /// `lin[i][j] = tau^{ij}` for `i, j >= 1`.
    pub lin: Vec<Vec<Scalar>>,
    /// `shift[j] = tau^{0j}`.
    pub shift: Vec<Scalar>,
}

impl Tau {
    fn zero(n: usize) -> Self {
        Tau { lin: vec![vec![Scalar::zero(); n]; n], shift: vec![Scalar::zero(); n] }
    }

    /// `(n+1) x (n+1)` matrix with a zero column 0, so that composition
    /// of actions is matrix multiplication.
    pub fn extended(&self) -> Vec<Vec<Scalar>> {
        let n = self.shift.len();
        let mut m = vec![vec![Scalar::zero(); n + 1]; n + 1];
        for j in 0..n {
            m[0][j + 1] = self.shift[j].clone();
            for i in 0..n {
                m[i + 1][j + 1] = self.lin[i][j].clone();
            }
        }
        m
    }
}

/// A finite-dimensional Lie subalgebra of affine vector fields with an
/// ordered basis, structure constants and a star structure.
pub struct LieAlgebra {
    names: Vec<String>,
    frame: Frame,
    n: usize,
    surds: Arc<Surds>,
    fields: Vec<CalcElement>,
    tau: Vec<Tau>,
    /// `c[a][b][g]`: `[e_a, e_b] = sum_g c[a][b][g] e_g`.
    c: Vec<Vec<Vec<Scalar>>>,
    /// `star[a][b]`: `e_a^* = sum_b star[a][b] e_b`.
    star: Vec<Vec<Scalar>>,
    left_cache: RwLock<HashMap<(usize, Pbw), Uea>>,
}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LieAlgebra").field("basis", &self.names).field("n", &self.n).finish()
    }
}

impl Clone for LieAlgebra {
    fn clone(&self) -> Self {
        LieAlgebra {
            names: self.names.clone(),
            frame: self.frame,
            n: self.n,
            surds: self.surds.clone(),
            fields: self.fields.clone(),
            tau: self.tau.clone(),
            c: self.c.clone(),
            star: self.star.clone(),
            left_cache: RwLock::new(HashMap::new()),
        }
    }
}

#[derive(Deserialize)]
struct LieJson {
    basis: Vec<String>,
    #[serde(rename = "C")]
    c: Vec<Vec<Vec<String>>>,
    tau: BTreeMap<String, Vec<Vec<String>>>,
    star: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    frame: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, String>,
}

/// Split an affine vector field into `tau` data.
fn tau_of_field(field: &CalcElement) -> Result<Tau> {
    let n = field.dim();
    let comps =
        field.vector_components().ok_or_else(|| Error::Type("Lie algebra element is not a vector field".into()))?;
    let mut tau = Tau::zero(n);
    for (j, f) in comps.iter().enumerate() {
        for (m, c) in f.terms() {
            match m.x_degree() {
                0 => tau.shift[j] = c.clone(),
                1 => {
                    let i = (0..n).find(|&i| m.x[i] == 1).expect("degree one");
                    tau.lin[i][j] = c.clone();
                }
                _ => return Err(Error::Type("vector field is not affine".into())),
            }
        }
    }
    Ok(tau)
}

fn field_of_tau(tau: &Tau, frame: Frame, n: usize) -> CalcElement {
    let mut out = CalcElement::zero(frame, n);
    for j in 0..n {
        let mut d = Monomial::d_gen(j);
        out.add_term(d, &tau.shift[j]);
        for i in 0..n {
            d.x = [0; MAX_DIM];
            d.x[i] = 1;
            out.add_term(d, &tau.lin[i][j]);
        }
    }
    out
}

/// Coordinates of `target` in the span of `basis` (vector fields), by
/// Gauss-Jordan elimination over the monomial coefficients. Pivots must be
/// invertible scalars, which holds for every algebra shipped here.
fn solve_in_span(basis: &[CalcElement], target: &CalcElement) -> Result<Vec<Scalar>> {
    let d = basis.len();
    let mut keys: Vec<Monomial> = Vec::new();
    for e in basis.iter().chain(std::iter::once(target)) {
        for (m, _) in e.terms() {
            if !keys.contains(m) {
                keys.push(*m);
            }
        }
    }
    // rows: one per monomial, columns: basis coordinates then target
    let mut rows: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|k| {
            let mut r: Vec<Scalar> = basis.iter().map(|e| e.coefficient(k)).collect();
            r.push(target.coefficient(k));
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(p) = (row..rows.len()).find(|&r| rows[r][col].inverse_unit().is_some()) else {
            if (row..rows.len()).any(|r| !rows[r][col].is_zero()) {
                return Err(Error::Unsupported("non-unit pivot while solving for Lie coordinates".into()));
            }
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].inverse_unit().expect("unit pivot");
        rows[row] = rows[row].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot = rows[row].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot) {
                    *x -= &(&f * p);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[d].is_zero()) {
        return Err(Error::Bracket("element is not in the span of the basis".into()));
    }
    let mut coords = vec![Scalar::zero(); d];
    for (r, &col) in pivot_cols.iter().enumerate() {
        coords[col] = rows[r][d].clone();
    }
    Ok(coords)
}

impl LieAlgebra {
    /// Build from named affine vector fields; brackets and the star map are
    /// computed and checked for closure.
    pub fn from_fields(names: Vec<String>, fields: Vec<CalcElement>, surds: Arc<Surds>) -> Result<Self> {
        if names.len() != fields.len() || fields.is_empty() {
            return Err(Error::Config("basis names and fields differ in length".into()));
        }
        let frame = fields[0].frame();
        let n = fields[0].dim();
        for f in &fields {
            f.check_compatible(&fields[0])?;
        }
        let tau = fields.iter().map(tau_of_field).collect::<Result<Vec<_>>>()?;
        let d = fields.len();
        let mut c = vec![vec![vec![Scalar::zero(); d]; d]; d];
        for a in 0..d {
            for b in 0..d {
                c[a][b] = solve_in_span(&fields, &fields[a].commutator(&fields[b]))?;
            }
        }
        let mut star = Vec::with_capacity(d);
        for f in &fields {
            let comps = f.vector_components().expect("checked above");
            let conj: Vec<CalcElement> = comps.iter().map(|x| x.involution().scale(&Scalar::from_int(-1))).collect();
            let fstar = CalcElement::from_vector_components(frame, n, &conj);
            star.push(solve_in_span(&fields, &fstar)?);
        }
        Ok(LieAlgebra { names, frame, n, surds, fields, tau, c, star, left_cache: RwLock::new(HashMap::new()) })
    }

    /// The algebra spanned by `H`, `E+`, `E-` in the weight frame, PBW order
    /// `E- < H < E+`.
    pub fn sl2(surds: &Arc<Surds>) -> Self {
        let [h, ep, em] = sl2_fields(surds);
        Self::from_fields(vec!["E-".into(), "H".into(), "E+".into()], vec![em, h, ep], surds.clone())
            .expect("sl2 fields close")
    }

    /// Load from JSON: `{basis, C, tau, star}` with optional `frame`
    /// (`"cartesian"` or `"weight"`) and `params` (`a`, `b`).
    pub fn from_json(src: &str) -> Result<Self> {
        let doc: LieJson = serde_json::from_str(src).map_err(|e| Error::Config(format!("Lie algebra JSON: {e}")))?;
        let param = |k: &str| -> Result<num_rational::BigRational> {
            match doc.params.get(k) {
                None => Ok(num_rational::BigRational::from_integer(BigInt::from(1))),
                Some(s) => parse_scalar(s, &Surds::unit())?
                    .as_rational()
                    .ok_or_else(|| Error::Config(format!("parameter {k} must be rational"))),
            }
        };
        let surds = Surds::new(param("a")?, param("b")?)?;
        let frame = match doc.frame.as_deref() {
            None | Some("cartesian") => Frame::Cartesian,
            Some("weight") => Frame::Weight,
            Some(other) => return Err(Error::Config(format!("unknown frame {other}"))),
        };
        let d = doc.basis.len();
        let sc = |s: &str| parse_scalar(s, &surds);
        let mut tau = Vec::with_capacity(d);
        let mut n = 0;
        for name in &doc.basis {
            let rows = doc.tau.get(name).ok_or_else(|| Error::Config(format!("tau missing for {name}")))?;
            n = rows.len().saturating_sub(1);
            if n == 0 || n > MAX_DIM || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("tau for {name} must be (n+1) x n")));
            }
            let mut t = Tau::zero(n);
            for j in 0..n {
                t.shift[j] = sc(&rows[0][j])?;
                for i in 0..n {
                    t.lin[i][j] = sc(&rows[i + 1][j])?;
                }
            }
            tau.push(t);
        }
        if frame == Frame::Weight && n != 3 {
            return Err(Error::Dimension("weight frame needs n = 3".into()));
        }
        if doc.c.len() != d || doc.c.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(Error::Dimension("C must be d x d x d".into()));
        }
        let mut c = vec![vec![vec![Scalar::zero(); d]; d]; d];
        for a in 0..d {
            for b in 0..d {
                for g in 0..d {
                    c[a][b][g] = sc(&doc.c[a][b][g])?;
                }
            }
        }
        let mut star = Vec::with_capacity(d);
        for name in &doc.basis {
            let row = doc.star.get(name).ok_or_else(|| Error::Config(format!("star missing for {name}")))?;
            if row.len() != d {
                return Err(Error::Dimension(format!("star row for {name} must have {d} entries")));
            }
            star.push(row.iter().map(|s| sc(s)).collect::<Result<Vec<_>>>()?);
        }
        let fields = tau.iter().map(|t| field_of_tau(t, frame, n)).collect();
        let lie = LieAlgebra {
            names: doc.basis,
            frame,
            n,
            surds,
            fields,
            tau,
            c,
            star,
            left_cache: RwLock::new(HashMap::new()),
        };
        lie.validate()?;
        Ok(lie)
    }

    /// Antisymmetry, Jacobi, and agreement of the declared constants with
    /// the commutators of the represented vector fields.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                for g in 0..d {
                    if !(&self.c[a][b][g] + &self.c[b][a][g]).is_zero() {
                        return Err(Error::Bracket(format!("C not antisymmetric at ({a},{b},{g})")));
                    }
                }
                let mut lhs = self.fields[a].commutator(&self.fields[b]);
                for g in 0..d {
                    lhs -= &self.fields[g].scale(&self.c[a][b][g]);
                }
                if !lhs.is_zero() {
                    return Err(Error::Bracket(format!(
                        "tau is not a representation on [{}, {}]",
                        self.names[a], self.names[b]
                    )));
                }
            }
        }
        if !self.jacobi_holds() {
            return Err(Error::Bracket("Jacobi identity fails".into()));
        }
        Ok(())
    }

    pub fn jacobi_holds(&self) -> bool {
        let d = self.dim();
        let br = |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
            let mut out = vec![Scalar::zero(); d];
            for a in 0..d {
                for b in 0..d {
                    let k = &u[a] * &v[b];
                    if k.is_zero() {
                        continue;
                    }
                    for g in 0..d {
                        out[g] += &(&k * &self.c[a][b][g]);
                    }
                }
            }
            out
        };
        let unit =
            |a: usize| -> Vec<Scalar> { (0..d).map(|i| if i == a { Scalar::one() } else { Scalar::zero() }).collect() };
        for a in 0..d {
            for b in 0..d {
                for g in 0..d {
                    let (x, y, z) = (unit(a), unit(b), unit(g));
                    let t1 = br(&x, &br(&y, &z));
                    let t2 = br(&y, &br(&z, &x));
                    let t3 = br(&z, &br(&x, &y));
                    if (0..d).any(|i| !(&(&t1[i] + &t2[i]) + &t3[i]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// Dimension `n` of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn surds(&self) -> &Arc<Surds> {
        &self.surds
    }

    pub fn field(&self, a: usize) -> &CalcElement {
        &self.fields[a]
    }

    pub fn tau(&self, a: usize) -> &Tau {
        &self.tau[a]
    }

    pub fn structure_constant(&self, a: usize, b: usize, g: usize) -> &Scalar {
        &self.c[a][b][g]
    }

    pub fn star_row(&self, a: usize) -> &[Scalar] {
        &self.star[a]
    }

    pub fn gen(&self, a: usize) -> Uea {
        Uea::gen(self.dim(), a)
    }

    pub fn one(&self) -> Uea {
        Uea::one(self.dim())
    }

    /// Named generator, e.g. `"H"`.
    pub fn named(&self, name: &str) -> Result<Uea> {
        self.index_of(name).map(|a| self.gen(a)).ok_or_else(|| Error::Config(format!("no basis element named {name}")))
    }

    // ---- PBW arithmetic ----

    /// `e_a * m` in PBW normal form, memoized. Coefficients are free of `nu`.
    fn left_mul_gen(&self, a: usize, m: &Pbw) -> Uea {
        let d = self.dim();
        let lowest = m.iter().position(|&k| k > 0);
        match lowest {
            None => return Uea::gen(d, a),
            Some(b) if a <= b => {
                let mut out = m.clone();
                out[a] += 1;
                return Uea::monomial(out, Scalar::one());
            }
            _ => {}
        }
        let key = (a, m.clone());
        if let Some(hit) = self.left_cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        // e_a e_b M' = e_b (e_a M') + [e_a, e_b] M'
        let b = lowest.expect("nonempty");
        let mut rest = m.clone();
        rest[b] -= 1;
        let mut out = Uea::zero(d);
        for (t, c) in self.left_mul_gen(a, &rest).terms() {
            out = out.add(&self.left_mul_gen(b, t).scale(c));
        }
        for g in 0..d {
            let k = &self.c[a][b][g];
            if !k.is_zero() {
                out = out.add(&self.left_mul_gen(g, &rest).scale(k));
            }
        }
        self.left_cache.write().expect("cache lock").insert(key, out.clone());
        out
    }

    fn left_mul_gen_elem(&self, a: usize, u: &Uea) -> Uea {
        let mut out = Uea::zero(self.dim());
        for (m, c) in u.terms() {
            out = out.add(&self.left_mul_gen(a, m).scale(c));
        }
        out
    }

    /// Product of two PBW monomials.
    pub fn pbw_mul_mono(&self, m1: &Pbw, m2: &Pbw) -> Uea {
        let mut acc = Uea::monomial(m2.clone(), Scalar::one());
        for &a in pbw_word(m1).iter().rev() {
            acc = self.left_mul_gen_elem(a, &acc);
        }
        acc
    }

    /// Product in `U(g)`, truncated at `nu^order` when given.
    pub fn mul(&self, u: &Uea, v: &Uea, order: Option<u32>) -> Uea {
        let mut out = Uea::zero(self.dim());
        for (m1, c1) in u.terms() {
            for (m2, c2) in v.terms() {
                let k = c1.mul_truncated(c2, order);
                if k.is_zero() {
                    continue;
                }
                out = out.add(&self.pbw_mul_mono(m1, m2).scale(&k));
            }
        }
        out
    }

    pub fn commutator(&self, u: &Uea, v: &Uea) -> Uea {
        self.mul(u, v, None).sub(&self.mul(v, u, None))
    }

    /// Leg-wise product of tensors of equal rank.
    pub fn tensor_mul(&self, s: &UeaTensor, t: &UeaTensor, order: Option<u32>) -> UeaTensor {
        assert_eq!(s.rank(), t.rank(), "tensor rank mismatch");
        let rank = s.rank();
        let mut out = UeaTensor::zero(self.dim(), rank);
        let mut cache: HashMap<(usize, Pbw, Pbw), Uea> = HashMap::new();
        for (l1, c1) in s.terms() {
            for (l2, c2) in t.terms() {
                let k = c1.mul_truncated(c2, order);
                if k.is_zero() {
                    continue;
                }
                // expand the product of every leg
                let mut partial: Vec<(Vec<Pbw>, Scalar)> = vec![(Vec::with_capacity(rank), k)];
                for leg in 0..rank {
                    let prod = cache
                        .entry((leg, l1[leg].clone(), l2[leg].clone()))
                        .or_insert_with(|| self.pbw_mul_mono(&l1[leg], &l2[leg]))
                        .clone();
                    let mut next = Vec::with_capacity(partial.len() * prod.len());
                    for (legs, c) in &partial {
                        for (m, k) in prod.terms() {
                            let mut nl = legs.clone();
                            nl.push(m.clone());
                            next.push((nl, c * k));
                        }
                    }
                    partial = next;
                }
                for (legs, c) in partial {
                    out.add_term(legs, &c);
                }
            }
        }
        out
    }

    // ---- Hopf structure ----

    /// Coproduct of a PBW monomial: `prod_a sum_j C(k_a, j) e_a^j (x) e_a^{k_a - j}`.
    pub fn coproduct_mono(&self, m: &Pbw) -> UeaTensor {
        let d = self.dim();
        let mut partial: Vec<(Pbw, Pbw, BigInt)> = vec![(vec![0; d], vec![0; d], BigInt::from(1))];
        for (a, &k) in m.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let mut next = Vec::new();
            for (l, r, c) in &partial {
                let mut binom = BigInt::from(1);
                for j in 0..=k {
                    let (mut l2, mut r2) = (l.clone(), r.clone());
                    l2[a] = j;
                    r2[a] = k - j;
                    next.push((l2, r2, c * &binom));
                    binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
                }
            }
            partial = next;
        }
        let mut out = UeaTensor::zero(d, 2);
        for (l, r, c) in partial {
            out.add_term(vec![l, r], &Scalar::one().scale_int(&c));
        }
        out
    }

    pub fn coproduct(&self, u: &Uea) -> UeaTensor {
        let mut out = UeaTensor::zero(self.dim(), 2);
        for (m, c) in u.terms() {
            out = out.add(&self.coproduct_mono(m).scale(c));
        }
        out
    }

    pub fn counit(&self, u: &Uea) -> Scalar {
        u.counit()
    }

    /// `S(e_{a1} ... e_{ak}) = (-1)^k e_{ak} ... e_{a1}`.
    pub fn antipode_mono(&self, m: &Pbw) -> Uea {
        let mut acc = self.one();
        for &a in pbw_word(m).iter() {
            acc = self.left_mul_gen_elem(a, &acc);
        }
        if pbw_degree(m) % 2 == 1 {
            acc.scale(&Scalar::from_int(-1))
        } else {
            acc
        }
    }

    pub fn antipode(&self, u: &Uea) -> Uea {
        let mut out = Uea::zero(self.dim());
        for (m, c) in u.terms() {
            out = out.add(&self.antipode_mono(m).scale(c));
        }
        out
    }

    /// Antilinear anti-automorphism extending the star map of `g`.
    pub fn star(&self, u: &Uea) -> Uea {
        let d = self.dim();
        let mut out = Uea::zero(d);
        for (m, c) in u.terms() {
            let mut acc = self.one();
            for &a in pbw_word(m).iter() {
                let mut next = Uea::zero(d);
                for (b, k) in self.star[a].iter().enumerate() {
                    if !k.is_zero() {
                        next = next.add(&self.left_mul_gen_elem(b, &acc).scale(k));
                    }
                }
                acc = next;
            }
            out = out.add(&acc.scale(&c.conj()));
        }
        out
    }

    pub fn tensor_antipode(&self, t: &UeaTensor) -> UeaTensor {
        let mut out = t.clone();
        for leg in 0..t.rank() {
            out = out.map_leg(leg, |m| self.antipode_mono(m));
        }
        out
    }

    /// `(* (x) ... (x) *)`, conjugating the coefficients once.
    pub fn tensor_star(&self, t: &UeaTensor) -> UeaTensor {
        let mut out = t.map_coefficients(|c| c.conj());
        for leg in 0..t.rank() {
            out = out.map_leg(leg, |m| self.star(&Uea::monomial(m.clone(), Scalar::one())));
        }
        out
    }

    /// Coproduct applied to one leg.
    pub fn coproduct_leg(&self, t: &UeaTensor, leg: usize) -> UeaTensor {
        t.split_leg(leg, |m| self.coproduct_mono(m))
    }

    /// Multiply the legs of a rank-2 tensor together.
    pub fn contract(&self, t: &UeaTensor) -> Uea {
        assert_eq!(t.rank(), 2);
        let mut out = Uea::zero(self.dim());
        for (legs, c) in t.terms() {
            out = out.add(&self.pbw_mul_mono(&legs[0], &legs[1]).scale(c));
        }
        out
    }

    /// The `(n+1) x (n+1)` representation matrix of `u` (column 0 zero).
    pub fn tau_matrix(&self, u: &Uea) -> Vec<Vec<Scalar>> {
        let n = self.n;
        let ext: Vec<Vec<Vec<Scalar>>> = self.tau.iter().map(|t| t.extended()).collect();
        let mut out = vec![vec![Scalar::zero(); n + 1]; n + 1];
        for (m, c) in u.terms() {
            let mut acc: Vec<Vec<Scalar>> = (0..=n)
                .map(|i| (0..=n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
                .collect();
            for &a in pbw_word(m).iter() {
                acc = mat_mul(&acc, &ext[a]);
            }
            for i in 0..=n {
                for j in 0..=n {
                    out[i][j] += &(&acc[i][j] * c);
                }
            }
        }
        out
    }

    // ---- action on the calculus ----

    /// Action of the basis element `e_a` on one monomial (a derivation).
    pub fn act_gen_monomial(&self, a: usize, m: &Monomial, out: &mut CalcElement) {
        let n = self.n;
        let t = &self.tau[a];
        // x block: x^j -> sum_i tau^{ij} x^i + tau^{0j}
        for j in 0..n {
            let q = m.x[j];
            if q == 0 {
                continue;
            }
            let qs = Scalar::from_int(q as i64);
            let mut base = *m;
            base.x[j] -= 1;
            if !t.shift[j].is_zero() {
                out.add_term(base, &(&qs * &t.shift[j]));
            }
            for i in 0..n {
                if !t.lin[i][j].is_zero() {
                    let mut mm = base;
                    mm.x[i] += 1;
                    out.add_term(mm, &(&qs * &t.lin[i][j]));
                }
            }
        }
        // d block: d_j -> -sum_i tau^{ji} d_i
        for j in 0..n {
            let r = m.d[j];
            if r == 0 {
                continue;
            }
            let rs = Scalar::from_int(-(r as i64));
            let mut base = *m;
            base.d[j] -= 1;
            for i in 0..n {
                if !t.lin[j][i].is_zero() {
                    let mut mm = base;
                    mm.d[i] += 1;
                    out.add_term(mm, &(&rs * &t.lin[j][i]));
                }
            }
        }
        // xi block: xi^j -> sum_k tau^{kj} xi^k, replaced in place
        let word = m.xi_indices();
        for (pos, &j) in word.iter().enumerate() {
            for k in 0..n {
                let coef = &t.lin[k][j];
                if coef.is_zero() {
                    continue;
                }
                let mut w = word.clone();
                w[pos] = k;
                if let Some((mask, neg)) = xi_word_sign(&w) {
                    let mm = Monomial { xi: mask, ..*m };
                    out.add_term(mm, &if neg { -coef } else { coef.clone() });
                }
            }
        }
    }

    pub fn act_gen(&self, a: usize, e: &CalcElement) -> CalcElement {
        let mut out = e.zero_like();
        for (m, c) in e.terms() {
            let mut part = e.zero_like();
            self.act_gen_monomial(a, m, &mut part);
            out += &part.scale(c);
        }
        out
    }

    fn check_dims(&self, e: &CalcElement) -> Result<()> {
        if e.dim() != self.n || e.frame() != self.frame {
            return Err(Error::Dimension(format!(
                "algebra acts on dimension {} ({:?}), element has {} ({:?})",
                self.n,
                self.frame,
                e.dim(),
                e.frame()
            )));
        }
        Ok(())
    }

    /// Action of a PBW monomial: the rightmost factor acts first.
    pub fn act_mono(&self, m: &Pbw, e: &CalcElement) -> CalcElement {
        let mut acc = e.clone();
        for &a in pbw_word(m).iter().rev() {
            if acc.is_zero() {
                break;
            }
            acc = self.act_gen(a, &acc);
        }
        acc
    }

    /// `u |> e`. Truncates at `nu^order` when given.
    pub fn act(&self, u: &Uea, e: &CalcElement, order: Option<u32>) -> Result<CalcElement> {
        self.check_dims(e)?;
        let mut out = e.zero_like();
        for (m, c) in u.terms() {
            let part = self.act_mono(m, e);
            out += &part.map_coefficients(|x| c.mul_truncated(x, order));
        }
        Ok(out)
    }
}

pub(crate) fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}
