//! Quadric submanifolds `f_c = 0`: tangent generators, the ideal of the
//! quotient calculus and its normal forms, and the compatibility of the
//! quotient with the star product.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Deserialize;

use crate::calculus::{change_frame, CalcElement, Frame, Monomial, MINUS, PLUS, ZERO};
use crate::error::{Error, Result};
use crate::expr::parse_scalar;
use crate::hopf::LieAlgebra;
use crate::report::Check;
use crate::scalar::{Scalar, Surds};
use crate::star::StarContext;

/// `f_c(x) = 1/2 a_ij x^i x^j + a_0i x^i + 1/2 a_00 - c` in Cartesian
/// coordinates of R^n.
#[derive(Clone, Debug)]
pub struct QuadricSpec {
    /// Symmetric `(n+1) x (n+1)` coefficient array, index 0 affine.
    pub a: Vec<Vec<Scalar>>,
    pub c: Scalar,
    pub surds: Arc<Surds>,
}

#[derive(Deserialize)]
struct QuadricJson {
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    #[serde(default)]
    c: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, String>,
}

impl QuadricSpec {
    pub fn new(a: Vec<Vec<Scalar>>, c: Scalar, surds: Arc<Surds>) -> Result<Self> {
        let m = a.len();
        if m < 2 || a.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("quadric array must be square of size n+1".into()));
        }
        for i in 0..m {
            for j in 0..i {
                if a[i][j] != a[j][i] {
                    return Err(Error::Config(format!("quadric array not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(QuadricSpec { a, c, surds })
    }

    /// `1/2((x1)^2 + a (x2)^2 - b (x3)^2) - c`.
    pub fn hyperboloid(surds: &Arc<Surds>, c: Scalar) -> Self {
        let mut a = vec![vec![Scalar::zero(); 4]; 4];
        a[1][1] = Scalar::one();
        a[2][2] = Scalar::a(surds);
        a[3][3] = -Scalar::b(surds);
        QuadricSpec { a, c, surds: surds.clone() }
    }

    /// `{A, c, params}`; `c` is a rational string or `"symbolic"`.
    pub fn from_json(src: &str) -> Result<Self> {
        let doc: QuadricJson = serde_json::from_str(src).map_err(|e| Error::Config(format!("quadric JSON: {e}")))?;
        let unit = Surds::unit();
        let param = |k: &str| -> Result<BigRational> {
            match doc.params.get(k) {
                None => Ok(BigRational::from_integer(BigInt::from(1))),
                Some(s) => parse_scalar(s, &unit)?
                    .as_rational()
                    .ok_or_else(|| Error::Config(format!("parameter {k} must be rational"))),
            }
        };
        let surds = Surds::new(param("a")?, param("b")?)?;
        let a = doc
            .a
            .iter()
            .map(|row| row.iter().map(|s| parse_scalar(s, &surds)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let c = match doc.c.as_deref() {
            None | Some("symbolic") => Scalar::c_pow(1),
            Some(s) => parse_scalar(s, &surds)?,
        };
        Self::new(a, c, surds)
    }

    pub fn dim(&self) -> usize {
        self.a.len() - 1
    }

    fn x(&self, mu: usize) -> CalcElement {
        let n = self.dim();
        if mu == 0 {
            CalcElement::one(Frame::Cartesian, n)
        } else {
            CalcElement::x(Frame::Cartesian, n, mu - 1)
        }
    }

    /// `f_c` in Cartesian coordinates.
    pub fn f(&self) -> CalcElement {
        let n = self.dim();
        let half = Scalar::from_ratio(1, 2);
        let mut out = CalcElement::scalar(Frame::Cartesian, n, -self.c.clone());
        for mu in 0..=n {
            for nu in 0..=n {
                if !self.a[mu][nu].is_zero() {
                    out += &(&self.x(mu) * &self.x(nu)).scale(&(&half * &self.a[mu][nu]));
                }
            }
        }
        out
    }

    /// `f_i = a_ij x^j + a_0i`.
    pub fn gradient(&self) -> Vec<CalcElement> {
        let n = self.dim();
        (1..=n)
            .map(|i| {
                let mut g = CalcElement::zero(Frame::Cartesian, n);
                for mu in 0..=n {
                    g += &self.x(mu).scale(&self.a[mu][i]);
                }
                g
            })
            .collect()
    }

    /// `df_c = xi^i f_i`.
    pub fn df(&self) -> CalcElement {
        let n = self.dim();
        let mut out = CalcElement::zero(Frame::Cartesian, n);
        for (i, g) in self.gradient().iter().enumerate() {
            out += &(&CalcElement::xi(Frame::Cartesian, n, i) * g);
        }
        out
    }

    /// `L_ij = f_i d_j - f_j d_i` for `i < j`, named `L{i}{j}` (1-based).
    pub fn tangent_generators(&self) -> Vec<(String, CalcElement)> {
        let n = self.dim();
        let g = self.gradient();
        let d = |i| CalcElement::d(Frame::Cartesian, n, i);
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let l = &(&g[i] * &d(j)) - &(&g[j] * &d(i));
                out.push((format!("L{}{}", i + 1, j + 1), l));
            }
        }
        out
    }

    /// The Lie algebra spanned by the tangent generators.
    pub fn tangent_algebra(&self) -> Result<LieAlgebra> {
        let (names, fields): (Vec<_>, Vec<_>) = self.tangent_generators().into_iter().unzip();
        LieAlgebra::from_fields(names, fields, self.surds.clone())
    }

    /// `[L_ij, L_hk] = a_jh L_ik - a_ih L_jk - a_jk L_ih + a_ik L_jh` on
    /// every pair, with `L_ji = -L_ij`.
    pub fn bracket_table_checks(&self) -> Vec<Check> {
        let n = self.dim();
        let g = self.gradient();
        let d = |i| CalcElement::d(Frame::Cartesian, n, i);
        let l = |i: usize, j: usize| &(&g[i] * &d(j)) - &(&g[j] * &d(i));
        let a = |i: usize, j: usize| self.a[i + 1][j + 1].clone();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for h in 0..n {
                    for k in h + 1..n {
                        let lhs = l(i, j).commutator(&l(h, k));
                        let rhs = &(&(&l(i, k).scale(&a(j, h)) - &l(j, k).scale(&a(i, h))) - &l(i, h).scale(&a(j, k)))
                            + &l(j, h).scale(&a(i, k));
                        let id = format!("quadric.bracket.L{}{}.L{}{}", i + 1, j + 1, h + 1, k + 1);
                        out.push(Check::elements(id, &lhs, &rhs));
                    }
                }
            }
        }
        out
    }

    /// `X(f_c) = 0`.
    pub fn check_tangency(&self, id: &str, x: &CalcElement) -> Check {
        let f = self.f();
        let value = match x.vector_components() {
            Some(comps) => {
                let mut v = f.zero_like();
                for (i, g) in self.gradient().iter().enumerate() {
                    v += &(&comps[i] * g);
                }
                v
            }
            None => return Check::error(id, &Error::Type("tangency needs a vector field".into())),
        };
        Check::zero(id, &value)
    }

    /// The hyperboloid `f_c` in the weight frame: `1/2 y+ y- + a/2 (y0)^2 - c`.
    pub fn f_weight(&self) -> Result<CalcElement> {
        change_frame(&self.f(), Frame::Weight, &self.surds)
    }
}

/// The ideal of the hyperboloid calculus in weight coordinates, with
/// reduction rules
///
/// ```text
/// y+ y-   -> 2c - a (y0)^2
/// y0 eta0 -> -(1/2a)(y- eta+ + y+ eta-)
/// ```
///
/// Normal forms are canonical for form degree at most one.
#[derive(Clone, Debug)]
pub struct SubmanifoldIdeal {
    surds: Arc<Surds>,
    c: Scalar,
    f: CalcElement,
    df: CalcElement,
    f_rule: CalcElement,
    df_rule: CalcElement,
}

const REDUCTION_GUARD: usize = 100_000;

impl SubmanifoldIdeal {
    pub fn hyperboloid(surds: &Arc<Surds>, c: Scalar) -> Self {
        let w = Frame::Weight;
        let y = |i| CalcElement::x(w, 3, i);
        let eta = |i| CalcElement::xi(w, 3, i);
        let a = Scalar::a(surds);
        let half = Scalar::from_ratio(1, 2);
        let f = &(&(&y(PLUS) * &y(MINUS)).scale(&half) + &(&y(ZERO) * &y(ZERO)).scale(&(&half * &a)))
            - &CalcElement::scalar(w, 3, c.clone());
        let df =
            &(&(&y(MINUS) * &eta(PLUS)) + &(&y(PLUS) * &eta(MINUS))).scale(&half) + &(&y(ZERO) * &eta(ZERO)).scale(&a);
        let f_rule = &CalcElement::scalar(w, 3, &Scalar::from_int(2) * &c) - &(&y(ZERO) * &y(ZERO)).scale(&a);
        let inv_2a = (&Scalar::from_int(2) * &a).inverse_unit().expect("a invertible");
        let df_rule = (&(&y(MINUS) * &eta(PLUS)) + &(&y(PLUS) * &eta(MINUS))).scale(&-inv_2a);
        SubmanifoldIdeal { surds: surds.clone(), c, f, df, f_rule, df_rule }
    }

    pub fn surds(&self) -> &Arc<Surds> {
        &self.surds
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn f(&self) -> &CalcElement {
        &self.f
    }

    pub fn df(&self) -> &CalcElement {
        &self.df
    }

    /// One rewriting step on a monomial, if a rule applies.
    fn step(&self, m: &Monomial) -> Option<CalcElement> {
        let w = Frame::Weight;
        if m.x[PLUS] > 0 && m.x[MINUS] > 0 {
            let mut rest = *m;
            rest.x[PLUS] -= 1;
            rest.x[MINUS] -= 1;
            // x commutes with xi, so the replacement multiplies from the left
            return Some(&self.f_rule * &CalcElement::monomial(w, 3, rest, Scalar::one()));
        }
        if m.x[ZERO] > 0 && m.xi & (1 << ZERO) != 0 {
            let mut rest = *m;
            rest.x[ZERO] -= 1;
            rest.xi &= !(1 << ZERO);
            // eta0 ^ rest = sign * (monomial without eta0 moved behind)
            let negative = crate::calculus::xi_merge_sign(1 << ZERO, rest.xi).expect("disjoint");
            let r = &self.df_rule * &CalcElement::monomial(w, 3, rest, Scalar::one());
            return Some(if negative { -r } else { r });
        }
        None
    }

    /// Normal form modulo the ideal.
    pub fn reduce(&self, a: &CalcElement) -> Result<CalcElement> {
        if a.frame() != Frame::Weight || a.dim() != 3 {
            return Err(Error::Frame("ideal reduction works in the weight frame of R^3".into()));
        }
        if a.terms().any(|(m, _)| m.xi_degree() > 1) {
            return Err(Error::Unsupported("ideal normal forms are only canonical up to form degree one".into()));
        }
        let mut pending: BTreeMap<Monomial, Scalar> = a.clone().into_terms();
        let mut out = a.zero_like();
        let mut steps = 0;
        // rewrite the largest monomial first; rules lower the term order
        while let Some((m, c)) = pending.pop_last() {
            steps += 1;
            if steps > REDUCTION_GUARD {
                return Err(Error::Reduction(REDUCTION_GUARD));
            }
            match self.step(&m) {
                None => out.add_term(m, &c),
                Some(repl) => {
                    for (m2, c2) in repl.terms() {
                        let v = c2 * &c;
                        let e = pending.entry(*m2).or_insert_with(Scalar::zero);
                        *e += &v;
                        if e.is_zero() {
                            pending.remove(m2);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `alpha * f_c = alpha f_c = f_c * alpha`, and the same for `df_c`.
    pub fn star_stability(&self, ctx: &StarContext, id: &str, alpha: &CalcElement) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (name, g) in [("f", &self.f), ("df", &self.df)] {
            let plain_r = alpha * g;
            let plain_l = g * alpha;
            out.push(Check::elements(format!("{id}.{name}.right"), &ctx.cut(&ctx.star(alpha, g)?), &plain_r));
            out.push(Check::elements(format!("{id}.{name}.left"), &ctx.cut(&ctx.star(g, alpha)?), &plain_l));
        }
        Ok(out)
    }

    /// `reduce(a * b) = reduce(reduce(a) * reduce(b))`, both at `nu` and in
    /// the classical limit.
    pub fn diagram_check(&self, ctx: &StarContext, id: &str, a: &CalcElement, b: &CalcElement) -> Result<Check> {
        let lhs = self.reduce(&ctx.cut(&ctx.star(a, b)?))?;
        let rhs = self.reduce(&ctx.cut(&ctx.star(&self.reduce(a)?, &self.reduce(b)?)?))?;
        Ok(Check::elements(id, &lhs, &rhs))
    }
}

/// The dependence relation among `H, E+-` as printed, and as rederived by
/// deforming `y- E+ - y+ E- - sqrt(a) y0 H = 0`.
pub fn dependence_relations(ctx: &StarContext) -> Result<(CalcElement, CalcElement, CalcElement)> {
    let classical = ctx.parse("y- E+ - y+ E- - sqrtA y0 H")?;
    let printed = ctx.parse("y- * E+ - y+ * E- - sqrtA * y0 * H + I*nu * y+ * H - 2*I*nu*(1 + I*nu) * y+ * E+")?;
    let rederived = ctx.parse("y- * E+ - y+ * E- + I*nu * y+ * H - sqrtA * y0 * H")?;
    Ok((classical, ctx.cut(&printed), ctx.cut(&rederived)))
}

/// The three printed relations of the quotient, reduced.
pub fn printed_relation_checks(ctx: &StarContext, ideal: &SubmanifoldIdeal) -> Result<Vec<Check>> {
    let f = ctx.parse("1/2 * y- * y+ + a/2 * y0 * y0 - c")?;
    let df = ctx.parse("1/2 * (y- * eta+ + eta- * y+) + a * y0 * eta0")?;
    let (classical, printed, rederived) = dependence_relations(ctx)?;
    Ok(vec![
        Check::zero("submanifold.relation.f", &ideal.reduce(&ctx.cut(&f))?),
        Check::zero("submanifold.relation.df", &ideal.reduce(&ctx.cut(&df))?),
        Check::zero("submanifold.relation.dependence", &printed),
        Check::zero("submanifold.relation.dependence-rederived", &rederived),
        Check::zero("submanifold.relation.dependence-classical", &classical),
    ])
}

/// Monomials in `y` and `eta` (form degree at most one) of total degree at
/// most `max_degree`.
pub fn function_form_monomials(max_degree: u32) -> Vec<CalcElement> {
    corpus(max_degree, false)
}

/// Monomials in `eta`, `y` and `d` of total degree at most `max_degree`.
pub fn calculus_monomials(max_degree: u32) -> Vec<CalcElement> {
    corpus(max_degree, true)
}

fn corpus(max_degree: u32, with_d: bool) -> Vec<CalcElement> {
    let mut out = Vec::new();
    let masks: Vec<u8> = if with_d { (0..8).collect() } else { vec![0, 1 << PLUS, 1 << MINUS, 1 << ZERO] };
    let dmax = if with_d { max_degree } else { 0 };
    for xi in masks {
        let p = xi.count_ones();
        if p > max_degree {
            continue;
        }
        let budget = max_degree - p;
        for exps in exponent_vectors(6, budget) {
            if exps[3..].iter().sum::<u32>() > dmax {
                continue;
            }
            let mut m = Monomial::ONE;
            m.xi = xi;
            for k in 0..3 {
                m.x[k] = exps[k] as u16;
                m.d[k] = exps[k + 3] as u16;
            }
            out.push(CalcElement::monomial(Frame::Weight, 3, m, Scalar::one()));
        }
    }
    out
}

fn exponent_vectors(len: usize, budget: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for e in 0..=budget {
        for mut rest in exponent_vectors(len - 1, budget - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// `alpha * f = alpha f = f * alpha` (and for `df_c`) on every calculus
/// monomial of degree at most `max_degree`.
pub fn star_stability_suite(ctx: &StarContext, ideal: &SubmanifoldIdeal, max_degree: u32) -> Result<Vec<Check>> {
    let corpus = calculus_monomials(max_degree);
    let nested: Vec<Vec<Check>> = corpus
        .par_iter()
        .map(|alpha| {
            let id = format!("submanifold.stability.[{}]", alpha);
            ideal.star_stability(ctx, &id, alpha)
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// Deterministic sample pairs from the `y`, `eta` corpus of degree at most
/// three, with combined form degree at most one.
pub fn diagram_samples(count: usize) -> Vec<(CalcElement, CalcElement)> {
    let corpus = function_form_monomials(3);
    let n = corpus.len();
    let mut out = Vec::with_capacity(count);
    let mut k = 0usize;
    while out.len() < count {
        let i = (k * 37 + 11) % n;
        let j = (k * 53 + 29) % n;
        k += 1;
        let a = &corpus[i] + &corpus[(i + 1) % n].scale(&Scalar::from_int(-2));
        let b = &corpus[j];
        if max_form_degree(&a) + max_form_degree(b) <= 1 {
            out.push((a, b.clone()));
        }
    }
    out
}

fn max_form_degree(a: &CalcElement) -> u32 {
    a.terms().map(|(m, _)| m.xi_degree()).max().unwrap_or(0)
}

/// `reduce(a * b) = reduce(reduce(a) * reduce(b))` on sample pairs, at
/// `nu` and in the classical limit, plus `(f_c, b)` giving zero on both sides.
pub fn diagram_suite(
    ctx: &StarContext,
    ideal: &SubmanifoldIdeal,
    samples: &[(CalcElement, CalcElement)],
) -> Result<Vec<Check>> {
    let mut out: Vec<Check> = samples
        .par_iter()
        .enumerate()
        .map(|(k, (a, b))| ideal.diagram_check(ctx, &format!("submanifold.diagram.{k:02}"), a, b))
        .collect::<Result<_>>()?;
    for (k, (a, b)) in samples.iter().enumerate().take(10) {
        let lhs = ideal.reduce(&(a * b))?;
        let rhs = ideal.reduce(&(&ideal.reduce(a)? * &ideal.reduce(b)?))?;
        out.push(Check::elements(format!("submanifold.diagram-classical.{k:02}"), &lhs, &rhs));
    }
    if let Some((_, b)) = samples.first() {
        let fb = ideal.reduce(&ctx.cut(&ctx.star(ideal.f(), b)?))?;
        out.push(Check::zero("submanifold.diagram.generator", &fb));
    }
    Ok(out)
}

/// Jordanian twist on `H` and the non-tangent field `E' = y+ d0`
/// (`[H, E'] = 2E'`, `E' |> f_c = a y+ y0`).
pub fn non_tangent_context(surds: &Arc<Surds>, order: u32, mode: crate::star::Mode) -> Result<StarContext> {
    let w = Frame::Weight;
    let [h, _, _] = crate::expr::sl2_fields(surds);
    let e = &CalcElement::x(w, 3, PLUS) * &CalcElement::d(w, 3, ZERO);
    let lie = Arc::new(LieAlgebra::from_fields(vec!["H".into(), "E'".into()], vec![h, e], surds.clone())?);
    let twist = Arc::new(crate::twist::TwistSeries::jordanian(lie, 0, 1, order)?);
    StarContext::new(twist, mode)
}

/// Tangent generators of the quadric, as tangency checks.
pub fn tangency_suite(q: &QuadricSpec) -> Vec<Check> {
    q.tangent_generators().iter().map(|(n, l)| q.check_tangency(&format!("submanifold.tangency.{n}"), l)).collect()
}

/// All submanifold checks for the hyperboloid with symbolic `c`.
pub fn submanifold_suite(ctx: &StarContext) -> Result<Vec<Check>> {
    let surds = ctx.surds().clone();
    let q = QuadricSpec::hyperboloid(&surds, Scalar::c_pow(1));
    let ideal = SubmanifoldIdeal::hyperboloid(&surds, Scalar::c_pow(1));
    let mut out = q.bracket_table_checks();
    out.extend(tangency_suite(&q));
    out.extend(printed_relation_checks(ctx, &ideal)?);
    out.extend(star_stability_suite(ctx, &ideal, 3)?);
    out.extend(diagram_suite(ctx, &ideal, &diagram_samples(50))?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, sl2_fields, ExprContext};
    use crate::star::Mode;

    #[test]
    fn hyperboloid_quadric() {
        let s = Surds::from_ints(2, 3);
        let q = QuadricSpec::hyperboloid(&s, Scalar::c_pow(1));
        let ctx = ExprContext::cartesian(s.clone(), 3);
        assert_eq!(q.f(), parse("1/2 x1^2 + a/2 * x2^2 - b/2 * x3^2 - c", &ctx).unwrap());
        let gens = q.tangent_generators();
        assert_eq!(gens[1].0, "L13");
        assert_eq!(gens[1].1, parse("x1 d3 + b x3 d1", &ctx).unwrap());
        for (name, l) in &gens {
            assert!(q.check_tangency(name, l).passed());
        }
        let d1 = CalcElement::d(Frame::Cartesian, 3, 0);
        let c = q.check_tangency("d1", &d1);
        assert!(!c.passed());
        assert_eq!(c.residual, "x1");
        assert!(q.bracket_table_checks().iter().all(|c| c.passed()));
        assert!(q.tangent_algebra().unwrap().jacobi_holds());
        let wctx = ExprContext::new(s.clone());
        assert_eq!(q.f_weight().unwrap(), parse("1/2 y+ y- + a/2 * y0^2 - c", &wctx).unwrap());
    }

    #[test]
    fn sl2_from_tangent_generators() {
        let s = Surds::from_ints(3, 2);
        let q = QuadricSpec::hyperboloid(&s, Scalar::c_pow(1));
        let gens: BTreeMap<String, CalcElement> = q.tangent_generators().into_iter().collect();
        let sa = Scalar::sqrt_a(&s).inverse_unit().unwrap();
        let sb = Scalar::sqrt_b(&s).inverse_unit().unwrap();
        let h = gens["L13"].scale(&(&Scalar::from_int(2) * &sb));
        let e_p = &gens["L12"].scale(&sa) + &gens["L23"].scale(&(&sa * &sb));
        let e_m = &gens["L12"].scale(&sa) - &gens["L23"].scale(&(&sa * &sb));
        let [wh, wep, wem] = sl2_fields(&s);
        assert_eq!(change_frame(&h, Frame::Weight, &s).unwrap(), wh);
        assert_eq!(change_frame(&e_p, Frame::Weight, &s).unwrap(), wep);
        assert_eq!(change_frame(&e_m, Frame::Weight, &s).unwrap(), wem);
    }

    #[test]
    fn reduction_rules() {
        let s = Surds::from_ints(2, 1);
        let ideal = SubmanifoldIdeal::hyperboloid(&s, Scalar::c_pow(1));
        let ctx = ExprContext::new(s.clone());
        let p = |t: &str| parse(t, &ctx).unwrap();
        assert_eq!(ideal.reduce(&p("y- y+")).unwrap(), p("2*c - a y0^2"));
        assert!(ideal.reduce(ideal.f()).unwrap().is_zero());
        assert!(ideal.reduce(ideal.df()).unwrap().is_zero());
        let r = ideal.reduce(&p("y+^2 y-^2 y0 eta0")).unwrap();
        assert_eq!(ideal.reduce(&r).unwrap(), r);
        assert!(matches!(ideal.reduce(&p("eta+ eta0")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn printed_relations() {
        let s = Surds::from_ints(2, 1);
        let ctx = StarContext::hyperboloid(&s, 6, Mode::Exact).unwrap();
        let ideal = SubmanifoldIdeal::hyperboloid(&s, Scalar::c_pow(1));
        let checks = printed_relation_checks(&ctx, &ideal).unwrap();
        let status: BTreeMap<&str, bool> = checks.iter().map(|c| (c.id.as_str(), c.passed())).collect();
        assert!(status["submanifold.relation.f"]);
        assert!(status["submanifold.relation.df"]);
        assert!(status["submanifold.relation.dependence-rederived"]);
        assert!(status["submanifold.relation.dependence-classical"]);
        // the printed third relation keeps a y+ * E+ remainder
        assert!(!status["submanifold.relation.dependence"]);
    }

    #[test]
    fn suite_and_mutation() {
        let s = Surds::from_ints(1, 1);
        let ctx = StarContext::hyperboloid(&s, 6, Mode::Exact).unwrap();
        let checks = submanifold_suite(&ctx).unwrap();
        let failing: Vec<_> = checks.iter().filter(|c| !c.passed()).map(|c| c.id.as_str()).collect();
        assert_eq!(failing, ["submanifold.relation.dependence"]);
        assert!(checks.iter().filter(|c| c.id.starts_with("submanifold.diagram.")).count() >= 50);

        let bad = non_tangent_context(&s, 6, Mode::Exact).unwrap();
        let ideal = SubmanifoldIdeal::hyperboloid(&s, Scalar::c_pow(1));
        // H |> y0 = 0, so only fields of nonzero weight see the mutation
        let y0 = CalcElement::x(Frame::Weight, 3, ZERO);
        assert!(ideal.star_stability(&bad, "mutant", &y0).unwrap().iter().all(|c| c.passed()));
        let yp = CalcElement::x(Frame::Weight, 3, PLUS);
        assert!(ideal.star_stability(&bad, "mutant", &yp).unwrap().iter().any(|c| !c.passed()));
    }

    #[test]
    fn corpus_sizes() {
        // 9 generators of which 3 anticommute
        assert_eq!(calculus_monomials(1).len(), 10);
        assert_eq!(function_form_monomials(1).len(), 7);
    }

    #[test]
    fn star_stability_small_corpus() {
        let s = Surds::from_ints(1, 1);
        let ctx = StarContext::hyperboloid(&s, 6, Mode::Exact).unwrap();
        let ideal = SubmanifoldIdeal::hyperboloid(&s, Scalar::c_pow(1));
        for (k, alpha) in function_form_monomials(2).iter().enumerate() {
            for c in ideal.star_stability(&ctx, &format!("a{k}"), alpha).unwrap() {
                assert!(c.passed(), "{}: {}", c.id, c.residual);
            }
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    /// Functions and one-forms, where reduction is canonical.
    fn function_or_form(max: u16) -> impl Strategy<Value = CalcElement> {
        (prop::array::uniform3(0u16..=2), prop::option::of(0usize..3), -3i64..=3)
            .prop_filter("degree", move |(x, _, n)| x.iter().sum::<u16>() <= max && *n != 0)
            .prop_map(|(x, eta, n)| {
                let mut m = Monomial::ONE;
                m.x[..3].copy_from_slice(&x);
                if let Some(i) = eta {
                    m.xi = 1 << i;
                }
                CalcElement::monomial(Frame::Weight, 3, m, Scalar::from_int(n))
            })
    }

    fn ideal() -> SubmanifoldIdeal {
        SubmanifoldIdeal::hyperboloid(&Surds::from_ints(2, 3), Scalar::c_pow(1))
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(a in function_or_form(4)) {
            let ideal = ideal();
            let r = ideal.reduce(&a).unwrap();
            prop_assert_eq!(ideal.reduce(&r).unwrap(), r);
        }

        #[test]
        fn ideal_elements_reduce_to_zero(a in function_or_form(3)) {
            let ideal = ideal();
            prop_assert!(ideal.reduce(&(ideal.f() * &a)).unwrap().is_zero());
            if a.form_degree() == Some(0) {
                prop_assert!(ideal.reduce(&(ideal.df() * &a)).unwrap().is_zero());
            }
        }
    }
}
