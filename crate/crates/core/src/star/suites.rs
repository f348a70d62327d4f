//! Golden relation suites for the hyperboloid twist and generic checks of
//! the twisted calculus relations for any twist.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::StarContext;
use crate::calculus::{CalcElement, Frame, Monomial, MINUS, PLUS, ZERO};
use crate::error::{Error, Result};
use crate::expr::upper_derivative;
use crate::report::Check;
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
}

pub const COMMUTATION: &str = "hyperboloid-commutation";
pub const LEIBNIZ: &str = "hyperboloid-leibniz";
pub const WEDGE: &str = "hyperboloid-wedge";
pub const GENERATORS: &str = "hyperboloid-generators";

/// The fixture-backed suites.
pub const FIXTURE_SUITES: [&str; 4] = [COMMUTATION, LEIBNIZ, WEDGE, GENERATORS];

pub fn embedded_fixture(name: &str) -> Option<&'static str> {
    match name {
        COMMUTATION => Some(include_str!("../../fixtures/hyperboloid-commutation.json")),
        LEIBNIZ => Some(include_str!("../../fixtures/hyperboloid-leibniz.json")),
        WEDGE => Some(include_str!("../../fixtures/hyperboloid-wedge.json")),
        GENERATORS => Some(include_str!("../../fixtures/hyperboloid-generators.json")),
        _ => None,
    }
}

pub fn parse_fixtures(src: &str) -> Result<Vec<Fixture>> {
    serde_json::from_str(src).map_err(|e| Error::Config(format!("fixture JSON: {e}")))
}

/// Fixtures for `name`, read from `dir/<name>.json` when a directory is
/// given, otherwise the embedded copy.
pub fn load_fixtures(name: &str, dir: Option<&Path>) -> Result<Vec<Fixture>> {
    if let Some(dir) = dir {
        let path = dir.join(format!("{name}.json"));
        if path.exists() {
            let src = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            return parse_fixtures(&src);
        }
    }
    parse_fixtures(embedded_fixture(name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?)
}

/// Replace the placeholder generator `u+ u- u0` by `base`.
pub fn instantiate(src: &str, base: &str) -> String {
    let chars: Vec<char> = src.chars().collect();
    let mut out = String::with_capacity(src.len());
    for (k, &ch) in chars.iter().enumerate() {
        let prev_alpha = k > 0 && chars[k - 1].is_ascii_alphabetic();
        let next_sign = matches!(chars.get(k + 1), Some('+' | '-' | '0'));
        if ch == 'u' && !prev_alpha && next_sign {
            out.push_str(base);
        } else {
            out.push(ch);
        }
    }
    out
}

/// Every fixture obtained by flipping a single binary `+`/`-` on either
/// side. Binary operators are the ones written with surrounding spaces.
pub fn sign_mutations(fx: &Fixture) -> Vec<Fixture> {
    let mut out = Vec::new();
    for side in 0..2 {
        let text = if side == 0 { &fx.lhs } else { &fx.rhs };
        let bytes = text.as_bytes();
        for k in 1..bytes.len().saturating_sub(1) {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] == b' ' && bytes[k + 1] == b' ' {
                let mut m = text.clone().into_bytes();
                m[k] = if bytes[k] == b'+' { b'-' } else { b'+' };
                let m = String::from_utf8(m).expect("ascii");
                let mut f = fx.clone();
                f.id = format!("{}~flip{}@{k}", fx.id, if side == 0 { "L" } else { "R" });
                if side == 0 {
                    f.lhs = m;
                } else {
                    f.rhs = m;
                }
                out.push(f);
            }
        }
    }
    out
}

/// Evaluate `lhs - rhs` for one fixture.
pub fn run_fixture(ctx: &StarContext, id: &str, fx: &Fixture) -> Check {
    let eval = || -> Result<Check> {
        let lhs = ctx.cut(&ctx.parse(&fx.lhs)?);
        let rhs = ctx.cut(&ctx.parse(&fx.rhs)?);
        Ok(Check::elements(id, &lhs, &rhs))
    };
    eval().unwrap_or_else(|e| Check::error(id, &e))
}

/// Expand a suite's fixtures into concrete `(id, fixture)` instances. The
/// commutation lines hold for both coordinates and upper derivatives.
pub fn expand(name: &str, fixtures: &[Fixture]) -> Vec<(String, Fixture)> {
    let mut out = Vec::new();
    for fx in fixtures {
        if name == COMMUTATION {
            for base in ["y", "D"] {
                let f = Fixture { id: fx.id.clone(), lhs: instantiate(&fx.lhs, base), rhs: instantiate(&fx.rhs, base) };
                out.push((format!("{name}.{base}.{}", fx.id), f));
            }
        } else {
            out.push((format!("{name}.{}", fx.id), fx.clone()));
        }
    }
    out
}

pub fn run_fixture_suite(ctx: &StarContext, name: &str, fixtures: &[Fixture]) -> Vec<Check> {
    expand(name, fixtures).par_iter().map(|(id, fx)| run_fixture(ctx, id, fx)).collect()
}

// ---- the closed star formula on generators ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenFamily {
    Y,
    /// Upper-index derivatives.
    D,
    Eta,
}

impl GenFamily {
    pub const ALL: [GenFamily; 3] = [GenFamily::Y, GenFamily::D, GenFamily::Eta];

    pub fn element(self, i: usize, ctx: &StarContext) -> CalcElement {
        match self {
            GenFamily::Y => CalcElement::x(Frame::Weight, 3, i),
            GenFamily::D => upper_derivative(i, ctx.surds()),
            GenFamily::Eta => CalcElement::xi(Frame::Weight, 3, i),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GenFamily::Y => "y",
            GenFamily::D => "D",
            GenFamily::Eta => "eta",
        }
    }
}

pub fn weight_label(i: usize) -> &'static str {
    match i {
        PLUS => "+",
        MINUS => "-",
        _ => "0",
    }
}

/// `u^i w^j + i nu (d^i_- - d^i_+) u^i (d^j_0 w^+ / sqrt a - 2 sqrt a d^j_- w^0)
///  + d^i_+ d^j_- 2 nu^2 u^+ w^+`.
pub fn closed_formula(ctx: &StarContext, u: GenFamily, i: usize, w: GenFamily, j: usize) -> CalcElement {
    let s = ctx.surds();
    let ue = |k| u.element(k, ctx);
    let we = |k| w.element(k, ctx);
    let mut out = &ue(i) * &we(j);
    let sign = match i {
        MINUS => 1,
        PLUS => -1,
        _ => 0,
    };
    if sign != 0 {
        let sa = Scalar::sqrt_a(s);
        let inner = match j {
            ZERO => we(PLUS).scale(&sa.inverse_unit().expect("unit")),
            MINUS => we(ZERO).scale(&(&Scalar::from_int(-2) * &sa)),
            _ => we(j).zero_like(),
        };
        out += &(&ue(i) * &inner).scale(&Scalar::i_nu().scale_rational(&crate::scalar::rat(sign, 1)));
    }
    if i == PLUS && j == MINUS {
        out += &(&ue(PLUS) * &we(PLUS)).scale(&Scalar::nu_pow(2).scale_rational(&crate::scalar::rat(2, 1)));
    }
    out
}

/// All 81 ordered generator pairs against the closed formula.
pub fn formula_suite(ctx: &StarContext) -> Vec<Check> {
    let mut jobs = Vec::new();
    for u in GenFamily::ALL {
        for i in [PLUS, MINUS, ZERO] {
            for w in GenFamily::ALL {
                for j in [PLUS, MINUS, ZERO] {
                    jobs.push((u, i, w, j));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|&(u, i, w, j)| {
            let id = format!("formula.{}{}*{}{}", u.name(), weight_label(i), w.name(), weight_label(j));
            match ctx.star(&u.element(i, ctx), &w.element(j, ctx)) {
                Ok(got) => Check::elements(id, &ctx.cut(&got), &closed_formula(ctx, u, i, w, j)),
                Err(e) => Check::error(id, &e),
            }
        })
        .collect()
}

/// Exact and truncated evaluation agree to the truncation order on every
/// generator pair.
pub fn exact_vs_truncated(exact: &StarContext, truncated: &StarContext) -> Vec<Check> {
    let n = truncated.order();
    let mut jobs = Vec::new();
    for u in GenFamily::ALL {
        for i in [PLUS, MINUS, ZERO] {
            for w in GenFamily::ALL {
                for j in [PLUS, MINUS, ZERO] {
                    jobs.push((u, i, w, j));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|&(u, i, w, j)| {
            let id = format!("exact-vs-truncated.{}{}*{}{}", u.name(), weight_label(i), w.name(), weight_label(j));
            let run = || -> Result<Check> {
                let a = exact.star(&u.element(i, exact), &w.element(j, exact))?.truncate(n);
                let b = truncated.star(&u.element(i, truncated), &w.element(j, truncated))?;
                Ok(Check::elements(id.clone(), &a, &b))
            };
            run().unwrap_or_else(|e| Check::error(id.clone(), &e))
        })
        .collect()
}

// ---- generic relations for any twist ----

/// `R[mu][nu][i][j] = (tau^{mu i} (x) tau^{nu j})(R)` over extended indices.
pub fn r_components(ctx: &StarContext) -> Vec<Vec<Vec<Vec<Scalar>>>> {
    let lie = ctx.lie();
    let n = ctx.dim() + 1;
    let order = Some(ctx.order());
    let mut out = vec![vec![vec![vec![Scalar::zero(); n]; n]; n]; n];
    let mut cache = std::collections::BTreeMap::new();
    let mut tau = |m: &crate::hopf::Pbw| -> Vec<Vec<Scalar>> {
        cache
            .entry(m.clone())
            .or_insert_with(|| lie.tau_matrix(&crate::hopf::Uea::monomial(m.clone(), Scalar::one())))
            .clone()
    };
    for (legs, c) in ctx.twist().r().terms() {
        let t0 = tau(&legs[0]);
        let t1 = tau(&legs[1]);
        for mu in 0..n {
            for i in 0..n {
                if t0[mu][i].is_zero() {
                    continue;
                }
                let k = c.mul_truncated(&t0[mu][i], order);
                for nu in 0..n {
                    for j in 0..n {
                        if !t1[nu][j].is_zero() {
                            out[mu][nu][i][j] += &k.mul_truncated(&t1[nu][j], order);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Instances of the twisted calculus relations: unit laws, braided
/// commutation of coordinates, forms and dual-frame derivatives, and the
/// twisted Heisenberg relation.
pub fn generic_relations(ctx: &StarContext) -> Result<Vec<Check>> {
    let n = ctx.dim();
    let f = ctx.frame();
    let order = ctx.order();
    let r = r_components(ctx);
    let (dp, xi) = ctx.dual_frame()?;
    // extended coordinates: x^0 is the unit
    let x = |mu: usize| if mu == 0 { CalcElement::one(f, n) } else { CalcElement::x(f, n, mu - 1) };
    let st = |a: &CalcElement, b: &CalcElement| ctx.star(a, b).map(|v| v.truncate(order));
    let mut checks = Vec::new();
    let one = CalcElement::one(f, n);
    for i in 0..n {
        for (name, g) in [("x", x(i + 1)), ("xi", xi[i].clone()), ("dp", dp[i].clone())] {
            checks.push(Check::elements(format!("generic.unit.{name}{i}.left"), &st(&one, &g)?, &g.truncate(order)));
            checks.push(Check::elements(format!("generic.unit.{name}{i}.right"), &st(&g, &one)?, &g.truncate(order)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            // x^i * x^j = x^nu * x^mu R_{mu nu}^{ij}
            let lhs = st(&x(i + 1), &x(j + 1))?;
            let mut rhs = lhs.zero_like();
            for mu in 0..=n {
                for nu in 0..=n {
                    let c = &r[mu][nu][i + 1][j + 1];
                    if !c.is_zero() {
                        rhs += &st(&x(nu), &x(mu))?.scale(c);
                    }
                }
            }
            checks.push(Check::elements(format!("generic.xx.{i}{j}"), &lhs, &rhs.truncate(order)));

            // xi^i * x^j = x^nu * xi^h R_{h nu}^{ij}
            let lhs = st(&xi[i], &x(j + 1))?;
            let mut rhs = lhs.zero_like();
            for h in 0..n {
                for nu in 0..=n {
                    let c = &r[h + 1][nu][i + 1][j + 1];
                    if !c.is_zero() {
                        rhs += &st(&x(nu), &xi[h])?.scale(c);
                    }
                }
            }
            checks.push(Check::elements(format!("generic.xix.{i}{j}"), &lhs, &rhs.truncate(order)));

            // d'_i * d'_j = R_{ij}^{hk} d'_k * d'_h
            let lhs = st(&dp[i], &dp[j])?;
            let mut rhs = lhs.zero_like();
            for h in 0..n {
                for k in 0..n {
                    let c = &r[i + 1][j + 1][h + 1][k + 1];
                    if !c.is_zero() {
                        rhs += &st(&dp[k], &dp[h])?.scale(c);
                    }
                }
            }
            checks.push(Check::elements(format!("generic.dd.{i}{j}"), &lhs, &rhs.truncate(order)));

            // d'_i * xi^j as printed (plain exchange) and in braided form
            // R_{ki}^{jh} xi^k * d'_h
            let lhs = st(&dp[i], &xi[j])?;
            checks.push(Check::elements(format!("generic.dxi-exchange.{i}{j}"), &lhs, &st(&xi[j], &dp[i])?));
            let mut rhs = lhs.zero_like();
            for k in 0..n {
                for h in 0..n {
                    let c = &r[k + 1][i + 1][j + 1][h + 1];
                    if !c.is_zero() {
                        rhs += &st(&xi[k], &dp[h])?.scale(c);
                    }
                }
            }
            checks.push(Check::elements(format!("generic.dxi.{i}{j}"), &lhs, &rhs.truncate(order)));

            // xi^i * xi^j = -xi^k * xi^h R_{hk}^{ij}
            let lhs = st(&xi[i], &xi[j])?;
            let mut rhs = lhs.zero_like();
            for h in 0..n {
                for k in 0..n {
                    let c = &r[h + 1][k + 1][i + 1][j + 1];
                    if !c.is_zero() {
                        rhs -= &st(&xi[k], &xi[h])?.scale(c);
                    }
                }
            }
            checks.push(Check::elements(format!("generic.xixi.{i}{j}"), &lhs, &rhs.truncate(order)));

            // d'_i * x^j = R_{mu i}^{jk} x^mu * d'_k + delta_i^j
            let lhs = st(&dp[i], &x(j + 1))?;
            let mut rhs = if i == j { one.clone() } else { lhs.zero_like() };
            for mu in 0..=n {
                for k in 0..n {
                    let c = &r[mu][i + 1][j + 1][k + 1];
                    if !c.is_zero() {
                        rhs += &st(&x(mu), &dp[k])?.scale(c);
                    }
                }
            }
            checks.push(Check::elements(format!("generic.dx.{i}{j}"), &lhs, &rhs.truncate(order)));
        }
    }
    if ctx.is_unitary() {
        // (x^i)^{*} = x^mu tau^{mu i}(S(beta))
        let tsb = ctx.lie().tau_matrix(ctx.twist().s_beta());
        for i in 0..n {
            let lhs = ctx.involution(&x(i + 1))?.truncate(order);
            let mut rhs = lhs.zero_like();
            for mu in 0..=n {
                rhs += &x(mu).scale(&tsb[mu][i + 1]);
            }
            checks.push(Check::elements(format!("generic.involution.x{i}"), &lhs, &rhs.truncate(order)));
        }
    }
    Ok(checks)
}

/// The twisted bracket against its braided form on the basis fields.
pub fn bracket_suite(ctx: &StarContext) -> Result<Vec<Check>> {
    let lie = ctx.lie();
    let d = lie.dim();
    let mut checks = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let (x, y) = (lie.field(a), lie.field(b));
            let lhs = ctx.cut(&ctx.bracket(x, y)?);
            let rhs = ctx.cut(&ctx.bracket_via_braiding(x, y)?);
            checks.push(Check::elements(format!("bracket.{}.{}", lie.names()[a], lie.names()[b]), &lhs, &rhs));
        }
    }
    Ok(checks)
}

/// The hyperboloid suite list at one parameter value; `mode` selects the
/// evaluator.
pub fn hyperboloid_suites(ctx: &StarContext, fixtures_dir: Option<&Path>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for name in FIXTURE_SUITES {
        out.extend(run_fixture_suite(ctx, name, &load_fixtures(name, fixtures_dir)?));
    }
    Ok(out)
}

// ---- random samples ----

/// A random normal-ordered monomial in `xi`, `y`, `d` of degree at most
/// `max_degree`, with a small nonzero rational coefficient.
pub fn random_monomial(rng: &mut impl Rng, max_degree: u32) -> CalcElement {
    let degree = rng.gen_range(0..=max_degree);
    let mut m = Monomial::ONE;
    for _ in 0..degree {
        let i = rng.gen_range(0..3);
        match rng.gen_range(0..3) {
            0 => m.x[i] += 1,
            1 => m.d[i] += 1,
            // repeated xi would vanish; fall back to a coordinate
            _ if m.xi & (1 << i) != 0 => m.x[i] += 1,
            _ => m.xi |= 1 << i,
        }
    }
    let c = Scalar::from_ratio(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=2));
    CalcElement::monomial(Frame::Weight, 3, m, c)
}

/// Seeded sample of `count` monomial tuples of length `arity`.
pub fn sample_tuples(seed: u64, count: usize, arity: usize, max_degree: u32) -> Vec<Vec<CalcElement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..arity).map(|_| random_monomial(&mut rng, max_degree)).collect()).collect()
}

/// `(a * b) * c = a * (b * c)`.
pub fn associativity_suite(ctx: &StarContext, triples: &[Vec<CalcElement>]) -> Vec<Check> {
    triples
        .par_iter()
        .enumerate()
        .map(|(k, t)| {
            let id = format!("associativity.{k:03}");
            let r = (|| {
                let lhs = ctx.star(&ctx.star(&t[0], &t[1])?, &t[2])?;
                let rhs = ctx.star(&t[0], &ctx.star(&t[1], &t[2])?)?;
                Ok::<_, Error>(Check::elements(id.clone(), &ctx.cut(&lhs), &ctx.cut(&rhs)))
            })();
            r.unwrap_or_else(|e| Check::error(id, &e))
        })
        .collect()
}

/// `h |> (a * b) = (h_(1) |> a) * (h_(2) |> b)` with the twisted coproduct,
/// for every basis element `h`.
pub fn module_algebra_suite(ctx: &StarContext, pairs: &[Vec<CalcElement>]) -> Vec<Check> {
    let lie = ctx.lie();
    pairs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, p)| {
            (0..lie.dim())
                .map(|a| {
                    let id = format!("module-algebra.{k:03}.{}", lie.names()[a]);
                    ctx.module_algebra_check(&id, &lie.gen(a), &p[0], &p[1]).unwrap_or_else(|e| Check::error(id, &e))
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Surds;
    use crate::star::Mode;

    #[test]
    fn placeholder_substitution() {
        assert_eq!(instantiate("u+ * u0 - I*nu/sqrtA * u+", "y"), "y+ * y0 - I*nu/sqrtA * y+");
    }

    #[test]
    fn mutations_flip_binary_signs_only() {
        let fx = Fixture { id: "t".into(), lhs: "u- * u0".into(), rhs: "u0 * u- - I*nu/sqrtA * u- * u+".into() };
        let ms = sign_mutations(&fx);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].rhs, "u0 * u- + I*nu/sqrtA * u- * u+");
    }

    #[test]
    fn golden_suites_pass_exactly() {
        for a in [1, 2] {
            let ctx = StarContext::hyperboloid(&Surds::from_ints(a, 1), 6, Mode::Exact).unwrap();
            for c in hyperboloid_suites(&ctx, None).unwrap() {
                assert!(c.passed(), "a={a} {}: {}", c.id, c.residual);
            }
        }
    }

    #[test]
    fn formula_and_generic_relations() {
        let s = Surds::from_ints(5, 3);
        let ex = StarContext::hyperboloid(&s, 6, Mode::Exact).unwrap();
        let tr = StarContext::hyperboloid(&s, 6, Mode::Truncated).unwrap();
        let mut all = formula_suite(&ex);
        all.extend(exact_vs_truncated(&ex, &tr));
        all.extend(generic_relations(&ex).unwrap());
        all.extend(bracket_suite(&tr).unwrap());
        // the plain exchange of d' and xi does not survive the Jordanian twist
        assert!(all.iter().any(|c| c.id.starts_with("generic.dxi-exchange") && !c.passed()));
        all.retain(|c| !c.id.starts_with("generic.dxi-exchange"));
        let failed: Vec<_> = all.iter().filter(|c| !c.passed()).map(|c| format!("{}: {}", c.id, c.residual)).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn random_samples_associate() {
        let ctx = StarContext::hyperboloid(&Surds::from_ints(2, 1), 6, Mode::Exact).unwrap();
        let triples = sample_tuples(7, 20, 3, 4);
        assert!(associativity_suite(&ctx, &triples).iter().all(|c| c.passed()));
        let pairs = sample_tuples(8, 10, 2, 3);
        let checks = module_algebra_suite(&ctx, &pairs);
        assert_eq!(checks.len(), 30);
        assert!(checks.iter().all(|c| c.passed()), "{:?}", checks.iter().find(|c| !c.passed()));
    }
}
