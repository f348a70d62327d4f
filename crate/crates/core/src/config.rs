//! Run configuration and the registry of verification suites.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{CalcElement, Frame};
use crate::error::{Error, Result};
use crate::expr::parse_scalar;
use crate::geometry::{geometry_suite, GeometryContext};
use crate::hopf::LieAlgebra;
use crate::report::{Check, Report};
use crate::scalar::{Scalar, Surds};
use crate::star::suites::{
    associativity_suite, bracket_suite, exact_vs_truncated, formula_suite, generic_relations, load_fixtures,
    module_algebra_suite, run_fixture_suite, sample_tuples, FIXTURE_SUITES,
};
use crate::star::{Mode, StarContext};
use crate::submanifold::{submanifold_suite, tangency_suite, QuadricSpec};
use crate::twist::{hopf_closed_form_checks, TwistSeries, DEFAULT_ORDER};

/// Environment variable overriding the truncation order.
pub const ORDER_ENV: &str = "TWISTCALC_ORDER";

pub const TWIST_AXIOMS: &str = "twist-axioms";
pub const HOPF_CLOSED_FORMS: &str = "hopf-closed-forms";
pub const FORMULA: &str = "formula";
pub const GENERIC_RELATIONS: &str = "generic-relations";
pub const ASSOCIATIVITY: &str = "associativity";
pub const MODULE_ALGEBRA: &str = "module-algebra";
pub const SUBMANIFOLD: &str = "submanifold";
pub const GEOMETRY: &str = "geometry";

/// Every registered suite, in run order.
pub fn suite_names() -> Vec<&'static str> {
    let mut out = vec![TWIST_AXIOMS, HOPF_CLOSED_FORMS];
    out.extend(FIXTURE_SUITES);
    out.extend([FORMULA, GENERIC_RELATIONS, ASSOCIATIVITY, MODULE_ALGEBRA, SUBMANIFOLD, GEOMETRY]);
    out
}

/// Twist declaration.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TwistDecl {
    Jordanian {
        #[serde(rename = "H")]
        h: String,
        #[serde(rename = "E")]
        e: String,
    },
    Abelian {
        pairs: Vec<(String, String)>,
    },
    Identity,
}

impl Default for TwistDecl {
    fn default() -> Self {
        TwistDecl::Jordanian { h: "H".into(), e: "E+".into() }
    }
}

/// `a`, `b` rational and positive, `c` rational or symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub a: BigRational,
    pub b: BigRational,
    /// `None` keeps `c` symbolic.
    pub c: Option<BigRational>,
}

impl Default for Params {
    fn default() -> Self {
        let one = BigRational::from_integer(BigInt::from(1));
        Params { a: one.clone(), b: one, c: None }
    }
}

impl Params {
    /// `a=1,b=2/3,c=symbolic`; missing keys keep their defaults.
    pub fn parse(src: &str) -> Result<Self> {
        let mut out = Params::default();
        for part in src.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) =
                part.split_once('=').ok_or_else(|| Error::Config(format!("parameter {part:?} is not key=value")))?;
            out.set(k.trim(), v.trim())?;
        }
        Ok(out)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let rational = |v: &str| -> Result<BigRational> {
            parse_scalar(v, &Surds::unit())?
                .as_rational()
                .ok_or_else(|| Error::Config(format!("parameter {key} must be rational, got {v:?}")))
        };
        match key {
            "a" => self.a = rational(value)?,
            "b" => self.b = rational(value)?,
            "c" if value == "symbolic" => self.c = None,
            "c" => self.c = Some(rational(value)?),
            _ => return Err(Error::Config(format!("unknown parameter {key:?} (a, b, c)"))),
        }
        Ok(())
    }

    pub fn surds(&self) -> Result<Arc<Surds>> {
        Surds::new(self.a.clone(), self.b.clone())
    }

    pub fn c_scalar(&self) -> Scalar {
        match &self.c {
            None => Scalar::c_pow(1),
            Some(r) => Scalar::from_rational(r.clone()),
        }
    }

    fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("a".into(), self.a.to_string());
        m.insert("b".into(), self.b.to_string());
        m.insert("c".into(), self.c.as_ref().map_or("symbolic".into(), |c| c.to_string()));
        m
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    algebra: Option<PathBuf>,
    quadric: Option<PathBuf>,
    #[serde(default)]
    twist: Option<TwistDecl>,
    order: Option<u32>,
    mode: Option<String>,
    #[serde(default)]
    suites: Option<Vec<String>>,
    output: Option<PathBuf>,
    #[serde(default)]
    params: BTreeMap<String, String>,
    fixtures: Option<PathBuf>,
    #[serde(default)]
    seed: Option<u64>,
}

/// Everything a verification run needs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: Option<PathBuf>,
    pub quadric: Option<PathBuf>,
    pub twist: TwistDecl,
    pub order: u32,
    pub mode: Mode,
    pub suites: Vec<String>,
    pub output: Option<PathBuf>,
    pub params: Params,
    pub fixtures: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebra: None,
            quadric: None,
            twist: TwistDecl::default(),
            order: DEFAULT_ORDER,
            mode: Mode::Exact,
            suites: vec!["all".into()],
            output: None,
            params: Params::default(),
            fixtures: None,
            seed: 2024,
        }
    }
}

impl RunConfig {
    /// Read a JSON config; relative paths resolve against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&src, base)
    }

    pub fn from_json(src: &str, base: &Path) -> Result<Self> {
        let f: ConfigFile = serde_json::from_str(src).map_err(|e| Error::Config(format!("config: {e}")))?;
        let resolve = |p: Option<PathBuf>| p.map(|p| if p.is_relative() { base.join(p) } else { p });
        let mut cfg = RunConfig {
            algebra: resolve(f.algebra),
            quadric: resolve(f.quadric),
            fixtures: resolve(f.fixtures),
            output: f.output,
            ..RunConfig::default()
        };
        if let Some(t) = f.twist {
            cfg.twist = t;
        }
        if let Some(n) = f.order {
            cfg.order = n;
        }
        if let Some(m) = f.mode {
            cfg.mode = m.parse()?;
        }
        if let Some(s) = f.suites {
            cfg.suites = s;
        }
        if let Some(s) = f.seed {
            cfg.seed = s;
        }
        for (k, v) in &f.params {
            cfg.params.set(k, v)?;
        }
        Ok(cfg)
    }

    /// `TWISTCALC_ORDER`, if set, replaces the order.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(ORDER_ENV) {
            self.order = v.trim().parse().map_err(|_| Error::Config(format!("{ORDER_ENV}={v:?} is not an order")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::Config(format!("order must be at least 2, got {}", self.order)));
        }
        self.expanded_suites().map(|_| ())
    }

    /// Suite list with `all` expanded; unknown names are errors.
    pub fn expanded_suites(&self) -> Result<Vec<String>> {
        let known = suite_names();
        let mut out: Vec<String> = Vec::new();
        for s in &self.suites {
            if s == "all" {
                out.extend(known.iter().map(|k| k.to_string()));
            } else if known.contains(&s.as_str()) {
                out.push(s.clone());
            } else {
                return Err(Error::UnknownSuite(s.clone()));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        out.retain(|s| seen.insert(s.clone()));
        Ok(out)
    }

    fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "algebra": self.algebra.as_ref().map(|p| p.display().to_string()),
            "quadric": self.quadric.as_ref().map(|p| p.display().to_string()),
            "twist": self.twist,
            "order": self.order,
            "mode": match self.mode { Mode::Exact => "exact", Mode::Truncated => "truncated" },
            "suites": self.suites,
            "params": self.params.echo(),
            "fixtures": self.fixtures.as_ref().map(|p| p.display().to_string()),
            "seed": self.seed,
        })
    }

    /// The Lie algebra: the configured file or the hyperboloid symmetry.
    pub fn lie_algebra(&self) -> Result<LieAlgebra> {
        match &self.algebra {
            Some(p) => {
                let src = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                LieAlgebra::from_json(&src)
            }
            None => Ok(LieAlgebra::sl2(&self.params.surds()?)),
        }
    }

    pub fn build_twist(&self, lie: Arc<LieAlgebra>) -> Result<TwistSeries> {
        let idx =
            |n: &str| lie.index_of(n).ok_or_else(|| Error::Config(format!("twist names unknown generator {n:?}")));
        match &self.twist {
            TwistDecl::Jordanian { h, e } => {
                let (h, e) = (idx(h)?, idx(e)?);
                TwistSeries::jordanian(lie, h, e, self.order)
            }
            TwistDecl::Abelian { pairs } => {
                let pairs = pairs.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
                TwistSeries::abelian(lie, &pairs, self.order)
            }
            TwistDecl::Identity => Ok(TwistSeries::identity(lie, self.order)),
        }
    }

    /// The star context for this configuration. Exact mode falls back to an
    /// error for non-Jordanian twists.
    pub fn star_context(&self) -> Result<StarContext> {
        let lie = Arc::new(self.lie_algebra()?);
        let twist = Arc::new(self.build_twist(lie)?);
        StarContext::new(twist, self.mode)
    }

    fn with_mode(&self, mode: Mode) -> Result<StarContext> {
        RunConfig { mode, ..self.clone() }.star_context()
    }
}

fn is_hyperboloid(ctx: &StarContext) -> bool {
    let lie = ctx.lie();
    ctx.frame() == Frame::Weight
        && ctx.dim() == 3
        && ["H", "E+", "E-"].iter().all(|n| lie.index_of(n).is_some())
        && ctx.twist().is_jordanian()
}

fn needs_hyperboloid(suite: &str, ctx: &StarContext) -> Result<()> {
    if is_hyperboloid(ctx) {
        Ok(())
    } else {
        Err(Error::Config(format!("suite {suite} needs the hyperboloid algebra with the Jordanian twist on H, E+")))
    }
}

/// Abelian twist `exp(i nu/2 (P1 (x) P2 - P2 (x) P1))` on the translations of
/// R^3, used as the reality sample.
pub fn translation_twist(order: u32) -> Result<TwistSeries> {
    let f = Frame::Cartesian;
    let fields: Vec<_> = (0..3).map(|i| CalcElement::d(f, 3, i)).collect();
    let lie = LieAlgebra::from_fields(vec!["P1".into(), "P2".into(), "P3".into()], fields, Surds::unit())?;
    TwistSeries::abelian(Arc::new(lie), &[(0, 1)], order)
}

/// Run one suite.
pub fn run_suite(name: &str, cfg: &RunConfig, ctx: &StarContext) -> Result<Vec<Check>> {
    let mut checks = match name {
        TWIST_AXIOMS => {
            let twist = ctx.twist();
            let mut out = twist.check_axioms();
            if twist.is_jordanian() {
                out.push(twist.check_unitary());
            }
            let abelian = translation_twist(cfg.order)?;
            out.extend(abelian.check_axioms().into_iter().map(|mut c| {
                c.id = format!("abelian-sample.{}", c.id);
                c
            }));
            let mut real = abelian.check_real();
            real.id = "abelian-sample.twist.real".into();
            out.push(real);
            out
        }
        HOPF_CLOSED_FORMS => {
            needs_hyperboloid(name, ctx)?;
            hopf_closed_form_checks(ctx.twist())?
        }
        FORMULA => {
            needs_hyperboloid(name, ctx)?;
            let mut out = formula_suite(ctx);
            let exact = cfg.with_mode(Mode::Exact)?;
            let truncated = cfg.with_mode(Mode::Truncated)?;
            out.extend(exact_vs_truncated(&exact, &truncated));
            out
        }
        GENERIC_RELATIONS => {
            let mut out = generic_relations(ctx)?;
            out.extend(bracket_suite(ctx)?);
            out
        }
        ASSOCIATIVITY => {
            needs_hyperboloid(name, ctx)?;
            associativity_suite(ctx, &sample_tuples(cfg.seed, 500, 3, 4))
        }
        MODULE_ALGEBRA => {
            needs_hyperboloid(name, ctx)?;
            module_algebra_suite(ctx, &sample_tuples(cfg.seed + 1, 200, 2, 4))
        }
        SUBMANIFOLD => {
            needs_hyperboloid(name, ctx)?;
            let mut out = submanifold_suite(ctx)?;
            if let Some(p) = &cfg.quadric {
                let src = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                let q = QuadricSpec::from_json(&src)?;
                for mut c in q.bracket_table_checks().into_iter().chain(tangency_suite(&q)) {
                    c.id = format!("configured-{}", c.id);
                    out.push(c);
                }
            }
            out
        }
        GEOMETRY => {
            let geo = GeometryContext::hyperboloid(cfg.params.c_scalar(), cfg.order, cfg.mode)?;
            geometry_suite(&geo)?
        }
        fixture if FIXTURE_SUITES.contains(&fixture) => {
            needs_hyperboloid(name, ctx)?;
            let fx = load_fixtures(fixture, cfg.fixtures.as_deref())?;
            run_fixture_suite(ctx, fixture, &fx)
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    for c in &mut checks {
        if !c.id.starts_with(name) {
            c.id = format!("{name}/{}", c.id);
        }
    }
    Ok(checks)
}

/// Run every configured suite into one report. Per-suite wall time is
/// attached to each check unless `timing` is off.
pub fn run(cfg: &RunConfig, timing: bool) -> Result<Report> {
    cfg.validate()?;
    let suites = cfg.expanded_suites()?;
    let mut checks = Vec::new();
    if !suites.is_empty() {
        let ctx = cfg.star_context()?;
        let batches = suites
            .par_iter()
            .map(|s| {
                let start = Instant::now();
                let batch = run_suite(s, cfg, &ctx)?;
                Ok(if timing { batch.into_iter().map(|c| c.with_elapsed(start)).collect() } else { batch })
            })
            .collect::<Result<Vec<Vec<Check>>>>()?;
        checks.extend(batches.into_iter().flatten());
    }
    let mut echo = cfg.echo();
    if suites.iter().any(|s| s == GEOMETRY) {
        echo["geometry"] = serde_json::json!({"a": "1", "b": "1", "c": cfg.params.echo()["c"]});
    }
    Ok(Report::new(echo, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        let p = Params::parse("a=2, b=1/3,c=symbolic").unwrap();
        assert_eq!(p.a, BigRational::from_integer(2.into()));
        assert_eq!(p.b, BigRational::new(1.into(), 3.into()));
        assert!(p.c.is_none());
        assert_eq!(Params::parse("c=-1/2").unwrap().c_scalar(), Scalar::from_ratio(-1, 2));
        assert!(matches!(Params::parse("d=1"), Err(Error::Config(_))));
        assert!(matches!(Params::parse("a=sqrtA"), Err(Error::Config(_))));
    }

    #[test]
    fn suites_expand_and_validate() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.expanded_suites().unwrap().len(), suite_names().len());
        cfg.suites = vec!["nope".into()];
        assert!(matches!(cfg.validate(), Err(Error::UnknownSuite(_))));
        cfg.suites = vec![];
        assert!(run(&cfg, false).unwrap().checks.is_empty());
        cfg.order = 1;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn config_file_round_trip() {
        let cfg = RunConfig::from_json(
            r#"{"twist": {"type": "abelian", "pairs": [["H", "H"]]}, "order": 3, "mode": "truncated",
                "suites": ["twist-axioms"], "params": {"a": "2"}}"#,
            Path::new("/tmp"),
        )
        .unwrap();
        assert_eq!(cfg.order, 3);
        assert_eq!(cfg.mode, Mode::Truncated);
        let report = run(&cfg, false).unwrap();
        assert!(report.all_passed(), "{}", report.to_json());
        assert!(RunConfig::from_json(r#"{"colour": 1}"#, Path::new(".")).is_err());
    }

    #[test]
    fn hyperboloid_only_suites_reject_other_algebras() {
        let cfg = RunConfig { twist: TwistDecl::Identity, mode: Mode::Truncated, ..RunConfig::default() };
        let ctx = cfg.star_context().unwrap();
        assert!(matches!(run_suite(FORMULA, &cfg, &ctx), Err(Error::Config(_))));
    }
}
