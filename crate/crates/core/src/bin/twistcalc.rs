use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use twistcalc::config::{Params, RunConfig, ORDER_ENV};
use twistcalc::geometry::{GeometryContext, GeometryObject};
use twistcalc::report::Report;
use twistcalc::{Error, LieAlgebra, Mode, Result, Uea};

#[derive(Parser)]
#[command(name = "twistcalc", version, about = "Exact twisted star products and twisted geometry")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Truncation order N (TWISTCALC_ORDER overrides).
    #[arg(long)]
    order: Option<u32>,
    /// exact or truncated.
    #[arg(long)]
    mode: Option<Mode>,
    /// Family parameters, e.g. a=1,b=1,c=symbolic.
    #[arg(long)]
    params: Option<String>,
}

impl Common {
    fn apply(&self, cfg: &mut RunConfig, env_order: Option<&str>) -> Result<()> {
        if let Some(n) = self.order {
            cfg.order = n;
        }
        if let Some(m) = self.mode {
            cfg.mode = m;
        }
        if let Some(p) = &self.params {
            cfg.params = Params::parse(p)?;
        }
        if let Some(v) = env_order {
            cfg.order = v.trim().parse().map_err(|_| Error::Config(format!("{ORDER_ENV}={v:?} is not an order")))?;
        }
        if cfg.order < 2 {
            return Err(Error::Config(format!("order must be at least 2, got {}", cfg.order)));
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and write a JSON report.
    Verify {
        /// JSON run config.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Suite to run (repeatable); `all` runs everything.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[command(flatten)]
        common: Common,
        /// Lie algebra JSON.
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// Quadric JSON.
        #[arg(long)]
        quadric: Option<PathBuf>,
        /// Directory with replacement fixture files.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Report path; stdout if absent.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Drop per-check timings so reports are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Star-product normal form of an expression (`*` is the star product).
    Star {
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Action of a word of generators, e.g. "E+ H", on an expression.
    Act {
        word: String,
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Twist, its inverse, beta and the R-matrix up to the order.
    TwistInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Geometric tables on the hyperboloid (a = b = 1) with the printed-table diff.
    Geometry {
        #[arg(long)]
        object: GeometryObject,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_timing: bool,
    },
}

fn io(e: std::io::Error) -> Error {
    Error::Config(format!("output: {e}"))
}

fn emit(text: &str, output: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(io),
    }
}

fn report_exit(report: &Report, err: &mut dyn Write) -> Result<u8> {
    for c in report.checks.iter().filter(|c| !c.passed()) {
        writeln!(err, "FAIL {}: residual {}", c.id, c.residual).map_err(io)?;
    }
    let s = &report.summary;
    writeln!(err, "{} checks, {} passed, {} failed", s.total, s.passed, s.failed).map_err(io)?;
    Ok(if report.all_passed() { 0 } else { 1 })
}

/// Product of space-separated generator names.
fn parse_word(word: &str, lie: &LieAlgebra) -> Result<Uea> {
    let mut u = lie.one();
    for name in word.split_whitespace() {
        u = lie.mul(&u, &lie.named(name)?, None);
    }
    Ok(u)
}

fn run(cli: Cli, env_order: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    match cli.cmd {
        Cmd::Verify { config, suites, common, algebra, quadric, fixtures, output, no_timing } => {
            let mut cfg = match &config {
                Some(p) => RunConfig::from_file(p)?,
                None => RunConfig::default(),
            };
            if !suites.is_empty() {
                cfg.suites = suites;
            }
            cfg.algebra = algebra.or(cfg.algebra);
            cfg.quadric = quadric.or(cfg.quadric);
            cfg.fixtures = fixtures.or(cfg.fixtures);
            cfg.output = output.or(cfg.output);
            common.apply(&mut cfg, env_order)?;
            let report = twistcalc::config::run(&cfg, !no_timing)?;
            emit(&report.to_json(), cfg.output.as_ref(), out)?;
            report_exit(&report, err)
        }
        Cmd::Star { expr, common } => {
            let mut cfg = RunConfig::default();
            common.apply(&mut cfg, env_order)?;
            let ctx = cfg.star_context()?;
            writeln!(out, "{}", ctx.cut(&ctx.parse(&expr)?)).map_err(io)?;
            Ok(0)
        }
        Cmd::Act { word, expr, common } => {
            let mut cfg = RunConfig::default();
            common.apply(&mut cfg, env_order)?;
            let ctx = cfg.star_context()?;
            let u = parse_word(&word, ctx.lie())?;
            writeln!(out, "{}", ctx.act(&u, &ctx.parse(&expr)?)?).map_err(io)?;
            Ok(0)
        }
        Cmd::TwistInfo { common } => {
            let mut cfg = RunConfig::default();
            common.apply(&mut cfg, env_order)?;
            let ctx = cfg.star_context()?;
            let t = ctx.twist();
            let names = t.lie().names();
            let checks = t.check_axioms();
            let info = json!({
                "generators": names,
                "order": t.order(),
                "F": t.f().fmt_with(names),
                "F_inv": t.f_inv().fmt_with(names),
                "beta": t.beta().fmt_with(names),
                "R": t.r().fmt_with(names),
                "axioms": checks.iter().map(|c| json!({"id": c.id, "status": c.status})).collect::<Vec<_>>(),
            });
            emit(&serde_json::to_string_pretty(&info).expect("json"), None, out)?;
            Ok(if checks.iter().all(|c| c.passed()) { 0 } else { 1 })
        }
        Cmd::Geometry { object, common, output, no_timing } => {
            let mut cfg = RunConfig::default();
            common.apply(&mut cfg, env_order)?;
            let geo = GeometryContext::hyperboloid(cfg.params.c_scalar(), cfg.order, cfg.mode)?;
            let start = std::time::Instant::now();
            let records = geo.table(object)?;
            let mut checks = geo.table_checks(object)?;
            if !no_timing {
                checks = checks.into_iter().map(|c| c.with_elapsed(start)).collect();
            }
            let report = Report::new(
                json!({"object": object.to_string(), "order": cfg.order, "c": cfg.params.c_scalar().to_string()}),
                checks,
            );
            let doc = json!({"object": object.to_string(), "records": records, "report": report});
            emit(&serde_json::to_string_pretty(&doc).expect("json"), output.as_ref(), out)?;
            report_exit(&report, err)
        }
    }
}

/// Exit code 0 all-pass, 1 any-fail, 2 usage or config error.
fn execute<I, T>(args: I, env_order: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
        }
    };
    match run(cli, env_order, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    let env_order = std::env::var(ORDER_ENV).ok();
    let code = execute(std::env::args_os(), env_order.as_deref(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Run {
        code: u8,
        out: String,
        err: String,
    }

    fn twistcalc_env(args: &[&str], env_order: Option<&str>) -> Run {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("twistcalc").chain(args.iter().copied());
        let code = execute(argv, env_order, &mut out, &mut err);
        Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
    }

    fn twistcalc(args: &[&str]) -> Run {
        twistcalc_env(args, None)
    }

    fn json(r: &Run) -> serde_json::Value {
        serde_json::from_str(&r.out).unwrap()
    }

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("twistcalc-cli-{}-{name}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn star_normal_forms() {
        let r = twistcalc(&["star", "y+ * y-"]);
        assert_eq!(r.code, 0);
        assert_eq!(r.out.trim_end(), "y+ y- + 2*I*nu*sqrtA*y+ y0 + 2*nu^2*y+^2");
        assert_eq!(twistcalc(&["star", "x0 * y+"]).out.trim_end(), "y+");
        // every correction carries H on the left leg, and H |> y0 = 0
        assert_eq!(twistcalc(&["star", "(y0^2) * y-"]).out.trim_end(), "y- y0^2");
    }

    #[test]
    fn parse_errors_are_config_errors() {
        let r = twistcalc(&["star", "y+ * ("]);
        assert_eq!(r.code, 2);
        assert!(r.err.contains("parse error at byte"));
        assert_eq!(twistcalc(&["star"]).code, 2);
        assert_eq!(twistcalc(&["--help"]).code, 0);
    }

    #[test]
    fn act_applies_words() {
        assert_eq!(twistcalc(&["act", "H", "y+ y-"]).out.trim_end(), "0");
        assert_eq!(twistcalc(&["act", "H", "y+"]).out.trim_end(), "2*y+");
        assert_eq!(twistcalc(&["act", "H E+", "y0"]).out.trim_end(), "2*sqrtA*y+");
        assert_eq!(twistcalc(&["act", "K", "y0"]).code, 2);
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(twistcalc(&["verify", "--suite", "nope"]).code, 2);
        assert_eq!(twistcalc(&["verify", "--suite", "twist-axioms", "--order", "1"]).code, 2);
        let r = twistcalc(&["verify", "--suite", "twist-axioms", "--suite", "hyperboloid-wedge", "--no-timing"]);
        assert_eq!(r.code, 0);
        assert_eq!(json(&r)["summary"]["failed"], 0);
    }

    #[test]
    fn empty_suite_list_is_an_empty_pass() {
        let cfg = scratch("empty").join("run.json");
        std::fs::write(&cfg, r#"{"suites": []}"#).unwrap();
        let r = twistcalc(&["verify", "--config", cfg.to_str().unwrap(), "--no-timing"]);
        assert_eq!(r.code, 0);
        assert_eq!(json(&r)["summary"]["total"], 0);
    }

    #[test]
    fn mutated_fixture_fails_with_residual() {
        use twistcalc::star::suites::{embedded_fixture, parse_fixtures, sign_mutations, LEIBNIZ};
        let dir = scratch("mutant");
        let mut fixtures = parse_fixtures(embedded_fixture(LEIBNIZ).unwrap()).unwrap();
        let k = fixtures.iter().position(|f| !sign_mutations(f).is_empty()).unwrap();
        fixtures[k] = sign_mutations(&fixtures[k]).remove(0);
        std::fs::write(dir.join(format!("{LEIBNIZ}.json")), serde_json::to_string(&fixtures).unwrap()).unwrap();
        let r = twistcalc(&["verify", "--suite", LEIBNIZ, "--fixtures", dir.to_str().unwrap(), "--no-timing"]);
        assert_eq!(r.code, 1);
        assert!(r.err.contains("FAIL hyperboloid-leibniz."));
    }

    #[test]
    fn reports_are_deterministic() {
        let dir = scratch("det");
        let run = |name: &str| {
            let path = dir.join(name);
            twistcalc(&["verify", "--suite", "generic-relations", "--no-timing", "--output", path.to_str().unwrap()]);
            std::fs::read(path).unwrap()
        };
        assert_eq!(run("a.json"), run("b.json"));
    }

    #[test]
    fn order_env_override() {
        let r = twistcalc_env(&["twist-info", "--order", "5"], Some("3"));
        assert_eq!(r.code, 0);
        assert_eq!(json(&r)["order"], 3);
        assert_eq!(twistcalc_env(&["twist-info"], Some("one")).code, 2);
    }

    #[test]
    fn geometry_tables() {
        let r = twistcalc(&["geometry", "--object", "gstar", "--no-timing"]);
        let doc = json(&r);
        assert_eq!(doc["records"].as_array().unwrap().len(), 9);
        assert_eq!(doc["report"]["summary"]["total"], 9);
        assert_eq!(r.code, if doc["report"]["summary"]["failed"] == 0 { 0 } else { 1 });

        let r = twistcalc(&["geometry", "--object", "ricci", "--params", "c=-1/2", "--no-timing"]);
        assert_eq!(json(&r)["records"].as_array().unwrap().len(), 9);

        let r = twistcalc(&["geometry", "--object", "nabla", "--params", "a=1,b=1,c=0"]);
        assert_eq!(r.code, 2);
        assert!(r.err.contains("c = 0"));
        assert_eq!(twistcalc(&["geometry", "--object", "torsion"]).code, 2);
    }
}
