//! A verification run driven by a JSON config, as the CLI does it.

use std::path::Path;

use twistcalc::config::{run, RunConfig};

fn main() {
    let cfg = RunConfig::from_json(
        r#"{"order": 6, "mode": "exact", "suites": ["twist-axioms", "hyperboloid-leibniz"], "params": {"a": "2", "b": "3"}}"#,
        Path::new("."),
    )
    .unwrap();
    let report = run(&cfg, false).unwrap();
    for c in &report.checks {
        println!("{}", c.status_line());
    }
    println!("{} / {} passed", report.summary.passed, report.summary.total);
}
