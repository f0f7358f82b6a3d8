//! Scenario files: a small line-oriented language naming spaces and maps and
//! listing checks, and the JSON report produced by running them.

pub mod ast;
mod exec;
pub mod parse;
pub mod report;

use crate::geometry::field::set_epsilon;
use crate::geometry::{Float64, Rational};

pub use ast::{Location, ScenarioAst};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use report::{validate_report_json, CheckRecord, Report, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub mode: Mode,
    /// Comparison tolerance in float mode.
    pub eps: f64,
    /// Node budget for symmetry and interaction searches.
    pub budget: u64,
    /// Seed for `scramble` without an explicit seed.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { mode: Mode::Exact, eps: 1e-9, budget: crate::dynamics::DEFAULT_SEARCH_BUDGET, seed: 0 }
    }
}

/// Runs every statement in order. Failures are recorded per statement and do
/// not stop later checks.
pub fn execute(ast: &ScenarioAst, name: &str, config: &Config) -> Report {
    match config.mode {
        Mode::Exact => exec::Executor::<Rational>::new(config).run(ast, name),
        Mode::Float => {
            set_epsilon(config.eps);
            exec::Executor::<Float64>::new(config).run(ast, name)
        }
    }
}

/// Parses and runs a scenario text.
pub fn run_text(text: &str, name: &str, config: &Config) -> Result<Report, ParseError> {
    Ok(execute(&parse(text)?, name, config))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Report {
        run_text(text, "t", &Config::default()).unwrap()
    }

    #[test]
    fn decompose_gbit() {
        let r = run("space G = gbit()\ncheck decompose G");
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].verdict, Verdict::Pass);
        assert_eq!(r.checks[0].certificate["components"], 1);
        assert_eq!(r.checks[0].id, "L2");
    }

    #[test]
    fn theorem2_on_gbits() {
        let r = run("space G = gbit()\ncheck theorem2 on product(G, G)");
        assert_eq!(r.checks[0].verdict, Verdict::Pass);
        assert_eq!(r.checks[0].certificate["lris"], 64);
        assert_eq!(r.checks[0].certificate["trivial"], 64);
    }

    #[test]
    fn swap_has_no_witness() {
        let r = run("space G = gbit()\nmap S = swap(G)\ncheck lri S on product(G, G)\ncheck lri S on product(G, G) expect none");
        assert_eq!(r.checks[0].verdict, Verdict::Fail);
        assert_eq!(r.checks[0].certificate["witness"], Value::Null);
        assert_eq!(r.checks[1].verdict, Verdict::Pass);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn failures_do_not_abort() {
        let r = run("space P = polygon(5)\ncheck group P\nspace G = gbit()\ncheck group G expect 8\ncheck group G expect 7");
        let verdicts: Vec<Verdict> = r.checks.iter().map(|c| c.verdict).collect();
        assert_eq!(verdicts, vec![Verdict::Error, Verdict::Error, Verdict::Pass, Verdict::Fail]);
        assert_eq!(r.checks[0].kind, "space");
    }

    #[test]
    fn budget_verdict() {
        let cfg = Config { budget: 10, ..Config::default() };
        let r = run_text("space C = cube(3)\ncheck group C", "t", &cfg).unwrap();
        assert_eq!(r.checks[0].verdict, Verdict::BudgetExceeded);
    }

    #[test]
    fn pipeline_checks() {
        let text = "\
space D = simplex(1)
space P = dsum(D, D)
space G = gbit()
map C = cnot()
map R = element(G, 1)
map I = identity(G)
map K = ctrl(D, G, [I, R])
check lri C on product(D, D) expect nontrivial
check broadcaster C on product(D, D) at 0 expect decomposes
check theorem3 C on product(D, D) expect permuting
check theorem3 K on product(D, G) expect preserving
check theorem2 on product(D, D) expect inapplicable
check theorem1 dsum(G, G) expect 1
check transitive house() expect false
check distributivity G D P
check entangled product(G, G) [1, 1, 0, 1, -1, 0, 0, 0, 1]
";
        let r = run(text);
        for c in &r.checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} {}: {}", c.id, c.kind, c.certificate);
        }
        assert_eq!(r.checks.len(), 9);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn float_mode_runs() {
        let cfg = Config { mode: Mode::Float, ..Config::default() };
        let r = run_text("space G = gbit()\ncheck group G expect 8\ncheck decompose G expect 1", "t", &cfg).unwrap();
        assert_eq!(r.mode, "float");
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass));
    }

    use serde_json::Value;
}
