//! Named groups of checks, shared by the command line and the test suites.

use std::time::Instant;

use crate::algebra::Model;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::localize::{lemma18_check, Localizer};
use crate::presets::klr_oracle_check;
use crate::report::Check;
use crate::subgroup::{canonical_reps_check, factorization_check_all, length_comparison_check, wall_crossing_check};

pub const SUITES: &[&str] =
    &["suitability", "combinatorics", "relations", "integrality", "grading", "localization", "euler", "oracle"];

/// Degree bound for the localization intertwining test.
pub const INTERTWINING_DEGREE: u32 = 3;

#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub checks: Vec<Check>,
    /// Wall-clock milliseconds per suite, in run order.
    pub timings: Vec<(String, f64)>,
}

/// Runs the named suites (all when `names` is empty).
pub fn run_suites(
    config: &Config,
    model: &Model,
    names: &[String],
    degree_bound: u32,
    strict: bool,
) -> Result<SuiteRun> {
    let selected: Vec<&str> = if names.is_empty() {
        SUITES.to_vec()
    } else {
        for n in names {
            if !SUITES.contains(&n.as_str()) {
                return Err(Error::Config(format!("unknown check suite {n:?}; known: {}", SUITES.join(", "))));
            }
        }
        SUITES.iter().copied().filter(|s| names.iter().any(|n| n == s)).collect()
    };
    let mut run = SuiteRun { checks: Vec::new(), timings: Vec::new() };
    for name in selected {
        let start = Instant::now();
        let checks = run_suite(name, config, model, degree_bound, strict)?;
        run.timings.push((name.to_string(), start.elapsed().as_secs_f64() * 1e3));
        run.checks.extend(checks);
    }
    Ok(run)
}

pub fn run_suite(name: &str, config: &Config, model: &Model, degree_bound: u32, strict: bool) -> Result<Vec<Check>> {
    let g = model.group();
    let sub = model.sub();
    Ok(match name {
        "suitability" => vec![model.data().suitability(g, sub, strict)],
        "combinatorics" => vec![
            canonical_reps_check(g, sub, model.table()),
            wall_crossing_check(g, model.table()),
            length_comparison_check(g, sub),
            factorization_check_all(g, sub),
        ],
        "relations" => model.check_relations(),
        "integrality" => vec![model.integrality_check(degree_bound), model.filtration_check()],
        "grading" => vec![model.grading_check()],
        "localization" => {
            let l = Localizer::new(model)?;
            vec![l.sigma_localization_check(), l.intertwining_check(INTERTWINING_DEGREE), l.theta_equivariance_check(2)]
        }
        "euler" => {
            let l = Localizer::new(model)?;
            vec![
                model.data().fiber_split_check(g, model.table()),
                l.sign_and_power_check(),
                l.leading_term_check(),
                lemma18_check(g, sub, true),
                lemma18_check(g, sub, false),
            ]
        }
        "oracle" => match &config.quiver {
            Some(q) => klr_oracle_check(q)?,
            None => Vec::new(),
        },
        other => return Err(Error::Config(format!("unknown check suite {other:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::nilhecke;
    use crate::report::all_passed;

    #[test]
    fn nilhecke_a2_passes_everything() {
        let c = nilhecke("A2").unwrap();
        let m = c.to_model().unwrap();
        let run = run_suites(&c, &m, &[], 3, true).unwrap();
        let failed: Vec<_> = run.checks.iter().filter(|c| !c.passed).map(|c| (&c.name, &c.counterexample)).collect();
        assert!(all_passed(&run.checks), "{failed:?}");
        assert_eq!(run.timings.len(), SUITES.len());
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let c = nilhecke("A1").unwrap();
        let m = c.to_model().unwrap();
        assert!(run_suites(&c, &m, &["nope".to_string()], 2, false).is_err());
    }
}
