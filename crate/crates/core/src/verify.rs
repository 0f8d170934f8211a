//! Seeded property campaigns over random states.
//!
//! Every check produces a slack that is non-negative when the property holds;
//! a check fails when its slack drops below `-tolerance`. Samples are drawn
//! per index, evaluated in parallel and folded in index order, so the outcome
//! is identical for any thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Result, SteerError};
use crate::monogamy::{monogamy_residual, rgs_closed_form, rgs_residuals, MonogamyDirection};
use crate::qss::{fig2_row, Fig2Series};
use crate::states::{
    random_mixed_at, random_mixed_with, random_params_at, random_pure_at, sample_rng,
    standard_form_pure, SamplerConfig,
};
use crate::steering::{gaussian_steering, logdet_steering_bound_check};
use crate::symplectic::{conditional_log_det, CovarianceMatrix, ModePartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Monogamy,
    Exclusivity,
    Logdet,
    Ssa,
    RgsConsistency,
    QssBounds,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Monogamy,
        Suite::Exclusivity,
        Suite::Logdet,
        Suite::Ssa,
        Suite::RgsConsistency,
        Suite::QssBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Monogamy => "monogamy",
            Suite::Exclusivity => "exclusivity",
            Suite::Logdet => "logdet",
            Suite::Ssa => "ssa",
            Suite::RgsConsistency => "rgs-consistency",
            Suite::QssBounds => "qss-bounds",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            Ok(Suite::ALL.to_vec())
        } else {
            Ok(vec![s.parse()?])
        }
    }
}

impl FromStr for Suite {
    type Err = SteerError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| SteerError::usage(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    /// Squeezing range of random states.
    pub r_max: f64,
    /// Invariant range of random standard-form states.
    pub a_max: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            samples: 10_000,
            tolerance: 1e-9,
            r_max: 1.0,
            a_max: 5.0,
        }
    }
}

/// The state attaining the worst slack, kept for reproduction.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub sample_index: usize,
    pub description: String,
    pub state: CovarianceMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub samples: usize,
    pub checks: usize,
    /// Checks whose hypothesis did not hold (e.g. zero steering).
    pub not_applicable: usize,
    pub violations: usize,
    pub worst_slack: f64,
    pub worst: Option<Witness>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: samples={} checks={} not_applicable={} violations={} worst_slack={:e}",
            self.suite,
            self.samples,
            self.checks,
            self.not_applicable,
            self.violations,
            self.worst_slack
        )?;
        if let Some(w) = &self.worst {
            write!(f, " worst_sample={} ({})", w.sample_index, w.description)?;
        }
        write!(f, " {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

struct Sample {
    state: CovarianceMatrix,
    description: String,
    /// `None` marks a check whose hypothesis does not apply.
    slacks: Vec<Option<f64>>,
}

#[derive(Clone, Copy)]
struct Summary {
    index: usize,
    checks: usize,
    not_applicable: usize,
    violations: usize,
    worst: f64,
}

fn run_campaign<F>(suite: Suite, samples: usize, tol: f64, eval: F) -> Result<SuiteOutcome>
where
    F: Fn(usize) -> Result<Sample> + Sync,
{
    let summaries: Vec<Summary> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = eval(i)?;
            let applicable: Vec<f64> = s.slacks.iter().flatten().copied().collect();
            Ok(Summary {
                index: i,
                checks: applicable.len(),
                not_applicable: s.slacks.len() - applicable.len(),
                violations: applicable.iter().filter(|&&v| !(v >= -tol)).count(),
                worst: applicable.iter().copied().fold(f64::INFINITY, f64::min),
            })
        })
        .collect::<Result<_>>()?;

    let mut outcome = SuiteOutcome {
        suite,
        samples,
        checks: 0,
        not_applicable: 0,
        violations: 0,
        worst_slack: f64::INFINITY,
        worst: None,
    };
    let mut worst_index = None;
    for s in &summaries {
        outcome.checks += s.checks;
        outcome.not_applicable += s.not_applicable;
        outcome.violations += s.violations;
        if s.worst < outcome.worst_slack || (s.worst.is_nan() && !outcome.worst_slack.is_nan()) {
            outcome.worst_slack = s.worst;
            worst_index = Some(s.index);
        }
    }
    if let Some(i) = worst_index {
        let s = eval(i)?;
        outcome.worst = Some(Witness {
            sample_index: i,
            description: s.description,
            state: s.state,
        });
    }
    Ok(outcome)
}

/// Number of four-party states added to the monogamy campaign.
pub fn four_party_samples(samples: usize) -> usize {
    samples.div_ceil(10)
}

fn monogamy_sample(cfg: &VerifyConfig, i: usize) -> Result<Sample> {
    let (parties, label) = if i < cfg.samples {
        (3, "3-party")
    } else {
        (4, "4-party")
    };
    let state = random_mixed_at(parties, cfg.r_max, cfg.seed, i as u64);
    let partition = ModePartition::single_modes(parties);
    let mut slacks = Vec::with_capacity(2 * parties);
    for k in 0..parties {
        for dir in [
            MonogamyDirection::SteeredByRest,
            MonogamyDirection::SteersRest,
        ] {
            slacks.push(Some(
                monogamy_residual(&state, &partition, k, dir)?.residual,
            ));
        }
    }
    Ok(Sample {
        state,
        description: format!("{label} mixed state"),
        slacks,
    })
}

fn exclusivity_sample(cfg: &VerifyConfig, i: usize) -> Result<Sample> {
    let (state, a, b, c, label): (_, &[usize], &[usize], usize, _) = match i % 3 {
        0 => (
            random_pure_at(3, cfg.r_max, cfg.seed, i as u64),
            &[0],
            &[1],
            2,
            "pure A|B|C",
        ),
        1 => (
            random_mixed_at(3, cfg.r_max, cfg.seed, i as u64),
            &[0],
            &[1],
            2,
            "mixed A|B|C",
        ),
        _ => (
            random_mixed_at(4, cfg.r_max, cfg.seed, i as u64),
            &[0, 1],
            &[2],
            3,
            "mixed AA'|B|C",
        ),
    };
    let g_a = gaussian_steering(&state, a, &[c])?.value;
    let g_b = gaussian_steering(&state, b, &[c])?.value;
    Ok(Sample {
        state,
        description: format!("{label}, G(A→C)={g_a:e}, G(B→C)={g_b:e}"),
        slacks: vec![Some(-g_a.min(g_b))],
    })
}

fn logdet_sample(cfg: &VerifyConfig, i: usize) -> Result<Sample> {
    let state = if i.is_multiple_of(2) {
        random_pure_at(3, cfg.r_max, cfg.seed, i as u64)
    } else {
        random_mixed_with(3, 1, cfg.r_max, &mut sample_rng(cfg.seed, i as u64))
    };
    // two-mode steered party: inequality
    let multi = logdet_steering_bound_check(&state, &[0], &[1, 2])?;
    // one-mode steered party: equality
    let single = logdet_steering_bound_check(&state, &[0, 1], &[2])?.map(|s| -s.abs());
    Ok(Sample {
        state,
        description: format!(
            "{} state",
            if i.is_multiple_of(2) { "pure" } else { "mixed" }
        ),
        slacks: vec![multi, single],
    })
}

fn ssa_sample(cfg: &VerifyConfig, i: usize) -> Result<Sample> {
    let state = random_mixed_at(3, cfg.r_max, cfg.seed, i as u64);
    let joint = conditional_log_det(&state, &[1, 2], &[0])?;
    let b = conditional_log_det(&state, &[1], &[0])?;
    let c = conditional_log_det(&state, &[2], &[0])?;
    Ok(Sample {
        state,
        description: "mixed A|B|C".into(),
        slacks: vec![Some(b + c - joint)],
    })
}

fn sampler(cfg: &VerifyConfig) -> SamplerConfig {
    SamplerConfig {
        seed: cfg.seed,
        count: cfg.samples.max(1),
        r_max: cfg.r_max,
        a_max: cfg.a_max,
        ..Default::default()
    }
}

fn rgs_sample(cfg: &VerifyConfig, i: usize) -> Result<Sample> {
    let p = random_params_at(&sampler(cfg), i as u64);
    let state = standard_form_pure(&p)?;
    let (steered, steering) = rgs_residuals(&state)?;
    let closed = rgs_closed_form(&p);
    let scale = closed.abs().max(1.0);
    let min = |v: [f64; 3]| v.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Sample {
        state,
        description: format!("a={}, b={}, c={}", p.a, p.b, p.c),
        slacks: vec![
            Some(-(min(steered) - closed).abs() / scale),
            Some(-(min(steering) - closed).abs() / scale),
            Some(closed),
        ],
    })
}

fn qss_sample(cfg: &VerifyConfig, i: usize) -> Result<Sample> {
    let p = random_params_at(&sampler(cfg), i as u64);
    let row = fig2_row(&p, i, Fig2Series::Sample)?;
    Ok(Sample {
        state: standard_form_pure(&p)?,
        description: format!("a={}, b={}, c={}", p.a, p.b, p.c),
        slacks: vec![Some(row.slack_lower), Some(row.slack_upper)],
    })
}

/// Runs one suite. The monogamy suite adds a tenth as many four-party
/// states on top of `samples` three-party states.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    if cfg.samples == 0 {
        return Err(SteerError::usage("sample count must be ≥ 1"));
    }
    if !(cfg.tolerance >= 0.0) {
        return Err(SteerError::usage("tolerance must be ≥ 0"));
    }
    sampler(cfg).validate()?;
    let n = cfg.samples;
    let tol = cfg.tolerance;
    match suite {
        Suite::Monogamy => run_campaign(suite, n + four_party_samples(n), tol, |i| {
            monogamy_sample(cfg, i)
        }),
        Suite::Exclusivity => run_campaign(suite, n, tol, |i| exclusivity_sample(cfg, i)),
        Suite::Logdet => run_campaign(suite, n, tol, |i| logdet_sample(cfg, i)),
        Suite::Ssa => run_campaign(suite, n, tol, |i| ssa_sample(cfg, i)),
        Suite::RgsConsistency => run_campaign(suite, n, tol, |i| rgs_sample(cfg, i)),
        Suite::QssBounds => run_campaign(suite, n, tol, |i| qss_sample(cfg, i)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), 6);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_campaigns_pass() {
        let cfg = VerifyConfig {
            samples: 30,
            ..Default::default()
        };
        for s in Suite::ALL {
            let out = run_suite(s, &cfg).unwrap();
            assert!(out.passed(), "{out}");
            assert!(out.worst.is_some());
        }
    }

    #[test]
    fn campaign_counts() {
        let cfg = VerifyConfig {
            samples: 20,
            ..Default::default()
        };
        let m = run_suite(Suite::Monogamy, &cfg).unwrap();
        assert_eq!(m.samples, 22);
        assert_eq!(m.checks, 20 * 6 + 2 * 8);
        let l = run_suite(Suite::Logdet, &cfg).unwrap();
        assert_eq!(l.checks + l.not_applicable, 40);
    }

    #[test]
    fn zero_samples_rejected() {
        let cfg = VerifyConfig {
            samples: 0,
            ..Default::default()
        };
        assert!(run_suite(Suite::Ssa, &cfg).is_err());
    }
}
