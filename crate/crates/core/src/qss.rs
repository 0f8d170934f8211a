//! Key rates of the three-party secret-sharing protocol built on homodyne
//! detection of a pure three-mode Gaussian state in standard form.
//!
//! Physical variances are covariance-matrix entries divided by two, so the
//! vacuum variance is ½. With this normalization the joint inference
//! variances of a standard-form state satisfy
//! `4 V_{P_A|P̄} V_{X_A|X̄} = det σ_ABC / det σ_BC = 1/a²`.

use nalgebra::{Cholesky, DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SteerError};
use crate::monogamy::rgs_closed_form;
use crate::states::{
    ghz_network, random_params_at, squeezing_db, standard_form_pure, OpticalNetworkParams,
    PureThreeModeParams, Quadrature, SamplerConfig,
};
use crate::symplectic::{CovarianceMatrix, Tolerances};

/// `ln(e/2) = 1 − ln 2`, the offset between steering and key rate.
pub const LN_E_OVER_2: f64 = 1.0 - std::f64::consts::LN_2;

/// RGS above which the mode-invariant key rate is guaranteed positive,
/// `2 ln(e/2) ≈ 0.6137`.
pub const KEY_POSITIVITY_RGS_THRESHOLD: f64 = 2.0 * LN_E_OVER_2;

/// Invariant used for the `b = c → ∞` boundary family.
pub const UPPER_FAMILY_INVARIANT: f64 = 1e3;

/// One homodyne outcome: quadrature `quadrature` of mode `mode`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModeQuadrature {
    pub mode: usize,
    pub quadrature: Quadrature,
}

impl ModeQuadrature {
    pub fn new(mode: usize, quadrature: Quadrature) -> Self {
        ModeQuadrature { mode, quadrature }
    }

    fn index(&self) -> usize {
        2 * self.mode + self.quadrature.offset()
    }
}

/// Optimal weights `(g, h)` of the players' joint estimator `g Q_B + h Q_C`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JointGains {
    pub g: f64,
    pub h: f64,
}

/// Minimum inference variance of a target outcome from a linear estimator
/// over the conditioning outcomes, and the estimator's weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inference {
    pub variance: f64,
    pub gains: Vec<f64>,
}

impl Inference {
    pub fn joint_gains(&self) -> Option<JointGains> {
        match self.gains[..] {
            [g, h] => Some(JointGains { g, h }),
            _ => None,
        }
    }
}

/// `½ (σ_tt − cᵀ S⁻¹ c)` where `S` is the conditioners' block and `c` their
/// covariance with the target; the gains are `S⁻¹ c`.
pub fn conditional_variance(
    sigma: &CovarianceMatrix,
    target: ModeQuadrature,
    conditioners: &[ModeQuadrature],
) -> Result<Inference> {
    let n = sigma.n_modes();
    for q in conditioners.iter().chain(std::iter::once(&target)) {
        if q.mode >= n {
            return Err(SteerError::usage(format!(
                "mode {} out of range for {n} modes",
                q.mode
            )));
        }
    }
    if conditioners.contains(&target) {
        return Err(SteerError::usage("target is among the conditioners"));
    }
    let m = sigma.matrix();
    let t = target.index();
    if conditioners.is_empty() {
        return Ok(Inference {
            variance: 0.5 * m[(t, t)],
            gains: Vec::new(),
        });
    }
    let idx: Vec<usize> = conditioners.iter().map(ModeQuadrature::index).collect();
    let block = DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
    let cross = DVector::from_iterator(idx.len(), idx.iter().map(|&i| m[(i, t)]));
    let chol = Cholesky::new(block)
        .ok_or_else(|| SteerError::Degenerate("conditioner block is singular".into()))?;
    let gains = chol.solve(&cross);
    let variance = 0.5 * (m[(t, t)] - cross.dot(&gains));
    Ok(Inference {
        variance,
        gains: gains.iter().copied().collect(),
    })
}

/// Fails unless `sigma` is a pure three-mode state with local blocks
/// proportional to the identity and diagonal inter-modal blocks.
pub fn require_standard_form(sigma: &CovarianceMatrix) -> Result<()> {
    if sigma.n_modes() != 3 {
        return Err(SteerError::domain(format!(
            "key rates need a three-mode state, got {} modes",
            sigma.n_modes()
        )));
    }
    let tol = Tolerances::default().absolute * sigma.matrix().amax().max(1.0);
    for i in 0..3 {
        for j in 0..3 {
            let b = sigma.block(i, j);
            let off = b[(0, 1)].abs().max(b[(1, 0)].abs());
            let local_mismatch = if i == j {
                (b[(0, 0)] - b[(1, 1)]).abs()
            } else {
                0.0
            };
            if off > tol || local_mismatch > tol {
                return Err(SteerError::domain(format!(
                    "state is not in standard form (block ({i}, {j}))"
                )));
            }
        }
    }
    if !sigma.is_pure() {
        return Err(SteerError::domain("key rates need a pure state"));
    }
    Ok(())
}

/// Quadrature carrying the key; the other one is used for the dishonesty
/// check. `Best` evaluates both assignments and keeps the larger rate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KeyQuadrature {
    #[default]
    P,
    X,
    Best,
}

impl std::str::FromStr for KeyQuadrature {
    type Err = SteerError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(KeyQuadrature::P),
            "x" => Ok(KeyQuadrature::X),
            "best" => Ok(KeyQuadrature::Best),
            other => Err(SteerError::usage(format!(
                "unknown key quadrature {other:?}"
            ))),
        }
    }
}

fn players(dealer: usize) -> Result<[usize; 2]> {
    match dealer {
        0 => Ok([1, 2]),
        1 => Ok([0, 2]),
        2 => Ok([0, 1]),
        _ => Err(SteerError::usage(format!(
            "dealer must be 0, 1 or 2, got {dealer}"
        ))),
    }
}

/// Per-dealer inference variances and key rates (nats).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DealerRecord {
    pub dealer: usize,
    pub players: [usize; 2],
    pub v_p_joint: f64,
    pub v_x_joint: f64,
    /// `V_{P|P_j}` for each single player `j`, in `players` order.
    pub v_p_single: [f64; 2],
    /// `V_{X|X_j}` for each single player `j`, in `players` order.
    pub v_x_single: [f64; 2],
    pub gains_p: JointGains,
    pub gains_x: JointGains,
    pub key_eve_raw: f64,
    pub key_full_raw: f64,
    pub key_eve: f64,
    pub key_full: f64,
}

fn joint(sigma: &CovarianceMatrix, dealer: usize, q: Quadrature) -> Result<Inference> {
    let [j, k] = players(dealer)?;
    conditional_variance(
        sigma,
        ModeQuadrature::new(dealer, q),
        &[ModeQuadrature::new(j, q), ModeQuadrature::new(k, q)],
    )
}

fn single(sigma: &CovarianceMatrix, dealer: usize, player: usize, q: Quadrature) -> Result<f64> {
    conditional_variance(
        sigma,
        ModeQuadrature::new(dealer, q),
        &[ModeQuadrature::new(player, q)],
    )
    .map(|i| i.variance)
}

fn rate(v_key: f64, v_check: f64) -> f64 {
    -(1.0 + 0.5 * (v_key * v_check).ln())
}

fn dealer_record_unchecked(
    sigma: &CovarianceMatrix,
    dealer: usize,
    key: KeyQuadrature,
) -> Result<DealerRecord> {
    let pl = players(dealer)?;
    let jp = joint(sigma, dealer, Quadrature::P)?;
    let jx = joint(sigma, dealer, Quadrature::X)?;
    let v_p_single = [
        single(sigma, dealer, pl[0], Quadrature::P)?,
        single(sigma, dealer, pl[1], Quadrature::P)?,
    ];
    let v_x_single = [
        single(sigma, dealer, pl[0], Quadrature::X)?,
        single(sigma, dealer, pl[1], Quadrature::X)?,
    ];
    let full_p = rate(jp.variance, v_x_single[0].max(v_x_single[1]));
    let full_x = rate(jx.variance, v_p_single[0].max(v_p_single[1]));
    let key_full_raw = match key {
        KeyQuadrature::P => full_p,
        KeyQuadrature::X => full_x,
        KeyQuadrature::Best => full_p.max(full_x),
    };
    let key_eve_raw = rate(jp.variance, jx.variance);
    Ok(DealerRecord {
        dealer,
        players: pl,
        v_p_joint: jp.variance,
        v_x_joint: jx.variance,
        v_p_single,
        v_x_single,
        gains_p: jp.joint_gains().expect("two conditioners"),
        gains_x: jx.joint_gains().expect("two conditioners"),
        key_eve_raw,
        key_full_raw,
        key_eve: key_eve_raw.max(0.0),
        key_full: key_full_raw.max(0.0),
    })
}

/// Full per-dealer record for a standard-form state.
pub fn dealer_record(
    sigma: &CovarianceMatrix,
    dealer: usize,
    key: KeyQuadrature,
) -> Result<DealerRecord> {
    require_standard_form(sigma)?;
    dealer_record_unchecked(sigma, dealer, key)
}

/// `−ln(e √(V_{P|P̄} V_{X|X̄}))`, raw (may be negative).
pub fn key_rate_eve(sigma: &CovarianceMatrix, dealer: usize) -> Result<f64> {
    dealer_record(sigma, dealer, KeyQuadrature::P).map(|r| r.key_eve_raw)
}

/// `−ln(e √(V_{key|joint} · max_j V_{check|j}))`, raw (may be negative).
pub fn key_rate_full(sigma: &CovarianceMatrix, dealer: usize, key: KeyQuadrature) -> Result<f64> {
    dealer_record(sigma, dealer, key).map(|r| r.key_full_raw)
}

/// Minimum of the raw full key rate over the three dealer assignments.
pub fn key_rate_mode_invariant(sigma: &CovarianceMatrix, key: KeyQuadrature) -> Result<f64> {
    require_standard_form(sigma)?;
    (0..3).try_fold(f64::INFINITY, |acc, d| {
        dealer_record_unchecked(sigma, d, key).map(|r| acc.min(r.key_full_raw))
    })
}

/// `(RGS/2 − ln(e/2), RGS − ln(e/2))`.
pub fn rgs_key_bounds(rgs: f64) -> (f64, f64) {
    (0.5 * rgs - LN_E_OVER_2, rgs - LN_E_OVER_2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeyRateReport {
    pub schema: &'static str,
    pub invariants: PureThreeModeParams,
    pub key_quadrature: KeyQuadrature,
    pub dealers: Vec<DealerRecord>,
    pub mode_invariant_raw: f64,
    pub mode_invariant: f64,
    pub rgs: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// `mode_invariant_raw − lower_bound`.
    pub slack_lower: f64,
    /// `upper_bound − mode_invariant_raw`.
    pub slack_upper: f64,
}

pub fn key_rate_report(sigma: &CovarianceMatrix, key: KeyQuadrature) -> Result<KeyRateReport> {
    require_standard_form(sigma)?;
    let invariants = PureThreeModeParams::from_state(sigma)?;
    let dealers = (0..3)
        .map(|d| dealer_record_unchecked(sigma, d, key))
        .collect::<Result<Vec<_>>>()?;
    let raw = dealers
        .iter()
        .map(|d| d.key_full_raw)
        .fold(f64::INFINITY, f64::min);
    let rgs = rgs_closed_form(&invariants);
    let (lower, upper) = rgs_key_bounds(rgs);
    Ok(KeyRateReport {
        schema: crate::SCHEMA,
        invariants,
        key_quadrature: key,
        dealers,
        mode_invariant_raw: raw,
        mode_invariant: raw.max(0.0),
        rgs,
        lower_bound: lower,
        upper_bound: upper,
        slack_lower: raw - lower,
        slack_upper: upper - raw,
    })
}

/// Squeezing at which the symmetric network state starts to yield a key.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqueezingThreshold {
    pub r: f64,
    pub db: f64,
}

/// Local invariants of the `R = 1/3`, `R' = 1/2` network at squeezing `r`.
pub fn ghz_invariants(r: f64) -> Result<PureThreeModeParams> {
    let state = ghz_network(&OpticalNetworkParams::new(r, 1.0 / 3.0, 0.5)?)?;
    PureThreeModeParams::from_state(&state)
}

/// Mode-invariant key rate of the standard form of the symmetric network
/// state at squeezing `r`.
pub fn ghz_key_rate(r: f64) -> Result<f64> {
    let sf = standard_form_pure(&ghz_invariants(r)?)?;
    key_rate_mode_invariant(&sf, KeyQuadrature::P)
}

/// Bisection for the zero of [`ghz_key_rate`] to a bracket width of 1e-10.
pub fn threshold_squeezing_ghz() -> Result<SqueezingThreshold> {
    let (mut lo, mut hi) = (0.0, 2.0);
    let (f_lo, f_hi) = (ghz_key_rate(lo)?, ghz_key_rate(hi)?);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(SteerError::internal(format!(
            "threshold not bracketed: K({lo}) = {f_lo}, K({hi}) = {f_hi}"
        )));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if ghz_key_rate(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    Ok(SqueezingThreshold {
        r,
        db: squeezing_db(r),
    })
}

/// Which population a campaign row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fig2Series {
    /// Randomly sampled standard-form state.
    Sample,
    /// `b = c = (a + 1)/2`.
    Lower,
    /// `b = c = 10³`.
    Upper,
    /// `a = b = c`.
    Ghz,
}

impl Fig2Series {
    pub fn label(self) -> &'static str {
        match self {
            Fig2Series::Sample => "sample",
            Fig2Series::Lower => "lower",
            Fig2Series::Upper => "upper",
            Fig2Series::Ghz => "ghz",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig2Row {
    pub sample_index: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rgs: f64,
    pub k_raw: f64,
    pub k_clamped: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub slack_lower: f64,
    pub slack_upper: f64,
    pub series: Fig2Series,
}

impl Fig2Row {
    /// Envelope violated by more than `tol` on either side.
    pub fn violates(&self, tol: f64) -> bool {
        self.slack_lower < -tol || self.slack_upper < -tol
    }
}

/// Key-rate envelope row for one set of invariants.
pub fn fig2_row(p: &PureThreeModeParams, index: usize, series: Fig2Series) -> Result<Fig2Row> {
    let sigma = standard_form_pure(p)?;
    let k_raw = key_rate_mode_invariant(&sigma, KeyQuadrature::P)?;
    let rgs = rgs_closed_form(p);
    let (lower, upper) = rgs_key_bounds(rgs);
    Ok(Fig2Row {
        sample_index: index,
        a: p.a,
        b: p.b,
        c: p.c,
        rgs,
        k_raw,
        k_clamped: k_raw.max(0.0),
        lower_bound: lower,
        upper_bound: upper,
        slack_lower: k_raw - lower,
        slack_upper: upper - k_raw,
        series,
    })
}

/// Overlay curves, `points` values of `a` evenly spaced on `[1, a_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesConfig {
    pub points: usize,
    pub a_max: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            points: 200,
            a_max: 20.0,
        }
    }
}

pub fn boundary_params(series: Fig2Series, a: f64) -> Result<PureThreeModeParams> {
    match series {
        Fig2Series::Lower => PureThreeModeParams::new(a, (a + 1.0) / 2.0, (a + 1.0) / 2.0),
        Fig2Series::Upper => {
            PureThreeModeParams::new(a, UPPER_FAMILY_INVARIANT, UPPER_FAMILY_INVARIANT)
        }
        Fig2Series::Ghz => PureThreeModeParams::new(a, a, a),
        Fig2Series::Sample => Err(SteerError::usage("samples are not a boundary family")),
    }
}

/// Random standard-form states followed by the three overlay series. Row
/// order is fixed by sample index whatever the thread count.
pub fn fig2_campaign(cfg: &SamplerConfig, series: &SeriesConfig) -> Result<Vec<Fig2Row>> {
    cfg.validate()?;
    if series.points > 0 && !(series.a_max > 1.0) {
        return Err(SteerError::usage("series a_max must be > 1"));
    }
    let mut rows: Vec<Fig2Row> = (0..cfg.count)
        .into_par_iter()
        .map(|i| fig2_row(&random_params_at(cfg, i as u64), i, Fig2Series::Sample))
        .collect::<Result<_>>()?;
    for s in [Fig2Series::Lower, Fig2Series::Upper, Fig2Series::Ghz] {
        let curve: Vec<Fig2Row> = (0..series.points)
            .into_par_iter()
            .map(|k| {
                let t = if series.points > 1 {
                    k as f64 / (series.points - 1) as f64
                } else {
                    0.0
                };
                let a = 1.0 + (series.a_max - 1.0) * t;
                fig2_row(&boundary_params(s, a)?, k, s)
            })
            .collect::<Result<_>>()?;
        rows.extend(curve);
    }
    Ok(rows)
}
