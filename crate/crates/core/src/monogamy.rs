//! Monogamy residuals of the steering measure and the residual Gaussian
//! steering (RGS) of pure three-mode states.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SteerError};
use crate::states::{
    ghz_network, local_invariants, standard_form_pure, OpticalNetworkParams, PureThreeModeParams,
};
use crate::steering::gaussian_steering;
use crate::symplectic::{CovarianceMatrix, ModePartition};

/// Which side of the inequality the focus party sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonogamyDirection {
    /// `G^{(rest)→k} − Σ_j G^{j→k}`.
    SteeredByRest,
    /// `G^{k→(rest)} − Σ_j G^{k→j}`.
    SteersRest,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub focus: usize,
    pub direction: MonogamyDirection,
    pub collective: f64,
    /// One term per other party, in party order.
    pub pairwise: Vec<f64>,
    pub residual: f64,
}

/// Collective-minus-pairwise residual for party `k` of a partition whose
/// parties are single modes.
pub fn monogamy_residual(
    sigma: &CovarianceMatrix,
    parties: &ModePartition,
    k: usize,
    direction: MonogamyDirection,
) -> Result<MonogamyReport> {
    if parties.len() < 2 {
        return Err(SteerError::usage("monogamy needs at least two parties"));
    }
    if let Some(p) = parties.parts().iter().find(|p| p.len() != 1) {
        return Err(SteerError::usage(format!(
            "every party must be a single mode, got party {p:?}"
        )));
    }
    if k >= parties.len() {
        return Err(SteerError::usage(format!("focus party {k} out of range")));
    }
    let focus = parties.parts()[k].as_slice();
    let rest = parties.rest(k);
    let g = |from: &[usize], to: &[usize]| gaussian_steering(sigma, from, to).map(|v| v.value);
    let (collective, pairwise) = match direction {
        MonogamyDirection::SteeredByRest => (
            g(&rest, focus)?,
            rest.iter()
                .map(|&j| g(&[j], focus))
                .collect::<Result<Vec<_>>>()?,
        ),
        MonogamyDirection::SteersRest => (
            g(focus, &rest)?,
            rest.iter()
                .map(|&j| g(focus, &[j]))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let residual = collective - pairwise.iter().sum::<f64>();
    Ok(MonogamyReport {
        focus: k,
        direction,
        collective,
        pairwise,
        residual,
    })
}

/// The three cyclic orderings `⟨i, j, k⟩` of three parties; `i` is the pivot.
pub const CYCLIC: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

/// Residual Gaussian steering with every evaluated residual recorded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RgsValue {
    pub value: f64,
    /// `⟨i, j, k⟩` attaining the minimum.
    pub minimizing: [usize; 3],
    pub minimizing_direction: MonogamyDirection,
    /// `G^{(jk)→i} − G^{j→i} − G^{k→i}` for each cyclic ordering.
    pub steered_residuals: [f64; 3],
    /// `G^{i→(jk)} − G^{i→j} − G^{i→k}` for each cyclic ordering.
    pub steering_residuals: [f64; 3],
}

/// Absolute slack when checking that both residual minima agree.
pub const RGS_AGREEMENT_TOL: f64 = 1e-9;

/// RGS of a pure three-mode state, minimizing both residual families over
/// the cyclic orderings.
pub fn rgs(sigma: &CovarianceMatrix) -> Result<RgsValue> {
    if sigma.n_modes() != 3 {
        return Err(SteerError::usage(format!(
            "RGS needs a three-mode state, got {} modes",
            sigma.n_modes()
        )));
    }
    if !sigma.is_pure() {
        return Err(SteerError::domain(
            "RGS is defined for pure three-mode states",
        ));
    }
    let (steered, steering) = rgs_residuals(sigma)?;
    let min_steered = steered.iter().copied().fold(f64::INFINITY, f64::min);
    let min_steering = steering.iter().copied().fold(f64::INFINITY, f64::min);
    if (min_steered - min_steering).abs() > RGS_AGREEMENT_TOL * min_steered.abs().max(1.0) {
        return Err(SteerError::internal(format!(
            "steered and steering RGS minima disagree: {min_steered} vs {min_steering}"
        )));
    }
    let mut best = (f64::INFINITY, 0, MonogamyDirection::SteeredByRest);
    for (residuals, dir) in [
        (&steered, MonogamyDirection::SteeredByRest),
        (&steering, MonogamyDirection::SteersRest),
    ] {
        for (idx, &r) in residuals.iter().enumerate() {
            if r < best.0 {
                best = (r, idx, dir);
            }
        }
    }
    Ok(RgsValue {
        value: best.0,
        minimizing: CYCLIC[best.1],
        minimizing_direction: best.2,
        steered_residuals: steered,
        steering_residuals: steering,
    })
}

/// Both residual families for any three-mode state, with no purity
/// requirement. On mixed states the two minima need not agree.
pub fn rgs_residuals(sigma: &CovarianceMatrix) -> Result<([f64; 3], [f64; 3])> {
    let parties = ModePartition::single_modes(3);
    let mut steered = [0.0; 3];
    let mut steering = [0.0; 3];
    for (idx, perm) in CYCLIC.iter().enumerate() {
        steered[idx] =
            monogamy_residual(sigma, &parties, perm[0], MonogamyDirection::SteeredByRest)?.residual;
        steering[idx] =
            monogamy_residual(sigma, &parties, perm[0], MonogamyDirection::SteersRest)?.residual;
    }
    Ok((steered, steering))
}

/// `ln min{bc/a, ca/b, ab/c}`.
pub fn rgs_closed_form(p: &PureThreeModeParams) -> f64 {
    let (a, b, c) = (p.a, p.b, p.c);
    (b * c / a).min(c * a / b).min(a * b / c).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig1aRow {
    pub b: f64,
    pub c: f64,
    pub rgs: f64,
}

/// RGS over a `grid × grid` lattice of `(b, c) ∈ [1, bc_max]²` at fixed `a`,
/// keeping only lattice points inside the triangle region. Rows are ordered
/// by `b` then `c`.
pub fn fig1a_sweep(a: f64, grid: usize, bc_max: f64) -> Result<Vec<Fig1aRow>> {
    if grid < 2 {
        return Err(SteerError::usage("grid needs at least two points per axis"));
    }
    if !(a >= 1.0) || !(bc_max > 1.0) || !a.is_finite() || !bc_max.is_finite() {
        return Err(SteerError::usage(format!(
            "need a ≥ 1 and bc_max > 1, got a = {a}, bc_max = {bc_max}"
        )));
    }
    let axis: Vec<f64> = (0..grid)
        .map(|i| 1.0 + (bc_max - 1.0) * i as f64 / (grid - 1) as f64)
        .collect();
    let cells: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&b| axis.iter().map(move |&c| (b, c)))
        .filter(|&(b, c)| PureThreeModeParams { a, b, c }.satisfies_triangle(0.0))
        .collect();
    cells
        .par_iter()
        .map(|&(b, c)| {
            let p = PureThreeModeParams { a, b, c };
            let value = rgs(&standard_form_pure(&p)?)?.value;
            Ok(Fig1aRow { b, c, rgs: value })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig1bRow {
    pub reflectivity: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rgs: f64,
}

/// RGS of the beamsplitter-network state for `R = i / grid`, `i = 0..=grid`.
pub fn fig1b_sweep(r: f64, grid: usize, reflectivity_prime: f64) -> Result<Vec<Fig1bRow>> {
    if grid < 1 {
        return Err(SteerError::usage("grid needs at least one interval"));
    }
    OpticalNetworkParams::new(r, 0.0, reflectivity_prime)?;
    (0..=grid)
        .into_par_iter()
        .map(|i| {
            let reflectivity = i as f64 / grid as f64;
            let state = ghz_network(&OpticalNetworkParams::new(
                r,
                reflectivity,
                reflectivity_prime,
            )?)?;
            let [a, b, c] = local_invariants(&state)?;
            let value = rgs(&state)?.value;
            Ok(Fig1bRow {
                reflectivity,
                a,
                b,
                c,
                rgs: value,
            })
        })
        .collect()
}
