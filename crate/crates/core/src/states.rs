//! Constructors and seeded samplers for the Gaussian states used throughout
//! the crate.

use std::f64::consts::LN_10;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SteerError};
use crate::symplectic::{
    apply_symplectic, is_pure, is_symplectic, log_det, partial_trace, CovarianceMatrix, Tolerances,
};

/// Which quadrature of a mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    /// Offset of this quadrature inside a mode's 2×2 block.
    pub fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Quadrature::X => Quadrature::P,
            Quadrature::P => Quadrature::X,
        }
    }
}

/// Squeezing in decibels, `10 log10(e^{2r})`.
pub fn squeezing_db(r: f64) -> f64 {
    20.0 * r / LN_10
}

pub fn squeezing_from_db(db: f64) -> f64 {
    db * LN_10 / 20.0
}

/// Single-mode squeezed vacuum with the `squeezed` quadrature's variance
/// reduced to `e^{-2r}`.
pub fn squeezed_vacuum(r: f64, squeezed: Quadrature) -> Result<CovarianceMatrix> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(SteerError::usage(format!(
            "squeezing r must be ≥ 0, got {r}"
        )));
    }
    let (lo, hi) = ((-2.0 * r).exp(), (2.0 * r).exp());
    let diag = match squeezed {
        Quadrature::X => [lo, hi],
        Quadrature::P => [hi, lo],
    };
    Ok(CovarianceMatrix::from_matrix_unchecked(
        DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&diag)),
    ))
}

/// Two-mode squeezed vacuum: `cosh 2r` locally, `±sinh 2r` on the x/p
/// correlations.
pub fn two_mode_squeezed(r: f64) -> Result<CovarianceMatrix> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(SteerError::usage(format!(
            "squeezing r must be ≥ 0, got {r}"
        )));
    }
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    Ok(CovarianceMatrix::from_matrix_unchecked(
        DMatrix::from_row_slice(
            4,
            4,
            &[
                c, 0.0, s, 0.0, //
                0.0, c, 0.0, -s, //
                s, 0.0, c, 0.0, //
                0.0, -s, 0.0, c,
            ],
        ),
    ))
}

/// Symplectic matrix of a beamsplitter with reflectivity `reflectivity`
/// acting on modes `i` and `j` of an `n_modes` system:
/// `(q_i, q_j) ↦ (t q_i + s q_j, −s q_i + t q_j)` for both quadratures, with
/// `t = √(1−R)` and `s = √R`.
pub fn beamsplitter(reflectivity: f64, i: usize, j: usize, n_modes: usize) -> Result<DMatrix<f64>> {
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(SteerError::usage(format!(
            "reflectivity must lie in [0, 1], got {reflectivity}"
        )));
    }
    if i == j || i >= n_modes || j >= n_modes {
        return Err(SteerError::usage(format!(
            "beamsplitter modes ({i}, {j}) invalid for {n_modes} modes"
        )));
    }
    let t = (1.0 - reflectivity).sqrt();
    let s = reflectivity.sqrt();
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for q in 0..2 {
        let (a, b) = (2 * i + q, 2 * j + q);
        m[(a, a)] = t;
        m[(a, b)] = s;
        m[(b, a)] = -s;
        m[(b, b)] = t;
    }
    Ok(m)
}

/// Squeezing and reflectivities of the three-mode beamsplitter network.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalNetworkParams {
    pub r: f64,
    pub reflectivity: f64,
    pub reflectivity_prime: f64,
}

impl OpticalNetworkParams {
    pub fn new(r: f64, reflectivity: f64, reflectivity_prime: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(SteerError::usage(format!(
                "squeezing r must be ≥ 0, got {r}"
            )));
        }
        for (name, v) in [("R", reflectivity), ("R'", reflectivity_prime)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(SteerError::usage(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(OpticalNetworkParams {
            r,
            reflectivity,
            reflectivity_prime,
        })
    }

    pub fn squeezing_db(&self) -> f64 {
        squeezing_db(self.r)
    }
}

/// Pure three-mode state from three squeezed vacua and two beamsplitters.
///
/// Inputs: modes 0 and 2 squeezed in x, mode 1 squeezed in p, all at `r`.
/// The `R` beamsplitter mixes modes (0, 1), then the `R'` beamsplitter mixes
/// modes (1, 2). Mode 0 is party A. With this port assignment and
/// `R' = 1/2` the local invariants are
/// `a² = 1 + 2R(1−R)(cosh 4r − 1)` and `b² = c² = [1 + R² − (R² − 1) cosh 4r]/2`,
/// and `R = 1/3` gives the permutation-symmetric state `a = b = c`.
pub fn ghz_network(params: &OpticalNetworkParams) -> Result<CovarianceMatrix> {
    let input = CovarianceMatrix::direct_sum(&[
        squeezed_vacuum(params.r, Quadrature::X)?,
        squeezed_vacuum(params.r, Quadrature::P)?,
        squeezed_vacuum(params.r, Quadrature::X)?,
    ]);
    let first = beamsplitter(params.reflectivity, 0, 1, 3)?;
    let second = beamsplitter(params.reflectivity_prime, 1, 2, 3)?;
    let out = apply_symplectic(&input, &(second * first))?;
    if !out.is_pure() {
        return Err(SteerError::internal(
            "optical network produced a mixed state",
        ));
    }
    Ok(out)
}

/// Local symplectic invariants `a, b, c ≥ 1` of a pure three-mode state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureThreeModeParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Slack accepted by [`PureThreeModeParams::new`] on the triangle inequalities,
/// so invariants read back from constructed states are not rejected over
/// roundoff.
pub const TRIANGLE_SLACK: f64 = 1e-9;

impl PureThreeModeParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let p = PureThreeModeParams { a, b, c };
        if !p.satisfies_triangle(TRIANGLE_SLACK) {
            return Err(SteerError::domain(format!(
                "(a, b, c) = ({a}, {b}, {c}) violates |b−c|+1 ≤ a ≤ b+c−1 or a cyclic permutation"
            )));
        }
        Ok(p)
    }

    /// `|b−c| + 1 ≤ a ≤ b + c − 1` and cyclic, each within `slack`.
    pub fn satisfies_triangle(&self, slack: f64) -> bool {
        let v = [self.a, self.b, self.c];
        if v.iter().any(|x| !x.is_finite() || *x < 1.0 - slack) {
            return false;
        }
        (0..3).all(|i| {
            let (x, y, z) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
            (y - z).abs() + 1.0 <= x + slack && x <= y + z - 1.0 + slack
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Invariants of a three-mode state, validated against the triangle
    /// condition.
    pub fn from_state(sigma: &CovarianceMatrix) -> Result<Self> {
        let [a, b, c] = local_invariants(sigma)?;
        Self::new(a, b, c)
    }
}

/// `(√det σ_A, √det σ_B, √det σ_C)` for a three-mode state.
pub fn local_invariants(sigma: &CovarianceMatrix) -> Result<[f64; 3]> {
    if sigma.n_modes() != 3 {
        return Err(SteerError::usage(format!(
            "local invariants need a three-mode state, got {} modes",
            sigma.n_modes()
        )));
    }
    Ok([0, 1, 2].map(|m| sigma.block(m, m).determinant().sqrt()))
}

/// `√((u²−(w−1)²)(u²−(w+1)²))` as a product of linear factors. Factors
/// within the triangle slack of zero are snapped to zero so states on the
/// boundary of the invariant region stay pure to rounding.
fn radical(u: f64, w: f64) -> f64 {
    let snap = |f: f64| {
        if f.abs() <= TRIANGLE_SLACK * w.max(1.0) {
            0.0
        } else {
            f
        }
    };
    let prod = snap(u - (w - 1.0)) * (u + (w - 1.0)) * snap(u - (w + 1.0)) * (u + w + 1.0);
    prod.max(0.0).sqrt()
}

/// Pure three-mode covariance matrix in standard form: local blocks
/// `a·I, b·I, c·I` and diagonal inter-modal blocks `diag(ε⁺, ε⁻)`, with
///
/// `ε±_ij = [√(((a_i−a_j)²−(a_k−1)²)((a_i−a_j)²−(a_k+1)²)) ± √(((a_i+a_j)²−(a_k−1)²)((a_i+a_j)²−(a_k+1)²))] / (4√(a_i a_j))`.
///
/// The result is checked for purity, unit determinant and the requested
/// local invariants before it is returned.
pub fn standard_form_pure(p: &PureThreeModeParams) -> Result<CovarianceMatrix> {
    let inv = p.as_array();
    let mut m = DMatrix::zeros(6, 6);
    for (k, &v) in inv.iter().enumerate() {
        m[(2 * k, 2 * k)] = v;
        m[(2 * k + 1, 2 * k + 1)] = v;
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (ai, aj, ak) = (inv[i], inv[j], inv[k]);
        let lo = radical((ai - aj).abs(), ak);
        let hi = radical(ai + aj, ak);
        let norm = 4.0 * (ai * aj).sqrt();
        let (plus, minus) = ((lo + hi) / norm, (lo - hi) / norm);
        m[(2 * i, 2 * j)] = plus;
        m[(2 * j, 2 * i)] = plus;
        m[(2 * i + 1, 2 * j + 1)] = minus;
        m[(2 * j + 1, 2 * i + 1)] = minus;
    }

    let det_log = log_det(&m).map_err(|e| {
        SteerError::internal(format!(
            "standard form for {p:?} is not positive definite: {e}"
        ))
    })?;
    let sigma = CovarianceMatrix::from_matrix_unchecked(m);
    if !is_pure(&sigma, &Tolerances::default()) {
        return Err(SteerError::internal(format!(
            "standard form for {p:?} is not pure"
        )));
    }
    if (det_log.exp() - 1.0).abs() > 1e-8 {
        return Err(SteerError::internal(format!(
            "standard form for {p:?} has det {}",
            det_log.exp()
        )));
    }
    let got = local_invariants(&sigma)?;
    if got
        .iter()
        .zip(inv)
        .any(|(g, w)| (g - w).abs() > 1e-9 * w.max(1.0))
    {
        return Err(SteerError::internal(format!(
            "standard form for {p:?} has invariants {got:?}"
        )));
    }
    Ok(sigma)
}

/// Parameter law for [`random_params`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamDistribution {
    /// `a, b, c` each uniform on `[1, a_max]`.
    #[default]
    Uniform,
    /// `ln a, ln b, ln c` each uniform on `[0, ln a_max]`.
    LogUniform,
}

impl std::str::FromStr for ParamDistribution {
    type Err = SteerError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(ParamDistribution::Uniform),
            "log-uniform" => Ok(ParamDistribution::LogUniform),
            other => Err(SteerError::usage(format!("unknown distribution {other:?}"))),
        }
    }
}

/// Seeded sampler settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
    /// Upper end of the per-mode squeezing draw for random states.
    pub r_max: f64,
    /// Upper end of the local-invariant draw for random standard forms.
    pub a_max: f64,
    pub distribution: ParamDistribution,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 42,
            count: 10_000,
            r_max: 1.0,
            a_max: 5.0,
            distribution: ParamDistribution::Uniform,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(SteerError::usage("sample count must be ≥ 1"));
        }
        if !(self.r_max >= 0.0) || !self.r_max.is_finite() {
            return Err(SteerError::usage(format!(
                "r_max must be ≥ 0, got {}",
                self.r_max
            )));
        }
        if !(self.a_max > 1.0) || !self.a_max.is_finite() {
            return Err(SteerError::usage(format!(
                "a_max must be > 1, got {}",
                self.a_max
            )));
        }
        Ok(())
    }

    /// Parses `key = value` lines (TOML syntax); missing keys keep defaults.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: SamplerConfig =
            toml::from_str(s).map_err(|e| SteerError::usage(format!("bad sampler config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Generator for sample `index` of the stream seeded by `seed`: a ChaCha8
/// keyed by `seed` with its stream id set to `index`. Samples therefore do
/// not depend on evaluation order or thread count.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Haar-random `n × n` unitary from the QR factorization of a complex
/// Gaussian matrix, with the phases of `R`'s diagonal absorbed into `Q`.
fn random_unitary(n: usize, rng: &mut impl Rng) -> DMatrix<Complex<f64>> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        Complex::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Real interleaved-order representation of a passive (unitary) transform:
/// `x' = Re(U) x − Im(U) p`, `p' = Im(U) x + Re(U) p`.
pub fn passive_symplectic(u: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (re, im) = (u[(i, j)].re, u[(i, j)].im);
            s[(2 * i, 2 * j)] = re;
            s[(2 * i, 2 * j + 1)] = -im;
            s[(2 * i + 1, 2 * j)] = im;
            s[(2 * i + 1, 2 * j + 1)] = re;
        }
    }
    s
}

/// Random orthogonal symplectic matrix on `n_modes`.
pub fn random_passive(n_modes: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    passive_symplectic(&random_unitary(n_modes, rng))
}

/// `O Z² Oᵀ` with `Z = ⊕ diag(e^{r_k}, e^{−r_k})`, `r_k ~ U[0, r_max]`.
pub fn random_pure_with(n_modes: usize, r_max: f64, rng: &mut impl Rng) -> CovarianceMatrix {
    let squeeze: Vec<f64> = (0..n_modes)
        .map(|_| {
            if r_max > 0.0 {
                rng.random_range(0.0..=r_max)
            } else {
                0.0
            }
        })
        .collect();
    let o = random_passive(n_modes, rng);
    let z2 = DMatrix::from_fn(2 * n_modes, 2 * n_modes, |i, j| {
        if i != j {
            0.0
        } else if i % 2 == 0 {
            (2.0 * squeeze[i / 2]).exp()
        } else {
            (-2.0 * squeeze[i / 2]).exp()
        }
    });
    debug_assert!(is_symplectic(&o, 1e-10));
    CovarianceMatrix::from_matrix_unchecked(&o * z2 * o.transpose())
}

/// Sample `index` of [`random_pure`].
pub fn random_pure_at(n_modes: usize, r_max: f64, seed: u64, index: u64) -> CovarianceMatrix {
    random_pure_with(n_modes, r_max, &mut sample_rng(seed, index))
}

/// Deterministic stream of `cfg.count` random pure states on `n_modes`.
pub fn random_pure(
    n_modes: usize,
    cfg: &SamplerConfig,
) -> Result<impl Iterator<Item = CovarianceMatrix> + '_> {
    if n_modes == 0 {
        return Err(SteerError::usage("need at least one mode"));
    }
    cfg.validate()?;
    Ok((0..cfg.count as u64).map(move |i| random_pure_at(n_modes, cfg.r_max, cfg.seed, i)))
}

/// Reduced state on the first `n_parties` modes of a random pure state with
/// `ancillas` extra modes.
pub fn random_mixed_with(
    n_parties: usize,
    ancillas: usize,
    r_max: f64,
    rng: &mut impl Rng,
) -> CovarianceMatrix {
    let pure = random_pure_with(n_parties + ancillas, r_max, rng);
    let kept: Vec<usize> = (0..n_parties).collect();
    partial_trace(&pure, &kept).expect("kept modes are in range")
}

/// Sample `index` of [`random_mixed`]: one or two ancillas, drawn per sample.
pub fn random_mixed_at(n_parties: usize, r_max: f64, seed: u64, index: u64) -> CovarianceMatrix {
    let mut rng = sample_rng(seed, index);
    let ancillas = rng.random_range(1..=2);
    random_mixed_with(n_parties, ancillas, r_max, &mut rng)
}

/// Deterministic stream of generically mixed states on `n_parties` modes.
pub fn random_mixed(
    n_parties: usize,
    cfg: &SamplerConfig,
) -> Result<impl Iterator<Item = CovarianceMatrix> + '_> {
    if n_parties < 2 {
        return Err(SteerError::usage("need at least two parties"));
    }
    cfg.validate()?;
    Ok((0..cfg.count as u64).map(move |i| random_mixed_at(n_parties, cfg.r_max, cfg.seed, i)))
}

fn draw_invariant(rng: &mut impl Rng, a_max: f64, dist: ParamDistribution) -> f64 {
    match dist {
        ParamDistribution::Uniform => rng.random_range(1.0..=a_max),
        ParamDistribution::LogUniform => rng.random_range(0.0..=a_max.ln()).exp(),
    }
}

/// Sample `index` of [`random_params`], by rejection on the triangle region.
pub fn random_params_at(cfg: &SamplerConfig, index: u64) -> PureThreeModeParams {
    let mut rng = sample_rng(cfg.seed, index);
    loop {
        let p = PureThreeModeParams {
            a: draw_invariant(&mut rng, cfg.a_max, cfg.distribution),
            b: draw_invariant(&mut rng, cfg.a_max, cfg.distribution),
            c: draw_invariant(&mut rng, cfg.a_max, cfg.distribution),
        };
        if p.satisfies_triangle(0.0) {
            return p;
        }
    }
}

/// Deterministic stream of local invariants satisfying the triangle
/// condition exactly.
pub fn random_params(
    cfg: &SamplerConfig,
) -> Result<impl Iterator<Item = PureThreeModeParams> + '_> {
    cfg.validate()?;
    Ok((0..cfg.count as u64).map(move |i| random_params_at(cfg, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{symplectic_defect, validity_report};
    use approx::assert_relative_eq;

    #[test]
    fn squeezed_vacuum_values() {
        assert_eq!(
            squeezed_vacuum(0.0, Quadrature::X).unwrap(),
            CovarianceMatrix::vacuum(1)
        );
        let s = squeezed_vacuum(0.345, Quadrature::P).unwrap();
        assert_relative_eq!(s.matrix()[(0, 0)], 0.69f64.exp(), epsilon = 1e-14);
        assert_relative_eq!(s.matrix()[(1, 1)], (-0.69f64).exp(), epsilon = 1e-14);
        assert_relative_eq!(
            s.matrix()[(0, 0)] * s.matrix()[(1, 1)],
            1.0,
            epsilon = 1e-14
        );
        assert!((squeezing_db(0.345) - 3.0).abs() < 0.01);
        assert_relative_eq!(squeezing_from_db(squeezing_db(0.7)), 0.7, epsilon = 1e-14);
        assert!(squeezed_vacuum(-0.1, Quadrature::X).is_err());
    }

    #[test]
    fn beamsplitter_is_symplectic_and_orthogonal() {
        assert_eq!(beamsplitter(0.0, 0, 1, 2).unwrap(), DMatrix::identity(4, 4));
        for r in [0.1, 0.5, 1.0 / 3.0, 0.9] {
            let b = beamsplitter(r, 0, 2, 3).unwrap();
            assert!(symplectic_defect(&b) < 1e-12);
            assert_relative_eq!(&b * b.transpose(), DMatrix::identity(6, 6), epsilon = 1e-12);
        }
        assert!(beamsplitter(1.2, 0, 1, 2).is_err());
        assert!(beamsplitter(0.5, 1, 1, 2).is_err());
    }

    #[test]
    fn balanced_beamsplitter_on_identical_squeezers() {
        let sq = squeezed_vacuum(0.6, Quadrature::X).unwrap();
        let input = CovarianceMatrix::direct_sum(&[sq.clone(), sq]);
        let out = apply_symplectic(&input, &beamsplitter(0.5, 0, 1, 2).unwrap()).unwrap();
        assert_relative_eq!(
            out.matrix().clone(),
            input.matrix().clone(),
            epsilon = 1e-12
        );
    }

    fn formula_a(r: f64, rr: f64) -> f64 {
        (1.0 + 2.0 * rr * (1.0 - rr) * ((4.0 * r).cosh() - 1.0)).sqrt()
    }

    fn formula_bc(r: f64, rr: f64) -> f64 {
        ((1.0 + rr * rr - (rr * rr - 1.0) * (4.0 * r).cosh()) / 2.0).sqrt()
    }

    #[test]
    fn ghz_network_matches_invariant_formulas_on_grid() {
        for i in 0..=10 {
            for j in 0..=10 {
                let (rr, r) = (i as f64 / 10.0, j as f64 / 10.0);
                let s = ghz_network(&OpticalNetworkParams::new(r, rr, 0.5).unwrap()).unwrap();
                let [a, b, c] = local_invariants(&s).unwrap();
                assert!((a - formula_a(r, rr)).abs() < 1e-9, "a at R={rr} r={r}");
                assert!((b - formula_bc(r, rr)).abs() < 1e-9, "b at R={rr} r={r}");
                assert!((c - formula_bc(r, rr)).abs() < 1e-9, "c at R={rr} r={r}");
            }
        }
    }

    #[test]
    fn ghz_network_symmetric_point() {
        let vac = ghz_network(&OpticalNetworkParams::new(0.0, 0.3, 0.5).unwrap()).unwrap();
        assert_relative_eq!(
            vac.matrix().clone(),
            DMatrix::identity(6, 6),
            epsilon = 1e-14
        );
        for r in [0.1, 0.345, 1.2] {
            let s = ghz_network(&OpticalNetworkParams::new(r, 1.0 / 3.0, 0.5).unwrap()).unwrap();
            let [a, b, c] = local_invariants(&s).unwrap();
            assert!((a - b).abs() < 1e-9 && (b - c).abs() < 1e-9);
        }
        let s = ghz_network(&OpticalNetworkParams::new(0.345, 1.0 / 3.0, 0.5).unwrap()).unwrap();
        let expected = (1.0 + 4.0 / 9.0 * (1.38f64.cosh() - 1.0)).sqrt();
        assert_relative_eq!(local_invariants(&s).unwrap()[0], expected, epsilon = 1e-12);
    }

    #[test]
    fn triangle_condition() {
        assert!(PureThreeModeParams::new(2.0, 1.5, 1.5).is_ok());
        assert!(PureThreeModeParams::new(3.0, 1.0, 1.0).is_err());
        assert!(PureThreeModeParams::new(0.5, 1.0, 1.0).is_err());
        assert!(PureThreeModeParams::new(1.0, 2.0, 2.5).is_err());
        assert!(PureThreeModeParams::new(1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn standard_form_vacuum() {
        let s = standard_form_pure(&PureThreeModeParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(s.matrix().clone(), DMatrix::identity(6, 6), epsilon = 1e-14);
    }

    #[test]
    fn standard_form_with_unit_c_is_tmsv_times_vacuum() {
        let a = 2.3;
        let s = standard_form_pure(&PureThreeModeParams::new(a, a, 1.0).unwrap()).unwrap();
        let r = a.acosh() / 2.0;
        let expected = CovarianceMatrix::direct_sum(&[
            two_mode_squeezed(r).unwrap(),
            CovarianceMatrix::vacuum(1),
        ]);
        assert_relative_eq!(
            s.matrix().clone(),
            expected.matrix().clone(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn standard_form_purity_complement() {
        for (a, b, c) in [
            (2.0, 1.5, 1.5),
            (2.0, 3.0, 3.0),
            (3.0, 2.5, 1.7),
            (1.6, 4.0, 3.5),
        ] {
            let s = standard_form_pure(&PureThreeModeParams::new(a, b, c).unwrap()).unwrap();
            let bc = partial_trace(&s, &[1, 2]).unwrap();
            assert_relative_eq!(bc.log_det().unwrap().exp().sqrt(), a, epsilon = 1e-9);
            let round = local_invariants(&s).unwrap();
            assert_relative_eq!(round[0], a, epsilon = 1e-12);
            assert_relative_eq!(round[1], b, epsilon = 1e-12);
            assert_relative_eq!(round[2], c, epsilon = 1e-12);
        }
    }

    #[test]
    fn standard_form_handles_large_invariants() {
        for a in [1.0, 2.0, 10.0, 100.0] {
            let s = standard_form_pure(&PureThreeModeParams::new(a, 1e3, 1e3).unwrap());
            assert!(s.is_ok(), "a = {a}: {s:?}");
        }
    }

    #[test]
    fn random_pure_is_pure_and_deterministic() {
        let cfg = SamplerConfig {
            count: 50,
            r_max: 1.5,
            ..Default::default()
        };
        let a: Vec<_> = random_pure(4, &cfg).unwrap().collect();
        let b: Vec<_> = random_pure(4, &cfg).unwrap().collect();
        assert_eq!(a, b);
        for s in &a {
            for nu in s.symplectic_eigenvalues().unwrap() {
                assert!((nu - 1.0).abs() < 1e-8);
            }
        }
        assert_eq!(random_pure_at(4, 1.5, 42, 17), a[17]);
    }

    #[test]
    fn random_pure_without_squeezing_is_vacuum() {
        let cfg = SamplerConfig {
            count: 5,
            r_max: 0.0,
            ..Default::default()
        };
        for s in random_pure(3, &cfg).unwrap() {
            assert_relative_eq!(s.matrix().clone(), DMatrix::identity(6, 6), epsilon = 1e-12);
        }
    }

    #[test]
    fn random_mixed_states_are_valid() {
        let cfg = SamplerConfig {
            count: 100,
            ..Default::default()
        };
        let tol = Tolerances::default();
        let mut mixed = 0;
        for s in random_mixed(3, &cfg).unwrap() {
            let rep = validity_report(s.matrix(), &tol).unwrap();
            assert!(rep.valid);
            if !rep.pure {
                mixed += 1;
            }
        }
        assert!(mixed > 90);
        let pure = random_mixed_with(3, 0, 1.0, &mut sample_rng(1, 2));
        assert!(pure.is_pure());
    }

    #[test]
    fn tmsv_marginal() {
        let r = 0.45;
        let m = partial_trace(&two_mode_squeezed(r).unwrap(), &[0]).unwrap();
        assert_relative_eq!(
            m.matrix().clone(),
            DMatrix::identity(2, 2) * (2.0 * r).cosh(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn random_params_respect_triangle() {
        for dist in [ParamDistribution::Uniform, ParamDistribution::LogUniform] {
            let cfg = SamplerConfig {
                count: 500,
                distribution: dist,
                ..Default::default()
            };
            let v: Vec<_> = random_params(&cfg).unwrap().collect();
            assert!(v.iter().all(|p| p.satisfies_triangle(0.0)));
            let w: Vec<_> = random_params(&cfg).unwrap().collect();
            assert_eq!(v, w);
        }
        let tight = SamplerConfig {
            count: 20,
            a_max: 1.0 + 1e-3,
            ..Default::default()
        };
        for p in random_params(&tight).unwrap() {
            assert!(p.a < 1.0 + 1e-3 && p.b < 1.0 + 1e-3 && p.c < 1.0 + 1e-3);
        }
    }

    #[test]
    fn sampler_config_parsing() {
        let cfg =
            SamplerConfig::from_toml_str("seed = 7\ncount = 12\ndistribution = \"log-uniform\"\n")
                .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.count, 12);
        assert_eq!(cfg.distribution, ParamDistribution::LogUniform);
        assert_eq!(cfg.a_max, 5.0);
        assert!(SamplerConfig::from_toml_str("count = 0").is_err());
        assert!(SamplerConfig::from_toml_str("bogus = 1").is_err());
    }

    #[test]
    fn local_invariants_needs_three_modes() {
        assert!(local_invariants(&CovarianceMatrix::vacuum(2)).is_err());
        assert_eq!(
            local_invariants(&CovarianceMatrix::vacuum(3)).unwrap(),
            [1.0; 3]
        );
    }
}
