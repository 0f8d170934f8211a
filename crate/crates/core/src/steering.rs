//! Gaussian steering measure `G^{A→B}` computed from the symplectic spectrum
//! of the Schur complement of the steering block.

use serde::Serialize;

use crate::error::{Result, SteerError};
use crate::symplectic::{
    check_disjoint, check_mode_set, log_det_cm, partial_trace, schur_complement,
    symplectic_eigenvalues, CovarianceMatrix, Tolerances,
};

/// Schur-spectrum values this close to one are treated as `≥ 1`.
pub const THRESHOLD_SLACK: f64 = 1e-9;

/// `G^{steering→steered}` together with the spectrum it was computed from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SteeringValue {
    pub value: f64,
    pub steering: Vec<usize>,
    pub steered: Vec<usize>,
    pub schur_spectrum: Vec<f64>,
}

impl SteeringValue {
    /// `−Σ_{ν̄ < 1} ln ν̄` recomputed from the stored spectrum.
    pub fn from_spectrum(steering: Vec<usize>, steered: Vec<usize>, spectrum: Vec<f64>) -> Self {
        let value = spectrum
            .iter()
            .filter(|&&nu| nu < 1.0 - THRESHOLD_SLACK)
            .map(|nu| -nu.ln())
            .sum();
        SteeringValue {
            value,
            steering,
            steered,
            schur_spectrum: spectrum,
        }
    }
}

fn check_direction(sigma: &CovarianceMatrix, steering: &[usize], steered: &[usize]) -> Result<()> {
    let n = sigma.n_modes();
    check_mode_set(steering, n, "steering")?;
    check_mode_set(steered, n, "steered")?;
    check_disjoint(steering, steered)
}

/// How much `steering` can steer `steered` by Gaussian measurements. Modes
/// outside both sets are traced out first.
pub fn gaussian_steering(
    sigma: &CovarianceMatrix,
    steering: &[usize],
    steered: &[usize],
) -> Result<SteeringValue> {
    check_direction(sigma, steering, steered)?;
    let joint: Vec<usize> = steering.iter().chain(steered).copied().collect();
    let reduced = partial_trace(sigma, &joint)?;
    let removed: Vec<usize> = (0..steering.len()).collect();
    let schur = schur_complement(&reduced, &removed)?;
    let spectrum = symplectic_eigenvalues(&schur)?;
    Ok(SteeringValue::from_spectrum(
        steering.to_vec(),
        steered.to_vec(),
        spectrum,
    ))
}

/// Determinant shortcut for a single steered mode:
/// `max{0, ½ ln(det σ_steering / det σ_{steering ∪ steered})}`.
pub fn steering_one_mode_steered(
    sigma: &CovarianceMatrix,
    steering: &[usize],
    steered: &[usize],
) -> Result<f64> {
    if steered.len() != 1 {
        return Err(SteerError::usage(format!(
            "determinant shortcut needs one steered mode, got {}",
            steered.len()
        )));
    }
    check_direction(sigma, steering, steered)?;
    let joint: Vec<usize> = steering.iter().chain(steered).copied().collect();
    let m_steering = log_det_cm(&partial_trace(sigma, steering)?)?;
    let m_joint = log_det_cm(&partial_trace(sigma, &joint)?)?;
    Ok((0.5 * (m_steering - m_joint)).max(0.0))
}

/// `½ ln det σ_part` for a pure state: the Rényi-2 entanglement across
/// `part : rest`, which coincides with steering in either direction.
pub fn renyi2_pure_bipartite_entanglement(sigma: &CovarianceMatrix, part: &[usize]) -> Result<f64> {
    if !sigma.is_pure() {
        return Err(SteerError::domain("Rényi-2 shortcut requires a pure state"));
    }
    check_mode_set(part, sigma.n_modes(), "part")?;
    Ok(0.5 * log_det_cm(&partial_trace(sigma, part)?)?)
}

/// True iff `a` and `b` do not both steer the single mode `c`.
pub fn exclusivity_check(
    sigma: &CovarianceMatrix,
    a: &[usize],
    b: &[usize],
    c: usize,
) -> Result<bool> {
    check_disjoint(a, b)?;
    let g_a = gaussian_steering(sigma, a, &[c])?.value;
    let g_b = gaussian_steering(sigma, b, &[c])?.value;
    Ok(g_a.min(g_b) <= Tolerances::default().absolute)
}

/// `2G − (M(σ_steering) − M(σ_{steering ∪ steered}))`, or `None` when
/// `G = 0` and the log-det bound makes no claim.
pub fn logdet_steering_bound_check(
    sigma: &CovarianceMatrix,
    steering: &[usize],
    steered: &[usize],
) -> Result<Option<f64>> {
    let g = gaussian_steering(sigma, steering, steered)?;
    if g.value <= 0.0 {
        return Ok(None);
    }
    let joint: Vec<usize> = steering.iter().chain(steered).copied().collect();
    let m_steering = log_det_cm(&partial_trace(sigma, steering)?)?;
    let m_joint = log_det_cm(&partial_trace(sigma, &joint)?)?;
    Ok(Some(2.0 * g.value - (m_steering - m_joint)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{standard_form_pure, two_mode_squeezed, PureThreeModeParams};
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_has_no_steering() {
        let v = CovarianceMatrix::vacuum(3);
        assert_eq!(gaussian_steering(&v, &[0], &[1, 2]).unwrap().value, 0.0);
        assert_eq!(gaussian_steering(&v, &[2, 0], &[1]).unwrap().value, 0.0);
        assert_eq!(steering_one_mode_steered(&v, &[0, 1], &[2]).unwrap(), 0.0);
        assert_eq!(renyi2_pure_bipartite_entanglement(&v, &[0]).unwrap(), 0.0);
    }

    #[test]
    fn tmsv_steering_is_ln_cosh() {
        let r = 0.5;
        let t = two_mode_squeezed(r).unwrap();
        let expected = 1f64.cosh().ln();
        let ab = gaussian_steering(&t, &[0], &[1]).unwrap();
        assert_relative_eq!(ab.value, expected, epsilon = 1e-12);
        assert_relative_eq!(ab.schur_spectrum[0], 1.0 / 1f64.cosh(), epsilon = 1e-12);
        assert_relative_eq!(
            gaussian_steering(&t, &[1], &[0]).unwrap().value,
            expected,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            steering_one_mode_steered(&t, &[0], &[1]).unwrap(),
            expected,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            renyi2_pure_bipartite_entanglement(&t, &[0]).unwrap(),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn collective_steering_of_standard_form() {
        let p = PureThreeModeParams::new(2.0, 1.5, 1.5).unwrap();
        let s = standard_form_pure(&p).unwrap();
        assert_relative_eq!(
            gaussian_steering(&s, &[1, 2], &[0]).unwrap().value,
            2f64.ln(),
            epsilon = 1e-10
        );
        assert_relative_eq!(
            renyi2_pure_bipartite_entanglement(&s, &[0]).unwrap(),
            2f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn direction_errors() {
        let v = CovarianceMatrix::vacuum(3);
        assert!(matches!(
            gaussian_steering(&v, &[0], &[0]),
            Err(SteerError::Usage(_))
        ));
        assert!(matches!(
            gaussian_steering(&v, &[], &[0]),
            Err(SteerError::Usage(_))
        ));
        assert!(matches!(
            steering_one_mode_steered(&v, &[0], &[1, 2]),
            Err(SteerError::Usage(_))
        ));
        let mixed = CovarianceMatrix::thermal(2, 2.0).unwrap();
        assert!(matches!(
            renyi2_pure_bipartite_entanglement(&mixed, &[0]),
            Err(SteerError::Domain(_))
        ));
    }

    #[test]
    fn logdet_bound_tight_for_single_steered_mode() {
        let t = two_mode_squeezed(0.8).unwrap();
        let slack = logdet_steering_bound_check(&t, &[0], &[1])
            .unwrap()
            .unwrap();
        assert!(slack.abs() < 1e-12);
        let v = CovarianceMatrix::vacuum(2);
        assert_eq!(logdet_steering_bound_check(&v, &[0], &[1]).unwrap(), None);
    }

    #[test]
    fn product_state_is_exclusive() {
        let v = CovarianceMatrix::vacuum(3);
        assert!(exclusivity_check(&v, &[0], &[1], 2).unwrap());
    }

    #[test]
    fn steering_value_recomputes_from_spectrum() {
        let v = SteeringValue::from_spectrum(vec![0], vec![1, 2], vec![0.5, 1.0 - 1e-12, 2.0]);
        assert_relative_eq!(v.value, 2f64.ln(), epsilon = 1e-15);
    }
}
