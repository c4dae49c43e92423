use serde::Serialize;

use super::phi_b;
use crate::error::{Error, Result};
use crate::qlinalg::{DensityMatrix, PureState};
use crate::steering::{steering_report, DEFAULT_EPS_STEER};

/// ε at which the two φ_b pairs AB and AC cross S = 1: 9/(4√3) − 1.
pub const PHI_B_THRESHOLD: f64 = 1.299_038_105_676_658 - 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyState {
    base: PureState,
    visibility: f64,
}

impl NoisyState {
    pub fn new(base: PureState, visibility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::ParamOutOfRange(format!(
                "visibility {visibility} outside [0, 1]"
            )));
        }
        Ok(NoisyState { base, visibility })
    }

    pub fn base(&self) -> &PureState {
        &self.base
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn density(&self) -> DensityMatrix {
        mix_noise(&self.base, self.visibility)
    }
}

fn mix_noise(base: &PureState, v: f64) -> DensityMatrix {
    let q = base.qubits();
    DensityMatrix::mix(&[(v, &base.density()), (1.0 - v, &DensityMatrix::maximally_mixed(q))])
}

/// v|ψ⟩⟨ψ| + (1 − v) I/8.
pub fn add_white_noise(base: &PureState, v: f64) -> Result<DensityMatrix> {
    Ok(NoisyState::new(base.clone(), v)?.density())
}

/// Critical visibility of two-pair steerability under white noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisibilityReport {
    /// Second-largest S_ij at v = 1.
    pub s_second: f64,
    /// Bisection on the noisy states themselves.
    pub bisection: f64,
    /// 1/√S₂ from the exact v² scaling of S.
    pub quadratic_closed_form: f64,
    /// 1/S₂, the value obtained if S is taken to grow linearly with v.
    pub linear_closed_form: f64,
    /// |linear − bisection|.
    pub discrepancy: f64,
}

fn second_largest(s: [f64; 3]) -> f64 {
    let mut v = s;
    v.sort_by(|a, b| b.total_cmp(a));
    v[1]
}

/// Smallest visibility keeping two reduced pairs steerable, by bisection to 1e-10.
pub fn v_crit_numeric(base: &PureState) -> Result<VisibilityReport> {
    let s1 = steering_report(&base.density(), DEFAULT_EPS_STEER)?;
    let s_second = second_largest(s1.s_triple());
    if s1.steerable_count() < 2 {
        return Err(Error::NoNonMonogamyAtUnitVisibility(s_second));
    }
    let excess = |v: f64| -> Result<f64> {
        let r = steering_report(&mix_noise(base, v), DEFAULT_EPS_STEER)?;
        Ok(second_largest(r.s_triple()) - 1.0)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let bisection = 0.5 * (lo + hi);
    let linear = 1.0 / s_second;
    Ok(VisibilityReport {
        s_second,
        bisection,
        quadratic_closed_form: 1.0 / s_second.sqrt(),
        linear_closed_form: linear,
        discrepancy: (linear - bisection).abs(),
    })
}

/// ε ∈ [0, 1] where the φ_b steerable-pair count changes, by bisection to `tol`.
pub fn phi_b_threshold_bisection(tol: f64) -> Result<f64> {
    let count = |eps: f64| -> Result<usize> {
        Ok(steering_report(&phi_b(eps)?, 0.0)?.steerable_count())
    };
    let base = count(0.0)?;
    let (mut lo, mut hi) = (0.0, 1.0);
    if count(hi)? == base {
        return Err(Error::BadParams("count does not change on [0, 1]".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if count(mid)? == base {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::decompose3;
    use crate::families::make_named;

    fn named(name: &str) -> PureState {
        make_named(name, &[]).unwrap().as_pure().unwrap().clone()
    }

    #[test]
    fn threshold_constant() {
        assert!((PHI_B_THRESHOLD - (9.0 / (4.0 * 3f64.sqrt()) - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn endpoints() {
        let psi = named("w");
        let one = add_white_noise(&psi, 1.0).unwrap();
        assert!(one.matrix().max_abs_diff(psi.density().matrix()) < 1e-15);
        let zero = add_white_noise(&psi, 0.0).unwrap();
        assert!(zero.matrix().max_abs_diff(DensityMatrix::maximally_mixed(3).matrix()) < 1e-15);
        assert!(add_white_noise(&psi, 1.5).is_err());
    }

    #[test]
    fn correlations_scale_linearly() {
        let psi = named("psi_abc");
        let a = decompose3(&psi.density()).unwrap();
        let b = decompose3(&add_white_noise(&psi, 0.5).unwrap()).unwrap();
        for (ta, tb) in [(a.t_ab, b.t_ab), (a.t_ac, b.t_ac), (a.t_bc, b.t_bc)] {
            for i in 0..3 {
                for j in 0..3 {
                    assert!((tb[i][j] - 0.5 * ta[i][j]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn critical_visibilities() {
        let r = v_crit_numeric(&named("phi_star_v")).unwrap();
        assert!((r.bisection - 1.0 / 1.25f64.sqrt()).abs() < 1e-9);
        assert!((r.linear_closed_form - 0.8).abs() < 1e-12);
        let r = v_crit_numeric(&named("phi_w_v")).unwrap();
        assert!((r.bisection - 1.0 / (4.0f64 / 3.0).sqrt()).abs() < 1e-9);
        assert!((r.linear_closed_form - 0.75).abs() < 1e-12);
        let r = v_crit_numeric(&named("psi_abc")).unwrap();
        assert!((r.quadratic_closed_form - r.bisection).abs() < 1e-9);
        assert!(matches!(
            v_crit_numeric(&named("ghz")),
            Err(Error::NoNonMonogamyAtUnitVisibility(_))
        ));
    }

    #[test]
    fn phi_b_threshold() {
        let eps = phi_b_threshold_bisection(1e-12).unwrap();
        assert!((eps - PHI_B_THRESHOLD).abs() < 1e-9);
    }
}
