//! Five-amplitude canonical form λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::{PureState, C64};

pub const GSD_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsdParams {
    pub lambda: [f64; 5],
    pub phi: f64,
}

impl GsdParams {
    pub fn new(lambda: [f64; 5], phi: f64) -> Result<Self> {
        Self::with_tolerance(lambda, phi, GSD_NORM_TOL)
    }

    pub fn with_tolerance(lambda: [f64; 5], phi: f64, tol: f64) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::BadParams(format!(
                "amplitudes must be finite and nonnegative, got {lambda:?}"
            )));
        }
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(Error::ParamOutOfRange(format!("phase {phi} outside [0, π]")));
        }
        let norm: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalizedParams(norm));
        }
        Ok(GsdParams { lambda, phi })
    }

    /// Builds from squared amplitudes, phase zero.
    pub fn from_squares(sq: [f64; 5]) -> Result<Self> {
        Self::new(sq.map(f64::sqrt), 0.0)
    }

    pub fn squares(&self) -> [f64; 5] {
        self.lambda.map(|l| l * l)
    }
}

/// The state with the given canonical amplitudes.
pub fn gsd_state(p: &GsdParams) -> Result<PureState> {
    let [l0, l1, l2, l3, l4] = p.lambda;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0b000] = C64::new(l0, 0.0);
    amps[0b100] = C64::from_polar(l1, p.phi);
    amps[0b101] = C64::new(l2, 0.0);
    amps[0b110] = C64::new(l3, 0.0);
    amps[0b111] = C64::new(l4, 0.0);
    PureState::with_tolerance(amps, 1e-9)
}

/// (S_AB, S_AC, S_BC) in closed form.
pub fn gsd_s_formulas(p: &GsdParams) -> (f64, f64, f64) {
    let [_, l1, l2, l3, l4] = p.lambda;
    let [q0, q1, q2, q3, q4] = p.squares();
    let cross = l1 * l2 * l3 * l4 * p.phi.cos();
    let s_ab = 1.0 + 8.0 * q0 * q3 - 4.0 * q0 * q2 - 4.0 * q1 * q4 - 4.0 * q2 * q3 + 8.0 * cross;
    let s_ac = 1.0 + 8.0 * q0 * q2 - 4.0 * q0 * q3 - 4.0 * q1 * q4 - 4.0 * q2 * q3 + 8.0 * cross;
    let s_bc = 1.0 - 4.0 * q0 * q2 - 4.0 * q0 * q3 + 8.0 * q1 * q4 + 8.0 * q2 * q3 - 16.0 * cross;
    (s_ab, s_ac, s_bc)
}

/// (C²_AB, C²_AC, C²_BC) in closed form.
pub fn gsd_concurrences(p: &GsdParams) -> (f64, f64, f64) {
    let [_, l1, l2, l3, l4] = p.lambda;
    let [q0, q1, q2, q3, q4] = p.squares();
    (
        4.0 * q0 * q3,
        4.0 * q0 * q2,
        4.0 * q2 * q3 + 4.0 * q1 * q4 - 8.0 * l1 * l2 * l3 * l4 * p.phi.cos(),
    )
}

/// Three-tangle 4λ₀²λ₄².
pub fn gsd_tau(p: &GsdParams) -> f64 {
    4.0 * p.squares()[0] * p.squares()[4]
}

fn harmonic(x: f64, y: f64) -> f64 {
    if x + y == 0.0 {
        0.0
    } else {
        2.0 * x * y / (x + y)
    }
}

/// Harmonic-mean test for states with λ₄ = 0.
///
/// Pair AB is steerable exactly when H(λ₀², λ₃²) > λ₂², AC when H(λ₀², λ₂²) > λ₃² and BC
/// when H(λ₂², λ₃²) > λ₀². The state is monogamous when "H ≤ λ_k²" holds for at least
/// two of the three index triples.
pub fn w_like_monogamy(p: &GsdParams) -> Result<bool> {
    let [q0, _, q2, q3, q4] = p.squares();
    if q4 != 0.0 {
        return Err(Error::BadParams(format!("λ₄ must vanish, got λ₄² = {q4}")));
    }
    if q0 == 0.0 || q2 == 0.0 || q3 == 0.0 {
        return Err(Error::BadParams("λ₀, λ₂ and λ₃ must be nonzero".into()));
    }
    let holds = [
        harmonic(q0, q3) <= q2,
        harmonic(q0, q2) <= q3,
        harmonic(q2, q3) <= q0,
    ];
    Ok(holds.iter().filter(|&&h| h).count() >= 2)
}

/// Star-class non-monogamy test for λ₂ = 0: with x = λ₀²λ₃² and y = λ₁²λ₄²,
/// both remaining pairs are steerable exactly when 4y > 2x > y.
pub fn star_non_monogamous(p: &GsdParams) -> Result<bool> {
    let [q0, q1, q2, q3, q4] = p.squares();
    if q2 != 0.0 {
        return Err(Error::BadParams(format!("λ₂ must vanish, got λ₂² = {q2}")));
    }
    if [q0, q1, q3, q4].iter().any(|&q| q == 0.0) {
        return Err(Error::BadParams("λ₀, λ₁, λ₃ and λ₄ must be nonzero".into()));
    }
    let x = q0 * q3;
    let y = q1 * q4;
    Ok(4.0 * y > 2.0 * x && 2.0 * x > y)
}

/// Critical visibility of the star class assuming S grows linearly with visibility:
/// max[1/(1 + 8λ₀²λ₃² − 4λ₁²λ₄²), 1/(1 + 8λ₁²λ₄² − 4λ₀²λ₃²)].
pub fn star_v_crit_linear(p: &GsdParams) -> f64 {
    let [q0, q1, _, q3, q4] = p.squares();
    let x = q0 * q3;
    let y = q1 * q4;
    (1.0 / (1.0 + 8.0 * x - 4.0 * y)).max(1.0 / (1.0 + 8.0 * y - 4.0 * x))
}

/// Critical visibility of the λ₄ = 0 class under the same linear assumption:
/// min[max{w₁,w₂}, max{w₁,w₃}, max{w₂,w₃}].
pub fn w_like_v_crit_linear(p: &GsdParams) -> f64 {
    let [q0, _, q2, q3, _] = p.squares();
    let w1 = 1.0 / (1.0 + 8.0 * q0 * q3 - 4.0 * q0 * q2 - 4.0 * q2 * q3);
    let w2 = 1.0 / (1.0 + 8.0 * q0 * q2 - 4.0 * q0 * q3 - 4.0 * q2 * q3);
    let w3 = 1.0 / (1.0 + 8.0 * q2 * q3 - 4.0 * q0 * q2 - 4.0 * q0 * q3);
    let pos = |w: f64| if w > 0.0 { w } else { f64::INFINITY };
    let (w1, w2, w3) = (pos(w1), pos(w2), pos(w3));
    w1.max(w2).min(w1.max(w3)).min(w2.max(w3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::pure_report;
    use crate::steering::{steering_report, DEFAULT_EPS_STEER};

    fn check_against_matrix(p: &GsdParams) {
        let psi = gsd_state(p).unwrap();
        let r = steering_report(&psi.density(), DEFAULT_EPS_STEER).unwrap();
        let (ab, ac, bc) = gsd_s_formulas(p);
        for (f, d) in [ab, ac, bc].iter().zip(r.s_triple()) {
            assert!((f - d).abs() < 1e-10, "{f} vs {d}");
        }
        let e = pure_report(&psi).unwrap();
        let (ab, ac, bc) = gsd_concurrences(p);
        for (f, d) in [ab, ac, bc].iter().zip(e.c2_triple()) {
            assert!((f - d).abs() < 1e-10, "{f} vs {d}");
        }
        assert!((gsd_tau(p) - e.tau.unwrap()).abs() < 1e-10);
    }

    #[test]
    fn endpoints() {
        let p = GsdParams::new([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        let psi = gsd_state(&p).unwrap();
        assert!((psi.amplitudes()[0].re - 1.0).abs() < 1e-15);
        let h = 0.5f64.sqrt();
        let ghz = GsdParams::new([h, 0.0, 0.0, 0.0, h], 0.0).unwrap();
        assert_eq!(gsd_s_formulas(&ghz), (1.0, 1.0, 1.0));
        let (a, b, c) = gsd_concurrences(&ghz);
        assert!(a == 0.0 && b == 0.0 && c == 0.0);
        check_against_matrix(&ghz);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            GsdParams::new([0.5, 0.5, 0.0, 0.0, 0.0], 0.0),
            Err(Error::NotNormalizedParams(_))
        ));
        assert!(GsdParams::new([1.0, 0.0, 0.0, 0.0, 0.0], 4.0).is_err());
        assert!(GsdParams::new([-1.0, 0.0, 0.0, 0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn star_examples() {
        let p1 = GsdParams::from_squares([11.0 / 64.0, 5.0 / 64.0, 0.0, 0.25, 0.5]).unwrap();
        let (ab, ac, bc) = gsd_s_formulas(&p1);
        assert!((ab - (1.0 + 12.0 / 64.0)).abs() < 1e-12);
        assert!((ac - (1.0 - 21.0 / 64.0)).abs() < 1e-12);
        assert!((bc - (1.0 + 9.0 / 64.0)).abs() < 1e-12);
        assert!(star_non_monogamous(&p1).unwrap());
        check_against_matrix(&p1);
        let p2 = GsdParams::from_squares([3.0 / 32.0, 5.0 / 32.0, 0.0, 0.25, 0.5]).unwrap();
        let (ab, _, bc) = gsd_s_formulas(&p2);
        assert!((ab - (1.0 - 4.0 / 32.0)).abs() < 1e-12);
        assert!((bc - (1.0 + 17.0 / 32.0)).abs() < 1e-12);
        assert!(!star_non_monogamous(&p2).unwrap());
    }

    #[test]
    fn phased_params_match_matrix() {
        let p = GsdParams::from_squares([0.3, 0.1, 0.2, 0.15, 0.25]).unwrap();
        let p = GsdParams::new(p.lambda, 1.1).unwrap();
        check_against_matrix(&p);
    }

    #[test]
    fn w_like_criterion() {
        let third = 1.0 / 3.0;
        let w = GsdParams::from_squares([third, 0.0, third, third, 0.0]).unwrap();
        assert!(w_like_monogamy(&w).unwrap());
        let psi = GsdParams::from_squares([0.25, 0.0, 0.5, 0.25, 0.0]).unwrap();
        assert!(!w_like_monogamy(&psi).unwrap());
        let ghz = GsdParams::from_squares([0.5, 0.0, 0.0, 0.0, 0.5]).unwrap();
        assert!(w_like_monogamy(&ghz).is_err());
    }

    #[test]
    fn linear_visibility_forms() {
        let star = GsdParams::from_squares([0.25, 0.25, 0.0, 0.25, 0.25]).unwrap();
        assert!((star_v_crit_linear(&star) - 0.8).abs() < 1e-12);
        let wv = GsdParams::from_squares([2.0 / 3.0, 0.0, 1.0 / 6.0, 1.0 / 6.0, 0.0]).unwrap();
        assert!((w_like_v_crit_linear(&wv) - 0.75).abs() < 1e-12);
        let psi = GsdParams::from_squares([0.25, 0.0, 0.5, 0.25, 0.0]).unwrap();
        assert!((w_like_v_crit_linear(&psi) - 0.8).abs() < 1e-12);
    }
}
