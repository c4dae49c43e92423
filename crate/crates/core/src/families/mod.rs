//! Named states and parametric families, canonical-form constructors, subtype
//! classification, white-noise robustness and random-state samplers.

mod gsd;
mod noise;
pub mod sampling;

use serde::Serialize;

pub use gsd::{
    gsd_concurrences, gsd_s_formulas, gsd_state, gsd_tau, star_non_monogamous,
    star_v_crit_linear, w_like_monogamy, w_like_v_crit_linear, GsdParams, GSD_NORM_TOL,
};
pub use noise::{
    add_white_noise, phi_b_threshold_bisection, v_crit_numeric, NoisyState, VisibilityReport,
    PHI_B_THRESHOLD,
};

use crate::entanglement::pure_report;
use crate::error::{Error, Result};
use crate::qlinalg::{DensityMatrix, PureState};
use crate::steering::{steering_report, GraphType, DEFAULT_EPS_STEER};

/// A named state: either a vector or, for mixtures, a density matrix.
#[derive(Debug, Clone)]
pub enum NamedState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl NamedState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            NamedState::Pure(psi) => psi.density(),
            NamedState::Mixed(rho) => rho.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            NamedState::Pure(psi) => Some(psi),
            NamedState::Mixed(_) => None,
        }
    }
}

pub const NAMED_STATES: &[&str] = &[
    "psi_abc",
    "ghz",
    "w",
    "product",
    "phi_m",
    "phi_q",
    "phi_con",
    "phi_b",
    "phi_eghz",
    "phi_star_v",
    "phi_w_v",
    "star_example_1",
    "star_example_2",
    "w_like_example",
];

fn pure(terms: &[(usize, f64)]) -> Result<NamedState> {
    Ok(NamedState::Pure(PureState::from_real_terms(3, terms)?))
}

fn param(name: &str, params: &[f64], expected: usize) -> Result<()> {
    if params.len() != expected {
        return Err(Error::BadParams(format!(
            "{name} takes {expected} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

fn in_range(name: &str, x: f64, lo: f64, hi: f64, open: bool) -> Result<f64> {
    let ok = if open { x > lo && x < hi } else { x >= lo && x <= hi };
    if !ok || !x.is_finite() {
        let (l, r) = if open { ('(', ')') } else { ('[', ']') };
        return Err(Error::ParamOutOfRange(format!("{name} = {x} outside {l}{lo}, {hi}{r}")));
    }
    Ok(x)
}

/// Builds a named state. Families take their parameter in `params`:
/// `phi_m` m ∈ [0,1], `phi_q` q ∈ (0, 1/√2), `phi_b` ε ∈ [0,1] and
/// `phi_eghz` three positive amplitudes of |000⟩, |101⟩, |111⟩ (normalized here).
pub fn make_named(name: &str, params: &[f64]) -> Result<NamedState> {
    let r2 = 2f64.sqrt();
    match name {
        "psi_abc" | "ghz" | "w" | "product" | "phi_con" | "phi_star_v" | "phi_w_v"
        | "star_example_1" | "star_example_2" | "w_like_example" => param(name, params, 0)?,
        "phi_m" | "phi_q" | "phi_b" => param(name, params, 1)?,
        "phi_eghz" => param(name, params, 3)?,
        _ => return Err(Error::UnknownName(name.to_string())),
    }
    match name {
        "psi_abc" => pure(&[(0b100, 1.0), (0b010, 1.0), (0b001, r2)]),
        "ghz" => pure(&[(0b000, 1.0), (0b111, 1.0)]),
        "w" => pure(&[(0b001, 1.0), (0b010, 1.0), (0b100, 1.0)]),
        "product" => pure(&[(0b000, 1.0)]),
        "phi_m" => {
            let m = in_range("m", params[0], 0.0, 1.0, false)?;
            pure(&[(0b000, 1.0), (0b101, m), (0b010, m), (0b111, 1.0)])
        }
        "phi_q" => {
            let q = in_range("q", params[0], 0.0, 1.0 / r2, true)?;
            pure(&[(0b000, 1.0 / r2), (0b101, (0.5 - q * q).sqrt()), (0b111, q)])
        }
        "phi_con" => pure(&[
            (0b000, 3f64.sqrt() / 2.0),
            (0b101, 1.0 / (2.0 * r2)),
            (0b110, 1.0 / (2.0 * r2)),
        ]),
        "phi_b" => {
            let eps = in_range("epsilon", params[0], 0.0, 1.0, false)?;
            Ok(NamedState::Mixed(phi_b(eps)?))
        }
        "phi_eghz" => {
            if params.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(Error::ParamOutOfRange(format!(
                    "extended-GHZ amplitudes must be positive, got {params:?}"
                )));
            }
            pure(&[(0b000, params[0]), (0b101, params[1]), (0b111, params[2])])
        }
        "phi_star_v" => pure(&[(0b000, 0.5), (0b100, 0.5), (0b110, 0.5), (0b111, 0.5)]),
        "phi_w_v" => pure(&[
            (0b000, (2.0f64 / 3.0).sqrt()),
            (0b101, (1.0f64 / 6.0).sqrt()),
            (0b110, (1.0f64 / 6.0).sqrt()),
        ]),
        "star_example_1" | "star_example_2" | "w_like_example" => Ok(NamedState::Pure(
            gsd_state(&named_gsd(name).expect("canonical form is known"))?,
        )),
        _ => unreachable!(),
    }
}

/// Canonical-form parameters of the named states that are written in that form.
pub fn named_gsd(name: &str) -> Option<GsdParams> {
    let sq = match name {
        "ghz" => [0.5, 0.0, 0.0, 0.0, 0.5],
        "product" => [1.0, 0.0, 0.0, 0.0, 0.0],
        // X on qubit A maps (|100⟩ + |010⟩ + √2|001⟩)/2 to (|000⟩ + |110⟩ + √2|101⟩)/2
        "psi_abc" => [0.25, 0.0, 0.5, 0.25, 0.0],
        "phi_con" => [0.75, 0.0, 0.125, 0.125, 0.0],
        "phi_star_v" => [0.25, 0.25, 0.0, 0.25, 0.25],
        "phi_w_v" => [2.0 / 3.0, 0.0, 1.0 / 6.0, 1.0 / 6.0, 0.0],
        "star_example_1" => [11.0 / 64.0, 5.0 / 64.0, 0.0, 0.25, 0.5],
        "star_example_2" => [3.0 / 32.0, 5.0 / 32.0, 0.0, 0.25, 0.5],
        "w_like_example" => [1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.5, 0.0],
        _ => return None,
    };
    GsdParams::from_squares(sq).ok()
}

/// Mixture of |φ⁺⟩ on each pair with |0⟩ on the third qubit, weights 4(1+ε)/9 on AB and
/// AC and (1−8ε)/9 on BC. The BC weight is negative for ε > 1/8, so the matrix is built
/// without a positivity check.
pub fn phi_b(eps: f64) -> Result<DensityMatrix> {
    let h = 0.5f64.sqrt();
    let ab = PureState::from_real_terms(3, &[(0b000, h), (0b110, h)])?.density();
    let ac = PureState::from_real_terms(3, &[(0b000, h), (0b101, h)])?.density();
    let bc = PureState::from_real_terms(3, &[(0b000, h), (0b011, h)])?.density();
    let w = 4.0 * (1.0 + eps) / 9.0;
    let mixed = DensityMatrix::mix(&[(w, &ab), (w, &ac), ((1.0 - 8.0 * eps) / 9.0, &bc)]);
    Ok(DensityMatrix::from_matrix_unchecked(mixed.matrix().clone(), 3))
}

/// S_AB = S_AC of the φ_b family, (16/27)(1+ε)².
pub fn phi_b_s_closed_form(eps: f64) -> f64 {
    16.0 / 27.0 * (1.0 + eps) * (1.0 + eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subtype {
    #[serde(rename = "0-0")]
    FullySeparable,
    #[serde(rename = "1-1")]
    Biseparable,
    #[serde(rename = "2-0")]
    GhzLike,
    #[serde(rename = "2-1")]
    ExtendedGhz,
    #[serde(rename = "2-2")]
    Star,
    #[serde(rename = "2-3")]
    WLike,
}

impl Subtype {
    pub fn code(self) -> &'static str {
        match self {
            Subtype::FullySeparable => "0-0",
            Subtype::Biseparable => "1-1",
            Subtype::GhzLike => "2-0",
            Subtype::ExtendedGhz => "2-1",
            Subtype::Star => "2-2",
            Subtype::WLike => "2-3",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Subtype::FullySeparable => "fully separable",
            Subtype::Biseparable => "biseparable",
            Subtype::GhzLike => "GHZ-like",
            Subtype::ExtendedGhz => "extended GHZ",
            Subtype::Star => "star",
            Subtype::WLike => "W-like/generic",
        }
    }
}

impl std::fmt::Display for Subtype {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.code(), self.description())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariants {
    pub c2_ab: f64,
    pub c2_ac: f64,
    pub c2_bc: f64,
    pub tau: f64,
    pub bloch_norms_sq: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub subtype: Subtype,
    pub invariants_used: Invariants,
    pub steering_graph: GraphType,
    pub monogamous: bool,
    pub annotations: Vec<String>,
}

pub const DEFAULT_EPS_CLASS: f64 = 1e-7;

/// Assigns the canonical-form subtype from local-unitary invariants.
pub fn classify(psi: &PureState, eps_class: f64) -> Result<ClassificationResult> {
    if psi.qubits() != 3 {
        return Err(Error::BadDimension {
            expected: 8,
            got: psi.amplitudes().len(),
        });
    }
    let e = pure_report(psi)?;
    let tau = e.tau.expect("pure report carries tau");
    let bloch = crate::entanglement::bloch_norms_sq(psi)?;
    let c2 = e.c2_triple();
    let nonzero = c2.iter().filter(|&&c| c > eps_class).count();
    let tangled = tau > eps_class;
    let mut annotations = Vec::new();

    let subtype = match (tangled, nonzero) {
        (_, 3) => {
            if tangled {
                annotations.push("tau > 0: generic state outside the lambda4 = 0 form".into());
            }
            Subtype::WLike
        }
        (true, 0) => Subtype::GhzLike,
        (true, 1) => Subtype::ExtendedGhz,
        (true, 2) => Subtype::Star,
        (false, 0) => Subtype::FullySeparable,
        (false, 1) => Subtype::Biseparable,
        (false, _) => {
            annotations.push("two entangled pairs with vanishing tangle".into());
            Subtype::WLike
        }
        _ => unreachable!(),
    };
    let near = c2
        .iter()
        .chain(std::iter::once(&tau))
        .any(|&x| x > eps_class / 10.0 && x < eps_class * 10.0);
    if near {
        annotations.push("near-boundary".into());
    }

    let st = steering_report(&psi.density(), DEFAULT_EPS_STEER)?;
    Ok(ClassificationResult {
        subtype,
        invariants_used: Invariants {
            c2_ab: c2[0],
            c2_ac: c2[1],
            c2_bc: c2[2],
            tau,
            bloch_norms_sq: bloch,
        },
        steering_graph: st.graph_type,
        monogamous: st.monogamous(),
        annotations,
    })
}
