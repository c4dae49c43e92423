//! JSON state files.
//!
//! ```json
//! {"format_version": 1, "kind": "pure_amplitudes",
//!  "payload": {"amplitudes": [[0.7071067811865476, 0.0], [0, 0], ...]},
//!  "metadata": {"label": "GHZ"}}
//! ```
//!
//! Other kinds: `density_matrix` (`{"entries": [[re, im] × 64]}` row-major),
//! `gsd_params` (`{"lambda": [5 reals], "phi": radians}`) and
//! `named_family` (`{"name": "phi_m", "params": [0.5]}`).

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;
use crate::families::{gsd_state, make_named, named_gsd, GsdParams, NamedState};
use crate::qlinalg::{validate_density, ComplexMatrix, DensityMatrix, PureState, Tolerances, C64};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum StatePayload {
    PureAmplitudes { amplitudes: Vec<[f64; 2]> },
    DensityMatrix { entries: Vec<[f64; 2]> },
    GsdParams { lambda: [f64; 5], phi: f64 },
    NamedFamily {
        name: String,
        #[serde(default)]
        params: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub state: StatePayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

/// A validated input state with whatever extra structure its source provides.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub density: DensityMatrix,
    pub pure: Option<PureState>,
    /// Canonical-form parameters, when the source is written in that form.
    pub gsd: Option<GsdParams>,
    /// "sha256:<hex>" of the input bytes or of the family description.
    pub digest: String,
    pub source: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn complex_list(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

fn from_named(name: &str, params: &[f64]) -> Result<(DensityMatrix, Option<PureState>, Option<GsdParams>), CliError> {
    let state = make_named(name, params).map_err(|e| match e {
        crate::Error::UnknownName(n) => CliError::UnknownFamily(n),
        other => CliError::Validation(other.to_string()),
    })?;
    let gsd = if params.is_empty() { named_gsd(name) } else { None };
    Ok(match state {
        NamedState::Pure(psi) => (psi.density(), Some(psi), gsd),
        NamedState::Mixed(rho) => (rho, None, None),
    })
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            )));
        }
        Ok(file)
    }

    pub fn into_state(self, tol: f64, digest: String, source: String) -> Result<LoadedState, CliError> {
        let invalid = |e: crate::Error| CliError::Validation(e.to_string());
        let (density, pure, gsd) = match self.state {
            StatePayload::PureAmplitudes { amplitudes } => {
                if amplitudes.len() != 8 {
                    return Err(CliError::Validation(format!(
                        "pure_amplitudes needs 8 amplitudes, got {}",
                        amplitudes.len()
                    )));
                }
                let psi = PureState::with_tolerance(complex_list(&amplitudes), tol).map_err(invalid)?;
                (psi.density(), Some(psi), None)
            }
            StatePayload::DensityMatrix { entries } => {
                if entries.len() != 64 {
                    return Err(CliError::Validation(format!(
                        "density_matrix needs 64 entries, got {}",
                        entries.len()
                    )));
                }
                let m = ComplexMatrix::from_row_major(8, &complex_list(&entries)).map_err(invalid)?;
                let rho = validate_density(m, 3, &Tolerances { validation: tol }).map_err(invalid)?;
                (rho, None, None)
            }
            StatePayload::GsdParams { lambda, phi } => {
                let p = GsdParams::with_tolerance(lambda, phi, tol).map_err(invalid)?;
                let psi = gsd_state(&p).map_err(invalid)?;
                (psi.density(), Some(psi), Some(p))
            }
            StatePayload::NamedFamily { name, params } => from_named(&name, &params)?,
        };
        Ok(LoadedState {
            density,
            pure,
            gsd,
            digest,
            source,
        })
    }
}

pub fn load_file(path: &Path, tol: f64) -> Result<LoadedState, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::FileNotFound(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Parse(format!("{}: not UTF-8", path.display())))?;
    StateFile::parse(&text)?.into_state(tol, sha256_hex(&bytes), path.display().to_string())
}

pub fn load_family(name: &str, params: &[f64]) -> Result<LoadedState, CliError> {
    let (density, pure, gsd) = from_named(name, params)?;
    let desc = format!("family:{name}:{params:?}");
    Ok(LoadedState {
        density,
        pure,
        gsd,
        digest: sha256_hex(desc.as_bytes()),
        source: desc,
    })
}
