use super::eigen::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result, Violation};

/// Numerical policy for density-matrix validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity, trace and PSD tolerance.
    pub validation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { validation: 1e-10 }
    }
}

/// Qubit index under the big-endian convention: A is the most significant bit.
pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;

/// A Hermitian, unit-trace, PSD matrix on 1 to 3 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    qubits: usize,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Wraps a matrix without checking positivity or trace.
    ///
    /// Used for formal constructions that can leave the state space, such as mixtures
    /// with negative weights. Steering quantities remain well defined for these; anything
    /// that needs positivity should call [`validate_density`] first.
    pub fn from_matrix_unchecked(matrix: ComplexMatrix, qubits: usize) -> Self {
        assert_eq!(matrix.dim(), 1 << qubits);
        DensityMatrix { matrix, qubits }
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let d = 1 << qubits;
        DensityMatrix {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            qubits,
        }
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let n = m.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        s
    }

    pub fn is_pure(&self) -> bool {
        self.purity() > 1.0 - 1e-9
    }

    /// Convex combination Σ wᵢ ρᵢ (weights are not checked).
    pub fn mix(parts: &[(f64, &DensityMatrix)]) -> Self {
        let qubits = parts[0].1.qubits;
        let mut m = ComplexMatrix::zeros(1 << qubits);
        for (w, rho) in parts {
            assert_eq!(rho.qubits, qubits);
            m = &m + &rho.matrix.scale(*w);
        }
        DensityMatrix { matrix: m, qubits }
    }
}

/// Checks every density-matrix invariant and reports all violations with their magnitudes.
pub fn validate_density(
    matrix: ComplexMatrix,
    qubits: usize,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if !(1..=3).contains(&qubits) || matrix.dim() != 1 << qubits {
        return Err(Error::BadDimension {
            expected: 1 << qubits.min(3),
            got: matrix.dim(),
        });
    }
    let mut violations = Vec::new();
    let deviation = matrix.hermitian_deviation();
    if deviation > tol.validation {
        violations.push(Violation::NotHermitian { deviation });
    }
    let trace = matrix.trace();
    if (trace - C64::new(1.0, 0.0)).norm() > tol.validation {
        violations.push(Violation::TraceNotOne { trace: trace.re });
    }
    if deviation <= tol.validation {
        let sym = (&matrix + &matrix.adjoint()).scale(0.5);
        let ev = hermitian_eigenvalues(&sym)?;
        let min = *ev.last().unwrap();
        if min < -tol.validation {
            violations.push(Violation::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
    }
    if violations.is_empty() {
        Ok(DensityMatrix { matrix, qubits })
    } else {
        Err(Error::InvalidDensity(violations))
    }
}

/// Normalized state vector on 1 to 3 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    qubits: usize,
}

impl PureState {
    /// Accepts amplitudes whose squared norm is 1 within 1e-12.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, 1e-12)
    }

    pub fn with_tolerance(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        let qubits = qubit_count(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > tol || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { amplitudes, qubits })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let qubits = qubit_count(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(PureState {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
            qubits,
        })
    }

    /// Real amplitudes indexed by basis label, e.g. `[(0b000, 1.0), (0b111, 1.0)]`, normalized.
    pub fn from_real_terms(qubits: usize, terms: &[(usize, f64)]) -> Result<Self> {
        let mut amps = vec![ZERO; 1 << qubits];
        for &(idx, a) in terms {
            amps[idx] += C64::new(a, 0.0);
        }
        Self::normalized(amps)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::projector(&self.amplitudes),
            qubits: self.qubits,
        }
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut amps = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        PureState::normalized(amps)
    }
}

fn qubit_count(len: usize) -> Result<usize> {
    match len {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        _ => Err(Error::BadDimension {
            expected: 8,
            got: len,
        }),
    }
}

/// Reduced state on the qubits in `keep` (indices 0 = A, 1 = B, 2 = C).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.qubits;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() != keep.len() || kept.len() >= n || kept.iter().any(|&q| q >= n)
    {
        return Err(Error::BadSubsystemSet(keep.to_vec()));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let k = kept.len();
    let dk = 1 << k;
    let dt = 1 << traced.len();
    let m = &rho.matrix;

    // bit position of qubit q in an n-qubit index (A is most significant)
    let bit = |q: usize| n - 1 - q;
    let compose = |kidx: usize, tidx: usize| -> usize {
        let mut idx = 0;
        for (pos, &q) in kept.iter().enumerate() {
            if kidx >> (k - 1 - pos) & 1 == 1 {
                idx |= 1 << bit(q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if tidx >> (traced.len() - 1 - pos) & 1 == 1 {
                idx |= 1 << bit(q);
            }
        }
        idx
    };

    let mut out = ComplexMatrix::zeros(dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut s = ZERO;
            for t in 0..dt {
                s += m[(compose(i, t), compose(j, t))];
            }
            out[(i, j)] = s;
        }
    }
    Ok(DensityMatrix {
        matrix: out,
        qubits: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::ONE;

    fn ghz() -> PureState {
        PureState::from_real_terms(3, &[(0b000, 1.0), (0b111, 1.0)]).unwrap()
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let m = ComplexMatrix::identity(8).scale(0.125);
        let rho = validate_density(m, 3, &Tolerances::default()).unwrap();
        assert!((rho.purity() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn basis_projector_is_valid_and_pure() {
        let psi = PureState::from_real_terms(3, &[(0, 1.0)]).unwrap();
        let rho = validate_density(psi.density().matrix().clone(), 3, &Tolerances::default())
            .unwrap();
        assert!(rho.is_pure());
    }

    #[test]
    fn negative_diagonal_reports_psd_violation() {
        let m = ComplexMatrix::from_real_diag(&[0.6, 0.6, 0.0, 0.0, 0.0, 0.0, 0.0, -0.2]);
        let err = validate_density(m, 3, &Tolerances::default()).unwrap_err();
        let Error::InvalidDensity(v) = err else {
            panic!("unexpected {err:?}")
        };
        // 0.6 + 0.6 − 0.2 = 1, so only positivity fails
        assert_eq!(
            v,
            vec![Violation::NotPositiveSemidefinite {
                min_eigenvalue: -0.2
            }]
        );
    }

    #[test]
    fn reports_trace_and_hermiticity() {
        let m = ComplexMatrix::from_real_diag(&[0.6, 0.6]);
        let err = validate_density(m, 1, &Tolerances::default()).unwrap_err();
        assert!(matches!(&err, Error::InvalidDensity(v) if matches!(v[0], Violation::TraceNotOne { .. })));

        let m = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ZERO, ZERO]]).unwrap();
        let err = validate_density(m, 1, &Tolerances::default()).unwrap_err();
        assert!(matches!(&err, Error::InvalidDensity(v) if matches!(v[0], Violation::NotHermitian { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let m = ComplexMatrix::identity(4).scale(0.25);
        assert!(matches!(
            validate_density(m, 3, &Tolerances::default()),
            Err(Error::BadDimension { .. })
        ));
    }

    #[test]
    fn ghz_reduction_is_classical_mixture() {
        let rab = partial_trace(&ghz().density(), &[A, B]).unwrap();
        let expected = ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5]);
        assert!(rab.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn product_reduction() {
        let psi = PureState::from_real_terms(3, &[(0, 1.0)]).unwrap();
        let rc = partial_trace(&psi.density(), &[C]).unwrap();
        assert!(rc.matrix().max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn psi_abc_single_qubit_purity() {
        let s2 = 2f64.sqrt();
        let psi =
            PureState::from_real_terms(3, &[(0b100, 1.0), (0b010, 1.0), (0b001, s2)]).unwrap();
        let ra = partial_trace(&psi.density(), &[A]).unwrap();
        assert!((ra.purity() - (1.0 + 0.25) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn bad_subsystem_sets() {
        let rho = ghz().density();
        for keep in [&[][..], &[0, 1, 2][..], &[3][..], &[0, 0][..]] {
            assert!(matches!(
                partial_trace(&rho, keep),
                Err(Error::BadSubsystemSet(_))
            ));
        }
    }

    #[test]
    fn normalization_checked() {
        assert!(matches!(
            PureState::new(vec![ONE, ONE]),
            Err(Error::NotNormalized(_))
        ));
        assert!(PureState::new(vec![ONE, ZERO]).is_ok());
    }
}
