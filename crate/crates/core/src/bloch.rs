//! Pauli (Bloch) tensor representation of one-, two- and three-qubit operators.
//!
//! Pauli indices: 0 = I, 1 = σx, 2 = σy, 3 = σz with the standard phases
//! (σy = [[0, −i], [i, 0]]). A three-qubit state is written
//!
//! ρ = ⅛ Σ r_ijk σi ⊗ σj ⊗ σk,   r_ijk = Tr[ρ σi ⊗ σj ⊗ σk],
//!
//! so the local Bloch vectors are a_i = r_i00, b_j = r_0j0, c_k = r_00k, the pair
//! correlation matrices are T_AB = r_ij0, T_AC = r_i0k, T_BC = r_0jk, and the three-body
//! tensor is r_ijk with all indices nonzero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlinalg::{partial_trace, ComplexMatrix, DensityMatrix, C64, ONE, ZERO};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

const I_UNIT: C64 = C64::new(0.0, 1.0);

/// Entries of σ_p, row-major.
pub fn pauli(p: usize) -> [[C64; 2]; 2] {
    match p {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I_UNIT], [I_UNIT, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("Pauli index {p} out of range"),
    }
}

pub fn pauli_matrix(p: usize) -> ComplexMatrix {
    let s = pauli(p);
    ComplexMatrix::from_rows(&[&s[0], &s[1]]).expect("2x2")
}

/// σ_{p0} ⊗ σ_{p1} ⊗ … as a dense matrix.
pub fn pauli_string(indices: &[usize]) -> ComplexMatrix {
    let mut m = pauli_matrix(indices[0]);
    for &p in &indices[1..] {
        m = m.kron(&pauli_matrix(p));
    }
    m
}

/// Entry (row, col) of σ_{p0} ⊗ … ⊗ σ_{p(n−1)} without forming the matrix.
fn pauli_string_entry(indices: &[usize], row: usize, col: usize) -> C64 {
    let n = indices.len();
    let mut v = ONE;
    for (q, &p) in indices.iter().enumerate() {
        let shift = n - 1 - q;
        let r = (row >> shift) & 1;
        let c = (col >> shift) & 1;
        v *= pauli(p)[r][c];
        if v == ZERO {
            break;
        }
    }
    v
}

/// Re Tr[ρ P] for the Pauli string P; exact because P is Hermitian and ρ is Hermitian.
pub fn pauli_expectation(rho: &ComplexMatrix, indices: &[usize]) -> f64 {
    let d = rho.dim();
    debug_assert_eq!(d, 1 << indices.len());
    // σx and σy flip the bit; σ0 and σz keep it. Each row has one nonzero entry.
    let flip: usize = indices
        .iter()
        .enumerate()
        .filter(|(_, &p)| p == 1 || p == 2)
        .map(|(q, _)| 1 << (indices.len() - 1 - q))
        .sum();
    let mut s = ZERO;
    for r in 0..d {
        let c = r ^ flip;
        s += rho[(r, c)] * pauli_string_entry(indices, c, r);
    }
    s.re
}

/// Full coefficient array r[p0 p1 …] in base-4 big-endian order.
pub fn pauli_coefficients(rho: &ComplexMatrix, qubits: usize) -> Vec<f64> {
    let count = 1 << (2 * qubits);
    let mut idx = vec![0usize; qubits];
    (0..count)
        .map(|k| {
            for (q, slot) in idx.iter_mut().enumerate() {
                *slot = (k >> (2 * (qubits - 1 - q))) & 3;
            }
            pauli_expectation(rho, &idx)
        })
        .collect()
}

/// Inverse of [`pauli_coefficients`]: (1/2ⁿ) Σ r_p σ_p. Accepts non-physical coefficients.
pub fn from_pauli_coefficients(coeffs: &[f64], qubits: usize) -> ComplexMatrix {
    let d = 1 << qubits;
    let mut out = ComplexMatrix::zeros(d);
    let mut idx = vec![0usize; qubits];
    for (k, &r) in coeffs.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        for (q, slot) in idx.iter_mut().enumerate() {
            *slot = (k >> (2 * (qubits - 1 - q))) & 3;
        }
        let flip: usize = idx
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == 1 || p == 2)
            .map(|(q, _)| 1 << (qubits - 1 - q))
            .sum();
        for row in 0..d {
            let col = row ^ flip;
            out[(row, col)] += pauli_string_entry(&idx, row, col) * r;
        }
    }
    out.scale(1.0 / d as f64)
}

pub fn norm_sq(v: &Vec3) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Σ t_ij², i.e. Tr[TᵀT].
pub fn frobenius_sq(t: &Mat3) -> f64 {
    t.iter().flatten().map(|x| x * x).sum()
}

pub fn transpose(t: &Mat3) -> Mat3 {
    let mut o = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            o[i][j] = t[j][i];
        }
    }
    o
}

/// TᵀT.
pub fn gram(t: &Mat3) -> Mat3 {
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..3).map(|k| t[k][i] * t[k][j]).sum();
        }
    }
    g
}

pub fn mat_vec(t: &Mat3, v: &Vec3) -> Vec3 {
    [
        t[0][0] * v[0] + t[0][1] * v[1] + t[0][2] * v[2],
        t[1][0] * v[0] + t[1][1] * v[1] + t[1][2] * v[2],
        t[2][0] * v[0] + t[2][1] * v[1] + t[2][2] * v[2],
    ]
}

/// Bloch form of a two-qubit operator: local vectors and correlation matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitBloch {
    pub a: Vec3,
    pub b: Vec3,
    pub t: Mat3,
}

impl TwoQubitBloch {
    /// a⃗² + b⃗² + Σ t_ij², bounded by 3 for physical states.
    pub fn total_weight(&self) -> f64 {
        norm_sq(&self.a) + norm_sq(&self.b) + frobenius_sq(&self.t)
    }

    pub fn s_param(&self) -> f64 {
        frobenius_sq(&self.t)
    }
}

/// Bloch form of a three-qubit operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochDecomposition {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Vec3,
    pub t_ab: Mat3,
    pub t_ac: Mat3,
    pub t_bc: Mat3,
    pub t_abc: [Mat3; 3],
}

impl BlochDecomposition {
    pub fn zero() -> Self {
        BlochDecomposition {
            a: [0.0; 3],
            b: [0.0; 3],
            c: [0.0; 3],
            t_ab: [[0.0; 3]; 3],
            t_ac: [[0.0; 3]; 3],
            t_bc: [[0.0; 3]; 3],
            t_abc: [[[0.0; 3]; 3]; 3],
        }
    }

    fn from_coefficients(r: &[f64]) -> Self {
        let at = |i: usize, j: usize, k: usize| r[16 * i + 4 * j + k];
        let mut d = Self::zero();
        for i in 0..3 {
            d.a[i] = at(i + 1, 0, 0);
            d.b[i] = at(0, i + 1, 0);
            d.c[i] = at(0, 0, i + 1);
            for j in 0..3 {
                d.t_ab[i][j] = at(i + 1, j + 1, 0);
                d.t_ac[i][j] = at(i + 1, 0, j + 1);
                d.t_bc[i][j] = at(0, i + 1, j + 1);
                for k in 0..3 {
                    d.t_abc[i][j][k] = at(i + 1, j + 1, k + 1);
                }
            }
        }
        d
    }

    fn coefficients(&self) -> Vec<f64> {
        let mut r = vec![0.0; 64];
        r[0] = 1.0;
        for i in 0..3 {
            r[16 * (i + 1)] = self.a[i];
            r[4 * (i + 1)] = self.b[i];
            r[i + 1] = self.c[i];
            for j in 0..3 {
                r[16 * (i + 1) + 4 * (j + 1)] = self.t_ab[i][j];
                r[16 * (i + 1) + (j + 1)] = self.t_ac[i][j];
                r[4 * (i + 1) + (j + 1)] = self.t_bc[i][j];
                for k in 0..3 {
                    r[16 * (i + 1) + 4 * (j + 1) + (k + 1)] = self.t_abc[i][j][k];
                }
            }
        }
        r
    }

    /// Local information a⃗² + b⃗² + c⃗².
    pub fn local_information(&self) -> f64 {
        norm_sq(&self.a) + norm_sq(&self.b) + norm_sq(&self.c)
    }

    pub fn bloch_norms_sq(&self) -> [f64; 3] {
        [norm_sq(&self.a), norm_sq(&self.b), norm_sq(&self.c)]
    }
}

fn require_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.qubits() != n {
        return Err(Error::BadDimension {
            expected: 1 << n,
            got: rho.dim(),
        });
    }
    Ok(())
}

pub fn decompose3(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    require_qubits(rho, 3)?;
    Ok(BlochDecomposition::from_coefficients(&pauli_coefficients(
        rho.matrix(),
        3,
    )))
}

pub fn decompose2(rho: &DensityMatrix) -> Result<TwoQubitBloch> {
    require_qubits(rho, 2)?;
    let r = pauli_coefficients(rho.matrix(), 2);
    let mut out = TwoQubitBloch {
        a: [0.0; 3],
        b: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        out.a[i] = r[4 * (i + 1)];
        out.b[i] = r[i + 1];
        for j in 0..3 {
            out.t[i][j] = r[4 * (i + 1) + j + 1];
        }
    }
    Ok(out)
}

/// (1/8)[I⊗I⊗I + … + Σ t_ijk σi⊗σj⊗σk]; no positivity check.
pub fn reconstruct3(d: &BlochDecomposition) -> ComplexMatrix {
    from_pauli_coefficients(&d.coefficients(), 3)
}

pub fn reconstruct2(d: &TwoQubitBloch) -> ComplexMatrix {
    let mut r = vec![0.0; 16];
    r[0] = 1.0;
    for i in 0..3 {
        r[4 * (i + 1)] = d.a[i];
        r[i + 1] = d.b[i];
        for j in 0..3 {
            r[4 * (i + 1) + j + 1] = d.t[i][j];
        }
    }
    from_pauli_coefficients(&r, 2)
}

/// Both sides of one purity identity: the direct trace and the Bloch-form expression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurityPair {
    pub direct: f64,
    pub from_bloch: f64,
}

impl PurityPair {
    pub fn gap(&self) -> f64 {
        (self.direct - self.from_bloch).abs()
    }
}

/// Single-qubit and complementary two-qubit purities for the splits A|BC, B|AC, C|AB.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityRelations {
    pub single: [PurityPair; 3],
    pub pair: [PurityPair; 3],
}

impl PurityRelations {
    pub fn max_gap(&self) -> f64 {
        self.single
            .iter()
            .chain(&self.pair)
            .map(PurityPair::gap)
            .fold(0.0, f64::max)
    }
}

pub fn purity_relations(rho: &DensityMatrix) -> Result<PurityRelations> {
    let d = decompose3(rho)?;
    let norms = d.bloch_norms_sq();
    // complement pairs of A, B, C with their correlation matrices
    let complements: [([usize; 2], &Mat3, usize, usize); 3] = [
        ([1, 2], &d.t_bc, 1, 2),
        ([0, 2], &d.t_ac, 0, 2),
        ([0, 1], &d.t_ab, 0, 1),
    ];
    let mut single = [PurityPair {
        direct: 0.0,
        from_bloch: 0.0,
    }; 3];
    let mut pair = single;
    for q in 0..3 {
        let rq = partial_trace(rho, &[q])?;
        single[q] = PurityPair {
            direct: rq.purity(),
            from_bloch: (1.0 + norms[q]) / 2.0,
        };
        let (keep, t, x, y) = complements[q];
        let rp = partial_trace(rho, &keep)?;
        pair[q] = PurityPair {
            direct: rp.purity(),
            from_bloch: (1.0 + norms[x] + norms[y] + frobenius_sq(t)) / 4.0,
        };
    }
    Ok(PurityRelations { single, pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::PureState;

    fn ghz() -> DensityMatrix {
        PureState::from_real_terms(3, &[(0b000, 1.0), (0b111, 1.0)])
            .unwrap()
            .density()
    }

    fn psi_abc() -> DensityMatrix {
        PureState::from_real_terms(3, &[(0b100, 1.0), (0b010, 1.0), (0b001, 2f64.sqrt())])
            .unwrap()
            .density()
    }

    fn close3(a: &Vec3, b: &Vec3) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    fn close_m(a: &Mat3, b: &Mat3) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn maximally_mixed_has_no_coefficients() {
        let d = decompose3(&DensityMatrix::maximally_mixed(3)).unwrap();
        assert_eq!(d, BlochDecomposition::zero());
    }

    #[test]
    fn ghz_correlations() {
        let d = decompose3(&ghz()).unwrap();
        let zz = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(close3(&d.a, &[0.0; 3]) && close3(&d.b, &[0.0; 3]) && close3(&d.c, &[0.0; 3]));
        assert!(close_m(&d.t_ab, &zz) && close_m(&d.t_ac, &zz) && close_m(&d.t_bc, &zz));
    }

    #[test]
    fn psi_abc_bloch_vectors() {
        let d = decompose3(&psi_abc()).unwrap();
        assert!(close3(&d.a, &[0.0, 0.0, 0.5]));
        assert!(close3(&d.b, &[0.0, 0.0, 0.5]));
        assert!(close3(&d.c, &[0.0, 0.0, 0.0]));
        assert!((d.local_information() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bell_state_two_qubit_form() {
        let phi = PureState::from_real_terms(2, &[(0b00, 1.0), (0b11, 1.0)]).unwrap();
        let d = decompose2(&phi.density()).unwrap();
        assert!(close3(&d.a, &[0.0; 3]) && close3(&d.b, &[0.0; 3]));
        assert!(close_m(&d.t, &[[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]));
        assert!((d.total_weight() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_zero_two_qubit_form() {
        let p = PureState::from_real_terms(2, &[(0, 1.0)]).unwrap();
        let d = decompose2(&p.density()).unwrap();
        assert!(close3(&d.a, &[0.0, 0.0, 1.0]) && close3(&d.b, &[0.0, 0.0, 1.0]));
        assert!(close_m(&d.t, &[[0.0; 3], [0.0; 3], [0.0, 0.0, 1.0]]));
    }

    #[test]
    fn wrong_dimension() {
        assert!(decompose3(&DensityMatrix::maximally_mixed(2)).is_err());
        assert!(decompose2(&DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn reconstruct_roundtrips() {
        assert!(
            reconstruct3(&BlochDecomposition::zero())
                .max_abs_diff(DensityMatrix::maximally_mixed(3).matrix())
                < 1e-15
        );
        let g = ghz();
        let back = reconstruct3(&decompose3(&g).unwrap());
        assert!(back.max_abs_diff(g.matrix()) < 1e-12);
    }

    #[test]
    fn pauli_string_matches_kron() {
        let m = pauli_string(&[2, 1, 3]);
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(m[(r, c)], pauli_string_entry(&[2, 1, 3], r, c));
            }
        }
    }

    #[test]
    fn purity_identities() {
        let mm = purity_relations(&DensityMatrix::maximally_mixed(3)).unwrap();
        assert!((mm.single[0].direct - 0.5).abs() < 1e-15);
        assert!((mm.pair[0].direct - 0.25).abs() < 1e-15);

        let g = purity_relations(&ghz()).unwrap();
        assert!((g.single[0].direct - 0.5).abs() < 1e-12 && (g.pair[0].direct - 0.5).abs() < 1e-12);
        assert!(g.max_gap() < 1e-12);

        let p = purity_relations(&psi_abc()).unwrap();
        assert!((p.single[0].direct - 0.625).abs() < 1e-12);
        assert!((p.pair[0].direct - 0.625).abs() < 1e-12);
        assert!(p.max_gap() < 1e-12);
    }
}
