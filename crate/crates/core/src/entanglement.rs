//! Two-qubit concurrence, three-tangle, W-entanglement and CKW bookkeeping.

use serde::Serialize;

use crate::bloch::decompose3;
use crate::error::{Error, Result};
use crate::qlinalg::{
    hermitian_eigen, hermitian_eigenvalues, partial_trace, ComplexMatrix, DensityMatrix,
    PureState, C64, ZERO,
};
use crate::steering::Pair;

/// Wootters concurrence C = max{0, λ₁ − λ₂ − λ₃ − λ₄}.
///
/// The λᵢ are the square roots of the eigenvalues of √ρ ρ̃ √ρ with ρ̃ = (σy⊗σy) ρ* (σy⊗σy).
/// With ρ = W W† (W = V √P from the spectral decomposition) that matrix equals
/// (W τ)(W τ)† for the complex-symmetric τ = Wᵀ (σy⊗σy) W, so the λᵢ are the singular
/// values of τ. They are read off the Hermitian dilation [[0, τ], [τ†, 0]], whose
/// eigenvalues are ±λᵢ; this keeps small λᵢ accurate to round-off instead of to its
/// square root.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.qubits() != 2 {
        return Err(Error::BadDimension {
            expected: 4,
            got: rho.dim(),
        });
    }
    let eig = hermitian_eigen(rho.matrix())?;
    let columns: Vec<Vec<C64>> = (0..4)
        .filter(|&k| eig.values[k] > 0.0)
        .map(|k| {
            let s = eig.values[k].sqrt();
            eig.vector(k).into_iter().map(|z| z * s).collect()
        })
        .collect();
    Ok(concurrence_from_decomposition(&columns))
}

/// Concurrence of ρ = Σ_k |w_k⟩⟨w_k| given unnormalized two-qubit vectors w_k.
pub fn concurrence_from_decomposition(columns: &[Vec<C64>]) -> f64 {
    // σy⊗σy maps |ij⟩ to −(−1)^{i+j}|1−i,1−j⟩: |00⟩→−|11⟩, |01⟩→|10⟩, |10⟩→|01⟩, |11⟩→−|00⟩
    let flip = |v: &[C64]| -> [C64; 4] { [-v[3], v[2], v[1], -v[0]] };
    let r = columns.len();
    if r == 0 {
        return 0.0;
    }
    // tau_ij = w_iᵀ (σy⊗σy) w_j, rank ≤ 4; embed in a 4×4 block of an 8×8 dilation
    let mut dil = ComplexMatrix::zeros(8);
    for i in 0..r.min(4) {
        for j in 0..r.min(4) {
            let fj = flip(&columns[j]);
            let tau: C64 = (0..4).map(|k| columns[i][k] * fj[k]).sum();
            dil[(i, 4 + j)] = tau;
            dil[(4 + j, i)] = tau.conj();
        }
    }
    let ev = hermitian_eigenvalues(&dil).expect("dilation is Hermitian");
    // nonnegative half of the spectrum, descending
    let lam = [ev[0], ev[1], ev[2], ev[3]].map(|x| x.max(0.0));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// Squared concurrence of the reduced state of `rho` on `pair`, via the density route.
pub fn pair_concurrence_sq(rho: &DensityMatrix, pair: Pair) -> Result<f64> {
    let c = concurrence(&partial_trace(rho, &pair.qubits())?)?;
    Ok(c * c)
}

/// C² of ρ_pair for a pure three-qubit state, decomposing ρ_pair = Σ_x |ψ_x⟩⟨ψ_x| with
/// |ψ_x⟩ = ⟨x|_third |ψ⟩. No eigendecomposition of the reduced state is needed.
pub fn pure_pair_concurrence_sq(psi: &PureState, pair: Pair) -> Result<f64> {
    if psi.qubits() != 3 {
        return Err(Error::BadDimension {
            expected: 8,
            got: psi.amplitudes().len(),
        });
    }
    let [p, q] = pair.qubits();
    let third = pair.complement();
    let amps = psi.amplitudes();
    let columns: Vec<Vec<C64>> = (0..2)
        .map(|x| {
            let mut v = vec![ZERO; 4];
            for (idx, amp) in amps.iter().enumerate() {
                let bit = |q: usize| (idx >> (2 - q)) & 1;
                if bit(third) == x {
                    v[2 * bit(p) + bit(q)] = *amp;
                }
            }
            v
        })
        .collect();
    let c = concurrence_from_decomposition(&columns);
    Ok(c * c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub c2_ab: f64,
    pub c2_ac: f64,
    pub c2_bc: f64,
    /// Three-tangle; present only for pure input.
    pub tau: Option<f64>,
    /// The three expressions 1 − a⃗² − C²_AB − C²_AC, 1 − b⃗² − C²_AB − C²_BC,
    /// 1 − c⃗² − C²_AC − C²_BC (pure input only).
    pub tau_forms: Option<[f64; 3]>,
    /// min of the three squared concurrences.
    pub e_w: f64,
}

impl EntanglementReport {
    pub fn c2(&self, p: Pair) -> f64 {
        match p {
            Pair::AB => self.c2_ab,
            Pair::AC => self.c2_ac,
            Pair::BC => self.c2_bc,
        }
    }

    pub fn c2_triple(&self) -> [f64; 3] {
        [self.c2_ab, self.c2_ac, self.c2_bc]
    }

    /// Largest disagreement between the three tangle expressions.
    pub fn tau_spread(&self) -> Option<f64> {
        self.tau_forms.map(|t| {
            let max = t.iter().cloned().fold(f64::MIN, f64::max);
            let min = t.iter().cloned().fold(f64::MAX, f64::min);
            max - min
        })
    }
}

fn assemble(c2: [f64; 3], norms: [f64; 3], pure: bool) -> EntanglementReport {
    let tau_forms = pure.then(|| {
        [
            1.0 - norms[0] - c2[0] - c2[1],
            1.0 - norms[1] - c2[0] - c2[2],
            1.0 - norms[2] - c2[1] - c2[2],
        ]
    });
    EntanglementReport {
        c2_ab: c2[0],
        c2_ac: c2[1],
        c2_bc: c2[2],
        tau: tau_forms.map(|t| (t[0] + t[1] + t[2]) / 3.0),
        tau_forms,
        e_w: c2[0].min(c2[1]).min(c2[2]),
    }
}

/// Concurrences, three-tangle and W-entanglement of a pure three-qubit state.
pub fn pure_report(psi: &PureState) -> Result<EntanglementReport> {
    let c2 = Pair::ALL.map(|p| pure_pair_concurrence_sq(psi, p));
    let c2 = [c2[0].clone()?, c2[1].clone()?, c2[2].clone()?];
    let norms = decompose3(&psi.density())?.bloch_norms_sq();
    Ok(assemble(c2, norms, true))
}

/// Density-matrix route: rejects mixed input (no three-tangle for mixed states).
pub fn pure_report_from_density(rho: &DensityMatrix) -> Result<EntanglementReport> {
    let purity = rho.purity();
    if purity < 1.0 - 1e-9 {
        return Err(Error::MixedState(purity));
    }
    density_report(rho, true)
}

/// Pairwise concurrences of any three-qubit state; the tangle is left empty.
pub fn mixed_report(rho: &DensityMatrix) -> Result<EntanglementReport> {
    density_report(rho, false)
}

fn density_report(rho: &DensityMatrix, pure: bool) -> Result<EntanglementReport> {
    let norms = decompose3(rho)?.bloch_norms_sq();
    let mut c2 = [0.0; 3];
    for p in Pair::ALL {
        c2[p.index()] = pair_concurrence_sq(rho, p)?;
    }
    Ok(assemble(c2, norms, pure))
}

/// C²_{q|rest} = 2(1 − Tr ρ_q²) = 1 − |r⃗_q|² for a pure three-qubit state.
pub fn pure_bipartition_concurrence_sq(psi: &PureState, single: usize) -> Result<f64> {
    if single > 2 {
        return Err(Error::BadSubsystemSet(vec![single]));
    }
    let rq = partial_trace(&psi.density(), &[single])?;
    Ok((2.0 * (1.0 - rq.purity())).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CkwRecord {
    /// For focus q: C²_{q,r} + C²_{q,s} and 1 − that sum.
    pub focus_sums: [f64; 3],
    pub focus_margins: [f64; 3],
    /// C²_AB + C²_AC + C²_BC and 4/3 − that sum.
    pub total: f64,
    pub total_margin: f64,
    pub satisfied: bool,
}

/// C²_ik + C²_jk ≤ 1 for each k, and Σ C² ≤ 4/3.
pub fn ckw_check(psi: &PureState) -> Result<CkwRecord> {
    let r = pure_report(psi)?;
    let focus_sums = [
        r.c2_ab + r.c2_ac,
        r.c2_ab + r.c2_bc,
        r.c2_ac + r.c2_bc,
    ];
    let focus_margins = focus_sums.map(|s| 1.0 - s);
    let total = r.c2_ab + r.c2_ac + r.c2_bc;
    let total_margin = 4.0 / 3.0 - total;
    Ok(CkwRecord {
        satisfied: focus_margins.iter().all(|&m| m >= -1e-9) && total_margin >= -1e-9,
        focus_sums,
        focus_margins,
        total,
        total_margin,
    })
}

/// Squared Bloch length of each single-qubit marginal.
pub fn bloch_norms_sq(psi: &PureState) -> Result<[f64; 3]> {
    Ok(decompose3(&psi.density())?.bloch_norms_sq())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure3(terms: &[(usize, f64)]) -> PureState {
        PureState::from_real_terms(3, terms).unwrap()
    }

    fn ghz() -> PureState {
        pure3(&[(0b000, 1.0), (0b111, 1.0)])
    }

    fn w() -> PureState {
        pure3(&[(0b001, 1.0), (0b010, 1.0), (0b100, 1.0)])
    }

    fn psi_abc() -> PureState {
        pure3(&[(0b100, 1.0), (0b010, 1.0), (0b001, 2f64.sqrt())])
    }

    #[test]
    fn bell_and_product_concurrence() {
        let bell = PureState::from_real_terms(2, &[(0b00, 1.0), (0b11, 1.0)]).unwrap();
        assert!((concurrence(&bell.density()).unwrap() - 1.0).abs() < 1e-12);
        let prod = PureState::normalized(vec![
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
            ZERO,
            ZERO,
        ])
        .unwrap();
        assert!(concurrence(&prod.density()).unwrap() < 1e-12);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed(2)).unwrap(), 0.0);
    }

    #[test]
    fn phi_con_pair_concurrence() {
        let con = pure3(&[
            (0b000, 3f64.sqrt() / 2.0),
            (0b101, 1.0 / 8f64.sqrt()),
            (0b110, 1.0 / 8f64.sqrt()),
        ]);
        let c2 = pair_concurrence_sq(&con.density(), Pair::AB).unwrap();
        assert!((c2 - 3.0 / 8.0).abs() < 1e-12);
        assert!((pure_pair_concurrence_sq(&con, Pair::AB).unwrap() - 3.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_report() {
        let r = pure_report(&ghz()).unwrap();
        for c in r.c2_triple() {
            assert!(c.abs() < 1e-12);
        }
        assert!((r.tau.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.e_w.abs() < 1e-12);
    }

    #[test]
    fn w_report() {
        let r = pure_report(&w()).unwrap();
        for c in r.c2_triple() {
            assert!((c - 4.0 / 9.0).abs() < 1e-12);
        }
        assert!(r.tau.unwrap().abs() < 1e-12);
        assert!((r.e_w - 4.0 / 9.0).abs() < 1e-12);
        assert!(r.tau_spread().unwrap() < 1e-12);
    }

    #[test]
    fn phi_m_tangle() {
        for m in [0.0, 0.3, 0.7, 1.0] {
            let psi = pure3(&[(0b000, 1.0), (0b101, m), (0b010, m), (0b111, 1.0)]);
            let r = pure_report(&psi).unwrap();
            let expected = 1.0 - 4.0 * m * m / ((1.0 + m * m) * (1.0 + m * m));
            assert!((r.tau.unwrap() - expected).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn density_route_rejects_mixed() {
        assert!(matches!(
            pure_report_from_density(&DensityMatrix::maximally_mixed(3)),
            Err(Error::MixedState(_))
        ));
        let r = pure_report_from_density(&w().density()).unwrap();
        assert!((r.c2_ab - 4.0 / 9.0).abs() < 1e-9);
        let m = mixed_report(&DensityMatrix::maximally_mixed(3)).unwrap();
        assert!(m.tau.is_none() && m.c2_ab == 0.0);
    }

    #[test]
    fn bipartition_concurrence() {
        for q in 0..3 {
            assert!((pure_bipartition_concurrence_sq(&ghz(), q).unwrap() - 1.0).abs() < 1e-12);
            let prod = pure3(&[(0b000, 1.0)]);
            assert!(pure_bipartition_concurrence_sq(&prod, q).unwrap().abs() < 1e-12);
        }
        assert!((pure_bipartition_concurrence_sq(&psi_abc(), 0).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn ckw_values() {
        let w = ckw_check(&w()).unwrap();
        assert!((w.total - 4.0 / 3.0).abs() < 1e-12 && w.satisfied);
        let g = ckw_check(&ghz()).unwrap();
        assert!(g.focus_sums.iter().all(|s| s.abs() < 1e-12));
    }
}
