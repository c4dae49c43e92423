//! Three-setting linear steering quantities for two-qubit states and their
//! bookkeeping across the three reduced pairs of a three-qubit state.

mod oracle;

pub use oracle::{f_max_oracle, OracleResult};

use std::fmt;

use serde::Serialize;

use crate::bloch::{self, decompose2, decompose3, frobenius_sq, gram, Mat3, Vec3};
use crate::error::{Error, Result};
use crate::qlinalg::{hermitian_eigenvalues, ComplexMatrix, DensityMatrix};

/// Default margin above 1 required to call a pair steerable.
pub const DEFAULT_EPS_STEER: f64 = 1e-9;

/// A reduced pair of a three-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    pub fn qubits(self) -> [usize; 2] {
        match self {
            Pair::AB => [0, 1],
            Pair::AC => [0, 2],
            Pair::BC => [1, 2],
        }
    }

    /// The qubit not in the pair.
    pub fn complement(self) -> usize {
        match self {
            Pair::AB => 2,
            Pair::AC => 1,
            Pair::BC => 0,
        }
    }

    /// The two other pairs.
    pub fn others(self) -> [Pair; 2] {
        match self {
            Pair::AB => [Pair::AC, Pair::BC],
            Pair::AC => [Pair::AB, Pair::BC],
            Pair::BC => [Pair::AB, Pair::AC],
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::AB => "AB",
            Pair::AC => "AC",
            Pair::BC => "BC",
        }
    }

    pub fn correlations(self, d: &bloch::BlochDecomposition) -> &Mat3 {
        match self {
            Pair::AB => &d.t_ab,
            Pair::AC => &d.t_ac,
            Pair::BC => &d.t_bc,
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Shape of the graph with one edge per steerable pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphType {
    NoEdge,
    OneEdge,
    TwoEdge,
    /// Three steerable pairs; impossible for any physical state, only reachable on
    /// unchecked non-positive operators.
    Triangle,
}

impl GraphType {
    pub fn from_count(n: usize) -> Self {
        match n {
            0 => GraphType::NoEdge,
            1 => GraphType::OneEdge,
            2 => GraphType::TwoEdge,
            _ => GraphType::Triangle,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GraphType::NoEdge => "no-edge",
            GraphType::OneEdge => "one-edge",
            GraphType::TwoEdge => "two-edge",
            GraphType::Triangle => "triangle",
        }
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Eigenvalues of TᵀT, descending.
pub fn correlation_gram_eigenvalues(t: &Mat3) -> Vec<f64> {
    let g = ComplexMatrix::from_real(&gram(t));
    hermitian_eigenvalues(&g)
        .expect("TᵀT is real symmetric")
        .into_iter()
        .map(|x| x.max(0.0))
        .collect()
}

/// S = Tr[TᵀT].
pub fn s_param(rho: &DensityMatrix) -> Result<f64> {
    Ok(frobenius_sq(&decompose2(rho)?.t))
}

fn check_settings_count(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::BadSettings(format!("analytic maximum needs 2 or 3 settings, got {n}")))
    }
}

/// Analytic maximum of the n-setting functional from a correlation matrix.
pub fn f_max_from_t(t: &Mat3, n: usize) -> Result<f64> {
    check_settings_count(n)?;
    Ok(match n {
        3 => frobenius_sq(t).sqrt(),
        _ => {
            let ev = correlation_gram_eigenvalues(t);
            (ev[0] + ev[1]).sqrt()
        }
    })
}

/// Analytic maximum of the CJWR functional over all measurement directions.
pub fn f_max(rho: &DensityMatrix, n: usize) -> Result<f64> {
    f_max_from_t(&decompose2(rho)?.t, n)
}

/// Sum of the two largest eigenvalues of TᵀT.
pub fn horodecki_m_from_t(t: &Mat3) -> f64 {
    let ev = correlation_gram_eigenvalues(t);
    ev[0] + ev[1]
}

pub fn horodecki_m(rho: &DensityMatrix) -> Result<f64> {
    Ok(horodecki_m_from_t(&decompose2(rho)?.t))
}

/// Measurement directions for an n-setting test: Alice's unit axes and Bob's orthonormal axes.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSettings {
    alice: Vec<Vec3>,
    bob: Vec<Vec3>,
}

impl MeasurementSettings {
    pub fn new(alice: Vec<Vec3>, bob: Vec<Vec3>) -> Result<Self> {
        let n = alice.len();
        if !(1..=3).contains(&n) || bob.len() != n {
            return Err(Error::BadSettings(format!(
                "need 1 to 3 settings per side, got {} and {}",
                n,
                bob.len()
            )));
        }
        for (k, v) in alice.iter().chain(&bob).enumerate() {
            let norm = bloch::norm_sq(v).sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::BadSettings(format!("axis {k} has norm {norm}")));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let dot: f64 = (0..3).map(|c| bob[i][c] * bob[j][c]).sum();
                if dot.abs() > 1e-10 {
                    return Err(Error::BadSettings(format!(
                        "Bob's axes {i} and {j} are not orthogonal (dot {dot})"
                    )));
                }
            }
        }
        Ok(MeasurementSettings { alice, bob })
    }

    pub fn count(&self) -> usize {
        self.alice.len()
    }

    pub fn alice(&self) -> &[Vec3] {
        &self.alice
    }

    pub fn bob(&self) -> &[Vec3] {
        &self.bob
    }
}

/// F_n = |Σ_k ⟨A_k ⊗ B_k⟩| / √n with ⟨A_k ⊗ B_k⟩ = â_kᵀ T b̂_k.
pub fn cjwr_value_from_t(t: &Mat3, mu: &MeasurementSettings) -> f64 {
    let sum: f64 = mu
        .alice
        .iter()
        .zip(&mu.bob)
        .map(|(a, b)| {
            let tb = bloch::mat_vec(t, b);
            a[0] * tb[0] + a[1] * tb[1] + a[2] * tb[2]
        })
        .sum();
    sum.abs() / (mu.count() as f64).sqrt()
}

pub fn cjwr_value(rho: &DensityMatrix, mu: &MeasurementSettings) -> Result<f64> {
    Ok(cjwr_value_from_t(&decompose2(rho)?.t, mu))
}

/// Steering-related quantities for one reduced pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairSteering {
    pub pair: Pair,
    /// Tr[TᵀT].
    pub s: f64,
    pub f2_max: f64,
    pub f3_max: f64,
    /// Horodecki parameter.
    pub m: f64,
    /// max{0, S − 1}.
    pub n: f64,
    pub steerable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteeringReport {
    pub pairs: [PairSteering; 3],
    pub s_max: f64,
    pub s_total_max: f64,
    pub m_max: f64,
    pub i_local: f64,
    /// max over pairs of pairs of N_ij + N_kl.
    pub i_nonlocal: f64,
    /// The same maximum taken over S_ij + S_kl instead of N_ij + N_kl.
    pub i_nonlocal_s_sum: f64,
    pub steerable_pairs: Vec<Pair>,
    pub graph_type: GraphType,
    pub eps_steer: f64,
}

impl SteeringReport {
    pub fn s(&self, p: Pair) -> f64 {
        self.pairs[p.index()].s
    }

    pub fn m(&self, p: Pair) -> f64 {
        self.pairs[p.index()].m
    }

    pub fn s_triple(&self) -> [f64; 3] {
        [self.pairs[0].s, self.pairs[1].s, self.pairs[2].s]
    }

    pub fn steerable_count(&self) -> usize {
        self.steerable_pairs.len()
    }

    pub fn monogamous(&self) -> bool {
        self.steerable_pairs.len() <= 1
    }

    /// The three pair sums S_AB+S_AC, S_AB+S_BC, S_AC+S_BC.
    pub fn pair_sums(&self) -> [f64; 3] {
        let s = self.s_triple();
        [s[0] + s[1], s[0] + s[2], s[1] + s[2]]
    }
}

fn max_pair_sum(x: [f64; 3]) -> f64 {
    (x[0] + x[1]).max(x[0] + x[2]).max(x[1] + x[2])
}

/// All steering quantities of a three-qubit state.
pub fn steering_report(rho: &DensityMatrix, eps_steer: f64) -> Result<SteeringReport> {
    let d = decompose3(rho)?;
    Ok(report_from_bloch(&d, eps_steer))
}

pub fn report_from_bloch(d: &bloch::BlochDecomposition, eps_steer: f64) -> SteeringReport {
    let pairs = Pair::ALL.map(|p| {
        let t = p.correlations(d);
        let ev = correlation_gram_eigenvalues(t);
        let s = frobenius_sq(t);
        let m = ev[0] + ev[1];
        PairSteering {
            pair: p,
            s,
            f2_max: m.sqrt(),
            f3_max: s.sqrt(),
            m,
            n: (s - 1.0).max(0.0),
            steerable: s > 1.0 + eps_steer,
        }
    });
    let s = pairs.map(|p| p.s);
    let steerable_pairs: Vec<Pair> = pairs.iter().filter(|p| p.steerable).map(|p| p.pair).collect();
    SteeringReport {
        s_max: s[0].max(s[1]).max(s[2]),
        s_total_max: max_pair_sum(s),
        m_max: pairs.iter().map(|p| p.m).fold(f64::MIN, f64::max),
        i_local: d.local_information(),
        i_nonlocal: max_pair_sum(pairs.map(|p| p.n)),
        i_nonlocal_s_sum: max_pair_sum(s),
        graph_type: GraphType::from_count(steerable_pairs.len()),
        steerable_pairs,
        eps_steer,
        pairs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeOff {
    pub sum: f64,
    pub is_pure: bool,
    /// sum ≤ 3 + 1e-9.
    pub satisfied: bool,
    /// For pure input: |sum − 3| ≤ 1e-9.
    pub pure_equality: Option<bool>,
}

/// S_AB + S_AC + S_BC ≤ 3, with equality for pure states.
pub fn trade_off_check(rho: &DensityMatrix) -> Result<TradeOff> {
    let r = steering_report(rho, DEFAULT_EPS_STEER)?;
    let sum: f64 = r.s_triple().iter().sum();
    let is_pure = rho.is_pure();
    Ok(TradeOff {
        sum,
        is_pure,
        satisfied: sum <= 3.0 + 1e-9,
        pure_equality: is_pure.then(|| (sum - 3.0).abs() <= 1e-9),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct F2MonogamySum {
    /// Party shared by both pairs (0 = A, 1 = B, 2 = C).
    pub focus: usize,
    pub sum: f64,
    pub satisfied: bool,
}

/// M(ρ_AB) + M(ρ_AC) ≤ 2 and its permutations.
pub fn f2_monogamy_check(rho: &DensityMatrix) -> Result<[F2MonogamySum; 3]> {
    let r = steering_report(rho, DEFAULT_EPS_STEER)?;
    let m = [r.m(Pair::AB), r.m(Pair::AC), r.m(Pair::BC)];
    let sums = [m[0] + m[1], m[0] + m[2], m[1] + m[2]];
    Ok([0, 1, 2].map(|focus| F2MonogamySum {
        focus,
        sum: sums[focus],
        satisfied: sums[focus] <= 2.0 + 1e-9,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{partial_trace, PureState};

    fn bell() -> DensityMatrix {
        PureState::from_real_terms(2, &[(0b00, 1.0), (0b11, 1.0)])
            .unwrap()
            .density()
    }

    fn three(terms: &[(usize, f64)]) -> DensityMatrix {
        PureState::from_real_terms(3, terms).unwrap().density()
    }

    fn psi_abc() -> DensityMatrix {
        three(&[(0b100, 1.0), (0b010, 1.0), (0b001, 2f64.sqrt())])
    }

    fn ghz() -> DensityMatrix {
        three(&[(0b000, 1.0), (0b111, 1.0)])
    }

    fn w() -> DensityMatrix {
        three(&[(0b001, 1.0), (0b010, 1.0), (0b100, 1.0)])
    }

    const X: Vec3 = [1.0, 0.0, 0.0];
    const Y: Vec3 = [0.0, 1.0, 0.0];
    const Z: Vec3 = [0.0, 0.0, 1.0];

    #[test]
    fn s_param_values() {
        assert!((s_param(&bell()).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(s_param(&DensityMatrix::maximally_mixed(2)).unwrap(), 0.0);
        let con = three(&[
            (0b000, 3f64.sqrt() / 2.0),
            (0b101, 1.0 / 8f64.sqrt()),
            (0b110, 1.0 / 8f64.sqrt()),
        ]);
        let rab = partial_trace(&con, &[0, 1]).unwrap();
        assert!((s_param(&rab).unwrap() - (1.0 + 5.0 / 16.0)).abs() < 1e-12);
    }

    #[test]
    fn analytic_maxima() {
        assert!((f_max(&bell(), 3).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!((f_max(&bell(), 2).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let rac = partial_trace(&psi_abc(), &[0, 2]).unwrap();
        assert!((f_max(&rac, 3).unwrap() - 1.25f64.sqrt()).abs() < 1e-12);
        assert!(matches!(f_max(&bell(), 4), Err(Error::BadSettings(_))));
    }

    #[test]
    fn horodecki_values() {
        assert!((horodecki_m(&bell()).unwrap() - 2.0).abs() < 1e-12);
        let rab = partial_trace(&ghz(), &[0, 1]).unwrap();
        assert!((horodecki_m(&rab).unwrap() - 1.0).abs() < 1e-12);
        assert!(horodecki_m(&DensityMatrix::maximally_mixed(2)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn cjwr_on_bell_state() {
        let same = MeasurementSettings::new(vec![X, Y, Z], vec![X, Y, Z]).unwrap();
        assert!((cjwr_value(&bell(), &same).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let flipped =
            MeasurementSettings::new(vec![X, [0.0, -1.0, 0.0], Z], vec![X, Y, Z]).unwrap();
        assert!((cjwr_value(&bell(), &flipped).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            cjwr_value(&DensityMatrix::maximally_mixed(2), &flipped).unwrap(),
            0.0
        );
    }

    #[test]
    fn settings_validation() {
        assert!(MeasurementSettings::new(vec![X, X], vec![X, X]).is_err());
        assert!(MeasurementSettings::new(vec![[2.0, 0.0, 0.0]], vec![X]).is_err());
        assert!(MeasurementSettings::new(vec![], vec![]).is_err());
        assert!(MeasurementSettings::new(vec![X], vec![X, Y]).is_err());
    }

    #[test]
    fn report_psi_abc() {
        let r = steering_report(&psi_abc(), DEFAULT_EPS_STEER).unwrap();
        assert!((r.s(Pair::AB) - 0.5).abs() < 1e-12);
        assert!((r.s(Pair::AC) - 1.25).abs() < 1e-12);
        assert!((r.s(Pair::BC) - 1.25).abs() < 1e-12);
        assert_eq!(r.steerable_pairs, vec![Pair::AC, Pair::BC]);
        assert_eq!(r.graph_type, GraphType::TwoEdge);
        assert!((r.i_local - 0.5).abs() < 1e-12);
        assert!((r.i_nonlocal - 0.5).abs() < 1e-12);
        assert!((r.i_nonlocal_s_sum - 2.5).abs() < 1e-12);
        for p in &r.pairs {
            assert!((p.f3_max * p.f3_max - p.s).abs() < 1e-10);
        }
    }

    #[test]
    fn report_w_and_ghz_are_boundary() {
        for rho in [w(), ghz()] {
            let r = steering_report(&rho, DEFAULT_EPS_STEER).unwrap();
            for s in r.s_triple() {
                assert!((s - 1.0).abs() < 1e-12);
            }
            assert!(r.steerable_pairs.is_empty());
            assert_eq!(r.graph_type, GraphType::NoEdge);
        }
    }

    #[test]
    fn trade_off() {
        let t = trade_off_check(&psi_abc()).unwrap();
        assert!(t.is_pure && t.satisfied && t.pure_equality == Some(true));
        assert!((t.sum - 3.0).abs() < 1e-12);
        let t = trade_off_check(&DensityMatrix::maximally_mixed(3)).unwrap();
        assert_eq!(t.sum, 0.0);
        assert!(!t.is_pure && t.pure_equality.is_none());
    }

    #[test]
    fn f2_monogamy_values() {
        let g = f2_monogamy_check(&ghz()).unwrap();
        for s in g {
            assert!((s.sum - 2.0).abs() < 1e-9 && s.satisfied);
        }
        for s in f2_monogamy_check(&DensityMatrix::maximally_mixed(3)).unwrap() {
            assert_eq!(s.sum, 0.0);
        }
    }

    #[test]
    fn wrong_dimensions() {
        assert!(s_param(&DensityMatrix::maximally_mixed(3)).is_err());
        assert!(steering_report(&DensityMatrix::maximally_mixed(2), 1e-9).is_err());
    }
}
