//! Checkers for the steering/entanglement trade-off relations of three-qubit states.
//!
//! Every bound check returns a [`RelationRecord`] carrying lhs, bound and margin so that
//! sweeps can report worst cases rather than a bare pass/fail.

use serde::Serialize;

use crate::bloch::decompose3;
use crate::entanglement::{pure_report, EntanglementReport};
use crate::error::{Error, Result};
use crate::qlinalg::{DensityMatrix, PureState};
use crate::steering::{steering_report, Pair, SteeringReport, DEFAULT_EPS_STEER};

pub const RELATION_TOL: f64 = 1e-9;
/// Dead zone for the "≠" and ">" tests on Bloch lengths.
pub const DETECTION_GAP: f64 = 1e-7;

const FOUR_NINTHS: f64 = 4.0 / 9.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationRecord {
    pub relation_id: &'static str,
    pub lhs: f64,
    pub bound: f64,
    /// bound − lhs.
    pub margin: f64,
    pub satisfied: bool,
    pub inputs_digest: String,
}

impl RelationRecord {
    pub fn new(relation_id: &'static str, lhs: f64, bound: f64, inputs_digest: String) -> Self {
        let margin = bound - lhs;
        RelationRecord {
            relation_id,
            lhs,
            bound,
            margin,
            satisfied: margin >= -RELATION_TOL,
            inputs_digest,
        }
    }

    /// |lhs − bound| within tolerance.
    pub fn saturated(&self, tol: f64) -> bool {
        self.margin.abs() <= tol
    }
}

/// A three-qubit state together with a three-tangle value usable in the τ relations.
///
/// For pure states the tangle is exact. For an explicit convex combination of pure states
/// the tangle is the convexity upper bound Σ pₙ τ(ψₙ); since S^max and S^max_total are
/// convex, the relations checked with this value imply them for the true tangle.
#[derive(Debug, Clone)]
pub struct StateWithTangle {
    rho: DensityMatrix,
    tau: f64,
    exact: bool,
}

impl StateWithTangle {
    pub fn pure(psi: &PureState) -> Result<Self> {
        let tau = pure_report(psi)?.tau.expect("pure report carries tau");
        Ok(StateWithTangle {
            rho: psi.density(),
            tau,
            exact: true,
        })
    }

    /// Mixture Σ pₙ |ψₙ⟩⟨ψₙ| with nonnegative weights summing to one.
    pub fn mixture(parts: &[(f64, PureState)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::BadParams("empty mixture".into()));
        }
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::BadParams(format!(
                "mixture weights must be nonnegative and sum to 1, got sum {total}"
            )));
        }
        let mut tau = 0.0;
        let mut dens = Vec::with_capacity(parts.len());
        for (p, psi) in parts {
            tau += p * pure_report(psi)?.tau.expect("pure report carries tau");
            dens.push((*p, psi.density()));
        }
        let refs: Vec<(f64, &DensityMatrix)> = dens.iter().map(|(p, r)| (*p, r)).collect();
        Ok(StateWithTangle {
            rho: DensityMatrix::mix(&refs),
            tau,
            exact: parts.len() == 1,
        })
    }

    /// Accepts a density matrix only when it is pure.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let purity = rho.purity();
        if purity < 1.0 - 1e-9 {
            return Err(Error::MixedStateWithoutTau(purity));
        }
        let report = crate::entanglement::pure_report_from_density(rho)?;
        Ok(StateWithTangle {
            rho: rho.clone(),
            tau: report.tau.expect("pure report carries tau"),
            exact: true,
        })
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// False when `tau` is only a convexity upper bound.
    pub fn tau_is_exact(&self) -> bool {
        self.exact
    }
}

fn digest(rho: &DensityMatrix) -> String {
    rho.matrix().digest()
}

/// S^max + 2τ ≤ 3.
pub fn check_tau_smax(state: &StateWithTangle) -> Result<RelationRecord> {
    let r = steering_report(&state.rho, DEFAULT_EPS_STEER)?;
    Ok(RelationRecord::new(
        "tau_smax",
        r.s_max + 2.0 * state.tau,
        3.0,
        digest(&state.rho),
    ))
}

/// S^max_total + τ ≤ 3.
pub fn check_tau_stotal(state: &StateWithTangle) -> Result<RelationRecord> {
    let r = steering_report(&state.rho, DEFAULT_EPS_STEER)?;
    Ok(RelationRecord::new(
        "tau_stotal",
        r.s_total_max + state.tau,
        3.0,
        digest(&state.rho),
    ))
}

/// S^max_total + 3 E_W ≤ 10/3.
pub fn check_ew_stotal(psi: &PureState) -> Result<RelationRecord> {
    let rho = psi.density();
    let r = steering_report(&rho, DEFAULT_EPS_STEER)?;
    let e = pure_report(psi)?;
    Ok(RelationRecord::new(
        "ew_stotal",
        r.s_total_max + 3.0 * e.e_w,
        10.0 / 3.0,
        digest(&rho),
    ))
}

/// S^max + M^max + 3τ ≤ 5.
pub fn check_bell_steering_tangle(psi: &PureState) -> Result<RelationRecord> {
    let rho = psi.density();
    let r = steering_report(&rho, DEFAULT_EPS_STEER)?;
    let tau = pure_report(psi)?.tau.expect("pure report carries tau");
    Ok(RelationRecord::new(
        "bell_steering_tangle",
        r.s_max + r.m_max + 3.0 * tau,
        5.0,
        digest(&rho),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoComplementarity {
    /// I_local + max pair sum of N_ij = max{0, S_ij − 1}, bounded by 3.
    pub record: RelationRecord,
    /// I_local + max pair sum of S_ij, the alternative reading of the nonlocal term.
    /// It is not bounded by 3 (a product state gives 5) and is reported only.
    pub lhs_s_sum_reading: f64,
}

/// I_local + I_nonlocal ≤ 3.
pub fn check_info_complementarity(rho: &DensityMatrix) -> Result<InfoComplementarity> {
    let r = steering_report(rho, DEFAULT_EPS_STEER)?;
    Ok(InfoComplementarity {
        record: RelationRecord::new(
            "info_complementarity",
            r.i_local + r.i_nonlocal,
            3.0,
            digest(rho),
        ),
        lhs_s_sum_reading: r.i_local + r.i_nonlocal_s_sum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairConcurrenceSteering {
    pub pair: Pair,
    pub c2: f64,
    /// Mean of the squared concurrences of the other two pairs.
    pub others_mean: f64,
    pub s: f64,
    pub above_four_ninths: bool,
    pub above_others_mean: bool,
    pub steerable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceSteeringRecord {
    pub pairs: [PairConcurrenceSteering; 3],
    /// Descriptions of every implication that failed beyond tolerance.
    pub violations: Vec<String>,
}

impl ConcurrenceSteeringRecord {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-pair relation between squared concurrences and S for a pure state.
///
/// Checks C²_ij > 4/9 ⇒ S_ij > 1, S_ij > 1 ⇔ C²_ij > (C²_ik + C²_jk)/2 and
/// S_ij > 1 ⇒ (C²_ik + C²_jk)/2 < 4/9. Each premise must hold by more than the
/// relation tolerance before its conclusion is demanded.
pub fn steerability_from_concurrence(psi: &PureState) -> Result<ConcurrenceSteeringRecord> {
    let e = pure_report(psi)?;
    let st = steering_report(&psi.density(), DEFAULT_EPS_STEER)?;
    Ok(concurrence_steering(&e, &st))
}

fn concurrence_steering(e: &EntanglementReport, st: &SteeringReport) -> ConcurrenceSteeringRecord {
    let tol = RELATION_TOL;
    let mut violations = Vec::new();
    let pairs = Pair::ALL.map(|p| {
        let [o1, o2] = p.others();
        let c2 = e.c2(p);
        let mean = (e.c2(o1) + e.c2(o2)) / 2.0;
        let s = st.s(p);
        if c2 > FOUR_NINTHS + tol && s <= 1.0 - tol {
            violations.push(format!("{p}: C² = {c2} > 4/9 but S = {s}"));
        }
        if (s > 1.0 + tol && c2 < mean - tol) || (s < 1.0 - tol && c2 > mean + tol) {
            violations.push(format!("{p}: S = {s} disagrees with C² = {c2} vs mean {mean}"));
        }
        if s > 1.0 + tol && mean >= FOUR_NINTHS + tol {
            violations.push(format!("{p}: steerable with others' mean C² = {mean}"));
        }
        PairConcurrenceSteering {
            pair: p,
            c2,
            others_mean: mean,
            s,
            above_four_ninths: c2 > FOUR_NINTHS,
            above_others_mean: c2 > mean,
            steerable: st.pairs[p.index()].steerable,
        }
    });
    ConcurrenceSteeringRecord { pairs, violations }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonogamySufficientRecord {
    /// C²_ik + C²_jk for each pair ij (the sums over the pairs it is not).
    pub others_sums: [f64; 3],
    /// Others' sum ≥ 8/9 for at least two pairs.
    pub monogamy_condition: bool,
    /// C² > 4/9 for at least two pairs.
    pub non_monogamy_condition: bool,
    pub monogamous: bool,
    pub violations: Vec<String>,
}

impl MonogamySufficientRecord {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Sufficient conditions for monogamy and for non-monogamy from squared concurrences.
pub fn monogamy_sufficient_checks(psi: &PureState) -> Result<MonogamySufficientRecord> {
    let e = pure_report(psi)?;
    let st = steering_report(&psi.density(), DEFAULT_EPS_STEER)?;
    Ok(monogamy_sufficient(&e, &st))
}

fn monogamy_sufficient(e: &EntanglementReport, st: &SteeringReport) -> MonogamySufficientRecord {
    let tol = RELATION_TOL;
    let others_sums = Pair::ALL.map(|p| {
        let [o1, o2] = p.others();
        e.c2(o1) + e.c2(o2)
    });
    let count = |f: &dyn Fn(usize) -> bool| (0..3).filter(|&i| f(i)).count();
    let mono_strict = count(&|i| others_sums[i] >= 8.0 / 9.0 + tol) >= 2;
    let non_mono_strict = count(&|i| e.c2(Pair::ALL[i]) > FOUR_NINTHS + tol) >= 2;
    // conclusions are judged with a dead zone as well, so round-off cannot manufacture a pair
    let robust_steerable = st.s_triple().iter().filter(|&&s| s > 1.0 + tol).count();
    let robust_not_steerable = st.s_triple().iter().filter(|&&s| s < 1.0 - tol).count();
    let mut violations = Vec::new();
    if mono_strict && robust_steerable >= 2 {
        violations.push(format!("monogamy condition met but {robust_steerable} steerable pairs"));
    }
    if non_mono_strict && robust_not_steerable >= 2 {
        violations.push("non-monogamy condition met but at most one steerable pair".into());
    }
    MonogamySufficientRecord {
        others_sums,
        monogamy_condition: count(&|i| others_sums[i] >= 8.0 / 9.0) >= 2,
        non_monogamy_condition: count(&|i| e.c2(Pair::ALL[i]) > FOUR_NINTHS) >= 2,
        monogamous: st.monogamous(),
        violations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Detection {
    Detected,
    Inconclusive,
}

fn bloch_norms(psi: &PureState) -> Result<[f64; 3]> {
    if psi.qubits() != 3 {
        return Err(Error::BadDimension {
            expected: 8,
            got: psi.amplitudes().len(),
        });
    }
    Ok(decompose3(&psi.density())?.bloch_norms_sq())
}

/// r_q² − mean of the other two squared Bloch lengths, for q = A, B, C.
fn bloch_excess(r: [f64; 3]) -> [f64; 3] {
    [
        r[0] - (r[1] + r[2]) / 2.0,
        r[1] - (r[0] + r[2]) / 2.0,
        r[2] - (r[0] + r[1]) / 2.0,
    ]
}

/// Entanglement witness for pure states: fires when some squared Bloch length differs
/// from the mean of the other two.
pub fn detect_entanglement_pure(psi: &PureState) -> Result<Detection> {
    let ex = bloch_excess(bloch_norms(psi)?);
    Ok(if ex.iter().any(|d| d.abs() > DETECTION_GAP) {
        Detection::Detected
    } else {
        Detection::Inconclusive
    })
}

/// Genuine-entanglement witness for pure states: fires when two squared Bloch lengths
/// each exceed the mean of the other two, i.e. two reduced pairs violate the
/// three-setting inequality.
pub fn detect_genuine_pure(psi: &PureState) -> Result<Detection> {
    let ex = bloch_excess(bloch_norms(psi)?);
    let above = ex.iter().filter(|&&d| d > DETECTION_GAP).count();
    Ok(if above >= 2 {
        Detection::Detected
    } else {
        Detection::Inconclusive
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSteerableNecessary {
    pub local_information: f64,
    pub steerable_count: usize,
    /// False only when two pairs are steerable while a² + b² + c² ≥ 1.
    pub holds: bool,
}

/// Tests the claim that two steerable pairs in a pure state require a² + b² + c² < 1.
///
/// Biseparable states do satisfy a² + b² + c² ≥ 1 with a single steerable pair, but the
/// converse fails: genuinely entangled states with two steerable pairs and
/// a² + b² + c² ≥ 1 exist, so `holds` is false for some states.
pub fn two_steerable_necessary(psi: &PureState) -> Result<TwoSteerableNecessary> {
    let rho = psi.density();
    let st = steering_report(&rho, DEFAULT_EPS_STEER)?;
    let robust_count = st.s_triple().iter().filter(|&&s| s > 1.0 + RELATION_TOL).count();
    Ok(TwoSteerableNecessary {
        local_information: st.i_local,
        steerable_count: st.steerable_count(),
        holds: robust_count < 2 || st.i_local < 1.0 + RELATION_TOL,
    })
}

/// S_ij − S_ik = 3(C²_ij − C²_ik) for the three orderings (AB,AC), (AB,BC), (AC,BC);
/// returns the residuals.
pub fn ordering_residuals(psi: &PureState) -> Result<[f64; 3]> {
    let e = pure_report(psi)?;
    let st = steering_report(&psi.density(), DEFAULT_EPS_STEER)?;
    let s = st.s_triple();
    let c = e.c2_triple();
    Ok([
        (s[0] - s[1]) - 3.0 * (c[0] - c[1]),
        (s[0] - s[2]) - 3.0 * (c[0] - c[2]),
        (s[1] - s[2]) - 3.0 * (c[1] - c[2]),
    ])
}

/// Every bound relation that applies to a pure three-qubit state.
pub fn pure_relation_records(psi: &PureState) -> Result<Vec<RelationRecord>> {
    let with_tau = StateWithTangle::pure(psi)?;
    Ok(vec![
        check_tau_smax(&with_tau)?,
        check_tau_stotal(&with_tau)?,
        check_ew_stotal(psi)?,
        check_bell_steering_tangle(psi)?,
        check_info_complementarity(&psi.density())?.record,
    ])
}
