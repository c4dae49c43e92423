//! One-parameter family sweeps written as CSV.

use rayon::prelude::*;
use serde::Serialize;

use super::CliError;
use crate::entanglement::pure_report;
use crate::families::{make_named, NamedState};
use crate::relations::{check_info_complementarity, pure_relation_records};
use crate::steering::{steering_report, DEFAULT_EPS_STEER};

pub const SWEEP_FAMILIES: &[&str] = &["phi_m", "phi_q", "phi_b"];

pub const RELATION_COLUMNS: &[&str] = &[
    "tau_smax",
    "tau_stotal",
    "ew_stotal",
    "bell_steering_tangle",
    "info_complementarity",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub s: [f64; 3],
    pub s_max: f64,
    pub s_total_max: f64,
    pub steerable_count: usize,
    /// Pure members only.
    pub c2: Option<[f64; 3]>,
    pub tau: Option<f64>,
    pub e_w: Option<f64>,
    /// (lhs, bound) per entry of [`RELATION_COLUMNS`]; None where the relation needs τ.
    pub relations: Vec<Option<(f64, f64)>>,
}

/// Parses "lo..hi".
pub fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::BadRange(format!("expected lo..hi, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Grid lo + i·step for i = 0..=n with n = round((hi − lo)/step).
pub fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::BadRange(format!("step must be positive, got {step}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

fn row(family: &str, param: f64) -> Result<SweepRow, CliError> {
    let state = make_named(family, &[param]).map_err(|e| match e {
        crate::Error::UnknownName(n) => CliError::UnknownFamily(n),
        crate::Error::ParamOutOfRange(m) => CliError::BadRange(m),
        other => CliError::Validation(other.to_string()),
    })?;
    let rho = state.density();
    let st = steering_report(&rho, DEFAULT_EPS_STEER).map_err(CliError::from)?;
    let (c2, tau, e_w, relations) = match &state {
        NamedState::Pure(psi) => {
            let e = pure_report(psi)?;
            let recs = pure_relation_records(psi)?;
            let rel = RELATION_COLUMNS
                .iter()
                .map(|id| recs.iter().find(|r| r.relation_id == *id).map(|r| (r.lhs, r.bound)))
                .collect();
            (Some(e.c2_triple()), e.tau, Some(e.e_w), rel)
        }
        NamedState::Mixed(_) => {
            let info = check_info_complementarity(&rho)?.record;
            let rel = RELATION_COLUMNS
                .iter()
                .map(|id| (*id == info.relation_id).then_some((info.lhs, info.bound)))
                .collect();
            (None, None, None, rel)
        }
    };
    Ok(SweepRow {
        param,
        s: st.s_triple(),
        s_max: st.s_max,
        s_total_max: st.s_total_max,
        steerable_count: st.steerable_count(),
        c2,
        tau,
        e_w,
        relations,
    })
}

pub fn sweep(family: &str, lo: f64, hi: f64, step: f64, jobs: usize) -> Result<Vec<SweepRow>, CliError> {
    if !SWEEP_FAMILIES.contains(&family) {
        return Err(CliError::UnknownFamily(family.to_string()));
    }
    let points = grid(lo, hi, step)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| points.par_iter().map(|&p| row(family, p)).collect())
}

pub fn csv_header() -> Vec<String> {
    let mut h: Vec<String> = [
        "param", "S_AB", "S_AC", "S_BC", "S_max", "S_total_max", "steerable_count", "C2_AB",
        "C2_AC", "C2_BC", "tau", "E_W",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for r in RELATION_COLUMNS {
        h.push(format!("{r}_lhs"));
        h.push(format!("{r}_bound"));
    }
    h
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn csv_record(r: &SweepRow) -> Vec<String> {
    let mut v = vec![
        num(r.param),
        num(r.s[0]),
        num(r.s[1]),
        num(r.s[2]),
        num(r.s_max),
        num(r.s_total_max),
        r.steerable_count.to_string(),
        opt(r.c2.map(|c| c[0])),
        opt(r.c2.map(|c| c[1])),
        opt(r.c2.map(|c| c[2])),
        opt(r.tau),
        opt(r.e_w),
    ];
    for rel in &r.relations {
        v.push(opt(rel.map(|x| x.0)));
        v.push(opt(rel.map(|x| x.1)));
    }
    v
}

pub fn to_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(csv_header()).map_err(io)?;
    for r in rows {
        w.write_record(csv_record(r)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}
