//! Seeded property suites over random and named states.
//!
//! Each sample yields a list of observations; observations are collected in sample order
//! and folded sequentially, so the summary does not depend on the worker count.

use rayon::prelude::*;
use serde::Serialize;

use super::CliError;
use crate::entanglement::{ckw_check, concurrence, pure_report};
use crate::families::sampling::{
    haar_pure, haar_random_pure, random_biseparable, random_gsd, random_gsd_masked,
    random_mixed, random_mixed_on, random_product, random_symmetric, rng_for,
};
use crate::families::{
    add_white_noise, gsd_concurrences, gsd_s_formulas, gsd_state, gsd_tau, make_named,
    star_non_monogamous, w_like_monogamy,
};
use crate::qlinalg::{DensityMatrix, PureState};
use crate::relations::{
    detect_entanglement_pure, detect_genuine_pure, monogamy_sufficient_checks,
    ordering_residuals, pure_relation_records, steerability_from_concurrence,
    two_steerable_necessary, Detection,
};
use crate::steering::{
    f_max, f_max_oracle, s_param, steering_report, Pair, SteeringReport, DEFAULT_EPS_STEER,
};
use crate::Result;

pub const SUITES: &[&str] = &[
    "tradeoff",
    "pair-count",
    "ordering",
    "implications",
    "complementarity",
    "f2-monogamy",
    "symmetric",
    "two-qubit",
    "ckw",
    "gsd",
    "w-like",
    "star",
    "detection",
    "v-scaling",
    "oracle",
];

/// Suites for claims that sampling refutes; run by name only.
pub const CLAIM_SUITES: &[&str] = &["two-pair-necessary"];

#[derive(Debug, Clone)]
struct Obs {
    property: &'static str,
    /// Natural-unit slack of the property (negative when violated); None for pure flags.
    margin: Option<f64>,
    pass: bool,
}

fn obs(property: &'static str, margin: f64, pass: bool) -> Obs {
    Obs {
        property,
        margin: Some(margin),
        pass,
    }
}

fn flag(property: &'static str, pass: bool) -> Obs {
    Obs {
        property,
        margin: None,
        pass,
    }
}

/// Bound check lhs ≤ bound + tol.
fn bound(property: &'static str, lhs: f64, b: f64, tol: f64) -> Obs {
    obs(property, b - lhs, lhs <= b + tol)
}

/// Equality check |err| < tol; the margin is −|err|.
fn equal(property: &'static str, err: f64, tol: f64) -> Obs {
    obs(property, -err.abs(), err.abs() < tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertySummary {
    pub property: &'static str,
    pub checked: usize,
    pub passed: usize,
    pub worst_margin: Option<f64>,
    /// Labels of the first failing samples.
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub samples: usize,
    pub seed: u64,
    pub properties: Vec<PropertySummary>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed == p.checked)
    }

    pub fn property(&self, name: &str) -> Option<&PropertySummary> {
        self.properties.iter().find(|p| p.property == name)
    }
}

const MAX_FAILING: usize = 10;

fn fold(suite: &str, samples: usize, seed: u64, rows: Vec<(String, Vec<Obs>)>) -> SuiteSummary {
    let mut props: Vec<PropertySummary> = Vec::new();
    for (label, list) in rows {
        for o in list {
            let idx = match props.iter().position(|p| p.property == o.property) {
                Some(i) => i,
                None => {
                    props.push(PropertySummary {
                        property: o.property,
                        checked: 0,
                        passed: 0,
                        worst_margin: None,
                        failing: Vec::new(),
                    });
                    props.len() - 1
                }
            };
            let p = &mut props[idx];
            p.checked += 1;
            if o.pass {
                p.passed += 1;
            } else if p.failing.len() < MAX_FAILING {
                p.failing.push(label.clone());
            }
            if let Some(m) = o.margin {
                p.worst_margin = Some(p.worst_margin.map_or(m, |w: f64| w.min(m)));
            }
        }
    }
    SuiteSummary {
        suite: suite.to_string(),
        samples,
        seed,
        properties: props,
    }
}

/// Distinct sub-seed per sample family so suites do not reuse streams.
fn sub_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

const PURE: u64 = 1;
const MIXED: u64 = 2;
const TWO_QUBIT: u64 = 3;
const SYMMETRIC: u64 = 4;
const PRODUCT: u64 = 5;
const BISEP: u64 = 6;
const GSD: u64 = 7;
const NOISE: u64 = 8;
const ORACLE: u64 = 9;

/// One labelled sample generator evaluated in parallel.
fn run_samples<F>(count: usize, label: &str, f: F) -> Result<Vec<(String, Vec<Obs>)>>
where
    F: Fn(u64) -> Result<Vec<Obs>> + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| Ok((format!("{label}#{i}"), f(i)?)))
        .collect()
}

fn named_pure(name: &str) -> PureState {
    make_named(name, &[])
        .ok()
        .and_then(|s| s.as_pure().cloned())
        .expect("parameter-free named state is pure")
}

fn report(rho: &DensityMatrix) -> Result<SteeringReport> {
    steering_report(rho, DEFAULT_EPS_STEER)
}

fn mixed_rank(i: u64) -> usize {
    2 + (i % 7) as usize
}

fn tradeoff(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let mut rows = run_samples(n, "haar", |i| {
        let r = report(&haar_random_pure(sub_seed(seed, PURE), i).density())?;
        Ok(vec![equal("pure_sum_equals_3", r.s_triple().iter().sum::<f64>() - 3.0, 1e-9)])
    })?;
    let per_rank = (n / 10).max(1);
    for rank in 2..=8usize {
        rows.extend(run_samples(per_rank, &format!("mixed_rank{rank}"), |i| {
            let rho = random_mixed(sub_seed(seed, MIXED + 16 * rank as u64), i, rank)?;
            let sum: f64 = report(&rho)?.s_triple().iter().sum();
            Ok(vec![bound("mixed_sum_le_3", sum, 3.0, 1e-9)])
        })?);
    }
    Ok(rows)
}

fn pair_count(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let count_obs = |r: &SteeringReport| {
        let c = r.steerable_count();
        obs("steerable_pairs_le_2", 2.0 - c as f64, c <= 2)
    };
    let mut rows = run_samples(n, "haar", |i| {
        Ok(vec![count_obs(&report(&haar_random_pure(sub_seed(seed, PURE), i).density())?)])
    })?;
    let per_rank = (n / 10).max(1);
    for rank in 2..=8usize {
        rows.extend(run_samples(per_rank, &format!("mixed_rank{rank}"), |i| {
            let rho = random_mixed(sub_seed(seed, MIXED + 16 * rank as u64), i, rank)?;
            Ok(vec![count_obs(&report(&rho)?)])
        })?);
    }
    let r = report(&named_pure("psi_abc").density())?;
    rows.push((
        "psi_abc".into(),
        vec![obs("psi_abc_attains_2", r.steerable_count() as f64 - 2.0, r.steerable_count() == 2)],
    ));
    Ok(rows)
}

fn ordering(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    run_samples(n, "haar", |i| {
        let res = ordering_residuals(&haar_random_pure(sub_seed(seed, PURE), i))?;
        let worst = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        Ok(vec![equal("s_difference_equals_3_c2_difference", worst, 1e-8)])
    })
}

fn implications(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    run_samples(n, "haar", |i| {
        let psi = haar_random_pure(sub_seed(seed, PURE), i);
        Ok(vec![
            flag("concurrence_steering_implications", steerability_from_concurrence(&psi)?.holds()),
            flag("monogamy_sufficient_conditions", monogamy_sufficient_checks(&psi)?.holds()),
        ])
    })
}

/// The claim that two steerable pairs force a² + b² + c² < 1. Random sampling refutes it,
/// so this suite is kept out of "all" and is expected to report violations.
fn two_pair_necessary(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    run_samples(n, "haar", |i| {
        let r = two_steerable_necessary(&haar_random_pure(sub_seed(seed, PURE), i))?;
        Ok(vec![flag("two_pairs_need_local_information_below_1", r.holds)])
    })
}

fn complementarity(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let mut rows = run_samples(n, "haar", |i| {
        let psi = haar_random_pure(sub_seed(seed, PURE), i);
        Ok(pure_relation_records(&psi)?
            .into_iter()
            .map(|r| obs(r.relation_id, r.margin, r.satisfied))
            .collect())
    })?;
    let ghz = pure_relation_records(&named_pure("ghz"))?;
    let lhs = |id: &str| ghz.iter().find(|r| r.relation_id == id).map(|r| r.lhs).unwrap_or(f64::NAN);
    rows.push((
        "ghz".into(),
        vec![
            equal("ghz_saturates_tau_smax", lhs("tau_smax") - 3.0, 1e-9),
            equal("ghz_saturates_bell_steering_tangle", lhs("bell_steering_tangle") - 5.0, 1e-9),
        ],
    ));
    Ok(rows)
}

fn f2_obs(rho: &DensityMatrix) -> Result<Vec<Obs>> {
    let r = report(rho)?;
    let sums = [r.m(Pair::AB) + r.m(Pair::AC), r.m(Pair::AB) + r.m(Pair::BC), r.m(Pair::AC) + r.m(Pair::BC)];
    let worst = sums.iter().cloned().fold(f64::MIN, f64::max);
    Ok(vec![bound("m_pair_sums_le_2", worst, 2.0, 1e-9)])
}


fn f2_monogamy(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let mut rows = run_samples(n, "haar", |i| f2_obs(&haar_random_pure(sub_seed(seed, PURE), i).density()))?;
    rows.extend(run_samples((n / 10).max(1), "mixed", |i| {
        f2_obs(&random_mixed(sub_seed(seed, MIXED), i, mixed_rank(i))?)
    })?);
    let r = report(&named_pure("ghz").density())?;
    let ghz = (r.m(Pair::AB) + r.m(Pair::AC)).max(r.m(Pair::AB) + r.m(Pair::BC));
    rows.push(("ghz".into(), vec![equal("ghz_at_boundary_2", ghz - 2.0, 1e-9)]));
    Ok(rows)
}

fn symmetric(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    run_samples((n / 10).max(1), "symmetric", |i| {
        let r = report(&random_symmetric(sub_seed(seed, SYMMETRIC), i).density())?;
        Ok(vec![bound("symmetric_s_le_1", r.s_max, 1.0, 1e-9)])
    })
}

fn two_qubit(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    run_samples((n / 10).max(1), "two_qubit", |i| {
        let rho = haar_pure(2, sub_seed(seed, TWO_QUBIT), i).density();
        let c = concurrence(&rho)?;
        Ok(vec![equal("s_equals_1_plus_2c2", s_param(&rho)? - 1.0 - 2.0 * c * c, 1e-9)])
    })
}

fn ckw(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let mut rows = run_samples(n, "haar", |i| {
        let r = ckw_check(&haar_random_pure(sub_seed(seed, PURE), i))?;
        let focus = r.focus_margins.iter().cloned().fold(f64::MAX, f64::min);
        Ok(vec![
            obs("ckw_focus_sums_le_1", focus, focus >= -1e-9),
            obs("c2_total_le_4_3", r.total_margin, r.total_margin >= -1e-9),
        ])
    })?;
    let w = ckw_check(&named_pure("w"))?;
    rows.push(("w".into(), vec![equal("w_saturates_4_3", w.total - 4.0 / 3.0, 1e-9)]));
    Ok(rows)
}

fn gsd(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    run_samples(n, "gsd", |i| {
        let p = random_gsd(sub_seed(seed, GSD), i);
        let psi = gsd_state(&p)?;
        let direct = report(&psi.density())?.s_triple();
        let e = pure_report(&psi)?;
        let (ab, ac, bc) = gsd_s_formulas(&p);
        let s_err = [ab - direct[0], ac - direct[1], bc - direct[2]].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let (ab, ac, bc) = gsd_concurrences(&p);
        let c = e.c2_triple();
        let c_err = [ab - c[0], ac - c[1], bc - c[2]].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(vec![
            equal("s_formulas_match_matrix", s_err, 1e-8),
            equal("concurrence_formulas_match_matrix", c_err, 1e-8),
            equal("tangle_formula_matches_matrix", gsd_tau(&p) - e.tau.unwrap_or(f64::NAN), 1e-8),
        ])
    })
}

fn w_like(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let mut rows = run_samples(n, "w_like", |i| {
        let p = random_gsd_masked(sub_seed(seed, GSD + 100), i, [true, true, true, true, false]);
        let r = report(&gsd_state(&p)?.density())?;
        Ok(vec![flag("harmonic_mean_criterion_matches", w_like_monogamy(&p)? == r.monogamous())])
    })?;
    let ex = crate::families::named_gsd("w_like_example").expect("known form");
    let r = report(&gsd_state(&ex)?.density())?;
    rows.push((
        "w_like_example".into(),
        vec![flag("example_criterion_matches", w_like_monogamy(&ex)? == r.monogamous())],
    ));
    Ok(rows)
}

fn star(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let mut rows = run_samples(n, "star", |i| {
        let p = random_gsd_masked(sub_seed(seed, GSD + 200), i, [true, true, false, true, true]);
        let r = report(&gsd_state(&p)?.density())?;
        Ok(vec![flag("star_condition_matches", star_non_monogamous(&p)? == (r.steerable_count() == 2))])
    })?;
    for (name, expected) in [("star_example_1", 2usize), ("star_example_2", 1)] {
        let r = report(&named_pure(name).density())?;
        let c = r.steerable_count();
        rows.push((name.into(), vec![obs("printed_examples_pair_count", c as f64 - expected as f64, c == expected)]));
    }
    Ok(rows)
}

fn detection(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    let m = (n / 10).max(1);
    let mut rows = run_samples(m, "product", |i| {
        let psi = random_product(sub_seed(seed, PRODUCT), i);
        Ok(vec![flag("no_detection_on_products", detect_entanglement_pure(&psi)? == Detection::Inconclusive)])
    })?;
    for single in 0..3usize {
        rows.extend(run_samples(m, &format!("biseparable{single}"), |i| {
            let psi = random_biseparable(single, sub_seed(seed, BISEP + 16 * single as u64), i)?;
            Ok(vec![flag("no_genuine_detection_on_biseparable", detect_genuine_pure(&psi)? == Detection::Inconclusive)])
        })?);
    }
    Ok(rows)
}

fn v_scaling(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    use rand::Rng;
    run_samples((n / 10).max(1), "noisy", |i| {
        let s = sub_seed(seed, NOISE);
        let psi = haar_random_pure(s, i);
        let v: f64 = rng_for(s ^ 1, i).random_range(0.0..=1.0);
        let base = report(&psi.density())?.s_triple();
        let noisy = report(&add_white_noise(&psi, v)?)?.s_triple();
        let err = (0..3).fold(0.0f64, |m, k| m.max((noisy[k] - v * v * base[k]).abs()));
        Ok(vec![equal("s_scales_as_v_squared", err, 1e-10)])
    })
}

pub const ORACLE_BUDGET: usize = 5000;

fn oracle(n: usize, seed: u64) -> Result<Vec<(String, Vec<Obs>)>> {
    run_samples((n / 100).max(1), "two_qubit", |i| {
        let s = sub_seed(seed, ORACLE);
        let rank = 1 + (i % 4) as usize;
        let rho = random_mixed_on(2, s, i, rank)?;
        let mut out = Vec::new();
        for (k, (reach, above)) in [(3usize, ("f3_oracle_reaches_analytic", "f3_oracle_not_above")),
            (2, ("f2_oracle_reaches_analytic", "f2_oracle_not_above"))]
        {
            let analytic = f_max(&rho, k)?;
            let found = f_max_oracle(&rho, k, ORACLE_BUDGET, s ^ i)?.value;
            out.push(obs(reach, 1e-4 - (analytic - found).abs(), (analytic - found).abs() < 1e-4));
            out.push(bound(above, found, analytic, 1e-9));
        }
        Ok(out)
    })
}

type SuiteFn = fn(usize, u64) -> Result<Vec<(String, Vec<Obs>)>>;

fn suite_fn(name: &str) -> Option<SuiteFn> {
    Some(match name {
        "tradeoff" => tradeoff,
        "pair-count" => pair_count,
        "ordering" => ordering,
        "implications" => implications,
        "complementarity" => complementarity,
        "f2-monogamy" => f2_monogamy,
        "symmetric" => symmetric,
        "two-qubit" => two_qubit,
        "ckw" => ckw,
        "gsd" => gsd,
        "w-like" => w_like,
        "star" => star,
        "detection" => detection,
        "v-scaling" => v_scaling,
        "oracle" => oracle,
        "two-pair-necessary" => two_pair_necessary,
        _ => return None,
    })
}

/// Runs one named suite (or "all") on a pool of `jobs` workers.
pub fn run_suite(name: &str, samples: usize, seed: u64, jobs: usize) -> std::result::Result<Vec<SuiteSummary>, CliError> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if suite_fn(name).is_some() {
        vec![name]
    } else {
        return Err(CliError::UnknownSuite(name.to_string()));
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| {
        names
            .iter()
            .map(|n| {
                let rows = suite_fn(n).expect("checked above")(samples, seed)?;
                Ok(fold(n, samples, seed, rows))
            })
            .collect::<Result<Vec<_>>>()
    })
    .map_err(|e| CliError::Validation(e.to_string()))
}
