//! Brute-force maximizer of the CJWR functional, independent of the eigenvalue formulas.
//!
//! For fixed Bob axes b̂_k the best Alice axes are â_k = T b̂_k / |T b̂_k|, which turns the
//! functional into (1/√n) Σ_k |T b̂_k|. The remaining search is over Bob's orthonormal
//! frame, i.e. over SO(3): uniformly random rotations first, then golden-section line
//! searches on the three body-frame rotation angles around the best frame found.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{MeasurementSettings, Vec3};
use crate::bloch::{decompose2, frobenius_sq, mat_vec, Mat3};
use crate::error::{Error, Result};
use crate::qlinalg::DensityMatrix;

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const LINE_SEARCH_STEPS: usize = 32;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: f64,
    /// Maximizing directions (Alice set analytically for Bob's best frame).
    pub settings: Option<MeasurementSettings>,
    /// Number of frame evaluations spent.
    pub evaluations: usize,
}

type Rot = [[f64; 3]; 3];

const IDENTITY: Rot = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn rot_mul(a: &Rot, b: &Rot) -> Rot {
    let mut o = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            o[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    o
}

/// Rotation by θ about the unit vector `u` (Rodrigues).
fn rotation_about(u: &Vec3, theta: f64) -> Rot {
    let (s, c) = theta.sin_cos();
    let k = 1.0 - c;
    let [x, y, z] = *u;
    [
        [c + x * x * k, x * y * k - z * s, x * z * k + y * s],
        [y * x * k + z * s, c + y * y * k, y * z * k - x * s],
        [z * x * k - y * s, z * y * k + x * s, c + z * z * k],
    ]
}

/// Axis and angle of a rotation; None near the identity.
fn axis_angle(r: &Rot) -> Option<(Vec3, f64)> {
    let v = [r[2][1] - r[1][2], r[0][2] - r[2][0], r[1][0] - r[0][1]];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n < 1e-14 {
        return None;
    }
    let trace = r[0][0] + r[1][1] + r[2][2];
    Some(([v[0] / n, v[1] / n, v[2] / n], n.atan2(trace - 1.0)))
}

fn transpose(r: &Rot) -> Rot {
    let mut o = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            o[i][j] = r[j][i];
        }
    }
    o
}


/// Uniform rotation from a normalized Gaussian quaternion.
fn random_rotation(rng: &mut ChaCha8Rng) -> Rot {
    let mut q = [0.0f64; 4];
    loop {
        for x in q.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            q.iter_mut().for_each(|x| *x /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn column(r: &Rot, k: usize) -> Vec3 {
    [r[0][k], r[1][k], r[2][k]]
}

struct Objective<'a> {
    t: &'a Mat3,
    n: usize,
    evaluations: usize,
}

impl Objective<'_> {
    fn eval(&mut self, frame: &Rot) -> f64 {
        self.evaluations += 1;
        let sum: f64 = (0..self.n)
            .map(|k| {
                let tb = mat_vec(self.t, &column(frame, k));
                (tb[0] * tb[0] + tb[1] * tb[1] + tb[2] * tb[2]).sqrt()
            })
            .sum();
        sum / (self.n as f64).sqrt()
    }
}

/// Maximizes F_n numerically within `budget` frame evaluations, reproducibly under `seed`.
pub fn f_max_oracle(rho: &DensityMatrix, n: usize, budget: usize, seed: u64) -> Result<OracleResult> {
    if !(1..=3).contains(&n) {
        return Err(Error::BadSettings(format!("oracle supports 1 to 3 settings, got {n}")));
    }
    let t = decompose2(rho)?.t;
    Ok(maximize(&t, n, budget.max(1), seed))
}

pub(crate) fn maximize(t: &Mat3, n: usize, budget: usize, seed: u64) -> OracleResult {
    if frobenius_sq(t) == 0.0 {
        return OracleResult {
            value: 0.0,
            settings: None,
            evaluations: 0,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut obj = Objective {
        t,
        n,
        evaluations: 0,
    };

    let random_budget = (budget / 4).max(1);
    // candidates are drawn up front so the sequence depends only on the seed
    let candidates: Vec<Rot> = (0..random_budget).map(|_| random_rotation(&mut rng)).collect();
    let mut best = candidates[0];
    let mut best_val = f64::MIN;
    for r in &candidates {
        let v = obj.eval(r);
        if v > best_val {
            best_val = v;
            best = *r;
        }
    }

    // per-axis search window, widened to a few times the last accepted step
    let mut half_width = [std::f64::consts::FRAC_PI_2; 3];
    let line_cost = LINE_SEARCH_STEPS + 2;
    'refine: loop {
        let start = best;
        for axis in 0..3 {
            if obj.evaluations + line_cost > budget {
                break 'refine;
            }
            let h = half_width[axis];
            let e = column(&IDENTITY, axis);
            let (theta, v) = golden_search(&mut obj, &best, &e, h);
            if v > best_val {
                best_val = v;
                best = rot_mul(&best, &rotation_about(&e, theta));
                half_width[axis] = (4.0 * theta.abs()).clamp(1e-9, std::f64::consts::FRAC_PI_2);
            } else {
                half_width[axis] = (h * 0.5).max(1e-9);
            }
        }
        // extrapolate along the net rotation of the sweep
        if let Some((u, angle)) = axis_angle(&rot_mul(&transpose(&start), &best)) {
            if obj.evaluations + line_cost > budget {
                break;
            }
            let h = (4.0 * angle.abs()).min(std::f64::consts::FRAC_PI_2);
            let (theta, v) = golden_search(&mut obj, &best, &u, h);
            if v > best_val {
                best_val = v;
                best = rot_mul(&best, &rotation_about(&u, theta));
            }
        }
    }

    let bob: Vec<Vec3> = (0..n).map(|k| column(&best, k)).collect();
    let alice: Vec<Vec3> = bob
        .iter()
        .map(|b| {
            let tb = mat_vec(t, b);
            let norm = (tb[0] * tb[0] + tb[1] * tb[1] + tb[2] * tb[2]).sqrt();
            if norm > 0.0 {
                [tb[0] / norm, tb[1] / norm, tb[2] / norm]
            } else {
                [1.0, 0.0, 0.0]
            }
        })
        .collect();
    OracleResult {
        value: best_val,
        settings: MeasurementSettings::new(alice, bob).ok(),
        evaluations: obj.evaluations,
    }
}

/// Golden-section maximization of θ ↦ F(frame · R_u(θ)) on [−h, h].
fn golden_search(obj: &mut Objective<'_>, frame: &Rot, u: &Vec3, h: f64) -> (f64, f64) {
    let mut f = |theta: f64| obj.eval(&rot_mul(frame, &rotation_about(u, theta)));
    let (mut lo, mut hi) = (-h, h);
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..LINE_SEARCH_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{partial_trace, PureState};
    use crate::steering::{cjwr_value, f_max};

    fn bell() -> DensityMatrix {
        PureState::from_real_terms(2, &[(0b00, 1.0), (0b11, 1.0)])
            .unwrap()
            .density()
    }

    #[test]
    fn bell_state_reaches_sqrt3() {
        let r = f_max_oracle(&bell(), 3, 2000, 1).unwrap();
        assert!((r.value - 3f64.sqrt()).abs() < 1e-6);
        assert!(r.evaluations <= 2000);
    }

    #[test]
    fn psi_abc_pair_reaches_analytic() {
        let psi = PureState::from_real_terms(3, &[(0b100, 1.0), (0b010, 1.0), (0b001, 2f64.sqrt())])
            .unwrap();
        let rac = partial_trace(&psi.density(), &[0, 2]).unwrap();
        let r = f_max_oracle(&rac, 3, 5000, 9).unwrap();
        assert!((r.value - 1.25f64.sqrt()).abs() < 1e-4);
        assert!(r.value <= f_max(&rac, 3).unwrap() + 1e-9);
    }

    #[test]
    fn maximally_mixed_is_zero() {
        let r = f_max_oracle(&DensityMatrix::maximally_mixed(2), 3, 100, 0).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.settings.is_none());
    }

    #[test]
    fn returned_settings_attain_value() {
        let r = f_max_oracle(&bell(), 2, 1000, 3).unwrap();
        let mu = r.settings.unwrap();
        assert!((cjwr_value(&bell(), &mu).unwrap() - r.value).abs() < 1e-12);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = f_max_oracle(&bell(), 2, 500, 42).unwrap();
        let b = f_max_oracle(&bell(), 2, 500, 42).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn axis_angle_round_trip() {
        let u = [0.6, 0.0, 0.8];
        let (v, a) = axis_angle(&rotation_about(&u, 0.7)).unwrap();
        assert!((a - 0.7).abs() < 1e-12);
        assert!(v.iter().zip(u).all(|(x, y)| (x - y).abs() < 1e-12));
        assert!(axis_angle(&IDENTITY).is_none());
    }

    #[test]
    fn rotations_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let r = random_rotation(&mut rng);
            let p = rot_mul(&r, &[[r[0][0], r[1][0], r[2][0]], [r[0][1], r[1][1], r[2][1]], [r[0][2], r[1][2], r[2][2]]]);
            for i in 0..3 {
                for j in 0..3 {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((p[i][j] - e).abs() < 1e-12);
                }
            }
        }
    }
}
