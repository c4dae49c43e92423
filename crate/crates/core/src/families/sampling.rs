//! Seeded random states. Every sampler draws from its own ChaCha stream selected by
//! (seed, index), so sample `i` is the same regardless of how a sweep is partitioned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::GsdParams;
use crate::error::{Error, Result};
use crate::qlinalg::{ComplexMatrix, DensityMatrix, PureState, C64};

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn random_pure(rng: &mut ChaCha8Rng, qubits: usize) -> PureState {
    loop {
        if let Ok(psi) = PureState::normalized(gaussian_vector(rng, 1 << qubits)) {
            return psi;
        }
    }
}

/// Haar-random pure state on `qubits` qubits.
pub fn haar_pure(qubits: usize, seed: u64, index: u64) -> PureState {
    random_pure(&mut rng_for(seed, index), qubits)
}

/// Haar-random three-qubit pure state.
pub fn haar_random_pure(seed: u64, index: u64) -> PureState {
    haar_pure(3, seed, index)
}

/// Reduced state of a Haar-random pure state on the three qubits and a `rank`-level
/// ancilla. Equivalently G G† / Tr(G G†) for an 8×rank complex Gaussian G.
pub fn random_mixed(seed: u64, index: u64, rank: usize) -> Result<DensityMatrix> {
    random_mixed_on(3, seed, index, rank)
}

/// As [`random_mixed`] on `qubits` qubits, rank in [1, 2^qubits].
pub fn random_mixed_on(qubits: usize, seed: u64, index: u64, rank: usize) -> Result<DensityMatrix> {
    let d = 1 << qubits;
    if !(1..=d).contains(&rank) {
        return Err(Error::BadRank(rank));
    }
    let mut rng = rng_for(seed, index);
    let g = gaussian_vector(&mut rng, d * rank);
    let mut m = ComplexMatrix::zeros(d);
    let mut trace = 0.0;
    for i in 0..d {
        for j in 0..d {
            let v: C64 = (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum();
            m[(i, j)] = v;
        }
        trace += m[(i, i)].re;
    }
    Ok(DensityMatrix::from_matrix_unchecked(m.scale(1.0 / trace), qubits))
}

/// |x⟩⊗|y⟩⊗|z⟩ with Haar-random single-qubit factors.
pub fn random_product(seed: u64, index: u64) -> PureState {
    let mut rng = rng_for(seed, index);
    let a = random_pure(&mut rng, 1);
    let b = random_pure(&mut rng, 1);
    let c = random_pure(&mut rng, 1);
    a.tensor(&b).and_then(|ab| ab.tensor(&c)).expect("product of unit vectors")
}

/// Haar-random two-qubit state on the pair (`single` excluded) times a random state
/// of qubit `single`.
pub fn random_biseparable(single: usize, seed: u64, index: u64) -> Result<PureState> {
    if single > 2 {
        return Err(Error::BadSubsystemSet(vec![single]));
    }
    let mut rng = rng_for(seed, index);
    let pair = random_pure(&mut rng, 2);
    let one = random_pure(&mut rng, 1);
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    for (idx, amp) in amps.iter_mut().enumerate() {
        let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        let rest: Vec<usize> = (0..3).filter(|&q| q != single).map(|q| bits[q]).collect();
        *amp = one.amplitudes()[bits[single]] * pair.amplitudes()[2 * rest[0] + rest[1]];
    }
    PureState::normalized(amps)
}

/// Projection of a Haar-random state onto the permutation-symmetric subspace.
pub fn random_symmetric(seed: u64, index: u64) -> PureState {
    let mut rng = rng_for(seed, index);
    loop {
        let v = gaussian_vector(&mut rng, 8);
        // symmetric subspace is spanned by the Dicke states; average over Hamming weight
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        for w in 0..=3u32 {
            let members: Vec<usize> = (0..8).filter(|i: &usize| i.count_ones() == w).collect();
            let avg = members.iter().map(|&i| v[i]).sum::<C64>() / members.len() as f64;
            for &i in &members {
                amps[i] = avg;
            }
        }
        if let Ok(psi) = PureState::normalized(amps) {
            return psi;
        }
    }
}

/// Random canonical-form parameters: |Gaussian| amplitudes normalized, φ uniform in [0, π].
pub fn random_gsd(seed: u64, index: u64) -> GsdParams {
    random_gsd_masked(seed, index, [true; 5])
}

/// As [`random_gsd`] with the amplitudes outside `mask` set to zero.
pub fn random_gsd_masked(seed: u64, index: u64, mask: [bool; 5]) -> GsdParams {
    let mut rng = rng_for(seed, index);
    loop {
        let mut l = [0.0f64; 5];
        for (x, keep) in l.iter_mut().zip(mask) {
            let g: f64 = rng.sample(StandardNormal);
            if keep {
                *x = g.abs();
            }
        }
        let phi = rng.random_range(0.0..=std::f64::consts::PI);
        let n = l.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            let l = l.map(|x| x / n);
            if let Ok(p) = GsdParams::with_tolerance(l, phi, 1e-12) {
                return p;
            }
        }
    }
}
