//! Seeded generation of test instances.
//!
//! Every trial draws from its own ChaCha stream, keyed by `(seed, stream)`,
//! so trials can run in any order or in parallel and still reproduce.

mod falsify;

pub use falsify::{falsify, FalsifyOutcome};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{block_diagonal, ComplexMatrix, HermitianMatrix, C64};
use crate::subalgebra::{relative_distance_to_subalgebra, BlockPartition};

pub type TrialRng = ChaCha8Rng;

/// Generator for one trial: stream `stream` of the ChaCha keystream seeded by `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub n: usize,
    pub partition: BlockPartition,
    /// Positive spectrum bounds `[lo, hi]` for sampled operators.
    pub spectrum: (f64, f64),
    /// Rank of sampled singular PSD matrices.
    pub rank: Option<usize>,
}

pub const MAX_DIM: usize = 32;

impl SamplerConfig {
    pub fn new(n: usize) -> Self {
        Self { n, partition: BlockPartition::full(n), spectrum: (0.1, 10.0), rank: None }
    }

    pub fn with_partition(mut self, partition: BlockPartition) -> Self {
        self.partition = partition;
        self
    }

    pub fn with_spectrum(mut self, lo: f64, hi: f64) -> Self {
        self.spectrum = (lo, hi);
        self
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.spectrum;
        if self.n == 0 || self.n > MAX_DIM {
            return Err(Error::Precondition(format!("dimension {} outside 1..={MAX_DIM}", self.n)));
        }
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Precondition(format!("spectrum range [{lo}, {hi}] is not a positive interval")));
        }
        if self.partition.total() != self.n {
            return Err(Error::Shape(format!("partition total {} != n = {}", self.partition.total(), self.n)));
        }
        if let Some(r) = self.rank {
            if r > self.n {
                return Err(Error::Precondition(format!("rank {r} exceeds n = {}", self.n)));
            }
        }
        Ok(())
    }

    fn log_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.spectrum;
        if lo == hi {
            return lo;
        }
        (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn random_complex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Hermitian matrix with Gaussian entries, normalized to unit Frobenius norm.
pub fn random_hermitian_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let g = random_complex(n, rng);
    let h = HermitianMatrix::hermitize(g);
    let norm = h.frobenius();
    if norm == 0.0 {
        HermitianMatrix::identity(n).scale(1.0 / (n as f64).sqrt())
    } else {
        h.scale(1.0 / norm)
    }
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let z = random_complex(n, rng);
        let qr = z.qr();
        let r = qr.r();
        let mut q = qr.q();
        let mut degenerate = false;
        for j in 0..n {
            let d = r[(j, j)];
            let norm = d.norm();
            if norm < 1e-300 {
                degenerate = true;
                break;
            }
            let phase = d / norm;
            for x in q.column_mut(j).iter_mut() {
                *x *= phase;
            }
        }
        if !degenerate {
            return q;
        }
    }
}

/// `U diag(s) U*` with Haar `U`.
pub fn with_spectrum<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> HermitianMatrix {
    let u = haar_unitary(values.len(), rng);
    HermitianMatrix::from_real_diagonal(values).congruence(&u)
}

/// Positive definite matrix whose eigenvalues are log-uniform in the
/// configured range.
pub fn random_pd<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> HermitianMatrix {
    let values: Vec<f64> = (0..cfg.n).map(|_| cfg.log_uniform(rng)).collect();
    with_spectrum(&values, rng)
}

/// PSD matrix with exactly `n − rank` zero eigenvalues (`rank` from the
/// config, default `n − 1`).
pub fn random_psd_singular<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> HermitianMatrix {
    let rank = cfg.rank.unwrap_or(cfg.n.saturating_sub(1)).min(cfg.n);
    let values: Vec<f64> = (0..cfg.n)
        .map(|i| if i < rank { cfg.log_uniform(rng) } else { 0.0 })
        .collect();
    with_spectrum(&values, rng)
}

/// Hermitian matrix with eigenvalues uniform in `[−hi, hi]`.
pub fn random_hermitian<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> HermitianMatrix {
    let hi = cfg.spectrum.1;
    let values: Vec<f64> = (0..cfg.n).map(|_| (2.0 * rng.random::<f64>() - 1.0) * hi).collect();
    with_spectrum(&values, rng)
}

/// Block-diagonal matrix with each block drawn by `block`.
pub fn random_member_with<R, F>(partition: &BlockPartition, rng: &mut R, mut block: F) -> HermitianMatrix
where
    R: Rng + ?Sized,
    F: FnMut(usize, &mut R) -> HermitianMatrix,
{
    let blocks: Vec<HermitianMatrix> = partition.sizes().iter().map(|&k| block(k, rng)).collect();
    block_diagonal(&blocks)
}

/// Positive definite member of the block subalgebra, spectrum in range.
pub fn random_member<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> HermitianMatrix {
    random_member_with(&cfg.partition, rng, |k, rng| {
        let sub = SamplerConfig { n: k, partition: BlockPartition::full(k), ..cfg.clone() };
        random_pd(&sub, rng)
    })
}

/// Redraws `draw` until the sample has relative distance at least
/// `min_distance` from the block subalgebra.
pub fn reject_members<R, F>(partition: &BlockPartition, min_distance: f64, rng: &mut R, mut draw: F) -> Result<HermitianMatrix>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> HermitianMatrix,
{
    for _ in 0..1000 {
        let a = draw(rng);
        if relative_distance_to_subalgebra(a.as_matrix(), partition)? >= min_distance {
            return Ok(a);
        }
    }
    Err(Error::Precondition(format!(
        "could not draw a matrix at relative distance ≥ {min_distance} from the subalgebra {partition}"
    )))
}

/// Positive definite matrix at relative Frobenius distance at least
/// `min_distance` from the block subalgebra.
pub fn random_nonmember<R: Rng + ?Sized>(cfg: &SamplerConfig, min_distance: f64, rng: &mut R) -> Result<HermitianMatrix> {
    reject_members(&cfg.partition, min_distance, rng, |rng| random_pd(cfg, rng))
}

/// Nonnegative weights summing to one.
pub fn random_weights<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fkdet::fk_det_hermitian;
    use crate::linalg::{eigenvalues, is_pd, ToleranceConfig};
    use crate::subalgebra::pinch_hermitian;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = trial_rng(1, 0);
        for n in 1..=16 {
            let u = haar_unitary(n, &mut rng);
            let residual = (u.adjoint() * &u - ComplexMatrix::identity(n, n)).norm();
            assert!(residual <= 1e-12, "n={n} residual={residual}");
        }
        let u = haar_unitary(1, &mut rng);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_columns_have_unit_norm_and_uniform_phase() {
        let mut rng = trial_rng(2, 0);
        let mut max_dev: f64 = 0.0;
        let mut phase_sum = C64::new(0.0, 0.0);
        for _ in 0..1000 {
            let u = haar_unitary(3, &mut rng);
            for j in 0..3 {
                max_dev = max_dev.max((u.column(j).norm() - 1.0).abs());
            }
            phase_sum += u[(0, 0)] / u[(0, 0)].norm();
        }
        assert!(max_dev <= 1e-12);
        // phases of a Haar entry are uniform: the mean phasor vanishes
        assert!((phase_sum / 1000.0).norm() < 0.1);
    }

    #[test]
    fn pd_sampler_honours_spectrum() {
        let mut rng = trial_rng(3, 0);
        let cfg = SamplerConfig::new(6).with_spectrum(0.5, 4.0);
        let a = random_pd(&cfg, &mut rng);
        let ev = eigenvalues(&a).unwrap();
        assert!(ev[0] >= 0.5 - 1e-10 && ev[5] <= 4.0 + 1e-10);

        let flat = SamplerConfig::new(4).with_spectrum(1.0, 1.0);
        let a = random_pd(&flat, &mut rng);
        assert!((a.as_matrix() - ComplexMatrix::identity(4, 4)).norm() < 1e-13);
    }

    #[test]
    fn requested_spectrum_is_reproduced() {
        let mut rng = trial_rng(4, 0);
        let values = [0.3, 1.0, 2.5, 7.0];
        let a = with_spectrum(&values, &mut rng);
        let ev = eigenvalues(&a).unwrap();
        for (x, y) in ev.iter().zip(values) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(crate::linalg::hermiticity_residual(a.as_matrix()) <= 1e-13);
    }

    #[test]
    fn singular_sampler_rank() {
        let t = ToleranceConfig::default();
        let mut rng = trial_rng(5, 0);
        let zero = random_psd_singular(&SamplerConfig::new(3).with_rank(0), &mut rng);
        assert_eq!(zero.frobenius(), 0.0);
        let full = random_psd_singular(&SamplerConfig::new(3).with_rank(3), &mut rng);
        assert!(is_pd(&full, &t).unwrap());
        for rank in 0..4 {
            let a = random_psd_singular(&SamplerConfig::new(4).with_rank(rank), &mut rng);
            assert_eq!(fk_det_hermitian(&a, &t).unwrap().value, 0.0);
        }
    }

    #[test]
    fn member_and_nonmember() {
        let t = ToleranceConfig::default();
        let mut rng = trial_rng(6, 0);
        let cfg = SamplerConfig::new(5).with_partition(BlockPartition::new(vec![2, 3]).unwrap());
        let m = random_member(&cfg, &mut rng);
        assert_eq!(&pinch_hermitian(&m, &cfg.partition).unwrap(), &m);
        assert!(is_pd(&m, &t).unwrap());
        let x = random_nonmember(&cfg, 0.1, &mut rng).unwrap();
        assert!(relative_distance_to_subalgebra(x.as_matrix(), &cfg.partition).unwrap() >= 0.1);
        assert!(is_pd(&x, &t).unwrap());
        let full = SamplerConfig::new(3);
        assert!(random_nonmember(&full, 0.1, &mut rng).is_err());
    }

    #[test]
    fn streams_are_reproducible() {
        let a = random_complex(4, &mut trial_rng(9, 3));
        let b = random_complex(4, &mut trial_rng(9, 3));
        let c = random_complex(4, &mut trial_rng(9, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
