use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::Error;
use crate::marked::MarkedSet;

/// Largest supported index-register size. A register holds `2^(n+1)` complex
/// amplitudes, so n = 24 tops out at a 512 MiB state.
pub const MAX_INDEX_QUBITS: usize = 24;

/// Register index of the basis state `|item> (x) |workspace>`.
///
/// The workspace qubit is the least-significant bit, so the workspace-0
/// amplitudes are the even register indices and the workspace-1 amplitudes
/// are the odd ones.
#[inline]
pub fn basis_index(item: usize, workspace: u8) -> usize {
    2 * item + (workspace & 1) as usize
}

/// Inverse of [`basis_index`]: recover `(item, workspace)` from a register
/// index.
#[inline]
pub fn split_basis_index(k: usize) -> (usize, u8) {
    (k >> 1, (k & 1) as u8)
}

/// Exact complex state vector of an `n + 1` qubit register: `n` index qubits
/// spanning the `N = 2^n` list items plus one workspace qubit holding the
/// oracle output.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_index_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Prepare the register `|0...0>|0>` and apply a Hadamard to each of the
    /// `n` index qubits: every `(item, workspace = 0)` amplitude becomes
    /// `1/sqrt(N)` and every workspace-1 amplitude is zero.
    pub fn prepared_register(n_index_qubits: usize) -> Result<Self, Error> {
        if n_index_qubits == 0 || n_index_qubits > MAX_INDEX_QUBITS {
            return Err(Error::QubitCount {
                n: n_index_qubits,
                max: MAX_INDEX_QUBITS,
            });
        }
        let items = 1usize << n_index_qubits;
        let amp = Complex64::new(1.0 / (items as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * items];
        for i in 0..items {
            amps[basis_index(i, 0)] = amp;
        }
        Ok(Self {
            n_index_qubits,
            amps,
        })
    }

    /// Build a state from raw amplitudes. The vector length must be
    /// `2^(n + 1)`; normalization is the caller's responsibility.
    pub fn from_amplitudes(n_index_qubits: usize, amps: Vec<Complex64>) -> Result<Self, Error> {
        if n_index_qubits == 0 || n_index_qubits > MAX_INDEX_QUBITS {
            return Err(Error::QubitCount {
                n: n_index_qubits,
                max: MAX_INDEX_QUBITS,
            });
        }
        let expected = 2usize << n_index_qubits;
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                state_len: amps.len(),
                matrix_dim: expected,
            });
        }
        Ok(Self {
            n_index_qubits,
            amps,
        })
    }

    pub fn n_index_qubits(&self) -> usize {
        self.n_index_qubits
    }

    /// N, the number of list items the index register spans.
    pub fn items(&self) -> usize {
        1 << self.n_index_qubits
    }

    /// Full amplitude array of length `2N`, ordered by [`basis_index`].
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, item: usize, workspace: u8) -> Complex64 {
        self.amps[basis_index(item, workspace)]
    }

    /// Sum of `|amplitude|^2` over the whole register; 1 for a normalized
    /// state.
    pub fn total_probability(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest `|Im(amplitude)|` across the register. The search pipeline is
    /// real-valued, so this stays at rounding level throughout.
    pub fn max_abs_imag(&self) -> f64 {
        self.amps.iter().map(|a| a.im.abs()).fold(0.0, f64::max)
    }

    /// Scale the state to unit norm.
    pub fn normalize(&mut self) {
        let norm = self.total_probability().sqrt();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    /// Probability that measuring the index qubits yields one of the listed
    /// items, counting both workspace values for each item.
    pub fn probability_of_index_set(&self, indices: &MarkedSet) -> Result<f64, Error> {
        let items = self.items();
        if let Some(&last) = indices.members().last() {
            if last >= items {
                return Err(Error::IndexOutOfRange { index: last, items });
            }
        }
        Ok(indices
            .members()
            .iter()
            .map(|&i| {
                self.amps[basis_index(i, 0)].norm_sqr() + self.amps[basis_index(i, 1)].norm_sqr()
            })
            .sum())
    }

    /// Measure the full register once: returns a register index `k` drawn
    /// with probability `|amplitude_k|^2`, deterministically for a fixed
    /// seed. Sampling inverts the cumulative distribution of
    /// `|amplitude|^2`.
    pub fn sample_measurement(&self, rng_seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        self.sample_with(&mut rng)
    }

    /// Draw `shots` measurements from one seeded generator and return the
    /// hit count per register index.
    pub fn sample_counts(&self, rng_seed: u64, shots: usize) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let cumulative = self.cumulative_probabilities();
        let total = *cumulative.last().expect("state is never empty");
        let mut counts = vec![0u64; self.amps.len()];
        for _ in 0..shots {
            let target = rng.gen::<f64>() * total;
            let k = match cumulative.partition_point(|&c| c <= target) {
                k if k < counts.len() => k,
                _ => counts.len() - 1,
            };
            counts[k] += 1;
        }
        counts
    }

    fn sample_with(&self, rng: &mut ChaCha8Rng) -> usize {
        let cumulative = self.cumulative_probabilities();
        let total = *cumulative.last().expect("state is never empty");
        let target = rng.gen::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= target);
        k.min(self.amps.len() - 1)
    }

    fn cumulative_probabilities(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.amps
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect()
    }

    /// Apply a dense operator as a plain matrix-vector product. This is the
    /// reference path for validating the matrix-free operators; it is
    /// O(dim^2) and intended for small registers only.
    pub fn apply_dense_unitary(&mut self, matrix: &DenseMatrix) -> Result<(), Error> {
        if matrix.dim() != self.amps.len() {
            return Err(Error::DimensionMismatch {
                state_len: self.amps.len(),
                matrix_dim: matrix.dim(),
            });
        }
        self.amps = matrix.apply(&self.amps)?;
        Ok(())
    }

    /// Max elementwise `|self - other|`, for cross-path comparisons.
    pub fn max_abs_difference(&self, other: &StateVector) -> f64 {
        assert_eq!(self.amps.len(), other.amps.len());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
