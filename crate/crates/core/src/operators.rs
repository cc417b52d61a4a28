//! The search algorithm's operators and iterated pipelines.
//!
//! The oracle swaps each marked item's workspace pair. The partial diffusion
//! operator inverts the workspace-0 amplitudes about their subspace mean and
//! negates the workspace-1 amplitudes; both are matrix-free O(N) passes over
//! the register. A dense reference build of the partial diffusion operator
//! from its defining product is provided for cross-path validation, along
//! with a standard Grover pipeline (phase oracle plus full inversion about
//! the mean) used as the comparison baseline.

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::Error;
use crate::marked::MarkedSet;
use crate::statevector::{basis_index, StateVector};

/// Largest register for which the dense reference operator is constructed.
pub const MAX_DENSE_INDEX_QUBITS: usize = 8;

fn check_same_register(state: &StateVector, marked: &MarkedSet) -> Result<(), Error> {
    if state.n_index_qubits() != marked.n_index_qubits() {
        return Err(Error::QubitCountMismatch {
            state_qubits: state.n_index_qubits(),
            other_qubits: marked.n_index_qubits(),
        });
    }
    Ok(())
}

/// Apply the oracle: `|i>|w| -> |i>|w xor f(i)>`. For every marked item the
/// two workspace amplitudes swap; everything else is untouched. Applying it
/// twice is the identity, exactly.
pub fn apply_oracle(state: &mut StateVector, marked: &MarkedSet) -> Result<(), Error> {
    check_same_register(state, marked)?;
    let amps = state.amplitudes_mut();
    for &i in marked.members() {
        amps.swap(basis_index(i, 0), basis_index(i, 1));
    }
    Ok(())
}

/// Apply the partial diffusion operator: invert the workspace-0 amplitudes
/// about their mean and negate the workspace-1 amplitudes. One strided mean
/// plus two strided passes, O(N).
pub fn apply_partial_diffusion(state: &mut StateVector) {
    partial_diffusion_signed(state, -1.0);
}

/// Partial diffusion with a configurable workspace-1 sign. The correct
/// operator uses -1; +1 is a deliberately broken variant kept as a negative
/// control for the cross-validation report.
pub(crate) fn partial_diffusion_signed(state: &mut StateVector, workspace_sign: f64) {
    let items = state.items();
    let amps = state.amplitudes_mut();
    let mean = strided_pairwise_sum(amps, 0) / items as f64;
    let twice_mean = 2.0 * mean;
    for i in 0..items {
        let even = basis_index(i, 0);
        amps[even] = twice_mean - amps[even];
        amps[even + 1] *= workspace_sign;
    }
}

/// Grover's diffusion on the index qubits: inversion about the mean applied
/// independently within the workspace-0 and workspace-1 subspaces.
pub fn apply_grover_diffusion(state: &mut StateVector) {
    let items = state.items();
    let amps = state.amplitudes_mut();
    let twice_mean_0 = 2.0 * strided_pairwise_sum(amps, 0) / items as f64;
    let twice_mean_1 = 2.0 * strided_pairwise_sum(amps, 1) / items as f64;
    for i in 0..items {
        let even = basis_index(i, 0);
        amps[even] = twice_mean_0 - amps[even];
        amps[even + 1] = twice_mean_1 - amps[even + 1];
    }
}

/// Phase-marking oracle for the Grover baseline: negate both workspace
/// amplitudes of every marked item. Involution.
pub fn apply_phase_oracle(state: &mut StateVector, marked: &MarkedSet) -> Result<(), Error> {
    check_same_register(state, marked)?;
    let amps = state.amplitudes_mut();
    for &i in marked.members() {
        let even = basis_index(i, 0);
        amps[even] = -amps[even];
        amps[even + 1] = -amps[even + 1];
    }
    Ok(())
}

/// Sum of the workspace-`w` amplitudes (the stride-2 slice starting at `w`),
/// accumulated pairwise so the rounding error stays logarithmic in N.
fn strided_pairwise_sum(amps: &[Complex64], workspace: u8) -> Complex64 {
    fn sum_range(amps: &[Complex64], start: usize, count: usize) -> Complex64 {
        if count <= 32 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..count {
                acc += amps[start + 2 * j];
            }
            return acc;
        }
        let half = count / 2;
        sum_range(amps, start, half) + sum_range(amps, start + 2 * half, count - half)
    }
    sum_range(amps, workspace as usize, amps.len() / 2)
}

/// Build the partial diffusion operator literally from its defining product
/// `(H^n (x) I) (2|0><0| - I) (H^n (x) I)` over the `2N`-dimensional
/// register space. Reference-only: O(4^n) storage and O(8^n) construction,
/// capped at `n <= 8`.
pub fn build_partial_diffusion_dense(n_index_qubits: usize) -> Result<DenseMatrix, Error> {
    if n_index_qubits == 0 {
        return Err(Error::QubitCount {
            n: n_index_qubits,
            max: MAX_DENSE_INDEX_QUBITS,
        });
    }
    if n_index_qubits > MAX_DENSE_INDEX_QUBITS {
        return Err(Error::DenseTooLarge {
            n: n_index_qubits,
            max: MAX_DENSE_INDEX_QUBITS,
        });
    }
    let items = 1usize << n_index_qubits;
    let dim = 2 * items;

    // H^n (x) I: entry ((i, w), (i', w')) = delta_{w w'} (+-1)/sqrt(N), the
    // sign being the parity of popcount(i & i').
    let scale = 1.0 / (items as f64).sqrt();
    let mut hadamard = DenseMatrix::zeros(dim);
    for i in 0..items {
        for j in 0..items {
            let sign = if (i & j).count_ones() % 2 == 0 {
                scale
            } else {
                -scale
            };
            let entry = Complex64::new(sign, 0.0);
            for w in 0..2u8 {
                hadamard[(basis_index(i, w), basis_index(j, w))] = entry;
            }
        }
    }

    // 2|0><0| - I over the full register space.
    let mut reflector = DenseMatrix::zeros(dim);
    for k in 0..dim {
        reflector[(k, k)] = Complex64::new(-1.0, 0.0);
    }
    reflector[(0, 0)] = Complex64::new(1.0, 0.0);

    Ok(hadamard.matmul(&reflector).matmul(&hadamard))
}

/// Run the full search: prepare the register, then apply (oracle, partial
/// diffusion) `iterations` times. `iterations = 0` returns the freshly
/// initialized uniform register.
pub fn run_search(
    n_index_qubits: usize,
    marked: &MarkedSet,
    iterations: u64,
) -> Result<StateVector, Error> {
    run_search_signed(n_index_qubits, marked, iterations, -1.0)
}

pub(crate) fn run_search_signed(
    n_index_qubits: usize,
    marked: &MarkedSet,
    iterations: u64,
    workspace_sign: f64,
) -> Result<StateVector, Error> {
    let mut state = StateVector::prepared_register(n_index_qubits)?;
    for _ in 0..iterations {
        apply_oracle(&mut state, marked)?;
        partial_diffusion_signed(&mut state, workspace_sign);
    }
    Ok(state)
}

/// Run the Grover baseline: prepare the register, then apply (phase oracle,
/// Grover diffusion) `iterations` times. The workspace qubit stays |0>
/// throughout, so both algorithms share the same register layout and
/// measurement semantics.
pub fn run_grover(
    n_index_qubits: usize,
    marked: &MarkedSet,
    iterations: u64,
) -> Result<StateVector, Error> {
    let mut state = StateVector::prepared_register(n_index_qubits)?;
    for _ in 0..iterations {
        apply_phase_oracle(&mut state, marked)?;
        apply_grover_diffusion(&mut state);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn random_normalized_state(n: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps: Vec<Complex64> = (0..2usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut state = StateVector::from_amplitudes(n, amps).unwrap();
        state.normalize();
        state
    }

    #[test]
    fn oracle_moves_marked_amplitude_to_workspace_one() {
        let mut state = StateVector::prepared_register(2).unwrap();
        let marked = MarkedSet::new(2, [3]).unwrap();
        apply_oracle(&mut state, &marked).unwrap();
        assert_eq!(state.amplitudes()[6], re(0.0));
        assert!((state.amplitudes()[7] - re(0.5)).norm() < 1e-15);
        assert!((state.amplitudes()[4] - re(0.5)).norm() < 1e-15);
    }

    #[test]
    fn oracle_is_an_exact_involution() {
        let marked = MarkedSet::new(3, [1, 4, 6]).unwrap();
        let original = random_normalized_state(3, 11);
        let mut state = original.clone();
        apply_oracle(&mut state, &marked).unwrap();
        apply_oracle(&mut state, &marked).unwrap();
        assert_eq!(state, original);
    }

    #[test]
    fn oracle_rejects_register_mismatch() {
        let mut state = StateVector::prepared_register(2).unwrap();
        let marked = MarkedSet::new(3, [0]).unwrap();
        assert_eq!(
            apply_oracle(&mut state, &marked),
            Err(Error::QubitCountMismatch {
                state_qubits: 2,
                other_qubits: 3
            })
        );
    }

    #[test]
    fn partial_diffusion_fixes_uniform_register() {
        let mut state = StateVector::prepared_register(3).unwrap();
        let before = state.clone();
        apply_partial_diffusion(&mut state);
        assert!(state.max_abs_difference(&before) < 1e-15);
    }

    #[test]
    fn partial_diffusion_first_iteration_amplitudes() {
        // Oracle then Y for n=2, marked {0}: the workspace-0 mean is 3/8, so
        // the marked item rises to 3/4, the others drop to 1/4, and the
        // workspace-1 amplitude flips to -1/2.
        let mut state = StateVector::prepared_register(2).unwrap();
        let marked = MarkedSet::new(2, [0]).unwrap();
        apply_oracle(&mut state, &marked).unwrap();
        apply_partial_diffusion(&mut state);
        let expected = [
            re(0.75),
            re(-0.5),
            re(0.25),
            re(0.0),
            re(0.25),
            re(0.0),
            re(0.25),
            re(0.0),
        ];
        for (a, e) in state.amplitudes().iter().zip(&expected) {
            assert!((a - e).norm() < 1e-15, "got {a}, want {e}");
        }
        assert!((state.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_swaps_match_amplitudes_after_a_full_iteration() {
        // After one iteration with n=2, marked {0}, the register holds
        // (0.75, -0.5) on the marked pair; a further oracle application
        // swaps exactly that pair and leaves the rest alone.
        let marked = MarkedSet::new(2, [0]).unwrap();
        let mut state = run_search(2, &marked, 1).unwrap();
        apply_oracle(&mut state, &marked).unwrap();
        let expected = [
            re(-0.5),
            re(0.75),
            re(0.25),
            re(0.0),
            re(0.25),
            re(0.0),
            re(0.25),
            re(0.0),
        ];
        for (a, e) in state.amplitudes().iter().zip(&expected) {
            assert!((a - e).norm() < 1e-15, "got {a}, want {e}");
        }
    }

    #[test]
    fn dense_path_matches_fast_path_on_oracle_output() {
        let marked = MarkedSet::new(3, [1, 5]).unwrap();
        let mut fast = StateVector::prepared_register(3).unwrap();
        apply_oracle(&mut fast, &marked).unwrap();
        let mut dense = fast.clone();
        apply_partial_diffusion(&mut fast);
        dense
            .apply_dense_unitary(&build_partial_diffusion_dense(3).unwrap())
            .unwrap();
        assert!(fast.max_abs_difference(&dense) < 1e-12);
    }

    #[test]
    fn dense_partial_diffusion_n1_matches_hand_expansion() {
        let y = build_partial_diffusion_dense(1).unwrap();
        let expected = DenseMatrix::from_rows(&[
            vec![re(0.0), re(0.0), re(1.0), re(0.0)],
            vec![re(0.0), re(-1.0), re(0.0), re(0.0)],
            vec![re(1.0), re(0.0), re(0.0), re(0.0)],
            vec![re(0.0), re(0.0), re(0.0), re(-1.0)],
        ]);
        assert!(y.max_abs_difference(&expected) < 1e-15);
    }

    #[test]
    fn dense_partial_diffusion_is_unitary_involution() {
        for n in 1..=4 {
            let y = build_partial_diffusion_dense(n).unwrap();
            assert!(y.is_unitary(1e-12), "Y not unitary for n={n}");
            assert!(
                y.matmul(&y).max_deviation_from_identity() < 1e-12,
                "Y^2 != I for n={n}"
            );
        }
    }

    #[test]
    fn dense_build_rejects_large_registers() {
        assert_eq!(
            build_partial_diffusion_dense(9),
            Err(Error::DenseTooLarge { n: 9, max: 8 })
        );
    }

    #[test]
    fn fast_path_matches_dense_path() {
        for n in 1..=4 {
            let y = build_partial_diffusion_dense(n).unwrap();
            for seed in 0..20 {
                let mut fast = random_normalized_state(n, seed);
                let mut dense = fast.clone();
                apply_partial_diffusion(&mut fast);
                dense.apply_dense_unitary(&y).unwrap();
                let dev = fast.max_abs_difference(&dense);
                assert!(dev < 1e-12, "n={n} seed={seed} deviation {dev}");
            }
        }
    }

    #[test]
    fn phase_oracle_flips_signs_and_is_involution() {
        let marked = MarkedSet::new(2, [2]).unwrap();
        let mut state = StateVector::prepared_register(2).unwrap();
        apply_phase_oracle(&mut state, &marked).unwrap();
        assert!((state.amplitudes()[4] - re(-0.5)).norm() < 1e-15);
        let original = random_normalized_state(2, 5);
        let mut state = original.clone();
        apply_phase_oracle(&mut state, &marked).unwrap();
        apply_phase_oracle(&mut state, &marked).unwrap();
        assert_eq!(state, original);
    }

    #[test]
    fn grover_diffusion_fixes_uniform_register() {
        let mut state = StateVector::prepared_register(3).unwrap();
        let before = state.clone();
        apply_grover_diffusion(&mut state);
        assert!(state.max_abs_difference(&before) < 1e-14);
    }

    #[test]
    fn grover_quarter_ratio_is_certain_after_one_iteration() {
        let marked = MarkedSet::new(2, [1]).unwrap();
        let state = run_grover(2, &marked, 1).unwrap();
        let p = state.probability_of_index_set(&marked).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grover_three_iterations_match_closed_form() {
        let marked = MarkedSet::new(4, [9]).unwrap();
        let state = run_grover(4, &marked, 3).unwrap();
        let p = state.probability_of_index_set(&marked).unwrap();
        let theta = 0.25f64.asin();
        let expected = (7.0 * theta).sin().powi(2);
        assert!((p - expected).abs() < 1e-12);
        assert!((p - 0.9613).abs() < 1e-4);
    }

    #[test]
    fn search_half_ratio_is_certain_after_one_iteration() {
        let marked = MarkedSet::new(2, [0, 1]).unwrap();
        let state = run_search(2, &marked, 1).unwrap();
        let p = state.probability_of_index_set(&marked).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn search_single_match_n2_first_iteration() {
        let marked = MarkedSet::new(2, [0]).unwrap();
        let state = run_search(2, &marked, 1).unwrap();
        let p = state.probability_of_index_set(&marked).unwrap();
        assert!((p - 0.8125).abs() < 1e-12);
    }

    #[test]
    fn search_zero_iterations_is_uniform() {
        let marked = MarkedSet::new(6, [0]).unwrap();
        let state = run_search(6, &marked, 0).unwrap();
        let p = state.probability_of_index_set(&marked).unwrap();
        assert!((p - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn search_all_marked_is_certain_after_one_iteration() {
        let marked = MarkedSet::all(3).unwrap();
        let state = run_search(3, &marked, 1).unwrap();
        let p = state.probability_of_index_set(&marked).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_matches_stay_certain_for_half_ratio() {
        let marked = MarkedSet::new(2, [0, 1]).unwrap();
        let state = run_search(2, &marked, 1).unwrap();
        let counts = state.sample_counts(3, 20_000);
        let in_marked: u64 = counts[0..4].iter().sum();
        assert_eq!(in_marked, 20_000);
    }
}
