//! Closed-form model of the search dynamics.
//!
//! After `q` iterations the register holds exactly three distinct amplitude
//! values: one shared by all non-matching items (workspace 0), one by all
//! matching items with workspace 0, and one by all matching items with
//! workspace 1. This module evolves that triple three independent ways — the
//! first-order step the diffusion operator induces, the equivalent
//! second-order recurrences, and the Chebyshev (second kind) closed forms —
//! and derives success/failure probabilities, iteration counts, the Grover
//! and classical baselines, and the binomially averaged performance laws
//! from them.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use serde::Serialize;

use crate::error::Error;
use crate::marked::MarkedSet;

/// Derived search-instance quantities: `N = 2^n` items, `M` matches, the
/// uniform amplitude `1/sqrt(N)`, the non-match ratio `1 - M/N`, and the
/// rotation angle `theta = arccos(1 - M/N)` driving the amplitude evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchParams {
    n_index_qubits: u32,
    items: u64,
    matches: u64,
    uniform_amplitude: f64,
    non_match_ratio: f64,
    theta: f64,
}

impl SearchParams {
    pub fn new(n_index_qubits: u32, matches: u64) -> Result<Self, Error> {
        if n_index_qubits == 0 || n_index_qubits >= 64 {
            return Err(Error::QubitCount {
                n: n_index_qubits as usize,
                max: 63,
            });
        }
        let items = 1u64 << n_index_qubits;
        if matches == 0 || matches > items {
            return Err(Error::MatchCount { matches, items });
        }
        let ratio = matches as f64 / items as f64;
        let non_match_ratio = 1.0 - ratio;
        Ok(Self {
            n_index_qubits,
            items,
            matches,
            uniform_amplitude: 1.0 / (items as f64).sqrt(),
            non_match_ratio,
            theta: non_match_ratio.acos(),
        })
    }

    pub fn from_marked(marked: &MarkedSet) -> Self {
        Self::new(marked.n_index_qubits() as u32, marked.matches() as u64)
            .expect("a valid MarkedSet always yields valid params")
    }

    pub fn n_index_qubits(&self) -> u32 {
        self.n_index_qubits
    }

    /// N, the list size.
    pub fn items(&self) -> u64 {
        self.items
    }

    /// M, the number of matches.
    pub fn matches(&self) -> u64 {
        self.matches
    }

    /// `1/sqrt(N)`, the prepared register's per-item amplitude.
    pub fn uniform_amplitude(&self) -> f64 {
        self.uniform_amplitude
    }

    /// M/N.
    pub fn ratio(&self) -> f64 {
        self.matches as f64 / self.items as f64
    }

    /// `1 - M/N`, the cosine of [`theta`](Self::theta).
    pub fn non_match_ratio(&self) -> f64 {
        self.non_match_ratio
    }

    /// `arccos(1 - M/N)`, in (0, pi/2].
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// The three amplitude values present after `iteration` search steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeTriple {
    pub iteration: u64,
    /// Shared amplitude of every non-matching item (workspace 0).
    pub non_match: f64,
    /// Shared amplitude of every matching item with workspace 0.
    pub match_zero: f64,
    /// Shared amplitude of every matching item with workspace 1.
    pub match_one: f64,
}

impl AmplitudeTriple {
    /// The prepared register: everything at `1/sqrt(N)`, workspace 1 empty.
    pub fn initial(params: &SearchParams) -> Self {
        Self {
            iteration: 0,
            non_match: params.uniform_amplitude(),
            match_zero: params.uniform_amplitude(),
            match_one: 0.0,
        }
    }

    /// `(N - M) a^2 + M b^2 + M c^2 - 1`: distance from unit norm.
    pub fn norm_residual(&self, params: &SearchParams) -> f64 {
        let non_matches = (params.items() - params.matches()) as f64;
        let matches = params.matches() as f64;
        non_matches * self.non_match * self.non_match
            + matches * self.match_zero * self.match_zero
            + matches * self.match_one * self.match_one
            - 1.0
    }

    pub fn max_abs_difference(&self, other: &AmplitudeTriple) -> f64 {
        (self.non_match - other.non_match)
            .abs()
            .max((self.match_zero - other.match_zero).abs())
            .max((self.match_one - other.match_one).abs())
    }
}

/// How a [`RunReport`]'s probabilities were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunSource {
    Simulated,
    Recurrence,
    ClosedForm,
}

/// Per-instance outcome: success/failure probability after a number of
/// iterations, tagged with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub params: SearchParams,
    pub iterations: u64,
    pub p_success: f64,
    pub p_failure: f64,
    pub source: RunSource,
}

impl RunReport {
    pub fn new(params: SearchParams, iterations: u64, p_success: f64, source: RunSource) -> Self {
        Self {
            params,
            iterations,
            p_success,
            p_failure: 1.0 - p_success,
            source,
        }
    }
}

/// One step of the amplitude evolution: the oracle swaps the match
/// amplitudes, then the partial diffusion inverts workspace 0 about the
/// subspace mean `y * a + (1 - y) * c` and negates workspace 1.
pub fn recurrence_step(params: &SearchParams, prev: &AmplitudeTriple) -> AmplitudeTriple {
    let y = params.non_match_ratio();
    let twice_mean = 2.0 * (y * prev.non_match + (1.0 - y) * prev.match_one);
    AmplitudeTriple {
        iteration: prev.iteration + 1,
        non_match: twice_mean - prev.non_match,
        match_zero: twice_mean - prev.match_one,
        match_one: -prev.match_zero,
    }
}

/// Amplitudes after `iterations` steps via the second-order recurrences
/// `x_q = 2 y x_{q-1} - x_{q-2}` (independent of the Chebyshev evaluation in
/// [`amplitudes_closed_form`]).
pub fn amplitudes_by_recurrence(params: &SearchParams, iterations: u64) -> AmplitudeTriple {
    let s = params.uniform_amplitude();
    let y = params.non_match_ratio();
    if iterations == 0 {
        return AmplitudeTriple::initial(params);
    }
    // Seeds: a0 = s, a1 = s(2y - 1); b0 = s, b1 = 2sy.
    let mut a_prev = s;
    let mut a = s * (2.0 * y - 1.0);
    let mut b_prev = s;
    let mut b = 2.0 * s * y;
    for _ in 1..iterations {
        let a_next = 2.0 * y * a - a_prev;
        a_prev = a;
        a = a_next;
        let b_next = 2.0 * y * b - b_prev;
        b_prev = b;
        b = b_next;
    }
    AmplitudeTriple {
        iteration: iterations,
        non_match: a,
        match_zero: b,
        match_one: -b_prev,
    }
}

/// Relative margin below which the Chebyshev argument is treated as an
/// endpoint and the polynomial limit is used instead of the trigonometric
/// form.
const CHEBYSHEV_EDGE: f64 = 1e-9;

/// Chebyshev polynomial of the second kind, `U_q(y) = sin((q+1) theta) /
/// sin(theta)` with `y = cos(theta)`.
///
/// Evaluated trigonometrically away from the endpoints; at `y = +-1` the
/// limits `U_q(1) = q + 1` and `U_q(-1) = (-1)^q (q + 1)` apply. Defined for
/// `order >= -1`, with `U_{-1} = 0`.
pub fn chebyshev_u(order: i64, y: f64) -> Result<f64, Error> {
    assert!(order >= -1, "order must be >= -1, got {order}");
    if !(-1.0..=1.0).contains(&y) {
        return Err(Error::ChebyshevDomain { y });
    }
    if order == -1 {
        return Ok(0.0);
    }
    let successor = (order + 1) as f64;
    if y >= 1.0 - CHEBYSHEV_EDGE {
        return Ok(successor);
    }
    if y <= -1.0 + CHEBYSHEV_EDGE {
        return Ok(if order % 2 == 0 {
            successor
        } else {
            -successor
        });
    }
    let theta = y.acos();
    Ok((successor * theta).sin() / theta.sin())
}

/// Amplitudes after `iterations` steps via the Chebyshev closed forms:
/// `a = s (U_q - U_{q-1})`, `b = s U_q`, `c = -s U_{q-1}`.
pub fn amplitudes_closed_form(params: &SearchParams, iterations: u64) -> AmplitudeTriple {
    let s = params.uniform_amplitude();
    let y = params.non_match_ratio();
    let q = iterations as i64;
    let u_q = chebyshev_u(q, y).expect("non-match ratio lies in [0, 1)");
    let u_prev = chebyshev_u(q - 1, y).expect("non-match ratio lies in [0, 1)");
    AmplitudeTriple {
        iteration: iterations,
        non_match: s * (u_q - u_prev),
        match_zero: s * u_q,
        match_one: -s * u_prev,
    }
}

fn success_probability_unchecked(ratio: f64, iterations: u64) -> f64 {
    let y = 1.0 - ratio;
    let q = iterations as i64;
    let u_q = chebyshev_u(q, y).expect("ratio in (0, 1] keeps y in [0, 1)");
    let u_prev = chebyshev_u(q - 1, y).expect("ratio in (0, 1] keeps y in [0, 1)");
    ratio * (u_q * u_q + u_prev * u_prev)
}

fn failure_probability_unchecked(ratio: f64, iterations: u64) -> f64 {
    let y = 1.0 - ratio;
    let q = iterations as i64;
    let u_q = chebyshev_u(q, y).expect("ratio in (0, 1] keeps y in [0, 1)");
    let u_prev = chebyshev_u(q - 1, y).expect("ratio in (0, 1] keeps y in [0, 1)");
    let diff = u_q - u_prev;
    y * diff * diff
}

fn check_ratio(ratio: f64) -> Result<(), Error> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::RatioOutOfRange { ratio });
    }
    Ok(())
}

/// Probability that measuring the index qubits after `iterations` steps
/// yields a match: `(M/N) (U_q^2 + U_{q-1}^2)`, equivalently
/// `M (b_q^2 + c_q^2)`.
pub fn success_probability(params: &SearchParams, iterations: u64) -> f64 {
    success_probability_unchecked(params.ratio(), iterations)
}

/// [`success_probability`] over a real match ratio in (0, 1], decoupled from
/// any integer instance.
pub fn success_probability_at_ratio(ratio: f64, iterations: u64) -> Result<f64, Error> {
    check_ratio(ratio)?;
    Ok(success_probability_unchecked(ratio, iterations))
}

/// Complement of [`success_probability`]: `(1 - M/N)(U_q - U_{q-1})^2`,
/// equivalently `(N - M) a_q^2`.
///
/// The non-match prefactor is `N - M` — there are `N - M` basis states at
/// the non-match amplitude — which is the only prefactor under which
/// success and failure sum to exactly one.
pub fn failure_probability(params: &SearchParams, iterations: u64) -> f64 {
    failure_probability_unchecked(params.ratio(), iterations)
}

/// [`failure_probability`] over a real match ratio in (0, 1].
pub fn failure_probability_at_ratio(ratio: f64, iterations: u64) -> Result<f64, Error> {
    check_ratio(ratio)?;
    Ok(failure_probability_unchecked(ratio, iterations))
}

/// Iteration count for the search: `floor(pi/(2 sqrt 2) * sqrt(N/M))`.
/// Always at least 1.
pub fn required_iterations(params: &SearchParams) -> u64 {
    required_iterations_at_ratio_unchecked(params.ratio())
}

/// [`required_iterations`] over a real match ratio in (0, 1].
pub fn required_iterations_at_ratio(ratio: f64) -> Result<u64, Error> {
    check_ratio(ratio)?;
    Ok(required_iterations_at_ratio_unchecked(ratio))
}

fn required_iterations_at_ratio_unchecked(ratio: f64) -> u64 {
    (PI / (2.0 * SQRT_2) * (1.0 / ratio).sqrt()).floor() as u64
}

/// The real-valued iteration count at which success is exactly certain:
/// `(pi - theta) / (2 theta)`. Certainty is reachable on an integer
/// iteration only when this value is an integer. When `theta = pi/2`
/// (M = N) every iteration gives certainty and 1 is returned.
pub fn certainty_iteration_exact(params: &SearchParams) -> f64 {
    if params.matches() == params.items() {
        return 1.0;
    }
    let theta = params.theta();
    (PI - theta) / (2.0 * theta)
}

/// Grover success law: `sin^2((2 q_G + 1) theta_g)` with
/// `sin^2(theta_g) = M/N`. Note `theta_g = arcsin(sqrt(M/N))` differs from
/// the partial-diffusion angle `arccos(1 - M/N)`.
pub fn grover_success_probability(items: u64, matches: u64, iterations: u64) -> Result<f64, Error> {
    check_instance(items, matches)?;
    Ok(grover_success_probability_at_ratio_unchecked(
        matches as f64 / items as f64,
        iterations,
    ))
}

/// [`grover_success_probability`] over a real match ratio in (0, 1].
pub fn grover_success_probability_at_ratio(ratio: f64, iterations: u64) -> Result<f64, Error> {
    check_ratio(ratio)?;
    Ok(grover_success_probability_at_ratio_unchecked(
        ratio, iterations,
    ))
}

fn grover_success_probability_at_ratio_unchecked(ratio: f64, iterations: u64) -> f64 {
    let theta_g = ratio.sqrt().asin();
    ((2 * iterations + 1) as f64 * theta_g).sin().powi(2)
}

/// Grover iteration count: `floor(pi/4 * sqrt(N/M))`. Zero when
/// `M/N > (pi/4)^2`; the success law still applies at zero iterations and
/// degenerates to M/N.
pub fn grover_iterations(items: u64, matches: u64) -> Result<u64, Error> {
    check_instance(items, matches)?;
    Ok(grover_iterations_at_ratio_unchecked(
        matches as f64 / items as f64,
    ))
}

/// [`grover_iterations`] over a real match ratio in (0, 1].
pub fn grover_iterations_at_ratio(ratio: f64) -> Result<u64, Error> {
    check_ratio(ratio)?;
    Ok(grover_iterations_at_ratio_unchecked(ratio))
}

fn grover_iterations_at_ratio_unchecked(ratio: f64) -> u64 {
    (FRAC_PI_4 * (1.0 / ratio).sqrt()).floor() as u64
}

/// Single classical random guess: `M/N`.
pub fn classical_success_probability(items: u64, matches: u64) -> Result<f64, Error> {
    check_instance(items, matches)?;
    Ok(matches as f64 / items as f64)
}

fn check_instance(items: u64, matches: u64) -> Result<(), Error> {
    if items == 0 {
        return Err(Error::ItemCount { items });
    }
    if matches == 0 || matches > items {
        return Err(Error::MatchCount { matches, items });
    }
    Ok(())
}

/// Largest N for which the binomially weighted averages are also evaluated
/// by explicit summation; beyond it only the closed form is reported.
pub const MAX_SUMMED_AVERAGE_ITEMS: u64 = 30;

/// A performance law averaged over all `2^N` oracle functions, weighting
/// each match count M by `C(N, M) / 2^N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinomialAverage {
    /// The law's closed-form value.
    pub closed_form: f64,
    /// The explicitly summed average; `None` above
    /// [`MAX_SUMMED_AVERAGE_ITEMS`].
    pub summed: Option<f64>,
}

fn check_power_of_two_items(items: u64) -> Result<(), Error> {
    if items < 2 || !items.is_power_of_two() {
        return Err(Error::ItemCount { items });
    }
    Ok(())
}

/// Binomial weights `C(N, M) / 2^N` for M = 1..=N, exact in u64 up to the
/// summation cap.
fn binomial_weights(items: u64) -> Vec<f64> {
    debug_assert!(items <= MAX_SUMMED_AVERAGE_ITEMS);
    let denom = (1u64 << items) as f64;
    let mut weights = Vec::with_capacity(items as usize);
    let mut coeff = 1u64;
    for m in 1..=items {
        // C(N, m) from C(N, m-1); the intermediate product stays exact.
        coeff = coeff * (items - m + 1) / m;
        weights.push(coeff as f64 / denom);
    }
    weights
}

fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        len => {
            let (left, right) = values.split_at(len / 2);
            pairwise_sum(left) + pairwise_sum(right)
        }
    }
}

fn binomial_average(items: u64, law: impl Fn(u64) -> f64) -> Option<f64> {
    if items > MAX_SUMMED_AVERAGE_ITEMS {
        return None;
    }
    let weights = binomial_weights(items);
    let terms: Vec<f64> = weights
        .iter()
        .zip(1..=items)
        .map(|(w, m)| w * law(m))
        .collect();
    Some(pairwise_sum(&terms))
}

/// Average first-iteration success over all oracles: closed form
/// `1 - 1/(2N)`, cross-checked by summing `C(N, M)/2^N * P_s(M, 1)`.
pub fn average_success_first_iteration(items: u64) -> Result<BinomialAverage, Error> {
    check_power_of_two_items(items)?;
    let summed = binomial_average(items, |matches| {
        success_probability_unchecked(matches as f64 / items as f64, 1)
    });
    Ok(BinomialAverage {
        closed_form: 1.0 - 1.0 / (2.0 * items as f64),
        summed,
    })
}

/// Average single-guess success over all oracles: exactly one half.
pub fn average_success_classical(items: u64) -> Result<BinomialAverage, Error> {
    check_power_of_two_items(items)?;
    let summed = binomial_average(items, |matches| matches as f64 / items as f64);
    Ok(BinomialAverage {
        closed_form: 0.5,
        summed,
    })
}

/// Average Grover success over all oracles after any fixed iteration count:
/// one half.
pub fn average_success_grover(items: u64, iterations: u64) -> Result<BinomialAverage, Error> {
    check_power_of_two_items(items)?;
    let summed = binomial_average(items, |matches| {
        grover_success_probability_at_ratio_unchecked(matches as f64 / items as f64, iterations)
    });
    Ok(BinomialAverage {
        closed_form: 0.5,
        summed,
    })
}
