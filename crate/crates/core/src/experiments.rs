//! Desk-scale reproduction experiments and cross-validation between the
//! simulator and the analytic model.
//!
//! Everything here is analytic except [`cross_validate`], which drives the
//! full state-vector simulator against the recurrence and closed-form paths
//! over a sampled grid of instances. Output is plot-ready CSV or JSON with
//! fixed formatting and fixed ordering, so identical inputs produce
//! byte-identical files.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{self, amplitudes_closed_form, AmplitudeTriple, SearchParams};
use crate::error::Error;
use crate::marked::MarkedSet;
use crate::operators;
use crate::statevector::basis_index;

/// Search algorithm selector for sweeps and grid scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    PartialDiffusion,
    Grover,
    Classical,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::PartialDiffusion => "partial_diffusion",
            Algorithm::Grover => "grover",
            Algorithm::Classical => "classical",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How many iterations each algorithm gets at a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum IterationPolicy {
    /// Every algorithm runs exactly `q` iterations.
    Fixed(u64),
    /// Each algorithm uses its own published count: `floor(pi/(2 sqrt 2)
    /// sqrt(N/M))` for partial diffusion, `floor(pi/4 sqrt(N/M))` for
    /// Grover, one guess for classical.
    PaperFormula,
    /// Every algorithm is budgeted with Grover's count `floor(pi/4
    /// sqrt(N/M))`.
    GroverFormula,
}

/// A sweep over match ratios: which algorithms to evaluate, at which ratio
/// points, with which iteration budget.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    ratio_points: Vec<f64>,
    iteration_policy: IterationPolicy,
    algorithms: Vec<Algorithm>,
}

impl SweepGrid {
    /// Build a grid from explicit ratio points. Points are sorted and
    /// deduplicated; each must lie in (0, 1].
    pub fn new(
        ratio_points: impl IntoIterator<Item = f64>,
        iteration_policy: IterationPolicy,
        algorithms: impl IntoIterator<Item = Algorithm>,
    ) -> Result<Self, Error> {
        let mut ratio_points: Vec<f64> = ratio_points.into_iter().collect();
        if ratio_points.is_empty() {
            return Err(Error::GridTooSmall {
                what: "sweep grid",
                min: 1,
                got: 0,
            });
        }
        for &r in &ratio_points {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::RatioOutOfRange { ratio: r });
            }
        }
        ratio_points.sort_by(|a, b| a.partial_cmp(b).expect("ratios are finite"));
        ratio_points.dedup();
        let mut algorithms: Vec<Algorithm> = algorithms.into_iter().collect();
        algorithms.sort();
        algorithms.dedup();
        if algorithms.is_empty() {
            return Err(Error::GridTooSmall {
                what: "algorithm list",
                min: 1,
                got: 0,
            });
        }
        Ok(Self {
            ratio_points,
            iteration_policy,
            algorithms,
        })
    }

    /// Uniform grid `k / points` for k = 1..=points.
    pub fn uniform(
        points: usize,
        iteration_policy: IterationPolicy,
        algorithms: impl IntoIterator<Item = Algorithm>,
    ) -> Result<Self, Error> {
        if points == 0 {
            return Err(Error::GridTooSmall {
                what: "sweep grid",
                min: 1,
                got: 0,
            });
        }
        Self::new(
            (1..=points).map(|k| k as f64 / points as f64),
            iteration_policy,
            algorithms,
        )
    }

    /// Geometric grid from `min_ratio` up to 1, for the small-ratio regime.
    pub fn logarithmic(
        points: usize,
        min_ratio: f64,
        iteration_policy: IterationPolicy,
        algorithms: impl IntoIterator<Item = Algorithm>,
    ) -> Result<Self, Error> {
        if points < 2 {
            return Err(Error::GridTooSmall {
                what: "logarithmic sweep grid",
                min: 2,
                got: points,
            });
        }
        if !(min_ratio > 0.0 && min_ratio < 1.0) {
            return Err(Error::RatioOutOfRange { ratio: min_ratio });
        }
        let step = (1.0 / min_ratio).ln() / (points - 1) as f64;
        Self::new(
            (0..points).map(|k| (min_ratio.ln() + k as f64 * step).exp().min(1.0)),
            iteration_policy,
            algorithms,
        )
    }

    pub fn ratio_points(&self) -> &[f64] {
        &self.ratio_points
    }

    pub fn iteration_policy(&self) -> IterationPolicy {
        self.iteration_policy
    }

    pub fn algorithms(&self) -> &[Algorithm] {
        &self.algorithms
    }
}

/// One evaluated sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub algorithm: Algorithm,
    pub ratio: f64,
    pub iterations_used: u64,
    pub p_success: f64,
}

fn iterations_for(algorithm: Algorithm, policy: IterationPolicy, ratio: f64) -> u64 {
    match (algorithm, policy) {
        (Algorithm::Classical, _) => 1,
        (_, IterationPolicy::Fixed(q)) => q,
        (Algorithm::PartialDiffusion, IterationPolicy::PaperFormula) => {
            analytic::required_iterations_at_ratio(ratio).expect("grid ratios are validated")
        }
        (Algorithm::Grover, IterationPolicy::PaperFormula)
        | (_, IterationPolicy::GroverFormula) => {
            analytic::grover_iterations_at_ratio(ratio).expect("grid ratios are validated")
        }
    }
}

fn probability_for(algorithm: Algorithm, ratio: f64, iterations: u64) -> f64 {
    match algorithm {
        Algorithm::PartialDiffusion => analytic::success_probability_at_ratio(ratio, iterations)
            .expect("grid ratios are validated"),
        Algorithm::Grover => analytic::grover_success_probability_at_ratio(ratio, iterations)
            .expect("grid ratios are validated"),
        Algorithm::Classical => ratio,
    }
}

/// Evaluate the analytic success probability of every requested algorithm at
/// every grid ratio. Output is ordered by algorithm, then ratio ascending.
pub fn sweep_curves(grid: &SweepGrid) -> Vec<CurvePoint> {
    let mut points = Vec::with_capacity(grid.algorithms.len() * grid.ratio_points.len());
    for &algorithm in &grid.algorithms {
        for &ratio in &grid.ratio_points {
            let iterations = iterations_for(algorithm, grid.iteration_policy, ratio);
            points.push(CurvePoint {
                algorithm,
                ratio,
                iterations_used: iterations,
                p_success: probability_for(algorithm, ratio, iterations),
            });
        }
    }
    points
}

/// Location and value of a scanned probability minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioMinimum {
    pub ratio: f64,
    pub p_success: f64,
}

/// Scan `resolution` uniform ratio points over (0, 1], give each algorithm
/// its own published iteration count at each point, and return the global
/// probability minimum. Ties keep the smallest ratio.
pub fn min_probability_with_paper_iterations(
    algorithm: Algorithm,
    resolution: usize,
) -> Result<RatioMinimum, Error> {
    if resolution < 10_000 {
        return Err(Error::GridTooSmall {
            what: "minimum scan",
            min: 10_000,
            got: resolution,
        });
    }
    let mut best = RatioMinimum {
        ratio: f64::NAN,
        p_success: f64::INFINITY,
    };
    for k in 1..=resolution {
        let ratio = k as f64 / resolution as f64;
        let iterations = iterations_for(algorithm, IterationPolicy::PaperFormula, ratio);
        let p = probability_for(algorithm, ratio, iterations);
        if p < best.p_success {
            best = RatioMinimum {
                ratio,
                p_success: p,
            };
        }
    }
    Ok(best)
}

/// First-iteration performance for one register size: extremes over all
/// match counts plus the all-oracle average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub n: u32,
    pub max_prob: f64,
    pub min_prob: f64,
    pub avg_prob: f64,
}

/// First-iteration performance table: for each n in the range, the maximum
/// and minimum of the success probability over M = 1..=N at one iteration
/// and the binomially averaged value `1 - 1/(2N)`.
pub fn table_first_iteration(n_min: u32, n_max: u32) -> Result<Vec<TableRow>, Error> {
    if n_min == 0 || n_min > n_max || n_max > 20 {
        return Err(Error::QubitCount {
            n: if n_min == 0 || n_min > n_max {
                n_min as usize
            } else {
                n_max as usize
            },
            max: 20,
        });
    }
    let mut rows = Vec::with_capacity((n_max - n_min + 1) as usize);
    for n in n_min..=n_max {
        let items = 1u64 << n;
        let mut max_prob = f64::NEG_INFINITY;
        let mut min_prob = f64::INFINITY;
        for matches in 1..=items {
            let p = analytic::success_probability_at_ratio(matches as f64 / items as f64, 1)
                .expect("M/N lies in (0, 1]");
            max_prob = max_prob.max(p);
            min_prob = min_prob.min(p);
        }
        let avg_prob = analytic::average_success_first_iteration(items)?.closed_form;
        rows.push(TableRow {
            n,
            max_prob,
            min_prob,
            avg_prob,
        });
    }
    Ok(rows)
}

/// Fixed 12-significant-digit float formatting shared by all CSV output.
pub fn format_float(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.11e}")
}

/// Render sweep output as CSV with header `algorithm,ratio,iterations,p_success`.
pub fn curves_to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("algorithm,ratio,iterations,p_success\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.algorithm,
            format_float(p.ratio),
            p.iterations_used,
            format_float(p.p_success)
        ));
    }
    out
}

/// Render the first-iteration table as CSV with header
/// `n,max_prob,min_prob,avg_prob`.
pub fn table_to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n,max_prob,min_prob,avg_prob\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            format_float(row.max_prob),
            format_float(row.min_prob),
            format_float(row.avg_prob)
        ));
    }
    out
}

/// Configuration for [`cross_validate`].
#[derive(Debug, Clone)]
pub struct CrossValidateOptions {
    /// Largest register for the analytic comparison (cap 12); the simulator
    /// comparison additionally caps at 10.
    pub max_index_qubits: usize,
    /// Iterations compared per instance.
    pub max_iterations: u64,
    /// Upper bound on total comparisons; exceeding it truncates the grid and
    /// is reported, not fatal.
    pub sample_budget: usize,
    /// Seed for match-count sampling on the larger registers.
    pub seed: u64,
    /// Negative control: run the simulator with the diffusion operator's
    /// workspace sign deliberately broken so the report must fail.
    pub flip_diffusion_sign: bool,
}

impl Default for CrossValidateOptions {
    fn default() -> Self {
        Self {
            max_index_qubits: 8,
            max_iterations: 50,
            sample_budget: 4_000_000,
            seed: 7,
            flip_diffusion_sign: false,
        }
    }
}

/// Maximum deviation observed between two computation paths.
#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub pair: String,
    pub max_abs_dev: f64,
    pub grid_size: usize,
    pub pass: bool,
}

/// Outcome of the three-way simulator / recurrence / closed-form comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub pairs: Vec<PairReport>,
    pub budget_exhausted: bool,
    pub pass: bool,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            out.push_str(&format!(
                "pair={} max_abs_dev={} grid_size={} pass={}\n",
                p.pair,
                format_float(p.max_abs_dev),
                p.grid_size,
                p.pass
            ));
        }
        out.push_str(&format!(
            "budget_exhausted={} overall={}\n",
            self.budget_exhausted,
            if self.pass { "pass" } else { "fail" }
        ));
        out
    }
}

const ANALYTIC_PAIR_TOLERANCE: f64 = 1e-9;
const SIMULATOR_PAIR_TOLERANCE: f64 = 1e-10;
const STRUCTURE_TOLERANCE: f64 = 1e-12;

struct PairAccumulator {
    name: &'static str,
    max_abs_dev: f64,
    grid_size: usize,
    tolerance: f64,
}

impl PairAccumulator {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            max_abs_dev: 0.0,
            grid_size: 0,
            tolerance,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.max_abs_dev = self.max_abs_dev.max(deviation);
        self.grid_size += 1;
    }

    fn into_report(self) -> PairReport {
        PairReport {
            pair: self.name.to_string(),
            max_abs_dev: self.max_abs_dev,
            grid_size: self.grid_size,
            pass: self.max_abs_dev < self.tolerance,
        }
    }
}

/// Match counts compared for a register of `items` elements: exhaustive up
/// to 64 items, otherwise the boundary cases plus a seeded sample.
fn sampled_match_counts(items: u64, samples: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    if items <= 64 {
        return (1..=items).collect();
    }
    let mut counts = vec![1, 2, items / 4, items / 2, items - 1, items];
    for _ in 0..samples {
        counts.push(rng.gen_range(1..=items));
    }
    counts.sort_unstable();
    counts.dedup();
    counts
}

/// Run the three-way comparison over a sampled grid of (n, M, q) instances:
/// second-order recurrence vs Chebyshev closed form on registers up to
/// `max_index_qubits` (cap 12), and the state-vector simulator vs both on
/// registers up to 10 qubits, including the three-amplitude structure of the
/// simulated state.
pub fn cross_validate(options: &CrossValidateOptions) -> Result<ValidationReport, Error> {
    const MAX_ANALYTIC_QUBITS: usize = 12;
    const MAX_SIMULATOR_QUBITS: usize = 10;
    if options.max_index_qubits == 0 || options.max_index_qubits > MAX_ANALYTIC_QUBITS {
        return Err(Error::QubitCount {
            n: options.max_index_qubits,
            max: MAX_ANALYTIC_QUBITS,
        });
    }

    let mut rec_closed = PairAccumulator::new("recurrence_vs_closed_form", ANALYTIC_PAIR_TOLERANCE);
    let mut sim_closed = PairAccumulator::new("simulator_vs_closed_form", SIMULATOR_PAIR_TOLERANCE);
    let mut sim_rec = PairAccumulator::new("simulator_vs_recurrence", ANALYTIC_PAIR_TOLERANCE);
    let mut structure = PairAccumulator::new("simulator_structure", STRUCTURE_TOLERANCE);

    let mut remaining = options.sample_budget;
    let mut budget_exhausted = false;
    fn take(remaining: &mut usize) -> bool {
        if *remaining == 0 {
            return false;
        }
        *remaining -= 1;
        true
    }

    // Recurrence vs closed form, analytic only.
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    'analytic: for n in 1..=options.max_index_qubits {
        let items = 1u64 << n;
        for matches in sampled_match_counts(items, 64, &mut rng) {
            let params = SearchParams::new(n as u32, matches)?;
            let mut by_step = AmplitudeTriple::initial(&params);
            for q in 0..=options.max_iterations {
                if !take(&mut remaining) {
                    budget_exhausted = true;
                    break 'analytic;
                }
                let recurrence = analytic::amplitudes_by_recurrence(&params, q);
                let closed = amplitudes_closed_form(&params, q);
                rec_closed.record(recurrence.max_abs_difference(&closed));
                debug_assert!(by_step.max_abs_difference(&recurrence) < 1e-10);
                by_step = analytic::recurrence_step(&params, &by_step);
            }
        }
    }

    // Simulator vs both analytic paths, plus the structural invariant.
    let workspace_sign = if options.flip_diffusion_sign {
        1.0
    } else {
        -1.0
    };
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(1));
    let sim_qubit_cap = options.max_index_qubits.min(MAX_SIMULATOR_QUBITS);
    'simulator: for n in 1..=sim_qubit_cap {
        let items = 1u64 << n;
        for matches in sampled_match_counts(items, 4, &mut rng) {
            let marked = sampled_marked_set(n, matches as usize, &mut rng);
            let params = SearchParams::from_marked(&marked);
            let mut is_marked = vec![false; items as usize];
            for &i in marked.members() {
                is_marked[i] = true;
            }
            let mut state = crate::statevector::StateVector::prepared_register(n)?;
            for q in 0..=options.max_iterations {
                if q > 0 {
                    operators::apply_oracle(&mut state, &marked)?;
                    operators::partial_diffusion_signed(&mut state, workspace_sign);
                }
                if !take(&mut remaining) {
                    budget_exhausted = true;
                    break 'simulator;
                }
                let closed = amplitudes_closed_form(&params, q);
                let recurrence = analytic::amplitudes_by_recurrence(&params, q);
                sim_closed.record(max_amplitude_deviation(&state, &is_marked, &closed));
                sim_rec.record(max_amplitude_deviation(&state, &is_marked, &recurrence));
                structure.record(structure_deviation(&state, &is_marked));
            }
        }
    }

    let pairs = vec![
        rec_closed.into_report(),
        sim_closed.into_report(),
        sim_rec.into_report(),
        structure.into_report(),
    ];
    let pass = pairs.iter().all(|p| p.pass);
    Ok(ValidationReport {
        pairs,
        budget_exhausted,
        pass,
    })
}

fn sampled_marked_set(n: usize, matches: usize, rng: &mut ChaCha8Rng) -> MarkedSet {
    let items = 1usize << n;
    if matches >= items {
        return MarkedSet::all(n).expect("register size already validated");
    }
    let members = rand::seq::index::sample(rng, items, matches).into_vec();
    MarkedSet::new(n, members).expect("sampled members are in range")
}

/// Largest |simulated amplitude - expected amplitude| across the register,
/// with the expected value taken from an analytic triple.
fn max_amplitude_deviation(
    state: &crate::statevector::StateVector,
    is_marked: &[bool],
    triple: &AmplitudeTriple,
) -> f64 {
    let amps = state.amplitudes();
    let mut worst = 0.0f64;
    for (i, &marked) in is_marked.iter().enumerate() {
        let (expect_zero, expect_one) = if marked {
            (triple.match_zero, triple.match_one)
        } else {
            (triple.non_match, 0.0)
        };
        let dev_zero = (amps[basis_index(i, 0)] - Complex64::new(expect_zero, 0.0)).norm();
        let dev_one = (amps[basis_index(i, 1)] - Complex64::new(expect_one, 0.0)).norm();
        worst = worst.max(dev_zero).max(dev_one);
    }
    worst
}

/// How far the simulated state strays from the three-amplitude form: spread
/// within each amplitude group, leakage into unmarked workspace-1 states,
/// and any imaginary parts.
fn structure_deviation(state: &crate::statevector::StateVector, is_marked: &[bool]) -> f64 {
    let amps = state.amplitudes();
    let mut group_min = [f64::INFINITY; 3];
    let mut group_max = [f64::NEG_INFINITY; 3];
    let mut worst = 0.0f64;
    for (i, &marked) in is_marked.iter().enumerate() {
        let zero = amps[basis_index(i, 0)];
        let one = amps[basis_index(i, 1)];
        worst = worst.max(zero.im.abs()).max(one.im.abs());
        if marked {
            group_min[0] = group_min[0].min(zero.re);
            group_max[0] = group_max[0].max(zero.re);
            group_min[1] = group_min[1].min(one.re);
            group_max[1] = group_max[1].max(one.re);
        } else {
            group_min[2] = group_min[2].min(zero.re);
            group_max[2] = group_max[2].max(zero.re);
            worst = worst.max(one.re.abs());
        }
    }
    for g in 0..3 {
        if group_max[g] > group_min[g] {
            worst = worst.max(group_max[g] - group_min[g]);
        }
    }
    worst
}
