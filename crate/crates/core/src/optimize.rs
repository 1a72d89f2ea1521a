//! Derivative-free constrained maximization.
//!
//! [`maximize`] runs an improved stochastic-ranking evolution strategy
//! (differential variation on the leading parents, log-normal self-adaptive
//! step sizes, stochastic bubble-sort ranking between objective and
//! constraint violation) and then polishes the best feasible point with a
//! bounded Nelder–Mead simplex, followed by a quadratic-penalty continuation
//! that slides along active constraints. [`grid_oracle`] is the exhaustive
//! counterpart used to check it. [`golden_section_max`] and
//! [`multistart_golden_max`] handle the one-dimensional line searches.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

type Objective<'a> = Box<dyn Fn(&[f64]) -> Result<f64> + Send + Sync + 'a>;
type Constraint<'a> = Box<dyn Fn(&[f64]) -> f64 + Send + Sync + 'a>;

/// Box-bounded maximization problem with inequality constraints `g(x) ≤ 0`.
pub struct OptimizationProblem<'a> {
    bounds: Vec<(f64, f64)>,
    objective: Objective<'a>,
    constraints: Vec<Constraint<'a>>,
    initial_points: Vec<Vec<f64>>,
}

impl<'a> OptimizationProblem<'a> {
    pub fn new<F>(bounds: Vec<(f64, f64)>, objective: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'a,
    {
        if bounds.is_empty() {
            return Err(Error::Domain("problem has no coordinates".into()));
        }
        if let Some((lo, hi)) = bounds
            .iter()
            .find(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi))
        {
            return Err(Error::Domain(format!("invalid bounds ({lo}, {hi})")));
        }
        Ok(Self {
            bounds,
            objective: Box::new(objective),
            constraints: Vec::new(),
            initial_points: Vec::new(),
        })
    }

    /// Adds a constraint `g(x) ≤ 0`.
    pub fn with_constraint<G>(mut self, g: G) -> Self
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'a,
    {
        self.constraints.push(Box::new(g));
        self
    }

    /// Seeds the initial population with a known point (clamped into the box).
    pub fn with_initial_point(mut self, x: Vec<f64>) -> Self {
        let x = self.clamp(x);
        self.initial_points.push(x);
        self
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let v = (self.objective)(x)?;
        if v.is_nan() {
            return Err(Error::Evaluation(format!("objective is NaN at {x:?}")));
        }
        Ok(v)
    }

    /// Sum of squared positive constraint values.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|g| g(x).max(0.0).powi(2))
            .sum()
    }

    /// Largest constraint value (≤ 0 when feasible).
    pub fn max_constraint(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|g| g(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.constraints.iter().all(|g| g(x) <= tol)
    }

    fn clamp(&self, mut x: Vec<f64>) -> Vec<f64> {
        for (xi, (lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *xi = xi.clamp(*lo, *hi);
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub population: usize,
    pub max_evals: usize,
    pub refine_iters: usize,
    /// Constraint tolerance and simplex convergence threshold.
    pub tolerance: f64,
}

impl OptimizerConfig {
    /// Population `20(n + 1)`, 5000 evaluations, 500 refinement iterations.
    pub fn for_dimension(n: usize, seed: u64) -> Self {
        Self {
            seed,
            population: 20 * (n + 1),
            max_evals: 5000,
            refine_iters: 500,
            tolerance: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::Domain("population must be at least 4".into()));
        }
        if self.max_evals < self.population {
            return Err(Error::Domain("max_evals must cover one population".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub evaluations: usize,
    pub generations: usize,
    pub refine_evaluations: usize,
    /// The local refinement ended with a collapsed simplex.
    pub converged: bool,
    /// Best feasible objective after each generation (`-inf` before the
    /// first feasible point).
    pub best_feasible_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Maximum {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub diagnostics: Diagnostics,
}

const RANK_PROBABILITY: f64 = 0.45;
const TRUNCATION: usize = 7;
const DIFFERENTIAL_GAMMA: f64 = 0.85;
const SIGMA_SMOOTHING: f64 = 0.2;
const RESAMPLE_LIMIT: usize = 10;

struct Individual {
    x: Vec<f64>,
    sigma: Vec<f64>,
    f: f64,
    phi: f64,
}

/// Maximizes the objective subject to the constraints.
pub fn maximize(prob: &OptimizationProblem<'_>, cfg: &OptimizerConfig) -> Result<Maximum> {
    cfg.validate()?;
    let n = prob.dimension();
    let lambda = cfg.population;
    let mu = (lambda / TRUNCATION).max(2);
    let tau = 1.0 / (2.0 * (n as f64).sqrt()).sqrt();
    let tau_prime = 1.0 / (2.0 * n as f64).sqrt();
    let mut rng = SplitMix64::new(cfg.seed);

    let mut evals = 0usize;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut trace = Vec::new();

    let init_sigma: Vec<f64> = prob
        .bounds
        .iter()
        .map(|(lo, hi)| (hi - lo) / (n as f64).sqrt())
        .collect();

    let mut pop: Vec<Individual> = Vec::with_capacity(lambda);
    for k in 0..lambda {
        let x = match prob.initial_points.get(k) {
            Some(p) => p.clone(),
            None => prob
                .bounds
                .iter()
                .map(|&(lo, hi)| rng.uniform(lo, hi))
                .collect(),
        };
        pop.push(Individual {
            x,
            sigma: init_sigma.clone(),
            f: 0.0,
            phi: 0.0,
        });
    }

    let mut generations = 0;
    loop {
        for ind in pop.iter_mut() {
            ind.f = prob.objective(&ind.x)?;
            ind.phi = prob.violation(&ind.x);
            evals += 1;
            if prob.is_feasible(&ind.x, cfg.tolerance)
                && best.as_ref().is_none_or(|(bf, _)| ind.f > *bf)
            {
                best = Some((ind.f, ind.x.clone()));
            }
        }
        generations += 1;
        trace.push(best.as_ref().map_or(f64::NEG_INFINITY, |b| b.0));
        if evals + lambda > cfg.max_evals {
            break;
        }

        let order = stochastic_rank(&pop, &mut rng);
        let parents: Vec<&Individual> = order[..mu].iter().map(|&i| &pop[i]).collect();
        let mut next = Vec::with_capacity(lambda);
        for k in 0..lambda {
            let parent = parents[k % mu];
            if k < mu - 1 {
                // Differential variation toward the best parent.
                let x: Vec<f64> = (0..n)
                    .map(|j| {
                        parent.x[j] + DIFFERENTIAL_GAMMA * (parents[0].x[j] - parents[k + 1].x[j])
                    })
                    .collect();
                if x
                    .iter()
                    .zip(&prob.bounds)
                    .all(|(v, (lo, hi))| v >= lo && v <= hi)
                {
                    next.push(Individual {
                        x,
                        sigma: parent.sigma.clone(),
                        f: 0.0,
                        phi: 0.0,
                    });
                    continue;
                }
            }
            let common = rng.normal();
            let mut sigma = Vec::with_capacity(n);
            let mut x = Vec::with_capacity(n);
            for j in 0..n {
                let (lo, hi) = prob.bounds[j];
                let s = (parent.sigma[j] * (tau_prime * common + tau * rng.normal()).exp())
                    .min(hi - lo);
                let mut v = parent.x[j];
                for _ in 0..RESAMPLE_LIMIT {
                    let cand = parent.x[j] + s * rng.normal();
                    if cand >= lo && cand <= hi {
                        v = cand;
                        break;
                    }
                }
                sigma.push(parent.sigma[j] + SIGMA_SMOOTHING * (s - parent.sigma[j]));
                x.push(v);
            }
            next.push(Individual {
                x,
                sigma,
                f: 0.0,
                phi: 0.0,
            });
        }
        pop = next;
    }

    let (mut value, mut argmax) = best.ok_or(Error::InfeasibleProblem { evaluations: evals })?;

    // Local polish: restart the simplex from the incumbent until it stalls.
    let mut refine_evals = 0;
    let mut converged = false;
    let mut step = 0.05;
    for _ in 0..8 {
        if cfg.refine_iters == 0 {
            break;
        }
        let local = nelder_mead_max(prob, &argmax, step, cfg.refine_iters, cfg.tolerance)?;
        refine_evals += local.evaluations;
        converged = local.converged;
        let gain = local.value - value;
        if gain > 0.0 {
            value = local.value;
            argmax = local.argmax;
        }
        if gain <= 1e-13 {
            break;
        }
        step *= 0.5;
    }
    if cfg.refine_iters > 0 && !prob.constraints.is_empty() {
        let local = penalty_refine(prob, &argmax, value, cfg.refine_iters, cfg.tolerance)?;
        refine_evals += local.evaluations;
        if local.value > value {
            value = local.value;
            argmax = local.argmax;
        }
    }

    Ok(Maximum {
        value,
        argmax,
        diagnostics: Diagnostics {
            evaluations: evals + refine_evals,
            generations,
            refine_evaluations: refine_evals,
            converged,
            best_feasible_trace: trace,
        },
    })
}

/// Stochastic bubble-sort ranking (best first, maximization).
fn stochastic_rank(pop: &[Individual], rng: &mut SplitMix64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    for _ in 0..pop.len() {
        let mut swapped = false;
        for j in 0..pop.len() - 1 {
            let (a, b) = (&pop[order[j]], &pop[order[j + 1]]);
            let by_objective = (a.phi == 0.0 && b.phi == 0.0) || rng.next_f64() < RANK_PROBABILITY;
            let swap = if by_objective { a.f < b.f } else { a.phi > b.phi };
            if swap {
                order.swap(j, j + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    order
}

/// Result of a local simplex search.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMaximum {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Bounded Nelder–Mead maximization from `start`. Candidate points are
/// clamped into the box; infeasible points rank below every feasible one and
/// among themselves by violation. `step` is the initial edge length as a
/// fraction of each coordinate's range.
pub fn nelder_mead_max(
    prob: &OptimizationProblem<'_>,
    start: &[f64],
    step: f64,
    max_iters: usize,
    tol: f64,
) -> Result<LocalMaximum> {
    let merit = |x: &[f64]| -> Result<f64> {
        if prob.is_feasible(x, tol) {
            Ok(-prob.objective(x)?)
        } else {
            Ok(1e100 * (1.0 + prob.violation(x)))
        }
    };
    let run = simplex_minimize(prob, merit, start, step, max_iters)?;
    let feasible = prob.is_feasible(&run.x, tol);
    Ok(LocalMaximum {
        value: if feasible { -run.fx } else { f64::NEG_INFINITY },
        argmax: run.x,
        evaluations: run.evaluations,
        converged: run.converged,
    })
}

/// Quadratic-penalty continuation from the feasible point `feasible`.
/// Each penalty stage is followed by a bisection back into the feasible set
/// along the segment to the incumbent.
fn penalty_refine(
    prob: &OptimizationProblem<'_>,
    feasible: &[f64],
    value: f64,
    max_iters: usize,
    tol: f64,
) -> Result<LocalMaximum> {
    let mut best = LocalMaximum {
        value,
        argmax: feasible.to_vec(),
        evaluations: 0,
        converged: false,
    };
    let mut x = feasible.to_vec();
    let mut step = 0.02;
    for rho in [1e4, 1e6, 1e8, 1e10, 1e12] {
        let merit = |y: &[f64]| -> Result<f64> { Ok(-prob.objective(y)? + rho * prob.violation(y)) };
        let run = simplex_minimize(prob, merit, &x, step, max_iters)?;
        best.evaluations += run.evaluations;
        best.converged = run.converged;
        x = run.x;
        step *= 0.3;

        let mut candidate = x.clone();
        if !prob.is_feasible(&candidate, tol) {
            let anchor = best.argmax.clone();
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let y = lerp(&anchor, &x, mid);
                best.evaluations += 1;
                if prob.is_feasible(&y, tol) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            candidate = lerp(&anchor, &x, lo);
        }
        let v = prob.objective(&candidate)?;
        best.evaluations += 1;
        if v > best.value {
            best.value = v;
            best.argmax = candidate;
        }
    }
    Ok(best)
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(u, v)| u + t * (v - u)).collect()
}

struct SimplexRun {
    x: Vec<f64>,
    fx: f64,
    evaluations: usize,
    converged: bool,
}

fn simplex_minimize<F>(
    prob: &OptimizationProblem<'_>,
    f: F,
    start: &[f64],
    step: f64,
    max_iters: usize,
) -> Result<SimplexRun>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let n = prob.dimension();
    let mut evals = 0usize;
    let mut eval = |x: &[f64]| -> Result<f64> {
        evals += 1;
        f(x)
    };

    let mut simplex: Vec<Vec<f64>> = vec![prob.clamp(start.to_vec())];
    for j in 0..n {
        let (lo, hi) = prob.bounds[j];
        let mut v = simplex[0].clone();
        let h = step * (hi - lo);
        v[j] = if v[j] + h <= hi { v[j] + h } else { v[j] - h };
        simplex.push(prob.clamp(v));
    }
    let mut scores = simplex
        .iter()
        .map(|x| eval(x))
        .collect::<Result<Vec<_>>>()?;

    let mut converged = false;
    for _ in 0..max_iters {
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        scores = idx.iter().map(|&i| scores[i]).collect();

        let spread = scores[n] - scores[0];
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() < 1e-15 && size < 1e-9 {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> { prob.clamp(lerp(&centroid, &simplex[n], t)) };

        let xr = along(-1.0);
        let fr = eval(&xr)?;
        if fr < scores[0] {
            let xe = along(-2.0);
            let fe = eval(&xe)?;
            if fe < fr {
                simplex[n] = xe;
                scores[n] = fe;
            } else {
                simplex[n] = xr;
                scores[n] = fr;
            }
            continue;
        }
        if fr < scores[n - 1] {
            simplex[n] = xr;
            scores[n] = fr;
            continue;
        }
        let xc = if fr < scores[n] { along(-0.5) } else { along(0.5) };
        let fc = eval(&xc)?;
        if fc < scores[n].min(fr) {
            simplex[n] = xc;
            scores[n] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for i in 1..=n {
            simplex[i] = prob.clamp(lerp(&simplex[0], &simplex[i], 0.5));
            scores[i] = eval(&simplex[i])?;
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| scores[a].total_cmp(&scores[b]))
        .unwrap_or(0);
    Ok(SimplexRun {
        x: simplex[best].clone(),
        fx: scores[best],
        evaluations: evals,
        converged,
    })
}

/// Largest number of points [`grid_oracle`] will visit.
pub const GRID_LIMIT: u128 = 100_000_000;

/// Exhaustive maximum over the tensor grid with `resolution[j]` points per
/// axis (endpoints included). A lower bound on the true maximum.
pub fn grid_oracle(prob: &OptimizationProblem<'_>, resolution: &[usize]) -> Result<(f64, Vec<f64>)> {
    if resolution.len() != prob.dimension() {
        return Err(Error::DimensionMismatch {
            expected: prob.dimension(),
            got: resolution.len(),
        });
    }
    let points: u128 = resolution.iter().map(|&r| r as u128).product();
    if points > GRID_LIMIT {
        return Err(Error::ResolutionTooLarge {
            points,
            limit: GRID_LIMIT,
        });
    }
    if resolution.iter().any(|&r| r < 2) {
        return Err(Error::Domain("grid needs at least 2 points per axis".into()));
    }
    let axes: Vec<Vec<f64>> = resolution
        .iter()
        .zip(&prob.bounds)
        .map(|(&r, &(lo, hi))| {
            (0..r)
                .map(|i| lo + (hi - lo) * i as f64 / (r - 1) as f64)
                .collect()
        })
        .collect();

    let mut counter = vec![0usize; resolution.len()];
    let mut x: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    'outer: loop {
        if prob.is_feasible(&x, 0.0) {
            let f = prob.objective(&x)?;
            if best.as_ref().is_none_or(|b| f > b.0) {
                best = Some((f, x.clone()));
            }
        }
        for axis in (0..counter.len()).rev() {
            counter[axis] += 1;
            if counter[axis] < resolution[axis] {
                x[axis] = axes[axis][counter[axis]];
                continue 'outer;
            }
            counter[axis] = 0;
            x[axis] = axes[axis][0];
        }
        break;
    }
    best.ok_or(Error::InfeasibleProblem {
        evaluations: points as usize,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// shrinking the bracket below `tol`. A maximum at `lo` or `hi` is
/// returned exactly.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    [(lo, f(lo)), (hi, f(hi)), (mid, f(mid))]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |acc, (x, v)| if v > acc.1 { (x, v) } else { acc })
}

/// Golden-section search run on `brackets` equal sub-intervals of
/// `[lo, hi]`; returns the best of the local maxima.
pub fn multistart_golden_max<F>(f: F, lo: f64, hi: f64, brackets: usize, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    if hi <= lo {
        return (lo, f(lo));
    }
    let k = brackets.max(1);
    let width = (hi - lo) / k as f64;
    (0..k)
        .map(|i| {
            let a = lo + width * i as f64;
            let b = if i + 1 == k { hi } else { a + width };
            golden_section_max(&f, a, b, tol)
        })
        .fold((lo, f64::NEG_INFINITY), |acc, r| if r.1 > acc.1 { r } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::h2;

    #[test]
    fn maximizes_binary_entropy() {
        let prob = OptimizationProblem::new(vec![(0.0, 1.0)], |x| Ok(h2(x[0]))).unwrap();
        let cfg = OptimizerConfig::for_dimension(1, 1);
        let m = maximize(&prob, &cfg).unwrap();
        assert!((m.value - 1.0).abs() < 1e-12);
        assert!((m.argmax[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn qubit_dense_coding_problem() {
        // max H(q₀) + H(E') s.t. q₀E' + (1−q₀)(1−E') ≤ 1/4.
        let e = 0.25;
        let prob = OptimizationProblem::new(vec![(0.0, 1.0), (0.0, e)], |x| {
            Ok(h2(x[0]) + h2(x[1]))
        })
        .unwrap()
        .with_constraint(move |x| x[0] * x[1] + (1.0 - x[0]) * (1.0 - x[1]) - e);
        let m = maximize(&prob, &OptimizerConfig::for_dimension(2, 42)).unwrap();
        let closed = 2.0 * h2((1.0 - (1.0 - 2.0 * e).sqrt()) / 2.0);
        assert!((m.value - closed).abs() < 1e-8, "{} vs {closed}", m.value);
        assert!(prob.is_feasible(&m.argmax, 1e-10));
    }

    #[test]
    fn empty_feasible_set_is_reported() {
        let prob = OptimizationProblem::new(vec![(0.0, 1.0)], |x| Ok(x[0]))
            .unwrap()
            .with_constraint(|_| 1.0);
        let cfg = OptimizerConfig::for_dimension(1, 3);
        assert!(matches!(
            maximize(&prob, &cfg),
            Err(Error::InfeasibleProblem { .. })
        ));
        assert!(matches!(
            grid_oracle(&prob, &[11]),
            Err(Error::InfeasibleProblem { .. })
        ));
    }

    #[test]
    fn runs_are_deterministic() {
        let make = || {
            OptimizationProblem::new(vec![(-2.0, 2.0), (-2.0, 2.0)], |x| {
                Ok(-(x[0] - 0.3).powi(2) - (x[1] + 0.1).powi(2) + (3.0 * x[0]).sin())
            })
            .unwrap()
            .with_constraint(|x| x[0] + x[1] - 0.5)
        };
        let cfg = OptimizerConfig::for_dimension(2, 99);
        let a = maximize(&make(), &cfg).unwrap();
        let b = maximize(&make(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_oracle_examples() {
        let prob = OptimizationProblem::new(vec![(0.0, 1.0)], |x| Ok(h2(x[0]))).unwrap();
        let (v, x) = grid_oracle(&prob, &[1_000_001]).unwrap();
        assert!((1.0 - v) <= 1e-12 && v <= 1.0);
        assert_eq!(x[0], 0.5);
        let huge = OptimizationProblem::new(vec![(0.0, 1.0); 3], |_| Ok(0.0)).unwrap();
        assert!(matches!(
            grid_oracle(&huge, &[1000, 1000, 1000]),
            Err(Error::ResolutionTooLarge { .. })
        ));
    }

    #[test]
    fn golden_section_examples() {
        let (x, v) = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8 && v.abs() < 1e-15);
        let (x, _) = golden_section_max(h2, 0.0, 1.0, 1e-10);
        assert!((x - 0.5).abs() < 1e-8);
        // Increasing function: the maximum sits on the right end.
        let (x, v) = golden_section_max(|x| x, 0.0, 0.25, 1e-10);
        assert_eq!((x, v), (0.25, 0.25));
    }

    #[test]
    fn multistart_finds_global_peak_of_bimodal_function() {
        let f = |x: f64| (-(x - 0.15).powi(2) / 0.001).exp() + 1.5 * (-(x - 0.85).powi(2) / 0.001).exp();
        let (x, v) = multistart_golden_max(f, 0.0, 1.0, 3, 1e-10);
        assert!((x - 0.85).abs() < 1e-6, "{x}");
        assert!((v - 1.5).abs() < 1e-9);
    }

    #[test]
    fn nelder_mead_respects_constraints() {
        let prob = OptimizationProblem::new(vec![(-1.0, 1.0), (-1.0, 1.0)], |x| Ok(x[0] + x[1]))
            .unwrap()
            .with_constraint(|x| x[0] * x[0] + x[1] * x[1] - 0.5);
        let r = nelder_mead_max(&prob, &[0.0, 0.0], 0.1, 2000, 1e-12).unwrap();
        assert!(prob.is_feasible(&r.argmax, 1e-12));
        assert!((r.value - 1.0).abs() < 1e-4, "{}", r.value);
    }
}
