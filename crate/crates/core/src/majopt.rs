//! Majorization of spectra, Schur-concavity checks and multistart Nelder–Mead
//! minimization of entropy functionals over pure states.

use crate::channels::{angular_entropy_pure, projection_entropy_pure};
use crate::coherent::closest_coherent;
use crate::entropy::{wehrl_on_rule, wehrl_pure, wehrl_stellar};
use crate::error::{domain, precondition, Error, Result};
use crate::linalg::{hermitian_eigenvalues, shannon, CMatrix, CVector, CLAMP_TOL};
use crate::quadrature::{QuadratureSpec, SphereRule};
use crate::sampling::{haar_vector, stream_rng};
use crate::su2::{highest_weight, PureState, SphereDirection, SpinLabel};
use num_complex::Complex64;

/// Default slack for prefix-sum comparisons.
pub const MAJORIZATION_EPS: f64 = 1e-9;

/// Eigenvalues sorted descending, non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumVector {
    values: Vec<f64>,
}

impl SpectrumVector {
    /// Sorts descending and sets entries in `[-1e-12, 1e-12)` to zero; more negative
    /// entries are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < -CLAMP_TOL) {
            return Err(domain(format!("spectrum entry {v} is negative or not finite")));
        }
        for v in values.iter_mut() {
            if *v < CLAMP_TOL {
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(SpectrumVector { values })
    }

    /// Spectrum of a Hermitian positive semidefinite matrix.
    pub fn from_hermitian(m: &CMatrix) -> Result<Self> {
        Self::new(hermitian_eigenvalues(m))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `-Σ λ ln λ`.
    pub fn entropy(&self) -> f64 {
        shannon(&self.values)
    }

    /// Running sums of the largest entries.
    pub fn prefix_sums(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }
}

/// Largest `Σ_{i≤k} b_i - Σ_{i≤k} a_i` over `k` (zero-padded); `≤ eps` means `a ≻ b`.
pub fn majorization_violation(a: &SpectrumVector, b: &SpectrumVector) -> f64 {
    let n = a.len().max(b.len());
    let (mut sa, mut sb) = (0.0, 0.0);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..n {
        sa += a.values.get(k).copied().unwrap_or(0.0);
        sb += b.values.get(k).copied().unwrap_or(0.0);
        worst = worst.max(sb - sa);
    }
    if n == 0 {
        0.0
    } else {
        worst
    }
}

/// `a ≻ b`: every prefix sum of `a` is at least the matching prefix sum of `b` minus
/// `eps`. Requires equal traces within `eps`.
pub fn majorizes(a: &SpectrumVector, b: &SpectrumVector, eps: f64) -> Result<bool> {
    let gap = (a.sum() - b.sum()).abs();
    if gap > eps {
        return Err(domain(format!("traces differ by {gap:e} (eps {eps:e})")));
    }
    Ok(majorization_violation(a, b) <= eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curvature {
    Concave,
    Convex,
}

/// Checks `Σ f(a_i) ≤ Σ f(b_i) + 1e-9` for concave `f` (reversed for convex `f`), given
/// `a ≻ b`.
pub fn schur_concave_check(
    f: impl Fn(f64) -> f64,
    curvature: Curvature,
    a: &SpectrumVector,
    b: &SpectrumVector,
) -> Result<bool> {
    if !majorizes(a, b, MAJORIZATION_EPS)? {
        return Err(precondition("first spectrum does not majorize the second"));
    }
    let n = a.len().max(b.len());
    let total = |s: &SpectrumVector| -> f64 { (0..n).map(|k| f(s.values.get(k).copied().unwrap_or(0.0))).sum() };
    let (fa, fb) = (total(a), total(b));
    Ok(match curvature {
        Curvature::Concave => fa <= fb + 1e-9,
        Curvature::Convex => fa + 1e-9 >= fb,
    })
}

/// Entropy functional minimized over pure states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Wehrl,
    Projection(SpinLabel),
    Angular,
}

impl Objective {
    /// Exact value at a pure state.
    pub fn evaluate(&self, psi: &PureState) -> Result<f64> {
        match *self {
            Objective::Wehrl => wehrl_pure(psi, &QuadratureSpec::default()),
            Objective::Projection(j) => projection_entropy_pure(psi, j),
            Objective::Angular => angular_entropy_pure(psi),
        }
    }

    /// Value at the highest-weight coherent state `|l,l⟩`.
    pub fn coherent_benchmark(&self, spin: SpinLabel) -> Result<f64> {
        self.evaluate(&PureState::from_parts_unchecked(spin, highest_weight(spin)))
    }
}

/// Largest `2l` accepted by [`minimize_entropy`].
pub const MAX_OPT_TWICE_L: u32 = 8;

/// Fixed rule used for the Wehrl objective when the stellar route is unavailable.
const SEARCH_RULE: (usize, usize) = (128, 256);

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub best_state: PureState,
    pub best_value: f64,
    /// Objective evaluations summed over all starts.
    pub iterations: usize,
    pub restarts: usize,
    /// Whether the winning start met the simplex tolerance.
    pub converged: bool,
    /// Index of the winning start (0 is the master stream).
    pub best_start: usize,
    pub closest_direction: SphereDirection,
    pub closest_fidelity: f64,
}

/// Settings for the simplex search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    pub initial_step: f64,
    /// Spread of objective values across the simplex at which a start stops.
    pub f_tol: f64,
    /// Simplex diameter at which a start stops.
    pub x_tol: f64,
    pub max_evaluations: usize,
    /// Fresh simplices built around the incumbent after convergence.
    pub reinitializations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            initial_step: 0.25,
            f_tol: 1e-14,
            x_tol: 1e-9,
            max_evaluations: 40_000,
            reinitializations: 3,
        }
    }
}

fn state_from_coords(spin: SpinLabel, x: &[f64]) -> PureState {
    let d = spin.dim();
    let v = CVector::from_fn(d, |i, _| Complex64::new(x[i], x[d + i]));
    let n = v.norm();
    PureState::from_parts_unchecked(spin, v.unscale(n))
}

fn normalize_coords(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

struct SimplexRun {
    x: Vec<f64>,
    value: f64,
    evaluations: usize,
    converged: bool,
}

/// Nelder–Mead with dimension-adapted coefficients; every trial point is projected back
/// to the unit sphere.
fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: Vec<f64>,
    opts: &SimplexOptions,
) -> SimplexRun {
    let n = start.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);
    let mut evaluations = 0usize;
    let mut eval = |x: &mut Vec<f64>, evaluations: &mut usize| -> f64 {
        normalize_coords(x);
        *evaluations += 1;
        f(x)
    };
    let mut best_x = start;
    let mut best_v = eval(&mut best_x, &mut evaluations);
    let mut converged = false;
    let mut step = opts.initial_step;
    for _ in 0..=opts.reinitializations {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_v));
        for k in 0..n {
            let mut x = best_x.clone();
            x[k] += if x[k] >= 0.0 { step } else { -step };
            let v = eval(&mut x, &mut evaluations);
            simplex.push((x, v));
        }
        converged = false;
        while evaluations < opts.max_evaluations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread <= opts.f_tol && diameter <= opts.x_tol {
                converged = true;
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let mut xr = along(alpha);
            let fr = eval(&mut xr, &mut evaluations);
            if fr < simplex[0].1 {
                let mut xe = along(alpha * beta);
                let fe = eval(&mut xe, &mut evaluations);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (mut xc, outside) = if fr < simplex[n].1 {
                (along(alpha * gamma), true)
            } else {
                (along(-gamma), false)
            };
            let fc = eval(&mut xc, &mut evaluations);
            if (outside && fc <= fr) || (!outside && fc < simplex[n].1) {
                simplex[n] = (xc, fc);
                continue;
            }
            let x0 = simplex[0].0.clone();
            for entry in simplex.iter_mut().skip(1) {
                let mut x: Vec<f64> = x0
                    .iter()
                    .zip(&entry.0)
                    .map(|(a, b)| a + delta * (b - a))
                    .collect();
                let v = eval(&mut x, &mut evaluations);
                *entry = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improved = simplex[0].1 < best_v - opts.f_tol;
        if simplex[0].1 <= best_v {
            best_x = simplex[0].0.clone();
            best_v = simplex[0].1;
        }
        if evaluations >= opts.max_evaluations || (!improved && converged) {
            break;
        }
        step = (step * 0.1).max(1e-4);
    }
    SimplexRun {
        x: best_x,
        value: best_v,
        evaluations,
        converged,
    }
}

/// Multistart minimization of `objective` over spin-`l` pure states.
///
/// Runs `1 + restarts` starts; start `i` draws its Haar-random initial state from
/// `stream_rng(seed, i)`. The winner has the lowest value, ties going to the lowest
/// start index. The reported value is re-evaluated exactly at the winning state.
pub fn minimize_entropy(
    spin: SpinLabel,
    objective: Objective,
    restarts: usize,
    seed: u64,
) -> Result<OptimizationResult> {
    minimize_entropy_with(spin, objective, restarts, seed, &SimplexOptions::default())
}

pub fn minimize_entropy_with(
    spin: SpinLabel,
    objective: Objective,
    restarts: usize,
    seed: u64,
    opts: &SimplexOptions,
) -> Result<OptimizationResult> {
    if spin.twice() > MAX_OPT_TWICE_L {
        return Err(Error::Resource {
            what: "2l for entropy minimization",
            value: spin.twice() as usize,
            limit: MAX_OPT_TWICE_L as usize,
        });
    }
    if spin.twice() == 0 {
        return Err(domain("spin 0 has a single pure state"));
    }
    let d = spin.dim();
    let fallback = SphereRule::new(
        &QuadratureSpec::new(SEARCH_RULE.0, SEARCH_RULE.1, 1e-9)?,
        spin.twice() as usize,
    );
    let mut failure: Option<Error> = None;
    let mut f = |x: &[f64]| -> f64 {
        let psi = state_from_coords(spin, x);
        let value = match objective {
            Objective::Wehrl => match wehrl_stellar(&psi) {
                Ok(v) => Ok(v),
                Err(Error::Internal(_)) => Ok(wehrl_on_rule(&psi.to_density(), &fallback)),
                Err(e) => Err(e),
            },
            other => other.evaluate(&psi),
        };
        match value {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    };
    let mut best: Option<(usize, SimplexRun)> = None;
    let mut evaluations = 0;
    for start in 0..=restarts {
        let mut rng = stream_rng(seed, start as u64);
        let v = haar_vector(&mut rng, d);
        let x0: Vec<f64> = v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect();
        let run = nelder_mead(&mut f, x0, opts);
        evaluations += run.evaluations;
        let better = match &best {
            None => true,
            Some((_, b)) => run.value < b.value,
        };
        if better {
            best = Some((start, run));
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let (best_start, run) = best.expect("at least one start");
    let best_state = state_from_coords(spin, &run.x);
    let best_value = objective.evaluate(&best_state)?;
    if !best_value.is_finite() {
        return Err(Error::Internal("optimizer produced a non-finite value".into()));
    }
    let (closest_direction, closest_fidelity) = closest_coherent(&best_state);
    Ok(OptimizationResult {
        best_state,
        best_value,
        iterations: evaluations,
        restarts,
        converged: run.converged,
        best_start,
        closest_direction,
        closest_fidelity,
    })
}
