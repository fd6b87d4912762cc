use std::str::FromStr;

use num_complex::Complex64;
use serde_json::Value;
use wehrl_core::channels::{angular_entropy_pure, projection_entropy_pure, projection_shift};
use wehrl_core::entropy::{renyi_wehrl_entropy, renyi_wehrl_moment, von_neumann, wehrl_pure};
use wehrl_core::fock::{
    cloning_channel, coherent_condensate, decompose_measure_prepare, measure_prepare_channel, random_sector_state,
    sun_coherent_majorization_test, SymmetricSpace,
};
use wehrl_core::linalg::{outer, CVector};
use wehrl_core::majopt::{minimize_entropy, Objective};
use wehrl_core::quadrature::QuadratureSpec;
use wehrl_core::sampling::{haar_pure_state, seeded_rng};
use wehrl_core::{PureState, SpinLabel};

use crate::report::{csv_table, num, RunReport};
use crate::CliError;

/// Largest `2l` accepted by `figure-projection`.
pub const FIGURE_MAX_TWICE_L: u32 = 8;
/// Largest `2j` accepted by `figure-projection`.
pub const FIGURE_MAX_TWICE_J: u32 = 200;

fn parse_spin(s: &str) -> Result<SpinLabel, CliError> {
    SpinLabel::from_str(s).map_err(|e| CliError::Usage(e.to_string()))
}

/// An entropy selectable with `entropy --which`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Wehrl,
    VonNeumann,
    Projection(SpinLabel),
    Angular,
    Renyi(u32),
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        match s.split_once(':') {
            None => match s {
                "wehrl" => Ok(Quantity::Wehrl),
                "vonneumann" => Ok(Quantity::VonNeumann),
                "angular" => Ok(Quantity::Angular),
                _ => Err(CliError::Usage(format!("unknown quantity {s:?}"))),
            },
            Some(("projection", j)) => Ok(Quantity::Projection(parse_spin(j)?)),
            Some(("renyi", n)) => match n.trim().parse::<u32>() {
                Ok(n) if n >= 2 => Ok(Quantity::Renyi(n)),
                _ => Err(CliError::Usage(format!("Rényi order must be an integer ≥ 2, got {n:?}"))),
            },
            _ => Err(CliError::Usage(format!("unknown quantity {s:?}"))),
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Wehrl => write!(f, "wehrl"),
            Quantity::VonNeumann => write!(f, "vonneumann"),
            Quantity::Projection(j) => write!(f, "projection:{j}"),
            Quantity::Angular => write!(f, "angular"),
            Quantity::Renyi(n) => write!(f, "renyi:{n}"),
        }
    }
}

fn quad(tol: f64) -> QuadratureSpec {
    QuadratureSpec {
        tol,
        ..QuadratureSpec::default()
    }
}

pub fn entropy(command: Vec<String>, psi: &PureState, which: &[Quantity], tol: f64) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command, &["quantity", "value", "shifted", "moment"]);
    report.tolerances.insert("quadrature".into(), tol);
    let spin = psi.spin();
    for &q in which {
        let (value, shifted, moment) = match q {
            Quantity::Wehrl => (wehrl_pure(psi, &quad(tol))?, None, None),
            Quantity::VonNeumann => (von_neumann(&psi.to_density()), None, None),
            Quantity::Projection(j) => {
                let s = projection_entropy_pure(psi, j)?;
                (s, Some(s + projection_shift(spin, j)), None)
            }
            Quantity::Angular => (angular_entropy_pure(psi)?, None, None),
            Quantity::Renyi(n) => {
                let rule = QuadratureSpec::exact_for_degree(spin.twice() as usize * n as usize);
                let m = renyi_wehrl_moment(&psi.to_density(), n, &rule)?;
                (renyi_wehrl_entropy(m, n), None, Some(m))
            }
        };
        report.push(vec![
            Value::from(q.to_string()),
            num(value),
            shifted.map_or(Value::Null, num),
            moment.map_or(Value::Null, num),
        ]);
    }
    Ok(report)
}

/// Wehrl entropy against shift-corrected projection entropies of Haar-random states, one
/// CSV row per state. `gap_j = S_W - shifted_j`; `monotone` says whether the gaps are
/// non-increasing in `j`.
pub fn figure_projection(spin: SpinLabel, samples: usize, js: &[SpinLabel], seed: u64, tol: f64) -> Result<String, CliError> {
    if spin.twice() > FIGURE_MAX_TWICE_L {
        return Err(wehrl_core::Error::Resource {
            what: "2l",
            value: spin.twice() as usize,
            limit: FIGURE_MAX_TWICE_L as usize,
        }
        .into());
    }
    let mut js = js.to_vec();
    js.sort();
    js.dedup();
    if js.is_empty() {
        return Err(CliError::Usage("empty j list".into()));
    }
    if let Some(j) = js.iter().find(|j| j.twice() > FIGURE_MAX_TWICE_J) {
        return Err(wehrl_core::Error::Resource {
            what: "2j",
            value: j.twice() as usize,
            limit: FIGURE_MAX_TWICE_J as usize,
        }
        .into());
    }
    let mut columns = vec!["sample".to_string(), "s_wehrl".to_string()];
    columns.extend(js.iter().map(|j| format!("shifted_pro_j{j}")));
    columns.extend(js.iter().map(|j| format!("gap_j{j}")));
    columns.extend(["shift_ok".to_string(), "monotone".to_string()]);
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let psi = haar_pure_state(&mut rng, spin);
        let sw = wehrl_pure(&psi, &quad(tol))?;
        let shifted = js
            .iter()
            .map(|&j| Ok(projection_entropy_pure(&psi, j)? + projection_shift(spin, j)))
            .collect::<Result<Vec<f64>, CliError>>()?;
        let gaps: Vec<f64> = shifted.iter().map(|s| sw - s).collect();
        let mut row = vec![Value::from(i), num(sw)];
        row.extend(shifted.iter().map(|&s| num(s)));
        row.extend(gaps.iter().map(|&g| num(g)));
        row.push(Value::from(gaps.iter().all(|&g| g >= -tol)));
        row.push(Value::from(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12)));
        rows.push(row);
    }
    csv_table(&columns, &rows)
}

pub fn parse_objective(s: &str) -> Result<Objective, CliError> {
    match s.trim() {
        "wehrl" => Ok(Objective::Wehrl),
        "angular" => Ok(Objective::Angular),
        other => match other.split_once(':') {
            Some(("projection", j)) => Ok(Objective::Projection(parse_spin(j)?)),
            _ => Err(CliError::Usage(format!("unknown objective {other:?}"))),
        },
    }
}

/// Sampled and optimized minima against the coherent benchmark. The flag is set when a
/// value below the benchmark by more than `tol` was found.
pub fn scan_conjecture(
    command: Vec<String>,
    objective: Objective,
    spin: SpinLabel,
    samples: usize,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<(RunReport, bool), CliError> {
    let mut report = RunReport::new(command, &["quantity", "value"]);
    report.seed = Some(seed);
    report.tolerances.insert("gap".into(), tol);
    let benchmark = objective.coherent_benchmark(spin)?;
    let mut rng = seeded_rng(seed);
    let mut sample_min = f64::INFINITY;
    for _ in 0..samples {
        sample_min = sample_min.min(objective.evaluate(&haar_pure_state(&mut rng, spin))?);
    }
    let opt = minimize_entropy(spin, objective, restarts, seed)?;
    let best = sample_min.min(opt.best_value);
    let gap = best - benchmark;
    let below = gap < -tol;
    for (name, v) in [
        ("sample_minimum", num(sample_min)),
        ("optimizer_minimum", num(opt.best_value)),
        ("coherent_benchmark", num(benchmark)),
        ("gap", num(gap)),
        ("closest_coherent_fidelity", num(opt.closest_fidelity)),
        ("optimizer_converged", Value::from(opt.converged)),
        ("below_benchmark", Value::from(below)),
    ] {
        report.push(vec![Value::from(name), v]);
    }
    if objective == Objective::Angular {
        report
            .notes
            .push("angular objective: coherent minimality is an open conjecture, result is informational".into());
    }
    Ok((report, below))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SunMode {
    Clone,
    Prepare,
    Decompose,
    Majorize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SunInput {
    /// Condensate of the first mode.
    Coherent,
    /// Haar-random state drawn from the seed.
    Random,
}

/// Runs a symmetric-Fock operation. The flag is set when `majorize` saw failures.
#[allow(clippy::too_many_arguments)]
pub fn sun(
    command: Vec<String>,
    modes: usize,
    bosons: usize,
    k: usize,
    mode: SunMode,
    input: SunInput,
    samples: usize,
    seed: u64,
) -> Result<(RunReport, bool), CliError> {
    let mut report = RunReport::new(command, &["quantity", "index", "value"]);
    report.seed = Some(seed);
    let mut flagged = false;
    let push = |r: &mut RunReport, q: &str, i: Option<usize>, v: Value| {
        r.push(vec![Value::from(q), i.map_or(Value::Null, Value::from), v]);
    };
    match mode {
        SunMode::Clone | SunMode::Prepare => {
            let space = SymmetricSpace::new(modes, bosons)?;
            let psi = match input {
                SunInput::Coherent => {
                    let mut e1 = CVector::zeros(modes);
                    e1[0] = Complex64::new(1.0, 0.0);
                    coherent_condensate(&space, &e1)?
                }
                SunInput::Random => random_sector_state(&mut seeded_rng(seed), &space),
            };
            let out = if mode == SunMode::Clone {
                cloning_channel(&space, &outer(&psi), k)?
            } else {
                measure_prepare_channel(&space, &psi, k)?
            };
            for (i, &x) in out.spectrum().values().iter().enumerate() {
                push(&mut report, "eigenvalue", Some(i), num(x));
            }
            push(&mut report, "entropy", None, num(out.entropy()));
        }
        SunMode::Decompose => {
            report.tolerances.insert("residual".into(), wehrl_core::fock::DECOMPOSITION_THRESHOLD);
            let d = decompose_measure_prepare(modes, bosons, k, samples, seed)?;
            for (l, (&c, &inc)) in d.coefficients.iter().zip(&d.included).enumerate() {
                push(&mut report, "coefficient", Some(l), if inc { num(c) } else { Value::Null });
            }
            push(&mut report, "residual", None, num(d.residual));
            if d.included.iter().any(|i| !i) {
                report.notes.push("null coefficients belong to terms with k - l > M and are not fitted".into());
            }
        }
        SunMode::Majorize => {
            report.tolerances.insert("majorization".into(), wehrl_core::majopt::MAJORIZATION_EPS);
            let r = sun_coherent_majorization_test(modes, bosons, k, samples, seed)?;
            push(&mut report, "samples", None, Value::from(r.samples));
            push(&mut report, "passes", None, Value::from(r.passes));
            push(&mut report, "failures", None, Value::from(r.failures));
            push(&mut report, "worst_violation", None, num(r.worst_violation));
            for (i, &x) in r.coherent_spectrum.values().iter().enumerate() {
                push(&mut report, "coherent_eigenvalue", Some(i), num(x));
            }
            flagged = r.failures > 0;
        }
    }
    Ok((report, flagged))
}
