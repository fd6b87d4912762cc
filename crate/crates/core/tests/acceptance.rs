//! End-to-end acceptance checks. Runs as a plain binary so that every line is printed
//! even when all checks pass; exits non-zero if any check fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use wehrl_core::channels::{
    angular_gram, channel_covariance_defect, projection_channel, projection_dual_gram,
    projection_entropy_pure, projection_kraus, projection_shift, Channel,
};
use wehrl_core::coherent::{coherent_state, state_from_roots, StellarRoots};
use wehrl_core::entropy::{
    coherent_moment, coherent_wehrl, renyi_wehrl_moment, renyi_wehrl_projector, wehrl,
    wehrl_closed, wehrl_pure, wehrl_stellar, ChordalData, CHORDAL_SCALE, RENYI_TENSOR_LIMIT,
};
use wehrl_core::fock::{
    cloning_channel, decompose_measure_prepare, sun_coherent_majorization_test, SymmetricSpace,
};
use wehrl_core::linalg::{identity, max_abs_diff, CMatrix};
use wehrl_core::majopt::{minimize_entropy, Objective, SpectrumVector};
use wehrl_core::quadrature::QuadratureSpec;
use wehrl_core::sampling::{
    haar_pure_state, random_density, random_density_matrix, random_direction, seeded_rng,
};
use wehrl_core::{DensityMatrix, SpinLabel};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn spectra_gap(a: &SpectrumVector, b: &SpectrumVector) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.values().get(k).copied().unwrap_or(0.0);
            let y = b.values().get(k).copied().unwrap_or(0.0);
            (x - y).abs()
        })
        .fold(0.0, f64::max)
}

fn coherent_wehrl_minimum() -> Outcome {
    let start = Instant::now();
    let q = QuadratureSpec::default();
    let mut rng = seeded_rng(1);
    let mut worst = 0.0f64;
    for t in 1..=8 {
        let spin = SpinLabel::from_twice(t);
        for _ in 0..2 {
            let psi = coherent_state(spin, &random_direction(&mut rng));
            let s = wehrl(&psi.to_density(), &q).unwrap();
            worst = worst.max((s - coherent_wehrl(spin)).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(10),
        format!("max |S_W - 2l/(2l+1)| = {worst:.2e}, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn maximally_mixed_wehrl() -> Outcome {
    let q = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for t in 1..=8 {
        let spin = SpinLabel::from_twice(t);
        let s = wehrl(&DensityMatrix::maximally_mixed(spin), &q).unwrap();
        worst = worst.max((s - (spin.dim() as f64).ln()).abs());
    }
    outcome(worst <= 1e-8, format!("max |S_W - ln(2l+1)| = {worst:.2e}"))
}

fn lieb_sampling() -> Outcome {
    let q = QuadratureSpec::default();
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    let mut cross = 0.0f64;
    for t in 1..=6 {
        let spin = SpinLabel::from_twice(t);
        let bound = coherent_wehrl(spin);
        let mut rng = seeded_rng(300 + t as u64);
        for k in 0..2000 {
            let psi = haar_pure_state(&mut rng, spin);
            let s = wehrl_pure(&psi, &q).unwrap();
            if s < bound - 1e-9 {
                violations += 1;
            }
            min_margin = min_margin.min(s - bound);
            if k < 10 {
                let quad = wehrl(&psi.to_density(), &q).unwrap();
                cross = cross.max((quad - s).abs());
            }
        }
    }
    outcome(
        violations == 0 && cross <= 1e-8,
        format!(
            "12000 states, {violations} violations, min S_W - bound = {min_margin:.3e}, \
             stellar vs quadrature {cross:.1e}"
        ),
    )
}

fn closed_forms() -> Outcome {
    let q = QuadratureSpec::default();
    let mut rng = seeded_rng(4);
    let mut worst = 0.0f64;
    for t in [2u32, 3] {
        let spin = SpinLabel::from_twice(t);
        for _ in 0..100 {
            let dirs = (0..t).map(|_| random_direction(&mut rng)).collect();
            let roots = StellarRoots::new(spin, dirs).unwrap();
            let psi = state_from_roots(&roots).unwrap();
            let closed = wehrl_closed(spin, &ChordalData::from_roots(&roots)).unwrap();
            let quad = wehrl(&psi.to_density(), &q).unwrap();
            worst = worst.max((closed - quad).abs());
        }
    }
    let s1 = wehrl_closed(SpinLabel::ONE, &ChordalData::new(vec![0.0]).unwrap()).unwrap();
    let s32 = wehrl_closed(SpinLabel::from_twice(3), &ChordalData::new(vec![0.0; 3]).unwrap()).unwrap();
    outcome(
        worst <= 1e-7 && s1 == 2.0 / 3.0 && s32 == 0.75,
        format!(
            "chord scale {CHORDAL_SCALE}, max |closed - quadrature| = {worst:.2e}, \
             coincident roots {s1} and {s32}"
        ),
    )
}

fn channel_algebra() -> Outcome {
    let mut rng = seeded_rng(5);
    let (mut kraus_worst, mut cov_worst, mut dual_worst) = (0.0f64, 0.0f64, 0.0f64);
    let js: Vec<u32> = (1..=6).chain([20, 200]).collect();
    for tl in 1..=6 {
        let l = SpinLabel::from_twice(tl);
        for &tj in &js {
            let j = SpinLabel::from_twice(tj);
            let sum = projection_kraus(l, j)
                .iter()
                .fold(CMatrix::zeros(l.dim(), l.dim()), |acc, k| acc + k.adjoint() * k);
            kraus_worst = kraus_worst.max(max_abs_diff(&sum, &identity(l.dim())));
            let rho = random_density_matrix(&mut rng, l);
            let d = channel_covariance_defect(Channel::Projection(j), &rho, &random_direction(&mut rng))
                .unwrap();
            cov_worst = cov_worst.max(d);
            let psi = haar_pure_state(&mut rng, l);
            let dual = SpectrumVector::from_hermitian(&projection_dual_gram(&psi, j)).unwrap();
            let primal = projection_channel(&psi.to_density(), j).unwrap();
            dual_worst = dual_worst.max(spectra_gap(&dual, primal.spectrum()));
        }
        let rho = random_density_matrix(&mut rng, l);
        let d = channel_covariance_defect(Channel::Angular, &rho, &random_direction(&mut rng)).unwrap();
        cov_worst = cov_worst.max(d);
    }
    outcome(
        kraus_worst <= 1e-10 && cov_worst <= 1e-10 && dual_worst <= 1e-10,
        format!(
            "Kraus completeness {kraus_worst:.1e}, covariance {cov_worst:.1e}, \
             primal vs dual spectra {dual_worst:.1e}"
        ),
    )
}

fn shift_and_convergence() -> Outcome {
    let start = Instant::now();
    let js = [2u32, 20, 200].map(SpinLabel::from_twice);
    let mut min_gap = f64::INFINITY;
    let mut worst_increase = f64::NEG_INFINITY;
    for tl in 1..=6 {
        let l = SpinLabel::from_twice(tl);
        let mut rng = seeded_rng(600 + tl as u64);
        for _ in 0..200 {
            let psi = haar_pure_state(&mut rng, l);
            let sw = wehrl_stellar(&psi).unwrap();
            let gaps: Vec<f64> = js
                .iter()
                .map(|&j| sw - projection_entropy_pure(&psi, j).unwrap() - projection_shift(l, j))
                .collect();
            min_gap = min_gap.min(gaps.iter().copied().fold(f64::INFINITY, f64::min));
            worst_increase = worst_increase.max(gaps[1] - gaps[0]).max(gaps[2] - gaps[1]);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        min_gap >= -1e-8 && worst_increase <= 1e-12 && elapsed < Duration::from_secs(60),
        format!(
            "min gap {min_gap:.3e}, largest gap increase in j {worst_increase:.1e}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn renyi_cross_oracle() -> Outcome {
    let mut rng = seeded_rng(7);
    let (mut cross, mut coh) = (0.0f64, 0.0f64);
    let mut cases = 0;
    for t in 1..=6u32 {
        let spin = SpinLabel::from_twice(t);
        for n in 1..=4u32 {
            if (spin.dim() as f64).powi(n as i32) > RENYI_TENSOR_LIMIT as f64 {
                continue;
            }
            let q = QuadratureSpec::exact_for_degree(t as usize * n as usize);
            for k in 0..4 {
                let rho = if k % 2 == 0 {
                    random_density_matrix(&mut rng, spin)
                } else {
                    haar_pure_state(&mut rng, spin).to_density()
                };
                let a = renyi_wehrl_moment(&rho, n, &q).unwrap();
                let b = renyi_wehrl_projector(&rho, n).unwrap();
                cross = cross.max((a - b).abs());
                cases += 1;
            }
            let c = coherent_state(spin, &random_direction(&mut rng)).to_density();
            let exact = coherent_moment(spin, n);
            coh = coh
                .max((renyi_wehrl_moment(&c, n, &q).unwrap() - exact).abs())
                .max((renyi_wehrl_projector(&c, n).unwrap() - exact).abs());
        }
    }
    outcome(
        cross <= 1e-10 && coh <= 1e-10,
        format!("{cases} states, moment vs projector {cross:.1e}, coherent vs analytic {coh:.1e}"),
    )
}

fn fock_cross_implementation() -> Outcome {
    let mut rng = seeded_rng(8);
    let mut worst = 0.0f64;
    for m in 1..=3usize {
        let space = SymmetricSpace::new(2, m).unwrap();
        let l = SpinLabel::from_twice(m as u32);
        for k in 1..=2usize {
            let j = SpinLabel::from_twice(k as u32);
            for _ in 0..100 {
                let rho = random_density(&mut rng, space.dim());
                let clone = cloning_channel(&space, &rho, k).unwrap();
                let proj = projection_channel(&DensityMatrix::new(l, rho).unwrap(), j).unwrap();
                worst = worst.max(spectra_gap(clone.spectrum(), proj.spectrum()));
            }
        }
    }
    outcome(worst <= 1e-10, format!("max spectrum difference {worst:.1e}"))
}

fn lieb_solovej_majorization() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for n in 2..=3 {
        for m in 1..=3 {
            for k in 1..=3 {
                let seed = (100 * n + 10 * m + k) as u64;
                let r = sun_coherent_majorization_test(n, m, k, 500, seed).unwrap();
                failures += r.failures;
                worst = worst.max(r.worst_violation);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && worst <= 1e-9 && elapsed < Duration::from_secs(120),
        format!(
            "9000 states, {failures} failures, worst partial-sum violation {worst:.1e}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn measure_prepare_decomposition() -> Outcome {
    let (mut min_c, mut drift, mut residual) = (f64::INFINITY, 0.0f64, 0.0f64);
    for n in 2..=3 {
        for m in 1..=2 {
            for k in 0..=2 {
                let a = decompose_measure_prepare(n, m, k, 20, 1000 + n as u64 * 10 + m as u64);
                let b = decompose_measure_prepare(n, m, k, 20, 2000 + n as u64 * 10 + m as u64);
                let (a, b) = match (a, b) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => return outcome(false, format!("N={n} M={m} k={k}: {e}")),
                };
                residual = residual.max(a.residual).max(b.residual);
                for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
                    min_c = min_c.min(*x).min(*y);
                    drift = drift.max((x - y).abs());
                }
            }
        }
    }
    outcome(
        min_c >= -1e-9 && drift <= 1e-9 && residual <= 1e-9,
        format!("min C {min_c:.3e}, batch drift {drift:.1e}, residual {residual:.1e}"),
    )
}

fn optimizer_benchmark() -> Outcome {
    let (mut err, mut fid) = (0.0f64, 1.0f64);
    for t in 1..=4 {
        let spin = SpinLabel::from_twice(t);
        let r = minimize_entropy(spin, Objective::Wehrl, 16, 11).unwrap();
        err = err.max((r.best_value - coherent_wehrl(spin)).abs());
        fid = fid.min(r.closest_fidelity);
    }
    outcome(
        err <= 1e-6 && fid >= 1.0 - 1e-6,
        format!("max |min - 2l/(2l+1)| = {err:.1e}, min coherent fidelity 1 - {:.1e}", 1.0 - fid),
    )
}

fn angular_channel_checks() -> Outcome {
    let mut rng = seeded_rng(12);
    let mut worst = 0.0f64;
    for t in 1..=8 {
        let spin = SpinLabel::from_twice(t);
        let l = spin.value();
        let expect = SpectrumVector::new(vec![l * l, l, 0.0]).unwrap();
        let psi = coherent_state(spin, &random_direction(&mut rng));
        let s = SpectrumVector::from_hermitian(&angular_gram(&psi).unwrap()).unwrap();
        for (a, b) in s.values().iter().zip(expect.values()) {
            worst = worst.max((a - b / spin.casimir()).abs());
        }
    }
    let mut scan = Vec::new();
    for t in 1..=4 {
        let spin = SpinLabel::from_twice(t);
        let bench = Objective::Angular.coherent_benchmark(spin).unwrap();
        let r = minimize_entropy(spin, Objective::Angular, 8, 12).unwrap();
        let gap = r.best_value - bench;
        scan.push(format!("2l={t}: min - coherent = {gap:.1e}{}", if gap < -1e-9 { " (below coherent)" } else { "" }));
    }
    outcome(
        worst <= 1e-12,
        format!("Gram spectrum error {worst:.1e}; scan (informational) {}", scan.join(", ")),
    )
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Outcome); 12] = [
        ("coherent Wehrl value", coherent_wehrl_minimum),
        ("maximally mixed Wehrl value", maximally_mixed_wehrl),
        ("Lieb bound on Haar samples", lieb_sampling),
        ("spin-1 and spin-3/2 closed forms", closed_forms),
        ("projection channel algebra", channel_algebra),
        ("shift inequality and convergence in j", shift_and_convergence),
        ("Renyi moment cross-check", renyi_cross_oracle),
        ("SU(2) vs Fock cloning spectra", fock_cross_implementation),
        ("coherent majorization of cloning outputs", lieb_solovej_majorization),
        ("measure-and-prepare decomposition", measure_prepare_decomposition),
        ("optimizer recovers coherent minimum", optimizer_benchmark),
        ("angular channel Gram spectrum", angular_channel_checks),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "acceptance {:>2} {:<42} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} passed, {} failed", checks.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
