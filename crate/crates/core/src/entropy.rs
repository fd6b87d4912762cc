//! Entropy functionals: von Neumann, POVM, Wehrl (quadrature and closed forms for
//! spin 1 and 3/2) and integer Rényi–Wehrl moments by two independent routes.

use crate::coherent::{state_from_roots, stellar_roots, HusimiSymbol};
use crate::error::{domain, precondition, Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, identity, max_abs_diff, outer, shannon, trace, xlnx, CMatrix, CVector, ONE,
};
use crate::quadrature::{legendre_all, QuadratureSpec, SphereRule};
use crate::su2::{clamp_spectrum, highest_weight, DensityMatrix, PureState, SpinLabel};

/// Refinement stops with an error once `n_theta` would exceed this.
pub const MAX_THETA_NODES: usize = 4096;

/// Rényi projector route guard on `(2l+1)^n`.
pub const RENYI_TENSOR_LIMIT: usize = 100_000;

/// `-Σ λ ln λ` over the clamped spectrum.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    shannon(&rho.eigenvalues())
}

/// Entropy of the outcome distribution `p_n = tr(ρ E_n)` of a POVM.
pub fn povm_entropy(rho: &DensityMatrix, effects: &[CMatrix]) -> Result<f64> {
    let d = rho.spin().dim();
    if effects.is_empty() {
        return Err(domain("empty effect set"));
    }
    let mut sum = CMatrix::zeros(d, d);
    for (k, e) in effects.iter().enumerate() {
        if e.shape() != (d, d) {
            return Err(domain(format!("effect {k} has shape {:?}, expected {d}x{d}", e.shape())));
        }
        if let Some(&min) = hermitian_eigenvalues(e).last() {
            if min < -1e-10 {
                return Err(domain(format!("effect {k} is not positive (eigenvalue {min:e})")));
            }
        }
        sum += e;
    }
    let defect = max_abs_diff(&sum, &identity(d));
    if defect > 1e-10 {
        return Err(domain(format!("effects sum to identity only within {defect:e}")));
    }
    let probs: Vec<f64> = effects
        .iter()
        .map(|e| trace(&(rho.matrix() * e)).re.max(0.0))
        .collect();
    Ok(shannon(&probs))
}

/// `-(2l+1) ∫ dΩ/4π ρ(Ω) ln ρ(Ω)` on a fixed rule (no refinement).
pub fn wehrl_on_rule(rho: &DensityMatrix, rule: &SphereRule) -> f64 {
    let mut sym = HusimiSymbol::new(rho);
    -sym.integrate(rule, xlnx)
}

/// Wehrl entropy by product quadrature with node doubling.
///
/// Starts from `quad` (raised to a rule that at least resolves the Husimi
/// polynomial) and doubles both node counts until two successive values differ by
/// less than `quad.tol`.
pub fn wehrl(rho: &DensityMatrix, quad: &QuadratureSpec) -> Result<f64> {
    let spin = rho.spin();
    let t = spin.twice() as usize;
    let mut spec = *quad;
    spec.n_theta = spec.n_theta.max(t + 1);
    spec.n_phi = spec.n_phi.max(2 * t + 1);
    let mut sym = HusimiSymbol::new(rho);
    let mut previous = -sym.integrate(&SphereRule::new(&spec, t), xlnx);
    let mut refinements = 0;
    let mut change = f64::INFINITY;
    loop {
        let next_spec = spec.doubled();
        if next_spec.n_theta > MAX_THETA_NODES {
            return Err(Error::Convergence {
                iterations: refinements,
                last_change: change,
                tol: quad.tol,
            });
        }
        let value = -sym.integrate(&SphereRule::new(&next_spec, t), xlnx);
        refinements += 1;
        change = (value - previous).abs();
        if change < quad.tol {
            return Ok(value);
        }
        previous = value;
        spec = next_spec;
    }
}

/// Largest admissible `‖ψ_rec - e^{iα} ψ‖` between a pure state and the state rebuilt
/// from its stellar roots.
pub const STELLAR_RESIDUAL: f64 = 1e-10;

/// Exact Wehrl entropy of a pure state from its stellar representation.
///
/// With `ρ(Ω) = K Π_i (1 + ω_i·Ω)/2`, `ln ρ` splits into `ln K` plus terms
/// `g(ω_i·Ω)`, `g(x) = ln((1+x)/2)`, whose Legendre coefficients are
/// `g_0 = -1`, `g_L = (2L+1)(-1)^{L+1}/(L(L+1))`. Against the degree-`2l` polynomial `ρ`
/// only `L ≤ 2l` survive, so every integral below is a polynomial one done exactly.
///
/// Fails with an internal error when the roots do not reproduce the state to
/// [`STELLAR_RESIDUAL`].
pub fn wehrl_stellar(psi: &PureState) -> Result<f64> {
    let spin = psi.spin();
    let t = spin.twice() as usize;
    if t == 0 {
        return Ok(0.0);
    }
    let roots = stellar_roots(psi)?;
    let rebuilt = state_from_roots(&roots)?;
    let overlap = rebuilt.amplitudes().dotc(psi.amplitudes());
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
    let residual = (rebuilt.amplitudes() * phase - psi.amplitudes()).norm();
    if residual > STELLAR_RESIDUAL {
        return Err(Error::Internal(format!(
            "stellar reconstruction residual {residual:e} exceeds {STELLAR_RESIDUAL:e}"
        )));
    }
    let stars: Vec<[f64; 3]> = roots.roots().iter().map(|r| r.to_unit_vector()).collect();
    let coeff: Vec<f64> = (0..=t)
        .map(|l| {
            if l == 0 {
                -1.0
            } else {
                let lf = l as f64;
                let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
                sign * (2.0 * lf + 1.0) / (lf * (lf + 1.0))
            }
        })
        .collect();
    let rule = SphereRule::new(&QuadratureSpec::exact_for_degree(2 * t), 0);
    let mut mass = 0.0;
    let mut cross = 0.0;
    for &(u, s, w) in &rule.rings {
        for &phi in &rule.phis {
            let omega = [s * phi.cos(), s * phi.sin(), u];
            let dots: Vec<f64> = stars
                .iter()
                .map(|n| (n[0] * omega[0] + n[1] * omega[1] + n[2] * omega[2]).clamp(-1.0, 1.0))
                .collect();
            let p: f64 = dots.iter().map(|x| 0.5 * (1.0 + x)).product();
            mass += w * p;
            let g: f64 = dots
                .iter()
                .map(|&x| {
                    legendre_all(t, x)
                        .iter()
                        .zip(&coeff)
                        .map(|(pl, c)| pl * c)
                        .sum::<f64>()
                })
                .sum();
            cross += w * p * g;
        }
    }
    let d = spin.dim() as f64;
    // K = 1/(d * mass); S = -ln K - d K cross
    Ok((d * mass).ln() - cross / mass)
}

/// Wehrl entropy of a pure state: the exact stellar route, or adaptive quadrature when
/// the stellar reconstruction is not accurate enough.
pub fn wehrl_pure(psi: &PureState, quad: &QuadratureSpec) -> Result<f64> {
    match wehrl_stellar(psi) {
        Ok(v) => Ok(v),
        Err(Error::Internal(_)) => wehrl(&psi.to_density(), quad),
        Err(e) => Err(e),
    }
}

/// Coherent-state Wehrl entropy `2l/(2l+1)`.
pub fn coherent_wehrl(spin: SpinLabel) -> f64 {
    let t = spin.twice() as f64;
    t / (t + 1.0)
}

/// Converts unit-sphere squared chord lengths into the convention used by the spin-1
/// and spin-3/2 closed forms: squared chords on a sphere of unit *diameter*, so each
/// value lies in `[0, 1]`.
///
/// Fixed by matching the closed forms against quadrature (see the calibration test).
pub const CHORDAL_SCALE: f64 = 0.25;

/// Squared chordal distances between stellar points (one value for spin 1,
/// three for spin 3/2), already in the closed-form convention.
#[derive(Clone, Debug, PartialEq)]
pub struct ChordalData {
    values: Vec<f64>,
}

impl ChordalData {
    /// Values must lie in `[0, 1]` (the unit-diameter convention).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(-1e-15..=1.0 + 1e-12).contains(*v)) {
            return Err(domain(format!("squared chord {v} outside [0, 1]")));
        }
        Ok(ChordalData { values })
    }

    /// From the stellar points of a state.
    pub fn from_roots(roots: &crate::coherent::StellarRoots) -> Self {
        ChordalData {
            values: roots
                .pairwise_chord_sq()
                .into_iter()
                .map(|c| (c * CHORDAL_SCALE).clamp(0.0, 1.0))
                .collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Closed-form Wehrl entropy for spin 1 (one chord `μ`) and spin 3/2 (chords
/// `ε, μ, ν`).
///
/// spin 1:   `S = 2/3 + c (μ/2 + (1/c) ln(1/c))`, `1/c = 1 - μ/2`
/// spin 3/2: `S = 3/4 + c ((ε+μ+ν)/3 - (εμ+εν+μν)/6 + (1/c) ln(1/c))`, `1/c = 1 - (ε+μ+ν)/3`
pub fn wehrl_closed(spin: SpinLabel, chordal: &ChordalData) -> Result<f64> {
    let v = chordal.values();
    match (spin.twice(), v.len()) {
        (2, 1) => {
            let mu = v[0];
            let inv_c = 1.0 - mu / 2.0;
            if !(inv_c > 0.0) {
                return Err(domain(format!("1/c = {inv_c} is not positive")));
            }
            Ok(2.0 / 3.0 + (mu / 2.0 + inv_c * inv_c.ln()) / inv_c)
        }
        (3, 3) => {
            let (e, m, n) = (v[0], v[1], v[2]);
            let s1 = e + m + n;
            let s2 = e * m + e * n + m * n;
            let inv_c = 1.0 - s1 / 3.0;
            if !(inv_c > 0.0) {
                return Err(domain(format!("1/c = {inv_c} is not positive")));
            }
            Ok(0.75 + (s1 / 3.0 - s2 / 6.0 + inv_c * inv_c.ln()) / inv_c)
        }
        (2 | 3, k) => Err(domain(format!("spin {spin} closed form needs {} chords, got {k}", if spin.twice() == 2 { 1 } else { 3 }))),
        _ => Err(domain(format!("no closed form implemented for spin {spin}"))),
    }
}

/// `M_n = (2l+1) ∫ dΩ/4π ρ(Ω)^n`, exact when the rule integrates degree `2ln`.
pub fn renyi_wehrl_moment(rho: &DensityMatrix, n: u32, quad: &QuadratureSpec) -> Result<f64> {
    if n == 0 {
        return Err(domain("Rényi order must be at least 1"));
    }
    let spin = rho.spin();
    let need = spin.twice() as usize * n as usize;
    if quad.exact_degree() < need {
        return Err(precondition(format!(
            "rule ({}x{}) is exact to degree {}, moment n={n} at spin {spin} needs {need}",
            quad.n_theta,
            quad.n_phi,
            quad.exact_degree()
        )));
    }
    let rule = SphereRule::new(quad, spin.twice() as usize);
    let mut sym = HusimiSymbol::new(rho);
    Ok(sym.integrate(&rule, |x| x.powi(n as i32)))
}

/// Analytic coherent-state moment `(2l+1)/(2ln+1)`.
pub fn coherent_moment(spin: SpinLabel, n: u32) -> f64 {
    let t = spin.twice() as f64;
    (t + 1.0) / (t * n as f64 + 1.0)
}

/// Rényi moment from the weight of `ρ^{⊗n}` on the maximal-spin component
/// `[nl] ⊂ [l]^{⊗n}`: `tr(P_{nl} ρ^{⊗n} P_{nl})`, rescaled by a constant fixed once per
/// `(l, n)` from the highest-weight coherent state so that coherent inputs give
/// `(2l+1)/(2ln+1)`.
pub fn renyi_wehrl_projector(rho: &DensityMatrix, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(domain("Rényi order must be at least 1"));
    }
    let spin = rho.spin();
    let d = spin.dim();
    let size = (d as u128).pow(n);
    if size > RENYI_TENSOR_LIMIT as u128 {
        return Err(Error::Resource {
            what: "(2l+1)^n",
            value: size.min(usize::MAX as u128) as usize,
            limit: RENYI_TENSOR_LIMIT,
        });
    }
    let iso = MaxSpinIsometry::new(spin, n);
    let coherent = outer(&highest_weight(spin));
    let norm = coherent_moment(spin, n) / iso.weight(&coherent);
    Ok(norm * iso.weight(rho.matrix()))
}

/// Columns `|nl, M⟩` of the embedding `[nl] → [l]^{⊗n}`:
/// `⟨m_1 ... m_n | nl, M⟩ = sqrt(Π C(2l, l+m_r) / C(2nl, nl+M))`.
struct MaxSpinIsometry {
    spin: SpinLabel,
    n: u32,
    columns: Vec<CVector>,
}

impl MaxSpinIsometry {
    fn new(spin: SpinLabel, n: u32) -> Self {
        let d = spin.dim();
        let t = spin.twice() as usize;
        let size = d.pow(n);
        let big_t = t * n as usize;
        let mut columns = vec![CVector::zeros(size); big_t + 1];
        let mut digits = vec![0usize; n as usize];
        for flat in 0..size {
            // digits[r] = basis index of factor r (most significant first)
            let mut rem = flat;
            for r in (0..n as usize).rev() {
                digits[r] = rem % d;
                rem /= d;
            }
            // l+m_r = t - i_r
            let ks: usize = digits.iter().map(|&i| t - i).sum();
            let ln_num: f64 = digits
                .iter()
                .map(|&i| crate::linalg::ln_binomial(t, t - i))
                .sum();
            let value = (0.5 * (ln_num - crate::linalg::ln_binomial(big_t, ks))).exp();
            // column index of M: big index i = big_t - ks
            columns[big_t - ks][flat] = num_complex::Complex64::new(value, 0.0);
        }
        MaxSpinIsometry { spin, n, columns }
    }

    /// `Σ_M ⟨nl,M| ρ^{⊗n} |nl,M⟩`.
    fn weight(&self, rho: &CMatrix) -> f64 {
        self.columns
            .iter()
            .map(|w| {
                let applied = apply_tensor_power(rho, self.spin.dim(), self.n, w);
                w.dotc(&applied).re
            })
            .sum()
    }
}

/// `(A ⊗ ... ⊗ A) v` with `n` factors of the `d x d` matrix `A`, one factor at a time.
fn apply_tensor_power(a: &CMatrix, d: usize, n: u32, v: &CVector) -> CVector {
    let mut cur = v.clone();
    let size = cur.len();
    for r in 0..n as usize {
        // factor r has stride d^(n-1-r)
        let stride = d.pow(n - 1 - r as u32);
        let mut next = CVector::zeros(size);
        for base in 0..size {
            if (base / stride) % d != 0 {
                continue;
            }
            for i in 0..d {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += a[(i, k)] * cur[base + k * stride];
                }
                next[base + i * stride] = acc;
            }
        }
        cur = next;
    }
    cur
}

/// Rényi–Wehrl entropy `ln(M_n)/(1-n)` for `n ≥ 2`.
pub fn renyi_wehrl_entropy(moment: f64, n: u32) -> f64 {
    moment.ln() / (1.0 - n as f64)
}

/// Clamped, descending eigenvalues of an arbitrary Hermitian matrix.
pub fn spectrum(m: &CMatrix) -> Vec<f64> {
    clamp_spectrum(hermitian_eigenvalues(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{coherent_state, stellar_roots, StellarRoots};
    use crate::sampling::{haar_pure_state, random_density_matrix, random_direction, seeded_rng};
    use crate::su2::{Rotate, SphereDirection};
    use num_complex::Complex64;

    fn diag(values: &[f64]) -> DensityMatrix {
        let spin = SpinLabel::from_twice(values.len() as u32 - 1);
        let m = CMatrix::from_diagonal(&CVector::from_iterator(
            values.len(),
            values.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        DensityMatrix::new(spin, m).unwrap()
    }

    #[test]
    fn von_neumann_examples() {
        let psi = coherent_state(SpinLabel::from_twice(3), &SphereDirection::new(1.0, 2.0).unwrap());
        assert!(von_neumann(&psi.to_density()).abs() < 1e-10);
        for t in 0..6 {
            let spin = SpinLabel::from_twice(t);
            let s = von_neumann(&DensityMatrix::maximally_mixed(spin));
            assert!((s - (spin.dim() as f64).ln()).abs() < 1e-13);
        }
        let s = von_neumann(&diag(&[2.0 / 3.0, 1.0 / 3.0, 0.0]));
        // -(2/3)ln(2/3) - (1/3)ln(1/3) = ln 3 - (2/3) ln 2
        let expect = 3f64.ln() - 2.0 / 3.0 * 2f64.ln();
        assert!((s - expect).abs() < 1e-14);
        assert!((expect - 0.63651).abs() < 1e-5);
    }

    #[test]
    fn povm_entropy_examples() {
        let mut rng = seeded_rng(31);
        let spin = SpinLabel::from_twice(3);
        let rho = random_density_matrix(&mut rng, spin);
        let (_, vecs) = crate::linalg::hermitian_eigen(rho.matrix());
        let eigen_povm: Vec<CMatrix> = (0..spin.dim())
            .map(|k| crate::linalg::outer(&vecs.column(k).into_owned()))
            .collect();
        let s = povm_entropy(&rho, &eigen_povm).unwrap();
        assert!((s - von_neumann(&rho)).abs() < 1e-12);
        assert!(povm_entropy(&rho, &[identity(spin.dim())]).unwrap().abs() < 1e-15);
        assert!(povm_entropy(&rho, &[identity(spin.dim()).scale(0.5)]).is_err());
    }

    /// Tetrahedron 2-design on spin 1/2: E_k = |n_k⟩⟨n_k| / 2; p_k = (1 + r·n_k)/4.
    #[test]
    fn povm_entropy_tetrahedron_bruteforce() {
        let verts = [
            [0.0, 0.0, 1.0],
            [(8f64 / 9.0).sqrt(), 0.0, -1.0 / 3.0],
            [-(2f64 / 9.0).sqrt(), (2f64 / 3.0).sqrt(), -1.0 / 3.0],
            [-(2f64 / 9.0).sqrt(), -(2f64 / 3.0).sqrt(), -1.0 / 3.0],
        ];
        let effects: Vec<CMatrix> = verts
            .iter()
            .map(|v| {
                let d = SphereDirection::from_vector(*v).unwrap();
                crate::linalg::outer(coherent_state(SpinLabel::HALF, &d).amplitudes()).scale(0.5)
            })
            .collect();
        let r = [0.3, -0.2, 0.5];
        let rho = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5 * (1.0 + r[2]), 0.0),
                Complex64::new(0.5 * r[0], -0.5 * r[1]),
                Complex64::new(0.5 * r[0], 0.5 * r[1]),
                Complex64::new(0.5 * (1.0 - r[2]), 0.0),
            ],
        );
        let rho = DensityMatrix::new(SpinLabel::HALF, rho).unwrap();
        let brute: f64 = verts
            .iter()
            .map(|n| {
                let p = (1.0 + r[0] * n[0] + r[1] * n[1] + r[2] * n[2]) / 4.0;
                -p * p.ln()
            })
            .sum();
        assert!((povm_entropy(&rho, &effects).unwrap() - brute).abs() < 1e-14);
    }

    #[test]
    fn wehrl_coherent_and_mixed() {
        let q = QuadratureSpec::default();
        for t in 1..=6 {
            let spin = SpinLabel::from_twice(t);
            let psi = coherent_state(spin, &SphereDirection::new(0.9, 2.1).unwrap());
            let s = wehrl(&psi.to_density(), &q).unwrap();
            assert!((s - coherent_wehrl(spin)).abs() < 1e-8, "spin {spin}: {s}");
            let s = wehrl(&DensityMatrix::maximally_mixed(spin), &q).unwrap();
            assert!((s - (spin.dim() as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn wehrl_convergence_error() {
        let spin = SpinLabel::from_twice(3);
        let mut rng = seeded_rng(0);
        let rho = haar_pure_state(&mut rng, spin).to_density();
        let q = QuadratureSpec::new(2048, 4096, 1e-300).unwrap();
        assert!(matches!(wehrl(&rho, &q), Err(Error::Convergence { .. })));
    }

    /// Calibration oracle: scanning candidate chord conventions against quadrature on
    /// random spin-1 states singles out the unit-diameter sphere.
    #[test]
    fn chordal_scale_calibration() {
        let mut rng = seeded_rng(2024);
        let q = QuadratureSpec::default();
        let states: Vec<(f64, f64)> = (0..20)
            .map(|_| {
                let psi = haar_pure_state(&mut rng, SpinLabel::ONE);
                let chord = stellar_roots(&psi).unwrap().pairwise_chord_sq()[0];
                (chord, wehrl(&psi.to_density(), &q).unwrap())
            })
            .collect();
        let residual = |scale: f64| -> f64 {
            states
                .iter()
                .map(|&(chord, s)| {
                    let mu = chord * scale;
                    let inv_c = 1.0 - mu / 2.0;
                    if inv_c <= 0.0 {
                        return f64::INFINITY;
                    }
                    let closed = 2.0 / 3.0 + (mu / 2.0 + inv_c * inv_c.ln()) / inv_c;
                    (closed - s).abs()
                })
                .fold(0.0, f64::max)
        };
        let candidates = [1.0, 0.5, 0.25, 0.125];
        let best = candidates
            .iter()
            .copied()
            .min_by(|a, b| residual(*a).total_cmp(&residual(*b)))
            .unwrap();
        assert_eq!(best, CHORDAL_SCALE);
        assert!(residual(CHORDAL_SCALE) < 1e-7);
    }

    #[test]
    fn closed_forms_at_coincident_roots() {
        let s1 = wehrl_closed(SpinLabel::ONE, &ChordalData::new(vec![0.0]).unwrap()).unwrap();
        assert_eq!(s1, 2.0 / 3.0);
        let s32 = wehrl_closed(SpinLabel::from_twice(3), &ChordalData::new(vec![0.0; 3]).unwrap())
            .unwrap();
        assert_eq!(s32, 0.75);
        assert!(wehrl_closed(SpinLabel::from_twice(4), &ChordalData::new(vec![0.0]).unwrap()).is_err());
        assert!(wehrl_closed(SpinLabel::ONE, &ChordalData::new(vec![0.0, 0.0]).unwrap()).is_err());
        assert!(ChordalData::new(vec![4.0]).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature_for_m_zero() {
        let psi = PureState::basis(SpinLabel::ONE, 0).unwrap();
        let chords = ChordalData::from_roots(&stellar_roots(&psi).unwrap());
        assert!((chords.values()[0] - 1.0).abs() < 1e-15);
        let closed = wehrl_closed(SpinLabel::ONE, &chords).unwrap();
        let quad = wehrl(&psi.to_density(), &QuadratureSpec::default()).unwrap();
        assert!((closed - quad).abs() < 1e-7, "{closed} vs {quad}");
        // 2/3 + 2(1/2 + (1/2) ln(1/2)) = 5/3 - ln 2
        assert!((closed - (5.0 / 3.0 - 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn spin_three_halves_closed_form_matches_quadrature() {
        let mut rng = seeded_rng(77);
        let spin = SpinLabel::from_twice(3);
        for _ in 0..5 {
            let dirs = (0..3).map(|_| random_direction(&mut rng)).collect();
            let roots = StellarRoots::new(spin, dirs).unwrap();
            let psi = crate::coherent::state_from_roots(&roots).unwrap();
            let closed = wehrl_closed(spin, &ChordalData::from_roots(&roots)).unwrap();
            let quad = wehrl(&psi.to_density(), &QuadratureSpec::default()).unwrap();
            assert!((closed - quad).abs() < 1e-7);
        }
    }

    #[test]
    fn moment_examples() {
        let mut rng = seeded_rng(5);
        for t in 1..=4 {
            let spin = SpinLabel::from_twice(t);
            let rho = random_density_matrix(&mut rng, spin);
            let q1 = QuadratureSpec::exact_for_degree(t as usize);
            assert!((renyi_wehrl_moment(&rho, 1, &q1).unwrap() - 1.0).abs() < 1e-13);
            for n in 2..=3 {
                let q = QuadratureSpec::exact_for_degree(t as usize * n as usize);
                let coh = coherent_state(spin, &random_direction(&mut rng)).to_density();
                let m = renyi_wehrl_moment(&coh, n, &q).unwrap();
                assert!((m - coherent_moment(spin, n)).abs() < 1e-12);
                let too_small = QuadratureSpec::exact_for_degree(t as usize * n as usize - 1);
                assert!(matches!(
                    renyi_wehrl_moment(&coh, n, &too_small),
                    Err(Error::Precondition(_))
                ));
            }
        }
    }

    #[test]
    fn projector_route_small_cases() {
        let mut rng = seeded_rng(6);
        for t in 1..=3 {
            let spin = SpinLabel::from_twice(t);
            let rho = random_density_matrix(&mut rng, spin);
            assert!((renyi_wehrl_projector(&rho, 1).unwrap() - 1.0).abs() < 1e-13);
        }
        // spin 1/2, n = 2, pure: P_1 (ψ⊗ψ) = ψ⊗ψ, so tr = 1 and M_2 = 2/3 for any pure state.
        let psi = haar_pure_state(&mut rng, SpinLabel::HALF).to_density();
        let direct = renyi_wehrl_projector(&psi, 2).unwrap();
        let moment = renyi_wehrl_moment(&psi, 2, &QuadratureSpec::exact_for_degree(2)).unwrap();
        assert!((direct - moment).abs() < 1e-12);
        assert!((direct - 2.0 / 3.0).abs() < 1e-12);
        let big = DensityMatrix::maximally_mixed(SpinLabel::from_twice(20));
        assert!(matches!(renyi_wehrl_projector(&big, 4), Err(Error::Resource { .. })));
    }

    #[test]
    fn moment_and_projector_routes_agree() {
        let mut rng = seeded_rng(66);
        for t in 1..=4 {
            let spin = SpinLabel::from_twice(t);
            for n in 2..=3u32 {
                let q = QuadratureSpec::exact_for_degree(t as usize * n as usize);
                for _ in 0..3 {
                    let rho = random_density_matrix(&mut rng, spin);
                    let a = renyi_wehrl_moment(&rho, n, &q).unwrap();
                    let b = renyi_wehrl_projector(&rho, n).unwrap();
                    assert!((a - b).abs() < 1e-10, "spin {spin} n {n}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn wehrl_exceeds_von_neumann_and_is_rotation_invariant() {
        let mut rng = seeded_rng(10);
        let q = QuadratureSpec::default();
        for t in 1..=4 {
            let spin = SpinLabel::from_twice(t);
            for _ in 0..5 {
                let rho = random_density_matrix(&mut rng, spin);
                let s = wehrl(&rho, &q).unwrap();
                assert!(s > von_neumann(&rho));
                let rotated = rho.rotate(&random_direction(&mut rng));
                let sr = wehrl(&rotated, &q).unwrap();
                assert!((s - sr).abs() < 2.0 * q.tol, "{s} vs {sr}");
            }
        }
    }

    #[test]
    fn stellar_route_matches_quadrature() {
        let mut rng = seeded_rng(404);
        let q = QuadratureSpec::new(32, 64, 1e-11).unwrap();
        for t in 1..=6 {
            let spin = SpinLabel::from_twice(t);
            for _ in 0..3 {
                let psi = haar_pure_state(&mut rng, spin);
                let exact = wehrl_stellar(&psi).unwrap();
                let quad = wehrl(&psi.to_density(), &q).unwrap();
                assert!((exact - quad).abs() < 1e-9, "spin {spin}: {exact} vs {quad}");
            }
            let coh = coherent_state(spin, &random_direction(&mut rng));
            let exact = wehrl_pure(&coh, &q).unwrap();
            assert!((exact - coherent_wehrl(spin)).abs() < 1e-9, "spin {spin}: {exact}");
        }
        assert_eq!(wehrl_stellar(&PureState::basis(SpinLabel::from_twice(0), 0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn wehrl_strictly_exceeds_von_neumann_on_pure_states() {
        let mut rng = seeded_rng(12);
        let q = QuadratureSpec::default();
        for t in 1..=4 {
            let spin = SpinLabel::from_twice(t);
            for _ in 0..200 {
                let psi = haar_pure_state(&mut rng, spin);
                assert!(wehrl_pure(&psi, &q).unwrap() > 1e-6);
            }
        }
    }

    #[test]
    fn coherent_moments_dominate() {
        let mut rng = seeded_rng(13);
        for t in 1..=4 {
            let spin = SpinLabel::from_twice(t);
            for n in 2..=4u32 {
                let q = QuadratureSpec::exact_for_degree(t as usize * n as usize);
                let bound = coherent_moment(spin, n);
                for _ in 0..50 {
                    let psi = haar_pure_state(&mut rng, spin).to_density();
                    assert!(renyi_wehrl_moment(&psi, n, &q).unwrap() <= bound + 1e-12);
                }
            }
        }
    }

    #[test]
    fn projector_route_maximized_by_coherent_states() {
        let mut rng = seeded_rng(14);
        for t in 1..=4 {
            let spin = SpinLabel::from_twice(t);
            for n in 2..=3u32 {
                let bound = coherent_moment(spin, n);
                for _ in 0..500 {
                    let psi = haar_pure_state(&mut rng, spin).to_density();
                    let m = renyi_wehrl_projector(&psi, n).unwrap();
                    // every spin-1/2 pure state is coherent
                    if t == 1 {
                        assert!((m - bound).abs() < 1e-12);
                    } else {
                        assert!(m < bound);
                    }
                }
            }
        }
    }
}
