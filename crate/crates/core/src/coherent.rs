//! Spin coherent states, Husimi lower symbols and the stellar (Majorana)
//! representation.
//!
//! Phase convention: `⟨l,m|Ω⟩ = sqrt(C(2l, l+m)) cos^{l+m}(θ/2) sin^{l-m}(θ/2) e^{-imφ}`,
//! single-valued in φ. Every quantity computed downstream is phase-insensitive.

use std::f64::consts::PI;

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::error::{domain, precondition, Result};
use crate::linalg::{identity, max_abs_diff, sqrt_binomial, CMatrix, CVector, CLAMP_TOL, ZERO};
use crate::quadrature::{QuadratureSpec, SphereRule};
use crate::su2::{DensityMatrix, PureState, SphereDirection, SpinLabel};

/// Real envelope `sqrt(C(2l, l+m)) cos^{l+m}(θ/2) sin^{l-m}(θ/2)` for every basis index.
pub(crate) fn envelope(spin: SpinLabel, theta: f64, out: &mut Vec<f64>) {
    let t = spin.twice() as usize;
    let (s, c) = (theta / 2.0).sin_cos();
    out.clear();
    for i in 0..=t {
        // index i carries l+m = t-i, l-m = i
        out.push(sqrt_binomial(t, i) * c.powi((t - i) as i32) * s.powi(i as i32));
    }
}

pub fn coherent_state(spin: SpinLabel, direction: &SphereDirection) -> PureState {
    let mut env = Vec::with_capacity(spin.dim());
    envelope(spin, direction.theta(), &mut env);
    let phi = direction.phi();
    let amps = CVector::from_fn(spin.dim(), |i, _| {
        let m = spin.twice_m(i) as f64 / 2.0;
        Complex64::from_polar(env[i], -m * phi)
    });
    PureState::from_parts_unchecked(spin, amps)
}

/// Clamps roundoff below zero; values in `[-CLAMP_TOL, 0)` become 0.
#[inline]
fn clamp_probability(x: f64) -> f64 {
    if x < 0.0 && x >= -CLAMP_TOL {
        0.0
    } else {
        x
    }
}

/// Husimi function `ρ(Ω) = ⟨Ω|ρ|Ω⟩`.
pub fn husimi(rho: &DensityMatrix, direction: &SphereDirection) -> f64 {
    let omega = coherent_state(rho.spin(), direction);
    let a = omega.amplitudes();
    clamp_probability((a.adjoint() * rho.matrix() * a)[(0, 0)].re)
}

/// `|⟨Ω|ψ⟩|²` for a pure state, avoiding the outer product.
pub fn husimi_pure(psi: &PureState, direction: &SphereDirection) -> f64 {
    coherent_state(psi.spin(), direction).fidelity(psi)
}

/// The Husimi function as a trigonometric polynomial in φ on each ring of constant θ:
/// `ρ(θ, φ) = F_0(θ) + 2 Re Σ_{k≥1} F_k(θ) e^{ikφ}` with
/// `F_k = Σ_i b_i b_{i+k} ρ[i, i+k]`.
#[derive(Clone, Debug)]
pub struct HusimiSymbol {
    spin: SpinLabel,
    rho: CMatrix,
    envelope: Vec<f64>,
    fourier: Vec<Complex64>,
}

impl HusimiSymbol {
    pub fn new(rho: &DensityMatrix) -> Self {
        HusimiSymbol {
            spin: rho.spin(),
            rho: rho.matrix().clone(),
            envelope: Vec::with_capacity(rho.spin().dim()),
            fourier: vec![ZERO; rho.spin().dim()],
        }
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    /// Loads the ring at polar angle `θ` (given as `cos θ`).
    pub fn set_ring(&mut self, cos_theta: f64) {
        let theta = cos_theta.clamp(-1.0, 1.0).acos();
        envelope(self.spin, theta, &mut self.envelope);
        let d = self.spin.dim();
        for k in 0..d {
            let mut acc = ZERO;
            for i in 0..d - k {
                acc += self.rho[(i, i + k)] * (self.envelope[i] * self.envelope[i + k]);
            }
            self.fourier[k] = acc;
        }
    }

    /// Evaluates the loaded ring given `e^{ikφ}` for `k = 0..=2l`.
    #[inline]
    pub fn eval_with_phases(&self, phases: &[Complex64]) -> f64 {
        let mut v = self.fourier[0].re;
        for k in 1..self.fourier.len() {
            let z = self.fourier[k] * phases[k];
            v += 2.0 * z.re;
        }
        clamp_probability(v)
    }

    pub fn eval(&mut self, direction: &SphereDirection) -> f64 {
        self.set_ring(direction.theta().cos());
        let step = Complex64::from_polar(1.0, direction.phi());
        let mut phases = Vec::with_capacity(self.fourier.len());
        let mut z = Complex64::new(1.0, 0.0);
        for _ in 0..self.fourier.len() {
            phases.push(z);
            z *= step;
        }
        self.eval_with_phases(&phases)
    }

    /// `(2l+1) ∫ dΩ/4π f(ρ(Ω))` on a prepared rule.
    pub fn integrate(&mut self, rule: &SphereRule, f: impl Fn(f64) -> f64) -> f64 {
        assert!(rule.max_frequency() >= self.spin.twice() as usize);
        let mut total = 0.0;
        for &(u, _, w) in &rule.rings {
            self.set_ring(u);
            let mut row = 0.0;
            for p in 0..rule.phis.len() {
                row += f(self.eval_with_phases(rule.phases(p)));
            }
            total += w * row;
        }
        self.spin.dim() as f64 * total
    }
}

/// `|⟨Ω_l|Ω'_l⟩|² = cos^{4l}(Θ/2)` with `Θ` the geodesic angle.
pub fn overlap_sq(spin: SpinLabel, a: &SphereDirection, b: &SphereDirection) -> f64 {
    let half = 0.5 * a.geodesic_angle(b);
    half.cos().powi(2 * spin.twice() as i32)
}

/// Max-norm of `(2l+1) ∫ dΩ/4π |Ω⟩⟨Ω| - 1` under the given product rule.
///
/// The integrand is a spherical polynomial of degree `2l`; rules that are not exact
/// for that degree are rejected.
pub fn completeness_defect(spin: SpinLabel, quad: &QuadratureSpec) -> Result<f64> {
    let need = spin.twice() as usize;
    if quad.exact_degree() < need {
        return Err(precondition(format!(
            "rule ({}x{}) is exact to degree {}, completeness at spin {spin} needs {need}",
            quad.n_theta,
            quad.n_phi,
            quad.exact_degree()
        )));
    }
    let rule = SphereRule::new(quad, 0);
    let d = spin.dim();
    let mut acc = CMatrix::zeros(d, d);
    for &(u, _, w) in &rule.rings {
        let theta = u.clamp(-1.0, 1.0).acos();
        for &phi in &rule.phis {
            let omega = coherent_state(spin, &SphereDirection::new(theta, phi)?);
            let a = omega.amplitudes();
            acc += (a * a.adjoint()).scale(w);
        }
    }
    acc.scale_mut(d as f64);
    Ok(max_abs_diff(&acc, &identity(d)))
}

/// Unordered multiset of `2l` Bloch-sphere points defining a spin-`l` state.
#[derive(Clone, Debug, PartialEq)]
pub struct StellarRoots {
    spin: SpinLabel,
    roots: Vec<SphereDirection>,
}

impl StellarRoots {
    pub fn new(spin: SpinLabel, roots: Vec<SphereDirection>) -> Result<Self> {
        if roots.len() != spin.twice() as usize {
            return Err(domain(format!(
                "spin {spin} needs {} stellar roots, got {}",
                spin.twice(),
                roots.len()
            )));
        }
        Ok(StellarRoots { spin, roots })
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn roots(&self) -> &[SphereDirection] {
        &self.roots
    }

    /// Multiset equality up to `tol` in geodesic angle (greedy nearest matching).
    pub fn matches(&self, other: &StellarRoots, tol: f64) -> bool {
        if self.spin != other.spin {
            return false;
        }
        let mut unused: Vec<SphereDirection> = other.roots.clone();
        for r in &self.roots {
            let best = unused
                .iter()
                .enumerate()
                .map(|(k, s)| (k, r.geodesic_angle(s)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((k, angle)) if angle <= tol => {
                    unused.swap_remove(k);
                }
                _ => return false,
            }
        }
        true
    }

    /// Squared chordal distances between all pairs, on the unit sphere.
    pub fn pairwise_chord_sq(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for a in 0..self.roots.len() {
            for b in a + 1..self.roots.len() {
                out.push(self.roots[a].chord_sq(&self.roots[b]));
            }
        }
        out
    }
}

/// Relative size below which a Majorana coefficient counts as zero.
const MAJORANA_ZERO: f64 = 1e-14;

/// Majorana polynomial coefficients `c_k` (of `w^k`, `k = 0..=2l`):
/// `c_k = (-1)^{l-m} sqrt(C(2l, l+m)) ψ_m` with `k = l + m`.
fn majorana_coefficients(psi: &PureState) -> Vec<Complex64> {
    let t = psi.spin().twice() as usize;
    let amps = psi.amplitudes();
    (0..=t)
        .map(|k| {
            let i = t - k; // l - m
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            amps[i] * (sign * sqrt_binomial(t, k))
        })
        .collect()
}

fn direction_from_stereographic(w: Complex64) -> SphereDirection {
    let theta = 2.0 * w.norm().atan();
    let phi = if w.norm() > 0.0 { w.arg() } else { 0.0 };
    SphereDirection::new(theta, phi).expect("2 atan |w| lies in [0, π]")
}

fn horner(coeffs: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * w + p;
        p = p * w + c;
    }
    (p, dp)
}

/// Roots of `Σ c_k w^k` (leading coefficient non-zero) from the companion matrix,
/// followed by one Newton step per root.
fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    if n == 1 {
        return vec![-coeffs[0] / lead];
    }
    let mut companion = CMatrix::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -coeffs[n - 1 - j] / lead;
    }
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = Schur::new(companion);
    let (_, t) = schur.unpack();
    (0..n)
        .map(|i| {
            let w = t[(i, i)];
            let (p, dp) = horner(coeffs, w);
            if dp.norm() > 0.0 {
                let polished = w - p / dp;
                if horner(coeffs, polished).0.norm() <= p.norm() {
                    return polished;
                }
            }
            w
        })
        .collect()
}

/// Stellar representation of a pure state: the `2l` points `ω_i` with
/// `|ψ⟩ ∝ P_sym |ω_1 ⊗ ... ⊗ ω_2l⟩`.
///
/// Roots are the zeros of the Majorana polynomial mapped to the sphere through
/// `w = tan(θ/2) e^{iφ}`; roots at infinity (vanishing leading coefficient) land on
/// the south pole and roots at zero on the north pole.
pub fn stellar_roots(psi: &PureState) -> Result<StellarRoots> {
    let spin = psi.spin();
    let coeffs = majorana_coefficients(psi);
    let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.norm()));
    if !(scale > 0.0) {
        return Err(domain("the zero vector has no stellar representation"));
    }
    let is_zero = |c: &Complex64| c.norm() <= MAJORANA_ZERO * scale;
    let top = coeffs.iter().rposition(|c| !is_zero(c)).expect("scale > 0");
    let bottom = coeffs.iter().position(|c| !is_zero(c)).expect("scale > 0");
    let t = spin.twice() as usize;
    let mut roots = Vec::with_capacity(t);
    roots.extend(std::iter::repeat_n(SphereDirection::north(), bottom));
    roots.extend(
        polynomial_roots(&coeffs[bottom..=top])
            .into_iter()
            .map(direction_from_stereographic),
    );
    roots.extend(std::iter::repeat_n(SphereDirection::south(), t - top));
    StellarRoots::new(spin, roots)
}

/// Rebuilds the normalized state `c_ψ P_sym |ω_1 ⊗ ... ⊗ ω_2l⟩` by expanding
/// `Π_i (α_i x + β_i y)` with `(α_i, β_i)` the spin-1/2 coherent amplitudes of `ω_i`.
pub fn state_from_roots(roots: &StellarRoots) -> Result<PureState> {
    let spin = roots.spin();
    let t = spin.twice() as usize;
    // poly[k] = coefficient of x^k y^{n-k}
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for r in roots.roots() {
        let (s, c) = (r.theta() / 2.0).sin_cos();
        let alpha = Complex64::from_polar(c, -r.phi() / 2.0);
        let beta = Complex64::from_polar(s, r.phi() / 2.0);
        let mut next = vec![ZERO; poly.len() + 1];
        for (k, &p) in poly.iter().enumerate() {
            next[k + 1] += alpha * p;
            next[k] += beta * p;
        }
        poly = next;
    }
    // x^k y^{t-k} <-> |n_up = k⟩ with weight sqrt(k!(t-k)!) ∝ 1/sqrt(C(t,k))
    let amps = CVector::from_fn(t + 1, |i, _| {
        let k = t - i;
        poly[k] / sqrt_binomial(t, k)
    });
    PureState::normalized(spin, amps)
}

/// Coarse grid size for [`closest_coherent`].
pub const CLOSEST_GRID: (usize, usize) = (32, 64);
/// Maximum number of local refinement steps for [`closest_coherent`].
pub const CLOSEST_STEPS: usize = 50;

/// Orthonormal tangent frame `(e_θ, e_φ, n)` at a sphere point.
fn tangent_frame(d: &SphereDirection) -> [[f64; 3]; 3] {
    let (st, ct) = d.theta().sin_cos();
    let (sp, cp) = d.phi().sin_cos();
    [[ct * cp, ct * sp, -st], [-sp, cp, 0.0], [st * cp, st * sp, ct]]
}

/// Exponential map of the tangent vector `x e_θ + y e_φ` at the frame's base point.
fn chart(frame: &[[f64; 3]; 3], x: f64, y: f64) -> SphereDirection {
    let r = (x * x + y * y).sqrt();
    let sinc = if r < 1e-8 { 1.0 - r * r / 6.0 } else { r.sin() / r };
    let c = r.cos();
    let v = [
        c * frame[2][0] + sinc * (x * frame[0][0] + y * frame[1][0]),
        c * frame[2][1] + sinc * (x * frame[0][1] + y * frame[1][1]),
        c * frame[2][2] + sinc * (x * frame[0][2] + y * frame[1][2]),
    ];
    SphereDirection::from_vector(v).expect("unit vector")
}

/// Direction maximizing `|⟨Ω|ψ⟩|²` and the maximal value (the coherent fidelity).
///
/// Scans a 32x64 grid (θ from pole to pole, φ uniform) and keeps the first maximum in
/// scan order, then runs up to 50 damped Newton steps on a local tangent chart using
/// central differences. Degenerate maxima return whichever maximizer this reaches.
pub fn closest_coherent(psi: &PureState) -> (SphereDirection, f64) {
    let f = |d: &SphereDirection| husimi_pure(psi, d);
    let (nt, np) = CLOSEST_GRID;
    let mut best = SphereDirection::north();
    let mut best_val = f(&best);
    for a in 0..nt {
        let theta = PI * a as f64 / (nt - 1) as f64;
        for b in 0..np {
            let d = SphereDirection::new(theta, 2.0 * PI * b as f64 / np as f64)
                .expect("grid angles are in range");
            let v = f(&d);
            if v > best_val {
                best_val = v;
                best = d;
            }
        }
    }
    let h = 1e-4;
    for _ in 0..CLOSEST_STEPS {
        let frame = tangent_frame(&best);
        let g = |x: f64, y: f64| f(&chart(&frame, x, y));
        let f0 = best_val;
        let (fxp, fxm) = (g(h, 0.0), g(-h, 0.0));
        let (fyp, fym) = (g(0.0, h), g(0.0, -h));
        let gx = (fxp - fxm) / (2.0 * h);
        let gy = (fyp - fym) / (2.0 * h);
        let hxx = (fxp - 2.0 * f0 + fxm) / (h * h);
        let hyy = (fyp - 2.0 * f0 + fym) / (h * h);
        let hxy = (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h);
        let det = hxx * hyy - hxy * hxy;
        let (mut sx, mut sy) = if hxx < 0.0 && det > 0.0 {
            (-(hyy * gx - hxy * gy) / det, -(-hxy * gx + hxx * gy) / det)
        } else {
            (gx, gy)
        };
        let len = (sx * sx + sy * sy).sqrt();
        if len < 1e-12 {
            break;
        }
        if len > 0.5 {
            sx *= 0.5 / len;
            sy *= 0.5 / len;
        }
        let mut accepted = false;
        for _ in 0..30 {
            let cand = chart(&frame, sx, sy);
            let v = f(&cand);
            if v >= best_val {
                best = cand;
                best_val = v;
                accepted = true;
                break;
            }
            sx *= 0.5;
            sy *= 0.5;
        }
        if !accepted || (sx * sx + sy * sy).sqrt() < 1e-13 {
            break;
        }
    }
    (best, best_val)
}
