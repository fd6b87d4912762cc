//! Product quadrature on the sphere: Gauss–Legendre in `u = cos θ` times the
//! periodic trapezoid rule in `φ`.
//!
//! A rule with `n_theta` Legendre nodes and `n_phi` azimuthal nodes integrates every
//! spherical polynomial of degree `≤ min(2 n_theta - 1, n_phi - 1)` exactly. The
//! Husimi function of a spin-`l` state is a spherical polynomial of degree `2l`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Node counts and refinement tolerance for integrals over the sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            n_theta: 32,
            n_phi: 64,
            tol: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn new(n_theta: usize, n_phi: usize, tol: f64) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(domain("quadrature needs at least one node per axis"));
        }
        if !(tol > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {tol}")));
        }
        Ok(QuadratureSpec { n_theta, n_phi, tol })
    }

    /// Smallest rule that is exact for spherical polynomials of degree `degree`.
    pub fn exact_for_degree(degree: usize) -> Self {
        QuadratureSpec {
            n_theta: degree / 2 + 1,
            n_phi: degree + 1,
            tol: QuadratureSpec::default().tol,
        }
    }

    /// Highest spherical-polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        (2 * self.n_theta - 1).min(self.n_phi - 1)
    }

    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            n_theta: 2 * self.n_theta,
            n_phi: 2 * self.n_phi,
            tol: self.tol,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Legendre polynomials `P_0(x) ..= P_max(x)`.
pub fn legendre_all(max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(1.0);
    if max >= 1 {
        out.push(x);
    }
    for k in 2..=max {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(next);
    }
    out
}

/// A concrete product rule for `∫ dΩ/4π`, weights summing to one.
#[derive(Clone, Debug)]
pub struct SphereRule {
    /// `(cos θ_a, sin θ_a, weight_a)` with the azimuthal weight `1/n_phi` folded in.
    pub rings: Vec<(f64, f64, f64)>,
    pub phis: Vec<f64>,
    /// `e^{i k φ_p}` for `k = 0 ..= max_frequency`, row-major in `p`.
    phase_table: Vec<Complex64>,
    max_frequency: usize,
}

impl SphereRule {
    /// Builds the rule; `max_frequency` sizes the cached azimuthal phase table.
    pub fn new(spec: &QuadratureSpec, max_frequency: usize) -> Self {
        let (u, w) = gauss_legendre(spec.n_theta);
        let n_phi = spec.n_phi;
        let rings = u
            .iter()
            .zip(&w)
            .map(|(&u, &w)| (u, (1.0 - u * u).max(0.0).sqrt(), 0.5 * w / n_phi as f64))
            .collect();
        let phis: Vec<f64> = (0..n_phi).map(|p| 2.0 * PI * p as f64 / n_phi as f64).collect();
        let stride = max_frequency + 1;
        let mut phase_table = Vec::with_capacity(n_phi * stride);
        for &phi in &phis {
            let step = Complex64::from_polar(1.0, phi);
            let mut z = Complex64::new(1.0, 0.0);
            for _ in 0..stride {
                phase_table.push(z);
                z *= step;
            }
        }
        SphereRule {
            rings,
            phis,
            phase_table,
            max_frequency,
        }
    }

    pub fn len(&self) -> usize {
        self.rings.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_frequency(&self) -> usize {
        self.max_frequency
    }

    /// `e^{i k φ_p}` for `k = 0 ..= max_frequency`.
    #[inline]
    pub fn phases(&self, p: usize) -> &[Complex64] {
        let stride = self.max_frequency + 1;
        &self.phase_table[p * stride..(p + 1) * stride]
    }

    /// `∫ dΩ/4π f(u, φ)` with `u = cos θ`.
    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for &(u, _, w) in &self.rings {
            let row: f64 = self.phis.iter().map(|&phi| f(u, phi)).sum();
            total += w * row;
        }
        total
    }
}
