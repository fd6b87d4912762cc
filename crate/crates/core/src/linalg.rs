//! Small dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::sync::OnceLock;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as numerical noise and set to zero.
pub const CLAMP_TOL: f64 = 1e-12;

const LN_FACTORIAL_TABLE: usize = 1024;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`, tabulated up to 1023 and Stirling-series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < LN_FACTORIAL_TABLE {
        return ln_factorial_table()[n];
    }
    let x = n as f64 + 1.0;
    let x2 = x * x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x2 * x2 * x)
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `sqrt(C(n, k))`, computed in log space so that large `n` does not overflow.
pub fn sqrt_binomial(n: usize, k: usize) -> f64 {
    (0.5 * ln_binomial(n, k)).exp()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Returns `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Eigenvalues of a Hermitian matrix, sorted descending. Not clamped.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = hermitize(m);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Eigen-decomposition of a Hermitian matrix: eigenvalues descending, eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitize(m);
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`; non-positive inputs give 0.
#[inline]
pub fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Shannon entropy `-Σ p ln p` of a list of probabilities / eigenvalues.
pub fn shannon(values: &[f64]) -> f64 {
    -values.iter().map(|&p| xlnx(p)).sum::<f64>()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Partial trace over the second tensor factor of a `(da*db) x (da*db)` matrix.
pub fn partial_trace_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    assert_eq!(m.nrows(), da * db);
    CMatrix::from_fn(da, da, |i, k| {
        (0..db).map(|b| m[(i * db + b, k * db + b)]).sum()
    })
}

/// `U m U†`.
pub fn conjugate(u: &CMatrix, m: &CMatrix) -> CMatrix {
    u * m * u.adjoint()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// `exp(-i t H)` for Hermitian `H`, via its eigen-decomposition.
pub fn unitary_exp(h: &CMatrix, t: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::from_polar(1.0, -t * v)),
    ));
    &vectors * phases * vectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_matches_direct_product() {
        for n in 0..30 {
            assert!((ln_factorial(n) - factorial(n).ln()).abs() < 1e-12);
        }
        // table/Stirling seam
        let direct: f64 = (1..=1500).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(1500) - direct).abs() / direct < 1e-13);
    }

    #[test]
    fn sqrt_binomial_small() {
        assert!((sqrt_binomial(4, 2) - 6f64.sqrt()).abs() < 1e-14);
        assert!((sqrt_binomial(200, 100).ln() - 0.5 * ln_binomial(200, 100)).abs() < 1e-12);
    }

    #[test]
    fn xlnx_extension() {
        assert_eq!(xlnx(0.0), 0.0);
        assert_eq!(xlnx(-1e-14), 0.0);
        assert!((xlnx(0.5) - 0.5 * 0.5f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = CMatrix::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, i as f64));
        let b = identity(3).scale(1.0 / 3.0);
        let pt = partial_trace_second(&kron(&a, &b), 2, 3);
        assert!(max_abs_diff(&pt, &a) < 1e-14);
    }
}
