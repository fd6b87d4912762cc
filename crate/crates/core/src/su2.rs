//! Finite-dimensional SU(2) representation machinery.
//!
//! Basis convention: every vector and matrix on `[l]` is indexed by
//! `m = l, l-1, ..., -l`, i.e. index `i` carries `m = l - i`. Half-integer
//! magnitudes are passed around as *twice* their value (`twice_m: i32`).
//!
//! Rotations are `R(θ, φ) = exp(-iφ L3) exp(-iθ L2)`, which sends `|l,l⟩` to
//! the coherent state with amplitudes `sqrt(C(2l, l+m)) cos^{l+m}(θ/2)
//! sin^{l-m}(θ/2) e^{-imφ}`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::linalg::{
    conjugate, hermitian_eigenvalues, hermiticity_defect, ln_factorial, outer, sqrt_binomial,
    trace, CMatrix, CVector, CLAMP_TOL, I, ONE, ZERO,
};

/// Tolerance used when validating user-supplied states.
pub const STATE_TOL: f64 = 1e-12;

/// A spin label `l`, stored exactly as `2l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinLabel {
    twice: u32,
}

impl SpinLabel {
    pub const HALF: SpinLabel = SpinLabel { twice: 1 };
    pub const ONE: SpinLabel = SpinLabel { twice: 2 };

    pub const fn from_twice(twice: u32) -> Self {
        SpinLabel { twice }
    }

    pub const fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Dimension `2l + 1` of the irreducible representation.
    pub const fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// Quadratic Casimir `l(l+1)`.
    pub fn casimir(self) -> f64 {
        let l = self.value();
        l * (l + 1.0)
    }

    /// `twice_m` for basis index `i` (`m = l - i`).
    pub fn twice_m(self, index: usize) -> i32 {
        self.twice as i32 - 2 * index as i32
    }

    /// Basis index of `twice_m`, if it lies in the representation.
    pub fn index_of(self, twice_m: i32) -> Option<usize> {
        let t = self.twice as i32;
        if twice_m.abs() > t || (t - twice_m) % 2 != 0 {
            None
        } else {
            Some(((t - twice_m) / 2) as usize)
        }
    }

    pub fn add(self, other: SpinLabel) -> SpinLabel {
        SpinLabel::from_twice(self.twice + other.twice)
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for SpinLabel {
    type Err = Error;

    /// Accepts `"2"`, `"3/2"` and `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || domain(format!("not a half-integer spin label: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(SpinLabel::from_twice(num)),
                "1" => Ok(SpinLabel::from_twice(2 * num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = s.parse::<u32>() {
            Ok(SpinLabel::from_twice(2 * n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * x;
            if x < 0.0 || (t - t.round()).abs() > 1e-12 {
                return Err(bad());
            }
            Ok(SpinLabel::from_twice(t.round() as u32))
        }
    }
}

/// A point `Ω = (θ, φ)` on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereDirection {
    theta: f64,
    phi: f64,
}

impl SphereDirection {
    /// `theta` must lie in `[0, π]`; `phi` is reduced into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(domain("non-finite sphere coordinates"));
        }
        if !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(domain(format!("theta = {theta} outside [0, π]")));
        }
        Ok(SphereDirection {
            theta: theta.clamp(0.0, PI),
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    pub const fn north() -> Self {
        SphereDirection { theta: 0.0, phi: 0.0 }
    }

    pub const fn south() -> Self {
        SphereDirection { theta: PI, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn to_unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Direction of a non-zero 3-vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n > 0.0) {
            return Err(domain("zero vector has no direction"));
        }
        let z = (v[2] / n).clamp(-1.0, 1.0);
        let theta = z.acos();
        let phi = if v[0] == 0.0 && v[1] == 0.0 {
            0.0
        } else {
            v[1].atan2(v[0])
        };
        SphereDirection::new(theta, phi)
    }

    pub fn antipode(&self) -> Self {
        SphereDirection {
            theta: PI - self.theta,
            phi: (self.phi + PI).rem_euclid(2.0 * PI),
        }
    }

    pub fn cos_angle(&self, other: &SphereDirection) -> f64 {
        let a = self.to_unit_vector();
        let b = other.to_unit_vector();
        (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0)
    }

    /// Geodesic (great-circle) angle in `[0, π]`.
    pub fn geodesic_angle(&self, other: &SphereDirection) -> f64 {
        // atan2 form stays accurate for nearly coincident points
        let a = self.to_unit_vector();
        let b = other.to_unit_vector();
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let s = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        let c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        s.atan2(c)
    }

    /// Squared chordal distance on the unit sphere, in `[0, 4]`.
    pub fn chord_sq(&self, other: &SphereDirection) -> f64 {
        2.0 * (1.0 - self.cos_angle(other))
    }
}

/// A normalized state vector on `[l]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    spin: SpinLabel,
    amplitudes: CVector,
}

impl PureState {
    /// Validates dimension and unit norm (within [`STATE_TOL`]).
    pub fn new(spin: SpinLabel, amplitudes: CVector) -> Result<Self> {
        check_len(spin, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(domain(format!("state norm {norm} is not 1")));
        }
        Ok(PureState { spin, amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(spin: SpinLabel, amplitudes: CVector) -> Result<Self> {
        check_len(spin, amplitudes.len())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(PureState {
            spin,
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// The basis state `|l, m⟩`.
    pub fn basis(spin: SpinLabel, twice_m: i32) -> Result<Self> {
        let idx = spin
            .index_of(twice_m)
            .ok_or_else(|| domain(format!("m = {twice_m}/2 not in spin {spin}")))?;
        let mut v = CVector::zeros(spin.dim());
        v[idx] = ONE;
        Ok(PureState { spin, amplitudes: v })
    }

    pub(crate) fn from_parts_unchecked(spin: SpinLabel, amplitudes: CVector) -> Self {
        PureState { spin, amplitudes }
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            spin: self.spin,
            matrix: outer(&self.amplitudes),
        }
    }
}

fn check_len(spin: SpinLabel, len: usize) -> Result<()> {
    if len != spin.dim() {
        return Err(domain(format!(
            "spin {spin} needs {} amplitudes, got {len}",
            spin.dim()
        )));
    }
    Ok(())
}

/// A Hermitian, positive semidefinite, unit-trace matrix on `[l]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    spin: SpinLabel,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and trace within [`STATE_TOL`].
    pub fn new(spin: SpinLabel, matrix: CMatrix) -> Result<Self> {
        validate_density(&matrix, spin.dim(), STATE_TOL)?;
        Ok(DensityMatrix { spin, matrix })
    }

    pub(crate) fn from_parts_unchecked(spin: SpinLabel, matrix: CMatrix) -> Self {
        DensityMatrix { spin, matrix }
    }

    pub fn maximally_mixed(spin: SpinLabel) -> Self {
        let d = spin.dim();
        DensityMatrix {
            spin,
            matrix: CMatrix::identity(d, d).unscale(d as f64),
        }
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Eigenvalues, descending, with `[-1e-12, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        clamp_spectrum(hermitian_eigenvalues(&self.matrix))
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.to_density()
    }
}

/// Clamps eigenvalues in `[-CLAMP_TOL, 0)` to zero. Larger negative values are kept
/// so that callers can detect them.
pub(crate) fn clamp_spectrum(mut values: Vec<f64>) -> Vec<f64> {
    for v in values.iter_mut() {
        if *v < 0.0 && *v >= -CLAMP_TOL {
            *v = 0.0;
        }
    }
    values
}

/// Checks the density-matrix axioms for a `dim x dim` matrix.
pub fn validate_density(m: &CMatrix, dim: usize, tol: f64) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(domain(format!(
            "density matrix must be {dim}x{dim}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let herm = hermiticity_defect(m);
    if herm > tol {
        return Err(domain(format!("matrix not Hermitian (defect {herm:e})")));
    }
    let tr = trace(m);
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(domain(format!("trace {tr} is not 1")));
    }
    if let Some(&min) = hermitian_eigenvalues(m).last() {
        if min < -tol {
            return Err(domain(format!("negative eigenvalue {min:e}")));
        }
    }
    Ok(())
}

/// Standard angular momentum matrices in the `|l, m⟩` basis.
#[derive(Clone, Debug)]
pub struct Generators {
    pub lz: CMatrix,
    pub lplus: CMatrix,
    pub lminus: CMatrix,
    pub l1: CMatrix,
    pub l2: CMatrix,
    pub l3: CMatrix,
}

impl Generators {
    /// Cartesian generators `[L1, L2, L3]`.
    pub fn cartesian(&self) -> [&CMatrix; 3] {
        [&self.l1, &self.l2, &self.l3]
    }
}

pub fn generators(spin: SpinLabel) -> Generators {
    let d = spin.dim();
    let l = spin.value();
    let mut lz = CMatrix::zeros(d, d);
    let mut lplus = CMatrix::zeros(d, d);
    for i in 0..d {
        let m = spin.twice_m(i) as f64 / 2.0;
        lz[(i, i)] = Complex64::new(m, 0.0);
        if i > 0 {
            // |l,m⟩ -> |l,m+1⟩ lives one index up
            lplus[(i - 1, i)] = Complex64::new((l * (l + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let lminus = lplus.adjoint();
    let l1 = (&lplus + &lminus).scale(0.5);
    let l2 = (&lplus - &lminus) * (I * 2.0).inv();
    Generators {
        l3: lz.clone(),
        lz,
        lplus,
        lminus,
        l1,
        l2,
    }
}

/// Clebsch–Gordan coefficient `⟨l1 m1; l2 m2 | L M⟩` (Condon–Shortley phase).
///
/// All `m` arguments are twice their value. Zero when `m1 + m2 != M`.
pub fn clebsch_gordan(
    l1: SpinLabel,
    twice_m1: i32,
    l2: SpinLabel,
    twice_m2: i32,
    big_l: SpinLabel,
    twice_big_m: i32,
) -> Result<f64> {
    let (t1, t2, tl) = (l1.twice as i32, l2.twice as i32, big_l.twice as i32);
    if tl < (t1 - t2).abs() || tl > t1 + t2 || (t1 + t2 + tl) % 2 != 0 {
        return Err(domain(format!(
            "({l1}, {l2}) cannot couple to {big_l}"
        )));
    }
    for (t, tm, name) in [(t1, twice_m1, "m1"), (t2, twice_m2, "m2"), (tl, twice_big_m, "M")] {
        if tm.abs() > t || (t - tm) % 2 != 0 {
            return Err(domain(format!("{name} = {tm}/2 out of range for twice-spin {t}")));
        }
    }
    if twice_m1 + twice_m2 != twice_big_m {
        return Ok(0.0);
    }
    if tl == t1 + t2 {
        return Ok(stretched_cg(l1, twice_m1, l2, twice_m2));
    }
    Ok(racah_cg(t1, twice_m1, t2, twice_m2, tl, twice_big_m))
}

/// Racah's single-sum formula, evaluated in log space. Arguments are twice-values and
/// must already satisfy the triangle and range conditions.
fn racah_cg(t1: i32, twice_m1: i32, t2: i32, twice_m2: i32, tl: i32, twice_big_m: i32) -> f64 {
    let h = |x: i32| -> usize {
        debug_assert!(x >= 0 && x % 2 == 0);
        (x / 2) as usize
    };
    let a = h(t1 + t2 - tl); // j1 + j2 - J
    let b = h(t1 - twice_m1); // j1 - m1
    let c = h(t2 + twice_m2); // j2 + m2
    let d_off = tl - t2 + twice_m1; // 2(J - j2 + m1)
    let e_off = tl - t1 - twice_m2; // 2(J - j1 - m2)
    let ln_pre = 0.5
        * (((tl + 1) as f64).ln()
            + ln_factorial(h(tl + t1 - t2))
            + ln_factorial(h(tl - t1 + t2))
            + ln_factorial(a)
            - ln_factorial(h(t1 + t2 + tl) + 1)
            + ln_factorial(h(tl + twice_big_m))
            + ln_factorial(h(tl - twice_big_m))
            + ln_factorial(b)
            + ln_factorial(h(t1 + twice_m1))
            + ln_factorial(h(t2 - twice_m2))
            + ln_factorial(c));
    let k_min = 0i32.max(-d_off / 2).max(-e_off / 2);
    let k_max = (a as i32).min(b as i32).min(c as i32);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ku = k as usize;
        let ln_den = ln_factorial(ku)
            + ln_factorial(a - ku)
            + ln_factorial(b - ku)
            + ln_factorial(c - ku)
            + ln_factorial((d_off / 2 + k) as usize)
            + ln_factorial((e_off / 2 + k) as usize);
        let term = (ln_pre - ln_den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    sum
}

/// Closed form of `⟨l1 m1; l2 m2 | l1+l2, m1+m2⟩`:
/// `sqrt(C(2l1, l1+m1) C(2l2, l2+m2) / C(2L, L+M))`.
pub fn stretched_cg(l1: SpinLabel, twice_m1: i32, l2: SpinLabel, twice_m2: i32) -> f64 {
    let (t1, t2) = (l1.twice as i32, l2.twice as i32);
    let k1 = ((t1 + twice_m1) / 2) as usize;
    let k2 = ((t2 + twice_m2) / 2) as usize;
    sqrt_binomial(t1 as usize, k1) * sqrt_binomial(t2 as usize, k2)
        / sqrt_binomial((t1 + t2) as usize, k1 + k2)
}

/// Isometry `W : [l] ⊗ [j] → [l+j]` whose rows are the coupled states `⟨l+j, M|`.
///
/// Shape `(2(l+j)+1) x ((2l+1)(2j+1))`; the product index is `i_l * (2j+1) + i_j`.
/// `W W† = 1` and `W† W` is the projector onto the highest-spin component.
pub fn highest_weight_isometry(l: SpinLabel, j: SpinLabel) -> CMatrix {
    let big = l.add(j);
    let (dl, dj) = (l.dim(), j.dim());
    let mut w = CMatrix::zeros(big.dim(), dl * dj);
    for a in 0..dl {
        let ma = l.twice_m(a);
        for b in 0..dj {
            let mb = j.twice_m(b);
            let row = big.index_of(ma + mb).expect("stretched M is always in range");
            w[(row, a * dj + b)] = Complex64::new(stretched_cg(l, ma, j, mb), 0.0);
        }
    }
    w
}

/// Orthogonal projector `P_{l+j}` onto the highest-spin component of `[l] ⊗ [j]`.
pub fn symmetric_projector(l: SpinLabel, j: SpinLabel) -> CMatrix {
    let w = highest_weight_isometry(l, j);
    w.adjoint() * w
}

/// Full coupling matrix `U[(L, M), (m1, m2)] = ⟨l1 m1; l2 m2 | L M⟩`, rows ordered by
/// `L` descending then `M` descending. Real orthogonal.
pub fn coupling_matrix(l1: SpinLabel, l2: SpinLabel) -> Result<DMatrix<f64>> {
    let (d1, d2) = (l1.dim(), l2.dim());
    let mut u = DMatrix::<f64>::zeros(d1 * d2, d1 * d2);
    let t_min = (l1.twice as i32 - l2.twice as i32).unsigned_abs();
    let mut row = 0;
    let mut tl = l1.twice + l2.twice;
    loop {
        let big = SpinLabel::from_twice(tl);
        for k in 0..big.dim() {
            let tm = big.twice_m(k);
            for a in 0..d1 {
                let ma = l1.twice_m(a);
                let mb = tm - ma;
                if let Some(b) = l2.index_of(mb) {
                    u[(row, a * d2 + b)] = clebsch_gordan(l1, ma, l2, mb, big, tm)?;
                }
            }
            row += 1;
        }
        if tl < t_min + 2 {
            break;
        }
        tl -= 2;
    }
    Ok(u)
}

/// Wigner small-d matrix `d^l_{m'm}(θ) = ⟨l m'| exp(-iθ L2) |l m⟩`, via the spectral
/// decomposition of `L2` (stable for large `l`).
pub fn wigner_small_d(spin: SpinLabel, theta: f64) -> DMatrix<f64> {
    let u = crate::linalg::unitary_exp(&generators(spin).l2, theta);
    u.map(|z| z.re)
}

/// Rotation matrix `R(Ω) = exp(-iφ L3) exp(-iθ L2)` on `[l]`.
pub fn rotation_matrix(spin: SpinLabel, direction: &SphereDirection) -> CMatrix {
    let small = wigner_small_d(spin, direction.theta());
    let phi = direction.phi();
    CMatrix::from_fn(spin.dim(), spin.dim(), |r, c| {
        let mp = spin.twice_m(r) as f64 / 2.0;
        Complex64::from_polar(1.0, -mp * phi) * small[(r, c)]
    })
}

/// Objects that can be rotated by `R(Ω)`.
pub trait Rotate: Sized {
    fn rotate(&self, direction: &SphereDirection) -> Self;
}

impl Rotate for PureState {
    fn rotate(&self, direction: &SphereDirection) -> Self {
        let r = rotation_matrix(self.spin, direction);
        PureState::from_parts_unchecked(self.spin, r * &self.amplitudes)
    }
}

impl Rotate for DensityMatrix {
    fn rotate(&self, direction: &SphereDirection) -> Self {
        let r = rotation_matrix(self.spin, direction);
        DensityMatrix::from_parts_unchecked(self.spin, conjugate(&r, &self.matrix))
    }
}

pub fn rotate<T: Rotate>(state: &T, direction: &SphereDirection) -> T {
    state.rotate(direction)
}

/// `|l,l⟩` as a column.
pub fn highest_weight(spin: SpinLabel) -> CVector {
    let mut v = CVector::from_element(spin.dim(), ZERO);
    v[0] = ONE;
    v
}
