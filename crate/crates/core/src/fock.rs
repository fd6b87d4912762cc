//! Symmetric SU(N) representations on bosonic Fock sectors: occupation bases, ladder
//! operators, the cloning channel `Φ^k`, reduced density matrices `γ^ℓ`, the
//! measure-and-prepare channel and its decomposition into `Φ^ℓ ∘ γ^{k-ℓ}`.
//!
//! States and density matrices on a sector are plain vectors/matrices in the
//! occupation basis of the matching [`SymmetricSpace`].

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::channels::{ChannelOutput, OutputSpace};
use crate::error::{domain, Error, Result};
use crate::linalg::{
    factorial, hermitize, identity, ln_factorial, max_abs_diff, trace, CMatrix, CVector, ZERO,
};
use crate::majopt::{majorization_violation, SpectrumVector};
use crate::sampling::{haar_vector, seeded_rng};
use crate::su2::{validate_density, PureState, SpinLabel};

/// Largest sector dimension handled with dense matrices.
pub const FOCK_GUARD: usize = 4096;

/// Largest residual accepted by [`decompose_measure_prepare`].
pub const DECOMPOSITION_THRESHOLD: f64 = 1e-9;

/// Largest deviation of `Σ K†K` from a multiple of the identity.
const SCALAR_TOL: f64 = 1e-8;

/// `H_M = Sym^M(C^N)` with occupation tuples in descending lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricSpace {
    modes: usize,
    bosons: usize,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// `C(M+N-1, N-1)` as a float.
pub fn symmetric_dim(modes: usize, bosons: usize) -> f64 {
    if modes == 0 {
        return if bosons == 0 { 1.0 } else { 0.0 };
    }
    (ln_factorial(bosons + modes - 1) - ln_factorial(modes - 1) - ln_factorial(bosons))
        .exp()
        .round()
}

fn push_occupations(modes: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() + 1 == modes {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for n in (0..=remaining).rev() {
        prefix.push(n);
        push_occupations(modes, remaining - n, prefix, out);
        prefix.pop();
    }
}

impl SymmetricSpace {
    pub fn new(modes: usize, bosons: usize) -> Result<Self> {
        if modes < 2 {
            return Err(domain(format!("need at least 2 modes, got {modes}")));
        }
        let dim = symmetric_dim(modes, bosons);
        if dim > FOCK_GUARD as f64 {
            return Err(Error::Resource {
                what: "dim Sym^M(C^N)",
                value: dim.min(usize::MAX as f64) as usize,
                limit: FOCK_GUARD,
            });
        }
        let mut basis = Vec::with_capacity(dim as usize);
        push_occupations(modes, bosons, &mut Vec::with_capacity(modes), &mut basis);
        let index = basis.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Ok(SymmetricSpace {
            modes,
            bosons,
            basis,
            index,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn bosons(&self) -> usize {
        self.bosons
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn index_of(&self, occupation: &[usize]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// The sector with `bosons + extra` particles.
    pub fn raised(&self, extra: usize) -> Result<SymmetricSpace> {
        SymmetricSpace::new(self.modes, self.bosons + extra)
    }

    fn output_space(&self) -> OutputSpace {
        OutputSpace::Symmetric {
            modes: self.modes,
            bosons: self.bosons,
        }
    }

    fn check_vector(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(domain(format!("vector has length {}, sector has dimension {}", v.len(), self.dim())));
        }
        Ok(())
    }

    fn check_density(&self, rho: &CMatrix) -> Result<()> {
        validate_density(rho, self.dim(), 1e-10)
    }
}

/// `a*_i : H_M → H_{M+1}` stored as one target index and factor `sqrt(n_i + 1)` per
/// source basis vector.
#[derive(Clone, Debug)]
struct Ladder {
    target: Vec<usize>,
    factor: Vec<f64>,
}

fn ladders(lower: &SymmetricSpace, upper: &SymmetricSpace) -> Vec<Ladder> {
    (0..lower.modes)
        .map(|i| {
            let mut target = Vec::with_capacity(lower.dim());
            let mut factor = Vec::with_capacity(lower.dim());
            for n in lower.basis() {
                let mut up = n.clone();
                up[i] += 1;
                target.push(upper.index_of(&up).expect("raised occupation lies in H_{M+1}"));
                factor.push(((n[i] + 1) as f64).sqrt());
            }
            Ladder { target, factor }
        })
        .collect()
}

/// Creation matrices `a*_i : H_M → H_{M+1}` for every sector `M = 0..max_bosons`;
/// annihilators are their adjoints.
#[derive(Clone, Debug)]
pub struct FockOperatorSet {
    sectors: Vec<SymmetricSpace>,
    creation: Vec<Vec<CMatrix>>,
}

impl FockOperatorSet {
    pub fn new(modes: usize, max_bosons: usize) -> Result<Self> {
        let sectors: Vec<SymmetricSpace> = (0..=max_bosons)
            .map(|m| SymmetricSpace::new(modes, m))
            .collect::<Result<_>>()?;
        let creation = sectors
            .windows(2)
            .map(|w| {
                ladders(&w[0], &w[1])
                    .iter()
                    .map(|lad| {
                        let mut a = CMatrix::zeros(w[1].dim(), w[0].dim());
                        for (src, (&t, &f)) in lad.target.iter().zip(&lad.factor).enumerate() {
                            a[(t, src)] = Complex64::new(f, 0.0);
                        }
                        a
                    })
                    .collect()
            })
            .collect();
        Ok(FockOperatorSet { sectors, creation })
    }

    pub fn sector(&self, bosons: usize) -> &SymmetricSpace {
        &self.sectors[bosons]
    }

    /// `a*_i` from `H_M` to `H_{M+1}`.
    pub fn creation(&self, mode: usize, bosons: usize) -> &CMatrix {
        &self.creation[bosons][mode]
    }

    /// `a_i` from `H_{M+1}` to `H_M`.
    pub fn annihilation(&self, mode: usize, bosons: usize) -> CMatrix {
        self.creation[bosons][mode].adjoint()
    }

    /// Largest entry of `[a_i, a*_j] - δ_ij` on the sector `H_M` (`M` below the top).
    pub fn ccr_defect(&self, bosons: usize) -> f64 {
        let n = self.sectors[bosons].modes();
        let d = self.sectors[bosons].dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut c = self.annihilation(i, bosons) * self.creation(j, bosons);
                if bosons > 0 {
                    c -= self.creation(j, bosons - 1) * self.annihilation(i, bosons - 1);
                }
                let expect = if i == j { identity(d) } else { CMatrix::zeros(d, d) };
                worst = worst.max(max_abs_diff(&c, &expect));
            }
        }
        worst
    }

    /// Largest entry of `[a*_i, a*_j] : H_M → H_{M+2}`; `[a_i, a_j]` is its adjoint.
    pub fn commuting_defect(&self, bosons: usize) -> f64 {
        let n = self.sectors[bosons].modes();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let up = self.creation(i, bosons + 1) * self.creation(j, bosons)
                    - self.creation(j, bosons + 1) * self.creation(i, bosons);
                worst = worst.max(up.iter().fold(0.0, |a, z| a.max(z.norm())));
            }
        }
        worst
    }
}

/// Condensate `|Ω ⊗ … ⊗ Ω⟩ ∈ H_M`: amplitude `sqrt(M!/Π n_i!) Π Ω_i^{n_i}`; `Ω` is
/// normalized first.
pub fn coherent_condensate(space: &SymmetricSpace, omega: &CVector) -> Result<CVector> {
    if omega.len() != space.modes() {
        return Err(domain(format!("Ω has {} components, space has {} modes", omega.len(), space.modes())));
    }
    let norm = omega.norm();
    if !(norm > 1e-300) {
        return Err(domain("Ω is the zero vector"));
    }
    let omega = omega.unscale(norm);
    let m = space.bosons();
    Ok(CVector::from_iterator(
        space.dim(),
        space.basis().iter().map(|n| {
            let ln_w = ln_factorial(m) - n.iter().map(|&k| ln_factorial(k)).sum::<f64>();
            n.iter()
                .zip(omega.iter())
                .fold(Complex64::new((0.5 * ln_w).exp(), 0.0), |acc, (&k, z)| acc * z.powu(k as u32))
        }),
    ))
}

/// For `N = 2`: a sector vector as a spin-`M/2` state (`m = (n_1 - n_2)/2`).
pub fn to_spin_state(space: &SymmetricSpace, v: &CVector) -> Result<PureState> {
    if space.modes() != 2 {
        return Err(domain("the spin dictionary needs N = 2"));
    }
    space.check_vector(v)?;
    // (M - i, i) is basis index i, which is also the spin index of m = M/2 - i
    PureState::new(SpinLabel::from_twice(space.bosons() as u32), v.clone())
}

/// For `N = 2`: a spin-`l` state as a vector in `H_{2l}`.
pub fn from_spin_state(psi: &PureState) -> (SymmetricSpace, CVector) {
    let space = SymmetricSpace::new(2, psi.spin().twice() as usize).expect("spin sectors are small");
    (space, psi.amplitudes().clone())
}

/// `T(ρ) = Σ_i a*_i ρ a_i` from `H_M` to `H_{M+1}` (unnormalized).
fn raise(lower: &SymmetricSpace, upper: &SymmetricSpace, rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(upper.dim(), upper.dim());
    for lad in ladders(lower, upper) {
        for q in 0..lower.dim() {
            let (tq, fq) = (lad.target[q], lad.factor[q]);
            for p in 0..lower.dim() {
                out[(lad.target[p], tq)] += rho[(p, q)] * (lad.factor[p] * fq);
            }
        }
    }
    out
}

/// Dual `T†(X) = Σ_i a_i X a*_i` from operators on `H_{M+1}` to operators on `H_M`.
fn lower_dual(lower: &SymmetricSpace, upper: &SymmetricSpace, x: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(lower.dim(), lower.dim());
    for lad in ladders(lower, upper) {
        for q in 0..lower.dim() {
            for p in 0..lower.dim() {
                out[(p, q)] += x[(lad.target[p], lad.target[q])] * (lad.factor[p] * lad.factor[q]);
            }
        }
    }
    out
}

/// The scalar `s` with `Σ K†K = s·1` for the Kraus family
/// `K = a*_{i_1} … a*_{i_k} : H_M → H_{M+k}`, computed and checked numerically.
pub fn cloning_normalization(space: &SymmetricSpace, k: usize) -> Result<f64> {
    let chain: Vec<SymmetricSpace> = (0..=k).map(|e| space.raised(e)).collect::<Result<_>>()?;
    let mut x = identity(chain[k].dim());
    for e in (0..k).rev() {
        x = lower_dual(&chain[e], &chain[e + 1], &x);
    }
    let s = trace(&x).re / space.dim() as f64;
    let defect = max_abs_diff(&x, &identity(space.dim()).scale(s));
    if defect > SCALAR_TOL * s.max(1.0) {
        return Err(Error::Internal(format!(
            "Σ K†K is not a multiple of the identity (deviation {defect:e})"
        )));
    }
    Ok(s)
}

/// `Φ^k(ρ) = (1/s) Σ_{i_1…i_k} a*_{i_1}…a*_{i_k} ρ a_{i_k}…a_{i_1}` on `H_{M+k}`.
pub fn cloning_channel(space: &SymmetricSpace, rho: &CMatrix, k: usize) -> Result<ChannelOutput> {
    space.check_density(rho)?;
    let top = space.raised(k)?;
    let s = cloning_normalization(space, k)?;
    let out = cloning_unnormalized(space, rho, k)?;
    ChannelOutput::from_matrix(top.output_space(), out.unscale(s))
}

fn cloning_unnormalized(space: &SymmetricSpace, rho: &CMatrix, k: usize) -> Result<CMatrix> {
    let mut cur = rho.clone();
    let mut lower = space.clone();
    for _ in 0..k {
        let upper = lower.raised(1)?;
        cur = raise(&lower, &upper, &cur);
        lower = upper;
    }
    Ok(cur)
}

/// Applies `Φ^k` to any operator (trace need not be one).
fn cloning_linear(space: &SymmetricSpace, x: &CMatrix, k: usize) -> Result<CMatrix> {
    let s = cloning_normalization(space, k)?;
    Ok(cloning_unnormalized(space, x, k)?.unscale(s))
}

/// Sparse `a^ν = Π_i a_i^{ν_i} : H_M → H_{M-|ν|}`: per source vector, the target index
/// and factor `sqrt(Π n_i!/(n_i-ν_i)!)`, or `None` when it is annihilated.
fn multi_annihilation(
    from: &SymmetricSpace,
    to: &SymmetricSpace,
    nu: &[usize],
) -> Vec<Option<(usize, f64)>> {
    from.basis()
        .iter()
        .map(|n| {
            if n.iter().zip(nu).any(|(a, b)| a < b) {
                return None;
            }
            let rest: Vec<usize> = n.iter().zip(nu).map(|(a, b)| a - b).collect();
            let ln_f: f64 = n
                .iter()
                .zip(&rest)
                .map(|(&a, &r)| ln_factorial(a) - ln_factorial(r))
                .sum();
            Some((to.index_of(&rest).expect("lowered occupation"), (0.5 * ln_f).exp()))
        })
        .collect()
}

/// `γ^ℓ(ρ)[ν, ν'] = ℓ!/sqrt(ν! ν'!) · tr(a^ν ρ (a^{ν'})†)` on `H_ℓ`.
///
/// Normalized so that a condensate gives `γ^ℓ(|Ω_M⟩⟨Ω_M|) = M!/(M-ℓ)! |Ω_ℓ⟩⟨Ω_ℓ|`; the
/// trace is `M!/(M-ℓ)!` for every state.
pub fn reduced_density(space: &SymmetricSpace, rho: &CMatrix, ell: usize) -> Result<CMatrix> {
    if ell > space.bosons() {
        return Err(domain(format!("ℓ = {ell} exceeds M = {}", space.bosons())));
    }
    if rho.shape() != (space.dim(), space.dim()) {
        return Err(domain("matrix does not match the sector dimension"));
    }
    let target = SymmetricSpace::new(space.modes(), ell)?;
    let rest = SymmetricSpace::new(space.modes(), space.bosons() - ell)?;
    let maps: Vec<Vec<Option<(usize, f64)>>> = target
        .basis()
        .iter()
        .map(|nu| multi_annihilation(space, &rest, nu))
        .collect();
    // 1/sqrt(ν!)
    let weights: Vec<f64> = target
        .basis()
        .iter()
        .map(|nu| (-0.5 * nu.iter().map(|&k| ln_factorial(k)).sum::<f64>()).exp())
        .collect();
    // per residual state r: the list (ν index, source index, factor)
    let mut by_rest: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); rest.dim()];
    for (a, map) in maps.iter().enumerate() {
        for (src, entry) in map.iter().enumerate() {
            if let Some((r, f)) = entry {
                by_rest[*r].push((a, src, *f));
            }
        }
    }
    let lf = factorial(ell);
    let mut gamma = CMatrix::zeros(target.dim(), target.dim());
    for group in &by_rest {
        for &(a, p, fp) in group {
            for &(b, q, fq) in group {
                gamma[(a, b)] += rho[(p, q)] * (fp * fq);
            }
        }
    }
    for a in 0..target.dim() {
        for b in 0..target.dim() {
            gamma[(a, b)] *= lf * weights[a] * weights[b];
        }
    }
    Ok(hermitize(&gamma))
}

/// `sqrt(M!/Π μ_i!)`.
fn sqrt_multinomial(occ: &[usize]) -> f64 {
    let total: usize = occ.iter().sum();
    (0.5 * (ln_factorial(total) - occ.iter().map(|&k| ln_factorial(k)).sum::<f64>())).exp()
}

/// `Φ̃^k(|ψ⟩⟨ψ|) ∝ ⟨ψ ⊗ id|P_sym|ψ ⊗ id⟩` on `H_k`, normalized to trace one.
///
/// Uses the embedding `J : H_{M+k} → H_M ⊗ H_k`,
/// `⟨μ; ν|n⟩ = sqrt(multinom(M; μ) multinom(k; ν) / multinom(M+k; n))`, `P_sym = J J†`.
pub fn measure_prepare_channel(space: &SymmetricSpace, psi: &CVector, k: usize) -> Result<ChannelOutput> {
    space.check_vector(psi)?;
    let out_space = SymmetricSpace::new(space.modes(), k)?;
    let top = space.raised(k)?;
    // columns x_ν = J†(ψ ⊗ ν) ∈ H_{M+k}
    let mut x = CMatrix::zeros(top.dim(), out_space.dim());
    for (b, nu) in out_space.basis().iter().enumerate() {
        let wn = sqrt_multinomial(nu);
        for (a, mu) in space.basis().iter().enumerate() {
            let n: Vec<usize> = mu.iter().zip(nu).map(|(p, q)| p + q).collect();
            let t = top.index_of(&n).expect("summed occupation lies in H_{M+k}");
            x[(t, b)] += psi[a] * (sqrt_multinomial(mu) * wn / sqrt_multinomial(&n));
        }
    }
    // G[ν', ν] = ⟨x_ν'|x_ν⟩
    let g = x.adjoint() * x;
    let tr = trace(&g).re;
    ChannelOutput::from_matrix(out_space.output_space(), g.unscale(tr))
}

/// The same channel through creation operators: `G[ν', ν] ∝ ⟨ψ|a^{ν'} (a*)^ν|ψ⟩/sqrt(ν!ν'!)`.
pub fn measure_prepare_second_quantized(
    ops: &FockOperatorSet,
    psi: &CVector,
    bosons: usize,
    k: usize,
) -> Result<ChannelOutput> {
    let space = ops.sector(bosons);
    space.check_vector(psi)?;
    if bosons + k >= ops.sectors.len() {
        return Err(domain("operator set does not reach H_{M+k}"));
    }
    let out_space = SymmetricSpace::new(space.modes(), k)?;
    let columns: Vec<CVector> = out_space
        .basis()
        .iter()
        .map(|nu| {
            let mut v = psi.clone();
            let mut level = bosons;
            for (i, &count) in nu.iter().enumerate() {
                for _ in 0..count {
                    v = ops.creation(i, level) * v;
                    level += 1;
                }
            }
            let nf: f64 = nu.iter().map(|&c| factorial(c)).product();
            v.unscale(nf.sqrt())
        })
        .collect();
    let d = out_space.dim();
    let g = CMatrix::from_fn(d, d, |a, b| columns[a].dotc(&columns[b]));
    let tr = trace(&g).re;
    ChannelOutput::from_matrix(out_space.output_space(), g.unscale(tr))
}

/// Fitted coefficients of `Φ̃^k(ψ) = Σ_ℓ C_ℓ Φ^ℓ(γ^{k-ℓ}(ψ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// `C_ℓ` for `ℓ = 0..=k`; terms with `k - ℓ > M` are excluded and reported as 0.
    pub coefficients: Vec<f64>,
    pub included: Vec<bool>,
    /// Largest entrywise residual over the batch.
    pub residual: f64,
}

/// Least-squares fit of the measure-and-prepare channel against cloning channels of
/// reduced density matrices over a batch of pure states.
pub fn decompose_measure_prepare_batch(
    space: &SymmetricSpace,
    k: usize,
    batch: &[CVector],
) -> Result<Decomposition> {
    let m = space.bosons();
    let included: Vec<bool> = (0..=k).map(|ell| k - ell <= m).collect();
    let terms: Vec<usize> = (0..=k).filter(|&ell| included[ell]).collect();
    let out_dim = SymmetricSpace::new(space.modes(), k)?.dim();
    let rows_per_state = 2 * out_dim * out_dim;
    let mut a = DMatrix::<f64>::zeros(rows_per_state * batch.len(), terms.len());
    let mut rhs = DVector::<f64>::zeros(rows_per_state * batch.len());
    for (s, psi) in batch.iter().enumerate() {
        let target = measure_prepare_channel(space, psi, k)?;
        let rho = psi * psi.adjoint();
        let base = s * rows_per_state;
        for (c, &ell) in terms.iter().enumerate() {
            let reduced_space = SymmetricSpace::new(space.modes(), k - ell)?;
            let gamma = reduced_density(space, &rho, k - ell)?;
            let column = cloning_linear(&reduced_space, &gamma, ell)?;
            for (e, z) in column.iter().enumerate() {
                a[(base + 2 * e, c)] = z.re;
                a[(base + 2 * e + 1, c)] = z.im;
            }
        }
        for (e, z) in target.matrix().iter().enumerate() {
            rhs[base + 2 * e] = z.re;
            rhs[base + 2 * e + 1] = z.im;
        }
    }
    let svd = a.clone().svd(true, true);
    let fit = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
    let residual = (&a * &fit - &rhs).amax();
    let mut coefficients = vec![0.0; k + 1];
    for (c, &ell) in terms.iter().enumerate() {
        coefficients[ell] = fit[c];
    }
    if residual > DECOMPOSITION_THRESHOLD {
        return Err(Error::Decomposition {
            residual,
            threshold: DECOMPOSITION_THRESHOLD,
        });
    }
    Ok(Decomposition {
        coefficients,
        included,
        residual,
    })
}

/// [`decompose_measure_prepare_batch`] over `batch_size` Haar-random states drawn from
/// `seed`.
pub fn decompose_measure_prepare(
    modes: usize,
    bosons: usize,
    k: usize,
    batch_size: usize,
    seed: u64,
) -> Result<Decomposition> {
    let space = SymmetricSpace::new(modes, bosons)?;
    let mut rng = seeded_rng(seed);
    let batch: Vec<CVector> = (0..batch_size).map(|_| haar_vector(&mut rng, space.dim())).collect();
    decompose_measure_prepare_batch(&space, k, &batch)
}

/// Matrix of `U^{⊗M}` restricted to `H_M`, by expanding `Π_i (Σ_j U_{ji} x_j)^{n_i}`.
pub fn symmetric_power(space: &SymmetricSpace, u: &CMatrix) -> Result<CMatrix> {
    let n = space.modes();
    if u.shape() != (n, n) {
        return Err(domain("unitary does not match the number of modes"));
    }
    let d = space.dim();
    let mut out = CMatrix::zeros(d, d);
    for (col, occ) in space.basis().iter().enumerate() {
        let mut poly: HashMap<Vec<usize>, Complex64> = HashMap::new();
        poly.insert(vec![0; n], Complex64::new(1.0, 0.0));
        for (i, &count) in occ.iter().enumerate() {
            for _ in 0..count {
                let mut next: HashMap<Vec<usize>, Complex64> = HashMap::new();
                for (mono, c) in &poly {
                    for j in 0..n {
                        let mut m2 = mono.clone();
                        m2[j] += 1;
                        *next.entry(m2).or_insert(ZERO) += c * u[(j, i)];
                    }
                }
                poly = next;
            }
        }
        let ln_n: f64 = occ.iter().map(|&k| ln_factorial(k)).sum();
        for (mono, c) in poly {
            let row = space.index_of(&mono).expect("degree is preserved");
            let ln_m: f64 = mono.iter().map(|&k| ln_factorial(k)).sum();
            out[(row, col)] += c * (0.5 * (ln_m - ln_n)).exp();
        }
    }
    Ok(out)
}

/// Outcome of comparing cloning outputs of random states against a condensate.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorizationReport {
    pub samples: usize,
    pub passes: usize,
    pub failures: usize,
    /// Largest `Σ_{i≤k} λ_i(ρ) - Σ_{i≤k} λ_i(coherent)` seen.
    pub worst_violation: f64,
    pub coherent_spectrum: SpectrumVector,
}

/// Draws `samples` Haar-random pure states on `H_M` and checks that the spectrum of
/// `Φ^k(coherent)` majorizes each `Φ^k(ψ)` within [`crate::majopt::MAJORIZATION_EPS`].
pub fn sun_coherent_majorization_test(
    modes: usize,
    bosons: usize,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<MajorizationReport> {
    let mut rng = seeded_rng(seed);
    sun_majorization_with(modes, bosons, k, samples, |d| haar_vector(&mut rng, d))
}

fn sun_majorization_with(
    modes: usize,
    bosons: usize,
    k: usize,
    samples: usize,
    mut draw: impl FnMut(usize) -> CVector,
) -> Result<MajorizationReport> {
    let space = SymmetricSpace::new(modes, bosons)?;
    let mut e1 = CVector::zeros(modes);
    e1[0] = Complex64::new(1.0, 0.0);
    let coh = coherent_condensate(&space, &e1)?;
    let coherent = cloning_channel(&space, &(&coh * coh.adjoint()), k)?.spectrum().clone();
    let mut passes = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let psi = draw(space.dim());
        let out = cloning_channel(&space, &(&psi * psi.adjoint()), k)?;
        let v = majorization_violation(&coherent, out.spectrum());
        worst = worst.max(v);
        if v <= crate::majopt::MAJORIZATION_EPS {
            passes += 1;
        }
    }
    Ok(MajorizationReport {
        samples,
        passes,
        failures: samples - passes,
        worst_violation: if samples == 0 { 0.0 } else { worst },
        coherent_spectrum: coherent,
    })
}

/// A Haar-random pure state on `H_M`.
pub fn random_sector_state<R: Rng + ?Sized>(rng: &mut R, space: &SymmetricSpace) -> CVector {
    haar_vector(rng, space.dim())
}
