//! Covariant SU(2) channels: the projection channel `ρ ↦ P_{l+j}(ρ ⊗ 1)P_{l+j}` in
//! primal, Kraus and dual-Gram form, and the angular channel `Σ L_i ρ L_i`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::linalg::{conjugate, hermitize, max_abs_diff, trace, CMatrix};
use crate::majopt::SpectrumVector;
use crate::su2::{generators, rotation_matrix, stretched_cg, DensityMatrix, PureState, SphereDirection, SpinLabel};

/// Largest `(2l+1)(2j+1)` accepted by the projection channel.
pub const PROJECTION_GUARD: usize = 40_000;

/// Largest matrix dimension diagonalized densely by the projection routines.
pub const PROJECTION_DENSE_GUARD: usize = 2048;

const TRACE_TOL: f64 = 1e-10;

/// Label of the space a channel output lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputSpace {
    Spin(SpinLabel),
    /// `M` bosons in `N` modes.
    Symmetric { modes: usize, bosons: usize },
}

/// Normalized channel output together with its spectrum.
#[derive(Clone, Debug)]
pub struct ChannelOutput {
    space: OutputSpace,
    matrix: CMatrix,
    spectrum: SpectrumVector,
}

impl ChannelOutput {
    pub(crate) fn from_matrix(space: OutputSpace, matrix: CMatrix) -> Result<Self> {
        let matrix = hermitize(&matrix);
        let tr = trace(&matrix).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Internal(format!("channel output has trace {tr}")));
        }
        let spectrum = SpectrumVector::from_hermitian(&matrix)?;
        Ok(ChannelOutput {
            space,
            matrix,
            spectrum,
        })
    }

    pub fn space(&self) -> OutputSpace {
        self.space
    }

    /// Output spin, for SU(2) channels.
    pub fn spin_out(&self) -> Option<SpinLabel> {
        match self.space {
            OutputSpace::Spin(s) => Some(s),
            OutputSpace::Symmetric { .. } => None,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The output as a density matrix, for SU(2) channels.
    pub fn density(&self) -> Option<DensityMatrix> {
        self.spin_out()
            .map(|s| DensityMatrix::from_parts_unchecked(s, self.matrix.clone()))
    }

    pub fn spectrum(&self) -> &SpectrumVector {
        &self.spectrum
    }

    /// Von Neumann entropy of the output.
    pub fn entropy(&self) -> f64 {
        self.spectrum.entropy()
    }
}

fn check_projection_guard(l: SpinLabel, j: SpinLabel, dense: usize) -> Result<()> {
    if dense > PROJECTION_DENSE_GUARD {
        return Err(Error::Resource {
            what: "dense matrix dimension",
            value: dense,
            limit: PROJECTION_DENSE_GUARD,
        });
    }
    let size = l.dim() * j.dim();
    if size > PROJECTION_GUARD {
        return Err(Error::Resource {
            what: "(2l+1)(2j+1)",
            value: size,
            limit: PROJECTION_GUARD,
        });
    }
    Ok(())
}

/// `(2l+1)/(2(l+j)+1)`.
pub fn projection_prefactor(l: SpinLabel, j: SpinLabel) -> f64 {
    l.dim() as f64 / l.add(j).dim() as f64
}

/// The entropy shift `ln[(2l+1)/(2(l+j)+1)]`.
pub fn projection_shift(l: SpinLabel, j: SpinLabel) -> f64 {
    projection_prefactor(l, j).ln()
}

/// Stretched coefficients `w[b][a] = ⟨l a; j b | l+j, a+b⟩` (basis indices).
/// The coupled index of `(a, b)` is `a + b`.
fn stretched_table(l: SpinLabel, j: SpinLabel) -> Vec<Vec<f64>> {
    (0..j.dim())
        .map(|b| {
            (0..l.dim())
                .map(|a| stretched_cg(l, l.twice_m(a), j, j.twice_m(b)))
                .collect()
        })
        .collect()
}

/// `ρ_pro,j = [(2l+1)/(2(l+j)+1)] P_{l+j}(ρ ⊗ 1)P_{l+j}`, written in the `|l+j, M⟩` basis.
pub fn projection_channel(rho: &DensityMatrix, j: SpinLabel) -> Result<ChannelOutput> {
    let l = rho.spin();
    check_projection_guard(l, j, l.add(j).dim())?;
    let big = l.add(j);
    let c = projection_prefactor(l, j);
    let w = stretched_table(l, j);
    let r = rho.matrix();
    let dl = l.dim();
    let mut out = CMatrix::zeros(big.dim(), big.dim());
    for (b, wb) in w.iter().enumerate() {
        for a in 0..dl {
            for a2 in 0..dl {
                out[(a + b, a2 + b)] += r[(a, a2)] * (c * wb[a] * wb[a2]);
            }
        }
    }
    ChannelOutput::from_matrix(OutputSpace::Spin(big), out)
}

/// Kraus operators `A_M`, `M = j … -j`, each of shape `(2(l+j)+1) x (2l+1)`.
pub fn projection_kraus(l: SpinLabel, j: SpinLabel) -> Vec<CMatrix> {
    let big = l.add(j);
    let sc = projection_prefactor(l, j).sqrt();
    stretched_table(l, j)
        .iter()
        .enumerate()
        .map(|(b, wb)| {
            let mut a_m = CMatrix::zeros(big.dim(), l.dim());
            for (a, &v) in wb.iter().enumerate() {
                a_m[(a + b, a)] = Complex64::new(sc * v, 0.0);
            }
            a_m
        })
        .collect()
}

/// `Σ_M A_M ρ A_M†`.
pub fn apply_kraus(kraus: &[CMatrix], rho: &CMatrix) -> CMatrix {
    let n = kraus.first().map_or(0, |k| k.nrows());
    kraus
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, k| acc + conjugate(k, rho))
}

/// Dual Gram matrix `G[M', M] = [(2l+1)/(2(l+j)+1)] ⟨ψ ⊗ M'|P_{l+j}|ψ ⊗ M⟩`.
///
/// Same non-zero spectrum as the projection channel applied to `|ψ⟩⟨ψ|`; its size
/// depends on `j` only.
pub fn projection_dual_gram(psi: &PureState, j: SpinLabel) -> CMatrix {
    let l = psi.spin();
    let big = l.add(j);
    let c = projection_prefactor(l, j);
    let w = stretched_table(l, j);
    let amps = psi.amplitudes();
    let (dl, dj) = (l.dim(), j.dim());
    // v[b][K] = ⟨l+j, K | ψ ⊗ b⟩
    let v: Vec<Vec<Complex64>> = (0..dj)
        .map(|b| {
            (0..big.dim())
                .map(|k| {
                    if k >= b && k - b < dl {
                        amps[k - b] * w[b][k - b]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    let mut g = CMatrix::zeros(dj, dj);
    for b2 in 0..dj {
        for b in b2..dj {
            // only K in [b, b2 + dl) overlap
            let lo = b;
            let hi = (b2 + dl).min(big.dim());
            let mut acc = Complex64::new(0.0, 0.0);
            for k in lo..hi {
                acc += v[b2][k].conj() * v[b][k];
            }
            g[(b2, b)] = acc * c;
            g[(b, b2)] = (acc * c).conj();
        }
    }
    g
}

/// Von Neumann entropy of the projection channel output.
pub fn projection_entropy(rho: &DensityMatrix, j: SpinLabel) -> Result<f64> {
    Ok(projection_channel(rho, j)?.entropy())
}

/// Projection entropy of a pure state through the smaller of the primal and dual
/// matrices.
pub fn projection_entropy_pure(psi: &PureState, j: SpinLabel) -> Result<f64> {
    let l = psi.spin();
    if j.dim() < l.add(j).dim() {
        check_projection_guard(l, j, j.dim())?;
        let g = projection_dual_gram(psi, j);
        return Ok(SpectrumVector::from_hermitian(&g)?.entropy());
    }
    projection_entropy(&psi.to_density(), j)
}

/// `ρ_ang = [1/(l(l+1))] Σ_i L_i ρ L_i` with Hermitian Cartesian generators.
pub fn angular_channel(rho: &DensityMatrix) -> Result<ChannelOutput> {
    let spin = rho.spin();
    if spin.twice() == 0 {
        return Err(domain("angular channel needs l ≥ 1/2"));
    }
    let g = generators(spin);
    let r = rho.matrix();
    let sum = g
        .cartesian()
        .iter()
        .fold(CMatrix::zeros(spin.dim(), spin.dim()), |acc, li| acc + *li * r * *li);
    ChannelOutput::from_matrix(OutputSpace::Spin(spin), sum.unscale(spin.casimir()))
}

/// `G_ij = ⟨ψ|L_i L_j|ψ⟩ / (l(l+1))`; multiply by `l(l+1)` for the unnormalized form.
pub fn angular_gram(psi: &PureState) -> Result<CMatrix> {
    let spin = psi.spin();
    if spin.twice() == 0 {
        return Err(domain("angular Gram matrix needs l ≥ 1/2"));
    }
    let g = generators(spin);
    let ls = g.cartesian();
    let a = psi.amplitudes();
    let lv: Vec<_> = ls.iter().map(|li| *li * a).collect();
    let c = spin.casimir();
    Ok(CMatrix::from_fn(3, 3, |i, j| lv[i].dotc(&lv[j]) / c))
}

/// Angular entropy.
pub fn angular_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(angular_channel(rho)?.entropy())
}

/// Angular entropy of a pure state via the 3x3 Gram matrix.
pub fn angular_entropy_pure(psi: &PureState) -> Result<f64> {
    Ok(SpectrumVector::from_hermitian(&angular_gram(psi)?)?.entropy())
}

/// The covariant SU(2) channels of this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    Projection(SpinLabel),
    Angular,
}

impl Channel {
    pub fn apply(&self, rho: &DensityMatrix) -> Result<ChannelOutput> {
        match *self {
            Channel::Projection(j) => projection_channel(rho, j),
            Channel::Angular => angular_channel(rho),
        }
    }
}

/// `‖Φ(UρU†) - U'Φ(ρ)U'†‖_max` with `U`, `U'` the rotation by `direction` on the input and
/// output spaces.
pub fn channel_covariance_defect(
    channel: Channel,
    rho: &DensityMatrix,
    direction: &SphereDirection,
) -> Result<f64> {
    let u_in = rotation_matrix(rho.spin(), direction);
    let rotated = DensityMatrix::from_parts_unchecked(rho.spin(), conjugate(&u_in, rho.matrix()));
    let out = channel.apply(rho)?;
    let out_rot = channel.apply(&rotated)?;
    let spin_out = out.spin_out().expect("SU(2) channels have spin outputs");
    let u_out = rotation_matrix(spin_out, direction);
    Ok(max_abs_diff(out_rot.matrix(), &conjugate(&u_out, out.matrix())))
}
