use super::partition::{chi, phi, pow2, DyadicPartition};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::norms::{check_exponent, lp_norm_components};
use crate::spectral::ops::apply_radial;
use crate::spectral::{SpectralField, VectorField};

/// Which Littlewood–Paley operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// `Δ̇_j = φ(2^{-j}D)`.
    Block(i32),
    /// `Ṡ_j = χ(2^{-j}D)`.
    LowCut(i32),
}

/// Summation exponent of the `ℓ^r` sum over dyadic blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumExponent {
    One,
    Two,
    Infinity,
}

/// Frequency restriction of a Besov norm around the cutoff `j₀`.
///
/// Low sums `j ≤ j₀`, high sums `j ≥ j₀ - 1`; the two overlap in one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    All,
    Low(i32),
    High(i32),
}

impl Restriction {
    pub fn admits(&self, j: i32) -> bool {
        match *self {
            Restriction::All => true,
            Restriction::Low(j0) => j <= j0,
            Restriction::High(j0) => j >= j0 - 1,
        }
    }
}

/// Parameters of a homogeneous Besov norm `Ḃ^s_{p,r}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovSpec<T> {
    pub s: T,
    pub p: T,
    pub r: SumExponent,
    pub restriction: Restriction,
}

impl<T: Scalar> BesovSpec<T> {
    pub fn new(s: T, p: T, r: SumExponent) -> Self {
        BesovSpec {
            s,
            p,
            r,
            restriction: Restriction::All,
        }
    }

    pub fn low(self, j0: i32) -> Self {
        BesovSpec {
            restriction: Restriction::Low(j0),
            ..self
        }
    }

    pub fn high(self, j0: i32) -> Self {
        BesovSpec {
            restriction: Restriction::High(j0),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent(self.p)?;
        if !self.s.is_finite() {
            return Err(Error::domain("Besov regularity must be finite"));
        }
        Ok(())
    }
}

/// `Δ̇_j f` or `Ṡ_j f`.
pub fn dyadic_block<T: Scalar>(field: &SpectralField<T>, which: BlockKind) -> SpectralField<T> {
    match which {
        BlockKind::Block(j) => {
            let scale = pow2::<T>(-j);
            apply_radial(field, |r| phi(r * scale), Some(T::zero())).expect("bounded symbol")
        }
        BlockKind::LowCut(j) => {
            let scale = pow2::<T>(-j);
            apply_radial(field, |r| chi(r * scale), Some(T::one())).expect("bounded symbol")
        }
    }
}

/// `‖Δ̇_j f‖_{L^p}` for every `j` of the partition, `f` given by components
/// (the pointwise Euclidean magnitude is used for vector data).
///
/// `p = 2` is evaluated by Parseval on the coefficients.
pub fn block_norms_components<T: Scalar>(
    comps: &[&SpectralField<T>],
    p: T,
    partition: &DyadicPartition,
) -> Result<Vec<(i32, T)>> {
    check_exponent(p)?;
    let grid = comps
        .first()
        .ok_or_else(|| Error::structural("no components"))?
        .grid()
        .clone();
    for c in &comps[1..] {
        comps[0].ensure_same_grid(c)?;
    }
    let two = T::one() + T::one();
    let radii = grid.radii();
    let mut out = Vec::with_capacity(partition.len());
    for j in partition.indices() {
        let scale = pow2::<T>(-j);
        let norm = if p == two {
            let mut sum = T::zero();
            for comp in comps {
                for (i, z) in comp.coeffs().iter().enumerate().skip(1) {
                    let w = phi(radii[i] * scale);
                    if w != T::zero() {
                        sum = sum + z.norm_sqr() * w * w;
                    }
                }
            }
            (sum * grid.volume()).sqrt()
        } else {
            let samples: Vec<Vec<T>> = comps
                .iter()
                .map(|f| dyadic_block(f, BlockKind::Block(j)).to_physical())
                .collect();
            lp_norm_components(&samples, p, grid.cell_volume())?
        };
        out.push((j, norm));
    }
    Ok(out)
}

pub fn block_norms<T: Scalar>(field: &SpectralField<T>, p: T) -> Result<Vec<(i32, T)>> {
    let partition = DyadicPartition::for_grid(field.grid());
    block_norms_components(&[field], p, &partition)
}

pub fn block_norms_vector<T: Scalar>(u: &VectorField<T>, p: T) -> Result<Vec<(i32, T)>> {
    let partition = DyadicPartition::for_grid(u.grid());
    let comps: Vec<&SpectralField<T>> = u.comps().iter().collect();
    block_norms_components(&comps, p, &partition)
}

/// `ℓ^r` combination of `2^{js}·b_j` over the admitted blocks.
pub fn combine_blocks<T: Scalar>(blocks: &[(i32, T)], s: T, r: SumExponent, restriction: Restriction) -> T {
    let weighted = blocks
        .iter()
        .filter(|(j, _)| restriction.admits(*j))
        .map(|&(j, b)| (as_scalar::<T>(j) * s).exp2() * b);
    match r {
        SumExponent::One => weighted.sum(),
        SumExponent::Two => weighted.map(|x| x * x).sum::<T>().sqrt(),
        SumExponent::Infinity => weighted.fold(T::zero(), T::max),
    }
}

#[inline]
fn as_scalar<T: Scalar>(j: i32) -> T {
    T::cst(j as f64)
}

/// Homogeneous Besov norm of a mean-zero scalar field.
pub fn besov_norm<T: Scalar>(field: &SpectralField<T>, spec: &BesovSpec<T>) -> Result<T> {
    spec.validate()?;
    if !field.is_mean_zero() {
        return Err(Error::domain("homogeneous Besov norm needs a mean-zero field"));
    }
    let blocks = block_norms(field, spec.p)?;
    Ok(combine_blocks(&blocks, spec.s, spec.r, spec.restriction))
}

/// Besov norm of the pointwise magnitude of a vector field (mean flow ignored
/// by the blocks, which vanish at `ξ = 0`).
pub fn besov_norm_vector<T: Scalar>(u: &VectorField<T>, spec: &BesovSpec<T>) -> Result<T> {
    spec.validate()?;
    let blocks = block_norms_vector(u, spec.p)?;
    Ok(combine_blocks(&blocks, spec.s, spec.r, spec.restriction))
}
