//! Completely positive maps in canonical form `Θ(A) = Σ λ_α f_α A f_α*`,
//! their duals, and the PSD inverse square root used to normalize
//! teleportation maps.

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, hermiticity_defect, CMatrix};
use crate::operator_space::{self, OperatorBasis, OperatorMatrix};
use crate::{ROUNDTRIP_TOL, STRUCTURAL_TOL};

/// Default relative spectral cutoff for rank decisions.
pub const DEFAULT_REL_CUTOFF: f64 = 1e-10;
/// Eigenvalues in `[-NEGATIVE_FLOOR, 0)` are treated as roundoff and clamped.
pub const NEGATIVE_FLOOR: f64 = 1e-12;

/// Weights `λ_α` and an orthonormal basis `{f_α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CpMapSpec {
    weights: Vec<f64>,
    basis: OperatorBasis,
}

impl CpMapSpec {
    pub fn new(weights: Vec<f64>, basis: OperatorBasis) -> Result<Self> {
        if weights.len() != basis.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for a basis of {} elements",
                weights.len(),
                basis.len()
            )));
        }
        if let Some((k, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidWeights(format!(
                "weight {k} = {w} is negative or not finite"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > ROUNDTRIP_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let defect = operator_space::gram_defect(&basis);
        if defect > STRUCTURAL_TOL {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self { weights, basis })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Nonzero-weight Kraus pairs `(λ_α, f_α)`.
    pub fn terms(&self) -> impl Iterator<Item = (f64, &OperatorMatrix)> {
        self.weights
            .iter()
            .copied()
            .zip(self.basis.iter())
            .filter(|(w, _)| *w != 0.0)
    }
}

/// A single operator `f` with `tr(f* f) = 1`, defining `Θ(A) = f A f*`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureResource {
    f: OperatorMatrix,
}

impl PureResource {
    pub fn new(f: OperatorMatrix) -> Result<Self> {
        let n = linalg::ensure_square(&f)?;
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let trace = f.norm_squared();
        if (trace - 1.0).abs() > ROUNDTRIP_TOL {
            return Err(Error::NotNormalized { trace });
        }
        Ok(Self { f })
    }

    pub fn operator(&self) -> &OperatorMatrix {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.f.nrows()
    }
}

/// The resource map `Θ`, either a general canonical CP map or a pure one.
#[derive(Debug, Clone, PartialEq)]
pub enum Resource {
    Mixed(CpMapSpec),
    Pure(PureResource),
}

impl Resource {
    pub fn dim(&self) -> usize {
        match self {
            Resource::Mixed(t) => t.dim(),
            Resource::Pure(p) => p.dim(),
        }
    }

    /// `Θ(A)`.
    pub fn apply(&self, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        match self {
            Resource::Mixed(t) => apply_cp(t, a),
            Resource::Pure(p) => {
                linalg::ensure_same_dim(&p.f, a)?;
                Ok(&p.f * a * p.f.adjoint())
            }
        }
    }

    /// `Θ̃(A)`, the dual with respect to `tr(A·Θ(ρ)) = tr(Θ̃(A)·ρ)`.
    pub fn dual(&self, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        match self {
            Resource::Mixed(t) => dual_cp(t, a),
            Resource::Pure(p) => {
                linalg::ensure_same_dim(&p.f, a)?;
                Ok(p.f.adjoint() * a * &p.f)
            }
        }
    }

    /// Kraus operators `√λ_α f_α` with nonzero weight.
    pub fn kraus(&self) -> Vec<OperatorMatrix> {
        match self {
            Resource::Mixed(t) => t.terms().map(|(w, f)| f.scale(w.sqrt())).collect(),
            Resource::Pure(p) => vec![p.f.clone()],
        }
    }

    pub fn as_pure(&self) -> Option<&PureResource> {
        match self {
            Resource::Pure(p) => Some(p),
            Resource::Mixed(_) => None,
        }
    }
}

impl From<CpMapSpec> for Resource {
    fn from(t: CpMapSpec) -> Self {
        Resource::Mixed(t)
    }
}

impl From<PureResource> for Resource {
    fn from(p: PureResource) -> Self {
        Resource::Pure(p)
    }
}

/// `Σ λ_α f_α A f_α*`.
pub fn apply_cp(t: &CpMapSpec, a: &OperatorMatrix) -> Result<OperatorMatrix> {
    linalg::ensure_same_dim(&t.basis[0], a)?;
    Ok(t.terms()
        .fold(CMatrix::zeros(t.dim(), t.dim()), |acc, (w, f)| {
            acc + (f * a * f.adjoint()).scale(w)
        }))
}

/// `Σ λ_α f_α* A f_α`.
pub fn dual_cp(t: &CpMapSpec, a: &OperatorMatrix) -> Result<OperatorMatrix> {
    linalg::ensure_same_dim(&t.basis[0], a)?;
    Ok(t.terms()
        .fold(CMatrix::zeros(t.dim(), t.dim()), |acc, (w, f)| {
            acc + (f.adjoint() * a * f).scale(w)
        }))
}

/// `K^{-1/2}` for a Hermitian positive semidefinite `K` of full numerical rank.
///
/// An eigenvalue counts as zero when it is below `rel_cutoff` times the largest
/// eigenvalue; in that case `NotNormalizable` is returned with the smallest
/// eigenvalue.
pub fn psd_inv_sqrt(k: &OperatorMatrix, rel_cutoff: f64) -> Result<OperatorMatrix> {
    psd_power(k, rel_cutoff, -0.5)
}

/// `K^{1/2}` under the same checks as [`psd_inv_sqrt`] except the rank test.
pub fn psd_sqrt(k: &OperatorMatrix) -> Result<OperatorMatrix> {
    let (values, vectors) = checked_spectrum(k)?;
    let d = linalg::diag(&values.iter().map(|v| v.sqrt()).collect::<Vec<_>>());
    Ok(&vectors * d * vectors.adjoint())
}

fn checked_spectrum(k: &OperatorMatrix) -> Result<(Vec<f64>, CMatrix)> {
    linalg::ensure_square(k)?;
    let defect = hermiticity_defect(k);
    if defect > STRUCTURAL_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let (mut values, vectors) = hermitian_eigen(k);
    if let Some(&lowest) = values.first() {
        if lowest < -NEGATIVE_FLOOR {
            return Err(Error::Indefinite { eigenvalue: lowest });
        }
    }
    for v in &mut values {
        *v = v.max(0.0);
    }
    Ok((values, vectors))
}

fn psd_power(k: &OperatorMatrix, rel_cutoff: f64, power: f64) -> Result<OperatorMatrix> {
    let (values, vectors) = checked_spectrum(k)?;
    let n = values.len();
    let max = values.last().copied().unwrap_or(0.0);
    let cutoff = rel_cutoff * max;
    let rank = values.iter().filter(|&&v| v > 0.0 && v >= cutoff).count();
    if rank < n {
        return Err(Error::NotNormalizable {
            eigenvalue: values[0],
            cutoff,
            rank,
            dim: n,
        });
    }
    let d = linalg::diag(&values.iter().map(|v| v.powf(power)).collect::<Vec<_>>());
    Ok(&vectors * d * vectors.adjoint())
}
