//! Entangled resource states on `Cⁿ⊗Cⁿ`, the projector families built from
//! operator bases, and pure-state entanglement diagnostics.

use crate::channels::{apply_cp, CpMapSpec, Resource};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operator_space::{
    self, vec_left, vec_right, OperatorBasis, OperatorMatrix, SuperOperator,
};
use crate::STRUCTURAL_TOL;

/// A density matrix on `Cⁿ⊗Cⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim: usize,
    matrix: CMatrix,
}

impl BipartiteState {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        let d = linalg::ensure_square(&matrix)?;
        if d != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: d,
            });
        }
        validate_density(&matrix)?;
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut v = linalg::hermitian_eigenvalues(&self.matrix);
        v.reverse();
        v
    }

    /// Reduced state on the second factor.
    pub fn trace_out_first(&self) -> CMatrix {
        linalg::partial_trace_first(&self.matrix, self.dim, self.dim)
    }

    /// Reduced state on the first factor.
    pub fn trace_out_second(&self) -> CMatrix {
        linalg::partial_trace_second(&self.matrix, self.dim, self.dim)
    }
}

/// Checks Hermiticity, positivity and unit trace at the structural tolerance.
pub fn validate_density(m: &CMatrix) -> Result<()> {
    let defect = linalg::hermiticity_defect(m);
    if defect > STRUCTURAL_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let lowest = linalg::hermitian_eigenvalues(m)[0];
    if lowest < -STRUCTURAL_TOL {
        return Err(Error::Indefinite { eigenvalue: lowest });
    }
    Ok(())
}

/// Mutually orthogonal projectors summing to the identity on `Cⁿ⊗Cⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorFamily {
    dim: usize,
    projectors: Vec<SuperOperator>,
}

/// Worst-case violations of the projector-family axioms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorDefects {
    pub idempotence: f64,
    pub hermiticity: f64,
    pub orthogonality: f64,
    pub completeness: f64,
}

impl ProjectorDefects {
    pub fn max(&self) -> f64 {
        self.idempotence
            .max(self.hermiticity)
            .max(self.orthogonality)
            .max(self.completeness)
    }
}

impl ProjectorFamily {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[SuperOperator] {
        &self.projectors
    }

    pub fn defects(&self) -> ProjectorDefects {
        let d = self.dim * self.dim;
        let mut out = ProjectorDefects {
            idempotence: 0.0,
            hermiticity: 0.0,
            orthogonality: 0.0,
            completeness: 0.0,
        };
        let mut sum = CMatrix::zeros(d, d);
        for (a, p) in self.projectors.iter().enumerate() {
            out.idempotence = out.idempotence.max(linalg::max_abs_diff(&(p * p), p));
            out.hermiticity = out.hermiticity.max(linalg::hermiticity_defect(p));
            for q in &self.projectors[a + 1..] {
                out.orthogonality = out.orthogonality.max(linalg::max_abs(&(p * q)));
            }
            sum += p;
        }
        out.completeness = linalg::max_abs_diff(&sum, &linalg::identity(d));
        out
    }
}

fn ensure_normalized(f: &OperatorMatrix) -> Result<()> {
    let trace = f.norm_squared();
    if (trace - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::NotNormalized { trace });
    }
    Ok(())
}

/// `Q = Σ_ij e_ij ⊗ f e_ij f*`.
pub fn projector_q(f: &OperatorMatrix) -> Result<SuperOperator> {
    linalg::ensure_square(f)?;
    ensure_normalized(f)?;
    let images = operator_space::map_images(f.nrows(), |a| f * a * f.adjoint());
    operator_space::superop_right(&images)
}

/// `P = Σ_ij f e_ij f* ⊗ e_ij`.
pub fn projector_p(f: &OperatorMatrix) -> Result<SuperOperator> {
    linalg::ensure_square(f)?;
    ensure_normalized(f)?;
    let images = operator_space::map_images(f.nrows(), |a| f * a * f.adjoint());
    operator_space::superop_left(&images)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `P_α`, the `f_α` action on the first factor.
    Left,
    /// `Q_α`, the `f_α` action on the second factor.
    Right,
}

/// The `n²` projectors `P_α` (left) or `Q_α` (right) of an orthonormal basis.
pub fn projector_family(b: &OperatorBasis, side: Side) -> Result<ProjectorFamily> {
    let defect = operator_space::gram_defect(b);
    if defect > STRUCTURAL_TOL {
        return Err(Error::NotOrthonormal { defect });
    }
    let build = match side {
        Side::Left => projector_p,
        Side::Right => projector_q,
    };
    let projectors = b.iter().map(build).collect::<Result<Vec<_>>>()?;
    Ok(ProjectorFamily {
        dim: b.dim(),
        projectors,
    })
}

/// `σ = Σ_ij e_ij ⊗ Θ(e_ij)`.
pub fn sigma_from_cp(t: &CpMapSpec) -> Result<BipartiteState> {
    let n = t.dim();
    let images = operator_space::map_images(n, |a| apply_cp(t, a).expect("dimensions match"));
    BipartiteState::new(n, operator_space::superop_right(&images)?)
}

/// Resource state of either a mixed or a pure resource map.
pub fn resource_state(r: &Resource) -> Result<BipartiteState> {
    match r {
        Resource::Mixed(t) => sigma_from_cp(t),
        Resource::Pure(p) => BipartiteState::new(p.dim(), projector_q(p.operator())?),
    }
}

/// `|vec_right(f)⟩⟨vec_right(f)|`.
pub fn right_outer(f: &OperatorMatrix) -> SuperOperator {
    let v = vec_right(f);
    &v * v.adjoint()
}

/// `|vec_left(f)⟩⟨vec_left(f)|`.
pub fn left_outer(f: &OperatorMatrix) -> SuperOperator {
    let v = vec_left(f);
    &v * v.adjoint()
}

/// Singular values of `f`, descending: the Schmidt coefficients of `f^R`.
pub fn schmidt_values(f: &OperatorMatrix) -> Vec<f64> {
    linalg::singular_values(f)
}

/// `−Σ s² log₂ s²` over the Schmidt coefficients, in bits.
pub fn entanglement_entropy(f: &OperatorMatrix) -> f64 {
    let h: f64 = schmidt_values(f)
        .into_iter()
        .map(|s| s * s)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// `max(‖f*f − I/n‖, ‖ff* − I/n‖)` in the max-entry norm.
pub fn maximality_defect(f: &OperatorMatrix) -> f64 {
    let n = f.nrows();
    let target = linalg::identity(n).unscale(n as f64);
    let a = linalg::max_abs_diff(&(f.adjoint() * f), &target);
    let b = linalg::max_abs_diff(&(f * f.adjoint()), &target);
    a.max(b)
}

/// `f*f = ff* = I/n` within `tol`.
pub fn is_maximally_entangled(f: &OperatorMatrix, tol: f64) -> bool {
    maximality_defect(f) <= tol
}
