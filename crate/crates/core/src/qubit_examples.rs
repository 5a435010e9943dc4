//! Qubit (`n = 2`) bases: normalized spin matrices, bases induced by real
//! orthogonal 4×4 matrices, and the two-angle diagonal/anti-diagonal family.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::linalg::{c, from_rows, CMatrix};
use crate::operator_space::{self, OperatorBasis};
use crate::STRUCTURAL_TOL;

/// The spin (Pauli) matrices `S_0 = I, S_1 = X, S_2 = Y, S_3 = Z`.
pub fn spin_matrices() -> [CMatrix; 4] {
    [
        from_rows(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (1.0, 0.0)]]),
        from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]),
        from_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]]),
        from_rows(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]]),
    ]
}

/// `ω_α = S_α / √2`, an orthonormal basis of Hermitian matrices.
pub fn spin_basis() -> OperatorBasis {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    OperatorBasis::new(spin_matrices().into_iter().map(|m| m.scale(s)).collect())
        .expect("spin basis has four 2x2 elements")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl RotationAngles {
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self {
            theta1,
            theta2,
            theta3,
        }
    }
}

/// A real orthogonal 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalMatrix4(Matrix4<f64>);

impl OrthogonalMatrix4 {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let defect = orthogonality_defect(&m);
        if defect > 1e-12 {
            return Err(Error::NotOrthogonal { defect });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }
}

pub fn orthogonality_defect(m: &Matrix4<f64>) -> f64 {
    (m.transpose() * m - Matrix4::identity()).amax()
}

/// Plane rotation by `theta` in coordinates `(a, b)` of `R⁴`.
pub fn plane_rotation(a: usize, b: usize, theta: f64) -> Matrix4<f64> {
    let (s, co) = theta.sin_cos();
    let mut r = Matrix4::identity();
    r[(a, a)] = co;
    r[(a, b)] = -s;
    r[(b, a)] = s;
    r[(b, b)] = co;
    r
}

/// `C = R_01(θ₁) R_02(θ₂) R_03(θ₃)`, written out entrywise.
pub fn rotation_c(angles: RotationAngles) -> OrthogonalMatrix4 {
    let (s1, c1) = angles.theta1.sin_cos();
    let (s2, c2) = angles.theta2.sin_cos();
    let (s3, c3) = angles.theta3.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        c1 * c2 * c3, -s1, -c1 * s2, -c1 * c2 * s3,
        s1 * c2 * c3,  c1, -s1 * s2, -s1 * c2 * s3,
        s2 * c3,      0.0,  c2,      -s2 * s3,
        s3,           0.0,  0.0,      c3,
    );
    OrthogonalMatrix4(m)
}

/// `f_α = Σ_β C_{αβ} ω_β`.
pub fn basis_from_orthogonal(
    c_mat: &OrthogonalMatrix4,
    omega: &OperatorBasis,
) -> Result<OperatorBasis> {
    if omega.len() != 4 {
        return Err(Error::MalformedBasis(format!(
            "expected a 4-element basis of M_2, got {}",
            omega.len()
        )));
    }
    let defect = orthogonality_defect(&c_mat.0);
    if defect > 1e-12 {
        return Err(Error::NotOrthogonal { defect });
    }
    let defect = operator_space::gram_defect(omega);
    if defect > STRUCTURAL_TOL {
        return Err(Error::NotOrthonormal { defect });
    }
    let elements = (0..4)
        .map(|alpha| {
            (0..4).fold(CMatrix::zeros(2, 2), |acc, beta| {
                acc + omega[beta].scale(c_mat.get(alpha, beta))
            })
        })
        .collect();
    OperatorBasis::new(elements)
}

/// Per-element determinant check for the spin-induced basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantCheck {
    /// `det f_α` computed from the matrix.
    pub direct: f64,
    /// `½(C_{α0}² − Σ_{β≥1} C_{αβ}²)`.
    pub formula: f64,
    /// `|det f_α| > 1e-10`.
    pub full_rank: bool,
}

pub const RANK_DET_TOL: f64 = 1e-10;

/// Compares `det f_α` with the closed form in terms of the row of `C`.
pub fn det_formula_check(c_mat: &OrthogonalMatrix4) -> Result<Vec<DeterminantCheck>> {
    let basis = basis_from_orthogonal(c_mat, &spin_basis())?;
    Ok(basis
        .iter()
        .enumerate()
        .map(|(alpha, f)| {
            let det = f[(0, 0)] * f[(1, 1)] - f[(0, 1)] * f[(1, 0)];
            let row: Vec<f64> = (0..4).map(|b| c_mat.get(alpha, b)).collect();
            let formula = 0.5 * (row[0].powi(2) - row[1..].iter().map(|x| x * x).sum::<f64>());
            DeterminantCheck {
                direct: det.re,
                formula,
                full_rank: det.norm() > RANK_DET_TOL,
            }
        })
        .collect())
}

/// The diagonal / anti-diagonal basis
/// `f_0 = diag(cos θ₁, sin θ₁)`, `f_1 = diag(−sin θ₁, cos θ₁)`,
/// `f_2 = [[0, cos θ₂], [sin θ₂, 0]]`, `f_3 = [[0, −sin θ₂], [cos θ₂, 0]]`.
pub fn simple_theta_basis(theta1: f64, theta2: f64) -> OperatorBasis {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    let m = |a, b, cc, d| CMatrix::from_row_slice(2, 2, &[a, b, cc, d]);
    OperatorBasis::new(vec![
        m(r(c1), z, z, r(s1)),
        m(r(-s1), z, z, r(c1)),
        m(z, r(c2), r(s2), z),
        m(z, r(-s2), r(c2), z),
    ])
    .expect("four 2x2 elements")
}

/// `diag(cos θ, sin θ)`, the pure resource operator used throughout the
/// qubit examples.
pub fn theta_resource(theta: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    crate::linalg::diag(&[co, s])
}
