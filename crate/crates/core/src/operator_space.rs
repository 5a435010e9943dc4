//! The Hilbert–Schmidt space `M_n` of `n×n` complex matrices.
//!
//! `M_n` carries the inner product `(A, B) = tr(A* B)` and is identified with
//! `Cⁿ⊗Cⁿ` by two isometries, `vec_left(A) = Σ_i A e_i ⊗ e_i` and
//! `vec_right(A) = Σ_i e_i ⊗ A e_i`. Linear maps on `M_n` are identified with
//! operators on `Cⁿ⊗Cⁿ` in the same two ways (see [`superop_left`] and
//! [`superop_right`]).
//!
//! Maps are passed around by their images on the matrix units, in the
//! row-major order produced by [`matrix_units`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, exact_sqrt, hermitian_eigen, hermiticity_defect, CMatrix, CVector};
use crate::random;
use crate::STRUCTURAL_TOL;

/// An `n×n` complex matrix: states, basis elements, keys.
pub type OperatorMatrix = CMatrix;
/// A vector in `Cⁿ⊗Cⁿ` coordinates (length `n²`).
pub type HsVector = CVector;
/// An `n²×n²` matrix acting on [`HsVector`]s.
pub type SuperOperator = CMatrix;
/// Coefficients `c_{αβ}` of a map in a double-index basis.
pub type CoefficientMatrix = CMatrix;

/// An ordered family of `n²` matrices of size `n×n`.
///
/// Construction only checks the shape; orthonormality is tested separately
/// with [`is_orthonormal_basis`] or enforced by [`OperatorBasis::orthonormal`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<OperatorMatrix>,
}

impl OperatorBasis {
    pub fn new(elements: Vec<OperatorMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::MalformedBasis("empty element list".into()))?;
        let dim = linalg::ensure_square(first)?;
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if elements.len() != dim * dim {
            return Err(Error::MalformedBasis(format!(
                "expected {} elements for dimension {dim}, got {}",
                dim * dim,
                elements.len()
            )));
        }
        for (k, e) in elements.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::MalformedBasis(format!(
                    "element {k} has shape {}x{}, expected {dim}x{dim}",
                    e.nrows(),
                    e.ncols()
                )));
            }
        }
        Ok(Self { dim, elements })
    }

    /// Like [`OperatorBasis::new`], additionally requiring orthonormality.
    pub fn orthonormal(elements: Vec<OperatorMatrix>, tol: f64) -> Result<Self> {
        let b = Self::new(elements)?;
        let defect = gram_defect(&b);
        if defect > tol {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[OperatorMatrix] {
        &self.elements
    }

    pub fn get(&self, index: usize) -> Option<&OperatorMatrix> {
        self.elements.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OperatorMatrix> {
        self.elements.iter()
    }

    pub fn into_elements(self) -> Vec<OperatorMatrix> {
        self.elements
    }

    /// Gram matrix `G_{αβ} = tr(f_α* f_β)`.
    pub fn gram(&self) -> CMatrix {
        let k = self.len();
        CMatrix::from_fn(k, k, |a, b| {
            hs_inner_unchecked(&self.elements[a], &self.elements[b])
        })
    }
}

impl std::ops::Index<usize> for OperatorBasis {
    type Output = OperatorMatrix;
    fn index(&self, index: usize) -> &OperatorMatrix {
        &self.elements[index]
    }
}

/// The matrix units `e_ij = |e_i⟩⟨e_j|`, row-major by `(i, j)`.
pub fn matrix_units(n: usize) -> Result<OperatorBasis> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(OperatorBasis {
        dim: n,
        elements: (0..n * n).map(|k| matrix_unit(n, k / n, k % n)).collect(),
    })
}

/// Single matrix unit `e_ij` (0-based indices).
pub fn matrix_unit(n: usize, i: usize, j: usize) -> OperatorMatrix {
    let mut e = CMatrix::zeros(n, n);
    e[(i, j)] = Complex64::new(1.0, 0.0);
    e
}

fn hs_inner_unchecked(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Hilbert–Schmidt inner product `tr(A* B)`.
pub fn hs_inner(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<Complex64> {
    linalg::ensure_same_dim(a, b)?;
    Ok(hs_inner_unchecked(a, b))
}

/// `Σ_i A e_i ⊗ e_i`; coordinate `(k, i)` holds `A_{ki}`.
pub fn vec_left(a: &OperatorMatrix) -> HsVector {
    let (n, m) = a.shape();
    CVector::from_fn(n * m, |idx, _| a[(idx / m, idx % m)])
}

/// `Σ_i e_i ⊗ A e_i`; coordinate `(i, k)` holds `A_{ki}`.
pub fn vec_right(a: &OperatorMatrix) -> HsVector {
    let (n, m) = a.shape();
    CVector::from_fn(n * m, |idx, _| a[(idx % n, idx / n)])
}

/// Inverse of [`vec_left`].
pub fn devec_left(v: &HsVector) -> Result<OperatorMatrix> {
    let n = exact_sqrt(v.len()).ok_or(Error::NotSquareLength(v.len()))?;
    Ok(CMatrix::from_fn(n, n, |k, i| v[k * n + i]))
}

/// Inverse of [`vec_right`].
pub fn devec_right(v: &HsVector) -> Result<OperatorMatrix> {
    let n = exact_sqrt(v.len()).ok_or(Error::NotSquareLength(v.len()))?;
    Ok(CMatrix::from_fn(n, n, |k, i| v[i * n + k]))
}

/// Largest deviation of the Gram matrix from the identity.
pub fn gram_defect(b: &OperatorBasis) -> f64 {
    linalg::max_abs_diff(&b.gram(), &linalg::identity(b.len()))
}

/// True iff `max |tr(f_α* f_β) − δ_{αβ}| ≤ tol`.
pub fn is_orthonormal_basis(b: &OperatorBasis, tol: f64) -> bool {
    gram_defect(b) <= tol
}

const ONB_ATTEMPTS: usize = 8;

/// Seeded random orthonormal basis of `M_n`.
///
/// Draws `n²` complex-Gaussian matrices and orthonormalizes them with
/// (twice-iterated) Gram–Schmidt under the Hilbert–Schmidt product.
pub fn random_onb(n: usize, seed: u64) -> Result<OperatorBasis> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut rng = random::rng(seed);
    for _ in 0..ONB_ATTEMPTS {
        let draws: Vec<CMatrix> = (0..n * n)
            .map(|_| random::gaussian_matrix(&mut rng, n, n))
            .collect();
        if let Some(elements) = gram_schmidt(draws) {
            let b = OperatorBasis { dim: n, elements };
            if is_orthonormal_basis(&b, 1e-12) {
                return Ok(b);
            }
        }
    }
    Err(Error::DegenerateDraw(ONB_ATTEMPTS))
}

/// Orthonormalizes `vectors` in order; `None` if the set is numerically
/// dependent.
pub(crate) fn gram_schmidt(vectors: Vec<CMatrix>) -> Option<Vec<CMatrix>> {
    let mut out: Vec<CMatrix> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let scale = v.norm();
        let mut w = v;
        for _ in 0..2 {
            for q in &out {
                let proj = hs_inner_unchecked(q, &w);
                w -= q * proj;
            }
        }
        let norm = w.norm();
        if norm <= 1e-8 * scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        out.push(w.unscale(norm));
    }
    Some(out)
}

/// `f_a · A · f_b*`.
pub fn sandwich(
    f_a: &OperatorMatrix,
    f_b: &OperatorMatrix,
    a: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    linalg::ensure_same_dim(f_a, a)?;
    linalg::ensure_same_dim(f_b, a)?;
    Ok(f_a * a * f_b.adjoint())
}

/// Images `Φ(e_ij)` of a map on the matrix units of `M_n`.
pub fn map_images<F>(n: usize, phi: F) -> Vec<OperatorMatrix>
where
    F: Fn(&OperatorMatrix) -> OperatorMatrix,
{
    (0..n * n)
        .map(|k| phi(&matrix_unit(n, k / n, k % n)))
        .collect()
}

fn images_dim(images: &[OperatorMatrix]) -> Result<usize> {
    let n = exact_sqrt(images.len())
        .filter(|&n| n > 0)
        .ok_or(Error::NotSquareLength(images.len()))?;
    for img in images {
        if img.nrows() != n || img.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: img.nrows().max(img.ncols()),
            });
        }
    }
    Ok(n)
}

/// `Σ_ij Φ(e_ij) ⊗ e_ij`.
pub fn superop_left(images: &[OperatorMatrix]) -> Result<SuperOperator> {
    let n = images_dim(images)?;
    let mut out = CMatrix::zeros(n * n, n * n);
    for (k, img) in images.iter().enumerate() {
        let e = matrix_unit(n, k / n, k % n);
        out += img.kronecker(&e);
    }
    Ok(out)
}

/// `Σ_ij e_ij ⊗ Φ(e_ij)`.
pub fn superop_right(images: &[OperatorMatrix]) -> Result<SuperOperator> {
    let n = images_dim(images)?;
    let mut out = CMatrix::zeros(n * n, n * n);
    for (k, img) in images.iter().enumerate() {
        let e = matrix_unit(n, k / n, k % n);
        out += e.kronecker(img);
    }
    Ok(out)
}

/// `((Φ, Ψ)) = Σ_ij (Φ e_ij, Ψ e_ij)`.
pub fn map_inner(phi: &[OperatorMatrix], psi: &[OperatorMatrix]) -> Result<Complex64> {
    let n = images_dim(phi)?;
    let m = images_dim(psi)?;
    if n != m {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: m,
        });
    }
    Ok(phi
        .iter()
        .zip(psi)
        .map(|(a, b)| hs_inner_unchecked(a, b))
        .sum())
}

fn ensure_onb(b: &OperatorBasis) -> Result<()> {
    let defect = gram_defect(b);
    if defect > STRUCTURAL_TOL {
        return Err(Error::NotOrthonormal { defect });
    }
    Ok(())
}

/// Coefficients of `Φ` in the basis `Φ_{αβ}(A) = f_α A f_β*`.
pub fn decompose_map(images: &[OperatorMatrix], b: &OperatorBasis) -> Result<CoefficientMatrix> {
    let n = images_dim(images)?;
    if n != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            actual: n,
        });
    }
    ensure_onb(b)?;
    let k = b.len();
    // ((Φ_{αβ}, Φ)) = Σ_ij tr((f_α e_ij f_β*)* Φ(e_ij)) = Σ_ij (f_α* Φ(e_ij) f_β)_{ij}
    Ok(CMatrix::from_fn(k, k, |alpha, beta| {
        let fa_adj = b[alpha].adjoint();
        let fb = &b[beta];
        images
            .iter()
            .enumerate()
            .map(|(idx, img)| {
                let m = &fa_adj * img * fb;
                m[(idx / n, idx % n)]
            })
            .sum()
    }))
}

/// Evaluates `Σ c_{αβ} f_α A f_β*`.
pub fn reconstruct_map(
    c: &CoefficientMatrix,
    b: &OperatorBasis,
    a: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    linalg::ensure_same_dim(&b[0], a)?;
    let k = b.len();
    if c.nrows() != k || c.ncols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: c.nrows(),
        });
    }
    let mut out = CMatrix::zeros(b.dim(), b.dim());
    for alpha in 0..k {
        let left = &b[alpha] * a;
        for beta in 0..k {
            let coef = c[(alpha, beta)];
            if coef != Complex64::new(0.0, 0.0) {
                out += (&left * b[beta].adjoint()) * coef;
            }
        }
    }
    Ok(out)
}

/// Diagonalizes a Hermitian coefficient matrix: `Φ(A) = Σ c_α g_α A g_α*`.
///
/// Returns the new basis `g_α = Σ_β V_{βα} f_β` and the real eigenvalues
/// `c_α` (ascending).
pub fn canonical_form(
    c: &CoefficientMatrix,
    b: &OperatorBasis,
) -> Result<(OperatorBasis, Vec<f64>)> {
    if c.nrows() != b.len() || c.ncols() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            actual: c.nrows(),
        });
    }
    let defect = hermiticity_defect(c);
    if defect > STRUCTURAL_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = hermitian_eigen(c);
    let n = b.dim();
    let elements = (0..b.len())
        .map(|alpha| {
            b.iter()
                .enumerate()
                .fold(CMatrix::zeros(n, n), |acc, (beta, f)| {
                    acc + f * vectors[(beta, alpha)]
                })
        })
        .collect();
    Ok((OperatorBasis { dim: n, elements }, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_rows, identity, max_abs_diff, real};
    use crate::qubit_examples::spin_basis;

    fn e(n: usize, i: usize, j: usize) -> CMatrix {
        matrix_unit(n, i, j)
    }

    #[test]
    fn matrix_units_small_cases() {
        let one = matrix_units(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0][(0, 0)], real(1.0));

        let two = matrix_units(2).unwrap();
        // e_12 (1-based) is index 1 in row-major order
        let e12 = &two[1];
        assert_eq!(e12[(0, 1)], real(1.0));
        assert_eq!(e12.iter().filter(|x| x.norm() > 0.0).count(), 1);
        assert!(is_orthonormal_basis(&two, 0.0));

        assert_eq!(matrix_units(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn hs_inner_examples() {
        let i2 = identity(2);
        assert_eq!(hs_inner(&i2, &i2).unwrap(), real(2.0));
        let w1 = &spin_basis()[1];
        assert!((hs_inner(w1, w1).unwrap() - real(1.0)).norm() < 1e-15);
        assert_eq!(hs_inner(&e(2, 0, 1), &e(2, 1, 0)).unwrap(), real(0.0));
        assert!(matches!(
            hs_inner(&identity(2), &identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hs_inner_is_conjugate_linear_in_first_argument() {
        let a = from_rows(&[&[(1.0, 2.0), (0.0, 0.0)], &[(0.0, 0.0), (0.0, 0.0)]]);
        let b = identity(2);
        let z = c(0.0, 1.0);
        let lhs = hs_inner(&(a.clone() * z), &b).unwrap();
        let rhs = z.conj() * hs_inner(&a, &b).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn vectorization_examples() {
        let l = vec_left(&e(2, 0, 1));
        assert_eq!(
            l.iter().copied().collect::<Vec<_>>(),
            [0.0, 1.0, 0.0, 0.0].map(real)
        );
        let r = vec_right(&e(2, 0, 1));
        assert_eq!(
            r.iter().copied().collect::<Vec<_>>(),
            [0.0, 0.0, 1.0, 0.0].map(real)
        );

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec_right(&identity(2).scale(s));
        let want = [s, 0.0, 0.0, s].map(real);
        for (x, y) in bell.iter().zip(want) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn devec_examples() {
        let v = CVector::from_vec([0.0, 1.0, 0.0, 0.0].map(real).to_vec());
        assert_eq!(devec_left(&v).unwrap(), e(2, 0, 1));
        assert_eq!(
            devec_left(&CVector::zeros(9)).unwrap(),
            CMatrix::zeros(3, 3)
        );
        assert_eq!(
            devec_left(&CVector::zeros(5)),
            Err(Error::NotSquareLength(5))
        );
        assert_eq!(devec_right(&vec_right(&e(3, 2, 0))).unwrap(), e(3, 2, 0));
    }

    #[test]
    fn devec_round_trip_random() {
        let mut rng = random::rng(11);
        let mut worst: f64 = 0.0;
        for k in 0..50 {
            let a = random::gaussian_matrix(&mut rng, 1 + k % 4, 1 + k % 4);
            worst = worst.max(max_abs_diff(&devec_left(&vec_left(&a)).unwrap(), &a));
            worst = worst.max(max_abs_diff(&devec_right(&vec_right(&a)).unwrap(), &a));
        }
        assert!(worst < 1e-14);
    }

    #[test]
    fn orthonormality_checks() {
        assert!(is_orthonormal_basis(&spin_basis(), 1e-15));
        let unnormalized: Vec<CMatrix> = spin_basis()
            .iter()
            .map(|w| w.scale(std::f64::consts::SQRT_2))
            .collect();
        let b = OperatorBasis::new(unnormalized).unwrap();
        assert!(!is_orthonormal_basis(&b, 1e-10));
        assert!((gram_defect(&b) - 1.0).abs() < 1e-12);

        let too_few = OperatorBasis::new(vec![identity(2); 3]);
        assert!(matches!(too_few, Err(Error::MalformedBasis(_))));
    }

    #[test]
    fn random_onb_is_deterministic_and_orthonormal() {
        let a = random_onb(2, 7).unwrap();
        let b = random_onb(2, 7).unwrap();
        assert_eq!(a, b);
        for n in 1..=4 {
            assert!(is_orthonormal_basis(&random_onb(n, 3).unwrap(), 1e-12));
        }
        let scalar = random_onb(1, 99).unwrap();
        assert!((scalar[0][(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert_eq!(random_onb(0, 1), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn gram_schmidt_rejects_dependent_sets() {
        let a = random::gaussian_matrix(&mut random::rng(1), 2, 2);
        assert!(gram_schmidt(vec![a.clone(), a.scale(2.0)]).is_none());
    }

    #[test]
    fn sandwich_examples() {
        let a = from_rows(&[&[(1.0, 0.5), (2.0, 0.0)], &[(0.0, -1.0), (3.0, 0.0)]]);
        assert_eq!(sandwich(&identity(2), &identity(2), &a).unwrap(), a);
        assert_eq!(
            sandwich(&e(2, 0, 1), &e(2, 0, 1), &e(2, 1, 1)).unwrap(),
            e(2, 0, 0)
        );
        let w1 = &spin_basis()[1];
        let got = sandwich(w1, w1, &e(2, 0, 0)).unwrap();
        assert!(max_abs_diff(&got, &e(2, 1, 1).scale(0.5)) < 1e-15);
    }

    #[test]
    fn superoperator_of_identity_map() {
        let id = map_images(2, |a| a.clone());
        let left = superop_left(&id).unwrap();
        assert!((left.trace() - real(2.0)).norm() < 1e-15);
        // Σ e_ij ⊗ e_ij = |Ω⟩⟨Ω| with Ω = Σ e_i ⊗ e_i
        let omega = vec_left(&identity(2));
        assert!(max_abs_diff(&left, &(&omega * omega.adjoint())) < 1e-15);
        assert_eq!(left, superop_right(&id).unwrap());
        assert!(matches!(
            superop_left(&id[..3]),
            Err(Error::NotSquareLength(3))
        ));
    }

    #[test]
    fn superop_right_of_bell_sandwich_is_rank_one() {
        let f = identity(2).scale(std::f64::consts::FRAC_1_SQRT_2);
        let q = superop_right(&map_images(2, |a| &f * a * f.adjoint())).unwrap();
        let v = vec_right(&f);
        assert!(max_abs_diff(&q, &(&v * v.adjoint())) < 1e-15);
    }

    #[test]
    fn map_inner_matches_superoperator_trace() {
        let mut rng = random::rng(5);
        let x = random::gaussian_matrix(&mut rng, 2, 2);
        let y = random::gaussian_matrix(&mut rng, 2, 2);
        let phi = map_images(2, |a| &x * a);
        let psi = map_images(2, |a| a * &y);
        let direct = map_inner(&phi, &psi).unwrap();
        for build in [superop_left, superop_right] {
            let l = build(&phi).unwrap();
            let r = build(&psi).unwrap();
            let via_trace = (l.adjoint() * r).trace();
            assert!((direct - via_trace).norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_basis_element_gives_unit_coefficient() {
        let b = random_onb(2, 4).unwrap();
        let phi = map_images(2, |a| &b[1] * a * b[2].adjoint());
        let coeffs = decompose_map(&phi, &b).unwrap();
        let mut want = CMatrix::zeros(4, 4);
        want[(1, 2)] = real(1.0);
        assert!(max_abs_diff(&coeffs, &want) < 1e-12);
    }

    #[test]
    fn decompose_identity_map_reconstructs() {
        let b = matrix_units(2).unwrap();
        let id = map_images(2, |a| a.clone());
        let coeffs = decompose_map(&id, &b).unwrap();
        for (k, unit) in b.iter().enumerate() {
            let back = reconstruct_map(&coeffs, &b, unit).unwrap();
            assert!(max_abs_diff(&back, &id[k]) < 1e-12);
        }
    }

    #[test]
    fn decompose_weighted_kraus_is_diagonal() {
        let b = random_onb(2, 8).unwrap();
        let lambda = [0.4, 0.3, 0.2, 0.1];
        let phi = map_images(2, |a| {
            b.iter()
                .zip(lambda)
                .fold(CMatrix::zeros(2, 2), |acc, (f, l)| {
                    acc + (f * a * f.adjoint()).scale(l)
                })
        });
        let coeffs = decompose_map(&phi, &b).unwrap();
        let want = linalg::diag(&lambda);
        assert!(max_abs_diff(&coeffs, &want) < 1e-12);
    }

    #[test]
    fn decompose_rejects_non_orthonormal() {
        let bad = OperatorBasis::new(vec![identity(2); 4]).unwrap();
        let id = map_images(2, |a| a.clone());
        assert!(matches!(
            decompose_map(&id, &bad),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn canonical_form_of_identity_and_diagonal() {
        let b = random_onb(2, 21).unwrap();
        let (g, vals) = canonical_form(&identity(4), &b).unwrap();
        assert!(vals.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert!(is_orthonormal_basis(&g, 1e-12));
        // identity coefficient matrix: eigenvectors are unit vectors, so g_α = f_α up to phase
        for (ga, fa) in g.iter().zip(b.iter()) {
            assert!((hs_inner(fa, ga).unwrap().norm() - 1.0).abs() < 1e-12);
        }

        let lambda = [0.1, 0.4, 0.2, 0.3];
        let (g, vals) = canonical_form(&linalg::diag(&lambda), &b).unwrap();
        let mut sorted = lambda;
        sorted.sort_by(f64::total_cmp);
        for (v, s) in vals.iter().zip(sorted) {
            assert!((v - s).abs() < 1e-12);
        }
        // each g matches the f with the same weight
        for (ga, v) in g.iter().zip(&vals) {
            let idx = lambda.iter().position(|l| (l - v).abs() < 1e-12).unwrap();
            assert!((hs_inner(&b[idx], ga).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_form_rejects_non_hermitian() {
        let b = matrix_units(2).unwrap();
        let mut m = identity(4);
        m[(0, 1)] = real(1.0);
        assert!(matches!(
            canonical_form(&m, &b),
            Err(Error::NotHermitian { .. })
        ));
    }
}
