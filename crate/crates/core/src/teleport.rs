//! The teleportation engine.
//!
//! Alice holds `ρ` on `H₁` and shares the resource `σ = Σ e_ij ⊗ Θ(e_ij)` on
//! `H₂⊗H₃` with Bob. She measures the projectors built from her basis
//! `{g_α}` on `H₁⊗H₂`; for outcome `α` Bob's unnormalized state is
//!
//! ```text
//! T_α(ρ) = Θ(g_α ρ g_α*)
//! ```
//!
//! with outcome probability `tr(κ_α ρ)`, `κ_α = g_α* Θ̃(I) g_α`. The
//! trace-preserving channel `Υ_α(ρ) = Θ(g_α κ_α^{-1/2} ρ κ_α^{-1/2} g_α*)`
//! exists whenever `κ_α` has full rank. For a pure resource `Θ(·) = f·f*` it
//! is a unitary conjugation by the key `W_α = f g_α κ_α^{-1/2}`, so Bob
//! recovers `ρ` exactly by applying `W_α*·W_α`.
//!
//! The operator ordering follows the closed form above: in the pure case
//! `T_α(ρ) = (f g_α) ρ (f g_α)*` and `κ_α = (f g_α)*(f g_α)`.
//!
//! [`teleport_raw_direct`] recomputes `T_α` on the full tripartite space as an
//! independent check of the closed form. Its measurement projector for outcome
//! `α` is `|(g_α*)^L⟩⟨(g_α*)^L|`; the literal `Σ g_α e_ij g_α* ⊗ e_ij` produces
//! `Θ(g_α* ρ g_α)` instead, which coincides only for Hermitian `g_α`.

use rand::Rng as _;

use crate::channels::{psd_inv_sqrt, psd_sqrt, Resource, DEFAULT_REL_CUTOFF};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operator_space::{self, OperatorBasis, OperatorMatrix};
use crate::par;
use crate::random;
use crate::resource::{left_outer, resource_state, validate_density};
use crate::{KEY_TOL, STRUCTURAL_TOL};

/// Largest dimension accepted by the tripartite oracle.
pub const ORACLE_MAX_DIM: usize = 8;
/// Outcomes with probability at or below this are treated as impossible.
pub const MIN_PROBABILITY: f64 = 1e-12;

/// A density matrix to be teleported.
#[derive(Debug, Clone, PartialEq)]
pub struct InputState {
    matrix: CMatrix,
}

impl InputState {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::ensure_square(&matrix)?;
        validate_density(&matrix)?;
        Ok(Self { matrix })
    }

    /// `GG*/tr(GG*)` with a seeded complex-Gaussian `G`.
    pub fn random(n: usize, seed: u64) -> Self {
        Self::from_rng(&mut random::rng(seed), n)
    }

    pub fn from_rng(rng: &mut random::Rng, n: usize) -> Self {
        Self {
            matrix: random::density_matrix(rng, n),
        }
    }

    /// `count` states drawn from one seeded stream.
    pub fn random_batch(n: usize, count: usize, seed: u64) -> Vec<Self> {
        let mut rng = random::rng(seed);
        (0..count).map(|_| Self::from_rng(&mut rng, n)).collect()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Alice's measurement basis together with the shared resource.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    dim: usize,
    alice_basis: OperatorBasis,
    resource: Resource,
}

impl Protocol {
    pub fn new(alice_basis: OperatorBasis, resource: Resource) -> Result<Self> {
        let dim = alice_basis.dim();
        if resource.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: resource.dim(),
            });
        }
        let defect = operator_space::gram_defect(&alice_basis);
        if defect > STRUCTURAL_TOL {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self {
            dim,
            alice_basis,
            resource,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcome_count(&self) -> usize {
        self.dim * self.dim
    }

    pub fn alice_basis(&self) -> &OperatorBasis {
        &self.alice_basis
    }

    pub fn resource(&self) -> &Resource {
        &self.resource
    }

    fn g(&self, alpha: usize) -> Result<&OperatorMatrix> {
        self.alice_basis.get(alpha).ok_or(Error::OutcomeOutOfRange {
            index: alpha,
            count: self.outcome_count(),
        })
    }

    fn check_input(&self, rho: &InputState) -> Result<()> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rho.dim(),
            });
        }
        Ok(())
    }
}

/// Why an outcome could not be completed.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeFailure {
    pub error: Error,
    /// Eigenvalues of `κ_α`, ascending.
    pub kappa_spectrum: Vec<f64>,
}

/// Everything computed for one measurement outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeResult {
    pub index: usize,
    pub probability: f64,
    /// `T_α(ρ)`, unnormalized.
    pub raw_state: CMatrix,
    /// `T_α(ρ) / p_α`, absent for zero-probability outcomes.
    pub post_measurement_state: Option<CMatrix>,
    /// `Υ_α(ρ)`.
    pub channel_state: Option<CMatrix>,
    pub key: Option<CMatrix>,
    /// `‖W_α* W_α − I‖_max`.
    pub key_defect: Option<f64>,
    /// `W_α* Υ_α(ρ) W_α`.
    pub recovered_state: Option<CMatrix>,
    /// Max-entry distance between the recovered state and `ρ`.
    pub recovery_error: Option<f64>,
    /// Max-entry distance between `Υ_α(ρ)` and the normalized post-measurement state.
    pub channel_vs_measurement_defect: Option<f64>,
    pub failure: Option<OutcomeFailure>,
}

impl OutcomeResult {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

/// `T_α(ρ) = Θ(g_α ρ g_α*)`.
pub fn teleport_raw(p: &Protocol, alpha: usize, rho: &InputState) -> Result<CMatrix> {
    let g = p.g(alpha)?;
    p.check_input(rho)?;
    p.resource.apply(&(g * rho.matrix() * g.adjoint()))
}

/// Alice's measurement projector for outcome `α` on `H₁⊗H₂`.
pub fn alice_projector(p: &Protocol, alpha: usize) -> Result<CMatrix> {
    Ok(left_outer(&p.g(alpha)?.adjoint()))
}

/// `tr₁₂[(P⊗1)(ρ⊗σ)(P⊗1)]` on `H₁⊗H₂⊗H₃`, each factor of dimension `n`.
pub fn tripartite_reduce(rho: &CMatrix, sigma: &CMatrix, projector: &CMatrix) -> Result<CMatrix> {
    let n = linalg::ensure_square(rho)?;
    if n > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge(n));
    }
    if sigma.nrows() != n * n || projector.nrows() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            actual: sigma.nrows().max(projector.nrows()),
        });
    }
    let joint = rho.kronecker(sigma);
    let lift = projector.kronecker(&linalg::identity(n));
    let measured = &lift * joint * &lift;
    Ok(linalg::partial_trace_first(&measured, n * n, n))
}

/// `T_α(ρ)` evaluated on the full tripartite space.
pub fn teleport_raw_direct(p: &Protocol, alpha: usize, rho: &InputState) -> Result<CMatrix> {
    if p.dim > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge(p.dim));
    }
    p.check_input(rho)?;
    let projector = alice_projector(p, alpha)?;
    let sigma = resource_state(&p.resource)?;
    tripartite_reduce(rho.matrix(), sigma.matrix(), &projector)
}

/// `κ_α = g_α* Θ̃(I) g_α`.
pub fn kappa(p: &Protocol, alpha: usize) -> Result<CMatrix> {
    let g = p.g(alpha)?;
    let dual_identity = p.resource.dual(&linalg::identity(p.dim))?;
    Ok(g.adjoint() * dual_identity * g)
}

/// `Υ_α(ρ) = Θ(g_α κ_α^{-1/2} ρ κ_α^{-1/2} g_α*)`.
pub fn channel_ups(p: &Protocol, alpha: usize, rho: &InputState) -> Result<CMatrix> {
    p.check_input(rho)?;
    let g = p.g(alpha)?;
    let k = psd_inv_sqrt(&kappa(p, alpha)?, DEFAULT_REL_CUTOFF)?;
    let a = g * &k;
    p.resource.apply(&(&a * rho.matrix() * a.adjoint()))
}

/// `W_α = f g_α κ_α^{-1/2}`, the unitary polar factor of `f g_α`.
pub fn key_unitary(p: &Protocol, alpha: usize) -> Result<CMatrix> {
    let pure = p.resource.as_pure().ok_or(Error::NotPure)?;
    let g = p.g(alpha)?;
    let k = psd_inv_sqrt(&kappa(p, alpha)?, DEFAULT_REL_CUTOFF)?;
    Ok(pure.operator() * g * k)
}

/// `W* · state · W`.
pub fn recover(state: &CMatrix, w: &CMatrix) -> Result<CMatrix> {
    linalg::ensure_same_dim(state, w)?;
    let defect = linalg::unitarity_defect(w);
    if defect > KEY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(w.adjoint() * state * w)
}

/// `tr T_α(ρ) = tr(κ_α ρ)`.
pub fn outcome_probability(p: &Protocol, alpha: usize, rho: &InputState) -> Result<f64> {
    p.check_input(rho)?;
    Ok((kappa(p, alpha)? * rho.matrix()).trace().re)
}

/// Bob's conditional state after outcome `α`, `T_α(ρ) / p_α`.
pub fn post_measurement_state(p: &Protocol, alpha: usize, rho: &InputState) -> Result<CMatrix> {
    let raw = teleport_raw(p, alpha, rho)?;
    let probability = raw.trace().re;
    if probability <= MIN_PROBABILITY {
        return Err(Error::ZeroProbability {
            index: alpha,
            probability,
        });
    }
    Ok(raw.unscale(probability))
}

/// `κ_α^{1/2} ρ κ_α^{1/2} / tr(κ_α ρ)`: what the key recovers from the
/// post-measurement state of a pure resource.
pub fn measurement_recovery_prediction(
    p: &Protocol,
    alpha: usize,
    rho: &InputState,
) -> Result<CMatrix> {
    let k = kappa(p, alpha)?;
    let root = psd_sqrt(&k)?;
    let m = &root * rho.matrix() * &root;
    let tr = m.trace().re;
    if tr <= MIN_PROBABILITY {
        return Err(Error::ZeroProbability {
            index: alpha,
            probability: tr,
        });
    }
    Ok(m.unscale(tr))
}

fn kappa_spectrum(p: &Protocol, alpha: usize) -> Vec<f64> {
    kappa(p, alpha)
        .map(|k| linalg::hermitian_eigenvalues(&k))
        .unwrap_or_default()
}

/// All quantities for outcome `α`. Normalization failures are recorded in
/// the result rather than returned.
pub fn evaluate_outcome(p: &Protocol, alpha: usize, rho: &InputState) -> Result<OutcomeResult> {
    let raw_state = teleport_raw(p, alpha, rho)?;
    let probability = outcome_probability(p, alpha, rho)?;
    let post = if probability > MIN_PROBABILITY {
        Some(raw_state.unscale(raw_state.trace().re))
    } else {
        None
    };
    let mut out = OutcomeResult {
        index: alpha,
        probability,
        raw_state,
        post_measurement_state: post,
        channel_state: None,
        key: None,
        key_defect: None,
        recovered_state: None,
        recovery_error: None,
        channel_vs_measurement_defect: None,
        failure: None,
    };

    let fail = |out: &mut OutcomeResult, error: Error| {
        out.failure = Some(OutcomeFailure {
            error,
            kappa_spectrum: kappa_spectrum(p, alpha),
        });
    };

    let channel = match channel_ups(p, alpha, rho) {
        Ok(c) => c,
        Err(e) => {
            fail(&mut out, e);
            return Ok(out);
        }
    };
    out.channel_vs_measurement_defect = out
        .post_measurement_state
        .as_ref()
        .map(|post| linalg::max_abs_diff(post, &channel));
    out.channel_state = Some(channel.clone());

    if p.resource.as_pure().is_none() {
        return Ok(out);
    }
    let key = match key_unitary(p, alpha) {
        Ok(k) => k,
        Err(e) => {
            fail(&mut out, e);
            return Ok(out);
        }
    };
    out.key_defect = Some(linalg::unitarity_defect(&key));
    match recover(&channel, &key) {
        Ok(rec) => {
            out.recovery_error = Some(linalg::max_abs_diff(&rec, rho.matrix()));
            out.recovered_state = Some(rec);
        }
        Err(e) => fail(&mut out, e),
    }
    out.key = Some(key);
    Ok(out)
}

/// Evaluates every outcome, in parallel when the `parallel` feature is on.
/// Results are ordered by outcome index.
pub fn run_protocol(p: &Protocol, rho: &InputState) -> Result<Vec<OutcomeResult>> {
    par::map_indices(p.outcome_count(), |alpha| evaluate_outcome(p, alpha, rho))
        .into_iter()
        .collect()
}

pub fn run_protocol_sequential(p: &Protocol, rho: &InputState) -> Result<Vec<OutcomeResult>> {
    par::map_indices_sequential(p.outcome_count(), |alpha| evaluate_outcome(p, alpha, rho))
        .into_iter()
        .collect()
}

#[cfg(feature = "parallel")]
pub fn run_protocol_parallel(p: &Protocol, rho: &InputState) -> Result<Vec<OutcomeResult>> {
    par::map_indices_parallel(p.outcome_count(), |alpha| evaluate_outcome(p, alpha, rho))
        .into_iter()
        .collect()
}

/// Draws one outcome according to the outcome probabilities.
pub fn sample_outcome(p: &Protocol, rho: &InputState, rng: &mut random::Rng) -> Result<usize> {
    let probs = (0..p.outcome_count())
        .map(|a| outcome_probability(p, a, rho))
        .collect::<Result<Vec<_>>>()?;
    let u: f64 = rng.random_range(0.0..1.0);
    let mut acc = 0.0;
    for (a, q) in probs.iter().enumerate() {
        acc += q.max(0.0);
        if u < acc {
            return Ok(a);
        }
    }
    Ok(probs.len() - 1)
}

/// Aggregate of many protocol runs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepSummary {
    pub runs: usize,
    pub failed_outcomes: usize,
    pub max_recovery_error: f64,
    pub max_probability_defect: f64,
    pub max_key_defect: f64,
}

impl SweepSummary {
    fn absorb(mut self, other: Self) -> Self {
        self.runs += other.runs;
        self.failed_outcomes += other.failed_outcomes;
        self.max_recovery_error = self.max_recovery_error.max(other.max_recovery_error);
        self.max_probability_defect = self
            .max_probability_defect
            .max(other.max_probability_defect);
        self.max_key_defect = self.max_key_defect.max(other.max_key_defect);
        self
    }

    fn of_run(outcomes: &[OutcomeResult]) -> Self {
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        outcomes.iter().fold(
            Self {
                runs: 1,
                max_probability_defect: (total - 1.0).abs(),
                ..Self::default()
            },
            |mut s, o| {
                if o.failed() {
                    s.failed_outcomes += 1;
                }
                s.max_recovery_error = s.max_recovery_error.max(o.recovery_error.unwrap_or(0.0));
                s.max_key_defect = s.max_key_defect.max(o.key_defect.unwrap_or(0.0));
                s
            },
        )
    }
}

fn sweep_with<M>(p: &Protocol, inputs: &[InputState], map: M) -> Result<SweepSummary>
where
    M: FnOnce(usize, &(dyn Fn(usize) -> Result<SweepSummary> + Sync)) -> Vec<Result<SweepSummary>>,
{
    let one = |i: usize| -> Result<SweepSummary> {
        let outcomes = run_protocol_sequential(p, &inputs[i])?;
        Ok(SweepSummary::of_run(&outcomes))
    };
    map(inputs.len(), &one)
        .into_iter()
        .try_fold(SweepSummary::default(), |acc, s| Ok(acc.absorb(s?)))
}

/// Runs the protocol on every input and aggregates the worst-case defects.
pub fn sweep(p: &Protocol, inputs: &[InputState]) -> Result<SweepSummary> {
    #[cfg(feature = "parallel")]
    {
        sweep_parallel(p, inputs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_sequential(p, inputs)
    }
}

pub fn sweep_sequential(p: &Protocol, inputs: &[InputState]) -> Result<SweepSummary> {
    sweep_with(p, inputs, |n, f| par::map_indices_sequential(n, f))
}

#[cfg(feature = "parallel")]
pub fn sweep_parallel(p: &Protocol, inputs: &[InputState]) -> Result<SweepSummary> {
    sweep_with(p, inputs, |n, f| par::map_indices_parallel(n, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{CpMapSpec, PureResource};
    use crate::linalg::{diag, identity, max_abs_diff};
    use crate::operator_space::{matrix_unit, random_onb};
    use crate::qubit_examples::{spin_basis, spin_matrices, theta_resource};
    use crate::resource::{left_outer, projector_p};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3};

    fn pure_protocol(f: CMatrix) -> Protocol {
        Protocol::new(spin_basis(), PureResource::new(f).unwrap().into()).unwrap()
    }

    fn standard() -> Protocol {
        pure_protocol(identity(2).scale(FRAC_1_SQRT_2))
    }

    fn state(m: CMatrix) -> InputState {
        InputState::new(m).unwrap()
    }

    #[test]
    fn raw_map_examples() {
        let rho = InputState::random(2, 1);
        let t0 = teleport_raw(&standard(), 0, &rho).unwrap();
        assert!(max_abs_diff(&t0, &rho.matrix().scale(0.25)) < 1e-15);

        let p = pure_protocol(theta_resource(FRAC_PI_3));
        let t1 = teleport_raw(&p, 1, &state(matrix_unit(2, 0, 0))).unwrap();
        assert!(max_abs_diff(&t1, &diag(&[0.0, 3.0 / 8.0])) < 1e-15);

        assert!(matches!(
            teleport_raw(&p, 4, &rho),
            Err(Error::OutcomeOutOfRange { index: 4, count: 4 })
        ));
    }

    #[test]
    fn raw_trace_is_outcome_probability() {
        let p = pure_protocol(theta_resource(0.4));
        for rho in InputState::random_batch(2, 50, 8) {
            for a in 0..4 {
                let tr = teleport_raw(&p, a, &rho).unwrap().trace().re;
                assert!((tr - outcome_probability(&p, a, &rho).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn oracle_agrees_for_qubit_pure_resource() {
        let p = pure_protocol(theta_resource(FRAC_PI_3));
        for rho in InputState::random_batch(2, 20, 123) {
            let mut total = 0.0;
            for a in 0..4 {
                let closed = teleport_raw(&p, a, &rho).unwrap();
                let direct = teleport_raw_direct(&p, a, &rho).unwrap();
                assert!(max_abs_diff(&closed, &direct) < 1e-10);
                total += direct.trace().re;
            }
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_agrees_for_qutrit_mixed_resource() {
        let mut w = vec![0.0; 9];
        w[..3].copy_from_slice(&[0.5, 0.3, 0.2]);
        let t = CpMapSpec::new(w, random_onb(3, 2).unwrap()).unwrap();
        let p = Protocol::new(random_onb(3, 1).unwrap(), t.into()).unwrap();
        for rho in InputState::random_batch(3, 5, 9) {
            for a in 0..9 {
                let closed = teleport_raw(&p, a, &rho).unwrap();
                let direct = teleport_raw_direct(&p, a, &rho).unwrap();
                assert!(max_abs_diff(&closed, &direct) < 1e-10);
            }
        }
    }

    #[test]
    fn literal_projector_gives_adjoint_sandwich() {
        // Σ g e_ij g* ⊗ e_ij on H₁⊗H₂ yields Θ(g* ρ g)
        let mut w = vec![0.0; 9];
        w[..2].copy_from_slice(&[0.7, 0.3]);
        let resource: Resource = CpMapSpec::new(w, random_onb(3, 5).unwrap()).unwrap().into();
        let alice = random_onb(3, 6).unwrap();
        let p = Protocol::new(alice.clone(), resource.clone()).unwrap();
        let sigma = resource_state(&resource).unwrap();
        let rho = InputState::random(3, 4);
        for (a, g) in alice.iter().enumerate() {
            let literal = projector_p(g).unwrap();
            assert!(max_abs_diff(&literal, &left_outer(g)) < 1e-12);
            let got = tripartite_reduce(rho.matrix(), sigma.matrix(), &literal).unwrap();
            let want = resource.apply(&(g.adjoint() * rho.matrix() * g)).unwrap();
            assert!(max_abs_diff(&got, &want) < 1e-12);
            // and the closed form differs for this non-Hermitian g
            assert!(max_abs_diff(&got, &teleport_raw(&p, a, &rho).unwrap()) > 1e-6);
        }
    }

    #[test]
    fn oracle_guards() {
        let n = 9;
        let rho = InputState::random(n, 1);
        let sigma = CMatrix::zeros(n * n, n * n);
        assert!(matches!(
            tripartite_reduce(rho.matrix(), &sigma, &sigma),
            Err(Error::OracleTooLarge(9))
        ));
    }

    #[test]
    fn kappa_examples() {
        let unitary_case = standard();
        for a in 0..4 {
            assert!(
                max_abs_diff(&kappa(&unitary_case, a).unwrap(), &identity(2).scale(0.25)) < 1e-15
            );
        }
        for th in [0.3, FRAC_PI_3, 1.2] {
            let p = pure_protocol(theta_resource(th));
            let (s, c) = th.sin_cos();
            let k0 = kappa(&p, 0).unwrap();
            let k1 = kappa(&p, 1).unwrap();
            assert!(max_abs_diff(&k0, &diag(&[c * c / 2.0, s * s / 2.0])) < 1e-15);
            assert!(max_abs_diff(&k1, &diag(&[s * s / 2.0, c * c / 2.0])) < 1e-15);
        }
    }

    #[test]
    fn kappas_resolve_identity() {
        let mut rng = random::rng(6);
        for n in [2usize, 3] {
            let t = CpMapSpec::new(random::weights(&mut rng, n * n), random_onb(n, 40).unwrap())
                .unwrap();
            let p = Protocol::new(random_onb(n, 41).unwrap(), t.into()).unwrap();
            let sum = (0..n * n).fold(CMatrix::zeros(n, n), |acc, a| acc + kappa(&p, a).unwrap());
            assert!(max_abs_diff(&sum, &identity(n)) < 1e-10);
        }
    }

    #[test]
    fn channel_examples() {
        let p = standard();
        let rho = InputState::random(2, 77);
        for (a, s) in spin_matrices().iter().enumerate() {
            let ups = channel_ups(&p, a, &rho).unwrap();
            let want = s * rho.matrix() * s.adjoint();
            assert!(max_abs_diff(&ups, &want) < 1e-14);
        }

        let p = pure_protocol(theta_resource(0.9));
        for a in 0..4 {
            let ups = channel_ups(&p, a, &rho).unwrap();
            let w = key_unitary(&p, a).unwrap();
            assert!(max_abs_diff(&ups, &(&w * rho.matrix() * w.adjoint())) < 1e-12);
            assert!((ups.trace().re - 1.0).abs() < 1e-10);
        }

        let bad = pure_protocol(matrix_unit(2, 0, 0));
        assert!(matches!(
            channel_ups(&bad, 0, &rho),
            Err(Error::NotNormalizable { .. })
        ));
    }

    #[test]
    fn channel_is_trace_preserving_for_mixed_resources() {
        let mut rng = random::rng(19);
        let t = CpMapSpec::new(random::weights(&mut rng, 9), random_onb(3, 19).unwrap()).unwrap();
        let p = Protocol::new(random_onb(3, 20).unwrap(), t.into()).unwrap();
        for rho in InputState::random_batch(3, 10, 1) {
            for a in 0..9 {
                assert!((channel_ups(&p, a, &rho).unwrap().trace().re - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn key_examples() {
        let x = &spin_matrices()[1];
        for th in [0.1, FRAC_PI_3, 1.4] {
            let p = pure_protocol(theta_resource(th));
            assert!(max_abs_diff(&key_unitary(&p, 0).unwrap(), &identity(2)) < 1e-12);
            assert!(max_abs_diff(&key_unitary(&p, 1).unwrap(), x) < 1e-12);
        }
        let p = standard();
        for (a, s) in spin_matrices().iter().enumerate() {
            assert!(max_abs_diff(&key_unitary(&p, a).unwrap(), s) < 1e-14);
        }
        let mixed = Protocol::new(
            spin_basis(),
            CpMapSpec::new(vec![0.25; 4], spin_basis()).unwrap().into(),
        )
        .unwrap();
        assert_eq!(key_unitary(&mixed, 0), Err(Error::NotPure));
    }

    #[test]
    fn recover_examples() {
        let rho = InputState::random(2, 5);
        assert_eq!(recover(rho.matrix(), &identity(2)).unwrap(), *rho.matrix());
        let x = &spin_matrices()[1];
        let flipped = x * rho.matrix() * x;
        assert!(max_abs_diff(&recover(&flipped, x).unwrap(), rho.matrix()) < 1e-15);
        assert!(matches!(
            recover(rho.matrix(), &identity(2).scale(2.0)),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn probability_examples() {
        let p = standard();
        let rho = InputState::random(2, 3);
        for a in 0..4 {
            assert!((outcome_probability(&p, a, &rho).unwrap() - 0.25).abs() < 1e-15);
        }
        let p = pure_protocol(theta_resource(FRAC_PI_3));
        let e11 = state(matrix_unit(2, 0, 0));
        let want = [1.0 / 8.0, 3.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0];
        for (a, w) in want.iter().enumerate() {
            assert!((outcome_probability(&p, a, &e11).unwrap() - w).abs() < 1e-15);
        }
    }

    #[test]
    fn post_measurement_examples() {
        let p = standard();
        let rho = InputState::random(2, 3);
        for a in 0..4 {
            let post = post_measurement_state(&p, a, &rho).unwrap();
            assert!(max_abs_diff(&post, &channel_ups(&p, a, &rho).unwrap()) < 1e-14);
        }
        let mixed = state(identity(2).scale(0.5));
        for a in 0..4 {
            let post = post_measurement_state(&p, a, &mixed).unwrap();
            assert!(max_abs_diff(&post, mixed.matrix()) < 1e-15);
        }

        let p = pure_protocol(theta_resource(0.5));
        for a in 0..4 {
            let post = post_measurement_state(&p, a, &rho).unwrap();
            let rec = recover(&post, &key_unitary(&p, a).unwrap()).unwrap();
            let want = measurement_recovery_prediction(&p, a, &rho).unwrap();
            assert!(max_abs_diff(&rec, &want) < 1e-12);
            assert!(max_abs_diff(&rec, rho.matrix()) > 1e-3);
        }

        // e_11 has zero weight under κ_1 when f = e_11
        let degenerate = pure_protocol(matrix_unit(2, 0, 0));
        let e22 = state(matrix_unit(2, 1, 1));
        assert!(matches!(
            post_measurement_state(&degenerate, 0, &e22),
            Err(Error::ZeroProbability { index: 0, .. })
        ));
    }

    #[test]
    fn run_protocol_complete_teleportation() {
        let p = Protocol::new(
            spin_basis(),
            PureResource::new(crate::qubit_examples::simple_theta_basis(FRAC_PI_3, 0.7)[0].clone())
                .unwrap()
                .into(),
        )
        .unwrap();
        for rho in InputState::random_batch(2, 100, 2024) {
            let out = run_protocol(&p, &rho).unwrap();
            assert_eq!(out.len(), 4);
            let total: f64 = out.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() < 1e-10);
            for (a, o) in out.iter().enumerate() {
                assert_eq!(o.index, a);
                assert!(o.recovery_error.unwrap() < 1e-9);
                assert!(o.key_defect.unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn run_protocol_degenerate_marks_failures() {
        let p = pure_protocol(matrix_unit(2, 0, 0));
        let out = run_protocol(&p, &InputState::random(2, 0)).unwrap();
        assert!(out.iter().all(|o| o.failed() && o.key.is_none()));
        let f = out[0].failure.as_ref().unwrap();
        assert!(matches!(
            f.error,
            Error::NotNormalizable {
                rank: 1,
                dim: 2,
                ..
            }
        ));
        assert_eq!(f.kappa_spectrum.len(), 2);
    }

    #[test]
    fn run_protocol_standard_scheme() {
        let out = run_protocol(&standard(), &InputState::random(2, 42)).unwrap();
        for o in &out {
            assert!((o.probability - 0.25).abs() < 1e-10);
            assert!(o.recovery_error.unwrap() < 1e-10);
            assert!(o.channel_vs_measurement_defect.unwrap() < 1e-14);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let p = pure_protocol(theta_resource(0.8));
        let rho = InputState::random(2, 1);
        assert_eq!(
            run_protocol(&p, &rho).unwrap(),
            run_protocol_sequential(&p, &rho).unwrap()
        );
        let inputs = InputState::random_batch(2, 16, 3);
        let a = sweep(&p, &inputs).unwrap();
        let b = sweep_sequential(&p, &inputs).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.runs, 16);
        assert!(a.max_recovery_error < 1e-9);
    }

    #[test]
    fn channel_is_linear() {
        let p = pure_protocol(theta_resource(1.1));
        let r1 = InputState::random(2, 10);
        let r2 = InputState::random(2, 11);
        for a_mix in [0.0, 0.3, 1.0] {
            let mix = state(r1.matrix().scale(a_mix) + r2.matrix().scale(1.0 - a_mix));
            for alpha in 0..4 {
                let lhs = channel_ups(&p, alpha, &mix).unwrap();
                let rhs = channel_ups(&p, alpha, &r1).unwrap().scale(a_mix)
                    + channel_ups(&p, alpha, &r2).unwrap().scale(1.0 - a_mix);
                assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
            }
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let p = pure_protocol(theta_resource(FRAC_PI_3));
        let rho = state(matrix_unit(2, 0, 0));
        let draw = |seed| {
            let mut rng = random::rng(seed);
            (0..200)
                .map(|_| sample_outcome(&p, &rho, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        let a = draw(1);
        assert_eq!(a, draw(1));
        let zeros = a.iter().filter(|&&x| x == 0).count();
        assert!(zeros > 5 && zeros < 60);
    }

    #[test]
    fn input_validation() {
        assert!(InputState::new(identity(2)).is_err());
        assert!(InputState::new(diag(&[1.2, -0.2])).is_err());
        let p = standard();
        assert!(matches!(
            teleport_raw(&p, 0, &InputState::random(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Protocol::new(
                random_onb(3, 0).unwrap(),
                PureResource::new(theta_resource(0.3)).unwrap().into()
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
