//! JSON experiment configs, experiment execution and machine-readable
//! reports.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Every float in a report is rounded to 12 significant digits so that
//! reports are byte-stable across platforms.

use serde::{Deserialize, Serialize};

use crate::channels::{CpMapSpec, PureResource, Resource};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::operator_space::{self, matrix_units, random_onb, OperatorBasis};
use crate::par;
use crate::qubit_examples::{
    basis_from_orthogonal, rotation_c, simple_theta_basis, spin_basis, theta_resource,
    RotationAngles,
};
use crate::random;
use crate::resource::{
    entanglement_entropy, is_maximally_entangled, resource_state, schmidt_values,
};
use crate::teleport::{self, InputState, OutcomeResult, Protocol};

/// Environment variable overriding the default structural tolerance.
pub const TOLERANCE_ENV: &str = "TELEPORT_TOLERANCE";
/// Largest dimension for which `run --oracle` evaluates the tripartite check.
pub const ORACLE_CLI_MAX_DIM: usize = 4;
/// Slack allowed on config weights before they are renormalized.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    /// `"spin"`, `"matrix_units"` or `"random"`.
    Name(String),
    Preset {
        preset: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta2: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta3: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Explicit {
        matrices: Vec<MatrixJson>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedSpec {
    pub weights: Vec<f64>,
    pub basis: BasisSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResourceSpec {
    /// `f = diag(cos θ, sin θ)` (qubits only).
    PureTheta {
        pure_theta: f64,
    },
    /// Explicit `f` with `tr(f* f) = 1`.
    Pure {
        pure: MatrixJson,
    },
    /// Element `index` of a basis.
    PureBasisElement {
        pure_basis: BasisSpec,
        index: usize,
    },
    Mixed {
        mixed: MixedSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Random { random: usize },
    Explicit { matrices: Vec<MatrixJson> },
}

impl Default for InputSpec {
    fn default() -> Self {
        InputSpec::Random { random: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Probability normalization and oracle agreement.
    pub structural: f64,
    /// Recovery error and key unitarity.
    pub recovery: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: crate::STRUCTURAL_TOL,
            recovery: crate::KEY_TOL,
        }
    }
}

impl Tolerances {
    /// Defaults, with the structural tolerance taken from
    /// `TELEPORT_TOLERANCE` when set.
    pub fn from_env() -> Result<Self> {
        let mut t = Self::default();
        if let Ok(raw) = std::env::var(TOLERANCE_ENV) {
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{TOLERANCE_ENV}={raw:?} is not a number")))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!(
                    "{TOLERANCE_ENV} must be positive, got {v}"
                )));
            }
            t.structural = v;
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub alice: BasisSpec,
    pub resource: ResourceSpec,
    #[serde(default)]
    pub inputs: InputSpec,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub oracle: bool,
}

impl ExperimentConfig {
    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }
}

/// Parses and validates a config, filling defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    parse_config_with(text, Tolerances::default())
}

/// As [`parse_config`], with `defaults` used when the config has no
/// `tolerances` section.
pub fn parse_config_with(text: &str, defaults: Tolerances) -> Result<ExperimentConfig> {
    let mut cfg: ExperimentConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
    if cfg.tolerances.is_none() {
        cfg.tolerances = Some(defaults);
    }
    let t = cfg.tolerances();
    for (name, v) in [("structural", t.structural), ("recovery", t.recovery)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Config(format!(
                "tolerance {name} must be positive, got {v}"
            )));
        }
    }
    resolve(&cfg)?;
    Ok(cfg)
}

/// A config resolved into numerical objects.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub protocol: Protocol,
    pub inputs: Vec<InputState>,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be finite, got {v}")))
    }
}

pub fn matrix_from_json(m: &MatrixJson, n: usize) -> Result<CMatrix> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        let shape: Vec<usize> = m.iter().map(Vec::len).collect();
        return Err(Error::Config(format!(
            "malformed matrix: expected {n}x{n}, got rows of lengths {shape:?}"
        )));
    }
    let mut out = CMatrix::zeros(n, n);
    for (i, row) in m.iter().enumerate() {
        for (j, [re, im]) in row.iter().enumerate() {
            out[(i, j)] = c(finite("matrix entry", *re)?, finite("matrix entry", *im)?);
        }
    }
    Ok(out)
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [sig(m[(i, j)].re), sig(m[(i, j)].im)])
                .collect()
        })
        .collect()
}

fn require_qubit(n: usize, what: &str) -> Result<()> {
    if n != 2 {
        return Err(Error::Config(format!(
            "{what} is only defined for dim 2, got dim {n}"
        )));
    }
    Ok(())
}

pub fn resolve_basis(spec: &BasisSpec, n: usize, seed: u64) -> Result<OperatorBasis> {
    let angle = |name: &str, v: Option<f64>| -> Result<f64> {
        finite(
            name,
            v.ok_or_else(|| Error::Config(format!("preset requires {name}")))?,
        )
    };
    let basis = match spec {
        BasisSpec::Name(name) => match name.as_str() {
            "spin" => {
                require_qubit(n, "spin basis")?;
                spin_basis()
            }
            "matrix_units" => matrix_units(n).map_err(config_err)?,
            "random" => random_onb(n, seed).map_err(config_err)?,
            other => return Err(Error::Config(format!("unknown preset {other:?}"))),
        },
        BasisSpec::Preset {
            preset,
            theta1,
            theta2,
            theta3,
            seed: own_seed,
        } => match preset.as_str() {
            "spin" => {
                require_qubit(n, "spin basis")?;
                spin_basis()
            }
            "matrix_units" => matrix_units(n).map_err(config_err)?,
            "random" => random_onb(n, own_seed.unwrap_or(seed)).map_err(config_err)?,
            "simple_theta" => {
                require_qubit(n, "simple_theta basis")?;
                simple_theta_basis(angle("theta1", *theta1)?, angle("theta2", *theta2)?)
            }
            "rotation" => {
                require_qubit(n, "rotation basis")?;
                let angles = RotationAngles::new(
                    angle("theta1", *theta1)?,
                    angle("theta2", *theta2)?,
                    angle("theta3", *theta3)?,
                );
                basis_from_orthogonal(&rotation_c(angles), &spin_basis()).map_err(config_err)?
            }
            other => return Err(Error::Config(format!("unknown preset {other:?}"))),
        },
        BasisSpec::Explicit { matrices } => {
            let elements = matrices
                .iter()
                .map(|m| matrix_from_json(m, n))
                .collect::<Result<Vec<_>>>()?;
            OperatorBasis::new(elements).map_err(config_err)?
        }
    };
    if basis.dim() != n {
        return Err(Error::Config(format!(
            "basis has dim {}, config dim {n}",
            basis.dim()
        )));
    }
    let defect = operator_space::gram_defect(&basis);
    if defect > crate::STRUCTURAL_TOL {
        return Err(Error::Config(format!(
            "basis is not orthonormal (max Gram defect {defect:e})"
        )));
    }
    Ok(basis)
}

pub fn resolve_resource(spec: &ResourceSpec, n: usize, seed: u64) -> Result<Resource> {
    let pure = |f: CMatrix| -> Result<Resource> {
        let trace = f.norm_squared();
        if (trace - 1.0).abs() > crate::ROUNDTRIP_TOL {
            return Err(Error::Config(format!(
                "resource operator not normalized: tr(f*f) = {}",
                sig(trace)
            )));
        }
        Ok(PureResource::new(f).map_err(config_err)?.into())
    };
    match spec {
        ResourceSpec::PureTheta { pure_theta } => {
            require_qubit(n, "pure_theta resource")?;
            pure(theta_resource(finite("pure_theta", *pure_theta)?))
        }
        ResourceSpec::Pure { pure: m } => pure(matrix_from_json(m, n)?),
        ResourceSpec::PureBasisElement { pure_basis, index } => {
            let b = resolve_basis(pure_basis, n, seed.wrapping_add(1))?;
            let f = b.get(*index).cloned().ok_or_else(|| {
                Error::Config(format!(
                    "basis index {index} out of range ({} elements)",
                    b.len()
                ))
            })?;
            pure(f)
        }
        ResourceSpec::Mixed { mixed } => {
            let b = resolve_basis(&mixed.basis, n, seed.wrapping_add(1))?;
            if mixed.weights.len() != b.len() {
                return Err(Error::Config(format!(
                    "{} weights for {} basis elements",
                    mixed.weights.len(),
                    b.len()
                )));
            }
            if let Some(w) = mixed.weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
                return Err(Error::Config(format!(
                    "weight {w} is negative or not finite"
                )));
            }
            let total: f64 = mixed.weights.iter().sum();
            if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                return Err(Error::Config(format!("weights sum to {total}, expected 1")));
            }
            let weights = mixed.weights.iter().map(|w| w / total).collect();
            Ok(CpMapSpec::new(weights, b).map_err(config_err)?.into())
        }
    }
}

pub fn resolve(cfg: &ExperimentConfig) -> Result<Experiment> {
    if cfg.dim == 0 {
        return Err(Error::Config("dim must be at least 1".into()));
    }
    let n = cfg.dim;
    let alice = resolve_basis(&cfg.alice, n, cfg.seed)?;
    let resource = resolve_resource(&cfg.resource, n, cfg.seed)?;
    let protocol = Protocol::new(alice, resource).map_err(config_err)?;
    let inputs = match &cfg.inputs {
        InputSpec::Random { random } => {
            InputState::random_batch(n, *random, cfg.seed.wrapping_add(2))
        }
        InputSpec::Explicit { matrices } => matrices
            .iter()
            .map(|m| InputState::new(matrix_from_json(m, n)?).map_err(config_err))
            .collect::<Result<Vec<_>>>()?,
    };
    if inputs.is_empty() {
        return Err(Error::Config("no input states".into()));
    }
    Ok(Experiment { protocol, inputs })
}

/// Rounds to 12 significant digits.
pub fn sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn sig_all(xs: impl IntoIterator<Item = f64>) -> Vec<f64> {
    xs.into_iter().map(sig).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceDiagnostics {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schmidt_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximally_entangled: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_singular_value_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// Eigenvalues of the resource state, descending.
    pub state_spectrum: Vec<f64>,
    /// Minimum singular value of each `g_α`.
    pub alice_min_singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeSummary {
    pub index: usize,
    /// Eigenvalues of `κ_α`, ascending.
    pub kappa_eigenvalues: Vec<f64>,
    pub key: Option<MatrixJson>,
    pub key_unitarity_defect: Option<f64>,
    pub failed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeRecord {
    pub index: usize,
    pub probability: f64,
    pub recovery_error: Option<f64>,
    pub key_unitarity_defect: Option<f64>,
    /// Max-entry distance between the normalized channel output and the
    /// normalized post-measurement state.
    pub channel_vs_measurement_defect: Option<f64>,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputRecord {
    pub index: usize,
    pub probability_sum_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_defect: Option<f64>,
    pub outcomes: Vec<OutcomeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub inputs: usize,
    pub outcomes_per_input: usize,
    pub failed_outcomes: usize,
    pub max_recovery_error: Option<f64>,
    pub max_key_unitarity_defect: Option<f64>,
    pub max_probability_sum_defect: f64,
    pub max_channel_vs_measurement_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_oracle_defect: Option<f64>,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub resource: ResourceDiagnostics,
    pub outcomes: Vec<OutcomeSummary>,
    pub inputs: Vec<InputRecord>,
    pub aggregate: Aggregate,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.aggregate.passed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn resource_diagnostics(p: &Protocol) -> Result<ResourceDiagnostics> {
    let state = resource_state(p.resource())?;
    let alice_min = sig_all(p.alice_basis().iter().map(linalg::min_singular_value));
    Ok(match p.resource() {
        Resource::Pure(pure) => {
            let f = pure.operator();
            ResourceDiagnostics {
                kind: "pure",
                schmidt_values: Some(sig_all(schmidt_values(f))),
                entropy_bits: Some(sig(entanglement_entropy(f))),
                maximally_entangled: Some(is_maximally_entangled(f, crate::STRUCTURAL_TOL)),
                min_singular_value_f: Some(sig(linalg::min_singular_value(f))),
                weights: None,
                state_spectrum: sig_all(state.spectrum()),
                alice_min_singular_values: alice_min,
            }
        }
        Resource::Mixed(t) => ResourceDiagnostics {
            kind: "mixed",
            schmidt_values: None,
            entropy_bits: None,
            maximally_entangled: None,
            min_singular_value_f: None,
            weights: Some(sig_all(t.weights().iter().copied())),
            state_spectrum: sig_all(state.spectrum()),
            alice_min_singular_values: alice_min,
        },
    })
}

fn outcome_summary(p: &Protocol, alpha: usize, sample: &OutcomeResult) -> Result<OutcomeSummary> {
    let kappa = teleport::kappa(p, alpha)?;
    Ok(OutcomeSummary {
        index: alpha,
        kappa_eigenvalues: sig_all(linalg::hermitian_eigenvalues(&kappa)),
        key: sample.key.as_ref().map(matrix_to_json),
        key_unitarity_defect: sample.key_defect.map(sig),
        failed: sample.failed(),
        failure: sample.failure.as_ref().map(|f| f.error.to_string()),
    })
}

fn max_opt(acc: Option<f64>, x: Option<f64>) -> Option<f64> {
    match (acc, x) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

/// Runs every input through every outcome and assembles the report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    let exp = resolve(cfg)?;
    let p = &exp.protocol;
    let tol = cfg.tolerances();
    let with_oracle = cfg.oracle && p.dim() <= ORACLE_CLI_MAX_DIM;

    let per_input: Vec<Result<(Vec<OutcomeResult>, Option<f64>)>> =
        par::map_indices(exp.inputs.len(), |i| {
            let rho = &exp.inputs[i];
            let outcomes = teleport::run_protocol_sequential(p, rho)?;
            let oracle = if with_oracle {
                let mut worst: f64 = 0.0;
                for o in &outcomes {
                    let direct = teleport::teleport_raw_direct(p, o.index, rho)?;
                    worst = worst.max(linalg::max_abs_diff(&direct, &o.raw_state));
                }
                Some(worst)
            } else {
                None
            };
            Ok((outcomes, oracle))
        });
    let per_input = per_input.into_iter().collect::<Result<Vec<_>>>()?;

    let summaries = per_input[0]
        .0
        .iter()
        .enumerate()
        .map(|(a, o)| outcome_summary(p, a, o))
        .collect::<Result<Vec<_>>>()?;

    let mut agg = Aggregate {
        inputs: per_input.len(),
        outcomes_per_input: p.outcome_count(),
        failed_outcomes: 0,
        max_recovery_error: None,
        max_key_unitarity_defect: None,
        max_probability_sum_defect: 0.0,
        max_channel_vs_measurement_defect: None,
        max_oracle_defect: None,
        passed: true,
        failures: Vec::new(),
    };
    let mut inputs = Vec::with_capacity(per_input.len());
    for (i, (outcomes, oracle)) in per_input.iter().enumerate() {
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        let defect = (total - 1.0).abs();
        agg.max_probability_sum_defect = agg.max_probability_sum_defect.max(defect);
        agg.max_oracle_defect = max_opt(agg.max_oracle_defect, *oracle);
        let records = outcomes
            .iter()
            .map(|o| {
                if o.failed() {
                    agg.failed_outcomes += 1;
                }
                agg.max_recovery_error = max_opt(agg.max_recovery_error, o.recovery_error);
                agg.max_key_unitarity_defect = max_opt(agg.max_key_unitarity_defect, o.key_defect);
                agg.max_channel_vs_measurement_defect = max_opt(
                    agg.max_channel_vs_measurement_defect,
                    o.channel_vs_measurement_defect,
                );
                OutcomeRecord {
                    index: o.index,
                    probability: sig(o.probability),
                    recovery_error: o.recovery_error.map(sig),
                    key_unitarity_defect: o.key_defect.map(sig),
                    channel_vs_measurement_defect: o.channel_vs_measurement_defect.map(sig),
                    failed: o.failed(),
                }
            })
            .collect();
        inputs.push(InputRecord {
            index: i,
            probability_sum_defect: sig(defect),
            oracle_defect: oracle.map(sig),
            outcomes: records,
        });
    }

    if agg.failed_outcomes > 0 {
        agg.failures.push(format!(
            "{} of {} outcomes failed",
            agg.failed_outcomes,
            agg.inputs * agg.outcomes_per_input
        ));
    }
    if agg.max_probability_sum_defect > tol.structural {
        agg.failures.push(format!(
            "probability sum defect {:e} exceeds {:e}",
            agg.max_probability_sum_defect, tol.structural
        ));
    }
    if let Some(e) = agg.max_recovery_error.filter(|&e| e > tol.recovery) {
        agg.failures
            .push(format!("recovery error {e:e} exceeds {:e}", tol.recovery));
    }
    if let Some(e) = agg.max_key_unitarity_defect.filter(|&e| e > tol.recovery) {
        agg.failures.push(format!(
            "key unitarity defect {e:e} exceeds {:e}",
            tol.recovery
        ));
    }
    if let Some(e) = agg.max_oracle_defect.filter(|&e| e > tol.structural) {
        agg.failures
            .push(format!("oracle defect {e:e} exceeds {:e}", tol.structural));
    }
    agg.passed = agg.failures.is_empty();
    agg.max_recovery_error = agg.max_recovery_error.map(sig);
    agg.max_key_unitarity_defect = agg.max_key_unitarity_defect.map(sig);
    agg.max_probability_sum_defect = sig(agg.max_probability_sum_defect);
    agg.max_channel_vs_measurement_defect = agg.max_channel_vs_measurement_defect.map(sig);
    agg.max_oracle_defect = agg.max_oracle_defect.map(sig);

    Ok(RunReport {
        config: cfg.clone(),
        resource: resource_diagnostics(p)?,
        outcomes: summaries,
        inputs,
        aggregate: agg,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

/// Human-readable per-outcome table.
pub fn summary_table(report: &RunReport) -> String {
    let mut out = String::new();
    let r = &report.resource;
    out.push_str(&format!("resource: {}", r.kind));
    if let Some(h) = r.entropy_bits {
        out.push_str(&format!(
            "  entropy {h:.6} bits  maximal {}",
            r.maximally_entangled.unwrap_or(false)
        ));
    }
    out.push('\n');
    out.push_str("outcome  mean_prob     max_recovery  key_defect    status\n");
    let k = report.inputs.len() as f64;
    for s in &report.outcomes {
        let (mut mean_p, mut rec) = (0.0, None);
        for input in &report.inputs {
            let o = &input.outcomes[s.index];
            mean_p += o.probability / k;
            rec = max_opt(rec, o.recovery_error);
        }
        let status = if s.failed { "FAILED" } else { "ok" };
        out.push_str(&format!(
            "{:>7}  {:<12.6e}  {:<12}  {:<12}  {status}\n",
            s.index,
            mean_p,
            fmt_opt(rec),
            fmt_opt(s.key_unitarity_defect)
        ));
    }
    let a = &report.aggregate;
    out.push_str(&format!(
        "inputs {}  max recovery {}  prob-sum defect {:.3e}  oracle {}  => {}\n",
        a.inputs,
        fmt_opt(a.max_recovery_error),
        a.max_probability_sum_defect,
        fmt_opt(a.max_oracle_defect),
        if a.passed { "PASS" } else { "FAIL" }
    ));
    for f in &a.failures {
        out.push_str(&format!("  failure: {f}\n"));
    }
    out
}

/// Named demonstration setups.
pub const DEMO_PRESETS: &[&str] = &[
    "standard",
    "theta",
    "simple-theta",
    "rotation",
    "degenerate",
];

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DemoAngles {
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub theta3: Option<f64>,
}

/// Builds the config for a demo preset. All demos use the spin basis for
/// Alice and ten seeded random inputs.
pub fn demo_config(preset: &str, angles: DemoAngles, seed: u64) -> Result<ExperimentConfig> {
    let third = std::f64::consts::FRAC_PI_3;
    let t1 = angles.theta1.unwrap_or(third);
    let t2 = angles.theta2.unwrap_or(third);
    let t3 = angles.theta3.unwrap_or(third);
    let resource = match preset {
        "standard" => ResourceSpec::PureTheta {
            pure_theta: std::f64::consts::FRAC_PI_4,
        },
        "theta" => ResourceSpec::PureTheta { pure_theta: t1 },
        "simple-theta" => ResourceSpec::PureBasisElement {
            pure_basis: BasisSpec::Preset {
                preset: "simple_theta".into(),
                theta1: Some(t1),
                theta2: Some(t2),
                theta3: None,
                seed: None,
            },
            index: 0,
        },
        "rotation" => ResourceSpec::PureBasisElement {
            pure_basis: BasisSpec::Preset {
                preset: "rotation".into(),
                theta1: Some(t1),
                theta2: Some(t2),
                theta3: Some(t3),
                seed: None,
            },
            index: 0,
        },
        "degenerate" => ResourceSpec::PureTheta { pure_theta: 0.0 },
        other => {
            return Err(Error::Config(format!(
                "unknown demo preset {other:?} (expected one of {DEMO_PRESETS:?})"
            )))
        }
    };
    Ok(ExperimentConfig {
        dim: 2,
        alice: BasisSpec::Name("spin".into()),
        resource,
        inputs: InputSpec::default(),
        tolerances: Some(Tolerances::default()),
        seed,
        oracle: true,
    })
}

/// Draws `count` seeded outcomes for the first input of `cfg` and describes
/// what Bob does for each.
pub fn demo_samples(cfg: &ExperimentConfig, count: usize) -> Result<Vec<String>> {
    let exp = resolve(cfg)?;
    let rho = &exp.inputs[0];
    let mut rng = random::rng(cfg.seed.wrapping_add(3));
    let outcomes = teleport::run_protocol(&exp.protocol, rho)?;
    (0..count)
        .map(|shot| {
            let a = teleport::sample_outcome(&exp.protocol, rho, &mut rng)?;
            let o = &outcomes[a];
            Ok(match (&o.recovery_error, &o.failure) {
                (Some(e), _) => format!(
                    "shot {shot}: outcome {a} (p = {:.4}), key applied, recovery error {e:.2e}",
                    o.probability
                ),
                (None, Some(f)) => format!("shot {shot}: outcome {a}: no key ({})", f.error),
                (None, None) => format!("shot {shot}: outcome {a}: no key for this resource"),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_oracle_defect: Option<f64>,
    pub max_probability_sum_defect: f64,
    pub max_key_unitarity_defect: f64,
    pub max_recovery_error: f64,
    pub max_trace_defect: f64,
    pub failed_trials: Vec<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialOutcome {
    oracle: Option<f64>,
    prob: f64,
    key: f64,
    recovery: f64,
    trace: f64,
    failed: bool,
}

/// One randomized trial: random Alice basis, random full-rank pure resource,
/// random input, plus a random mixed resource for the oracle and
/// trace-preservation checks.
fn verify_trial(n: usize, seed: u64, tol: Tolerances) -> Result<TrialOutcome> {
    let mut rng = random::rng(seed);
    let alice = random_onb(n, seed ^ 0x9E37_79B9_7F4A_7C15)?;
    let f = random::unit_hs_matrix(&mut rng, n);
    let rho = InputState::from_rng(&mut rng, n);
    let pure = Protocol::new(alice.clone(), PureResource::new(f)?.into())?;
    let mixed_resource = CpMapSpec::new(
        random::weights(&mut rng, n * n),
        random_onb(n, seed.wrapping_add(1))?,
    )?;
    let mixed = Protocol::new(alice, mixed_resource.into())?;

    let mut t = TrialOutcome::default();
    let outcomes = teleport::run_protocol_sequential(&pure, &rho)?;
    t.prob = (outcomes.iter().map(|o| o.probability).sum::<f64>() - 1.0).abs();
    for o in &outcomes {
        t.failed |= o.failed();
        t.key = t.key.max(o.key_defect.unwrap_or(f64::INFINITY));
        t.recovery = t.recovery.max(o.recovery_error.unwrap_or(f64::INFINITY));
    }
    let mut mixed_prob = 0.0;
    for a in 0..n * n {
        mixed_prob += teleport::outcome_probability(&mixed, a, &rho)?;
        let ups = teleport::channel_ups(&mixed, a, &rho)?;
        t.trace = t.trace.max((ups.trace().re - 1.0).abs());
    }
    t.prob = t.prob.max((mixed_prob - 1.0).abs());
    if n <= 5 {
        let mut worst: f64 = 0.0;
        for proto in [&pure, &mixed] {
            for a in 0..n * n {
                let closed = teleport::teleport_raw(proto, a, &rho)?;
                let direct = teleport::teleport_raw_direct(proto, a, &rho)?;
                worst = worst.max(linalg::max_abs_diff(&closed, &direct));
            }
        }
        t.oracle = Some(worst);
    }
    t.failed |= t.prob > tol.structural
        || t.trace > tol.structural
        || t.key > tol.recovery
        || t.recovery > tol.recovery
        || t.oracle.is_some_and(|o| o > tol.structural);
    Ok(t)
}

/// Randomized property sweep over `trials` independent seeded trials.
pub fn run_verification(
    n: usize,
    trials: usize,
    seed: u64,
    tol: Tolerances,
) -> Result<VerifyReport> {
    if n == 0 {
        return Err(Error::Config("--n must be at least 1".into()));
    }
    let results = par::map_indices(trials, |i| {
        verify_trial(n, seed.wrapping_mul(1_000_003).wrapping_add(i as u64), tol)
    });
    let mut report = VerifyReport {
        dim: n,
        trials,
        seed,
        max_oracle_defect: None,
        max_probability_sum_defect: 0.0,
        max_key_unitarity_defect: 0.0,
        max_recovery_error: 0.0,
        max_trace_defect: 0.0,
        failed_trials: Vec::new(),
        passed: true,
    };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => {
                report.max_oracle_defect = max_opt(report.max_oracle_defect, t.oracle);
                report.max_probability_sum_defect = report.max_probability_sum_defect.max(t.prob);
                report.max_key_unitarity_defect = report.max_key_unitarity_defect.max(t.key);
                report.max_recovery_error = report.max_recovery_error.max(t.recovery);
                report.max_trace_defect = report.max_trace_defect.max(t.trace);
                if t.failed {
                    report.failed_trials.push(i);
                }
            }
            Err(_) => report.failed_trials.push(i),
        }
    }
    report.passed = report.failed_trials.is_empty();
    report.max_oracle_defect = report.max_oracle_defect.map(sig);
    report.max_probability_sum_defect = sig(report.max_probability_sum_defect);
    report.max_key_unitarity_defect = sig(report.max_key_unitarity_defect);
    report.max_recovery_error = sig(report.max_recovery_error);
    report.max_trace_defect = sig(report.max_trace_defect);
    Ok(report)
}
