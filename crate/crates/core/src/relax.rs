//! Linear-relaxation (LR) and max-relaxation (MR) iterations.
//!
//! Both schemes start from a norm `||.||_0` with `||e||_0 = 1` and at every
//! step compute the a-posteriori bracket
//!
//! ```text
//! rho-_n = min_x max_i ||A_i x||_n / ||x||_n  <=  rho  <=  rho+_n = max_x (same)
//! ```
//!
//! over the grid directions, then build the next norm from
//! `max_i ||A_i x||_n`:
//!
//! * LR: `||x||_{n+1} = lambda_n ||x||_n + (1 - lambda_n) / gamma_n max_i ||A_i x||_n`
//!   with `gamma_n = max_i ||A_i e||_n`. The normalization `||e||_n = 1`
//!   is preserved automatically and only checked.
//! * MR: `||x||_{n+1} = max(||x||_n, max_i ||A_i x||_n / gamma_n)` with
//!   `gamma_n` an average of `rho-_n` and `rho+_n`, followed by an explicit
//!   rescale so that `||e||_{n+1} = 1`.
//!
//! Iteration stops once the bracket half-width drops below the tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::MatrixSet;
use crate::norm::{grid_node_of, AngularNorm, ImageTable, Stencil};

/// Allowed drift of `||e||_n` away from 1.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Lr,
    Mr,
}

/// Averaging function `gamma(t, s)` for the MR scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    Arithmetic,
    Geometric,
    Harmonic,
}

impl Averaging {
    pub fn apply(self, t: f64, s: f64) -> Result<f64> {
        gamma_mr(t, s, self)
    }
}

/// Relaxation parameters `lambda_n` for the LR scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaSchedule {
    Constant(f64),
    /// Cycled when the iteration outlasts the sequence.
    Sequence(Vec<f64>),
}

impl LambdaSchedule {
    pub fn at(&self, n: usize) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Sequence(v) => v[n % v.len()],
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            Self::Constant(c) => std::slice::from_ref(c),
            Self::Sequence(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialNorm {
    Euclidean,
    /// Node values of an explicit profile; length must equal the node count.
    Explicit(Vec<f64>),
}

/// Every knob of a relaxation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxConfig {
    pub algorithm: Algorithm,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub lambda_schedule: LambdaSchedule,
    pub averaging: Averaging,
    pub node_count: usize,
    /// Reference vector; must point along a grid node.
    pub e: [f64; 2],
    /// Target half-width of the final bracket.
    pub tol: f64,
    pub max_iters: usize,
    pub initial_norm: InitialNorm,
    /// Run even when the family is reducible.
    pub force: bool,
    /// LR with `lambda_n = 0`. Not covered by any convergence guarantee.
    pub unsafe_direct: bool,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Lr,
            lambda_lo: 0.05,
            lambda_hi: 0.95,
            lambda_schedule: LambdaSchedule::Constant(0.3),
            averaging: Averaging::Arithmetic,
            node_count: 3000,
            e: [1.0, 0.0],
            tol: 1e-3,
            max_iters: 10_000,
            initial_norm: InitialNorm::Euclidean,
            force: false,
            unsafe_direct: false,
        }
    }
}

impl RelaxConfig {
    pub fn lr() -> Self {
        Self::default()
    }

    pub fn mr() -> Self {
        Self {
            algorithm: Algorithm::Mr,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.lambda_lo > 0.0 && self.lambda_lo <= self.lambda_hi && self.lambda_hi < 1.0) {
            return bad(format!(
                "lambda bounds must satisfy 0 < lo <= hi < 1, got [{}, {}]",
                self.lambda_lo, self.lambda_hi
            ));
        }
        let lambdas = self.lambda_schedule.values();
        if lambdas.is_empty() {
            return bad("lambda sequence is empty".into());
        }
        if self.algorithm == Algorithm::Lr && !self.unsafe_direct {
            if let Some(l) = lambdas
                .iter()
                .find(|&&l| !(l >= self.lambda_lo && l <= self.lambda_hi))
            {
                return bad(format!(
                    "lambda {l} outside [{}, {}]",
                    self.lambda_lo, self.lambda_hi
                ));
            }
        }
        if self.unsafe_direct && self.algorithm != Algorithm::Lr {
            return bad("the direct variant exists only for LR".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tolerance must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive".into());
        }
        AngularNorm::euclidean(self.node_count)?;
        if grid_node_of(self.e, self.node_count).is_none() {
            return Err(Error::OffGridReference(self.e[0], self.e[1]));
        }
        if let InitialNorm::Explicit(v) = &self.initial_norm {
            if v.len() != self.node_count {
                return Err(Error::NodeCountMismatch {
                    left: v.len(),
                    right: self.node_count,
                });
            }
        }
        Ok(())
    }

    fn initial(&self) -> Result<AngularNorm> {
        match &self.initial_norm {
            InitialNorm::Euclidean => AngularNorm::euclidean(self.node_count),
            InitialNorm::Explicit(v) => AngularNorm::from_values(v.clone()),
        }
    }

    fn lambda(&self, n: usize) -> f64 {
        if self.unsafe_direct {
            0.0
        } else {
            self.lambda_schedule.at(n)
        }
    }
}

/// One row of the iteration trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub gamma: f64,
    /// `lambda_n`; LR only.
    pub lambda: Option<f64>,
}

impl IterationRecord {
    pub fn half_width(&self) -> f64 {
        (self.rho_plus - self.rho_minus) / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxItersReached,
    NotIrreducibleRejected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxResult {
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub rho_mid: f64,
    /// Approximate Barabanov norm.
    pub norm: AngularNorm,
    pub trace: Vec<IterationRecord>,
    pub status: Status,
}

impl RelaxResult {
    pub fn half_width(&self) -> f64 {
        (self.rho_hi - self.rho_lo) / 2.0
    }

    /// Number of norm updates performed.
    pub fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }
}

/// Grid-restricted `(rho-, rho+)` for the norm `nm`.
pub fn bounds(nm: &AngularNorm, set: &MatrixSet) -> Result<(f64, f64)> {
    let images = ImageTable::new(set, nm.node_count())?.max_images(nm.values());
    Ok(ratio_range(nm.values(), &images))
}

fn ratio_range(values: &[f64], images: &[f64]) -> (f64, f64) {
    values
        .iter()
        .zip(images)
        .map(|(h, m)| m / h)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), q| {
            (lo.min(q), hi.max(q))
        })
}

/// `gamma_n = max_i ||A_i e||` for the LR scheme.
pub fn gamma_lr(nm: &AngularNorm, set: &MatrixSet, e: [f64; 2]) -> Result<f64> {
    set.require_planar()?;
    if !(e[0].is_finite() && e[1].is_finite()) || (e[0] == 0.0 && e[1] == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(nm.max_image(set, e))
}

/// Averaged `gamma_n` for the MR scheme; always lies in `[t, s]`.
pub fn gamma_mr(t: f64, s: f64, kind: Averaging) -> Result<f64> {
    if !(t > 0.0 && t <= s && s.is_finite()) {
        return Err(Error::InvalidAveragingInputs(t, s));
    }
    let g = match kind {
        Averaging::Arithmetic => (t + s) / 2.0,
        Averaging::Geometric => (t * s).sqrt(),
        Averaging::Harmonic => 2.0 * t * s / (t + s),
    };
    Ok(g.clamp(t, s))
}

/// One LR step from `nm`, which must satisfy `||e|| = 1`.
pub fn lr_step(
    nm: &AngularNorm,
    set: &MatrixSet,
    cfg: &RelaxConfig,
    n: usize,
) -> Result<(AngularNorm, IterationRecord)> {
    step(nm, set, cfg, n, Algorithm::Lr)
}

/// One MR step from `nm`, which must satisfy `||e|| = 1`.
pub fn mr_step(
    nm: &AngularNorm,
    set: &MatrixSet,
    cfg: &RelaxConfig,
    n: usize,
) -> Result<(AngularNorm, IterationRecord)> {
    step(nm, set, cfg, n, Algorithm::Mr)
}

fn step(
    nm: &AngularNorm,
    set: &MatrixSet,
    cfg: &RelaxConfig,
    n: usize,
    algorithm: Algorithm,
) -> Result<(AngularNorm, IterationRecord)> {
    let cfg = RelaxConfig {
        algorithm,
        node_count: nm.node_count(),
        ..cfg.clone()
    };
    cfg.validate()?;
    let engine = Engine::new(set, &cfg, nm)?;
    let eval = engine.evaluate(nm, n)?;
    let next = engine.advance(nm, &eval)?;
    Ok((next, eval.record))
}

/// Runs the configured scheme to convergence or the iteration cap.
pub fn run(set: &MatrixSet, cfg: &RelaxConfig) -> Result<RelaxResult> {
    run_observed(set, cfg, |_, _| {})
}

/// Like [`run`], handing every norm `||.||_n` and its record to `observer`.
pub fn run_observed(
    set: &MatrixSet,
    cfg: &RelaxConfig,
    mut observer: impl FnMut(&AngularNorm, &IterationRecord),
) -> Result<RelaxResult> {
    cfg.validate()?;
    set.require_planar()?;
    let initial = cfg.initial()?;
    // rescale e so that ||e||_0 = 1
    let scale = initial.eval(cfg.e);
    let e = [cfg.e[0] / scale, cfg.e[1] / scale];
    let engine = Engine::with_reference(set, cfg, e)?;

    if !cfg.force && !set.is_irreducible()? {
        let images = engine.table.max_images(initial.values());
        let (rho_lo, rho_hi) = ratio_range(initial.values(), &images);
        return Ok(RelaxResult {
            rho_lo,
            rho_hi,
            rho_mid: (rho_lo + rho_hi) / 2.0,
            norm: initial,
            trace: Vec::new(),
            status: Status::NotIrreducibleRejected,
        });
    }

    let mut norm = initial;
    let mut trace = Vec::new();
    let status = loop {
        let n = trace.len();
        let eval = engine.evaluate(&norm, n)?;
        observer(&norm, &eval.record);
        trace.push(eval.record);
        if eval.record.half_width() <= cfg.tol {
            break Status::Converged;
        }
        if n >= cfg.max_iters {
            break Status::MaxItersReached;
        }
        norm = engine.advance(&norm, &eval)?;
    };
    let last = *trace.last().expect("at least one record");
    Ok(RelaxResult {
        rho_lo: last.rho_minus,
        rho_hi: last.rho_plus,
        rho_mid: (last.rho_minus + last.rho_plus) / 2.0,
        norm,
        trace,
        status,
    })
}

/// Family-dependent data reused across steps.
struct Engine<'a> {
    cfg: &'a RelaxConfig,
    table: ImageTable,
    e: [f64; 2],
    /// Stencils of `A_i e`.
    e_images: Vec<Stencil>,
}

struct StepEval {
    images: Vec<f64>,
    record: IterationRecord,
}

impl<'a> Engine<'a> {
    fn new(set: &MatrixSet, cfg: &'a RelaxConfig, nm: &AngularNorm) -> Result<Self> {
        let engine = Self::with_reference(set, cfg, cfg.e)?;
        check_normalized(nm, engine.e)?;
        Ok(engine)
    }

    fn with_reference(set: &MatrixSet, cfg: &'a RelaxConfig, e: [f64; 2]) -> Result<Self> {
        let n = cfg.node_count;
        Ok(Self {
            cfg,
            table: ImageTable::new(set, n)?,
            e,
            e_images: set.iter().map(|a| Stencil::new(a.apply2(e), n)).collect(),
        })
    }

    fn evaluate(&self, nm: &AngularNorm, n: usize) -> Result<StepEval> {
        let images = self.table.max_images(nm.values());
        let (rho_minus, rho_plus) = ratio_range(nm.values(), &images);
        let (gamma, lambda) = match self.cfg.algorithm {
            Algorithm::Lr => {
                let gamma = self
                    .e_images
                    .iter()
                    .map(|s| s.eval(nm.values()))
                    .fold(0.0, f64::max);
                (gamma, Some(self.cfg.lambda(n)))
            }
            Algorithm::Mr => (gamma_mr(rho_minus, rho_plus, self.cfg.averaging)?, None),
        };
        Ok(StepEval {
            images,
            record: IterationRecord {
                n,
                rho_minus,
                rho_plus,
                gamma,
                lambda,
            },
        })
    }

    fn advance(&self, nm: &AngularNorm, eval: &StepEval) -> Result<AngularNorm> {
        let rec = &eval.record;
        match self.cfg.algorithm {
            Algorithm::Lr => {
                let lambda = rec.lambda.unwrap_or_default();
                let next = nm.linear_from_images(&eval.images, lambda, rec.gamma)?;
                check_normalized(&next, self.e)?;
                Ok(next)
            }
            Algorithm::Mr => nm
                .max_from_images(&eval.images, rec.gamma)?
                .normalize(self.e),
        }
    }
}

fn check_normalized(nm: &AngularNorm, e: [f64; 2]) -> Result<()> {
    let v = nm.eval(e);
    if (v - 1.0).abs() <= NORMALIZATION_TOL {
        Ok(())
    } else {
        Err(Error::NormalizationDrift(v))
    }
}
