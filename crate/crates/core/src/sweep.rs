//! T₀ sweeps over a set of scenarios.
//!
//! Each (scenario, T₀) pair is an independent task. Results land in
//! pre-indexed slots, so the output never depends on how many workers ran or
//! in which order they finished.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bogoliubov::{asymptotic_q_magnitude, squeezing_q};
use crate::entanglement::{
    build_rho_av, choose_n_max, log_negativity, log_negativity_closed_form, measures,
    mutual_information, mutual_information_closed_form, EntanglementPoint, Measures,
    DEFAULT_TAIL_TOL,
};
use crate::spacetime::ModeSpec;
use crate::specfun::Precision;
use crate::{Error, Result};

/// Largest fraction of failed points a sweep tolerates.
pub const MAX_FAILURE_FRACTION: f64 = 0.1;

/// Below this `|q|` the closed-form mutual information is not compared.
pub const CLOSED_FORM_MIN_Q: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub m: f64,
    pub w: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

impl Scenario {
    pub fn new(m: f64, w: f64, k: f64) -> Self {
        Self { m, w, k }
    }

    pub fn nu(&self) -> f64 {
        self.k / self.w
    }

    pub fn label(&self) -> String {
        format!("K={}, w={}", self.k, self.w)
    }

    pub fn mode_spec(&self) -> Result<ModeSpec> {
        ModeSpec::new(self.m, self.w, self.k)
    }
}

/// The four reference scenarios (K, w) = (0.1, 1), (0.3, 1), (0.1, 5),
/// (0.3, 5), all with m = 1.
pub fn figure_scenarios() -> Vec<Scenario> {
    [(0.1, 1.0), (0.3, 1.0), (0.1, 5.0), (0.3, 5.0)]
        .iter()
        .map(|&(k, w)| Scenario::new(1.0, w, k))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlotKind {
    #[serde(rename = "N")]
    Negativity,
    #[serde(rename = "I")]
    MutualInfo,
    #[serde(rename = "both")]
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub scenarios: Vec<Scenario>,
    pub t0_min: f64,
    pub t0_max: f64,
    pub steps: usize,
    pub tail_tol: f64,
    pub spec_tol: f64,
    pub output_path: Option<std::path::PathBuf>,
    pub format: Format,
    pub plot: Option<PlotKind>,
    pub compare_rindler: bool,
    /// Worker count; `None` lets rayon decide.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            scenarios: figure_scenarios(),
            t0_min: -8.0,
            t0_max: 10.0,
            steps: 200,
            tail_tol: DEFAULT_TAIL_TOL,
            spec_tol: Precision::default().rel_tol,
            output_path: None,
            format: Format::Csv,
            plot: None,
            compare_rindler: false,
            threads: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.scenarios.is_empty() {
            return bad("no scenarios given".into());
        }
        if self.steps < 2 {
            return bad(format!("steps must be at least 2, got {}", self.steps));
        }
        if !(self.t0_min < self.t0_max) || !self.t0_min.is_finite() || !self.t0_max.is_finite() {
            return bad(format!(
                "need finite t0_min < t0_max, got [{}, {}]",
                self.t0_min, self.t0_max
            ));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return bad(format!(
                "tail_tol must lie in (0, 1), got {}",
                self.tail_tol
            ));
        }
        if !(self.spec_tol > 0.0) {
            return bad(format!("spec_tol must be positive, got {}", self.spec_tol));
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        for s in &self.scenarios {
            s.mode_spec()?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let span = self.t0_max - self.t0_min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.t0_max
                } else {
                    self.t0_min + span * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointFailure {
    #[serde(rename = "T0")]
    pub t0: f64,
    pub error: String,
}

/// Largest closed-form minus numeric difference over one curve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Delta {
    pub max_abs: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    pub q_abs: f64,
}

impl Delta {
    fn update(&mut self, d: f64, t0: f64, q_abs: f64) {
        if d.abs() > self.max_abs || self.max_abs.is_nan() {
            *self = Delta {
                max_abs: d.abs(),
                t0,
                q_abs,
            };
        }
    }
}

/// Closed-form versus numeric comparison for one scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub scenario: usize,
    /// Closed-form negativity series minus the numeric value.
    pub negativity: Delta,
    /// Closed-form mutual-information series minus the numeric value, over
    /// points with `|q| >= CLOSED_FORM_MIN_Q`.
    pub mutual_info: Option<Delta>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    pub index: usize,
    pub scenario: Scenario,
    pub nu: f64,
    pub points: Vec<EntanglementPoint>,
    pub failures: Vec<PointFailure>,
    pub n_max_min: usize,
    pub n_max_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub index: usize,
    pub scenario: Scenario,
    pub nu: f64,
    pub n_max_min: usize,
    pub n_max_max: usize,
    pub points: usize,
    pub failures: Vec<PointFailure>,
}

/// Bell-state check of the closed-form negativity series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellLimit {
    pub numeric: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub artifact: &'static str,
    pub version: &'static str,
    pub config: SweepConfig,
    pub scenarios: Vec<ScenarioSummary>,
    pub negativity_bell_limit: BellLimit,
    pub discrepancies: Vec<Discrepancy>,
    /// Only written to the sidecar file; absent from reproducible outputs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub curves: Vec<Curve>,
    pub manifest: RunManifest,
}

impl SweepResult {
    pub fn points(&self) -> impl Iterator<Item = (&Curve, &EntanglementPoint)> {
        self.curves
            .iter()
            .flat_map(|c| c.points.iter().map(move |p| (c, p)))
    }

    pub fn failure_count(&self) -> usize {
        self.curves.iter().map(|c| c.failures.len()).sum()
    }
}

struct Evaluated {
    point: EntanglementPoint,
    n_max: usize,
    negativity_delta: f64,
    mutual_info_delta: Option<f64>,
}

fn evaluate(spec: &ModeSpec, t0: f64, prec: &Precision, tail_tol: f64) -> Result<Evaluated> {
    let q_abs = squeezing_q(spec, t0, prec)?.abs();
    let n_max = choose_n_max(q_abs, tail_tol)?;
    let rho = build_rho_av(q_abs, n_max, tail_tol)?;
    let negativity = log_negativity(&rho)?;
    let mutual_info = mutual_information(&rho)?;
    let mutual_info_delta = if q_abs >= CLOSED_FORM_MIN_Q {
        Some(mutual_information_closed_form(q_abs, n_max)? - mutual_info)
    } else {
        None
    };
    Ok(Evaluated {
        point: EntanglementPoint {
            t0,
            q_abs,
            negativity,
            mutual_info,
        },
        n_max,
        negativity_delta: log_negativity_closed_form(q_abs, n_max) - negativity,
        mutual_info_delta,
    })
}

/// Numeric `N` and `I` at the uniform-acceleration value `|q| = e^{-πν}`.
pub fn rindler_measures(scenario: &Scenario, tail_tol: f64) -> Result<Measures> {
    measures(asymptotic_q_magnitude(scenario.nu()), tail_tol)
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let start = Instant::now();
    let grid = config.grid();
    let prec = Precision::with_tol(config.spec_tol);
    let specs = config
        .scenarios
        .iter()
        .map(Scenario::mode_spec)
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, f64)> = (0..specs.len())
        .flat_map(|s| grid.iter().map(move |&t| (s, t)))
        .collect();

    let work = || -> Vec<Result<Evaluated>> {
        tasks
            .par_iter()
            .map(|&(s, t0)| evaluate(&specs[s], t0, &prec, config.tail_tol))
            .collect()
    };
    let outcomes = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(work),
        None => work(),
    };

    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    if failed as f64 > MAX_FAILURE_FRACTION * tasks.len() as f64 {
        return Err(Error::TooManyFailures {
            failed,
            total: tasks.len(),
        });
    }

    let mut curves = Vec::with_capacity(specs.len());
    let mut discrepancies = Vec::with_capacity(specs.len());
    let mut outcomes = outcomes.into_iter();
    for (index, scenario) in config.scenarios.iter().enumerate() {
        let mut curve = Curve {
            index,
            scenario: *scenario,
            nu: scenario.nu(),
            points: Vec::with_capacity(grid.len()),
            failures: Vec::new(),
            n_max_min: usize::MAX,
            n_max_max: 0,
        };
        let mut disc = Discrepancy {
            scenario: index,
            negativity: Delta::default(),
            mutual_info: None,
        };
        for &t0 in &grid {
            match outcomes.next().expect("one outcome per task") {
                Ok(e) => {
                    curve.n_max_min = curve.n_max_min.min(e.n_max);
                    curve.n_max_max = curve.n_max_max.max(e.n_max);
                    disc.negativity
                        .update(e.negativity_delta, t0, e.point.q_abs);
                    if let Some(d) = e.mutual_info_delta {
                        disc.mutual_info.get_or_insert_with(Delta::default).update(
                            d,
                            t0,
                            e.point.q_abs,
                        );
                    }
                    curve.points.push(e.point);
                }
                Err(err) => curve.failures.push(PointFailure {
                    t0,
                    error: err.to_string(),
                }),
            }
        }
        if curve.points.is_empty() {
            curve.n_max_min = 0;
        }
        curves.push(curve);
        discrepancies.push(disc);
    }

    let bell = build_rho_av(0.0, 8, config.tail_tol)?;
    let manifest = RunManifest {
        artifact: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        scenarios: curves
            .iter()
            .map(|c| ScenarioSummary {
                index: c.index,
                scenario: c.scenario,
                nu: c.nu,
                n_max_min: c.n_max_min,
                n_max_max: c.n_max_max,
                points: c.points.len(),
                failures: c.failures.clone(),
            })
            .collect(),
        negativity_bell_limit: BellLimit {
            numeric: log_negativity(&bell)?,
            closed_form: log_negativity_closed_form(0.0, 8),
        },
        discrepancies,
        wall_time_s: Some(start.elapsed().as_secs_f64()),
    };
    Ok(SweepResult { curves, manifest })
}
