//! Perturbation experiments and the witness report.
//!
//! A trial replaces phi by g phi for a matrix g = I mod p^level and
//! recomputes the Newton polygon. Each trial draws from its own stream
//! `SplitMix64::for_trial(seed, index)`, so trials can run in any order and
//! the report is assembled by trial index.

use std::sync::Arc;

use serde::Serialize;

use crate::constructions::{build_traverso_witness, witness_twist};
use crate::error::{Error, Result};
use crate::formula_one::np_via_cyclic_vector;
use crate::matrix::Matrix;
use crate::newton::{np_of_module, CutoffBounds, NewtonPolygon, Slope};
use crate::rng::SplitMix64;
use crate::sigma_modules::DieudonneModule;
use crate::witt_ring::{RingParams, Valuation, WittRing};

pub const REPORT_SCHEMA: &str = "dvg-report/1";

/// Wall clock for reports; reads 0 where no clock is available.
struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed_ms(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed().as_millis() as u64;
        #[cfg(target_arch = "wasm32")]
        0
    }
}

/// Candidates tried when looking for a cyclic vector.
pub const CYCLIC_VECTOR_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subject {
    pub provenance: String,
    pub c: u32,
    pub d: u32,
    pub p: u64,
    pub deg: usize,
    pub precision: u32,
}

impl Subject {
    pub fn of(module: &DieudonneModule, provenance: &str) -> Self {
        let ring = module.ring();
        Self {
            provenance: provenance.to_string(),
            c: module.codim(),
            d: module.dim(),
            p: ring.p(),
            deg: ring.deg(),
            precision: ring.precision(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    /// Whether g was supplied by the caller instead of sampled.
    pub injected: bool,
    pub polygon: NewtonPolygon,
    pub differs: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AllStable,
    CounterexampleFound,
}

/// The deterministic part of an experiment report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportBody {
    pub schema: &'static str,
    pub subject: Subject,
    pub level: u32,
    pub trials: u64,
    pub seed: u64,
    pub subject_np: NewtonPolygon,
    pub outcomes: Vec<TrialOutcome>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub body: ReportBody,
    pub wall_time_ms: u64,
}

impl ExperimentReport {
    pub fn verdict(&self) -> Verdict {
        self.body.verdict
    }

    /// Canonical serialization of the body; identical inputs give identical bytes.
    pub fn body_json(&self) -> String {
        serde_json::to_string(&self.body).expect("report body serializes")
    }
}

/// Runs `trials` seeded perturbations of `module` at `level`.
pub fn verify_cutoff_upper(
    module: &DieudonneModule,
    provenance: &str,
    level: u32,
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    verify_cutoff_upper_with(module, provenance, level, trials, seed, &[])
}

/// As [`verify_cutoff_upper`], with the first trials using the supplied
/// matrices, each of which must be congruent to I modulo p^level.
pub fn verify_cutoff_upper_with(
    module: &DieudonneModule,
    provenance: &str,
    level: u32,
    trials: u64,
    seed: u64,
    injected: &[Matrix],
) -> Result<ExperimentReport> {
    let start = Stopwatch::start();
    let ring = module.ring();
    module.check_perturbation_level(level)?;
    if injected.len() as u64 > trials {
        return Err(Error::InvalidParams(format!(
            "{} injected perturbations exceed {trials} trials",
            injected.len()
        )));
    }
    let identity = Matrix::identity(ring, module.rank());
    for g in injected {
        if g.rows() != module.rank() || !g.is_square() {
            return Err(Error::InvalidParams(
                "injected perturbation has the wrong shape".into(),
            ));
        }
        if g.congruence_level(&identity, ring) < level.min(ring.precision()) {
            return Err(Error::InvalidParams(format!(
                "injected perturbation is not congruent to I mod p^{level}"
            )));
        }
    }
    let subject_np = np_of_module(module)?;

    let run = |index: u64| -> Result<TrialOutcome> {
        let (perturbed, is_injected) = match injected.get(index as usize) {
            Some(g) => (module.apply_perturbation(g)?, true),
            None => {
                let mut rng = SplitMix64::for_trial(seed, index);
                (module.perturb_with(level, &mut rng)?.0, false)
            }
        };
        let polygon = np_of_module(&perturbed)?;
        let differs = polygon != subject_np;
        Ok(TrialOutcome {
            trial: index,
            injected: is_injected,
            polygon,
            differs,
        })
    };

    #[cfg(feature = "parallel")]
    let outcomes: Vec<TrialOutcome> = {
        use rayon::prelude::*;
        (0..trials)
            .into_par_iter()
            .map(run)
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<TrialOutcome> = (0..trials).map(run).collect::<Result<_>>()?;

    let verdict = if outcomes.iter().any(|o| o.differs) {
        Verdict::CounterexampleFound
    } else {
        Verdict::AllStable
    };
    log::debug!("{trials} trials at level {level}: {verdict:?}");
    Ok(ExperimentReport {
        body: ReportBody {
            schema: REPORT_SCHEMA,
            subject: Subject::of(module, provenance),
            level,
            trials,
            seed,
            subject_np,
            outcomes,
            verdict,
        },
        wall_time_ms: start.elapsed_ms(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessOptions {
    pub p: u64,
    pub deg: usize,
    /// Defaults to deg * d + j + 4.
    pub precision: Option<u32>,
    /// Random level-(j-1) trials reported alongside the injected twist.
    pub observational_trials: u64,
    pub seed: u64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            p: 2,
            deg: 1,
            precision: None,
            observational_trials: 20,
            seed: 0,
        }
    }
}

pub fn default_precision(c: u32, d: u32, deg: usize) -> u32 {
    deg as u32 * d + CutoffBounds::new(c, d).j + 4
}

/// A polygon computed both by linearization and by a cyclic vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleEntry {
    pub linearization: NewtonPolygon,
    pub cyclic_vector: NewtonPolygon,
    pub qx_valuations: Vec<Valuation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessChecks {
    /// The phi-matrices agree mod p^(j-1).
    pub congruent: bool,
    /// They do not agree mod p^j.
    pub sharp: bool,
    pub polygons_differ: bool,
    pub routes_agree: bool,
    pub base_as_expected: bool,
    pub twisted_as_expected: bool,
    /// The twisted polygon passes through (c, j - 1).
    pub breakpoint_at_c: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.congruent
            && self.sharp
            && self.polygons_differ
            && self.routes_agree
            && self.base_as_expected
            && self.twisted_as_expected
            && self.breakpoint_at_c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessBody {
    pub schema: &'static str,
    pub bounds: CutoffBounds,
    pub p: u64,
    pub deg: usize,
    pub precision: u32,
    pub congruence_level: u32,
    pub base: DoubleEntry,
    pub twisted: DoubleEntry,
    pub expected_base: NewtonPolygon,
    pub expected_twisted: NewtonPolygon,
    pub checks: WitnessChecks,
    /// Level-(j-1) perturbations of the base, the twist injected as trial 0.
    pub experiment: ReportBody,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub body: WitnessBody,
    pub wall_time_ms: u64,
    #[serde(skip)]
    pub base: DieudonneModule,
    #[serde(skip)]
    pub twisted: DieudonneModule,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.body.checks.all() && self.body.experiment.verdict == Verdict::CounterexampleFound
    }
}

fn double_entry(module: &DieudonneModule) -> Result<DoubleEntry> {
    let linearization = np_of_module(module)?;
    let (_, qx) = np_via_cyclic_vector(module, CYCLIC_VECTOR_BUDGET)?;
    Ok(DoubleEntry {
        linearization,
        cyclic_vector: qx.polygon,
        qx_valuations: qx.valuations,
    })
}

/// Builds the witness pair for (c, d) and records both polygons of each
/// module, the expected polygons and the consistency checks.
pub fn witness_lower(c: u32, d: u32, options: WitnessOptions) -> Result<WitnessReport> {
    let start = Stopwatch::start();
    if c == 0 || d == 0 || CutoffBounds::new(c, d).j < 2 {
        return Err(Error::JTooSmall { c, d });
    }
    let precision = options
        .precision
        .unwrap_or_else(|| default_precision(c, d, options.deg));
    let ring = Arc::new(WittRing::new(RingParams::new(
        options.p,
        options.deg,
        precision,
    ))?);
    let pair = build_traverso_witness(&ring, c, d)?;
    let j = pair.bounds.j;

    let base = double_entry(&pair.base)?;
    let twisted = double_entry(&pair.twisted)?;
    let level = pair.twisted.phi().congruence_level(pair.base.phi(), &ring);
    let at_c = twisted.linearization.eval(Slope::from_integer(c as i64));
    let checks = WitnessChecks {
        congruent: level >= j - 1,
        sharp: level < j,
        polygons_differ: base.linearization != twisted.linearization,
        routes_agree: base.linearization == base.cyclic_vector
            && twisted.linearization == twisted.cyclic_vector,
        base_as_expected: base.linearization == pair.expected_base_np,
        twisted_as_expected: twisted.linearization == pair.expected_twisted_np,
        breakpoint_at_c: at_c == Slope::from_integer((j - 1) as i64),
    };
    if !checks.all() {
        log::warn!("witness checks failed for ({c}, {d}): {checks:?}");
    }

    let twist = witness_twist(&ring, c, d)?;
    let experiment = verify_cutoff_upper_with(
        &pair.base,
        "traverso-witness-base",
        j - 1,
        1 + options.observational_trials,
        options.seed,
        &[twist],
    )?;

    Ok(WitnessReport {
        body: WitnessBody {
            schema: REPORT_SCHEMA,
            bounds: pair.bounds,
            p: options.p,
            deg: options.deg,
            precision,
            congruence_level: pair.congruence_level,
            base,
            twisted,
            expected_base: pair.expected_base_np,
            expected_twisted: pair.expected_twisted_np,
            checks,
            experiment: experiment.body,
        },
        wall_time_ms: start.elapsed_ms(),
        base: pair.base,
        twisted: pair.twisted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundsRow {
    #[serde(flatten)]
    pub bounds: CutoffBounds,
    pub witness_available: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsTable {
    pub rows: Vec<BoundsRow>,
}

/// Bounds for every 1 <= c <= c_max, 1 <= d <= d_max.
pub fn run_table(c_max: u32, d_max: u32) -> Result<BoundsTable> {
    if c_max == 0 || d_max == 0 {
        return Err(Error::InvalidParams(
            "table bounds must be at least 1".into(),
        ));
    }
    let rows = (1..=c_max)
        .flat_map(|c| (1..=d_max).map(move |d| CutoffBounds::new(c, d)))
        .map(|bounds| BoundsRow {
            bounds,
            witness_available: bounds.witness_available(),
        })
        .collect();
    Ok(BoundsTable { rows })
}
