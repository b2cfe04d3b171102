//! Parameter grids over the full model.
//!
//! Cells are independent; an executor decides how they are scheduled, and
//! results are always collected in row-major cell order.

use alloc::{string::String, vec::Vec};

// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::models::{build_full_model, FullModelParams};
use crate::observables::{
    concurrence_with, default_tau_max, extract_timescale, g2_trace, g2_zero, ConcurrenceVariant,
    DEFAULT_SAMPLES,
};
use crate::{Error, Result};

/// Minimum number of usable cells for [`correlation_stats`].
pub const MIN_CORRELATION_CELLS: usize = 9;

/// One swept parameter, sampled inclusively and linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, min: f64, max: f64, n_points: usize) -> Result<Self> {
        let axis = Self {
            name: name.into(),
            min,
            max,
            n_points,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if !FullModelParams::REAL_FIELDS.contains(&self.name.as_str()) {
            return Err(Error::param(&self.name, "not a sweepable model parameter"));
        }
        if self.n_points < 2 {
            return Err(Error::param(&self.name, "axis needs at least two points"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::param(&self.name, "axis needs finite min < max"));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            return self.max;
        }
        self.min + (self.max - self.min) * k as f64 / (self.n_points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.value(k)).collect()
    }
}

/// Which observables each cell computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObservableSet {
    pub concurrence: bool,
    pub g2_zero: bool,
    pub timescale: bool,
}

impl Default for ObservableSet {
    fn default() -> Self {
        Self {
            concurrence: true,
            g2_zero: true,
            timescale: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub base: FullModelParams,
    pub observables: ObservableSet,
    /// τ samples for timescale cells.
    pub n_samples: usize,
    /// Fixed τ range for timescale cells; per-cell default when `None`.
    pub tau_max: Option<f64>,
    pub concurrence_variant: ConcurrenceVariant,
}

impl GridSpec {
    pub fn new(axis1: Axis, axis2: Option<Axis>, base: FullModelParams) -> Self {
        Self {
            axis1,
            axis2,
            base,
            observables: ObservableSet::default(),
            n_samples: DEFAULT_SAMPLES,
            tau_max: None,
            concurrence_variant: ConcurrenceVariant::Standard,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        if let Some(axis2) = &self.axis2 {
            axis2.validate()?;
            if axis2.name == self.axis1.name {
                return Err(Error::param(&axis2.name, "both axes sweep the same parameter"));
            }
        }
        self.base.validate()
    }

    pub fn shape(&self) -> (usize, usize) {
        (
            self.axis1.n_points,
            self.axis2.as_ref().map_or(1, |a| a.n_points),
        )
    }

    pub fn cell_count(&self) -> usize {
        let (r, c) = self.shape();
        r * c
    }

    /// Axis values and parameters of cell `index` (row-major, axis1 slowest).
    pub fn cell(&self, index: usize) -> Result<(f64, Option<f64>, FullModelParams)> {
        let (_, cols) = self.shape();
        let (i, j) = (index / cols, index % cols);
        let mut p = self.base.clone();
        let x = self.axis1.value(i);
        p.set(&self.axis1.name, x)?;
        let y = match &self.axis2 {
            Some(axis2) => {
                let y = axis2.value(j);
                p.set(&axis2.name, y)?;
                Some(y)
            }
            None => None,
        };
        Ok((x, y, p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub concurrence: Option<f64>,
    pub g2_zero: Option<f64>,
    pub period_native: Option<f64>,
    pub period_seconds: Option<f64>,
    /// Tag of the first error met in this cell.
    pub error: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepMetadata {
    pub spec: GridSpec,
    pub n_max: usize,
    /// Wall-clock per cell in seconds; zero when the executor has no clock.
    pub cell_seconds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    /// `(rows, cols)` of the grid.
    pub fn shape(&self) -> (usize, usize) {
        self.metadata.spec.shape()
    }

    pub fn failed_cells(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Schedules independent cell computations.
pub trait CellExecutor {
    /// Runs `cell(0..count)` and returns `(result, seconds)` in index order.
    fn execute<T, F>(&self, count: usize, cell: F) -> Vec<(T, f64)>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// In-order execution on the calling thread, without timing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl CellExecutor for Sequential {
    fn execute<T, F>(&self, count: usize, cell: F) -> Vec<(T, f64)>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(|i| (cell(i), 0.0)).collect()
    }
}

pub fn run_sweep(spec: &GridSpec) -> Result<SweepResult> {
    run_sweep_with(spec, &Sequential)
}

pub fn run_sweep_with<E: CellExecutor>(spec: &GridSpec, executor: &E) -> Result<SweepResult> {
    spec.validate()?;
    if spec.observables.timescale {
        crate::observables::tau_grid(spec.tau_max.unwrap_or(1.0), spec.n_samples)?;
    }
    // every cell parameter set is checked before any work starts
    for index in 0..spec.cell_count() {
        spec.cell(index)?.2.validate()?;
    }
    let outcomes = executor.execute(spec.cell_count(), |index| {
        let (axis1, axis2, params) = spec.cell(index).expect("validated above");
        evaluate_cell(spec, axis1, axis2, &params)
    });
    let (rows, cell_seconds) = outcomes.into_iter().unzip();
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata {
            spec: spec.clone(),
            n_max: spec.base.n_max,
            cell_seconds,
        },
    })
}

fn evaluate_cell(spec: &GridSpec, axis1: f64, axis2: Option<f64>, params: &FullModelParams) -> SweepRow {
    let mut row = SweepRow {
        axis1,
        axis2,
        concurrence: None,
        g2_zero: None,
        period_native: None,
        period_seconds: None,
        error: None,
    };
    if let Err(e) = fill_cell(spec, params, &mut row) {
        row.error = Some(e.tag());
    }
    row
}

fn fill_cell(spec: &GridSpec, params: &FullModelParams, row: &mut SweepRow) -> Result<()> {
    let model = build_full_model(params)?;
    let l = model.liouvillian()?;
    let rho = l.steady_state()?;
    let wanted = spec.observables;
    if wanted.concurrence {
        let qubits = rho.partial_trace(&[0, 1])?;
        row.concurrence = Some(concurrence_with(&qubits, spec.concurrence_variant)?.value);
    }
    if wanted.g2_zero {
        row.g2_zero = Some(g2_zero(&l, &rho)?);
    }
    if wanted.timescale {
        let tau_max = match spec.tau_max {
            Some(t) => t,
            None => default_tau_max(params)?,
        };
        let trace = g2_trace(&l, &rho, tau_max, spec.n_samples)?;
        let ts = extract_timescale(&trace, params.gamma_a_abs)?;
        row.period_native = Some(ts.period_native);
        row.period_seconds = Some(ts.period_seconds);
    }
    Ok(())
}

/// Pearson correlation of g²(0) against concurrence over cells with both.
pub fn correlation_stats(result: &SweepResult) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = result
        .rows
        .iter()
        .filter_map(|r| Some((r.g2_zero?, r.concurrence?)))
        .unzip();
    pearson(&xs, &ys)
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InsufficientData("columns differ in length".into()));
    }
    if xs.len() < MIN_CORRELATION_CELLS {
        return Err(Error::InsufficientData(alloc::format!(
            "{} valid cells, need {MIN_CORRELATION_CELLS}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if !(sxx > 0.0 && syy > 0.0) {
        return Err(Error::InsufficientData("zero variance column".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
