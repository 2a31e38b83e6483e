//! Time evolution of the Horodecki family, witness scans, and detection of
//! distillability sudden death (DSD) and sudden birth (DSB).
//!
//! Time is dimensionless, `t = gamma * tau`, and both excited levels of both
//! qutrits decay with `p(t) = 1 - exp(-2t)`.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{apply_two_sided, ChannelParams, ChannelVariant, AS_WRITTEN_SLACK};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::states::{horodecki_state, HorodeckiParam};
use crate::witnesses::{witness_report, WitnessReport, ZERO_BAND};

/// Last time at which the as-written channel is CPTP (`2 p(t) = 1`).
pub const AS_WRITTEN_T_MAX: f64 = LN_2 / 2.0;

pub const DEFAULT_REFINE_TOL: f64 = 1e-5;

/// Decay probability `1 - exp(-2t)`.
pub fn p_of_t(t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Parameter {
            name: "t",
            value: t,
            allowed: "[0, inf)",
        });
    }
    Ok(-(-2.0 * t).exp_m1())
}

/// `rho_alpha(t)` under identical local channels on both qutrits.
pub fn evolve_at(alpha: f64, r: f64, variant: ChannelVariant, t: f64) -> Result<DensityMatrix> {
    let param = HorodeckiParam::new(alpha)?;
    let p = p_of_t(t)?;
    if variant == ChannelVariant::AsWritten && 2.0 * p > 1.0 + AS_WRITTEN_SLACK {
        return Err(Error::BeyondValidity {
            t,
            bound: AS_WRITTEN_T_MAX,
        });
    }
    let params = ChannelParams::symmetric(r, p, variant)?;
    apply_two_sided(&horodecki_state(param), &params, &params)
}

/// Witnesses of `rho_alpha(t)` together with `p(t)`.
pub fn report_at(alpha: f64, r: f64, variant: ChannelVariant, t: f64) -> Result<(f64, WitnessReport)> {
    let rho = evolve_at(alpha, r, variant, t)?;
    Ok((p_of_t(t)?, witness_report(&rho)?))
}

/// `steps` evenly spaced points from `start` to `end`, both included.
pub fn linspace(start: f64, end: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![start],
        _ => {
            let h = (end - start) / (steps - 1) as f64;
            (0..steps)
                .map(|k| if k + 1 == steps { end } else { start + h * k as f64 })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub alpha: f64,
    pub r: f64,
    pub variant: ChannelVariant,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub refine_tol: f64,
}

impl ScanConfig {
    pub fn new(alpha: f64, r: f64, variant: ChannelVariant, t_start: f64, t_end: f64, steps: usize) -> Self {
        Self {
            alpha,
            r,
            variant,
            t_start,
            t_end,
            steps,
            refine_tol: DEFAULT_REFINE_TOL,
        }
    }

    pub fn with_refine_tol(mut self, refine_tol: f64) -> Self {
        self.refine_tol = refine_tol;
        self
    }

    /// Structural checks first (grid shape), then physical domain checks.
    pub fn validate(&self) -> Result<()> {
        if !(self.t_start < self.t_end) || !self.t_end.is_finite() {
            return Err(Error::Config(format!(
                "t_start ({}) must be below a finite t_end ({})",
                self.t_start, self.t_end
            )));
        }
        if self.steps < 2 {
            return Err(Error::Config(format!("steps must be at least 2, got {}", self.steps)));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return Err(Error::Config(format!(
                "refine_tol must be positive, got {}",
                self.refine_tol
            )));
        }
        HorodeckiParam::new(self.alpha)?;
        ChannelParams::symmetric(self.r, 0.0, self.variant)?;
        p_of_t(self.t_start)?;
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        linspace(self.t_start, self.t_end, self.steps)
    }

    fn report(&self, t: f64) -> Result<WitnessReport> {
        report_at(self.alpha, self.r, self.variant, t).map(|(_, w)| w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimePoint {
    pub t: f64,
    pub p: f64,
    pub report: WitnessReport,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TimeSeries {
    pub points: Vec<TimePoint>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check_monotone(&self) -> Result<()> {
        if let Some(k) = self.points.windows(2).position(|w| !(w[0].t < w[1].t)) {
            return Err(Error::NonMonotone { index: k + 1 });
        }
        Ok(())
    }
}

fn at_cell(alpha: f64, t: f64) -> impl FnOnce(Error) -> Error {
    move |source| Error::AtCell {
        alpha,
        t,
        source: Box::new(source),
    }
}

/// Evaluates the witnesses on the uniform grid of `config`. Points are
/// computed in parallel but returned in time order; on failure the error
/// names the earliest offending time.
pub fn scan(config: &ScanConfig) -> Result<TimeSeries> {
    config.validate()?;
    let results: Vec<Result<TimePoint>> = config
        .times()
        .into_par_iter()
        .map(|t| {
            report_at(config.alpha, config.r, config.variant, t)
                .map(|(p, report)| TimePoint { t, p, report })
                .map_err(at_cell(config.alpha, t))
        })
        .collect();
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries { points })
}

/// Which witness a crossing refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Crossing of the negativity through the [`ZERO_BAND`].
    Negativity,
    /// Sign change of the realignment value.
    Ccnr,
    /// Sign change of the smallest partial-transpose eigenvalue.
    LambdaMin,
}

impl Witness {
    /// The "on" side: NPT, realignment positive, or negative eigenvalue.
    fn active(self, report: &WitnessReport) -> bool {
        match self {
            Witness::Negativity => report.negativity > ZERO_BAND,
            Witness::Ccnr => report.ccnr > 0.0,
            Witness::LambdaMin => report.lambda_min < 0.0,
        }
    }
}

/// A refined switch of a witness between two times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Latest time known to be on the `before` side.
    pub t_lo: f64,
    /// Earliest time known to be on the other side.
    pub t_hi: f64,
    /// Whether the witness was active before the crossing.
    pub was_active: bool,
}

impl Crossing {
    pub fn t(&self) -> f64 {
        0.5 * (self.t_lo + self.t_hi)
    }
}

/// Shrinks `[lo, hi]` until it is at most `tol` wide, keeping
/// `active(lo) == was_active` and `active(hi) != was_active`.
fn bisect(
    config: &ScanConfig,
    witness: Witness,
    mut lo: f64,
    mut hi: f64,
    was_active: bool,
) -> Result<Crossing> {
    while hi - lo > config.refine_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let report = config.report(mid).map_err(at_cell(config.alpha, mid))?;
        if witness.active(&report) == was_active {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Crossing {
        t_lo: lo,
        t_hi: hi,
        was_active,
    })
}

/// Refined crossings of `witness` restricted to `[from, to]`, using the
/// series points inside that interval plus its two ends as the coarse grid.
fn crossings_between(
    series: &TimeSeries,
    config: &ScanConfig,
    witness: Witness,
    from: (f64, WitnessReport),
    to: (f64, WitnessReport),
) -> Result<Vec<Crossing>> {
    let mut samples = vec![from];
    samples.extend(
        series
            .points
            .iter()
            .filter(|pt| pt.t > from.0 && pt.t < to.0)
            .map(|pt| (pt.t, pt.report)),
    );
    if to.0 > from.0 {
        samples.push(to);
    }
    let mut out = Vec::new();
    for pair in samples.windows(2) {
        let (t0, r0) = pair[0];
        let (t1, r1) = pair[1];
        let a0 = witness.active(&r0);
        if a0 != witness.active(&r1) {
            out.push(bisect(config, witness, t0, t1, a0)?);
        }
    }
    Ok(out)
}

/// All refined crossings of `witness` over the whole series.
pub fn zero_crossings(series: &TimeSeries, config: &ScanConfig, witness: Witness) -> Result<Vec<Crossing>> {
    series.check_monotone()?;
    let (Some(first), Some(last)) = (series.points.first(), series.points.last()) else {
        return Ok(Vec::new());
    };
    crossings_between(
        series,
        config,
        witness,
        (first.t, first.report),
        (last.t, last.report),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// NPT to PPT.
    #[serde(rename = "DSD")]
    Dsd,
    /// PPT to NPT.
    #[serde(rename = "DSB")]
    Dsb,
    /// PPT and the realignment value is positive: bound entanglement certified.
    #[serde(rename = "ccnr_positive")]
    CcnrPositiveWindow,
    /// PPT and the realignment value is not positive: no witness fires.
    #[serde(rename = "undetected")]
    UndetectedWindow,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Dsd => "DSD",
            EventKind::Dsb => "DSB",
            EventKind::CcnrPositiveWindow => "ccnr_positive",
            EventKind::UndetectedWindow => "undetected",
        }
    }

    fn is_transition(self) -> bool {
        matches!(self, EventKind::Dsd | EventKind::Dsb)
    }
}

/// A classified interval. Transitions (DSD/DSB) are reported as the final
/// bisection bracket, at most `refine_tol` wide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventWindow {
    pub kind: EventKind,
    pub t_start: f64,
    pub t_end: f64,
}

/// Classifies a scan into DSD/DSB transitions and, on every PPT stretch,
/// into realignment-detected and undetected windows. Transition times are
/// refined by bisection on the evolution itself; windows still open at the
/// end of the scan end at `t_end` of the series.
pub fn detect_events(series: &TimeSeries, config: &ScanConfig) -> Result<Vec<EventWindow>> {
    let transitions = zero_crossings(series, config, Witness::Negativity)?;
    let (Some(first), Some(last)) = (series.points.first(), series.points.last()) else {
        return Ok(Vec::new());
    };

    let mut events: Vec<EventWindow> = transitions
        .iter()
        .map(|c| EventWindow {
            kind: if c.was_active { EventKind::Dsd } else { EventKind::Dsb },
            t_start: c.t_lo,
            t_end: c.t_hi,
        })
        .collect();

    // PPT stretches: [start, end] bounded by transitions or the scan ends.
    let mut stretches = Vec::new();
    let mut open = (!first.report.is_npt()).then_some(first.t);
    for c in &transitions {
        match (c.was_active, open) {
            (true, _) => open = Some(c.t()),
            (false, Some(start)) => {
                stretches.push((start, c.t()));
                open = None;
            }
            (false, None) => {}
        }
    }
    if let Some(start) = open {
        stretches.push((start, last.t));
    }

    for (start, end) in stretches {
        let at = |t: f64| -> Result<(f64, WitnessReport)> {
            match series.points.iter().find(|pt| pt.t == t) {
                Some(pt) => Ok((t, pt.report)),
                None => Ok((t, config.report(t).map_err(at_cell(config.alpha, t))?)),
            }
        };
        let from = at(start)?;
        let to = at(end)?;
        let mut detected = from.1.ccnr > 0.0;
        let mut window_start = start;
        for c in crossings_between(series, config, Witness::Ccnr, from, to)? {
            events.push(EventWindow {
                kind: window_kind(detected),
                t_start: window_start,
                t_end: c.t(),
            });
            window_start = c.t();
            detected = !c.was_active;
        }
        events.push(EventWindow {
            kind: window_kind(detected),
            t_start: window_start,
            t_end: end,
        });
    }

    events.sort_by(|a, b| {
        a.t_start
            .total_cmp(&b.t_start)
            .then_with(|| b.kind.is_transition().cmp(&a.kind.is_transition()))
    });
    Ok(events)
}

fn window_kind(detected: bool) -> EventKind {
    if detected {
        EventKind::CcnrPositiveWindow
    } else {
        EventKind::UndetectedWindow
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRow {
    pub alpha: f64,
    pub t: f64,
    pub p: f64,
    pub lambda_min: f64,
}

fn check_ascending(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config(format!("{name} grid is not strictly ascending")));
    }
    Ok(())
}

/// Smallest partial-transpose eigenvalue over the Cartesian product of the
/// two grids, rows ordered alpha-major, t-minor.
pub fn sweep_surface(
    alpha_grid: &[f64],
    r: f64,
    variant: ChannelVariant,
    t_grid: &[f64],
) -> Result<Vec<SurfaceRow>> {
    check_ascending("alpha", alpha_grid)?;
    check_ascending("t", t_grid)?;
    let cells: Vec<(f64, f64)> = alpha_grid
        .iter()
        .flat_map(|&alpha| t_grid.iter().map(move |&t| (alpha, t)))
        .collect();
    cells
        .into_par_iter()
        .map(|(alpha, t)| {
            let (p, report) = report_at(alpha, r, variant, t).map_err(at_cell(alpha, t))?;
            Ok(SurfaceRow {
                alpha,
                t,
                p,
                lambda_min: report.lambda_min,
            })
        })
        .collect::<Vec<Result<SurfaceRow>>>()
        .into_iter()
        .collect()
}
