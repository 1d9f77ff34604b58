//! Parameter sweeps: one row per (axis value, branch), branch continuity by
//! nearest β_s, CSV and JSON emission.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::set_param;
use crate::criticality::{critical_values, multistability_test};
use crate::error::{Error, Result};
use crate::fluctuations::{analyze, FluctuationReport, Method};
use crate::output::{Cell, Table};
use crate::params::{NormalizedParams, SystemParams};
use crate::stability::solve_optimal_detuning;
use crate::steady_state::{operating_branch, solve_branches, SteadyStateBranch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Δ/ω_m
    Detuning,
    /// P_in in W
    InputPower,
    /// λ/ω_m
    Duffing,
    /// G0/κ_c
    OpaGain,
    /// θ in rad
    OpaPhase,
}

impl Axis {
    /// Override key used to apply an axis value.
    pub fn key(&self) -> &'static str {
        match self {
            Axis::Detuning => "detuning_over_omegam",
            Axis::InputPower => "input_power_w",
            Axis::Duffing => "duffing_over_omegam",
            Axis::OpaGain => "opa_gain_over_kappa",
            Axis::OpaPhase => "opa_phase_rad",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [Axis::Detuning, Axis::InputPower, Axis::Duffing, Axis::OpaGain, Axis::OpaPhase]
            .into_iter()
            .find(|a| {
                let name = serde_json::to_value(a).ok();
                a.key() == s || name.as_ref().and_then(Value::as_str) == Some(s)
            })
            .ok_or_else(|| Error::Config(format!("unknown axis `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl AxisRange {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points, scale: Scale::Linear }
    }

    pub fn log(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points, scale: Scale::Log }
    }

    /// `start == stop` is a single-point sweep; otherwise at least two points.
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("range bounds must be finite".into()));
        }
        if self.start != self.stop && self.points < 2 {
            return Err(Error::Config(format!("range needs at least 2 points, got {}", self.points)));
        }
        if self.points == 0 {
            return Err(Error::Config("range needs at least 1 point".into()));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::Config("log scale needs a positive range".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.start == self.stop {
            return vec![self.start];
        }
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                let t = i as f64 / last;
                match (i, self.scale) {
                    (0, _) => self.start,
                    (i, _) if i == n - 1 => self.stop,
                    (_, Scale::Linear) => self.start + t * (self.stop - self.start),
                    (_, Scale::Log) => (self.start.ln() + t * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    #[default]
    None,
    /// Re-solve the bare detuning at every point so that Δ′ = Ω_m.
    OptimalDetuning,
}

/// One curve of a figure: overrides applied on top of the fixed parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesEntry {
    pub label: String,
    /// `(key, value)` pairs, applied in order.
    #[serde(default)]
    pub set: Vec<(String, f64)>,
}

impl SeriesEntry {
    pub fn new(label: impl Into<String>, set: &[(&str, f64)]) -> Self {
        Self {
            label: label.into(),
            set: set.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Sweep description as it appears in a config file (fixed parameters live
/// at the top level of the file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: Axis,
    pub range: AxisRange,
    #[serde(default)]
    pub constraint: Constraint,
    /// Extra columns to emit; empty means all.
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default)]
    pub series: Vec<SeriesEntry>,
    /// Branch index (ascending β_s) used for the fluctuation columns.
    #[serde(default)]
    pub branch: Option<usize>,
    /// Drop axis points whose selected branch has β_s below this.
    #[serde(default)]
    pub min_beta: Option<f64>,
}

impl SweepConfig {
    pub fn with_fixed(self, fixed: SystemParams) -> SweepSpec {
        SweepSpec {
            axis: self.axis,
            range: self.range,
            fixed,
            constraint: self.constraint,
            outputs: self.outputs,
            series: self.series,
            branch: self.branch,
            min_beta: self.min_beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub range: AxisRange,
    pub fixed: SystemParams,
    pub constraint: Constraint,
    pub outputs: Vec<String>,
    pub series: Vec<SeriesEntry>,
    pub branch: Option<usize>,
    pub min_beta: Option<f64>,
}

impl SweepSpec {
    pub fn new(axis: Axis, range: AxisRange, fixed: SystemParams) -> Self {
        Self {
            axis,
            range,
            fixed,
            constraint: Constraint::None,
            outputs: Vec::new(),
            series: Vec::new(),
            branch: None,
            min_beta: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.range.validate()?;
        self.fixed.validate().map_err(|e| Error::Config(e.to_string()))?;
        for o in &self.outputs {
            if !COLUMNS.contains(&o.as_str()) {
                return Err(Error::Config(format!("unknown output column `{o}`")));
            }
        }
        for s in &self.series {
            let mut p = self.fixed.clone();
            for (k, v) in &s.set {
                set_param(&mut p, k, *v)?;
            }
        }
        Ok(())
    }

    /// Columns written for this spec, in order.
    pub fn columns(&self) -> Vec<&'static str> {
        if self.outputs.is_empty() {
            return COLUMNS.to_vec();
        }
        COLUMNS
            .iter()
            .copied()
            .filter(|c| KEY_COLUMNS.contains(c) || self.outputs.iter().any(|o| o == c))
            .collect()
    }
}

/// Every column, in emission order.
pub const COLUMNS: &[&str] = &[
    "series",
    "axis_value",
    "detuning_over_omegam",
    "input_power_w",
    "duffing_over_omegam",
    "opa_gain_over_kappa",
    "opa_phase_rad",
    "branch",
    "trace",
    "n_branches",
    "beta",
    "alpha",
    "intensity",
    "eff_detuning",
    "stable",
    "marginal",
    "max_real",
    "margin_beta",
    "margin_detuning",
    "margin_power",
    "multistable",
    "selected",
    "var_q",
    "var_p",
    "n_eff",
    "t_eff",
    "d_q",
    "d_p",
    "eta",
    "squeeze",
    "beta_large",
    "duffing_small",
    "error",
];

/// Always written, whatever `outputs` selects.
pub const KEY_COLUMNS: &[&str] = &["series", "axis_value", "branch", "trace", "stable", "selected", "error"];

/// One (axis value, branch) result. Nullable columns: everything after
/// `n_branches` on error rows, the critical margins when no critical point
/// exists, and the fluctuation columns on rows that are not the selected
/// stable branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub series: String,
    pub axis_value: f64,
    pub detuning_over_omegam: f64,
    pub input_power_w: f64,
    pub duffing_over_omegam: f64,
    pub opa_gain_over_kappa: f64,
    pub opa_phase_rad: f64,
    pub branch: Option<usize>,
    /// Continuity label shared by the same branch at neighbouring axis values.
    pub trace: Option<usize>,
    pub n_branches: usize,
    pub beta: f64,
    pub alpha: f64,
    pub intensity: f64,
    pub eff_detuning: f64,
    pub stable: Option<bool>,
    pub marginal: Option<bool>,
    pub max_real: f64,
    pub margin_beta: f64,
    pub margin_detuning: f64,
    pub margin_power: f64,
    pub multistable: Option<bool>,
    pub selected: bool,
    pub var_q: f64,
    pub var_p: f64,
    pub n_eff: f64,
    pub t_eff: f64,
    pub d_q: f64,
    pub d_p: f64,
    pub eta: f64,
    pub squeeze: f64,
    pub beta_large: Option<bool>,
    pub duffing_small: Option<bool>,
    pub error: String,
}

impl SweepRow {
    pub fn cell(&self, column: &str) -> Option<Cell> {
        use Cell::*;
        Some(match column {
            "series" => Text(self.series.clone()),
            "axis_value" => Num(self.axis_value),
            "detuning_over_omegam" => Num(self.detuning_over_omegam),
            "input_power_w" => Num(self.input_power_w),
            "duffing_over_omegam" => Num(self.duffing_over_omegam),
            "opa_gain_over_kappa" => Num(self.opa_gain_over_kappa),
            "opa_phase_rad" => Num(self.opa_phase_rad),
            "branch" => Int(self.branch),
            "trace" => Int(self.trace),
            "n_branches" => Int(Some(self.n_branches)),
            "beta" => Num(self.beta),
            "alpha" => Num(self.alpha),
            "intensity" => Num(self.intensity),
            "eff_detuning" => Num(self.eff_detuning),
            "stable" => Bool(self.stable),
            "marginal" => Bool(self.marginal),
            "max_real" => Num(self.max_real),
            "margin_beta" => Num(self.margin_beta),
            "margin_detuning" => Num(self.margin_detuning),
            "margin_power" => Num(self.margin_power),
            "multistable" => Bool(self.multistable),
            "selected" => Bool(Some(self.selected)),
            "var_q" => Num(self.var_q),
            "var_p" => Num(self.var_p),
            "n_eff" => Num(self.n_eff),
            "t_eff" => Num(self.t_eff),
            "d_q" => Num(self.d_q),
            "d_p" => Num(self.d_p),
            "eta" => Num(self.eta),
            "squeeze" => Num(self.squeeze),
            "beta_large" => Bool(self.beta_large),
            "duffing_small" => Bool(self.duffing_small),
            "error" => Text(self.error.clone()),
            _ => return None,
        })
    }

    fn blank(series: &str, x: f64, p: Option<&NormalizedParams>, sp: &SystemParams) -> Self {
        let nan = f64::NAN;
        let (det, power, duff, g0k) = match p {
            Some(p) => (p.detuning, p.input_power(), p.duffing, p.opa_gain / p.kappa),
            None => {
                let w = sp.mech_freq;
                (sp.bare_detuning / w, sp.input_power, sp.duffing / w, sp.opa_gain / sp.kappa_c())
            }
        };
        Self {
            series: series.to_string(),
            axis_value: x,
            detuning_over_omegam: det,
            input_power_w: power,
            duffing_over_omegam: duff,
            opa_gain_over_kappa: g0k,
            opa_phase_rad: sp.opa_phase,
            branch: None,
            trace: None,
            n_branches: 0,
            beta: nan,
            alpha: nan,
            intensity: nan,
            eff_detuning: nan,
            stable: None,
            marginal: None,
            max_real: nan,
            margin_beta: nan,
            margin_detuning: nan,
            margin_power: nan,
            multistable: None,
            selected: false,
            var_q: nan,
            var_p: nan,
            n_eff: nan,
            t_eff: nan,
            d_q: nan,
            d_p: nan,
            eta: nan,
            squeeze: nan,
            beta_large: None,
            duffing_small: None,
            error: String::new(),
        }
    }

    pub fn failed(&self) -> bool {
        !self.error.is_empty()
    }

    fn fill_fluctuations(&mut self, f: &FluctuationReport) {
        self.var_q = f.var_q;
        self.var_p = f.var_p;
        self.n_eff = f.n_eff;
        self.t_eff = f.t_eff;
        self.d_q = f.d_q;
        self.d_p = f.d_p;
        self.eta = f.eta;
        self.squeeze = f.squeeze;
    }
}

/// Parameters at one sweep point, with the constraint applied.
pub fn point_params(spec: &SweepSpec, series: Option<&SeriesEntry>, x: f64) -> Result<(SystemParams, NormalizedParams)> {
    let mut sp = spec.fixed.clone();
    if let Some(s) = series {
        for (k, v) in &s.set {
            set_param(&mut sp, k, *v)?;
        }
    }
    set_param(&mut sp, spec.axis.key(), x)?;
    let mut p = sp.normalize()?;
    if spec.constraint == Constraint::OptimalDetuning {
        p.detuning = solve_optimal_detuning(&p)?.detuning;
        sp.bare_detuning = p.detuning * p.omega_m;
    }
    Ok((sp, p))
}

fn select(spec: &SweepSpec, branches: &[SteadyStateBranch]) -> Option<usize> {
    if let Some(k) = spec.branch {
        return (k < branches.len()).then_some(k);
    }
    if spec.constraint == Constraint::OptimalDetuning {
        // the branch realizing Δ′ = Ω_m
        return branches
            .iter()
            .enumerate()
            .filter(|(_, b)| b.stable)
            .min_by(|a, b| {
                let da = (a.1.eff_detuning - a.1.frame.omega_eff).abs();
                let db = (b.1.eff_detuning - b.1.frame.omega_eff).abs();
                da.total_cmp(&db)
            })
            .map(|(i, _)| i);
    }
    operating_branch(branches)
}

fn point_rows(spec: &SweepSpec, series: Option<&SeriesEntry>, x: f64) -> Vec<SweepRow> {
    let label = series.map(|s| s.label.as_str()).unwrap_or("");
    let (sp, p) = match point_params(spec, series, x) {
        Ok(v) => v,
        Err(e) => {
            let mut sp = spec.fixed.clone();
            if let Some(s) = series {
                for (k, v) in &s.set {
                    let _ = set_param(&mut sp, k, *v);
                }
            }
            let _ = set_param(&mut sp, spec.axis.key(), x);
            let mut row = SweepRow::blank(label, x, None, &sp);
            row.error = e.to_string();
            return vec![row];
        }
    };
    let branches = match solve_branches(&p) {
        Ok(b) => b,
        Err(e) => {
            let mut row = SweepRow::blank(label, x, Some(&p), &sp);
            row.error = e.to_string();
            return vec![row];
        }
    };
    let crit = critical_values(&p).ok();
    let chosen = select(spec, &branches);
    if let Some(min) = spec.min_beta {
        if chosen.is_none_or(|k| branches[k].beta < min) {
            return Vec::new();
        }
    }
    branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut row = SweepRow::blank(label, x, Some(&p), &sp);
            row.branch = Some(i);
            row.n_branches = branches.len();
            row.beta = b.beta;
            row.alpha = b.alpha;
            row.intensity = b.intensity;
            row.eff_detuning = b.eff_detuning;
            row.stable = Some(b.stable);
            row.marginal = Some(b.marginal);
            row.max_real = b.verdict.max_real;
            row.beta_large = Some(b.validity.beta_large);
            row.duffing_small = Some(b.validity.duffing_small);
            if let Some(c) = &crit {
                let m = multistability_test(&p, b, c);
                row.margin_beta = m.beta;
                row.margin_detuning = m.detuning;
                row.margin_power = m.power;
                row.multistable = Some(m.multistable);
            }
            if chosen == Some(i) {
                row.selected = true;
                if b.stable {
                    match analyze(b, &p, Method::Lyapunov) {
                        Ok(f) => row.fill_fluctuations(&f),
                        Err(e) => row.error = e.to_string(),
                    }
                }
            }
            row
        })
        .collect()
}

/// Greedy nearest-β_s matching between consecutive axis points of one series.
fn assign_traces(points: &mut [Vec<SweepRow>]) {
    let mut prev: Vec<(usize, f64)> = Vec::new();
    let mut next_label = 0;
    for rows in points.iter_mut() {
        let live: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].branch.is_some()).collect();
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for &i in &live {
            for (j, (_, beta)) in prev.iter().enumerate() {
                pairs.push(((rows[i].beta - beta).abs(), i, j));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut row_done = vec![false; rows.len()];
        let mut prev_done = vec![false; prev.len()];
        for (_, i, j) in pairs {
            if !row_done[i] && !prev_done[j] {
                rows[i].trace = Some(prev[j].0);
                row_done[i] = true;
                prev_done[j] = true;
            }
        }
        for &i in &live {
            if rows[i].trace.is_none() {
                rows[i].trace = Some(next_label);
                next_label += 1;
            }
        }
        next_label = next_label.max(live.iter().filter_map(|&i| rows[i].trace).max().map_or(0, |m| m + 1));
        if !live.is_empty() {
            prev = live.iter().map(|&i| (rows[i].trace.unwrap_or(0), rows[i].beta)).collect();
        }
    }
}

/// Evaluate every (series, axis value) point in parallel. Rows come back
/// grouped by series, then ascending in axis value, then by branch.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let xs = spec.range.values();
    let series: Vec<Option<&SeriesEntry>> = if spec.series.is_empty() {
        vec![None]
    } else {
        spec.series.iter().map(Some).collect()
    };
    let jobs: Vec<(usize, usize)> = (0..series.len()).flat_map(|s| (0..xs.len()).map(move |i| (s, i))).collect();
    let mut results: Vec<Vec<SweepRow>> = jobs
        .par_iter()
        .map(|&(s, i)| point_rows(spec, series[s], xs[i]))
        .collect();
    let mut rows = Vec::new();
    for chunk in results.chunks_mut(xs.len()) {
        assign_traces(chunk);
        for r in chunk.iter_mut() {
            rows.append(r);
        }
    }
    Ok(rows)
}

/// True when there was at least one point and every point failed.
pub fn all_failed(rows: &[SweepRow]) -> bool {
    !rows.is_empty() && rows.iter().all(|r| r.failed() && r.branch.is_none())
}

pub fn table(rows: &[SweepRow], columns: &[&str]) -> Table {
    let mut t = Table::new(columns);
    for r in rows {
        t.push(columns.iter().map(|c| r.cell(c).unwrap_or(Cell::Text(String::new()))).collect());
    }
    t
}

pub fn write_csv<W: Write>(rows: &[SweepRow], columns: &[&str], out: W) -> Result<()> {
    table(rows, columns).write_csv(out)
}

pub fn to_json(rows: &[SweepRow], columns: &[&str]) -> Value {
    table(rows, columns).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_params;

    #[test]
    fn range_values() {
        let r = AxisRange::linear(0.0, 3.0, 4);
        assert_eq!(r.values(), vec![0.0, 1.0, 2.0, 3.0]);
        let l = AxisRange::log(1e-12, 1e-2, 11).values();
        assert_eq!(l.len(), 11);
        assert_eq!(l[0], 1e-12);
        assert_eq!(l[10], 1e-2);
        assert!((l[5] / 1e-7 - 1.0).abs() < 1e-12);
        assert_eq!(AxisRange::linear(2.0, 2.0, 1).values(), vec![2.0]);
    }

    #[test]
    fn range_validation() {
        assert!(AxisRange::linear(0.0, 1.0, 1).validate().is_err());
        assert!(AxisRange::log(0.0, 1.0, 5).validate().is_err());
        assert!(AxisRange::linear(0.0, f64::INFINITY, 5).validate().is_err());
        assert!(AxisRange::linear(1.0, 1.0, 1).validate().is_ok());
    }

    #[test]
    fn axis_names() {
        assert_eq!(Axis::parse("duffing").unwrap(), Axis::Duffing);
        assert_eq!(Axis::parse("input_power_w").unwrap(), Axis::InputPower);
        assert!(Axis::parse("temperature").is_err());
    }

    #[test]
    fn traces_follow_nearest_beta() {
        let row = |beta: f64, k: usize| {
            let mut r = SweepRow::blank("", 0.0, None, &default_params());
            r.beta = beta;
            r.branch = Some(k);
            r
        };
        let mut pts = vec![
            vec![row(1.0, 0)],
            vec![row(1.1, 0), row(5.0, 1), row(9.0, 2)],
            vec![row(5.2, 0), row(9.5, 1)],
        ];
        assert_eq!(pts[0][0].trace, None);
        assign_traces(&mut pts);
        assert_eq!(pts[0][0].trace, Some(0));
        assert_eq!(pts[1].iter().map(|r| r.trace).collect::<Vec<_>>(), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(pts[2].iter().map(|r| r.trace).collect::<Vec<_>>(), vec![Some(1), Some(2)]);
    }

    #[test]
    fn output_selection_keeps_key_columns() {
        let mut s = SweepSpec::new(Axis::Detuning, AxisRange::linear(0.0, 1.0, 2), default_params());
        s.outputs = vec!["beta".into()];
        let c = s.columns();
        assert!(c.contains(&"beta") && c.contains(&"series") && c.contains(&"error"));
        assert!(!c.contains(&"alpha"));
        s.outputs = vec!["bogus".into()];
        assert!(s.validate().is_err());
    }
}
