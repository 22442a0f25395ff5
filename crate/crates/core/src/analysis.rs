//! Parameter sweeps behind the ξ(τ), region-map and efficiency curves, the
//! density-matrix fixture comparison and the Otto crossing point.
//!
//! Every grid cell is computed independently (in parallel) and rows are
//! assembled in grid order, so tables are bit-identical across runs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures::reference_states;
use crate::otto::{eta_otto, evaluate, CyclePoint, Regime};
use crate::propagator::{xi, RampPair, RampProtocol};
use crate::qspin::{beta_from_population, gibbs_state, stroke_hamiltonian, ComplexMat2, DensityMatrix, ReservoirSpec, StrokeKind};

/// Entrywise tolerance for two-decimal printed matrices.
pub const PRINT_TOL: f64 = 0.005;
/// Tolerance on reproduced fidelities.
pub const FIDELITY_TOL: f64 = 0.002;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// Undefined value (e.g. efficiency of a non-engine point).
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<Regime> for Cell {
    fn from(r: Regime) -> Self {
        Cell::Text(r.label().to_string())
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: BTreeMap<String, String>,
}

impl SweepTable {
    fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new(), metadata: BTreeMap::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// Numeric column; empty and text cells become `None`.
    pub fn numbers(&self, name: &str) -> Option<Vec<Option<f64>>> {
        Some(self.column(name)?.into_iter().map(Cell::as_f64).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => format_number(*x),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            }))
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    /// Parses CSV written by [`SweepTable::to_csv`]. Cells that parse as
    /// numbers become [`Cell::Num`], empty cells [`Cell::Empty`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::Domain(format!("malformed CSV: {e}"));
        let header = r.headers().map_err(bad)?;
        if header.is_empty() {
            return Err(Error::Domain("empty CSV".into()));
        }
        let mut table = Self::new(header.iter().map(str::to_string).collect());
        for record in r.records() {
            let row = record
                .map_err(bad)?
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        Cell::Empty
                    } else {
                        s.parse::<f64>().map_or_else(|_| Cell::Text(s.to_string()), Cell::Num)
                    }
                })
                .collect();
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep tables serialize")
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn check_grid(name: &str, grid: &[f64], ok: impl Fn(f64) -> bool, domain: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain(format!("{name} grid is empty")));
    }
    match grid.iter().find(|&&x| !ok(x)) {
        Some(x) => Err(Error::Domain(format!("{name} value {x} outside {domain}"))),
        None => Ok(()),
    }
}

fn check_p_hot(grid: &[f64]) -> Result<()> {
    check_grid("p_hot", grid, |p| p > 0.5 && p <= 1.0, "(0.5, 1]")
}

/// ξ for each τ, in the order given.
pub fn sweep_xi_vs_tau(base: &RampProtocol, taus: &[f64]) -> Result<SweepTable> {
    check_grid("tau", taus, |t| t > 0.0 && t <= 1.0, "(0, 1] s")?;
    let xis: Vec<f64> = taus
        .par_iter()
        .map(|&t| xi(&base.with_tau(t)?))
        .collect::<Result<_>>()?;
    let mut table = SweepTable::new(vec!["tau_s".into(), "xi".into()]);
    for (&t, &x) in taus.iter().zip(&xis) {
        table.push(vec![t.into(), x.into()]);
    }
    table.meta("kind", "xi-tau");
    table.meta("nu_cold_hz", base.nu_cold());
    table.meta("nu_hot_hz", base.nu_hot());
    table.meta("steps", base.steps());
    Ok(table)
}

/// Regime and efficiency over a (p_hot⁺, ξ) grid with ξ treated as a free
/// parameter. Rows are p_hot-major.
pub fn region_map(p_cold: f64, nu_cold: f64, nu_hot: f64, p_hot_grid: &[f64], xi_grid: &[f64]) -> Result<SweepTable> {
    check_p_hot(p_hot_grid)?;
    check_grid("xi", xi_grid, |x| (0.0..=0.5).contains(&x), "[0, 0.5]")?;
    let cold = ReservoirSpec::from_population(nu_cold, p_cold)?;
    let cells: Vec<(f64, f64)> = p_hot_grid
        .iter()
        .flat_map(|&ph| xi_grid.iter().map(move |&x| (ph, x)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(ph, x)| {
            let hot = ReservoirSpec::from_population(nu_hot, ph)?;
            Ok(evaluate(&CyclePoint::new(cold, hot, x)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = SweepTable::new(vec!["p_hot_plus".into(), "xi".into(), "regime".into(), "eta".into()]);
    for (&(ph, x), r) in cells.iter().zip(&results) {
        table.push(vec![ph.into(), x.into(), r.regime.into(), r.efficiency.into()]);
    }
    table.meta("kind", "region");
    table.meta("p_cold_plus", p_cold);
    table.meta("nu_cold_hz", nu_cold);
    table.meta("nu_hot_hz", nu_hot);
    table.meta("eta_otto", eta_otto(nu_cold, nu_hot));
    Ok(table)
}

/// One efficiency curve over `p_hot_grid` per ramp duration in `taus`.
///
/// Columns: `p_hot_plus`, `xi_tau_<i>`…, `eta_tau_<i>`…, `eta_otto`,
/// `regime_tau_<i>`…; `eta_tau_<i>` is empty where the point is not an
/// engine.
pub fn sweep_efficiency_vs_phot(p_cold: f64, base: &RampProtocol, taus: &[f64], p_hot_grid: &[f64]) -> Result<SweepTable> {
    check_p_hot(p_hot_grid)?;
    check_grid("tau", taus, |t| t > 0.0 && t <= 1.0, "(0, 1] s")?;
    let xis: Vec<f64> = taus
        .par_iter()
        .map(|&t| xi(&base.with_tau(t)?))
        .collect::<Result<_>>()?;
    let cold = ReservoirSpec::from_population(base.nu_cold(), p_cold)?;
    let rows = p_hot_grid
        .par_iter()
        .map(|&ph| {
            let hot = ReservoirSpec::from_population(base.nu_hot(), ph)?;
            xis.iter()
                .map(|&x| Ok(evaluate(&CyclePoint::new(cold, hot, x)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let n = taus.len();
    let mut columns = vec!["p_hot_plus".to_string()];
    columns.extend((0..n).map(|i| format!("xi_tau_{i}")));
    columns.extend((0..n).map(|i| format!("eta_tau_{i}")));
    columns.push("eta_otto".into());
    columns.extend((0..n).map(|i| format!("regime_tau_{i}")));
    let mut table = SweepTable::new(columns);
    let otto = eta_otto(base.nu_cold(), base.nu_hot());
    for (&ph, results) in p_hot_grid.iter().zip(&rows) {
        let mut row: Vec<Cell> = vec![ph.into()];
        row.extend(xis.iter().map(|&x| Cell::from(x)));
        row.extend(results.iter().map(|r| Cell::from(r.efficiency)));
        row.push(otto.into());
        row.extend(results.iter().map(|r| Cell::from(r.regime)));
        table.push(row);
    }
    table.meta("kind", "eta-phot");
    table.meta("p_cold_plus", p_cold);
    table.meta("nu_cold_hz", base.nu_cold());
    table.meta("nu_hot_hz", base.nu_hot());
    table.meta("steps", base.steps());
    for (i, t) in taus.iter().enumerate() {
        table.meta(format!("tau_{i}_s"), t);
    }
    Ok(table)
}

/// One efficiency curve per frequency ratio `ν_cold/ν_hot` at fixed
/// `ν_cold` and ramp duration (both taken from `base`).
pub fn sweep_efficiency_vs_ratio(p_cold: f64, base: &RampProtocol, ratios: &[f64], p_hot_grid: &[f64]) -> Result<SweepTable> {
    check_p_hot(p_hot_grid)?;
    check_grid("ratio", ratios, |r| r > 0.0 && r < 1.0, "(0, 1)")?;
    let protos: Vec<RampProtocol> = ratios
        .iter()
        .map(|r| RampProtocol::new(base.nu_cold(), base.nu_cold() / r, base.tau())?.with_steps(base.steps()))
        .collect::<Result<_>>()?;
    let xis: Vec<f64> = protos.par_iter().map(xi).collect::<Result<_>>()?;
    let cold = ReservoirSpec::from_population(base.nu_cold(), p_cold)?;
    let rows = p_hot_grid
        .par_iter()
        .map(|&ph| {
            protos
                .iter()
                .zip(&xis)
                .map(|(proto, &x)| {
                    let hot = ReservoirSpec::from_population(proto.nu_hot(), ph)?;
                    Ok(evaluate(&CyclePoint::new(cold, hot, x)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let n = ratios.len();
    let mut columns = vec!["p_hot_plus".to_string()];
    columns.extend((0..n).map(|i| format!("xi_ratio_{i}")));
    columns.extend((0..n).map(|i| format!("eta_ratio_{i}")));
    columns.extend((0..n).map(|i| format!("eta_otto_ratio_{i}")));
    columns.extend((0..n).map(|i| format!("regime_ratio_{i}")));
    let mut table = SweepTable::new(columns);
    for (&ph, results) in p_hot_grid.iter().zip(&rows) {
        let mut row: Vec<Cell> = vec![ph.into()];
        row.extend(xis.iter().map(|&x| Cell::from(x)));
        row.extend(results.iter().map(|r| Cell::from(r.efficiency)));
        row.extend(results.iter().map(|r| Cell::from(r.eta_otto)));
        row.extend(results.iter().map(|r| Cell::from(r.regime)));
        table.push(row);
    }
    table.meta("kind", "eta-ratio");
    table.meta("p_cold_plus", p_cold);
    table.meta("nu_cold_hz", base.nu_cold());
    table.meta("tau_s", base.tau());
    table.meta("steps", base.steps());
    for (i, r) in ratios.iter().enumerate() {
        table.meta(format!("ratio_{i}"), r);
    }
    Ok(table)
}

/// Intervals `[p_k, p_{k+1}]` of consecutive defined cells between which
/// `eta − eta_otto` changes sign.
pub fn otto_sign_changes(table: &SweepTable, eta_column: &str, eta_otto_column: &str) -> Option<Vec<(f64, f64)>> {
    let p = table.numbers("p_hot_plus")?;
    let eta = table.numbers(eta_column)?;
    let otto = table.numbers(eta_otto_column)?;
    let defined: Vec<(f64, f64)> = p
        .iter()
        .zip(eta.iter().zip(&otto))
        .filter_map(|(p, (e, o))| Some((p.as_ref().copied()?, e.as_ref().copied()? - o.as_ref().copied()?)))
        .collect();
    Some(
        defined
            .windows(2)
            .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
            .map(|w| (w[0].0, w[1].0))
            .collect(),
    )
}

/// Normalised Hilbert–Schmidt overlap `|Tr(a b†)| / √(Tr a² · Tr b²)`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let (pa, pb) = (a.purity(), b.purity());
    if !(pa > 0.0 && pb > 0.0) {
        return Err(Error::Domain(format!("zero purity ({pa}, {pb})")));
    }
    let overlap = (*a.mat() * b.mat().adjoint()).trace().norm();
    Ok(overlap / (pa * pb).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityPair {
    pub label: String,
    /// Tomographed state, projected to unit trace.
    pub experimental: DensityMatrix,
    /// State regenerated by this crate's pipeline.
    pub theoretical: DensityMatrix,
    pub fidelity: f64,
    pub reported_fidelity: f64,
    /// Printed (two-decimal) prediction.
    pub printed_theory: ComplexMat2,
    /// `max |regenerated − printed prediction|`.
    pub max_entry_deviation: f64,
}

impl FidelityPair {
    pub fn entries_match(&self) -> bool {
        self.max_entry_deviation <= PRINT_TOL
    }

    pub fn fidelity_matches(&self) -> bool {
        (self.fidelity - self.reported_fidelity).abs() <= FIDELITY_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub pairs: Vec<FidelityPair>,
    pub xi: f64,
}

impl FidelityReport {
    pub fn all_pass(&self) -> bool {
        self.pairs.iter().all(|p| p.entries_match() && p.fidelity_matches())
    }
}

/// Regenerates ρ₁…ρ₄ (Gibbs → ramp → Gibbs → ramp) and compares them with
/// the embedded fixtures. Mismatches are reported, not raised.
pub fn reference_state_check(proto: &RampProtocol, p_cold: f64, p_hot: f64) -> Result<FidelityReport> {
    let h_cold = stroke_hamiltonian(StrokeKind::Cold, proto.nu_cold())?;
    let h_hot = stroke_hamiltonian(StrokeKind::Hot, proto.nu_hot())?;
    let pair = RampPair::compute(proto)?;
    let rho1 = gibbs_state(&h_cold, beta_from_population(p_cold, proto.nu_cold())?)?;
    let rho2 = rho1.evolve(pair.expansion.u())?;
    let rho3 = gibbs_state(&h_hot, beta_from_population(p_hot, proto.nu_hot())?)?;
    let rho4 = rho3.evolve(pair.compression.u())?;
    let regenerated = [rho1, rho2, rho3, rho4];

    let fixtures = reference_states();
    let pairs = fixtures
        .strokes
        .iter()
        .zip(regenerated)
        .map(|(fx, theo)| {
            let experimental = DensityMatrix::from_measured(fx.experimental())?;
            Ok(FidelityPair {
                label: fx.label.clone(),
                experimental,
                theoretical: theo,
                fidelity: fidelity(&experimental, &theo)?,
                reported_fidelity: fx.fidelity,
                printed_theory: fx.theory(),
                max_entry_deviation: theo.mat().max_diff(&fx.theory()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xi = crate::propagator::xi_symmetry_from(proto, &pair)?.plus_hot_u_minus_cold;
    Ok(FidelityReport { pairs, xi })
}

/// Hot population at which `tanh(½|β_hot|ν_hot) = tanh(½β_cold ν_cold)`,
/// found by bisection through the population → β map.
///
/// Returns `Ok(None)` when no crossing lies in (0.5, 1) (fully polarised
/// cold bath) and `Ok(Some(0.5))` for an unpolarised cold bath.
pub fn find_crossing(p_cold: f64, nu_cold: f64, nu_hot: f64) -> Result<Option<f64>> {
    if !(0.0..=0.5).contains(&p_cold) {
        return Err(Error::Domain(format!("cold population must lie in [0, 0.5], got {p_cold}")));
    }
    let cold = ReservoirSpec::from_population(nu_cold, p_cold)?;
    let target = (0.5 * cold.beta() * nu_cold).tanh();
    if target <= 0.0 {
        return Ok(Some(0.5));
    }
    let g = |p: f64| -> Result<f64> {
        let beta_hot = beta_from_population(p, nu_hot)?;
        Ok(target - (0.5 * beta_hot.abs() * nu_hot).tanh())
    };
    // g decreases from `target` at p → 0.5 to `target − 1` at p → 1
    if target >= 1.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.5, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid)?;
        if v.abs() <= 1e-14 {
            return Ok(Some(mid));
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
