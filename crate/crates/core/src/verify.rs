//! Reproduction checks for the reference cycle, each with a pinned
//! tolerance. Used by the `verify` CLI subcommand and the acceptance suite.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{find_crossing, linspace, otto_sign_changes, region_map, sweep_efficiency_vs_phot, reference_state_check, FIDELITY_TOL, PRINT_TOL};
use crate::error::Result;
use crate::otto::{efficiency, efficiency_closed_form, eta_otto, evaluate, is_super_otto_side, stroke_oracle, CyclePoint, CycleResult};
use crate::propagator::{xi, xi_symmetry_from, RampPair, RampProtocol, DEFAULT_STEPS, UNITARITY_TOL};
use crate::qspin::ReservoirSpec;

/// Step count used for the 1 s adiabatic-limit ramp.
pub const ADIABATIC_STEPS: usize = 4_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub nu_cold: f64,
    pub nu_hot: f64,
    pub tau: f64,
    pub steps: usize,
    /// Populations targeted by the tomography fixture.
    pub table_p_cold: f64,
    pub table_p_hot: f64,
    /// Cold population of the efficiency sweeps.
    pub p_cold: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            nu_cold: 2000.0,
            nu_hot: 3600.0,
            tau: 200e-6,
            steps: DEFAULT_STEPS,
            table_p_cold: 0.26,
            table_p_hot: 0.813,
            p_cold: 0.261,
            samples: 200,
            seed: 0x5eed_0770,
        }
    }
}

impl VerifyConfig {
    fn protocol(&self, tau: f64) -> Result<RampProtocol> {
        RampProtocol::new(self.nu_cold, self.nu_hot, tau)?.with_steps(self.steps)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&VerifyConfig) -> Result<(bool, String)>;

const CHECKS: [(u8, &str, Check); 10] = [
    (1, "reference-state regeneration", table_regeneration),
    (2, "fidelity regression", fidelity_regression),
    (3, "oracle equivalence", oracle_equivalence),
    (4, "sudden-quench and adiabatic limits", quench_and_adiabatic_limits),
    (5, "Otto-limit invariance", otto_limit),
    (6, "crossing point", crossing_point),
    (7, "faster-is-better ordering", faster_is_better),
    (8, "blank-region existence", blank_region),
    (9, "first law", first_law),
    (10, "numerical hygiene", numerical_hygiene),
];

pub fn run(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(id, name, check)| {
            let (passed, detail) = check(cfg).unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckOutcome { id, name, passed, detail }
        })
        .collect()
}

/// Runs a single check by id.
pub fn run_one(cfg: &VerifyConfig, id: u8) -> Option<CheckOutcome> {
    CHECKS.iter().find(|c| c.0 == id).map(|&(id, name, check)| {
        let (passed, detail) = check(cfg).unwrap_or_else(|e| (false, format!("error: {e}")));
        CheckOutcome { id, name, passed, detail }
    })
}

fn table_regeneration(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let start = Instant::now();
    let report = reference_state_check(&cfg.protocol(cfg.tau)?, cfg.table_p_cold, cfg.table_p_hot)?;
    let secs = start.elapsed().as_secs_f64();
    let worst = report.pairs.iter().map(|p| p.max_entry_deviation).fold(0.0, f64::max);
    let detail: Vec<String> = report
        .pairs
        .iter()
        .map(|p| format!("{} dev {:.4}", p.label, p.max_entry_deviation))
        .collect();
    Ok((
        worst <= PRINT_TOL && secs < 1.0,
        format!("{} (tol {PRINT_TOL}); {secs:.3} s (limit 1 s)", detail.join(", ")),
    ))
}

fn fidelity_regression(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let report = reference_state_check(&cfg.protocol(cfg.tau)?, cfg.table_p_cold, cfg.table_p_hot)?;
    let ok = report.pairs.iter().all(|p| p.fidelity_matches());
    let detail: Vec<String> = report
        .pairs
        .iter()
        .map(|p| {
            format!(
                "{} F={:.4} vs {:.4}{}",
                p.label,
                p.fidelity,
                p.reported_fidelity,
                if p.fidelity_matches() { "" } else { " MISMATCH" }
            )
        })
        .collect();
    Ok((ok, format!("{} (tol {FIDELITY_TOL})", detail.join(", "))))
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    p_cold: f64,
    p_hot: f64,
    nu_cold: f64,
    nu_hot: f64,
    tau: f64,
}

fn draw_samples(n: usize, seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (mut a, mut b) = (rng.gen_range(1e3..1e4), rng.gen_range(1e3..1e4));
            while a == b {
                b = rng.gen_range(1e3..1e4);
            }
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            Sample {
                p_cold: rng.gen_range(0.05..=0.45),
                p_hot: rng.gen_range(0.55..=0.95),
                nu_cold: a,
                nu_hot: b,
                tau: rng.gen_range(50e-6..=500e-6),
            }
        })
        .collect()
}

struct OraclePair {
    closed: CycleResult,
    traced: CycleResult,
    eta_closed_form: Option<f64>,
}

fn oracle_pair(s: &Sample, steps: usize) -> Result<OraclePair> {
    let proto = RampProtocol::new(s.nu_cold, s.nu_hot, s.tau)?.with_steps(steps)?;
    let cold = ReservoirSpec::from_population(s.nu_cold, s.p_cold)?;
    let hot = ReservoirSpec::from_population(s.nu_hot, s.p_hot)?;
    let oracle = stroke_oracle(&cold, &hot, &proto)?;
    let point = CyclePoint::new(cold, hot, oracle.result.xi)?;
    Ok(OraclePair {
        closed: evaluate(&point),
        traced: oracle.result,
        eta_closed_form: efficiency_closed_form(&point).ok(),
    })
}

fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn oracle_equivalence(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let start = Instant::now();
    let samples = draw_samples(cfg.samples, cfg.seed);
    let pairs = samples
        .par_iter()
        .map(|s| oracle_pair(s, cfg.steps))
        .collect::<Result<Vec<_>>>()?;
    let secs = start.elapsed().as_secs_f64();

    let mut worst_energy: f64 = 0.0;
    let mut worst_eta: f64 = 0.0;
    let mut engine_mismatch = 0;
    let mut engines = 0;
    for p in &pairs {
        worst_energy = worst_energy
            .max(rel_err(p.closed.work, p.traced.work))
            .max(rel_err(p.closed.q_hot, p.traced.q_hot))
            .max(rel_err(p.closed.q_cold, p.traced.q_cold));
        match (p.traced.efficiency, p.eta_closed_form) {
            (Some(a), Some(b)) => {
                engines += 1;
                worst_eta = worst_eta.max((a - b).abs());
            }
            (None, None) => {}
            _ => engine_mismatch += 1,
        }
    }
    let ok = pairs.len() >= 200 && worst_energy <= 1e-8 && worst_eta <= 1e-10 && engine_mismatch == 0 && secs < 30.0;
    Ok((
        ok,
        format!(
            "{} samples ({engines} engines): max rel err W/Q {worst_energy:.2e} (tol 1e-8), max |Δη| {worst_eta:.2e} (tol 1e-10), engine-set mismatches {engine_mismatch}; {secs:.2} s (limit 30 s)",
            pairs.len()
        ),
    ))
}

fn quench_and_adiabatic_limits(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let sudden = xi(&cfg.protocol(1e-12)?)?;
    let slow = xi(&RampProtocol::new(cfg.nu_cold, cfg.nu_hot, 1.0)?.with_steps(ADIABATIC_STEPS.max(cfg.steps))?)?;
    let taus: Vec<f64> = (0..13).map(|k| (100.0 + 25.0 * k as f64) * 1e-6).collect();
    let grid = taus
        .par_iter()
        .map(|&t| xi(&cfg.protocol(t)?))
        .collect::<Result<Vec<_>>>()?;
    let grid_max = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (first, last) = (grid[0], grid[12]);
    let ok = (sudden - 0.5).abs() <= 1e-6 && slow < 1e-3 && grid_max <= 0.5 + 1e-9 && first > last;
    Ok((
        ok,
        format!(
            "xi(1e-12 s)={sudden:.9}, xi(1 s)={slow:.3e}, max xi on 100..400 us grid={grid_max:.6}, xi(100 us)={first:.6} > xi(400 us)={last:.6}"
        ),
    ))
}

fn otto_limit(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let p_hot = 1.0 - cfg.p_cold;
    let cold = ReservoirSpec::from_population(cfg.nu_cold, cfg.p_cold)?;
    let hot = ReservoirSpec::from_population(cfg.nu_hot, p_hot)?;
    let target = eta_otto(cfg.nu_cold, cfg.nu_hot);
    let mut worst: f64 = 0.0;
    for x in [0.0, 0.1, 0.25, 0.49] {
        let eta = efficiency(&CyclePoint::new(cold, hot, x)?)?;
        worst = worst.max((eta - target).abs());
    }
    Ok((worst <= 1e-12, format!("p_hot={p_hot}: max |eta - eta_Otto| = {worst:.2e} (tol 1e-12)")))
}

/// p_hot grid of the efficiency sweeps (cell width 0.005).
pub fn eta_grid() -> Vec<f64> {
    linspace(0.55, 0.95, 81)
}

fn crossing_point(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let crossing = find_crossing(cfg.p_cold, cfg.nu_cold, cfg.nu_hot)?;
    let Some(crossing) = crossing else {
        return Ok((false, "no crossing in (0.5, 1)".into()));
    };
    let grid = eta_grid();
    let cell = grid[1] - grid[0];
    let taus = [100e-6, 200e-6, 300e-6, 400e-6];
    let table = sweep_efficiency_vs_phot(cfg.p_cold, &cfg.protocol(cfg.tau)?, &taus, &grid)?;
    let mut ok = (crossing - 0.739).abs() <= 0.002;
    let mut parts = vec![format!("crossing p_hot={crossing:.10} (expect 0.739 +/- 0.002)")];
    for (i, tau) in taus.iter().enumerate() {
        let changes = otto_sign_changes(&table, &format!("eta_tau_{i}"), "eta_otto").unwrap_or_default();
        let near = changes.iter().any(|&(lo, hi)| lo - cell <= crossing && crossing <= hi + cell);
        ok &= near;
        parts.push(format!("tau {:.0} us sign changes {:?}{}", tau * 1e6, changes, if near { "" } else { " FAR" }));
    }
    Ok((ok, parts.join("; ")))
}

fn eta_at(cfg: &VerifyConfig, p_hot: f64, tau: f64) -> Result<Option<f64>> {
    let proto = cfg.protocol(tau)?;
    Ok(evaluate(&CyclePoint::from_protocol(cfg.p_cold, p_hot, &proto)?).efficiency)
}

fn fmt_eta(eta: Option<f64>) -> String {
    eta.map_or("undefined (not an engine)".into(), |e| format!("{e:.6}"))
}

/// Checks η(100 μs) > η(200 μs) > η(400 μs) at p_hot = 0.55 and the
/// reversed ordering at p_hot = 0.95.
fn faster_is_better(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let taus = [100e-6, 200e-6, 400e-6];
    let weak: Vec<Option<f64>> = taus.iter().map(|&t| eta_at(cfg, 0.55, t)).collect::<Result<_>>()?;
    let strong: Vec<Option<f64>> = taus.iter().map(|&t| eta_at(cfg, 0.95, t)).collect::<Result<_>>()?;
    let decreasing = |v: &[Option<f64>]| matches!(v, [Some(a), Some(b), Some(c)] if a > b && b > c);
    let increasing = |v: &[Option<f64>]| matches!(v, [Some(a), Some(b), Some(c)] if a < b && b < c);
    let ok = decreasing(&weak) && increasing(&strong);
    let show = |v: &[Option<f64>]| v.iter().map(|e| fmt_eta(*e)).collect::<Vec<_>>().join(", ");
    Ok((
        ok,
        format!(
            "p_hot=0.55 eta(100,200,400 us) = [{}] (want decreasing); p_hot=0.95 = [{}] (want increasing)",
            show(&weak),
            show(&strong)
        ),
    ))
}

/// Default region-map grids.
pub fn region_grids() -> (Vec<f64>, Vec<f64>) {
    (linspace(0.51, 0.99, 49), linspace(0.0, 0.5, 51))
}

fn blank_region(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let (p_hot, xis) = region_grids();
    let table = region_map(cfg.p_cold, cfg.nu_cold, cfg.nu_hot, &p_hot, &xis)?;
    let cold_pol = 1.0 - 2.0 * cfg.p_cold;
    let (mut sub_blank, mut super_blank) = (0, 0);
    for row in &table.rows {
        let ph = row[0].as_f64().unwrap_or(f64::NAN);
        if row[2].as_str() == Some("NotEngine") {
            if is_super_otto_side(cold_pol, 2.0 * ph - 1.0) {
                super_blank += 1;
            } else {
                sub_blank += 1;
            }
        }
    }
    Ok((
        sub_blank >= 1 && super_blank == 0,
        format!("{} cells: NotEngine in sub-Otto band {sub_blank} (want >= 1), in super-Otto band {super_blank} (want 0)", table.rows.len()),
    ))
}

fn first_law(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let samples = draw_samples(cfg.samples, cfg.seed);
    let pairs = samples
        .par_iter()
        .map(|s| oracle_pair(s, cfg.steps))
        .collect::<Result<Vec<_>>>()?;
    let residual = |r: &CycleResult| (r.work + r.q_hot + r.q_cold).abs() / (r.q_hot.abs() + r.q_cold.abs());
    let mut worst: f64 = 0.0;
    for p in &pairs {
        worst = worst.max(residual(&p.closed)).max(residual(&p.traced));
    }
    let (p_hot, xis) = region_grids();
    let cold = ReservoirSpec::from_population(cfg.nu_cold, cfg.p_cold)?;
    let mut points = 0;
    for &ph in &p_hot {
        let hot = ReservoirSpec::from_population(cfg.nu_hot, ph)?;
        for &x in &xis {
            worst = worst.max(residual(&evaluate(&CyclePoint::new(cold, hot, x)?)));
            points += 1;
        }
    }
    Ok((
        worst <= 1e-10,
        format!("{} oracle/closed pairs + {points} grid points: max |W+Qh+Qc|/(|Qh|+|Qc|) = {worst:.2e} (tol 1e-10)", pairs.len()),
    ))
}

fn numerical_hygiene(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let proto = cfg.protocol(cfg.tau)?;
    let pair = RampPair::compute(&proto)?;
    let drift = pair.expansion.drift().max(pair.compression.drift());
    let defect = pair.expansion.u().unitarity_defect().max(pair.compression.u().unitarity_defect());
    let coarse = xi(&proto)?;
    let fine = xi(&proto.with_steps(2 * proto.steps())?)?;
    let adjoint = pair.adjoint_mismatch();
    let spread = xi_symmetry_from(&proto, &pair)?.max_pairwise_difference();
    let ok = drift <= UNITARITY_TOL && defect <= 1e-9 && (coarse - fine).abs() < 1e-8 && adjoint <= 1e-8 && spread <= 1e-8;
    Ok((
        ok,
        format!(
            "steps {}: drift {drift:.2e}, |U'U-I| {defect:.2e} (tol 1e-9); step doubling |dxi| {:.2e} (tol 1e-8); |V-U'| {adjoint:.2e} (tol 1e-8); xi spread {spread:.2e} (tol 1e-8)",
            proto.steps(),
            (coarse - fine).abs()
        ),
    ))
}
