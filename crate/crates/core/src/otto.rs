//! Thermodynamics of the four-stroke cycle.
//!
//! The closed forms below are written in terms of the two reservoir
//! polarizations
//!
//! * `a = tanh(½ β_cold ν_cold)` (positive: the cold bath has β > 0),
//! * `b = tanh(½ |β_hot| ν_hot)` (positive magnitude of the inverted hot bath),
//!
//! and the transition probability ξ. Energies are in units of h·Hz; negative
//! work means work is extracted. [`stroke_oracle`] recomputes the same
//! quantities from density matrices and traces and is used to check every
//! closed form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::propagator::{xi_symmetry_from, RampPair, RampProtocol};
use crate::qspin::{eigenbasis, gibbs_state, stroke_hamiltonian, DensityMatrix, ReservoirSpec, StrokeKind};

/// Slack allowed above ξ = ½ for values coming out of the integrator.
pub const XI_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    NotEngine,
    EngineSubOtto,
    EngineSuperOtto,
}

impl Regime {
    pub fn is_engine(self) -> bool {
        self != Regime::NotEngine
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::NotEngine => "NotEngine",
            Regime::EngineSubOtto => "EngineSubOtto",
            Regime::EngineSuperOtto => "EngineSuperOtto",
        }
    }
}

/// Reservoirs plus the transition probability of the ramps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CyclePoint {
    cold: ReservoirSpec,
    hot: ReservoirSpec,
    xi: f64,
}

impl CyclePoint {
    pub fn new(cold: ReservoirSpec, hot: ReservoirSpec, xi: f64) -> Result<Self> {
        if !(cold.p_plus() < 0.5) {
            return Err(Error::Domain(format!(
                "cold reservoir needs positive temperature (p+ < 0.5), got p+ = {}",
                cold.p_plus()
            )));
        }
        if !(hot.p_plus() > 0.5) {
            return Err(Error::Domain(format!(
                "hot reservoir needs population inversion (p+ > 0.5), got p+ = {}",
                hot.p_plus()
            )));
        }
        if !(hot.nu() > cold.nu()) {
            return Err(Error::Domain(format!(
                "nu_hot ({}) must exceed nu_cold ({})",
                hot.nu(),
                cold.nu()
            )));
        }
        if !(0.0..=0.5 + XI_TOL).contains(&xi) {
            return Err(Error::Domain(format!("xi must lie in [0, 1/2], got {xi}")));
        }
        Ok(Self { cold, hot, xi })
    }

    /// Point from populations, with ξ obtained by propagating `proto`.
    pub fn from_protocol(p_cold: f64, p_hot: f64, proto: &RampProtocol) -> Result<Self> {
        let xi = crate::propagator::xi(proto)?;
        Self::new(
            ReservoirSpec::from_population(proto.nu_cold(), p_cold)?,
            ReservoirSpec::from_population(proto.nu_hot(), p_hot)?,
            xi,
        )
    }

    pub fn with_xi(&self, xi: f64) -> Result<Self> {
        Self::new(self.cold, self.hot, xi)
    }

    pub fn cold(&self) -> &ReservoirSpec {
        &self.cold
    }

    pub fn hot(&self) -> &ReservoirSpec {
        &self.hot
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `tanh(½ β_cold ν_cold)`.
    pub fn cold_polarization(&self) -> f64 {
        self.cold.polarization()
    }

    /// `tanh(½ |β_hot| ν_hot)`.
    pub fn hot_inversion(&self) -> f64 {
        -self.hot.polarization()
    }

    fn parts(&self) -> (f64, f64, f64, f64, f64) {
        (self.cold.nu(), self.hot.nu(), self.cold_polarization(), self.hot_inversion(), self.xi)
    }
}

/// Per-cycle outputs. Energies in h·Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleResult {
    pub xi: f64,
    pub work: f64,
    pub q_hot: f64,
    pub q_cold: f64,
    /// `−W/Q_hot`; `None` outside the engine regime.
    pub efficiency: Option<f64>,
    pub eta_otto: f64,
    pub work_adiabatic: f64,
    pub inner_friction: f64,
    pub regime: Regime,
}

pub fn eta_otto(nu_cold: f64, nu_hot: f64) -> f64 {
    1.0 - nu_cold / nu_hot
}

pub fn net_work(p: &CyclePoint) -> f64 {
    let (nc, nh, a, b, xi) = p.parts();
    -0.5 * (nh - nc) * (a + b) + xi * (nh * a - nc * b)
}

pub fn heat_hot(p: &CyclePoint) -> f64 {
    let (_, nh, a, b, xi) = p.parts();
    0.5 * nh * (a + b) - xi * nh * a
}

pub fn heat_cold(p: &CyclePoint) -> f64 {
    let (nc, _, a, b, xi) = p.parts();
    -0.5 * nc * (a + b) + xi * nc * b
}

/// Work, hot heat and cold heat from the signed-β forms, where the hot
/// polarization `tanh(½ β_hot ν_hot)` enters with its own (negative) sign.
pub fn signed_forms(p: &CyclePoint) -> (f64, f64, f64) {
    let (nc, nh, xi) = (p.cold.nu(), p.hot.nu(), p.xi);
    let tc = (0.5 * p.cold.beta() * nc).tanh();
    let th = (0.5 * p.hot.beta() * nh).tanh();
    let work = -0.5 * (nh - nc) * (tc - th) + xi * (nh * tc + nc * th);
    let q_hot = 0.5 * nh * (tc - th) - xi * nh * tc;
    let q_cold = -0.5 * nc * (tc - th) - xi * nc * th;
    (work, q_hot, q_cold)
}

/// Work of the same reservoirs with quasi-static ramps (ξ = 0).
pub fn adiabatic_work(p: &CyclePoint) -> f64 {
    let (nc, nh, a, b, _) = p.parts();
    -0.5 * (nh - nc) * (a + b)
}

/// `W − W_ad = ξ(ν_hot·a − ν_cold·b)`; negative when the transitions add
/// to the extracted work.
pub fn inner_friction(p: &CyclePoint) -> f64 {
    let (nc, nh, a, b, xi) = p.parts();
    xi * (nh * a - nc * b)
}

/// `F = b/(a+b)`.
pub fn f_factor(p: &CyclePoint) -> f64 {
    let (_, _, a, b, _) = p.parts();
    b / (a + b)
}

/// `G = a/(a+b)`.
pub fn g_factor(p: &CyclePoint) -> f64 {
    let (_, _, a, b, _) = p.parts();
    a / (a + b)
}

/// Efficiency as `−W/Q_hot`. Only defined in the engine regime.
pub fn efficiency(p: &CyclePoint) -> Result<f64> {
    let work = net_work(p);
    let q_hot = heat_hot(p);
    if !engine_condition(p).is_engine || !(q_hot > 0.0) {
        return Err(Error::NotAnEngine { work, q_hot });
    }
    Ok(-work / q_hot)
}

/// `1 − (ν_cold/ν_hot)·(1 − 2ξF)/(1 − 2ξG)`, the same quantity as
/// [`efficiency`] written through F and G.
pub fn efficiency_closed_form(p: &CyclePoint) -> Result<f64> {
    efficiency(p)?;
    let xi = p.xi;
    let ratio = (1.0 - 2.0 * xi * f_factor(p)) / (1.0 - 2.0 * xi * g_factor(p));
    Ok(1.0 - p.cold.nu() / p.hot.nu() * ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EngineCondition {
    pub is_engine: bool,
    /// Largest ξ (exclusive) for which work is extracted; infinite when
    /// non-adiabatic transitions never cost more work than they release.
    pub xi_bound: f64,
}

pub fn engine_condition(p: &CyclePoint) -> EngineCondition {
    let (nc, nh, a, b, xi) = p.parts();
    let numerator = (nh - nc) * (a + b);
    // W = -½(ν_h - ν_c)(a + b) + ξ·(ν_h·a - ν_c·b): only a positive slope can close the window
    let denominator = 2.0 * (nh * a - nc * b);
    let xi_bound = if denominator <= f64::EPSILON * nh * (a + b) {
        f64::INFINITY
    } else {
        numerator / denominator
    };
    EngineCondition { is_engine: xi < xi_bound, xi_bound }
}

/// Whether the reservoirs sit on the side where ξ > 0 raises η above
/// `η_Otto`: `tanh(½|β_hot|ν_hot) ≥ tanh(½β_cold ν_cold)`, i.e. `F ≥ G`.
/// Equality (where η = η_Otto for every ξ) is counted as super-Otto.
pub fn is_super_otto_side(cold_polarization: f64, hot_inversion: f64) -> bool {
    hot_inversion >= cold_polarization
}

pub fn regime(p: &CyclePoint) -> Regime {
    if !engine_condition(p).is_engine {
        Regime::NotEngine
    } else if is_super_otto_side(p.cold_polarization(), p.hot_inversion()) {
        Regime::EngineSuperOtto
    } else {
        Regime::EngineSubOtto
    }
}

pub fn evaluate(p: &CyclePoint) -> CycleResult {
    CycleResult {
        xi: p.xi,
        work: net_work(p),
        q_hot: heat_hot(p),
        q_cold: heat_cold(p),
        efficiency: efficiency(p).ok(),
        eta_otto: eta_otto(p.cold.nu(), p.hot.nu()),
        work_adiabatic: adiabatic_work(p),
        inner_friction: inner_friction(p),
        regime: regime(p),
    }
}

/// Trace-based evaluation of the cycle together with the four stroke states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrokeOracle {
    pub result: CycleResult,
    /// ρ₁ (after cooling), ρ₂ (after expansion), ρ₃ (after heating),
    /// ρ₄ (after compression).
    pub states: [DensityMatrix; 4],
    /// Excited-state populations of ρ₁…ρ₄ in the eigenbasis of the
    /// Hamiltonian held at the end of each stroke.
    pub populations: [f64; 4],
}

/// Builds ρ₁…ρ₄ from Gibbs states and the numerically integrated ramps and
/// evaluates work and heats as energy differences between strokes.
pub fn stroke_oracle(cold: &ReservoirSpec, hot: &ReservoirSpec, proto: &RampProtocol) -> Result<StrokeOracle> {
    if cold.nu() != proto.nu_cold() || hot.nu() != proto.nu_hot() {
        return Err(Error::Domain(format!(
            "protocol frequencies ({}, {}) Hz differ from reservoir frequencies ({}, {}) Hz",
            proto.nu_cold(),
            proto.nu_hot(),
            cold.nu(),
            hot.nu()
        )));
    }
    let h_cold = stroke_hamiltonian(StrokeKind::Cold, cold.nu())?;
    let h_hot = stroke_hamiltonian(StrokeKind::Hot, hot.nu())?;
    let pair = RampPair::compute(proto)?;

    let rho1 = gibbs_state(&h_cold, cold.beta())?;
    let rho2 = rho1.evolve(pair.expansion.u())?;
    let rho3 = gibbs_state(&h_hot, hot.beta())?;
    let rho4 = rho3.evolve(pair.compression.u())?;

    let e1 = rho1.expectation(&h_cold);
    let e2 = rho2.expectation(&h_hot);
    let e3 = rho3.expectation(&h_hot);
    let e4 = rho4.expectation(&h_cold);
    let work = e2 - e1 + e4 - e3;
    let q_hot = e3 - e2;
    let q_cold = e1 - e4;

    // quasi-static reference: populations carried over unchanged
    let beta_hot_ad = cold.beta() * cold.nu() / hot.nu();
    let beta_cold_ad = hot.beta() * hot.nu() / cold.nu();
    let rho2_ad = gibbs_state(&h_hot, beta_hot_ad)?;
    let rho4_ad = gibbs_state(&h_cold, beta_cold_ad)?;
    let work_adiabatic = rho2_ad.expectation(&h_hot) - e1 + rho4_ad.expectation(&h_cold) - e3;

    let cold_basis = eigenbasis(&h_cold)?;
    let hot_basis = eigenbasis(&h_hot)?;
    let populations = [
        rho1.population(&cold_basis.plus),
        rho2.population(&hot_basis.plus),
        rho3.population(&hot_basis.plus),
        rho4.population(&cold_basis.plus),
    ];

    let engine = work < 0.0 && q_hot > 0.0;
    let efficiency = engine.then(|| -work / q_hot);
    let cold_polarization = 1.0 - 2.0 * populations[0];
    let hot_inversion = 2.0 * populations[2] - 1.0;
    let regime = if !engine {
        Regime::NotEngine
    } else if is_super_otto_side(cold_polarization, hot_inversion) {
        Regime::EngineSuperOtto
    } else {
        Regime::EngineSubOtto
    };

    let xi = xi_symmetry_from(proto, &pair)?.plus_hot_u_minus_cold;
    Ok(StrokeOracle {
        result: CycleResult {
            xi,
            work,
            q_hot,
            q_cold,
            efficiency,
            eta_otto: eta_otto(cold.nu(), hot.nu()),
            work_adiabatic,
            inner_friction: work - work_adiabatic,
            regime,
        },
        states: [rho1, rho2, rho3, rho4],
        populations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NC: f64 = 2000.0;
    const NH: f64 = 3600.0;

    fn point(p_cold: f64, p_hot: f64, xi: f64) -> CyclePoint {
        CyclePoint::new(
            ReservoirSpec::from_population(NC, p_cold).unwrap(),
            ReservoirSpec::from_population(NH, p_hot).unwrap(),
            xi,
        )
        .unwrap()
    }

    #[test]
    fn point_validation() {
        let cold = ReservoirSpec::from_population(NC, 0.261).unwrap();
        let hot = ReservoirSpec::from_population(NH, 0.813).unwrap();
        assert!(CyclePoint::new(cold, hot, 0.6).is_err());
        assert!(CyclePoint::new(cold, hot, -0.1).is_err());
        assert!(CyclePoint::new(hot, hot, 0.1).is_err());
        assert!(CyclePoint::new(cold, cold, 0.1).is_err());
        let slow_hot = ReservoirSpec::from_population(1000.0, 0.813).unwrap();
        assert!(CyclePoint::new(cold, slow_hot, 0.1).is_err());
        assert!(CyclePoint::new(cold, hot, 0.5).is_ok());
    }

    #[test]
    fn quasi_static_cycle() {
        let p = point(0.261, 0.813, 0.0);
        let (a, b) = (1.0 - 2.0 * 0.261, 2.0 * 0.813 - 1.0);
        let w = -0.5 * (NH - NC) * (a + b);
        assert!((net_work(&p) - w).abs() < 1e-9);
        assert!(net_work(&p) < 0.0);
        assert_eq!(net_work(&p), adiabatic_work(&p));
        assert_eq!(inner_friction(&p), 0.0);
        assert!((heat_hot(&p) - 0.5 * NH * (a + b)).abs() < 1e-9);
        assert!((efficiency(&p).unwrap() - (1.0 - NC / NH)).abs() < 1e-15);
        assert!((eta_otto(NC, NH) - 0.4444).abs() < 1e-4);
    }

    #[test]
    fn work_independent_of_xi_when_friction_vanishes() {
        // ν_hot·a = ν_cold·b  ⇒  b = (ν_hot/ν_cold)·a; pick a = 0.3 ⇒ b = 0.54
        let p_cold = 0.5 * (1.0 - 0.3);
        let p_hot = 0.5 * (1.0 + 0.3 * NH / NC);
        let w0 = net_work(&point(p_cold, p_hot, 0.0));
        for xi in [0.1, 0.3, 0.5] {
            let p = point(p_cold, p_hot, xi);
            assert!((net_work(&p) - w0).abs() < 1e-9);
            let cond = engine_condition(&p);
            assert!(cond.xi_bound.is_infinite());
            assert!(cond.is_engine);
        }
    }

    #[test]
    fn heats_have_fixed_signs_below_half() {
        for p_hot in [0.51, 0.6, 0.739, 0.9, 0.999] {
            for xi in [0.0, 0.2, 0.49] {
                let p = point(0.261, p_hot, xi);
                assert!(heat_hot(&p) > 0.0);
                assert!(heat_cold(&p) < 0.0);
            }
        }
    }

    #[test]
    fn otto_limit_when_polarizations_match() {
        for xi in [0.0, 0.1, 0.25, 0.49] {
            let p = point(0.261, 0.739, xi);
            assert!((f_factor(&p) - 0.5).abs() < 1e-15);
            assert!((efficiency(&p).unwrap() - eta_otto(NC, NH)).abs() <= 1e-12);
            assert_eq!(regime(&p), Regime::EngineSuperOtto);
        }
    }

    #[test]
    fn efficiency_above_otto_on_inverted_side() {
        // strong inversion: tanh(½|β_h|ν_h) = 0.9 > tanh(½β_cν_c) = 0.478
        let p = point(0.261, 0.95, 0.3);
        assert!(efficiency(&p).unwrap() > eta_otto(NC, NH));
        assert_eq!(regime(&p), Regime::EngineSuperOtto);
        // weak inversion: 0.1 < 0.478
        let p = point(0.261, 0.55, 0.1);
        assert!(efficiency(&p).unwrap() < eta_otto(NC, NH));
        assert_eq!(regime(&p), Regime::EngineSubOtto);
    }

    #[test]
    fn regime_examples() {
        assert_eq!(regime(&point(0.261, 0.99, 0.2)), Regime::EngineSuperOtto);
        assert_eq!(regime(&point(0.261, 0.55, 0.2)), Regime::EngineSubOtto);
        // ξ above the bound on the weakly inverted side
        let p = point(0.261, 0.55, 0.45);
        let cond = engine_condition(&p);
        assert!(cond.xi_bound < 0.5);
        assert!(!cond.is_engine);
        assert_eq!(regime(&p), Regime::NotEngine);
        assert!(matches!(efficiency(&p), Err(Error::NotAnEngine { .. })));
    }

    #[test]
    fn super_otto_side_is_engine_for_every_reachable_xi() {
        for p_hot in [0.739, 0.75, 0.8, 0.9, 0.99] {
            let cond = engine_condition(&point(0.261, p_hot, 0.0));
            assert!(cond.xi_bound >= 0.5, "p_hot {p_hot}: bound {}", cond.xi_bound);
        }
    }

    #[test]
    fn friction_can_help_extraction() {
        // needs ν_cold·b > ν_hot·a
        let p = point(0.261, 0.99, 0.3);
        assert!(inner_friction(&p) < 0.0);
        assert!(net_work(&p) < adiabatic_work(&p));
    }

    #[test]
    fn adiabatic_endpoint_states_reproduce_closed_form() {
        // β_hot^ad ν_hot = β_cold ν_cold and β_cold^ad ν_cold = β_hot ν_hot
        for (pc, ph) in [(0.261, 0.813), (0.1, 0.6), (0.4, 0.95)] {
            let p = point(pc, ph, 0.0);
            let bc = p.cold().beta();
            let bh = p.hot().beta();
            let hc = stroke_hamiltonian(StrokeKind::Cold, NC).unwrap();
            let hh = stroke_hamiltonian(StrokeKind::Hot, NH).unwrap();
            let e = |h, beta| gibbs_state(&h, beta).unwrap().expectation(&h);
            let w_ad = e(hh, bc * NC / NH) - e(hc, bc) + e(hc, bh * NH / NC) - e(hh, bh);
            assert!((w_ad - adiabatic_work(&p)).abs() < 1e-9 * adiabatic_work(&p).abs());
        }
    }

    #[test]
    fn oracle_matches_closed_forms_at_table_parameters() {
        let proto = RampProtocol::new(NC, NH, 200e-6).unwrap();
        let cold = ReservoirSpec::from_population(NC, 0.261).unwrap();
        let hot = ReservoirSpec::from_population(NH, 0.813).unwrap();
        let oracle = stroke_oracle(&cold, &hot, &proto).unwrap();
        let p = CyclePoint::new(cold, hot, oracle.result.xi).unwrap();
        let closed = evaluate(&p);
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
        assert!(rel(oracle.result.work, closed.work) < 1e-8);
        assert!(rel(oracle.result.q_hot, closed.q_hot) < 1e-8);
        assert!(rel(oracle.result.q_cold, closed.q_cold) < 1e-8);
        assert!(rel(oracle.result.work_adiabatic, closed.work_adiabatic) < 1e-8);
        assert_eq!(oracle.result.regime, closed.regime);

        let xi = oracle.result.xi;
        let p1 = oracle.populations[0];
        assert!((oracle.populations[1] - (p1 * (1.0 - xi) + (1.0 - p1) * xi)).abs() < 1e-10);
        let p3 = oracle.populations[2];
        assert!((oracle.populations[3] - (p3 * (1.0 - xi) + (1.0 - p3) * xi)).abs() < 1e-10);

        let bad = RampProtocol::new(NC, 4000.0, 200e-6).unwrap();
        assert!(stroke_oracle(&cold, &hot, &bad).is_err());
    }

    #[test]
    fn faster_ramps_help_on_super_otto_side() {
        let eta = |p_hot: f64, tau: f64| {
            let proto = RampProtocol::new(NC, NH, tau).unwrap();
            evaluate(&CyclePoint::from_protocol(0.261, p_hot, &proto).unwrap()).efficiency
        };
        let fast = eta(0.95, 100e-6).unwrap();
        let slow = eta(0.95, 400e-6).unwrap();
        assert!(fast > slow);
        // below the crossing the ordering flips (and the fastest ramp stops being an engine)
        assert!(eta(0.55, 100e-6).is_none());
        assert!(eta(0.55, 200e-6).unwrap() < eta(0.55, 400e-6).unwrap());
    }

    fn arb_point() -> impl Strategy<Value = CyclePoint> {
        (0.02..0.48f64, 0.52..0.98f64, 1000.0..5000.0f64, 1.05..3.0f64, 0.0..=0.5f64).prop_map(
            |(pc, ph, nc, ratio, xi)| {
                CyclePoint::new(
                    ReservoirSpec::from_population(nc, pc).unwrap(),
                    ReservoirSpec::from_population(nc * ratio, ph).unwrap(),
                    xi,
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn first_law(p in arb_point()) {
            let r = evaluate(&p);
            prop_assert!((r.work + r.q_hot + r.q_cold).abs() <= 1e-10 * (r.q_hot.abs() + r.q_cold.abs() + 1.0));
            prop_assert!((r.inner_friction - (r.work - r.work_adiabatic)).abs() <= 1e-12 * r.work_adiabatic.abs().max(1.0));
            if r.regime.is_engine() {
                prop_assert!(r.work < 0.0 && r.q_hot > 0.0 && r.q_cold < 0.0);
            }
        }

        #[test]
        fn signed_and_magnitude_forms_agree(p in arb_point()) {
            let (w, qh, qc) = signed_forms(&p);
            let scale = heat_hot(&p).abs() + heat_cold(&p).abs();
            prop_assert!((w - net_work(&p)).abs() <= 1e-12 * scale);
            prop_assert!((qh - heat_hot(&p)).abs() <= 1e-12 * scale);
            prop_assert!((qc - heat_cold(&p)).abs() <= 1e-12 * scale);
        }

        #[test]
        fn efficiency_routes_agree(p in arb_point()) {
            if let Ok(eta) = efficiency(&p) {
                let closed = efficiency_closed_form(&p).unwrap();
                prop_assert!((eta - closed).abs() <= 1e-12);
                prop_assert!((eta + net_work(&p) / heat_hot(&p)).abs() <= 1e-12);
            }
        }

        #[test]
        fn engine_set_matches_bound(p in arb_point()) {
            let cond = engine_condition(&p);
            prop_assume!((cond.xi_bound - p.xi()).abs() > 1e-9);
            prop_assert_eq!(cond.is_engine, net_work(&p) < 0.0);
        }

        #[test]
        fn efficiency_monotone_in_xi(p in arb_point(), dx in 0.01..0.2f64) {
            let lo = p.with_xi(0.25 - dx).unwrap();
            let hi = p.with_xi(0.25 + dx).unwrap();
            let a = p.cold_polarization();
            let b = p.hot_inversion();
            prop_assume!((a - b).abs() > 1e-6);
            if let (Ok(e_lo), Ok(e_hi)) = (efficiency(&lo), efficiency(&hi)) {
                if is_super_otto_side(a, b) {
                    prop_assert!(e_hi > e_lo);
                } else {
                    prop_assert!(e_hi < e_lo);
                }
            }
        }
    }
}
