//! Time-ordered propagation of the expansion and compression ramps, and the
//! transition probability ξ between the cold and hot eigenbases.
//!
//! The Schrödinger equation `dU/dt = −i·2π·H(t)·U` (H in Hz) is integrated
//! with fixed-step classical Runge–Kutta. After every step the iterate is
//! replaced by the unitary factor of its polar decomposition; the amount of
//! non-unitarity removed is accumulated as the propagator's drift.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qspin::{eigenbasis, expansion_at, stroke_hamiltonian, ComplexMat2, StrokeKind};

pub const DEFAULT_STEPS: usize = 4096;
pub const MIN_STEPS: usize = 100;

/// Largest accumulated non-unitarity tolerated over one ramp.
pub const UNITARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Expansion,
    Compression,
}

/// The drive shared by the expansion and compression strokes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampProtocol {
    nu_cold: f64,
    nu_hot: f64,
    tau: f64,
    steps: usize,
}

impl RampProtocol {
    /// Protocol with [`DEFAULT_STEPS`] integration steps.
    pub fn new(nu_cold: f64, nu_hot: f64, tau: f64) -> Result<Self> {
        if !(nu_cold.is_finite() && nu_cold > 0.0) {
            return Err(Error::Domain(format!("nu_cold must be positive, got {nu_cold}")));
        }
        if !(nu_hot.is_finite() && nu_hot > nu_cold) {
            return Err(Error::Domain(format!(
                "nu_hot must exceed nu_cold ({nu_cold} Hz), got {nu_hot}"
            )));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::Domain(format!("tau must be positive, got {tau}")));
        }
        Ok(Self { nu_cold, nu_hot, tau, steps: DEFAULT_STEPS })
    }

    pub fn with_steps(self, steps: usize) -> Result<Self> {
        if steps < MIN_STEPS {
            return Err(Error::Domain(format!("steps must be at least {MIN_STEPS}, got {steps}")));
        }
        Ok(Self { steps, ..self })
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Self::new(self.nu_cold, self.nu_hot, tau)?.with_steps(self.steps)
    }

    pub fn nu_cold(&self) -> f64 {
        self.nu_cold
    }

    pub fn nu_hot(&self) -> f64 {
        self.nu_hot
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// A ramp propagator together with the drift removed while computing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Propagator {
    u: ComplexMat2,
    protocol: RampProtocol,
    direction: Direction,
    drift: f64,
}

impl Propagator {
    pub fn u(&self) -> &ComplexMat2 {
        &self.u
    }

    pub fn protocol(&self) -> &RampProtocol {
        &self.protocol
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Sum over steps of `‖M†M − I‖_max` of the raw Runge–Kutta update.
    pub fn drift(&self) -> f64 {
        self.drift
    }
}

/// `−i·2π·H` at the fractional time `s`.
fn generator(proto: &RampProtocol, direction: Direction, s: f64) -> ComplexMat2 {
    let h = match direction {
        Direction::Expansion => expansion_at(proto, s),
        Direction::Compression => -expansion_at(proto, 1.0 - s),
    };
    h.scale(C64::new(0.0, -TAU))
}

pub fn propagate(proto: &RampProtocol, direction: Direction) -> Result<Propagator> {
    let n = proto.steps;
    let dt = proto.tau / n as f64;
    let inv_n = 1.0 / n as f64;
    let mut u = ComplexMat2::identity();
    let mut drift = 0.0;

    let mut a_start = generator(proto, direction, 0.0);
    for k in 0..n {
        let a_mid = generator(proto, direction, (k as f64 + 0.5) * inv_n);
        let a_end = generator(proto, direction, (k + 1) as f64 * inv_n);

        let k1 = a_start * u;
        let k2 = a_mid * (u + k1 * (0.5 * dt));
        let k3 = a_mid * (u + k2 * (0.5 * dt));
        let k4 = a_end * (u + k3 * dt);
        let m = u + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);

        drift += m.unitarity_defect();
        u = m.polar_unitary().ok_or(Error::Accuracy { steps: n, drift: f64::INFINITY, limit: UNITARITY_TOL })?;
        a_start = a_end;
    }

    if !(drift <= UNITARITY_TOL) || !u.is_finite() {
        return Err(Error::Accuracy { steps: n, drift, limit: UNITARITY_TOL });
    }
    Ok(Propagator { u, protocol: *proto, direction, drift })
}

/// Expansion and compression propagators of one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RampPair {
    pub expansion: Propagator,
    pub compression: Propagator,
}

impl RampPair {
    pub fn compute(proto: &RampProtocol) -> Result<Self> {
        let (expansion, compression) = rayon::join(
            || propagate(proto, Direction::Expansion),
            || propagate(proto, Direction::Compression),
        );
        Ok(Self { expansion: expansion?, compression: compression? })
    }

    /// `max |V − U†|` entrywise.
    pub fn adjoint_mismatch(&self) -> f64 {
        self.compression.u.max_diff(&self.expansion.u.adjoint())
    }
}

/// Transition probability `|⟨+_hot|U|−_cold⟩|²` of the expansion ramp.
pub fn xi(proto: &RampProtocol) -> Result<f64> {
    let u = propagate(proto, Direction::Expansion)?;
    let cold = eigenbasis(&stroke_hamiltonian(StrokeKind::Cold, proto.nu_cold)?)?;
    let hot = eigenbasis(&stroke_hamiltonian(StrokeKind::Hot, proto.nu_hot)?)?;
    Ok(u.u.matrix_element(&hot.plus, &cold.minus).norm_sqr())
}

/// The four transition probabilities that the unitarity of the ramp
/// forces to coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiSymmetry {
    /// `|⟨+_hot|U|−_cold⟩|²`
    pub plus_hot_u_minus_cold: f64,
    /// `|⟨−_hot|U|+_cold⟩|²`
    pub minus_hot_u_plus_cold: f64,
    /// `|⟨+_cold|V|−_hot⟩|²`
    pub plus_cold_v_minus_hot: f64,
    /// `|⟨−_cold|V|+_hot⟩|²`
    pub minus_cold_v_plus_hot: f64,
}

impl XiSymmetry {
    pub fn values(&self) -> [f64; 4] {
        [
            self.plus_hot_u_minus_cold,
            self.minus_hot_u_plus_cold,
            self.plus_cold_v_minus_hot,
            self.minus_cold_v_plus_hot,
        ]
    }

    pub fn max_pairwise_difference(&self) -> f64 {
        let v = self.values();
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

pub fn xi_symmetry_check(proto: &RampProtocol) -> Result<XiSymmetry> {
    let pair = RampPair::compute(proto)?;
    xi_symmetry_from(proto, &pair)
}

pub(crate) fn xi_symmetry_from(proto: &RampProtocol, pair: &RampPair) -> Result<XiSymmetry> {
    let cold = eigenbasis(&stroke_hamiltonian(StrokeKind::Cold, proto.nu_cold)?)?;
    let hot = eigenbasis(&stroke_hamiltonian(StrokeKind::Hot, proto.nu_hot)?)?;
    let u = pair.expansion.u;
    let v = pair.compression.u;
    Ok(XiSymmetry {
        plus_hot_u_minus_cold: u.matrix_element(&hot.plus, &cold.minus).norm_sqr(),
        minus_hot_u_plus_cold: u.matrix_element(&hot.minus, &cold.plus).norm_sqr(),
        plus_cold_v_minus_hot: v.matrix_element(&cold.plus, &hot.minus).norm_sqr(),
        minus_cold_v_plus_hot: v.matrix_element(&cold.minus, &hot.plus).norm_sqr(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_proto(tau: f64) -> RampProtocol {
        RampProtocol::new(2000.0, 3600.0, tau).unwrap()
    }

    #[test]
    fn protocol_validation() {
        assert!(RampProtocol::new(0.0, 3600.0, 1e-4).is_err());
        assert!(RampProtocol::new(3600.0, 2000.0, 1e-4).is_err());
        assert!(RampProtocol::new(2000.0, 2000.0, 1e-4).is_err());
        assert!(RampProtocol::new(2000.0, 3600.0, 0.0).is_err());
        assert!(RampProtocol::new(2000.0, 3600.0, f64::NAN).is_err());
        assert!(reference_proto(1e-4).with_steps(99).is_err());
        assert_eq!(reference_proto(1e-4).with_steps(100).unwrap().steps(), 100);
        assert_eq!(reference_proto(1e-4).steps(), DEFAULT_STEPS);
    }

    #[test]
    fn sudden_quench_is_identity() {
        let p = propagate(&reference_proto(1e-12), Direction::Expansion).unwrap();
        assert!(p.u().max_diff(&ComplexMat2::identity()) < 1e-6);
        assert!((xi(&reference_proto(1e-12)).unwrap() - 0.5).abs() < 1e-6);
        let sym = xi_symmetry_check(&reference_proto(1e-12)).unwrap();
        for v in sym.values() {
            assert!((v - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn unitarity_and_adjoint_relation() {
        for tau in [50e-6, 100e-6, 200e-6, 400e-6, 1e-3] {
            let pair = RampPair::compute(&reference_proto(tau).with_steps(1000).unwrap()).unwrap();
            assert!(pair.expansion.u().unitarity_defect() <= 1e-9);
            assert!(pair.expansion.drift() <= 1e-9);
            assert!(pair.adjoint_mismatch() <= 1e-8, "tau {tau}: {}", pair.adjoint_mismatch());
        }
    }

    #[test]
    fn xi_at_table_duration() {
        // Backed out of the printed ρ₂: ⟨σy⟩ = 2·Im(ρ₂[0,1]) = −0.34 and
        // Tr(ρ₂H_hot) = −½ν_hot·0.48·(1−2ξ) give ξ = ½(1 − 0.34/0.48) ≈ 0.146.
        let from_table = 0.5 * (1.0 - 0.34 / 0.48);
        let x = xi(&reference_proto(200e-6)).unwrap();
        assert!((x - from_table).abs() < 0.01, "xi = {x}");
    }

    #[test]
    fn adiabatic_limit() {
        let proto = reference_proto(1.0).with_steps(4_000_000).unwrap();
        assert!(xi(&proto).unwrap() < 1e-3);
    }

    #[test]
    fn too_few_steps_is_an_accuracy_error() {
        let proto = reference_proto(5e-3).with_steps(150).unwrap();
        assert!(matches!(propagate(&proto, Direction::Expansion), Err(Error::Accuracy { .. })));
        let long = reference_proto(1.0);
        assert!(matches!(xi(&long), Err(Error::Accuracy { .. })));
    }

    #[test]
    fn symmetry_probabilities_agree() {
        let sym = xi_symmetry_check(&reference_proto(200e-6)).unwrap();
        assert!(sym.max_pairwise_difference() <= 1e-8);
        let early = xi(&reference_proto(100e-6)).unwrap();
        let late = xi(&reference_proto(400e-6)).unwrap();
        assert!(early > late);
    }

    #[test]
    fn step_doubling_converges() {
        for tau in [100e-6, 200e-6, 400e-6] {
            let base = reference_proto(tau);
            let coarse = xi(&base).unwrap();
            let fine = xi(&base.with_steps(2 * DEFAULT_STEPS).unwrap()).unwrap();
            assert!((coarse - fine).abs() < 1e-8, "tau {tau}: {coarse} vs {fine}");
        }
    }

    #[test]
    fn decay_over_tau_grid() {
        let taus: Vec<f64> = (0..=6).map(|k| (100.0 + 50.0 * k as f64) * 1e-6).collect();
        let xis: Vec<f64> = taus.iter().map(|&t| xi(&reference_proto(t)).unwrap()).collect();
        assert!(xis.iter().all(|&x| (0.0..=0.5 + 1e-9).contains(&x)));
        let late = taus.iter().zip(&xis).filter(|(t, _)| **t >= 300e-6 - 1e-12).map(|(_, x)| *x);
        let early = taus.iter().zip(&xis).filter(|(t, _)| **t <= 150e-6 + 1e-12).map(|(_, x)| *x);
        assert!(late.fold(0.0, f64::max) < early.fold(1.0, f64::min));
    }
}
