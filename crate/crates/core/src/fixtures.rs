//! Reference density matrices for the τ = 200 μs cycle, embedded from
//! `data/reference_states.json`.

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::qspin::ComplexMat2;

const REFERENCE_JSON: &str = include_str!("../data/reference_states.json");

#[derive(Debug, Clone, Deserialize)]
pub struct StrokeFixture {
    pub label: String,
    experimental: [[f64; 2]; 4],
    theory: [[f64; 2]; 4],
    /// Fidelity reported alongside the measurement.
    pub fidelity: f64,
}

impl StrokeFixture {
    /// Tomographed matrix, exactly as printed.
    pub fn experimental(&self) -> ComplexMat2 {
        to_mat(&self.experimental)
    }

    /// Predicted matrix, rounded to two decimals as printed.
    pub fn theory(&self) -> ComplexMat2 {
        to_mat(&self.theory)
    }
}

fn to_mat(entries: &[[f64; 2]; 4]) -> ComplexMat2 {
    ComplexMat2(entries.map(|[re, im]| C64::new(re, im)))
}

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceStates {
    pub tau_s: f64,
    pub nu_cold_hz: f64,
    pub nu_hot_hz: f64,
    pub p_cold_plus: f64,
    pub p_hot_plus: f64,
    pub achieved_p_cold_plus: f64,
    pub achieved_p_hot_plus: f64,
    pub population_uncertainty: f64,
    pub strokes: Vec<StrokeFixture>,
}

pub fn reference_states() -> ReferenceStates {
    serde_json::from_str(REFERENCE_JSON).expect("embedded reference_states.json is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_loads() {
        let t = reference_states();
        assert_eq!(t.strokes.len(), 4);
        assert_eq!(t.tau_s, 200e-6);
        for s in &t.strokes {
            assert!(s.experimental().hermitian_deviation() < 1e-15);
            assert!(s.theory().hermitian_deviation() < 1e-15);
        }
        // printed ρ₄ (experiment) has diagonal sum 0.90
        assert!((t.strokes[3].experimental().trace().re - 0.9).abs() < 1e-12);
    }
}
