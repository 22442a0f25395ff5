//! Exact single-spin algebra: 2×2 complex matrices, Pauli operators, the
//! stroke Hamiltonians, Gibbs states and the population ↔ inverse
//! temperature map.
//!
//! Units: Planck's constant is set to one, so Hamiltonian entries are
//! frequencies in Hz and inverse temperatures carry units of 1/Hz. Every
//! thermodynamic quantity depends only on the product β·ν.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::{Direction, RampProtocol};

/// Tolerance used for the Hermiticity, trace and positivity checks on
/// density matrices.
pub const DENSITY_TOL: f64 = 1e-12;

/// Relative eigenvalue-gap threshold below which a Hamiltonian counts as
/// degenerate.
pub const DEGENERACY_TOL: f64 = 1e-14;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A dense 2×2 complex matrix stored row-major as `[a00, a01, a10, a11]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMat2(pub [C64; 4]);

impl ComplexMat2 {
    pub const fn new(a00: C64, a01: C64, a10: C64, a11: C64) -> Self {
        Self([a00, a01, a10, a11])
    }

    pub const fn zeros() -> Self {
        Self([ZERO; 4])
    }

    pub const fn identity() -> Self {
        Self([ONE, ZERO, ZERO, ONE])
    }

    /// Builds a matrix from real entries.
    pub fn from_real(a00: f64, a01: f64, a10: f64, a11: f64) -> Self {
        Self::new(a00.into(), a01.into(), a10.into(), a11.into())
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[2 * row + col]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn trace(&self) -> C64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> C64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |self - other|` over all entries.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_diff(&Self::identity())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn apply(&self, v: &Ket) -> Ket {
        let [a, b, c, d] = self.0;
        Ket([a * v.0[0] + b * v.0[1], c * v.0[0] + d * v.0[1]])
    }

    /// `⟨bra|M|ket⟩`.
    pub fn matrix_element(&self, bra: &Ket, ket: &Ket) -> C64 {
        bra.inner(&self.apply(ket))
    }

    /// `M ρ M†`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        *self * *rho * self.adjoint()
    }

    /// Inverse via the adjugate; `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 {
            return None;
        }
        let [a, b, c, d] = self.0;
        Some(Self([d, -b, -c, a]).scale(det.inv()))
    }

    /// Unitary factor of the polar decomposition `M = W·P`, computed from the
    /// closed-form square root of the 2×2 positive matrix `P² = M†M`.
    pub fn polar_unitary(&self) -> Option<Self> {
        let p2 = self.adjoint() * *self;
        let s = p2.det().re.max(0.0).sqrt();
        let t = (p2.trace().re + 2.0 * s).sqrt();
        if !(t > 0.0) {
            return None;
        }
        let sqrt_p = (p2 + Self::identity().scale(s.into())).scale((1.0 / t).into());
        sqrt_p.inverse().map(|inv| *self * inv)
    }

    /// Real coefficients `(c0, cx, cy, cz)` of `c0·I + cx·σx + cy·σy + cz·σz`,
    /// taken from the Hermitian part of the matrix.
    pub fn pauli_components(&self) -> [f64; 4] {
        let [a, b, c, d] = self.0;
        [
            0.5 * (a.re + d.re),
            0.5 * (b.re + c.re),
            0.5 * (c.im - b.im),
            0.5 * (a.re - d.re),
        ]
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        out.iter_mut().zip(rhs.0).for_each(|(a, b)| *a += b);
        Self(out)
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self.0;
        out.iter_mut().zip(rhs.0).for_each(|(a, b)| *a -= b);
        Self(out)
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|z| -z))
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Self([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|z| z * rhs))
    }
}

impl fmt::Display for ComplexMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |z: C64| format!("{:+.4}{:+.4}i", z.re, z.im);
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            cell(self.0[0]),
            cell(self.0[1]),
            cell(self.0[2]),
            cell(self.0[3])
        )
    }
}

/// A complex 2-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ket(pub [C64; 2]);

impl Ket {
    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Ket) -> ComplexMat2 {
        let [a, b] = self.0;
        let [c, d] = other.0;
        ComplexMat2::new(a * c.conj(), a * d.conj(), b * c.conj(), b * d.conj())
    }

    fn normalized_with_phase(self) -> Ket {
        let n = self.norm_sqr().sqrt();
        let lead = if self.0[0].norm() > DEGENERACY_TOL * n {
            self.0[0]
        } else {
            self.0[1]
        };
        let phase = lead.conj() / lead.norm();
        Ket(self.0.map(|z| z * phase / n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: Axis) -> ComplexMat2 {
    match axis {
        Axis::X => ComplexMat2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => ComplexMat2::new(ZERO, -I, I, ZERO),
        Axis::Z => ComplexMat2::new(ONE, ZERO, ZERO, -ONE),
    }
}

/// Which fixed-frequency Hamiltonian of the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrokeKind {
    /// `−½ν σx`, held during the cooling stroke.
    Cold,
    /// `−½ν σy`, held during the heating stroke.
    Hot,
}

fn check_frequency(nu: f64) -> Result<()> {
    if nu.is_finite() && nu > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("frequency must be positive and finite, got {nu}")))
    }
}

pub fn stroke_hamiltonian(kind: StrokeKind, nu: f64) -> Result<ComplexMat2> {
    check_frequency(nu)?;
    let axis = match kind {
        StrokeKind::Cold => Axis::X,
        StrokeKind::Hot => Axis::Y,
    };
    Ok(pauli(axis) * (-0.5 * nu))
}

/// Expansion or compression drive at time `t ∈ [0, τ]`.
///
/// The expansion Hamiltonian rotates from `σx` to `σy` while its gap is
/// linearly ramped from `ν_cold` to `ν_hot`; the compression Hamiltonian is
/// `−H_exp(τ − t)`.
pub fn ramp_hamiltonian(proto: &RampProtocol, t: f64, direction: Direction) -> Result<ComplexMat2> {
    if !(0.0..=proto.tau()).contains(&t) {
        return Err(Error::Domain(format!(
            "time {t} s outside the ramp interval [0, {}] s",
            proto.tau()
        )));
    }
    Ok(match direction {
        Direction::Expansion => expansion_at(proto, t / proto.tau()),
        Direction::Compression => -expansion_at(proto, 1.0 - t / proto.tau()),
    })
}

/// `H_exp` at the fractional time `s = t/τ`, clamped to `[0, 1]`.
///
/// The quarter-turn is evaluated from whichever end is nearer so that both
/// endpoints reproduce the stroke Hamiltonians exactly.
pub(crate) fn expansion_at(proto: &RampProtocol, s: f64) -> ComplexMat2 {
    let s = s.clamp(0.0, 1.0);
    let nu = proto.nu_cold() * (1.0 - s) + proto.nu_hot() * s;
    let (c, sn) = if s <= 0.5 {
        let a = FRAC_PI_2 * s;
        (a.cos(), a.sin())
    } else {
        let a = FRAC_PI_2 * (1.0 - s);
        (a.sin(), a.cos())
    };
    let h = -0.5 * nu;
    ComplexMat2::new(ZERO, C64::new(h * c, -h * sn), C64::new(h * c, h * sn), ZERO)
}

/// Excited-state population `1/(e^{βν}+1)`, evaluated without overflow.
pub fn population_from_beta(beta: f64, nu: f64) -> f64 {
    logistic_upper(beta * nu)
}

/// `1/(1+e^x)` for any real `x` including ±∞.
fn logistic_upper(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Inverse temperature `ln((1 − p⁺)/p⁺)/ν` in 1/Hz.
pub fn beta_from_population(p_plus: f64, nu: f64) -> Result<f64> {
    check_frequency(nu)?;
    if p_plus == 0.0 || p_plus == 1.0 {
        return Err(Error::InfiniteInverseTemperature { p_plus });
    }
    if !(p_plus > 0.0 && p_plus < 1.0) {
        return Err(Error::Domain(format!("population must lie in (0, 1), got {p_plus}")));
    }
    Ok(((1.0 - p_plus) / p_plus).ln() / nu)
}

/// How a reservoir temperature was specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Temperature {
    Beta(f64),
    PPlus(f64),
}

/// One reservoir: its frequency and its (possibly negative) temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReservoirSpec {
    nu: f64,
    temp: Temperature,
}

impl ReservoirSpec {
    pub fn from_population(nu: f64, p_plus: f64) -> Result<Self> {
        check_frequency(nu)?;
        if !(0.0..=1.0).contains(&p_plus) {
            return Err(Error::Domain(format!("population must lie in [0, 1], got {p_plus}")));
        }
        Ok(Self { nu, temp: Temperature::PPlus(p_plus) })
    }

    pub fn from_beta(nu: f64, beta: f64) -> Result<Self> {
        check_frequency(nu)?;
        if beta.is_nan() {
            return Err(Error::Domain("inverse temperature is NaN".into()));
        }
        Ok(Self { nu, temp: Temperature::Beta(beta) })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn temperature(&self) -> Temperature {
        self.temp
    }

    /// Excited-state population of the reservoir's Gibbs state.
    pub fn p_plus(&self) -> f64 {
        match self.temp {
            Temperature::PPlus(p) => p,
            Temperature::Beta(b) => population_from_beta(b, self.nu),
        }
    }

    /// Inverse temperature; infinite for the pure populations 0 and 1.
    pub fn beta(&self) -> f64 {
        match self.temp {
            Temperature::Beta(b) => b,
            Temperature::PPlus(p) => match beta_from_population(p, self.nu) {
                Ok(b) => b,
                Err(_) if p == 0.0 => f64::INFINITY,
                Err(_) => f64::NEG_INFINITY,
            },
        }
    }

    /// `tanh(½βν)`, which equals `1 − 2p⁺`.
    pub fn polarization(&self) -> f64 {
        match self.temp {
            Temperature::PPlus(p) => 1.0 - 2.0 * p,
            Temperature::Beta(b) => (0.5 * b * self.nu).tanh(),
        }
    }

    /// Gibbs state of the given stroke Hamiltonian at this reservoir's temperature.
    pub fn gibbs_state(&self, kind: StrokeKind) -> Result<DensityMatrix> {
        gibbs_state(&stroke_hamiltonian(kind, self.nu)?, self.beta())
    }
}

/// A validated single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityMatrix(ComplexMat2);

impl DensityMatrix {
    /// Accepts `mat` only if it is Hermitian, unit-trace and positive
    /// semidefinite within [`DENSITY_TOL`].
    pub fn new(mat: ComplexMat2) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let herm = mat.hermitian_deviation();
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("Hermiticity defect {herm:e}")));
        }
        let tr = mat.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not one")));
        }
        let [c0, cx, cy, cz] = mat.pauli_components();
        let r = (cx * cx + cy * cy + cz * cz).sqrt();
        if c0 - r < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {:e}", c0 - r)));
        }
        Ok(Self(mat))
    }

    /// Projects a measured (tomographic) matrix onto the density-matrix set:
    /// Hermitian part, then unit trace. Fails if the result is not
    /// positive semidefinite.
    pub fn from_measured(mat: ComplexMat2) -> Result<Self> {
        let herm = (mat + mat.adjoint()) * 0.5;
        let tr = herm.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidDensityMatrix(format!("non-positive trace {tr}")));
        }
        Self::new(herm * (1.0 / tr))
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMat2::identity() * 0.5)
    }

    pub fn mat(&self) -> &ComplexMat2 {
        &self.0
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalised `ψ`.
    pub fn population(&self, psi: &Ket) -> f64 {
        self.0.matrix_element(psi, psi).re
    }

    /// `Tr(ρ H)`.
    pub fn expectation(&self, op: &ComplexMat2) -> f64 {
        (self.0 * *op).trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// `U ρ U†`, re-validated.
    pub fn evolve(&self, u: &ComplexMat2) -> Result<Self> {
        let out = u.conjugate(&self.0);
        // re-symmetrize away round-off before validating
        Self::new((out + out.adjoint()) * 0.5)
    }
}

/// Normalised eigenvectors of a nondegenerate Hermitian 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenbasis {
    pub plus: Ket,
    pub minus: Ket,
    pub energy_plus: f64,
    pub energy_minus: f64,
}

fn hermitian_check(h: &ComplexMat2) -> Result<()> {
    let dev = h.hermitian_deviation();
    if !h.is_finite() || dev > DENSITY_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Unit Bloch axis `n` and half-gap `r` of `H = c0·I + r·n·σ`.
fn bloch_axis(h: &ComplexMat2) -> (f64, [f64; 3], f64) {
    let [c0, x, y, z] = h.pauli_components();
    let r = (x * x + y * y + z * z).sqrt();
    if r == 0.0 {
        (c0, [0.0, 0.0, 1.0], 0.0)
    } else {
        (c0, [x / r, y / r, z / r], r)
    }
}

/// +1 eigenvector of `n·σ`.
fn spin_up_along(n: [f64; 3]) -> Ket {
    let [nx, ny, nz] = n;
    if nz > -0.5 {
        Ket([C64::new(1.0 + nz, 0.0), C64::new(nx, ny)])
    } else {
        Ket([C64::new(nx, -ny), C64::new(1.0 - nz, 0.0)])
    }
}

/// Eigenvectors ordered by sign of energy, each with its first non-negligible
/// component made real and positive.
pub fn eigenbasis(h: &ComplexMat2) -> Result<Eigenbasis> {
    hermitian_check(h)?;
    let (c0, n, r) = bloch_axis(h);
    if r <= DEGENERACY_TOL * h.max_abs() || r == 0.0 {
        return Err(Error::Degenerate { gap: 2.0 * r });
    }
    let plus = spin_up_along(n).normalized_with_phase();
    let minus = spin_up_along(n.map(|c| -c)).normalized_with_phase();
    Ok(Eigenbasis { plus, minus, energy_plus: c0 + r, energy_minus: c0 - r })
}

/// `e^{−βH}/Tr e^{−βH}` built from the spectral projectors of `H`.
///
/// Populations use a shifted logistic so that any finite or infinite `β`
/// (including negative values) yields finite entries.
pub fn gibbs_state(h: &ComplexMat2, beta: f64) -> Result<DensityMatrix> {
    hermitian_check(h)?;
    if beta.is_nan() {
        return Err(Error::Domain("inverse temperature is NaN".into()));
    }
    let (_, n, r) = bloch_axis(h);
    if beta == 0.0 || r == 0.0 {
        return Ok(DensityMatrix::maximally_mixed());
    }
    let p_up = logistic_upper(2.0 * beta * r);
    let p_down = logistic_upper(-2.0 * beta * r);
    let n_sigma = pauli(Axis::X) * n[0] + pauli(Axis::Y) * n[1] + pauli(Axis::Z) * n[2];
    let proj_up = (ComplexMat2::identity() + n_sigma) * 0.5;
    let proj_down = (ComplexMat2::identity() - n_sigma) * 0.5;
    DensityMatrix::new(proj_up * p_up + proj_down * p_down)
}
