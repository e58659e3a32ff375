//! State builders and quantum angle (relative-phase) distributions.
//!
//! An [`AngularSector`] is a fixed-`j` amplitude ladder `ψ_{j,m}` ordered
//! `m = j, …, -j`. Its angle wavefunction is the Fourier sum
//! `ψ(φ) = Σ_m ψ_{j,m} e^{+imφ}` and the angle distribution is
//! `|ψ(φ)|² / 2π`.
//!
//! Photonic sectors use the circular-polarization labels `j_p = 2j`,
//! `m_p = 2m`, so their wavefunction is the spin wavefunction at `2φ`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{c_ladder, wigner_d, HalfInt};
use crate::error::{Error, Result};
use crate::quadrature::{golden_section_min, periodic_mean, periodic_nodes};

/// Tolerance on `Σ|ψ|² = 1` for states declared normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Largest photon number accepted by [`x_polarized_number_state`].
pub const MAX_PHOTONS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Ordinary angular momentum, `m` in unit steps.
    Spin,
    /// Circular-polarization photon labels, physical `m_p = 2m`.
    Photonic,
}

impl Flavor {
    fn angle_scale(self) -> f64 {
        match self {
            Flavor::Spin => 1.0,
            Flavor::Photonic => 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngularSector {
    j: HalfInt,
    amps: Vec<Complex64>,
    flavor: Flavor,
}

/// Normalization and most likely angle of a sector's angle distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistributionMoments {
    pub normalization: f64,
    pub argmax_phi: f64,
}

impl AngularSector {
    /// `amps[k]` is the amplitude of `m = j - k`.
    pub fn new(j: HalfInt, amps: Vec<Complex64>, flavor: Flavor) -> Result<Self> {
        j.check_sector_label()?;
        if amps.len() != j.dim() {
            return Err(Error::OutOfRange {
                name: "amplitude count",
                value: amps.len().to_string(),
                range: "2j + 1",
            });
        }
        if let Some(bad) = amps.iter().find(|a| !a.is_finite()) {
            return Err(Error::NonFinite { name: "amplitude", value: bad.norm() });
        }
        Ok(AngularSector { j, amps, flavor })
    }

    pub fn from_real(j: HalfInt, amps: &[f64], flavor: Flavor) -> Result<Self> {
        Self::new(j, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(), flavor)
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, m: HalfInt) -> Result<Complex64> {
        Ok(self.amps[self.j.index_of(m)?])
    }

    /// `(m, ψ_m)` pairs in descending `m`.
    pub fn iter(&self) -> impl Iterator<Item = (HalfInt, Complex64)> + '_ {
        self.j.ladder().zip(self.amps.iter().copied())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Same amplitude ladder, relabelled.
    pub fn with_flavor(&self, flavor: Flavor) -> AngularSector {
        AngularSector { flavor, ..self.clone() }
    }

    pub(crate) fn require_spin(&self) -> Result<()> {
        match self.flavor {
            Flavor::Spin => Ok(()),
            Flavor::Photonic => Err(Error::FlavorMismatch { expected: "spin" }),
        }
    }

    /// `ψ(φ) = Σ_m ψ_{j,m} e^{+imφ}` (photonic: `e^{+i m_p φ}`).
    pub fn angle_wavefunction(&self, phi: f64) -> Result<Complex64> {
        if !phi.is_finite() {
            return Err(Error::NonFinite { name: "phi", value: phi });
        }
        Ok(self.wavefunction_unchecked(phi))
    }

    pub(crate) fn wavefunction_unchecked(&self, phi: f64) -> Complex64 {
        let theta = phi * self.flavor.angle_scale();
        self.iter()
            .map(|(m, a)| a * Complex64::cis(m.value() * theta))
            .sum()
    }

    /// `d|ψ(φ)|²/dφ = 2 Re(conj(ψ) ψ')`.
    fn density_slope_unchecked(&self, phi: f64) -> f64 {
        let scale = self.flavor.angle_scale();
        let theta = phi * scale;
        let (psi, dpsi) = self.iter().fold(
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            |(psi, dpsi), (m, a)| {
                let t = a * Complex64::cis(m.value() * theta);
                (psi + t, dpsi + t * Complex64::new(0.0, m.value() * scale))
            },
        );
        2.0 * (psi.conj() * dpsi).re
    }

    /// `|ψ(φ)|² / 2π`.
    pub fn angle_distribution(&self, phi: f64) -> Result<f64> {
        Ok(self.angle_wavefunction(phi)?.norm_sqr() / TAU)
    }

    /// Node count that integrates `P(φ)` exactly on `[-π, π)`.
    pub fn quadrature_points(&self) -> usize {
        let degree = self.j.twice() as usize * self.flavor.angle_scale() as usize;
        (2 * degree + 2).max(64)
    }

    /// Integral of `P(φ)` over `[-π, π)` and the location of its maximum.
    ///
    /// The integral uses the periodic trapezoid rule, exact here. The maximum
    /// is located on the same grid (ties go to the smaller `|φ|`) and refined
    /// by golden-section search for the zero of `dP/dφ` within the
    /// neighbouring cells; the density itself is too flat at its peak to
    /// resolve better than `√ε`.
    pub fn distribution_moments(&self) -> DistributionMoments {
        let points = self.quadrature_points();
        let density = |phi: f64| self.wavefunction_unchecked(phi).norm_sqr();
        let normalization = periodic_mean(points, density);

        let mut best = (0.0_f64, f64::NEG_INFINITY);
        for phi in periodic_nodes(points) {
            let v = density(phi);
            let tie = (v - best.1).abs() <= 1e-14 * best.1.abs();
            if (v > best.1 && !tie) || (tie && phi.abs() < best.0.abs()) {
                best = (phi, v);
            }
        }
        let h = TAU / points as f64;
        let (x, _) = golden_section_min(|p| self.density_slope_unchecked(p).abs(), best.0 - h, best.0 + h, 1e-12, 0.0);
        let argmax_phi = if x < -PI { x + TAU } else if x >= PI { x - TAU } else { x };
        DistributionMoments { normalization, argmax_phi }
    }
}

/// A two-mode bosonic state in the photon-number basis `|n_u, n_d⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amps: BTreeMap<(u32, u32), Complex64>,
}

impl TwoModeState {
    /// Builds a state from `((n_u, n_d), amplitude)` pairs; repeated pairs
    /// are summed. The result must be normalized to [`NORM_TOL`].
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, u32), Complex64)>,
    {
        let mut amps = BTreeMap::new();
        for (key, a) in entries {
            if !a.is_finite() {
                return Err(Error::NonFinite { name: "amplitude", value: a.norm() });
            }
            *amps.entry(key).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        let state = TwoModeState { amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// `|n_u, n_d⟩`.
    pub fn fock(n_up: u32, n_down: u32) -> Self {
        TwoModeState {
            amps: BTreeMap::from([((n_up, n_down), Complex64::new(1.0, 0.0))]),
        }
    }

    /// All `n` photons in the upper input port, the other port in vacuum.
    pub fn single_port(n: u32) -> Self {
        Self::fock(n, 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.amps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(Complex64::norm_sqr).sum()
    }
}

/// A sector of a [`TwoModeState`] together with its probability weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSector {
    /// Not renormalized: `Σ_m |ψ_m|² = weight`.
    pub sector: AngularSector,
    pub weight: f64,
}

/// Groups Fock amplitudes into fixed-`j` sectors via
/// `j = (n_u + n_d)/2`, `m = (n_u - n_d)/2`. Sectors come back in increasing
/// `j`, spin-flavored, with amplitudes in the port (Fock) labelling.
pub fn two_mode_to_sectors(state: &TwoModeState) -> Vec<WeightedSector> {
    let mut grouped: BTreeMap<i32, Vec<Complex64>> = BTreeMap::new();
    for ((nu, nd), a) in state.iter() {
        let tj = (nu + nd) as i32;
        let j = HalfInt::from_twice(tj);
        let m = HalfInt::from_twice(nu as i32 - nd as i32);
        let ladder = grouped
            .entry(tj)
            .or_insert_with(|| vec![Complex64::new(0.0, 0.0); j.dim()]);
        ladder[j.index_of(m).expect("Schwinger labels are always admissible")] += a;
    }
    grouped
        .into_iter()
        .map(|(tj, amps)| {
            let weight = amps.iter().map(Complex64::norm_sqr).sum();
            let sector = AngularSector { j: HalfInt::from_twice(tj), amps, flavor: Flavor::Spin };
            WeightedSector { sector, weight }
        })
        .collect()
}

/// The x-polarized `n`-photon number state in circular-polarization labels.
///
/// Amplitudes are `C^n_{m_p} / (√(n!) 2^{n/2})` on `m_p = n, n-2, …, -n`.
pub fn x_polarized_number_state(n: u32) -> Result<AngularSector> {
    if !(1..=MAX_PHOTONS).contains(&n) {
        return Err(Error::OutOfRange {
            name: "N",
            value: n.to_string(),
            range: "1 ..= 64",
        });
    }
    let ladder = c_ladder(n)?;
    let scale = ladder.log_normalization().exp();
    let amps: Vec<f64> = ladder.values().iter().map(|c| c * scale).collect();
    AngularSector::from_real(HalfInt::from_twice(n as i32), &amps, Flavor::Photonic)
}

/// `|j, m_x = j⟩` in the `J_z` basis: the first column of `d^(j)(π/2)`.
pub fn spin_up_x_state(j: HalfInt) -> Result<AngularSector> {
    if j.twice() < 1 {
        return Err(Error::OutOfRange {
            name: "2j",
            value: j.twice().to_string(),
            range: "2j >= 1",
        });
    }
    let column = wigner_d(j, FRAC_PI_2)?.column(j)?;
    AngularSector::from_real(j, &column, Flavor::Spin)
}
