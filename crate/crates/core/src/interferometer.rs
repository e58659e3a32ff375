//! Quantum-phase representation of an SU(2) interferometer.
//!
//! Beam splitters are rotations about y: `+π/2` on the way in, `-π/2` on the
//! way out, with a differential phase `D_z(Φ) = exp(-iJ_zΦ)` between them.
//! For an internal state `ψ` (after the input beam splitter) the outcome
//! amplitude is
//!
//! ```text
//! Ψ_m(Φ) = Σ_{m'} d_{m,m'}(-π/2) e^{-im'Φ} ψ_{m'}
//!        = ∫ dφ/2π  S_m(-φ) ψ(φ - Φ),      S_m(φ) = Σ_{m'} d_{m,m'}(-π/2) e^{+im'φ}
//! ```
//!
//! and `P_m(Φ) = |Ψ_m(Φ)|²`, summed over `j` sectors for multi-`j` inputs.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::angular::{wigner_d_cached, HalfInt, WignerDMatrix};
use crate::error::{Error, Result};
use crate::quadrature::periodic_mean;
use crate::states::{two_mode_to_sectors, AngularSector, Flavor, TwoModeState};

/// Fisher contributions with `P_m` below this are treated as a 0/0 limit.
pub const FISHER_PROB_FLOOR: f64 = 1e-14;
/// Largest `|dP_m/dΦ|` accepted as vanishing alongside a floored `P_m`.
pub const FISHER_SLOPE_FLOOR: f64 = 1e-10;

fn check_phi(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

fn output_splitter(j: HalfInt) -> Result<Arc<WignerDMatrix>> {
    wigner_d_cached(j, -FRAC_PI_2)
}

/// `S^(j)_m(φ)`, the Fourier transform of row `m` of `d^(j)(-π/2)`.
pub fn s_function_eval(j: HalfInt, m: HalfInt, phi: f64) -> Result<Complex64> {
    let row = j.index_of(m)?;
    check_phi("phi", phi)?;
    let d = output_splitter(j)?;
    Ok(j.ladder()
        .enumerate()
        .map(|(k, mp)| d.at(row, k) * Complex64::cis(mp.value() * phi))
        .sum())
}

/// `∫ conj(S_m(φ)) S_n(φ) dφ/2π`, evaluated by exact periodic quadrature.
pub fn s_function_overlap(j: HalfInt, m: HalfInt, n: HalfInt) -> Result<Complex64> {
    j.index_of(m)?;
    j.index_of(n)?;
    let points = 2 * j.twice() as usize + 2;
    let mut err = None;
    let value = periodic_mean(points, |phi| {
        match (s_function_eval(j, m, phi), s_function_eval(j, n, phi)) {
            (Ok(a), Ok(b)) => a.conj() * b,
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Maps an input ladder in port labels (`m = (n_u - n_d)/2`) to the internal
/// `J_z` ladder seen between the beam splitters: `ψ = d(+π/2) · ψ_in`.
pub fn apply_input_beam_splitter(input: &AngularSector) -> Result<AngularSector> {
    input.require_spin()?;
    let j = input.j();
    let d = wigner_d_cached(j, FRAC_PI_2)?;
    let n = j.dim();
    let amps = (0..n)
        .map(|row| (0..n).map(|k| d.at(row, k) * input.amps()[k]).sum())
        .collect();
    AngularSector::new(j, amps, Flavor::Spin)
}

fn check_outcome(sector: &AngularSector, m: HalfInt, phi: f64) -> Result<usize> {
    sector.require_spin()?;
    let row = sector.j().index_of(m)?;
    check_phi("Phi", phi)?;
    Ok(row)
}

/// `ψ_{m'} e^{-im'Φ}` for every `m'` of the ladder.
fn phased(sector: &AngularSector, phi: f64) -> Vec<Complex64> {
    sector
        .iter()
        .map(|(mp, psi)| psi * Complex64::cis(-mp.value() * phi))
        .collect()
}

/// Row `row` of `d(-π/2)` applied to phased amplitudes, with its Φ-derivative.
fn row_amplitude(d: &WignerDMatrix, j: HalfInt, phased: &[Complex64], row: usize) -> (Complex64, Complex64) {
    let mut amp = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    for (k, (mp, term)) in j.ladder().zip(phased).enumerate() {
        let t = d.at(row, k) * term;
        amp += t;
        slope += Complex64::new(0.0, -mp.value()) * t;
    }
    (amp, slope)
}

fn direct_unchecked(d: &WignerDMatrix, sector: &AngularSector, row: usize, phi: f64) -> (Complex64, Complex64) {
    row_amplitude(d, sector.j(), &phased(sector, phi), row)
}

/// `Ψ_m(Φ)` by direct matrix-vector evaluation. `sector` is the internal
/// (post input beam splitter) ladder.
pub fn interferometer_amplitude_direct(sector: &AngularSector, m: HalfInt, phi: f64) -> Result<Complex64> {
    let row = check_outcome(sector, m, phi)?;
    let d = output_splitter(sector.j())?;
    Ok(direct_unchecked(&d, sector, row, phi).0)
}

/// `dΨ_m/dΦ = Σ_{m'} (-im') d_{m,m'}(-π/2) e^{-im'Φ} ψ_{m'}`.
pub fn interferometer_amplitude_slope(sector: &AngularSector, m: HalfInt, phi: f64) -> Result<Complex64> {
    let row = check_outcome(sector, m, phi)?;
    let d = output_splitter(sector.j())?;
    Ok(direct_unchecked(&d, sector, row, phi).1)
}

/// `Ψ_m(Φ) = ∫ dφ/2π S_m(-φ) ψ(φ - Φ)` by the periodic trapezoid rule on
/// `4·(2j) + 2` nodes. The integrand has degree at most `2·2j`, so the rule
/// is exact.
pub fn interferometer_amplitude_convolution(sector: &AngularSector, m: HalfInt, phi: f64) -> Result<Complex64> {
    check_outcome(sector, m, phi)?;
    let j = sector.j();
    let points = 4 * j.twice() as usize + 2;
    let mut err = None;
    let value = periodic_mean(points, |x| match s_function_eval(j, m, -x) {
        Ok(s) => s * sector.wavefunction_unchecked(x - phi),
        Err(e) => {
            err = Some(e);
            Complex64::new(0.0, 0.0)
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// `P_m(Φ) = binom(2j, j+m) cos^{2(j+m)}(Φ/2) sin^{2(j-m)}(Φ/2)`: the outcome
/// law for a single-port input `|2j, 0⟩`.
pub fn single_port_closed_form(j: HalfInt, m: HalfInt, phi: f64) -> Result<f64> {
    j.index_of(m)?;
    check_phi("Phi", phi)?;
    let n = j.twice() as u64;
    let up = ((j.twice() + m.twice()) / 2) as u64;
    let down = n - up;
    let (s, c) = (0.5 * phi).sin_cos();
    let mut log = ln_binomial(n, up);
    for (base, exp) in [(c, up), (s, down)] {
        if exp == 0 {
            continue;
        }
        if base == 0.0 {
            return Ok(0.0);
        }
        log += 2.0 * exp as f64 * base.abs().ln();
    }
    Ok(log.exp())
}

/// Fisher information with any 0/0 outcomes reported separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FisherInformation {
    pub value: f64,
    /// Outcomes with `P_m < 1e-14` whose slope did not vanish; excluded
    /// from `value`.
    pub indeterminate: Vec<HalfInt>,
}

impl FisherInformation {
    fn from_terms(terms: impl IntoIterator<Item = (HalfInt, f64, f64)>) -> Self {
        let mut value = 0.0;
        let mut indeterminate = Vec::new();
        for (m, p, dp) in terms {
            if p < FISHER_PROB_FLOOR {
                if dp.abs() >= FISHER_SLOPE_FLOOR {
                    indeterminate.push(m);
                }
                continue;
            }
            value += dp * dp / p;
        }
        FisherInformation { value, indeterminate }
    }

    pub fn is_determinate(&self) -> bool {
        self.indeterminate.is_empty()
    }
}

/// `F(Φ) = Σ_m (dP_m/dΦ)² / P_m` for an internal sector, with the analytic
/// slope `dP_m = 2 Re(conj(Ψ_m) dΨ_m)`.
pub fn fisher_information(sector: &AngularSector, phi: f64) -> Result<FisherInformation> {
    sector.require_spin()?;
    check_phi("Phi", phi)?;
    let d = output_splitter(sector.j())?;
    let phased = phased(sector, phi);
    let terms = sector.j().ladder().enumerate().map(|(row, m)| {
        let (amp, slope) = row_amplitude(&d, sector.j(), &phased, row);
        (m, amp.norm_sqr(), 2.0 * (amp.conj() * slope).re)
    });
    Ok(FisherInformation::from_terms(terms))
}

/// Outcome probabilities at one `Φ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterferometerDistribution {
    pub phi: f64,
    /// `P_m(Φ)` summed over sectors, keyed by outcome `m`.
    pub probs: BTreeMap<HalfInt, f64>,
    pub sectors: Vec<SectorProbs>,
}

/// Contribution of one `j` sector, already scaled by its weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorProbs {
    pub j: HalfInt,
    pub weight: f64,
    /// `m` descending.
    pub probs: Vec<(HalfInt, f64)>,
}

impl InterferometerDistribution {
    pub fn prob(&self, m: HalfInt) -> f64 {
        self.probs.get(&m).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Outcomes in descending `m`, as the figures order them.
    pub fn outcomes(&self) -> impl Iterator<Item = (HalfInt, f64)> + '_ {
        self.probs.iter().rev().map(|(&m, &p)| (m, p))
    }
}

struct PreparedSector {
    j: HalfInt,
    weight: f64,
    internal: AngularSector,
    out: Arc<WignerDMatrix>,
    /// position of each of this sector's outcomes in the shared alphabet
    slots: Vec<usize>,
}

/// A two-mode input pushed through the input beam splitter once, ready for
/// repeated evaluation at many `Φ`.
pub struct PreparedInput {
    sectors: Vec<PreparedSector>,
    outcomes: Vec<HalfInt>,
}

impl PreparedInput {
    pub fn new(state: &TwoModeState) -> Result<Self> {
        let weighted: Vec<_> = two_mode_to_sectors(state)
            .into_iter()
            .filter(|w| w.weight > 0.0)
            .collect();
        let mut outcomes: Vec<HalfInt> = weighted
            .iter()
            .flat_map(|w| w.sector.j().ladder())
            .collect();
        outcomes.sort_unstable_by(|a, b| b.cmp(a));
        outcomes.dedup();

        let sectors = weighted
            .into_iter()
            .map(|w| {
                let j = w.sector.j();
                let slots = j
                    .ladder()
                    .map(|m| outcomes.iter().position(|&o| o == m).expect("outcome in alphabet"))
                    .collect();
                Ok(PreparedSector {
                    j,
                    weight: w.weight,
                    internal: apply_input_beam_splitter(&w.sector)?,
                    out: output_splitter(j)?,
                    slots,
                })
            })
            .collect::<Result<_>>()?;
        Ok(PreparedInput { sectors, outcomes })
    }

    /// Outcome alphabet, `m` descending.
    pub fn outcomes(&self) -> &[HalfInt] {
        &self.outcomes
    }

    /// Internal ladders, one per populated `j`.
    pub fn internal_sectors(&self) -> impl Iterator<Item = &AngularSector> {
        self.sectors.iter().map(|s| &s.internal)
    }

    /// `(P_m, dP_m/dΦ)` aligned with [`Self::outcomes`].
    pub fn probabilities_with_slopes(&self, phi: f64) -> (Vec<f64>, Vec<f64>) {
        let mut probs = vec![0.0; self.outcomes.len()];
        let mut slopes = vec![0.0; self.outcomes.len()];
        for s in &self.sectors {
            let phased = phased(&s.internal, phi);
            for (row, &slot) in s.slots.iter().enumerate() {
                let (amp, d_amp) = row_amplitude(&s.out, s.j, &phased, row);
                probs[slot] += amp.norm_sqr();
                slopes[slot] += 2.0 * (amp.conj() * d_amp).re;
            }
        }
        (probs, slopes)
    }

    /// `P_m(Φ)` aligned with [`Self::outcomes`].
    pub fn probabilities(&self, phi: f64) -> Vec<f64> {
        let mut probs = vec![0.0; self.outcomes.len()];
        for s in &self.sectors {
            let phased = phased(&s.internal, phi);
            for (row, &slot) in s.slots.iter().enumerate() {
                probs[slot] += row_amplitude(&s.out, s.j, &phased, row).0.norm_sqr();
            }
        }
        probs
    }

    pub fn distribution(&self, phi: f64) -> Result<InterferometerDistribution> {
        check_phi("Phi", phi)?;
        let mut probs = BTreeMap::new();
        let sectors = self
            .sectors
            .iter()
            .map(|s| {
                let phased = phased(&s.internal, phi);
                let per_m: Vec<(HalfInt, f64)> = s
                    .j
                    .ladder()
                    .enumerate()
                    .map(|(row, m)| (m, row_amplitude(&s.out, s.j, &phased, row).0.norm_sqr()))
                    .collect();
                for &(m, p) in &per_m {
                    *probs.entry(m).or_insert(0.0) += p;
                }
                SectorProbs { j: s.j, weight: s.weight, probs: per_m }
            })
            .collect();
        Ok(InterferometerDistribution { phi, probs, sectors })
    }

    /// Fisher information of the probability-summed outcome law.
    pub fn fisher_information(&self, phi: f64) -> Result<FisherInformation> {
        check_phi("Phi", phi)?;
        let (p, dp) = self.probabilities_with_slopes(phi);
        Ok(FisherInformation::from_terms(
            self.outcomes.iter().zip(p).zip(dp).map(|((&m, p), dp)| (m, p, dp)),
        ))
    }
}

/// Outcome distribution of a two-mode input at differential phase `Φ`.
///
/// Each `j` sector goes through the input beam splitter, the phase shift
/// and the output beam splitter; probabilities of equal `m` from different
/// sectors are added.
pub fn interferometer_probs(state: &TwoModeState, phi: f64) -> Result<InterferometerDistribution> {
    PreparedInput::new(state)?.distribution(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::spin_up_x_state;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn s_function_spin_half() {
        // d(-π/2) = [[1/√2, 1/√2], [-1/√2, 1/√2]] so S_{+1/2}(0) = √2
        let h = HalfInt::HALF;
        let s = s_function_eval(h, h, 0.0).unwrap();
        assert_abs_diff_eq!(s.re, 2.0 * FRAC_1_SQRT_2, epsilon = 1e-15);
        let s = s_function_eval(h, -h, 0.0).unwrap();
        assert_abs_diff_eq!(s.norm(), 0.0, epsilon = 1e-15);
        assert!(s_function_eval(h, HalfInt::from_int(1), 0.0).is_err());
    }

    #[test]
    fn s_function_top_row_is_spin_up_wavefunction() {
        let j = HalfInt::from_int(2);
        let psi = spin_up_x_state(j).unwrap();
        for k in 0..17 {
            let phi = -PI + 0.37 * k as f64;
            let s = s_function_eval(j, j, phi).unwrap();
            let w = psi.angle_wavefunction(phi).unwrap();
            assert_abs_diff_eq!((s - w).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn s_functions_orthonormal_j2() {
        let j = HalfInt::from_int(2);
        for m in j.ladder() {
            for n in j.ladder() {
                let z = s_function_overlap(j, m, n).unwrap();
                let want = if m == n { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(z.re, want, epsilon = 1e-12);
                assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_port_identity_and_null() {
        for n in 1..=8u32 {
            let j = HalfInt::from_twice(n as i32);
            let internal = spin_up_x_state(j).unwrap();
            let top0 = interferometer_amplitude_direct(&internal, j, 0.0).unwrap();
            assert_abs_diff_eq!(top0.norm(), 1.0, epsilon = 1e-12);
            let top_pi = interferometer_amplitude_direct(&internal, j, PI).unwrap();
            assert!(top_pi.norm_sqr() <= 1e-12);
        }
    }

    #[test]
    fn spin_half_law() {
        let h = HalfInt::HALF;
        let internal = spin_up_x_state(h).unwrap();
        for k in 0..=20 {
            let phi = -PI + 0.3 * k as f64;
            let p = interferometer_amplitude_direct(&internal, h, phi).unwrap().norm_sqr();
            assert_abs_diff_eq!(p, (0.5 * phi).cos().powi(2), epsilon = 1e-14);
        }
    }

    #[test]
    fn routes_agree_at_zero() {
        let j = HalfInt::from_int(2);
        let internal = spin_up_x_state(j).unwrap();
        for m in j.ladder() {
            let a = interferometer_amplitude_direct(&internal, m, 0.0).unwrap();
            let b = interferometer_amplitude_convolution(&internal, m, 0.0).unwrap();
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn photonic_sector_rejected() {
        let s = crate::states::x_polarized_number_state(2).unwrap();
        assert!(matches!(
            interferometer_amplitude_direct(&s, HalfInt::from_int(1), 0.0),
            Err(Error::FlavorMismatch { .. })
        ));
        assert!(fisher_information(&s, 0.3).is_err());
    }

    #[test]
    fn closed_form_printed_cases() {
        let j = HalfInt::from_twice(5);
        for k in 0..=10 {
            let phi = 0.31 * k as f64;
            let (s, c) = (0.5 * phi).sin_cos();
            let top = single_port_closed_form(j, j, phi).unwrap();
            assert_abs_diff_eq!(top, c.powi(10), epsilon = 1e-14);
            let next = single_port_closed_form(j, j - HalfInt::from_int(1), phi).unwrap();
            assert_abs_diff_eq!(next, 5.0 * c.powi(8) * s * s, epsilon = 1e-14);
            let bottom = single_port_closed_form(j, -j, phi).unwrap();
            assert_abs_diff_eq!(bottom, s.powi(10), epsilon = 1e-14);
        }
        assert!(single_port_closed_form(j, j, PI).unwrap() <= 1e-12);
        assert_eq!(single_port_closed_form(j, -j, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn fisher_spin_half_is_one() {
        let internal = spin_up_x_state(HalfInt::HALF).unwrap();
        for phi in [0.2, 0.9, 1.7, 2.8] {
            let f = fisher_information(&internal, phi).unwrap();
            assert!(f.is_determinate());
            assert_abs_diff_eq!(f.value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fisher_vanishes_at_endpoints() {
        let internal = spin_up_x_state(HalfInt::from_int(2)).unwrap();
        for phi in [0.0, PI] {
            let f = fisher_information(&internal, phi).unwrap();
            assert!(f.is_determinate());
            assert!(f.value <= 1e-8, "{phi}: {}", f.value);
        }
    }

    #[test]
    fn mixture_probabilities_add() {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let state = TwoModeState::new([((1, 0), r), ((2, 0), r)]).unwrap();
        let dist = interferometer_probs(&state, 0.0).unwrap();
        assert_abs_diff_eq!(dist.prob(HalfInt::HALF), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dist.prob(HalfInt::from_int(1)), 0.5, epsilon = 1e-12);
        assert_eq!(dist.sectors.len(), 2);
        assert_eq!(dist.probs.len(), 5);
    }
}
