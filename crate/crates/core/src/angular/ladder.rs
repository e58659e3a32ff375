use std::f64::consts::{FRAC_PI_2, LN_2};

use statrs::function::factorial::ln_factorial;

use super::{wigner_d, HalfInt};
use crate::error::{Error, Result};

/// Largest photon number for which the coefficient recursion is run.
pub const MAX_LADDER_JP: u32 = 64;

/// Coefficients `C^{j_p}_{m_p}` of the x-polarized `j_p`-photon number state
/// in the circular basis, before the `1/√(j_p!) · 2^{-j_p/2}` normalization.
///
/// Only projections with the parity of `j_p` are stored, in descending order
/// `m_p = j_p, j_p - 2, …, -j_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientLadder {
    j_p: u32,
    coeffs: Vec<f64>,
}

impl CoefficientLadder {
    pub fn j_p(&self) -> u32 {
        self.j_p
    }

    /// `C^{j_p}_{m_p}`, or `None` if `m_p` has the wrong parity or is out of range.
    pub fn get(&self, m_p: i32) -> Option<f64> {
        let jp = self.j_p as i32;
        if m_p.abs() > jp || (jp - m_p) % 2 != 0 {
            return None;
        }
        Some(self.coeffs[((jp - m_p) / 2) as usize])
    }

    /// `(m_p, C)` pairs, `m_p` descending.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        let jp = self.j_p as i32;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &c)| (jp - 2 * k as i32, c))
    }

    pub fn values(&self) -> &[f64] {
        &self.coeffs
    }

    /// `ln(1/√(j_p!) · 2^{-j_p/2})`.
    pub fn log_normalization(&self) -> f64 {
        -0.5 * ln_factorial(u64::from(self.j_p)) - 0.5 * f64::from(self.j_p) * LN_2
    }
}

/// Runs the two-term coefficient recursion up to `j_p`.
///
/// ```text
/// C^j_m = √((j+m)/2) C^{j-1}_{m-1} + √((j-m)/2) C^{j-1}_{m+1},   C^1_1 = 1
/// ```
///
/// with `C^j_0 = √(2j) C^{j-1}_1` for even `j` and `C^j_0 = 0` for odd `j`.
/// Negative `m` entries are filled by mirror symmetry.
pub fn c_ladder(j_p: u32) -> Result<CoefficientLadder> {
    if !(1..=MAX_LADDER_JP).contains(&j_p) {
        return Err(Error::OutOfRange {
            name: "j_p",
            value: j_p.to_string(),
            range: "1 ..= 64",
        });
    }

    // nonneg[k] holds C^j_{m} for m = j - 2k >= 0
    let mut nonneg: Vec<f64> = vec![1.0];
    for j in 2..=j_p as i32 {
        let prev_j = j - 1;
        let prev = |m: i32| -> f64 {
            if m.abs() > prev_j {
                return 0.0;
            }
            nonneg[((prev_j - m.abs()) / 2) as usize]
        };
        let mut next = Vec::with_capacity(j as usize / 2 + 1);
        let mut m = j;
        while m >= 1 {
            let up = (f64::from(j + m) / 2.0).sqrt() * prev(m - 1);
            let down = (f64::from(j - m) / 2.0).sqrt() * prev(m + 1);
            next.push(up + down);
            m -= 2;
        }
        if m == 0 {
            next.push((2.0 * f64::from(j)).sqrt() * prev(1));
        }
        nonneg = next;
    }

    let jp = j_p as i32;
    let coeffs = (0..=jp)
        .map(|k| {
            let m = (jp - 2 * k).abs();
            nonneg[((jp - m) / 2) as usize]
        })
        .collect();
    Ok(CoefficientLadder { j_p, coeffs })
}

/// Largest deviation between the normalized coefficient ladder and the first
/// column of the quarter-turn d-matrix:
///
/// ```text
/// max_m | (2j)!^{-½} 2^{-j} C^{2j}_{2m} - d^(j)_{m,j}(π/2) |,   j = j_p / 2
/// ```
pub fn verify_c_wigner_identity(j_p: u32) -> Result<f64> {
    let ladder = c_ladder(j_p)?;
    let j = HalfInt::from_twice(j_p as i32);
    let column = wigner_d(j, FRAC_PI_2)?.column(j)?;
    let scale = ladder.log_normalization().exp();
    Ok(ladder
        .values()
        .iter()
        .zip(column)
        .map(|(c, d)| (scale * c - d).abs())
        .fold(0.0, f64::max))
}
