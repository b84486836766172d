//! Quantities far outside `f64` range, carried as base-2 logarithms, and the
//! handful of physical constants and unit conversions the bounds need.
//!
//! Operation counts for the universe-scale scenarios reach `2^1700`, so every
//! multiplicative combination is done on exponents and only exponentiated at
//! the very end, when the result (a length, an energy) is representable again.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Newtonian constant of gravitation, m^3 kg^-1 s^-2 (CODATA 2018).
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
/// Joules per electronvolt (exact since the 2019 SI redefinition).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Meters per megaparsec (IAU 2015).
pub const METERS_PER_MPC: f64 = 3.085_677_581_491_367e22;
/// Seconds per Julian year.
pub const SECONDS_PER_YEAR: f64 = 3.155_76e7;
pub const SECONDS_PER_GYR: f64 = SECONDS_PER_YEAR * 1e9;

/// A strictly positive number stored as its base-2 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LogQuantityRepr", into = "LogQuantityRepr")]
pub struct LogQuantity {
    log2: f64,
}

#[derive(Serialize, Deserialize)]
struct LogQuantityRepr {
    log2_value: f64,
}

impl TryFrom<LogQuantityRepr> for LogQuantity {
    type Error = Error;

    fn try_from(repr: LogQuantityRepr) -> Result<Self> {
        LogQuantity::from_log2(repr.log2_value)
    }
}

impl From<LogQuantity> for LogQuantityRepr {
    fn from(q: LogQuantity) -> Self {
        LogQuantityRepr { log2_value: q.log2 }
    }
}

impl LogQuantity {
    pub const ONE: LogQuantity = LogQuantity { log2: 0.0 };

    pub fn from_log2(log2_value: f64) -> Result<Self> {
        if log2_value.is_finite() {
            Ok(LogQuantity { log2: log2_value })
        } else {
            Err(Error::Domain {
                what: "log2 value",
                value: log2_value,
            })
        }
    }

    /// Rejects zero, negatives, infinities and NaN.
    pub fn from_real(x: f64) -> Result<Self> {
        positive("quantity", x).map(|x| LogQuantity { log2: x.log2() })
    }

    /// `2^n` exactly.
    pub fn power_of_two(n: i64) -> Self {
        LogQuantity { log2: n as f64 }
    }

    /// Product of `base^exponent` factors, summed in log space.
    pub fn from_product(factors: &[(f64, i32)]) -> Result<Self> {
        let mut log2 = 0.0;
        for (index, &(base, exponent)) in factors.iter().enumerate() {
            if !(base > 0.0 && base.is_finite()) {
                return Err(Error::NonPositiveFactor { index, base });
            }
            log2 += f64::from(exponent) * base.log2();
        }
        Self::from_log2(log2)
    }

    pub fn log2(self) -> f64 {
        self.log2
    }

    pub fn log10(self) -> f64 {
        self.log2 * std::f64::consts::LOG10_2
    }

    /// The represented value; `inf` or `0.0` once outside `f64` range.
    pub fn to_real(self) -> f64 {
        self.log2.exp2()
    }

    pub fn powf(self, exponent: f64) -> Self {
        LogQuantity {
            log2: self.log2 * exponent,
        }
    }

    pub fn recip(self) -> Self {
        LogQuantity { log2: -self.log2 }
    }

    /// `m × 10^e` with `1 ≤ m < 10` and four significant digits.
    pub fn to_decimal_string(self) -> String {
        let (mantissa, exponent) = split_mantissa(self.log10(), 10.0, 3);
        format!("{mantissa:.3} × 10^{exponent}")
    }

    /// `k × 2^n` with `1 ≤ k < 2` and three significant digits.
    pub fn to_binary_string(self) -> String {
        let (mantissa, exponent) = split_mantissa(self.log2, 2.0, 2);
        format!("{mantissa:.2} × 2^{exponent}")
    }
}

/// Splits `base^log` into a mantissa in `[1, base)` and an integer exponent,
/// carrying into the exponent when rounding to `decimals` would print `base`.
fn split_mantissa(log: f64, base: f64, decimals: i32) -> (f64, i64) {
    let mut exponent = log.floor();
    let mut mantissa = base.powf(log - exponent);
    let scale = 10f64.powi(decimals);
    if (mantissa * scale).round() / scale >= base {
        exponent += 1.0;
        mantissa /= base;
    }
    (mantissa, exponent as i64)
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for LogQuantity {
    type Output = LogQuantity;

    fn mul(self, other: LogQuantity) -> LogQuantity {
        LogQuantity {
            log2: self.log2 + other.log2,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for LogQuantity {
    type Output = LogQuantity;

    fn div(self, other: LogQuantity) -> LogQuantity {
        LogQuantity {
            log2: self.log2 - other.log2,
        }
    }
}

impl PartialOrd for LogQuantity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.log2.partial_cmp(&other.log2)
    }
}

impl fmt::Display for LogQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({})",
            self.to_binary_string(),
            self.to_decimal_string()
        )
    }
}

/// Fundamental constants and the Planck units derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub hbar: f64,
    pub g: f64,
    pub planck_length: f64,
    pub planck_time: f64,
    /// In eV.
    pub planck_energy: f64,
    pub mpc_in_m: f64,
    pub year_in_s: f64,
}

impl PhysicalConstants {
    pub fn codata2018() -> Self {
        planck_units(SPEED_OF_LIGHT, HBAR, GRAVITATIONAL_CONSTANT)
            .expect("CODATA constants are positive")
    }

    /// `E = ħc/l`, in eV.
    pub fn energy_for_length(&self, length: f64) -> f64 {
        self.hbar * self.c / length / ELEMENTARY_CHARGE
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

pub fn planck_units(c: f64, hbar: f64, g: f64) -> Result<PhysicalConstants> {
    let c = positive("speed of light", c)?;
    let hbar = positive("reduced Planck constant", hbar)?;
    let g = positive("gravitational constant", g)?;
    let planck_length = (hbar * g / (c * c * c)).sqrt();
    let planck_time = planck_length / c;
    Ok(PhysicalConstants {
        c,
        hbar,
        g,
        planck_length,
        planck_time,
        planck_energy: hbar / planck_time / ELEMENTARY_CHARGE,
        mpc_in_m: METERS_PER_MPC,
        year_in_s: SECONDS_PER_YEAR,
    })
}

pub fn meters_to_mpc(meters: f64) -> f64 {
    meters / METERS_PER_MPC
}

pub fn mpc_to_meters(mpc: f64) -> f64 {
    mpc * METERS_PER_MPC
}

/// km s^-1 Mpc^-1 to s^-1.
pub fn hubble_to_si(h0_km_s_mpc: f64) -> f64 {
    h0_km_s_mpc * 1e3 / METERS_PER_MPC
}

pub fn hubble_from_si(h0_per_s: f64) -> f64 {
    h0_per_s * METERS_PER_MPC / 1e3
}

pub fn seconds_to_gyr(seconds: f64) -> f64 {
    seconds / SECONDS_PER_GYR
}

pub fn gyr_to_seconds(gyr: f64) -> f64 {
    gyr * SECONDS_PER_GYR
}
