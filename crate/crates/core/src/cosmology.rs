//! Flat ΛCDM background: scale factor, age, conformal time, comoving
//! distance and the past-light-cone 4-volume.
//!
//! All times are SI seconds. Integrals run over `u = t^(1/3)`, which turns
//! the `t^(-2/3)` behaviour of `1/a(t)` at the Big Bang into a bounded,
//! smooth integrand.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{positive, Error, Result};
use crate::quadrature::{build_cumulative, integrate_with_error, CumulativeTable};
use crate::quantities::{hubble_from_si, hubble_to_si, SPEED_OF_LIGHT};

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_GRID_POINTS: usize = 4096;

/// Flatness tolerance on `omega_m + omega_lambda`.
pub const FLATNESS_TOL: f64 = 1e-12;

/// Smallest non-zero table node, as a fraction of `T_U^(1/3)`.
const FIRST_NODE_FRACTION: f64 = 1e-6;

/// `sinh(x)/x`, continuous through zero.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// `asinh(y)/y`, continuous through zero.
fn asinhc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + 3.0 * y2 * y2 / 40.0
    } else {
        y.asinh() / y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosmologyParams {
    /// s^-1.
    h0: f64,
    omega_m: f64,
    omega_lambda: f64,
    /// `2/(3 H0 sqrt(omega_lambda))`; absent in the matter-only limit.
    t_lambda: Option<f64>,
    age: f64,
}

impl CosmologyParams {
    /// `h0` in km s^-1 Mpc^-1.
    pub fn new(h0_km_s_mpc: f64, omega_m: f64, omega_lambda: f64) -> Result<Self> {
        let h0 = positive("Hubble constant", hubble_to_si(h0_km_s_mpc))?;
        if !(omega_m > 0.0 && omega_m <= 1.0) {
            return Err(Error::Domain {
                what: "omega_m in (0, 1]",
                value: omega_m,
            });
        }
        if !(0.0..1.0).contains(&omega_lambda) {
            return Err(Error::Domain {
                what: "omega_lambda in [0, 1)",
                value: omega_lambda,
            });
        }
        let sum = omega_m + omega_lambda;
        if (sum - 1.0).abs() > FLATNESS_TOL {
            return Err(Error::Flatness {
                omega_m,
                omega_lambda,
                sum,
            });
        }
        let t_lambda = (omega_lambda > 0.0).then(|| 2.0 / (3.0 * h0 * omega_lambda.sqrt()));
        let age = age_of_universe(h0, omega_m, omega_lambda)?;
        Ok(CosmologyParams {
            h0,
            omega_m,
            omega_lambda,
            t_lambda,
            age,
        })
    }

    /// H0 = 70 km/s/Mpc, Ω_M = 0.3, Ω_Λ = 0.7.
    pub fn fiducial() -> Self {
        Self::new(70.0, 0.3, 0.7).expect("fiducial cosmology is valid")
    }

    /// Matter-only flat universe.
    pub fn einstein_de_sitter(h0_km_s_mpc: f64) -> Result<Self> {
        Self::new(h0_km_s_mpc, 1.0, 0.0)
    }

    /// s^-1.
    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn h0_km_s_mpc(&self) -> f64 {
        hubble_from_si(self.h0)
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn omega_lambda(&self) -> f64 {
        self.omega_lambda
    }

    pub fn t_lambda(&self) -> Option<f64> {
        self.t_lambda
    }

    /// Age of the universe `T_U`, s.
    pub fn age(&self) -> f64 {
        self.age
    }

    /// `c/H0`, m.
    pub fn hubble_length(&self) -> f64 {
        SPEED_OF_LIGHT / self.h0
    }

    fn x(&self, t: f64) -> f64 {
        self.t_lambda.map_or(0.0, |tl| t / tl)
    }

    /// `Ω_M^(1/3) (3 H0 / 2)^(2/3)`: the coefficient of `t^(2/3)` at early
    /// times, shared by both regimes.
    fn early_amplitude(&self) -> f64 {
        self.omega_m.cbrt() * (1.5 * self.h0).powf(2.0 / 3.0)
    }

    /// `a(t)` without range checks.
    pub(crate) fn a(&self, t: f64) -> f64 {
        self.early_amplitude() * t.powf(2.0 / 3.0) * sinhc(self.x(t)).powf(2.0 / 3.0)
    }

    /// `a(u³)³ · 3u²`, the matter-volume weight in u-space.
    fn a_cubed_jacobian(&self, u: f64) -> f64 {
        let t = u * u * u;
        let s = sinhc(self.x(t));
        let amp = self.early_amplitude();
        3.0 * amp * amp * amp * t * t * u * u * s * s
    }

    /// `dη/du = 3u²/a(u³)`, finite at `u = 0`.
    fn conformal_jacobian(&self, u: f64) -> f64 {
        let t = u * u * u;
        3.0 / (self.early_amplitude() * sinhc(self.x(t)).powf(2.0 / 3.0))
    }
}

/// `a(t) = (Ω_M/Ω_Λ)^(1/3) sinh^(2/3)(t/t_Λ)`, or `(t/T_U)^(2/3)` when Ω_Λ = 0.
pub fn scale_factor(t: f64, params: &CosmologyParams) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain {
            what: "cosmic time (non-negative)",
            value: t,
        });
    }
    Ok(params.a(t))
}

/// `T_U = t_Λ asinh(sqrt(Ω_Λ/Ω_M))`, which tends to `2/(3 H0 sqrt(Ω_M))` as
/// Ω_Λ → 0. `h0` in s^-1.
pub fn age_of_universe(h0: f64, omega_m: f64, omega_lambda: f64) -> Result<f64> {
    let h0 = positive("Hubble constant", h0)?;
    let omega_m = positive("omega_m", omega_m)?;
    if !(omega_lambda >= 0.0 && omega_lambda.is_finite()) {
        return Err(Error::Domain {
            what: "omega_lambda (non-negative)",
            value: omega_lambda,
        });
    }
    let y = (omega_lambda / omega_m).sqrt();
    Ok(2.0 / (3.0 * h0 * omega_m.sqrt()) * asinhc(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableSettings {
    pub rel_tol: f64,
    pub grid_points: usize,
}

impl Default for TableSettings {
    fn default() -> Self {
        TableSettings {
            rel_tol: DEFAULT_REL_TOL,
            grid_points: DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KFactors {
    pub k4u: f64,
    pub k7u: f64,
    pub k8u: f64,
    /// Largest relative error estimate among the three defining integrals.
    pub achieved_rel_error: f64,
}

/// Conformal time and `V4` tabulated over `u = t^(1/3)` on `[0, T_U]`.
#[derive(Debug)]
pub struct LightconeTables {
    params: CosmologyParams,
    settings: TableSettings,
    /// `η(u) = ∫ dt/a`, s.
    eta: CumulativeTable,
    /// `V4(u)`, m³ s.
    v4: CumulativeTable,
    k_factors: OnceLock<KFactors>,
}

/// Node 0 at `u = 0`, the rest log-spaced up to `T_U^(1/3)`.
fn u_grid(u_max: f64, points: usize) -> Vec<f64> {
    let u_min = u_max * FIRST_NODE_FRACTION;
    let steps = (points - 2) as f64;
    let ratio = (u_max / u_min).ln();
    let mut grid = Vec::with_capacity(points);
    grid.push(0.0);
    for i in 0..points - 1 {
        grid.push(u_min * (ratio * i as f64 / steps).exp());
    }
    *grid.last_mut().unwrap() = u_max;
    grid
}

pub fn build_tables(params: &CosmologyParams) -> Result<LightconeTables> {
    LightconeTables::build(params, TableSettings::default())
}

/// k₄U, k₇U and k₈U for `params` at default settings.
pub fn k_factors(params: &CosmologyParams) -> Result<KFactors> {
    build_tables(params)?.k_factors()
}

impl LightconeTables {
    pub fn build(params: &CosmologyParams, settings: TableSettings) -> Result<Self> {
        if settings.grid_points < 8 {
            return Err(Error::Grid("light-cone tables need at least 8 nodes"));
        }
        let grid = u_grid(params.age().cbrt(), settings.grid_points);
        let eta = build_cumulative(|u| params.conformal_jacobian(u), &grid, settings.rel_tol)?;

        let mut tables = LightconeTables {
            params: *params,
            settings,
            v4: CumulativeTable::from_nodes(grid.clone(), vec![0.0; grid.len()], None)?,
            eta,
            k_factors: OnceLock::new(),
        };

        let mut values = Vec::with_capacity(grid.len());
        let mut slopes = Vec::with_capacity(grid.len());
        for &u in &grid {
            values.push(tables.v4_direct(u)?.value);
            // dV4/du = V̇4 · 3u².
            slopes.push(tables.v4_rate_at_u(u)? * 3.0 * u * u);
        }
        tables.v4 = CumulativeTable::from_nodes(grid, values, Some(slopes))?;
        Ok(tables)
    }

    pub fn params(&self) -> &CosmologyParams {
        &self.params
    }

    pub fn settings(&self) -> TableSettings {
        self.settings
    }

    pub fn eta_table(&self) -> &CumulativeTable {
        &self.eta
    }

    pub fn v4_table(&self) -> &CumulativeTable {
        &self.v4
    }

    fn check_time(&self, t: f64) -> Result<f64> {
        let age = self.params.age();
        if !(t >= 0.0 && t <= age * (1.0 + 1e-12)) {
            return Err(Error::OutOfRange {
                x: t,
                lo: 0.0,
                hi: age,
            });
        }
        Ok(t.min(age))
    }

    fn eta_at_u(&self, u: f64) -> f64 {
        self.eta.interpolate(u).expect("u within table range")
    }

    /// Conformal time `∫_0^t dt'/a(t')`, s.
    pub fn conformal_time(&self, t: f64) -> Result<f64> {
        let t = self.check_time(t)?;
        self.eta.interpolate(t.cbrt())
    }

    /// Comoving distance light covers between `t1` and `t2`, m.
    pub fn comoving_distance(&self, t1: f64, t2: f64) -> Result<f64> {
        if t1 > t2 {
            return Err(Error::Domain {
                what: "time ordering t2 - t1 (non-negative)",
                value: t2 - t1,
            });
        }
        let eta1 = self.conformal_time(t1)?;
        let eta2 = self.conformal_time(t2)?;
        Ok(SPEED_OF_LIGHT * (eta2 - eta1))
    }

    /// `(4π/3) ∫_0^t2 a³ d³(t1, t2) dt1`, integrated directly.
    fn v4_direct(&self, u2: f64) -> Result<crate::quadrature::Estimate> {
        let eta2 = self.eta_at_u(u2);
        let c3 = SPEED_OF_LIGHT.powi(3);
        let inner = integrate_with_error(
            |u1| {
                let deta = eta2 - self.eta_at_u(u1);
                self.params.a_cubed_jacobian(u1) * deta * deta * deta
            },
            0.0,
            u2,
            self.settings.rel_tol,
        )?;
        let scale = 4.0 * PI / 3.0 * c3;
        Ok(crate::quadrature::Estimate {
            value: scale * inner.value,
            abs_error: scale * inner.abs_error,
            panels: inner.panels,
        })
    }

    fn v4_rate_at_u(&self, u2: f64) -> Result<f64> {
        if u2 == 0.0 {
            return Ok(0.0);
        }
        let eta2 = self.eta_at_u(u2);
        let inner = integrate_with_error(
            |u1| {
                let deta = eta2 - self.eta_at_u(u1);
                self.params.a_cubed_jacobian(u1) * deta * deta
            },
            0.0,
            u2,
            self.settings.rel_tol,
        )?;
        let a2 = self.params.a(u2 * u2 * u2);
        Ok(4.0 * PI * SPEED_OF_LIGHT.powi(3) * inner.value / a2)
    }

    /// Past-light-cone 4-volume `V4(t2)`, m³ s, from the table.
    pub fn v4(&self, t2: f64) -> Result<f64> {
        let t2 = self.check_time(t2)?;
        self.v4.interpolate(t2.cbrt())
    }

    /// `dV4/dt2 = 4π ∫ a² d² (a(t1)/a(t2)) c dt1`, m³, integrated directly.
    /// Zero at `t2 = 0` by continuity.
    pub fn v4_rate(&self, t2: f64) -> Result<f64> {
        let t2 = self.check_time(t2)?;
        self.v4_rate_at_u(t2.cbrt())
    }

    /// Computed on first use, then cached.
    pub fn k_factors(&self) -> Result<KFactors> {
        if let Some(k) = self.k_factors.get() {
            return Ok(*k);
        }
        let k = self.compute_k_factors()?;
        Ok(*self.k_factors.get_or_init(|| k))
    }

    fn compute_k_factors(&self) -> Result<KFactors> {
        let h0 = self.params.h0();
        let c = SPEED_OF_LIGHT;
        let u_max = self.v4.last();
        let eta_now = self.eta.last_value();
        let rel_tol = self.settings.rel_tol;

        let v4_now = self.v4_direct(u_max)?;
        let k4u = h0.powi(4) * self.v4.last_value() / c.powi(3);

        // a³ d³(t, T_U) · 3u², with d in m.
        let weight = |u: f64| {
            let d = c * (eta_now - self.eta_at_u(u));
            self.params.a_cubed_jacobian(u) * d * d * d
        };

        let fully_connected = integrate_with_error(
            |u| weight(u) * self.v4.interpolate(u).expect("u within table range"),
            0.0,
            u_max,
            rel_tol,
        )?;
        let k8u = 4.0 * PI * h0.powi(8) / (3.0 * c.powi(6)) * fully_connected.value;

        let broadcast = integrate_with_error(
            |u| weight(u) * self.v4_rate_at_u(u).unwrap_or(f64::NAN),
            0.0,
            u_max,
            rel_tol,
        )?;
        let k7u = 4.0 * PI * h0.powi(7) / (3.0 * c.powi(6)) * broadcast.value;

        let achieved_rel_error = v4_now
            .rel_error()
            .max(fully_connected.rel_error())
            .max(broadcast.rel_error());
        Ok(KFactors {
            k4u,
            k7u,
            k8u,
            achieved_rel_error,
        })
    }
}
