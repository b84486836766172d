//! Closed forms for a matter-only universe.
//!
//! With a(t) = (t/T)^(2/3) and T = 2/(3 H0):
//!   d(t1, t2) = 3 c T^(2/3) (t2^(1/3) - t1^(1/3))
//!   V4(t2)    = 108 π c³ t2⁴ ∫_0^1 s⁸ (1 - s)³ ds
//!   V̇4(t2)    = 108 π c³ t2³ ∫_0^1 s⁸ (1 - s)² ds
//! where each beta integral is expanded binomially and summed term by term.

use std::f64::consts::PI;

use planckbound::quantities::SPEED_OF_LIGHT as C;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// ∫_0^1 s^p (1 - s)^q ds by expanding (1 - s)^q.
pub fn beta_by_expansion(p: u32, q: u32) -> f64 {
    (0..=q)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(q, k) / f64::from(p + k + 1)
        })
        .sum()
}

pub struct Oracle {
    pub age: f64,
}

impl Oracle {
    pub fn a(&self, t: f64) -> f64 {
        (t / self.age).powf(2.0 / 3.0)
    }

    pub fn d(&self, t1: f64, t2: f64) -> f64 {
        3.0 * C * self.age.powf(2.0 / 3.0) * (t2.cbrt() - t1.cbrt())
    }

    pub fn v4(&self, t2: f64) -> f64 {
        108.0 * PI * C.powi(3) * t2.powi(4) * beta_by_expansion(8, 3)
    }

    pub fn v4_rate(&self, t2: f64) -> f64 {
        108.0 * PI * C.powi(3) * t2.powi(3) * beta_by_expansion(8, 2)
    }
}
