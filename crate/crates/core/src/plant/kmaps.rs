//! Steady-state gain maps of the identified first-order channels.

use super::{check_range, PlantConfig, PlantError};

/// The three gain maps, evaluated from a calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMaps {
    pub app_slope: f64,
    pub app_intercept: f64,
    pub bpp: [f64; 3],
    pub steer: [f64; 3],
    pub steer_duty_max: f64,
}

impl Default for KMaps {
    fn default() -> Self {
        KMaps::from(&PlantConfig::default())
    }
}

impl From<&PlantConfig> for KMaps {
    fn from(c: &PlantConfig) -> Self {
        Self {
            app_slope: c.app_slope,
            app_intercept: c.app_intercept,
            bpp: c.bpp_coeffs,
            steer: c.steer_coeffs,
            steer_duty_max: c.steer_duty_max,
        }
    }
}

fn quad(c: &[f64; 3], x: f64) -> f64 {
    (c[0] * x + c[1]) * x + c[2]
}

impl KMaps {
    /// Settle speed (mph) for an accelerator pedal percentage. Pedal
    /// positions too light to hold any speed settle at 0.
    pub fn app(&self, app_pct: f64) -> Result<f64, PlantError> {
        let x = check_range("app_pct", app_pct, 0.0, 100.0)?;
        Ok(self.app_unchecked(x))
    }

    pub(crate) fn app_unchecked(&self, x: f64) -> f64 {
        (self.app_slope * x + self.app_intercept).max(0.0)
    }

    /// Settle deceleration for a brake pedal percentage (negative = slowing).
    pub fn bpp(&self, bpp_pct: f64) -> Result<f64, PlantError> {
        let x = check_range("bpp_pct", bpp_pct, 0.0, 100.0)?;
        Ok(quad(&self.bpp, x))
    }

    pub(crate) fn bpp_unchecked(&self, x: f64) -> f64 {
        quad(&self.bpp, x)
    }

    /// Duty where the steering parabola turns; its increasing branch starts
    /// here.
    pub fn steer_vertex(&self) -> f64 {
        -self.steer[1] / (2.0 * self.steer[0])
    }

    /// Settle steering angle counts on the identified increasing branch.
    pub fn steer(&self, duty_pct: f64) -> Result<f64, PlantError> {
        let lo = self.steer_vertex();
        if !(duty_pct.is_finite() && (lo..=self.steer_duty_max).contains(&duty_pct)) {
            return Err(PlantError::OutOfDomain(duty_pct, lo, self.steer_duty_max));
        }
        Ok(quad(&self.steer, duty_pct))
    }

    pub(crate) fn steer_unchecked(&self, x: f64) -> f64 {
        quad(&self.steer, x)
    }

    /// Settle counts at the vertex, the smallest angle the identified branch
    /// reaches.
    pub fn steer_min_counts(&self) -> f64 {
        quad(&self.steer, self.steer_vertex())
    }

    pub fn steer_max_counts(&self) -> f64 {
        quad(&self.steer, self.steer_duty_max)
    }
}

/// Accelerator map with the default calibration.
pub fn app_k(app_pct: f64) -> Result<f64, PlantError> {
    KMaps::default().app(app_pct)
}

/// Brake map with the default calibration.
pub fn bpp_k(bpp_pct: f64) -> Result<f64, PlantError> {
    KMaps::default().bpp(bpp_pct)
}

/// Steering map with the default calibration.
pub fn steer_k(duty_pct: f64) -> Result<f64, PlantError> {
    KMaps::default().steer(duty_pct)
}
