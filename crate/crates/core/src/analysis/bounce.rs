use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// `B(Φ)`: integral of the positive part of `dn₀/dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BounceValue {
    Finite(f64),
    /// Closed finite chains revive forever; the value only covers the
    /// simulated horizon.
    HorizonCapped(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BounceResult {
    pub value: BounceValue,
    pub horizon: f64,
    /// Derivative noise floor below which rises are ignored.
    pub threshold: f64,
}

impl BounceResult {
    pub fn value(&self) -> f64 {
        match self.value {
            BounceValue::Finite(v) | BounceValue::HorizonCapped(v) => v,
        }
    }

    pub fn capped(self) -> Self {
        Self {
            value: BounceValue::HorizonCapped(self.value()),
            ..self
        }
    }
}

pub fn default_threshold(dt: f64) -> f64 {
    1e-9 / dt
}

/// Central-difference `dn₀/dt`, summing `dt·ṅ` wherever `ṅ > threshold`.
pub fn bounce_function(n0: &TimeSeries<f64>, threshold: Option<f64>) -> Result<BounceResult> {
    if n0.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: n0.len(),
        });
    }
    let dt = n0.dt;
    let threshold = threshold.unwrap_or_else(|| default_threshold(dt));
    let value = n0
        .values
        .windows(3)
        .map(|w| (w[2] - w[0]) / (2.0 * dt))
        .filter(|&d| d > threshold)
        .map(|d| d * dt)
        .sum();
    Ok(BounceResult {
        value: BounceValue::Finite(value),
        horizon: n0.time(n0.len() - 1) - n0.t0,
        threshold,
    })
}

/// Zero-bounce predicate `B < max(1e-6, 10·threshold·horizon)`.
pub fn bounce_is_zero(b: &BounceResult) -> bool {
    matches!(b.value, BounceValue::Finite(_))
        && b.value() < (10.0 * b.threshold * b.horizon).max(1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decreasing_series_has_no_bounce() {
        let s = TimeSeries::new(
            0.0,
            0.1,
            (0..100).map(|k| (-0.05 * k as f64).exp()).collect(),
        )
        .unwrap();
        let b = bounce_function(&s, None).unwrap();
        assert_eq!(b.value(), 0.0);
        assert!(bounce_is_zero(&b));
    }

    #[test]
    fn raised_cosine_rises_twice() {
        let dt = 0.001;
        let n = (4.0 * std::f64::consts::PI / dt).round() as usize;
        let s = TimeSeries::new(
            0.0,
            dt,
            (0..=n)
                .map(|k| 0.5 * (1.0 + (k as f64 * dt).cos()))
                .collect(),
        )
        .unwrap();
        let b = bounce_function(&s, None).unwrap();
        assert!((b.value() - 2.0).abs() < 1e-3, "{}", b.value());
        assert!(!bounce_is_zero(&b));
    }

    #[test]
    fn needs_three_samples() {
        let s = TimeSeries::new(0.0, 0.1, vec![1.0, 0.5]).unwrap();
        assert!(matches!(
            bounce_function(&s, None),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn capped_is_never_zero() {
        let s = TimeSeries::new(0.0, 0.1, vec![1.0; 10]).unwrap();
        let b = bounce_function(&s, None).unwrap().capped();
        assert!(!bounce_is_zero(&b));
        assert_eq!(b.value(), 0.0);
    }
}
