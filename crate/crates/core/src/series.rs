//! Uniform time grids and the sampled series exchanged between the
//! simulators and the analysis routines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `t_k = t0 + k·dt` for `k = 0..len`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub len: usize,
}

impl TimeGrid {
    /// Grid from 0 to `t_max` inclusive. `t_max` is rounded to the nearest
    /// whole number of steps.
    pub fn new(dt: f64, t_max: f64) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "time step must be positive, got {dt}"
            )));
        }
        if !t_max.is_finite() || t_max < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "t_max must be nonnegative, got {t_max}"
            )));
        }
        let steps = (t_max / dt).round() as usize;
        Ok(Self {
            t0: 0.0,
            dt,
            len: steps + 1,
        })
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len - 1)
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.time(k))
    }
}

/// Samples on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries<T> {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<T>,
}

impl<T> TimeSeries<T> {
    pub fn new(t0: f64, dt: f64, values: Vec<T>) -> Result<Self> {
        if dt.is_nan() || dt <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "series dt must be positive, got {dt}"
            )));
        }
        if values.is_empty() {
            return Err(Error::InvalidArgument("series must be nonempty".into()));
        }
        Ok(Self { t0, dt, values })
    }

    pub(crate) fn on_grid(grid: &TimeGrid, values: Vec<T>) -> Self {
        debug_assert_eq!(grid.len, values.len());
        Self {
            t0: grid.t0,
            dt: grid.dt,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn grid(&self) -> TimeGrid {
        TimeGrid {
            t0: self.t0,
            dt: self.dt,
            len: self.values.len(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &T)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.time(k), v))
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> TimeSeries<U> {
        TimeSeries {
            t0: self.t0,
            dt: self.dt,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Index of the sample nearest to `t`, clamped to the grid.
    pub fn index_of(&self, t: f64) -> usize {
        let k = ((t - self.t0) / self.dt).round();
        (k.max(0.0) as usize).min(self.values.len() - 1)
    }
}

impl TimeSeries<f64> {
    /// Samples with `t_lo <= t <= t_hi` (grid-rounded).
    pub fn window(&self, t_lo: f64, t_hi: f64) -> &[f64] {
        let lo = self.index_of(t_lo);
        let hi = self.index_of(t_hi);
        &self.values[lo..=hi]
    }
}

impl TimeSeries<Vec<f64>> {
    /// Vector-valued series; every row must have the same width.
    pub fn from_rows(t0: f64, dt: f64, rows: Vec<Vec<f64>>) -> Result<Self> {
        let series = Self::new(t0, dt, rows)?;
        let width = series.values[0].len();
        if let Some(k) = series.values.iter().position(|r| r.len() != width) {
            return Err(Error::InvalidArgument(format!(
                "row {k} has width {}, expected {width}",
                series.values[k].len()
            )));
        }
        Ok(series)
    }

    pub fn width(&self) -> usize {
        self.values[0].len()
    }

    pub fn column(&self, j: usize) -> TimeSeries<f64> {
        self.map(|row| row[j])
    }
}

/// Largest pointwise deviation between two scalar series on the window
/// `[t_lo, t_hi]`. Both must share the same grid.
pub fn max_abs_deviation(a: &TimeSeries<f64>, b: &TimeSeries<f64>, t_lo: f64, t_hi: f64) -> f64 {
    a.window(t_lo, t_hi)
        .iter()
        .zip(b.window(t_lo, t_hi))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = TimeGrid::new(0.01, 60.0).unwrap();
        assert_eq!(g.len, 6001);
        assert!((g.t_end() - 60.0).abs() < 1e-9);
        assert!(TimeGrid::new(0.0, 1.0).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(TimeSeries::from_rows(0.0, 1.0, vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(TimeSeries::<f64>::new(0.0, 1.0, vec![]).is_err());
    }

    #[test]
    fn window_is_inclusive() {
        let s = TimeSeries::new(0.0, 0.5, (0..10).map(f64::from).collect()).unwrap();
        assert_eq!(s.window(1.0, 2.0), &[2.0, 3.0, 4.0]);
    }
}
