use crate::error::{Error, Result};

/// Principal branch of the Lambert W function on `x ≥ 0`, by Halley
/// iteration on `f(w) = w eʷ − x` from `ln(1 + x)`.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::LambertDomain(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = x.ln_1p();
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let d1 = ew * (w + 1.0);
        let d2 = ew * (w + 2.0);
        let step = f / (d1 - 0.5 * f * d2 / d1);
        w -= step;
        if step.abs() <= 1e-15 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}
