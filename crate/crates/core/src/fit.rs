//! Least-squares growth slopes for cutoff and coupling scans.

use crate::{Error, Result};

/// Slope of `ln y` against `ln x` by ordinary least squares.
///
/// Points with `y <= 0` are rejected since the logarithm is undefined there.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            context: "log-log fit",
            expected: format!("{} ordinates", x.len()),
            found: y.len().to_string(),
        });
    }
    if x.len() < 2 {
        return Err(Error::invalid("points", "a slope needs at least two points"));
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::invalid("points", "log-log fit needs positive finite values"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("points", "abscissae are all equal"));
    }
    Ok(sxy / sxx)
}

/// Successive ratios `y[i] / y[i-1]`; the first entry is `None`.
pub fn successive_ratios(y: &[f64]) -> Vec<Option<f64>> {
    (0..y.len())
        .map(|i| if i == 0 || y[i - 1] == 0.0 { None } else { Some(y[i] / y[i - 1]) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_nonpositive() {
        assert!(loglog_slope(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn recovers_power_law(c in 0.01f64..100.0, k in -3.0f64..3.0) {
            let x = [1.0, 2.0, 4.0, 8.0];
            let y: Vec<f64> = x.iter().map(|v: &f64| c * v.powf(k)).collect();
            let s = loglog_slope(&x, &y).unwrap();
            prop_assert!((s - k).abs() < 1e-10);
        }
    }
}
