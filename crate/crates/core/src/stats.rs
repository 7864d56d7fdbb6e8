//! Small numerical helpers shared by the checks: log-log slope fits,
//! Richardson extrapolation and Monte-Carlo summaries.

use num_complex::Complex64;

/// Defects at or below this level are treated as round-off and excluded from fits.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Least-squares slope of `ln y` against `ln x`, using points with `y` above
/// [`ROUNDOFF_FLOOR`]. `None` when fewer than two such points remain.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > ROUNDOFF_FLOOR && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// One Richardson step for a quantity with leading error `C h^order`:
/// combines the estimates at `h` and `h / 2`.
pub fn richardson(at_h: f64, at_half: f64, order: i32) -> f64 {
    let f = 2f64.powi(order);
    (f * at_half - at_h) / (f - 1.0)
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Complex mean with the standard error of `|mean|` taken from both parts.
pub fn complex_mean_stderr(values: &[Complex64]) -> (Complex64, f64) {
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    let (mr, sr) = mean_stderr(&re);
    let (mi, si) = mean_stderr(&im);
    (Complex64::new(mr, mi), (sr * sr + si * si).sqrt())
}
