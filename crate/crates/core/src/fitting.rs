//! Ordinary least squares on log-log data, used for every convergence-order
//! and scaling-slope estimate in the crate.

/// Result of a least-squares line fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual_rms: f64,
    /// Number of points actually used.
    pub n_used: usize,
}

/// Least-squares fit of `ln y` against `ln x`.
///
/// Pairs with non-positive or non-finite entries are skipped (failed sweep
/// rows are recorded as NaN). Returns `None` when fewer than two usable
/// points remain.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite() && **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    linear_fit(&pts)
}

/// Least-squares fit of `ln y` against `x` (exponential envelope fits).
pub fn semilog_fit(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite() && **y > 0.0)
        .map(|(x, y)| (*x, y.ln()))
        .collect();
    linear_fit(&pts)
}

fn linear_fit(pts: &[(f64, f64)]) -> Option<LineFit> {
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let mx = sx / nf;
    let my = sy / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    Some(LineFit {
        slope,
        intercept,
        residual_rms: (ss_res / nf).sqrt(),
        n_used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_power_law_exactly() {
        let xs: Vec<f64> = (1..=6).map(|k| 2f64.powi(-k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x.powf(1.75)).collect();
        let fit = loglog_fit(&xs, &ys).unwrap();
        assert_relative_eq!(fit.slope, 1.75, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept.exp(), 3.5, epsilon = 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn skips_failed_rows() {
        let xs = [0.5, 0.25, 0.125, 0.0625];
        let ys = [0.5, f64::NAN, 0.125, 0.0625];
        let fit = loglog_fit(&xs, &ys).unwrap();
        assert_eq!(fit.n_used, 3);
        assert_relative_eq!(fit.slope, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn too_few_points_is_none() {
        assert!(loglog_fit(&[1.0], &[2.0]).is_none());
        assert!(loglog_fit(&[1.0, 2.0], &[0.0, -1.0]).is_none());
    }

    #[test]
    fn semilog_recovers_exponential_rate() {
        let xs: Vec<f64> = (0..20).map(|k| 0.05 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|t| 0.7 * (2.0 * t).exp()).collect();
        let fit = semilog_fit(&xs, &ys).unwrap();
        assert_relative_eq!(fit.slope, 2.0, epsilon = 1e-10);
        assert_relative_eq!(fit.intercept.exp(), 0.7, epsilon = 1e-10);
    }
}
