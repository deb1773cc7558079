//! Least-squares fits on log-log data.

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    line(xs, ys).0
}

/// `(slope, intercept)` of the least-squares line.
pub fn line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let s = sxy / sxx;
    (s, my - s * mx)
}

/// Slope and its standard error; the error is zero for two points.
pub fn slope_with_se(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let (s, c) = line(xs, ys);
    let n = xs.len();
    if n <= 2 {
        return (s, 0.0);
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - s * x - c).powi(2)).sum();
    (s, (rss / (n - 2) as f64 / sxx).sqrt())
}

/// Slope of `ln y` against `ln x`, skipping pairs with `y` below `floor`.
/// Returns `None` when fewer than two points survive.
pub fn loglog_slope(xs: &[f64], ys: &[f64], floor: f64) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| **y >= floor && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    (lx.len() >= 2).then(|| slope(&lx, &ly))
}

/// Multiple regression `ln y = c + p ln x + q ln z`; returns `(p, q)`.
pub fn loglog_plane(xs: &[f64], zs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = ys.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let lz: Vec<f64> = zs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let m = |v: &[f64]| v.iter().sum::<f64>() / n;
    let (mx, mz, my) = (m(&lx), m(&lz), m(&ly));
    let mut sxx = 0.0;
    let mut szz = 0.0;
    let mut sxz = 0.0;
    let mut sxy = 0.0;
    let mut szy = 0.0;
    for i in 0..ys.len() {
        let (dx, dz, dy) = (lx[i] - mx, lz[i] - mz, ly[i] - my);
        sxx += dx * dx;
        szz += dz * dz;
        sxz += dx * dz;
        sxy += dx * dy;
        szy += dz * dy;
    }
    let det = sxx * szz - sxz * sxz;
    ((sxy * szz - szy * sxz) / det, (szy * sxx - sxy * sxz) / det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        assert!((loglog_slope(&xs, &ys, 0.0).unwrap() + 1.5).abs() < 1e-12);
        assert!(loglog_slope(&xs, &ys, 10.0).is_none());
    }

    #[test]
    fn standard_error_vanishes_on_exact_lines() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (s, se) = slope_with_se(&xs, &ys);
        assert!((s - 2.0).abs() < 1e-14 && se < 1e-14);
        let (_, se) = slope_with_se(&xs, &[1.0, 3.2, 4.8, 7.0]);
        assert!(se > 0.0);
    }

    #[test]
    fn plane_recovers_both_exponents() {
        let mut xs = vec![];
        let mut zs = vec![];
        let mut ys = vec![];
        for &x in &[0.02, 0.05, 0.1] {
            for &z in &[0.1, 0.05, 0.025] {
                xs.push(x);
                zs.push(z);
                ys.push(2.0 * f64::powf(x, 3.0) * f64::powf(z, -1.5));
            }
        }
        let (p, q) = loglog_plane(&xs, &zs, &ys);
        assert!((p - 3.0).abs() < 1e-10 && (q + 1.5).abs() < 1e-10);
    }
}
