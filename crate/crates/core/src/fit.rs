//! Least-squares line fits with leave-one-out spread.

/// `(intercept, slope)` of the least-squares line through `(xs, ys)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// Slope with the largest deviation of the leave-one-out refits from it
/// (zero with fewer than three points).
pub fn loo_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let (_, b) = linear_fit(xs, ys);
    let mut hw: f64 = 0.0;
    if xs.len() > 2 {
        for k in 0..xs.len() {
            let x: Vec<f64> = xs.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| *v).collect();
            let y: Vec<f64> = ys.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| *v).collect();
            hw = hw.max((linear_fit(&x, &y).1 - b).abs());
        }
    }
    (b, hw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 - 0.5 * x).collect();
        let (a, b) = linear_fit(&xs, &ys);
        assert!((a - 1.5).abs() < 1e-14 && (b + 0.5).abs() < 1e-14);
        let (b, hw) = loo_slope(&xs, &ys);
        assert!((b + 0.5).abs() < 1e-14 && hw < 1e-13);
    }
}
