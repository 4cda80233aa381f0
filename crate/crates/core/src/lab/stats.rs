use serde::Serialize;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSe {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl MeanSe {
    /// Summation in slice order, so results do not depend on scheduling.
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { mean: f64::NAN, stderr: f64::NAN, n };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = if n < 2 {
            0.0
        } else {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        };
        Self { mean, stderr, n }
    }

    /// `(mean - 0) / stderr`, infinite for an exact nonzero mean.
    pub fn z_score(&self) -> f64 {
        if self.stderr > 0.0 {
            self.mean / self.stderr
        } else if self.mean == 0.0 {
            0.0
        } else {
            self.mean.signum() * f64::INFINITY
        }
    }
}

/// Cumulative trapezoid of `values` on `grid`.
pub fn cumulative_trapezoid(grid: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    for k in 0..grid.len() {
        if k > 0 {
            acc += 0.5 * (grid[k] - grid[k - 1]) * (values[k] + values[k - 1]);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let m = MeanSe::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        // sample variance 5/3
        assert!((m.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(MeanSe::of(&[7.0]).stderr, 0.0);
        assert!(MeanSe::of(&[]).mean.is_nan());
    }

    #[test]
    fn trapezoid_of_linear_is_exact() {
        let grid: Vec<f64> = (0..11).map(|k| k as f64 * 0.1).collect();
        let c = cumulative_trapezoid(&grid, &grid);
        assert!((c[10] - 0.5).abs() < 1e-15);
    }
}
