//! Richardson-type extrapolation of a sequence toward a parameter value of
//! zero: Neville for polynomial models, a small linear solve for models with
//! `x ln x` terms.

use serde::{Deserialize, Serialize};

/// Outcome of extrapolating `y(x)` to `x = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    pub value: f64,
    /// `(x, estimate)` pairs; see [`extrapolate_with`].
    pub trace: Vec<(f64, f64)>,
    /// Whether the fitted extrapolants were used (otherwise raw values).
    pub used_fit: bool,
}

impl Extrapolated {
    /// Settled to within `tol`: the last correction of the fit, or for raw
    /// samples the last two steps (a single small step can be a coincidence
    /// of an oscillating sequence).
    pub fn converged(&self, tol: f64) -> bool {
        let n = self.trace.len();
        let step = |k: usize| (self.trace[k].1 - self.trace[k - 1].1).abs();
        match (self.used_fit, n) {
            (_, 0 | 1) => false,
            (true, _) | (false, 2) => step(n - 1) <= tol,
            (false, _) => step(n - 1) <= tol && step(n - 2) <= tol,
        }
    }

    /// Difference between the last two trace entries.
    pub fn last_step(&self) -> f64 {
        match self.trace.len() {
            0 | 1 => f64::INFINITY,
            n => (self.trace[n - 1].1 - self.trace[n - 2].1).abs(),
        }
    }
}

/// Value at 0 of the interpolating polynomial through `(xs[i], ys[i])`.
pub fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

/// Basis terms for a generalized Richardson model `y(x) = c₀ + Σ c_k φ_k(x)`
/// with `φ_k(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `x, x², x³, …`
    Powers,
    /// `x ln x, x, x², x³, …`, for limits approached like `s ln s`.
    LogPowers,
    /// `x^a, x^{a+1}, x^{a+2}, …`, for `x^a` times an analytic function.
    Fractional(f64),
}

impl Basis {
    fn term(self, k: usize, x: f64) -> f64 {
        match self {
            Basis::Powers => x.powi(k as i32),
            Basis::LogPowers => match k {
                0 => 1.0,
                1 => x * x.ln(),
                _ => x.powi(k as i32 - 1),
            },
            Basis::Fractional(a) => match k {
                0 => 1.0,
                _ => x.powf(a + (k - 1) as f64),
            },
        }
    }
}

/// `c₀` of the model through the given points (square system, partial
/// pivoting).
pub fn fit_at_zero(xs: &[f64], ys: &[f64], basis: Basis) -> f64 {
    if basis == Basis::Powers {
        return neville_at_zero(xs, ys);
    }
    let n = xs.len();
    let mut a: Vec<Vec<f64>> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let mut row: Vec<f64> = (0..n).map(|k| basis.term(k, x)).collect();
            row.push(y);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let m = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= m * a[col][c];
                }
            }
        }
    }
    a[0][n] / a[0][0]
}

/// Extrapolates to `x = 0` with a polynomial model of degree at most
/// `max_degree`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64], max_degree: usize) -> Extrapolated {
    extrapolate_with(xs, ys, max_degree + 1, Basis::Powers)
}

/// Extrapolates to `x = 0` along the last row of the Richardson table: the
/// `j`-th trace entry fits the `j` smallest-`x` samples with `j` model terms
/// (up to `max_terms`), and records the largest `x` it used.
///
/// The fit is kept only when its last correction is at most a quarter of the
/// last raw step; otherwise it is chasing noise or oscillation, and the raw
/// samples are reported as the trace instead.
pub fn extrapolate_with(xs: &[f64], ys: &[f64], max_terms: usize, basis: Basis) -> Extrapolated {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty() && max_terms >= 1);
    let n = xs.len();
    let row: Vec<(f64, f64)> = (1..=n.min(max_terms))
        .map(|j| (xs[n - j], fit_at_zero(&xs[n - j..], &ys[n - j..], basis)))
        .collect();
    let use_fit = n >= 2 && row.len() >= 2 && {
        let m = row.len();
        let fit_step = (row[m - 1].1 - row[m - 2].1).abs();
        let raw_step = (ys[n - 1] - ys[n - 2]).abs();
        fit_step.is_finite() && fit_step <= 0.25 * raw_step + 1e-15 * ys[n - 1].abs().max(1e-300)
    };
    if use_fit {
        Extrapolated { value: row[row.len() - 1].1, trace: row, used_fit: true }
    } else {
        Extrapolated { value: ys[n - 1], trace: xs.iter().copied().zip(ys.iter().copied()).collect(), used_fit: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_reproduces_polynomials() {
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 3.0 * x + 0.5 * x * x * x).collect();
        assert!((neville_at_zero(&xs, &ys) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_sequence_is_accelerated() {
        let xs = [0.1, 0.05, 0.025, 0.0125];
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 / (1.0 + x)).collect();
        let r = extrapolate_to_zero(&xs, &ys, 3);
        assert!(r.used_fit);
        // remainder of the cubic fit is Π x_i / Π (1 + x_i)
        let bound: f64 = xs.iter().map(|x| x / (1.0 + x)).product();
        assert!((r.value - 1.0).abs() <= bound * 1.0001);
        assert!(r.last_step() < 2e-4);
    }

    #[test]
    fn log_basis_handles_s_log_s() {
        let xs = [0.1, 0.05, 0.025, 0.0125];
        // s·ln(1 + 1/s) → 0
        let ys: Vec<f64> = xs.iter().map(|s: &f64| s * (1.0 + 1.0 / s).ln()).collect();
        let plain = extrapolate_to_zero(&xs, &ys, 3);
        let logs = extrapolate_with(&xs, &ys, 4, Basis::LogPowers);
        assert!(plain.value.abs() > 10.0 * logs.value.abs());
        assert!(logs.value.abs() < 1e-4, "{}", logs.value);
        assert!(logs.used_fit);
    }

    #[test]
    fn oscillating_sequence_falls_back_to_raw() {
        let xs = [1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| (1.0 / x).sin()).collect();
        let r = extrapolate_to_zero(&xs, &ys, 2);
        assert!(!r.used_fit);
        assert_eq!(r.value, ys[3]);
    }
}
