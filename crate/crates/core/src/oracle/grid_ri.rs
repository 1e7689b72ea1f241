//! Discretised rate-distortion problem solved by Blahut–Arimoto iterations.
//!
//! Minimises `E[(x−y)²] + λ·I(x;y)` over channels `p(y|x)` on a grid. Given
//! the output marginal `q`, the best channel is `p(y|x) ∝ q(y)·exp(−(x−y)²/λ)`;
//! given the channel, the best `q` is its induced marginal.
//! The objective never increases from one accepted step to the next.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_POINTS: usize = 201;
pub const MIN_POINTS: usize = 101;
/// Half-width of the grids in standard deviations.
pub const GRID_SPAN: f64 = 6.0;
pub const OBJECTIVE_TOL: f64 = 1e-10;
pub const MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridRIProblem {
    pub state_grid: Vec<f64>,
    pub signal_grid: Vec<f64>,
    pub prior_weights: Vec<f64>,
    pub lambda: f64,
}

impl GridRIProblem {
    /// Normal target with the given mean and variance, `points` uniform grid
    /// points over `mean ± 6σ`, the same grid for signals.
    pub fn gaussian(mean: f64, variance: f64, lambda: f64, points: usize) -> Result<Self> {
        let sd = variance.sqrt();
        let half = (points.max(2) - 1) as f64 / 2.0;
        let step = GRID_SPAN * sd / half;
        // Built outward from the mean so the grid is exactly symmetric.
        let grid: Vec<f64> = (0..points)
            .map(|i| mean + step * (i as f64 - half))
            .collect();
        let dens: Vec<f64> = grid
            .iter()
            .map(|x| (-(x - mean) * (x - mean) / (2.0 * variance)).exp())
            .collect();
        let total: f64 = dens.iter().sum();
        let prob = GridRIProblem {
            signal_grid: grid.clone(),
            state_grid: grid,
            prior_weights: dens.iter().map(|d| d / total).collect(),
            lambda,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.state_grid.len();
        if n < MIN_POINTS || self.signal_grid.len() < MIN_POINTS {
            return Err(Error::Domain {
                what: "grid points",
                value: n.min(self.signal_grid.len()) as f64,
                expected: ">= 101",
            });
        }
        if self.prior_weights.len() != n
            || self.prior_weights.iter().any(|w| w.is_nan() || *w < 0.0)
        {
            return Err(Error::Mismatch(
                "prior weights must be non-negative, one per state".into(),
            ));
        }
        let total: f64 = self.prior_weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain {
                what: "sum of prior weights",
                value: total,
                expected: "1 within 1e-12",
            });
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Domain {
                what: "lambda",
                value: self.lambda,
                expected: "finite and > 0",
            });
        }
        Ok(())
    }

    pub fn prior_variance(&self) -> f64 {
        let m: f64 = self.mean();
        self.state_grid
            .iter()
            .zip(&self.prior_weights)
            .map(|(x, w)| w * (x - m) * (x - m))
            .sum()
    }

    fn mean(&self) -> f64 {
        self.state_grid
            .iter()
            .zip(&self.prior_weights)
            .map(|(x, w)| w * x)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRISolution {
    /// Nats.
    pub mutual_info: f64,
    pub mse: f64,
    /// `channel[i][j] = p(y_j | x_i)`.
    #[serde(skip)]
    pub channel: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest increase of the minimised objective between iterations;
    /// zero up to rounding when every step improves it.
    pub max_increase: f64,
}

/// Channel step for the output marginal `q`: fills `chan` with the optimal
/// channel and `marg` with its marginal and returns the objective
/// `E[(x−y)²] + λI = λ(Σ_y m log(q/m) − Σ_x p log Z(x))`.
fn channel_step(
    q: &[f64],
    kernel: &[f64],
    px: &[f64],
    lambda: f64,
    chan: &mut [f64],
    marg: &mut [f64],
) -> f64 {
    let m = q.len();
    marg.iter_mut().for_each(|v| *v = 0.0);
    let mut log_z = 0.0;
    for (i, row) in chan.chunks_mut(m).enumerate() {
        let k = &kernel[i * m..(i + 1) * m];
        let mut z = 0.0;
        for j in 0..m {
            row[j] = q[j] * k[j];
            z += row[j];
        }
        for j in 0..m {
            row[j] /= z;
            marg[j] += px[i] * row[j];
        }
        log_z += px[i] * z.ln();
    }
    let cross: f64 = q
        .iter()
        .zip(marg.iter())
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| b * (a / b).ln())
        .sum();
    lambda * (cross - log_z)
}

/// Depth of the Anderson history.
const ANDERSON_DEPTH: usize = 5;
/// Log-marginal entries are clamped here so that vanished signals stay finite.
const LOG_FLOOR: f64 = -700.0;

/// Normalises a log-marginal in place and returns the marginal.
fn to_marginal(x: &mut [f64], q: &mut [f64]) {
    let top = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = x.iter().map(|v| (v - top).exp()).sum();
    let lse = top + total.ln();
    for (v, p) in x.iter_mut().zip(q.iter_mut()) {
        *v = (*v - lse).max(LOG_FLOOR);
        *p = v.exp();
    }
}

/// Solves the small dense system `a·z = b` (row-major `k×k`) by Gaussian
/// elimination with partial pivoting. Returns `None` if it is singular.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for c in 0..k {
        let piv = (c..k).max_by(|&i, &j| a[i * k + c].abs().total_cmp(&a[j * k + c].abs()))?;
        if a[piv * k + c].abs() < 1e-300 {
            return None;
        }
        for j in 0..k {
            a.swap(c * k + j, piv * k + j);
        }
        b.swap(c, piv);
        for r in c + 1..k {
            let f = a[r * k + c] / a[c * k + c];
            for j in c..k {
                a[r * k + j] -= f * a[c * k + j];
            }
            b[r] -= f * b[c];
        }
    }
    let mut z = vec![0.0; k];
    for c in (0..k).rev() {
        let s: f64 = (c + 1..k).map(|j| a[c * k + j] * z[j]).sum();
        z[c] = (b[c] - s) / a[c * k + c];
    }
    Some(z)
}

/// Blahut–Arimoto iterations from a uniform output marginal.
///
/// The marginal update is accelerated by Anderson mixing on `log q`: each
/// iteration proposes a mixture of the recent Blahut–Arimoto images and
/// keeps it only if it lowers the objective, falling back to the plain
/// update otherwise, so the objective never increases. Plain iterations
/// slow to a crawl when `λ/2 = σ²`, where the optimal marginal collapses to
/// a point. Stops when the objective changes by less than `1e−10`, or after
/// `10⁵` iterations with `converged = false`.
pub fn solve_grid_ri(prob: &GridRIProblem) -> Result<GridRISolution> {
    prob.validate()?;
    let xs = &prob.state_grid;
    let ys = &prob.signal_grid;
    let px = &prob.prior_weights;
    let lambda = prob.lambda;
    let (n, m) = (xs.len(), ys.len());
    let dist: Vec<f64> = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (x - y) * (x - y)))
        .collect();
    let kernel: Vec<f64> = dist.iter().map(|d| (-d / lambda).exp()).collect();

    let mut x = vec![-(m as f64).ln(); m];
    let mut q = vec![1.0 / m as f64; m];
    let mut chan = vec![0.0; n * m];
    let mut marg = vec![0.0; m];
    let mut obj = channel_step(&q, &kernel, px, lambda, &mut chan, &mut marg);

    let mut x_try = vec![0.0; m];
    let mut q_try = vec![0.0; m];
    let mut chan_try = vec![0.0; n * m];
    let mut marg_try = vec![0.0; m];
    // Histories of iterates and residuals `G(x) − x`.
    let mut hist_x: Vec<Vec<f64>> = Vec::new();
    let mut hist_f: Vec<Vec<f64>> = Vec::new();
    let mut max_increase: f64 = 0.0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITER {
        iterations += 1;
        // Plain image G(x) = log marg, normalised.
        let mut gx: Vec<f64> = marg.iter().map(|v| v.ln()).collect();
        let mut gq = vec![0.0; m];
        to_marginal(&mut gx, &mut gq);
        let f: Vec<f64> = gx.iter().zip(&x).map(|(g, v)| g - v).collect();

        let mut proposal = None;
        if !hist_x.is_empty() {
            let k = hist_x.len();
            // Differences against the current point; least squares weighted
            // by the current marginal so that vanished signals do not drive it.
            let dx: Vec<Vec<f64>> = hist_x
                .iter()
                .map(|h| x.iter().zip(h).map(|(a, b)| a - b).collect())
                .collect();
            let df: Vec<Vec<f64>> = hist_f
                .iter()
                .map(|h| f.iter().zip(h).map(|(a, b)| a - b).collect())
                .collect();
            let mut a = vec![0.0; k * k];
            let mut b = vec![0.0; k];
            for i in 0..k {
                for j in 0..k {
                    a[i * k + j] = (0..m).map(|l| q[l] * df[i][l] * df[j][l]).sum();
                }
                b[i] = (0..m).map(|l| q[l] * df[i][l] * f[l]).sum();
            }
            let trace: f64 = (0..k).map(|i| a[i * k + i]).sum();
            for i in 0..k {
                a[i * k + i] += 1e-12 * trace.max(1e-300);
            }
            if let Some(z) = solve_dense(a, b) {
                for j in 0..m {
                    let mut v = x[j] + f[j];
                    for i in 0..k {
                        v -= z[i] * (dx[i][j] + df[i][j]);
                    }
                    x_try[j] = v;
                }
                if x_try.iter().all(|v| v.is_finite()) {
                    to_marginal(&mut x_try, &mut q_try);
                    let o = channel_step(&q_try, &kernel, px, lambda, &mut chan_try, &mut marg_try);
                    if o < obj {
                        proposal = Some(o);
                    }
                }
            }
        }
        let obj_new = match proposal {
            Some(o) => o,
            None => {
                x_try.copy_from_slice(&gx);
                q_try.copy_from_slice(&gq);
                channel_step(&q_try, &kernel, px, lambda, &mut chan_try, &mut marg_try)
            }
        };
        hist_x.push(x.clone());
        hist_f.push(f);
        if hist_x.len() > ANDERSON_DEPTH {
            hist_x.remove(0);
            hist_f.remove(0);
        }

        max_increase = max_increase.max(obj_new - obj);
        debug_assert!(
            obj_new - obj <= 1e-12 * obj.abs().max(1.0),
            "objective increased from {obj} to {obj_new}"
        );
        let change = (obj - obj_new).abs();
        std::mem::swap(&mut x, &mut x_try);
        std::mem::swap(&mut q, &mut q_try);
        std::mem::swap(&mut chan, &mut chan_try);
        std::mem::swap(&mut marg, &mut marg_try);
        obj = obj_new;
        if change < OBJECTIVE_TOL {
            converged = true;
            break;
        }
    }

    let mse: f64 = chan
        .chunks(m)
        .zip(dist.chunks(m))
        .zip(px)
        .map(|((c, d), p)| p * c.iter().zip(d).map(|(a, b)| a * b).sum::<f64>())
        .sum();
    let mutual_info = ((obj - mse) / lambda).max(0.0);
    let channel = chan.chunks(m).map(|r| r.to_vec()).collect();
    Ok(GridRISolution {
        mutual_info,
        mse,
        channel,
        iterations,
        converged,
        max_increase,
    })
}

/// Continuum solution: `(I, E[(x−y)²]) = (½ log(2σ²/λ), λ/2)` when `λ/2 < σ²`,
/// else `(0, σ²)`.
pub fn gaussian_rd(variance: f64, lambda: f64) -> (f64, f64) {
    if 0.5 * lambda < variance {
        (0.5 * (2.0 * variance / lambda).ln(), 0.5 * lambda)
    } else {
        (0.0, variance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridRIProblem::gaussian(0.0, 1.0, 0.5, 50).is_err());
        assert!(GridRIProblem::gaussian(0.0, 1.0, -1.0, 201).is_err());
        let mut p = GridRIProblem::gaussian(0.0, 1.0, 0.5, 201).unwrap();
        assert!((p.prior_variance() - 1.0).abs() < 1e-6);
        p.prior_weights[0] += 1e-6;
        assert!(p.validate().is_err());
    }

    #[test]
    fn interior_solution() {
        let p = GridRIProblem::gaussian(0.0, 1.0, 0.5, 201).unwrap();
        let s = solve_grid_ri(&p).unwrap();
        let (i, d) = gaussian_rd(1.0, 0.5);
        assert!(s.converged);
        assert!(
            (s.mutual_info - i).abs() / i < 1e-3,
            "{} vs {i}",
            s.mutual_info
        );
        assert!((s.mse - d).abs() / d < 1e-3, "{} vs {d}", s.mse);
        assert!(s.max_increase <= 1e-12);
        let row_sum: f64 = s.channel[100].iter().sum();
        assert!((row_sum - 1.0).abs() < 1e-12);
    }
}
