//! Adaptive Dormand–Prince 5(4) integrator for real first-order systems.

use crate::error::{Error, Result};

// Butcher tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

impl Dopri5 {
    /// Integrates `dy/dt = f(t, y)` from `grid[0]` and returns the state at
    /// every grid time. Steps are clipped so each grid time is hit exactly.
    pub fn integrate<F>(&self, mut f: F, grid: &[f64], y0: &[f64]) -> Result<Vec<Vec<f64>>>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        check_grid(grid)?;
        let n = y0.len();
        let mut out = Vec::with_capacity(grid.len());
        out.push(y0.to_vec());
        if grid.len() == 1 {
            return Ok(out);
        }

        let mut y = y0.to_vec();
        let mut t = grid[0];
        let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
        let mut tmp = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        f(t, &y, &mut k[0]);

        let span = grid[grid.len() - 1] - grid[0];
        let mut h = self.initial_step(&y, &k[0], span);
        let mut steps = 0usize;

        for &target in &grid[1..] {
            while t < target {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::IntegrationFailure { t, step: h });
                }
                let last = h >= target - t;
                let step = if last { target - t } else { h };

                stage(&mut tmp, &y, step, &[(A21, &k[0])]);
                f(t + C2 * step, &tmp, &mut k[1]);
                stage(&mut tmp, &y, step, &[(A31, &k[0]), (A32, &k[1])]);
                f(t + C3 * step, &tmp, &mut k[2]);
                stage(
                    &mut tmp,
                    &y,
                    step,
                    &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])],
                );
                f(t + C4 * step, &tmp, &mut k[3]);
                stage(
                    &mut tmp,
                    &y,
                    step,
                    &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])],
                );
                f(t + C5 * step, &tmp, &mut k[4]);
                stage(
                    &mut tmp,
                    &y,
                    step,
                    &[
                        (A61, &k[0]),
                        (A62, &k[1]),
                        (A63, &k[2]),
                        (A64, &k[3]),
                        (A65, &k[4]),
                    ],
                );
                f(t + step, &tmp, &mut k[5]);
                stage(
                    &mut y_new,
                    &y,
                    step,
                    &[
                        (B1, &k[0]),
                        (B3, &k[2]),
                        (B4, &k[3]),
                        (B5, &k[4]),
                        (B6, &k[5]),
                    ],
                );
                f(t + step, &y_new, &mut k[6]);

                let mut err = 0.0;
                for i in 0..n {
                    let e = step
                        * (E1 * k[0][i]
                            + E3 * k[2][i]
                            + E4 * k[3][i]
                            + E5 * k[4][i]
                            + E6 * k[5][i]
                            + E7 * k[6][i]);
                    let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                    err += (e / scale).powi(2);
                }
                let err = (err / n as f64).sqrt();

                if err <= 1.0 {
                    t = if last { target } else { t + step };
                    std::mem::swap(&mut y, &mut y_new);
                    k.swap(0, 6);
                }
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // A clipped final step says nothing about the natural size.
                if !(last && err <= 1.0) || step * factor > h {
                    h = step * factor;
                }
                if h <= f64::EPSILON * t.abs().max(span) {
                    return Err(Error::IntegrationFailure { t, step: h });
                }
            }
            out.push(y.clone());
        }
        Ok(out)
    }

    fn initial_step(&self, y: &[f64], dy: &[f64], span: f64) -> f64 {
        let norm = |v: &[f64]| {
            (v.iter()
                .zip(y)
                .map(|(x, yi)| (x / (self.atol + self.rtol * yi.abs())).powi(2))
                .sum::<f64>()
                / v.len().max(1) as f64)
                .sqrt()
        };
        let (d0, d1) = (norm(y), norm(dy));
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6 * span
        } else {
            0.01 * d0 / d1
        };
        h.min(span).max(f64::EPSILON * span)
    }
}

fn stage(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &Vec<f64>)]) {
    for i in 0..y.len() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        out[i] = y[i] + h * acc;
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Grid("empty time grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Grid("non-finite grid value".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Grid(format!(
            "grid not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}
