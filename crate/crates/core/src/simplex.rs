//! Nelder–Mead downhill simplex minimization.

use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct NelderMead {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once `f(worst) − f(best) ≤ tol`.
    pub tol: f64,
    pub max_iters: usize,
    /// Edge length of the initial simplex, relative to `max(1, |x₀ᵢ|)`.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            tol: 1e-8,
            max_iters: 2000,
            initial_step: 0.25,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, best value)` each time the best vertex improved.
    pub trace: Vec<(usize, f64)>,
}

fn affine(base: &[f64], dir_from: &[f64], dir_to: &[f64], t: f64) -> Vec<f64> {
    // base + t (dir_to − dir_from)
    base.iter()
        .zip(dir_from.iter().zip(dir_to))
        .map(|(b, (f, to))| b + t * (to - f))
        .collect()
}

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.initial_step * x0[i].abs().max(1.0);
            let v = eval(&x);
            simplex.push((x, v));
        }

        let mut trace = Vec::new();
        let mut iterations = 0;
        let mut converged = false;
        loop {
            // Stable sort keeps earlier vertices first among ties.
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            if trace.last().map_or(true, |&(_, v)| best < v) {
                trace.push((iterations, best));
            }
            if simplex[n].1 - best <= self.tol {
                converged = true;
                break;
            }
            if iterations >= self.max_iters {
                break;
            }
            iterations += 1;

            let mut centroid = alloc::vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let worst = simplex[n].0.clone();
            let f_worst = simplex[n].1;
            let f_second = simplex[n - 1].1;

            let reflected = affine(&centroid, &worst, &centroid, self.reflection);
            let f_reflected = eval(&reflected);

            if f_reflected < best {
                let expanded = affine(&centroid, &worst, &centroid, self.expansion);
                let f_expanded = eval(&expanded);
                simplex[n] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
                continue;
            }
            if f_reflected < f_second {
                simplex[n] = (reflected, f_reflected);
                continue;
            }

            let (contracted, limit) = if f_reflected < f_worst {
                (
                    affine(&centroid, &centroid, &reflected, self.contraction),
                    f_reflected,
                )
            } else {
                (
                    affine(&centroid, &centroid, &worst, self.contraction),
                    f_worst,
                )
            };
            let f_contracted = eval(&contracted);
            if f_contracted < limit || (f_reflected < f_worst && f_contracted <= limit) {
                simplex[n] = (contracted, f_contracted);
                continue;
            }

            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x = affine(&anchor, &anchor, &vertex.0, self.shrink);
                let v = eval(&x);
                *vertex = (x, v);
            }
        }

        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
            converged,
            trace,
        }
    }
}
