//! Derivative-free simplex minimization (Nelder–Mead) with deterministic
//! tie handling.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Offset of the initial vertices from the start point along each axis.
    pub initial_step: f64,
    /// Stop once every vertex is within this distance of the best one.
    pub diameter_tol: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            initial_step: 0.1,
            diameter_tol: 1e-6,
            max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn distance<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn affine<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    std::array::from_fn(|i| from[i] + t * (to[i] - from[i]))
}

/// Minimizes `f` starting from `start`.
pub fn minimize<const N: usize, F>(f: F, start: [f64; N], opts: &NelderMeadOptions) -> Minimum<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, f(&start)));
    for i in 0..N {
        let mut v = start;
        v[i] += opts.initial_step;
        simplex.push((v, f(&v)));
    }

    let mut iterations = 0;
    loop {
        // stable sort keeps earlier vertices ahead on equal values
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|v| distance(&best, &v.0))
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol || iterations >= opts.max_iterations {
            return Minimum {
                x: best,
                value: simplex[0].1,
                iterations,
                converged: diameter < opts.diameter_tol,
            };
        }
        iterations += 1;

        let centroid: [f64; N] = std::array::from_fn(|i| {
            simplex[..N].iter().map(|v| v.0[i]).sum::<f64>() / N as f64
        });
        let (worst, f_worst) = simplex[N];
        let f_best = simplex[0].1;
        let f_second_worst = simplex[N - 1].1;

        let reflected = affine(&centroid, &worst, -1.0);
        let f_reflected = f(&reflected);

        if f_reflected < f_best {
            let expanded = affine(&centroid, &worst, -2.0);
            let f_expanded = f(&expanded);
            simplex[N] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < f_second_worst {
            simplex[N] = (reflected, f_reflected);
            continue;
        }

        let (contracted, f_contracted) = if f_reflected < f_worst {
            let c = affine(&centroid, &reflected, 0.5);
            (c, f(&c))
        } else {
            let c = affine(&centroid, &worst, 0.5);
            (c, f(&c))
        };
        if f_contracted < f_worst.min(f_reflected) {
            simplex[N] = (contracted, f_contracted);
            continue;
        }

        for v in simplex.iter_mut().skip(1) {
            let shrunk = affine(&best, &v.0, 0.5);
            *v = (shrunk, f(&shrunk));
        }
    }
}
