//! Derivative-free local minimization (Nelder-Mead simplex).

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex.
    pub step: f64,
    /// Stop once the spread of simplex values falls below this.
    pub f_tol: f64,
    /// ... and the simplex fits in a ball of this radius.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            step: 0.1,
            f_tol: 1e-10,
            x_tol: 1e-9,
            max_iter: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn lerp<const N: usize>(a: &[f64; N], b: &[f64; N], t: f64) -> [f64; N] {
    std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
}

/// Minimizes `f` starting from `x0`.
pub fn nelder_mead<const N: usize, F>(f: F, x0: [f64; N], opts: NelderMeadOptions) -> Minimum<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let mut evaluations = 0;
    let mut eval = |x: &[f64; N]| {
        evaluations += 1;
        f(x)
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, eval(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += opts.step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut converged = false;
    for _ in 0..opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[N].1);
        let radius = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if worst - best <= opts.f_tol && radius <= opts.x_tol {
            converged = true;
            break;
        }

        let centroid: [f64; N] =
            std::array::from_fn(|i| simplex[..N].iter().map(|(x, _)| x[i]).sum::<f64>() / N as f64);
        let worst_x = simplex[N].0;

        let reflected = lerp(&centroid, &worst_x, -REFLECT);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst_x, -EXPAND);
            let fe = eval(&expanded);
            simplex[N] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < simplex[N].1 {
            let c = lerp(&centroid, &reflected, CONTRACT);
            (c, eval(&c))
        } else {
            let c = lerp(&centroid, &worst_x, CONTRACT);
            (c, eval(&c))
        };
        if fc < simplex[N].1.min(fr) {
            simplex[N] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            let x = lerp(&anchor, &vertex.0, SHRINK);
            *vertex = (x, eval(&x));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Minimum {
        x: simplex[0].0,
        value: simplex[0].1,
        evaluations,
        converged,
    }
}
