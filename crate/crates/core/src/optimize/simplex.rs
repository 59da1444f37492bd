//! Two-dimensional Nelder–Mead simplex with standard coefficients.

/// Reflection, expansion, contraction and shrink coefficients.
const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Edge length of the initial simplex.
    pub step: f64,
    /// Stop once every vertex is within this distance of the best one.
    pub x_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            step: 0.1,
            x_tol: 1e-6,
            max_evals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexResult {
    pub x: [f64; 2],
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

fn diameter(v: &[([f64; 2], f64); 3]) -> f64 {
    let best = v[0].0;
    v[1..]
        .iter()
        .map(|(p, _)| (p[0] - best[0]).abs().max((p[1] - best[1]).abs()))
        .fold(0.0, f64::max)
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

pub fn minimize<F>(f: F, start: [f64; 2], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn([f64; 2]) -> f64,
{
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: [f64; 2]| {
        evals.set(evals.get() + 1);
        f(x)
    };
    let p1 = [start[0] + opts.step, start[1]];
    let p2 = [start[0], start[1] + opts.step];
    let mut v = [(start, eval(start)), (p1, eval(p1)), (p2, eval(p2))];
    let mut converged = false;

    loop {
        v.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&v) < opts.x_tol {
            converged = true;
            break;
        }
        if evals.get() >= opts.max_evals {
            break;
        }
        let centroid = lerp(v[0].0, v[1].0, 0.5);
        let worst = v[2];

        let xr = lerp(centroid, worst.0, -ALPHA);
        let fr = eval(xr);
        if fr < v[0].1 {
            let xe = lerp(centroid, worst.0, -GAMMA);
            let fe = eval(xe);
            v[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < v[1].1 {
            v[2] = (xr, fr);
            continue;
        }
        // Outside contraction when the reflection beat the worst point,
        // inside contraction otherwise.
        let (xc, fc) = if fr < worst.1 {
            let xc = lerp(centroid, xr, RHO);
            (xc, eval(xc))
        } else {
            let xc = lerp(centroid, worst.0, RHO);
            (xc, eval(xc))
        };
        if fc < fr.min(worst.1) {
            v[2] = (xc, fc);
            continue;
        }
        let best = v[0].0;
        for vertex in v.iter_mut().skip(1) {
            let x = lerp(best, vertex.0, SIGMA);
            *vertex = (x, eval(x));
        }
    }

    SimplexResult {
        x: v[0].0,
        f: v[0].1,
        evals: evals.get(),
        converged,
    }
}
