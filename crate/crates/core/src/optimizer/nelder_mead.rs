//! Nelder-Mead minimization with dimension-adaptive coefficients
//! (Gao & Han, 2012), which behaves far better than the classic constants
//! once the parameter count goes past ten or so.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadSettings {
    pub max_iters: usize,
    /// Stop when the spread of simplex values is at most this...
    pub ftol: f64,
    /// ...and every vertex is within this of the best one (max norm).
    pub xtol: f64,
    pub initial_step: f64,
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    fn for_dimension(n: usize) -> Self {
        if n < 2 {
            return Self { reflect: 1.0, expand: 2.0, contract: 0.5, shrink: 0.5 };
        }
        let n = n as f64;
        Self { reflect: 1.0, expand: 1.0 + 2.0 / n, contract: 0.75 - 0.5 / n, shrink: 1.0 - 1.0 / n }
    }
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub fn minimize<F>(mut f: F, x0: &[f64], settings: &NelderMeadSettings) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut eval = |x: &[f64]| finite_or_inf(f(x));
    if n == 0 {
        return NelderMeadResult { x: vec![], fx: eval(&[]), iterations: 0, converged: true };
    }
    let co = Coefficients::for_dimension(n);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += settings.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    let mut iterations = 0;
    let mut converged = false;
    while iterations < settings.max_iters {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);

        let spread = values[worst] - values[best];
        if spread <= settings.ftol {
            let diameter = simplex
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if diameter <= settings.xtol {
                converged = true;
                break;
            }
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let along = |out: &mut Vec<f64>, from: &[f64], t: f64| {
            for ((o, c), x) in out.iter_mut().zip(&centroid).zip(from) {
                *o = c + t * (x - c);
            }
        };

        along(&mut trial, &simplex[worst], -co.reflect);
        let f_reflect = eval(&trial);

        if f_reflect < values[best] {
            along(&mut trial2, &simplex[worst], -co.reflect * co.expand);
            let f_expand = eval(&trial2);
            if f_expand < f_reflect {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = f_expand;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = f_reflect;
            continue;
        }
        if f_reflect < values[worst] {
            along(&mut trial2, &simplex[worst], -co.reflect * co.contract);
            let f_out = eval(&trial2);
            if f_out <= f_reflect {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = f_out;
                continue;
            }
        } else {
            along(&mut trial2, &simplex[worst], co.contract);
            let f_in = eval(&trial2);
            if f_in < values[worst] {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = f_in;
                continue;
            }
        }

        let anchor = simplex[best].clone();
        for idx in 0..=n {
            if idx == best {
                continue;
            }
            for (x, a) in simplex[idx].iter_mut().zip(&anchor) {
                *x = a + co.shrink * (*x - a);
            }
            values[idx] = eval(&simplex[idx]);
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("simplex is nonempty");
    NelderMeadResult { x: simplex.swap_remove(best), fx: values[best], iterations, converged }
}
