//! Derivative-free Nelder-Mead simplex minimizer.

use serde::{Deserialize, Serialize};

/// Simplex settings. Defaults: objective-spread tolerance 1e-6, 3000
/// iterations, standard reflection/expansion/contraction/shrink
/// coefficients, and a finite penalty for infeasible points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexConfig {
    /// Stop once `max - min` of the objective over the simplex falls below this.
    pub tolerance: f64,
    /// When set, additionally require every vertex to lie within this
    /// distance of the best one in each coordinate.
    #[serde(default)]
    pub x_tolerance: Option<f64>,
    pub max_iters: usize,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Value the objective reports for constraint-violating points.
    pub penalty_value: f64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        SimplexConfig {
            tolerance: 1e-6,
            x_tolerance: None,
            max_iters: 3000,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            penalty_value: 1e10,
        }
    }
}

impl SimplexConfig {
    /// Enables the coordinate stopping criterion.
    pub fn with_x_tolerance(mut self, x_tolerance: f64) -> Self {
        self.x_tolerance = Some(x_tolerance);
        self
    }

    pub fn is_valid(&self) -> bool {
        self.tolerance >= 0.0
            && self.x_tolerance.is_none_or(|x| x >= 0.0)
            && self.reflection > 0.0
            && self.expansion > 1.0
            && self.contraction > 0.0
            && self.contraction < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
    }
}

/// Outcome of a simplex run.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Whether the spread criterion was met before the iteration cap.
    pub converged: bool,
}

/// Step applied to coordinate `i` of the start when building the initial
/// simplex: 5% of its magnitude, at least 0.05.
pub fn initial_step(x: f64) -> f64 {
    (0.05 * x.abs()).max(0.05)
}

/// Minimizes `objective` from `start`.
///
/// The objective must be total; return a large finite value for infeasible
/// points rather than NaN. Non-finite values are treated as `+inf` when
/// ordering vertices.
pub fn nelder_mead_minimize<F>(mut objective: F, start: &[f64], config: &SimplexConfig) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    assert!(!start.is_empty(), "simplex needs at least one dimension");
    assert!(config.is_valid(), "invalid simplex coefficients: {config:?}");
    let n = start.len();
    let mut eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += initial_step(start[i]);
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| eval(v)).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut second = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    loop {
        sort_simplex(&mut vertices, &mut values);
        let spread = values[n] - values[0];
        if spread < config.tolerance && config.x_tolerance.is_none_or(|xt| diameter(&vertices) <= xt) {
            converged = true;
            break;
        }
        if values[n] == values[0] && values[0].is_infinite() {
            break;
        }
        if iterations >= config.max_iters {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &vertices[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let worst = &vertices[n];
        along(&centroid, worst, -config.reflection, &mut trial);
        let f_reflect = eval(&trial);

        if f_reflect < values[0] {
            along(&centroid, worst, -config.reflection * config.expansion, &mut second);
            let f_expand = eval(&second);
            if f_expand < f_reflect {
                vertices[n].copy_from_slice(&second);
                values[n] = f_expand;
            } else {
                vertices[n].copy_from_slice(&trial);
                values[n] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[n - 1] {
            vertices[n].copy_from_slice(&trial);
            values[n] = f_reflect;
            continue;
        }

        // Contract: outside if the reflected point beats the worst, inside otherwise.
        let (coeff, target) = if f_reflect < values[n] {
            (-config.reflection * config.contraction, f_reflect)
        } else {
            (config.contraction, values[n])
        };
        along(&centroid, &vertices[n], coeff, &mut second);
        let f_contract = eval(&second);
        if f_contract <= target {
            vertices[n].copy_from_slice(&second);
            values[n] = f_contract;
            continue;
        }

        let best = vertices[0].clone();
        for (v, f) in vertices.iter_mut().zip(values.iter_mut()).skip(1) {
            for (x, b) in v.iter_mut().zip(&best) {
                *x = b + config.shrink * (*x - b);
            }
            *f = eval(v);
        }
    }

    Minimum {
        point: vertices.swap_remove(0),
        value: values[0],
        iterations,
        converged,
    }
}

/// `out = centroid + coeff * (point - centroid)`.
fn along(centroid: &[f64], point: &[f64], coeff: f64, out: &mut [f64]) {
    for ((o, c), p) in out.iter_mut().zip(centroid).zip(point) {
        *o = c + coeff * (p - c);
    }
}

/// Largest coordinate distance from the best vertex.
fn diameter(vertices: &[Vec<f64>]) -> f64 {
    let best = &vertices[0];
    vertices[1..]
        .iter()
        .flat_map(|v| v.iter().zip(best).map(|(x, b)| (x - b).abs()))
        .fold(0.0, f64::max)
}

/// Stable sort by objective value; ties keep their current order so the
/// incumbent best vertex is not displaced by an equal newcomer.
fn sort_simplex(vertices: &mut Vec<Vec<f64>>, values: &mut Vec<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let old_vertices = std::mem::take(vertices);
    let old_values = std::mem::take(values);
    let mut slots: Vec<Option<Vec<f64>>> = old_vertices.into_iter().map(Some).collect();
    for i in order {
        vertices.push(slots[i].take().expect("each index appears once"));
        values.push(old_values[i]);
    }
}
