use super::contour::{scaled_sum, Joint, Terms};
use super::{ContourSpec, FoxHError, FoxHParams, DEFAULT_MAX_DIMENSION};
use crate::quadrature::GaussLegendre;
use crate::special_fns::ln_gamma_unchecked;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Accuracy targets for contour quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// How many times every panel may be halved before giving up.
    pub max_refinements: u32,
    pub max_dimension: usize,
}

impl EvalOptions {
    pub fn univariate() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            max_refinements: 4,
            max_dimension: DEFAULT_MAX_DIMENSION,
        }
    }

    pub fn multivariate() -> Self {
        Self {
            rel_tol: 1e-5,
            abs_tol: 1e-12,
            max_refinements: 2,
            max_dimension: DEFAULT_MAX_DIMENSION,
        }
    }

    pub fn for_dimension(n: usize) -> Self {
        if n <= 1 {
            Self::univariate()
        } else {
            Self::multivariate()
        }
    }
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self::univariate()
    }
}

/// A quadrature result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// Change in value under the last halving of all panels.
    pub error: f64,
    /// `|Im| / |Re|` of the full-line integral on the coarsest grid.
    pub imag_residue: f64,
    /// Nodes per half line, summed over variables, on the final grid.
    pub nodes: usize,
}

/// Single-variable evaluation.
pub fn eval_foxh_1v(params: &FoxHParams, contour: &ContourSpec) -> Result<Evaluation, FoxHError> {
    if params.dimension() != 1 {
        return Err(FoxHError::Malformed(format!(
            "single-variable evaluator given {} variables",
            params.dimension()
        )));
    }
    eval_foxh(params, contour, &EvalOptions::univariate())
}

/// Nested tensor-product evaluation for `N ≤ max_dimension` variables.
pub fn eval_foxh_nv(params: &FoxHParams, contour: &ContourSpec) -> Result<Evaluation, FoxHError> {
    eval_foxh(params, contour, &EvalOptions::for_dimension(params.dimension()))
}

pub fn eval_foxh(params: &FoxHParams, contour: &ContourSpec, options: &EvalOptions) -> Result<Evaluation, FoxHError> {
    let mut out = eval_foxh_batch(params, contour, &[params.arguments().to_vec()], options)?;
    out.pop().unwrap()
}

/// Evaluates one kernel at many argument vectors on a shared contour.
///
/// The outer error covers the kernel as a whole; each inner result reports
/// convergence for its own argument vector.
pub fn eval_foxh_batch(
    params: &FoxHParams,
    contour: &ContourSpec,
    arguments: &[Vec<f64>],
    options: &EvalOptions,
) -> Result<Vec<Result<Evaluation, FoxHError>>, FoxHError> {
    let n = params.dimension();
    if n > options.max_dimension {
        return Err(FoxHError::DimensionError {
            dimension: n,
            max: options.max_dimension,
        });
    }
    if contour.dimension() != n {
        return Err(FoxHError::Malformed("contour dimension mismatch".into()));
    }
    for a in arguments {
        if a.len() != n {
            return Err(FoxHError::Malformed("argument count mismatch".into()));
        }
        if let Some(z) = a.iter().find(|z| !(z.is_finite() && **z > 0.0)) {
            return Err(FoxHError::NonPositiveArgument(*z));
        }
    }
    let kernel = Kernel {
        terms: params.variables().iter().map(|v| v.linear_terms()).collect(),
        joint: params.joint().iter().map(|j| j.linear()).collect(),
    };
    let gl = GaussLegendre::new(contour.order);

    let first = kernel.integrate(contour, &gl, 0, true, arguments);
    let imag: Vec<f64> = first.iter().map(|v| (v.im / v.re).abs()).collect();
    let mut prev: Vec<f64> = first.iter().map(|v| v.re).collect();
    let mut done: Vec<Option<Result<Evaluation, FoxHError>>> = vec![None; arguments.len()];
    for level in 1..=options.max_refinements {
        let pending: Vec<usize> = (0..arguments.len()).filter(|&a| done[a].is_none()).collect();
        if pending.is_empty() {
            break;
        }
        let args: Vec<Vec<f64>> = pending.iter().map(|&a| arguments[a].clone()).collect();
        let cur = kernel.integrate(contour, &gl, level, n == 1, &args);
        let nodes: usize = contour.nodes.iter().sum::<usize>() << level;
        for (k, &a) in pending.iter().enumerate() {
            let value = cur[k].re;
            let error = (value - prev[a]).abs();
            if !value.is_finite() {
                done[a] = Some(Err(FoxHError::ConvergenceError { value, error }));
            } else if error <= (options.rel_tol * value.abs()).max(options.abs_tol) {
                done[a] = Some(Ok(Evaluation {
                    value,
                    error,
                    imag_residue: imag[a],
                    nodes,
                }));
            } else if level == options.max_refinements {
                done[a] = Some(Err(FoxHError::ConvergenceError { value, error }));
            }
            prev[a] = value;
        }
    }
    Ok(done
        .into_iter()
        .enumerate()
        .map(|(a, d)| {
            d.unwrap_or(Err(FoxHError::ConvergenceError {
                value: prev[a],
                error: f64::INFINITY,
            }))
        })
        .collect())
}

struct Kernel {
    terms: Vec<Terms>,
    joint: Vec<Joint>,
}

/// Per-variable nodes with kernel values `e^scale · mant` (weights folded in).
struct Grid {
    t: Vec<f64>,
    s: Vec<Complex64>,
    scale: Vec<f64>,
    mant: Vec<Complex64>,
}

impl Kernel {
    fn grid(&self, i: usize, c: f64, breakpoints: &[f64], gl: &GaussLegendre, full: bool) -> Grid {
        let mut t = Vec::new();
        let mut w = Vec::new();
        for p in breakpoints.windows(2) {
            for (x, wt) in gl.mapped(p[0], p[1]) {
                t.push(x);
                w.push(wt);
                if full {
                    t.push(-x);
                    w.push(wt);
                }
            }
        }
        let s: Vec<Complex64> = t.iter().map(|&t| Complex64::new(c, t)).collect();
        let vals: Vec<(f64, Complex64)> = s.par_iter().map(|&s| scaled_sum(&self.terms[i], s)).collect();
        let (scale, mant): (Vec<f64>, Vec<Complex64>) = vals
            .into_iter()
            .zip(&w)
            .map(|((sc, m), &wt)| (sc, m * wt))
            .unzip();
        Grid { t, s, scale, mant }
    }

    #[inline]
    fn joint_value(&self, s_sum: &[Complex64]) -> Complex64 {
        if self.joint.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let mut l = Complex64::new(0.0, 0.0);
        for (j, (o, _, inv)) in self.joint.iter().enumerate() {
            let v = ln_gamma_unchecked(s_sum[j] + *o);
            if *inv {
                l -= v;
            } else {
                l += v;
            }
        }
        l.exp()
    }

    /// Complex integral `(2π)^{-N} Σ …` per argument vector; with `full` the
    /// first variable covers the whole line, otherwise its upper half doubled
    /// (real part only).
    fn integrate(&self, contour: &ContourSpec, gl: &GaussLegendre, level: u32, full: bool, args: &[Vec<f64>]) -> Vec<Complex64> {
        let n = self.terms.len();
        let grids: Vec<Grid> = (0..n)
            .map(|i| {
                let bp = contour.refined_breakpoints(i, level);
                self.grid(i, contour.abscissa[i], &bp, gl, full || i > 0)
            })
            .collect();

        // Per argument and variable: plain complex values and a common log scale.
        let mut tables: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(args.len());
        let mut log_scale = vec![0.0; args.len()];
        for (a, z) in args.iter().enumerate() {
            let mut per_var = Vec::with_capacity(n);
            for (i, g) in grids.iter().enumerate() {
                let ln_z = z[i].ln();
                let top = g.scale.iter().cloned().filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max);
                let top = if top.is_finite() { top } else { 0.0 };
                log_scale[a] += top - contour.abscissa[i] * ln_z;
                per_var.push(
                    g.t.iter()
                        .zip(&g.scale)
                        .zip(&g.mant)
                        .map(|((&t, &sc), &m)| {
                            if sc.is_finite() {
                                m * Complex64::from_polar((sc - top).exp(), -t * ln_z)
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        })
                        .collect(),
                );
            }
            tables.push(per_var);
        }

        let weights: Vec<&Vec<f64>> = self.joint.iter().map(|j| &j.1).collect();
        let n1 = grids[0].s.len();
        let partials: Vec<Vec<Complex64>> = (0..n1)
            .into_par_iter()
            .map(|j1| {
                let mut acc = vec![Complex64::new(0.0, 0.0); args.len()];
                let mut idx = vec![0usize; n];
                idx[0] = j1;
                let mut s_sum = vec![Complex64::new(0.0, 0.0); self.joint.len()];
                loop {
                    for (j, w) in weights.iter().enumerate() {
                        s_sum[j] = (0..n).map(|i| grids[i].s[idx[i]] * w[i]).sum();
                    }
                    let jv = self.joint_value(&s_sum);
                    if jv.re.is_finite() && jv.im.is_finite() {
                        for (a, tab) in tables.iter().enumerate() {
                            let mut p = jv;
                            for i in 0..n {
                                p *= tab[i][idx[i]];
                            }
                            acc[a] += p;
                        }
                    }
                    // odometer over variables 1..n
                    let mut k = 1;
                    while k < n {
                        idx[k] += 1;
                        if idx[k] < grids[k].s.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k >= n {
                        break;
                    }
                }
                acc
            })
            .collect();

        let norm = (2.0 * PI).powi(n as i32);
        (0..args.len())
            .map(|a| {
                let total: Complex64 = partials.iter().map(|p| p[a]).sum();
                let v = total * (log_scale[a].exp() / norm);
                if full {
                    v
                } else {
                    Complex64::new(2.0 * v.re, 0.0)
                }
            })
            .collect()
    }
}
