use super::params::{FoxHParams, LinearGamma};
use super::FoxHError;
use crate::special_fns::ln_gamma_unchecked;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Tuning knobs for contour selection.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourOptions {
    /// Minimum distance between the abscissa and any pole.
    pub min_clearance: f64,
    /// Endpoint-to-peak magnitude ratio that sets the truncation.
    pub decay_ratio: f64,
    /// Longest half-length tried for single-variable integrals.
    pub max_half_length_1v: f64,
    /// Longest half-length tried per variable when `N > 1`.
    pub max_half_length_nv: f64,
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    pub max_panel_width: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            min_clearance: 0.05,
            decay_ratio: 1e-12,
            max_half_length_1v: 5000.0,
            max_half_length_nv: 400.0,
            order: 16,
            max_panel_width: 2.0,
        }
    }
}

/// Where and how far each vertical line runs, and how it is discretized.
///
/// `nodes[i]` counts quadrature nodes on `[0, half_length[i]]`; the lower half
/// of each line mirrors it.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub abscissa: Vec<f64>,
    pub half_length: Vec<f64>,
    pub nodes: Vec<usize>,
    pub(crate) breakpoints: Vec<Vec<f64>>,
    pub(crate) order: usize,
}

impl ContourSpec {
    pub fn dimension(&self) -> usize {
        self.abscissa.len()
    }

    /// Panel breakpoints on `[0, T]` for variable `i` after `level` halvings.
    pub(crate) fn refined_breakpoints(&self, i: usize, level: u32) -> Vec<f64> {
        let base = &self.breakpoints[i];
        let parts = 1usize << level;
        let mut out = Vec::with_capacity((base.len() - 1) * parts + 1);
        for w in base.windows(2) {
            for p in 0..parts {
                out.push(w[0] + (w[1] - w[0]) * p as f64 / parts as f64);
            }
        }
        out.push(*base.last().unwrap());
        out
    }
}

/// Real-part interval between the left and right pole families of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Strip {
    pub left: f64,
    pub right: f64,
}

impl Strip {
    fn width(&self) -> f64 {
        self.right - self.left
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 1e-12 && (x - x.round()).abs() < 1e-12
}

pub(crate) fn pole_strips(params: &FoxHParams) -> Result<Vec<Strip>, FoxHError> {
    let mut out = Vec::with_capacity(params.dimension());
    for (i, block) in params.variables().iter().enumerate() {
        let mut strip = Strip {
            left: f64::NEG_INFINITY,
            right: f64::INFINITY,
        };
        for (_, factors) in block.linear_terms() {
            for f in factors.iter().filter(|f| !f.inverse) {
                if f.slope > 0.0 {
                    strip.left = strip.left.max(-f.offset / f.slope);
                } else if f.slope < 0.0 {
                    strip.right = strip.right.min(f.offset / -f.slope);
                } else if is_nonpositive_integer(f.offset) {
                    return Err(FoxHError::Malformed(format!(
                        "variable {i}: constant factor Γ({}) is infinite",
                        f.offset
                    )));
                }
            }
        }
        if strip.left >= strip.right {
            return Err(FoxHError::NoValidContour {
                variable: i,
                reason: format!(
                    "left poles reach Re s = {} but right poles start at Re s = {}",
                    strip.left, strip.right
                ),
            });
        }
        out.push(strip);
    }
    Ok(out)
}

/// `(coefficient, factors)` pairs for one variable, pre-linearized.
pub(crate) type Terms = Vec<(f64, Vec<LinearGamma>)>;

/// Linearized joint factor: offset, weights, reciprocal flag.
pub(crate) type Joint = (f64, Vec<f64>, bool);

/// Complex log of one term at `s`, including the sign of its coefficient.
#[inline]
pub(crate) fn ln_term(coef: f64, factors: &[LinearGamma], s: Complex64) -> Complex64 {
    let mut acc = Complex64::new(coef.abs().ln(), if coef < 0.0 { std::f64::consts::PI } else { 0.0 });
    for f in factors {
        acc += f.ln_value(s);
    }
    acc
}

/// `ln |Σ_k term_k(s)|` upper bound from the term magnitudes.
fn ln_abs_bound(terms: &Terms, s: Complex64) -> f64 {
    let logs: Vec<f64> = terms
        .iter()
        .filter(|(c, _)| *c != 0.0)
        .map(|(c, f)| ln_term(*c, f, s).re)
        .collect();
    log_sum_exp(&logs)
}

/// `ln |Σ_k term_k(s)|` of the actual sum.
pub(crate) fn ln_abs_sum(terms: &Terms, s: Complex64) -> f64 {
    let (scale, mant) = scaled_sum(terms, s);
    scale + mant.norm().ln()
}

/// Sum of terms at `s` as `e^scale · mantissa`.
#[inline]
pub(crate) fn scaled_sum(terms: &Terms, s: Complex64) -> (f64, Complex64) {
    if terms.len() == 1 {
        let l = ln_term(terms[0].0, &terms[0].1, s);
        return (l.re, Complex64::from_polar(1.0, l.im));
    }
    let mut logs = [Complex64::new(0.0, 0.0); 32];
    let mut heap;
    let logs: &mut [Complex64] = if terms.len() <= 32 {
        &mut logs[..terms.len()]
    } else {
        heap = vec![Complex64::new(0.0, 0.0); terms.len()];
        &mut heap
    };
    // terms of a series repeat the same few factors; compute each lnΓ once
    let mut cache: Vec<(f64, f64, Complex64)> = Vec::with_capacity(8);
    let mut top = f64::NEG_INFINITY;
    for (slot, (c, f)) in logs.iter_mut().zip(terms) {
        *slot = if *c == 0.0 {
            Complex64::new(f64::NEG_INFINITY, 0.0)
        } else {
            let mut acc = Complex64::new(c.abs().ln(), if *c < 0.0 { std::f64::consts::PI } else { 0.0 });
            for g in f {
                let v = match cache.iter().find(|e| e.0 == g.offset && e.1 == g.slope) {
                    Some(e) => e.2,
                    None => {
                        let v = ln_gamma_unchecked(s * g.slope + g.offset);
                        cache.push((g.offset, g.slope, v));
                        v
                    }
                };
                acc += if g.inverse { -v } else { v };
            }
            acc
        };
        if slot.re.is_finite() || slot.re == f64::INFINITY {
            top = top.max(slot.re);
        }
    }
    if !top.is_finite() {
        return (0.0, Complex64::new(0.0, 0.0));
    }
    let mut mant = Complex64::new(0.0, 0.0);
    for l in logs.iter() {
        if l.re.is_finite() {
            mant += Complex64::from_polar((l.re - top).exp(), l.im);
        }
    }
    (top, mant)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let top = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return top;
    }
    top + xs.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// Exponential decay rate of `|K_i(c + it)|` as `|t| → ∞` (worst term), with
/// reciprocal joint factors charged against it.
fn decay_rate(terms: &Terms, joint: &[Joint], i: usize) -> f64 {
    let base = terms
        .iter()
        .filter(|(c, _)| *c != 0.0)
        .map(|(_, fs)| {
            fs.iter()
                .map(|f| if f.inverse { -f.slope.abs() } else { f.slope.abs() })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    let charge: f64 = joint.iter().filter(|j| j.2).map(|j| j.1[i].abs()).sum();
    FRAC_PI_2 * (base - charge)
}

/// Power of `|t|` in the algebraic envelope of the worst term at abscissa `c`,
/// as an affine function `e0 + e1·c`, for each term.
fn algebraic_exponents(terms: &Terms) -> Vec<(f64, f64)> {
    terms
        .iter()
        .filter(|(c, _)| *c != 0.0)
        .map(|(_, fs)| {
            fs.iter().fold((0.0, 0.0), |(e0, e1), f| {
                let sign = if f.inverse { -1.0 } else { 1.0 };
                (e0 + sign * (f.offset - 0.5), e1 + sign * f.slope)
            })
        })
        .collect()
}

/// Picks a contour for `params` at its own arguments.
pub fn validate_contour(params: &FoxHParams) -> Result<ContourSpec, FoxHError> {
    build(params, None, &[params.arguments().to_vec()], &ContourOptions::default())
}

/// Picks one contour shared by several argument vectors of the same kernel.
pub fn validate_contour_batch(
    params: &FoxHParams,
    arguments: &[Vec<f64>],
    options: &ContourOptions,
) -> Result<ContourSpec, FoxHError> {
    if arguments.is_empty() {
        return build(params, None, &[params.arguments().to_vec()], options);
    }
    for a in arguments {
        if a.len() != params.dimension() {
            return Err(FoxHError::Malformed("argument count mismatch".into()));
        }
        if let Some(z) = a.iter().find(|z| !(z.is_finite() && **z > 0.0)) {
            return Err(FoxHError::NonPositiveArgument(*z));
        }
    }
    build(params, None, arguments, options)
}

/// Builds a contour at caller-chosen abscissas, checking they are admissible.
pub fn validate_contour_at(
    params: &FoxHParams,
    abscissa: &[f64],
    options: &ContourOptions,
) -> Result<ContourSpec, FoxHError> {
    if abscissa.len() != params.dimension() {
        return Err(FoxHError::Malformed("abscissa count mismatch".into()));
    }
    build(params, Some(abscissa), &[params.arguments().to_vec()], options)
}

fn build(
    params: &FoxHParams,
    fixed: Option<&[f64]>,
    arguments: &[Vec<f64>],
    opts: &ContourOptions,
) -> Result<ContourSpec, FoxHError> {
    let n = params.dimension();
    let strips = pole_strips(params)?;
    let terms: Vec<Terms> = params.variables().iter().map(|v| v.linear_terms()).collect();
    let joint: Vec<Joint> = params.joint().iter().map(|j| j.linear()).collect();
    let max_t = if n == 1 {
        opts.max_half_length_1v
    } else {
        opts.max_half_length_nv
    };

    // Admissible abscissa interval per variable.
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    let mut rates = vec![0.0; n];
    for i in 0..n {
        let s = strips[i];
        if s.width() < 2.0 * opts.min_clearance {
            return Err(FoxHError::NoValidContour {
                variable: i,
                reason: format!("pole families only {:.3e} apart", s.width()),
            });
        }
        let clearance = if s.width().is_finite() {
            (0.25 * s.width()).clamp(opts.min_clearance, 0.5)
        } else {
            0.5
        };
        lo[i] = if s.left.is_finite() { s.left + clearance } else { f64::NEG_INFINITY };
        hi[i] = if s.right.is_finite() { s.right - clearance } else { f64::INFINITY };
        if !lo[i].is_finite() && !hi[i].is_finite() {
            lo[i] = -40.0;
            hi[i] = 40.0;
        } else if !lo[i].is_finite() {
            lo[i] = hi[i] - 40.0;
        } else if !hi[i].is_finite() {
            hi[i] = lo[i] + 40.0;
        }

        rates[i] = decay_rate(&terms[i], &joint, i);
        if rates[i] < -1e-9 {
            return Err(FoxHError::NoValidContour {
                variable: i,
                reason: format!("integrand grows like exp({:.4}|t|) along vertical lines", -rates[i]),
            });
        }
        if rates[i] <= 1e-9 {
            if n > 1 {
                return Err(FoxHError::NoValidContour {
                    variable: i,
                    reason: "no exponential decay along vertical lines".into(),
                });
            }
            // Only algebraic decay: keep c where every term decays faster than |t|^{-2}.
            for (e0, e1) in algebraic_exponents(&terms[i]) {
                if e1 > 0.0 {
                    hi[i] = hi[i].min((-2.0 - e0) / e1);
                } else if e1 < 0.0 {
                    lo[i] = lo[i].max((-2.0 - e0) / e1);
                } else if e0 > -2.0 {
                    hi[i] = f64::NEG_INFINITY;
                }
            }
            if lo[i] > hi[i] {
                return Err(FoxHError::NoValidContour {
                    variable: i,
                    reason: "integrand decays too slowly along every admissible line".into(),
                });
            }
        }
    }

    let abscissa = match fixed {
        Some(c) => {
            for i in 0..n {
                if !(c[i] >= strips[i].left + opts.min_clearance && c[i] <= strips[i].right - opts.min_clearance) {
                    return Err(FoxHError::NoValidContour {
                        variable: i,
                        reason: format!(
                            "abscissa {} is not inside ({}, {}) with clearance {}",
                            c[i], strips[i].left, strips[i].right, opts.min_clearance
                        ),
                    });
                }
            }
            c.to_vec()
        }
        None => saddle_abscissa(&terms, &joint, &lo, &hi, &representative(arguments, n)),
    };
    for (j, jf) in joint.iter().filter(|j| !j.2).enumerate() {
        let re = jf.0 + jf.1.iter().zip(&abscissa).map(|(w, c)| w * c).sum::<f64>();
        if re <= opts.min_clearance {
            return Err(FoxHError::NoValidContour {
                variable: 0,
                reason: format!("joint numerator factor {j} has a pole on the contour side (Re argument {re})"),
            });
        }
    }

    let mut half_length = vec![0.0; n];
    for i in 0..n {
        half_length[i] = truncation(&terms[i], &joint, i, abscissa[i], rates[i], opts, max_t)?;
    }
    // Oscillation bound used for panel widths.
    let mut breakpoints = Vec::with_capacity(n);
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let ln_z = arguments.iter().map(|a| a[i].ln().abs()).fold(0.0, f64::max);
        let joint_phase: f64 = joint
            .iter()
            .map(|(o, w, _)| {
                let reach: f64 = w.iter().zip(&half_length).map(|(w, t)| w.abs() * t).sum::<f64>() + o.abs();
                w[i].abs() * (1.0 + reach).ln()
            })
            .sum();
        let dist = (abscissa[i] - strips[i].left).min(strips[i].right - abscissa[i]);
        let bp = panels(&terms[i], abscissa[i], half_length[i], dist, ln_z + joint_phase, opts);
        nodes.push((bp.len() - 1) * opts.order);
        breakpoints.push(bp);
    }
    Ok(ContourSpec {
        abscissa,
        half_length,
        nodes,
        breakpoints,
        order: opts.order,
    })
}

/// Geometric mean of the argument vectors, per variable.
fn representative(arguments: &[Vec<f64>], n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (arguments.iter().map(|a| a[i].ln()).sum::<f64>() / arguments.len() as f64).exp())
        .collect()
}

/// Minimizes the real-axis log-magnitude of the integrand over the box.
fn saddle_abscissa(terms: &[Terms], joint: &[Joint], lo: &[f64], hi: &[f64], z: &[f64]) -> Vec<f64> {
    let n = terms.len();
    let objective = |c: &[f64]| -> f64 {
        let mut v = 0.0;
        for i in 0..n {
            v += ln_abs_sum(&terms[i], Complex64::new(c[i], 0.0)).max(-700.0) - c[i] * z[i].ln();
        }
        for (o, w, inv) in joint {
            let x = o + w.iter().zip(c).map(|(w, c)| w * c).sum::<f64>();
            if !inv && x <= 0.0 {
                return f64::INFINITY;
            }
            let g = ln_gamma_unchecked(Complex64::new(x, 0.0)).re;
            v += if *inv { (-g).max(-700.0) } else { g };
        }
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let start = [0.5, 0.25, 0.1, 0.02, 0.0]
        .iter()
        .map(|f| (0..n).map(|i| lo[i] + f * (hi[i] - lo[i])).collect::<Vec<f64>>())
        .find(|c| objective(c).is_finite());
    let Some(mut c) = start else {
        return (0..n).map(|i| lo[i]).collect();
    };
    for _ in 0..4 {
        for i in 0..n {
            let (mut a, mut b) = (lo[i], hi[i]);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            let eval_at = |x: f64, c: &mut Vec<f64>| {
                let keep = c[i];
                c[i] = x;
                let v = objective(c);
                c[i] = keep;
                v
            };
            let mut x1 = b - g * (b - a);
            let mut x2 = a + g * (b - a);
            let mut f1 = eval_at(x1, &mut c);
            let mut f2 = eval_at(x2, &mut c);
            for _ in 0..60 {
                if f1 <= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - g * (b - a);
                    f1 = eval_at(x1, &mut c);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + g * (b - a);
                    f2 = eval_at(x2, &mut c);
                }
            }
            let cand = 0.5 * (a + b);
            if eval_at(cand, &mut c) <= objective(&c) {
                c[i] = cand;
            }
        }
    }
    c
}

/// Smallest `T` beyond which the envelope of `|K_i(c + it)|` stays below
/// `decay_ratio` times its peak.
fn truncation(
    terms: &Terms,
    joint: &[Joint],
    i: usize,
    c: f64,
    rate: f64,
    opts: &ContourOptions,
    max_t: f64,
) -> Result<f64, FoxHError> {
    let growth: f64 = joint.iter().filter(|j| j.2).map(|j| j.1[i].abs()).sum::<f64>() * FRAC_PI_2;
    let envelope = |t: f64| ln_abs_bound(terms, Complex64::new(c, t)) + growth * t;
    let threshold = opts.decay_ratio.ln();
    let mut peak = envelope(0.0);
    let mut t = 0.0;
    let mut below = 0;
    let mut last_below = f64::NAN;
    while t < max_t {
        let step = if t < 50.0 { 0.25 } else { 0.02 * t };
        t = (t + step).min(max_t);
        let m = envelope(t);
        if m > peak {
            peak = m;
        }
        if m - peak < threshold {
            if below == 0 {
                last_below = t;
            }
            below += 1;
            // exponential decay has kicked in once three consecutive samples are below
            if below >= 3 {
                return Ok(last_below.max(4.0));
            }
        } else {
            below = 0;
        }
    }
    let m = envelope(max_t);
    if rate > 1e-9 || m - peak < threshold + 6.0 * std::f64::consts::LN_10 {
        // accept a truncation that is still within six decades of the target
        Ok(max_t)
    } else {
        Err(FoxHError::NoValidContour {
            variable: i,
            reason: format!(
                "integrand only decays to {:.1e} of its peak by |t| = {max_t}",
                (m - peak).exp()
            ),
        })
    }
}

/// Panel breakpoints on `[0, T]`, graded near the real axis and narrowed where
/// the integrand oscillates quickly.
fn panels(terms: &Terms, c: f64, t_max: f64, pole_distance: f64, extra_phase: f64, opts: &ContourOptions) -> Vec<f64> {
    let phase_rate = |t: f64| -> f64 {
        let s = Complex64::new(c, t);
        terms
            .iter()
            .filter(|(k, _)| *k != 0.0)
            .map(|(_, fs)| {
                fs.iter()
                    .map(|f| {
                        let w = s * f.slope + f.offset;
                        let sign = if f.inverse { -1.0 } else { 1.0 };
                        sign * f.slope * w.norm().max(1.0).ln()
                    })
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
            + extra_phase
    };
    let mut bp = vec![0.0];
    let mut t = 0.0;
    while t < t_max {
        let osc = 6.0 / (1.0 + phase_rate(t));
        let grade = pole_distance.max(0.5 * t);
        let w = opts.max_panel_width.min(osc).min(grade).max(1e-3);
        t = (t + w).min(t_max);
        if t_max - t < 0.25 * w {
            t = t_max;
        }
        bp.push(t);
    }
    if bp.len() < 3 {
        bp = vec![0.0, 0.5 * t_max, t_max];
    }
    bp
}
