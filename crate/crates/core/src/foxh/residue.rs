use super::contour::{pole_strips, scaled_sum, Joint, Terms};
use super::params::LinearGamma;
use super::{FoxHError, FoxHParams};
use crate::special_fns::ln_gamma_unchecked;
use num_complex::Complex64;
use std::f64::consts::PI;

const TIE_TOLERANCE: f64 = 1e-9;
const CIRCLE_NODES: usize = 64;

/// Rightmost left pole of one contour variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominantPole {
    pub location: f64,
    /// Highest net pole order over the variable's terms.
    pub order: i32,
}

/// Index `n` when `offset + slope·s` sits at the pole `-n` of Γ.
fn gamma_pole_index(f: &LinearGamma, s: f64) -> Option<u32> {
    let x = f.offset + f.slope * s;
    let n = (-x).round();
    (n >= 0.0 && (x + n).abs() < TIE_TOLERANCE * (1.0 + x.abs())).then_some(n as u32)
}

/// Net pole order of one term at `s` (poles of numerator factors minus zeros
/// contributed by reciprocal ones).
fn term_order(factors: &[LinearGamma], s: f64) -> i32 {
    factors
        .iter()
        .filter(|f| f.slope != 0.0 && gamma_pole_index(f, s).is_some())
        .map(|f| if f.inverse { -1 } else { 1 })
        .sum()
}

fn dominant(terms: &Terms, left: f64) -> DominantPole {
    let order = terms
        .iter()
        .filter(|(c, _)| *c != 0.0)
        .map(|(_, f)| term_order(f, left))
        .max()
        .unwrap_or(0);
    DominantPole { location: left, order }
}

/// Dominant left pole of every variable.
pub fn dominant_poles(params: &FoxHParams) -> Result<Vec<DominantPole>, FoxHError> {
    let strips = pole_strips(params)?;
    let mut out = Vec::with_capacity(strips.len());
    for (i, (v, s)) in params.variables().iter().zip(&strips).enumerate() {
        if !s.left.is_finite() {
            return Err(FoxHError::DegeneratePole {
                variable: i,
                reason: "no left poles".into(),
            });
        }
        out.push(dominant(&v.linear_terms(), s.left));
    }
    Ok(out)
}

fn check_args(params: &FoxHParams, args: &[f64]) -> Result<(), FoxHError> {
    if args.len() != params.dimension() {
        return Err(FoxHError::Malformed("argument count mismatch".into()));
    }
    if let Some(z) = args.iter().find(|z| !(z.is_finite() && **z > 0.0)) {
        return Err(FoxHError::NonPositiveArgument(*z));
    }
    Ok(())
}

fn joint_at(joint: &[Joint], s: &[f64]) -> Result<f64, FoxHError> {
    let mut l = Complex64::new(0.0, 0.0);
    for (o, w, inv) in joint {
        let x = o + w.iter().zip(s).map(|(w, s)| w * s).sum::<f64>();
        let at_pole = x <= TIE_TOLERANCE && (x - x.round()).abs() < TIE_TOLERANCE;
        if at_pole {
            return Err(FoxHError::DegeneratePole {
                variable: 0,
                reason: if *inv {
                    format!("joint factor vanishes at the dominant pole (argument {x})")
                } else {
                    format!("joint factor is singular at the dominant pole (argument {x})")
                },
            });
        }
        let g = ln_gamma_unchecked(Complex64::new(x, 0.0));
        l += if *inv { -g } else { g };
    }
    Ok(l.exp().re)
}

/// Leading high-argument-small term from the dominant simple pole of every variable.
///
/// Each variable contributes the residue of its kernel at the rightmost left
/// pole `s_i*`, times `z_i^{-s_i*}`; joint factors are evaluated at `s*`.
/// Coincident poles are reported as [`FoxHError::DegeneratePole`]; use
/// [`pole_expansion`] for those.
pub fn leading_residue(params: &FoxHParams, args: &[f64]) -> Result<f64, FoxHError> {
    check_args(params, args)?;
    let poles = dominant_poles(params)?;
    let mut total = 1.0;
    for (i, (block, pole)) in params.variables().iter().zip(&poles).enumerate() {
        let s = pole.location;
        let mut residue = 0.0;
        for (coef, factors) in block.linear_terms() {
            if coef == 0.0 {
                continue;
            }
            let hits: Vec<usize> = (0..factors.len())
                .filter(|&k| factors[k].slope != 0.0 && gamma_pole_index(&factors[k], s).is_some())
                .collect();
            let order = term_order(&factors, s);
            if order >= 2 {
                return Err(FoxHError::DegeneratePole {
                    variable: i,
                    reason: format!("pole of order {order} at s = {s}"),
                });
            }
            if order <= 0 {
                continue;
            }
            let k = hits[0];
            let f = factors[k];
            let n = gamma_pole_index(&f, s).unwrap();
            // Res_{s*} Γ(o + b s) = (-1)^n / (n! b)
            let ln_fact = ln_gamma_unchecked(Complex64::new(n as f64 + 1.0, 0.0)).re;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let mut l = Complex64::new(-ln_fact - f.slope.ln(), 0.0);
            for (j, g) in factors.iter().enumerate() {
                if j != k {
                    l += g.ln_value(Complex64::new(s, 0.0));
                }
            }
            residue += coef * sign * l.exp().re;
        }
        if residue == 0.0 || !residue.is_finite() {
            return Err(FoxHError::DegeneratePole {
                variable: i,
                reason: format!("residue at s = {s} is {residue}"),
            });
        }
        total *= residue * args[i].powf(-s);
    }
    let joint: Vec<Joint> = params.joint().iter().map(|j| j.linear()).collect();
    let s: Vec<f64> = poles.iter().map(|p| p.location).collect();
    Ok(total * joint_at(&joint, &s)?)
}

/// Radius of a circle around `center` that excludes every other singularity.
fn isolation_radius(terms: &Terms, center: f64, right: f64, variable: usize) -> Result<f64, FoxHError> {
    let mut gap = right - center;
    for (_, factors) in terms {
        for f in factors.iter().filter(|f| !f.inverse && f.slope > 0.0) {
            // poles at s = -(offset + n) / slope
            let n0 = (-(f.offset + f.slope * center)).round();
            for n in [n0 - 1.0, n0, n0 + 1.0] {
                if n < 0.0 {
                    continue;
                }
                let p = -(f.offset + n) / f.slope;
                let d = (p - center).abs();
                if d > 1e-3 {
                    gap = gap.min(d);
                }
            }
        }
    }
    if gap < 4e-3 {
        return Err(FoxHError::DegeneratePole {
            variable,
            reason: format!("poles only {gap:.2e} apart near s = {center}"),
        });
    }
    Ok((0.5 * gap).min(0.25))
}

/// Full residue at the dominant pole of every variable, of any order.
///
/// The residue is taken numerically as a trapezoid rule on small circles
/// around `s*`, so cluster poles, higher-order poles and their logarithmic
/// dependence on the arguments are all included.
pub fn pole_expansion(params: &FoxHParams, args: &[f64]) -> Result<f64, FoxHError> {
    check_args(params, args)?;
    let strips = pole_strips(params)?;
    let poles = dominant_poles(params)?;
    let n = params.dimension();
    let joint: Vec<Joint> = params.joint().iter().map(|j| j.linear()).collect();
    let mut circles: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut values: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut log_scale = 0.0;
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let terms = params.variables()[i].linear_terms();
        let center = poles[i].location;
        let rho = isolation_radius(&terms, center, strips[i].right, i)?;
        radii.push(rho);
        let ln_z = args[i].ln();
        let mut pts = Vec::with_capacity(CIRCLE_NODES);
        let mut raw = Vec::with_capacity(CIRCLE_NODES);
        for m in 0..CIRCLE_NODES {
            let theta = 2.0 * PI * (m as f64 + 0.5) / CIRCLE_NODES as f64;
            let dir = Complex64::from_polar(1.0, theta);
            let s = center + dir * rho;
            let (sc, mant) = scaled_sum(&terms, s);
            let zf = -s * ln_z;
            pts.push(s);
            raw.push((sc + zf.re, mant * Complex64::from_polar(1.0, zf.im) * dir * rho / CIRCLE_NODES as f64));
        }
        let top = raw.iter().map(|r| r.0).filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        let top = if top.is_finite() { top } else { 0.0 };
        log_scale += top;
        values.push(raw.iter().map(|(sc, m)| m * (sc - top).exp()).collect());
        circles.push(pts);
    }
    for (o, w, inv) in &joint {
        if *inv {
            continue;
        }
        let centre = o + w.iter().zip(&poles).map(|(w, p)| w * p.location).sum::<f64>();
        let reach: f64 = w.iter().zip(&radii).map(|(w, r)| w.abs() * r).sum();
        if centre - reach <= 0.0 {
            let nearest = (-centre).round().max(0.0);
            if (centre + nearest).abs() <= reach {
                return Err(FoxHError::DegeneratePole {
                    variable: 0,
                    reason: "joint factor pole inside the residue polydisc".into(),
                });
            }
        }
    }

    // tensor sum over circle nodes
    let mut idx = vec![0usize; n];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut s_sum = vec![Complex64::new(0.0, 0.0); joint.len()];
    loop {
        let mut p = Complex64::new(1.0, 0.0);
        for i in 0..n {
            p *= values[i][idx[i]];
        }
        if !joint.is_empty() {
            for (j, (_, w, _)) in joint.iter().enumerate() {
                s_sum[j] = (0..n).map(|i| circles[i][idx[i]] * w[i]).sum();
            }
            let mut l = Complex64::new(0.0, 0.0);
            for (j, (o, _, inv)) in joint.iter().enumerate() {
                let g = ln_gamma_unchecked(s_sum[j] + *o);
                l += if *inv { -g } else { g };
            }
            p *= l.exp();
        }
        acc += p;
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < CIRCLE_NODES {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k >= n {
            break;
        }
    }
    // (2πi)^{-1} ∮ f ds = mean of f(s)·(s - s*) over the circle; the 1/i from ds = i·ρe^{iθ}dθ cancels
    let v = acc.re * log_scale.exp();
    if !v.is_finite() {
        return Err(FoxHError::DegeneratePole {
            variable: 0,
            reason: "residue is not finite".into(),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxh::{GammaFactor, VariableBlock};

    #[test]
    fn exponential_leading_term() {
        // e^{-x} → 1 as x → 0 (pole of Γ(s) at 0)
        let p = FoxHParams::univariate(1, 0, &[], &[(0.0, 1.0)], 1.0).unwrap();
        assert!((leading_residue(&p, &[1e-3]).unwrap() - 1.0).abs() < 1e-12);
        assert!((pole_expansion(&p, &[1e-3]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_pole_residue() {
        // Γ(2 + s/2): pole at s = -4, residue 2·x^4
        let p = FoxHParams::univariate(1, 0, &[], &[(2.0, 0.5)], 1.0).unwrap();
        let x: f64 = 0.3;
        let want = 2.0 * x.powi(4);
        assert!((leading_residue(&p, &[x]).unwrap() - want).abs() < 1e-13);
        assert!((pole_expansion(&p, &[x]).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn double_pole_is_degenerate_but_expandable() {
        // Γ(s)^2 has a double pole at 0 with 1/s coefficient -2γ - ln x
        let f = vec![GammaFactor::lower_numerator(0.0, 1.0), GammaFactor::lower_numerator(0.0, 1.0)];
        let p = FoxHParams::new(vec![VariableBlock::single(f)], vec![], vec![1.0]).unwrap();
        assert!(matches!(leading_residue(&p, &[0.1]), Err(FoxHError::DegeneratePole { .. })));
        let x: f64 = 0.1;
        let euler = 0.577_215_664_901_532_9;
        let want = -2.0 * euler - x.ln();
        let got = pole_expansion(&p, &[x]).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn dominant_pole_order() {
        let f = vec![GammaFactor::lower_numerator(1.0, 0.5), GammaFactor::lower_numerator(2.0, 1.0)];
        let p = FoxHParams::new(vec![VariableBlock::single(f)], vec![], vec![1.0]).unwrap();
        let d = dominant_poles(&p).unwrap();
        assert_eq!(d[0].order, 2);
        assert!((d[0].location + 2.0).abs() < 1e-15);
    }
}
