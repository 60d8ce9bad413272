use super::FoxHError;
use crate::special_fns::ln_gamma_unchecked;
use num_complex::Complex64;

/// Whether a gamma factor multiplies or divides the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Numerator,
    Denominator,
}

/// Which parameter row of the H-function a factor comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `(a_j, A_j)` row.
    Upper,
    /// `(b_j, B_j)` row.
    Lower,
}

/// One `(a, b)` pair of an H-function together with its placement.
///
/// With the integrand written against `z^{-s}`:
///
/// | side  | location    | contributes          |
/// |-------|-------------|----------------------|
/// | lower | numerator   | `Γ(a + b s)`         |
/// | upper | numerator   | `Γ(1 - a - b s)`     |
/// | lower | denominator | `1 / Γ(1 - a - b s)` |
/// | upper | denominator | `1 / Γ(a + b s)`     |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub a: f64,
    pub b: f64,
    pub location: Location,
    pub side: Side,
}

impl GammaFactor {
    pub fn new(a: f64, b: f64, location: Location, side: Side) -> Self {
        Self { a, b, location, side }
    }

    pub fn lower_numerator(a: f64, b: f64) -> Self {
        Self::new(a, b, Location::Numerator, Side::Lower)
    }

    pub fn upper_numerator(a: f64, b: f64) -> Self {
        Self::new(a, b, Location::Numerator, Side::Upper)
    }

    pub fn lower_denominator(a: f64, b: f64) -> Self {
        Self::new(a, b, Location::Denominator, Side::Lower)
    }

    pub fn upper_denominator(a: f64, b: f64) -> Self {
        Self::new(a, b, Location::Denominator, Side::Upper)
    }

    pub(crate) fn linear(&self) -> LinearGamma {
        let (offset, slope) = match (self.side, self.location) {
            (Side::Lower, Location::Numerator) | (Side::Upper, Location::Denominator) => (self.a, self.b),
            (Side::Upper, Location::Numerator) | (Side::Lower, Location::Denominator) => (1.0 - self.a, -self.b),
        };
        LinearGamma {
            offset,
            slope,
            inverse: self.location == Location::Denominator,
        }
    }
}

/// A coupling factor depending on `Σ w_i s_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointFactor {
    pub a: f64,
    pub weights: Vec<f64>,
    pub location: Location,
    pub side: Side,
}

impl JointFactor {
    pub fn new(a: f64, weights: Vec<f64>, location: Location, side: Side) -> Self {
        Self { a, weights, location, side }
    }

    /// Offset and weight vector of `Γ(offset + Σ w_i s_i)^{±1}`.
    pub(crate) fn linear(&self) -> (f64, Vec<f64>, bool) {
        let flip = matches!(
            (self.side, self.location),
            (Side::Upper, Location::Numerator) | (Side::Lower, Location::Denominator)
        );
        let (offset, weights) = if flip {
            (1.0 - self.a, self.weights.iter().map(|w| -w).collect())
        } else {
            (self.a, self.weights.clone())
        };
        (offset, weights, self.location == Location::Denominator)
    }
}

/// `Γ(offset + slope·s)`, or its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LinearGamma {
    pub offset: f64,
    pub slope: f64,
    pub inverse: bool,
}

impl LinearGamma {
    #[inline]
    pub fn ln_value(&self, s: Complex64) -> Complex64 {
        let v = ln_gamma_unchecked(s * self.slope + self.offset);
        if self.inverse {
            -v
        } else {
            v
        }
    }
}

/// A weighted product of gamma factors in one contour variable.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTerm {
    pub coefficient: f64,
    pub factors: Vec<GammaFactor>,
}

impl KernelTerm {
    pub fn new(coefficient: f64, factors: Vec<GammaFactor>) -> Self {
        Self { coefficient, factors }
    }
}

/// The per-variable part of the integrand: `Σ_k c_k Π_j Γ(...)`.
///
/// A plain H-function has a single term with coefficient one; a finite sum
/// of H-functions sharing their joint structure is folded into one block.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableBlock {
    pub terms: Vec<KernelTerm>,
}

impl VariableBlock {
    pub fn single(factors: Vec<GammaFactor>) -> Self {
        Self {
            terms: vec![KernelTerm::new(1.0, factors)],
        }
    }

    pub fn from_terms(terms: Vec<KernelTerm>) -> Self {
        Self { terms }
    }

    /// Appends `factor` to every term.
    pub fn with_factor(mut self, factor: GammaFactor) -> Self {
        for t in &mut self.terms {
            t.factors.push(factor);
        }
        self
    }

    /// Multiplies every coefficient by `scale`.
    pub fn scaled(mut self, scale: f64) -> Self {
        for t in &mut self.terms {
            t.coefficient *= scale;
        }
        self
    }

    pub(crate) fn linear_terms(&self) -> Vec<(f64, Vec<LinearGamma>)> {
        self.terms
            .iter()
            .map(|t| (t.coefficient, t.factors.iter().map(GammaFactor::linear).collect()))
            .collect()
    }
}

/// Full parameterization of a (multi-variate) Fox H-function
///
/// `(2πi)^{-N} ∫…∫ Π_i K_i(s_i) Π_j J_j(Σ w_ji s_i) Π_i z_i^{-s_i} ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHParams {
    variables: Vec<VariableBlock>,
    joint: Vec<JointFactor>,
    arguments: Vec<f64>,
}

impl FoxHParams {
    pub fn new(variables: Vec<VariableBlock>, joint: Vec<JointFactor>, arguments: Vec<f64>) -> Result<Self, FoxHError> {
        let n = variables.len();
        if n == 0 {
            return Err(FoxHError::Malformed("no contour variables".into()));
        }
        if arguments.len() != n {
            return Err(FoxHError::Malformed(format!(
                "{} arguments for {} variables",
                arguments.len(),
                n
            )));
        }
        check_arguments(&arguments)?;
        for (i, v) in variables.iter().enumerate() {
            if v.terms.is_empty() {
                return Err(FoxHError::Malformed(format!("variable {i} has no terms")));
            }
            for t in &v.terms {
                if !t.coefficient.is_finite() {
                    return Err(FoxHError::Malformed(format!("variable {i}: non-finite coefficient")));
                }
                if t.factors.iter().any(|f| !f.a.is_finite() || !f.b.is_finite()) {
                    return Err(FoxHError::Malformed(format!("variable {i}: non-finite factor")));
                }
            }
        }
        for j in &joint {
            if j.weights.len() != n {
                return Err(FoxHError::Malformed(format!(
                    "joint factor has {} weights for {} variables",
                    j.weights.len(),
                    n
                )));
            }
        }
        let params = Self {
            variables,
            joint,
            arguments,
        };
        super::contour::pole_strips(&params)?;
        Ok(params)
    }

    /// Standard single-variable `H^{m,n}_{p,q}[z | upper; lower]`.
    pub fn univariate(m: usize, n: usize, upper: &[(f64, f64)], lower: &[(f64, f64)], z: f64) -> Result<Self, FoxHError> {
        if m > lower.len() || n > upper.len() {
            return Err(FoxHError::Malformed(format!(
                "m = {m}, n = {n} exceed q = {}, p = {}",
                lower.len(),
                upper.len()
            )));
        }
        let mut factors = Vec::with_capacity(upper.len() + lower.len());
        for (j, &(a, b)) in upper.iter().enumerate() {
            factors.push(if j < n {
                GammaFactor::upper_numerator(a, b)
            } else {
                GammaFactor::upper_denominator(a, b)
            });
        }
        for (j, &(a, b)) in lower.iter().enumerate() {
            factors.push(if j < m {
                GammaFactor::lower_numerator(a, b)
            } else {
                GammaFactor::lower_denominator(a, b)
            });
        }
        Self::new(vec![VariableBlock::single(factors)], Vec::new(), vec![z])
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[VariableBlock] {
        &self.variables
    }

    pub fn joint(&self) -> &[JointFactor] {
        &self.joint
    }

    pub fn arguments(&self) -> &[f64] {
        &self.arguments
    }

    /// Same parameters evaluated at different arguments.
    pub fn with_arguments(&self, arguments: Vec<f64>) -> Result<Self, FoxHError> {
        if arguments.len() != self.dimension() {
            return Err(FoxHError::Malformed("argument count mismatch".into()));
        }
        check_arguments(&arguments)?;
        Ok(Self {
            arguments,
            ..self.clone()
        })
    }
}

fn check_arguments(arguments: &[f64]) -> Result<(), FoxHError> {
    if let Some(z) = arguments.iter().find(|z| !(z.is_finite() && **z > 0.0)) {
        return Err(FoxHError::NonPositiveArgument(*z));
    }
    Ok(())
}
