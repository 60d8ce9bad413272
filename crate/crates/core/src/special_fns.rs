//! Complex gamma-function machinery for Mellin–Barnes integrands.
//!
//! Everything here works in the log domain: a Fox H integrand multiplies
//! dozens of gamma factors whose individual magnitudes easily leave the
//! `f64` range, so callers sum logarithms and exponentiate once.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Complex number used for contour variables and integrand values.
pub type ComplexValue = Complex64;

/// Distance to a non-positive integer below which `log_gamma` reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFnError {
    #[error("gamma function pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("non-finite argument {re} + {im}i")]
    NonFinite { re: f64, im: f64 },
    #[error("negative quantization parameter q = {0}")]
    NegativeQ(f64),
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn check_finite(z: Complex64) -> Result<(), SpecialFnError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SpecialFnError::NonFinite { re: z.re, im: z.im })
    }
}

/// Returns true when `z` sits within [`POLE_TOLERANCE`] of `0, -1, -2, ...`.
pub fn is_gamma_pole(z: Complex64) -> bool {
    let n = z.re.round();
    n <= 0.0 && (z - Complex64::new(n, 0.0)).norm() < POLE_TOLERANCE
}

/// `ln Γ(z)` on the branch that is continuous with the real axis in the right
/// half-plane. Left of `Re z = 1/2` the reflection formula is used, so the
/// imaginary part may differ from other conventions by a multiple of `2π`;
/// `exp(log_gamma(z))` is unaffected.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue, SpecialFnError> {
    check_finite(z)?;
    if is_gamma_pole(z) {
        return Err(SpecialFnError::Pole { re: z.re, im: z.im });
    }
    Ok(ln_gamma_unchecked(z))
}

/// `Γ(z)`; overflows to infinity for large arguments.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue, SpecialFnError> {
    log_gamma(z).map(|l| l.exp())
}

/// Hot-path variant without argument validation. Poles give non-finite output.
#[inline]
pub(crate) fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let reflected = lanczos_ln_gamma(Complex64::new(1.0, 0.0) - z);
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected
    } else {
        lanczos_ln_gamma(z)
    }
}

#[inline]
fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    (zm1 + 0.5) * t.ln() - t + HALF_LN_TWO_PI + acc.ln()
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::i();
    let ln_two_i = Complex64::new(2.0f64.ln(), PI / 2.0);
    if w.im > 10.0 {
        // sin w = e^{-iw} (e^{2iw} - 1) / (2i)
        -i * w + ((2.0 * i * w).exp() - 1.0).ln() - ln_two_i
    } else if w.im < -10.0 {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() - ln_two_i
    } else {
        w.sin().ln()
    }
}

/// `1 / (Γ(1 - qs) Γ(1 + qs))`, which equals `sin(qπs) / (qπs)`.
///
/// This is the averaged phase factor of a residual phase uniform on
/// `(-qπ, qπ)`. For `q = 0` the result is exactly one.
pub fn gamma_ratio_sin(s: ComplexValue, q: f64) -> Result<ComplexValue, SpecialFnError> {
    check_finite(s)?;
    if !(q >= 0.0) || !q.is_finite() {
        return Err(SpecialFnError::NegativeQ(q));
    }
    if q == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let x = s * (q * PI);
    if x.norm() < 1e-4 {
        let x2 = x * x;
        return Ok(1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    }
    Ok(x.sin() / x)
}
