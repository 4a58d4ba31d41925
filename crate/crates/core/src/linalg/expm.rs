use num_complex::Complex64 as C64;
// Unused when another crate links std and brings inherent float methods.
#[allow(unused_imports)]
use num_traits::Float;

use super::{solve, ComplexMatrix};
use crate::error::{Error, Result};

/// 1-norm bound below which the Padé kernel is applied without squaring.
const SQUARING_THRESHOLD: f64 = 0.5;

/// Degree of the diagonal Padé approximant. At `‖A‖₁ ≤ 0.5` its truncation
/// error is below 1e-16.
const PADE_DEGREE: usize = 6;

/// `exp(scale · m)` by scaling and squaring with a diagonal Padé kernel.
pub fn matrix_exponential(m: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(alloc::format!(
            "matrix exponential of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !scale.is_finite() {
        return Err(Error::NonFinite("exponential scale factor"));
    }
    let n = m.rows();
    let a = m.scale(C64::new(scale, 0.0));
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let squarings = if norm > SQUARING_THRESHOLD {
        (norm / SQUARING_THRESHOLD).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(C64::new(2.0.powi(-squarings), 0.0));

    let mut coeffs = [1.0; PADE_DEGREE + 1];
    let q = PADE_DEGREE as f64;
    for k in 1..=PADE_DEGREE {
        let kf = k as f64;
        coeffs[k] = coeffs[k - 1] * (q - kf + 1.0) / (kf * (2.0 * q - kf + 1.0));
    }

    // Split into even (v) and odd (u) parts so that N = v + u and D = v - u.
    let ident = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let c = |k: usize| C64::new(coeffs[k], 0.0);
    let v = &(&(&ident.scale(c(0)) + &a2.scale(c(2))) + &a4.scale(c(4))) + &a6.scale(c(6));
    let odd = &(&ident.scale(c(1)) + &a2.scale(c(3))) + &a4.scale(c(5));
    let u = &a * &odd;
    let mut result = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    if !result.is_finite() {
        return Err(Error::NonFinite("matrix exponential result"));
    }
    Ok(result)
}
