use alloc::vec::Vec;

// Unused when another crate links std and brings inherent float methods.
#[allow(unused_imports)]
use num_traits::Float;

use super::{ComplexMatrix, Mat4};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a real symmetric matrix (row-major, `n×n`) by cyclic Jacobi
/// rotations, sorted ascending. Only the upper triangle is read.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "symmetric_eigenvalues: wrong length");
    let mut m: Vec<f64> = a.to_vec();
    for r in 0..n {
        for c in 0..r {
            m[r * n + c] = m[c * n + r];
        }
    }
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return alloc::vec![0.0; n];
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (r + 1..n).map(move |c| (r, c)))
            .map(|(r, c)| m[r * n + c] * m[r * n + c])
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = cs * akp - sn * akq;
                    m[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = cs * apk - sn * aqk;
                    m[q * n + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the real embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is that of
/// the input with every eigenvalue doubled. Only the Hermitian part of the
/// input contributes.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::Dimension(alloc::format!(
            "eigenvalues of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows();
    let herm = |r: usize, c: usize| (h[(r, c)] + h[(c, r)].conj()) * 0.5;
    Ok(embedded_eigenvalues(n, herm))
}

/// [`hermitian_eigenvalues`] for the 4×4 joint-state matrices.
pub fn hermitian_eigenvalues4(h: &Mat4) -> [f64; 4] {
    let herm = |r: usize, c: usize| (h.0[r][c] + h.0[c][r].conj()) * 0.5;
    let e = embedded_eigenvalues(4, herm);
    [e[0], e[1], e[2], e[3]]
}

fn embedded_eigenvalues(n: usize, h: impl Fn(usize, usize) -> num_complex::Complex64) -> Vec<f64> {
    let m = 2 * n;
    let mut a = alloc::vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = h(r, c);
            a[r * m + c] = z.re;
            a[(r + n) * m + (c + n)] = z.re;
            a[r * m + (c + n)] = -z.im;
            a[(r + n) * m + c] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(&a, m);
    doubled
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect()
}
