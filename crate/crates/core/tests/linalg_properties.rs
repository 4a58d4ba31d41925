use beamqubit_core::linalg::{hermitian_eigenvalues4, matrix_exponential, tensor_product, ComplexMatrix, Mat4};
use beamqubit_core::state::{partial_trace_resonator, reduce_to_qubit};
use beamqubit_core::{DensityMatrix, C64};
use proptest::prelude::*;

fn cmat(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        ComplexMatrix::from_vec(rows, cols, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap()
    })
}

fn hermitian4() -> impl Strategy<Value = Mat4> {
    cmat(4, 4).prop_map(|a| {
        let m = Mat4::from_matrix(&a).unwrap();
        m.hermitian_part()
    })
}

/// Characteristic polynomial `λ⁴ + c₁λ³ + … + c₄` by Faddeev–LeVerrier.
fn char_poly(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.rows();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut m = ComplexMatrix::zeros(n, n);
    let id = ComplexMatrix::identity(n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(*coeffs.last().unwrap());
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
fn roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let eval = |z: C64| coeffs.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
    let seed = C64::new(0.4, 0.9);
    let scale = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    for _ in 0..2000 {
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
        }
    }
    z
}

proptest! {
    #[test]
    fn kronecker_mixed_product(a in cmat(2, 2), b in cmat(2, 3), c in cmat(2, 2), d in cmat(3, 2)) {
        let lhs = &tensor_product(&a, &b) * &tensor_product(&c, &d);
        let rhs = tensor_product(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn kronecker_bilinear(a in cmat(2, 2), a2 in cmat(2, 2), b in cmat(2, 2), k in -3.0f64..3.0) {
        let ka = a.scale(C64::new(k, 0.0));
        let lhs = tensor_product(&(&ka + &a2), &b);
        let rhs = &tensor_product(&a, &b).scale(C64::new(k, 0.0)) + &tensor_product(&a2, &b);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn exponential_semigroup(m in cmat(4, 4), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        // Contraction: scale to unit 1-norm.
        let m = m.scale(C64::new(1.0 / m.norm_one().max(1e-12), 0.0));
        let whole = matrix_exponential(&m, s + t).unwrap();
        let parts = &matrix_exponential(&m, s).unwrap() * &matrix_exponential(&m, t).unwrap();
        prop_assert!(whole.max_abs_diff(&parts) <= 1e-9);
    }

    #[test]
    fn exponential_of_spin_generator(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, theta in 0.0f64..1000.0) {
        // exp(iθ n·σ) = cos θ I + i sin θ n·σ for a unit vector n.
        let norm = (x * x + y * y + z * z).sqrt();
        prop_assume!(norm > 1e-3);
        let (x, y, z) = (x / norm, y / norm, z / norm);
        let n_sigma = ComplexMatrix::from_vec(2, 2, vec![
            C64::new(z, 0.0), C64::new(x, -y),
            C64::new(x, y), C64::new(-z, 0.0),
        ]).unwrap();
        let got = matrix_exponential(&n_sigma.scale(C64::new(0.0, 1.0)), theta).unwrap();
        let want = &ComplexMatrix::identity(2).scale(C64::new(theta.cos(), 0.0))
            + &n_sigma.scale(C64::new(0.0, theta.sin()));
        prop_assert!(got.max_abs_diff(&want) <= 1e-10, "{}", got.max_abs_diff(&want));
    }

    #[test]
    fn eigenvalues_match_characteristic_roots(h in hermitian4()) {
        let eig = hermitian_eigenvalues4(&h);
        let mut r: Vec<f64> = roots(&char_poly(&h.to_matrix())).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&r) {
            prop_assert!((a - b).abs() <= 1e-8, "{:?} vs {:?}", eig, r);
        }
    }

    #[test]
    fn partial_trace_linear_and_trace_preserving(a in hermitian4(), b in hermitian4(), k in -2.0f64..2.0) {
        let combo = a.scale_real(k) + b;
        let lhs = reduce_to_qubit(&combo);
        let rhs = &reduce_to_qubit(&a).scale(C64::new(k, 0.0)) + &reduce_to_qubit(&b);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        prop_assert!((lhs.trace() - combo.trace()).norm() <= 1e-12);
    }

    #[test]
    fn partial_trace_of_products(q in cmat(2, 2), r in cmat(2, 2)) {
        // Positive factors from Gram matrices.
        let q = &q * &q.adjoint();
        let r = &r * &r.adjoint();
        let q = q.scale(C64::new(1.0 / q.trace().re, 0.0));
        let r = r.scale(C64::new(1.0 / r.trace().re, 0.0));
        let rho = DensityMatrix::product(&q, &r).unwrap();
        let reduced = partial_trace_resonator(&rho);
        prop_assert!(reduced.max_abs_diff(&q) <= 1e-12);
    }
}

#[test]
fn exponential_of_diagonal_and_zero() {
    let d = ComplexMatrix::from_diagonal(&[C64::new(1.5, 0.0), C64::new(-0.3, 2.0)]);
    let e = matrix_exponential(&d, 1.0).unwrap();
    assert!((e[(0, 0)] - C64::new(1.5f64.exp(), 0.0)).norm() < 1e-13);
    assert!((e[(1, 1)] - C64::new(-0.3, 2.0).exp()).norm() < 1e-13);
    assert!(matrix_exponential(&d, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(2)) == 0.0);
}

#[test]
fn basis_ordering_of_kronecker_product() {
    // (|g⟩⟨e|) ⊗ (|m⟩⟨n|) has its single entry at row |g,m⟩ = 0, column |e,n⟩ = 3.
    let sigma = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    let k = tensor_product(&sigma, &a);
    for r in 0..4 {
        for c in 0..4 {
            let want = if (r, c) == (0, 3) { 1.0 } else { 0.0 };
            assert_eq!(k[(r, c)], C64::new(want, 0.0));
        }
    }
}
