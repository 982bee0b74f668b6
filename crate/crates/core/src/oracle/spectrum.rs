//! Exact-spectrum oracles for the two cases small enough to enumerate:
//! matrices (order 2, `n <= 8`) and order-3 tensors of dimension 2.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::{roots, Poly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

pub const MAX_MATRIX_DIM: usize = 8;

/// Eigenvalues listed with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumList {
    pub eigenvalues: Vec<Complex64>,
}

impl SpectrumList {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

type Matrix = Vec<Vec<Complex64>>;

fn to_matrix<T: Scalar>(m: &Tensor<T>) -> Matrix {
    let n = m.dim();
    let mut out = vec![vec![Complex64::zero(); n]; n];
    m.for_each_nonzero(|idx, v| out[idx[0]][idx[1]] = v.to_complex64());
    out
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Complex64::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `det(lambda I - M)` as ascending coefficients, by Faddeev-LeVerrier.
pub fn characteristic_polynomial<T: Scalar>(m: &Tensor<T>) -> Result<Poly> {
    if m.order() != 2 {
        return Err(Error::WrongOrder {
            what: "matrix spectrum",
            expected: 2,
            got: m.order(),
        });
    }
    let n = m.dim();
    let a = to_matrix(m);
    let mut coeffs = vec![Complex64::zero(); n + 1];
    coeffs[n] = Complex64::one();
    let mut aux: Matrix = vec![vec![Complex64::zero(); n]; n];
    for k in 1..=n {
        aux = mat_mul(&a, &aux);
        for (i, row) in aux.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1];
        }
        let am = mat_mul(&a, &aux);
        let trace: Complex64 = (0..n).map(|i| am[i][i]).sum();
        coeffs[n - k] = -trace / k as f64;
    }
    Ok(Poly(coeffs))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut a: Matrix) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("non-empty column");
        if a[pivot][col].is_zero() {
            return Complex64::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            for j in col..n {
                let v = a[col][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

/// All `n` eigenvalues of a matrix with `n <= 8`.
///
/// Each root must satisfy `|det(M - lambda I)| <= 1e-7 * max(1, |M|_inf)^n`.
pub fn matrix_spectrum<T: Scalar>(m: &Tensor<T>) -> Result<SpectrumList> {
    let n = m.dim();
    if n > MAX_MATRIX_DIM {
        return Err(Error::Unsupported(format!(
            "matrix spectrum supports n <= {MAX_MATRIX_DIM}, got {n}"
        )));
    }
    let charpoly = characteristic_polynomial(m)?;
    let eigenvalues = roots(&charpoly)?;
    let a = to_matrix(m);
    let norm = a
        .iter()
        .map(|row| row.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let bound = 1e-7 * norm.max(1.0).powi(n as i32);
    for &lambda in &eigenvalues {
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        let residual = determinant(shifted).norm();
        if residual > bound {
            return Err(Error::ResidualTooLarge {
                value: lambda.to_string(),
                residual,
                bound,
            });
        }
    }
    Ok(SpectrumList { eigenvalues })
}

/// The degree-4 polynomial whose roots are the eigenvalues of an order-3,
/// dimension-2 tensor.
///
/// With `t = x2/x1`, the eigen-equations read
/// `p1(t) = a122 t^2 + (a112+a121) t + a111 - lambda = 0` and
/// `p2(t) = (a222 - lambda) t^2 + (a212+a221) t + a211 = 0`. Their
/// resultant, taken with formal leading coefficients, is the homogeneous
/// resultant of the two binary forms, so the `x1 = 0` eigenvalue
/// (`lambda = a222` when `a122 = 0`) is included as well.
pub fn small_tensor_charpoly<T: Scalar>(a: &Tensor<T>) -> Result<Poly> {
    if a.order() != 3 || a.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "small tensor spectrum needs order 3 and dimension 2, got order {} dimension {}",
            a.order(),
            a.dim()
        )));
    }
    let e = |i: usize, j: usize, k: usize| a.get(&[i, j, k]).to_complex64();
    let lam = Poly(vec![Complex64::zero(), Complex64::one()]);
    // p1 = qa t^2 + qb t + qc, p2 = qd t^2 + qe t + qf.
    let qa = Poly::constant(e(0, 1, 1));
    let qb = Poly::constant(e(0, 0, 1) + e(0, 1, 0));
    let qc = Poly::constant(e(0, 0, 0)).sub(&lam);
    let qd = Poly::constant(e(1, 1, 1)).sub(&lam);
    let qe = Poly::constant(e(1, 0, 1) + e(1, 1, 0));
    let qf = Poly::constant(e(1, 0, 0));
    // Res = (af - cd)^2 - (ae - bd)(bf - ce)
    let af_cd = qa.mul(&qf).sub(&qc.mul(&qd));
    let ae_bd = qa.mul(&qe).sub(&qb.mul(&qd));
    let bf_ce = qb.mul(&qf).sub(&qc.mul(&qe));
    Ok(af_cd.mul(&af_cd).sub(&ae_bd.mul(&bf_ce)))
}

/// The four eigenvalues of an order-3, dimension-2 tensor.
pub fn small_tensor_spectrum<T: Scalar>(a: &Tensor<T>) -> Result<SpectrumList> {
    let charpoly = small_tensor_charpoly(a)?;
    if charpoly.degree() != Some(4) {
        return Err(Error::Invariant(
            "resultant lost its leading term; the eigenvalue polynomial is degenerate".into(),
        ));
    }
    let eigenvalues = roots(&charpoly)?;
    for &lambda in &eigenvalues {
        let residual = charpoly.eval(lambda).norm();
        let bound = 1e-7 * charpoly.magnitude_at(lambda);
        if residual > bound {
            return Err(Error::ResidualTooLarge {
                value: lambda.to_string(),
                residual,
                bound,
            });
        }
    }
    // The x1 = 0 branch: x = (0, 1) is an eigenvector iff a122 = 0, with
    // eigenvalue a222.
    if a.get(&[0, 1, 1]).is_zero() {
        let target = a.get(&[1, 1, 1]).to_complex64();
        let closest = eigenvalues
            .iter()
            .map(|z| (z - target).norm())
            .fold(f64::INFINITY, f64::min);
        if closest > 1e-6 * (1.0 + target.norm()) {
            return Err(Error::Invariant(format!(
                "eigenvalue {target} of the x1 = 0 branch is missing from the resultant roots"
            )));
        }
    }
    Ok(SpectrumList { eigenvalues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_tensor;
    use crate::oracle::power::{power_rho, PowerOptions};
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// Cofactor-expansion determinant, independent of the pivoted routine.
    fn cofactor_det(a: &[Vec<Complex64>]) -> Complex64 {
        let n = a.len();
        if n == 1 {
            return a[0][0];
        }
        let mut total = Complex64::zero();
        for col in 0..n {
            let minor: Vec<Vec<Complex64>> = a[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != col)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            total += a[0][col] * sign * cofactor_det(&minor);
        }
        total
    }

    #[test]
    fn identity_and_swap_matrices() {
        let id = Tensor::<f64>::identity(2, 3).unwrap();
        for z in matrix_spectrum(&id).unwrap().eigenvalues {
            assert!((z - c(1.0)).norm() < 1e-4);
        }
        let swap = Tensor::from_dense(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let ev = sorted(matrix_spectrum(&swap).unwrap().eigenvalues);
        assert!((ev[0] - c(-1.0)).norm() < 1e-12);
        assert!((ev[1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn matrix_guards() {
        let big = Tensor::<f64>::identity(2, 9).unwrap();
        assert!(matches!(matrix_spectrum(&big), Err(Error::Unsupported(_))));
        assert!(matches!(
            matrix_spectrum(&example_tensor()),
            Err(Error::WrongOrder { .. })
        ));
    }

    #[test]
    fn diagonal_small_tensor() {
        let a =
            Tensor::from_entries(3, 2, vec![(vec![0, 0, 0], 2.0), (vec![1, 1, 1], 5.0)]).unwrap();
        let ev = sorted(small_tensor_spectrum(&a).unwrap().eigenvalues);
        for (got, want) in ev.iter().zip([2.0, 2.0, 5.0, 5.0]) {
            assert!((got - c(want)).norm() < 1e-6, "{got} vs {want}");
        }
        let z = Tensor::<f64>::zeros(3, 2).unwrap();
        let ev = small_tensor_spectrum(&z).unwrap().eigenvalues;
        assert_eq!(ev, vec![Complex64::zero(); 4]);
    }

    #[test]
    fn example_tensor_spectrum_agrees_with_power_iteration() {
        let a = example_tensor();
        let spec = small_tensor_spectrum(&a).unwrap();
        assert_eq!(spec.eigenvalues.len(), 4);
        let rho = power_rho(&a, &PowerOptions::default()).unwrap().rho;
        assert!((spec.spectral_radius() - rho).abs() < 1e-6);
        // Every eigenvalue solves the eigen-equations with some nonzero x.
        for lambda in spec.eigenvalues {
            let p1 = Poly(vec![c(3.0) - lambda, c(3.0), c(1.0)]);
            let p2 = Poly(vec![c(0.0), c(6.0), c(3.0) - lambda]);
            let ts = roots(&p1).unwrap();
            assert!(ts
                .iter()
                .any(|t| p2.eval(*t).norm() < 1e-6 * (1.0 + lambda.norm_sqr())));
        }
    }

    #[test]
    fn x1_zero_branch_is_covered() {
        // a122 = 0: x = (0, 1) gives lambda = a222 = 4.
        let a = Tensor::from_entries(
            3,
            2,
            vec![
                (vec![0, 0, 0], 1.0),
                (vec![0, 0, 1], 2.0),
                (vec![1, 1, 1], 4.0),
                (vec![1, 0, 0], 1.0),
            ],
        )
        .unwrap();
        let ev = small_tensor_spectrum(&a).unwrap().eigenvalues;
        assert!(ev.iter().any(|z| (z - c(4.0)).norm() < 1e-9));
    }

    proptest! {
        #[test]
        fn resultant_matches_sylvester_determinant(
            vals in prop::collection::vec(-2.0..2.0f64, 8),
            lre in -3.0..3.0f64,
            lim in -3.0..3.0f64,
        ) {
            let a = Tensor::from_dense(3, 2, vals.clone()).unwrap();
            let lambda = Complex64::new(lre, lim);
            let [a111, a112, a121, a122, a211, a212, a221, a222] =
                <[f64; 8]>::try_from(vals).unwrap();
            // p1 and p2 in descending powers of t.
            let p1 = [c(a122), c(a112 + a121), c(a111) - lambda];
            let p2 = [c(a222) - lambda, c(a212 + a221), c(a211)];
            let z = Complex64::zero();
            let syl = vec![
                vec![p1[0], p1[1], p1[2], z],
                vec![z, p1[0], p1[1], p1[2]],
                vec![p2[0], p2[1], p2[2], z],
                vec![z, p2[0], p2[1], p2[2]],
            ];
            let want = cofactor_det(&syl);
            let got = small_tensor_charpoly(&a).unwrap().eval(lambda);
            prop_assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()));
        }

        #[test]
        fn charpoly_matches_cofactor_determinant(
            vals in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 16),
            lre in -3.0..3.0f64,
            lim in -3.0..3.0f64,
        ) {
            let data: Vec<Complex64> = vals.iter().map(|(r, i)| Complex64::new(*r, *i)).collect();
            let m = Tensor::from_dense(2, 4, data.clone()).unwrap();
            let lambda = Complex64::new(lre, lim);
            let shifted: Vec<Vec<Complex64>> = (0..4)
                .map(|i| (0..4).map(|j| if i == j { lambda - data[i * 4 + j] } else { -data[i * 4 + j] }).collect())
                .collect();
            let want = cofactor_det(&shifted);
            let got = characteristic_polynomial(&m).unwrap().eval(lambda);
            prop_assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()));
            let spec = matrix_spectrum(&m).unwrap();
            prop_assert_eq!(spec.eigenvalues.len(), 4);
        }

        #[test]
        fn nonneg_matrix_radius_matches_power_iteration(vals in prop::collection::vec(0.01..1.0f64, 16)) {
            let m = Tensor::from_dense(2, 4, vals).unwrap();
            let rho = power_rho(&m, &PowerOptions::default()).unwrap().rho;
            let spec = matrix_spectrum(&m).unwrap();
            prop_assert!((spec.spectral_radius() - rho).abs() < 1e-7);
        }
    }
}
