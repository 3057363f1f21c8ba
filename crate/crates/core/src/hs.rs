//! Hilbert-Schmidt (row-major) vectorization of two-qubit operators.
//!
//! A 4x4 operator `rho` becomes a 16-component column vector with
//! `vec(rho)[4*i + j] = rho[i, j]`. Under this convention
//! `vec(A rho B) = (A kron B^T) vec(rho)`, and the Hilbert-Schmidt inner
//! product `Tr(tau^dag rho)` of two operators equals the plain conjugated
//! dot product of their vectorizations.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::hilbert::DensityMatrix;

/// Dimension of the two-qubit Hilbert space.
pub const DIM: usize = 4;
/// Dimension of the vectorized operator space.
pub const HS_DIM: usize = 16;

/// A vectorized 4x4 operator.
pub type HSVector = Array1<Complex64>;

/// Flat index of matrix entry `(i, j)` in the vectorized operator.
#[inline]
pub fn vec_index(i: usize, j: usize) -> usize {
    debug_assert!(i < DIM && j < DIM);
    DIM * i + j
}

/// Vectorizes an arbitrary 4x4 operator.
pub fn vectorize_op(op: &ArrayView2<Complex64>) -> HSVector {
    assert_eq!(op.dim(), (DIM, DIM), "expected a 4x4 operator");
    Array1::from_iter(op.iter().copied())
}

/// Vectorizes a density matrix.
pub fn vectorize(rho: &DensityMatrix) -> HSVector {
    vectorize_op(&rho.matrix().view())
}

/// Inverse of [`vectorize_op`]; exact (no arithmetic involved).
pub fn devectorize(v: &ArrayView1<Complex64>) -> Array2<Complex64> {
    assert_eq!(v.len(), HS_DIM, "expected a 16-component vector");
    Array2::from_shape_fn((DIM, DIM), |(i, j)| v[vec_index(i, j)])
}

/// Vectorization of the adjoint: `vec(M^dag)` from `vec(M)`.
pub fn vec_adjoint(v: &ArrayView1<Complex64>) -> HSVector {
    assert_eq!(v.len(), HS_DIM, "expected a 16-component vector");
    let mut out = Array1::zeros(HS_DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            out[vec_index(i, j)] = v[vec_index(j, i)].conj();
        }
    }
    out
}

/// Hilbert-Schmidt inner product `Tr(tau^dag rho)` on vectorized operators:
/// the left argument is conjugated.
pub fn hs_inner(tau: &ArrayView1<Complex64>, rho: &ArrayView1<Complex64>) -> Complex64 {
    assert_eq!(tau.len(), HS_DIM);
    assert_eq!(rho.len(), HS_DIM);
    tau.iter()
        .zip(rho.iter())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Hilbert-Schmidt inner product of two 4x4 operators.
pub fn hs_inner_op(tau: &ArrayView2<Complex64>, rho: &ArrayView2<Complex64>) -> Complex64 {
    hs_inner(&vectorize_op(tau).view(), &vectorize_op(rho).view())
}

/// Kronecker product, row-major: `out[(i*p + k, j*q + l)] = a[(i,j)] b[(k,l)]`
/// for `b` of shape `(p, q)`.
pub fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (m, n) = a.dim();
    let (p, q) = b.dim();
    let mut out = Array2::zeros((m * p, n * q));
    for i in 0..m {
        for j in 0..n {
            let aij = a[(i, j)];
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn sample_op(seed: f64) -> Array2<C> {
        Array2::from_shape_fn((DIM, DIM), |(i, j)| {
            c(
                seed + (i as f64) - 0.3 * (j as f64),
                0.2 * (i as f64) * (j as f64) - seed,
            )
        })
    }

    #[test]
    fn round_trip_is_exact() {
        let m = sample_op(0.7);
        let v = vectorize_op(&m.view());
        let back = devectorize(&v.view());
        assert_eq!(m, back);
    }

    #[test]
    fn index_convention_is_row_major() {
        let m = sample_op(1.3);
        let v = vectorize_op(&m.view());
        for i in 0..DIM {
            for j in 0..DIM {
                assert_eq!(v[vec_index(i, j)], m[(i, j)]);
            }
        }
        assert_eq!(vec_index(0, 3), 3);
        assert_eq!(vec_index(3, 0), 12);
        assert_eq!(vec_index(2, 1), 9);
    }

    #[test]
    fn inner_product_matches_trace() {
        let a = sample_op(0.4);
        let b = sample_op(-1.1);
        // Tr(a^dag b) computed by explicit matrix arithmetic.
        let mut tr = C::new(0.0, 0.0);
        for i in 0..DIM {
            for k in 0..DIM {
                tr += a[(k, i)].conj() * b[(k, i)];
            }
        }
        let hs = hs_inner_op(&a.view(), &b.view());
        assert!((tr - hs).norm() < 1e-12);
    }

    #[test]
    fn kron_identity_action() {
        // vec(A rho B) = (A kron B^T) vec(rho) for random 4x4 matrices.
        let a = sample_op(0.9);
        let b = sample_op(-0.5);
        let rho = sample_op(0.1);
        let lhs = vectorize_op(&a.dot(&rho).dot(&b).view());
        let mut kron = Array2::<C>::zeros((HS_DIM, HS_DIM));
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        kron[(vec_index(i, k), vec_index(j, l))] = a[(i, j)] * b[(l, k)];
                    }
                }
            }
        }
        let rhs = kron.dot(&vectorize_op(&rho.view()));
        for idx in 0..HS_DIM {
            assert!((lhs[idx] - rhs[idx]).norm() < 1e-10);
        }
    }

    #[test]
    fn kron_embeds_site_operators() {
        let sx = ndarray::array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]];
        let id = ndarray::array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]];
        // sigma_x on atom 1 maps |ge> (index 2) to |ee> (index 0).
        let m = kron(&sx, &id);
        assert_eq!(m[(0, 2)], c(1.0, 0.0));
        assert_eq!(m[(1, 3)], c(1.0, 0.0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
        // sigma_x on atom 2 maps |eg> (index 1) to |ee>.
        let m = kron(&id, &sx);
        assert_eq!(m[(0, 1)], c(1.0, 0.0));
        assert_eq!(m[(2, 3)], c(1.0, 0.0));
        assert_eq!(m[(0, 2)], c(0.0, 0.0));
    }

    #[test]
    fn adjoint_vectorization() {
        let m = sample_op(2.2);
        let v = vectorize_op(&m.view());
        let adj = vec_adjoint(&v.view());
        let back = devectorize(&adj.view());
        for i in 0..DIM {
            for j in 0..DIM {
                assert_eq!(back[(i, j)], m[(j, i)].conj());
            }
        }
    }
}
