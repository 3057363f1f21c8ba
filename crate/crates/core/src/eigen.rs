//! Thin wrapper around the `faer` dense solvers.
//!
//! This module is the numeric side of every dual-route check: the analytic
//! eigen-systems and closed forms elsewhere in the crate are always compared
//! against these general-purpose routines, never derived from them.

use faer::complex_native::c64;
use faer::prelude::*;
use faer::Mat;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::error::CoreError;
use crate::Result;

fn to_faer(m: &ArrayView2<Complex64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        c64::new(m[(i, j)].re, m[(i, j)].im)
    })
}

fn from_c64(z: c64) -> Complex64 {
    Complex64::new(z.re, z.im)
}

/// Eigenvalues and right eigenvectors; column `k` of `vectors` belongs to
/// `values[k]`. No ordering is imposed.
pub struct Eigensystem {
    pub values: Vec<Complex64>,
    pub vectors: Array2<Complex64>,
}

/// Dense non-Hermitian eigendecomposition.
pub fn eig(m: &ArrayView2<Complex64>) -> Result<Eigensystem> {
    let n = m.nrows();
    if m.ncols() != n || n == 0 {
        return Err(CoreError::InvalidArgument(format!(
            "eigendecomposition needs a square matrix, got {:?}",
            m.dim()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CoreError::Numerical(
            "eigendecomposition input contains non-finite entries".into(),
        ));
    }
    let evd = to_faer(m).eigendecomposition::<c64>();
    let s = evd.s().column_vector().to_owned();
    let u = evd.u();
    let values: Vec<Complex64> = (0..n).map(|k| from_c64(s.read(k))).collect();
    let vectors = Array2::from_shape_fn((n, n), |(i, k)| from_c64(u.read(i, k)));
    Ok(Eigensystem { values, vectors })
}

/// Sorted eigenvalues (by descending real part, then ascending imaginary
/// part); convenient for multiset comparisons.
pub fn eigenvalues_sorted(m: &ArrayView2<Complex64>) -> Result<Vec<Complex64>> {
    let mut vals = eig(m)?.values;
    vals.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(vals)
}

/// LU solve of `a x = b` with a residual check: the relative residual must
/// stay below 1e-9, otherwise the system is reported as (near) singular.
pub fn solve(a: &ArrayView2<Complex64>, b: &ArrayView1<Complex64>) -> Result<Array1<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n || n == 0 {
        return Err(CoreError::InvalidArgument(format!(
            "solve needs a square system, got a: {:?}, b: {}",
            a.dim(),
            b.len()
        )));
    }
    let af = to_faer(a);
    let bf = Mat::from_fn(n, 1, |i, _| c64::new(b[i].re, b[i].im));
    let x = af.partial_piv_lu().solve(&bf);
    let out = Array1::from_shape_fn(n, |i| from_c64(x.read(i, 0)));
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CoreError::Numerical("linear solve produced non-finite entries".into()));
    }

    let a_max = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let x_max = out.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let b_max = b.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let scale = (a_max * x_max * n as f64).max(b_max).max(f64::MIN_POSITIVE);
    let mut res_max = 0.0f64;
    for i in 0..n {
        let mut r = -b[i];
        for j in 0..n {
            r += a[(i, j)] * out[j];
        }
        res_max = res_max.max(r.norm());
    }
    if res_max > 1e-9 * scale {
        return Err(CoreError::Numerical(format!(
            "linear solve residual {res_max:.3e} exceeds 1e-9 of scale {scale:.3e} (near-singular system)"
        )));
    }
    Ok(out)
}

/// Smallest eigenvalue of a Hermitian matrix. The imaginary parts of the
/// computed spectrum are asserted to be rounding residues.
pub fn hermitian_min_eig(m: &ArrayView2<Complex64>) -> f64 {
    let scale = m
        .iter()
        .map(|z| z.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    let es = eig(m).expect("Hermitian eigendecomposition cannot fail on finite input");
    let mut min = f64::INFINITY;
    for v in es.values {
        assert!(
            v.im.abs() <= 1e-10 * scale.max(1.0),
            "Hermitian matrix produced complex eigenvalue {v}"
        );
        min = min.min(v.re);
    }
    min
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// Deterministic filler with no structure.
    fn pseudo(i: usize, j: usize, seed: f64) -> C {
        let t = (i as f64 * 7.3 + j as f64 * 3.1 + seed) * 12.9898;
        c((t.sin() * 43758.5453).fract(), (t.cos() * 24634.6345).fract())
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = ndarray::array![
            [c(1., 0.), c(0., 0.), c(0., 0.)],
            [c(0., 0.), c(2., -1.), c(0., 0.)],
            [c(0., 0.), c(0., 0.), c(-3., 0.5)],
        ];
        let mut vals = eig(&m.view()).unwrap().values;
        vals.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((vals[0] - c(-3., 0.5)).norm() < 1e-12);
        assert!((vals[1] - c(1., 0.)).norm() < 1e-12);
        assert!((vals[2] - c(2., -1.)).norm() < 1e-12);
    }

    #[test]
    fn eigenpairs_satisfy_residual() {
        let m = Array2::from_shape_fn((6, 6), |(i, j)| pseudo(i, j, 0.4));
        let es = eig(&m.view()).unwrap();
        let scale = m.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        for k in 0..6 {
            let v = es.vectors.column(k);
            let mv = m.dot(&v);
            let mut res = 0.0f64;
            for i in 0..6 {
                res = res.max((mv[i] - es.values[k] * v[i]).norm());
            }
            assert!(res < 1e-10 * scale, "residual {res} too large");
        }
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = Array2::from_shape_fn((5, 5), |(i, j)| {
            pseudo(i, j, 1.7) + if i == j { c(4.0, 0.0) } else { c(0.0, 0.0) }
        });
        let x_true = Array1::from_shape_fn(5, |i| pseudo(i, 0, 2.5));
        let b = a.dot(&x_true);
        let x = solve(&a.view(), &b.view()).unwrap();
        for i in 0..5 {
            assert!((x[i] - x_true[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn solve_flags_singular_systems() {
        let a = ndarray::array![
            [c(1., 0.), c(2., 0.)],
            [c(2., 0.), c(4., 0.)],
        ];
        let b = ndarray::array![c(1., 0.), c(0., 0.)];
        assert!(solve(&a.view(), &b.view()).is_err());
    }

    #[test]
    fn hermitian_min_eig_of_projector() {
        // diag(1, 0, 0, 0) has minimum eigenvalue 0.
        let mut m = Array2::zeros((4, 4));
        m[(0, 0)] = c(1.0, 0.0);
        let min = hermitian_min_eig(&m.view());
        assert!(min.abs() < 1e-12);
    }

    #[test]
    fn hermitian_min_eig_detects_negativity() {
        let m = ndarray::array![
            [c(0., 0.), c(0.5, 0.)],
            [c(0.5, 0.), c(0., 0.)],
        ];
        let min = hermitian_min_eig(&m.view());
        assert!((min + 0.5).abs() < 1e-12);
    }
}
