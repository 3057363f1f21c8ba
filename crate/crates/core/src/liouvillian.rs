//! The 16x16 Liouvillian of the two-qubit common-bath master equation and
//! its five invariant sector blocks.
//!
//! Two independent constructions are kept side by side on purpose:
//! [`build_full`] assembles the superoperator from Kronecker products of the
//! effective Hamiltonian and the jump operators, while [`build_sectors`]
//! hard-codes the closed-form sector matrices entry by entry.
//! [`verify_block_structure`] checks that they agree and that the
//! off-sector entries of the full matrix vanish identically.
//!
//! Sector bases (row-major vectorization indices in parentheses):
//!
//! - a (populations + one-excitation coherences):
//!   `|ee><ee|` (0), `|eg><eg|` (5), `|eg><ge|` (6), `|ge><eg|` (9),
//!   `|ge><ge|` (10), `|gg><gg|` (15);
//! - b (optical coherences): `|ee><eg|` (1), `|ee><ge|` (2),
//!   `|eg><gg|` (7), `|ge><gg|` (11);
//! - c (adjoints of b, same order): indices 4, 8, 13, 14;
//! - d (two-photon coherence): `|ee><gg|` (3);
//! - e (its adjoint): `|gg><ee|` (12).

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;

use crate::error::CoreError;
use crate::hs::{kron, HSVector, DIM, HS_DIM};
use crate::params::SystemParams;
use crate::Result;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One of the five invariant sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    A,
    B,
    C,
    D,
    E,
}

impl Sector {
    pub const ALL: [Sector; 5] = [Sector::A, Sector::B, Sector::C, Sector::D, Sector::E];

    /// Vectorization indices spanned by the sector.
    pub fn indices(&self) -> &'static [usize] {
        match self {
            Sector::A => &[0, 5, 6, 9, 10, 15],
            Sector::B => &[1, 2, 7, 11],
            Sector::C => &[4, 8, 13, 14],
            Sector::D => &[3],
            Sector::E => &[12],
        }
    }

    pub fn dim(&self) -> usize {
        self.indices().len()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sector::A => "a",
            Sector::B => "b",
            Sector::C => "c",
            Sector::D => "d",
            Sector::E => "e",
        }
    }

    /// The sector containing a vectorization index.
    pub fn of_index(k: usize) -> Sector {
        for s in Sector::ALL {
            if s.indices().contains(&k) {
                return s;
            }
        }
        unreachable!("every index 0..16 belongs to a sector")
    }
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The full 16x16 superoperator.
#[derive(Debug, Clone)]
pub struct SuperOp {
    m: Array2<Complex64>,
}

impl SuperOp {
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.m
    }

    /// Applies the superoperator to a vectorized operator.
    pub fn apply(&self, v: &ArrayView1<Complex64>) -> HSVector {
        self.m.dot(v)
    }

    /// Largest entry magnitude; the natural scale for residual tolerances.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// One sector block of the Liouvillian.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    sector: Sector,
    m: Array2<Complex64>,
}

impl SectorMatrix {
    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.sector.dim()
    }
}

/// Effective Hamiltonian `omega1/2 sigma1^z + omega2/2 sigma2^z +
/// s12 (sigma1^+ sigma2^- + h.c.)`.
///
/// The local shifts `s1`, `s2` renormalize the bare frequencies and are
/// not part of the dynamical model; they enter only the dressed-state
/// convention in [`crate::hilbert::dressed_one_excitation_eigenstates`].
pub fn hamiltonian_eff(p: &SystemParams) -> Array2<Complex64> {
    let mut h = Array2::zeros((DIM, DIM));
    h[(0, 0)] = c(p.omega0(), 0.0);
    h[(1, 1)] = c(0.5 * p.delta(), 0.0);
    h[(2, 2)] = c(-0.5 * p.delta(), 0.0);
    h[(3, 3)] = c(-p.omega0(), 0.0);
    h[(1, 2)] = c(p.s12(), 0.0);
    h[(2, 1)] = c(p.s12(), 0.0);
    h
}

fn identity4() -> Array2<Complex64> {
    Array2::from_shape_fn((DIM, DIM), |(i, j)| if i == j { c(1., 0.) } else { c(0., 0.) })
}

fn adjoint(m: &Array2<Complex64>) -> Array2<Complex64> {
    Array2::from_shape_fn((m.ncols(), m.nrows()), |(i, j)| m[(j, i)].conj())
}

fn transpose(m: &Array2<Complex64>) -> Array2<Complex64> {
    Array2::from_shape_fn((m.ncols(), m.nrows()), |(i, j)| m[(j, i)])
}

/// Adds `coeff * (2 A rho B - {B A, rho})` to the superoperator matrix.
fn add_double_commutator_term(
    l: &mut Array2<Complex64>,
    coeff: f64,
    a: &Array2<Complex64>,
    b: &Array2<Complex64>,
) {
    let id = identity4();
    let ba = b.dot(a);
    let jump = kron(a, &transpose(b));
    let left = kron(&ba, &id);
    let right = kron(&id, &transpose(&ba));
    let half = c(coeff, 0.0);
    l.zip_mut_with(&jump, |x, &y| *x += half * 2.0 * y);
    l.zip_mut_with(&left, |x, &y| *x -= half * y);
    l.zip_mut_with(&right, |x, &y| *x -= half * y);
}

/// Assembles the full Liouvillian from Kronecker products:
/// `L = -i (H kron I - I kron H^T) + 1/2 sum_ij gamma_ij (2 sigma_i^- kron
/// (sigma_j^+)^T - sigma_j^+ sigma_i^- kron I - I kron (sigma_j^+
/// sigma_i^-)^T)` plus, when dephasing is present,
/// `sum_ij dep_ij (2 sigma_i^z kron sigma_j^z - sigma_j^z sigma_i^z kron I
/// - I kron (sigma_j^z sigma_i^z)^T)`.
pub fn build_full(p: &SystemParams) -> SuperOp {
    let id = identity4();
    let h = hamiltonian_eff(p);
    let mut l = kron(&h, &id);
    l.zip_mut_with(&kron(&id, &transpose(&h)), |x, &y| *x -= y);
    l.mapv_inplace(|z| z * c(0.0, -1.0));

    let sm1 = crate::hilbert::sigma_minus(1).expect("site 1 is valid");
    let sm2 = crate::hilbert::sigma_minus(2).expect("site 2 is valid");
    let sp1 = adjoint(&sm1);
    let sp2 = adjoint(&sm2);
    // Pairs (i, j) contribute gamma_ij * (sigma_i^- rho sigma_j^+ - ...).
    let pairs = [
        (p.gamma1(), &sm1, &sp1),
        (p.gamma2(), &sm2, &sp2),
        (p.gamma12(), &sm1, &sp2),
        (p.gamma12(), &sm2, &sp1),
    ];
    for (rate, lower, raise) in pairs {
        add_double_commutator_term(&mut l, 0.5 * rate, lower, raise);
    }

    if p.has_dephasing() {
        let sz1 = crate::hilbert::local_pauli(1, crate::hilbert::Pauli::Z)
            .expect("site 1 is valid")
            .matrix()
            .clone();
        let sz2 = crate::hilbert::local_pauli(2, crate::hilbert::Pauli::Z)
            .expect("site 2 is valid")
            .matrix()
            .clone();
        let dep_pairs = [
            (p.dep11(), &sz1, &sz1),
            (p.dep22(), &sz2, &sz2),
            (p.dep12(), &sz1, &sz2),
            (p.dep12(), &sz2, &sz1),
        ];
        for (rate, a, b) in dep_pairs {
            add_double_commutator_term(&mut l, rate, a, b);
        }
    }

    SuperOp { m: l }
}

/// Hand-written sector blocks.
///
/// Shorthands: `g0 = (gamma1 + gamma2) / 2`, `dep_a = -4 (dep11 + dep22 -
/// 2 dep12)` on the one-excitation coherences, `dep_de = -4 (dep11 + dep22)
/// - 8 dep12` on the two-photon coherences.
pub fn build_sectors(p: &SystemParams) -> [SectorMatrix; 5] {
    let (g1, g2, g12, s12) = (p.gamma1(), p.gamma2(), p.gamma12(), p.s12());
    let (delta, w0) = (p.delta(), p.omega0());
    let gs = g1 + g2;
    let dep_a = -4.0 * (p.dep11() + p.dep22() - 2.0 * p.dep12());
    let dep_b1 = -4.0 * p.dep22();
    let dep_b2 = -4.0 * p.dep11();
    let dep_de = -4.0 * (p.dep11() + p.dep22()) - 8.0 * p.dep12();

    let hm = c(-0.5 * g12, s12); // -gamma12/2 + i s12
    let hp = c(-0.5 * g12, -s12); // -gamma12/2 - i s12

    let mut a = Array2::zeros((6, 6));
    a[(0, 0)] = c(-gs, 0.);
    a[(1, 0)] = c(g2, 0.);
    a[(1, 1)] = c(-g1, 0.);
    a[(1, 2)] = hm;
    a[(1, 3)] = hp;
    a[(2, 0)] = c(g12, 0.);
    a[(2, 1)] = hm;
    a[(2, 2)] = c(-0.5 * gs + dep_a, -delta);
    a[(2, 4)] = hp;
    a[(3, 0)] = c(g12, 0.);
    a[(3, 1)] = hp;
    a[(3, 3)] = c(-0.5 * gs + dep_a, delta);
    a[(3, 4)] = hm;
    a[(4, 0)] = c(g1, 0.);
    a[(4, 2)] = hp;
    a[(4, 3)] = hm;
    a[(4, 4)] = c(-g2, 0.);
    a[(5, 1)] = c(g1, 0.);
    a[(5, 2)] = c(g12, 0.);
    a[(5, 3)] = c(g12, 0.);
    a[(5, 4)] = c(g2, 0.);

    let mut b = Array2::zeros((4, 4));
    b[(0, 0)] = c(-g1 - 0.5 * g2 + dep_b1, -(w0 - 0.5 * delta));
    b[(0, 1)] = hm;
    b[(1, 0)] = hm;
    b[(1, 1)] = c(-0.5 * g1 - g2 + dep_b2, -(w0 + 0.5 * delta));
    b[(2, 0)] = c(g12, 0.);
    b[(2, 1)] = c(g2, 0.);
    b[(2, 2)] = c(-0.5 * g1 + dep_b2, -(w0 + 0.5 * delta));
    b[(2, 3)] = hp;
    b[(3, 0)] = c(g1, 0.);
    b[(3, 1)] = c(g12, 0.);
    b[(3, 2)] = hp;
    b[(3, 3)] = c(-0.5 * g2 + dep_b1, -(w0 - 0.5 * delta));

    let cc = b.mapv(|z| z.conj());

    let d = Array2::from_shape_fn((1, 1), |_| c(-0.5 * gs + dep_de, -2.0 * w0));
    let e = d.mapv(|z| z.conj());

    [
        SectorMatrix { sector: Sector::A, m: a },
        SectorMatrix { sector: Sector::B, m: b },
        SectorMatrix { sector: Sector::C, m: cc },
        SectorMatrix { sector: Sector::D, m: d },
        SectorMatrix { sector: Sector::E, m: e },
    ]
}

/// Result of the block-structure cross-check.
#[derive(Debug, Clone)]
pub struct BlockReport {
    /// Largest magnitude of a full-matrix entry coupling different sectors.
    pub off_block_max: f64,
    /// Largest |full - sector| residual, per sector in order a, b, c, d, e.
    pub sector_residual_max: [f64; 5],
}

/// Checks that the full Liouvillian is block-diagonal over the sector index
/// sets and that each block matches the hand-written sector matrix, both
/// within `1e-12` of the overall scale. Any breach is an error naming the
/// offending entry.
pub fn verify_block_structure(
    full: &SuperOp,
    sectors: &[SectorMatrix; 5],
) -> Result<BlockReport> {
    let scale = full.max_abs().max(1.0);
    let tol = 1e-12 * scale;
    let m = full.matrix();

    let mut off_block_max = 0.0f64;
    for r in 0..HS_DIM {
        for col in 0..HS_DIM {
            if Sector::of_index(r) != Sector::of_index(col) {
                let mag = m[(r, col)].norm();
                if mag > tol {
                    return Err(CoreError::Numerical(format!(
                        "off-block entry ({r}, {col}) of the full Liouvillian has magnitude {mag:.3e} (sectors {} vs {})",
                        Sector::of_index(r),
                        Sector::of_index(col)
                    )));
                }
                off_block_max = off_block_max.max(mag);
            }
        }
    }

    let mut sector_residual_max = [0.0f64; 5];
    for (si, sm) in sectors.iter().enumerate() {
        let idx = sm.sector().indices();
        for (bi, &r) in idx.iter().enumerate() {
            for (bj, &col) in idx.iter().enumerate() {
                let diff = (m[(r, col)] - sm.matrix()[(bi, bj)]).norm();
                if diff > tol {
                    return Err(CoreError::Numerical(format!(
                        "sector {} entry ({bi}, {bj}) disagrees with the full Liouvillian at ({r}, {col}) by {diff:.3e}",
                        sm.sector()
                    )));
                }
                sector_residual_max[si] = sector_residual_max[si].max(diff);
            }
        }
    }

    Ok(BlockReport {
        off_block_max,
        sector_residual_max,
    })
}

/// The vectorized identity, i.e. the left eigenvector of the Liouvillian
/// with eigenvalue zero (trace preservation).
pub fn identity_vector() -> HSVector {
    let mut v = Array1::zeros(HS_DIM);
    for i in 0..DIM {
        v[crate::hs::vec_index(i, i)] = c(1.0, 0.0);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hs::{vec_index, vectorize_op};

    fn fig3() -> SystemParams {
        SystemParams::new(1.1, 0.9, 0.95, 0.6, 1.0, 10.0).unwrap()
    }

    fn check_trace_preservation(p: &SystemParams) {
        let l = build_full(p);
        let scale = l.max_abs().max(1.0);
        for col in 0..HS_DIM {
            let mut sum = c(0., 0.);
            for i in 0..DIM {
                sum += l.matrix()[(vec_index(i, i), col)];
            }
            assert!(
                sum.norm() <= 1e-12 * scale,
                "column {col} breaks trace preservation: {sum}"
            );
        }
    }

    #[test]
    fn trace_preservation() {
        check_trace_preservation(&fig3());
        let dephased = fig3().with_dephasing(0.2, 0.05, 0.08).unwrap();
        check_trace_preservation(&dephased);
        let shifted = SystemParams::new(0.3, 1.7, -0.5, -0.9, -2.0, 7.0).unwrap();
        check_trace_preservation(&shifted);
    }

    #[test]
    fn blocks_match_full_construction() {
        for p in [
            fig3(),
            fig3().with_dephasing(0.1, 0.1, 0.1).unwrap(),
            fig3().with_dephasing(0.3, 0.07, 0.1).unwrap(),
            SystemParams::new(1.0, 1.0, 0.0, 0.0, 0.0, 10.0).unwrap(),
            SystemParams::new(2.0, 0.5, -0.8, 1.3, -0.7, 5.0).unwrap(),
        ] {
            let full = build_full(&p);
            let sectors = build_sectors(&p);
            let report = verify_block_structure(&full, &sectors).unwrap();
            assert!(report.off_block_max <= 1e-12 * full.max_abs().max(1.0));
        }
    }

    #[test]
    fn selected_entries_at_reference_parameters() {
        // Entries are sums of rate halves, so allow last-ulp rounding.
        let close = |x: Complex64, y: Complex64| {
            assert!((x - y).norm() < 1e-14, "{x} vs {y}");
        };
        let sectors = build_sectors(&fig3());
        let a = sectors[0].matrix();
        close(a[(0, 0)], c(-2.0, 0.0));
        close(a[(1, 2)], c(-0.475, 0.6));
        close(a[(2, 2)], c(-1.0, -1.0));
        close(a[(3, 3)], c(-1.0, 1.0));
        close(a[(5, 2)], c(0.95, 0.0));
        let b = sectors[1].matrix();
        close(b[(0, 0)], c(-1.55, -9.5));
        close(b[(1, 1)], c(-1.45, -10.5));
        close(b[(2, 2)], c(-0.55, -10.5));
        close(b[(3, 3)], c(-0.45, -9.5));
        close(b[(2, 0)], c(0.95, 0.0));
        close(b[(3, 0)], c(1.1, 0.0));
        let d = sectors[3].matrix();
        close(d[(0, 0)], c(-1.0, -20.0));
        let e = sectors[4].matrix();
        close(e[(0, 0)], c(-1.0, 20.0));
    }

    #[test]
    fn dephasing_diagonals() {
        let p = fig3().with_dephasing(0.2, 0.05, 0.08).unwrap();
        let plain = build_sectors(&fig3());
        let dep = build_sectors(&p);
        // Sector a coherences shift by -4 (d11 + d22 - 2 d12).
        let shift = -4.0 * (0.2 + 0.05 - 2.0 * 0.08);
        let da = dep[0].matrix();
        let pa = plain[0].matrix();
        assert!((da[(2, 2)] - pa[(2, 2)] - shift).norm() < 1e-15);
        assert!((da[(3, 3)] - pa[(3, 3)] - shift).norm() < 1e-15);
        // Populations untouched.
        assert_eq!(da[(0, 0)], pa[(0, 0)]);
        assert_eq!(da[(1, 1)], pa[(1, 1)]);
        // Sector b: diag(-4 d22, -4 d11, -4 d11, -4 d22).
        let db = dep[1].matrix();
        let pb = plain[1].matrix();
        for (k, expected) in [(0, -0.2), (1, -0.8), (2, -0.8), (3, -0.2)] {
            assert!((db[(k, k)] - pb[(k, k)] - expected).norm() < 1e-15);
        }
        // Two-photon coherence: -4 (d11 + d22) - 8 d12.
        let dd = dep[3].matrix();
        let pd = plain[3].matrix();
        assert!((dd[(0, 0)] - pd[(0, 0)] - (-4.0 * 0.25 - 8.0 * 0.08)).norm() < 1e-15);
    }

    #[test]
    fn hermiticity_is_preserved_by_the_generator() {
        let p = fig3().with_dephasing(0.1, 0.2, 0.1).unwrap();
        let l = build_full(&p);
        // A Hermitian (non-positive) test operator.
        let op = Array2::from_shape_fn((DIM, DIM), |(i, j)| {
            let z = c(
                0.3 * (i as f64 + 1.0) * (j as f64 + 0.5),
                0.7 * (i as f64 - j as f64),
            );
            if i <= j { z } else { c(0., 0.) }
        });
        let herm = &op + &adjoint(&op);
        let out = l.apply(&vectorize_op(&herm.view()).view());
        let out_m = crate::hs::devectorize(&out.view());
        for i in 0..DIM {
            for j in 0..DIM {
                assert!(
                    (out_m[(i, j)] - out_m[(j, i)].conj()).norm() < 1e-12 * l.max_abs(),
                    "generator broke hermiticity at ({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn identity_is_a_left_null_vector() {
        for p in [fig3(), fig3().with_dephasing(0.15, 0.15, 0.15).unwrap()] {
            let l = build_full(&p);
            let idv = identity_vector();
            let scale = l.max_abs().max(1.0);
            for col in 0..HS_DIM {
                let mut sum = c(0., 0.);
                for row in 0..HS_DIM {
                    sum += idv[row].conj() * l.matrix()[(row, col)];
                }
                assert!(sum.norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn sector_partition_covers_all_indices() {
        let mut seen = [false; HS_DIM];
        for s in Sector::ALL {
            for &k in s.indices() {
                assert!(!seen[k], "index {k} assigned twice");
                seen[k] = true;
            }
        }
        assert!(seen.iter().all(|&x| x));
    }
}
