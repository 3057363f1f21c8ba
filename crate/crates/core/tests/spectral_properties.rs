//! Randomized checks of the analytic eigen-system: branch and identity
//! structure of the coupling parameter, eigenvalue equations, modal
//! completeness and the closed-form synchronization rate.

mod common;

use common::{density_strategy, multiset_max_distance, params_strategy, vec_norm};
use ndarray::Array1;
use num_complex::Complex64;
use proptest::prelude::*;
use subrad_core::eigen::eigenvalues_sorted;
use subrad_core::hs::{hs_inner, vectorize};
use subrad_core::liouvillian::build_full;
use subrad_core::spectral::{
    collective_states, coupling_parameter, mode_weights, spectral_decomposition, sync_constants,
};
use subrad_core::SystemParams;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coupling_branch_and_collective_identities(p in params_strategy()) {
        let v = coupling_parameter(&p);
        prop_assert!(v.re >= 0.0, "branch violation: {v}");
        // Im(V^2) expands to the exact bilinear below; both factors carry
        // the synchronization data, so the product is a sharp cross-check.
        let expected = 2.0 * p.gamma12() * p.s12() + 0.5 * p.delta() * (p.gamma1() - p.gamma2());
        let got = v.re * v.im;
        prop_assert!(
            (got - expected).abs() < 1e-12 * expected.abs().max(1.0),
            "V_r V_i = {got} vs {expected}"
        );

        let cs = collective_states(&p).unwrap();
        let product = cs.alpha_s() * cs.alpha_a();
        prop_assert!(
            (product + 1.0).norm() < 1e-10,
            "alpha_S alpha_A = {product}"
        );
        let cross = cs.sl().overlap(cs.ar());
        prop_assert!(cross.norm() < 1e-10, "<S_L|A_R> = {cross}");
    }

    #[test]
    fn threshold_rate_formula_holds_without_coherent_coupling(
        (g, frac, delta, omega0) in (0.2..2.0f64, -0.95..0.95f64, 0.0..2.0f64, 5.0..12.0f64),
    ) {
        let g12 = frac * g;
        let p = SystemParams::new(g, g, g12, 0.0, delta, omega0).unwrap();
        let expected = Complex64::new(g12 * g12 - delta * delta, 0.0).sqrt().re;
        let got = sync_constants(&p).kappa_s;
        prop_assert!(
            (got - expected).abs() < 1e-12 * expected.abs().max(1.0),
            "kappa_S = {got} vs {expected}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn analytic_spectrum_matches_the_numeric_oracle(p in params_strategy()) {
        let decomp = spectral_decomposition(&p).unwrap();
        prop_assume!(!decomp.degenerate());
        let analytic: Vec<Complex64> =
            decomp.eigenvalues().into_iter().map(|(_, _, v)| v).collect();
        let full = build_full(&p);
        let numeric = eigenvalues_sorted(&full.matrix().view()).unwrap();
        let d = multiset_max_distance(&analytic, &numeric);
        prop_assert!(d < 1e-9 * full.max_abs(), "multisets differ by {d:.3e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigenpairs_satisfy_both_eigenvalue_equations(p in params_strategy()) {
        let decomp = spectral_decomposition(&p).unwrap();
        prop_assume!(!decomp.degenerate());
        let full = build_full(&p);
        let m = full.matrix();
        let adjoint = m.mapv(|z| z.conj()).t().to_owned();
        let scale = full.max_abs();
        for sector in decomp.sectors() {
            for pair in &sector.pairs {
                let r: Array1<Complex64> = m.dot(&pair.right) - pair.value * &pair.right;
                let l: Array1<Complex64> =
                    adjoint.dot(&pair.left) - pair.value.conj() * &pair.left;
                let rn = vec_norm(&r.view()) / vec_norm(&pair.right.view());
                let ln = vec_norm(&l.view()) / vec_norm(&pair.left.view());
                prop_assert!(
                    rn < 1e-9 * scale && ln < 1e-9 * scale,
                    "{} pair {}: residuals {rn:.3e} / {ln:.3e}",
                    sector.sector,
                    pair.label
                );
            }
        }
    }

    #[test]
    fn biorthogonality_holds_within_each_sector(p in params_strategy()) {
        let decomp = spectral_decomposition(&p).unwrap();
        prop_assume!(!decomp.degenerate());
        for sector in decomp.sectors() {
            for (i, pi) in sector.pairs.iter().enumerate() {
                for (j, pj) in sector.pairs.iter().enumerate() {
                    let g = hs_inner(&pi.left.view(), &pj.right.view());
                    let expected = if i == j { pi.overlap } else { Complex64::new(0.0, 0.0) };
                    let d = (g - expected).norm()
                        / (vec_norm(&pi.left.view()) * vec_norm(&pj.right.view()));
                    prop_assert!(
                        d < 1e-9,
                        "{} pairing ({}, {}): deviation {d:.3e}",
                        sector.sector, pi.label, pj.label
                    );
                }
            }
        }
    }

    #[test]
    fn random_states_reconstruct_from_mode_weights(
        p in params_strategy(),
        rho in density_strategy(),
    ) {
        let decomp = spectral_decomposition(&p).unwrap();
        prop_assume!(!decomp.degenerate());
        // mode_weights verifies the reconstruction residual internally and
        // errors past 1e-9; re-checking here keeps the bound explicit.
        let w = mode_weights(&rho, &decomp).unwrap();
        let mut rebuilt: Array1<Complex64> = Array1::zeros(16);
        for sector in decomp.sectors() {
            for (pi, pair) in sector.pairs.iter().enumerate() {
                let wi = w.sector_weights(sector.sector)[pi];
                rebuilt.scaled_add(wi, &pair.right);
            }
        }
        let v = vectorize(&rho);
        let residual = vec_norm(&(&rebuilt - &v).view());
        prop_assert!(residual < 1e-9, "reconstruction residual {residual:.3e}");
    }
}

/// The synchronization-rate surface behaves like the closed form demands:
/// non-increasing in the detuning without coherent coupling, strictly
/// positive everywhere with it.
#[test]
fn rate_surface_is_monotone_without_coupling_and_positive_with_it() {
    use subrad_core::analysis::kappa_surface;

    let base = SystemParams::new(1.0, 1.0, 0.8, 0.0, 0.0, 10.0).unwrap();
    let deltas: Vec<f64> = (0..41).map(|k| k as f64 * 0.05).collect();
    let s12s = [0.0, 0.15, 0.3, 0.6, 1.0];
    let rows = kappa_surface(&base, &deltas, &s12s).unwrap();
    assert_eq!(rows.len(), deltas.len() * s12s.len());

    let mut last_at_zero = f64::INFINITY;
    for (delta, s12, kappa) in rows {
        if s12 == 0.0 {
            assert!(
                kappa <= last_at_zero + 1e-12,
                "kappa_S rises along s12 = 0: {kappa} after {last_at_zero} at delta = {delta}"
            );
            last_at_zero = kappa;
        } else {
            assert!(kappa > 0.0, "kappa_S = {kappa} at delta = {delta}, s12 = {s12}");
        }
    }
}
