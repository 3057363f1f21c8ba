//! Randomized checks of the state and vectorization layer: round trips,
//! named-state validity and the dressed one-excitation pair.

mod common;

use common::{density_strategy, params_strategy};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use proptest::prelude::*;
use subrad_core::hilbert::{
    dressed_one_excitation_eigenstates, local_pauli, named_state, NamedState, Pauli,
};
use subrad_core::hs::{devectorize, hs_inner, vectorize, vectorize_op};
use subrad_core::spectral::collective_states;

proptest! {
    #[test]
    fn vectorization_round_trips_exactly(xs in proptest::collection::vec(-1.0..1.0f64, 32)) {
        let v: Array1<Complex64> = Array1::from_iter(
            xs.chunks(2).map(|c| Complex64::new(c[0], c[1])),
        );
        let back = vectorize_op(&devectorize(&v.view()).view());
        // Reshaping only; every component must survive bit for bit.
        prop_assert!(v.iter().zip(back.iter()).all(|(a, b)| a == b));
    }

    #[test]
    fn states_have_unit_trace_and_bounded_locals(rho in density_strategy()) {
        let v = vectorize(&rho);
        let id = Array2::eye(4).mapv(|x: f64| Complex64::new(x, 0.0));
        let tr = hs_inner(&vectorize_op(&id.view()).view(), &v.view());
        prop_assert!((tr - 1.0).norm() < 1e-12, "trace through the pairing: {tr}");
        for site in [1usize, 2] {
            for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
                let val = rho.expect(&local_pauli(site, axis).unwrap());
                prop_assert!(
                    (-1.0 - 1e-10..=1.0 + 1e-10).contains(&val),
                    "site {site} expectation out of range: {val}"
                );
            }
        }
    }

    #[test]
    fn named_states_are_valid_density_matrices(p in params_strategy()) {
        let cs = collective_states(&p).unwrap();
        for name in [
            NamedState::Ee, NamedState::Eg, NamedState::Ge, NamedState::Gg,
            NamedState::S, NamedState::A, NamedState::SR, NamedState::AR,
            NamedState::SDelta, NamedState::ADelta, NamedState::PlusPlus,
            NamedState::GPlusAR, NamedState::GPlusSR,
        ] {
            // Construction re-runs the full density-matrix validation
            // (hermiticity, unit trace, positivity); any violation errors.
            let rho = named_state(name, Some(&cs), Some(&p));
            prop_assert!(rho.is_ok(), "{name:?} at {p:?}: {rho:?}");
        }
    }

    #[test]
    fn dressed_pair_is_orthonormal(p in params_strategy()) {
        let (s, a) = dressed_one_excitation_eigenstates(&p).unwrap();
        prop_assert!((s.overlap(&s).norm() - 1.0).abs() < 1e-12);
        prop_assert!((a.overlap(&a).norm() - 1.0).abs() < 1e-12);
        prop_assert!(s.overlap(&a).norm() < 1e-12);
    }
}
