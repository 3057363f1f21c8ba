#![allow(dead_code)]

use ndarray::{Array2, ArrayView1};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use subrad_core::hilbert::DensityMatrix;
use subrad_core::SystemParams;

/// The reference point used across the acceptance checks.
pub fn fig3() -> SystemParams {
    SystemParams::new(1.1, 0.9, 0.95, 0.6, 1.0, 10.0).unwrap()
}

/// The collective-decay sweep family: equal local rates, fixed coherent
/// coupling and detuning, variable cross-decay.
pub fn fig6(gamma12: f64) -> SystemParams {
    SystemParams::new(1.0, 1.0, gamma12, 0.6, 1.0, 10.0).unwrap()
}

/// A random valid parameter set. Cross terms cover both signs; the
/// positivity bound |gamma12| <= sqrt(gamma1 gamma2) is kept with margin.
pub fn random_params<R: Rng>(rng: &mut R) -> SystemParams {
    let g1: f64 = rng.gen_range(0.2..2.0);
    let g2: f64 = rng.gen_range(0.2..2.0);
    let g12 = rng.gen_range(-0.95..0.95) * (g1 * g2).sqrt();
    let s12 = rng.gen_range(-1.5..1.5);
    let delta = rng.gen_range(-2.0..2.0);
    let omega0 = rng.gen_range(5.0..12.0);
    SystemParams::new(g1, g2, g12, s12, delta, omega0).unwrap()
}

/// Proptest strategy over valid parameter sets, same coverage as
/// [`random_params`].
pub fn params_strategy() -> impl Strategy<Value = SystemParams> {
    (
        0.2..2.0f64,
        0.2..2.0f64,
        -0.95..0.95f64,
        -1.5..1.5f64,
        -2.0..2.0f64,
        5.0..12.0f64,
    )
        .prop_map(|(g1, g2, frac, s12, delta, omega0)| {
            SystemParams::new(g1, g2, frac * (g1 * g2).sqrt(), s12, delta, omega0).unwrap()
        })
}

/// Strategy over full-rank density matrices: a random Gram matrix plus a
/// small multiple of the identity, trace-normalized.
pub fn density_strategy() -> impl Strategy<Value = DensityMatrix> {
    proptest::collection::vec(-1.0..1.0f64, 32).prop_map(|xs| {
        let mut m = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = Complex64::new(xs[8 * i + 2 * j], xs[8 * i + 2 * j + 1]);
            }
        }
        let mut g: Array2<Complex64> = m.dot(&m.mapv(|z| z.conj()).t());
        for i in 0..4 {
            g[(i, i)] += Complex64::new(1e-3, 0.0);
        }
        let tr: Complex64 = (0..4).map(|i| g[(i, i)]).sum();
        DensityMatrix::new(g.mapv(|z| z / tr)).unwrap()
    })
}

pub fn vec_norm(v: &ArrayView1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Worst pair distance under greedy nearest matching with removal; robust
/// against the unstable ordering of conjugate partners that tie in the
/// real part.
pub fn multiset_max_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut rest = b.to_vec();
    let mut worst = 0.0f64;
    for &x in a {
        let (k, d) = rest
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        worst = worst.max(d);
        rest.remove(k);
    }
    worst
}
