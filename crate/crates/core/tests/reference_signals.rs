//! Qualitative checks tying the generators to the estimators: a chaotic
//! series looks deterministic to Cao's E2 test while seeded noise does not.

use rqa_core::embedding::cao_curves;
use rqa_core::signals::{gen_gaussian_noise, gen_lorenz_x, LorenzParams};

#[test]
fn lorenz_is_deterministic_noise_is_stochastic_under_e2() {
    let lorenz = gen_lorenz_x(&LorenzParams::chaotic(), 2000).unwrap();
    let first = lorenz.samples()[0];
    assert!(lorenz.samples().iter().any(|&v| v != first));

    let lorenz_curves = cao_curves(&lorenz, 1, 8).unwrap();
    // Deterministic signal: E2 departs clearly from 1 at small m.
    let departure = lorenz_curves
        .e2()
        .iter()
        .take(3)
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(departure > 0.1, "E2 departure only {departure}");

    // Stochastic signal: E2 stays near 1 for every m, out to m = 15.
    let noise = gen_gaussian_noise(1, 5000).unwrap();
    let noise_curves = cao_curves(&noise, 1, 15).unwrap();
    for (k, v) in noise_curves.e2().iter().enumerate() {
        assert!((0.9..=1.1).contains(v), "noise E2({}) = {v}", k + 1);
    }
}
