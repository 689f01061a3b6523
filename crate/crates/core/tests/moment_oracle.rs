//! Dual-route moment checks: the k-space integral against the direct dense
//! simulation, for random coin states across register sizes, plus the exact
//! structural decomposition of the mean.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coinwalk::entanglement::reduce;
use coinwalk::spectral::{c1_tilde, d1_tilde, moment_via_integral, QuadratureSpec};
use coinwalk::walk::{CoinState, StepConfig, WalkState};

fn direct_moments(coin: &CoinState, active_qubit: usize, t: usize) -> (f64, f64) {
    let state = WalkState::for_moment_analysis(coin, t).unwrap();
    let evolved = state
        .evolve(&StepConfig::unbiased(active_qubit), t)
        .unwrap();
    (
        evolved.direct_moment(1).unwrap(),
        evolved.direct_moment(2).unwrap(),
    )
}

#[test]
fn integral_route_matches_direct_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for num_coins in 1..=4usize {
        for _ in 0..6 {
            let coin = CoinState::random(num_coins, &mut rng);
            let active = 1 + (num_coins / 2);
            for t in [5usize, 20, 30] {
                let quad = QuadratureSpec::auto(t);
                let (mean_direct, second_direct) = direct_moments(&coin, active, t);
                let mean_integral = moment_via_integral(&coin, active, 1, t, &quad).unwrap();
                let second_integral = moment_via_integral(&coin, active, 2, t, &quad).unwrap();
                assert!(
                    (mean_direct - mean_integral).abs() < 1e-6,
                    "M = {num_coins}, t = {t}: mean {mean_direct} vs {mean_integral}"
                );
                assert!(
                    (second_direct - second_integral).abs() < 1e-6,
                    "M = {num_coins}, t = {t}: second {second_direct} vs {second_integral}"
                );
            }
        }
    }
}

#[test]
fn mean_decomposes_into_population_and_coherence_terms() {
    // Exact algebra of the integral route: for reduction
    // rho = ((r00, r01), (r01*, r11)) of the active qubit,
    // <x> = -c1_tilde (r00 - r11) - 2 d1_tilde Im(r01).
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    for t in [6usize, 15] {
        let quad = QuadratureSpec::auto(t);
        let c1t = c1_tilde(t, &quad).unwrap();
        let d1t = d1_tilde(t, &quad).unwrap();
        for num_coins in 2..=3usize {
            for active in 1..=num_coins {
                let coin = CoinState::random(num_coins, &mut rng);
                let rho = reduce(&coin, &[active]).unwrap();
                let predicted = -c1t * (rho.entry(0, 0).re - rho.entry(1, 1).re)
                    - 2.0 * d1t * rho.entry(0, 1).im;
                let (mean_direct, _) = direct_moments(&coin, active, t);
                assert!(
                    (mean_direct - predicted).abs() < 1e-8,
                    "M = {num_coins}, active = {active}, t = {t}: \
                     direct {mean_direct} vs structural {predicted}"
                );
            }
        }
    }
}

#[test]
fn sign_convention_pinned_by_zero_coin_walk() {
    // The |0> coin walk drifts to +x; c1_tilde carries the opposite sign.
    let coin = CoinState::computational(1, 0).unwrap();
    let t = 3;
    let quad = QuadratureSpec::auto(t);
    let (mean_direct, _) = direct_moments(&coin, 1, t);
    let mean_integral = moment_via_integral(&coin, 1, 1, t, &quad).unwrap();
    assert!((mean_direct - 0.5).abs() < 1e-12);
    assert!((mean_integral - 0.5).abs() < 1e-8);
    let c1t = c1_tilde(t, &quad).unwrap();
    assert!((c1t + 0.5).abs() < 1e-8);
    assert!((c1t.abs() - mean_direct.abs()).abs() < 1e-8);
}

#[test]
fn second_moment_equals_c2_for_multi_coin_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    let t = 18usize;
    let quad = QuadratureSpec::auto(t);
    let c2t = coinwalk::spectral::c2_tilde(t, &quad).unwrap();
    for num_coins in [1usize, 3] {
        let coin = CoinState::random(num_coins, &mut rng);
        let (_, second) = direct_moments(&coin, 1, t);
        assert!(
            (second - c2t).abs() < 1e-6,
            "M = {num_coins}: {second} vs {c2t}"
        );
    }
}
