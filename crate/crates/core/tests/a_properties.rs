use std::sync::Arc;

use num_bigint::BigUint;
use num_complex::Complex64;
use optical_smp::combinatorics::{binomial, count_rank};
use optical_smp::fock::{random, FockIndex, PhotonStatistics, ProductState, PureState};
use optical_smp::smp::{
    beamsplitter_pair, coherent_fingerprint_protocol, evaluate_error, Message, PairSelection, Referee,
    RepetitionCode, SmpProtocol, Target,
};
use optical_smp::truncation::transform_protocol;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_distance_and_fidelity_agree(seed in any::<u64>(), modes in 1usize..3, max_total in 1u64..5) {
        let mut r = rng(seed);
        let a = random::pure_state(&mut r, modes, max_total, 6, 0.2);
        let b = random::pure_state(&mut r, modes, max_total, 6, 0.2);
        let t = a.trace_distance(&b).unwrap();
        let f = a.fidelity(&b).unwrap();
        prop_assert!((0.0..=1.0).contains(&t));
        prop_assert!((t - b.trace_distance(&a).unwrap()).abs() < 1e-12);
        prop_assert!(1.0 - f <= t + 1e-12);
        prop_assert!(t <= (1.0 - f * f).sqrt() + 1e-12);
        let dense = a.to_dense().unwrap().trace_distance(&b.to_dense().unwrap()).unwrap();
        prop_assert!((dense - t).abs() < 1e-9);
    }

    #[test]
    fn markov_holds_for_diagonal_states(seed in any::<u64>(), a in 0.1f64..30.0) {
        let mut r = rng(seed);
        let s = random::diagonal_state(&mut r, 2, 8, 12, 0.1);
        prop_assert!(s.prob_at_least(a) <= s.mean_photon_number() / a + 1e-12);
    }

    #[test]
    fn mean_photon_number_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random::pure_state(&mut r, 1, 6, 5, 0.1);
        let b = random::pure_state(&mut r, 2, 3, 5, 0.1);
        let ab = a.tensor(&b).unwrap();
        prop_assert!((ab.mean_photon_number() - a.mean_photon_number() - b.mean_photon_number()).abs() < 1e-9);
    }

    #[test]
    fn rank_shell_decomposition(m in 1usize..12, a in 0u64..40) {
        // C(a+m, m) = Σ_{k ≤ a} C(k+m−1, m−1): states with exactly k photons
        let shells: BigUint = (0..=a).map(|k| binomial(k + m as u64 - 1, m as u64 - 1)).sum();
        prop_assert_eq!(count_rank(m, a).rank, shells);
        prop_assert!(count_rank(m, a + 1).rank > count_rank(m, a).rank);
        prop_assert!(count_rank(m + 1, a).rank >= count_rank(m, a).rank);
        if a >= 1 {
            prop_assert_eq!(count_rank(m, a).rank, count_rank(a as usize, m as u64).rank);
        }
    }

    #[test]
    fn beamsplitter_conserves_photon_number(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random::pure_state(&mut r, 1, 6, 4, 0.0);
        let b = random::pure_state(&mut r, 1, 6, 4, 0.0);
        let out = beamsplitter_pair(&a, &b).unwrap();
        let before = a.tensor(&b).unwrap().photon_number_distribution();
        let after = out.photon_number_distribution();
        for (n, p) in &before {
            prop_assert!((after.get(n).copied().unwrap_or(0.0) - p).abs() < 1e-9);
        }
        let norm: f64 = out.iter().map(|(_, z)| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coherent_accept_matches_closed_form(lambda in 0.01f64..1.0, d in 1usize..=8) {
        let alpha = lambda.sqrt();
        let plus = vec![Complex64::new(alpha, 0.0); d];
        let minus = vec![Complex64::new(-alpha, 0.0); d];
        let a = ProductState::coherent(&plus, 1e-12).unwrap();
        let b = ProductState::coherent(&minus, 1e-12).unwrap();
        prop_assert!(a.tail_mass() < 1e-10);
        let p = Referee::DifferencePortVacuum
            .accept_probability(&Message::Product(a), &Message::Product(b))
            .unwrap();
        prop_assert!((p - (-2.0 * lambda * d as f64).exp()).abs() < 1e-7);
    }
}

fn toy_protocol(seed: u64) -> SmpProtocol {
    let mut r = rng(seed);
    let msgs: Vec<Message> = (0..4)
        .map(|_| Message::Pure(random::pure_state(&mut r, 2, 6, 10, 0.1)))
        .collect();
    let mu = msgs.iter().map(PhotonStatistics::mean_photon_number).fold(0.0, f64::max);
    SmpProtocol::from_messages(
        "toy",
        mu,
        msgs[..2].to_vec(),
        msgs[2..].to_vec(),
        Referee::DifferencePortVacuum,
        Target::Equality { n: 1 },
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_stays_within_budget(seed in any::<u64>(), delta in prop::sample::select(vec![0.3, 0.5, 0.8])) {
        let p = toy_protocol(seed);
        let t = transform_protocol(&p, delta).unwrap();
        let after = evaluate_error(&t.protocol, &PairSelection::All).unwrap().worst_error;
        prop_assert!(t.max_trace_distance <= delta.sqrt() + 1e-9);
        prop_assert!(after <= t.distance_bound + 1e-9);
        prop_assert!(after <= t.error_bound + 1e-9);
        prop_assert!(t.min_weight >= 1.0 - delta - 1e-12);
    }
}

#[test]
fn equal_inputs_are_accepted_up_to_recorded_tail() {
    let code = Arc::new(RepetitionCode::new(3, 2).unwrap());
    let p = coherent_fingerprint_protocol(code, 1.0, 1e-12).unwrap();
    let tail = p.alice_message(0).unwrap().tail_mass();
    let r = evaluate_error(&p, &PairSelection::All).unwrap();
    for e in r.per_pair.iter().filter(|e| e.x == e.y) {
        assert!(e.p_error <= 2.0 * tail + 1e-15, "{e:?}");
    }
}

#[test]
fn truncated_fock_messages_are_normalized() {
    let s = PureState::normalized(
        1,
        (0..6u32).map(|k| (FockIndex::new(vec![k]).unwrap(), Complex64::new(1.0, 0.0))),
    )
    .unwrap();
    let m = Message::Pure(s);
    let (t, w) = m.project_up_to(2).unwrap();
    assert!((w - 0.5).abs() < 1e-12);
    let norm: f64 = t.to_pure().unwrap().iter().map(|(_, z)| z.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    assert!((m.truncation_distance(&t, w).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
}
