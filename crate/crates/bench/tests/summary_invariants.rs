use proptest::prelude::*;
use satrl_bench::{summarize, BenchRecord, RecordVerdict};

fn rec(instance: usize, heuristic: &str, time_s: f64, decisions: u64) -> BenchRecord {
    BenchRecord {
        instance: format!("inst-{instance:03}.cnf"),
        heuristic: heuristic.into(),
        verdict: RecordVerdict::Sat,
        time_s,
        decisions,
        conflicts: decisions / 2,
        propagations: decisions * 5,
        seed: 7,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn summary_ignores_record_order(
        rows in prop::collection::vec((0.0f64..5.0, 0.0f64..5.0, 0u64..500, 0u64..500), 1..40),
        seed in any::<u64>(),
    ) {
        let mut records = Vec::new();
        for (i, &(a, b, da, db)) in rows.iter().enumerate() {
            records.push(rec(i, "vsids", a, da));
            records.push(rec(i, "rl", b, db));
        }
        let expected = summarize(&records).unwrap();
        let mut shuffled = records.clone();
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(summarize(&shuffled).unwrap(), expected.clone());

        // Independent count of strictly-faster instances.
        let faster = rows.iter().filter(|r| r.1 < r.0).count();
        prop_assert!((expected.candidate_faster - faster as f64 / rows.len() as f64).abs() < 1e-12);
        prop_assert!(expected.candidate.median_decisions.is_finite());
    }
}
