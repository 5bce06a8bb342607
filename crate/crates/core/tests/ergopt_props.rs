use ergopt_core::ergopt::{
    balance_check, brute_force_min_cycle_mean, critical_subgraph, cycle_integral_exact, karp_min_mean, morris_point,
    prefix_sums_nonpositive, simple_cycles, CycleMeasure,
};
use ergopt_core::random::{self, SystemShape};
use ergopt_core::systems::enumerate_points_within;
use ergopt_core::Rational;
use proptest::prelude::*;

fn mean(w: &[Rational], cycle: &[usize]) -> Rational {
    cycle.iter().map(|&e| &w[e]).sum::<Rational>() / Rational::from_integer((cycle.len() as i64).into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn karp_agrees_with_enumeration(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sys = random::random_system(&mut rng, SystemShape::default());
        let f = random::integer_weights(&mut rng, &sys, -10, 10);
        let karp = karp_min_mean(&sys, &f).unwrap();
        let brute = brute_force_min_cycle_mean(&sys, &f).unwrap();
        prop_assert_eq!(&karp.fbar, &brute.fbar);
        prop_assert_eq!(&karp.witness_cycle, &brute.witness_cycle);
        prop_assert_eq!(mean(f.exact(), &karp.witness_cycle), karp.fbar);
    }

    #[test]
    fn critical_subgraph_is_the_union_of_minimizing_cycles(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sys = random::random_system(&mut rng, SystemShape { max_vertices: 6, max_edges: 14 });
        let f = random::integer_weights(&mut rng, &sys, -4, 4);
        let fbar = karp_min_mean(&sys, &f).unwrap().fbar;
        let crit = critical_subgraph(&sys, &f, &fbar).unwrap();
        let mut covered = vec![false; sys.edge_count()];
        for cycle in simple_cycles(&sys) {
            let m = mean(f.exact(), &cycle);
            prop_assert!(m >= fbar);
            let inside = cycle.iter().all(|&e| crit.contains_edge(e));
            prop_assert_eq!(inside, m == fbar);
            if inside {
                for &e in &cycle { covered[e] = true; }
            }
        }
        for &e in &crit.edges {
            prop_assert!(covered[e], "retained edge {} lies on no minimizing cycle", e);
        }
        // Closed walks inside the subgraph (not only simple cycles) have mean f̄.
        for p in enumerate_points_within(&sys, &crit.edge_mask(), 0, 4) {
            prop_assert_eq!(mean(f.exact(), p.cycle()), fbar.clone());
        }
    }

    #[test]
    fn morris_prefix_sums_stay_nonpositive(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sys = random::random_system(&mut rng, SystemShape::default());
        let f = random::rational_weights(&mut rng, &sys, -5, 5, 6);
        let fbar = karp_min_mean(&sys, &f).unwrap().fbar;
        let p = morris_point(&sys, &f).unwrap();
        prop_assert!(prefix_sums_nonpositive(&p, &f, &fbar, 10_000).unwrap());
    }

    #[test]
    fn balance_extremes_match_enumeration(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sys = random::random_system(&mut rng, SystemShape { max_vertices: 6, max_edges: 14 });
        let u = random::rational_weights(&mut rng, &sys, -3, 3, 4);
        let report = balance_check(&sys, &u).unwrap();
        let means: Vec<Rational> = simple_cycles(&sys)
            .iter()
            .map(|c| cycle_integral_exact(&CycleMeasure::new(&sys, c.clone()).unwrap(), &u).unwrap())
            .collect();
        prop_assert_eq!(&report.min_integral, means.iter().min().unwrap());
        prop_assert_eq!(&report.max_integral, means.iter().max().unwrap());
        prop_assert_eq!(report.balanced, report.min_integral == report.max_integral);
    }
}
