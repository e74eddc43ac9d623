//! Verified instances built on the fabric, the oracles they are judged
//! against, and the confluence harness.

mod builders;
mod confluence;
mod file;
pub mod oracle;
pub mod registry;

pub use builders::{
    bellman_ford_file, carry_file, make_bellman_ford, make_bellman_ford_paths, make_carry_adder,
    make_maxmax_layer, make_sabotaged, maxmax_file, sabotaged_file, verified, MAX_DIGITS,
};
pub use confluence::{
    confluence_check, standard_policies, ConfluenceOptions, ConfluenceReport, RunSummary,
};
pub use file::{EdgeFile, GraphFile, InstanceFile, INSTANCE_VERSION};

#[cfg(test)]
mod tests {
    use super::oracle::{oracle_add, oracle_bellman_ford};
    use super::*;
    use crate::algebra::{stock, CheckConfig};
    use crate::fabric::{check_homomorphism, Edge, Graph, TropicalMatrix};
    use crate::scheduler::{run, synchronous_run, Caps, RecordKind, RunStatus, SchedulePolicy};
    use crate::value::Value;
    use crate::Error;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> Graph {
        Graph::new(
            n,
            edges
                .iter()
                .enumerate()
                .map(|(i, &(src, dst, w))| Edge {
                    id: i as u32,
                    src,
                    dst,
                    payload: Value::Int(w),
                })
                .collect(),
        )
        .unwrap()
    }

    fn fifo(inst: &crate::fabric::Instance) -> Vec<Value> {
        let out = run(inst, &SchedulePolicy::Fifo, &Caps::default()).unwrap();
        assert_eq!(out.status, RunStatus::Quiescent);
        out.final_states
    }

    #[test]
    fn bellman_ford_small_cases() {
        assert_eq!(
            fifo(&make_bellman_ford(&graph(1, &[]), 0).unwrap()),
            vec![Value::Int(0)]
        );
        let two = make_bellman_ford(&graph(2, &[(0, 1, 5)]), 0).unwrap();
        assert_eq!(fifo(&two), vec![Value::Int(0), Value::Int(-5)]);
        let lone = make_bellman_ford(&graph(3, &[(0, 1, 5)]), 0).unwrap();
        assert_eq!(fifo(&lone), vec![Value::Int(0), Value::Int(-5), Value::Bot]);
    }

    #[test]
    fn bellman_ford_rejects_bad_input() {
        assert!(matches!(
            make_bellman_ford(&graph(2, &[(0, 1, -1)]), 0),
            Err(Error::Spec(_))
        ));
        assert!(matches!(
            make_bellman_ford(&graph(2, &[]), 2),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn decoders_render_distances() {
        let f = bellman_ford_file("bf", &graph(3, &[(0, 1, 5)]), 0, false).unwrap();
        let inst = verified(&f).unwrap();
        let out = registry::decode(&f, &fifo(&inst)).unwrap();
        assert_eq!(out, serde_json::json!({"distances": [0, 5, null]}));
    }

    #[test]
    fn predecessors_break_ties_toward_smaller_ids() {
        let g = graph(4, &[(0, 2, 1), (0, 1, 1), (2, 3, 1), (1, 3, 1)]);
        let f = bellman_ford_file("p", &g, 0, true).unwrap();
        let inst = verified(&f).unwrap();
        let expect = registry::oracle(&f).unwrap().unwrap();
        for seed in 0..20 {
            let out = run(&inst, &SchedulePolicy::Random { seed }, &Caps::default()).unwrap();
            assert_eq!(out.final_states, expect);
        }
        let decoded = registry::decode(&f, &expect).unwrap();
        assert_eq!(decoded["predecessors"], serde_json::json!([0, 0, 0, 1]));
    }

    #[test]
    fn carry_adds_with_overflow() {
        let inst = make_carry_adder(&[9, 9], &[1]).unwrap();
        let f = carry_file(&[9, 9], &[1]).unwrap();
        let finals = fifo(&inst);
        assert_eq!(finals, registry::oracle(&f).unwrap().unwrap());
        assert_eq!(
            registry::decode(&f, &finals).unwrap(),
            serde_json::json!({"digits": [0, 0], "overflow": 1})
        );
    }

    #[test]
    fn adding_zero_executes_nothing() {
        let inst = make_carry_adder(&[3, 2, 1], &[0]).unwrap();
        let out = run(&inst, &SchedulePolicy::Fifo, &Caps::default()).unwrap();
        assert!(out.trace.records.is_empty());
        assert_eq!(out.final_states, inst.initial);
    }

    #[test]
    fn carry_rejects_bad_digits() {
        assert!(make_carry_adder(&[10], &[1]).is_err());
        assert!(make_carry_adder(&[1; MAX_DIGITS + 1], &[1]).is_err());
    }

    #[test]
    fn carry_identity_holds_on_the_full_window() {
        for m in 0..=200i64 {
            for n in 0..=200i64 {
                for s in 0..10i64 {
                    assert_eq!((m + n + s) / 10, (m + (n + s) % 10) / 10 + (n + s) / 10);
                }
            }
        }
    }

    #[test]
    fn maxmax_identity_matrices_spread_the_maximum() {
        let g = graph(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)]);
        let id = TropicalMatrix::identity(2);
        let feats = vec![
            vec![Value::Int(3), Value::Bot],
            vec![Value::Int(1), Value::Int(4)],
            vec![Value::Bot, Value::Bot],
        ];
        let f = maxmax_file(&g, &feats, &vec![id.clone(); 3]).unwrap();
        let inst = verified(&f).unwrap();
        let all = Value::Tuple(vec![Value::Int(3), Value::Int(4)]);
        assert_eq!(fifo(&inst), vec![all.clone(); 3]);
        assert_eq!(registry::oracle(&f).unwrap().unwrap(), vec![all; 3]);
    }

    #[test]
    fn maxmax_all_bottom_stays_bottom() {
        let g = graph(2, &[(0, 1, 0)]);
        let feats = vec![vec![Value::Bot; 2]; 2];
        let inst = make_maxmax_layer(&g, &feats, &[TropicalMatrix::identity(2)]).unwrap();
        assert_eq!(fifo(&inst), vec![Value::bot_vector(2); 2]);
    }

    #[test]
    fn maxmax_rejects_mismatched_dimensions() {
        let g = graph(2, &[(0, 1, 0)]);
        let feats = vec![vec![Value::Bot; 2]; 2];
        assert!(matches!(
            make_maxmax_layer(&g, &feats, &[TropicalMatrix::identity(3)]),
            Err(Error::Dimension { .. })
        ));
        assert!(make_maxmax_layer(&g, &feats[..1], &[TropicalMatrix::identity(2)]).is_err());
    }

    #[test]
    fn sabotage_splits_the_outcomes() {
        let inst = make_sabotaged().unwrap();
        let rep = confluence_check(
            &inst,
            &standard_policies(50),
            None,
            &ConfluenceOptions::default(),
        )
        .unwrap();
        assert!(!rep.passed);
        assert_eq!(
            rep.distinct_finals,
            vec![
                vec![Value::Int(1), Value::Int(9)],
                vec![Value::Int(1), Value::Int(10)]
            ]
        );
        let max = stock::max_bot(-20, 20);
        let hom = check_homomorphism(
            &inst.psi[0],
            &max,
            &max,
            max.carrier.elements(),
            &CheckConfig::default(),
        )
        .unwrap();
        assert!(!hom.passed);
        assert!(!hom.witnesses.is_empty());
    }

    #[test]
    fn untrusted_sabotage_fails_verification() {
        let mut f = sabotaged_file();
        f.graph.edges[0].trusted = false;
        assert!(matches!(verified(&f), Err(Error::Verification(_))));
    }

    #[test]
    fn parallel_and_serial_reports_agree() {
        let inst = make_bellman_ford(
            &graph(4, &[(0, 1, 1), (1, 2, 2), (0, 2, 4), (2, 3, 1), (3, 1, 0)]),
            0,
        )
        .unwrap();
        let policies = standard_policies(20);
        let serial =
            confluence_check(&inst, &policies, None, &ConfluenceOptions::default()).unwrap();
        let parallel = confluence_check(
            &inst,
            &policies,
            None,
            &ConfluenceOptions {
                parallel: true,
                ..ConfluenceOptions::default()
            },
        )
        .unwrap();
        assert!(serial.passed);
        assert_eq!(
            serde_json::to_string(&serial).unwrap(),
            serde_json::to_string(&parallel).unwrap()
        );
    }

    #[test]
    fn enumeration_joins_the_report() {
        let inst =
            make_bellman_ford(&graph(3, &[(0, 1, 1), (1, 0, 1), (1, 2, 2), (2, 1, 2)]), 0).unwrap();
        let expect = vec![Value::Int(0), Value::Int(-1), Value::Int(-3)];
        let rep = confluence_check(
            &inst,
            &[],
            Some(&expect),
            &ConfluenceOptions {
                enumerate: true,
                ..ConfluenceOptions::default()
            },
        )
        .unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.enumeration.unwrap().interleavings > 1);
    }

    fn weighted_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
        (1usize..=8).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n, 0i64..=10), 0..=20),
            )
        })
    }

    fn g_out(inst: &crate::fabric::Instance) -> usize {
        inst.graph.max_out_degree()
    }

    fn as_states(dist: Vec<Option<u64>>) -> Vec<Value> {
        dist.into_iter()
            .map(|d| d.map_or(Value::Bot, |d| Value::Int(-(d as i64))))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bellman_ford_matches_the_oracle((n, edges) in weighted_graph(), seed in any::<u64>()) {
            let inst = make_bellman_ford(&graph(n, &edges), 0).unwrap();
            let oracle_edges: Vec<_> = edges.iter().map(|&(u, v, w)| (u, v, w as u64)).collect();
            let expect = as_states(oracle_bellman_ford(n, &oracle_edges, 0));
            let out = run(&inst, &SchedulePolicy::Random { seed }, &Caps::default()).unwrap();
            prop_assert_eq!(out.status, RunStatus::Quiescent);
            prop_assert_eq!(&out.final_states, &expect);
        }

        #[test]
        fn bellman_ford_trajectories_only_rise((n, edges) in weighted_graph(), seed in any::<u64>()) {
            let inst = make_bellman_ford(&graph(n, &edges), 0).unwrap();
            let out = run(&inst, &SchedulePolicy::Random { seed }, &Caps::default()).unwrap();
            // States pass through path lengths, not only shortest ones; the
            // reachable carrier is {⊥, -k..0} for the largest length k seen,
            // a chain of k + 2 elements.
            let k = out
                .trace
                .records
                .iter()
                .filter_map(|r| r.state_after.as_ref().and_then(Value::int))
                .map(|x| x.unsigned_abs() as usize)
                .max()
                .unwrap_or(0);
            let mut changes = vec![0usize; n];
            let mut current = inst.initial.clone();
            for r in out.trace.records.iter().filter(|r| r.kind == RecordKind::Deliver) {
                let after = r.state_after.clone().unwrap();
                prop_assert_eq!(current[r.node].join(&after), Some(after.clone()));
                if after != current[r.node] {
                    changes[r.node] += 1;
                    current[r.node] = after;
                }
            }
            prop_assert!(changes.iter().all(|&c| c <= k + 1), "{:?} with k = {}", changes, k);
            let bound = n * (k + 2) * g_out(&inst) + inst.injections.len();
            prop_assert!(out.trace.records.len() <= bound, "{} events, bound {}", out.trace.records.len(), bound);
        }

        #[test]
        fn paths_match_the_oracle((n, edges) in weighted_graph(), seed in any::<u64>()) {
            let f = bellman_ford_file("p", &graph(n, &edges), 0, true).unwrap();
            let inst = verified(&f).unwrap();
            let out = run(&inst, &SchedulePolicy::Random { seed }, &Caps::default()).unwrap();
            prop_assert_eq!(out.final_states, registry::oracle(&f).unwrap().unwrap());
        }

        #[test]
        fn carry_matches_integer_addition(
            x in prop::collection::vec(0u8..10, 1..=12),
            y in prop::collection::vec(0u8..10, 1..=12),
            seed in any::<u64>(),
        ) {
            let f = carry_file(&x, &y).unwrap();
            let inst = verified(&f).unwrap();
            let out = run(&inst, &SchedulePolicy::Random { seed }, &Caps::default()).unwrap();
            let (digits, overflow) = oracle_add(&x, &y);
            let mut expect: Vec<Value> = digits.iter().map(|&d| Value::Int(d as i64)).collect();
            expect.push(Value::Int(overflow as i64));
            prop_assert_eq!(&out.final_states, &expect);
        }

        #[test]
        fn width_one_maxmax_is_bellman_ford((n, edges) in weighted_graph(), seed in any::<u64>()) {
            let g = graph(n, &edges);
            let mut feats = vec![vec![Value::Bot]; n];
            feats[0] = vec![Value::Int(0)];
            let mats: Vec<_> = edges
                .iter()
                .map(|&(_, _, w)| TropicalMatrix::new(1, 1, vec![Value::Int(-w)]).unwrap())
                .collect();
            let mm = make_maxmax_layer(&g, &feats, &mats).unwrap();
            let bf = make_bellman_ford(&g, 0).unwrap();
            let unwrap = |v: Vec<Value>| -> Vec<Value> {
                v.into_iter().map(|x| x.tuple().unwrap()[0].clone()).collect()
            };
            let policy = SchedulePolicy::Random { seed };
            let bf_final = run(&bf, &policy, &Caps::default()).unwrap().final_states;
            prop_assert_eq!(&unwrap(run(&mm, &policy, &Caps::default()).unwrap().final_states), &bf_final);
            prop_assert_eq!(&unwrap(synchronous_run(&mm, u64::MAX).unwrap()), &bf_final);
        }
    }
}
