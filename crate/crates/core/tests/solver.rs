mod common;

use common::*;
use isovalve::generate::{corpus, generate, GenParams};
use isovalve::isolation::worst_case_ud;
use isovalve::netmodel::{fig1, fig2, Demand, Network, Placement, SlotId};
use isovalve::oracle::{binomial, brute_force, respects_faces, OracleError, DEFAULT_CAP};
use isovalve::solver::{
    preprocess, solve, BranchHeuristic, Brancher, BudgetMode, ProofStatus, RestartMode, Rules,
    SearchState, SlotValue, SolveError, SolverOptions,
};
use proptest::prelude::*;

fn toggles() -> Vec<(&'static str, SolverOptions)> {
    let all = SolverOptions::default();
    vec![
        ("all", all.clone()),
        (
            "no-faces",
            SolverOptions {
                face_constraints: false,
                ..all.clone()
            },
        ),
        (
            "no-symmetry",
            SolverOptions {
                symmetry: false,
                ..all.clone()
            },
        ),
        (
            "no-bound",
            SolverOptions {
                lb_prune: false,
                ..all.clone()
            },
        ),
        (
            "no-reduced-cost",
            SolverOptions {
                reduced_cost: false,
                ..all.clone()
            },
        ),
        (
            "faces-only",
            SolverOptions {
                face_constraints: true,
                ..SolverOptions::unpruned()
            },
        ),
        (
            "symmetry-only",
            SolverOptions {
                symmetry: true,
                ..SolverOptions::unpruned()
            },
        ),
        (
            "bound-only",
            SolverOptions {
                lb_prune: true,
                ..SolverOptions::unpruned()
            },
        ),
        (
            "reduced-cost-only",
            SolverOptions {
                reduced_cost: true,
                ..SolverOptions::unpruned()
            },
        ),
        ("none", SolverOptions::unpruned()),
    ]
}

fn assert_matches_oracle(net: &Network, nv: usize, opts: &SolverOptions, tag: &str) {
    let o = brute_force(net, nv, DEFAULT_CAP);
    match (solve(net, nv, opts), o) {
        (Ok(s), Ok(o)) => {
            assert_eq!(s.status, ProofStatus::Optimal);
            assert_eq!(s.ud, o.ud, "{tag} nv={nv}");
            assert_eq!(s.placement.count(), nv);
            assert_eq!(worst_case_ud(net, &s.placement).ud, s.ud);
        }
        (Err(SolveError::InfeasibleBudget { .. }), Err(OracleError::AllInfeasible { .. })) => {}
        (s, o) => panic!(
            "{tag} nv={nv}: solver {:?} oracle {:?}",
            s.map(|s| s.ud),
            o.map(|o| o.ud)
        ),
    }
}

#[test]
fn fig1_optima_frozen() {
    let net = fig1();
    for (i, &ud) in FIG1_OPTIMA.iter().enumerate() {
        let nv = i + 2;
        let o = brute_force(&net, nv, DEFAULT_CAP).unwrap();
        assert_eq!(o.ud, Demand::from_lps(ud), "nv={nv}");
        for (tag, opts) in toggles() {
            assert_eq!(solve(&net, nv, &opts).unwrap().ud, o.ud, "{tag} nv={nv}");
        }
    }
}

#[test]
fn fig1_six_valves_improves_on_the_paper_drawing() {
    let net = fig1();
    let paper = Placement::parse(&net, PAPER_PLACEMENT).unwrap();
    let s = solve(&net, 6, &SolverOptions::default()).unwrap();
    assert!(s.ud < worst_case_ud(&net, &paper).ud);
    assert_eq!(s.ud, Demand::from_lps(15));
}

#[test]
fn fig2_every_budget_every_rule_set() {
    let net = fig2();
    for nv in 1..=10 {
        for (tag, opts) in toggles() {
            assert_matches_oracle(&net, nv, &opts, tag);
        }
    }
}

#[test]
fn corpus_every_rule_set() {
    for net in corpus(20, 1) {
        for nv in 2..=5 {
            for (tag, opts) in toggles() {
                assert_matches_oracle(&net, nv, &opts, &format!("{} {tag}", net.name().unwrap()));
            }
        }
    }
}

#[test]
fn heuristics_and_value_orders_agree() {
    let net = fig2();
    for h in [
        BranchHeuristic::LargestSector,
        BranchHeuristic::Lex,
        BranchHeuristic::HeaviestEdge,
        BranchHeuristic::Random,
    ] {
        for present_first in [true, false] {
            let opts = SolverOptions {
                branch_heuristic: h,
                present_first,
                seed: 11,
                ..SolverOptions::default()
            };
            for nv in [3, 6, 9] {
                assert_matches_oracle(&net, nv, &opts, &format!("{h:?}"));
            }
        }
    }
}

#[test]
fn unpruned_leaf_count_is_binomial() {
    for net in [fig1(), corpus(1, 7).remove(0)] {
        let slots = net.slot_count() as u64;
        let lo = net.source_slots().len();
        for nv in lo..=lo + 3 {
            let s = solve(&net, nv, &SolverOptions::unpruned()).unwrap();
            assert_eq!(s.stats.leaves, binomial(slots, nv as u64), "nv={nv}");
        }
    }
}

#[test]
fn all_rules_cut_fig1_search_at_least_in_half() {
    let net = fig1();
    let on = solve(&net, 6, &SolverOptions::default()).unwrap();
    let off = solve(&net, 6, &SolverOptions::unpruned()).unwrap();
    assert_eq!(on.ud, off.ud);
    assert!(
        off.stats.nodes >= 2 * on.stats.nodes,
        "{} vs {}",
        off.stats.nodes,
        on.stats.nodes
    );
}

#[test]
fn root_branch_is_fixed() {
    let net = fig1();
    let st = SearchState::new(
        &net,
        6,
        BudgetMode::AtMost,
        Rules {
            faces: true,
            lb_prune: true,
            reduced_cost: true,
        },
    );
    let b = Brancher::new(BranchHeuristic::LargestSector, true, net.slot_count(), 0);
    let (slot, value) = b.choose(&st).unwrap();
    assert_eq!(net.slot_label(slot), "e25:2");
    assert_eq!(value, SlotValue::Present);
}

#[test]
fn anytime_log_is_monotone_and_ends_at_optimum() {
    let big = generate(GenParams {
        nodes: 9,
        edges: 14,
        seed: 5,
    })
    .unwrap();
    for (net, nv) in [(fig1(), 6), (big, 6)] {
        let s = solve(&net, nv, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, ProofStatus::Optimal);
        assert!(!s.anytime.is_empty());
        for w in s.anytime.windows(2) {
            assert!(w[1].ud < w[0].ud);
            assert!(w[1].elapsed >= w[0].elapsed);
        }
        assert_eq!(s.anytime.last().unwrap().ud, s.ud);
        assert_eq!(s.stats.incumbents as usize, s.anytime.len());
    }
}

#[test]
fn restarting_agrees_and_explores_no_less() {
    let nets = corpus(20, 1);
    let mut not_less = 0;
    let mut total = 0;
    for net in &nets {
        for nv in 2..=5 {
            let c = solve(net, nv, &SolverOptions::default());
            let r = solve(
                net,
                nv,
                &SolverOptions {
                    restart_mode: RestartMode::Restarting,
                    ..SolverOptions::default()
                },
            );
            match (c, r) {
                (Ok(c), Ok(r)) => {
                    assert_eq!(c.ud, r.ud);
                    assert_eq!(r.stats.restarts, r.stats.incumbents);
                    total += 1;
                    not_less += (r.stats.nodes >= c.stats.nodes) as usize;
                }
                (Err(a), Err(b)) => assert_eq!(a, b),
                _ => panic!("modes disagree on feasibility"),
            }
        }
    }
    assert!(not_less * 5 >= total * 4, "{not_less}/{total}");
}

#[test]
fn degree_two_source_must_not_be_symmetry_reduced() {
    // 1 - 2 - 3 - 4 with the source at 2: swapping the valve at node 2 from
    // pipe b to pipe a is not harmless there, because both are needed.
    let net = Network::builder()
        .nodes([1, 2, 3, 4])
        .source(2)
        .edge("a", 1, 2, 3.0)
        .edge("b", 2, 3, 5.0)
        .edge("c", 3, 4, 2.0)
        .build()
        .unwrap();
    let b2 = slot(&net, "b:2");
    for nv in 2..=4 {
        let o = brute_force(&net, nv, DEFAULT_CAP).unwrap();
        assert!(o.optimal.iter().all(|p| p.has_valve(b2)), "nv={nv}");
    }
    assert!(preprocess(&net).iter().all(|&(s, _)| s != b2));
    // node 3 is an ordinary pass-through and gets reduced
    assert_eq!(preprocess(&net), [(slot(&net, "c:3"), SlotValue::Absent)]);
    for nv in 2..=6 {
        assert_matches_oracle(&net, nv, &SolverOptions::default(), "path");
    }
}

#[test]
fn pass_through_symmetry_keeps_an_optimum() {
    // a pass-through node: the valves on either side of it are interchangeable
    let net = fig2();
    let forced: Vec<SlotId> = preprocess(&net).into_iter().map(|(s, _)| s).collect();
    for nv in 2..=8 {
        let o = brute_force(&net, nv, DEFAULT_CAP).unwrap();
        let worst = o.ud;
        let kept = o.optimal.iter().any(|p| {
            let mut q = p.clone();
            for &s in &forced {
                if q.has_valve(s) {
                    q.set(s, false);
                }
            }
            worst_case_ud(&net, &q).ud == worst
        });
        assert!(kept, "nv={nv}");
    }
}

#[test]
fn some_optimum_respects_faces() {
    for net in [fig1(), fig2()] {
        for nv in 2..=8 {
            let o = brute_force(&net, nv, DEFAULT_CAP).unwrap();
            assert!(o.optimal.iter().any(|p| respects_faces(&net, p)));
        }
    }
}

#[test]
fn limits() {
    let net = fig2();
    let opts = SolverOptions {
        node_limit: Some(5),
        ..SolverOptions::unpruned()
    };
    match solve(&net, 8, &opts) {
        Ok(s) => assert_eq!(s.status, ProofStatus::BestFound),
        Err(e) => assert_eq!(e, SolveError::LimitReached),
    }
    let opts = SolverOptions {
        time_limit: Some(std::time::Duration::ZERO),
        ..SolverOptions::unpruned()
    };
    let r = solve(&net, 8, &opts);
    assert!(
        matches!(r, Err(SolveError::LimitReached)) || r.unwrap().status == ProofStatus::BestFound
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Undoing decisions leaves the same state as replaying the survivors.
    #[test]
    fn trail_matches_replay(ops in proptest::collection::vec((0u32..20, any::<bool>(), any::<bool>()), 1..40)) {
        let net = fig2();
        let rules = Rules { faces: true, lb_prune: false, reduced_cost: false };
        let mut st = SearchState::new(&net, 20, BudgetMode::AtMost, rules);
        let mut kept: Vec<(SlotId, SlotValue)> = Vec::new();
        for (slot, present, push) in ops {
            if push || kept.is_empty() {
                let s = SlotId(slot);
                if st.value(s) != SlotValue::Undecided {
                    continue;
                }
                let v = if present { SlotValue::Present } else { SlotValue::Absent };
                st.push_frame();
                if st.decide(s, v).is_ok() {
                    kept.push((s, v));
                } else {
                    st.pop_frame();
                }
            } else {
                st.pop_frame();
                kept.pop();
            }
            let mut fresh = SearchState::new(&net, 20, BudgetMode::AtMost, rules);
            for &(s, v) in &kept {
                fresh.decide(s, v).unwrap();
            }
            prop_assert_eq!(st.snapshot(), fresh.snapshot());
        }
    }
}

/// Smallest worst case over every completion of a partial assignment,
/// regardless of valve count.
fn best_completion(net: &Network, fixed: &[Option<bool>]) -> Demand {
    let open: Vec<usize> = (0..fixed.len()).filter(|&i| fixed[i].is_none()).collect();
    let mut best = Demand::INFINITE;
    for bits in 0u32..1 << open.len() {
        let mut mask: Vec<bool> = fixed.iter().map(|v| v.unwrap_or(false)).collect();
        for (k, &i) in open.iter().enumerate() {
            mask[i] = bits >> k & 1 == 1;
        }
        best = best.min(worst_case_ud(net, &Placement::from_mask(mask)).ud);
    }
    best
}

#[test]
fn class_bounds_never_exceed_any_completion() {
    use rand::{Rng, SeedableRng};
    let nets = corpus(20, 300);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let rules = Rules {
        faces: false,
        lb_prune: false,
        reduced_cost: false,
    };
    for i in 0..200 {
        let net = &nets[i % nets.len()];
        let k = net.slot_count();
        let fixed: Vec<Option<bool>> = (0..k)
            .map(|_| match rng.random_range(0..3) {
                0 => None,
                1 => Some(true),
                _ => Some(false),
            })
            .collect();
        let mut st = SearchState::new(net, k, BudgetMode::AtMost, rules);
        let decisions: Vec<_> = fixed
            .iter()
            .enumerate()
            .filter_map(|(s, v)| {
                v.map(|p| {
                    (
                        SlotId(s as u32),
                        if p {
                            SlotValue::Present
                        } else {
                            SlotValue::Absent
                        },
                    )
                })
            })
            .collect();
        st.assign_all(&decisions).unwrap();
        let lb = st.bounds().max_lower_bound();
        assert!(lb <= best_completion(net, &fixed));
    }
}

#[test]
fn face_and_bound_rules_never_add_nodes() {
    for net in [fig1(), fig2()] {
        for nv in net.source_slots().len()..=net.slot_count() {
            let on = SolverOptions::default();
            let off = SolverOptions {
                face_constraints: false,
                lb_prune: false,
                ..on.clone()
            };
            let a = solve(&net, nv, &on).unwrap();
            let b = solve(&net, nv, &off).unwrap();
            assert_eq!(a.ud, b.ud);
            assert!(
                a.stats.nodes <= b.stats.nodes,
                "{} nv={nv}",
                net.name().unwrap()
            );
        }
    }
}
