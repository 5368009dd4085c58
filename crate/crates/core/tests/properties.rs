mod common;

use common::{all_labeled, check_split_equivalence, informative, random_csv, random_data};
use ezr::active::{
    active_learn, active_learn_observed, argmax_xploit, confidence_of, elite_size, samples_for_confidence,
    two_stage_optimize, BudgetPolicy,
};
use ezr::data::{median, Cell, ColStats, Dataset, GoalStats, Labeler, Metric, NumStats, Role, SymStats};
use ezr::explain::{
    counterfactual, mdi_importance, node_weighted_impurity, permutation_importance, select_features,
    CounterfactualTarget,
};
use ezr::harness::{exhaustive_oracle, random_baseline};
use ezr::likelihood::{like, xploit, Cohort, NbParams};
use ezr::tree::{grow_tree, Tree, TreeConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn goals() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 1..=3)
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn header_classification_survives_reload(seed in any::<u64>(), n_num in 0usize..3, n_sym in 0usize..3, g in goals()) {
        let text = random_csv(seed, 3, n_num, n_sym, &g, 0.0);
        let a = Dataset::load(text.as_bytes()).unwrap();
        let header = a.columns.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(",");
        let b = Dataset::from_header(&header.split(',').collect::<Vec<_>>(), Default::default()).unwrap();
        prop_assert_eq!(&a.columns, &b.columns);
        prop_assert_eq!(a.y.len(), g.len());
        prop_assert_eq!(a.heaven.len(), g.len());
    }

    #[test]
    fn metrics_are_bounded(seed in any::<u64>(), g in goals(), missing in 0.0f64..0.3) {
        let d = random_data(seed, 30, 2, 1, &g, missing);
        for r in 0..d.len() {
            let a = d.distance(r, Metric::D2h).unwrap();
            let c = d.distance(r, Metric::Chebyshev).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!((0.0..=1.0).contains(&c));
            // RMS of gaps never exceeds their max
            prop_assert!(a <= c + 1e-12);
            if g.len() == 1 {
                prop_assert!((a - c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn improving_one_goal_never_raises_d2h(seed in any::<u64>(), g in goals(), which in 0usize..3, row in 0usize..30, step in 0.0f64..1.0) {
        let d = random_data(seed, 30, 1, 0, &g, 0.0);
        let which = which % g.len();
        let col = d.y[which];
        let stats = d.stats[col].as_num().unwrap();
        let mut cells = d.rows[row].cells.clone();
        let now = cells[col].as_num().unwrap();
        // move toward the goal's better end, staying inside the file's range
        let target = if g[which] { stats.hi } else { stats.lo };
        cells[col] = Cell::Num(now + step * (target - now));
        let before = d.d2h(&d.rows[row]).unwrap();
        let after = d.d2h(&ezr::data::Row::new(cells)).unwrap();
        prop_assert!(after <= before + 1e-12);
    }

    #[test]
    fn win_anchors(values in prop::collection::vec(0.0f64..1.0, 2..50)) {
        let s = GoalStats::from_values(&values).unwrap();
        prop_assume!(!s.is_degenerate());
        prop_assert_eq!(s.win(s.min).unwrap(), 100.0);
        prop_assert_eq!(s.win(s.median).unwrap(), 0.0);
        prop_assert!(s.win(1.0).unwrap() <= 100.0);
    }

    #[test]
    fn num_stats_invariants(xs in prop::collection::vec(-1e3f64..1e3, 1..40)) {
        let mut s = NumStats::default();
        for &x in &xs {
            s.add(x);
        }
        prop_assert!(s.lo <= s.mu + 1e-9 && s.mu <= s.hi + 1e-9);
        prop_assert!(s.sd() >= 0.0);
        let (lo, hi) = (s.lo, s.hi);
        s.add(hi + 1.0);
        s.add(lo - 1.0);
        prop_assert!(s.lo < lo && s.hi > hi);
    }

    #[test]
    fn sym_stats_invariants(xs in prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 1..40)) {
        let mut s = SymStats::default();
        for x in &xs {
            s.add(x);
        }
        prop_assert_eq!(s.counts.values().sum::<usize>(), xs.len());
        let mode = s.mode().unwrap();
        prop_assert!(s.counts.values().all(|&c| c <= s.count(mode)));
    }

    #[test]
    fn log_likelihood_is_finite(seed in any::<u64>(), missing in 0.0f64..0.4) {
        let d = random_data(seed, 20, 2, 2, &[false], missing);
        let best = Cohort::from_rows(&d, &[0, 1, 2]);
        let rest = Cohort::from_rows(&d, &[3, 4, 5, 6, 7]);
        for row in &d.rows {
            let s = xploit(&d, row, &best, &rest, NbParams::default());
            prop_assert!(s.log_like_best.is_finite() && s.log_like_rest.is_finite());
        }
    }

    #[test]
    fn cohort_stats_match_their_rows(seed in any::<u64>(), k in 1usize..15, drop in 0usize..15) {
        let d = random_data(seed, 15, 2, 1, &[true], 0.2);
        let rows: Vec<usize> = (0..k).collect();
        let mut c = Cohort::from_rows(&d, &rows);
        if drop < k {
            c.remove(&d, drop);
        }
        let kept: Vec<usize> = rows.iter().copied().filter(|&r| r != drop).collect();
        let fresh = Cohort::from_rows(&d, &kept);
        prop_assert_eq!(c.len(), kept.len());
        for (a, b) in c.stats().iter().zip(fresh.stats()) {
            match (a, b) {
                (ColStats::Num(a), ColStats::Num(b)) => {
                    prop_assert_eq!(a.n, b.n);
                    prop_assert!((a.mu - b.mu).abs() < 1e-9);
                    prop_assert!((a.sd() - b.sd()).abs() < 1e-6);
                }
                (ColStats::Sym(a), ColStats::Sym(b)) => {
                    let nonzero = |m: &std::collections::BTreeMap<String, usize>| {
                        m.iter().filter(|(_, &v)| v > 0).map(|(k, v)| (k.clone(), *v)).collect::<Vec<_>>()
                    };
                    prop_assert_eq!(nonzero(&a.counts), nonzero(&b.counts));
                }
                _ => prop_assert!(false, "kind mismatch"),
            }
        }
    }

    #[test]
    fn xploit_argmax_survives_rescaling(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let text = random_csv(seed, 24, 3, 1, &[false, true], 0.0);
        let d = Dataset::load(text.as_bytes()).unwrap();
        // rescale every numeric input column
        let mut lines = text.lines();
        let mut scaled = lines.next().unwrap().to_string() + "\n";
        for l in lines {
            let cells: Vec<String> = l
                .split(',')
                .enumerate()
                .map(|(i, c)| if i < 3 { format!("{}", c.parse::<f64>().unwrap() * scale) } else { c.to_string() })
                .collect();
            scaled += &(cells.join(",") + "\n");
        }
        let e = Dataset::load(scaled.as_bytes()).unwrap();
        let (b, r): (Vec<usize>, Vec<usize>) = ((0..4).collect(), (4..12).collect());
        let todo: Vec<usize> = (12..24).collect();
        let p = NbParams::default();
        let i = argmax_xploit(&d, &todo, &Cohort::from_rows(&d, &b), &Cohort::from_rows(&d, &r), p).unwrap();
        let j = argmax_xploit(&e, &todo, &Cohort::from_rows(&e, &b), &Cohort::from_rows(&e, &r), p).unwrap();
        let score = |data: &Dataset, k: usize| {
            xploit(data, &data.rows[todo[k]], &Cohort::from_rows(data, &b), &Cohort::from_rows(data, &r), p).score
        };
        // equal up to rounding: compare the winners' scores, not just indices
        prop_assert!((score(&e, i) - score(&e, j)).abs() < 1e-6 * (1.0 + score(&e, j).abs()));
    }

    #[test]
    fn like_ignores_column_order(seed in any::<u64>()) {
        let text = random_csv(seed, 12, 2, 1, &[true], 0.1);
        let d = Dataset::load(text.as_bytes()).unwrap();
        let swapped: String = text
            .lines()
            .map(|l| {
                let c: Vec<&str> = l.split(',').collect();
                format!("{},{},{},{}\n", c[2], c[1], c[0], c[3])
            })
            .collect();
        let e = Dataset::load(swapped.as_bytes()).unwrap();
        let rows: Vec<usize> = (0..6).collect();
        let (cd, ce) = (Cohort::from_rows(&d, &rows), Cohort::from_rows(&e, &rows));
        for r in 0..d.len() {
            let a = like(&d, &d.rows[r], &cd, 12, 2, NbParams::default());
            let b = like(&e, &e.rows[r], &ce, 12, 2, NbParams::default());
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn symbol_likelihood_grows_with_count(extra in 0usize..5) {
        let mut text = String::from("s,Y-\n");
        for i in 0..(3 + extra) {
            text += &format!("{},{}\n", if i < 1 + extra { "a" } else { "b" }, i);
        }
        let d = Dataset::load(text.as_bytes()).unwrap();
        let all: Vec<usize> = (0..d.len()).collect();
        let probe = ezr::data::Row::new(vec![Cell::Sym("a".into()), Cell::Num(0.0)]);
        let c = Cohort::from_rows(&d, &all);
        let fewer = Cohort::from_rows(&d, &all[1..]);
        // same prior for both, so only the symbol term differs
        let n_all = 10;
        let prior = |n: usize| ((n as f64 + 1.0) / (n_all as f64 + 2.0)).ln();
        let a = like(&d, &probe, &c, n_all, 2, NbParams::default()) - prior(c.len());
        let b = like(&d, &probe, &fewer, n_all, 2, NbParams::default()) - prior(fewer.len());
        // one extra "a" in a cohort of one extra row raises P(a)
        prop_assert!(a > b || (c.len() == fewer.len()));
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn active_learning_invariants_hold_every_step(seed in any::<u64>(), stop in 4usize..40, missing in 0.0f64..0.2) {
        let d = random_data(seed, 60, 2, 1, &[false, true], missing);
        let pool: Vec<usize> = (0..d.len()).collect();
        let mut lab = Labeler::new(&d, Metric::D2h);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checks = 0;
        let state = active_learn_observed(&mut lab, &pool, &BudgetPolicy::fixed(stop, 0), NbParams::default(), &mut rng, |s, l| {
            checks += 1;
            assert_eq!(s.n_labeled, s.best.len() + s.rest.len());
            assert!(s.n_labeled <= stop);
            assert_eq!(s.best.len(), elite_size(s.n_labeled));
            assert_eq!(l.spent(), s.n_labeled);
            let worst_best = s.best.rows().iter().map(|&r| l.get(r).unwrap()).fold(f64::MIN, f64::max);
            let best_rest = s.rest.rows().iter().map(|&r| l.get(r).unwrap()).fold(f64::MAX, f64::min);
            assert!(worst_best <= best_rest);
            assert!(s.todo.iter().all(|r| !s.best.rows().contains(r) && !s.rest.rows().contains(r)));
        }).unwrap();
        prop_assert_eq!(checks, stop - 4 + 1);
        prop_assert_eq!(lab.spent(), stop);
        prop_assert_eq!(state.n_labeled + state.todo.len(), pool.len());
    }

    #[test]
    fn two_stage_returns_a_labeled_row(seed in any::<u64>(), stop in 4usize..30, check in 0usize..10) {
        let d = random_data(seed, 50, 2, 1, &[true], 0.1);
        let pool: Vec<usize> = (0..d.len()).collect();
        let mut lab = Labeler::new(&d, Metric::D2h);
        let sel = two_stage_optimize(&mut lab, &pool, None, &BudgetPolicy::fixed(stop, check), NbParams::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(lab.is_labeled(sel.row));
        prop_assert_eq!(sel.labels_spent, stop + check);
        prop_assert_eq!(lab.spent(), stop + check);
        let labeled_min = (0..d.len()).filter(|&r| lab.is_labeled(r)).map(|r| lab.get(r).unwrap()).fold(f64::MAX, f64::min);
        prop_assert_eq!(sel.d2h, labeled_min);
    }

    #[test]
    fn confidence_of_ceil_count_reaches_target(c in 0.5f64..0.9999, p in 0.0005f64..0.5) {
        let n = samples_for_confidence(c, p).unwrap();
        prop_assert!(confidence_of(n, p) >= c - 1e-12);
        prop_assert!(n == 1 || confidence_of(n - 1, p) < c);
    }
}

fn check_tree_structure(t: &Tree, d: &Dataset, n: usize) {
    assert!(t.depth() <= n);
    assert!(t.leaves().count() <= n);
    for (id, node) in t.nodes.iter().enumerate() {
        assert_eq!(node.n, node.members.len());
        assert!(node.impurity.unwrap() >= 0.0);
        if !node.is_leaf() {
            assert!(node_weighted_impurity(t, id) < node.impurity.unwrap());
            let kids: usize = node.children.iter().map(|&c| t.nodes[c].n).sum();
            assert!(kids <= node.n);
        }
    }
    // every complete row ends in exactly one leaf, the one that holds it
    for m in &t.nodes[0].members {
        let cells = &d.rows[m.row].cells;
        if d.x.iter().all(|&c| !cells[c].is_missing()) {
            let holding: Vec<usize> = t.leaves().filter(|&l| t.nodes[l].members.contains(m)).collect();
            assert_eq!(holding, vec![t.route(cells).leaf]);
        }
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn root_split_matches_brute_force(seed in any::<u64>(), n in 2usize..=12, n_num in 0usize..=2, n_sym in 0usize..=1, min_leaf in 1usize..=3) {
        prop_assume!(n_num + n_sym >= 1);
        check_split_equivalence(seed, n, n_num, n_sym, min_leaf).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn trees_are_well_formed(seed in any::<u64>(), n in 2usize..40, missing in 0.0f64..0.2, min_leaf in 1usize..4) {
        let d = random_data(seed, n, 2, 1, &[true, false], missing);
        let rows = all_labeled(&d);
        let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
        let stats = GoalStats { min: 0.0, median: median(&ys).unwrap().max(1e-6) };
        let t = grow_tree(&d, &rows, &stats, TreeConfig { min_leaf }).unwrap();
        check_tree_structure(&t, &d, n);
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>(), n in 2usize..40) {
        let d = random_data(seed, n, 2, 1, &[true], 0.0);
        let rows = all_labeled(&d);
        let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
        let stats = GoalStats { min: 0.0, median: median(&ys).unwrap().max(1e-6) };
        let t = grow_tree(&d, &rows, &stats, TreeConfig::default()).unwrap();
        let back = Tree::parse(&t.render(), &t.names).unwrap();
        prop_assert_eq!(back.render(), t.render());
        prop_assert_eq!(back.nodes.len(), t.nodes.len());
        for (a, b) in t.nodes.iter().zip(&back.nodes) {
            prop_assert_eq!(&a.condition, &b.condition);
            prop_assert_eq!(a.n, b.n);
            prop_assert_eq!(a.win.round(), b.win);
            prop_assert_eq!(&a.children, &b.children);
        }
        let rec = Tree::from_records(&t.records(), &t.names).unwrap();
        prop_assert_eq!(rec.render(), t.render());
    }

    #[test]
    fn mdi_conserves_total_impurity(seed in any::<u64>(), n in 2usize..40) {
        let d = random_data(seed, n, 3, 1, &[true, false], 0.1);
        let rows = all_labeled(&d);
        let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
        let stats = GoalStats { min: 0.0, median: median(&ys).unwrap().max(1e-6) };
        let t = grow_tree(&d, &rows, &stats, TreeConfig::default()).unwrap();
        let m = mdi_importance(&t, &d.x);
        let total: f64 = m.scores.iter().map(|s| s.score).sum();
        let inner: f64 = (0..t.nodes.len()).filter(|&i| !t.nodes[i].is_leaf()).map(|i| node_weighted_impurity(&t, i)).sum();
        prop_assert!((total - inner).abs() <= 1e-9);
        let used: Vec<usize> = (1..t.nodes.len()).map(|i| t.nodes[i].condition.as_ref().unwrap().feature).collect();
        for s in &m.scores {
            prop_assert!(s.score >= 0.0);
            if !used.contains(&s.feature) {
                prop_assert_eq!(s.score, 0.0);
            }
        }
        let u = m.unit_sum();
        if total > 0.0 {
            prop_assert!((u.scores.iter().map(|s| s.score).sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mdi_ranking_ignores_rescaling(seed in any::<u64>(), scale in 0.1f64..50.0) {
        let text = random_csv(seed, 20, 2, 0, &[false], 0.0);
        let scaled: String = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                if i == 0 {
                    return l.to_string() + "\n";
                }
                let c: Vec<&str> = l.split(',').collect();
                format!("{},{},{}\n", c[0].parse::<f64>().unwrap() * scale, c[1], c[2])
            })
            .collect();
        let mdi = |t: &str| {
            let d = Dataset::load(t.as_bytes()).unwrap();
            let rows = all_labeled(&d);
            let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
            let stats = GoalStats { min: 0.0, median: median(&ys).unwrap().max(1e-6) };
            let tree = grow_tree(&d, &rows, &stats, TreeConfig::default()).unwrap();
            let leaves: Vec<Vec<usize>> = tree.leaves().map(|l| tree.nodes[l].members.iter().map(|m| m.row).collect()).collect();
            (mdi_importance(&tree, &d.x).ranked().iter().map(|s| s.feature).collect::<Vec<_>>(), leaves)
        };
        prop_assert_eq!(mdi(&text), mdi(&scaled));
    }

    #[test]
    fn counterfactual_edits_reach_the_target(seed in any::<u64>(), n in 4usize..40, row in 0usize..40, nearest in any::<bool>()) {
        let d = random_data(seed, n, 2, 1, &[true, false], 0.0);
        let rows = all_labeled(&d);
        let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
        let stats = GoalStats { min: 0.0, median: median(&ys).unwrap().max(1e-6) };
        let t = grow_tree(&d, &rows, &stats, TreeConfig::default()).unwrap();
        let cells = &d.rows[row % n].cells;
        let target = if nearest { CounterfactualTarget::Nearest } else { CounterfactualTarget::Best };
        if let Some(cf) = counterfactual(&t, cells, target) {
            prop_assert!(cf.win_gain > 0.0);
            prop_assert!(!cf.edits.is_empty());
            let edited = cf.apply(&t, &d, cells);
            prop_assert_eq!(t.route(&edited).leaf, cf.target);
            // only features on the target's diverging suffix change
            let src = t.ancestry(cf.source);
            let dst = t.ancestry(cf.target);
            let common = src.iter().zip(&dst).take_while(|(a, b)| a == b).count();
            let suffix: Vec<usize> = dst[common..].iter().map(|&i| t.nodes[i].condition.as_ref().unwrap().feature).collect();
            for (f, (a, b)) in cells.iter().zip(&edited).enumerate() {
                if a != b {
                    prop_assert!(suffix.contains(&f));
                }
            }
        } else {
            let here = t.nodes[t.route(cells).leaf].win;
            prop_assert!(t.leaves().all(|l| t.nodes[l].win <= here));
        }
    }

    #[test]
    fn unused_features_have_zero_permutation_importance(seed in any::<u64>(), n in 4usize..30) {
        let d = random_data(seed, n, 3, 1, &[true], 0.1);
        let rows = all_labeled(&d);
        let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
        let stats = GoalStats { min: 0.0, median: median(&ys).unwrap().max(1e-6) };
        let t = grow_tree(&d, &rows, &stats, TreeConfig::default()).unwrap();
        let used: Vec<usize> = (1..t.nodes.len()).map(|i| t.nodes[i].condition.as_ref().unwrap().feature).collect();
        let p = permutation_importance(&t, &d, &rows, 3, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for s in &p.scores {
            if !used.contains(&s.feature) {
                prop_assert_eq!(s.score, 0.0);
            }
        }
    }

    #[test]
    fn oracle_matches_linear_scan(seed in any::<u64>(), take in 1usize..40) {
        let d = random_data(seed, 40, 1, 0, &[true, false], 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<usize> = (0..d.len()).collect();
        rand::seq::SliceRandom::shuffle(pool.as_mut_slice(), &mut rng);
        pool.truncate(take);
        let got = exhaustive_oracle(&d, &pool, Metric::D2h).unwrap();
        let mut want = pool[0];
        for &r in &pool {
            if d.distance(r, Metric::D2h).unwrap() < d.distance(want, Metric::D2h).unwrap() {
                want = r;
            }
        }
        prop_assert_eq!(got, want);
    }
}

#[test]
fn select_features_spends_exactly_the_budget() {
    for seed in 0..5 {
        let d = informative(seed, 200);
        let pool: Vec<usize> = (0..d.len()).collect();
        let policy = BudgetPolicy::feature_selection(pool.len());
        assert_eq!(policy.stop, 80);
        let fs = select_features(
            &d,
            &pool,
            &policy,
            Metric::D2h,
            TreeConfig::default(),
            &mut ChaCha8Rng::seed_from_u64(seed),
        )
        .unwrap();
        assert_eq!(fs.labels_spent, policy.stop);
        assert_eq!(fs.ranked[0].name, "Signal");
        assert!(fs.ranked.iter().all(|s| s.name != "Flat"));
    }
}

#[test]
fn random_baseline_mean_win_is_near_zero() {
    // uniform distances 0..1: min 0, median 0.5
    let values: Vec<f64> = (0..1001).map(|i| i as f64 / 1000.0).collect();
    let mut text = String::from("A,Y-\n");
    for v in &values {
        text += &format!("{v},{v}\n");
    }
    let d = Dataset::load(text.as_bytes()).unwrap();
    let pool: Vec<usize> = (0..d.len()).collect();
    let stats = GoalStats::of_pool(&d, &pool, Metric::D2h).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mean: f64 = (0..10_000)
        .map(|_| {
            stats
                .win(
                    d.distance(random_baseline(&pool, &mut rng).unwrap(), Metric::D2h)
                        .unwrap(),
                )
                .unwrap()
        })
        .sum::<f64>()
        / 10_000.0;
    assert!(mean.abs() <= 3.0, "mean win {mean}");
}

#[test]
fn monotone_data_puts_best_below_pool_median() {
    let mut hits = 0;
    for seed in 0..20 {
        let d = informative(100 + seed, 300);
        let pool: Vec<usize> = (0..d.len()).collect();
        let all: Vec<f64> = pool.iter().map(|&r| d.distance(r, Metric::D2h).unwrap()).collect();
        let mut lab = Labeler::new(&d, Metric::D2h);
        let state = active_learn(
            &mut lab,
            &pool,
            &BudgetPolicy::fixed(20, 0),
            NbParams::default(),
            &mut ChaCha8Rng::seed_from_u64(seed),
        )
        .unwrap();
        let best: Vec<f64> = state.best.rows().iter().map(|&r| lab.get(r).unwrap()).collect();
        if median(&best).unwrap() < median(&all).unwrap() {
            hits += 1;
        }
    }
    assert!(hits >= 18, "{hits}/20");
}

#[test]
fn more_budget_rarely_hurts() {
    let mut ok = 0;
    for seed in 0..20 {
        let d = informative(200 + seed, 300);
        let pool: Vec<usize> = (0..d.len()).collect();
        let best_at = |stop: usize| {
            let mut lab = Labeler::new(&d, Metric::D2h);
            let s = active_learn(
                &mut lab,
                &pool,
                &BudgetPolicy::fixed(stop, 0),
                NbParams::default(),
                &mut ChaCha8Rng::seed_from_u64(seed),
            )
            .unwrap();
            s.best
                .rows()
                .iter()
                .map(|&r| lab.get(r).unwrap())
                .fold(f64::MAX, f64::min)
        };
        if best_at(30) <= best_at(20) {
            ok += 1;
        }
    }
    assert!(ok >= 18, "{ok}/20");
}

#[test]
fn ignored_columns_stay_out_of_learning() {
    let d = Dataset::load("A,HpX,CPLx,Y-\n1,2,3,4\n".as_bytes()).unwrap();
    assert_eq!(d.columns[1].role, Role::Ignored);
    assert_eq!(d.columns[2].role, Role::Independent);
    assert_eq!(d.x, vec![0, 2]);
}
