use proptest::prelude::*;
use proptest::sample::SizeRange;

use kgc_study_kit::compare::{graph_isomorphic, grade_task, precision_recall, CompletionStatus};
use kgc_study_kit::instruments::{
    score_pssuq, score_raw_tlx, score_sus, score_tlx, score_wp, tlx_weights, PairwiseChoice, PssuqResponse,
    PssuqSubscale, SusResponse, TlxFactor, TlxResponse, WpResponse,
};
use kgc_study_kit::par::Execution;
use kgc_study_kit::pipeline::{analyze, grade_study, score_study, select_comparison_test, synth_study, AnalysisConfig, Branch, StudyInfo, SynthSpec};
use kgc_study_kit::rdf::{parse_ntriples, serialize_ntriples, Graph, Iri, Literal, Term, Triple};
use kgc_study_kit::stats::{
    kruskal_wallis, levene, pearson, shapiro_wilk, spearman, welch_t, wilcoxon_ranksum, anova_oneway, midranks,
};
use kgc_study_kit::study::{load_study, write_study, StudyDataset};

const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

fn lexical() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z ]{0,8}",
        prop::collection::vec(any::<char>(), 0..12).prop_map(|c| c.into_iter().collect()),
        prop::collection::vec(prop::sample::select(vec!['"', '\\', '\n', '\r', '\t', '\u{0}', '\u{7f}', 'é', '\u{1F600}']), 0..8)
            .prop_map(|c| c.into_iter().collect()),
    ]
}

fn literal() -> impl Strategy<Value = Literal> {
    (lexical(), 0..3u8).prop_map(|(lex, kind)| match kind {
        0 => Literal::simple(lex),
        1 => Literal::lang_tagged(lex, "en-GB").unwrap(),
        _ => Literal::typed(lex, Iri::new(XSD_INTEGER).unwrap()),
    })
}

fn node(blanks: u8) -> impl Strategy<Value = Term> {
    let iri = (0..5u8).prop_map(|i| Term::iri(format!("http://example.com/s{i}")).unwrap());
    if blanks == 0 {
        iri.boxed()
    } else {
        prop_oneof![iri, (0..blanks).prop_map(|b| Term::blank(format!("b{b}")).unwrap())].boxed()
    }
}

fn triple(blanks: u8) -> impl Strategy<Value = Triple> {
    let object = prop_oneof![node(blanks), literal().prop_map(Term::Literal)];
    (node(blanks), 0..3u8, object).prop_map(|(s, p, o)| {
        Triple::new(s, Term::iri(format!("http://example.com/p{p}")).unwrap(), o).unwrap()
    })
}

fn graph(blanks: u8, size: impl Into<SizeRange>) -> impl Strategy<Value = Graph> {
    prop::collection::vec(triple(blanks), size).prop_map(|ts| ts.into_iter().collect())
}

/// Renames every blank node through a permutation of `0..n` plus a prefix.
fn relabel(g: &Graph, perm: &[usize], prefix: &str) -> Graph {
    g.iter()
        .map(|t| {
            t.map_blank_nodes(|l| {
                let i: usize = l.trim_start_matches(|c: char| c.is_ascii_alphabetic()).parse().unwrap();
                format!("{prefix}{}", perm[i % perm.len()])
            })
        })
        .collect()
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn sample(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, len)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ntriples_round_trip(g in graph(4, 0..25)) {
        prop_assert_eq!(parse_ntriples(&serialize_ntriples(&g)).unwrap(), g);
    }

    #[test]
    fn repeated_lines_change_nothing(g in graph(3, 0..15), k in 1..4usize) {
        let text = serialize_ntriples(&g);
        let repeated: String = text.lines().flat_map(|l| std::iter::repeat_n(format!("{l}\n"), k)).collect();
        prop_assert_eq!(parse_ntriples(&repeated).unwrap(), g);
    }

    #[test]
    fn escaped_literals_survive(lex in lexical()) {
        let t = Triple::new(
            Term::iri("http://example.com/s").unwrap(),
            Term::iri("http://example.com/p").unwrap(),
            Term::Literal(Literal::simple(lex.clone())),
        ).unwrap();
        let g: Graph = std::iter::once(t).collect();
        let back = parse_ntriples(&serialize_ntriples(&g)).unwrap();
        let t = back.iter().next().unwrap();
        match t.object() {
            Term::Literal(l) => prop_assert_eq!(l.lexical(), lex.as_str()),
            other => prop_assert!(false, "unexpected object {other}"),
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence(g in graph(5, 1..15), p in permutation(5), q in permutation(5)) {
        let a = relabel(&g, &p, "x");
        let b = relabel(&a, &q, "y");
        prop_assert!(graph_isomorphic(&g, &g));
        prop_assert!(graph_isomorphic(&g, &a) && graph_isomorphic(&a, &g));
        prop_assert!(graph_isomorphic(&a, &b) && graph_isomorphic(&g, &b));
    }

    #[test]
    fn scores_ignore_blank_labels(g in graph(4, 1..12), e in graph(4, 1..12), p in permutation(4)) {
        let base = precision_recall(&g, &e);
        prop_assert_eq!(precision_recall(&relabel(&g, &p, "g"), &e), base);
        prop_assert_eq!(precision_recall(&g, &relabel(&e, &p, "e")), base);
    }

    #[test]
    fn isomorphic_submissions_score_one(g in graph(4, 1..15), p in permutation(4)) {
        let grade = grade_task("T1", Some(&relabel(&g, &p, "z")), &g, CompletionStatus::Completed, Some(10.0)).unwrap();
        prop_assert!(grade.isomorphic);
        prop_assert_eq!((grade.precision, grade.recall, grade.f_measure), (1.0, 1.0, 1.0));
    }

    #[test]
    fn deletions_and_additions_are_exact(g in graph(0, 2..30), cut in 0.0..0.5f64, extra in 0..10usize) {
        let n = g.len();
        let k = (n as f64 * cut) as usize;
        let kept: Graph = g.iter().skip(k).cloned().collect();
        let pr = precision_recall(&kept, &g);
        prop_assert_eq!(pr.precision, 1.0);
        prop_assert_eq!(pr.recall, (n - k) as f64 / n as f64);
        let mut grown = g.clone();
        for i in 0..extra {
            grown.insert(Triple::new(
                Term::iri("http://example.com/spurious").unwrap(),
                Term::iri("http://example.com/p0").unwrap(),
                Term::Literal(Literal::simple(i.to_string())),
            ).unwrap());
        }
        let pr = precision_recall(&grown, &g);
        prop_assert_eq!(pr.precision, n as f64 / (n + extra) as f64);
        prop_assert_eq!(pr.recall, 1.0);
    }
}

fn choices() -> impl Strategy<Value = Vec<PairwiseChoice>> {
    prop::collection::vec(any::<bool>(), 15).prop_map(|flips| {
        TlxFactor::pairs()
            .zip(flips)
            .map(|((a, b), f)| if f { PairwiseChoice::new(a, b) } else { PairwiseChoice::new(b, a) })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn equal_ratings_cancel_weights(r in 0.0..=100.0f64, c in choices()) {
        let t = TlxResponse::new(&[r; 6], Some(c)).unwrap();
        prop_assert!((score_tlx(&t).unwrap() - score_raw_tlx(&t)).abs() < 1e-12);
    }

    #[test]
    fn choice_order_is_irrelevant(c in choices(), seed in any::<u64>()) {
        let mut shuffled = c.clone();
        let n = shuffled.len();
        for i in 0..n {
            shuffled.swap(i, (seed.wrapping_mul(i as u64 + 7) % n as u64) as usize);
        }
        prop_assert_eq!(tlx_weights(&c).unwrap(), tlx_weights(&shuffled).unwrap());
    }

    #[test]
    fn workload_scores_are_monotone_and_bounded(
        r in prop::collection::vec(0.0..=100.0f64, 8), c in choices(), i in 0..6usize, bump in 0.0..50.0f64,
    ) {
        let t = TlxResponse::new(&r[..6], Some(c.clone())).unwrap();
        let mut up = r.clone();
        up[i] = (up[i] + bump).min(100.0);
        let t_up = TlxResponse::new(&up[..6], Some(c)).unwrap();
        let (w, w_up) = (score_tlx(&t).unwrap(), score_tlx(&t_up).unwrap());
        prop_assert!(w_up >= w - 1e-12);
        prop_assert!(score_raw_tlx(&t_up) >= score_raw_tlx(&t) - 1e-12);
        prop_assert!((0.0..=100.0).contains(&w) && (0.0..=100.0).contains(&score_raw_tlx(&t)));

        let wp = WpResponse::new(&r).unwrap();
        let mut up = r.clone();
        up[i + 2] = (up[i + 2] + bump).min(100.0);
        let wp_up = WpResponse::new(&up).unwrap();
        prop_assert!(score_wp(&wp_up) >= score_wp(&wp) - 1e-12);
        prop_assert!((0.0..=100.0).contains(&score_wp(&wp)));
    }

    #[test]
    fn sus_direction_and_bounds(items in prop::collection::vec(1..=5u8, 10), i in 0..10usize) {
        let s = score_sus(&SusResponse::new(&items).unwrap());
        prop_assert!((0.0..=100.0).contains(&s));
        prop_assume!(items[i] < 5);
        let mut up = items.clone();
        up[i] += 1;
        let s_up = score_sus(&SusResponse::new(&up).unwrap());
        if i % 2 == 0 {
            prop_assert!(s_up > s);
        } else {
            prop_assert!(s_up < s);
        }
    }

    #[test]
    fn pssuq_means_are_monotone_and_bounded(
        items in prop::collection::vec(prop::option::weighted(0.9, 1..=7u8), 16), i in 0..16usize,
    ) {
        let q = PssuqResponse::new(&items, vec![None; 16]).unwrap();
        prop_assume!(score_pssuq(&q).is_ok());
        let before = score_pssuq(&q).unwrap();
        for sub in PssuqSubscale::ALL {
            prop_assert!((1.0..=7.0).contains(&before.get(sub)));
        }
        prop_assume!(matches!(items[i], Some(v) if v < 7));
        let mut up = items.clone();
        up[i] = up[i].map(|v| v + 1);
        let after = score_pssuq(&PssuqResponse::new(&up, vec![None; 16]).unwrap()).unwrap();
        for sub in PssuqSubscale::ALL {
            prop_assert!(after.get(sub) >= before.get(sub));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn p_values_in_unit_interval_and_order_free(
        a in sample(5..15), b in sample(5..15), c in sample(5..15), rot in 0..5usize,
    ) {
        let mut a2 = a.clone();
        a2.rotate_left(rot);
        a2.reverse();
        let groups: [&[f64]; 3] = [&a, &b, &c];
        let shuffled: [&[f64]; 3] = [&a2, &b, &c];
        let results = [
            (shapiro_wilk(&a), shapiro_wilk(&a2)),
            (levene(&groups), levene(&shuffled)),
            (welch_t(&a, &b), welch_t(&a2, &b)),
            (anova_oneway(&groups), anova_oneway(&shuffled)),
            (wilcoxon_ranksum(&a, &b), wilcoxon_ranksum(&a2, &b)),
            (kruskal_wallis(&groups), kruskal_wallis(&shuffled)),
            (spearman(&a[..5], &b[..5]), spearman(&a[..5], &b[..5])),
            (pearson(&a[..5], &b[..5]), pearson(&a[..5], &b[..5])),
        ];
        for (x, y) in results {
            let (x, y) = (x.unwrap(), y.unwrap());
            prop_assert!((0.0..=1.0).contains(&x.p_value));
            prop_assert!(close(x.statistic, y.statistic, 1e-9), "{} vs {}", x.statistic, y.statistic);
            prop_assert!((x.p_value - y.p_value).abs() < 1e-9);
        }
    }

    #[test]
    fn welch_and_shapiro_are_affine_invariant(
        a in sample(5..20), b in sample(5..20), scale in prop_oneof![-5.0..-0.2f64, 0.2..5.0f64], shift in -50.0..50.0f64,
    ) {
        let f = |v: &[f64]| v.iter().map(|x| scale * x + shift).collect::<Vec<_>>();
        let (fa, fb) = (f(&a), f(&b));
        let (w, w2) = (welch_t(&a, &b).unwrap(), welch_t(&fa, &fb).unwrap());
        prop_assert!((w.p_value - w2.p_value).abs() < 1e-9);
        prop_assert!(close(w.statistic, scale.signum() * w2.statistic, 1e-9));
        let (s, s2) = (shapiro_wilk(&a).unwrap(), shapiro_wilk(&fa).unwrap());
        prop_assert!((s.statistic - s2.statistic).abs() < 1e-9);
    }

    #[test]
    fn rank_tests_ignore_monotone_maps(a in sample(3..12), b in sample(3..12), c in sample(3..12)) {
        let f = |v: &[f64]| v.iter().map(|x| x * x * x / 1000.0 + 2.0 * x).collect::<Vec<_>>();
        let (fa, fb, fc) = (f(&a), f(&b), f(&c));
        let (r, r2) = (wilcoxon_ranksum(&a, &b).unwrap(), wilcoxon_ranksum(&fa, &fb).unwrap());
        prop_assert_eq!(r.statistic, r2.statistic);
        prop_assert!((r.p_value - r2.p_value).abs() < 1e-12);
        let (k, k2) = (kruskal_wallis(&[&a, &b, &c]).unwrap(), kruskal_wallis(&[&fa, &fb, &fc]).unwrap());
        prop_assert!(close(k.statistic, k2.statistic, 1e-12));
        prop_assert!((k.p_value - k2.p_value).abs() < 1e-12);
    }

    #[test]
    fn correlation_symmetry(x in sample(4..20), seed in any::<u64>()) {
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * 0.3 + ((seed >> (i % 60)) % 97) as f64).collect();
        let (xy, yx) = (pearson(&x, &y), pearson(&y, &x));
        prop_assume!(xy.is_ok());
        prop_assert_eq!(xy.unwrap().statistic, yx.unwrap().statistic);
        let (rx, ry) = (midranks(&x), midranks(&y));
        let distinct = |v: &[f64]| { let mut s = v.to_vec(); s.sort_by(f64::total_cmp); s.windows(2).all(|w| w[0] != w[1]) };
        prop_assume!(distinct(&x) && distinct(&y));
        prop_assert!(close(spearman(&rx, &ry).unwrap().statistic, pearson(&rx, &ry).unwrap().statistic, 1e-12));
    }

    #[test]
    fn parametric_only_when_every_group_is_normal(
        groups in prop::collection::vec(prop_oneof![
            sample(3..15),
            sample(3..15).prop_map(|v| v.into_iter().map(|x| (x / 20.0).exp()).collect()),
        ], 1..4),
    ) {
        let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
        let choice = select_comparison_test(&refs, 0.05);
        let all_normal = groups.iter().all(|g| shapiro_wilk(g).map(|r| r.p_value > 0.05).unwrap_or(false));
        match choice.branch {
            Branch::Parametric => prop_assert!(all_normal),
            Branch::Nonparametric => prop_assert!(!all_normal),
            Branch::NotApplicable => prop_assert_eq!(groups.len(), 1),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn study_survives_write_and_load(seed in any::<u64>(), groups in 1..4usize, n in 2..5usize) {
        let ds = synth_study(&SynthSpec::new(groups, n, seed)).unwrap();
        prop_assert_eq!(&StudyDataset::from_json(&ds.to_json()).unwrap(), &ds);
        let dir = tempfile::tempdir().unwrap();
        write_study(&ds, dir.path()).unwrap();
        let loaded = load_study(dir.path()).unwrap();
        prop_assert_eq!(&loaded, &ds);
        write_study(&loaded, dir.path()).unwrap();
        prop_assert_eq!(load_study(dir.path()).unwrap(), loaded);
    }

    #[test]
    fn swapping_groups_negates_statistics(seed in any::<u64>()) {
        let ds = synth_study(&SynthSpec::new(2, 10, seed)).unwrap();
        let mut grades = grade_study(&ds, Execution::Sequential).unwrap();
        let mut scores = score_study(&ds).unwrap();
        let info = StudyInfo::of(&ds);
        let cfg = AnalysisConfig::default();
        let before = analyze(&grades, &scores, &info, &cfg, Execution::Sequential).unwrap();
        grades.groups.reverse();
        scores.groups.reverse();
        let after = analyze(&grades, &scores, &info, &cfg, Execution::Sequential).unwrap();
        for (x, y) in before.comparisons.iter().zip(&after.comparisons) {
            prop_assert_eq!(x.test, y.test);
            let (Some(rx), Some(ry)) = (&x.result, &y.result) else { continue };
            prop_assert!((rx.p_value - ry.p_value).abs() < 1e-12, "{}: {} vs {}", x.metric, rx.p_value, ry.p_value);
            if let (Some(zx), Some(zy)) = (rx.z, ry.z) {
                prop_assert!(close(zx, -zy, 1e-12));
            } else {
                prop_assert!(close(rx.statistic, -ry.statistic, 1e-12));
            }
        }
    }
}
