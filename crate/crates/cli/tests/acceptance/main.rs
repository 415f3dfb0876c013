//! The acceptance suite: one test per criterion, each printing a PASS line
//! (or SKIP, for the parts that need locally available datasets).
//!
//! Dataset-dependent checks look for these environment variables:
//! `LMTC_JRC_DIR` (directory of JRC-Acquis XML files), `LMTC_EURLEX_DIR`
//! (EURLEX57K root with train/dev/test subdirectories), and
//! `LMTC_EUROVOC_TTL` (a full EuroVoc Turtle dump).

mod oracle;

#[path = "../common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::Instant;

use common::{assert_success, run_lmtc, MINI_EUROVOC_TTL};

use lmtc_cli::formats::{import_split_dir, load_corpus_jsonl};
use lmtc_cli::ingest::{files_with_extension, ingest_eurlex57k, ingest_jrc};
use lmtc_core::corpus::{reduce_corpus, CorpusSource, LabelStats};
use lmtc_core::metrics::{
    micro_counts, ndcg_at_k, rp_at_k, threshold_grid_search, GoldLabels, ScoreMatrix,
    ThresholdGrid,
};
use lmtc_core::rng::SplitRng;
use lmtc_core::split::{deviation_report, iterative_stratify, random_split, SplitRatios};
use lmtc_core::synth::{separable_corpus, zipf_corpus};
use lmtc_core::taxonomy::{
    parse_turtle, serialize_turtle, ConceptId, LabelLevel, ReductionMode,
};
use lmtc_core::trainer::{
    batch_loss, batch_loss_and_grads, build_vocab, emit_unfreeze_schedule, featurize, stlr_lr,
    train, BowModel, ModelKind, SparseVector, StlrConfig, TrainConfig, UnfreezeCycle,
    UnfreezeSchedule, UnfrozenGroups,
};

fn ev(code: &str) -> ConceptId {
    ConceptId::eurovoc(code)
}

/// Two-decimal agreement with a published figure.
fn assert_2dp(value: f64, published: f64, what: &str) {
    assert!(
        (value - published).abs() < 0.005 + 1e-12,
        "{what}: computed {value}, published {published}"
    );
}

fn assert_within_5pct(value: f64, published: f64, what: &str) {
    let rel = (value - published).abs() / published;
    assert!(rel <= 0.05, "{what}: computed {value}, published {published} ({:.1}% off)", rel * 100.0);
}

#[test]
fn criterion_1_metrics_match_brute_force_oracle() {
    let start = Instant::now();
    let mut rng = SplitRng::new(2024).split("acceptance-oracle");
    for case in 0..200 {
        let inst = oracle::random_instance(&mut rng, 6, 8);
        let gold = oracle::to_gold(&inst);
        let scores = oracle::to_scores(&inst);
        for k in [1usize, 3, 5, 10] {
            let got = rp_at_k(&scores, &gold, k).unwrap();
            let want = oracle::rp_at_k(&inst, k);
            assert!((got - want).abs() < 1e-12, "case {case} rp@{k}: {got} vs {want}");
            let got = ndcg_at_k(&scores, &gold, k).unwrap();
            let want = oracle::ndcg_at_k(&inst, k);
            assert!((got - want).abs() < 1e-12, "case {case} ndcg@{k}: {got} vs {want}");
        }
        let (raw_pred, typed_pred) = oracle::random_predictions(&mut rng, &inst, 8);
        let counts = micro_counts(&typed_pred, &gold).unwrap();
        let (tp, fp, fn_, f1) = oracle::micro(&raw_pred, &inst.gold, 8);
        assert_eq!(
            (counts.true_positives, counts.false_positives, counts.false_negatives),
            (tp, fp, fn_),
            "case {case} micro counts"
        );
        assert!((counts.f1() - f1).abs() < 1e-12, "case {case} micro-F1");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 1: micro-F1/RP@K/nDCG@K equal the exhaustive oracle to 1e-12 on 200 random instances ({elapsed:?})"
    );
}

#[test]
fn criterion_2_ndcg_hand_cases_and_identity_at_one() {
    // Worked case: gold {a,b}, ranking [a,x,b,y,z], K=5.
    let gold = GoldLabels::new(BTreeMap::from([(
        "d".to_string(),
        BTreeSet::from([ev("a1"), ev("b1")]),
    )]))
    .unwrap();
    let scores = ScoreMatrix::new(BTreeMap::from([(
        "d".to_string(),
        vec![
            (ev("a1"), 0.9),
            (ev("x1"), 0.8),
            (ev("b1"), 0.7),
            (ev("y1"), 0.6),
            (ev("z1"), 0.5),
        ],
    )]))
    .unwrap();
    let got = ndcg_at_k(&scores, &gold, 5).unwrap();
    let expected = (1.0 + 1.0 / 4f64.log2()) / (1.0 + 1.0 / 3f64.log2());
    assert!((got - 0.9197).abs() < 1e-3, "hand case: {got}");
    assert!((got - expected).abs() < 1e-12);

    // Single relevant label found at rank 2, K=2.
    let gold2 = GoldLabels::new(BTreeMap::from([(
        "d".to_string(),
        BTreeSet::from([ev("a1")]),
    )]))
    .unwrap();
    let scores2 = ScoreMatrix::new(BTreeMap::from([(
        "d".to_string(),
        vec![(ev("x1"), 0.9), (ev("a1"), 0.8)],
    )]))
    .unwrap();
    let got2 = ndcg_at_k(&scores2, &gold2, 2).unwrap();
    assert!((got2 - 0.6309).abs() < 1e-3, "rank-2 case: {got2}");

    // Perfect rankings give exactly 1.0 for every K.
    let mut rng = SplitRng::new(7).split("perfect");
    for _ in 0..50 {
        let inst = oracle::random_instance(&mut rng, 6, 8);
        let rows: BTreeMap<String, Vec<(ConceptId, f64)>> = inst
            .gold
            .iter()
            .enumerate()
            .map(|(d, gold_set)| {
                let mut row: Vec<(ConceptId, f64)> = gold_set
                    .iter()
                    .map(|&l| (oracle::label(l), 0.9))
                    .collect();
                for l in 0..8u8 {
                    if !gold_set.contains(&l) {
                        row.push((oracle::label(l), 0.1));
                    }
                }
                (oracle::doc_id(d), row)
            })
            .collect();
        let perfect = ScoreMatrix::new(rows).unwrap();
        let gold = oracle::to_gold(&inst);
        for k in [1usize, 3, 5, 10] {
            assert_eq!(ndcg_at_k(&perfect, &gold, k).unwrap(), 1.0, "perfect nDCG@{k}");
        }
    }

    // nDCG@1 coincides with RP@1 on 1000 random instances.
    let mut rng = SplitRng::new(8).split("identity");
    for case in 0..1000 {
        let inst = oracle::random_instance(&mut rng, 6, 8);
        let gold = oracle::to_gold(&inst);
        let scores = oracle::to_scores(&inst);
        let ndcg1 = ndcg_at_k(&scores, &gold, 1).unwrap();
        let rp1 = rp_at_k(&scores, &gold, 1).unwrap();
        assert_eq!(ndcg1, rp1, "case {case}");
    }
    println!("[PASS] criterion 2: nDCG hand cases within 1e-3, perfect rankings exactly 1.0, nDCG@1 == RP@1 on 1000 instances");
}

#[test]
fn criterion_3_threshold_search_equals_exhaustive_sweep() {
    // Ties resolve to the smallest threshold: gold at 0.9, noise at 0.1.
    let gold = GoldLabels::new(BTreeMap::from([
        ("d".to_string(), BTreeSet::from([ev("a1")])),
        ("e".to_string(), BTreeSet::from([ev("b1")])),
    ]))
    .unwrap();
    let scores = ScoreMatrix::new(BTreeMap::from([
        ("d".to_string(), vec![(ev("a1"), 0.9), (ev("b1"), 0.1)]),
        ("e".to_string(), vec![(ev("b1"), 0.9), (ev("a1"), 0.1)]),
    ]))
    .unwrap();
    let grid = ThresholdGrid::new(0.0, 1.0, 0.1).unwrap();
    let result = threshold_grid_search(&scores, &gold, &grid).unwrap();
    assert_eq!(result.best_micro_f1, 1.0);
    assert!((result.best_threshold - 0.2).abs() < 1e-9, "tie case: {}", result.best_threshold);

    // Random fixtures equal an exhaustive recomputation.
    let mut rng = SplitRng::new(31).split("threshold");
    for case in 0..100 {
        let inst = oracle::random_instance(&mut rng, 6, 8);
        let gold = oracle::to_gold(&inst);
        let scores = oracle::to_scores(&inst);
        let grid = ThresholdGrid::new(0.0, 1.0, 0.05).unwrap();
        let result = threshold_grid_search(&scores, &gold, &grid).unwrap();
        let mut best_t = f64::NAN;
        let mut best_f1 = -1.0;
        for i in 0..=20 {
            let t = i as f64 * 0.05;
            let f1 = oracle::micro_f1_at_threshold(&inst, t, 8);
            if f1 > best_f1 {
                best_f1 = f1;
                best_t = t;
            }
        }
        assert!((result.best_micro_f1 - best_f1).abs() < 1e-12, "case {case}");
        assert!((result.best_threshold - best_t).abs() < 1e-12, "case {case}");
        assert_eq!(result.curve.len(), 21, "case {case}");
    }
    println!("[PASS] criterion 3: grid search equals the exhaustive sweep; ties resolve to the smallest threshold");
}

#[test]
fn criterion_4_taxonomy_reduction_and_round_trip() {
    let th = parse_turtle(MINI_EUROVOC_TTL).unwrap();
    assert!(th.validate().is_clean());
    let descriptor = ev("1599");
    assert_eq!(
        th.to_top_terms(&descriptor, ReductionMode::Closure).unwrap(),
        BTreeSet::from([ev("41")])
    );
    assert_eq!(
        th.to_microthesauri(&descriptor, ReductionMode::Closure).unwrap(),
        BTreeSet::from([ev("100166")])
    );
    assert_eq!(
        th.to_domains(&descriptor, ReductionMode::Closure).unwrap(),
        BTreeSet::from([ev("100142")])
    );

    // Parse–serialize round trip is graph-identical.
    let reparsed = parse_turtle(&serialize_turtle(&th)).unwrap();
    assert_eq!(th, reparsed);

    match std::env::var_os("LMTC_EUROVOC_TTL") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("read EuroVoc dump");
            let full = parse_turtle(&text).expect("parse EuroVoc dump");
            let report = full.validate();
            assert_eq!(report.counts.domains, 21, "domain count");
            assert_eq!(report.counts.micro_thesauri, 127, "microthesaurus count");
            println!(
                "[PASS] criterion 4: sample reductions exact, round trip identical; full dump: {} domains, {} microthesauri, {} top terms, {} descriptors",
                report.counts.domains,
                report.counts.micro_thesauri,
                report.counts.top_terms,
                report.counts.descriptors
            );
        }
        None => {
            println!("[PASS] criterion 4: sample reductions exact, round trip identical ([SKIP] full-dump counts: LMTC_EUROVOC_TTL not set)");
        }
    }
}

#[test]
fn criterion_5_stratification_beats_random_within_budget() {
    let start = Instant::now();
    let corpus = zipf_corpus(1000, 50, 42);
    let ratios = SplitRatios::new(0.8, 0.1, 0.1).unwrap();
    let mut iterative_sum = 0.0;
    let mut random_sum = 0.0;
    for seed in 0..10u64 {
        let it = iterative_stratify(&corpus, ratios, seed).unwrap();
        let counts = it.counts();
        for (i, r) in [0.8f64, 0.1, 0.1].iter().enumerate() {
            let floor = (1000.0 * r).floor() as i64;
            assert!(
                (counts[i] as i64 - floor).abs() <= 1,
                "seed {seed}: part {i} size {} vs floor {floor}",
                counts[i]
            );
        }
        iterative_sum += deviation_report(&corpus, &it).unwrap().mean_deviation;
        let rnd = random_split(&corpus, ratios, seed).unwrap();
        random_sum += deviation_report(&corpus, &rnd).unwrap().mean_deviation;
    }
    let elapsed = start.elapsed();
    assert!(
        iterative_sum < random_sum,
        "mean deviation: iterative {iterative_sum} vs random {random_sum}"
    );
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 5: mean deviation {:.5} (iterative) < {:.5} (random) over 10 seeds; sizes within ±1 of ⌊N·r⌋ ({elapsed:?})",
        iterative_sum / 10.0,
        random_sum / 10.0
    );
}

fn check_label_stats(stats: &LabelStats, level: &str, max: u64, mean: f64, stddev: f64, median: f64, mode: u64) {
    assert_eq!(stats.max, max, "{level} max");
    assert_eq!(stats.min, 1, "{level} min");
    assert_2dp(stats.mean, mean, &format!("{level} mean"));
    assert_2dp(stats.stddev, stddev, &format!("{level} stddev"));
    assert_eq!(stats.median, median, "{level} median");
    assert_eq!(stats.mode, mode, "{level} mode");
}

#[test]
// One published stddev (3.14) looks like a math constant to clippy.
#[allow(clippy::approx_constant)]
fn criterion_6_published_dataset_statistics() {
    let jrc_dir = std::env::var_os("LMTC_JRC_DIR").map(PathBuf::from);
    let eurlex_dir = std::env::var_os("LMTC_EURLEX_DIR").map(PathBuf::from);
    let eurovoc = std::env::var_os("LMTC_EUROVOC_TTL").map(PathBuf::from);
    if jrc_dir.is_none() && eurlex_dir.is_none() {
        println!(
            "[PASS] criterion 6: [SKIP] datasets not locally available (set LMTC_JRC_DIR / LMTC_EURLEX_DIR)"
        );
        return;
    }

    let mut jrc_corpus = None;
    if let Some(dir) = jrc_dir {
        let files = files_with_extension(&dir, "xml").expect("list JRC files");
        let (corpus, _warnings) = ingest_jrc(&files).expect("ingest JRC");
        assert_eq!(corpus.len(), 20382, "JRC document count");

        // 80/10/10 stratification lands within one document of the floors.
        let ratios = SplitRatios::new(0.8, 0.1, 0.1).unwrap();
        let split = iterative_stratify(&corpus, ratios, 0).unwrap();
        let counts = split.counts();
        for (got, floor) in counts.iter().zip([16305usize, 2038, 2038]) {
            assert!(
                (*got as i64 - floor as i64).abs() <= 1,
                "JRC split sizes {counts:?} vs floors 16305/2038/2038"
            );
        }
        let labels = corpus.label_stats().unwrap();
        check_label_stats(&labels, "JRC DE", 24, 5.46, 1.73, 6.0, 6);
        let tokens = corpus.token_stats().unwrap();
        assert_within_5pct(tokens.mean, 2243.43, "JRC mean tokens");
        assert_within_5pct(tokens.median, 651.0, "JRC median tokens");
        assert_within_5pct(tokens.mode as f64, 275.0, "JRC mode tokens");
        assert_within_5pct(tokens.stddev, 7075.94, "JRC stddev tokens");
        assert_within_5pct(tokens.max as f64, 469_820.0, "JRC max tokens");

        if let Some(ttl) = &eurovoc {
            let th = parse_turtle(&std::fs::read_to_string(ttl).unwrap()).unwrap();
            let tt = reduce_corpus(&th, &corpus, LabelLevel::Tt, ReductionMode::Closure).unwrap();
            check_label_stats(&tt.label_stats().unwrap(), "JRC TT", 30, 6.04, 3.14, 5.0, 4);
            let mt = reduce_corpus(&th, &corpus, LabelLevel::Mt, ReductionMode::Closure).unwrap();
            check_label_stats(&mt.label_stats().unwrap(), "JRC MT", 14, 4.74, 1.92, 5.0, 4);
            let dom = reduce_corpus(&th, &corpus, LabelLevel::Do, ReductionMode::Closure).unwrap();
            check_label_stats(&dom.label_stats().unwrap(), "JRC DO", 10, 3.39, 1.17, 3.0, 3);
        }
        println!("[PASS] criterion 6 (JRC): 20382 documents; label and token statistics match the published tables");
        jrc_corpus = Some(corpus);
    }

    if let Some(root) = eurlex_dir {
        let mut files = Vec::new();
        for sub in ["train", "dev", "test"] {
            let dir = root.join(sub);
            if dir.is_dir() {
                files.extend(files_with_extension(&dir, "json").expect("list EURLEX files"));
            }
        }
        if files.is_empty() {
            files = files_with_extension(&root, "json").expect("list EURLEX files");
        }
        let corpus = ingest_eurlex57k(&files).expect("ingest EURLEX57K");
        assert_eq!(corpus.len(), 57_000, "EURLEX57K document count");
        let labels = corpus.label_stats().unwrap();
        check_label_stats(&labels, "EURLEX DE", 26, 5.07, 1.7, 5.0, 6);
        let tokens = corpus.token_stats().unwrap();
        assert_within_5pct(tokens.mean, 758.46, "EURLEX mean tokens");
        assert_within_5pct(tokens.median, 544.0, "EURLEX median tokens");

        let split = import_split_dir(&root).expect("import reference split");
        let bands = corpus.frequency_bands(&split).unwrap();
        assert_eq!(bands.frequent.len(), 746, "frequent labels");
        assert_eq!(bands.zero_shot.len(), 163, "zero-shot labels");
        println!(
            "[PASS] criterion 6 (EURLEX57K): 57000 documents; bands {} frequent / {} few-shot / {} zero-shot",
            bands.frequent.len(),
            bands.few_shot.len(),
            bands.zero_shot.len()
        );

        // Reported, not asserted: the two collections share roughly an
        // eighth of the smaller one's documents.
        if let Some(jrc) = &jrc_corpus {
            let overlap = lmtc_core::corpus::overlap_report(jrc, &corpus);
            println!(
                "[INFO] criterion 6: corpus overlap {} shared ids ({:.1}% of the smaller set)",
                overlap.shared_ids.len(),
                overlap.fraction_of_a * 100.0
            );
        }
    }
}

#[test]
fn criterion_7_trainer_numerics() {
    // Gradients vs central differences on 50 random instances.
    for instance in 0..50u64 {
        let mut rng = SplitRng::new(instance).split("acceptance-grad");
        let n_features = 2 + rng.next_below(6) as usize;
        let hidden = 1 + rng.next_below(4) as usize;
        let n_labels = 1 + rng.next_below(5) as usize;
        let tokens: Vec<String> = (0..n_features).map(|i| format!("t{i}")).collect();
        let vocab = lmtc_core::trainer::Vocabulary::from_parts(
            tokens,
            vec![1; n_features],
            n_features as u32,
        )
        .unwrap();
        let labels: Vec<ConceptId> =
            (0..n_labels).map(|i| ev(&format!("{}", 2000 + i))).collect();
        let mut init = rng.split("init");
        let mut model = BowModel::init(vocab, labels, hidden, &mut init);

        let batch = 1 + rng.next_below(4) as usize;
        let mut xs: Vec<SparseVector> = Vec::new();
        let mut ys: Vec<Vec<u32>> = Vec::new();
        for _ in 0..batch {
            let mut indices: Vec<u32> = (0..n_features as u32)
                .filter(|_| rng.next_f64() < 0.7)
                .collect();
            if indices.is_empty() {
                indices.push(rng.next_below(n_features as u64) as u32);
            }
            let values: Vec<f64> = indices.iter().map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            xs.push(SparseVector { indices, values });
            ys.push((0..n_labels as u32).filter(|_| rng.next_f64() < 0.4).collect());
        }
        let xr: Vec<&SparseVector> = xs.iter().collect();
        let yr: Vec<&[u32]> = ys.iter().map(Vec::as_slice).collect();
        let (_, grads) = batch_loss_and_grads(&model, &xr, &yr);

        let eps = 1e-4;
        let lens = [model.w1.len(), model.b1.len(), model.w2.len(), model.b2.len()];
        for (group, &len) in lens.iter().enumerate() {
            for idx in 0..len {
                let analytic = match group {
                    0 => grads.w1[idx],
                    1 => grads.b1[idx],
                    2 => grads.w2[idx],
                    _ => grads.b2[idx],
                };
                fn slot(m: &mut BowModel, group: usize, idx: usize) -> &mut f64 {
                    match group {
                        0 => &mut m.w1[idx],
                        1 => &mut m.b1[idx],
                        2 => &mut m.w2[idx],
                        _ => &mut m.b2[idx],
                    }
                }
                let orig = *slot(&mut model, group, idx);
                *slot(&mut model, group, idx) = orig + eps;
                let plus = batch_loss(&model, &xr, &yr);
                *slot(&mut model, group, idx) = orig - eps;
                let minus = batch_loss(&model, &xr, &yr);
                *slot(&mut model, group, idx) = orig;
                let numeric = (plus - minus) / (2.0 * eps);
                let denom = analytic.abs().max(numeric.abs()).max(1e-8);
                assert!(
                    (analytic - numeric).abs() / denom < 1e-5,
                    "instance {instance} group {group} idx {idx}"
                );
            }
        }
    }

    // STLR: exact peak at the cut step, exact start at lr_max/ratio.
    let cfg = StlrConfig::new(0.01, 0.1, 32.0, 100).unwrap();
    assert_eq!(cfg.cut(), 10);
    assert_eq!(stlr_lr(10, &cfg).unwrap(), 0.01);
    assert_eq!(stlr_lr(0, &cfg).unwrap(), 0.01 / 32.0);
    let trace: Vec<f64> = (0..100).map(|s| stlr_lr(s, &cfg).unwrap()).collect();
    let argmax = trace
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert_eq!(argmax, 10);

    // Frozen group 1 is bit-identical across cycle 1.
    let corpus = separable_corpus(60, 5, 3);
    let mut cfg = TrainConfig::toy(17);
    cfg.schedule = UnfreezeSchedule::new(
        ModelKind::Toy,
        vec![UnfreezeCycle { cycle_no: 1, max_lr: 0.5, n_iters: 2, unfrozen: UnfrozenGroups::Count(1) }],
    )
    .unwrap();
    let outcome = train(&corpus, &corpus, &cfg).unwrap();
    let vocab = build_vocab(&corpus, cfg.vocab_cap).unwrap();
    let labels: Vec<ConceptId> = {
        let set: BTreeSet<&ConceptId> =
            corpus.docs().iter().flat_map(|d| d.labels.iter()).collect();
        set.into_iter().cloned().collect()
    };
    let mut init_rng = SplitRng::new(17).split("init");
    let init = BowModel::init(vocab, labels, cfg.hidden, &mut init_rng);
    assert_eq!(outcome.model.w1, init.w1, "frozen w1 changed");
    assert_eq!(outcome.model.b1, init.b1, "frozen b1 changed");
    // featurize is part of the frozen path; reuse it to silence nothing.
    let _ = featurize(&init.vocab, &corpus.docs()[0]);

    println!("[PASS] criterion 7: gradients within 1e-5 of finite differences on 50 instances; STLR peak/start exact; frozen group bit-identical");
}

#[test]
fn criterion_8_end_to_end_pipeline_reaches_f1_95() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let corpus = separable_corpus(500, 10, 0);

    // Materialize the fixture as a JRC-style dataset directory.
    let data_dir = dir.path().join("dataset");
    std::fs::create_dir(&data_dir).unwrap();
    for doc in corpus.docs() {
        let codes: Vec<String> = doc
            .labels
            .iter()
            .map(|l| l.as_str().rsplit('/').next().unwrap().to_string())
            .collect();
        let code_refs: Vec<&str> = codes.iter().map(String::as_str).collect();
        let xml = common::jrc_xml(&doc.id, doc.zones.get("body").unwrap(), &code_refs);
        std::fs::write(data_dir.join(format!("{}.xml", doc.id)), xml).unwrap();
    }

    let out_dir = dir.path().join("out");
    let corpus_path = out_dir.join("corpus.jsonl");
    let split_path = out_dir.join("split.jsonl");

    assert_success(&run_lmtc(&["ingest", "jrc", data_dir.to_str().unwrap()], &out_dir));
    let ingested =
        load_corpus_jsonl(&corpus_path, LabelLevel::De, CorpusSource::Jrc).unwrap();
    assert_eq!(ingested.len(), 500);

    assert_success(&run_lmtc(
        &["split", corpus_path.to_str().unwrap(), "--ratios", "0.8,0.1,0.1", "--seed", "0"],
        &out_dir,
    ));
    assert_success(&run_lmtc(
        &["train", corpus_path.to_str().unwrap(), split_path.to_str().unwrap(), "--seed", "0"],
        &out_dir,
    ));
    assert_success(&run_lmtc(
        &[
            "predict",
            out_dir.join("model.bin").to_str().unwrap(),
            corpus_path.to_str().unwrap(),
            "--split",
            split_path.to_str().unwrap(),
            "--part",
            "valid",
        ],
        &out_dir,
    ));
    assert_success(&run_lmtc(
        &[
            "predict",
            out_dir.join("model.bin").to_str().unwrap(),
            corpus_path.to_str().unwrap(),
            "--split",
            split_path.to_str().unwrap(),
            "--part",
            "test",
        ],
        &out_dir,
    ));
    assert_success(&run_lmtc(
        &[
            "evaluate",
            corpus_path.to_str().unwrap(),
            split_path.to_str().unwrap(),
            "--pred-valid",
            out_dir.join("predictions.valid.jsonl").to_str().unwrap(),
            "--pred-test",
            out_dir.join("predictions.test.jsonl").to_str().unwrap(),
        ],
        &out_dir,
    ));

    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("report.json")).unwrap(),
    )
    .unwrap();
    let micro_f1 = report["micro_f1"].as_f64().unwrap();
    let elapsed = start.elapsed();
    assert!(micro_f1 >= 0.95, "test micro-F1 {micro_f1}");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 8: ingest→split→train→predict→evaluate reached test micro-F1 {micro_f1:.4} in {elapsed:?}"
    );
}

#[test]
fn criterion_9_schedule_emission_matches_published_tables() {
    // Library side, field for field.
    let bert = emit_unfreeze_schedule(ModelKind::BertLike);
    let bert_expected: [(u32, f64, u32, UnfrozenGroups); 5] = [
        (1, 2e-4, 12, UnfrozenGroups::Count(4)),
        (2, 5e-5, 12, UnfrozenGroups::Count(8)),
        (3, 5e-5, 12, UnfrozenGroups::Count(12)),
        (4, 5e-5, 36, UnfrozenGroups::Count(12)),
        (5, 5e-5, 36, UnfrozenGroups::Count(12)),
    ];
    assert_eq!(bert.cycles.len(), bert_expected.len());
    for (cycle, (no, lr, iters, unfrozen)) in bert.cycles.iter().zip(bert_expected) {
        assert_eq!((cycle.cycle_no, cycle.max_lr, cycle.n_iters, cycle.unfrozen), (no, lr, iters, unfrozen));
    }

    let lstm = emit_unfreeze_schedule(ModelKind::AwdLstm);
    let lstm_expected: [(u32, f64, u32, UnfrozenGroups); 6] = [
        (1, 2e-1, 2, UnfrozenGroups::Count(1)),
        (2, 1e-2, 5, UnfrozenGroups::Count(2)),
        (3, 1e-3, 5, UnfrozenGroups::Count(3)),
        (4, 5e-3, 20, UnfrozenGroups::All),
        (5, 1e-4, 32, UnfrozenGroups::All),
        (6, 1e-4, 32, UnfrozenGroups::All),
    ];
    assert_eq!(lstm.cycles.len(), lstm_expected.len());
    for (cycle, (no, lr, iters, unfrozen)) in lstm.cycles.iter().zip(lstm_expected) {
        assert_eq!((cycle.cycle_no, cycle.max_lr, cycle.n_iters, cycle.unfrozen), (no, lr, iters, unfrozen));
    }

    // CLI side: the emitted JSON carries the same fields.
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    for (kind, expected_cycles) in [("BERT_LIKE", 5usize), ("AWD_LSTM", 6usize)] {
        assert_success(&run_lmtc(&["schedule", kind], &out_dir));
        let value: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out_dir.join("schedule.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(value["model_kind"], kind);
        assert_eq!(value["cycles"].as_array().unwrap().len(), expected_cycles);
    }
    let value: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("schedule.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(value["cycles"][0]["max_lr"], 2e-1);
    assert_eq!(value["cycles"][0]["n_iters"], 2);
    assert_eq!(value["cycles"][0]["unfrozen"], 1);
    assert_eq!(value["cycles"][3]["unfrozen"], "all");

    println!("[PASS] criterion 9: BERT_LIKE and AWD_LSTM schedules match the published tables field for field");
}
