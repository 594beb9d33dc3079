//! Acceptance suite: one test per release criterion, each printing a
//! PASS line and enforcing its runtime budget. Run with
//! `cargo test --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use a11y_core::cost::{Strategy, UsageRecord};
use a11y_core::html::{parse_html, serialize};
use a11y_core::llm::{
    repair_agentic, CallCtx, MockEntry, MockProvider, MockResponse, MockScript, RepairOptions,
};
use a11y_core::metrics::f1_score;
use a11y_core::rules::{scan, Registry};
use a11y_core::testgen;
use a11y_core::validate::{structural_similarity, validate, ValidateOptions};
use a11y_core::FixedClock;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn budget(started: Instant, limit: Duration, criterion: &str) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= limit,
        "{criterion} exceeded its runtime budget: {elapsed:?} > {limit:?}"
    );
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn a11y_ok(args: &[&str]) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_a11y"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "a11y {args:?}: {}\n{}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    let mut rows = vec![reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>()];
    for record in reader.records() {
        rows.push(record.unwrap().iter().map(str::to_string).collect());
    }
    rows
}

fn col(rows: &[Vec<String>], name: &str) -> usize {
    rows[0].iter().position(|h| h == name).unwrap()
}

#[test]
fn criterion_1_metric_formula_fidelity() {
    let started = Instant::now();
    let f1_rule = f1_score(0.51, 0.93);
    assert!(
        (f1_rule - 0.659).abs() <= 0.005,
        "F1(0.51, 0.93) = {f1_rule}"
    );
    let f1_llm = f1_score(0.50, 0.94);
    assert!((f1_llm - 0.653).abs() <= 0.005, "F1(0.50, 0.94) = {f1_llm}");
    budget(started, Duration::from_secs(1), "criterion 1");
    println!("PASS criterion 1: metric formula fidelity (F1 {f1_rule:.4} / {f1_llm:.4})");
}

fn write_ledger(path: &Path, records: &[UsageRecord]) {
    let mut text = String::new();
    for r in records {
        text.push_str(&serde_json::to_string(r).unwrap());
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}

#[allow(clippy::too_many_arguments)]
fn synth_records(
    strategy: Strategy,
    model: &str,
    calls: usize,
    files: usize,
    retries: usize,
    prompt_total: u64,
    completion_total: u64,
    latency: u64,
) -> Vec<UsageRecord> {
    assert!(calls >= files && calls - files == retries);
    let p_base = prompt_total / calls as u64;
    let p_rem = (prompt_total % calls as u64) as usize;
    let c_base = completion_total / calls as u64;
    let c_rem = (completion_total % calls as u64) as usize;
    let mut out = Vec::with_capacity(calls);
    for i in 0..calls {
        // first `files` records are one call per file; the rest distribute
        // round-robin as retry calls
        let (file, call_index, retry) = if i < files {
            (i, 1, false)
        } else {
            (i - files, 2, true)
        };
        out.push(UsageRecord {
            file_id: format!("f{:03}", file + 1),
            strategy,
            model_id: model.to_string(),
            call_index,
            prompt_tokens: p_base + u64::from(i < p_rem),
            completion_tokens: c_base + u64::from(i < c_rem),
            latency_ms: latency,
            retry,
            timestamp: 0,
        });
    }
    out
}

#[test]
fn criterion_2_cost_arithmetic_fidelity() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let zs = synth_records(
        Strategy::ZeroShot,
        "zs-model",
        308,
        308,
        0,
        8_000_000,
        6_200_000,
        474,
    );
    let agent = synth_records(
        Strategy::Agent,
        "agent-model",
        504,
        308,
        196,
        11_500_000,
        9_600_000,
        433,
    );
    let zs_path = tmp.path().join("zero_shot.ndjson");
    let agent_path = tmp.path().join("agent.ndjson");
    write_ledger(&zs_path, &zs);
    write_ledger(&agent_path, &agent);
    let config = tmp.path().join("config.toml");
    std::fs::write(&config, "[run]\nprice_table = \"prices.toml\"\n").unwrap();
    std::fs::write(
        tmp.path().join("prices.toml"),
        "[models.\"zs-model\"]\nprompt_per_million = \"0.15\"\ncompletion_per_million = \"0.60\"\n\
         [models.\"agent-model\"]\nprompt_per_million = \"0.30\"\ncompletion_per_million = \"0.421875\"\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    a11y_ok(&[
        "cost-report",
        "--config",
        config.to_str().unwrap(),
        "--ledger",
        zs_path.to_str().unwrap(),
        "--ledger",
        agent_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);

    let agg = read_csv(&out.join("cost/aggregate.csv"));
    let ratio = col(&agg, "ratio");
    let row = |metric: &str| {
        agg.iter()
            .find(|r| r[0] == metric)
            .unwrap_or_else(|| panic!("row {metric}"))
            .clone()
    };
    let cost = row("total_cost_usd");
    assert_eq!(cost[1], "$4.9200");
    assert_eq!(cost[2], "$7.5000");
    let expect_ratio = |metric: &str, expected: f64| {
        let got: f64 = row(metric)[ratio].parse().unwrap();
        assert!(
            (got - expected).abs() <= 0.005,
            "{metric} ratio {got} vs {expected}"
        );
    };
    expect_ratio("api_calls", 1.64);
    expect_ratio("prompt_tokens", 1.44);
    expect_ratio("completion_tokens", 1.55);
    expect_ratio("total_tokens", 1.49);
    expect_ratio("total_cost_usd", 1.52);
    assert_eq!(row("retries")[2], "196");

    let per_file = read_csv(&out.join("cost/per_file.csv"));
    let cpf = col(&per_file, "cost_per_file_usd");
    let zs_row = per_file[1..].iter().find(|r| r[0] == "zero_shot").unwrap();
    let agent_row = per_file[1..].iter().find(|r| r[0] == "agent").unwrap();
    let zs_cost: f64 = zs_row[cpf].parse().unwrap();
    let agent_cost: f64 = agent_row[cpf].parse().unwrap();
    assert!((zs_cost - 0.016).abs() <= 0.001, "{zs_cost}");
    assert!((agent_cost - 0.024).abs() <= 0.001, "{agent_cost}");

    budget(started, Duration::from_secs(1), "criterion 2");
    println!("PASS criterion 2: cost tables reproduce $4.92 / $7.50 and the published ratios");
}

#[test]
fn criterion_3_rule_engine_fixture_soundness() {
    let started = Instant::now();
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/rules");
    let expected: Vec<(&str, Vec<(&str, usize)>)> = vec![
        ("image-alt_pos.html", vec![("image-alt", 1)]),
        ("image-alt_neg.html", vec![]),
        ("link-name_pos.html", vec![("link-name", 1)]),
        ("link-name_neg.html", vec![]),
        ("button-name_pos.html", vec![("button-name", 1)]),
        ("button-name_neg.html", vec![]),
        ("heading-order_pos.html", vec![("heading-order", 1)]),
        ("heading-order_neg.html", vec![]),
        ("empty-heading_pos.html", vec![("empty-heading", 1)]),
        ("empty-heading_neg.html", vec![]),
        ("duplicate-id_pos.html", vec![("duplicate-id", 1)]),
        ("duplicate-id_neg.html", vec![]),
        ("aria-hidden-focus_pos.html", vec![("aria-hidden-focus", 1)]),
        ("aria-hidden-focus_neg.html", vec![]),
        ("color-contrast_pos.html", vec![("color-contrast", 1)]),
        ("color-contrast_neg.html", vec![]),
        ("region_pos.html", vec![("region", 1)]),
        ("region_neg.html", vec![]),
        ("landmark-unique_pos.html", vec![("landmark-unique", 1)]),
        ("landmark-unique_neg.html", vec![]),
        ("aria-allowed-role_pos.html", vec![("aria-allowed-role", 1)]),
        ("aria-allowed-role_neg.html", vec![]),
        (
            "presentation-role-conflict_pos.html",
            vec![("presentation-role-conflict", 1)],
        ),
        ("presentation-role-conflict_neg.html", vec![]),
        ("listitem_pos.html", vec![("listitem", 1)]),
        ("listitem_neg.html", vec![]),
        ("label_pos.html", vec![("label", 1)]),
        ("label_neg.html", vec![]),
        ("invalid-nesting_pos.html", vec![("invalid-nesting", 1)]),
        ("invalid-nesting_neg.html", vec![]),
        (
            "combined_multiset.html",
            vec![
                ("image-alt", 1),
                ("link-name", 1),
                ("duplicate-id", 1),
                ("region", 1),
            ],
        ),
        ("clean_page.html", vec![]),
    ];
    assert!(expected.len() >= 30);
    let registry = Registry::standard();
    for (file, want) in &expected {
        let html = std::fs::read_to_string(corpus.join(file)).unwrap();
        let report = scan(&parse_html(&html).unwrap(), &registry);
        let mut got: BTreeMap<&str, usize> = BTreeMap::new();
        for v in &report.violations {
            *got.entry(v.rule_id.as_str()).or_insert(0) += 1;
        }
        let want: BTreeMap<&str, usize> = want.iter().copied().collect();
        assert_eq!(got, want, "{file}");
    }
    budget(started, Duration::from_secs(5), "criterion 3");
    println!(
        "PASS criterion 3: {} fixtures scan with zero false positives/negatives",
        expected.len()
    );
}

#[test]
fn criterion_4_gate_conformance() {
    let started = Instant::now();
    let registry = Registry::standard();
    let opts = ValidateOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0410);
    let mut identity_checked = 0usize;
    for case in 0..1000 {
        let blocks = rng.gen_range(1..8);
        let original = testgen::random_page(&mut rng, blocks, 0.6);
        let repaired = match rng.gen_range(0..10) {
            0..=1 => testgen::corrupt_html(&mut rng, &serialize(&original)),
            2 => serialize(&original), // identity
            _ => serialize(&testgen::mutate_document(&mut rng, &original)),
        };
        let verdict = validate(&original, &repaired, &registry, &opts);
        assert_eq!(
            verdict.accepted,
            verdict.compliance_improved && verdict.parse_valid && verdict.structure_preserved,
            "case {case}"
        );
        if repaired == serialize(&original) && verdict.v_before > 0 {
            assert!(!verdict.accepted, "identity accepted in case {case}");
            identity_checked += 1;
        }
    }
    assert!(identity_checked > 0);
    budget(started, Duration::from_secs(60), "criterion 4");
    println!(
        "PASS criterion 4: acceptance equals the three-gate conjunction on 1000 pairs \
         ({identity_checked} identity repairs rejected)"
    );
}

#[test]
fn criterion_5_tree_similarity_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0511);
    for case in 0..500 {
        let a = testgen::random_tag_document(&mut rng, 6);
        let b = testgen::random_tag_document(&mut rng, 6);
        let oracle = testgen::reference_tree_distance(&a, &b);
        let max = a.element_count().max(b.element_count()) as f64;
        let expected = (1.0 - oracle as f64 / max).max(0.0);
        let got = structural_similarity(&a, &b);
        assert_eq!(got, expected, "case {case}: oracle distance {oracle}");
    }
    budget(started, Duration::from_secs(30), "criterion 5");
    println!("PASS criterion 5: exact TED matches the brute-force oracle on 500 tree pairs");
}

#[test]
fn criterion_6_aggregation_law() {
    let started = Instant::now();
    let mut checked = 0usize;
    for len in 1..=10usize {
        for bits in 0..(1u32 << len) {
            let v: Vec<bool> = (0..len).map(|i| bits >> i & 1 == 1).collect();
            let expected = v.iter().copied().max().unwrap();
            assert_eq!(
                a11y_core::llm::aggregate_page(&v).unwrap(),
                expected,
                "{v:?}"
            );
            checked += 1;
        }
    }
    assert!(a11y_core::llm::aggregate_page(&[]).is_err());
    budget(started, Duration::from_secs(1), "criterion 6");
    println!("PASS criterion 6: aggregation equals max over {checked} boolean vectors");
}

fn snapshot_tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    fn walk(dir: &Path, root: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(&path, root, out);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .to_string();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    walk(root, root, &mut out);
    out
}

#[test]
fn criterion_7_mock_end_to_end_determinism() {
    let started = Instant::now();
    let dataset = fixtures().join("dataset");
    let config = fixtures().join("config.toml");
    let tmp = tempfile::tempdir().unwrap();

    let full_run = |out: &Path| {
        let out_s = out.to_str().unwrap();
        let cfg = config.to_str().unwrap();
        let ds = dataset.to_str().unwrap();
        a11y_ok(&["detect", "--dataset", ds, "--config", cfg, "--out", out_s]);
        a11y_ok(&[
            "repair",
            "--dataset",
            ds,
            "--config",
            cfg,
            "--strategy",
            "both",
            "--out",
            out_s,
        ]);
        a11y_ok(&["evaluate", "--config", cfg, "--out", out_s]);
        a11y_ok(&["cost-report", "--config", cfg, "--out", out_s]);
    };
    let out1 = tmp.path().join("run1");
    let out2 = tmp.path().join("run2");
    full_run(&out1);
    full_run(&out2);

    let t1 = snapshot_tree(&out1);
    let t2 = snapshot_tree(&out2);
    assert_eq!(
        t1.keys().collect::<Vec<_>>(),
        t2.keys().collect::<Vec<_>>(),
        "report trees differ in file sets"
    );
    for (path, bytes) in &t1 {
        assert_eq!(bytes, &t2[path], "byte mismatch in {path}");
    }

    // the scripted scenario: 7 first-try, 1 second-try, 2 exhausted
    let summary = read_csv(&out1.join("evaluate/remediation_summary.csv"));
    let strategy = col(&summary, "strategy");
    let iters = col(&summary, "avg_iterations");
    let improved = col(&summary, "compliance_improved_rate");
    let agent = summary[1..]
        .iter()
        .find(|r| r[strategy] == "agent")
        .expect("agent row");
    let avg_iterations: f64 = agent[iters].parse().unwrap();
    let improved_rate: f64 = agent[improved].parse().unwrap();
    assert!(
        (avg_iterations - 1.5).abs() < 1e-9,
        "avg iterations {avg_iterations}"
    );
    assert!(
        (improved_rate - 0.8).abs() < 1e-9,
        "accepted rate {improved_rate}"
    );

    // cross-check acceptance from the per-file reports
    let mut accepted = 0usize;
    for n in 1..=10 {
        let report: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out1.join(format!(
                "repair/agent/reports/scraped_sites/fixture-{n:02}.html.json"
            )))
            .unwrap(),
        )
        .unwrap();
        if report["repair"]["accepted"].as_bool().unwrap() {
            accepted += 1;
        }
    }
    assert_eq!(accepted, 8);

    budget(started, Duration::from_secs(120), "criterion 7");
    println!(
        "PASS criterion 7: two full pipeline runs are byte-identical; \
         agent summary shows avg iterations 1.5 and accepted rate 0.8 ({} files)",
        t1.len()
    );
}

#[test]
fn criterion_8_agent_loop_bound() {
    let started = Instant::now();
    let registry = Registry::standard();
    // a completion that always fails the parse gate, for any document
    let provider = MockProvider::new(MockScript {
        model: "mock-model".into(),
        latency_ms: 1,
        entries: vec![MockEntry {
            contains: vec![],
            responses: vec![MockResponse::Text(
                "```html\n<p><div>still broken</div></p>\n```".into(),
            )],
        }],
    });
    let ledger = a11y_core::cost::CostLedger::new(a11y_core::cost::PriceTable::new());
    let clock = FixedClock(0);
    let opts = RepairOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0808);
    let files = 6usize;
    for i in 0..files {
        let page = testgen::random_page(&mut rng, 3, 0.9);
        let report = scan(&page, &registry);
        assert!(
            report.violation_count() > 0,
            "generator must seed violations"
        );
        let file_id = format!("file-{i}");
        let ctx = CallCtx {
            ledger: &ledger,
            clock: &clock,
            file_id: &file_id,
            strategy: Strategy::Agent,
        };
        let result = repair_agentic(&page, &report, &provider, &registry, &opts, &ctx).unwrap();
        assert!(!result.accepted);
        assert_eq!(result.attempts.len() as u32, opts.max_iterations);
        assert_eq!(
            ledger
                .overhead(a11y_core::cost::Scope::File(&file_id))
                .unwrap() as u32,
            opts.max_iterations
        );
    }
    assert_eq!(
        ledger.overhead(a11y_core::cost::Scope::Run).unwrap(),
        files * opts.max_iterations as usize
    );
    budget(started, Duration::from_secs(30), "criterion 8");
    println!(
        "PASS criterion 8: never-succeeding agent records exactly {} attempts per file; \
         run overhead = files x max-iterations",
        opts.max_iterations
    );
}

#[test]
fn criterion_9_round_trip_fuzz() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0909);
    fn tag_structure(tree: &a11y_core::DomTree) -> Vec<(usize, String)> {
        fn walk(
            tree: &a11y_core::DomTree,
            id: a11y_core::NodeId,
            depth: usize,
            out: &mut Vec<(usize, String)>,
        ) {
            if let Some(tag) = tree.tag(id) {
                out.push((depth, tag.to_string()));
            }
            for &c in tree.children(id) {
                walk(tree, c, depth + 1, out);
            }
        }
        let mut out = Vec::new();
        walk(tree, tree.root(), 0, &mut out);
        out
    }
    for case in 0..1000 {
        let html = if case % 4 == 0 {
            testgen::page_html(&mut rng, 4, 0.5)
        } else {
            testgen::random_fragment_html(&mut rng)
        };
        let first = parse_html(&html).expect("fuzz inputs are under the size limit");
        let serialized = serialize(&first);
        let second = parse_html(&serialized).expect("canonical output parses");
        assert_eq!(
            tag_structure(&first),
            tag_structure(&second),
            "case {case}: {html:?}"
        );
    }
    budget(started, Duration::from_secs(120), "criterion 9");
    println!("PASS criterion 9: 1000-document fuzz corpus round-trips with zero crashes");
}
