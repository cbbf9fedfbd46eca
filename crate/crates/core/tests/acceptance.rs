//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//! Expected values come from independent oracles implemented here, not
//! from the code under test.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use persona_lab::backend::mock::{demo_dictionary_text, SyntheticBackend};
use persona_lab::backend::{RecordBackend, ReplayBackend};
use persona_lab::bfi::{self, Phase};
use persona_lab::experiment::{
    bootstrap_population, run_interactive, run_noninteractive, save_run, ExperimentConfig,
};
use persona_lab::liwc::{analyze as liwc_analyze, parse_dic, tokenize};
use persona_lab::ml::{
    kfold_cv_accuracy, loss_and_gradient, pca_fit, pca_transform, FeatureMatrix, LogisticConfig,
};
use persona_lab::persona::TraitName;
use persona_lab::report::{analyze, compare_runs, corpus_matrix};
use persona_lab::stats::{one_way_anova, spearman};

fn pass(criterion: u32, message: &str) {
    println!("[criterion {criterion}] PASS - {message}");
}

// ---------------------------------------------------------------------
// Criterion 1: BFI scoring equals an independent brute-force scorer on
// 1,000 random complete answer sheets; the all-3s sheet scores
// (24, 27, 27, 24, 30). Runtime < 1 s.
// ---------------------------------------------------------------------

/// Letter for a 1-based statement number: a..z then aa..ar.
fn oracle_letter(number: usize) -> String {
    if number <= 26 {
        ((b'a' + (number - 1) as u8) as char).to_string()
    } else {
        format!("a{}", (b'a' + (number - 27) as u8) as char)
    }
}

/// Direct walk over the published scoring scale, independent of the item
/// table in the library.
fn oracle_score(answers: &BTreeMap<String, u8>) -> BTreeMap<TraitName, u32> {
    let scale: [(TraitName, &[(usize, bool)]); 5] = [
        (
            TraitName::Extraversion,
            &[
                (1, false),
                (6, true),
                (11, false),
                (16, false),
                (21, true),
                (26, false),
                (31, true),
                (36, false),
            ],
        ),
        (
            TraitName::Agreeableness,
            &[
                (2, true),
                (7, false),
                (12, true),
                (17, false),
                (22, false),
                (27, true),
                (32, false),
                (37, true),
                (42, false),
            ],
        ),
        (
            TraitName::Conscientiousness,
            &[
                (3, false),
                (8, true),
                (13, false),
                (18, true),
                (23, true),
                (28, false),
                (33, false),
                (38, false),
                (43, true),
            ],
        ),
        (
            TraitName::Neuroticism,
            &[
                (4, false),
                (9, true),
                (14, false),
                (19, false),
                (24, true),
                (29, false),
                (34, true),
                (39, false),
            ],
        ),
        (
            TraitName::Openness,
            &[
                (5, false),
                (10, false),
                (15, false),
                (20, false),
                (25, false),
                (30, false),
                (35, true),
                (40, false),
                (41, true),
                (44, false),
            ],
        ),
    ];
    let mut sums = BTreeMap::new();
    for (trait_name, items) in scale {
        let mut sum = 0u32;
        for (number, reversed) in items {
            let raw = u32::from(answers[&oracle_letter(*number)]);
            sum += if *reversed { 6 - raw } else { raw };
        }
        sums.insert(trait_name, sum);
    }
    sums
}

#[test]
fn criterion_1_bfi_scoring_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);

    let all_threes: BTreeMap<String, u8> = (1..=44).map(|n| (oracle_letter(n), 3)).collect();
    let sheet = bfi::BfiAnswerSheet {
        answers: all_threes,
        source_text: String::new(),
    };
    let scores = bfi::score(&sheet, Phase::BeforeWriting).unwrap();
    assert_eq!(scores.get(TraitName::Extraversion), 24);
    assert_eq!(scores.get(TraitName::Agreeableness), 27);
    assert_eq!(scores.get(TraitName::Conscientiousness), 27);
    assert_eq!(scores.get(TraitName::Neuroticism), 24);
    assert_eq!(scores.get(TraitName::Openness), 30);

    for _ in 0..1000 {
        let answers: BTreeMap<String, u8> = (1..=44)
            .map(|n| (oracle_letter(n), rng.gen_range(1..=5)))
            .collect();
        let expected = oracle_score(&answers);
        let sheet = bfi::BfiAnswerSheet {
            answers,
            source_text: String::new(),
        };
        let scored = bfi::score(&sheet, Phase::BeforeWriting).unwrap();
        for trait_name in TraitName::ALL {
            assert_eq!(scored.get(trait_name), expected[&trait_name]);
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass(
        1,
        &format!("1000 random sheets match the brute-force scorer in {elapsed:?}"),
    );
}

// ---------------------------------------------------------------------
// Criterion 2: ANOVA on [1,2,3] vs [4,5,6] gives F = 13.5 +- 1e-9 and p
// within 1e-6 of an independent incomplete-beta oracle; F = t^2 within
// 1e-9 relative on 500 random instances; Spearman hand case is 0.8.
// ---------------------------------------------------------------------

/// Gamma(k/2) built from exact factorial identities, independent of the
/// library's Lanczos approximation.
fn gamma_half_integer(half_units: u32) -> f64 {
    if half_units.is_multiple_of(2) {
        let m = half_units / 2; // Gamma(m) = (m-1)!
        (1..m).map(f64::from).product()
    } else {
        // Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
        let m = (half_units - 1) / 2;
        let numerator: f64 = (1..=2 * m).map(f64::from).product();
        let denominator = 4f64.powi(m as i32) * (1..=m).map(f64::from).product::<f64>();
        numerator / denominator * std::f64::consts::PI.sqrt()
    }
}

/// I_x(a, b) by Simpson quadrature of the beta density; a and b given in
/// half units (a = a_half/2).
fn oracle_incomplete_beta(a_half: u32, b_half: u32, x: f64) -> f64 {
    let a = f64::from(a_half) / 2.0;
    let b = f64::from(b_half) / 2.0;
    let beta = gamma_half_integer(a_half) * gamma_half_integer(b_half)
        / gamma_half_integer(a_half + b_half);
    let n = 200_000; // even
    let h = x / n as f64;
    let f = |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0);
    let mut sum = f(0.0 + 1e-300) + f(x);
    for i in 1..n {
        let t = i as f64 * h;
        sum += f(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0 / beta
}

fn sample_variance(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64
}

fn pooled_t(a: &[f64], b: &[f64]) -> f64 {
    let (n_a, n_b) = (a.len() as f64, b.len() as f64);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let pooled =
        ((n_a - 1.0) * sample_variance(a) + (n_b - 1.0) * sample_variance(b)) / (n_a + n_b - 2.0);
    (mean(a) - mean(b)) / (pooled * (1.0 / n_a + 1.0 / n_b)).sqrt()
}

#[test]
fn criterion_2_statistics_oracles() {
    let result = one_way_anova(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
    assert!(
        (result.statistic - 13.5).abs() <= 1e-9,
        "F = {}",
        result.statistic
    );

    // p = P(F_{1,4} > 13.5) = I_x(df2/2, df1/2) at x = df2/(df2 + df1 F).
    let x = 4.0 / (4.0 + 13.5);
    let oracle_p = oracle_incomplete_beta(4, 1, x);
    let p = result.p_value.unwrap();
    assert!(
        (p - oracle_p).abs() <= 1e-6,
        "p = {p}, quadrature oracle = {oracle_p}"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let mut checked = 0;
    while checked < 500 {
        let n_a = rng.gen_range(2..12);
        let n_b = rng.gen_range(2..12);
        let a: Vec<f64> = (0..n_a).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let b: Vec<f64> = (0..n_b).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let result = match one_way_anova(&a, &b) {
            Ok(r) if r.statistic.is_finite() => r,
            _ => continue,
        };
        let t2 = pooled_t(&a, &b).powi(2);
        let denom = result.statistic.abs().max(1e-12);
        assert!(
            (result.statistic - t2).abs() / denom < 1e-9,
            "F = {} vs t^2 = {t2}",
            result.statistic
        );
        checked += 1;
    }

    let rho = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
    assert!((rho - 0.8).abs() <= 1e-12, "rho = {rho}");

    pass(
        2,
        &format!(
            "F = 13.5, p = {p:.6} vs oracle {oracle_p:.6}, F = t^2 on 500 instances, rho = 0.8"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 3: dictionary fixtures round-trip; analyze equals the naive
// all-pairs oracle on 200 random (dict, text) instances; longest-stem and
// literal-priority rules hold. Runtime < 5 s.
// ---------------------------------------------------------------------

fn random_word(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(1..=6);
    (0..len)
        .map(|_| (b'a' + rng.gen_range(0..4)) as char)
        .collect()
}

#[test]
fn criterion_3_liwc_matcher_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3003);

    for _ in 0..200 {
        // Random fixture dictionary.
        let n_categories = rng.gen_range(1..=4u32);
        let mut dic = String::from("%\n");
        for id in 1..=n_categories {
            dic.push_str(&format!("{id}\tcat{id}\n"));
        }
        dic.push_str("%\n");
        let mut literals: Vec<(String, u32)> = Vec::new();
        let mut stems: Vec<(String, u32)> = Vec::new();
        for _ in 0..rng.gen_range(0..10) {
            literals.push((random_word(&mut rng), rng.gen_range(1..=n_categories)));
        }
        for _ in 0..rng.gen_range(0..10) {
            stems.push((random_word(&mut rng), rng.gen_range(1..=n_categories)));
        }
        for (word, id) in &literals {
            dic.push_str(&format!("{word}\t{id}\n"));
        }
        for (word, id) in &stems {
            dic.push_str(&format!("{word}*\t{id}\n"));
        }

        // Round-trip: every generated entry is present after parsing.
        let dict = parse_dic(&dic).unwrap();
        assert_eq!(dict.categories.len(), n_categories as usize);
        for (word, id) in &literals {
            assert!(dict.literals[word].contains(id), "literal {word} lost");
        }
        for (word, id) in &stems {
            assert!(dict.stem_list[word].contains(id), "stem {word} lost");
        }

        // Naive all-pairs oracle over the generated entry lists.
        let text: String = (0..rng.gen_range(0..50))
            .map(|_| random_word(&mut rng))
            .collect::<Vec<_>>()
            .join(" ");
        let fast = liwc_analyze(&text, &dict);
        let mut expected: BTreeMap<u32, u32> = (1..=n_categories).map(|id| (id, 0)).collect();
        for token in tokenize(&text) {
            let literal_ids: Vec<u32> = literals
                .iter()
                .filter(|(w, _)| *w == token.surface)
                .map(|(_, id)| *id)
                .collect();
            if !literal_ids.is_empty() {
                let unique: std::collections::BTreeSet<u32> = literal_ids.into_iter().collect();
                for id in unique {
                    *expected.get_mut(&id).unwrap() += 1;
                }
                continue;
            }
            let longest = stems
                .iter()
                .filter(|(stem, _)| token.surface.starts_with(stem.as_str()))
                .map(|(stem, _)| stem.len())
                .max();
            if let Some(longest) = longest {
                let unique: std::collections::BTreeSet<u32> = stems
                    .iter()
                    .filter(|(stem, _)| {
                        stem.len() == longest && token.surface.starts_with(stem.as_str())
                    })
                    .map(|(_, id)| *id)
                    .collect();
                for id in unique {
                    *expected.get_mut(&id).unwrap() += 1;
                }
            }
        }
        assert_eq!(fast.counts, expected, "dict:\n{dic}\ntext: {text}");
    }

    // Named rules from the matching semantics.
    let dict = parse_dic("%\n1\ta\n2\tb\n%\ncar*\t1\ncare*\t2\n").unwrap();
    let v = liwc_analyze("careful", &dict);
    assert_eq!(
        (v.counts[&1], v.counts[&2]),
        (0, 1),
        "longest stem must win"
    );
    let dict = parse_dic("%\n1\ta\n2\tb\n%\nadmir*\t1\nadmirable\t2\n").unwrap();
    let v = liwc_analyze("admirable", &dict);
    assert_eq!(
        (v.counts[&1], v.counts[&2]),
        (0, 1),
        "literal must beat stem"
    );

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    pass(
        3,
        &format!("200 random dictionaries match the all-pairs oracle in {elapsed:?}"),
    );
}

// ---------------------------------------------------------------------
// Criterion 4: classifier analogue. Separable mock stories (70% own-list
// content words, 50 agents/group) give 10-fold CV accuracy >= 0.95;
// blended stories (50/50) give <= 0.80. Runtime < 30 s.
// ---------------------------------------------------------------------

fn mock_matrix(backend: &SyntheticBackend) -> persona_lab::liwc::CorpusMatrix {
    let config = ExperimentConfig {
        population_per_group: 50,
        ..Default::default()
    };
    let population = bootstrap_population(&config).unwrap();
    let artifact = run_noninteractive(&population, &config, backend).unwrap();
    let dict = parse_dic(&demo_dictionary_text()).unwrap();
    corpus_matrix(&artifact, &dict).unwrap()
}

#[test]
fn criterion_4_classifier_analogue() {
    let started = Instant::now();

    let separable = mock_matrix(&SyntheticBackend::separable());
    assert_eq!(separable.n_rows(), 100);
    let features = FeatureMatrix::new(
        separable.rates.clone(),
        separable.labels.clone(),
        separable.category_names.clone(),
    )
    .unwrap();
    let separable_accuracy =
        kfold_cv_accuracy(&features, 10, 42, &LogisticConfig::default()).unwrap();
    assert!(
        separable_accuracy >= 0.95,
        "separable groups scored {separable_accuracy}, need >= 0.95"
    );

    let blended = mock_matrix(&SyntheticBackend::blended());
    let features = FeatureMatrix::new(
        blended.rates.clone(),
        blended.labels.clone(),
        blended.category_names.clone(),
    )
    .unwrap();
    let blended_accuracy =
        kfold_cv_accuracy(&features, 10, 42, &LogisticConfig::default()).unwrap();
    assert!(
        blended_accuracy <= 0.80,
        "blended groups scored {blended_accuracy}, need <= 0.80"
    );

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "took {elapsed:?}, budget 30 s"
    );
    pass(
        4,
        &format!(
            "separable CV accuracy {separable_accuracy:.4} >= 0.95, blended {blended_accuracy:.4} \
         <= 0.80 in {elapsed:?}"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 5: PCA. Rank-1 data explains everything in one component;
// components orthonormal within 1e-9; the separable mock groups admit a
// 1-D threshold on PC1 with >= 0.9 accuracy.
// ---------------------------------------------------------------------

#[test]
fn criterion_5_pca_checks() {
    // Rank-1 data embedded in 6 dimensions.
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let direction: Vec<f64> = (0..6).map(|i| 0.5 + i as f64).collect();
    let rows: Vec<Vec<f64>> = (0..40)
        .map(|_| {
            let t: f64 = rng.gen_range(-2.0..2.0);
            direction.iter().map(|c| c * t).collect()
        })
        .collect();
    let model = pca_fit(&rows, 2).unwrap();
    assert!(model.explained_variance_ratio[0] >= 1.0 - 1e-9);

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let c0 = &model.components[0];
    let c1 = &model.components[1];
    assert!((dot(c0, c0) - 1.0).abs() <= 1e-9);
    assert!((dot(c1, c1) - 1.0).abs() <= 1e-9);
    assert!(dot(c0, c1).abs() <= 1e-9);

    // Separable mock groups are linearly separable on PC1.
    let matrix = mock_matrix(&SyntheticBackend::separable());
    let model = pca_fit(&matrix.rates, 2).unwrap();
    let coords = pca_transform(&model, &matrix.rates);
    let pc1: Vec<f64> = coords.iter().map(|c| c[0]).collect();
    let mut best = 0.0f64;
    for threshold in pc1.iter() {
        for low_is_one in [false, true] {
            let correct = pc1
                .iter()
                .zip(&matrix.labels)
                .filter(|(value, label)| {
                    let predicted = ((**value >= *threshold) != low_is_one) as u8;
                    predicted == **label
                })
                .count();
            best = best.max(correct as f64 / pc1.len() as f64);
        }
    }
    assert!(
        best >= 0.9,
        "best PC1 threshold accuracy {best}, need >= 0.9"
    );
    pass(
        5,
        &format!("rank-1 ratio 1.0, orthonormal components, PC1 threshold accuracy {best:.3}"),
    );
}

// ---------------------------------------------------------------------
// Criterion 6: analytic logistic gradient vs central finite differences
// within 1e-5 relative on 50 random small instances.
// ---------------------------------------------------------------------

#[test]
fn criterion_6_gradient_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(6006);
    for _ in 0..50 {
        let n = rng.gen_range(4..16);
        let d = rng.gen_range(1..6);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let labels: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        let weights: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bias: f64 = rng.gen_range(-1.0..1.0);
        let lambda = 10f64.powf(rng.gen_range(-4.0..-1.0));

        let (_, grad_w, grad_b) = loss_and_gradient(&rows, &labels, &weights, bias, lambda);
        let h = 1e-6;
        for j in 0..d {
            let mut plus = weights.clone();
            plus[j] += h;
            let mut minus = weights.clone();
            minus[j] -= h;
            let (loss_plus, _, _) = loss_and_gradient(&rows, &labels, &plus, bias, lambda);
            let (loss_minus, _, _) = loss_and_gradient(&rows, &labels, &minus, bias, lambda);
            let numeric = (loss_plus - loss_minus) / (2.0 * h);
            let denom = grad_w[j].abs().max(1e-8);
            assert!(
                (grad_w[j] - numeric).abs() / denom < 1e-5,
                "weight {j}: analytic {} vs numeric {numeric}",
                grad_w[j]
            );
        }
        let (loss_plus, _, _) = loss_and_gradient(&rows, &labels, &weights, bias + h, lambda);
        let (loss_minus, _, _) = loss_and_gradient(&rows, &labels, &weights, bias - h, lambda);
        let numeric = (loss_plus - loss_minus) / (2.0 * h);
        assert!((grad_b - numeric).abs() / grad_b.abs().max(1e-8) < 1e-5);
    }
    pass(
        6,
        "analytic gradient matches central differences on 50 instances",
    );
}

// ---------------------------------------------------------------------
// Criterion 7: end-to-end determinism. exp1 and exp2 with the scripted
// mock and a fixed seed are byte-identical across runs, including
// analysis outputs; record-then-replay reproduces the artifact
// byte-for-byte.
// ---------------------------------------------------------------------

fn run_files(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let names = [
        "run.json",
        "config.json",
        "agents.csv",
        "bfi_scores.csv",
        "stories.jsonl",
        "manifest.json",
    ];
    names
        .iter()
        .map(|name| (name.to_string(), std::fs::read(dir.join(name)).expect(name)))
        .collect()
}

#[test]
fn criterion_7_end_to_end_determinism() {
    let config = ExperimentConfig {
        population_per_group: 4,
        ..Default::default()
    };
    let dict = parse_dic(&demo_dictionary_text()).unwrap();

    for kind in ["exp1", "exp2"] {
        let mut artifacts = Vec::new();
        let mut dirs = Vec::new();
        for _ in 0..2 {
            let population = bootstrap_population(&config).unwrap();
            let backend = SyntheticBackend::separable();
            let artifact = if kind == "exp1" {
                run_noninteractive(&population, &config, &backend).unwrap()
            } else {
                run_interactive(&population, &config, &backend).unwrap()
            };
            let dir = tempfile::tempdir().unwrap();
            save_run(&artifact, dir.path()).unwrap();
            artifacts.push(artifact);
            dirs.push(dir);
        }
        assert_eq!(
            run_files(dirs[0].path()),
            run_files(dirs[1].path()),
            "{kind} artifacts differ between identical runs"
        );

        let first = analyze(&artifacts[0], &dict).unwrap();
        let second = analyze(&artifacts[1], &dict).unwrap();
        assert_eq!(first.liwc_rates, second.liwc_rates);
        assert_eq!(first.bfi_anova, second.bfi_anova);
        assert_eq!(first.bfi_before_after, second.bfi_before_after);
        assert_eq!(first.pb_top5, second.pb_top5);
        assert_eq!(
            first.spearman_top5_per_trait,
            second.spearman_top5_per_trait
        );
        assert_eq!(first.pca_coords, second.pca_coords);
        assert_eq!(first.cv_accuracy, second.cv_accuracy);
        assert_eq!(first.spearman_violin_data, second.spearman_violin_data);
        assert_eq!(first.pca_scatter_svg, second.pca_scatter_svg);
        assert_eq!(first.bfi_boxplots_svg, second.bfi_boxplots_svg);
    }

    // Record a mock-as-live run, then replay it: byte-identical artifact.
    let store_dir = tempfile::tempdir().unwrap();
    let store_path = store_dir.path().join("replay_store.jsonl");
    let population = bootstrap_population(&config).unwrap();
    let recorder =
        RecordBackend::create(&store_path, Box::new(SyntheticBackend::separable())).unwrap();
    let recorded = run_noninteractive(&population, &config, &recorder).unwrap();
    drop(recorder);

    let replayer = ReplayBackend::open(&store_path).unwrap();
    let replayed = run_noninteractive(&population, &config, &replayer).unwrap();
    assert_eq!(
        recorded.to_canonical_json(),
        replayed.to_canonical_json(),
        "record-then-replay must be byte-identical"
    );

    pass(
        7,
        "exp1/exp2 reruns and record-then-replay are byte-identical",
    );
}

// ---------------------------------------------------------------------
// Criterion 8: prompt fidelity against golden files (persona prompts,
// writing prompts, the questionnaire prompt, and the partner-story
// substitution marker).
// ---------------------------------------------------------------------

#[test]
fn criterion_8_prompt_fidelity() {
    // Golden files end with exactly one newline added to the prompt bytes.
    let golden = |name: &str| -> String {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name);
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {name}: {e}"))
    };

    let profiles = persona_lab::persona::builtin_profiles();
    assert_eq!(
        format!("{}\n", profiles[0].system_prompt),
        golden("creative_persona.txt")
    );
    assert_eq!(
        format!("{}\n", profiles[1].system_prompt),
        golden("analytical_persona.txt")
    );

    assert_eq!(
        format!("{}\n", persona_lab::experiment::INDIVIDUAL_WRITING_PROMPT),
        golden("individual_writing_prompt.txt")
    );
    assert_eq!(
        format!(
            "{}\n",
            persona_lab::experiment::interactive_writing_prompt("{other_model_response}")
        ),
        golden("interactive_writing_prompt_template.txt")
    );
    let substituted = persona_lab::experiment::interactive_writing_prompt("THE PARTNER STORY");
    assert!(substituted.contains("Last response to question is THE PARTNER STORY"));
    assert!(substituted.ends_with("THE PARTNER STORY"));

    assert_eq!(
        format!("{}\n", bfi::build_bfi_prompt()),
        golden("bfi_prompt.txt")
    );

    pass(
        8,
        "persona, writing, and questionnaire prompts match the golden files byte-for-byte",
    );
}

// ---------------------------------------------------------------------
// Criterion 9: analyze and compare emit exactly the expected columns.
// ---------------------------------------------------------------------

#[test]
fn criterion_9_table_shapes() {
    let config = ExperimentConfig {
        population_per_group: 5,
        ..Default::default()
    };
    let population = bootstrap_population(&config).unwrap();
    let backend = SyntheticBackend::separable();
    let exp1 = run_noninteractive(&population, &config, &backend).unwrap();
    let exp2 = run_interactive(&population, &config, &backend).unwrap();
    let dict = parse_dic(&demo_dictionary_text()).unwrap();

    let outputs = analyze(&exp1, &dict).unwrap();
    assert_eq!(
        outputs.bfi_anova.lines().next().unwrap(),
        "Trait,F-Statistic,p-Value"
    );
    assert_eq!(
        outputs.bfi_before_after.lines().next().unwrap(),
        "Group,Trait,Mean-B,Mean-A,F-Statistic,p-Value,Cohen's d"
    );
    assert_eq!(
        outputs.bfi_before_after.lines().count(),
        11,
        "5 traits x 2 groups + header"
    );
    assert_eq!(
        outputs.pb_top5.lines().next().unwrap(),
        "LIWC category,r_pb"
    );
    assert_eq!(outputs.pb_top5.lines().count(), 6, "top-5 r_pb rows");
    assert_eq!(
        outputs.spearman_top5_per_trait.lines().next().unwrap(),
        "Trait,Term,Corr"
    );
    assert_eq!(
        outputs.spearman_top5_per_trait.lines().count(),
        26,
        "5 per trait x 5 traits"
    );
    for trait_name in TraitName::ALL {
        let rows = outputs
            .spearman_top5_per_trait
            .lines()
            .filter(|l| l.starts_with(trait_name.name()))
            .count();
        assert_eq!(rows, 5, "{trait_name} must have exactly 5 rows");
    }
    assert_eq!(
        outputs.pca_coords.lines().next().unwrap(),
        "agent_id,group,pc1,pc2"
    );

    let compare = compare_runs(&exp1, &exp2).unwrap();
    assert_eq!(
        compare.lines().next().unwrap(),
        "Group,Trait,Mean-B_C,Mean-A_C,Mean-A_E,F-Statistic,p-Value,Cohen's d"
    );
    assert_eq!(compare.lines().count(), 11, "5 traits x 2 groups + header");

    pass(
        9,
        "analyze and compare tables carry exactly the expected columns",
    );
}
