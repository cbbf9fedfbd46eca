//! Black-box tests of the `persona-lab` binary: subcommands, file
//! outputs, exit codes, and stdout contracts. Everything runs offline on
//! the scripted mock.

use std::path::Path;
use std::process::{Command, Output};

use persona_lab::backend::mock::SyntheticBackend;
use persona_lab::backend::RecordBackend;
use persona_lab::experiment::{
    bootstrap_population, run_noninteractive, save_run, ExperimentConfig,
};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_persona-lab"));
    cmd.env_remove("PERSONA_LAB_API_KEY");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

fn write_small_config(dir: &Path) -> String {
    let path = dir.join("config.toml");
    std::fs::write(&path, "[experiment]\npopulation_per_group = 2\n").unwrap();
    path.to_string_lossy().to_string()
}

#[test]
fn init_then_reinit_then_force() {
    let dir = tempfile::tempdir().unwrap();
    let dir_arg = dir.path().to_string_lossy().to_string();

    let first = run(&["init", "--dir", &dir_arg]);
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(dir.path().join("config.toml").exists());
    assert!(dir.path().join("demo.dic").exists());

    let second = run(&["init", "--dir", &dir_arg]);
    assert_eq!(second.status.code(), Some(2), "{}", stderr(&second));
    assert!(stderr(&second).contains("already exists"));

    let forced = run(&["init", "--dir", &dir_arg, "--force"]);
    assert!(forced.status.success(), "{}", stderr(&forced));
}

#[test]
fn exp1_run_analyze_compare_flow() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let run1 = dir.path().join("run1");
    let run2 = dir.path().join("run2");

    let exp1 = run(&[
        "run",
        "exp1",
        "--config",
        &config,
        "--run-dir",
        &run1.to_string_lossy(),
    ]);
    assert!(exp1.status.success(), "{}", stderr(&exp1));
    assert!(stdout(&exp1).contains("run_id=exp1-"));
    assert!(stdout(&exp1).contains("agents=4"));

    let scores = std::fs::read_to_string(run1.join("bfi_scores.csv")).unwrap();
    assert!(scores.contains("BeforeWriting"));
    assert!(scores.contains("AfterNonInteractiveWriting"));

    let exp2 = run(&[
        "run",
        "exp2",
        "--config",
        &config,
        "--run-dir",
        &run2.to_string_lossy(),
    ]);
    assert!(exp2.status.success(), "{}", stderr(&exp2));
    let stories = std::fs::read_to_string(run2.join("stories.jsonl")).unwrap();
    assert!(stories.contains("InteractiveSecond"));
    assert!(stories.contains("partner_agent_id"));

    // Analyze both runs with the demo dictionary.
    std::fs::write(
        dir.path().join("demo.dic"),
        persona_lab::backend::mock::demo_dictionary_text(),
    )
    .unwrap();
    let dic = dir.path().join("demo.dic").to_string_lossy().to_string();
    for run_dir in [&run1, &run2] {
        let analyzed = run(&[
            "analyze",
            "--run-dir",
            &run_dir.to_string_lossy(),
            "--dic",
            &dic,
        ]);
        assert!(analyzed.status.success(), "{}", stderr(&analyzed));
        for name in [
            "liwc_rates.csv",
            "stats/bfi_anova.csv",
            "stats/bfi_before_after.csv",
            "stats/pb_top5.csv",
            "stats/spearman_top5_per_trait.csv",
            "stats/pca_coords.csv",
            "stats/cv_accuracy.txt",
            "stats/spearman_violin_data.csv",
            "stats/pca_scatter.svg",
            "stats/bfi_boxplots.svg",
        ] {
            assert!(run_dir.join(name).exists(), "{name} missing after analyze");
        }
    }

    // Re-running analyze is byte-identical.
    let before = std::fs::read(run1.join("stats/pb_top5.csv")).unwrap();
    let again = run(&[
        "analyze",
        "--run-dir",
        &run1.to_string_lossy(),
        "--dic",
        &dic,
    ]);
    assert!(again.status.success());
    let after = std::fs::read(run1.join("stats/pb_top5.csv")).unwrap();
    assert_eq!(before, after);

    let compare = run(&[
        "compare",
        "--run-a",
        &run1.to_string_lossy(),
        "--run-b",
        &run2.to_string_lossy(),
    ]);
    assert!(compare.status.success(), "{}", stderr(&compare));
    let table = stdout(&compare);
    assert!(
        table.starts_with("Group,Trait,Mean-B_C,Mean-A_C,Mean-A_E,F-Statistic,p-Value,Cohen's d")
    );
    assert_eq!(table.lines().count(), 11);
}

#[test]
fn same_seed_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let run_a = dir.path().join("a");
    let run_b = dir.path().join("b");
    for run_dir in [&run_a, &run_b] {
        let output = run(&[
            "run",
            "exp1",
            "--config",
            &config,
            "--run-dir",
            &run_dir.to_string_lossy(),
            "--seed",
            "7",
        ]);
        assert!(output.status.success(), "{}", stderr(&output));
    }
    for name in [
        "run.json",
        "agents.csv",
        "bfi_scores.csv",
        "stories.jsonl",
        "manifest.json",
    ] {
        let a = std::fs::read(run_a.join(name)).unwrap();
        let b = std::fs::read(run_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical seeded runs");
    }
}

#[test]
fn live_mode_without_key_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let output = run(&[
        "run",
        "exp1",
        "--config",
        &config,
        "--run-dir",
        &dir.path().join("r").to_string_lossy(),
        "--backend",
        "live",
    ]);
    assert_eq!(output.status.code(), Some(3), "{}", stderr(&output));
    assert!(
        stderr(&output).contains("PERSONA_LAB_API_KEY"),
        "{}",
        stderr(&output)
    );
}

#[test]
fn missing_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "run",
        "exp1",
        "--config",
        &dir.path().join("nope.toml").to_string_lossy(),
        "--run-dir",
        &dir.path().join("r").to_string_lossy(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn analyze_tampered_run_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let run_dir = dir.path().join("run");
    let output = run(&[
        "run",
        "exp1",
        "--config",
        &config,
        "--run-dir",
        &run_dir.to_string_lossy(),
    ]);
    assert!(output.status.success());

    let stories_path = run_dir.join("stories.jsonl");
    let stories = std::fs::read_to_string(&stories_path).unwrap();
    std::fs::write(
        &stories_path,
        stories.replacen("\"accepted\":true", "\"accepted\":false", 1),
    )
    .unwrap();

    std::fs::write(
        dir.path().join("demo.dic"),
        persona_lab::backend::mock::demo_dictionary_text(),
    )
    .unwrap();
    let analyzed = run(&[
        "analyze",
        "--run-dir",
        &run_dir.to_string_lossy(),
        "--dic",
        &dir.path().join("demo.dic").to_string_lossy(),
    ]);
    assert_eq!(analyzed.status.code(), Some(4), "{}", stderr(&analyzed));
    assert!(
        stderr(&analyzed).contains("hash mismatch"),
        "{}",
        stderr(&analyzed)
    );
}

#[test]
fn replay_verify_passes_on_recorded_run_and_fails_on_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().join("run");

    // Record a mock-as-live run through the library, then verify via the
    // binary.
    let config = ExperimentConfig {
        population_per_group: 2,
        ..Default::default()
    };
    let population = bootstrap_population(&config).unwrap();
    let recorder = RecordBackend::create(
        &run_dir.join("replay_store.jsonl"),
        Box::new(SyntheticBackend::separable()),
    )
    .unwrap();
    let artifact = run_noninteractive(&population, &config, &recorder).unwrap();
    drop(recorder);
    save_run(&artifact, &run_dir).unwrap();

    let verified = run(&["replay-verify", "--run-dir", &run_dir.to_string_lossy()]);
    assert!(verified.status.success(), "{}", stderr(&verified));
    assert!(stdout(&verified).contains("replay_verify=pass"));

    // Truncating the store makes the replay miss and the verdict fail.
    let store_path = run_dir.join("replay_store.jsonl");
    let store = std::fs::read_to_string(&store_path).unwrap();
    let truncated: Vec<&str> = store.lines().take(2).collect();
    std::fs::write(&store_path, format!("{}\n", truncated.join("\n"))).unwrap();
    let broken = run(&["replay-verify", "--run-dir", &run_dir.to_string_lossy()]);
    assert_eq!(broken.status.code(), Some(4), "{}", stderr(&broken));
    assert!(stdout(&broken).contains("replay_verify=fail"));
}

#[test]
fn mock_backend_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.toml");
    // Config says live, flag says mock; the run must work offline.
    std::fs::write(
        &path,
        "[experiment]\npopulation_per_group = 1\nbackend_mode = \"live\"\n",
    )
    .unwrap();
    let output = run(&[
        "run",
        "exp1",
        "--config",
        &path.to_string_lossy(),
        "--run-dir",
        &dir.path().join("r").to_string_lossy(),
        "--backend",
        "mock",
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
}
