//! Analysis tables and figures for a run directory.

pub mod svg;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::bfi::Phase;
use crate::experiment::{ExperimentKind, RunArtifact, StoryPhase};
use crate::liwc::{vectorize_corpus, CorpusMatrix, LiwcDictionary, LiwcError};
use crate::ml::{
    kfold_cv_accuracy, pca_fit, pca_transform, FeatureMatrix, LogisticConfig, MlError,
};
use crate::persona::{Group, TraitName};
use crate::stats::{
    cohens_d, one_way_anova, point_biserial, spearman, top_k_correlates, StatsError,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("run has no {0} scores")]
    MissingPhase(Phase),
    #[error("runs disagree: {0}")]
    PhaseMismatch(String),
    #[error("no accepted {0:?} stories to analyze")]
    NoAcceptedStories(StoryPhase),
    #[error(transparent)]
    Liwc(#[from] LiwcError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error("io: {0}")]
    Io(String),
}

/// The story phase a run's language analysis is based on: individual
/// stories for the non-interactive condition, the collaboratively written
/// second stories for the interactive one.
pub fn analysis_story_phase(kind: ExperimentKind) -> StoryPhase {
    match kind {
        ExperimentKind::NonInteractive => StoryPhase::Individual,
        ExperimentKind::Interactive => StoryPhase::InteractiveSecond,
    }
}

/// The questionnaire phase following the run's writing task.
pub fn after_phase(kind: ExperimentKind) -> Phase {
    match kind {
        ExperimentKind::NonInteractive => Phase::AfterNonInteractiveWriting,
        ExperimentKind::Interactive => Phase::AfterInteractiveWriting,
    }
}

/// Per-phase questionnaire scores: agent_id -> per-trait sums.
pub type ScoreTable = BTreeMap<String, BTreeMap<TraitName, u32>>;

/// Scores for one phase as agent_id -> per-trait sums, agents sorted.
fn phase_scores(artifact: &RunArtifact, phase: Phase) -> Result<ScoreTable, ReportError> {
    let mut out = BTreeMap::new();
    for record in artifact.scores.iter().filter(|s| s.scores.phase == phase) {
        out.insert(record.agent_id.clone(), record.scores.sums.clone());
    }
    if out.is_empty() {
        return Err(ReportError::MissingPhase(phase));
    }
    Ok(out)
}

fn group_of(artifact: &RunArtifact, agent_id: &str) -> Group {
    artifact
        .agent(agent_id)
        .map(|a| a.group)
        .expect("score rows reference known agents")
}

fn trait_values_by_group(
    artifact: &RunArtifact,
    scores: &ScoreTable,
    trait_name: TraitName,
    group: Group,
) -> Vec<f64> {
    scores
        .iter()
        .filter(|(agent_id, _)| group_of(artifact, agent_id) == group)
        .map(|(_, sums)| f64::from(sums[&trait_name]))
        .collect()
}

fn fmt_stat(value: f64) -> String {
    if value.is_infinite() {
        if value > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{value:.4}")
    }
}

/// Per trait, ANOVA of creative vs analytical scores before writing.
pub fn bfi_anova_csv(artifact: &RunArtifact) -> Result<String, ReportError> {
    let scores = phase_scores(artifact, Phase::BeforeWriting)?;
    let mut out = String::from("Trait,F-Statistic,p-Value\n");
    for trait_name in TraitName::ALL {
        let creative = trait_values_by_group(artifact, &scores, trait_name, Group::Creative);
        let analytical = trait_values_by_group(artifact, &scores, trait_name, Group::Analytical);
        let result = one_way_anova(&creative, &analytical)?;
        out.push_str(&format!(
            "{trait_name},{},{}\n",
            fmt_stat(result.statistic),
            fmt_stat(result.p_value.unwrap_or(f64::NAN))
        ));
    }
    Ok(out)
}

/// Per group and trait, means before and after the run's writing task
/// with ANOVA and Cohen's d (positive when the score rose after writing).
pub fn bfi_before_after_csv(artifact: &RunArtifact) -> Result<String, ReportError> {
    let before = phase_scores(artifact, Phase::BeforeWriting)?;
    let after = phase_scores(artifact, after_phase(artifact.kind))?;
    let mut out = String::from("Group,Trait,Mean-B,Mean-A,F-Statistic,p-Value,Cohen's d\n");
    for group in [Group::Analytical, Group::Creative] {
        for trait_name in TraitName::ALL {
            let b = trait_values_by_group(artifact, &before, trait_name, group);
            let a = trait_values_by_group(artifact, &after, trait_name, group);
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let anova = one_way_anova(&b, &a);
            let (f, p) = match &anova {
                Ok(r) => (r.statistic, r.p_value.unwrap_or(f64::NAN)),
                Err(StatsError::DegenerateData(_)) => (0.0, 1.0),
                Err(e) => return Err(e.clone().into()),
            };
            let d = match cohens_d(&b, &a) {
                Ok(d) => d,
                Err(StatsError::DegenerateData(_)) => 0.0,
                Err(e) => return Err(e.into()),
            };
            out.push_str(&format!(
                "{group},{trait_name},{},{},{},{},{}\n",
                fmt_stat(mean(&b)),
                fmt_stat(mean(&a)),
                fmt_stat(f),
                fmt_stat(p),
                fmt_stat(d)
            ));
        }
    }
    Ok(out)
}

/// Accepted stories of the run's analysis phase as vectorizer input.
fn analysis_documents(artifact: &RunArtifact) -> Result<Vec<(String, Group, String)>, ReportError> {
    let phase = analysis_story_phase(artifact.kind);
    let docs: Vec<(String, Group, String)> = artifact
        .stories
        .iter()
        .filter(|s| s.phase == phase && s.accepted)
        .map(|s| {
            (
                s.agent_id.clone(),
                group_of(artifact, &s.agent_id),
                s.text.clone(),
            )
        })
        .collect();
    if docs.is_empty() {
        return Err(ReportError::NoAcceptedStories(phase));
    }
    Ok(docs)
}

/// Rate matrix over the run's accepted analysis-phase stories.
pub fn corpus_matrix(
    artifact: &RunArtifact,
    dict: &LiwcDictionary,
) -> Result<CorpusMatrix, ReportError> {
    Ok(vectorize_corpus(&analysis_documents(artifact)?, dict)?)
}

/// Columns with any variance, as (name, values) pairs. Constant columns
/// carry no association and are excluded from rankings.
fn varying_columns(matrix: &CorpusMatrix) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for (idx, name) in matrix.category_names.iter().enumerate() {
        let column = matrix.rate_column(idx);
        if column.iter().any(|v| *v != column[0]) {
            names.push(name.clone());
            columns.push(column);
        }
    }
    (names, columns)
}

/// Top-k point-biserial correlations between group labels and category
/// rates.
pub fn pb_top_k_csv(matrix: &CorpusMatrix, k: usize) -> Result<String, ReportError> {
    let (names, columns) = varying_columns(matrix);
    let ranked = top_k_correlates(&names, &columns, k, |col| {
        point_biserial(&matrix.labels, col)
    })?;
    let mut out = String::from("LIWC category,r_pb\n");
    for (name, coefficient) in ranked {
        out.push_str(&format!("{name},{}\n", fmt_stat(coefficient)));
    }
    Ok(out)
}

/// Per trait, top-k Spearman correlations between before-writing trait
/// scores and category rates, restricted to agents with an analyzed
/// story.
pub fn spearman_top_k_csv(
    artifact: &RunArtifact,
    matrix: &CorpusMatrix,
    k: usize,
) -> Result<String, ReportError> {
    let before = phase_scores(artifact, Phase::BeforeWriting)?;
    let (names, columns) = varying_columns(matrix);
    let mut out = String::from("Trait,Term,Corr\n");
    for trait_name in TraitName::ALL {
        let scores: Vec<f64> = matrix
            .agent_ids
            .iter()
            .map(|agent_id| {
                before
                    .get(agent_id)
                    .map(|sums| f64::from(sums[&trait_name]))
                    .ok_or(ReportError::MissingPhase(Phase::BeforeWriting))
            })
            .collect::<Result<_, _>>()?;
        let ranked = top_k_correlates(&names, &columns, k, |col| spearman(&scores, col))?;
        for (name, coefficient) in ranked {
            out.push_str(&format!("{trait_name},{name},{}\n", fmt_stat(coefficient)));
        }
    }
    Ok(out)
}

/// PCA of the rate matrix: per-agent 2-D coordinates plus the model.
pub fn pca_coords(
    matrix: &CorpusMatrix,
) -> Result<(String, crate::ml::PcaModel, Vec<Vec<f64>>), ReportError> {
    let model = pca_fit(&matrix.rates, 2)?;
    let coords = pca_transform(&model, &matrix.rates);
    let mut out = String::from("agent_id,group,pc1,pc2\n");
    for ((agent_id, label), point) in matrix.agent_ids.iter().zip(&matrix.labels).zip(&coords) {
        out.push_str(&format!(
            "{agent_id},{label},{:.6},{:.6}\n",
            point[0], point[1]
        ));
    }
    Ok((out, model, coords))
}

/// 10-fold CV accuracy of the group classifier on rates, plus a config
/// echo for auditability. Runs smaller than 10 documents get as many
/// folds as they have rows; the echo records the k actually used.
pub fn cv_accuracy_text(
    matrix: &CorpusMatrix,
    seed: u64,
    config: &LogisticConfig,
) -> Result<(f64, String), ReportError> {
    let features = FeatureMatrix::new(
        matrix.rates.clone(),
        matrix.labels.clone(),
        matrix.category_names.clone(),
    )?;
    let k = 10.min(matrix.n_rows());
    let accuracy = kfold_cv_accuracy(&features, k, seed, config)?;
    let text = format!(
        "{accuracy:.4}\nk={k} seed={seed} l2_lambda={} learning_rate={} max_iters={} tol={} \
         rows={} categories={}\n",
        config.l2_lambda,
        config.learning_rate,
        config.max_iters,
        config.tol,
        matrix.n_rows(),
        matrix.n_cols()
    );
    Ok((accuracy, text))
}

/// The top-5 Spearman coefficients per trait in long form, ready for
/// violin plotting.
pub fn spearman_violin_csv(
    artifact: &RunArtifact,
    matrix: &CorpusMatrix,
) -> Result<String, ReportError> {
    let table = spearman_top_k_csv(artifact, matrix, 5)?;
    let mut out = String::from("Trait,Corr\n");
    for line in table.lines().skip(1) {
        let mut parts = line.split(',');
        let trait_name = parts.next().unwrap_or_default();
        let _term = parts.next();
        let corr = parts.next().unwrap_or_default();
        out.push_str(&format!("{trait_name},{corr}\n"));
    }
    Ok(out)
}

/// The rate matrix as CSV with agent/group columns and category-name
/// headers.
pub fn rates_csv(matrix: &CorpusMatrix) -> String {
    let mut out = String::from("agent_id,group");
    for name in &matrix.category_names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for ((agent_id, label), row) in matrix
        .agent_ids
        .iter()
        .zip(&matrix.labels)
        .zip(&matrix.rates)
    {
        out.push_str(&format!("{agent_id},{label}"));
        for rate in row {
            out.push_str(&format!(",{rate:.6}"));
        }
        out.push('\n');
    }
    out
}

/// Everything `analyze` computes before writing files.
#[derive(Debug)]
pub struct AnalysisOutputs {
    pub liwc_rates: String,
    pub bfi_anova: String,
    pub bfi_before_after: String,
    pub pb_top5: String,
    pub spearman_top5_per_trait: String,
    pub pca_coords: String,
    pub cv_accuracy: String,
    pub spearman_violin_data: String,
    pub pca_scatter_svg: String,
    pub bfi_boxplots_svg: String,
}

/// Runs the full statistical battery for one run.
pub fn analyze(
    artifact: &RunArtifact,
    dict: &LiwcDictionary,
) -> Result<AnalysisOutputs, ReportError> {
    let matrix = corpus_matrix(artifact, dict)?;
    let (pca_csv, _model, coords) = pca_coords(&matrix)?;
    let (_accuracy, cv_text) = cv_accuracy_text(
        &matrix,
        artifact.config.rng_seed,
        &LogisticConfig::default(),
    )?;
    let before = phase_scores(artifact, Phase::BeforeWriting)?;
    let after = phase_scores(artifact, after_phase(artifact.kind))?;

    Ok(AnalysisOutputs {
        liwc_rates: rates_csv(&matrix),
        bfi_anova: bfi_anova_csv(artifact)?,
        bfi_before_after: bfi_before_after_csv(artifact)?,
        pb_top5: pb_top_k_csv(&matrix, 5)?,
        spearman_top5_per_trait: spearman_top_k_csv(artifact, &matrix, 5)?,
        pca_coords: pca_csv,
        cv_accuracy: cv_text,
        spearman_violin_data: spearman_violin_csv(artifact, &matrix)?,
        pca_scatter_svg: svg::pca_scatter(&matrix, &coords),
        bfi_boxplots_svg: svg::bfi_boxplots(artifact, &before, &after),
    })
}

/// Writes analysis outputs into the run directory: `liwc_rates.csv` at
/// the top level, tables under `stats/`, figures alongside them.
pub fn write_analysis(dir: &Path, outputs: &AnalysisOutputs) -> Result<(), ReportError> {
    let stats_dir = dir.join("stats");
    fs::create_dir_all(&stats_dir)
        .map_err(|e| ReportError::Io(format!("create {}: {e}", stats_dir.display())))?;
    let files: Vec<(std::path::PathBuf, &str)> = vec![
        (dir.join("liwc_rates.csv"), outputs.liwc_rates.as_str()),
        (stats_dir.join("bfi_anova.csv"), outputs.bfi_anova.as_str()),
        (
            stats_dir.join("bfi_before_after.csv"),
            outputs.bfi_before_after.as_str(),
        ),
        (stats_dir.join("pb_top5.csv"), outputs.pb_top5.as_str()),
        (
            stats_dir.join("spearman_top5_per_trait.csv"),
            outputs.spearman_top5_per_trait.as_str(),
        ),
        (
            stats_dir.join("pca_coords.csv"),
            outputs.pca_coords.as_str(),
        ),
        (
            stats_dir.join("cv_accuracy.txt"),
            outputs.cv_accuracy.as_str(),
        ),
        (
            stats_dir.join("spearman_violin_data.csv"),
            outputs.spearman_violin_data.as_str(),
        ),
        (
            stats_dir.join("pca_scatter.svg"),
            outputs.pca_scatter_svg.as_str(),
        ),
        (
            stats_dir.join("bfi_boxplots.svg"),
            outputs.bfi_boxplots_svg.as_str(),
        ),
    ];
    for (path, contents) in files {
        fs::write(&path, contents)
            .map_err(|e| ReportError::Io(format!("write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Compares after-writing scores across two runs, per group and trait. `run_a` supplies the non-interactive after phase
/// (control), `run_b` the interactive one (experimental), plus the
/// control run's before-writing means for reference.
pub fn compare_runs(run_a: &RunArtifact, run_b: &RunArtifact) -> Result<String, ReportError> {
    let before_control = phase_scores(run_a, Phase::BeforeWriting)?;
    let after_control = phase_scores(run_a, Phase::AfterNonInteractiveWriting).map_err(|_| {
        ReportError::PhaseMismatch("first run has no AfterNonInteractiveWriting scores".to_string())
    })?;
    let after_experimental = phase_scores(run_b, Phase::AfterInteractiveWriting).map_err(|_| {
        ReportError::PhaseMismatch("second run has no AfterInteractiveWriting scores".to_string())
    })?;

    let mut profiles_a: Vec<&String> = run_a.agents.iter().map(|a| &a.profile_id).collect();
    let mut profiles_b: Vec<&String> = run_b.agents.iter().map(|a| &a.profile_id).collect();
    profiles_a.sort();
    profiles_a.dedup();
    profiles_b.sort();
    profiles_b.dedup();
    if profiles_a != profiles_b {
        return Err(ReportError::PhaseMismatch(format!(
            "profile sets differ: {profiles_a:?} vs {profiles_b:?}"
        )));
    }

    let mut out =
        String::from("Group,Trait,Mean-B_C,Mean-A_C,Mean-A_E,F-Statistic,p-Value,Cohen's d\n");
    for group in [Group::Analytical, Group::Creative] {
        for trait_name in TraitName::ALL {
            let b_c = trait_values_by_group(run_a, &before_control, trait_name, group);
            let a_c = trait_values_by_group(run_a, &after_control, trait_name, group);
            let a_e = trait_values_by_group(run_b, &after_experimental, trait_name, group);
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let anova = one_way_anova(&a_c, &a_e);
            let (f, p) = match &anova {
                Ok(r) => (r.statistic, r.p_value.unwrap_or(f64::NAN)),
                Err(StatsError::DegenerateData(_)) => (0.0, 1.0),
                Err(e) => return Err(e.clone().into()),
            };
            let d = match cohens_d(&a_c, &a_e) {
                Ok(d) => d,
                Err(StatsError::DegenerateData(_)) => 0.0,
                Err(e) => return Err(e.into()),
            };
            out.push_str(&format!(
                "{group},{trait_name},{},{},{},{},{},{}\n",
                fmt_stat(mean(&b_c)),
                fmt_stat(mean(&a_c)),
                fmt_stat(mean(&a_e)),
                fmt_stat(f),
                fmt_stat(p),
                fmt_stat(d)
            ));
        }
    }
    Ok(out)
}
