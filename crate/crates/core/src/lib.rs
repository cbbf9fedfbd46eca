//! persona-lab: persona-conditioned language-agent experiments.
//!
//! The library bootstraps a two-persona agent population from a pluggable
//! text-generation backend, administers and scores Big Five personality
//! questionnaires, runs non-interactive and interactive story-writing
//! tasks, analyzes the stories with a LIWC-style lexicon, and computes
//! the statistical battery behind the reports: ANOVA, Cohen's d,
//! point-biserial and Spearman correlations, logistic-regression
//! cross-validation, and 2-D PCA.
//!
//! Modules:
//! - [`persona`]: personality profiles and agent identities
//! - [`backend`]: live HTTP, scripted mock, and record/replay backends
//! - [`bfi`]: questionnaire prompt, answer-sheet parsing, trait scoring
//! - [`liwc`]: dictionary parsing and category count/rate vectors
//! - [`experiment`]: orchestration and run persistence
//! - [`stats`]: the hypothesis-testing toolbox
//! - [`ml`]: logistic regression CV and PCA
//! - [`report`]: analysis tables and figures

pub mod backend;
pub mod bfi;
pub mod cli;
pub mod experiment;
pub mod liwc;
pub mod ml;
pub mod persona;
pub mod report;
pub mod stats;
