//! Evaluation plumbing: synthetic corpora, Monte-Carlo verification, ROC
//! curves, PGM images and CSV tables.

pub mod config;
pub mod mc;
pub mod pgm;
pub mod roc;
pub mod scene;
pub mod table;

pub use config::{ExperimentConfig, Mode};
pub use mc::{binomial_se, mc_verify, power_curve};
pub use pgm::{decode_pgm, encode_pgm, load_pgm, save_pgm};
pub use roc::{roc_from_scores, RocCurve};
pub use scene::{smooth_corpus, synth_cover, texture, Scene, SceneSpec};
pub use table::{export_csv, read_scores, write_csv, McRow, PowerRow, Record, ScoreRow};
