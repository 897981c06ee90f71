use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use teatkey_core::TaskName;

#[derive(Debug, Parser)]
#[command(name = "teatkey", version, about = "Teat keyframe extraction, annotation datasets and detector evaluation")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Each overrides the matching config file value.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Pipeline config (JSON)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Detector backend: scripted:<fixture.json> or wire:<endpoint>
    #[arg(long, global = true, value_name = "SPEC")]
    pub backend: Option<String>,
    /// Per-call latency budget in milliseconds
    #[arg(long, global = true, value_name = "MS")]
    pub budget_ms: Option<u64>,
    /// Seed for the train/val shuffle
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Labelling task: teat_shape or skin_condition
    #[arg(long, global = true)]
    pub task: Option<TaskName>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract per-stall teat keyframes from a frame stream
    Extract(ExtractArgs),
    /// Build train/val COCO datasets from a directory of LabelMe files
    Dataset(DatasetArgs),
    /// Score COCO-format detections against ground truth
    Evaluate(EvaluateArgs),
    /// Print the detector benchmark cards
    Registry(RegistryArgs),
    /// Summarize a storage ledger
    Ledger(LedgerArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Directory holding frames.jsonl and the frame images it lists
    #[arg(long, value_name = "DIR")]
    pub frames: PathBuf,
    /// Root under which the session folder is created
    #[arg(long, value_name = "DIR")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub capture_date: Option<String>,
    #[arg(long)]
    pub camera_id: Option<String>,
    /// Examine every n-th frame
    #[arg(long, value_name = "N")]
    pub extraction_rate: Option<u64>,
    /// Source video, counted as raw input in the storage ledger
    #[arg(long, value_name = "PATH")]
    pub raw_video: Option<PathBuf>,
    /// Write one latency record per backend call to this JSONL file
    #[arg(long, value_name = "PATH")]
    pub latency_log: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Directory of LabelMe JSON files
    #[arg(long, value_name = "DIR")]
    pub input: PathBuf,
    /// Where <task>_train.json and <task>_val.json are written
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_name = "FRAC")]
    pub train_frac: Option<f64>,
    /// Print statistics as JSON instead of a table
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Ground truth COCO dataset
    #[arg(long, value_name = "PATH")]
    pub gt: PathBuf,
    /// Detections as a COCO results list
    #[arg(long, value_name = "PATH")]
    pub pred: PathBuf,
    /// Print a per-class table instead of JSON
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct RegistryArgs {
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct LedgerArgs {
    /// Ledger file written by `extract`
    #[arg(long, value_name = "PATH")]
    pub entries: PathBuf,
    #[arg(long)]
    pub json: bool,
}
