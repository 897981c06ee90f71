use std::fmt::Write as _;

use serde::Serialize;
use teatkey_core::gateway::{best_by_map, model_registry};
use teatkey_core::{ModelCard, TaskName};

use crate::args::RegistryArgs;
use crate::config::PipelineConfig;
use crate::exit::Outcome;

#[derive(Serialize)]
struct Best {
    task: TaskName,
    model: &'static str,
    map_small: f64,
}

#[derive(Serialize)]
struct Listing {
    models: Vec<ModelCard>,
    best: Vec<Best>,
}

pub fn run(cfg: PipelineConfig, args: &RegistryArgs) -> Outcome {
    let tasks: Vec<TaskName> = match cfg.task {
        Some(t) => vec![t],
        None => vec![TaskName::TeatShape, TaskName::SkinCondition],
    };
    let models: Vec<ModelCard> = model_registry().into_iter().filter(|c| tasks.contains(&c.task)).collect();
    let best = tasks
        .iter()
        .filter_map(|&t| best_by_map(t))
        .map(|c| Best { task: c.task, model: c.name, map_small: c.map_small })
        .collect();
    let listing = Listing { models, best };

    if args.table {
        let mut out = format!(
            "{:<14} {:<12} {:>9} {:>8} {:>10} {:>14}\n",
            "task", "model", "mAP_s", "ms", "params_M", "compute"
        );
        for c in &listing.models {
            let _ = writeln!(
                out,
                "{:<14} {:<12} {:>9.3} {:>8} {:>10.3} {:>14}",
                c.task.as_str(),
                c.name,
                c.map_small,
                c.avg_inference_ms,
                c.params_millions,
                c.compute
            );
        }
        for b in &listing.best {
            let _ = writeln!(out, "best {:<9} {}", b.task.as_str(), b.model);
        }
        print!("{out}");
    } else {
        println!("{}", serde_json::to_string_pretty(&listing).expect("registry serializes"));
    }
    Ok(())
}
