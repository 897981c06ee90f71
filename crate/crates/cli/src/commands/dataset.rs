use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use serde::Serialize;
use teatkey_core::annotation::{aggregate, class_stats, parse_files, split, validate_coco, ClassStats, SplitError};
use teatkey_core::TaskSpec;

use crate::args::DatasetArgs;
use crate::config::PipelineConfig;
use crate::exit::{Failure, OrExit, Outcome, INVALID_INPUT, USAGE};
use crate::render;

#[derive(Serialize)]
struct Report<'a> {
    task: &'a str,
    images: usize,
    annotations: usize,
    categories: usize,
    skipped_labels: usize,
    train_images: usize,
    val_images: usize,
    stats: &'a ClassStats,
}

fn labelme_files(dir: &std::path::Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn run(mut cfg: PipelineConfig, args: &DatasetArgs) -> Outcome {
    let task = TaskSpec::new(cfg.task().or_exit(USAGE)?);
    if let Some(frac) = args.train_frac {
        cfg.split.train_frac = frac;
    }

    let files = labelme_files(&args.input).or_exit(USAGE)?;
    if files.is_empty() {
        return Err(Failure::msg(INVALID_INPUT, format!("no LabelMe .json files in {}", args.input.display())));
    }
    let mut docs = Vec::with_capacity(files.len());
    let mut bad = 0;
    for (path, parsed) in parse_files(&files) {
        match parsed {
            Ok(doc) => docs.push(doc),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                bad += 1;
            }
        }
    }
    if bad > 0 {
        return Err(Failure::msg(INVALID_INPUT, format!("{bad} of {} annotation file(s) failed to parse", files.len())));
    }

    let agg = aggregate(&docs, &task).or_exit(INVALID_INPUT)?;
    let violations = validate_coco(&agg.dataset);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("{}: {}", v.path, v.message);
        }
        return Err(Failure::msg(INVALID_INPUT, format!("{} dataset violation(s)", violations.len())));
    }
    if agg.skipped_labels > 0 {
        log::warn!("{} shape(s) with labels outside the {} categories were skipped", agg.skipped_labels, task.name);
    }

    let (train, val) = split(&agg.dataset, &cfg.split).map_err(|e| match e {
        SplitError::Fraction(_) => Failure::new(USAGE, e),
        _ => Failure::new(INVALID_INPUT, e),
    })?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display())).or_exit(USAGE)?;
    for (part, ds) in [("train", &train), ("val", &val)] {
        let path = args.out.join(format!("{}_{part}.json", task.name));
        fs::write(&path, ds.to_json()).with_context(|| format!("writing {}", path.display())).or_exit(USAGE)?;
    }

    let stats = class_stats(&agg.dataset);
    if args.json {
        print!(
            "{}",
            render::to_json(&Report {
                task: task.name.as_str(),
                images: agg.dataset.images.len(),
                annotations: agg.dataset.annotations.len(),
                categories: agg.dataset.categories.len(),
                skipped_labels: agg.skipped_labels,
                train_images: train.images.len(),
                val_images: val.images.len(),
                stats: &stats,
            })
        );
    } else {
        print!("{}", stats.to_table());
        println!("{:<19} {:>8}", "train images", train.images.len());
        println!("{:<19} {:>8}", "val images", val.images.len());
    }
    Ok(())
}
