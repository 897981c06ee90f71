use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use teatkey_core::annotation::validate_coco;
use teatkey_core::{evaluate, AreaBand, BBox, CocoDataset, Detection, EvalResult};

use crate::args::EvaluateArgs;
use crate::config::PipelineConfig;
use crate::exit::{Failure, OrExit, Outcome, INVALID_INPUT, USAGE};
use crate::render::{self, fixed};

/// One entry of a COCO results file.
#[derive(Debug, Deserialize)]
struct ResultEntry {
    image_id: u64,
    category_id: u32,
    bbox: BBox,
    score: f64,
}

#[derive(Serialize)]
struct ClassReport {
    class_id: u32,
    name: String,
    ap_all: Option<f64>,
    ap_small: Option<f64>,
    ap: BTreeMap<&'static str, Vec<Option<f64>>>,
}

#[derive(Serialize)]
struct Report {
    iou_thresholds: Vec<f64>,
    map_all: Option<f64>,
    map_small: Option<f64>,
    classes: Vec<ClassReport>,
}

fn report(result: &EvalResult, gt: &CocoDataset) -> Report {
    let classes = result
        .classes
        .iter()
        .map(|&class_id| {
            let ap = AreaBand::ALL
                .iter()
                .map(|&band| {
                    let row = (0..result.iou_thresholds.len()).map(|t| result.ap(class_id, t, band)).collect();
                    (band.name(), row)
                })
                .collect();
            ClassReport {
                class_id,
                name: gt.category_name(class_id).unwrap_or_default().to_string(),
                ap_all: result.class_ap(class_id, AreaBand::All),
                ap_small: result.class_ap(class_id, AreaBand::Small),
                ap,
            }
        })
        .collect();
    Report {
        iou_thresholds: result.iou_thresholds.clone(),
        map_all: result.map_all,
        map_small: result.map_small,
        classes,
    }
}

fn table(r: &Report) -> String {
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), fixed);
    let mut out = format!("{:<6} {:<12} {:>10} {:>10}\n", "id", "category", "ap_all", "ap_small");
    for c in &r.classes {
        let _ = writeln!(out, "{:<6} {:<12} {:>10} {:>10}", c.class_id, c.name, cell(c.ap_all), cell(c.ap_small));
    }
    let _ = writeln!(out, "{:<19} {:>10} {:>10}", "mAP", cell(r.map_all), cell(r.map_small));
    out
}

fn read(path: &std::path::Path) -> Outcome<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).or_exit(USAGE)
}

pub fn run(cfg: PipelineConfig, args: &EvaluateArgs) -> Outcome {
    let gt = CocoDataset::from_json(&read(&args.gt)?)
        .with_context(|| format!("parsing {}", args.gt.display()))
        .or_exit(INVALID_INPUT)?;
    let violations = validate_coco(&gt);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("{}: {}: {}", args.gt.display(), v.path, v.message);
        }
        return Err(Failure::msg(INVALID_INPUT, format!("{} ground truth violation(s)", violations.len())));
    }

    let entries: Vec<ResultEntry> = serde_json::from_str(&read(&args.pred)?)
        .with_context(|| format!("parsing {}", args.pred.display()))
        .or_exit(INVALID_INPUT)?;
    let dets: Vec<Detection> = entries
        .into_iter()
        .map(|e| Detection { image_id: e.image_id, class_id: e.category_id, bbox: e.bbox, score: e.score })
        .collect();

    let result = evaluate(&gt.ground_truth(), &dets, &gt.image_sizes(), &cfg.eval).or_exit(INVALID_INPUT)?;
    let r = report(&result, &gt);
    if args.table {
        print!("{}", table(&r));
    } else {
        print!("{}", render::to_json(&r));
    }
    Ok(())
}
