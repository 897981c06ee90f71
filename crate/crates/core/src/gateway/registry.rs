use serde::Serialize;

use crate::annotation::TaskName;

/// Published benchmark figures for one fine-tuned detector on one task.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelCard {
    pub name: &'static str,
    pub task: TaskName,
    /// Validation mAP on small objects.
    pub map_small: f64,
    pub avg_inference_ms: u32,
    pub params_millions: f64,
    /// Compute per forward pass on a batch of 100 inputs of 2704 x 1520 x 3.
    pub compute: &'static str,
}

const ARCHS: [(&str, f64, &str); 3] = [
    ("DINO", 47.546, "0.274 TFLOPs"),
    ("YOLO-F", 42.409, "98.808 GFLOPs"),
    ("Faster RCNN", 41.364, "0.208 TFLOPs"),
];

const RESULTS: [(TaskName, [(f64, u32); 3]); 2] = [
    (TaskName::TeatShape, [(0.783, 628), (0.634, 598), (0.573, 576)]),
    (TaskName::SkinCondition, [(0.828, 505), (0.615, 498), (0.695, 463)]),
];

pub fn model_registry() -> Vec<ModelCard> {
    RESULTS
        .iter()
        .flat_map(|&(task, rows)| {
            ARCHS.iter().zip(rows).map(move |(&(name, params_millions, compute), (map_small, avg_inference_ms))| {
                ModelCard { name, task, map_small, avg_inference_ms, params_millions, compute }
            })
        })
        .collect()
}

fn normalize(name: &str) -> String {
    name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase()
}

/// Find a card by model name (case, spaces and dashes ignored) and task.
pub fn lookup(name: &str, task: TaskName) -> Option<ModelCard> {
    let wanted = normalize(name);
    model_registry().into_iter().find(|c| c.task == task && normalize(c.name) == wanted)
}

pub fn best_by_map(task: TaskName) -> Option<ModelCard> {
    model_registry()
        .into_iter()
        .filter(|c| c.task == task)
        .max_by(|a, b| a.map_small.total_cmp(&b.map_small))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_cards() {
        assert_eq!(model_registry().len(), 6);
    }

    #[test]
    fn lookups() {
        assert_eq!(lookup("DINO", TaskName::TeatShape).unwrap().map_small, 0.783);
        assert_eq!(lookup("Faster RCNN", TaskName::SkinCondition).unwrap().avg_inference_ms, 463);
        assert_eq!(lookup("faster-rcnn", TaskName::SkinCondition).unwrap().avg_inference_ms, 463);
        assert_eq!(lookup("yolo-f", TaskName::TeatShape).unwrap().avg_inference_ms, 598);
        assert!(lookup("SSD", TaskName::TeatShape).is_none());
    }

    #[test]
    fn dino_is_best_everywhere() {
        for task in [TaskName::TeatShape, TaskName::SkinCondition] {
            assert_eq!(best_by_map(task).unwrap().name, "DINO");
        }
    }

    #[test]
    fn dino_runtime_within_ten_percent_of_fastest() {
        for task in [TaskName::TeatShape, TaskName::SkinCondition] {
            let cards: Vec<_> = model_registry().into_iter().filter(|c| c.task == task).collect();
            let dino = cards.iter().find(|c| c.name == "DINO").unwrap();
            let fastest = cards.iter().filter(|c| c.name != "DINO").map(|c| c.avg_inference_ms).min().unwrap();
            assert!(f64::from(dino.avg_inference_ms) <= 1.10 * f64::from(fastest));
            assert!(cards.iter().all(|c| (0.0..=1.0).contains(&c.map_small)));
        }
    }
}
