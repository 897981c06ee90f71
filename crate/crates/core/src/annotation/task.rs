use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskName {
    TeatShape,
    SkinCondition,
}

impl TaskName {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskName::TeatShape => "teat_shape",
            TaskName::SkinCondition => "skin_condition",
        }
    }
}

impl fmt::Display for TaskName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
#[error("unknown task {0:?} (expected teat_shape or skin_condition)")]
pub struct UnknownTask(pub String);

impl FromStr for TaskName {
    type Err = UnknownTask;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "teat_shape" | "shape" => Ok(TaskName::TeatShape),
            "skin_condition" | "skin" => Ok(TaskName::SkinCondition),
            _ => Err(UnknownTask(s.to_string())),
        }
    }
}

/// A labelling task and its ordered category list. Category ids are 1-based
/// positions in this list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSpec {
    pub name: TaskName,
    pub categories: Vec<String>,
}

impl TaskSpec {
    pub fn new(name: TaskName) -> Self {
        let categories: &[&str] = match name {
            // pointed, flat, round-flat, round-ring
            TaskName::TeatShape => &["1", "3", "7", "8"],
            // normal skin, open lesion
            TaskName::SkinCondition => &["C1", "C3"],
        };
        TaskSpec { name, categories: categories.iter().map(|c| c.to_string()).collect() }
    }

    /// Canonical category name for a raw LabelMe label, or `None` when the label
    /// belongs to another task. Skin files may use bare scores ("1", "3").
    pub fn normalize_label(&self, raw: &str) -> Option<&str> {
        let raw = raw.trim();
        let candidate = match self.name {
            TaskName::SkinCondition if raw.chars().all(|c| c.is_ascii_digit()) => format!("C{raw}"),
            TaskName::SkinCondition => raw.to_ascii_uppercase(),
            TaskName::TeatShape => raw.to_string(),
        };
        self.categories.iter().find(|c| **c == candidate).map(String::as_str)
    }

    pub fn category_id(&self, name: &str) -> Option<u32> {
        self.categories.iter().position(|c| c == name).map(|i| i as u32 + 1)
    }
}
