//! LabelMe parsing and COCO dataset consolidation, splitting, validation and
//! class statistics.

mod aggregate;
mod coco;
mod labelme;
mod split;
mod stats;
mod task;

pub use aggregate::{aggregate, AggregateError, Aggregated};
pub use coco::{validate_coco, CocoAnnotation, CocoCategory, CocoDataset, CocoImage, Violation};
pub use labelme::{parse_files, parse_labelme, LabelMeDoc, LabelMeError, Shape, ShapeType};
pub use split::{split, SplitError, SplitMix64, SplitSpec};
pub use stats::{class_stats, CategoryCount, ClassStats, Imbalance};
pub use task::{TaskName, TaskSpec, UnknownTask};
