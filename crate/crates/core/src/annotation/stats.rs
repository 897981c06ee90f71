use std::fmt;

use serde::Serialize;

use super::coco::CocoDataset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryCount {
    pub id: u32,
    pub name: String,
    pub count: u64,
}

/// Largest over smallest category count, kept as exact integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Imbalance {
    pub max: u64,
    pub min: u64,
}

impl Imbalance {
    pub fn ratio(&self) -> f64 {
        self.max as f64 / self.min as f64
    }
}

impl fmt::Display for Imbalance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.max, self.min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassStats {
    pub counts: Vec<CategoryCount>,
    pub total: u64,
    /// Absent when there are no categories or the rarest one has no labels.
    pub imbalance: Option<Imbalance>,
}

impl ClassStats {
    pub fn count(&self, name: &str) -> Option<u64> {
        self.counts.iter().find(|c| c.name == name).map(|c| c.count)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{:<6} {:<12} {:>8}\n", "id", "category", "count");
        for c in &self.counts {
            out.push_str(&format!("{:<6} {:<12} {:>8}\n", c.id, c.name, c.count));
        }
        out.push_str(&format!("{:<19} {:>8}\n", "total", self.total));
        let imbalance = self.imbalance.map_or_else(|| "-".to_string(), |i| format!("{i} ({:.2})", i.ratio()));
        out.push_str(&format!("{:<19} {:>8}\n", "imbalance", imbalance));
        out
    }
}

/// Annotation count per category, in category order.
pub fn class_stats(ds: &CocoDataset) -> ClassStats {
    let counts: Vec<CategoryCount> = ds
        .categories
        .iter()
        .map(|c| CategoryCount {
            id: c.id,
            name: c.name.clone(),
            count: ds.annotations.iter().filter(|a| a.category_id == c.id).count() as u64,
        })
        .collect();
    let total = counts.iter().map(|c| c.count).sum();
    let max = counts.iter().map(|c| c.count).max();
    let min = counts.iter().map(|c| c.count).min();
    let imbalance = match (max, min) {
        (Some(max), Some(min)) if min > 0 => Some(Imbalance { max, min }),
        _ => None,
    };
    ClassStats { counts, total, imbalance }
}
