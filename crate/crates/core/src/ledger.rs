//! Byte accounting across the pipeline: raw video, removable intermediates and
//! stored keyframe records.

use std::fmt::Write as _;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("entry {path:?} has negative size {bytes}")]
    NegativeBytes { path: String, bytes: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerCategory {
    RawVideo,
    Intermediate,
    KeyframeRecord,
}

impl LedgerCategory {
    pub const ALL: [LedgerCategory; 3] =
        [LedgerCategory::RawVideo, LedgerCategory::Intermediate, LedgerCategory::KeyframeRecord];

    pub fn name(self) -> &'static str {
        match self {
            LedgerCategory::RawVideo => "raw_video",
            LedgerCategory::Intermediate => "intermediate",
            LedgerCategory::KeyframeRecord => "keyframe_record",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawEntry")]
pub struct LedgerEntry {
    pub category: LedgerCategory,
    pub path: String,
    pub bytes: u64,
}

#[derive(Deserialize)]
struct RawEntry {
    category: LedgerCategory,
    path: String,
    bytes: i64,
}

impl TryFrom<RawEntry> for LedgerEntry {
    type Error = LedgerError;

    fn try_from(raw: RawEntry) -> Result<Self, Self::Error> {
        LedgerEntry::checked(raw.category, raw.path, raw.bytes)
    }
}

impl LedgerEntry {
    pub fn new(category: LedgerCategory, path: impl Into<String>, bytes: u64) -> Self {
        LedgerEntry { category, path: path.into(), bytes }
    }

    /// Build an entry from a signed size as read from external input.
    pub fn checked(category: LedgerCategory, path: impl Into<String>, bytes: i64) -> Result<Self, LedgerError> {
        let path = path.into();
        match u64::try_from(bytes) {
            Ok(bytes) => Ok(LedgerEntry { category, path, bytes }),
            Err(_) => Err(LedgerError::NegativeBytes { path, bytes }),
        }
    }
}

#[derive(Debug, Default)]
struct Inner {
    entries: Vec<LedgerEntry>,
    totals: [u64; 3],
    counts: [u64; 3],
}

/// Append-only ledger. One writer records while any number of readers report;
/// entries and totals change under the same lock.
#[derive(Debug, Default)]
pub struct Ledger {
    inner: RwLock<Inner>,
}

fn slot(category: LedgerCategory) -> usize {
    category as usize
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = LedgerEntry>) -> Self {
        let ledger = Ledger::new();
        for e in entries {
            ledger.record(e);
        }
        ledger
    }

    pub fn record(&self, entry: LedgerEntry) {
        let mut inner = self.inner.write().unwrap_or_else(|e| e.into_inner());
        let i = slot(entry.category);
        inner.totals[i] += entry.bytes;
        inner.counts[i] += 1;
        inner.entries.push(entry);
    }

    pub fn entries(&self) -> Vec<LedgerEntry> {
        self.inner.read().unwrap_or_else(|e| e.into_inner()).entries.clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap_or_else(|e| e.into_inner()).entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn report(&self) -> LedgerReport {
        let inner = self.inner.read().unwrap_or_else(|e| e.into_inner());
        let categories = LedgerCategory::ALL
            .iter()
            .map(|&category| {
                let i = slot(category);
                let (total_bytes, entries) = (inner.totals[i], inner.counts[i]);
                CategoryTotals {
                    category,
                    total_bytes,
                    entries,
                    average_bytes: (entries > 0).then(|| total_bytes as f64 / entries as f64),
                }
            })
            .collect::<Vec<_>>();
        let raw = inner.totals[slot(LedgerCategory::RawVideo)];
        let kept = inner.totals[slot(LedgerCategory::KeyframeRecord)];
        LedgerReport {
            categories,
            reduction_ratio: (kept > 0).then(|| raw as f64 / kept as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryTotals {
    pub category: LedgerCategory,
    pub total_bytes: u64,
    pub entries: u64,
    pub average_bytes: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub categories: Vec<CategoryTotals>,
    /// Raw video bytes per stored keyframe-record byte. Intermediates are not counted.
    pub reduction_ratio: Option<f64>,
}

impl LedgerReport {
    pub fn total(&self, category: LedgerCategory) -> u64 {
        self.categories.iter().find(|c| c.category == category).map_or(0, |c| c.total_bytes)
    }

    /// Fixed-width text table with decimal SI sizes.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<16} {:>8} {:>12} {:>12}", "category", "entries", "total", "average");
        for c in &self.categories {
            let avg = c.average_bytes.map_or_else(|| "-".to_string(), format_si);
            let _ = writeln!(
                out,
                "{:<16} {:>8} {:>12} {:>12}",
                c.category.name(),
                c.entries,
                format_si(c.total_bytes as f64),
                avg
            );
        }
        let ratio = self.reduction_ratio.map_or_else(|| "-".to_string(), |r| format!("{r:.2}x"));
        let _ = writeln!(out, "{:<16} {:>34}", "reduction_ratio", ratio);
        out
    }
}

/// Decimal SI size: `139.50 MB`, `4.00 GB`, `512 B`.
pub fn format_si(bytes: f64) -> String {
    const UNITS: [&str; 5] = ["kB", "MB", "GB", "TB", "PB"];
    if bytes < 1000.0 {
        return format!("{bytes:.0} B");
    }
    let mut value = bytes;
    let mut unit = "B";
    for u in UNITS {
        if value < 1000.0 {
            break;
        }
        value /= 1000.0;
        unit = u;
    }
    format!("{value:.2} {unit}")
}
