use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{BackendError, DetectorBackend, Op};
use crate::annotation::TaskName;
use crate::geometry::Detection;
use crate::keyframe::{FrameRecord, OcrResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyRecord {
    pub frame_index: u64,
    pub op: Op,
    pub duration_ms: f64,
    pub budget_ms: u64,
    pub violated: bool,
}

impl LatencyRecord {
    pub fn new(frame_index: u64, op: Op, duration_ms: f64, budget_ms: u64) -> Self {
        LatencyRecord { frame_index, op, duration_ms, budget_ms, violated: duration_ms > budget_ms as f64 }
    }
}

/// Shared, append-only list of latency records in call-completion order.
#[derive(Debug, Clone, Default)]
pub struct LatencyLog {
    records: Arc<Mutex<Vec<LatencyRecord>>>,
}

impl LatencyLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&self, record: LatencyRecord) {
        self.records.lock().unwrap_or_else(|e| e.into_inner()).push(record);
    }

    pub fn records(&self) -> Vec<LatencyRecord> {
        self.records.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn violations(&self) -> usize {
        self.records().iter().filter(|r| r.violated).count()
    }

    pub fn to_jsonl(&self) -> String {
        self.records()
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }
}

/// Millisecond time source.
pub trait Clock {
    fn now_ms(&self) -> f64;
}

/// Wall clock. The actuation deadline is physical, so CPU time is not used.
#[derive(Debug, Clone, Copy)]
pub struct SystemClock(Instant);

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock(Instant::now())
    }
}

impl Clock for SystemClock {
    fn now_ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1000.0
    }
}

/// Hand-advanced clock for simulating backend latency.
#[derive(Debug, Clone, Default)]
pub struct ManualClock(Arc<Mutex<f64>>);

impl ManualClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, ms: f64) {
        *self.0.lock().unwrap_or_else(|e| e.into_inner()) += ms;
    }
}

impl Clock for ManualClock {
    fn now_ms(&self) -> f64 {
        *self.0.lock().unwrap_or_else(|e| e.into_inner())
    }
}

/// Forwards every call to `inner` unchanged and logs how long it took against
/// the budget, including calls that fail.
pub struct DeadlineBackend<B, C = SystemClock> {
    inner: B,
    budget_ms: u64,
    log: LatencyLog,
    clock: C,
}

pub fn with_deadline<B: DetectorBackend>(
    inner: B,
    budget_ms: u64,
    log: LatencyLog,
) -> Result<DeadlineBackend<B>, BackendError> {
    DeadlineBackend::with_clock(inner, budget_ms, log, SystemClock::default())
}

impl<B: DetectorBackend, C: Clock> DeadlineBackend<B, C> {
    pub fn with_clock(inner: B, budget_ms: u64, log: LatencyLog, clock: C) -> Result<Self, BackendError> {
        if budget_ms == 0 {
            return Err(BackendError::Config("deadline budget must be positive".into()));
        }
        Ok(DeadlineBackend { inner, budget_ms, log, clock })
    }

    pub fn budget_ms(&self) -> u64 {
        self.budget_ms
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }

    pub fn into_inner(self) -> B {
        self.inner
    }

    fn timed<T>(&mut self, frame_index: u64, op: Op, call: impl FnOnce(&mut B) -> T) -> T {
        let start = self.clock.now_ms();
        let out = call(&mut self.inner);
        let elapsed = (self.clock.now_ms() - start).max(0.0);
        self.log.push(LatencyRecord::new(frame_index, op, elapsed, self.budget_ms));
        out
    }
}

impl<B: DetectorBackend, C: Clock> DetectorBackend for DeadlineBackend<B, C> {
    fn detect(&mut self, frame: &FrameRecord, task: Option<TaskName>) -> Result<Vec<Detection>, BackendError> {
        self.timed(frame.index, Op::Detect, |b| b.detect(frame, task))
    }

    fn ocr(&mut self, frame: &FrameRecord) -> Result<Option<OcrResult>, BackendError> {
        self.timed(frame.index, Op::Ocr, |b| b.ocr(frame))
    }
}
