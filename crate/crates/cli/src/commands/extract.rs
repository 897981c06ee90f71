use std::fs;
use std::sync::Arc;

use anyhow::Context;
use serde::Serialize;
use teatkey_core::gateway::{with_deadline, LatencyLog, ScriptedBackend, WireBackend};
use teatkey_core::keyframe::{process_stream, DirectoryFrames, ExtractError, FsSink};
use teatkey_core::{DetectorBackend, Ledger, LedgerCategory, LedgerEntry};

use crate::args::ExtractArgs;
use crate::config::{BackendSpec, PipelineConfig};
use crate::exit::{Failure, OrExit, Outcome, BACKEND, SINK, USAGE};
use crate::render;

/// Ledger file written into the session folder.
pub const LEDGER_FILE: &str = "ledger.json";

#[derive(Serialize)]
struct Summary<'a> {
    session: &'a str,
    frames_seen: u64,
    stall_keys: u64,
    teat_keys: u64,
    rejected: u64,
}

fn open_backend(spec: &BackendSpec, timeout_ms: u64) -> Outcome<Box<dyn DetectorBackend>> {
    let backend: Box<dyn DetectorBackend> = match spec {
        BackendSpec::Scripted(path) => Box::new(ScriptedBackend::load(path).or_exit(BACKEND)?),
        BackendSpec::Wire(endpoint) => Box::new(WireBackend::connect_endpoint(endpoint, timeout_ms).or_exit(BACKEND)?),
    };
    Ok(backend)
}

fn exit_code(e: &ExtractError) -> u8 {
    match e {
        ExtractError::Backend { .. } => BACKEND,
        ExtractError::Sink { .. } => SINK,
        _ => USAGE,
    }
}

pub fn run(mut cfg: PipelineConfig, args: &ExtractArgs) -> Outcome {
    let ex = &mut cfg.extractor;
    if let Some(out) = &args.output {
        ex.output_root = out.clone();
    }
    if let Some(d) = &args.capture_date {
        ex.capture_date = d.clone();
    }
    if let Some(c) = &args.camera_id {
        ex.camera_id = c.clone();
    }
    if let Some(rate) = args.extraction_rate {
        ex.extraction_rate = rate;
    }
    if ex.detect_task.is_none() {
        ex.detect_task = cfg.task;
    }
    cfg.extractor.validate().or_exit(USAGE)?;
    let spec = cfg.backend().or_exit(USAGE)?;

    let frames = DirectoryFrames::open(&args.frames).or_exit(USAGE)?;
    let ledger = Arc::new(Ledger::new());
    if let Some(video) = &args.raw_video {
        let bytes = fs::metadata(video).with_context(|| format!("reading {}", video.display())).or_exit(USAGE)?.len();
        ledger.record(LedgerEntry::new(LedgerCategory::RawVideo, video.display().to_string(), bytes));
    }
    for entry in frames.entries() {
        let path = frames.path_of(entry);
        let bytes = fs::metadata(&path).with_context(|| format!("reading {}", path.display())).or_exit(USAGE)?.len();
        ledger.record(LedgerEntry::new(LedgerCategory::Intermediate, entry.file.clone(), bytes));
    }

    let session_dir = cfg.extractor.session_dir();
    let mut sink = FsSink::create(&session_dir).or_exit(SINK)?.with_ledger(Arc::clone(&ledger));
    let latencies = LatencyLog::new();
    let mut backend =
        with_deadline(open_backend(&spec, cfg.timeout_ms)?, cfg.budget_ms, latencies.clone()).or_exit(USAGE)?;

    let outcome = process_stream(frames, &mut backend, &cfg.extractor, &mut sink);
    if let Some(path) = &args.latency_log {
        fs::write(path, latencies.to_jsonl()).with_context(|| format!("writing {}", path.display())).or_exit(USAGE)?;
    }
    let calls = latencies.records().len();
    let over = latencies.violations();
    if over > 0 {
        log::warn!("{over} of {calls} backend calls exceeded the {} ms budget", cfg.budget_ms);
    }

    let state = outcome.map_err(|e| {
        if let Some(state) = e.partial_state() {
            eprintln!("stopped after {} sampled frame(s): {:?}", state.counters.frames_seen, state.counters);
        }
        Failure::new(exit_code(&e), e)
    })?;

    let ledger_path = session_dir.join(LEDGER_FILE);
    let body = serde_json::to_string_pretty(&ledger.entries()).expect("ledger serializes") + "\n";
    fs::write(&ledger_path, body).with_context(|| format!("writing {}", ledger_path.display())).or_exit(SINK)?;

    let session = cfg.extractor.session();
    let c = state.counters;
    print!(
        "{}",
        render::to_json(&Summary {
            session: &session,
            frames_seen: c.frames_seen,
            stall_keys: c.stall_keys,
            teat_keys: c.teat_keys,
            rejected: c.rejected,
        })
    );
    Ok(())
}
