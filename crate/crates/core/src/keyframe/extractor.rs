use log::debug;

use super::gates::{confident_teats, gate_stall, gate_teats};
use super::raster::crop_segments;
use super::sink::{RecordSink, TeatKeyframeRecord};
use super::source::FrameSourceError;
use super::{ExtractError, ExtractorConfig, ExtractorState, FrameRecord};
use crate::gateway::DetectorBackend;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// Neither gate passed.
    NoKey,
    /// A valid teat frame arrived while no stall was known.
    NoStall,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameOutcome {
    /// Off-stride; no backend was called.
    Skipped,
    StallKey { stall_id: String, changed: bool },
    TeatKey(TeatKeyframeRecord),
    Rejected(RejectReason),
}

/// The keyframe state machine for one stream.
///
/// Each on-stride frame is first read for a stall tag. A readable tag makes the
/// frame a stall key, and a new id switches the current stall and its folder.
/// Otherwise the teat gate runs, and a passing frame has its teats cropped into
/// the current stall's folder. Teat frames seen before any stall key are rejected.
#[derive(Debug)]
pub struct KeyframeExtractor {
    cfg: ExtractorConfig,
    state: ExtractorState,
}

impl KeyframeExtractor {
    pub fn new(cfg: ExtractorConfig) -> Result<Self, ExtractError> {
        cfg.validate()?;
        Ok(KeyframeExtractor { cfg, state: ExtractorState::default() })
    }

    pub fn config(&self) -> &ExtractorConfig {
        &self.cfg
    }

    pub fn state(&self) -> &ExtractorState {
        &self.state
    }

    pub fn into_state(self) -> ExtractorState {
        self.state
    }

    fn snapshot(&self) -> Box<ExtractorState> {
        Box::new(self.state.clone())
    }

    pub fn process_frame<B, S>(
        &mut self,
        frame: &FrameRecord,
        backend: &mut B,
        sink: &mut S,
    ) -> Result<FrameOutcome, ExtractError>
    where
        B: DetectorBackend + ?Sized,
        S: RecordSink + ?Sized,
    {
        if let Some(previous) = self.state.last_index {
            if frame.index <= previous {
                return Err(ExtractError::OutOfOrder { previous, got: frame.index, state: self.snapshot() });
            }
        }
        self.state.last_index = Some(frame.index);
        if !frame.index.is_multiple_of(self.cfg.extraction_rate) {
            return Ok(FrameOutcome::Skipped);
        }
        self.state.counters.frames_seen += 1;
        let index = frame.index;

        let ocr = backend
            .ocr(frame)
            .map_err(|source| ExtractError::Backend { frame_index: index, source, state: self.snapshot() })?;
        if let Some(stall_id) = ocr.as_ref().and_then(|o| gate_stall(o, frame, &self.cfg)) {
            self.state.counters.stall_keys += 1;
            let changed = self.state.cur_stall_id.as_deref() != Some(stall_id.as_str());
            if changed {
                let folder = sink
                    .open_stall(&stall_id)
                    .map_err(|source| ExtractError::Sink { frame_index: index, source, state: self.snapshot() })?;
                debug!("frame {index}: stall {stall_id} -> {}", folder.display());
                self.state.cur_stall_id = Some(stall_id.clone());
                self.state.folder_name = Some(folder);
            }
            return Ok(FrameOutcome::StallKey { stall_id, changed });
        }

        let dets = backend
            .detect(frame, self.cfg.detect_task)
            .map_err(|source| ExtractError::Backend { frame_index: index, source, state: self.snapshot() })?;
        if !gate_teats(&dets, frame, &self.cfg) {
            self.state.counters.rejected += 1;
            return Ok(FrameOutcome::Rejected(RejectReason::NoKey));
        }
        let Some(stall_id) = self.state.cur_stall_id.clone() else {
            self.state.counters.rejected += 1;
            return Ok(FrameOutcome::Rejected(RejectReason::NoStall));
        };

        let raster = frame
            .raster()
            .map_err(|source| ExtractError::Crop { frame_index: index, source, state: self.snapshot() })?;
        let segments = crop_segments(&raster, &confident_teats(&dets, &self.cfg))?;
        let record = sink
            .store(&stall_id, index, &segments)
            .map_err(|source| ExtractError::Sink { frame_index: index, source, state: self.snapshot() })?;
        self.state.counters.teat_keys += 1;
        Ok(FrameOutcome::TeatKey(record))
    }
}

/// Run the extractor over a whole stream and return the final state.
pub fn process_stream<I, B, S>(
    source: I,
    backend: &mut B,
    cfg: &ExtractorConfig,
    sink: &mut S,
) -> Result<ExtractorState, ExtractError>
where
    I: IntoIterator<Item = Result<FrameRecord, FrameSourceError>>,
    B: DetectorBackend + ?Sized,
    S: RecordSink + ?Sized,
{
    let mut extractor = KeyframeExtractor::new(cfg.clone())?;
    for frame in source {
        let frame = frame.map_err(|source| ExtractError::Source { source, state: extractor.snapshot() })?;
        extractor.process_frame(&frame, backend, sink)?;
    }
    Ok(extractor.into_state())
}
