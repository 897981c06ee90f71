use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use super::protocol::{ImageRef, Request, Response};
use super::{check_ocr, BackendError, DetectorBackend, Op};
use crate::annotation::TaskName;
use crate::geometry::Detection;
use crate::keyframe::{FrameRecord, OcrResult};

pub const DEFAULT_TIMEOUT_MS: u64 = 5000;

/// Client for a detector speaking the NDJSON protocol over a child process's
/// standard streams or a TCP socket. One request is in flight at a time.
pub struct WireBackend {
    writer: Option<Box<dyn Write + Send>>,
    lines: Receiver<io::Result<String>>,
    child: Option<Child>,
    next_id: u64,
    timeout: Duration,
}

impl std::fmt::Debug for WireBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WireBackend")
            .field("next_id", &self.next_id)
            .field("timeout", &self.timeout)
            .field("child", &self.child.as_ref().map(Child::id))
            .finish()
    }
}

impl WireBackend {
    /// `tcp://host:port` connects a socket; anything else is run as a command
    /// line split on whitespace.
    pub fn connect_endpoint(endpoint: &str, timeout_ms: u64) -> Result<Self, BackendError> {
        match endpoint.strip_prefix("tcp://") {
            Some(addr) => Self::connect(addr, timeout_ms),
            None => Self::spawn(endpoint, timeout_ms),
        }
    }

    pub fn spawn(command_line: &str, timeout_ms: u64) -> Result<Self, BackendError> {
        let mut parts = command_line.split_whitespace();
        let program = parts.next().ok_or_else(|| BackendError::Config("empty command".into()))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| BackendError::Unreachable { endpoint: command_line.into(), reason: e.to_string() })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let mut backend = Self::from_streams(stdout, stdin, timeout_ms);
        backend.child = Some(child);
        Ok(backend)
    }

    pub fn connect(addr: &str, timeout_ms: u64) -> Result<Self, BackendError> {
        let stream = TcpStream::connect(addr)
            .map_err(|e| BackendError::Unreachable { endpoint: addr.into(), reason: e.to_string() })?;
        stream.set_nodelay(true)?;
        let reader = stream.try_clone()?;
        Ok(Self::from_streams(reader, stream, timeout_ms))
    }

    pub fn from_streams<R, W>(reader: R, writer: W, timeout_ms: u64) -> Self
    where
        R: Read + Send + 'static,
        W: Write + Send + 'static,
    {
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(reader).lines() {
                let failed = line.is_err();
                if tx.send(line).is_err() || failed {
                    break;
                }
            }
        });
        WireBackend {
            writer: Some(Box::new(writer)),
            lines: rx,
            child: None,
            next_id: 1,
            timeout: Duration::from_millis(timeout_ms),
        }
    }

    fn call(&mut self, op: Op, task: Option<TaskName>, frame: &FrameRecord) -> Result<Response, BackendError> {
        let path = frame
            .source_path()
            .ok_or_else(|| BackendError::Unsupported(format!("frame {} has no image path", frame.index)))?;
        let id = self.next_id;
        self.next_id += 1;
        let request = Request { id, op, task, image: ImageRef { path: path.to_string_lossy().into_owned() } };

        let writer = self.writer.as_mut().ok_or(BackendError::PeerExited)?;
        let mut line = request.encode();
        line.push('\n');
        writer.write_all(line.as_bytes()).and_then(|_| writer.flush()).map_err(|e| match e.kind() {
            io::ErrorKind::BrokenPipe => BackendError::PeerExited,
            _ => BackendError::Io(e),
        })?;

        let deadline = Instant::now() + self.timeout;
        let reply = loop {
            let left = deadline.saturating_duration_since(Instant::now());
            match self.lines.recv_timeout(left) {
                Ok(Ok(text)) if text.trim().is_empty() => continue,
                Ok(Ok(text)) => break text,
                Ok(Err(e)) => return Err(BackendError::Io(e)),
                Err(RecvTimeoutError::Timeout) => return Err(BackendError::Timeout(self.timeout.as_millis() as u64)),
                Err(RecvTimeoutError::Disconnected) => return Err(BackendError::PeerExited),
            }
        };

        let response = Response::decode(&reply).map_err(BackendError::Malformed)?;
        match response {
            Response::Error { id: got, error } if got.is_none() || got == Some(id) => {
                Err(BackendError::Remote { code: error.code, message: error.message })
            }
            other if other.id() != Some(id) => Err(BackendError::IdMismatch { expected: id, got: other.id() }),
            other => Ok(other),
        }
    }
}

impl DetectorBackend for WireBackend {
    fn detect(&mut self, frame: &FrameRecord, task: Option<TaskName>) -> Result<Vec<Detection>, BackendError> {
        match self.call(Op::Detect, task, frame)? {
            Response::Detect { detections, .. } => detections
                .into_iter()
                .map(|d| {
                    d.check().map_err(BackendError::Malformed)?;
                    Ok(d.on_frame(frame.index))
                })
                .collect(),
            other => Err(BackendError::Malformed(format!("expected detections, got {}", other.encode()))),
        }
    }

    fn ocr(&mut self, frame: &FrameRecord) -> Result<Option<OcrResult>, BackendError> {
        match self.call(Op::Ocr, None, frame)? {
            Response::Ocr { result, .. } => {
                if let Some(r) = &result {
                    check_ocr(r).map_err(BackendError::Malformed)?;
                }
                Ok(result)
            }
            other => Err(BackendError::Malformed(format!("expected ocr result, got {}", other.encode()))),
        }
    }
}

impl Drop for WireBackend {
    fn drop(&mut self) {
        // closing stdin is the adapter's shutdown signal
        self.writer.take();
        if let Some(mut child) = self.child.take() {
            let give_up = Instant::now() + Duration::from_millis(500);
            while Instant::now() < give_up {
                if let Ok(Some(_)) = child.try_wait() {
                    return;
                }
                thread::sleep(Duration::from_millis(10));
            }
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}
