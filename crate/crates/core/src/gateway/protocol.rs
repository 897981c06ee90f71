//! Newline-delimited JSON messages exchanged with an out-of-process detector.
//!
//! ```text
//! request:  {"id":1,"op":"detect","task":"teat_shape","image":{"path":"f.png"}}
//! detect:   {"id":1,"detections":[{"bbox":[x,y,w,h],"class_id":0,"score":0.9}]}
//! ocr:      {"id":2,"text":"42","confidence":0.98,"bbox":[x,y,w,h]}  or  {"id":2,"text":null}
//! error:    {"id":3,"error":{"code":"bad_request","message":"..."}}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::RawDetection;
use crate::annotation::TaskName;
use crate::keyframe::OcrResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Detect,
    Ocr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRef {
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub id: u64,
    pub op: Op,
    pub task: Option<TaskName>,
    pub image: ImageRef,
}

impl Request {
    pub fn encode(&self) -> String {
        serde_json::to_string(self).expect("request serializes")
    }

    pub fn decode(line: &str) -> Result<Self, String> {
        serde_json::from_str(line).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Response {
    Detect { id: u64, detections: Vec<RawDetection> },
    Ocr { id: u64, result: Option<OcrResult> },
    Error { id: Option<u64>, error: ErrorBody },
}

#[derive(Serialize)]
struct DetectOut<'a> {
    id: u64,
    detections: &'a [RawDetection],
}

#[derive(Serialize)]
struct OcrOut<'a> {
    id: u64,
    #[serde(flatten)]
    result: &'a OcrResult,
}

#[derive(Serialize)]
struct OcrNoneOut {
    id: u64,
    text: Option<String>,
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    id: Option<u64>,
    error: &'a ErrorBody,
}

impl Response {
    pub fn id(&self) -> Option<u64> {
        match self {
            Response::Detect { id, .. } | Response::Ocr { id, .. } => Some(*id),
            Response::Error { id, .. } => *id,
        }
    }

    /// One line of JSON, without the trailing newline.
    pub fn encode(&self) -> String {
        let out = match self {
            Response::Detect { id, detections } => serde_json::to_string(&DetectOut { id: *id, detections }),
            Response::Ocr { id, result: Some(result) } => serde_json::to_string(&OcrOut { id: *id, result }),
            Response::Ocr { id, result: None } => serde_json::to_string(&OcrNoneOut { id: *id, text: None }),
            Response::Error { id, error } => serde_json::to_string(&ErrorOut { id: *id, error }),
        };
        out.expect("response serializes")
    }

    pub fn decode(line: &str) -> Result<Self, String> {
        let value: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let Value::Object(obj) = value else {
            return Err("response is not a JSON object".into());
        };
        let id = match obj.get("id") {
            Some(Value::Null) | None => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| format!("bad id {v}"))?),
        };
        if let Some(error) = obj.get("error") {
            let error = ErrorBody::deserialize(error).map_err(|e| format!("error body: {e}"))?;
            return Ok(Response::Error { id, error });
        }
        let id = id.ok_or("response without id")?;
        if let Some(dets) = obj.get("detections") {
            let detections = Vec::<RawDetection>::deserialize(dets).map_err(|e| format!("detections: {e}"))?;
            return Ok(Response::Detect { id, detections });
        }
        match obj.get("text") {
            Some(Value::Null) => Ok(Response::Ocr { id, result: None }),
            Some(_) => {
                let mut rest: Map<String, Value> = obj;
                rest.remove("id");
                let result = OcrResult::deserialize(Value::Object(rest)).map_err(|e| format!("ocr: {e}"))?;
                Ok(Response::Ocr { id, result: Some(result) })
            }
            None => Err("response has none of error/detections/text".into()),
        }
    }
}
