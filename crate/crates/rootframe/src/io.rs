//! Frame and report interchange documents: strict, versioned JSON with a
//! canonical writer, so saved fixtures double as golden files.
//!
//! Canonical form: fields in declaration order, two-space indentation, every
//! float written as a 17-significant-digit decimal (`{:.16e}`), which
//! round-trips any finite `f64` bit-exactly. Map-valued report fields use
//! sorted keys. Two writes of equal values are byte-identical.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::closure::{ClosureResult, ClosureStatus, RootFrameVerdict};
use crate::error::{Error, Result};
use crate::frame_analysis::Frame;
use crate::tol;

pub const FORMAT_VERSION: u32 = 1;

/// Interchange document for a frame: dimension, row-major vectors, optional
/// weights, an optional provenance tag, and the optional separating
/// functional that selected the vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    pub format_version: u32,
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<Vec<f64>>,
}

impl FrameDocument {
    /// Canonical document for a frame. Unit weights are left implicit so the
    /// common unweighted case stays minimal.
    pub fn from_frame(f: &Frame, tag: Option<&str>, beta: Option<&DVector<f64>>) -> Self {
        let weights = if f.weights().iter().any(|&w| w != 1.0) {
            Some(f.weights().to_vec())
        } else {
            None
        };
        FrameDocument {
            format_version: FORMAT_VERSION,
            dim: f.dim(),
            vectors: f.vectors().iter().map(|v| v.iter().copied().collect()).collect(),
            weights,
            tag: tag.map(str::to_owned),
            beta: beta.map(|b| b.iter().copied().collect()),
        }
    }

    pub fn to_frame(&self) -> Result<Frame> {
        self.validate()?;
        let vectors: Vec<DVector<f64>> =
            self.vectors.iter().map(|row| DVector::from_column_slice(row)).collect();
        Frame::new(self.dim, vectors, self.weights.clone())
            .map_err(|e| Error::Validation(e.to_string()))
    }

    pub fn beta_vector(&self) -> Option<DVector<f64>> {
        self.beta.as_ref().map(|b| DVector::from_column_slice(b))
    }

    fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Version { found: self.format_version, expected: FORMAT_VERSION });
        }
        if self.dim == 0 {
            return Err(Error::Validation("dim must be positive".into()));
        }
        if self.vectors.is_empty() {
            return Err(Error::Validation("vectors must contain at least one row".into()));
        }
        for (k, row) in self.vectors.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::Validation(format!(
                    "vectors[{k}]: expected {} entries, found {}",
                    self.dim,
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation(format!("vectors[{k}]: non-finite entry")));
            }
            if row.iter().map(|x| x * x).sum::<f64>().sqrt() <= tol::ZERO_NORM {
                return Err(Error::Validation(format!(
                    "vectors[{k}]: zero vector (norm at or below {:e})",
                    tol::ZERO_NORM
                )));
            }
        }
        if let Some(weights) = &self.weights {
            if weights.len() != self.vectors.len() {
                return Err(Error::Validation(format!(
                    "weights: expected {} entries, found {}",
                    self.vectors.len(),
                    weights.len()
                )));
            }
            for (k, &w) in weights.iter().enumerate() {
                if !w.is_finite() || w <= 0.0 {
                    return Err(Error::Validation(format!(
                        "weights[{k}]: must be a positive finite number, found {w}"
                    )));
                }
            }
        }
        if let Some(beta) = &self.beta {
            if beta.len() != self.dim {
                return Err(Error::Validation(format!(
                    "beta: expected {} entries, found {}",
                    self.dim,
                    beta.len()
                )));
            }
            if beta.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation("beta: non-finite entry".into()));
            }
        }
        Ok(())
    }
}

/// A parsed frame document together with the validated [`Frame`] it denotes.
#[derive(Debug, Clone)]
pub struct LoadedFrame {
    pub frame: Frame,
    pub document: FrameDocument,
}

/// One failed check: which check, the indices involved, and the offending
/// vector's coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureWitness {
    pub kind: String,
    pub indices: Vec<usize>,
    pub vector: Vec<f64>,
}

/// Closure outcome as it appears inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureBlock {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<String>,
    pub orbit_size: usize,
    pub iterations: usize,
    pub growth_trace: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub group_order: Option<usize>,
    pub duplicates_collapsed: usize,
}

impl ClosureBlock {
    pub fn from_result(result: &ClosureResult, verdict: Option<RootFrameVerdict>) -> Self {
        ClosureBlock {
            status: match result.status {
                ClosureStatus::Closed => "closed".into(),
                ClosureStatus::CapExceeded => "cap_exceeded".into(),
            },
            verdict: verdict.map(|v| {
                match v {
                    RootFrameVerdict::Yes => "yes",
                    RootFrameVerdict::NoSpan => "no_span",
                    RootFrameVerdict::UnknownCap => "unknown_cap",
                }
                .into()
            }),
            orbit_size: result.orbit_size,
            iterations: result.iterations,
            growth_trace: result.growth_trace.clone(),
            group_order: result.group_order,
            duplicates_collapsed: result.duplicates_collapsed,
        }
    }
}

/// Structured analysis report: named boolean verdicts, the eigenvalue
/// clusters as `[lambda, multiplicity]` pairs, the worst residual per check
/// class, failure witnesses, and an optional closure block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub format_version: u32,
    /// Digest of the canonical bytes of the subject frame document.
    pub subject: String,
    pub verdicts: BTreeMap<String, bool>,
    pub eigen_clusters: Vec<(f64, usize)>,
    pub residuals: BTreeMap<String, f64>,
    pub failures: Vec<FailureWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closure: Option<ClosureBlock>,
}

impl ReportDocument {
    pub fn new(subject: String) -> Self {
        ReportDocument {
            format_version: FORMAT_VERSION,
            subject,
            verdicts: BTreeMap::new(),
            eigen_clusters: Vec::new(),
            residuals: BTreeMap::new(),
            failures: Vec::new(),
            closure: None,
        }
    }

    fn validate(&self) -> Result<()> {
        let all_finite = self.residuals.values().all(|x| x.is_finite())
            && self.eigen_clusters.iter().all(|(lambda, _)| lambda.is_finite())
            && self
                .failures
                .iter()
                .all(|w| w.vector.iter().all(|x| x.is_finite()));
        if all_finite {
            Ok(())
        } else {
            Err(Error::Validation("report contains a non-finite number".into()))
        }
    }
}

/// Pretty JSON writer whose only deviation from the stock pretty formatter
/// is the fixed `{:.16e}` float representation.
struct CanonicalFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl CanonicalFormatter {
    fn new() -> Self {
        CanonicalFormatter { inner: serde_json::ser::PrettyFormatter::new() }
    }
}

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

fn canonical_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, CanonicalFormatter::new());
    value.serialize(&mut ser).map_err(|e| Error::Io(io::Error::other(e)))?;
    buf.push(b'\n');
    Ok(buf)
}

/// `sha256:<hex>` digest of a frame document's canonical bytes; the stable
/// identity a report uses to name its subject.
pub fn frame_digest(doc: &FrameDocument) -> Result<String> {
    let bytes = canonical_bytes(doc)?;
    let mut out = String::with_capacity(7 + 64);
    out.push_str("sha256:");
    for byte in Sha256::digest(&bytes) {
        use std::fmt::Write as _;
        write!(out, "{byte:02x}").expect("writing to a String cannot fail");
    }
    Ok(out)
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

/// Parses and validates a frame document from text. The version gate runs
/// before strict field checking so an unsupported version is reported as
/// such rather than as an unknown field.
pub fn parse_frame(text: &str) -> Result<LoadedFrame> {
    let probe: VersionProbe =
        serde_json::from_str(text).map_err(|e| classify_json_error(&e))?;
    if probe.format_version != FORMAT_VERSION {
        return Err(Error::Version { found: probe.format_version, expected: FORMAT_VERSION });
    }
    let document: FrameDocument =
        serde_json::from_str(text).map_err(|e| classify_json_error(&e))?;
    let frame = document.to_frame()?;
    Ok(LoadedFrame { frame, document })
}

fn classify_json_error(e: &serde_json::Error) -> Error {
    if e.is_data() {
        Error::Validation(e.to_string())
    } else {
        Error::Parse(e.to_string())
    }
}

pub fn load_frame(mut reader: impl Read) -> Result<LoadedFrame> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_frame(&text)
}

/// Writes the canonical form; [`parse_frame`] of the output reproduces every
/// numeric payload bit-for-bit.
pub fn save_frame(doc: &FrameDocument, mut writer: impl Write) -> Result<()> {
    doc.validate()?;
    writer.write_all(&canonical_bytes(doc)?)?;
    Ok(())
}

pub fn emit_report(report: &ReportDocument, mut writer: impl Write) -> Result<()> {
    report.validate()?;
    writer.write_all(&canonical_bytes(report)?)?;
    Ok(())
}
