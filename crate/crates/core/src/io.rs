//! File formats: the line-oriented control-net format, OBJ mesh export,
//! and the versioned JSON run report.
//!
//! Net files are plain text so fixtures stay diff-able:
//!
//! ```text
//! bezier-net v1
//! degrees 3 3
//! closed false
//! x y z        (one line per control point, (n+1)(m+1) lines,
//! ...           row-major: i slow, j fast)
//! ```
//!
//! Coordinates are written with Rust's shortest round-trip float
//! formatting, so save followed by load reproduces every bit (seam
//! equality survives serialization).

use std::fmt::Write as _;
use std::path::Path;

use crate::bezier::{classify_closedness, Closedness, ControlNet};
use crate::error::{Error, Result};
use crate::mesh::TriMesh;
use crate::pipeline::{certified_level, LevelRecord, RunConfig};
use crate::point::Point3;

const NET_HEADER: &str = "bezier-net v1";

/// Serialize a net in the text format, classifying its closedness.
pub fn net_to_string(net: &ControlNet) -> Result<String> {
    let closedness = classify_closedness(net)?;
    let mut out = String::new();
    let _ = writeln!(out, "{NET_HEADER}");
    let _ = writeln!(out, "degrees {} {}", net.degree_u(), net.degree_v());
    let _ = writeln!(out, "closed {}", closedness == Closedness::ClosedTorus);
    for i in 0..net.rows() {
        for j in 0..net.cols() {
            let p = net.at(i, j);
            let _ = writeln!(out, "{} {} {}", p.x, p.y, p.z);
        }
    }
    Ok(out)
}

/// Parse the text format. The declared closedness must match the
/// classification computed from the points.
pub fn net_from_string(text: &str) -> Result<ControlNet> {
    let mut lines = text.lines().enumerate();
    let mut next_line = |expect: &str| -> Result<(usize, &str)> {
        lines
            .next()
            .map(|(k, l)| (k + 1, l.trim()))
            .ok_or_else(|| Error::Parse { line: 0, message: format!("missing {expect}") })
    };

    let (lineno, header) = next_line("header")?;
    if header != NET_HEADER {
        return Err(Error::Parse {
            line: lineno,
            message: format!("expected `{NET_HEADER}`, found `{header}`"),
        });
    }
    let (lineno, degrees) = next_line("degrees line")?;
    let (n, m) = match degrees.strip_prefix("degrees ") {
        Some(rest) => {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    message: "degrees line needs two integers".into(),
                });
            }
            let parse = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad degree `{s}`"),
                })
            };
            (parse(parts[0])?, parse(parts[1])?)
        }
        None => {
            return Err(Error::Parse { line: lineno, message: "expected `degrees n m`".into() })
        }
    };
    let (lineno, closed_line) = next_line("closed line")?;
    let declared_closed = match closed_line.strip_prefix("closed ") {
        Some("true") => true,
        Some("false") => false,
        _ => {
            return Err(Error::Parse {
                line: lineno,
                message: "expected `closed true` or `closed false`".into(),
            })
        }
    };

    let expected = (n + 1) * (m + 1);
    let mut points = Vec::with_capacity(expected);
    let mut last_line = lineno;
    for (k, line) in lines {
        let lineno = k + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut coords = [0.0f64; 3];
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 3 coordinates, found {}", parts.len()),
            });
        }
        for (slot, token) in coords.iter_mut().zip(&parts) {
            *slot = token.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad coordinate `{token}`"),
            })?;
        }
        points.push(Point3::new(coords[0], coords[1], coords[2]));
        if points.len() > expected {
            return Err(Error::CountMismatch { expected, got: points.len() });
        }
    }
    if points.len() != expected {
        return Err(Error::CountMismatch { expected, got: points.len() });
    }
    let _ = last_line;
    let net = ControlNet::new(n + 1, m + 1, points)?;

    let computed = classify_closedness(&net).map_err(|_| {
        let hint = if crate::bezier::almost_closed(&net, 1e-6) {
            " (seams agree only approximately; closed nets need exact coordinate equality)"
        } else {
            ""
        };
        Error::ClosednessMismatch(format!(
            "net matches neither the open nor the closed seam pattern{hint}"
        ))
    })?;
    let computed_closed = computed == Closedness::ClosedTorus;
    if computed_closed != declared_closed {
        return Err(Error::ClosednessMismatch(format!(
            "file declares closed={declared_closed} but the points classify as closed={computed_closed}"
        )));
    }
    Ok(net)
}

/// Load a net file.
pub fn load_net(path: impl AsRef<Path>) -> Result<ControlNet> {
    let text = std::fs::read_to_string(path)?;
    net_from_string(&text)
}

/// Save a net file.
pub fn save_net(net: &ControlNet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, net_to_string(net)?)?;
    Ok(())
}

/// Mesh export formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Obj,
}

/// Serialize a mesh. OBJ: `v x y z` per vertex in index order, then
/// 1-based `f a b c` per triangle, orientation preserved.
pub fn export_mesh(mesh: &TriMesh, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Obj => {
            let mut out = String::new();
            let _ = writeln!(out, "# control surface: {} vertices, {} triangles",
                mesh.vertex_count(), mesh.triangle_count());
            for p in mesh.positions() {
                let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
            }
            for t in mesh.triangles() {
                let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
            }
            out.into_bytes()
        }
    }
}

/// Versioned JSON report of one pipeline run. Field order is fixed by the
/// struct layout, so identical runs serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RunReport<'a> {
    pub schema_version: u32,
    pub degree_u: usize,
    pub degree_v: usize,
    pub closedness: Closedness,
    pub config: &'a RunConfig,
    pub certified_level: Option<usize>,
    pub levels: &'a [LevelRecord],
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Render a run as pretty-printed JSON.
pub fn write_report(
    net: &ControlNet,
    config: &RunConfig,
    records: &[LevelRecord],
) -> Result<String> {
    let report = RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        degree_u: net.degree_u(),
        degree_v: net.degree_v(),
        closedness: classify_closedness(net)?,
        config,
        certified_level: certified_level(records),
        levels: records,
    };
    serde_json::to_string_pretty(&report)
        .map_err(|e| Error::InvalidArgument(format!("report serialization failed: {e}")))
}
