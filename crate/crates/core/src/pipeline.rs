//! Subdivision driver: iterate levels, weld meshes, evaluate certificates
//! and curvature reports, and collect per-level convergence series.

use crate::bezier::{
    classify_closedness, subdivide_patch, validate_regularity, BezierPatch, Closedness,
    ControlNet,
};
use crate::checks::{
    self_intersections_with_eps, hausdorff_distance, Certificate, Verdict, GEOM_EPS_FACTOR,
};
use crate::cones::{conditions_for_net, injectivity_conditions};
use crate::curvature::{curvature_report, smooth_report, CurvatureReport, SmoothReport};
use crate::error::{Error, Result};
use crate::mesh::{mesh_from_patches, topology};

/// Knobs for a pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RunConfig {
    /// Deepest subdivision level; capped at 8 (4^8 patches).
    pub max_level: usize,
    /// Gauss-Legendre nodes per direction for the smooth-side integrals.
    pub quad_nodes: usize,
    /// Hausdorff samples per parameter direction.
    pub samples: usize,
    /// Absolute intersection-predicate tolerance; `None` means
    /// `1e-9 x bounding-box diagonal` of each level's mesh.
    pub epsilon: Option<f64>,
    /// Stop as soon as a level is certified.
    pub stop_on_certify: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_level: 5,
            quad_nodes: 64,
            samples: 64,
            epsilon: None,
            stop_on_certify: true,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.max_level > 8 {
            return Err(Error::InvalidArgument(format!(
                "max_level {} exceeds the supported ceiling of 8",
                self.max_level
            )));
        }
        if self.quad_nodes < 16 {
            return Err(Error::InvalidArgument("quad_nodes must be at least 16".into()));
        }
        if self.samples < 32 {
            return Err(Error::InvalidArgument("samples must be at least 32".into()));
        }
        if let Some(eps) = self.epsilon {
            if eps <= 0.0 {
                return Err(Error::InvalidArgument("epsilon must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Worst cone spans across all patches (and seam fragments) of a level.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConeSpans {
    pub theta_n: f64,
    pub theta_u: f64,
    pub theta_v: f64,
}

/// Everything measured at one subdivision level.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub patch_count: usize,
    pub hausdorff: f64,
    pub max_cone_spans: ConeSpans,
    pub certificate: Certificate,
    pub curvature: CurvatureReport,
}

/// Run the subdivision pipeline on a net.
///
/// For each level up to `max_level` (or until certified, when
/// `stop_on_certify`): subdivide every patch, weld the control mesh,
/// evaluate the injectivity conditions on each patch and seam fragment,
/// run the intersection oracle and topology check, measure the Hausdorff
/// proxy, and assemble the curvature report. Deterministic given the net
/// and config.
pub fn run(net: &ControlNet, config: &RunConfig) -> Result<Vec<LevelRecord>> {
    config.validate()?;
    let closedness = classify_closedness(net)?;
    let violations = validate_regularity(net, 1e-12);
    if !violations.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "net fails regularity validation: {} violation(s), first: {:?}",
            violations.len(),
            violations[0]
        )));
    }
    let smooth: Option<SmoothReport> = match closedness {
        Closedness::Open => Some(smooth_report(net, config.quad_nodes)?),
        Closedness::ClosedTorus => None,
    };

    let mut records = Vec::with_capacity(config.max_level + 1);
    let mut patches = vec![BezierPatch::whole(net.clone())];
    for level in 0..=config.max_level {
        if level > 0 {
            patches = patches.iter().flat_map(subdivide_patch).collect();
        }
        let record = run_level(net, &patches, closedness, smooth, level, config)
            .map_err(|e| e.at_level(level))?;
        let certified = record.certificate.verdict == Verdict::Certified;
        records.push(record);
        if certified && config.stop_on_certify {
            break;
        }
    }
    Ok(records)
}

fn run_level(
    net: &ControlNet,
    patches: &[BezierPatch],
    closedness: Closedness,
    smooth: Option<SmoothReport>,
    level: usize,
    config: &RunConfig,
) -> Result<LevelRecord> {
    let mut spans = ConeSpans { theta_n: 0.0, theta_u: 0.0, theta_v: 0.0 };
    let mut conditions_pass = true;
    let mut fold = |v: crate::cones::InjectivityVerdict| {
        spans.theta_n = spans.theta_n.max(v.theta_n);
        spans.theta_u = spans.theta_u.max(v.theta_u);
        spans.theta_v = spans.theta_v.max(v.theta_v);
        conditions_pass &= v.all_pass();
    };
    for patch in patches {
        fold(injectivity_conditions(patch)?);
    }
    if closedness == Closedness::ClosedTorus {
        for fragment in crate::cones::seam_merged_nets(patches)? {
            fold(conditions_for_net(&fragment)?);
        }
    }

    let mesh = mesh_from_patches(patches, closedness)?;
    let eps = config.epsilon.unwrap_or(GEOM_EPS_FACTOR * mesh.bbox_diagonal());
    let oracle_clear = self_intersections_with_eps(&mesh, eps).is_empty();
    let topo = topology(&mesh)?;
    let topology_match = match closedness {
        Closedness::Open => topo.euler_char == 1 && topo.boundary_loops == 1 && topo.orientable,
        Closedness::ClosedTorus => {
            topo.euler_char == 0 && topo.boundary_loops == 0 && topo.orientable
        }
    };
    let hausdorff = hausdorff_distance(&mesh, net, config.samples)?;
    let verdict = if conditions_pass && oracle_clear && topology_match {
        Verdict::Certified
    } else {
        Verdict::NotYet
    };
    let certificate = Certificate {
        level,
        conditions_pass,
        oracle_clear,
        hausdorff,
        topology_match,
        verdict,
    };
    let curvature = curvature_report(&mesh, smooth)?;
    Ok(LevelRecord {
        level,
        patch_count: patches.len(),
        hausdorff,
        max_cone_spans: spans,
        certificate,
        curvature,
    })
}

/// First certified level of a run, if any.
pub fn certified_level(records: &[LevelRecord]) -> Option<usize> {
    records
        .iter()
        .find(|r| r.certificate.verdict == Verdict::Certified)
        .map(|r| r.level)
}

/// One row of the convergence summary. Ratios are `value / previous`;
/// `None` is the exact-zero sentinel (previous value was zero).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SummaryRow {
    pub level: usize,
    pub hausdorff: f64,
    pub hausdorff_ratio: Option<f64>,
    pub theta_n: f64,
    pub theta_n_ratio: Option<f64>,
    pub residual: f64,
    pub residual_ratio: Option<f64>,
}

/// Per-level ratio table for the Hausdorff distance, the worst normal-cone
/// span, and the convergence residual, with flags for any series that
/// fails to decrease.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceSummary {
    pub rows: Vec<SummaryRow>,
    /// Names of series with a non-decreasing step somewhere.
    pub flagged: Vec<String>,
}

/// Values below this are treated as exactly zero in ratio series; last-ulp
/// noise from interpolation would otherwise produce meaningless ratios.
const ZERO_FLOOR: f64 = 1e-13;

pub fn convergence_summary(records: &[LevelRecord]) -> Result<ConvergenceSummary> {
    if records.len() < 2 {
        return Err(Error::InvalidArgument("need at least two level records".into()));
    }
    let ratio = |prev: f64, cur: f64| -> Option<f64> {
        if prev.abs() < ZERO_FLOOR {
            None
        } else {
            Some(cur / prev)
        }
    };
    let mut rows = Vec::with_capacity(records.len());
    for (k, rec) in records.iter().enumerate() {
        let prev = if k > 0 { Some(&records[k - 1]) } else { None };
        rows.push(SummaryRow {
            level: rec.level,
            hausdorff: rec.hausdorff,
            hausdorff_ratio: prev.and_then(|p| ratio(p.hausdorff, rec.hausdorff)),
            theta_n: rec.max_cone_spans.theta_n,
            theta_n_ratio: prev.and_then(|p| ratio(p.max_cone_spans.theta_n, rec.max_cone_spans.theta_n)),
            residual: rec.curvature.convergence_residual,
            residual_ratio: prev
                .and_then(|p| ratio(p.curvature.convergence_residual, rec.curvature.convergence_residual)),
        });
    }
    let mut flagged = Vec::new();
    let mut check = |name: &str, values: Vec<f64>| {
        for w in values.windows(2) {
            if w[0] >= ZERO_FLOOR && w[1] >= w[0] {
                flagged.push(name.to_string());
                break;
            }
        }
    };
    check("hausdorff", records.iter().map(|r| r.hausdorff).collect());
    check("theta_n", records.iter().map(|r| r.max_cone_spans.theta_n).collect());
    check(
        "residual",
        records.iter().map(|r| r.curvature.convergence_residual).collect(),
    );
    Ok(ConvergenceSummary { rows, flagged })
}
