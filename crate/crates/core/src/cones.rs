//! Discrete derivatives of the control surface, bounding cones for tangent
//! and normal directions, and the three-cone injectivity test.
//!
//! A patch whose triangle normals fit in a cone of span below pi, and whose
//! normal axis stays clear of both isoparametric tangent cones, cannot
//! self-intersect. The cones built here bound their inputs but are not
//! minimal; the conditions are one-sided, so an over-wide cone can only
//! delay certification, never fake it.

use crate::bezier::{BezierPatch, Closedness, ControlNet};
use crate::error::{Error, Result};
use crate::mesh::{triangulate_net, TriMesh};
use crate::point::Point3;

const DEGENERATE_EPS: f64 = 1e-12;

/// Axis and angular span bounding a set of unit vectors: every input lies
/// within `span / 2` of `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionCone {
    pub axis: Point3,
    pub span: f64,
}

impl DirectionCone {
    /// Bounding cone of a non-empty set of unit vectors.
    ///
    /// Two candidate axes are tried: the normalized mean, and the bisector
    /// of an approximate diameter pair (farthest from the mean, then
    /// farthest from that). The tighter result wins. If the inputs cancel
    /// out the cone degenerates to a full sphere, `span = 2 pi`.
    pub fn bounding(units: &[Point3]) -> DirectionCone {
        assert!(!units.is_empty(), "cannot bound an empty direction set");
        let mean = units.iter().fold(Point3::ZERO, |acc, &u| acc + u) / units.len() as f64;
        let Some(mean_axis) = mean.normalized(1e-9) else {
            return DirectionCone { axis: units[0], span: 2.0 * std::f64::consts::PI };
        };
        let farthest = |from: Point3| -> Point3 {
            let mut best = units[0];
            let mut best_angle = -1.0;
            for &u in units {
                let a = from.angle_between(u);
                if a > best_angle {
                    best_angle = a;
                    best = u;
                }
            }
            best
        };
        let v = farthest(mean_axis);
        let w = farthest(v);
        let mut candidates = vec![mean_axis];
        if let Some(bisector) = (v + w).normalized(1e-9) {
            candidates.push(bisector);
        }
        let mut best = DirectionCone { axis: mean_axis, span: f64::INFINITY };
        for axis in candidates {
            let max_dev = units.iter().map(|u| axis.angle_between(*u)).fold(0.0, f64::max);
            let span = (2.0 * max_dev).min(2.0 * std::f64::consts::PI);
            if span < best.span {
                best = DirectionCone { axis, span };
            }
        }
        best
    }

    /// Containment test with the crate-wide angular slack.
    pub fn contains(&self, unit: Point3) -> bool {
        self.axis.angle_between(unit) <= self.span / 2.0 + 1e-9
    }
}

/// Discrete partial derivatives of the control surface at grid point
/// `(i, j)` of a patch: scaled forward differences (backward at the far
/// edge), normalized by the patch's global parameter width so values are
/// comparable across subdivision levels.
pub fn discrete_derivatives(patch: &BezierPatch, i: usize, j: usize) -> (Point3, Point3) {
    let net = &patch.net;
    let n = net.degree_u();
    let m = net.degree_v();
    assert!(i <= n && j <= m, "grid index ({i}, {j}) out of range");
    let du = if i < n { net.at(i + 1, j) - net.at(i, j) } else { net.at(n, j) - net.at(n - 1, j) };
    let dv = if j < m { net.at(i, j + 1) - net.at(i, j) } else { net.at(i, m) - net.at(i, m - 1) };
    (
        du * (n as f64 / patch.domain.width_u()),
        dv * (m as f64 / patch.domain.width_v()),
    )
}

fn unit_differences(net: &ControlNet, along_u: bool) -> Result<Vec<Point3>> {
    let scale = net.bbox_diagonal().max(f64::MIN_POSITIVE);
    let (imax, jmax) = if along_u {
        (net.degree_u(), net.degree_v() + 1)
    } else {
        (net.degree_u() + 1, net.degree_v())
    };
    let mut out = Vec::with_capacity(imax * jmax);
    for i in 0..imax {
        for j in 0..jmax {
            let d = if along_u { net.at(i + 1, j) - net.at(i, j) } else { net.at(i, j + 1) - net.at(i, j) };
            let unit = d.normalized(DEGENERATE_EPS * scale).ok_or_else(|| {
                Error::DegenerateDerivative(format!(
                    "zero difference vector at ({i}, {j}) along {}",
                    if along_u { "u" } else { "v" }
                ))
            })?;
            out.push(unit);
        }
    }
    Ok(out)
}

/// Cones bounding the directions of all forward control-point differences
/// of a net, per isoparametric direction.
pub fn tangent_cones_for_net(net: &ControlNet) -> Result<(DirectionCone, DirectionCone)> {
    Ok((
        DirectionCone::bounding(&unit_differences(net, true)?),
        DirectionCone::bounding(&unit_differences(net, false)?),
    ))
}

/// Isoparametric tangent bounding cones of a patch.
pub fn tangent_cones(patch: &BezierPatch) -> Result<(DirectionCone, DirectionCone)> {
    tangent_cones_for_net(&patch.net)
}

/// Cone bounding the unit normals of all triangles of a mesh fragment.
/// Normals follow the triangles' stored (parameter-counterclockwise)
/// orientation.
pub fn normal_cone(mesh: &TriMesh) -> Result<DirectionCone> {
    let scale = mesh.bbox_diagonal().max(f64::MIN_POSITIVE);
    let mut normals = Vec::with_capacity(mesh.triangle_count());
    for t in 0..mesh.triangle_count() {
        let [a, b, c] = mesh.triangle_points(t);
        let n = (b - a).cross(c - a);
        let unit = n.normalized(DEGENERATE_EPS * scale * scale).ok_or_else(|| {
            Error::DegenerateTriangle(format!("triangle {t} has vanishing area"))
        })?;
        normals.push(unit);
    }
    if normals.is_empty() {
        return Err(Error::InvalidArgument("mesh fragment has no triangles".into()));
    }
    Ok(DirectionCone::bounding(&normals))
}

/// Outcome of the three-cone injectivity test on one patch (or merged
/// seam fragment).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectivityVerdict {
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub theta_n: f64,
    pub theta_u: f64,
    pub theta_v: f64,
    /// Signed slack per condition: `pi - theta_n`,
    /// `cos(theta_u/2) - |a_n . a_u|`, `cos(theta_v/2) - |a_n . a_v|`.
    pub margins: [f64; 3],
}

impl InjectivityVerdict {
    pub fn all_pass(&self) -> bool {
        self.cond_i && self.cond_ii && self.cond_iii
    }
}

/// Evaluate the injectivity conditions on an arbitrary net fragment.
pub fn conditions_for_net(net: &ControlNet) -> Result<InjectivityVerdict> {
    let (cone_u, cone_v) = tangent_cones_for_net(net)?;
    let fragment = triangulate_net(net, Closedness::Open)?;
    let cone_n = normal_cone(&fragment)?;
    let margin_i = std::f64::consts::PI - cone_n.span;
    let margin_ii = (cone_u.span / 2.0).cos() - cone_n.axis.dot(cone_u.axis).abs();
    let margin_iii = (cone_v.span / 2.0).cos() - cone_n.axis.dot(cone_v.axis).abs();
    Ok(InjectivityVerdict {
        cond_i: margin_i > 0.0,
        cond_ii: margin_ii > 0.0,
        cond_iii: margin_iii > 0.0,
        theta_n: cone_n.span,
        theta_u: cone_u.span,
        theta_v: cone_v.span,
        margins: [margin_i, margin_ii, margin_iii],
    })
}

/// The injectivity conditions on one patch of the subdivision.
pub fn injectivity_conditions(patch: &BezierPatch) -> Result<InjectivityVerdict> {
    conditions_for_net(&patch.net)
}

/// Glue two patch nets that meet across the u-seam (`a` ends at u = 1,
/// `b` begins at u = 0) into one fragment covering both.
fn merge_along_u(a: &BezierPatch, b: &BezierPatch) -> Result<ControlNet> {
    let n = a.net.degree_u();
    let m = a.net.degree_v();
    let scale = a.net.bbox_diagonal().max(f64::MIN_POSITIVE);
    for j in 0..=m {
        if a.net.at(n, j).distance(b.net.at(0, j)) > 1e-12 * scale {
            return Err(Error::SeamMismatch(format!("u-seam fragments disagree at column {j}")));
        }
    }
    ControlNet::from_fn(2 * n + 1, m + 1, |i, j| {
        if i <= n {
            a.net.at(i, j)
        } else {
            b.net.at(i - n, j)
        }
    })
}

/// As [`merge_along_u`] for the v-seam.
fn merge_along_v(a: &BezierPatch, b: &BezierPatch) -> Result<ControlNet> {
    let n = a.net.degree_u();
    let m = a.net.degree_v();
    let scale = a.net.bbox_diagonal().max(f64::MIN_POSITIVE);
    for i in 0..=n {
        if a.net.at(i, m).distance(b.net.at(i, 0)) > 1e-12 * scale {
            return Err(Error::SeamMismatch(format!("v-seam fragments disagree at row {i}")));
        }
    }
    ControlNet::from_fn(n + 1, 2 * m + 1, |i, j| {
        if j <= m {
            a.net.at(i, j)
        } else {
            b.net.at(i, j - m)
        }
    })
}

/// Merged fragments straddling the two seams of a closed surface at one
/// subdivision level. Patch injectivity alone says nothing about the glued
/// boundary, so certification also evaluates the conditions on each pair
/// of patches meeting across a seam.
pub fn seam_merged_nets(patches: &[BezierPatch]) -> Result<Vec<ControlNet>> {
    let first = patches
        .first()
        .ok_or_else(|| Error::InvalidArgument("no patches supplied".into()))?;
    let wu = first.domain.width_u();
    let wv = first.domain.width_v();
    let gu = (1.0 / wu).round() as usize;
    let gv = (1.0 / wv).round() as usize;
    let mut by_cell: Vec<Option<&BezierPatch>> = vec![None; gu * gv];
    for p in patches {
        let a = (p.domain.u0 / wu).round() as usize;
        let b = (p.domain.v0 / wv).round() as usize;
        if a >= gu || b >= gv || by_cell[a * gv + b].is_some() {
            return Err(Error::InvalidTiling("patches do not form a regular grid".into()));
        }
        by_cell[a * gv + b] = Some(p);
    }
    let cell = |a: usize, b: usize| by_cell[a * gv + b].unwrap();
    let mut merged = Vec::with_capacity(gu + gv);
    for b in 0..gv {
        merged.push(merge_along_u(cell(gu - 1, b), cell(0, b))?);
    }
    for a in 0..gu {
        merged.push(merge_along_v(cell(a, gv - 1), cell(a, 0))?);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezier::{subdivide_patch, surface_derivatives};
    use crate::samples;
    use std::f64::consts::PI;

    fn max_pairwise_angle(units: &[Point3]) -> f64 {
        let mut best: f64 = 0.0;
        for (k, a) in units.iter().enumerate() {
            for b in &units[k + 1..] {
                best = best.max(a.angle_between(*b));
            }
        }
        best
    }

    #[test]
    fn cone_contains_all_inputs() {
        let dirs: Vec<Point3> = (0..20)
            .map(|k| {
                let t = k as f64 / 19.0;
                Point3::new((0.4 * t).cos(), (0.4 * t).sin(), 0.3 * t).normalized(0.0).unwrap()
            })
            .collect();
        let cone = DirectionCone::bounding(&dirs);
        assert!((cone.axis.norm() - 1.0).abs() < 1e-12);
        for d in &dirs {
            assert!(cone.contains(*d));
        }
    }

    #[test]
    fn cone_of_antipodal_set_is_full() {
        let dirs = [Point3::new(1.0, 0.0, 0.0), Point3::new(-1.0, 0.0, 0.0)];
        let cone = DirectionCone::bounding(&dirs);
        assert_eq!(cone.span, 2.0 * PI);
    }

    #[test]
    fn flat_net_tangent_cones_have_zero_span() {
        let patch = BezierPatch::whole(samples::flat_net(3, 3));
        let (cu, cv) = tangent_cones(&patch).unwrap();
        assert!(cu.span < 1e-12);
        assert!(cv.span < 1e-12);
    }

    #[test]
    fn span_bounded_by_pairwise_oracle_on_fanlike_sets() {
        for net in [samples::dome_net(0.4), samples::saddle_net(0.4), samples::flat_net(3, 3)] {
            let mut patches = vec![BezierPatch::whole(net)];
            for _ in 0..3 {
                for p in &patches {
                    for along_u in [true, false] {
                        let dirs = unit_differences(&p.net, along_u).unwrap();
                        let cone = DirectionCone::bounding(&dirs);
                        let oracle = max_pairwise_angle(&dirs);
                        assert!(
                            cone.span <= oracle + 1e-9,
                            "span {} exceeds pairwise max {}",
                            cone.span,
                            oracle
                        );
                    }
                }
                patches = patches.iter().flat_map(subdivide_patch).collect();
            }
        }
    }

    #[test]
    fn subdividing_shrinks_tangent_spans() {
        for net in [samples::dome_net(0.5), samples::saddle_net(0.5)] {
            let parent = BezierPatch::whole(net);
            let (pu, pv) = tangent_cones(&parent).unwrap();
            for child in subdivide_patch(&parent) {
                let (cu, cv) = tangent_cones(&child).unwrap();
                assert!(cu.span <= pu.span + 1e-9);
                assert!(cv.span <= pv.span + 1e-9);
            }
        }
    }

    #[test]
    fn coplanar_normal_cone_is_degenerate() {
        let mesh = triangulate_net(&samples::flat_net(3, 3), Closedness::Open).unwrap();
        let cone = normal_cone(&mesh).unwrap();
        assert!(cone.span < 1e-12);
    }

    #[test]
    fn orthogonal_normals_force_wide_cone() {
        use crate::mesh::{TriMesh, VertexRole};
        // Three triangles with normals +z, +x, +y.
        let positions = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let triangles = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1]];
        let mesh = TriMesh::new(
            positions,
            vec![(0.0, 0.0); 4],
            vec![VertexRole::Interior; 4],
            triangles,
        )
        .unwrap();
        let cone = normal_cone(&mesh).unwrap();
        assert!(cone.span >= PI / 2.0 - 1e-12);
    }

    #[test]
    fn normal_spans_shrink_under_subdivision() {
        // Monitored series: the per-patch normal-cone span and its
        // brute-force oracle (max pairwise normal angle) both fall toward
        // zero as subdivision flattens the fragments.
        let mut patches = vec![BezierPatch::whole(samples::dome_net(0.6))];
        let mut spans = Vec::new();
        let mut pairwise = Vec::new();
        for _ in 0..=4 {
            let mut worst_span: f64 = 0.0;
            let mut worst_pair: f64 = 0.0;
            for p in &patches {
                let frag = triangulate_net(&p.net, Closedness::Open).unwrap();
                let normals: Vec<Point3> = (0..frag.triangle_count())
                    .map(|t| {
                        let [a, b, c] = frag.triangle_points(t);
                        (b - a).cross(c - a).normalized(0.0).unwrap()
                    })
                    .collect();
                worst_span = worst_span.max(normal_cone(&frag).unwrap().span);
                worst_pair = worst_pair.max(max_pairwise_angle(&normals));
            }
            spans.push(worst_span);
            pairwise.push(worst_pair);
            patches = patches.iter().flat_map(subdivide_patch).collect();
        }
        for series in [&spans, &pairwise] {
            for w in series.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "series grew: {series:?}");
            }
        }
        assert!(
            pairwise[4] < 0.3 * pairwise[0],
            "pairwise normal angles should decay: {pairwise:?}"
        );
    }

    #[test]
    fn flat_patch_verdict_has_wide_margins() {
        let verdict = injectivity_conditions(&BezierPatch::whole(samples::flat_net(3, 3))).unwrap();
        assert!(verdict.all_pass());
        assert!(verdict.theta_n < 1e-12);
        assert!(verdict.margins[1] > 0.99);
        assert!(verdict.margins[2] > 0.99);
    }

    #[test]
    fn overhanging_curl_fails_then_passes() {
        let parent = BezierPatch::whole(samples::curl_net());
        let level0 = injectivity_conditions(&parent).unwrap();
        assert!(!level0.cond_i, "level-0 normal span {} should reach pi", level0.theta_n);

        let mut patches = vec![parent];
        for _ in 0..2 {
            patches = patches.iter().flat_map(subdivide_patch).collect();
        }
        for p in &patches {
            let v = injectivity_conditions(p).unwrap();
            assert!(v.all_pass(), "level-2 sub-patch fails: {v:?}");
        }
    }

    #[test]
    fn verdicts_are_scale_invariant() {
        let net = samples::dome_net(0.5);
        let scaled = ControlNet::from_fn(net.rows(), net.cols(), |i, j| net.at(i, j) * 1000.0).unwrap();
        let a = conditions_for_net(&net).unwrap();
        let b = conditions_for_net(&scaled).unwrap();
        assert_eq!(a.all_pass(), b.all_pass());
        assert!((a.theta_n - b.theta_n).abs() < 1e-9);
        assert!((a.theta_u - b.theta_u).abs() < 1e-9);
        assert!((a.theta_v - b.theta_v).abs() < 1e-9);
    }

    #[test]
    fn discrete_derivatives_linear_exact() {
        let patch = BezierPatch::whole(samples::flat_net(3, 3));
        for i in 0..=3 {
            for j in 0..=3 {
                let (du, dv) = discrete_derivatives(&patch, i, j);
                assert!(du.distance(Point3::new(1.0, 0.0, 0.0)) < 1e-12);
                assert!(dv.distance(Point3::new(0.0, 1.0, 0.0)) < 1e-12);
            }
        }
    }

    #[test]
    fn discrete_derivatives_converge_to_analytic() {
        let net = samples::dome_net(0.5);
        let mut patches = vec![BezierPatch::whole(net.clone())];
        let mut last = f64::INFINITY;
        for _ in 1..=4 {
            patches = patches.iter().flat_map(subdivide_patch).collect();
            let mut worst: f64 = 0.0;
            for p in &patches {
                let n = p.net.degree_u();
                let m = p.net.degree_v();
                for i in 0..=n {
                    for j in 0..=m {
                        let (du, dv) = discrete_derivatives(p, i, j);
                        let (u, v) = p.domain.to_global(i as f64 / n as f64, j as f64 / m as f64);
                        let au = surface_derivatives(&net, u, v, 1, 0);
                        let av = surface_derivatives(&net, u, v, 0, 1);
                        worst = worst.max(du.distance(au)).max(dv.distance(av));
                    }
                }
            }
            assert!(worst < last, "deviation should fall monotonically: {worst} >= {last}");
            last = worst;
        }
    }

    #[test]
    fn degenerate_difference_is_an_error() {
        let mut pts = samples::flat_net(2, 2).points().to_vec();
        pts[3] = pts[0]; // repeat a point along u
        let net = ControlNet::new(3, 3, pts).unwrap();
        assert!(matches!(
            tangent_cones_for_net(&net),
            Err(Error::DegenerateDerivative(_))
        ));
    }

    #[test]
    fn seam_merges_cover_both_seams() {
        let net = samples::torus_net(6, 6, 2.0, 0.7);
        let patches: Vec<_> = subdivide_patch(&BezierPatch::whole(net)).to_vec();
        let merged = seam_merged_nets(&patches).unwrap();
        assert_eq!(merged.len(), 4); // two per seam at a 2x2 grid
        for fragment in &merged {
            assert_eq!(fragment.rows().max(fragment.cols()), 13);
        }
    }
}
