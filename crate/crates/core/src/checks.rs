//! Brute-force geometric oracles: triangle-triangle intersection, mesh
//! self-intersection (grid-pruned, with a naive all-pairs path kept for
//! cross-validation), the sampled Hausdorff proxy between control surface
//! and smooth surface, and the composite embeddedness certificate.

use std::collections::{BTreeMap, BTreeSet};

use crate::bezier::{classify_closedness, eval_surface, subdivide_to_level, BezierPatch, Closedness, ControlNet};
use crate::cones::{conditions_for_net, injectivity_conditions, seam_merged_nets};
use crate::error::{Error, Result};
use crate::mesh::{mesh_from_patches, topology, TriMesh, VertexRole};
use crate::point::Point3;

/// Relative factor for the geometric predicate tolerance: contacts closer
/// than `1e-9 x bounding-box diagonal` are not intersections.
pub const GEOM_EPS_FACTOR: f64 = 1e-9;

/// How two triangles meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum IntersectionKind {
    /// Interiors cross along a segment.
    ProperCrossing,
    /// Coplanar triangles with overlapping interiors.
    CoplanarOverlap,
}

/// One offending triangle pair of a mesh, `tri_a < tri_b`, with a point
/// inside the overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionRecord {
    pub tri_a: usize,
    pub tri_b: usize,
    pub kind: IntersectionKind,
    pub witness: Point3,
}

fn classify_sign(d: f64, eps: f64) -> i8 {
    if d > eps {
        1
    } else if d < -eps {
        -1
    } else {
        0
    }
}

/// The segment (if any) where triangle `tri` crosses the plane with normal
/// `n` through `origin`, as points on the intersection line. Vertices
/// within `eps` of the plane count as lying on it.
fn plane_crossing_points(
    tri: &[Point3; 3],
    signs: [i8; 3],
    dists: [f64; 3],
) -> Vec<Point3> {
    let mut pts = Vec::with_capacity(3);
    for k in 0..3 {
        if signs[k] == 0 {
            pts.push(tri[k]);
        }
        let k2 = (k + 1) % 3;
        if signs[k] * signs[k2] < 0 {
            let t = dists[k] / (dists[k] - dists[k2]);
            pts.push(tri[k] + (tri[k2] - tri[k]) * t);
        }
    }
    pts
}

/// 2D orientation of (a, b, c) after projecting out the dominant axis of
/// `normal`.
fn orient2d(normal: Point3, a: Point3, b: Point3, c: Point3) -> f64 {
    let (ax, ay, bx, by, cx, cy) = {
        let pick = |p: Point3| -> (f64, f64) {
            let nx = normal.x.abs();
            let ny = normal.y.abs();
            let nz = normal.z.abs();
            if nz >= nx && nz >= ny {
                (p.x, p.y)
            } else if ny >= nx {
                (p.x, p.z)
            } else {
                (p.y, p.z)
            }
        };
        let (ax, ay) = pick(a);
        let (bx, by) = pick(b);
        let (cx, cy) = pick(c);
        (ax, ay, bx, by, cx, cy)
    };
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

fn coplanar_overlap(
    t1: &[Point3; 3],
    t2: &[Point3; 3],
    normal: Point3,
    eps: f64,
) -> Option<Point3> {
    let eps2 = eps * normal.norm();
    // A vertex strictly inside the other triangle.
    let strictly_inside = |p: Point3, tri: &[Point3; 3]| -> bool {
        let o0 = orient2d(normal, tri[0], tri[1], p);
        let o1 = orient2d(normal, tri[1], tri[2], p);
        let o2 = orient2d(normal, tri[2], tri[0], p);
        (o0 > eps2 && o1 > eps2 && o2 > eps2) || (o0 < -eps2 && o1 < -eps2 && o2 < -eps2)
    };
    for &p in t2 {
        if strictly_inside(p, t1) {
            return Some(p);
        }
    }
    for &p in t1 {
        if strictly_inside(p, t2) {
            return Some(p);
        }
    }
    // Proper edge-edge crossings.
    for i in 0..3 {
        let (a, b) = (t1[i], t1[(i + 1) % 3]);
        for j in 0..3 {
            let (c, d) = (t2[j], t2[(j + 1) % 3]);
            let o1 = orient2d(normal, a, b, c);
            let o2 = orient2d(normal, a, b, d);
            let o3 = orient2d(normal, c, d, a);
            let o4 = orient2d(normal, c, d, b);
            if ((o1 > eps2 && o2 < -eps2) || (o1 < -eps2 && o2 > eps2))
                && ((o3 > eps2 && o4 < -eps2) || (o3 < -eps2 && o4 > eps2))
            {
                let t = o1 / (o1 - o2);
                return Some(c + (d - c) * t);
            }
        }
    }
    None
}

/// Intersection test for two triangles with tolerance `eps` (a length):
/// contacts within `eps` (shared vertices, edge touching, grazing) do not
/// count. Returns the kind and a witness point inside the overlap.
pub fn tri_tri_intersect(
    t1: &[Point3; 3],
    t2: &[Point3; 3],
    eps: f64,
) -> Result<Option<(IntersectionKind, Point3)>> {
    let n1 = (t1[1] - t1[0]).cross(t1[2] - t1[0]);
    let n2 = (t2[1] - t2[0]).cross(t2[2] - t2[0]);
    let edge_scale = |t: &[Point3; 3]| -> f64 {
        (t[1] - t[0])
            .norm()
            .max((t[2] - t[1]).norm())
            .max((t[0] - t[2]).norm())
    };
    let s1 = edge_scale(t1);
    let s2 = edge_scale(t2);
    if n1.norm() <= 1e-14 * s1 * s1 {
        return Err(Error::DegenerateTriangle(format!("first triangle has no area: {t1:?}")));
    }
    if n2.norm() <= 1e-14 * s2 * s2 {
        return Err(Error::DegenerateTriangle(format!("second triangle has no area: {t2:?}")));
    }

    let d1: [f64; 3] = std::array::from_fn(|k| n2.dot(t1[k] - t2[0]));
    let eps_plane2 = eps * n2.norm();
    let sign1: [i8; 3] = std::array::from_fn(|k| classify_sign(d1[k], eps_plane2));
    if sign1.iter().all(|&s| s >= 0) && sign1.iter().any(|&s| s > 0) {
        return Ok(None);
    }
    if sign1.iter().all(|&s| s <= 0) && sign1.iter().any(|&s| s < 0) {
        return Ok(None);
    }

    let d2: [f64; 3] = std::array::from_fn(|k| n1.dot(t2[k] - t1[0]));
    let eps_plane1 = eps * n1.norm();
    let sign2: [i8; 3] = std::array::from_fn(|k| classify_sign(d2[k], eps_plane1));
    if sign2.iter().all(|&s| s >= 0) && sign2.iter().any(|&s| s > 0) {
        return Ok(None);
    }
    if sign2.iter().all(|&s| s <= 0) && sign2.iter().any(|&s| s < 0) {
        return Ok(None);
    }

    if sign1 == [0, 0, 0] || sign2 == [0, 0, 0] {
        return Ok(coplanar_overlap(t1, t2, n1, eps)
            .map(|w| (IntersectionKind::CoplanarOverlap, w)));
    }

    // Each triangle cuts the common line of the two planes in a segment;
    // the triangles intersect iff the segments overlap by more than eps.
    let direction = n1.cross(n2);
    if direction.norm_squared() == 0.0 {
        return Ok(coplanar_overlap(t1, t2, n1, eps)
            .map(|w| (IntersectionKind::CoplanarOverlap, w)));
    }
    let seg1 = plane_crossing_points(t1, sign1, d1);
    let seg2 = plane_crossing_points(t2, sign2, d2);
    if seg1.len() < 2 || seg2.len() < 2 {
        return Ok(None);
    }
    let project = |p: Point3| direction.dot(p) / direction.norm();
    let interval = |pts: &[Point3]| -> (f64, f64) {
        let vals: Vec<f64> = pts.iter().map(|&p| project(p)).collect();
        (vals.iter().cloned().fold(f64::MAX, f64::min), vals.iter().cloned().fold(f64::MIN, f64::max))
    };
    let (lo1, hi1) = interval(&seg1);
    let (lo2, hi2) = interval(&seg2);
    let lo = lo1.max(lo2);
    let hi = hi1.min(hi2);
    if hi - lo <= eps {
        return Ok(None);
    }
    let mid = 0.5 * (lo + hi);
    // Witness: walk along segment 1 to the overlap midpoint.
    let (a, b) = (seg1[0], seg1[seg1.len() - 1]);
    let (pa, pb) = (project(a), project(b));
    let witness = if (pb - pa).abs() < f64::MIN_POSITIVE {
        a
    } else {
        a + (b - a) * ((mid - pa) / (pb - pa))
    };
    Ok(Some((IntersectionKind::ProperCrossing, witness)))
}

fn triangle_bbox(t: &[Point3; 3]) -> (Point3, Point3) {
    let mut lo = t[0];
    let mut hi = t[0];
    for p in &t[1..] {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        lo.z = lo.z.min(p.z);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
        hi.z = hi.z.max(p.z);
    }
    (lo, hi)
}

fn share_vertex(a: [usize; 3], b: [usize; 3]) -> bool {
    a.iter().any(|v| b.contains(v))
}

fn test_pair(mesh: &TriMesh, a: usize, b: usize, eps: f64) -> Option<IntersectionRecord> {
    let ta = mesh.triangle_points(a);
    let tb = mesh.triangle_points(b);
    match tri_tri_intersect(&ta, &tb, eps) {
        Ok(Some((kind, witness))) => Some(IntersectionRecord { tri_a: a, tri_b: b, kind, witness }),
        // Degenerate triangles are rejected at mesh construction.
        _ => None,
    }
}

/// All intersecting triangle pairs of a mesh, excluding pairs that share a
/// vertex index (adjacency, including welded seam neighbors). Spatial-grid
/// pruned; [`self_intersections_naive`] is the unpruned oracle.
pub fn self_intersections(mesh: &TriMesh) -> Vec<IntersectionRecord> {
    self_intersections_with_eps(mesh, GEOM_EPS_FACTOR * mesh.bbox_diagonal())
}

/// [`self_intersections`] with an explicit predicate tolerance (a length).
pub fn self_intersections_with_eps(mesh: &TriMesh, eps: f64) -> Vec<IntersectionRecord> {
    let count = mesh.triangle_count();
    if count < 2 {
        return Vec::new();
    }
    // Cell size: twice the mean triangle extent keeps most triangles in
    // a handful of cells.
    let mut mean_extent = 0.0;
    let boxes: Vec<(Point3, Point3)> = (0..count)
        .map(|t| {
            let bb = triangle_bbox(&mesh.triangle_points(t));
            let e = bb.1 - bb.0;
            mean_extent += e.x.max(e.y).max(e.z);
            bb
        })
        .collect();
    mean_extent /= count as f64;
    let cell = (2.0 * mean_extent).max(1e-12 * mesh.bbox_diagonal()).max(f64::MIN_POSITIVE);

    let key = |x: f64| -> i64 { (x / cell).floor() as i64 };
    let mut grid: BTreeMap<(i64, i64, i64), Vec<usize>> = BTreeMap::new();
    for (t, (lo, hi)) in boxes.iter().enumerate() {
        for ix in key(lo.x)..=key(hi.x) {
            for iy in key(lo.y)..=key(hi.y) {
                for iz in key(lo.z)..=key(hi.z) {
                    grid.entry((ix, iy, iz)).or_default().push(t);
                }
            }
        }
    }
    let mut candidates: BTreeSet<(usize, usize)> = BTreeSet::new();
    for bucket in grid.values() {
        for (i, &a) in bucket.iter().enumerate() {
            for &b in &bucket[i + 1..] {
                candidates.insert((a.min(b), a.max(b)));
            }
        }
    }

    let boxes_overlap = |a: usize, b: usize| -> bool {
        let (alo, ahi) = boxes[a];
        let (blo, bhi) = boxes[b];
        ahi.x >= blo.x - eps
            && bhi.x >= alo.x - eps
            && ahi.y >= blo.y - eps
            && bhi.y >= alo.y - eps
            && ahi.z >= blo.z - eps
            && bhi.z >= alo.z - eps
    };

    let mut records = Vec::new();
    for (a, b) in candidates {
        if share_vertex(mesh.triangles()[a], mesh.triangles()[b]) {
            continue;
        }
        if !boxes_overlap(a, b) {
            continue;
        }
        if let Some(rec) = test_pair(mesh, a, b, eps) {
            records.push(rec);
        }
    }
    records
}

/// All-pairs intersection sweep without spatial pruning. Slow; kept as the
/// cross-validation oracle for [`self_intersections`].
pub fn self_intersections_naive(mesh: &TriMesh) -> Vec<IntersectionRecord> {
    let eps = GEOM_EPS_FACTOR * mesh.bbox_diagonal();
    let count = mesh.triangle_count();
    let mut records = Vec::new();
    for a in 0..count {
        for b in a + 1..count {
            if share_vertex(mesh.triangles()[a], mesh.triangles()[b]) {
                continue;
            }
            if let Some(rec) = test_pair(mesh, a, b, eps) {
                records.push(rec);
            }
        }
    }
    records
}

/// Sampled sup-distance between the control surface (barycentric
/// interpolation at mesh parameters) and the smooth surface at the same
/// parameters: `max |l(u,v) - b(u,v)|` over a `samples x samples` grid.
/// This shared-parametrization proxy upper-bounds the true Hausdorff
/// distance between the two point sets.
pub fn hausdorff_distance(mesh: &TriMesh, net: &ControlNet, samples: usize) -> Result<f64> {
    if samples < 32 {
        return Err(Error::InvalidArgument(format!(
            "need at least 32 samples per direction, got {samples}"
        )));
    }
    let closed = mesh.roles().iter().any(|r| matches!(r, VertexRole::Seam));

    // Per-triangle parameter coordinates, unwrapped across the seams of
    // closed meshes so barycentric interpolation is well-defined.
    let tri_params: Vec<[(f64, f64); 3]> = mesh
        .triangles()
        .iter()
        .map(|tri| {
            let mut ps: [(f64, f64); 3] = std::array::from_fn(|k| mesh.params()[tri[k]]);
            if closed {
                for axis in 0..2 {
                    let get = |p: &(f64, f64)| if axis == 0 { p.0 } else { p.1 };
                    let max = ps.iter().map(&get).fold(f64::MIN, f64::max);
                    let min = ps.iter().map(&get).fold(f64::MAX, f64::min);
                    if max - min > 0.5 {
                        for p in &mut ps {
                            if get(p) < 0.5 {
                                if axis == 0 {
                                    p.0 += 1.0;
                                } else {
                                    p.1 += 1.0;
                                }
                            }
                        }
                    }
                }
            }
            ps
        })
        .collect();

    // Bucket triangles by parameter bbox for point location.
    let buckets = (mesh.triangle_count() as f64).sqrt().ceil().max(1.0) as usize;
    let bucket_of = |x: f64| -> usize { ((x * buckets as f64) as usize).min(buckets - 1) };
    let mut grid: Vec<Vec<usize>> = vec![Vec::new(); buckets * buckets];
    for (t, ps) in tri_params.iter().enumerate() {
        let us: Vec<f64> = ps.iter().map(|p| p.0).collect();
        let vs: Vec<f64> = ps.iter().map(|p| p.1).collect();
        let (ulo, uhi) = (us.iter().cloned().fold(f64::MAX, f64::min), us.iter().cloned().fold(f64::MIN, f64::max));
        let (vlo, vhi) = (vs.iter().cloned().fold(f64::MAX, f64::min), vs.iter().cloned().fold(f64::MIN, f64::max));
        // Register both the unwrapped box and its wrapped copy.
        let mut ranges = vec![(ulo, uhi, vlo, vhi)];
        if uhi > 1.0 {
            ranges.push((ulo - 1.0, uhi - 1.0, vlo, vhi));
        }
        if vhi > 1.0 {
            let base: Vec<_> = ranges.clone();
            for (a, b, c, d) in base {
                ranges.push((a, b, c - 1.0, d - 1.0));
            }
        }
        for (a, b, c, d) in ranges {
            for bu in bucket_of(a.max(0.0))..=bucket_of(b.clamp(0.0, 1.0)) {
                for bv in bucket_of(c.max(0.0))..=bucket_of(d.clamp(0.0, 1.0)) {
                    grid[bu * buckets + bv].push(t);
                }
            }
        }
    }

    let barycentric = |t: usize, u: f64, v: f64| -> Option<(f64, f64, f64)> {
        let ps = tri_params[t];
        let offsets: &[(f64, f64)] = if closed { &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] } else { &[(0.0, 0.0)] };
        for (ou, ov) in offsets {
            let (su, sv) = (u + ou, v + ov);
            let (x0, y0) = ps[0];
            let (x1, y1) = ps[1];
            let (x2, y2) = ps[2];
            let det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
            if det.abs() < f64::MIN_POSITIVE {
                continue;
            }
            let l1 = ((su - x0) * (y2 - y0) - (sv - y0) * (x2 - x0)) / det;
            let l2 = ((sv - y0) * (x1 - x0) - (su - x0) * (y1 - y0)) / det;
            let l0 = 1.0 - l1 - l2;
            if l0 >= -1e-9 && l1 >= -1e-9 && l2 >= -1e-9 {
                return Some((l0, l1, l2));
            }
        }
        None
    };

    let mut worst: f64 = 0.0;
    for a in 0..samples {
        let u = a as f64 / (samples - 1) as f64;
        for b in 0..samples {
            let v = b as f64 / (samples - 1) as f64;
            let bucket = &grid[bucket_of(u) * buckets + bucket_of(v)];
            let mut hit = None;
            for &t in bucket {
                if let Some(l) = barycentric(t, u, v) {
                    hit = Some((t, l));
                    break;
                }
            }
            if hit.is_none() {
                // Bucket miss; scan everything before giving up.
                for t in 0..mesh.triangle_count() {
                    if let Some(l) = barycentric(t, u, v) {
                        hit = Some((t, l));
                        break;
                    }
                }
            }
            let (t, (l0, l1, l2)) = hit.unwrap_or_else(|| {
                panic!("no triangle covers parameter ({u}, {v}); mesh parametrization incomplete")
            });
            let [i0, i1, i2] = mesh.triangles()[t];
            let linear = mesh.positions()[i0] * l0
                + mesh.positions()[i1] * l1
                + mesh.positions()[i2] * l2;
            let smooth = eval_surface(net, u, v);
            worst = worst.max(linear.distance(smooth));
        }
    }
    Ok(worst)
}

/// Verdict of the composite certificate at one subdivision level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Certified,
    NotYet,
}

/// Composite embeddedness certificate at one subdivision level: cone
/// conditions on every patch (and seam pair), the intersection oracle, and
/// the homeomorphism-type check. This is a heuristic stand-in for the
/// formal tubular-neighborhood isotopy argument: it verifies the
/// conclusions (embedded, right topology, conditions hold), not the
/// existence proof's separation bound.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Certificate {
    pub level: usize,
    pub conditions_pass: bool,
    pub oracle_clear: bool,
    pub hausdorff: f64,
    pub topology_match: bool,
    pub verdict: Verdict,
}

/// Evaluate the certificate for an already-subdivided patch set.
pub fn certificate_for_patches(
    net: &ControlNet,
    patches: &[BezierPatch],
    closedness: Closedness,
    level: usize,
    samples: usize,
) -> Result<Certificate> {
    let mut conditions_pass = true;
    for patch in patches {
        if !injectivity_conditions(patch)?.all_pass() {
            conditions_pass = false;
            break;
        }
    }
    if conditions_pass && closedness == Closedness::ClosedTorus {
        for fragment in seam_merged_nets(patches)? {
            if !conditions_for_net(&fragment)?.all_pass() {
                conditions_pass = false;
                break;
            }
        }
    }

    let mesh = mesh_from_patches(patches, closedness)?;
    let oracle_clear = self_intersections(&mesh).is_empty();
    let topo = topology(&mesh)?;
    let topology_match = match closedness {
        Closedness::Open => topo.euler_char == 1 && topo.boundary_loops == 1 && topo.orientable,
        Closedness::ClosedTorus => {
            topo.euler_char == 0 && topo.boundary_loops == 0 && topo.orientable
        }
    };
    let hausdorff = hausdorff_distance(&mesh, net, samples)?;
    let verdict = if conditions_pass && oracle_clear && topology_match {
        Verdict::Certified
    } else {
        Verdict::NotYet
    };
    Ok(Certificate { level, conditions_pass, oracle_clear, hausdorff, topology_match, verdict })
}

/// Certificate for a net at a subdivision level, with default sampling.
pub fn isotopy_certificate(net: &ControlNet, level: usize) -> Result<Certificate> {
    let closedness = classify_closedness(net)?;
    let patches = subdivide_to_level(net, level);
    certificate_for_patches(net, &patches, closedness, level, 64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::triangulate_net;
    use crate::samples;

    fn tri(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> [Point3; 3] {
        [
            Point3::new(a[0], a[1], a[2]),
            Point3::new(b[0], b[1], b[2]),
            Point3::new(c[0], c[1], c[2]),
        ]
    }

    #[test]
    fn parallel_triangles_do_not_intersect() {
        let t1 = tri([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let t2 = tri([0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]);
        assert!(tri_tri_intersect(&t1, &t2, 1e-9).unwrap().is_none());
    }

    #[test]
    fn piercing_triangle_is_a_proper_crossing() {
        let t1 = tri([-1.0, -1.0, 0.0], [2.0, -1.0, 0.0], [0.0, 2.0, 0.0]);
        let t2 = tri([0.2, 0.2, -1.0], [0.4, 0.2, 1.0], [0.3, 0.5, 1.0]);
        let (kind, witness) = tri_tri_intersect(&t1, &t2, 1e-9).unwrap().unwrap();
        assert_eq!(kind, IntersectionKind::ProperCrossing);
        // Witness must lie in the plane of t1 and inside both triangles'
        // bounding boxes.
        assert!(witness.z.abs() < 1e-9);
        assert!(witness.x > 0.0 && witness.x < 1.0);
        assert!(witness.y > 0.0 && witness.y < 1.0);
    }

    #[test]
    fn intersection_test_is_symmetric() {
        let t1 = tri([-1.0, -1.0, 0.0], [2.0, -1.0, 0.0], [0.0, 2.0, 0.0]);
        let t2 = tri([0.2, 0.2, -1.0], [0.4, 0.2, 1.0], [0.3, 0.5, 1.0]);
        let a = tri_tri_intersect(&t1, &t2, 1e-9).unwrap().unwrap();
        let b = tri_tri_intersect(&t2, &t1, 1e-9).unwrap().unwrap();
        assert_eq!(a.0, b.0);
        assert!(a.1.distance(b.1) < 1e-9);
    }

    #[test]
    fn coplanar_overlap_detected() {
        let t1 = tri([0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0]);
        let t2 = tri([0.5, 0.5, 0.0], [2.5, 0.5, 0.0], [0.5, 2.5, 0.0]);
        let (kind, _) = tri_tri_intersect(&t1, &t2, 1e-9).unwrap().unwrap();
        assert_eq!(kind, IntersectionKind::CoplanarOverlap);
    }

    #[test]
    fn touching_at_a_vertex_is_not_an_intersection() {
        let t1 = tri([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let t2 = tri([1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, -1.0, 0.5]);
        assert!(tri_tri_intersect(&t1, &t2, 1e-9).unwrap().is_none());
    }

    #[test]
    fn degenerate_triangle_is_an_error() {
        let t1 = tri([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]);
        let t2 = tri([0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]);
        assert!(matches!(
            tri_tri_intersect(&t1, &t2, 1e-9),
            Err(Error::DegenerateTriangle(_))
        ));
    }

    #[test]
    fn flat_grid_is_clean() {
        let mesh = triangulate_net(&samples::flat_net(4, 4), Closedness::Open).unwrap();
        assert!(self_intersections(&mesh).is_empty());
        assert!(self_intersections_naive(&mesh).is_empty());
    }

    #[test]
    fn folded_sheet_mesh_self_intersects_then_clears() {
        let net = samples::folded_sheet_net();
        let level0 = triangulate_net(&net, Closedness::Open).unwrap();
        let hits = self_intersections(&level0);
        assert!(!hits.is_empty(), "level-0 folded mesh must self-intersect");
        for rec in &hits {
            assert!(rec.tri_a < rec.tri_b);
            assert!(!share_vertex(
                level0.triangles()[rec.tri_a],
                level0.triangles()[rec.tri_b]
            ));
        }

        let mut cleared = None;
        for level in 1..=5 {
            let mesh =
                mesh_from_patches(&subdivide_to_level(&net, level), Closedness::Open).unwrap();
            if self_intersections(&mesh).is_empty() {
                cleared = Some(level);
                break;
            }
        }
        assert!(cleared.is_some(), "subdivision must clear the fold within 5 levels");
    }

    #[test]
    fn grid_and_naive_sweeps_agree() {
        let meshes = vec![
            triangulate_net(&samples::folded_sheet_net(), Closedness::Open).unwrap(),
            triangulate_net(&samples::dome_net(0.5), Closedness::Open).unwrap(),
            mesh_from_patches(
                &subdivide_to_level(&samples::folded_sheet_net(), 2),
                Closedness::Open,
            )
            .unwrap(),
            triangulate_net(&samples::torus_net(8, 8, 2.0, 0.8), Closedness::ClosedTorus).unwrap(),
        ];
        for mesh in &meshes {
            let fast = self_intersections(mesh);
            let slow = self_intersections_naive(mesh);
            let fast_pairs: Vec<(usize, usize)> = fast.iter().map(|r| (r.tri_a, r.tri_b)).collect();
            let slow_pairs: Vec<(usize, usize)> = slow.iter().map(|r| (r.tri_a, r.tri_b)).collect();
            assert_eq!(fast_pairs, slow_pairs);
        }
    }

    #[test]
    fn hausdorff_zero_for_bilinear() {
        let net = samples::flat_net(1, 1);
        let mesh = triangulate_net(&net, Closedness::Open).unwrap();
        assert!(hausdorff_distance(&mesh, &net, 32).unwrap() < 1e-12);
    }

    #[test]
    fn hausdorff_rigid_motion_invariant() {
        let net = samples::dome_net(0.5);
        let mesh = triangulate_net(&net, Closedness::Open).unwrap();
        let d0 = hausdorff_distance(&mesh, &net, 48).unwrap();

        // Rotate about z by a fixed angle and translate.
        let (s, c) = (0.7f64.sin(), 0.7f64.cos());
        let motion = |p: Point3| {
            Point3::new(c * p.x - s * p.y + 1.0, s * p.x + c * p.y - 2.0, p.z + 0.5)
        };
        let net2 = ControlNet::from_fn(net.rows(), net.cols(), |i, j| motion(net.at(i, j))).unwrap();
        let mesh2 = triangulate_net(&net2, Closedness::Open).unwrap();
        let d1 = hausdorff_distance(&mesh2, &net2, 48).unwrap();
        assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn hausdorff_sampling_self_consistency() {
        let net = samples::dome_net(0.5);
        let mesh = triangulate_net(&net, Closedness::Open).unwrap();
        let coarse = hausdorff_distance(&mesh, &net, 48).unwrap();
        let fine = hausdorff_distance(&mesh, &net, 96).unwrap();
        assert!((coarse - fine).abs() / fine.max(1e-300) < 0.05);
    }

    #[test]
    fn hausdorff_covers_closed_meshes() {
        let net = samples::torus_net(8, 8, 2.0, 0.8);
        let mesh = triangulate_net(&net, Closedness::ClosedTorus).unwrap();
        let d = hausdorff_distance(&mesh, &net, 32).unwrap();
        assert!(d.is_finite() && d > 0.0);
    }

    #[test]
    fn flat_patch_certified_immediately() {
        let cert = isotopy_certificate(&samples::flat_net(3, 3), 0).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert!(cert.conditions_pass && cert.oracle_clear && cert.topology_match);
    }

    #[test]
    fn folded_sheet_not_yet_at_level_zero() {
        let cert = isotopy_certificate(&samples::folded_sheet_net(), 0).unwrap();
        assert_eq!(cert.verdict, Verdict::NotYet);
        assert!(!cert.oracle_clear);
    }
}
