//! Tensor-product Bezier surfaces: Bernstein basis, evaluation, analytic
//! derivatives, de Casteljau subdivision, and control-net validation.
//!
//! A surface is determined by an `(n+1) x (m+1)` grid of control points
//! `p[i][j]` as `b(u,v) = sum_i sum_j B_i^n(u) B_j^m(v) p[i][j]` over the
//! unit square. The same grid, triangulated along cell diagonals, is the
//! piecewise-linear control surface handled by [`crate::mesh`].

use crate::error::{Error, Result};
use crate::point::Point3;

/// Maximum supported degree per direction. Binomials are computed by the
/// Pascal recurrence, so the ceiling is a sanity bound, not an overflow one.
pub const MAX_DEGREE: usize = 32;

/// Row `n` of Pascal's triangle as `f64`.
fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![0.0; n + 1];
    row[0] = 1.0;
    for i in 1..=n {
        row[i] = 1.0;
        for j in (1..i).rev() {
            row[j] += row[j - 1];
        }
    }
    row
}

/// Bernstein basis polynomial `B_i^n(u) = C(n,i) u^i (1-u)^(n-i)`.
pub fn bernstein(n: usize, i: usize, u: f64) -> Result<f64> {
    if i > n {
        return Err(Error::InvalidArgument(format!(
            "bernstein index {i} out of range for degree {n}"
        )));
    }
    if n > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree {n} exceeds supported maximum {MAX_DEGREE}"
        )));
    }
    let c = binomial_row(n)[i];
    Ok(c * u.powi(i as i32) * (1.0 - u).powi((n - i) as i32))
}

/// All `n+1` Bernstein values at `u`, computed with one Pascal row.
pub fn bernstein_basis(n: usize, u: f64) -> Vec<f64> {
    let row = binomial_row(n);
    (0..=n)
        .map(|i| row[i] * u.powi(i as i32) * (1.0 - u).powi((n - i) as i32))
        .collect()
}

/// Evaluate a Bezier curve by repeated linear interpolation.
pub fn curve_point(points: &[Point3], t: f64) -> Point3 {
    debug_assert!(!points.is_empty());
    if t == 0.0 {
        return points[0];
    }
    if t == 1.0 {
        return points[points.len() - 1];
    }
    let mut work = points.to_vec();
    for r in 1..points.len() {
        for i in 0..points.len() - r {
            work[i] = work[i].lerp(work[i + 1], t);
        }
    }
    work[0]
}

/// Split a Bezier curve at `t`; the two control polygons reproduce the
/// curve restricted to `[0,t]` and `[t,1]`.
pub fn split_curve(points: &[Point3], t: f64) -> (Vec<Point3>, Vec<Point3>) {
    let n = points.len();
    let mut work = points.to_vec();
    let mut left = Vec::with_capacity(n);
    let mut right = vec![Point3::ZERO; n];
    left.push(work[0]);
    right[n - 1] = work[n - 1];
    for r in 1..n {
        for i in 0..n - r {
            work[i] = work[i].lerp(work[i + 1], t);
        }
        left.push(work[0]);
        right[n - 1 - r] = work[n - 1 - r];
    }
    (left, right)
}

/// Control points of the `order`-th derivative curve (iterated forward
/// differences scaled by falling factorials). Empty if the order exceeds
/// the degree; the derivative is then identically zero.
pub fn curve_derivative_points(points: &[Point3], order: usize) -> Vec<Point3> {
    let degree = points.len() - 1;
    if order > degree {
        return Vec::new();
    }
    let mut work = points.to_vec();
    for o in 0..order {
        let scale = (degree - o) as f64;
        work = work.windows(2).map(|w| (w[1] - w[0]) * scale).collect();
    }
    work
}

/// `order`-th derivative of a Bezier curve at `t`.
pub fn curve_derivative(points: &[Point3], t: f64, order: usize) -> Point3 {
    let d = curve_derivative_points(points, order);
    if d.is_empty() {
        Point3::ZERO
    } else {
        curve_point(&d, t)
    }
}

/// Open/closed classification of a control net.
///
/// Closed nets glue both pairs of opposite boundary rows/columns exactly;
/// open nets glue neither. Anything in between is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Closedness {
    Open,
    ClosedTorus,
}

/// Rectangular grid of 3D control points, `(n+1)` rows by `(m+1)` columns,
/// row index `i` along `u`, column index `j` along `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlNet {
    rows: usize,
    cols: usize,
    points: Vec<Point3>,
}

impl ControlNet {
    /// Build a net from a row-major point list. Degrees must be in
    /// `1..=MAX_DEGREE` and every coordinate finite.
    pub fn new(rows: usize, cols: usize, points: Vec<Point3>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidArgument(format!(
                "control net must be at least 2x2, got {rows}x{cols}"
            )));
        }
        if rows - 1 > MAX_DEGREE || cols - 1 > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "degrees ({}, {}) exceed supported maximum {MAX_DEGREE}",
                rows - 1,
                cols - 1
            )));
        }
        if points.len() != rows * cols {
            return Err(Error::CountMismatch { expected: rows * cols, got: points.len() });
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite control point {p:?}")));
        }
        Ok(ControlNet { rows, cols, points })
    }

    /// Build from a closure over grid indices.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Point3) -> Result<Self> {
        let mut points = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                points.push(f(i, j));
            }
        }
        ControlNet::new(rows, cols, points)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Degree in the `u` direction.
    pub fn degree_u(&self) -> usize {
        self.rows - 1
    }

    /// Degree in the `v` direction.
    pub fn degree_v(&self) -> usize {
        self.cols - 1
    }

    pub fn at(&self, i: usize, j: usize) -> Point3 {
        self.points[i * self.cols + j]
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    /// Diagonal of the axis-aligned bounding box; the length scale used by
    /// relative tolerances throughout the crate.
    pub fn bbox_diagonal(&self) -> f64 {
        let mut lo = self.points[0];
        let mut hi = self.points[0];
        for p in &self.points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            lo.z = lo.z.min(p.z);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
            hi.z = hi.z.max(p.z);
        }
        (hi - lo).norm()
    }

    fn row_points(&self, i: usize) -> Vec<Point3> {
        (0..self.cols).map(|j| self.at(i, j)).collect()
    }

    fn col_points(&self, j: usize) -> Vec<Point3> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    /// Control polygons of the four boundary curves
    /// `b(u,0)`, `b(1,v)`, `b(u,1)`, `b(0,v)`.
    pub fn boundary_curves(&self) -> [Vec<Point3>; 4] {
        [self.col_points(0), self.row_points(self.rows - 1), self.col_points(self.cols - 1), self.row_points(0)]
    }
}

/// Evaluate `b(u,v)` as the double Bernstein sum. The four domain corners
/// short-circuit to the literal corner control points so seam and
/// closedness logic can rely on exact equality.
pub fn eval_surface(net: &ControlNet, u: f64, v: f64) -> Point3 {
    let n = net.degree_u();
    let m = net.degree_v();
    if (u == 0.0 || u == 1.0) && (v == 0.0 || v == 1.0) {
        let i = if u == 0.0 { 0 } else { n };
        let j = if v == 0.0 { 0 } else { m };
        return net.at(i, j);
    }
    let bu = bernstein_basis(n, u);
    let bv = bernstein_basis(m, v);
    let mut acc = Point3::ZERO;
    for i in 0..=n {
        let mut row = Point3::ZERO;
        for j in 0..=m {
            row = row + net.at(i, j) * bv[j];
        }
        acc = acc + row * bu[i];
    }
    acc
}

/// Evaluate `b(u,v)` by the de Casteljau recurrence: collapse every row in
/// `u` first, then the resulting column in `v`. Independent arithmetic
/// route from [`eval_surface`]; the two must agree to near machine
/// precision on any net.
pub fn de_casteljau_eval(net: &ControlNet, u: f64, v: f64) -> Point3 {
    let n = net.degree_u();
    let m = net.degree_v();
    if (u == 0.0 || u == 1.0) && (v == 0.0 || v == 1.0) {
        let i = if u == 0.0 { 0 } else { n };
        let j = if v == 0.0 { 0 } else { m };
        return net.at(i, j);
    }
    let column: Vec<Point3> = (0..=m).map(|j| curve_point(&net.col_points(j), u)).collect();
    curve_point(&column, v)
}

/// Parameter sub-rectangle of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Domain {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Domain {
    pub const UNIT: Domain = Domain { u0: 0.0, u1: 1.0, v0: 0.0, v1: 1.0 };

    pub fn width_u(&self) -> f64 {
        self.u1 - self.u0
    }

    pub fn width_v(&self) -> f64 {
        self.v1 - self.v0
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u0 && u <= self.u1 && v >= self.v0 && v <= self.v1
    }

    /// Map local `(s,t)` in the unit square to global parameters.
    pub fn to_global(&self, s: f64, t: f64) -> (f64, f64) {
        (self.u0 + s * self.width_u(), self.v0 + t * self.width_v())
    }

    /// Map global parameters into this rectangle's local coordinates.
    pub fn to_local(&self, u: f64, v: f64) -> (f64, f64) {
        ((u - self.u0) / self.width_u(), (v - self.v0) / self.width_v())
    }
}

/// One leaf of the subdivision tree: a control net together with the
/// global parameter rectangle it reproduces.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierPatch {
    pub net: ControlNet,
    pub domain: Domain,
}

impl BezierPatch {
    /// The whole surface as a single patch over the unit square.
    pub fn whole(net: ControlNet) -> Self {
        BezierPatch { net, domain: Domain::UNIT }
    }

    /// Evaluate at global parameters, which must lie in this patch's domain.
    pub fn eval_global(&self, u: f64, v: f64) -> Point3 {
        let (s, t) = self.domain.to_local(u, v);
        eval_surface(&self.net, s, t)
    }
}

/// Split a net at the parameter midpoint in `u` only.
fn split_net_u(net: &ControlNet) -> (ControlNet, ControlNet) {
    let mut left = Vec::with_capacity(net.rows * net.cols);
    let mut right = Vec::with_capacity(net.rows * net.cols);
    let mut cols_left: Vec<Vec<Point3>> = Vec::with_capacity(net.cols);
    let mut cols_right: Vec<Vec<Point3>> = Vec::with_capacity(net.cols);
    for j in 0..net.cols {
        let (l, r) = split_curve(&net.col_points(j), 0.5);
        cols_left.push(l);
        cols_right.push(r);
    }
    for i in 0..net.rows {
        for j in 0..net.cols {
            left.push(cols_left[j][i]);
            right.push(cols_right[j][i]);
        }
    }
    (
        ControlNet { rows: net.rows, cols: net.cols, points: left },
        ControlNet { rows: net.rows, cols: net.cols, points: right },
    )
}

/// Split a net at the parameter midpoint in `v` only.
fn split_net_v(net: &ControlNet) -> (ControlNet, ControlNet) {
    let mut low = Vec::with_capacity(net.rows * net.cols);
    let mut high = Vec::with_capacity(net.rows * net.cols);
    for i in 0..net.rows {
        let (l, h) = split_curve(&net.row_points(i), 0.5);
        low.extend(l);
        high.extend(h);
    }
    (
        ControlNet { rows: net.rows, cols: net.cols, points: low },
        ControlNet { rows: net.rows, cols: net.cols, points: high },
    )
}

/// de Casteljau subdivision of a patch at the midpoint of both directions.
///
/// Children are returned in row-major order of the 2x2 sub-grid:
/// `(u-,v-), (u-,v+), (u+,v-), (u+,v+)`. Their domains tile the parent's
/// and each child net reproduces the surface restricted to its domain.
pub fn subdivide_patch(patch: &BezierPatch) -> [BezierPatch; 4] {
    let d = patch.domain;
    let um = 0.5 * (d.u0 + d.u1);
    let vm = 0.5 * (d.v0 + d.v1);
    let (net_lo_u, net_hi_u) = split_net_u(&patch.net);
    let (net_00, net_01) = split_net_v(&net_lo_u);
    let (net_10, net_11) = split_net_v(&net_hi_u);
    [
        BezierPatch { net: net_00, domain: Domain { u0: d.u0, u1: um, v0: d.v0, v1: vm } },
        BezierPatch { net: net_01, domain: Domain { u0: d.u0, u1: um, v0: vm, v1: d.v1 } },
        BezierPatch { net: net_10, domain: Domain { u0: um, u1: d.u1, v0: d.v0, v1: vm } },
        BezierPatch { net: net_11, domain: Domain { u0: um, u1: d.u1, v0: vm, v1: d.v1 } },
    ]
}

/// Uniform full-tree subdivision: `4^level` patches tiling the unit square.
pub fn subdivide_to_level(net: &ControlNet, level: usize) -> Vec<BezierPatch> {
    let mut patches = vec![BezierPatch::whole(net.clone())];
    for _ in 0..level {
        patches = patches.iter().flat_map(subdivide_patch).collect();
    }
    patches
}

/// Exact partial derivative `d^(a+b) b / du^a dv^b` at `(u,v)`, with respect
/// to the net's own unit-square parameters, via iterated difference nets.
/// Orders exceeding the degree give the zero vector (polynomial identity).
pub fn surface_derivatives(
    net: &ControlNet,
    u: f64,
    v: f64,
    order_u: usize,
    order_v: usize,
) -> Point3 {
    let n = net.degree_u();
    let m = net.degree_v();
    if order_u > n || order_v > m {
        return Point3::ZERO;
    }
    // Difference in i, `order_u` times, scaled by the falling factorial.
    let mut grid: Vec<Vec<Point3>> =
        (0..net.rows).map(|i| (0..net.cols).map(|j| net.at(i, j)).collect()).collect();
    for o in 0..order_u {
        let scale = (n - o) as f64;
        grid = (0..grid.len() - 1)
            .map(|i| (0..grid[0].len()).map(|j| (grid[i + 1][j] - grid[i][j]) * scale).collect())
            .collect();
    }
    for o in 0..order_v {
        let scale = (m - o) as f64;
        grid = grid
            .iter()
            .map(|row| (0..row.len() - 1).map(|j| (row[j + 1] - row[j]) * scale).collect())
            .collect();
    }
    let bu = bernstein_basis(n - order_u, u);
    let bv = bernstein_basis(m - order_v, v);
    let mut acc = Point3::ZERO;
    for (i, row) in grid.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            acc = acc + *p * (bu[i] * bv[j]);
        }
    }
    acc
}

/// Decide whether a net is open or glued into a torus. Seam equality is
/// exact coordinate equality; nets matching neither pattern are rejected
/// because the triangulated surface would not be a manifold of a supported
/// type.
pub fn classify_closedness(net: &ControlNet) -> Result<Closedness> {
    let n = net.degree_u();
    let m = net.degree_v();
    let rows_glued: Vec<bool> = (0..=n).map(|i| net.at(i, 0) == net.at(i, m)).collect();
    let cols_glued: Vec<bool> = (0..=m).map(|j| net.at(0, j) == net.at(n, j)).collect();
    let all_glued = rows_glued.iter().all(|&g| g) && cols_glued.iter().all(|&g| g);
    let none_glued = rows_glued.iter().all(|&g| !g) && cols_glued.iter().all(|&g| !g);
    if all_glued {
        Ok(Closedness::ClosedTorus)
    } else if none_glued {
        Ok(Closedness::Open)
    } else {
        Err(Error::UnsupportedTopology(
            "net is neither fully open nor fully glued (partial seams are unsupported)".into(),
        ))
    }
}

/// True if every seam pair of the torus pattern agrees within
/// `tol * bbox_diagonal` but the net is not exactly closed. Used to warn
/// about nets that were probably meant to be closed.
pub fn almost_closed(net: &ControlNet, tol: f64) -> bool {
    if matches!(classify_closedness(net), Ok(Closedness::ClosedTorus)) {
        return false;
    }
    let eps = tol * net.bbox_diagonal();
    let n = net.degree_u();
    let m = net.degree_v();
    (0..=n).all(|i| net.at(i, 0).distance(net.at(i, m)) <= eps)
        && (0..=m).all(|j| net.at(0, j).distance(net.at(n, j)) <= eps)
}

/// A regularity defect found by [`validate_regularity`]. Indices are grid
/// coordinates `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegularityViolation {
    /// Two control points coincide and are not a permitted seam pair.
    DuplicatePoints { a: (usize, usize), b: (usize, usize) },
    /// Three of a cell's four corners are collinear.
    CollinearTriple { cell: (usize, usize), points: [(usize, usize); 3] },
}

/// Check the regularity assumptions the triangulation relies on: control
/// points pairwise distinct (seam identifications excepted) and no three
/// corners of any cell collinear. Collinearity uses the cross-product
/// magnitude against `tol * scale^2` where scale is the bbox diagonal.
pub fn validate_regularity(net: &ControlNet, tol: f64) -> Vec<RegularityViolation> {
    let mut out = Vec::new();
    let n = net.degree_u();
    let m = net.degree_v();
    let scale = net.bbox_diagonal().max(f64::MIN_POSITIVE);
    let dist_eps = tol * scale;
    let cross_eps = tol * scale * scale;
    let closed = matches!(classify_closedness(net), Ok(Closedness::ClosedTorus));
    let canonical = |i: usize, j: usize| -> (usize, usize) {
        if closed {
            (i % n, j % m)
        } else {
            (i, j)
        }
    };

    let idx: Vec<(usize, usize)> =
        (0..=n).flat_map(|i| (0..=m).map(move |j| (i, j))).collect();
    for (a, &(i1, j1)) in idx.iter().enumerate() {
        for &(i2, j2) in &idx[a + 1..] {
            if canonical(i1, j1) == canonical(i2, j2) {
                continue;
            }
            if net.at(i1, j1).distance(net.at(i2, j2)) <= dist_eps {
                out.push(RegularityViolation::DuplicatePoints { a: (i1, j1), b: (i2, j2) });
            }
        }
    }

    for ci in 0..n {
        for cj in 0..m {
            let corners =
                [(ci, cj), (ci, cj + 1), (ci + 1, cj), (ci + 1, cj + 1)];
            for skip in 0..4 {
                let triple: Vec<(usize, usize)> =
                    (0..4).filter(|&k| k != skip).map(|k| corners[k]).collect();
                let pa = net.at(triple[0].0, triple[0].1);
                let pb = net.at(triple[1].0, triple[1].1);
                let pc = net.at(triple[2].0, triple[2].1);
                if (pb - pa).cross(pc - pa).norm() <= cross_eps {
                    out.push(RegularityViolation::CollinearTriple {
                        cell: (ci, cj),
                        points: [triple[0], triple[1], triple[2]],
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_net(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ControlNet {
        ControlNet::from_fn(rows, cols, |i, j| {
            Point3::new(
                i as f64 + 0.3 * rng.gen::<f64>(),
                j as f64 + 0.3 * rng.gen::<f64>(),
                rng.gen::<f64>(),
            )
        })
        .unwrap()
    }

    fn bilinear_unit() -> ControlNet {
        ControlNet::new(
            2,
            2,
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(1.0, 1.0, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bernstein_midpoint_value() {
        assert_eq!(bernstein(2, 1, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn bernstein_endpoint_interpolation() {
        for n in 1..=10 {
            assert_eq!(bernstein(n, 0, 0.0).unwrap(), 1.0);
            assert_eq!(bernstein(n, n, 1.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn bernstein_matches_factorial_formula() {
        let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
        let naive = fact(3) / (fact(2) * fact(1)) * 0.25f64.powi(2) * 0.75;
        assert!((bernstein(3, 2, 0.25).unwrap() - naive).abs() < 1e-15);
    }

    #[test]
    fn bernstein_index_out_of_range() {
        assert!(bernstein(3, 4, 0.5).is_err());
    }

    #[test]
    fn bernstein_partition_of_unity() {
        for n in 1..=10 {
            for k in 0..=50 {
                let u = k as f64 / 50.0;
                let sum: f64 = bernstein_basis(n, u).iter().sum();
                assert!((sum - 1.0).abs() < 1e-14, "n={n} u={u} sum={sum}");
            }
        }
    }

    #[test]
    fn eval_bilinear_center() {
        let net = bilinear_unit();
        let p = eval_surface(&net, 0.5, 0.5);
        assert!((p.x - 0.5).abs() < 1e-15);
        assert!((p.y - 0.5).abs() < 1e-15);
        assert_eq!(p.z, 0.0);
    }

    #[test]
    fn eval_corners_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let net = random_net(&mut rng, 4, 3);
        assert_eq!(eval_surface(&net, 0.0, 0.0), net.at(0, 0));
        assert_eq!(eval_surface(&net, 1.0, 0.0), net.at(3, 0));
        assert_eq!(eval_surface(&net, 0.0, 1.0), net.at(0, 2));
        assert_eq!(eval_surface(&net, 1.0, 1.0), net.at(3, 2));
        assert_eq!(de_casteljau_eval(&net, 1.0, 1.0), net.at(3, 2));
    }

    #[test]
    fn de_casteljau_matches_bernstein_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let net = random_net(&mut rng, 3, 3);
            let u = rng.gen::<f64>();
            let v = rng.gen::<f64>();
            let a = eval_surface(&net, u, v);
            let b = de_casteljau_eval(&net, u, v);
            assert!(a.distance(b) < 1e-12);
        }
    }

    #[test]
    fn curve_midpoint() {
        let pts = [Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 0.0), Point3::new(2.0, 0.0, 0.0)];
        let p = curve_point(&pts, 0.5);
        assert_eq!(p, Point3::new(1.0, 0.5, 0.0));
    }

    #[test]
    fn curve_split_quadratic() {
        let pts = [Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 0.0), Point3::new(2.0, 0.0, 0.0)];
        let (left, right) = split_curve(&pts, 0.5);
        assert_eq!(left, vec![Point3::new(0.0, 0.0, 0.0), Point3::new(0.5, 0.5, 0.0), Point3::new(1.0, 0.5, 0.0)]);
        assert_eq!(right[0], Point3::new(1.0, 0.5, 0.0));
        assert_eq!(right[2], Point3::new(2.0, 0.0, 0.0));
    }

    #[test]
    fn subdivision_children_tile_and_reproduce() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let net = random_net(&mut rng, 4, 4);
        let parent = BezierPatch::whole(net);
        let children = subdivide_patch(&parent);
        let area: f64 = children.iter().map(|c| c.domain.width_u() * c.domain.width_v()).sum();
        assert!((area - 1.0).abs() < 1e-15);
        for child in &children {
            for a in 0..5 {
                for b in 0..5 {
                    let (u, v) = child.domain.to_global(a as f64 / 4.0, b as f64 / 4.0);
                    let from_child = child.eval_global(u, v);
                    let from_parent = parent.eval_global(u, v);
                    assert!(from_child.distance(from_parent) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn subdivision_preserves_flatness() {
        let net = bilinear_unit();
        for child in subdivide_patch(&BezierPatch::whole(net)) {
            for p in child.net.points() {
                assert_eq!(p.z, 0.0);
            }
        }
    }

    #[test]
    fn derivatives_of_bilinear() {
        let net = bilinear_unit();
        for &(u, v) in &[(0.0, 0.0), (0.3, 0.8), (1.0, 1.0)] {
            let du = surface_derivatives(&net, u, v, 1, 0);
            assert!(du.distance(Point3::new(1.0, 0.0, 0.0)) < 1e-15);
            let duu = surface_derivatives(&net, u, v, 2, 0);
            assert_eq!(duu, Point3::ZERO);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let net = random_net(&mut rng, 4, 4);
        let h = 1e-5;
        for _ in 0..20 {
            let u = 0.1 + 0.8 * rng.gen::<f64>();
            let v = 0.1 + 0.8 * rng.gen::<f64>();
            let du = surface_derivatives(&net, u, v, 1, 0);
            let fd = (eval_surface(&net, u + h, v) - eval_surface(&net, u - h, v)) / (2.0 * h);
            assert!(du.distance(fd) / du.norm().max(1.0) < 1e-6);
            let duv = surface_derivatives(&net, u, v, 1, 1);
            let fd2 = (eval_surface(&net, u + h, v + h) - eval_surface(&net, u + h, v - h)
                - eval_surface(&net, u - h, v + h)
                + eval_surface(&net, u - h, v - h))
                / (4.0 * h * h);
            assert!(duv.distance(fd2) / duv.norm().max(1.0) < 1e-4);
        }
    }

    #[test]
    fn classify_open_and_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = random_net(&mut rng, 4, 4);
        assert_eq!(classify_closedness(&net).unwrap(), Closedness::Open);

        // Glue only one row pair: rejected.
        let mut pts = net.points().to_vec();
        pts[3] = pts[0]; // p_00 == p_0m
        let mixed = ControlNet::new(4, 4, pts).unwrap();
        assert!(matches!(classify_closedness(&mixed), Err(Error::UnsupportedTopology(_))));
    }

    #[test]
    fn classify_torus() {
        let net = crate::samples::torus_net(4, 4, 2.0, 0.8);
        assert_eq!(classify_closedness(&net).unwrap(), Closedness::ClosedTorus);
    }

    #[test]
    fn regularity_generic_net_clean() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let net = random_net(&mut rng, 4, 4);
        assert!(validate_regularity(&net, 1e-12).is_empty());
    }

    #[test]
    fn regularity_flags_collinear_cell() {
        let mut net = bilinear_unit();
        // Move p_11 onto the line through p_00 and p_01.
        let pts = {
            let mut pts = net.points().to_vec();
            pts[3] = Point3::new(0.0, 2.0, 0.0);
            pts
        };
        net = ControlNet::new(2, 2, pts).unwrap();
        let violations = validate_regularity(&net, 0.0);
        assert!(violations
            .iter()
            .any(|v| matches!(v, RegularityViolation::CollinearTriple { .. })));
    }

    #[test]
    fn regularity_flags_duplicates_but_permits_seams() {
        let torus = crate::samples::torus_net(4, 4, 2.0, 0.8);
        let dups: Vec<_> = validate_regularity(&torus, 0.0)
            .into_iter()
            .filter(|v| matches!(v, RegularityViolation::DuplicatePoints { .. }))
            .collect();
        assert!(dups.is_empty(), "seam identifications must not be reported: {dups:?}");

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let net = random_net(&mut rng, 3, 3);
        let mut pts = net.points().to_vec();
        pts[4] = pts[1];
        let dup_net = ControlNet::new(3, 3, pts).unwrap();
        assert!(validate_regularity(&dup_net, 0.0)
            .iter()
            .any(|v| matches!(v, RegularityViolation::DuplicatePoints { .. })));
    }

    #[test]
    fn evaluated_points_inside_convex_hull() {
        // Brute-force hull half-space check for small nets: for every plane
        // through three control points with all control points on one side,
        // evaluated points must be on that side too (within 1e-9 * scale).
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let net = random_net(&mut rng, 3, 3);
        let pts = net.points();
        let scale = net.bbox_diagonal();
        let mut planes = Vec::new();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                for c in b + 1..pts.len() {
                    let normal = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
                    if normal.norm() < 1e-12 {
                        continue;
                    }
                    let d: Vec<f64> = pts.iter().map(|p| normal.dot(*p - pts[a])).collect();
                    let max = d.iter().cloned().fold(f64::MIN, f64::max);
                    let min = d.iter().cloned().fold(f64::MAX, f64::min);
                    if max <= 1e-9 * scale * normal.norm() {
                        planes.push((normal, pts[a], 1.0));
                    } else if min >= -1e-9 * scale * normal.norm() {
                        planes.push((normal, pts[a], -1.0));
                    }
                }
            }
        }
        assert!(!planes.is_empty());
        for _ in 0..50 {
            let p = eval_surface(&net, rng.gen(), rng.gen());
            for (normal, origin, sign) in &planes {
                let side = sign * normal.dot(p - *origin) / normal.norm();
                assert!(side <= 1e-9 * scale, "point escapes hull half-space by {side}");
            }
        }
    }

    #[test]
    fn affine_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let net = random_net(&mut rng, 4, 3);
        let matrix: [[f64; 3]; 3] = [
            [1.2, 0.3, -0.1],
            [0.0, 0.8, 0.4],
            [-0.2, 0.1, 1.1],
        ];
        let shift = Point3::new(0.5, -1.0, 2.0);
        let apply = |p: Point3| {
            Point3::new(
                matrix[0][0] * p.x + matrix[0][1] * p.y + matrix[0][2] * p.z,
                matrix[1][0] * p.x + matrix[1][1] * p.y + matrix[1][2] * p.z,
                matrix[2][0] * p.x + matrix[2][1] * p.y + matrix[2][2] * p.z,
            ) + shift
        };
        let mapped = ControlNet::from_fn(4, 3, |i, j| apply(net.at(i, j))).unwrap();
        for _ in 0..25 {
            let (u, v) = (rng.gen::<f64>(), rng.gen::<f64>());
            let lhs = eval_surface(&mapped, u, v);
            let rhs = apply(eval_surface(&net, u, v));
            assert!(lhs.distance(rhs) < 1e-10);
        }
    }
}
