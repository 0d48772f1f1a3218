//! The triangulated control surface and its topology.
//!
//! Every cell of a control net is split along the diagonal from the cell's
//! low corner to its high corner, giving two triangles per cell. For closed
//! (torus) nets the duplicate seam rows/columns are identified so the mesh
//! is a genuine closed manifold. Vertices carry the parameter coordinates
//! of the uniform parametrization.

use std::collections::BTreeMap;

use crate::bezier::{BezierPatch, Closedness, ControlNet};
use crate::error::{Error, Result};
use crate::point::Point3;

/// Relative tolerance for degenerate-cell detection and seam verification.
const MESH_EPS: f64 = 1e-12;

/// Where a mesh vertex sits in the parameter square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum VertexRole {
    Interior,
    Boundary,
    Corner,
    Seam,
}

/// Indexed triangle mesh with per-vertex parameter coordinates.
///
/// Triangles are counterclockwise in parameter space. Positions, parameters
/// and roles are parallel arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    positions: Vec<Point3>,
    params: Vec<(f64, f64)>,
    roles: Vec<VertexRole>,
    triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(
        positions: Vec<Point3>,
        params: Vec<(f64, f64)>,
        roles: Vec<VertexRole>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self> {
        if params.len() != positions.len() || roles.len() != positions.len() {
            return Err(Error::InvalidArgument(
                "positions, params and roles must have equal length".into(),
            ));
        }
        for t in &triangles {
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidArgument(format!("triangle {t:?} repeats a vertex")));
            }
            if t.iter().any(|&v| v >= positions.len()) {
                return Err(Error::InvalidArgument(format!("triangle {t:?} out of range")));
            }
        }
        Ok(TriMesh { positions, params, roles, triangles })
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn positions(&self) -> &[Point3] {
        &self.positions
    }

    pub fn params(&self) -> &[(f64, f64)] {
        &self.params
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle_points(&self, t: usize) -> [Point3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.positions[a], self.positions[b], self.positions[c]]
    }

    pub fn bbox_diagonal(&self) -> f64 {
        if self.positions.is_empty() {
            return 0.0;
        }
        let mut lo = self.positions[0];
        let mut hi = self.positions[0];
        for p in &self.positions {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            lo.z = lo.z.min(p.z);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
            hi.z = hi.z.max(p.z);
        }
        (hi - lo).norm()
    }

    /// Map of undirected edges to the (1 or 2) triangles containing them.
    /// Errors if any edge has more than two incident triangles.
    pub(crate) fn edge_map(&self) -> Result<BTreeMap<(usize, usize), Vec<usize>>> {
        let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                let list = edges.entry(key).or_default();
                list.push(t);
                if list.len() > 2 {
                    return Err(Error::NonManifold(format!(
                        "edge ({}, {}) lies in more than two triangles",
                        key.0, key.1
                    )));
                }
            }
        }
        Ok(edges)
    }
}

/// Counts and classification of a mesh's topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TopologyReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_char: i64,
    pub boundary_loops: usize,
    pub orientable: bool,
    pub closed: bool,
}

/// A complete rectangular grid of positions, possibly glued into a torus.
/// This is the shared machinery behind [`triangulate_net`] and
/// [`mesh_from_patches`]; `rows`/`cols` count grid points including any
/// duplicate seam row/column.
fn triangulate_grid(
    rows: usize,
    cols: usize,
    positions: &[Point3],
    closedness: Closedness,
) -> Result<TriMesh> {
    assert_eq!(positions.len(), rows * cols);
    let scale = {
        let mut lo = positions[0];
        let mut hi = positions[0];
        for p in positions {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            lo.z = lo.z.min(p.z);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
            hi.z = hi.z.max(p.z);
        }
        (hi - lo).norm()
    };
    let n = rows - 1;
    let m = cols - 1;
    let at = |i: usize, j: usize| positions[i * cols + j];

    let (verts_u, verts_v, vid): (usize, usize, Box<dyn Fn(usize, usize) -> usize>) =
        match closedness {
            Closedness::Open => (rows, cols, Box::new(move |i, j| i * cols + j)),
            Closedness::ClosedTorus => {
                if n < 3 || m < 3 {
                    return Err(Error::InvalidArgument(
                        "torus gluing needs at least 3 distinct rows and columns".into(),
                    ));
                }
                for j in 0..cols {
                    if at(n, j).distance(at(0, j)) > MESH_EPS * scale {
                        return Err(Error::SeamMismatch(format!(
                            "row seam open at column {j}"
                        )));
                    }
                }
                for i in 0..rows {
                    if at(i, m).distance(at(i, 0)) > MESH_EPS * scale {
                        return Err(Error::SeamMismatch(format!("column seam open at row {i}")));
                    }
                }
                (n, m, Box::new(move |i, j| (i % n) * m + (j % m)))
            }
        };

    let mut mesh_positions = vec![Point3::ZERO; verts_u * verts_v];
    let mut params = vec![(0.0, 0.0); verts_u * verts_v];
    let mut roles = vec![VertexRole::Interior; verts_u * verts_v];
    for i in 0..verts_u {
        for j in 0..verts_v {
            let id = vid(i, j);
            mesh_positions[id] = at(i, j);
            params[id] = (i as f64 / n as f64, j as f64 / m as f64);
            roles[id] = match closedness {
                Closedness::Open => {
                    let u_edge = i == 0 || i == n;
                    let v_edge = j == 0 || j == m;
                    if u_edge && v_edge {
                        VertexRole::Corner
                    } else if u_edge || v_edge {
                        VertexRole::Boundary
                    } else {
                        VertexRole::Interior
                    }
                }
                Closedness::ClosedTorus => {
                    if i == 0 || j == 0 {
                        VertexRole::Seam
                    } else {
                        VertexRole::Interior
                    }
                }
            };
        }
    }

    let mut triangles = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            let q = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            for (a, b, c) in [(0, 1, 2), (0, 2, 3)] {
                if (q[b] - q[a]).cross(q[c] - q[a]).norm() <= MESH_EPS * scale * scale {
                    return Err(Error::DegenerateCell {
                        row: i,
                        col: j,
                        detail: "collinear cell corners give a zero-area triangle".into(),
                    });
                }
            }
            // Both triangles keep the low->high diagonal and stay
            // counterclockwise in parameter space.
            triangles.push([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)]);
            triangles.push([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }
    TriMesh::new(mesh_positions, params, roles, triangles)
}

/// Triangulated control surface of a net: each cell split along its
/// low-to-high diagonal, seams identified for closed nets.
pub fn triangulate_net(net: &ControlNet, closedness: Closedness) -> Result<TriMesh> {
    triangulate_grid(net.rows(), net.cols(), net.points(), closedness)
}

/// Assemble the welded control surface of a set of patches produced by
/// uniform subdivision. Patches must tile the unit square on a regular
/// grid and agree bitwise (up to a small tolerance) on shared boundaries.
pub fn mesh_from_patches(patches: &[BezierPatch], closedness: Closedness) -> Result<TriMesh> {
    let first = patches
        .first()
        .ok_or_else(|| Error::InvalidTiling("no patches supplied".into()))?;
    let n = first.net.degree_u();
    let m = first.net.degree_v();
    let wu = first.domain.width_u();
    let wv = first.domain.width_v();
    let gu = (1.0 / wu).round() as usize;
    let gv = (1.0 / wv).round() as usize;
    if gu == 0 || gv == 0 || (gu as f64 * wu - 1.0).abs() > 1e-12 || (gv as f64 * wv - 1.0).abs() > 1e-12
    {
        return Err(Error::InvalidTiling(format!(
            "patch widths ({wu}, {wv}) do not divide the unit square"
        )));
    }
    if patches.len() != gu * gv {
        return Err(Error::InvalidTiling(format!(
            "expected {} patches for a {gu}x{gv} grid, got {}",
            gu * gv,
            patches.len()
        )));
    }

    let grid_rows = n * gu + 1;
    let grid_cols = m * gv + 1;
    let mut slots: Vec<Option<Point3>> = vec![None; grid_rows * grid_cols];
    let mut occupancy = vec![false; gu * gv];
    let scale = patches
        .iter()
        .map(|p| p.net.bbox_diagonal())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);

    for patch in patches {
        if patch.net.degree_u() != n || patch.net.degree_v() != m {
            return Err(Error::InvalidTiling("patches have mixed degrees".into()));
        }
        if (patch.domain.width_u() - wu).abs() > 1e-12 || (patch.domain.width_v() - wv).abs() > 1e-12 {
            return Err(Error::InvalidTiling("patches have mixed sizes".into()));
        }
        let a = (patch.domain.u0 / wu).round() as usize;
        let b = (patch.domain.v0 / wv).round() as usize;
        if a >= gu || b >= gv || occupancy[a * gv + b] {
            return Err(Error::InvalidTiling(format!(
                "patch at ({}, {}) overlaps or escapes the grid",
                patch.domain.u0, patch.domain.v0
            )));
        }
        occupancy[a * gv + b] = true;
        for i in 0..=n {
            for j in 0..=m {
                let slot = (a * n + i) * grid_cols + (b * m + j);
                let p = patch.net.at(i, j);
                match slots[slot] {
                    None => slots[slot] = Some(p),
                    Some(q) => {
                        if p.distance(q) > MESH_EPS * scale {
                            return Err(Error::SeamMismatch(format!(
                                "patches disagree at shared grid point ({}, {}) by {}",
                                a * n + i,
                                b * m + j,
                                p.distance(q)
                            )));
                        }
                    }
                }
            }
        }
    }
    if occupancy.iter().any(|&o| !o) {
        return Err(Error::InvalidTiling("patch grid has gaps".into()));
    }
    let positions: Vec<Point3> = slots.into_iter().map(|s| s.unwrap()).collect();
    triangulate_grid(grid_rows, grid_cols, &positions, closedness)
}

/// Euler characteristic, boundary loops, orientability, closedness.
pub fn topology(mesh: &TriMesh) -> Result<TopologyReport> {
    let edges = mesh.edge_map()?;
    let v = mesh.vertex_count();
    let e = edges.len();
    let f = mesh.triangle_count();

    // Boundary loops: walk edges with a single incident triangle.
    let boundary_edges: Vec<(usize, usize)> =
        edges.iter().filter(|(_, ts)| ts.len() == 1).map(|(k, _)| *k).collect();
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &boundary_edges {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    for (vtx, nbrs) in &adjacency {
        if nbrs.len() != 2 {
            return Err(Error::NonManifold(format!(
                "boundary vertex {vtx} has {} boundary edges",
                nbrs.len()
            )));
        }
    }
    let mut visited: BTreeMap<usize, bool> =
        adjacency.keys().map(|&k| (k, false)).collect();
    let mut boundary_loops = 0;
    for &start in adjacency.keys() {
        if visited[&start] {
            continue;
        }
        boundary_loops += 1;
        let mut prev = start;
        let mut cur = adjacency[&start][0];
        visited.insert(start, true);
        while cur != start {
            visited.insert(cur, true);
            let nbrs = &adjacency[&cur];
            let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
            prev = cur;
            cur = next;
        }
    }

    // Orientability: try to 2-color triangle flips so adjacent triangles
    // traverse shared edges in opposite directions.
    let mut flip: Vec<Option<bool>> = vec![None; f];
    let mut orientable = true;
    'outer: for seed in 0..f {
        if flip[seed].is_some() {
            continue;
        }
        flip[seed] = Some(false);
        let mut stack = vec![seed];
        while let Some(t) = stack.pop() {
            let tri = mesh.triangles()[t];
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                for &other in &edges[&key] {
                    if other == t {
                        continue;
                    }
                    let otri = mesh.triangles()[other];
                    let same_direction = (0..3).any(|k2| {
                        otri[k2] == a && otri[(k2 + 1) % 3] == b
                    });
                    // Opposite traversal means same flip state.
                    let want = if same_direction { !flip[t].unwrap() } else { flip[t].unwrap() };
                    match flip[other] {
                        None => {
                            flip[other] = Some(want);
                            stack.push(other);
                        }
                        Some(existing) => {
                            if existing != want {
                                orientable = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(TopologyReport {
        vertices: v,
        edges: e,
        faces: f,
        euler_char: v as i64 - e as i64 + f as i64,
        boundary_loops,
        orientable,
        closed: boundary_loops == 0,
    })
}

/// True when the mesh has the homeomorphism type its closedness demands
/// (disk for open, torus for closed) and is embedded: the intersection
/// oracle finds no self-intersections.
pub fn homeomorphism_check(mesh: &TriMesh, closedness: Closedness) -> Result<bool> {
    let report = topology(mesh)?;
    let class_ok = match closedness {
        Closedness::Open => {
            report.euler_char == 1 && report.boundary_loops == 1 && report.orientable
        }
        Closedness::ClosedTorus => {
            report.euler_char == 0 && report.boundary_loops == 0 && report.orientable
        }
    };
    if !class_ok {
        return Ok(false);
    }
    Ok(crate::checks::self_intersections(mesh).is_empty())
}

#[cfg(test)]
pub(crate) fn cube_mesh() -> TriMesh {
    // Unit cube, outward-oriented, each face split along a diagonal.
    let positions = vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(1.0, 1.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(1.0, 0.0, 1.0),
        Point3::new(1.0, 1.0, 1.0),
        Point3::new(0.0, 1.0, 1.0),
    ];
    let triangles = vec![
        [0, 2, 1],
        [0, 3, 2], // bottom (z=0), outward = -z
        [4, 5, 6],
        [4, 6, 7], // top
        [0, 1, 5],
        [0, 5, 4], // y=0
        [1, 2, 6],
        [1, 6, 5], // x=1
        [2, 3, 7],
        [2, 7, 6], // y=1
        [3, 0, 4],
        [3, 4, 7], // x=0
    ];
    let params = vec![(0.0, 0.0); 8];
    let roles = vec![VertexRole::Interior; 8];
    TriMesh::new(positions, params, roles, triangles).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezier::{classify_closedness, subdivide_patch};
    use crate::samples;

    fn grid_net(rows: usize, cols: usize) -> ControlNet {
        ControlNet::from_fn(rows, cols, |i, j| {
            Point3::new(i as f64 / (rows - 1) as f64, j as f64 / (cols - 1) as f64, 0.0)
        })
        .unwrap()
    }

    #[test]
    fn single_cell_counts() {
        let mesh = triangulate_net(&grid_net(2, 2), Closedness::Open).unwrap();
        assert_eq!(mesh.vertex_count(), 4);
        assert_eq!(mesh.triangle_count(), 2);
        let topo = topology(&mesh).unwrap();
        assert_eq!(topo.euler_char, 1);
    }

    #[test]
    fn open_grid_counts() {
        let (n, m) = (3, 4);
        let mesh = triangulate_net(&grid_net(n + 1, m + 1), Closedness::Open).unwrap();
        let topo = topology(&mesh).unwrap();
        assert_eq!(topo.vertices, (n + 1) * (m + 1));
        assert_eq!(topo.faces, 2 * n * m);
        assert_eq!(topo.edges, n * (m + 1) + m * (n + 1) + n * m);
        assert_eq!(topo.euler_char, 1);
        assert_eq!(topo.boundary_loops, 1);
        assert!(topo.orientable);
        assert!(!topo.closed);
    }

    #[test]
    fn torus_grid_counts() {
        let (n, m) = (4, 5);
        let net = samples::torus_net(n, m, 2.0, 0.7);
        let mesh = triangulate_net(&net, Closedness::ClosedTorus).unwrap();
        let topo = topology(&mesh).unwrap();
        assert_eq!(topo.vertices, n * m);
        assert_eq!(topo.faces, 2 * n * m);
        assert_eq!(topo.edges, 3 * n * m);
        assert_eq!(topo.euler_char, 0);
        assert_eq!(topo.boundary_loops, 0);
        assert!(topo.orientable);
        assert!(topo.closed);
    }

    #[test]
    fn cube_topology() {
        let topo = topology(&cube_mesh()).unwrap();
        assert_eq!(topo.vertices, 8);
        assert_eq!(topo.faces, 12);
        assert_eq!(topo.euler_char, 2);
        assert!(topo.closed);
        assert!(topo.orientable);
    }

    #[test]
    fn boundary_vertices_match_parameter_boundary() {
        let mesh = triangulate_net(&grid_net(4, 5), Closedness::Open).unwrap();
        for (idx, role) in mesh.roles().iter().enumerate() {
            let (u, v) = mesh.params()[idx];
            let on_rim = u == 0.0 || u == 1.0 || v == 0.0 || v == 1.0;
            match role {
                VertexRole::Interior => assert!(!on_rim),
                _ => assert!(on_rim),
            }
        }
    }

    #[test]
    fn welded_mesh_matches_direct_triangulation_counts() {
        let net = samples::dome_net(0.4);
        let patches = subdivide_patch(&BezierPatch::whole(net));
        let mesh = mesh_from_patches(&patches, Closedness::Open).unwrap();
        // Degree 3, one level: global grid is (3*2+1)^2 vertices.
        assert_eq!(mesh.vertex_count(), 49);
        assert_eq!(topology(&mesh).unwrap().euler_char, 1);
    }

    #[test]
    fn shared_edge_vertices_welded_once() {
        let net = samples::dome_net(0.4);
        let children = subdivide_patch(&BezierPatch::whole(net));
        // Two children sharing a v-edge.
        let pair = vec![children[0].clone(), children[1].clone()];
        let err = mesh_from_patches(&pair, Closedness::Open);
        // A pair does not tile the unit square.
        assert!(matches!(err, Err(Error::InvalidTiling(_))));

        let mesh = mesh_from_patches(&children, Closedness::Open).unwrap();
        let direct: usize = children.iter().map(|c| c.net.rows() * c.net.cols()).sum();
        assert!(mesh.vertex_count() < direct, "welding must deduplicate shared vertices");
    }

    #[test]
    fn torus_euler_invariant_under_subdivision() {
        let net = samples::torus_net(6, 6, 2.0, 0.7);
        let closed = classify_closedness(&net).unwrap();
        let mut patches = vec![BezierPatch::whole(net)];
        for _ in 0..=3 {
            let mesh = mesh_from_patches(&patches, closed).unwrap();
            let topo = topology(&mesh).unwrap();
            assert_eq!(topo.euler_char, 0);
            assert_eq!(topo.faces, 2 * (mesh.vertex_count()));
            patches = patches.iter().flat_map(|p| subdivide_patch(p)).collect();
        }
    }

    #[test]
    fn nonmanifold_edge_detected() {
        // Three triangles sharing one edge.
        let positions = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, -1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let triangles = vec![[0, 1, 2], [0, 1, 3], [0, 1, 4]];
        let mesh = TriMesh::new(
            positions,
            vec![(0.0, 0.0); 5],
            vec![VertexRole::Interior; 5],
            triangles,
        )
        .unwrap();
        assert!(matches!(topology(&mesh), Err(Error::NonManifold(_))));
    }

    #[test]
    fn moebius_band_is_nonorientable() {
        let steps = 8;
        let mut positions = Vec::new();
        for k in 0..steps {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let half = theta / 2.0;
            for s in [-0.3f64, 0.3] {
                positions.push(Point3::new(
                    (1.0 + s * half.cos()) * theta.cos(),
                    (1.0 + s * half.cos()) * theta.sin(),
                    s * half.sin(),
                ));
            }
        }
        let mut triangles = Vec::new();
        for k in 0..steps {
            let a = 2 * k;
            let b = 2 * k + 1;
            // After a full turn the strip reattaches with the two rail
            // vertices swapped.
            let (c, d) = if k + 1 == steps { (1, 0) } else { (2 * k + 2, 2 * k + 3) };
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
        let nverts = positions.len();
        let mesh = TriMesh::new(
            positions,
            vec![(0.0, 0.0); nverts],
            vec![VertexRole::Interior; nverts],
            triangles,
        )
        .unwrap();
        let topo = topology(&mesh).unwrap();
        assert!(!topo.orientable);
    }

    #[test]
    fn homeomorphism_open_grid() {
        let mesh = triangulate_net(&grid_net(4, 4), Closedness::Open).unwrap();
        assert!(homeomorphism_check(&mesh, Closedness::Open).unwrap());
    }

    #[test]
    fn homeomorphism_torus() {
        let net = samples::torus_net(8, 8, 2.0, 0.7);
        let mesh = triangulate_net(&net, Closedness::ClosedTorus).unwrap();
        assert!(homeomorphism_check(&mesh, Closedness::ClosedTorus).unwrap());
    }

    #[test]
    fn homeomorphism_rejects_folded_sheet() {
        let net = samples::folded_sheet_net();
        let mesh = triangulate_net(&net, Closedness::Open).unwrap();
        assert!(!homeomorphism_check(&mesh, Closedness::Open).unwrap());
    }
}
