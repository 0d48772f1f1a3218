//! Ready-made control nets: flat sheets, bumps, a folded sheet whose
//! level-0 control mesh self-intersects, tori, and a cap that wraps past
//! its equator. Used by the test suite and the bundled fixtures.

use crate::bezier::ControlNet;
use crate::point::Point3;

/// Planar grid over the unit square at z = 0.
pub fn flat_net(n: usize, m: usize) -> ControlNet {
    ControlNet::from_fn(n + 1, m + 1, |i, j| {
        Point3::new(i as f64 / n as f64, j as f64 / m as f64, 0.0)
    })
    .unwrap()
}

/// Bicubic bump: straight boundary edges, the four interior control points
/// lifted to height `h`. The surface is z = 9h u(1-u) v(1-v) over the unit
/// square, so all four boundary curves are straight segments.
pub fn dome_net(h: f64) -> ControlNet {
    ControlNet::from_fn(4, 4, |i, j| {
        let z = if (1..=2).contains(&i) && (1..=2).contains(&j) { h } else { 0.0 };
        Point3::new(i as f64 / 3.0, j as f64 / 3.0, z)
    })
    .unwrap()
}

/// Bicubic saddle with straight boundary edges: interior control points
/// alternate between +h and -h.
pub fn saddle_net(h: f64) -> ControlNet {
    ControlNet::from_fn(4, 4, |i, j| {
        let z = match (i, j) {
            (1, 1) | (2, 2) => h,
            (1, 2) | (2, 1) => -h,
            _ => 0.0,
        };
        Point3::new(i as f64 / 3.0, j as f64 / 3.0, z)
    })
    .unwrap()
}

/// A smooth embedded sheet whose level-0 control mesh folds through
/// itself: a planar cubic whose control polygon self-crosses (but whose
/// curve is simple) extruded along y. The first and third extruded walls
/// of the control surface cross each other.
pub fn folded_sheet_net() -> ControlNet {
    let curve = [
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.4, 0.0, 1.0),
        Point3::new(0.6, 0.0, 1.0),
        Point3::new(1.0, 0.0, 0.0),
    ];
    ControlNet::from_fn(4, 4, |i, j| {
        let c = curve[i];
        Point3::new(c.x, j as f64 / 3.0, c.z)
    })
    .unwrap()
}

/// Degree-4 doubly-curved cap sampled from a surface of revolution that
/// reaches just past its equator. Regular everywhere, with a genuinely
/// nonzero total Gaussian curvature.
pub fn cap_net() -> ControlNet {
    let alpha0 = 0.25;
    let alpha1 = 1.8;
    let beta0 = -0.8;
    let beta1 = 0.8;
    ControlNet::from_fn(5, 5, |i, j| {
        let alpha = alpha0 + (alpha1 - alpha0) * i as f64 / 4.0;
        let beta = beta0 + (beta1 - beta0) * j as f64 / 4.0;
        Point3::new(alpha.sin() * beta.cos(), alpha.sin() * beta.sin(), alpha.cos())
    })
    .unwrap()
}

/// Degree-4 sheet whose profile curls through more than a half turn,
/// extruded along y. The extrusion is regular (it is developable), but the
/// control-mesh normals at level 0 span more than pi, so the normal-cone
/// condition fails until subdivision splits the curl.
pub fn curl_net() -> ControlNet {
    let alpha0 = 0.25;
    let alpha1 = 5.0;
    ControlNet::from_fn(5, 5, |i, j| {
        let alpha = alpha0 + (alpha1 - alpha0) * i as f64 / 4.0;
        Point3::new(alpha.sin(), j as f64 / 4.0, alpha.cos())
    })
    .unwrap()
}

/// Torus-of-revolution control net with the first minor row and major
/// column duplicated, so both seam patterns hold with exact equality.
/// `i` runs around the tube (radius `r`), `j` around the axis (radius `big_r`).
pub fn torus_net(n: usize, m: usize, big_r: f64, r: f64) -> ControlNet {
    torus_like_net(n, m, |i, j| {
        let psi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        torus_point(big_r, r, psi, phi)
    })
}

/// Torus net with a checkerboard radial wobble of relative amplitude
/// `amp`: control points alternate between tube radii r(1 +/- amp). The
/// smooth surface stays embedded for moderate amplitudes while the coarse
/// control mesh is far from the underlying torus. `n` and `m` must be even
/// so the checkerboard matches up across the seams.
pub fn wobbly_torus_net(n: usize, m: usize, big_r: f64, r: f64, amp: f64) -> ControlNet {
    assert!(n % 2 == 0 && m % 2 == 0, "checkerboard wobble needs even degrees");
    torus_like_net(n, m, |i, j| {
        let psi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        torus_point(big_r, r * (1.0 + sign * amp), psi, phi)
    })
}

fn torus_point(big_r: f64, rho: f64, psi: f64, phi: f64) -> Point3 {
    Point3::new(
        (big_r + rho * psi.cos()) * phi.cos(),
        (big_r + rho * psi.cos()) * phi.sin(),
        rho * psi.sin(),
    )
}

/// Build an (n+1) x (m+1) net from values on the reduced n x m grid,
/// copying row 0 to row n and column 0 to column m so seam equality is
/// bitwise exact.
fn torus_like_net(n: usize, m: usize, f: impl Fn(usize, usize) -> Point3) -> ControlNet {
    ControlNet::from_fn(n + 1, m + 1, |i, j| f(i % n, j % m)).unwrap()
}
