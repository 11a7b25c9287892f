//! Dimension-generic numeric geometry: points, spheres, circumcenters,
//! fixed-radius sphere placement, and evenly spread directions.
//!
//! Everything here works in R^d for d ≥ 1 and is pure; 2D cases are the
//! d = 2 instantiation, not special code paths. Linear systems are at most
//! (d+1)×(d+1) and are solved by Gaussian elimination with partial pivoting.
//! A system counts as singular when its pivot magnitude falls below
//! `1e-12 ×` the largest absolute input coordinate.

use crate::scalar::CurveScalar;

/// Relative pivot threshold for declaring a bisector system singular.
pub const SINGULARITY_REL_TOL: f64 = 1e-12;

/// A point in R^d. Coordinates are unitless lengths and must be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<S = f64> {
    pub coords: Vec<S>,
}

impl<S> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        assert!(!coords.is_empty(), "points need at least one coordinate");
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl<S: CurveScalar> Point<S> {
    /// Single-coordinate point in R^1.
    pub fn scalar(x: S) -> Self {
        Point { coords: vec![x] }
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point {
            coords: self.coords.iter().map(CurveScalar::to_f64).collect(),
        }
    }
}

impl Point<f64> {
    /// Standard basis vector e_axis (0-based) in R^d.
    pub fn unit(dim: usize, axis: usize) -> Self {
        assert!(axis < dim);
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        Point { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Point {
            coords: vec![0.0; dim],
        }
    }

    pub fn sub(&self, other: &Point<f64>) -> Vec<f64> {
        assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn add_scaled(&self, factor: f64, dir: &[f64]) -> Point<f64> {
        assert_eq!(self.dim(), dir.len());
        Point {
            coords: self
                .coords
                .iter()
                .zip(dir)
                .map(|(a, d)| a + factor * d)
                .collect(),
        }
    }

    pub fn distance(&self, other: &Point<f64>) -> f64 {
        norm(&self.sub(other))
    }

    pub fn distance_sq(&self, other: &Point<f64>) -> f64 {
        self.sub(other).iter().map(|v| v * v).sum()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// A sphere in R^d (a circle when d = 2, a point pair when d = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub center: Point<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    /// The bisector system is singular within tolerance (e.g. collinear
    /// points for d = 2).
    DegenerateInput,
    /// Requested radius is below the circumradius of the points inside
    /// their affine hull; no sphere of that radius passes through them.
    RadiusTooSmall { radius: f64, required: f64 },
    /// The side hint fails to pick exactly one of the two candidate centers.
    AmbiguousSide,
    /// The two reference points are farther apart than the diameter.
    NoSolution { separation: f64, radius: f64 },
}

impl std::fmt::Display for GeometryError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeometryError::DegenerateInput => {
                write!(f, "degenerate input: bisector system is singular")
            }
            GeometryError::RadiusTooSmall { radius, required } => write!(
                f,
                "radius {radius} is smaller than the in-hull circumradius {required}"
            ),
            GeometryError::AmbiguousSide => {
                write!(f, "side hint does not single out one candidate center")
            }
            GeometryError::NoSolution { separation, radius } => write!(
                f,
                "points at separation {separation} admit no common sphere of radius {radius}"
            ),
        }
    }
}

impl std::error::Error for GeometryError {}

fn max_abs_coord(points: &[Point<f64>]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.coords.iter())
        .fold(0.0f64, |acc, c| acc.max(c.abs()))
}

/// Solves `a · x = b` in place by Gaussian elimination with partial
/// pivoting. `scale` is the magnitude of the original geometric input; a
/// pivot below `SINGULARITY_REL_TOL × scale` counts as singular.
fn solve_linear(
    mut a: Vec<Vec<f64>>,
    mut b: Vec<f64>,
    scale: f64,
) -> Result<Vec<f64>, GeometryError> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    let threshold = SINGULARITY_REL_TOL * scale.max(f64::MIN_POSITIVE);

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < threshold {
            return Err(GeometryError::DegenerateInput);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Circumsphere of d+1 affinely independent points in R^d: the unique
/// sphere through all of them, found by solving the d×d system of
/// perpendicular-bisector equations.
pub fn circumcenter(points: &[Point<f64>]) -> Result<Sphere, GeometryError> {
    let d = points[0].dim();
    assert_eq!(
        points.len(),
        d + 1,
        "circumcenter needs exactly d+1 points in R^d"
    );
    assert!(points.iter().all(|p| p.dim() == d));

    let scale = max_abs_coord(points);
    let base = &points[0];
    let mut a = Vec::with_capacity(d);
    let mut b = Vec::with_capacity(d);
    for p in &points[1..] {
        let diff = p.sub(base);
        b.push(dot(&diff, &diff) / 2.0);
        a.push(diff);
    }
    let offset = solve_linear(a, b, scale)?;
    let center = base.add_scaled(1.0, &offset);
    let radius = center.distance(base);
    Ok(Sphere { center, radius })
}

/// Both centers of spheres of the given radius through d points spanning a
/// (d−1)-flat in R^d: the in-hull circumcenter displaced by ±h along the
/// perpendicular line. At the tangent radius the pair collapses to a single
/// point (both entries equal).
pub fn sphere_center_candidates(
    points: &[Point<f64>],
    radius: f64,
) -> Result<(Point<f64>, Point<f64>), GeometryError> {
    let d = points[0].dim();
    assert!(d >= 2, "needs an ambient dimension of at least 2");
    assert_eq!(points.len(), d, "needs exactly d points in R^d");
    assert!(points.iter().all(|p| p.dim() == d));

    let scale = max_abs_coord(points).max(radius.abs());
    let base = &points[0];
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| p.sub(base)).collect();

    // In-hull circumcenter: solve the Gram system for barycentric-style
    // coefficients t with c0 = base + Σ t_i · diff_i.
    let n = diffs.len();
    let in_hull = if n == 0 {
        base.clone()
    } else {
        let mut gram = vec![vec![0.0; n]; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = dot(&diffs[i], &diffs[j]);
            }
            rhs[i] = dot(&diffs[i], &diffs[i]) / 2.0;
        }
        let t = solve_linear(gram, rhs, scale * scale)?;
        let mut c = base.clone();
        for (ti, diff) in t.iter().zip(&diffs) {
            c = c.add_scaled(*ti, diff);
        }
        c
    };

    let in_hull_radius = in_hull.distance(base);
    if radius < in_hull_radius * (1.0 - 1e-12) {
        return Err(GeometryError::RadiusTooSmall {
            radius,
            required: in_hull_radius,
        });
    }

    let axis = perpendicular_direction(&diffs, d, scale)?;
    let h = (radius * radius - in_hull_radius * in_hull_radius).max(0.0).sqrt();
    Ok((in_hull.add_scaled(h, &axis), in_hull.add_scaled(-h, &axis)))
}

/// Center of a sphere of the given radius through d points spanning a
/// (d−1)-flat in R^d. Of the two candidate centers on the line
/// perpendicular to the flat, returns the one whose ball contains
/// `side_hint`; coincident candidates (tangent radius) collapse to one.
/// When the hint keeps neither or both of two distinct candidates, the
/// side is ambiguous and an error is returned.
pub fn sphere_center_with_radius(
    points: &[Point<f64>],
    radius: f64,
    side_hint: &Point<f64>,
) -> Result<Point<f64>, GeometryError> {
    assert_eq!(side_hint.dim(), points[0].dim());
    let scale = max_abs_coord(points).max(radius.abs());
    let hint_tol = 1e-12 * scale.max(1.0);
    let (hi, lo) = sphere_center_candidates(points, radius)?;
    let candidates = if hi == lo { vec![hi] } else { vec![hi, lo] };
    let mut chosen: Vec<Point<f64>> = candidates
        .into_iter()
        .filter(|c| c.distance(side_hint) <= radius + hint_tol)
        .collect();
    match chosen.len() {
        1 => Ok(chosen.pop().unwrap()),
        _ => Err(GeometryError::AmbiguousSide),
    }
}

/// Unit vector orthogonal to all of `span` (which must have rank d−1):
/// Gram-Schmidt over the standard basis, keeping the largest residual.
fn perpendicular_direction(
    span: &[Vec<f64>],
    dim: usize,
    scale: f64,
) -> Result<Vec<f64>, GeometryError> {
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(span.len());
    for v in span {
        let mut w = v.clone();
        for q in &ortho {
            let proj = dot(&w, q);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= proj * qi;
            }
        }
        let len = norm(&w);
        if len < SINGULARITY_REL_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(GeometryError::DegenerateInput);
        }
        for wi in &mut w {
            *wi /= len;
        }
        ortho.push(w);
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for axis in 0..dim {
        let mut w = vec![0.0; dim];
        w[axis] = 1.0;
        for q in &ortho {
            let proj = dot(&w, q);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= proj * qi;
            }
        }
        let len = norm(&w);
        if best.as_ref().map_or(true, |(l, _)| len > *l) {
            best = Some((len, w));
        }
    }
    let (len, mut w) = best.unwrap();
    if len < 1e-9 {
        return Err(GeometryError::DegenerateInput);
    }
    for wi in &mut w {
        *wi /= len;
    }
    Ok(w)
}

/// The two points at distance `radius` from both `p` and `a`, inside the
/// 2-plane through `p` spanned by the orthonormal axes `(u, v)`; the
/// segment p→a must lie in that plane. The pair is symmetric about the
/// segment midpoint and collapses to it at the tangent radius.
pub fn equidistant_pair_in_plane(
    p: &Point<f64>,
    a: &Point<f64>,
    radius: f64,
    u: &Point<f64>,
    v: &Point<f64>,
) -> Result<(Point<f64>, Point<f64>), GeometryError> {
    let d = p.dim();
    assert!(a.dim() == d && u.dim() == d && v.dim() == d);
    debug_assert!(dot(&u.coords, &v.coords).abs() < 1e-9);
    debug_assert!((norm(&u.coords) - 1.0).abs() < 1e-9 && (norm(&v.coords) - 1.0).abs() < 1e-9);

    let w = a.sub(p);
    let x = dot(&w, &u.coords);
    let y = dot(&w, &v.coords);
    let len = norm(&w);
    assert!(len > 0.0, "p and a must be distinct");
    // The segment must lie in the plane: its out-of-plane residual is zero.
    debug_assert!((len * len - (x * x + y * y)).abs() <= 1e-9 * len * len);

    if len > 2.0 * radius * (1.0 + 1e-12) {
        return Err(GeometryError::NoSolution {
            separation: len,
            radius,
        });
    }
    let half = len / 2.0;
    let h = (radius * radius - half * half).max(0.0).sqrt();
    let mid = p.add_scaled(0.5, &w);
    // 90° rotation of the in-plane direction (x, y)/len.
    let perp: Vec<f64> = u
        .coords
        .iter()
        .zip(&v.coords)
        .map(|(ui, vi)| (-y * ui + x * vi) / len)
        .collect();
    Ok((mid.add_scaled(h, &perp), mid.add_scaled(-h, &perp)))
}

/// 2D convenience wrapper for [`equidistant_pair_in_plane`] with the
/// standard axes.
pub fn equidistant_pair(
    p: &Point<f64>,
    a: &Point<f64>,
    radius: f64,
) -> Result<(Point<f64>, Point<f64>), GeometryError> {
    assert_eq!(p.dim(), 2, "use equidistant_pair_in_plane for d > 2");
    equidistant_pair_in_plane(p, a, radius, &Point::unit(2, 0), &Point::unit(2, 1))
}

/// `m` points evenly spread on the circle of the given radius around
/// `center`, inside the plane of the orthonormal axes `(u, v)`. Point j
/// (1-based) sits at angle 2π(j−1)/m from `u`.
pub fn evenly_on_circle(
    center: &Point<f64>,
    radius: f64,
    m: usize,
    u: &Point<f64>,
    v: &Point<f64>,
) -> Vec<Point<f64>> {
    assert!(m >= 1);
    let d = center.dim();
    assert!(u.dim() == d && v.dim() == d);
    debug_assert!(dot(&u.coords, &v.coords).abs() < 1e-9);
    (0..m)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / m as f64;
            let (sin, cos) = theta.sin_cos();
            center
                .add_scaled(radius * cos, &u.coords)
                .add_scaled(radius * sin, &v.coords)
        })
        .collect()
}

/// d+1 unit vectors in R^d with all pairwise dot products equal to −1/d:
/// the vertex directions of a regular simplex centered at the origin.
pub fn regular_simplex_directions(d: usize) -> Vec<Point<f64>> {
    assert!(d >= 1);
    simplex_rec(d).into_iter().map(Point::new).collect()
}

fn simplex_rec(d: usize) -> Vec<Vec<f64>> {
    if d == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    let first_coord = -1.0 / d as f64;
    let tail_scale = (1.0 - first_coord * first_coord).sqrt();
    let mut out = Vec::with_capacity(d + 1);
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    out.push(e1);
    for sub in simplex_rec(d - 1) {
        let mut v = Vec::with_capacity(d);
        v.push(first_coord);
        v.extend(sub.into_iter().map(|c| c * tail_scale));
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[f64]) -> Point<f64> {
        Point::new(coords.to_vec())
    }

    #[test]
    fn circumcenter_symmetric_triangle() {
        let s = circumcenter(&[pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 2.0])]).unwrap();
        assert!((s.center.coords[0] - 1.0).abs() < 1e-12);
        assert!((s.center.coords[1] - 1.0).abs() < 1e-12);
        assert!((s.radius - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn circumcenter_is_equidistant() {
        let points = [pt(&[0.0, 0.0]), pt(&[4.0, 0.0]), pt(&[2.0, 2.0])];
        let s = circumcenter(&points).unwrap();
        assert!((s.center.coords[0] - 2.0).abs() < 1e-12);
        assert!(s.center.coords[1].abs() < 1e-12);
        assert!((s.radius - 2.0).abs() < 1e-12);
        for p in &points {
            assert!((s.center.distance(p) - s.radius).abs() < 1e-12);
        }
    }

    #[test]
    fn circumcenter_rejects_collinear() {
        let err = circumcenter(&[pt(&[0.0, 0.0]), pt(&[1.0, 1.0]), pt(&[2.0, 2.0])]).unwrap_err();
        assert_eq!(err, GeometryError::DegenerateInput);
    }

    #[test]
    fn sphere_center_two_point_symmetric() {
        let c = sphere_center_with_radius(
            &[pt(&[-1.0, 0.0]), pt(&[1.0, 0.0])],
            2.0f64.sqrt(),
            &pt(&[0.0, -1.0]),
        )
        .unwrap();
        assert!(c.coords[0].abs() < 1e-12);
        assert!((c.coords[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_center_tangent_collapses_to_midpoint() {
        let c = sphere_center_with_radius(&[pt(&[0.0, 0.0]), pt(&[0.0, 2.0])], 1.0, &pt(&[0.5, 1.0]))
            .unwrap();
        assert!(c.coords[0].abs() < 1e-12);
        assert!((c.coords[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_center_radius_too_small() {
        let err = sphere_center_with_radius(&[pt(&[-1.0, 0.0]), pt(&[1.0, 0.0])], 0.5, &pt(&[0.0, 0.0]))
            .unwrap_err();
        assert!(matches!(err, GeometryError::RadiusTooSmall { .. }));
    }

    #[test]
    fn sphere_center_in_three_dimensions() {
        // Three axis points at radius 1; the ball of radius 1 around the
        // origin touches all of them, and the origin-side candidate wins.
        let pts = [pt(&[1.0, 0.0, 0.0]), pt(&[0.0, 1.0, 0.0]), pt(&[0.0, 0.0, 1.0])];
        let c = sphere_center_with_radius(&pts, 1.0, &pt(&[0.0, 0.0, 0.0])).unwrap();
        for x in &c.coords {
            assert!(x.abs() < 1e-12);
        }
        for p in &pts {
            assert!((c.distance(p) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equidistant_pair_crosses_the_bisector() {
        let (hi, lo) = equidistant_pair(&pt(&[0.0, 0.0]), &pt(&[2.0, 0.0]), 1.05).unwrap();
        let expect = (1.05f64 * 1.05 - 1.0).sqrt();
        assert!((hi.coords[0] - 1.0).abs() < 1e-12);
        assert!((hi.coords[1] - expect).abs() < 1e-12);
        assert!((lo.coords[1] + expect).abs() < 1e-12);
        // Both satisfy both distance equations.
        for q in [&hi, &lo] {
            assert!((q.distance(&pt(&[0.0, 0.0])) - 1.05).abs() < 1e-12);
            assert!((q.distance(&pt(&[2.0, 0.0])) - 1.05).abs() < 1e-12);
        }
    }

    #[test]
    fn equidistant_pair_tangent_and_unsolvable() {
        let (a, b) = equidistant_pair(&pt(&[0.0, 0.0]), &pt(&[2.0, 0.0]), 1.0).unwrap();
        assert!((a.coords[0] - 1.0).abs() < 1e-12 && a.coords[1].abs() < 1e-12);
        assert_eq!(a, b);

        let err = equidistant_pair(&pt(&[0.0, 0.0]), &pt(&[4.0, 0.0]), 1.0).unwrap_err();
        assert!(matches!(err, GeometryError::NoSolution { .. }));
    }

    #[test]
    fn evenly_on_circle_standard_square() {
        let pts = evenly_on_circle(
            &pt(&[0.0, 0.0]),
            2.0,
            4,
            &Point::unit(2, 0),
            &Point::unit(2, 1),
        );
        let expect = [[2.0, 0.0], [0.0, 2.0], [-2.0, 0.0], [0.0, -2.0]];
        for (p, e) in pts.iter().zip(expect) {
            assert!((p.coords[0] - e[0]).abs() < 1e-12);
            assert!((p.coords[1] - e[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn evenly_on_circle_single_point() {
        let pts = evenly_on_circle(
            &pt(&[3.0, 1.0]),
            0.5,
            1,
            &Point::unit(2, 0),
            &Point::unit(2, 1),
        );
        assert_eq!(pts.len(), 1);
        assert!((pts[0].coords[0] - 3.5).abs() < 1e-12);
        assert!((pts[0].coords[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evenly_on_circle_off_axis_plane() {
        let pts = evenly_on_circle(
            &pt(&[1.0, 0.0, 0.0]),
            1.0,
            3,
            &Point::unit(3, 1),
            &Point::unit(3, 2),
        );
        let side = 3.0f64.sqrt();
        for p in &pts {
            assert!((p.coords[0] - 1.0).abs() < 1e-12);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert!((pts[i].distance(&pts[j]) - side).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn simplex_directions_one_and_two_dimensions() {
        let d1 = regular_simplex_directions(1);
        assert_eq!(d1[0].coords, vec![1.0]);
        assert_eq!(d1[1].coords, vec![-1.0]);

        let d2 = regular_simplex_directions(2);
        assert_eq!(d2.len(), 3);
        for i in 0..3 {
            assert!((norm(&d2[i].coords) - 1.0).abs() < 1e-12);
            for j in i + 1..3 {
                assert!((dot(&d2[i].coords, &d2[j].coords) + 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn simplex_directions_three_dimensions() {
        let dirs = regular_simplex_directions(3);
        assert_eq!(dirs.len(), 4);
        for i in 0..4 {
            assert!((norm(&dirs[i].coords) - 1.0).abs() < 1e-12);
            for j in i + 1..4 {
                let d = dot(&dirs[i].coords, &dirs[j].coords);
                assert!((d + 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }
}
