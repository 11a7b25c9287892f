//! Discrete Fréchet distance: the O(k²) dynamic program, an early-exit
//! decision variant, an exponential full-enumeration oracle, and the
//! curve ↔ point embedding.
//!
//! The distance is the minimum over all monotone couplings of the two
//! vertex sequences of the maximum paired vertex distance. The dynamic
//! program fills the full |P|×|Q| table
//!
//! ```text
//! cell(i,j) = max(|P_i − Q_j|, min(cell(i−1,j), cell(i,j−1), cell(i−1,j−1)))
//! ```
//!
//! All entry points are generic over the scalar internally, so the same
//! recurrence runs on floats and on exact rationals (see [`crate::scalar`]
//! for the separation encoding used on each side).

use num::rational::BigRational;

use crate::geometry::Point;
use crate::scalar::CurveScalar;

/// Identifies curve S_{ij}: `group` is the set S_i, `index` the satellite j.
/// Both are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub group: usize,
    pub index: usize,
}

impl Label {
    pub fn new(group: usize, index: usize) -> Self {
        Label { group, index }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S{}_{}", self.group, self.index)
    }
}

/// A polygonal curve: a nonempty vertex list of uniform dimension.
/// Consecutive duplicate vertices are permitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<S = f64> {
    vertices: Vec<Point<S>>,
    label: Option<Label>,
}

impl<S> Curve<S> {
    pub fn new(vertices: Vec<Point<S>>) -> Self {
        assert!(!vertices.is_empty(), "curves need at least one vertex");
        let d = vertices[0].dim();
        assert!(
            vertices.iter().all(|v| v.dim() == d),
            "curve vertices must share one dimension"
        );
        Curve {
            vertices,
            label: None,
        }
    }

    pub fn labeled(group: usize, index: usize, vertices: Vec<Point<S>>) -> Self {
        let mut c = Curve::new(vertices);
        c.label = Some(Label::new(group, index));
        c
    }

    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    pub fn label(&self) -> Option<Label> {
        self.label
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty vertex lists
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

impl<S: CurveScalar> Curve<S> {
    /// Curve in R^1 from plain coordinates.
    pub fn one_dim(coords: Vec<S>) -> Self {
        Curve::new(coords.into_iter().map(Point::scalar).collect())
    }

    pub fn to_f64(&self) -> Curve<f64> {
        Curve {
            vertices: self.vertices.iter().map(Point::to_f64).collect(),
            label: self.label,
        }
    }
}

/// Size cap for the full coupling enumeration.
pub const BRUTEFORCE_VERTEX_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum DfdError {
    DimensionMismatch { left: usize, right: usize },
    TooLarge { total: usize, cap: usize },
}

impl std::fmt::Display for DfdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DfdError::DimensionMismatch { left, right } => {
                write!(f, "curves live in different dimensions ({left} vs {right})")
            }
            DfdError::TooLarge { total, cap } => write!(
                f,
                "coupling enumeration capped at {cap} total vertices, got {total}"
            ),
        }
    }
}

impl std::error::Error for DfdError {}

fn check_dims<S>(p: &Curve<S>, q: &Curve<S>) -> Result<(), DfdError> {
    if p.dim() != q.dim() {
        return Err(DfdError::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(())
}

fn pmax<S: Clone + PartialOrd>(a: &S, b: &S) -> S {
    if a < b {
        b.clone()
    } else {
        a.clone()
    }
}

fn pmin<S: Clone + PartialOrd>(a: &S, b: &S) -> S {
    if b < a {
        b.clone()
    } else {
        a.clone()
    }
}

/// Runs the dynamic program and returns the final cell, in separation
/// units of the scalar.
pub(crate) fn dfd_separation<S: CurveScalar>(p: &Curve<S>, q: &Curve<S>) -> S {
    let (np, nq) = (p.len(), q.len());
    let sep =
        |i: usize, j: usize| S::vertex_separation(&p.vertices[i].coords, &q.vertices[j].coords);

    let mut table: Vec<S> = Vec::with_capacity(np * nq);
    for i in 0..np {
        for j in 0..nq {
            let d = sep(i, j);
            let cell = match (i, j) {
                (0, 0) => d,
                (_, 0) => pmax(&table[(i - 1) * nq], &d),
                (0, _) => pmax(&table[j - 1], &d),
                _ => {
                    let up = &table[(i - 1) * nq + j];
                    let left = &table[i * nq + j - 1];
                    let diag = &table[(i - 1) * nq + j - 1];
                    pmax(&pmin(&pmin(up, left), diag), &d)
                }
            };
            table.push(cell);
        }
    }
    table.pop().unwrap()
}

/// Discrete Fréchet distance between two curves of the same dimension.
pub fn discrete_frechet(p: &Curve<f64>, q: &Curve<f64>) -> Result<f64, DfdError> {
    check_dims(p, q)?;
    Ok(dfd_separation(p, q))
}

/// Exact discrete Fréchet distance on rational curves. The squared-distance
/// table keeps every value rational; the final exact square root always
/// exists for 1-dimensional curves (each squared distance is the square of
/// a coordinate difference) and `None` is returned when it does not.
pub fn discrete_frechet_exact(
    p: &Curve<BigRational>,
    q: &Curve<BigRational>,
) -> Result<Option<BigRational>, DfdError> {
    check_dims(p, q)?;
    Ok(BigRational::separation_to_distance(&dfd_separation(p, q)))
}

/// Decision variant: is dfd(P, Q) ≤ ρ + tol? Boolean reachability over the
/// cells whose vertex distance passes the threshold; cheaper than the value
/// DP when the answer is no.
pub fn discrete_frechet_decision(
    p: &Curve<f64>,
    q: &Curve<f64>,
    rho: f64,
    tol: f64,
) -> Result<bool, DfdError> {
    check_dims(p, q)?;
    let (np, nq) = (p.len(), q.len());
    let threshold = rho + tol;
    let within = |i: usize, j: usize| {
        f64::vertex_separation(&p.vertices()[i].coords, &q.vertices()[j].coords) <= threshold
    };

    let mut reach = vec![false; np * nq];
    for i in 0..np {
        for j in 0..nq {
            if !within(i, j) {
                continue;
            }
            reach[i * nq + j] = match (i, j) {
                (0, 0) => true,
                (_, 0) => reach[(i - 1) * nq],
                (0, _) => reach[j - 1],
                _ => {
                    reach[(i - 1) * nq + j]
                        || reach[i * nq + j - 1]
                        || reach[(i - 1) * nq + j - 1]
                }
            };
        }
        // Row of unreachable cells: no coupling can cross it.
        if !reach[i * nq..(i + 1) * nq].iter().any(|&r| r) {
            return Ok(false);
        }
    }
    Ok(reach[np * nq - 1])
}

pub(crate) fn bruteforce_separation<S: CurveScalar>(
    p: &Curve<S>,
    q: &Curve<S>,
) -> Result<S, DfdError> {
    let total = p.len() + q.len();
    if total > BRUTEFORCE_VERTEX_CAP {
        return Err(DfdError::TooLarge {
            total,
            cap: BRUTEFORCE_VERTEX_CAP,
        });
    }

    fn walk<S: CurveScalar>(p: &Curve<S>, q: &Curve<S>, i: usize, j: usize, acc: &S) -> S {
        let here = S::vertex_separation(&p.vertices()[i].coords, &q.vertices()[j].coords);
        let acc = pmax(acc, &here);
        let at_p_end = i + 1 == p.len();
        let at_q_end = j + 1 == q.len();
        if at_p_end && at_q_end {
            return acc;
        }
        let mut best: Option<S> = None;
        let mut consider = |value: S| {
            best = Some(match best.take() {
                Some(b) => pmin(&b, &value),
                None => value,
            });
        };
        if !at_p_end {
            consider(walk(p, q, i + 1, j, &acc));
        }
        if !at_q_end {
            consider(walk(p, q, i, j + 1, &acc));
        }
        if !at_p_end && !at_q_end {
            consider(walk(p, q, i + 1, j + 1, &acc));
        }
        best.unwrap()
    }

    Ok(walk(p, q, 0, 0, &num::Zero::zero()))
}

/// Independent oracle: enumerates every monotone coupling (no memoization)
/// and takes the min-max directly. Exponential; capped at
/// [`BRUTEFORCE_VERTEX_CAP`] total vertices. Uses the same vertex-distance
/// arithmetic as the dynamic program, so agreement is bit-for-bit.
pub fn discrete_frechet_bruteforce(p: &Curve<f64>, q: &Curve<f64>) -> Result<f64, DfdError> {
    check_dims(p, q)?;
    bruteforce_separation(p, q)
}

/// The curve ↔ point correspondence: a curve with k vertices in R^d maps to
/// the point in R^{dk} that concatenates its vertex coordinates in order.
pub fn embed<S: Clone>(curve: &Curve<S>) -> Point<S> {
    Point::new(
        curve
            .vertices()
            .iter()
            .flat_map(|v| v.coords.iter().cloned())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;

    fn curve1(coords: &[f64]) -> Curve<f64> {
        Curve::one_dim(coords.to_vec())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn identity_is_zero() {
        let p = Curve::new(vec![
            Point::new(vec![1.0, 2.0]),
            Point::new(vec![3.0, -1.0]),
            Point::new(vec![3.0, -1.0]),
        ]);
        assert_eq!(discrete_frechet(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn single_vertices() {
        assert_eq!(
            discrete_frechet(&curve1(&[0.0]), &curve1(&[5.0])).unwrap(),
            5.0
        );
    }

    #[test]
    fn two_vertex_pair_matches_hand_enumeration() {
        // Couplings of two 2-vertex curves: diagonal, and the two dog-legs.
        let p = curve1(&[-1.5, 4.5]);
        let q = curve1(&[0.0, 2.0]);
        assert_eq!(discrete_frechet(&p, &q).unwrap(), 2.5);
        assert_eq!(discrete_frechet_bruteforce(&p, &q).unwrap(), 2.5);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = curve1(&[0.0]);
        let q = Curve::new(vec![Point::new(vec![0.0, 0.0])]);
        assert!(matches!(
            discrete_frechet(&p, &q),
            Err(DfdError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn decision_variant_brackets_the_value() {
        let p = curve1(&[-1.5, 4.5]);
        assert!(discrete_frechet_decision(&p, &p, 0.0, 0.0).unwrap());

        let q = curve1(&[0.0, 2.0]); // dfd = 2.5
        assert!(!discrete_frechet_decision(&p, &q, 1.5, 1e-9).unwrap());
        let q = curve1(&[0.0, 3.0]); // dfd = 1.5
        assert!(discrete_frechet_decision(&p, &q, 1.5, 1e-9).unwrap());
    }

    #[test]
    fn decision_flips_exactly_at_the_distance() {
        let p = curve1(&[-1.5, 4.5]);
        let q = curve1(&[0.0, 2.0]);
        let v = discrete_frechet(&p, &q).unwrap();
        assert!(discrete_frechet_decision(&p, &q, v, 0.0).unwrap());
        assert!(!discrete_frechet_decision(&p, &q, v.next_down(), 0.0).unwrap());
    }

    #[test]
    fn bruteforce_simple_and_capped() {
        let p = curve1(&[0.0, 4.0]);
        let q = curve1(&[0.0, 2.0]);
        assert_eq!(discrete_frechet_bruteforce(&p, &q).unwrap(), 2.0);

        let p7 = curve1(&[0.0; 7]);
        let q6 = curve1(&[0.0; 6]);
        assert!(matches!(
            discrete_frechet_bruteforce(&p7, &q6),
            Err(DfdError::TooLarge { total: 13, .. })
        ));
    }

    #[test]
    fn exact_path_returns_rational_distances() {
        let p = Curve::one_dim(vec![rat(-3, 2), rat(9, 2)]);
        let q = Curve::one_dim(vec![rat(0, 1), rat(3, 1)]);
        assert_eq!(discrete_frechet_exact(&p, &q).unwrap(), Some(rat(3, 2)));
    }

    #[test]
    fn exact_matches_float_on_one_dimension() {
        let coords_p = [-3i64, 1, 7, 8];
        let coords_q = [0i64, 2, 6];
        let pr = Curve::one_dim(coords_p.iter().map(|&c| rat(c, 1)).collect());
        let qr = Curve::one_dim(coords_q.iter().map(|&c| rat(c, 1)).collect());
        let pf = curve1(&coords_p.map(|c| c as f64));
        let qf = curve1(&coords_q.map(|c| c as f64));
        let exact = discrete_frechet_exact(&pr, &qr).unwrap().unwrap();
        use crate::scalar::CurveScalar;
        assert_eq!(exact.to_f64(), discrete_frechet(&pf, &qf).unwrap());
    }

    #[test]
    fn lower_bound_by_endpoints() {
        let p = curve1(&[0.0, 10.0, 4.0]);
        let q = curve1(&[1.0, -2.0]);
        let v = discrete_frechet(&p, &q).unwrap();
        assert!(v >= 1.0 && v >= 6.0);
    }

    #[test]
    fn embed_concatenates_vertex_coordinates() {
        let c = Curve::new(vec![Point::new(vec![1.0, 2.0]), Point::new(vec![3.0, 4.0])]);
        assert_eq!(embed(&c).coords, vec![1.0, 2.0, 3.0, 4.0]);

        let single = Curve::new(vec![Point::new(vec![7.0, -1.0, 0.5])]);
        assert_eq!(embed(&single).coords, vec![7.0, -1.0, 0.5]);

        let line = curve1(&[0.0, 4.0, 8.0]);
        assert_eq!(embed(&line).coords, vec![0.0, 4.0, 8.0]);
    }
}
