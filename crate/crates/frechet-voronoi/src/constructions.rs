//! Lower-bound curve families, query synthesis, and predicted neighbor sets.
//!
//! A family consists of k anchor points p_1,…,p_k and G groups of m
//! satellite points each; curve S_{ij} follows the anchor sequence except at
//! its group's host anchor, which it replaces by satellite a_{ij}. Picking
//! one satellite index per group (an [`IndexTuple`]) selects a target
//! nearest-neighbor set, and [`synthesize_query`] produces a query curve
//! realizing exactly that set — one distinct Voronoi region per tuple.
//!
//! Layouts by dimension:
//!
//! * d = 1: anchors at (i−1)·2m; groups 1 and 2 flank p_2 at integer
//!   offsets (a_{1j} = p_2 − j, a_{2j} = p_2 + j); group i ≥ 3 sits at
//!   p_i − j/(m+1). All coordinates are rational, so this family supports
//!   exact certification.
//! * d ≥ 2: anchors spaced 4r along the first axis. Group 1 is m points on
//!   the radius-2r circle around p_1 in the (e_1, e_2)-plane. At p_2, d+1
//!   groups sit at radius r along regular-simplex directions, pushed
//!   outward by ε·(j−1)/(m−1). At each later anchor, d groups sit on the
//!   positive coordinate axes at radius r with outward offsets
//!   δ·(j−1)/(m−1).
//!
//! The offset schedules are strictly increasing with the j = 1 point
//! unmoved, which makes the prefix structure of the neighbor sets sharp.

use num::rational::BigRational;
use std::collections::BTreeSet;

use crate::dfd::{Curve, Label};
use crate::geometry::{
    circumcenter, equidistant_pair_in_plane, evenly_on_circle, regular_simplex_directions,
    sphere_center_candidates, GeometryError, Point,
};
use crate::scalar::CurveScalar;

/// Parameters of one lower-bound family. `r`, `epsilon`, and `delta` apply
/// only to d ≥ 2; the 1-dimensional layout uses fixed absolute coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionParams {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub r: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
}

impl ConstructionParams {
    pub fn one_dim(k: usize, m: usize) -> Self {
        ConstructionParams {
            d: 1,
            k,
            m,
            r: None,
            epsilon: None,
            delta: None,
        }
    }

    /// Fills in r = 1 and ε = δ = 0.9 × min(ε bound, δ bound) for d ≥ 2,
    /// comfortably inside the constraints with healthy margins.
    pub fn with_defaults(d: usize, k: usize, m: usize) -> Self {
        if d == 1 {
            return Self::one_dim(k, m);
        }
        let r = 1.0;
        let slack = 0.9 * Self::epsilon_bound(r, m.max(3)).min(Self::delta_bound(r, d));
        ConstructionParams {
            d,
            k,
            m,
            r: Some(r),
            epsilon: Some(slack),
            delta: Some(slack),
        }
    }

    /// Largest admissible satellite offset at p_2: ε must stay strictly
    /// below r·(1/cos(π/m) − 1) so the first query vertex can separate one
    /// satellite of the p_1 circle from the rest.
    pub fn epsilon_bound(r: f64, m: usize) -> f64 {
        r * (1.0 / (std::f64::consts::PI / m as f64).cos() - 1.0)
    }

    /// Largest admissible axis offset at p_i (i ≥ 3): with offsets up to δ,
    /// the d chosen axis satellites have in-hull circumradius
    /// (r+δ)·√((d−1)/d), which must not exceed the smallest realizable
    /// sphere radius r. For d = 2 this is the familiar (√2 − 1)·r.
    pub fn delta_bound(r: f64, d: usize) -> f64 {
        r * ((d as f64 / (d as f64 - 1.0)).sqrt() - 1.0)
    }

    /// Number of satellite groups G: k when d = 1, d(k−1)+2 when d ≥ 2.
    pub fn group_count(&self) -> usize {
        if self.d == 1 {
            self.k
        } else {
            self.d * (self.k - 1) + 2
        }
    }

    /// Total number of curves n = m·G.
    pub fn curve_count(&self) -> usize {
        self.m * self.group_count()
    }

    /// Checks every constraint and returns all violations, not just the
    /// first. An empty list means the parameters are buildable.
    pub fn validate(&self) -> Vec<ParamViolation> {
        let mut v = Vec::new();
        if self.d == 0 {
            v.push(ParamViolation::DimensionZero);
            return v;
        }
        if self.k < 2 {
            v.push(ParamViolation::TooFewVertices { k: self.k });
        }
        if self.d == 1 {
            if self.m < 1 {
                v.push(ParamViolation::TooFewSatellites {
                    m: self.m,
                    minimum: 1,
                });
            }
            for (field, value) in [
                ("r", self.r),
                ("epsilon", self.epsilon),
                ("delta", self.delta),
            ] {
                if value.is_some() {
                    v.push(ParamViolation::NotAOneDimParameter { field });
                }
            }
            return v;
        }

        if self.m < 3 {
            v.push(ParamViolation::TooFewSatellites {
                m: self.m,
                minimum: 3,
            });
        }
        let r = match self.r {
            None => {
                v.push(ParamViolation::MissingField { field: "r" });
                return v;
            }
            Some(r) if !(r.is_finite() && r > 0.0) => {
                v.push(ParamViolation::NonpositiveRadius { r });
                return v;
            }
            Some(r) => r,
        };
        match self.epsilon {
            None => v.push(ParamViolation::MissingField { field: "epsilon" }),
            Some(e) if !(e.is_finite() && e > 0.0) => {
                v.push(ParamViolation::NonpositiveOffset { field: "epsilon" })
            }
            Some(e) => {
                let bound = Self::epsilon_bound(r, self.m.max(3));
                if self.m >= 3 && e >= bound {
                    v.push(ParamViolation::EpsilonTooLarge { epsilon: e, bound });
                }
            }
        }
        match self.delta {
            None => v.push(ParamViolation::MissingField { field: "delta" }),
            Some(dl) if !(dl.is_finite() && dl > 0.0) => {
                v.push(ParamViolation::NonpositiveOffset { field: "delta" })
            }
            Some(dl) => {
                let bound = Self::delta_bound(r, self.d);
                if dl > bound {
                    v.push(ParamViolation::DeltaTooLarge { delta: dl, bound });
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamViolation {
    DimensionZero,
    TooFewVertices { k: usize },
    TooFewSatellites { m: usize, minimum: usize },
    MissingField { field: &'static str },
    NotAOneDimParameter { field: &'static str },
    NonpositiveRadius { r: f64 },
    NonpositiveOffset { field: &'static str },
    EpsilonTooLarge { epsilon: f64, bound: f64 },
    DeltaTooLarge { delta: f64, bound: f64 },
}

impl std::fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamViolation::DimensionZero => write!(f, "dimension d must be at least 1"),
            ParamViolation::TooFewVertices { k } => {
                write!(f, "curves need at least 2 vertices, got k = {k}")
            }
            ParamViolation::TooFewSatellites { m, minimum } => {
                write!(f, "need at least {minimum} satellites per group, got m = {m}")
            }
            ParamViolation::MissingField { field } => {
                write!(f, "{field} is required for d >= 2")
            }
            ParamViolation::NotAOneDimParameter { field } => {
                write!(f, "{field} is not a parameter of the 1-dimensional construction")
            }
            ParamViolation::NonpositiveRadius { r } => {
                write!(f, "radius must be positive and finite, got r = {r}")
            }
            ParamViolation::NonpositiveOffset { field } => {
                write!(f, "{field} must be positive and finite")
            }
            ParamViolation::EpsilonTooLarge { epsilon, bound } => write!(
                f,
                "epsilon = {epsilon} violates epsilon < r*(1/cos(pi/m) - 1) = {bound}"
            ),
            ParamViolation::DeltaTooLarge { delta, bound } => write!(
                f,
                "delta = {delta} violates delta <= r*(sqrt(d/(d-1)) - 1) = {bound}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstructionError {
    InvalidParams(Vec<ParamViolation>),
    /// Exact families exist only for d = 1.
    NotOneDimensional { d: usize },
    /// The sphere radius realized by some extreme satellite choice at p_2
    /// escapes [r, r+ε]; the offsets are too loose for this dimension.
    EpsilonGeometry { realized: f64, lo: f64, hi: f64 },
}

impl std::fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructionError::InvalidParams(violations) => {
                write!(f, "invalid parameters:")?;
                for v in violations {
                    write!(f, "\n  - {v}")?;
                }
                Ok(())
            }
            ConstructionError::NotOneDimensional { d } => {
                write!(f, "exact construction requires d = 1, got d = {d}")
            }
            ConstructionError::EpsilonGeometry { realized, lo, hi } => write!(
                f,
                "extreme satellite choice realizes sphere radius {realized} outside [{lo}, {hi}]"
            ),
        }
    }
}

impl std::error::Error for ConstructionError {}

/// One group of m satellites perturbing a single host anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct SatelliteGroup<S = f64> {
    /// 1-based group index i of S_i.
    pub id: usize,
    /// 0-based index into the anchor list of the perturbed vertex.
    pub host: usize,
    /// Satellites a_{i1},…,a_{im}, in index order.
    pub satellites: Vec<Point<S>>,
}

/// A complete lower-bound family: anchors, satellite groups, and the m·G
/// labeled curves. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily<S = f64> {
    params: ConstructionParams,
    anchors: Vec<Point<S>>,
    groups: Vec<SatelliteGroup<S>>,
    curves: Vec<Curve<S>>,
}

impl<S: CurveScalar> CurveFamily<S> {
    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn anchors(&self) -> &[Point<S>] {
        &self.anchors
    }

    pub fn groups(&self) -> &[SatelliteGroup<S>] {
        &self.groups
    }

    pub fn curves(&self) -> &[Curve<S>] {
        &self.curves
    }

    pub fn dim(&self) -> usize {
        self.params.d
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn curve(&self, label: Label) -> Option<&Curve<S>> {
        if label.group == 0 || label.index == 0 || label.index > self.params.m {
            return None;
        }
        self.curves.get((label.group - 1) * self.params.m + (label.index - 1))
    }

    pub fn satellite(&self, label: Label) -> Option<&Point<S>> {
        self.groups
            .get(label.group - 1)
            .and_then(|g| g.satellites.get(label.index - 1))
    }

    /// Reassembles a family from raw parts, enforcing the structural
    /// invariants (counts, dimensions, canonical label order) but not the
    /// geometric ones — certification is the verifier's job, so a family
    /// with tampered coordinates must load and then fail verification.
    pub fn from_parts(
        params: ConstructionParams,
        anchors: Vec<Point<S>>,
        groups: Vec<SatelliteGroup<S>>,
        curves: Vec<Curve<S>>,
    ) -> Result<Self, FamilyStructureError> {
        let (d, k, m, g) = (params.d, params.k, params.m, params.group_count());
        if anchors.len() != k {
            return Err(FamilyStructureError::AnchorCount {
                expected: k,
                got: anchors.len(),
            });
        }
        if groups.len() != g {
            return Err(FamilyStructureError::GroupCount {
                expected: g,
                got: groups.len(),
            });
        }
        if curves.len() != m * g {
            return Err(FamilyStructureError::CurveCount {
                expected: m * g,
                got: curves.len(),
            });
        }
        for p in anchors.iter().chain(groups.iter().flat_map(|gr| gr.satellites.iter())) {
            if p.dim() != d {
                return Err(FamilyStructureError::WrongDimension {
                    expected: d,
                    got: p.dim(),
                });
            }
        }
        for (pos, group) in groups.iter().enumerate() {
            if group.id != pos + 1 {
                return Err(FamilyStructureError::GroupId {
                    position: pos,
                    expected: pos + 1,
                    got: group.id,
                });
            }
            if group.host >= k {
                return Err(FamilyStructureError::HostOutOfRange {
                    group: group.id,
                    host: group.host,
                    k,
                });
            }
            if group.satellites.len() != m {
                return Err(FamilyStructureError::SatelliteCount {
                    group: group.id,
                    expected: m,
                    got: group.satellites.len(),
                });
            }
        }
        for (pos, curve) in curves.iter().enumerate() {
            let expected = Label::new(pos / m + 1, pos % m + 1);
            if curve.label() != Some(expected) {
                return Err(FamilyStructureError::LabelOutOfOrder {
                    position: pos,
                    expected,
                });
            }
            if curve.len() != k {
                return Err(FamilyStructureError::CurveLength {
                    label: expected,
                    expected: k,
                    got: curve.len(),
                });
            }
            if curve.dim() != d {
                return Err(FamilyStructureError::WrongDimension {
                    expected: d,
                    got: curve.dim(),
                });
            }
        }
        Ok(CurveFamily {
            params,
            anchors,
            groups,
            curves,
        })
    }
}

impl CurveFamily<BigRational> {
    /// Nearest-float view of an exact family, for the float verification
    /// path and rendering.
    pub fn to_f64(&self) -> CurveFamily<f64> {
        CurveFamily {
            params: self.params.clone(),
            anchors: self.anchors.iter().map(Point::to_f64).collect(),
            groups: self
                .groups
                .iter()
                .map(|g| SatelliteGroup {
                    id: g.id,
                    host: g.host,
                    satellites: g.satellites.iter().map(Point::to_f64).collect(),
                })
                .collect(),
            curves: self.curves.iter().map(Curve::to_f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyStructureError {
    AnchorCount { expected: usize, got: usize },
    GroupCount { expected: usize, got: usize },
    CurveCount { expected: usize, got: usize },
    GroupId { position: usize, expected: usize, got: usize },
    HostOutOfRange { group: usize, host: usize, k: usize },
    SatelliteCount { group: usize, expected: usize, got: usize },
    LabelOutOfOrder { position: usize, expected: Label },
    CurveLength { label: Label, expected: usize, got: usize },
    WrongDimension { expected: usize, got: usize },
}

impl std::fmt::Display for FamilyStructureError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyStructureError::AnchorCount { expected, got } => {
                write!(f, "expected {expected} anchors, got {got}")
            }
            FamilyStructureError::GroupCount { expected, got } => {
                write!(f, "expected {expected} groups, got {got}")
            }
            FamilyStructureError::CurveCount { expected, got } => {
                write!(f, "expected {expected} curves, got {got}")
            }
            FamilyStructureError::GroupId {
                position,
                expected,
                got,
            } => write!(f, "group at position {position}: id {got}, expected {expected}"),
            FamilyStructureError::HostOutOfRange { group, host, k } => {
                write!(f, "group {group} hosts at anchor {host}, but k = {k}")
            }
            FamilyStructureError::SatelliteCount {
                group,
                expected,
                got,
            } => write!(f, "group {group}: {got} satellites, expected {expected}"),
            FamilyStructureError::LabelOutOfOrder { position, expected } => {
                write!(f, "curve at position {position} is not {expected}")
            }
            FamilyStructureError::CurveLength {
                label,
                expected,
                got,
            } => write!(f, "curve {label} has {got} vertices, expected {expected}"),
            FamilyStructureError::WrongDimension { expected, got } => {
                write!(f, "coordinate dimension {got}, expected {expected}")
            }
        }
    }
}

impl std::error::Error for FamilyStructureError {}

/// One satellite choice per group; tuple position i−1 holds j_i ∈ [1, m].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTuple {
    choices: Vec<usize>,
}

impl IndexTuple {
    pub fn new(choices: Vec<usize>) -> Self {
        IndexTuple { choices }
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// Lexicographic enumeration of all m^G tuples.
    pub fn all(m: usize, groups: usize) -> impl Iterator<Item = IndexTuple> {
        let mut next = if m == 0 { None } else { Some(vec![1usize; groups]) };
        std::iter::from_fn(move || {
            let current = next.clone()?;
            // Odometer increment from the last position.
            let mut bumped = current.clone();
            let mut pos = groups;
            loop {
                if pos == 0 {
                    next = None;
                    break;
                }
                pos -= 1;
                if bumped[pos] < m {
                    bumped[pos] += 1;
                    next = Some(bumped);
                    break;
                }
                bumped[pos] = 1;
            }
            Some(IndexTuple::new(current))
        })
    }

    fn check(&self, params: &ConstructionParams) -> Result<(), SynthesisError> {
        let g = params.group_count();
        if self.choices.len() != g {
            return Err(SynthesisError::TupleLength {
                expected: g,
                got: self.choices.len(),
            });
        }
        for (pos, &j) in self.choices.iter().enumerate() {
            if j == 0 || j > params.m {
                return Err(SynthesisError::TupleIndexOutOfRange {
                    position: pos,
                    index: j,
                    m: params.m,
                });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, j) in self.choices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

/// A query curve synthesized for one index tuple, together with the
/// realized common distance to its intended nearest neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesizedQuery<S = f64> {
    pub query: Curve<S>,
    pub radius: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisError {
    Geometry(GeometryError),
    TupleLength { expected: usize, got: usize },
    TupleIndexOutOfRange { position: usize, index: usize, m: usize },
    /// Realized sphere radius escaped [r, r+ε].
    RadiusOutOfRange { realized: f64, lo: f64, hi: f64 },
    /// A query vertex ended up farther than the realized radius from its
    /// anchor, so curves passing through that anchor would be lost.
    AnchorNotCovered { anchor: usize, distance: f64, radius: f64 },
    /// No candidate first vertex separates the chosen p_1 satellite from
    /// the others (offsets too loose, or tampered geometry).
    NoDiscriminatingCandidate { group: usize },
    /// 1-dimensional synthesis derived a nonpositive radius.
    NonpositiveRadius,
    NotOneDimensional { d: usize },
}

impl From<GeometryError> for SynthesisError {
    fn from(e: GeometryError) -> Self {
        SynthesisError::Geometry(e)
    }
}

impl std::fmt::Display for SynthesisError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SynthesisError::Geometry(e) => write!(f, "geometry failure: {e}"),
            SynthesisError::TupleLength { expected, got } => {
                write!(f, "index tuple has {got} entries, expected {expected}")
            }
            SynthesisError::TupleIndexOutOfRange { position, index, m } => write!(
                f,
                "tuple position {position}: index {index} outside 1..={m}"
            ),
            SynthesisError::RadiusOutOfRange { realized, lo, hi } => {
                write!(f, "realized radius {realized} outside [{lo}, {hi}]")
            }
            SynthesisError::AnchorNotCovered {
                anchor,
                distance,
                radius,
            } => write!(
                f,
                "query vertex {anchor} is {distance} from its anchor, beyond radius {radius}"
            ),
            SynthesisError::NoDiscriminatingCandidate { group } => write!(
                f,
                "no candidate vertex separates the chosen satellite of group {group}"
            ),
            SynthesisError::NonpositiveRadius => {
                write!(f, "derived radius is not positive")
            }
            SynthesisError::NotOneDimensional { d } => {
                write!(f, "exact synthesis requires d = 1, got d = {d}")
            }
        }
    }
}

impl std::error::Error for SynthesisError {}

/// Builds the float family for any dimension.
pub fn build_family(params: &ConstructionParams) -> Result<CurveFamily<f64>, ConstructionError> {
    let violations = params.validate();
    if !violations.is_empty() {
        return Err(ConstructionError::InvalidParams(violations));
    }
    if params.d == 1 {
        Ok(build_one_dim::<f64>(params))
    } else {
        build_multi_dim(params)
    }
}

/// Builds the exact rational family; only the 1-dimensional layout has
/// rational coordinates.
pub fn build_family_exact(
    params: &ConstructionParams,
) -> Result<CurveFamily<BigRational>, ConstructionError> {
    if params.d != 1 {
        return Err(ConstructionError::NotOneDimensional { d: params.d });
    }
    let violations = params.validate();
    if !violations.is_empty() {
        return Err(ConstructionError::InvalidParams(violations));
    }
    Ok(build_one_dim::<BigRational>(params))
}

/// Test-only escape hatch: builds the raw layout without parameter
/// validation, so deliberately violated families can exercise the
/// verifier's failure detection.
#[cfg(test)]
pub(crate) fn build_family_unchecked(
    params: &ConstructionParams,
) -> Result<CurveFamily<f64>, ConstructionError> {
    if params.d == 1 {
        Ok(build_one_dim::<f64>(params))
    } else {
        build_multi_dim_layout(params)
    }
}

fn curves_from_groups<S: CurveScalar>(
    params: &ConstructionParams,
    anchors: &[Point<S>],
    groups: &[SatelliteGroup<S>],
) -> Vec<Curve<S>> {
    let mut curves = Vec::with_capacity(params.curve_count());
    for group in groups {
        for (j, satellite) in group.satellites.iter().enumerate() {
            let mut vertices: Vec<Point<S>> = anchors.to_vec();
            vertices[group.host] = satellite.clone();
            curves.push(Curve::labeled(group.id, j + 1, vertices));
        }
    }
    curves
}

fn build_one_dim<S: CurveScalar>(params: &ConstructionParams) -> CurveFamily<S> {
    let (k, m) = (params.k, params.m);
    let anchors: Vec<Point<S>> = (0..k)
        .map(|i| Point::scalar(S::from_int((i * 2 * m) as i64)))
        .collect();
    let p2 = anchors[1].coords[0].clone();

    let mut groups = Vec::with_capacity(k);
    // Groups 1 and 2 flank p_2: a_{1j} = p_2 − j, a_{2j} = p_2 + j.
    for (id, sign) in [(1usize, -1i64), (2, 1)] {
        groups.push(SatelliteGroup {
            id,
            host: 1,
            satellites: (1..=m)
                .map(|j| Point::scalar(p2.clone() + S::from_int(sign * j as i64)))
                .collect(),
        });
    }
    // Group i ≥ 3 sits just below p_i: a_{ij} = p_i − j/(m+1).
    let denom = S::from_int((m + 1) as i64);
    for i in 3..=k {
        let pi = anchors[i - 1].coords[0].clone();
        groups.push(SatelliteGroup {
            id: i,
            host: i - 1,
            satellites: (1..=m)
                .map(|j| Point::scalar(pi.clone() - S::from_int(j as i64) / denom.clone()))
                .collect(),
        });
    }

    let curves = curves_from_groups(params, &anchors, &groups);
    CurveFamily {
        params: params.clone(),
        anchors,
        groups,
        curves,
    }
}

fn build_multi_dim(params: &ConstructionParams) -> Result<CurveFamily<f64>, ConstructionError> {
    let family = build_multi_dim_layout(params)?;
    check_extreme_radii(&family)?;
    Ok(family)
}

fn build_multi_dim_layout(
    params: &ConstructionParams,
) -> Result<CurveFamily<f64>, ConstructionError> {
    let (d, k, m) = (params.d, params.k, params.m);
    let r = params.r.unwrap();
    let epsilon = params.epsilon.unwrap();
    let delta = params.delta.unwrap();

    let anchors: Vec<Point<f64>> = (0..k)
        .map(|i| {
            let mut coords = vec![0.0; d];
            coords[0] = i as f64 * 4.0 * r;
            Point::new(coords)
        })
        .collect();

    let e1 = Point::unit(d, 0);
    let e2 = Point::unit(d, 1);
    let mut groups = Vec::with_capacity(params.group_count());

    // Group 1: m points on the radius-2r circle around p_1.
    groups.push(SatelliteGroup {
        id: 1,
        host: 0,
        satellites: evenly_on_circle(&anchors[0], 2.0 * r, m, &e1, &e2),
    });

    // Groups 2..d+2 at p_2, one per regular-simplex direction, with the
    // linear outward schedule ε_j = ε·(j−1)/(m−1).
    let spread = |base: f64, j: usize| base * (j as f64) / (m as f64 - 1.0);
    for (t, dir) in regular_simplex_directions(d).into_iter().enumerate() {
        groups.push(SatelliteGroup {
            id: 2 + t,
            host: 1,
            satellites: (0..m)
                .map(|j| anchors[1].add_scaled(r + spread(epsilon, j), &dir.coords))
                .collect(),
        });
    }

    // d groups per later anchor, one per positive coordinate axis.
    for l in 3..=k {
        for axis in 0..d {
            let dir = Point::unit(d, axis);
            groups.push(SatelliteGroup {
                id: d + 3 + (l - 3) * d + axis,
                host: l - 1,
                satellites: (0..m)
                    .map(|j| anchors[l - 1].add_scaled(r + spread(delta, j), &dir.coords))
                    .collect(),
            });
        }
    }

    let curves = curves_from_groups(params, &anchors, &groups);
    Ok(CurveFamily {
        params: params.clone(),
        anchors,
        groups,
        curves,
    })
}

/// Build-time sanity check: over every extreme satellite choice at p_2
/// (each of the d+1 groups at its nearest or farthest offset), the realized
/// circumsphere radius must stay within [r, r+ε]. Intermediate schedules
/// lie between the extremes.
fn check_extreme_radii(family: &CurveFamily<f64>) -> Result<(), ConstructionError> {
    let params = &family.params;
    let (d, m) = (params.d, params.m);
    let r = params.r.unwrap();
    let epsilon = params.epsilon.unwrap();
    let tol = 1e-9 * r;

    for mask in 0..(1u32 << (d + 1)) {
        let chosen: Vec<Point<f64>> = (0..=d)
            .map(|t| {
                let j = if mask & (1 << t) != 0 { m - 1 } else { 0 };
                family.groups[1 + t].satellites[j].clone()
            })
            .collect();
        let sphere = circumcenter(&chosen).map_err(|_| ConstructionError::EpsilonGeometry {
            realized: f64::NAN,
            lo: r,
            hi: r + epsilon,
        })?;
        if sphere.radius < r - tol || sphere.radius > r + epsilon + tol {
            return Err(ConstructionError::EpsilonGeometry {
                realized: sphere.radius,
                lo: r,
                hi: r + epsilon,
            });
        }
    }
    Ok(())
}

/// Synthesizes the query curve for one index tuple on a float family.
pub fn synthesize_query(
    family: &CurveFamily<f64>,
    tuple: &IndexTuple,
) -> Result<SynthesizedQuery<f64>, SynthesisError> {
    tuple.check(&family.params)?;
    if family.params.d == 1 {
        synthesize_one_dim(family, tuple)
    } else {
        synthesize_multi_dim(family, tuple)
    }
}

/// Exact synthesis on a rational family (d = 1 only: the formulas are pure
/// field arithmetic, so the query is exactly representable).
pub fn synthesize_query_exact(
    family: &CurveFamily<BigRational>,
    tuple: &IndexTuple,
) -> Result<SynthesizedQuery<BigRational>, SynthesisError> {
    if family.params.d != 1 {
        return Err(SynthesisError::NotOneDimensional { d: family.params.d });
    }
    tuple.check(&family.params)?;
    synthesize_one_dim(family, tuple)
}

fn synthesize_one_dim<S: CurveScalar>(
    family: &CurveFamily<S>,
    tuple: &IndexTuple,
) -> Result<SynthesizedQuery<S>, SynthesisError> {
    let j = tuple.choices();
    let k = family.params.k;
    let two = S::from_int(2);

    let a1 = family.groups[0].satellites[j[0] - 1].coords[0].clone();
    let a2 = family.groups[1].satellites[j[1] - 1].coords[0].clone();
    // Half the gap between the two chosen satellites flanking p_2.
    let radius = (a2.clone() - a1.clone()) / two.clone();
    if radius <= num::Zero::zero() {
        return Err(SynthesisError::NonpositiveRadius);
    }

    let mut vertices = Vec::with_capacity(k);
    vertices.push(Point::scalar(
        family.anchors[0].coords[0].clone() - radius.clone(),
    ));
    vertices.push(Point::scalar((a1 + a2) / two));
    for i in 3..=k {
        let a = family.groups[i - 1].satellites[j[i - 1] - 1].coords[0].clone();
        vertices.push(Point::scalar(a + radius.clone()));
    }

    Ok(SynthesizedQuery {
        query: Curve::new(vertices),
        radius,
    })
}

fn lex_less(a: &Point<f64>, b: &Point<f64>) -> bool {
    for (x, y) in a.coords.iter().zip(&b.coords) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn synthesize_multi_dim(
    family: &CurveFamily<f64>,
    tuple: &IndexTuple,
) -> Result<SynthesizedQuery<f64>, SynthesisError> {
    let params = &family.params;
    let (d, k) = (params.d, params.k);
    let r = params.r.unwrap();
    let epsilon = params.epsilon.unwrap();
    let j = tuple.choices();
    let tol = 1e-9 * r;

    // Second vertex: circumcenter of the d+1 chosen satellites at p_2.
    let chosen_p2: Vec<Point<f64>> = (0..=d)
        .map(|t| family.groups[1 + t].satellites[j[1 + t] - 1].clone())
        .collect();
    let sphere = circumcenter(&chosen_p2)?;
    let radius = sphere.radius;
    if radius < r - tol || radius > r + epsilon + tol {
        return Err(SynthesisError::RadiusOutOfRange {
            realized: radius,
            lo: r,
            hi: r + epsilon,
        });
    }
    let q2 = sphere.center;
    let p2_dist = q2.distance(&family.anchors[1]);
    if p2_dist > radius + tol {
        return Err(SynthesisError::AnchorNotCovered {
            anchor: 2,
            distance: p2_dist,
            radius,
        });
    }

    // First vertex: equidistant from p_1 and the chosen circle satellite,
    // strictly closer to it than to every other satellite of group 1.
    // Of the (up to two) candidates that discriminate, take the
    // lexicographically smallest for reproducibility.
    let group1 = &family.groups[0];
    let chosen_a1 = &group1.satellites[j[0] - 1];
    let e1 = Point::unit(d, 0);
    let e2 = Point::unit(d, 1);
    let (cand_a, cand_b) =
        equidistant_pair_in_plane(&family.anchors[0], chosen_a1, radius, &e1, &e2)?;
    let discriminates = |c: &Point<f64>| {
        let own = c.distance_sq(chosen_a1);
        group1
            .satellites
            .iter()
            .enumerate()
            .all(|(idx, other)| idx == j[0] - 1 || c.distance_sq(other) > own)
    };
    let mut q1: Option<Point<f64>> = None;
    for cand in [cand_a, cand_b] {
        if discriminates(&cand) && q1.as_ref().map_or(true, |cur| lex_less(&cand, cur)) {
            q1 = Some(cand);
        }
    }
    let q1 = q1.ok_or(SynthesisError::NoDiscriminatingCandidate { group: 1 })?;

    // Later vertices: center of the radius-r′ sphere touching the d chosen
    // axis satellites at p_l, on the side containing p_l. Near the offset
    // bound both candidate centers can contain the anchor; take the closer
    // one (then lexicographic) for reproducibility.
    let mut vertices = vec![q1, q2];
    for l in 3..=k {
        let first_group = 1 + (d + 1) + (l - 3) * d;
        let chosen: Vec<Point<f64>> = (0..d)
            .map(|axis| {
                let group = &family.groups[first_group + axis];
                group.satellites[j[first_group + axis] - 1].clone()
            })
            .collect();
        let anchor = &family.anchors[l - 1];
        let (cand_a, cand_b) = sphere_center_candidates(&chosen, radius)?;
        let near_first = if cand_a.distance_sq(anchor) < cand_b.distance_sq(anchor)
            || (cand_a.distance_sq(anchor) == cand_b.distance_sq(anchor) && lex_less(&cand_a, &cand_b))
        {
            [cand_a, cand_b]
        } else {
            [cand_b, cand_a]
        };
        let dist = near_first[0].distance(anchor);
        if dist > radius + tol {
            return Err(SynthesisError::AnchorNotCovered {
                anchor: l,
                distance: dist,
                radius,
            });
        }
        let [center, _] = near_first;
        vertices.push(center);
    }

    Ok(SynthesizedQuery {
        query: Curve::new(vertices),
        radius,
    })
}

/// The neighbor set a tuple's query is designed to realize: for d = 1 every
/// group contributes the prefix S_{i1},…,S_{ij_i}; for d ≥ 2 group 1
/// contributes only S_{1j_1} and all later groups contribute prefixes.
pub fn predicted_neighbors<S: CurveScalar>(
    family: &CurveFamily<S>,
    tuple: &IndexTuple,
) -> Result<BTreeSet<Label>, SynthesisError> {
    tuple.check(&family.params)?;
    let mut set = BTreeSet::new();
    for (pos, &ji) in tuple.choices().iter().enumerate() {
        let group = pos + 1;
        if family.params.d >= 2 && group == 1 {
            set.insert(Label::new(1, ji));
        } else {
            for idx in 1..=ji {
                set.insert(Label::new(group, idx));
            }
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CurveScalar;
    use num::bigint::BigInt;
    use num::rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn validate_accepts_the_documented_two_dim_case() {
        // m = 4, r = 1: both bounds evaluate to √2 − 1 ≈ 0.4142.
        let params = ConstructionParams {
            d: 2,
            k: 3,
            m: 4,
            r: Some(1.0),
            epsilon: Some(0.4),
            delta: Some(0.4),
        };
        assert!(params.validate().is_empty());

        let too_big = ConstructionParams {
            epsilon: Some(0.5),
            ..params
        };
        let violations = too_big.validate();
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            violations[0],
            ParamViolation::EpsilonTooLarge { .. }
        ));
    }

    #[test]
    fn validate_one_dim_is_permissive() {
        assert!(ConstructionParams::one_dim(2, 1).validate().is_empty());
        assert!(ConstructionParams::one_dim(5, 4).validate().is_empty());
        assert!(!ConstructionParams::one_dim(1, 2).validate().is_empty());
    }

    #[test]
    fn one_dim_family_matches_the_formula_table() {
        let family = build_family(&ConstructionParams::one_dim(2, 2)).unwrap();
        let coords = |p: &Point<f64>| p.coords[0];
        assert_eq!(family.anchors().iter().map(coords).collect::<Vec<_>>(), [0.0, 4.0]);
        assert_eq!(
            family.groups()[0].satellites.iter().map(coords).collect::<Vec<_>>(),
            [3.0, 2.0]
        );
        assert_eq!(
            family.groups()[1].satellites.iter().map(coords).collect::<Vec<_>>(),
            [5.0, 6.0]
        );
        let curve_coords: Vec<Vec<f64>> = family
            .curves()
            .iter()
            .map(|c| c.vertices().iter().map(coords).collect())
            .collect();
        assert_eq!(
            curve_coords,
            [[0.0, 3.0], [0.0, 2.0], [0.0, 5.0], [0.0, 6.0]]
        );
    }

    #[test]
    fn every_curve_has_exactly_k_vertices() {
        for params in [
            ConstructionParams::one_dim(4, 3),
            ConstructionParams::with_defaults(2, 3, 3),
            ConstructionParams::with_defaults(3, 3, 3),
        ] {
            let family = build_family(&params).unwrap();
            assert_eq!(family.curve_count(), params.curve_count());
            for curve in family.curves() {
                assert_eq!(curve.len(), params.k);
            }
        }
    }

    #[test]
    fn two_dim_group_one_sits_on_the_double_circle() {
        let family = build_family(&ConstructionParams::with_defaults(2, 3, 3)).unwrap();
        assert_eq!(family.curve_count(), 18);
        assert_eq!(family.group_count(), 6);
        let p1 = &family.anchors()[0];
        let sats = &family.groups()[0].satellites;
        for s in sats {
            assert!((s.distance(p1) - 2.0).abs() < 1e-12);
        }
        // 120° gaps: chord length 2·2·sin(60°) = 2√3.
        let chord = 2.0 * 3.0f64.sqrt();
        assert!((sats[0].distance(&sats[1]) - chord).abs() < 1e-12);
        assert!((sats[1].distance(&sats[2]) - chord).abs() < 1e-12);
    }

    #[test]
    fn satellite_distances_stay_inside_their_bands() {
        let params = ConstructionParams::with_defaults(3, 3, 4);
        let family = build_family(&params).unwrap();
        let (r, eps, delta) = (
            params.r.unwrap(),
            params.epsilon.unwrap(),
            params.delta.unwrap(),
        );
        for group in family.groups().iter().skip(1) {
            let band = if group.host == 1 { eps } else { delta };
            let anchor = &family.anchors()[group.host];
            for s in &group.satellites {
                let dist = s.distance(anchor);
                assert!(dist >= r - 1e-12 && dist <= r + band + 1e-12);
            }
        }
    }

    #[test]
    fn multi_dim_rejects_too_few_satellites() {
        let err = build_family(&ConstructionParams::with_defaults(3, 3, 2)).unwrap_err();
        match err {
            ConstructionError::InvalidParams(v) => {
                assert!(v
                    .iter()
                    .any(|p| matches!(p, ParamViolation::TooFewSatellites { minimum: 3, .. })));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn anchors_keep_their_spacing() {
        let one = build_family(&ConstructionParams::one_dim(3, 2)).unwrap();
        for w in one.anchors().windows(2) {
            assert_eq!(w[1].coords[0] - w[0].coords[0], 4.0); // 2m
        }
        let two = build_family(&ConstructionParams::with_defaults(2, 4, 3)).unwrap();
        for w in two.anchors().windows(2) {
            assert!((w[0].distance(&w[1]) - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn synthesis_one_dim_worked_example() {
        let family = build_family(&ConstructionParams::one_dim(2, 2)).unwrap();
        let q = synthesize_query(&family, &IndexTuple::new(vec![1, 2])).unwrap();
        assert_eq!(q.radius, 1.5);
        let coords: Vec<f64> = q.query.vertices().iter().map(|v| v.coords[0]).collect();
        assert_eq!(coords, [-1.5, 4.5]);
    }

    #[test]
    fn synthesis_symmetric_tuple_lands_on_the_anchor() {
        let family = build_family(&ConstructionParams::one_dim(3, 3)).unwrap();
        for j in 1..=3 {
            let q = synthesize_query(&family, &IndexTuple::new(vec![j, j, 1])).unwrap();
            assert_eq!(q.query.vertices()[1].coords[0], 6.0); // p_2 = 2m
        }
    }

    #[test]
    fn synthesis_exact_matches_float() {
        let exact = build_family_exact(&ConstructionParams::one_dim(3, 2)).unwrap();
        let float = exact.to_f64();
        for tuple in IndexTuple::all(2, 3) {
            let qe = synthesize_query_exact(&exact, &tuple).unwrap();
            let qf = synthesize_query(&float, &tuple).unwrap();
            assert_eq!(qe.radius.to_f64(), qf.radius);
            for (ve, vf) in qe.query.vertices().iter().zip(qf.query.vertices()) {
                // Exact-to-float rounds once, the float path per operation;
                // they may differ by an ulp.
                assert!((ve.coords[0].to_f64() - vf.coords[0]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_coordinates_have_denominator_dividing_m_plus_one() {
        let family = build_family_exact(&ConstructionParams::one_dim(4, 3)).unwrap();
        let denom_limit = BigInt::from(4);
        for group in family.groups() {
            for s in &group.satellites {
                let den = s.coords[0].denom().clone();
                assert_eq!(&denom_limit % &den, BigInt::from(0));
            }
        }
    }

    #[test]
    fn all_ones_tuple_recovers_the_base_radius() {
        let family = build_family(&ConstructionParams::with_defaults(2, 3, 3)).unwrap();
        let tuple = IndexTuple::new(vec![1; 6]);
        let q = synthesize_query(&family, &tuple).unwrap();
        // Unmoved j = 1 satellites are concyclic at radius exactly r.
        assert!((q.radius - 1.0).abs() < 1e-9);
        let q2 = &q.query.vertices()[1];
        assert!(q2.distance(&family.anchors()[1]) < 1e-9);
    }

    #[test]
    fn multi_dim_query_covers_its_anchors() {
        for params in [
            ConstructionParams::with_defaults(2, 3, 3),
            ConstructionParams::with_defaults(3, 3, 3),
        ] {
            let family = build_family(&params).unwrap();
            let g = params.group_count();
            for tuple in [
                IndexTuple::new(vec![1; g]),
                IndexTuple::new(vec![params.m; g]),
                IndexTuple::new((0..g).map(|i| i % params.m + 1).collect()),
            ] {
                let q = synthesize_query(&family, &tuple).unwrap();
                assert!(q.radius >= 1.0 - 1e-9);
                for (idx, anchor) in family.anchors().iter().enumerate().skip(1) {
                    let dist = q.query.vertices()[idx].distance(anchor);
                    assert!(dist <= q.radius + 1e-9, "anchor {idx} at {dist}");
                }
            }
        }
    }

    #[test]
    fn predicted_sets_use_prefixes() {
        let family = build_family(&ConstructionParams::one_dim(2, 3)).unwrap();
        let set = predicted_neighbors(&family, &IndexTuple::new(vec![1, 2])).unwrap();
        let expect: BTreeSet<Label> = [Label::new(1, 1), Label::new(2, 1), Label::new(2, 2)]
            .into_iter()
            .collect();
        assert_eq!(set, expect);

        let family2 = build_family(&ConstructionParams::with_defaults(2, 2, 3)).unwrap();
        let ones = predicted_neighbors(&family2, &IndexTuple::new(vec![1; 4])).unwrap();
        assert_eq!(ones.len(), 4);
        let maxed = predicted_neighbors(&family2, &IndexTuple::new(vec![3; 4])).unwrap();
        assert_eq!(maxed.len(), 1 + 3 * 3);
        assert!(maxed.contains(&Label::new(1, 3)));
        assert!(!maxed.contains(&Label::new(1, 1)));
    }

    #[test]
    fn predicted_sets_are_injective() {
        for (params, expected) in [
            (ConstructionParams::one_dim(3, 3), 27usize),
            (ConstructionParams::with_defaults(2, 3, 3), 729),
        ] {
            let family = build_family(&params).unwrap();
            let mut seen = std::collections::HashSet::new();
            for tuple in IndexTuple::all(params.m, params.group_count()) {
                let set = predicted_neighbors(&family, &tuple).unwrap();
                assert!(seen.insert(set.into_iter().collect::<Vec<_>>()));
            }
            assert_eq!(seen.len(), expected);
        }
    }

    #[test]
    fn tuple_enumeration_is_lexicographic_and_complete() {
        let tuples: Vec<IndexTuple> = IndexTuple::all(2, 3).collect();
        assert_eq!(tuples.len(), 8);
        assert_eq!(tuples[0].choices(), [1, 1, 1]);
        assert_eq!(tuples[1].choices(), [1, 1, 2]);
        assert_eq!(tuples[7].choices(), [2, 2, 2]);
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
    }

    #[test]
    fn tuple_validation_catches_shape_errors() {
        let family = build_family(&ConstructionParams::one_dim(2, 2)).unwrap();
        assert!(matches!(
            synthesize_query(&family, &IndexTuple::new(vec![1])),
            Err(SynthesisError::TupleLength { expected: 2, got: 1 })
        ));
        assert!(matches!(
            synthesize_query(&family, &IndexTuple::new(vec![1, 3])),
            Err(SynthesisError::TupleIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn exact_family_rejects_higher_dimensions() {
        let err = build_family_exact(&ConstructionParams::with_defaults(2, 3, 3)).unwrap_err();
        assert!(matches!(err, ConstructionError::NotOneDimensional { d: 2 }));
    }

    #[test]
    fn rational_layout_is_exact() {
        let family = build_family_exact(&ConstructionParams::one_dim(3, 2)).unwrap();
        assert_eq!(family.groups()[2].satellites[0].coords[0], rat(23, 3)); // 8 − 1/3
        assert_eq!(family.groups()[2].satellites[1].coords[0], rat(22, 3));
    }
}
