//! Certification of the lower-bound families: actual nearest-neighbor sets
//! under the discrete Fréchet distance, comparison against predictions,
//! distinct-region counting, and an independent grid-sampling oracle.
//!
//! A tuple certifies its region only when the actual set equals the
//! predicted set *and* the separation margin clears a floor proportional to
//! the realized radius — float noise can never certify a false bound, it
//! can only downgrade a tuple to `Fragile`. The exact path runs the same
//! checks in rational arithmetic with zero tolerance.

use num::rational::BigRational;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet};

use crate::constructions::{
    predicted_neighbors, synthesize_query, synthesize_query_exact, CurveFamily, IndexTuple,
    SynthesisError,
};
use crate::dfd::{dfd_separation, Curve, DfdError, Label};
use crate::scalar::CurveScalar;

/// Guard for exhaustive tuple verification.
pub const MAX_ENUMERATED_TUPLES: u128 = 1_000_000;
/// Guard for grid-oracle enumeration.
pub const MAX_GRID_QUERIES: u128 = 10_000_000;

/// Relative tolerances for float verification. Membership uses an absolute
/// cutoff of `membership_rel × realized radius` on distances; a matching
/// tuple whose margin is below `margin_floor_rel × realized radius` is
/// reported as fragile and does not count toward the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub membership_rel: f64,
    pub margin_floor_rel: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            membership_rel: 1e-9,
            margin_floor_rel: 1e-6,
        }
    }
}

/// How to pick the tuples to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleSampler {
    All,
    Random { seed: u64, count: usize },
}

/// The set of curves closest to one query, with the separation to the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet<S = f64> {
    pub labels: BTreeSet<Label>,
    pub min_distance: S,
    /// Gap between the smallest excluded and the largest included distance;
    /// `None` when nothing is excluded.
    pub margin: Option<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleStatus {
    Match,
    Fragile,
    Mismatch,
}

impl std::fmt::Display for TupleStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TupleStatus::Match => "match",
            TupleStatus::Fragile => "fragile",
            TupleStatus::Mismatch => "mismatch",
        })
    }
}

/// Result of checking one index tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleOutcome<S = f64> {
    pub tuple: IndexTuple,
    pub predicted: BTreeSet<Label>,
    pub actual: Option<NeighborSet<S>>,
    pub realized_radius: Option<S>,
    pub status: TupleStatus,
    /// Synthesis failure message when the query could not be built.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportStatus {
    Success,
    Fragile,
    Mismatch,
}

impl std::fmt::Display for ReportStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ReportStatus::Success => "success",
            ReportStatus::Fragile => "fragile",
            ReportStatus::Mismatch => "mismatch",
        })
    }
}

/// Aggregated certification result. Outcomes are sorted by tuple, so the
/// report is independent of evaluation order.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<S = f64> {
    pub outcomes: Vec<TupleOutcome<S>>,
    /// Distinct actual neighbor sets among cleanly matching tuples.
    pub distinct_region_count: usize,
    /// ⌊n/G⌋^G, the region count the family is built to realize.
    pub claimed_bound: u128,
    pub min_margin: Option<S>,
    pub status: ReportStatus,
}

impl<S> VerificationReport<S> {
    pub fn all_matched(&self) -> bool {
        self.outcomes
            .iter()
            .all(|o| o.status == TupleStatus::Match)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerifierError {
    EmptyFamily,
    TooManyTuples { total: u128, cap: u128 },
    GridTooLarge { total: u128, cap: u128 },
    GridShape { reason: String },
    NotOneDimensional { d: usize },
    Synthesis(SynthesisError),
    Dfd(DfdError),
    /// An exact squared distance was not the square of a rational.
    IrrationalDistance,
}

impl From<SynthesisError> for VerifierError {
    fn from(e: SynthesisError) -> Self {
        VerifierError::Synthesis(e)
    }
}

impl From<DfdError> for VerifierError {
    fn from(e: DfdError) -> Self {
        VerifierError::Dfd(e)
    }
}

impl std::fmt::Display for VerifierError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifierError::EmptyFamily => write!(f, "family contains no curves"),
            VerifierError::TooManyTuples { total, cap } => {
                write!(f, "{total} tuples exceed the exhaustive cap of {cap}")
            }
            VerifierError::GridTooLarge { total, cap } => {
                write!(f, "{total} grid queries exceed the cap of {cap}")
            }
            VerifierError::GridShape { reason } => write!(f, "bad grid: {reason}"),
            VerifierError::NotOneDimensional { d } => {
                write!(f, "exact verification requires d = 1, got d = {d}")
            }
            VerifierError::Synthesis(e) => write!(f, "{e}"),
            VerifierError::Dfd(e) => write!(f, "{e}"),
            VerifierError::IrrationalDistance => {
                write!(f, "exact distance is not rational")
            }
        }
    }
}

impl std::error::Error for VerifierError {}

/// Distances from a query to every curve of the family, in separation
/// units (see [`crate::scalar`]).
fn separations<S: CurveScalar>(
    family: &CurveFamily<S>,
    query: &Curve<S>,
) -> Result<Vec<(Label, S)>, VerifierError> {
    if family.curves().is_empty() {
        return Err(VerifierError::EmptyFamily);
    }
    if family.dim() != query.dim() {
        return Err(VerifierError::Dfd(DfdError::DimensionMismatch {
            left: family.dim(),
            right: query.dim(),
        }));
    }
    Ok(family
        .curves()
        .iter()
        .map(|c| (c.label().unwrap(), dfd_separation(c, query)))
        .collect())
}

fn neighbor_set_from_separations<S: CurveScalar>(
    mut seps: Vec<(Label, S)>,
    tol: &S,
) -> Result<NeighborSet<S>, VerifierError> {
    seps.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    let cutoff = seps[0].1.clone() + tol.clone();
    let split = seps.partition_point(|(_, s)| *s <= cutoff);

    let labels: BTreeSet<Label> = seps[..split].iter().map(|(l, _)| *l).collect();
    let to_distance = |s: &S| S::separation_to_distance(s).ok_or(VerifierError::IrrationalDistance);
    let min_distance = to_distance(&seps[0].1)?;
    let margin = if split < seps.len() {
        let largest_in = to_distance(&seps[split - 1].1)?;
        let smallest_out = to_distance(&seps[split].1)?;
        Some(smallest_out - largest_in)
    } else {
        None
    };
    Ok(NeighborSet {
        labels,
        min_distance,
        margin,
    })
}

/// Curves within `tol` of the minimum discrete Fréchet distance to `query`.
pub fn nearest_neighbor_set(
    family: &CurveFamily<f64>,
    query: &Curve<f64>,
    tol: f64,
) -> Result<NeighborSet<f64>, VerifierError> {
    neighbor_set_from_separations(separations(family, query)?, &tol)
}

/// Exact variant with zero tolerance; ties are decided by exact rational
/// comparison.
pub fn nearest_neighbor_set_exact(
    family: &CurveFamily<BigRational>,
    query: &Curve<BigRational>,
) -> Result<NeighborSet<BigRational>, VerifierError> {
    neighbor_set_from_separations(separations(family, query)?, &BigRational::zero())
}

fn classify<S: CurveScalar>(
    predicted: &BTreeSet<Label>,
    actual: &NeighborSet<S>,
    margin_floor: &S,
) -> TupleStatus {
    if actual.labels != *predicted {
        TupleStatus::Mismatch
    } else {
        match &actual.margin {
            Some(m) if m <= margin_floor => TupleStatus::Fragile,
            _ => TupleStatus::Match,
        }
    }
}

/// Synthesizes the tuple's query, computes its actual neighbor set, and
/// compares with the prediction. Synthesis failures propagate as errors.
pub fn verify_tuple(
    family: &CurveFamily<f64>,
    tuple: &IndexTuple,
    policy: &TolerancePolicy,
) -> Result<TupleOutcome<f64>, VerifierError> {
    let predicted = predicted_neighbors(family, tuple)?;
    let synthesized = synthesize_query(family, tuple)?;
    let radius = synthesized.radius;
    let actual = nearest_neighbor_set(family, &synthesized.query, policy.membership_rel * radius)?;
    let status = classify(&predicted, &actual, &(policy.margin_floor_rel * radius));
    Ok(TupleOutcome {
        tuple: tuple.clone(),
        predicted,
        actual: Some(actual),
        realized_radius: Some(radius),
        status,
        error: None,
    })
}

/// Exact certification of one tuple on a 1-dimensional rational family:
/// zero tolerance, exact set equality, and an exactly positive margin.
pub fn exact_verify_1d(
    family: &CurveFamily<BigRational>,
    tuple: &IndexTuple,
) -> Result<TupleOutcome<BigRational>, VerifierError> {
    if family.dim() != 1 {
        return Err(VerifierError::NotOneDimensional { d: family.dim() });
    }
    let predicted = predicted_neighbors(family, tuple)?;
    let synthesized = synthesize_query_exact(family, tuple)?;
    let actual = nearest_neighbor_set_exact(family, &synthesized.query)?;
    let status = classify(&predicted, &actual, &BigRational::zero());
    Ok(TupleOutcome {
        tuple: tuple.clone(),
        predicted,
        actual: Some(actual),
        realized_radius: Some(synthesized.radius),
        status,
        error: None,
    })
}

fn sample_tuples(
    sampler: TupleSampler,
    m: usize,
    groups: usize,
) -> Result<Vec<IndexTuple>, VerifierError> {
    match sampler {
        TupleSampler::All => {
            let total = (m as u128)
                .checked_pow(groups as u32)
                .unwrap_or(u128::MAX);
            if total > MAX_ENUMERATED_TUPLES {
                return Err(VerifierError::TooManyTuples {
                    total,
                    cap: MAX_ENUMERATED_TUPLES,
                });
            }
            Ok(IndexTuple::all(m, groups).collect())
        }
        TupleSampler::Random { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..count)
                .map(|_| IndexTuple::new((0..groups).map(|_| rng.gen_range(1..=m)).collect()))
                .collect())
        }
    }
}

fn claimed_bound(n: usize, groups: usize) -> u128 {
    ((n / groups.max(1)) as u128)
        .checked_pow(groups as u32)
        .unwrap_or(u128::MAX)
}

fn assemble_report<S: CurveScalar>(
    mut outcomes: Vec<TupleOutcome<S>>,
    n: usize,
    groups: usize,
    exhaustive_target: Option<usize>,
) -> VerificationReport<S> {
    outcomes.sort_by(|a, b| a.tuple.cmp(&b.tuple));

    let mut distinct: HashSet<Vec<Label>> = HashSet::new();
    for o in &outcomes {
        if o.status == TupleStatus::Match {
            if let Some(actual) = &o.actual {
                distinct.insert(actual.labels.iter().copied().collect());
            }
        }
    }
    let distinct_region_count = distinct.len();

    let mut min_margin: Option<S> = None;
    for o in &outcomes {
        if let Some(m) = o.actual.as_ref().and_then(|a| a.margin.clone()) {
            min_margin = Some(match min_margin.take() {
                Some(cur) if cur < m => cur,
                _ => m,
            });
        }
    }

    let any_mismatch = outcomes.iter().any(|o| o.status == TupleStatus::Mismatch);
    let any_fragile = outcomes.iter().any(|o| o.status == TupleStatus::Fragile);
    let count_ok = exhaustive_target.map_or(true, |t| distinct_region_count == t);
    let status = if any_mismatch || !count_ok {
        ReportStatus::Mismatch
    } else if any_fragile {
        ReportStatus::Fragile
    } else {
        ReportStatus::Success
    };

    VerificationReport {
        outcomes,
        distinct_region_count,
        claimed_bound: claimed_bound(n, groups),
        min_margin,
        status,
    }
}

/// Verifies tuples across the family. With [`TupleSampler::All`] the report
/// succeeds only when every tuple matches and the distinct-region count
/// reaches m^G. Per-tuple synthesis failures are recorded as mismatches
/// rather than aborting the run.
pub fn verify_all(
    family: &CurveFamily<f64>,
    policy: &TolerancePolicy,
    sampler: TupleSampler,
) -> Result<VerificationReport<f64>, VerifierError> {
    let params = family.params();
    let tuples = sample_tuples(sampler, params.m, params.group_count())?;
    let outcomes = tuples
        .into_iter()
        .map(|tuple| match verify_tuple(family, &tuple, policy) {
            Ok(outcome) => outcome,
            Err(err) => TupleOutcome {
                predicted: predicted_neighbors(family, &tuple).unwrap_or_default(),
                tuple,
                actual: None,
                realized_radius: None,
                status: TupleStatus::Mismatch,
                error: Some(err.to_string()),
            },
        })
        .collect();
    let exhaustive_target = match sampler {
        TupleSampler::All => Some(params.curve_count() / params.group_count().max(1))
            .map(|m| m.pow(params.group_count() as u32)),
        TupleSampler::Random { .. } => None,
    };
    Ok(assemble_report(
        outcomes,
        family.curve_count(),
        family.group_count(),
        exhaustive_target,
    ))
}

/// Exact counterpart of [`verify_all`] for 1-dimensional rational families.
pub fn exact_verify_all(
    family: &CurveFamily<BigRational>,
    sampler: TupleSampler,
) -> Result<VerificationReport<BigRational>, VerifierError> {
    if family.dim() != 1 {
        return Err(VerifierError::NotOneDimensional { d: family.dim() });
    }
    let params = family.params();
    let tuples = sample_tuples(sampler, params.m, params.group_count())?;
    let outcomes = tuples
        .into_iter()
        .map(|tuple| match exact_verify_1d(family, &tuple) {
            Ok(outcome) => outcome,
            Err(err) => TupleOutcome {
                predicted: predicted_neighbors(family, &tuple).unwrap_or_default(),
                tuple,
                actual: None,
                realized_radius: None,
                status: TupleStatus::Mismatch,
                error: Some(err.to_string()),
            },
        })
        .collect();
    let exhaustive_target = match sampler {
        TupleSampler::All => Some(params.m.pow(params.group_count() as u32)),
        TupleSampler::Random { .. } => None,
    };
    Ok(assemble_report(
        outcomes,
        family.curve_count(),
        family.group_count(),
        exhaustive_target,
    ))
}

/// Axis-aligned query grid: `ranges[vertex][axis]` bounds that coordinate,
/// sampled at multiples of `step` from the lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub ranges: Vec<Vec<(f64, f64)>>,
    pub step: f64,
}

impl GridSpec {
    /// One range per vertex, replicated across that vertex's axes.
    pub fn per_vertex(ranges: Vec<(f64, f64)>, d: usize, step: f64) -> Self {
        GridSpec {
            ranges: ranges.into_iter().map(|r| vec![r; d]).collect(),
            step,
        }
    }

    fn axis_count(&self, range: (f64, f64)) -> u128 {
        if range.1 < range.0 {
            return 0;
        }
        (((range.1 - range.0) / self.step) * (1.0 + 1e-12)).floor() as u128 + 1
    }

    /// Number of query curves the grid induces.
    pub fn total_queries(&self) -> u128 {
        self.ranges
            .iter()
            .flatten()
            .map(|&r| self.axis_count(r))
            .fold(1u128, |acc, c| acc.saturating_mul(c))
    }
}

/// Counts distinct nearest-neighbor sets over every query curve of the
/// grid. Makes no use of query synthesis, so the count is an independent
/// lower-bound witness for the number of Voronoi regions.
pub fn oracle_region_count(
    family: &CurveFamily<f64>,
    grid: &GridSpec,
    tol: f64,
) -> Result<usize, VerifierError> {
    let params = family.params();
    if grid.ranges.len() != params.k {
        return Err(VerifierError::GridShape {
            reason: format!(
                "{} vertex ranges for k = {}",
                grid.ranges.len(),
                params.k
            ),
        });
    }
    if grid.ranges.iter().any(|axes| axes.len() != params.d) {
        return Err(VerifierError::GridShape {
            reason: format!("each vertex needs {} axis ranges", params.d),
        });
    }
    if !(grid.step.is_finite() && grid.step > 0.0) {
        return Err(VerifierError::GridShape {
            reason: "step must be positive".into(),
        });
    }

    let total = grid.total_queries();
    if total > MAX_GRID_QUERIES {
        return Err(VerifierError::GridTooLarge {
            total,
            cap: MAX_GRID_QUERIES,
        });
    }
    if total == 0 {
        return Ok(0);
    }

    let flat: Vec<(f64, u128)> = grid
        .ranges
        .iter()
        .flatten()
        .map(|&r| (r.0, grid.axis_count(r)))
        .collect();
    let axes = flat.len();
    let mut idx = vec![0u128; axes];
    let mut seen: HashSet<Vec<Label>> = HashSet::new();

    loop {
        let coords: Vec<f64> = flat
            .iter()
            .zip(&idx)
            .map(|(&(lo, _), &i)| lo + i as f64 * grid.step)
            .collect();
        let vertices = coords
            .chunks(params.d)
            .map(|c| crate::geometry::Point::new(c.to_vec()))
            .collect();
        let query = Curve::new(vertices);
        let set = nearest_neighbor_set(family, &query, tol)?;
        seen.insert(set.labels.into_iter().collect());

        // Odometer advance.
        let mut pos = axes;
        loop {
            if pos == 0 {
                return Ok(seen.len());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < flat[pos].1 {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_family, build_family_exact, ConstructionParams};
    use num::bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn small_family() -> CurveFamily<f64> {
        build_family(&ConstructionParams::one_dim(2, 2)).unwrap()
    }

    #[test]
    fn neighbor_set_worked_example() {
        let family = small_family();
        let q = Curve::one_dim(vec![-1.5, 4.5]);
        let set = nearest_neighbor_set(&family, &q, 1e-9).unwrap();
        assert_eq!(set.min_distance, 1.5);
        assert_eq!(set.margin, Some(1.0));
        let expect: BTreeSet<Label> = [Label::new(1, 1), Label::new(2, 1), Label::new(2, 2)]
            .into_iter()
            .collect();
        assert_eq!(set.labels, expect);
    }

    #[test]
    fn neighbor_set_contains_an_exact_member() {
        let family = small_family();
        let own = family.curves()[2].clone();
        let set = nearest_neighbor_set(&family, &own, 0.0).unwrap();
        assert_eq!(set.min_distance, 0.0);
        assert!(set.labels.contains(&Label::new(2, 1)));
    }

    #[test]
    fn m_equals_one_gives_a_single_all_inclusive_region() {
        // With one satellite per group the unique tuple predicts every
        // curve, so nothing is excluded and the margin is infinite.
        let family = build_family(&ConstructionParams::one_dim(2, 1)).unwrap();
        let report = verify_all(&family, &TolerancePolicy::default(), TupleSampler::All).unwrap();
        assert_eq!(report.outcomes.len(), 1);
        assert_eq!(report.distinct_region_count, 1);
        assert_eq!(report.claimed_bound, 1);
        let outcome = &report.outcomes[0];
        assert_eq!(outcome.status, TupleStatus::Match);
        let actual = outcome.actual.as_ref().unwrap();
        assert_eq!(actual.labels.len(), family.curve_count());
        assert_eq!(actual.margin, None);
    }

    #[test]
    fn verify_tuple_worked_examples() {
        let family = small_family();
        let policy = TolerancePolicy::default();

        let out = verify_tuple(&family, &IndexTuple::new(vec![1, 2]), &policy).unwrap();
        assert_eq!(out.status, TupleStatus::Match);
        assert_eq!(out.actual.as_ref().unwrap().margin, Some(1.0));

        let out = verify_tuple(&family, &IndexTuple::new(vec![2, 1]), &policy).unwrap();
        assert_eq!(out.status, TupleStatus::Match);
        let expect: BTreeSet<Label> = [Label::new(1, 1), Label::new(1, 2), Label::new(2, 1)]
            .into_iter()
            .collect();
        assert_eq!(out.predicted, expect);
        assert_eq!(out.actual.unwrap().labels, expect);
        assert_eq!(out.realized_radius, Some(1.5));
    }

    #[test]
    fn violated_offsets_are_detected_not_certified() {
        // ε and δ far above the m = 4 bound r(√2 − 1): the construction's
        // guarantees collapse and the verifier must notice.
        let params = ConstructionParams {
            d: 2,
            k: 2,
            m: 4,
            r: Some(1.0),
            epsilon: Some(0.6),
            delta: Some(0.6),
        };
        assert!(!params.validate().is_empty());
        let family = crate::constructions::build_family_unchecked(&params).unwrap();
        let tuple = IndexTuple::new(vec![4, 4, 4, 4]);
        match verify_tuple(&family, &tuple, &TolerancePolicy::default()) {
            Err(VerifierError::Synthesis(_)) => {}
            Ok(outcome) => assert_ne!(outcome.status, TupleStatus::Match),
            Err(other) => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn verify_all_counts_regions_one_dim() {
        let family = build_family(&ConstructionParams::one_dim(3, 2)).unwrap();
        let report = verify_all(&family, &TolerancePolicy::default(), TupleSampler::All).unwrap();
        assert_eq!(report.outcomes.len(), 8);
        assert!(report.all_matched());
        assert_eq!(report.distinct_region_count, 8);
        assert_eq!(report.claimed_bound, 8);
        assert_eq!(report.status, ReportStatus::Success);
    }

    #[test]
    fn exact_verify_worked_values() {
        let family = build_family_exact(&ConstructionParams::one_dim(2, 2)).unwrap();

        let out = exact_verify_1d(&family, &IndexTuple::new(vec![1, 2])).unwrap();
        assert_eq!(out.status, TupleStatus::Match);
        assert_eq!(out.realized_radius, Some(rat(3, 2)));
        let actual = out.actual.unwrap();
        assert_eq!(actual.min_distance, rat(3, 2));
        assert_eq!(actual.margin, Some(rat(1, 1)));

        let out = exact_verify_1d(&family, &IndexTuple::new(vec![1, 1])).unwrap();
        assert_eq!(out.realized_radius, Some(rat(1, 1)));
        let expect: BTreeSet<Label> = [Label::new(1, 1), Label::new(2, 1)].into_iter().collect();
        assert_eq!(out.actual.as_ref().unwrap().labels, expect);
        // Distances to the excluded curves are exactly 2, so margin = 1.
        assert_eq!(out.actual.unwrap().margin, Some(rat(1, 1)));
    }

    #[test]
    fn exact_and_float_agree_on_match_flags() {
        let exact = build_family_exact(&ConstructionParams::one_dim(3, 3)).unwrap();
        let float = exact.to_f64();
        let policy = TolerancePolicy::default();
        for tuple in IndexTuple::all(3, 3) {
            let e = exact_verify_1d(&exact, &tuple).unwrap();
            let f = verify_tuple(&float, &tuple, &policy).unwrap();
            assert_eq!(e.status, f.status, "tuple {tuple}");
            // The largest in-set distance is the realized radius, exactly.
            let query = synthesize_query_exact(&exact, &tuple).unwrap().query;
            let actual = e.actual.unwrap();
            let max_in = actual
                .labels
                .iter()
                .map(|&l| {
                    crate::dfd::discrete_frechet_exact(exact.curve(l).unwrap(), &query)
                        .unwrap()
                        .unwrap()
                })
                .max()
                .unwrap();
            assert_eq!(Some(max_in), e.realized_radius);
        }
    }

    #[test]
    fn enlarging_tol_never_shrinks_the_set() {
        let family = small_family();
        let q = Curve::one_dim(vec![-1.4, 4.4]);
        let mut prev = 0usize;
        for tol in [0.0, 1e-6, 0.05, 0.2, 1.0, 3.0] {
            let set = nearest_neighbor_set(&family, &q, tol).unwrap();
            assert!(set.labels.len() >= prev);
            prev = set.labels.len();
        }
        assert_eq!(prev, 4);
    }

    #[test]
    fn grid_oracle_degenerate_cases() {
        let family = small_family();
        // Single cell equal to a family curve.
        let grid = GridSpec::per_vertex(vec![(0.0, 0.0), (3.0, 3.0)], 1, 0.25);
        assert_eq!(oracle_region_count(&family, &grid, 1e-9).unwrap(), 1);
        // Empty range.
        let grid = GridSpec::per_vertex(vec![(1.0, 0.0), (3.0, 3.0)], 1, 0.25);
        assert_eq!(oracle_region_count(&family, &grid, 1e-9).unwrap(), 0);
    }

    #[test]
    fn grid_oracle_guard_trips() {
        let family = small_family();
        let grid = GridSpec::per_vertex(vec![(-10.0, 10.0), (-10.0, 10.0)], 1, 1e-6);
        assert!(matches!(
            oracle_region_count(&family, &grid, 1e-9),
            Err(VerifierError::GridTooLarge { .. })
        ));
    }

    #[test]
    fn random_sampler_is_deterministic() {
        let family = build_family(&ConstructionParams::with_defaults(2, 2, 3)).unwrap();
        let sampler = TupleSampler::Random { seed: 7, count: 20 };
        let a = verify_all(&family, &TolerancePolicy::default(), sampler).unwrap();
        let b = verify_all(&family, &TolerancePolicy::default(), sampler).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.outcomes.len(), 20);
        assert_eq!(a.status, ReportStatus::Success);
    }
}
