//! Versioned JSON file formats: curve families and verification reports.
//!
//! Families round-trip losslessly: 1-dimensional coordinates are exact
//! rationals serialized as numerator/denominator strings, float coordinates
//! serialize as shortest round-trip decimals. Reports reference the family
//! file they certify by SHA-256 content hash, so a report can never be
//! mistaken for covering an edited file.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::str::FromStr;

use crate::constructions::{
    ConstructionParams, CurveFamily, FamilyStructureError, SatelliteGroup,
};
use crate::dfd::{Curve, Label};
use crate::geometry::Point;
use crate::scalar::CurveScalar;
use crate::verifier::{TolerancePolicy, TupleOutcome, TupleSampler, VerificationReport};

pub const SCHEMA_VERSION: u32 = 1;

/// One coordinate: a float, or an exact rational as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordV1 {
    Float(f64),
    Rational { num: String, den: String },
}

impl CoordV1 {
    fn to_rational(&self) -> Result<BigRational, FileError> {
        match self {
            CoordV1::Rational { num, den } => {
                let parse = |s: &str| {
                    BigInt::from_str(s).map_err(|_| FileError::BadRational { text: s.into() })
                };
                let num = parse(num)?;
                let den = parse(den)?;
                if den.is_zero() {
                    return Err(FileError::BadRational { text: "den = 0".into() });
                }
                Ok(BigRational::new(num, den))
            }
            CoordV1::Float(_) => Err(FileError::MixedCoordinates),
        }
    }

    fn to_float(&self) -> Result<f64, FileError> {
        match self {
            CoordV1::Float(v) => Ok(*v),
            CoordV1::Rational { .. } => Err(FileError::MixedCoordinates),
        }
    }
}

/// Encoding into [`CoordV1`], implemented by both coordinate scalars.
pub trait EncodeCoord {
    fn encode(&self) -> CoordV1;
}

impl EncodeCoord for f64 {
    fn encode(&self) -> CoordV1 {
        CoordV1::Float(*self)
    }
}

impl EncodeCoord for BigRational {
    fn encode(&self) -> CoordV1 {
        CoordV1::Rational {
            num: self.numer().to_string(),
            den: self.denom().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsV1 {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub r: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelV1 {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupV1 {
    pub id: usize,
    /// 1-based index of the anchor this group perturbs.
    pub host_anchor: usize,
    pub satellites: Vec<Vec<CoordV1>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveV1 {
    pub label: LabelV1,
    pub vertices: Vec<Vec<CoordV1>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFileV1 {
    pub schema_version: u32,
    pub params: ParamsV1,
    pub anchors: Vec<Vec<CoordV1>>,
    pub groups: Vec<GroupV1>,
    pub curves: Vec<CurveV1>,
}

#[derive(Debug)]
pub enum FileError {
    SchemaVersion { got: u32 },
    MixedCoordinates,
    BadRational { text: String },
    RationalRequiresOneDim { d: usize },
    HostAnchorZero { group: usize },
    Structure(FamilyStructureError),
    Json(serde_json::Error),
}

impl From<FamilyStructureError> for FileError {
    fn from(e: FamilyStructureError) -> Self {
        FileError::Structure(e)
    }
}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        FileError::Json(e)
    }
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FileError::SchemaVersion { got } => {
                write!(f, "unsupported schema_version {got}, expected {SCHEMA_VERSION}")
            }
            FileError::MixedCoordinates => write!(
                f,
                "coordinates must be uniformly float or uniformly rational"
            ),
            FileError::BadRational { text } => write!(f, "bad rational coordinate: {text}"),
            FileError::RationalRequiresOneDim { d } => {
                write!(f, "rational coordinates are only defined for d = 1, got d = {d}")
            }
            FileError::HostAnchorZero { group } => {
                write!(f, "group {group}: host_anchor is 1-based and must be >= 1")
            }
            FileError::Structure(e) => write!(f, "{e}"),
            FileError::Json(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FileError {}

fn params_to_v1(p: &ConstructionParams) -> ParamsV1 {
    ParamsV1 {
        d: p.d,
        k: p.k,
        m: p.m,
        r: p.r,
        epsilon: p.epsilon,
        delta: p.delta,
    }
}

fn params_from_v1(p: &ParamsV1) -> ConstructionParams {
    ConstructionParams {
        d: p.d,
        k: p.k,
        m: p.m,
        r: p.r,
        epsilon: p.epsilon,
        delta: p.delta,
    }
}

fn encode_point<S: EncodeCoord>(p: &Point<S>) -> Vec<CoordV1> {
    p.coords.iter().map(EncodeCoord::encode).collect()
}

fn family_to_file<S: CurveScalar + EncodeCoord>(family: &CurveFamily<S>) -> FamilyFileV1 {
    FamilyFileV1 {
        schema_version: SCHEMA_VERSION,
        params: params_to_v1(family.params()),
        anchors: family.anchors().iter().map(encode_point).collect(),
        groups: family
            .groups()
            .iter()
            .map(|g| GroupV1 {
                id: g.id,
                host_anchor: g.host + 1,
                satellites: g.satellites.iter().map(encode_point).collect(),
            })
            .collect(),
        curves: family
            .curves()
            .iter()
            .map(|c| CurveV1 {
                label: {
                    let l = c.label().unwrap();
                    LabelV1 {
                        i: l.group,
                        j: l.index,
                    }
                },
                vertices: c.vertices().iter().map(encode_point).collect(),
            })
            .collect(),
    }
}

/// A family loaded from disk: exact rational (d = 1) or float.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedFamily {
    Exact(CurveFamily<BigRational>),
    Float(CurveFamily<f64>),
}

impl LoadedFamily {
    pub fn params(&self) -> &ConstructionParams {
        match self {
            LoadedFamily::Exact(f) => f.params(),
            LoadedFamily::Float(f) => f.params(),
        }
    }

    /// Float view, converting exact coordinates when necessary.
    pub fn to_float(&self) -> CurveFamily<f64> {
        match self {
            LoadedFamily::Exact(f) => f.to_f64(),
            LoadedFamily::Float(f) => f.clone(),
        }
    }
}

impl FamilyFileV1 {
    pub fn from_float_family(family: &CurveFamily<f64>) -> Self {
        family_to_file(family)
    }

    pub fn from_exact_family(family: &CurveFamily<BigRational>) -> Self {
        family_to_file(family)
    }

    /// Rebuilds the family, enforcing schema and structural invariants.
    /// Geometric soundness is deliberately *not* checked here; verification
    /// must be able to run on (and fail) an edited file.
    pub fn to_family(&self) -> Result<LoadedFamily, FileError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FileError::SchemaVersion {
                got: self.schema_version,
            });
        }
        let params = params_from_v1(&self.params);
        let rational = matches!(
            self.anchors.first().and_then(|a| a.first()),
            Some(CoordV1::Rational { .. })
        );
        if rational {
            if params.d != 1 {
                return Err(FileError::RationalRequiresOneDim { d: params.d });
            }
            let family = self.decode(&params, CoordV1::to_rational)?;
            Ok(LoadedFamily::Exact(family))
        } else {
            let family = self.decode(&params, CoordV1::to_float)?;
            Ok(LoadedFamily::Float(family))
        }
    }

    fn decode<S: CurveScalar>(
        &self,
        params: &ConstructionParams,
        coord: impl Fn(&CoordV1) -> Result<S, FileError>,
    ) -> Result<CurveFamily<S>, FileError> {
        let point = |coords: &Vec<CoordV1>| -> Result<Point<S>, FileError> {
            Ok(Point::new(
                coords.iter().map(&coord).collect::<Result<Vec<S>, _>>()?,
            ))
        };
        let anchors = self
            .anchors
            .iter()
            .map(point)
            .collect::<Result<Vec<_>, _>>()?;
        let groups = self
            .groups
            .iter()
            .map(|g| {
                if g.host_anchor == 0 {
                    return Err(FileError::HostAnchorZero { group: g.id });
                }
                Ok(SatelliteGroup {
                    id: g.id,
                    host: g.host_anchor - 1,
                    satellites: g
                        .satellites
                        .iter()
                        .map(point)
                        .collect::<Result<Vec<_>, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let curves = self
            .curves
            .iter()
            .map(|c| {
                Ok::<_, FileError>(Curve::labeled(
                    c.label.i,
                    c.label.j,
                    c.vertices
                        .iter()
                        .map(point)
                        .collect::<Result<Vec<_>, _>>()?,
                ))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CurveFamily::from_parts(
            params.clone(),
            anchors,
            groups,
            curves,
        )?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("family serialization");
        s.push('\n');
        s
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, FileError> {
        Ok(serde_json::from_slice(bytes)?)
    }
}

/// Hex SHA-256 of a file's bytes; links reports to the exact family file.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyV1 {
    pub membership_rel: f64,
    pub margin_floor_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerV1 {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl From<TupleSampler> for SamplerV1 {
    fn from(s: TupleSampler) -> Self {
        match s {
            TupleSampler::All => SamplerV1 {
                kind: "all".into(),
                seed: None,
                count: None,
            },
            TupleSampler::Random { seed, count } => SamplerV1 {
                kind: "random".into(),
                seed: Some(seed),
                count: Some(count),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordV1 {
    pub tuple: Vec<usize>,
    pub predicted: Vec<LabelV1>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<Vec<LabelV1>>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realized_radius: Option<CoordV1>,
    /// Absent when nothing is excluded (infinite margin) or when synthesis
    /// failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<CoordV1>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFileV1 {
    pub schema_version: u32,
    pub family_sha256: String,
    /// "float" or "exact".
    pub mode: String,
    pub sampler: SamplerV1,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance_policy: Option<PolicyV1>,
    pub records: Vec<RecordV1>,
    pub distinct_region_count: usize,
    pub claimed_bound: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin: Option<CoordV1>,
    pub status: String,
}

fn labels_to_v1(labels: &std::collections::BTreeSet<Label>) -> Vec<LabelV1> {
    labels
        .iter()
        .map(|l| LabelV1 {
            i: l.group,
            j: l.index,
        })
        .collect()
}

fn outcome_to_v1<S: CurveScalar + EncodeCoord>(o: &TupleOutcome<S>) -> RecordV1 {
    RecordV1 {
        tuple: o.tuple.choices().to_vec(),
        predicted: labels_to_v1(&o.predicted),
        actual: o.actual.as_ref().map(|a| labels_to_v1(&a.labels)),
        status: o.status.to_string(),
        realized_radius: o.realized_radius.as_ref().map(EncodeCoord::encode),
        margin: o
            .actual
            .as_ref()
            .and_then(|a| a.margin.as_ref())
            .map(EncodeCoord::encode),
        error: o.error.clone(),
    }
}

impl ReportFileV1 {
    pub fn from_report<S: CurveScalar + EncodeCoord>(
        report: &VerificationReport<S>,
        family_sha256: String,
        mode: &str,
        sampler: TupleSampler,
        policy: Option<&TolerancePolicy>,
    ) -> Self {
        ReportFileV1 {
            schema_version: SCHEMA_VERSION,
            family_sha256,
            mode: mode.into(),
            sampler: sampler.into(),
            tolerance_policy: policy.map(|p| PolicyV1 {
                membership_rel: p.membership_rel,
                margin_floor_rel: p.margin_floor_rel,
            }),
            records: report.outcomes.iter().map(outcome_to_v1).collect(),
            distinct_region_count: report.distinct_region_count,
            claimed_bound: report.claimed_bound,
            min_margin: report.min_margin.as_ref().map(EncodeCoord::encode),
            status: report.status.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, FileError> {
        Ok(serde_json::from_slice(bytes)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_family, build_family_exact};

    #[test]
    fn exact_family_round_trips() {
        let family = build_family_exact(&ConstructionParams::one_dim(3, 2)).unwrap();
        let file = FamilyFileV1::from_exact_family(&family);
        let json = file.to_json();
        let parsed = FamilyFileV1::from_json(json.as_bytes()).unwrap();
        assert_eq!(parsed, file);
        match parsed.to_family().unwrap() {
            LoadedFamily::Exact(back) => assert_eq!(back, family),
            LoadedFamily::Float(_) => panic!("expected the exact branch"),
        }
    }

    #[test]
    fn float_family_round_trips() {
        let family = build_family(&ConstructionParams::with_defaults(2, 3, 3)).unwrap();
        let file = FamilyFileV1::from_float_family(&family);
        let json = file.to_json();
        let parsed = FamilyFileV1::from_json(json.as_bytes()).unwrap();
        match parsed.to_family().unwrap() {
            LoadedFamily::Float(back) => assert_eq!(back, family),
            LoadedFamily::Exact(_) => panic!("expected the float branch"),
        }
    }

    #[test]
    fn schema_version_is_checked() {
        let family = build_family(&ConstructionParams::one_dim(2, 2)).unwrap();
        let mut file = FamilyFileV1::from_float_family(&family);
        file.schema_version = 9;
        assert!(matches!(
            file.to_family(),
            Err(FileError::SchemaVersion { got: 9 })
        ));
    }

    #[test]
    fn rational_coordinates_reject_higher_dimensions() {
        let family = build_family_exact(&ConstructionParams::one_dim(2, 2)).unwrap();
        let mut file = FamilyFileV1::from_exact_family(&family);
        file.params.d = 2;
        assert!(matches!(
            file.to_family(),
            Err(FileError::RationalRequiresOneDim { d: 2 })
        ));
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = sha256_hex(b"hello");
        let b = sha256_hex(b"hello");
        let c = sha256_hex(b"hello!");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }
}
