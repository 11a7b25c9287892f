//! Command-line surface: generate families, certify them, run the grid
//! oracle, and export figures and data.
//!
//! Exit codes are the machine contract: 0 success, 1 verification
//! mismatch, 2 bad flags or invalid parameters, 3 I/O failure, 4 fragile
//! margins. Stdout is human-oriented and may evolve.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

use crate::constructions::{
    build_family, build_family_exact, synthesize_query, ConstructionParams, CurveFamily,
    IndexTuple, SynthesizedQuery,
};
use crate::dfd::discrete_frechet;
use crate::family_file::{sha256_hex, FamilyFileV1, LoadedFamily, ReportFileV1};
use crate::scalar::CurveScalar;
use crate::svg::render_family;
use crate::verifier::{
    exact_verify_all, oracle_region_count, verify_all, GridSpec, ReportStatus, TolerancePolicy,
    TupleSampler, TupleStatus, VerificationReport, VerifierError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_FRAGILE: i32 = 4;

// Stdout writer that survives a closed pipe; exit codes stay the contract.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(
    name = "frechet-voronoi",
    version,
    about = "Lower-bound curve families for Voronoi diagrams under the discrete Fréchet distance"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a lower-bound family and write it as JSON.
    Generate {
        /// Ambient dimension d.
        #[arg(short = 'd', long)]
        dimension: usize,
        /// Vertices per curve, k.
        #[arg(short = 'k', long)]
        vertices: usize,
        /// Satellites per group, m.
        #[arg(short = 'm', long)]
        satellites: usize,
        /// Base radius r (d >= 2 only; defaults to 1).
        #[arg(short = 'r', long)]
        radius: Option<f64>,
        /// Satellite offset at the second anchor (d >= 2 only).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Satellite offset at later anchors (d >= 2 only).
        #[arg(long)]
        delta: Option<f64>,
        #[arg(short = 'o', long, default_value = "family.json")]
        out: PathBuf,
    },
    /// Certify a family file: synthesize a query per index tuple and
    /// compare actual against predicted nearest-neighbor sets.
    Verify {
        family: PathBuf,
        /// "all" or "random:SEED:COUNT".
        #[arg(long, default_value = "all")]
        tuples: String,
        /// Exact rational arithmetic (1-dimensional families only).
        #[arg(long)]
        exact: bool,
        #[arg(short = 'o', long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Count distinct nearest-neighbor sets over a query grid. Makes no
    /// use of query synthesis: an independent lower-bound witness.
    Oracle {
        family: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        /// Per-vertex window override "I:LO:HI" (1-based vertex index,
        /// applied to every axis of that vertex). Repeatable.
        #[arg(long)]
        range: Vec<String>,
        /// Absolute tolerance for neighbor-set membership.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Export a family as an SVG figure, a CSV distance matrix, or
    /// canonical JSON.
    Export {
        family: PathBuf,
        /// Index tuple "j1,j2,..." to draw the synthesized query.
        #[arg(long)]
        tuple: Option<String>,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Svg,
    Csv,
    Json,
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Generate {
            dimension,
            vertices,
            satellites,
            radius,
            epsilon,
            delta,
            out,
        } => cmd_generate(dimension, vertices, satellites, radius, epsilon, delta, &out),
        Command::Verify {
            family,
            tuples,
            exact,
            out,
        } => cmd_verify(&family, &tuples, exact, &out),
        Command::Oracle {
            family,
            step,
            range,
            tol,
            out,
        } => cmd_oracle(&family, step, &range, tol, out.as_deref()),
        Command::Export {
            family,
            tuple,
            format,
            out,
        } => cmd_export(&family, tuple.as_deref(), format, &out),
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, i32> {
    std::fs::read(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO
    })
}

fn write_bytes(path: &Path, contents: &str) -> Result<(), i32> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_IO
    })
}

fn load_family(path: &Path) -> Result<(LoadedFamily, String), i32> {
    let bytes = read_bytes(path)?;
    let hash = sha256_hex(&bytes);
    let file = FamilyFileV1::from_json(&bytes).map_err(|e| {
        eprintln!("error: {} is not a family file: {e}", path.display());
        EXIT_IO
    })?;
    let family = file.to_family().map_err(|e| {
        eprintln!("error: {} is malformed: {e}", path.display());
        EXIT_IO
    })?;
    Ok((family, hash))
}

fn cmd_generate(
    d: usize,
    k: usize,
    m: usize,
    radius: Option<f64>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    out: &Path,
) -> i32 {
    let params = if d == 1 {
        // The 1-dimensional layout has fixed coordinates; passing offsets
        // is a usage error and is rejected by validation below.
        ConstructionParams {
            d,
            k,
            m,
            r: radius,
            epsilon,
            delta,
        }
    } else {
        let r = radius.unwrap_or(1.0);
        let slack = 0.9
            * ConstructionParams::epsilon_bound(r, m.max(3))
                .min(ConstructionParams::delta_bound(r, d.max(2)));
        ConstructionParams {
            d,
            k,
            m,
            r: Some(r),
            epsilon: Some(epsilon.unwrap_or(slack)),
            delta: Some(delta.unwrap_or(slack)),
        }
    };

    let violations = params.validate();
    if !violations.is_empty() {
        eprintln!("error: invalid parameters:");
        for v in &violations {
            eprintln!("  - {v}");
        }
        return EXIT_USAGE;
    }

    let file = if d == 1 {
        match build_family_exact(&params) {
            Ok(f) => FamilyFileV1::from_exact_family(&f),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    } else {
        match build_family(&params) {
            Ok(f) => FamilyFileV1::from_float_family(&f),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    };

    if let Err(code) = write_bytes(out, &file.to_json()) {
        return code;
    }
    say!(
        "wrote {}: d={} k={} m={} -> {} curves in {} groups",
        out.display(),
        d,
        k,
        m,
        params.curve_count(),
        params.group_count()
    );
    EXIT_OK
}

fn parse_sampler(s: &str) -> Result<TupleSampler, String> {
    if s == "all" {
        return Ok(TupleSampler::All);
    }
    if let Some(rest) = s.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() == 2 {
            if let (Ok(seed), Ok(count)) = (parts[0].parse(), parts[1].parse()) {
                return Ok(TupleSampler::Random { seed, count });
            }
        }
    }
    Err(format!(
        "bad --tuples value '{s}', expected 'all' or 'random:SEED:COUNT'"
    ))
}

fn status_exit(status: ReportStatus) -> i32 {
    match status {
        ReportStatus::Success => EXIT_OK,
        ReportStatus::Mismatch => EXIT_MISMATCH,
        ReportStatus::Fragile => EXIT_FRAGILE,
    }
}

fn cmd_verify(family_path: &Path, tuples: &str, exact: bool, out: &Path) -> i32 {
    let sampler = match parse_sampler(tuples) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let (loaded, hash) = match load_family(family_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let params = loaded.params().clone();
    let label = format!(
        "family {} (d={} k={} m={}, {} curves in {} groups)",
        family_path.display(),
        params.d,
        params.k,
        params.m,
        params.curve_count(),
        params.group_count()
    );

    let (report_file, status) = if exact {
        let exact_family = match &loaded {
            LoadedFamily::Exact(f) => f,
            LoadedFamily::Float(f) => {
                eprintln!(
                    "error: --exact requires a 1-dimensional rational family, got d = {}",
                    f.params().d
                );
                return EXIT_USAGE;
            }
        };
        let report = match exact_verify_all(exact_family, sampler) {
            Ok(r) => r,
            Err(e) => return verifier_error_exit(&e),
        };
        print_report(&report, &label, sampler);
        (
            ReportFileV1::from_report(&report, hash, "exact", sampler, None),
            report.status,
        )
    } else {
        let float_family = loaded.to_float();
        let policy = TolerancePolicy::default();
        let report = match verify_all(&float_family, &policy, sampler) {
            Ok(r) => r,
            Err(e) => return verifier_error_exit(&e),
        };
        print_report(&report, &label, sampler);
        (
            ReportFileV1::from_report(&report, hash, "float", sampler, Some(&policy)),
            report.status,
        )
    };

    if let Err(code) = write_bytes(out, &report_file.to_json()) {
        return code;
    }
    say!("report written to {}", out.display());
    status_exit(status)
}

fn verifier_error_exit(e: &VerifierError) -> i32 {
    eprintln!("error: {e}");
    match e {
        VerifierError::TooManyTuples { .. }
        | VerifierError::GridTooLarge { .. }
        | VerifierError::GridShape { .. }
        | VerifierError::NotOneDimensional { .. } => EXIT_USAGE,
        _ => EXIT_MISMATCH,
    }
}

fn print_report<S: CurveScalar>(
    report: &VerificationReport<S>,
    label: &str,
    sampler: TupleSampler,
) {
    say!("{label}");
    match sampler {
        TupleSampler::All => say!("tuples: all ({})", report.outcomes.len()),
        TupleSampler::Random { seed, count } => {
            say!("tuples: random seed={seed} count={count}")
        }
    }
    let matched = report
        .outcomes
        .iter()
        .filter(|o| o.status == TupleStatus::Match)
        .count();
    let fragile = report
        .outcomes
        .iter()
        .filter(|o| o.status == TupleStatus::Fragile)
        .count();
    let mismatched = report.outcomes.len() - matched - fragile;
    say!("matched {matched}, fragile {fragile}, mismatched {mismatched}");
    say!(
        "distinct regions: {} (claimed bound {})",
        report.distinct_region_count, report.claimed_bound
    );
    if let Some(m) = &report.min_margin {
        say!("min margin: {m}");
    }

    let show_all = report.outcomes.len() <= 48;
    let mut shown = 0usize;
    let mut header_done = false;
    for o in &report.outcomes {
        if !show_all && o.status == TupleStatus::Match {
            continue;
        }
        if shown >= 64 {
            say!("  ... further rows elided");
            break;
        }
        if !header_done {
            say!("  {:<18} {:<9} {:<14} margin", "tuple", "status", "radius");
            header_done = true;
        }
        let radius = o
            .realized_radius
            .as_ref()
            .map_or("-".to_string(), |r| r.to_string());
        let margin = o
            .actual
            .as_ref()
            .map_or("-".to_string(), |a| match &a.margin {
                Some(m) => m.to_string(),
                None => "inf".to_string(),
            });
        let mut line = format!(
            "  {:<18} {:<9} {:<14} {}",
            o.tuple.to_string(),
            o.status.to_string(),
            radius,
            margin
        );
        if let Some(err) = &o.error {
            line.push_str(&format!("  [{err}]"));
        }
        say!("{line}");
        shown += 1;
    }
    say!("status: {}", report.status);
}

fn parse_range(spec: &str) -> Result<(usize, f64, f64), String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        if let (Ok(i), Ok(lo), Ok(hi)) = (
            parts[0].parse::<usize>(),
            parts[1].parse::<f64>(),
            parts[2].parse::<f64>(),
        ) {
            if i >= 1 {
                return Ok((i, lo, hi));
            }
        }
    }
    Err(format!("bad --range '{spec}', expected I:LO:HI with I >= 1"))
}

/// Anchor-centered default windows wide enough to contain every
/// synthesized query vertex.
fn default_grid(family: &CurveFamily<f64>, step: f64) -> GridSpec {
    let params = family.params();
    let w = if params.d == 1 {
        (params.m + 1) as f64
    } else {
        2.5 * params.r.unwrap_or(1.0)
    };
    GridSpec {
        ranges: family
            .anchors()
            .iter()
            .map(|a| a.coords.iter().map(|&c| (c - w, c + w)).collect())
            .collect(),
        step,
    }
}

fn cmd_oracle(
    family_path: &Path,
    step: f64,
    ranges: &[String],
    tol: f64,
    out: Option<&Path>,
) -> i32 {
    let (loaded, _) = match load_family(family_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let family = loaded.to_float();
    let mut grid = default_grid(&family, step);
    for spec in ranges {
        match parse_range(spec) {
            Ok((i, lo, hi)) if i <= family.params().k => {
                grid.ranges[i - 1] = vec![(lo, hi); family.params().d];
            }
            Ok((i, _, _)) => {
                eprintln!("error: --range vertex {i} exceeds k = {}", family.params().k);
                return EXIT_USAGE;
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                return EXIT_USAGE;
            }
        }
    }

    let total = grid.total_queries();
    let count = match oracle_region_count(&family, &grid, tol) {
        Ok(c) => c,
        Err(e) => return verifier_error_exit(&e),
    };
    let reference = (family.params().m as u128)
        .checked_pow(family.group_count() as u32)
        .unwrap_or(u128::MAX);
    say!("grid queries: {total}");
    say!("distinct regions on grid: {count} (tuple space m^G = {reference})");

    if let Some(path) = out {
        let payload = serde_json::json!({
            "schema_version": 1,
            "count": count,
            "tuple_space": reference.to_string(),
            "step": grid.step,
            "ranges": grid.ranges,
            "tol": tol,
        });
        let mut text = serde_json::to_string_pretty(&payload).expect("oracle serialization");
        text.push('\n');
        if let Err(code) = write_bytes(path, &text) {
            return code;
        }
    }
    EXIT_OK
}

fn parse_tuple(spec: &str) -> Result<IndexTuple, String> {
    let choices: Result<Vec<usize>, _> = spec.split(',').map(|p| p.trim().parse()).collect();
    match choices {
        Ok(c) if !c.is_empty() => Ok(IndexTuple::new(c)),
        _ => Err(format!("bad --tuple '{spec}', expected 'j1,j2,...'")),
    }
}

fn cmd_export(
    family_path: &Path,
    tuple: Option<&str>,
    format: ExportFormat,
    out: &Path,
) -> i32 {
    let (loaded, _) = match load_family(family_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let float = loaded.to_float();

    let query: Option<SynthesizedQuery<f64>> = match tuple {
        None => None,
        Some(spec) => {
            let tuple = match parse_tuple(spec) {
                Ok(t) => t,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return EXIT_USAGE;
                }
            };
            match synthesize_query(&float, &tuple) {
                Ok(q) => Some(q),
                Err(e) => {
                    eprintln!("error: query synthesis failed: {e}");
                    return EXIT_MISMATCH;
                }
            }
        }
    };

    let contents = match format {
        ExportFormat::Svg => match render_family(&float, query.as_ref()) {
            Ok(svg) => svg,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        ExportFormat::Csv => distance_csv(&float, query.as_ref()),
        ExportFormat::Json => match &loaded {
            LoadedFamily::Exact(f) => FamilyFileV1::from_exact_family(f).to_json(),
            LoadedFamily::Float(f) => FamilyFileV1::from_float_family(f).to_json(),
        },
    };

    if let Err(code) = write_bytes(out, &contents) {
        return code;
    }
    say!("wrote {}", out.display());
    EXIT_OK
}

/// CSV of discrete Fréchet distances: one row per family curve against all
/// curves, or a single row for the synthesized query when a tuple is given.
fn distance_csv(family: &CurveFamily<f64>, query: Option<&SynthesizedQuery<f64>>) -> String {
    let labels: Vec<String> = family
        .curves()
        .iter()
        .map(|c| c.label().unwrap().to_string())
        .collect();
    let mut out = String::new();
    match query {
        Some(q) => {
            out.push_str(&labels.join(","));
            out.push('\n');
            let row: Vec<String> = family
                .curves()
                .iter()
                .map(|c| discrete_frechet(&q.query, c).unwrap().to_string())
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        None => {
            out.push(',');
            out.push_str(&labels.join(","));
            out.push('\n');
            for (label, curve) in labels.iter().zip(family.curves()) {
                let row: Vec<String> = family
                    .curves()
                    .iter()
                    .map(|other| discrete_frechet(curve, other).unwrap().to_string())
                    .collect();
                out.push_str(label);
                out.push(',');
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_parsing() {
        assert_eq!(parse_sampler("all").unwrap(), TupleSampler::All);
        assert_eq!(
            parse_sampler("random:42:100").unwrap(),
            TupleSampler::Random {
                seed: 42,
                count: 100
            }
        );
        assert!(parse_sampler("random:x:1").is_err());
        assert!(parse_sampler("half").is_err());
    }

    #[test]
    fn range_and_tuple_parsing() {
        assert_eq!(parse_range("1:-3:1").unwrap(), (1, -3.0, 1.0));
        assert!(parse_range("0:0:1").is_err());
        assert!(parse_range("1:0").is_err());
        assert_eq!(parse_tuple("1,2,1").unwrap(), IndexTuple::new(vec![1, 2, 1]));
        assert!(parse_tuple("").is_err());
        assert!(parse_tuple("1,a").is_err());
    }
}
