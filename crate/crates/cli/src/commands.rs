//! Command implementations. Each returns an [`Outcome`] carrying the JSON
//! model, its text rendering and the exit code.

use std::path::Path;

use lscat_core::algebra::{AlgebraError, GeneratorSpec, GradedRing, Ring, TruncatedPresentation};
use lscat_core::catalogue::{self, Catalogue, CatalogueError, SpaceRecord};
use lscat_core::f2;
use lscat_core::invariants::{
    cat_bounds, cup_length_formula, cup_length_search, morse_lower_bound, so_n_presentation, CupLengths,
};
use lscat_core::maps::{self, MapError, RingHomSpec, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::format::{self, MapFile, ParseError};
use crate::report::*;

pub const EXIT_OK: i32 = 0;
/// `verify-paper` or `cup-length` found a disagreement.
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

pub const DEFAULT_SEED: u64 = 20_241_017;

/// Reference values for `SO(n)`, n = 3..9.
pub const SO_DIMENSIONS: [u32; 7] = [3, 6, 10, 15, 21, 28, 36];
pub const SO_CUP_LENGTHS: [u32; 7] = [3, 4, 8, 9, 11, 12, 20];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {error}")]
    Parse { path: String, error: ParseError },
    /// Well-formed input that does not describe a valid object.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Parse { .. } | Self::Data(_) => EXIT_PARSE,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub code: i32,
}

fn outcome<T: Serialize + Render>(report: &T, code: i32) -> Outcome {
    Outcome {
        json: serde_json::to_value(report).expect("report models serialize"),
        text: report.text(),
        code,
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Certified | Status::NotApplicable => EXIT_OK,
        Status::Violated => EXIT_VIOLATED,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_space_file(path: &Path) -> Result<SpaceRecord, CliError> {
    let text = read(path)?;
    format::parse_space(&text).map_err(|error| CliError::Parse {
        path: path.display().to_string(),
        error,
    })
}

fn from_catalogue(name: &str) -> Result<SpaceRecord, CliError> {
    catalogue::get(name).map(|r| r.as_ref().clone()).map_err(|e| match e {
        CatalogueError::Unknown(_) => CliError::Usage(format!("cannot resolve `{name}`: not a file or catalogue name")),
        other => CliError::Usage(format!("cannot resolve `{name}`: {other}")),
    })
}

/// A path to a space file, or a catalogue name.
pub fn resolve_space(arg: &str) -> Result<SpaceRecord, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        load_space_file(path)
    } else {
        from_catalogue(arg)
    }
}

/// Resolves a space named inside a map file: explicitly loaded spaces
/// first, then the catalogue, then a file relative to the map file.
fn resolve_in_map(name: &str, loaded: &[SpaceRecord], base: &Path) -> Result<SpaceRecord, CliError> {
    if let Some(r) = loaded.iter().find(|r| r.name == name) {
        return Ok(r.clone());
    }
    match from_catalogue(name) {
        Ok(r) => Ok(r),
        Err(e) => {
            let candidate = base.join(name);
            if candidate.is_file() {
                load_space_file(&candidate)
            } else {
                Err(e)
            }
        }
    }
}

pub fn show(arg: &str) -> Result<Outcome, CliError> {
    let r = resolve_space(arg)?;
    Ok(outcome(&SpaceView::of(&r), EXIT_OK))
}

fn cup_length_report(r: &SpaceRecord) -> Result<CupLengthReport, CliError> {
    let Some(ring) = &r.ring else {
        return Ok(CupLengthReport {
            space: r.name.clone(),
            formula: None,
            search: None,
            agree: None,
        });
    };
    let c = CupLengths::of(ring).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(CupLengthReport {
        space: r.name.clone(),
        formula: c.formula,
        search: c.search,
        agree: c.formula.zip(c.search).map(|(a, b)| a == b),
    })
}

pub fn cup_length(arg: &str) -> Result<Outcome, CliError> {
    let r = resolve_space(arg)?;
    let report = cup_length_report(&r)?;
    let code = if report.agree == Some(false) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    Ok(outcome(&report, code))
}

pub fn invariants(arg: &str) -> Result<Outcome, CliError> {
    let r = resolve_space(arg)?;
    let data = |e: &dyn std::fmt::Display| CliError::Data(format!("{}: {e}", r.name));
    let ledger = r.ledger().map_err(|e| data(&e))?;
    let computed = cat_bounds(r.ring.as_ref(), r.dimension, None, r.morse.as_ref()).map_err(|e| data(&e))?;
    let duality = match r.ring.as_ref().map(Ring::table) {
        Some(Ok(t)) => Some(t.check_poincare_duality()),
        Some(Err(AlgebraError::TooLarge { .. })) | None => None,
        Some(Err(e)) => return Err(data(&e)),
    };
    let cl = cup_length_report(&r)?;
    let code = if cl.agree == Some(false) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    let report = InvariantsReport {
        space: r.name.clone(),
        dimension: r.dimension,
        poincare_polynomial: r.ring.as_ref().map(Ring::poincare_polynomial),
        cup_length: cl,
        computed_cat: computed.cat,
        known_cat: r.known_cat.clone(),
        ledger,
        morse: r.morse.as_ref().map(morse_lower_bound),
        poincare_duality: duality,
        warnings: r.ring.as_ref().map(Ring::warnings).unwrap_or_default(),
        notes: r.notes.clone(),
    };
    Ok(outcome(&report, code))
}

/// Builds `f^*: H^*(range) -> H^*(domain)` from a map file.
pub fn hom_spec(map: &MapFile, domain: &SpaceRecord, range: &SpaceRecord) -> Result<RingHomSpec, CliError> {
    let missing = |r: &SpaceRecord| CliError::Data(format!("{}: no cohomology ring recorded", r.name));
    Ok(RingHomSpec {
        name: map.name.clone(),
        source: range.ring.clone().ok_or_else(|| missing(range))?,
        target: domain.ring.clone().ok_or_else(|| missing(domain))?,
        images: map
            .sends
            .iter()
            .map(|s| (s.generator.clone(), s.image.clone()))
            .collect(),
        asserted_degree: map.degree,
    })
}

/// Attaches the offending `send` line to a validation error.
fn map_error(path: &str, map: &MapFile, e: MapError) -> CliError {
    let generator = match &e {
        MapError::UnknownGenerator(g) | MapError::DuplicateImage(g) | MapError::NotHomogeneous(g) => Some(g),
        MapError::DegreeMismatch { generator, .. } => Some(generator),
        _ => None,
    };
    let line = generator.and_then(|g| map.sends.iter().find(|s| &s.generator == g).map(|s| s.line));
    match (e, line) {
        (MapError::DimensionMismatch { m, n }, _) => CliError::Usage(dimension_refusal(m, n)),
        (e, Some(line)) => CliError::Data(format!("{path}: line {line}: {e}")),
        (e, None) => CliError::Data(format!("{path}: {e}")),
    }
}

fn dimension_refusal(m: u32, n: u32) -> String {
    format!("refused: a map of degree +-1 needs dim M = dim N = n, but dim M = {m} and dim N = {n}")
}

fn load_map(path: &str) -> Result<MapFile, CliError> {
    let text = read(Path::new(path))?;
    format::parse_map(&text).map_err(|error| CliError::Parse {
        path: path.to_string(),
        error,
    })
}

pub fn check_map(path: &str, space_files: &[String]) -> Result<Outcome, CliError> {
    let map = load_map(path)?;
    let loaded = space_files
        .iter()
        .map(|f| resolve_space(f))
        .collect::<Result<Vec<_>, _>>()?;
    let base = Path::new(path).parent().unwrap_or(Path::new("."));
    let domain = resolve_in_map(&map.domain, &loaded, base)?;
    let range = resolve_in_map(&map.range, &loaded, base)?;
    if domain.dimension != range.dimension {
        return Err(CliError::Usage(dimension_refusal(domain.dimension, range.dimension)));
    }
    let spec = hom_spec(&map, &domain, &range)?;
    let h = maps::validate_hom(&spec).map_err(|e| map_error(path, &map, e))?;
    let injectivity = maps::check_injectivity(&h);
    let per_degree = h
        .matrices()
        .iter()
        .zip(&injectivity.per_degree)
        .map(|(m, &(degree, injective))| DegreeView {
            degree,
            source_dim: m.num_cols(),
            target_dim: m.num_rows(),
            rank: f2::rank(m),
            injective,
        })
        .collect();
    let top_class = maps::check_top_class(&h).map_err(|e| map_error(path, &map, e))?;
    let verdict = maps::hom_check(&h).map_err(|e| map_error(path, &map, e))?;
    let report = MapCheckReport {
        map: map.name.clone(),
        domain: domain.name.clone(),
        range: range.name.clone(),
        degree: map.degree,
        per_degree,
        injective: injectivity.injective,
        top_class: Some(top_class),
        verdict,
    };
    let code = status_code(report.verdict.status);
    Ok(outcome(&report, code))
}

pub fn degree1_report(m: &str, n: &str, map_path: Option<&str>) -> Result<Outcome, CliError> {
    let domain = resolve_space(m)?;
    let range = resolve_space(n)?;
    if domain.dimension != range.dimension {
        return Err(CliError::Usage(dimension_refusal(domain.dimension, range.dimension)));
    }
    let map = map_path.map(load_map).transpose()?;
    let spec = match &map {
        Some(map) => {
            if map.domain != domain.name || map.range != range.name {
                return Err(CliError::Usage(format!(
                    "map `{}` goes {} -> {}, but the report is for {} -> {}",
                    map.name, map.domain, map.range, domain.name, range.name
                )));
            }
            Some(hom_spec(map, &domain, &range)?)
        }
        None => None,
    };
    let report = maps::full_report(&domain, &range, spec.as_ref()).map_err(|e| match (&map, map_path) {
        (Some(map), Some(path)) => map_error(path, map, e),
        _ => CliError::Data(e.to_string()),
    })?;
    let code = status_code(report.overall);
    Ok(outcome(&report, code))
}

/// A random pure-truncation presentation with at most `max_size` monomials,
/// top degree equal to the formal top.
pub fn random_presentation(rng: &mut impl Rng, max_size: u128) -> TruncatedPresentation {
    loop {
        let k = rng.gen_range(1..=4);
        let spec: Vec<(u32, u32)> = (0..k).map(|_| (rng.gen_range(1..=6), rng.gen_range(1..=16))).collect();
        let size: u128 = spec.iter().map(|&(_, p)| u128::from(p)).product();
        if size > max_size {
            continue;
        }
        let gens = spec
            .iter()
            .enumerate()
            .map(|(i, &(d, _))| GeneratorSpec::new(format!("x{i}"), d))
            .collect();
        let top = spec.iter().map(|&(d, p)| d * (p - 1)).sum();
        return TruncatedPresentation::new(gens, spec.iter().map(|&(_, p)| p).collect(), top)
            .expect("distinct names, positive exponents");
    }
}

/// Compares the closed formula with the ideal-power search on random
/// presentations.
pub fn oracle_sweep(seed: u64, count: usize, max_size: u128) -> SweepSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for i in 0..count {
        let p = random_presentation(&mut rng, max_size);
        let formula = cup_length_formula(&p);
        let search = p.expand_to_table().map(|t| cup_length_search(&t));
        if search.as_ref() != Ok(&formula) {
            mismatches.push(format!("#{i} {p:?}: formula {formula}, search {search:?}"));
        }
    }
    SweepSummary {
        seed,
        count,
        max_size,
        mismatches,
    }
}

fn presentation_text(p: &TruncatedPresentation) -> String {
    p.generators()
        .iter()
        .zip(p.truncations())
        .map(|(g, t)| format!("{}^{}", g.name, t))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verify_report(seed: u64) -> VerifyReport {
    let rows: Vec<SoRow> = (3..=9u32)
        .map(|n| {
            let p = so_n_presentation(n);
            let i = n as usize - 3;
            let cl_formula = cup_length_formula(&p);
            let cl_search = p.expand_to_table().map(|t| cup_length_search(&t)).unwrap_or(u32::MAX);
            let known_cat = catalogue::get(&format!("SO{n}"))
                .ok()
                .and_then(|r| r.known_cat.as_ref().map(|k| k.value));
            let dimension = n * (n - 1) / 2;
            let ok = dimension == SO_DIMENSIONS[i]
                && p.top_degree() == dimension
                && cl_formula == SO_CUP_LENGTHS[i]
                && cl_search == SO_CUP_LENGTHS[i]
                && known_cat == Some(cl_search);
            SoRow {
                n,
                dimension,
                presentation: presentation_text(&p),
                cl_formula,
                cl_search,
                known_cat,
                expected_dimension: SO_DIMENSIONS[i],
                expected_cl: SO_CUP_LENGTHS[i],
                ok,
            }
        })
        .collect();

    let g2 = catalogue::get("G2").expect("G2 is catalogued");
    let q = g2.connectivity + 1;
    let cat = g2.known_cat.as_ref().map_or(0, |k| k.value);
    let rhs = 2 * i64::from(q) * i64::from(cat) - 4;
    let mut probe = SpaceRecord::bare("X14", 14);
    probe.stably_parallelizable = true;
    let certified = maps::thm_main_check(&probe, &g2).status == Status::Certified;
    let g2_row = MainCriterionRow {
        space: g2.name.clone(),
        dimension: g2.dimension,
        q,
        cat,
        rhs,
        holds: i64::from(g2.dimension) <= rhs && rhs == 20 && certified,
    };

    let s = maps::torus_stabilization_k(g2.dimension);
    let torus = TorusRow {
        n: s.n,
        k: s.k,
        lhs: s.lhs,
        rhs: s.rhs,
        expected_k: 18,
        ok: s.k == 18 && s.lhs == s.rhs,
    };

    let sweep = oracle_sweep(seed, 100, 1024);
    let ok = rows.iter().all(|r| r.ok) && g2_row.holds && torus.ok && sweep.mismatches.is_empty();
    VerifyReport {
        rows,
        g2: g2_row,
        torus,
        sweep,
        ok,
    }
}

pub fn verify_paper(seed: u64) -> Result<Outcome, CliError> {
    let report = verify_report(seed);
    let code = if report.ok { EXIT_OK } else { EXIT_MISMATCH };
    Ok(outcome(&report, code))
}

pub fn catalogue(export: Option<&str>) -> Result<Outcome, CliError> {
    if let Some(name) = export {
        let r = resolve_space(name)?;
        let report = ExportReport {
            name: r.name.clone(),
            text: format::serialize_space(&r),
        };
        return Ok(outcome(&report, EXIT_OK));
    }
    let entries = Catalogue::list()
        .into_iter()
        .map(|name| {
            let r = catalogue::get(&name).expect("listed names resolve");
            let ring = match r.ring.as_ref().map(|r| r.as_presentation().is_some()) {
                Some(true) => "presentation",
                Some(false) => "table",
                None => "none",
            };
            CatalogueEntry {
                name,
                dimension: r.dimension,
                ring,
                cup_length: r
                    .ring
                    .as_ref()
                    .and_then(|ring| CupLengths::of(ring).ok())
                    .map(|c| c.value()),
                known_cat: r.known_cat.as_ref().map(|k| k.value),
            }
        })
        .collect();
    Ok(outcome(&CatalogueReport { entries }, EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so6_invariants_line() {
        let o = invariants("SO6").unwrap();
        assert!(
            o.text
                .contains("cl = 9 (formula) = 9 (search); cat ∈ [9, 15]; known cat = 9"),
            "{}",
            o.text
        );
        assert_eq!(o.json["cup_length"]["search"], 9);
    }

    #[test]
    fn point_is_all_zeros() {
        let o = invariants("point").unwrap();
        assert_eq!(o.json["cup_length"]["search"], 0);
        assert_eq!(o.json["ledger"]["cat"]["lower"], 0);
        assert_eq!(o.json["ledger"]["cat"]["upper"], 0);
        assert_eq!(o.json["poincare_polynomial"], serde_json::json!([1]));
    }

    #[test]
    fn verify_is_deterministic() {
        let a = verify_paper(7).unwrap();
        let b = verify_paper(7).unwrap();
        assert_eq!(a.json, b.json);
        assert_eq!(a.code, EXIT_OK, "{}", a.text);
        assert_eq!(a.text.lines().filter(|l| l.ends_with(" OK")).count(), 10);
    }

    #[test]
    fn refusal_on_dimension_mismatch() {
        let e = degree1_report("S2", "S3", None).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        assert!(e.to_string().contains("dim M = dim N = n"));
    }

    #[test]
    fn unresolvable_space() {
        assert_eq!(show("no-such-space").unwrap_err().exit_code(), EXIT_USAGE);
    }
}
