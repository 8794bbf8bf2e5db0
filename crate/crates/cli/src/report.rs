//! Report models. Every command builds one of these; `--json` prints it
//! with serde and the text form is rendered from the same fields.

use std::fmt::Write as _;

use lscat_core::algebra::{GradedRing, Ring, RingRepr};
use lscat_core::catalogue::SpaceRecord;
use lscat_core::invariants::{BoundLedger, Interval, KnownValue, MorseBound, MorseData};
use lscat_core::maps::{CriterionVerdict, DegreeOneReport};
use serde::Serialize;

pub trait Render {
    fn text(&self) -> String;
}

fn interval(i: &Interval) -> String {
    match i.upper {
        Some(u) => format!("[{}, {}]", i.lower, u),
        None => format!("[{}, inf)", i.lower),
    }
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorView {
    pub name: String,
    pub degree: u32,
    pub truncation: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisView {
    pub label: String,
    pub degree: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductView {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingView {
    Presentation {
        generators: Vec<GeneratorView>,
        top_degree: u32,
    },
    Table {
        basis: Vec<BasisView>,
        products: Vec<ProductView>,
        top_degree: u32,
    },
}

impl RingView {
    pub fn of(ring: &Ring) -> Self {
        match ring.repr() {
            RingRepr::Presentation(p) => RingView::Presentation {
                generators: p
                    .generators()
                    .iter()
                    .zip(p.truncations())
                    .map(|(g, &t)| GeneratorView {
                        name: g.name.clone(),
                        degree: g.degree,
                        truncation: t,
                    })
                    .collect(),
                top_degree: p.top_degree(),
            },
            RingRepr::Table(t) => RingView::Table {
                basis: t
                    .basis()
                    .iter()
                    .map(|b| BasisView {
                        label: b.label.clone(),
                        degree: b.degree,
                    })
                    .collect(),
                products: t
                    .nonzero_products()
                    .into_iter()
                    .map(|(i, j, v)| ProductView {
                        left: t.basis()[i].label.clone(),
                        right: t.basis()[j].label.clone(),
                        value: t.format_element(v),
                    })
                    .collect(),
                top_degree: t.top_degree(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceView {
    pub name: String,
    pub dimension: u32,
    pub connectivity: u32,
    pub orientable: bool,
    pub stably_parallelizable: bool,
    pub ring: Option<RingView>,
    pub known_cat: Option<KnownValue>,
    pub genus: Option<u32>,
    pub homology: Option<MorseData>,
    pub notes: Vec<String>,
}

impl SpaceView {
    pub fn of(r: &SpaceRecord) -> Self {
        Self {
            name: r.name.clone(),
            dimension: r.dimension,
            connectivity: r.connectivity,
            orientable: r.orientable,
            stably_parallelizable: r.stably_parallelizable,
            ring: r.ring.as_ref().map(RingView::of),
            known_cat: r.known_cat.clone(),
            genus: r.genus,
            homology: r.morse.clone(),
            notes: r.notes.clone(),
        }
    }
}

impl Render for SpaceView {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} (dim {})", self.name, self.dimension);
        let _ = writeln!(s, "  connectivity: {}", self.connectivity);
        let _ = writeln!(s, "  orientable: {}", self.orientable);
        let _ = writeln!(s, "  stably parallelizable: {}", self.stably_parallelizable);
        match &self.ring {
            Some(RingView::Presentation { generators, .. }) if generators.is_empty() => {
                let _ = writeln!(s, "  ring: Z/2");
            }
            Some(RingView::Presentation { generators, .. }) => {
                let gens: Vec<String> = generators
                    .iter()
                    .map(|g| format!("{} (deg {})", g.name, g.degree))
                    .collect();
                let rels: Vec<String> = generators
                    .iter()
                    .map(|g| format!("{}^{}", g.name, g.truncation))
                    .collect();
                let _ = writeln!(s, "  ring: Z/2[{}] / ({})", gens.join(", "), rels.join(", "));
            }
            Some(RingView::Table { basis, products, .. }) => {
                let b: Vec<String> = basis
                    .iter()
                    .map(|b| format!("{} (deg {})", b.label, b.degree))
                    .collect();
                let _ = writeln!(s, "  ring basis: {}", b.join(", "));
                for p in products {
                    let _ = writeln!(s, "    {} * {} = {}", p.left, p.right, p.value);
                }
            }
            None => {
                let _ = writeln!(s, "  ring: not recorded");
            }
        }
        if let Some(k) = &self.known_cat {
            let _ = writeln!(s, "  known cat: {} ({})", k.value, k.citation);
        }
        if let Some(g) = self.genus {
            let _ = writeln!(s, "  genus: {g}");
        }
        if let Some(h) = &self.homology {
            let _ = writeln!(s, "  betti: {}", join(h.ranks(), " "));
            if !h.is_torsion_free() {
                let _ = writeln!(s, "  torsion: {}", join(h.torsion(), " "));
            }
            let _ = writeln!(s, "  simply connected: {}", h.simply_connected());
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CupLengthReport {
    pub space: String,
    pub formula: Option<u32>,
    pub search: Option<u32>,
    pub agree: Option<bool>,
}

impl CupLengthReport {
    fn line(&self) -> String {
        match (self.formula, self.search) {
            (Some(f), Some(s)) if f == s => format!("cl = {f} (formula) = {s} (search)"),
            (Some(f), Some(s)) => format!("cl = {f} (formula) != {s} (search): MISMATCH"),
            (Some(f), None) => format!("cl = {f} (formula); search skipped (ring too large)"),
            (None, Some(s)) => format!("cl = {s} (search)"),
            (None, None) => "cl not available (no ring data)".to_string(),
        }
    }
}

impl Render for CupLengthReport {
    fn text(&self) -> String {
        format!("{}: {}\n", self.space, self.line())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsReport {
    pub space: String,
    pub dimension: u32,
    pub poincare_polynomial: Option<Vec<usize>>,
    pub cup_length: CupLengthReport,
    /// `[cl, dim]`, before any known value is applied.
    pub computed_cat: Interval,
    pub known_cat: Option<KnownValue>,
    pub ledger: BoundLedger,
    pub morse: Option<MorseBound>,
    pub poincare_duality: Option<bool>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl Render for InvariantsReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} (dim {})", self.space, self.dimension);
        if let Some(p) = &self.poincare_polynomial {
            let _ = writeln!(s, "  poincare polynomial: {}", join(p, " "));
        }
        let mut summary = format!("{}; cat ∈ {}", self.cup_length.line(), interval(&self.computed_cat));
        if let Some(k) = &self.known_cat {
            let _ = write!(summary, "; known cat = {}", k.value);
        }
        let _ = writeln!(s, "  {summary}");
        let l = &self.ledger;
        if let Some(sb) = l.betti_sum {
            let _ = writeln!(s, "  betti sum: {sb}");
        }
        if let Some(m) = l.mod2_betti_sum {
            let _ = writeln!(s, "  mod-2 betti sum: {m}");
        }
        if let Some(m) = &self.morse {
            let _ = writeln!(
                s,
                "  morse bound: {}{}",
                m.bound,
                if m.exact { " (attained)" } else { "" }
            );
        }
        let _ = writeln!(s, "  ledger:");
        for (name, i) in [
            ("cat", &l.cat),
            ("e*", &l.toomer_e),
            ("ballcat", &l.ballcat),
            ("crit", &l.crit),
            ("crit*", &l.crit_star),
        ] {
            let _ = write!(s, "    {name:<8} {:<12} lower: {}", interval(i), i.lower_source);
            if i.upper.is_some() {
                let _ = write!(s, "; upper: {}", i.upper_source);
            }
            s.push('\n');
        }
        match self.poincare_duality {
            Some(true) => s.push_str("  poincare duality: holds\n"),
            Some(false) => s.push_str("  poincare duality: FAILS\n"),
            None => {}
        }
        for w in &self.warnings {
            let _ = writeln!(s, "  warning: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

fn verdict_lines(s: &mut String, v: &CriterionVerdict) {
    let _ = writeln!(s, "  [{}] {}: {}", v.status.as_str(), v.criterion.as_str(), v.reason);
    for c in &v.citations {
        let _ = writeln!(s, "      see: {c}");
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeView {
    pub degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub injective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapCheckReport {
    pub map: String,
    pub domain: String,
    pub range: String,
    pub degree: i32,
    pub per_degree: Vec<DegreeView>,
    pub injective: bool,
    pub top_class: Option<bool>,
    pub verdict: CriterionVerdict,
}

impl Render for MapCheckReport {
    fn text(&self) -> String {
        let mut s = format!(
            "map {}: {} -> {} (degree {:+})\n",
            self.map, self.domain, self.range, self.degree
        );
        for d in &self.per_degree {
            let _ = writeln!(
                s,
                "  H^{}: {} -> {}, rank {}{}",
                d.degree,
                d.source_dim,
                d.target_dim,
                d.rank,
                if d.injective { "" } else { "  NOT INJECTIVE" }
            );
        }
        match self.top_class {
            Some(true) => s.push_str("  top class: preserved\n"),
            Some(false) => s.push_str("  top class: NOT preserved\n"),
            None => s.push_str("  top class: not checked\n"),
        }
        verdict_lines(&mut s, &self.verdict);
        s
    }
}

impl Render for DegreeOneReport {
    fn text(&self) -> String {
        let mut s = format!(
            "degree +-1 map {} -> {} (dim {}): {}\n",
            self.domain,
            self.range,
            self.dimension,
            self.overall.as_str()
        );
        for v in &self.verdicts {
            verdict_lines(&mut s, v);
        }
        if let Some(l) = &self.domain_ledger {
            let _ = writeln!(s, "  cat {} ∈ {}", self.domain, interval(&l.cat));
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SoRow {
    pub n: u32,
    pub dimension: u32,
    pub presentation: String,
    pub cl_formula: u32,
    pub cl_search: u32,
    pub known_cat: Option<u32>,
    pub expected_dimension: u32,
    pub expected_cl: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MainCriterionRow {
    pub space: String,
    pub dimension: u32,
    pub q: u32,
    pub cat: u32,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusRow {
    pub n: u32,
    pub k: u32,
    pub lhs: i64,
    pub rhs: i64,
    pub expected_k: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub count: usize,
    pub max_size: u128,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<SoRow>,
    pub g2: MainCriterionRow,
    pub torus: TorusRow,
    pub sweep: SweepSummary,
    pub ok: bool,
}

impl Render for VerifyReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<4} {:>4} {:<28} {:>4} {:>4} {:>5}  status",
            "n", "dim", "presentation", "cl_f", "cl_s", "cat"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "SO{:<2} {:>4} {:<28} {:>4} {:>4} {:>5}  {}",
                r.n,
                r.dimension,
                r.presentation,
                r.cl_formula,
                r.cl_search,
                r.known_cat.map_or("-".to_string(), |k| k.to_string()),
                if r.ok {
                    "OK".to_string()
                } else {
                    format!("MISMATCH (expected dim {}, cl {})", r.expected_dimension, r.expected_cl)
                }
            );
        }
        let g = &self.g2;
        let _ = writeln!(
            s,
            "{}: {} = dim {} {} 2q cat {} - 4 = {} (q = {}, cat = {})  {}",
            g.space,
            g.dimension,
            g.space,
            if g.holds { "<=" } else { ">" },
            g.space,
            g.rhs,
            g.q,
            g.cat,
            if g.holds { "OK" } else { "MISMATCH" }
        );
        let t = &self.torus;
        let _ = writeln!(
            s,
            "torus: n = {}, k = {}: 2k - 4 = {} >= k + n = {}  {}",
            t.n,
            t.k,
            t.lhs,
            t.rhs,
            if t.ok { "OK" } else { "MISMATCH" }
        );
        let w = &self.sweep;
        let _ = writeln!(
            s,
            "oracle sweep: {} random presentations (seed {}, size <= {}): {}",
            w.count,
            w.seed,
            w.max_size,
            if w.mismatches.is_empty() {
                "formula = search on all".to_string()
            } else {
                format!("{} MISMATCHES", w.mismatches.len())
            }
        );
        for m in &w.mismatches {
            let _ = writeln!(s, "  {m}");
        }
        let _ = writeln!(s, "{}", if self.ok { "all OK" } else { "FAILED" });
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogueEntry {
    pub name: String,
    pub dimension: u32,
    pub ring: &'static str,
    pub cup_length: Option<u32>,
    pub known_cat: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogueReport {
    pub entries: Vec<CatalogueEntry>,
}

impl Render for CatalogueReport {
    fn text(&self) -> String {
        let mut s = format!("{:<8} {:>4}  {:<12} {:>4} {:>5}\n", "name", "dim", "ring", "cl", "cat");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:<8} {:>4}  {:<12} {:>4} {:>5}",
                e.name,
                e.dimension,
                e.ring,
                e.cup_length.map_or("-".to_string(), |c| c.to_string()),
                e.known_cat.map_or("-".to_string(), |c| c.to_string())
            );
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExportReport {
    pub name: String,
    pub text: String,
}

impl Render for ExportReport {
    fn text(&self) -> String {
        self.text.clone()
    }
}
