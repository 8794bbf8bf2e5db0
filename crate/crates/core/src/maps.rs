//! Induced cohomology homomorphisms of degree-±1 maps `f: M -> N` and the
//! criteria under which such a map forces `cat M >= cat N`.
//!
//! Direction convention: a map record describes `f: M -> N`; the ring
//! homomorphism goes the other way, `f^*: H^*(N) -> H^*(M)`. `M` is the
//! domain, `N` the range.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Expr, GradedRing, MultiplicationTable, Ring, RingRepr};
use crate::catalogue::SpaceRecord;
use crate::f2::{self, BitMatrix, BitVec};
use crate::invariants::{cup_length, morse_lower_bound, BoundLedger, LedgerError, MorseData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("asserted degree must be +1 or -1, got {0}")]
    BadAssertedDegree(i32),
    #[error("`{0}` is not a generator or basis label of the source ring")]
    UnknownGenerator(String),
    #[error("image of `{0}` given twice")]
    DuplicateImage(String),
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("`{generator}` has degree {expected} but its image has degree {found}")]
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: u32,
    },
    #[error("image of `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("relation {relation} = 0 maps to {image} != 0")]
    RelationNotZero { relation: String, image: String },
    #[error("the unit must map to the unit")]
    UnitNotPreserved,
    #[error("dimensions differ: dim M = {m}, dim N = {n}")]
    DimensionMismatch { m: u32, n: u32 },
    #[error("ring without a unique top class")]
    NoTopClass,
    #[error("{0} has no cohomology ring data")]
    MissingRing(String),
    #[error("the homomorphism's {side} ring does not match space `{space}`")]
    RingMismatch { side: &'static str, space: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

/// A proposed `f^*: H^*(N) -> H^*(M)` given by the images of the source
/// generators (or, for table rings, of the non-unit basis elements).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingHomSpec {
    pub name: String,
    /// Ring of `N`.
    pub source: Ring,
    /// Ring of `M`.
    pub target: Ring,
    pub images: Vec<(String, Expr)>,
    pub asserted_degree: i32,
}

/// A homomorphism that passed [`validate_hom`], with its matrices.
#[derive(Debug, Clone)]
pub struct ValidatedHom {
    name: String,
    source: Ring,
    target: Ring,
    source_table: Arc<MultiplicationTable>,
    target_table: Arc<MultiplicationTable>,
    generator_images: Vec<(String, Element<usize>)>,
    basis_images: Vec<Element<usize>>,
    matrices: Vec<BitMatrix>,
    asserted_degree: i32,
}

/// Names the images are keyed by, with their degrees.
fn source_generators(ring: &Ring, table: &MultiplicationTable) -> Vec<(String, u32)> {
    match ring.repr() {
        RingRepr::Presentation(p) => p.generators().iter().map(|g| (g.name.clone(), g.degree)).collect(),
        RingRepr::Table(_) => table
            .positive_indices()
            .into_iter()
            .map(|i| (table.basis()[i].label.clone(), table.degree(i)))
            .collect(),
    }
}

/// Evaluates `expr` in `target`, substituting `images` for source symbols.
fn substitute(
    expr: &Expr,
    images: &BTreeMap<&str, &Element<usize>>,
    target: &MultiplicationTable,
) -> Result<Element<usize>, MapError> {
    let mut total = Element::zero();
    for mono in expr.monomials() {
        let mut acc = target.unit();
        for (name, power) in mono.factors() {
            let image = images
                .get(name.as_str())
                .ok_or_else(|| MapError::UnknownGenerator(name.clone()))?;
            for _ in 0..*power {
                acc = target.multiply(&acc, image)?;
            }
        }
        total.add_assign(&acc);
    }
    Ok(total)
}

pub fn validate_hom(h: &RingHomSpec) -> Result<ValidatedHom, MapError> {
    if h.asserted_degree.abs() != 1 {
        return Err(MapError::BadAssertedDegree(h.asserted_degree));
    }
    let source_table = h.source.table()?;
    let target_table = h.target.table()?;
    let generators = source_generators(&h.source, &source_table);
    let degree_of: BTreeMap<&str, u32> = generators.iter().map(|(n, d)| (n.as_str(), *d)).collect();

    let unit_label = &source_table.basis()[source_table.unit_index()].label;
    let mut given: BTreeMap<&str, Element<usize>> = BTreeMap::new();
    for (name, expr) in &h.images {
        let image = h.target.eval(expr)?;
        if name == unit_label && !degree_of.contains_key(name.as_str()) {
            if image != target_table.unit() {
                return Err(MapError::UnitNotPreserved);
            }
            continue;
        }
        let Some(&expected) = degree_of.get(name.as_str()) else {
            return Err(MapError::UnknownGenerator(name.clone()));
        };
        let found = target_table
            .homogeneous_degree(&image)
            .map_err(|_| MapError::NotHomogeneous(name.clone()))?;
        if let Some(found) = found {
            if found != expected {
                return Err(MapError::DegreeMismatch {
                    generator: name.clone(),
                    expected,
                    found,
                });
            }
        }
        if given.insert(name.as_str(), image).is_some() {
            return Err(MapError::DuplicateImage(name.clone()));
        }
    }
    if let Some((missing, _)) = generators.iter().find(|(n, _)| !given.contains_key(n.as_str())) {
        return Err(MapError::MissingImage(missing.clone()));
    }
    let lookup: BTreeMap<&str, &Element<usize>> = given.iter().map(|(k, v)| (*k, v)).collect();

    // image of every source basis element
    let basis_images: Vec<Element<usize>> = match h.source.repr() {
        RingRepr::Presentation(p) => {
            for (g, &trunc) in p.generators().iter().zip(p.truncations()) {
                let relation =
                    Expr::from_monomials(vec![crate::algebra::ExprMonomial::new(vec![(g.name.clone(), trunc)])]);
                let image = substitute(&relation, &lookup, &target_table)?;
                if !image.is_zero() {
                    return Err(MapError::RelationNotZero {
                        relation: relation.to_string(),
                        image: target_table.format_element(&image),
                    });
                }
            }
            source_table
                .basis()
                .iter()
                .map(|b| {
                    let expr = Expr::parse(&b.label).expect("monomial labels parse");
                    substitute(&expr, &lookup, &target_table)
                })
                .collect::<Result<_, _>>()?
        }
        RingRepr::Table(_) => {
            let mut images = vec![Element::zero(); source_table.len()];
            images[source_table.unit_index()] = target_table.unit();
            for (name, image) in &given {
                let i = source_table.index_of(name).expect("validated label");
                images[i] = image.clone();
            }
            let image_of = |e: &Element<usize>| {
                let mut out = Element::zero();
                for &t in e.terms() {
                    out.add_assign(&images[t]);
                }
                out
            };
            let positive = source_table.positive_indices();
            for (a, &i) in positive.iter().enumerate() {
                for &j in &positive[a..] {
                    let lhs = image_of(&source_table.product(i, j));
                    let rhs = target_table.multiply(&images[i], &images[j])?;
                    if lhs != rhs {
                        let relation = format!(
                            "{}*{} - ({})",
                            source_table.basis()[i].label,
                            source_table.basis()[j].label,
                            source_table.format_element(&source_table.product(i, j))
                        );
                        return Err(MapError::RelationNotZero {
                            relation,
                            image: target_table.format_element(&lhs.add(&rhs)),
                        });
                    }
                }
            }
            images
        }
    };

    let matrices = (0..=source_table.top_degree())
        .map(|d| degree_matrix(&source_table, &target_table, &basis_images, d))
        .collect();
    let generator_images = generators
        .iter()
        .map(|(n, _)| (n.clone(), given[n.as_str()].clone()))
        .collect();
    Ok(ValidatedHom {
        name: h.name.clone(),
        source: h.source.clone(),
        target: h.target.clone(),
        source_table,
        target_table,
        generator_images,
        basis_images,
        matrices,
        asserted_degree: h.asserted_degree,
    })
}

/// Matrix of `H^d(N) -> H^d(M)`: one column per source basis element,
/// one row per target basis element.
fn degree_matrix(
    source: &MultiplicationTable,
    target: &MultiplicationTable,
    images: &[Element<usize>],
    d: u32,
) -> BitMatrix {
    let cols = source.indices_in_degree(d);
    let rows = target.indices_in_degree(d);
    let position: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let columns: Vec<BitVec> = cols
        .iter()
        .map(|&c| BitVec::from_ones(rows.len(), images[c].terms().map(|t| position[t])))
        .collect();
    BitMatrix::from_rows(rows.len(), columns)
        .expect("columns sized to target degree")
        .transpose()
}

impl ValidatedHom {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn asserted_degree(&self) -> i32 {
        self.asserted_degree
    }

    pub fn source_table(&self) -> &MultiplicationTable {
        &self.source_table
    }

    pub fn target_table(&self) -> &MultiplicationTable {
        &self.target_table
    }

    /// Per-degree matrices, indexed by degree `0..=dim N`.
    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    pub fn generator_images(&self) -> &[(String, Element<usize>)] {
        &self.generator_images
    }

    /// Image of a source element (in source table coordinates).
    pub fn apply(&self, e: &Element<usize>) -> Element<usize> {
        let mut out = Element::zero();
        for &t in e.terms() {
            out.add_assign(&self.basis_images[t]);
        }
        out
    }

    /// The spec of `next ∘ self`, where `next` starts at this map's target.
    pub fn then(&self, next: &ValidatedHom) -> Result<RingHomSpec, MapError> {
        if next.source != self.target {
            return Err(MapError::RingMismatch {
                side: "source",
                space: next.name.clone(),
            });
        }
        let images = self
            .generator_images
            .iter()
            .map(|(name, image)| {
                let composite = next.apply(image);
                let expr = element_expr(&next.target_table, &composite);
                (name.clone(), expr)
            })
            .collect();
        Ok(RingHomSpec {
            name: format!("{}.{}", next.name, self.name),
            source: self.source.clone(),
            target: next.target.clone(),
            images,
            asserted_degree: self.asserted_degree * next.asserted_degree,
        })
    }
}

/// An element written back as an expression over its basis labels.
pub fn element_expr(table: &MultiplicationTable, e: &Element<usize>) -> Expr {
    let monomials = e
        .terms()
        .flat_map(|&t| {
            Expr::parse(&table.basis()[t].label)
                .expect("basis labels parse as expressions")
                .monomials()
                .to_vec()
        })
        .collect();
    Expr::from_monomials(monomials)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    /// `(degree, injective)` for each degree up to `dim N`.
    pub per_degree: Vec<(u32, bool)>,
    pub injective: bool,
}

pub fn check_injectivity(h: &ValidatedHom) -> InjectivityReport {
    let per_degree: Vec<(u32, bool)> = h
        .matrices
        .iter()
        .enumerate()
        .map(|(d, m)| (d as u32, f2::is_injective(m)))
        .collect();
    let injective = per_degree.iter().all(|&(_, ok)| ok);
    InjectivityReport { per_degree, injective }
}

/// Whether `f^*` carries the top class of `N` to the top class of `M`.
pub fn check_top_class(h: &ValidatedHom) -> Result<bool, MapError> {
    let (s, t) = (&h.source_table, &h.target_table);
    if s.top_degree() != t.top_degree() {
        return Err(MapError::DimensionMismatch {
            m: t.top_degree(),
            n: s.top_degree(),
        });
    }
    let (Some(top_n), Some(top_m)) = (s.top_class(), t.top_class()) else {
        return Err(MapError::NoTopClass);
    };
    Ok(h.basis_images[top_n] == Element::term(top_m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    LemmaInjectivity,
    PropClMonotone,
    CorCatTransfer,
    ThmMain,
    ThmTorus,
    LowDim,
    MorseTransfer,
}

impl CriterionId {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LemmaInjectivity => "lemma_injectivity",
            Self::PropClMonotone => "prop_cl_monotone",
            Self::CorCatTransfer => "cor_cat_transfer",
            Self::ThmMain => "thm_main",
            Self::ThmTorus => "thm_torus",
            Self::LowDim => "low_dim",
            Self::MorseTransfer => "morse_transfer",
        }
    }

    /// Criteria whose certification is the conclusion `cat M >= cat N`.
    /// The others certify cup-length, crit*, stabilized or necessary-condition
    /// statements.
    pub fn concludes_cat(self) -> bool {
        matches!(self, Self::CorCatTransfer | Self::ThmMain | Self::LowDim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Violated,
    Inconclusive,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Certified => "certified",
            Self::Violated => "violated",
            Self::Inconclusive => "inconclusive",
            Self::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub criterion: CriterionId,
    pub status: Status,
    pub reason: String,
    pub citations: Vec<String>,
}

impl CriterionVerdict {
    fn new(criterion: CriterionId, status: Status, reason: impl Into<String>, citations: &[&str]) -> Self {
        Self {
            criterion,
            status,
            reason: reason.into(),
            citations: citations.iter().map(|c| c.to_string()).collect(),
        }
    }
}

const CITE_MONO: &str = "degree-one maps induce monomorphisms f*: H*(N) -> H*(M)";
const CITE_CL: &str = "cl(M) >= cl(N) for maps of degree +-1";
const CITE_COR: &str = "cl(N) = cat N implies cat M >= cat N for maps of degree +-1";
const CITE_MAIN: &str =
    "stably parallelizable M, N with N (q-1)-connected and dim N <= 2q cat N - 4 give cat M >= cat N";
const CITE_TORUS: &str = "cat(M x T^k) >= cat(N x T^k) for k >= n + 4 (stably parallelizable M, N)";
const CITE_LOW_DIM: &str = "cat M^n >= cat N^n for n <= 4 and maps of degree 1";
const CITE_GENUS: &str = "genus monotonicity g(M) >= g(N) for surfaces";
const CITE_OR: &str = "[OR] (3-manifolds)";
const CITE_DKR: &str = "[DKR], [DR] (4-manifolds)";
const CITE_MORSE: &str =
    "Morse inequalities m_l >= r_l + t_l + t_(l-1); Smale: equalities for simply connected dim >= 6";
const CITE_RANKS: &str = "r_l(M) >= r_l(N) and t_l(M) >= t_l(N) for maps of degree 1";

pub const OPEN_QUESTION_NOTE: &str =
    "ballcat and crit monotonicity under degree-1 maps: open question, no criterion evaluated";
pub const NORMAL_BUNDLE_NOTE: &str = "stable parallelizability in thm_main may be weakened to stable fibre-homotopy triviality of the normal bundle of M (not evaluated)";

/// Cup-length obstruction.
pub fn check_cl_monotone(m_ring: Option<&Ring>, n_ring: Option<&Ring>) -> Result<CriterionVerdict, MapError> {
    let id = CriterionId::PropClMonotone;
    let (Some(m), Some(n)) = (m_ring, n_ring) else {
        return Ok(CriterionVerdict::new(
            id,
            Status::NotApplicable,
            "cohomology ring missing for M or N",
            &[CITE_CL],
        ));
    };
    let (cm, cn) = (cup_length(m)?, cup_length(n)?);
    Ok(if cm >= cn {
        CriterionVerdict::new(
            id,
            Status::Certified,
            format!("cl(M) = {cm} >= cl(N) = {cn}"),
            &[CITE_CL],
        )
    } else {
        CriterionVerdict::new(
            id,
            Status::Violated,
            format!("cl(M) = {cm} < cl(N) = {cn}: no map M -> N of degree +-1 exists"),
            &[CITE_CL],
        )
    })
}

/// If `cl(N) = cat N`, then `cat M >= cat N`; returns the verdict and `M`'s
/// ledger with the cat lower bound raised accordingly.
pub fn cor_cat_transfer(m_ledger: &BoundLedger, n_ledger: &BoundLedger) -> (CriterionVerdict, BoundLedger) {
    let id = CriterionId::CorCatTransfer;
    let mut tightened = m_ledger.clone();
    let Some(cl_n) = n_ledger.cup_length else {
        return (
            CriterionVerdict::new(id, Status::Inconclusive, "cl(N) unknown (no ring data)", &[CITE_COR]),
            tightened,
        );
    };
    let cat_n = &n_ledger.cat;
    if !(cat_n.is_exact() && cat_n.lower == u64::from(cl_n)) {
        return (
            CriterionVerdict::new(
                id,
                Status::Inconclusive,
                format!("hypothesis cl(N) = cat N not established: cl(N) = {cl_n}, cat N in {cat_n}"),
                &[CITE_COR],
            ),
            tightened,
        );
    }
    match tightened.tighten_cat_lower(cat_n.lower, "cat M >= cat N = cl(N)") {
        Ok(_) => (
            CriterionVerdict::new(
                id,
                Status::Certified,
                format!("cl(N) = cat N = {cl_n}, so cat M >= {cl_n}"),
                &[CITE_COR],
            ),
            tightened,
        ),
        Err(_) => (
            CriterionVerdict::new(
                id,
                Status::Violated,
                format!(
                    "cat M <= {} < cat N = {cl_n}: no map M -> N of degree +-1 exists",
                    m_ledger.cat.upper.unwrap_or(0)
                ),
                &[CITE_COR],
            ),
            m_ledger.clone(),
        ),
    }
}

/// The connectivity/dimension criterion for stably parallelizable manifolds.
pub fn thm_main_check(m: &SpaceRecord, n: &SpaceRecord) -> CriterionVerdict {
    let id = CriterionId::ThmMain;
    let inconclusive = |why: String| CriterionVerdict::new(id, Status::Inconclusive, why, &[CITE_MAIN]);
    if !m.stably_parallelizable {
        return inconclusive(format!("{} is not declared stably parallelizable", m.name));
    }
    if !n.stably_parallelizable {
        return inconclusive(format!("{} is not declared stably parallelizable", n.name));
    }
    if m.dimension != n.dimension {
        return CriterionVerdict::new(id, Status::NotApplicable, "dim M != dim N", &[CITE_MAIN]);
    }
    let (cat, which) = match &n.known_cat {
        Some(k) => (k.value, format!("known cat N = {} ({})", k.value, k.citation)),
        None => match n.ledger() {
            Ok(l) if n.ring.is_some() => (
                l.cat.lower as u32,
                format!("cat N unknown; conditional on the lower bound cat N >= {}", l.cat.lower),
            ),
            _ => return inconclusive(format!("no cat data for {}", n.name)),
        },
    };
    let q = n.connectivity + 1;
    let rhs = 2 * i64::from(q) * i64::from(cat) - 4;
    let holds = i64::from(n.dimension) <= rhs;
    let which = if holds && n.known_cat.is_none() {
        format!("{which}, so it also holds for the true cat N")
    } else {
        which
    };
    let detail = format!(
        "N is {}-connected, q = {q}; dim N = {} {} 2*q*cat N - 4 = {rhs}; {which}",
        n.connectivity,
        n.dimension,
        if holds { "<=" } else { ">" }
    );
    if holds {
        CriterionVerdict::new(id, Status::Certified, detail, &[CITE_MAIN])
    } else {
        inconclusive(detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusStabilization {
    pub n: u32,
    pub k: u32,
    /// `2k - 4`
    pub lhs: i64,
    /// `k + n`
    pub rhs: i64,
}

impl TorusStabilization {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }
}

/// Smallest `k` with `2k - 4 >= k + n`, i.e. `k = n + 4`.
pub fn torus_stabilization_k(n: u32) -> TorusStabilization {
    let k = n + 4;
    TorusStabilization {
        n,
        k,
        lhs: 2 * i64::from(k) - 4,
        rhs: i64::from(k) + i64::from(n),
    }
}

/// Stabilized conclusion `cat(M x T^k) >= cat(N x T^k)`.
pub fn thm_torus_check(m: &SpaceRecord, n: &SpaceRecord) -> CriterionVerdict {
    let id = CriterionId::ThmTorus;
    if !(m.stably_parallelizable && n.stably_parallelizable) {
        return CriterionVerdict::new(
            id,
            Status::Inconclusive,
            "M and N must both be stably parallelizable",
            &[CITE_TORUS],
        );
    }
    let s = torus_stabilization_k(n.dimension);
    CriterionVerdict::new(
        id,
        Status::Certified,
        format!(
            "cat(M x T^{k}) >= cat(N x T^{k}) with k = {k}: 2k - 4 = {} >= k + n = {}",
            s.lhs,
            s.rhs,
            k = s.k
        ),
        &[CITE_TORUS],
    )
}

/// Dimensions up to four. For surfaces with known genera, a genus drop
/// rules the map out.
pub fn low_dim_check(n: u32, m_genus: Option<u32>, n_genus: Option<u32>) -> CriterionVerdict {
    let id = CriterionId::LowDim;
    match n {
        0 | 1 => CriterionVerdict::new(id, Status::Certified, format!("n = {n} <= 4"), &[CITE_LOW_DIM]),
        2 => match (m_genus, n_genus) {
            (Some(gm), Some(gn)) if gm < gn => CriterionVerdict::new(
                id,
                Status::Violated,
                format!("g(M) = {gm} < g(N) = {gn}: no map of degree 1 exists"),
                &[CITE_LOW_DIM, CITE_GENUS],
            ),
            (Some(gm), Some(gn)) => CriterionVerdict::new(
                id,
                Status::Certified,
                format!("n = 2, genus monotone: g(M) = {gm} >= g(N) = {gn}"),
                &[CITE_LOW_DIM, CITE_GENUS],
            ),
            _ => CriterionVerdict::new(id, Status::Certified, "n = 2 <= 4", &[CITE_LOW_DIM, CITE_GENUS]),
        },
        3 => CriterionVerdict::new(id, Status::Certified, "n = 3 <= 4", &[CITE_LOW_DIM, CITE_OR]),
        4 => CriterionVerdict::new(id, Status::Certified, "n = 4 <= 4", &[CITE_LOW_DIM, CITE_DKR]),
        _ => CriterionVerdict::new(id, Status::NotApplicable, format!("n = {n} > 4"), &[CITE_LOW_DIM]),
    }
}

/// Termwise homology comparison and the `crit*` transfer.
pub fn morse_transfer_check(m: Option<&MorseData>, n: Option<&MorseData>) -> Result<CriterionVerdict, MapError> {
    let id = CriterionId::MorseTransfer;
    let (Some(m), Some(n)) = (m, n) else {
        return Ok(CriterionVerdict::new(
            id,
            Status::NotApplicable,
            "homology ranks missing for M or N",
            &[CITE_MORSE],
        ));
    };
    if m.dimension() != n.dimension() {
        return Err(MapError::DimensionMismatch {
            m: m.dimension(),
            n: n.dimension(),
        });
    }
    let cites = [CITE_RANKS, CITE_MORSE];
    for (what, a, b) in [("r", m.ranks(), n.ranks()), ("t", m.torsion(), n.torsion())] {
        if let Some(l) = (0..a.len()).find(|&l| a[l] < b[l]) {
            return Ok(CriterionVerdict::new(
                id,
                Status::Violated,
                format!(
                    "{what}_{l}(M) = {} < {what}_{l}(N) = {}: no map of degree 1 exists",
                    a[l], b[l]
                ),
                &cites,
            ));
        }
    }
    let (bm, bn) = (morse_lower_bound(m), morse_lower_bound(n));
    if bm.exact && bn.exact {
        Ok(CriterionVerdict::new(
            id,
            Status::Certified,
            format!("crit*(M) = {} >= crit*(N) = {}", bm.bound, bn.bound),
            &cites,
        ))
    } else {
        Ok(CriterionVerdict::new(
            id,
            Status::Inconclusive,
            format!(
                "ranks termwise monotone; Morse bounds {} >= {} are not known to be attained (needs simply connected, dim >= 6)",
                bm.bound, bn.bound
            ),
            &cites,
        ))
    }
}

/// Necessary mod-2 conditions on an asserted degree-±1 homomorphism.
pub fn hom_check(h: &ValidatedHom) -> Result<CriterionVerdict, MapError> {
    let id = CriterionId::LemmaInjectivity;
    let top = check_top_class(h)?;
    let inj = check_injectivity(h);
    let failed: Vec<String> = inj
        .per_degree
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(d, _)| d.to_string())
        .collect();
    Ok(if !top {
        CriterionVerdict::new(
            id,
            Status::Violated,
            format!("`{}` does not carry the top class of N to the top class of M", h.name),
            &[CITE_MONO],
        )
    } else if !failed.is_empty() {
        CriterionVerdict::new(
            id,
            Status::Violated,
            format!("`{}` is not injective in degree(s) {}", h.name, failed.join(", ")),
            &[CITE_MONO],
        )
    } else {
        CriterionVerdict::new(
            id,
            Status::Certified,
            format!("`{}` is injective in every degree and hits the top class", h.name),
            &[CITE_MONO],
        )
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeOneReport {
    pub domain: String,
    pub range: String,
    pub dimension: u32,
    pub overall: Status,
    pub verdicts: Vec<CriterionVerdict>,
    /// Ledger of `M` after every applicable tightening.
    pub domain_ledger: Option<BoundLedger>,
    pub notes: Vec<String>,
}

/// Violated beats certified; only criteria concluding `cat M >= cat N` can
/// certify.
pub fn aggregate(verdicts: &[CriterionVerdict]) -> Status {
    if verdicts.iter().any(|v| v.status == Status::Violated) {
        Status::Violated
    } else if verdicts
        .iter()
        .any(|v| v.status == Status::Certified && v.criterion.concludes_cat())
    {
        Status::Certified
    } else {
        Status::Inconclusive
    }
}

/// Runs every applicable criterion for a putative `f: M -> N` of degree ±1.
///
/// Order: low_dim, cl_monotone, cor_cat_transfer, thm_main, morse_transfer,
/// hom checks, thm_torus.
pub fn full_report(m: &SpaceRecord, n: &SpaceRecord, hom: Option<&RingHomSpec>) -> Result<DegreeOneReport, MapError> {
    if m.dimension != n.dimension {
        return Err(MapError::DimensionMismatch {
            m: m.dimension,
            n: n.dimension,
        });
    }
    let mut verdicts = vec![
        low_dim_check(m.dimension, m.genus, n.genus),
        check_cl_monotone(m.ring.as_ref(), n.ring.as_ref())?,
    ];
    let m_ledger = m.ledger()?;
    let n_ledger = n.ledger()?;
    let (cor, tightened) = cor_cat_transfer(&m_ledger, &n_ledger);
    verdicts.push(cor);
    verdicts.push(thm_main_check(m, n));
    verdicts.push(morse_transfer_check(m.morse.as_ref(), n.morse.as_ref())?);
    if let Some(h) = hom {
        if n.ring.as_ref() != Some(&h.source) {
            return Err(MapError::RingMismatch {
                side: "source",
                space: n.name.clone(),
            });
        }
        if m.ring.as_ref() != Some(&h.target) {
            return Err(MapError::RingMismatch {
                side: "target",
                space: m.name.clone(),
            });
        }
        let validated = validate_hom(h)?;
        verdicts.push(hom_check(&validated)?);
    }
    verdicts.push(thm_torus_check(m, n));

    let mut notes = vec![OPEN_QUESTION_NOTE.to_string(), NORMAL_BUNDLE_NOTE.to_string()];
    let mut seen = HashSet::new();
    for note in m.notes.iter().chain(&n.notes) {
        if seen.insert(note) {
            notes.push(note.clone());
        }
    }
    Ok(DegreeOneReport {
        domain: m.name.clone(),
        range: n.name.clone(),
        dimension: m.dimension,
        overall: aggregate(&verdicts),
        verdicts,
        domain_ledger: Some(tightened),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruncatedPresentation;
    use crate::catalogue::{self, surface_table};
    use crate::invariants::so_n_presentation;

    fn hom(source: Ring, target: Ring, images: &[(&str, &str)]) -> RingHomSpec {
        RingHomSpec {
            name: "h".into(),
            source,
            target,
            images: images
                .iter()
                .map(|(g, e)| (g.to_string(), Expr::parse(e).unwrap()))
                .collect(),
            asserted_degree: 1,
        }
    }

    fn identity(ring: &Ring) -> RingHomSpec {
        let table = ring.table().unwrap();
        let owned: Vec<(String, String)> = source_generators(ring, &table)
            .into_iter()
            .map(|(n, _)| (n.clone(), n))
            .collect();
        let refs: Vec<(&str, &str)> = owned.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        hom(ring.clone(), ring.clone(), &refs)
    }

    fn collapse() -> RingHomSpec {
        hom(
            catalogue::torus_presentation(2).into(),
            surface_table(2).into(),
            &[("t1", "a1"), ("t2", "b1")],
        )
    }

    #[test]
    fn identity_is_valid_and_injective() {
        for name in ["SO3", "SO5", "T3", "S_2", "point"] {
            let ring = catalogue::get(name).unwrap().ring.clone().unwrap();
            let h = validate_hom(&identity(&ring)).unwrap();
            assert!(check_injectivity(&h).injective, "{name}");
            assert!(check_top_class(&h).unwrap(), "{name}");
        }
    }

    #[test]
    fn relation_must_vanish() {
        let source = TruncatedPresentation::single("b1", 1, 4, 3).unwrap();
        let target = TruncatedPresentation::single("a1", 1, 8, 7).unwrap();
        let h = hom(source.into(), target.into(), &[("b1", "a1")]);
        assert!(matches!(validate_hom(&h), Err(MapError::RelationNotZero { .. })));
    }

    #[test]
    fn degree_must_match() {
        let source = TruncatedPresentation::single("b1", 1, 2, 1).unwrap();
        let target: Ring = so_n_presentation(4).into();
        let h = hom(source.into(), target, &[("b1", "b3")]);
        assert_eq!(
            validate_hom(&h).unwrap_err(),
            MapError::DegreeMismatch {
                generator: "b1".into(),
                expected: 1,
                found: 3
            }
        );
    }

    #[test]
    fn unknown_and_missing_generators() {
        let t2: Ring = catalogue::torus_presentation(2).into();
        let h = hom(t2.clone(), t2.clone(), &[("t1", "t1"), ("t9", "t2")]);
        assert_eq!(validate_hom(&h).unwrap_err(), MapError::UnknownGenerator("t9".into()));
        let h = hom(t2.clone(), t2.clone(), &[("t1", "t1")]);
        assert_eq!(validate_hom(&h).unwrap_err(), MapError::MissingImage("t2".into()));
        let mut h = identity(&t2);
        h.asserted_degree = 2;
        assert_eq!(validate_hom(&h).unwrap_err(), MapError::BadAssertedDegree(2));
    }

    #[test]
    fn table_source_checks_multiplicativity() {
        let s1: Ring = surface_table(1).into();
        // a1 -> a1, b1 -> a1 sends a1*b1 = w to a1^2 = 0 but w -> w
        let bad = hom(s1.clone(), s1.clone(), &[("a1", "a1"), ("b1", "a1"), ("w", "w")]);
        assert!(matches!(validate_hom(&bad), Err(MapError::RelationNotZero { .. })));
        let bad_unit = hom(
            s1.clone(),
            s1.clone(),
            &[("1", "0"), ("a1", "a1"), ("b1", "b1"), ("w", "w")],
        );
        assert_eq!(validate_hom(&bad_unit).unwrap_err(), MapError::UnitNotPreserved);
    }

    #[test]
    fn collapse_map_checks() {
        let h = validate_hom(&collapse()).unwrap();
        let inj = check_injectivity(&h);
        assert_eq!(inj.per_degree, vec![(0, true), (1, true), (2, true)]);
        assert_eq!(f2::rank(&h.matrices()[1]), 2);
        assert_eq!(h.matrices()[1].num_rows(), 4);
        assert!(check_top_class(&h).unwrap());
    }

    #[test]
    fn killing_a_generator_is_violated() {
        // t2 -> 0 loses a degree-1 class and the top class
        let t2: Ring = catalogue::torus_presentation(2).into();
        let s2: Ring = surface_table(2).into();
        let h = validate_hom(&hom(t2, s2, &[("t1", "a1"), ("t2", "0")])).unwrap();
        let inj = check_injectivity(&h);
        assert!(!inj.injective);
        assert_eq!(inj.per_degree[1], (1, false));
        assert!(!check_top_class(&h).unwrap());
        assert_eq!(hom_check(&h).unwrap().status, Status::Violated);

        // multiplicative but zero in positive degrees
        let s2: Ring = surface_table(2).into();
        let h = validate_hom(&hom(
            s2.clone(),
            s2,
            &[("a1", "0"), ("b1", "0"), ("a2", "0"), ("b2", "0"), ("w", "0")],
        ))
        .unwrap();
        assert!(!check_top_class(&h).unwrap());
        let inj = check_injectivity(&h);
        assert_eq!(inj.per_degree, vec![(0, true), (1, false), (2, false)]);
        assert_eq!(hom_check(&h).unwrap().status, Status::Violated);
    }

    #[test]
    fn top_class_dimension_mismatch() {
        let s3: Ring = so_n_presentation(3).into();
        let t: Ring = catalogue::torus_presentation(4).into();
        let h = validate_hom(&hom(s3, t, &[("b1", "0")])).unwrap();
        assert_eq!(check_top_class(&h), Err(MapError::DimensionMismatch { m: 4, n: 3 }));
    }

    #[test]
    fn cl_monotone() {
        let s2 = catalogue::get("S_2").unwrap();
        let t2 = catalogue::get("T2").unwrap();
        let sphere = catalogue::get("S2").unwrap();
        let v = check_cl_monotone(s2.ring.as_ref(), t2.ring.as_ref()).unwrap();
        assert_eq!(v.status, Status::Certified);
        let v = check_cl_monotone(sphere.ring.as_ref(), t2.ring.as_ref()).unwrap();
        assert_eq!(v.status, Status::Violated);
        let v = check_cl_monotone(t2.ring.as_ref(), t2.ring.as_ref()).unwrap();
        assert_eq!(v.status, Status::Certified);
        let g2 = catalogue::get("G2").unwrap();
        assert_eq!(
            check_cl_monotone(g2.ring.as_ref(), t2.ring.as_ref()).unwrap().status,
            Status::NotApplicable
        );
    }

    #[test]
    fn cat_transfer() {
        let so5 = catalogue::get("SO5").unwrap().ledger().unwrap();
        let mut m = catalogue::get("SO5").unwrap().as_ref().clone();
        m.known_cat = None;
        let m_ledger = m.ledger().unwrap();
        let (v, tightened) = cor_cat_transfer(&m_ledger, &so5);
        assert_eq!(v.status, Status::Certified);
        assert_eq!(tightened.cat.lower, 8);
        assert!(tightened.cat.lower >= m_ledger.cat.lower);

        // cl 3 but cat pinned at 4
        let mut n = catalogue::get("SO3").unwrap().as_ref().clone();
        n.dimension = 4;
        n.ring = Some(TruncatedPresentation::single("b1", 1, 4, 4).unwrap().into());
        n.known_cat = Some(crate::invariants::KnownValue::new(4, "test"));
        let (v, _) = cor_cat_transfer(&m_ledger, &n.ledger().unwrap());
        assert_eq!(v.status, Status::Inconclusive);

        let t3 = catalogue::get("T3").unwrap().ledger().unwrap();
        assert_eq!(cor_cat_transfer(&t3, &t3).0.status, Status::Certified);
    }

    #[test]
    fn thm_main_on_g2() {
        let g2 = catalogue::get("G2").unwrap();
        let mut x14 = SpaceRecord::bare("X14", 14);
        x14.stably_parallelizable = true;
        let v = thm_main_check(&x14, &g2);
        assert_eq!(v.status, Status::Certified);
        assert!(v.reason.contains("14 <= 2*q*cat N - 4 = 20"), "{}", v.reason);

        x14.stably_parallelizable = false;
        assert_eq!(thm_main_check(&x14, &g2).status, Status::Inconclusive);

        let s2 = catalogue::get("S2").unwrap();
        let v = thm_main_check(&s2, &s2);
        assert_eq!(v.status, Status::Inconclusive);
        assert!(v.reason.contains("2 > 2*q*cat N - 4 = 0"), "{}", v.reason);
    }

    #[test]
    fn thm_main_with_only_a_lower_bound() {
        let mut n = catalogue::get("T8").unwrap().as_ref().clone();
        n.known_cat = None;
        let v = thm_main_check(&n, &n);
        assert!(v.reason.contains("conditional"));
    }

    #[test]
    fn torus_k() {
        let s = torus_stabilization_k(14);
        assert_eq!((s.k, s.lhs, s.rhs), (18, 32, 32));
        assert_eq!(torus_stabilization_k(0).k, 4);
        for n in 0..200 {
            let s = torus_stabilization_k(n);
            assert!(s.holds());
            assert_eq!(s.lhs, s.rhs);
            // k - 1 fails
            assert!(2 * (i64::from(s.k) - 1) - 4 < i64::from(s.k) - 1 + i64::from(n));
        }
    }

    #[test]
    fn low_dim() {
        let v = low_dim_check(2, Some(2), Some(1));
        assert_eq!(v.status, Status::Certified);
        assert!(v.reason.contains("genus monotone"));
        let v = low_dim_check(3, None, None);
        assert_eq!(v.status, Status::Certified);
        assert!(v.citations.iter().any(|c| c.contains("[OR]")));
        assert_eq!(low_dim_check(4, None, None).status, Status::Certified);
        assert_eq!(low_dim_check(5, None, None).status, Status::NotApplicable);
        assert_eq!(low_dim_check(2, Some(0), Some(1)).status, Status::Violated);
    }

    #[test]
    fn morse_transfer() {
        let s3s3 = MorseData::free(vec![1, 0, 0, 2, 0, 0, 1], true).unwrap();
        let s6 = MorseData::free(vec![1, 0, 0, 0, 0, 0, 1], true).unwrap();
        let v = morse_transfer_check(Some(&s3s3), Some(&s6)).unwrap();
        assert_eq!(v.status, Status::Certified);
        assert!(v.reason.contains("crit*(M) = 4 >= crit*(N) = 2"));
        let v = morse_transfer_check(Some(&s6), Some(&s3s3)).unwrap();
        assert_eq!(v.status, Status::Violated);
        assert!(v.reason.starts_with("r_3(M) = 0 < r_3(N) = 2"));
        assert_eq!(
            morse_transfer_check(Some(&s6), Some(&s6)).unwrap().status,
            Status::Certified
        );
        let s2 = MorseData::free(vec![1, 0, 1], true).unwrap();
        assert!(matches!(
            morse_transfer_check(Some(&s2), Some(&s6)),
            Err(MapError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reports() {
        let g2 = catalogue::get("G2").unwrap();
        let mut x14 = SpaceRecord::bare("X14", 14);
        x14.stably_parallelizable = true;
        let r = full_report(&x14, &g2, None).unwrap();
        assert_eq!(r.overall, Status::Certified);

        let r = full_report(&catalogue::get("S2").unwrap(), &catalogue::get("T2").unwrap(), None).unwrap();
        assert_eq!(r.overall, Status::Violated);
        let cl = r
            .verdicts
            .iter()
            .find(|v| v.criterion == CriterionId::PropClMonotone)
            .unwrap();
        assert_eq!(cl.status, Status::Violated);

        let so5 = catalogue::get("SO5").unwrap();
        let id = identity(so5.ring.as_ref().unwrap());
        let r = full_report(&so5, &so5, Some(&id)).unwrap();
        assert_eq!(r.overall, Status::Certified);
        assert!(r.verdicts.iter().all(|v| v.status == Status::Certified
            || v.status == Status::NotApplicable
            || v.criterion == CriterionId::ThmMain));
        let order: Vec<CriterionId> = r.verdicts.iter().map(|v| v.criterion).collect();
        assert_eq!(
            order,
            vec![
                CriterionId::LowDim,
                CriterionId::PropClMonotone,
                CriterionId::CorCatTransfer,
                CriterionId::ThmMain,
                CriterionId::MorseTransfer,
                CriterionId::LemmaInjectivity,
                CriterionId::ThmTorus
            ]
        );
        assert_eq!(full_report(&so5, &so5, Some(&id)).unwrap(), r);
        assert!(full_report(&so5, &g2, None).is_err());
    }

    #[test]
    fn non_injective_hom_makes_report_violated() {
        let s2 = catalogue::get("S_2").unwrap();
        let h = hom(
            s2.ring.clone().unwrap(),
            s2.ring.clone().unwrap(),
            &[("a1", "0"), ("b1", "0"), ("a2", "0"), ("b2", "0"), ("w", "0")],
        );
        let r = full_report(&s2, &s2, Some(&h)).unwrap();
        assert_eq!(r.overall, Status::Violated);
    }

    #[test]
    fn composition_multiplies_matrices() {
        let t2: Ring = catalogue::torus_presentation(2).into();
        let s2: Ring = surface_table(2).into();
        let swap = validate_hom(&hom(t2.clone(), t2.clone(), &[("t1", "t2"), ("t2", "t1 + t2")])).unwrap();
        let h = validate_hom(&collapse()).unwrap();
        let composite = validate_hom(&swap.then(&h).unwrap()).unwrap();
        for d in 0..=2 {
            let product = h.matrices()[d].mul(&swap.matrices()[d]).unwrap();
            assert_eq!(composite.matrices()[d], product);
        }
        assert!(check_injectivity(&composite).injective);
        assert!(swap.then(&swap).is_ok());
        assert!(h.then(&swap).is_err());
        let _ = s2;
    }
}
