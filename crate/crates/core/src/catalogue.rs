//! Built-in spaces with citation-annotated invariants.
//!
//! Names: `point`, `SO<n>` (n >= 2), `G2`, `T<k>` (torus), `S<n>` (sphere,
//! n >= 1), `S_<g>` (closed orientable surface of genus g), and products
//! `AxB` of any of these.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, GeneratorSpec, MultiplicationTable, Ring, TruncatedPresentation};
use crate::invariants::{cat_bounds, so_n_presentation, BoundLedger, KnownValue, LedgerError, MorseData};

pub const CITE_SO_N: &str = "Iwase-Mimura-Nishimoto [IMN]: cat SO(n) = cl(SO(n)) for n <= 9";
pub const CITE_G2: &str = "Iwase-Mimura [IM]: cat G2 = 4";
pub const CITE_TORUS: &str = "cat T^k = k";
pub const CITE_SPHERE: &str = "cat S^n = 1";
pub const CITE_SURFACE_0: &str = "cat S_g = 1 for g = 0";
pub const CITE_SURFACE_1: &str = "cat S_g = 2 for g = 1, via cat T^2 = 2";
pub const CITE_SURFACE_G: &str = "cat S_g = 2 for g >= 2";
pub const CITE_POINT: &str = "cat(point) = 0";

/// A published value crit* S_g = 2g is inconsistent with SB(S_g) = 2g + 2 <= crit*;
/// the ledger carries the Morse bound instead.
pub const SURFACE_CRIT_STAR_NOTE: &str =
    "published crit*(S_g) = 2g contradicts SB(S_g) = 2g+2 <= crit*(S_g); suspected erratum, not used";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogueError {
    #[error("unknown space `{0}`")]
    Unknown(String),
    #[error("invalid parameter in `{0}`")]
    BadParameter(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Everything known about a closed manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceRecord {
    pub name: String,
    pub dimension: u32,
    /// The space is `connectivity`-connected; 0 means merely connected.
    pub connectivity: u32,
    pub orientable: bool,
    pub stably_parallelizable: bool,
    /// Mod-2 cohomology ring; `None` for flags-only records.
    pub ring: Option<Ring>,
    pub morse: Option<MorseData>,
    pub known_cat: Option<KnownValue>,
    pub genus: Option<u32>,
    pub notes: Vec<String>,
}

impl SpaceRecord {
    /// A record with no ring and default flags.
    pub fn bare(name: impl Into<String>, dimension: u32) -> Self {
        Self {
            name: name.into(),
            dimension,
            connectivity: 0,
            orientable: true,
            stably_parallelizable: false,
            ring: None,
            morse: None,
            known_cat: None,
            genus: None,
            notes: Vec::new(),
        }
    }

    pub fn ledger(&self) -> Result<BoundLedger, LedgerError> {
        cat_bounds(
            self.ring.as_ref(),
            self.dimension,
            self.known_cat.as_ref(),
            self.morse.as_ref(),
        )
    }

    /// Ring top degree matches the dimension and a known cat is within
    /// `[cl, dim]`.
    pub fn validate(&self) -> Result<(), String> {
        if let Some(ring) = &self.ring {
            if ring.top_degree() != self.dimension {
                return Err(format!(
                    "ring top degree {} differs from dimension {}",
                    ring.top_degree(),
                    self.dimension
                ));
            }
        }
        if let Some(m) = &self.morse {
            if m.dimension() != self.dimension {
                return Err(format!(
                    "homology data has dimension {}, space has {}",
                    m.dimension(),
                    self.dimension
                ));
            }
        }
        self.ledger().map(|_| ()).map_err(|e| e.to_string())
    }

    /// Cartesian product. cat of the product is left unknown.
    pub fn product(&self, other: &SpaceRecord) -> Result<SpaceRecord, AlgebraError> {
        let ring = match (&self.ring, &other.ring) {
            (Some(a), Some(b)) => Some(a.tensor_product(b)?.0),
            _ => None,
        };
        let morse = match (&self.morse, &other.morse) {
            (Some(a), Some(b)) => a.product(b),
            _ => None,
        };
        Ok(SpaceRecord {
            name: format!("{}x{}", self.name, other.name),
            dimension: self.dimension + other.dimension,
            connectivity: self.connectivity.min(other.connectivity),
            orientable: self.orientable && other.orientable,
            stably_parallelizable: self.stably_parallelizable && other.stably_parallelizable,
            ring,
            morse,
            known_cat: None,
            genus: None,
            notes: Vec::new(),
        })
    }
}

/// `H^*(S_g; Z/2)`: basis `1; a1..ag, b1..bg; w` with `a_i * b_i = w` and
/// all other products of degree-1 classes zero.
pub fn surface_table(g: u32) -> MultiplicationTable {
    let g = g as usize;
    let mut basis = vec![("1".to_string(), 0)];
    basis.extend((1..=g).map(|i| (format!("a{i}"), 1)));
    basis.extend((1..=g).map(|i| (format!("b{i}"), 1)));
    basis.push(("w".to_string(), 2));
    let top = 2 * g + 1;
    let products = (1..=g).map(|i| (i, g + i, Element::term(top))).collect();
    MultiplicationTable::new(basis, 2, products).expect("surface table is well formed")
}

pub fn torus_presentation(k: u32) -> TruncatedPresentation {
    TruncatedPresentation::exterior((1..=k).map(|i| GeneratorSpec::new(format!("t{i}"), 1)).collect())
        .expect("distinct generator names")
}

pub fn sphere_presentation(n: u32) -> TruncatedPresentation {
    TruncatedPresentation::single("s", n, 2, n).expect("n >= 1")
}

fn so_n_record(n: u32) -> SpaceRecord {
    let mut r = SpaceRecord::bare(format!("SO{n}"), n * (n - 1) / 2);
    r.stably_parallelizable = true;
    r.ring = Some(so_n_presentation(n).into());
    let known = [3, 4, 8, 9, 11, 12, 20];
    if (3..=9).contains(&n) {
        r.known_cat = Some(KnownValue::new(known[n as usize - 3], CITE_SO_N));
    }
    if n == 2 {
        r.known_cat = Some(KnownValue::new(1, CITE_SPHERE));
    }
    r
}

fn g2_record() -> SpaceRecord {
    let mut r = SpaceRecord::bare("G2", 14);
    r.connectivity = 2;
    r.stably_parallelizable = true;
    r.known_cat = Some(KnownValue::new(4, CITE_G2));
    r.notes
        .push("cohomology ring not recorded; ring-based checks do not apply".into());
    r
}

fn torus_record(k: u32) -> SpaceRecord {
    let mut r = SpaceRecord::bare(format!("T{k}"), k);
    r.stably_parallelizable = true;
    r.ring = Some(torus_presentation(k).into());
    let ranks = (0..=k).map(|i| binomial(k, i)).collect();
    r.morse = Some(MorseData::free(ranks, k == 0).expect("ranks start at 1"));
    r.known_cat = Some(KnownValue::new(k, CITE_TORUS));
    r
}

fn sphere_record(n: u32) -> SpaceRecord {
    let mut r = SpaceRecord::bare(format!("S{n}"), n);
    r.connectivity = n - 1;
    r.stably_parallelizable = true;
    r.ring = Some(sphere_presentation(n).into());
    let mut ranks = vec![0; n as usize + 1];
    ranks[0] = 1;
    ranks[n as usize] = 1;
    r.morse = Some(MorseData::free(ranks, n >= 2).expect("ranks start at 1"));
    r.known_cat = Some(KnownValue::new(1, CITE_SPHERE));
    r
}

fn surface_record(g: u32) -> SpaceRecord {
    let mut r = SpaceRecord::bare(format!("S_{g}"), 2);
    r.connectivity = if g == 0 { 1 } else { 0 };
    r.stably_parallelizable = true;
    r.ring = Some(surface_table(g).into());
    r.morse = Some(MorseData::free(vec![1, 2 * u64::from(g), 1], g == 0).expect("ranks start at 1"));
    r.genus = Some(g);
    let (cat, cite) = match g {
        0 => (1, CITE_SURFACE_0),
        1 => (2, CITE_SURFACE_1),
        _ => (2, CITE_SURFACE_G),
    };
    r.known_cat = Some(KnownValue::new(cat, cite));
    if g >= 1 {
        r.notes.push(SURFACE_CRIT_STAR_NOTE.to_string());
    }
    r
}

fn point_record() -> SpaceRecord {
    let mut r = SpaceRecord::bare("point", 0);
    r.stably_parallelizable = true;
    r.ring = Some(TruncatedPresentation::point().into());
    r.morse = Some(MorseData::free(vec![1], true).expect("rank 1"));
    r.known_cat = Some(KnownValue::new(0, CITE_POINT));
    r
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

fn parse_param(name: &str, prefix: &str) -> Option<Result<u32, CatalogueError>> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some(rest.parse().map_err(|_| CatalogueError::BadParameter(name.to_string())))
}

fn build(name: &str) -> Result<SpaceRecord, CatalogueError> {
    let bad = || CatalogueError::BadParameter(name.to_string());
    if name == "point" {
        return Ok(point_record());
    }
    if name == "G2" {
        return Ok(g2_record());
    }
    if let Some(n) = parse_param(name, "SO") {
        let n = n?;
        return if n >= 2 { Ok(so_n_record(n)) } else { Err(bad()) };
    }
    if let Some(g) = parse_param(name, "S_") {
        return Ok(surface_record(g?));
    }
    if let Some(n) = parse_param(name, "S") {
        let n = n?;
        return if n >= 1 { Ok(sphere_record(n)) } else { Err(bad()) };
    }
    if let Some(k) = parse_param(name, "T") {
        return Ok(torus_record(k?));
    }
    Err(CatalogueError::Unknown(name.to_string()))
}

/// Lazily populated, shared record cache.
#[derive(Debug, Default)]
pub struct Catalogue {
    cache: Mutex<HashMap<String, Arc<SpaceRecord>>>,
}

impl Catalogue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static Catalogue {
        static GLOBAL: OnceLock<Catalogue> = OnceLock::new();
        GLOBAL.get_or_init(Catalogue::new)
    }

    pub fn get(&self, name: &str) -> Result<Arc<SpaceRecord>, CatalogueError> {
        if let Some(r) = self.cache.lock().expect("cache lock").get(name) {
            return Ok(Arc::clone(r));
        }
        let record = if name.contains('x') {
            let mut parts = name.split('x');
            let first = parts.next().unwrap_or_default();
            let mut acc = (*self.get(first)?).clone();
            for part in parts {
                acc = acc.product(self.get(part)?.as_ref())?;
            }
            acc
        } else {
            build(name)?
        };
        let record = Arc::new(record);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(name.to_string(), Arc::clone(&record));
        Ok(record)
    }

    /// Names of the standard entries; parametric families accept other
    /// parameters too.
    pub fn list() -> Vec<String> {
        let mut names = vec!["point".to_string()];
        names.extend((3..=9).map(|n| format!("SO{n}")));
        names.push("G2".into());
        names.extend((1..=8).map(|k| format!("T{k}")));
        names.extend((1..=10).map(|n| format!("S{n}")));
        names.extend((0..=4).map(|g| format!("S_{g}")));
        names
    }
}

pub fn get(name: &str) -> Result<Arc<SpaceRecord>, CatalogueError> {
    Catalogue::global().get(name)
}
