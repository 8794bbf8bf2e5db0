//! Cup-length, Betti sums, Morse bounds and the category bound ledger.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, GeneratorSpec, GradedRing, MultiplicationTable, Ring, TruncatedPresentation};
use crate::f2::{BitVec, EchelonBasis};

/// Closed form for pure truncations: `sum_i (p_i - 1)`.
pub fn cup_length_formula(p: &TruncatedPresentation) -> u32 {
    p.truncations().iter().map(|&t| t - 1).sum()
}

/// The mod-2 cohomology ring of `SO(n)`: generators `b_i` for odd `i < n`,
/// each truncated at the least power of two `p_i` with `i * p_i >= n`.
/// Generators with `p_i = 1` are dropped.
pub fn so_n_presentation(n: u32) -> TruncatedPresentation {
    assert!(n >= 2, "SO(n) needs n >= 2");
    let mut generators = Vec::new();
    let mut truncations = Vec::new();
    for i in (1..n).step_by(2) {
        let mut p = 1;
        while i * p < n {
            p *= 2;
        }
        if p > 1 {
            generators.push(GeneratorSpec::new(format!("b{i}"), i));
            truncations.push(p);
        }
    }
    TruncatedPresentation::new(generators, truncations, n * (n - 1) / 2).expect("generator names are distinct")
}

/// Largest `m` with `I^m != 0`, `I` the positive-degree ideal.
///
/// `I^(m+1)` is spanned by products of a basis of `I^m` with any set `Q` of
/// elements spanning `I` modulo `I^2`. `I^2` is read off the stored
/// products and `Q` picked among the basis elements; later passes only
/// multiply by `Q`. Spans are kept as per-degree echelon bases, and a degree
/// already at full dimension is skipped.
pub fn cup_length_search(t: &MultiplicationTable) -> u32 {
    let n = t.len();
    let positive = t.positive_indices();
    if positive.is_empty() {
        return 0;
    }
    let mut next: Vec<EchelonBasis> = (0..=t.top_degree()).map(|_| EchelonBasis::new(n)).collect();
    for (i, j, value) in t.nonzero_products() {
        let d = (t.degree(i) + t.degree(j)) as usize;
        if next[d].dim() == t.indices_in_degree(d as u32).len() {
            continue;
        }
        next[d]
            .insert(t.to_bitvec(value))
            .expect("ambient length is the basis size");
    }
    let mut probe = next.clone();
    let generators: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            probe[t.degree(i) as usize]
                .insert(BitVec::unit(n, i))
                .expect("ambient length is the basis size")
        })
        .collect();
    let mut power = 1;
    loop {
        let spanned: Vec<(usize, BitVec)> = next
            .iter()
            .enumerate()
            .flat_map(|(d, basis)| basis.rows().iter().map(move |r| (d, r.clone())))
            .collect();
        if spanned.is_empty() {
            return power;
        }
        power += 1;
        next = products(t, &spanned, &generators);
    }
}

/// Per-degree echelon span of `x * g` over the given vectors and basis
/// indices.
fn products(t: &MultiplicationTable, xs: &[(usize, BitVec)], gs: &[usize]) -> Vec<EchelonBasis> {
    let n = t.len();
    let top = t.top_degree() as usize;
    let full: Vec<usize> = (0..=top).map(|d| t.indices_in_degree(d as u32).len()).collect();
    let columns: Vec<Vec<Vec<usize>>> = gs
        .iter()
        .map(|&g| (0..n).map(|i| t.product(i, g).terms().copied().collect()).collect())
        .collect();
    let mut out: Vec<EchelonBasis> = (0..=top).map(|_| EchelonBasis::new(n)).collect();
    for (dx, x) in xs {
        for (&g, column) in gs.iter().zip(&columns) {
            let d = dx + t.degree(g) as usize;
            if d > top || out[d].dim() == full[d] {
                continue;
            }
            let mut prod = BitVec::zeros(n);
            for term in x.ones() {
                for &k in &column[term] {
                    prod.flip(k);
                }
            }
            out[d].insert(prod).expect("ambient length is the basis size");
        }
    }
    out
}

/// Both cup-length routes for a ring, where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CupLengths {
    pub formula: Option<u32>,
    pub search: Option<u32>,
}

impl CupLengths {
    pub fn of(ring: &Ring) -> Result<Self, AlgebraError> {
        let formula = ring
            .as_presentation()
            .filter(|p| p.formal_top_degree() <= p.top_degree())
            .map(cup_length_formula);
        let search = match ring.table() {
            Ok(t) => Some(cup_length_search(&t)),
            Err(AlgebraError::TooLarge { .. }) if formula.is_some() => None,
            Err(e) => return Err(e),
        };
        Ok(Self { formula, search })
    }

    pub fn agree(&self) -> bool {
        match (self.formula, self.search) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// The value used downstream: the search when it ran, else the formula.
    pub fn value(&self) -> u32 {
        self.search.or(self.formula).expect("at least one route always runs")
    }
}

/// Cup-length of a ring by whichever route applies.
pub fn cup_length(ring: &Ring) -> Result<u32, AlgebraError> {
    Ok(CupLengths::of(ring)?.value())
}

pub fn betti_sum(ranks: &[u64]) -> u64 {
    ranks.iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("{what} has {found} entries, expected dimension + 1 = {expected}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("r_0 must be at least 1 for a connected space")]
    Disconnected,
}

/// Integral homology data: ranks `r_l` and torsion ranks `t_l` of `H_l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseData {
    ranks: Vec<u64>,
    torsion: Vec<u64>,
    simply_connected: bool,
    dimension: u32,
}

impl MorseData {
    pub fn new(ranks: Vec<u64>, torsion: Vec<u64>, simply_connected: bool, dimension: u32) -> Result<Self, MorseError> {
        let expected = dimension as usize + 1;
        for (what, list) in [("ranks", &ranks), ("torsion", &torsion)] {
            if list.len() != expected {
                return Err(MorseError::Length {
                    what,
                    expected,
                    found: list.len(),
                });
            }
        }
        if ranks[0] == 0 {
            return Err(MorseError::Disconnected);
        }
        Ok(Self {
            ranks,
            torsion,
            simply_connected,
            dimension,
        })
    }

    /// Torsion-free data.
    pub fn free(ranks: Vec<u64>, simply_connected: bool) -> Result<Self, MorseError> {
        let n = ranks.len().saturating_sub(1);
        let torsion = vec![0; ranks.len()];
        Self::new(ranks, torsion, simply_connected, n as u32)
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn simply_connected(&self) -> bool {
        self.simply_connected
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(|&t| t == 0)
    }

    /// Künneth product of two torsion-free data sets; `None` with torsion.
    pub fn product(&self, other: &MorseData) -> Option<MorseData> {
        if !self.is_torsion_free() || !other.is_torsion_free() {
            return None;
        }
        let mut ranks = vec![0; self.ranks.len() + other.ranks.len() - 1];
        for (i, a) in self.ranks.iter().enumerate() {
            for (j, b) in other.ranks.iter().enumerate() {
                ranks[i + j] += a * b;
            }
        }
        MorseData::free(ranks, self.simply_connected && other.simply_connected).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorseBound {
    pub bound: u64,
    /// Attained by some Morse function (closed, simply connected, dim >= 6).
    pub exact: bool,
}

/// `sum_l (r_l + t_l + t_{l-1})`, with `t_{-1} = 0`.
pub fn morse_lower_bound(d: &MorseData) -> MorseBound {
    let bound = (0..d.ranks.len())
        .map(|l| d.ranks[l] + d.torsion[l] + if l > 0 { d.torsion[l - 1] } else { 0 })
        .sum();
    MorseBound {
        bound,
        exact: d.simply_connected && d.dimension >= 6,
    }
}

/// A known invariant value and where it comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownValue {
    pub value: u32,
    pub citation: String,
}

impl KnownValue {
    pub fn new(value: u32, citation: impl Into<String>) -> Self {
        Self {
            value,
            citation: citation.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lower: u64,
    pub lower_source: String,
    /// `None` is unbounded.
    pub upper: Option<u64>,
    pub upper_source: String,
}

impl Interval {
    fn new(lower: u64, lower_source: &str, upper: Option<u64>, upper_source: &str) -> Self {
        Self {
            lower,
            lower_source: lower_source.to_string(),
            upper,
            upper_source: upper_source.to_string(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }

    fn raise_lower(&mut self, value: u64, source: &str) {
        if value > self.lower {
            self.lower = value;
            self.lower_source = source.to_string();
        }
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.upper {
            Some(u) => write!(f, "[{}, {}]", self.lower, u),
            None => write!(f, "[{}, inf)", self.lower),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("known cat {known} lies outside [cup-length {cup_length}, dimension {dimension}]")]
    InconsistentKnownCat {
        known: u32,
        cup_length: u32,
        dimension: u32,
    },
    #[error("cat lower bound {value} exceeds the upper bound {upper}")]
    AboveUpper { value: u64, upper: u64 },
    #[error("ledger chain broken: {0}")]
    Chain(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Interval bounds for cat and its neighbours, each endpoint with a source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundLedger {
    pub dimension: u32,
    /// `None` when no ring data is available.
    pub cup_length: Option<u32>,
    /// Sum of integral Betti numbers, when homology data is known.
    pub betti_sum: Option<u64>,
    /// Total dimension of mod-2 cohomology, when a ring is known.
    pub mod2_betti_sum: Option<u64>,
    pub cat: Interval,
    pub toomer_e: Interval,
    pub ballcat: Interval,
    pub crit: Interval,
    pub crit_star: Interval,
}

pub const SRC_CUP_LENGTH: &str = "cup-length (cl <= e* <= cat)";
pub const SRC_DIMENSION: &str = "cat X <= dim X";
pub const SRC_BALLCAT_DIM: &str = "dimension bound (catalogue convention)";
pub const SRC_NO_RING: &str = "no ring data (trivial bound)";

/// Builds the ledger for a closed manifold of the given dimension.
pub fn cat_bounds(
    ring: Option<&Ring>,
    dimension: u32,
    known_cat: Option<&KnownValue>,
    morse: Option<&MorseData>,
) -> Result<BoundLedger, LedgerError> {
    let cup_length = ring.map(cup_length).transpose()?;
    let mod2 = ring.map(|r| r.total_dimension() as u64);
    let sb = morse.map(|m| betti_sum(m.ranks()));
    let cl = u64::from(cup_length.unwrap_or(0));
    let cl_source = if cup_length.is_some() {
        SRC_CUP_LENGTH
    } else {
        SRC_NO_RING
    };
    let dim = u64::from(dimension);

    let mut cat = Interval::new(cl, cl_source, Some(dim), SRC_DIMENSION);
    if let Some(known) = known_cat {
        if u64::from(known.value) < cl || known.value > dimension {
            return Err(LedgerError::InconsistentKnownCat {
                known: known.value,
                cup_length: cup_length.unwrap_or(0),
                dimension,
            });
        }
        let v = u64::from(known.value);
        cat = Interval::new(v, &known.citation, Some(v), &known.citation);
    }
    let toomer_e = Interval::new(cl, cl_source, cat.upper, "e* <= cat");
    let ballcat = Interval::new(cat.lower, "cat <= ballcat", Some(dim), SRC_BALLCAT_DIM);
    let crit = Interval::new(ballcat.lower + 1, "ballcat <= crit - 1", None, "");
    let mut crit_star = Interval::new(crit.lower, "crit <= crit*", None, "");
    if let Some(m) = mod2 {
        crit_star.raise_lower(m, "mod-2 Betti sum (Morse inequalities over GF(2))");
    }
    if let Some(s) = sb {
        crit_star.raise_lower(s, "SB <= crit*");
    }
    let ledger = BoundLedger {
        dimension,
        cup_length,
        betti_sum: sb,
        mod2_betti_sum: mod2,
        cat,
        toomer_e,
        ballcat,
        crit,
        crit_star,
    };
    ledger.check_chain().map_err(LedgerError::Chain)?;
    Ok(ledger)
}

impl BoundLedger {
    /// Raises the cat lower bound and propagates along the chain. Never
    /// lowers anything; returns whether the bound moved.
    pub fn tighten_cat_lower(&mut self, value: u64, source: &str) -> Result<bool, LedgerError> {
        if let Some(upper) = self.cat.upper {
            if value > upper {
                return Err(LedgerError::AboveUpper { value, upper });
            }
        }
        if value <= self.cat.lower {
            return Ok(false);
        }
        self.cat.raise_lower(value, source);
        self.ballcat.raise_lower(value, "cat <= ballcat");
        self.crit.raise_lower(self.ballcat.lower + 1, "ballcat <= crit - 1");
        self.crit_star.raise_lower(self.crit.lower, "crit <= crit*");
        self.check_chain().map_err(LedgerError::Chain)?;
        Ok(true)
    }

    /// `cl <= e*.lower <= cat.lower <= cat.upper <= dim`,
    /// `cat.lower <= ballcat.lower <= crit.lower - 1`, `SB <= crit*.lower`.
    pub fn check_chain(&self) -> Result<(), String> {
        let cl = u64::from(self.cup_length.unwrap_or(0));
        let dim = u64::from(self.dimension);
        let slots = [
            ("cat", &self.cat),
            ("e*", &self.toomer_e),
            ("ballcat", &self.ballcat),
            ("crit", &self.crit),
            ("crit*", &self.crit_star),
        ];
        for (name, slot) in slots {
            if let Some(u) = slot.upper {
                if slot.lower > u {
                    return Err(format!("{name}: lower {} > upper {u}", slot.lower));
                }
            }
        }
        let checks = [
            (cl <= self.toomer_e.lower, "cl <= e*.lower"),
            (self.toomer_e.lower <= self.cat.lower, "e*.lower <= cat.lower"),
            (self.cat.upper.is_some_and(|u| u <= dim), "cat.upper <= dim"),
            (self.cat.lower <= self.ballcat.lower, "cat.lower <= ballcat.lower"),
            (self.ballcat.lower < self.crit.lower, "ballcat.lower <= crit.lower - 1"),
            (self.crit.lower <= self.crit_star.lower, "crit.lower <= crit*.lower"),
            (
                self.betti_sum.is_none_or(|s| s <= self.crit_star.lower),
                "SB <= crit*.lower",
            ),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(what.to_string()),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(cup_length_formula(&so_n_presentation(5)), 8);
        assert_eq!(cup_length_formula(&so_n_presentation(9)), 20);
        assert_eq!(cup_length_formula(&TruncatedPresentation::point()), 0);
    }

    #[test]
    fn so_n_presentations() {
        let p = so_n_presentation(7);
        let names: Vec<&str> = p.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["b1", "b3", "b5"]);
        assert_eq!(p.truncations(), &[8, 4, 2]);
        assert_eq!(p.top_degree(), 21);
        let p3 = so_n_presentation(3);
        assert_eq!(p3.truncations(), &[4]);
        assert_eq!(p3.top_degree(), 3);
        assert_eq!(so_n_presentation(9).truncations(), &[16, 4, 2, 2]);
        // SO(2) is the circle
        let p2 = so_n_presentation(2);
        assert_eq!(p2.truncations(), &[2]);
        assert_eq!(p2.top_degree(), 1);
    }

    #[test]
    fn search_values() {
        let t3 = so_n_presentation(3).expand_to_table().unwrap();
        assert_eq!(cup_length_search(&t3), 3);
        let t4 = so_n_presentation(4).expand_to_table().unwrap();
        assert_eq!(cup_length_search(&t4), 4);
        let pt = TruncatedPresentation::point().expand_to_table().unwrap();
        assert_eq!(cup_length_search(&pt), 0);
    }

    #[test]
    fn search_on_hand_built_table() {
        let t = MultiplicationTable::new(
            vec![("1".into(), 0), ("x".into(), 1), ("y".into(), 1), ("w".into(), 2)],
            2,
            vec![(1, 2, crate::algebra::Element::term(3))],
        )
        .unwrap();
        assert_eq!(cup_length_search(&t), 2);
    }

    #[test]
    fn betti_sums() {
        assert_eq!(betti_sum(&[1, 0, 0, 0, 1]), 2);
        for g in 0..5u64 {
            assert_eq!(betti_sum(&[1, 2 * g, 1]), 2 * g + 2);
        }
        assert_eq!(betti_sum(&[1, 3, 3, 1]), 8);
    }

    #[test]
    fn morse_bounds() {
        let s3s3 = MorseData::free(vec![1, 0, 0, 2, 0, 0, 1], true).unwrap();
        assert_eq!(morse_lower_bound(&s3s3), MorseBound { bound: 4, exact: true });
        let sg = MorseData::free(vec![1, 6, 1], false).unwrap();
        assert_eq!(morse_lower_bound(&sg), MorseBound { bound: 8, exact: false });
        let tors = MorseData::new(vec![1, 0, 0, 1], vec![0, 1, 0, 0], false, 3).unwrap();
        assert_eq!(morse_lower_bound(&tors).bound, 4);
    }

    #[test]
    fn morse_data_validation() {
        assert_eq!(
            MorseData::new(vec![1, 0], vec![0], true, 1),
            Err(MorseError::Length {
                what: "torsion",
                expected: 2,
                found: 1
            })
        );
        assert_eq!(MorseData::free(vec![0, 1], true), Err(MorseError::Disconnected));
    }

    #[test]
    fn ledger_with_known_cat() {
        let so6: Ring = so_n_presentation(6).into();
        let known = KnownValue::new(9, "test");
        let l = cat_bounds(Some(&so6), 15, Some(&known), None).unwrap();
        assert_eq!((l.cat.lower, l.cat.upper), (9, Some(9)));
        assert_eq!((l.toomer_e.lower, l.toomer_e.upper), (9, Some(9)));
        assert_eq!(l.ballcat.lower, 9);
        assert_eq!(l.crit.lower, 10);
        // SO(6): 8*2*2 = 32 mod-2 classes
        assert_eq!(l.crit_star.lower, 32);
    }

    #[test]
    fn ledger_for_point() {
        let pt: Ring = TruncatedPresentation::point().into();
        let l = cat_bounds(Some(&pt), 0, None, None).unwrap();
        assert_eq!((l.cat.lower, l.cat.upper), (0, Some(0)));
        assert_eq!(l.toomer_e.lower, 0);
        assert_eq!(l.ballcat.lower, 0);
        assert_eq!(l.crit.lower, 1);
    }

    #[test]
    fn ledger_rejects_inconsistent_known_cat() {
        let so5: Ring = so_n_presentation(5).into();
        let err = cat_bounds(Some(&so5), 10, Some(&KnownValue::new(7, "bad")), None).unwrap_err();
        assert_eq!(
            err,
            LedgerError::InconsistentKnownCat {
                known: 7,
                cup_length: 8,
                dimension: 10
            }
        );
        assert!(cat_bounds(Some(&so5), 10, Some(&KnownValue::new(11, "bad")), None).is_err());
    }

    #[test]
    fn tightening_is_monotone() {
        let s3: Ring = so_n_presentation(3).into();
        let t = so_n_presentation(3);
        let mut l = cat_bounds(Some(&s3), t.top_degree(), None, None).unwrap();
        assert!(!l.tighten_cat_lower(2, "x").unwrap());
        assert_eq!(l.cat.lower, 3);
        assert!(l.tighten_cat_lower(4, "x").is_err());
        assert_eq!(l.cat.lower, 3);
    }
}
