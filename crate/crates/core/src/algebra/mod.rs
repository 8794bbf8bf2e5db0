//! Graded-commutative algebras over GF(2).
//!
//! Two representations are supported: [`TruncatedPresentation`] (polynomial
//! algebras modulo pure power relations) and [`MultiplicationTable`] (an
//! explicit basis with structure constants). [`Ring`] wraps either one and
//! caches the table expansion of a presentation.

mod expr;
mod presentation;
mod table;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

pub use expr::{Expr, ExprError, ExprMonomial};
pub use presentation::{GeneratorSpec, Monomial, TruncatedPresentation};
pub use table::{BasisElement, MultiplicationTable};

/// Upper bound on the number of monomials a presentation may expand to.
pub const MAX_EXPANSION: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have degree >= 1")]
    ZeroDegreeGenerator(String),
    #[error("truncation exponent for `{0}` must be >= 1")]
    ZeroTruncation(String),
    #[error("expected {expected} exponents, got {found}")]
    ExponentLength { expected: usize, found: usize },
    #[error("{generators} generators but {truncations} truncation exponents")]
    TruncationCount { generators: usize, truncations: usize },
    #[error("unknown generator or basis label `{0}`")]
    UnknownSymbol(String),
    #[error("basis index {0} out of range")]
    UnknownBasisIndex(usize),
    #[error("monomial exponents {0:?} are not in normal form")]
    NotNormalForm(Vec<u32>),
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("table needs exactly one degree-0 basis element, found {0}")]
    UnitCount(usize),
    #[error("basis element `{label}` has degree {degree} above top degree {top}")]
    DegreeAboveTop { label: String, degree: u32, top: u32 },
    #[error("product {left}*{right} must have degree {expected}, but term `{term}` has degree {found}")]
    ProductDegree {
        left: String,
        right: String,
        expected: u32,
        term: String,
        found: u32,
    },
    #[error("product with the unit is fixed: 1*{0} = {0}")]
    UnitProduct(String),
    #[error("products {left}*{right} and {right}*{left} disagree")]
    NonCommutative { left: String, right: String },
    #[error("product {left}*{right} given more than once")]
    DuplicateProduct { left: String, right: String },
    #[error("associativity fails on ({0}*{1})*{2}")]
    NonAssociative(String, String, String),
    #[error("presentation expands to {size} monomials, above the limit {limit}")]
    TooLarge { size: u128, limit: usize },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A sum of distinct terms with coefficient 1; the empty set is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element<T: Ord> {
    terms: BTreeSet<T>,
}

impl<T: Ord + Clone> Element<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeSet::new() }
    }

    pub fn term(t: T) -> Self {
        Self {
            terms: BTreeSet::from([t]),
        }
    }

    /// Sums the terms mod 2: repeated terms cancel in pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = T>) -> Self {
        let mut e = Self::zero();
        for t in terms {
            e.add_term(t);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &T> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.terms.contains(t)
    }

    pub fn add_term(&mut self, t: T) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add_assign(&mut self, other: &Element<T>) {
        for t in &other.terms {
            self.add_term(t.clone());
        }
    }

    pub fn add(&self, other: &Element<T>) -> Element<T> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }
}

impl<T: Ord + Clone> Default for Element<T> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Common interface of the two ring representations.
pub trait GradedRing {
    type Term: Clone + Ord + Debug;

    fn top_degree(&self) -> u32;

    fn unit_term(&self) -> Self::Term;

    /// Errors when the term does not belong to this ring.
    fn validate_term(&self, t: &Self::Term) -> Result<(), AlgebraError>;

    /// Degree of a term already known to be valid.
    fn term_degree(&self, t: &Self::Term) -> u32;

    /// Product of two valid terms.
    fn mul_terms(&self, a: &Self::Term, b: &Self::Term) -> Element<Self::Term>;

    /// Highest degree in which the ring can be nonzero.
    fn max_degree(&self) -> u32;

    fn basis_in_degree(&self, d: u32) -> Vec<Self::Term>;

    fn term_label(&self, t: &Self::Term) -> String;

    fn unit(&self) -> Element<Self::Term> {
        Element::term(self.unit_term())
    }

    fn validate(&self, e: &Element<Self::Term>) -> Result<(), AlgebraError> {
        e.terms().try_for_each(|t| self.validate_term(t))
    }

    fn multiply(&self, a: &Element<Self::Term>, b: &Element<Self::Term>) -> Result<Element<Self::Term>, AlgebraError> {
        self.validate(a)?;
        self.validate(b)?;
        let mut out = Element::zero();
        for x in a.terms() {
            for y in b.terms() {
                out.add_assign(&self.mul_terms(x, y));
            }
        }
        Ok(out)
    }

    /// Degree of a nonzero homogeneous element; `None` for zero.
    fn homogeneous_degree(&self, e: &Element<Self::Term>) -> Result<Option<u32>, AlgebraError> {
        self.validate(e)?;
        let mut degrees = e.terms().map(|t| self.term_degree(t));
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(AlgebraError::NotHomogeneous)
        }
    }

    /// Dimension of each degree `0..=top_degree`.
    fn poincare_polynomial(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|d| self.basis_in_degree(d).len()).collect()
    }

    /// All basis terms, degree by degree.
    fn basis(&self) -> Vec<Self::Term> {
        (0..=self.max_degree()).flat_map(|d| self.basis_in_degree(d)).collect()
    }

    fn format_element(&self, e: &Element<Self::Term>) -> String {
        if e.is_zero() {
            "0".to_string()
        } else {
            e.terms().map(|t| self.term_label(t)).collect::<Vec<_>>().join(" + ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingRepr {
    Presentation(TruncatedPresentation),
    Table(MultiplicationTable),
}

/// A ring in either representation, with a lazily built table form.
#[derive(Debug, Clone)]
pub struct Ring {
    repr: RingRepr,
    table: OnceLock<Arc<MultiplicationTable>>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr
    }
}

impl Eq for Ring {}

impl From<TruncatedPresentation> for Ring {
    fn from(p: TruncatedPresentation) -> Self {
        Self::new(RingRepr::Presentation(p))
    }
}

impl From<MultiplicationTable> for Ring {
    fn from(t: MultiplicationTable) -> Self {
        Self::new(RingRepr::Table(t))
    }
}

impl Ring {
    pub fn new(repr: RingRepr) -> Self {
        Self {
            repr,
            table: OnceLock::new(),
        }
    }

    pub fn repr(&self) -> &RingRepr {
        &self.repr
    }

    pub fn as_presentation(&self) -> Option<&TruncatedPresentation> {
        match &self.repr {
            RingRepr::Presentation(p) => Some(p),
            RingRepr::Table(_) => None,
        }
    }

    pub fn top_degree(&self) -> u32 {
        match &self.repr {
            RingRepr::Presentation(p) => p.top_degree(),
            RingRepr::Table(t) => t.top_degree(),
        }
    }

    /// Table form; presentations are expanded once and cached.
    pub fn table(&self) -> Result<Arc<MultiplicationTable>, AlgebraError> {
        if let Some(t) = self.table.get() {
            return Ok(Arc::clone(t));
        }
        let t = match &self.repr {
            RingRepr::Presentation(p) => p.expand_to_table()?,
            RingRepr::Table(t) => t.clone(),
        };
        Ok(Arc::clone(self.table.get_or_init(|| Arc::new(t))))
    }

    pub fn poincare_polynomial(&self) -> Vec<usize> {
        match &self.repr {
            RingRepr::Presentation(p) => p.poincare_polynomial(),
            RingRepr::Table(t) => t.poincare_polynomial(),
        }
    }

    /// Total dimension over GF(2).
    pub fn total_dimension(&self) -> usize {
        self.poincare_polynomial().iter().sum()
    }

    /// Tensor product; two presentations stay a presentation, anything else
    /// goes through tables. Returns the product and any renamings made.
    pub fn tensor_product(&self, other: &Ring) -> Result<(Ring, Vec<String>), AlgebraError> {
        match (&self.repr, &other.repr) {
            (RingRepr::Presentation(a), RingRepr::Presentation(b)) => {
                let (p, renamed) = a.tensor_product(b)?;
                Ok((p.into(), renamed))
            }
            _ => {
                let (t, renamed) = self.table()?.tensor_product(other.table()?.as_ref())?;
                Ok((t.into(), renamed))
            }
        }
    }

    /// Evaluates an expression over generator names or basis labels. The
    /// result lives in the table form of the ring; a generator truncated at
    /// exponent 1 evaluates to zero.
    pub fn eval(&self, expr: &Expr) -> Result<Element<usize>, AlgebraError> {
        let table = self.table()?;
        match &self.repr {
            RingRepr::Presentation(p) => table.eval_with(expr, |name| p.generator_index(name).map(|_| Element::zero())),
            RingRepr::Table(_) => table.eval(expr),
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match &self.repr {
            RingRepr::Presentation(p) => p.warnings(),
            RingRepr::Table(_) => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_addition_is_mod_two() {
        let a = Element::from_terms([1usize, 2]);
        let b = Element::from_terms([2usize, 3]);
        assert_eq!(a.add(&b), Element::from_terms([1, 3]));
        assert!(a.add(&a).is_zero());
        assert!(Element::from_terms([5usize, 5]).is_zero());
    }

    #[test]
    fn ring_tensor_dispatch() {
        let s3 = TruncatedPresentation::single("b1", 1, 4, 3).unwrap();
        let s3 = Ring::from(s3);
        let (pp, renamed) = s3.tensor_product(&s3).unwrap();
        assert!(pp.as_presentation().is_some());
        assert_eq!(renamed.len(), 1);
        let t = Ring::from(s3.table().unwrap().as_ref().clone());
        let (tt, _) = s3.tensor_product(&t).unwrap();
        assert!(tt.as_presentation().is_none());
        assert_eq!(tt.poincare_polynomial(), pp.poincare_polynomial());
    }
}
