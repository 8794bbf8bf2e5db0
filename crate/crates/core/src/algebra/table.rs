use std::collections::{HashMap, HashSet};

use super::presentation::unique_name;
use super::{AlgebraError, Element, Expr, GradedRing};
use crate::f2::{self, BitMatrix, BitVec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub label: String,
    pub degree: u32,
}

/// A finite graded-commutative algebra given by a basis and structure
/// constants. Products with the unit are implicit; products not listed are
/// zero.
#[derive(Debug, Clone)]
pub struct MultiplicationTable {
    basis: Vec<BasisElement>,
    top_degree: u32,
    unit: usize,
    // keyed by (i, j) with i <= j, neither the unit; zero products omitted
    products: HashMap<(usize, usize), Element<usize>>,
    by_degree: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl PartialEq for MultiplicationTable {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.top_degree == other.top_degree && self.products == other.products
    }
}

impl Eq for MultiplicationTable {}

impl MultiplicationTable {
    /// Builds and fully validates a table, associativity included.
    ///
    /// `products` lists `(i, j, x_i * x_j)` by basis index; either order of
    /// a pair may be given, and both orders must then agree.
    pub fn new(
        basis: Vec<(String, u32)>,
        top_degree: u32,
        products: Vec<(usize, usize, Element<usize>)>,
    ) -> Result<Self, AlgebraError> {
        let table = Self::assemble(basis, top_degree, products)?;
        table.check_associative()?;
        Ok(table)
    }

    /// Validation without the cubic associativity pass, for tables derived
    /// from rings already known to be associative.
    pub(crate) fn assemble(
        basis: Vec<(String, u32)>,
        top_degree: u32,
        products: Vec<(usize, usize, Element<usize>)>,
    ) -> Result<Self, AlgebraError> {
        let mut index = HashMap::with_capacity(basis.len());
        let mut by_degree = vec![Vec::new(); top_degree as usize + 1];
        let mut units = Vec::new();
        for (i, (label, degree)) in basis.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateLabel(label.clone()));
            }
            if *degree > top_degree {
                return Err(AlgebraError::DegreeAboveTop {
                    label: label.clone(),
                    degree: *degree,
                    top: top_degree,
                });
            }
            if *degree == 0 {
                units.push(i);
            }
            by_degree[*degree as usize].push(i);
        }
        if units.len() != 1 {
            return Err(AlgebraError::UnitCount(units.len()));
        }
        let unit = units[0];
        let basis: Vec<BasisElement> = basis
            .into_iter()
            .map(|(label, degree)| BasisElement { label, degree })
            .collect();

        let mut table = Self {
            basis,
            top_degree,
            unit,
            products: HashMap::new(),
            by_degree,
            index,
        };

        let n = table.basis.len();
        let mut given: HashMap<(usize, usize), (bool, Element<usize>)> = HashMap::new();
        for (i, j, value) in products {
            for &k in [i, j].iter().chain(value.terms()) {
                if k >= n {
                    return Err(AlgebraError::UnknownBasisIndex(k));
                }
            }
            if i == unit || j == unit {
                let other = if i == unit { j } else { i };
                if value != Element::term(other) {
                    return Err(AlgebraError::UnitProduct(table.basis[other].label.clone()));
                }
                continue;
            }
            let expected = table.basis[i].degree + table.basis[j].degree;
            if let Some(&k) = value.terms().find(|&&k| table.basis[k].degree != expected) {
                return Err(AlgebraError::ProductDegree {
                    left: table.basis[i].label.clone(),
                    right: table.basis[j].label.clone(),
                    expected,
                    term: table.basis[k].label.clone(),
                    found: table.basis[k].degree,
                });
            }
            let key = (i.min(j), i.max(j));
            let swapped = i > j;
            match given.get(&key) {
                Some((prev_swapped, prev)) => {
                    let (left, right) = (table.basis[key.0].label.clone(), table.basis[key.1].label.clone());
                    if *prev_swapped == swapped || i == j {
                        return Err(AlgebraError::DuplicateProduct { left, right });
                    }
                    if *prev != value {
                        return Err(AlgebraError::NonCommutative { left, right });
                    }
                }
                None => {
                    given.insert(key, (swapped, value));
                }
            }
        }
        table.products = given
            .into_iter()
            .filter(|(_, (_, v))| !v.is_zero())
            .map(|(k, (_, v))| (k, v))
            .collect();
        Ok(table)
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn indices_in_degree(&self, d: u32) -> &[usize] {
        self.by_degree.get(d as usize).map_or(&[], Vec::as_slice)
    }

    /// Indices of all basis elements of positive degree, in declaration order.
    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| i != self.unit).collect()
    }

    /// Product of two basis elements.
    pub fn product(&self, i: usize, j: usize) -> Element<usize> {
        if i == self.unit {
            return Element::term(j);
        }
        if j == self.unit {
            return Element::term(i);
        }
        self.products.get(&(i.min(j), i.max(j))).cloned().unwrap_or_default()
    }

    /// Nonzero products `(i, j, x_i * x_j)` with `i <= j`, units excluded,
    /// sorted by index.
    pub fn nonzero_products(&self) -> Vec<(usize, usize, &Element<usize>)> {
        let mut out: Vec<_> = self.products.iter().map(|(&(i, j), v)| (i, j, v)).collect();
        out.sort_by_key(|&(i, j, _)| (i, j));
        out
    }

    /// The unique basis element in the top degree, if there is exactly one.
    pub fn top_class(&self) -> Option<usize> {
        match self.indices_in_degree(self.top_degree) {
            [only] => Some(*only),
            _ => None,
        }
    }

    /// Coordinates of an element in the basis.
    pub fn to_bitvec(&self, e: &Element<usize>) -> BitVec {
        BitVec::from_ones(self.basis.len(), e.terms().copied())
    }

    pub fn from_bitvec(&self, v: &BitVec) -> Element<usize> {
        Element::from_terms(v.ones())
    }

    fn check_associative(&self) -> Result<(), AlgebraError> {
        let positive = self.positive_indices();
        let mul = |a: &Element<usize>, b: usize| -> Element<usize> {
            let mut out = Element::zero();
            for &t in a.terms() {
                out.add_assign(&self.product(t, b));
            }
            out
        };
        for (ai, &a) in positive.iter().enumerate() {
            for (bi, &b) in positive.iter().enumerate().skip(ai) {
                let ab = self.product(a, b);
                for &c in positive.iter().skip(bi) {
                    if self.degree(a) + self.degree(b) + self.degree(c) > self.top_degree {
                        continue;
                    }
                    let left = mul(&ab, c);
                    let bc = self.product(b, c);
                    let ac = self.product(a, c);
                    if left != mul(&bc, a) || left != mul(&ac, b) {
                        return Err(AlgebraError::NonAssociative(
                            self.basis[a].label.clone(),
                            self.basis[b].label.clone(),
                            self.basis[c].label.clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Evaluates a polynomial expression whose identifiers are basis labels.
    pub fn eval(&self, expr: &Expr) -> Result<Element<usize>, AlgebraError> {
        self.eval_with(expr, |_| None)
    }

    /// Like [`eval`](Self::eval), with `extra` resolving identifiers that are
    /// not basis labels.
    pub fn eval_with(
        &self,
        expr: &Expr,
        extra: impl Fn(&str) -> Option<Element<usize>>,
    ) -> Result<Element<usize>, AlgebraError> {
        let mut total = Element::zero();
        for mono in expr.monomials() {
            // a label may itself be written as a monomial, e.g. `b1^2*s`
            if let Some(idx) = self.index_of(&mono.to_string()) {
                total.add_term(idx);
                continue;
            }
            let mut acc = self.unit();
            for (name, power) in mono.factors() {
                let value = match self.index_of(name) {
                    Some(idx) => Element::term(idx),
                    None => extra(name).ok_or_else(|| AlgebraError::UnknownSymbol(name.clone()))?,
                };
                for _ in 0..*power {
                    acc = self.multiply(&acc, &value)?;
                }
            }
            total.add_assign(&acc);
        }
        Ok(total)
    }

    /// Künneth product: basis of pairs, products componentwise. Pair labels
    /// are `x*y`, with units dropped.
    pub fn tensor_product(
        &self,
        other: &MultiplicationTable,
    ) -> Result<(MultiplicationTable, Vec<String>), AlgebraError> {
        let mut used: HashSet<String> = self.basis.iter().map(|b| b.label.clone()).collect();
        let mut renamed = Vec::new();
        let right_labels: Vec<String> = other
            .basis
            .iter()
            .enumerate()
            .map(|(j, b)| {
                if j == other.unit {
                    return b.label.clone();
                }
                let name = unique_name(&b.label, &mut used);
                if name != b.label {
                    renamed.push(format!("{} -> {}", b.label, name));
                }
                name
            })
            .collect();

        let m = other.basis.len();
        let pair = |i: usize, j: usize| i * m + j;
        let mut labels_used = HashSet::new();
        let mut basis = Vec::with_capacity(self.basis.len() * m);
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in other.basis.iter().enumerate() {
                let raw = match (i == self.unit, j == other.unit) {
                    (true, true) => a.label.clone(),
                    (true, false) => right_labels[j].clone(),
                    (false, true) => a.label.clone(),
                    (false, false) => format!("{}*{}", a.label, right_labels[j]),
                };
                basis.push((unique_name(&raw, &mut labels_used), a.degree + b.degree));
            }
        }

        let full = |t: &MultiplicationTable| {
            let mut all: Vec<(usize, usize, Element<usize>)> = Vec::new();
            let n = t.basis.len();
            for i in 0..n {
                all.push((t.unit, i, Element::term(i)));
                if i != t.unit {
                    all.push((i, t.unit, Element::term(i)));
                }
            }
            for (&(i, j), v) in &t.products {
                all.push((i, j, v.clone()));
                if i != j {
                    all.push((j, i, v.clone()));
                }
            }
            all
        };
        let left_all = full(self);
        let right_all = full(other);
        let mut products = Vec::new();
        for (i1, i2, ea) in &left_all {
            for (j1, j2, eb) in &right_all {
                let (x, y) = (pair(*i1, *j1), pair(*i2, *j2));
                // each unordered pair once; units are implicit
                if x > y || x == pair(self.unit, other.unit) || y == pair(self.unit, other.unit) {
                    continue;
                }
                let value = Element::from_terms(ea.terms().flat_map(|&k| eb.terms().map(move |&l| pair(k, l))));
                if !value.is_zero() {
                    products.push((x, y, value));
                }
            }
        }
        let table = Self::assemble(basis, self.top_degree + other.top_degree, products)?;
        Ok((table, renamed))
    }

    /// Nondegeneracy of the pairing `H^d x H^{n-d} -> H^n` for every `d`,
    /// read off the coefficient of the unique top class.
    pub fn check_poincare_duality(&self) -> bool {
        let Some(top) = self.top_class() else {
            return false;
        };
        let n = self.top_degree;
        (0..=n).all(|d| {
            let left = self.indices_in_degree(d);
            let right = self.indices_in_degree(n - d);
            if left.len() != right.len() {
                return false;
            }
            let rows = left
                .iter()
                .map(|&x| {
                    BitVec::from_bits(
                        &right
                            .iter()
                            .map(|&y| self.product(x, y).contains(&top))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            let pairing = BitMatrix::from_rows(right.len(), rows).expect("rows sized to H^{n-d}");
            f2::rank(&pairing) == left.len()
        })
    }
}

impl GradedRing for MultiplicationTable {
    type Term = usize;

    fn top_degree(&self) -> u32 {
        self.top_degree
    }

    fn unit_term(&self) -> usize {
        self.unit
    }

    fn validate_term(&self, t: &usize) -> Result<(), AlgebraError> {
        if *t < self.basis.len() {
            Ok(())
        } else {
            Err(AlgebraError::UnknownBasisIndex(*t))
        }
    }

    fn term_degree(&self, t: &usize) -> u32 {
        self.basis[*t].degree
    }

    fn mul_terms(&self, a: &usize, b: &usize) -> Element<usize> {
        self.product(*a, *b)
    }

    fn max_degree(&self) -> u32 {
        self.top_degree
    }

    /// Declaration order.
    fn basis_in_degree(&self, d: u32) -> Vec<usize> {
        self.indices_in_degree(d).to_vec()
    }

    fn term_label(&self, t: &usize) -> String {
        self.basis[*t].label.clone()
    }
}
