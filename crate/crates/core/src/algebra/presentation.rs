use std::collections::HashSet;

use super::{AlgebraError, Element, GradedRing, MultiplicationTable, MAX_EXPANSION};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
        }
    }
}

/// Exponent vector, one entry per generator, each strictly below its
/// truncation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

/// `GF(2)[b_1, ..., b_k] / (b_1^{p_1}, ..., b_k^{p_k})` with a formal top
/// degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPresentation {
    generators: Vec<GeneratorSpec>,
    truncations: Vec<u32>,
    top_degree: u32,
}

impl TruncatedPresentation {
    pub fn new(generators: Vec<GeneratorSpec>, truncations: Vec<u32>, top_degree: u32) -> Result<Self, AlgebraError> {
        if generators.len() != truncations.len() {
            return Err(AlgebraError::TruncationCount {
                generators: generators.len(),
                truncations: truncations.len(),
            });
        }
        let mut seen = HashSet::new();
        for (g, &p) in generators.iter().zip(&truncations) {
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegreeGenerator(g.name.clone()));
            }
            if p == 0 {
                return Err(AlgebraError::ZeroTruncation(g.name.clone()));
            }
        }
        Ok(Self {
            generators,
            truncations,
            top_degree,
        })
    }

    /// The ground field, as the cohomology of a point.
    pub fn point() -> Self {
        Self {
            generators: Vec::new(),
            truncations: Vec::new(),
            top_degree: 0,
        }
    }

    /// A single generator `name` of degree `degree` truncated at `p`.
    pub fn single(name: &str, degree: u32, p: u32, top_degree: u32) -> Result<Self, AlgebraError> {
        Self::new(vec![GeneratorSpec::new(name, degree)], vec![p], top_degree)
    }

    /// Exterior algebra on the given generators (all truncated at 2), with
    /// top degree the sum of their degrees.
    pub fn exterior(generators: Vec<GeneratorSpec>) -> Result<Self, AlgebraError> {
        let top = generators.iter().map(|g| g.degree).sum();
        let n = generators.len();
        Self::new(generators, vec![2; n], top)
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn truncations(&self) -> &[u32] {
        &self.truncations
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Number of normal-form monomials, `prod p_i`.
    pub fn size(&self) -> u128 {
        self.truncations.iter().map(|&p| u128::from(p)).product()
    }

    /// Degree of the product of all generators raised to `p_i - 1`.
    pub fn formal_top_degree(&self) -> u32 {
        self.generators
            .iter()
            .zip(&self.truncations)
            .map(|(g, &p)| g.degree * (p - 1))
            .sum()
    }

    pub fn warnings(&self) -> Vec<String> {
        let formal = self.formal_top_degree();
        if formal > self.top_degree {
            vec![format!(
                "monomial of degree {formal} exceeds top degree {}",
                self.top_degree
            )]
        } else {
            Vec::new()
        }
    }

    /// Reduces raw exponents modulo the truncation relations.
    pub fn normal_form(&self, raw: &[u32]) -> Result<Element<Monomial>, AlgebraError> {
        if raw.len() != self.generators.len() {
            return Err(AlgebraError::ExponentLength {
                expected: self.generators.len(),
                found: raw.len(),
            });
        }
        if raw.iter().zip(&self.truncations).all(|(&e, &p)| e < p) {
            Ok(Element::term(Monomial(raw.to_vec())))
        } else {
            Ok(Element::zero())
        }
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.generators).map(|(&e, g)| e * g.degree).sum()
    }

    /// The element represented by generator `i`.
    pub fn generator(&self, i: usize) -> Element<Monomial> {
        let mut exps = vec![0; self.generators.len()];
        exps[i] = 1;
        self.normal_form(&exps).expect("exponent vector has generator count")
    }

    /// Disjoint union of generators. Colliding names on the right are
    /// renamed with a numeric suffix; the renamings are returned.
    pub fn tensor_product(
        &self,
        other: &TruncatedPresentation,
    ) -> Result<(TruncatedPresentation, Vec<String>), AlgebraError> {
        let mut used: HashSet<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let mut generators = self.generators.clone();
        let mut renamed = Vec::new();
        for g in &other.generators {
            let name = unique_name(&g.name, &mut used);
            if name != g.name {
                renamed.push(format!("{} -> {}", g.name, name));
            }
            generators.push(GeneratorSpec::new(name, g.degree));
        }
        let mut truncations = self.truncations.clone();
        truncations.extend_from_slice(&other.truncations);
        let p = Self::new(generators, truncations, self.top_degree + other.top_degree)?;
        Ok((p, renamed))
    }

    /// Multiplication table on all normal-form monomials of degree at most
    /// the top degree. Labels are monomials written as `b1^3*b3`, the unit
    /// is `1`.
    pub fn expand_to_table(&self) -> Result<MultiplicationTable, AlgebraError> {
        let size = self.size();
        if size > MAX_EXPANSION as u128 {
            return Err(AlgebraError::TooLarge {
                size,
                limit: MAX_EXPANSION,
            });
        }
        let monomials: Vec<Monomial> = (0..=self.top_degree).flat_map(|d| self.basis_in_degree(d)).collect();
        // mixed-radix code of an exponent vector -> basis index
        let mut strides = Vec::with_capacity(self.truncations.len());
        let mut stride = 1usize;
        for &p in &self.truncations {
            strides.push(stride);
            stride *= p as usize;
        }
        let code = |m: &Monomial| m.0.iter().zip(&strides).map(|(&e, &s)| e as usize * s).sum::<usize>();
        let mut index = vec![usize::MAX; stride];
        for (i, m) in monomials.iter().enumerate() {
            index[code(m)] = i;
        }
        let degrees: Vec<u32> = monomials.iter().map(|m| self.monomial_degree(m)).collect();
        let basis: Vec<(String, u32)> = monomials
            .iter()
            .zip(&degrees)
            .map(|(m, &d)| (self.term_label(m), d))
            .collect();
        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate().skip(1) {
            let ca = code(a);
            for (j, b) in monomials.iter().enumerate().skip(i) {
                // monomials are sorted by degree
                if degrees[i] + degrees[j] > self.top_degree {
                    break;
                }
                let fits =
                    a.0.iter()
                        .zip(&b.0)
                        .zip(&self.truncations)
                        .all(|((x, y), &p)| x + y < p);
                if fits {
                    products.push((i, j, Element::term(index[ca + code(b)])));
                }
            }
        }
        MultiplicationTable::assemble(basis, self.top_degree, products)
    }

    fn enumerate(&self, i: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.generators.len() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let d = self.generators[i].degree;
        let max_e = (self.truncations[i] - 1).min(remaining / d);
        for e in 0..=max_e {
            current.push(e);
            self.enumerate(i + 1, remaining - e * d, current, out);
            current.pop();
        }
    }
}

pub(crate) fn unique_name(base: &str, used: &mut HashSet<String>) -> String {
    let mut name = base.to_string();
    let mut k = 2;
    while used.contains(&name) {
        name = format!("{base}_{k}");
        k += 1;
    }
    used.insert(name.clone());
    name
}

impl GradedRing for TruncatedPresentation {
    type Term = Monomial;

    fn top_degree(&self) -> u32 {
        self.top_degree
    }

    fn unit_term(&self) -> Monomial {
        Monomial(vec![0; self.generators.len()])
    }

    fn validate_term(&self, t: &Monomial) -> Result<(), AlgebraError> {
        if t.0.len() != self.generators.len() {
            return Err(AlgebraError::ExponentLength {
                expected: self.generators.len(),
                found: t.0.len(),
            });
        }
        if t.0.iter().zip(&self.truncations).any(|(&e, &p)| e >= p) {
            return Err(AlgebraError::NotNormalForm(t.0.clone()));
        }
        Ok(())
    }

    fn term_degree(&self, t: &Monomial) -> u32 {
        self.monomial_degree(t)
    }

    fn mul_terms(&self, a: &Monomial, b: &Monomial) -> Element<Monomial> {
        let raw: Vec<u32> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.normal_form(&raw).expect("same generator count")
    }

    fn max_degree(&self) -> u32 {
        self.formal_top_degree()
    }

    /// Lexicographic on exponent vectors.
    fn basis_in_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        self.enumerate(0, d, &mut Vec::with_capacity(self.generators.len()), &mut out);
        out
    }

    fn term_label(&self, t: &Monomial) -> String {
        let factors: Vec<String> =
            t.0.iter()
                .zip(&self.generators)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, g)| {
                    if e == 1 {
                        g.name.clone()
                    } else {
                        format!("{}^{}", g.name, e)
                    }
                })
                .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> TruncatedPresentation {
        TruncatedPresentation::new(
            vec![GeneratorSpec::new("b1", 1), GeneratorSpec::new("b3", 3)],
            vec![4, 2],
            6,
        )
        .unwrap()
    }

    fn t2() -> TruncatedPresentation {
        TruncatedPresentation::exterior(vec![GeneratorSpec::new("a", 1), GeneratorSpec::new("b", 1)]).unwrap()
    }

    #[test]
    fn normal_form_truncates() {
        let p = s4();
        assert!(p.normal_form(&[4, 0]).unwrap().is_zero());
        assert_eq!(p.normal_form(&[3, 1]).unwrap(), Element::term(Monomial(vec![3, 1])));
        assert_eq!(p.normal_form(&[0, 0]).unwrap(), p.unit());
        assert_eq!(
            p.normal_form(&[1]),
            Err(AlgebraError::ExponentLength { expected: 2, found: 1 })
        );
    }

    #[test]
    fn cross_term_vanishes_mod_two() {
        let p = s4();
        let x = p.generator(0).add(&p.generator(1));
        let sq = p.multiply(&x, &x).unwrap();
        assert_eq!(sq, Element::term(Monomial(vec![2, 0])));
        assert_eq!(p.multiply(&p.unit(), &x).unwrap(), x);
    }

    #[test]
    fn multiply_rejects_foreign_terms() {
        let p = s4();
        let bad = Element::term(Monomial(vec![0, 2]));
        assert_eq!(
            p.multiply(&bad, &p.unit()),
            Err(AlgebraError::NotNormalForm(vec![0, 2]))
        );
        let short = Element::term(Monomial(vec![1]));
        assert!(p.multiply(&p.unit(), &short).is_err());
    }

    #[test]
    fn basis_enumeration() {
        let p = s4();
        assert_eq!(p.basis_in_degree(4), vec![Monomial(vec![1, 1])]);
        assert_eq!(p.basis_in_degree(6), vec![Monomial(vec![3, 1])]);
        assert_eq!(p.basis_in_degree(0), vec![p.unit_term()]);
        assert_eq!(p.basis_in_degree(7), vec![]);
        assert_eq!(p.poincare_polynomial(), vec![1, 1, 1, 2, 1, 1, 1]);
    }

    #[test]
    fn poincare_polynomials() {
        let s3 = TruncatedPresentation::single("b1", 1, 4, 3).unwrap();
        assert_eq!(s3.poincare_polynomial(), vec![1, 1, 1, 1]);
        assert_eq!(t2().poincare_polynomial(), vec![1, 2, 1]);
        assert_eq!(TruncatedPresentation::point().poincare_polynomial(), vec![1]);
    }

    #[test]
    fn construction_errors() {
        let g = || vec![GeneratorSpec::new("x", 1), GeneratorSpec::new("x", 2)];
        assert_eq!(
            TruncatedPresentation::new(g(), vec![2, 2], 3),
            Err(AlgebraError::DuplicateGenerator("x".into()))
        );
        assert_eq!(
            TruncatedPresentation::single("y", 1, 0, 0),
            Err(AlgebraError::ZeroTruncation("y".into()))
        );
        assert_eq!(
            TruncatedPresentation::single("y", 0, 2, 0),
            Err(AlgebraError::ZeroDegreeGenerator("y".into()))
        );
    }

    #[test]
    fn zero_generator_allowed() {
        // p = 1 means the generator is zero
        let p = TruncatedPresentation::single("b", 3, 1, 0).unwrap();
        assert!(p.generator(0).is_zero());
        assert_eq!(p.poincare_polynomial(), vec![1]);
    }

    #[test]
    fn warns_when_monomials_exceed_top() {
        let p = TruncatedPresentation::single("b1", 1, 8, 3).unwrap();
        assert_eq!(p.warnings().len(), 1);
        assert!(s4().warnings().is_empty());
        let t = p.expand_to_table().unwrap();
        assert_eq!(t.basis().len(), 4);
    }

    #[test]
    fn tensor_of_circles_is_torus() {
        let t1 = TruncatedPresentation::single("t1", 1, 2, 1).unwrap();
        let (t, renamed) = t1.tensor_product(&t1).unwrap();
        assert_eq!(renamed, vec!["t1 -> t1_2".to_string()]);
        assert_eq!(t.truncations(), t2().truncations());
        assert_eq!(t.top_degree(), 2);
        let degrees: Vec<u32> = t.generators().iter().map(|g| g.degree).collect();
        assert_eq!(degrees, vec![1, 1]);
        let (same, _) = s4().tensor_product(&TruncatedPresentation::point()).unwrap();
        assert_eq!(same, s4());
    }

    #[test]
    fn expand_s3_and_t2() {
        let s3 = TruncatedPresentation::single("b1", 1, 4, 3).unwrap();
        let t = s3.expand_to_table().unwrap();
        let labels: Vec<&str> = t.basis().iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, vec!["1", "b1", "b1^2", "b1^3"]);
        assert_eq!(t.product(1, 2), Element::term(3));
        assert!(t.product(2, 2).is_zero());

        let tt = t2().expand_to_table().unwrap();
        assert_eq!(tt.basis().len(), 4);
        assert_eq!(tt.product(1, 2), Element::term(3));
        assert!(tt.product(1, 1).is_zero());

        let pt = TruncatedPresentation::point().expand_to_table().unwrap();
        assert_eq!(pt.basis().len(), 1);
    }

    #[test]
    fn expansion_agrees_with_presentation_products() {
        let p = s4();
        let t = p.expand_to_table().unwrap();
        let monos = p.basis();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                let via_p: Vec<String> = p.mul_terms(a, b).terms().map(|m| p.term_label(m)).collect();
                let via_t: Vec<String> = t.product(i, j).terms().map(|&k| t.term_label(&k)).collect();
                assert_eq!(via_p, via_t);
            }
        }
    }
}
