//! Finite exterior differential graded algebras over F_p with a cyclic
//! group action.
//!
//! Generators all sit in cohomological degree 1 and are indexed `0..g`
//! with `g ≤ 64`; a basis monomial is the set of its generators, encoded as
//! a `u64` bit set and read in ascending index order. Reordering a product
//! into that canonical order costs the Koszul sign `(−1)^(transpositions)`.
//! The differential is the degree-+1 derivation
//! `d(uv) = d(u)v + (−1)^{|u|} u d(v)` determined by its values on
//! generators.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::linalg::{self, Echelon};

/// A basis monomial: bit `i` set means generator `i` is a factor.
pub type Mask = u64;

/// Hard cap on the number of generators (one bit each in a [`Mask`]).
pub const MAX_GENERATORS: usize = 64;

/// Multidegree of a generator, monomial or cohomology class.
///
/// `internal` is always stored reduced modulo the owning presentation's
/// internal modulus; the other components are plain integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiDegree {
    pub coh: u32,
    pub rav: u64,
    pub internal: u64,
    pub arith: u32,
}

impl MultiDegree {
    pub fn new(coh: u32, rav: u64, internal: u64, arith: u32) -> Self {
        Self { coh, rav, internal, arith }
    }

    /// Degree of a product, with the internal component reduced mod `modulus`.
    pub fn add(self, other: Self, modulus: u64) -> Self {
        Self {
            coh: self.coh + other.coh,
            rav: self.rav + other.rav,
            internal: ((self.internal as u128 + other.internal as u128) % modulus as u128) as u64,
            arith: self.arith + other.arith,
        }
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(coh {}, rav {}, int {}, arith {})", self.coh, self.rav, self.internal, self.arith)
    }
}

/// Image of a generator under σ: `±generator[index]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedGenerator {
    pub index: usize,
    pub negate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: MultiDegree,
    /// `None` means σ fixes the generator.
    pub action_image: Option<SignedGenerator>,
}

/// Parity of the Koszul sign for the product of disjoint monomials `a·b`:
/// the number of pairs `x ∈ a`, `y ∈ b` with `x > y`.
#[inline]
pub fn merge_sign(a: Mask, b: Mask) -> bool {
    let mut parity = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        parity ^= ((a >> y) >> 1).count_ones() & 1;
        rest &= rest - 1;
    }
    parity == 1
}

/// Product of two monomials: `None` if they share a generator, otherwise the
/// canonical monomial and whether the Koszul sign is negative.
#[inline]
pub fn multiply_monomials(a: Mask, b: Mask) -> Option<(Mask, bool)> {
    if a & b != 0 {
        None
    } else {
        Some((a | b, merge_sign(a, b)))
    }
}

/// Iterates the generator indices of a monomial in ascending order.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// An F_p-linear combination of canonical monomials; zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<Mask, FieldElement>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn generator(i: usize) -> Self {
        Self::monomial(1 << i, 1)
    }

    pub fn monomial(m: Mask, coeff: FieldElement) -> Self {
        let mut e = Self::zero();
        if coeff != 0 {
            e.terms.insert(m, coeff);
        }
        e
    }

    pub fn from_terms(field: PrimeField, terms: impl IntoIterator<Item = (Mask, FieldElement)>) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(field, m, c);
        }
        e
    }

    pub fn add_term(&mut self, field: PrimeField, m: Mask, c: FieldElement) {
        let c = field.from_u64(c as u64);
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m).or_insert(0);
        *entry = field.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, FieldElement)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, m: Mask) -> FieldElement {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of all generators occurring in any term.
    pub fn support(&self) -> Mask {
        self.terms.keys().fold(0, |acc, &m| acc | m)
    }

    pub fn scale(&self, field: PrimeField, c: FieldElement) -> Self {
        Self::from_terms(field, self.terms().map(|(m, x)| (m, field.mul(c, x))))
    }

    pub fn add(&self, field: PrimeField, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(field, m, c);
        }
        out
    }

    pub fn sub(&self, field: PrimeField, other: &Self) -> Self {
        self.add(field, &other.scale(field, field.neg(1)))
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, field: PrimeField, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                if let Some((m, neg)) = multiply_monomials(a, b) {
                    let c = field.mul(x, y);
                    out.add_term(field, m, if neg { field.neg(c) } else { c });
                }
            }
        }
        out
    }

    /// Terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(Mask) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(&m, _)| keep(m)).map(|(&m, &c)| (m, c)).collect() }
    }
}

/// One problem found by [`DgaPresentation::check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    /// A term of `d(g)` differs from `g` in the named degree component.
    Inhomogeneous {
        generator: String,
        component: String,
    },
    DSquaredNonzero {
        generator: String,
    },
    NotEquivariant {
        generator: String,
    },
    /// σ^n(g) ≠ +g for the declared order n.
    BadActionOrder {
        generator: String,
    },
    /// σ(g) has different cohomological, Ravenel or arithmetic degree.
    ActionDegree {
        generator: String,
    },
}

/// Outcome of validating a presentation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    /// Some differential term has strictly smaller Ravenel degree than its
    /// generator. The Ravenel degree is then only an increasing filtration
    /// preserved by d, not a grading; cohomology reports it as the
    /// filtration level of each class.
    pub ravenel_is_filtration: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// A finite exterior DGA on degree-1 generators with a cyclic action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgaPresentation {
    field: PrimeField,
    internal_modulus: u64,
    action_order: u32,
    generators: Vec<GeneratorSpec>,
    differentials: Vec<Element>,
    // Flattened copy of `differentials` for the hot path.
    d_terms: Vec<Vec<(Mask, FieldElement)>>,
}

impl DgaPresentation {
    /// Builds a presentation after structural validation: generator count,
    /// unique non-empty names, coh = 1, reduced internal degrees and index
    /// ranges. Algebraic invariants are checked separately by [`check`].
    ///
    /// [`check`]: DgaPresentation::check
    pub fn new(
        field: PrimeField,
        internal_modulus: u64,
        action_order: u32,
        generators: Vec<GeneratorSpec>,
        differentials: Vec<Element>,
    ) -> Result<Self> {
        let g = generators.len();
        if g > MAX_GENERATORS {
            return Err(Error::InvalidPresentation(format!(
                "{g} generators exceed the supported maximum of {MAX_GENERATORS}"
            )));
        }
        if internal_modulus == 0 {
            return Err(Error::InvalidPresentation("internal modulus must be positive".into()));
        }
        if action_order == 0 {
            return Err(Error::InvalidPresentation("action order must be positive".into()));
        }
        if differentials.len() != g {
            return Err(Error::InvalidPresentation(format!(
                "{} differentials for {g} generators",
                differentials.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for spec in &generators {
            if spec.name.is_empty() || !seen.insert(spec.name.as_str()) {
                return Err(Error::InvalidPresentation(format!("generator name {:?} is empty or repeated", spec.name)));
            }
            if spec.degree.coh != 1 {
                return Err(Error::InvalidPresentation(format!(
                    "generator {} has cohomological degree {}, expected 1",
                    spec.name, spec.degree.coh
                )));
            }
            if spec.degree.internal >= internal_modulus {
                return Err(Error::InvalidPresentation(format!(
                    "generator {} has unreduced internal degree {}",
                    spec.name, spec.degree.internal
                )));
            }
            if let Some(img) = spec.action_image {
                if img.index >= g {
                    return Err(Error::InvalidPresentation(format!("action image of {} is out of range", spec.name)));
                }
            }
        }
        let full: Mask = if g == 64 { u64::MAX } else { (1u64 << g) - 1 };
        for e in &differentials {
            if e.support() & !full != 0 {
                return Err(Error::InvalidPresentation("differential mentions unknown generator".into()));
            }
        }
        let d_terms = differentials.iter().map(|e| e.terms().collect()).collect();
        Ok(Self { field, internal_modulus, action_order, generators, differentials, d_terms })
    }

    /// The algebra with no generators: H = F_p in degree 0.
    pub fn unit(field: PrimeField) -> Self {
        Self::new(field, 1, 1, Vec::new(), Vec::new()).expect("unit presentation is valid")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prime(&self) -> u32 {
        self.field.prime()
    }

    pub fn internal_modulus(&self) -> u64 {
        self.internal_modulus
    }

    pub fn action_order(&self) -> u32 {
        self.action_order
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// `d` of generator `i`.
    pub fn generator_differential(&self, i: usize) -> &Element {
        &self.differentials[i]
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Mask with every generator set.
    pub fn full_mask(&self) -> Mask {
        let g = self.generators.len();
        if g == 64 {
            u64::MAX
        } else {
            (1u64 << g) - 1
        }
    }

    pub fn degree_of(&self, m: Mask) -> MultiDegree {
        bits(m).fold(MultiDegree::default(), |acc, i| acc.add(self.generators[i].degree, self.internal_modulus))
    }

    /// The element given by a single named monomial, e.g. `["h(1,1)", "h(1,0)"]`
    /// (which equals `−h(1,0)h(1,1)`).
    pub fn monomial_by_names(&self, names: &[&str]) -> Result<Element> {
        let mut e = Element::one();
        for n in names {
            let i = self.generator_index(n).ok_or_else(|| Error::InvalidRequest(format!("unknown generator {n}")))?;
            e = e.mul(self.field, &Element::generator(i));
        }
        Ok(e)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        a.mul(self.field, b)
    }

    /// `d` of a basis monomial, as canonical `(monomial, coefficient)` pairs
    /// sorted by monomial with duplicates combined.
    pub fn differential_of_monomial(&self, m: Mask) -> Vec<(Mask, FieldElement)> {
        let f = self.field;
        let mut out: Vec<(Mask, FieldElement)> = Vec::new();
        for (pos, g) in bits(m).enumerate() {
            let terms = &self.d_terms[g];
            if terms.is_empty() {
                continue;
            }
            let rest = m & !(1u64 << g);
            let below = rest & ((1u64 << g) - 1);
            let above = rest & !below;
            for &(q, c) in terms {
                if q & rest != 0 {
                    continue;
                }
                // g sits after `pos` degree-1 factors, hence (−1)^pos; then
                // the quadratic image q is merged into place.
                let mut neg = pos % 2 == 1;
                neg ^= merge_sign(below, q);
                neg ^= merge_sign(below | q, above);
                out.push((rest | q, if neg { f.neg(c) } else { c }));
            }
        }
        combine(f, out)
    }

    pub fn differential(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            for (t, y) in self.differential_of_monomial(m) {
                out.add_term(self.field, t, self.field.mul(c, y));
            }
        }
        out
    }

    /// σ on a basis monomial, as a signed monomial.
    pub fn action_on_monomial(&self, m: Mask) -> (Mask, bool) {
        let mut img: Mask = 0;
        let mut neg = false;
        for i in bits(m) {
            let (j, flip) = match self.generators[i].action_image {
                Some(s) => (s.index, s.negate),
                None => (i, false),
            };
            let (next, s) = multiply_monomials(img, 1 << j)
                .expect("σ permutes generators, so images of distinct generators are distinct");
            img = next;
            neg ^= s ^ flip;
        }
        (img, neg)
    }

    /// Multiplicative extension of σ.
    pub fn apply_action(&self, x: &Element) -> Element {
        let f = self.field;
        Element::from_terms(
            f,
            x.terms().map(|(m, c)| {
                let (img, neg) = self.action_on_monomial(m);
                (img, if neg { f.neg(c) } else { c })
            }),
        )
    }

    /// Checks d² = 0, homogeneity of d, σ-equivariance, the declared action
    /// order, and that σ preserves every degree except the internal one.
    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut injective = true;
        let mut images = 0u64;
        for g in &self.generators {
            if let Some(s) = g.action_image {
                if images & (1 << s.index) != 0 {
                    injective = false;
                }
                images |= 1 << s.index;
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            let gd = g.degree;
            let name = &g.name;
            let mut flag = |component: &str| {
                let issue = Issue::Inhomogeneous { generator: name.clone(), component: component.into() };
                if !report.issues.contains(&issue) {
                    report.issues.push(issue);
                }
            };
            for (m, _) in self.differentials[i].terms() {
                let td = self.degree_of(m);
                if td.coh != 2 {
                    flag("coh");
                }
                if td.internal != gd.internal {
                    flag("internal");
                }
                if td.arith != gd.arith {
                    flag("arith");
                }
                if td.rav > gd.rav {
                    flag("rav");
                } else if td.rav < gd.rav {
                    report.ravenel_is_filtration = true;
                }
            }
            if !self.differential(&self.differentials[i]).is_zero() {
                report.issues.push(Issue::DSquaredNonzero { generator: name.clone() });
            }
            if !injective {
                continue;
            }
            let gen = Element::generator(i);
            let sigma_g = self.apply_action(&gen);
            if self.apply_action(&self.differentials[i]) != self.differential(&sigma_g) {
                report.issues.push(Issue::NotEquivariant { generator: name.clone() });
            }
            let (img, _) = self.action_on_monomial(1 << i);
            let id = self.degree_of(img);
            if (id.coh, id.rav, id.arith) != (gd.coh, gd.rav, gd.arith) {
                report.issues.push(Issue::ActionDegree { generator: name.clone() });
            }
            let mut x = gen.clone();
            for _ in 0..self.action_order {
                x = self.apply_action(&x);
            }
            if x != gen {
                report.issues.push(Issue::BadActionOrder { generator: name.clone() });
            }
        }
        if !injective {
            report.issues.push(Issue::BadActionOrder { generator: "σ is not a permutation".into() });
        }
        report
    }

    /// Ensures [`check`](Self::check) passes.
    pub fn validate(&self) -> Result<ValidationReport> {
        let report = self.check();
        if report.is_valid() {
            Ok(report)
        } else {
            Err(Error::InvalidPresentation(format!("{:?}", report.issues)))
        }
    }

    /// Human-readable element, e.g. `h(2,0) - 2 h(1,0)h(1,1)`.
    pub fn format_element(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in x.terms().enumerate() {
            let c = self.field.to_signed(c);
            let (neg, mag) = (c < 0, c.unsigned_abs());
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: String = bits(m).map(|i| self.generators[i].name.as_str()).collect();
            match (mag, mono.is_empty()) {
                (1, true) => s.push('1'),
                (1, false) => s.push_str(&mono),
                (_, true) => s.push_str(&mag.to_string()),
                (_, false) => s.push_str(&format!("{mag} {mono}")),
            }
        }
        s
    }

    /// Re-expresses the algebra in a new basis of degree-1 generators.
    ///
    /// Each new generator is a linear combination of the old ones; together
    /// they must form a basis. New degrees are read off the old terms, with
    /// internal degrees reduced mod `internal_modulus` (which must divide the
    /// current modulus) and arithmetic degree taken from the request.
    pub fn rebase(&self, new_gens: &[NewGenerator], internal_modulus: u64) -> Result<Rebased> {
        let f = self.field;
        let g = self.generators.len();
        if new_gens.len() != g {
            return Err(Error::InvalidRequest(format!("{} new generators for an algebra on {g}", new_gens.len())));
        }
        if internal_modulus == 0 || !self.internal_modulus.is_multiple_of(internal_modulus) {
            return Err(Error::InvalidRequest(format!(
                "internal modulus {internal_modulus} does not divide {}",
                self.internal_modulus
            )));
        }
        let mut t = vec![vec![0; g]; g];
        let mut degrees = Vec::with_capacity(g);
        for (j, ng) in new_gens.iter().enumerate() {
            let mut deg: Option<MultiDegree> = None;
            for (m, c) in ng.expr.terms() {
                if m.count_ones() != 1 {
                    return Err(Error::Unsupported(format!("new generator {} is not linear", ng.name)));
                }
                let k = m.trailing_zeros() as usize;
                t[j][k] = c;
                let mut d = self.generators[k].degree;
                d.internal %= internal_modulus;
                d.arith = ng.arith;
                match deg {
                    None => deg = Some(d),
                    Some(prev) if prev != d => {
                        return Err(Error::InvalidFiltration(format!("{} is not homogeneous: {prev} vs {d}", ng.name)))
                    }
                    _ => {}
                }
            }
            degrees.push(deg.ok_or_else(|| Error::InvalidRequest(format!("new generator {} is zero", ng.name)))?);
        }
        let t_inv = linalg::invert_dense(f, &t)
            .ok_or_else(|| Error::InvalidRequest("new generators are not a basis".into()))?;
        // Old generator k in the new basis.
        let old_in_new: Vec<Element> =
            (0..g).map(|k| Element::from_terms(f, (0..g).map(|j| (1u64 << j, t_inv[k][j])))).collect();
        let transform = |x: &Element| -> Element {
            let mut out = Element::zero();
            for (m, c) in x.terms() {
                let mut prod = Element::monomial(0, c);
                for k in bits(m) {
                    prod = prod.mul(f, &old_in_new[k]);
                }
                out = out.add(f, &prod);
            }
            out
        };
        let mut differentials = Vec::with_capacity(g);
        let mut action = Vec::with_capacity(g);
        for ng in new_gens {
            differentials.push(transform(&self.differential(&ng.expr)));
            action.push(transform(&self.apply_action(&ng.expr)));
        }
        Ok(Rebased {
            field: f,
            internal_modulus,
            action_order: self.action_order,
            names: new_gens.iter().map(|n| n.name.clone()).collect(),
            degrees,
            differentials,
            action,
        })
    }

    /// Coarsest internal modulus (dividing the current one) in which every
    /// element of `ideal` is homogeneous.
    pub fn coarse_ideal_modulus(&self, ideal: &[Element]) -> u64 {
        let mut modulus = self.internal_modulus;
        for e in ideal {
            let degs: Vec<u64> = e.terms().map(|(m, _)| self.degree_of(m).internal).collect();
            for w in degs.windows(2) {
                modulus = gcd(modulus, w[0].abs_diff(w[1]));
            }
        }
        modulus
    }

    /// Associated graded algebra for the filtration by powers of the ideal
    /// generated by linear elements, using the coarsest internal grading in
    /// which the generators are homogeneous.
    pub fn associated_graded(&self, ideal: &[Element]) -> Result<DgaPresentation> {
        self.associated_graded_mod(ideal, self.coarse_ideal_modulus(ideal))
    }

    /// As [`associated_graded`](Self::associated_graded), with the internal
    /// modulus of the result given explicitly.
    ///
    /// The new generators are those of
    /// [`ideal_adapted_basis`](Self::ideal_adapted_basis), with the ideal
    /// generators in arithmetic degree 1.
    pub fn associated_graded_mod(&self, ideal: &[Element], internal_modulus: u64) -> Result<DgaPresentation> {
        let (rebased, weights) = self.ideal_adapted_basis(ideal, internal_modulus, 1)?;
        rebased.leading_part(&weights)
    }

    /// A basis adapted to the ideal generated by linear elements: the
    /// non-pivot old generators (arithmetic degree 0, original names and
    /// order) followed by the independent ideal generators (arithmetic
    /// degree `ideal_arith`, in input order, named `[…]`). Pivots are taken
    /// at the highest generator index. Also returns the ideal-adic weight
    /// of each new generator.
    pub fn ideal_adapted_basis(
        &self,
        ideal: &[Element],
        internal_modulus: u64,
        ideal_arith: u32,
    ) -> Result<(Rebased, Vec<u32>)> {
        let f = self.field;
        let g = self.generators.len();
        for e in ideal {
            if e.terms().any(|(m, _)| m.count_ones() != 1) {
                return Err(Error::Unsupported("ideal generators must be linear".into()));
            }
        }
        // Echelon on reversed coordinates so that pivots land on the highest
        // original index.
        let mut ech = Echelon::new(f, g);
        let mut kept = Vec::new();
        for e in ideal {
            let mut v: Vec<(usize, FieldElement)> =
                e.terms().map(|(m, c)| (g - 1 - m.trailing_zeros() as usize, c)).collect();
            v.sort_by_key(|&(c, _)| c);
            if ech.insert(&v)?.is_some() {
                kept.push(e.clone());
            }
        }
        let pivot_mask: Mask = ech.pivots().iter().fold(0, |acc, &c| acc | 1u64 << (g - 1 - c));
        let mut new_gens: Vec<NewGenerator> = (0..g)
            .filter(|&k| pivot_mask & (1 << k) == 0)
            .map(|k| NewGenerator { name: self.generators[k].name.clone(), expr: Element::generator(k), arith: 0 })
            .collect();
        let complement = new_gens.len();
        for e in &kept {
            new_gens.push(NewGenerator {
                name: format!("[{}]", self.format_element(e)),
                expr: e.clone(),
                arith: ideal_arith,
            });
        }
        let rebased = self.rebase(&new_gens, internal_modulus)?;
        let weights: Vec<u32> = (0..g).map(|j| u32::from(j >= complement)).collect();
        Ok((rebased, weights))
    }

    /// Copy with every arithmetic degree replaced.
    pub fn with_arith(&self, arith: &[u32]) -> Result<DgaPresentation> {
        let mut gens = self.generators.clone();
        for (g, &a) in gens.iter_mut().zip(arith) {
            g.degree.arith = a;
        }
        Self::new(self.field, self.internal_modulus, self.action_order, gens, self.differentials.clone())
    }

    /// Copy with every Ravenel degree replaced.
    pub fn with_rav(&self, rav: &[u64]) -> Result<DgaPresentation> {
        let mut gens = self.generators.clone();
        for (g, &r) in gens.iter_mut().zip(rav) {
            g.degree.rav = r;
        }
        Self::new(self.field, self.internal_modulus, self.action_order, gens, self.differentials.clone())
    }

    /// Copy with the group action removed.
    pub fn without_action(&self) -> DgaPresentation {
        let mut gens = self.generators.clone();
        for g in &mut gens {
            g.action_image = None;
        }
        Self::new(self.field, self.internal_modulus, 1, gens, self.differentials.clone())
            .expect("dropping the action keeps the presentation valid")
    }

    /// Compares two presentations after renaming the generators of `self`
    /// by `rename`. Returns a description of the first difference.
    pub fn compare_renamed(
        &self,
        other: &DgaPresentation,
        rename: impl Fn(&str) -> String,
    ) -> std::result::Result<(), String> {
        if self.prime() != other.prime() || self.internal_modulus != other.internal_modulus {
            return Err("prime or internal modulus differ".into());
        }
        if self.generators.len() != other.generators.len() {
            return Err("generator counts differ".into());
        }
        let mut perm = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let target = rename(&g.name);
            let j = other.generator_index(&target).ok_or_else(|| format!("{target} missing"))?;
            if other.generators[j].degree != g.degree {
                return Err(format!("degree of {target} differs"));
            }
            perm.push(j);
        }
        let f = self.field;
        let map = |x: &Element| -> Element {
            let mut out = Element::zero();
            for (m, c) in x.terms() {
                let mut prod = Element::monomial(0, c);
                for k in bits(m) {
                    prod = prod.mul(f, &Element::generator(perm[k]));
                }
                out = out.add(f, &prod);
            }
            out
        };
        for (i, g) in self.generators.iter().enumerate() {
            let j = perm[i];
            if map(&self.differentials[i]) != other.differentials[j] {
                return Err(format!("differential of {} differs", g.name));
            }
            let ours = map(&self.apply_action(&Element::generator(i)));
            let theirs = other.apply_action(&Element::generator(j));
            if ours != theirs {
                return Err(format!("action on {} differs", g.name));
            }
        }
        Ok(())
    }
}

fn combine(f: PrimeField, mut v: Vec<(Mask, FieldElement)>) -> Vec<(Mask, FieldElement)> {
    v.sort_unstable_by_key(|&(m, _)| m);
    let mut out: Vec<(Mask, FieldElement)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc = f.add(*lc, c),
            _ => out.push((m, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A requested basis element for [`DgaPresentation::rebase`].
#[derive(Debug, Clone)]
pub struct NewGenerator {
    pub name: String,
    pub expr: Element,
    pub arith: u32,
}

/// An algebra re-expressed in a new generator basis. The differential and σ
/// are kept in full, possibly mixing filtration weights.
#[derive(Debug, Clone)]
pub struct Rebased {
    pub field: PrimeField,
    pub internal_modulus: u64,
    pub action_order: u32,
    pub names: Vec<String>,
    pub degrees: Vec<MultiDegree>,
    pub differentials: Vec<Element>,
    pub action: Vec<Element>,
}

impl Rebased {
    fn weight(weights: &[u32], m: Mask) -> u32 {
        bits(m).map(|i| weights[i]).sum()
    }

    /// The rebased algebra itself. σ is kept only if it still maps
    /// generators to signed generators.
    pub fn presentation(&self) -> Result<DgaPresentation> {
        let action = self.signed_action(|e| e.clone());
        self.assemble(self.differentials.clone(), action)
    }

    /// Associated graded for the multiplicative filtration with the given
    /// generator weights: keeps the weight-preserving part of d and σ.
    /// Fails if d lowers the weight of some generator.
    pub fn leading_part(&self, weights: &[u32]) -> Result<DgaPresentation> {
        let mut differentials = Vec::with_capacity(self.names.len());
        for (j, d) in self.differentials.iter().enumerate() {
            let w = weights[j];
            if d.terms().any(|(m, _)| Self::weight(weights, m) < w) {
                return Err(Error::InvalidFiltration(format!(
                    "d({}) leaves the filtration (the ideal is not closed under d)",
                    self.names[j]
                )));
            }
            differentials.push(d.filter(|m| Self::weight(weights, m) == w));
        }
        let preserved =
            self.action.iter().enumerate().all(|(j, a)| a.terms().all(|(m, _)| Self::weight(weights, m) >= weights[j]));
        let action = if preserved {
            self.signed_action(|e| {
                let w = e.terms().map(|(m, _)| Self::weight(weights, m)).min().unwrap_or(0);
                e.filter(|m| Self::weight(weights, m) == w)
            })
        } else {
            None
        };
        self.assemble(differentials, action)
    }

    fn signed_action(&self, part: impl Fn(&Element) -> Element) -> Option<Vec<SignedGenerator>> {
        let minus_one = self.field.neg(1);
        self.action
            .iter()
            .map(|a| {
                let lead = part(a);
                let mut terms = lead.terms();
                match (terms.next(), terms.next()) {
                    (Some((m, c)), None) if m.count_ones() == 1 && (c == 1 || c == minus_one) => {
                        Some(SignedGenerator { index: m.trailing_zeros() as usize, negate: c != 1 })
                    }
                    _ => None,
                }
            })
            .collect()
    }

    fn assemble(&self, differentials: Vec<Element>, action: Option<Vec<SignedGenerator>>) -> Result<DgaPresentation> {
        if action.is_none() {
            log::debug!("dropping the group action: it does not act by signed generators in the new basis");
        }
        let order = if action.is_some() { self.action_order } else { 1 };
        let gens = self
            .names
            .iter()
            .zip(&self.degrees)
            .enumerate()
            .map(|(j, (name, &degree))| GeneratorSpec {
                name: name.clone(),
                degree,
                action_image: action.as_ref().map(|a| a[j]),
            })
            .collect();
        DgaPresentation::new(self.field, self.internal_modulus, order, gens, differentials)
    }
}
