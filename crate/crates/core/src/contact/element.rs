//! Elements of the graded components of the contact algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::scalar::GaussianRational;

use super::monomial::Monomial;

/// An element of one graded component of the (complexified) contact algebra.
///
/// Each component decomposes into layers indexed by `-1, 0, 1, …`: a term
/// `(layer, m) ↦ c` with `layer == -1` lies in the symmetric-power part
/// `S^{degree+2}` of the component, while a term with `layer == i ≥ 0` is the
/// image of the monomial `m ∈ S^{degree-2i}` under `i + 1` applications of
/// the raising operator `mu`.  The layer of a term is therefore determined
/// by the degrees of the element and of the monomial; `add_term` enforces
/// this.  A zero element compares equal to zero in every degree.
#[derive(Clone)]
pub struct ContactElement {
    n: usize,
    degree: i64,
    terms: BTreeMap<(i64, Monomial), GaussianRational>,
}

impl ContactElement {
    pub fn zero(n: usize, degree: i64) -> Self {
        assert!(n > 0);
        ContactElement { n, degree, terms: BTreeMap::new() }
    }

    /// A single-term element.
    pub fn term(n: usize, layer: i64, m: Monomial, c: GaussianRational) -> Self {
        let mut x = ContactElement::zero(n, m.degree() + 2 * layer);
        x.add_term(layer, m, c);
        x
    }

    pub fn from_terms<I>(n: usize, degree: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Monomial, GaussianRational)>,
    {
        let mut x = ContactElement::zero(n, degree);
        for (layer, m, c) in terms {
            x.add_term(layer, m, c);
        }
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Add `c · mu^{layer+1}(m)` to this element (plain `m` when `layer` is −1).
    pub fn add_term(&mut self, layer: i64, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        assert!(layer >= -1, "layer must be at least -1");
        assert_eq!(m.width(), 2 * self.n, "monomial width mismatch");
        assert_eq!(
            m.degree(),
            self.degree - 2 * layer,
            "monomial degree does not match the layer"
        );
        let key = (layer, m);
        let entry = self.terms.entry(key.clone()).or_insert_with(GaussianRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, Monomial), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, layer: i64, m: &Monomial) -> GaussianRational {
        self.terms.get(&(layer, m.clone())).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// The terms sitting in one layer, in increasing monomial order.
    pub fn layer_terms(&self, layer: i64) -> Vec<(&Monomial, &GaussianRational)> {
        self.terms
            .range((layer, Monomial::one(2 * self.n))..)
            .take_while(|((l, _), _)| *l == layer)
            .map(|((_, m), c)| (m, c))
            .collect()
    }

    /// The symmetric-power part of the element: its layer −1 terms.
    pub fn k_part(&self) -> ContactElement {
        self.project(|layer, _| layer == -1)
    }

    pub fn layer_part(&self, layer: i64) -> ContactElement {
        self.project(|l, _| l == layer)
    }

    /// Keep only the terms selected by the predicate.
    pub fn project<F>(&self, keep: F) -> ContactElement
    where
        F: Fn(i64, &Monomial) -> bool,
    {
        let terms = self
            .terms
            .iter()
            .filter(|((l, m), _)| keep(*l, m))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        ContactElement { n: self.n, degree: self.degree, terms }
    }

    /// The raising operator: shift every layer up by one.  It maps the
    /// component of degree `p` injectively into the component of degree
    /// `p + 2`, sending the symmetric-power part onto layer 0.
    pub fn mu(&self) -> ContactElement {
        let terms = self
            .terms
            .iter()
            .map(|((l, m), c)| ((l + 1, m.clone()), c.clone()))
            .collect();
        ContactElement { n: self.n, degree: self.degree + 2, terms }
    }

    /// The bracket with the central element: drop the symmetric-power part
    /// and shift the remaining layers down by one.  Inverse to `mu` on the
    /// image of `mu`.
    pub fn shift_down(&self) -> ContactElement {
        let terms = self
            .terms
            .iter()
            .filter(|((l, _), _)| *l >= 0)
            .map(|((l, m), c)| ((l - 1, m.clone()), c.clone()))
            .collect();
        ContactElement { n: self.n, degree: self.degree - 2, terms }
    }

    /// Complex conjugation: conjugate coefficients and swap `z_i` with `zb_i`.
    pub fn conjugate(&self) -> ContactElement {
        let terms = self
            .terms
            .iter()
            .map(|((l, m), c)| ((*l, m.conjugate_slots()), c.conj()))
            .collect();
        ContactElement { n: self.n, degree: self.degree, terms }
    }

    pub fn scaled(&self, c: &GaussianRational) -> ContactElement {
        if c.is_zero() {
            return ContactElement::zero(self.n, self.degree);
        }
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        ContactElement { n: self.n, degree: self.degree, terms }
    }

    /// Split into eigencomponents of the adjoint action of the complex
    /// structure: the key `nu` collects the terms of bidegree `(l, m)` with
    /// `l - m == nu`, on which that action is multiplication by `i·nu`.
    pub fn eigendecompose(&self) -> BTreeMap<i64, ContactElement> {
        let mut out: BTreeMap<i64, ContactElement> = BTreeMap::new();
        for ((l, m), c) in &self.terms {
            let (hol, ahol) = m.bidegree();
            let nu = hol - ahol;
            out.entry(nu)
                .or_insert_with(|| ContactElement::zero(self.n, self.degree))
                .add_term(*l, m.clone(), c.clone());
        }
        out
    }
}

impl PartialEq for ContactElement {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.n == other.n && self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for ContactElement {}

impl Add for &ContactElement {
    type Output = ContactElement;
    fn add(self, rhs: &ContactElement) -> ContactElement {
        assert_eq!(self.n, rhs.n, "mixed generator counts");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, rhs.degree, "mixed degrees in a sum");
        let mut out = self.clone();
        for ((l, m), c) in &rhs.terms {
            out.add_term(*l, m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ContactElement {
    type Output = ContactElement;
    fn sub(self, rhs: &ContactElement) -> ContactElement {
        self + &(-rhs)
    }
}

impl Neg for &ContactElement {
    type Output = ContactElement;
    fn neg(self) -> ContactElement {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect();
        ContactElement { n: self.n, degree: self.degree, terms }
    }
}

impl fmt::Display for ContactElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::format_element(self))
    }
}

impl fmt::Debug for ContactElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] {}", self.degree, self)
    }
}
