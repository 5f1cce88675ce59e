//! Degreewise subspaces of the contact algebra.
//!
//! Complex subspaces are presented per degree in the coordinates of
//! [`ContactAlgebra::basis_keys`].  Real subspaces live in the realified
//! coordinates (real parts followed by imaginary parts), so a real form —
//! the fixed locus of conjugation — is an honest rational subspace there.

use std::collections::BTreeMap;

use crate::contact::{ContactAlgebra, ContactElement};
use crate::linalg::{Ambient, LinalgError, SubspacePresentation};
use crate::scalar::{Field, GaussianRational, Rational};

pub(crate) fn realify(v: &[GaussianRational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(2 * v.len());
    out.extend(v.iter().map(|c| c.re.clone()));
    out.extend(v.iter().map(|c| c.im.clone()));
    out
}

pub(crate) fn complexify(row: &[Rational]) -> Vec<GaussianRational> {
    let m = row.len() / 2;
    (0..m)
        .map(|k| GaussianRational::new(row[k].clone(), row[m + k].clone()))
        .collect()
}

pub(crate) fn real_ambient(alg: &ContactAlgebra, degree: i64) -> Ambient {
    let complex = alg.component(degree);
    Ambient::new(format!("re({})", complex.id), 2 * complex.dim)
}

/// The part of `v` not accounted for by the echelon basis of `w`; zero
/// exactly when `v` lies in `w`, and linear in `v`.
pub(crate) fn residual<F: Field>(w: &SubspacePresentation<F>, v: &[F]) -> Vec<F> {
    let mut v = v.to_vec();
    for row in w.basis_rows() {
        let lead = row.iter().position(|x| !x.is_zero()).unwrap();
        if !v[lead].is_zero() {
            let factor = v[lead].clone();
            for c in 0..v.len() {
                v[c] = v[c].sub(&factor.mul(&row[c]));
            }
        }
    }
    v
}

fn combination<F: Field>(rows: &[Vec<F>], weights: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); rows[0].len()];
    for (row, t) in rows.iter().zip(weights) {
        if t.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(row) {
            *o = o.add(&t.mul(c));
        }
    }
    out
}

pub(crate) fn combine_rows<F: Field>(rows: &[Vec<F>], weight_sets: &[Vec<F>]) -> Vec<Vec<F>> {
    weight_sets.iter().map(|w| combination(rows, w)).collect()
}

/// A complex subspace of the contact algebra given degree by degree, for
/// degrees from −2 up to a fixed budget.
#[derive(Clone)]
pub struct GradedComplexSubspace {
    alg: ContactAlgebra,
    max_degree: i64,
    pieces: BTreeMap<i64, SubspacePresentation<GaussianRational>>,
}

impl GradedComplexSubspace {
    fn build(
        alg: &ContactAlgebra,
        max_degree: i64,
        mut make: impl FnMut(i64) -> SubspacePresentation<GaussianRational>,
    ) -> Self {
        assert!(max_degree >= -2);
        let pieces = (-2..=max_degree).map(|d| (d, make(d))).collect();
        GradedComplexSubspace { alg: alg.clone(), max_degree, pieces }
    }

    pub fn zero(alg: &ContactAlgebra, max_degree: i64) -> Self {
        Self::build(alg, max_degree, |d| SubspacePresentation::zero(alg.component(d)))
    }

    pub fn full(alg: &ContactAlgebra, max_degree: i64) -> Self {
        Self::build(alg, max_degree, |d| SubspacePresentation::full(alg.component(d)))
    }

    /// Span of a family of elements, grouped by their degrees.
    pub fn from_elements(
        alg: &ContactAlgebra,
        max_degree: i64,
        elements: &[ContactElement],
    ) -> Result<Self, LinalgError> {
        let mut rows: BTreeMap<i64, Vec<Vec<GaussianRational>>> = BTreeMap::new();
        for x in elements {
            assert_eq!(x.n(), alg.n(), "mixed generator counts");
            assert!(
                (-2..=max_degree).contains(&x.degree()),
                "element of degree {} outside the degree budget {}",
                x.degree(),
                max_degree
            );
            rows.entry(x.degree()).or_default().push(alg.coordinates(x));
        }
        let mut out = Self::zero(alg, max_degree);
        for (d, vs) in rows {
            out.pieces.insert(d, SubspacePresentation::from_spanning(alg.component(d), &vs)?);
        }
        Ok(out)
    }

    pub(crate) fn set_piece(&mut self, degree: i64, piece: SubspacePresentation<GaussianRational>) {
        assert!((-2..=self.max_degree).contains(&degree));
        assert_eq!(piece.ambient(), &self.alg.component(degree));
        self.pieces.insert(degree, piece);
    }

    pub fn algebra(&self) -> &ContactAlgebra {
        &self.alg
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn piece(&self, degree: i64) -> &SubspacePresentation<GaussianRational> {
        self.pieces.get(&degree).expect("degree outside the budget")
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.piece(degree).dim()
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.pieces.iter().map(|(d, s)| (*d, s.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(|s| s.dim()).sum()
    }

    /// Canonical basis of the degree piece, as elements.
    pub fn elements(&self, degree: i64) -> Vec<ContactElement> {
        self.piece(degree)
            .basis_rows()
            .iter()
            .map(|row| self.alg.element_from_coordinates(degree, row))
            .collect()
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.alg, other.alg, "mixed contact algebras");
        assert_eq!(self.max_degree, other.max_degree, "mixed degree budgets");
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other);
        let mut out = self.clone();
        for d in -2..=self.max_degree {
            out.pieces.insert(d, self.piece(d).sum(other.piece(d))?);
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other);
        let mut out = self.clone();
        for d in -2..=self.max_degree {
            out.pieces.insert(d, self.piece(d).intersect(other.piece(d))?);
        }
        Ok(out)
    }

    pub fn contains(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_compatible(other);
        for d in -2..=self.max_degree {
            if !self.piece(d).contains(other.piece(d))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_compatible(other);
        for d in -2..=self.max_degree {
            if !self.piece(d).equals(other.piece(d))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn conjugate(&self) -> Result<Self, LinalgError> {
        let mut out = Self::zero(&self.alg, self.max_degree);
        for d in -2..=self.max_degree {
            let rows: Vec<Vec<GaussianRational>> = self
                .elements(d)
                .iter()
                .map(|x| self.alg.coordinates(&x.conjugate()))
                .collect();
            out.pieces.insert(d, SubspacePresentation::from_spanning(self.alg.component(d), &rows)?);
        }
        Ok(out)
    }

    /// First degree whose piece is not stable under conjugation, if any.
    pub fn conjugation_instability(&self) -> Result<Option<i64>, LinalgError> {
        for d in -2..=self.max_degree {
            let piece = self.piece(d);
            if piece.dim() == self.alg.dim(d) {
                continue;
            }
            for x in self.elements(d) {
                if !piece.contains_vector(&self.alg.coordinates(&x.conjugate()))? {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    }

    /// First pair of degrees whose bracket leaves the subspace, if any.
    /// Pairs whose bracket degree exceeds the budget cannot be checked and
    /// are skipped.
    pub fn closure_violation(&self) -> Result<Option<(i64, i64)>, LinalgError> {
        for p in -2..=self.max_degree {
            for q in p..=self.max_degree {
                let f = p + q;
                if !(-2..=self.max_degree).contains(&f) {
                    continue;
                }
                let target = self.piece(f);
                if target.dim() == self.alg.dim(f) {
                    continue;
                }
                for x in self.elements(p) {
                    for y in self.elements(q) {
                        let b = self.alg.bracket(&x, &y);
                        if !target.contains_vector(&self.alg.coordinates(&b))? {
                            return Ok(Some((p, q)));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// The real points (fixed locus of conjugation), in realified
    /// coordinates.  Only meaningful when the subspace is conjugation
    /// stable; then each degree piece of complex dimension `k` has real
    /// points of real dimension `k`.
    pub fn real_points(&self) -> Result<GradedRealSubspace, LinalgError> {
        let mut pieces = BTreeMap::new();
        for d in -2..=self.max_degree {
            let mut rows = Vec::new();
            for x in self.elements(d) {
                let xb = x.conjugate();
                rows.push(realify(&self.alg.coordinates(&(&x + &xb))));
                let diff = &x - &xb;
                rows.push(realify(&self.alg.coordinates(&diff.scaled(&GaussianRational::i()))));
            }
            let real = SubspacePresentation::from_spanning(real_ambient(&self.alg, d), &rows)?;
            debug_assert!(real.dim() <= self.piece(d).dim() * 2);
            pieces.insert(d, real);
        }
        Ok(GradedRealSubspace { alg: self.alg.clone(), max_degree: self.max_degree, pieces })
    }
}

impl std::fmt::Debug for GradedComplexSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GradedComplexSubspace{:?}", self.dims())
    }
}

/// A real subspace of the contact algebra given degree by degree, in
/// realified coordinates.
#[derive(Clone)]
pub struct GradedRealSubspace {
    alg: ContactAlgebra,
    max_degree: i64,
    pieces: BTreeMap<i64, SubspacePresentation<Rational>>,
}

impl GradedRealSubspace {
    pub fn zero(alg: &ContactAlgebra, max_degree: i64) -> Self {
        assert!(max_degree >= -2);
        let pieces = (-2..=max_degree)
            .map(|d| (d, SubspacePresentation::zero(real_ambient(alg, d))))
            .collect();
        GradedRealSubspace { alg: alg.clone(), max_degree, pieces }
    }

    pub(crate) fn from_pieces(
        alg: &ContactAlgebra,
        max_degree: i64,
        given: BTreeMap<i64, SubspacePresentation<Rational>>,
    ) -> Self {
        let mut out = Self::zero(alg, max_degree);
        for (d, piece) in given {
            assert!((-2..=max_degree).contains(&d));
            assert_eq!(piece.ambient(), &real_ambient(alg, d));
            out.pieces.insert(d, piece);
        }
        out
    }

    pub fn algebra(&self) -> &ContactAlgebra {
        &self.alg
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn piece(&self, degree: i64) -> &SubspacePresentation<Rational> {
        self.pieces.get(&degree).expect("degree outside the budget")
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.piece(degree).dim()
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.pieces.iter().map(|(d, s)| (*d, s.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(|s| s.dim()).sum()
    }

    /// Canonical basis of the degree piece, as (real) elements.
    pub fn elements(&self, degree: i64) -> Vec<ContactElement> {
        self.piece(degree)
            .basis_rows()
            .iter()
            .map(|row| self.alg.element_from_coordinates(degree, &complexify(row)))
            .collect()
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.alg, other.alg, "mixed contact algebras");
        assert_eq!(self.max_degree, other.max_degree, "mixed degree budgets");
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other);
        let mut out = self.clone();
        for d in -2..=self.max_degree {
            out.pieces.insert(d, self.piece(d).sum(other.piece(d))?);
        }
        Ok(out)
    }

    pub fn contains(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_compatible(other);
        for d in -2..=self.max_degree {
            if !self.piece(d).contains(other.piece(d))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_compatible(other);
        for d in -2..=self.max_degree {
            if !self.piece(d).equals(other.piece(d))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl std::fmt::Debug for GradedRealSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GradedRealSubspace{:?}", self.dims())
    }
}
