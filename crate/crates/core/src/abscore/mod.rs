//! Graded cores of hypersurface-type CR algebras.
//!
//! A core extends the Heisenberg algebra `c⁻² ⊕ c⁻¹` by components in
//! degrees `p ≥ 0`.  Each component is determined by its holomorphic part,
//! a complex subspace of the extremal eigenspace `S^{p+2,0}` of the adjoint
//! action of the complex structure on the degree `p` component of the
//! contact algebra; we store cores in exactly that realized normal form, so
//! equality and classification are decidable.  The defining conditions —
//! every Levi map injective, brackets with antiholomorphic vectors falling
//! into the next component down — become exact linear algebra.

use std::fmt;

use crate::contact::{monomials, ContactAlgebra, ContactElement, LinearAutomorphism, Monomial};
use crate::linalg::{Ambient, LinalgError, Matrix, SubspacePresentation};
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoreError {
    #[error("generator in degree {degree} does not lie in the extremal eigenspace")]
    NotExtremal { degree: i64 },
    #[error("generator has degree {found}, expected {expected}")]
    WrongDegree { expected: i64, found: i64 },
    #[error("generator count mismatch: built for n = {expected}, got n = {found}")]
    WrongContext { expected: usize, found: usize },
    #[error("the map is not an automorphism of the pair (c, J): {0}")]
    NotCoreAutomorphism(String),
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
}

/// The monomials spanning the extremal eigenspace `S^{p+2,0}` inside the
/// degree `p` component: holomorphic monomials of degree `p + 2`.
pub fn extremal_basis(alg: &ContactAlgebra, p: i64) -> Vec<Monomial> {
    assert!(p >= -2);
    monomials(alg.width(), (p + 2) as u32)
        .into_iter()
        .filter(|m| m.bidegree().1 == 0)
        .collect()
}

pub(crate) fn extremal_ambient(alg: &ContactAlgebra, p: i64) -> Ambient {
    Ambient::new(
        format!("M[{}]:n={}:r={}", p, alg.n(), alg.r()),
        extremal_basis(alg, p).len(),
    )
}

/// Coordinates of an extremal element with respect to `extremal_basis`.
pub fn extremal_coordinates(alg: &ContactAlgebra, x: &ContactElement) -> Vec<GaussianRational> {
    extremal_basis(alg, x.degree())
        .into_iter()
        .map(|m| x.coefficient(-1, &m))
        .collect()
}

pub fn extremal_element(
    alg: &ContactAlgebra,
    p: i64,
    coords: &[GaussianRational],
) -> ContactElement {
    let basis = extremal_basis(alg, p);
    assert_eq!(coords.len(), basis.len());
    let mut x = ContactElement::zero(alg.n(), p);
    for (m, c) in basis.into_iter().zip(coords) {
        x.add_term(-1, m, c.clone());
    }
    x
}

/// Projection of a degree `p` element onto the extremal eigenspace.
pub fn extremal_projection(x: &ContactElement) -> ContactElement {
    let p = x.degree();
    x.project(|layer, m| layer == -1 && m.bidegree() == (p + 2, 0))
}

/// A core in realized normal form: the holomorphic parts of its nonnegative
/// components, presented inside the extremal eigenspaces.
#[derive(Clone)]
pub struct AbstractCore {
    alg: ContactAlgebra,
    components: Vec<SubspacePresentation<GaussianRational>>,
}

impl AbstractCore {
    /// Build a core from generators of each holomorphic component, starting
    /// at degree 0.  Trailing zero components are trimmed; validity beyond
    /// membership in the extremal eigenspaces is checked by [`validate`].
    ///
    /// [`validate`]: AbstractCore::validate
    pub fn new(
        alg: ContactAlgebra,
        generators: Vec<Vec<ContactElement>>,
    ) -> Result<Self, CoreError> {
        let mut components = Vec::new();
        for (idx, gens) in generators.iter().enumerate() {
            let p = idx as i64;
            let mut rows = Vec::new();
            for x in gens {
                if x.n() != alg.n() {
                    return Err(CoreError::WrongContext { expected: alg.n(), found: x.n() });
                }
                if x.degree() != p {
                    return Err(CoreError::WrongDegree { expected: p, found: x.degree() });
                }
                if &extremal_projection(x) != x {
                    return Err(CoreError::NotExtremal { degree: p });
                }
                rows.push(extremal_coordinates(&alg, x));
            }
            components.push(SubspacePresentation::from_spanning(
                extremal_ambient(&alg, p),
                &rows,
            )?);
        }
        while components.last().map_or(false, |c| c.dim() == 0) {
            components.pop();
        }
        Ok(AbstractCore { alg, components })
    }

    pub fn heisenberg_only(alg: ContactAlgebra) -> Self {
        AbstractCore { alg, components: Vec::new() }
    }

    pub fn algebra(&self) -> &ContactAlgebra {
        &self.alg
    }

    /// Largest degree with a nonzero component; −1 for a Heisenberg-only core.
    pub fn height(&self) -> i64 {
        self.components.len() as i64 - 1
    }

    pub fn component(&self, p: i64) -> SubspacePresentation<GaussianRational> {
        if p < 0 || p >= self.components.len() as i64 {
            return SubspacePresentation::zero(extremal_ambient(&self.alg, p.max(0)));
        }
        self.components[p as usize].clone()
    }

    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    /// Real dimension of the whole core,
    /// `1 + 2n + 2 · Σ dim_ℂ` of the holomorphic components.
    pub fn real_dimension(&self) -> usize {
        1 + 2 * self.alg.n() + 2 * self.components.iter().map(|c| c.dim()).sum::<usize>()
    }

    /// Canonical generators of the degree `p` holomorphic component.
    pub fn generators_of(&self, p: i64) -> Vec<ContactElement> {
        if p < 0 || p >= self.components.len() as i64 {
            return Vec::new();
        }
        self.components[p as usize]
            .basis_rows()
            .iter()
            .map(|row| extremal_element(&self.alg, p, row))
            .collect()
    }

    pub fn equals(&self, other: &AbstractCore) -> Result<bool, LinalgError> {
        if self.alg != other.alg || self.components.len() != other.components.len() {
            return Ok(false);
        }
        for (a, b) in self.components.iter().zip(&other.components) {
            if !a.equals(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Check the defining conditions of a core on the realized data: for
    /// every `p ≥ 1` the brackets of the degree `p` component with the
    /// antiholomorphic generators must fall inside the degree `p - 1`
    /// component, and every Levi map must be injective.
    pub fn validate(&self) -> CoreReport {
        let mut violations = Vec::new();
        for p in 1..=self.height() {
            let below = self.component(p - 1);
            for x in self.generators_of(p) {
                for j in 1..=self.alg.n() {
                    let b = self.alg.bracket(&x, &self.alg.zb(j));
                    let coords = extremal_coordinates(&self.alg, &extremal_projection(&b));
                    if &extremal_projection(&b) != &b {
                        violations.push(format!(
                            "bracket of a degree {p} generator with zb{j} left the extremal eigenspace"
                        ));
                    }
                    match below.contains_vector(&coords) {
                        Ok(true) => {}
                        Ok(false) => violations.push(format!(
                            "bracket of a degree {p} generator with zb{j} is not in the degree {} component",
                            p - 1
                        )),
                        Err(e) => violations.push(format!("linear algebra failure: {e}")),
                    }
                }
            }
        }
        for p in 0..=self.height() {
            match self.levi_map_injective(p) {
                Ok(true) => {}
                Ok(false) => violations
                    .push(format!("the order {} Levi map is not injective", p + 2)),
                Err(e) => violations.push(format!("linear algebra failure: {e}")),
            }
        }
        CoreReport { height: self.height(), violations }
    }

    /// Whether the iterated-bracket map of order `p + 2` (all brackets with
    /// `p + 2` antiholomorphic generators, landing in the center) has
    /// trivial kernel on the degree `p` component.
    fn levi_map_injective(&self, p: i64) -> Result<bool, LinalgError> {
        let comp = self.component(p);
        if comp.dim() == 0 {
            return Ok(true);
        }
        let t = Monomial::one(self.alg.width());
        let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
        // One row per antiholomorphic multi-index of length p + 2.
        for idx in monomials(self.alg.width(), (p + 2) as u32)
            .into_iter()
            .filter(|m| m.bidegree().0 == 0)
        {
            let mut row = Vec::new();
            for x in self.generators_of(p) {
                let mut acc = x;
                for j in 1..=self.alg.n() {
                    for _ in 0..idx.exp(self.alg.n() + j - 1) {
                        acc = self.alg.bracket(&acc, &self.alg.zb(j));
                    }
                }
                debug_assert_eq!(acc.degree(), -2);
                row.push(acc.coefficient(-1, &t));
            }
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows).rank() == comp.dim())
    }

    /// Whether every component respects the binomial dimension bound.
    pub fn dimension_bound(&self) -> bool {
        dimension_bound_holds(self.alg.n(), &self.component_dims())
    }

    /// Transport the core by an automorphism of the pair (contact algebra,
    /// complex structure): the map must be real, commute with the complex
    /// structure, and scale the symplectic pairing.
    pub fn apply_automorphism(&self, g: &LinearAutomorphism) -> Result<AbstractCore, CoreError> {
        if !g.is_real() {
            return Err(CoreError::NotCoreAutomorphism(
                "the map does not commute with conjugation".to_string(),
            ));
        }
        if !g.preserves_complex_structure() {
            return Err(CoreError::NotCoreAutomorphism(
                "the map does not commute with the complex structure".to_string(),
            ));
        }
        let generators = (0..=self.height())
            .map(|p| self.generators_of(p).iter().map(|x| g.apply(x)).collect())
            .collect();
        AbstractCore::new(self.alg.clone(), generators)
    }
}

/// The combinatorial cap `dim 𝔪^{p(10)} ≤ C(n+p+1, p+2)`, applied to a
/// claimed list of component dimensions starting at degree 0.
pub fn dimension_bound_holds(n: usize, dims: &[usize]) -> bool {
    dims.iter().enumerate().all(|(p, &d)| {
        d as u64 <= num_integer::binomial((n + p + 1) as u64, (p + 2) as u64)
    })
}

#[derive(Debug, Clone)]
pub struct CoreReport {
    pub height: i64,
    pub violations: Vec<String>,
}

impl CoreReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Debug for AbstractCore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbstractCore(n={}, r={}; ", self.alg.n(), self.alg.r())?;
        for p in 0..=self.height() {
            let gens: Vec<String> =
                self.generators_of(p).iter().map(|x| x.to_string()).collect();
            write!(f, "m^{p} = <{}> ", gens.join(", "))?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for AbstractCore {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let components: Vec<Vec<String>> = (0..=self.height())
            .map(|p| self.generators_of(p).iter().map(|x| x.to_string()).collect())
            .collect();
        CoreDoc { r: self.alg.r(), s: self.alg.s(), components }.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for AbstractCore {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = CoreDoc::deserialize(d)?;
        let alg = ContactAlgebra::new(doc.r, doc.s);
        let mut generators = Vec::new();
        for exprs in &doc.components {
            let mut gens = Vec::new();
            for e in exprs {
                gens.push(alg.parse(e).map_err(serde::de::Error::custom)?);
            }
            generators.push(gens);
        }
        AbstractCore::new(alg, generators).map_err(serde::de::Error::custom)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CoreDoc {
    r: usize,
    s: usize,
    components: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational as G, Rational};

    fn parse(alg: &ContactAlgebra, s: &str) -> ContactElement {
        alg.parse(s).unwrap()
    }

    #[test]
    fn the_rank_one_tower_core_is_valid() {
        let alg = ContactAlgebra::standard(1);
        let core = AbstractCore::new(
            alg.clone(),
            vec![vec![parse(&alg, "z^2")], vec![parse(&alg, "z^3")]],
        )
        .unwrap();
        assert_eq!(core.height(), 1);
        assert_eq!(core.component_dims(), vec![1, 1]);
        assert_eq!(core.real_dimension(), 7);
        let report = core.validate();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
        assert!(core.dimension_bound());
    }

    #[test]
    fn heisenberg_only_core_is_valid_with_negative_height() {
        let core = AbstractCore::heisenberg_only(ContactAlgebra::new(1, 1));
        assert_eq!(core.height(), -1);
        assert!(core.validate().is_valid());
        assert_eq!(core.real_dimension(), 5);
    }

    #[test]
    fn missing_lower_component_is_reported() {
        let alg = ContactAlgebra::standard(1);
        let core =
            AbstractCore::new(alg.clone(), vec![vec![], vec![parse(&alg, "z^3")]]).unwrap();
        let report = core.validate();
        assert!(!report.is_valid());
        assert!(report.violations[0].contains("degree 1"));
    }

    #[test]
    fn non_extremal_generator_is_rejected() {
        let alg = ContactAlgebra::standard(1);
        assert_eq!(
            AbstractCore::new(alg.clone(), vec![vec![parse(&alg, "z*zb")]]).unwrap_err(),
            CoreError::NotExtremal { degree: 0 }
        );
        assert_eq!(
            AbstractCore::new(alg.clone(), vec![vec![parse(&alg, "z^3")]]).unwrap_err(),
            CoreError::WrongDegree { expected: 0, found: 1 }
        );
    }

    #[test]
    fn dimension_bounds_match_binomials() {
        assert!(dimension_bound_holds(2, &[3]));
        assert!(!dimension_bound_holds(2, &[4]));
        assert!(dimension_bound_holds(1, &[1, 1]));
        assert!(!dimension_bound_holds(1, &[2]));
        assert!(!dimension_bound_holds(1, &[1, 2]));
        // n=2, p=0 bound is 3 = dim S^2(C^2); n=1, p=1 bound is 1.
        assert_eq!(num_integer::binomial(3u64, 2), 3);
        assert_eq!(num_integer::binomial(3u64, 3), 1);
    }

    #[test]
    fn trailing_zero_components_are_trimmed() {
        let alg = ContactAlgebra::standard(1);
        let core =
            AbstractCore::new(alg.clone(), vec![vec![parse(&alg, "z^2")], vec![]]).unwrap();
        assert_eq!(core.height(), 0);
    }

    #[test]
    fn automorphisms_fix_lines_and_reject_conjugations() {
        let alg = ContactAlgebra::standard(1);
        let core = AbstractCore::new(
            alg.clone(),
            vec![vec![parse(&alg, "z^2")], vec![parse(&alg, "z^3")]],
        )
        .unwrap();

        let lambda = G::new(Rational::new(3, 5), Rational::new(-4, 5));
        let rot =
            LinearAutomorphism::diagonal(&alg, vec![lambda.clone(), lambda.conj()]).unwrap();
        assert!(core.apply_automorphism(&rot).unwrap().equals(&core).unwrap());

        let two = G::int(2);
        let scale = LinearAutomorphism::diagonal(&alg, vec![two.clone(), two]).unwrap();
        assert!(core.apply_automorphism(&scale).unwrap().equals(&core).unwrap());

        // z ↔ zb is real and conformal but conjugates the complex structure.
        let mut images = vec![vec![G::zero(); 2]; 2];
        images[0][1] = G::one();
        images[1][0] = G::one();
        let swap = LinearAutomorphism::new(&alg, images).unwrap();
        assert!(swap.is_real());
        assert!(core.apply_automorphism(&swap).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let alg = ContactAlgebra::new(1, 1);
        let core = AbstractCore::new(
            alg.clone(),
            vec![vec![parse(&alg, "z1^2-z2^2-2*i*z1*z2")]],
        )
        .unwrap();
        // Serialization normalizes each generator to its reduced row form.
        let json = serde_json::to_string(&core).unwrap();
        assert_eq!(json, r#"{"r":1,"s":1,"components":[["-z1^2+2*i*z1*z2+z2^2"]]}"#);
        let back: AbstractCore = serde_json::from_str(&json).unwrap();
        assert!(back.equals(&core).unwrap());
    }
}
