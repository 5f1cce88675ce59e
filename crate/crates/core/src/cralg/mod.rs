//! Graded CR algebras: a real graded subalgebra of the contact algebra
//! together with a complex isotropy subalgebra of its complexification.
//!
//! A pair stores the complexified real form `ĝ` (conjugation stable, full
//! in negative degrees) and the isotropy `q` degree by degree, both within
//! a fixed degree budget.  From a pair the Freeman chain, the Tanaka chain
//! and — in the finitely nondegenerate case — the core are computed by
//! exact linear algebra.
//!
//! The distinguished example is the universal isotropy `u`: in each degree
//! `p` it spans every eigenspace of the adjoint action of the complex
//! structure except the extremal one of eigenvalue `-i(p+2)`.  Its chain
//! shrinks by one eigenspace per step and its core fills the full extremal
//! eigenspaces; every other pair with the same real form has its chain and
//! core cut out inside these.

mod chains;
mod graded;

use std::collections::BTreeMap;

use crate::abscore::{extremal_projection, AbstractCore, CoreError};
use crate::contact::{ContactAlgebra, ContactElement};
use crate::linalg::{LinalgError, SubspacePresentation};
use crate::scalar::GaussianRational;

pub use chains::{freeman_profile, FreemanChain, FreemanStatus, TanakaChain};
pub use graded::{GradedComplexSubspace, GradedRealSubspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairError {
    #[error("component of degree {degree} must be given through generators of degree 0..=max")]
    DegreeOutOfRange { degree: i64 },
    #[error("the real form is not full in negative degree {degree}")]
    NegativePartNotFull { degree: i64 },
    #[error("the real form is not conjugation stable in degree {degree}")]
    NotConjugationStable { degree: i64 },
    #[error("the {part} part is not closed under the bracket at degrees ({0}, {1})", .degrees.0, .degrees.1)]
    NotBracketClosed { part: &'static str, degrees: (i64, i64) },
    #[error("the isotropy is not contained in the complexified real form in degree {degree}")]
    IsotropyNotContained { degree: i64 },
    #[error("the isotropy is not of hypersurface type in negative degrees")]
    NotHypersurfaceType,
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

impl From<LinalgError> for PairError {
    fn from(e: LinalgError) -> Self {
        PairError::Linalg(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractionError {
    #[error("the pair is not finitely nondegenerate")]
    NotFinitelyNondegenerate,
    #[error("the Freeman chain did not settle within the degree budget")]
    InconclusiveAtBudget,
    #[error("extracted invalid core data: {0}")]
    Core(#[from] CoreError),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

impl From<LinalgError> for ExtractionError {
    fn from(e: LinalgError) -> Self {
        ExtractionError::Linalg(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct CRAlgebraPair {
    alg: ContactAlgebra,
    max_degree: i64,
    g_hat: GradedComplexSubspace,
    q: GradedComplexSubspace,
}

impl CRAlgebraPair {
    /// Assemble a pair from generators: the real form is full in negative
    /// degrees and spanned by `g_generators` (degrees `0..=max_degree`)
    /// above; the isotropy always contains the holomorphic generators in
    /// degree −1 and is spanned by `q_generators` (degrees `-1..=max_degree`)
    /// beyond that.
    pub fn new(
        alg: &ContactAlgebra,
        max_degree: i64,
        g_generators: &[ContactElement],
        q_generators: &[ContactElement],
    ) -> Result<Self, PairError> {
        for x in g_generators {
            if !(0..=max_degree).contains(&x.degree()) {
                return Err(PairError::DegreeOutOfRange { degree: x.degree() });
            }
        }
        for x in q_generators {
            if !(-1..=max_degree).contains(&x.degree()) {
                return Err(PairError::DegreeOutOfRange { degree: x.degree() });
            }
        }
        let mut g_hat = GradedComplexSubspace::from_elements(alg, max_degree, g_generators)?;
        for d in [-2, -1] {
            g_hat.set_piece(d, SubspacePresentation::full(alg.component(d)));
        }
        let mut q_elems: Vec<ContactElement> = (1..=alg.n()).map(|i| alg.z(i)).collect();
        q_elems.extend_from_slice(q_generators);
        let q = GradedComplexSubspace::from_elements(alg, max_degree, &q_elems)?;
        CRAlgebraPair::from_graded(g_hat, q)
    }

    /// Validate and wrap explicitly presented graded subspaces.
    pub fn from_graded(
        g_hat: GradedComplexSubspace,
        q: GradedComplexSubspace,
    ) -> Result<Self, PairError> {
        let alg = g_hat.algebra().clone();
        let max_degree = g_hat.max_degree();
        for d in [-2, -1] {
            if g_hat.dim(d) != alg.dim(d) {
                return Err(PairError::NegativePartNotFull { degree: d });
            }
        }
        if let Some(d) = g_hat.conjugation_instability()? {
            return Err(PairError::NotConjugationStable { degree: d });
        }
        if let Some(degrees) = g_hat.closure_violation()? {
            return Err(PairError::NotBracketClosed { part: "real form", degrees });
        }
        if let Some(degrees) = q.closure_violation()? {
            return Err(PairError::NotBracketClosed { part: "isotropy", degrees });
        }
        for d in -2..=max_degree {
            if !g_hat.piece(d).contains(q.piece(d))? {
                return Err(PairError::IsotropyNotContained { degree: d });
            }
        }
        if q.dim(-2) != 0 {
            return Err(PairError::NotHypersurfaceType);
        }
        let q_minus = q.piece(-1);
        let qbar_rows: Vec<Vec<GaussianRational>> = q
            .elements(-1)
            .iter()
            .map(|x| alg.coordinates(&x.conjugate()))
            .collect();
        let qbar_minus = SubspacePresentation::from_spanning(alg.component(-1), &qbar_rows)?;
        if q_minus.intersect(&qbar_minus)?.dim() != 0
            || q_minus.sum(&qbar_minus)?.dim() != alg.dim(-1)
        {
            return Err(PairError::NotHypersurfaceType);
        }
        Ok(CRAlgebraPair { alg, max_degree, g_hat, q })
    }

    pub fn algebra(&self) -> &ContactAlgebra {
        &self.alg
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn g_hat(&self) -> &GradedComplexSubspace {
        &self.g_hat
    }

    pub fn q(&self) -> &GradedComplexSubspace {
        &self.q
    }

    /// The real form, as a rational subspace in realified coordinates.
    pub fn real_form(&self) -> Result<GradedRealSubspace, LinalgError> {
        self.g_hat.real_points()
    }

    fn step_budget(&self) -> usize {
        (self.max_degree + 2).max(1) as usize
    }

    pub fn freeman_sequence(&self) -> Result<FreemanChain, LinalgError> {
        chains::freeman_chain(&self.q, self.step_budget())
    }

    pub fn tanaka_sequence(&self) -> Result<TanakaChain, LinalgError> {
        chains::tanaka_chain(&self.g_hat, &self.q, self.step_budget())
    }

    /// The core of a finitely nondegenerate pair: in each degree `p ≥ 0`,
    /// the projection of the degree `p` piece of the Freeman term of index
    /// `p` onto the extremal eigenspace.
    pub fn extract_core(&self) -> Result<AbstractCore, ExtractionError> {
        let chain = self.freeman_sequence()?;
        match chain.status {
            FreemanStatus::InconclusiveAtBudget => Err(ExtractionError::InconclusiveAtBudget),
            FreemanStatus::HolomorphicallyDegenerate => {
                Err(ExtractionError::NotFinitelyNondegenerate)
            }
            FreemanStatus::FinitelyNondegenerate { .. } => {
                let generators = (0..=self.max_degree)
                    .map(|p| {
                        chain
                            .term(p)
                            .elements(p)
                            .iter()
                            .map(extremal_projection)
                            .collect()
                    })
                    .collect();
                Ok(AbstractCore::new(self.alg.clone(), generators)?)
            }
        }
    }

    /// The nondegeneracy order `k`, when the Freeman chain certifies one.
    pub fn nondegeneracy_order(&self) -> Result<Option<i64>, LinalgError> {
        Ok(match self.freeman_sequence()?.status {
            FreemanStatus::FinitelyNondegenerate { order } => Some(order),
            _ => None,
        })
    }
}

/// The pair whose isotropy is the universal one: everything but the
/// extremal eigenspace of eigenvalue `-i(p+2)` in each degree `p`, over the
/// full contact algebra.
///
/// The pair depends only on the signature and the degree budget, and the
/// validation inside [`CRAlgebraPair::from_graded`] brackets every pair of
/// basis terms, so the result is memoized per `(r, s, max_degree)`.
pub fn build_universal_u(alg: &ContactAlgebra, max_degree: i64) -> CRAlgebraPair {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};

    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, i64), CRAlgebraPair>>> = OnceLock::new();
    let key = (alg.r(), alg.s(), max_degree);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("universal cache lock").get(&key) {
        return hit.clone();
    }
    let pair = build_universal_u_uncached(alg, max_degree);
    cache
        .lock()
        .expect("universal cache lock")
        .insert(key, pair.clone());
    pair
}

fn build_universal_u_uncached(alg: &ContactAlgebra, max_degree: i64) -> CRAlgebraPair {
    assert!(max_degree >= 0);
    let g_hat = GradedComplexSubspace::full(alg, max_degree);
    let mut q = GradedComplexSubspace::zero(alg, max_degree);
    let z_rows: Vec<Vec<GaussianRational>> =
        (1..=alg.n()).map(|i| alg.coordinates(&alg.z(i))).collect();
    q.set_piece(
        -1,
        SubspacePresentation::from_spanning(alg.component(-1), &z_rows)
            .expect("holomorphic generators span"),
    );
    for d in 0..=max_degree {
        let keys = alg.basis_keys(d);
        let mut rows = Vec::new();
        for (j, (layer, m)) in keys.iter().enumerate() {
            if *layer == -1 && m.bidegree() == (0, d + 2) {
                continue;
            }
            let mut row = vec![GaussianRational::zero(); keys.len()];
            row[j] = GaussianRational::one();
            rows.push(row);
        }
        q.set_piece(
            d,
            SubspacePresentation::from_spanning(alg.component(d), &rows)
                .expect("eigenspace keys span"),
        );
    }
    CRAlgebraPair::from_graded(g_hat, q).expect("the universal isotropy is a valid pair")
}

#[derive(serde::Serialize, serde::Deserialize)]
struct PairDoc {
    r: usize,
    s: usize,
    max_degree: i64,
    g: BTreeMap<i64, Vec<String>>,
    q: BTreeMap<i64, Vec<String>>,
}

impl serde::Serialize for CRAlgebraPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let real = self.real_form().map_err(serde::ser::Error::custom)?;
        let mut g = BTreeMap::new();
        for d in 0..=self.max_degree {
            let gens: Vec<String> = real.elements(d).iter().map(|x| x.to_string()).collect();
            if !gens.is_empty() {
                g.insert(d, gens);
            }
        }
        let mut q = BTreeMap::new();
        for d in -1..=self.max_degree {
            let gens: Vec<String> = self.q.elements(d).iter().map(|x| x.to_string()).collect();
            if !gens.is_empty() {
                q.insert(d, gens);
            }
        }
        PairDoc { r: self.alg.r(), s: self.alg.s(), max_degree: self.max_degree, g, q }
            .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for CRAlgebraPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = PairDoc::deserialize(d)?;
        let alg = ContactAlgebra::new(doc.r, doc.s);
        let mut g_gens = Vec::new();
        for (degree, exprs) in &doc.g {
            for e in exprs {
                let x = alg.parse(e).map_err(D::Error::custom)?;
                if x.degree() != *degree {
                    return Err(D::Error::custom(format!(
                        "element {e} listed under degree {degree} has degree {}",
                        x.degree()
                    )));
                }
                g_gens.push(x);
            }
        }
        let mut q_gens = Vec::new();
        for (degree, exprs) in &doc.q {
            for e in exprs {
                let x = alg.parse(e).map_err(D::Error::custom)?;
                if x.degree() != *degree {
                    return Err(D::Error::custom(format!(
                        "element {e} listed under degree {degree} has degree {}",
                        x.degree()
                    )));
                }
                q_gens.push(x);
            }
        }
        CRAlgebraPair::new(&alg, doc.max_degree, &g_gens, &q_gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;


    fn parse(alg: &ContactAlgebra, s: &str) -> ContactElement {
        alg.parse(s).unwrap()
    }

    #[test]
    fn universal_pieces_are_the_expected_eigenspaces() {
        for (r, s) in [(1, 0), (2, 0), (1, 1)] {
            let alg = ContactAlgebra::new(r, s);
            let n = alg.n();
            let u = build_universal_u(&alg, 2);
            assert_eq!(u.q().dim(-2), 0);
            assert_eq!(u.q().dim(-1), n);
            for i in 1..=n {
                assert!(u.q().piece(-1).contains_vector(&alg.coordinates(&alg.z(i))).unwrap());
            }
            // Degree 0 keeps the mixed quadratics, the grading element and
            // the holomorphic quadratics, but not the antiholomorphic ones.
            let u0 = u.q().piece(0);
            assert!(u0.contains_vector(&alg.coordinates(&alg.grading_element())).unwrap());
            assert!(u0.contains_vector(&alg.coordinates(&alg.complex_structure())).unwrap());
            if n == 1 {
                let anti = parse(&alg, "zb^2");
                assert!(!u0.contains_vector(&alg.coordinates(&anti)).unwrap());
            }
            let antiholo = |d: i64| -> usize {
                crate::contact::monomials(alg.width(), (d + 2) as u32)
                    .into_iter()
                    .filter(|m| m.bidegree().0 == 0)
                    .count()
            };
            for d in 0..=2 {
                assert_eq!(u.q().dim(d), alg.dim(d) - antiholo(d));
            }
            // The self-conjugate part of degree 0 drops both extremal
            // eigenspaces.
            let inter = u.q().piece(0).intersect(&u.q().conjugate().unwrap().piece(0)).unwrap();
            assert_eq!(inter.dim(), alg.dim(0) - 2 * antiholo(0));
        }
    }

    #[test]
    fn freeman_chain_of_the_universal_pair_shrinks_one_eigenspace_at_a_time() {
        let alg = ContactAlgebra::standard(1);
        let u = build_universal_u(&alg, 3);
        let chain = u.freeman_sequence().unwrap();
        assert_eq!(chain.total_dims(), vec![28, 27, 26, 25, 24, 23]);
        assert_eq!(chain.status, FreemanStatus::FinitelyNondegenerate { order: 5 });
        for (i, term) in chain.terms.iter().enumerate() {
            let expected = freeman_profile(u.q(), i as i64 - 1).unwrap();
            assert!(term.equals(&expected).unwrap(), "term {i} deviates from the closed form");
        }
        let floor = u.q().intersect(&u.q().conjugate().unwrap()).unwrap();
        assert!(chain.terms.last().unwrap().equals(&floor).unwrap());
    }

    #[test]
    fn freeman_chain_of_the_mixed_signature_universal_pair() {
        let alg = ContactAlgebra::new(1, 1);
        let u = build_universal_u(&alg, 2);
        let chain = u.freeman_sequence().unwrap();
        assert_eq!(chain.total_dims(), vec![71, 69, 66, 62, 57]);
        assert_eq!(chain.status, FreemanStatus::FinitelyNondegenerate { order: 4 });
        for (i, term) in chain.terms.iter().enumerate() {
            let expected = freeman_profile(u.q(), i as i64 - 1).unwrap();
            assert!(term.equals(&expected).unwrap(), "term {i} deviates from the closed form");
        }
    }

    #[test]
    fn universal_core_fills_the_extremal_eigenspaces() {
        let alg = ContactAlgebra::standard(1);
        let core = build_universal_u(&alg, 3).extract_core().unwrap();
        assert_eq!(core.component_dims(), vec![1, 1, 1, 1]);
        assert!(core.validate().is_valid());

        let alg2 = ContactAlgebra::new(1, 1);
        let core2 = build_universal_u(&alg2, 1).extract_core().unwrap();
        assert_eq!(core2.component_dims(), vec![3, 4]);
        assert!(core2.validate().is_valid());
    }

    #[test]
    fn tanaka_chain_needs_one_bracket_step_to_reach_the_center() {
        let alg = ContactAlgebra::standard(1);
        let u = build_universal_u(&alg, 2);
        let chain = u.tanaka_sequence().unwrap();
        assert_eq!(chain.depth(), 2);
        assert!(chain.reaches_full_algebra);
        assert_eq!(chain.terms[0].dims(), vec![(-2, 0), (-1, 2), (0, 4), (1, 6), (2, 9)]);
        assert_eq!(chain.terms[1].dims(), vec![(-2, 1), (-1, 2), (0, 4), (1, 6), (2, 9)]);
    }

    #[test]
    fn holomorphically_degenerate_pairs_are_detected() {
        let alg = ContactAlgebra::standard(1);
        let e = alg.grading_element();
        let j = alg.complex_structure();
        let z_deg = &j + &e.scaled(&GaussianRational::i());
        let pair = CRAlgebraPair::new(&alg, 0, &[e, j], &[z_deg]).unwrap();
        let chain = pair.freeman_sequence().unwrap();
        assert_eq!(chain.status, FreemanStatus::HolomorphicallyDegenerate);
        assert_eq!(
            pair.extract_core().unwrap_err(),
            ExtractionError::NotFinitelyNondegenerate
        );
    }

    #[test]
    fn levi_nondegenerate_pair_has_order_one_and_trivial_core() {
        let alg = ContactAlgebra::new(1, 1);
        let pair = CRAlgebraPair::new(&alg, 0, &[], &[]).unwrap();
        assert_eq!(pair.nondegeneracy_order().unwrap(), Some(1));
        let core = pair.extract_core().unwrap();
        assert_eq!(core.height(), -1);
        assert_eq!(core.real_dimension(), 5);
    }

    #[test]
    fn quadric_line_pair_has_order_two_and_a_line_core() {
        let alg = ContactAlgebra::standard(1);
        let j = alg.complex_structure();
        let z2 = parse(&alg, "z^2");
        let g0 = [parse(&alg, "z^2+zb^2"), parse(&alg, "-i*z^2+i*zb^2"), j.clone()];
        let pair = CRAlgebraPair::new(&alg, 0, &g0, &[z2.clone(), j]).unwrap();
        assert_eq!(pair.nondegeneracy_order().unwrap(), Some(2));
        let core = pair.extract_core().unwrap();
        assert_eq!(core.height(), 0);
        assert_eq!(core.component_dims(), vec![1]);
        assert!(core.component(0).contains_vector(
            &crate::abscore::extremal_coordinates(&alg, &z2)
        ).unwrap());
        assert_eq!(pair.nondegeneracy_order().unwrap(), Some(core.height() + 2));
    }

    #[test]
    fn construction_rejects_invalid_pairs() {
        let alg = ContactAlgebra::standard(1);
        let e = alg.grading_element();

        let q_outside =
            CRAlgebraPair::new(&alg, 0, &[e.clone()], &[parse(&alg, "z^2")]).unwrap_err();
        assert_eq!(q_outside, PairError::IsotropyNotContained { degree: 0 });

        let unstable =
            CRAlgebraPair::new(&alg, 0, &[parse(&alg, "z*zb+z^2")], &[]).unwrap_err();
        assert_eq!(unstable, PairError::NotConjugationStable { degree: 0 });

        let open = CRAlgebraPair::new(
            &alg,
            0,
            &[parse(&alg, "z^2+zb^2"), parse(&alg, "-i*z^2+i*zb^2")],
            &[],
        )
        .unwrap_err();
        assert_eq!(open, PairError::NotBracketClosed { part: "real form", degrees: (0, 0) });

        let q_open = CRAlgebraPair::from_graded(
            GradedComplexSubspace::full(&alg, 0),
            GradedComplexSubspace::from_elements(
                &alg,
                0,
                &[alg.z(1), parse(&alg, "z^2"), parse(&alg, "zb^2")],
            )
            .unwrap(),
        )
        .unwrap_err();
        assert_eq!(q_open, PairError::NotBracketClosed { part: "isotropy", degrees: (-1, 0) });

        let stray = CRAlgebraPair::new(&alg, 0, &[alg.z(1)], &[]).unwrap_err();
        assert_eq!(stray, PairError::DegreeOutOfRange { degree: -1 });
    }

    #[test]
    fn pair_documents_round_trip() {
        let alg = ContactAlgebra::standard(1);
        let j = alg.complex_structure();
        let g0 = [parse(&alg, "z^2+zb^2"), parse(&alg, "-i*z^2+i*zb^2"), j.clone()];
        let pair = CRAlgebraPair::new(&alg, 0, &g0, &[parse(&alg, "z^2"), j]).unwrap();
        let json = serde_json::to_string(&pair).unwrap();
        assert_eq!(
            json,
            r#"{"r":1,"s":0,"max_degree":0,"g":{"0":["z^2+zb^2","z*zb","-i*z^2+i*zb^2"]},"q":{"-1":["z"],"0":["z*zb","z^2"]}}"#
        );
        let back: CRAlgebraPair = serde_json::from_str(&json).unwrap();
        assert!(back.g_hat().equals(pair.g_hat()).unwrap());
        assert!(back.q().equals(pair.q()).unwrap());
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn real_form_dimensions_match_the_complexification() {
        let alg = ContactAlgebra::new(1, 1);
        let u = build_universal_u(&alg, 2);
        let real = u.real_form().unwrap();
        for d in -2..=2 {
            assert_eq!(real.dim(d), alg.dim(d));
        }
    }
}
