//! Homogeneous models over an abstract core.
//!
//! A model candidate is a graded subalgebra of the contact prolongation with
//! full negative part, presented through its complexification, together with
//! the core it is meant to realise.  Verification checks the defining
//! properties degree by degree and reports each outcome instead of failing
//! hard: membership of the grading element, compatibility of each piece with
//! the holomorphic/antiholomorphic splitting, and the requirement that the
//! extremal projection of the holomorphic part reproduces the core.  A
//! passing candidate can be converted into a CR algebra pair whose isotropy
//! is cut out by the universal one.

mod matrix;
mod search;

pub use matrix::{
    hermitian_signature, sl4r_presentation, standard_matrix_presentations, su13_presentation,
    su22_presentation, EmbedError, MatrixAlgebraPresentation, MatrixEmbedding, MatrixModelDoc,
    MatrixRep, SignatureError,
};
pub use search::{
    bounded_prolongation_check, search_3nondeg_models, BorelSample, ExtensionFinding,
    ExtensionReport, RotationDemo, SearchError, SearchReport,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abscore::{extremal_ambient, extremal_coordinates, extremal_projection, AbstractCore};
use crate::contact::{ContactAlgebra, ContactElement, ParseError};
use crate::cralg::{build_universal_u, CRAlgebraPair, GradedComplexSubspace, PairError};
use crate::linalg::{LinalgError, Matrix, SubspacePresentation};
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("generator of degree {degree} outside the degree budget")]
    DegreeOutOfRange { degree: i64 },
    #[error("the candidate is not conjugation stable in degree {degree}")]
    NotConjugationStable { degree: i64 },
    #[error("the candidate is not closed under the bracket at degrees ({0}, {1})", .degrees.0, .degrees.1)]
    NotClosed { degrees: (i64, i64) },
    #[error("the declared core lives over a different contact algebra")]
    CoreContextMismatch,
    #[error("the declared core has height {height}, beyond the degree budget {max_degree}")]
    CoreBeyondBudget { height: i64, max_degree: i64 },
    #[error("parse failure in a model document: {0}")]
    Parse(String),
    #[error("embedding failure: {0}")]
    Embed(String),
    #[error("core construction failure: {0}")]
    Core(String),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

impl From<LinalgError> for ModelError {
    fn from(e: LinalgError) -> Self {
        ModelError::Linalg(e.to_string())
    }
}

impl From<ParseError> for ModelError {
    fn from(e: ParseError) -> Self {
        ModelError::Parse(e.to_string())
    }
}

/// A graded conjugation-stable subalgebra with full negative part, together
/// with the core it is expected to realise.
#[derive(Clone, Debug)]
pub struct ModelCandidate {
    name: String,
    g_hat: GradedComplexSubspace,
    core: AbstractCore,
}

impl ModelCandidate {
    /// Span the nonnegative part by `generators` and fill the negative
    /// degrees; validates conjugation stability and bracket closure.
    pub fn new(
        name: &str,
        alg: &ContactAlgebra,
        max_degree: i64,
        generators: &[ContactElement],
        core: AbstractCore,
    ) -> Result<Self, ModelError> {
        for x in generators {
            if !(0..=max_degree).contains(&x.degree()) {
                return Err(ModelError::DegreeOutOfRange { degree: x.degree() });
            }
        }
        let mut g_hat = GradedComplexSubspace::from_elements(alg, max_degree, generators)?;
        for d in [-2, -1] {
            g_hat.set_piece(d, SubspacePresentation::full(alg.component(d)));
        }
        ModelCandidate::from_graded(name, g_hat, core)
    }

    /// Wrap explicitly presented graded pieces, re-running all validations.
    pub fn from_graded(
        name: &str,
        g_hat: GradedComplexSubspace,
        core: AbstractCore,
    ) -> Result<Self, ModelError> {
        let alg = g_hat.algebra();
        if core.algebra() != alg {
            return Err(ModelError::CoreContextMismatch);
        }
        if core.height() > g_hat.max_degree() {
            return Err(ModelError::CoreBeyondBudget {
                height: core.height(),
                max_degree: g_hat.max_degree(),
            });
        }
        for d in [-2, -1] {
            if g_hat.dim(d) != alg.dim(d) {
                // Callers constructing via `new` never reach this; explicit
                // pieces may.
                return Err(ModelError::DegreeOutOfRange { degree: d });
            }
        }
        if let Some(d) = g_hat.conjugation_instability()? {
            return Err(ModelError::NotConjugationStable { degree: d });
        }
        if let Some(degrees) = g_hat.closure_violation()? {
            return Err(ModelError::NotClosed { degrees });
        }
        Ok(ModelCandidate { name: name.to_string(), g_hat, core })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &ContactAlgebra {
        self.g_hat.algebra()
    }

    pub fn max_degree(&self) -> i64 {
        self.g_hat.max_degree()
    }

    pub fn g_hat(&self) -> &GradedComplexSubspace {
        &self.g_hat
    }

    pub fn core(&self) -> &AbstractCore {
        &self.core
    }

    /// Real dimensions of the graded pieces; these agree with the complex
    /// dimensions of the conjugation-stable complexification.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        self.g_hat.dims()
    }

    pub fn real_dimension(&self) -> usize {
        self.g_hat.total_dim()
    }

    /// Same underlying subalgebra and core, up to presentation.
    pub fn equivalent_to(&self, other: &ModelCandidate) -> Result<bool, LinalgError> {
        if self.algebra() != other.algebra() || self.max_degree() != other.max_degree() {
            return Ok(false);
        }
        Ok(self.g_hat.equals(&other.g_hat)? && self.core.equals(&other.core)?)
    }

    pub fn document(&self) -> ContactModelDoc {
        let alg = self.algebra();
        let mut g = BTreeMap::new();
        for d in 0..=self.max_degree() {
            g.insert(d, self.g_hat.elements(d).iter().map(|x| x.to_string()).collect());
        }
        let core = (0..=self.core.height())
            .map(|p| self.core.generators_of(p).iter().map(|x| x.to_string()).collect())
            .collect();
        ContactModelDoc {
            name: self.name.clone(),
            r: alg.r(),
            s: alg.s(),
            max_degree: self.max_degree(),
            g,
            core,
        }
    }

    pub fn from_document(doc: &ContactModelDoc) -> Result<Self, ModelError> {
        let alg = ContactAlgebra::new(doc.r, doc.s);
        let mut gens = Vec::new();
        for (d, texts) in &doc.g {
            for t in texts {
                let x = alg.parse(t)?;
                if x.degree() != *d {
                    return Err(ModelError::Parse(format!(
                        "generator {} has degree {}, expected {}",
                        t,
                        x.degree(),
                        d
                    )));
                }
                gens.push(x);
            }
        }
        let mut core_gens = Vec::new();
        for texts in &doc.core {
            let mut layer = Vec::new();
            for t in texts {
                layer.push(alg.parse(t)?);
            }
            core_gens.push(layer);
        }
        let core = AbstractCore::new(alg.clone(), core_gens)
            .map_err(|e| ModelError::Parse(e.to_string()))?;
        ModelCandidate::new(&doc.name, &alg, doc.max_degree, &gens, core)
    }
}

/// JSON object keys are strings, so integer-degree maps cross the
/// serialisation boundary through a string round-trip.
pub(crate) mod degree_keys {
    use std::collections::BTreeMap;

    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<i64, Vec<String>>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        ser.collect_map(map.iter().map(|(d, v)| (d.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<i64, Vec<String>>, D::Error> {
        let raw = BTreeMap::<String, Vec<String>>::deserialize(de)?;
        raw.into_iter()
            .map(|(k, v)| k.parse::<i64>().map(|d| (d, v)).map_err(D::Error::custom))
            .collect()
    }
}

/// Serialisable form of a model candidate presented by contact elements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContactModelDoc {
    pub name: String,
    pub r: usize,
    pub s: usize,
    pub max_degree: i64,
    #[serde(with = "degree_keys")]
    pub g: BTreeMap<i64, Vec<String>>,
    pub core: Vec<Vec<String>>,
}

/// A model document is either a list of contact generators or a matrix
/// presentation to be embedded first.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelDocument {
    Contact(ContactModelDoc),
    Matrix(MatrixModelDoc),
}

/// Degree-by-degree verification record of the model properties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub name: String,
    pub graded_dims: Vec<(i64, usize)>,
    pub real_dimension: usize,
    pub core_height: i64,
    /// The negative part equals the full contact distribution.
    pub negative_part_full: bool,
    /// The grading element lies in the zero-degree piece.
    pub has_grading_element: bool,
    /// Degrees where the piece is not the sum of its holomorphic and
    /// antiholomorphic intersections.
    pub split_failures: Vec<i64>,
    /// Degrees where the extremal projection of the holomorphic part does not
    /// reproduce the declared core component.
    pub core_projection_failures: Vec<i64>,
    /// The complex structure lies in the zero-degree piece.
    pub has_complex_structure: bool,
}

impl ModelReport {
    pub fn is_model(&self) -> bool {
        self.negative_part_full
            && self.has_grading_element
            && self.split_failures.is_empty()
            && self.core_projection_failures.is_empty()
    }
}

/// Conjugate a subspace of a fixed graded component.
fn conjugate_piece(
    alg: &ContactAlgebra,
    degree: i64,
    piece: &SubspacePresentation<GaussianRational>,
) -> Result<SubspacePresentation<GaussianRational>, LinalgError> {
    let rows: Vec<Vec<GaussianRational>> = piece
        .basis_rows()
        .iter()
        .map(|row| alg.coordinates(&alg.element_from_coordinates(degree, row).conjugate()))
        .collect();
    SubspacePresentation::from_spanning(alg.component(degree), &rows)
}

/// Extremal projection of a subspace, as a subspace of the extremal component.
fn extremal_projection_of(
    alg: &ContactAlgebra,
    degree: i64,
    piece: &SubspacePresentation<GaussianRational>,
) -> Result<SubspacePresentation<GaussianRational>, LinalgError> {
    let rows: Vec<Vec<GaussianRational>> = piece
        .basis_rows()
        .iter()
        .map(|row| {
            let x = alg.element_from_coordinates(degree, row);
            extremal_coordinates(alg, &extremal_projection(&x))
        })
        .collect();
    SubspacePresentation::from_spanning(extremal_ambient(alg, degree), &rows)
}

/// Residual of `v` against the row-reduced basis of `piece`.  It vanishes
/// exactly on members and is linear in `v`, so it can be stacked into the
/// coefficient matrix of a membership condition.
pub(crate) fn membership_residual(
    piece: &SubspacePresentation<GaussianRational>,
    v: &[GaussianRational],
) -> Vec<GaussianRational> {
    let mut r = v.to_vec();
    for row in piece.basis_rows() {
        let pivot = row
            .iter()
            .position(|c| !c.is_zero())
            .expect("basis rows are nonzero");
        let c = r[pivot].clone();
        if c.is_zero() {
            continue;
        }
        for (rk, wk) in r.iter_mut().zip(row.iter()) {
            *rk = &*rk - &(&c * wk);
        }
    }
    r
}

/// One prolongation step: the space of `X` in the full component of the given
/// degree with `[X, v]` in `below` for every degree −1 generator `v` and,
/// when a central target is supplied, `[X, T]` in it as well.
pub(crate) fn step_space(
    alg: &ContactAlgebra,
    degree: i64,
    below: &SubspacePresentation<GaussianRational>,
    central: Option<&SubspacePresentation<GaussianRational>>,
) -> Result<SubspacePresentation<GaussianRational>, LinalgError> {
    let dim = alg.dim(degree);
    if dim == 0 {
        return Ok(SubspacePresentation::zero(alg.component(degree)));
    }
    let basis = alg.basis(degree);
    let mut probes: Vec<(ContactElement, &SubspacePresentation<GaussianRational>)> = Vec::new();
    for i in 1..=alg.n() {
        probes.push((alg.z(i), below));
        probes.push((alg.zb(i), below));
    }
    if let Some(target) = central {
        probes.push((alg.center(), target));
    }
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for (v, target) in &probes {
        let residuals: Vec<Vec<GaussianRational>> = basis
            .iter()
            .map(|b| membership_residual(target, &alg.coordinates(&alg.bracket(b, v))))
            .collect();
        let codim = residuals.first().map(|r| r.len()).unwrap_or(0);
        for t in 0..codim {
            let row: Vec<GaussianRational> = residuals.iter().map(|r| r[t].clone()).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(SubspacePresentation::full(alg.component(degree)));
    }
    let kernel = Matrix::from_rows(rows).kernel_basis();
    SubspacePresentation::from_spanning(alg.component(degree), &kernel)
}

/// Span of finitely many elements of one graded component.
pub(crate) fn presentation_of(
    alg: &ContactAlgebra,
    degree: i64,
    elements: &[ContactElement],
) -> Result<SubspacePresentation<GaussianRational>, LinalgError> {
    let rows: Vec<Vec<GaussianRational>> = elements.iter().map(|x| alg.coordinates(x)).collect();
    SubspacePresentation::from_spanning(alg.component(degree), &rows)
}

/// The row-reduced basis of a presentation, as contact elements.
pub(crate) fn presentation_elements(
    alg: &ContactAlgebra,
    degree: i64,
    piece: &SubspacePresentation<GaussianRational>,
) -> Vec<ContactElement> {
    piece
        .basis_rows()
        .iter()
        .map(|row| alg.element_from_coordinates(degree, row))
        .collect()
}

/// Check the model properties of a candidate, reporting every outcome.
pub fn verify_model(c: &ModelCandidate) -> Result<ModelReport, LinalgError> {
    let alg = c.algebra();
    let max = c.max_degree();
    let u = build_universal_u(alg, max);
    let e_coords = alg.coordinates(&alg.grading_element());
    let j_coords = alg.coordinates(&alg.complex_structure());
    let g0 = c.g_hat.piece(0);

    let mut split_failures = Vec::new();
    let mut core_projection_failures = Vec::new();
    for p in 0..=max {
        let gp = c.g_hat.piece(p);
        let up = u.q().piece(p);
        let ubar_p = conjugate_piece(alg, p, up)?;
        let hol = gp.intersect(up)?;
        let antihol = gp.intersect(&ubar_p)?;
        if hol.sum(&antihol)?.dim() != gp.dim() {
            split_failures.push(p);
        }
        let proj = extremal_projection_of(alg, p, &hol)?;
        if !proj.equals(&c.core.component(p))? {
            core_projection_failures.push(p);
        }
    }

    Ok(ModelReport {
        name: c.name.clone(),
        graded_dims: c.graded_dims(),
        real_dimension: c.real_dimension(),
        core_height: c.core.height(),
        negative_part_full: (c.g_hat.dim(-2), c.g_hat.dim(-1)) == (alg.dim(-2), alg.dim(-1)),
        has_grading_element: g0.contains_vector(&e_coords)?,
        split_failures,
        core_projection_failures,
        has_complex_structure: g0.contains_vector(&j_coords)?,
    })
}

/// Turn a candidate into a CR algebra pair: the isotropy is the intersection
/// with the universal one.
pub fn model_to_cralgebra(c: &ModelCandidate) -> Result<CRAlgebraPair, PairError> {
    let u = build_universal_u(c.algebra(), c.max_degree());
    let q = c.g_hat.intersect(u.q())?;
    CRAlgebraPair::from_graded(c.g_hat.clone(), q)
}

/// Embed a matrix-presented algebra into the contact prolongation and wrap
/// it as a candidate over its induced core, the degreewise extremal
/// projection of the holomorphic part.
pub fn prolongation_embed(
    pres: &MatrixAlgebraPresentation,
) -> Result<ModelCandidate, ModelError> {
    let emb = pres.embed().map_err(|e| ModelError::Embed(e.to_string()))?;
    let alg = emb.algebra().clone();
    let pieces = emb.nonnegative_pieces();
    let max_degree = pieces.keys().max().copied().unwrap_or(0);
    let gens: Vec<ContactElement> = pieces.into_values().flatten().collect();
    let g_hat = {
        let mut g = GradedComplexSubspace::from_elements(&alg, max_degree, &gens)?;
        for d in [-2, -1] {
            g.set_piece(d, SubspacePresentation::full(alg.component(d)));
        }
        g
    };
    let u = build_universal_u(&alg, max_degree);
    let mut core_gens: Vec<Vec<ContactElement>> = Vec::new();
    for p in 0..=max_degree {
        let hol = g_hat.piece(p).intersect(u.q().piece(p))?;
        let proj = extremal_projection_of(&alg, p, &hol)?;
        core_gens.push(
            proj.basis_rows()
                .iter()
                .map(|row| crate::abscore::extremal_element(&alg, p, row))
                .collect(),
        );
    }
    while core_gens.last().is_some_and(|v| v.is_empty()) {
        core_gens.pop();
    }
    let core = AbstractCore::new(alg, core_gens).map_err(|e| ModelError::Core(e.to_string()))?;
    ModelCandidate::from_graded(pres.name(), g_hat, core)
}

/// The subalgebra of `ℂE ⊕ S¹·¹` normalising the line of `m` in degree zero,
/// intersected with its own conjugate.  For a core line this is the
/// complexified stabiliser that enters the zero-degree piece of the
/// nonsemisimple models.
pub fn line_normalizer(
    alg: &ContactAlgebra,
    m: &ContactElement,
) -> Result<SubspacePresentation<GaussianRational>, LinalgError> {
    assert_eq!(m.degree(), 0, "the normalised line must sit in degree zero");
    assert!(!m.is_zero(), "the normalised line must be a line");
    // ℂE ⊕ S¹·¹ is exactly the kernel of the complex-structure action on the
    // zero-degree component.
    let pool: Vec<ContactElement> = alg
        .basis(0)
        .into_iter()
        .filter(|b| {
            let dec = b.eigendecompose();
            dec.keys().all(|nu| *nu == 0)
        })
        .collect();
    let w = alg.coordinates(m);
    let dim = alg.dim(0);
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut row = Vec::with_capacity(pool.len());
            for bk in &pool {
                let v = alg.coordinates(&alg.bracket(bk, m));
                row.push(&(&v[a] * &w[b]) - &(&v[b] * &w[a]));
            }
            rows.push(row);
        }
    }
    let kernel = Matrix::from_rows(rows).kernel_basis();
    let span_rows: Vec<Vec<GaussianRational>> = kernel
        .iter()
        .map(|coeffs| {
            let mut x = ContactElement::zero(alg.n(), 0);
            for (c, bk) in coeffs.iter().zip(&pool) {
                x = &x + &bk.scaled(c);
            }
            alg.coordinates(&x)
        })
        .collect();
    let normalizer = SubspacePresentation::from_spanning(alg.component(0), &span_rows)?;
    let conj = conjugate_piece(alg, 0, &normalizer)?;
    normalizer.intersect(&conj)
}

/// Frozen regression data for a builtin model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelExpectations {
    pub graded_dims: &'static [(i64, usize)],
    pub freeman_complex_dims: &'static [usize],
    pub order: i64,
    pub has_complex_structure: bool,
}

#[derive(Clone)]
pub struct BuiltinModel {
    pub name: &'static str,
    pub summary: &'static str,
    pub candidate: ModelCandidate,
    /// The matrix presentation the candidate was embedded from, if any.
    pub presentation: Option<MatrixAlgebraPresentation>,
    pub expect: ModelExpectations,
}

fn matrix_builtin(
    name: &'static str,
    summary: &'static str,
    p: MatrixAlgebraPresentation,
    expect: ModelExpectations,
) -> BuiltinModel {
    let candidate = prolongation_embed(&p).expect("builtin matrix data embeds");
    BuiltinModel { name, summary, candidate, presentation: Some(p), expect }
}

fn line_builtin(
    name: &'static str,
    summary: &'static str,
    r: usize,
    s: usize,
    generator: &str,
    expect: ModelExpectations,
) -> BuiltinModel {
    let alg = ContactAlgebra::new(r, s);
    let m = alg.parse(generator).expect("builtin generator parses");
    let normalizer = line_normalizer(&alg, &m).expect("normaliser computes");
    let mut gens: Vec<ContactElement> = normalizer
        .basis_rows()
        .iter()
        .map(|row| alg.element_from_coordinates(0, row))
        .collect();
    gens.push(m.clone());
    gens.push(m.conjugate());
    let core = AbstractCore::new(alg.clone(), vec![vec![m]]).expect("valid core");
    let candidate =
        ModelCandidate::new(name, &alg, 1, &gens, core).expect("builtin candidate");
    BuiltinModel { name, summary, candidate, presentation: None, expect }
}

fn parse_all(alg: &ContactAlgebra, texts: &[&str]) -> Vec<ContactElement> {
    texts.iter().map(|t| alg.parse(t).expect("builtin generator parses")).collect()
}

/// The builtin model registry: the three simple models, the four
/// nonsemisimple models over a core line, the unique 3-nondegenerate model,
/// and two regression models of Levi-nondegenerate and quadric type.
///
/// Every entry is validated on construction, which includes the matrix
/// embeddings and two prolongation steps at n = 3; the registry is built
/// once and cloned out.
pub fn builtin_models() -> Vec<BuiltinModel> {
    use std::sync::OnceLock;

    static REGISTRY: OnceLock<Vec<BuiltinModel>> = OnceLock::new();
    REGISTRY.get_or_init(build_builtin_models).clone()
}

fn build_builtin_models() -> Vec<BuiltinModel> {
    let mut out = Vec::new();

    let simple_expect = ModelExpectations {
        graded_dims: &[(-2, 1), (-1, 4), (0, 5), (1, 4), (2, 1)],
        freeman_complex_dims: &[11, 9, 8],
        order: 2,
        has_complex_structure: true,
    };
    out.push(matrix_builtin(
        "su22",
        "su(2,2), Levi signature (2,0), complex-symplectic basis",
        su22_presentation(),
        simple_expect.clone(),
    ));
    out.push(matrix_builtin(
        "su13",
        "su(1,3), Levi signature (1,1), complex-symplectic basis",
        su13_presentation(),
        simple_expect.clone(),
    ));
    out.push(matrix_builtin(
        "sl4r",
        "sl(4,R), Levi signature (1,1), complex-Witt basis",
        sl4r_presentation(),
        simple_expect,
    ));

    let line_expect = ModelExpectations {
        graded_dims: &[(-2, 1), (-1, 4), (0, 5), (1, 0)],
        freeman_complex_dims: &[6, 4, 3],
        order: 2,
        has_complex_structure: true,
    };
    out.push(line_builtin(
        "core-definite",
        "core line z1^2 over signature (2,0)",
        2,
        0,
        "z1^2",
        line_expect.clone(),
    ));
    out.push(line_builtin(
        "core-split-positive",
        "core line z1^2 over signature (1,1)",
        1,
        1,
        "z1^2",
        line_expect.clone(),
    ));
    out.push(line_builtin(
        "core-split-negative",
        "core line z2^2 over signature (1,1)",
        1,
        1,
        "z2^2",
        line_expect,
    ));
    out.push(line_builtin(
        "core-null",
        "null core line over signature (1,1)",
        1,
        1,
        "z1^2-z2^2-2*i*z1*z2",
        ModelExpectations {
            graded_dims: &[(-2, 1), (-1, 4), (0, 6), (1, 0)],
            freeman_complex_dims: &[7, 5, 4],
            order: 2,
            has_complex_structure: true,
        },
    ));

    {
        let alg = ContactAlgebra::new(1, 0);
        let m = alg.parse("z^2+z*zb").expect("generator parses");
        let n = alg
            .parse("z^3+2*z^2*zb+z*zb^2+mu^1[-3*i*z-3*i*zb]")
            .expect("generator parses");
        let gens = vec![
            alg.grading_element(),
            m.clone(),
            m.conjugate(),
            n.clone(),
            n.conjugate(),
        ];
        let core = AbstractCore::new(
            alg.clone(),
            vec![
                vec![alg.parse("z^2").expect("core generator parses")],
                vec![alg.parse("z^3").expect("core generator parses")],
            ],
        )
        .expect("valid core");
        let candidate = ModelCandidate::new("three-nondeg", &alg, 2, &gens, core)
            .expect("builtin candidate");
        out.push(BuiltinModel {
            name: "three-nondeg",
            summary: "the unique maximal 3-nondegenerate model, dimension 8",
            candidate,
            presentation: None,
            expect: ModelExpectations {
                graded_dims: &[(-2, 1), (-1, 2), (0, 3), (1, 2), (2, 0)],
                freeman_complex_dims: &[4, 3, 2, 1],
                order: 3,
                has_complex_structure: false,
            },
        });
    }

    {
        let alg = ContactAlgebra::new(3, 0);
        let mut gens = vec![alg.grading_element()];
        for i in 1..=3usize {
            for j in 1..=3usize {
                gens.push(alg.parse(&format!("z{}*zb{}", i, j)).expect("generator parses"));
            }
        }
        // The positive part is the prolongation of 𝔲(3) ⊕ ℝE: degree by
        // degree, everything whose brackets with the Heisenberg part stay
        // inside the piece below.
        let g0 = presentation_of(&alg, 0, &gens).expect("zero piece spans");
        let g1 = step_space(&alg, 1, &g0, None).expect("first prolongation step");
        let g2 = step_space(&alg, 2, &g1, Some(&g0)).expect("second prolongation step");
        assert_eq!(g1.dim(), 6, "su(4,1) degree one piece");
        assert_eq!(g2.dim(), 1, "su(4,1) degree two piece");
        gens.extend(presentation_elements(&alg, 1, &g1));
        gens.extend(presentation_elements(&alg, 2, &g2));
        let core = AbstractCore::heisenberg_only(alg.clone());
        let candidate =
            ModelCandidate::new("su41", &alg, 2, &gens, core).expect("builtin candidate");
        out.push(BuiltinModel {
            name: "su41",
            summary: "su(4,1): the Levi-nondegenerate model over the (3,0) Heisenberg core",
            candidate,
            presentation: None,
            expect: ModelExpectations {
                graded_dims: &[(-2, 1), (-1, 6), (0, 10), (1, 6), (2, 1)],
                freeman_complex_dims: &[20, 17],
                order: 1,
                has_complex_structure: true,
            },
        });
    }

    {
        let alg = ContactAlgebra::new(1, 0);
        let gens = parse_all(
            &alg,
            &["z^2", "z*zb", "zb^2", "mu^0[T]", "mu^1[z]", "mu^1[zb]", "mu^2[mu^0[T]]"],
        );
        let core = AbstractCore::new(
            alg.clone(),
            vec![vec![alg.parse("z^2").expect("core generator parses")]],
        )
        .expect("valid core");
        let candidate =
            ModelCandidate::new("so32", &alg, 2, &gens, core).expect("builtin candidate");
        out.push(BuiltinModel {
            name: "so32",
            summary: "so(3,2): the full prolongation model over the quadric core",
            candidate,
            presentation: None,
            expect: ModelExpectations {
                graded_dims: &[(-2, 1), (-1, 2), (0, 4), (1, 2), (2, 1)],
                freeman_complex_dims: &[7, 6, 5],
                order: 2,
                has_complex_structure: true,
            },
        });
    }

    out
}

pub fn builtin_model(name: &str) -> Option<BuiltinModel> {
    builtin_models().into_iter().find(|m| m.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cralg::{freeman_profile, FreemanStatus};

    #[test]
    fn every_builtin_verifies_with_the_expected_shape() {
        for b in builtin_models() {
            let report = verify_model(&b.candidate).unwrap();
            assert!(report.is_model(), "{}: {:?}", b.name, report);
            assert_eq!(report.graded_dims, b.expect.graded_dims, "{}", b.name);
            assert_eq!(
                report.has_complex_structure, b.expect.has_complex_structure,
                "{}",
                b.name
            );
        }
    }

    #[test]
    fn every_builtin_converts_to_a_pair_with_the_expected_freeman_data() {
        for b in builtin_models() {
            let pair = model_to_cralgebra(&b.candidate).unwrap();
            let chain = pair.freeman_sequence().unwrap();
            assert_eq!(
                chain.total_dims(),
                b.expect.freeman_complex_dims.to_vec(),
                "{}",
                b.name
            );
            assert_eq!(
                chain.status,
                FreemanStatus::FinitelyNondegenerate { order: b.expect.order },
                "{}",
                b.name
            );
            assert_eq!(
                pair.nondegeneracy_order().unwrap(),
                Some(b.expect.order),
                "{}",
                b.name
            );
            assert_eq!(b.expect.order, b.candidate.core().height() + 2, "{}", b.name);
            // The chain members agree with the closed form at every index.
            for (idx, term) in chain.terms.iter().enumerate() {
                let expected = freeman_profile(pair.q(), idx as i64 - 1).unwrap();
                assert!(term.equals(&expected).unwrap(), "{} at index {}", b.name, idx);
            }
        }
    }

    #[test]
    fn every_builtin_extracts_its_declared_core() {
        for b in builtin_models() {
            let pair = model_to_cralgebra(&b.candidate).unwrap();
            let core = pair.extract_core().unwrap();
            assert!(core.equals(b.candidate.core()).unwrap(), "{}", b.name);
        }
    }

    #[test]
    fn simple_model_isotropy_matches_the_parabolic_shape() {
        // Degreewise complex dimensions (2, 4, 4, 1) of the isotropy, for all
        // three simple models.
        for name in ["su22", "su13", "sl4r"] {
            let b = builtin_model(name).unwrap();
            let pair = model_to_cralgebra(&b.candidate).unwrap();
            assert_eq!(
                pair.q().dims(),
                vec![(-2, 0), (-1, 2), (0, 4), (1, 4), (2, 1)],
                "{}",
                name
            );
        }
    }

    #[test]
    fn embedded_simple_cores_are_the_expected_lines() {
        let su22 = builtin_model("su22").unwrap();
        let alg = su22.candidate.algebra().clone();
        let expected = AbstractCore::new(
            alg.clone(),
            vec![vec![alg.parse("z1*z2").unwrap()]],
        )
        .unwrap();
        assert!(su22.candidate.core().equals(&expected).unwrap());

        let su13 = builtin_model("su13").unwrap();
        let alg = su13.candidate.algebra().clone();
        let expected =
            AbstractCore::new(alg.clone(), vec![vec![alg.parse("z1*z2").unwrap()]]).unwrap();
        assert!(su13.candidate.core().equals(&expected).unwrap());

        let sl4r = builtin_model("sl4r").unwrap();
        let alg = sl4r.candidate.algebra().clone();
        let expected =
            AbstractCore::new(alg.clone(), vec![vec![alg.parse("z1^2-z2^2").unwrap()]]).unwrap();
        assert!(sl4r.candidate.core().equals(&expected).unwrap());
    }

    #[test]
    fn line_normalizers_have_the_expected_spans() {
        // Definite signature, core line z1²: the normaliser adds one rotation
        // to the span of the grading and complex-structure elements.
        let alg = ContactAlgebra::new(2, 0);
        let m = alg.parse("z1^2").unwrap();
        let nz = line_normalizer(&alg, &m).unwrap();
        assert_eq!(nz.dim(), 3);
        for gen in ["mu^0[-2*T]", "2*z1*zb1+2*z2*zb2", "2*z1*zb1-2*z2*zb2"] {
            let x = alg.parse(gen).unwrap();
            assert!(nz.contains_vector(&alg.coordinates(&x)).unwrap(), "{}", gen);
        }

        // Split signature, null core line: the normaliser is four-dimensional.
        let alg = ContactAlgebra::new(1, 1);
        let m = alg.parse("z1^2-z2^2-2*i*z1*z2").unwrap();
        let nz = line_normalizer(&alg, &m).unwrap();
        assert_eq!(nz.dim(), 4);
    }

    #[test]
    fn null_line_core_brackets_vanish() {
        // The null generator commutes with its conjugate, so the degree-zero
        // piece closes without a correction term.
        let alg = ContactAlgebra::new(1, 1);
        let m = alg.parse("z1^2-z2^2-2*i*z1*z2").unwrap();
        assert!(alg.bracket(&m, &m.conjugate()).is_zero());
    }

    #[test]
    fn three_nondeg_closes_and_needs_no_degree_two_piece() {
        let b = builtin_model("three-nondeg").unwrap();
        let alg = b.candidate.algebra().clone();
        let n = alg.parse("z^3+2*z^2*zb+z*zb^2+mu^1[-3*i*z-3*i*zb]").unwrap();
        // The top piece is trivial precisely because N commutes with its
        // conjugate.
        assert!(alg.bracket(&n, &n.conjugate()).is_zero());
        assert_eq!(b.candidate.g_hat().dim(2), 0);
    }

    #[test]
    fn three_nondeg_zero_degree_bracket_closes_through_the_conjugate() {
        let alg = ContactAlgebra::new(1, 0);
        let m = alg.parse("z^2+z*zb").unwrap();
        let mb = m.conjugate();
        let lhs = alg.bracket(&m, &mb);
        let minus_i = GaussianRational::imag(-1, 1);
        let rhs = (&m + &mb).scaled(&minus_i);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn a_truncated_zero_degree_piece_fails_the_core_projection() {
        // Keeping only the grading element cannot project onto a nonzero
        // core component.
        let alg = ContactAlgebra::new(1, 0);
        let core = AbstractCore::new(alg.clone(), vec![vec![alg.parse("z^2").unwrap()]]).unwrap();
        let candidate =
            ModelCandidate::new("undersized", &alg, 0, &[alg.grading_element()], core).unwrap();
        let report = verify_model(&candidate).unwrap();
        assert!(!report.is_model());
        assert_eq!(report.core_projection_failures, vec![0]);
        assert!(report.has_grading_element);
    }

    #[test]
    fn a_non_split_piece_is_reported() {
        // The line through z² + z̄² is conjugation stable and closes, but is
        // not the sum of its holomorphic and antiholomorphic parts.
        let alg = ContactAlgebra::new(1, 0);
        let x = alg.parse("z^2+zb^2").unwrap();
        let core = AbstractCore::new(alg.clone(), vec![vec![alg.parse("z^2").unwrap()]]).unwrap();
        let candidate = ModelCandidate::new(
            "non-split",
            &alg,
            0,
            &[alg.grading_element(), x],
            core,
        )
        .unwrap();
        let report = verify_model(&candidate).unwrap();
        assert!(!report.is_model());
        assert_eq!(report.split_failures, vec![0]);
        assert_eq!(report.core_projection_failures, vec![0]);
    }

    #[test]
    fn candidates_must_close_under_the_bracket() {
        // z² alone does not close: its bracket with the conjugate leaves the
        // span.
        let alg = ContactAlgebra::new(1, 0);
        let core = AbstractCore::new(alg.clone(), vec![vec![alg.parse("z^2").unwrap()]]).unwrap();
        let gens = vec![alg.parse("z^2").unwrap(), alg.parse("zb^2").unwrap()];
        let err = ModelCandidate::new("open", &alg, 0, &gens, core).unwrap_err();
        assert!(matches!(err, ModelError::NotClosed { .. }));
    }

    #[test]
    fn candidates_must_be_conjugation_stable() {
        let alg = ContactAlgebra::new(1, 0);
        let core = AbstractCore::new(alg.clone(), vec![vec![alg.parse("z^2").unwrap()]]).unwrap();
        let err = ModelCandidate::new(
            "lopsided",
            &alg,
            0,
            &[alg.parse("z^2").unwrap()],
            core,
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::NotConjugationStable { degree: 0 }));
    }

    #[test]
    fn model_documents_round_trip() {
        for b in builtin_models() {
            let doc = b.candidate.document();
            let text = serde_json::to_string(&doc).unwrap();
            let parsed: ContactModelDoc = serde_json::from_str(&text).unwrap();
            let restored = ModelCandidate::from_document(&parsed).unwrap();
            assert!(restored.equivalent_to(&b.candidate).unwrap(), "{}", b.name);
        }
    }

    #[test]
    fn matrix_documents_embed_to_the_same_candidate() {
        let p = su13_presentation();
        let text = serde_json::to_string(&ModelDocument::Matrix(p.document())).unwrap();
        let doc: ModelDocument = serde_json::from_str(&text).unwrap();
        let ModelDocument::Matrix(mdoc) = doc else { panic!("wrong kind") };
        let q = MatrixAlgebraPresentation::from_document(&mdoc).unwrap();
        let emb = q.embed().unwrap();
        assert_eq!(emb.grading_image(), &emb.algebra().grading_element());
    }
}
