//! The bounded model search in the n = 1 definite contact algebra: the
//! degree-by-degree elimination that pins down the unique 3-nondegenerate
//! model, and a bounded prolongation check for graded extensions of a
//! verified candidate.
//!
//! The eliminations are exact.  Free parameters are carried as sparse
//! polynomials in α, β and their conjugates with Gaussian-rational
//! coefficients, so the displayed obstructions (the unit-circle residual,
//! the relation 2β = 5iα, the nonlinear system in α) come out of the same
//! linear algebra that handles numeric coordinates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::abscore::{extremal_coordinates, extremal_projection, AbstractCore};
use crate::contact::{ContactAlgebra, ContactElement, LinearAutomorphism};
use crate::cralg::build_universal_u;
use crate::linalg::{Ambient, LinalgError, Matrix, SubspacePresentation};
use crate::scalar::GaussianRational;

use super::{
    conjugate_piece, membership_residual, presentation_elements, presentation_of, step_space,
    ContactModelDoc, ModelCandidate, ModelError,
};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("the elimination runs to degree {needed}; a budget of {given} cannot reach it")]
    BudgetExceeded { given: i64, needed: i64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
}

const SYMBOLS: [&str; 4] = ["alpha", "conj(alpha)", "beta", "conj(beta)"];

/// Sparse polynomials in the search parameters, keyed by the exponents of
/// (α, ᾱ, β, β̄).  Only tiny degrees occur.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct ParamPoly(BTreeMap<[u8; 4], GaussianRational>);

impl ParamPoly {
    fn zero() -> Self {
        ParamPoly(BTreeMap::new())
    }

    fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        ParamPoly(terms)
    }

    fn one() -> Self {
        ParamPoly::constant(GaussianRational::one())
    }

    fn symbol(k: usize) -> Self {
        let mut key = [0u8; 4];
        key[k] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(key, GaussianRational::one());
        ParamPoly(terms)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn coefficient(&self, key: [u8; 4]) -> GaussianRational {
        self.0.get(&key).cloned().unwrap_or_else(GaussianRational::zero)
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.0.clone();
        for (k, c) in &other.0 {
            let entry = terms.entry(*k).or_insert_with(GaussianRational::zero);
            *entry = &*entry + c;
        }
        terms.retain(|_, c| !c.is_zero());
        ParamPoly(terms)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-GaussianRational::one()))
    }

    fn scaled(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly(self.0.iter().map(|(k, w)| (*k, w * c)).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = ParamPoly::zero();
        for (ka, ca) in &self.0 {
            for (kb, cb) in &other.0 {
                let key = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3]];
                let entry = out.0.entry(key).or_insert_with(GaussianRational::zero);
                *entry = &*entry + &(ca * cb);
            }
        }
        out.0.retain(|_, c| !c.is_zero());
        out
    }

    /// Conjugation swaps each parameter with its conjugate partner.
    fn conjugate(&self) -> Self {
        ParamPoly(
            self.0
                .iter()
                .map(|(k, c)| ([k[1], k[0], k[3], k[2]], c.conj()))
                .collect(),
        )
    }

    fn eval(&self, alpha: &GaussianRational, beta: &GaussianRational) -> GaussianRational {
        let values = [alpha.clone(), alpha.conj(), beta.clone(), beta.conj()];
        let mut out = GaussianRational::zero();
        for (k, c) in &self.0 {
            let mut term = c.clone();
            for (slot, e) in k.iter().enumerate() {
                for _ in 0..*e {
                    term = &term * &values[slot];
                }
            }
            out = &out + &term;
        }
        out
    }
}

impl std::fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&[u8; 4]> = self.0.keys().collect();
        keys.sort_by_key(|k| {
            let total: u16 = k.iter().map(|&e| e as u16).sum();
            (total, std::cmp::Reverse(**k))
        });
        let mut out = String::new();
        for k in keys {
            let term = term_string(&self.0[k], &monomial_string(k));
            if out.is_empty() || term.starts_with('-') {
                out.push_str(&term);
            } else {
                out.push('+');
                out.push_str(&term);
            }
        }
        write!(f, "{}", out)
    }
}

fn monomial_string(key: &[u8; 4]) -> String {
    let mut parts = Vec::new();
    for (name, &e) in SYMBOLS.iter().zip(key.iter()) {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

fn term_string(c: &GaussianRational, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    if *c == GaussianRational::one() {
        return mono.to_string();
    }
    if *c == -GaussianRational::one() {
        return format!("-{mono}");
    }
    if !c.re.is_zero() && !c.im.is_zero() {
        format!("({c})*{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

/// A combination of fixed contact elements with polynomial coefficients.
type SymCombo = Vec<(ContactElement, ParamPoly)>;

fn sym_bracket(alg: &ContactAlgebra, x: &SymCombo, y: &SymCombo) -> SymCombo {
    let mut out = Vec::new();
    for (xe, xp) in x {
        for (ye, yp) in y {
            let b = alg.bracket(xe, ye);
            if !b.is_zero() {
                out.push((b, xp.mul(yp)));
            }
        }
    }
    out
}

fn sym_coordinates(alg: &ContactAlgebra, degree: i64, x: &SymCombo) -> Vec<ParamPoly> {
    let mut out = vec![ParamPoly::zero(); alg.dim(degree)];
    for (xe, xp) in x {
        assert_eq!(xe.degree(), degree, "mixed degrees in a combination");
        for (k, c) in alg.coordinates(xe).iter().enumerate() {
            if !c.is_zero() {
                out[k] = out[k].add(&xp.scaled(c));
            }
        }
    }
    out
}

/// Coordinate index of a single basis term, located by parsing it.
fn coordinate_index(alg: &ContactAlgebra, degree: i64, expr: &str) -> usize {
    let x = alg.parse(expr).expect("index expression parses");
    assert_eq!(x.degree(), degree);
    let coords = alg.coordinates(&x);
    let mut hits = coords.iter().enumerate().filter(|(_, c)| !c.is_zero());
    let (k, _) = hits.next().expect("nonzero expression");
    assert!(hits.next().is_none(), "expression must be a single basis term");
    k
}

#[derive(Debug, Clone, Serialize)]
pub struct BorelSample {
    pub alpha: String,
    pub residual: String,
    pub closes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RotationDemo {
    pub multiplier: String,
    pub from_alpha: String,
    pub to_alpha: String,
    pub verified: bool,
}

/// Everything the degree-by-degree elimination establishes, in the order it
/// is established.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub max_degree: i64,
    /// The closure obstruction of ⟨E, z²+αzz̄, z̄²+ᾱzz̄⟩ as a polynomial in α.
    pub borel_residual: String,
    pub borel_samples: Vec<BorelSample>,
    /// A rational rotation conjugating the α = 1 solution to another circle
    /// point, exhibiting the circle action on the closure locus.
    pub rotation: RotationDemo,
    pub gtilde1_dim: usize,
    pub gtilde1_basis: Vec<String>,
    /// Determinant of the quartic pairing that eliminates the V, W
    /// directions from the degree-one piece.
    pub quartic_pairing_determinant: String,
    pub beta_relation: String,
    /// The normalized nonlinear system in α cutting out the closure locus.
    pub residual_system: Vec<String>,
    pub alpha_unique_zero: bool,
    /// Value of the first residual at α = 1, witnessing inconsistency there.
    pub inconsistency_at_one: String,
    pub degree_two_rank: usize,
    pub degree_two_determinant: String,
    /// Kernel dimensions of the prolongation steps above degree two.
    pub higher_kernels: Vec<(i64, usize)>,
    pub model: ContactModelDoc,
}

/// Run the three-step elimination and return the unique model together with
/// the certificates produced along the way.  The budget must reach degree 2,
/// where the last obstruction lives; degrees beyond that only add kernel
/// checks.
pub fn search_3nondeg_models(max_degree: i64) -> Result<SearchReport, SearchError> {
    if max_degree < 2 {
        return Err(SearchError::BudgetExceeded { given: max_degree, needed: 2 });
    }
    let alg = ContactAlgebra::new(1, 0);
    let e = alg.grading_element();
    let z2 = alg.parse("z^2").expect("generator parses");
    let zzb = alg.parse("z*zb").expect("generator parses");
    let zb2 = alg.parse("zb^2").expect("generator parses");
    let alpha = ParamPoly::symbol(0);
    let alphab = ParamPoly::symbol(1);
    let beta = ParamPoly::symbol(2);
    let betab = ParamPoly::symbol(3);

    // Step 1.  The zero piece of a candidate is spanned by E together with
    // M_α = z² + αzz̄ and its conjugate; bracketing M_α with its conjugate
    // and reducing against the span leaves a single coordinate, quadratic
    // in the parameter.
    let m_sym: SymCombo = vec![(z2.clone(), ParamPoly::one()), (zzb.clone(), alpha.clone())];
    let mb_sym: SymCombo = vec![(zb2.clone(), ParamPoly::one()), (zzb.clone(), alphab.clone())];
    let i_z2 = coordinate_index(&alg, 0, "z^2");
    let i_zb2 = coordinate_index(&alg, 0, "zb^2");
    let i_zzb = coordinate_index(&alg, 0, "z*zb");
    let br = sym_coordinates(&alg, 0, &sym_bracket(&alg, &m_sym, &mb_sym));
    let m_coords = sym_coordinates(&alg, 0, &m_sym);
    let mb_coords = sym_coordinates(&alg, 0, &mb_sym);
    let x = br[i_z2].clone();
    let y = br[i_zb2].clone();
    let mut borel = ParamPoly::zero();
    for (k, c) in br.iter().enumerate() {
        let r = c.sub(&x.mul(&m_coords[k])).sub(&y.mul(&mb_coords[k]));
        if k == i_zzb {
            borel = r;
        } else {
            assert!(r.is_zero(), "the closure residual concentrates in one coordinate");
        }
    }
    assert!(!borel.is_zero());

    let mut borel_samples = Vec::new();
    let zero = GaussianRational::zero();
    for (re, im) in [
        ((1, 1), (0, 1)),
        ((-1, 1), (0, 1)),
        ((0, 1), (1, 1)),
        ((0, 1), (-1, 1)),
        ((3, 5), (4, 5)),
        ((-3, 5), (4, 5)),
        ((5, 13), (-12, 13)),
        ((8, 17), (15, 17)),
        ((0, 1), (0, 1)),
        ((2, 1), (0, 1)),
        ((1, 1), (1, 1)),
        ((1, 2), (0, 1)),
    ] {
        let a = &GaussianRational::rat(re.0, re.1) + &GaussianRational::imag(im.0, im.1);
        let r = borel.eval(&a, &zero);
        let closes = r.is_zero();
        let on_circle = &a * &a.conj() == GaussianRational::one();
        assert_eq!(closes, on_circle, "closure must cut out the unit circle at {a}");
        borel_samples.push(BorelSample {
            alpha: a.to_string(),
            residual: r.to_string(),
            closes,
        });
    }

    // A rational circle rotation: z ↦ λz with |λ| = 1 is a real contact
    // automorphism with multiplier 1, and it moves the closure parameter by
    // λ̄², so every solution is equivalent to α = 1.
    let lambda = &GaussianRational::rat(3, 5) + &GaussianRational::imag(4, 5);
    let rot = LinearAutomorphism::diagonal(&alg, vec![lambda.clone(), lambda.conj()])
        .map_err(ModelError::Parse)?;
    let to_alpha = &lambda.conj() * &lambda.conj();
    let m_one = &z2 + &zzb;
    let m_target = &z2 + &zzb.scaled(&to_alpha);
    let from_span = presentation_of(&alg, 0, &[e.clone(), m_one.clone(), m_one.conjugate()])?;
    let image_span = presentation_of(
        &alg,
        0,
        &[rot.apply(&e), rot.apply(&m_one), rot.apply(&m_one.conjugate())],
    )?;
    let target_span =
        presentation_of(&alg, 0, &[e.clone(), m_target.clone(), m_target.conjugate()])?;
    let rotation = RotationDemo {
        multiplier: rot.multiplier().to_string(),
        from_alpha: GaussianRational::one().to_string(),
        to_alpha: to_alpha.to_string(),
        verified: rot.is_real()
            && *rot.multiplier() == GaussianRational::one()
            && image_span.equals(&target_span)?
            && !image_span.equals(&from_span)?
            && borel.eval(&to_alpha, &zero).is_zero(),
    };

    // From here on the zero piece is fixed at α = 1.
    let m = m_one;
    let g0 = from_span;

    // Step 2.  The degree-one candidates sit inside the one-step space over
    // ĝ⁰, which is four-dimensional and spanned by N, N̄, V, W.
    let gt1 = step_space(&alg, 1, &g0, None)?;
    let n_elt = alg
        .parse("z^3+2*z^2*zb+z*zb^2+mu^1[-3*i*z-3*i*zb]")
        .expect("generator parses");
    let v_elt = alg
        .parse("z^2*zb+z*zb^2+mu^1[1/2*i*z-1/2*i*zb]")
        .expect("generator parses");
    let w_elt = alg.parse("mu^1[z]+mu^1[zb]").expect("generator parses");
    let nb_elt = n_elt.conjugate();
    let paper_basis = [&n_elt, &nb_elt, &v_elt, &w_elt];
    for x in paper_basis {
        assert!(
            gt1.contains_vector(&alg.coordinates(x))?,
            "a displayed generator must solve the degree-one conditions"
        );
    }
    let paper_span = presentation_of(
        &alg,
        1,
        &[n_elt.clone(), nb_elt.clone(), v_elt.clone(), w_elt.clone()],
    )?;
    assert!(gt1.equals(&paper_span)?);
    let gtilde1_basis: Vec<String> = paper_basis.iter().map(|x| x.to_string()).collect();

    // Pairing the candidates against V and W in the extremal quartic
    // coordinates removes the γV + δW ambiguity: the 2×2 system in (γ, δ)
    // is nonsingular.
    let i_z4 = coordinate_index(&alg, 2, "z^4");
    let i_zb4 = coordinate_index(&alg, 2, "zb^4");
    for (a, b) in [(&v_elt, &w_elt), (&v_elt, &v_elt), (&w_elt, &w_elt)] {
        let c = alg.coordinates(&alg.bracket(a, b));
        assert!(c[i_z4].is_zero() && c[i_zb4].is_zero());
    }
    let c_nv = alg.coordinates(&alg.bracket(&n_elt, &v_elt))[i_z4].clone();
    let c_nw = alg.coordinates(&alg.bracket(&n_elt, &w_elt))[i_z4].clone();
    let cb_nv = alg.coordinates(&alg.bracket(&nb_elt, &v_elt))[i_zb4].clone();
    let cb_nw = alg.coordinates(&alg.bracket(&nb_elt, &w_elt))[i_zb4].clone();
    let pairing_det = Matrix::from_rows(vec![
        vec![c_nv.clone(), c_nw.clone()],
        vec![cb_nv, cb_nw],
    ])
    .det();
    assert!(!pairing_det.is_zero());

    // With the ambiguity gone, parametrize the degree-one piece by
    // N_αβ = N + ᾱV + β̄W and its conjugate.  The extremal quartic
    // coordinate of their bracket forces 2β = 5iα.
    let n_ab: SymCombo = vec![
        (n_elt.clone(), ParamPoly::one()),
        (v_elt.clone(), alphab.clone()),
        (w_elt.clone(), betab.clone()),
    ];
    let nb_ab: SymCombo = vec![
        (nb_elt.clone(), ParamPoly::one()),
        (v_elt.clone(), alpha.clone()),
        (w_elt.clone(), beta.clone()),
    ];
    let q2 = sym_coordinates(&alg, 2, &sym_bracket(&alg, &n_ab, &nb_ab));
    let p10 = q2[i_z4].clone();
    let p01 = q2[i_zb4].clone();
    // The bracket of a candidate with its conjugate is purely imaginary, so
    // the two extremal coordinates are negated conjugates of each other.
    assert_eq!(p01, p10.conjugate().scaled(&-GaussianRational::one()));
    let expected = beta
        .scaled(&GaussianRational::rat(1, 2))
        .sub(&alpha.scaled(&GaussianRational::imag(5, 4)));
    assert_eq!(p10, expected, "the quartic coordinate must be (1/2)β − (5/4)iα");
    let beta_relation = "2*beta = 5*i*alpha".to_string();

    // Substitute β = (5/2)iα and require [2M, N̄_αβ] to fall back into the
    // degree-one span.  After matching the leading cubic coordinates, the
    // residuals normalize to a nonlinear system in α alone.
    let beta_sub = alpha.scaled(&GaussianRational::imag(5, 2));
    let n_s: SymCombo = vec![
        (n_elt.clone(), ParamPoly::one()),
        (v_elt.clone(), alphab.clone()),
        (w_elt.clone(), beta_sub.conjugate()),
    ];
    let nb_s: SymCombo = vec![
        (nb_elt.clone(), ParamPoly::one()),
        (v_elt.clone(), alpha.clone()),
        (w_elt.clone(), beta_sub.clone()),
    ];
    assert!(sym_coordinates(&alg, 2, &sym_bracket(&alg, &n_s, &nb_s))[i_z4].is_zero());
    let i_z3 = coordinate_index(&alg, 1, "z^3");
    let i_zb3 = coordinate_index(&alg, 1, "zb^3");
    let two_m: SymCombo = vec![(m.scaled(&GaussianRational::int(2)), ParamPoly::one())];
    let br1 = sym_coordinates(&alg, 1, &sym_bracket(&alg, &two_m, &nb_s));
    let n_s_coords = sym_coordinates(&alg, 1, &n_s);
    let nb_s_coords = sym_coordinates(&alg, 1, &nb_s);
    assert_eq!(n_s_coords[i_z3], ParamPoly::one());
    assert!(n_s_coords[i_zb3].is_zero());
    assert_eq!(nb_s_coords[i_zb3], ParamPoly::one());
    assert!(nb_s_coords[i_z3].is_zero());
    let xs = br1[i_z3].clone();
    let ys = br1[i_zb3].clone();
    let mut system: Vec<ParamPoly> = Vec::new();
    for k in 0..br1.len() {
        let r = br1[k]
            .sub(&xs.mul(&n_s_coords[k]))
            .sub(&ys.mul(&nb_s_coords[k]));
        if r.is_zero() {
            continue;
        }
        let lead = r.coefficient([1, 0, 0, 0]);
        assert!(!lead.is_zero(), "each residual must see the α direction");
        let normalized = r.scaled(&(&GaussianRational::int(2) / &lead));
        if !system.contains(&normalized) {
            system.push(normalized);
        }
    }
    assert_eq!(system.len(), 3, "the paper's system has three distinct members");
    let residual_system: Vec<String> = system.iter().map(|p| p.to_string()).collect();

    // Exact elimination: the residuals span the monomials {α, ᾱ, αᾱ}, and
    // the pure α functional lies in their row span, so every common zero has
    // α = 0; the system is satisfied there.
    let monomials = [[1u8, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0]];
    for p in &system {
        for key in p.0.keys() {
            assert!(monomials.contains(key), "unexpected monomial in the residual system");
        }
    }
    let rows: Vec<Vec<GaussianRational>> = system
        .iter()
        .map(|p| monomials.iter().map(|k| p.coefficient(*k)).collect())
        .collect();
    let span = SubspacePresentation::from_spanning(Ambient::new("borel system", 3), &rows)?;
    let alpha_functional = vec![
        GaussianRational::one(),
        GaussianRational::zero(),
        GaussianRational::zero(),
    ];
    let alpha_unique_zero = span.contains_vector(&alpha_functional)?
        && system.iter().all(|p| p.eval(&zero, &zero).is_zero());
    let one = GaussianRational::one();
    let at_one = system[0].eval(&one, &zero);
    assert!(!at_one.is_zero(), "α = 1 must be inconsistent");
    let inconsistency_at_one = at_one.to_string();

    // Step 3.  With α = 0 the degree-one piece is ⟨N, N̄⟩.  A degree-two
    // element must keep its bracket with T in ĝ⁰ and carry no extremal
    // quartic part; that shape space is six-dimensional.
    let g1 = presentation_of(&alg, 1, &[n_elt.clone(), nb_elt.clone()])?;
    let basis2 = alg.basis(2);
    let t_elt = alg.center();
    let mut shape_rows: Vec<Vec<GaussianRational>> = Vec::new();
    let central_residuals: Vec<Vec<GaussianRational>> = basis2
        .iter()
        .map(|b| membership_residual(&g0, &alg.coordinates(&alg.bracket(b, &t_elt))))
        .collect();
    for t in 0..alg.dim(0) {
        let row: Vec<GaussianRational> =
            central_residuals.iter().map(|r| r[t].clone()).collect();
        if row.iter().any(|c| !c.is_zero()) {
            shape_rows.push(row);
        }
    }
    for idx in [i_z4, i_zb4] {
        let mut row = vec![GaussianRational::zero(); alg.dim(2)];
        row[idx] = GaussianRational::one();
        shape_rows.push(row);
    }
    let shape = SubspacePresentation::from_spanning(
        alg.component(2),
        &Matrix::from_rows(shape_rows).kernel_basis(),
    )?;
    let ansatz: Vec<ContactElement> = [
        "z^3*zb",
        "z^2*zb^2",
        "z*zb^3",
        "mu^2[z^2+z*zb]",
        "mu^2[zb^2+z*zb]",
        "mu^2[mu^0[T]]",
    ]
    .iter()
    .map(|s| alg.parse(s).expect("ansatz parses"))
    .collect();
    assert_eq!(shape.dim(), 6);
    assert!(shape.equals(&presentation_of(&alg, 2, &ansatz)?)?);
    for x in &ansatz {
        assert!(extremal_projection(x).is_zero());
    }

    // Bracketing the shape space with z and z̄ must reproduce multiples of
    // N and N̄; matching the cubic leading coordinates and collecting the
    // leftover coordinates gives the final linear system.
    let n_cs = alg.coordinates(&n_elt);
    let nb_cs = alg.coordinates(&nb_elt);
    assert_eq!(n_cs[i_z3], GaussianRational::one());
    assert_eq!(nb_cs[i_zb3], GaussianRational::one());
    let mut final_rows: Vec<Vec<GaussianRational>> = Vec::new();
    for (probe, lead_idx, lead_cs) in [(alg.z(1), i_z3, &n_cs), (alg.zb(1), i_zb3, &nb_cs)] {
        let brackets: Vec<Vec<GaussianRational>> = ansatz
            .iter()
            .map(|x| alg.coordinates(&alg.bracket(x, &probe)))
            .collect();
        for t in 0..alg.dim(1) {
            if t == lead_idx {
                continue;
            }
            let row: Vec<GaussianRational> = brackets
                .iter()
                .map(|v| &v[t] - &(&v[lead_idx] * &lead_cs[t]))
                .collect();
            if row.iter().any(|c| !c.is_zero()) {
                final_rows.push(row);
            }
        }
    }
    let full = Matrix::from_rows(final_rows.clone());
    let degree_two_rank = full.rank();
    assert_eq!(degree_two_rank, ansatz.len(), "the degree-two system must have full rank");
    assert!(full.kernel_basis().is_empty());
    let mut chosen: Vec<Vec<GaussianRational>> = Vec::new();
    for row in &final_rows {
        if chosen.len() == ansatz.len() {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(row.clone());
        if Matrix::from_rows(trial.clone()).rank() > chosen.len() {
            chosen = trial;
        }
    }
    let degree_two_det = Matrix::from_rows(chosen).det();
    assert!(!degree_two_det.is_zero());

    // Above degree two every one-step space collapses onto zero.
    let mut pieces: BTreeMap<i64, SubspacePresentation<GaussianRational>> = BTreeMap::new();
    pieces.insert(0, g0);
    pieces.insert(1, g1);
    pieces.insert(2, SubspacePresentation::zero(alg.component(2)));
    let mut higher_kernels = Vec::new();
    for d in 3..=max_degree {
        let below = pieces[&(d - 1)].clone();
        let central = pieces[&(d - 2)].clone();
        let h = step_space(&alg, d, &below, Some(&central))?;
        higher_kernels.push((d, h.dim()));
        pieces.insert(d, h);
    }

    let core = AbstractCore::new(
        alg.clone(),
        vec![
            vec![z2.clone()],
            vec![alg.parse("z^3").expect("core generator parses")],
        ],
    )
    .map_err(|err| ModelError::Core(err.to_string()))?;
    let gens = vec![e, m.clone(), m.conjugate(), n_elt.clone(), nb_elt.clone()];
    let candidate = ModelCandidate::new("three-nondeg", &alg, 2, &gens, core)?;

    Ok(SearchReport {
        max_degree,
        borel_residual: borel.to_string(),
        borel_samples,
        rotation,
        gtilde1_dim: gt1.dim(),
        gtilde1_basis,
        quartic_pairing_determinant: pairing_det.to_string(),
        beta_relation,
        residual_system,
        alpha_unique_zero,
        inconsistency_at_one,
        degree_two_rank,
        degree_two_determinant: degree_two_det.to_string(),
        higher_kernels,
        model: candidate.document(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionFinding {
    pub degree: i64,
    pub dim: usize,
    pub witnesses: Vec<String>,
}

/// Bounded evidence about graded extensions of a candidate: one-step spaces
/// above its top degree, filtered by the split and core-projection
/// conditions so only admissible extensions count.
#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub name: String,
    pub top_degree: i64,
    pub checked_to: i64,
    pub findings: Vec<ExtensionFinding>,
    pub note: String,
}

impl ExtensionReport {
    pub fn extension_found(&self) -> bool {
        !self.findings.is_empty()
    }
}

/// The part of a piece with vanishing extremal projection.
fn extremal_free_part(
    alg: &ContactAlgebra,
    degree: i64,
    piece: &SubspacePresentation<GaussianRational>,
) -> Result<SubspacePresentation<GaussianRational>, LinalgError> {
    let rows = piece.basis_rows();
    if rows.is_empty() {
        return Ok(piece.clone());
    }
    let projections: Vec<Vec<GaussianRational>> = rows
        .iter()
        .map(|r| {
            let x = alg.element_from_coordinates(degree, r);
            extremal_coordinates(alg, &extremal_projection(&x))
        })
        .collect();
    let mut equations: Vec<Vec<GaussianRational>> = Vec::new();
    for t in 0..projections[0].len() {
        let row: Vec<GaussianRational> = projections.iter().map(|p| p[t].clone()).collect();
        if row.iter().any(|c| !c.is_zero()) {
            equations.push(row);
        }
    }
    if equations.is_empty() {
        return Ok(piece.clone());
    }
    let kernel = Matrix::from_rows(equations).kernel_basis();
    let spanning: Vec<Vec<GaussianRational>> = kernel
        .iter()
        .map(|combo| {
            let mut v = vec![GaussianRational::zero(); alg.dim(degree)];
            for (c, row) in combo.iter().zip(rows.iter()) {
                for (vk, rk) in v.iter_mut().zip(row.iter()) {
                    *vk = &*vk + &(c * rk);
                }
            }
            v
        })
        .collect();
    SubspacePresentation::from_spanning(alg.component(degree), &spanning)
}

/// Look for strict graded extensions of a verified candidate in degrees up
/// to `max_degree`, keeping the same core.  Each degree is a linear
/// problem: the one-step space over the pieces below, intersected with the
/// universal isotropy, stripped of extremal projections, and closed under
/// conjugation.  The result is evidence bounded by the budget, never a
/// maximality certificate.
pub fn bounded_prolongation_check(
    candidate: &ModelCandidate,
    max_degree: i64,
) -> Result<ExtensionReport, ModelError> {
    let alg = candidate.algebra().clone();
    let top = candidate.max_degree();
    let mut pieces: BTreeMap<i64, SubspacePresentation<GaussianRational>> = BTreeMap::new();
    for d in -2..=top {
        pieces.insert(d, candidate.g_hat.piece(d).clone());
    }
    let u = build_universal_u(&alg, max_degree.max(top));
    let mut findings = Vec::new();
    for d in top + 1..=max_degree {
        let below = pieces[&(d - 1)].clone();
        let central = if d >= 2 { Some(pieces[&(d - 2)].clone()) } else { None };
        let gt = step_space(&alg, d, &below, central.as_ref())?;
        let hol = gt.intersect(u.q().piece(d))?;
        let hol_free = extremal_free_part(&alg, d, &hol)?;
        let ext = hol_free.sum(&conjugate_piece(&alg, d, &hol_free)?)?;
        if ext.dim() > 0 {
            findings.push(ExtensionFinding {
                degree: d,
                dim: ext.dim(),
                witnesses: presentation_elements(&alg, d, &ext)
                    .iter()
                    .map(|x| x.to_string())
                    .collect(),
            });
        }
        pieces.insert(d, ext);
    }
    let note = if findings.is_empty() {
        format!(
            "no admissible graded extension inside the ambient contact algebra up to degree {max_degree}; maximality is unknown beyond degree {max_degree}"
        )
    } else {
        format!(
            "admissible extensions exist below degree {max_degree}; completeness is unknown beyond degree {max_degree}"
        )
    };
    Ok(ExtensionReport {
        name: candidate.name().to_string(),
        top_degree: top,
        checked_to: max_degree,
        findings,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_model, parse_all};
    use super::*;

    #[test]
    fn a_budget_below_degree_two_is_rejected() {
        match search_3nondeg_models(1) {
            Err(SearchError::BudgetExceeded { given: 1, needed: 2 }) => {}
            other => panic!("expected a budget error, got {:?}", other.map(|r| r.max_degree)),
        }
    }

    #[test]
    fn the_borel_residual_cuts_out_the_unit_circle() {
        let report = search_3nondeg_models(2).unwrap();
        assert_eq!(report.borel_residual, "-2*i+2*i*alpha*conj(alpha)");
        assert_eq!(report.borel_samples.len(), 12);
        assert_eq!(report.borel_samples.iter().filter(|s| s.closes).count(), 8);
        let closed: Vec<&str> = report
            .borel_samples
            .iter()
            .filter(|s| !s.closes)
            .map(|s| s.alpha.as_str())
            .collect();
        assert_eq!(closed, ["0", "2", "1+i", "1/2"]);
    }

    #[test]
    fn the_rotation_demo_is_a_real_multiplier_one_conjugation() {
        let report = search_3nondeg_models(2).unwrap();
        assert!(report.rotation.verified);
        assert_eq!(report.rotation.multiplier, "1");
        assert_eq!(report.rotation.to_alpha, "-7/25-24/25*i");
    }

    #[test]
    fn the_degree_one_space_is_spanned_by_the_displayed_elements() {
        let report = search_3nondeg_models(2).unwrap();
        assert_eq!(report.gtilde1_dim, 4);
        assert_eq!(
            report.gtilde1_basis,
            [
                "z^3+2*z^2*zb+z*zb^2+mu^1[-3*i*z-3*i*zb]",
                "z^2*zb+2*z*zb^2+zb^3+mu^1[3*i*z+3*i*zb]",
                "z^2*zb+z*zb^2+mu^1[1/2*i*z-1/2*i*zb]",
                "mu^1[z+zb]",
            ]
        );
    }

    #[test]
    fn the_parameter_eliminations_match_the_displayed_system() {
        let report = search_3nondeg_models(2).unwrap();
        assert!(!report.quartic_pairing_determinant.is_empty());
        assert_eq!(report.beta_relation, "2*beta = 5*i*alpha");
        assert_eq!(
            report.residual_system,
            [
                "2*alpha+conj(alpha)+alpha*conj(alpha)",
                "2*alpha+6*conj(alpha)+6*alpha*conj(alpha)",
                "2*alpha-4*conj(alpha)-4*alpha*conj(alpha)",
            ]
        );
        assert!(report.alpha_unique_zero);
        assert_eq!(report.inconsistency_at_one, "4");
    }

    #[test]
    fn the_degree_two_obstruction_is_a_nonsingular_square_system() {
        let report = search_3nondeg_models(2).unwrap();
        assert_eq!(report.degree_two_rank, 6);
        assert_ne!(report.degree_two_determinant, "0");
        assert!(report.higher_kernels.is_empty());
    }

    #[test]
    fn higher_degrees_only_add_zero_kernels() {
        let report = search_3nondeg_models(4).unwrap();
        assert_eq!(report.higher_kernels, [(3, 0), (4, 0)]);
    }

    #[test]
    fn the_emitted_model_is_the_builtin_one() {
        let report = search_3nondeg_models(2).unwrap();
        let found = ModelCandidate::from_document(&report.model).unwrap();
        let builtin = builtin_model("three-nondeg").unwrap().candidate;
        assert!(found.equivalent_to(&builtin).unwrap());
    }

    #[test]
    fn the_three_nondegenerate_model_admits_no_extension_at_degree_two() {
        let builtin = builtin_model("three-nondeg").unwrap().candidate;
        let report = bounded_prolongation_check(&builtin, 2).unwrap();
        assert!(!report.extension_found());
        assert!(report.note.contains("unknown beyond degree 2"));
    }

    #[test]
    fn the_quadric_model_admits_no_extension_at_degree_three() {
        let builtin = builtin_model("so32").unwrap().candidate;
        let report = bounded_prolongation_check(&builtin, 3).unwrap();
        assert_eq!(report.top_degree, 2);
        assert!(!report.extension_found());
        assert!(report.note.contains("unknown beyond degree 3"));
    }

    #[test]
    fn truncating_the_quadric_model_is_detected() {
        let alg = ContactAlgebra::new(1, 0);
        let gens = parse_all(
            &alg,
            &["z^2", "z*zb", "zb^2", "mu^0[T]", "mu^1[z]", "mu^1[zb]"],
        );
        let core = AbstractCore::new(
            alg.clone(),
            vec![vec![alg.parse("z^2").unwrap()]],
        )
        .unwrap();
        let truncated = ModelCandidate::new("so32-truncated", &alg, 1, &gens, core).unwrap();
        let report = bounded_prolongation_check(&truncated, 2).unwrap();
        assert!(report.extension_found());
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].degree, 2);
        assert_eq!(report.findings[0].dim, 1);
        assert_eq!(report.findings[0].witnesses, ["mu^2[mu^0[T]]"]);
    }
}
