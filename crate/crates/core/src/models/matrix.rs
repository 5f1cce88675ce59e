//! Matrix presentations of graded simple Lie algebras and their exact
//! embeddings into the contact prolongation.
//!
//! A presentation lists a basis of 4×4 matrices over ℚ(i) together with a
//! ℤ-grading, the distinguished grading and complex-structure elements, and an
//! identification of the negative part with the Heisenberg generators.  The
//! embedding extends that identification degree by degree: above degree −1 the
//! prolongation is transitive, so the image of each basis matrix is the unique
//! solution of a linear system recording its brackets with the negative part.
//! The full bracket table is compared against the matrix commutators at the
//! end, entry by entry.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::contact::{ContactAlgebra, ContactElement};
use crate::linalg::{solve_linear, LinalgError, LinearSolution, Matrix};
use crate::scalar::{GaussianRational, Rational};

/// A square matrix over ℚ(i) with exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    entries: Vec<Vec<GaussianRational>>,
}

impl MatrixRep {
    pub fn new(entries: Vec<Vec<GaussianRational>>) -> Self {
        let k = entries.len();
        for row in &entries {
            assert_eq!(row.len(), k, "matrix rows must form a square");
        }
        MatrixRep { entries }
    }

    /// Parse rows of comma-separated scalars, e.g. `"0,1/2*i,0,-1"`.
    pub fn parse(rows: &[&str]) -> Self {
        let entries = rows
            .iter()
            .map(|row| {
                row.split(',')
                    .map(|e| e.trim().parse::<GaussianRational>().expect("malformed matrix entry"))
                    .collect::<Vec<_>>()
            })
            .collect();
        MatrixRep::new(entries)
    }

    pub fn zero(k: usize) -> Self {
        MatrixRep { entries: vec![vec![GaussianRational::zero(); k]; k] }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scaled(&self, c: &GaussianRational) -> Self {
        MatrixRep {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e * c).collect())
                .collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational) -> Self {
        assert_eq!(self.size(), other.size(), "mixed matrix sizes");
        MatrixRep {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.size();
        assert_eq!(k, other.size(), "mixed matrix sizes");
        let mut out = MatrixRep::zero(k);
        for i in 0..k {
            for j in 0..k {
                let mut acc = GaussianRational::zero();
                for l in 0..k {
                    acc += &self.entries[i][l] * &other.entries[l][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entries flattened row-major, for linear algebra over the matrix space.
    pub fn flatten(&self) -> Vec<GaussianRational> {
        self.entries.iter().flat_map(|row| row.iter().cloned()).collect()
    }

    fn entry_strings(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.to_string()).collect())
            .collect()
    }

    fn from_entry_strings(rows: &[Vec<String>]) -> Result<Self, EmbedError> {
        let k = rows.len();
        let mut entries = Vec::with_capacity(k);
        for row in rows {
            if row.len() != k {
                return Err(EmbedError::MalformedData("matrix rows must form a square".into()));
            }
            let mut out = Vec::with_capacity(k);
            for e in row {
                out.push(
                    e.parse::<GaussianRational>()
                        .map_err(|err| EmbedError::MalformedData(err.to_string()))?,
                );
            }
            entries.push(out);
        }
        Ok(MatrixRep::new(entries))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("malformed presentation data: {0}")]
    MalformedData(String),
    #[error("basis matrices are linearly dependent")]
    DependentBasis,
    #[error("the commutator [{0}, {1}] leaves the declared span")]
    NotClosed(String, String),
    #[error("the negative part does not reproduce the Heisenberg relations: {0}")]
    BadNegativePart(String),
    #[error("no contact element matches the brackets of {name} in degree {degree}")]
    InconsistentSystem { name: String, degree: i64 },
    #[error("the matrix data is not transitive: {name} pairs trivially with the negative part")]
    NonTransitive { name: String },
    #[error("bracket tables disagree at the pair ({0}, {1})")]
    BracketMismatch(String, String),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

impl From<LinalgError> for EmbedError {
    fn from(e: LinalgError) -> Self {
        EmbedError::Linalg(e.to_string())
    }
}

/// A graded matrix Lie algebra with a marked identification of its negative
/// part with the Heisenberg algebra of signature `(r, s)`.
#[derive(Clone, Debug)]
pub struct MatrixAlgebraPresentation {
    name: String,
    r: usize,
    s: usize,
    names: Vec<String>,
    mats: Vec<MatrixRep>,
    degrees: Vec<i64>,
    e_name: String,
    j_name: String,
    z_images: Vec<MatrixRep>,
    zb_images: Vec<MatrixRep>,
    t_image: MatrixRep,
}

#[allow(clippy::too_many_arguments)]
impl MatrixAlgebraPresentation {
    pub fn new(
        name: &str,
        r: usize,
        s: usize,
        basis: Vec<(&str, i64, MatrixRep)>,
        e_name: &str,
        j_name: &str,
        z_images: Vec<MatrixRep>,
        zb_images: Vec<MatrixRep>,
        t_image: MatrixRep,
    ) -> Result<Self, EmbedError> {
        let names: Vec<String> = basis.iter().map(|(n, _, _)| n.to_string()).collect();
        let degrees: Vec<i64> = basis.iter().map(|(_, d, _)| *d).collect();
        let mats: Vec<MatrixRep> = basis.into_iter().map(|(_, _, m)| m).collect();
        let n = r + s;
        if z_images.len() != n || zb_images.len() != n {
            return Err(EmbedError::MalformedData(format!(
                "expected {} holomorphic and antiholomorphic images",
                n
            )));
        }
        let p = MatrixAlgebraPresentation {
            name: name.to_string(),
            r,
            s,
            names,
            mats,
            degrees,
            e_name: e_name.to_string(),
            j_name: j_name.to_string(),
            z_images,
            zb_images,
            t_image,
        };
        if p.matrix(&p.e_name).is_none() || p.matrix(&p.j_name).is_none() {
            return Err(EmbedError::MalformedData(
                "the grading and complex-structure elements must be basis members".into(),
            ));
        }
        let flat = Matrix::from_rows(p.mats.iter().map(|m| m.flatten()).collect());
        if flat.rank() != p.mats.len() {
            return Err(EmbedError::DependentBasis);
        }
        Ok(p)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn degree_of(&self, name: &str) -> Option<i64> {
        self.names.iter().position(|n| n == name).map(|k| self.degrees[k])
    }

    pub fn matrix(&self, name: &str) -> Option<&MatrixRep> {
        self.names.iter().position(|n| n == name).map(|k| &self.mats[k])
    }

    pub fn z_image(&self, i: usize) -> &MatrixRep {
        &self.z_images[i - 1]
    }

    pub fn zb_image(&self, i: usize) -> &MatrixRep {
        &self.zb_images[i - 1]
    }

    pub fn t_image(&self) -> &MatrixRep {
        &self.t_image
    }

    /// Express `m` in the basis, or report which commutator escaped.
    fn coefficients_of(&self, m: &MatrixRep, context: (&str, &str)) -> Result<Vec<GaussianRational>, EmbedError> {
        let a = Matrix::from_rows(self.mats.iter().map(|b| b.flatten()).collect()).transpose();
        match solve_linear(&a, &m.flatten())? {
            LinearSolution::Inconsistent => {
                Err(EmbedError::NotClosed(context.0.to_string(), context.1.to_string()))
            }
            LinearSolution::Solution { particular, .. } => Ok(particular),
        }
    }

    /// The coefficient `c` with `[a, b] = c·t_image`, if the commutator is
    /// central; errors otherwise.
    fn central_coefficient(&self, a: &MatrixRep, b: &MatrixRep) -> Result<GaussianRational, EmbedError> {
        let w = a.commutator(b);
        if w.is_zero() {
            return Ok(GaussianRational::zero());
        }
        let mat = Matrix::from_rows(vec![self.t_image.flatten()]).transpose();
        match solve_linear(&mat, &w.flatten())? {
            LinearSolution::Solution { particular, .. } => Ok(particular[0].clone()),
            LinearSolution::Inconsistent => Err(EmbedError::BadNegativePart(
                "a degree −2 commutator is not a multiple of the center".into(),
            )),
        }
    }

    /// The Levi form of the negative part: `h_{jk}` with
    /// `[z_j, z̄_k] = (h_{jk}/2i)·T`.  With the normalisation used here a
    /// standard basis produces the diagonal `(+1,…,+1,−1,…,−1)`.
    pub fn levi_matrix(&self) -> Result<Matrix<GaussianRational>, EmbedError> {
        let n = self.r + self.s;
        let two_i = GaussianRational::new(Rational::zero(), Rational::int(2));
        let mut rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for k in 0..n {
                let c = self.central_coefficient(&self.z_images[j], &self.zb_images[k])?;
                row.push(&c * &two_i);
            }
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows))
    }

    /// Check the Heisenberg relations of the identified negative part against
    /// the structure constants of the contact algebra.
    fn check_negative_part(&self, alg: &ContactAlgebra) -> Result<(), EmbedError> {
        let n = alg.n();
        let pairs: Vec<(&MatrixRep, usize)> = self
            .z_images
            .iter()
            .zip(0..n)
            .chain(self.zb_images.iter().zip(n..2 * n))
            .collect();
        for (a, slot_a) in &pairs {
            for (b, slot_b) in &pairs {
                if slot_b <= slot_a {
                    continue;
                }
                let expected = alg.gram(*slot_a, *slot_b);
                let got = self.central_coefficient(a, b)?;
                if got != expected {
                    return Err(EmbedError::BadNegativePart(format!(
                        "pairing of slots {} and {} is {}, expected {}",
                        slot_a, slot_b, got, expected
                    )));
                }
            }
            if !a.commutator(&self.t_image).is_zero() {
                return Err(EmbedError::BadNegativePart("the center is not central".into()));
            }
        }
        Ok(())
    }

    /// Embed the presentation into the contact prolongation of its negative
    /// part.  Fails if the matrix data violates the Heisenberg relations, is
    /// not transitive, or has a bracket table that the prolongation cannot
    /// reproduce.
    pub fn embed(&self) -> Result<MatrixEmbedding, EmbedError> {
        let alg = ContactAlgebra::new(self.r, self.s);
        let n = alg.n();
        self.check_negative_part(&alg)?;

        // Negative generators map straight onto the Heisenberg basis.
        let mut gen_images: Vec<(MatrixRep, ContactElement)> = Vec::new();
        for i in 1..=n {
            gen_images.push((self.z_images[i - 1].clone(), alg.z(i)));
            gen_images.push((self.zb_images[i - 1].clone(), alg.zb(i)));
        }
        gen_images.push((self.t_image.clone(), alg.center()));

        // Basis members of negative degree are combinations of the generators.
        let mut images: Vec<Option<ContactElement>> = vec![None; self.names.len()];
        for (k, name) in self.names.iter().enumerate() {
            let d = self.degrees[k];
            if d >= 0 {
                continue;
            }
            let pool: Vec<&(MatrixRep, ContactElement)> = gen_images
                .iter()
                .filter(|(_, x)| x.degree() == d)
                .collect();
            let a = Matrix::from_rows(pool.iter().map(|(m, _)| m.flatten()).collect()).transpose();
            let sol = solve_linear(&a, &self.mats[k].flatten())?;
            let Some(coeffs) = sol.unique() else {
                return Err(EmbedError::InconsistentSystem { name: name.clone(), degree: d });
            };
            let mut x = ContactElement::zero(n, d);
            for (c, (_, img)) in coeffs.iter().zip(&pool) {
                x = &x + &img.scaled(c);
            }
            images[k] = Some(x);
        }

        // Ascending through the nonnegative degrees, each image is pinned by
        // its brackets with the negative generators; transitivity makes the
        // solution unique.
        let mut degrees_sorted: Vec<i64> = self.degrees.iter().copied().filter(|d| *d >= 0).collect();
        degrees_sorted.sort_unstable();
        degrees_sorted.dedup();
        for p in degrees_sorted {
            for (k, name) in self.names.iter().enumerate() {
                if self.degrees[k] != p {
                    continue;
                }
                let basis_p = alg.basis(p);
                let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
                let mut rhs: Vec<GaussianRational> = Vec::new();
                for (mv, xv) in &gen_images {
                    let target_degree = p + xv.degree();
                    let w = self.mats[k].commutator(mv);
                    let coeffs = self.coefficients_of(&w, (name, "negative generator"))?;
                    let mut target = ContactElement::zero(n, target_degree);
                    for (c, l) in coeffs.iter().enumerate() {
                        if l.is_zero() {
                            continue;
                        }
                        let img = images[c].as_ref().ok_or_else(|| {
                            EmbedError::MalformedData(format!(
                                "the commutator [{}, negative part] meets degree {} before it is embedded",
                                name, self.degrees[c]
                            ))
                        })?;
                        target = &target + &img.scaled(l);
                    }
                    let target_coords = alg.coordinates(&target);
                    let columns: Vec<Vec<GaussianRational>> = basis_p
                        .iter()
                        .map(|b| alg.coordinates(&alg.bracket(b, xv)))
                        .collect();
                    for row_idx in 0..alg.dim(target_degree) {
                        rows.push(columns.iter().map(|col| col[row_idx].clone()).collect());
                        rhs.push(target_coords[row_idx].clone());
                    }
                }
                let a = Matrix::from_rows(rows);
                match solve_linear(&a, &rhs)? {
                    LinearSolution::Inconsistent => {
                        return Err(EmbedError::InconsistentSystem { name: name.clone(), degree: p })
                    }
                    LinearSolution::Solution { particular, kernel } => {
                        if !kernel.is_empty() {
                            return Err(EmbedError::NonTransitive { name: name.clone() });
                        }
                        let mut x = ContactElement::zero(n, p);
                        for (c, b) in particular.iter().zip(&basis_p) {
                            x = &x + &b.scaled(c);
                        }
                        images[k] = Some(x);
                    }
                }
            }
        }

        let images: Vec<ContactElement> = images.into_iter().map(|x| x.expect("degree missed")).collect();

        // Exhaustive comparison of the two bracket tables.
        for i in 0..self.names.len() {
            for j in 0..self.names.len() {
                let w = self.mats[i].commutator(&self.mats[j]);
                let lie = alg.bracket(&images[i], &images[j]);
                let top = self.degrees.iter().copied().max().unwrap_or(0);
                if self.degrees[i] + self.degrees[j] > top {
                    if !w.is_zero() || !lie.is_zero() {
                        return Err(EmbedError::BracketMismatch(self.names[i].clone(), self.names[j].clone()));
                    }
                    continue;
                }
                let coeffs = self.coefficients_of(&w, (&self.names[i], &self.names[j]))?;
                let mut expected = ContactElement::zero(n, self.degrees[i] + self.degrees[j]);
                for (c, l) in coeffs.iter().enumerate() {
                    if !l.is_zero() {
                        expected = &expected + &images[c].scaled(l);
                    }
                }
                if expected != lie {
                    return Err(EmbedError::BracketMismatch(self.names[i].clone(), self.names[j].clone()));
                }
            }
        }

        Ok(MatrixEmbedding {
            alg,
            names: self.names.clone(),
            degrees: self.degrees.clone(),
            images,
            e_name: self.e_name.clone(),
            j_name: self.j_name.clone(),
        })
    }

    pub fn document(&self) -> MatrixModelDoc {
        let mut basis = BTreeMap::new();
        let mut grading: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for (k, name) in self.names.iter().enumerate() {
            basis.insert(name.clone(), self.mats[k].entry_strings());
            grading.entry(self.degrees[k]).or_default().push(name.clone());
        }
        MatrixModelDoc {
            name: self.name.clone(),
            r: self.r,
            s: self.s,
            basis,
            grading,
            e: self.e_name.clone(),
            j: self.j_name.clone(),
            z_images: self.z_images.iter().map(|m| self.combination_string(m)).collect(),
            zb_images: self.zb_images.iter().map(|m| self.combination_string(m)).collect(),
            t_image: self.combination_string(&self.t_image),
        }
    }

    /// Render a matrix as a ℚ(i)-combination of named basis matrices.
    fn combination_string(&self, m: &MatrixRep) -> String {
        let coeffs = self
            .coefficients_of(m, ("identification", "basis"))
            .expect("identification must lie in the basis span");
        let mut out = String::new();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &self.names[k];
            let piece = if *c == GaussianRational::one() {
                name.clone()
            } else if *c == -GaussianRational::one() {
                format!("-{}", name)
            } else {
                format!("{}*{}", c, name)
            };
            if out.is_empty() || piece.starts_with('-') {
                out.push_str(&piece);
            } else {
                out.push('+');
                out.push_str(&piece);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn from_document(doc: &MatrixModelDoc) -> Result<Self, EmbedError> {
        let mut basis: Vec<(String, i64, MatrixRep)> = Vec::new();
        for (d, names) in &doc.grading {
            for name in names {
                let rows = doc
                    .basis
                    .get(name)
                    .ok_or_else(|| EmbedError::MalformedData(format!("graded name {} has no matrix", name)))?;
                basis.push((name.clone(), *d, MatrixRep::from_entry_strings(rows)?));
            }
        }
        if basis.len() != doc.basis.len() {
            return Err(EmbedError::MalformedData("grading does not cover the basis".into()));
        }
        let parse_combo = |s: &str| -> Result<MatrixRep, EmbedError> {
            parse_combination(s, &basis)
        };
        let z_images = doc.z_images.iter().map(|s| parse_combo(s)).collect::<Result<Vec<_>, _>>()?;
        let zb_images = doc.zb_images.iter().map(|s| parse_combo(s)).collect::<Result<Vec<_>, _>>()?;
        let t_image = parse_combo(&doc.t_image)?;
        MatrixAlgebraPresentation::new(
            &doc.name,
            doc.r,
            doc.s,
            basis.iter().map(|(n, d, m)| (n.as_str(), *d, m.clone())).collect(),
            &doc.e,
            &doc.j,
            z_images,
            zb_images,
            t_image,
        )
    }
}

/// Parse `"e_1^10+2*i*e_2^10"`-style combinations of named matrices.  Terms
/// are split at a sign that does not follow `^`, `*` or `/`; an optional
/// scalar prefix ends at the first alphabetic character.
fn parse_combination(s: &str, basis: &[(String, i64, MatrixRep)]) -> Result<MatrixRep, EmbedError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(EmbedError::MalformedData("empty identification".into()));
    }
    let bytes = compact.as_bytes();
    let mut cuts = vec![0usize];
    for (k, &b) in bytes.iter().enumerate().skip(1) {
        if (b == b'+' || b == b'-') && !matches!(bytes[k - 1], b'^' | b'*' | b'/' | b'+' | b'-') {
            cuts.push(k);
        }
    }
    cuts.push(compact.len());
    let size = basis.first().map(|(_, _, m)| m.size()).unwrap_or(0);
    let mut acc = MatrixRep::zero(size);
    for w in cuts.windows(2) {
        let term = &compact[w[0]..w[1]];
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-GaussianRational::one(), b),
            None => (GaussianRational::one(), term.strip_prefix('+').unwrap_or(term)),
        };
        let split = body
            .char_indices()
            .find(|(_, c)| c.is_alphabetic() && *c != 'i')
            .map(|(k, _)| k)
            .or_else(|| body.char_indices().find(|(_, c)| c.is_alphabetic()).map(|(k, _)| k))
            .ok_or_else(|| EmbedError::MalformedData(format!("term {} names no matrix", term)))?;
        let coeff_str = body[..split].trim_end_matches('*');
        let coeff = if coeff_str.is_empty() {
            GaussianRational::one()
        } else {
            coeff_str
                .parse::<GaussianRational>()
                .map_err(|e| EmbedError::MalformedData(e.to_string()))?
        };
        let name = &body[split..];
        let mat = basis
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, _, m)| m)
            .ok_or_else(|| EmbedError::MalformedData(format!("unknown matrix {}", name)))?;
        acc = acc.add(&mat.scaled(&(&sign * &coeff)));
    }
    Ok(acc)
}

/// The result of embedding a matrix presentation: images of all basis
/// matrices in the contact algebra, with the bracket tables already verified.
#[derive(Clone, Debug)]
pub struct MatrixEmbedding {
    alg: ContactAlgebra,
    names: Vec<String>,
    degrees: Vec<i64>,
    images: Vec<ContactElement>,
    e_name: String,
    j_name: String,
}

impl MatrixEmbedding {
    pub fn algebra(&self) -> &ContactAlgebra {
        &self.alg
    }

    pub fn image(&self, name: &str) -> Option<&ContactElement> {
        self.names.iter().position(|n| n == name).map(|k| &self.images[k])
    }

    pub fn grading_image(&self) -> &ContactElement {
        self.image(&self.e_name).expect("grading element embedded")
    }

    pub fn complex_structure_image(&self) -> &ContactElement {
        self.image(&self.j_name).expect("complex structure embedded")
    }

    /// Images of the basis members grouped by degree, for degrees ≥ 0.
    pub fn nonnegative_pieces(&self) -> BTreeMap<i64, Vec<ContactElement>> {
        let mut out: BTreeMap<i64, Vec<ContactElement>> = BTreeMap::new();
        for (k, x) in self.images.iter().enumerate() {
            if self.degrees[k] >= 0 {
                out.entry(self.degrees[k]).or_default().push(x.clone());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("the matrix is not Hermitian")]
    NotHermitian,
    #[error("the form is degenerate")]
    Degenerate,
}

/// Signature of a nondegenerate Hermitian matrix over ℚ(i), computed by exact
/// congruence reduction — no square roots, no numerics.
pub fn hermitian_signature(h: &Matrix<GaussianRational>) -> Result<(usize, usize), SignatureError> {
    let k = h.nrows();
    let mut m: Vec<Vec<GaussianRational>> = h.rows.clone();
    for i in 0..k {
        if m[i].len() != k {
            return Err(SignatureError::NotHermitian);
        }
        for j in 0..k {
            if m[i][j] != m[j][i].conj() {
                return Err(SignatureError::NotHermitian);
            }
        }
    }
    let mut alive: Vec<usize> = (0..k).collect();
    let mut pos = 0;
    let mut neg = 0;
    while !alive.is_empty() {
        // Prefer a live diagonal entry; otherwise manufacture one from a
        // nonzero off-diagonal pair (the two-dimensional hyperbolic case).
        let diag = alive.iter().copied().find(|&i| !m[i][i].is_zero());
        let i = match diag {
            Some(i) => i,
            None => {
                let mut found = None;
                'outer: for &a in &alive {
                    for &b in &alive {
                        if a != b && !m[a][b].is_zero() {
                            found = Some((a, b));
                            break 'outer;
                        }
                    }
                }
                let Some((a, b)) = found else {
                    return Err(SignatureError::Degenerate);
                };
                // Replace the basis vector at `a` by v_a + c·v_b with
                // c = conj(m[a][b]); its square is then 2·|m[a][b]|² > 0.
                let c = m[a][b].conj();
                for j in 0..k {
                    let t = &m[b][j] * &c.conj();
                    m[a][j] = &m[a][j] + &t;
                }
                for r in 0..k {
                    let t = &m[r][b] * &c;
                    m[r][a] = &m[r][a] + &t;
                }
                a
            }
        };
        let d = m[i][i].clone();
        debug_assert!(d.im.is_zero(), "Hermitian diagonal must be real");
        if d.re > Rational::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        let others: Vec<usize> = alive.iter().copied().filter(|&j| j != i).collect();
        for &rj in &others {
            let f = &m[rj][i] / &d;
            for cj in 0..k {
                let t = &f * &m[i][cj];
                m[rj][cj] = &m[rj][cj] - &t;
            }
        }
        for &cj in &others {
            let f = &m[i][cj] / &d;
            for rj in 0..k {
                let t = &m[rj][i] * &f;
                m[rj][cj] = &m[rj][cj] - &t;
            }
        }
        alive.retain(|&j| j != i);
    }
    Ok((pos, neg))
}

/// Serialisable form of a matrix presentation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixModelDoc {
    pub name: String,
    pub r: usize,
    pub s: usize,
    pub basis: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(with = "super::degree_keys")]
    pub grading: BTreeMap<i64, Vec<String>>,
    pub e: String,
    pub j: String,
    pub z_images: Vec<String>,
    pub zb_images: Vec<String>,
    pub t_image: String,
}

fn m4(rows: [&str; 4]) -> MatrixRep {
    MatrixRep::parse(&rows)
}

/// 𝔰𝔲(2,2) in a complex-symplectic basis, graded by the adapted Cartan pair.
pub fn su22_presentation() -> MatrixAlgebraPresentation {
    let e1_10 = m4(["0,0,0,1", "0,0,0,0", "0,0,0,-1", "0,0,0,0"]);
    let e2_10 = m4(["0,0,0,0", "1,0,1,0", "0,0,0,0", "0,0,0,0"]);
    let e1_01 = m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "1,0,1,0"]);
    let e2_01 = m4(["0,-1,0,0", "0,0,0,0", "0,1,0,0", "0,0,0,0"]);
    let em2 = m4(["2*i,0,2*i,0", "0,0,0,0", "-2*i,0,-2*i,0", "0,0,0,0"]);
    MatrixAlgebraPresentation::new(
        "su22",
        2,
        0,
        vec![
            ("E^2", 2, m4(["2*i,0,-2*i,0", "0,0,0,0", "2*i,0,-2*i,0", "0,0,0,0"])),
            ("E_1^10", 1, m4(["0,0,0,0", "1,0,-1,0", "0,0,0,0", "0,0,0,0"])),
            ("E_2^10", 1, m4(["0,0,0,1", "0,0,0,0", "0,0,0,1", "0,0,0,0"])),
            ("E_1^01", 1, m4(["0,-1,0,0", "0,0,0,0", "0,-1,0,0", "0,0,0,0"])),
            ("E_2^01", 1, m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "1,0,-1,0"])),
            ("E", 0, m4(["0,0,1,0", "0,0,0,0", "1,0,0,0", "0,0,0,0"])),
            ("J", 0, m4(["0,0,0,0", "0,i,0,0", "0,0,0,0", "0,0,0,-i"])),
            ("H", 0, m4(["1/2*i,0,0,0", "0,-1/2*i,0,0", "0,0,1/2*i,0", "0,0,0,-1/2*i"])),
            ("e^0(10)", 0, m4(["0,0,0,0", "0,0,0,1", "0,0,0,0", "0,0,0,0"])),
            ("e^0(01)", 0, m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "0,1,0,0"])),
            ("e_1^10", -1, e1_10.clone()),
            ("e_2^10", -1, e2_10.clone()),
            ("e_1^01", -1, e1_01.clone()),
            ("e_2^01", -1, e2_01.clone()),
            ("e^-2", -2, em2.clone()),
        ],
        "E",
        "J",
        vec![e1_10, e2_10],
        vec![e1_01, e2_01],
        em2,
    )
    .expect("valid presentation")
}

/// 𝔰𝔲(1,3) in a complex-symplectic basis, graded by the adapted Cartan pair.
pub fn su13_presentation() -> MatrixAlgebraPresentation {
    let e1_10 = m4(["0,0,0,1", "0,0,0,-1", "0,0,0,0", "0,0,0,0"]);
    let e2_10 = m4(["0,0,0,0", "0,0,0,0", "1,1,0,0", "0,0,0,0"]);
    let e1_01 = m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "1,1,0,0"]);
    let e2_01 = m4(["0,0,1,0", "0,0,-1,0", "0,0,0,0", "0,0,0,0"]);
    let em2 = m4(["2*i,2*i,0,0", "-2*i,-2*i,0,0", "0,0,0,0", "0,0,0,0"]);
    MatrixAlgebraPresentation::new(
        "su13",
        1,
        1,
        vec![
            ("E^2", 2, m4(["2*i,-2*i,0,0", "2*i,-2*i,0,0", "0,0,0,0", "0,0,0,0"])),
            ("E_1^10", 1, m4(["0,0,0,0", "0,0,0,0", "1,-1,0,0", "0,0,0,0"])),
            ("E_2^10", 1, m4(["0,0,0,1", "0,0,0,1", "0,0,0,0", "0,0,0,0"])),
            ("E_1^01", 1, m4(["0,0,1,0", "0,0,1,0", "0,0,0,0", "0,0,0,0"])),
            ("E_2^01", 1, m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "1,-1,0,0"])),
            ("E", 0, m4(["0,1,0,0", "1,0,0,0", "0,0,0,0", "0,0,0,0"])),
            ("J", 0, m4(["0,0,0,0", "0,0,0,0", "0,0,i,0", "0,0,0,-i"])),
            ("H", 0, m4(["1/2*i,0,0,0", "0,1/2*i,0,0", "0,0,-1/2*i,0", "0,0,0,-1/2*i"])),
            ("e^0(10)", 0, m4(["0,0,0,0", "0,0,0,0", "0,0,0,1", "0,0,0,0"])),
            ("e^0(01)", 0, m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "0,0,-1,0"])),
            ("e_1^10", -1, e1_10.clone()),
            ("e_2^10", -1, e2_10.clone()),
            ("e_1^01", -1, e1_01.clone()),
            ("e_2^01", -1, e2_01.clone()),
            ("e^-2", -2, em2.clone()),
        ],
        "E",
        "J",
        vec![e1_10, e2_10],
        vec![e1_01, e2_01],
        em2,
    )
    .expect("valid presentation")
}

/// 𝔰𝔩₄(ℝ) in a complex-Witt basis.  The basis pairs hyperbolically, so the
/// Heisenberg generators are recovered from the sums and differences of the
/// degree −1 members, and the center is twice the lowest root vector.
pub fn sl4r_presentation() -> MatrixAlgebraPresentation {
    let e1_10 = m4(["0,0,i,0", "0,0,1,0", "0,0,0,0", "0,0,0,0"]);
    let e2_10 = m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "-1,i,0,0"]);
    let e1_01 = m4(["0,0,-i,0", "0,0,1,0", "0,0,0,0", "0,0,0,0"]);
    let e2_01 = m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "-1,-i,0,0"]);
    let em2 = m4(["0,0,0,0", "0,0,0,0", "0,0,0,0", "0,0,-4,0"]);
    let two = GaussianRational::int(2);
    MatrixAlgebraPresentation::new(
        "sl4r",
        1,
        1,
        vec![
            ("E^2", 2, m4(["0,0,0,0", "0,0,0,0", "0,0,0,-4", "0,0,0,0"])),
            ("E_1^10", 1, m4(["0,0,0,i", "0,0,0,1", "0,0,0,0", "0,0,0,0"])),
            ("E_2^10", 1, m4(["0,0,0,0", "0,0,0,0", "i,1,0,0", "0,0,0,0"])),
            ("E_1^01", 1, m4(["0,0,0,-i", "0,0,0,1", "0,0,0,0", "0,0,0,0"])),
            ("E_2^01", 1, m4(["0,0,0,0", "0,0,0,0", "-i,1,0,0", "0,0,0,0"])),
            ("E", 0, m4(["0,0,0,0", "0,0,0,0", "0,0,1,0", "0,0,0,-1"])),
            ("J", 0, m4(["0,-1,0,0", "1,0,0,0", "0,0,0,0", "0,0,0,0"])),
            ("H", 0, m4(["1/2,0,0,0", "0,1/2,0,0", "0,0,-1/2,0", "0,0,0,-1/2"])),
            ("e^0(10)", 0, m4(["1,-i,0,0", "-i,-1,0,0", "0,0,0,0", "0,0,0,0"])),
            ("e^0(01)", 0, m4(["1,i,0,0", "i,-1,0,0", "0,0,0,0", "0,0,0,0"])),
            ("e_1^10", -1, e1_10.clone()),
            ("e_2^10", -1, e2_10.clone()),
            ("e_1^01", -1, e1_01.clone()),
            ("e_2^01", -1, e2_01.clone()),
            ("e^-2", -2, em2.clone()),
        ],
        "E",
        "J",
        vec![e1_10.add(&e2_10), e1_10.sub(&e2_10)],
        vec![e1_01.add(&e2_01), e1_01.sub(&e2_01)],
        em2.scaled(&two),
    )
    .expect("valid presentation")
}

/// The three graded simple presentations, in the order used by the registry.
pub fn standard_matrix_presentations() -> Vec<MatrixAlgebraPresentation> {
    vec![su22_presentation(), su13_presentation(), sl4r_presentation()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_signatures_match_the_declared_ones() {
        for p in standard_matrix_presentations() {
            let h = p.levi_matrix().unwrap();
            assert_eq!(hermitian_signature(&h).unwrap(), p.signature(), "{}", p.name());
        }
    }

    #[test]
    fn hermitian_signature_handles_hyperbolic_blocks() {
        let one = GaussianRational::one();
        let z = GaussianRational::zero();
        let h = Matrix::from_rows(vec![vec![z.clone(), one.clone()], vec![one.clone(), z.clone()]]);
        assert_eq!(hermitian_signature(&h).unwrap(), (1, 1));
        let i = GaussianRational::i();
        let h = Matrix::from_rows(vec![vec![z.clone(), i.clone()], vec![-&i, z.clone()]]);
        assert_eq!(hermitian_signature(&h).unwrap(), (1, 1));
        let h = Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![z.clone(), z]]);
        assert_eq!(hermitian_signature(&h), Err(SignatureError::Degenerate));
    }

    #[test]
    fn witt_basis_pairs_hyperbolically_in_sl4r() {
        let p = sl4r_presentation();
        let diag = p.matrix("e_1^10").unwrap().commutator(p.matrix("e_1^01").unwrap());
        assert!(diag.is_zero());
        let cross = p.matrix("e_1^10").unwrap().commutator(p.matrix("e_2^01").unwrap());
        assert!(!cross.is_zero());
    }

    #[test]
    fn all_three_presentations_embed() {
        for p in standard_matrix_presentations() {
            let emb = p.embed().unwrap_or_else(|e| panic!("{}: {}", p.name(), e));
            let alg = emb.algebra().clone();
            assert_eq!(emb.grading_image(), &alg.grading_element(), "{}", p.name());
            assert_eq!(emb.complex_structure_image(), &alg.complex_structure(), "{}", p.name());
        }
    }

    #[test]
    fn the_embedded_zero_degree_generator_is_extremal() {
        let emb = su22_presentation().embed().unwrap();
        let x = emb.image("e^0(10)").unwrap();
        // Lies in the holomorphic quadratic part: conjugating the complex
        // structure action gives the eigenvalue 2i.
        let alg = emb.algebra();
        let j = alg.complex_structure();
        let two_i = GaussianRational::new(Rational::zero(), Rational::int(2));
        assert_eq!(alg.bracket(&j, x), x.scaled(&two_i));
    }

    #[test]
    fn tampered_grading_is_rejected_by_the_bracket_table() {
        // Moving the top-degree matrix into degree zero breaks the degree
        // bookkeeping, which the embedding must notice.
        let p = su22_presentation();
        let doc = {
            let mut d = p.document();
            let top = d.grading.get_mut(&2).unwrap().pop().unwrap();
            d.grading.get_mut(&0).unwrap().push(top);
            d
        };
        let rejected = match MatrixAlgebraPresentation::from_document(&doc) {
            Err(_) => true,
            Ok(q) => q.embed().is_err(),
        };
        assert!(rejected);
    }

    #[test]
    fn documents_round_trip() {
        for p in standard_matrix_presentations() {
            let doc = p.document();
            let text = serde_json::to_string(&doc).unwrap();
            let parsed: MatrixModelDoc = serde_json::from_str(&text).unwrap();
            let q = MatrixAlgebraPresentation::from_document(&parsed).unwrap();
            assert_eq!(q.name(), p.name());
            assert_eq!(q.signature(), p.signature());
            for name in p.basis_names() {
                assert_eq!(q.matrix(name), p.matrix(name));
                assert_eq!(q.degree_of(name), p.degree_of(name));
            }
            for i in 1..=2 {
                assert_eq!(q.z_image(i), p.z_image(i));
                assert_eq!(q.zb_image(i), p.zb_image(i));
            }
            assert_eq!(q.t_image(), p.t_image());
        }
    }
}
