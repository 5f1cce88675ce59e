//! Classification of the seven-dimensional cores of height zero.
//!
//! A core of class (B) is determined by a complex line in the extremal
//! eigenspace `S^{2,0}` of the degree-zero component at `n = 2`, and two
//! cores are equivalent exactly when the lines are related by the group
//! generated by the nonzero complex scalars and the isometries of the
//! Levi form.  Identifying `S^{2,0}` with `ℂ³` through an orthonormal
//! frame turns the classification into the orbit geometry of `ℂ^× · K` on
//! `ℂ³` with `K = SO(3)` in the definite signature and `K = SO⁺(2,1)` in
//! the split one.  Everything here is exact: pairings, cross products and
//! stabiliser kernels are rational, canonical parameters are either
//! rational or carried by a quadratic certificate, and the circle action
//! on the reduced parameters is checked against the orbit-invariant
//! extraction it came from.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::abscore::{extremal_coordinates, extremal_projection};
use crate::contact::{ContactAlgebra, ContactElement};
use crate::linalg::{solve_linear, LinalgError, LinearSolution, Matrix};
use crate::scalar::{GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("the zero vector does not present a core line")]
    ZeroVector,
    #[error("expected a contact algebra of signature (2,0) or (1,1), found ({0},{1})")]
    Signature(usize, usize),
    #[error("a core line representative must have signature {expected}, found {found}")]
    SignatureMismatch { expected: CoreSignature, found: CoreSignature },
    #[error("the generator must be a nonzero degree-zero element of the extremal eigenspace: {0}")]
    NotExtremal(String),
    #[error("({a}, {b}) is not a rational point of the unit circle")]
    OffCircle { a: Rational, b: Rational },
    #[error("the circle point ({a}, {b}) sends ({t1}, {t2}) through a vanishing denominator")]
    DenominatorVanishes { a: Rational, b: Rational, t1: Rational, t2: Rational },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The two signatures a nondegenerate Levi form can have on the
/// four-dimensional contact distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoreSignature {
    /// Signature `(2,0)`; the isometry group acts through `SO(3)`.
    Definite,
    /// Signature `(1,1)`; the isometry group acts through `SO⁺(2,1)`.
    Split,
}

impl CoreSignature {
    pub fn pair(self) -> (usize, usize) {
        match self {
            CoreSignature::Definite => (2, 0),
            CoreSignature::Split => (1, 1),
        }
    }

    pub fn from_pair(r: usize, s: usize) -> Result<Self, ClassifyError> {
        match (r, s) {
            (2, 0) => Ok(CoreSignature::Definite),
            (1, 1) => Ok(CoreSignature::Split),
            _ => Err(ClassifyError::Signature(r, s)),
        }
    }

    /// The sign of the third frame vector: the frame is orthonormal for
    /// `diag(1, 1, eta3)`.
    fn eta3(self) -> i64 {
        match self {
            CoreSignature::Definite => 1,
            CoreSignature::Split => -1,
        }
    }
}

impl fmt::Display for CoreSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, s) = self.pair();
        write!(f, "({},{})", r, s)
    }
}

type Vec3 = [Rational; 3];
type CVec3 = [GaussianRational; 3];

fn inner(sig: CoreSignature, x: &Vec3, y: &Vec3) -> Rational {
    let head = &(&x[0] * &y[0]) + &(&x[1] * &y[1]);
    let tail = &x[2] * &y[2];
    if sig.eta3() > 0 {
        &head + &tail
    } else {
        &head - &tail
    }
}

/// The metric cross product: the unique `w` with `⟨w, u⟩ = det(x, y, u)`
/// for every `u`.  In the split signature the time component of the
/// Euclidean formula flips sign.
fn cross(sig: CoreSignature, x: &Vec3, y: &Vec3) -> Vec3 {
    let c1 = &(&x[1] * &y[2]) - &(&x[2] * &y[1]);
    let c2 = &(&x[2] * &y[0]) - &(&x[0] * &y[2]);
    let c3 = &(&x[0] * &y[1]) - &(&x[1] * &y[0]);
    if sig.eta3() > 0 {
        [c1, c2, c3]
    } else {
        [c1, c2, -c3]
    }
}

fn is_zero_vec(v: &Vec3) -> bool {
    v.iter().all(Rational::is_zero)
}

/// How a core line representative entered the classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Written down directly as a vector of the frame space.
    Direct,
    /// Extracted from a line of the extremal eigenspace through the frame
    /// dictionary; the expression is kept for round trips.
    FromGenerator { expression: String },
}

/// A nonzero vector of `ℂ³` presenting the holomorphic generator line of a
/// seven-dimensional core, together with its signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreLineRep {
    signature: CoreSignature,
    z: CVec3,
    provenance: Provenance,
}

/// The orthonormal frame of the extremal eigenspace `S^{2,0}` at `n = 2`,
/// expressed in the monomial generators.  The first two vectors are
/// space-like in both signatures; the third is space-like in the definite
/// case and time-like in the split one.
pub fn frame_expressions(sig: CoreSignature) -> [&'static str; 3] {
    match sig {
        CoreSignature::Definite => {
            ["-1/2*z1^2-1/2*z2^2", "1/2*i*z1^2-1/2*i*z2^2", "-i*z1*z2"]
        }
        CoreSignature::Split => {
            ["1/2*z1^2-1/2*z2^2", "-1/2*i*z1^2-1/2*i*z2^2", "-i*z1*z2"]
        }
    }
}

fn frame_elements(alg: &ContactAlgebra) -> Result<[ContactElement; 3], ClassifyError> {
    let sig = CoreSignature::from_pair(alg.r(), alg.s())?;
    let texts = frame_expressions(sig);
    Ok(texts.map(|t| alg.parse(t).expect("frame expressions parse")))
}

impl CoreLineRep {
    pub fn new(signature: CoreSignature, z: CVec3) -> Result<Self, ClassifyError> {
        if z.iter().all(GaussianRational::is_zero) {
            return Err(ClassifyError::ZeroVector);
        }
        Ok(CoreLineRep { signature, z, provenance: Provenance::Direct })
    }

    /// Reads a core line off a generator of the extremal eigenspace by
    /// inverting the frame dictionary.  The generator must be a nonzero
    /// degree-zero element supported on the extremal eigenspace of a
    /// contact algebra with `n = 2`.
    pub fn from_extremal_generator(
        alg: &ContactAlgebra,
        m: &ContactElement,
    ) -> Result<Self, ClassifyError> {
        let signature = CoreSignature::from_pair(alg.r(), alg.s())?;
        if m.is_zero() {
            return Err(ClassifyError::ZeroVector);
        }
        if m.degree() != 0
            || alg.coordinates(m) != alg.coordinates(&extremal_projection(m))
        {
            return Err(ClassifyError::NotExtremal(m.to_string()));
        }
        let frame = frame_elements(alg)?;
        let columns: Vec<Vec<GaussianRational>> =
            frame.iter().map(|e| extremal_coordinates(alg, e)).collect();
        let rows: Vec<Vec<GaussianRational>> = (0..3)
            .map(|i| (0..3).map(|k| columns[k][i].clone()).collect())
            .collect();
        let rhs = extremal_coordinates(alg, m);
        let solution = solve_linear(&Matrix::from_rows(rows), &rhs)?;
        let z = match solution {
            LinearSolution::Solution { particular, kernel } if kernel.is_empty() => {
                [particular[0].clone(), particular[1].clone(), particular[2].clone()]
            }
            _ => unreachable!("the frame dictionary is invertible"),
        };
        let mut rep = CoreLineRep::new(signature, z)?;
        rep.provenance = Provenance::FromGenerator { expression: m.to_string() };
        Ok(rep)
    }

    /// The extremal generator this line presents, `Σ z_α · frame_α`.
    pub fn generator_in(
        &self,
        alg: &ContactAlgebra,
    ) -> Result<ContactElement, ClassifyError> {
        let found = CoreSignature::from_pair(alg.r(), alg.s())?;
        if found != self.signature {
            return Err(ClassifyError::SignatureMismatch {
                expected: self.signature,
                found,
            });
        }
        let frame = frame_elements(alg)?;
        let mut m = ContactElement::zero(alg.n(), 0);
        for (e, c) in frame.iter().zip(&self.z) {
            m = &m + &e.scaled(c);
        }
        Ok(m)
    }

    pub fn signature(&self) -> CoreSignature {
        self.signature
    }

    pub fn z(&self) -> &CVec3 {
        &self.z
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Real and imaginary parts of the representative in the real frame.
    fn parts(&self) -> (Vec3, Vec3) {
        let x = [self.z[0].re.clone(), self.z[1].re.clone(), self.z[2].re.clone()];
        let y = [self.z[0].im.clone(), self.z[1].im.clone(), self.z[2].im.clone()];
        (x, y)
    }

    /// The representative rescaled by a nonzero complex number: the same
    /// core line.
    pub fn rescaled(&self, c: &GaussianRational) -> Result<CoreLineRep, ClassifyError> {
        if c.is_zero() {
            return Err(ClassifyError::ZeroVector);
        }
        CoreLineRep::new(
            self.signature,
            [&self.z[0] * c, &self.z[1] * c, &self.z[2] * c],
        )
    }

    /// The representative moved by a real matrix acting on the frame; the
    /// matrix must be an isometry for the classification to be preserved,
    /// which the callers arrange.
    pub fn transformed(&self, a: &[[Rational; 3]; 3]) -> Result<CoreLineRep, ClassifyError> {
        let mut z = [
            GaussianRational::zero(),
            GaussianRational::zero(),
            GaussianRational::zero(),
        ];
        for (i, zi) in z.iter_mut().enumerate() {
            for (j, zj) in self.z.iter().enumerate() {
                *zi = &*zi + &zj.scale(&a[i][j]);
            }
        }
        CoreLineRep::new(self.signature, z)
    }
}

/// The scale-free part of the orbit invariants.  Two representatives lie
/// on the same orbit exactly when the records coincide, and the record of
/// a canonical form is frozen in the tests.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRecord {
    /// All pairings vanish: the line is spanned by an isotropic vector.
    pub null_class: bool,
    /// `q·q̄ / D` with `D = q·q̄ + h²`.
    pub qq_ratio: Rational,
    /// `h·|h| / D`: carries the sign of the hermitian pairing.
    pub h_ratio: Rational,
    /// Gram determinant of the real and imaginary parts over `D`.
    pub gram_ratio: Rational,
    /// Metric square of the cross product over `D`.
    pub ww_ratio: Rational,
    /// Time orientation of the cross product when it is causal; only the
    /// split signature has one.
    pub w_time: i32,
}

/// Exact orbit invariants of a core line.
#[derive(Debug, Clone)]
pub struct OrbitInvariants {
    pub signature: CoreSignature,
    /// The complex-bilinear pairing `⟨z, z⟩`.
    pub q: GaussianRational,
    /// `q·q̄`, a nonnegative rational.
    pub qq: Rational,
    /// The hermitian pairing `⟨z, z̄⟩`, real but of either sign in the
    /// split signature.
    pub h: Rational,
    /// Gram determinant `⟨x,x⟩⟨y,y⟩ − ⟨x,y⟩²` of the real and imaginary
    /// parts: positive on definite planes, negative on split planes, zero
    /// on degenerate or lower-dimensional spans.
    pub gram: Rational,
    /// The cross product of the real and imaginary parts.
    pub w: Vec3,
    /// Metric square of the cross product.
    pub ww: Rational,
    /// `q·q̄ / h²` when the hermitian pairing does not vanish.
    pub qq_over_h2: Option<Rational>,
    pub record: InvariantRecord,
}

pub fn orbit_invariants(rep: &CoreLineRep) -> OrbitInvariants {
    let sig = rep.signature;
    let (x, y) = rep.parts();
    let xx = inner(sig, &x, &x);
    let yy = inner(sig, &y, &y);
    let xy = inner(sig, &x, &y);
    let q = GaussianRational::new(&xx - &yy, &xy + &xy);
    let qq = q.norm_sq();
    let h = &xx + &yy;
    let gram = &(&xx * &yy) - &(&xy * &xy);
    let w = cross(sig, &x, &y);
    let ww = inner(sig, &w, &w);
    let w_time = if sig == CoreSignature::Split && !ww.is_positive() && !is_zero_vec(&w) {
        w[2].signum()
    } else {
        0
    };
    let d = &qq + &(&h * &h);
    let record = if d.is_zero() {
        InvariantRecord {
            null_class: true,
            qq_ratio: Rational::zero(),
            h_ratio: Rational::zero(),
            gram_ratio: Rational::zero(),
            ww_ratio: Rational::zero(),
            w_time: 0,
        }
    } else {
        InvariantRecord {
            null_class: false,
            qq_ratio: &qq / &d,
            h_ratio: &(&h * &h.abs()) / &d,
            gram_ratio: &gram / &d,
            ww_ratio: &ww / &d,
            w_time,
        }
    };
    let qq_over_h2 = if h.is_zero() { None } else { Some(&qq / &(&h * &h)) };
    OrbitInvariants { signature: sig, q, qq, h, gram, w, ww, qq_over_h2, record }
}

/// The canonical families of core lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `frame_1 + i·t·frame_2`; both signatures.
    MT,
    /// The split family over the null direction with a real parameter.
    MTilde,
    /// The split class `frame_1 + frame_3 + i·frame_2`.
    MPlus,
    /// The split class `frame_1 + frame_3 − i·frame_2`.
    MMinus,
    /// The time-like split class spanned by `frame_3`.
    MNeg,
    /// The isotropic split class spanned by `frame_1 + frame_3`.
    MNull,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Family::MT => "m_t",
            Family::MTilde => "m~_t",
            Family::MPlus => "m_+",
            Family::MMinus => "m_-",
            Family::MNeg => "m_<0",
            Family::MNull => "m_null",
        };
        f.write_str(text)
    }
}

/// The canonical parameter of an orbit, exact whenever it is rational and
/// otherwise carried by an explicit algebraic certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum ParameterValue {
    /// The family has no parameter.
    None,
    Exact(Rational),
    /// `t = ±sqrt(square)` with a rational square that is not a perfect
    /// square.
    SquareRoot { square: Rational, negative: bool },
    /// `t = ±sqrt(s)` where `s` is the root of `s² + b·s + c = 0` lying in
    /// `[0, 1]`.
    QuadraticSquare { b: Rational, c: Rational, negative: bool },
}

impl fmt::Display for ParameterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParameterValue::None => f.write_str("-"),
            ParameterValue::Exact(t) => write!(f, "t = {}", t),
            ParameterValue::SquareRoot { square, negative } => {
                let sign = if *negative { "-" } else { "" };
                write!(f, "t = {}sqrt({})", sign, square)
            }
            ParameterValue::QuadraticSquare { b, c, negative } => {
                let sign = if *negative { "-" } else { "" };
                write!(
                    f,
                    "t = {}sqrt(s) with s^2 + ({})*s + ({}) = 0, 0 <= s <= 1",
                    sign, b, c
                )
            }
        }
    }
}

/// The structure of the stabiliser of a core line inside `ℂ ⊕ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilizerStructure {
    /// Only the complex scalars stabilise the line.
    C,
    /// The scalars and a compact rotation.
    CSo2,
    /// The scalars and a boost.
    CSo11,
    /// The scalars and the full line stabiliser of a null direction, a
    /// semidirect product of a dilation and a null rotation.
    CSemidirect,
}

impl StabilizerStructure {
    pub fn real_dimension(self) -> usize {
        match self {
            StabilizerStructure::C => 2,
            StabilizerStructure::CSo2 | StabilizerStructure::CSo11 => 3,
            StabilizerStructure::CSemidirect => 4,
        }
    }
}

impl fmt::Display for StabilizerStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            StabilizerStructure::C => "C",
            StabilizerStructure::CSo2 => "C + so(2)",
            StabilizerStructure::CSo11 => "C + so(1,1)",
            StabilizerStructure::CSemidirect => "C + (R |x R)",
        };
        f.write_str(text)
    }
}

/// The canonical label of an orbit: a family, an exact parameter, the
/// stabiliser structure, and whether the class is admissible, which by
/// definition means the stabiliser properly contains the scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitLabel {
    pub signature: CoreSignature,
    pub family: Family,
    pub parameter: ParameterValue,
    pub stabilizer: StabilizerStructure,
    pub admissible: bool,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}; {}; stabilizer {}; {}]",
            self.family,
            self.signature,
            self.parameter,
            self.stabilizer,
            if self.admissible { "admissible" } else { "not admissible" }
        )
    }
}

impl Serialize for OrbitLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OrbitLabel", 5)?;
        st.serialize_field("signature", &self.signature.to_string())?;
        st.serialize_field("family", &self.family.to_string())?;
        st.serialize_field("parameter", &self.parameter.to_string())?;
        st.serialize_field("stabilizer", &self.stabilizer.to_string())?;
        st.serialize_field("admissible", &self.admissible)?;
        st.end()
    }
}

fn label(
    signature: CoreSignature,
    family: Family,
    parameter: ParameterValue,
    stabilizer: StabilizerStructure,
) -> OrbitLabel {
    let admissible = stabilizer != StabilizerStructure::C;
    OrbitLabel { signature, family, parameter, stabilizer, admissible }
}

/// Inverts `q·q̄ / h² = (1−t²)²/(1+t²)²` for `t² ∈ (0, 1)`.  The callers
/// dispose of the endpoint classes first, so the ratio lies strictly
/// between zero and one here.
fn mt_parameter(qq: &Rational, h: &Rational, negative: bool) -> ParameterValue {
    let one = Rational::one();
    let rho = qq / &(h * h);
    if let Some(r) = rho.sqrt_exact() {
        let s = &(&one - &r) / &(&one + &r);
        match s.sqrt_exact() {
            Some(t) => ParameterValue::Exact(if negative { -t } else { t }),
            Option::None => ParameterValue::SquareRoot { square: s, negative },
        }
    } else {
        // (1−ρ)s² − 2(1+ρ)s + (1−ρ) = 0 in s = t², normalised to be monic.
        let two = Rational::int(2);
        let b = -(&(&two * &(&one + &rho)) / &(&one - &rho));
        ParameterValue::QuadraticSquare { b, c: one, negative }
    }
}

/// The canonical form of the orbit through a core line: which family it
/// belongs to, at which exact parameter, with the stabiliser structure
/// the classification assigns to it.
pub fn canonical_form(rep: &CoreLineRep) -> OrbitLabel {
    let inv = orbit_invariants(rep);
    match rep.signature {
        CoreSignature::Definite => definite_form(&inv),
        CoreSignature::Split => split_form(&inv),
    }
}

fn definite_form(inv: &OrbitInvariants) -> OrbitLabel {
    let sig = CoreSignature::Definite;
    // The hermitian pairing is positive definite, so `h > 0` throughout
    // and `q·q̄ − h² = −4·gram` splits the parameter range exactly.
    if inv.gram.is_zero() {
        return label(
            sig,
            Family::MT,
            ParameterValue::Exact(Rational::zero()),
            StabilizerStructure::CSo2,
        );
    }
    if inv.qq.is_zero() {
        return label(
            sig,
            Family::MT,
            ParameterValue::Exact(Rational::one()),
            StabilizerStructure::CSo2,
        );
    }
    label(sig, Family::MT, mt_parameter(&inv.qq, &inv.h, false), StabilizerStructure::C)
}

fn split_form(inv: &OrbitInvariants) -> OrbitLabel {
    let sig = CoreSignature::Split;
    if inv.record.null_class {
        return label(sig, Family::MNull, ParameterValue::None, StabilizerStructure::CSemidirect);
    }
    if inv.gram.is_negative() {
        // The real and imaginary parts span a split plane; the parameter
        // satisfies `t² = h²/(q·q̄ − h²)` with the sign of `h`.
        let h2 = &inv.h * &inv.h;
        let t_sq = &h2 / &(&inv.qq - &h2);
        let negative = inv.h.is_negative();
        let parameter = if inv.h.is_zero() {
            ParameterValue::Exact(Rational::zero())
        } else {
            match t_sq.sqrt_exact() {
                Some(t) => ParameterValue::Exact(if negative { -t } else { t }),
                Option::None => ParameterValue::SquareRoot { square: t_sq, negative },
            }
        };
        return label(sig, Family::MTilde, parameter, StabilizerStructure::C);
    }
    if inv.gram.is_positive() {
        // A definite plane: the same parameter inversion as in the
        // definite signature, with the time orientation of the cross
        // product carrying the sign of the parameter.
        assert!(inv.record.w_time != 0, "a definite plane has a time-like cross product");
        let negative = inv.record.w_time > 0;
        if inv.qq.is_zero() {
            let t = if negative { -Rational::one() } else { Rational::one() };
            return label(sig, Family::MT, ParameterValue::Exact(t), StabilizerStructure::CSo2);
        }
        return label(
            sig,
            Family::MT,
            mt_parameter(&inv.qq, &inv.h, negative),
            StabilizerStructure::C,
        );
    }
    // Degenerate span.  Either the parts are proportional to a single real
    // vector, whose causal type the sign of the hermitian pairing reads
    // off, or they span a degenerate plane around a null direction.
    if is_zero_vec(&inv.w) {
        if inv.h.is_positive() {
            return label(
                sig,
                Family::MT,
                ParameterValue::Exact(Rational::zero()),
                StabilizerStructure::CSo11,
            );
        }
        return label(sig, Family::MNeg, ParameterValue::None, StabilizerStructure::CSo2);
    }
    let family = if inv.record.w_time < 0 { Family::MPlus } else { Family::MMinus };
    label(sig, family, ParameterValue::None, StabilizerStructure::C)
}

/// A generator of the stabiliser kernel: an isometry generator together
/// with the complex eigenvalue it acts by on the line.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerGenerator {
    /// Coefficients in the fixed basis of `k`: two rotations and a third
    /// rotation in the definite signature, a rotation and two boosts in
    /// the split one.
    pub rotation: Vec3,
    pub eigenvalue: GaussianRational,
}

/// The stabiliser of a core line inside `ℂ ⊕ k`, presented by the kernel
/// of the exact eigenvalue system `A·z = λ·z`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerAlgebra {
    pub real_dimension: usize,
    pub structure: StabilizerStructure,
    pub kernel_basis: Vec<StabilizerGenerator>,
}

/// The fixed basis of `k` as real matrices on the frame: generators of the
/// rotations in the `(2,3)`, `(3,1)` and `(1,2)` planes in the definite
/// signature; the `(1,2)` rotation and the two boosts through the time
/// direction in the split one.
fn k_basis(sig: CoreSignature) -> [[[i64; 3]; 3]; 3] {
    match sig {
        CoreSignature::Definite => [
            [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
            [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
            [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
        ],
        CoreSignature::Split => [
            [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
            [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
            [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
        ],
    }
}

fn apply_matrix(a: &[[i64; 3]; 3], v: &Vec3) -> Vec3 {
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (i, oi) in out.iter_mut().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            if a[i][j] != 0 {
                *oi = &*oi + &(&Rational::int(a[i][j]) * vj);
            }
        }
    }
    out
}

/// Computes the stabiliser of the line through the representative: the
/// solutions of `A·x = λ₁x − λ₂y`, `A·y = λ₂x + λ₁y` over the reals,
/// with `A` running through `k` and `λ = λ₁ + iλ₂` through `ℂ`.
pub fn stabilizer_algebra(rep: &CoreLineRep) -> StabilizerAlgebra {
    let sig = rep.signature;
    let (x, y) = rep.parts();
    let basis = k_basis(sig);
    let images_x: Vec<Vec3> = basis.iter().map(|a| apply_matrix(a, &x)).collect();
    let images_y: Vec<Vec3> = basis.iter().map(|a| apply_matrix(a, &y)).collect();
    // Unknowns: the three coefficients in `k`, then λ₁, then λ₂.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(6);
    for i in 0..3 {
        let mut row = vec![Rational::zero(); 5];
        for k in 0..3 {
            row[k] = images_x[k][i].clone();
        }
        row[3] = -x[i].clone();
        row[4] = y[i].clone();
        rows.push(row);
    }
    for i in 0..3 {
        let mut row = vec![Rational::zero(); 5];
        for k in 0..3 {
            row[k] = images_y[k][i].clone();
        }
        row[3] = -y[i].clone();
        row[4] = -x[i].clone();
        rows.push(row);
    }
    let kernel = Matrix::from_rows(rows).kernel_basis();
    let kernel_basis: Vec<StabilizerGenerator> = kernel
        .iter()
        .map(|v| StabilizerGenerator {
            rotation: [v[0].clone(), v[1].clone(), v[2].clone()],
            eigenvalue: GaussianRational::new(v[3].clone(), v[4].clone()),
        })
        .collect();
    let structure = match kernel_basis.len() {
        0 => StabilizerStructure::C,
        1 => {
            // The sign of the trace form separates rotations from boosts;
            // a nilpotent generator cannot occur alone because the line
            // stabiliser of a null direction is two-dimensional.
            let t = trace_of_square(sig, &kernel_basis[0].rotation);
            assert!(!t.is_zero(), "one-dimensional stabilisers are semisimple");
            if t.is_negative() {
                StabilizerStructure::CSo2
            } else {
                StabilizerStructure::CSo11
            }
        }
        2 => StabilizerStructure::CSemidirect,
        d => unreachable!("a stabiliser kernel of dimension {} would fix the frame", d),
    };
    StabilizerAlgebra {
        real_dimension: 2 + kernel_basis.len(),
        structure,
        kernel_basis,
    }
}

fn trace_of_square(sig: CoreSignature, coeffs: &Vec3) -> Rational {
    let basis = k_basis(sig);
    let mut a = [[Rational::zero(), Rational::zero(), Rational::zero()],
        [Rational::zero(), Rational::zero(), Rational::zero()],
        [Rational::zero(), Rational::zero(), Rational::zero()]];
    for (k, m) in basis.iter().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                if m[i][j] != 0 {
                    a[i][j] = &a[i][j] + &(&Rational::int(m[i][j]) * &coeffs[k]);
                }
            }
        }
    }
    let mut tr = Rational::zero();
    for i in 0..3 {
        for j in 0..3 {
            tr = &tr + &(&a[i][j] * &a[j][i]);
        }
    }
    tr
}

/// The image of a reduced parameter pair under a rational circle point.
#[derive(Debug, Clone, PartialEq)]
pub struct S1Point {
    pub t1: Rational,
    pub t2: Rational,
}

impl S1Point {
    pub fn t2_squared(&self) -> Rational {
        &self.t2 * &self.t2
    }
}

fn check_circle(a: &Rational, b: &Rational) -> Result<(), ClassifyError> {
    if &(a * a) + &(b * b) != Rational::one() {
        return Err(ClassifyError::OffCircle { a: a.clone(), b: b.clone() });
    }
    Ok(())
}

/// The circle action on the reduced representatives
/// `frame_1 + i(t₁·frame_1 + t₂·frame_2)` in closed form.  The formula is
/// the same in both signatures because the representatives lie in the
/// span of the two space-like frame vectors.  The denominator is the
/// squared length of the rotated real part and vanishes only for
/// degenerate parameter pairs, which is reported as an error.
pub fn s1_action(
    circle: (Rational, Rational),
    point: (Rational, Rational),
) -> Result<S1Point, ClassifyError> {
    let (a, b) = circle;
    let (t1, t2) = point;
    check_circle(&a, &b)?;
    let d1 = &a - &(&b * &t1);
    let d2 = &b * &t2;
    let den = &(&d1 * &d1) + &(&d2 * &d2);
    if den.is_zero() {
        return Err(ClassifyError::DenominatorVanishes { a, b, t1, t2 });
    }
    let one = Rational::one();
    let cos2 = &(&a * &a) - &(&b * &b);
    let sincos = &a * &b;
    let radius = &(&t1 * &t1) + &(&t2 * &t2);
    let num1 = &(&t1 * &cos2) + &(&sincos * &(&one - &radius));
    Ok(S1Point { t1: &num1 / &den, t2: &t2 / &den })
}

/// The oracle the closed form must reproduce: move the representative by
/// the circle point inside the frame space of the given signature and
/// extract the reduced parameters from the orbit-invariant pairings,
/// `t₁ = ⟨x,y⟩/⟨x,x⟩` and `t₂² = ⟨y − t₁x, y − t₁x⟩/⟨x,x⟩`.
pub fn s1_oracle(
    sig: CoreSignature,
    circle: (Rational, Rational),
    point: (Rational, Rational),
) -> Result<(Rational, Rational), ClassifyError> {
    let (a, b) = circle;
    let (t1, t2) = point;
    check_circle(&a, &b)?;
    // The representative is frame_1 + i(t₁·frame_1 + t₂·frame_2); the
    // circle point multiplies it by a + ib.
    let xp = [&a - &(&b * &t1), -(&b * &t2), Rational::zero()];
    let yp = [&b + &(&a * &t1), &a * &t2, Rational::zero()];
    let xx = inner(sig, &xp, &xp);
    if xx.is_zero() {
        return Err(ClassifyError::DenominatorVanishes { a, b, t1, t2 });
    }
    let t1_new = &inner(sig, &xp, &yp) / &xx;
    let r = [
        &yp[0] - &(&t1_new * &xp[0]),
        &yp[1] - &(&t1_new * &xp[1]),
        &yp[2] - &(&t1_new * &xp[2]),
    ];
    let t2_sq = &inner(sig, &r, &r) / &xx;
    Ok((t1_new, t2_sq))
}

/// One row of a classification table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: String,
    pub parameter: String,
    pub generator: String,
    pub stabilizer: String,
    pub admissible: bool,
}

struct RowSpec {
    family: &'static str,
    parameter: &'static str,
    /// A concrete extremal generator of the representative class of the
    /// row, parsable in the contact algebra of the signature.
    generator: &'static str,
    stabilizer: StabilizerStructure,
    admissible: bool,
    /// How many equivalence classes the row contains; zero marks a
    /// continuum of non-admissible classes.
    classes: usize,
    /// Canonical frame representatives of the classes in the row (a
    /// sample for continuous rows), with their exact parameters.
    representatives: Vec<(CVec3, ParameterValue)>,
}

fn cz(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    GaussianRational::new(Rational::new(re.0, re.1), Rational::new(im.0, im.1))
}

fn row_specs(sig: CoreSignature) -> Vec<RowSpec> {
    let o = (0, 1);
    let one = (1, 1);
    match sig {
        CoreSignature::Definite => vec![
            RowSpec {
                family: "m_t",
                parameter: "t = 0, 1",
                generator: "z1^2+z2^2",
                stabilizer: StabilizerStructure::CSo2,
                admissible: true,
                classes: 2,
                representatives: vec![
                    ([cz(one, o), cz(o, o), cz(o, o)], ParameterValue::Exact(Rational::zero())),
                    ([cz(one, o), cz(o, one), cz(o, o)], ParameterValue::Exact(Rational::one())),
                ],
            },
            RowSpec {
                family: "m_t",
                parameter: "t in (0, 1)",
                generator: "3/2*z1^2+1/2*z2^2",
                stabilizer: StabilizerStructure::C,
                admissible: false,
                classes: 0,
                representatives: vec![(
                    [cz(one, o), cz(o, (1, 2)), cz(o, o)],
                    ParameterValue::Exact(Rational::new(1, 2)),
                )],
            },
        ],
        CoreSignature::Split => vec![
            RowSpec {
                family: "m_t",
                parameter: "t = +-1",
                generator: "2*z1^2",
                stabilizer: StabilizerStructure::CSo2,
                admissible: true,
                classes: 2,
                representatives: vec![
                    ([cz(one, o), cz(o, one), cz(o, o)], ParameterValue::Exact(Rational::one())),
                    (
                        [cz(one, o), cz(o, (-1, 1)), cz(o, o)],
                        ParameterValue::Exact(Rational::int(-1)),
                    ),
                ],
            },
            RowSpec {
                family: "m_t",
                parameter: "t = 0",
                generator: "z1^2-z2^2",
                stabilizer: StabilizerStructure::CSo11,
                admissible: true,
                classes: 1,
                representatives: vec![(
                    [cz(one, o), cz(o, o), cz(o, o)],
                    ParameterValue::Exact(Rational::zero()),
                )],
            },
            RowSpec {
                family: "m_t",
                parameter: "t != 0, +-1",
                generator: "3/2*z1^2-1/2*z2^2",
                stabilizer: StabilizerStructure::C,
                admissible: false,
                classes: 0,
                representatives: vec![
                    (
                        [cz(one, o), cz(o, (1, 2)), cz(o, o)],
                        ParameterValue::Exact(Rational::new(1, 2)),
                    ),
                    (
                        [cz(one, o), cz(o, (-1, 2)), cz(o, o)],
                        ParameterValue::Exact(Rational::new(-1, 2)),
                    ),
                ],
            },
            RowSpec {
                family: "m~_t",
                parameter: "t in R",
                generator: "z1^2-z2^2-2*z1*z2",
                stabilizer: StabilizerStructure::C,
                admissible: false,
                classes: 0,
                representatives: vec![
                    (
                        [cz(one, one), cz(o, o), cz(one, (-1, 1))],
                        ParameterValue::Exact(Rational::zero()),
                    ),
                    (
                        [cz(one, (2, 1)), cz(o, o), cz(one, o)],
                        ParameterValue::Exact(Rational::one()),
                    ),
                    (
                        [cz(one, o), cz(o, o), cz(one, (-2, 1))],
                        ParameterValue::Exact(Rational::int(-1)),
                    ),
                ],
            },
            RowSpec {
                family: "m_+-",
                parameter: "t = +-1",
                generator: "2*z1^2-2*i*z1*z2",
                stabilizer: StabilizerStructure::C,
                admissible: false,
                classes: 0,
                representatives: vec![
                    ([cz(one, o), cz(o, one), cz(one, o)], ParameterValue::None),
                    ([cz(one, o), cz(o, (-1, 1)), cz(one, o)], ParameterValue::None),
                ],
            },
            RowSpec {
                family: "m_<0",
                parameter: "-",
                generator: "z1*z2",
                stabilizer: StabilizerStructure::CSo2,
                admissible: true,
                classes: 1,
                representatives: vec![([cz(o, o), cz(o, o), cz(one, o)], ParameterValue::None)],
            },
            RowSpec {
                family: "m_null",
                parameter: "-",
                generator: "z1^2-z2^2-2*i*z1*z2",
                stabilizer: StabilizerStructure::CSemidirect,
                admissible: true,
                classes: 1,
                representatives: vec![([cz(one, o), cz(o, o), cz(one, o)], ParameterValue::None)],
            },
        ],
    }
}

/// Canonical representatives of the classes listed in the classification
/// table, one core line per class and a sample point for the rows that
/// carry a continuum of non-admissible classes.
pub fn canonical_representatives(sig: CoreSignature) -> Vec<CoreLineRep> {
    row_specs(sig)
        .into_iter()
        .flat_map(|r| r.representatives)
        .map(|(z, _)| CoreLineRep::new(sig, z).expect("representatives are nonzero"))
        .collect()
}

/// The classification table of the signature: every canonical family with
/// a concrete generator of its representative class, the stabiliser
/// structure, and the admissibility of the classes in the row.
pub fn enumerate_tables(sig: CoreSignature) -> Vec<TableRow> {
    row_specs(sig)
        .into_iter()
        .map(|r| TableRow {
            family: r.family.to_string(),
            parameter: r.parameter.to_string(),
            generator: r.generator.to_string(),
            stabilizer: r.stabilizer.to_string(),
            admissible: r.admissible,
        })
        .collect()
}

/// The number of admissible equivalence classes of the signature: two in
/// the definite case, five in the split one.
pub fn admissible_class_count(sig: CoreSignature) -> usize {
    row_specs(sig).iter().filter(|r| r.admissible).map(|r| r.classes).sum()
}

/// The total number of admissible classes over both signatures.
pub fn total_admissible_classes() -> usize {
    admissible_class_count(CoreSignature::Definite)
        + admissible_class_count(CoreSignature::Split)
}

/// The classification table rendered as a Markdown table; the JSON
/// emission of [`enumerate_tables`] is the source of truth and this view
/// is derived from the same rows.
pub fn tables_markdown(sig: CoreSignature) -> String {
    let mut out = String::new();
    out.push_str(&format!("### Cores of signature {}\n\n", sig));
    out.push_str("| family | parameter | generator | stabilizer | admissible |\n");
    out.push_str("|---|---|---|---|---|\n");
    for row in enumerate_tables(sig) {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            row.family,
            row.parameter,
            row.generator,
            row.stabilizer,
            if row.admissible { "yes" } else { "no" }
        ));
    }
    out
}
