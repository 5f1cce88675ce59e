//! Exact arithmetic in the maximal transitive prolongation of a Heisenberg
//! algebra.
//!
//! The negatively graded part is a Heisenberg algebra: a one-dimensional
//! center `T` in degree −2 and a symplectic vector space of dimension `2n`
//! in degree −1.  Its maximal transitive prolongation carries components in
//! every degree `p ≥ -2`, each splitting into symmetric powers of the
//! degree −1 component,
//!
//! ```text
//!     c^p  ≅  S^{p+2} ⊕ S^p ⊕ S^{p-2} ⊕ …
//! ```
//!
//! with the summands past the first one reached by iterating the raising
//! operator `mu`.  Everything here is done over the Gaussian rationals in
//! the complexified generators `z_i`, `zb_i`, which diagonalize a fixed
//! compatible complex structure of signature `(r, s)` on the degree −1
//! component; real elements are the ones fixed by [`ContactElement::conjugate`].
//! All arithmetic is exact.

mod bracket;
mod element;
mod monomial;
mod text;

pub use bracket::RecursiveBracket;
pub use element::ContactElement;
pub use monomial::{monomials, Monomial};
pub use text::{parse_element, ParseError};

use crate::linalg::Ambient;
use crate::scalar::GaussianRational;

/// The contact algebra attached to a Heisenberg algebra with `2n`-dimensional
/// degree −1 component and a compatible complex structure of signature
/// `(r, s)`, `r + s = n`.
///
/// The generators `z_1, …, z_n` span the holomorphic eigenspace of the
/// complex structure and `zb_i` the antiholomorphic one; the symplectic form
/// pairs `z_i` with `zb_i` to `-i/2` for `i ≤ r` and to `i/2` for `i > r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactAlgebra {
    n: usize,
    r: usize,
}

impl ContactAlgebra {
    pub fn new(r: usize, s: usize) -> Self {
        let n = r + s;
        assert!(n > 0, "the degree -1 component must be nonzero");
        ContactAlgebra { n, r }
    }

    /// The definite algebra of signature `(n, 0)`.
    pub fn standard(n: usize) -> Self {
        ContactAlgebra::new(n, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.n - self.r
    }

    /// Number of generator slots, `2n`.
    pub fn width(&self) -> usize {
        2 * self.n
    }

    /// The symplectic pairing of two generator slots.
    pub fn gram(&self, a: usize, b: usize) -> GaussianRational {
        assert!(a < self.width() && b < self.width());
        if b == a + self.n {
            // pairing of z_{a+1} with zb_{a+1}
            if a < self.r {
                GaussianRational::imag(-1, 2)
            } else {
                GaussianRational::imag(1, 2)
            }
        } else if a == b + self.n {
            -self.gram(b, a)
        } else {
            GaussianRational::zero()
        }
    }

    /// The holomorphic generator `z_i`, `1 ≤ i ≤ n`.
    pub fn z(&self, i: usize) -> ContactElement {
        assert!((1..=self.n).contains(&i), "generator index out of range");
        ContactElement::term(
            self.n,
            -1,
            Monomial::generator(self.width(), i - 1),
            GaussianRational::one(),
        )
    }

    /// The antiholomorphic generator `zb_i`, `1 ≤ i ≤ n`.
    pub fn zb(&self, i: usize) -> ContactElement {
        assert!((1..=self.n).contains(&i), "generator index out of range");
        ContactElement::term(
            self.n,
            -1,
            Monomial::generator(self.width(), self.n + i - 1),
            GaussianRational::one(),
        )
    }

    /// The generator in a raw slot, `0 ≤ slot < 2n`.
    pub fn generator(&self, slot: usize) -> ContactElement {
        ContactElement::term(
            self.n,
            -1,
            Monomial::generator(self.width(), slot),
            GaussianRational::one(),
        )
    }

    /// The central element `T` spanning the degree −2 component.
    pub fn center(&self) -> ContactElement {
        ContactElement::term(self.n, -1, Monomial::one(self.width()), GaussianRational::one())
    }

    /// The grading element `E = -2 mu(T)`: its adjoint action on the
    /// component of degree `p` is multiplication by `p`.
    pub fn grading_element(&self) -> ContactElement {
        ContactElement::term(self.n, 0, Monomial::one(self.width()), GaussianRational::int(-2))
    }

    /// The complex structure, as the degree 0 element acting on `z_i` by `i`
    /// and on `zb_i` by `-i`.
    pub fn complex_structure(&self) -> ContactElement {
        let mut j = ContactElement::zero(self.n, 0);
        for i in 0..self.n {
            let mut exps = vec![0; self.width()];
            exps[i] = 1;
            exps[i + self.n] = 1;
            let sign = if i < self.r { 2 } else { -2 };
            j.add_term(-1, Monomial::from_exps(exps), GaussianRational::int(sign));
        }
        j
    }

    /// The element of the symmetric-power part determined by a monomial:
    /// `m ∈ S^d` viewed in the component of degree `d - 2`.
    pub fn k_element(&self, m: Monomial) -> ContactElement {
        assert_eq!(m.width(), self.width(), "monomial width mismatch");
        ContactElement::term(self.n, -1, m, GaussianRational::one())
    }

    /// Layers present in the component of degree `p`: `-1 ..= floor(p/2)`.
    fn layers(&self, p: i64) -> impl Iterator<Item = i64> {
        -1..=p.div_euclid(2)
    }

    /// Dimension of the component of degree `p`.
    pub fn dim(&self, p: i64) -> usize {
        self.basis_keys(p).len()
    }

    /// The `(layer, monomial)` pairs indexing the standard basis of the
    /// component of degree `p`, in increasing order.
    pub fn basis_keys(&self, p: i64) -> Vec<(i64, Monomial)> {
        let mut keys = Vec::new();
        for layer in self.layers(p) {
            let d = (p - 2 * layer) as u32;
            for m in monomials(self.width(), d) {
                keys.push((layer, m));
            }
        }
        keys
    }

    /// The standard basis of the component of degree `p`.
    pub fn basis(&self, p: i64) -> Vec<ContactElement> {
        self.basis_keys(p)
            .into_iter()
            .map(|(layer, m)| ContactElement::term(self.n, layer, m, GaussianRational::one()))
            .collect()
    }

    /// The component of degree `p` as an abstract coordinate space.
    pub fn component(&self, p: i64) -> Ambient {
        Ambient::new(format!("c[{}]:n={}:r={}", p, self.n, self.r), self.dim(p))
    }

    /// Coordinates of an element with respect to `basis_keys(x.degree())`.
    pub fn coordinates(&self, x: &ContactElement) -> Vec<GaussianRational> {
        assert_eq!(x.n(), self.n, "mixed generator counts");
        self.basis_keys(x.degree())
            .into_iter()
            .map(|(layer, m)| x.coefficient(layer, &m))
            .collect()
    }

    pub fn element_from_coordinates(
        &self,
        p: i64,
        coords: &[GaussianRational],
    ) -> ContactElement {
        let keys = self.basis_keys(p);
        assert_eq!(coords.len(), keys.len(), "coordinate length mismatch");
        let mut x = ContactElement::zero(self.n, p);
        for ((layer, m), c) in keys.into_iter().zip(coords) {
            x.add_term(layer, m, c.clone());
        }
        x
    }

    pub fn parse(&self, s: &str) -> Result<ContactElement, ParseError> {
        parse_element(self.n, s)
    }
}

/// An invertible linear map of the degree −1 component that scales the
/// symplectic pairing by a nonzero multiplier, together with its canonical
/// extension to every component of the contact algebra.
#[derive(Clone, Debug)]
pub struct LinearAutomorphism {
    n: usize,
    /// `images[k]` holds the coordinates of the image of slot `k`.
    images: Vec<Vec<GaussianRational>>,
    multiplier: GaussianRational,
}

impl LinearAutomorphism {
    /// Build the automorphism sending the generator in slot `k` to the
    /// linear combination `images[k]`.  Fails unless the map scales the
    /// pairing uniformly: `B(g v, g w) = c · B(v, w)` with `c ≠ 0`.
    pub fn new(
        alg: &ContactAlgebra,
        images: Vec<Vec<GaussianRational>>,
    ) -> Result<Self, String> {
        let w = alg.width();
        if images.len() != w || images.iter().any(|row| row.len() != w) {
            return Err(format!("expected a {w} x {w} coordinate table"));
        }
        let pair = |a: &[GaussianRational], b: &[GaussianRational]| {
            let mut acc = GaussianRational::zero();
            for k in 0..w {
                if a[k].is_zero() {
                    continue;
                }
                for l in 0..w {
                    let g = alg.gram(k, l);
                    if !g.is_zero() && !b[l].is_zero() {
                        acc += &(&a[k] * &b[l]) * &g;
                    }
                }
            }
            acc
        };
        // The multiplier read off the first symplectic pair.
        let c = &pair(&images[0], &images[alg.n()]) / &alg.gram(0, alg.n());
        if c.is_zero() {
            return Err("the map is degenerate".to_string());
        }
        for a in 0..w {
            for b in 0..w {
                if pair(&images[a], &images[b]) != &c * &alg.gram(a, b) {
                    return Err("the map does not scale the symplectic pairing".to_string());
                }
            }
        }
        Ok(LinearAutomorphism { n: alg.n(), images, multiplier: c })
    }

    /// The diagonal map `z_i ↦ lambda_i z_i`, `zb_i ↦ mu_i zb_i` given the
    /// interleaved eigenvalues `(lambda_1, …, lambda_n, mu_1, …, mu_n)`.
    pub fn diagonal(
        alg: &ContactAlgebra,
        eigenvalues: Vec<GaussianRational>,
    ) -> Result<Self, String> {
        let w = alg.width();
        if eigenvalues.len() != w {
            return Err(format!("expected {w} eigenvalues"));
        }
        let mut images = vec![vec![GaussianRational::zero(); w]; w];
        for (k, ev) in eigenvalues.into_iter().enumerate() {
            images[k][k] = ev;
        }
        LinearAutomorphism::new(alg, images)
    }

    pub fn multiplier(&self) -> &GaussianRational {
        &self.multiplier
    }

    /// Whether the map commutes with complex conjugation, i.e. comes from a
    /// real map of the underlying real symplectic space.
    pub fn is_real(&self) -> bool {
        let w = 2 * self.n;
        for k in 0..w {
            let kc = (k + self.n) % w;
            for l in 0..w {
                let lc = (l + self.n) % w;
                if self.images[kc][lc] != self.images[k][l].conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the map commutes with the complex structure, i.e. never
    /// mixes holomorphic and antiholomorphic generators.
    pub fn preserves_complex_structure(&self) -> bool {
        let w = 2 * self.n;
        for k in 0..w {
            for l in 0..w {
                if (k < self.n) != (l < self.n) && !self.images[k][l].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Apply the extended automorphism to an element of any component.  A
    /// term in layer `i` of the component of degree `p` picks up the factor
    /// `c^{i-p}` beyond the substitution of generators, `c` the multiplier.
    pub fn apply(&self, x: &ContactElement) -> ContactElement {
        assert_eq!(x.n(), self.n, "mixed generator counts");
        let p = x.degree();
        let mut out = ContactElement::zero(self.n, p);
        for ((layer, m), coeff) in x.terms() {
            let scale = gpow(&self.multiplier, layer - p);
            for (mm, c) in self.substitute(m) {
                out.add_term(*layer, mm, &(&c * coeff) * &scale);
            }
        }
        out
    }

    /// Expand the image of a monomial under generator substitution.
    fn substitute(&self, m: &Monomial) -> Vec<(Monomial, GaussianRational)> {
        let w = 2 * self.n;
        let mut acc: Vec<(Monomial, GaussianRational)> =
            vec![(Monomial::one(w), GaussianRational::one())];
        for slot in 0..w {
            for _ in 0..m.exp(slot) {
                let mut next: std::collections::BTreeMap<Monomial, GaussianRational> =
                    std::collections::BTreeMap::new();
                for (mono, c) in &acc {
                    for (l, img) in self.images[slot].iter().enumerate() {
                        if img.is_zero() {
                            continue;
                        }
                        let key = mono.mul(&Monomial::generator(w, l));
                        let add = c * img;
                        let entry = next.entry(key).or_insert_with(GaussianRational::zero);
                        *entry += add;
                    }
                }
                acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        acc
    }
}

fn gpow(c: &GaussianRational, e: i64) -> GaussianRational {
    let base = if e < 0 { c.recip() } else { c.clone() };
    let mut out = GaussianRational::one();
    for _ in 0..e.unsigned_abs() {
        out = &out * &base;
    }
    out
}
