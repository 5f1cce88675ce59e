//! The Lie bracket of the contact algebra.
//!
//! Two implementations are provided.  `bracket` evaluates closed structure
//! constants layer by layer: the bracket of two raised monomials is a
//! combination of their product and of their Poisson bracket, with rational
//! coefficients depending on the degrees and layers involved.  The much
//! slower `bracket_recursive` never uses those constants: it reduces every
//! bracket to the Heisenberg level through the defining identities of the
//! prolongation (equivariance under the central element and under the
//! degree −1 component) and reconstructs the symmetric-power part of the
//! result from its derivatives.  The two agree; the second exists to keep
//! the first honest.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::scalar::{GaussianRational, Rational};

use super::element::ContactElement;
use super::monomial::Monomial;
use super::ContactAlgebra;

impl ContactAlgebra {
    /// The Lie bracket, via closed structure constants.
    pub fn bracket(&self, x: &ContactElement, y: &ContactElement) -> ContactElement {
        assert_eq!(x.n(), self.n(), "mixed generator counts");
        assert_eq!(y.n(), self.n(), "mixed generator counts");
        let (px, py) = (x.degree(), y.degree());
        let mut out = ContactElement::zero(self.n(), px + py);
        for ((i, a), ca) in x.terms() {
            for ((j, b), cb) in y.terms() {
                let c = ca * cb;
                match (*i >= 0, *j >= 0) {
                    (false, false) => {
                        // Two symmetric-power terms: the Poisson bracket.
                        for (m, w) in self.poisson(a, b) {
                            out.add_term(-1, m, &c * &w);
                        }
                    }
                    (false, true) => {
                        // Symmetric-power term against a raised one.
                        out.add_term(j - 1, a.mul(b), c.scale(&Rational::new(px, 2)));
                        for (m, w) in self.poisson(a, b) {
                            out.add_term(*j, m, &c * &w);
                        }
                    }
                    (true, false) => {
                        out.add_term(i - 1, a.mul(b), -c.scale(&Rational::new(py, 2)));
                        for (m, w) in self.poisson(b, a) {
                            out.add_term(*i, m, -(&c * &w));
                        }
                    }
                    (true, true) => {
                        let al = alpha(px, *i, py, *j);
                        if !al.is_zero() {
                            out.add_term(i + j, a.mul(b), c.scale(&al));
                        }
                        let be = beta(*i, *j);
                        for (m, w) in self.poisson(a, b) {
                            out.add_term(i + j + 1, m, (&c * &w).scale(&be));
                        }
                    }
                }
            }
        }
        out
    }

    /// The Poisson bracket of two monomials with respect to the symplectic
    /// pairing, as a list of (monomial, coefficient) contributions.
    pub(crate) fn poisson(
        &self,
        a: &Monomial,
        b: &Monomial,
    ) -> Vec<(Monomial, GaussianRational)> {
        let n = self.n();
        let mut out = Vec::new();
        for k in 0..n {
            let w = self.gram(k, k + n);
            if let (Some((f1, m1)), Some((f2, m2))) = (a.derivative(k), b.derivative(k + n)) {
                out.push((m1.mul(&m2), w.scale(&Rational::int(f1 as i64 * f2 as i64))));
            }
            if let (Some((f1, m1)), Some((f2, m2))) = (a.derivative(k + n), b.derivative(k)) {
                out.push((m1.mul(&m2), -w.scale(&Rational::int(f1 as i64 * f2 as i64))));
            }
        }
        out
    }

    /// The Lie bracket, reduced recursively to the Heisenberg level.  For
    /// repeated evaluations build a [`RecursiveBracket`] once instead.
    pub fn bracket_recursive(&self, x: &ContactElement, y: &ContactElement) -> ContactElement {
        RecursiveBracket::new(self).bracket(x, y)
    }
}

/// Memoizing evaluator for the recursive bracket.  Results for pairs of
/// basis terms are cached, so sharing one evaluator across many brackets of
/// the same algebra makes the reduction tractable.
pub struct RecursiveBracket<'a> {
    alg: &'a ContactAlgebra,
    cache: RefCell<HashMap<((i64, Monomial), (i64, Monomial)), ContactElement>>,
}

impl<'a> RecursiveBracket<'a> {
    pub fn new(alg: &'a ContactAlgebra) -> Self {
        RecursiveBracket { alg, cache: RefCell::new(HashMap::new()) }
    }

    /// The bracket, expanded bilinearly over cached term pairs.
    pub fn bracket(&self, x: &ContactElement, y: &ContactElement) -> ContactElement {
        assert_eq!(x.n(), self.alg.n(), "mixed generator counts");
        assert_eq!(y.n(), self.alg.n(), "mixed generator counts");
        let mut out = ContactElement::zero(self.alg.n(), x.degree() + y.degree());
        for ((i, a), ca) in x.terms() {
            for ((j, b), cb) in y.terms() {
                let t = self.term_bracket(*i, a, *j, b);
                if !t.is_zero() {
                    out = &out + &t.scaled(&(ca * cb));
                }
            }
        }
        out
    }

    fn term_bracket(&self, i: i64, a: &Monomial, j: i64, b: &Monomial) -> ContactElement {
        let key = ((i, a.clone()), (j, b.clone()));
        if let Some(hit) = self.cache.borrow().get(&key) {
            return hit.clone();
        }
        let n = self.alg.n();
        let x = ContactElement::term(n, i, a.clone(), GaussianRational::one());
        let y = ContactElement::term(n, j, b.clone(), GaussianRational::one());
        let val = self.eval(&x, &y);
        self.cache.borrow_mut().insert(key, val.clone());
        val
    }

    fn eval(&self, x: &ContactElement, y: &ContactElement) -> ContactElement {
        let alg = self.alg;
        let (px, py) = (x.degree(), y.degree());
        let d = px + py;
        if py == -2 {
            // y is a multiple of the center; the bracket drops the
            // symmetric-power part and lowers each remaining layer.
            let t = y.coefficient(-1, &Monomial::one(alg.width()));
            return x.shift_down().scaled(&t);
        }
        if px == -2 {
            let t = x.coefficient(-1, &Monomial::one(alg.width()));
            return y.shift_down().scaled(&-t);
        }
        if py == -1 {
            // Write x = K + mu(rest); then
            //   [x, v] = {K, v} + mu([rest, v]) + (1/2) · (symmetric part of rest) · v.
            let mut out = ContactElement::zero(alg.n(), d);
            for ((_, a), ca) in x.k_part().terms() {
                for ((_, b), cb) in y.terms() {
                    for (m, w) in alg.poisson(a, b) {
                        out.add_term(-1, m, &(ca * cb) * &w);
                    }
                }
            }
            let rest = x.shift_down();
            if !rest.is_zero() {
                out = &out + &self.bracket(&rest, y).mu();
                for ((_, a), ca) in rest.k_part().terms() {
                    for ((_, b), cb) in y.terms() {
                        out.add_term(-1, a.mul(b), (ca * cb).scale(&Rational::new(1, 2)));
                    }
                }
            }
            return out;
        }
        if px < 0 {
            return -&self.bracket(y, x);
        }

        // Both degrees are nonnegative.  The layers of [x, y] above the
        // symmetric-power part are determined by the bracket with the center,
        //   [[x, y], T] = [[x, T], y] + [x, [y, T]],
        // and the symmetric-power part K by its brackets with the degree -1
        // generators, which give the derivatives of K through the pairing.
        let a2 = &self.bracket(&x.shift_down(), y) + &self.bracket(x, &y.shift_down());
        let raised = a2.mu();
        let mut out = raised.clone();
        let w = alg.width();
        let mut pk = Vec::with_capacity(w);
        for b in 0..w {
            let gb = alg.generator(b);
            let a1 = &self.bracket(&self.bracket(x, &gb), y)
                + &self.bracket(x, &self.bracket(y, &gb));
            let p = &a1 - &self.bracket(&raised, &gb);
            assert!(
                p.shift_down().is_zero(),
                "derivative of the symmetric-power part is not symmetric-power"
            );
            pk.push(p);
        }
        // The pairing couples slot m only to its symplectic partner, and its
        // square is 1/4 times the identity.
        let euler = GaussianRational::rat(1, d + 2);
        for m_slot in 0..w {
            let partner = (m_slot + alg.n()) % w;
            let weight = alg.gram(partner, m_slot).scale(&Rational::int(4));
            let gm = Monomial::generator(w, m_slot);
            for ((_, mono), c) in pk[partner].terms() {
                out.add_term(-1, mono.mul(&gm), &(c * &weight) * &euler);
            }
        }
        out
    }
}

/// Convention-laden binomial coefficient: `C(i+k-1, k)` with `C(-1, 0) = 1`
/// and `C(k-1, k) = 0` for `k ≥ 1`.
fn raising_binomial(i: i64, k: i64) -> i64 {
    if k == 0 {
        1
    } else if i == 0 {
        0
    } else {
        num_integer::binomial((i + k - 1) as u64, k as u64) as i64
    }
}

/// The triangular sum `S(i, j) = sum_{k=0}^{j} C(i+k-1, k) (j+1-k)` entering
/// the structure constants of two raised terms.
fn s_sum(i: i64, j: i64) -> i64 {
    (0..=j).map(|k| raising_binomial(i, k) * (j + 1 - k)).sum()
}

/// Coefficient of the monomial product in the bracket of a layer `i` term of
/// degree `p` with a layer `j` term of degree `q`.
fn alpha(p: i64, i: i64, q: i64, j: i64) -> Rational {
    let left = Rational::new(p - 2 * i - 2, 2) * Rational::int(s_sum(i, j));
    let right = Rational::new(q - 2 * j - 2, 2) * Rational::int(s_sum(j, i));
    left - right
}

/// Coefficient of the Poisson bracket in the same expansion.
fn beta(i: i64, j: i64) -> Rational {
    Rational::int(s_sum(i, j) + s_sum(j, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;
    use proptest::prelude::*;

    fn alg1() -> ContactAlgebra {
        ContactAlgebra::standard(1)
    }

    fn k(alg: &ContactAlgebra, exps: Vec<u32>) -> ContactElement {
        alg.k_element(Monomial::from_exps(exps))
    }

    #[test]
    fn structure_constant_special_values() {
        for j in 0..6 {
            assert_eq!(s_sum(0, j), j + 1);
            assert_eq!(s_sum(j, 0), 1);
        }
        for q in 0..5 {
            for j in 0..=q / 2 {
                assert_eq!(alpha(0, 0, q, j), Rational::new(-q, 2));
            }
        }
        assert_eq!(alpha(1, 0, 1, 0), Rational::zero());
        assert_eq!(alpha(1, 0, 2, 1), Rational::zero());
        assert_eq!(alpha(2, 1, 2, 1), Rational::zero());
        assert_eq!(beta(0, 0), Rational::int(2));
        assert_eq!(beta(0, 1), Rational::int(3));
    }

    #[test]
    fn heisenberg_pairing() {
        let alg = alg1();
        let zzb = alg.bracket(&alg.z(1), &alg.zb(1));
        assert_eq!(zzb, alg.center().scaled(&G::imag(-1, 2)));
        assert!(alg.bracket(&alg.z(1), &alg.z(1)).is_zero());

        let alg2 = ContactAlgebra::new(1, 1);
        assert_eq!(
            alg2.bracket(&alg2.z(1), &alg2.zb(1)),
            alg2.center().scaled(&G::imag(-1, 2))
        );
        assert_eq!(
            alg2.bracket(&alg2.z(2), &alg2.zb(2)),
            alg2.center().scaled(&G::imag(1, 2))
        );
        assert!(alg2.bracket(&alg2.z(1), &alg2.zb(2)).is_zero());
        assert!(alg2.bracket(&alg2.z(1), &alg2.z(2)).is_zero());
    }

    #[test]
    fn grading_element_acts_by_degree() {
        for (r, s) in [(1, 0), (0, 1), (2, 0), (1, 1)] {
            let alg = ContactAlgebra::new(r, s);
            let e = alg.grading_element();
            for p in -2..=3 {
                for x in alg.basis(p) {
                    assert_eq!(alg.bracket(&e, &x), x.scaled(&G::int(p)), "p={p} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn complex_structure_acts_with_the_right_signs() {
        for (r, s) in [(1, 0), (2, 0), (1, 1), (0, 2)] {
            let alg = ContactAlgebra::new(r, s);
            let j = alg.complex_structure();
            for i in 1..=alg.n() {
                assert_eq!(alg.bracket(&j, &alg.z(i)), alg.z(i).scaled(&G::i()));
                assert_eq!(alg.bracket(&j, &alg.zb(i)), alg.zb(i).scaled(&-G::i()));
            }
            assert!(alg.bracket(&alg.grading_element(), &j).is_zero());
            assert!(alg.bracket(&j, &alg.center()).is_zero());
        }
    }

    #[test]
    fn eigencomponent_brackets_with_the_complex_structure() {
        let alg = ContactAlgebra::new(1, 1);
        let j = alg.complex_structure();
        let x = ContactElement::from_terms(
            2,
            1,
            vec![
                (-1, Monomial::from_exps(vec![2, 1, 0, 0]), G::int(1)),
                (-1, Monomial::from_exps(vec![1, 0, 0, 2]), G::rat(3, 7)),
                (0, Monomial::from_exps(vec![0, 0, 0, 1]), G::imag(-2, 1)),
            ],
        );
        for (nu, part) in x.eigendecompose() {
            let expect = part.scaled(&G::imag(nu, 1));
            assert_eq!(alg.bracket(&j, &part), expect);
        }
    }

    #[test]
    fn bracket_with_center_inverts_the_raising_operator() {
        let alg = alg1();
        for p in -2..=3 {
            for x in alg.basis(p) {
                assert_eq!(alg.bracket(&x.mu(), &alg.center()), x);
                assert_eq!(alg.bracket(&alg.center(), &x.mu()), -&x);
            }
        }
        // The symmetric-power part is exactly the kernel of that bracket.
        for d in 0..=4u32 {
            for m in super::super::monomials(2, d) {
                assert!(alg.bracket(&alg.k_element(m), &alg.center()).is_zero());
            }
        }
    }

    #[test]
    fn raising_operator_commutes_with_degree_zero_symmetric_part() {
        let alg = ContactAlgebra::new(1, 1);
        for a in alg.basis(0) {
            if !a.shift_down().is_zero() {
                continue; // only the plain S^2 terms
            }
            for p in -2..=2 {
                for y in alg.basis(p) {
                    assert_eq!(alg.bracket(&a, &y.mu()), alg.bracket(&a, &y).mu());
                }
            }
        }
    }

    // Brackets of low-degree generators, pinned by hand from the defining
    // identities.  Everything is in the definite rank-one algebra, where
    // [z, zb] = -i/2 · T.
    #[test]
    fn rank_one_bracket_table() {
        let alg = alg1();
        let z = alg.z(1);
        let zb = alg.zb(1);
        let mz = z.mu();
        let mzb = zb.mu();
        let z2 = k(&alg, vec![2, 0]);
        let zzb = k(&alg, vec![1, 1]);
        let zb2 = k(&alg, vec![0, 2]);
        let z3 = k(&alg, vec![3, 0]);
        let z2zb = k(&alg, vec![2, 1]);
        let zzb2 = k(&alg, vec![1, 2]);
        let zb3 = k(&alg, vec![0, 3]);
        let mt = alg.center().mu();

        assert_eq!(alg.bracket(&z3, &zb), z2.scaled(&G::imag(-3, 2)));
        assert_eq!(alg.bracket(&z2zb, &z), z2.scaled(&G::imag(1, 2)));
        assert_eq!(alg.bracket(&mz, &z), z2.scaled(&G::rat(1, 2)));
        assert_eq!(
            alg.bracket(&mzb, &z),
            &zzb.scaled(&G::rat(1, 2)) + &mt.scaled(&G::imag(1, 2))
        );
        assert_eq!(alg.bracket(&zzb2, &z), zzb.scaled(&G::i()));
        assert_eq!(alg.bracket(&zb3, &z), zb2.scaled(&G::imag(3, 2)));
        assert_eq!(alg.bracket(&z2zb, &zb), zzb.scaled(&-G::i()));
        assert_eq!(
            alg.bracket(&mz, &zb),
            &zzb.scaled(&G::rat(1, 2)) + &mt.scaled(&G::imag(-1, 2))
        );
        assert_eq!(alg.bracket(&mzb, &zb), zb2.scaled(&G::rat(1, 2)));
        assert!(alg.bracket(&z3, &z).is_zero());
        assert!(alg.bracket(&zb3, &zb).is_zero());
    }

    // [z^2 + a z zb, zb^2 + conj(a) z zb] = -i conj(a) z^2 - 2i z zb - i a zb^2
    // whenever |a| = 1; these degree 0 spans close into subalgebras.
    #[test]
    fn unit_coefficient_closure_in_degree_zero() {
        let alg = alg1();
        let z2 = k(&alg, vec![2, 0]);
        let zzb = k(&alg, vec![1, 1]);
        let zb2 = k(&alg, vec![0, 2]);
        for a in [
            G::int(1),
            G::i(),
            G::new(Rational::new(3, 5), Rational::new(4, 5)),
            G::new(Rational::new(-5, 13), Rational::new(12, 13)),
        ] {
            let x = &z2 + &zzb.scaled(&a);
            let y = &zb2 + &zzb.scaled(&a.conj());
            let lhs = alg.bracket(&x, &y);
            let rhs = &(&z2.scaled(&-(&G::i() * &a.conj())) + &zzb.scaled(&G::imag(-2, 1)))
                + &zb2.scaled(&-(&G::i() * &a));
            assert_eq!(lhs, rhs, "a = {a}");
        }
    }

    // The generator z1^2 - z2^2 - 2i z1 z2 of the degenerate quadric model
    // commutes with its own conjugate in mixed signature.
    #[test]
    fn null_quadric_generator_commutes_with_conjugate() {
        let alg = ContactAlgebra::new(1, 1);
        let x = ContactElement::from_terms(
            2,
            0,
            vec![
                (-1, Monomial::from_exps(vec![2, 0, 0, 0]), G::int(1)),
                (-1, Monomial::from_exps(vec![0, 2, 0, 0]), G::int(-1)),
                (-1, Monomial::from_exps(vec![1, 1, 0, 0]), G::imag(-2, 1)),
            ],
        );
        assert!(alg.bracket(&x, &x.conjugate()).is_zero());
        // In the definite algebra the same element does not.
        let alg20 = ContactAlgebra::new(2, 0);
        assert!(!alg20.bracket(&x, &x.conjugate()).is_zero());
    }

    #[test]
    fn closed_form_matches_recursion_in_rank_one() {
        let alg = alg1();
        let oracle = RecursiveBracket::new(&alg);
        for p in -2..=3i64 {
            for q in p..=3i64 {
                for x in alg.basis(p) {
                    for y in alg.basis(q) {
                        assert_eq!(
                            alg.bracket(&x, &y),
                            oracle.bracket(&x, &y),
                            "p={p} q={q} x={x} y={y}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_recursion_in_mixed_signature() {
        let alg = ContactAlgebra::new(1, 1);
        let oracle = RecursiveBracket::new(&alg);
        for p in -2..=2i64 {
            for q in p..=2i64 {
                for x in alg.basis(p) {
                    for y in alg.basis(q) {
                        assert_eq!(
                            alg.bracket(&x, &y),
                            oracle.bracket(&x, &y),
                            "p={p} q={q} x={x} y={y}"
                        );
                    }
                }
            }
        }
    }

    fn arb_element(
        alg: ContactAlgebra,
        degrees: std::ops::RangeInclusive<i64>,
    ) -> impl Strategy<Value = ContactElement> {
        degrees.prop_flat_map(move |p| {
            let keys = alg.basis_keys(p);
            let n = alg.n();
            let len = keys.len();
            (
                proptest::collection::vec(0..len, 1..=3),
                proptest::collection::vec((-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3), 1..=3),
            )
                .prop_map(move |(idx, coeffs)| {
                    let mut x = ContactElement::zero(n, p);
                    for (ix, (re_n, re_d, im_n, im_d)) in idx.iter().zip(coeffs) {
                        let (layer, m) = keys[*ix].clone();
                        let c = G::new(
                            Rational::new(re_n, re_d),
                            Rational::new(im_n, im_d),
                        );
                        x.add_term(layer, m, c);
                    }
                    x
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bracket_is_antisymmetric(
            x in arb_element(ContactAlgebra::new(1, 1), -2..=3),
            y in arb_element(ContactAlgebra::new(1, 1), -2..=3),
        ) {
            let alg = ContactAlgebra::new(1, 1);
            prop_assert_eq!(alg.bracket(&x, &y), -&alg.bracket(&y, &x));
        }

        #[test]
        fn jacobi_identity_holds(
            x in arb_element(ContactAlgebra::standard(1), -2..=3),
            y in arb_element(ContactAlgebra::standard(1), -2..=3),
            z in arb_element(ContactAlgebra::standard(1), -2..=3),
        ) {
            let alg = ContactAlgebra::standard(1);
            let cyc = &(&alg.bracket(&alg.bracket(&x, &y), &z)
                + &alg.bracket(&alg.bracket(&y, &z), &x))
                + &alg.bracket(&alg.bracket(&z, &x), &y);
            prop_assert!(cyc.is_zero(), "cyclic sum = {}", cyc);
        }

        #[test]
        fn jacobi_identity_holds_in_mixed_signature(
            x in arb_element(ContactAlgebra::new(1, 1), -2..=2),
            y in arb_element(ContactAlgebra::new(1, 1), -2..=2),
            z in arb_element(ContactAlgebra::new(1, 1), -2..=2),
        ) {
            let alg = ContactAlgebra::new(1, 1);
            let cyc = &(&alg.bracket(&alg.bracket(&x, &y), &z)
                + &alg.bracket(&alg.bracket(&y, &z), &x))
                + &alg.bracket(&alg.bracket(&z, &x), &y);
            prop_assert!(cyc.is_zero(), "cyclic sum = {}", cyc);
        }

        #[test]
        fn automorphisms_respect_the_bracket(
            x in arb_element(ContactAlgebra::standard(1), -2..=2),
            y in arb_element(ContactAlgebra::standard(1), -2..=2),
            num in 1i64..=3,
            den in 1i64..=3,
        ) {
            let alg = ContactAlgebra::standard(1);
            let t = G::rat(num, den);
            let g = super::super::LinearAutomorphism::diagonal(&alg, vec![t.clone(), t]).unwrap();
            prop_assert_eq!(
                alg.bracket(&g.apply(&x), &g.apply(&y)),
                g.apply(&alg.bracket(&x, &y))
            );
        }
    }

    #[test]
    fn rotation_respects_the_bracket_across_degrees() {
        let alg = alg1();
        let lambda = G::new(Rational::new(3, 5), Rational::new(-4, 5));
        let g = super::super::LinearAutomorphism::diagonal(
            &alg,
            vec![lambda.clone(), lambda.conj()],
        )
        .unwrap();
        for p in -2..=2i64 {
            for q in -2..=2i64 {
                for x in alg.basis(p) {
                    for y in alg.basis(q) {
                        assert_eq!(
                            alg.bracket(&g.apply(&x), &g.apply(&y)),
                            g.apply(&alg.bracket(&x, &y))
                        );
                    }
                }
            }
        }
    }
}
