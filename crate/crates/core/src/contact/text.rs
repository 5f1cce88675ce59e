//! Textual syntax for elements.
//!
//! Monomials are products of the tokens `z1, …, zn, zb1, …, zbn` (plain `z`,
//! `zb` when `n = 1`) with optional `^e` powers; the central element is `T`;
//! a block `mu^p[ … ]` applies the raising operator once to an element of
//! degree `p - 2`, producing degree `p`; coefficients are Gaussian rationals
//! such as `-1/2*i` or `(1/3-2/5*i)` in lowest terms.  Printing is canonical
//! and `parse_element` inverts it exactly.

use crate::scalar::GaussianRational;

use super::element::ContactElement;
use super::monomial::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at position {pos}")]
    Unexpected { pos: usize, ch: char },
    #[error("unexpected end of input")]
    End,
    #[error("trailing input at position {pos}")]
    Trailing { pos: usize },
    #[error("malformed scalar `{0}`")]
    Scalar(String),
    #[error("malformed integer `{0}`")]
    Integer(String),
    #[error("generator index {index} out of range for n = {n}")]
    GeneratorRange { index: usize, n: usize },
    #[error("generator needs an index when n > 1")]
    MissingIndex,
    #[error("a term may contain at most one of T, a monomial, or a mu block")]
    MixedStructure,
    #[error("a term must contain T, a generator, or a mu block")]
    BareScalar,
    #[error("cannot mix degrees {0} and {1} in one element")]
    MixedDegrees(i64, i64),
    #[error("the content of mu^{marker} must have degree two less than the marker, found degree {found}")]
    MuDegree { marker: i64, found: i64 },
}

/// Canonical textual form of an element.
pub fn format_element(x: &ContactElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (m, c) in x.layer_terms(-1).into_iter().rev() {
        parts.push(term_string(c, m, x.n()));
    }
    let rest = x.shift_down();
    if !rest.is_zero() {
        parts.push(format!("mu^{}[{}]", x.degree(), format_element(&rest)));
    }
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k > 0 && !p.starts_with('-') {
            out.push('+');
        }
        out.push_str(p);
    }
    out
}

fn term_string(c: &GaussianRational, m: &Monomial, n: usize) -> String {
    let ms = monomial_string(m, n);
    if c.is_one() {
        ms
    } else if (-c).is_one() {
        format!("-{ms}")
    } else if c.re.is_zero() || c.im.is_zero() {
        format!("{c}*{ms}")
    } else {
        format!("({c})*{ms}")
    }
}

fn monomial_string(m: &Monomial, n: usize) -> String {
    if m.is_one() {
        return "T".to_string();
    }
    let mut factors = Vec::new();
    for slot in 0..2 * n {
        let e = m.exp(slot);
        if e == 0 {
            continue;
        }
        let tok = slot_token(slot, n);
        if e == 1 {
            factors.push(tok);
        } else {
            factors.push(format!("{tok}^{e}"));
        }
    }
    factors.join("*")
}

fn slot_token(slot: usize, n: usize) -> String {
    if slot < n {
        if n == 1 {
            "z".to_string()
        } else {
            format!("z{}", slot + 1)
        }
    } else if n == 1 {
        "zb".to_string()
    } else {
        format!("zb{}", slot - n + 1)
    }
}

/// Parse the canonical syntax back into an element.  Whitespace is ignored;
/// `z1`/`zb1` are accepted alongside `z`/`zb` when `n = 1`.
pub fn parse_element(n: usize, input: &str) -> Result<ContactElement, ParseError> {
    assert!(n > 0);
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { n, chars, pos: 0 };
    let x = p.expr()?;
    match p.peek() {
        None => Ok(x),
        Some(_) => Err(ParseError::Trailing { pos: p.pos }),
    }
}

struct Parser {
    n: usize,
    chars: Vec<char>,
    pos: usize,
}

enum Structural {
    None,
    Center,
    Mono(Monomial),
    Mu(i64, ContactElement),
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(ParseError::Unexpected { pos: self.pos - 1, ch: c }),
            None => Err(ParseError::End),
        }
    }

    fn expr(&mut self) -> Result<ContactElement, ParseError> {
        let mut acc = ContactElement::zero(self.n, 0);
        let mut neg = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term(neg)?;
            acc = merge(acc, t)?;
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    neg = false;
                }
                Some('-') => {
                    self.pos += 1;
                    neg = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, neg: bool) -> Result<ContactElement, ParseError> {
        let mut coeff =
            if neg { -GaussianRational::one() } else { GaussianRational::one() };
        let mut structural = Structural::None;
        loop {
            match self.factor()? {
                Factor::Scalar(v) => coeff = &coeff * &v,
                Factor::Center => match structural {
                    Structural::None => structural = Structural::Center,
                    _ => return Err(ParseError::MixedStructure),
                },
                Factor::Mono(m) => match structural {
                    Structural::None => structural = Structural::Mono(m),
                    Structural::Mono(prev) => structural = Structural::Mono(prev.mul(&m)),
                    _ => return Err(ParseError::MixedStructure),
                },
                Factor::Mu(p, inner) => match structural {
                    Structural::None => structural = Structural::Mu(p, inner),
                    _ => return Err(ParseError::MixedStructure),
                },
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        match structural {
            Structural::None => {
                if coeff.is_zero() {
                    Ok(ContactElement::zero(self.n, 0))
                } else {
                    Err(ParseError::BareScalar)
                }
            }
            Structural::Center => {
                Ok(ContactElement::term(self.n, -1, Monomial::one(2 * self.n), coeff))
            }
            Structural::Mono(m) => Ok(ContactElement::term(self.n, -1, m, coeff)),
            Structural::Mu(p, inner) => {
                if inner.is_zero() {
                    return Ok(ContactElement::zero(self.n, p));
                }
                if inner.degree() != p - 2 {
                    return Err(ParseError::MuDegree { marker: p, found: inner.degree() });
                }
                Ok(inner.mu().scaled(&coeff))
            }
        }
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        match self.peek() {
            None => Err(ParseError::End),
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(Factor::Scalar(GaussianRational::from_rational(r)))
            }
            Some('i') => {
                self.pos += 1;
                Ok(Factor::Scalar(GaussianRational::i()))
            }
            Some('T') => {
                self.pos += 1;
                Ok(Factor::Center)
            }
            Some('(') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().map_or(false, |c| c != ')') {
                    self.pos += 1;
                }
                if self.peek().is_none() {
                    return Err(ParseError::End);
                }
                let body: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1; // closing parenthesis
                let v: GaussianRational =
                    body.parse().map_err(|_| ParseError::Scalar(body.clone()))?;
                Ok(Factor::Scalar(v))
            }
            Some('m') => {
                self.expect('m')?;
                self.expect('u')?;
                self.expect('^')?;
                let p = self.signed_integer()?;
                self.expect('[')?;
                let inner = self.expr()?;
                self.expect(']')?;
                Ok(Factor::Mu(p, inner))
            }
            Some('z') => {
                self.pos += 1;
                let anti = if self.peek() == Some('b') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let digits = self.digits();
                let index = if digits.is_empty() {
                    if self.n == 1 {
                        1
                    } else {
                        return Err(ParseError::MissingIndex);
                    }
                } else {
                    digits.parse::<usize>().map_err(|_| ParseError::Integer(digits))?
                };
                if !(1..=self.n).contains(&index) {
                    return Err(ParseError::GeneratorRange { index, n: self.n });
                }
                let e = if self.peek() == Some('^') {
                    self.pos += 1;
                    let ds = self.digits();
                    if ds.is_empty() {
                        return Err(match self.peek() {
                            Some(c) => ParseError::Unexpected { pos: self.pos, ch: c },
                            None => ParseError::End,
                        });
                    }
                    ds.parse::<u32>().map_err(|_| ParseError::Integer(ds))?
                } else {
                    1
                };
                let slot = if anti { self.n + index - 1 } else { index - 1 };
                Ok(Factor::Mono(Monomial::generator(2 * self.n, slot).pow(e)))
            }
            Some(c) => Err(ParseError::Unexpected { pos: self.pos, ch: c }),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn rational(&mut self) -> Result<crate::scalar::Rational, ParseError> {
        let num = self.digits();
        if num.is_empty() {
            return Err(ParseError::End);
        }
        let n: i64 = num.parse().map_err(|_| ParseError::Integer(num.clone()))?;
        if self.peek() == Some('/')
            && self.chars.get(self.pos + 1).map_or(false, |c| c.is_ascii_digit())
        {
            self.pos += 1;
            let den = self.digits();
            let d: i64 = den.parse().map_err(|_| ParseError::Integer(den))?;
            Ok(crate::scalar::Rational::new(n, d))
        } else {
            Ok(crate::scalar::Rational::int(n))
        }
    }

    fn signed_integer(&mut self) -> Result<i64, ParseError> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let ds = self.digits();
        if ds.is_empty() {
            return match self.peek() {
                Some(c) => Err(ParseError::Unexpected { pos: self.pos, ch: c }),
                None => Err(ParseError::End),
            };
        }
        let v: i64 = ds.parse().map_err(|_| ParseError::Integer(ds))?;
        Ok(if neg { -v } else { v })
    }
}

enum Factor {
    Scalar(GaussianRational),
    Center,
    Mono(Monomial),
    Mu(i64, ContactElement),
}

fn merge(acc: ContactElement, t: ContactElement) -> Result<ContactElement, ParseError> {
    if !acc.is_zero() && !t.is_zero() && acc.degree() != t.degree() {
        return Err(ParseError::MixedDegrees(acc.degree(), t.degree()));
    }
    Ok(&acc + &t)
}

impl serde::Serialize for ContactElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementDoc { n: self.n(), degree: self.degree(), expr: format_element(self) }
            .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for ContactElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ElementDoc::deserialize(d)?;
        let x = parse_element(doc.n, &doc.expr).map_err(serde::de::Error::custom)?;
        if x.is_zero() {
            Ok(ContactElement::zero(doc.n, doc.degree))
        } else if x.degree() != doc.degree {
            Err(serde::de::Error::custom(format!(
                "declared degree {} does not match expression degree {}",
                doc.degree,
                x.degree()
            )))
        } else {
            Ok(x)
        }
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ElementDoc {
    n: usize,
    degree: i64,
    expr: String,
}

#[cfg(test)]
mod tests {
    use super::super::{ContactAlgebra, ContactElement, Monomial};
    use super::*;
    use crate::scalar::{GaussianRational as G, Rational};
    use proptest::prelude::*;

    #[test]
    fn pinned_canonical_strings() {
        let alg = ContactAlgebra::standard(1);
        let pair = alg.bracket(&alg.z(1), &alg.zb(1));
        assert_eq!(pair.to_string(), "-1/2*i*T");
        assert_eq!(alg.grading_element().to_string(), "mu^0[-2*T]");
        assert_eq!(alg.complex_structure().to_string(), "2*z*zb");
        assert_eq!(alg.center().to_string(), "T");
        assert_eq!(ContactElement::zero(1, 3).to_string(), "0");

        let alg2 = ContactAlgebra::new(1, 1);
        assert_eq!(alg2.complex_structure().to_string(), "2*z1*zb1-2*z2*zb2");
    }

    #[test]
    fn cubic_with_raised_tail_round_trips() {
        let x = ContactElement::from_terms(
            1,
            1,
            vec![
                (-1, Monomial::from_exps(vec![3, 0]), G::int(1)),
                (-1, Monomial::from_exps(vec![2, 1]), G::int(2)),
                (-1, Monomial::from_exps(vec![1, 2]), G::int(1)),
                (0, Monomial::from_exps(vec![1, 0]), G::imag(-3, 1)),
                (0, Monomial::from_exps(vec![0, 1]), G::imag(-3, 1)),
            ],
        );
        let s = x.to_string();
        assert_eq!(s, "z^3+2*z^2*zb+z*zb^2+mu^1[-3*i*z-3*i*zb]");
        assert_eq!(parse_element(1, &s).unwrap(), x);
    }

    #[test]
    fn parses_aliases_whitespace_and_signs() {
        let alg = ContactAlgebra::standard(1);
        assert_eq!(parse_element(1, "z1").unwrap(), alg.z(1));
        assert_eq!(parse_element(1, " z + zb ").unwrap(), &alg.z(1) + &alg.zb(1));
        assert_eq!(parse_element(1, "+z").unwrap(), alg.z(1));
        assert_eq!(
            parse_element(1, "-2*mu^0[T]").unwrap(),
            alg.grading_element()
        );
        assert_eq!(parse_element(1, "0").unwrap(), ContactElement::zero(1, 0));
        assert_eq!(parse_element(1, "z^0").unwrap(), alg.center());
    }

    #[test]
    fn complex_coefficients_round_trip() {
        let c = G::new(Rational::new(1, 2), Rational::new(-3, 4));
        let x = ContactElement::term(1, -1, Monomial::from_exps(vec![1, 0]), c);
        let s = x.to_string();
        assert_eq!(s, "(1/2-3/4*i)*z");
        assert_eq!(parse_element(1, &s).unwrap(), x);
        let y = ContactElement::term(1, -1, Monomial::from_exps(vec![0, 1]), G::i());
        assert_eq!(y.to_string(), "i*zb");
        assert_eq!(parse_element(1, "i*zb").unwrap(), y);
        assert_eq!(parse_element(1, "-i*zb").unwrap(), -&y);
    }

    #[test]
    fn parse_errors_are_precise() {
        assert_eq!(parse_element(2, "z").unwrap_err(), ParseError::MissingIndex);
        assert_eq!(
            parse_element(2, "z3").unwrap_err(),
            ParseError::GeneratorRange { index: 3, n: 2 }
        );
        assert_eq!(parse_element(1, "3").unwrap_err(), ParseError::BareScalar);
        assert_eq!(parse_element(1, "z+T").unwrap_err(), ParseError::MixedDegrees(-1, -2));
        assert_eq!(
            parse_element(1, "mu^1[z^2]").unwrap_err(),
            ParseError::MuDegree { marker: 1, found: 0 }
        );
        assert_eq!(parse_element(1, "T*z").unwrap_err(), ParseError::MixedStructure);
        assert_eq!(parse_element(1, "").unwrap_err(), ParseError::End);
        assert_eq!(parse_element(1, "z)").unwrap_err(), ParseError::Trailing { pos: 1 });
        assert!(matches!(parse_element(1, "q"), Err(ParseError::Unexpected { .. })));
    }

    #[test]
    fn serde_embeds_the_textual_form() {
        let alg = ContactAlgebra::standard(1);
        let e = alg.grading_element();
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"n":1,"degree":0,"expr":"mu^0[-2*T]"}"#);
        let back: ContactElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
        let zero = ContactElement::zero(2, 3);
        let json0 = serde_json::to_string(&zero).unwrap();
        let back0: ContactElement = serde_json::from_str(&json0).unwrap();
        assert!(back0.is_zero());
        assert_eq!(back0.degree(), 3);
    }

    fn arb_element(
        n: usize,
        degrees: std::ops::RangeInclusive<i64>,
    ) -> BoxedStrategy<ContactElement> {
        let alg = ContactAlgebra::standard(n);
        degrees
            .prop_flat_map(move |p| {
                let keys = alg.basis_keys(p);
                let len = keys.len();
                (
                    proptest::collection::vec(0..len, 1..=4),
                    proptest::collection::vec((-9i64..=9, 1i64..=4, -9i64..=9, 1i64..=4), 1..=4),
                )
                    .prop_map(move |(idx, coeffs)| {
                        let mut x = ContactElement::zero(n, p);
                        for (ix, (rn, rd, im_n, im_d)) in idx.iter().zip(coeffs) {
                            let (layer, m) = keys[*ix].clone();
                            x.add_term(
                                layer,
                                m,
                                G::new(Rational::new(rn, rd), Rational::new(im_n, im_d)),
                            );
                        }
                        x
                    })
            })
            .boxed()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn printing_then_parsing_is_the_identity(
            x in prop_oneof![arb_element(1, -2..=5), arb_element(2, -2..=4), arb_element(3, -2..=3)],
        ) {
            let s = format_element(&x);
            let back = parse_element(x.n(), &s).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
