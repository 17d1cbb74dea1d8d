//! Free associative algebra over paraoperator generators, extended by a Klein
//! element `K` with `K² = 1` and `{K, g} = 0` for every generator `g`.
//!
//! No triple relation is imposed here. The only rewriting performed is moving
//! `K` to the right end of a word (one sign flip per letter passed) and folding
//! `K² = 1`, so every [`Word`] carries at most one trailing `K`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

/// Exact coefficient type used throughout the crate.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    ParaFermion,
    ParaBoson,
}

impl Kind {
    pub fn letter(self) -> char {
        match self {
            Kind::ParaFermion => 'f',
            Kind::ParaBoson => 'b',
        }
    }
}

/// Creation (`+`) or annihilation (`-`). Ordered `Minus < Plus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// A paraoperator `f_j^±` or `b_k^±`. Indices are 1-based.
///
/// The derived ordering (kind, then index, then sign) is the letter order used
/// by the canonical term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub kind: Kind,
    pub index: usize,
    pub sign: Sign,
}

impl Generator {
    pub fn new(kind: Kind, index: usize, sign: Sign) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        Generator { kind, index, sign }
    }

    pub fn f(index: usize, sign: Sign) -> Self {
        Self::new(Kind::ParaFermion, index, sign)
    }

    pub fn b(index: usize, sign: Sign) -> Self {
        Self::new(Kind::ParaBoson, index, sign)
    }

    pub fn adjoint(self) -> Self {
        Generator { sign: self.sign.flip(), ..self }
    }

    pub fn is_boson(self) -> bool {
        self.kind == Kind::ParaBoson
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.kind.letter(), self.sign.symbol(), self.index)
    }
}

impl FromStr for Generator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('f') => Kind::ParaFermion,
            Some('b') => Kind::ParaBoson,
            _ => return Err(ParseError::Token(s.to_string())),
        };
        let sign = chars
            .next()
            .and_then(Sign::from_symbol)
            .ok_or_else(|| ParseError::Token(s.to_string()))?;
        let index: usize = chars
            .as_str()
            .parse()
            .map_err(|_| ParseError::Token(s.to_string()))?;
        if index == 0 {
            return Err(ParseError::Token(s.to_string()));
        }
        Ok(Generator { kind, index, sign })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unrecognised token `{0}`")]
    Token(String),
    #[error("bad coefficient `{0}`")]
    Coefficient(String),
    #[error("term `{0}` is missing the `coeff * word` shape")]
    Term(String),
}

/// A monomial: a sequence of generators followed by an optional `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Generator>,
    klein: bool,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn new(letters: Vec<Generator>, klein: bool) -> Self {
        Word { letters, klein }
    }

    pub fn klein() -> Self {
        Word { letters: Vec::new(), klein: true }
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn has_klein(&self) -> bool {
        self.klein
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty() && !self.klein
    }

    pub fn boson_letters(&self) -> usize {
        self.letters.iter().filter(|g| g.is_boson()).count()
    }

    /// Canonicalizes a word with `K` at arbitrary positions. Returns the sign
    /// picked up by moving every `K` to the right end.
    pub fn from_tokens(tokens: &[Letter]) -> (i64, Word) {
        let mut sign = 1i64;
        let mut letters = Vec::new();
        let mut klein = false;
        for token in tokens {
            match *token {
                Letter::Klein => klein = !klein,
                Letter::Gen(g) => {
                    if klein {
                        sign = -sign;
                    }
                    letters.push(g);
                }
            }
        }
        (sign, Word { letters, klein })
    }

    /// Product of two canonical words, with the sign from pushing `self`'s
    /// trailing `K` past the letters of `rhs`.
    pub fn concat(&self, rhs: &Word) -> (i64, Word) {
        let sign = if self.klein && rhs.letters.len() % 2 == 1 { -1 } else { 1 };
        let mut letters = Vec::with_capacity(self.letters.len() + rhs.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&rhs.letters);
        (sign, Word { letters, klein: self.klein ^ rhs.klein })
    }
}

/// A letter as written before canonicalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Gen(Generator),
    Klein,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.klein.cmp(&other.klein))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for g in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        if self.klein {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "K")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

/// Exact linear combination of [`Word`]s. Zero coefficients are never stored
/// and terms iterate in the canonical graded-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Expression {
    terms: BTreeMap<Word, Rational>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression::default()
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn term(word: Word, c: Rational) -> Self {
        let mut e = Expression::zero();
        e.accumulate(word, c);
        e
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Word::new(vec![g], false), Rational::one())
    }

    pub fn klein() -> Self {
        Self::term(Word::klein(), Rational::one())
    }

    /// Builds a normalized expression from arbitrary (possibly repeated,
    /// possibly zero) terms.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut e = Expression::zero();
        for (w, c) in terms {
            e.accumulate(w, c);
        }
        e
    }

    fn accumulate(&mut self, word: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest number of paraboson letters in any single word.
    pub fn boson_degree(&self) -> usize {
        self.terms.keys().map(Word::boson_letters).max().unwrap_or(0)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.terms.keys().flat_map(|w| w.letters.iter().copied())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Expression::zero();
        }
        Expression {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&integer(c))
    }

    pub fn mul(&self, rhs: &Expression) -> Self {
        let mut out = Expression::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let (sign, w) = wa.concat(wb);
                let c = ca * cb;
                out.accumulate(w, if sign < 0 { -c } else { c });
            }
        }
        out
    }

    pub fn bracket(&self, rhs: &Expression, kind: BracketKind) -> Self {
        let ab = self.mul(rhs);
        let ba = rhs.mul(self);
        match kind {
            BracketKind::Commutator => ab - ba,
            BracketKind::Anticommutator => ab + ba,
        }
    }

    pub fn commutator(&self, rhs: &Expression) -> Self {
        self.bracket(rhs, BracketKind::Commutator)
    }

    pub fn anticommutator(&self, rhs: &Expression) -> Self {
        self.bracket(rhs, BracketKind::Anticommutator)
    }

    /// Anti-involution: reverses words, flips every generator sign, fixes `K`.
    pub fn dagger(&self) -> Self {
        Expression::from_terms(self.terms.iter().map(|(w, c)| {
            // (l1..ln K)^† = K ln^†..l1^†; K crosses n letters on its way back.
            let letters: Vec<Generator> = w.letters.iter().rev().map(|g| g.adjoint()).collect();
            let flip = w.klein && letters.len() % 2 == 1;
            let c = if flip { -c.clone() } else { c.clone() };
            (Word::new(letters, w.klein), c)
        }))
    }

    /// The substitution `f_j^± ↦ ±f_j^± K`, `b_k^± ↦ b_k^±`, `K ↦ K`,
    /// extended multiplicatively and linearly.
    pub fn klein_transform(&self) -> Self {
        let mut out = Expression::zero();
        for (w, c) in &self.terms {
            let mut image = Expression::scalar(c.clone());
            for &g in &w.letters {
                image = image.mul(&transform_letter(g));
            }
            if w.klein {
                image = image.mul(&Expression::klein());
            }
            for (w2, c2) in image.terms {
                out.accumulate(w2, c2);
            }
        }
        out
    }

    /// Replaces each generator by an arbitrary expression (multiplicative
    /// substitution); `K` is kept.
    pub fn substitute<F>(&self, mut image: F) -> Self
    where
        F: FnMut(Generator) -> Expression,
    {
        let mut out = Expression::zero();
        for (w, c) in &self.terms {
            let mut acc = Expression::scalar(c.clone());
            for &g in &w.letters {
                acc = acc.mul(&image(g));
            }
            if w.klein {
                acc = acc.mul(&Expression::klein());
            }
            for (w2, c2) in acc.terms {
                out.accumulate(w2, c2);
            }
        }
        out
    }

    /// Re-canonicalizes the stored terms. Expressions built through this API
    /// are already normal, so this is idempotent by construction.
    pub fn normalize(&self) -> Self {
        Expression::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }
}

/// Image of one generator under the Klein transformation.
pub fn transform_letter(g: Generator) -> Expression {
    match g.kind {
        Kind::ParaBoson => Expression::generator(g),
        Kind::ParaFermion => Expression::term(Word::new(vec![g], true), integer(g.sign.value())),
    }
}

impl From<Generator> for Expression {
    fn from(g: Generator) -> Self {
        Expression::generator(g)
    }
}

impl Add for Expression {
    type Output = Expression;

    fn add(mut self, rhs: Expression) -> Expression {
        for (w, c) in rhs.terms {
            self.accumulate(w, c);
        }
        self
    }
}

impl Add<&Expression> for &Expression {
    type Output = Expression;

    fn add(self, rhs: &Expression) -> Expression {
        self.clone() + rhs.clone()
    }
}

impl Sub for Expression {
    type Output = Expression;

    fn sub(mut self, rhs: Expression) -> Expression {
        for (w, c) in rhs.terms {
            self.accumulate(w, -c);
        }
        self
    }
}

impl Sub<&Expression> for &Expression {
    type Output = Expression;

    fn sub(self, rhs: &Expression) -> Expression {
        self.clone() - rhs.clone()
    }
}

impl Neg for Expression {
    type Output = Expression;

    fn neg(self) -> Expression {
        Expression {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl Mul<&Expression> for &Expression {
    type Output = Expression;

    fn mul(self, rhs: &Expression) -> Expression {
        Expression::mul(self, rhs)
    }
}

/// `coeff * word` terms joined by ` + `, in canonical order; `0` when empty.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} * {}", c, w)?;
        }
        Ok(())
    }
}

/// Parses the text form produced by `Display`. `K` may appear anywhere in a
/// word; it is moved to the right with the corresponding sign.
impl FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Expression::zero());
        }
        let mut terms = Vec::new();
        for part in s.split(" + ") {
            let (coeff, word) = part
                .split_once(" * ")
                .ok_or_else(|| ParseError::Term(part.to_string()))?;
            let c = parse_rational(coeff.trim())?;
            let mut tokens = Vec::new();
            for tok in word.split_whitespace() {
                match tok {
                    "1" => {}
                    "K" => tokens.push(Letter::Klein),
                    other => tokens.push(Letter::Gen(other.parse()?)),
                }
            }
            let (sign, w) = Word::from_tokens(&tokens);
            terms.push((w, if sign < 0 { -c } else { c }));
        }
        Ok(Expression::from_terms(terms))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let err = || ParseError::Coefficient(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| err())?;
            let q: BigInt = q.parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// `|a - b|` for signs read as ±1.
pub fn abs_diff(a: Sign, b: Sign) -> i64 {
    (a.value() - b.value()).abs()
}

pub fn is_integral(q: &Rational) -> bool {
    q.is_integer()
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus, Plus};

    fn e(s: &str) -> Expression {
        s.parse().unwrap()
    }

    #[test]
    fn klein_squares_to_one() {
        let k = Expression::klein();
        assert_eq!(k.mul(&k), Expression::one());
    }

    #[test]
    fn klein_anticommutes_past_letter() {
        let k = Expression::klein();
        let f = Expression::generator(Generator::f(1, Plus));
        assert_eq!(k.mul(&f), e("-1 * f+1 K"));
        for g in [Generator::f(2, Minus), Generator::b(3, Plus)] {
            let g = Expression::generator(g);
            assert!((k.mul(&g) + g.mul(&k)).is_zero());
        }
    }

    #[test]
    fn dressed_product_collapses_klein() {
        let a = e("1 * f+1 K");
        let b = e("1 * b-1 K");
        assert_eq!(a.mul(&b), e("-1 * f+1 b-1"));
    }

    #[test]
    fn brackets() {
        let x = e("2 * f+1 b-2 + -1/3 * b+1 K");
        assert!(x.commutator(&x).is_zero());
        let k = Expression::klein();
        let fm = Expression::generator(Generator::f(1, Minus));
        assert!(k.anticommutator(&fm).is_zero());
        let f = Expression::generator(Generator::f(1, Plus));
        let b = Expression::generator(Generator::b(1, Plus));
        assert_eq!(f.commutator(&b), e("1 * f+1 b+1 + -1 * b+1 f+1"));
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(e("1 * f+1").dagger(), e("1 * f-1"));
        // K b2+ f1- = (+1) b2+ f1- K: two letters crossed.
        assert_eq!(e("1 * f+1 b-2 K").dagger(), e("1 * b+2 f-1 K"));
        assert_eq!(e("1 * f+1 K").dagger(), e("-1 * f-1 K"));
    }

    #[test]
    fn klein_transform_examples() {
        assert_eq!(e("1 * f+1").klein_transform(), e("1 * f+1 K"));
        assert_eq!(e("1 * f-1").klein_transform(), e("-1 * f-1 K"));
        assert_eq!(e("1 * b+2").klein_transform(), e("1 * b+2"));
        assert_eq!(e("1 * K").klein_transform(), e("1 * K"));
    }

    #[test]
    fn normalize_examples() {
        let w = Word::new(vec![Generator::f(1, Plus)], false);
        let w2 = Word::new(vec![Generator::b(1, Minus)], true);
        let x = Expression::from_terms([(w.clone(), integer(0)), (w2.clone(), integer(2))]);
        assert_eq!(x.len(), 1);
        assert_eq!(x.coefficient(&w2), integer(2));
        let y = Expression::from_terms([(w.clone(), integer(1)), (w, integer(-1))]);
        assert!(y.is_zero());
        assert_eq!(x.normalize().normalize(), x.normalize());
    }

    #[test]
    fn canonical_term_order() {
        let x = e("1 * b+1 + 1 * f+2 + 1 * f-2 + 1 * K + 1 * f+1 f+1 + 1 * 1 + 1 * f+2 K");
        assert_eq!(
            x.to_string(),
            "1 * 1 + 1 * K + 1 * f-2 + 1 * f+2 + 1 * f+2 K + 1 * b+1 + 1 * f+1 f+1"
        );
    }

    #[test]
    fn parse_moves_klein_right() {
        assert_eq!(e("1 * K f+1 b-1"), e("1 * f+1 b-1 K"));
        assert_eq!(e("1 * K f+1"), e("-1 * f+1 K"));
        assert_eq!(e("1 * K K"), Expression::one());
        assert!("1 * f+0".parse::<Expression>().is_err());
        assert!("x * f+1".parse::<Expression>().is_err());
    }

    #[test]
    fn sign_coefficients() {
        assert_eq!(abs_diff(Plus, Plus), 0);
        assert_eq!(abs_diff(Plus, Minus), 2);
        assert_eq!(abs_diff(Minus, Plus), 2);
    }
}
