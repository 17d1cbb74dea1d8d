//! Catalog of defining relations.
//!
//! Every relation is kept twice: as an unevaluated bracket tree ([`Term`]),
//! which the matrix checker evaluates without assuming any algebraic rule,
//! and as its normalized [`Expression`] (LHS − RHS) in the original
//! generators plus `K`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{
    abs_diff, integer, rational, transform_letter, BracketKind, Expression, Generator, Rational,
    Sign,
};
use crate::error::ConfigError;

/// A leaf of a relation tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Gen(Generator),
    /// The Klein-transformed generator `f̃` / `b̃`.
    Tilde(Generator),
    Klein,
}

impl Atom {
    pub fn generator(self) -> Option<Generator> {
        match self {
            Atom::Gen(g) | Atom::Tilde(g) => Some(g),
            Atom::Klein => None,
        }
    }

    pub fn expression(self) -> Expression {
        match self {
            Atom::Gen(g) => Expression::generator(g),
            Atom::Tilde(g) => transform_letter(g),
            Atom::Klein => Expression::klein(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Gen(g) => write!(f, "{g}"),
            Atom::Tilde(g) => write!(f, "t{g}"),
            Atom::Klein => write!(f, "K"),
        }
    }
}

/// Unevaluated operator expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Atom(Atom),
    Scalar(Rational),
    Scaled(Rational, Box<Term>),
    Sum(Vec<Term>),
    Product(Vec<Term>),
    Bracket(BracketKind, Box<Term>, Box<Term>),
}

impl Term {
    pub fn comm(a: Term, b: Term) -> Term {
        Term::Bracket(BracketKind::Commutator, Box::new(a), Box::new(b))
    }

    pub fn anti(a: Term, b: Term) -> Term {
        Term::Bracket(BracketKind::Anticommutator, Box::new(a), Box::new(b))
    }

    pub fn scaled(c: Rational, t: Term) -> Term {
        Term::Scaled(c, Box::new(t))
    }

    pub fn int(c: i64) -> Term {
        Term::Scalar(integer(c))
    }

    pub fn klein() -> Term {
        Term::Atom(Atom::Klein)
    }

    /// `lhs − rhs`
    pub fn difference(lhs: Term, rhs: Term) -> Term {
        Term::Sum(vec![lhs, Term::scaled(integer(-1), rhs)])
    }

    /// Symbolic value in the K-extended free algebra.
    pub fn to_expression(&self) -> Expression {
        match self {
            Term::Atom(a) => a.expression(),
            Term::Scalar(c) => Expression::scalar(c.clone()),
            Term::Scaled(c, t) => t.to_expression().scale(c),
            Term::Sum(ts) => ts
                .iter()
                .fold(Expression::zero(), |acc, t| acc + t.to_expression()),
            Term::Product(ts) => ts
                .iter()
                .fold(Expression::one(), |acc, t| acc.mul(&t.to_expression())),
            Term::Bracket(kind, a, b) => a.to_expression().bracket(&b.to_expression(), *kind),
        }
    }

    /// Maximum number of paraboson letters along any product path.
    pub fn boson_degree(&self) -> usize {
        match self {
            Term::Atom(a) => match a.generator() {
                Some(g) if g.is_boson() => 1,
                _ => 0,
            },
            Term::Scalar(_) => 0,
            Term::Scaled(_, t) => t.boson_degree(),
            Term::Sum(ts) => ts.iter().map(Term::boson_degree).max().unwrap_or(0),
            Term::Product(ts) => ts.iter().map(Term::boson_degree).sum(),
            Term::Bracket(_, a, b) => a.boson_degree() + b.boson_degree(),
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Term::Atom(a) => out.push(*a),
            Term::Scalar(_) => {}
            Term::Scaled(_, t) => t.collect_atoms(out),
            Term::Sum(ts) | Term::Product(ts) => ts.iter().for_each(|t| t.collect_atoms(out)),
            Term::Bracket(_, a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Scalar(c) => write!(f, "{c}"),
            Term::Scaled(c, t) => write!(f, "{c}*({t})"),
            Term::Sum(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Term::Product(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Term::Bracket(BracketKind::Commutator, a, b) => write!(f, "[{a}, {b}]"),
            Term::Bracket(BracketKind::Anticommutator, a, b) => write!(f, "{{{a}, {b}}}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationFamily {
    #[serde(rename = "PF")]
    Pf,
    #[serde(rename = "PB")]
    Pb,
    #[serde(rename = "REL_PF")]
    RelPf,
    #[serde(rename = "REL_PB_TB")]
    RelPbTb,
    #[serde(rename = "REL_PB_TF")]
    RelPbTf,
    #[serde(rename = "REL_PB_MIXED")]
    RelPbMixed,
    #[serde(rename = "H_RELS")]
    HRels,
    #[serde(rename = "KLEIN")]
    Klein,
    #[serde(rename = "TILDE_IDENTITY")]
    TildeIdentity,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 9] = [
        RelationFamily::Pf,
        RelationFamily::Pb,
        RelationFamily::RelPf,
        RelationFamily::RelPbTb,
        RelationFamily::RelPbTf,
        RelationFamily::RelPbMixed,
        RelationFamily::HRels,
        RelationFamily::Klein,
        RelationFamily::TildeIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::Pf => "PF",
            RelationFamily::Pb => "PB",
            RelationFamily::RelPf => "REL_PF",
            RelationFamily::RelPbTb => "REL_PB_TB",
            RelationFamily::RelPbTf => "REL_PB_TF",
            RelationFamily::RelPbMixed => "REL_PB_MIXED",
            RelationFamily::HRels => "H_RELS",
            RelationFamily::Klein => "KLEIN",
            RelationFamily::TildeIdentity => "TILDE_IDENTITY",
        }
    }

    /// Families stated for the Klein-transformed operators.
    pub fn is_tilde(self) -> bool {
        matches!(
            self,
            RelationFamily::RelPbTb | RelationFamily::RelPbTf | RelationFamily::RelPbMixed
        )
    }

    /// Checks that the family refers to generators present in an `(m, n)`
    /// system.
    pub fn applicable(self, m: usize, n: usize) -> Result<(), ConfigError> {
        let (ok, requirement) = match self {
            RelationFamily::Pf | RelationFamily::RelPbTf => (m >= 1, "m >= 1"),
            RelationFamily::Pb | RelationFamily::RelPbTb => (n >= 1, "n >= 1"),
            RelationFamily::RelPf | RelationFamily::RelPbMixed => {
                (m >= 1 && n >= 1, "m >= 1 and n >= 1")
            }
            RelationFamily::HRels | RelationFamily::Klein | RelationFamily::TildeIdentity => {
                (m + n >= 1, "m + n >= 1")
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ConfigError::FamilyNotApplicable {
                family: self.name().to_string(),
                requirement,
                m,
                n,
            })
        }
    }
}

impl fmt::Display for RelationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationFamily {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ConfigError::UnknownFamily(s.to_string()))
    }
}

/// One concrete instance of a defining relation.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub family: RelationFamily,
    pub sub: &'static str,
    pub indices: Vec<usize>,
    pub signs: Vec<Sign>,
    /// LHS − RHS as an unevaluated tree.
    pub term: Term,
    /// Normalized symbolic value of `term`.
    pub expr: Expression,
    pub boson_degree: usize,
}

impl RelationInstance {
    fn new(
        family: RelationFamily,
        sub: &'static str,
        indices: Vec<usize>,
        signs: Vec<Sign>,
        term: Term,
    ) -> Self {
        let expr = term.to_expression();
        let boson_degree = term.boson_degree();
        RelationInstance { family, sub, indices, signs, term, expr, boson_degree }
    }

    /// Stable identifier `FAMILY[sub]:j,k,l:ξηε`.
    pub fn id(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        let signs: String = self.signs.iter().map(|s| s.symbol()).collect();
        format!("{}[{}]:{}:{}", self.family.name(), self.sub, idx.join(","), signs)
    }
}

/// `|e − x|` with signs read as ±1.
pub fn coeff_abs(e: Sign, x: Sign) -> i64 {
    abs_diff(e, x)
}

/// `e − x` with signs read as ±1.
pub fn coeff_diff(e: Sign, x: Sign) -> i64 {
    e.value() - x.value()
}

fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

fn signs3() -> impl Iterator<Item = (Sign, Sign, Sign)> {
    Sign::BOTH.into_iter().flat_map(|x| {
        Sign::BOTH
            .into_iter()
            .flat_map(move |y| Sign::BOTH.into_iter().map(move |z| (x, y, z)))
    })
}

fn signs2() -> impl Iterator<Item = (Sign, Sign)> {
    Sign::BOTH
        .into_iter()
        .flat_map(|x| Sign::BOTH.into_iter().map(move |y| (x, y)))
}

fn triples(
    a: usize,
    b: usize,
    c: usize,
) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=a).flat_map(move |j| (1..=b).flat_map(move |k| (1..=c).map(move |l| (j, k, l))))
}

/// How a relation's letters are realized: original or Klein-transformed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letters {
    Original,
    Tilde,
}

impl Letters {
    fn f(self, j: usize, s: Sign) -> Term {
        self.atom(Generator::f(j, s))
    }

    fn b(self, k: usize, s: Sign) -> Term {
        self.atom(Generator::b(k, s))
    }

    fn atom(self, g: Generator) -> Term {
        match self {
            Letters::Original => Term::Atom(Atom::Gen(g)),
            Letters::Tilde => Term::Atom(Atom::Tilde(g)),
        }
    }
}

fn scaled_int(c: i64, t: Term) -> Term {
    Term::scaled(integer(c), t)
}

/// `[[f_j^ξ, f_k^η], f_l^ε] − (|ε−η|δ_kl f_j^ξ − |ε−ξ|δ_jl f_k^η)`
pub fn parafermion_relation(
    letters: Letters,
    (j, k, l): (usize, usize, usize),
    (xi, eta, eps): (Sign, Sign, Sign),
) -> Term {
    let lhs = Term::comm(Term::comm(letters.f(j, xi), letters.f(k, eta)), letters.f(l, eps));
    let rhs = Term::Sum(vec![
        scaled_int(coeff_abs(eps, eta) * delta(k, l), letters.f(j, xi)),
        scaled_int(-coeff_abs(eps, xi) * delta(j, l), letters.f(k, eta)),
    ]);
    Term::difference(lhs, rhs)
}

/// `[{b_j^ξ, b_k^η}, b_l^ε] − ((ε−ξ)δ_jl b_k^η + (ε−η)δ_kl b_j^ξ)`
pub fn paraboson_relation(
    letters: Letters,
    (j, k, l): (usize, usize, usize),
    (xi, eta, eps): (Sign, Sign, Sign),
) -> Term {
    let lhs = Term::comm(Term::anti(letters.b(j, xi), letters.b(k, eta)), letters.b(l, eps));
    let rhs = Term::Sum(vec![
        scaled_int(coeff_diff(eps, xi) * delta(j, l), letters.b(k, eta)),
        scaled_int(coeff_diff(eps, eta) * delta(k, l), letters.b(j, xi)),
    ]);
    Term::difference(lhs, rhs)
}

/// Mixed sub-relation shapes shared by both relative types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixedShape {
    /// `[[f_j, f_k], b_l]`
    FfB,
    /// `[{b_j, b_k}, f_l]`
    BbF,
    /// `[[f_j, b_k], f_l]` (parafermion type) / `{{f̃_j, b̃_k}, f̃_l}` (paraboson type)
    FbF,
    /// `{[f_j, b_k], b_l}` / `[{f̃_j, b̃_k}, b̃_l]`
    FbB,
}

impl MixedShape {
    pub const ALL: [MixedShape; 4] = [MixedShape::FfB, MixedShape::BbF, MixedShape::FbF, MixedShape::FbB];

    pub fn sub(self) -> &'static str {
        match self {
            MixedShape::FfB => "ff_b",
            MixedShape::BbF => "bb_f",
            MixedShape::FbF => "fb_f",
            MixedShape::FbB => "fb_b",
        }
    }

    /// Index ranges `(j, k, l)` as (fermion or boson) counts.
    fn ranges(self, m: usize, n: usize) -> (usize, usize, usize) {
        match self {
            MixedShape::FfB => (m, m, n),
            MixedShape::BbF => (n, n, m),
            MixedShape::FbF => (m, n, m),
            MixedShape::FbB => (m, n, n),
        }
    }
}

/// Relative-parafermion mixed relations, written in the original letters.
pub fn relative_parafermion_relation(
    shape: MixedShape,
    (j, k, l): (usize, usize, usize),
    (xi, eta, eps): (Sign, Sign, Sign),
) -> Term {
    let o = Letters::Original;
    match shape {
        MixedShape::FfB => Term::comm(Term::comm(o.f(j, xi), o.f(k, eta)), o.b(l, eps)),
        MixedShape::BbF => Term::comm(Term::anti(o.b(j, xi), o.b(k, eta)), o.f(l, eps)),
        MixedShape::FbF => Term::difference(
            Term::comm(Term::comm(o.f(j, xi), o.b(k, eta)), o.f(l, eps)),
            scaled_int(-coeff_abs(eps, xi) * delta(j, l), o.b(k, eta)),
        ),
        MixedShape::FbB => Term::difference(
            Term::anti(Term::comm(o.f(j, xi), o.b(k, eta)), o.b(l, eps)),
            scaled_int(coeff_diff(eps, eta) * delta(k, l), o.f(j, xi)),
        ),
    }
}

/// Relative-paraboson mixed relations, written in the tilde letters.
pub fn relative_paraboson_relation(
    shape: MixedShape,
    (j, k, l): (usize, usize, usize),
    (xi, eta, eps): (Sign, Sign, Sign),
) -> Term {
    let t = Letters::Tilde;
    match shape {
        MixedShape::FfB => Term::comm(Term::comm(t.f(j, xi), t.f(k, eta)), t.b(l, eps)),
        MixedShape::BbF => Term::comm(Term::anti(t.b(j, xi), t.b(k, eta)), t.f(l, eps)),
        MixedShape::FbF => Term::difference(
            Term::anti(Term::anti(t.f(j, xi), t.b(k, eta)), t.f(l, eps)),
            scaled_int(coeff_abs(eps, xi) * delta(j, l), t.b(k, eta)),
        ),
        MixedShape::FbB => Term::difference(
            Term::comm(Term::anti(t.f(j, xi), t.b(k, eta)), t.b(l, eps)),
            scaled_int(coeff_diff(eps, eta) * delta(k, l), t.f(j, xi)),
        ),
    }
}

/// Sign and `K` power relating a relative-paraboson mixed relation (tilde
/// letters, expanded) to its relative-parafermion counterpart:
/// `tilde = factor · source · K^power`.
pub fn mixed_transfer(shape: MixedShape, (xi, eta, eps): (Sign, Sign, Sign)) -> (i64, bool) {
    match shape {
        MixedShape::FfB => (-xi.value() * eta.value(), false),
        MixedShape::BbF => (eps.value(), true),
        MixedShape::FbF => (eps.value() * xi.value(), false),
        MixedShape::FbB => (xi.value(), true),
    }
}

/// `h_i` expanded in generators: `−½[f_i^−, f_i^+]` or `½{b_j^−, b_j^+}`.
pub fn cartan_element(i: usize, m: usize) -> Term {
    let o = Letters::Original;
    if i <= m {
        Term::scaled(rational(-1, 2), Term::comm(o.f(i, Sign::Minus), o.f(i, Sign::Plus)))
    } else {
        let j = i - m;
        Term::scaled(rational(1, 2), Term::anti(o.b(j, Sign::Minus), o.b(j, Sign::Plus)))
    }
}

/// `H = h_1 + … + h_{m+n}`
pub fn total_cartan(m: usize, n: usize) -> Term {
    Term::Sum((1..=m + n).map(|i| cartan_element(i, m)).collect())
}

/// `h X − X (h + c)`
fn ladder_relation(h: Term, x: Term, shift: i64) -> Term {
    Term::difference(
        Term::Product(vec![h.clone(), x.clone()]),
        Term::Product(vec![x, Term::Sum(vec![h, Term::int(shift)])]),
    )
}

fn enumerate_pf(letters: Letters, family: RelationFamily, m: usize) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for (j, k, l) in triples(m, m, m) {
        for signs in signs3() {
            let term = parafermion_relation(letters, (j, k, l), signs);
            out.push(RelationInstance::new(
                family,
                "ff_f",
                vec![j, k, l],
                vec![signs.0, signs.1, signs.2],
                term,
            ));
        }
    }
    out
}

fn enumerate_pb(letters: Letters, family: RelationFamily, n: usize) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for (j, k, l) in triples(n, n, n) {
        for signs in signs3() {
            let term = paraboson_relation(letters, (j, k, l), signs);
            out.push(RelationInstance::new(
                family,
                "bb_b",
                vec![j, k, l],
                vec![signs.0, signs.1, signs.2],
                term,
            ));
        }
    }
    out
}

fn enumerate_mixed(family: RelationFamily, m: usize, n: usize) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for shape in MixedShape::ALL {
        let (a, b, c) = shape.ranges(m, n);
        for (j, k, l) in triples(a, b, c) {
            for signs in signs3() {
                let term = match family {
                    RelationFamily::RelPf => relative_parafermion_relation(shape, (j, k, l), signs),
                    _ => relative_paraboson_relation(shape, (j, k, l), signs),
                };
                out.push(RelationInstance::new(
                    family,
                    shape.sub(),
                    vec![j, k, l],
                    vec![signs.0, signs.1, signs.2],
                    term,
                ));
            }
        }
    }
    out
}

fn enumerate_h_rels(m: usize, n: usize) -> Vec<RelationInstance> {
    let o = Letters::Original;
    let family = RelationFamily::HRels;
    let mut out = Vec::new();
    for i in 1..=m + n {
        for j in 1..=m {
            for s in Sign::BOTH {
                let shift = s.value() * delta(i, j);
                let term = ladder_relation(cartan_element(i, m), o.f(j, s), shift);
                out.push(RelationInstance::new(family, "h_f", vec![i, j], vec![s], term));
            }
        }
        for k in 1..=n {
            for s in Sign::BOTH {
                let shift = s.value() * delta(i, m + k);
                let term = ladder_relation(cartan_element(i, m), o.b(k, s), shift);
                out.push(RelationInstance::new(family, "h_b", vec![i, k], vec![s], term));
            }
        }
    }
    for j in 1..=m {
        for s in Sign::BOTH {
            let term = ladder_relation(total_cartan(m, n), o.f(j, s), s.value());
            out.push(RelationInstance::new(family, "H_f", vec![j], vec![s], term));
        }
    }
    for k in 1..=n {
        for s in Sign::BOTH {
            let term = ladder_relation(total_cartan(m, n), o.b(k, s), s.value());
            out.push(RelationInstance::new(family, "H_b", vec![k], vec![s], term));
        }
    }
    out
}

fn enumerate_klein(m: usize, n: usize) -> Vec<RelationInstance> {
    let o = Letters::Original;
    let family = RelationFamily::Klein;
    let mut out = vec![RelationInstance::new(
        family,
        "KK",
        vec![],
        vec![],
        Term::difference(Term::Product(vec![Term::klein(), Term::klein()]), Term::int(1)),
    )];
    for j in 1..=m {
        for s in Sign::BOTH {
            let term = Term::anti(Term::klein(), o.f(j, s));
            out.push(RelationInstance::new(family, "K_f", vec![j], vec![s], term));
        }
    }
    for k in 1..=n {
        for s in Sign::BOTH {
            let term = Term::anti(Term::klein(), o.b(k, s));
            out.push(RelationInstance::new(family, "K_b", vec![k], vec![s], term));
        }
    }
    out
}

/// Sub-relations of the in-text derivation chain that takes the original
/// relations to the tilde ones.
pub const TILDE_SUBS: [&str; 6] = ["a", "b", "c", "d_fbf", "d_fbb", "e"];

/// The derivation identities, each written as a tree that must vanish in the
/// K-extended free algebra. Indices run up to `min(m, 2)` and `min(n, 2)`.
pub fn tilde_identities(m: usize, n: usize) -> Vec<RelationInstance> {
    let family = RelationFamily::TildeIdentity;
    let (o, t) = (Letters::Original, Letters::Tilde);
    let (mf, nb) = (m.min(2), n.min(2));
    let mut out = Vec::new();

    // (a) [f̃_j^ξ, f̃_k^η] + ξη [f_j^ξ, f_k^η]
    for j in 1..=mf {
        for k in 1..=mf {
            for (xi, eta) in signs2() {
                let term = Term::Sum(vec![
                    Term::comm(t.f(j, xi), t.f(k, eta)),
                    scaled_int(xi.value() * eta.value(), Term::comm(o.f(j, xi), o.f(k, eta))),
                ]);
                out.push(RelationInstance::new(family, "a", vec![j, k], vec![xi, eta], term));
            }
        }
    }
    // (b) {f̃_j^ξ, b̃_k^η} + ξ [f_j^ξ, b_k^η] K
    for j in 1..=mf {
        for k in 1..=nb {
            for (xi, eta) in signs2() {
                let term = Term::Sum(vec![
                    Term::anti(t.f(j, xi), t.b(k, eta)),
                    scaled_int(
                        xi.value(),
                        Term::Product(vec![Term::comm(o.f(j, xi), o.b(k, eta)), Term::klein()]),
                    ),
                ]);
                out.push(RelationInstance::new(family, "b", vec![j, k], vec![xi, eta], term));
            }
        }
    }
    // (c) tf-relation − (−ξηε) · PF-relation · K
    for (j, k, l) in triples(mf, mf, mf) {
        for (xi, eta, eps) in signs3() {
            let signs = (xi, eta, eps);
            let factor = -xi.value() * eta.value() * eps.value();
            let term = Term::Sum(vec![
                parafermion_relation(t, (j, k, l), signs),
                scaled_int(
                    -factor,
                    Term::Product(vec![parafermion_relation(o, (j, k, l), signs), Term::klein()]),
                ),
            ]);
            out.push(RelationInstance::new(
                family,
                "c",
                vec![j, k, l],
                vec![xi, eta, eps],
                term,
            ));
        }
    }
    // (d) mixed replays, using the transfer factors of the two f-b shapes.
    for (shape, sub) in [(MixedShape::FbF, "d_fbf"), (MixedShape::FbB, "d_fbb")] {
        let (a, b, c) = shape.ranges(mf, nb);
        for (j, k, l) in triples(a, b, c) {
            for signs in signs3() {
                let (factor, klein) = mixed_transfer(shape, signs);
                let mut source = vec![relative_parafermion_relation(shape, (j, k, l), signs)];
                if klein {
                    source.push(Term::klein());
                }
                let term = Term::Sum(vec![
                    relative_paraboson_relation(shape, (j, k, l), signs),
                    scaled_int(-factor, Term::Product(source)),
                ]);
                out.push(RelationInstance::new(
                    family,
                    sub,
                    vec![j, k, l],
                    vec![signs.0, signs.1, signs.2],
                    term,
                ));
            }
        }
    }
    // (e) tb-relations coincide with the PB relations.
    for (j, k, l) in triples(nb, nb, nb) {
        for signs in signs3() {
            let term = Term::difference(
                paraboson_relation(t, (j, k, l), signs),
                paraboson_relation(o, (j, k, l), signs),
            );
            out.push(RelationInstance::new(
                family,
                "e",
                vec![j, k, l],
                vec![signs.0, signs.1, signs.2],
                term,
            ));
        }
    }
    out
}

/// All instances of one family. Errors if the family refers to generators the
/// `(m, n)` system does not have.
pub fn enumerate(
    family: RelationFamily,
    m: usize,
    n: usize,
) -> Result<Vec<RelationInstance>, ConfigError> {
    if m + n == 0 {
        return Err(ConfigError::EmptySystem { m, n });
    }
    family.applicable(m, n)?;
    Ok(match family {
        RelationFamily::Pf => enumerate_pf(Letters::Original, family, m),
        RelationFamily::Pb => enumerate_pb(Letters::Original, family, n),
        RelationFamily::RelPf | RelationFamily::RelPbMixed => enumerate_mixed(family, m, n),
        RelationFamily::RelPbTb => enumerate_pb(Letters::Tilde, family, n),
        RelationFamily::RelPbTf => enumerate_pf(Letters::Tilde, family, m),
        RelationFamily::HRels => enumerate_h_rels(m, n),
        RelationFamily::Klein => enumerate_klein(m, n),
        RelationFamily::TildeIdentity => tilde_identities(m, n),
    })
}

/// Families that apply to `(m, n)`, and the names of those skipped.
pub fn applicable_families(m: usize, n: usize) -> (Vec<RelationFamily>, Vec<RelationFamily>) {
    RelationFamily::ALL
        .into_iter()
        .partition(|f| f.applicable(m, n).is_ok())
}

/// The sign fact `−ηε|ε−η| = |ε−η|` used to fold the tf-relation signs.
pub fn sign_lemma_holds(eta: Sign, eps: Sign) -> bool {
    -eta.value() * eps.value() * coeff_abs(eps, eta) == coeff_abs(eps, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus, Plus};

    fn e(s: &str) -> Expression {
        s.parse().unwrap()
    }

    #[test]
    fn coefficient_functions() {
        assert_eq!(coeff_abs(Plus, Plus), 0);
        assert_eq!(coeff_abs(Plus, Minus), 2);
        assert_eq!(coeff_abs(Minus, Plus), 2);
        assert_eq!(coeff_diff(Plus, Minus), 2);
        assert_eq!(coeff_diff(Minus, Plus), -2);
        assert_eq!(coeff_diff(Plus, Plus), 0);
    }

    #[test]
    fn pf_count_single_mode() {
        assert_eq!(enumerate(RelationFamily::Pf, 1, 0).unwrap().len(), 8);
        assert_eq!(enumerate(RelationFamily::Pf, 2, 1).unwrap().len(), 64);
    }

    #[test]
    fn klein_family_shape() {
        let insts = enumerate(RelationFamily::Klein, 1, 1).unwrap();
        assert_eq!(insts.len(), 5);
        // K relations are folded into the algebra, so every expr is zero.
        assert!(insts.iter().all(|i| i.expr.is_zero()));
    }

    #[test]
    fn rel_pf_example_instance() {
        let insts = enumerate(RelationFamily::RelPf, 2, 1).unwrap();
        let inst = insts
            .iter()
            .find(|i| i.id() == "REL_PF[fb_f]:1,1,1:-++")
            .expect("instance present");
        let f_m = Expression::generator(Generator::f(1, Minus));
        let f_p = Expression::generator(Generator::f(1, Plus));
        let b_p = Expression::generator(Generator::b(1, Plus));
        let expected = f_m.commutator(&b_p).commutator(&f_p) + b_p.scale_int(2);
        assert_eq!(inst.expr, expected);
        assert_eq!(inst.boson_degree, 1);
    }

    #[test]
    fn pf_example_expr() {
        let insts = enumerate(RelationFamily::Pf, 1, 0).unwrap();
        let inst = insts.iter().find(|i| i.id() == "PF[ff_f]:1,1,1:-++").unwrap();
        let f_m = Expression::generator(Generator::f(1, Minus));
        let f_p = Expression::generator(Generator::f(1, Plus));
        assert_eq!(inst.expr, f_m.commutator(&f_p).commutator(&f_p) + f_p.scale_int(2));
    }

    #[test]
    fn instance_invariants() {
        for family in RelationFamily::ALL {
            for inst in enumerate(family, 2, 2).unwrap() {
                assert!(inst.boson_degree <= 3, "{}", inst.id());
                assert!(inst.expr.max_word_len() <= 3, "{}", inst.id());
                assert_eq!(inst.expr, inst.expr.normalize());
                assert!(inst.expr.boson_degree() <= inst.boson_degree, "{}", inst.id());
                for g in inst.term.atoms().into_iter().filter_map(Atom::generator) {
                    assert!(g.index >= 1 && g.index <= 2);
                }
            }
        }
    }

    #[test]
    fn pf_antisymmetric_pairs() {
        let insts = enumerate(RelationFamily::Pf, 2, 0).unwrap();
        for a in &insts {
            let (j, k, l) = (a.indices[0], a.indices[1], a.indices[2]);
            let swapped = format!(
                "PF[ff_f]:{},{},{}:{}{}{}",
                k,
                j,
                l,
                a.signs[1].symbol(),
                a.signs[0].symbol(),
                a.signs[2].symbol()
            );
            let b = insts.iter().find(|i| i.id() == swapped).unwrap();
            assert_eq!(a.expr, -b.expr.clone(), "{}", a.id());
        }
    }

    #[test]
    fn rel_pb_mixed_is_signed_transform_of_rel_pf() {
        let (m, n) = (2, 2);
        let source = enumerate(RelationFamily::RelPf, m, n).unwrap();
        let target = enumerate(RelationFamily::RelPbMixed, m, n).unwrap();
        assert_eq!(source.len(), target.len());
        for (src, tgt) in source.iter().zip(&target) {
            assert_eq!(src.sub, tgt.sub);
            let shape = MixedShape::ALL.into_iter().find(|s| s.sub() == src.sub).unwrap();
            let signs = (src.signs[0], src.signs[1], src.signs[2]);
            let (factor, klein) = mixed_transfer(shape, signs);
            let mut expected = src.expr.scale_int(factor);
            if klein {
                expected = expected.mul(&Expression::klein());
            }
            assert_eq!(tgt.expr, expected, "{}", tgt.id());
        }
    }

    #[test]
    fn tilde_identities_vanish_symbolically() {
        for (m, n) in [(1, 1), (2, 2), (2, 0), (0, 2)] {
            let insts = tilde_identities(m, n);
            assert!(!insts.is_empty());
            for inst in insts {
                assert!(inst.expr.is_zero(), "{} -> {}", inst.id(), inst.expr);
            }
        }
    }

    #[test]
    fn identity_b_example() {
        // {f̃_1^+, b̃_1^-} = −[f_1^+, b_1^-] K
        let tf = transform_letter(Generator::f(1, Plus));
        let b = Expression::generator(Generator::b(1, Minus));
        let lhs = tf.anticommutator(&b);
        assert_eq!(lhs, e("-1 * f+1 b-1 K + 1 * b-1 f+1 K"));
        let f = Expression::generator(Generator::f(1, Plus));
        assert_eq!(lhs, -f.commutator(&b).mul(&Expression::klein()));
    }

    #[test]
    fn sign_lemma() {
        for (eta, eps) in signs2() {
            assert!(sign_lemma_holds(eta, eps));
        }
    }

    #[test]
    fn family_applicability() {
        assert!(enumerate(RelationFamily::RelPf, 2, 0).is_err());
        assert!(enumerate(RelationFamily::Pb, 1, 0).is_err());
        assert!(enumerate(RelationFamily::Pf, 0, 0).is_err());
        let (ok, skipped) = applicable_families(1, 0);
        assert!(ok.contains(&RelationFamily::Pf));
        assert!(skipped.contains(&RelationFamily::RelPbMixed));
    }

    #[test]
    fn instance_ids() {
        let insts = enumerate(RelationFamily::Klein, 1, 0).unwrap();
        assert_eq!(insts[0].id(), "KLEIN[KK]::");
        assert_eq!(insts[1].id(), "KLEIN[K_f]:1:+");
        assert_eq!("rel_pb_mixed".parse::<RelationFamily>().unwrap(), RelationFamily::RelPbMixed);
    }
}
