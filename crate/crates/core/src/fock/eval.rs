use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{BracketKind, Expression, Generator, Rational, Word};
use crate::error::ConfigError;
use crate::fock::rep::Representation;
use crate::fock::sparse::{axpy, unit_vector, SparseMatrix, SparseVector};
use crate::relations::{RelationInstance, Term};

/// Which matrices stand in for the generator letters of an [`Expression`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    Original,
    Tilde,
}

fn letter_matrix(
    rep: &Representation,
    g: Generator,
    subst: Substitution,
) -> Result<&SparseMatrix, ConfigError> {
    match subst {
        Substitution::Original => rep.operator(g),
        Substitution::Tilde => rep.tilde(g),
    }
}

fn check_word(rep: &Representation, word: &Word) -> Result<(), ConfigError> {
    word.letters().iter().try_for_each(|&g| rep.operator(g).map(|_| ()))
}

/// Applies one word to a vector, rightmost letter (`K`) first.
fn apply_word(
    rep: &Representation,
    word: &Word,
    subst: Substitution,
    x: &SparseVector,
) -> Result<SparseVector, ConfigError> {
    let mut v = if word.has_klein() { rep.operator_k().apply(x) } else { x.clone() };
    for &g in word.letters().iter().rev() {
        if v.is_empty() {
            break;
        }
        v = letter_matrix(rep, g, subst)?.apply(&v);
    }
    Ok(v)
}

pub fn apply_expression_with(
    expr: &Expression,
    rep: &Representation,
    subst: Substitution,
    x: &SparseVector,
) -> Result<SparseVector, ConfigError> {
    let mut out = SparseVector::new();
    for (w, c) in expr.terms() {
        check_word(rep, w)?;
        let y = apply_word(rep, w, subst, x)?;
        axpy(&mut out, c, &y);
    }
    Ok(out)
}

pub fn apply_expression(
    expr: &Expression,
    rep: &Representation,
    x: &SparseVector,
) -> Result<SparseVector, ConfigError> {
    apply_expression_with(expr, rep, Substitution::Original, x)
}

/// Matrix of an expression with generators replaced by the chosen matrices
/// and `K` by the Klein operator.
pub fn evaluate_with(
    expr: &Expression,
    rep: &Representation,
    subst: Substitution,
) -> Result<SparseMatrix, ConfigError> {
    let dim = rep.dim();
    let mut out = SparseMatrix::zeros(dim);
    for (w, c) in expr.terms() {
        check_word(rep, w)?;
        let mut m = if w.has_klein() {
            rep.operator_k().clone()
        } else {
            SparseMatrix::identity(dim)
        };
        for &g in w.letters().iter().rev() {
            m = letter_matrix(rep, g, subst)?.matmul(&m);
        }
        out = out.add_scaled(c, &m);
    }
    Ok(out)
}

pub fn evaluate(expr: &Expression, rep: &Representation) -> Result<SparseMatrix, ConfigError> {
    evaluate_with(expr, rep, Substitution::Original)
}

/// Applies an unevaluated relation tree to a vector. No algebraic rule is
/// used: `K` is the Klein matrix and tilde atoms are the tilde matrices.
pub fn apply_term(
    term: &Term,
    rep: &Representation,
    x: &SparseVector,
) -> Result<SparseVector, ConfigError> {
    Ok(match term {
        Term::Atom(a) => rep.atom(*a)?.apply(x),
        Term::Scalar(c) => scaled(x, c),
        Term::Scaled(c, t) => scaled(&apply_term(t, rep, x)?, c),
        Term::Sum(ts) => {
            let mut out = SparseVector::new();
            for t in ts {
                axpy(&mut out, &Rational::one(), &apply_term(t, rep, x)?);
            }
            out
        }
        Term::Product(ts) => {
            let mut v = x.clone();
            for t in ts.iter().rev() {
                v = apply_term(t, rep, &v)?;
            }
            v
        }
        Term::Bracket(kind, a, b) => {
            let ab = apply_term(a, rep, &apply_term(b, rep, x)?)?;
            let ba = apply_term(b, rep, &apply_term(a, rep, x)?)?;
            let sign = match kind {
                BracketKind::Commutator => -Rational::one(),
                BracketKind::Anticommutator => Rational::one(),
            };
            let mut out = ab;
            axpy(&mut out, &sign, &ba);
            out
        }
    })
}

fn scaled(x: &SparseVector, c: &Rational) -> SparseVector {
    if c.is_zero() {
        return SparseVector::new();
    }
    x.iter().map(|(&i, v)| (i, v * c)).collect()
}

/// Matrix of a relation tree, column by column.
pub fn evaluate_term(term: &Term, rep: &Representation) -> Result<SparseMatrix, ConfigError> {
    let mut out = SparseMatrix::zeros(rep.dim());
    for col in 0..rep.dim() {
        for (row, v) in apply_term(term, rep, &unit_vector(col))? {
            out.add_entry(row, col, v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryFailure {
    pub row: usize,
    pub col: usize,
    pub value: String,
    pub row_state: String,
    pub col_state: String,
    /// `relation` for a nonzero entry of the relation tree, `symbolic` when the
    /// normalized expression disagrees with the tree.
    pub kind: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    pub safe_columns: usize,
    pub failing_entries: usize,
    pub first_failure: Option<EntryFailure>,
}

fn entry_failure(
    rep: &Representation,
    row: usize,
    col: usize,
    value: &Rational,
    kind: &'static str,
) -> EntryFailure {
    EntryFailure {
        row,
        col,
        value: value.to_string(),
        row_state: rep.basis().state(row).describe(),
        col_state: rep.basis().state(col).describe(),
        kind,
    }
}

/// Evaluates the instance on every safe column and requires an exact zero.
/// The normalized symbolic expression is evaluated alongside and must agree
/// with the tree.
pub fn check_relation(
    inst: &RelationInstance,
    rep: &Representation,
) -> Result<CheckResult, ConfigError> {
    let safe = rep.basis().safe_columns(inst.boson_degree);
    if safe.is_empty() {
        return Err(ConfigError::NoSafeColumns { id: inst.id(), cutoff: rep.spec().cutoff() });
    }
    let mut failing_entries = 0;
    let mut first_failure = None;
    for &col in &safe {
        let x = unit_vector(col);
        let tree = apply_term(&inst.term, rep, &x)?;
        let symbolic = apply_expression(&inst.expr, rep, &x)?;
        failing_entries += tree.len();
        if first_failure.is_none() {
            if let Some((&row, v)) = tree.iter().next() {
                first_failure = Some(entry_failure(rep, row, col, v, "relation"));
            }
        }
        if tree != symbolic {
            let mut diff = tree.clone();
            axpy(&mut diff, &-Rational::one(), &symbolic);
            let (&row, v) = diff.iter().next().expect("vectors differ");
            if tree.is_empty() {
                failing_entries += diff.len();
            }
            if first_failure.is_none() {
                first_failure = Some(entry_failure(rep, row, col, v, "symbolic"));
            }
        }
    }
    Ok(CheckResult {
        pass: first_failure.is_none(),
        safe_columns: safe.len(),
        failing_entries,
        first_failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointResult {
    pub operator: String,
    pub pass: bool,
    pub first_failure: Option<(usize, usize)>,
}

/// Checks `W⁻¹ (X^+)ᵀ W = X^-` for every generator and its tilde, on rows and
/// columns with boson total at most `cutoff − 1`.
pub fn adjoint_check(rep: &Representation) -> Vec<AdjointResult> {
    let w = rep.weight();
    let w_inv: Vec<Rational> = w.iter().map(|x| x.recip()).collect();
    let basis = rep.basis();
    let mut out = Vec::new();
    let gens: Vec<Generator> =
        rep.generators().into_iter().filter(|g| g.sign == crate::algebra::Sign::Plus).collect();
    for tilde in [false, true] {
        for g in &gens {
            let (plus, minus) = if tilde {
                (rep.tilde(*g).unwrap(), rep.tilde(g.adjoint()).unwrap())
            } else {
                (rep.operator(*g).unwrap(), rep.operator(g.adjoint()).unwrap())
            };
            let twisted = plus.transpose().scale_rows(&w_inv).scale_columns(w);
            let diff = &twisted - minus;
            let bad = diff
                .entries()
                .find(|&(r, c, _)| basis.is_safe(r, 1) && basis.is_safe(c, 1))
                .map(|(r, c, _)| (r, c));
            out.push(AdjointResult {
                operator: format!("{}{}", if tilde { "t" } else { "" }, g),
                pass: bad.is_none(),
                first_failure: bad,
            });
        }
    }
    out
}

/// Row-echelon set of integer vectors, reduced fraction-free.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<(usize, BigInt)>)>,
}

fn primitive(mut v: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let g = v.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    if v.first().map(|(_, x)| x.is_negative()).unwrap_or(false) {
        for (_, x) in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

fn combine(
    a: &BigInt,
    x: &[(usize, BigInt)],
    b: &BigInt,
    y: &[(usize, BigInt)],
) -> Vec<(usize, BigInt)> {
    // a·x − b·y over sorted sparse vectors
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let next = match (x.get(i), y.get(j)) {
            (Some((ix, vx)), Some((iy, vy))) if ix == iy => {
                i += 1;
                j += 1;
                (*ix, a * vx - b * vy)
            }
            (Some((ix, vx)), Some((iy, _))) if ix < iy => {
                i += 1;
                (*ix, a * vx)
            }
            (Some((ix, vx)), None) => {
                i += 1;
                (*ix, a * vx)
            }
            (_, Some((iy, vy))) => {
                j += 1;
                (*iy, -(b * vy))
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

impl Echelon {
    /// Inserts `v` if independent; returns whether the rank grew.
    fn insert(&mut self, v: Vec<(usize, BigInt)>) -> bool {
        let mut v = primitive(v);
        loop {
            let Some((lead, lead_val)) = v.first().cloned() else {
                return false;
            };
            match self.rows.binary_search_by_key(&lead, |(p, _)| *p) {
                Ok(pos) => {
                    let row = &self.rows[pos].1;
                    let pivot = &row[0].1;
                    v = primitive(combine(pivot, &v, &lead_val, row));
                }
                Err(pos) => {
                    self.rows.insert(pos, (lead, v));
                    return true;
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn to_integer_vector(v: &SparseVector) -> Vec<(usize, BigInt)> {
    // Entries are integers for every paraoperator; clear denominators anyway.
    let l = v.values().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    v.iter()
        .map(|(&i, x)| (i, (x * Rational::from_integer(l.clone())).to_integer()))
        .collect()
}

/// Dimensions, per `N` level `0..=max_level`, of the span of all words of
/// length at most `max_level` in the paraoperators applied to the vacuum.
pub fn cyclic_subspace(rep: &Representation, max_level: usize) -> Result<Vec<usize>, ConfigError> {
    let spec = rep.spec();
    if spec.n > 0 && max_level > spec.cutoff() {
        return Err(ConfigError::LevelBeyondCutoff { level: max_level, cutoff: spec.cutoff() });
    }
    let levels: Vec<usize> = rep.basis().states().iter().map(|s| s.level()).collect();
    let max_n = levels.iter().copied().max().unwrap_or(0);
    let mut spaces: Vec<Echelon> = (0..=max_n).map(|_| Echelon::default()).collect();
    let vac = unit_vector(rep.vacuum());
    spaces[0].insert(to_integer_vector(&vac));
    let mut frontier = vec![vac];
    let ops: Vec<&SparseMatrix> =
        rep.generators().into_iter().map(|g| rep.operator(g).unwrap()).collect();
    for _ in 0..max_level {
        let mut next = Vec::new();
        for v in &frontier {
            for op in &ops {
                let w = op.apply(v);
                let Some((&i, _)) = w.iter().next() else {
                    continue;
                };
                if spaces[levels[i]].insert(to_integer_vector(&w)) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok((0..=max_level).map(|l| spaces.get(l).map_or(0, Echelon::rank)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, Sign};
    use crate::fock::basis::{ModeSpec, DEFAULT_DIMENSION_CAP};
    use crate::relations::{enumerate, Atom, RelationFamily};

    fn rep(m: usize, n: usize, p: usize, c: usize) -> Representation {
        Representation::build(ModeSpec::new(m, n, p, c), DEFAULT_DIMENSION_CAP).unwrap()
    }

    #[test]
    fn evaluate_klein_square_and_cancellation() {
        let r = rep(1, 1, 2, 3);
        let kk = Expression::klein().mul(&Expression::klein());
        assert_eq!(evaluate(&kk, &r).unwrap(), SparseMatrix::identity(r.dim()));
        // The same product evaluated without folding K² = 1.
        let tree = Term::Product(vec![Term::klein(), Term::klein()]);
        assert_eq!(evaluate_term(&tree, &r).unwrap(), SparseMatrix::identity(r.dim()));
        let f = Expression::generator(Generator::f(1, Sign::Plus));
        assert!(evaluate(&(f.clone() - f), &r).unwrap().is_zero());
    }

    #[test]
    fn evaluate_rejects_out_of_range() {
        let r = rep(1, 0, 1, 0);
        let b = Expression::generator(Generator::b(1, Sign::Plus));
        assert!(matches!(evaluate(&b, &r), Err(ConfigError::OutOfRange(_))));
    }

    #[test]
    fn pf_example_passes_everywhere() {
        for p in 1..=3 {
            let r = rep(1, 0, p, 0);
            let inst = enumerate(RelationFamily::Pf, 1, 0)
                .unwrap()
                .into_iter()
                .find(|i| i.id() == "PF[ff_f]:1,1,1:-++")
                .unwrap();
            let res = check_relation(&inst, &r).unwrap();
            assert!(res.pass);
            assert_eq!(res.safe_columns, r.dim());
        }
    }

    #[test]
    fn mixed_example_on_tilde_operators() {
        let r = rep(1, 1, 2, 4);
        for inst in enumerate(RelationFamily::RelPbMixed, 1, 1).unwrap() {
            let res = check_relation(&inst, &r).unwrap();
            assert!(res.pass, "{} {:?}", inst.id(), res.first_failure);
            assert!(res.safe_columns > 0);
        }
    }

    #[test]
    fn failing_instance_reports_entry() {
        let r = rep(1, 0, 1, 0);
        let f = Term::Atom(Atom::Gen(Generator::f(1, Sign::Plus)));
        let mut inst = enumerate(RelationFamily::Klein, 1, 0).unwrap().remove(1);
        inst.term = f;
        inst.expr = inst.term.to_expression();
        let res = check_relation(&inst, &r).unwrap();
        assert!(!res.pass);
        let fail = res.first_failure.unwrap();
        assert_eq!((fail.row, fail.col), (1, 0));
        assert_eq!(fail.value, "1");
        assert_eq!(fail.col_state, "f=0 b=");
    }

    #[test]
    fn adjoint_examples() {
        for r in [rep(2, 0, 2, 0), rep(0, 1, 1, 3), rep(1, 1, 2, 4)] {
            for res in adjoint_check(&r) {
                assert!(res.pass, "{}", res.operator);
            }
        }
        let r = rep(0, 1, 1, 3);
        assert_eq!(r.weight(), &[integer(1), integer(1), integer(2), integer(6)]);
    }

    #[test]
    fn cyclic_examples() {
        let r = rep(1, 0, 1, 0);
        assert_eq!(cyclic_subspace(&r, 2).unwrap(), vec![1, 1, 0]);
        let r = rep(0, 1, 1, 4);
        assert_eq!(cyclic_subspace(&r, 4).unwrap(), vec![1, 1, 1, 1, 1]);
        assert!(cyclic_subspace(&r, 5).is_err());
        let r = rep(1, 1, 2, 3);
        let dims = cyclic_subspace(&r, 3).unwrap();
        assert_eq!(dims[0], 1);
    }

    #[test]
    fn echelon_rank() {
        let mut e = Echelon::default();
        let v = |xs: &[(usize, i64)]| xs.iter().map(|&(i, x)| (i, BigInt::from(x))).collect();
        assert!(e.insert(v(&[(0, 2), (1, 4)])));
        assert!(!e.insert(v(&[(0, -1), (1, -2)])));
        assert!(e.insert(v(&[(0, 1), (1, 3)])));
        assert!(!e.insert(v(&[(1, 5)])));
        assert_eq!(e.rank(), 2);
    }
}
