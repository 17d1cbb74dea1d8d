//! Green-ansatz representation of the order-`p` system on a truncated
//! occupation-number space.
//!
//! Each paraoperator is a sum over `p` Green components of bare modes dressed
//! by diagonal ±1 factors. Within a component, bare fermions and bosons
//! anticommute; across components fermion pairs commute, boson pairs
//! anticommute and fermion-boson pairs commute.

use num::{One, Signed};

use crate::algebra::{integer, is_integral, rational, Generator, Kind, Rational, Sign};
use crate::error::ConfigError;
use crate::fock::basis::{Basis, BasisState, ModeSpec};
use crate::fock::sparse::SparseMatrix;
use crate::relations::Atom;

/// Deliberate construction defects used to test the test suite.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mutation {
    #[default]
    None,
    /// Fermion dressing without the same-component boson count.
    DropBosonDressing,
    /// `f̃^± = f^± K` instead of `±f^± K`.
    UnsignedTilde,
    /// `K` replaced by the identity.
    TrivialKlein,
}

/// Matrices for one family of operators, indexed `[species - 1][sign]` with
/// sign 0 = annihilation, 1 = creation.
type OperatorTable = Vec<[SparseMatrix; 2]>;

fn slot(sign: Sign) -> usize {
    match sign {
        Sign::Minus => 0,
        Sign::Plus => 1,
    }
}

#[derive(Clone, Debug)]
pub struct Representation {
    spec: ModeSpec,
    basis: Basis,
    mutation: Mutation,
    f: OperatorTable,
    b: OperatorTable,
    tf: OperatorTable,
    tb: OperatorTable,
    h: SparseMatrix,
    n: SparseMatrix,
    k: SparseMatrix,
    weight: Vec<Rational>,
}

/// Action of a bare mode on a basis state.
pub fn bare_action(
    spec: &ModeSpec,
    kind: Kind,
    species: usize,
    component: usize,
    sign: Sign,
    state: &BasisState,
) -> Option<(i64, BasisState)> {
    match kind {
        Kind::ParaFermion => {
            let mode = spec.fermion_mode(species, component);
            let occupied = state.fermions[mode];
            if occupied == (sign == Sign::Plus) {
                return None;
            }
            let before = state.fermions[..mode].iter().filter(|&&x| x).count();
            let mut next = state.clone();
            next.fermions[mode] = !occupied;
            Some((if before % 2 == 0 { 1 } else { -1 }, next))
        }
        Kind::ParaBoson => {
            let mode = spec.boson_mode(species, component);
            let r = state.bosons[mode];
            let mut next = state.clone();
            match sign {
                Sign::Plus => {
                    if state.boson_total() >= spec.cutoff() {
                        return None;
                    }
                    next.bosons[mode] = r + 1;
                    Some((1, next))
                }
                Sign::Minus => {
                    if r == 0 {
                        return None;
                    }
                    next.bosons[mode] = r - 1;
                    Some((r as i64, next))
                }
            }
        }
    }
}

/// Sign of the diagonal dressing factor for component `a` on `state`.
pub fn dressing_sign(
    spec: &ModeSpec,
    kind: Kind,
    component: usize,
    state: &BasisState,
    mutation: Mutation,
) -> i64 {
    let fermions_before: usize = (1..component)
        .flat_map(|c| (1..=spec.m).map(move |j| (j, c)))
        .filter(|&(j, c)| state.fermions[spec.fermion_mode(j, c)])
        .count();
    let bosons_in = |c: usize| -> usize {
        (1..=spec.n).map(|k| state.bosons[spec.boson_mode(k, c)]).sum()
    };
    let exponent = match kind {
        Kind::ParaFermion => {
            let own = if mutation == Mutation::DropBosonDressing { 0 } else { bosons_in(component) };
            fermions_before + own
        }
        Kind::ParaBoson => (1..component).map(bosons_in).sum(),
    };
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Representation {
    pub fn build(spec: ModeSpec, cap: usize) -> Result<Representation, ConfigError> {
        Self::build_with(spec, cap, Mutation::None)
    }

    pub fn build_with(
        spec: ModeSpec,
        cap: usize,
        mutation: Mutation,
    ) -> Result<Representation, ConfigError> {
        let basis = Basis::build(spec, cap)?;
        let dim = basis.dim();

        let para = |kind: Kind, species: usize, sign: Sign| -> SparseMatrix {
            let mut out = SparseMatrix::zeros(dim);
            for a in 1..=spec.p {
                for (col, state) in basis.states().iter().enumerate() {
                    if let Some((c, next)) = bare_action(&spec, kind, species, a, sign, state) {
                        let d = dressing_sign(&spec, kind, a, state, mutation);
                        let row = basis.index_of(&next).expect("target state in basis");
                        out.add_entry(row, col, integer(c * d));
                    }
                }
            }
            out
        };
        let table = |kind: Kind, count: usize| -> OperatorTable {
            (1..=count)
                .map(|s| [para(kind, s, Sign::Minus), para(kind, s, Sign::Plus)])
                .collect()
        };
        let f = table(Kind::ParaFermion, spec.m);
        let b = table(Kind::ParaBoson, spec.n);

        let levels: Vec<Rational> = basis
            .states()
            .iter()
            .map(|s| integer(s.level() as i64))
            .collect();
        let shift = rational((spec.p * spec.m) as i64 - (spec.p * spec.n) as i64, 2);
        verify_cartan(&basis, &f, &b, &levels, &shift)?;

        let n = SparseMatrix::diagonal(levels.clone());
        let h = SparseMatrix::diagonal(levels.iter().map(|l| l - &shift).collect());
        let k = match mutation {
            Mutation::TrivialKlein => SparseMatrix::identity(dim),
            _ => SparseMatrix::diagonal(
                basis
                    .states()
                    .iter()
                    .map(|s| integer(if s.level() % 2 == 0 { 1 } else { -1 }))
                    .collect(),
            ),
        };

        let tf = f
            .iter()
            .map(|[minus, plus]| {
                let fk_minus = minus * &k;
                let fk_plus = plus * &k;
                match mutation {
                    Mutation::UnsignedTilde => [fk_minus, fk_plus],
                    _ => [fk_minus.scale(&integer(-1)), fk_plus],
                }
            })
            .collect();
        let tb = b.clone();

        let weight = basis
            .states()
            .iter()
            .map(|s| {
                s.bosons.iter().fold(Rational::one(), |acc, &r| {
                    (1..=r).fold(acc, |acc, i| acc * integer(i as i64))
                })
            })
            .collect();

        Ok(Representation { spec, basis, mutation, f, b, tf, tb, h, n, k, weight })
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn mutation(&self) -> Mutation {
        self.mutation
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn vacuum(&self) -> usize {
        self.basis.vacuum()
    }

    fn check_range(&self, g: Generator) -> Result<(), ConfigError> {
        let bound = match g.kind {
            Kind::ParaFermion => self.spec.m,
            Kind::ParaBoson => self.spec.n,
        };
        if g.index == 0 || g.index > bound {
            Err(ConfigError::OutOfRange(g.to_string()))
        } else {
            Ok(())
        }
    }

    /// `f_j^±` or `b_k^±`.
    pub fn operator(&self, g: Generator) -> Result<&SparseMatrix, ConfigError> {
        self.check_range(g)?;
        Ok(match g.kind {
            Kind::ParaFermion => &self.f[g.index - 1][slot(g.sign)],
            Kind::ParaBoson => &self.b[g.index - 1][slot(g.sign)],
        })
    }

    /// `f̃_j^± = ±f_j^± K` or `b̃_k^± = b_k^±`.
    pub fn tilde(&self, g: Generator) -> Result<&SparseMatrix, ConfigError> {
        self.check_range(g)?;
        Ok(match g.kind {
            Kind::ParaFermion => &self.tf[g.index - 1][slot(g.sign)],
            Kind::ParaBoson => &self.tb[g.index - 1][slot(g.sign)],
        })
    }

    pub fn atom(&self, atom: Atom) -> Result<&SparseMatrix, ConfigError> {
        match atom {
            Atom::Gen(g) => self.operator(g),
            Atom::Tilde(g) => self.tilde(g),
            Atom::Klein => Ok(&self.k),
        }
    }

    pub fn operator_h(&self) -> &SparseMatrix {
        &self.h
    }

    pub fn operator_n(&self) -> &SparseMatrix {
        &self.n
    }

    pub fn operator_k(&self) -> &SparseMatrix {
        &self.k
    }

    /// Gram weights `Π r!` over boson modes; the divided-power basis is
    /// orthogonal with these norms.
    pub fn weight(&self) -> &[Rational] {
        &self.weight
    }

    /// Every generator of the system, fermions first.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for j in 1..=self.spec.m {
            for s in Sign::BOTH {
                out.push(Generator::f(j, s));
            }
        }
        for k in 1..=self.spec.n {
            for s in Sign::BOTH {
                out.push(Generator::b(k, s));
            }
        }
        out
    }

    /// Bare Green-component mode, without dressing.
    pub fn bare_mode(
        &self,
        kind: Kind,
        species: usize,
        component: usize,
        sign: Sign,
    ) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim());
        for (col, state) in self.basis.states().iter().enumerate() {
            if let Some((c, next)) = bare_action(&self.spec, kind, species, component, sign, state) {
                let row = self.basis.index_of(&next).expect("target state in basis");
                out.add_entry(row, col, integer(c));
            }
        }
        out
    }

    /// Diagonal dressing operator for one Green component.
    pub fn klein_factor(&self, kind: Kind, component: usize) -> SparseMatrix {
        SparseMatrix::diagonal(
            self.basis
                .states()
                .iter()
                .map(|s| integer(dressing_sign(&self.spec, kind, component, s, self.mutation)))
                .collect(),
        )
    }
}

/// Builds `H = Σ h_i` by matrix algebra from the paraoperators and checks it
/// against `N − (p/2)(m − n)` on every column with boson headroom for the
/// quadratic words. The top boson shell is excluded: there the truncated
/// `b^+` vanishes and `h_i` is not the true operator.
fn verify_cartan(
    basis: &Basis,
    f: &OperatorTable,
    b: &OperatorTable,
    levels: &[Rational],
    shift: &Rational,
) -> Result<(), ConfigError> {
    let dim = basis.dim();
    let half = rational(1, 2);
    let mut h = SparseMatrix::zeros(dim);
    for [minus, plus] in f {
        let comm = &(minus * plus) - &(plus * minus);
        h = h.add_scaled(&-half.clone(), &comm);
    }
    for [minus, plus] in b {
        let anti = &(minus * plus) + &(plus * minus);
        h = h.add_scaled(&half, &anti);
    }
    for col in basis.safe_columns(1) {
        for (&row, v) in h.column(col) {
            if row != col {
                return Err(ConfigError::Construction(format!(
                    "H has off-diagonal entry ({row}, {col}) = {v}"
                )));
            }
        }
        let n_value = h.get(col, col) + shift;
        if !is_integral(&n_value) || n_value.is_negative() || n_value != levels[col] {
            return Err(ConfigError::Construction(format!(
                "N on basis state {col} is {n_value}, expected {}",
                levels[col]
            )));
        }
    }
    Ok(())
}
