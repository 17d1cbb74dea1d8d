use std::collections::HashMap;
use std::fmt::Write as _;

use num::BigUint;
use serde::Serialize;

use crate::error::ConfigError;

pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

/// `m` parafermion species, `n` paraboson species, order `p`, and the cap on
/// the total boson occupation across all `n·p` boson modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModeSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub boson_cutoff: usize,
}

impl ModeSpec {
    pub fn new(m: usize, n: usize, p: usize, boson_cutoff: usize) -> Self {
        ModeSpec { m, n, p, boson_cutoff }
    }

    /// Requirements for building a basis at all.
    pub fn validate_shape(&self) -> Result<(), ConfigError> {
        if self.m + self.n == 0 {
            return Err(ConfigError::EmptySystem { m: self.m, n: self.n });
        }
        if self.p == 0 {
            return Err(ConfigError::ZeroOrder);
        }
        Ok(())
    }

    /// Requirements for relation suites: every degree-3 relation must have at
    /// least one safe column.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_shape()?;
        if self.n > 0 && self.boson_cutoff < 3 {
            return Err(ConfigError::CutoffTooSmall { cutoff: self.boson_cutoff });
        }
        Ok(())
    }

    pub fn fermion_modes(&self) -> usize {
        self.m * self.p
    }

    pub fn boson_modes(&self) -> usize {
        self.n * self.p
    }

    /// Effective cutoff; irrelevant (and forced to 0) without bosons.
    pub fn cutoff(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.boson_cutoff
        }
    }

    /// `2^{m·p} · C(cutoff + n·p, n·p)`
    pub fn dimension(&self) -> BigUint {
        let fermions = BigUint::from(2u32).pow(self.fermion_modes() as u32);
        fermions * binomial(self.cutoff() + self.boson_modes(), self.boson_modes())
    }

    pub fn check_dimension(&self, cap: usize) -> Result<usize, ConfigError> {
        let dim = self.dimension();
        match usize::try_from(&dim) {
            Ok(d) if d <= cap => Ok(d),
            _ => Err(ConfigError::DimensionCap { dim: dim.to_string(), cap }),
        }
    }

    /// Position of Green component `a` of fermion species `j` (both 1-based)
    /// in the component-major mode order.
    pub fn fermion_mode(&self, j: usize, a: usize) -> usize {
        (a - 1) * self.m + (j - 1)
    }

    pub fn boson_mode(&self, k: usize, a: usize) -> usize {
        (a - 1) * self.n + (k - 1)
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Occupation numbers of every bare mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub fermions: Vec<bool>,
    pub bosons: Vec<usize>,
}

impl BasisState {
    pub fn boson_total(&self) -> usize {
        self.bosons.iter().sum()
    }

    pub fn fermion_total(&self) -> usize {
        self.fermions.iter().filter(|&&b| b).count()
    }

    /// Total number of quanta; the eigenvalue of the grading operator `N`.
    pub fn level(&self) -> usize {
        self.fermion_total() + self.boson_total()
    }

    pub fn describe(&self) -> String {
        let bits: String = self.fermions.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let bosons: Vec<String> = self.bosons.iter().map(|r| r.to_string()).collect();
        format!("f={} b={}", bits, bosons.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct Basis {
    spec: ModeSpec,
    states: Vec<BasisState>,
    lookup: HashMap<BasisState, usize>,
}

impl Basis {
    /// Fermion bit strings in lexicographic order (outer) crossed with boson
    /// occupation vectors in graded-lexicographic order (inner). The vacuum is
    /// index 0.
    pub fn build(spec: ModeSpec, cap: usize) -> Result<Basis, ConfigError> {
        spec.validate_shape()?;
        let dim = spec.check_dimension(cap)?;
        let fm = spec.fermion_modes();
        let boson_vectors = boson_vectors(spec.boson_modes(), spec.cutoff());
        let mut states = Vec::with_capacity(dim);
        for bits in 0..(1usize << fm) {
            // Mode 0 is the most significant bit, so integer order is
            // lexicographic order of the bit string.
            let fermions: Vec<bool> = (0..fm).map(|i| bits >> (fm - 1 - i) & 1 == 1).collect();
            for bosons in &boson_vectors {
                states.push(BasisState { fermions: fermions.clone(), bosons: bosons.clone() });
            }
        }
        debug_assert_eq!(states.len(), dim);
        let lookup = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Basis { spec, states, lookup })
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &BasisState {
        &self.states[i]
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.lookup.get(state).copied()
    }

    pub fn vacuum(&self) -> usize {
        0
    }

    /// Columns whose boson headroom admits `degree` raising steps.
    pub fn safe_columns(&self, degree: usize) -> Vec<usize> {
        let cutoff = self.spec.cutoff();
        if self.spec.n == 0 {
            return (0..self.dim()).collect();
        }
        if degree > cutoff {
            return Vec::new();
        }
        (0..self.dim())
            .filter(|&i| self.states[i].boson_total() + degree <= cutoff)
            .collect()
    }

    pub fn is_safe(&self, i: usize, degree: usize) -> bool {
        self.spec.n == 0 || self.states[i].boson_total() + degree <= self.spec.cutoff()
    }

    /// `index : f=<bits> b=<ints> N=<int>` per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, st) in self.states.iter().enumerate() {
            writeln!(s, "{} : {} N={}", i, st.describe(), st.level()).unwrap();
        }
        s
    }
}

/// All occupation vectors of `modes` modes with total at most `cutoff`,
/// ordered by total, then lexicographically.
fn boson_vectors(modes: usize, cutoff: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 0..=cutoff {
        let mut current = vec![0; modes];
        compositions(modes, total, 0, &mut current, &mut out);
        if modes == 0 {
            break;
        }
    }
    out
}

fn compositions(
    modes: usize,
    remaining: usize,
    pos: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == modes {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    if pos == modes - 1 {
        current[pos] = remaining;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for r in 0..=remaining {
        current[pos] = r;
        compositions(modes, remaining - r, pos + 1, current, out);
    }
    current[pos] = 0;
}
