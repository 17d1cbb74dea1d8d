//! Suites that replay the Klein-transformation argument symbolically and check
//! the defining relations on the constructed representations.

use std::fmt::Write as _;

use num::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{integer, rational, Expression, Generator, Rational, Sign};
use crate::error::ConfigError;
use crate::fock::eval::{
    adjoint_check, apply_expression, check_relation, evaluate, evaluate_with, EntryFailure,
    Substitution,
};
use crate::fock::sparse::{unit_vector, SparseMatrix, SparseVector};
use crate::fock::{ModeSpec, Mutation, Representation, DEFAULT_DIMENSION_CAP};
use crate::random::random_expression;
use crate::relations::{
    applicable_families, enumerate, sign_lemma_holds, tilde_identities, RelationFamily,
    RelationInstance,
};

pub const REPORT_SCHEMA: &str = "paraklein.report/1";

/// Number of random expressions compared by the cross-layer oracle.
pub const ORACLE_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySelection {
    /// Every family applicable to `(m, n)`; the rest are skipped with a notice.
    All,
    /// Exactly these; an inapplicable one is a configuration error.
    Explicit(Vec<RelationFamily>),
}

impl FamilySelection {
    /// Parses `all` or a comma-separated list of family names.
    pub fn parse(s: &str) -> Result<FamilySelection, ConfigError> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(FamilySelection::All);
        }
        let families = s
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<RelationFamily>, _>>()?;
        if families.is_empty() {
            return Err(ConfigError::NoFamilies);
        }
        Ok(FamilySelection::Explicit(families))
    }

    /// The families to run and notices for the ones skipped.
    pub fn resolve(&self, m: usize, n: usize) -> Result<(Vec<RelationFamily>, Vec<String>), ConfigError> {
        match self {
            FamilySelection::All => {
                let (ok, skipped) = applicable_families(m, n);
                let notices = skipped
                    .into_iter()
                    .map(|f| {
                        let reason = f.applicable(m, n).unwrap_err();
                        format!("skipped {f}: {reason}")
                    })
                    .collect();
                Ok((ok, notices))
            }
            FamilySelection::Explicit(families) => {
                if families.is_empty() {
                    return Err(ConfigError::NoFamilies);
                }
                let mut out = families.clone();
                out.sort();
                out.dedup();
                for f in &out {
                    f.applicable(m, n)?;
                }
                Ok((out, Vec::new()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub spec: ModeSpec,
    pub families: FamilySelection,
    pub symbolic_only: bool,
    pub seed: u64,
    pub dimension_cap: usize,
}

impl SuiteConfig {
    pub fn new(spec: ModeSpec) -> Self {
        SuiteConfig {
            spec,
            families: FamilySelection::All,
            symbolic_only: false,
            seed: 0,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }

    pub fn with_families(mut self, families: FamilySelection) -> Self {
        self.families = families;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry: Option<EntryFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub id: String,
    pub status: Status,
    #[serde(rename = "safeColumns", skip_serializing_if = "Option::is_none")]
    pub safe_columns: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InstanceReport {
    fn pass(id: String, safe_columns: Option<usize>) -> Self {
        InstanceReport { id, status: Status::Pass, safe_columns, failure: None, note: None }
    }

    fn fail(id: String, safe_columns: Option<usize>, detail: String, entry: Option<EntryFailure>) -> Self {
        InstanceReport {
            id,
            status: Status::Fail,
            safe_columns,
            failure: Some(Failure { detail, entry }),
            note: None,
        }
    }

    fn from_bool(id: String, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(id, None)
        } else {
            Self::fail(id, None, detail(), None)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub m: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(rename = "bosonCutoff", skip_serializing_if = "Option::is_none")]
    pub boson_cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub families: Vec<String>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: &'static str,
    pub config: ConfigEcho,
    pub notices: Vec<String>,
    /// One entry per enumerated relation instance, sorted by id.
    pub instances: Vec<InstanceReport>,
    /// Representation-level checks (vacuum, Klein operator, adjoint, ladder,
    /// cross-layer oracle), sorted by id.
    pub structural: Vec<InstanceReport>,
    pub summary: Summary,
}

impl Report {
    fn assemble(
        suite: &'static str,
        config: ConfigEcho,
        notices: Vec<String>,
        mut instances: Vec<InstanceReport>,
        mut structural: Vec<InstanceReport>,
    ) -> Report {
        instances.sort_by(|a, b| a.id.cmp(&b.id));
        structural.sort_by(|a, b| a.id.cmp(&b.id));
        let total = instances.len() + structural.len();
        let passed = instances.iter().chain(&structural).filter(|r| r.passed()).count();
        let summary = Summary { total, passed, failed: total - passed, pass: passed == total };
        Report { schema: REPORT_SCHEMA, suite, config, notices, instances, structural, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &InstanceReport> {
        self.instances.iter().chain(&self.structural).filter(|r| !r.passed())
    }

    pub fn find(&self, id: &str) -> Option<&InstanceReport> {
        self.instances.iter().chain(&self.structural).find(|r| r.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "report {} ({})", self.suite, self.schema).unwrap();
        let c = &self.config;
        write!(s, "config: m={} n={}", c.m, c.n).unwrap();
        if let Some(p) = c.p {
            write!(s, " p={p}").unwrap();
        }
        if let Some(cut) = c.boson_cutoff {
            write!(s, " boson-cutoff={cut}").unwrap();
        }
        if let Some(d) = c.dimension {
            write!(s, " dim={d}").unwrap();
        }
        writeln!(s, " families={} seed={}", c.families.join(","), c.seed).unwrap();
        for notice in &self.notices {
            writeln!(s, "notice: {notice}").unwrap();
        }
        for r in self.instances.iter().chain(&self.structural) {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            write!(s, "{status} {}", r.id).unwrap();
            if let Some(safe) = r.safe_columns {
                write!(s, " safe={safe}").unwrap();
            }
            if let Some(note) = &r.note {
                write!(s, " : {note}").unwrap();
            }
            if let Some(f) = &r.failure {
                write!(s, " : {}", f.detail).unwrap();
                if let Some(e) = &f.entry {
                    write!(
                        s,
                        " [row {} ({}) col {} ({}) = {}]",
                        e.row, e.row_state, e.col, e.col_state, e.value
                    )
                    .unwrap();
                }
            }
            writeln!(s).unwrap();
        }
        let sm = &self.summary;
        writeln!(
            s,
            "summary: {} passed, {} failed, {} total: {}",
            sm.passed,
            sm.failed,
            sm.total,
            if sm.pass { "PASS" } else { "FAIL" }
        )
        .unwrap();
        s
    }
}

/// Replays the derivation of the tilde relations from the original ones in
/// the K-extended free algebra. Every identity must reduce to the zero
/// expression; nothing but `K² = 1` and `{K, g} = 0` is used.
pub fn symbolic_tilde_identities(m: usize, n: usize) -> Result<Report, ConfigError> {
    if m + n == 0 {
        return Err(ConfigError::EmptySystem { m, n });
    }
    let mut instances: Vec<InstanceReport> = tilde_identities(m, n)
        .into_iter()
        .map(|inst| {
            let id = inst.id();
            InstanceReport::from_bool(id, inst.expr.is_zero(), || {
                format!("residual {}", inst.expr)
            })
        })
        .collect();
    if m >= 1 {
        for eta in Sign::BOTH {
            for eps in Sign::BOTH {
                let id = format!("TILDE_IDENTITY[sign_lemma]::{}{}", eta.symbol(), eps.symbol());
                instances.push(InstanceReport::from_bool(id, sign_lemma_holds(eta, eps), || {
                    "-eta*eps*|eps-eta| != |eps-eta|".to_string()
                }));
            }
        }
    }
    let config = ConfigEcho {
        m,
        n,
        p: None,
        boson_cutoff: None,
        dimension: None,
        families: vec![RelationFamily::TildeIdentity.name().to_string()],
        seed: 0,
    };
    Ok(Report::assemble("symbolic", config, Vec::new(), instances, Vec::new()))
}

fn check_instance(inst: &RelationInstance, rep: &Representation) -> Result<InstanceReport, ConfigError> {
    let res = check_relation(inst, rep)?;
    Ok(match res.first_failure {
        None => InstanceReport::pass(inst.id(), Some(res.safe_columns)),
        Some(entry) => InstanceReport::fail(
            inst.id(),
            Some(res.safe_columns),
            format!("{} nonzero entries on safe columns", res.failing_entries),
            Some(entry),
        ),
    })
}

fn vector_eq_scaled_vacuum(v: &SparseVector, vacuum: usize, c: &Rational) -> bool {
    if c.is_zero() {
        v.is_empty()
    } else {
        v.len() == 1 && v.get(&vacuum) == Some(c)
    }
}

fn describe_vector(v: &SparseVector) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    v.iter().map(|(i, x)| format!("{x}|{i}>")).collect::<Vec<_>>().join(" + ")
}

/// Vacuum conditions, Klein-operator properties, `H|0⟩`, the W-twisted adjoint
/// and the ladder property `N X^± = X^± (N ± 1)`.
pub fn structural_checks(rep: &Representation) -> Vec<InstanceReport> {
    let spec = *rep.spec();
    let dim = rep.dim();
    let vac_index = rep.vacuum();
    let vac = unit_vector(vac_index);
    let k = rep.operator_k();
    let n_op = rep.operator_n();
    let mut out = Vec::new();

    out.push(InstanceReport::from_bool(
        "K[square]".into(),
        (k * k) == SparseMatrix::identity(dim),
        || "K^2 is not the identity".into(),
    ));
    out.push(InstanceReport::from_bool(
        "K[vacuum]".into(),
        k.apply(&vac) == vac,
        || format!("K|0> = {}", describe_vector(&k.apply(&vac))),
    ));
    let diag = n_op.diagonal_entries();
    let n_ok = n_op.is_diagonal()
        && diag.iter().all(|x| x.is_integer() && !x.is_negative())
        && diag.iter().zip(0..dim).all(|(x, i)| {
            let parity = x.to_integer() % 2u8;
            let expected = if parity.is_zero() { integer(1) } else { integer(-1) };
            k.get(i, i) == expected
        })
        && k.is_diagonal();
    out.push(InstanceReport::from_bool("N[diagonal]".into(), n_ok, || {
        "N is not a nonnegative integer diagonal with K = (-1)^N".into()
    }));
    out.push(InstanceReport::from_bool("N[vacuum]".into(), n_op.apply(&vac).is_empty(), || {
        format!("N|0> = {}", describe_vector(&n_op.apply(&vac)))
    }));
    let h_vac = rational(-((spec.p * spec.m) as i64 - (spec.p * spec.n) as i64), 2);
    let hv = rep.operator_h().apply(&vac);
    out.push(InstanceReport::from_bool(
        "H[vacuum]".into(),
        vector_eq_scaled_vacuum(&hv, vac_index, &h_vac),
        || format!("H|0> = {}, expected {}|0>", describe_vector(&hv), h_vac),
    ));

    let p = integer(spec.p as i64);
    for j in 1..=spec.m {
        let v = rep.operator(Generator::f(j, Sign::Minus)).unwrap().apply(&vac);
        out.push(InstanceReport::from_bool(format!("VACUUM[f-]:{j}"), v.is_empty(), || {
            format!("f-{j}|0> = {}", describe_vector(&v))
        }));
    }
    for k_idx in 1..=spec.n {
        let v = rep.operator(Generator::b(k_idx, Sign::Minus)).unwrap().apply(&vac);
        out.push(InstanceReport::from_bool(format!("VACUUM[b-]:{k_idx}"), v.is_empty(), || {
            format!("b-{k_idx}|0> = {}", describe_vector(&v))
        }));
    }
    let pairs = |count: usize, kind: fn(usize, Sign) -> Generator, anti: bool, tag: &str| {
        let mut out = Vec::new();
        for a in 1..=count {
            for b in 1..=count {
                let x = Expression::generator(kind(a, Sign::Minus));
                let y = Expression::generator(kind(b, Sign::Plus));
                let bracket = if anti { x.anticommutator(&y) } else { x.commutator(&y) };
                let v = apply_expression(&bracket, rep, &vac).expect("indices in range");
                let expected = if a == b { p.clone() } else { Rational::zero() };
                out.push(InstanceReport::from_bool(
                    format!("VACUUM[{tag}]:{a},{b}"),
                    vector_eq_scaled_vacuum(&v, vac_index, &expected),
                    || format!("got {}, expected {}|0>", describe_vector(&v), expected),
                ));
            }
        }
        out
    };
    out.extend(pairs(spec.m, Generator::f, false, "ff"));
    out.extend(pairs(spec.n, Generator::b, true, "bb"));

    for res in adjoint_check(rep) {
        let detail = res
            .first_failure
            .map(|(r, c)| format!("W^-1 X^T W differs from the adjoint at ({r}, {c})"))
            .unwrap_or_default();
        out.push(InstanceReport::from_bool(format!("ADJOINT[{}]", res.operator), res.pass, || detail));
    }

    for g in rep.generators() {
        for tilde in [false, true] {
            let x = if tilde { rep.tilde(g).unwrap() } else { rep.operator(g).unwrap() };
            let shifted = n_op.add_scaled(&integer(g.sign.value()), &SparseMatrix::identity(dim));
            let residual = &(n_op * x) - &(x * &shifted);
            let degree = usize::from(g.is_boson());
            let bad = residual
                .entries()
                .find(|&(_, c, _)| rep.basis().is_safe(c, degree))
                .map(|(r, c, v)| (r, c, v.clone()));
            let name = format!("LADDER[{}{}]", if tilde { "t" } else { "" }, g);
            out.push(InstanceReport::from_bool(name, bad.is_none(), || {
                let (r, c, v) = bad.clone().unwrap();
                format!("N X - X (N +- 1) has entry ({r}, {c}) = {v}")
            }));
        }
    }
    out
}

/// Compares `evaluate(klein_transform(e))` with `e` evaluated on the tilde
/// matrices, for `samples` seeded random expressions.
pub fn cross_layer_oracle(rep: &Representation, seed: u64, samples: usize) -> Vec<InstanceReport> {
    let spec = rep.spec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|i| {
            let e = random_expression(&mut rng, spec.m, spec.n, 3, 3);
            let lhs = evaluate(&e.klein_transform(), rep).expect("indices in range");
            let rhs = evaluate_with(&e, rep, Substitution::Tilde).expect("indices in range");
            InstanceReport::from_bool(format!("ORACLE[klein_transform]:{i:03}"), lhs == rhs, || {
                let diff = &lhs - &rhs;
                let (r, c, v) = diff.first_nonzero().unwrap();
                format!("expression {e} differs at ({r}, {c}) by {v}")
            })
        })
        .collect()
}

fn echo(cfg: &SuiteConfig, families: &[RelationFamily], dim: Option<usize>) -> ConfigEcho {
    ConfigEcho {
        m: cfg.spec.m,
        n: cfg.spec.n,
        p: Some(cfg.spec.p),
        boson_cutoff: Some(cfg.spec.boson_cutoff),
        dimension: dim,
        families: families.iter().map(|f| f.name().to_string()).collect(),
        seed: cfg.seed,
    }
}

fn family_instances(families: &[RelationFamily], m: usize, n: usize) -> Result<Vec<RelationInstance>, ConfigError> {
    let mut out = Vec::new();
    for &f in families {
        out.extend(enumerate(f, m, n)?);
    }
    Ok(out)
}

fn run_on(
    cfg: &SuiteConfig,
    rep: &Representation,
    families: &[RelationFamily],
    notices: Vec<String>,
    suite: &'static str,
) -> Result<Report, ConfigError> {
    let instances = family_instances(families, cfg.spec.m, cfg.spec.n)?
        .iter()
        .map(|inst| check_instance(inst, rep))
        .collect::<Result<Vec<_>, _>>()?;
    let mut structural = structural_checks(rep);
    structural.extend(cross_layer_oracle(rep, cfg.seed, ORACLE_SAMPLES));
    Ok(Report::assemble(suite, echo(cfg, families, Some(rep.dim())), notices, instances, structural))
}

/// Builds the representation once and checks every instance of the requested
/// families, plus the structural checks. With `symbolic_only` set, runs the
/// symbolic replay instead and builds nothing.
pub fn run_matrix_suite(cfg: &SuiteConfig) -> Result<Report, ConfigError> {
    let (families, notices) = cfg.families.resolve(cfg.spec.m, cfg.spec.n)?;
    if cfg.symbolic_only {
        let mut report = symbolic_tilde_identities(cfg.spec.m, cfg.spec.n)?;
        report.notices = notices;
        return Ok(report);
    }
    cfg.spec.validate()?;
    let rep = Representation::build(cfg.spec, cfg.dimension_cap)?;
    run_on(cfg, &rep, &families, notices, "matrix")
}

pub const MUTANTS: [(Mutation, &str); 3] = [
    (Mutation::DropBosonDressing, "drop_boson_dressing"),
    (Mutation::UnsignedTilde, "unsigned_tilde"),
    (Mutation::TrivialKlein, "trivial_klein"),
];

/// Runs the full suite on each deliberately broken construction and requires
/// at least one failure per mutant.
pub fn mutation_selfcheck(cfg: &SuiteConfig) -> Result<Report, ConfigError> {
    if cfg.spec.m == 0 || cfg.spec.n == 0 {
        return Err(ConfigError::SelfCheckNeedsMixedSystem);
    }
    cfg.spec.validate()?;
    let (families, notices) = cfg.families.resolve(cfg.spec.m, cfg.spec.n)?;
    let mut instances = Vec::new();
    let mut dim = None;
    for (mutation, name) in MUTANTS {
        let rep = Representation::build_with(cfg.spec, cfg.dimension_cap, mutation)?;
        dim = Some(rep.dim());
        let report = run_on(cfg, &rep, &families, Vec::new(), "mutant")?;
        let id = format!("MUTANT[{name}]");
        let failed: Vec<&InstanceReport> = report.failures().collect();
        instances.push(if failed.is_empty() {
            InstanceReport::fail(id, None, "mutant passed every check".into(), None)
        } else {
            let mut by_family: Vec<String> = failed
                .iter()
                .map(|r| r.id.split(['[', ':']).next().unwrap_or("").to_string())
                .collect();
            by_family.dedup();
            InstanceReport {
                note: Some(format!(
                    "{} failing checks, first {} (groups: {})",
                    failed.len(),
                    failed[0].id,
                    by_family.join(",")
                )),
                ..InstanceReport::pass(id, None)
            }
        });
    }
    Ok(Report::assemble("selfcheck", echo(cfg, &families, dim), notices, instances, Vec::new()))
}

/// Mutant reports keyed by mutant name, for callers that want the detail.
pub fn mutant_report(cfg: &SuiteConfig, mutation: Mutation) -> Result<Report, ConfigError> {
    cfg.spec.validate()?;
    let (families, notices) = cfg.families.resolve(cfg.spec.m, cfg.spec.n)?;
    let rep = Representation::build_with(cfg.spec, cfg.dimension_cap, mutation)?;
    run_on(cfg, &rep, &families, notices, "mutant")
}

/// Level dimensions of the cyclic subspace, for reporting only.
pub fn level_dimensions(spec: ModeSpec, cap: usize, max_level: usize) -> Result<Vec<usize>, ConfigError> {
    let rep = Representation::build(spec, cap)?;
    crate::fock::cyclic_subspace(&rep, max_level)
}
