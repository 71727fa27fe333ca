//! Seed triples `(M_a, M_b, M_c)` and the block generators built from them.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{factor, BaseField, ExtElem, FieldDescriptor, FieldError};
use crate::matrix::{MatFq, MatrixError};
use crate::singer::{
    find_lambda_trace_nonzero, find_lambda_trace_zero, find_self_dual_normal_basis, membership_in_poly_algebra,
    mult_map_matrix, singer_certificate, SelfDualBasis, SingerError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no x in F_q outside {{0, 1, -1}}")]
    NoAdmissibleX,
    #[error("condition failed: {0}")]
    ConditionFailed(String),
    #[error("seed parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Singer(#[from] SingerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    SpecialLinear,
    Symplectic,
}

impl Variant {
    pub fn tag(self) -> &'static str {
        match self {
            Variant::SpecialLinear => "sl",
            Variant::Symplectic => "sp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "sl" => Some(Variant::SpecialLinear),
            "sp" => Some(Variant::Symplectic),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Checks the parameter hypotheses; `k = 1` is accepted for the symplectic
/// variant only (the rank-one case used for full enumeration).
pub fn check_hypotheses(p: u32, r: u32, k: u32, variant: Variant) -> Result<(), ForgeError> {
    let fail = |s: &str| Err(ForgeError::Hypothesis(s.to_string()));
    if !factor::is_prime(p as u64) || p == 2 {
        return fail("p > 2 must be an odd prime");
    }
    if r == 0 {
        return fail("r >= 1");
    }
    let q = (p as u64).checked_pow(r).ok_or(FieldError::TooLarge(u64::MAX))?;
    if q <= 3 {
        return fail("q = p^r > 3");
    }
    if k == 1 {
        return match variant {
            Variant::Symplectic => Ok(()),
            Variant::SpecialLinear => fail("k > 3 (k = 1 is only available for the sp variant)"),
        };
    }
    if !factor::is_prime(k as u64) {
        return fail("k must be prime");
    }
    if k as u64 == p as u64 {
        return fail("p and k distinct primes");
    }
    if k <= 3 {
        return fail("k > 3");
    }
    if q.checked_pow(k) == Some(9) {
        return fail("q^k != 9");
    }
    Ok(())
}

/// How a seed was built.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub lambda: ExtElem,
    pub basis: SelfDualBasis,
    pub x: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SeedTriple {
    pub ma: MatFq,
    pub mb: MatFq,
    pub mc: MatFq,
    pub variant: Variant,
    pub provenance: Provenance,
}

impl SeedTriple {
    pub fn desc(&self) -> &Arc<FieldDescriptor> {
        self.provenance.lambda.desc()
    }

    pub fn field(&self) -> &Arc<BaseField> {
        self.ma.field()
    }

    pub fn k(&self) -> usize {
        self.ma.n()
    }

    /// `M_a M_b + M_b M_a`.
    pub fn anticommutator(&self) -> MatFq {
        &(&self.ma * &self.mb) + &(&self.mb * &self.ma)
    }

    /// `S = (M_a M_b + M_b M_a) M_c`.
    pub fn s(&self) -> MatFq {
        &self.anticommutator() * &self.mc
    }

    pub fn generators(&self) -> Generators {
        Generators::new(&self.ma, &self.mb, &self.mc)
    }
}

/// Smallest code in `F_q` outside `{0, 1, -1}`.
pub fn admissible_x(f: &BaseField) -> Result<u32, ForgeError> {
    f.elements()
        .find(|&c| c != 0 && c != 1 && c != f.neg(1))
        .ok_or(ForgeError::NoAdmissibleX)
}

fn basis_and_lambda(desc: &Arc<FieldDescriptor>) -> Result<(SelfDualBasis, ExtElem), ForgeError> {
    let basis = find_self_dual_normal_basis(desc)?;
    let lambda = find_lambda_trace_nonzero(&basis)?;
    Ok((basis, lambda))
}

/// `diag(x, 1, ..., 1)` and the transposition of the first two coordinates.
pub fn sl_pair(f: &Arc<BaseField>, k: usize, x: u32) -> (MatFq, MatFq) {
    let mut d = vec![1; k];
    d[0] = x;
    let ma = MatFq::diag(f, &d);
    let mb = MatFq::from_fn(f, k, |i, j| match (i, j) {
        (0, 1) | (1, 0) => 1,
        _ if i == j && i >= 2 => 1,
        _ => 0,
    });
    (ma, mb)
}

/// `M_c` from `S` and `(M_a, M_b)`.
pub fn complete_seed(ma: &MatFq, mb: &MatFq, s: &MatFq) -> Result<MatFq, ForgeError> {
    let p = &(ma * mb) + &(mb * ma);
    Ok(&p.inv()? * s)
}

pub fn build_sl_seed(desc: &Arc<FieldDescriptor>) -> Result<SeedTriple, ForgeError> {
    check_hypotheses(desc.p(), desc.r(), desc.k(), Variant::SpecialLinear)?;
    let f = desc.base_field();
    let k = desc.k() as usize;
    let x = admissible_x(f)?;
    let (basis, lambda) = basis_and_lambda(desc)?;
    let s = mult_map_matrix(&lambda, &basis);
    let (ma, mb) = sl_pair(f, k, x);
    let mc = complete_seed(&ma, &mb, &s)?;
    Ok(SeedTriple {
        ma,
        mb,
        mc,
        variant: Variant::SpecialLinear,
        provenance: Provenance {
            lambda,
            basis,
            x: Some(x),
        },
    })
}

/// The fixed symmetric pair of the symplectic construction; for `k = 1` the
/// leading `2 x 2` blocks are truncated to their first entry.
pub fn sp_pair(f: &Arc<BaseField>, k: usize) -> (MatFq, MatFq) {
    let m1 = f.neg(1);
    let ma = MatFq::from_fn(f, k, |i, j| match (i, j) {
        (1, 1) => 1,
        _ if i == j => m1,
        _ => 0,
    });
    let mb = MatFq::from_fn(f, k, |i, j| match (i, j) {
        (0, 0) => 1,
        (0, 1) | (1, 0) | (1, 1) => m1,
        _ if i == j => 1,
        _ => 0,
    });
    (ma, mb)
}

pub fn build_sp_seed(desc: &Arc<FieldDescriptor>) -> Result<SeedTriple, ForgeError> {
    check_hypotheses(desc.p(), desc.r(), desc.k(), Variant::Symplectic)?;
    let f = desc.base_field();
    let k = desc.k() as usize;
    let (basis, lambda) = basis_and_lambda(desc)?;
    let s = mult_map_matrix(&lambda, &basis);
    let (ma, mb) = sp_pair(f, k);
    let mc = complete_seed(&ma, &mb, &s)?;
    let seed = SeedTriple {
        ma,
        mb,
        mc,
        variant: Variant::Symplectic,
        provenance: Provenance { lambda, basis, x: None },
    };
    let report = verify_conditions(&seed);
    if let Some(c) = report.failures().next() {
        return Err(ForgeError::ConditionFailed(format!("{}: {}", c.id, c.detail)));
    }
    Ok(seed)
}

pub fn build_seed(desc: &Arc<FieldDescriptor>, variant: Variant) -> Result<SeedTriple, ForgeError> {
    match variant {
        Variant::SpecialLinear => build_sl_seed(desc),
        Variant::Symplectic => build_sp_seed(desc),
    }
}

/// `V_a(λ), V_b(λ), V_c(λ)` for a fixed triple.
#[derive(Clone, Debug)]
pub struct Generators {
    ma: MatFq,
    mb: MatFq,
    mc: MatFq,
}

impl Generators {
    pub fn new(ma: &MatFq, mb: &MatFq, mc: &MatFq) -> Self {
        Self {
            ma: ma.clone(),
            mb: mb.clone(),
            mc: mc.clone(),
        }
    }

    pub fn k(&self) -> usize {
        self.ma.n()
    }

    pub fn field(&self) -> &Arc<BaseField> {
        self.ma.field()
    }

    pub fn ma(&self) -> &MatFq {
        &self.ma
    }
    pub fn mb(&self) -> &MatFq {
        &self.mb
    }
    pub fn mc(&self) -> &MatFq {
        &self.mc
    }

    /// Identity plus the given `(row, col, block)` entries (zero-based block
    /// positions).
    pub fn unipotent(&self, blocks: &[(usize, usize, MatFq)]) -> MatFq {
        let k = self.k();
        let mut m = MatFq::identity(self.field(), 4 * k);
        for (i, j, b) in blocks {
            m.set_block(*i, *j, b);
        }
        m
    }

    /// Blocks `(1,4)` and `(2,3)` equal to `λ M_a`.
    pub fn va(&self, lambda: u32) -> MatFq {
        let b = self.ma.scale(lambda);
        self.unipotent(&[(0, 3, b.clone()), (1, 2, b)])
    }

    /// Block `(2,1)` equal to `λ M_b`, block `(3,4)` equal to `-λ M_b`.
    pub fn vb(&self, lambda: u32) -> MatFq {
        let b = self.mb.scale(lambda);
        self.unipotent(&[(1, 0, b.clone()), (2, 3, b.neg())])
    }

    /// Block `(4,2)` equal to `λ M_c`.
    pub fn vc(&self, lambda: u32) -> MatFq {
        self.unipotent(&[(3, 1, self.mc.scale(lambda))])
    }

    /// `(V_a(1), V_b(1), V_c(1))`.
    pub fn primes(&self) -> [MatFq; 3] {
        [self.va(1), self.vb(1), self.vc(1)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl ClauseStatus {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            ClauseStatus::Pass
        } else {
            ClauseStatus::Fail
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ClauseStatus::Pass => "pass",
            ClauseStatus::Fail => "fail",
            ClauseStatus::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: &'static str,
    pub status: ClauseStatus,
    pub detail: String,
}

/// Hypothesis clauses plus derived facts used along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub variant: Variant,
    pub clauses: Vec<Clause>,
    pub auxiliary: Vec<Clause>,
}

impl ConditionReport {
    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.status == ClauseStatus::Fail)
    }

    pub fn failed_ids(&self) -> Vec<&'static str> {
        self.failures().map(|c| c.id).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().chain(&self.auxiliary).find(|c| c.id == id)
    }
}

fn clause(id: &'static str, ok: bool, detail: impl Into<String>) -> Clause {
    Clause {
        id,
        status: ClauseStatus::from_bool(ok),
        detail: detail.into(),
    }
}

fn na(id: &'static str, detail: impl Into<String>) -> Clause {
    Clause {
        id,
        status: ClauseStatus::NotApplicable,
        detail: detail.into(),
    }
}

fn singer_ok(s: &MatFq) -> Result<bool, ForgeError> {
    Ok(singer_certificate(s, false)?.is_valid())
}

/// Clause-by-clause check of a seed against the hypotheses of its variant.
pub fn verify_conditions(seed: &SeedTriple) -> ConditionReport {
    match seed.variant {
        Variant::SpecialLinear => verify_sl(seed),
        Variant::Symplectic => verify_sp(seed),
    }
}

fn invertibility(seed: &SeedTriple) -> Clause {
    let bad: Vec<&str> = [("M_a", &seed.ma), ("M_b", &seed.mb), ("M_c", &seed.mc)]
        .iter()
        .filter(|(_, m)| !m.is_invertible())
        .map(|(n, _)| *n)
        .collect();
    clause("invertible", bad.is_empty(), if bad.is_empty() { "all invertible".into() } else { format!("singular: {}", bad.join(", ")) })
}

fn verify_sl(seed: &SeedTriple) -> ConditionReport {
    let f = seed.field().clone();
    let k = seed.k();
    let mut clauses = vec![invertibility(seed)];
    let mut aux = Vec::new();
    let s = seed.s();
    let lambda = &seed.provenance.lambda;
    let basis = &seed.provenance.basis;

    let expected = mult_map_matrix(lambda, basis);
    let singer = singer_ok(&s).unwrap_or(false);
    clauses.push(clause(
        "singer",
        singer && s == expected && lambda.is_primitive(),
        format!(
            "S Singer: {singer}; S = [mu_lambda]_B: {}; lambda primitive: {}",
            s == expected,
            lambda.is_primitive()
        ),
    ));
    let b1 = &basis.elems()[0];
    let tr = (lambda * &(b1 * b1)).trace();
    clauses.push(clause("trace", tr != 0, format!("Tr(lambda b1^2) = {}", f.format_elem(tr))));

    // X = M_a M_b M_a^-1 M_b^-1
    let comm = match (seed.ma.inv(), seed.mb.inv()) {
        (Ok(ai), Ok(bi)) => Some(&(&(&seed.ma * &seed.mb) * &ai) * &bi),
        _ => None,
    };
    match &comm {
        Some(x) if k >= 2 => {
            let c = x.get(0, 0);
            let shape = f.inv(c).ok().map(|ci| {
                let mut d = vec![1; k];
                d[0] = c;
                d[1] = ci;
                MatFq::diag(&f, &d)
            });
            let ok = shape.as_ref() == Some(x);
            clauses.push(clause("commutator-shape", ok, if ok { "diag(x, x^-1, I)".to_string() } else { "not of the form diag(x, x^-1, I)".to_string() }));
            let m1 = f.neg(1);
            clauses.push(clause("x-not-pm1", c != 1 && c != m1, format!("x = {}", f.format_elem(c))));
        }
        _ => {
            clauses.push(na("commutator-shape", "M_a or M_b singular, or k < 2"));
            clauses.push(na("x-not-pm1", "M_a or M_b singular, or k < 2"));
        }
    }

    // derived facts from the proof
    if let (Some(x), true) = (&comm, k >= 2) {
        let id = MatFq::identity(&f, k);
        aux.push(clause("xs-ne-sx", &x.clone() * &s != &s * x, "X S != S X"));
        match (&id + x).inv() {
            Ok(ipx) => {
                let z = &(&(&ipx * x) * &s) * &ipx;
                let zz = &z + &z.transpose();
                aux.push(clause("z-nonsymmetric", !z.is_symmetric(), "Z != Z^t"));
                let t = &s - &zz.scale(2);
                aux.push(clause(
                    "s-minus-2zz-singular-nonzero",
                    !t.is_invertible() && !t.is_zero(),
                    format!("rank {}", t.rank()),
                ));
                aux.push(clause("zz-not-in-fq-s", !membership_in_poly_algebra(&zz, &s), "Z + Z^t not in F_q[S]"));
                let c = x.get(0, 0);
                let yz = (|| {
                    let y = f.inv(f.add(1, c)).ok()?;
                    let z = f.inv(f.add(1, f.inv(c).ok()?)).ok()?;
                    Some(f.mul(4 % f.p(), f.mul(y, z)))
                })();
                aux.push(clause("four-yz-ne-1", yz.is_some_and(|v| v != 1), "4yz != 1"));
            }
            Err(_) => aux.push(na("z-nonsymmetric", "I + X singular")),
        }
    }
    ConditionReport {
        variant: Variant::SpecialLinear,
        clauses,
        auxiliary: aux,
    }
}

fn verify_sp(seed: &SeedTriple) -> ConditionReport {
    let f = seed.field().clone();
    let k = seed.k();
    let mut clauses = vec![invertibility(seed)];
    let mut aux = Vec::new();
    let s = seed.s();
    clauses.push(clause(
        "symmetric",
        seed.ma.is_symmetric() && seed.mb.is_symmetric(),
        "M_a and M_b symmetric",
    ));
    let singer = singer_ok(&s).unwrap_or(false);
    clauses.push(clause(
        "singer",
        singer && s.is_symmetric(),
        format!("S Singer: {singer}; S symmetric: {}", s.is_symmetric()),
    ));
    let p = seed.anticommutator();
    let scalar = p.as_scalar().filter(|&c| c != 0);
    clauses.push(clause(
        "scalarity",
        scalar.is_some(),
        match scalar {
            Some(c) => format!("M_a M_b + M_b M_a = {} I", f.format_elem(c)),
            None => "M_a M_b + M_b M_a is not a nonzero scalar".into(),
        },
    ));
    let t = &(&(&(&seed.ma * &seed.mb) * &s) * &seed.mb) * &seed.ma;
    if k == 1 {
        clauses.push(na("nonmembership", "F_q[S] is everything for k = 1"));
    } else {
        clauses.push(clause(
            "nonmembership",
            !membership_in_poly_algebra(&t, &s),
            "M_a M_b S M_b M_a not in F_q[S]",
        ));
        let d = &t - &s;
        aux.push(clause(
            "abs-ba-minus-s-singular-nonzero",
            !d.is_invertible() && !d.is_zero(),
            format!("rank {}", d.rank()),
        ));
        aux.push(clause("s-does-not-commute", &s * &t != &t * &s, "S T != T S"));
    }
    aux.push(clause("mc-symmetric", seed.mc.is_symmetric(), "M_c symmetric"));
    ConditionReport {
        variant: Variant::Symplectic,
        clauses,
        auxiliary: aux,
    }
}

/// One-clause tampering of a valid seed, for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tamper {
    /// `M_c := I`.
    McIdentity,
    /// Rebuild with a primitive `λ'` such that `Tr(λ' b_1^2) = 0`.
    LambdaTraceZero,
    /// `M_a := I`, so the commutator is trivial.
    XIsOne,
    /// `M_b` swaps coordinates 1 and 3; `M_c` recomputed.
    CommutatorShape,
    /// Symplectic: `M_b := I`, `M_c` recomputed.
    SpMbIdentity,
    /// Symplectic: `M_a := M_b := I`, `M_c` recomputed.
    SpMaMbIdentity,
    /// Symplectic: `M_c := -2^{-1} I`.
    SpMcScalar,
}

impl Tamper {
    pub fn for_variant(v: Variant) -> &'static [Tamper] {
        match v {
            Variant::SpecialLinear => &[Tamper::McIdentity, Tamper::LambdaTraceZero, Tamper::XIsOne, Tamper::CommutatorShape],
            Variant::Symplectic => &[Tamper::SpMbIdentity, Tamper::SpMaMbIdentity, Tamper::SpMcScalar],
        }
    }

    /// The single clause the tampered seed must fail.
    pub fn expected_clause(self) -> &'static str {
        match self {
            Tamper::McIdentity | Tamper::SpMcScalar => "singer",
            Tamper::LambdaTraceZero => "trace",
            Tamper::XIsOne => "x-not-pm1",
            Tamper::CommutatorShape => "commutator-shape",
            Tamper::SpMbIdentity => "scalarity",
            Tamper::SpMaMbIdentity => "nonmembership",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tamper::McIdentity => "mc-identity",
            Tamper::LambdaTraceZero => "lambda-trace-zero",
            Tamper::XIsOne => "x-is-one",
            Tamper::CommutatorShape => "commutator-shape",
            Tamper::SpMbIdentity => "sp-mb-identity",
            Tamper::SpMaMbIdentity => "sp-ma-mb-identity",
            Tamper::SpMcScalar => "sp-mc-scalar",
        }
    }

    pub fn apply(self, seed: &SeedTriple) -> Result<SeedTriple, ForgeError> {
        let f = seed.field().clone();
        let k = seed.k();
        let id = MatFq::identity(&f, k);
        let mut out = seed.clone();
        let s = mult_map_matrix(&seed.provenance.lambda, &seed.provenance.basis);
        match self {
            Tamper::McIdentity => out.mc = id,
            Tamper::LambdaTraceZero => {
                let lambda = find_lambda_trace_zero(&seed.provenance.basis)?;
                let s = mult_map_matrix(&lambda, &seed.provenance.basis);
                out.mc = complete_seed(&out.ma, &out.mb, &s)?;
                out.provenance.lambda = lambda;
            }
            Tamper::XIsOne => {
                out.ma = id;
                out.mc = complete_seed(&out.ma, &out.mb, &s)?;
                out.provenance.x = Some(1);
            }
            Tamper::CommutatorShape => {
                if k < 3 {
                    return Err(ForgeError::Hypothesis("commutator-shape tamper needs k >= 3".into()));
                }
                out.mb = MatFq::from_fn(&f, k, |i, j| match (i, j) {
                    (0, 2) | (2, 0) => 1,
                    _ if i == j && i != 0 && i != 2 => 1,
                    _ => 0,
                });
                out.mc = complete_seed(&out.ma, &out.mb, &s)?;
            }
            Tamper::SpMbIdentity => {
                out.mb = id;
                out.mc = complete_seed(&out.ma, &out.mb, &s)?;
            }
            Tamper::SpMaMbIdentity => {
                out.ma = id.clone();
                out.mb = id;
                out.mc = complete_seed(&out.ma, &out.mb, &s)?;
            }
            Tamper::SpMcScalar => {
                let c = f.neg(f.inv(2 % f.p())?);
                out.mc = MatFq::scalar(&f, k, c);
            }
        }
        Ok(out)
    }
}

const SEED_MAGIC: &str = "kmsq-seed v1";

fn coeffs_text(x: &ExtElem) -> String {
    x.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl SeedTriple {
    /// Text serialization; see [`SeedTriple::from_text`].
    pub fn to_text(&self) -> String {
        let prov = &self.provenance;
        let mut s = String::new();
        s.push_str(SEED_MAGIC);
        s.push('\n');
        s.push_str(&format!("descriptor {}\n", self.desc().canonical_string()));
        s.push_str(&format!("variant {}\n", self.variant));
        match prov.x {
            Some(x) => s.push_str(&format!("x {}\n", self.field().format_elem(x))),
            None => s.push_str("x none\n"),
        }
        s.push_str(&format!("lambda {}\n", coeffs_text(&prov.lambda)));
        let b = prov.basis.generator().unwrap_or(&prov.basis.elems()[0]);
        s.push_str(&format!("basis {}\n", coeffs_text(b)));
        for (name, m) in [("M_a", &self.ma), ("M_b", &self.mb), ("M_c", &self.mc)] {
            s.push_str(name);
            s.push('\n');
            s.push_str(&m.to_text());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, ForgeError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut it = lines.into_iter();
        let mut next = |what: &str| it.next().ok_or_else(|| ForgeError::Parse { line: 0, msg: format!("missing {what}") });
        let err = |line: usize, msg: String| ForgeError::Parse { line, msg };

        let (ln, magic) = next("header")?;
        if magic != SEED_MAGIC {
            return Err(err(ln, format!("expected {SEED_MAGIC:?}")));
        }
        let mut field_line = |key: &str| -> Result<(usize, String), ForgeError> {
            let (ln, l) = next(key)?;
            let rest = l
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| err(ln, format!("expected `{key} ...`")))?;
            Ok((ln, rest.trim().to_string()))
        };
        let (ln, d) = field_line("descriptor")?;
        let desc = FieldDescriptor::parse(&d).map_err(|e| err(ln, e.to_string()))?;
        let f = desc.base_field().clone();
        let (ln, v) = field_line("variant")?;
        let variant = Variant::parse(&v).ok_or_else(|| err(ln, format!("unknown variant {v:?}")))?;
        let (ln, xs) = field_line("x")?;
        let x = if xs == "none" {
            None
        } else {
            Some(f.parse_elem(&xs).map_err(|e| err(ln, e.to_string()))?)
        };
        let parse_elem = |ln: usize, s: &str| -> Result<ExtElem, ForgeError> {
            let cs: Vec<u32> = s
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| err(ln, format!("bad coefficient {c:?}"))))
                .collect::<Result<_, _>>()?;
            if cs.len() != desc.k() as usize || cs.iter().any(|&c| c >= desc.q()) {
                return Err(err(ln, format!("{s:?} is not an element of F_q^{}", desc.k())));
            }
            Ok(desc.elem(&cs))
        };
        let (ln, l) = field_line("lambda")?;
        let lambda = parse_elem(ln, &l)?;
        let (ln, b) = field_line("basis")?;
        let b = parse_elem(ln, &b)?;
        let basis = SelfDualBasis::from_generator(&b).map_err(|e| err(ln, e.to_string()))?;
        let mut mats = Vec::new();
        for name in ["M_a", "M_b", "M_c"] {
            let (ln, l) = next(name)?;
            if l != name {
                return Err(err(ln, format!("expected {name}")));
            }
            let (hl, head) = next("matrix header")?;
            let n: usize = head
                .split_whitespace()
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err(hl, format!("bad matrix header {head:?}")))?;
            let mut body = vec![head.to_string()];
            for _ in 0..n {
                body.push(next("matrix row")?.1.to_string());
            }
            let m = MatFq::from_text(&f, &body.join("\n")).map_err(|e| err(hl, e.to_string()))?;
            if m.n() != desc.k() as usize {
                return Err(err(hl, format!("{name} has size {}, expected {}", m.n(), desc.k())));
            }
            mats.push(m);
        }
        if let Some((ln, _)) = it.next() {
            return Err(err(ln, "trailing content".into()));
        }
        let mc = mats.pop().unwrap();
        let mb = mats.pop().unwrap();
        let ma = mats.pop().unwrap();
        Ok(SeedTriple {
            ma,
            mb,
            mc,
            variant,
            provenance: Provenance { lambda, basis, x },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator, is_symplectic, SymplecticForm};

    fn desc(p: u32, k: u32) -> Arc<FieldDescriptor> {
        FieldDescriptor::canonical(p, 1, k).unwrap()
    }

    #[test]
    fn hypotheses() {
        assert!(check_hypotheses(5, 1, 7, Variant::SpecialLinear).is_ok());
        let msg = |r: Result<(), ForgeError>| r.unwrap_err().to_string();
        assert!(msg(check_hypotheses(5, 1, 5, Variant::SpecialLinear)).contains("distinct primes"));
        assert!(msg(check_hypotheses(3, 2, 2, Variant::SpecialLinear)).contains("k > 3"));
        assert!(msg(check_hypotheses(3, 1, 5, Variant::Symplectic)).contains("q = p^r > 3"));
        assert!(msg(check_hypotheses(2, 3, 5, Variant::Symplectic)).contains("p > 2"));
        assert!(msg(check_hypotheses(5, 1, 9, Variant::Symplectic)).contains("prime"));
        assert!(check_hypotheses(5, 1, 1, Variant::Symplectic).is_ok());
        assert!(check_hypotheses(5, 1, 1, Variant::SpecialLinear).is_err());
    }

    #[test]
    fn sl_commutator_target() {
        let f = Arc::new(BaseField::prime(5).unwrap());
        let (ma, mb) = sl_pair(&f, 5, 2);
        let c = &(&(&ma * &mb) * &ma.inv().unwrap()) * &mb.inv().unwrap();
        assert_eq!(c, MatFq::diag(&f, &[2, 3, 1, 1, 1]));
        let p = &(&ma * &mb) + &(&mb * &ma);
        let expect = MatFq::from_int_rows(
            &f,
            &[vec![0, 3, 0, 0, 0], vec![3, 0, 0, 0, 0], vec![0, 0, 2, 0, 0], vec![0, 0, 0, 2, 0], vec![0, 0, 0, 0, 2]],
        );
        assert_eq!(p, expect);
        assert!(p.is_invertible());
    }

    #[test]
    fn sl_seed_passes_all_clauses() {
        let seed = build_sl_seed(&desc(5, 7)).unwrap();
        assert_eq!(seed.provenance.x, Some(2));
        let report = verify_conditions(&seed);
        assert!(report.all_pass(), "{report:?}");
        assert!(report.auxiliary.iter().all(|c| c.status == ClauseStatus::Pass), "{report:?}");
        assert!(singer_certificate(&seed.s(), true).unwrap().is_valid());
    }

    #[test]
    fn sp_pair_products() {
        let f = Arc::new(BaseField::prime(7).unwrap());
        let (ma, mb) = sp_pair(&f, 5);
        let ab = &ma * &mb;
        assert_eq!(ab.truncate(2), MatFq::from_int_rows(&f, &[vec![-1, 1], vec![-1, -1]]));
        assert_eq!(ab.block(1, 2, 2), MatFq::scalar(&f, 1, 6));
        assert_eq!(&ab + &(&mb * &ma), MatFq::scalar(&f, 5, 5));
        assert!(ma.is_symmetric() && mb.is_symmetric());
    }

    #[test]
    fn sp_seed_passes_all_clauses() {
        let seed = build_sp_seed(&desc(7, 5)).unwrap();
        let report = verify_conditions(&seed);
        assert!(report.all_pass(), "{report:?}");
        assert_eq!(report.clause("scalarity").unwrap().detail, "M_a M_b + M_b M_a = 5 I");
        assert!(seed.ma.is_symmetric() && seed.mb.is_symmetric() && seed.mc.is_symmetric());
    }

    #[test]
    fn rank_one_sp_seed() {
        let seed = build_sp_seed(&desc(5, 1)).unwrap();
        assert_eq!(seed.ma, MatFq::scalar(seed.field(), 1, 4));
        assert_eq!(seed.mb, MatFq::scalar(seed.field(), 1, 1));
        // M_c = -2^{-1} λ = 2 λ over F_5, λ = 2
        assert_eq!(seed.mc, MatFq::scalar(seed.field(), 1, 4));
        let report = verify_conditions(&seed);
        assert!(report.all_pass());
        assert_eq!(report.clause("nonmembership").unwrap().status, ClauseStatus::NotApplicable);
    }

    #[test]
    fn generators_basic_laws() {
        let seed = build_sl_seed(&desc(5, 7)).unwrap();
        let g = seed.generators();
        for v in [g.va(0), g.vb(0), g.vc(0)] {
            assert!(v.is_identity());
        }
        for l in 0..5 {
            for m in 0..5 {
                let f = seed.field();
                assert_eq!(&g.va(l) * &g.va(m), g.va(f.add(l, m)));
                assert_eq!(&g.vb(l) * &g.vb(m), g.vb(f.add(l, m)));
                assert_eq!(&g.vc(l) * &g.vc(m), g.vc(f.add(l, m)));
            }
        }
        let [a, b, _] = g.primes();
        assert_eq!(a.det(), 1);
        // V_a(1) block layout
        assert_eq!(a.block(7, 0, 3), seed.ma);
        assert_eq!(a.block(7, 1, 2), seed.ma);
        assert!(a.block(7, 0, 2).is_zero());
        let c = commutator(&a, &b).unwrap();
        let mut expect = MatFq::identity(seed.field(), 28);
        expect.set_block(1, 3, &seed.anticommutator().neg());
        assert_eq!(c, expect);
    }

    #[test]
    fn sp_generators_symplectic() {
        let seed = build_sp_seed(&desc(7, 5)).unwrap();
        let g = seed.generators();
        let form = SymplecticForm::standard(seed.field(), 10);
        for l in 0..7 {
            for v in [g.va(l), g.vb(l), g.vc(l)] {
                assert!(is_symplectic(&v, &form).unwrap());
            }
        }
        // the special-linear seed is not symplectic
        let sl = build_sl_seed(&desc(7, 5)).unwrap().generators();
        assert!(!is_symplectic(&sl.vc(1), &form).unwrap());
    }

    #[test]
    fn negative_controls_fail_exactly_one_clause() {
        for (p, k, variant) in [(5, 7, Variant::SpecialLinear), (7, 5, Variant::SpecialLinear), (7, 5, Variant::Symplectic), (11, 5, Variant::Symplectic)] {
            let seed = build_seed(&desc(p, k), variant).unwrap();
            for &t in Tamper::for_variant(variant) {
                let bad = t.apply(&seed).unwrap();
                let report = verify_conditions(&bad);
                assert_eq!(report.failed_ids(), vec![t.expected_clause()], "({p},{k}) {t:?}: {report:?}");
            }
        }
    }

    #[test]
    fn seed_text_round_trip() {
        for variant in [Variant::SpecialLinear, Variant::Symplectic] {
            let seed = build_seed(&desc(7, 5), variant).unwrap();
            let text = seed.to_text();
            let back = SeedTriple::from_text(&text).unwrap();
            assert_eq!(back.to_text(), text);
            assert_eq!(back.mc, seed.mc);
        }
    }

    #[test]
    fn seed_over_extension_field() {
        let d = FieldDescriptor::canonical(3, 2, 5).unwrap();
        let seed = build_sl_seed(&d).unwrap();
        assert_eq!(seed.provenance.x, Some(3));
        assert!(verify_conditions(&seed).all_pass());
        let back = SeedTriple::from_text(&seed.to_text()).unwrap();
        assert_eq!(back.ma, seed.ma);
    }

    #[test]
    fn corrupted_seed_rejected() {
        let seed = build_sl_seed(&desc(5, 7)).unwrap();
        let text = seed.to_text();
        let broken = text.replacen("variant sl", "variant xx", 1);
        assert!(matches!(SeedTriple::from_text(&broken), Err(ForgeError::Parse { line: 3, .. })));
        let truncated: String = text.lines().take(12).collect::<Vec<_>>().join("\n");
        assert!(matches!(SeedTriple::from_text(&truncated), Err(ForgeError::Parse { .. })));
        let bad_basis = text.replacen("basis ", "basis 1,", 1);
        assert!(SeedTriple::from_text(&bad_basis).is_err());
    }
}
