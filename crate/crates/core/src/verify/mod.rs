//! Machine checks of relations, local structure and proof identities.

pub mod chevalley;
pub mod identities;
pub mod local;
pub mod relators;
pub mod surjectivity;

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::BaseField;
use crate::forge::{Generators, SeedTriple, Variant};
use crate::matrix::MatFq;

pub const REPORT_VERSION: &str = "kmsq-report v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The printed form fails and the corrected form holds.
    Erratum,
    Skipped,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Erratum => "erratum",
            Status::Skipped => "skipped",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    /// Offending matrices, in matrix text format.
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            status,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: &'static str,
    pub records: Vec<CheckRecord>,
}

impl Section {
    pub fn new(name: &'static str) -> Self {
        Self {
            name,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn failed(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn with_status(&self, s: Status) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(move |r| r.status == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub descriptor: String,
    pub variant: Variant,
    pub rng_seed: u64,
    pub sections: Vec<Section>,
}

impl VerificationReport {
    pub fn new(seed: &SeedTriple, rng_seed: u64) -> Self {
        Self {
            descriptor: seed.desc().canonical_string(),
            variant: seed.variant,
            rng_seed,
            sections: Vec::new(),
        }
    }

    pub fn any_failed(&self) -> bool {
        self.sections.iter().any(Section::failed)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Relative path for the witness of a record, if it has one.
    pub fn witness_path(section: &str, r: &CheckRecord) -> Option<String> {
        r.witness.as_ref().map(|_| format!("witnesses/{}-{}.txt", section, r.id))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{REPORT_VERSION}").unwrap();
        writeln!(s, "descriptor {}", self.descriptor).unwrap();
        writeln!(s, "variant {}", self.variant).unwrap();
        writeln!(s, "rng_seed {}", self.rng_seed).unwrap();
        for sec in &self.sections {
            writeln!(s, "section {}", sec.name).unwrap();
            for r in &sec.records {
                let w = Self::witness_path(sec.name, r).unwrap_or_else(|| "-".into());
                writeln!(
                    s,
                    "check {} | anchor={} | status={} | witness={} | {}",
                    r.id,
                    r.anchor,
                    r.status.tag(),
                    w,
                    r.detail.replace('\n', " ")
                )
                .unwrap();
            }
        }
        let failed = self.sections.iter().flat_map(|x| &x.records).filter(|r| r.status == Status::Fail).count();
        writeln!(s, "summary {}", if failed == 0 { "pass".to_string() } else { format!("fail ({failed})") }).unwrap();
        s
    }
}

/// Block-matrix helpers over a seed, with 1-based block indices.
#[derive(Clone, Debug)]
pub struct Blocks {
    pub gens: Generators,
    pub f: Arc<BaseField>,
    pub k: usize,
}

impl Blocks {
    pub fn new(gens: &Generators) -> Self {
        Self {
            gens: gens.clone(),
            f: gens.field().clone(),
            k: gens.k(),
        }
    }

    pub fn ma(&self) -> &MatFq {
        self.gens.ma()
    }
    pub fn mb(&self) -> &MatFq {
        self.gens.mb()
    }
    pub fn mc(&self) -> &MatFq {
        self.gens.mc()
    }

    pub fn c(&self, n: i64) -> u32 {
        self.f.from_int(n)
    }

    pub fn half(&self) -> u32 {
        self.f.inv(self.c(2)).expect("odd characteristic")
    }

    pub fn id(&self) -> MatFq {
        MatFq::identity(&self.f, self.k)
    }

    pub fn zero(&self) -> MatFq {
        MatFq::zeros(&self.f, self.k)
    }

    /// `E_{i,j}` inside a `k x k` block (1-based).
    pub fn e(&self, i: usize, j: usize) -> MatFq {
        MatFq::unit(&self.f, self.k, i - 1, j - 1)
    }

    /// Identity plus the listed blocks of a `4 x 4` block matrix.
    pub fn u(&self, blocks: &[(usize, usize, MatFq)]) -> MatFq {
        self.u_n(4, blocks)
    }

    /// Identity plus the listed blocks of an `n x n` block matrix.
    pub fn u_n(&self, n: usize, blocks: &[(usize, usize, MatFq)]) -> MatFq {
        let mut m = MatFq::identity(&self.f, n * self.k);
        for (i, j, b) in blocks {
            let cur = m.block(self.k, i - 1, j - 1);
            m.set_block(i - 1, j - 1, &(&cur + b));
        }
        m
    }

    pub fn diag_n(&self, ds: &[MatFq]) -> MatFq {
        let mut m = MatFq::zeros(&self.f, ds.len() * self.k);
        for (i, d) in ds.iter().enumerate() {
            m.set_block(i, i, d);
        }
        m
    }

    pub fn anticomm(&self) -> MatFq {
        &(self.ma() * self.mb()) + &(self.mb() * self.ma())
    }

    /// `V_{-α_2}(X)`: block `(4,2)` equal to `X`.
    pub fn v_neg2(&self, x: &MatFq) -> MatFq {
        self.u(&[(4, 2, x.clone())])
    }

    pub fn rand_elem(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(0..self.f.q())
    }

    pub fn rand_mat(&self, rng: &mut ChaCha8Rng) -> MatFq {
        let data = (0..self.k * self.k).map(|_| rng.gen_range(0..self.f.q())).collect();
        MatFq::from_vec(&self.f, self.k, data).unwrap()
    }

    pub fn rand_sym(&self, rng: &mut ChaCha8Rng) -> MatFq {
        let m = self.rand_mat(rng);
        let mut s = m.clone();
        for i in 0..self.k {
            for j in 0..i {
                s.set(i, j, m.get(j, i));
            }
        }
        s
    }

    pub fn rand_gl(&self, rng: &mut ChaCha8Rng) -> MatFq {
        loop {
            let m = self.rand_mat(rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// Uniform-ish element of `SL_k`: scale the first row of a random
    /// invertible matrix by the inverse determinant.
    pub fn rand_sl(&self, rng: &mut ChaCha8Rng) -> MatFq {
        let mut m = self.rand_gl(rng);
        let di = self.f.inv(m.det()).unwrap();
        for j in 0..self.k {
            let v = self.f.mul(m.get(0, j), di);
            m.set(0, j, v);
        }
        m
    }
}

/// Lists the `k x k` blocks where two matrices differ, with both sides.
pub fn block_diff(lhs: &MatFq, rhs: &MatFq, k: usize) -> String {
    if lhs.n() != rhs.n() {
        return format!("size mismatch {} vs {}", lhs.n(), rhs.n());
    }
    let nb = lhs.n() / k;
    let mut out = String::new();
    for i in 0..nb {
        for j in 0..nb {
            let (a, b) = (lhs.block(k, i, j), rhs.block(k, i, j));
            if a != b {
                writeln!(out, "block ({},{})", i + 1, j + 1).unwrap();
                writeln!(out, "lhs").unwrap();
                out.push_str(&a.to_text());
                writeln!(out, "rhs").unwrap();
                out.push_str(&b.to_text());
            }
        }
    }
    out
}

/// Differing block positions only, for one-line details.
pub fn diff_positions(lhs: &MatFq, rhs: &MatFq, k: usize) -> Vec<(usize, usize)> {
    let nb = lhs.n() / k;
    let mut v = Vec::new();
    for i in 0..nb {
        for j in 0..nb {
            if lhs.block(k, i, j) != rhs.block(k, i, j) {
                v.push((i + 1, j + 1));
            }
        }
    }
    v
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub rng_seed: u64,
    pub random_trials: usize,
    /// Local images are only enumerated up to this many elements per image.
    pub local_cap: u64,
    pub surjectivity: Option<surjectivity::Mode>,
    pub enum_cap: u128,
    pub word_budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            rng_seed: 0x6b6d73,
            random_trials: 50,
            local_cap: 100_000,
            surjectivity: None,
            enum_cap: 20_000_000,
            word_budget: crate::matrix::DEFAULT_WORD_BUDGET,
        }
    }
}

/// Seed hypotheses plus the derived facts the proofs rely on.
pub fn conditions_section(seed: &SeedTriple) -> Section {
    let mut conds = Section::new("conditions");
    let cr = crate::forge::verify_conditions(seed);
    for c in cr.clauses.iter() {
        let st = match c.status {
            crate::forge::ClauseStatus::Pass => Status::Pass,
            crate::forge::ClauseStatus::Fail => Status::Fail,
            crate::forge::ClauseStatus::NotApplicable => Status::Skipped,
        };
        conds.push(CheckRecord::new(c.id, "seed-hypotheses", st, c.detail.clone()));
    }
    for c in cr.auxiliary.iter() {
        let st = match c.status {
            crate::forge::ClauseStatus::Pass => Status::Pass,
            crate::forge::ClauseStatus::Fail => Status::Fail,
            crate::forge::ClauseStatus::NotApplicable => Status::Skipped,
        };
        conds.push(CheckRecord::new(format!("aux.{}", c.id), "seed-derived-facts", st, c.detail.clone()));
    }
    conds
}

/// Runs every report section on a seed.
pub fn verify_seed(seed: &SeedTriple, opts: &VerifyOptions) -> VerificationReport {
    let gens = seed.generators();
    let mut report = VerificationReport::new(seed, opts.rng_seed);
    report.sections.push(conditions_section(seed));
    report.sections.push(relators::check_presentation_relators(&gens, seed.desc()));
    report.sections.push(chevalley::check_chevalley_commutators(&gens, opts.rng_seed));
    let q = seed.desc().q() as u64;
    if q.pow(4) <= opts.local_cap {
        let images = local::enumerate_local_images(&gens, opts.rng_seed);
        report.sections.push(images.section.clone());
        report.sections.push(local::check_intersection_property(&gens, &images.images));
        if seed.variant == Variant::Symplectic {
            report.sections.push(local::check_symplectic(&gens, &images.images));
        }
    } else {
        let mut s = Section::new("local-images");
        s.push(CheckRecord::new("enumeration", "local-groups", Status::Skipped, format!("q^4 = {} exceeds cap {}", q.pow(4), opts.local_cap)));
        report.sections.push(s);
    }
    report.sections.push(identities::replay_proof_identities(seed, &gens, opts.rng_seed, opts.random_trials));
    if let Some(mode) = opts.surjectivity {
        report.sections.push(surjectivity::surjectivity_evidence(seed, &gens, mode, opts.enum_cap, opts.word_budget));
    }
    report
}
