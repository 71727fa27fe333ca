//! Batch pipeline behind the `kmsq` binary.

pub mod config;
pub mod output;

use std::fmt::Write as _;
use std::io::BufWriter;
use std::path::PathBuf;

use thiserror::Error;

pub use config::{ConfigError, RunConfig, Settings};
pub use output::OutDir;

use crate::complex::{
    bfs_closure, coset_complex, hdx_report, kms_local_links, kms_subgroup_generators, second_eigenvalue, vertex_link,
    ComplexError, HdxReport, LinkGraph, Method, VertexId,
};
use crate::field::FieldDescriptor;
use crate::forge::{build_seed, ForgeError, SeedTriple, Variant};
use crate::verify::relators::fp_basis_codes;
use crate::verify::surjectivity::{closure_generators, target_order, Mode};
use crate::verify::{conditions_section, verify_seed, Status, VerificationReport, VerifyOptions, REPORT_VERSION};

pub const COMPLEX_REPORT_VERSION: &str = "kmsq-complex v1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("target order {target} exceeds the enumeration cap {cap}")]
    CapExceeded { target: String, cap: u128 },
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("seed file is for {found}, config asks for {want}")]
    SeedMismatch { found: String, want: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::OutOfScope(_) | CliError::SeedMismatch { .. } => 2,
            _ => 3,
        }
    }
}

/// What a command wrote and whether its checks passed.
#[derive(Debug, Clone)]
pub struct CmdOutcome {
    pub passed: bool,
    pub written: Vec<PathBuf>,
    pub summary: String,
}

impl CmdOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn seed_file_name(cfg: &RunConfig) -> String {
    format!("seeds/{}-p{}-r{}-k{}.txt", cfg.variant, cfg.p, cfg.r, cfg.k)
}

/// The configured seed file, or a freshly built seed.
pub fn load_or_build_seed(cfg: &RunConfig) -> Result<SeedTriple, CliError> {
    let seed = match &cfg.seed_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            SeedTriple::from_text(&text)?
        }
        None => build_seed(&FieldDescriptor::canonical(cfg.p, cfg.r, cfg.k).map_err(ForgeError::from)?, cfg.variant)?,
    };
    let d = seed.desc();
    if (d.p(), d.r(), d.k(), seed.variant) != (cfg.p, cfg.r, cfg.k, cfg.variant) {
        return Err(CliError::SeedMismatch {
            found: format!("{} {}", d.canonical_string(), seed.variant),
            want: format!("p={} r={} k={} {}", cfg.p, cfg.r, cfg.k, cfg.variant),
        });
    }
    Ok(seed)
}

/// Builds a seed, stores it and a condition report.
pub fn cmd_seed(cfg: &RunConfig) -> Result<CmdOutcome, CliError> {
    let out = OutDir::create(&cfg.out)?;
    let desc = FieldDescriptor::canonical(cfg.p, cfg.r, cfg.k).map_err(ForgeError::from)?;
    let seed = build_seed(&desc, cfg.variant)?;
    let seed_path = out.write_once(&seed_file_name(cfg), seed.to_text().as_bytes())?;
    let mut report = VerificationReport::new(&seed, cfg.rng_seed);
    report.sections.push(conditions_section(&seed));
    let rep = out.write_versioned("seed", "txt", report.to_text().as_bytes())?;
    out.write_manifest()?;
    Ok(CmdOutcome {
        passed: !report.any_failed(),
        summary: format!("seed {} written to {}", desc.canonical_string(), seed_path.display()),
        written: vec![seed_path, rep],
    })
}

pub fn verify_options(cfg: &RunConfig) -> Result<VerifyOptions, CliError> {
    let surjectivity = match cfg.mode.as_deref() {
        None | Some("auto") => Some(if cfg.k == 1 { Mode::FullEnum } else { Mode::Envelope }),
        Some("none") => None,
        Some(m) => Some(Mode::parse(m).ok_or_else(|| ConfigError::BadValue {
            key: "mode".into(),
            value: m.into(),
        })?),
    };
    Ok(VerifyOptions {
        rng_seed: cfg.rng_seed,
        surjectivity,
        enum_cap: cfg.enum_cap,
        word_budget: cfg.word_budget,
        ..VerifyOptions::default()
    })
}

/// Full verifier run; writes `verify-vN/report.txt` plus witnesses.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(CmdOutcome, VerificationReport), CliError> {
    let seed = load_or_build_seed(cfg)?;
    let report = verify_seed(&seed, &verify_options(cfg)?);
    let out = OutDir::create(&cfg.out)?;
    let (_, dir) = out.next_version("verify", "");
    let sub = OutDir::create(&dir)?;
    let mut written = vec![sub.write_once("report.txt", report.to_text().as_bytes())?];
    for sec in &report.sections {
        for r in &sec.records {
            if let (Some(rel), Some(w)) = (VerificationReport::witness_path(sec.name, r), &r.witness) {
                written.push(sub.write_once(&rel, w.as_bytes())?);
            }
        }
    }
    out.write_manifest()?;
    let failed: Vec<String> = report
        .sections
        .iter()
        .flat_map(|s| s.records.iter().filter(|r| r.status == Status::Fail).map(move |r| format!("{}/{}", s.name, r.id)))
        .collect();
    let outcome = CmdOutcome {
        passed: failed.is_empty(),
        summary: if failed.is_empty() {
            format!("all checks pass; report in {}", dir.display())
        } else {
            format!("failed: {}", failed.join(", "))
        },
        written,
    };
    Ok((outcome, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexMode {
    Full,
    Links,
}

impl ComplexMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full" => Some(Self::Full),
            "links" => Some(Self::Links),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComplexCheck {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

/// Result of a coset-complex run.
#[derive(Debug)]
pub struct ComplexOutcome {
    pub mode: ComplexMode,
    pub descriptor: String,
    pub q: u64,
    pub group_order: Option<usize>,
    pub subgroup_orders: [usize; 3],
    pub vertex_counts: Option<[usize; 3]>,
    pub triangle_count: Option<usize>,
    pub links: Vec<LinkGraph>,
    pub hdx: HdxReport,
    pub checks: Vec<ComplexCheck>,
    /// vertices.tsv and triangles.tsv contents (full mode).
    pub exports: Option<(Vec<u8>, Vec<u8>)>,
}

impl ComplexOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&ComplexCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{COMPLEX_REPORT_VERSION}").unwrap();
        writeln!(s, "descriptor {}", self.descriptor).unwrap();
        writeln!(s, "mode {}", if self.mode == ComplexMode::Full { "full" } else { "links" }).unwrap();
        if let Some(g) = self.group_order {
            writeln!(s, "group_order {g}").unwrap();
        }
        writeln!(s, "subgroup_orders {:?}", self.subgroup_orders).unwrap();
        if let Some(v) = self.vertex_counts {
            writeln!(s, "vertex_counts {v:?}").unwrap();
        }
        if let Some(t) = self.triangle_count {
            writeln!(s, "triangles {t}").unwrap();
        }
        writeln!(s, "bound {:.12} vacuous={}", self.hdx.bound, self.hdx.vacuous).unwrap();
        for r in &self.hdx.rows {
            writeln!(
                s,
                "link {} | nodes={} | edges={} | degrees={:?} | lambda2={:.12} | lambda2_iterative={} | bipartite_cert={:.3e} | pass={}",
                r.id,
                r.nodes,
                r.edges,
                r.degrees,
                r.lambda2,
                r.lambda2_iterative.map_or("-".into(), |x| format!("{x:.12}")),
                r.bipartite_certificate,
                r.pass
            )
            .unwrap();
        }
        if let Some(sk) = self.hdx.skeleton_lambda2 {
            writeln!(s, "skeleton lambda2={sk:.12}").unwrap();
        }
        for c in &self.checks {
            writeln!(s, "check {} | anchor=spectral-hdx | status={} | {}", c.id, c.status.tag(), c.detail).unwrap();
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        writeln!(s, "summary {}", if failed == 0 { "pass".to_string() } else { format!("fail ({failed})") }).unwrap();
        s
    }
}

fn check(checks: &mut Vec<ComplexCheck>, id: &str, ok: bool, detail: String) {
    checks.push(ComplexCheck {
        id: id.into(),
        status: Status::from_bool(ok),
        detail,
    });
}

fn link_checks(checks: &mut Vec<ComplexCheck>, links: &[LinkGraph], q: usize) {
    for l in links {
        let ty = crate::complex::cosets::TYPE_NAMES[l.center.ty as usize];
        let side = if l.center.ty == 2 { q * q } else { q * q * q };
        let ok = l.left.len() == side
            && l.right.len() == side
            && l.is_bipartite_between_sides()
            && l.biregular_degrees() == Some((q, q))
            && l.graph.is_connected();
        check(
            checks,
            &format!("{}.shape", l.id),
            ok,
            format!(
                "type {ty}: sides {}+{} (want {side} each), degrees {:?} (want {q}), connected={}",
                l.left.len(),
                l.right.len(),
                l.biregular_degrees(),
                l.graph.is_connected()
            ),
        );
    }
}

fn bound_check(checks: &mut Vec<ComplexCheck>, hdx: &HdxReport, cross_tol: f64) {
    let detail = format!("max lambda2 {:.12} vs bound {:.12}", hdx.max_lambda2, hdx.bound);
    if hdx.vacuous {
        checks.push(ComplexCheck {
            id: "links.bound".into(),
            status: Status::Skipped,
            detail: format!("{detail}; bound >= 1 is vacuous"),
        });
    } else {
        check(checks, "links.bound", hdx.all_pass(), detail);
    }
    if hdx.rows.iter().any(|r| r.lambda2_iterative.is_some()) {
        check(
            checks,
            "links.solvers-agree",
            hdx.solver_gap <= cross_tol,
            format!("dense vs iterative gap {:.3e} (limit {cross_tol:.0e})", hdx.solver_gap),
        );
    }
}

/// Coset complex or its links for a `k = 1` (full) or any (links) seed.
pub fn run_complex(cfg: &RunConfig, seed: &SeedTriple, mode: ComplexMode) -> Result<ComplexOutcome, CliError> {
    let gens = seed.generators();
    let q = cfg.q();
    let basis = fp_basis_codes(seed.desc());
    let mut checks = Vec::new();
    let cross_tol = 10.0 * cfg.tol;
    match mode {
        ComplexMode::Links => {
            let local = kms_local_links(&gens, &basis, cfg.enum_cap.min(u64::MAX as u128) as u64)?;
            let orders = [0, 1, 2].map(|i| local.subgroups[i].len());
            let qq = q as usize;
            check(
                &mut checks,
                "subgroups.orders",
                orders == [qq.pow(4), qq.pow(4), qq.pow(3)],
                format!("|H_a|, |H_b|, |H_c| = {orders:?}"),
            );
            let inter = [0, 1, 2].map(|i| local.intersections[i].len());
            check(&mut checks, "subgroups.intersections", inter == [qq; 3], format!("pairwise intersections {inter:?}"));
            link_checks(&mut checks, &local.links, qq);
            let hdx = hdx_report(&local.links, q, cfg.tol, true, None)?;
            bound_check(&mut checks, &hdx, cross_tol);
            Ok(ComplexOutcome {
                mode,
                descriptor: seed.desc().canonical_string(),
                q,
                group_order: None,
                subgroup_orders: orders,
                vertex_counts: None,
                triangle_count: None,
                links: local.links.to_vec(),
                hdx,
                checks,
                exports: None,
            })
        }
        ComplexMode::Full => {
            if cfg.k != 1 {
                return Err(CliError::OutOfScope(format!(
                    "full complex construction needs k = 1; for k = {} the group order is astronomically large, use --mode links",
                    cfg.k
                )));
            }
            let target = target_order(seed.variant, 1, q);
            match target {
                Some(t) if t <= cfg.enum_cap => {}
                _ => {
                    return Err(CliError::CapExceeded {
                        target: target.map_or("> 2^128".into(), |t| t.to_string()),
                        cap: cfg.enum_cap,
                    })
                }
            }
            let g = bfs_closure(&closure_generators(&gens, &basis), cfg.enum_cap as u64).require_closed()?;
            check(
                &mut checks,
                "group.order",
                Some(g.len() as u128) == target,
                format!("closure size {} vs target {}", g.len(), target.unwrap()),
            );
            if seed.variant == Variant::Symplectic {
                let ok = g.all_raw(|x| g.ops().is_symplectic(x));
                check(&mut checks, "group.symplectic", ok, format!("all {} elements preserve the standard form", g.len()));
            }
            let sg = kms_subgroup_generators(&gens, &basis);
            let cc = coset_complex(&g, [&sg[0], &sg[1], &sg[2]])?;
            let counts = [0, 1, 2].map(|t| cc.vertices[t].len());
            let weighted: usize = (0..3).map(|t| counts[t] * cc.subgroup_orders[t]).sum();
            check(&mut checks, "complex.vertex-orders", weighted == 3 * g.len(), format!("sum |G/H_t| |H_t| = {weighted}, 3|G| = {}", 3 * g.len()));
            check(
                &mut checks,
                "complex.triangles",
                cc.triangles.len() * cc.triple_intersection_order() == g.len() && cc.triple_intersection_order() == 1,
                format!("{} triangles, |H_a ∩ H_b ∩ H_c| = {}", cc.triangles.len(), cc.triple_intersection_order()),
            );
            // base links, plus the last vertex of each type
            let mut links = Vec::new();
            for ty in 0..3u8 {
                links.push(vertex_link(&cc, cc.base_vertex(ty))?);
                let last = VertexId { ty, idx: cc.vertices[ty as usize].len() as u32 - 1 };
                if last != cc.base_vertex(ty) {
                    links.push(vertex_link(&cc, last)?);
                }
            }
            link_checks(&mut checks, &links, q as usize);
            let skeleton = cc.skeleton_graph();
            let sk = second_eigenvalue(&skeleton, Method::Iterative, cfg.tol)?;
            check(&mut checks, "skeleton.connected", sk.lambda2 < 1.0 && skeleton.is_connected(), format!("skeleton lambda2 {:.12} on {} vertices", sk.lambda2, skeleton.n()));
            let hdx = hdx_report(&links, q, cfg.tol, true, Some(sk.lambda2))?;
            bound_check(&mut checks, &hdx, cross_tol);
            let mut vt = Vec::new();
            cc.write_vertices(&mut BufWriter::new(&mut vt))?;
            let mut tt = Vec::new();
            cc.write_triangles(&mut BufWriter::new(&mut tt))?;
            Ok(ComplexOutcome {
                mode,
                descriptor: seed.desc().canonical_string(),
                q,
                group_order: Some(g.len()),
                subgroup_orders: cc.subgroup_orders,
                vertex_counts: Some(counts),
                triangle_count: Some(cc.triangles.len()),
                links,
                hdx,
                checks,
                exports: Some((vt, tt)),
            })
        }
    }
}

/// Writes `complex-vN/` with the report, spectra.csv and, in full mode,
/// vertices.tsv and triangles.tsv.
pub fn cmd_complex(cfg: &RunConfig) -> Result<(CmdOutcome, ComplexOutcome), CliError> {
    let mode = match cfg.mode.as_deref() {
        None => ComplexMode::Links,
        Some(m) => ComplexMode::parse(m).ok_or_else(|| ConfigError::BadValue {
            key: "mode".into(),
            value: m.into(),
        })?,
    };
    if mode == ComplexMode::Full && cfg.k != 1 {
        return Err(CliError::OutOfScope(format!("--mode full needs k = 1 (got k = {})", cfg.k)));
    }
    let seed = load_or_build_seed(cfg)?;
    let res = run_complex(cfg, &seed, mode)?;
    let out = OutDir::create(&cfg.out)?;
    let (_, dir) = out.next_version("complex", "");
    let sub = OutDir::create(&dir)?;
    let mut written = vec![sub.write_once("report.txt", res.to_text().as_bytes())?];
    let mut csv = Vec::new();
    res.hdx.write_csv(&mut csv)?;
    written.push(sub.write_once("spectra.csv", &csv)?);
    if let Some((v, t)) = &res.exports {
        written.push(sub.write_once("vertices.tsv", v)?);
        written.push(sub.write_once("triangles.tsv", t)?);
    }
    out.write_manifest()?;
    Ok((
        CmdOutcome {
            passed: res.passed(),
            summary: format!("max link lambda2 {:.6} vs bound {:.6}{}", res.hdx.max_lambda2, res.hdx.bound, if res.hdx.vacuous { " (vacuous)" } else { "" }),
            written,
        },
        res,
    ))
}

/// Collects the summary line of every report under the output directory.
pub fn cmd_report(root: &std::path::Path) -> Result<CmdOutcome, CliError> {
    let out = OutDir::create(root)?;
    let mut text = format!("{REPORT_VERSION} summary\n");
    let mut passed = true;
    for rel in out.files()? {
        let is_report = rel.ends_with("/report.txt") || (rel.starts_with("seed-v") && rel.ends_with(".txt"));
        if !is_report {
            continue;
        }
        let body = std::fs::read_to_string(out.root().join(&rel))?;
        let last = body.lines().rev().find(|l| l.starts_with("summary ")).unwrap_or("summary missing");
        passed &= last == "summary pass";
        writeln!(text, "{rel}: {}", &last["summary ".len().min(last.len())..]).unwrap();
    }
    let path = out.write_versioned("summary", "txt", text.as_bytes())?;
    out.write_manifest()?;
    Ok(CmdOutcome {
        passed,
        summary: text,
        written: vec![path],
    })
}
