//! One line per acceptance criterion. Runs as a plain binary so the lines
//! are always printed; exits nonzero if a criterion regresses from its
//! recorded outcome.

use std::time::{Duration, Instant};

use kmsq::cli::{cmd_complex, run_complex, ComplexMode, RunConfig};
use kmsq::complex::{kms_local_links, spectral_bound};
use kmsq::field::FieldDescriptor;
use kmsq::forge::{build_seed, verify_conditions, SeedTriple, Tamper, Variant};
use kmsq::matrix::{algebra_envelope_dim, sp_order};
use kmsq::verify::identities::{documented_errata, replay_proof_identities};
use kmsq::verify::local::{check_intersection_property, enumerate_local_images};
use kmsq::verify::relators::{check_presentation_relators, fp_basis_codes};
use kmsq::verify::{chevalley, verify_seed, Status, VerifyOptions};

const CASES: [(u32, u32); 3] = [(5, 7), (7, 5), (11, 5)];
const VARIANTS: [Variant; 2] = [Variant::SpecialLinear, Variant::Symplectic];

struct Line {
    id: &'static str,
    pass: bool,
    /// The criterion is recorded as unattainable; its failure is expected.
    expected_fail: bool,
    detail: String,
}

fn seed(p: u32, k: u32, v: Variant) -> SeedTriple {
    build_seed(&FieldDescriptor::canonical(p, 1, k).unwrap(), v).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn relator_suite() -> Line {
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (p, k) in CASES {
        for v in VARIANTS {
            let s = seed(p, k, v);
            let t = Instant::now();
            let sec = check_presentation_relators(&s.generators(), s.desc());
            let dt = t.elapsed();
            slowest = slowest.max(dt);
            let n = sec.records.iter().filter(|r| r.id.starts_with("rel") && !r.id.starts_with("rel-")).count();
            if sec.failed() || n != 11 || dt > Duration::from_secs(10) {
                bad.push(format!("({p},{k},{v})"));
            }
        }
    }
    Line {
        id: "1 relator-suite",
        pass: bad.is_empty(),
        expected_fail: false,
        detail: format!("11 relators exact on 6 seeds, slowest {}; failing {:?}", secs(slowest), bad),
    }
}

fn local_structure() -> Line {
    let mut notes = Vec::new();
    let mut ok = true;
    for (p, k) in CASES {
        for v in VARIANTS {
            let s = seed(p, k, v);
            let g = s.generators();
            let t = Instant::now();
            let li = enumerate_local_images(&g, 1);
            let inter = check_intersection_property(&g, &li.images);
            let dt = t.elapsed();
            let q = p as u64;
            let sizes: Vec<usize> = li.images.iter().map(|i| i.element_set.len()).collect();
            let good = sizes == [q.pow(3) as usize, q.pow(4) as usize, q.pow(4) as usize]
                && !inter.failed()
                && inter.records.len() == 3
                && dt < Duration::from_secs(120);
            ok &= good;
            if p == 11 {
                notes.push(format!("q=11 {v}: sizes {sizes:?} in {}", secs(dt)));
            }
        }
    }
    Line {
        id: "2 local-structure",
        pass: ok,
        expected_fail: false,
        detail: format!("|ab| = q^3, |ac| = |bc| = q^4, intersections of size q; {}", notes.join("; ")),
    }
}

fn proof_identities() -> (Line, Line) {
    let mut ok = true;
    let mut errata_seen: Vec<String> = Vec::new();
    let mut controls = 0;
    for (p, k) in CASES {
        for v in VARIANTS {
            let s = seed(p, k, v);
            let g = s.generators();
            let sec = replay_proof_identities(&s, &g, 0x6b6d73, 50);
            let errata: Vec<&str> = sec.with_status(Status::Erratum).map(|r| r.id.as_str()).collect();
            ok &= !sec.failed() && errata == documented_errata(v);
            let ch = chevalley::check_chevalley_commutators(&g, 0x6b6d73);
            ok &= !ch.failed();
            let li = enumerate_local_images(&g, 0x6b6d73);
            ok &= !li.section.failed();
            for id in errata
                .iter()
                .map(|s| s.to_string())
                .chain(ch.with_status(Status::Erratum).map(|r| r.id.clone()))
                .chain(li.section.with_status(Status::Erratum).map(|r| format!("local.{}", r.id)))
            {
                if !errata_seen.contains(&id) {
                    errata_seen.push(id);
                }
            }
            let cond = verify_conditions(&s);
            ok &= cond.all_pass() && cond.auxiliary.iter().all(|c| c.status != kmsq::forge::ClauseStatus::Fail);
            for t in Tamper::for_variant(v) {
                let bad = t.apply(&s).unwrap();
                ok &= verify_conditions(&bad).failed_ids() == [t.expected_clause()];
                controls += 1;
            }
        }
    }
    let corrected = Line {
        id: "3a identity-replay",
        pass: ok,
        expected_fail: false,
        detail: format!(
            "all identities (corrected forms where printed ones differ) hold on 50 random + structured inputs; conditions pass on 6 seeds; {controls} tampered controls flagged on exactly their clause"
        ),
    };
    let literal = Line {
        id: "3b literal-printed-forms",
        pass: errata_seen.is_empty(),
        expected_fail: true,
        detail: format!("printed forms that do not hold as displayed: {}", errata_seen.join(", ")),
    };
    (corrected, literal)
}

fn full_enumeration_and_small_complex() -> (Line, Line) {
    let cfg = RunConfig::new(5, 1, 1, Variant::Symplectic).unwrap();
    let s = seed(5, 1, Variant::Symplectic);
    let t = Instant::now();
    let res = run_complex(&cfg, &s, ComplexMode::Full).unwrap();
    let dt = t.elapsed();
    let order = res.group_order.unwrap_or(0);
    let target = sp_order(2, 5).unwrap();
    let symp = res.check("group.symplectic").map(|c| c.status == Status::Pass) == Some(true);
    let c4 = Line {
        id: "4 full-enumeration",
        pass: order as u128 == target && target == 9_360_000 && symp && dt < Duration::from_secs(600),
        expected_fail: false,
        detail: format!("|<V_a', V_b', V_c'>| = {order} (target {target}), all symplectic: {symp}, complex built in {}", secs(dt)),
    };
    (c4, {
        let sk = res.hdx.skeleton_lambda2.unwrap_or(1.0);
        Line {
            id: "6c vacuous-bound-q5",
            pass: res.hdx.vacuous && sk < 1.0 && res.passed(),
            expected_fail: false,
            detail: format!("bound {:.6} flagged vacuous: {}; skeleton lambda2 {:.6} < 1", res.hdx.bound, res.hdx.vacuous, sk),
        }
    })
}

fn envelope() -> Line {
    let mut dims = Vec::new();
    let mut reach = Vec::new();
    let mut closure_ok = true;
    for (p, k) in [(5, 7), (7, 5)] {
        for v in VARIANTS {
            let s = seed(p, k, v);
            let gens = s.generators().primes();
            let full = 16 * (k * k) as usize;
            let e = algebra_envelope_dim(&gens, 12).unwrap();
            dims.push((p, k, v, e.dim, full));
            let f = algebra_envelope_dim(&gens, 64).unwrap();
            closure_ok &= f.dim == full;
            reach.push(f.dims.iter().position(|&d| d == full).unwrap_or(usize::MAX));
        }
    }
    let pass = dims.iter().all(|d| d.3 == d.4);
    Line {
        id: "5 envelope-evidence",
        pass,
        expected_fail: !pass && closure_ok,
        detail: format!(
            "dimension at word length 12: {}; full algebra reached at lengths {:?} (evidence, not proof)",
            dims.iter().map(|d| format!("({},{},{}) {}/{}", d.0, d.1, d.2, d.3, d.4)).collect::<Vec<_>>().join(", "),
            reach
        ),
    }
}

fn spectral() -> Line {
    let mut ok = true;
    let mut notes = Vec::new();
    for q in [11u32, 13] {
        let cfg = RunConfig::new(q, 1, 1, Variant::Symplectic).unwrap();
        let s = seed(q, 1, Variant::Symplectic);
        let res = run_complex(&cfg, &s, ComplexMode::Links).unwrap();
        let bound = spectral_bound(q as u64);
        let good = !res.hdx.vacuous
            && res.hdx.rows.len() == 3
            && res.hdx.rows.iter().all(|r| r.lambda2 <= bound + 1e-9)
            && res.hdx.solver_gap <= 1e-8
            && res.passed();
        ok &= good;
        notes.push(format!("q={q}: max lambda2 {:.6} <= {:.6}, solver gap {:.1e}", res.hdx.max_lambda2, bound, res.hdx.solver_gap));
    }
    Line {
        id: "6ab spectral-bound",
        pass: ok,
        expected_fail: false,
        detail: notes.join("; "),
    }
}

fn determinism() -> Line {
    let mut ok = true;
    for (p, k, v) in [(5, 7, Variant::SpecialLinear), (7, 5, Variant::Symplectic)] {
        let opts = VerifyOptions {
            rng_seed: 99,
            surjectivity: Some(kmsq::verify::surjectivity::Mode::Envelope),
            ..VerifyOptions::default()
        };
        let a = verify_seed(&seed(p, k, v), &opts).to_text();
        let b = verify_seed(&seed(p, k, v), &opts).to_text();
        ok &= a == b;
        let g = seed(p, k, v).generators();
        let x = enumerate_local_images(&g, 99);
        let y = enumerate_local_images(&g, 99);
        ok &= x.images.iter().zip(&y.images).all(|(i, j)| i.element_set == j.element_set);
    }
    let s = seed(11, 1, Variant::Symplectic);
    let basis = fp_basis_codes(s.desc());
    let l1 = kms_local_links(&s.generators(), &basis, 1 << 20).unwrap();
    let l2 = kms_local_links(&s.generators(), &basis, 1 << 20).unwrap();
    ok &= (0..3).all(|i| l1.subgroups[i].keys == l2.subgroups[i].keys && l1.links[i].graph == l2.links[i].graph);
    // end to end through the output directory
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(7, 1, 1, Variant::Symplectic).unwrap();
    cfg.out = dir.path().to_path_buf();
    let r1 = cmd_complex(&cfg).unwrap().1.to_text();
    let r2 = cmd_complex(&cfg).unwrap().1.to_text();
    let f1 = std::fs::read(dir.path().join("complex-v1/report.txt")).unwrap();
    let f2 = std::fs::read(dir.path().join("complex-v2/report.txt")).unwrap();
    ok &= r1 == r2 && f1 == f2;
    Line {
        id: "7 determinism",
        pass: ok,
        expected_fail: false,
        detail: "identical config and rng_seed give byte-identical verify and complex reports and identical packed sets".into(),
    }
}

fn main() {
    // `cargo test` passes harness flags such as --list; nothing to list here
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let start = Instant::now();
    let mut lines = vec![relator_suite(), local_structure()];
    let (a, b) = proof_identities();
    lines.push(a);
    lines.push(b);
    let (c4, c6) = full_enumeration_and_small_complex();
    lines.push(c4);
    lines.push(envelope());
    lines.push(spectral());
    lines.push(c6);
    lines.push(determinism());
    let mut regressions = 0;
    for l in &lines {
        let tag = match (l.pass, l.expected_fail) {
            (true, _) => "PASS",
            (false, true) => "FAIL (recorded)",
            (false, false) => "FAIL",
        };
        println!("criterion {}: {tag} | {}", l.id, l.detail);
        if !l.pass && !l.expected_fail {
            regressions += 1;
        }
    }
    println!("acceptance finished in {}; {} unexpected failure(s)", secs(start.elapsed()), regressions);
    if regressions > 0 {
        std::process::exit(1);
    }
}
