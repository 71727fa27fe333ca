//! The eleven defining relators of the KMS presentation over `F_p`.

use std::sync::Arc;

use super::{block_diff, CheckRecord, Section, Status};
use crate::field::FieldDescriptor;
use crate::forge::Generators;
use crate::matrix::{nested_commutator, MatFq};

/// Relator words as strings over `a, b, c`; `x^p` is written `"x^p"`.
pub const RELATORS: [&str; 11] = [
    "a^p", "b^p", "c^p", "[a,b,a]", "[a,b,b]", "[c,b,c]", "[c,b,b,b]", "[c,b,b,c]", "[c,a,c]", "[c,a,a,a]", "[c,a,a,c]",
];

/// Evaluates one relator on the given images of `a, b, c`.
pub fn eval_relator(rel: &str, a: &MatFq, b: &MatFq, c: &MatFq, p: u64) -> MatFq {
    let pick = |ch: char| match ch {
        'a' => a,
        'b' => b,
        'c' => c,
        _ => panic!("unknown generator {ch}"),
    };
    if let Some(g) = rel.strip_suffix("^p") {
        return pick(g.chars().next().unwrap()).pow(p);
    }
    let inner = rel.trim_start_matches('[').trim_end_matches(']');
    let gs: Vec<&MatFq> = inner.split(',').map(|s| pick(s.chars().next().unwrap())).collect();
    nested_commutator(&gs).expect("square matrices of equal size")
}

/// An `F_p`-basis of `F_q`: the powers of the generator `t`.
pub fn fp_basis_codes(desc: &FieldDescriptor) -> Vec<u32> {
    let f = desc.base_field();
    let p = f.p();
    (0..f.r()).map(|i| p.pow(i)).collect()
}

pub fn check_presentation_relators(gens: &Generators, desc: &Arc<FieldDescriptor>) -> Section {
    let mut sec = Section::new("relators");
    let p = desc.p() as u64;
    let k = gens.k();
    let [a, b, c] = gens.primes();
    for rel in RELATORS {
        let m = eval_relator(rel, &a, &b, &c, p);
        let ok = m.is_identity();
        let w = (!ok).then(|| block_diff(&m, &MatFq::identity(gens.field(), 4 * k), k));
        sec.push(CheckRecord::new(format!("rel{rel}"), "presentation", Status::from_bool(ok), format!("{rel} at V_a', V_b', V_c'")).with_witness(w));
    }
    let f = desc.base_field();
    if f.r() > 1 {
        let basis = fp_basis_codes(desc);
        let mut bad = Vec::new();
        for &la in &basis {
            for &lb in &basis {
                for &lc in &basis {
                    let (a, b, c) = (gens.va(la), gens.vb(lb), gens.vc(lc));
                    for rel in RELATORS {
                        if !eval_relator(rel, &a, &b, &c, p).is_identity() {
                            bad.push(format!("{rel}@({la},{lb},{lc})"));
                        }
                    }
                }
            }
        }
        let n = basis.len().pow(3) * RELATORS.len();
        sec.push(CheckRecord::new(
            "rel-basis",
            "presentation-over-fq",
            Status::from_bool(bad.is_empty()),
            if bad.is_empty() {
                format!("{n} relator evaluations at F_p-basis parameters")
            } else {
                format!("failing: {}", bad.join(" "))
            },
        ));
        // additivity on all pairs when q is small, otherwise on pairs of basis elements
        let params: Vec<u32> = if f.q() <= 49 { f.elements().collect() } else { basis.clone() };
        let mut bad = Vec::new();
        for &l in &params {
            for &m in &params {
                let s = f.add(l, m);
                for (name, lhs, rhs) in [
                    ("a", &gens.va(l) * &gens.va(m), gens.va(s)),
                    ("b", &gens.vb(l) * &gens.vb(m), gens.vb(s)),
                    ("c", &gens.vc(l) * &gens.vc(m), gens.vc(s)),
                ] {
                    if lhs != rhs {
                        bad.push(format!("{name}({l},{m})"));
                    }
                }
            }
        }
        sec.push(CheckRecord::new(
            "additivity",
            "presentation-over-fq",
            Status::from_bool(bad.is_empty()),
            if bad.is_empty() {
                format!("V_i(l) V_i(m) = V_i(l+m) on {} pairs", params.len().pow(2))
            } else {
                format!("failing: {}", bad.join(" "))
            },
        ));
    }
    sec
}
