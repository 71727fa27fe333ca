//! Surjectivity evidence: exact closure size when the target order is small,
//! otherwise the dimension of the generated matrix algebra.

use super::relators::fp_basis_codes;
use super::{CheckRecord, Section, Status};
use crate::complex::bfs_closure;
use crate::forge::{Generators, SeedTriple, Variant};
use crate::matrix::{algebra_envelope_dim, sl_order, sp_order, MatFq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    FullEnum,
    Envelope,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full-enum" | "full" => Some(Self::FullEnum),
            "envelope" => Some(Self::Envelope),
            _ => None,
        }
    }
}

/// Order of the group the generators should generate.
pub fn target_order(variant: Variant, k: usize, q: u64) -> Option<u128> {
    match variant {
        Variant::SpecialLinear => sl_order(4 * k as u32, q),
        Variant::Symplectic => sp_order(2 * k as u32, q),
    }
}

/// `V_i(c)` for `c` over an additive basis of `F_q`.
pub fn closure_generators(gens: &Generators, basis: &[u32]) -> Vec<MatFq> {
    let mut out = Vec::new();
    for &c in basis {
        out.extend([gens.va(c), gens.vb(c), gens.vc(c)]);
    }
    out
}

pub fn surjectivity_evidence(seed: &SeedTriple, gens: &Generators, mode: Mode, enum_cap: u128, word_budget: usize) -> Section {
    let mut sec = Section::new("surjectivity");
    let k = gens.k();
    let q = seed.desc().q() as u64;
    let target = target_order(seed.variant, k, q);
    let anchor = match seed.variant {
        Variant::SpecialLinear => "sl-surjectivity",
        Variant::Symplectic => "sp-surjectivity",
    };
    let mut use_envelope = mode == Mode::Envelope;
    if mode == Mode::FullEnum {
        match target.filter(|&t| t <= enum_cap) {
            Some(t) => {
                let basis = fp_basis_codes(seed.desc());
                let g = bfs_closure(&closure_generators(gens, &basis), t as u64);
                if g.closed {
                    sec.push(CheckRecord::new(
                        "full-enum",
                        anchor,
                        Status::from_bool(g.len() as u128 == t),
                        format!("closure size {} vs target order {t}", g.len()),
                    ));
                    if seed.variant == Variant::Symplectic {
                        let all = g.all_raw(|x| g.ops().is_symplectic(x));
                        sec.push(CheckRecord::new(
                            "symplectic-all",
                            anchor,
                            Status::from_bool(all),
                            format!("every one of {} elements preserves the standard form", g.len()),
                        ));
                    }
                } else {
                    // more than |target| elements cannot lie in the target group
                    sec.push(CheckRecord::new(
                        "full-enum",
                        anchor,
                        Status::Fail,
                        format!("closure exceeded the target order {t}"),
                    ));
                }
            }
            None => {
                sec.push(CheckRecord::new(
                    "full-enum",
                    anchor,
                    Status::Skipped,
                    format!("target order {} exceeds cap {enum_cap}; envelope mode", target.map_or("> 2^128".to_string(), |t| t.to_string())),
                ));
                use_envelope = true;
            }
        }
    }
    if use_envelope {
        let full = 16 * k * k;
        match algebra_envelope_dim(&gens.primes(), word_budget) {
            Ok(e) => {
                // an exhausted budget proves nothing; a closed span below n^2 is a counterexample
                let status = if e.dim == full {
                    Status::Pass
                } else if e.closed {
                    Status::Fail
                } else {
                    Status::Skipped
                };
                let tail = if status == Status::Skipped { "budget exhausted before closure" } else { "evidence, not proof" };
                sec.push(CheckRecord::new(
                    "envelope",
                    anchor,
                    status,
                    format!("algebra dimension {} of {full} within word length {word_budget} (by length: {:?}); {tail}", e.dim, e.dims),
                ))
            }
            Err(err) => sec.push(CheckRecord::new("envelope", anchor, Status::Fail, err.to_string())),
        }
    }
    sec
}
