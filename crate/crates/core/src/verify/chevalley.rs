//! Images of the non-simple positive roots and the rank-two commutator
//! relations among them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{block_diff, diff_positions, Blocks, CheckRecord, Section, Status};
use crate::forge::Generators;
use crate::matrix::{commutator, MatFq};

/// Root images read off the local-group closed forms.
#[derive(Clone, Debug)]
pub struct RootImages {
    pub blocks: Blocks,
    p: MatFq,
    ac: MatFq,
    ca: MatFq,
    aca: MatFq,
    bc: MatFq,
    cb: MatFq,
    bcb: MatFq,
}

impl RootImages {
    pub fn new(gens: &Generators) -> Self {
        let b = Blocks::new(gens);
        let (ma, mb, mc) = (gens.ma(), gens.mb(), gens.mc());
        Self {
            p: b.anticomm(),
            ac: ma * mc,
            ca: mc * ma,
            aca: &(ma * mc) * ma,
            bc: mb * mc,
            cb: mc * mb,
            bcb: &(mb * mc) * mb,
            blocks: b,
        }
    }

    /// Block `(2,4)` equal to `-t (M_a M_b + M_b M_a)`.
    pub fn x_ab(&self, t: u32) -> MatFq {
        self.blocks.u(&[(2, 4, self.p.scale(t).neg())])
    }

    pub fn x_ac(&self, t: u32) -> MatFq {
        self.blocks.u(&[(1, 2, self.ac.scale(t)), (4, 3, self.ca.scale(t).neg())])
    }

    pub fn x_2ac(&self, t: u32) -> MatFq {
        self.blocks.u(&[(1, 3, self.aca.scale(t))])
    }

    pub fn x_bc(&self, t: u32) -> MatFq {
        self.blocks.u(&[(3, 2, self.bc.scale(t)), (4, 1, self.cb.scale(t))])
    }

    pub fn x_2bc(&self, t: u32) -> MatFq {
        self.blocks.u(&[(3, 1, self.bcb.scale(t))])
    }
}

/// The same root images built from words in the `V_i` only.
pub mod words {
    use super::*;

    fn comm(g: &MatFq, h: &MatFq) -> MatFq {
        commutator(g, h).unwrap()
    }

    pub fn x_ab(g: &Generators, t: u32) -> MatFq {
        comm(&g.va(t), &g.vb(1))
    }

    pub fn x_2ac(g: &Generators, t: u32) -> MatFq {
        let f = g.field();
        let h = f.mul(t, f.inv(f.from_int(2)).unwrap());
        comm(&g.va(h), &comm(&g.vc(1), &g.va(1)))
    }

    pub fn x_ac(g: &Generators, t: u32) -> MatFq {
        let f = g.field();
        &comm(&g.vc(f.neg(t)), &g.va(1)) * &x_2ac(g, f.neg(t))
    }

    pub fn x_2bc(g: &Generators, t: u32) -> MatFq {
        let f = g.field();
        let h = f.neg(f.mul(t, f.inv(f.from_int(2)).unwrap()));
        comm(&g.vb(h), &comm(&g.vc(1), &g.vb(1)))
    }

    pub fn x_bc(g: &Generators, t: u32) -> MatFq {
        let f = g.field();
        &comm(&g.vc(t), &g.vb(1)) * &x_2bc(g, f.neg(t))
    }
}

type Rel = fn(&Generators, &RootImages, u32, u32) -> (MatFq, MatFq);

struct Relation {
    id: &'static str,
    literal: Rel,
    corrected: Option<Rel>,
}

fn relations() -> Vec<Relation> {
    fn c(g: &MatFq, h: &MatFq) -> MatFq {
        commutator(g, h).unwrap()
    }
    vec![
        Relation {
            id: "a2.ab",
            literal: |g, r, l, m| (c(&g.va(l), &g.vb(m)), r.x_ab(r.blocks.f.mul(l, m))),
            corrected: None,
        },
        Relation {
            id: "a2.a-ab",
            literal: |g, r, l, m| (c(&g.va(l), &r.x_ab(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "a2.b-ab",
            literal: |g, r, l, m| (c(&g.vb(l), &r.x_ab(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.c-a",
            literal: |g, r, l, m| {
                let f = &r.blocks.f;
                let lm = f.mul(l, m);
                (c(&g.vc(l), &g.va(m)), &r.x_ac(lm) * &r.x_2ac(f.mul(lm, m)))
            },
            corrected: Some(|g, r, l, m| {
                let f = &r.blocks.f;
                let lm = f.mul(l, m);
                (c(&g.vc(l), &g.va(m)), &r.x_ac(f.neg(lm)) * &r.x_2ac(f.neg(f.mul(lm, m))))
            }),
        },
        Relation {
            id: "b2.a-ac",
            literal: |g, r, l, m| (c(&g.va(l), &r.x_ac(m)), r.x_2ac(r.blocks.f.mul(l, m))),
            corrected: Some(|g, r, l, m| {
                let f = &r.blocks.f;
                (c(&g.va(l), &r.x_ac(m)), r.x_2ac(f.mul(f.from_int(-2), f.mul(l, m))))
            }),
        },
        Relation {
            id: "b2.c-ac",
            literal: |g, r, l, m| (c(&g.vc(l), &r.x_ac(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.a-2ac",
            literal: |g, r, l, m| (c(&g.va(l), &r.x_2ac(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.c-2ac",
            literal: |g, r, l, m| (c(&g.vc(l), &r.x_2ac(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.ac-2ac",
            literal: |_, r, l, m| (c(&r.x_ac(l), &r.x_2ac(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.c-b",
            literal: |g, r, l, m| {
                let f = &r.blocks.f;
                let lm = f.mul(l, m);
                (c(&g.vc(l), &g.vb(m)), &r.x_bc(lm) * &r.x_2bc(f.mul(lm, m)))
            },
            corrected: None,
        },
        Relation {
            id: "b2.b-bc",
            literal: |g, r, l, m| (c(&g.vb(l), &r.x_bc(m)), r.x_2bc(r.blocks.f.mul(l, m))),
            corrected: Some(|g, r, l, m| {
                let f = &r.blocks.f;
                (c(&g.vb(l), &r.x_bc(m)), r.x_2bc(f.mul(f.from_int(-2), f.mul(l, m))))
            }),
        },
        Relation {
            id: "b2.c-bc",
            literal: |g, r, l, m| (c(&g.vc(l), &r.x_bc(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.b-2bc",
            literal: |g, r, l, m| (c(&g.vb(l), &r.x_2bc(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.c-2bc",
            literal: |g, r, l, m| (c(&g.vc(l), &r.x_2bc(m)), r.blocks.id4()),
            corrected: None,
        },
        Relation {
            id: "b2.bc-2bc",
            literal: |_, r, l, m| (c(&r.x_bc(l), &r.x_2bc(m)), r.blocks.id4()),
            corrected: None,
        },
    ]
}

/// Parameter pairs: all of `F_q x F_q` for `q <= 13`, else a seeded sample.
pub fn parameter_pairs(q: u32, rng_seed: u64) -> Vec<(u32, u32)> {
    if q <= 13 {
        (0..q).flat_map(|l| (0..q).map(move |m| (l, m))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ 0xc4e7);
        (0..400).map(|_| (rng.gen_range(0..q), rng.gen_range(0..q))).collect()
    }
}

fn first_failure(rel: Rel, g: &Generators, r: &RootImages, pairs: &[(u32, u32)]) -> Option<(u32, u32, MatFq, MatFq)> {
    pairs.iter().find_map(|&(l, m)| {
        let (lhs, rhs) = rel(g, r, l, m);
        (lhs != rhs).then_some((l, m, lhs, rhs))
    })
}

pub fn check_chevalley_commutators(gens: &Generators, rng_seed: u64) -> Section {
    let mut sec = Section::new("chevalley");
    let r = RootImages::new(gens);
    let k = gens.k();
    let q = gens.field().q();
    let pairs = parameter_pairs(q, rng_seed);
    let n = pairs.len();
    for rel in relations() {
        let lit = first_failure(rel.literal, gens, &r, &pairs);
        let record = match (lit, rel.corrected) {
            (None, _) => CheckRecord::new(rel.id, "rank-two-relations", Status::Pass, format!("{n} parameter pairs")),
            (Some((l, m, lhs, rhs)), None) => CheckRecord::new(
                rel.id,
                "rank-two-relations",
                Status::Fail,
                format!("fails at ({l},{m}), blocks {:?}", diff_positions(&lhs, &rhs, k)),
            )
            .with_witness(Some(block_diff(&lhs, &rhs, k))),
            (Some((l, m, lhs, rhs)), Some(fix)) => match first_failure(fix, gens, &r, &pairs) {
                None => CheckRecord::new(
                    rel.id,
                    "rank-two-relations",
                    Status::Erratum,
                    format!(
                        "printed constant fails at ({l},{m}) in blocks {:?}; corrected constant holds on {n} pairs",
                        diff_positions(&lhs, &rhs, k)
                    ),
                ),
                Some((l, m, lhs, rhs)) => CheckRecord::new(
                    rel.id,
                    "rank-two-relations",
                    Status::Fail,
                    format!("printed and corrected forms both fail, corrected at ({l},{m})"),
                )
                .with_witness(Some(block_diff(&lhs, &rhs, k))),
            },
        };
        sec.push(record);
    }
    // the closed-form root images agree with words in the generators
    let mut bad = Vec::new();
    for t in gens.field().elements().take(13) {
        for (name, a, b) in [
            ("ab", r.x_ab(t), words::x_ab(gens, t)),
            ("ac", r.x_ac(t), words::x_ac(gens, t)),
            ("2ac", r.x_2ac(t), words::x_2ac(gens, t)),
            ("bc", r.x_bc(t), words::x_bc(gens, t)),
            ("2bc", r.x_2bc(t), words::x_2bc(gens, t)),
        ] {
            if a != b {
                bad.push(format!("{name}({t})"));
            }
        }
    }
    sec.push(CheckRecord::new(
        "root-words",
        "rank-two-relations",
        Status::from_bool(bad.is_empty()),
        if bad.is_empty() { "closed-form root images equal generator words".to_string() } else { bad.join(" ") },
    ));
    sec
}

impl Blocks {
    pub fn id4(&self) -> MatFq {
        MatFq::identity(&self.f, 4 * self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::forge::{build_sl_seed, build_sp_seed};

    #[test]
    fn zero_parameter_is_trivial() {
        let d = FieldDescriptor::canonical(5, 1, 7).unwrap();
        let g = build_sl_seed(&d).unwrap().generators();
        for m in 0..5 {
            assert!(commutator(&g.va(0), &g.vb(m)).unwrap().is_identity());
        }
    }

    #[test]
    fn relations_and_errata() {
        for (p, k, sp) in [(5, 7, false), (7, 5, true)] {
            let d = FieldDescriptor::canonical(p, 1, k).unwrap();
            let s = if sp { build_sp_seed(&d) } else { build_sl_seed(&d) }.unwrap();
            let sec = check_chevalley_commutators(&s.generators(), 1);
            assert!(!sec.failed(), "{sec:?}");
            let errata: Vec<_> = sec.with_status(Status::Erratum).map(|r| r.id.as_str()).collect();
            assert_eq!(errata, ["b2.c-a", "b2.a-ac", "b2.b-bc"]);
        }
    }

    #[test]
    fn a2_relation_by_hand() {
        // independent oracle: (2,4) block of [V_a(l), V_b(m)] is -lm(M_aM_b + M_bM_a)
        let d = FieldDescriptor::canonical(5, 1, 7).unwrap();
        let s = build_sl_seed(&d).unwrap();
        let g = s.generators();
        let c = commutator(&g.va(2), &g.vb(3)).unwrap();
        assert_eq!(c.block(7, 1, 3), s.anticommutator().scale(4));
    }
}
