//! Replay of the displayed identities in the surjectivity proofs.
//!
//! Each identity carries its printed form and, where the printed form is
//! wrong, a corrected form. A printed failure with a holding correction is
//! reported as [`Status::Erratum`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{block_diff, diff_positions, Blocks, CheckRecord, Section, Status};
use crate::forge::{Generators, SeedTriple, Variant};
use crate::matrix::{commutator, nested_commutator, MatFq};

pub enum Cmp {
    Eq(&'static str, MatFq, MatFq),
    Holds(&'static str, bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Input {
    /// No free matrices; evaluated once.
    Fixed,
    General,
    Symmetric,
    Special,
    Invertible,
}

/// Free inputs of one trial.
pub struct Sample {
    pub x: MatFq,
    pub y: MatFq,
    pub l: u32,
}

pub struct Ctx {
    pub b: Blocks,
    pub s: MatFq,
    pub p: MatFq,
    /// `M_a M_b M_a^{-1} M_b^{-1}`.
    pub x: MatFq,
    pub va: MatFq,
    pub vb: MatFq,
    pub vc: MatFq,
}

type Body = fn(&Ctx, &Sample) -> Vec<Cmp>;

pub struct Identity {
    pub id: &'static str,
    pub anchor: &'static str,
    pub variant: Variant,
    pub input: Input,
    pub literal: Body,
    pub corrected: Option<Body>,
}

impl Ctx {
    pub fn new(seed: &SeedTriple, gens: &Generators) -> Self {
        let b = Blocks::new(gens);
        let (ma, mb) = (gens.ma(), gens.mb());
        let x = &(&(ma * mb) * &ma.inv().unwrap()) * &mb.inv().unwrap();
        Self {
            s: seed.s(),
            p: b.anticomm(),
            x,
            va: gens.va(1),
            vb: gens.vb(1),
            vc: gens.vc(1),
            b,
        }
    }

    fn ma(&self) -> &MatFq {
        self.b.ma()
    }
    fn mb(&self) -> &MatFq {
        self.b.mb()
    }
    fn mc(&self) -> &MatFq {
        self.b.mc()
    }
    fn c(&self, n: i64) -> u32 {
        self.b.c(n)
    }
    fn u(&self, bl: &[(usize, usize, MatFq)]) -> MatFq {
        self.b.u(bl)
    }
    fn u2(&self, bl: &[(usize, usize, MatFq)]) -> MatFq {
        self.b.u_n(2, bl)
    }
    fn id(&self) -> MatFq {
        self.b.id()
    }
    fn e(&self, i: usize, j: usize) -> MatFq {
        self.b.e(i, j)
    }
    fn k(&self) -> usize {
        self.b.k
    }

    fn prod(ms: &[&MatFq]) -> MatFq {
        ms.iter().skip(1).fold(ms[0].clone(), |acc, m| &acc * *m)
    }

    fn five(&self, order: &str) -> MatFq {
        let g: Vec<&MatFq> = order
            .chars()
            .map(|ch| match ch {
                'a' => &self.va,
                'b' => &self.vb,
                _ => &self.vc,
            })
            .collect();
        nested_commutator(&g).unwrap()
    }

    /// `M_bM_aM_cM_aM_b` and `M_aM_bM_cM_bM_a`.
    fn babab(&self) -> (MatFq, MatFq) {
        let (a, b, c) = (self.ma(), self.mb(), self.mc());
        (Self::prod(&[b, a, c, a, b]), Self::prod(&[a, b, c, b, a]))
    }

    fn inv(&self, m: &MatFq) -> MatFq {
        m.inv().expect("invertible by hypothesis")
    }

    /// `x, y = (1+x)^{-1}, z = (1+x^{-1})^{-1}`.
    fn xyz(&self) -> (u32, u32, u32) {
        let f = &self.b.f;
        let x = self.x.get(0, 0);
        let y = f.inv(f.add(1, x)).unwrap();
        let z = f.inv(f.add(1, f.inv(x).unwrap())).unwrap();
        (x, y, z)
    }

    fn z(&self) -> MatFq {
        let ipx = self.inv(&(&self.id() + &self.x));
        Self::prod(&[&ipx, &self.x, &self.s, &ipx])
    }

    /// `V_b(X,Y)`.
    fn vb_xy(&self, x: &MatFq, y: &MatFq) -> MatFq {
        self.u(&[(2, 1, self.mb() * x), (3, 4, (self.mb() * y).neg())])
    }

    fn ell(&self) -> u64 {
        let p = self.b.f.p() as u64;
        (1..p).find(|l| (4 * l + 1) % p == 0).unwrap()
    }
}

fn comm(g: &MatFq, h: &MatFq) -> MatFq {
    commutator(g, h).unwrap()
}

/// Entrywise matrix built from the entries of `s`.
fn from_s(ctx: &Ctx, f: impl Fn(usize, usize) -> u32) -> MatFq {
    MatFq::from_fn(&ctx.b.f, ctx.k(), f)
}

pub fn catalogue() -> Vec<Identity> {
    use Input::*;
    use Variant::{SpecialLinear as SL, Symplectic as SP};
    vec![
        // --- special-linear overgroup ---
        Identity {
            id: "sl.seed-commutator",
            anchor: "sl-seed-existence",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let (x, _, _) = c.xyz();
                let f = &c.b.f;
                let mut d = vec![1; c.k()];
                d[0] = x;
                d[1] = f.inv(x).unwrap();
                vec![
                    Cmp::Eq("diag", c.x.clone(), MatFq::diag(f, &d)),
                    Cmp::Holds("I+X invertible", (&c.id() + &c.x).is_invertible()),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sl.comm-ab",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| vec![Cmp::Eq("[Va',Vb']", comm(&c.va, &c.vb), c.u(&[(2, 4, c.p.neg())]))],
            corrected: None,
        },
        Identity {
            id: "sl.five-fold",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let (bacab, abcba) = c.babab();
                vec![
                    Cmp::Eq("[c,a,a,b,b]", c.five("caabb"), c.u(&[(2, 4, bacab.scale(c.c(-4)))])),
                    Cmp::Eq("[c,b,b,a,a]", c.five("cbbaa"), c.u(&[(2, 4, abcba.scale(c.c(-4)))])),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sl.ell-power",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let (bacab, abcba) = c.babab();
                let l = c.ell();
                vec![
                    Cmp::Eq("[c,b,b,a,a]^l", c.five("cbbaa").pow(l), c.u(&[(2, 4, abcba)])),
                    Cmp::Eq("[c,a,a,b,b]^l", c.five("caabb").pow(l), c.u(&[(2, 4, bacab)])),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sl.z-chain",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let (a, b, mc) = (c.ma(), c.mb(), c.mc());
                let (ai, bi) = (c.inv(a), c.inv(b));
                let id = c.id();
                let z = c.z();
                let xinv = c.inv(&c.x);
                let l1 = Ctx::prod(&[&c.inv(&(&id + &xinv)), &c.s, &c.inv(&(&id + &c.x))]);
                let l2 = Ctx::prod(&[
                    &c.inv(&(&id + &Ctx::prod(&[b, a, &bi, &ai]))),
                    &c.p,
                    mc,
                    &c.inv(&(&id + &Ctx::prod(&[a, b, &ai, &bi]))),
                ]);
                let l3 = Ctx::prod(&[
                    &c.inv(&Ctx::prod(&[&c.p, &bi, &ai])),
                    &c.p,
                    mc,
                    &c.inv(&Ctx::prod(&[&c.p, &ai, &bi])),
                ]);
                let l4 = &c.babab().1 * &c.inv(&c.p);
                vec![Cmp::Eq("line1", z.clone(), l1), Cmp::Eq("line2", z.clone(), l2), Cmp::Eq("line3", z.clone(), l3), Cmp::Eq("line4", z, l4)]
            },
            corrected: None,
        },
        Identity {
            id: "sl.zt-chain",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| zt_chain(c, false),
            corrected: Some(|c, _| zt_chain(c, true)),
        },
        Identity {
            id: "sl.conj-d",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let d = c.b.diag_n(&[c.id(), c.p.clone()]);
                let di = c.inv(&d);
                let conj = |g: MatFq| Ctx::prod(&[&d, &g, &di]);
                let (bacab, abcba) = c.babab();
                let z = c.z();
                vec![
                    Cmp::Eq("M_c", conj(c.u2(&[(2, 1, c.mc().clone())])), c.u2(&[(2, 1, c.s.clone())])),
                    Cmp::Eq("P", conj(c.u2(&[(1, 2, c.p.clone())])), c.u2(&[(1, 2, c.id())])),
                    Cmp::Eq("Z", conj(c.u2(&[(1, 2, abcba)])), c.u2(&[(1, 2, z.clone())])),
                    Cmp::Eq("Z^t", conj(c.u2(&[(1, 2, bacab)])), c.u2(&[(1, 2, z.transpose())])),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sl.zz-blocks",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let f = &c.b.f;
                let (_, y, z) = c.xyz();
                let h = c.b.half();
                let zz = &c.z() + &c.z().transpose();
                let ipx = c.inv(&(&c.id() + &c.x));
                let l1 = Ctx::prod(&[&ipx, &(&(&c.x * &c.s) + &(&c.s * &c.x)), &ipx]);
                let mut dzy = vec![h; c.k()];
                dzy[0] = z;
                dzy[1] = y;
                let mut dyz = dzy.clone();
                dyz.swap(0, 1);
                let (dzy, dyz) = (MatFq::diag(f, &dzy), MatFq::diag(f, &dyz));
                let l2 = &Ctx::prod(&[&dzy, &c.s, &dyz]) + &Ctx::prod(&[&dyz, &c.s, &dzy]);
                let s = &c.s;
                let (yz4, sq2, ypz) = (f.mul(4, f.mul(y, z)), f.mul(2, f.add(f.mul(y, y), f.mul(z, z))), f.add(y, z));
                let l3 = from_s(c, |i, j| {
                    let coef = match (i < 2, j < 2) {
                        (true, true) if i == j => yz4,
                        (true, true) => sq2,
                        (false, false) => 1,
                        _ => ypz,
                    };
                    f.mul(h, f.mul(coef, s.get(i, j)))
                });
                vec![Cmp::Eq("line1", zz.clone(), l1), Cmp::Eq("line2", zz.clone(), l2), Cmp::Eq("line3", zz, l3)]
            },
            corrected: None,
        },
        Identity {
            id: "sl.s-minus-2zz",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let f = &c.b.f;
                let (_, y, z) = c.xyz();
                let zz = &c.z() + &c.z().transpose();
                let lhs = &c.s - &zz.scale(2);
                let (a, b, d) = (
                    f.sub(1, f.mul(4, f.mul(y, z))),
                    f.sub(1, f.mul(2, f.add(f.mul(y, y), f.mul(z, z)))),
                    f.sub(f.sub(1, y), z),
                );
                let s = &c.s;
                let rhs = from_s(c, |i, j| {
                    let coef = match (i < 2, j < 2) {
                        (true, true) if i == j => a,
                        (true, true) => b,
                        (false, false) => 0,
                        _ => d,
                    };
                    f.mul(coef, s.get(i, j))
                });
                vec![Cmp::Holds("singular", !lhs.is_invertible()), Cmp::Eq("display", lhs, rhs)]
            },
            corrected: None,
        },
        Identity {
            id: "sl.four-yz",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let f = &c.b.f;
                let ok = f.elements().filter(|&x| x != 0 && x != f.neg(1)).all(|x| {
                    let y = f.inv(f.add(1, x)).unwrap();
                    let z = f.inv(f.add(1, f.inv(x).unwrap())).unwrap();
                    (f.mul(4, f.mul(y, z)) == 1) == (x == 1)
                });
                vec![Cmp::Holds("4yz = 1 iff x = 1", ok)]
            },
            corrected: None,
        },
        Identity {
            id: "sl.xs-sx",
            anchor: "sl-overgroup",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let f = &c.b.f;
                let (x, _, _) = c.xyz();
                let xi = f.inv(x).unwrap();
                let w = |i: usize| match i {
                    0 => x,
                    1 => xi,
                    _ => 1,
                };
                let s = &c.s;
                vec![
                    Cmp::Eq("XS", &c.x * s, from_s(c, |i, j| f.mul(w(i), s.get(i, j)))),
                    Cmp::Eq("SX", s * &c.x, from_s(c, |i, j| f.mul(w(j), s.get(i, j)))),
                    Cmp::Holds("XS != SX", &c.x * s != s * &c.x),
                ]
            },
            corrected: None,
        },
        // --- special-linear surjectivity ---
        Identity {
            id: "sl.b-transvection",
            anchor: "sl-surjectivity",
            variant: SL,
            input: General,
            literal: |c, s| b_transvection(c, &s.x, false),
            corrected: Some(|c, s| b_transvection(c, &s.x, true)),
        },
        Identity {
            id: "sl.b-substitution",
            anchor: "sl-surjectivity",
            variant: SL,
            input: General,
            literal: |c, s| {
                let bi = c.inv(c.mb());
                let x = Ctx::prod(&[&bi, &s.y, &bi]).scale(c.b.f.neg(c.b.half()));
                vec![Cmp::Eq("Y at (3,1)", nested_commutator(&[&c.vb, &c.b.v_neg2(&x), &c.vb]).unwrap(), c.u(&[(3, 1, s.y.clone())]))]
            },
            corrected: None,
        },
        Identity {
            id: "sl.a-transvection",
            anchor: "sl-surjectivity",
            variant: SL,
            input: General,
            literal: |c, s| a_transvection(c, &s.x),
            corrected: None,
        },
        Identity {
            id: "sl.a-substitution",
            anchor: "sl-surjectivity",
            variant: SL,
            input: General,
            literal: |c, s| {
                let ai = c.inv(c.ma());
                let x = Ctx::prod(&[&ai, &s.y, &ai]).scale(c.b.half());
                vec![Cmp::Eq("Y at (1,3)", nested_commutator(&[&c.va, &c.b.v_neg2(&x), &c.va]).unwrap(), c.u(&[(1, 3, s.y.clone())]))]
            },
            corrected: None,
        },
        Identity {
            id: "sl.vb-conjugation",
            anchor: "sl-surjectivity",
            variant: SL,
            input: Special,
            literal: |c, s| {
                let (x, y) = (&s.x, &s.y);
                let l = c.b.diag_n(&[c.inv(x), c.id(), c.id(), c.inv(y)]);
                let r = c.b.diag_n(&[x.clone(), c.id(), c.id(), y.clone()]);
                vec![Cmp::Eq("V_b(X,Y)", Ctx::prod(&[&l, &c.vb, &r]), c.vb_xy(x, y))]
            },
            corrected: None,
        },
        Identity {
            id: "sl.vb-doubling",
            anchor: "sl-surjectivity",
            variant: SL,
            input: Special,
            literal: |c, s| {
                let (id, mid) = (c.id(), c.id().neg());
                vec![
                    Cmp::Eq("2M_bX", &c.vb_xy(&s.x, &id) * &c.vb_xy(&s.x, &mid), c.u(&[(2, 1, (c.mb() * &s.x).scale(2))])),
                    Cmp::Eq("-2M_bY", &c.vb_xy(&id, &s.y) * &c.vb_xy(&mid, &s.y), c.u(&[(3, 4, (c.mb() * &s.y).scale(c.c(-2)))])),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sl.elementary",
            anchor: "sl-surjectivity",
            variant: SL,
            input: Fixed,
            literal: |c, _| {
                let k = c.k();
                let mut dz = vec![1; k];
                dz[1] = c.mb().det();
                let zd = MatFq::diag(&c.b.f, &dz);
                let bi = c.inv(c.mb());
                let x = &bi * &(&zd + &c.e(1, k));
                let x1 = &bi * &zd;
                let y = &bi * &(&zd + &c.e(k, 1));
                let two = |m: &MatFq| (c.mb() * m).scale(2);
                vec![
                    Cmp::Holds("det X = 1", x.det() == 1),
                    Cmp::Holds("det X' = 1", x1.det() == 1),
                    Cmp::Holds("det Y = 1", y.det() == 1),
                    Cmp::Eq("2E_1k", &c.u(&[(2, 1, two(&x))]) * &c.u(&[(2, 1, two(&x1).neg())]), c.u(&[(2, 1, c.e(1, k).scale(2))])),
                    Cmp::Eq("-2E_k1", &c.u(&[(3, 4, two(&y).neg())]) * &c.u(&[(3, 4, two(&x1))]), c.u(&[(3, 4, c.e(k, 1).scale(c.c(-2)))])),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sl.a-commutator",
            anchor: "sl-surjectivity",
            variant: SL,
            input: General,
            literal: |c, s| a_commutator(c, &s.y, false),
            corrected: Some(|c, s| a_commutator(c, &s.y, true)),
        },
        Identity {
            id: "sl.a-conjugation",
            anchor: "sl-surjectivity",
            variant: SL,
            input: Special,
            literal: |c, s| {
                let (x, z) = (&s.x, &s.y);
                let ai = c.inv(c.ma());
                let printed = c.u(&[(1, 2, c.ma() * &ai), (4, 3, (&ai * c.ma()).neg())]);
                let l = c.b.diag_n(&[x.clone(), c.id(), c.id(), z.clone()]);
                let r = c.b.diag_n(&[c.inv(x), c.id(), c.id(), c.inv(z)]);
                vec![Cmp::Eq("X, -Z", Ctx::prod(&[&l, &printed, &r]), c.u(&[(1, 2, x.clone()), (4, 3, z.neg())]))]
            },
            corrected: None,
        },
        Identity {
            id: "sl.a-conjugation-repair",
            anchor: "sl-surjectivity",
            variant: SL,
            input: Special,
            literal: |c, s| {
                // the true commutator carries a (1,3) block, cleared by an element of the second copy
                let (x, z) = (&s.x, &s.y);
                let ai = c.inv(c.ma());
                let true_c = comm(&c.va, &c.b.v_neg2(&ai));
                let l = c.b.diag_n(&[x.clone(), c.id(), c.id(), z.clone()]);
                let r = c.b.diag_n(&[c.inv(x), c.id(), c.id(), c.inv(z)]);
                let fix = c.u(&[(1, 3, (x * c.ma()).neg())]);
                vec![Cmp::Eq("X, -Z", Ctx::prod(&[&l, &true_c, &r, &fix]), c.u(&[(1, 2, x.clone()), (4, 3, z.neg())]))]
            },
            corrected: None,
        },
        Identity {
            id: "sl.final-commutator",
            anchor: "sl-surjectivity",
            variant: SL,
            input: General,
            literal: |c, s| final_commutator(c, s, 2),
            corrected: Some(|c, s| final_commutator(c, s, 1)),
        },
        // --- symplectic overgroup ---
        Identity {
            id: "sp.comm-ab",
            anchor: "sp-overgroup",
            variant: SP,
            input: Fixed,
            literal: |c, _| vec![Cmp::Eq("[Va',Vb']", comm(&c.va, &c.vb), c.u(&[(2, 4, c.p.neg())]))],
            corrected: None,
        },
        Identity {
            id: "sp.five-fold",
            anchor: "sp-overgroup",
            variant: SP,
            input: Fixed,
            literal: |c, _| {
                let abcba = c.babab().1;
                vec![
                    Cmp::Eq("[c,b,b,a,a]", c.five("cbbaa"), c.u(&[(2, 4, abcba.scale(c.c(-4)))])),
                    Cmp::Holds("M_aM_bM_cM_bM_a symmetric", abcba.is_symmetric()),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sp.noncommuting",
            anchor: "sp-overgroup",
            variant: SP,
            input: Fixed,
            literal: |c, _| {
                let t = c.babab().1;
                let (a, b) = (c.ma(), c.mb());
                let t2 = Ctx::prod(&[a, b, &c.s, b, a]);
                let sc = c.p.as_scalar().unwrap_or(0);
                let sci = c.b.f.inv(sc).unwrap_or(0);
                let lhs = &Ctx::prod(&[&c.p, c.mc(), &t]) - &Ctx::prod(&[&t, c.mc(), &c.p]);
                let rhs = (&(&c.s * &t2) - &(&t2 * &c.s)).scale(sci);
                vec![Cmp::Eq("scaled", lhs.clone(), rhs), Cmp::Holds("nonzero", !lhs.is_zero())]
            },
            corrected: None,
        },
        Identity {
            id: "sp.products",
            anchor: "sp-explicit-pair",
            variant: SP,
            input: Fixed,
            literal: |c, _| {
                let f = &c.b.f;
                let k = c.k();
                let tail = MatFq::scalar(f, k - 2, f.neg(1));
                let ab = MatFq::from_int_rows(f, &[vec![-1, 1], vec![-1, -1]]).direct_sum(&tail);
                let ba = MatFq::from_int_rows(f, &[vec![-1, -1], vec![1, -1]]).direct_sum(&tail);
                vec![
                    Cmp::Eq("M_aM_b", c.ma() * c.mb(), ab),
                    Cmp::Eq("M_bM_a", c.mb() * c.ma(), ba),
                    Cmp::Eq("sum", c.p.clone(), MatFq::scalar(f, k, c.c(-2))),
                ]
            },
            corrected: None,
        },
        Identity {
            id: "sp.abs-ba",
            anchor: "sp-explicit-pair",
            variant: SP,
            input: Symmetric,
            literal: |c, s| {
                let mut v = abs_ba(c, &c.s.clone());
                v.extend(abs_ba(c, &s.y));
                v
            },
            corrected: None,
        },
        // --- symplectic surjectivity ---
        Identity {
            id: "sp.b-transvection",
            anchor: "sp-surjectivity",
            variant: SP,
            input: Symmetric,
            literal: |c, s| {
                let full = nested_commutator(&[&c.vb, &c.b.v_neg2(&s.y), &c.vb]).unwrap();
                vec![Cmp::Eq("full", full, c.u(&[(3, 1, Ctx::prod(&[c.mb(), &s.y, c.mb()]).scale(c.c(-2)))]))]
            },
            corrected: None,
        },
        Identity {
            id: "sp.a-transvection",
            anchor: "sp-surjectivity",
            variant: SP,
            input: Symmetric,
            literal: |c, s| {
                let full = nested_commutator(&[&c.va, &c.b.v_neg2(&s.y), &c.va]).unwrap();
                vec![Cmp::Eq("full", full, c.u(&[(1, 3, Ctx::prod(&[c.ma(), &s.y, c.ma()]).scale(2))]))]
            },
            corrected: None,
        },
        Identity {
            id: "sp.substitutions",
            anchor: "sp-surjectivity",
            variant: SP,
            input: Symmetric,
            literal: |c, s| substitutions(c, &s.y, false),
            corrected: Some(|c, s| substitutions(c, &s.y, true)),
        },
        Identity {
            id: "sp.vb-conjugation",
            anchor: "sp-surjectivity",
            variant: SP,
            input: Invertible,
            literal: |c, s| {
                let y = &s.x;
                let x = &c.inv(c.mb()) * y;
                let xi = c.inv(&x);
                let l = c.b.diag_n(&[xi.clone(), c.id(), x.transpose(), c.id()]);
                let r = c.b.diag_n(&[x.clone(), c.id(), xi.transpose(), c.id()]);
                vec![Cmp::Eq("Y, -Y^t", Ctx::prod(&[&l, &c.vb, &r]), c.u(&[(2, 1, y.clone()), (3, 4, y.transpose().neg())]))]
            },
            corrected: None,
        },
        Identity {
            id: "sp.vb-elementary",
            anchor: "sp-surjectivity",
            variant: SP,
            input: General,
            literal: |c, s| {
                let k = c.k();
                let w = |y: &MatFq| c.u(&[(2, 1, y.clone()), (3, 4, y.transpose().neg())]);
                let y = &c.id() + &c.e(1, k).scale(s.l);
                let y1 = c.id().neg();
                vec![Cmp::Eq("l E_1k", &w(&y) * &w(&y1), c.u(&[(2, 1, c.e(1, k).scale(s.l)), (3, 4, c.e(k, 1).scale(c.b.f.neg(s.l)))]))]
            },
            corrected: None,
        },
        Identity {
            id: "sp.a-commutator",
            anchor: "sp-surjectivity",
            variant: SP,
            input: Symmetric,
            literal: |c, s| a_commutator(c, &s.y, false),
            corrected: Some(|c, s| a_commutator(c, &s.y, true)),
        },
        Identity {
            id: "sp.a-conjugation",
            anchor: "sp-surjectivity",
            variant: SP,
            input: Symmetric,
            literal: |c, s| sp_a_conjugation(c, s, false),
            corrected: Some(|c, s| sp_a_conjugation(c, s, true)),
        },
        Identity {
            id: "sp.a-elementary",
            anchor: "sp-surjectivity",
            variant: SP,
            input: General,
            literal: |c, s| {
                let k = c.k();
                let w = |x: &MatFq| c.u(&[(1, 2, x.clone()), (4, 3, x.transpose().neg())]);
                let x = &c.id() + &c.e(k, 1).scale(s.l);
                let x1 = c.id().neg();
                vec![Cmp::Eq("l E_k1", &w(&x) * &w(&x1), c.u(&[(1, 2, c.e(k, 1).scale(s.l)), (4, 3, c.e(1, k).scale(c.b.f.neg(s.l)))]))]
            },
            corrected: None,
        },
    ]
}

fn zt_chain(c: &Ctx, fixed: bool) -> Vec<Cmp> {
    let (a, b, mc) = (c.ma(), c.mb(), c.mc());
    let id = c.id();
    let zt = c.z().transpose();
    let ipx = c.inv(&(&id + &c.x));
    let pi = c.inv(&c.p);
    let l1 = Ctx::prod(&[&ipx, &c.s, &c.x, &ipx]);
    let l2 = Ctx::prod(&[&ipx, &c.s, &c.inv(&(&id + &c.inv(&c.x)))]);
    // printed: M_c M_b M_a on the right, and M_bM_aM_cM_bM_a at the end
    let (l3, l4) = if fixed {
        (Ctx::prod(&[b, a, &pi, &c.p, mc, a, b, &pi]), &c.babab().0 * &pi)
    } else {
        (Ctx::prod(&[b, a, &pi, &c.p, mc, b, a, &pi]), &Ctx::prod(&[b, a, mc, b, a]) * &pi)
    };
    vec![Cmp::Eq("line1", zt.clone(), l1), Cmp::Eq("line2", zt.clone(), l2), Cmp::Eq("line3", zt.clone(), l3), Cmp::Eq("line4", zt, l4)]
}

fn b_transvection(c: &Ctx, x: &MatFq, fixed: bool) -> Vec<Cmp> {
    let mb = c.mb();
    let b32 = if fixed { (mb * x).neg() } else { mb.neg() };
    let inner = c.u(&[(3, 2, b32), (4, 1, (x * mb).neg()), (3, 1, Ctx::prod(&[mb, x, mb]).neg())]);
    let target = c.u(&[(3, 1, Ctx::prod(&[mb, x, mb]).scale(c.c(-2)))]);
    vec![
        Cmp::Eq("inner", comm(&c.vb, &c.b.v_neg2(x)), inner.clone()),
        Cmp::Eq("outer", comm(&inner, &c.vb), target.clone()),
        Cmp::Eq("full", nested_commutator(&[&c.vb, &c.b.v_neg2(x), &c.vb]).unwrap(), target),
    ]
}

fn a_transvection(c: &Ctx, x: &MatFq) -> Vec<Cmp> {
    let ma = c.ma();
    let inner = c.u(&[(1, 2, ma * x), (4, 3, (x * ma).neg()), (1, 3, Ctx::prod(&[ma, x, ma]))]);
    let target = c.u(&[(1, 3, Ctx::prod(&[ma, x, ma]).scale(2))]);
    vec![
        Cmp::Eq("inner", comm(&c.va, &c.b.v_neg2(x)), inner.clone()),
        Cmp::Eq("outer", comm(&inner, &c.va), target.clone()),
        Cmp::Eq("full", nested_commutator(&[&c.va, &c.b.v_neg2(x), &c.va]).unwrap(), target),
    ]
}

fn a_commutator(c: &Ctx, y: &MatFq, fixed: bool) -> Vec<Cmp> {
    let ma = c.ma();
    let mut bl = vec![(1, 2, ma * y), (4, 3, (y * ma).neg())];
    if fixed {
        bl.push((1, 3, Ctx::prod(&[ma, y, ma])));
    }
    vec![Cmp::Eq("[Va', V(-a2)(Y)]", comm(&c.va, &c.b.v_neg2(y)), c.u(&bl))]
}

fn final_commutator(c: &Ctx, s: &Sample, coef: i64) -> Vec<Cmp> {
    let g = c.u(&[(3, 1, s.x.clone())]);
    let h = c.u(&[(1, 2, s.y.clone())]);
    vec![Cmp::Eq("XY at (3,2)", comm(&g, &h), c.u(&[(3, 2, (&s.x * &s.y).scale(c.c(coef)))]))]
}

fn abs_ba(c: &Ctx, s: &MatFq) -> Vec<Cmp> {
    let f = &c.b.f;
    let (a, b) = (c.ma(), c.mb());
    let t = Ctx::prod(&[a, b, s, b, a]);
    let g = |i: usize, j: usize| s.get(i, j);
    let disp = from_s(c, |i, j| match (i, j) {
        (0, 0) => f.add(f.sub(g(0, 0), f.mul(2, g(0, 1))), g(1, 1)),
        (0, 1) | (1, 0) => f.sub(g(0, 0), g(1, 1)),
        (1, 1) => f.add(f.add(g(0, 0), f.mul(2, g(0, 1))), g(1, 1)),
        (0, j) => f.sub(g(0, j), g(1, j)),
        (1, j) => f.add(g(0, j), g(1, j)),
        (i, 0) => f.sub(g(i, 0), g(i, 1)),
        (i, 1) => f.add(g(i, 0), g(i, 1)),
        (i, j) => g(i, j),
    });
    let disp2 = from_s(c, |i, j| match (i, j) {
        (0, 0) => f.add(f.mul(f.neg(2), g(0, 1)), g(1, 1)),
        (0, 1) | (1, 0) => f.sub(f.sub(g(0, 0), g(1, 1)), g(0, 1)),
        (1, 1) => f.add(g(0, 0), f.mul(2, g(0, 1))),
        (0, j) => f.neg(g(1, j)),
        (1, j) => g(0, j),
        (i, 0) => f.neg(g(i, 1)),
        (i, 1) => g(i, 0),
        _ => 0,
    });
    let d = &t - s;
    vec![
        Cmp::Eq("M_aM_bSM_bM_a", t, disp),
        Cmp::Holds("difference singular", !d.is_invertible()),
        Cmp::Eq("minus S", d, disp2),
    ]
}

fn substitutions(c: &Ctx, y: &MatFq, fixed: bool) -> Vec<Cmp> {
    let (ai, bi) = (c.inv(c.ma()), c.inv(c.mb()));
    let xa = Ctx::prod(&[&ai, y, &ai]).scale(c.b.half());
    let xb = Ctx::prod(&[&bi, y, &bi]).scale(c.b.f.neg(c.b.half()));
    // printed order pairs the first substitution with the V_b' identity
    let (for_b, for_a) = if fixed { (xb, xa) } else { (xa, xb) };
    vec![
        Cmp::Eq("Y at (3,1)", nested_commutator(&[&c.vb, &c.b.v_neg2(&for_b), &c.vb]).unwrap(), c.u(&[(3, 1, y.clone())])),
        Cmp::Eq("Y at (1,3)", nested_commutator(&[&c.va, &c.b.v_neg2(&for_a), &c.va]).unwrap(), c.u(&[(1, 3, y.clone())])),
    ]
}

fn sp_a_conjugation(c: &Ctx, s: &Sample, fixed: bool) -> Vec<Cmp> {
    let ma = c.ma();
    let y = &s.y;
    let x = &s.x;
    let xi = c.inv(x);
    let cm = c.u(&[(1, 2, ma * y), (4, 3, (y * ma).neg())]);
    let l = c.b.diag_n(&[xi.clone(), c.id(), x.transpose(), c.id()]);
    let r = c.b.diag_n(&[x.clone(), c.id(), xi.transpose(), c.id()]);
    let rhs = if fixed {
        c.u(&[(1, 2, Ctx::prod(&[&xi, ma, y])), (4, 3, Ctx::prod(&[y, ma, &xi.transpose()]).neg())])
    } else {
        c.u(&[(1, 2, Ctx::prod(&[x, ma, y])), (4, 3, Ctx::prod(&[y, ma, &x.transpose()]).neg())])
    };
    vec![Cmp::Eq("conjugate", Ctx::prod(&[&l, &cm, &r]), rhs)]
}

/// Outcome of one body over all trials: the first failing comparison.
fn run(body: Body, ctx: &Ctx, samples: &[Sample]) -> Option<(usize, &'static str, Option<(MatFq, MatFq)>)> {
    for (t, s) in samples.iter().enumerate() {
        for cmp in body(ctx, s) {
            match cmp {
                Cmp::Eq(label, l, r) if l != r => return Some((t, label, Some((l, r)))),
                Cmp::Holds(label, false) => return Some((t, label, None)),
                _ => {}
            }
        }
    }
    None
}

fn samples(ctx: &Ctx, input: Input, rng: &mut ChaCha8Rng, n: usize) -> Vec<Sample> {
    let n = if input == Input::Fixed { 1 } else { n };
    (0..n)
        .map(|_| {
            let (x, y) = match input {
                Input::Fixed => (ctx.id(), ctx.id()),
                Input::General => (ctx.b.rand_mat(rng), ctx.b.rand_mat(rng)),
                Input::Symmetric => (ctx.b.rand_gl(rng), ctx.b.rand_sym(rng)),
                Input::Special => (ctx.b.rand_sl(rng), ctx.b.rand_sl(rng)),
                Input::Invertible => (ctx.b.rand_gl(rng), ctx.b.rand_gl(rng)),
            };
            let l = ctx.b.rand_elem(rng);
            Sample { x, y, l }
        })
        .collect()
}

pub fn replay_proof_identities(seed: &SeedTriple, gens: &Generators, rng_seed: u64, trials: usize) -> Section {
    let mut sec = Section::new("proof-identities");
    if seed.k() < 5 {
        sec.push(CheckRecord::new("replay", "proof-identities", Status::Skipped, "needs k >= 5"));
        return sec;
    }
    let ctx = Ctx::new(seed, gens);
    let k = seed.k();
    for ident in catalogue().into_iter().filter(|i| i.variant == seed.variant) {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ fxhash(ident.id));
        let ss = samples(&ctx, ident.input, &mut rng, trials);
        let n = ss.len();
        let lit = run(ident.literal, &ctx, &ss);
        let describe = |t: usize, label: &str, lr: &Option<(MatFq, MatFq)>| match lr {
            Some((l, r)) => format!("trial {t}, {label}: blocks {:?} differ", diff_positions(l, r, k)),
            None => format!("trial {t}: {label} does not hold"),
        };
        let witness = |lr: &Option<(MatFq, MatFq)>| lr.as_ref().map(|(l, r)| block_diff(l, r, k));
        let rec = match (lit, ident.corrected) {
            (None, _) => CheckRecord::new(ident.id, ident.anchor, Status::Pass, format!("{n} trial(s)")),
            (Some((t, label, lr)), None) => {
                CheckRecord::new(ident.id, ident.anchor, Status::Fail, describe(t, label, &lr)).with_witness(witness(&lr))
            }
            (Some((t, label, lr)), Some(fix)) => match run(fix, &ctx, &ss) {
                None => CheckRecord::new(
                    ident.id,
                    ident.anchor,
                    Status::Erratum,
                    format!("printed form: {}; corrected form holds on {n} trial(s)", describe(t, label, &lr)),
                )
                .with_witness(witness(&lr)),
                Some((t2, label2, lr2)) => CheckRecord::new(
                    ident.id,
                    ident.anchor,
                    Status::Fail,
                    format!("printed and corrected both fail; corrected {}", describe(t2, label2, &lr2)),
                )
                .with_witness(witness(&lr2)),
            },
        };
        sec.push(rec);
    }
    sec
}

/// Identifiers that are expected to come out as [`Status::Erratum`].
pub fn documented_errata(v: Variant) -> Vec<&'static str> {
    catalogue().into_iter().filter(|i| i.variant == v && i.corrected.is_some()).map(|i| i.id).collect()
}

/// Stable per-identity stream offset (FNV-1a).
fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::field::BaseField;
    use crate::forge::{build_sl_seed, build_sp_seed};
    use std::sync::Arc;

    fn replay(p: u32, k: u32, v: Variant) -> Section {
        let d = FieldDescriptor::canonical(p, 1, k).unwrap();
        let s = match v {
            Variant::SpecialLinear => build_sl_seed(&d),
            Variant::Symplectic => build_sp_seed(&d),
        }
        .unwrap();
        replay_proof_identities(&s, &s.generators(), 7, 10)
    }

    #[test]
    fn sl_replay() {
        let sec = replay(5, 7, Variant::SpecialLinear);
        assert!(!sec.failed(), "{:#?}", sec.records.iter().filter(|r| r.status == Status::Fail).collect::<Vec<_>>());
        let errata: Vec<_> = sec.with_status(Status::Erratum).map(|r| r.id.as_str()).collect();
        assert_eq!(errata, documented_errata(Variant::SpecialLinear));
    }

    #[test]
    fn sp_replay() {
        let sec = replay(7, 5, Variant::Symplectic);
        assert!(!sec.failed(), "{:#?}", sec.records.iter().filter(|r| r.status == Status::Fail).collect::<Vec<_>>());
        let errata: Vec<_> = sec.with_status(Status::Erratum).map(|r| r.id.as_str()).collect();
        assert_eq!(errata, documented_errata(Variant::Symplectic));
    }

    #[test]
    fn final_commutator_by_entries() {
        // independent oracle: the scalar Steinberg relation [x_31(s), x_12(t)] = x_32(st)
        let f = Arc::new(BaseField::prime(5).unwrap());
        let g = MatFq::from_fn(&f, 4, |i, j| u32::from(i == j) + if (i, j) == (2, 0) { 2 } else { 0 });
        let h = MatFq::from_fn(&f, 4, |i, j| u32::from(i == j) + if (i, j) == (0, 1) { 3 } else { 0 });
        let expect = MatFq::from_fn(&f, 4, |i, j| u32::from(i == j) + if (i, j) == (2, 1) { 1 } else { 0 });
        assert_eq!(commutator(&g, &h).unwrap(), expect);
    }
}
