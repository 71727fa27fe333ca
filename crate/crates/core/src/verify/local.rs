//! Images of the rank-two local groups, enumerated from their closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chevalley::words;
use super::{block_diff, diff_positions, Blocks, CheckRecord, Section, Status};
use crate::forge::Generators;
use crate::matrix::{is_symplectic, MatFq, PackedKey, Packer, SymplecticForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalLabel {
    Ab,
    Ac,
    Bc,
}

impl LocalLabel {
    pub const ALL: [LocalLabel; 3] = [LocalLabel::Ab, LocalLabel::Ac, LocalLabel::Bc];

    pub fn tag(self) -> &'static str {
        match self {
            LocalLabel::Ab => "ab",
            LocalLabel::Ac => "ac",
            LocalLabel::Bc => "bc",
        }
    }

    pub fn param_dim(self) -> u32 {
        match self {
            LocalLabel::Ab => 3,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LocalGroupImage {
    pub label: LocalLabel,
    pub param_dim: u32,
    /// Sorted, deduplicated packed keys.
    pub element_set: Vec<PackedKey>,
    pub expected_size: u64,
}

impl LocalGroupImage {
    pub fn is_injective(&self) -> bool {
        self.element_set.len() as u64 == self.expected_size
    }

    pub fn contains(&self, key: &PackedKey) -> bool {
        self.element_set.binary_search(key).is_ok()
    }

    pub fn intersect(&self, other: &Self) -> Vec<PackedKey> {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.element_set, &other.element_set);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
}

/// Closed-form parametrizations of the three local images.
#[derive(Clone, Debug)]
pub struct ClosedForms {
    b: Blocks,
    ma: MatFq,
    mb: MatFq,
    mc: MatFq,
    ab: MatFq,
    ba: MatFq,
    ac: MatFq,
    ca: MatFq,
    aca: MatFq,
    bc: MatFq,
    cb: MatFq,
    bcb: MatFq,
}

impl ClosedForms {
    pub fn new(gens: &Generators) -> Self {
        let (ma, mb, mc) = (gens.ma(), gens.mb(), gens.mc());
        Self {
            b: Blocks::new(gens),
            ma: ma.clone(),
            mb: mb.clone(),
            mc: mc.clone(),
            ab: ma * mb,
            ba: mb * ma,
            ac: ma * mc,
            ca: mc * ma,
            aca: &(ma * mc) * ma,
            bc: mb * mc,
            cb: mc * mb,
            bcb: &(mb * mc) * mb,
        }
    }

    fn f(&self) -> &crate::field::BaseField {
        &self.b.f
    }

    /// `x_a(l1) x_b(l2) x_{a+b}(l3)`, with `(2,4)` block
    /// `-l1 l2 M_aM_b - l3 (M_aM_b + M_bM_a)`.
    pub fn ab(&self, l: [u32; 4]) -> MatFq {
        let f = self.f();
        let [l1, l2, l3, _] = l;
        let b24 = &self.ab.scale(f.neg(f.add(f.mul(l1, l2), l3))) - &self.ba.scale(l3);
        self.b.u(&[
            (1, 4, self.ma.scale(l1)),
            (2, 1, self.mb.scale(l2)),
            (2, 3, self.ma.scale(l1)),
            (2, 4, b24),
            (3, 4, self.mb.scale(f.neg(l2))),
        ])
    }

    /// The `ab` form as displayed, with `(2,4)` block
    /// `l3 M_aM_b + l1 l2 l3 M_bM_a`.
    pub fn ab_printed(&self, l: [u32; 4]) -> MatFq {
        let f = self.f();
        let [l1, l2, l3, _] = l;
        let b24 = &self.ab.scale(l3) + &self.ba.scale(f.mul(f.mul(l1, l2), l3));
        self.b.u(&[
            (1, 4, self.ma.scale(l1)),
            (2, 1, self.mb.scale(l2)),
            (2, 3, self.ma.scale(l1)),
            (2, 4, b24),
            (3, 4, self.mb.scale(f.neg(l2))),
        ])
    }

    /// `x_a(l1) x_c(l2) x_{a+c}(l3) x_{2a+c}(l4)`.
    pub fn ac(&self, l: [u32; 4]) -> MatFq {
        let f = self.f();
        let [l1, l2, l3, l4] = l;
        self.b.u(&[
            (1, 2, self.ac.scale(f.add(f.mul(l1, l2), l3))),
            (1, 3, self.aca.scale(f.sub(l4, f.mul(l1, l3)))),
            (1, 4, self.ma.scale(l1)),
            (2, 3, self.ma.scale(l1)),
            (4, 2, self.mc.scale(l2)),
            (4, 3, self.ca.scale(f.neg(l3))),
        ])
    }

    /// `x_b(l1) x_c(l2) x_{b+c}(l3) x_{2b+c}(l4)`.
    pub fn bc(&self, l: [u32; 4]) -> MatFq {
        let f = self.f();
        let [l1, l2, l3, l4] = l;
        self.b.u(&[
            (2, 1, self.mb.scale(l1)),
            (3, 1, self.bcb.scale(f.sub(l4, f.mul(l1, l3)))),
            (3, 2, self.bc.scale(f.sub(l3, f.mul(l1, l2)))),
            (3, 4, self.mb.scale(f.neg(l1))),
            (4, 1, self.cb.scale(l3)),
            (4, 2, self.mc.scale(l2)),
        ])
    }

    pub fn eval(&self, label: LocalLabel, l: [u32; 4]) -> MatFq {
        match label {
            LocalLabel::Ab => self.ab(l),
            LocalLabel::Ac => self.ac(l),
            LocalLabel::Bc => self.bc(l),
        }
    }
}

/// The same products recomputed from generator words.
pub fn word_product(gens: &Generators, label: LocalLabel, l: [u32; 4]) -> MatFq {
    let [l1, l2, l3, l4] = l;
    match label {
        LocalLabel::Ab => &(&gens.va(l1) * &gens.vb(l2)) * &words::x_ab(gens, l3),
        LocalLabel::Ac => &(&(&gens.va(l1) * &gens.vc(l2)) * &words::x_ac(gens, l3)) * &words::x_2ac(gens, l4),
        LocalLabel::Bc => &(&(&gens.vb(l1) * &gens.vc(l2)) * &words::x_bc(gens, l3)) * &words::x_2bc(gens, l4),
    }
}

fn params(q: u32, dim: u32) -> impl Iterator<Item = [u32; 4]> {
    let total = (q as u64).pow(dim);
    (0..total).map(move |mut i| {
        let mut l = [0u32; 4];
        for slot in l.iter_mut().take(dim as usize) {
            *slot = (i % q as u64) as u32;
            i /= q as u64;
        }
        l
    })
}

pub struct LocalImages {
    pub images: Vec<LocalGroupImage>,
    pub section: Section,
}

pub fn enumerate_image(gens: &Generators, label: LocalLabel) -> LocalGroupImage {
    let forms = ClosedForms::new(gens);
    let q = gens.field().q();
    let packer = Packer::new(gens.field(), 4 * gens.k());
    let mut keys: Vec<PackedKey> = params(q, label.param_dim()).map(|l| packer.pack(&forms.eval(label, l))).collect();
    keys.sort_unstable();
    keys.dedup();
    LocalGroupImage {
        label,
        param_dim: label.param_dim(),
        element_set: keys,
        expected_size: (q as u64).pow(label.param_dim()),
    }
}

pub fn enumerate_local_images(gens: &Generators, rng_seed: u64) -> LocalImages {
    let mut sec = Section::new("local-images");
    let forms = ClosedForms::new(gens);
    let packer = Packer::new(gens.field(), 4 * gens.k());
    let id_key = packer.pack(&MatFq::identity(gens.field(), 4 * gens.k()));
    let q = gens.field().q();
    let k = gens.k();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ 0x10ca1);
    let mut images = Vec::new();
    for label in LocalLabel::ALL {
        let img = enumerate_image(gens, label);
        sec.push(CheckRecord::new(
            format!("{}.injective", label.tag()),
            "local-injectivity",
            Status::from_bool(img.is_injective()),
            format!("{} distinct of {} parameter tuples", img.element_set.len(), img.expected_size),
        ));
        sec.push(CheckRecord::new(
            format!("{}.identity", label.tag()),
            "local-injectivity",
            Status::from_bool(img.contains(&id_key)),
            "all-zero parameters give I",
        ));
        // closed forms against generator words on seeded random tuples
        let mut fail = None;
        for _ in 0..100 {
            let l = [0; 4].map(|_| rng.gen_range(0..q));
            let (a, b) = (forms.eval(label, l), word_product(gens, label, l));
            if a != b {
                fail = Some((l, a, b));
                break;
            }
        }
        let rec = match fail {
            None => CheckRecord::new(format!("{}.words", label.tag()), "local-closed-forms", Status::Pass, "100 random tuples"),
            Some((l, a, b)) => CheckRecord::new(
                format!("{}.words", label.tag()),
                "local-closed-forms",
                Status::Fail,
                format!("closed form differs from word product at {l:?}"),
            )
            .with_witness(Some(block_diff(&a, &b, k))),
        };
        sec.push(rec);
        images.push(img);
    }
    // printed ab display, compared against the word product
    let mut fail = None;
    for _ in 0..100 {
        let l = [rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q), 0];
        let (a, b) = (forms.ab_printed(l), word_product(gens, LocalLabel::Ab, l));
        if a != b {
            fail = Some((l, diff_positions(&a, &b, k)));
            break;
        }
    }
    sec.push(match fail {
        None => CheckRecord::new("ab.printed", "local-closed-forms", Status::Pass, "printed display agrees"),
        Some((l, pos)) => CheckRecord::new(
            "ab.printed",
            "local-closed-forms",
            Status::Erratum,
            format!(
                "printed (2,4) block l3 M_aM_b + l1 l2 l3 M_bM_a differs at {l:?} in {pos:?}; -l1 l2 M_aM_b - l3 (M_aM_b + M_bM_a) holds"
            ),
        ),
    });
    LocalImages { images, section: sec }
}

/// `{V_i(λ) : λ ∈ F_q}` as sorted packed keys.
pub fn one_parameter_keys(gens: &Generators, i: char) -> Vec<PackedKey> {
    let packer = Packer::new(gens.field(), 4 * gens.k());
    let mut v: Vec<PackedKey> = gens
        .field()
        .elements()
        .map(|l| {
            let m = match i {
                'a' => gens.va(l),
                'b' => gens.vb(l),
                _ => gens.vc(l),
            };
            packer.pack(&m)
        })
        .collect();
    v.sort_unstable();
    v
}

pub fn check_intersection_property(gens: &Generators, images: &[LocalGroupImage]) -> Section {
    let mut sec = Section::new("intersection");
    let q = gens.field().q() as usize;
    let get = |l: LocalLabel| images.iter().find(|i| i.label == l).expect("all three images");
    for (x, y, shared) in [(LocalLabel::Ab, LocalLabel::Ac, 'a'), (LocalLabel::Ab, LocalLabel::Bc, 'b'), (LocalLabel::Ac, LocalLabel::Bc, 'c')] {
        let inter = get(x).intersect(get(y));
        let expect = one_parameter_keys(gens, shared);
        let ok = inter == expect && inter.len() == q;
        sec.push(CheckRecord::new(
            format!("{}-{}", x.tag(), y.tag()),
            "intersection-property",
            Status::from_bool(ok),
            format!("|intersection| = {}, equals {{V_{shared}(l)}}: {}", inter.len(), inter == expect),
        ));
    }
    sec
}

/// Every enumerated local element preserves the standard form.
pub fn check_symplectic(gens: &Generators, images: &[LocalGroupImage]) -> Section {
    let mut sec = Section::new("symplectic");
    let form = SymplecticForm::standard(gens.field(), 2 * gens.k());
    let packer = Packer::new(gens.field(), 4 * gens.k());
    for (name, m) in [("V_a'", gens.va(1)), ("V_b'", gens.vb(1)), ("V_c'", gens.vc(1))] {
        let ok = is_symplectic(&m, &form).unwrap();
        sec.push(CheckRecord::new(format!("gen.{name}"), "symplectic-image", Status::from_bool(ok), "generator preserves Omega"));
    }
    for img in images {
        let bad = img
            .element_set
            .iter()
            .filter(|key| !is_symplectic(&packer.unpack(key), &form).unwrap())
            .count();
        sec.push(CheckRecord::new(
            format!("{}.all", img.label.tag()),
            "symplectic-image",
            Status::from_bool(bad == 0),
            format!("{} of {} elements fail", bad, img.element_set.len()),
        ));
    }
    sec
}
