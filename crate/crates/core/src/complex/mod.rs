//! Group enumeration by closure, coset complexes, links and spectra.

pub mod cosets;
pub mod hdx;
pub mod link;
pub mod spectral;

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::field::BaseField;
use crate::matrix::{MatFq, PackedKey, Packer};

pub use cosets::{coset_complex, CosetComplexData, VertexId};
pub use hdx::{hdx_report, spectral_bound, HdxReport};
pub use link::{kms_local_links, kms_subgroup_generators, local_link, vertex_link, LinkGraph, LocalLinks};
pub use spectral::{second_eigenvalue, Graph, Method, SpectralResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("enumeration cap {cap} exceeded ({found} elements found)")]
    CapExceeded { found: u64, cap: u64 },
    #[error("group enumeration is not closed")]
    NotClosed,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
    #[error("eigensolver did not converge within {0} iterations")]
    NotConverged(usize),
    #[error("graph has {0} nodes; the dense solver is limited to {1}")]
    TooLargeForDense(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{0}")]
    Unsupported(String),
}

/// Multiplication on raw row-major entry slices.
#[derive(Clone, Debug)]
pub struct RawOps {
    pub field: Arc<BaseField>,
    pub n: usize,
}

impl RawOps {
    pub fn new(field: &Arc<BaseField>, n: usize) -> Self {
        Self { field: field.clone(), n }
    }

    pub fn mul(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let n = self.n;
        if self.field.is_prime_field() {
            let p = self.field.p() as u64;
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u64;
                    for t in 0..n {
                        acc += a[i * n + t] as u64 * b[t * n + j] as u64;
                    }
                    out[i * n + j] = (acc % p) as u32;
                }
            }
        } else {
            let f = &self.field;
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0;
                    for t in 0..n {
                        acc = f.add(acc, f.mul(a[i * n + t], b[t * n + j]));
                    }
                    out[i * n + j] = acc;
                }
            }
        }
    }

    /// `X^t Ω X = Ω` for the standard form of half size `n / 2`.
    pub fn is_symplectic(&self, x: &[u32]) -> bool {
        let n = self.n;
        let m = n / 2;
        let f = &self.field;
        // (Ω X)_{i,j}: rows i < m are -X_{i+m,j}, rows i >= m are X_{i-m,j}
        let ox = |i: usize, j: usize| if i < m { f.neg(x[(i + m) * n + j]) } else { x[(i - m) * n + j] };
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for t in 0..n {
                    acc = f.add(acc, f.mul(x[t * n + i], ox(t, j)));
                }
                let want = if i < m && j == i + m {
                    f.neg(1)
                } else if i >= m && j + m == i {
                    1
                } else {
                    0
                };
                if acc != want {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeySet {
    U64(Vec<u64>),
    Packed(Vec<PackedKey>),
}

impl KeySet {
    pub fn len(&self) -> usize {
        match self {
            KeySet::U64(v) => v.len(),
            KeySet::Packed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keys in the general representation.
    pub fn to_packed(&self) -> Vec<PackedKey> {
        match self {
            KeySet::U64(v) => v.iter().map(|&k| PackedKey::Small(k as u128)).collect(),
            KeySet::Packed(v) => v.clone(),
        }
    }
}

/// A finitely generated matrix group enumerated by breadth-first closure.
#[derive(Clone, Debug)]
pub struct GroupEnumeration {
    pub generators: Vec<MatFq>,
    pub cap: u64,
    pub closed: bool,
    /// Sorted.
    pub keys: KeySet,
    packer: Packer,
    ops: RawOps,
}

impl GroupEnumeration {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn n(&self) -> usize {
        self.ops.n
    }

    pub fn field(&self) -> &Arc<BaseField> {
        &self.ops.field
    }

    pub fn packer(&self) -> &Packer {
        &self.packer
    }

    pub fn ops(&self) -> &RawOps {
        &self.ops
    }

    pub fn u64_keys(&self) -> Option<&[u64]> {
        match &self.keys {
            KeySet::U64(v) => Some(v),
            KeySet::Packed(_) => None,
        }
    }

    pub fn contains(&self, m: &MatFq) -> bool {
        match &self.keys {
            KeySet::U64(v) => v.binary_search(&self.packer.pack_u64(m.data())).is_ok(),
            KeySet::Packed(v) => v.binary_search(&self.packer.pack(m)).is_ok(),
        }
    }

    pub fn require_closed(self) -> Result<Self, ComplexError> {
        if self.closed {
            Ok(self)
        } else {
            Err(ComplexError::CapExceeded {
                found: self.len() as u64,
                cap: self.cap,
            })
        }
    }

    /// All elements, as matrices.
    pub fn matrices(&self) -> Vec<MatFq> {
        let n = self.n();
        match &self.keys {
            KeySet::U64(v) => {
                let mut buf = vec![0u32; n * n];
                v.iter()
                    .map(|&k| {
                        self.packer.unpack_u64(k, &mut buf);
                        MatFq::from_vec(self.field(), n, buf.clone()).unwrap()
                    })
                    .collect()
            }
            KeySet::Packed(v) => v.iter().map(|k| self.packer.unpack(k)).collect(),
        }
    }

    /// Applies `pred` to the raw entries of every element.
    pub fn all_raw(&self, mut pred: impl FnMut(&[u32]) -> bool) -> bool {
        let n = self.n();
        let mut buf = vec![0u32; n * n];
        match &self.keys {
            KeySet::U64(v) => v.iter().all(|&k| {
                self.packer.unpack_u64(k, &mut buf);
                pred(&buf)
            }),
            KeySet::Packed(v) => v.iter().all(|k| pred(self.packer.unpack(k).data())),
        }
    }
}

/// Breadth-first closure of `⟨generators⟩` under right multiplication.
/// Stops with `closed = false` once more than `cap` elements are found.
pub fn bfs_closure(generators: &[MatFq], cap: u64) -> GroupEnumeration {
    assert!(!generators.is_empty(), "at least one generator");
    let field = generators[0].field().clone();
    let n = generators[0].n();
    let packer = Packer::new(&field, n);
    let ops = RawOps::new(&field, n);
    let id = MatFq::identity(&field, n);
    let (keys, closed) = if packer.fits_u64() {
        let (v, closed) = bfs_u64(generators, cap, &packer, &ops);
        (KeySet::U64(v), closed)
    } else {
        let (v, closed) = bfs_packed(generators, cap, &packer, &id);
        (KeySet::Packed(v), closed)
    };
    log::debug!("closure: {} elements, closed = {closed}", match &keys {
        KeySet::U64(v) => v.len(),
        KeySet::Packed(v) => v.len(),
    });
    GroupEnumeration {
        generators: generators.to_vec(),
        cap,
        closed,
        keys,
        packer,
        ops,
    }
}

fn bfs_u64(generators: &[MatFq], cap: u64, packer: &Packer, ops: &RawOps) -> (Vec<u64>, bool) {
    let n = ops.n;
    let id = packer.pack_u64(MatFq::identity(&ops.field, n).data());
    let mut seen: HashSet<u64> = HashSet::from([id]);
    let mut frontier = vec![id];
    let (mut a, mut out) = (vec![0u32; n * n], vec![0u32; n * n]);
    let mut closed = true;
    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for &key in &frontier {
            packer.unpack_u64(key, &mut a);
            for g in generators {
                ops.mul(&a, g.data(), &mut out);
                let k = packer.pack_u64(&out);
                if seen.insert(k) {
                    next.push(k);
                    if seen.len() as u64 > cap {
                        closed = false;
                        break 'outer;
                    }
                }
            }
        }
        frontier = next;
    }
    let mut v: Vec<u64> = seen.into_iter().collect();
    v.sort_unstable();
    (v, closed)
}

fn bfs_packed(generators: &[MatFq], cap: u64, packer: &Packer, id: &MatFq) -> (Vec<PackedKey>, bool) {
    let mut seen: HashSet<PackedKey> = HashSet::from([packer.pack(id)]);
    let mut frontier = vec![id.clone()];
    let mut closed = true;
    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in generators {
                let x = m * g;
                if seen.insert(packer.pack(&x)) {
                    next.push(x);
                    if seen.len() as u64 > cap {
                        closed = false;
                        break 'outer;
                    }
                }
            }
        }
        frontier = next;
    }
    let mut v: Vec<PackedKey> = seen.into_iter().collect();
    v.sort_unstable();
    (v, closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{sl_order, sp_order, SymplecticForm, is_symplectic};
    use proptest::prelude::*;

    fn f(p: u32) -> Arc<BaseField> {
        Arc::new(BaseField::prime(p).unwrap())
    }

    #[test]
    fn trivial_group() {
        let g = bfs_closure(&[MatFq::identity(&f(5), 2)], 10);
        assert_eq!(g.len(), 1);
        assert!(g.closed);
    }

    #[test]
    fn sl2_f5() {
        let fl = f(5);
        let u = MatFq::from_int_rows(&fl, &[vec![1, 1], vec![0, 1]]);
        let l = MatFq::from_int_rows(&fl, &[vec![1, 0], vec![1, 1]]);
        let g = bfs_closure(&[u, l], 1000);
        assert!(g.closed);
        assert_eq!(g.len() as u128, sl_order(2, 5).unwrap());
        assert_eq!(g.len(), 120);
    }

    #[test]
    fn cap_exceeded_keeps_partial() {
        let fl = f(7);
        let u = MatFq::from_int_rows(&fl, &[vec![1, 1], vec![0, 1]]);
        let l = MatFq::from_int_rows(&fl, &[vec![1, 0], vec![1, 1]]);
        let g = bfs_closure(&[u, l], 50);
        assert!(!g.closed);
        assert!(g.len() > 50);
        assert!(matches!(g.require_closed(), Err(ComplexError::CapExceeded { cap: 50, .. })));
    }

    #[test]
    fn packed_path_matches_u64_path() {
        // 3x3 over F_5 fits u64 (27 bits); a 5x5 over F_5 needs 75 bits
        let fl = f(5);
        let e = |i, j| &MatFq::identity(&fl, 5) + &MatFq::unit(&fl, 5, i, j);
        let g = bfs_closure(&[e(0, 1), e(1, 2)], 10_000);
        assert!(matches!(g.keys, KeySet::Packed(_)));
        // unitriangular group generated by two adjacent elementary matrices: order 5^3
        assert_eq!(g.len(), 125);
        let ops = RawOps::new(&fl, 5);
        let mut out = vec![0; 25];
        ops.mul(e(0, 1).data(), e(1, 2).data(), &mut out);
        assert_eq!(out, (&e(0, 1) * &e(1, 2)).data());
    }

    #[test]
    fn raw_symplectic_agrees() {
        let fl = f(5);
        let form = SymplecticForm::standard(&fl, 2);
        let x = MatFq::from_int_rows(&fl, &[vec![1, 0, 2, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        let y = MatFq::from_int_rows(&fl, &[vec![1, 0, 2, 1], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        let ops = RawOps::new(&fl, 4);
        assert_eq!(ops.is_symplectic(x.data()), is_symplectic(&x, &form).unwrap());
        assert_eq!(ops.is_symplectic(y.data()), is_symplectic(&y, &form).unwrap());
        assert!(ops.is_symplectic(x.data()));
        assert!(!ops.is_symplectic(y.data()));
        assert_eq!(sp_order(1, 5), sl_order(2, 5));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn closure_independent_of_generator_order(a in 0u32..5, b in 1u32..5, swap in any::<bool>()) {
            let fl = f(5);
            let g1 = MatFq::from_int_rows(&fl, &[vec![1, a as i64], vec![0, 1]]);
            let g2 = MatFq::from_int_rows(&fl, &[vec![1, 0], vec![b as i64, 1]]);
            let gens = if swap { vec![g2.clone(), g1.clone()] } else { vec![g1.clone(), g2.clone()] };
            let x = bfs_closure(&gens, 10_000);
            let y = bfs_closure(&[g1, g2], 10_000);
            prop_assert_eq!(x.u64_keys(), y.u64_keys());
            // closed under multiplication by generators and inverses
            for m in x.matrices() {
                for g in &gens {
                    prop_assert!(x.contains(&(&m * g)));
                    prop_assert!(x.contains(&(&m * &g.inv().unwrap())));
                }
            }
        }
    }
}
