//! Coset labelling and the coset complex `CC(G, {H_a, H_b, H_c})`.

use std::fmt;
use std::io::{self, Write};

use super::{bfs_closure, ComplexError, GroupEnumeration, KeySet, RawOps};
use crate::matrix::{MatFq, PackedKey, Packer};

pub const TYPE_NAMES: [char; 3] = ['a', 'b', 'c'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub ty: u8,
    pub idx: u32,
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", TYPE_NAMES[self.ty as usize], self.idx)
    }
}

/// Left cosets `gH` of a subgroup inside a sorted universe.
#[derive(Clone, Debug)]
pub struct CosetLabels {
    /// Coset index of each universe element.
    pub labels: Vec<u32>,
    /// Minimum key of each coset, increasing.
    pub reps: Vec<u64>,
}

/// Labels `universe` (sorted keys) by left cosets of the group with keys
/// `sub`. Sweeping in key order, the first unlabelled element of a coset is
/// its minimum, so each coset is expanded exactly once.
pub fn coset_labels(universe: &[u64], sub: &[u64], packer: &Packer, ops: &RawOps) -> Result<CosetLabels, ComplexError> {
    let (labels, reps) = sweep(
        universe,
        sub,
        ops,
        |k, out| packer.unpack_u64(*k, out),
        |d| packer.pack_u64(d),
    )?;
    Ok(CosetLabels { labels, reps })
}

/// As [`coset_labels`], for either key representation.
pub fn coset_labels_any(universe: &KeySet, sub: &KeySet, packer: &Packer, ops: &RawOps) -> Result<(Vec<u32>, Vec<PackedKey>), ComplexError> {
    match (universe, sub) {
        (KeySet::U64(u), KeySet::U64(h)) => {
            let cl = coset_labels(u, h, packer, ops)?;
            Ok((cl.labels, cl.reps.into_iter().map(|k| PackedKey::Small(k as u128)).collect()))
        }
        (KeySet::Packed(u), KeySet::Packed(h)) => sweep(
            u,
            h,
            ops,
            |k, out| out.copy_from_slice(packer.unpack(k).data()),
            |d| packer.pack(&MatFq::from_vec(&ops.field, ops.n, d.to_vec()).unwrap()),
        ),
        _ => Err(ComplexError::Unsupported("mixed key representations".into())),
    }
}

fn sweep<K: Ord + Clone>(
    universe: &[K],
    sub: &[K],
    ops: &RawOps,
    unpack: impl Fn(&K, &mut [u32]),
    pack: impl Fn(&[u32]) -> K,
) -> Result<(Vec<u32>, Vec<K>), ComplexError> {
    let nn = ops.n * ops.n;
    let sub_mats: Vec<Vec<u32>> = sub
        .iter()
        .map(|k| {
            let mut v = vec![0; nn];
            unpack(k, &mut v);
            v
        })
        .collect();
    let mut labels = vec![u32::MAX; universe.len()];
    let mut reps = Vec::with_capacity(universe.len() / sub.len().max(1));
    let (mut a, mut out) = (vec![0; nn], vec![0; nn]);
    for i in 0..universe.len() {
        if labels[i] != u32::MAX {
            continue;
        }
        let label = reps.len() as u32;
        reps.push(universe[i].clone());
        unpack(&universe[i], &mut a);
        for h in &sub_mats {
            ops.mul(&a, h, &mut out);
            let j = universe
                .binary_search(&pack(&out))
                .map_err(|_| ComplexError::Unsupported("subgroup is not contained in the group".into()))?;
            labels[j] = label;
        }
    }
    Ok((labels, reps))
}

/// Intersection of two sorted key sets of the same representation.
pub fn intersect_keysets(a: &KeySet, b: &KeySet) -> KeySet {
    match (a, b) {
        (KeySet::U64(x), KeySet::U64(y)) => KeySet::U64(intersect_sorted(x, y)),
        (KeySet::Packed(x), KeySet::Packed(y)) => KeySet::Packed(intersect_sorted(x, y)),
        _ => panic!("mixed key representations"),
    }
}

/// Sorted intersection of two sorted key lists.
pub fn intersect_sorted<T: Ord + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
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

#[derive(Clone, Debug)]
pub struct CosetComplexData {
    pub group_order: usize,
    pub subgroup_orders: [usize; 3],
    /// Canonical (minimum) key of every coset, per type.
    pub vertices: [Vec<u64>; 3],
    /// Index of the coset `H_t` itself, per type.
    pub base: [u32; 3],
    /// Sorted, duplicate free; entry `t` indexes `vertices[t]`.
    pub triangles: Vec<[u32; 3]>,
    /// Deduplicated edges `(type i, idx) -- (type j, idx)` with `i < j`.
    pub skeleton: Vec<(VertexId, VertexId)>,
}

impl CosetComplexData {
    pub fn base_vertex(&self, ty: u8) -> VertexId {
        VertexId { ty, idx: self.base[ty as usize] }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.iter().map(Vec::len).sum()
    }

    /// Global index of a vertex in the skeleton graph.
    pub fn global(&self, v: VertexId) -> usize {
        self.vertices[..v.ty as usize].iter().map(Vec::len).sum::<usize>() + v.idx as usize
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v.ty as usize) < 3 && (v.idx as usize) < self.vertices[v.ty as usize].len()
    }

    /// `|G| / #triangles`, equal to `|H_a ∩ H_b ∩ H_c|`.
    pub fn triple_intersection_order(&self) -> usize {
        self.group_order / self.triangles.len().max(1)
    }

    pub fn skeleton_graph(&self) -> super::Graph {
        super::Graph::from_edges(
            self.vertex_count(),
            self.skeleton
                .iter()
                .map(|&(u, v)| (self.global(u) as u32, self.global(v) as u32)),
        )
    }

    pub fn write_vertices(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "id\ttype\tkey")?;
        for (t, vs) in self.vertices.iter().enumerate() {
            for (i, key) in vs.iter().enumerate() {
                writeln!(w, "{}\t{}\t{:016x}", VertexId { ty: t as u8, idx: i as u32 }, TYPE_NAMES[t], key)?;
            }
        }
        Ok(())
    }

    pub fn write_triangles(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "a\tb\tc")?;
        for t in &self.triangles {
            writeln!(w, "a{}\tb{}\tc{}", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}

/// Builds the coset complex of a closed group with respect to three
/// subgroups given by generators.
pub fn coset_complex(g: &GroupEnumeration, subgroups: [&[MatFq]; 3]) -> Result<CosetComplexData, ComplexError> {
    if !g.closed {
        return Err(ComplexError::NotClosed);
    }
    let universe = g
        .u64_keys()
        .ok_or_else(|| ComplexError::Unsupported("coset complexes need 64-bit keys".into()))?;
    let id_key = g.packer().pack_u64(MatFq::identity(g.field(), g.n()).data());
    let id_pos = universe.binary_search(&id_key).map_err(|_| ComplexError::Unsupported("group lacks the identity".into()))?;
    let mut base = [0u32; 3];
    let mut orders = [0usize; 3];
    let mut vertices: [Vec<u64>; 3] = Default::default();
    let mut labels: Vec<Vec<u32>> = Vec::new();
    for t in 0..3 {
        let h = if subgroups[t].is_empty() {
            bfs_closure(&[MatFq::identity(g.field(), g.n())], 1)
        } else {
            bfs_closure(subgroups[t], g.cap).require_closed()?
        };
        let keys = h.u64_keys().expect("same packer as the group");
        orders[t] = keys.len();
        let cl = coset_labels(universe, keys, g.packer(), g.ops())?;
        log::debug!("type {}: {} cosets of a subgroup of order {}", TYPE_NAMES[t], cl.reps.len(), keys.len());
        base[t] = cl.labels[id_pos];
        vertices[t] = cl.reps;
        labels.push(cl.labels);
    }
    let mut triangles: Vec<[u32; 3]> = (0..universe.len())
        .map(|i| [labels[0][i], labels[1][i], labels[2][i]])
        .collect();
    triangles.sort_unstable();
    triangles.dedup();
    drop(labels);
    let mut skeleton = Vec::new();
    for (s, t) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let mut pairs: Vec<u64> = triangles.iter().map(|tr| (tr[s] as u64) << 32 | tr[t] as u64).collect();
        pairs.sort_unstable();
        pairs.dedup();
        skeleton.extend(pairs.into_iter().map(|x| {
            (
                VertexId { ty: s as u8, idx: (x >> 32) as u32 },
                VertexId { ty: t as u8, idx: x as u32 },
            )
        }));
    }
    Ok(CosetComplexData {
        group_order: universe.len(),
        subgroup_orders: orders,
        vertices,
        base,
        triangles,
        skeleton,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BaseField;
    use std::collections::{BTreeSet, HashSet};
    use std::sync::Arc;

    fn f(p: u32) -> Arc<BaseField> {
        Arc::new(BaseField::prime(p).unwrap())
    }

    #[test]
    fn trivial_group_gives_one_triangle() {
        let fl = f(5);
        let id = MatFq::identity(&fl, 2);
        let g = bfs_closure(&[id], 10);
        let cc = coset_complex(&g, [&[], &[], &[]]).unwrap();
        assert_eq!(cc.vertices.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(cc.triangles, vec![[0, 0, 0]]);
        assert_eq!(cc.skeleton.len(), 3);
    }

    #[test]
    fn not_closed_rejected() {
        let fl = f(7);
        let u = MatFq::from_int_rows(&fl, &[vec![1, 1], vec![0, 1]]);
        let l = MatFq::from_int_rows(&fl, &[vec![1, 0], vec![1, 1]]);
        let g = bfs_closure(&[u.clone(), l], 10);
        assert_eq!(coset_complex(&g, [&[u.clone()], &[u.clone()], &[u]]).unwrap_err(), ComplexError::NotClosed);
    }

    /// SL_2(F_5) with the upper unipotent, lower unipotent and diagonal
    /// subgroups; labels checked against cosets built by explicit products.
    #[test]
    fn sl2_complex_against_brute_force() {
        let fl = f(5);
        let u = MatFq::from_int_rows(&fl, &[vec![1, 1], vec![0, 1]]);
        let l = MatFq::from_int_rows(&fl, &[vec![1, 0], vec![1, 1]]);
        let d = MatFq::from_int_rows(&fl, &[vec![2, 0], vec![0, 3]]);
        let g = bfs_closure(&[u.clone(), l.clone()], 1000);
        let cc = coset_complex(&g, [&[u.clone()], &[l.clone()], &[d.clone()]]).unwrap();
        assert_eq!(cc.subgroup_orders, [5, 5, 4]);
        let sum: usize = (0..3).map(|t| cc.vertices[t].len() * cc.subgroup_orders[t]).sum();
        assert_eq!(sum, 3 * g.len());
        assert_eq!(cc.triangles.len() * cc.triple_intersection_order(), g.len());
        // oracle: cosets as explicit sets of matrices
        let packer = g.packer().clone();
        let elems = g.matrices();
        for (t, gen) in [u, l, d].iter().enumerate() {
            let h = bfs_closure(std::slice::from_ref(gen), 100).matrices();
            let cosets: BTreeSet<Vec<u64>> = elems
                .iter()
                .map(|x| {
                    let mut c: Vec<u64> = h.iter().map(|y| packer.pack_u64((x * y).data())).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            let mins: Vec<u64> = cosets.iter().map(|c| c[0]).collect::<BTreeSet<_>>().into_iter().collect();
            assert_eq!(cc.vertices[t], mins);
        }
        let distinct: HashSet<_> = cc.triangles.iter().collect();
        assert_eq!(distinct.len(), cc.triangles.len());
    }

    #[test]
    fn intersect() {
        assert_eq!(intersect_sorted(&[1, 3, 5, 7], &[2, 3, 7, 9]), vec![3, 7]);
        assert!(intersect_sorted(&[], &[1]).is_empty());
    }
}
