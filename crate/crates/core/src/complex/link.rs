//! Vertex links, either read off a built complex or assembled directly from
//! the local subgroups.

use super::cosets::{coset_labels_any, intersect_keysets, TYPE_NAMES};
use super::{bfs_closure, ComplexError, CosetComplexData, Graph, GroupEnumeration, KeySet, VertexId};
use crate::forge::Generators;
use crate::matrix::{MatFq, PackedKey};

/// Bipartite link graph. Nodes `0..left.len()` are the left side.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    pub id: String,
    pub center: VertexId,
    pub sides: [char; 2],
    pub left: Vec<PackedKey>,
    pub right: Vec<PackedKey>,
    pub graph: Graph,
}

impl LinkGraph {
    /// Common degree of each side, when both sides are regular.
    pub fn biregular_degrees(&self) -> Option<(usize, usize)> {
        let deg = self.graph.degrees();
        let (l, r) = deg.split_at(self.left.len());
        let uniform = |s: &[usize]| s.first().copied().filter(|d| s.iter().all(|x| x == d));
        Some((uniform(l)?, uniform(r)?))
    }

    /// True when every edge joins the two sides.
    pub fn is_bipartite_between_sides(&self) -> bool {
        let nl = self.left.len();
        (0..self.graph.n()).all(|v| self.graph.neighbors(v).iter().all(|&w| (v < nl) != ((w as usize) < nl)))
    }
}

/// Link of `v` in a built complex: the other two vertices of each triangle
/// through `v`.
pub fn vertex_link(cc: &CosetComplexData, v: VertexId) -> Result<LinkGraph, ComplexError> {
    if !cc.contains(v) {
        return Err(ComplexError::UnknownVertex(v));
    }
    let t = v.ty as usize;
    let (s1, s2) = match t {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let pairs: Vec<(u32, u32)> = cc
        .triangles
        .iter()
        .filter(|tr| tr[t] == v.idx)
        .map(|tr| (tr[s1], tr[s2]))
        .collect();
    let mut left: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    let mut right: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    left.sort_unstable();
    left.dedup();
    right.sort_unstable();
    right.dedup();
    let nl = left.len() as u32;
    let edges = pairs.iter().map(|&(a, b)| {
        (
            left.binary_search(&a).unwrap() as u32,
            nl + right.binary_search(&b).unwrap() as u32,
        )
    });
    let graph = Graph::from_edges(left.len() + right.len(), edges);
    Ok(LinkGraph {
        id: format!("link-{v}"),
        center: v,
        sides: [TYPE_NAMES[s1], TYPE_NAMES[s2]],
        left: left.iter().map(|&i| PackedKey::Small(cc.vertices[s1][i as usize] as u128)).collect(),
        right: right.iter().map(|&i| PackedKey::Small(cc.vertices[s2][i as usize] as u128)).collect(),
        graph,
    })
}

/// Link of the base vertex `H_T` of type `ty`: the coset graph of `H_T`
/// over its intersections `k1`, `k2` with the other two subgroups, one edge
/// `(hK1, hK2)` per `h ∈ H_T`.
pub fn local_link(ty: usize, h: &GroupEnumeration, k1: &KeySet, k2: &KeySet) -> Result<LinkGraph, ComplexError> {
    let (l1, r1) = coset_labels_any(&h.keys, k1, h.packer(), h.ops())?;
    let (l2, r2) = coset_labels_any(&h.keys, k2, h.packer(), h.ops())?;
    let nl = r1.len() as u32;
    let graph = Graph::from_edges(r1.len() + r2.len(), l1.iter().zip(&l2).map(|(&a, &b)| (a, nl + b)));
    let others: Vec<char> = (0..3).filter(|&t| t != ty).map(|t| TYPE_NAMES[t]).collect();
    Ok(LinkGraph {
        id: format!("link-{}", TYPE_NAMES[ty]),
        center: VertexId { ty: ty as u8, idx: 0 },
        sides: [others[0], others[1]],
        left: r1,
        right: r2,
        graph,
    })
}

/// Generators of `H_a = ⟨V_b, V_c⟩`, `H_b = ⟨V_a, V_c⟩`, `H_c = ⟨V_a, V_b⟩`,
/// each root subgroup generated over the given additive basis of `F_q`.
pub fn kms_subgroup_generators(gens: &Generators, basis: &[u32]) -> [Vec<MatFq>; 3] {
    let root = |i: usize| -> Vec<MatFq> {
        basis
            .iter()
            .map(|&c| match i {
                0 => gens.va(c),
                1 => gens.vb(c),
                _ => gens.vc(c),
            })
            .collect()
    };
    let [a, b, c] = [root(0), root(1), root(2)];
    [
        [b.clone(), c.clone()].concat(),
        [a.clone(), c].concat(),
        [a, b].concat(),
    ]
}

/// The local subgroups and the three base-vertex links. By transitivity of
/// `G` on each vertex type, these represent every vertex link.
pub struct LocalLinks {
    pub subgroups: [GroupEnumeration; 3],
    /// `[H_a ∩ H_b, H_a ∩ H_c, H_b ∩ H_c]`.
    pub intersections: [KeySet; 3],
    pub links: [LinkGraph; 3],
}

pub fn kms_local_links(gens: &Generators, basis: &[u32], cap: u64) -> Result<LocalLinks, ComplexError> {
    let sg = kms_subgroup_generators(gens, basis);
    let mut subgroups = Vec::new();
    for s in &sg {
        subgroups.push(bfs_closure(s, cap).require_closed()?);
    }
    let ab = intersect_keysets(&subgroups[0].keys, &subgroups[1].keys);
    let ac = intersect_keysets(&subgroups[0].keys, &subgroups[2].keys);
    let bc = intersect_keysets(&subgroups[1].keys, &subgroups[2].keys);
    let links = [
        local_link(0, &subgroups[0], &ab, &ac)?,
        local_link(1, &subgroups[1], &ab, &bc)?,
        local_link(2, &subgroups[2], &ac, &bc)?,
    ];
    let subgroups: [GroupEnumeration; 3] = subgroups.try_into().unwrap();
    Ok(LocalLinks {
        subgroups,
        intersections: [ab, ac, bc],
        links,
    })
}

#[cfg(test)]
mod tests {
    use super::super::cosets::coset_complex;
    use super::*;
    use crate::complex::{second_eigenvalue, Method};
    use crate::field::BaseField;
    use std::sync::Arc;

    #[test]
    fn toy_triangle_link_is_an_edge() {
        let fl = Arc::new(BaseField::prime(5).unwrap());
        let g = bfs_closure(&[MatFq::identity(&fl, 2)], 10);
        let cc = coset_complex(&g, [&[], &[], &[]]).unwrap();
        for ty in 0..3 {
            let l = vertex_link(&cc, VertexId { ty, idx: 0 }).unwrap();
            assert_eq!(l.graph.n(), 2);
            assert_eq!(l.graph.edge_count(), 1);
        }
        assert_eq!(
            vertex_link(&cc, VertexId { ty: 0, idx: 1 }).unwrap_err(),
            ComplexError::UnknownVertex(VertexId { ty: 0, idx: 1 })
        );
    }

    /// Links read off the full SL_2(F_5) complex agree with links built from
    /// the subgroups alone.
    #[test]
    fn full_and_local_links_agree() {
        let fl = Arc::new(BaseField::prime(5).unwrap());
        let u = MatFq::from_int_rows(&fl, &[vec![1, 1], vec![0, 1]]);
        let l = MatFq::from_int_rows(&fl, &[vec![1, 0], vec![1, 1]]);
        let w = MatFq::from_int_rows(&fl, &[vec![1, 1], vec![4, 0]]);
        let g = bfs_closure(&[u.clone(), l.clone()], 1000);
        let sub: [Vec<MatFq>; 3] = [vec![u.clone(), l.clone()], vec![u.clone(), w.clone()], vec![l.clone(), w.clone()]];
        let cc = coset_complex(&g, [&sub[0], &sub[1], &sub[2]]).unwrap();
        let hs: Vec<GroupEnumeration> = sub.iter().map(|s| bfs_closure(s, 1000)).collect();
        let k = |i: usize, j: usize| intersect_keysets(&hs[i].keys, &hs[j].keys);
        let pairs = [(1, 2), (0, 2), (0, 1)];
        for ty in 0..3 {
            let (i, j) = pairs[ty];
            let (i, j) = ((i.min(ty), i.max(ty)), (j.min(ty), j.max(ty)));
            let local = local_link(ty, &hs[ty], &k(i.0, i.1), &k(j.0, j.1)).unwrap();
            let full = vertex_link(&cc, cc.base_vertex(ty as u8)).unwrap();
            assert_eq!(local.left.len(), full.left.len());
            assert_eq!(local.right.len(), full.right.len());
            assert_eq!(local.graph.edge_count(), full.graph.edge_count());
            assert!(local.is_bipartite_between_sides() && full.is_bipartite_between_sides());
            if local.graph.is_connected() {
                let a = second_eigenvalue(&local.graph, Method::Dense, 1e-9).unwrap();
                let b = second_eigenvalue(&full.graph, Method::Dense, 1e-9).unwrap();
                assert!((a.lambda2 - b.lambda2).abs() < 1e-9);
            }
        }
    }
}
