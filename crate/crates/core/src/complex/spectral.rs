//! Spectra of degree-normalized adjacency operators.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ComplexError;

pub const DENSE_LIMIT: usize = 5000;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dense,
    Iterative,
}

impl Method {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "dense" => Some(Self::Dense),
            "iterative" => Some(Self::Iterative),
            _ => None,
        }
    }
}

/// Simple undirected graph; parallel edges are merged, loops are rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert_ne!(u, v, "loop at {u}");
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Self { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w as usize);
                }
            }
        }
        count == self.n()
    }

    /// Side assignment of a proper 2-coloring, if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n()];
        for s in 0..self.n() {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let c = side[v].unwrap();
                for &w in &self.adj[v] {
                    match side[w as usize] {
                        None => {
                            side[w as usize] = Some(!c);
                            stack.push(w as usize);
                        }
                        Some(d) if d == c => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    /// Largest deviation of a row sum of `D^{-1} A` from 1.
    pub fn row_stochastic_defect(&self) -> f64 {
        self.adj
            .iter()
            .filter(|a| !a.is_empty())
            .map(|a| {
                let w = 1.0 / a.len() as f64;
                (a.iter().map(|_| w).sum::<f64>() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `y = N x` for `N = D^{-1/2} A D^{-1/2}`.
    fn apply_normalized(&self, inv_sqrt_d: &[f64], x: &[f64], y: &mut [f64]) {
        for (v, a) in self.adj.iter().enumerate() {
            let s: f64 = a.iter().map(|&w| x[w as usize] * inv_sqrt_d[w as usize]).sum();
            y[v] = s * inv_sqrt_d[v];
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralResult {
    /// Second-largest eigenvalue (the trivial eigenvalue 1 excluded once).
    pub lambda2: f64,
    pub lambda_min: f64,
    pub method: Method,
    pub iterations: usize,
}

impl SpectralResult {
    /// `|λ_min + 1|`; zero exactly for connected bipartite graphs.
    pub fn bipartite_certificate(&self) -> f64 {
        (self.lambda_min + 1.0).abs()
    }
}

pub fn second_eigenvalue(g: &Graph, method: Method, tol: f64) -> Result<SpectralResult, ComplexError> {
    second_eigenvalue_with(g, method, tol, DEFAULT_MAX_ITER, 0x5eed)
}

pub fn second_eigenvalue_with(
    g: &Graph,
    method: Method,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<SpectralResult, ComplexError> {
    if g.n() < 2 || !g.is_connected() {
        return Err(ComplexError::Disconnected);
    }
    match method {
        Method::Dense => dense(g),
        Method::Iterative => iterative(g, tol, max_iter, seed),
    }
}

fn dense(g: &Graph) -> Result<SpectralResult, ComplexError> {
    let n = g.n();
    if n > DENSE_LIMIT {
        return Err(ComplexError::TooLargeForDense(n, DENSE_LIMIT));
    }
    let isd: Vec<f64> = g.degrees().iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    if let Some(side) = g.bipartition() {
        // N = [[0, C], [C^t, 0]]: eigenvalues ±σ(C) plus zeros
        let left: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
        let right: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
        let (small, large) = if left.len() <= right.len() { (left, right) } else { (right, left) };
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in large.iter().enumerate() {
            pos[v] = i;
        }
        let mut c = DMatrix::<f64>::zeros(small.len(), large.len());
        for (i, &v) in small.iter().enumerate() {
            for &w in g.neighbors(v) {
                c[(i, pos[w as usize])] = isd[v] * isd[w as usize];
            }
        }
        let cct = &c * c.transpose();
        let mut sq: Vec<f64> = cct.symmetric_eigenvalues().iter().copied().collect();
        sq.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sigma: Vec<f64> = sq.iter().map(|&x| x.max(0.0).sqrt()).collect();
        let mut spectrum: Vec<f64> = sigma.iter().flat_map(|&s| [s, -s]).collect();
        spectrum.extend(std::iter::repeat(0.0).take(n - 2 * sigma.len()));
        spectrum.sort_by(|a, b| b.partial_cmp(a).unwrap());
        return Ok(SpectralResult {
            lambda2: spectrum[1],
            lambda_min: spectrum[n - 1],
            method: Method::Dense,
            iterations: 0,
        });
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        for &w in g.neighbors(v) {
            m[(v, w as usize)] = isd[v] * isd[w as usize];
        }
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(SpectralResult {
        lambda2: ev[1],
        lambda_min: ev[n - 1],
        method: Method::Dense,
        iterations: 0,
    })
}

fn normalize(x: &mut [f64]) -> f64 {
    let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= nrm);
    nrm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Power iteration on `(I + s N) / 2`, optionally deflating `top`.
/// Returns the converged Rayleigh quotient of `N` and the iteration count.
fn power(
    g: &Graph,
    isd: &[f64],
    sign: f64,
    top: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, usize), ComplexError> {
    let n = g.n();
    let deflate = |x: &mut [f64]| {
        if let Some(t) = top {
            let c = dot(x, t);
            x.iter_mut().zip(t).for_each(|(v, tv)| *v -= c * tv);
        }
    };
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut x);
    normalize(&mut x);
    let mut nx = vec![0.0; n];
    let mut prev = f64::INFINITY;
    for it in 1..=max_iter {
        g.apply_normalized(isd, &x, &mut nx);
        let rq = dot(&x, &nx);
        if (rq - prev).abs() < tol {
            return Ok((rq, it));
        }
        prev = rq;
        for i in 0..n {
            x[i] = 0.5 * (x[i] + sign * nx[i]);
        }
        deflate(&mut x);
        if normalize(&mut x) < 1e-150 {
            // x lay in the kernel of the shifted operator
            return Ok((rq, it));
        }
    }
    Err(ComplexError::NotConverged(max_iter))
}

fn iterative(g: &Graph, tol: f64, max_iter: usize, seed: u64) -> Result<SpectralResult, ComplexError> {
    let deg = g.degrees();
    let isd: Vec<f64> = deg.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    // top eigenvector of N is D^{1/2} 1
    let mut top: Vec<f64> = deg.iter().map(|&d| (d as f64).sqrt()).collect();
    normalize(&mut top);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lambda2, i1) = power(g, &isd, 1.0, Some(&top), tol, max_iter, &mut rng)?;
    let (lambda_min, i2) = power(g, &isd, -1.0, None, tol, max_iter, &mut rng)?;
    Ok(SpectralResult {
        lambda2,
        lambda_min,
        method: Method::Iterative,
        iterations: i1 + i2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_bipartite(n: u32) -> Graph {
        Graph::from_edges(2 * n as usize, (0..n).flat_map(|i| (0..n).map(move |j| (i, n + j))))
    }

    fn cycle(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn complete_bipartite_spectrum() {
        for n in [2, 3, 7] {
            let g = complete_bipartite(n);
            let d = second_eigenvalue(&g, Method::Dense, DEFAULT_TOL).unwrap();
            assert!(d.lambda2.abs() < 1e-6, "{d:?}");
            assert!(d.bipartite_certificate() < 1e-12);
            let it = second_eigenvalue(&g, Method::Iterative, DEFAULT_TOL).unwrap();
            assert!(it.lambda2.abs() < 1e-6, "{it:?}");
            assert!(it.bipartite_certificate() < 1e-6);
        }
    }

    #[test]
    fn four_cycle() {
        // eigenvalues of the normalized 4-cycle: 1, 0, 0, -1
        let g = cycle(4);
        let d = second_eigenvalue(&g, Method::Dense, DEFAULT_TOL).unwrap();
        assert!(d.lambda2.abs() < 1e-7);
        assert!((d.lambda_min + 1.0).abs() < 1e-12);
    }

    #[test]
    fn odd_cycle_against_closed_form() {
        // C_n has normalized eigenvalues cos(2πj/n)
        for n in [5u32, 9, 15] {
            let g = cycle(n);
            let want2 = (2.0 * std::f64::consts::PI / n as f64).cos();
            let wantmin = (2.0 * std::f64::consts::PI * ((n / 2) as f64) / n as f64).cos();
            let d = second_eigenvalue(&g, Method::Dense, DEFAULT_TOL).unwrap();
            assert!((d.lambda2 - want2).abs() < 1e-10);
            assert!((d.lambda_min - wantmin).abs() < 1e-10);
            let it = second_eigenvalue(&g, Method::Iterative, 1e-12).unwrap();
            assert!((it.lambda2 - want2).abs() < 1e-6, "{it:?} vs {want2}");
        }
    }

    #[test]
    fn petersen_dense_and_iterative_agree() {
        // Petersen graph: adjacency eigenvalues 3, 1, -2
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::from_edges(10, outer.chain(spokes).chain(inner));
        let d = second_eigenvalue(&g, Method::Dense, DEFAULT_TOL).unwrap();
        let it = second_eigenvalue(&g, Method::Iterative, DEFAULT_TOL).unwrap();
        assert!((d.lambda2 - 1.0 / 3.0).abs() < 1e-12);
        assert!((d.lambda_min + 2.0 / 3.0).abs() < 1e-12);
        assert!((d.lambda2 - it.lambda2).abs() < 1e-8);
        assert!(g.bipartition().is_none());
    }

    #[test]
    fn errors() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        assert_eq!(second_eigenvalue(&g, Method::Dense, 1e-9), Err(ComplexError::Disconnected));
        // cap of one iteration cannot converge
        let c = cycle(7);
        assert_eq!(
            second_eigenvalue_with(&c, Method::Iterative, 1e-9, 1, 1),
            Err(ComplexError::NotConverged(1))
        );
        assert!(c.row_stochastic_defect() < 1e-12);
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let d = second_eigenvalue(&g, Method::Dense, DEFAULT_TOL).unwrap();
        assert!((d.lambda2 + 1.0).abs() < 1e-12);
    }
}
