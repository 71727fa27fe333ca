//! Spectral comparison of links against `(√(2q) + 2) / (q − 2)`.

use std::io::{self, Write};

use super::spectral::{second_eigenvalue_with, Method, DEFAULT_MAX_ITER};
use super::{ComplexError, LinkGraph};

pub fn spectral_bound(q: u64) -> f64 {
    ((2.0 * q as f64).sqrt() + 2.0) / (q as f64 - 2.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkRow {
    pub id: String,
    pub nodes: usize,
    pub edges: usize,
    pub lambda2: f64,
    pub lambda2_iterative: Option<f64>,
    pub bipartite_certificate: f64,
    pub degrees: Option<(usize, usize)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HdxReport {
    pub q: u64,
    pub bound: f64,
    pub vacuous: bool,
    pub tol: f64,
    pub rows: Vec<LinkRow>,
    pub max_lambda2: f64,
    /// Largest gap between the two solvers, where both ran.
    pub solver_gap: f64,
    pub skeleton_lambda2: Option<f64>,
}

impl HdxReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "link,nodes,edges,lambda2,bound,pass")?;
        for r in &self.rows {
            writeln!(w, "{},{},{},{:.12},{:.12},{}", r.id, r.nodes, r.edges, r.lambda2, self.bound, r.pass)?;
        }
        if let Some(s) = self.skeleton_lambda2 {
            writeln!(w, "skeleton,,,{:.12},{:.12},{}", s, self.bound, s < 1.0)?;
        }
        Ok(())
    }
}

/// Spectra of every link with the dense solver, cross-checked by power
/// iteration when `cross_check` holds.
pub fn hdx_report(links: &[LinkGraph], q: u64, tol: f64, cross_check: bool, skeleton_lambda2: Option<f64>) -> Result<HdxReport, ComplexError> {
    let bound = spectral_bound(q);
    let mut rows = Vec::new();
    let mut gap: f64 = 0.0;
    for (i, l) in links.iter().enumerate() {
        let d = second_eigenvalue_with(&l.graph, Method::Dense, tol, DEFAULT_MAX_ITER, i as u64)?;
        let it = if cross_check {
            let r = second_eigenvalue_with(&l.graph, Method::Iterative, tol, DEFAULT_MAX_ITER, i as u64)?;
            gap = gap.max((r.lambda2 - d.lambda2).abs());
            Some(r.lambda2)
        } else {
            None
        };
        rows.push(LinkRow {
            id: l.id.clone(),
            nodes: l.graph.n(),
            edges: l.graph.edge_count(),
            lambda2: d.lambda2,
            lambda2_iterative: it,
            bipartite_certificate: d.bipartite_certificate(),
            degrees: l.biregular_degrees(),
            pass: d.lambda2 <= bound + tol,
        });
    }
    let max_lambda2 = rows.iter().map(|r| r.lambda2).fold(f64::NEG_INFINITY, f64::max);
    Ok(HdxReport {
        q,
        bound,
        vacuous: bound >= 1.0,
        tol,
        rows,
        max_lambda2,
        solver_gap: gap,
        skeleton_lambda2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        // independent evaluation: 2q = 10, 22, 26
        assert!((spectral_bound(5) - (10f64.sqrt() + 2.0) / 3.0).abs() < 1e-15);
        assert!((spectral_bound(5) - 1.720_759).abs() < 1e-6);
        assert!((spectral_bound(11) - (22f64.sqrt() + 2.0) / 9.0).abs() < 1e-15);
        assert!((spectral_bound(11) - 0.743_380).abs() < 1e-6);
        assert!((spectral_bound(13) - 0.645_365).abs() < 1e-6);
        assert!(spectral_bound(8) >= 1.0);
        assert!(spectral_bound(9) < 1.0);
    }
}
