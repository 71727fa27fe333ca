use super::{Echelon, MatFq, MatrixError};

pub const DEFAULT_WORD_BUDGET: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeResult {
    /// Dimension of the span reached.
    pub dim: usize,
    /// `dims[l]` is the span dimension of all words of length `<= l`.
    pub dims: Vec<usize>,
    /// True once a level added nothing or the full algebra was reached.
    pub closed: bool,
    pub max_len: usize,
}

impl EnvelopeResult {
    pub fn require_closed(self) -> Result<Self, MatrixError> {
        if self.closed {
            Ok(self)
        } else {
            Err(MatrixError::BudgetExceeded(self.max_len))
        }
    }
}

/// Dimension of the `F_q`-span of all products of the generators of length at
/// most `max_len`, including the empty product.
///
/// Level `l + 1` only multiplies the basis elements first found at level `l`
/// by each generator on the left; everything else is already in the span.
pub fn algebra_envelope_dim(gens: &[MatFq], max_len: usize) -> Result<EnvelopeResult, MatrixError> {
    let first = gens
        .first()
        .ok_or_else(|| MatrixError::DimensionMismatch("no generators".into()))?;
    let n = first.n();
    let field = first.field().clone();
    for g in gens {
        first.check_compat(g)?;
    }
    let full = n * n;
    let mut basis = Echelon::new(full);
    let id = MatFq::identity(&field, n);
    basis.insert(&field, id.data().to_vec());
    let mut frontier = vec![id];
    let mut dims = vec![1];
    let mut closed = full == 1;
    for level in 1..=max_len {
        if closed {
            break;
        }
        let mut next = Vec::new();
        for m in &frontier {
            for g in gens {
                let prod = g * m;
                if basis.insert(&field, prod.data().to_vec()) {
                    next.push(prod);
                }
            }
        }
        log::debug!("envelope level {level}: dim {}", basis.rank());
        dims.push(basis.rank());
        closed = next.is_empty() || basis.rank() == full;
        frontier = next;
    }
    Ok(EnvelopeResult {
        dim: basis.rank(),
        dims,
        closed,
        max_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BaseField;
    use std::sync::Arc;

    #[test]
    fn identity_spans_one_dimension() {
        let f5 = Arc::new(BaseField::prime(5).unwrap());
        let r = algebra_envelope_dim(&[MatFq::identity(&f5, 3)], 12).unwrap();
        assert_eq!(r.dim, 1);
        assert!(r.closed);
    }

    #[test]
    fn sl2_transvections_span_everything() {
        let f5 = Arc::new(BaseField::prime(5).unwrap());
        let u = MatFq::from_int_rows(&f5, &[vec![1, 1], vec![0, 1]]);
        let l = MatFq::from_int_rows(&f5, &[vec![1, 0], vec![1, 1]]);
        let r = algebra_envelope_dim(&[u.clone(), l.clone()], 12).unwrap();
        assert_eq!(r.dim, 4);
        // brute force: span of every product of length <= 4
        let mut words = vec![MatFq::identity(&f5, 2)];
        let mut all = words.clone();
        for _ in 0..4 {
            words = words.iter().flat_map(|w| [&u * w, &l * w]).collect();
            all.extend(words.iter().cloned());
        }
        assert_eq!(Echelon::rank_of(&f5, 4, all.iter().map(|m| m.data().to_vec())), 4);
    }

    #[test]
    fn commuting_generators_stay_small() {
        // diagonal matrices span at most the diagonal algebra
        let f7 = Arc::new(BaseField::prime(7).unwrap());
        let d = MatFq::diag(&f7, &[2, 3, 3]);
        let r = algebra_envelope_dim(&[d], 12).unwrap();
        assert_eq!(r.dim, 2);
        assert!(r.dims.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let f5 = Arc::new(BaseField::prime(5).unwrap());
        let shift = MatFq::from_fn(&f5, 6, |i, j| (j == (i + 1) % 6) as u32);
        let r = algebra_envelope_dim(&[shift], 2).unwrap();
        assert!(!r.closed);
        assert_eq!(r.dim, 3);
        assert_eq!(r.require_closed(), Err(MatrixError::BudgetExceeded(2)));
    }
}
