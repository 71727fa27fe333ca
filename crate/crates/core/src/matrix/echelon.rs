use crate::field::BaseField;

/// Incrementally maintained row-echelon basis of a subspace of `F_q^m`.
///
/// Rows are kept with pivot entry 1 and with zeros in the pivot columns of
/// all earlier rows, so reducing against them in insertion order is exact.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after subtracting its projection on the span.
    pub fn reduce(&self, f: &BaseField, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.width);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            if f.is_prime_field() {
                let p = f.p() as u64;
                for (x, &r) in v[piv..].iter_mut().zip(&row[piv..]) {
                    if r != 0 {
                        *x = ((*x as u64 + nc as u64 * r as u64) % p) as u32;
                    }
                }
            } else {
                for (x, &r) in v[piv..].iter_mut().zip(&row[piv..]) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
    }

    pub fn contains(&self, f: &BaseField, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|&c| c == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, f: &BaseField, mut v: Vec<u32>) -> bool {
        self.reduce(f, &mut v);
        let Some(piv) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inv(v[piv]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    /// Rank of a list of vectors.
    pub fn rank_of(f: &BaseField, width: usize, vs: impl IntoIterator<Item = Vec<u32>>) -> usize {
        let mut e = Self::new(width);
        for v in vs {
            e.insert(f, v);
        }
        e.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_membership() {
        let f = BaseField::prime(5).unwrap();
        let mut e = Echelon::new(3);
        assert!(e.insert(&f, vec![1, 2, 3]));
        assert!(e.insert(&f, vec![0, 1, 4]));
        assert!(!e.insert(&f, vec![2, 0, 0]));
        assert!(e.contains(&f, &[2, 4, 1]));
        assert!(e.contains(&f, &[0, 0, 0]));
    }

    #[test]
    fn dependent_vector_rejected() {
        let f = BaseField::prime(7).unwrap();
        let mut e = Echelon::new(4);
        e.insert(&f, vec![1, 1, 0, 0]);
        e.insert(&f, vec![0, 1, 1, 0]);
        assert!(!e.insert(&f, vec![3, 5, 2, 0]));
        assert!(e.insert(&f, vec![0, 0, 0, 6]));
        assert_eq!(e.rank(), 3);
    }
}
