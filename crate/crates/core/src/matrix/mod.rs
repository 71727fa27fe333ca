//! Dense square matrices over `F_q`.

mod echelon;
mod envelope;
mod pack;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{BaseField, FieldError};

pub use echelon::Echelon;
pub use envelope::{algebra_envelope_dim, EnvelopeResult, DEFAULT_WORD_BUDGET};
pub use pack::{pack_key, PackedKey, Packer};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("envelope did not close within {0} levels")]
    BudgetExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone)]
pub struct MatFq {
    n: usize,
    data: Vec<u32>,
    field: Arc<BaseField>,
}

impl PartialEq for MatFq {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.data == other.data && *self.field == *other.field
    }
}

impl Eq for MatFq {}

impl Hash for MatFq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFq {}x{} over F_{}:", self.n, self.n, self.field.q())?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|c| format!("{c:>3}")).collect();
            writeln!(f, "  [{}]", row.join(""))?;
        }
        Ok(())
    }
}

impl MatFq {
    pub fn zeros(field: &Arc<BaseField>, n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
            field: field.clone(),
        }
    }

    pub fn identity(field: &Arc<BaseField>, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: &Arc<BaseField>, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diag(field: &Arc<BaseField>, d: &[u32]) -> Self {
        let mut m = Self::zeros(field, d.len());
        for (i, &c) in d.iter().enumerate() {
            m.data[i * d.len() + i] = c;
        }
        m
    }

    /// Row-major entries; every entry must be a valid `F_q` code.
    pub fn from_vec(field: &Arc<BaseField>, n: usize, data: Vec<u32>) -> Result<Self, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::DimensionMismatch(format!("{} entries for {n}x{n}", data.len())));
        }
        if let Some(&c) = data.iter().find(|&&c| c >= field.q()) {
            return Err(MatrixError::Parse(format!("entry {c} outside F_{}", field.q())));
        }
        Ok(Self {
            n,
            data,
            field: field.clone(),
        })
    }

    /// Rows of signed integers, reduced mod `p` (prime-field embedding).
    pub fn from_int_rows(field: &Arc<BaseField>, rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(field, n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (j, &c) in row.iter().enumerate() {
                m.data[i * n + j] = field.from_int(c);
            }
        }
        m
    }

    pub fn from_fn(field: &Arc<BaseField>, n: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<BaseField> {
        &self.field
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, c: u32) {
        debug_assert!(c < self.field.q());
        self.data[i * self.n + j] = c;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == (i == j) as u32))
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<u32> {
        let c = self.get(0, 0);
        (*self == Self::scalar(&self.field, self.n, c)).then_some(c)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    fn check_compat(&self, other: &Self) -> Result<(), MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        if !Arc::ptr_eq(&self.field, &other.field) && *self.field != *other.field {
            return Err(MatrixError::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compat(other)?;
        let f = &self.field;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
            field: self.field.clone(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compat(other)?;
        let n = self.n;
        let f = &*self.field;
        let mut out = vec![0u32; n * n];
        if f.is_prime_field() && f.p() < 1 << 16 {
            let p = f.p() as u64;
            let mut acc = vec![0u64; n];
            for i in 0..n {
                acc.iter_mut().for_each(|a| *a = 0);
                for l in 0..n {
                    let a = self.data[i * n + l] as u64;
                    if a == 0 {
                        continue;
                    }
                    let row = &other.data[l * n..(l + 1) * n];
                    for (s, &b) in acc.iter_mut().zip(row) {
                        *s += a * b as u64;
                    }
                }
                for j in 0..n {
                    out[i * n + j] = (acc[j] % p) as u32;
                }
            }
        } else {
            for i in 0..n {
                for l in 0..n {
                    let a = self.data[i * n + l];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let v = f.mul(a, other.data[l * n + j]);
                        out[i * n + j] = f.add(out[i * n + j], v);
                    }
                }
            }
        }
        Ok(Self {
            n,
            data: out,
            field: self.field.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self {
            n: self.n,
            data: self.data.iter().map(|&c| f.neg(c)).collect(),
            field: self.field.clone(),
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = &self.field;
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| f.mul(x, c)).collect(),
            field: self.field.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.n, |i, j| self.get(j, i))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(&self.field, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Row reduction on a copy; returns (echelon form, rank, determinant
    /// factor). The determinant is only meaningful when rank is full.
    fn eliminate(&self, mut aug: Option<&mut Vec<u32>>) -> (usize, u32) {
        let n = self.n;
        let f = &*self.field;
        let mut a = self.data.clone();
        let mut det = 1u32;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| a[r * n + col] != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    a.swap(piv * n + j, rank * n + j);
                }
                if let Some(b) = aug.as_deref_mut() {
                    for j in 0..n {
                        b.swap(piv * n + j, rank * n + j);
                    }
                }
                det = f.neg(det);
            }
            let pv = a[rank * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("nonzero pivot");
            for j in 0..n {
                a[rank * n + j] = f.mul(a[rank * n + j], pinv);
            }
            if let Some(b) = aug.as_deref_mut() {
                for j in 0..n {
                    b[rank * n + j] = f.mul(b[rank * n + j], pinv);
                }
            }
            for r in 0..n {
                if r == rank {
                    continue;
                }
                let c = a[r * n + col];
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(c, a[rank * n + j]));
                }
                if let Some(b) = aug.as_deref_mut() {
                    for j in 0..n {
                        b[r * n + j] = f.sub(b[r * n + j], f.mul(c, b[rank * n + j]));
                    }
                }
            }
            rank += 1;
        }
        (rank, if rank == n { det } else { 0 })
    }

    pub fn det(&self) -> u32 {
        self.eliminate(None).1
    }

    pub fn rank(&self) -> usize {
        self.eliminate(None).0
    }

    pub fn inv(&self) -> Result<Self, MatrixError> {
        let mut b = Self::identity(&self.field, self.n).data;
        let (rank, _) = self.eliminate(Some(&mut b));
        if rank < self.n {
            return Err(MatrixError::SingularMatrix);
        }
        Ok(Self {
            n: self.n,
            data: b,
            field: self.field.clone(),
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// `k x k` block at block position `(bi, bj)` (zero-based).
    pub fn block(&self, k: usize, bi: usize, bj: usize) -> Self {
        Self::from_fn(&self.field, k, |i, j| self.get(bi * k + i, bj * k + j))
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, b: &Self) {
        let k = b.n;
        for i in 0..k {
            for j in 0..k {
                self.data[(bi * k + i) * self.n + bj * k + j] = b.get(i, j);
            }
        }
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        Self::from_fn(&self.field, n, |i, j| match (i < self.n, j < self.n) {
            (true, true) => self.get(i, j),
            (false, false) => other.get(i - self.n, j - self.n),
            _ => 0,
        })
    }

    /// Leading `m x m` principal submatrix.
    pub fn truncate(&self, m: usize) -> Self {
        Self::from_fn(&self.field, m, |i, j| self.get(i, j))
    }

    /// Single-entry matrix `E_{i,j}` (zero-based) of size `n`.
    pub fn unit(field: &Arc<BaseField>, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n);
        m.data[i * n + j] = 1;
        m
    }

    /// Text form: first line `n p r`, then `n` rows of whitespace-separated
    /// entries (comma-separated `F_p` coefficients when `r > 1`).
    pub fn to_text(&self) -> String {
        let f = &self.field;
        let mut s = format!("{} {} {}\n", self.n, f.p(), f.r());
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|&c| f.format_elem(c)).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(field: &Arc<BaseField>, text: &str) -> Result<Self, MatrixError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let head = lines.next().ok_or_else(|| MatrixError::Parse("empty matrix text".into()))?;
        let nums: Vec<usize> = head
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| MatrixError::Parse(format!("bad header {head:?}"))))
            .collect::<Result<_, _>>()?;
        let [n, p, r] = nums[..] else {
            return Err(MatrixError::Parse(format!("header {head:?} needs three fields")));
        };
        if p != field.p() as usize || r != field.r() as usize {
            return Err(MatrixError::Parse(format!("header {head:?} does not match F_{}", field.q())));
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| MatrixError::Parse(format!("missing row {i}")))?;
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|e| field.parse_elem(e))
                .collect::<Result<_, _>>()?;
            if row.len() != n {
                return Err(MatrixError::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            data.extend(row);
        }
        if lines.next().is_some() {
            return Err(MatrixError::Parse("trailing rows".into()));
        }
        Self::from_vec(field, n, data)
    }
}

impl<'a> std::ops::Mul for &'a MatFq {
    type Output = MatFq;
    fn mul(self, rhs: Self) -> MatFq {
        self.try_mul(rhs).expect("incompatible matrices")
    }
}

impl<'a> std::ops::Add for &'a MatFq {
    type Output = MatFq;
    fn add(self, rhs: Self) -> MatFq {
        self.try_add(rhs).expect("incompatible matrices")
    }
}

impl<'a> std::ops::Sub for &'a MatFq {
    type Output = MatFq;
    fn sub(self, rhs: Self) -> MatFq {
        self.try_sub(rhs).expect("incompatible matrices")
    }
}

/// Which product or scalar to compute in [`mat_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatOp {
    Mul,
    Add,
    Inv,
    Det,
    Transpose,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatValue {
    Matrix(MatFq),
    Scalar(u32),
}

/// Dispatching entry point; `b` is ignored for unary operations.
pub fn mat_arith(a: &MatFq, b: Option<&MatFq>, op: MatOp) -> Result<MatValue, MatrixError> {
    let need_b = || b.ok_or_else(|| MatrixError::DimensionMismatch("missing second operand".into()));
    Ok(match op {
        MatOp::Mul => MatValue::Matrix(a.try_mul(need_b()?)?),
        MatOp::Add => MatValue::Matrix(a.try_add(need_b()?)?),
        MatOp::Inv => MatValue::Matrix(a.inv()?),
        MatOp::Det => MatValue::Scalar(a.det()),
        MatOp::Transpose => MatValue::Matrix(a.transpose()),
    })
}

/// `[g, h] = g^{-1} h^{-1} g h`.
pub fn commutator(g: &MatFq, h: &MatFq) -> Result<MatFq, MatrixError> {
    g.check_compat(h)?;
    let gi = g.inv()?;
    let hi = h.inv()?;
    Ok(&(&(&gi * &hi) * g) * h)
}

/// `[g_1, ..., g_n] = [[g_1, ..., g_{n-1}], g_n]`.
pub fn nested_commutator(gs: &[&MatFq]) -> Result<MatFq, MatrixError> {
    let (first, rest) = gs
        .split_first()
        .ok_or_else(|| MatrixError::DimensionMismatch("empty commutator".into()))?;
    let mut acc = (*first).clone();
    for g in rest {
        acc = commutator(&acc, g)?;
    }
    Ok(acc)
}

/// Assemble a 4x4 grid of `k x k` blocks, row-major.
pub fn block4(blocks: &[MatFq]) -> Result<MatFq, MatrixError> {
    if blocks.len() != 16 {
        return Err(MatrixError::DimensionMismatch(format!("{} blocks, expected 16", blocks.len())));
    }
    let k = blocks[0].n;
    for b in blocks {
        blocks[0].check_compat(b)?;
    }
    let mut m = MatFq::zeros(&blocks[0].field, 4 * k);
    for (idx, b) in blocks.iter().enumerate() {
        m.set_block(idx / 4, idx % 4, b);
    }
    Ok(m)
}

/// Inverse of [`block4`].
pub fn unblock4(m: &MatFq) -> Result<Vec<MatFq>, MatrixError> {
    if m.n % 4 != 0 {
        return Err(MatrixError::DimensionMismatch(format!("{} not divisible by 4", m.n)));
    }
    let k = m.n / 4;
    Ok((0..16).map(|idx| m.block(k, idx / 4, idx % 4)).collect())
}

/// Standard form `Ω_n = [[0, -I_n], [I_n, 0]]` of size `2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
    omega: MatFq,
}

impl SymplecticForm {
    pub fn standard(field: &Arc<BaseField>, n: usize) -> Self {
        let omega = MatFq::from_fn(field, 2 * n, |i, j| {
            if i < n && j == i + n {
                field.neg(1)
            } else if i >= n && j + n == i {
                1
            } else {
                0
            }
        });
        Self { n, omega }
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &MatFq {
        &self.omega
    }

    /// `X^t Ω X == Ω`.
    pub fn preserves(&self, x: &MatFq) -> Result<bool, MatrixError> {
        if x.n != 2 * self.n {
            return Err(MatrixError::DimensionMismatch(format!("{} vs form of size {}", x.n, 2 * self.n)));
        }
        Ok(&(&x.transpose() * &self.omega) * x == self.omega)
    }
}

pub fn is_symplectic(x: &MatFq, form: &SymplecticForm) -> Result<bool, MatrixError> {
    form.preserves(x)
}

/// Order of a finite group of matrices of size `n` over `F_q`, if it fits.
pub fn sl_order(n: u32, q: u64) -> Option<u128> {
    let q = q as u128;
    let mut acc = q.checked_pow(n * (n - 1) / 2)?;
    for i in 2..=n {
        acc = acc.checked_mul(q.checked_pow(i)? - 1)?;
    }
    Some(acc)
}

/// `|Sp_{2m}(F_q)|`.
pub fn sp_order(m: u32, q: u64) -> Option<u128> {
    let q = q as u128;
    let mut acc = q.checked_pow(m * m)?;
    for i in 1..=m {
        acc = acc.checked_mul(q.checked_pow(2 * i)? - 1)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> Arc<BaseField> {
        Arc::new(BaseField::prime(p).unwrap())
    }

    fn random_mat(field: &Arc<BaseField>, n: usize, seed: &[u32]) -> MatFq {
        MatFq::from_fn(field, n, |i, j| seed[(i * n + j) % seed.len()] % field.q())
    }

    #[test]
    fn identity_inverse() {
        let f5 = f(5);
        let i = MatFq::identity(&f5, 4);
        assert_eq!(i.inv().unwrap(), i);
    }

    #[test]
    fn inverse_of_two_i() {
        let f5 = f(5);
        assert_eq!(MatFq::scalar(&f5, 3, 2).inv().unwrap(), MatFq::scalar(&f5, 3, 3));
    }

    #[test]
    fn det_of_commutator_target() {
        let f7 = f(7);
        let m = MatFq::diag(&f7, &[3, 5, 1, 1, 1]);
        assert_eq!(m.det(), 1);
    }

    #[test]
    fn singular_inverse_fails() {
        let f5 = f(5);
        let m = MatFq::from_int_rows(&f5, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.inv(), Err(MatrixError::SingularMatrix));
        assert_eq!(m.det(), 0);
        assert_eq!(m.rank(), 1);
        assert!(matches!(mat_arith(&m, None, MatOp::Inv), Err(MatrixError::SingularMatrix)));
    }

    #[test]
    fn det_matches_permutation_expansion() {
        // 3x3 Leibniz formula as an oracle
        let f7 = f(7);
        let m = MatFq::from_int_rows(&f7, &[vec![1, 2, 3], vec![4, 5, 6], vec![0, 1, 5]]);
        let g = |i: usize, j: usize| m.get(i, j) as i64;
        let leibniz = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
            + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
        assert_eq!(m.det(), f7.from_int(leibniz));
    }

    #[test]
    fn commutator_with_identity() {
        let f5 = f(5);
        let g = MatFq::from_int_rows(&f5, &[vec![1, 1], vec![0, 1]]);
        let i = MatFq::identity(&f5, 2);
        assert!(commutator(&g, &i).unwrap().is_identity());
    }

    #[test]
    fn commutator_convention() {
        // [g,h] = g^-1 h^-1 g h for unipotent 2x2 over F_5
        let f5 = f(5);
        let g = MatFq::from_int_rows(&f5, &[vec![1, 1], vec![0, 1]]);
        let h = MatFq::from_int_rows(&f5, &[vec![1, 0], vec![1, 1]]);
        let gi = MatFq::from_int_rows(&f5, &[vec![1, -1], vec![0, 1]]);
        let hi = MatFq::from_int_rows(&f5, &[vec![1, 0], vec![-1, 1]]);
        let expect = &(&(&gi * &hi) * &g) * &h;
        assert_eq!(commutator(&g, &h).unwrap(), expect);
        assert_eq!(expect, MatFq::from_int_rows(&f5, &[vec![3, 1], vec![-1, 0]]));
    }

    #[test]
    fn nested_folds_left() {
        let f5 = f(5);
        let a = MatFq::from_int_rows(&f5, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let b = MatFq::from_int_rows(&f5, &[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let c = MatFq::from_int_rows(&f5, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]);
        let manual = commutator(&commutator(&a, &b).unwrap(), &c).unwrap();
        assert_eq!(nested_commutator(&[&a, &b, &c]).unwrap(), manual);
    }

    #[test]
    fn block4_identity_and_roundtrip() {
        let f5 = f(5);
        let k = 3;
        let z = MatFq::zeros(&f5, k);
        let i = MatFq::identity(&f5, k);
        let grid: Vec<MatFq> = (0..16).map(|idx| if idx % 5 == 0 { i.clone() } else { z.clone() }).collect();
        assert!(block4(&grid).unwrap().is_identity());
        let grid: Vec<MatFq> = (0..16u32).map(|s| random_mat(&f5, k, &[s, s * 3 + 1, 7, s + 2])).collect();
        assert_eq!(unblock4(&block4(&grid).unwrap()).unwrap(), grid);
        let bad: Vec<MatFq> = grid[..15].to_vec();
        assert!(matches!(block4(&bad), Err(MatrixError::DimensionMismatch(_))));
    }

    #[test]
    fn symplectic_examples() {
        let f5 = f(5);
        let form = SymplecticForm::standard(&f5, 2);
        assert!(is_symplectic(&MatFq::identity(&f5, 4), &form).unwrap());
        // scaling one coordinate breaks the form
        assert!(!is_symplectic(&MatFq::diag(&f5, &[2, 1, 1, 1]), &form).unwrap());
        // diag(2, 1, 3, 1) compensates: 2*3 = 1
        assert!(is_symplectic(&MatFq::diag(&f5, &[2, 1, 3, 1]), &form).unwrap());
        assert!(form.matrix().transpose() == form.matrix().neg());
        assert!(is_symplectic(&MatFq::identity(&f5, 3), &form).is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(sl_order(2, 5), Some(120));
        assert_eq!(sp_order(2, 5), Some(9_360_000));
        assert_eq!(sp_order(1, 7), sl_order(2, 7));
    }

    #[test]
    fn text_round_trip() {
        let f5 = f(5);
        let m = random_mat(&f5, 3, &[1, 4, 2, 3, 0, 9, 8]);
        assert_eq!(MatFq::from_text(&f5, &m.to_text()).unwrap(), m);
        let f9 = Arc::new(BaseField::extension(3, vec![1, 0, 1]).unwrap());
        let m9 = random_mat(&f9, 2, &[1, 4, 8, 5]);
        let text = m9.to_text();
        assert!(text.starts_with("2 3 2\n"));
        assert_eq!(MatFq::from_text(&f9, &text).unwrap(), m9);
        assert!(MatFq::from_text(&f5, "2 5 1\n1 2\n3").is_err());
        assert!(MatFq::from_text(&f5, "2 7 1\n1 2\n3 4").is_err());
    }

    fn invertible(field: &Arc<BaseField>, n: usize) -> impl Strategy<Value = MatFq> {
        let field = field.clone();
        proptest::collection::vec(0..field.q(), n * n)
            .prop_map(move |v| MatFq::from_vec(&field, n, v).unwrap())
            .prop_filter("invertible", |m| m.is_invertible())
    }

    proptest! {
        #[test]
        fn inverse_and_det_laws(a in invertible(&f(7), 4), b in invertible(&f(7), 4)) {
            let f7 = a.field().clone();
            let ab = &a * &b;
            prop_assert_eq!(ab.inv().unwrap(), &b.inv().unwrap() * &a.inv().unwrap());
            prop_assert_eq!(ab.det(), f7.mul(a.det(), b.det()));
            prop_assert!((&a * &a.inv().unwrap()).is_identity());
        }

        #[test]
        fn commutator_inverse_is_swap(a in invertible(&f(5), 3), b in invertible(&f(5), 3)) {
            let gh = commutator(&a, &b).unwrap();
            prop_assert!((&gh * &commutator(&b, &a).unwrap()).is_identity());
        }

        #[test]
        fn extension_field_inverse(a in invertible(&Arc::new(BaseField::extension(5, vec![2, 0, 1]).unwrap()), 3)) {
            prop_assert!((&a.inv().unwrap() * &a).is_identity());
        }
    }
}
