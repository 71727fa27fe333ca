//! Singer elements, self-dual normal bases and multiplication maps.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{factor, ExtElem, FieldDescriptor, FieldError};
use crate::matrix::{Echelon, MatFq, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingerError {
    #[error("not a Singer element: {0}")]
    NotSinger(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("basis is not self-dual: {0}")]
    NotSelfDual(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A trace-orthonormal `F_q`-basis of `F_{q^k}`.
#[derive(Clone, Debug)]
pub struct SelfDualBasis {
    elems: Vec<ExtElem>,
    normal: bool,
    generator: Option<ExtElem>,
    // inverse of the matrix whose columns are the basis coefficient vectors
    to_coords: MatFq,
}

impl SelfDualBasis {
    /// Validates the Gram matrix and precomputes the coordinate map.
    pub fn new(elems: Vec<ExtElem>) -> Result<Self, SingerError> {
        let desc = elems
            .first()
            .ok_or_else(|| SingerError::NotSelfDual("empty basis".into()))?
            .desc()
            .clone();
        let k = desc.k() as usize;
        if elems.len() != k {
            return Err(SingerError::NotSelfDual(format!("{} elements for degree {k}", elems.len())));
        }
        for i in 0..k {
            for j in 0..k {
                let t = (&elems[i] * &elems[j]).trace();
                if t != (i == j) as u32 {
                    return Err(SingerError::NotSelfDual(format!("Tr(b_{} b_{}) = {t}", i + 1, j + 1)));
                }
            }
        }
        let field = desc.base_field().clone();
        let cols = MatFq::from_fn(&field, k, |i, j| elems[j].coeffs()[i]);
        let to_coords = cols.inv()?;
        let generator = elems[0].clone();
        let normal = (0..k).all(|i| elems[(i + 1) % k] == elems[i].frobenius());
        Ok(Self {
            elems,
            normal,
            generator: normal.then_some(generator),
            to_coords,
        })
    }

    /// Normal basis `{b, b^q, ..., b^{q^{k-1}}}` generated by `b`.
    pub fn from_generator(b: &ExtElem) -> Result<Self, SingerError> {
        let k = b.desc().k() as usize;
        let mut elems = vec![b.clone()];
        for _ in 1..k {
            let next = elems.last().unwrap().frobenius();
            elems.push(next);
        }
        Self::new(elems)
    }

    pub fn elems(&self) -> &[ExtElem] {
        &self.elems
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn generator(&self) -> Option<&ExtElem> {
        self.generator.as_ref()
    }

    pub fn desc(&self) -> &Arc<FieldDescriptor> {
        self.elems[0].desc()
    }

    /// `(Tr(b_i b_j))_{i,j}`.
    pub fn gram(&self) -> MatFq {
        let k = self.elems.len();
        MatFq::from_fn(self.desc().base_field(), k, |i, j| (&self.elems[i] * &self.elems[j]).trace())
    }

    /// Coordinates of `x` with respect to the basis, by a linear solve.
    pub fn coords(&self, x: &ExtElem) -> Vec<u32> {
        let f = self.desc().base_field();
        let k = self.elems.len();
        (0..k)
            .map(|i| {
                (0..k).fold(0, |acc, j| f.add(acc, f.mul(self.to_coords.get(i, j), x.coeffs()[j])))
            })
            .collect()
    }
}

/// Matrix of `y -> x y` in the basis: column `j` holds the coordinates of
/// `x b_j`.
pub fn mult_map_matrix(x: &ExtElem, basis: &SelfDualBasis) -> MatFq {
    let k = basis.elems.len();
    let cols: Vec<Vec<u32>> = basis.elems.iter().map(|b| basis.coords(&(x * b))).collect();
    MatFq::from_fn(basis.desc().base_field(), k, |i, j| cols[j][i])
}

/// First self-dual normal basis generator among the powers `g^0, g^1, ...`
/// of the canonical primitive element.
pub fn find_self_dual_normal_basis(desc: &Arc<FieldDescriptor>) -> Result<SelfDualBasis, SingerError> {
    let k = desc.k() as usize;
    let g = desc.find_primitive()?;
    let mut b = desc.one();
    for i in 0..desc.order() - 1 {
        // Tr(b_i b_j) only depends on j - i, so one row of the Gram matrix
        // decides everything.
        let mut conj = b.clone();
        let mut ok = true;
        for d in 0..k {
            if d > 0 {
                conj = conj.frobenius();
            }
            if (&b * &conj).trace() != (d == 0) as u32 {
                ok = false;
                break;
            }
        }
        if ok {
            log::debug!("self-dual normal generator g^{i}");
            return SelfDualBasis::from_generator(&b);
        }
        b = &b * &g;
    }
    Err(SingerError::SearchExhausted(format!("no self-dual normal basis of F_{}^{k}", desc.q())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingerCertificate {
    pub k: usize,
    /// `(l, S^{(q^k-1)/l} != I)` for every prime `l | q^k - 1`.
    pub order_divisor_checks: Vec<(u64, bool)>,
    pub full_order_is_identity: bool,
    /// Dimension of `{X : SX = XS}` when requested.
    pub centralizer_dim: Option<usize>,
}

impl SingerCertificate {
    pub fn is_valid(&self) -> bool {
        self.full_order_is_identity
            && self.order_divisor_checks.iter().all(|&(_, ok)| ok)
            && self.centralizer_dim.map_or(true, |d| d == self.k)
    }
}

/// Certificate that `S` has order exactly `q^k - 1`, where `k` is its size.
pub fn singer_certificate(s: &MatFq, check_centralizer: bool) -> Result<SingerCertificate, SingerError> {
    let k = s.n();
    let q = s.field().q() as u64;
    let order = q
        .checked_pow(k as u32)
        .ok_or(FieldError::TooLarge(u64::MAX))?
        - 1;
    let checks = factor::prime_divisors(order)?
        .into_iter()
        .map(|l| (l, !s.pow(order / l).is_identity()))
        .collect();
    Ok(SingerCertificate {
        k,
        order_divisor_checks: checks,
        full_order_is_identity: s.pow(order).is_identity(),
        centralizer_dim: check_centralizer.then(|| centralizer_dim(s)),
    })
}

/// Like [`singer_certificate`] but fails with the first violated check.
pub fn verify_singer(s: &MatFq, check_centralizer: bool) -> Result<SingerCertificate, SingerError> {
    let cert = singer_certificate(s, check_centralizer)?;
    if !cert.full_order_is_identity {
        return Err(SingerError::NotSinger("S^(q^k-1) != I".into()));
    }
    if let Some(&(l, _)) = cert.order_divisor_checks.iter().find(|(_, ok)| !ok) {
        return Err(SingerError::NotSinger(format!("S^((q^k-1)/{l}) = I")));
    }
    if let Some(d) = cert.centralizer_dim.filter(|&d| d != cert.k) {
        return Err(SingerError::NotSinger(format!("centralizer has dimension {d}")));
    }
    Ok(cert)
}

/// Dimension of the solution space of `SX = XS`.
pub fn centralizer_dim(s: &MatFq) -> usize {
    let k = s.n();
    let f = s.field();
    let images = (0..k * k).map(|idx| {
        let e = MatFq::unit(f, k, idx / k, idx % k);
        (&(s * &e) - &(&e * s)).data().to_vec()
    });
    k * k - Echelon::rank_of(f, k * k, images)
}

/// Whether some simultaneous row/column permutation makes `S` block
/// diagonal with at least two blocks, i.e. the support graph is disconnected.
pub fn is_permutation_block_diagonal(s: &MatFq) -> bool {
    let n = s.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && (s.get(i, j) != 0 || s.get(j, i) != 0) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().any(|&v| !v)
}

/// Whether `t` lies in `F_q[S] = span{I, S, ..., S^{k-1}}`.
pub fn membership_in_poly_algebra(t: &MatFq, s: &MatFq) -> bool {
    let k = s.n();
    let f = s.field();
    let mut span = Echelon::new(k * k);
    let mut power = MatFq::identity(f, k);
    for _ in 0..k {
        span.insert(f, power.data().to_vec());
        power = &power * s;
    }
    span.contains(f, t.data())
}

/// Primitive elements `g^j` with `gcd(j, q^k - 1) = 1`, in increasing `j`,
/// paired with `Tr(g^j b_1^2)`.
pub fn primitive_trace_scan(basis: &SelfDualBasis) -> Result<impl Iterator<Item = (u64, ExtElem, u32)> + '_, SingerError> {
    let desc = basis.desc();
    let g = desc.find_primitive()?;
    let order = desc.order() - 1;
    let primes = desc.order_primes().to_vec();
    let b1sq = &basis.elems[0] * &basis.elems[0];
    let mut current = desc.one();
    Ok((1..=order).filter_map(move |j| {
        current = &current * &g;
        if primes.iter().any(|&l| j % l == 0) {
            return None;
        }
        let t = (&current * &b1sq).trace();
        Some((j, current.clone(), t))
    }))
}

/// First primitive `λ` in the scan with `Tr(λ b_1^2) != 0`.
pub fn find_lambda_trace_nonzero(basis: &SelfDualBasis) -> Result<ExtElem, SingerError> {
    for (j, lambda, t) in primitive_trace_scan(basis)? {
        if t != 0 {
            return Ok(lambda);
        }
        log::debug!("skipping g^{j}: Tr(lambda b1^2) = 0");
    }
    Err(SingerError::SearchExhausted("no primitive element with nonzero trace".into()))
}

/// First primitive `λ` with `Tr(λ b_1^2) = 0`, used for negative controls.
pub fn find_lambda_trace_zero(basis: &SelfDualBasis) -> Result<ExtElem, SingerError> {
    primitive_trace_scan(basis)?
        .find(|(_, _, t)| *t == 0)
        .map(|(_, l, _)| l)
        .ok_or_else(|| SingerError::SearchExhausted("every primitive element has nonzero trace".into()))
}

/// Companion matrix of a monic polynomial (coefficients low-to-high).
pub fn companion(desc: &FieldDescriptor, poly: &[u32]) -> MatFq {
    let k = poly.len() - 1;
    let f = desc.base_field();
    MatFq::from_fn(f, k, |i, j| {
        if j == k - 1 {
            f.neg(poly[i])
        } else {
            (i == j + 1) as u32
        }
    })
}
