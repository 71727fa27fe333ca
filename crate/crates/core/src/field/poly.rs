//! Dense univariate polynomials over a [`BaseField`], coefficients low-to-high.

use super::base::BaseField;

pub type Poly = Vec<u32>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// `None` for the zero polynomial.
pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn mul(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(f: &BaseField, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    let mut quo = vec![0u32; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - db;
        quo[shift] = c;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bc));
        }
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn rem(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    divrem(f, a, b).1
}

/// Monic greatest common divisor (zero if both inputs vanish).
pub fn gcd(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, x)
}

pub fn make_monic(f: &BaseField, a: Poly) -> Poly {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = f.inv(a[d]).expect("nonzero");
            a.into_iter().map(|c| f.mul(c, inv)).collect()
        }
    }
}

pub fn mul_mod(f: &BaseField, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_mod(f: &BaseField, a: &[u32], mut e: u128, m: &[u32]) -> Poly {
    let mut acc = rem(f, &[1], m);
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &base, m);
        }
        base = mul_mod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

/// Ben-Or test: `m` of degree `n` is irreducible iff
/// `gcd(m, t^{q^i} - t) = 1` for `1 <= i <= n/2`.
pub fn is_irreducible(f: &BaseField, m: &[u32]) -> bool {
    let n = match degree(m) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let t: Poly = vec![0, 1];
    let mut x = t.clone();
    for _ in 1..=n / 2 {
        x = pow_mod(f, &x, f.q() as u128, m);
        let g = gcd(f, m, &sub(f, &x, &t));
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Monic polynomial of degree `n` with index `idx` in canonical order: the
/// lower coefficients are the base-`q` digits of `idx`, constant term least
/// significant.
pub fn monic_from_index(f: &BaseField, n: usize, mut idx: u64) -> Poly {
    let q = f.q() as u64;
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..n {
        out.push((idx % q) as u32);
        idx /= q;
    }
    out.push(1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_over_f3() {
        let f = BaseField::prime(3).unwrap();
        assert!(is_irreducible(&f, &[1, 0, 1])); // t^2 + 1
        assert!(is_irreducible(&f, &[2, 1, 1])); // t^2 + t + 2
        assert!(!is_irreducible(&f, &[1, 1, 1])); // (t - 1)^2
        assert!(!is_irreducible(&f, &[0, 0, 1]));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // number of monic irreducibles of degree 3 over F_5 = (125 - 5)/3 = 40
        let f = BaseField::prime(5).unwrap();
        let count = (0..125u64)
            .filter(|&i| is_irreducible(&f, &monic_from_index(&f, 3, i)))
            .count();
        assert_eq!(count, 40);
    }

    #[test]
    fn divrem_reconstructs() {
        let f = BaseField::prime(7).unwrap();
        let a = vec![3, 1, 4, 1, 5, 6];
        let b = vec![2, 0, 3];
        let (q, r) = divrem(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), trim(a));
        assert!(degree(&r).map_or(true, |d| d < 2));
    }
}
