//! Integer factorization for group orders of the form `q^k - 1`.
//!
//! Trial division removes small factors, Pollard rho (Brent variant) splits
//! what remains. Everything is in `u64`; desk-scale orders stay far below
//! `2^64`.

use super::FieldError;

/// Trial division bound before falling back to Pollard rho.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Iteration budget for a single Pollard rho attempt.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 22;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's cycle detection; returns a nontrivial factor or None when the
// budget runs out for every tried constant.
fn pollard_rho(n: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        let mut spent = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization as sorted `(prime, multiplicity)` pairs.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>, FieldError> {
    factorize_with_budget(n, DEFAULT_RHO_BUDGET)
}

pub fn factorize_with_budget(mut n: u64, budget: u64) -> Result<Vec<(u64, u32)>, FieldError> {
    let original = n;
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_BOUND && d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some(entry) => entry.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let f = pollard_rho(m, budget).ok_or(FieldError::FactorizationBudgetExceeded(original))?;
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    Ok(out)
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Result<Vec<u64>, FieldError> {
    Ok(factorize(n)?.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u64) -> Vec<(u64, u32)> {
        let mut out = vec![];
        let mut m = n;
        let mut d = 2;
        while m > 1 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        out
    }

    #[test]
    fn small_numbers_match_brute_force() {
        for n in 2..3000u64 {
            assert_eq!(factorize(n).unwrap(), brute(n), "n = {n}");
        }
    }

    #[test]
    fn large_semiprime_needs_rho() {
        // 1000003 * 1000033, both above the trial bound
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n).unwrap(), vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn field_orders() {
        // 5^7 - 1 = 78124 = 2^2 * 19531
        assert_eq!(factorize(78124).unwrap(), vec![(2, 2), (19531, 1)]);
        let n = 13u64.pow(11) - 1;
        let f = factorize(n).unwrap();
        assert_eq!(f.iter().map(|(p, e)| p.pow(*e)).product::<u64>(), n);
        assert!(f.iter().all(|(p, _)| is_prime(*p)));
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(19531) && is_prime(1_000_000_007));
        assert!(!is_prime(1) && !is_prime(561) && !is_prime(3_215_031_751));
    }
}
