//! The coefficient field `F_q = F_p[t]/(m(t))`.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`
//! where `c_i` are the coefficients of the residue polynomial. For `r = 1`
//! the code is simply the residue mod `p`.

use super::{factor, poly, FieldError};

#[derive(Debug, Clone)]
pub struct BaseField {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp/log tables over a fixed generator of F_q^*, only for r > 1
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

/// Largest `q` accepted for `r > 1`; multiplication goes through tables.
pub const MAX_TABLE_ORDER: u64 = 1 << 20;

impl BaseField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !factor::is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        Ok(Self {
            p,
            r: 1,
            q: p,
            modulus: vec![0, 1],
            exp: vec![],
            log: vec![],
        })
    }

    /// `F_p[t]/(modulus)` for a monic irreducible `modulus` of degree `r >= 1`.
    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let prime = Self::prime(p)?;
        let modulus = poly::trim(modulus);
        let r = poly::degree(&modulus).ok_or(FieldError::BadModulus("zero polynomial".into()))? as u32;
        if r == 0 || *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus(format!("{modulus:?} is not monic of positive degree")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(format!("{modulus:?} has entries outside F_{p}")));
        }
        if !poly::is_irreducible(&prime, &modulus) {
            return Err(FieldError::Reducible(format!("{modulus:?} over F_{p}")));
        }
        if r == 1 {
            return Ok(Self { modulus, ..prime });
        }
        let q64 = (p as u64).pow(r);
        if q64 > MAX_TABLE_ORDER {
            return Err(FieldError::TooLarge(q64));
        }
        let q = q64 as u32;
        let mut field = Self {
            p,
            r,
            q,
            modulus,
            exp: vec![],
            log: vec![],
        };
        field.build_tables(&prime)?;
        Ok(field)
    }

    fn poly_mul_code(&self, prime: &BaseField, a: u32, b: u32) -> u32 {
        let pa = self.to_coeffs(a);
        let pb = self.to_coeffs(b);
        let prod = poly::rem(prime, &poly::mul(prime, &pa, &pb), &self.modulus);
        self.from_coeffs(&prod)
    }

    fn build_tables(&mut self, prime: &BaseField) -> Result<(), FieldError> {
        let order = (self.q - 1) as u64;
        let primes = factor::prime_divisors(order)?;
        let pow_code = |f: &Self, g: u32, mut e: u64| {
            let mut acc = 1u32;
            let mut base = g;
            while e > 0 {
                if e & 1 == 1 {
                    acc = f.poly_mul_code(prime, acc, base);
                }
                base = f.poly_mul_code(prime, base, base);
                e >>= 1;
            }
            acc
        };
        let gen = (2..self.q)
            .find(|&g| primes.iter().all(|&l| pow_code(self, g, order / l) != 1))
            .expect("F_q^* is cyclic");
        let mut exp = Vec::with_capacity(self.q as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..order as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = self.poly_mul_code(prime, x, gen);
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus over `F_p`, low-to-high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.r == 1
    }

    pub fn to_coeffs(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.r as usize);
        for _ in 0..self.r {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0u32, |acc, &x| acc * self.p + x % self.p)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.r {
                out += ((a % self.p + b % self.p) % self.p) * place;
                a /= self.p;
                b /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.r == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.r {
                out += ((self.p - a % self.p) % self.p) * place;
                a /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            ((a as u64 * b as u64) % self.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
            self.exp[s as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInversion);
        }
        Ok(if self.r == 1 {
            self.pow(a, self.p as u64 - 2)
        } else {
            let l = self.log[a as usize];
            self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
        })
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// All elements in canonical code order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Bits needed to store one element code.
    pub fn bits_per_element(&self) -> u32 {
        32 - (self.q - 1).leading_zeros()
    }

    /// Human-readable element: the residue for `r = 1`, else the `F_p`
    /// coefficient list low-to-high, comma-separated.
    pub fn format_elem(&self, a: u32) -> String {
        if self.r == 1 {
            a.to_string()
        } else {
            self.to_coeffs(a)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<u32, FieldError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != self.r as usize {
            return Err(FieldError::Parse(format!("expected {} coefficients in {s:?}", self.r)));
        }
        let mut coeffs = Vec::with_capacity(parts.len());
        for part in parts {
            let c: u32 = part.parse().map_err(|_| FieldError::Parse(format!("bad coefficient {part:?}")))?;
            if c >= self.p {
                return Err(FieldError::Parse(format!("coefficient {c} not reduced mod {}", self.p)));
            }
            coeffs.push(c);
        }
        Ok(self.from_coeffs(&coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_arithmetic() {
        // F_9 = F_3[t]/(t^2 + 1); t has code 3
        let f = BaseField::extension(3, vec![1, 0, 1]).unwrap();
        assert_eq!(f.q(), 9);
        let t = f.from_coeffs(&[0, 1]);
        assert_eq!(f.mul(t, t), 2);
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 - 1 over F_3
        assert!(matches!(BaseField::extension(3, vec![2, 0, 1]), Err(FieldError::Reducible(_))));
    }

    #[test]
    fn prime_field_inverse_table() {
        let f = BaseField::prime(13).unwrap();
        for a in 1..13 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), Err(FieldError::ZeroInversion));
    }
}
