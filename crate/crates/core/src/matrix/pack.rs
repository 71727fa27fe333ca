use std::sync::Arc;

use super::MatFq;
use crate::field::BaseField;

/// Canonical key for a reduced matrix: entries row-major, `b` bits each,
/// least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PackedKey {
    Small(u128),
    Bytes(Vec<u8>),
}

#[derive(Clone, Debug)]
pub struct Packer {
    n: usize,
    bits: u32,
    field: Arc<BaseField>,
}

impl Packer {
    pub fn new(field: &Arc<BaseField>, n: usize) -> Self {
        Self {
            n,
            bits: field.bits_per_element().max(1),
            field: field.clone(),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Total key width in bits.
    pub fn width(&self) -> usize {
        self.n * self.n * self.bits as usize
    }

    pub fn fits_u64(&self) -> bool {
        self.width() <= 64
    }

    pub fn fits_u128(&self) -> bool {
        self.width() <= 128
    }

    pub fn pack(&self, m: &MatFq) -> PackedKey {
        assert_eq!(m.n(), self.n);
        if self.fits_u128() {
            PackedKey::Small(self.pack_u128(m.data()))
        } else {
            PackedKey::Bytes(self.pack_bytes(m.data()))
        }
    }

    pub fn pack_u128(&self, data: &[u32]) -> u128 {
        debug_assert!(self.fits_u128());
        data.iter()
            .rev()
            .fold(0u128, |acc, &c| (acc << self.bits) | c as u128)
    }

    pub fn pack_u64(&self, data: &[u32]) -> u64 {
        debug_assert!(self.fits_u64());
        data.iter().rev().fold(0u64, |acc, &c| (acc << self.bits) | c as u64)
    }

    fn pack_bytes(&self, data: &[u32]) -> Vec<u8> {
        let mut out = vec![0u8; self.width().div_ceil(8)];
        let mut pos = 0usize;
        for &c in data {
            for b in 0..self.bits {
                if c >> b & 1 == 1 {
                    out[pos / 8] |= 1 << (pos % 8);
                }
                pos += 1;
            }
        }
        out
    }

    pub fn unpack_u128(&self, mut key: u128, out: &mut [u32]) {
        let mask = (1u128 << self.bits) - 1;
        for c in out.iter_mut() {
            *c = (key & mask) as u32;
            key >>= self.bits;
        }
    }

    pub fn unpack_u64(&self, mut key: u64, out: &mut [u32]) {
        let mask = (1u64 << self.bits) - 1;
        for c in out.iter_mut() {
            *c = (key & mask) as u32;
            key >>= self.bits;
        }
    }

    pub fn unpack(&self, key: &PackedKey) -> MatFq {
        let mut data = vec![0u32; self.n * self.n];
        match key {
            PackedKey::Small(k) => self.unpack_u128(*k, &mut data),
            PackedKey::Bytes(bytes) => {
                let mut pos = 0usize;
                for c in data.iter_mut() {
                    for b in 0..self.bits {
                        if bytes[pos / 8] >> (pos % 8) & 1 == 1 {
                            *c |= 1 << b;
                        }
                        pos += 1;
                    }
                }
            }
        }
        MatFq::from_vec(&self.field, self.n, data).expect("key decodes to reduced entries")
    }
}

/// Convenience wrapper around [`Packer::pack`].
pub fn pack_key(m: &MatFq) -> PackedKey {
    Packer::new(m.field(), m.n()).pack(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn exhaustive_2x2_over_f5_injective() {
        let f5 = Arc::new(BaseField::prime(5).unwrap());
        let packer = Packer::new(&f5, 2);
        let mut seen = HashSet::new();
        for code in 0..625u32 {
            let data: Vec<u32> = (0..4).map(|i| code / 5u32.pow(i) % 5).collect();
            let m = MatFq::from_vec(&f5, 2, data).unwrap();
            let key = packer.pack(&m);
            assert_eq!(packer.unpack(&key), m);
            assert!(seen.insert(key));
        }
        assert_eq!(seen.len(), 625);
    }

    #[test]
    fn identity_key_is_fixed() {
        let f5 = Arc::new(BaseField::prime(5).unwrap());
        let i = MatFq::identity(&f5, 2);
        // 3 bits per entry: entries 1,0,0,1 at offsets 0 and 9
        assert_eq!(pack_key(&i), PackedKey::Small(1 | 1 << 9));
        assert_eq!(pack_key(&i), pack_key(&i.clone()));
    }

    #[test]
    fn wide_matrices_use_bytes() {
        let f11 = Arc::new(BaseField::prime(11).unwrap());
        let m = MatFq::from_fn(&f11, 20, |i, j| ((i * 7 + j * 3) % 11) as u32);
        let packer = Packer::new(&f11, 20);
        let key = packer.pack(&m);
        assert!(matches!(key, PackedKey::Bytes(_)));
        assert_eq!(packer.unpack(&key), m);
    }

    proptest! {
        #[test]
        fn round_trip_small(v in proptest::collection::vec(0u32..13, 16)) {
            let f13 = Arc::new(BaseField::prime(13).unwrap());
            let m = MatFq::from_vec(&f13, 4, v).unwrap();
            let packer = Packer::new(&f13, 4);
            prop_assert!(packer.fits_u64());
            let mut out = vec![0; 16];
            packer.unpack_u64(packer.pack_u64(m.data()), &mut out);
            prop_assert_eq!(&out[..], m.data());
            prop_assert_eq!(packer.unpack(&packer.pack(&m)), m);
        }

        #[test]
        fn round_trip_bytes(v in proptest::collection::vec(0u32..7, 64)) {
            let f7 = Arc::new(BaseField::prime(7).unwrap());
            let m = MatFq::from_vec(&f7, 8, v).unwrap();
            let packer = Packer::new(&f7, 8);
            prop_assert_eq!(packer.unpack(&packer.pack(&m)), m);
        }
    }
}
