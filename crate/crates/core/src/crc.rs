//! Bit-serial CRC over GF(2), most significant coefficient first.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Generator `g(D) = D^24 + D^23 + D^6 + D^5 + D + 1` without its leading term.
pub const CRC24_POLY: u64 = 0x80_0063;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrcConfig {
    pub degree: u32,
    /// Coefficients of `g(D)` below the leading term, bit `j` ↔ `D^j`.
    #[serde(with = "hex_poly")]
    pub poly: u64,
    #[serde(default)]
    pub init: u64,
    #[serde(default)]
    pub reflect: bool,
}

impl Default for CrcConfig {
    fn default() -> Self {
        Self {
            degree: 24,
            poly: CRC24_POLY,
            init: 0,
            reflect: false,
        }
    }
}

impl CrcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 || self.degree > 63 {
            return Err(Error::InvalidCrc("degree must be in 1..=63"));
        }
        if self.poly & 1 == 0 {
            return Err(Error::InvalidCrc("polynomial must have a +1 term"));
        }
        if self.poly >> self.degree != 0 || self.init >> self.degree != 0 {
            return Err(Error::InvalidCrc("poly/init wider than the degree"));
        }
        if self.reflect {
            return Err(Error::InvalidCrc("reflected CRCs are not supported"));
        }
        Ok(())
    }

    fn mask(&self) -> u64 {
        (1u64 << self.degree) - 1
    }

    /// Remainder of `bits(D) · D^degree` mod `g(D)`.
    pub fn remainder(&self, bits: &[u8]) -> u64 {
        let top = self.degree - 1;
        let mut reg = self.init;
        for &b in bits {
            let feedback = ((reg >> top) as u8 ^ b) & 1;
            reg = (reg << 1) & self.mask();
            if feedback == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }
}

/// `payload` followed by its `degree` parity bits.
pub fn crc_append(payload: &[u8], cfg: &CrcConfig) -> Vec<u8> {
    let rem = cfg.remainder(payload);
    let mut out = payload.to_vec();
    out.extend((0..cfg.degree).rev().map(|j| ((rem >> j) & 1) as u8));
    out
}

/// Whether `frame` is divisible by `g(D)`.
pub fn crc_check(frame: &[u8], cfg: &CrcConfig) -> Result<bool> {
    let degree = cfg.degree as usize;
    if frame.len() <= degree {
        return Err(Error::CrcPayloadTooShort {
            payload: frame.len(),
            degree: cfg.degree,
        });
    }
    // g has a +1 term, so D^degree is invertible mod g.
    Ok(cfg.remainder(frame) == 0)
}

mod hex_poly {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:#x}"))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(v),
            Repr::Str(s) => {
                let digits = s
                    .strip_prefix("0x")
                    .or_else(|| s.strip_prefix("0X"))
                    .ok_or_else(|| de::Error::custom("polynomial string must start with 0x"))?;
                u64::from_str_radix(digits, 16).map_err(de::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Long division of `payload · D^deg` by `g`, on explicit coefficient
    /// vectors (index 0 = highest power).
    fn long_division(payload: &[u8], exponents: &[u32]) -> Vec<u8> {
        let deg = *exponents.iter().max().unwrap() as usize;
        let mut g = vec![0u8; deg + 1];
        for &e in exponents {
            g[deg - e as usize] = 1;
        }
        let mut dividend = payload.to_vec();
        dividend.extend(std::iter::repeat_n(0, deg));
        for i in 0..payload.len() {
            if dividend[i] == 1 {
                for j in 0..=deg {
                    dividend[i + j] ^= g[j];
                }
            }
        }
        dividend[payload.len()..].to_vec()
    }

    const G_EXPONENTS: [u32; 6] = [24, 23, 6, 5, 1, 0];

    fn lcg_bits(seed: u64, len: usize) -> Vec<u8> {
        let mut s = seed;
        (0..len)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 62) as u8 & 1
            })
            .collect()
    }

    #[test]
    fn poly_mask_from_exponents() {
        let mask = G_EXPONENTS
            .iter()
            .filter(|&&e| e < 24)
            .fold(0u64, |m, &e| m | (1 << e));
        assert_eq!(mask, CRC24_POLY);
        assert_eq!(CRC24_POLY, 0x800063);
        assert!(CrcConfig::default().validate().is_ok());
    }

    #[test]
    fn append_golden_vectors() {
        let cfg = CrcConfig::default();
        assert_eq!(crc_append(&[0; 40], &cfg)[40..], [0u8; 24]);

        let mut payload = vec![0u8; 24];
        payload[0] = 1;
        let frame = crc_append(&payload, &cfg);
        assert_eq!(frame[24..], long_division(&payload, &G_EXPONENTS)[..]);

        for seed in 0..50 {
            let p = lcg_bits(seed, 104);
            assert_eq!(crc_append(&p, &cfg)[104..], long_division(&p, &G_EXPONENTS)[..]);
        }
    }

    #[test]
    fn roundtrip_and_single_errors() {
        let cfg = CrcConfig::default();
        for seed in 0..1000 {
            let frame = crc_append(&lcg_bits(seed, 104), &cfg);
            assert!(crc_check(&frame, &cfg).unwrap());
        }
        let frame = crc_append(&lcg_bits(99, 104), &cfg);
        for i in 0..frame.len() {
            let mut bad = frame.clone();
            bad[i] ^= 1;
            assert!(!crc_check(&bad, &cfg).unwrap(), "flip at {i} undetected");
        }
        assert!(crc_check(&[0; 24], &cfg).is_err());
    }

    #[test]
    fn random_frames_are_rarely_accepted() {
        let cfg = CrcConfig::default();
        let accepted = (0..20_000u64)
            .filter(|&s| crc_check(&lcg_bits(s ^ 0xABCD, 128), &cfg).unwrap())
            .count();
        // Expected 20_000 / 2^24 ≈ 0.001.
        assert!(accepted <= 1);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = CrcConfig { poly: 0x800062, ..CrcConfig::default() };
        assert!(cfg.validate().is_err());
        cfg = CrcConfig { reflect: true, ..CrcConfig::default() };
        assert!(cfg.validate().is_err());
        cfg = CrcConfig { degree: 0, ..CrcConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_json_uses_hex() {
        let s = serde_json::to_string(&CrcConfig::default()).unwrap();
        assert!(s.contains("\"0x800063\""));
        let back: CrcConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, CrcConfig::default());
        let from_int: CrcConfig = serde_json::from_str(r#"{"degree":24,"poly":8388707}"#).unwrap();
        assert_eq!(from_int, CrcConfig::default());
    }

    proptest! {
        #[test]
        fn crc_is_linear(p in proptest::collection::vec(0u8..2, 1..200), seed in any::<u64>()) {
            let cfg = CrcConfig::default();
            let q = lcg_bits(seed, p.len());
            let sum: Vec<u8> = p.iter().zip(&q).map(|(a, b)| a ^ b).collect();
            prop_assert_eq!(cfg.remainder(&sum), cfg.remainder(&p) ^ cfg.remainder(&q));
        }
    }
}
