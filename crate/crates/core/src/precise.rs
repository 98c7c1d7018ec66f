//! Thin arbitrary-precision layer over astro-float.

use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Precision and constant cache for one evaluation.
pub struct Precise {
    pub bits: usize,
    cc: Consts,
}

impl Precise {
    pub fn new(bits: usize) -> Result<Self> {
        if bits < 53 {
            return Err(Error::InvalidParameter("precision must be at least 53 bits".into()));
        }
        let cc = Consts::new().map_err(|_| Error::Numerical("astro-float constant cache".into()))?;
        Ok(Precise { bits, cc })
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, RM, &mut self.cc)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, RM, &mut self.cc)
    }

    /// π·num/den.
    pub fn pi_frac(&mut self, num: i64, den: i64) -> BigFloat {
        let pi = self.pi();
        self.div(&self.mul(&pi, &self.int(num)), &self.int(den))
    }
}

/// Nearest integer and the distance to it.
pub fn round_to_integer(x: &BigFloat) -> Result<(BigInt, f64)> {
    if x.is_nan() || x.is_inf() {
        return Err(Error::Numerical("non-finite value".into()));
    }
    if x.is_zero() {
        return Ok((BigInt::from(0), 0.0));
    }
    let (words, _, sign, e, _) = x
        .as_raw_parts()
        .ok_or_else(|| Error::Numerical("no raw parts".into()))?;
    // value = 0.m × 2^e, m held little-endian over `words`
    let digits: Vec<u32> = words
        .iter()
        .flat_map(|w| {
            let w = *w as u64;
            if core::mem::size_of::<Word>() == 8 {
                [w as u32, (w >> 32) as u32].to_vec()
            } else {
                [w as u32].to_vec()
            }
        })
        .collect();
    let m = BigUint::new(digits);
    let width = (words.len() * core::mem::size_of::<Word>() * 8) as i64;
    let shift = e as i64 - width;
    let (int, frac) = if shift >= 0 {
        (m << shift as usize, 0.0)
    } else {
        let s = (-shift) as usize;
        let whole = &m >> s;
        let rest = &m - (&whole << s);
        // fraction = rest / 2^s, as f64
        let frac = fraction_f64(&rest, s);
        if frac >= 0.5 {
            (whole + 1u32, 1.0 - frac)
        } else {
            (whole, frac)
        }
    };
    let int = BigInt::from(int);
    let residual = if shift >= 0 { 0.0 } else { frac };
    Ok((if sign == Sign::Neg { -int } else { int }, residual))
}

fn fraction_f64(rest: &BigUint, s: usize) -> f64 {
    let bits = rest.bits() as usize;
    if bits == 0 {
        return 0.0;
    }
    // keep the top 64 bits
    let drop = bits.saturating_sub(64);
    let top = (rest >> drop).iter_u64_digits().next().unwrap_or(0);
    libm::ldexp(top as f64, drop as i32 - s as i32)
}

/// Decimal-ish f64 view of a BigFloat (lossy).
pub fn to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return if x.is_zero() { 0.0 } else { f64::NAN };
    };
    let top = *words.last().unwrap_or(&0) as u64;
    let wbits = (core::mem::size_of::<Word>() * 8) as i32;
    let v = libm::ldexp(top as f64, e as i32 - wbits);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_recovers_integers() {
        let p = Precise::new(128).unwrap();
        let big = p.mul(&p.int(1 << 40), &p.int(987654321));
        let (v, r) = round_to_integer(&big).unwrap();
        assert_eq!(v, BigInt::from(987654321i64) << 40);
        assert_eq!(r, 0.0);
        let x = p.add(&p.int(-17), &p.div(&p.int(1), &p.int(4)));
        let (v, r) = round_to_integer(&x).unwrap();
        assert_eq!(v, BigInt::from(-17));
        assert!((r - 0.25).abs() < 1e-15);
        let y = p.div(&p.int(7), &p.int(2));
        assert_eq!(round_to_integer(&y).unwrap().0, BigInt::from(4));
        assert!((to_f64(&y) - 3.5).abs() < 1e-15);
    }

    #[test]
    fn cos_of_pi_thirds() {
        let mut p = Precise::new(200).unwrap();
        let x = p.pi_frac(1, 3);
        let c = p.cos(&x);
        assert!((to_f64(&c) - 0.5).abs() < 1e-15);
    }
}
