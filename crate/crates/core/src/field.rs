//! Exact arithmetic in ℚ(i, √2), coordinates over the basis (1, i, √2, i√2).

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::linalg::C64;

/// p + q√2 with rational p, q.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Real2 {
    p: BigRational,
    q: BigRational,
}

impl Real2 {
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Real2 { p: &self.p + &o.p, q: &self.q + &o.q }
    }

    fn sub(&self, o: &Self) -> Self {
        Real2 { p: &self.p - &o.p, q: &self.q - &o.q }
    }

    fn mul(&self, o: &Self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        Real2 {
            p: &self.p * &o.p + two * &self.q * &o.q,
            q: &self.p * &o.q + &self.q * &o.p,
        }
    }

    fn neg_real(&self) -> Self {
        Real2 { p: -self.p.clone(), q: -self.q.clone() }
    }

    /// Inverse via the √2-conjugate; norm p² − 2q² is nonzero for nonzero input.
    fn inv(&self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let norm = &self.p * &self.p - two * &self.q * &self.q;
        Real2 { p: &self.p / &norm, q: -&self.q / &norm }
    }

    fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN) + core::f64::consts::SQRT_2 * self.q.to_f64().unwrap_or(f64::NAN)
    }
}

/// An element re + i·im of ℚ(i, √2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qi2 {
    re: Real2,
    im: Real2,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Qi2 {
    /// a + b·i + c·√2 + d·i√2.
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Qi2 { re: Real2 { p: a, q: c }, im: Real2 { p: b, q: d } }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(rat(a), rat(b), rat(c), rat(d))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Coordinates (1, i, √2, i√2).
    pub fn coords(&self) -> [BigRational; 4] {
        [self.re.p.clone(), self.im.p.clone(), self.re.q.clone(), self.im.q.clone()]
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(x + iy) = (x − iy)/(x² + y²); x² + y² ≠ 0 in this real field
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im)).inv();
        Some(Qi2 { re: self.re.mul(&n), im: self.im.mul(&n).neg_real() })
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Finds a + b√2 + i(c + d√2) with integers |a|,…,|d| ≤ bound within `tol` of z.
    pub fn identify(z: C64, bound: i64, tol: f64) -> Option<Self> {
        let part = |x: f64| -> Option<(i64, i64)> {
            (-bound..=bound).find_map(|q| {
                let p = libm::round(x - q as f64 * core::f64::consts::SQRT_2);
                let err = libm::fabs(x - p - q as f64 * core::f64::consts::SQRT_2);
                (libm::fabs(p) <= bound as f64 && err < tol).then_some((p as i64, q))
            })
        };
        let (a, c) = part(z.re)?;
        let (b, d) = part(z.im)?;
        Some(Self::from_ints(a, b, c, d))
    }
}

impl Add for &Qi2 {
    type Output = Qi2;
    fn add(self, o: &Qi2) -> Qi2 {
        Qi2 { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
}

impl Sub for &Qi2 {
    type Output = Qi2;
    fn sub(self, o: &Qi2) -> Qi2 {
        Qi2 { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
}

impl Mul for &Qi2 {
    type Output = Qi2;
    fn mul(self, o: &Qi2) -> Qi2 {
        Qi2 {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
}

impl Neg for &Qi2 {
    type Output = Qi2;
    fn neg(self) -> Qi2 {
        Qi2 { re: self.re.neg_real(), im: self.im.neg_real() }
    }
}

/// Dense square matrix over ℚ(i, √2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    pub dim: usize,
    pub data: Vec<Qi2>,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        ExactMatrix { dim, data: (0..dim * dim).map(|_| Qi2::zero()).collect() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Qi2::one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Qi2 {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Qi2) {
        self.data[r * self.dim + c] = v;
    }

    /// Converts a numerical matrix whose entries lie in ℤ[i, √2] with small coefficients.
    pub fn from_numeric(m: &crate::linalg::CMat, bound: i64, tol: f64) -> Option<Self> {
        let dim = m.nrows();
        let mut out = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                out.set(r, c, Qi2::identify(m[(r, c)], bound, tol)?);
            }
        }
        Some(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let y = o.get(k, c);
                    if !y.is_zero() {
                        let v = out.get(r, c) + &(x * y);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    /// self − λI.
    pub fn shift(&self, lambda: &Qi2) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            let v = out.get(i, i) - lambda;
            out.set(i, i, v);
        }
        out
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| !a[r * n + col].is_zero()) else {
                continue;
            };
            for k in 0..n {
                a.swap(rank * n + k, piv * n + k);
            }
            let inv = a[rank * n + col].inv().expect("nonzero pivot");
            for r in 0..n {
                if r == rank || a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] * &inv;
                for k in col..n {
                    let v = &a[r * n + k] - &(&f * &a[rank * n + k]);
                    a[r * n + k] = v;
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let s = Qi2::from_ints(0, 0, 1, 0); // √2
        assert_eq!(&s * &s, Qi2::from_ints(2, 0, 0, 0));
        let i = Qi2::from_ints(0, 1, 0, 0);
        assert_eq!(&i * &i, Qi2::from_ints(-1, 0, 0, 0));
        let z = Qi2::from_ints(1, 2, -3, 1);
        assert_eq!(&z * &z.inv().unwrap(), Qi2::one());
        assert!(Qi2::zero().inv().is_none());
    }

    #[test]
    fn identification() {
        let z = C64::new(1.0 - 2.0 * core::f64::consts::SQRT_2, core::f64::consts::SQRT_2);
        assert_eq!(Qi2::identify(z, 4, 1e-9), Some(Qi2::from_ints(1, 0, -2, 1)));
        assert!(Qi2::identify(C64::new(0.123, 0.0), 4, 1e-9).is_none());
    }

    #[test]
    fn nilpotent_rank() {
        let mut m = ExactMatrix::zeros(3);
        m.set(0, 1, Qi2::one());
        assert_eq!(m.rank(), 1);
        assert_eq!(m.mul(&m).rank(), 0);
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
    }
}
