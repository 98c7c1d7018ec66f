//! Exact dimer counts on the torus: closed formulas in arbitrary precision,
//! an integer transfer-matrix trace and brute-force enumeration.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{cap, Error, Result};
use crate::model::{odd_row_tile, TileKind};
use crate::precise::{round_to_integer, Precise};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Formula,
    Trace,
    Enumeration,
    Kasteleyn,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Trace => "trace",
            Method::Enumeration => "enumeration",
            Method::Kasteleyn => "kasteleyn",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub m: usize,
    pub n: usize,
    pub value: BigInt,
    pub method: Method,
    /// Distance of the high-precision value from the reported integer.
    pub residual: f64,
}

/// Integer weight of an odd-row tile at the isotropic point.
pub fn isotropic_weight(b: u8, l: u8, t: u8, r: u8) -> u64 {
    match odd_row_tile(b, l, t, r) {
        Some(TileKind::C1) => 2,
        Some(_) => 1,
        None => 0,
    }
}

pub const MAX_FORMULA_SITES: usize = 64;
pub const MAX_FORMULA_ROWS: usize = 256;

pub fn default_precision(m: usize, n: usize) -> usize {
    64 + m * n
}

/// Σ over sign vectors with exactly k minus signs of Π_j w_j(ε_j), for all k.
fn elementary_sums(p: &Precise, plus: &[BigFloat], minus: &[BigFloat]) -> Vec<BigFloat> {
    let mut dp = vec![p.int(1)];
    for (wp, wm) in plus.iter().zip(minus) {
        let mut next = vec![p.int(0); dp.len() + 1];
        for (k, v) in dp.iter().enumerate() {
            next[k] = p.add(&next[k], &p.mul(v, wp));
            next[k + 1] = p.add(&next[k + 1], &p.mul(v, wm));
        }
        dp = next;
    }
    dp
}

/// cos^M(±t_j − π/4) for each angle t_j = π·num_j/den.
fn factor_powers(p: &mut Precise, angles: &[(i64, i64)], m: usize) -> (Vec<BigFloat>, Vec<BigFloat>) {
    let quarter = p.pi_frac(1, 4);
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for &(num, den) in angles {
        let t = p.pi_frac(num, den);
        let cp = p.cos(&p.sub(&t, &quarter));
        let cm = p.cos(&p.sub(&t.neg(), &quarter));
        plus.push(p.powi(&cp, m));
        minus.push(p.powi(&cm, m));
    }
    (plus, minus)
}

fn parity_sign(p: &Precise, x: i64) -> BigFloat {
    p.int(if x.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Raw high-precision value of the rotated-orientation counting formula.
pub fn rotated_formula_value(m: usize, n: usize, bits: usize) -> Result<BigFloat> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("M, N must be positive".into()));
    }
    cap("N", n, MAX_FORMULA_SITES)?;
    cap("M", m, MAX_FORMULA_ROWS)?;
    let mut p = Precise::new(bits)?;
    let (mi, ni) = (m as i64, n as i64);
    let mut total = p.int(0);
    // index k = number of minus signs, Σε = N − 2k
    let k_of = |sum: i64| ((ni - sum) / 2) as usize;
    if n % 2 == 1 {
        let angles: Vec<(i64, i64)> = (1..=ni).map(|j| (2 * j - 1, 4 * ni)).collect();
        let (plus, minus) = factor_powers(&mut p, &angles, m);
        let e = elementary_sums(&p, &plus, &minus);
        let mut s = -ni + 2;
        while s <= ni {
            let sign = parity_sign(&p, (mi * (ni - s)).div_euclid(4));
            total = p.add(&total, &p.mul(&sign, &e[k_of(s)]));
            s += 4;
        }
        let scale = p.powi(&p.int(2), m * n + 1);
        return Ok(p.mul(&total, &scale));
    }
    let r_angles: Vec<(i64, i64)> = (1..=ni).map(|j| (2 * j - 1, 2 * ni)).collect();
    let ns_angles: Vec<(i64, i64)> = (1..=ni).map(|j| if j == ni / 2 { (0, 1) } else { (j, ni) }).collect();
    let (rp, rm) = factor_powers(&mut p, &r_angles, m);
    let (np, mut nm) = factor_powers(&mut p, &ns_angles, m);
    // the ε_{N/2} slot carries an extra ε^M
    if m % 2 == 1 {
        nm[n / 2 - 1] = nm[n / 2 - 1].neg();
    }
    let er = elementary_sums(&p, &rp, &rm);
    let ens = elementary_sums(&p, &np, &nm);
    let mut s = -ni;
    while s <= ni {
        let target = -s.abs();
        let term = if s.rem_euclid(4) == 0 {
            p.mul(&parity_sign(&p, (mi * (2 * ni + s)).div_euclid(4)), &er[k_of(target)])
        } else {
            p.mul(&parity_sign(&p, (mi * (2 * ni + s.abs() + 2)).div_euclid(4)), &ens[k_of(target)])
        };
        total = p.add(&total, &term);
        s += 2;
    }
    let scale = p.powi(&p.int(2), m * n);
    Ok(p.mul(&total, &scale))
}

/// Evaluates the formula at `bits` and rounds; residual ≥ 0.25 is an error.
pub fn rotated_count_formula(m: usize, n: usize, bits: usize) -> Result<CountResult> {
    let v = rotated_formula_value(m, n, bits)?;
    let (value, residual) = round_to_integer(&v)?;
    if residual >= 0.25 {
        return Err(Error::Precision(residual));
    }
    Ok(CountResult {
        m,
        n,
        value,
        method: Method::Formula,
        residual,
    })
}

/// Formula count, doubling the precision until the residual is below 1e-3.
pub fn rotated_count(m: usize, n: usize, bits: Option<usize>) -> Result<CountResult> {
    let mut bits = bits.unwrap_or_else(|| default_precision(m, n));
    for _ in 0..8 {
        match rotated_count_formula(m, n, bits) {
            Ok(r) if r.residual < 1e-3 => return Ok(r),
            Ok(_) | Err(Error::Precision(_)) => bits *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Precision(f64::NAN))
}

pub const MAX_KASTELEYN: usize = 64;

/// Standard-orientation count ½(Z̃^{½,½} + Z̃^{0,½} + Z̃^{½,0}).
pub fn kasteleyn_count(m: usize, n: usize) -> Result<CountResult> {
    if m % 2 == 1 || n % 2 == 1 || m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("Kasteleyn count needs M, N even, got {m}x{n}")));
    }
    cap("M", m, MAX_KASTELEYN)?;
    cap("N", n, MAX_KASTELEYN)?;
    let bits = 64 + 3 * m * n;
    let mut p = Precise::new(bits)?;
    // sin²(2π(k + α)/L) with α ∈ {0, ½}, i.e. angle π(2k + 2α)/L
    let mut squares = |twice_alpha: i64, l: usize| -> Vec<BigFloat> {
        (0..l / 2)
            .map(|k| {
                let x = p.pi_frac(2 * k as i64 + twice_alpha, l as i64);
                let s = p.sin(&x);
                p.mul(&s, &s)
            })
            .collect()
    };
    let (nh, n0) = (squares(1, n), squares(0, n));
    let (mh, m0) = (squares(1, m), squares(0, m));
    let four = p.int(4);
    let product = |xs: &[BigFloat], ys: &[BigFloat]| {
        let mut acc = p.int(1);
        for x in xs {
            for y in ys {
                acc = p.mul(&acc, &p.mul(&four, &p.add(x, y)));
            }
        }
        acc
    };
    let sum = p.add(&p.add(&product(&nh, &mh), &product(&n0, &mh)), &product(&nh, &m0));
    let half = p.div(&sum, &p.int(2));
    let (value, residual) = round_to_integer(&half)?;
    if residual >= 0.25 {
        return Err(Error::Precision(residual));
    }
    Ok(CountResult {
        m,
        n,
        value,
        method: Method::Kasteleyn,
        residual,
    })
}

pub const MAX_TRACE_SITES: usize = 14;

/// Nonzero entries T[b, a] of the isotropic integer transfer matrix for one column a.
fn transfer_column(n: usize, a: usize) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, u64)> = Vec::new();
    for alpha0 in 0..2u8 {
        // depth-first over sites, tracking the horizontal occupation
        let mut stack = vec![(0usize, alpha0, 0usize, 1u64)];
        while let Some((j, alpha, b, w)) = stack.pop() {
            if j == n {
                if alpha == alpha0 {
                    match out.iter_mut().find(|(x, _)| *x == b) {
                        Some(e) => e.1 += w,
                        None => out.push((b, w)),
                    }
                }
                continue;
            }
            let aj = ((a >> j) & 1) as u8;
            for bj in 0..2u8 {
                let next = aj as i8 + alpha as i8 - bj as i8;
                if next != 0 && next != 1 {
                    continue;
                }
                let wt = isotropic_weight(aj, alpha, bj, next as u8);
                if wt != 0 {
                    stack.push((j + 1, next as u8, b | (bj as usize) << j, w * wt));
                }
            }
        }
    }
    out.retain(|(_, w)| *w != 0);
    out
}

fn rotate(n: usize, a: usize) -> usize {
    ((a << 1) | (a >> (n - 1))) & ((1 << n) - 1)
}

/// Representatives of cyclic orbits with their orbit sizes.
fn necklaces(n: usize, basis: &[usize]) -> Vec<(usize, u64)> {
    basis
        .iter()
        .filter_map(|&a| {
            let mut x = a;
            let mut size = 0u64;
            loop {
                x = rotate(n, x);
                size += 1;
                if x < a {
                    return None;
                }
                if x == a {
                    return Some((a, size));
                }
            }
        })
        .collect()
}

trait Acc: Clone + Zero {
    fn unit() -> Self;
    /// self·w + acc, or None on overflow.
    fn mac(&self, w: u64, acc: &Self) -> Option<Self>;
    fn to_big(&self) -> BigUint;
}

impl Acc for u128 {
    fn unit() -> Self {
        1
    }
    fn mac(&self, w: u64, acc: &Self) -> Option<Self> {
        self.checked_mul(w as u128)?.checked_add(*acc)
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Acc for BigUint {
    fn unit() -> Self {
        BigUint::one()
    }
    fn mac(&self, w: u64, acc: &Self) -> Option<Self> {
        Some(self * w + acc)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

type Csr = Vec<Vec<(usize, u64)>>;

/// Accumulates orbit-weighted diagonal entries of T^m, starting one vector per necklace.
fn propagate<T: Acc>(cols: &Csr, reps: &[(usize, u64)], traces: &mut [BigUint]) -> Option<()> {
    let dim = cols.len();
    for &(a, orbit) in reps {
        let mut v: Vec<T> = vec![T::zero(); dim];
        v[a] = T::unit();
        for slot in traces.iter_mut() {
            let mut next: Vec<T> = vec![T::zero(); dim];
            for (c, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for &(r, w) in &cols[c] {
                    next[r] = x.mac(w, &next[r])?;
                }
            }
            v = next;
            *slot += v[a].to_big() * orbit;
        }
    }
    Some(())
}

/// Exact Tr T_iso^m for m = 1..=max_m.
pub fn rotated_traces(max_m: usize, n: usize) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    cap("N", n, MAX_TRACE_SITES)?;
    let mut traces = vec![BigUint::zero(); max_m];
    for d in 0..=n {
        let basis: Vec<usize> = (0..1usize << n).filter(|s| s.count_ones() as usize == d).collect();
        let mut index = vec![usize::MAX; 1 << n];
        for (i, &s) in basis.iter().enumerate() {
            index[s] = i;
        }
        let cols: Csr = basis
            .iter()
            .map(|&a| transfer_column(n, a).into_iter().map(|(b, w)| (index[b], w)).collect())
            .collect();
        let reps: Vec<(usize, u64)> = necklaces(n, &basis).into_iter().map(|(a, o)| (index[a], o)).collect();
        let mut part = vec![BigUint::zero(); max_m];
        if propagate::<u128>(&cols, &reps, &mut part).is_none() {
            part = vec![BigUint::zero(); max_m];
            propagate::<BigUint>(&cols, &reps, &mut part);
        }
        for (t, p) in traces.iter_mut().zip(part) {
            *t += p;
        }
    }
    Ok(traces)
}

pub fn rotated_count_trace(m: usize, n: usize) -> Result<CountResult> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    let t = rotated_traces(m, n)?;
    Ok(CountResult {
        m,
        n,
        value: BigInt::from(t[m - 1].clone()),
        method: Method::Trace,
        residual: 0.0,
    })
}

pub const MAX_ENUMERATION_FACES: usize = 10;

/// Brute force over every occupation of the 2MN medial edges of the torus.
pub fn enumerate_count(m: usize, n: usize) -> Result<CountResult> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("M, N must be positive".into()));
    }
    cap("M*N", m * n, MAX_ENUMERATION_FACES)?;
    let faces = m * n;
    let mut total: u64 = 0;
    for vert in 0u64..1 << faces {
        let v = |r: usize, j: usize| ((vert >> ((r % m) * n + j)) & 1) as u8;
        // each row must conserve particles for any horizontal assignment to survive
        if (0..m).any(|r| (0..n).map(|j| v(r, j)).sum::<u8>() != (0..n).map(|j| v(r + 1, j)).sum::<u8>()) {
            continue;
        }
        for horiz in 0u64..1 << faces {
            let h = |r: usize, j: usize| ((horiz >> (r * n + j % n)) & 1) as u8;
            let mut w = 1u64;
            for r in 0..m {
                for j in 0..n {
                    w *= isotropic_weight(v(r, j), h(r, j), v(r + 1, j), h(r, j + 1));
                    if w == 0 {
                        break;
                    }
                }
                if w == 0 {
                    break;
                }
            }
            total += w;
        }
    }
    Ok(CountResult {
        m,
        n,
        value: BigInt::from(total),
        method: Method::Enumeration,
        residual: 0.0,
    })
}

/// Σ_{s ≡ −N mod 4} C(N, (N−s)/2) and Σ_{s ≡ −N+2 mod 4} C(N, (N−s)/2).
pub fn binomial_identity(n: usize) -> (BigUint, BigUint) {
    let mut sums = [BigUint::zero(), BigUint::zero()];
    let mut c = BigUint::one();
    for k in 0..=n {
        // s = N − 2k; class by k mod 2
        sums[k % 2] += &c;
        c = c * (n - k) / (k + 1);
    }
    let [a, b] = sums;
    (a, b)
}

/// ln of a positive big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0);
    let top = (x >> shift as usize).to_f64().unwrap_or(f64::NAN);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    Rotated,
    Standard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub lattice: Lattice,
    pub m: usize,
    pub n: usize,
    pub value: BigInt,
    /// Z^{1/#dimers}.
    pub per_dimer: f64,
    /// per_dimer − exp(2G/π).
    pub deviation: f64,
}

pub const MAX_GROWTH: usize = 20;

pub fn growth_table(max_size: usize, molecular_freedom: f64) -> Result<Vec<GrowthRow>> {
    cap("size", max_size, MAX_GROWTH)?;
    let mut rows = Vec::new();
    let mut push = |lattice, m: usize, n: usize, value: BigInt, dimers: usize| {
        let per = libm::exp(ln_bigint(&value) / dimers as f64);
        rows.push(GrowthRow {
            lattice,
            m,
            n,
            value,
            per_dimer: per,
            deviation: per - molecular_freedom,
        });
    };
    for m in 1..=max_size {
        for n in [m, m + 1] {
            if n <= max_size {
                push(Lattice::Rotated, m, n, rotated_count(m, n, None)?.value, m * n);
            }
        }
    }
    for m in (2..=max_size).step_by(2) {
        for n in [m, m + 2] {
            if n <= max_size {
                push(Lattice::Standard, m, n, kasteleyn_count(m, n)?.value, m * n / 2);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn small_formula_values() {
        assert_eq!(rotated_count(1, 1, None).unwrap().value, v(4));
        assert_eq!(rotated_count(4, 4, None).unwrap().value, v(26752));
        assert_eq!(rotated_count(2, 3, None).unwrap().value, v(80));
    }

    #[test]
    fn trace_and_enumeration() {
        assert_eq!(rotated_count_trace(2, 2).unwrap().value, v(24));
        assert_eq!(rotated_count_trace(3, 3).unwrap().value, v(448));
        assert_eq!(enumerate_count(1, 2).unwrap().value, v(8));
        assert_eq!(enumerate_count(2, 2).unwrap().value, v(24));
        assert!(enumerate_count(4, 4).is_err());
    }

    #[test]
    fn kasteleyn_small() {
        assert_eq!(kasteleyn_count(2, 2).unwrap().value, v(8));
        assert_eq!(kasteleyn_count(4, 4).unwrap().value, v(272));
        assert!(kasteleyn_count(3, 4).is_err());
    }

    #[test]
    fn binomial_halves() {
        for n in 2..=16usize {
            let (a, b) = binomial_identity(n);
            assert_eq!(a, BigUint::one() << (n - 1));
            assert_eq!(b, BigUint::one() << (n - 1));
        }
    }
}
