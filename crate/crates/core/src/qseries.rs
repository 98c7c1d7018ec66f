//! Exact bivariate q-series: Gaussian binomials, column combinatorics,
//! finitized partition functions and truncated eta/theta characters.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cylinder::Class;
use crate::error::{Error, Result};
use crate::report::Report;

/// Exact exponent of q or q̄.
pub type Exponent = Ratio<i64>;

pub fn exp(n: i64, d: i64) -> Exponent {
    Ratio::new(n, d)
}

pub fn int_exp(n: i64) -> Exponent {
    Ratio::from_integer(n)
}

/// Central charge entering the (qq̄)^{-c/24} prefactor.
pub const CENTRAL_CHARGE: i64 = -2;

/// Δ_j = (j² − 1)/8, for rational j.
pub fn conformal_weight(j: Exponent) -> Exponent {
    (j * j - int_exp(1)) / 8
}

fn vacuum_shift() -> Exponent {
    exp(-CENTRAL_CHARGE, 24)
}

/// Sparse series Σ c q^α q̄^β with rational exponents and integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QExponentPoly {
    terms: BTreeMap<(Exponent, Exponent), BigInt>,
}

impl QExponentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(int_exp(0), int_exp(0), BigInt::one())
    }

    pub fn monomial(q: Exponent, qbar: Exponent, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(q, qbar, coeff);
        p
    }

    /// Univariate polynomial in q from its coefficient list.
    pub fn from_coeffs(coeffs: &[BigInt]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(int_exp(k as i64), int_exp(0), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, q: Exponent, qbar: Exponent, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        debug_assert!(96 % q.denom() == 0 && 96 % qbar.denom() == 0, "exponent denominator");
        let key = (q, qbar);
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Exponent, Exponent), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q: Exponent, qbar: Exponent) -> BigInt {
        self.terms.get(&(q, qbar)).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero();
        for ((a, b), v) in &self.terms {
            out.add_term(*a, *b, v * c);
        }
        out
    }

    /// Multiplies by q^a q̄^b.
    pub fn shift(&self, a: Exponent, b: Exponent) -> Self {
        Self {
            terms: self.terms.iter().map(|((x, y), v)| ((x + a, y + b), v.clone())).collect(),
        }
    }

    /// Reinterprets q as q̄ and vice versa.
    pub fn swap(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|((x, y), v)| ((*y, *x), v.clone())).collect(),
        }
    }

    /// Keeps terms with q-exponent ≤ `max_q` and q̄-exponent ≤ `max_qbar`.
    pub fn truncate(&self, max_q: Exponent, max_qbar: Exponent) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((x, y), _)| *x <= max_q && *y <= max_qbar)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn div_exact(&self, d: i64) -> Result<Self> {
        let d = BigInt::from(d);
        let mut out = Self::zero();
        for ((a, b), v) in &self.terms {
            let (quo, rem) = v.div_rem(&d);
            if !rem.is_zero() {
                return Err(Error::Numerical(format!("coefficient {v} not divisible by {d}")));
            }
            out.add_term(*a, *b, quo);
        }
        Ok(out)
    }

    /// Value at q = q̄ = 1.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn eval(&self, q: f64, qbar: f64) -> f64 {
        let pow = |x: f64, e: &Exponent| libm::pow(x, *e.numer() as f64 / *e.denom() as f64);
        self.terms
            .iter()
            .map(|((a, b), v)| v.to_f64().unwrap_or(f64::NAN) * pow(q, a) * pow(qbar, b))
            .sum()
    }

    pub fn nonnegative(&self) -> bool {
        self.terms.values().all(|v| !v.is_negative())
    }

    /// First term (in exponent order) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<((Exponent, Exponent), BigInt, BigInt)> {
        let keys: alloc::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().find_map(|k| {
            let (x, y) = (self.coeff(k.0, k.1), other.coeff(k.0, k.1));
            (x != y).then_some((*k, x, y))
        })
    }

    /// Univariate coefficient list in q (integer exponents, no q̄), if applicable.
    pub fn q_coeffs(&self) -> Option<Vec<BigInt>> {
        let mut out = Vec::new();
        for ((a, b), v) in &self.terms {
            if !b.is_zero() || !a.is_integer() || a.is_negative() {
                return None;
            }
            let k = a.to_integer() as usize;
            if out.len() <= k {
                out.resize(k + 1, BigInt::zero());
            }
            out[k] = v.clone();
        }
        Some(out)
    }

    /// Sorted (q-exponent, q̄-exponent, coefficient) strings.
    pub fn serialize_terms(&self) -> Vec<(String, String, String)> {
        self.terms
            .iter()
            .map(|((a, b), v)| (a.to_string(), b.to_string(), v.to_string()))
            .collect()
    }
}

impl Add for &QExponentPoly {
    type Output = QExponentPoly;
    fn add(self, rhs: &QExponentPoly) -> QExponentPoly {
        let mut out = self.clone();
        for ((a, b), v) in &rhs.terms {
            out.add_term(*a, *b, v.clone());
        }
        out
    }
}

impl Sub for &QExponentPoly {
    type Output = QExponentPoly;
    fn sub(self, rhs: &QExponentPoly) -> QExponentPoly {
        let mut out = self.clone();
        for ((a, b), v) in &rhs.terms {
            out.add_term(*a, *b, -v.clone());
        }
        out
    }
}

impl Mul for &QExponentPoly {
    type Output = QExponentPoly;
    fn mul(self, rhs: &QExponentPoly) -> QExponentPoly {
        let mut out = QExponentPoly::zero();
        for ((a, b), v) in &self.terms {
            for ((c, d), w) in &rhs.terms {
                out.add_term(a + c, b + d, v * w);
            }
        }
        out
    }
}

/// Coefficients of [n, m]_q via Π_{k=1}^{m} (1 − q^{n−k+1})/(1 − q^k).
pub fn gaussian_coeffs(n: usize, m: usize) -> Vec<BigInt> {
    if m > n {
        return Vec::new();
    }
    let mut p = vec![BigInt::one()];
    for k in 1..=m {
        let up = n - k + 1;
        let mut next = vec![BigInt::zero(); p.len() + up];
        for (i, c) in p.iter().enumerate() {
            next[i] += c;
            next[i + up] -= c;
        }
        // exact division by (1 − q^k): Q_i = P_i + Q_{i−k}
        for i in k..next.len() {
            let prev = next[i - k].clone();
            next[i] += prev;
        }
        next.truncate(next.len() - k);
        p = next;
    }
    p
}

pub fn gaussian_binomial(n: usize, m: usize) -> Result<QExponentPoly> {
    if m > n {
        return Err(Error::InvalidParameter(format!("q-binomial [{n},{m}] needs m <= n")));
    }
    Ok(QExponentPoly::from_coeffs(&gaussian_coeffs(n, m)))
}

/// [n, m] with out-of-range lower index read as zero.
fn qbin_or_zero(n: i64, m: i64) -> QExponentPoly {
    if n < 0 || m < 0 || m > n {
        QExponentPoly::zero()
    } else {
        QExponentPoly::from_coeffs(&gaussian_coeffs(n as usize, m as usize))
    }
}

pub const MAX_COLUMN: usize = 24;

/// Σ q^{Σ m_j E_j} over column configurations with quantum number σ, times the class offset.
///
/// - Z4: `n` single slots, E_p = (2p−1)/4, σ = #even − #odd, offset σ(σ+½)/2.
/// - R: `n/2` double slots, E_p = p − ½, σ = #left − #right, offset σ²/2.
/// - NS: `(n−1)/2` double slots, E_p = p, plus one zero-energy right slot, so the
///   excess of the double slots is σ or σ+1; offset σ(σ+1)/2.
pub fn column_generating_function(class: Class, n: usize, sigma: i64) -> Result<QExponentPoly> {
    crate::error::cap("column length", n, MAX_COLUMN)?;
    let mut out = QExponentPoly::zero();
    let one = BigInt::one();
    match class {
        Class::Z4 => {
            for mask in 0u32..1 << n {
                let (mut s, mut e) = (0i64, int_exp(0));
                for p in 1..=n {
                    if mask >> (p - 1) & 1 == 1 {
                        s += if p % 2 == 0 { 1 } else { -1 };
                        e += exp(2 * p as i64 - 1, 4);
                    }
                }
                if s == sigma {
                    out.add_term(e, int_exp(0), one.clone());
                }
            }
            Ok(out.shift(-int_exp(sigma) * (int_exp(sigma) + exp(1, 2)) / 2, int_exp(0)))
        }
        Class::Ramond | Class::NeveuSchwarz => {
            let ns = class == Class::NeveuSchwarz;
            if (n % 2 == 1) != ns {
                return Err(Error::InvalidParameter(format!(
                    "{} columns need {} length",
                    class.short(),
                    if ns { "odd" } else { "even" }
                )));
            }
            let slots = n / 2;
            for left in 0u32..1 << slots {
                for right in 0u32..1 << slots {
                    let excess = left.count_ones() as i64 - right.count_ones() as i64;
                    let allowed = if ns { excess == sigma || excess == sigma + 1 } else { excess == sigma };
                    if !allowed {
                        continue;
                    }
                    let mut e = int_exp(0);
                    for p in 1..=slots {
                        let occ = (left >> (p - 1) & 1) + (right >> (p - 1) & 1);
                        let ep = if ns { int_exp(p as i64) } else { exp(2 * p as i64 - 1, 2) };
                        e += ep * occ as i64;
                    }
                    out.add_term(e, int_exp(0), one.clone());
                }
            }
            let off = if ns {
                int_exp(sigma * (sigma + 1)) / 2
            } else {
                int_exp(sigma * sigma) / 2
            };
            Ok(out.shift(-off, int_exp(0)))
        }
    }
}

/// The q-binomial [n, m] that the column sum equals.
pub fn column_binomial(class: Class, n: usize, sigma: i64) -> (usize, i64) {
    let m = match class {
        Class::Z4 => n.div_ceil(2) as i64 + sigma,
        Class::Ramond => (n / 2) as i64 + sigma,
        Class::NeveuSchwarz => (n / 2) as i64 + sigma + 1,
    };
    (n, m)
}

pub fn verify_columns(max_n: usize) -> Result<Report> {
    let mut rep = Report::new(format!("column sums = q-binomials, n <= {max_n}"), 0.0);
    for class in [Class::Z4, Class::Ramond, Class::NeveuSchwarz] {
        for n in 1..=max_n {
            let parity_ok = match class {
                Class::Z4 => true,
                Class::Ramond => n % 2 == 0,
                Class::NeveuSchwarz => n % 2 == 1,
            };
            if !parity_ok {
                continue;
            }
            for sigma in -(n as i64) - 1..=n as i64 + 1 {
                let lhs = column_generating_function(class, n, sigma)?;
                let (bn, bm) = column_binomial(class, n, sigma);
                let rhs = qbin_or_zero(bn as i64, bm);
                if let Some((k, a, b)) = lhs.first_difference(&rhs) {
                    rep.fail(format!(
                        "{} n={n} sigma={sigma}: at ({}, {}) column {a} vs binomial {b}",
                        class.short(),
                        k.0,
                        k.1
                    ));
                }
            }
        }
    }
    Ok(rep)
}

fn check_sector(n: usize, ell: usize) -> Result<()> {
    if ell > n || (n - ell) % 2 != 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("sector l={ell} incompatible with N={n}")));
    }
    Ok(())
}

/// Σ_k q^{Δ_{2k+ℓ/2}} q̄^{Δ_{2k−ℓ/2}} [A(k)]_q [B(k)]_q̄, times (qq̄)^{−c/24}.
fn k_sum(ell: usize, upper: impl Fn(i64) -> (i64, i64), lower: impl Fn(i64) -> (i64, i64), span: i64) -> QExponentPoly {
    let h = exp(ell as i64, 2);
    let mut out = QExponentPoly::zero();
    for k in -span..=span {
        let (an, am) = upper(k);
        let (bn, bm) = lower(k);
        let a = qbin_or_zero(an, am);
        let b = qbin_or_zero(bn, bm);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let kk = int_exp(2 * k);
        let term = &a * &b.swap();
        out = &out + &term.shift(conformal_weight(kk + h), conformal_weight(kk - h));
    }
    out.shift(vacuum_shift(), vacuum_shift())
}

/// Finitized sector partition function Z_ℓ^{(N)}(q, q̄) (first displayed form for Z4).
pub fn finitized_sector_partition(n: usize, ell: usize) -> Result<QExponentPoly> {
    check_sector(n, ell)?;
    let (ni, li) = (n as i64, ell as i64);
    let span = ni + 2;
    Ok(if n % 2 == 1 {
        let (top, bot) = ((ni + 1) / 2, (ni - 1) / 2);
        if (n - ell) % 4 == 0 {
            k_sum(ell, |k| (top, (ni - li) / 4 - k), |k| (bot, (ni - li) / 4 + k), span)
        } else {
            k_sum(ell, |k| (top, (ni - li + 2) / 4 - k), |k| (bot, (ni - li - 2) / 4 + k), span)
        }
    } else if (ell / 2) % 2 == 0 {
        let (top, bot) = (2 * ((ni + 2) / 4), 2 * (ni / 4));
        k_sum(ell, |k| (top, (ni + 2 - li) / 4 - k), |k| (bot, (ni - li) / 4 + k), span)
    } else {
        let (top, bot) = (2 * (ni / 4) + 1, 2 * ((ni + 2) / 4) - 1);
        k_sum(ell, |k| (top, (ni + 2 - li) / 4 - k), |k| (bot, (ni - li) / 4 + k), span)
    })
}

/// Second displayed form of the Z4 sector partition function.
pub fn finitized_sector_partition_alt(n: usize, ell: usize) -> Result<QExponentPoly> {
    check_sector(n, ell)?;
    if n % 2 == 0 {
        return Err(Error::InvalidParameter("alternative form exists only for N odd".into()));
    }
    let (ni, li) = (n as i64, ell as i64);
    let (top, bot) = ((ni + 1) / 2, (ni - 1) / 2);
    Ok(if (n - ell) % 4 == 0 {
        k_sum(ell, |k| (top, (ni + li + 2) / 4 + k), |k| (bot, (ni + li - 2) / 4 - k), ni + 2)
    } else {
        k_sum(ell, |k| (top, (ni + li) / 4 + k), |k| (bot, (ni + li) / 4 - k), ni + 2)
    })
}

/// Π_{n=1}^{count} (1 + sign·q^{(n·step − offset)})^power as a univariate series in q.
fn product_series(count: usize, step: Exponent, offset: Exponent, sign: i64, power: u32) -> QExponentPoly {
    let mut acc = QExponentPoly::one();
    for k in 1..=count as i64 {
        let mut factor = QExponentPoly::one();
        factor.add_term(step * k - offset, int_exp(0), BigInt::from(sign));
        for _ in 0..power {
            acc = &acc * &factor;
        }
    }
    acc
}

/// Both forms of the finitized modular invariant partition function.
#[derive(Debug, Clone)]
pub struct MipfForms {
    pub sector_sum: QExponentPoly,
    pub product: QExponentPoly,
}

pub const MAX_MIPF: usize = 16;

pub fn finitized_mipf(n: usize) -> Result<MipfForms> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::InvalidParameter("finitized MIPF needs N even".into()));
    }
    crate::error::cap("N", n, MAX_MIPF)?;
    let two = BigInt::from(2);
    let mut sector_sum = finitized_sector_partition(n, 0)?;
    for ell in (2..=n).step_by(2) {
        sector_sum = &sector_sum + &finitized_sector_partition(n, ell)?.scale(&two);
    }

    let half = exp(1, 2);
    let (one, zero) = (int_exp(1), int_exp(0));
    let r_q = |s| product_series((n + 2) / 4, one, half, s, 2);
    let r_qb = |s| product_series(n / 4, one, half, s, 2).swap();
    let ramond = &(&r_q(1) * &r_qb(1)) + &(&r_q(-1) * &r_qb(-1));
    let ramond = ramond.div_exact(2)?;
    let ramond = ramond.shift(vacuum_shift() - exp(1, 8), vacuum_shift() - exp(1, 8));
    let ns = &product_series(n / 4, one, zero, 1, 2) * &product_series((n.saturating_sub(2)) / 4, one, zero, 1, 2).swap();
    let ns = ns.scale(&two).shift(vacuum_shift(), vacuum_shift());
    Ok(MipfForms {
        sector_sum,
        product: &ramond + &ns,
    })
}

pub fn verify_mipf(n: usize) -> Result<Report> {
    let forms = finitized_mipf(n)?;
    let mut rep = Report::new(format!("finitized MIPF N={n}"), 0.0);
    if let Some((k, a, b)) = forms.sector_sum.first_difference(&forms.product) {
        rep.fail(format!("first difference at ({}, {}): sector sum {a}, product {b}", k.0, k.1));
    }
    let total = forms.sector_sum.at_one();
    if total != BigInt::one() << n {
        rep.fail(format!("Z(1) = {total}, expected 2^{n}"));
    }
    if !forms.sector_sum.nonnegative() {
        rep.fail("negative coefficient");
    }
    Ok(rep)
}

/// Σ_{ℓ odd} Z_ℓ in product form, N odd.
pub fn z4_product_form(n: usize) -> Result<QExponentPoly> {
    if n % 2 == 0 {
        return Err(Error::InvalidParameter("Z4 product form needs N odd".into()));
    }
    let q = |s| product_series(n.div_ceil(2), exp(1, 2), exp(1, 4), s, 1);
    let qb = |s| product_series(n / 2, exp(1, 2), exp(1, 4), s, 1).swap();
    let sum = &(&q(1) * &qb(1)) + &(&q(-1) * &qb(-1));
    let pre = vacuum_shift() - exp(3, 32);
    Ok(sum.div_exact(2)?.shift(pre, pre))
}

/// Partition numbers p(0..=n), by Euler's pentagonal recurrence.
pub fn partitions(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1i64.. {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += &p[m - g1] * sign;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += &p[m - g2] * sign;
            }
        }
        p[m] = acc;
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// η(q) = q^{1/24} Π (1 − q^n).
    Eta,
    /// η(q)³.
    EtaCubed,
    /// θ_{j,n}(q) = Σ_k q^{(j + 2kn)²/4n}.
    Theta { j: i64, n: i64 },
    /// θ_{j,n}/η.
    Kappa { j: i64, n: i64 },
    ChiMinusEighth,
    ChiZero,
    ChiOne,
    ChiThreeEighths,
}

pub const MAX_SERIES_ORDER: u32 = 200;

/// Truncated series: all terms with q-exponent ≤ `order`.
pub fn eta_theta_truncated(kind: SeriesKind, order: u32) -> Result<QExponentPoly> {
    crate::error::cap("series order", order as usize, MAX_SERIES_ORDER as usize)?;
    let top = int_exp(order as i64);
    let z = int_exp(0);
    let cut = |p: QExponentPoly| p.truncate(top, z);
    let inv_eta = || {
        let p = partitions(order as usize + 1);
        QExponentPoly::from_coeffs(&p).shift(exp(-1, 24), z)
    };
    Ok(match kind {
        SeriesKind::Eta => {
            let mut acc = QExponentPoly::one();
            for k in 1..=order as i64 {
                let mut f = QExponentPoly::one();
                f.add_term(int_exp(k), z, -BigInt::one());
                acc = (&acc * &f).truncate(top, z);
            }
            cut(acc.shift(exp(1, 24), z))
        }
        SeriesKind::EtaCubed => {
            // Jacobi: η³ = q^{1/8} Σ_{k≥0} (−1)^k (2k+1) q^{k(k+1)/2}
            let mut out = QExponentPoly::zero();
            let mut k = 0i64;
            while k * (k + 1) / 2 <= order as i64 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                out.add_term(exp(1, 8) + int_exp(k * (k + 1) / 2), z, BigInt::from(sign * (2 * k + 1)));
                k += 1;
            }
            cut(out)
        }
        SeriesKind::Theta { j, n } => {
            if n <= 0 {
                return Err(Error::InvalidParameter("theta needs n > 0".into()));
            }
            let mut out = QExponentPoly::zero();
            let bound = (order as i64 + 1) * 4 * n;
            let mut k = 0i64;
            loop {
                let mut any = false;
                for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
                    let m = j + 2 * kk * n;
                    if m * m <= bound {
                        out.add_term(exp(m * m, 4 * n), z, BigInt::one());
                        any = true;
                    }
                }
                if !any && k > 0 {
                    break;
                }
                k += 1;
            }
            cut(out)
        }
        SeriesKind::Kappa { j, n } => cut(&eta_theta_truncated(SeriesKind::Theta { j, n }, order)? * &inv_eta()),
        SeriesKind::ChiMinusEighth => eta_theta_truncated(SeriesKind::Kappa { j: 0, n: 2 }, order)?,
        SeriesKind::ChiThreeEighths => eta_theta_truncated(SeriesKind::Kappa { j: 2, n: 2 }, order)?,
        SeriesKind::ChiZero | SeriesKind::ChiOne => {
            let theta = eta_theta_truncated(SeriesKind::Theta { j: 1, n: 2 }, order)?;
            let cube = eta_theta_truncated(SeriesKind::EtaCubed, order)?;
            let num = if kind == SeriesKind::ChiZero { &theta + &cube } else { &theta - &cube };
            cut(&num * &inv_eta()).div_exact(2)?
        }
    })
}

/// Σ_{j=0}^{3} κ_j(q) κ_j(q̄), both chiralities truncated at `order`.
pub fn continuum_partition(order: u32) -> Result<QExponentPoly> {
    let mut out = QExponentPoly::zero();
    for j in 0..4 {
        let k = eta_theta_truncated(SeriesKind::Kappa { j, n: 2 }, order)?;
        out = &out + &(&k * &k.swap());
    }
    Ok(out)
}

/// Compares the finitized MIPF with the continuum assembly on every term whose
/// q- and q̄-levels (exponent + 1/24) are both at most `cutoff`.
pub fn continuum_compare(n: usize, cutoff: u32) -> Result<Report> {
    let forms = finitized_mipf(n)?;
    let cont = continuum_partition(cutoff + 1)?;
    let lim = int_exp(cutoff as i64) - exp(1, 24);
    let a = forms.sector_sum.truncate(lim, lim);
    let b = cont.truncate(lim, lim);
    let mut rep = Report::new(format!("continuum N={n} cutoff={cutoff}"), 0.0);
    rep.note(format!("{} terms compared", b.len()));
    if let Some((k, x, y)) = a.first_difference(&b) {
        rep.fail(format!("first difference at ({}, {}): finitized {x}, continuum {y}", k.0, k.1));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn printed_binomials() {
        assert_eq!(gaussian_coeffs(7, 5), ints(&[1, 1, 2, 2, 3, 3, 3, 2, 2, 1, 1]));
        assert_eq!(gaussian_coeffs(6, 2), ints(&[1, 1, 2, 2, 3, 2, 2, 1, 1]));
        assert_eq!(gaussian_coeffs(5, 0), ints(&[1]));
        assert!(gaussian_binomial(2, 3).is_err());
    }

    #[test]
    fn pascal_recurrence() {
        for n in 1..12 {
            for m in 1..n {
                let lhs = QExponentPoly::from_coeffs(&gaussian_coeffs(n, m));
                let a = QExponentPoly::from_coeffs(&gaussian_coeffs(n - 1, m - 1));
                let b = QExponentPoly::from_coeffs(&gaussian_coeffs(n - 1, m)).shift(int_exp(m as i64), int_exp(0));
                assert_eq!(lhs, &a + &b);
            }
        }
    }

    #[test]
    fn printed_columns() {
        let check = |class, n, s, m| {
            assert_eq!(column_generating_function(class, n, s).unwrap(), gaussian_binomial(n, m).unwrap());
        };
        check(Class::Z4, 7, -2, 5);
        check(Class::Ramond, 6, 1, 2);
        check(Class::NeveuSchwarz, 7, 1, 2);
        assert!(column_generating_function(Class::Ramond, 5, 0).is_err());
        assert!(column_generating_function(Class::Z4, 3, 5).unwrap().is_zero());
    }

    #[test]
    fn sector_counts() {
        for n in 1..=9usize {
            for ell in (n % 2..=n).step_by(2) {
                let z = finitized_sector_partition(n, ell).unwrap();
                let d = (n - ell) / 2;
                assert_eq!(z.at_one(), BigInt::from(crate::cylinder::binomial(n, d)), "N={n} l={ell}");
            }
        }
        assert!(finitized_sector_partition(4, 1).is_err());
    }

    #[test]
    fn z4_sum_matches_product() {
        for n in (1..=9).step_by(2) {
            let mut sum = QExponentPoly::zero();
            for ell in (1..=n).step_by(2) {
                sum = &sum + &finitized_sector_partition(n, ell).unwrap();
                assert_eq!(finitized_sector_partition(n, ell).unwrap(), finitized_sector_partition_alt(n, ell).unwrap());
            }
            assert_eq!(sum, z4_product_form(n).unwrap(), "N={n}");
        }
    }

    #[test]
    fn mipf_small() {
        for n in [2, 4, 6] {
            assert!(verify_mipf(n).unwrap().pass);
        }
        let f = finitized_mipf(4).unwrap();
        assert_eq!(f.product.at_one(), BigInt::from(16));
    }

    #[test]
    fn eta_leading_terms() {
        // the q^{1/24 + 7} term lies beyond order 7, so truncate at 8
        let eta = eta_theta_truncated(SeriesKind::Eta, 8).unwrap();
        let c = |k: i64| eta.coeff(exp(1, 24) + int_exp(k), int_exp(0));
        let got: Vec<BigInt> = (0..8).map(c).collect();
        assert_eq!(got, ints(&[1, -1, -1, 0, 0, 1, 0, 1]));
        let cube = &(&eta * &eta) * &eta;
        let direct = eta_theta_truncated(SeriesKind::EtaCubed, 7).unwrap();
        assert_eq!(cube.truncate(int_exp(7), int_exp(0)), direct);
    }

    #[test]
    fn theta_and_characters() {
        let t = eta_theta_truncated(SeriesKind::Theta { j: 0, n: 2 }, 4).unwrap();
        // (4k)²/8 = 2k²: exponents 0, 2, 8, ...
        assert_eq!(t.coeff(int_exp(0), int_exp(0)), BigInt::one());
        assert_eq!(t.coeff(int_exp(2), int_exp(0)), BigInt::from(2));
        assert_eq!(t.len(), 2);
        let sum = &eta_theta_truncated(SeriesKind::ChiZero, 10).unwrap() + &eta_theta_truncated(SeriesKind::ChiOne, 10).unwrap();
        assert_eq!(sum, eta_theta_truncated(SeriesKind::Kappa { j: 1, n: 2 }, 10).unwrap());
        assert!(eta_theta_truncated(SeriesKind::ChiOne, 10).unwrap().nonnegative());
    }

    #[test]
    fn continuum_low_order() {
        assert!(continuum_compare(8, 2).unwrap().pass);
    }
}
