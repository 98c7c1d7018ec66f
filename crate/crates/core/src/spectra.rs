//! Exact eigenvalues from the factorized inversion identity, their string
//! content, and cross-checks against dense spectra and finitized characters.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::One;

use crate::cylinder::{sector_decompose, transfer_matrix, Class, SectorLabel};
use crate::error::{cap, Result};
use crate::linalg::{eigenvalues, C64, I, ONE};
use crate::model::ModelParams;
use crate::qseries::{exp, finitized_sector_partition, int_exp, Exponent, QExponentPoly};
use crate::report::Report;

pub const MAX_CANDIDATE_SITES: usize = 20;

/// How the overall sign of each eigenvalue is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignRule {
    Derived,
    /// Drops every overall sign; a negative control.
    Unsigned,
}

/// One physical eigenvalue, labelled by its sign vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueCandidate {
    pub n: usize,
    pub ell: usize,
    pub class: Class,
    /// ε_1..ε_N. For NS, ε_{N/2} and ε_N label zero-energy slots rather than factors.
    pub signs: Vec<i8>,
    pub overall: i8,
}

/// Angle t_j of factor j (1-based) for the class.
pub fn factor_angle(class: Class, n: usize, j: usize) -> f64 {
    let (j, nf) = (j as f64, n as f64);
    match class {
        Class::Z4 => (2.0 * j - 1.0) * PI / (4.0 * nf),
        Class::Ramond => (2.0 * j - 1.0) * PI / (2.0 * nf),
        Class::NeveuSchwarz => j * PI / nf,
    }
}

fn is_factor(class: Class, n: usize, j: usize) -> bool {
    class != Class::NeveuSchwarz || (j != n / 2 && j != n)
}

impl EigenvalueCandidate {
    fn eps(&self, j: usize) -> i8 {
        self.signs[j - 1]
    }

    /// Λ(u) at normalisation ρ.
    pub fn value(&self, u: f64, rho: f64) -> C64 {
        let n = self.n;
        let nf = n as f64;
        let z2 = C64::from_polar(1.0, 2.0 * u);
        let mut prod = ONE;
        for j in 1..=n {
            if is_factor(self.class, n, j) {
                let t = libm::tan(factor_angle(self.class, n, j));
                prod *= z2 + I * (self.eps(j) as f64 * t);
            }
        }
        let pre = match self.class {
            Class::Z4 => C64::from_polar(1.0, -PI * nf / 4.0 - nf * u) / libm::pow(2.0, nf - 0.5),
            Class::Ramond => C64::from_polar(1.0, -PI * nf / 4.0 - nf * u) / libm::pow(2.0, nf - 1.0),
            Class::NeveuSchwarz => {
                C64::from_polar(nf, -PI / 2.0 * (nf - 2.0) / 2.0 + (2.0 - nf) * u) / libm::pow(2.0, nf - 1.0)
            }
        };
        pre * prod * (self.overall as f64) * libm::pow(rho, nf)
    }
}

/// Constraint on ε for sector ℓ, and the overall sign.
fn admissible(n: usize, ell: usize, class: Class, e: &[i8]) -> bool {
    match class {
        Class::Z4 => {
            let target = if ell % 4 == 3 { ell as i64 } else { -(ell as i64) };
            let s: i64 = e.iter().enumerate().map(|(k, &x)| if (k + 1) % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            let _ = n;
            s == target
        }
        _ => e.iter().map(|&x| x as i64).sum::<i64>() == -(ell as i64),
    }
}

fn overall_sign(n: usize, ell: usize, class: Class, e: &[i8], rule: SignRule) -> i8 {
    if rule == SignRule::Unsigned {
        return 1;
    }
    let parity = |k: usize| if k % 2 == 0 { 1 } else { -1 };
    match class {
        Class::Z4 => parity((ell + 1) / 4),
        Class::Ramond => parity((ell + 2) / 4),
        Class::NeveuSchwarz => parity((ell + 2) / 4) * e[n / 2 - 1],
    }
}

/// All candidates of sector ℓ (shared by d and N − d).
pub fn sector_candidates(n: usize, ell: usize, rule: SignRule) -> Result<Vec<EigenvalueCandidate>> {
    cap("N", n, MAX_CANDIDATE_SITES)?;
    let class = Class::of(n, ell);
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let e: Vec<i8> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
        if admissible(n, ell, class, &e) {
            let overall = overall_sign(n, ell, class, &e, rule);
            out.push(EigenvalueCandidate {
                n,
                ell,
                class,
                signs: e,
                overall,
            });
        }
    }
    Ok(out)
}

pub type Spectrum = Vec<(SectorLabel, C64)>;

pub fn candidate_spectrum_with(n: usize, u: f64, rho: f64, rule: SignRule) -> Result<Spectrum> {
    let mut out = Vec::new();
    for d in 0..=n {
        let label = SectorLabel::new(n, d);
        for c in sector_candidates(n, label.ell, rule)? {
            out.push((label, c.value(u, rho)));
        }
    }
    Ok(out)
}

pub fn candidate_spectrum(n: usize, u: f64, rho: f64) -> Result<Spectrum> {
    candidate_spectrum_with(n, u, rho, SignRule::Derived)
}

pub fn numerical_spectrum(n: usize, u: f64, rho: f64) -> Result<Spectrum> {
    let t = transfer_matrix(n, &ModelParams::free_fermion(u).with_rho(rho))?;
    let mut out = Vec::new();
    for b in sector_decompose(&t)?.blocks {
        for ev in eigenvalues(&b.matrix) {
            out.push((b.label, ev));
        }
    }
    Ok(out)
}

/// Sector-by-sector greedy matching.
pub fn match_spectra(cand: &Spectrum, num: &Spectrum, tol: f64) -> Report {
    let mut rep = Report::new("candidate vs numerical spectrum", tol);
    let n = cand.first().or(num.first()).map(|(l, _)| l.n).unwrap_or(0);
    for d in 0..=n {
        let pick = |s: &Spectrum| -> Vec<C64> { s.iter().filter(|(l, _)| l.d == d).map(|(_, v)| *v).collect() };
        let (a, b) = (pick(cand), pick(num));
        match crate::linalg::match_multisets(&a, &b) {
            Some(w) => {
                rep.record(w);
                if w > tol {
                    rep.note(format!("d={d}: worst matched distance {w:.3e}"));
                }
            }
            None => rep.fail(format!("d={d}: {} candidates vs {} eigenvalues", a.len(), b.len())),
        }
    }
    rep
}

pub fn verify_spectrum(n: usize, u: f64, tol: f64) -> Result<Report> {
    let mut rep = match_spectra(&candidate_spectrum(n, u, 1.0)?, &numerical_spectrum(n, u, 1.0)?, tol);
    rep.name = format!("spectral coincidence N={n} u={u}");
    Ok(rep)
}

/// One column slot of a string diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub position: usize,
    pub energy: Exponent,
    pub one_strings: u8,
    pub two_strings: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StringDiagram {
    pub class: Class,
    pub ell: usize,
    /// y_j = −½ log|tan t_j| per sign index; infinite for the NS zero-energy slots.
    pub ordinates: Vec<f64>,
    /// Whether sign index j carries a 1-string (Re u = π/4).
    pub one_string: Vec<bool>,
    pub upper: Vec<Slot>,
    pub lower: Vec<Slot>,
    pub sigma: i64,
    pub sigma_bar: i64,
    pub energy: Exponent,
    pub energy_bar: Exponent,
}

/// Constant exponent shift separating the string energy from the character exponent.
pub fn class_shift(class: Class) -> Exponent {
    match class {
        Class::Z4 => exp(-3, 32),
        Class::Ramond => exp(-1, 8),
        Class::NeveuSchwarz => int_exp(0),
    }
}

pub fn string_analysis(c: &EigenvalueCandidate) -> StringDiagram {
    let n = c.n;
    let ordinates = (1..=n)
        .map(|j| {
            if is_factor(c.class, n, j) {
                -0.5 * libm::log(libm::fabs(libm::tan(factor_angle(c.class, n, j))))
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let one_string: Vec<bool> = (1..=n)
        .map(|j| {
            if is_factor(c.class, n, j) {
                (c.eps(j) as f64) * libm::tan(factor_angle(c.class, n, j)) < 0.0
            } else {
                c.eps(j) == 1
            }
        })
        .collect();
    let os = |j: usize| one_string[j - 1] as u8;
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    let (mut sigma, mut sigma_bar) = (0i64, 0i64);
    match c.class {
        Class::Z4 => {
            let e = |p: usize| exp(2 * p as i64 - 1, 4);
            let parity = |p: usize| if p % 2 == 0 { 1 } else { -1 };
            for j in 1..=n {
                let m = os(j);
                if j <= n.div_ceil(2) {
                    upper.push(Slot { position: j, energy: e(j), one_strings: m, two_strings: 1 - m });
                    sigma += parity(j) * m as i64;
                } else {
                    let p = n + 1 - j;
                    lower.push(Slot { position: p, energy: e(p), one_strings: m, two_strings: 1 - m });
                    sigma_bar += parity(p) * m as i64;
                }
            }
        }
        Class::Ramond => {
            let half = n / 2;
            let nu = (n + 2) / 4;
            for p in 1..=half {
                let (a, b) = (os(p), os(n + 1 - p));
                let (pos, side, sig) = if p <= nu {
                    (p, &mut upper, &mut sigma)
                } else {
                    (half + 1 - p, &mut lower, &mut sigma_bar)
                };
                side.push(Slot { position: pos, energy: exp(2 * pos as i64 - 1, 2), one_strings: a + b, two_strings: 2 - a - b });
                *sig += a as i64 - b as i64;
            }
        }
        Class::NeveuSchwarz => {
            let nu = n / 4;
            upper.push(Slot { position: 0, energy: int_exp(0), one_strings: os(n), two_strings: 1 - os(n) });
            lower.push(Slot { position: 0, energy: int_exp(0), one_strings: os(n / 2), two_strings: 1 - os(n / 2) });
            sigma -= os(n) as i64;
            sigma_bar -= os(n / 2) as i64;
            for p in 1..n / 2 {
                let (a, b) = (os(p), os(n - p));
                let (pos, side, sig) = if p <= nu {
                    (p, &mut upper, &mut sigma)
                } else {
                    (n / 2 - p, &mut lower, &mut sigma_bar)
                };
                side.push(Slot { position: pos, energy: int_exp(pos as i64), one_strings: a + b, two_strings: 2 - a - b });
                *sig += a as i64 - b as i64;
            }
        }
    }
    let total = |s: &[Slot]| s.iter().map(|x| x.energy * x.one_strings as i64).sum::<Exponent>();
    StringDiagram {
        class: c.class,
        ell: c.ell,
        energy: total(&upper),
        energy_bar: total(&lower),
        ordinates,
        one_string,
        upper,
        lower,
        sigma,
        sigma_bar,
    }
}

/// Required value of σ + σ̄ in sector ℓ.
pub fn selection_target(class: Class, ell: usize) -> i64 {
    let l = ell as i64;
    match class {
        Class::Z4 if ell % 4 == 1 => (l - 1) / 2,
        Class::Z4 => -(l + 1) / 2,
        Class::Ramond => l / 2,
        Class::NeveuSchwarz => (l - 2) / 2,
    }
}

/// Checks the selection rules for every candidate that matched a numerical eigenvalue.
pub fn verify_selection_rules(n: usize, u: f64) -> Result<Report> {
    let mut rep = Report::new(format!("selection rules N={n} u={u}"), 1e-8);
    rep.absorb(&verify_spectrum(n, u, 1e-8)?);
    for ell in (n % 2..=n).step_by(2) {
        for c in sector_candidates(n, ell, SignRule::Derived)? {
            let s = string_analysis(&c);
            let want = selection_target(c.class, ell);
            if s.sigma + s.sigma_bar != want || (s.sigma - s.sigma_bar) % 2 != 0 {
                rep.fail(format!(
                    "l={ell} signs {:?}: (sigma, sigma_bar) = ({}, {}), want sum {want}",
                    c.signs, s.sigma, s.sigma_bar
                ));
            }
        }
    }
    Ok(rep)
}

/// Σ over sector-ℓ eigenvalues of q^{1/12 + shift + E} q̄^{1/12 + shift + Ē}.
pub fn string_generating_function(n: usize, ell: usize) -> Result<QExponentPoly> {
    let mut out = QExponentPoly::zero();
    for c in sector_candidates(n, ell, SignRule::Derived)? {
        let s = string_analysis(&c);
        let base = exp(1, 12) + class_shift(c.class);
        out.add_term(base + s.energy, base + s.energy_bar, BigInt::one());
    }
    Ok(out)
}

pub fn character_crosscheck(n: usize, ell: usize) -> Result<Report> {
    let lhs = string_generating_function(n, ell)?;
    let rhs = finitized_sector_partition(n, ell)?;
    let mut rep = Report::new(format!("character cross-check N={n} l={ell}"), 0.0);
    if let Some((k, a, b)) = lhs.first_difference(&rhs) {
        rep.fail(format!("first difference at ({}, {}): strings {a}, finitized {b}", k.0, k.1));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn isotropic_n2() {
        let c = candidate_spectrum(2, FRAC_PI_4, SQRT_2).unwrap();
        let mut re: Vec<f64> = c.iter().map(|(_, v)| v.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in re.iter().zip([0.0, 2.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn candidate_counts_match_dimensions() {
        for n in 1..=9 {
            let total = candidate_spectrum(n, 0.2, 1.0).unwrap().len();
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn unsigned_rule_fails() {
        for n in [3, 4, 5, 6] {
            let cand = candidate_spectrum_with(n, 0.3, 1.0, SignRule::Unsigned).unwrap();
            let num = numerical_spectrum(n, 0.3, 1.0).unwrap();
            assert!(!match_spectra(&cand, &num, 1e-8).pass, "N={n}");
        }
    }

    #[test]
    fn ns_ordinates() {
        let c = &sector_candidates(12, 2, SignRule::Derived).unwrap()[0];
        let s = string_analysis(c);
        for j in 1..=5 {
            let want = -0.5 * libm::log(libm::tan(j as f64 * PI / 12.0));
            assert!((s.ordinates[j - 1] - want).abs() < 1e-14);
        }
    }

    #[test]
    fn ramond_ground_state() {
        for n in [4usize, 8] {
            for ell in (0..=n).step_by(4) {
                let best = sector_candidates(n, ell, SignRule::Derived)
                    .unwrap()
                    .iter()
                    .map(string_analysis)
                    .min_by_key(|s| s.energy + s.energy_bar)
                    .unwrap();
                let q = (ell / 4) as i64;
                assert_eq!((best.sigma, best.sigma_bar), (q, q), "N={n} l={ell}");
            }
        }
    }

    #[test]
    fn slots_fill() {
        for n in 2..=7 {
            for ell in (n % 2..=n).step_by(2) {
                for c in sector_candidates(n, ell, SignRule::Derived).unwrap() {
                    let s = string_analysis(&c);
                    for slot in s.upper.iter().chain(&s.lower) {
                        let cap = if c.class == Class::Z4 || slot.position == 0 { 1 } else { 2 };
                        assert_eq!(slot.one_strings + slot.two_strings, cap);
                    }
                }
            }
        }
    }

    #[test]
    fn small_crosschecks() {
        assert!(character_crosscheck(4, 0).unwrap().pass);
        assert!(character_crosscheck(5, 1).unwrap().pass);
        assert!(character_crosscheck(2, 2).unwrap().pass);
    }
}
