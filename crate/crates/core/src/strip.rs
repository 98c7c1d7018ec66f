//! Double-row transfer matrices on the strip with vacuum boundaries, the
//! open XX Hamiltonian and its Jordan structure.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::algebra::{check_sites, fermion_operator, tl_generator, FermionKind};
use crate::error::{cap, Error, Result};
use crate::field::{ExactMatrix, Qi2};
use crate::linalg::{
    commutator, dist, dist_scalar, eigenvalues, identity, max_abs, rank, singular_values, CMat, Operator, C64, I,
    ZERO,
};
use crate::model::{FaceTensor, FaceWeights, Orientation};
use crate::report::Report;

pub const MAX_STRIP_SITES: usize = 10;
pub const MAX_EXACT_DIM: usize = 16;

/// Which arrow pattern of the left boundary arc carries x = i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcOrientation {
    /// x⁻¹ on (lower in, upper out); gives D(0) = +I.
    Swapped,
    /// x on (lower in, upper out); gives D(0) = −I.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripConvention {
    pub arcs: ArcOrientation,
    /// Exchanges the gauge phases of the two c-tiles in both rows.
    pub mirrored: bool,
}

impl Default for StripConvention {
    fn default() -> Self {
        StripConvention {
            arcs: ArcOrientation::Swapped,
            mirrored: false,
        }
    }
}

fn row_tensor(u: C64, upper: bool, mirrored: bool) -> FaceTensor {
    let (c, s) = (u.cos(), u.sin());
    let phase = (I * u).exp();
    let (p1, p2) = if upper ^ mirrored { (phase, phase.inv()) } else { (phase.inv(), phase) };
    let w = if upper { FaceWeights::new(s, c, p1, p2) } else { FaceWeights::new(c, s, p1, p2) };
    FaceTensor::new(&w, Orientation::OddRow)
}

/// Normalised double-row transfer matrix D(u) in the occupation basis.
pub fn double_row_transfer_with(n: usize, u: C64, conv: StripConvention) -> Result<Operator> {
    check_sites(n)?;
    if n < 2 {
        return Err(Error::InvalidParameter("strip needs N >= 2".into()));
    }
    cap("strip sites", n, MAX_STRIP_SITES)?;
    let norm = (u * 2.0).sin();
    if norm.norm() < 1e-12 {
        return Err(Error::InvalidParameter(format!("sin 2u vanishes at u = {u}; use the limit")));
    }
    let lower = row_tensor(u, false, conv.mirrored);
    let upper = row_tensor(u, true, conv.mirrored);
    // local[a][b][h][k][h2][k2]: lower tile (a, h, c, h2) times upper tile (c, k, b, k2), summed over c
    let mut local = [[[[[[ZERO; 2]; 2]; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for h in 0..2 {
                for k in 0..2 {
                    for h2 in 0..2 {
                        for k2 in 0..2 {
                            local[a][b][h][k][h2][k2] =
                                (0..2).map(|c| lower.get(a, h, c, h2) * upper.get(c, k, b, k2)).sum();
                        }
                    }
                }
            }
        }
    }
    let x = match conv.arcs {
        ArcOrientation::Swapped => -I,
        ArcOrientation::Literal => I,
    };
    let mut start = [[ZERO; 2]; 2];
    start[1][0] = x;
    start[0][1] = x.inv();

    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for a in 0..dim {
        // partial out-states b (bits below j) with their boundary vectors
        let mut frontier: Vec<(usize, [[C64; 2]; 2])> = vec![(0, start)];
        for j in 0..n {
            let aj = (a >> j) & 1;
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for (b, v) in &frontier {
                for bj in 0..2 {
                    let mut nv = [[ZERO; 2]; 2];
                    for h in 0..2 {
                        for k in 0..2 {
                            if v[h][k] == ZERO {
                                continue;
                            }
                            for h2 in 0..2 {
                                for k2 in 0..2 {
                                    nv[h2][k2] += v[h][k] * local[aj][bj][h][k][h2][k2];
                                }
                            }
                        }
                    }
                    if nv.iter().flatten().any(|z| *z != ZERO) {
                        next.push((b | (bj << j), nv));
                    }
                }
            }
            frontier = next;
        }
        for (b, v) in frontier {
            m[(b, a)] = (v[0][1] + v[1][0]) / norm;
        }
    }
    Ok(Operator::new(n, false, m))
}

pub fn double_row_transfer(n: usize, u: f64) -> Result<Operator> {
    double_row_transfer_with(n, C64::new(u, 0.0), StripConvention::default())
}

/// (Σ_{k<N} cos^{2k}u sin^{2(N−1−k)}u)², the strip inversion scalar.
pub fn strip_inversion_scalar(n: usize, u: C64) -> C64 {
    let (c2, s2) = (u.cos() * u.cos(), u.sin() * u.sin());
    let mut sum = ZERO;
    for k in 0..n {
        sum += c2.powu(k as u32) * s2.powu((n - 1 - k) as u32);
    }
    sum * sum
}

pub fn verify_inversion_strip(n: usize, u: f64) -> Result<Report> {
    let d = double_row_transfer(n, u)?.matrix;
    let e = double_row_transfer(n, u + FRAC_PI_2)?.matrix;
    let scalar = strip_inversion_scalar(n, C64::new(u, 0.0));
    let mut rep = Report::new(format!("strip inversion N={n} u={u}"), 1e-10);
    rep.record(dist_scalar(&(&d * &e), scalar) / scalar.norm().max(1.0));
    Ok(rep)
}

pub fn verify_strip_commutation(n: usize, u: f64, v: f64) -> Result<Report> {
    let a = double_row_transfer(n, u)?.matrix;
    let b = double_row_transfer(n, v)?.matrix;
    let mut rep = Report::new(format!("strip commutation N={n} u={u} v={v}"), 1e-10);
    rep.record(max_abs(&commutator(&a, &b)));
    Ok(rep)
}

/// H = −Σ_{j<N} e_j with the open tile generators.
pub fn strip_hamiltonian(n: usize) -> Result<Operator> {
    check_sites(n)?;
    if n < 2 {
        return Err(Error::InvalidParameter("strip needs N >= 2".into()));
    }
    let dim = 1usize << n;
    let mut h = CMat::zeros(dim, dim);
    for j in 1..n {
        h -= tl_generator(n, j, false)?.matrix;
    }
    Ok(Operator::new(n, false, h))
}

/// −Σ (f_j†f_{j+1} + f_{j+1}†f_j) − i(n_1 − n_N).
pub fn strip_hamiltonian_fermionic(n: usize) -> Result<CMat> {
    check_sites(n)?;
    let op = |j, k| fermion_operator(n, j, k).map(|o| o.matrix);
    let dim = 1usize << n;
    let mut h = CMat::zeros(dim, dim);
    for j in 1..n {
        let hop = op(j, FermionKind::Create)? * op(j + 1, FermionKind::Annihilate)?
            + op(j + 1, FermionKind::Create)? * op(j, FermionKind::Annihilate)?;
        h -= hop;
    }
    h -= (op(1, FermionKind::Number)? - op(n, FermionKind::Number)?) * I;
    Ok(h)
}

pub fn verify_strip_forms(n: usize) -> Result<Report> {
    let mut rep = Report::new(format!("strip Hamiltonian tile vs fermionic N={n}"), 1e-14);
    rep.record(dist(&strip_hamiltonian(n)?.matrix, &strip_hamiltonian_fermionic(n)?));
    Ok(rep)
}

/// log(I + X) by its power series; requires ‖X‖ small.
fn log_near_identity(m: &CMat) -> Result<CMat> {
    let dim = m.nrows();
    let x = m - identity(dim);
    let size = max_abs(&x) * dim as f64;
    if size > 0.1 {
        return Err(Error::Numerical(format!("matrix too far from identity for series log ({size:.2e})")));
    }
    let mut out = CMat::zeros(dim, dim);
    let mut power = x.clone();
    for k in 1..200 {
        let term = &power / C64::new(k as f64, 0.0);
        if k % 2 == 1 {
            out += &term;
        } else {
            out -= &term;
        }
        if max_abs(&term) < 1e-20 {
            break;
        }
        power = &power * &x;
    }
    Ok(out)
}

/// −½ d/du log D(u) near u = 0, by a central difference of step h around u = h.
pub fn hamiltonian_from_transfer(n: usize, conv: StripConvention) -> Result<CMat> {
    let h = 1e-4;
    let d = |u: f64| double_row_transfer_with(n, C64::new(u, 0.0), conv).map(|o| o.matrix);
    let d1 = d(0.5 * h)?;
    // D(0) = ±I depending on the arc orientation; strip the sign before the logarithm
    let sign = if d1[(0, 0)].re < 0.0 { -1.0 } else { 1.0 };
    let lo = log_near_identity(&(d1 * C64::new(sign, 0.0)))?;
    let hi = log_near_identity(&(d(1.5 * h)? * C64::new(sign, 0.0)))?;
    Ok((hi - lo) * C64::new(-0.5 / h, 0.0))
}

/// Distance between two operators modulo a multiple of the identity, and that multiple.
pub fn dist_mod_scalar(a: &CMat, b: &CMat) -> (f64, C64) {
    let diff = a - b;
    let s = diff.trace() / C64::new(diff.nrows() as f64, 0.0);
    (dist_scalar(&diff, s), s)
}

pub fn verify_hamiltonian_derivative(n: usize) -> Result<Report> {
    cap("strip sites", n, 8)?;
    let h = strip_hamiltonian(n)?.matrix;
    let mut rep = Report::new(format!("strip Hamiltonian from -1/2 dlog D, N={n}"), 1e-5);

    let from_d = hamiltonian_from_transfer(n, StripConvention::default())?;
    let (res, s) = dist_mod_scalar(&from_d, &h);
    rep.record(res);
    rep.note(format!("scalar offset {:.3e}{:+.3e}i", s.re, s.im));

    let near = double_row_transfer(n, 1e-5)?.matrix;
    let dev = dist(&near, &identity(1 << n));
    if dev > 1e-4 {
        rep.fail(format!("D(1e-5) deviates from I by {dev:.3e}"));
    }
    let comm = max_abs(&commutator(&h, &double_row_transfer(n, 0.6)?.matrix));
    if comm > 1e-10 {
        rep.fail(format!("[H, D(0.6)] = {comm:.3e}"));
    }
    rep.note(format!("|D(1e-5) - I| = {dev:.3e}, |[H, D(0.6)]| = {comm:.3e}"));

    let mirrored = StripConvention {
        mirrored: true,
        ..StripConvention::default()
    };
    let (mres, _) = dist_mod_scalar(&hamiltonian_from_transfer(n, mirrored)?, &h);
    rep.note(format!("mirrored tiles: residual {mres:.3e} (boundary term reversed)"));
    Ok(rep)
}

/// A zero of the strip inversion scalar: tan u = e^{iπk/N}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripZero {
    pub k: usize,
    pub u: C64,
    /// E = N/2 − k; the ordinate is ±½ log cot(|E|π/2N), signed like E.
    pub energy: f64,
    pub ordinate: f64,
    /// |scalar(u)| at the zero.
    pub residual: f64,
}

pub fn strip_zeros(n: usize) -> Vec<StripZero> {
    let nf = n as f64;
    (1..n)
        .filter(|&k| 2 * k != n)
        .map(|k| {
            // the scalar is even in u; fold the zero onto Re u = +π/4
            let mut u = C64::from_polar(1.0, PI * k as f64 / nf).atan();
            if u.re < 0.0 {
                u = -u;
            }
            let energy = nf / 2.0 - k as f64;
            StripZero {
                k,
                u,
                energy,
                ordinate: -0.5 * energy.signum() * libm::log(libm::tan(libm::fabs(energy) * PI / (2.0 * nf))),
                residual: strip_inversion_scalar(n, u).norm(),
            }
        })
        .collect()
}

/// Zeros lie on Re u = π/4 with the predicted ordinates.
pub fn verify_strip_zeros(n: usize) -> Report {
    let mut rep = Report::new(format!("strip inversion zeros N={n}"), 1e-9);
    for z in strip_zeros(n) {
        rep.record(z.residual);
        rep.record(libm::fabs(z.u.re - FRAC_PI_4));
        rep.record(libm::fabs(z.u.im - z.ordinate));
    }
    rep
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanEntry {
    pub eigenvalue: C64,
    /// Block sizes, largest first.
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct JordanSpectrum {
    pub entries: Vec<JordanEntry>,
}

impl JordanSpectrum {
    pub fn dim(&self) -> usize {
        self.entries.iter().flat_map(|e| e.blocks.iter()).sum()
    }

    /// Entry whose eigenvalue is within `tol` of `z`.
    pub fn find(&self, z: C64, tol: f64) -> Option<&JordanEntry> {
        self.entries.iter().find(|e| (e.eigenvalue - z).norm() < tol)
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.entries.iter().all(|e| e.blocks.iter().all(|&b| b == 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JordanMode {
    /// Relative singular-value threshold for kernel ranks.
    Numeric(f64),
    /// Rational arithmetic in ℚ(i, √2).
    Exact,
}

const CLUSTER_TOL: f64 = 1e-6;

/// Block sizes from ranks r_0 = dim, r_1, r_2, … of (H − λ)^k.
fn blocks_from_ranks(ranks: &[usize]) -> Vec<usize> {
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut blocks = Vec::new();
    for (k, &c) in at_least.iter().enumerate() {
        let exactly = c - at_least.get(k + 1).copied().unwrap_or(0);
        blocks.extend(core::iter::repeat(k + 1).take(exactly));
    }
    blocks.reverse();
    blocks
}

fn clusters(values: &[C64]) -> Vec<(C64, usize)> {
    let mut out: Vec<(C64, usize)> = Vec::new();
    for &z in values {
        match out.iter_mut().find(|(c, _)| (*c - z).norm() < CLUSTER_TOL) {
            Some((c, m)) => {
                *c = (*c * *m as f64 + z) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => out.push((z, 1)),
        }
    }
    out
}

pub fn jordan_structure(h: &CMat, mode: JordanMode) -> Result<JordanSpectrum> {
    if h.nrows() != h.ncols() {
        return Err(Error::Dimension(format!("{}x{} is not square", h.nrows(), h.ncols())));
    }
    match mode {
        JordanMode::Numeric(tol) => jordan_numeric(h, tol),
        JordanMode::Exact => jordan_exact(h),
    }
}

fn jordan_numeric(h: &CMat, tol: f64) -> Result<JordanSpectrum> {
    let dim = h.nrows();
    cap("matrix dimension", dim, 1 << 8)?;
    let scale = singular_values(h).first().copied().unwrap_or(0.0).max(1.0);
    let mut entries = Vec::new();
    for (lambda, mult) in clusters(&eigenvalues(h)) {
        let a = h - identity(dim) * lambda;
        let mut ranks = vec![dim];
        let mut power = identity(dim);
        while ranks.len() <= mult + 1 {
            power = &power * &a;
            let r = rank(&power, tol * scale);
            let done = r == *ranks.last().unwrap_or(&dim);
            ranks.push(r);
            if done {
                break;
            }
        }
        let blocks = blocks_from_ranks(&ranks);
        if blocks.iter().sum::<usize>() != mult {
            return Err(Error::Numerical(format!(
                "ill-conditioned cluster at {lambda}: multiplicity {mult}, blocks {blocks:?}; use exact mode"
            )));
        }
        entries.push(JordanEntry { eigenvalue: lambda, blocks });
    }
    Ok(JordanSpectrum { entries })
}

fn jordan_exact(h: &CMat) -> Result<JordanSpectrum> {
    let dim = h.nrows();
    cap("exact matrix dimension", dim, MAX_EXACT_DIM)?;
    let exact = ExactMatrix::from_numeric(h, 8, 1e-12)
        .ok_or_else(|| Error::Numerical("entries are not small elements of Q(i, sqrt 2)".into()))?;
    let mut eigen: Vec<Qi2> = Vec::new();
    for (z, _) in clusters(&eigenvalues(h)) {
        let q = Qi2::identify(z, 8, 1e-5)
            .ok_or_else(|| Error::Numerical(format!("eigenvalue {z} not identified in Q(i, sqrt 2)")))?;
        if !eigen.contains(&q) {
            eigen.push(q);
        }
    }
    let mut entries = Vec::new();
    for lambda in eigen {
        let a = exact.shift(&lambda);
        let mut ranks = vec![dim];
        let mut power = ExactMatrix::identity(dim);
        loop {
            power = power.mul(&a);
            let r = power.rank();
            let done = r == *ranks.last().unwrap_or(&dim);
            ranks.push(r);
            if done {
                break;
            }
        }
        if ranks[1] == dim {
            return Err(Error::Numerical(format!("{} is not an exact eigenvalue", lambda.to_c64())));
        }
        entries.push(JordanEntry {
            eigenvalue: lambda.to_c64(),
            blocks: blocks_from_ranks(&ranks),
        });
    }
    let spec = JordanSpectrum { entries };
    if spec.dim() != dim {
        return Err(Error::Numerical(format!("block sizes sum to {} instead of {dim}", spec.dim())));
    }
    Ok(spec)
}

/// Imaginary parts of the strip Hamiltonian eigenvalues, largest modulus.
pub fn spectrum_imaginary_part(n: usize) -> Result<f64> {
    let h = strip_hamiltonian(n)?.matrix;
    Ok(eigenvalues(&h).iter().fold(0.0, |m, z| m.max(libm::fabs(z.im))))
}
