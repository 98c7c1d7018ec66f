//! Periodic single-row transfer matrices, their particle-number blocks and
//! the cylinder inversion identities.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::algebra::{check_sites, fermion_operator, tl_generator, FermionKind};
use crate::error::{Error, Result};
use crate::linalg::{
    commutator, dist, dist_scalar, eigenvalues, identity, max_abs, submatrix, CMat, Operator, C64, ONE, ZERO,
};
use crate::model::{face_weights, FaceTensor, FaceWeights, ModelParams, Orientation};
use crate::report::Report;

/// Sector class of the conserved magnetization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    /// N odd.
    Z4,
    /// N even, ℓ/2 even.
    Ramond,
    /// N even, ℓ/2 odd.
    NeveuSchwarz,
}

impl Class {
    pub fn of(n: usize, ell: usize) -> Class {
        if n % 2 == 1 {
            Class::Z4
        } else if (ell / 2) % 2 == 0 {
            Class::Ramond
        } else {
            Class::NeveuSchwarz
        }
    }

    pub fn short(&self) -> &'static str {
        match self {
            Class::Z4 => "Z4",
            Class::Ramond => "R",
            Class::NeveuSchwarz => "NS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorLabel {
    pub n: usize,
    pub d: usize,
    pub sz: i64,
    pub ell: usize,
    pub class: Class,
}

impl SectorLabel {
    pub fn new(n: usize, d: usize) -> Self {
        let sz = n as i64 - 2 * d as i64;
        let ell = sz.unsigned_abs() as usize;
        SectorLabel {
            n,
            d,
            sz,
            ell,
            class: Class::of(n, ell),
        }
    }

    pub fn dim(&self) -> usize {
        binomial(self.n, self.d)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Basis states with `d` particles, in increasing order.
pub fn sector_basis(n: usize, d: usize) -> Vec<usize> {
    (0..1usize << n).filter(|s| s.count_ones() as usize == d).collect()
}

/// T[b, a] = Tr Π_j A_j with A_j[α, α'] = tile(a_j, α, b_j, α').
///
/// `a` is the bottom row, `b` the top; T acts on column vectors.
pub fn transfer_matrix_from_weights(n: usize, w: &FaceWeights) -> Result<Operator> {
    check_sites(n)?;
    let tile = FaceTensor::new(w, Orientation::OddRow);
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    let by_count: Vec<Vec<usize>> = (0..=n).map(|d| sector_basis(n, d)).collect();
    for a in 0..dim {
        for &b in &by_count[a.count_ones() as usize] {
            let mut p = [[ONE, ZERO], [ZERO, ONE]];
            for j in 0..n {
                let (aj, bj) = ((a >> j) & 1, (b >> j) & 1);
                let mut q = [[ZERO; 2]; 2];
                for (r, row) in q.iter_mut().enumerate() {
                    for (c, e) in row.iter_mut().enumerate() {
                        *e = p[r][0] * tile.get(aj, 0, bj, c) + p[r][1] * tile.get(aj, 1, bj, c);
                    }
                }
                p = q;
            }
            m[(b, a)] = p[0][0] + p[1][1];
        }
    }
    Ok(Operator::new(n, true, m))
}

pub fn transfer_matrix(n: usize, params: &ModelParams) -> Result<Operator> {
    params.require_free_fermion()?;
    transfer_matrix_from_weights(n, &face_weights(params)?)
}

/// T at ρ = g = 1 and real u.
pub fn transfer_at(n: usize, u: f64) -> Result<CMat> {
    Ok(transfer_matrix(n, &ModelParams::free_fermion(u))?.matrix)
}

/// Weights at complex spectral parameter, ρ = g = 1.
pub fn complex_weights(u: C64) -> FaceWeights {
    FaceWeights::new(u.cos(), u.sin(), ONE, ONE)
}

#[derive(Debug, Clone)]
pub struct Block {
    pub label: SectorLabel,
    pub basis: Vec<usize>,
    pub matrix: CMat,
}

#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub n: usize,
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    /// Reassembles the full operator from the blocks.
    pub fn assemble(&self) -> CMat {
        let dim = 1usize << self.n;
        let mut m = CMat::zeros(dim, dim);
        for b in &self.blocks {
            for (r, &sr) in b.basis.iter().enumerate() {
                for (c, &sc) in b.basis.iter().enumerate() {
                    m[(sr, sc)] = b.matrix[(r, c)];
                }
            }
        }
        m
    }
}

/// Splits a particle-conserving operator into its d-blocks.
pub fn sector_decompose(op: &Operator) -> Result<BlockDecomposition> {
    let n = op.sites;
    let dim = op.dim();
    let mut leak: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            if r.count_ones() != c.count_ones() {
                leak = leak.max(op.matrix[(r, c)].norm());
            }
        }
    }
    if leak > 1e-13 {
        return Err(Error::Conservation(leak));
    }
    let blocks = (0..=n)
        .map(|d| {
            let basis = sector_basis(n, d);
            let matrix = submatrix(&op.matrix, &basis);
            Block {
                label: SectorLabel::new(n, d),
                basis,
                matrix,
            }
        })
        .collect();
    Ok(BlockDecomposition { n, blocks })
}

/// Scalar on the right of T(u)T(u+π/2) in the sector with d particles (ρ = 1).
pub fn inversion_scalar(n: usize, d: usize, u: f64) -> f64 {
    let (c, s) = (libm::cos(u), libm::sin(u));
    if n % 2 == 1 {
        libm::pow(c, 2.0 * n as f64) - libm::pow(s, 2.0 * n as f64)
    } else {
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let v = libm::pow(c, n as f64) + sign * libm::pow(s, n as f64);
        v * v
    }
}

pub fn verify_inversion_cylinder(n: usize, u: f64, g: C64) -> Result<Report> {
    let p = ModelParams::free_fermion(u).with_gauge(g);
    let t0 = transfer_matrix(n, &p)?;
    let t1 = transfer_matrix(n, &ModelParams { u: u + FRAC_PI_2, ..p })?;
    let prod = Operator::new(n, true, &t0.matrix * &t1.matrix);
    let mut rep = Report::new(format!("cylinder inversion N={n} u={u}"), 1e-10);
    for b in sector_decompose(&prod)?.blocks {
        let target = inversion_scalar(n, b.label.d, u);
        rep.record(dist_scalar(&b.matrix, C64::new(target, 0.0)));
    }
    Ok(rep)
}

/// ‖[T(u), T(v)]‖.
pub fn verify_commutation(n: usize, u: f64, v: f64) -> Result<Report> {
    let mut rep = Report::new(format!("commutation N={n} u={u} v={v}"), 1e-10);
    rep.record(max_abs(&commutator(&transfer_at(n, u)?, &transfer_at(n, v)?)));
    Ok(rep)
}

/// Crossing symmetry T(u)ᵀ = T(π/2 − u), and normality [T(u), T(u)†] = 0.
pub fn verify_crossing(n: usize, u: f64) -> Result<Report> {
    let mut rep = Report::new(format!("crossing and normality N={n} u={u}"), 1e-10);
    let t = transfer_at(n, u)?;
    rep.record(dist(&t.transpose(), &transfer_at(n, FRAC_PI_2 - u)?));
    rep.record(max_abs(&commutator(&t, &t.adjoint())));
    Ok(rep)
}

/// H = −Σ_{j=1}^{N} e_j, periodic tile form.
pub fn hamiltonian_cylinder(n: usize) -> Result<Operator> {
    if n < 2 {
        return Err(Error::InvalidParameter("need N >= 2".into()));
    }
    let dim = 1usize << n;
    let mut h = CMat::zeros(dim, dim);
    for j in 1..=n {
        h -= tl_generator(n, j, true)?.matrix;
    }
    Ok(Operator::new(n, true, h))
}

/// −Σ_j (f_j†f_{j+1} + f_{j+1}†f_j) with f_{N+1} = f_1, Jordan–Wigner strings included.
pub fn hopping_hamiltonian(n: usize) -> Result<CMat> {
    let dim = 1usize << n;
    let mut h = CMat::zeros(dim, dim);
    for j in 1..=n {
        let k = if j == n { 1 } else { j + 1 };
        let cj = fermion_operator(n, j, FermionKind::Create)?.matrix;
        let ck = fermion_operator(n, k, FermionKind::Create)?.matrix;
        h -= &cj * ck.adjoint() + &ck * cj.adjoint();
    }
    Ok(h)
}

/// Per-sector comparison of the tile Hamiltonian with the cyclic hopping form.
///
/// The wrap-around hop carries a string over sites 2..N−1, so agreement is
/// expected only in sectors where that string is +1.
pub fn compare_hopping(n: usize) -> Result<Vec<(usize, f64)>> {
    let tile = hamiltonian_cylinder(n)?;
    let hop = Operator::new(n, true, hopping_hamiltonian(n)?);
    let a = sector_decompose(&tile)?;
    let b = sector_decompose(&hop)?;
    Ok(a
        .blocks
        .iter()
        .zip(b.blocks.iter())
        .map(|(x, y)| (x.label.d, dist(&x.matrix, &y.matrix)))
        .collect())
}

/// Output of the braid-limit computation.
#[derive(Debug, Clone)]
pub struct BraidData {
    pub b_plus: CMat,
    pub b_minus: CMat,
    pub j: CMat,
}

/// J from the inversion combination, B± as the leading trigonometric
/// coefficients of T(u)/sin^N(u + π/4) as Im u → ±∞.
pub fn braid_and_j(n: usize) -> Result<BraidData> {
    let u = 0.37;
    let (c, s) = (libm::cos(u), libm::sin(u));
    let prod = transfer_at(n, u)? * transfer_at(n, u + FRAC_PI_2)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let shift = libm::pow(c, 2.0 * n as f64) + sign * libm::pow(s, 2.0 * n as f64);
    let j = (prod - identity(1 << n) * C64::new(shift, 0.0)) / C64::new(libm::pow(s * c, n as f64), 0.0);
    let e = |phase: f64| C64::from_polar(1.0, phase);
    let limit = |a: f64, b: f64| {
        transfer_matrix_from_weights(n, &FaceWeights::new(e(a), e(b), ZERO, ZERO)).map(|o| o.matrix)
    };
    Ok(BraidData {
        b_plus: limit(-FRAC_PI_4, FRAC_PI_4)?,
        b_minus: limit(FRAC_PI_4, -FRAC_PI_4)?,
        j,
    })
}

/// T(±iY)/sin^N(±iY + π/4), Richardson-extrapolated from Y = 8 and Y = 12.
pub fn braid_limit_numeric(n: usize, sign: f64) -> Result<CMat> {
    let at = |y: f64| -> Result<CMat> {
        let u = C64::new(0.0, sign * y);
        let t = transfer_matrix_from_weights(n, &complex_weights(u))?.matrix;
        Ok(t / (u + FRAC_PI_4).sin().powu(n as u32))
    };
    let (w8, w12) = (libm::exp(16.0), libm::exp(24.0));
    Ok((at(12.0)? * C64::new(w12, 0.0) - at(8.0)? * C64::new(w8, 0.0)) / C64::new(w12 - w8, 0.0))
}

pub fn verify_braid(n: usize) -> Result<Report> {
    let data = braid_and_j(n)?;
    let mut rep = Report::new(format!("braid N={n}"), 1e-10);
    let id = identity(1 << n);
    let rhs = if n % 2 == 0 {
        let s = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
        &id * C64::new(2.0, 0.0) + &data.j * C64::new(s, 0.0)
    } else {
        &id * C64::new(2.0, 0.0)
    };
    rep.record(dist(&(&data.b_plus * &data.b_plus), &rhs));
    rep.record(dist(&(&data.b_minus * &data.b_minus), &rhs));
    // J is diagonal with entries ±2 (N even) or zero (N odd)
    for r in 0..data.j.nrows() {
        for c in 0..data.j.ncols() {
            let v = data.j[(r, c)];
            if r != c {
                rep.record(v.norm());
            } else if n % 2 == 1 {
                rep.record(v.norm());
            } else {
                rep.record((v.norm() - 2.0).abs());
            }
        }
    }
    let mut limit_gap: f64 = 0.0;
    for (sign, exact) in [(1.0, &data.b_plus), (-1.0, &data.b_minus)] {
        limit_gap = limit_gap.max(dist(&braid_limit_numeric(n, sign)?, exact));
    }
    rep.note(format!("numeric Im u -> ±inf limit agrees to {limit_gap:.2e}"));
    if limit_gap > 1e-8 {
        rep.fail("numeric braid limit disagrees with leading coefficient");
    }
    Ok(rep)
}

/// The 4×4 matrices whose ordered trace gives [T(u)T(u+π/2)]_{a,b}.
///
/// Indexed by (top b_j, bottom a_j); rows/columns in the auxiliary order
/// (c', c) = (0,0), (1,0), (0,1), (1,1).
pub fn appendix_r(b: usize, a: usize, u: f64) -> CMat {
    let (s, c) = (libm::sin(u), libm::cos(u));
    let sc = s * c;
    let rows: [[f64; 4]; 4] = match (b, a) {
        (0, 0) => [[-sc, 0., 0., 0.], [0., c * c, 0., 0.], [0., 1., -s * s, 0.], [0., 0., 0., sc]],
        (1, 1) => [[sc, 0., 0., 0.], [0., -s * s, 1., 0.], [0., 0., c * c, 0.], [0., 0., 0., -sc]],
        (1, 0) => [[0., 0., 0., 0.], [c, 0., 0., 0.], [c, 0., 0., 0.], [0., -s, s, 0.]],
        _ => [[0., s, -s, 0.], [0., 0., 0., c], [0., 0., 0., c], [0., 0., 0., 0.]],
    };
    CMat::from_fn(4, 4, |r, k| C64::new(rows[r][k], 0.0))
}

fn real4(rows: [[f64; 4]; 4]) -> CMat {
    CMat::from_fn(4, 4, |r, k| C64::new(rows[r][k], 0.0))
}

/// The similarity pair (S, S⁻¹) that triangularises all four R matrices at once.
pub fn appendix_similarity() -> (CMat, CMat) {
    let s = real4([[0., 0., 1., 0.], [0., 0., 0., -1.], [1., 0., 0., 0.], [0., 1., -1., 0.]]);
    let si = real4([[0., 0., 1., 0.], [1., 0., 0., 1.], [1., 0., 0., 0.], [0., -1., 0., 0.]]);
    (s, si)
}

/// Expected S R S⁻¹ for each (b, a).
pub fn appendix_triangular(b: usize, a: usize, u: f64) -> CMat {
    let (s, c) = (libm::sin(u), libm::cos(u));
    let sc = s * c;
    real4(match (b, a) {
        (0, 0) => [[c * c, 0., 0., 1.], [0., sc, 0., 0.], [0., 0., -sc, 0.], [0., 0., 0., -s * s]],
        (1, 1) => [[c * c, 0., 0., 0.], [0., -sc, 0., 0.], [0., 0., sc, 0.], [0., 0., 0., -s * s]],
        (1, 0) => [[0., 0., c, 0.], [0., 0., 0., s], [0., 0., 0., 0.], [0., 0., 0., 0.]],
        _ => [[0., -c, 0., 0.], [0., 0., 0., 0.], [0., 0., 0., s], [0., 0., 0., 0.]],
    })
}

pub fn verify_appendix_a(u: f64) -> Result<Report> {
    let mut rep = Report::new(format!("appendix A u={u}"), 1e-12);
    let (s, si) = appendix_similarity();
    rep.record(dist(&(&s * &si), &identity(4)));
    for (b, a) in [(0, 0), (1, 1), (1, 0), (0, 1)] {
        let t = &s * appendix_r(b, a, u) * &si;
        rep.record(dist(&t, &appendix_triangular(b, a, u)));
        for r in 0..4 {
            for c in 0..r {
                rep.record(t[(r, c)].norm());
            }
        }
    }
    for n in 1..=4 {
        let prod = transfer_at(n, u)? * transfer_at(n, u + FRAC_PI_2)?;
        let dim = 1usize << n;
        let mut worst: f64 = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                let m = (0..n).fold(identity(4), |acc, j| acc * appendix_r((b >> j) & 1, (a >> j) & 1, u));
                worst = worst.max((m.trace() - prod[(a, b)]).norm());
            }
        }
        rep.record(worst);
    }
    Ok(rep)
}

/// Logarithmic derivative L = T(0)⁻¹T′(0) (central difference) compared with Σ e_j.
#[derive(Debug, Clone)]
pub struct LogDerivative {
    /// ‖[L, T(u)]‖ at the probe point.
    pub commutes: f64,
    /// ‖(L − tr L/dim) − Σe_j‖.
    pub deviation_from_tl_sum: f64,
    /// tr L / dim.
    pub trace_part: C64,
    /// ‖(L − tr L/dim) + Σe_j‖.
    pub deviation_sign_flipped: f64,
}

pub fn log_derivative_diagnostic(n: usize, probe_u: f64) -> Result<LogDerivative> {
    let h = 1e-6;
    let t0 = transfer_at(n, 0.0)?;
    let tp = (transfer_at(n, h)? - transfer_at(n, -h)?) / C64::new(2.0 * h, 0.0);
    let inv = t0
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("T(0) singular".into()))?;
    let l = &inv * tp;
    let dim = 1usize << n;
    let tr = l.trace() / C64::new(dim as f64, 0.0);
    let traceless = &l - identity(dim) * tr;
    let sum_e = -hamiltonian_cylinder(n)?.matrix;
    Ok(LogDerivative {
        commutes: max_abs(&commutator(&l, &transfer_at(n, probe_u)?)),
        deviation_from_tl_sum: dist(&traceless, &sum_e),
        trace_part: tr,
        deviation_sign_flipped: dist(&traceless, &(-sum_e)),
    })
}

/// Spectra of the d and N−d blocks coincide.
pub fn verify_degeneracy(n: usize, u: f64) -> Result<Report> {
    let t = Operator::new(n, true, transfer_at(n, u)?);
    let dec = sector_decompose(&t)?;
    let mut rep = Report::new(format!("d <-> N-d degeneracy N={n} u={u}"), 1e-9);
    for d in 0..=n / 2 {
        let x = eigenvalues(&dec.blocks[d].matrix);
        let y = eigenvalues(&dec.blocks[n - d].matrix);
        match crate::linalg::match_multisets(&x, &y) {
            Some(w) => rep.record(w),
            None => rep.fail(format!("block sizes differ at d={d}")),
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(n: usize) -> CMat {
        transfer_matrix(n, &ModelParams::isotropic_counting()).unwrap().matrix
    }

    #[test]
    fn n1_trace_is_four() {
        assert!((iso(1).trace() - 4.0).norm() < 1e-12);
    }

    #[test]
    fn n2_isotropic_matrix() {
        let expected = [[2., 0., 0., 0.], [0., 2., 2., 0.], [0., 2., 2., 0.], [0., 0., 0., 2.]];
        let t = iso(2);
        for r in 0..4 {
            for c in 0..4 {
                assert!((t[(r, c)] - expected[r][c]).norm() < 1e-12);
            }
        }
        assert!(((&t * &t).trace() - 24.0).norm() < 1e-10);
    }

    #[test]
    fn block_dimensions() {
        let t = Operator::new(4, true, transfer_at(4, 0.3).unwrap());
        let dec = sector_decompose(&t).unwrap();
        let dims: Vec<usize> = dec.blocks.iter().map(|b| b.basis.len()).collect();
        assert_eq!(dims, [1, 4, 6, 4, 1]);
        assert!(dist(&dec.assemble(), &t.matrix) < 1e-15);
        let dec2 = sector_decompose(&Operator::new(2, true, iso(2))).unwrap();
        assert!(dist(&dec2.blocks[1].matrix, &CMat::from_element(2, 2, C64::new(2.0, 0.0))) < 1e-12);
    }

    #[test]
    fn conservation_violation_detected() {
        let mut m = identity(4);
        m[(1, 0)] = ONE;
        assert!(matches!(sector_decompose(&Operator::new(2, true, m)), Err(Error::Conservation(_))));
    }

    #[test]
    fn inversion_scalars() {
        assert!((inversion_scalar(1, 0, 0.3) - libm::cos(0.6)).abs() < 1e-15);
        let u = 0.4;
        let c2 = libm::cos(u) * libm::cos(u) - libm::sin(u) * libm::sin(u);
        assert!((inversion_scalar(2, 1, u) - c2 * c2).abs() < 1e-15);
        assert!(verify_inversion_cylinder(5, 1.1, ONE).unwrap().pass);
    }

    #[test]
    fn hamiltonian_n2() {
        let h = hamiltonian_cylinder(2).unwrap();
        assert!(h.entry(0b10, 0b10).norm() < 1e-15);
        assert!((h.entry(0b01, 0b10) + 2.0).norm() < 1e-15);
    }

    #[test]
    fn j_vanishes_for_odd_n() {
        let d = braid_and_j(3).unwrap();
        assert!(max_abs(&d.j) < 1e-12);
        let d2 = braid_and_j(2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| d2.j[(i, i)].re).collect();
        for (got, want) in diag.iter().zip([2.0, -2.0, -2.0, 2.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn appendix_similarity_is_inverse_pair() {
        let r = verify_appendix_a(0.5).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
