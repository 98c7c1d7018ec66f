//! Fermion, Temperley–Lieb and face operators on the 2^N particle space.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{cap, Error, Result};
use crate::linalg::{dist, embed_pair, identity, max_abs, sparse_mul, CMat, Operator, C64, I, ONE, ZERO};
use crate::model::ModelParams;
use crate::report::Report;
use crate::MAX_DENSE_SITES;

/// An N-site occupation word; site j is bit j−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowState {
    pub sites: usize,
    pub bits: usize,
}

impl RowState {
    pub fn new(sites: usize, bits: usize) -> Result<Self> {
        if sites > usize::BITS as usize - 1 || bits >> sites != 0 {
            return Err(Error::InvalidParameter(format!("{bits:#b} is not an {sites}-site state")));
        }
        Ok(RowState { sites, bits })
    }

    /// a_j for 1-based j.
    pub fn occupation(&self, j: usize) -> u8 {
        ((self.bits >> (j - 1)) & 1) as u8
    }

    /// Arrow variable σ_j = 1 − 2a_j.
    pub fn spin(&self, j: usize) -> i8 {
        1 - 2 * self.occupation(j) as i8
    }

    pub fn particles(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermionKind {
    Create,
    Annihilate,
    Number,
}

pub(crate) fn check_sites(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one site".into()));
    }
    cap("N", n, MAX_DENSE_SITES)
}

/// f_j†, f_j or n_j with the Jordan–Wigner sign (−1)^{Σ_{k<j} n_k}.
pub fn fermion_operator(n: usize, j: usize, kind: FermionKind) -> Result<Operator> {
    check_sites(n)?;
    if j == 0 || j > n {
        return Err(Error::InvalidParameter(format!("site {j} outside 1..={n}")));
    }
    let dim = 1usize << n;
    let bit = 1usize << (j - 1);
    let mut m = CMat::zeros(dim, dim);
    for s in 0..dim {
        let sign = if (s & (bit - 1)).count_ones() % 2 == 0 { ONE } else { -ONE };
        match kind {
            FermionKind::Create if s & bit == 0 => m[(s | bit, s)] = sign,
            FermionKind::Annihilate if s & bit != 0 => m[(s & !bit, s)] = sign,
            FermionKind::Number if s & bit != 0 => m[(s, s)] = ONE,
            _ => {}
        }
    }
    Ok(Operator::new(n, false, m))
}

/// A two-site operator acting on sites (a, b), stored as its 4×4 local matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOp {
    pub a: usize,
    pub b: usize,
    /// `local[out][in]`, local index 2 n_a + n_b.
    pub local: [[C64; 4]; 4],
}

impl PairOp {
    pub fn to_matrix(&self, sites: usize) -> CMat {
        embed_pair(sites, self.a, self.b, &self.local)
    }

    /// self · m, in O(4 · dim²) work.
    pub fn apply_left(&self, m: &CMat) -> CMat {
        let (ba, bb) = (self.a - 1, self.b - 1);
        let mut out = CMat::zeros(m.nrows(), m.ncols());
        for s in 0..m.nrows() {
            let inp = 2 * ((s >> ba) & 1) + ((s >> bb) & 1);
            let rest = s & !(1 << ba) & !(1 << bb);
            for (o, row) in self.local.iter().enumerate() {
                let w = row[inp];
                if w == ZERO {
                    continue;
                }
                let t = rest | ((o >> 1) << ba) | ((o & 1) << bb);
                for c in 0..m.ncols() {
                    out[(t, c)] += w * m[(s, c)];
                }
            }
        }
        out
    }
}

fn tl_local(x: C64) -> [[C64; 4]; 4] {
    let mut l = [[ZERO; 4]; 4];
    // |01> -> x^{-1}|01> + |10>,  |10> -> x|10> + |01>
    l[1][1] = x.inv();
    l[2][1] = ONE;
    l[2][2] = x;
    l[1][2] = ONE;
    l
}

fn tl_pair(n: usize, j: usize, periodic: bool) -> Result<PairOp> {
    check_sites(n)?;
    let valid = (j >= 1 && j < n) || (j == n && periodic && n >= 2);
    if !valid {
        return Err(Error::InvalidParameter(format!(
            "TL generator e_{j} undefined for N = {n} (periodic = {periodic})"
        )));
    }
    Ok(PairOp {
        a: j,
        b: if j == n { 1 } else { j + 1 },
        local: tl_local(I),
    })
}

/// e_j in tile form (no Jordan–Wigner string), x = i.
pub fn tl_generator(n: usize, j: usize, periodic: bool) -> Result<Operator> {
    Ok(Operator::new(n, periodic, tl_pair(n, j, periodic)?.to_matrix(n)))
}

/// X_j(u) = ρ (cos u I + sin u e_j) as a local operator.
pub fn face_pair(n: usize, j: usize, u: f64, rho: f64, periodic: bool) -> Result<PairOp> {
    let mut p = tl_pair(n, j, periodic)?;
    let (c, s) = (libm::cos(u), libm::sin(u));
    for (o, row) in p.local.iter_mut().enumerate() {
        for (i, w) in row.iter_mut().enumerate() {
            *w = rho * (*w * s + if o == i { ONE * c } else { ZERO });
        }
    }
    Ok(p)
}

pub fn face_operator(n: usize, j: usize, params: &ModelParams, periodic: bool) -> Result<Operator> {
    params.require_free_fermion()?;
    let p = face_pair(n, j, params.u, params.rho, periodic)?;
    Ok(Operator::new(n, periodic, p.to_matrix(n)))
}

/// The bilinear fermionic form x n_j + x^{−1} n_{j+1} + f_j†f_{j+1} + f_{j+1}†f_j.
pub fn tl_fermionic(n: usize, j: usize) -> Result<CMat> {
    let k = if j == n { 1 } else { j + 1 };
    let num = |s| fermion_operator(n, s, FermionKind::Number).map(|o| o.matrix);
    let cre = |s| fermion_operator(n, s, FermionKind::Create).map(|o| o.matrix);
    let ann = |s| fermion_operator(n, s, FermionKind::Annihilate).map(|o| o.matrix);
    Ok(num(j)? * I + num(k)? * I.inv() + cre(j)? * ann(k)? + cre(k)? * ann(j)?)
}

fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    sparse_mul(a, b) + sparse_mul(b, a)
}

/// Canonical anticommutation relations, TL relations (open and periodic) and
/// the equality of the tile and bilinear forms of e_j.
pub fn verify_algebra(n: usize) -> Result<Report> {
    check_sites(n)?;
    if n < 2 {
        return Err(Error::InvalidParameter("need N >= 2".into()));
    }
    let mut rep = Report::new(format!("algebra N={n}"), 1e-12);
    let dim = 1 << n;
    let id = identity(dim);
    let zero = CMat::zeros(dim, dim);
    let f: Vec<CMat> = (1..=n)
        .map(|j| fermion_operator(n, j, FermionKind::Annihilate).map(|o| o.matrix))
        .collect::<Result<_>>()?;
    let fd: Vec<CMat> = f.iter().map(|m| m.adjoint()).collect();
    for j in 0..n {
        for k in 0..n {
            rep.record(dist(&anticommutator(&f[j], &f[k]), &zero));
            rep.record(dist(&anticommutator(&fd[j], &fd[k]), &zero));
            let target = if j == k { &id } else { &zero };
            rep.record(dist(&anticommutator(&f[j], &fd[k]), target));
        }
    }
    for periodic in [false, true] {
        if periodic && n < 3 {
            continue;
        }
        let count = if periodic { n } else { n - 1 };
        let e: Vec<CMat> = (1..=count)
            .map(|j| tl_generator(n, j, periodic).map(|o| o.matrix))
            .collect::<Result<_>>()?;
        for j in 0..count {
            rep.record(max_abs(&sparse_mul(&e[j], &e[j])));
            for k in 0..count {
                let gap = if periodic {
                    let d = j.abs_diff(k);
                    d.min(n - d)
                } else {
                    j.abs_diff(k)
                };
                if gap == 1 {
                    rep.record(dist(&sparse_mul(&e[j], &sparse_mul(&e[k], &e[j])), &e[j]));
                } else if gap >= 2 {
                    rep.record(max_abs(&(sparse_mul(&e[j], &e[k]) - sparse_mul(&e[k], &e[j]))));
                }
            }
        }
    }
    for j in 1..n {
        let tile = tl_generator(n, j, false)?.matrix;
        rep.record(dist(&tile, &tl_fermionic(n, j)?));
    }
    Ok(rep)
}

/// ‖X_j(u)X_{j+1}(u+v)X_j(v) − X_{j+1}(v)X_j(u+v)X_{j+1}(u)‖ over all j.
pub fn verify_ybe(n: usize, u: f64, v: f64) -> Result<Report> {
    check_sites(n)?;
    if n < 3 {
        return Err(Error::InvalidParameter("YBE needs N >= 3".into()));
    }
    let mut rep = Report::new(format!("ybe N={n} u={u} v={v}"), 1e-12);
    let id = identity(1 << n);
    for j in 1..n - 1 {
        let x = |k: usize, w: f64| face_pair(n, k, w, 1.0, false);
        let lhs = x(j, u)?.apply_left(&x(j + 1, u + v)?.apply_left(&x(j, v)?.apply_left(&id)));
        let rhs = x(j + 1, v)?.apply_left(&x(j, u + v)?.apply_left(&x(j + 1, u)?.apply_left(&id)));
        rep.record(dist(&lhs, &rhs));
    }
    Ok(rep)
}

/// Initial condition X_j(0) = I and inversion X_j(u)X_j(−u) = cos²u I.
pub fn verify_face_inversion(n: usize, u: f64) -> Result<Report> {
    let mut rep = Report::new(format!("face inversion N={n} u={u}"), 1e-12);
    let id = identity(1 << n);
    for j in 1..n {
        let x0 = face_pair(n, j, 0.0, 1.0, false)?.to_matrix(n);
        rep.record(dist(&x0, &id));
        let prod = face_pair(n, j, u, 1.0, false)?.apply_left(&face_pair(n, j, -u, 1.0, false)?.to_matrix(n));
        let c = libm::cos(u);
        rep.record(crate::linalg::dist_scalar(&prod, C64::new(c * c, 0.0)));
    }
    Ok(rep)
}
