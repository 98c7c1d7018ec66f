//! Dense complex matrices on the 2^N occupation space.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A dense operator on N sites. Basis index bit `j-1` is the occupation of site `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub sites: usize,
    pub periodic: bool,
    pub matrix: CMat,
}

impl Operator {
    pub fn new(sites: usize, periodic: bool, matrix: CMat) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << sites);
        Operator {
            sites,
            periodic,
            matrix,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Entry ⟨to| O |from⟩.
    pub fn entry(&self, to: usize, from: usize) -> C64 {
        self.matrix[(to, from)]
    }
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn dist(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Distance of `m` from `scalar * I`.
pub fn dist_scalar(m: &CMat, scalar: C64) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let target = if r == c { scalar } else { ZERO };
            worst = worst.max((m[(r, c)] - target).norm());
        }
    }
    worst
}

/// Embeds a two-site operator acting on sites `a` and `b` (1-based).
///
/// `local[out][inp]` is indexed by `2 n_a + n_b`.
pub fn embed_pair(sites: usize, a: usize, b: usize, local: &[[C64; 4]; 4]) -> CMat {
    let dim = 1usize << sites;
    let (ba, bb) = (a - 1, b - 1);
    let mut m = CMat::zeros(dim, dim);
    for s in 0..dim {
        let inp = 2 * ((s >> ba) & 1) + ((s >> bb) & 1);
        let rest = s & !(1 << ba) & !(1 << bb);
        for (out, row) in local.iter().enumerate() {
            let w = row[inp];
            if w != ZERO {
                let t = rest | ((out >> 1) << ba) | ((out & 1) << bb);
                m[(t, s)] += w;
            }
        }
    }
    m
}

/// a · b, exploiting sparsity of `a` (cost nnz(a) · ncols(b)).
pub fn sparse_mul(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), b.ncols());
    for k in 0..a.ncols() {
        for r in 0..a.nrows() {
            let w = a[(r, k)];
            if w != ZERO {
                for c in 0..b.ncols() {
                    out[(r, c)] += w * b[(k, c)];
                }
            }
        }
    }
    out
}

/// Householder reflector I − 2vv†/‖v‖² with a fixed pseudo-random v.
fn reflector(dim: usize, seed: u64) -> CMat {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let v = nalgebra::DVector::from_fn(dim, |_, _| C64::new(next(), next()));
    let norm2 = v.norm_squared();
    CMat::identity(dim, dim) - (&v * v.adjoint()) * C64::new(2.0 / norm2, 0.0)
}

/// Eigenvalues via complex Schur decomposition.
///
/// The QR iteration can stall on highly degenerate blocks; on failure the
/// matrix is conjugated by a unitary reflector and the iteration retried.
/// Returns NaNs if every attempt fails.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    let dim = m.nrows();
    if dim == 0 {
        return Vec::new();
    }
    let max_iter = 1000 * dim;
    for attempt in 0..6u64 {
        let a = if attempt == 0 {
            m.clone()
        } else {
            let r = reflector(dim, attempt);
            &r * m * &r
        };
        if let Some(schur) = nalgebra::Schur::try_new(a, f64::EPSILON, max_iter) {
            let (_, t) = schur.unpack();
            return (0..dim).map(|i| t[(i, i)]).collect();
        }
    }
    alloc::vec![C64::new(f64::NAN, f64::NAN); dim]
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Numerical rank: singular values above `tol`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > tol).count()
}

/// Restriction to the given basis indices (rows and columns).
pub fn submatrix(m: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Greedy nearest-neighbour matching of two multisets.
///
/// Returns the largest matched distance, or `None` if the sizes differ.
pub fn match_multisets(a: &[C64], b: &[C64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pool: Vec<C64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_embedding_respects_bit_order() {
        // swap |01> <-> |10> on sites 1,2 of a 3-site chain
        let mut local = [[ZERO; 4]; 4];
        local[0][0] = ONE;
        local[1][2] = ONE;
        local[2][1] = ONE;
        local[3][3] = ONE;
        let m = embed_pair(3, 1, 2, &local);
        // site 1 occupied (bit 0) -> site 2 occupied (bit 1)
        assert_eq!(m[(0b010, 0b001)], ONE);
        assert_eq!(m[(0b101, 0b110)], ONE);
        assert_eq!(m[(0b100, 0b100)], ONE);
    }

    #[test]
    fn sparse_product_matches_dense() {
        let a = CMat::from_fn(4, 4, |r, c| if (r + 2 * c) % 3 == 0 { C64::new(r as f64, 1.0) } else { ZERO });
        let b = CMat::from_fn(4, 4, |r, c| C64::new((r * c) as f64, r as f64 - c as f64));
        assert!(dist(&sparse_mul(&a, &b), &(&a * &b)) < 1e-14);
    }

    #[test]
    fn reflector_is_unitary_involution() {
        let r = reflector(5, 3);
        assert!(dist(&(&r * &r), &identity(5)) < 1e-14);
        assert!(dist(&r.adjoint(), &r) < 1e-14);
    }

    #[test]
    fn matching_detects_size_mismatch() {
        assert!(match_multisets(&[ONE], &[]).is_none());
        let d = match_multisets(&[ONE, I], &[I, ONE]).unwrap();
        assert!(d < 1e-15);
    }
}
