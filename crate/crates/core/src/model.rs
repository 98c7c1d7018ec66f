//! Vertex weights and the six face tiles.
//!
//! Occupation 1 on an edge means the arrow disagrees with the reference
//! (up on vertical edges; right on odd rows, left on even rows).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

/// Spectral, crossing, normalization and gauge parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub lambda: f64,
    pub u: f64,
    pub rho: f64,
    pub g: C64,
}

impl ModelParams {
    /// Free-fermion point with ρ = g = 1.
    pub fn free_fermion(u: f64) -> Self {
        ModelParams {
            lambda: FRAC_PI_2,
            u,
            rho: 1.0,
            g: ONE,
        }
    }

    /// Isotropic counting normalization ρ = g = √2, giving integer weights (1, 1, 2, 1).
    pub fn isotropic_counting() -> Self {
        let s = core::f64::consts::SQRT_2;
        ModelParams {
            lambda: FRAC_PI_2,
            u: PI / 4.0,
            rho: s,
            g: C64::new(s, 0.0),
        }
    }

    pub fn with_gauge(mut self, g: C64) -> Self {
        self.g = g;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    /// The gauge g = e^{iu} in which the tiles realise the Temperley–Lieb algebra.
    pub fn tl_gauge(mut self) -> Self {
        self.g = self.z();
        self
    }

    /// x = e^{iλ}; equals i at the free-fermion point.
    pub fn x(&self) -> C64 {
        C64::from_polar(1.0, self.lambda)
    }

    /// z = e^{iu}.
    pub fn z(&self) -> C64 {
        C64::from_polar(1.0, self.u)
    }

    pub fn is_free_fermion(&self) -> bool {
        self.lambda == FRAC_PI_2
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < PI) {
            return Err(Error::InvalidParameter(alloc::format!(
                "lambda = {} outside (0, pi)",
                self.lambda
            )));
        }
        if !self.rho.is_finite() || !self.u.is_finite() {
            return Err(Error::InvalidParameter("non-finite u or rho".into()));
        }
        if self.g == ZERO || !self.g.re.is_finite() || !self.g.im.is_finite() {
            return Err(Error::InvalidParameter("gauge g must be nonzero".into()));
        }
        Ok(())
    }

    pub(crate) fn require_free_fermion(&self) -> Result<()> {
        self.validate()?;
        if !self.is_free_fermion() {
            return Err(Error::InvalidParameter(
                "operation requires lambda = pi/2".into(),
            ));
        }
        Ok(())
    }
}

/// The four distinct vertex weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceWeights {
    pub a: C64,
    pub b: C64,
    pub c1: C64,
    pub c2: C64,
}

impl FaceWeights {
    pub fn new(a: C64, b: C64, c1: C64, c2: C64) -> Self {
        FaceWeights { a, b, c1, c2 }
    }

    pub fn real(a: f64, b: f64, c1: f64, c2: f64) -> Self {
        FaceWeights::new(a.into(), b.into(), c1.into(), c2.into())
    }

    /// a² + b² − c₁c₂, zero at the free-fermion point.
    pub fn free_fermion_defect(&self) -> C64 {
        self.a * self.a + self.b * self.b - self.c1 * self.c2
    }
}

pub fn face_weights(p: &ModelParams) -> Result<FaceWeights> {
    p.validate()?;
    let rho = C64::new(p.rho, 0.0);
    let (a, b) = if p.is_free_fermion() {
        (p.rho * libm::cos(p.u), p.rho * libm::sin(p.u))
    } else {
        let s = libm::sin(p.lambda);
        (
            p.rho * libm::sin(p.lambda - p.u) / s,
            p.rho * libm::sin(p.u) / s,
        )
    };
    Ok(FaceWeights::new(a.into(), b.into(), rho * p.g, rho / p.g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    OddRow,
    EvenRow,
}

/// Which of the six allowed tiles a (bottom, left, top, right) occupation is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileKind {
    A,
    B,
    C1,
    C2,
}

/// Tile type for an odd-row (bottom, left, top, right) occupation pattern.
pub fn odd_row_tile(b: u8, l: u8, t: u8, r: u8) -> Option<TileKind> {
    match (b, l, t, r) {
        (0, 0, 0, 0) | (1, 1, 1, 1) => Some(TileKind::A),
        // vertical particle passes / horizontal particle passes
        (1, 0, 1, 0) | (0, 1, 0, 1) => Some(TileKind::B),
        // enters from below, leaves to the right
        (1, 0, 0, 1) => Some(TileKind::C1),
        // enters from the left, leaves through the top
        (0, 1, 1, 0) => Some(TileKind::C2),
        _ => None,
    }
}

/// Local face tensor, indexed by (bottom, left, top, right) occupations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceTensor {
    pub orientation: Orientation,
    entries: [[[[C64; 2]; 2]; 2]; 2],
}

impl FaceTensor {
    pub fn new(w: &FaceWeights, orientation: Orientation) -> Self {
        let mut entries = [[[[ZERO; 2]; 2]; 2]; 2];
        for (b, e_b) in entries.iter_mut().enumerate() {
            for (l, e_l) in e_b.iter_mut().enumerate() {
                for (t, e_t) in e_l.iter_mut().enumerate() {
                    for (r, e) in e_t.iter_mut().enumerate() {
                        // the even-row tile is the left-right mirror image
                        let (ll, rr) = match orientation {
                            Orientation::OddRow => (l, r),
                            Orientation::EvenRow => (r, l),
                        };
                        *e = match odd_row_tile(b as u8, ll as u8, t as u8, rr as u8) {
                            Some(TileKind::A) => w.a,
                            Some(TileKind::B) => w.b,
                            Some(TileKind::C1) => w.c1,
                            Some(TileKind::C2) => w.c2,
                            None => ZERO,
                        };
                    }
                }
            }
        }
        FaceTensor {
            orientation,
            entries,
        }
    }

    #[inline]
    pub fn get(&self, bottom: usize, left: usize, top: usize, right: usize) -> C64 {
        self.entries[bottom][left][top][right]
    }

    /// Nonzero entries as ((bottom, left, top, right), weight).
    pub fn nonzero(&self) -> Vec<((u8, u8, u8, u8), C64)> {
        let mut out = Vec::new();
        for b in 0..2 {
            for l in 0..2 {
                for t in 0..2 {
                    for r in 0..2 {
                        let w = self.get(b, l, t, r);
                        if w != ZERO {
                            out.push(((b as u8, l as u8, t as u8, r as u8), w));
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn face_tensor(w: &FaceWeights, orientation: Orientation) -> FaceTensor {
    FaceTensor::new(w, orientation)
}

/// Midpoint of one edge of a face; these are the medial-lattice sites a dimer joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Medial {
    Bottom,
    Left,
    Top,
    Right,
}

/// Dimers are 45°-rotated: they join neighbouring edge midpoints.
/// "Horizontal" dimers carry weight ζ_h = a, "vertical" ones ζ_v = b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DimerKind {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimerPlacement {
    pub face: (usize, usize),
    pub dimers: Vec<(DimerKind, Medial, Medial)>,
    /// Number of alternative placements the tile admits.
    pub multiplicity: usize,
}

impl DimerPlacement {
    /// Product of dimer weights with ζ_h = a, ζ_v = b.
    pub fn weight(&self, w: &FaceWeights) -> C64 {
        self.dimers.iter().fold(ONE, |acc, d| {
            acc * match d.0 {
                DimerKind::Horizontal => w.a,
                DimerKind::Vertical => w.b,
            }
        })
    }
}

/// Local dimer content of an allowed odd-row tile at `face`.
pub fn dimer_expansion(face: (usize, usize), tile: (u8, u8, u8, u8)) -> Result<Vec<DimerPlacement>> {
    use DimerKind::*;
    use Medial::*;
    let kind = odd_row_tile(tile.0, tile.1, tile.2, tile.3).ok_or(Error::DisallowedTile(tile))?;
    let one = |dimers: Vec<(DimerKind, Medial, Medial)>| DimerPlacement {
        face,
        dimers,
        multiplicity: 1,
    };
    Ok(match kind {
        TileKind::A => vec![one(vec![(Horizontal, Left, Top)])],
        TileKind::B => vec![one(vec![(Vertical, Left, Bottom)])],
        TileKind::C2 => vec![one(Vec::new())],
        TileKind::C1 => {
            let h = vec![(Horizontal, Left, Top), (Horizontal, Bottom, Right)];
            let v = vec![(Vertical, Left, Bottom), (Vertical, Top, Right)];
            vec![
                DimerPlacement {
                    face,
                    dimers: h,
                    multiplicity: 2,
                },
                DimerPlacement {
                    face,
                    dimers: v,
                    multiplicity: 2,
                },
            ]
        }
    })
}

/// Occupations of all medial edges of an M×N torus of odd-row faces.
///
/// `vertical[r][j]` is the bottom edge of face (r, j) (the top edge is
/// `vertical[r+1][j]`); `horizontal[r][j]` is its left edge (the right edge is
/// `horizontal[r][j+1]`), both periodic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusConfig {
    pub vertical: Vec<Vec<u8>>,
    pub horizontal: Vec<Vec<u8>>,
}

pub fn configuration_weight(m: usize, n: usize, cfg: &TorusConfig, w: &FaceWeights) -> Result<C64> {
    let shape_ok = |g: &Vec<Vec<u8>>| g.len() == m && g.iter().all(|row| row.len() == n);
    if m == 0 || n == 0 || !shape_ok(&cfg.vertical) || !shape_ok(&cfg.horizontal) {
        return Err(Error::Dimension(alloc::format!(
            "configuration does not match a {m}x{n} torus"
        )));
    }
    let tensor = FaceTensor::new(w, Orientation::OddRow);
    let mut acc = ONE;
    for r in 0..m {
        for j in 0..n {
            let f = tensor.get(
                cfg.vertical[r][j] as usize,
                cfg.horizontal[r][j] as usize,
                cfg.vertical[(r + 1) % m][j] as usize,
                cfg.horizontal[r][(j + 1) % n] as usize,
            );
            if f == ZERO {
                return Ok(ZERO);
            }
            acc *= f;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: f64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn isotropic_counting_weights() {
        let w = face_weights(&ModelParams::isotropic_counting()).unwrap();
        assert!(close(w.a, 1.0) && close(w.b, 1.0) && close(w.c1, 2.0) && close(w.c2, 1.0));
    }

    #[test]
    fn weights_at_zero() {
        let w = face_weights(&ModelParams::free_fermion(0.0)).unwrap();
        assert!(close(w.a, 1.0) && close(w.b, 0.0) && close(w.c1, 1.0) && close(w.c2, 1.0));
    }

    #[test]
    fn rejects_bad_lambda() {
        let mut p = ModelParams::free_fermion(0.2);
        p.lambda = 3.5;
        assert!(face_weights(&p).is_err());
        p.lambda = 0.0;
        assert!(face_weights(&p).is_err());
    }

    #[test]
    fn generic_lambda_reduces_at_half_pi() {
        let mut p = ModelParams::free_fermion(0.3);
        p.lambda = FRAC_PI_2 - 1e-12;
        let w = face_weights(&p).unwrap();
        assert!((w.a - libm::cos(0.3)).norm() < 1e-10);
    }

    #[test]
    fn tensor_has_six_conserving_entries() {
        let w = FaceWeights::real(1.0, 1.0, 2.0, 1.0);
        for o in [Orientation::OddRow, Orientation::EvenRow] {
            let t = FaceTensor::new(&w, o);
            let nz = t.nonzero();
            assert_eq!(nz.len(), 6);
            for ((b, l, tp, r), _) in nz {
                // particles travel rightwards on odd rows, leftwards on even rows
                match o {
                    Orientation::OddRow => assert_eq!(b + l, tp + r),
                    Orientation::EvenRow => assert_eq!(b + r, tp + l),
                }
            }
        }
        let t = FaceTensor::new(&w, Orientation::OddRow);
        assert_eq!(t.get(1, 0, 0, 1), C64::new(2.0, 0.0));
        assert_eq!(t.get(1, 1, 0, 0), ZERO);
    }

    #[test]
    fn even_row_is_mirror() {
        let w = FaceWeights::real(0.3, 0.7, 1.9, 0.2);
        let odd = FaceTensor::new(&w, Orientation::OddRow);
        let even = FaceTensor::new(&w, Orientation::EvenRow);
        for b in 0..2 {
            for l in 0..2 {
                for t in 0..2 {
                    for r in 0..2 {
                        assert_eq!(even.get(b, l, t, r), odd.get(b, r, t, l));
                    }
                }
            }
        }
    }

    #[test]
    fn dimer_content_per_tile() {
        assert_eq!(dimer_expansion((0, 0), (1, 0, 0, 1)).unwrap().len(), 2);
        let c2 = dimer_expansion((0, 0), (0, 1, 1, 0)).unwrap();
        assert_eq!(c2.len(), 1);
        assert!(c2[0].dimers.is_empty());
        let a = dimer_expansion((0, 0), (0, 0, 0, 0)).unwrap();
        assert_eq!((a.len(), a[0].dimers.len()), (1, 1));
        assert!(dimer_expansion((0, 0), (1, 1, 0, 0)).is_err());
    }

    #[test]
    fn dimer_weights_sum_to_tile_weight_when_g_equals_rho() {
        // g = ρ gives c1 = ζ_h² + ζ_v² = ρ², c2 = 1
        let (u, rho) = (0.37, 1.3);
        let p = ModelParams::free_fermion(u).with_rho(rho).with_gauge(C64::new(rho, 0.0));
        let w = face_weights(&p).unwrap();
        let t = FaceTensor::new(&w, Orientation::OddRow);
        for ((b, l, tp, r), weight) in t.nonzero() {
            let total = dimer_expansion((0, 0), (b, l, tp, r))
                .unwrap()
                .iter()
                .fold(ZERO, |acc, p| acc + p.weight(&w));
            assert!((total - weight).norm() < 1e-13, "{:?}", (b, l, tp, r));
        }
    }

    #[test]
    fn single_empty_face() {
        let cfg = TorusConfig {
            vertical: vec![vec![0]],
            horizontal: vec![vec![0]],
        };
        let w = FaceWeights::real(1.0, 1.0, 2.0, 1.0);
        assert_eq!(configuration_weight(1, 1, &cfg, &w).unwrap(), ONE);
        let bad = TorusConfig {
            vertical: vec![vec![0, 1], vec![0, 0]],
            horizontal: vec![vec![0, 0], vec![0, 0]],
        };
        assert_eq!(configuration_weight(2, 2, &bad, &w).unwrap(), ZERO);
        assert!(configuration_weight(2, 1, &cfg, &w).is_err());
    }
}
