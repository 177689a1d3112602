//! Lattices given by an explicit basis: determinants, point enumeration in
//! balls, closest-vector queries, covering radius brackets, and reduction to
//! the fundamental parallelepiped.
//!
//! Everything is plain f64 with explicit tolerances. The basis is stored as
//! given; no reduction pass is ever applied, because downstream constructions
//! (fundamental parallelepipeds, lifts) are basis-relative.

use crate::constants::ball_volume;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// Relative rank tolerance: a basis is rejected when |det| falls below this
/// fraction of the Hadamard bound (product of column norms).
pub const RANK_TOL_FACTOR: f64 = 1e-10;

/// Absolute slack on squared distances when deciding closed-ball membership.
pub const BALL_MEMBERSHIP_SLACK: f64 = 1e-9;

/// Default cap on candidates visited during enumeration.
pub const DEFAULT_ENUM_BUDGET: usize = 4_000_000;

/// Default dimension cap for the grid-based covering radius (cost is grid^dim).
pub const DEFAULT_COVERING_RADIUS_MAX_DIM: usize = 4;

/// Default acceptable hi/lo ratio for a covering radius bracket.
pub const DEFAULT_RATIO_BOUND: f64 = 2.0;

/// Gram-Schmidt data for the basis columns: `orthogonal` holds the b* vectors
/// as columns, `mu[(j, i)]` the coefficient of b*_i in b_j (i < j), and
/// `norms_sq` the squared lengths of the b*.
#[derive(Debug, Clone)]
pub struct Orthogonalization {
    pub orthogonal: DMatrix<f64>,
    pub mu: DMatrix<f64>,
    pub norms_sq: Vec<f64>,
}

/// A full-rank lattice in R^dim with cached determinant, inverse basis, and
/// orthogonalization data. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    basis: DMatrix<f64>,
    det_abs: f64,
    basis_inv: DMatrix<f64>,
    gso: Orthogonalization,
    enum_budget: usize,
}

/// A lattice point carrying both its integer coefficients in the basis and
/// its ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
    pub coords: DVector<f64>,
}

/// Covering radius bracket: the true covering radius lies in [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBracket {
    pub lo: f64,
    pub hi: f64,
}

impl Lattice {
    /// Build a lattice from a square basis matrix whose columns generate it.
    ///
    /// Rejects non-square input and bases whose determinant is below
    /// `RANK_TOL_FACTOR` times the Hadamard bound.
    pub fn from_basis(basis: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = basis.shape();
        if rows != cols || rows == 0 {
            return Err(Error::DimensionMismatch {
                expected: rows.max(1),
                got: cols,
            });
        }
        let dim = rows;
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("basis entries must be finite"));
        }

        let hadamard: f64 = (0..dim).map(|j| basis.column(j).norm()).product();
        let lu = basis.clone().lu();
        let det = lu.determinant();
        let det_abs = det.abs();
        let tol = RANK_TOL_FACTOR * hadamard.max(f64::MIN_POSITIVE);
        if !(det_abs > tol) {
            return Err(Error::SingularBasis { det: det_abs, tol });
        }
        let basis_inv = lu
            .try_inverse()
            .ok_or(Error::SingularBasis { det: det_abs, tol })?;

        let gso = orthogonalize(&basis);
        if gso.norms_sq.iter().any(|&n| !(n > 0.0)) {
            return Err(Error::SingularBasis { det: det_abs, tol });
        }

        Ok(Lattice {
            dim,
            basis,
            det_abs,
            basis_inv,
            gso,
            enum_budget: DEFAULT_ENUM_BUDGET,
        })
    }

    /// Convenience constructor from column vectors.
    pub fn from_columns(cols: &[DVector<f64>]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::invalid("need at least one basis vector"));
        }
        let dim = cols[0].len();
        for c in cols {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.len(),
                });
            }
        }
        let mut m = DMatrix::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        Self::from_basis(m)
    }

    /// The integer lattice Z^dim.
    pub fn integer(dim: usize) -> Self {
        Self::from_basis(DMatrix::identity(dim, dim)).expect("identity basis is never singular")
    }

    /// Replace the enumeration budget (candidates visited per query).
    pub fn with_enumeration_budget(mut self, budget: usize) -> Self {
        self.enum_budget = budget.max(1);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_inv(&self) -> &DMatrix<f64> {
        &self.basis_inv
    }

    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    pub fn gso(&self) -> &Orthogonalization {
        &self.gso
    }

    pub fn enumeration_budget(&self) -> usize {
        self.enum_budget
    }

    /// Materialize the lattice point with the given basis coefficients.
    pub fn point_from_coeffs(&self, coeffs: &[i64]) -> Result<LatticePoint> {
        if coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: coeffs.len(),
            });
        }
        let coords = &self.basis * DVector::from_iterator(self.dim, coeffs.iter().map(|&c| c as f64));
        Ok(LatticePoint {
            coeffs: coeffs.to_vec(),
            coords,
        })
    }

    /// All lattice points within the closed ball of the given radius around
    /// `center`, in lexicographic coefficient order.
    pub fn enumerate_in_ball(&self, center: &DVector<f64>, radius: f64) -> Result<Vec<LatticePoint>> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: center.len(),
            });
        }
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::invalid("radius must be finite and nonnegative"));
        }
        let mut out = Vec::new();
        let mut visited = 0usize;
        self.enumerate_coeffs(center, radius, &mut visited, &mut |coeffs, _| {
            out.push(coeffs.to_vec());
        })?;
        out.sort_unstable();
        out.into_iter().map(|c| self.point_from_coeffs(&c)).collect()
    }

    /// A lattice point of minimal Euclidean distance to `target`; exact ties
    /// (within 1e-12) resolve to the lexicographically smallest coefficients.
    pub fn closest_point(&self, target: &DVector<f64>) -> Result<LatticePoint> {
        if target.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: target.len(),
            });
        }
        // Babai nearest-plane gives an upper bound on the distance, then an
        // exact enumeration inside that ball finds the true minimum.
        let babai = self.babai_coeffs(target);
        let babai_pt = self.point_from_coeffs(&babai)?;
        let r0 = (&babai_pt.coords - target).norm();

        let mut best: Option<(f64, Vec<i64>)> = Some((r0 * r0, babai));
        let mut visited = 0usize;
        self.enumerate_coeffs(target, r0, &mut visited, &mut |coeffs, dist_sq| {
            let cur = best.as_ref().expect("seeded with the Babai point");
            let tol = 1e-12 * (1.0 + cur.0.max(dist_sq));
            if dist_sq < cur.0 - tol || (dist_sq <= cur.0 + tol && coeffs < cur.1.as_slice()) {
                best = Some((dist_sq, coeffs.to_vec()));
            }
        })?;
        let (_, coeffs) = best.expect("seeded with the Babai point");
        self.point_from_coeffs(&coeffs)
    }

    /// Euclidean distance from `target` to the lattice.
    pub fn distance_to(&self, target: &DVector<f64>) -> Result<f64> {
        let p = self.closest_point(target)?;
        Ok((&p.coords - target).norm())
    }

    /// Bracket the covering radius by evaluating the distance-to-lattice on an
    /// ambient grid of spacing `grid_h` covering the fundamental
    /// parallelepiped. Returns [lo, lo + grid_h*sqrt(dim)/2]; the true value
    /// lies inside because the distance function is 1-Lipschitz.
    pub fn covering_radius(&self, grid_h: f64) -> Result<RadiusBracket> {
        self.covering_radius_with(grid_h, DEFAULT_COVERING_RADIUS_MAX_DIM, DEFAULT_RATIO_BOUND)
    }

    /// `covering_radius` with explicit dimension cap and bracket ratio bound.
    pub fn covering_radius_with(
        &self,
        grid_h: f64,
        max_dim: usize,
        ratio_bound: f64,
    ) -> Result<RadiusBracket> {
        if !(grid_h > 0.0) {
            return Err(Error::invalid("grid_h must be positive"));
        }
        if self.dim > max_dim {
            return Err(Error::infeasible(format!(
                "covering radius grid limited to dim <= {max_dim} (got {})",
                self.dim
            )));
        }
        let grid = CellGrid::new(self, grid_h);
        let lo = (0..grid.row_count())
            .into_par_iter()
            .map(|i0| {
                let mut row_max = 0.0f64;
                grid.for_each_in_row(i0, |w| {
                    let w = DVector::from_column_slice(w);
                    let d = self.distance_to(&w).expect("grid point has lattice dimension");
                    if d > row_max {
                        row_max = d;
                    }
                });
                row_max
            })
            .reduce(|| 0.0, f64::max);
        let hi = lo + grid_h * (self.dim as f64).sqrt() / 2.0;
        if lo == 0.0 || hi / lo > ratio_bound {
            return Err(Error::GridTooCoarse {
                lo,
                hi,
                ratio_bound,
            });
        }
        Ok(RadiusBracket { lo, hi })
    }

    /// Covering density vol(B_r^dim) / |det|. Purely volumetric; does not
    /// check that radius r actually covers.
    pub fn covering_density(&self, r: f64) -> f64 {
        ball_volume(self.dim, r) / self.det_abs
    }

    /// Reduce `x` modulo the lattice: the representative x - B*floor(B^-1 x)
    /// whose basis coefficients lie in [0, 1)^dim.
    pub fn reduce_mod(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let u = &self.basis_inv * x;
        let floored = u.map(|v| v.floor());
        Ok(x - &self.basis * floored)
    }

    /// Axis-aligned bounding box of the fundamental parallelepiped
    /// {B u : u in [0,1]^dim}, as (min, max) per coordinate.
    pub fn cell_bounding_box(&self) -> (DVector<f64>, DVector<f64>) {
        let mut lo = DVector::zeros(self.dim);
        let mut hi = DVector::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self.basis[(i, j)];
                if e < 0.0 {
                    lo[i] += e;
                } else {
                    hi[i] += e;
                }
            }
        }
        (lo, hi)
    }

    /// Babai nearest-plane rounding of `target` (upper bound for CVP).
    fn babai_coeffs(&self, target: &DVector<f64>) -> Vec<i64> {
        let n = self.dim;
        let gso = &self.gso;
        let mut c = vec![0i64; n];
        // alpha_i = <t, b*_i> / |b*_i|^2
        let mut alpha = vec![0.0f64; n];
        for i in 0..n {
            alpha[i] = gso.orthogonal.column(i).dot(target) / gso.norms_sq[i];
        }
        for i in (0..n).rev() {
            let mut s = alpha[i];
            for j in (i + 1)..n {
                s -= gso.mu[(j, i)] * c[j] as f64;
            }
            c[i] = s.round() as i64;
        }
        c
    }

    /// Depth-first enumeration of all coefficient vectors c with
    /// |B c - center| <= radius (closed ball with `BALL_MEMBERSHIP_SLACK` on
    /// the squared distance). Calls `emit(coeffs, dist_sq)` per point.
    fn enumerate_coeffs(
        &self,
        center: &DVector<f64>,
        radius: f64,
        visited: &mut usize,
        emit: &mut dyn FnMut(&[i64], f64),
    ) -> Result<()> {
        let n = self.dim;
        let gso = &self.gso;
        let r_sq = radius * radius + BALL_MEMBERSHIP_SLACK;

        // Coordinates of `center` in the orthogonalized basis.
        let mut t = vec![0.0f64; n];
        for i in 0..n {
            t[i] = gso.orthogonal.column(i).dot(center) / gso.norms_sq[i];
        }

        let mut coeffs = vec![0i64; n];
        // rec(level i): coefficients for levels > i are fixed; `cost` is the
        // squared distance contributed by those levels.
        struct Ctx<'a> {
            lat: &'a Lattice,
            t: Vec<f64>,
            r_sq: f64,
            budget: usize,
        }
        fn rec(
            ctx: &Ctx<'_>,
            i: usize,
            cost: f64,
            coeffs: &mut Vec<i64>,
            visited: &mut usize,
            emit: &mut dyn FnMut(&[i64], f64),
        ) -> Result<()> {
            let gso = &ctx.lat.gso;
            let mut center_i = ctx.t[i];
            for j in (i + 1)..ctx.lat.dim {
                center_i -= gso.mu[(j, i)] * coeffs[j] as f64;
            }
            let slack = ctx.r_sq - cost;
            if slack < 0.0 {
                return Ok(());
            }
            let half_width = (slack / gso.norms_sq[i]).sqrt();
            let lo = (center_i - half_width).ceil() as i64;
            let hi = (center_i + half_width).floor() as i64;
            for c in lo..=hi {
                *visited += 1;
                if *visited > ctx.budget {
                    return Err(Error::EnumerationBudgetExceeded {
                        visited: *visited,
                        cap: ctx.budget,
                    });
                }
                let diff = c as f64 - center_i;
                let new_cost = cost + diff * diff * gso.norms_sq[i];
                if new_cost > ctx.r_sq {
                    continue;
                }
                coeffs[i] = c;
                if i == 0 {
                    emit(coeffs, new_cost);
                } else {
                    rec(ctx, i - 1, new_cost, coeffs, visited, emit)?;
                }
            }
            coeffs[i] = 0;
            Ok(())
        }

        let ctx = Ctx {
            lat: self,
            t,
            r_sq,
            budget: self.enum_budget,
        };
        rec(&ctx, n - 1, 0.0, &mut coeffs, visited, emit)
    }
}

/// Classical Gram-Schmidt on the basis columns.
fn orthogonalize(basis: &DMatrix<f64>) -> Orthogonalization {
    let n = basis.ncols();
    let mut orthogonal = basis.clone();
    let mut mu = DMatrix::zeros(n, n);
    let mut norms_sq = vec![0.0f64; n];
    for j in 0..n {
        let mut v = basis.column(j).clone_owned();
        for i in 0..j {
            let bi = orthogonal.column(i);
            let coeff = basis.column(j).dot(&bi) / norms_sq[i];
            mu[(j, i)] = coeff;
            v -= coeff * bi.clone_owned();
        }
        norms_sq[j] = v.norm_squared();
        orthogonal.set_column(j, &v);
    }
    Orthogonalization {
        orthogonal,
        mu,
        norms_sq,
    }
}

/// Ambient axis-aligned grid of spacing `h` covering the fundamental cell
/// (expanded by one spacing so Lipschitz arguments cover the whole cell).
pub(crate) struct CellGrid {
    origin: DVector<f64>,
    h: f64,
    counts: Vec<usize>,
}

impl CellGrid {
    pub fn new(lat: &Lattice, h: f64) -> Self {
        let (lo, hi) = lat.cell_bounding_box();
        let origin = lo.map(|v| v - h);
        let mut counts = Vec::with_capacity(lat.dim());
        for i in 0..lat.dim() {
            let span = hi[i] + h - origin[i];
            counts.push((span / h).floor() as usize + 1);
        }
        CellGrid { origin, h, counts }
    }

    pub fn row_count(&self) -> usize {
        self.counts[0]
    }

    pub fn row_len(&self) -> usize {
        self.counts.iter().skip(1).product()
    }

    /// Visit every point of the row with first index `i0` in order, writing
    /// its coordinates into a scratch buffer.
    pub fn for_each_in_row(&self, i0: usize, mut visit: impl FnMut(&[f64])) {
        let d = self.counts.len();
        let mut idx = vec![0usize; d];
        idx[0] = i0;
        let mut w = vec![0.0f64; d];
        loop {
            for k in 0..d {
                w[k] = self.origin[k] + idx[k] as f64 * self.h;
            }
            visit(&w);
            let mut k = d - 1;
            loop {
                if k == 0 {
                    return;
                }
                idx[k] += 1;
                if idx[k] < self.counts[k] {
                    break;
                }
                idx[k] = 0;
                k -= 1;
            }
        }
    }

    /// Coordinates of the point with row-major flat index `flat`.
    pub fn coords_of(&self, flat: usize) -> Vec<f64> {
        let d = self.counts.len();
        let mut rem = flat;
        let mut idx = vec![0usize; d];
        for k in (0..d).rev() {
            idx[k] = rem % self.counts[k];
            rem /= self.counts[k];
        }
        (0..d)
            .map(|k| self.origin[k] + idx[k] as f64 * self.h)
            .collect()
    }
}

/// The hexagonal lattice basis: columns (1, 0) and (1/2, sqrt(3)/2).
pub fn hex_lattice() -> Lattice {
    let b = DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 0.5, 3.0f64.sqrt() / 2.0]);
    Lattice::from_basis(b).expect("hex basis is nonsingular")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(vals: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(vals)
    }

    #[test]
    fn identity_lattice_det() {
        let lat = Lattice::integer(2);
        assert!((lat.det_abs() - 1.0).abs() < 1e-12);
        assert_eq!(lat.dim(), 2);
    }

    #[test]
    fn hex_lattice_det() {
        let lat = hex_lattice();
        assert!((lat.det_abs() - 3.0f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_basis_rejected() {
        let b = DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 2.0, 0.0]);
        assert!(matches!(
            Lattice::from_basis(b),
            Err(Error::SingularBasis { .. })
        ));
    }

    #[test]
    fn non_square_rejected() {
        let b = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(
            Lattice::from_basis(b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumerate_z2_radius_1() {
        let lat = Lattice::integer(2);
        let pts = lat.enumerate_in_ball(&dv(&[0.0, 0.0]), 1.0).unwrap();
        let coeffs: Vec<_> = pts.iter().map(|p| p.coeffs.clone()).collect();
        assert_eq!(
            coeffs,
            vec![
                vec![-1, 0],
                vec![0, -1],
                vec![0, 0],
                vec![0, 1],
                vec![1, 0]
            ]
        );
    }

    #[test]
    fn enumerate_z2_radius_1_5() {
        let lat = Lattice::integer(2);
        let pts = lat.enumerate_in_ball(&dv(&[0.0, 0.0]), 1.5).unwrap();
        assert_eq!(pts.len(), 9);
    }

    #[test]
    fn enumerate_hex_19_points() {
        let lat = hex_lattice();
        let pts = lat
            .enumerate_in_ball(&dv(&[0.0, 0.0]), 4.0 / 3.0f64.sqrt())
            .unwrap();
        assert_eq!(pts.len(), 19);
    }

    #[test]
    fn enumeration_budget_trips() {
        let lat = Lattice::integer(2).with_enumeration_budget(10);
        let err = lat.enumerate_in_ball(&dv(&[0.0, 0.0]), 50.0).unwrap_err();
        assert!(matches!(err, Error::EnumerationBudgetExceeded { .. }));
    }

    #[test]
    fn closest_point_rounding() {
        let lat = Lattice::integer(2);
        let p = lat.closest_point(&dv(&[0.4, 0.6])).unwrap();
        assert_eq!(p.coeffs, vec![0, 1]);
    }

    #[test]
    fn closest_point_tie_breaks_lexicographically() {
        let lat = Lattice::integer(2);
        let p = lat.closest_point(&dv(&[0.5, 0.5])).unwrap();
        assert_eq!(p.coeffs, vec![0, 0]);
    }

    #[test]
    fn closest_point_hex_triangle_centre() {
        let lat = hex_lattice();
        let x = dv(&[1.0, 1.0 / 3.0f64.sqrt()]);
        let p = lat.closest_point(&x).unwrap();
        let d = (&p.coords - &x).norm();
        assert!((d - 1.0 / 3.0f64.sqrt()).abs() < 1e-9);
        // A = (1,0), B = (1/2, sqrt(3)/2), E = (3/2, sqrt(3)/2) are all at the
        // same distance; the lexicographic rule picks B = coeffs (0, 1).
        assert_eq!(p.coeffs, vec![0, 1]);
    }

    #[test]
    fn distance_examples() {
        let lat = Lattice::integer(2);
        let d = lat.distance_to(&dv(&[0.5, 0.5])).unwrap();
        assert!((d - 2.0f64.sqrt() / 2.0).abs() < 1e-9);
        let d = lat.distance_to(&dv(&[3.0, -2.0])).unwrap();
        assert!(d.abs() < 1e-12);
        let hex = hex_lattice();
        let d = hex.distance_to(&dv(&[1.0, 1.0 / 3.0f64.sqrt()])).unwrap();
        assert!((d - 1.0 / 3.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn covering_radius_z1() {
        let lat = Lattice::integer(1);
        let b = lat.covering_radius(1e-3).unwrap();
        assert!(b.lo <= 0.5 && 0.5 <= b.hi, "bracket {:?}", b);
        assert!((b.hi - b.lo - 1e-3 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn covering_radius_z2() {
        let lat = Lattice::integer(2);
        let b = lat.covering_radius(1e-3).unwrap();
        let target = 2.0f64.sqrt() / 2.0;
        assert!(b.lo <= target && target <= b.hi, "bracket {:?}", b);
    }

    #[test]
    fn covering_radius_hex() {
        let lat = hex_lattice();
        let b = lat.covering_radius(1e-3).unwrap();
        let target = 1.0 / 3.0f64.sqrt();
        assert!(b.lo <= target && target <= b.hi, "bracket {:?}", b);
    }

    #[test]
    fn covering_radius_rejects_big_dims() {
        let lat = Lattice::integer(5);
        assert!(lat.covering_radius(0.5).is_err());
    }

    #[test]
    fn density_examples() {
        use std::f64::consts::PI;
        let hex = hex_lattice();
        let d = hex.covering_density(2.0 / 3.0f64.sqrt());
        assert!((d - 8.0 * PI / (3.0 * 3.0f64.sqrt())).abs() < 1e-9);
        let d_half = hex.covering_density(1.0 / 3.0f64.sqrt());
        assert!((d_half - d / 4.0).abs() < 1e-12 * d);
        let z2 = Lattice::integer(2);
        let d = z2.covering_density(2.0f64.sqrt() / 2.0);
        assert!((d - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_mod_examples() {
        let z2 = Lattice::integer(2);
        let r = z2.reduce_mod(&dv(&[1.25, -0.5])).unwrap();
        assert!((r[0] - 0.25).abs() < 1e-12 && (r[1] - 0.5).abs() < 1e-12);
        let r = z2.reduce_mod(&dv(&[3.0, -7.0])).unwrap();
        assert!(r.norm() < 1e-12);
        let hex = hex_lattice();
        let r = hex.reduce_mod(&dv(&[1.1, 0.1])).unwrap();
        assert!((r[0] - 0.1).abs() < 1e-9 && (r[1] - 0.1).abs() < 1e-9);
    }

    #[test]
    fn point_reconstruction_tolerance() {
        let hex = hex_lattice();
        let p = hex.point_from_coeffs(&[3, -2]).unwrap();
        let expect = hex.basis() * dv(&[3.0, -2.0]);
        assert!((&p.coords - expect).amax() < 1e-9);
    }
}
