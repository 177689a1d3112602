//! Robust lattice coverings: a covering is robust at radius r when every
//! closed radius-r ball contains an entire fundamental parallelepiped of the
//! lattice. This module enumerates anchored fundamental parallelepipeds,
//! evaluates the deficit function f(w) (the smallest radius around w that fits
//! one), certifies or refutes robustness on a grid, brackets the minimal
//! robust radius, and runs a seeded local search for low-density robust
//! coverings in the plane.

use crate::error::{Error, Result};
use crate::lattice::{CellGrid, Lattice};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Dimension cap for parallelepiped enumeration and robustness certification.
pub const MAX_ROBUST_DIM: usize = 3;

/// Relative tolerance when matching a generator set's volume to the lattice
/// determinant.
pub const DET_MATCH_REL_TOL: f64 = 1e-9;

/// Absolute slack on vertex norms for closed-ball containment.
pub const VERTEX_NORM_SLACK: f64 = 1e-9;

/// A grid point must exceed the target radius by this much before it counts
/// as a NotRobust witness.
pub const WITNESS_MARGIN: f64 = 1e-12;

/// A parallelepiped spanned by `gens` starting at `anchor`, with its 2^d
/// vertex set cached. `gen_coeffs` are the generators' integer coordinates in
/// the owning lattice basis (vertex identity is exact integer data).
#[derive(Debug, Clone)]
pub struct Parallelepiped {
    pub anchor: DVector<f64>,
    pub gens: Vec<DVector<f64>>,
    pub vertices: Vec<DVector<f64>>,
    pub gen_coeffs: Vec<Vec<i64>>,
}

impl Parallelepiped {
    pub fn dim(&self) -> usize {
        self.gens.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Robust,
    NotRobust,
    Inconclusive,
}

/// Outcome of a grid certification run at a fixed radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobustnessCertificate {
    pub radius: f64,
    pub grid_h: f64,
    /// Max over the grid of the deficit f.
    pub worst_deficit: f64,
    /// radius - worst_deficit - grid_h*sqrt(d)/2; Robust iff >= 0.
    pub margin: f64,
    pub verdict: Verdict,
    /// A grid point with f(witness) > radius, present iff NotRobust.
    pub witness: Option<Vec<f64>>,
}

/// All fundamental parallelepipeds of `lat` that have 0 as a vertex and fit
/// inside the closed ball of radius `big_r` around the origin, deduplicated
/// by vertex set and in deterministic order.
pub fn enumerate_fundamental_parallelepipeds(
    lat: &Lattice,
    big_r: f64,
) -> Result<Vec<Parallelepiped>> {
    let d = lat.dim();
    if d > MAX_ROBUST_DIM {
        return Err(Error::infeasible(format!(
            "parallelepiped enumeration limited to dim <= {MAX_ROBUST_DIM} (got {d})"
        )));
    }
    if !big_r.is_finite() || big_r < 0.0 {
        return Err(Error::invalid("radius must be finite and nonnegative"));
    }
    let origin = DVector::zeros(d);
    let points = lat.enumerate_in_ball(&origin, big_r)?;
    let nonzero: Vec<_> = points
        .into_iter()
        .filter(|p| p.coeffs.iter().any(|&c| c != 0))
        .collect();

    let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut out: Vec<(Vec<Vec<i64>>, Parallelepiped)> = Vec::new();
    let r_bound = big_r + VERTEX_NORM_SLACK;

    let mut idx = vec![0usize; d];
    combinations(nonzero.len(), d, &mut idx, &mut |chosen| {
        let gens: Vec<&crate::lattice::LatticePoint> =
            chosen.iter().map(|&i| &nonzero[i]).collect();
        // Volume check: |det[gens]| must equal the covolume.
        let mut m = DMatrix::zeros(d, d);
        for (j, g) in gens.iter().enumerate() {
            m.set_column(j, &g.coords);
        }
        let vol = m.determinant().abs();
        if (vol - lat.det_abs()).abs() > DET_MATCH_REL_TOL * lat.det_abs() {
            return;
        }
        // All 2^d subset sums must stay inside the ball.
        let mut vertex_coeffs: Vec<Vec<i64>> = Vec::with_capacity(1 << d);
        for mask in 0u32..(1 << d) {
            let mut c = vec![0i64; d];
            for (j, g) in gens.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    for (ci, gi) in c.iter_mut().zip(&g.coeffs) {
                        *ci += gi;
                    }
                }
            }
            vertex_coeffs.push(c);
        }
        let verts: Vec<DVector<f64>> = vertex_coeffs
            .iter()
            .map(|c| {
                lat.basis() * DVector::from_iterator(d, c.iter().map(|&x| x as f64))
            })
            .collect();
        if verts.iter().any(|v| v.norm() > r_bound) {
            return;
        }
        let mut key = vertex_coeffs.clone();
        key.sort_unstable();
        if seen.insert(key.clone()) {
            out.push((
                key,
                Parallelepiped {
                    anchor: DVector::zeros(d),
                    gens: gens.iter().map(|g| g.coords.clone()).collect(),
                    vertices: verts,
                    gen_coeffs: gens.iter().map(|g| g.coeffs.clone()).collect(),
                },
            ));
        }
    });

    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

/// Visit all strictly increasing index combinations of size `k` from `0..n`.
fn combinations(n: usize, k: usize, idx: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    fn rec(
        n: usize,
        k: usize,
        start: usize,
        depth: usize,
        idx: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if depth == k {
            visit(idx);
            return;
        }
        for i in start..n {
            idx[depth] = i;
            rec(n, k, i + 1, depth + 1, idx, visit);
        }
    }
    rec(n, k, 0, 0, idx, visit);
}

/// Precomputed candidate data for deficit evaluation over a region:
/// the anchored parallelepipeds at scale 2r and a superset of the lattice
/// points that can serve as anchors for any w in the region.
struct DeficitCandidates {
    dim: usize,
    r: f64,
    /// Flattened vertex lists (2^d vertices, d coords each), sorted by
    /// max vertex norm so small parallelepipeds are tried first.
    paras: Vec<Vec<f64>>,
    /// Flattened anchor shifts, sorted by distance to the region center.
    shifts: Vec<f64>,
    n_shifts: usize,
}

impl DeficitCandidates {
    fn new(lat: &Lattice, r: f64, region_center: &DVector<f64>, region_radius: f64) -> Result<Self> {
        let d = lat.dim();
        let paras_raw = enumerate_fundamental_parallelepipeds(lat, 2.0 * r)?;
        let mut paras: Vec<(f64, Vec<f64>)> = paras_raw
            .iter()
            .map(|p| {
                let max_norm = p
                    .vertices
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0f64, f64::max);
                let flat: Vec<f64> = p.vertices.iter().flat_map(|v| v.iter().copied()).collect();
                (max_norm, flat)
            })
            .collect();
        paras.sort_by(|a, b| a.0.total_cmp(&b.0));

        let anchors = lat.enumerate_in_ball(region_center, r + region_radius + 1e-9)?;
        let mut shift_list: Vec<(f64, Vec<f64>)> = anchors
            .iter()
            .map(|p| {
                let dist = (&p.coords - region_center).norm();
                (dist, p.coords.iter().copied().collect())
            })
            .collect();
        shift_list.sort_by(|a, b| a.0.total_cmp(&b.0));

        let n_shifts = shift_list.len();
        let mut shifts = Vec::with_capacity(n_shifts * d);
        for (_, s) in shift_list {
            shifts.extend(s);
        }
        Ok(DeficitCandidates {
            dim: d,
            r,
            paras: paras.into_iter().map(|(_, f)| f).collect(),
            shifts,
            n_shifts,
        })
    }

    /// The deficit f(w): min over anchors s within r of w and anchored
    /// parallelepipeds P of the max distance from w to the vertices of s + P.
    /// Returns +inf when no candidate applies.
    ///
    /// `abandon_below`: once the running minimum drops to this level or lower
    /// the exact value no longer matters to the caller and evaluation stops
    /// early (the returned value is still an upper bound on f(w)).
    fn deficit(&self, w: &[f64], abandon_below: f64) -> f64 {
        let d = self.dim;
        let r_sq = self.r * self.r + VERTEX_NORM_SLACK;
        let mut best = f64::INFINITY;
        for si in 0..self.n_shifts {
            let s = &self.shifts[si * d..(si + 1) * d];
            let mut ws_sq = 0.0;
            for k in 0..d {
                let t = w[k] - s[k];
                ws_sq += t * t;
            }
            if ws_sq > r_sq {
                continue;
            }
            for flat in &self.paras {
                // max over vertices of |w - s - v|^2, abandoning as soon as
                // it reaches the current best.
                let mut g_sq = 0.0f64;
                let mut vi = 0;
                while vi < flat.len() {
                    let mut dist_sq = 0.0;
                    for k in 0..d {
                        let t = w[k] - s[k] - flat[vi + k];
                        dist_sq += t * t;
                    }
                    if dist_sq > g_sq {
                        g_sq = dist_sq;
                        if g_sq >= best * best {
                            break;
                        }
                    }
                    vi += d;
                }
                let g = g_sq.sqrt();
                if g < best {
                    best = g;
                    if best <= abandon_below {
                        return best;
                    }
                }
            }
        }
        best
    }
}

/// The deficit f(w) for a single point: the smallest radius t such that the
/// closed ball of radius t around w contains a fundamental parallelepiped
/// whose anchor vertex lies within `r` of w. Returns +inf when no anchored
/// candidate exists at scale 2r.
pub fn robust_deficit(lat: &Lattice, r: f64, w: &DVector<f64>) -> Result<f64> {
    if lat.dim() > MAX_ROBUST_DIM {
        return Err(Error::infeasible(format!(
            "robust deficit limited to dim <= {MAX_ROBUST_DIM}"
        )));
    }
    if w.len() != lat.dim() {
        return Err(Error::DimensionMismatch {
            expected: lat.dim(),
            got: w.len(),
        });
    }
    let cands = DeficitCandidates::new(lat, r, w, 0.0)?;
    Ok(cands.deficit(w.as_slice(), f64::NEG_INFINITY))
}

/// State of a branch-and-bound refinement of the deficit maximum.
///
/// Level 0 evaluates the full cell grid at the base spacing. Each further
/// level halves the spacing and re-evaluates only around points whose value
/// is within Lipschitz reach of the running maximum; everything dropped is
/// provably below `max + h*sqrt(d)/2` at every later level, so the bound
/// `sup f <= max + finest_h*sqrt(d)/2` stays valid throughout.
struct MaxRefinement {
    /// Exact maximum of f over all evaluated points.
    max: f64,
    argmax: Vec<f64>,
    /// Spacing of the finest completed level.
    finest_h: f64,
}


/// Stop rule evaluated after each completed level on (current max, current h).
type StopRule<'a> = dyn Fn(f64, f64) -> bool + 'a;

fn refine_deficit_max(
    lat: &Lattice,
    cands: &DeficitCandidates,
    base_h: f64,
    done: &StopRule<'_>,
    max_levels: usize,
    max_evals: usize,
) -> MaxRefinement {
    let d = lat.dim();
    let sqrt_d = (d as f64).sqrt();

    // Level 0: full table over the padded cell box.
    let grid = CellGrid::new(lat, base_h);
    let rows: Vec<Vec<f64>> = (0..grid.row_count())
        .into_par_iter()
        .map(|i0| {
            let mut vals = Vec::with_capacity(grid.row_len());
            grid.for_each_in_row(i0, |w| vals.push(cands.deficit(w, f64::NEG_INFINITY)));
            vals
        })
        .collect();
    let values: Vec<f64> = rows.into_iter().flatten().collect();
    let mut evals = values.len();

    let mut max = f64::NEG_INFINITY;
    let mut arg_flat = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if v > max {
            max = v;
            arg_flat = i;
        }
    }
    let mut argmax = grid.coords_of(arg_flat);
    let mut h = base_h;

    // Points that can still influence the maximum.
    let threshold = max - 1.5 * h * sqrt_d;
    let mut kept: Vec<Vec<f64>> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= threshold)
        .map(|(i, _)| grid.coords_of(i))
        .collect();

    for _ in 0..max_levels {
        if done(max, h) || !max.is_finite() || evals >= max_evals {
            break;
        }
        let fine_h = h * 0.5;
        // Global fine-grid indices covering a (h/2 + fine_h)-box around each
        // kept point; BTreeSet dedups overlaps and fixes the order.
        let steps = ((0.5 * h + fine_h) / fine_h).ceil() as i64;
        let mut fine_idx: BTreeSet<Vec<i64>> = BTreeSet::new();
        for p in &kept {
            let base: Vec<i64> = p.iter().map(|c| (c / fine_h).round() as i64).collect();
            let mut offset = vec![-steps; d];
            'fill: loop {
                fine_idx.insert(base.iter().zip(&offset).map(|(b, o)| b + o).collect());
                let mut k = 0;
                loop {
                    offset[k] += 1;
                    if offset[k] <= steps {
                        break;
                    }
                    offset[k] = -steps;
                    k += 1;
                    if k == d {
                        break 'fill;
                    }
                }
            }
        }
        let pts: Vec<Vec<f64>> = fine_idx
            .into_iter()
            .map(|idx| idx.iter().map(|&i| i as f64 * fine_h).collect())
            .collect();
        let vals: Vec<f64> = pts
            .par_iter()
            .map(|w| cands.deficit(w, f64::NEG_INFINITY))
            .collect();
        evals += vals.len();
        for (p, &v) in pts.iter().zip(&vals) {
            if v > max {
                max = v;
                argmax = p.clone();
            }
        }
        h = fine_h;
        let threshold = max - 1.5 * h * sqrt_d;
        kept = pts
            .into_iter()
            .zip(&vals)
            .filter(|(_, &v)| v >= threshold)
            .map(|(p, _)| p)
            .collect();
        if kept.is_empty() {
            break;
        }
    }

    MaxRefinement {
        max,
        argmax,
        finest_h: h,
    }
}

fn build_cell_candidates(lat: &Lattice, r: f64, pad: f64) -> Result<DeficitCandidates> {
    let (box_lo, box_hi) = lat.cell_bounding_box();
    let center = (&box_lo + &box_hi) * 0.5;
    let region_radius = (&box_hi - &box_lo).norm() * 0.5 + pad;
    DeficitCandidates::new(lat, r, &center, region_radius)
}

/// Grid-certify robustness of `lat` at radius `r`.
///
/// Starts from a grid of ambient spacing `grid_h` covering the fundamental
/// parallelepiped (periodicity of f makes that enough) and adaptively halves
/// the spacing near the deficit maximizers until the 1-Lipschitz bound
/// decides the verdict: Robust once max f <= r - h*sqrt(d)/2 at the finest
/// spacing h, NotRobust as soon as any evaluated point exceeds r. Tight
/// radii where sup f equals r exactly stay Inconclusive by nature; the
/// certificate records the finest spacing reached in `grid_h`.
pub fn certify_robust(lat: &Lattice, r: f64, grid_h: f64) -> Result<RobustnessCertificate> {
    certify_robust_with(lat, r, grid_h, 30, 40_000_000)
}

/// `certify_robust` with explicit refinement budgets.
pub fn certify_robust_with(
    lat: &Lattice,
    r: f64,
    grid_h: f64,
    max_levels: usize,
    max_evals: usize,
) -> Result<RobustnessCertificate> {
    if lat.dim() > MAX_ROBUST_DIM {
        return Err(Error::infeasible(format!(
            "certification limited to dim <= {MAX_ROBUST_DIM}"
        )));
    }
    if !(r > 0.0) || !(grid_h > 0.0) {
        return Err(Error::invalid("radius and grid_h must be positive"));
    }
    let sqrt_d = (lat.dim() as f64).sqrt();
    let cands = build_cell_candidates(lat, r, 2.0 * grid_h)?;
    let done =
        move |max: f64, h: f64| max > r + WITNESS_MARGIN || max <= r - h * sqrt_d * 0.5;
    let out = refine_deficit_max(lat, &cands, grid_h, &done, max_levels, max_evals);

    let slack = out.finest_h * sqrt_d / 2.0;
    let margin = r - out.max - slack;
    let (verdict, witness) = if out.max > r + WITNESS_MARGIN {
        (Verdict::NotRobust, Some(out.argmax))
    } else if margin >= 0.0 {
        (Verdict::Robust, None)
    } else {
        (Verdict::Inconclusive, None)
    };
    Ok(RobustnessCertificate {
        radius: r,
        grid_h: out.finest_h,
        worst_deficit: out.max,
        margin,
        verdict,
        witness,
    })
}

/// Verdict-only certification used by the bisection.
fn adaptive_verdict(lat: &Lattice, r: f64, base_h: f64) -> Result<Verdict> {
    let cert = certify_robust_with(lat, r, base_h, 40, 20_000_000)?;
    Ok(cert.verdict)
}

/// Bracket the minimal robust radius of `lat` by bisection, certifying each
/// step on an adaptively refined grid. The returned bracket has width <= tol,
/// its upper end certified Robust and its lower end certified NotRobust
/// (radius zero is NotRobust by construction: no parallelepiped fits in a
/// point). A probe landing exactly on the minimal radius can never be
/// certified either way; such steps are retried at nearby off-center points
/// before the whole bisection is declared stalled.
pub fn min_robust_radius(lat: &Lattice, tol: f64) -> Result<crate::lattice::RadiusBracket> {
    if lat.dim() > MAX_ROBUST_DIM {
        return Err(Error::infeasible(format!(
            "min robust radius limited to dim <= {MAX_ROBUST_DIM}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol must be positive"));
    }
    let scale = lat.det_abs().powf(1.0 / lat.dim() as f64);
    // The base grid stays coarse; the certifier's own refinement does the
    // zooming near the deficit maximizers.
    let base_h = |_width: f64| scale * 0.04;

    let mut lo = 0.0f64;
    let mut hi = 1.19 * scale;
    let mut doublings = 0;
    loop {
        match adaptive_verdict(lat, hi, base_h(hi))? {
            Verdict::Robust => break,
            Verdict::NotRobust => {
                lo = hi;
                hi *= 2.0;
            }
            // Landed on (or indistinguishably close to) the tight radius;
            // nudge upward, which preserves the doubling invariant.
            Verdict::Inconclusive => hi *= 1.013,
        }
        doublings += 1;
        if doublings > 80 {
            return Err(Error::BisectionStalled { lo, hi });
        }
    }

    let mut steps = 0;
    while hi - lo > tol {
        steps += 1;
        if steps > 200 {
            return Err(Error::BisectionStalled { lo, hi });
        }
        // Probe the midpoint first; on Inconclusive retry at off-center
        // points of the bracket before giving up.
        let offsets = [0.5f64, 0.603, 0.411, 0.722, 0.297];
        let mut resolved = false;
        for &t in &offsets {
            let probe = lo + t * (hi - lo);
            match adaptive_verdict(lat, probe, base_h(hi - lo))? {
                Verdict::Robust => {
                    hi = probe;
                    resolved = true;
                    break;
                }
                Verdict::NotRobust => {
                    lo = probe;
                    resolved = true;
                    break;
                }
                Verdict::Inconclusive => continue,
            }
        }
        if !resolved {
            return Err(Error::BisectionStalled { lo, hi });
        }
    }
    Ok(crate::lattice::RadiusBracket { lo, hi })
}

/// Tabulate the deficit on the uniform cell grid of spacing `grid_h`:
/// one (point, f) row per grid point, in row-major order. Intended for
/// external plotting of the deficit landscape.
pub fn deficit_grid(lat: &Lattice, r: f64, grid_h: f64) -> Result<Vec<(Vec<f64>, f64)>> {
    if lat.dim() > MAX_ROBUST_DIM {
        return Err(Error::infeasible(format!(
            "deficit grid limited to dim <= {MAX_ROBUST_DIM}"
        )));
    }
    if !(r > 0.0) || !(grid_h > 0.0) {
        return Err(Error::invalid("radius and grid_h must be positive"));
    }
    let cands = build_cell_candidates(lat, r, 2.0 * grid_h)?;
    let grid = CellGrid::new(lat, grid_h);
    let rows: Vec<Vec<(Vec<f64>, f64)>> = (0..grid.row_count())
        .into_par_iter()
        .map(|i0| {
            let mut out = Vec::with_capacity(grid.row_len());
            grid.for_each_in_row(i0, |w| {
                out.push((w.to_vec(), cands.deficit(w, f64::NEG_INFINITY)));
            });
            out
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// The named robust coverings that ship with the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinCovering {
    /// Hexagonal lattice with radius 2/sqrt(3).
    Hex,
    /// Integer lattice Z^d with radius sqrt(d).
    Cube(usize),
}

impl BuiltinCovering {
    /// Parse "hex", "cube(D)", or "cubeD".
    pub fn from_name(name: &str) -> Result<Self> {
        let s = name.trim().to_ascii_lowercase();
        if s == "hex" {
            return Ok(BuiltinCovering::Hex);
        }
        let digits = s
            .strip_prefix("cube(")
            .and_then(|rest| rest.strip_suffix(')'))
            .or_else(|| s.strip_prefix("cube"));
        if let Some(ds) = digits {
            if let Ok(d) = ds.parse::<usize>() {
                if d >= 1 {
                    return Ok(BuiltinCovering::Cube(d));
                }
            }
        }
        Err(Error::UnknownName(name.to_string()))
    }

    /// The lattice and its robust radius.
    pub fn build(self) -> (Lattice, f64) {
        match self {
            BuiltinCovering::Hex => (crate::lattice::hex_lattice(), 2.0 / 3.0f64.sqrt()),
            BuiltinCovering::Cube(d) => (Lattice::integer(d), (d as f64).sqrt()),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            BuiltinCovering::Hex => 2,
            BuiltinCovering::Cube(d) => d,
        }
    }
}

/// Build a named robust covering: the lattice together with its radius.
pub fn builtin_covering(name: &str) -> Result<(Lattice, f64)> {
    Ok(BuiltinCovering::from_name(name)?.build())
}

/// Result of the planar robust-covering search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResult {
    pub seed: u64,
    pub iters: usize,
    /// Second basis vector (x, y) of the normalized basis (first vector lies
    /// on the positive axis; whole basis rescaled to determinant 1).
    pub x: f64,
    pub y: f64,
    /// Certified robust radius (upper end of the bracket) of the best basis.
    pub radius: f64,
    /// Certified robust covering density pi * radius^2 (determinant is 1).
    pub density: f64,
    /// Row-major normalized basis for reconstruction.
    pub basis: Vec<f64>,
}

impl SearchResult {
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::from_basis(DMatrix::from_row_slice(2, 2, &self.basis))
    }
}

fn normalized_basis_2d(x: f64, y: f64) -> Result<Lattice> {
    // Columns (1,0) and (x,y), rescaled to determinant 1.
    let s = 1.0 / y.sqrt();
    Lattice::from_basis(DMatrix::from_column_slice(2, 2, &[s, 0.0, x * s, y * s]))
}

/// Certified upper bound on the minimal robust radius of a planar lattice:
/// build candidates at a generous radius `r_bar`, bracket sup f by adaptive
/// refinement down to spacing `h_fine`, and report max + h_fine*sqrt(2)/2.
///
/// For any r <= r_bar the deficit computed with r_bar-candidates decides
/// robustness at r exactly (a witnessing parallelepiped inside the r-ball is
/// in particular inside the r_bar-ball), so the sup bracket is a bracket of
/// the minimal robust radius as long as the result stays below r_bar.
fn certified_radius_upper_2d(lat: &Lattice, h_coarse: f64, h_fine: f64) -> Result<f64> {
    let sqrt_d = (lat.dim() as f64).sqrt();
    let mut r_bar = lat.det_abs().sqrt();
    for _ in 0..48 {
        r_bar *= 2.0;
        let cands = build_cell_candidates(lat, r_bar, 2.0 * h_coarse)?;
        let done = move |_max: f64, h: f64| h <= h_fine;
        let out = refine_deficit_max(lat, &cands, h_coarse, &done, 40, 40_000_000);
        if !out.max.is_finite() {
            continue;
        }
        let upper = out.max + out.finest_h * sqrt_d / 2.0;
        if upper <= r_bar {
            return Ok(upper);
        }
    }
    Err(Error::BisectionStalled { lo: 0.0, hi: r_bar })
}

/// Seeded local search over normalized planar bases for low certified robust
/// covering density. Starts from the hexagonal basis, proposes Gaussian-ish
/// perturbations with shrinking step size, and keeps improvements only; the
/// hexagonal baseline is therefore never regressed past. The best basis is
/// re-certified at a finer grid before reporting.
pub fn search_robust_2d(seed: u64, iters: usize) -> Result<SearchResult> {
    const H_COARSE_SEARCH: f64 = 8e-3;
    const H_FINE_SEARCH: f64 = 2e-3;
    const H_FINE_FINAL: f64 = 1.4e-4;

    let hex_x = 0.5;
    let hex_y = 3.0f64.sqrt() / 2.0;

    let objective = |x: f64, y: f64, h_fine: f64| -> Option<f64> {
        let lat = normalized_basis_2d(x, y).ok()?;
        certified_radius_upper_2d(&lat, H_COARSE_SEARCH, h_fine).ok()
    };

    // A move is accepted only when it beats the incumbent by more than the
    // coarse certificates' combined slack, so grid-alignment noise cannot
    // drag the search onto a genuinely worse basis.
    const ACCEPT_MARGIN: f64 = 2.5e-3;

    let mut best = (hex_x, hex_y);
    let mut best_r = objective(hex_x, hex_y, H_FINE_SEARCH)
        .ok_or_else(|| Error::invalid("baseline certification failed"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..iters {
        // Step size decays over three phases.
        let sigma = match (3 * t) / iters.max(1) {
            0 => 0.08,
            1 => 0.02,
            _ => 0.005,
        };
        let dx = sigma * (rng.random::<f64>() * 2.0 - 1.0);
        let dy = sigma * (rng.random::<f64>() * 2.0 - 1.0);
        let x = (best.0 + dx).clamp(-0.75, 0.75);
        let y = (best.1 + dy).clamp(0.25, 3.0);
        if let Some(r) = objective(x, y, H_FINE_SEARCH) {
            if r < best_r - ACCEPT_MARGIN {
                best = (x, y);
                best_r = r;
            }
        }
    }

    // Final certification at fine resolution; the hexagonal baseline is in
    // the search space, so the reported result is never worse than it.
    let mut radius = objective(best.0, best.1, H_FINE_FINAL)
        .ok_or_else(|| Error::invalid("final certification failed"))?;
    if best != (hex_x, hex_y) {
        let hex_r = objective(hex_x, hex_y, H_FINE_FINAL)
            .ok_or_else(|| Error::invalid("baseline certification failed"))?;
        if hex_r <= radius {
            best = (hex_x, hex_y);
            radius = hex_r;
        }
    }
    let lat = normalized_basis_2d(best.0, best.1)?;
    let basis: Vec<f64> = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| lat.basis()[(i, j)])
        .collect();
    Ok(SearchResult {
        seed,
        iters,
        x: best.0,
        y: best.1,
        radius,
        density: std::f64::consts::PI * radius * radius,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::hex_lattice;

    fn dv(vals: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(vals)
    }

    #[test]
    fn z1_segments_within_radius_2() {
        let lat = Lattice::integer(1);
        let paras = enumerate_fundamental_parallelepipeds(&lat, 2.0).unwrap();
        // Only the unit segments [0,1] and [-1,0]; [0,2] has the wrong volume.
        assert_eq!(paras.len(), 2);
        for p in &paras {
            assert_eq!(p.vertices.len(), 2);
        }
    }

    #[test]
    fn hex_parallelepiped_count_frozen() {
        // Derived by brute force from the 19 lattice points of the doubled
        // ball and frozen: 6 unit rhombi, 6 fan parallelograms (three unit
        // vertices), and 12 sheared ones with a norm-sqrt(3) vertex.
        let hex = hex_lattice();
        let paras =
            enumerate_fundamental_parallelepipeds(&hex, 4.0 / 3.0f64.sqrt()).unwrap();
        assert_eq!(paras.len(), 24);
    }

    #[test]
    fn z2_no_parallelepiped_in_tiny_ball() {
        let lat = Lattice::integer(2);
        let paras = enumerate_fundamental_parallelepipeds(&lat, 0.5).unwrap();
        assert!(paras.is_empty());
    }

    #[test]
    fn deficit_hex_triangle_centre() {
        let lat = hex_lattice();
        let r = 2.0 / 3.0f64.sqrt();
        let x = dv(&[1.0, 1.0 / 3.0f64.sqrt()]);
        let f = robust_deficit(&lat, r, &x).unwrap();
        assert!((f - r).abs() < 1e-9, "f(X) = {f}, expected {r}");
        // Midpoint of A and B sees a strictly smaller deficit.
        let mid = dv(&[0.75, 3.0f64.sqrt() / 4.0]);
        let f_mid = robust_deficit(&lat, r, &mid).unwrap();
        assert!(f_mid < f - 1e-6, "f(mid) = {f_mid}");
    }

    #[test]
    fn deficit_z2_at_origin() {
        let lat = Lattice::integer(2);
        let f = robust_deficit(&lat, 2.0f64.sqrt(), &dv(&[0.0, 0.0])).unwrap();
        assert!((f - 2.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn certify_hex_inflated_radius() {
        let lat = hex_lattice();
        let r = 1.000001 * 2.0 / 3.0f64.sqrt();
        let cert = certify_robust(&lat, r, 1e-3).unwrap();
        assert_eq!(cert.verdict, Verdict::Robust, "cert: {:?}", cert);
    }

    #[test]
    fn certify_hex_deflated_radius_not_robust() {
        let lat = hex_lattice();
        let r_star = 2.0 / 3.0f64.sqrt();
        let cert = certify_robust(&lat, 0.999 * r_star, 1e-2).unwrap();
        assert_eq!(cert.verdict, Verdict::NotRobust);
        let w = dv(cert.witness.as_ref().expect("witness required"));
        let f = robust_deficit(&lat, 0.999 * r_star, &w).unwrap();
        assert!(f > 0.999 * r_star);
    }

    #[test]
    fn certify_z2_comfortable_radius() {
        let lat = Lattice::integer(2);
        let cert = certify_robust(&lat, 1.5, 1e-2).unwrap();
        assert_eq!(cert.verdict, Verdict::Robust);
    }

    #[test]
    fn min_radius_z1() {
        let lat = Lattice::integer(1);
        let b = min_robust_radius(&lat, 1e-3).unwrap();
        assert!(b.lo <= 1.0 && 1.0 <= b.hi, "bracket {:?}", b);
        assert!(b.hi - b.lo <= 1e-3);
    }

    #[test]
    fn builtin_parsing() {
        assert_eq!(
            BuiltinCovering::from_name("hex").unwrap(),
            BuiltinCovering::Hex
        );
        assert_eq!(
            BuiltinCovering::from_name("cube(3)").unwrap(),
            BuiltinCovering::Cube(3)
        );
        assert_eq!(
            BuiltinCovering::from_name("cube2").unwrap(),
            BuiltinCovering::Cube(2)
        );
        assert!(BuiltinCovering::from_name("leech").is_err());
    }

    #[test]
    fn builtin_values() {
        let (hex, r) = builtin_covering("hex").unwrap();
        assert!((hex.det_abs() - 3.0f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((r - 2.0 / 3.0f64.sqrt()).abs() < 1e-12);
        assert!((hex.covering_density(r) - crate::constants::hex_density()).abs() < 1e-9);
        let (z2, r) = builtin_covering("cube(2)").unwrap();
        assert!((z2.covering_density(r) - 2.0 * std::f64::consts::PI).abs() < 1e-9);
        let (_, r1) = builtin_covering("cube(1)").unwrap();
        assert!((r1 - 1.0).abs() < 1e-12);
    }
}
