//! Enumeration and closest-vector queries checked against an independent
//! brute-force oracle that scans a coefficient box derived from the inverse
//! basis (no shared code with the production enumeration).

use lattice_covering::lattice::{hex_lattice, Lattice};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Brute force: all coefficient vectors c with |B c - center| <= radius,
/// from a box bound |c_i| <= ||row_i(B^-1)|| (|center| + radius) + 1.
fn brute_force_points(
    basis: &DMatrix<f64>,
    center: &DVector<f64>,
    radius: f64,
) -> Vec<Vec<i64>> {
    let n = basis.nrows();
    let inv = basis.clone().try_inverse().expect("nonsingular");
    let reach = center.norm() + radius;
    let bounds: Vec<i64> = (0..n)
        .map(|i| (inv.row(i).norm() * reach).floor() as i64 + 1)
        .collect();
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    fn rec(
        basis: &DMatrix<f64>,
        center: &DVector<f64>,
        r_sq: f64,
        bounds: &[i64],
        c: &mut Vec<i64>,
        level: usize,
        out: &mut Vec<Vec<i64>>,
    ) {
        if level == bounds.len() {
            let v = basis * DVector::from_iterator(c.len(), c.iter().map(|&x| x as f64));
            if (v - center).norm_squared() <= r_sq {
                out.push(c.clone());
            }
            return;
        }
        for x in -bounds[level]..=bounds[level] {
            c[level] = x;
            rec(basis, center, r_sq, bounds, c, level + 1, out);
        }
    }
    // Same closed-ball slack convention as the library.
    rec(
        basis,
        center,
        radius * radius + 1e-9,
        &bounds,
        &mut c,
        0,
        &mut out,
    );
    out.sort_unstable();
    out
}

fn small_basis(dim: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-2.0f64..2.0, dim * dim)
        .prop_map(move |entries| DMatrix::from_row_slice(dim, dim, &entries))
        .prop_filter("well conditioned", |m| {
            m.determinant().abs() > 0.3
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn enumeration_matches_brute_force_2d(
        basis in small_basis(2),
        cx in -1.0f64..1.0,
        cy in -1.0f64..1.0,
        radius in 0.1f64..3.0,
    ) {
        let center = DVector::from_column_slice(&[cx, cy]);
        let lat = Lattice::from_basis(basis.clone()).unwrap();
        let got: Vec<Vec<i64>> = lat
            .enumerate_in_ball(&center, radius)
            .unwrap()
            .into_iter()
            .map(|p| p.coeffs)
            .collect();
        let expect = brute_force_points(&basis, &center, radius);
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn enumeration_matches_brute_force_3d(
        basis in small_basis(3),
        radius in 0.1f64..2.0,
    ) {
        let center = DVector::zeros(3);
        let lat = Lattice::from_basis(basis.clone()).unwrap();
        let got: Vec<Vec<i64>> = lat
            .enumerate_in_ball(&center, radius)
            .unwrap()
            .into_iter()
            .map(|p| p.coeffs)
            .collect();
        let expect = brute_force_points(&basis, &center, radius);
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn closest_point_realizes_minimum(
        basis in small_basis(2),
        tx in -2.0f64..2.0,
        ty in -2.0f64..2.0,
    ) {
        let lat = Lattice::from_basis(basis).unwrap();
        let target = DVector::from_column_slice(&[tx, ty]);
        let closest = lat.closest_point(&target).unwrap();
        let dist = (&closest.coords - &target).norm();
        // Every lattice point within dist + 1e-9 must be at least as far.
        for p in lat.enumerate_in_ball(&target, dist + 1e-9).unwrap() {
            prop_assert!((&p.coords - &target).norm() >= dist - 1e-9);
        }
    }

    #[test]
    fn reduce_mod_is_idempotent_and_periodic(
        basis in small_basis(2),
        x0 in -5.0f64..5.0,
        x1 in -5.0f64..5.0,
        p0 in -3i64..3,
        p1 in -3i64..3,
    ) {
        let lat = Lattice::from_basis(basis).unwrap();
        let x = DVector::from_column_slice(&[x0, x1]);
        let r = lat.reduce_mod(&x).unwrap();
        let rr = lat.reduce_mod(&r).unwrap();
        prop_assert!((&rr - &r).amax() < 1e-9);
        // Coefficients of the representative lie in [0, 1).
        let u = lat.basis_inv() * &r;
        for c in u.iter() {
            prop_assert!((-1e-9..1.0 + 1e-9).contains(c));
        }
        // Shifting by a lattice point does not change the representative.
        let shift = lat.point_from_coeffs(&[p0, p1]).unwrap();
        let r2 = lat.reduce_mod(&(&x + &shift.coords)).unwrap();
        prop_assert!((&r2 - &r).amax() < 1e-9);
    }

    #[test]
    fn covering_density_scales_with_dimension_power(
        basis in small_basis(2),
        r in 0.1f64..4.0,
    ) {
        let lat = Lattice::from_basis(basis).unwrap();
        let d1 = lat.covering_density(r);
        let d2 = lat.covering_density(2.0 * r);
        prop_assert!((d2 - 4.0 * d1).abs() <= 1e-12 * d2.abs().max(1.0));
    }
}

#[test]
fn covering_radius_bracket_is_exact_width() {
    for lat in [Lattice::integer(2), hex_lattice()] {
        let h = 2e-3;
        let b = lat.covering_radius(h).unwrap();
        assert!(b.lo <= b.hi);
        let width = h * (lat.dim() as f64).sqrt() / 2.0;
        assert!((b.hi - b.lo - width).abs() < 1e-15);
    }
}

#[test]
fn hex_enumeration_shell_structure() {
    // Norms^2 in the hexagonal lattice are m^2 + mn + n^2: shells 0, 1, 3, 4
    // hold 1, 6, 6, 6 points inside radius 4/sqrt(3).
    let lat = hex_lattice();
    let pts = lat
        .enumerate_in_ball(&DVector::zeros(2), 4.0 / 3.0f64.sqrt())
        .unwrap();
    let mut shells = std::collections::BTreeMap::new();
    for p in &pts {
        let (m, n) = (p.coeffs[0], p.coeffs[1]);
        let norm_sq = m * m + m * n + n * n;
        *shells.entry(norm_sq).or_insert(0usize) += 1;
    }
    let expect: std::collections::BTreeMap<i64, usize> =
        [(0, 1), (1, 6), (3, 6), (4, 6)].into_iter().collect();
    assert_eq!(shells, expect);
}
