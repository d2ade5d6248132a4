mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use remap_core::fem::{
    assemble_mass_matrix, cg_solve, integrate_field, CgConfig, CsrMatrix, NodalField, QuadratureRule,
    SparseSymMatrix,
};
use remap_core::mesh::{generate_square_mesh, Diagonal};
use remap_core::RemapError;

/// Dense P1 mass matrix from collapsed Gauss quadrature on explicit
/// barycentric hat functions.
fn dense_mass(mesh: &remap_core::TriMesh64) -> Vec<Vec<f64>> {
    let n = mesh.num_nodes();
    let mut m = vec![vec![0.0; n]; n];
    for e in 0..mesh.num_elements() {
        let t = mesh.triangle(e);
        let a = common::area(&t);
        let hat = |k: usize, p: common::P| {
            let (b, c) = (t[(k + 1) % 3], t[(k + 2) % 3]);
            common::area(&[p, b, c]) / a
        };
        let nodes = mesh.elements()[e];
        for i in 0..3 {
            for j in 0..3 {
                m[nodes[i]][nodes[j]] += common::integrate_triangle(&t, 6, |p| hat(i, p) * hat(j, p));
            }
        }
    }
    m
}

#[test]
fn mass_matrix_matches_dense_quadrature() {
    let mesh = generate_square_mesh::<f64>(4, 0.0, 0, Diagonal::Right).unwrap();
    let m = assemble_mass_matrix(&mesh);
    let dense = dense_mass(&mesh);
    let got = m.csr().to_dense();
    for i in 0..mesh.num_nodes() {
        for j in 0..mesh.num_nodes() {
            assert!((got[i][j] - dense[i][j]).abs() < 1e-14, "({i},{j})");
        }
    }
    let perturbed = generate_square_mesh::<f64>(5, 0.3, 8, Diagonal::Alternating).unwrap();
    let got = assemble_mass_matrix(&perturbed).csr().to_dense();
    let dense = dense_mass(&perturbed);
    for (r, d) in got.iter().zip(&dense) {
        for (a, b) in r.iter().zip(d) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}

#[test]
fn mass_matrix_sums_and_definiteness() {
    let mesh = generate_square_mesh::<f64>(9, 0.25, 3, Diagonal::Left).unwrap();
    let m = assemble_mass_matrix(&mesh);
    assert!(m.csr().is_symmetric());
    let total: f64 = m.csr().row_sums().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    for (r, b) in m.csr().row_sums().iter().zip(mesh.basis_integrals()) {
        assert!((r - b).abs() < 1e-15);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let x: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mx = m.csr().mul_vec(&x).unwrap();
        let q: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
        assert!(q > 0.0);
    }
}

#[test]
fn cg_matches_dense_solve_on_random_spd() {
    let n = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // A = Bᵀ B + n I with sparse-ish B
    let b: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| if rng.gen_bool(0.2) { rng.gen_range(-1.0..1.0) } else { 0.0 }).collect())
        .collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = (0..n).map(|k| b[k][i] * b[k][j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 };
        }
    }
    let mut trip = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                trip.push((i, j, v));
            }
        }
    }
    let m = SparseSymMatrix::new(CsrMatrix::from_triplets(n, n, trip)).unwrap();
    let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sol = cg_solve(&m, &rhs, &CgConfig::default()).unwrap();
    let oracle = common::dense_solve(a, rhs.clone());
    let norm = oracle.iter().map(|v| v * v).sum::<f64>().sqrt();
    let err = sol.x.iter().zip(&oracle).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    assert!(err / norm < 1e-9);
}

#[test]
fn cg_conservation_identity() {
    let mesh = generate_square_mesh::<f64>(12, 0.2, 5, Diagonal::Right).unwrap();
    let m = assemble_mass_matrix(&mesh);
    let b: Vec<f64> = mesh.basis_integrals().iter().enumerate().map(|(k, w)| w * (1.0 + (k % 7) as f64)).collect();
    let tol = 1e-12;
    let x = cg_solve(&m, &b, &CgConfig::with_tol(tol)).unwrap().x;
    let mx = m.csr().mul_vec(&x).unwrap();
    let lhs: f64 = mx.iter().sum();
    let rhs: f64 = b.iter().sum();
    let b1: f64 = b.iter().map(|v| v.abs()).sum();
    assert!((lhs - rhs).abs() <= tol * b1);
}

#[test]
fn cg_rejects_bad_dimension() {
    let mesh = generate_square_mesh::<f64>(2, 0.0, 0, Diagonal::Right).unwrap();
    let m = assemble_mass_matrix(&mesh);
    assert!(matches!(
        cg_solve(&m, &[1.0, 2.0], &CgConfig::default()),
        Err(RemapError::DimensionMismatch { .. })
    ));
}

#[test]
fn integrals_of_interpolated_fields() {
    let rule = QuadratureRule::three_point();
    let m64 = Arc::new(generate_square_mesh::<f64>(64, 0.0, 0, Diagonal::Right).unwrap());
    let f = NodalField::interpolate(m64.clone(), |p| p[0].sin() * p[1].cos() + 2.0).unwrap();
    let exact = (1.0 - 1f64.cos()) * 1f64.sin() + 2.0;
    assert!((exact - 2.386822).abs() < 1e-6);
    assert!((integrate_field(&f, &rule) - exact).abs() < 2e-4);

    let mp = Arc::new(generate_square_mesh::<f64>(7, 0.3, 1, Diagonal::Alternating).unwrap());
    let lin = NodalField::interpolate(mp.clone(), |p| p[0] + p[1]).unwrap();
    for deg in [1, 2, 4] {
        let r = QuadratureRule::with_degree(deg).unwrap();
        assert!((integrate_field(&lin, &r) - 1.0).abs() < 1e-12);
    }
    let c = NodalField::constant(mp, 3.5);
    assert!((integrate_field(&c, &rule) - 3.5).abs() < 1e-12);
}

#[test]
fn nodal_field_validation() {
    let m = Arc::new(generate_square_mesh::<f64>(2, 0.0, 0, Diagonal::Right).unwrap());
    assert!(matches!(
        NodalField::new(m.clone(), vec![1.0; 3]),
        Err(RemapError::DimensionMismatch { expected: 9, actual: 3 })
    ));
    let mut v = vec![1.0; 9];
    v[4] = f64::INFINITY;
    assert!(NodalField::new(m, v).is_err());
}

#[test]
fn single_precision_pipeline() {
    let mesh = Arc::new(generate_square_mesh::<f32>(6, 0.2, 2, Diagonal::Right).unwrap());
    let m = assemble_mass_matrix(&mesh);
    let ones = vec![1.0f32; mesh.num_nodes()];
    let b = m.csr().mul_vec(&ones).unwrap();
    let x = cg_solve(&m, &b, &CgConfig::default()).unwrap().x;
    assert!(x.iter().all(|v| (v - 1.0).abs() < 1e-4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_exactness(a in 0u32..=4, b in 0u32..=4) {
        // ∫ λ1^a λ2^b over the reference triangle (area 1/2) = a! b! / (a+b+2)!
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        let exact = fact(a) * fact(b) / fact(a + b + 2);
        for rule in [QuadratureRule::<f64>::centroid(), QuadratureRule::three_point(), QuadratureRule::dunavant6()] {
            if a + b > rule.degree() {
                continue;
            }
            let got: f64 = rule.iter().map(|(l, w)| w * l[0].powi(a as i32) * l[1].powi(b as i32)).sum::<f64>() * 0.5;
            prop_assert!((got - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn galerkin_idempotence(seed in 0u64..200, c0 in -2.0f64..2.0, c1 in -2.0f64..2.0) {
        let mesh = Arc::new(generate_square_mesh::<f64>(5, 0.25, seed, Diagonal::Left).unwrap());
        let m = assemble_mass_matrix(&mesh);
        let f: Vec<f64> = mesh.nodes().iter().map(|p| c0 * p[0] + c1 * (3.0 * p[1]).sin() + 4.0).collect();
        let b = m.csr().mul_vec(&f).unwrap();
        // coefficients here reach ~8 and κ(M) ~ 10, so a 1e-10 nodal bound
        // needs the residual below 1e-12
        let x = cg_solve(&m, &b, &CgConfig::with_tol(1e-13)).unwrap().x;
        for (a, e) in x.iter().zip(&f) {
            prop_assert!((a - e).abs() < 1e-10, "{}", (a - e).abs());
        }
    }
}
