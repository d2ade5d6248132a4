mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use remap_core::geometry;
use remap_core::mesh::{generate_square_mesh, Diagonal, TriMesh};
use remap_core::rbf::{adapt_radius, c4_weight, rbf_transfer, PointCloud, RbfConfig, RbfOperator};
use remap_core::{FieldTransfer, NodalField, RbfTransfer};

fn scattered(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| [rng.gen(), rng.gen()]).collect()
}

#[test]
fn support_equals_distance_scan() {
    let pts = scattered(500, 1);
    let cloud = PointCloud::new(pts.clone(), vec![0.0; pts.len()]).unwrap();
    let cfg = RbfConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let x = [rng.gen_range(-0.1..1.1), rng.gen_range(-0.1..1.1)];
        let r0 = rng.gen_range(0.005..0.2);
        let (r, support) = adapt_radius(x, &cloud, r0, &cfg).unwrap();
        let brute: Vec<usize> = (0..pts.len())
            .filter(|&i| geometry::dist2(pts[i], x) < r * r)
            .collect();
        assert_eq!(support, brute);
        assert!(support.len() >= 6);
        // geometric schedule: r = r0 · 1.5^k with the previous step too small
        let k = ((r / r0).ln() / 1.5f64.ln()).round() as i32;
        assert!((r - r0 * 1.5f64.powi(k)).abs() < 1e-12 * r);
        if k > 0 {
            let prev = r / 1.5;
            assert!(pts.iter().filter(|p| geometry::dist2(**p, x) < prev * prev).count() < 6);
        }
    }
}

#[test]
fn weights_are_positive_inside_and_vanish_outside() {
    for i in 0..=1000 {
        let r = i as f64 / 1000.0;
        let w = c4_weight(r);
        if r < 1.0 {
            assert!(w > 0.0 && w <= 1.0);
        } else {
            assert_eq!(w, 0.0);
        }
    }
    assert!(c4_weight(1.5f64) == 0.0);
}

#[test]
fn radius_defaults_to_twice_source_spacing() {
    let s = Arc::new(generate_square_mesh::<f64>(10, 0.0, 0, Diagonal::Right).unwrap());
    let t = Arc::new(generate_square_mesh::<f64>(7, 0.0, 0, Diagonal::Left).unwrap());
    let op = RbfTransfer::new(s, t, RbfConfig::default()).unwrap();
    assert!(op.operator().radii().iter().all(|&r| (r - 0.2).abs() < 1e-12 || r > 0.2));
    assert!(op.operator().radii().iter().any(|&r| (r - 0.2).abs() < 1e-12));
}

#[test]
fn translation_invariance() {
    let s = generate_square_mesh::<f64>(9, 0.25, 3, Diagonal::Right).unwrap();
    let t = generate_square_mesh::<f64>(7, 0.25, 4, Diagonal::Left).unwrap();
    let shift = [3.25, -1.5];
    let moved = |m: &TriMesh<f64>| {
        let nodes = m.nodes().iter().map(|p| [p[0] + shift[0], p[1] + shift[1]]).collect();
        Arc::new(TriMesh::new(nodes, m.elements().to_vec()).unwrap())
    };
    let f = |p: [f64; 2]| (2.0 * p[0]).sin() + p[1] * p[1];
    let values = s.interpolate(f);
    let run = |s: Arc<TriMesh<f64>>, t: Arc<TriMesh<f64>>| {
        let op = RbfTransfer::new(s.clone(), t, RbfConfig::default()).unwrap();
        op.apply(&NodalField::new(s, values.clone()).unwrap()).unwrap().into_values()
    };
    let a = run(Arc::new(s.clone()), Arc::new(t.clone()));
    let b = run(moved(&s), moved(&t));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn scattered_cloud_black_box() {
    let pts = scattered(2000, 4);
    let values: Vec<f64> = pts.iter().map(|p| 2.0 * p[0] - 3.0 * p[1] + 5.0).collect();
    let cloud = PointCloud::new(pts, values).unwrap();
    let t = Arc::new(generate_square_mesh::<f64>(12, 0.2, 1, Diagonal::Alternating).unwrap());
    let cfg = RbfConfig { lambda: 0.0, ..RbfConfig::default() };
    let out = rbf_transfer(t.clone(), &cloud, &cfg).unwrap();
    for (v, p) in out.values().iter().zip(t.nodes()) {
        assert!((v - (2.0 * p[0] - 3.0 * p[1] + 5.0)).abs() < 1e-10, "{p:?} {v}");
    }
}

#[test]
fn operator_is_linear_in_values() {
    let s = generate_square_mesh::<f64>(8, 0.2, 1, Diagonal::Right).unwrap();
    let cloud = PointCloud::new(s.nodes().to_vec(), vec![0.0; s.num_nodes()]).unwrap();
    let targets: Vec<[f64; 2]> = scattered(50, 8);
    let op = RbfOperator::new(&targets, &cloud, &RbfConfig::default()).unwrap();
    let u: Vec<f64> = (0..s.num_nodes()).map(|i| (i as f64 * 0.37).sin()).collect();
    let v: Vec<f64> = (0..s.num_nodes()).map(|i| (i as f64 * 0.11).cos()).collect();
    let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 2.0 * a - b).collect();
    let (ou, ov, ow) = (op.apply(&u).unwrap(), op.apply(&v).unwrap(), op.apply(&w).unwrap());
    for i in 0..targets.len() {
        assert!((ow[i] - (2.0 * ou[i] - ov[i])).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_fields_are_reproduced(
        a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0,
        seed in 0u64..500, ns in 3usize..12, nt in 2usize..12,
    ) {
        let s = Arc::new(generate_square_mesh::<f64>(ns, 0.3, seed, Diagonal::Right).unwrap());
        let t = Arc::new(generate_square_mesh::<f64>(nt, 0.3, seed + 7, Diagonal::Left).unwrap());
        let f = |p: [f64; 2]| a * p[0] + b * p[1] + c;
        let op = RbfTransfer::new(s.clone(), t.clone(), RbfConfig { lambda: 0.0, ..RbfConfig::default() }).unwrap();
        let out = op.apply(&NodalField::interpolate(s, f).unwrap()).unwrap();
        for (v, p) in out.values().iter().zip(t.nodes()) {
            prop_assert!((v - f(*p)).abs() < 1e-10);
        }
    }
}
