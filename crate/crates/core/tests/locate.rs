mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use remap_core::geometry;
use remap_core::locate::UniformGridLocator;
use remap_core::mesh::{generate_square_mesh, Diagonal};

#[test]
fn random_points_agree_with_containment_scan() {
    let m = Arc::new(generate_square_mesh::<f64>(20, 0.25, 9, Diagonal::Alternating).unwrap());
    let loc = UniformGridLocator::new(m.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10_000 {
        let p = [rng.gen::<f64>(), rng.gen::<f64>()];
        let found = loc.locate(p).expect("inside the unit square");
        let tri = m.triangle(found.element);
        // off-edge points have a unique owner
        if found.bary.iter().all(|&l| l > 1e-9) {
            assert_eq!(Some(found.element), common::brute_locate(&m, p, 0.0));
        }
        let q = geometry::from_barycentric(&tri, found.bary);
        assert!(geometry::dist2(p, q).sqrt() <= 1e-10 * m.bbox().diagonal());
        assert!(found.bary.iter().all(|&l| l >= -1e-12));
    }
}

#[test]
fn shared_edges_resolve_to_lowest_index() {
    let m = Arc::new(generate_square_mesh::<f64>(6, 0.2, 3, Diagonal::Right).unwrap());
    let loc = UniformGridLocator::new(m.clone());
    for e in 0..m.num_elements() {
        let t = m.triangle(e);
        for i in 0..3 {
            let mid = [(t[i][0] + t[(i + 1) % 3][0]) / 2.0, (t[i][1] + t[(i + 1) % 3][1]) / 2.0];
            let owner = (0..m.num_elements())
                .find(|&f| geometry::barycentric(&m.triangle(f), mid).iter().all(|&l| l >= -1e-12))
                .unwrap();
            assert_eq!(loc.locate(mid).unwrap().element, owner);
        }
    }
}

#[test]
fn exterior_points_match_nearest_centroid_scan() {
    let m = Arc::new(generate_square_mesh::<f64>(12, 0.2, 4, Diagonal::Left).unwrap());
    let loc = UniformGridLocator::new(m.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 100 {
        let p = [rng.gen_range(-0.5..1.5), rng.gen_range(-0.5..1.5)];
        if (0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1]) {
            continue;
        }
        tested += 1;
        assert!(loc.locate(p).is_none());
        let brute = (0..m.num_elements())
            .min_by(|&a, &b| {
                let da = geometry::dist2(m.centroid(a), p);
                let db = geometry::dist2(m.centroid(b), p);
                da.partial_cmp(&db).unwrap().then(a.cmp(&b))
            })
            .unwrap();
        assert_eq!(loc.nearest_element(p), brute);
    }
}

#[test]
fn just_outside_right_edge_snaps_to_boundary_element() {
    let m = Arc::new(generate_square_mesh::<f64>(8, 0.0, 0, Diagonal::Right).unwrap());
    let loc = UniformGridLocator::new(m.clone());
    let e = loc.nearest_element([1.0 + 1e-15, 0.5]);
    let t = m.triangle(e);
    assert!(t.iter().any(|v| v[0] == 1.0));
}

#[test]
fn every_element_is_listed_in_its_bbox_cells() {
    let m = Arc::new(generate_square_mesh::<f64>(9, 0.3, 2, Diagonal::Alternating).unwrap());
    let loc = UniformGridLocator::new(m.clone());
    let (nx, ny) = loc.grid_size();
    assert_eq!((nx, ny), ((162f64.sqrt()) as usize, (162f64.sqrt()) as usize));
    for e in 0..m.num_elements() {
        let t = m.triangle(e);
        let lo = [t.iter().map(|v| v[0]).fold(f64::MAX, f64::min), t.iter().map(|v| v[1]).fold(f64::MAX, f64::min)];
        let hi = [t.iter().map(|v| v[0]).fold(f64::MIN, f64::max), t.iter().map(|v| v[1]).fold(f64::MIN, f64::max)];
        let i0 = ((lo[0] * nx as f64).floor() as usize).min(nx - 1);
        let i1 = ((hi[0] * nx as f64).floor() as usize).min(nx - 1);
        let j0 = ((lo[1] * ny as f64).floor() as usize).min(ny - 1);
        let j1 = ((hi[1] * ny as f64).floor() as usize).min(ny - 1);
        for j in j0..=j1 {
            for i in i0..=i1 {
                assert!(loc.cell_candidates(i, j).contains(&(e as u32)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn located_element_contains_point(seed in 0u64..500, x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let m = Arc::new(generate_square_mesh::<f64>(7, 0.3, seed, Diagonal::Left).unwrap());
        let loc = UniformGridLocator::new(m.clone());
        let found = loc.locate([x, y]).unwrap();
        let bary = geometry::barycentric(&m.triangle(found.element), [x, y]);
        prop_assert!(bary.iter().all(|&l| l >= -1e-12));
        let first = common::brute_locate(&m, [x, y], 1e-12);
        prop_assert!(first.is_some());
    }
}
