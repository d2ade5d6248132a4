//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use remap_core::mesh::{generate_square_mesh, Diagonal, TriMesh};

pub type P = [f64; 2];

pub fn pair(n_t: usize, n_s: usize, seed: u64) -> (Arc<TriMesh<f64>>, Arc<TriMesh<f64>>) {
    (
        Arc::new(generate_square_mesh(n_t, 0.2, seed, Diagonal::Left).unwrap()),
        Arc::new(generate_square_mesh(n_s, 0.2, seed + 1, Diagonal::Right).unwrap()),
    )
}

pub fn area(tri: &[P; 3]) -> f64 {
    0.5 * ((tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1])
        - (tri[2][0] - tri[0][0]) * (tri[1][1] - tri[0][1]))
}

/// Neighbors by comparing every element pair for two shared nodes.
pub fn brute_adjacency(elements: &[[usize; 3]]) -> Vec<[Option<usize>; 3]> {
    let mut adj = vec![[None; 3]; elements.len()];
    for (e, a) in elements.iter().enumerate() {
        for i in 0..3 {
            let (u, v) = (a[i], a[(i + 1) % 3]);
            for (f, b) in elements.iter().enumerate() {
                if f != e && b.contains(&u) && b.contains(&v) {
                    adj[e][i] = Some(f);
                }
            }
        }
    }
    adj
}

/// Point-in-triangle by edge signs with absolute slack; first hit wins.
pub fn brute_locate(mesh: &TriMesh<f64>, p: P, slack: f64) -> Option<usize> {
    (0..mesh.num_elements()).find(|&e| {
        let t = mesh.triangle(e);
        (0..3).all(|i| {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            let c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            c / len >= -slack
        })
    })
}

/// Gauss–Legendre nodes and weights on [0, 1] via Newton on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

/// Collapsed (Duffy) Gauss rule over a triangle: exact for polynomials of
/// degree ≤ 2n − 2.
pub fn integrate_triangle(tri: &[P; 3], n: usize, g: impl Fn(P) -> f64) -> f64 {
    let gl = gauss_legendre(n);
    let a = area(tri).abs();
    let mut s = 0.0;
    for &(u, wu) in &gl {
        for &(v, wv) in &gl {
            let l = [1.0 - u, u * (1.0 - v), u * v];
            let x = [
                l[0] * tri[0][0] + l[1] * tri[1][0] + l[2] * tri[2][0],
                l[0] * tri[0][1] + l[1] * tri[1][1] + l[2] * tri[2][1],
            ];
            s += wu * wv * 2.0 * u * g(x);
        }
    }
    s * a
}

fn inside(tri: &[P; 3], p: P, eps: f64) -> bool {
    (0..3).all(|i| {
        let (a, b) = (tri[i], tri[(i + 1) % 3]);
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= -eps
    })
}

fn segment_hit(a: P, b: P, c: P, d: P) -> Option<P> {
    let r = [b[0] - a[0], b[1] - a[1]];
    let s = [d[0] - c[0], d[1] - c[1]];
    let den = r[0] * s[1] - r[1] * s[0];
    if den.abs() < 1e-300 {
        return None;
    }
    let q = [c[0] - a[0], c[1] - a[1]];
    let t = (q[0] * s[1] - q[1] * s[0]) / den;
    let u = (q[0] * r[1] - q[1] * r[0]) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then(|| [a[0] + t * r[0], a[1] + t * r[1]])
}

/// Convex hull by Andrew's monotone chain, CCW.
pub fn hull(mut pts: Vec<P>) -> Vec<P> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: P, a: P, b: P| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<P> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn polygon_area(poly: &[P]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1])
        .sum::<f64>()
        * 0.5
}

/// Intersection of two CCW triangles as the hull of mutually contained
/// vertices and edge crossings. Independent of the half-plane clipper.
pub fn intersect_oracle(a: &[P; 3], b: &[P; 3]) -> Vec<P> {
    let mut pts = Vec::new();
    for &p in a {
        if inside(b, p, 1e-14) {
            pts.push(p);
        }
    }
    for &p in b {
        if inside(a, p, 1e-14) {
            pts.push(p);
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if let Some(p) = segment_hit(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3]) {
                pts.push(p);
            }
        }
    }
    hull(pts)
}

/// All (target, source) pairs with overlap area above `rel · |t|`.
pub fn all_pairs(target: &TriMesh<f64>, source: &TriMesh<f64>, rel: f64) -> Vec<Vec<(usize, Vec<P>)>> {
    (0..target.num_elements())
        .map(|t| {
            let tt = target.triangle(t);
            let at = target.areas()[t];
            (0..source.num_elements())
                .filter_map(|s| {
                    let poly = intersect_oracle(&tt, &source.triangle(s));
                    (poly.len() >= 3 && polygon_area(&poly) > rel * at).then_some((s, poly))
                })
                .collect()
        })
        .collect()
}

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap()).unwrap();
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

/// Value of the P1 interpolant of nodal `values` at `p` by brute search.
pub fn eval_p1(mesh: &TriMesh<f64>, values: &[f64], p: P) -> f64 {
    let e = brute_locate(mesh, p, 1e-12).expect("point inside mesh");
    let t = mesh.triangle(e);
    let a = area(&t);
    let l1 = area(&[t[0], p, t[2]]) / a;
    let l2 = area(&[t[0], t[1], p]) / a;
    let nodes = mesh.elements()[e];
    (1.0 - l1 - l2) * values[nodes[0]] + l1 * values[nodes[1]] + l2 * values[nodes[2]]
}

/// Runs `f` inside a dedicated rayon pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .unwrap()
        .install(f)
}
