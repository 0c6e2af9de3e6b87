//! Independent reference computations used by the integration tests. None
//! of these call into the library's own algorithms.

#![allow(dead_code)]

use std::collections::VecDeque;

/// Shortest cycle by deleting each edge in turn and measuring the distance
/// between its endpoints.
pub fn girth_by_edge_deletion(adj: &[Vec<u32>]) -> Option<u32> {
    let n = adj.len();
    let mut best: Option<u32> = None;
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for u in 0..n {
        for &w in &adj[u] {
            let w = w as usize;
            if w <= u {
                continue;
            }
            dist.fill(u32::MAX);
            dist[u] = 0;
            queue.clear();
            queue.push_back(u);
            while let Some(x) = queue.pop_front() {
                if x == w {
                    break;
                }
                for &y in &adj[x] {
                    let y = y as usize;
                    if (x == u && y == w) || dist[y] != u32::MAX {
                        continue;
                    }
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
            if dist[w] != u32::MAX {
                let len = dist[w] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best
}

pub fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// `(p, e)` with `q = p^e`.
pub fn prime_power(q: u128) -> (u128, u32) {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2");
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    assert_eq!(r, 1, "{q} is not a prime power");
    (p, e)
}

/// `|GL(n, q)|`.
pub fn gl_order(n: u32, q: u128) -> u128 {
    let qn = q.pow(n);
    (0..n).map(|i| qn - q.pow(i)).product()
}

/// `|PΓL(n+1, q)|`, the collineation group of `PG(n, q)`.
pub fn pgammal_order(n: u32, q: u128) -> u128 {
    gl_order(n + 1, q) / (q - 1) * prime_power(q).1 as u128
}

/// `|PGL(n+1, q)|`.
pub fn pgl_order(n: u32, q: u128) -> u128 {
    gl_order(n + 1, q) / (q - 1)
}

/// `|AΓL(n, q)|`.
pub fn agammal_order(n: u32, q: u128) -> u128 {
    q.pow(n) * gl_order(n, q) * prime_power(q).1 as u128
}

/// `|AGL(n, q)|`.
pub fn agl_order(n: u32, q: u128) -> u128 {
    q.pow(n) * gl_order(n, q)
}

/// `|PΓU(3, q)|`.
pub fn pgammau3_order(q: u128) -> u128 {
    q.pow(3) * (q.pow(3) + 1) * (q * q - 1) * 2 * prime_power(q).1 as u128
}

/// Ordered non-collinear triples of a linear space with `v` points and
/// constant line size `k`.
pub fn ordered_triangles(v: usize, k: usize) -> usize {
    v * (v - 1) * (v - k)
}

/// Points, line size and lines per point of the standard families.
pub fn projective_params(n: u32, q: usize) -> (usize, usize, usize) {
    let v = (0..=n).map(|i| q.pow(i)).sum::<usize>();
    let r = (0..n).map(|i| q.pow(i)).sum::<usize>();
    (v, q + 1, r)
}

pub fn affine_params(n: u32, q: usize) -> (usize, usize, usize) {
    let v = q.pow(n);
    (v, q, (v - 1) / (q - 1))
}

pub fn unital_params(q: usize) -> (usize, usize, usize) {
    (q * q * q + 1, q + 1, q * q)
}

pub fn complete_params(v: usize) -> (usize, usize, usize) {
    (v, 2, v - 1)
}
