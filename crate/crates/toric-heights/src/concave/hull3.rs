//! Quickhull in ℝ³ with exact orientation predicates, used to integrate
//! sampled concave functions of two variables.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use robust::{Coord3D, orient3d};

#[derive(Clone)]
struct Face {
    v: [usize; 3],
    /// `nb[i]` is the face across the edge `(v[i], v[i+1])`.
    nb: [usize; 3],
    outside: Vec<usize>,
    alive: bool,
    normal: [f64; 3],
    offset: f64,
}

fn c3(p: &[f64; 3]) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

/// `< 0` iff `d` lies strictly above the face `(a, b, c)` oriented
/// counter-clockwise when seen from above.
fn orient(pts: &[[f64; 3]], f: &[usize; 3], d: usize) -> f64 {
    orient3d(c3(&pts[f[0]]), c3(&pts[f[1]]), c3(&pts[f[2]]), c3(&pts[d]))
}

fn plane(pts: &[[f64; 3]], v: &[usize; 3]) -> ([f64; 3], f64) {
    let (a, b, c) = (pts[v[0]], pts[v[1]], pts[v[2]]);
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let w = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt().max(f64::MIN_POSITIVE);
    let n = [n[0] / len, n[1] / len, n[2] / len];
    (n, n[0] * a[0] + n[1] * a[1] + n[2] * a[2])
}

fn collinear(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> bool {
    use robust::{Coord, orient2d};
    let pr = |p: &[f64; 3], i: usize, j: usize| Coord { x: p[i], y: p[j] };
    [(0, 1), (1, 2), (0, 2)].iter().all(|&(i, j)| orient2d(pr(a, i, j), pr(b, i, j), pr(c, i, j)) == 0.0)
}

/// Volume of the convex hull of `pts` (zero for coplanar input).
pub(crate) fn hull_volume(pts: &[[f64; 3]]) -> f64 {
    let faces = hull_faces(pts);
    if faces.is_empty() {
        return 0.0;
    }
    // Signed tetrahedra against the centroid keep cancellation small.
    let mut g = [0.0; 3];
    for p in pts {
        for k in 0..3 {
            g[k] += p[k];
        }
    }
    for x in g.iter_mut() {
        *x /= pts.len() as f64;
    }
    let mut vol = 0.0;
    for f in faces {
        let a = pts[f[0]];
        let b = pts[f[1]];
        let c = pts[f[2]];
        let u = [a[0] - g[0], a[1] - g[1], a[2] - g[2]];
        let v = [b[0] - g[0], b[1] - g[1], b[2] - g[2]];
        let w = [c[0] - g[0], c[1] - g[1], c[2] - g[2]];
        vol += u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0]);
    }
    vol.abs() / 6.0
}

/// Triangles of the hull boundary, oriented counter-clockwise from outside.
pub(crate) fn hull_faces(pts: &[[f64; 3]]) -> Vec<[usize; 3]> {
    let n = pts.len();
    if n < 4 {
        return Vec::new();
    }
    // Initial tetrahedron.
    let i0 = (0..n).min_by(|&a, &b| pts[a].partial_cmp(&pts[b]).unwrap()).unwrap();
    let i1 = (0..n).max_by(|&a, &b| pts[a].partial_cmp(&pts[b]).unwrap()).unwrap();
    if i0 == i1 {
        return Vec::new();
    }
    let dist_line = |k: usize| {
        let (a, b, p) = (pts[i0], pts[i1], pts[k]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let w = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
        let c = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
        c[0] * c[0] + c[1] * c[1] + c[2] * c[2]
    };
    let mut i2 = usize::MAX;
    let mut best = -1.0;
    for k in 0..n {
        if collinear(&pts[i0], &pts[i1], &pts[k]) {
            continue;
        }
        let d = dist_line(k);
        if d > best {
            best = d;
            i2 = k;
        }
    }
    if i2 == usize::MAX {
        return Vec::new();
    }
    let base = [i0, i1, i2];
    let mut i3 = usize::MAX;
    let mut best = 0.0;
    for k in 0..n {
        let o = orient(pts, &base, k).abs();
        if o > best {
            best = o;
            i3 = k;
        }
    }
    if i3 == usize::MAX {
        return Vec::new();
    }
    let mut faces: Vec<Face> = Vec::new();
    let tet = if orient(pts, &base, i3) > 0.0 {
        // i3 is below (i0, i1, i2): that face already points away from it.
        [[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]]
    } else {
        [[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    };
    for v in tet {
        let (normal, offset) = plane(pts, &v);
        faces.push(Face { v, nb: [usize::MAX; 3], outside: Vec::new(), alive: true, normal, offset });
    }
    link_all(&mut faces);
    let used = [i0, i1, i2, i3];
    for k in 0..n {
        if used.contains(&k) {
            continue;
        }
        for f in faces.iter_mut() {
            if orient(pts, &f.v, k) < 0.0 {
                f.outside.push(k);
                break;
            }
        }
    }
    let mut stack: Vec<usize> = (0..4).filter(|&i| !faces[i].outside.is_empty()).collect();
    let mut visible_mark: Vec<u32> = alloc::vec![0; faces.len()];
    let mut stamp = 0u32;
    while let Some(fi) = stack.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let f = &faces[fi];
        let apex = *f
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                let da = dotp(&f.normal, &pts[a]) - f.offset;
                let db = dotp(&f.normal, &pts[b]) - f.offset;
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        // Visible region by flood fill.
        stamp += 1;
        visible_mark.resize(faces.len(), 0);
        let mut visible = alloc::vec![fi];
        visible_mark[fi] = stamp;
        let mut q = 0;
        while q < visible.len() {
            let cur = visible[q];
            q += 1;
            for e in 0..3 {
                let nb = faces[cur].nb[e];
                if visible_mark[nb] != stamp && orient(pts, &faces[nb].v, apex) < 0.0 {
                    visible_mark[nb] = stamp;
                    visible.push(nb);
                }
            }
        }
        // Horizon edges, oriented as in the visible faces.
        let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
        for &cur in &visible {
            for e in 0..3 {
                let nb = faces[cur].nb[e];
                if visible_mark[nb] != stamp {
                    horizon.push((faces[cur].v[e], faces[cur].v[(e + 1) % 3], nb));
                }
            }
        }
        let mut orphans: Vec<usize> = Vec::new();
        for &cur in &visible {
            faces[cur].alive = false;
            orphans.append(&mut faces[cur].outside);
        }
        let first_new = faces.len();
        for &(a, b, across) in &horizon {
            let v = [a, b, apex];
            let (normal, offset) = plane(pts, &v);
            let id = faces.len();
            faces.push(Face { v, nb: [across, usize::MAX, usize::MAX], outside: Vec::new(), alive: true, normal, offset });
            let back = &mut faces[across];
            for e in 0..3 {
                if back.v[e] == b && back.v[(e + 1) % 3] == a {
                    back.nb[e] = id;
                }
            }
        }
        // Link new faces around the apex: edge (b, apex) of the face on
        // (a, b) meets edge (apex, b) of the face whose horizon edge starts at b.
        let new_ids: Vec<usize> = (first_new..faces.len()).collect();
        for &id in &new_ids {
            let b = faces[id].v[1];
            let a = faces[id].v[0];
            let next = new_ids.iter().copied().find(|&o| faces[o].v[0] == b).expect("closed horizon");
            let prev = new_ids.iter().copied().find(|&o| faces[o].v[1] == a).expect("closed horizon");
            faces[id].nb[1] = next;
            faces[id].nb[2] = prev;
        }
        for k in orphans {
            if k == apex {
                continue;
            }
            for &id in &new_ids {
                if orient(pts, &faces[id].v, k) < 0.0 {
                    faces[id].outside.push(k);
                    break;
                }
            }
        }
        for &id in &new_ids {
            if !faces[id].outside.is_empty() {
                stack.push(id);
            }
        }
    }
    faces.into_iter().filter(|f| f.alive).map(|f| f.v).collect()
}

fn dotp(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn link_all(faces: &mut [Face]) {
    let m = faces.len();
    for i in 0..m {
        for e in 0..3 {
            let (a, b) = (faces[i].v[e], faces[i].v[(e + 1) % 3]);
            for j in 0..m {
                if j == i {
                    continue;
                }
                for g in 0..3 {
                    if faces[j].v[g] == b && faces[j].v[(g + 1) % 3] == a {
                        faces[i].nb[e] = j;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_with_interior_and_face_points() {
        let mut pts = Vec::new();
        for i in 0..=4 {
            for j in 0..=4 {
                for k in 0..=4 {
                    pts.push([i as f64, j as f64, k as f64]);
                }
            }
        }
        assert!((hull_volume(&pts) - 64.0).abs() < 1e-9);
    }

    #[test]
    fn paraboloid_cap() {
        // Graph of a concave function over a grid, closed by a base.
        let r = 20;
        let mut pts = Vec::new();
        for i in 0..=r {
            for j in 0..=r {
                let (x, y) = (i as f64 / r as f64, j as f64 / r as f64);
                pts.push([x, y, 1.0 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5)]);
            }
        }
        for c in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]] {
            pts.push([c[0], c[1], 0.0]);
        }
        let v = hull_volume(&pts);
        // Exact integral is 1 − 1/6; the piecewise-linear hull lies below.
        assert!(v < 5.0 / 6.0 && v > 5.0 / 6.0 - 2e-3, "{v}");
    }

    #[test]
    fn coplanar_input_has_no_volume() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert_eq!(hull_volume(&pts), 0.0);
    }
}
