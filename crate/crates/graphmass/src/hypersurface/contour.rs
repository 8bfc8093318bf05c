//! Level-set extraction by marching simplices.
//!
//! Each grid cell is split into n! Kuhn simplices, the field is interpolated
//! linearly on every simplex, and the crossing polytope is decomposed into
//! (n-1)-simplices whose measures are summed.  The same decomposition is used
//! in dimensions 3 and 4.

use crate::grid::{norm, GraphDomain, NodeIndex};
use rayon::prelude::*;

/// One (n-1)-simplex of the extracted level set: `n` vertices in Euclidean
/// n-space.
#[derive(Debug, Clone, Copy)]
pub struct ContourElement {
    pub verts: [[f64; 4]; 4],
    pub nverts: usize,
}

impl ContourElement {
    pub fn centroid(&self, n: usize) -> [f64; 4] {
        let mut c = [0.0; 4];
        for v in &self.verts[..self.nverts] {
            for a in 0..n {
                c[a] += v[a];
            }
        }
        for a in 0..n {
            c[a] /= self.nverts as f64;
        }
        c
    }

    /// (n-1)-dimensional measure: triangle area for n = 3, tetrahedron volume
    /// for n = 4, via the Gram determinant.
    pub fn measure(&self, n: usize) -> f64 {
        let k = self.nverts - 1; // simplex dimension
        let mut edges = [[0.0; 4]; 3];
        for e in 0..k {
            for a in 0..n {
                edges[e][a] = self.verts[e + 1][a] - self.verts[0][a];
            }
        }
        let mut gram = [[0.0; 3]; 3];
        for i in 0..k {
            for j in 0..k {
                let mut s = 0.0;
                for a in 0..n {
                    s += edges[i][a] * edges[j][a];
                }
                gram[i][j] = s;
            }
        }
        let det = match k {
            2 => gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0],
            3 => {
                gram[0][0] * (gram[1][1] * gram[2][2] - gram[1][2] * gram[2][1])
                    - gram[0][1] * (gram[1][0] * gram[2][2] - gram[1][2] * gram[2][0])
                    + gram[0][2] * (gram[1][0] * gram[2][1] - gram[1][1] * gram[2][0])
            }
            _ => 0.0,
        };
        let factorial = [1.0, 1.0, 2.0, 6.0][k];
        det.max(0.0).sqrt() / factorial
    }

    /// Fraction of the element's measure lying inside the ball |x| <= radius,
    /// by recursive longest-edge bisection with a centroid test at the leaves.
    pub fn fraction_in_ball(&self, n: usize, radius: f64, depth: usize) -> f64 {
        let mut rmin = f64::INFINITY;
        let mut rmax: f64 = 0.0;
        for v in &self.verts[..self.nverts] {
            let r = norm(v, n);
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
        if rmax <= radius {
            return 1.0;
        }
        // Element diameter bounds the sag of a chord; fully-outside detection
        // keeps a small safety margin.
        let mut diam2: f64 = 0.0;
        for i in 0..self.nverts {
            for j in (i + 1)..self.nverts {
                let mut d2 = 0.0;
                for a in 0..n {
                    let d = self.verts[i][a] - self.verts[j][a];
                    d2 += d * d;
                }
                diam2 = diam2.max(d2);
            }
        }
        if rmin >= radius + diam2.sqrt() {
            return 0.0;
        }
        if depth == 0 {
            return if norm(&self.centroid(n), n) <= radius {
                1.0
            } else {
                0.0
            };
        }
        let (child_a, child_b) = self.bisect(n);
        let ma = child_a.measure(n);
        let mb = child_b.measure(n);
        let total = ma + mb;
        if total <= 0.0 {
            return 0.0;
        }
        (ma * child_a.fraction_in_ball(n, radius, depth - 1)
            + mb * child_b.fraction_in_ball(n, radius, depth - 1))
            / total
    }

    fn bisect(&self, n: usize) -> (ContourElement, ContourElement) {
        let mut best = (0usize, 1usize);
        let mut best_d2 = -1.0;
        for i in 0..self.nverts {
            for j in (i + 1)..self.nverts {
                let mut d2 = 0.0;
                for a in 0..n {
                    let d = self.verts[i][a] - self.verts[j][a];
                    d2 += d * d;
                }
                if d2 > best_d2 {
                    best_d2 = d2;
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        let mut mid = [0.0; 4];
        for a in 0..n {
            mid[a] = 0.5 * (self.verts[i][a] + self.verts[j][a]);
        }
        let mut left = *self;
        let mut right = *self;
        left.verts[j] = mid;
        right.verts[i] = mid;
        (left, right)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let v = rest.remove(k);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(k, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Extract the level set {field = level} over all grid cells whose corners
/// are active.  `values` holds the field in row-major node order.
pub fn marching_level_set_values(
    domain: &GraphDomain,
    values: &[f64],
    level: f64,
) -> Vec<ContourElement> {
    let n = domain.dimension();
    let perms = permutations(n);
    // Kuhn simplex corner masks, one set per permutation.
    let mask_sets: Vec<[usize; 5]> = perms
        .iter()
        .map(|perm| {
            let mut masks = [0usize; 5];
            for (k, &axis) in perm.iter().enumerate() {
                masks[k + 1] = masks[k] | (1 << axis);
            }
            masks
        })
        .collect();
    let m = domain.nodes_per_axis();
    // linear stride of +1 along each axis (last axis fastest)
    let mut strides = [0usize; 4];
    let mut s = 1usize;
    for a in (0..n).rev() {
        strides[a] = s;
        s *= m;
    }
    let corner_offsets: Vec<usize> = (0..(1usize << n))
        .map(|bits| {
            (0..n)
                .map(|a| if (bits >> a) & 1 == 1 { strides[a] } else { 0 })
                .sum()
        })
        .collect();
    let hole = domain.hole_radius();
    let spacing = domain.spacing();
    let cells: Vec<NodeIndex> = domain.iter_cells().collect();
    let chunks: Vec<Vec<ContourElement>> = cells
        .par_chunks(8192)
        .map(|cell_block| {
            let mut out = Vec::new();
            let mut corner_val = [0.0f64; 16];
            for cell in cell_block {
                let base_lin = domain.linear(cell);
                let mut any_pos = false;
                let mut any_neg = false;
                for (bits, off) in corner_offsets.iter().enumerate() {
                    let g = values[base_lin + off] - level;
                    corner_val[bits] = g;
                    if g > 0.0 {
                        any_pos = true;
                    } else {
                        any_neg = true;
                    }
                }
                if !any_pos || !any_neg {
                    continue;
                }
                if let Some(rho) = hole {
                    // reject cells touching the hole
                    let mut d2 = 0.0;
                    for a in 0..n {
                        let lo = cell[a] as f64 * spacing;
                        let hi = lo + spacing;
                        let c = if lo > 0.0 {
                            lo
                        } else if hi < 0.0 {
                            hi
                        } else {
                            0.0
                        };
                        d2 += c * c;
                    }
                    if d2.sqrt() < rho {
                        continue;
                    }
                }
                let base = domain.coord(cell);
                for masks in &mask_sets {
                    march_simplex(n, &masks[..=n], &corner_val, &base, spacing, &mut out);
                }
            }
            out
        })
        .collect();
    let total = chunks.iter().map(|v| v.len()).sum();
    let mut out = Vec::with_capacity(total);
    for v in chunks {
        out.extend(v);
    }
    out
}

/// Closure-driven variant for fields that are not stored as node arrays.
pub fn marching_level_set<F>(domain: &GraphDomain, field: F, level: f64) -> Vec<ContourElement>
where
    F: Fn(&NodeIndex) -> f64 + Sync,
{
    let values: Vec<f64> = (0..domain.node_count())
        .into_par_iter()
        .map(|lin| field(&domain.from_linear(lin)))
        .collect();
    marching_level_set_values(domain, &values, level)
}

fn corner_coord(base: &[f64; 4], s: f64, mask: usize, n: usize) -> [f64; 4] {
    let mut x = *base;
    for a in 0..n {
        if (mask >> a) & 1 == 1 {
            x[a] += s;
        }
    }
    x
}

fn march_simplex(
    n: usize,
    masks: &[usize],
    corner_val: &[f64; 16],
    base: &[f64; 4],
    s: f64,
    out: &mut Vec<ContourElement>,
) {
    let mut pos = [false; 5];
    let mut npos = 0;
    for (k, &m) in masks.iter().enumerate() {
        pos[k] = corner_val[m] > 0.0;
        if pos[k] {
            npos += 1;
        }
    }
    if npos == 0 || npos == n + 1 {
        return;
    }
    // Crossing points on edges between the positive and non-positive sides.
    let mut pside = [0usize; 5];
    let mut nside = [0usize; 5];
    let (mut np, mut nn) = (0, 0);
    for k in 0..=n {
        if pos[k] {
            pside[np] = k;
            np += 1;
        } else {
            nside[nn] = k;
            nn += 1;
        }
    }
    let cross = |i: usize, j: usize| -> [f64; 4] {
        let (gi, gj) = (corner_val[masks[i]], corner_val[masks[j]]);
        let t = gi / (gi - gj);
        let xi = corner_coord(base, s, masks[i], n);
        let xj = corner_coord(base, s, masks[j], n);
        let mut x = [0.0; 4];
        for a in 0..n {
            x[a] = xi[a] + t * (xj[a] - xi[a]);
        }
        x
    };
    // Orient so the smaller side comes first.
    let (small, small_len, large, _large_len) = if np <= nn {
        (pside, np, nside, nn)
    } else {
        (nside, nn, pside, np)
    };
    match (n, small_len) {
        (3, 1) => {
            // triangle
            let p: Vec<[f64; 4]> = (0..3).map(|j| cross(small[0], large[j])).collect();
            push_simplex(out, &[p[0], p[1], p[2]], 3);
        }
        (3, 2) => {
            // quad p00 p01 p11 p10 -> two triangles
            let p00 = cross(small[0], large[0]);
            let p01 = cross(small[0], large[1]);
            let p10 = cross(small[1], large[0]);
            let p11 = cross(small[1], large[1]);
            push_simplex(out, &[p00, p01, p11], 3);
            push_simplex(out, &[p00, p11, p10], 3);
        }
        (4, 1) => {
            // tetrahedron
            let p: Vec<[f64; 4]> = (0..4).map(|j| cross(small[0], large[j])).collect();
            push_simplex(out, &[p[0], p[1], p[2], p[3]], 4);
        }
        (4, 2) => {
            // triangular prism: bottom {a_j}, top {b_j}
            let a: Vec<[f64; 4]> = (0..3).map(|j| cross(small[0], large[j])).collect();
            let b: Vec<[f64; 4]> = (0..3).map(|j| cross(small[1], large[j])).collect();
            push_simplex(out, &[a[0], a[1], a[2], b[2]], 4);
            push_simplex(out, &[a[0], a[1], b[1], b[2]], 4);
            push_simplex(out, &[a[0], b[0], b[1], b[2]], 4);
        }
        _ => unreachable!("marching supports n = 3, 4"),
    }
}

fn push_simplex(out: &mut Vec<ContourElement>, pts: &[[f64; 4]], nverts: usize) {
    let mut verts = [[0.0; 4]; 4];
    verts[..nverts].copy_from_slice(&pts[..nverts]);
    out.push(ContourElement { verts, nverts });
}
