//! Intrinsic distances on the discretized hypersurface.
//!
//! The graph nodes are lifted to Eⁿ⁺¹ and joined to their full 3ⁿ-1 neighbor
//! stencil with Euclidean chord weights, so shortest paths approximate the
//! Riemannian distance from above.  The grid-metric overshoot of the stencil
//! is measured on the flat fixture and reported as a calibration constant,
//! never subtracted silently.

use crate::error::{Error, Result};
use crate::grid::{dist, NodeIndex};
use crate::hypersurface::{DerivativeMode, GraphManifold};
use crate::quad::sphere_directions;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, tie-broken by node id for determinism
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The weighted neighbor graph over grid nodes lifted to the hypersurface,
/// restricted to |x| <= region_radius.
pub struct IntrinsicGraph<'a> {
    pub manifold: &'a GraphManifold,
    pub region_radius: f64,
    offsets: Vec<(NodeIndex, f64)>,
}

impl<'a> IntrinsicGraph<'a> {
    pub fn new(manifold: &'a GraphManifold, region_radius: f64) -> Self {
        let n = manifold.dimension();
        let s = manifold.domain.spacing();
        let mut offsets = Vec::new();
        let mut counter = vec![0i64; n];
        loop {
            let mut idx = [0i64; 4];
            let mut norm2 = 0.0;
            for a in 0..n {
                idx[a] = counter[a] - 1;
                norm2 += (idx[a] as f64) * (idx[a] as f64);
            }
            if norm2 > 0.0 {
                offsets.push((idx, norm2.sqrt() * s));
            }
            // odometer over {0,1,2}^n
            let mut a = 0;
            loop {
                counter[a] += 1;
                if counter[a] < 3 {
                    break;
                }
                counter[a] = 0;
                a += 1;
                if a == n {
                    return Self {
                        manifold,
                        region_radius,
                        offsets,
                    };
                }
            }
        }
    }

    pub fn in_region(&self, idx: &NodeIndex) -> bool {
        self.manifold.domain.in_box(idx)
            && self.manifold.domain.is_active(idx)
            && self.manifold.domain.radius(idx) <= self.region_radius
    }

    /// Multi-source shortest-path distances to every node of the region;
    /// unreachable nodes carry +inf.
    pub fn distances(&self, sources: &[NodeIndex]) -> Vec<f64> {
        self.distances_with_cutoff(sources, f64::INFINITY)
    }

    pub fn distances_with_cutoff(&self, sources: &[NodeIndex], cutoff: f64) -> Vec<f64> {
        let dom = &self.manifold.domain;
        let mut dist_map = vec![f64::INFINITY; dom.node_count()];
        let mut heap = BinaryHeap::new();
        for src in sources {
            if !self.in_region(src) {
                continue;
            }
            let lin = dom.linear(src);
            if dist_map[lin] > 0.0 {
                dist_map[lin] = 0.0;
                heap.push(HeapEntry {
                    dist: 0.0,
                    node: lin,
                });
            }
        }
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            if d > dist_map[node] {
                continue;
            }
            if d > cutoff {
                break;
            }
            let idx = dom.from_linear(node);
            let f_here = self.manifold.f[node];
            for (off, base) in &self.offsets {
                let mut nb = idx;
                let mut ok = true;
                for a in 0..dom.dimension() {
                    nb[a] += off[a];
                    if nb[a].abs() > dom.half_extent() {
                        ok = false;
                        break;
                    }
                }
                if !ok || !self.in_region(&nb) {
                    continue;
                }
                let nb_lin = dom.linear(&nb);
                let df = self.manifold.f[nb_lin] - f_here;
                let w = (base * base + df * df).sqrt();
                let nd = d + w;
                if nd < dist_map[nb_lin] {
                    dist_map[nb_lin] = nd;
                    heap.push(HeapEntry {
                        dist: nd,
                        node: nb_lin,
                    });
                }
            }
        }
        dist_map
    }

    /// Shortest-path distance between two nodes.
    pub fn distance(&self, p: &NodeIndex, q: &NodeIndex) -> Result<f64> {
        if !self.in_region(p) {
            return Err(Error::NodeOutsideDomain(*p));
        }
        if !self.in_region(q) {
            return Err(Error::NodeOutsideDomain(*q));
        }
        let d = self.distances(&[*p]);
        let v = d[self.manifold.domain.linear(q)];
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Disconnected(*p, *q))
        }
    }

    /// Nodes within one cell of the sphere |x| = r.
    pub fn sphere_band(&self, r: f64) -> Vec<NodeIndex> {
        let dom = &self.manifold.domain;
        let band = dom.spacing();
        let mut out = Vec::new();
        for lin in 0..dom.node_count() {
            let idx = dom.from_linear(lin);
            if !self.in_region(&idx) {
                continue;
            }
            if (dom.radius(&idx) - r).abs() <= band {
                out.push(idx);
            }
        }
        out
    }
}

/// Depth of Ω(r₀) below its outer boundary band Σ(r₀).
#[derive(Debug, Clone)]
pub struct DepthReport {
    pub depth: f64,
    pub deepest_node: NodeIndex,
    /// |x| of the deepest node; together with the hole radius this reports
    /// the collar excluded by the discretization.
    pub deepest_radius: f64,
    pub band_width: f64,
    pub source_count: usize,
}

/// Diameter of Ω(r) with the gradient-bound diameter estimate.
#[derive(Debug, Clone)]
pub struct DiameterReport {
    pub diameter: f64,
    pub bound: f64,
    pub bound_ok: bool,
    pub sources_used: usize,
}

/// Intrinsic distances between lifted angular samples of ∂B(r).
#[derive(Debug, Clone)]
pub struct BoundaryMetric {
    pub radius: f64,
    /// snapped base points in Eⁿ
    pub points: Vec<[f64; 4]>,
    pub nodes: Vec<NodeIndex>,
    pub matrix: Vec<Vec<f64>>,
    pub band_width: f64,
    pub max_snap: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub worst_pair: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct BallVolume {
    pub raw: f64,
    /// Volume divided by the flat-fixture calibration factor for the same
    /// grid and radius (reported alongside, never replacing the raw value).
    pub calibrated: f64,
    pub calibration: f64,
    pub escaped_grid: bool,
    pub node_count: usize,
}

impl GraphManifold {
    /// Multi-source distance from the boundary band Σ(r₀), maximized over
    /// the region Ω(r₀).  Paths may use the whole working grid.
    pub fn depth(&self, r0: f64) -> Result<DepthReport> {
        let ig = IntrinsicGraph::new(self, self.domain.r_max() * 2.0);
        let sources = ig.sphere_band(r0);
        if sources.is_empty() {
            return Err(Error::EmptySet("depth boundary band"));
        }
        let d = ig.distances(&sources);
        let mut depth = -1.0;
        let mut deepest = [0i64; 4];
        for lin in 0..self.domain.node_count() {
            let idx = self.domain.from_linear(lin);
            if !self.domain.is_active(&idx) || self.domain.radius(&idx) > r0 {
                continue;
            }
            if d[lin].is_finite() && d[lin] > depth {
                depth = d[lin];
                deepest = idx;
            }
        }
        if depth < 0.0 {
            return Err(Error::EmptySet("depth region"));
        }
        Ok(DepthReport {
            depth,
            deepest_node: deepest,
            deepest_radius: self.domain.radius(&deepest),
            band_width: self.domain.spacing(),
            source_count: sources.len(),
        })
    }

    /// Max pairwise intrinsic distance over Ω(r), from a stratified sample of
    /// sources (all nodes when `exact`).  Checks the diameter bound
    /// `2D + πr√(1+γ²)`.
    pub fn diameter(&self, r: f64, exact: bool) -> Result<DiameterReport> {
        let ig = IntrinsicGraph::new(self, r + self.domain.spacing());
        let mut region: Vec<NodeIndex> = Vec::new();
        for lin in 0..self.domain.node_count() {
            let idx = self.domain.from_linear(lin);
            if ig.in_region(&idx) && self.domain.radius(&idx) <= r {
                region.push(idx);
            }
        }
        if region.is_empty() {
            return Err(Error::EmptySet("diameter region"));
        }
        let sources: Vec<NodeIndex> = if exact {
            region.clone()
        } else {
            let band: Vec<NodeIndex> = ig
                .sphere_band(r)
                .into_iter()
                .filter(|idx| self.domain.radius(idx) <= r)
                .collect();
            let step = (band.len() / 48).max(1);
            let mut s: Vec<NodeIndex> = band.iter().step_by(step).copied().collect();
            // extremal heights catch deep wells
            let mut hi = region[0];
            let mut lo = region[0];
            for idx in &region {
                if self.height(idx) > self.height(&hi) {
                    hi = *idx;
                }
                if self.height(idx) < self.height(&lo) {
                    lo = *idx;
                }
            }
            s.push(hi);
            s.push(lo);
            s
        };
        let diameter = sources
            .par_iter()
            .map(|src| {
                let d = ig.distances(&[*src]);
                let mut worst: f64 = 0.0;
                for idx in &region {
                    let v = d[self.domain.linear(idx)];
                    if v.is_finite() {
                        worst = worst.max(v);
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        let g = self.class.gamma;
        let bound = 2.0 * self.class.depth_bound
            + std::f64::consts::PI * r * (1.0 + g * g).sqrt();
        Ok(DiameterReport {
            diameter,
            bound,
            bound_ok: diameter <= bound + 1e-9,
            sources_used: sources.len(),
        })
    }

    /// Pull the intrinsic metric of Σ(r) back to angular samples of ∂B(r):
    /// lift each sample to the nearest boundary-band node and fill the
    /// pairwise shortest-path matrix with paths inside Ω(r).
    pub fn boundary_pullback(&self, r: f64, angular_samples: usize) -> Result<BoundaryMetric> {
        let n = self.dimension();
        if r < self.class.r0 {
            return Err(Error::InvalidParameter(format!(
                "pullback radius {r} is below r0 = {}",
                self.class.r0
            )));
        }
        let band = self.domain.spacing();
        let ig = IntrinsicGraph::new(self, r + 2.0 * band);
        let dirs = sphere_directions(n, angular_samples);
        let mut nodes = Vec::with_capacity(dirs.len());
        let mut points = Vec::with_capacity(dirs.len());
        let mut max_snap: f64 = 0.0;
        for u in &dirs {
            let mut target = [0.0; 4];
            for a in 0..n {
                target[a] = r * u[a];
            }
            let idx = self.domain.nearest_node(&target);
            if !ig.in_region(&idx) {
                return Err(Error::NodeOutsideDomain(idx));
            }
            let x = self.domain.coord(&idx);
            max_snap = max_snap.max(dist(&x, &target, n));
            nodes.push(idx);
            points.push(x);
        }
        let rows: Vec<Vec<f64>> = nodes
            .par_iter()
            .map(|src| {
                let d = ig.distances(&[*src]);
                nodes
                    .iter()
                    .map(|q| d[self.domain.linear(q)])
                    .collect::<Vec<f64>>()
            })
            .collect();
        // symmetrize away heap-order rounding noise
        let m = nodes.len();
        let mut matrix = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                matrix[i][j] = 0.5 * (rows[i][j] + rows[j][i]);
            }
        }
        let mut ratio_min = f64::INFINITY;
        let mut ratio_max: f64 = 0.0;
        let mut worst = (0, 0);
        for i in 0..m {
            for j in (i + 1)..m {
                let base = dist(&points[i], &points[j], n);
                if base < 1e-12 {
                    continue;
                }
                let ratio = matrix[i][j] / base;
                if ratio > ratio_max {
                    ratio_max = ratio;
                    worst = (i, j);
                }
                ratio_min = ratio_min.min(ratio);
            }
        }
        Ok(BoundaryMetric {
            radius: r,
            points,
            nodes,
            matrix,
            band_width: band,
            max_snap,
            ratio_min,
            ratio_max,
            worst_pair: worst,
        })
    }

    /// True when every node within intrinsic distance R of `p` projects into
    /// B(r₀ + R').
    pub fn ball_inclusion_check(&self, p: &NodeIndex, big_r: f64, r_prime: f64) -> Result<bool> {
        if big_r >= r_prime {
            return Err(Error::InvalidParameter(format!(
                "ball inclusion needs R < R', got R = {big_r}, R' = {r_prime}"
            )));
        }
        let ig = IntrinsicGraph::new(self, self.domain.r_max() * 2.0);
        if !ig.in_region(p) {
            return Err(Error::NodeOutsideDomain(*p));
        }
        let d = ig.distances_with_cutoff(&[*p], big_r);
        let limit = self.class.r0 + r_prime;
        for lin in 0..self.domain.node_count() {
            if d[lin] <= big_r {
                let idx = self.domain.from_linear(lin);
                if self.domain.radius(&idx) > limit {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Induced volume of the intrinsic ball B_p(R), with the flat-grid
    /// calibration factor for the same spacing and radius.
    pub fn intrinsic_ball_volume(&self, p: &NodeIndex, big_r: f64) -> Result<BallVolume> {
        let raw = self.intrinsic_ball_volume_raw(p, big_r)?;
        let calibration = flat_ball_calibration(self.dimension(), self.domain.spacing(), big_r)?;
        Ok(BallVolume {
            raw: raw.0,
            calibrated: raw.0 / calibration,
            calibration,
            escaped_grid: raw.1,
            node_count: raw.2,
        })
    }

    fn intrinsic_ball_volume_raw(&self, p: &NodeIndex, big_r: f64) -> Result<(f64, bool, usize)> {
        let n = self.dimension();
        let s = self.domain.spacing();
        let ig = IntrinsicGraph::new(self, self.domain.r_max() * 2.0);
        if !ig.in_region(p) {
            return Err(Error::NodeOutsideDomain(*p));
        }
        let d = ig.distances_with_cutoff(&[*p], big_r);
        let mut vol = 0.0;
        let mut escaped = false;
        let mut count = 0usize;
        for lin in 0..self.domain.node_count() {
            if d[lin] > big_r {
                continue;
            }
            let idx = self.domain.from_linear(lin);
            count += 1;
            let integrand = match self.gradient_at(&self.domain.coord(&idx), DerivativeMode::Auto)
            {
                Ok(g) => {
                    let g2: f64 = g[..n].iter().map(|v| v * v).sum();
                    (1.0 + g2).sqrt()
                }
                Err(_) => 1.0,
            };
            vol += integrand * s.powi(n as i32);
            for a in 0..n {
                if idx[a].abs() == self.domain.half_extent() {
                    escaped = true;
                }
            }
        }
        Ok((vol, escaped, count))
    }
}

/// Discrete ball volume of the flat graph at the same spacing, relative to
/// the Euclidean ball: the grid-metric overshoot calibration.
pub fn flat_ball_calibration(n: usize, spacing: f64, big_r: f64) -> Result<f64> {
    use crate::grid::GraphDomain;
    use crate::hypersurface::ClassParams;
    use crate::profile::Profile;
    let domain = GraphDomain::new(n, big_r + 4.0 * spacing, spacing, None)?;
    let flat = GraphManifold::from_profile(domain, Profile::flat(0.0), ClassParams::default());
    let (raw, _, _) = flat.intrinsic_ball_volume_raw(&[0i64; 4], big_r)?;
    let exact = crate::quad::unit_ball_volume(n) * big_r.powi(n as i32);
    Ok(raw / exact)
}
