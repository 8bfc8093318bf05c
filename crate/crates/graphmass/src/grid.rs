//! Regular grid domains in Euclidean n-space (n = 3 or 4) with an optional
//! spherical hole around the origin.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;

/// Multi-index of a grid node; unused trailing components are zero.
pub type NodeIndex = [i64; 4];

/// The sampled domain of a graph function: the lattice of spacing `spacing`
/// inside the box `[-r_max, r_max]^n`, minus an optional open ball (the hole
/// `U`) around the origin.
///
/// Nodes are addressed by multi-indices in `[-half, half]^n`; the coordinate
/// of index `k` along an axis is `k * spacing`, so the origin is always a
/// node and the grid is symmetric under reflections.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDomain {
    n: usize,
    half: i64,
    spacing: f64,
    hole_radius: Option<f64>,
}

impl GraphDomain {
    /// Build a domain covering at least radius `r_max`.
    pub fn new(n: usize, r_max: f64, spacing: f64, hole_radius: Option<f64>) -> Result<Self> {
        if !(3..=MAX_DIM).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive, got {spacing}"
            )));
        }
        if !(r_max > spacing) {
            return Err(Error::InvalidParameter(format!(
                "outer radius {r_max} must exceed the grid spacing {spacing}"
            )));
        }
        if let Some(rho) = hole_radius {
            if !(rho > 0.0) || rho >= r_max {
                return Err(Error::InvalidParameter(format!(
                    "hole radius {rho} must lie in (0, r_max)"
                )));
            }
        }
        let half = (r_max / spacing).ceil() as i64;
        Ok(Self {
            n,
            half,
            spacing,
            hole_radius,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_extent(&self) -> i64 {
        self.half
    }

    /// Covered box radius (a node sits exactly at ±r_max on each axis).
    pub fn r_max(&self) -> f64 {
        self.half as f64 * self.spacing
    }

    pub fn hole_radius(&self) -> Option<f64> {
        self.hole_radius
    }

    pub fn nodes_per_axis(&self) -> usize {
        (2 * self.half + 1) as usize
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_axis().pow(self.n as u32)
    }

    pub fn in_box(&self, idx: &NodeIndex) -> bool {
        (0..self.n).all(|a| idx[a].abs() <= self.half)
    }

    /// Euclidean coordinates of a node.
    pub fn coord(&self, idx: &NodeIndex) -> [f64; 4] {
        let mut x = [0.0; 4];
        for a in 0..self.n {
            x[a] = idx[a] as f64 * self.spacing;
        }
        x
    }

    pub fn radius(&self, idx: &NodeIndex) -> f64 {
        let x = self.coord(idx);
        norm(&x, self.n)
    }

    /// A node is active when it lies outside the hole (boundary included).
    pub fn is_active(&self, idx: &NodeIndex) -> bool {
        match self.hole_radius {
            None => true,
            Some(rho) => self.radius(idx) >= rho,
        }
    }

    /// Linear storage offset, row-major with the last axis fastest.
    pub fn linear(&self, idx: &NodeIndex) -> usize {
        let m = self.nodes_per_axis();
        let mut lin = 0usize;
        for a in 0..self.n {
            lin = lin * m + (idx[a] + self.half) as usize;
        }
        lin
    }

    pub fn from_linear(&self, mut lin: usize) -> NodeIndex {
        let m = self.nodes_per_axis();
        let mut idx = [0i64; 4];
        for a in (0..self.n).rev() {
            idx[a] = (lin % m) as i64 - self.half;
            lin /= m;
        }
        idx
    }

    /// Nearest node to an arbitrary point (componentwise rounding, clamped to
    /// the box).
    pub fn nearest_node(&self, x: &[f64; 4]) -> NodeIndex {
        let mut idx = [0i64; 4];
        for a in 0..self.n {
            let k = (x[a] / self.spacing).round() as i64;
            idx[a] = k.clamp(-self.half, self.half);
        }
        idx
    }

    /// True when every node within Chebyshev distance `reach` of `idx` is in
    /// the box and outside the hole, so centered stencils of that reach are
    /// usable.
    pub fn stencil_clear(&self, idx: &NodeIndex, reach: i64) -> bool {
        for a in 0..self.n {
            if idx[a].abs() + reach > self.half {
                return false;
            }
        }
        match self.hole_radius {
            None => true,
            Some(rho) => {
                // Closest approach of the stencil cube to the origin.
                let x = self.coord(idx);
                let mut d2 = 0.0;
                for a in 0..self.n {
                    let lo = x[a] - reach as f64 * self.spacing;
                    let hi = x[a] + reach as f64 * self.spacing;
                    let c = if lo > 0.0 {
                        lo
                    } else if hi < 0.0 {
                        hi
                    } else {
                        0.0
                    };
                    d2 += c * c;
                }
                d2.sqrt() >= rho
            }
        }
    }

    /// Iterate all node indices in row-major order.
    pub fn iter_nodes(&self) -> impl Iterator<Item = NodeIndex> + '_ {
        (0..self.node_count()).map(move |lin| self.from_linear(lin))
    }

    /// Iterate the low corners of all grid cells (cube cells with side
    /// `spacing`): indices in `[-half, half-1]^n`.
    pub fn iter_cells(&self) -> impl Iterator<Item = NodeIndex> + '_ {
        let m = self.nodes_per_axis() - 1;
        let total = m.pow(self.n as u32);
        (0..total).map(move |mut lin| {
            let mut idx = [0i64; 4];
            for a in (0..self.n).rev() {
                idx[a] = (lin % m) as i64 - self.half;
                lin /= m;
            }
            idx
        })
    }

    pub fn cell_count(&self) -> usize {
        (self.nodes_per_axis() - 1).pow(self.n as u32)
    }
}

pub fn norm(x: &[f64; 4], n: usize) -> f64 {
    x[..n].iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64; 4], b: &[f64; 4], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        let d = a[i] - b[i];
        s += d * d;
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_roundtrip() {
        let d = GraphDomain::new(3, 2.0, 0.5, None).unwrap();
        for lin in 0..d.node_count() {
            let idx = d.from_linear(lin);
            assert_eq!(d.linear(&idx), lin);
            assert!(d.in_box(&idx));
        }
    }

    #[test]
    fn hole_deactivates_inner_nodes() {
        let d = GraphDomain::new(3, 2.0, 0.25, Some(1.0)).unwrap();
        assert!(!d.is_active(&[0, 0, 0, 0]));
        assert!(d.is_active(&[4, 0, 0, 0])); // |x| = 1.0, boundary counts
        assert!(d.is_active(&[8, 0, 0, 0]));
    }

    #[test]
    fn stencil_clearance_near_hole_and_box() {
        let d = GraphDomain::new(3, 3.0, 0.25, Some(1.0)).unwrap();
        assert!(!d.stencil_clear(&[5, 0, 0, 0], 2)); // reaches into the hole
        assert!(d.stencil_clear(&[7, 0, 0, 0], 2));
        assert!(!d.stencil_clear(&[11, 0, 0, 0], 2)); // box edge
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GraphDomain::new(5, 2.0, 0.5, None).is_err());
        assert!(GraphDomain::new(3, 2.0, -0.5, None).is_err());
        assert!(GraphDomain::new(3, 1.0, 0.5, Some(1.5)).is_err());
    }
}
