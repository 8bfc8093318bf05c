//! Centered and one-sided finite-difference stencils on the grid.
//!
//! All stencils are exact on quadratic polynomials; nodes adjacent to the box
//! boundary fall back to one-sided forms, nodes adjacent to the hole refuse
//! with an error rather than reach across it.

use crate::error::{Error, Result};
use crate::grid::NodeIndex;
use crate::hypersurface::GraphManifold;

impl GraphManifold {
    fn sample(&self, idx: &NodeIndex) -> Option<f64> {
        if self.domain.in_box(idx) && self.domain.is_active(idx) {
            Some(self.f[self.domain.linear(idx)])
        } else {
            None
        }
    }

    fn shifted(&self, idx: &NodeIndex, axis: usize, by: i64) -> NodeIndex {
        let mut j = *idx;
        j[axis] += by;
        j
    }

    /// First derivative along one axis, second order.
    fn fd_d1(&self, idx: &NodeIndex, axis: usize) -> Result<f64> {
        let s = self.domain.spacing();
        let fp = self.sample(&self.shifted(idx, axis, 1));
        let fm = self.sample(&self.shifted(idx, axis, -1));
        match (fm, fp) {
            (Some(a), Some(b)) => Ok((b - a) / (2.0 * s)),
            (None, Some(f1)) => {
                let f0 = self.sample(idx).ok_or(Error::NodeOutsideDomain(*idx))?;
                let f2 = self
                    .sample(&self.shifted(idx, axis, 2))
                    .ok_or(Error::InsufficientStencil(*idx, 1))?;
                Ok((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * s))
            }
            (Some(f1), None) => {
                let f0 = self.sample(idx).ok_or(Error::NodeOutsideDomain(*idx))?;
                let f2 = self
                    .sample(&self.shifted(idx, axis, -2))
                    .ok_or(Error::InsufficientStencil(*idx, 1))?;
                Ok((3.0 * f0 - 4.0 * f1 + f2) / (2.0 * s))
            }
            (None, None) => Err(Error::InsufficientStencil(*idx, 1)),
        }
    }

    /// Pure second derivative along one axis; exact on quadratics in both the
    /// centered and shifted forms.
    fn fd_d2(&self, idx: &NodeIndex, axis: usize) -> Result<f64> {
        let s2 = self.domain.spacing() * self.domain.spacing();
        let f0 = self.sample(idx).ok_or(Error::NodeOutsideDomain(*idx))?;
        let fp = self.sample(&self.shifted(idx, axis, 1));
        let fm = self.sample(&self.shifted(idx, axis, -1));
        match (fm, fp) {
            (Some(a), Some(b)) => Ok((a - 2.0 * f0 + b) / s2),
            (None, Some(f1)) => {
                let f2 = self
                    .sample(&self.shifted(idx, axis, 2))
                    .ok_or(Error::InsufficientStencil(*idx, 1))?;
                Ok((f0 - 2.0 * f1 + f2) / s2)
            }
            (Some(f1), None) => {
                let f2 = self
                    .sample(&self.shifted(idx, axis, -2))
                    .ok_or(Error::InsufficientStencil(*idx, 1))?;
                Ok((f0 - 2.0 * f1 + f2) / s2)
            }
            (None, None) => Err(Error::InsufficientStencil(*idx, 1)),
        }
    }

    /// Mixed second derivative by the centered cross; if a corner is missing
    /// the whole cross shifts inward, which keeps exactness on quadratics.
    fn fd_mixed(&self, idx: &NodeIndex, a: usize, b: usize) -> Result<f64> {
        let s2 = self.domain.spacing() * self.domain.spacing();
        for (da, db) in [
            (0i64, 0i64),
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ] {
            let mut c = *idx;
            c[a] += da;
            c[b] += db;
            let mut pp = c;
            pp[a] += 1;
            pp[b] += 1;
            let mut pm = c;
            pm[a] += 1;
            pm[b] -= 1;
            let mut mp = c;
            mp[a] -= 1;
            mp[b] += 1;
            let mut mm = c;
            mm[a] -= 1;
            mm[b] -= 1;
            if let (Some(vpp), Some(vpm), Some(vmp), Some(vmm)) = (
                self.sample(&pp),
                self.sample(&pm),
                self.sample(&mp),
                self.sample(&mm),
            ) {
                return Ok((vpp - vpm - vmp + vmm) / (4.0 * s2));
            }
        }
        Err(Error::InsufficientStencil(*idx, 1))
    }

    /// Finite-difference gradient at a node.
    pub fn fd_gradient(&self, idx: &NodeIndex) -> Result<[f64; 4]> {
        if self.sample(idx).is_none() {
            return Err(Error::NodeOutsideDomain(*idx));
        }
        let n = self.domain.dimension();
        let mut g = [0.0; 4];
        for a in 0..n {
            g[a] = self.fd_d1(idx, a)?;
        }
        Ok(g)
    }

    /// Finite-difference Hessian at a node.
    pub fn fd_hessian(&self, idx: &NodeIndex) -> Result<[[f64; 4]; 4]> {
        if self.sample(idx).is_none() {
            return Err(Error::NodeOutsideDomain(*idx));
        }
        let n = self.domain.dimension();
        let mut h = [[0.0; 4]; 4];
        for a in 0..n {
            h[a][a] = self.fd_d2(idx, a)?;
            for b in (a + 1)..n {
                let m = self.fd_mixed(idx, a, b)?;
                h[a][b] = m;
                h[b][a] = m;
            }
        }
        Ok(h)
    }

    /// The vector field whose divergence is the scalar curvature of the
    /// graph: component j is `Σ_i (f_ii f_j - f_ij f_i) / (1 + |Df|²)`.
    pub(crate) fn curvature_flux_fd(&self, idx: &NodeIndex) -> Result<[f64; 4]> {
        let n = self.domain.dimension();
        let g = self.fd_gradient(idx)?;
        let h = self.fd_hessian(idx)?;
        Ok(curvature_flux(n, &g, &h))
    }

    /// Scalar curvature of the graph at a node: the outer divergence is taken
    /// by centered differences of the flux field, so the node needs two cells
    /// of clearance in every direction.
    pub fn scalar_curvature(&self, idx: &NodeIndex) -> Result<f64> {
        if !self.domain.in_box(idx) || !self.domain.is_active(idx) {
            return Err(Error::NodeOutsideDomain(*idx));
        }
        if !self.domain.stencil_clear(idx, 2) {
            return Err(Error::InsufficientStencil(*idx, 2));
        }
        let n = self.domain.dimension();
        let s = self.domain.spacing();
        let mut r = 0.0;
        for j in 0..n {
            let fp = self.curvature_flux_fd(&self.shifted(idx, j, 1))?;
            let fm = self.curvature_flux_fd(&self.shifted(idx, j, -1))?;
            r += (fp[j] - fm[j]) / (2.0 * s);
        }
        Ok(r)
    }
}

/// `Σ_i (f_ii f_j - f_ij f_i) / (1 + |Df|²)` from a gradient and Hessian.
pub fn curvature_flux(n: usize, g: &[f64; 4], h: &[[f64; 4]; 4]) -> [f64; 4] {
    let mut trace = 0.0;
    let mut g2 = 0.0;
    for i in 0..n {
        trace += h[i][i];
        g2 += g[i] * g[i];
    }
    let denom = 1.0 + g2;
    let mut out = [0.0; 4];
    for j in 0..n {
        let mut hg = 0.0;
        for i in 0..n {
            hg += h[i][j] * g[i];
        }
        out[j] = (trace * g[j] - hg) / denom;
    }
    out
}

/// ADM mass surface integrand at a point of the sphere |x| = r: the radial
/// component of the curvature flux field.
pub fn mass_integrand(n: usize, x: &[f64; 4], g: &[f64; 4], h: &[[f64; 4]; 4]) -> f64 {
    let flux = curvature_flux(n, g, h);
    let r = crate::grid::norm(x, n);
    let mut v = 0.0;
    for j in 0..n {
        v += flux[j] * x[j] / r;
    }
    v
}

/// Mean curvature of the level set through a point, with respect to the
/// normal `Df/|Df|`: `div(Df/|Df|) = (Δf |Df|² - Df·D²f·Df) / |Df|³`.
/// Round level spheres of an outward-increasing radial graph get +(n-1)/ρ.
pub fn level_mean_curvature(n: usize, g: &[f64; 4], h: &[[f64; 4]; 4]) -> f64 {
    let mut g2 = 0.0;
    let mut trace = 0.0;
    for i in 0..n {
        g2 += g[i] * g[i];
        trace += h[i][i];
    }
    let gn = g2.sqrt();
    if gn == 0.0 {
        return f64::NAN;
    }
    let mut ghg = 0.0;
    for i in 0..n {
        for j in 0..n {
            ghg += g[i] * h[i][j] * g[j];
        }
    }
    (trace * g2 - ghg) / (gn * g2)
}
