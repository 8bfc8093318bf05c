//! Discretized differential geometry of graphical hypersurfaces
//! `x ↦ (x, f(x)) ⊂ Eⁿ⁺¹`.

pub mod contour;
mod fd;
mod volume;

pub use contour::{marching_level_set, ContourElement};
pub use fd::{curvature_flux, level_mean_curvature, mass_integrand};

use crate::error::{Error, Result};
use crate::grid::{norm, GraphDomain, NodeIndex};
use crate::profile::Profile;
use crate::quad::unit_sphere_area;
use rayon::prelude::*;

pub use crate::profile::schwarzschild_profile;

/// Parameters of the uniformity class a graph claims membership in: the
/// separation radius r₀, the gradient bound γ outside r₀/2, the depth bound
/// D, the decay exponent α < 0, and the asymptotic height offset Λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassParams {
    pub r0: f64,
    pub gamma: f64,
    pub depth_bound: f64,
    pub alpha: f64,
    pub asymptotic_offset: f64,
}

impl Default for ClassParams {
    fn default() -> Self {
        Self {
            r0: 1.0,
            gamma: 1.0,
            depth_bound: 10.0,
            alpha: -1.0,
            asymptotic_offset: 0.0,
        }
    }
}

/// Which derivative oracle a quadrature should consult.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// Closed forms from the analytic profile when present, otherwise finite
    /// differences.
    Auto,
    /// Force finite differences on the sampled heights.
    FiniteDifference,
}

/// A sampled graph function together with optional analytic profile and the
/// class parameters it claims.
#[derive(Debug, Clone)]
pub struct GraphManifold {
    pub domain: GraphDomain,
    pub f: Vec<f64>,
    pub profile: Option<Profile>,
    pub class: ClassParams,
}

impl GraphManifold {
    /// Sample a profile onto the grid.
    pub fn from_profile(domain: GraphDomain, profile: Profile, class: ClassParams) -> Self {
        let n = domain.dimension();
        let count = domain.node_count();
        let f: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|lin| {
                let idx = domain.from_linear(lin);
                profile.value(&domain.coord(&idx), n)
            })
            .collect();
        Self {
            domain,
            f,
            profile: Some(profile),
            class,
        }
    }

    /// Wrap already-sampled heights (row-major, last axis fastest).
    pub fn from_heights(domain: GraphDomain, f: Vec<f64>, class: ClassParams) -> Result<Self> {
        if f.len() != domain.node_count() {
            return Err(Error::InvalidParameter(format!(
                "height array has {} entries, the grid has {} nodes",
                f.len(),
                domain.node_count()
            )));
        }
        Ok(Self {
            domain,
            f,
            profile: None,
            class,
        })
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn height(&self, idx: &NodeIndex) -> f64 {
        self.f[self.domain.linear(idx)]
    }

    /// Lift of a node to the hypersurface in Eⁿ⁺¹ (height in the last slot is
    /// kept separate).
    pub fn lift(&self, idx: &NodeIndex) -> ([f64; 4], f64) {
        (self.domain.coord(idx), self.height(idx))
    }

    /// Gradient and Hessian at a node by finite differences.
    pub fn differentials(&self, idx: &NodeIndex) -> Result<([f64; 4], [[f64; 4]; 4])> {
        Ok((self.fd_gradient(idx)?, self.fd_hessian(idx)?))
    }

    /// Height at an arbitrary point: analytic when a profile exists,
    /// multilinear interpolation of the samples otherwise.
    pub fn value_at(&self, x: &[f64; 4]) -> f64 {
        if let Some(p) = &self.profile {
            return p.value(x, self.dimension());
        }
        self.interp_value(x)
    }

    fn interp_value(&self, x: &[f64; 4]) -> f64 {
        let n = self.dimension();
        let s = self.domain.spacing();
        let half = self.domain.half_extent();
        let mut base = [0i64; 4];
        let mut t = [0.0f64; 4];
        for a in 0..n {
            let u = (x[a] / s).clamp(-(half as f64), half as f64 - 1e-12);
            let k = u.floor();
            base[a] = k as i64;
            t[a] = u - k;
        }
        let mut v = 0.0;
        for bits in 0..(1usize << n) {
            let mut idx = base;
            let mut w = 1.0;
            for a in 0..n {
                if (bits >> a) & 1 == 1 {
                    idx[a] += 1;
                    w *= t[a];
                } else {
                    w *= 1.0 - t[a];
                }
            }
            v += w * self.f[self.domain.linear(&idx)];
        }
        v
    }

    /// Gradient at an arbitrary point.  Finite-difference mode snaps to the
    /// nearest node with a usable stencil.
    pub fn gradient_at(&self, x: &[f64; 4], mode: DerivativeMode) -> Result<[f64; 4]> {
        match (&self.profile, mode) {
            (Some(p), DerivativeMode::Auto) => Ok(p.gradient(x, self.dimension())),
            _ => self.fd_gradient(&self.domain.nearest_node(x)),
        }
    }

    /// Hessian at an arbitrary point (same snapping rule as `gradient_at`).
    pub fn hessian_at(&self, x: &[f64; 4], mode: DerivativeMode) -> Result<[[f64; 4]; 4]> {
        match (&self.profile, mode) {
            (Some(p), DerivativeMode::Auto) => Ok(p.hessian(x, self.dimension())),
            _ => self.fd_hessian(&self.domain.nearest_node(x)),
        }
    }

    /// Scalar curvature on all nodes within |x| <= r_limit that have full
    /// nested stencils; returned in row-major node order.
    pub fn scalar_curvature_field(&self, r_limit: f64) -> Vec<(NodeIndex, f64)> {
        let count = self.domain.node_count();
        let chunk = 8192;
        let pieces: Vec<Vec<(NodeIndex, f64)>> = (0..count)
            .collect::<Vec<_>>()
            .par_chunks(chunk)
            .map(|lins| {
                let mut out = Vec::new();
                for &lin in lins {
                    let idx = self.domain.from_linear(lin);
                    if self.domain.radius(&idx) > r_limit {
                        continue;
                    }
                    if !self.domain.stencil_clear(&idx, 2) {
                        continue;
                    }
                    if let Ok(r) = self.scalar_curvature(&idx) {
                        out.push((idx, r));
                    }
                }
                out
            })
            .collect();
        pieces.into_iter().flatten().collect()
    }

    /// Min and max sampled height over active nodes.
    pub fn height_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for lin in 0..self.domain.node_count() {
            let idx = self.domain.from_linear(lin);
            if !self.domain.is_active(&idx) {
                continue;
            }
            let v = self.f[lin];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Max height over active nodes with |x| < r.
    pub fn max_height_within(&self, r: f64) -> f64 {
        let mut hi = f64::NEG_INFINITY;
        for lin in 0..self.domain.node_count() {
            let idx = self.domain.from_linear(lin);
            if !self.domain.is_active(&idx) || self.domain.radius(&idx) >= r {
                continue;
            }
            hi = hi.max(self.f[lin]);
        }
        hi
    }

    /// Max |Df| over active nodes with |x| >= radius (the gradient-bound
    /// check of the uniformity class).
    pub fn max_gradient_outside(&self, radius: f64) -> f64 {
        let count = self.domain.node_count();
        (0..count)
            .into_par_iter()
            .map(|lin| {
                let idx = self.domain.from_linear(lin);
                if self.domain.radius(&idx) < radius || !self.domain.is_active(&idx) {
                    return 0.0;
                }
                match self.gradient_at(&self.domain.coord(&idx), DerivativeMode::Auto) {
                    Ok(g) => norm(&g, self.dimension()),
                    Err(_) => 0.0,
                }
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Shift all heights (and the profile) by a constant.
    pub fn shifted_down(&self, dh: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.f {
            *v -= dh;
        }
        if let Some(p) = &mut out.profile {
            p.offset -= dh;
        }
        out.class.asymptotic_offset -= dh;
        out
    }
}

/// Flags attached to a level-set computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LevelSetFlags {
    /// The requested height misses the sampled range (empty level set).
    pub out_of_range: bool,
    /// min |Df| on the contour fell under 1e-6 · γ.
    pub near_critical: bool,
    /// The contour reaches within one cell of the grid box, so its area is
    /// truncated by the domain rather than the geometry.
    pub box_clipped: bool,
}

/// Per-height level-set data: areas and mean-curvature integrals.
#[derive(Debug, Clone)]
pub struct LevelSetProfile {
    pub height: f64,
    pub area: f64,
    pub clipped_area: Option<f64>,
    pub mean_curvature_integral: f64,
    /// ∫ |Df|²/(1+|Df|²) · H over the level set — the quasi-local boundary
    /// term of the mass identity.
    pub weighted_term: f64,
    /// smallest sampled mean curvature (mean-convexity diagnostic)
    pub min_mean_curvature: f64,
    pub min_gradient: f64,
    pub element_count: usize,
    pub curvature_skipped: usize,
    pub flags: LevelSetFlags,
}

impl GraphManifold {
    /// Extract the level set f⁻¹(h) and integrate area and mean curvature
    /// over it.  `clip_radius` additionally reports the area inside B(r).
    pub fn level_set(&self, h: f64, clip_radius: Option<f64>) -> LevelSetProfile {
        self.level_profile(h, clip_radius, true, DerivativeMode::Auto)
    }

    pub fn level_set_with_mode(
        &self,
        h: f64,
        clip_radius: Option<f64>,
        mode: DerivativeMode,
    ) -> LevelSetProfile {
        self.level_profile(h, clip_radius, true, mode)
    }

    fn level_profile(
        &self,
        h: f64,
        clip_radius: Option<f64>,
        with_curvature: bool,
        mode: DerivativeMode,
    ) -> LevelSetProfile {
        let n = self.dimension();
        let (lo, hi) = self.height_range();
        let mut flags = LevelSetFlags::default();
        if h < lo || h > hi {
            flags.out_of_range = true;
            return LevelSetProfile {
                height: h,
                area: 0.0,
                clipped_area: clip_radius.map(|_| 0.0),
                mean_curvature_integral: 0.0,
                weighted_term: 0.0,
                min_mean_curvature: f64::INFINITY,
                min_gradient: f64::INFINITY,
                element_count: 0,
                curvature_skipped: 0,
                flags,
            };
        }
        let elements = contour::marching_level_set_values(&self.domain, &self.f, h);
        let box_edge = self.domain.r_max() - self.domain.spacing();
        struct Acc {
            area: f64,
            clipped: f64,
            h_int: f64,
            w_int: f64,
            min_h: f64,
            min_grad: f64,
            skipped: usize,
            box_contact: bool,
        }
        let pieces: Vec<Acc> = elements
            .par_chunks(2048)
            .map(|els| {
                let mut acc = Acc {
                    area: 0.0,
                    clipped: 0.0,
                    h_int: 0.0,
                    w_int: 0.0,
                    min_h: f64::INFINITY,
                    min_grad: f64::INFINITY,
                    skipped: 0,
                    box_contact: false,
                };
                for el in els {
                    let measure = el.measure(n);
                    if measure <= 0.0 {
                        continue;
                    }
                    acc.area += measure;
                    for v in &el.verts[..el.nverts] {
                        for a in 0..n {
                            if v[a].abs() >= box_edge {
                                acc.box_contact = true;
                            }
                        }
                    }
                    if let Some(r) = clip_radius {
                        acc.clipped += measure * el.fraction_in_ball(n, r, 8);
                    }
                    let c = el.centroid(n);
                    if with_curvature {
                        match (self.gradient_at(&c, mode), self.hessian_at(&c, mode)) {
                            (Ok(g), Ok(hess)) => {
                                let gn = norm(&g, n);
                                acc.min_grad = acc.min_grad.min(gn);
                                let mc = level_mean_curvature(n, &g, &hess);
                                if mc.is_finite() {
                                    let w = gn * gn / (1.0 + gn * gn);
                                    acc.h_int += mc * measure;
                                    acc.w_int += w * mc * measure;
                                    acc.min_h = acc.min_h.min(mc);
                                } else {
                                    acc.skipped += 1;
                                }
                            }
                            _ => acc.skipped += 1,
                        }
                    } else if let Ok(g) = self.gradient_at(&c, mode) {
                        acc.min_grad = acc.min_grad.min(norm(&g, n));
                    }
                }
                acc
            })
            .collect();
        let mut area = 0.0;
        let mut clipped = 0.0;
        let mut h_int = 0.0;
        let mut w_int = 0.0;
        let mut min_h = f64::INFINITY;
        let mut min_grad = f64::INFINITY;
        let mut skipped = 0;
        for p in &pieces {
            area += p.area;
            clipped += p.clipped;
            h_int += p.h_int;
            w_int += p.w_int;
            min_h = min_h.min(p.min_h);
            min_grad = min_grad.min(p.min_grad);
            skipped += p.skipped;
            flags.box_clipped |= p.box_contact;
        }
        if min_grad < 1e-6 * self.class.gamma {
            flags.near_critical = true;
        }
        LevelSetProfile {
            height: h,
            area,
            clipped_area: clip_radius.map(|_| clipped),
            mean_curvature_integral: h_int,
            weighted_term: w_int,
            min_mean_curvature: min_h,
            min_gradient: min_grad,
            element_count: elements.len(),
            curvature_skipped: skipped,
            flags,
        }
    }

    /// Area of the level set, optionally clipped to B(clip_radius); skips
    /// the mean-curvature integrals.
    pub fn level_set_area(&self, h: f64, clip_radius: Option<f64>) -> (f64, LevelSetFlags) {
        let ls = self.level_profile(h, clip_radius, false, DerivativeMode::Auto);
        (ls.clipped_area.unwrap_or(ls.area), ls.flags)
    }

    /// Outward-minimizing area clamp: the clipped level-set area may not
    /// exceed the area of ∂B(r).
    pub fn outward_area_clamp_check(&self, h: f64, r: f64, tol: f64) -> (bool, f64, f64) {
        let n = self.dimension();
        let ls = self.level_profile(h, Some(r), false, DerivativeMode::Auto);
        let clipped = ls.clipped_area.unwrap_or(0.0);
        let bound = unit_sphere_area(n) * r.powi(n as i32 - 1);
        (clipped <= bound + tol, clipped, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{ProfileTerm, RadialKind};
    use std::f64::consts::PI;

    fn cone_manifold(spacing: f64) -> GraphManifold {
        let d = GraphDomain::new(3, 3.0, spacing, None).unwrap();
        GraphManifold::from_profile(
            d,
            Profile::radial(RadialKind::Cone { slope: 1.0 }),
            ClassParams::default(),
        )
    }

    #[test]
    fn cone_level_set_is_round_sphere() {
        // f = |x|, h = 2: sphere of radius 2, area 16π, H = 2/ρ = 1
        let m = cone_manifold(0.1);
        let ls = m.level_set(2.0, None);
        let area = ls.area;
        assert!((area - 16.0 * PI).abs() < 0.01 * 16.0 * PI, "area {area}");
        // mean curvature integral = (2/2) * 16π
        let want = 16.0 * PI;
        assert!(
            (ls.mean_curvature_integral - want).abs() < 0.02 * want,
            "∫H = {}",
            ls.mean_curvature_integral
        );
    }

    #[test]
    fn schwarzschild_level_is_round_sphere() {
        // m = 1, h = S_1(5): level set is |x| = 5, area 100π, H = 2/5
        let d = GraphDomain::new(3, 7.0, 0.1, Some(2.0)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, 1.0),
            ClassParams {
                r0: 4.0,
                gamma: 2.0,
                ..Default::default()
            },
        );
        let h = schwarzschild_profile(3, 1.0, 5.0).unwrap();
        let ls = g.level_set(h, None);
        let area_exact = 100.0 * PI;
        assert!(
            (ls.area - area_exact).abs() < 0.01 * area_exact,
            "area {}",
            ls.area
        );
        let h_avg = ls.mean_curvature_integral / ls.area;
        assert!((h_avg - 0.4).abs() < 0.01, "mean H {h_avg}");
        assert!(!ls.flags.near_critical);
    }

    #[test]
    fn level_above_range_is_empty_with_flag() {
        let m = cone_manifold(0.2);
        let (area, flags) = m.level_set_area(99.0, None);
        assert_eq!(area, 0.0);
        assert!(flags.out_of_range);
    }

    #[test]
    fn tilted_plane_levels_have_zero_mean_curvature() {
        let d = GraphDomain::new(3, 2.0, 0.1, None).unwrap();
        let m = GraphManifold::from_profile(
            d,
            Profile::flat(0.0).with_term(ProfileTerm::Linear {
                coeffs: [0.8, 0.1, -0.3, 0.0],
            }),
            ClassParams::default(),
        );
        let ls = m.level_set(0.2, None);
        assert!(ls.area > 0.0);
        assert!(
            ls.mean_curvature_integral.abs() < 1e-8 * ls.area,
            "∫H = {}",
            ls.mean_curvature_integral
        );
    }

    #[test]
    fn monotone_level_areas_for_schwarzschild() {
        let d = GraphDomain::new(3, 6.0, 0.1, Some(1.0)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, 0.5),
            ClassParams {
                r0: 2.0,
                gamma: 2.0,
                ..Default::default()
            },
        );
        let mut last = 0.0;
        for k in 1..=8 {
            let h = 0.4 * k as f64;
            let (area, flags) = g.level_set_area(h, None);
            if flags.out_of_range {
                break;
            }
            assert!(area >= last - 1e-9, "h = {h}: {area} < {last}");
            last = area;
        }
    }

    #[test]
    fn outward_clamp_for_round_levels() {
        let m = cone_manifold(0.1);
        let (ok, clipped, bound) = m.outward_area_clamp_check(2.0, 2.5, 1e-6);
        assert!(ok, "clipped {clipped} bound {bound}");
    }

    #[test]
    fn schwarzschild_levels_pass_clamp() {
        // every sampled level sphere sits inside B(r), so the clamp holds
        let d = GraphDomain::new(3, 6.0, 0.1, Some(1.0)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, 0.5),
            ClassParams {
                r0: 2.0,
                gamma: 2.0,
                ..Default::default()
            },
        );
        for k in 1..=6 {
            let h = 0.5 * k as f64;
            let (ok, clipped, bound) = g.outward_area_clamp_check(h, 5.0, 1e-9);
            assert!(ok, "h = {h}: clipped {clipped} bound {bound}");
        }
    }

    #[test]
    fn wiggly_level_set_violates_clamp() {
        // A strongly corrugated sphere has more area inside B(r) than ∂B(r).
        let d = GraphDomain::new(3, 3.2, 0.05, None).unwrap();
        let m = GraphManifold::from_profile(
            d,
            Profile::radial(RadialKind::Cone { slope: 1.0 }).with_term(ProfileTerm::SinProduct {
                amplitude: 0.8,
                frequency: 5.0,
            }),
            ClassParams::default(),
        );
        let (ok, clipped, bound) = m.outward_area_clamp_check(2.0, 2.85, 1e-6);
        assert!(!ok, "expected violation: clipped {clipped} bound {bound}");
    }
}
