//! ADM mass of graphs and the quantities driven by it: the mass identity,
//! the normalization height h₀, the graphical Penrose bound, slab and volume
//! checks.

use crate::error::{Error, Result};
use crate::grid::{norm, GraphDomain};
use crate::hypersurface::{mass_integrand, DerivativeMode, GraphManifold};
use crate::quad::{sphere_quadrature, unit_sphere_area};
use rayon::prelude::*;

/// Boundary-integral mass values per radius plus the extrapolated limit.
#[derive(Debug, Clone)]
pub struct MassEstimate {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub extrapolated: f64,
    /// Decay exponent measured from the sequence when the radii are
    /// geometric; never assumed.
    pub fit_exponent: Option<f64>,
    pub residual: f64,
}

/// The two sides of the mass identity
/// `2(n-1) ω_{n-1} m = ∫_{Rⁿ∖Ω_h} R dx + ∫_{Σ_h} |Df|²/(1+|Df|²) H dH^{n-1}`.
#[derive(Debug, Clone)]
pub struct LamIdentityReport {
    pub height: f64,
    pub mass: f64,
    pub lhs: f64,
    pub bulk: f64,
    /// Decay-assumption bound on the part of the bulk integral beyond the
    /// grid; reported, never silently dropped.
    pub bulk_tail_estimate: f64,
    pub boundary: f64,
    pub residual: f64,
    /// Nodes of the bulk region where the curvature stencil was unavailable
    /// (hole collar and outermost shells).
    pub skipped_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H0Flag {
    Converged,
    /// No sampled regular level passed the area test; the bottom of the
    /// sampled range is returned.
    BottomOfRange,
    /// Every sampled level passed (the threshold was never crossed).
    TopOfRange,
    /// The sampled height range is degenerate (e.g. a flat graph).
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct H0Report {
    pub h0: f64,
    pub flag: H0Flag,
    pub threshold_area: f64,
}

/// Penrose-bound margin `ω_{n-1} (2m)^{(n-1)/(n-2)} - Vol(∂M)`.
#[derive(Debug, Clone)]
pub struct PenroseReport {
    pub threshold: f64,
    pub boundary_area: f64,
    pub margin: f64,
}

impl GraphManifold {
    /// Surface quadrature of the mass integrand over |x| = r for each radius,
    /// followed by extrapolation of the limit.  Radii must be strictly
    /// increasing and stay a stencil margin inside the grid.
    pub fn adm_mass(&self, radii: &[f64], mode: DerivativeMode) -> Result<MassEstimate> {
        let n = self.dimension();
        if radii.len() < 2 {
            return Err(Error::InvalidParameter(
                "mass extrapolation needs at least 2 radii".into(),
            ));
        }
        let margin = 2.0 * self.domain.spacing();
        for w in radii.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidParameter(
                    "mass radii must be strictly increasing".into(),
                ));
            }
        }
        if radii.last().unwrap() + margin > self.domain.r_max() {
            return Err(Error::InvalidParameter(format!(
                "largest mass radius {} is too close to the grid extent {}",
                radii.last().unwrap(),
                self.domain.r_max()
            )));
        }
        if let Some(hole) = self.domain.hole_radius() {
            if radii[0] <= hole + margin {
                return Err(Error::InvalidParameter(format!(
                    "smallest mass radius {} does not clear the hole {hole}",
                    radii[0]
                )));
            }
        }
        let order = if n == 3 { 24 } else { 12 };
        let rule = sphere_quadrature(n, order);
        let prefactor = 1.0 / (2.0 * (n as f64 - 1.0) * unit_sphere_area(n));
        let values: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let contributions: Vec<f64> = rule
                    .par_iter()
                    .map(|pt| {
                        let mut x = [0.0; 4];
                        for a in 0..n {
                            x[a] = r * pt.dir[a];
                        }
                        let g = self.gradient_at(&x, mode)?;
                        let h = self.hessian_at(&x, mode)?;
                        Ok(pt.weight * mass_integrand(n, &x, &g, &h))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let sum: f64 = contributions.iter().sum();
                Ok(prefactor * r.powi(n as i32 - 1) * sum)
            })
            .collect::<Result<Vec<f64>>>()?;
        let (extrapolated, fit_exponent, residual) = extrapolate_mass(radii, &values);
        Ok(MassEstimate {
            radii: radii.to_vec(),
            values,
            extrapolated,
            fit_exponent,
            residual,
        })
    }

    /// Evaluate the mass identity at a regular height `h`, given the mass.
    ///
    /// The bulk term integrates the finite-difference scalar curvature over
    /// {f >= h} minus the hole; cells crossing Σ_h are weighted by a linear
    /// interface fraction.
    pub fn lam_identity(
        &self,
        h: f64,
        mass: f64,
        mode: DerivativeMode,
    ) -> Result<LamIdentityReport> {
        let n = self.dimension();
        let s = self.domain.spacing();
        let lhs = 2.0 * (n as f64 - 1.0) * unit_sphere_area(n) * mass;

        let count = self.domain.node_count();
        let r_eff = self.domain.r_max() - 2.0 * s;
        struct Acc {
            bulk: f64,
            shell_abs_max: f64,
            skipped: usize,
        }
        let pieces: Vec<Acc> = (0..count)
            .collect::<Vec<_>>()
            .par_chunks(8192)
            .map(|lins| {
                let mut acc = Acc {
                    bulk: 0.0,
                    shell_abs_max: 0.0,
                    skipped: 0,
                };
                for &lin in lins {
                    let idx = self.domain.from_linear(lin);
                    if !self.domain.is_active(&idx) {
                        continue;
                    }
                    let f = self.f[lin];
                    // interface weight: fraction of the node cell above h
                    let grad_scale = match self.gradient_at(&self.domain.coord(&idx), mode) {
                        Ok(g) => norm(&g, n).max(1e-14),
                        Err(_) => 1e-14,
                    };
                    let t = (f - h) / (s * grad_scale) + 0.5;
                    let w = t.clamp(0.0, 1.0);
                    if w == 0.0 {
                        continue;
                    }
                    let r = self.domain.radius(&idx);
                    match self.scalar_curvature(&idx) {
                        Ok(rc) => {
                            acc.bulk += w * rc * s.powi(n as i32);
                            if r >= r_eff - 1.5 * s {
                                acc.shell_abs_max = acc.shell_abs_max.max(rc.abs());
                            }
                        }
                        Err(_) => acc.skipped += 1,
                    }
                }
                acc
            })
            .collect();
        let mut bulk = 0.0;
        let mut shell_abs_max: f64 = 0.0;
        let mut skipped = 0;
        for p in pieces {
            bulk += p.bulk;
            shell_abs_max = shell_abs_max.max(p.shell_abs_max);
            skipped += p.skipped;
        }
        // Tail bound assuming |R| decays at least like (r/r_eff)^{-(n+1)}
        // beyond the grid: ∫ |R| <= max_shell |R| · ω_{n-1} r_effⁿ.
        let bulk_tail_estimate = shell_abs_max * unit_sphere_area(n) * r_eff.powi(n as i32);

        let ls = self.level_set_with_mode(h, None, mode);
        let boundary = ls.weighted_term;
        Ok(LamIdentityReport {
            height: h,
            mass,
            lhs,
            bulk,
            bulk_tail_estimate,
            boundary,
            residual: lhs - bulk - boundary,
            skipped_nodes: skipped,
        })
    }

    /// The largest sampled regular height whose level-set area stays under
    /// `2 ω_{n-1} (2m)^{(n-1)/(n-2)}`, refined by bisection at the crossing.
    pub fn h0_height(&self, mass: f64) -> Result<H0Report> {
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "h0 needs a positive mass, got {mass}"
            )));
        }
        let n = self.dimension();
        let threshold = 2.0
            * unit_sphere_area(n)
            * (2.0 * mass).powf((n as f64 - 1.0) / (n as f64 - 2.0));
        let (lo, hi) = self.height_range();
        if !(hi - lo > 1e-12 * (1.0 + hi.abs() + lo.abs())) {
            return Ok(H0Report {
                h0: lo,
                flag: H0Flag::Degenerate,
                threshold_area: threshold,
            });
        }
        let samples = 32usize;
        let passes = |h: f64| -> Option<bool> {
            let (area, flags) = self.level_set_area(h, None);
            if flags.near_critical || flags.out_of_range || flags.box_clipped || area == 0.0 {
                None // not a usable regular level
            } else {
                Some(area <= threshold)
            }
        };
        let heights: Vec<f64> = (0..samples)
            .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / samples as f64)
            .collect();
        let verdicts: Vec<Option<bool>> = heights.par_iter().map(|&h| passes(h)).collect();
        let mut last_pass: Option<usize> = None;
        for (k, v) in verdicts.iter().enumerate() {
            if *v == Some(true) {
                last_pass = Some(k);
            }
        }
        let Some(kp) = last_pass else {
            return Ok(H0Report {
                h0: lo,
                flag: H0Flag::BottomOfRange,
                threshold_area: threshold,
            });
        };
        // first failing sampled height above the last passing one
        let mut upper = None;
        for (k, v) in verdicts.iter().enumerate().skip(kp + 1) {
            if *v == Some(false) {
                upper = Some(heights[k]);
                break;
            }
        }
        let Some(mut bad) = upper else {
            return Ok(H0Report {
                h0: heights[kp],
                flag: H0Flag::TopOfRange,
                threshold_area: threshold,
            });
        };
        let mut good = heights[kp];
        for _ in 0..40 {
            let mid = 0.5 * (good + bad);
            match passes(mid) {
                Some(true) => good = mid,
                Some(false) => bad = mid,
                None => break, // near-critical band: keep the last verdicts
            }
            if bad - good < 1e-10 * (1.0 + good.abs()) {
                break;
            }
        }
        Ok(H0Report {
            h0: good,
            flag: H0Flag::Converged,
            threshold_area: threshold,
        })
    }

    /// Shift the graph vertically so that h₀ = 0.  Idempotent up to the
    /// height-grid tolerance.
    pub fn vertical_normalize(&self, mass: f64) -> Result<(GraphManifold, H0Report)> {
        let rep = self.h0_height(mass)?;
        match rep.flag {
            H0Flag::Degenerate | H0Flag::BottomOfRange => Ok((self.clone(), rep)),
            _ => Ok((self.shifted_down(rep.h0), rep)),
        }
    }

    /// Margin of the graphical Penrose bound.  The boundary area is measured
    /// by contouring the radial field at the hole radius.
    pub fn penrose_check(&self, mass: f64) -> Result<PenroseReport> {
        let n = self.dimension();
        let threshold =
            unit_sphere_area(n) * (2.0 * mass).powf((n as f64 - 1.0) / (n as f64 - 2.0));
        let boundary_area = match self.domain.hole_radius() {
            None => 0.0,
            Some(rho) => {
                // f is constant on the hole boundary, so ∂M is the lifted
                // sphere |x| = ρ and its area equals the Euclidean one.
                let open = GraphDomain::new(n, self.domain.r_max(), self.domain.spacing(), None)?;
                let els =
                    crate::hypersurface::marching_level_set(&open, |idx| open.radius(idx), rho);
                els.iter().map(|e| e.measure(n)).sum()
            }
        };
        Ok(PenroseReport {
            threshold,
            boundary_area,
            margin: threshold - boundary_area,
        })
    }

    /// True when the (normalized) graph stays under height ε on B(r).
    pub fn slab_check(&self, epsilon: f64, r: f64) -> (bool, f64) {
        let max_h = self.max_height_within(r);
        (max_h < epsilon, max_h)
    }

    /// Induced volumes of the below-zero and above-zero parts of Ω(r).
    pub fn volume_split(&self, r: f64) -> Result<(f64, f64)> {
        self.induced_volume_split(r, 0.0)
    }
}

fn extrapolate_mass(radii: &[f64], values: &[f64]) -> (f64, Option<f64>, f64) {
    let k = values.len();
    let last = values[k - 1];
    if k >= 3 {
        let q1 = radii[k - 2] / radii[k - 3];
        let q2 = radii[k - 1] / radii[k - 2];
        if (q1 - q2).abs() < 1e-9 * q1 {
            let d1 = values[k - 2] - values[k - 3];
            let d2 = values[k - 1] - values[k - 2];
            if d2.abs() > 1e-300 && d1 / d2 > 1.0 {
                let p = (d1 / d2).ln() / q1.ln();
                let m_inf = last + d2 / ((d1 / d2) - 1.0);
                return (m_inf, Some(p), (m_inf - last).abs());
            }
        }
    }
    // least-squares fit m(r) = m_inf + c / r
    let xs: Vec<f64> = radii.iter().map(|r| 1.0 / r).collect();
    let n = k as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = values.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return (last, None, 0.0);
    }
    let m_inf = (sy * sxx - sx * sxy) / det;
    (m_inf, None, (m_inf - last).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::ClassParams;
    use crate::profile::{
        schwarzschild_profile, schwarzschild_slope, MassRamp, Profile, RadialKind,
    };
    use std::f64::consts::PI;

    /// Rotationally symmetric closed-form reduction of the mass integrand:
    /// m(ρ) = ρ^{n-2} φ'² / (2 (1 + φ'²)).
    fn radial_mass_oracle(n: usize, slope: f64, r: f64) -> f64 {
        r.powi(n as i32 - 2) * slope * slope / (2.0 * (1.0 + slope * slope))
    }

    fn schwarzschild_fixture(mass: f64, r_max: f64, spacing: f64) -> GraphManifold {
        let d = GraphDomain::new(3, r_max, spacing, Some(2.0 * mass)).unwrap();
        GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, mass),
            ClassParams {
                r0: 4.0 * mass,
                gamma: 2.0,
                ..Default::default()
            },
        )
    }

    #[test]
    fn flat_graph_mass_is_exactly_zero() {
        let d = GraphDomain::new(3, 5.0, 0.5, None).unwrap();
        let m = GraphManifold::from_profile(d, Profile::flat(1.0), ClassParams::default());
        let est = m.adm_mass(&[1.0, 2.0, 4.0], DerivativeMode::Auto).unwrap();
        for v in &est.values {
            assert_eq!(*v, 0.0);
        }
        assert_eq!(est.extrapolated, 0.0);
    }

    #[test]
    fn schwarzschild_quadrature_matches_radial_oracle() {
        // dual route: 2-D sphere quadrature of the full tensor integrand vs
        // the 1-D rotationally symmetric reduction
        let g = schwarzschild_fixture(1.0, 40.0, 1.0);
        let est = g
            .adm_mass(&[8.0, 16.0, 32.0], DerivativeMode::Auto)
            .unwrap();
        for (&r, &v) in est.radii.iter().zip(&est.values) {
            let oracle = radial_mass_oracle(3, schwarzschild_slope(3, 1.0, r), r);
            assert!((v - oracle).abs() < 1e-8, "r = {r}: {v} vs {oracle}");
            // the n = 3 Schwarzschild flux is exactly m at every radius
            assert!((v - 1.0).abs() < 1e-8);
        }
        assert!((est.extrapolated - 1.0).abs() < 0.05);
    }

    #[test]
    fn four_dimensional_mass_quadrature() {
        let mass = 0.5;
        let d = GraphDomain::new(4, 8.0, 0.5, Some(1.0)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(4, mass),
            ClassParams::default(),
        );
        let est = g.adm_mass(&[3.0, 4.5, 6.75], DerivativeMode::Auto).unwrap();
        for (&r, &v) in est.radii.iter().zip(&est.values) {
            let oracle = radial_mass_oracle(4, schwarzschild_slope(4, mass, r), r);
            assert!((v - oracle).abs() < 1e-6, "r = {r}: {v} vs {oracle}");
            assert!((v - mass).abs() < 1e-6);
        }
    }

    #[test]
    fn finite_difference_mass_close_to_analytic() {
        let g = schwarzschild_fixture(0.25, 24.0, 0.5);
        let est = g
            .adm_mass(&[6.0, 12.0, 20.0], DerivativeMode::FiniteDifference)
            .unwrap();
        assert!(
            (est.extrapolated - 0.25).abs() < 0.05 * 0.25,
            "extrapolated {}",
            est.extrapolated
        );
    }

    #[test]
    fn mass_ramp_flux_is_nondecreasing_and_reaches_m1() {
        // for the ramp the flux at radius ρ equals the mass function m(ρ)
        let ramp = MassRamp::new(3, 0.1, 0.4, 3.0, 6.0).unwrap();
        let d = GraphDomain::new(3, 10.0, 0.25, Some(0.2)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::radial(RadialKind::MassRamp(ramp)),
            ClassParams::default(),
        );
        let radii = [2.0, 3.5, 4.5, 5.5, 7.0, 9.0];
        let est = g.adm_mass(&radii, DerivativeMode::Auto).unwrap();
        for w in est.values.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "flux not monotone: {:?}", est.values);
        }
        assert!((est.values[0] - 0.1).abs() < 1e-6);
        assert!((est.values[5] - 0.4).abs() < 1e-6);
    }

    #[test]
    fn finite_difference_error_decays_with_mass() {
        // at a fixed grid the quadrature error of the finite-difference mass
        // shrinks along a decreasing mass schedule
        let mut errors = Vec::new();
        for mass in [0.4, 0.2, 0.1] {
            let g = schwarzschild_fixture(mass, 24.0, 0.5);
            let est = g
                .adm_mass(&[6.0, 12.0, 20.0], DerivativeMode::FiniteDifference)
                .unwrap();
            errors.push((est.extrapolated - mass).abs());
        }
        assert!(
            errors[1] <= errors[0] * 1.05 && errors[2] <= errors[1] * 1.05,
            "errors not decaying: {errors:?}"
        );
    }

    #[test]
    fn radii_validation() {
        let g = schwarzschild_fixture(0.25, 12.0, 0.5);
        assert!(g.adm_mass(&[4.0], DerivativeMode::Auto).is_err());
        assert!(g.adm_mass(&[4.0, 3.0], DerivativeMode::Auto).is_err());
        assert!(g.adm_mass(&[4.0, 11.9], DerivativeMode::Auto).is_err());
    }

    #[test]
    fn lam_identity_on_schwarzschild() {
        // bulk ≈ 0 and the boundary term carries 2(n-1)ω_{n-1} m = 16π
        let g = schwarzschild_fixture(1.0, 8.0, 0.2);
        let h = schwarzschild_profile(3, 1.0, 4.0).unwrap();
        let rep = g.lam_identity(h, 1.0, DerivativeMode::Auto).unwrap();
        let want = 16.0 * PI;
        assert!((rep.lhs - want).abs() < 1e-12);
        assert!(
            (rep.boundary - want).abs() < 0.02 * want,
            "boundary {} vs {want}",
            rep.boundary
        );
        assert!(rep.bulk.abs() < 0.03 * want, "bulk {}", rep.bulk);
        assert!(
            rep.residual.abs() < 0.04 * want,
            "residual {}",
            rep.residual
        );
    }

    #[test]
    fn lam_identity_flat_graph_is_exact() {
        let d = GraphDomain::new(3, 4.0, 0.25, None).unwrap();
        let g = GraphManifold::from_profile(d, Profile::flat(2.0), ClassParams::default());
        let rep = g.lam_identity(-1.0, 0.0, DerivativeMode::Auto).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.boundary, 0.0);
        assert_eq!(rep.bulk, 0.0);
        assert_eq!(rep.residual, 0.0);
    }

    #[test]
    fn lam_identity_entire_graph_empty_sublevel() {
        // entire mass-ramp graph, h below min f: Ω_h = ∅ and the whole mass
        // sits in the bulk term
        let ramp = MassRamp::new(3, 0.0, 0.2, 1.5, 3.0).unwrap();
        let d = GraphDomain::new(3, 9.0, 0.15, None).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::radial(RadialKind::MassRamp(ramp)),
            ClassParams::default(),
        );
        let rep = g.lam_identity(-0.5, 0.2, DerivativeMode::Auto).unwrap();
        let want = 16.0 * PI * 0.2;
        assert_eq!(rep.boundary, 0.0);
        assert!(
            (rep.bulk - want).abs() < 0.04 * want,
            "bulk {} vs {want}",
            rep.bulk
        );
    }

    #[test]
    fn h0_matches_closed_form() {
        // n = 3 Schwarzschild: area threshold crossed at |x| = 2√2 m, so
        // h0 = S_m(2√2 m) = 4m√(√2-1)
        let mass = 0.5;
        let g = schwarzschild_fixture(mass, 2.5, 0.04);
        let rep = g.h0_height(mass).unwrap();
        let want = 4.0 * mass * (2.0f64.sqrt() - 1.0).sqrt();
        assert_eq!(rep.flag, H0Flag::Converged);
        assert!(
            (rep.h0 - want).abs() < 0.02 * want,
            "h0 {} vs {want}",
            rep.h0
        );
    }

    #[test]
    fn h0_scales_linearly_in_mass() {
        let g1 = schwarzschild_fixture(0.25, 1.6, 0.03);
        let g2 = schwarzschild_fixture(0.5, 2.8, 0.05);
        let h1 = g1.h0_height(0.25).unwrap().h0;
        let h2 = g2.h0_height(0.5).unwrap().h0;
        assert!((h2 / h1 - 2.0).abs() < 0.05, "ratio {}", h2 / h1);
    }

    #[test]
    fn h0_flat_graph_flagged() {
        let d = GraphDomain::new(3, 2.0, 0.2, None).unwrap();
        let g = GraphManifold::from_profile(d, Profile::flat(1.0), ClassParams::default());
        let rep = g.h0_height(1e-3).unwrap();
        assert_eq!(rep.flag, H0Flag::Degenerate);
    }

    #[test]
    fn normalize_removes_shift_and_is_idempotent() {
        let mass = 0.5;
        let d = GraphDomain::new(3, 2.6, 0.05, Some(1.0)).unwrap();
        let shifted = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, mass).shifted(5.0),
            ClassParams {
                r0: 2.0,
                gamma: 2.0,
                ..Default::default()
            },
        );
        let (norm1, rep1) = shifted.vertical_normalize(mass).unwrap();
        let want = 4.0 * mass * (2.0f64.sqrt() - 1.0).sqrt();
        assert!(
            (rep1.h0 - 5.0 - want).abs() < 0.02 * (5.0 + want),
            "h0 {}",
            rep1.h0
        );
        let (_, rep2) = norm1.vertical_normalize(mass).unwrap();
        assert!(rep2.h0.abs() < 0.02 * want, "second h0 {}", rep2.h0);
    }

    #[test]
    fn penrose_margin_vanishes_at_the_horizon() {
        let mass = 0.5;
        let g = schwarzschild_fixture(mass, 3.0, 0.05);
        let rep = g.penrose_check(mass).unwrap();
        assert!(
            rep.margin.abs() <= 0.02 * rep.threshold,
            "margin {} threshold {}",
            rep.margin,
            rep.threshold
        );
    }

    #[test]
    fn penrose_margin_without_hole_is_full_threshold() {
        let d = GraphDomain::new(3, 2.0, 0.2, None).unwrap();
        let g = GraphManifold::from_profile(d, Profile::flat(0.0), ClassParams::default());
        let rep = g.penrose_check(0.3).unwrap();
        assert_eq!(rep.boundary_area, 0.0);
        assert_eq!(rep.margin, rep.threshold);
    }

    #[test]
    fn penrose_margin_positive_for_hole_above_horizon() {
        let mass = 0.5;
        let d = GraphDomain::new(3, 3.0, 0.05, Some(0.8)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, mass),
            ClassParams::default(),
        );
        // boundary sphere radius 0.8 < 2m√2: margin strictly positive
        let rep = g.penrose_check(mass).unwrap();
        assert!(rep.margin > 0.0);
    }

    #[test]
    fn volume_split_below_matches_radial_oracle() {
        // normalized small-mass Schwarzschild: the below-zero part is the
        // funnel under the h0 level, a 1-D radial quadrature in closed form
        let mass = 0.2;
        let g = schwarzschild_fixture(mass, 3.0, 0.04);
        let (gn, rep) = g.vertical_normalize(mass).unwrap();
        assert_eq!(rep.flag, H0Flag::Converged);
        let (below, above) = gn.volume_split(2.5).unwrap();
        let total = gn.induced_volume(2.5).unwrap();
        assert!((below + above - total).abs() < 0.01 * total);
        // oracle: ∫ 4πρ²√(ρ/(ρ-2m)) dρ from the horizon to the h0 radius
        // 2√2·m, smooth under u = √(ρ-2m)
        let r_h0 = 2.0 * 2.0f64.sqrt() * mass;
        let horizon = 2.0 * mass;
        let oracle = crate::quad::simpson(
            |u| {
                let rho = horizon + u * u;
                8.0 * PI * rho * rho * rho.sqrt()
            },
            0.0,
            (r_h0 - horizon).sqrt(),
            4000,
        );
        assert!(
            (below - oracle).abs() < 0.1 * oracle,
            "below {below} vs oracle {oracle}"
        );
    }

    #[test]
    fn slab_checks() {
        let d = GraphDomain::new(3, 6.0, 0.25, None).unwrap();
        let flat = GraphManifold::from_profile(d, Profile::flat(0.0), ClassParams::default());
        assert!(flat.slab_check(0.01, 5.0).0);

        // m = 1 normalized Schwarzschild exceeds 0.1 well inside B(5)
        let g = schwarzschild_fixture(1.0, 5.6, 0.1);
        let (gn, _) = g.vertical_normalize(1.0).unwrap();
        let (ok, max_h) = gn.slab_check(0.1, 5.0);
        assert!(!ok);
        let want =
            schwarzschild_profile(3, 1.0, 5.0).unwrap() - 4.0 * (2.0f64.sqrt() - 1.0).sqrt();
        assert!((max_h - want).abs() < 0.05 * want, "{max_h} vs {want}");

        // tiny mass: normalized height inside B(5) stays under 0.5
        let d = GraphDomain::new(3, 6.0, 0.1, None).unwrap();
        let tiny = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, 1e-3),
            ClassParams::default(),
        );
        let (ok, max_h) = tiny.slab_check(0.5, 5.0);
        assert!(ok, "max height {max_h}");
    }
}
