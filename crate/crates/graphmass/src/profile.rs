//! Analytic height profiles for graph manifolds.
//!
//! A profile supplies closed-form values, gradients, and Hessians, so that
//! quadratures can bypass finite differences where an exact description of
//! the graph exists.  Grid-sampled manifolds without a profile fall back to
//! finite differences everywhere.

use crate::error::{Error, Result};
use crate::grid::MAX_DIM;
use crate::quad::simpson;

/// Rotationally symmetric Schwarzschild graph height.
///
/// Closed forms exist for n = 3 and n = 4; other dimensions are rejected.
/// The domain starts at the horizon radius `(2m)^{1/(n-2)}`, where the height
/// is zero.
pub fn schwarzschild_profile(n: usize, mass: f64, r: f64) -> Result<f64> {
    if !(n == 3 || n == 4) {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mass must be positive, got {mass}"
        )));
    }
    let horizon = schwarzschild_horizon(n, mass);
    if r < horizon - 1e-12 * horizon.max(1.0) {
        return Err(Error::BelowHorizon { radius: r, horizon });
    }
    let r = r.max(horizon);
    Ok(match n {
        3 => (8.0 * mass * (r - 2.0 * mass)).max(0.0).sqrt(),
        4 => {
            let a = (2.0 * mass).sqrt();
            let x = (r / a).max(1.0);
            a * (x + (x * x - 1.0).max(0.0).sqrt()).ln()
        }
        _ => unreachable!(),
    })
}

/// Horizon radius `(2m)^{1/(n-2)}` of the Schwarzschild graph.
pub fn schwarzschild_horizon(n: usize, mass: f64) -> f64 {
    match n {
        3 => 2.0 * mass,
        4 => (2.0 * mass).sqrt(),
        _ => (2.0 * mass).powf(1.0 / (n as f64 - 2.0)),
    }
}

/// Radial slope S_m'(r); infinite at the horizon.
pub fn schwarzschild_slope(n: usize, mass: f64, r: f64) -> f64 {
    match n {
        3 => {
            let s = (8.0 * mass * (r - 2.0 * mass)).max(0.0).sqrt();
            if s == 0.0 {
                f64::INFINITY
            } else {
                4.0 * mass / s
            }
        }
        4 => {
            let a2 = 2.0 * mass;
            let v = r * r - a2;
            if v <= 0.0 {
                f64::INFINITY
            } else {
                a2.sqrt() / v.sqrt()
            }
        }
        _ => f64::NAN,
    }
}

fn schwarzschild_d2(n: usize, mass: f64, r: f64) -> f64 {
    match n {
        3 => {
            let s = (8.0 * mass * (r - 2.0 * mass)).max(0.0).sqrt();
            if s == 0.0 {
                f64::NEG_INFINITY
            } else {
                -16.0 * mass * mass / (s * s * s)
            }
        }
        4 => {
            let a2 = 2.0 * mass;
            let v = r * r - a2;
            if v <= 0.0 {
                f64::NEG_INFINITY
            } else {
                -a2.sqrt() * r / v.powf(1.5)
            }
        }
        _ => f64::NAN,
    }
}

/// The smooth bump `exp(1 - 1/(1-s²))` on |s| < 1, zero outside, together
/// with its first two derivatives.
fn bump_c_infty(s: f64) -> (f64, f64, f64) {
    let s2 = s * s;
    if s2 >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let q = 1.0 - s2;
    let b = (1.0 - 1.0 / q).exp();
    let d1 = b * (-2.0 * s / (q * q));
    let d2 = b * ((2.0 * s / (q * q)).powi(2) - 2.0 * (1.0 + 3.0 * s2) / (q * q * q));
    (b, d1, d2)
}

/// C^∞ transition from 0 at t ≤ 0 to 1 at t ≥ 1, with two derivatives.
fn smooth_step(t: f64) -> (f64, f64, f64) {
    fn b(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            (-1.0 / t).exp()
        }
    }
    fn db(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            b(t) / (t * t)
        }
    }
    fn d2b(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            b(t) * (1.0 - 2.0 * t) / (t * t * t * t)
        }
    }
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    // σ = B(t) / (B(t) + B(1-t));  σ' = N/den², N = B'(t)B(1-t) + B(t)B'(1-t)
    let (b1, b2) = (b(t), b(1.0 - t));
    let (db1, db2) = (db(t), db(1.0 - t));
    let (d2b1, d2b2) = (d2b(t), d2b(1.0 - t));
    let den = b1 + b2;
    let num = db1 * b2 + b1 * db2;
    let sigma = b1 / den;
    let dsigma = num / (den * den);
    let dnum = d2b1 * b2 - b1 * d2b2;
    let dden = db1 - db2;
    let d2sigma = (dnum * den - 2.0 * num * dden) / (den * den * den);
    (sigma, dsigma, d2sigma)
}

/// Rotationally symmetric graph whose quasi-local mass function rises
/// smoothly from `m0` to `m1` across the annulus [a, b].
///
/// The radial slope solves `ρ^{n-2} φ'² / (1 + φ'²) = 2 m(ρ)`, so the scalar
/// curvature is strictly positive exactly where m'(ρ) > 0 and zero elsewhere;
/// outside the ramp the graph is exactly Schwarzschild of mass m0 (inside)
/// and mass m1 plus a height offset (outside).  With m0 = 0 the graph is
/// complete (flat near the origin, no hole).
#[derive(Debug, Clone, PartialEq)]
pub struct MassRamp {
    pub n: usize,
    pub m0: f64,
    pub m1: f64,
    pub a: f64,
    pub b: f64,
    table: Vec<f64>,
    drho: f64,
}

impl MassRamp {
    pub fn new(n: usize, m0: f64, m1: f64, a: f64, b: f64) -> Result<Self> {
        if !(n == 3 || n == 4) {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(m1 > m0 && m0 >= 0.0 && b > a && a > 0.0) {
            return Err(Error::InvalidParameter(
                "mass ramp needs 0 <= m0 < m1 and 0 < a < b".into(),
            ));
        }
        let mut ramp = Self {
            n,
            m0,
            m1,
            a,
            b,
            table: Vec::new(),
            drho: 0.0,
        };
        // The graph exists only while ρ^{n-2} > 2 m(ρ).
        let steps = 4000usize;
        for k in 0..=steps {
            let rho = a + (b - a) * k as f64 / steps as f64;
            if rho.powi(n as i32 - 2) <= 2.0 * ramp.mass_at(rho).0 {
                return Err(Error::InvalidParameter(format!(
                    "mass ramp degenerate at rho = {rho}: 2 m(rho) reaches rho^(n-2)"
                )));
            }
        }
        let panels = 8192usize;
        let drho = (b - a) / panels as f64;
        let mut table = Vec::with_capacity(panels + 1);
        let base = if m0 > 0.0 {
            schwarzschild_profile(n, m0, a)?
        } else {
            0.0
        };
        let mut acc = base;
        table.push(acc);
        for k in 0..panels {
            let lo = a + drho * k as f64;
            // 3-point Gauss-Legendre on each panel.
            let g = 0.5 * (3.0f64 / 5.0).sqrt();
            let (w0, w1) = (5.0 / 18.0, 8.0 / 18.0);
            let mid = lo + 0.5 * drho;
            acc += drho
                * (w0 * ramp.slope_at(mid - g * drho)
                    + w1 * ramp.slope_at(mid)
                    + w0 * ramp.slope_at(mid + g * drho));
            table.push(acc);
        }
        ramp.table = table;
        ramp.drho = drho;
        Ok(ramp)
    }

    pub fn adm_mass(&self) -> f64 {
        self.m1
    }

    pub fn hole_radius(&self) -> Option<f64> {
        if self.m0 > 0.0 {
            Some(schwarzschild_horizon(self.n, self.m0))
        } else {
            None
        }
    }

    /// (m(ρ), m'(ρ), m''(ρ))
    fn mass_at(&self, rho: f64) -> (f64, f64, f64) {
        let w = self.b - self.a;
        let (s, ds, d2s) = smooth_step((rho - self.a) / w);
        (
            self.m0 + (self.m1 - self.m0) * s,
            (self.m1 - self.m0) * ds / w,
            (self.m1 - self.m0) * d2s / (w * w),
        )
    }

    fn slope_at(&self, rho: f64) -> f64 {
        let (m, _, _) = self.mass_at(rho);
        if m <= 0.0 {
            return 0.0;
        }
        let u = 2.0 * m;
        let v = rho.powi(self.n as i32 - 2) - u;
        (u / v).max(0.0).sqrt()
    }

    fn d2_at(&self, rho: f64) -> f64 {
        let (m, dm, _) = self.mass_at(rho);
        if m <= 0.0 {
            return 0.0;
        }
        let u = 2.0 * m;
        let du = 2.0 * dm;
        let nm2 = self.n as f64 - 2.0;
        let v = rho.powi(self.n as i32 - 2) - u;
        let dv = nm2 * rho.powi(self.n as i32 - 3) - du;
        let phi_p = (u / v).max(0.0).sqrt();
        if phi_p < 1e-280 {
            return 0.0;
        }
        (du * v - u * dv) / (2.0 * v * v * phi_p)
    }

    fn value_at(&self, rho: f64) -> f64 {
        if rho <= self.a {
            if self.m0 > 0.0 {
                schwarzschild_profile(self.n, self.m0, rho.max(self.horizon_floor()))
                    .unwrap_or(0.0)
            } else {
                0.0
            }
        } else if rho >= self.b {
            let end = *self.table.last().unwrap();
            end + schwarzschild_profile(self.n, self.m1, rho).unwrap_or(0.0)
                - schwarzschild_profile(self.n, self.m1, self.b).unwrap_or(0.0)
        } else {
            let t = (rho - self.a) / self.drho;
            let k = (t.floor() as usize).min(self.table.len() - 2);
            let lo = self.a + self.drho * k as f64;
            // short-interval correction by midpoint rule on φ'
            let rest = rho - lo;
            self.table[k] + rest * self.slope_at(lo + 0.5 * rest)
        }
    }

    fn horizon_floor(&self) -> f64 {
        schwarzschild_horizon(self.n, self.m0.max(1e-300))
    }
}

/// Rotationally symmetric building blocks: height as a function of the
/// distance to a center point.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialKind {
    Schwarzschild { n: usize, mass: f64 },
    Cone { slope: f64 },
    Hemisphere,
    Paraboloid { curvature: f64 },
    Bump { amplitude: f64, width: f64 },
    /// An annular ridge: amplitude · ψ((ρ - center_radius)/width).
    Ridge {
        amplitude: f64,
        center_radius: f64,
        width: f64,
    },
    MassRamp(MassRamp),
}

impl RadialKind {
    /// (φ, φ', φ'') at radius ρ ≥ 0.
    pub fn eval(&self, rho: f64) -> (f64, f64, f64) {
        match self {
            RadialKind::Schwarzschild { n, mass } => {
                let horizon = schwarzschild_horizon(*n, *mass);
                if rho <= horizon {
                    (0.0, f64::INFINITY, f64::NEG_INFINITY)
                } else {
                    (
                        schwarzschild_profile(*n, *mass, rho).unwrap_or(0.0),
                        schwarzschild_slope(*n, *mass, rho),
                        schwarzschild_d2(*n, *mass, rho),
                    )
                }
            }
            RadialKind::Cone { slope } => (slope * rho, *slope, 0.0),
            RadialKind::Hemisphere => {
                let q = 1.0 - rho * rho;
                if q <= 1e-12 {
                    (0.0, 0.0, 0.0)
                } else {
                    let s = q.sqrt();
                    (s, -rho / s, -1.0 / (s * s * s))
                }
            }
            RadialKind::Paraboloid { curvature } => {
                (0.5 * curvature * rho * rho, curvature * rho, *curvature)
            }
            RadialKind::Bump { amplitude, width } => {
                let (b, d1, d2) = bump_c_infty(rho / width);
                (
                    amplitude * b,
                    amplitude * d1 / width,
                    amplitude * d2 / (width * width),
                )
            }
            RadialKind::Ridge {
                amplitude,
                center_radius,
                width,
            } => {
                let (b, d1, d2) = bump_c_infty((rho - center_radius) / width);
                (
                    amplitude * b,
                    amplitude * d1 / width,
                    amplitude * d2 / (width * width),
                )
            }
            RadialKind::MassRamp(ramp) => {
                (ramp.value_at(rho), ramp.slope_at(rho), ramp.d2_at(rho))
            }
        }
    }

    /// Second radial derivative at the center, for the ρ → 0 limit of the
    /// Hessian.  Kinds that are singular there return zero; callers only hit
    /// this for smooth-at-center profiles.
    fn d2_at_center(&self) -> f64 {
        match self {
            RadialKind::Paraboloid { curvature } => *curvature,
            RadialKind::Hemisphere => -1.0,
            RadialKind::Bump { amplitude, width } => {
                // ψ''(0) = -2 for the normalized bump
                -2.0 * amplitude / (width * width)
            }
            _ => 0.0,
        }
    }
}

/// One additive term of a profile.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileTerm {
    /// φ(|x - center|)
    Radial { center: [f64; 4], kind: RadialKind },
    /// amplitude · Π_i sin(frequency · x_i)
    SinProduct { amplitude: f64, frequency: f64 },
    /// coeffs · x
    Linear { coeffs: [f64; 4] },
}

/// An analytic height function `f(x) = offset + Σ terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub offset: f64,
    pub terms: Vec<ProfileTerm>,
}

impl Profile {
    pub fn flat(height: f64) -> Self {
        Self {
            offset: height,
            terms: Vec::new(),
        }
    }

    pub fn radial(kind: RadialKind) -> Self {
        Self {
            offset: 0.0,
            terms: vec![ProfileTerm::Radial {
                center: [0.0; 4],
                kind,
            }],
        }
    }

    pub fn schwarzschild(n: usize, mass: f64) -> Self {
        Self::radial(RadialKind::Schwarzschild { n, mass })
    }

    pub fn shifted(mut self, dh: f64) -> Self {
        self.offset += dh;
        self
    }

    pub fn with_term(mut self, term: ProfileTerm) -> Self {
        self.terms.push(term);
        self
    }

    /// Summed (φ', φ'') when every term is rotationally symmetric about the
    /// origin, so a closed radial form of the scalar curvature applies.
    pub fn radial_derivatives(&self, rho: f64, n: usize) -> Option<(f64, f64)> {
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for t in &self.terms {
            match t {
                ProfileTerm::Radial { center, kind }
                    if center[..n].iter().all(|c| *c == 0.0) =>
                {
                    let (_, a, b) = kind.eval(rho);
                    d1 += a;
                    d2 += b;
                }
                _ => return None,
            }
        }
        Some((d1, d2))
    }

    /// Exact scalar curvature of the graph when the profile is rotationally
    /// symmetric about the origin.
    pub fn radial_curvature(&self, rho: f64, n: usize) -> Option<f64> {
        let (d1, d2) = self.radial_derivatives(rho, n)?;
        let q = 1.0 + d1 * d1;
        let dpsi = (n as f64 - 2.0) * rho.powi(n as i32 - 3) * d1 * d1 / q
            + rho.powi(n as i32 - 2) * 2.0 * d1 * d2 / (q * q);
        Some((n as f64 - 1.0) * rho.powi(1 - n as i32) * dpsi)
    }

    pub fn value(&self, x: &[f64; 4], n: usize) -> f64 {
        let mut v = self.offset;
        for t in &self.terms {
            v += match t {
                ProfileTerm::Radial { center, kind } => {
                    let rho = dist_to(x, center, n);
                    kind.eval(rho).0
                }
                ProfileTerm::SinProduct {
                    amplitude,
                    frequency,
                } => {
                    let mut p = *amplitude;
                    for a in 0..n {
                        p *= (frequency * x[a]).sin();
                    }
                    p
                }
                ProfileTerm::Linear { coeffs } => {
                    (0..n).map(|a| coeffs[a] * x[a]).sum::<f64>()
                }
            };
        }
        v
    }

    pub fn gradient(&self, x: &[f64; 4], n: usize) -> [f64; 4] {
        let mut g = [0.0; 4];
        for t in &self.terms {
            match t {
                ProfileTerm::Radial { center, kind } => {
                    let rho = dist_to(x, center, n);
                    if rho < 1e-12 {
                        continue; // smooth radial terms have zero gradient at center
                    }
                    let (_, d1, _) = kind.eval(rho);
                    for a in 0..n {
                        g[a] += d1 * (x[a] - center[a]) / rho;
                    }
                }
                ProfileTerm::SinProduct {
                    amplitude,
                    frequency,
                } => {
                    for a in 0..n {
                        let mut p = amplitude * frequency;
                        for b in 0..n {
                            p *= if b == a {
                                (frequency * x[b]).cos()
                            } else {
                                (frequency * x[b]).sin()
                            };
                        }
                        g[a] += p;
                    }
                }
                ProfileTerm::Linear { coeffs } => {
                    for a in 0..n {
                        g[a] += coeffs[a];
                    }
                }
            }
        }
        g
    }

    /// Hessian as a dense symmetric n×n matrix in a fixed 4×4 array.
    pub fn hessian(&self, x: &[f64; 4], n: usize) -> [[f64; 4]; 4] {
        let mut h = [[0.0; 4]; 4];
        for t in &self.terms {
            match t {
                ProfileTerm::Radial { center, kind } => {
                    let rho = dist_to(x, center, n);
                    if rho < 1e-12 {
                        let d2 = kind.d2_at_center();
                        for a in 0..n {
                            h[a][a] += d2;
                        }
                        continue;
                    }
                    let (_, d1, d2) = kind.eval(rho);
                    for a in 0..n {
                        for b in 0..n {
                            let ua = (x[a] - center[a]) / rho;
                            let ub = (x[b] - center[b]) / rho;
                            let delta = if a == b { 1.0 } else { 0.0 };
                            h[a][b] += d2 * ua * ub + d1 / rho * (delta - ua * ub);
                        }
                    }
                }
                ProfileTerm::SinProduct {
                    amplitude,
                    frequency,
                } => {
                    for a in 0..n {
                        for b in 0..n {
                            let mut p = amplitude * frequency * frequency;
                            if a == b {
                                p = -p;
                            }
                            for c in 0..n {
                                p *= if c == a || c == b {
                                    (frequency * x[c]).cos()
                                } else {
                                    (frequency * x[c]).sin()
                                };
                            }
                            // diagonal: -A k² sin Π sin; off: A k² cos cos Π sin
                            if a == b {
                                let mut q = -amplitude * frequency * frequency;
                                for c in 0..n {
                                    q *= (frequency * x[c]).sin();
                                }
                                h[a][b] += q;
                            } else {
                                h[a][b] += p;
                            }
                        }
                    }
                }
                ProfileTerm::Linear { .. } => {}
            }
        }
        h
    }
}

fn dist_to(x: &[f64; 4], c: &[f64; 4], n: usize) -> f64 {
    let mut s = 0.0;
    for a in 0..n {
        let d = x[a] - c[a];
        s += d * d;
    }
    s.sqrt()
}

/// Scalar curvature of the rotationally symmetric graph of φ(|x|):
/// `R = (n-1) ρ^{1-n} d/dρ [ρ^{n-2} φ'²/(1+φ'²)]`, written out with φ', φ''.
pub fn radial_scalar_curvature(kind: &RadialKind, n: usize, rho: f64) -> f64 {
    let (_, d1, d2) = kind.eval(rho);
    let q = 1.0 + d1 * d1;
    let dpsi = (n as f64 - 2.0) * rho.powi(n as i32 - 3) * d1 * d1 / q
        + rho.powi(n as i32 - 2) * 2.0 * d1 * d2 / (q * q);
    (n as f64 - 1.0) * rho.powi(1 - n as i32) * dpsi
}

/// Arclength of a radial profile along a ray, ∫ √(1 + φ'²) dρ.
pub fn radial_arclength(kind: &RadialKind, from: f64, to: f64, panels: usize) -> f64 {
    simpson(
        |rho| {
            let (_, d1, _) = kind.eval(rho);
            (1.0 + d1 * d1).sqrt()
        },
        from,
        to,
        panels,
    )
}

/// Verify a profile Hessian against central differences of its gradient
/// (testing hook; tolerances are loose because it is only a smoke check).
#[allow(dead_code)]
pub(crate) fn hessian_consistent(p: &Profile, x: &[f64; 4], n: usize, h: f64) -> f64 {
    let mut worst: f64 = 0.0;
    let hess = p.hessian(x, n);
    for a in 0..n {
        let mut xp = *x;
        let mut xm = *x;
        xp[a] += h;
        xm[a] -= h;
        let gp = p.gradient(&xp, n);
        let gm = p.gradient(&xm, n);
        for b in 0..n {
            let fd = (gp[b] - gm[b]) / (2.0 * h);
            worst = worst.max((fd - hess[a][b]).abs());
        }
    }
    let _ = MAX_DIM;
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwarzschild_boundary_is_zero() {
        // S_m(2m) = 0 in dimension 3
        let m = 0.7;
        assert_eq!(schwarzschild_profile(3, m, 2.0 * m).unwrap(), 0.0);
        // n = 4 at r = sqrt(2m): log(1 + 0) = 0
        assert_eq!(schwarzschild_profile(4, 0.5, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn schwarzschild_printed_value() {
        // S_m(r) = sqrt(8 m (r - 2m)): m = 0.5, r = 2.5 gives sqrt(6)
        let v = schwarzschild_profile(3, 0.5, 2.5).unwrap();
        assert!((v - 6.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn schwarzschild_is_nondecreasing() {
        let m = 0.3;
        let mut last = 0.0;
        for k in 0..200 {
            let r = 2.0 * m + 0.05 * k as f64;
            let v = schwarzschild_profile(3, m, r).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn schwarzschild_rejects_bad_input() {
        assert!(matches!(
            schwarzschild_profile(5, 1.0, 10.0),
            Err(Error::UnsupportedDimension(5))
        ));
        assert!(matches!(
            schwarzschild_profile(3, 1.0, 1.0),
            Err(Error::BelowHorizon { .. })
        ));
    }

    #[test]
    fn radial_slope_matches_difference_quotient() {
        let m = 0.5;
        for &r in &[1.5, 2.0, 3.0, 7.0] {
            let d = 1e-6;
            let fd = (schwarzschild_profile(3, m, r + d).unwrap()
                - schwarzschild_profile(3, m, r - d).unwrap())
                / (2.0 * d);
            assert!((fd - schwarzschild_slope(3, m, r)).abs() < 1e-6);
        }
        for &r in &[1.5, 2.0, 4.0] {
            let d = 1e-6;
            let fd = (schwarzschild_profile(4, m, r + d).unwrap()
                - schwarzschild_profile(4, m, r - d).unwrap())
                / (2.0 * d);
            assert!((fd - schwarzschild_slope(4, m, r)).abs() < 1e-6);
        }
    }

    #[test]
    fn profile_gradient_hessian_consistency() {
        let profiles = vec![
            Profile::schwarzschild(3, 0.4),
            Profile::radial(RadialKind::Paraboloid { curvature: 0.8 }),
            Profile::radial(RadialKind::Bump {
                amplitude: 0.3,
                width: 1.2,
            }),
            Profile::flat(1.0).with_term(ProfileTerm::SinProduct {
                amplitude: 0.2,
                frequency: 1.7,
            }),
            Profile::flat(0.0).with_term(ProfileTerm::Linear {
                coeffs: [0.3, -0.2, 0.1, 0.0],
            }),
        ];
        let x = [1.3, 0.7, -0.4, 0.0];
        for p in &profiles {
            let err = hessian_consistent(p, &x, 3, 1e-5);
            assert!(err < 1e-5, "profile {p:?}: hessian error {err}");
        }
    }

    #[test]
    fn mass_ramp_matches_schwarzschild_outside() {
        let ramp = MassRamp::new(3, 0.2, 0.5, 2.0, 3.0).unwrap();
        // inside: exactly Schwarzschild m0
        let (v, d1, _) = RadialKind::MassRamp(ramp.clone()).eval(1.5);
        assert!((v - schwarzschild_profile(3, 0.2, 1.5).unwrap()).abs() < 1e-12);
        assert!((d1 - schwarzschild_slope(3, 0.2, 1.5)).abs() < 1e-12);
        // outside: Schwarzschild m1 slope
        let (_, d1, _) = RadialKind::MassRamp(ramp.clone()).eval(5.0);
        assert!((d1 - schwarzschild_slope(3, 0.5, 5.0)).abs() < 1e-12);
        // value continuous across b
        let kind = RadialKind::MassRamp(ramp);
        let (below, _, _) = kind.eval(3.0 - 1e-9);
        let (above, _, _) = kind.eval(3.0 + 1e-9);
        assert!((below - above).abs() < 1e-6);
    }

    #[test]
    fn mass_ramp_second_derivative_consistent_with_slope() {
        let ramp = MassRamp::new(3, 0.15, 0.3, 1.65, 2.85).unwrap();
        let kind = RadialKind::MassRamp(ramp);
        for &rho in &[1.8, 2.0, 2.25, 2.5, 2.8] {
            let d = 1e-5;
            let (_, dp, _) = kind.eval(rho + d);
            let (_, dm, _) = kind.eval(rho - d);
            let (_, _, d2) = kind.eval(rho);
            let fd = (dp - dm) / (2.0 * d);
            assert!((fd - d2).abs() < 1e-6 * (1.0 + d2.abs()), "rho {rho}: {fd} vs {d2}");
        }
        // the ramp's scalar curvature is 2(n-1) m'(ρ)/ρ^{n-1} >= 0
        for k in 0..40 {
            let rho = 1.7 + 1.1 * k as f64 / 39.0;
            let r = radial_scalar_curvature(&kind, 3, rho);
            assert!(r >= -1e-12, "negative ramp curvature {r} at rho {rho}");
        }
    }

    #[test]
    fn mass_ramp_slope_consistent_with_value() {
        let ramp = MassRamp::new(3, 0.0, 0.3, 1.0, 2.5).unwrap();
        let kind = RadialKind::MassRamp(ramp);
        for &rho in &[1.2, 1.7, 2.0, 2.4] {
            let d = 1e-5;
            let (vp, _, _) = kind.eval(rho + d);
            let (vm, _, _) = kind.eval(rho - d);
            let (_, d1, _) = kind.eval(rho);
            assert!(
                ((vp - vm) / (2.0 * d) - d1).abs() < 1e-7,
                "rho = {rho}"
            );
        }
    }

    #[test]
    fn radial_arclength_of_cone() {
        // slope 1: arclength = sqrt(2) * (b - a)
        let len = radial_arclength(&RadialKind::Cone { slope: 1.0 }, 1.0, 2.0, 64);
        assert!((len - 2.0f64.sqrt()).abs() < 1e-12);
    }
}
