//! Quadrature helpers: Gauss-Legendre rules, product rules on round spheres,
//! and the usual sphere/ball measure constants.

use std::f64::consts::PI;

/// Volume of the unit (n-1)-sphere in Euclidean n-space.
pub fn unit_sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => {
            // 2 π^{n/2} / Γ(n/2), recursively: ω_{n-1} = 2π/(n-2) ω_{n-3}
            2.0 * PI / (n as f64 - 2.0) * unit_sphere_area(n - 2)
        }
    }
}

/// Volume of the unit ball in Euclidean n-space.
pub fn unit_ball_volume(n: usize) -> f64 {
    unit_sphere_area(n) / n as f64
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial. Deterministic to the last bit for a fixed order.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    assert!(order >= 1);
    let mut out = Vec::with_capacity(order);
    let n = order;
    for i in 0..n {
        // Chebyshev-style initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A quadrature point on the unit sphere S^{n-1}: direction and weight.
/// Weights sum to the sphere area `unit_sphere_area(n)`.
#[derive(Debug, Clone, Copy)]
pub struct SpherePoint {
    pub dir: [f64; 4],
    pub weight: f64,
}

/// Product quadrature on the unit sphere S^{n-1} for n = 3 or 4.
///
/// `order` controls both the polar Gauss order and the azimuthal resolution;
/// the rule integrates smooth integrands to high accuracy well before
/// order 24.
pub fn sphere_quadrature(n: usize, order: usize) -> Vec<SpherePoint> {
    match n {
        3 => {
            // x = (sinθ cosφ, sinθ sinφ, cosθ), dA = dφ d(cosθ)
            let gl = gauss_legendre(order);
            let n_phi = 2 * order;
            let dphi = 2.0 * PI / n_phi as f64;
            let mut pts = Vec::with_capacity(order * n_phi);
            for &(c, wc) in &gl {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for k in 0..n_phi {
                    let phi = dphi * (k as f64 + 0.5);
                    pts.push(SpherePoint {
                        dir: [s * phi.cos(), s * phi.sin(), c, 0.0],
                        weight: wc * dphi,
                    });
                }
            }
            pts
        }
        4 => {
            // x = (sinψ sinθ cosφ, sinψ sinθ sinφ, sinψ cosθ, cosψ),
            // dA = sin²ψ dψ sinθ dθ dφ.  Gauss in cosθ, Gauss in ψ with the
            // sin²ψ factor folded into the weight, uniform in φ.
            let gl_theta = gauss_legendre(order);
            let gl_psi = gauss_legendre(order);
            let n_phi = 2 * order;
            let dphi = 2.0 * PI / n_phi as f64;
            let mut pts = Vec::with_capacity(order * order * n_phi);
            for &(u, wu) in &gl_psi {
                // map u in [-1,1] to ψ in [0,π]
                let psi = 0.5 * PI * (u + 1.0);
                let wpsi = wu * 0.5 * PI * psi.sin() * psi.sin();
                for &(c, wc) in &gl_theta {
                    let s = (1.0 - c * c).max(0.0).sqrt();
                    for k in 0..n_phi {
                        let phi = dphi * (k as f64 + 0.5);
                        pts.push(SpherePoint {
                            dir: [
                                psi.sin() * s * phi.cos(),
                                psi.sin() * s * phi.sin(),
                                psi.sin() * c,
                                psi.cos(),
                            ],
                            weight: wpsi * wc * dphi,
                        });
                    }
                }
            }
            pts
        }
        _ => panic!("sphere_quadrature supports n = 3 or 4"),
    }
}

/// Deterministic, roughly uniform direction samples on S^{n-1} (no weights).
/// Used for angular sampling of boundary spheres.
pub fn sphere_directions(n: usize, count: usize) -> Vec<[f64; 4]> {
    match n {
        3 => {
            // Fibonacci sphere.
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = 2.0 * PI * (i as f64 / golden).fract();
                    [r * phi.cos(), r * phi.sin(), z, 0.0]
                })
                .collect()
        }
        4 => {
            // Double-angle spiral on S³; adequate for coarse boundary sampling.
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            (0..count)
                .map(|i| {
                    let t = (i as f64 + 0.5) / count as f64;
                    let psi = (1.0 - 2.0 * t).acos();
                    let theta = PI * (i as f64 / golden).fract();
                    let phi = 2.0 * PI * (i as f64 / (golden * golden)).fract();
                    [
                        psi.sin() * theta.sin() * phi.cos(),
                        psi.sin() * theta.sin() * phi.sin(),
                        psi.sin() * theta.cos(),
                        psi.cos(),
                    ]
                })
                .collect()
        }
        _ => panic!("sphere_directions supports n = 3 or 4"),
    }
}

/// Composite Simpson quadrature of `f` on [a, b] with `panels` subintervals
/// (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let m = if panels % 2 == 0 { panels } else { panels + 1 };
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let x = a + h * i as f64;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}
