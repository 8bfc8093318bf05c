//! Browser bindings for the interactive demo page.  Every entry point takes
//! plain numbers and returns a JSON string, so the same functions are
//! callable (and tested) on the host target.

use graphmass::convergence::{self, FamilyKind, FamilySpec};
use graphmass::hypersurface::{ClassParams, DerivativeMode};
use graphmass::metricspace::noncomplete_fixture;
use graphmass::profile::{schwarzschild_horizon, schwarzschild_profile};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Serialize)]
struct ProfilePanel {
    horizon: f64,
    profile: Vec<(f64, f64)>,
    h0: f64,
    h0_closed_form: f64,
    penrose_threshold: f64,
    penrose_boundary_area: f64,
    penrose_margin: f64,
    depth: f64,
    lam_height: f64,
    lam_lhs: f64,
    lam_bulk: f64,
    lam_boundary: f64,
    lam_residual: f64,
    error: Option<String>,
}

/// Geometry of one Schwarzschild graph at desk scale: height profile, the
/// normalization height, the Penrose margin, depth, and the mass identity.
#[wasm_bindgen]
pub fn schwarzschild_panel(mass: f64, r0: f64, spacing: f64, r_max: f64) -> String {
    let result = (|| -> graphmass::Result<ProfilePanel> {
        let n = 3;
        let class = ClassParams {
            r0,
            gamma: 2.0,
            depth_bound: 2.0 * r0 + 2.0,
            alpha: -1.0,
            asymptotic_offset: 0.0,
        };
        let g = convergence::make_schwarzschild(n, mass, class, r_max, spacing)?;
        let horizon = schwarzschild_horizon(n, mass);
        let mut profile = Vec::new();
        for k in 0..=120 {
            let r = horizon + (r_max - horizon) * k as f64 / 120.0;
            profile.push((r, schwarzschild_profile(n, mass, r)?));
        }
        // the h0 crossing lives at the mass scale; resolve it on its own
        // small grid
        let fine = convergence::make_schwarzschild(
            n,
            mass,
            ClassParams {
                r0: 5.0 * mass,
                ..class
            },
            6.0 * mass,
            mass / 5.0,
        )?;
        let h0 = fine.h0_height(mass)?;
        let pen = g.penrose_check(mass)?;
        let depth = g.depth(r0)?;
        let lam_h = schwarzschild_profile(n, mass, 0.6 * r_max)?;
        let lam = g.lam_identity(lam_h, mass, DerivativeMode::Auto)?;
        Ok(ProfilePanel {
            horizon,
            profile,
            h0: h0.h0,
            h0_closed_form: 4.0 * mass * (2.0f64.sqrt() - 1.0).sqrt(),
            penrose_threshold: pen.threshold,
            penrose_boundary_area: pen.boundary_area,
            penrose_margin: pen.margin,
            depth: depth.depth,
            lam_height: lam.height,
            lam_lhs: lam.lhs,
            lam_bulk: lam.bulk,
            lam_boundary: lam.boundary,
            lam_residual: lam.residual,
            error: None,
        })
    })();
    match result {
        Ok(panel) => serde_json::to_string(&panel).unwrap(),
        Err(e) => format!("{{\"error\":\"{e}\"}}"),
    }
}

#[derive(Serialize)]
struct GluedPanel {
    k: u32,
    epsilon: String,
    epsilon_value: f64,
    gh_bound: f64,
    cauchy_tail: Vec<f64>,
    cross_case_min: f64,
    crossing_case_min: f64,
    min_candidate_margin: f64,
    labels: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

/// The glued space over the swap example: distance matrix heatmap data and
/// the non-completeness margins, exact arithmetic underneath.
#[wasm_bindgen]
pub fn glued_space_panel(k: u32, t_count: u32) -> String {
    let result = (|| -> graphmass::Result<GluedPanel> {
        let fx = noncomplete_fixture(k)?;
        let (z, rep) = fx.analyze(t_count as usize)?;
        let to_f = |r: &num_rational::Rational64| -> f64 {
            *r.numer() as f64 / *r.denom() as f64
        };
        let labels: Vec<String> = z
            .points()
            .map(|(ti, p)| format!("t{}:{}", ti, z.d_a.labels()[p]))
            .collect();
        let matrix: Vec<Vec<f64>> = z
            .full_matrix()
            .iter()
            .map(|row| row.iter().map(to_f).collect())
            .collect();
        Ok(GluedPanel {
            k,
            epsilon: rep.epsilon.to_string(),
            epsilon_value: to_f(&rep.epsilon),
            gh_bound: 2.0 * to_f(&rep.epsilon),
            cauchy_tail: rep.cauchy_tail.iter().map(to_f).collect(),
            cross_case_min: to_f(&rep.cross_case_min),
            crossing_case_min: to_f(&rep.crossing_case_min),
            min_candidate_margin: to_f(&rep.min_candidate_margin),
            labels,
            matrix,
        })
    })();
    match result {
        Ok(panel) => serde_json::to_string(&panel).unwrap(),
        Err(e) => format!("{{\"error\":\"{e}\"}}"),
    }
}

#[derive(Serialize)]
struct StabilityPanel {
    masses: Vec<f64>,
    slab_height: Vec<f64>,
    vol_deficit: Vec<f64>,
    epsilon: Vec<f64>,
    gh_bound: Vec<f64>,
    flat_bound: Vec<f64>,
    ball_deficit: Vec<f64>,
    error: Option<String>,
}

/// Coarse-grid stability trend: halve the mass `steps` times and watch the
/// flatness measures fall.
#[wasm_bindgen]
pub fn stability_panel(steps: u32, spacing: f64) -> String {
    let result = (|| -> graphmass::Result<StabilityPanel> {
        let steps = steps.clamp(2, 6) as i32;
        let spec = FamilySpec {
            kind: FamilyKind::Schwarzschild,
            n: 3,
            schedule: (1..=steps).map(|j| 0.5f64.powi(j)).collect(),
            class: ClassParams {
                r0: 3.0,
                gamma: 1.5,
                depth_bound: 4.5,
                alpha: -1.0,
                asymptotic_offset: 0.0,
            },
            spacing,
            r_max: 5.2,
            radius: 4.0,
            well_depth: 0.0,
            angular_samples: 16,
            ball_radius: 1.6,
        };
        let rep = convergence::stability_experiment(&spec)?;
        Ok(StabilityPanel {
            masses: rep.members.iter().map(|m| m.mass).collect(),
            slab_height: rep.members.iter().map(|m| m.slab_height).collect(),
            vol_deficit: rep.members.iter().map(|m| m.vol_deficit).collect(),
            epsilon: rep.members.iter().map(|m| m.epsilon).collect(),
            gh_bound: rep.members.iter().map(|m| m.gh_bound).collect(),
            flat_bound: rep.members.iter().map(|m| m.flat_bound).collect(),
            ball_deficit: rep.members.iter().map(|m| m.ball_deficit).collect(),
            error: None,
        })
    })();
    match result {
        Ok(panel) => serde_json::to_string(&panel).unwrap(),
        Err(e) => format!("{{\"error\":\"{e}\"}}"),
    }
}
