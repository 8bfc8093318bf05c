//! Property tests for the invariants that hold on every valid input: glued
//! metric axioms, bound algebra, induced-volume lower bounds, and format
//! round-trips.

use graphmass::hypersurface::{ClassParams, GraphManifold};
use graphmass::io;
use graphmass::metricspace::{
    flat_bound, glue, mass_rescale, product_filling_mass, random_euclidean_metric,
    random_rational_metric, ratio_bound, uniform_distance, FiniteMetricSpace,
};
use graphmass::profile::{Profile, RadialKind};
use graphmass::quad::unit_ball_volume;
use graphmass::rng::SplitMix64;
use graphmass::GraphDomain;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Gluing two random Euclidean metrics always yields a metric space whose
    /// end slices are isometric copies and whose slices sit within 2ε.
    #[test]
    fn glued_space_axioms_float(seed in 0u64..10_000, size in 3usize..9, t_count in 2usize..6) {
        let mut rng = SplitMix64::new(seed);
        let a = random_euclidean_metric(&mut rng, size, 3, 5.0);
        let b = random_euclidean_metric(&mut rng, size, 3, 5.0);
        let eps = uniform_distance(&a, &b).unwrap();
        let lambda = ratio_bound(&a, &b).unwrap();
        let z = glue(a.clone(), b, t_count).unwrap();
        z.verify_endpoint_isometry().unwrap();
        z.verify_metric_axioms(1e-12).unwrap();
        z.verify_reference_upper_bound(&a, lambda, 1e-9).unwrap();
        let hd = z.hausdorff_distance(&z.bottom_slice(), &z.top_slice()).unwrap();
        prop_assert!(hd <= 2.0 * eps + 1e-12);
    }

    /// The five-case oracle agrees with a brute-force re-implementation that
    /// takes the crossing infima over the discretized Z itself.
    #[test]
    fn five_case_brute_force_equivalence(seed in 0u64..10_000, size in 3usize..7, t_count in 2usize..5) {
        let mut rng = SplitMix64::new(seed);
        let a = random_rational_metric(&mut rng, size, 25);
        let b = random_rational_metric(&mut rng, size, 25);
        let z = glue(a.clone(), b.clone(), t_count).unwrap();
        let pts: Vec<_> = z.points().collect();
        for &z1 in &pts {
            for &z2 in &pts {
                // independent evaluation: d, d-, d+ directly; the crossing
                // cases as infima of d-(z1, w) + d+(w, z2) over all w in Z
                let t1 = z.t_levels[z1.0];
                let t2 = z.t_levels[z2.0];
                let eps = z.epsilon;
                let dmax = if a.distance(z1.1, z2.1) > b.distance(z1.1, z2.1) {
                    a.distance(z1.1, z2.1)
                } else {
                    b.distance(z1.1, z2.1)
                };
                let d0 = (t1 - t2).abs() + dmax;
                let dm = (t1 + eps).abs() + (t2 + eps).abs() + a.distance(z1.1, z2.1);
                let dp = (t1 - eps).abs() + (t2 - eps).abs() + b.distance(z1.1, z2.1);
                let mut best = d0.min(dm).min(dp);
                for &w in &pts {
                    let tw = z.t_levels[w.0];
                    let d_mp = (t1 + eps).abs() + (tw + eps).abs() + a.distance(z1.1, w.1)
                        + (tw - eps).abs() + (t2 - eps).abs() + b.distance(w.1, z2.1);
                    let d_pm = (t1 - eps).abs() + (tw - eps).abs() + b.distance(z1.1, w.1)
                        + (tw + eps).abs() + (t2 + eps).abs() + a.distance(w.1, z2.1);
                    best = best.min(d_mp).min(d_pm);
                }
                prop_assert_eq!(z.distance(z1, z2), best);
            }
        }
    }

    /// flat bound = 2^{(n+1)/2} λ^{n+1} · (product filling mass), and the λⁿ
    /// rescaling law composes to the identity.
    #[test]
    fn bound_algebra(n in 1usize..5, lambda in 1.0f64..4.0, eps in 0.0f64..2.0, mass in 0.0f64..10.0) {
        let lhs = flat_bound(n, lambda, eps, mass);
        let rhs = 2.0f64.powf((n as f64 + 1.0) / 2.0)
            * lambda.powi(n as i32 + 1)
            * product_filling_mass(eps, mass);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        let back = mass_rescale(mass_rescale(mass, lambda, n), 1.0 / lambda, n);
        prop_assert!((back - mass).abs() <= 1e-9 * mass.max(1.0));
        prop_assert_eq!(flat_bound(n, lambda, 0.0, mass), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// The induced volume dominates the Lebesgue volume of B(r) minus the
    /// hole, for arbitrary radial graphs.
    #[test]
    fn induced_volume_dominates_lebesgue(mass in 0.02f64..0.2, r in 1.2f64..1.8) {
        let hole = 2.0 * mass;
        let d = GraphDomain::new(3, 2.0, 0.1, Some(hole)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, mass),
            ClassParams::default(),
        );
        let v = g.induced_volume(r).unwrap();
        let lebesgue = unit_ball_volume(3) * (r.powi(3) - hole.powi(3));
        prop_assert!(v >= lebesgue * (1.0 - 1e-2), "v = {v}, lebesgue = {lebesgue}");
    }

    /// Cone graphs: level sets are round spheres, so the level area scales
    /// like the square of the height and stays monotone.
    #[test]
    fn cone_level_areas_monotone(slope in 0.6f64..1.4) {
        let d = GraphDomain::new(3, 2.2, 0.1, None).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::radial(RadialKind::Cone { slope }),
            ClassParams::default(),
        );
        let mut last = 0.0;
        for k in 1..=6 {
            let h = 0.3 * k as f64 * slope;
            let (area, flags) = g.level_set_area(h, None);
            if flags.out_of_range || flags.box_clipped {
                break;
            }
            prop_assert!(area >= last - 1e-9);
            last = area;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Exact metric files round-trip bit-for-bit.
    #[test]
    fn metric_file_roundtrip(seed in 0u64..10_000, size in 2usize..10) {
        let mut rng = SplitMix64::new(seed);
        let s = random_rational_metric(&mut rng, size, 30);
        let text = io::metric_to_string(&s);
        let back: FiniteMetricSpace<Rational64> = io::metric_from_string(&text).unwrap();
        prop_assert_eq!(back, s);
    }

    /// Degenerate gluing: identical metrics collapse to a single slice with
    /// the original distances.
    #[test]
    fn degenerate_glue(seed in 0u64..10_000, size in 2usize..8, t_count in 2usize..7) {
        let mut rng = SplitMix64::new(seed);
        let a = random_rational_metric(&mut rng, size, 15);
        let z = glue(a.clone(), a.clone(), t_count).unwrap();
        prop_assert!(z.epsilon.is_zero());
        prop_assert_eq!(z.t_levels.len(), 1);
        for i in 0..size {
            for j in 0..size {
                prop_assert_eq!(z.distance((0, i), (0, j)), a.distance(i, j));
            }
        }
    }
}
