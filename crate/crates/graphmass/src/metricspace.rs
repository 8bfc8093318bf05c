//! Finite metric spaces and the explicit gluing `Z = [-ε, ε] × X` that
//! carries two metrics on a common space, with the five-case distance, its
//! Gromov-Hausdorff and intrinsic-flat upper bounds, and the classical
//! non-completeness example.
//!
//! Everything is generic over the scalar: `f64` for experiment pipelines and
//! `Rational64` for the exact-arithmetic axiom suites.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use num_rational::Rational64;
use num_traits::{FromPrimitive, Signed, Zero};

/// Scalar values a metric can take: ordered signed arithmetic with exact
/// semantics left to the concrete type.
pub trait MetricScalar: Clone + PartialOrd + Signed + FromPrimitive {}
impl<T: Clone + PartialOrd + Signed + FromPrimitive> MetricScalar for T {}

fn tmin<T: MetricScalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

fn tmax<T: MetricScalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Point labels plus a symmetric distance matrix satisfying the metric
/// axioms (validated at construction).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace<T> {
    labels: Vec<String>,
    d: Vec<Vec<T>>,
}

impl<T: MetricScalar> FiniteMetricSpace<T> {
    /// Validate all metric axioms: square shape, zero diagonal, symmetry,
    /// nonnegativity, positive definiteness, and every triangle inequality
    /// (within `tol`; pass zero for exact mode).
    pub fn validate_metric(labels: Vec<String>, d: Vec<Vec<T>>, tol: T) -> Result<Self> {
        let n = labels.len();
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(Error::MetricAxiom(format!(
                "matrix must be {n}x{n} to match the labels"
            )));
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(Error::MetricAxiom(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if d[i][j] < T::zero() {
                    return Err(Error::MetricAxiom(format!("negative entry at ({i},{j})")));
                }
                if d[i][j] != d[j][i] {
                    return Err(Error::MetricAxiom(format!("asymmetry at ({i},{j})")));
                }
                if i != j && d[i][j].is_zero() {
                    return Err(Error::MetricAxiom(format!(
                        "zero distance between distinct points {i} and {j}"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = d[i][k].clone();
                    let rhs = d[i][j].clone() + d[j][k].clone() + tol.clone();
                    if lhs > rhs {
                        return Err(Error::MetricAxiom(format!(
                            "triangle violation on ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(Self { labels, d })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distance(&self, i: usize, j: usize) -> T {
        self.d[i][j].clone()
    }

    pub fn matrix(&self) -> &Vec<Vec<T>> {
        &self.d
    }

    pub fn diameter(&self) -> T {
        let mut best = T::zero();
        for row in &self.d {
            for v in row {
                best = tmax(best, v.clone());
            }
        }
        best
    }

    fn check_same_labels(&self, other: &Self) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(format!(
                "{} vs {} points",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}

/// Uniform distance `sup |d_a - d_b|` between two metrics on the same
/// labelled set.
pub fn uniform_distance<T: MetricScalar>(
    a: &FiniteMetricSpace<T>,
    b: &FiniteMetricSpace<T>,
) -> Result<T> {
    a.check_same_labels(b)?;
    let mut eps = T::zero();
    for i in 0..a.len() {
        for j in 0..a.len() {
            eps = tmax(eps, (a.d[i][j].clone() - b.d[i][j].clone()).abs());
        }
    }
    Ok(eps)
}

/// Smallest λ >= 1 with `λ >= d_j/d_0 >= 1/λ` on all pairs.
pub fn ratio_bound<T: MetricScalar>(
    d0: &FiniteMetricSpace<T>,
    dj: &FiniteMetricSpace<T>,
) -> Result<T> {
    d0.check_same_labels(dj)?;
    let mut lambda = T::one();
    for i in 0..d0.len() {
        for j in 0..d0.len() {
            if i == j {
                continue;
            }
            if d0.d[i][j].is_zero() {
                return Err(Error::MetricAxiom(format!(
                    "zero off-diagonal reference distance at ({i},{j})"
                )));
            }
            let r = dj.d[i][j].clone() / d0.d[i][j].clone();
            lambda = tmax(lambda.clone(), r.clone());
            if !r.is_zero() {
                lambda = tmax(lambda, T::one() / r);
            }
        }
    }
    Ok(lambda)
}

/// Half the difference of diameters: a valid cheap lower bound for the
/// Gromov-Hausdorff distance between the two metrics.
pub fn gh_diameter_lower_bound<T: MetricScalar>(
    a: &FiniteMetricSpace<T>,
    b: &FiniteMetricSpace<T>,
) -> T {
    let half = T::one() / T::from_i64(2).unwrap();
    (a.diameter() - b.diameter()).abs() * half
}

/// A point of the glued space: t-level index and base-point index.
pub type GluedPoint = (usize, usize);

/// The product `[-ε, ε] × X` with the five-case distance whose end slices
/// carry the two input metrics isometrically (bottom slice: `d_a`, top
/// slice: `d_b`).  `t` is discretized; the theorem content only uses ±ε.
#[derive(Debug, Clone)]
pub struct GluedSpace<T> {
    pub d_a: FiniteMetricSpace<T>,
    pub d_b: FiniteMetricSpace<T>,
    pub epsilon: T,
    pub t_levels: Vec<T>,
    /// min over p of d_a(p1, p) + d_b(p, p2)
    inf_ab: Vec<Vec<T>>,
    /// min over p of d_b(p1, p) + d_a(p, p2)
    inf_ba: Vec<Vec<T>>,
}

/// Build the glued space.  `t_count >= 2` interior levels sample (-ε, ε);
/// the endpoints are always present exactly.  With ε = 0 the space
/// degenerates to a single slice.
pub fn glue<T: MetricScalar>(
    d_a: FiniteMetricSpace<T>,
    d_b: FiniteMetricSpace<T>,
    t_count: usize,
) -> Result<GluedSpace<T>> {
    d_a.check_same_labels(&d_b)?;
    if t_count < 2 {
        return Err(Error::InvalidParameter(
            "glued space needs at least 2 t-levels".into(),
        ));
    }
    let eps = uniform_distance(&d_a, &d_b)?;
    let m = d_a.len();
    let t_levels: Vec<T> = if eps.is_zero() {
        vec![T::zero()]
    } else {
        let denom = T::from_usize(t_count - 1).unwrap();
        let mut levels: Vec<T> = (0..t_count)
            .map(|k| {
                let kf = T::from_usize(k).unwrap();
                -eps.clone() + (T::from_i64(2).unwrap() * eps.clone() * kf) / denom.clone()
            })
            .collect();
        // the theorem content lives at the endpoints: pin them exactly even
        // when the interior division rounds
        levels[0] = -eps.clone();
        levels[t_count - 1] = eps.clone();
        levels
    };
    let mut inf_ab = vec![vec![T::zero(); m]; m];
    let mut inf_ba = vec![vec![T::zero(); m]; m];
    for p1 in 0..m {
        for p2 in 0..m {
            let mut best_ab = d_a.d[p1][0].clone() + d_b.d[0][p2].clone();
            let mut best_ba = d_b.d[p1][0].clone() + d_a.d[0][p2].clone();
            for p in 1..m {
                best_ab = tmin(best_ab, d_a.d[p1][p].clone() + d_b.d[p][p2].clone());
                best_ba = tmin(best_ba, d_b.d[p1][p].clone() + d_a.d[p][p2].clone());
            }
            inf_ab[p1][p2] = best_ab;
            inf_ba[p1][p2] = best_ba;
        }
    }
    Ok(GluedSpace {
        d_a,
        d_b,
        epsilon: eps,
        t_levels,
        inf_ab,
        inf_ba,
    })
}

impl<T: MetricScalar> GluedSpace<T> {
    pub fn base_len(&self) -> usize {
        self.d_a.len()
    }

    pub fn len(&self) -> usize {
        self.t_levels.len() * self.base_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = GluedPoint> + '_ {
        let m = self.base_len();
        (0..self.t_levels.len()).flat_map(move |ti| (0..m).map(move |p| (ti, p)))
    }

    pub fn bottom_slice(&self) -> Vec<GluedPoint> {
        (0..self.base_len()).map(|p| (0, p)).collect()
    }

    pub fn top_slice(&self) -> Vec<GluedPoint> {
        let top = self.t_levels.len() - 1;
        (0..self.base_len()).map(|p| (top, p)).collect()
    }

    /// The five candidate distances between two points, in the order
    /// (through, bottom, top, bottom-top, top-bottom).
    pub fn cases(&self, z1: GluedPoint, z2: GluedPoint) -> [T; 5] {
        let (t1, p1) = (self.t_levels[z1.0].clone(), z1.1);
        let (t2, p2) = (self.t_levels[z2.0].clone(), z2.1);
        let eps = self.epsilon.clone();
        let two_eps = T::from_i64(2).unwrap() * eps.clone();
        let through = (t1.clone() - t2.clone()).abs()
            + tmax(self.d_a.d[p1][p2].clone(), self.d_b.d[p1][p2].clone());
        let bottom = (t1.clone() + eps.clone()).abs()
            + (t2.clone() + eps.clone()).abs()
            + self.d_a.d[p1][p2].clone();
        let top = (t1.clone() - eps.clone()).abs()
            + (t2.clone() - eps.clone()).abs()
            + self.d_b.d[p1][p2].clone();
        let bottom_top = (t1.clone() + eps.clone()).abs()
            + (t2.clone() - eps.clone()).abs()
            + two_eps.clone()
            + self.inf_ab[p1][p2].clone();
        let top_bottom = (t1 - eps.clone()).abs()
            + (t2 + eps).abs()
            + two_eps
            + self.inf_ba[p1][p2].clone();
        [through, bottom, top, bottom_top, top_bottom]
    }

    pub fn distance(&self, z1: GluedPoint, z2: GluedPoint) -> T {
        let c = self.cases(z1, z2);
        let mut best = c[0].clone();
        for v in &c[1..] {
            best = tmin(best, v.clone());
        }
        best
    }

    /// Full distance matrix over the discretized Z in point order.
    pub fn full_matrix(&self) -> Vec<Vec<T>> {
        let pts: Vec<GluedPoint> = self.points().collect();
        pts.iter()
            .map(|&a| pts.iter().map(|&b| self.distance(a, b)).collect())
            .collect()
    }

    /// Check symmetry, positive definiteness, and every triangle inequality
    /// over the discretized Z (tolerance zero for exact inputs).
    pub fn verify_metric_axioms(&self, tol: T) -> Result<()> {
        let pts: Vec<GluedPoint> = self.points().collect();
        let d = self.full_matrix();
        let k = pts.len();
        for i in 0..k {
            if !d[i][i].is_zero() {
                return Err(Error::MetricAxiom(format!("d(z,z) != 0 at {i}")));
            }
            for j in 0..k {
                if d[i][j] != d[j][i] {
                    return Err(Error::MetricAxiom(format!("asymmetry at ({i},{j})")));
                }
                if i != j && d[i][j].is_zero() {
                    return Err(Error::MetricAxiom(format!(
                        "glued distance vanishes between distinct points {i},{j}"
                    )));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    if d[i][l].clone() > d[i][j].clone() + d[j][l].clone() + tol.clone() {
                        return Err(Error::MetricAxiom(format!(
                            "triangle violation on ({i},{j},{l})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The endpoint slices must carry the inputs exactly.
    pub fn verify_endpoint_isometry(&self) -> Result<()> {
        let m = self.base_len();
        let top = self.t_levels.len() - 1;
        for p in 0..m {
            for q in 0..m {
                if self.distance((0, p), (0, q)) != self.d_a.d[p][q] {
                    return Err(Error::MetricAxiom(format!(
                        "bottom slice distance differs from d_a at ({p},{q})"
                    )));
                }
                if self.distance((top, p), (top, q)) != self.d_b.d[p][q] {
                    return Err(Error::MetricAxiom(format!(
                        "top slice distance differs from d_b at ({p},{q})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `d'(z1,z2) <= |t1-t2| + λ d0(p1,p2)` for every pair, given a reference
    /// metric d0 with ratio bound λ for both inputs.  `tol` absorbs rounding
    /// in floating mode; pass zero for exact scalars.
    pub fn verify_reference_upper_bound(
        &self,
        d0: &FiniteMetricSpace<T>,
        lambda: T,
        tol: T,
    ) -> Result<()> {
        self.d_a.check_same_labels(d0)?;
        for z1 in self.points() {
            for z2 in self.points() {
                let dt = (self.t_levels[z1.0].clone() - self.t_levels[z2.0].clone()).abs();
                let cap = dt + lambda.clone() * d0.d[z1.1][z2.1].clone() + tol.clone();
                if self.distance(z1, z2) > cap {
                    return Err(Error::MetricAxiom(format!(
                        "reference bound violated at {z1:?},{z2:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Hausdorff distance between two subsets of Z under the glued metric.
    pub fn hausdorff_distance(&self, a: &[GluedPoint], b: &[GluedPoint]) -> Result<T> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet("hausdorff_distance"));
        }
        let directed = |from: &[GluedPoint], to: &[GluedPoint]| -> T {
            let mut worst = T::zero();
            for &x in from {
                let mut best: Option<T> = None;
                for &y in to {
                    let d = self.distance(x, y);
                    best = Some(match best {
                        None => d,
                        Some(b) => tmin(b, d),
                    });
                }
                worst = tmax(worst, best.unwrap());
            }
            worst
        };
        Ok(tmax(directed(a, b), directed(b, a)))
    }

    /// The Gromov-Hausdorff upper bound 2ε realized by the end slices.
    pub fn gh_bound(&self) -> T {
        T::from_i64(2).unwrap() * self.epsilon.clone()
    }
}

/// Intrinsic-flat upper bound `2^{(n+1)/2} λ^{n+1} · 2ε · M` for an
/// n-dimensional current of mass `M` under the reference metric.
pub fn flat_bound(n: usize, lambda: f64, epsilon: f64, mass: f64) -> f64 {
    2.0f64.powf((n as f64 + 1.0) / 2.0) * lambda.powi(n as i32 + 1) * 2.0 * epsilon * mass
}

/// Mass of the product filling current `[-ε,ε] × T` under the product
/// metric: `2ε · M(T)`.
pub fn product_filling_mass(epsilon: f64, mass: f64) -> f64 {
    2.0 * epsilon * mass
}

/// Scaling law of current mass under metric rescaling: `M ↦ λⁿ M`.
pub fn mass_rescale(mass: f64, lambda: f64, n: usize) -> f64 {
    lambda.powi(n as i32) * mass
}

/// Mass of an n-dimensional current under a named metric.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentMass {
    pub dimension: usize,
    pub value: f64,
    pub metric: String,
}

impl CurrentMass {
    pub fn new(dimension: usize, value: f64, metric: impl Into<String>) -> Result<Self> {
        if value < 0.0 {
            return Err(Error::InvalidParameter("current mass must be >= 0".into()));
        }
        Ok(Self {
            dimension,
            value,
            metric: metric.into(),
        })
    }

    pub fn rescaled(&self, lambda: f64, new_name: impl Into<String>) -> Self {
        Self {
            dimension: self.dimension,
            value: mass_rescale(self.value, lambda, self.dimension),
            metric: new_name.into(),
        }
    }
}

/// The truncated swap example: X_k = {0, 1/2, ..., 1/2^k} ∪ {1} with
/// `d_a = |p - q|` and `d_b = |F(p) - F(q)|`, F swapping 0 and 1.
#[derive(Debug, Clone)]
pub struct NoncompleteFixture {
    pub k: u32,
    pub values: Vec<Rational64>,
    pub d_a: FiniteMetricSpace<Rational64>,
    pub d_b: FiniteMetricSpace<Rational64>,
}

/// Diagnostics of the glued swap example: the mid-slice sequence is Cauchy
/// while every candidate limit stays at least `min_candidate_margin` away.
#[derive(Debug, Clone)]
pub struct NoncompleteReport {
    pub epsilon: Rational64,
    /// d'(z_i, z_m) for consecutive mid-slice points, shrinking like 2^-i.
    pub cauchy_tail: Vec<Rational64>,
    /// min over mid-slice z_i and all z of the four non-through cases; the
    /// truncated analog of the example's displayed bounds, equal to ε_k.
    pub cross_case_min: Rational64,
    /// min over the two genuinely slice-crossing cases, at least 2 ε_k.
    pub crossing_case_min: Rational64,
    /// min over candidate limit points of max(d'(z_{k-1}, ·), d'(z_k, ·)).
    pub min_candidate_margin: Rational64,
    /// smallest positive gap of the point set, the honest discrete floor.
    pub min_positive_gap: Rational64,
}

pub fn noncomplete_fixture(k: u32) -> Result<NoncompleteFixture> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "the swap fixture needs k >= 2".into(),
        ));
    }
    let mut values: Vec<Rational64> = Vec::new();
    values.push(Rational64::zero());
    for i in 1..=k {
        values.push(Rational64::new(1, 1i64 << i));
    }
    values.push(Rational64::from_integer(1));
    let labels: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    let swap = |v: Rational64| -> Rational64 {
        if v.is_zero() {
            Rational64::from_integer(1)
        } else if v == Rational64::from_integer(1) {
            Rational64::zero()
        } else {
            v
        }
    };
    let m = values.len();
    let mut da = vec![vec![Rational64::zero(); m]; m];
    let mut db = vec![vec![Rational64::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            da[i][j] = (values[i] - values[j]).abs();
            db[i][j] = (swap(values[i]) - swap(values[j])).abs();
        }
    }
    let d_a = FiniteMetricSpace::validate_metric(labels.clone(), da, Rational64::zero())?;
    let d_b = FiniteMetricSpace::validate_metric(labels, db, Rational64::zero())?;
    Ok(NoncompleteFixture { k, values, d_a, d_b })
}

impl NoncompleteFixture {
    /// Glue the two metrics (odd t_count keeps the exact mid-slice t = 0)
    /// and report the non-completeness diagnostics.
    pub fn analyze(&self, t_count: usize) -> Result<(GluedSpace<Rational64>, NoncompleteReport)> {
        let t_count = if t_count % 2 == 0 { t_count + 1 } else { t_count };
        let z = glue(self.d_a.clone(), self.d_b.clone(), t_count)?;
        let mid = z.t_levels.len() / 2;
        debug_assert!(z.t_levels[mid].is_zero());
        // mid-slice points above 1/2^i, i = 1..k (indices 1..=k in values)
        let mid_points: Vec<GluedPoint> = (1..=self.k as usize).map(|i| (mid, i)).collect();
        let mut cauchy_tail = Vec::new();
        for w in mid_points.windows(2) {
            cauchy_tail.push(z.distance(w[0], w[1]));
        }
        let mut cross_case_min: Option<Rational64> = None;
        let mut crossing_case_min: Option<Rational64> = None;
        for &zi in &mid_points {
            for zz in z.points() {
                let c = z.cases(zi, zz);
                for v in &c[1..] {
                    cross_case_min = Some(match cross_case_min {
                        None => *v,
                        Some(b) => tmin(b, *v),
                    });
                }
                for v in &c[3..] {
                    crossing_case_min = Some(match crossing_case_min {
                        None => *v,
                        Some(b) => tmin(b, *v),
                    });
                }
            }
        }
        // candidate limits: every point of Z; the margin is how far the tail
        // of the mid-slice sequence stays from it
        let last = mid_points[mid_points.len() - 1];
        let prev = mid_points[mid_points.len() - 2];
        let mut min_candidate_margin: Option<Rational64> = None;
        for zz in z.points() {
            let margin = tmax(z.distance(prev, zz), z.distance(last, zz));
            min_candidate_margin = Some(match min_candidate_margin {
                None => margin,
                Some(b) => tmin(b, margin),
            });
        }
        let mut min_positive_gap: Option<Rational64> = None;
        for i in 0..self.values.len() {
            for j in 0..self.values.len() {
                if i != j {
                    let gap = (self.values[i] - self.values[j]).abs();
                    min_positive_gap = Some(match min_positive_gap {
                        None => gap,
                        Some(b) => tmin(b, gap),
                    });
                }
            }
        }
        Ok((
            z,
            NoncompleteReport {
                epsilon: self.epsilon(),
                cauchy_tail,
                cross_case_min: cross_case_min.unwrap(),
                crossing_case_min: crossing_case_min.unwrap(),
                min_candidate_margin: min_candidate_margin.unwrap(),
                min_positive_gap: min_positive_gap.unwrap(),
            },
        ))
    }

    pub fn epsilon(&self) -> Rational64 {
        uniform_distance(&self.d_a, &self.d_b).unwrap()
    }
}

/// Deterministic random metric on `size` points with integer distances in
/// [1, max_d], metrized by shortest-path closure (so every triangle
/// inequality holds exactly).
pub fn random_rational_metric(
    rng: &mut SplitMix64,
    size: usize,
    max_d: i64,
) -> FiniteMetricSpace<Rational64> {
    let mut d = vec![vec![0i64; size]; size];
    for i in 0..size {
        for j in (i + 1)..size {
            let v = rng.next_range(1, max_d);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    // Floyd-Warshall closure
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let labels = (0..size).map(|i| format!("p{i}")).collect();
    let matrix = d
        .into_iter()
        .map(|row| row.into_iter().map(Rational64::from_integer).collect())
        .collect();
    FiniteMetricSpace::validate_metric(labels, matrix, Rational64::zero()).unwrap()
}

/// Random Euclidean metric: distances of a random point cloud in Eⁿ.
pub fn random_euclidean_metric(
    rng: &mut SplitMix64,
    size: usize,
    dim: usize,
    scale: f64,
) -> FiniteMetricSpace<f64> {
    let pts: Vec<Vec<f64>> = (0..size)
        .map(|_| (0..dim).map(|_| scale * rng.next_f64()).collect())
        .collect();
    let labels = (0..size).map(|i| format!("p{i}")).collect();
    let matrix: Vec<Vec<f64>> = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::validate_metric(labels, matrix, 1e-12).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    fn small_space(ds: &[&[i64]]) -> FiniteMetricSpace<Rational64> {
        let n = ds.len();
        let labels = (0..n).map(|i| format!("x{i}")).collect();
        let matrix = ds
            .iter()
            .map(|row| row.iter().map(|&v| Rational64::from_integer(v)).collect())
            .collect();
        FiniteMetricSpace::validate_metric(labels, matrix, Rational64::zero()).unwrap()
    }

    #[test]
    fn two_point_space_is_valid() {
        let s = small_space(&[&[0, 1], &[1, 0]]);
        assert_eq!(s.distance(0, 1), Rational64::from_integer(1));
    }

    #[test]
    fn triangle_violation_rejected() {
        let labels = vec!["a".into(), "b".into(), "c".into()];
        let matrix = vec![
            vec![rat(0, 1), rat(1, 1), rat(3, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(3, 1), rat(1, 1), rat(0, 1)],
        ];
        assert!(matches!(
            FiniteMetricSpace::validate_metric(labels, matrix, Rational64::zero()),
            Err(Error::MetricAxiom(_))
        ));
    }

    #[test]
    fn euclidean_clouds_always_validate() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let s = random_euclidean_metric(&mut rng, 9, 3, 10.0);
            assert_eq!(s.len(), 9);
        }
    }

    #[test]
    fn uniform_distance_cases() {
        let a = small_space(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        assert!(uniform_distance(&a, &a).unwrap().is_zero());
        let b = small_space(&[&[0, 2, 4], &[2, 0, 2], &[4, 2, 0]]);
        // d_b = 2 d_a with diam(d_a) = 2: sup |d_a - d_b| = 2
        assert_eq!(uniform_distance(&a, &b).unwrap(), rat(2, 1));
    }

    #[test]
    fn ratio_bound_cases() {
        let a = small_space(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        assert_eq!(ratio_bound(&a, &a).unwrap(), rat(1, 1));
        let b = small_space(&[&[0, 3, 6], &[3, 0, 3], &[6, 3, 0]]);
        assert_eq!(ratio_bound(&a, &b).unwrap(), rat(3, 1));
        assert_eq!(ratio_bound(&b, &a).unwrap(), rat(3, 1));
    }

    #[test]
    fn glue_endpoint_slices_are_isometric() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..10 {
            let a = random_rational_metric(&mut rng, 6, 20);
            let b = random_rational_metric(&mut rng, 6, 20);
            let z = glue(a, b, 5).unwrap();
            z.verify_endpoint_isometry().unwrap();
            z.verify_metric_axioms(Rational64::zero()).unwrap();
        }
    }

    #[test]
    fn vertical_segment_costs_at_most_two_epsilon() {
        let mut rng = SplitMix64::new(3);
        let a = random_rational_metric(&mut rng, 7, 30);
        let b = random_rational_metric(&mut rng, 7, 30);
        let z = glue(a, b, 4).unwrap();
        let top = z.t_levels.len() - 1;
        for p in 0..z.base_len() {
            assert!(z.distance((0, p), (top, p)) <= z.gh_bound());
        }
        let hd = z
            .hausdorff_distance(&z.bottom_slice(), &z.top_slice())
            .unwrap();
        assert!(hd <= z.gh_bound());
        // identical subsets are at Hausdorff distance zero
        let same = z
            .hausdorff_distance(&z.bottom_slice(), &z.bottom_slice())
            .unwrap();
        assert!(same.is_zero());
        assert!(z.hausdorff_distance(&[], &z.top_slice()).is_err());
    }

    #[test]
    fn degenerate_glue_of_equal_metrics() {
        let a = small_space(&[&[0, 2], &[2, 0]]);
        let z = glue(a.clone(), a, 6).unwrap();
        assert!(z.epsilon.is_zero());
        assert_eq!(z.t_levels.len(), 1);
        assert_eq!(z.distance((0, 0), (0, 1)), rat(2, 1));
    }

    #[test]
    fn glued_two_point_spaces_match_hand_enumeration() {
        // two-point set at distance 1 vs distance 3: ε = 2
        let a = small_space(&[&[0, 1], &[1, 0]]);
        let b = small_space(&[&[0, 3], &[3, 0]]);
        let z = glue(a, b, 2).unwrap();
        assert_eq!(z.epsilon, rat(2, 1));
        // bottom slice keeps distance 1, top keeps 3
        assert_eq!(z.distance((0, 0), (0, 1)), rat(1, 1));
        assert_eq!(z.distance((1, 0), (1, 1)), rat(3, 1));
        // same base point across slices: min(d=2ε+... ) = 2ε? through-case:
        // |t1-t2| + max(0,0)·... = 4? cases: through = 4 + 0, bottom =
        // 0+4+0 = 4, top = 4, bottom-top = 0+0+4+min(1+3,0+0,...)
        // = 4 + min over p of d_a(0,p)+d_b(p,0) = 4 + 0 = 4
        assert_eq!(z.distance((0, 0), (1, 0)), rat(4, 1));
        // cross pair: bottom 0 to top 1: through = 4+3=7, bottom = 0+4+1=5,
        // top = 4+0+3=7, bottom-top = 0+0+4+min_p(d_a(0,p)+d_b(p,1)) =
        // 4+min(0+3,1+0) = 5, top-bottom = 4+0+4+min_p(d_b(0,p)+d_a(p,1)) =
        // 8+min(0+1,3+0) = 9 → 5
        assert_eq!(z.distance((0, 0), (1, 1)), rat(5, 1));
    }

    #[test]
    fn reference_upper_bound_holds() {
        let mut rng = SplitMix64::new(23);
        let d0 = random_rational_metric(&mut rng, 6, 12);
        // build d_a, d_b as clamped multiples of d0 to keep the ratio bound
        let scale_up = |s: &FiniteMetricSpace<Rational64>,
                        num: i64,
                        den: i64|
         -> FiniteMetricSpace<Rational64> {
            let m = s
                .matrix()
                .iter()
                .map(|row| row.iter().map(|v| *v * rat(num, den)).collect())
                .collect();
            FiniteMetricSpace::validate_metric(s.labels().to_vec(), m, Rational64::zero())
                .unwrap()
        };
        let d_a = scale_up(&d0, 3, 2);
        let d_b = scale_up(&d0, 2, 3);
        let lambda = tmax(ratio_bound(&d0, &d_a).unwrap(), ratio_bound(&d0, &d_b).unwrap());
        assert_eq!(lambda, rat(3, 2));
        let z = glue(d_a, d_b, 5).unwrap();
        z.verify_reference_upper_bound(&d0, lambda, Rational64::zero()).unwrap();
    }

    #[test]
    fn flat_bound_printed_values() {
        // n=1, λ=1, ε=0.5, M=1 → 2
        assert!((flat_bound(1, 1.0, 0.5, 1.0) - 2.0).abs() < 1e-15);
        // n=3, λ=2, ε=0.1, M=5 → 4 · 16 · 0.2 · 5 = 64
        assert!((flat_bound(3, 2.0, 0.1, 5.0) - 64.0).abs() < 1e-12);
        // ε = 0
        assert_eq!(flat_bound(3, 2.0, 0.0, 5.0), 0.0);
    }

    #[test]
    fn product_mass_and_consistency() {
        assert_eq!(product_filling_mass(0.0, 3.0), 0.0);
        assert_eq!(product_filling_mass(1.0, 3.0), 6.0);
        // flat_bound = 2^{(n+1)/2} λ^{n+1} · product_filling_mass
        let (n, lambda, eps, mass) = (3usize, 1.7f64, 0.3f64, 2.2f64);
        let a = flat_bound(n, lambda, eps, mass);
        let b = 2.0f64.powf((n as f64 + 1.0) / 2.0)
            * lambda.powi(n as i32 + 1)
            * product_filling_mass(eps, mass);
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn mass_rescaling_laws() {
        assert_eq!(mass_rescale(1.0, 2.0, 3), 8.0);
        assert_eq!(mass_rescale(5.0, 1.0, 4), 5.0);
        let m = mass_rescale(mass_rescale(3.0, 2.0, 3), 0.5, 3);
        assert!((m - 3.0).abs() < 1e-12);
        let c = CurrentMass::new(3, 1.5, "d0").unwrap();
        assert_eq!(c.rescaled(2.0, "2d0").value, 12.0);
    }

    #[test]
    fn noncomplete_fixture_epsilon() {
        // sup |d_a - d_b| at the pair (1/2^k, 0): 1 - 2^{1-k}
        for k in 2..=8u32 {
            let fx = noncomplete_fixture(k).unwrap();
            let want = Rational64::from_integer(1) - rat(2, 1i64 << k);
            assert_eq!(fx.epsilon(), want, "k = {k}");
        }
    }

    #[test]
    fn noncomplete_mid_slice_distances() {
        let fx = noncomplete_fixture(5).unwrap();
        let (z, rep) = fx.analyze(5).unwrap();
        // mid-slice pairs: d'((0, 1/2^i), (0, 1/2^m)) = |1/2^i - 1/2^m|
        let mid = z.t_levels.len() / 2;
        for i in 1..=5usize {
            for m in 1..=5usize {
                let want = (fx.values[i] - fx.values[m]).abs();
                assert_eq!(z.distance((mid, i), (mid, m)), want);
            }
        }
        // via-bottom/via-top cases bottom out exactly at the truncated ε_k,
        // the slice-crossing cases stay at least 2 ε_k >= 1
        assert_eq!(rep.cross_case_min, fx.epsilon());
        assert!(rep.crossing_case_min >= Rational64::from_integer(1));
        assert!(rep.crossing_case_min >= rep.epsilon * 2);
        // every candidate limit misses the tail by at least the minimal gap
        assert!(rep.min_candidate_margin >= rep.min_positive_gap);
        assert!(rep.min_positive_gap > Rational64::zero());
    }
}
