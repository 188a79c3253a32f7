//! Check-time scaling on synthetic corridors: a random convex hull stands in
//! for the kinematic domain over fractal terrain.

use std::time::Instant;

use nalgebra::{Point2, Point3, Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::FeasibleSet;
use crate::error::{invalid, Result};
use crate::reach::{check_with_order, trace_border, CellSet, CheckOrder, IntersectionRegion, RegionConfig, Verdict};
use crate::surface::{default_keypoints, KeypointAuxiliary};
use crate::terrain::{generate_fractal_scene, LayeredGridMap};

/// Smallest accepted case count for a fit.
pub const MIN_CASES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Plane {
    normal: Vector3<f64>,
    offset: f64,
}

/// Convex polyhedron as an intersection of half-spaces `n . x <= d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexHull {
    planes: Vec<Plane>,
    lo: Point3<f64>,
    hi: Point3<f64>,
}

impl ConvexHull {
    /// Hull of a point cloud by facet enumeration: a plane through three
    /// points is a facet when no point lies strictly beyond it. Cubic in the
    /// point count, which stays in the tens here.
    pub fn from_points(points: &[Point3<f64>]) -> Result<Self> {
        if points.len() < 4 {
            return Err(invalid(format!("hull needs at least 4 points, got {}", points.len())));
        }
        if points.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(invalid("hull points must be finite"));
        }
        let scale = points.iter().map(|p| p.coords.amax()).fold(1.0, f64::max);
        let eps = 1e-10 * scale;
        let mut planes: Vec<Plane> = Vec::new();
        let n = points.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (points[i], points[j], points[k]);
                    let cross = (b - a).cross(&(c - a));
                    let norm = cross.norm();
                    if norm < eps {
                        continue;
                    }
                    let normal = cross / norm;
                    let offset = normal.dot(&a.coords);
                    let (mut above, mut below) = (false, false);
                    for p in points {
                        let s = normal.dot(&p.coords) - offset;
                        above |= s > eps;
                        below |= s < -eps;
                        if above && below {
                            break;
                        }
                    }
                    let plane = match (above, below) {
                        (false, true) => Plane { normal, offset },
                        (true, false) => Plane { normal: -normal, offset: -offset },
                        _ => continue,
                    };
                    let duplicate = planes
                        .iter()
                        .any(|q| (q.normal - plane.normal).norm() < 1e-9 && (q.offset - plane.offset).abs() < eps);
                    if !duplicate {
                        planes.push(plane);
                    }
                }
            }
        }
        if planes.len() < 4 {
            return Err(invalid("hull points are coplanar"));
        }
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        Ok(Self { planes, lo, hi })
    }

    pub fn facets(&self) -> usize {
        self.planes.len()
    }

    /// Axis-aligned bounds `(min, max)`.
    pub fn bounds(&self) -> (Point3<f64>, Point3<f64>) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        self.planes.iter().all(|h| h.normal.dot(&p.coords) <= h.offset + 1e-12)
    }
}

/// Free space inside a convex hull.
pub struct HullDomain<'a> {
    pub hull: ConvexHull,
    pub map: &'a LayeredGridMap,
}

impl FeasibleSet for HullDomain<'_> {
    fn contains(&self, s: &Point3<f64>) -> bool {
        self.hull.contains(s) && !self.map.is_occupied(s).unwrap_or(true)
    }

    fn xy_bounds(&self) -> (Point2<f64>, Point2<f64>) {
        let (lo, hi) = self.hull.bounds();
        (lo.xy(), hi.xy())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    /// Square grid side in cells.
    pub grid: usize,
    pub resolution: f64,
    /// Peak-to-peak fractal ground amplitude in meters.
    pub amplitude: f64,
    /// Random hull points, besides the caps around both ends.
    pub hull_points: usize,
    /// Timed runs per case; the median is kept.
    pub repetitions: usize,
    /// Border-first by default, so every timed check includes the border
    /// search whose cost is under study.
    pub order: CheckOrder,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self { grid: 60, resolution: 0.05, amplitude: 0.6, hull_points: 16, repetitions: 5, order: CheckOrder::BorderFirst }
    }
}

/// One corridor query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCase {
    pub seed: u64,
    /// Intersection border length in cells.
    pub border_length: usize,
    pub check_time_ms: f64,
    pub reachable: bool,
    pub verdict: Verdict,
}

/// Least-squares line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl LinearFit {
    /// `None` with fewer than two points or no spread in `x`.
    pub fn fit(xs: &[f64], ys: &[f64]) -> Option<Self> {
        let n = xs.len().min(ys.len());
        if n < 2 {
            return None;
        }
        let (xs, ys) = (&xs[..n], &ys[..n]);
        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if sxx <= 0.0 {
            return None;
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
        Some(Self { slope, intercept, r_squared })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub seed: u64,
    pub config: ScalingConfig,
    pub cases: Vec<ScalingCase>,
    pub fit: Option<LinearFit>,
    pub median_ms: f64,
    pub p95_ms: f64,
}

impl ScalingReport {
    /// Raw pairs, one per line, with the fit as a trailing comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("border_length,check_time_ms\n");
        for c in &self.cases {
            out.push_str(&format!("{},{:.6}\n", c.border_length, c.check_time_ms));
        }
        if let Some(f) = &self.fit {
            out.push_str(&format!("# fit slope={:.6e} intercept={:.6e} r2={:.4}\n", f.slope, f.intercept, f.r_squared));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Corridor geometry for one case: terrain, hull and end points.
pub struct Corridor {
    pub map: LayeredGridMap,
    pub hull: ConvexHull,
    pub p: Point3<f64>,
    pub q: Point3<f64>,
}

/// Random corridor between two ground points. The hull holds small cubes
/// around both ends, so the end points are interior; its top and bottom
/// hover around the terrain, which carves holes where hills break through.
pub fn random_corridor(seed: u64, config: &ScalingConfig) -> Result<Corridor> {
    if config.hull_points < 4 {
        return Err(invalid("corridor hull needs at least 4 random points"));
    }
    let map = generate_fractal_scene(seed, (config.grid, config.grid), config.resolution, config.amplitude, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5851_F42D_4C95_7F2D);
    let side = config.grid as f64 * config.resolution;
    let margin = 0.1 * side;
    let span = side - 2.0 * margin;
    let length = rng.gen_range(0.15..0.8) * span;
    let width = rng.gen_range(0.05..0.25) * span;
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let axis = Vector2::new(angle.cos(), angle.sin());
    let normal = Vector2::new(-axis.y, axis.x);
    // Center range keeping both ends and the full width inside the margin.
    let reach = 0.5 * length * axis.abs() + 0.5 * width * normal.abs();
    let lo = Vector2::new(margin + reach.x, margin + reach.y);
    let hi = Vector2::new(side - margin - reach.x, side - margin - reach.y);
    let center = Point2::new(
        if lo.x < hi.x { rng.gen_range(lo.x..hi.x) } else { 0.5 * side },
        if lo.y < hi.y { rng.gen_range(lo.y..hi.y) } else { 0.5 * side },
    );
    let a = center - 0.5 * length * axis;
    let b = center + 0.5 * length * axis;
    let p = Point3::new(a.x, a.y, map.ground_at(a)?);
    let q = Point3::new(b.x, b.y, map.ground_at(b)?);

    let floor = p.z.min(q.z) - 0.1;
    let roof = p.z.max(q.z);
    let mut points = Vec::with_capacity(config.hull_points + 16);
    for _ in 0..config.hull_points {
        let t = rng.gen_range(0.0..1.0);
        let lateral = rng.gen_range(-0.5..0.5) * width;
        let xy = a + t * (b - a) + lateral * normal;
        let z = if rng.gen_bool(0.5) { floor - rng.gen_range(0.0..0.1) } else { roof + rng.gen_range(0.02..0.3) };
        points.push(Point3::new(xy.x, xy.y, z));
    }
    let cap = config.resolution;
    for end in [p, q] {
        for k in 0..8 {
            let offset = |bit: usize| if k & bit == 0 { -cap } else { cap };
            points.push(end + Vector3::new(offset(1), offset(2), offset(4)));
        }
    }
    let hull = ConvexHull::from_points(&points)?;
    Ok(Corridor { map, hull, p, q })
}

/// Times one corridor query. The region is rebuilt for every repetition,
/// so memoized membership never carries over.
pub fn run_case(seed: u64, config: &ScalingConfig) -> Result<ScalingCase> {
    let corridor = random_corridor(seed, config)?;
    let dom = HullDomain { hull: corridor.hull.clone(), map: &corridor.map };
    let (p, q) = (corridor.p, corridor.q);
    let region = || -> Result<_> {
        let surface = KeypointAuxiliary::new(&corridor.map, default_keypoints(&p, &q, 3), 1.0)?;
        Ok(IntersectionRegion::new(&corridor.map, &dom, surface, RegionConfig::default()))
    };
    let mut times = Vec::with_capacity(config.repetitions.max(1));
    let mut last = None;
    for _ in 0..config.repetitions.max(1) {
        let started = Instant::now();
        let r = region()?;
        let result = check_with_order(&r, &p, &q, config.order)?;
        times.push(started.elapsed().as_secs_f64() * 1e3);
        last = Some(result);
    }
    let result = last.expect("at least one repetition");
    let border_length = match &result.border {
        Some(b) => b.len(),
        None => {
            let r = region()?;
            if r.is_member(result.p_cell) {
                trace_border(&r, result.p_cell)?.len()
            } else {
                0
            }
        }
    };
    times.sort_by(f64::total_cmp);
    Ok(ScalingCase {
        seed,
        border_length,
        check_time_ms: times[times.len() / 2],
        reachable: result.reachable,
        verdict: result.verdict,
    })
}

fn quantile(sorted: &[f64], f: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    sorted[((sorted.len() - 1) as f64 * f).round() as usize]
}

/// Runs `num_cases` corridor queries one after another on the calling
/// thread and fits check time against border length.
pub fn run_scaling(num_cases: usize, seed: u64, config: &ScalingConfig) -> Result<ScalingReport> {
    if num_cases < MIN_CASES {
        return Err(invalid(format!("scaling needs at least {MIN_CASES} cases, got {num_cases}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(num_cases);
    for _ in 0..num_cases {
        cases.push(run_case(rng.gen(), config)?);
    }
    let xs: Vec<f64> = cases.iter().map(|c| c.border_length as f64).collect();
    let ys: Vec<f64> = cases.iter().map(|c| c.check_time_ms).collect();
    let fit = LinearFit::fit(&xs, &ys);
    let mut sorted = ys;
    sorted.sort_by(f64::total_cmp);
    Ok(ScalingReport {
        seed,
        config: *config,
        median_ms: quantile(&sorted, 0.5),
        p95_ms: quantile(&sorted, 0.95),
        cases,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> Vec<Point3<f64>> {
        (0..8).map(|k| Point3::new((k & 1) as f64, ((k >> 1) & 1) as f64, ((k >> 2) & 1) as f64)).collect()
    }

    #[test]
    fn cube_hull_has_six_faces() {
        let mut pts = cube();
        pts.push(Point3::new(0.5, 0.5, 0.5));
        let hull = ConvexHull::from_points(&pts).unwrap();
        assert_eq!(hull.facets(), 6);
        assert!(hull.contains(&Point3::new(0.2, 0.9, 0.5)));
        assert!(hull.contains(&Point3::new(1.0, 1.0, 1.0)));
        assert!(!hull.contains(&Point3::new(1.01, 0.5, 0.5)));
    }

    #[test]
    fn coplanar_points_rejected() {
        let pts: Vec<_> = (0..6).map(|k| Point3::new(k as f64, (k * k) as f64, 0.0)).collect();
        assert!(ConvexHull::from_points(&pts).is_err());
        assert!(ConvexHull::from_points(&cube()[..3]).is_err());
    }

    #[test]
    fn exact_line_fit() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let f = LinearFit::fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(LinearFit::fit(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn corridor_ends_are_feasible() {
        let cfg = ScalingConfig::default();
        for seed in 0..20 {
            let c = random_corridor(seed, &cfg).unwrap();
            let dom = HullDomain { hull: c.hull.clone(), map: &c.map };
            assert!(dom.contains(&c.p) && dom.contains(&c.q), "seed {seed}");
        }
    }

    #[test]
    fn flat_corridor_is_reachable() {
        let cfg = ScalingConfig { amplitude: 0.0, repetitions: 1, ..ScalingConfig::default() };
        for seed in 0..10 {
            let case = run_case(seed, &cfg).unwrap();
            assert!(case.reachable, "seed {seed}: {:?}", case.verdict);
        }
    }

    #[test]
    fn too_few_cases_rejected() {
        assert!(run_scaling(10, 0, &ScalingConfig::default()).is_err());
    }
}
