//! Layered elevation map (ground and ceiling) and procedural scenes.

use nalgebra::{Point2, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{CellIndex, GridGeometry};

/// Height of the ceiling plane when a scene has no overhead obstructions.
pub const DEFAULT_CEILING: f64 = 10.0;

/// Stand-in for an unbounded footprint extent (kept finite so specs serialize to JSON).
const UNBOUNDED: f64 = 1.0e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Ground,
    Ceiling,
}

/// Ground and ceiling elevations on a regular grid.
///
/// The occupied domain is the open set of points strictly below the ground or
/// strictly above the ceiling.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredGridMap {
    geometry: GridGeometry,
    ground: Vec<f64>,
    ceiling: Vec<f64>,
}

impl LayeredGridMap {
    pub fn new(geometry: GridGeometry, ground: Vec<f64>, ceiling: Vec<f64>) -> Result<Self> {
        let n = geometry.len();
        if ground.len() != n || ceiling.len() != n {
            return Err(invalid(format!(
                "layer sizes {}/{} do not match grid of {n} cells",
                ground.len(),
                ceiling.len()
            )));
        }
        for (k, (g, c)) in ground.iter().zip(&ceiling).enumerate() {
            if !g.is_finite() || !c.is_finite() {
                return Err(invalid(format!("non-finite elevation at cell {k}")));
            }
            if g >= c {
                return Err(invalid(format!("ground {g} is not below ceiling {c} at cell {k}")));
            }
        }
        Ok(Self { geometry, ground, ceiling })
    }

    pub fn flat(geometry: GridGeometry, ground: f64, ceiling: f64) -> Result<Self> {
        let n = geometry.len();
        Self::new(geometry, vec![ground; n], vec![ceiling; n])
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn layer(&self, layer: Layer) -> &[f64] {
        match layer {
            Layer::Ground => &self.ground,
            Layer::Ceiling => &self.ceiling,
        }
    }

    /// Raw cell value (nearest-cell semantics). Panics outside the grid.
    #[inline]
    pub fn cell(&self, layer: Layer, c: CellIndex) -> f64 {
        self.layer(layer)[self.geometry.flat(c)]
    }

    #[inline]
    pub fn ground_cell(&self, c: CellIndex) -> f64 {
        self.ground[self.geometry.flat(c)]
    }

    #[inline]
    pub fn ceiling_cell(&self, c: CellIndex) -> f64 {
        self.ceiling[self.geometry.flat(c)]
    }

    /// Bilinear elevation of a layer. Points in the half-cell border around the
    /// outermost centers use the edge values; anything further out is an error.
    pub fn elevation_at(&self, layer: Layer, p: Point2<f64>) -> Result<f64> {
        if !self.geometry.contains_point(&p) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        Ok(self.bilinear(self.layer(layer), &p))
    }

    pub fn ground_at(&self, p: Point2<f64>) -> Result<f64> {
        self.elevation_at(Layer::Ground, p)
    }

    pub(crate) fn bilinear(&self, values: &[f64], p: &Point2<f64>) -> f64 {
        self.geometry.bilinear(values, p)
    }

    /// Whether `p` lies in the open occupied domain.
    pub fn is_occupied(&self, p: &Point3<f64>) -> Result<bool> {
        let xy = Point2::new(p.x, p.y);
        if !self.geometry.contains_point(&xy) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let g = self.bilinear(&self.ground, &xy);
        let c = self.bilinear(&self.ceiling, &xy);
        Ok(p.z < g || p.z > c)
    }

    pub fn ground_range(&self) -> (f64, f64) {
        min_max(&self.ground)
    }

    pub fn ceiling_range(&self) -> (f64, f64) {
        min_max(&self.ceiling)
    }

    /// Smallest vertical gap between ground and ceiling.
    pub fn min_clearance(&self) -> f64 {
        self.ground
            .iter()
            .zip(&self.ceiling)
            .map(|(g, c)| c - g)
            .fold(f64::INFINITY, f64::min)
    }

    /// FNV-1a over the geometry and both layers; ties derived products (such
    /// as a distance field) to the exact snapshot they were built from.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::default();
        let g = &self.geometry;
        h.write_f64(g.resolution);
        h.write_f64(g.origin[0]);
        h.write_f64(g.origin[1]);
        h.write_u64(g.rows as u64);
        h.write_u64(g.cols as u64);
        for v in self.ground.iter().chain(&self.ceiling) {
            h.write_f64(*v);
        }
        h.finish()
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[derive(Default)]
struct Fnv(u64);

impl Fnv {
    fn write_u64(&mut self, v: u64) {
        if self.0 == 0 {
            self.0 = 0xcbf2_9ce4_8422_2325;
        }
        for b in v.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    fn write_f64(&mut self, v: f64) {
        self.write_u64(v.to_bits());
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// An axis-aligned obstruction inserted into a generated scene. Heights are
/// absolute elevations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Obstacle {
    /// Raises the ground to `top` over the footprint.
    GroundBox { min: [f64; 2], max: [f64; 2], top: f64 },
    /// Lowers the ceiling to `bottom` over the footprint.
    CeilingBox { min: [f64; 2], max: [f64; 2], bottom: f64 },
}

impl Obstacle {
    fn covers(&self, p: &Point2<f64>) -> bool {
        let (min, max) = match self {
            Obstacle::GroundBox { min, max, .. } | Obstacle::CeilingBox { min, max, .. } => (min, max),
        };
        p.x >= min[0] && p.x <= max[0] && p.y >= min[1] && p.y <= max[1]
    }
}

/// Obstructions to stamp onto the fractal ground.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BarrierSpec {
    /// Ceiling plane height where no ceiling box applies.
    pub ceiling: Option<f64>,
    pub obstacles: Vec<Obstacle>,
}

impl BarrierSpec {
    /// A wall spanning the whole map in y, centered at `x_center`.
    pub fn wall(x_center: f64, width: f64, height: f64) -> Self {
        Self {
            ceiling: None,
            obstacles: vec![Obstacle::GroundBox {
                min: [x_center - 0.5 * width, -UNBOUNDED],
                max: [x_center + 0.5 * width, UNBOUNDED],
                top: height,
            }],
        }
    }

    /// Ground bar with an overhead clamp on either side: the swing foot has to
    /// thread between the bar top and the clamp.
    pub fn u_clamp(x_center: f64, bar_width: f64, bar_height: f64, gap: f64, clamp_depth: f64) -> Self {
        let h = 0.5 * bar_width;
        Self {
            ceiling: None,
            obstacles: vec![
                Obstacle::GroundBox {
                    min: [x_center - h, -UNBOUNDED],
                    max: [x_center + h, UNBOUNDED],
                    top: bar_height,
                },
                Obstacle::CeilingBox {
                    min: [x_center - h - clamp_depth, -UNBOUNDED],
                    max: [x_center + h + clamp_depth, UNBOUNDED],
                    bottom: bar_height + gap,
                },
            ],
        }
    }

    pub fn with_obstacles(obstacles: Vec<Obstacle>) -> Self {
        Self { ceiling: None, obstacles }
    }
}

/// Multi-octave value noise ground (4 octaves, persistence 0.5) scaled so the
/// peak-to-peak ground relief is at most `amplitude`, with optional
/// obstructions. Deterministic in `seed`.
pub fn generate_fractal_scene(
    seed: u64,
    size: (usize, usize),
    resolution: f64,
    amplitude: f64,
    barrier: Option<&BarrierSpec>,
) -> Result<LayeredGridMap> {
    let (rows, cols) = size;
    if rows < 8 || cols < 8 {
        return Err(Error::Generation(format!("scene must be at least 8x8, got {rows}x{cols}")));
    }
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::Generation(format!("amplitude must be non-negative, got {amplitude}")));
    }
    let geometry = GridGeometry::new(resolution, [0.0, 0.0], rows, cols)?;
    let mut ground = value_noise(seed, rows, cols, amplitude);

    let ceiling_plane = barrier.and_then(|b| b.ceiling).unwrap_or(DEFAULT_CEILING);
    let mut ceiling = vec![ceiling_plane; rows * cols];

    if let Some(spec) = barrier {
        for obstacle in &spec.obstacles {
            if let Obstacle::GroundBox { top, .. } = obstacle {
                for c in geometry.cells() {
                    if obstacle.covers(&geometry.cell_center(c)) {
                        let k = geometry.flat(c);
                        ground[k] = ground[k].max(*top);
                    }
                }
            }
        }
        for obstacle in &spec.obstacles {
            if let Obstacle::CeilingBox { bottom, .. } = obstacle {
                for c in geometry.cells() {
                    if obstacle.covers(&geometry.cell_center(c)) {
                        let k = geometry.flat(c);
                        ceiling[k] = ceiling[k].min(*bottom);
                    }
                }
            }
        }
        for (k, (g, c)) in ground.iter().zip(&ceiling).enumerate() {
            if g >= c {
                let cell = geometry.cell_at_flat(k);
                return Err(Error::Generation(format!(
                    "obstruction leaves no clearance at cell ({}, {}): ground {g:.3} vs ceiling {c:.3}",
                    cell.i, cell.j
                )));
            }
        }
    }

    // Noise alone can never cross the ceiling plane, but keep the invariant
    // explicit for very low planes.
    for (g, c) in ground.iter().zip(ceiling.iter_mut()) {
        if *c <= *g {
            *c = *g + resolution;
        }
    }
    LayeredGridMap::new(geometry, ground, ceiling)
}

const OCTAVES: usize = 4;
const PERSISTENCE: f64 = 0.5;
const BASE_PERIOD_CELLS: f64 = 16.0;

fn value_noise(seed: u64, rows: usize, cols: usize, amplitude: f64) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    if amplitude == 0.0 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weight = 1.0;
    let mut total_weight = 0.0;
    let mut period = BASE_PERIOD_CELLS;
    for _ in 0..OCTAVES {
        let li = (rows as f64 / period).ceil() as usize + 2;
        let lj = (cols as f64 / period).ceil() as usize + 2;
        let lattice: Vec<f64> = (0..li * lj).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for i in 0..rows {
            let u = i as f64 / period;
            let (i0, fu) = (u.floor() as usize, smoothstep(u.fract()));
            for j in 0..cols {
                let v = j as f64 / period;
                let (j0, fv) = (v.floor() as usize, smoothstep(v.fract()));
                let at = |a: usize, b: usize| lattice[a * lj + b];
                let a = at(i0, j0) * (1.0 - fv) + at(i0, j0 + 1) * fv;
                let b = at(i0 + 1, j0) * (1.0 - fv) + at(i0 + 1, j0 + 1) * fv;
                out[i * cols + j] += weight * (a * (1.0 - fu) + b * fu);
            }
        }
        total_weight += weight;
        weight *= PERSISTENCE;
        period *= 0.5;
    }
    // Each octave lies in [-1, 1]; the weighted sum in [-total, total].
    let scale = 0.5 * amplitude / total_weight;
    for v in &mut out {
        *v *= scale;
    }
    out
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(rows: usize, cols: usize, res: f64) -> GridGeometry {
        GridGeometry::new(res, [0.0, 0.0], rows, cols).unwrap()
    }

    #[test]
    fn flat_map_elevation_is_constant() {
        let map = LayeredGridMap::flat(geom(10, 10, 0.05), 0.3, 2.0).unwrap();
        for p in [Point2::new(0.0, 0.0), Point2::new(0.123, 0.4), Point2::new(0.47, 0.47)] {
            assert_eq!(map.elevation_at(Layer::Ground, p).unwrap(), 0.3);
        }
    }

    #[test]
    fn cell_centers_return_cell_values() {
        let g = geom(5, 6, 0.1);
        let ground: Vec<f64> = (0..30).map(|k| k as f64 * 0.01).collect();
        let map = LayeredGridMap::new(g, ground.clone(), vec![5.0; 30]).unwrap();
        for c in g.cells() {
            let v = map.elevation_at(Layer::Ground, g.cell_center(c)).unwrap();
            assert_eq!(v, ground[g.flat(c)]);
        }
    }

    #[test]
    fn midpoint_is_linear_average() {
        let g = geom(2, 2, 0.1);
        let map = LayeredGridMap::new(g, vec![0.0, 0.0, 0.1, 0.1], vec![1.0; 4]).unwrap();
        let v = map.elevation_at(Layer::Ground, Point2::new(0.05, 0.0)).unwrap();
        assert!((v - 0.05).abs() < 1e-15);
    }

    #[test]
    fn out_of_bounds_is_an_error() {
        let map = LayeredGridMap::flat(geom(8, 8, 0.05), 0.0, 1.0).unwrap();
        assert!(matches!(
            map.elevation_at(Layer::Ground, Point2::new(-0.5, 0.1)),
            Err(Error::OutOfBounds { .. })
        ));
        assert!(map.is_occupied(&Point3::new(10.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn occupied_domain_is_open() {
        let map = LayeredGridMap::flat(geom(8, 8, 0.05), 0.0, 1.0).unwrap();
        let at = |z| map.is_occupied(&Point3::new(0.1, 0.1, z)).unwrap();
        assert!(!at(0.5));
        assert!(!at(0.0));
        assert!(!at(1.0));
        assert!(at(-0.01));
        assert!(at(1.01));
    }

    #[test]
    fn constructor_enforces_ground_below_ceiling() {
        let g = geom(1, 2, 0.1);
        assert!(LayeredGridMap::new(g, vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(LayeredGridMap::new(g, vec![0.0, f64::NAN], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn zero_amplitude_is_flat() {
        let map = generate_fractal_scene(3, (16, 16), 0.05, 0.0, None).unwrap();
        assert!(map.layer(Layer::Ground).iter().all(|&g| g == 0.0));
        assert!(map.layer(Layer::Ceiling).iter().all(|&c| c == DEFAULT_CEILING));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_fractal_scene(42, (20, 30), 0.05, 0.1, None).unwrap();
        let b = generate_fractal_scene(42, (20, 30), 0.05, 0.1, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = generate_fractal_scene(43, (20, 30), 0.05, 0.1, None).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn fractal_relief_respects_amplitude() {
        let map = generate_fractal_scene(1, (60, 60), 0.05, 0.1, None).unwrap();
        let (lo, hi) = map.ground_range();
        assert!(hi - lo <= 0.1, "relief {}", hi - lo);
        assert!(hi - lo > 0.01, "noise should not be degenerate");
        let n = map
            .layer(Layer::Ground)
            .iter()
            .zip(map.layer(Layer::Ceiling))
            .filter(|(g, c)| g < c)
            .count();
        assert_eq!(n, 3600);
    }

    #[test]
    fn barrier_wall_is_stamped() {
        let spec = BarrierSpec::wall(0.5, 0.12, 0.19);
        let map = generate_fractal_scene(7, (20, 20), 0.05, 0.0, Some(&spec)).unwrap();
        assert_eq!(map.ground_at(Point2::new(0.5, 0.3)).unwrap(), 0.19);
        assert_eq!(map.ground_at(Point2::new(0.2, 0.3)).unwrap(), 0.0);
    }

    #[test]
    fn barrier_taller_than_clearance_fails() {
        let spec = BarrierSpec {
            ceiling: Some(0.15),
            obstacles: BarrierSpec::wall(0.5, 0.12, 0.19).obstacles,
        };
        assert!(matches!(
            generate_fractal_scene(7, (20, 20), 0.05, 0.0, Some(&spec)),
            Err(Error::Generation(_))
        ));
    }

    #[test]
    fn occupancy_monotone_in_z() {
        let map = generate_fractal_scene(9, (16, 16), 0.05, 0.2, None).unwrap();
        let xy = Point2::new(0.31, 0.22);
        let g = map.ground_at(xy).unwrap();
        for k in 1..20 {
            let z = g - 0.001 * k as f64;
            assert!(map.is_occupied(&Point3::new(xy.x, xy.y, z)).unwrap());
        }
    }
}
