//! Guiding surfaces and the auxiliary surface clamped between ground and ceiling.

use nalgebra::{Point2, Point3};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{CellIndex, GridGeometry};
use crate::terrain::LayeredGridMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    GuidingKeypoint,
    GuidingConv,
    Auxiliary,
}

impl SurfaceKind {
    pub(crate) fn code(self) -> u8 {
        match self {
            SurfaceKind::GuidingKeypoint => 0,
            SurfaceKind::GuidingConv => 1,
            SurfaceKind::Auxiliary => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(SurfaceKind::GuidingKeypoint),
            1 => Ok(SurfaceKind::GuidingConv),
            2 => Ok(SurfaceKind::Auxiliary),
            other => Err(Error::Format(format!("unknown surface kind {other}"))),
        }
    }
}

/// Single-valued elevation surface on a map grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightSurface {
    geometry: GridGeometry,
    values: Vec<f64>,
    kind: SurfaceKind,
}

impl HeightSurface {
    pub fn new(geometry: GridGeometry, values: Vec<f64>, kind: SurfaceKind) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(invalid(format!("surface has {} values for {} cells", values.len(), geometry.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite surface value at cell {k}")));
        }
        Ok(Self { geometry, values, kind })
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn cell(&self, c: CellIndex) -> f64 {
        self.values[self.geometry.flat(c)]
    }

    pub fn value_at(&self, p: &Point2<f64>) -> Result<f64> {
        if !self.geometry.contains_point(p) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        Ok(self.geometry.bilinear(&self.values, p))
    }

    /// Shifts every value up by `offset`.
    pub fn raised(mut self, offset: f64) -> Self {
        for v in &mut self.values {
            *v += offset;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keypoint {
    pub position: Point3<f64>,
    pub weight: f64,
}

impl Keypoint {
    pub fn new(position: Point3<f64>) -> Self {
        Self { position, weight: 1.0 }
    }
}

/// Inverse-distance-weighted height at `xy`; exact keypoint height on top of a keypoint.
pub fn idw_height(keypoints: &[Keypoint], k: f64, xy: &Point2<f64>) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for kp in keypoints {
        let r = (kp.position.xy() - xy).norm();
        if r < 1e-9 {
            return kp.position.z;
        }
        let w = kp.weight / if k == 1.0 { r } else { r.powf(k) };
        num += w * kp.position.z;
        den += w;
    }
    num / den
}

fn check_keypoints(keypoints: &[Keypoint], k: f64) -> Result<()> {
    if keypoints.is_empty() {
        return Err(invalid("keypoint surface needs at least one keypoint"));
    }
    if !(k > 0.0) {
        return Err(invalid(format!("weighting exponent must be positive, got {k}")));
    }
    if keypoints.iter().any(|kp| !(kp.weight > 0.0)) {
        return Err(invalid("keypoint weights must be positive"));
    }
    Ok(())
}

pub fn keypoint_surface(geometry: &GridGeometry, keypoints: &[Keypoint], k: f64) -> Result<HeightSurface> {
    check_keypoints(keypoints, k)?;
    let values = geometry.cells().map(|c| idw_height(keypoints, k, &geometry.cell_center(c))).collect();
    HeightSurface::new(*geometry, values, SurfaceKind::GuidingKeypoint)
}

/// `p`, `q` and `intermediate` evenly spaced points between them at the
/// higher of the two foothold elevations.
pub fn default_keypoints(p: &Point3<f64>, q: &Point3<f64>, intermediate: usize) -> Vec<Keypoint> {
    if (p.xy() - q.xy()).norm() < 1e-9 {
        return vec![Keypoint::new(*p)];
    }
    let top = p.z.max(q.z);
    let mut out = vec![Keypoint::new(*p)];
    for k in 1..=intermediate {
        let f = k as f64 / (intermediate + 1) as f64;
        let xy = p.xy() + (q.xy() - p.xy()) * f;
        out.push(Keypoint::new(Point3::new(xy.x, xy.y, top)));
    }
    out.push(Keypoint::new(*q));
    out
}

/// Mean of `n x n` ground samples spaced `spacing` apart around `xy`.
pub fn conv_height(map: &LayeredGridMap, n: usize, spacing: f64, xy: &Point2<f64>) -> f64 {
    let h = (n / 2) as isize;
    let g = map.geometry();
    let ground = map.layer(crate::terrain::Layer::Ground);
    let mut sum = 0.0;
    for a in -h..=h {
        for b in -h..=h {
            let s = Point2::new(xy.x + a as f64 * spacing, xy.y + b as f64 * spacing);
            sum += g.bilinear(ground, &s);
        }
    }
    sum / (n * n) as f64
}

fn check_kernel(n: usize, spacing: f64) -> Result<()> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(invalid(format!("kernel size must be odd, got {n}")));
    }
    if !(spacing > 0.0) {
        return Err(invalid(format!("kernel spacing must be positive, got {spacing}")));
    }
    Ok(())
}

/// Ground smoothed by an `n x n` box kernel with sample spacing `spacing`.
/// Samples beyond the map replicate the edge.
pub fn convolutional_surface(map: &LayeredGridMap, n: usize, spacing: f64) -> Result<HeightSurface> {
    check_kernel(n, spacing)?;
    let g = map.geometry();
    let values = g.cells().map(|c| conv_height(map, n, spacing, &g.cell_center(c))).collect();
    HeightSurface::new(*g, values, SurfaceKind::GuidingConv)
}

#[inline]
fn clamp_between(guide: f64, ground: f64, ceiling: f64) -> f64 {
    if guide < ground {
        ground
    } else if guide > ceiling {
        ceiling
    } else {
        guide
    }
}

pub fn auxiliary_surface(guide: &HeightSurface, map: &LayeredGridMap) -> Result<HeightSurface> {
    if !guide.geometry.same_shape(map.geometry()) {
        return Err(invalid("guiding surface and map grids differ"));
    }
    let values = guide
        .geometry
        .cells()
        .map(|c| clamp_between(guide.cell(c), map.ground_cell(c), map.ceiling_cell(c)))
        .collect();
    HeightSurface::new(guide.geometry, values, SurfaceKind::Auxiliary)
}

/// Auxiliary-surface heights at cell centers, possibly computed on demand.
pub trait SurfaceSource {
    fn geometry(&self) -> &GridGeometry;

    /// Height at the center of an in-bounds cell.
    fn height(&self, c: CellIndex) -> f64;
}

impl SurfaceSource for HeightSurface {
    fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    fn height(&self, c: CellIndex) -> f64 {
        self.cell(c)
    }
}

impl<S: SurfaceSource + ?Sized> SurfaceSource for &S {
    fn geometry(&self) -> &GridGeometry {
        (**self).geometry()
    }

    fn height(&self, c: CellIndex) -> f64 {
        (**self).height(c)
    }
}

/// Auxiliary surface over a keypoint guide, evaluated per cell on request.
#[derive(Debug, Clone)]
pub struct KeypointAuxiliary<'a> {
    map: &'a LayeredGridMap,
    keypoints: Vec<Keypoint>,
    k: f64,
}

impl<'a> KeypointAuxiliary<'a> {
    pub fn new(map: &'a LayeredGridMap, keypoints: Vec<Keypoint>, k: f64) -> Result<Self> {
        check_keypoints(&keypoints, k)?;
        Ok(Self { map, keypoints, k })
    }

    pub fn keypoints(&self) -> &[Keypoint] {
        &self.keypoints
    }

    pub fn materialize(&self) -> HeightSurface {
        let g = self.map.geometry();
        let values = g.cells().map(|c| self.height(c)).collect();
        HeightSurface { geometry: *g, values, kind: SurfaceKind::Auxiliary }
    }
}

impl SurfaceSource for KeypointAuxiliary<'_> {
    fn geometry(&self) -> &GridGeometry {
        self.map.geometry()
    }

    fn height(&self, c: CellIndex) -> f64 {
        let guide = idw_height(&self.keypoints, self.k, &self.map.geometry().cell_center(c));
        clamp_between(guide, self.map.ground_cell(c), self.map.ceiling_cell(c))
    }
}

/// Auxiliary surface over a raised convolutional guide, evaluated per cell on request.
#[derive(Debug, Clone)]
pub struct ConvAuxiliary<'a> {
    map: &'a LayeredGridMap,
    n: usize,
    spacing: f64,
    offset: f64,
}

impl<'a> ConvAuxiliary<'a> {
    pub fn new(map: &'a LayeredGridMap, n: usize, spacing: f64, offset: f64) -> Result<Self> {
        check_kernel(n, spacing)?;
        Ok(Self { map, n, spacing, offset })
    }

    pub fn materialize(&self) -> HeightSurface {
        let g = self.map.geometry();
        let values = g.cells().map(|c| self.height(c)).collect();
        HeightSurface { geometry: *g, values, kind: SurfaceKind::Auxiliary }
    }
}

impl SurfaceSource for ConvAuxiliary<'_> {
    fn geometry(&self) -> &GridGeometry {
        self.map.geometry()
    }

    fn height(&self, c: CellIndex) -> f64 {
        let g = self.map.geometry();
        let guide = conv_height(self.map, self.n, self.spacing, &g.cell_center(c)) + self.offset;
        clamp_between(guide, self.map.ground_cell(c), self.map.ceiling_cell(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::{generate_fractal_scene, BarrierSpec, Layer, Obstacle};

    fn geom() -> GridGeometry {
        GridGeometry::new(0.05, [0.0, 0.0], 20, 20).unwrap()
    }

    #[test]
    fn single_keypoint_is_constant() {
        let s = keypoint_surface(&geom(), &[Keypoint::new(Point3::new(0.3, 0.3, 0.2))], 1.0).unwrap();
        assert!(s.values().iter().all(|v| (*v - 0.2).abs() < 1e-15));
    }

    #[test]
    fn symmetric_pair() {
        let kps = [Keypoint::new(Point3::new(0.2, 0.5, 0.0)), Keypoint::new(Point3::new(0.6, 0.5, 0.4))];
        let v = idw_height(&kps, 1.0, &Point2::new(0.4, 0.3));
        assert!((v - 0.2).abs() < 1e-15);
    }

    #[test]
    fn surface_passes_through_keypoints() {
        let p = Point3::new(0.2, 0.2, 0.05);
        let q = Point3::new(0.7, 0.5, 0.12);
        let kps = default_keypoints(&p, &q, 3);
        assert_eq!(kps.len(), 5);
        for kp in &kps {
            assert!((idw_height(&kps, 1.0, &kp.position.xy()) - kp.position.z).abs() < 1e-9);
        }
        let s = keypoint_surface(&geom(), &kps, 1.0).unwrap();
        assert!(s.values().iter().all(|v| *v >= 0.05 - 1e-12 && *v <= 0.12 + 1e-12));
    }

    #[test]
    fn empty_keypoints_rejected() {
        assert!(keypoint_surface(&geom(), &[], 1.0).is_err());
    }

    #[test]
    fn identity_kernel() {
        let map = generate_fractal_scene(3, (20, 20), 0.05, 0.1, None).unwrap();
        let s = convolutional_surface(&map, 1, 0.03).unwrap();
        assert_eq!(s.values(), map.layer(Layer::Ground));
        assert!(convolutional_surface(&map, 4, 0.03).is_err());
    }

    #[test]
    fn flat_kernel_output() {
        let map = LayeredGridMap::flat(geom(), 0.1, 2.0).unwrap();
        let s = convolutional_surface(&map, 5, 0.03).unwrap();
        assert!(s.values().iter().all(|v| (*v - 0.1).abs() < 1e-15));
    }

    #[test]
    fn demo_kernel_matches_direct_sum() {
        let map = generate_fractal_scene(9, (20, 20), 0.05, 0.1, None).unwrap();
        let s = convolutional_surface(&map, 5, 0.03).unwrap();
        let g = map.geometry();
        for c in [CellIndex::new(0, 0), CellIndex::new(7, 11), CellIndex::new(19, 3)] {
            let center = g.cell_center(c);
            let mut sum = 0.0;
            for a in -2..=2 {
                for b in -2..=2 {
                    let sample = Point2::new(
                        (center.x + a as f64 * 0.03).clamp(0.0, 0.95),
                        (center.y + b as f64 * 0.03).clamp(0.0, 0.95),
                    );
                    sum += map.elevation_at(Layer::Ground, sample).unwrap();
                }
            }
            assert!((s.cell(c) - sum / 25.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clamping_branches() {
        let spec = BarrierSpec {
            ceiling: Some(0.6),
            obstacles: vec![
                Obstacle::GroundBox { min: [0.3, 0.0], max: [0.5, 1.0], top: 0.3 },
                Obstacle::CeilingBox { min: [0.6, 0.0], max: [0.8, 1.0], bottom: 0.2 },
            ],
        };
        let map = generate_fractal_scene(2, (20, 20), 0.05, 0.05, Some(&spec)).unwrap();
        let g = *map.geometry();
        let mid: Vec<f64> = g.cells().map(|c| 0.5 * (map.ground_cell(c) + map.ceiling_cell(c))).collect();
        let guide = HeightSurface::new(g, mid.clone(), SurfaceKind::GuidingKeypoint).unwrap();
        assert_eq!(auxiliary_surface(&guide, &map).unwrap().values(), &mid[..]);

        let low: Vec<f64> = g.cells().map(|c| map.ground_cell(c) - 1.0).collect();
        let guide = HeightSurface::new(g, low, SurfaceKind::GuidingKeypoint).unwrap();
        assert_eq!(auxiliary_surface(&guide, &map).unwrap().values(), map.layer(Layer::Ground));

        let guide = HeightSurface::new(g, vec![0.25; g.len()], SurfaceKind::GuidingKeypoint).unwrap();
        let aux = auxiliary_surface(&guide, &map).unwrap();
        for c in g.cells() {
            let (lo, hi) = (map.ground_cell(c), map.ceiling_cell(c));
            let expect = if 0.25 < lo { lo } else if 0.25 > hi { hi } else { 0.25 };
            assert_eq!(aux.cell(c), expect);
        }
        let twice = auxiliary_surface(&aux, &map).unwrap();
        assert_eq!(twice.values(), aux.values());
    }

    #[test]
    fn lazy_sources_match_materialized() {
        let map = generate_fractal_scene(4, (16, 16), 0.05, 0.1, None).unwrap();
        let kps = default_keypoints(&Point3::new(0.1, 0.1, 0.0), &Point3::new(0.6, 0.5, 0.05), 3);
        let lazy = KeypointAuxiliary::new(&map, kps.clone(), 1.0).unwrap();
        let eager = auxiliary_surface(&keypoint_surface(map.geometry(), &kps, 1.0).unwrap(), &map).unwrap();
        assert_eq!(lazy.materialize().values(), eager.values());

        let lazy = ConvAuxiliary::new(&map, 5, 0.03, 0.02).unwrap();
        let eager = auxiliary_surface(&convolutional_surface(&map, 5, 0.03).unwrap().raised(0.02), &map).unwrap();
        for (a, b) in lazy.materialize().values().iter().zip(eager.values()) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
