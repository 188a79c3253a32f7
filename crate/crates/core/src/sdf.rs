//! Signed distance field over the occupied domain of a layered map.
//!
//! Every map column is treated as a box footprint with a free vertical
//! interval `[ground, ceiling]`. The field stores, at each voxel center, the
//! exact Euclidean distance to the nearest occupied point (positive) or to the
//! nearest free point (negative). Vertical distances are taken analytically
//! per column; the two horizontal axes are resolved with a separable
//! lower-envelope transform, so flat and horizontal surfaces come out exact
//! rather than quantized to the voxel pitch.

use std::sync::{Arc, RwLock};
use std::thread::JoinHandle;

use nalgebra::{Point2, Point3};

use crate::error::{Error, Result};
use crate::grid::CellIndex;
use crate::terrain::LayeredGridMap;

#[derive(Debug, Clone, PartialEq)]
pub struct SignedDistanceField {
    voxel_resolution: f64,
    /// Center of voxel (0, 0, 0).
    origin: [f64; 3],
    dims: [usize; 3],
    values: Vec<f64>,
    source_map_id: u64,
}

impl SignedDistanceField {
    pub(crate) fn from_parts(
        voxel_resolution: f64,
        origin: [f64; 3],
        dims: [usize; 3],
        values: Vec<f64>,
        source_map_id: u64,
    ) -> Result<Self> {
        if values.len() != dims[0] * dims[1] * dims[2] {
            return Err(Error::Format("distance field payload size mismatch".into()));
        }
        if !(voxel_resolution > 0.0) {
            return Err(Error::Format("voxel resolution must be positive".into()));
        }
        Ok(Self { voxel_resolution, origin, dims, values, source_map_id })
    }

    pub fn voxel_resolution(&self) -> f64 {
        self.voxel_resolution
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_map_id(&self) -> u64 {
        self.source_map_id
    }

    /// Axis-aligned box spanned by the voxel centers.
    pub fn bounds(&self) -> (Point3<f64>, Point3<f64>) {
        let lo = Point3::from(self.origin);
        let hi = Point3::new(
            self.origin[0] + (self.dims[0] - 1) as f64 * self.voxel_resolution,
            self.origin[1] + (self.dims[1] - 1) as f64 * self.voxel_resolution,
            self.origin[2] + (self.dims[2] - 1) as f64 * self.voxel_resolution,
        );
        (lo, hi)
    }

    #[inline]
    fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dims[1] + b) * self.dims[2] + c
    }

    pub fn voxel(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values[self.index(a, b, c)]
    }

    pub fn voxel_center(&self, a: usize, b: usize, c: usize) -> Point3<f64> {
        Point3::new(
            self.origin[0] + a as f64 * self.voxel_resolution,
            self.origin[1] + b as f64 * self.voxel_resolution,
            self.origin[2] + c as f64 * self.voxel_resolution,
        )
    }

    /// Trilinearly interpolated signed distance. Outside the voxel box the
    /// value at the nearest in-box point is reduced by the distance to it,
    /// which keeps the answer a lower bound on clearance.
    pub fn query(&self, p: &Point3<f64>) -> f64 {
        let inv = 1.0 / self.voxel_resolution;
        let mut u = [0.0; 3];
        let mut outside_sq = 0.0;
        for axis in 0..3 {
            let max = (self.dims[axis] - 1) as f64;
            let raw = (p[axis] - self.origin[axis]) * inv;
            let clamped = raw.clamp(0.0, max);
            let d = (raw - clamped) * self.voxel_resolution;
            outside_sq += d * d;
            u[axis] = clamped;
        }
        let value = self.trilinear(u);
        if outside_sq > 0.0 {
            value - outside_sq.sqrt()
        } else {
            value
        }
    }

    fn trilinear(&self, u: [f64; 3]) -> f64 {
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for axis in 0..3 {
            let n = self.dims[axis];
            if n == 1 {
                continue;
            }
            let i0 = (u[axis].floor() as usize).min(n - 2);
            base[axis] = i0;
            frac[axis] = u[axis] - i0 as f64;
        }
        let step = |axis: usize| usize::from(self.dims[axis] > 1);
        let (a0, b0, c0) = (base[0], base[1], base[2]);
        let (a1, b1, c1) = (a0 + step(0), b0 + step(1), c0 + step(2));
        let lerp = |x: f64, y: f64, t: f64| x + (y - x) * t;
        let v00 = lerp(self.voxel(a0, b0, c0), self.voxel(a0, b0, c1), frac[2]);
        let v01 = lerp(self.voxel(a0, b1, c0), self.voxel(a0, b1, c1), frac[2]);
        let v10 = lerp(self.voxel(a1, b0, c0), self.voxel(a1, b0, c1), frac[2]);
        let v11 = lerp(self.voxel(a1, b1, c0), self.voxel(a1, b1, c1), frac[2]);
        lerp(lerp(v00, v01, frac[1]), lerp(v10, v11, frac[1]), frac[0])
    }

    /// True iff a sphere of `radius` inflated by `margin` reaches the occupied domain.
    #[inline]
    pub fn sphere_collides(&self, center: &Point3<f64>, radius: f64, margin: f64) -> bool {
        self.query(center) < radius + margin
    }
}

/// Builds the field over the map footprint for voxel centers at
/// `z_min + k * voxel_resolution` up to `z_max`.
pub fn build_sdf(map: &LayeredGridMap, z_range: (f64, f64), voxel_resolution: f64) -> Result<SignedDistanceField> {
    let (z_min, z_max) = z_range;
    if !(voxel_resolution.is_finite() && voxel_resolution > 0.0) {
        return Err(Error::Build(format!("voxel resolution must be positive, got {voxel_resolution}")));
    }
    if !(z_min.is_finite() && z_max.is_finite() && z_min < z_max) {
        return Err(Error::Build(format!("invalid z range [{z_min}, {z_max}]")));
    }
    let (ground_lo, ground_hi) = map.ground_range();
    if z_max <= ground_lo || z_min >= ground_hi {
        return Err(Error::Build(format!(
            "z range [{z_min}, {z_max}] does not intersect the ground surface [{ground_lo}, {ground_hi}]"
        )));
    }

    let g = map.geometry();
    let (lo, hi) = g.extent();
    let count = |span: f64| (span / voxel_resolution + 1e-9).floor() as usize + 1;
    let dims = [count(hi.x - lo.x), count(hi.y - lo.y), count(z_max - z_min)];
    let origin = [lo.x, lo.y, z_min];
    let [nx, ny, nz] = dims;
    let n = nx * ny * nz;

    // Per-column free intervals, sampled nearest-cell.
    let mut columns = Vec::with_capacity(nx * ny);
    for a in 0..nx {
        for b in 0..ny {
            let p = Point2::new(origin[0] + a as f64 * voxel_resolution, origin[1] + b as f64 * voxel_resolution);
            let c = g.nearest_cell(&p).unwrap_or(CellIndex::new(0, 0));
            columns.push((map.ground_cell(c), map.ceiling_cell(c)));
        }
    }

    // Squared vertical distance to the occupied (resp. free) part of the own column.
    let mut to_occupied = vec![0.0; n];
    let mut to_free = vec![0.0; n];
    let mut occupied = vec![false; n];
    for a in 0..nx {
        for b in 0..ny {
            let (ground, ceiling) = columns[a * ny + b];
            for c in 0..nz {
                let z = z_min + c as f64 * voxel_resolution;
                let k = (a * ny + b) * nz + c;
                if z < ground {
                    occupied[k] = true;
                    to_free[k] = (ground - z).powi(2);
                } else if z > ceiling {
                    occupied[k] = true;
                    to_free[k] = (z - ceiling).powi(2);
                } else {
                    to_occupied[k] = (z - ground).min(ceiling - z).powi(2);
                }
            }
        }
    }

    let mut scratch = EnvelopeScratch::default();
    for field in [&mut to_occupied, &mut to_free] {
        // Along x.
        let mut line = vec![0.0; nx];
        let mut out = vec![0.0; nx];
        for b in 0..ny {
            for c in 0..nz {
                for a in 0..nx {
                    line[a] = field[(a * ny + b) * nz + c];
                }
                footprint_transform(&line, voxel_resolution, &mut out, &mut scratch);
                for a in 0..nx {
                    field[(a * ny + b) * nz + c] = out[a];
                }
            }
        }
        // Along y.
        let mut line = vec![0.0; ny];
        let mut out = vec![0.0; ny];
        for a in 0..nx {
            for c in 0..nz {
                for b in 0..ny {
                    line[b] = field[(a * ny + b) * nz + c];
                }
                footprint_transform(&line, voxel_resolution, &mut out, &mut scratch);
                for b in 0..ny {
                    field[(a * ny + b) * nz + c] = out[b];
                }
            }
        }
    }

    let values = (0..n)
        .map(|k| if occupied[k] { -to_free[k].sqrt() } else { to_occupied[k].sqrt() })
        .collect();
    Ok(SignedDistanceField { voxel_resolution, origin, dims, values, source_map_id: map.fingerprint() })
}

/// Voxel pitch defaults to the map resolution.
pub fn build_sdf_default(map: &LayeredGridMap, z_range: (f64, f64)) -> Result<SignedDistanceField> {
    build_sdf(map, z_range, map.geometry().resolution)
}

#[derive(Default)]
struct EnvelopeScratch {
    vertices: Vec<usize>,
    bounds: Vec<f64>,
    half: Vec<f64>,
}

/// One axis of the distance transform for unit-width box footprints:
///
/// `out[a] = min_a' f[a'] + (max(0, |a - a'| - 1/2) * h)^2`
///
/// For `a' < a` the kernel is a parabola centered at `a - 1/2`, for `a' > a`
/// one centered at `a + 1/2`, so the result is the lower envelope of the
/// sampled parabolas evaluated at half-integer positions. Parabolas on the
/// wrong side only ever overestimate and can be included freely.
fn footprint_transform(f: &[f64], h: f64, out: &mut [f64], s: &mut EnvelopeScratch) {
    let n = f.len();
    let h2 = h * h;
    // Lower envelope of y = h^2 (x - q)^2 + f[q] (Felzenszwalb & Huttenlocher).
    s.vertices.clear();
    s.bounds.clear();
    s.vertices.push(0);
    s.bounds.push(f64::NEG_INFINITY);
    s.bounds.push(f64::INFINITY);
    let intersect = |q: usize, v: usize| -> f64 {
        let (qf, vf) = (q as f64, v as f64);
        ((f[q] / h2 + qf * qf) - (f[v] / h2 + vf * vf)) / (2.0 * (qf - vf))
    };
    for q in 1..n {
        let mut k = s.vertices.len() - 1;
        let mut x = intersect(q, s.vertices[k]);
        while x <= s.bounds[k] {
            s.vertices.pop();
            s.bounds.pop();
            k -= 1;
            x = intersect(q, s.vertices[k]);
        }
        s.vertices.push(q);
        *s.bounds.last_mut().unwrap() = x;
        s.bounds.push(f64::INFINITY);
    }
    // Evaluate at x = a - 1/2 for a = 0..=n.
    s.half.clear();
    let mut k = 0;
    for a in 0..=n {
        let x = a as f64 - 0.5;
        while s.bounds[k + 1] < x {
            k += 1;
        }
        let v = s.vertices[k];
        let d = x - v as f64;
        s.half.push(h2 * d * d + f[v]);
    }
    for a in 0..n {
        out[a] = f[a].min(s.half[a]).min(s.half[a + 1]);
    }
}

/// Runs the build on a background thread. The field only becomes visible
/// through the handle once it is complete.
pub fn build_sdf_async(
    map: Arc<LayeredGridMap>,
    z_range: (f64, f64),
    voxel_resolution: f64,
) -> JoinHandle<Result<Arc<SignedDistanceField>>> {
    std::thread::spawn(move || build_sdf(&map, z_range, voxel_resolution).map(Arc::new))
}

/// Holds the most recently published field. Readers get a complete snapshot
/// or nothing; deciding when a snapshot is too stale is up to them.
#[derive(Debug, Default)]
pub struct SdfSlot {
    latest: RwLock<Option<Arc<SignedDistanceField>>>,
}

impl SdfSlot {
    pub fn publish(&self, field: Arc<SignedDistanceField>) {
        *self.latest.write().expect("sdf slot poisoned") = Some(field);
    }

    pub fn latest(&self) -> Option<Arc<SignedDistanceField>> {
        self.latest.read().expect("sdf slot poisoned").clone()
    }
}
