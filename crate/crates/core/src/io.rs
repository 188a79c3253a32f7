//! Self-describing container for grids: terrain maps, height surfaces and
//! distance fields, as compact little-endian binary or as JSON.
//!
//! Binary layout: `b"KCFR"`, version byte, payload kind byte, then a
//! kind-specific header and row-major `f64` arrays. Both encodings round-trip
//! every value bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridGeometry;
use crate::sdf::SignedDistanceField;
use crate::surface::{HeightSurface, SurfaceKind};
use crate::terrain::LayeredGridMap;

pub const MAGIC: [u8; 4] = *b"KCFR";
pub const VERSION: u8 = 1;

const KIND_TERRAIN: u8 = 0;
const KIND_FIELD: u8 = 1;
const KIND_SURFACE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    Binary,
    Json,
}

impl Encoding {
    /// JSON for a `.json` extension, binary otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Encoding::Json,
            _ => Encoding::Binary,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Container {
    Terrain(LayeredGridMap),
    Surface(HeightSurface),
    Field(SignedDistanceField),
}

#[derive(Serialize, Deserialize)]
struct GridHeader {
    resolution: f64,
    origin: [f64; 2],
    rows: usize,
    cols: usize,
}

impl From<&GridGeometry> for GridHeader {
    fn from(g: &GridGeometry) -> Self {
        Self { resolution: g.resolution, origin: g.origin, rows: g.rows, cols: g.cols }
    }
}

impl GridHeader {
    fn geometry(&self) -> Result<GridGeometry> {
        GridGeometry::new(self.resolution, self.origin, self.rows, self.cols).map_err(|e| Error::Format(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum JsonPayload {
    Terrain {
        #[serde(flatten)]
        header: GridHeader,
        ground: Vec<f64>,
        ceiling: Vec<f64>,
    },
    Surface {
        #[serde(flatten)]
        header: GridHeader,
        surface: SurfaceKind,
        values: Vec<f64>,
    },
    Field {
        voxel_resolution: f64,
        origin: [f64; 3],
        dims: [usize; 3],
        source_map_id: u64,
        values: Vec<f64>,
    },
}

#[derive(Serialize, Deserialize)]
struct JsonContainer {
    magic: String,
    version: u8,
    #[serde(flatten)]
    payload: JsonPayload,
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(&MAGIC);
        w.u8(VERSION);
        match self {
            Container::Terrain(map) => {
                w.u8(KIND_TERRAIN);
                w.grid(map.geometry());
                w.f64s(map.layer(crate::terrain::Layer::Ground));
                w.f64s(map.layer(crate::terrain::Layer::Ceiling));
            }
            Container::Surface(s) => {
                w.u8(KIND_SURFACE);
                w.grid(s.geometry());
                w.u8(s.kind().code());
                w.f64s(s.values());
            }
            Container::Field(f) => {
                w.u8(KIND_FIELD);
                w.f64(f.voxel_resolution());
                for v in f.origin() {
                    w.f64(v);
                }
                for d in f.dims() {
                    w.u64(d as u64);
                }
                w.u64(f.source_map_id());
                w.f64s(f.values());
            }
        }
        w.0
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("missing KCFR magic".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let out = match r.u8()? {
            KIND_TERRAIN => {
                let g = r.grid()?;
                let ground = r.f64s(g.len())?;
                let ceiling = r.f64s(g.len())?;
                Container::Terrain(LayeredGridMap::new(g, ground, ceiling).map_err(format_error)?)
            }
            KIND_SURFACE => {
                let g = r.grid()?;
                let kind = SurfaceKind::from_code(r.u8()?)?;
                let values = r.f64s(g.len())?;
                Container::Surface(HeightSurface::new(g, values, kind).map_err(format_error)?)
            }
            KIND_FIELD => {
                let res = r.f64()?;
                let origin = [r.f64()?, r.f64()?, r.f64()?];
                let dims = [r.len()?, r.len()?, r.len()?];
                let id = r.u64()?;
                let n = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d));
                let n = n.ok_or_else(|| Error::Format("field dimensions overflow".into()))?;
                let values = r.f64s(n)?;
                Container::Field(SignedDistanceField::from_parts(res, origin, dims, values, id)?)
            }
            other => return Err(Error::Format(format!("unknown payload kind {other}"))),
        };
        if r.pos != bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let payload = match self {
            Container::Terrain(map) => JsonPayload::Terrain {
                header: map.geometry().into(),
                ground: map.layer(crate::terrain::Layer::Ground).to_vec(),
                ceiling: map.layer(crate::terrain::Layer::Ceiling).to_vec(),
            },
            Container::Surface(s) => {
                JsonPayload::Surface { header: s.geometry().into(), surface: s.kind(), values: s.values().to_vec() }
            }
            Container::Field(f) => JsonPayload::Field {
                voxel_resolution: f.voxel_resolution(),
                origin: f.origin(),
                dims: f.dims(),
                source_map_id: f.source_map_id(),
                values: f.values().to_vec(),
            },
        };
        let c = JsonContainer { magic: String::from_utf8_lossy(&MAGIC).into_owned(), version: VERSION, payload };
        Ok(serde_json::to_string(&c)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: JsonContainer = serde_json::from_str(text)?;
        if c.magic.as_bytes() != MAGIC {
            return Err(Error::Format(format!("unexpected magic {:?}", c.magic)));
        }
        if c.version != VERSION {
            return Err(Error::Format(format!("unsupported version {}", c.version)));
        }
        Ok(match c.payload {
            JsonPayload::Terrain { header, ground, ceiling } => {
                Container::Terrain(LayeredGridMap::new(header.geometry()?, ground, ceiling).map_err(format_error)?)
            }
            JsonPayload::Surface { header, surface, values } => {
                Container::Surface(HeightSurface::new(header.geometry()?, values, surface).map_err(format_error)?)
            }
            JsonPayload::Field { voxel_resolution, origin, dims, source_map_id, values } => Container::Field(
                SignedDistanceField::from_parts(voxel_resolution, origin, dims, values, source_map_id)?,
            ),
        })
    }

    pub fn encode(&self, encoding: Encoding) -> Result<Vec<u8>> {
        match encoding {
            Encoding::Binary => Ok(self.to_bytes()),
            Encoding::Json => Ok(self.to_json()?.into_bytes()),
        }
    }

    /// Detects the encoding from the leading bytes.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.starts_with(&MAGIC) {
            return Self::from_bytes(bytes);
        }
        let text = std::str::from_utf8(bytes).map_err(|_| Error::Format("neither KCFR binary nor JSON".into()))?;
        Self::from_json(text)
    }

    pub fn save(&self, path: &Path, encoding: Encoding) -> Result<()> {
        fs::write(path, self.encode(encoding)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::decode(&fs::read(path)?)
    }

    pub fn into_terrain(self) -> Result<LayeredGridMap> {
        match self {
            Container::Terrain(m) => Ok(m),
            _ => Err(Error::Format("container does not hold a terrain map".into())),
        }
    }
}

pub fn save_map(map: &LayeredGridMap, path: &Path, encoding: Encoding) -> Result<()> {
    Container::Terrain(map.clone()).save(path, encoding)
}

pub fn load_map(path: &Path) -> Result<LayeredGridMap> {
    Container::load(path)?.into_terrain()
}

fn format_error(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::Format(m),
        other => other,
    }
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }

    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn f64s(&mut self, vs: &[f64]) {
        self.0.reserve(8 * vs.len());
        for v in vs {
            self.f64(*v);
        }
    }

    fn grid(&mut self, g: &GridGeometry) {
        self.f64(g.resolution);
        self.f64(g.origin[0]);
        self.f64(g.origin[1]);
        self.u64(g.rows as u64);
        self.u64(g.cols as u64);
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Format(format!("truncated at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn len(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Format("length does not fit in memory".into()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let bytes = n.checked_mul(8).ok_or_else(|| Error::Format("payload length overflow".into()))?;
        let raw = self.take(bytes)?;
        Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
    }

    fn grid(&mut self) -> Result<GridGeometry> {
        let resolution = self.f64()?;
        let origin = [self.f64()?, self.f64()?];
        let (rows, cols) = (self.len()?, self.len()?);
        GridHeader { resolution, origin, rows, cols }.geometry()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdf::build_sdf_default;
    use crate::terrain::{generate_fractal_scene, BarrierSpec};

    fn scene() -> LayeredGridMap {
        generate_fractal_scene(7, (12, 9), 0.05, 0.1, Some(&BarrierSpec::wall(0.3, 0.1, 0.2))).unwrap()
    }

    fn same_bits(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
    }

    #[test]
    fn terrain_round_trips_both_encodings() {
        let map = scene();
        for enc in [Encoding::Binary, Encoding::Json] {
            let back = Container::decode(&Container::Terrain(map.clone()).encode(enc).unwrap()).unwrap();
            let back = back.into_terrain().unwrap();
            assert_eq!(back.geometry(), map.geometry());
            assert!(same_bits(back.layer(crate::terrain::Layer::Ground), map.layer(crate::terrain::Layer::Ground)));
            assert!(same_bits(back.layer(crate::terrain::Layer::Ceiling), map.layer(crate::terrain::Layer::Ceiling)));
        }
    }

    #[test]
    fn binary_layout_header() {
        let map = scene();
        let bytes = Container::Terrain(map).to_bytes();
        assert_eq!(&bytes[..4], b"KCFR");
        assert_eq!(bytes[4], VERSION);
        assert_eq!(bytes[5], KIND_TERRAIN);
        assert_eq!(f64::from_le_bytes(bytes[6..14].try_into().unwrap()), 0.05);
        assert_eq!(bytes.len(), 6 + 8 * 3 + 8 * 2 + 2 * 8 * 12 * 9);
    }

    #[test]
    fn field_and_surface_round_trip() {
        let map = scene();
        let sdf = build_sdf_default(&map, (-0.2, 0.4)).unwrap();
        let surf = crate::surface::convolutional_surface(&map, 5, 0.03).unwrap();
        for c in [Container::Field(sdf), Container::Surface(surf)] {
            for enc in [Encoding::Binary, Encoding::Json] {
                assert_eq!(Container::decode(&c.encode(enc).unwrap()).unwrap(), c);
            }
        }
    }

    #[test]
    fn corrupt_inputs_are_rejected() {
        let bytes = Container::Terrain(scene()).to_bytes();
        assert!(Container::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut wrong_version = bytes.clone();
        wrong_version[4] = 9;
        assert!(Container::from_bytes(&wrong_version).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(Container::from_bytes(&extra).is_err());
        assert!(Container::decode(b"{\"magic\":\"NOPE\"}").is_err());
    }
}
