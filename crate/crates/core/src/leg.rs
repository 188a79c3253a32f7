//! Three-joint leg (hip yaw, hip pitch, knee pitch): forward and inverse
//! kinematics and the sphere collision model.
//!
//! Zero configuration is a straight leg along the hip frame x axis. Positive
//! pitch rotates the distal link downward (right-handed about hip y).

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pose::{serde_pose, Pose};
use crate::sdf::SignedDistanceField;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JointAngles {
    pub yaw: f64,
    pub hip_pitch: f64,
    pub knee_pitch: f64,
}

impl JointAngles {
    pub const fn new(yaw: f64, hip_pitch: f64, knee_pitch: f64) -> Self {
        Self { yaw, hip_pitch, knee_pitch }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.yaw, self.hip_pitch, self.knee_pitch]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereKind {
    Foot,
    Knee,
    Link,
}

/// Sphere rigidly attached to a link. Link 0 is the coxa (frame at the hip
/// after yaw), link 1 the femur (frame at the coxa tip after hip pitch),
/// link 2 the tibia (frame at the knee after knee pitch). Each link runs along
/// its frame's x axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionSphere {
    pub link: usize,
    pub offset: [f64; 3],
    pub radius: f64,
    pub kind: SphereKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointLimits {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl JointLimits {
    pub fn unlimited() -> Self {
        let big = 4.0 * std::f64::consts::PI;
        Self { min: [-big; 3], max: [big; 3] }
    }

    pub fn contains(&self, q: &JointAngles, margin: f64) -> bool {
        q.as_array()
            .iter()
            .enumerate()
            .all(|(k, v)| *v >= self.min[k] + margin && *v <= self.max[k] - margin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegModel {
    pub name: String,
    /// Base frame to hip-yaw frame.
    #[serde(with = "serde_pose")]
    pub hip_mount: Pose,
    /// Coxa, femur, tibia.
    pub link_lengths: [f64; 3],
    pub joint_limits: JointLimits,
    pub collision_spheres: Vec<CollisionSphere>,
}

/// World positions of the chain joints for one configuration.
#[derive(Debug, Clone, Copy)]
pub struct LegFrames {
    pub hip: Point3<f64>,
    pub coxa_tip: Point3<f64>,
    pub knee: Point3<f64>,
    pub foot: Point3<f64>,
    /// Unit x axes of the three link frames, world coordinates.
    axes: [Vector3<f64>; 3],
    /// Shared y axis of the pitch joints, world coordinates.
    pitch_axis: Vector3<f64>,
}

impl LegFrames {
    /// World center of a sphere attached to `link` at `offset`.
    pub fn place(&self, link: usize, offset: &[f64; 3]) -> Point3<f64> {
        let origin = match link {
            0 => self.hip,
            1 => self.coxa_tip,
            _ => self.knee,
        };
        let x = self.axes[link.min(2)];
        let y = self.pitch_axis;
        let z = x.cross(&y);
        origin + x * offset[0] + y * offset[1] + z * offset[2]
    }
}

impl LegModel {
    pub fn new(
        name: impl Into<String>,
        hip_mount: Pose,
        link_lengths: [f64; 3],
        joint_limits: JointLimits,
        collision_spheres: Vec<CollisionSphere>,
    ) -> Result<Self> {
        let leg = Self { name: name.into(), hip_mount, link_lengths, joint_limits, collision_spheres };
        leg.validate()?;
        Ok(leg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.link_lengths.iter().all(|l| l.is_finite() && *l > 0.0) {
            return Err(invalid(format!("leg {}: link lengths must be positive", self.name)));
        }
        for k in 0..3 {
            if !(self.joint_limits.min[k] < self.joint_limits.max[k]) {
                return Err(invalid(format!("leg {}: joint {k} limits are empty", self.name)));
            }
        }
        for s in &self.collision_spheres {
            if !(s.radius > 0.0) || s.link > 2 {
                return Err(invalid(format!("leg {}: bad collision sphere {s:?}", self.name)));
            }
        }
        Ok(())
    }

    pub fn reach(&self) -> f64 {
        self.link_lengths.iter().sum()
    }

    pub fn foot_radius(&self) -> f64 {
        self.collision_spheres
            .iter()
            .filter(|s| s.kind == SphereKind::Foot)
            .map(|s| s.radius)
            .fold(0.0, f64::max)
    }

    /// World position of the hip-yaw axis origin.
    pub fn hip_position(&self, base: &Pose) -> Point3<f64> {
        (base * self.hip_mount) * Point3::origin()
    }

    pub fn frames(&self, q: &JointAngles, base: &Pose) -> LegFrames {
        let [coxa, femur, tibia] = self.link_lengths;
        let world = base * self.hip_mount;
        let (sy, cy) = q.yaw.sin_cos();
        let a1 = q.hip_pitch;
        let a2 = q.hip_pitch + q.knee_pitch;
        // Hip-frame unit vectors.
        let planar = |a: f64| Vector3::new(cy * a.cos(), sy * a.cos(), -a.sin());
        let x0 = Vector3::new(cy, sy, 0.0);
        let x1 = planar(a1);
        let x2 = planar(a2);
        let y = Vector3::new(-sy, cy, 0.0);
        let hip_local = Point3::origin();
        let coxa_local = hip_local + coxa * x0;
        let knee_local = coxa_local + femur * x1;
        let foot_local = knee_local + tibia * x2;
        let r = world.rotation;
        LegFrames {
            hip: world * hip_local,
            coxa_tip: world * coxa_local,
            knee: world * knee_local,
            foot: world * foot_local,
            axes: [r * x0, r * x1, r * x2],
            pitch_axis: r * y,
        }
    }

    pub fn forward_kinematics(&self, q: &JointAngles, base: &Pose) -> Point3<f64> {
        let [coxa, femur, tibia] = self.link_lengths;
        let (sy, cy) = q.yaw.sin_cos();
        let a1 = q.hip_pitch;
        let a2 = q.hip_pitch + q.knee_pitch;
        let rho = coxa + femur * a1.cos() + tibia * a2.cos();
        let z = -femur * a1.sin() - tibia * a2.sin();
        (base * self.hip_mount) * Point3::new(cy * rho, sy * rho, z)
    }

    /// Closed-form IK. Returns the solutions within joint limits (widened by
    /// `-limit_margin`), knee-up (`knee_pitch >= 0`) first.
    pub fn inverse_kinematics_with_margin(&self, foot: &Point3<f64>, base: &Pose, limit_margin: f64) -> Vec<JointAngles> {
        let local = (base * self.hip_mount).inverse_transform_point(foot);
        let mut out = Vec::with_capacity(4);
        for q in self.ik_local(&local) {
            if self.joint_limits.contains(&q, limit_margin) && !out.iter().any(|o: &JointAngles| same(o, &q)) {
                out.push(q);
            }
        }
        out
    }

    pub fn inverse_kinematics(&self, foot: &Point3<f64>, base: &Pose) -> Vec<JointAngles> {
        self.inverse_kinematics_with_margin(foot, base, 0.0)
    }

    /// Both planar branches for both yaw directions, without limit
    /// filtering. The flipped yaw covers feet folded behind the hip axis.
    fn ik_local(&self, p: &Point3<f64>) -> impl Iterator<Item = JointAngles> {
        use std::f64::consts::PI;
        let [coxa, femur, tibia] = self.link_lengths;
        let radial = p.x.hypot(p.y);
        let yaw = if radial < 1e-12 { 0.0 } else { p.y.atan2(p.x) };
        let mut solutions = [None; 4];
        let tolerance = 1e-12;
        for (branch, (yaw, rho)) in [(yaw, radial - coxa), (wrap(yaw + PI), -radial - coxa)].into_iter().enumerate() {
            let d2 = rho * rho + p.z * p.z;
            let cos_k = (d2 - femur * femur - tibia * tibia) / (2.0 * femur * tibia);
            if cos_k.abs() > 1.0 + tolerance {
                continue;
            }
            let k = cos_k.clamp(-1.0, 1.0).acos();
            let phi = (-p.z).atan2(rho);
            for (slot, knee) in solutions[2 * branch..2 * branch + 2].iter_mut().zip([k, -k]) {
                let hip = phi - (tibia * knee.sin()).atan2(femur + tibia * knee.cos());
                *slot = Some(JointAngles::new(yaw, wrap(hip), knee));
            }
        }
        solutions.into_iter().flatten()
    }

    /// First IK solution closest (joint-space Euclidean) to `reference`.
    pub fn inverse_kinematics_near(&self, foot: &Point3<f64>, base: &Pose, reference: &JointAngles) -> Option<JointAngles> {
        let dist = |q: &JointAngles| {
            q.as_array().iter().zip(reference.as_array()).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
        };
        self.inverse_kinematics(foot, base)
            .into_iter()
            .min_by(|a, b| dist(a).total_cmp(&dist(b)))
    }

    /// Whether any collision sphere reaches the occupied domain. With
    /// `exempt_foot` the foot sphere is skipped.
    pub fn leg_collides(
        &self,
        q: &JointAngles,
        base: &Pose,
        sdf: &SignedDistanceField,
        margin: f64,
        exempt_foot: bool,
    ) -> bool {
        let frames = self.frames(q, base);
        self.collides_with_frames(&frames, sdf, margin, exempt_foot)
    }

    pub fn collides_with_frames(
        &self,
        frames: &LegFrames,
        sdf: &SignedDistanceField,
        margin: f64,
        exempt_foot: bool,
    ) -> bool {
        self.collision_spheres.iter().any(|s| {
            if exempt_foot && s.kind == SphereKind::Foot {
                return false;
            }
            sdf.sphere_collides(&frames.place(s.link, &s.offset), s.radius, margin)
        })
    }

    /// World centers of all collision spheres.
    pub fn sphere_centers(&self, q: &JointAngles, base: &Pose) -> Vec<(CollisionSphere, Point3<f64>)> {
        let frames = self.frames(q, base);
        self.collision_spheres.iter().map(|s| (*s, frames.place(s.link, &s.offset))).collect()
    }
}

fn same(a: &JointAngles, b: &JointAngles) -> bool {
    a.as_array().iter().zip(b.as_array()).all(|(x, y)| (x - y).abs() < 1e-12)
}

fn wrap(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut a = a;
    while a > PI {
        a -= 2.0 * PI;
    }
    while a < -PI {
        a += 2.0 * PI;
    }
    a
}

/// Foot, knee and three tibia spheres.
pub fn subdivided_spheres(tibia: f64, foot_radius: f64, knee_radius: f64, link_radius: f64) -> Vec<CollisionSphere> {
    let mut spheres = vec![
        CollisionSphere { link: 2, offset: [tibia, 0.0, 0.0], radius: foot_radius, kind: SphereKind::Foot },
        CollisionSphere { link: 2, offset: [0.0, 0.0, 0.0], radius: knee_radius, kind: SphereKind::Knee },
    ];
    for f in [0.25, 0.5, 0.75] {
        spheres.push(CollisionSphere { link: 2, offset: [f * tibia, 0.0, 0.0], radius: link_radius, kind: SphereKind::Link });
    }
    spheres
}
