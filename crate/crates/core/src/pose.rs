//! Rigid transforms and geodesic interpolation on SE(3).

use nalgebra::{Isometry3, Matrix3, Translation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

/// World-from-body rigid transform. The rotation is a unit quaternion, so it
/// stays orthonormal under composition.
pub type Pose = Isometry3<f64>;

/// Rotation angles closer than this to pi make the logarithm ambiguous.
pub const PI_DEGENERACY_TOLERANCE: f64 = 1e-6;

pub fn pose_from_xyz_rpy(xyz: [f64; 3], rpy: [f64; 3]) -> Pose {
    Isometry3::from_parts(
        Translation3::new(xyz[0], xyz[1], xyz[2]),
        UnitQuaternion::from_euler_angles(rpy[0], rpy[1], rpy[2]),
    )
}

/// Serializable form of a pose: translation plus roll/pitch/yaw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseSpec {
    pub xyz: [f64; 3],
    pub rpy: [f64; 3],
}

impl From<&Pose> for PoseSpec {
    fn from(p: &Pose) -> Self {
        let (r, pi, y) = p.rotation.euler_angles();
        let t = p.translation.vector;
        Self { xyz: [t.x, t.y, t.z], rpy: [r, pi, y] }
    }
}

impl From<PoseSpec> for Pose {
    fn from(s: PoseSpec) -> Self {
        pose_from_xyz_rpy(s.xyz, s.rpy)
    }
}

/// `serde(with = ...)` adapter storing a pose as a [`PoseSpec`].
pub mod serde_pose {
    use super::{Pose, PoseSpec};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &Pose, s: S) -> Result<S::Ok, S::Error> {
        PoseSpec::from(p).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Pose, D::Error> {
        PoseSpec::deserialize(d).map(Pose::from)
    }
}

#[inline]
fn hat(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Twist `(omega, v)` with `exp` of the twist equal to `pose`.
pub fn se3_log(pose: &Pose) -> (Vector3<f64>, Vector3<f64>) {
    let omega = pose.rotation.scaled_axis();
    let theta = omega.norm();
    let t = pose.translation.vector;
    if theta < 1e-9 {
        return (omega, t - 0.5 * omega.cross(&t));
    }
    let w = hat(&omega);
    let half = 0.5 * theta;
    // V^-1 = I - W/2 + (1 - (theta/2) cot(theta/2)) / theta^2 * W^2
    let coeff = (1.0 - half * half.cos() / half.sin()) / (theta * theta);
    let v_inv = Matrix3::identity() - 0.5 * w + coeff * w * w;
    (omega, v_inv * t)
}

pub fn se3_exp(omega: &Vector3<f64>, v: &Vector3<f64>) -> Pose {
    let theta = omega.norm();
    let rotation = UnitQuaternion::from_scaled_axis(*omega);
    let w = hat(omega);
    let (a, b) = if theta < 1e-9 {
        (0.5 - theta * theta / 24.0, 1.0 / 6.0 - theta * theta / 120.0)
    } else {
        let t2 = theta * theta;
        ((1.0 - theta.cos()) / t2, (theta - theta.sin()) / (t2 * theta))
    };
    let vm = Matrix3::identity() + a * w + b * w * w;
    Isometry3::from_parts(Translation3::from(vm * v), rotation)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolatedPose {
    pub pose: Pose,
    /// Set when the relative rotation is within tolerance of pi and the
    /// slerp fallback was used.
    pub degenerate: bool,
}

/// Precomputed geodesic `r -> exp(r log(Q P^-1)) P` between two poses.
#[derive(Debug, Clone)]
pub struct PoseInterpolator {
    start: Pose,
    end: Pose,
    twist: (Vector3<f64>, Vector3<f64>),
    degenerate: bool,
}

impl PoseInterpolator {
    pub fn new(start: Pose, end: Pose) -> Self {
        let rel = end * start.inverse();
        let degenerate = (rel.rotation.angle() - std::f64::consts::PI).abs() < PI_DEGENERACY_TOLERANCE;
        let twist = if degenerate { (Vector3::zeros(), Vector3::zeros()) } else { se3_log(&rel) };
        Self { start, end, twist, degenerate }
    }

    pub fn start(&self) -> &Pose {
        &self.start
    }

    pub fn end(&self) -> &Pose {
        &self.end
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Pose at fraction `r`, clamped to `[0, 1]`. The endpoints are returned exactly.
    pub fn at(&self, r: f64) -> Pose {
        let r = r.clamp(0.0, 1.0);
        if r == 0.0 {
            return self.start;
        }
        if r == 1.0 {
            return self.end;
        }
        if self.degenerate {
            let rotation = self.start.rotation.slerp(&self.end.rotation, r);
            let translation = self.start.translation.vector.lerp(&self.end.translation.vector, r);
            return Isometry3::from_parts(Translation3::from(translation), rotation);
        }
        se3_exp(&(r * self.twist.0), &(r * self.twist.1)) * self.start
    }
}

pub fn interpolate_pose(start: &Pose, end: &Pose, r: f64) -> InterpolatedPose {
    let interp = PoseInterpolator::new(*start, *end);
    InterpolatedPose { pose: interp.at(r), degenerate: interp.degenerate }
}
