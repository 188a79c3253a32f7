//! Robot descriptions: a set of legs on a rigid base plus the nominal stance
//! used to script gaits. Bundled presets are approximate.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::leg::{subdivided_spheres, JointLimits, LegModel};
use crate::pose::pose_from_xyz_rpy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gait {
    /// Two alternating tripods (hexapod).
    Tripod,
    /// Diagonal pairs (quadruped).
    Trot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotModel {
    pub name: String,
    pub legs: Vec<LegModel>,
    /// Base height above the local ground in the nominal stance.
    pub body_height: f64,
    /// Horizontal hip-to-foot distance in the nominal stance.
    pub stance_reach: f64,
    pub gait: Gait,
}

impl RobotModel {
    pub fn validate(&self) -> Result<()> {
        if self.legs.is_empty() {
            return Err(invalid(format!("robot {} has no legs", self.name)));
        }
        for leg in &self.legs {
            leg.validate()?;
        }
        if !(self.body_height > 0.0 && self.stance_reach > 0.0) {
            return Err(invalid(format!("robot {}: stance must be positive", self.name)));
        }
        for group in self.swing_groups() {
            if group.iter().any(|&k| k >= self.legs.len()) {
                return Err(invalid(format!("robot {}: gait does not fit {} legs", self.name, self.legs.len())));
            }
        }
        Ok(())
    }

    /// Legs that swing together, in gait order.
    pub fn swing_groups(&self) -> Vec<Vec<usize>> {
        match self.gait {
            Gait::Tripod => vec![vec![0, 2, 4], vec![1, 3, 5]],
            Gait::Trot => vec![vec![0, 3], vec![1, 2]],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "elspider_air" => Ok(elspider_air()),
            "a1" => Ok(a1()),
            other => Err(invalid(format!("unknown robot preset '{other}' (expected elspider_air or a1)"))),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let robot: Self = serde_json::from_slice(&std::fs::read(path)?)?;
        robot.validate()?;
        Ok(robot)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }
}

/// Hexapod with legs ordered left-front, right-middle, left-back,
/// right-front, left-middle, right-back so the tripods are {0,2,4} and {1,3,5}.
pub fn elspider_air() -> RobotModel {
    use std::f64::consts::FRAC_PI_4;
    let limits = JointLimits { min: [-0.8, -1.3, 0.3], max: [0.8, 1.0, 2.7] };
    let lengths = [0.10, 0.20, 0.20];
    let mounts = [
        ("lf", [0.20, 0.12], FRAC_PI_4),
        ("rm", [0.0, -0.15], -2.0 * FRAC_PI_4),
        ("lb", [-0.20, 0.12], 3.0 * FRAC_PI_4),
        ("rf", [0.20, -0.12], -FRAC_PI_4),
        ("lm", [0.0, 0.15], 2.0 * FRAC_PI_4),
        ("rb", [-0.20, -0.12], -3.0 * FRAC_PI_4),
    ];
    let legs = mounts
        .iter()
        .map(|(name, xy, yaw)| LegModel {
            name: (*name).to_string(),
            hip_mount: pose_from_xyz_rpy([xy[0], xy[1], 0.0], [0.0, 0.0, *yaw]),
            link_lengths: lengths,
            joint_limits: limits,
            collision_spheres: subdivided_spheres(lengths[2], 0.03, 0.05, 0.02),
        })
        .collect();
    RobotModel { name: "elspider_air".into(), legs, body_height: 0.18, stance_reach: 0.32, gait: Gait::Tripod }
}

/// Quadruped with sideways-mounted legs ordered left-front, right-front,
/// left-back, right-back; trot pairs {0,3} and {1,2}.
pub fn a1() -> RobotModel {
    use std::f64::consts::FRAC_PI_2;
    let limits = JointLimits { min: [-0.8, -1.3, 0.3], max: [0.8, 1.2, 2.7] };
    let lengths = [0.08, 0.20, 0.20];
    let mounts = [
        ("lf", [0.18, 0.05], FRAC_PI_2),
        ("rf", [0.18, -0.05], -FRAC_PI_2),
        ("lb", [-0.18, 0.05], FRAC_PI_2),
        ("rb", [-0.18, -0.05], -FRAC_PI_2),
    ];
    let legs = mounts
        .iter()
        .map(|(name, xy, yaw)| LegModel {
            name: (*name).to_string(),
            hip_mount: pose_from_xyz_rpy([xy[0], xy[1], 0.0], [0.0, 0.0, *yaw]),
            link_lengths: lengths,
            joint_limits: limits,
            collision_spheres: subdivided_spheres(lengths[2], 0.02, 0.03, 0.015),
        })
        .collect();
    RobotModel { name: "a1".into(), legs, body_height: 0.22, stance_reach: 0.24, gait: Gait::Trot }
}
