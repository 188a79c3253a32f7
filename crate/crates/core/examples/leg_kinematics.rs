//! Inverse and forward kinematics of every leg of both robot presets at its
//! nominal standing foothold.

use kcfrc::pose::pose_from_xyz_rpy;
use kcfrc::robot::{a1, elspider_air};
use kcfrc::scene::nominal_foot;
use nalgebra::Point3;

fn main() {
    for robot in [elspider_air(), a1()] {
        let base = pose_from_xyz_rpy([0.0, 0.0, robot.body_height], [0.05, -0.03, 0.2]);
        println!("{} ({} legs)", robot.name, robot.legs.len());
        for (i, leg) in robot.legs.iter().enumerate() {
            let xy = nominal_foot(&robot, leg, &base);
            let foot = Point3::new(xy.x, xy.y, 0.0);
            let solutions = leg.inverse_kinematics(&foot, &base);
            let error = solutions
                .iter()
                .map(|s| (leg.forward_kinematics(s, &base) - foot).norm())
                .fold(0.0, f64::max);
            let angles: Vec<String> = solutions
                .iter()
                .map(|s| format!("[{:+.3} {:+.3} {:+.3}]", s.yaw, s.hip_pitch, s.knee_pitch))
                .collect();
            println!(
                "  leg {i}: foot ({:+.3}, {:+.3}), joints {}, round-trip error {error:.1e} m",
                foot.x,
                foot.y,
                angles.join(" ")
            );
        }
    }
}
