//! Pose-interpolated feasible domain of a swing foot.
//!
//! A point is feasible when the leg can place its foot there, within joint
//! limits and without sphere collisions, at the base pose interpolated by the
//! point's horizontal progress along a reference segment.

use nalgebra::{Point2, Point3, Vector2};
use serde::{Deserialize, Serialize};

use crate::leg::LegModel;
use crate::pose::{Pose, PoseInterpolator};
use crate::sdf::SignedDistanceField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionSegment {
    /// Horizontal segment between the two base translations.
    Base,
    /// Horizontal segment between the lift-off and touch-down footholds.
    #[default]
    Foothold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainConfig {
    pub projection: ProjectionSegment,
    /// Added to every sphere radius.
    pub collision_margin: f64,
    /// Joint limits shrink by this much on both sides.
    pub limit_margin: f64,
    /// Skip the foot sphere; the foot itself is treated as a point.
    pub exempt_foot: bool,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self { projection: ProjectionSegment::Foothold, collision_margin: 0.0, limit_margin: 0.0, exempt_foot: true }
    }
}

#[derive(Debug, Clone)]
pub struct PitdDomain<'a> {
    pub leg_index: usize,
    leg: &'a LegModel,
    sdf: &'a SignedDistanceField,
    interp: PoseInterpolator,
    segment: (Point2<f64>, Point2<f64>),
    config: DomainConfig,
}

impl<'a> PitdDomain<'a> {
    /// `footholds` is required for [`ProjectionSegment::Foothold`] and ignored otherwise.
    pub fn new(
        leg_index: usize,
        leg: &'a LegModel,
        sdf: &'a SignedDistanceField,
        start: Pose,
        end: Pose,
        footholds: (Point3<f64>, Point3<f64>),
        config: DomainConfig,
    ) -> Self {
        let segment = match config.projection {
            ProjectionSegment::Base => (
                start.translation.vector.xy().into(),
                end.translation.vector.xy().into(),
            ),
            ProjectionSegment::Foothold => (footholds.0.xy(), footholds.1.xy()),
        };
        Self { leg_index, leg, sdf, interp: PoseInterpolator::new(start, end), segment, config }
    }

    pub fn leg(&self) -> &'a LegModel {
        self.leg
    }

    pub fn sdf(&self) -> &'a SignedDistanceField {
        self.sdf
    }

    pub fn config(&self) -> &DomainConfig {
        &self.config
    }

    pub fn start_pose(&self) -> &Pose {
        self.interp.start()
    }

    pub fn end_pose(&self) -> &Pose {
        self.interp.end()
    }

    pub fn interpolator(&self) -> &PoseInterpolator {
        &self.interp
    }

    /// Same poses and leg with a different configuration.
    pub fn with_config(&self, config: DomainConfig, footholds: (Point3<f64>, Point3<f64>)) -> Self {
        Self::new(self.leg_index, self.leg, self.sdf, *self.interp.start(), *self.interp.end(), footholds, config)
    }

    /// Clamped horizontal progress of `s` along the reference segment; zero
    /// for a degenerate segment.
    pub fn interpolation_fraction(&self, s: &Point3<f64>) -> f64 {
        let (a, b) = self.segment;
        let d: Vector2<f64> = b - a;
        let len2 = d.norm_squared();
        if len2 <= 1e-18 {
            return 0.0;
        }
        ((s.xy() - a).dot(&d) / len2).clamp(0.0, 1.0)
    }

    pub fn base_at(&self, s: &Point3<f64>) -> Pose {
        self.interp.at(self.interpolation_fraction(s))
    }

    pub fn contains(&self, s: &Point3<f64>) -> bool {
        self.contains_at(s, self.interpolation_fraction(s))
    }

    /// Feasibility of `s` at an explicit interpolation fraction.
    pub fn contains_at(&self, s: &Point3<f64>, r: f64) -> bool {
        let base = self.interp.at(r);
        let hip = self.leg.hip_position(&base);
        if (s - hip).norm() > self.leg.reach() + 1e-9 {
            return false;
        }
        self.leg
            .inverse_kinematics_with_margin(s, &base, self.config.limit_margin)
            .iter()
            .any(|q| !self.leg.leg_collides(q, &base, self.sdf, self.config.collision_margin, self.config.exempt_foot))
    }
}

/// A set of feasible foot positions with a known horizontal extent.
pub trait FeasibleSet {
    fn contains(&self, s: &Point3<f64>) -> bool;

    /// Horizontal box `(min, max)` holding every feasible point.
    fn xy_bounds(&self) -> (Point2<f64>, Point2<f64>);
}

impl FeasibleSet for PitdDomain<'_> {
    fn contains(&self, s: &Point3<f64>) -> bool {
        PitdDomain::contains(self, s)
    }

    fn xy_bounds(&self) -> (Point2<f64>, Point2<f64>) {
        let reach = self.leg.reach();
        let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        // The hip path bends with the body rotation; nine samples plus the
        // caller's one-cell slack cover it at desk scale.
        for k in 0..=8 {
            let hip = self.leg.hip_position(&self.interp.at(k as f64 / 8.0));
            lo = Point2::new(lo.x.min(hip.x - reach), lo.y.min(hip.y - reach));
            hi = Point2::new(hi.x.max(hip.x + reach), hi.y.max(hip.y + reach));
        }
        (lo, hi)
    }
}
