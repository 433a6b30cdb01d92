//! Random placement and random-direction motion with mirror reflection at
//! the area boundary.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand_core::RngCore;

use crate::model::{check_positive, Area, Point};
use crate::{rng, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MobilityState {
    pub positions: Vec<Point>,
    /// Heading of the most recent move, radians in `[0, 2pi)`.
    pub headings: Vec<f64>,
}

impl MobilityState {
    /// Uniform placement over the area with uniform initial headings.
    ///
    /// Draw order per node is `x`, `y`, heading, so the first `k` nodes of a
    /// larger placement coincide with a `k`-node placement from the same
    /// stream.
    pub fn init<R: RngCore + ?Sized>(rng: &mut R, n: usize, area: &Area) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewNodes(0));
        }
        let mut positions = Vec::with_capacity(n);
        let mut headings = Vec::with_capacity(n);
        for _ in 0..n {
            let x = rng::unit(rng) * area.width;
            let y = rng::unit(rng) * area.height;
            positions.push(Point::new(x, y));
            headings.push(rng::unit(rng) * TAU);
        }
        Ok(Self { positions, headings })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Moves every node `speed * dt` meters along a freshly drawn heading,
    /// reflecting off the walls.
    pub fn step<R: RngCore + ?Sized>(&self, rng: &mut R, speed: f64, dt: f64, area: &Area) -> Result<Self> {
        check_positive("dt", dt)?;
        if !(speed.is_finite() && speed >= 0.0) {
            return Err(Error::NotPositive {
                name: "u",
                value: speed,
            });
        }
        let travel = speed * dt;
        let mut next = self.clone();
        for (pos, heading) in next.positions.iter_mut().zip(next.headings.iter_mut()) {
            let theta = rng::unit(rng) * TAU;
            *heading = theta;
            if travel > 0.0 {
                *pos = advance(*pos, theta, travel, area);
            }
        }
        Ok(next)
    }
}

/// Straight-line move of length `distance` from `from`, folded back into the
/// area. Folding is a mirror reflection, so the path length is preserved.
pub fn advance(from: Point, heading: f64, distance: f64, area: &Area) -> Point {
    Point::new(
        reflect(from.x + distance * libm::cos(heading), area.width),
        reflect(from.y + distance * libm::sin(heading), area.height),
    )
}

/// Maps an unconstrained coordinate onto `[0, limit]` by repeated mirror
/// reflection off `0` and `limit`.
fn reflect(value: f64, limit: f64) -> f64 {
    let period = 2.0 * limit;
    let mut m = value % period;
    if m < 0.0 {
        m += period;
    }
    let folded = if m > limit { period - m } else { m };
    folded.clamp(0.0, limit)
}
