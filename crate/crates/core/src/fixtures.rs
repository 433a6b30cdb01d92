//! Small reference topologies for the oracle cross-check. Several links sit
//! exactly at the radio range, so a strict range test changes them.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::model::{Point, RangeRule, Topology};

pub const RANGE: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    /// 0 - 1 - 2 on a line, 100 m apart.
    Chain3,
    /// Hub with three leaves at exactly 100 m.
    Star4,
    /// Square of side 100 m; diagonals out of range.
    Cycle4,
    /// Triangle {0,1,2} bridged at exactly 100 m to the chain 3 - 4 - 5.
    TwoCluster6,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [Fixture::Chain3, Fixture::Star4, Fixture::Cycle4, Fixture::TwoCluster6];

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Chain3 => "chain-3",
            Fixture::Star4 => "star-4",
            Fixture::Cycle4 => "cycle-4",
            Fixture::TwoCluster6 => "two-cluster-6",
        }
    }

    pub fn positions(&self) -> Vec<Point> {
        let coords: &[(f64, f64)] = match self {
            Fixture::Chain3 => &[(0.0, 0.0), (100.0, 0.0), (200.0, 0.0)],
            Fixture::Star4 => &[(100.0, 100.0), (200.0, 100.0), (100.0, 200.0), (0.0, 100.0)],
            Fixture::Cycle4 => &[(0.0, 0.0), (100.0, 0.0), (100.0, 100.0), (0.0, 100.0)],
            Fixture::TwoCluster6 => &[
                (0.0, 0.0),
                (60.0, 0.0),
                (30.0, 50.0),
                (160.0, 0.0),
                (250.0, 0.0),
                (340.0, 0.0),
            ],
        };
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    pub fn topology(&self) -> Topology {
        self.topology_with(RangeRule::Inclusive)
    }

    pub fn topology_with(&self, rule: RangeRule) -> Topology {
        Topology::build_with(&self.positions(), RANGE, rule).expect("fixture geometry is valid")
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownFixture;

impl fmt::Display for UnknownFixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown fixture (expected chain-3, star-4, cycle-4 or two-cluster-6)")
    }
}

impl FromStr for Fixture {
    type Err = UnknownFixture;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fixture::ALL.into_iter().find(|f| f.name() == s).ok_or(UnknownFixture)
    }
}
