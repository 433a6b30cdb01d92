//! Shared domain types, topology construction and the closed-form scenario
//! quantities (pause time, snapshot count, node density).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point) -> f64 {
        libm::sqrt(self.distance_sq(other))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Rectangular deployment area anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        check_positive("area_w", width)?;
        check_positive("area_h", height)?;
        Ok(Self { width, height })
    }

    /// Square area of the given side length.
    pub fn square(side: f64) -> Result<Self> {
        Self::new(side, side)
    }

    pub fn size(&self) -> f64 {
        self.width * self.height
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

/// Per-node flood bookkeeping: the retransmission flag and reception count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeState {
    pub retransmitted: bool,
    pub receptions: u32,
}

impl NodeState {
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// How the link test treats a node placed exactly at the radio range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeRule {
    /// `d <= R` is a link.
    #[default]
    Inclusive,
    /// `d < R` is a link. Only used to build deliberately mismatched
    /// topologies for negative tests.
    Strict,
}

/// Frozen snapshot of node positions with its within-range adjacency.
///
/// Adjacency is stored in compressed rows: the neighbours of node `i` are
/// `targets[offsets[i]..offsets[i + 1]]`, sorted ascending. The position of a
/// neighbour entry in `targets` doubles as the index of the directed link
/// `i -> j`, which the flood engine uses to key its per-link draws.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    positions: Vec<Point>,
    radio_range: f64,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Topology {
    /// Builds the inclusive (`d <= R`) unit-disk graph over `positions`.
    pub fn build(positions: &[Point], radio_range: f64) -> Result<Self> {
        Self::build_with(positions, radio_range, RangeRule::Inclusive)
    }

    pub fn build_with(positions: &[Point], radio_range: f64, rule: RangeRule) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::TooFewNodes(positions.len()));
        }
        check_positive("R", radio_range)?;
        if let Some(index) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFiniteCoordinate { index });
        }

        let range_sq = radio_range * radio_range;
        let in_range = |d_sq: f64| match rule {
            RangeRule::Inclusive => d_sq <= range_sq,
            RangeRule::Strict => d_sq < range_sq,
        };

        let n = positions.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (i, p) in positions.iter().enumerate() {
            for (j, q) in positions.iter().enumerate() {
                if i != j && in_range(p.distance_sq(q)) {
                    targets.push(j);
                }
            }
            offsets.push(targets.len());
        }

        Ok(Self {
            positions: positions.to_vec(),
            radio_range,
            offsets,
            targets,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Index of the first directed link leaving `node`.
    pub fn link_offset(&self, node: usize) -> usize {
        self.offsets[node]
    }

    /// Number of directed links, i.e. twice the number of edges.
    pub fn link_count(&self) -> usize {
        self.targets.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Nodes reachable from `source` over any number of hops, `source`
    /// included, as a membership mask.
    pub fn component_of(&self, source: usize) -> Vec<bool> {
        let mut seen = alloc::vec![false; self.len()];
        let mut stack = alloc::vec![source];
        seen[source] = true;
        while let Some(t) = stack.pop() {
            for &j in self.neighbors(t) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }
}

/// Which nodes act as flood sources in every snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sources {
    All,
    Sample(usize),
}

impl Sources {
    pub fn count(&self, n: usize) -> usize {
        match *self {
            Sources::All => n,
            Sources::Sample(k) => k,
        }
    }
}

/// One parameter point of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n: usize,
    pub area: Area,
    pub radio_range_m: f64,
    pub speed_mps: f64,
    pub p_r: f64,
    pub p_c_values: Vec<f64>,
    pub sim_time_s: f64,
    pub seed: u64,
    pub sources: Sources,
    /// Overrides the derived snapshot count; required when `speed_mps` is 0.
    pub n_intv: Option<usize>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewNodes(self.n));
        }
        check_positive("area_w", self.area.width)?;
        check_positive("area_h", self.area.height)?;
        check_positive("R", self.radio_range_m)?;
        if !(self.speed_mps.is_finite() && self.speed_mps >= 0.0) {
            return Err(Error::NotPositive {
                name: "u",
                value: self.speed_mps,
            });
        }
        check_positive("t_sim", self.sim_time_s)?;
        check_probability("p_r", self.p_r)?;
        check_grid("p_c_list", &self.p_c_values)?;
        if let Sources::Sample(k) = self.sources {
            if k == 0 || k > self.n {
                return Err(Error::SampleTooLarge {
                    sample: k,
                    nodes: self.n,
                });
            }
        }
        if self.n_intv == Some(0) {
            return Err(Error::NotPositive {
                name: "n_intv",
                value: 0.0,
            });
        }
        self.snapshot_count().map(|_| ())
    }

    /// Pause time between snapshots, `0.75 R / u`.
    pub fn pause_time(&self) -> Result<f64> {
        pause_time(self.radio_range_m, self.speed_mps)
    }

    /// Snapshot count: the explicit override if present, else
    /// `floor(t_sim / pause_time)`.
    pub fn snapshot_count(&self) -> Result<usize> {
        match self.n_intv {
            Some(k) => Ok(k),
            None => Ok(snapshot_count(self.sim_time_s, self.pause_time()?)),
        }
    }

    pub fn density(&self) -> f64 {
        density(self.n, self.radio_range_m, &self.area)
    }
}

/// Pause time `0.75 R / u`; undefined for a static network.
pub fn pause_time(radio_range: f64, speed: f64) -> Result<f64> {
    if speed == 0.0 {
        return Err(Error::ZeroSpeed);
    }
    check_positive("u", speed)?;
    check_positive("R", radio_range)?;
    Ok(0.75 * (radio_range / speed))
}

/// Largest `k` with `k * pause <= sim_time`.
pub fn snapshot_count(sim_time: f64, pause: f64) -> usize {
    let mut k = libm::floor(sim_time / pause).max(0.0) as usize;
    // The quotient can land one ulp off an integer boundary.
    while k > 0 && k as f64 * pause > sim_time {
        k -= 1;
    }
    while (k + 1) as f64 * pause <= sim_time {
        k += 1;
    }
    k
}

/// Mean number of nodes covered by one transmitter, `pi n R^2 / A`.
pub fn density(n: usize, radio_range: f64, area: &Area) -> f64 {
    PI * n as f64 * radio_range * radio_range / area.size()
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::NotPositive { name, value })
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { name, value })
    }
}

pub(crate) fn check_grid(name: &'static str, values: &[f64]) -> Result<()> {
    for &v in values {
        check_probability(name, v)?;
    }
    if values.is_empty() || values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedProbabilities);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn two_nodes_in_range_are_mutual_neighbours() {
        let t = Topology::build(&pts(&[(0.0, 0.0), (50.0, 0.0)]), 100.0).unwrap();
        assert_eq!(t.neighbors(0), &[1]);
        assert_eq!(t.neighbors(1), &[0]);
    }

    #[test]
    fn two_nodes_out_of_range_are_isolated() {
        let t = Topology::build(&pts(&[(0.0, 0.0), (150.0, 0.0)]), 100.0).unwrap();
        assert!(t.neighbors(0).is_empty());
        assert!(t.neighbors(1).is_empty());
        assert_eq!(t.link_count(), 0);
    }

    #[test]
    fn boundary_distance_counts_as_in_range() {
        let p = pts(&[(0.0, 0.0), (100.0, 0.0), (200.0, 0.0)]);
        let t = Topology::build(&p, 100.0).unwrap();
        assert_eq!(t.neighbors(0), &[1]);
        assert_eq!(t.neighbors(1), &[0, 2]);
        assert_eq!(t.neighbors(2), &[1]);

        let strict = Topology::build_with(&p, 100.0, RangeRule::Strict).unwrap();
        assert_eq!(strict.link_count(), 0);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert_eq!(Topology::build(&pts(&[(0.0, 0.0)]), 100.0), Err(Error::TooFewNodes(1)));
        assert_eq!(
            Topology::build(&pts(&[(0.0, 0.0), (f64::NAN, 1.0)]), 100.0),
            Err(Error::NonFiniteCoordinate { index: 1 })
        );
        assert!(Topology::build(&pts(&[(0.0, 0.0), (1.0, 1.0)]), 0.0).is_err());
    }

    #[test]
    fn pause_time_and_snapshot_count_match_scenario_table() {
        let cases = [
            (100.0, 5.0, 15.0, 120),
            (75.0, 5.0, 11.25, 160),
            (125.0, 5.0, 18.75, 96),
            (100.0, 2.0, 37.5, 48),
            (100.0, 8.0, 9.375, 192),
        ];
        for (r, u, tau, k) in cases {
            let p = pause_time(r, u).unwrap();
            assert_eq!(p, tau);
            assert_eq!(snapshot_count(1800.0, p), k);
        }
        assert_eq!(pause_time(100.0, 0.0), Err(Error::ZeroSpeed));
    }

    #[test]
    fn density_values() {
        let a = Area::square(600.0).unwrap();
        assert!((density(100, 100.0, &a) - 8.73).abs() <= 0.01);
        assert!((density(100, 75.0, &a) - 4.91).abs() <= 0.01);
        assert_eq!(density(0, 100.0, &a), 0.0);
    }

    #[test]
    fn static_network_needs_explicit_snapshot_count() {
        let mut cfg = ScenarioConfig {
            n: 10,
            area: Area::square(600.0).unwrap(),
            radio_range_m: 100.0,
            speed_mps: 0.0,
            p_r: 1.0,
            p_c_values: vec![0.5, 1.0],
            sim_time_s: 1800.0,
            seed: 1,
            sources: Sources::All,
            n_intv: None,
        };
        assert_eq!(cfg.validate(), Err(Error::ZeroSpeed));
        cfg.n_intv = Some(1);
        assert_eq!(cfg.validate(), Ok(()));
        assert_eq!(cfg.snapshot_count(), Ok(1));
    }

    #[test]
    fn config_rejects_bad_probability() {
        let cfg = ScenarioConfig {
            n: 10,
            area: Area::square(600.0).unwrap(),
            radio_range_m: 100.0,
            speed_mps: 5.0,
            p_r: 1.5,
            p_c_values: vec![1.0],
            sim_time_s: 1800.0,
            seed: 1,
            sources: Sources::All,
            n_intv: None,
        };
        assert_eq!(
            cfg.validate(),
            Err(Error::ProbabilityOutOfRange {
                name: "p_r",
                value: 1.5
            })
        );
    }
}
