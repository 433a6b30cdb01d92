//! Monte Carlo versus exact enumeration on the bundled fixtures.

use std::fmt;

use noisyflood_core::fixtures::Fixture;
use noisyflood_core::flood::{flood, FloodParams};
use noisyflood_core::metrics::{aggregate, rch_of, ret_of};
use noisyflood_core::oracle::exact_metrics;
use noisyflood_core::rng::derive_substream;
use noisyflood_core::RangeRule;
use rayon::prelude::*;

pub const GRID: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_RUNS: usize = 100_000;
/// Allowed distance between the Monte Carlo mean and the exact value, in
/// standard errors.
pub const SIGMAS: f64 = 3.0;
/// Slack for zero-variance cells, where the comparison is exact up to
/// rounding of the mean.
const EXACT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub fixtures: Vec<Fixture>,
    pub runs: usize,
    pub seed: u64,
    /// Builds the Monte Carlo topologies with `d < R` while the oracle keeps
    /// `d <= R`. The check must then fail.
    pub strict_range_mutation: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            fixtures: Fixture::ALL.to_vec(),
            runs: DEFAULT_RUNS,
            seed: 42,
            strict_range_mutation: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCheck {
    pub monte_carlo: f64,
    pub stderr: f64,
    pub exact: f64,
}

impl MetricCheck {
    pub fn passed(&self) -> bool {
        let diff = (self.monte_carlo - self.exact).abs();
        diff <= SIGMAS * self.stderr || diff <= EXACT_SLACK
    }

    /// Distance in standard errors (infinite for a zero-variance miss).
    pub fn z(&self) -> f64 {
        let diff = (self.monte_carlo - self.exact).abs();
        if diff <= EXACT_SLACK {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub fixture: Fixture,
    pub p_r: f64,
    pub p_c: f64,
    pub rch: MetricCheck,
    pub ret: MetricCheck,
}

impl CellCheck {
    pub fn passed(&self) -> bool {
        self.rch.passed() && self.ret.passed()
    }
}

impl fmt::Display for CellCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<14} p_r={:<5} p_c={:<5} rch mc={:.5} exact={:.5} z={:.2}  ret mc={:.5} exact={:.5} z={:.2}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.fixture.name(),
            self.p_r,
            self.p_c,
            self.rch.monte_carlo,
            self.rch.exact,
            self.rch.z(),
            self.ret.monte_carlo,
            self.ret.exact,
            self.ret.z(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub cells: Vec<CellCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(CellCheck::passed)
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| !c.passed()).count()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            writeln!(f, "{c}")?;
        }
        write!(
            f,
            "{} of {} cells within {SIGMAS} standard errors",
            self.cells.len() - self.failures(),
            self.cells.len()
        )
    }
}

/// Floods from node 0 of every fixture over the `GRID x GRID` parameter
/// grid.
pub fn run_check(opts: &CheckOptions) -> Result<OracleReport, noisyflood_core::Error> {
    let mut cells = Vec::new();
    for (fi, &fixture) in opts.fixtures.iter().enumerate() {
        for (ri, &p_r) in GRID.iter().enumerate() {
            for (ci, &p_c) in GRID.iter().enumerate() {
                cells.push((fi, fixture, ri, p_r, ci, p_c));
            }
        }
    }
    let source = 0;
    let cells = cells
        .into_par_iter()
        .map(|(fi, fixture, ri, p_r, ci, p_c)| {
            let params = FloodParams::new(p_r, p_c)?;
            let exact = exact_metrics(&fixture.topology(), source, params)?;
            let rule = if opts.strict_range_mutation {
                RangeRule::Strict
            } else {
                RangeRule::Inclusive
            };
            let topo = fixture.topology_with(rule);
            let n = topo.len();
            let mut stream = derive_substream(opts.seed, &[fi as u64, ri as u64, ci as u64]);
            let samples = (0..opts.runs)
                .map(|_| flood(&topo, source, params, &mut stream).map(|o| (rch_of(&o, n), ret_of(&o, n))))
                .collect::<Result<Vec<_>, _>>()?;
            let mc = aggregate(&samples)?;
            Ok(CellCheck {
                fixture,
                p_r,
                p_c,
                rch: MetricCheck {
                    monte_carlo: mc.rch,
                    stderr: mc.rch_stderr,
                    exact: exact.expected_rch,
                },
                ret: MetricCheck {
                    monte_carlo: mc.ret,
                    stderr: mc.ret_stderr,
                    exact: exact.expected_ret,
                },
            })
        })
        .collect::<Result<Vec<_>, noisyflood_core::Error>>()?;
    Ok(OracleReport { cells })
}
