//! Scenario sweeps: mobility loop, floods from every source in every
//! snapshot, aggregation and relative-change tables.
//!
//! Random streams are keyed by `(tag, snapshot, source)` only. Every swept
//! value therefore sees the same initial placement, the same headings and
//! the same per-link draws, which makes comparisons across the sweep use
//! common random numbers as well as comparisons across `p_c`.

use std::time::Instant;

use noisyflood_core::flood::flood_coupled;
use noisyflood_core::metrics::{aggregate, rch_of, relative_change, ret_of};
use noisyflood_core::rng::{self, derive_substream};
use noisyflood_core::{MobilityState, Point, ScenarioConfig, Sources, Topology};
use rayon::prelude::*;
use thiserror::Error;

const TAG_MOBILITY: u64 = 0;
const TAG_SOURCES: u64 = 1;
const TAG_FLOOD: u64 = 2;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] noisyflood_core::Error),
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// The parameter a scenario sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Varied {
    RetransmitProbability,
    NodeCount,
    Speed,
    RadioRange,
}

impl Varied {
    /// Config-file and CSV name.
    pub fn key(&self) -> &'static str {
        match self {
            Varied::RetransmitProbability => "p_r",
            Varied::NodeCount => "n",
            Varied::Speed => "u",
            Varied::RadioRange => "R",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        [
            Varied::RetransmitProbability,
            Varied::NodeCount,
            Varied::Speed,
            Varied::RadioRange,
        ]
        .into_iter()
        .find(|v| v.key() == key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub varied: Varied,
    pub values: Vec<f64>,
    pub p_c_grid: Vec<f64>,
    pub base: ScenarioConfig,
}

impl SweepSpec {
    /// The base config with the swept parameter set to `value`.
    pub fn config_for(&self, value: f64) -> ScenarioConfig {
        let mut cfg = self.base.clone();
        cfg.p_c_values = self.p_c_grid.clone();
        match self.varied {
            Varied::RetransmitProbability => cfg.p_r = value,
            Varied::NodeCount => cfg.n = value as usize,
            Varied::Speed => cfg.speed_mps = value,
            Varied::RadioRange => cfg.radio_range_m = value,
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.values.is_empty() {
            return Err(RunError::InvalidSpec("no swept values".into()));
        }
        if self.p_c_grid.last() != Some(&1.0) {
            return Err(RunError::InvalidSpec(
                "p_c grid must end with the noiseless baseline 1.0".into(),
            ));
        }
        if self.varied == Varied::NodeCount && self.values.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err(RunError::InvalidSpec("node counts must be integers".into()));
        }
        for &v in &self.values {
            self.config_for(v).validate()?;
        }
        Ok(())
    }

    /// Canonical `key = value` rendering, the input of [`SweepSpec::hash`].
    pub fn canonical(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ");
        let b = &self.base;
        let mut lines = vec![
            format!("n = {}", b.n),
            format!("area_w = {}", b.area.width),
            format!("area_h = {}", b.area.height),
            format!("R = {}", b.radio_range_m),
            format!("u = {}", b.speed_mps),
            format!("p_r = {}", b.p_r),
            format!("p_c_list = {}", join(&self.p_c_grid)),
            format!("t_sim = {}", b.sim_time_s),
            format!(
                "sources = {}",
                match b.sources {
                    Sources::All => "all".to_string(),
                    Sources::Sample(k) => k.to_string(),
                }
            ),
            format!("vary = {}", self.varied.key()),
            format!("values = {}", join(&self.values)),
        ];
        if let Some(k) = b.n_intv {
            lines.push(format!("n_intv = {k}"));
        }
        lines.join("\n")
    }

    /// 64-bit FNV-1a of [`SweepSpec::canonical`], as 16 hex digits.
    pub fn hash(&self) -> String {
        let h = self.canonical().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
        });
        format!("{h:016x}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub varied_value: f64,
    pub p_c: f64,
    pub rch: f64,
    pub rch_stderr: f64,
    pub ret: f64,
    pub ret_stderr: f64,
    /// Percentage drop of RCH from the `p_c = 1` row of the same group;
    /// NaN when that baseline is zero.
    pub s_rch: f64,
    pub s_ret: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub config_hash: String,
    pub seed: u64,
    pub runtime_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub varied: Varied,
    pub rows: Vec<ResultRow>,
    pub metadata: Metadata,
}

impl ResultTable {
    /// Rows of one swept value, in grid order.
    pub fn group(&self, value: f64) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(move |r| r.varied_value == value)
    }

    pub fn row(&self, value: f64, p_c: f64) -> Option<&ResultRow> {
        self.group(value).find(|r| (r.p_c - p_c).abs() < 1e-9)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 lets the pool pick.
    pub parallelism: usize,
}

/// Positions of every snapshot of the mobility loop. The first snapshot is
/// taken after one pause interval of motion.
pub fn snapshot_positions(cfg: &ScenarioConfig, seed: u64) -> Result<Vec<Vec<Point>>, RunError> {
    let count = cfg.snapshot_count()?;
    let mut stream = derive_substream(seed, &[TAG_MOBILITY]);
    let mut state = MobilityState::init(&mut stream, cfg.n, &cfg.area)?;
    let pause = if cfg.speed_mps > 0.0 {
        Some(cfg.pause_time()?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        if let Some(dt) = pause {
            state = state.step(&mut stream, cfg.speed_mps, dt, &cfg.area)?;
        }
        out.push(state.positions.clone());
    }
    Ok(out)
}

/// Flood sources of one snapshot, ascending.
pub fn snapshot_sources(sources: Sources, n: usize, seed: u64, snapshot: usize) -> Vec<usize> {
    match sources {
        Sources::All => (0..n).collect(),
        Sources::Sample(k) => {
            let mut stream = derive_substream(seed, &[TAG_SOURCES, snapshot as u64]);
            let mut ids: Vec<usize> = (0..n).collect();
            for i in 0..k.min(n) {
                let j = i + rng::index(&mut stream, n - i);
                ids.swap(i, j);
            }
            let mut picked = ids[..k.min(n)].to_vec();
            picked.sort_unstable();
            picked
        }
    }
}

/// Per-run `(rch, ret)` samples for every grid point, in (snapshot, source)
/// order: `samples[p_c index][run]`.
fn sweep_point(cfg: &ScenarioConfig, seed: u64, pool: &rayon::ThreadPool) -> Result<Vec<Vec<(f64, f64)>>, RunError> {
    let snapshots = snapshot_positions(cfg, seed)?;
    let grid = &cfg.p_c_values;
    let n = cfg.n;
    let per_snapshot: Vec<Vec<Vec<(f64, f64)>>> = pool.install(|| {
        snapshots
            .par_iter()
            .enumerate()
            .map(|(s, positions)| {
                let topo = Topology::build(positions, cfg.radio_range_m)?;
                let sources = snapshot_sources(cfg.sources, n, seed, s);
                let mut cells = vec![Vec::with_capacity(sources.len()); grid.len()];
                for &src in &sources {
                    let mut stream = derive_substream(seed, &[TAG_FLOOD, s as u64, src as u64]);
                    let outcomes = flood_coupled(&topo, src, cfg.p_r, grid, &mut stream)?;
                    for (cell, out) in cells.iter_mut().zip(&outcomes) {
                        cell.push((rch_of(out, n), ret_of(out, n)));
                    }
                }
                Ok(cells)
            })
            .collect::<Result<_, RunError>>()
    })?;

    let mut merged = vec![Vec::new(); grid.len()];
    for cells in per_snapshot {
        for (all, cell) in merged.iter_mut().zip(cells) {
            all.extend(cell);
        }
    }
    Ok(merged)
}

/// Runs the whole sweep. Output depends only on `(spec, seed)`, never on
/// `opts.parallelism`.
pub fn run_scenario(spec: &SweepSpec, seed: u64, opts: &RunOptions) -> Result<ResultTable, RunError> {
    spec.validate()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.parallelism).build()?;

    let mut rows = Vec::with_capacity(spec.values.len() * spec.p_c_grid.len());
    for &value in &spec.values {
        let cfg = spec.config_for(value);
        let samples = sweep_point(&cfg, seed, &pool)?;
        let points = samples.iter().map(|s| aggregate(s)).collect::<Result<Vec<_>, _>>()?;
        let baseline = points.last().expect("grid is non-empty");
        for (&p_c, m) in spec.p_c_grid.iter().zip(&points) {
            rows.push(ResultRow {
                varied_value: value,
                p_c,
                rch: m.rch,
                rch_stderr: m.rch_stderr,
                ret: m.ret,
                ret_stderr: m.ret_stderr,
                s_rch: relative_change(baseline.rch, m.rch).unwrap_or(f64::NAN),
                s_ret: relative_change(baseline.ret, m.ret).unwrap_or(f64::NAN),
                samples: m.sample_count,
            });
        }
    }

    Ok(ResultTable {
        varied: spec.varied,
        rows,
        metadata: Metadata {
            config_hash: spec.hash(),
            seed,
            runtime_secs: started.elapsed().as_secs_f64(),
        },
    })
}
