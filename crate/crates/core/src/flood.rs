//! The flood engine.
//!
//! Propagation is a FIFO traversal from the source. When node `t` transmits,
//! each neighbour `i` passes a reception test against `p_c`; a successful
//! reception increments `i`'s reception count and, if `i` has not yet
//! retransmitted, `i` then passes or fails a retransmission test against
//! `p_r`. The retransmission test happens once per node, at its first
//! successful reception. The source always transmits.
//!
//! The traversal is written once against [`Draws`], which decides every
//! reception and retransmission test. The random engine feeds it uniform
//! draws compared with `<=`; the exhaustive oracle feeds it fixed boolean
//! assignments.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::model::{check_grid, check_probability, NodeState, Topology};
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloodParams {
    pub p_r: f64,
    pub p_c: f64,
}

impl FloodParams {
    pub fn new(p_r: f64, p_c: f64) -> Result<Self> {
        check_probability("p_r", p_r)?;
        check_probability("p_c", p_c)?;
        Ok(Self { p_r, p_c })
    }
}

/// Decision source for the reception and retransmission tests.
pub trait Draws {
    /// Reception test on directed link `link` (see [`Topology`] for link
    /// numbering).
    fn delivered(&mut self, link: usize) -> bool;
    /// Retransmission test of a non-source node.
    fn retransmits(&mut self, node: usize) -> bool;
}

/// Result of one flood from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloodOutcome {
    source: usize,
    nodes: Vec<NodeState>,
    transmissions: usize,
}

impl FloodOutcome {
    pub fn source(&self) -> usize {
        self.source
    }

    /// Node states at the end of the run.
    pub fn states(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn is_reached(&self, node: usize) -> bool {
        node != self.source && self.nodes[node].receptions > 0
    }

    /// Non-source nodes that received the request at least once.
    pub fn reached(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&i| self.is_reached(i))
    }

    pub fn reached_count(&self) -> usize {
        self.reached().count()
    }

    /// Nodes that transmitted, the source included.
    pub fn retransmitters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&i| self.nodes[i].retransmitted)
    }

    pub fn transmissions(&self) -> usize {
        self.transmissions
    }

    pub fn receptions(&self, node: usize) -> u32 {
        self.nodes[node].receptions
    }
}

/// Runs one flood with decisions taken from `draws`.
pub fn propagate<D: Draws + ?Sized>(topology: &Topology, source: usize, draws: &mut D) -> Result<FloodOutcome> {
    let n = topology.len();
    if source >= n {
        return Err(Error::InvalidSource {
            source_id: source,
            nodes: n,
        });
    }
    let mut nodes = vec![NodeState::default(); n];
    let mut queue = VecDeque::with_capacity(n);
    nodes[source].retransmitted = true;
    queue.push_back(source);
    let mut transmissions = 1;

    while let Some(t) = queue.pop_front() {
        let base = topology.link_offset(t);
        for (k, &i) in topology.neighbors(t).iter().enumerate() {
            if !draws.delivered(base + k) {
                continue;
            }
            let state = &mut nodes[i];
            state.receptions += 1;
            // One retransmission test per node, at its first reception.
            if state.retransmitted || state.receptions > 1 {
                continue;
            }
            if draws.retransmits(i) {
                state.retransmitted = true;
                transmissions += 1;
                queue.push_back(i);
            }
        }
    }

    Ok(FloodOutcome {
        source,
        nodes,
        transmissions,
    })
}

/// Uniform draws for every directed link and every node, generated up front
/// so that the same realisation can be replayed at several probabilities.
#[derive(Debug, Clone)]
pub struct DrawTable {
    link: Vec<f64>,
    node: Vec<f64>,
}

impl DrawTable {
    pub fn sample<R: RngCore + ?Sized>(topology: &Topology, rng: &mut R) -> Self {
        let link = (0..topology.link_count()).map(|_| rng::unit(rng)).collect();
        let node = (0..topology.len()).map(|_| rng::unit(rng)).collect();
        Self { link, node }
    }

    /// Thresholded view of the table at one parameter point.
    pub fn at(&self, params: FloodParams) -> ThresholdDraws<'_> {
        ThresholdDraws { table: self, params }
    }
}

/// `xi <= p` tests over a [`DrawTable`]. A probability of exactly 0 always
/// fails, even for a zero draw.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdDraws<'a> {
    table: &'a DrawTable,
    params: FloodParams,
}

impl Draws for ThresholdDraws<'_> {
    fn delivered(&mut self, link: usize) -> bool {
        self.params.p_c > 0.0 && self.table.link[link] <= self.params.p_c
    }

    fn retransmits(&mut self, node: usize) -> bool {
        self.params.p_r > 0.0 && self.table.node[node] <= self.params.p_r
    }
}

/// One flood from `source` with fresh draws from `rng`.
pub fn flood<R: RngCore + ?Sized>(
    topology: &Topology,
    source: usize,
    params: FloodParams,
    rng: &mut R,
) -> Result<FloodOutcome> {
    check_source(topology, source)?;
    let table = DrawTable::sample(topology, rng);
    propagate(topology, source, &mut table.at(params))
}

/// Floods at each reception probability in `p_c_list` over one shared set of
/// draws (common random numbers). Because the reached set only grows when
/// more deliveries succeed, outcomes are nested pathwise along the list.
pub fn flood_coupled<R: RngCore + ?Sized>(
    topology: &Topology,
    source: usize,
    p_r: f64,
    p_c_list: &[f64],
    rng: &mut R,
) -> Result<Vec<FloodOutcome>> {
    check_source(topology, source)?;
    check_probability("p_r", p_r)?;
    check_grid("p_c_list", p_c_list)?;
    let table = DrawTable::sample(topology, rng);
    p_c_list
        .iter()
        .map(|&p_c| propagate(topology, source, &mut table.at(FloodParams { p_r, p_c })))
        .collect()
}

fn check_source(topology: &Topology, source: usize) -> Result<()> {
    if source < topology.len() {
        Ok(())
    } else {
        Err(Error::InvalidSource {
            source_id: source,
            nodes: topology.len(),
        })
    }
}
