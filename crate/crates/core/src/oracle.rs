//! Exact expected RCH/RET on small topologies.
//!
//! Every reception test (one per directed link) and every retransmission
//! test (one per non-source node) is a Bernoulli variable. The oracle walks
//! all `2^(links + n - 1)` joint outcomes, replays the deterministic flood
//! for each, and weights the result by the outcome's probability. Tests the
//! flood never consults are summed over both values, so their weights
//! marginalise to 1.

use crate::flood::{propagate, Draws, FloodParams};
use crate::model::Topology;
use crate::{Error, Result};

pub const MAX_NODES: usize = 8;
pub const MAX_LINKS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub expected_rch: f64,
    pub expected_ret: f64,
    /// Number of joint outcomes enumerated.
    pub enumerated_outcomes: u64,
    /// Sum of all outcome weights; 1 up to rounding.
    pub total_weight: f64,
}

/// Bit assignment: bit `link` is the reception outcome of that link, bit
/// `links + slot(node)` is the retransmission outcome of that node.
struct Assignment {
    bits: u64,
    links: usize,
    source: usize,
}

impl Assignment {
    fn node_bit(&self, node: usize) -> usize {
        // The source has no retransmission test; nodes after it shift down.
        self.links + if node > self.source { node - 1 } else { node }
    }
}

impl Draws for Assignment {
    fn delivered(&mut self, link: usize) -> bool {
        self.bits >> link & 1 == 1
    }

    fn retransmits(&mut self, node: usize) -> bool {
        self.bits >> self.node_bit(node) & 1 == 1
    }
}

pub fn exact_metrics(topology: &Topology, source: usize, params: FloodParams) -> Result<OracleResult> {
    let n = topology.len();
    let links = topology.link_count();
    if n > MAX_NODES || links > MAX_LINKS {
        return Err(Error::OracleTooLarge {
            nodes: n,
            links,
            max_nodes: MAX_NODES,
            max_links: MAX_LINKS,
        });
    }
    if source >= n {
        return Err(Error::InvalidSource {
            source_id: source,
            nodes: n,
        });
    }
    let FloodParams { p_r, p_c } = FloodParams::new(params.p_r, params.p_c)?;

    let width = links + n - 1;
    let total = 1u64 << width;
    let mut expected_reached = 0.0;
    let mut expected_tx = 0.0;
    let mut total_weight = 0.0;

    for bits in 0..total {
        let mut weight = 1.0;
        for b in 0..width {
            let p = if b < links { p_c } else { p_r };
            weight *= if bits >> b & 1 == 1 { p } else { 1.0 - p };
        }
        total_weight += weight;
        if weight == 0.0 {
            continue;
        }
        let mut draws = Assignment { bits, links, source };
        let out = propagate(topology, source, &mut draws)?;
        expected_reached += weight * out.reached_count() as f64;
        expected_tx += weight * out.transmissions() as f64;
    }

    Ok(OracleResult {
        expected_rch: expected_reached / n as f64,
        expected_ret: expected_tx / n as f64,
        enumerated_outcomes: total,
        total_weight,
    })
}
