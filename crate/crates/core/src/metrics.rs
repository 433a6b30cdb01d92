//! Reachability (RCH), retransmission ratio (RET) and the percentage
//! relative change used to compare noisy runs against the noiseless one.

use crate::flood::FloodOutcome;
use crate::{Error, Result};

/// Aggregated RCH/RET over a set of flood runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub rch: f64,
    pub ret: f64,
    pub rch_stderr: f64,
    pub ret_stderr: f64,
    pub sample_count: usize,
}

/// Reached non-source nodes over `n`.
pub fn rch_of(outcome: &FloodOutcome, n: usize) -> f64 {
    outcome.reached_count() as f64 / n as f64
}

/// Transmissions (source included) over `n`.
pub fn ret_of(outcome: &FloodOutcome, n: usize) -> f64 {
    outcome.transmissions() as f64 / n as f64
}

/// Sample means and standard errors of per-run `(rch, ret)` pairs.
///
/// Sums run in slice order, so the result is bit-stable for a fixed order.
pub fn aggregate(points: &[(f64, f64)]) -> Result<MetricPoint> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let k = points.len() as f64;
    let (sum_rch, sum_ret) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (rch, ret) = (sum_rch / k, sum_ret / k);
    let (rch_stderr, ret_stderr) = if points.len() < 2 {
        (0.0, 0.0)
    } else {
        let (ss_rch, ss_ret) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
            (a + (x - rch) * (x - rch), b + (y - ret) * (y - ret))
        });
        (libm::sqrt(ss_rch / (k - 1.0) / k), libm::sqrt(ss_ret / (k - 1.0) / k))
    };
    Ok(MetricPoint {
        rch,
        ret,
        rch_stderr,
        ret_stderr,
        sample_count: points.len(),
    })
}

/// Percentage drop of a metric from its noiseless value:
/// `(noiseless - noisy) / noiseless * 100`.
pub fn relative_change(noiseless: f64, noisy: f64) -> Result<f64> {
    if noiseless == 0.0 || !noiseless.is_finite() {
        return Err(Error::UndefinedRelativeChange);
    }
    Ok((noiseless - noisy) / noiseless * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flood::{flood, FloodParams};
    use crate::model::{Point, Topology};
    use crate::rng::derive_substream;
    use alloc::vec::Vec;

    fn complete(n: usize) -> Topology {
        let p: Vec<Point> = (0..n).map(|i| Point::new(i as f64, 0.0)).collect();
        Topology::build(&p, 100.0).unwrap()
    }

    #[test]
    fn noiseless_complete_graph_metrics() {
        let out = flood(
            &complete(10),
            0,
            FloodParams::new(1.0, 1.0).unwrap(),
            &mut derive_substream(0, &[]),
        )
        .unwrap();
        assert_eq!(rch_of(&out, 10), 0.9);
        assert_eq!(ret_of(&out, 10), 1.0);
    }

    #[test]
    fn silent_channel_metrics() {
        let out = flood(
            &complete(10),
            0,
            FloodParams::new(1.0, 0.0).unwrap(),
            &mut derive_substream(0, &[]),
        )
        .unwrap();
        assert_eq!(rch_of(&out, 10), 0.0);
        assert_eq!(ret_of(&out, 10), 0.1);
    }

    #[test]
    fn gossip_on_complete_graph_expected_ret() {
        // Each of the 9 listeners hears the source and flips one p_r coin.
        let t = complete(10);
        let runs = 20_000;
        let samples: Vec<(f64, f64)> = (0..runs)
            .map(|r| {
                let out = flood(
                    &t,
                    0,
                    FloodParams::new(0.8, 1.0).unwrap(),
                    &mut derive_substream(5, &[r]),
                )
                .unwrap();
                (rch_of(&out, 10), ret_of(&out, 10))
            })
            .collect();
        let m = aggregate(&samples).unwrap();
        assert!((m.ret - 0.82).abs() <= 3.0 * m.ret_stderr, "{m:?}");
        assert!((m.rch - 0.9).abs() < 1e-9);
    }

    #[test]
    fn aggregate_small_samples() {
        let one = aggregate(&[(0.5, 0.3)]).unwrap();
        assert_eq!((one.rch, one.ret, one.rch_stderr, one.ret_stderr), (0.5, 0.3, 0.0, 0.0));
        let two = aggregate(&[(0.4, 0.2), (0.6, 0.4)]).unwrap();
        assert!((two.rch - 0.5).abs() < 1e-15 && (two.ret - 0.3).abs() < 1e-15);
        assert_eq!(two.sample_count, 2);
        assert_eq!(aggregate(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn stderr_is_sample_std_over_root_n() {
        let mut rng = derive_substream(12, &[]);
        let pts: Vec<(f64, f64)> = (0..10_000)
            .map(|_| (crate::rng::unit(&mut rng), 2.0 * crate::rng::unit(&mut rng)))
            .collect();
        let m = aggregate(&pts).unwrap();
        // Uniform[0,1) has std 1/sqrt(12); 2*Uniform has twice that.
        let expect = 1.0 / libm::sqrt(12.0) / 100.0;
        assert!((m.rch_stderr / expect - 1.0).abs() < 0.05);
        assert!((m.ret_stderr / (2.0 * expect) - 1.0).abs() < 0.05);
    }

    #[test]
    fn relative_change_cases() {
        assert_eq!(relative_change(0.8, 0.8), Ok(0.0));
        assert!((relative_change(0.8, 0.62).unwrap() - 22.5).abs() < 1e-9);
        assert_eq!(relative_change(1.0, 0.0), Ok(100.0));
        assert_eq!(relative_change(0.0, 0.0), Err(Error::UndefinedRelativeChange));
    }
}
