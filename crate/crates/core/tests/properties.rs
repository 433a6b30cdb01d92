use noisyflood_core::flood::{flood, flood_coupled, FloodParams};
use noisyflood_core::mobility::advance;
use noisyflood_core::rng::derive_substream;
use noisyflood_core::{density, pause_time, snapshot_count, Area, MobilityState, Point, Topology};
use proptest::prelude::*;

fn area() -> Area {
    Area::square(600.0).unwrap()
}

fn positions(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0..=600.0f64, 0.0..=600.0f64), 2..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

fn random_topology(seed: u64, n: usize, range: f64) -> Topology {
    let s = MobilityState::init(&mut derive_substream(seed, &[99]), n, &area()).unwrap();
    Topology::build(&s.positions, range).unwrap()
}

proptest! {
    #[test]
    fn adjacency_is_symmetric_irreflexive_and_exact(p in positions(40), range in 1.0..300.0f64) {
        let t = Topology::build(&p, range).unwrap();
        for i in 0..t.len() {
            prop_assert!(!t.neighbors(i).contains(&i));
            for j in 0..t.len() {
                let linked = t.neighbors(i).contains(&j);
                prop_assert_eq!(linked, t.neighbors(j).contains(&i));
                prop_assert_eq!(linked, i != j && p[i].distance_sq(&p[j]) <= range * range);
            }
        }
    }

    #[test]
    fn snapshot_count_brackets_sim_time(r in 1.0..500.0f64, u in 0.01..50.0f64, t_sim in 1.0..10_000.0f64) {
        let tau = pause_time(r, u).unwrap();
        let k = snapshot_count(t_sim, tau);
        prop_assert!(k as f64 * tau <= t_sim);
        prop_assert!(t_sim < (k + 1) as f64 * tau);
    }

    #[test]
    fn density_is_linear_in_n_and_quadratic_in_r(n in 0usize..10_000, r in 0.1..1000.0f64) {
        let a = area();
        let base = density(n, r, &a);
        prop_assert!((density(2 * n, r, &a) - 2.0 * base).abs() <= 1e-12 * base.max(1.0));
        prop_assert!((density(n, 2.0 * r, &a) - 4.0 * base).abs() <= 1e-12 * base.max(1.0));
    }

    #[test]
    fn mobility_stays_inside_area(seed in any::<u64>(), speed in 0.0..50.0f64, steps in 1usize..20) {
        let mut rng = derive_substream(seed, &[]);
        let mut s = MobilityState::init(&mut rng, 25, &area()).unwrap();
        for _ in 0..steps {
            s = s.step(&mut rng, speed, 37.5, &area()).unwrap();
            prop_assert!(s.positions.iter().all(|p| area().contains(p)));
            prop_assert!(s.headings.iter().all(|h| (0.0..std::f64::consts::TAU).contains(h)));
        }
    }

    #[test]
    fn reflection_is_a_mirror_fold(x in 0.0..=600.0f64, y in 0.0..=600.0f64, theta in 0.0..std::f64::consts::TAU, d in 0.0..2000.0f64) {
        // The folded coordinate equals the unfolded one, up to sign, modulo
        // twice the side length, so no path length is lost at the walls.
        let p = advance(Point::new(x, y), theta, d, &area());
        let unfolded = [x + d * theta.cos(), y + d * theta.sin()];
        for (folded, free) in [p.x, p.y].into_iter().zip(unfolded) {
            let same = (folded - free).rem_euclid(1200.0);
            let mirrored = (folded + free).rem_euclid(1200.0);
            let near = |m: f64| m < 1e-6 || 1200.0 - m < 1e-6;
            prop_assert!(near(same) || near(mirrored), "{folded} vs {free}");
        }
    }

    #[test]
    fn flood_outcome_invariants(seed in any::<u64>(), p_r in 0.0..=1.0f64, p_c in 0.0..=1.0f64, source in 0usize..40) {
        let t = random_topology(seed, 40, 120.0);
        let params = FloodParams::new(p_r, p_c).unwrap();
        let out = flood(&t, source, params, &mut derive_substream(seed, &[1])).unwrap();
        let comp = t.component_of(source);

        prop_assert!(out.reached().all(|i| comp[i]));
        prop_assert!(out.retransmitters().any(|i| i == source));
        prop_assert!(out.retransmitters().filter(|&i| i != source).all(|i| out.is_reached(i) && out.receptions(i) >= 1));
        prop_assert_eq!(out.retransmitters().count(), out.transmissions());

        let again = flood(&t, source, params, &mut derive_substream(seed, &[1])).unwrap();
        prop_assert_eq!(out, again);
    }

    #[test]
    fn noiseless_pure_flood_covers_component(seed in any::<u64>(), source in 0usize..50) {
        let t = random_topology(seed, 50, 100.0);
        let out = flood(&t, source, FloodParams::new(1.0, 1.0).unwrap(), &mut derive_substream(seed, &[2])).unwrap();
        let comp = t.component_of(source);
        let size = comp.iter().filter(|&&c| c).count();
        prop_assert_eq!(out.reached_count(), size - 1);
        prop_assert_eq!(out.transmissions(), size);
        prop_assert!(out.reached().all(|i| comp[i]));
    }

    #[test]
    fn coupled_floods_are_nested_in_p_c(seed in any::<u64>(), p_r in 0.0..=1.0f64) {
        let t = random_topology(seed, 60, 110.0);
        let grid = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
        let outs = flood_coupled(&t, 0, p_r, &grid, &mut derive_substream(seed, &[3])).unwrap();
        for w in outs.windows(2) {
            prop_assert!(w[0].reached().all(|i| w[1].is_reached(i)));
            prop_assert!(w[0].transmissions() <= w[1].transmissions());
        }
    }

    #[test]
    fn shared_draws_are_nested_in_p_r(seed in any::<u64>(), lo in 0.0..=1.0f64, hi in 0.0..=1.0f64) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let t = random_topology(seed, 60, 110.0);
        let a = flood(&t, 3, FloodParams::new(lo, 0.7).unwrap(), &mut derive_substream(seed, &[4])).unwrap();
        let b = flood(&t, 3, FloodParams::new(hi, 0.7).unwrap(), &mut derive_substream(seed, &[4])).unwrap();
        prop_assert!(a.reached().all(|i| b.is_reached(i)));
        prop_assert!(a.transmissions() <= b.transmissions());
    }
}

#[test]
fn coupled_reach_is_monotone_over_many_snapshots() {
    let grid = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
    for seed in 0..1000u64 {
        let t = random_topology(seed, 100, 100.0);
        let outs = flood_coupled(&t, (seed % 100) as usize, 0.8, &grid, &mut derive_substream(seed, &[5])).unwrap();
        let counts: Vec<usize> = outs.iter().map(|o| o.reached_count()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "seed {seed}: {counts:?}");
    }
}

#[test]
fn coupled_singleton_list_equals_plain_flood() {
    for seed in 0..200u64 {
        let t = random_topology(seed, 30, 150.0);
        let plain = flood(
            &t,
            0,
            FloodParams::new(1.0, 1.0).unwrap(),
            &mut derive_substream(seed, &[]),
        )
        .unwrap();
        let coupled = flood_coupled(&t, 0, 1.0, &[1.0], &mut derive_substream(seed, &[])).unwrap();
        assert_eq!(coupled, vec![plain]);
    }
}
