//! Statistical fidelity of the samplers against the exact radial laws, plus
//! determinism of the seeded streams. Sampled checks use chi-square tests at
//! significance 1e-3 with fixed seeds, so they are deterministic.

use ultradiff::padic::PAdic;
use ultradiff::radial::{circle_mass, ProcessParams, SeriesTolerance};
use ultradiff::sampler::{
    first_exit_index, sample_path, sup_norm, IncrementSampler, RandomStream,
};
use ultradiff::stats::chi_square_test;

fn tol() -> SeriesTolerance {
    SeriesTolerance::default()
}

#[test]
fn increment_radii_follow_the_circle_masses() {
    let params = ProcessParams::new(2, 1.0, 1.0).unwrap();
    let t = 0.7;
    let sampler = IncrementSampler::new(params, t, tol()).unwrap();
    let (lo, hi) = sampler.radius_range();
    let n = 200_000u64;
    let mut rng = RandomStream::new(31, 0);
    let mut observed = vec![0u64; (hi - lo + 1) as usize];
    for _ in 0..n {
        let r = sampler.radius(&mut rng);
        observed[(r - lo) as usize] += 1;
    }
    let expected: Vec<f64> = (lo..=hi)
        .map(|r| circle_mass(params, t, r, tol()).unwrap().value * n as f64)
        .collect();
    let test = chi_square_test(&observed, &expected);
    assert!(test.p_value > 1e-3, "chi2 {} dof {} p {}", test.statistic, test.dof, test.p_value);
}

#[test]
fn table_pmf_matches_the_exact_circle_masses() {
    for (p, b, sigma, t) in [(2u32, 1.0, 1.0, 0.7), (3, 2.0, 0.5, 1.3), (7, 0.7, 2.0, 0.05)] {
        let params = ProcessParams::new(p, b, sigma).unwrap();
        let sampler = IncrementSampler::new(params, t, tol()).unwrap();
        let (lo, hi) = sampler.radius_range();
        let mut total = 0.0;
        for r in lo..=hi {
            let want = circle_mass(params, t, r, tol()).unwrap().value;
            let got = sampler.pmf(r);
            assert!((got - want).abs() < 1e-12, "p={p} r={r}: {got} vs {want}");
            total += got;
        }
        assert!((total - 1.0).abs() < 1e-10, "pmf total {total}");
    }
}

#[test]
fn path_endpoint_has_the_single_step_law() {
    // Increments form a semigroup: eight grid steps over [0, T] must land
    // the endpoint on each circle with the same mass as one step of size T.
    let params = ProcessParams::new(3, 1.0, 1.0).unwrap();
    let t_end = 1.2;
    let one_step = IncrementSampler::new(params, t_end, tol()).unwrap();
    let (lo, hi) = one_step.radius_range();
    let origin = PAdic::zero(3);
    let n = 40_000u64;
    let mut rng = RandomStream::new(77, 5);
    // Radii below the table floor land in the first bucket together with
    // exact zeros; the matching expected mass is the remaining ball.
    let mut observed = vec![0u64; (hi - lo + 2) as usize];
    for _ in 0..n {
        let path = sample_path(params, t_end, 8, &origin, 24, &mut rng, tol()).unwrap();
        let end = path.positions.last().unwrap();
        let idx = match end.abs_exponent() {
            Some(e) if e >= lo => (e - lo) as usize + 1,
            _ => 0,
        };
        observed[idx] += 1;
    }
    let mut expected = vec![0.0; (hi - lo + 2) as usize];
    let mut below = 1.0;
    for r in lo..=hi {
        let mass = circle_mass(params, t_end, r, tol()).unwrap().value;
        expected[(r - lo) as usize + 1] = mass * n as f64;
        below -= mass;
    }
    expected[0] = below.max(0.0) * n as f64;
    let test = chi_square_test(&observed, &expected);
    assert!(test.p_value > 1e-3, "chi2 {} dof {} p {}", test.statistic, test.dof, test.p_value);
}

#[test]
fn paths_are_reproducible_by_seed_and_stream() {
    let params = ProcessParams::new(5, 1.0, 2.0).unwrap();
    let origin = PAdic::zero(5);
    let mut rng1 = RandomStream::new(99, 3);
    let mut rng2 = RandomStream::new(99, 3);
    let a = sample_path(params, 2.0, 16, &origin, 24, &mut rng1, tol()).unwrap();
    let b = sample_path(params, 2.0, 16, &origin, 24, &mut rng2, tol()).unwrap();
    assert_eq!(a.positions, b.positions);

    let mut rng3 = RandomStream::new(99, 4);
    let c = sample_path(params, 2.0, 16, &origin, 24, &mut rng3, tol()).unwrap();
    assert_ne!(a.positions, c.positions);
}

#[test]
fn exit_index_agrees_with_the_sup_norm() {
    let params = ProcessParams::new(2, 1.0, 1.0).unwrap();
    let origin = PAdic::zero(2);
    let mut rng = RandomStream::new(11, 0);
    for _ in 0..200 {
        let path = sample_path(params, 1.0, 8, &origin, 24, &mut rng, tol()).unwrap();
        let sup = sup_norm(&path, &origin).unwrap();
        for a in [-2i64, 0, 2] {
            let exited = first_exit_index(&path, &origin, a).unwrap();
            let sup_exceeds = sup.is_some_and(|e| e > a);
            assert_eq!(exited.is_some(), sup_exceeds, "a={a} sup={sup:?}");
            if let Some(i) = exited {
                let e = path.positions[i].dist_exponent(&origin).unwrap().unwrap();
                assert!(e > a);
                for x in &path.positions[..i] {
                    let inside = x.dist_exponent(&origin).unwrap().is_none_or(|d| d <= a);
                    assert!(inside, "index {i} is not the first exit");
                }
            }
        }
    }
}

#[test]
fn csv_dump_lists_every_grid_point() {
    let params = ProcessParams::new(2, 1.0, 1.0).unwrap();
    let origin = PAdic::zero(2);
    let mut rng = RandomStream::new(5, 0);
    let path = sample_path(params, 1.0, 4, &origin, 16, &mut rng, tol()).unwrap();
    let csv = path.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "time,valuation,digits");
    assert_eq!(lines.len(), 6);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
}
