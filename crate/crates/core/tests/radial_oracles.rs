//! Pins the closed-form and series quantities against values computed with an
//! independent 55-digit implementation (plain descending loops with proved
//! stop rules). Tolerances leave room for f64 rounding on top of the series
//! truncation targets, nothing more.

use approx::assert_relative_eq;
use ultradiff::padic::PAdic;
use ultradiff::radial::{
    ball_convolution, ball_mass, ball_mass_lemma1, bridge_ball_prob, density_origin,
    density_radial, endpoint_ball_mass, exact_exit_prob, grid_containment_with_endpoint,
    grid_sup_prob, ProcessParams, SeriesTolerance,
};

fn tol() -> SeriesTolerance {
    SeriesTolerance::default()
}

fn p21() -> ProcessParams {
    ProcessParams::new(2, 1.0, 1.0).unwrap()
}

fn p32() -> ProcessParams {
    ProcessParams::new(3, 2.0, 0.5).unwrap()
}

fn p51() -> ProcessParams {
    ProcessParams::new(5, 1.0, 2.0).unwrap()
}

const REL: f64 = 1e-11;

#[test]
fn ball_mass_reference_values() {
    assert_relative_eq!(
        ball_mass(p21(), 1.0, 0, tol()).unwrap().value,
        0.548_042_791_529_570_5,
        max_relative = REL
    );
    assert_relative_eq!(
        ball_mass(p32(), 0.7, 1, tol()).unwrap().value,
        0.973_576_646_652_927_9,
        max_relative = REL
    );
    assert_relative_eq!(
        ball_mass(p51(), 0.25, -2, tol()).unwrap().value,
        0.039_910_111_385_545_68,
        max_relative = REL
    );
}

#[test]
fn ball_mass_deep_radii() {
    // Radii far below the kernel mode: the series must keep its accuracy
    // where the mass is dominated by the near-origin density plateau. The
    // truncation guarantee is absolute, so small masses get an abs floor.
    assert_relative_eq!(
        ball_mass(p21(), 0.4, -12, tol()).unwrap().value,
        0.000_440_277_363_805_681_15,
        max_relative = REL,
        epsilon = 1e-13
    );
    assert_relative_eq!(
        ball_mass(p21(), 1.0, -40, tol()).unwrap().value,
        6.560_659_160_976_338e-13,
        max_relative = REL,
        epsilon = 1e-13
    );
}

#[test]
fn both_mass_routes_match_the_references() {
    for (params, t, a, want) in [
        (p21(), 1.0, 0, 0.548_042_791_529_570_5),
        (p32(), 0.7, 1, 0.973_576_646_652_927_9),
        (p51(), 0.25, -2, 0.039_910_111_385_545_68),
        (p21(), 0.4, -12, 0.000_440_277_363_805_681_15),
    ] {
        assert_relative_eq!(
            ball_mass_lemma1(params, t, a, tol()).unwrap().value,
            want,
            max_relative = REL,
            epsilon = 1e-13
        );
    }
}

#[test]
fn density_reference_values() {
    assert_relative_eq!(
        density_radial(p21(), 1.0, 0, tol()).unwrap().value,
        0.412_707_508_292_957_77,
        max_relative = REL
    );
    assert_relative_eq!(
        density_radial(p21(), 1.0, -1, tol()).unwrap().value,
        0.646_746_796_988_714_8,
        max_relative = REL
    );
    assert_relative_eq!(
        density_radial(p21(), 1.0, -2, tol()).unwrap().value,
        0.718_667_502_032_041_5,
        max_relative = REL
    );
    assert_relative_eq!(
        density_radial(p51(), 0.3, 1, tol()).unwrap().value,
        0.071_354_159_572_761_28,
        max_relative = REL
    );
    assert_relative_eq!(
        density_radial(p32(), 2.0, -1, tol()).unwrap().value,
        0.554_520_050_584_379,
        max_relative = REL
    );
}

#[test]
fn density_saturates_toward_the_origin() {
    // Eight levels below the mode the radial density already equals the
    // origin value to far beyond f64 resolution.
    let deep = density_radial(p21(), 1.0, -8, tol()).unwrap().value;
    assert_relative_eq!(deep, 0.721_352_103_336_862, max_relative = REL);
    let origin = density_origin(p21(), 1.0, tol()).unwrap().value;
    assert_relative_eq!(deep, origin, max_relative = 1e-13);
}

#[test]
fn origin_density_reference_values() {
    assert_relative_eq!(
        density_origin(p21(), 1.0, tol()).unwrap().value,
        0.721_352_103_336_862,
        max_relative = REL
    );
    assert_relative_eq!(
        density_origin(p32(), 0.4, tol()).unwrap().value,
        1.204_678_651_555_162_8,
        max_relative = REL
    );
}

#[test]
fn exit_probability_closed_form_values() {
    // exp(-2/3), exp(-1/13), exp(-25/3).
    assert_relative_eq!(
        exact_exit_prob(p21(), 1.0, 0).unwrap(),
        0.513_417_119_032_592,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        exact_exit_prob(p32(), 2.0, 1).unwrap(),
        0.925_961_078_642_316,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        exact_exit_prob(p51(), 1.0, -1).unwrap(),
        0.000_240_369_476_419_514_2,
        max_relative = 1e-14
    );
}

#[test]
fn grid_sup_reference_values() {
    assert_relative_eq!(
        grid_sup_prob(p21(), 1.0, 0, 4, tol()).unwrap(),
        0.521_715_520_250_298_9,
        max_relative = REL
    );
    assert_relative_eq!(
        grid_sup_prob(p21(), 1.0, 0, 64, tol()).unwrap(),
        0.513_927_066_304_714_4,
        max_relative = REL
    );
}

#[test]
fn convolution_reference_values() {
    // Displacement on the unit circle, integrated over B_0 and B_1.
    assert_relative_eq!(
        ball_convolution(p21(), 0.4, 0.6, Some(0), 0, tol()).unwrap(),
        0.395_650_934_945_051_9,
        max_relative = REL
    );
    assert_relative_eq!(
        ball_convolution(p21(), 0.4, 0.6, Some(0), 1, tol()).unwrap(),
        0.409_871_627_551_708_64,
        max_relative = REL
    );
    // Zero displacement: both kernels concentric, deep-circle tail included.
    assert_relative_eq!(
        ball_convolution(p21(), 0.5, 0.7, None, -1, tol()).unwrap(),
        0.506_663_299_925_561_1,
        max_relative = REL
    );
    // The concentric integrand is symmetric in the two times.
    assert_relative_eq!(
        ball_convolution(p21(), 0.7, 0.5, None, -1, tol()).unwrap(),
        0.506_663_299_925_561_1,
        max_relative = REL
    );
}

#[test]
fn endpoint_mass_reference_values() {
    assert_relative_eq!(
        endpoint_ball_mass(p21(), 1.0, None, 2, tol()).unwrap(),
        0.180_002_338_135_912_88,
        max_relative = REL
    );
    // Off-origin endpoint ball: constant density p^-2 rho(t, p^-1).
    assert_relative_eq!(
        endpoint_ball_mass(p21(), 1.0, Some(-1), 2, tol()).unwrap(),
        0.161_686_699_247_178_7,
        max_relative = REL
    );
    // Center within the small ball collapses to the origin case.
    assert_relative_eq!(
        endpoint_ball_mass(p21(), 1.0, Some(-2), 2, tol()).unwrap(),
        0.180_002_338_135_912_88,
        max_relative = REL
    );
}

#[test]
fn joint_containment_reference_values() {
    // One intermediate step.
    assert_relative_eq!(
        grid_containment_with_endpoint(p21(), &[0.4, 0.6], 0, Some(-1), 2, tol()).unwrap(),
        0.157_422_555_910_202_2,
        max_relative = REL
    );
    assert_relative_eq!(
        grid_containment_with_endpoint(p21(), &[0.4, 0.6], 0, None, 2, tol()).unwrap(),
        0.175_738_194_798_936_4,
        max_relative = REL
    );
    // Two intermediate steps.
    assert_relative_eq!(
        grid_containment_with_endpoint(p21(), &[0.4, 0.6, 0.5], 0, Some(-1), 2, tol()).unwrap(),
        0.107_874_247_338_035_25,
        max_relative = REL
    );
    assert_relative_eq!(
        grid_containment_with_endpoint(p21(), &[0.4, 0.6, 0.5], 0, None, 2, tol()).unwrap(),
        0.110_352_999_514_701_6,
        max_relative = REL
    );
    assert_relative_eq!(
        grid_containment_with_endpoint(p32(), &[0.3, 0.8, 0.4], 1, Some(0), 1, tol()).unwrap(),
        0.209_489_811_771_369_27,
        max_relative = REL
    );
}

#[test]
fn joint_containment_exceeds_the_product_bound() {
    // The same five cases against their factorized lower bounds.
    for (params, steps, a, y_exp, n, rhs) in [
        (p21(), &[0.4, 0.6][..], 0i64, Some(-1i64), 2u32, 0.125_124_265_298_659_83),
        (p21(), &[0.4, 0.6][..], 0, None, 2, 0.139_298_163_770_821_35),
        (p21(), &[0.4, 0.6, 0.5][..], 0, Some(-1), 2, 0.062_518_049_692_799_99),
        (p21(), &[0.4, 0.6, 0.5][..], 0, None, 2, 0.063_834_232_936_897_62),
        (p32(), &[0.3, 0.8, 0.4][..], 1, Some(0), 1, 0.200_895_463_832_374_86),
    ] {
        let total: f64 = steps.iter().sum();
        let mut bound = endpoint_ball_mass(params, total, y_exp, n, tol()).unwrap();
        for &t in &steps[..steps.len() - 1] {
            bound *= ball_mass(params, t, a, tol()).unwrap().value;
        }
        assert_relative_eq!(bound, rhs, max_relative = REL);
        let lhs = grid_containment_with_endpoint(params, steps, a, y_exp, n, tol()).unwrap();
        assert!(lhs > bound, "lhs {lhs} <= bound {bound}");
    }
}

#[test]
fn bridge_probability_reference_values() {
    let params = p21();
    let w = PAdic::from_integer(2, 1).unwrap();
    let zero = PAdic::zero(2);
    // Balls around the origin, pinned displacement on the unit circle.
    for (k, want) in [
        (-3, 0.208_706_338_348_364_94),
        (-2, 0.379_391_926_578_036_3),
        (-1, 0.570_465_845_018_358_6),
        (0, 0.958_671_521_585_697_8),
        (1, 0.993_128_594_260_426_9),
        (6, 0.999_999_720_932_725_7),
    ] {
        assert_relative_eq!(
            bridge_ball_prob(params, 0.4, 0.6, &w, &zero, k, tol()).unwrap(),
            want,
            max_relative = REL
        );
    }
    // Balls around the pinned displacement itself.
    for (k, want) in [
        (-3, 0.118_121_627_969_169_52),
        (-2, 0.229_771_652_325_980_76),
        (-1, 0.388_205_676_567_339_23),
    ] {
        assert_relative_eq!(
            bridge_ball_prob(params, 0.4, 0.6, &w, &w, k, tol()).unwrap(),
            want,
            max_relative = REL
        );
    }
}

#[test]
fn bridge_probability_zero_displacement() {
    // Pinned at the origin; the numerator is a concentric product integral
    // whose deep-circle tail carries ~7e-4 of the mass at these times.
    let params = p21();
    let zero = PAdic::zero(2);
    for (k, want) in [
        (-4, 0.180_337_575_693_977_1),
        (-1, 0.885_387_078_392_525_4),
        (0, 0.975_381_500_428_91),
    ] {
        assert_relative_eq!(
            bridge_ball_prob(params, 0.5, 0.5, &zero, &zero, k, tol()).unwrap(),
            want,
            max_relative = REL
        );
    }
}

#[test]
fn bridge_children_partition_their_parent() {
    // B_0(0) splits into B_{-1}(0) and B_{-1}(w) when |w| = 1 and p = 2.
    let params = p21();
    let w = PAdic::from_integer(2, 1).unwrap();
    let zero = PAdic::zero(2);
    let parent = bridge_ball_prob(params, 0.4, 0.6, &w, &zero, 0, tol()).unwrap();
    let left = bridge_ball_prob(params, 0.4, 0.6, &w, &zero, -1, tol()).unwrap();
    let right = bridge_ball_prob(params, 0.4, 0.6, &w, &w, -1, tol()).unwrap();
    assert_relative_eq!(left + right, parent, max_relative = 1e-12);
}
