use core::f64::consts::{FRAC_PI_4, PI};

use fiberlink_core::analysis::{
    concurrence_series, detect_esd, min_concurrence_pi4, period_pi4, Engine, EsdReport, DEFAULT_ESD_TOLERANCE,
    MIN_DEAD_WIDTH,
};
use fiberlink_core::{CouplingParams, InitialAngle, TimeGrid};

fn report(r: f64, theta: f64, grid: &TimeGrid) -> (EsdReport, f64) {
    let p = CouplingParams::from_ratio(r).unwrap();
    let s = concurrence_series(&p, InitialAngle::new(theta).unwrap(), grid, Engine::Analytic).unwrap();
    (detect_esd(&s, DEFAULT_ESD_TOLERANCE).unwrap(), s.min().unwrap())
}

// One period at a million points resolves every tol-level set of the
// symmetric state, so intervals appear exactly below the threshold.
#[test]
fn dead_intervals_iff_below_threshold() {
    for r in [0.5, 0.65, 0.7071, 0.75, 1.0] {
        let grid = TimeGrid::new(0.0, period_pi4(r), 1_000_001).unwrap();
        let (rep, sampled_min) = report(r, FRAC_PI_4, &grid);
        assert!((sampled_min - min_concurrence_pi4(r).unwrap()).abs() < 1e-4, "r={r}");
        assert_eq!(!rep.dead_intervals.is_empty(), r < core::f64::consts::FRAC_1_SQRT_2, "r={r}: {rep:?}");
        for &(a, b) in &rep.dead_intervals {
            assert!(b - a >= MIN_DEAD_WIDTH);
        }
    }
}

#[test]
fn classification_is_deterministic() {
    let grid = TimeGrid::new(0.0, period_pi4(0.5), 200_001).unwrap();
    assert_eq!(report(0.5, FRAC_PI_4, &grid), report(0.5, FRAC_PI_4, &grid));
}

// cos^2 stays below tol for a width of about 2 sqrt(tol), far above the
// minimum dead width, so the antisymmetric zeros also read as intervals
// once the grid resolves them. Only coarser grids report isolated zeros.
#[test]
fn antisymmetric_zeros_depend_on_resolution() {
    let coarse = TimeGrid::new(0.0, 2.0 * PI, 10_001).unwrap();
    let (rep, _) = report(1.0, -FRAC_PI_4, &coarse);
    assert!(rep.dead_intervals.is_empty());
    assert_eq!(rep.isolated_zeros.len(), 2);

    let fine = TimeGrid::new(0.0, 2.0 * PI, 1_000_001).unwrap();
    let (rep, _) = report(1.0, -FRAC_PI_4, &fine);
    assert_eq!(rep.dead_intervals.len(), 2);
    for (&(a, b), centre) in rep.dead_intervals.iter().zip([PI / 2.0, 1.5 * PI]) {
        assert!(a < centre && centre < b);
        let expected = 2.0 * DEFAULT_ESD_TOLERANCE.sqrt();
        assert!(((b - a) - expected).abs() < 1e-6, "width {}", b - a);
    }
}
