//! Baseline walker contracts on synthetic index-1 landscapes.

mod common;

use common::RandomQuadratic;
use spm_core::baselines::{dimer_run, gad_run, BaselineParams, DimerState, GadState};
use spm_core::spm::{ChaCha8Rng, RunStatus, SeedableRng};

/// Both baselines converge on nondegenerate quadratic saddles from random
/// starts in the basin, across dimensions 2 through 10.
#[test]
fn baselines_converge_on_random_quadratic_saddles() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let params = BaselineParams::<f64> {
        force_tol: 1e-8,
        ..BaselineParams::default()
    };
    for case in 0..50 {
        let dim = 2 + (case % 9);
        let pes = RandomQuadratic::saddle(dim, 50_000 + case as u64);
        let start = spm_core::spm::random_unit_vector::<f64>(dim, &mut rng).scaled(0.8);
        let mode0 = spm_core::spm::random_unit_vector::<f64>(dim, &mut rng);

        let d = dimer_run(
            &pes,
            DimerState::new(start.clone(), mode0.clone(), 5e-3).unwrap(),
            &params,
        )
        .unwrap();
        assert_eq!(
            d.status,
            RunStatus::Converged,
            "dimer case {case} dim {dim}: {:?}",
            d.status
        );
        assert!(d.position.norm() < 1e-6, "dimer case {case}: |x| = {:e}", d.position.norm());
        assert!(d.verified_index1);
        // The converged orientation spans the unstable mode.
        assert!(
            d.unstable_mode.dot(pes.unstable_mode()).abs() > 0.99,
            "dimer case {case}: mode overlap {}",
            d.unstable_mode.dot(pes.unstable_mode()).abs()
        );

        let g = gad_run(&pes, GadState::new(start, mode0).unwrap(), &params).unwrap();
        assert_eq!(
            g.status,
            RunStatus::Converged,
            "gad case {case} dim {dim}: {:?}",
            g.status
        );
        assert!(g.position.norm() < 1e-6, "gad case {case}: |x| = {:e}", g.position.norm());
        assert!(g.verified_index1);
        assert!((g.unstable_mode.norm() - 1.0).abs() < 1e-10);
    }
}
