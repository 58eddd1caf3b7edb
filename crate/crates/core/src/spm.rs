//! The spring pair method: drifting dynamics, climbing dynamics, the
//! drift-climb-cycle driver, convergence metrics, and saddle verification.
//!
//! A pair of particles joined by a spring walks the surface. Drifting moves
//! each particle by the perpendicular force component plus the spring force,
//! pulling the pair onto the minimum energy path and aligning the spring with
//! the path tangent:
//!
//! ```text
//! r_i ← r_i + α₁ F_perp(r_i) + α₂ F_s(r_i)
//! ```
//!
//! Climbing then inverts the parallel component, driving the pair uphill
//! along the tangent:
//!
//! ```text
//! r_i ← r_i − α₃ F_par(r_i)
//! ```
//!
//! Relaxation constants are stored pre-scaled by the time step; there is no
//! separate Δt. The cycle alternates a drift loop and a single climb until
//! `e1 = min(|F(r1)|, |F(r2)|)` drops below ε₂; at that point one particle
//! sits at the saddle and the spring direction approximates the unstable
//! mode, which is verified by a finite-difference curvature probe.

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

// Re-exported so drivers can build seeded perturbation directions without
// depending on the RNG crates directly.
pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::fd::directional_curvature;
use crate::num::{cast, Scalar};
use crate::pair::{decompose_force, PairError, SpringPair};
use crate::pes::{IdentityPreconditioner, PesError, PotentialSurface, Preconditioner};
use crate::vector::StateVector;

/// Walker parameters. Defaults are the 2D test-function values; cluster and
/// field problems want problem-scaled relaxation constants.
#[derive(Clone, Debug)]
pub struct SpmConfig<F> {
    /// Natural spring length l_s.
    pub natural_length: F,
    /// Drift gradient relaxation α₁ (Δt-scaled).
    pub alpha1: F,
    /// Spring relaxation α₂ (Δt-scaled).
    pub alpha2: F,
    /// Climb relaxation α₃ (Δt-scaled).
    pub alpha3: F,
    /// Drift termination threshold ε₁ on the perpendicular force norm.
    pub eps1: F,
    /// Saddle convergence threshold ε₂ on e1.
    pub eps2: F,
    /// Drift step cap n_d per cycle.
    pub max_drift_steps: usize,
    /// Cycle cap for the whole run.
    pub max_cycles: usize,
    /// Climb updates per cycle; 1 is the canonical single climbing update.
    pub climb_steps_per_cycle: usize,
    /// Finite-difference step for the index-1 curvature check.
    pub curvature_step: F,
    /// Seed for the re-perturbation drawn when the spring collapses.
    pub reperturb_seed: u64,
    /// Keep per-cycle positions in the trace. Disable for high-dimensional
    /// runs where the trace would dominate memory.
    pub record_positions: bool,
}

impl<F: Scalar> Default for SpmConfig<F> {
    fn default() -> Self {
        Self {
            natural_length: cast(1e-2),
            alpha1: cast(5e-2),
            alpha2: cast(2.5e-1),
            alpha3: cast(5e-2),
            eps1: cast(1e-2),
            eps2: cast(1e-7),
            max_drift_steps: 200,
            max_cycles: 100_000,
            climb_steps_per_cycle: 1,
            curvature_step: cast(1e-4),
            reperturb_seed: 0,
            record_positions: true,
        }
    }
}

/// One drift-climb-cycle of a run, as recorded in the trace.
#[derive(Clone, Debug)]
pub struct CycleRecord<F> {
    pub cycle_index: usize,
    pub drift_steps_taken: usize,
    /// e1 = min(|F(r1)|, |F(r2)|) after the cycle.
    pub e1: F,
    /// Distance of the closer particle to a known saddle, when one was given.
    pub e2: Option<F>,
    pub energy_r1: F,
    pub energy_r2: F,
    /// Pair positions after the cycle; present when `record_positions` is set.
    pub positions: Option<(StateVector<F>, StateVector<F>)>,
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// e1 dropped below ε₂.
    Converged,
    /// The cycle cap was reached first.
    MaxCyclesExceeded,
    /// The force norm stagnated away from any stationary point (baseline
    /// walkers only; the spring pair never reports this).
    TrappedNonSaddle,
}

/// Result of a walker run. Also produced by the baseline walkers, so that
/// traces and downstream tooling share one shape.
#[derive(Clone, Debug)]
pub struct SaddleResult<F> {
    pub status: RunStatus,
    /// The pair particle with the smaller force norm (r1 on ties).
    pub position: StateVector<F>,
    pub energy: F,
    /// Final unit spring direction; approximates the unstable mode at the
    /// saddle.
    pub unstable_mode: StateVector<F>,
    pub residual_e1: F,
    pub cycles_used: usize,
    /// Negative finite-difference curvature along `unstable_mode`.
    pub verified_index1: bool,
    /// The curvature value behind `verified_index1`.
    pub mode_curvature: F,
    pub trace: Vec<CycleRecord<F>>,
}

#[derive(Debug, Error)]
pub enum SpmError {
    #[error(transparent)]
    Pes(#[from] PesError),
    #[error(transparent)]
    Pair(#[from] PairError),
    /// A step produced a non-finite coordinate: the step size is too large
    /// for the surface.
    #[error("non-finite state after {context} in cycle {cycle}")]
    NonFiniteState { context: &'static str, cycle: usize },
    /// The spring collapsed more often than the re-perturbation budget.
    #[error("spring collapsed {0} times; giving up")]
    TooManyCollapses(usize),
}

/// Forces and spring geometry evaluated at one pair state.
struct PairForces<F> {
    direction: StateVector<F>,
    perp1: StateVector<F>,
    perp2: StateVector<F>,
    par1: StateVector<F>,
    par2: StateVector<F>,
}

fn eval_pair<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    pair: &SpringPair<F>,
    precond: &dyn Preconditioner<F>,
) -> Result<PairForces<F>, SpmError> {
    let direction = pair.direction()?;
    let f1 = precond.apply(&pes.force(&pair.r1)?);
    let f2 = precond.apply(&pes.force(&pair.r2)?);
    let s1 = decompose_force(&f1, &direction)?;
    let s2 = decompose_force(&f2, &direction)?;
    Ok(PairForces {
        direction,
        perp1: s1.perpendicular,
        perp2: s2.perpendicular,
        par1: s1.parallel,
        par2: s2.parallel,
    })
}

fn apply_drift<F: Scalar>(
    pair: &SpringPair<F>,
    forces: &PairForces<F>,
    cfg: &SpmConfig<F>,
) -> SpringPair<F> {
    let (s1, s2) = pair.spring_force();
    let mut r1 = pair.r1.add_scaled(cfg.alpha1, &forces.perp1);
    r1.add_scaled_assign(cfg.alpha2, &s1);
    let mut r2 = pair.r2.add_scaled(cfg.alpha1, &forces.perp2);
    r2.add_scaled_assign(cfg.alpha2, &s2);
    SpringPair {
        r1,
        r2,
        natural_length: pair.natural_length,
    }
}

fn apply_climb<F: Scalar>(
    pair: &SpringPair<F>,
    forces: &PairForces<F>,
    cfg: &SpmConfig<F>,
) -> SpringPair<F> {
    SpringPair {
        r1: pair.r1.add_scaled(-cfg.alpha3, &forces.par1),
        r2: pair.r2.add_scaled(-cfg.alpha3, &forces.par2),
        natural_length: pair.natural_length,
    }
}

fn ensure_finite<F: Scalar>(
    pair: &SpringPair<F>,
    context: &'static str,
    cycle: usize,
) -> Result<(), SpmError> {
    if pair.r1.is_finite() && pair.r2.is_finite() {
        Ok(())
    } else {
        Err(SpmError::NonFiniteState { context, cycle })
    }
}

/// One drifting update of both particles, using a single shared spring
/// direction evaluated on the input pair.
pub fn drift_step<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    pair: &SpringPair<F>,
    cfg: &SpmConfig<F>,
) -> Result<SpringPair<F>, SpmError> {
    let forces = eval_pair(pes, pair, &IdentityPreconditioner)?;
    let next = apply_drift(pair, &forces, cfg);
    ensure_finite(&next, "drift step", 0)?;
    Ok(next)
}

/// Runs drifting updates until `max(|F_perp(r1)|, |F_perp(r2)|) < ε₁` or the
/// step cap is reached, whichever comes first. The termination test runs on
/// the freshly updated pair, so at least one step is always taken: the climb
/// that precedes each drift phase perturbs the pair off the path, and the
/// perpendicular relaxation of that single step is what lets the residual
/// force contract all the way below ε₂ instead of stalling near ε₁.
pub fn drift_until<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    pair: &SpringPair<F>,
    cfg: &SpmConfig<F>,
) -> Result<(SpringPair<F>, usize), SpmError> {
    let (pair, steps, _) = drift_phase(pes, pair, cfg, &IdentityPreconditioner, 0)?;
    Ok((pair, steps))
}

fn drift_phase<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    pair: &SpringPair<F>,
    cfg: &SpmConfig<F>,
    precond: &dyn Preconditioner<F>,
    cycle: usize,
) -> Result<(SpringPair<F>, usize, PairForces<F>), SpmError> {
    let mut current = pair.clone();
    let mut forces = eval_pair(pes, &current, precond)?;
    let mut steps = 0;
    loop {
        current = apply_drift(&current, &forces, cfg);
        steps += 1;
        ensure_finite(&current, "drift step", cycle)?;
        forces = eval_pair(pes, &current, precond)?;
        let residual = forces.perp1.norm().max(forces.perp2.norm());
        if residual < cfg.eps1 || steps >= cfg.max_drift_steps {
            return Ok((current, steps, forces));
        }
    }
}

/// Exactly one climbing update of both particles against the pair's current
/// spring direction. Both particles move along that direction, so the spring
/// direction is preserved up to sign.
pub fn climb_step<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    pair: &SpringPair<F>,
    cfg: &SpmConfig<F>,
) -> Result<SpringPair<F>, SpmError> {
    let forces = eval_pair(pes, pair, &IdentityPreconditioner)?;
    let next = apply_climb(pair, &forces, cfg);
    ensure_finite(&next, "climb step", 0)?;
    Ok(next)
}

/// Convergence metric e1 = min(|F(r1)|, |F(r2)|).
pub fn error_e1<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    pair: &SpringPair<F>,
) -> Result<F, SpmError> {
    let n1 = pes.force(&pair.r1)?.norm();
    let n2 = pes.force(&pair.r2)?.norm();
    Ok(n1.min(n2))
}

/// Drift-climb-cycle driver; see [`run_preconditioned`].
pub fn run<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    initial: SpringPair<F>,
    cfg: &SpmConfig<F>,
    known_saddle: Option<&StateVector<F>>,
) -> Result<SaddleResult<F>, SpmError> {
    run_preconditioned(pes, initial, cfg, known_saddle, &IdentityPreconditioner)
}

/// Drift-climb-cycle driver with a metric preconditioner applied to the
/// forces that enter the dynamics. Convergence metrics (e1, e2), recorded
/// energies, and the index-1 verification always use the raw surface.
///
/// A collapsed spring is recovered by re-perturbing `r2 = r1 + l_s·u` with a
/// fresh seeded random unit direction, at most 10 times per run. Returns
/// `Ok` with [`RunStatus::MaxCyclesExceeded`] (trace included) when the cycle
/// cap is hit; hard numerical failures are `Err`.
pub fn run_preconditioned<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    initial: SpringPair<F>,
    cfg: &SpmConfig<F>,
    known_saddle: Option<&StateVector<F>>,
    precond: &dyn Preconditioner<F>,
) -> Result<SaddleResult<F>, SpmError> {
    pes.check_dimension(&initial.r1)?;
    pes.check_dimension(&initial.r2)?;
    if let Some(s) = known_saddle {
        pes.check_dimension(s)?;
    }

    const MAX_COLLAPSES: usize = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.reperturb_seed);
    let mut collapses = 0;
    let mut pair = initial;
    let mut last_direction = pair.direction().ok();
    let mut trace: Vec<CycleRecord<F>> = Vec::new();

    for cycle in 0..cfg.max_cycles {
        // Drift phase, with collapse recovery.
        let (drifted, steps, mut forces) = loop {
            match drift_phase(pes, &pair, cfg, precond, cycle) {
                Ok(out) => break out,
                Err(SpmError::Pair(PairError::DegenerateSpring)) => {
                    collapses += 1;
                    if collapses > MAX_COLLAPSES {
                        return Err(SpmError::TooManyCollapses(collapses));
                    }
                    pair = reperturb(&pair, &mut rng);
                }
                Err(e) => return Err(e),
            }
        };
        pair = drifted;

        // Climb phase: one update by default.
        for _ in 0..cfg.climb_steps_per_cycle.max(1) {
            pair = apply_climb(&pair, &forces, cfg);
            ensure_finite(&pair, "climb step", cycle)?;
            forces = match eval_pair(pes, &pair, precond) {
                Ok(f) => f,
                Err(SpmError::Pair(PairError::DegenerateSpring)) => {
                    collapses += 1;
                    if collapses > MAX_COLLAPSES {
                        return Err(SpmError::TooManyCollapses(collapses));
                    }
                    pair = reperturb(&pair, &mut rng);
                    eval_pair(pes, &pair, precond)?
                }
                Err(e) => return Err(e),
            };
        }
        last_direction = Some(forces.direction.clone());

        // Cycle metrics on the raw surface.
        let raw_f1 = pes.force(&pair.r1)?;
        let raw_f2 = pes.force(&pair.r2)?;
        let (n1, n2) = (raw_f1.norm(), raw_f2.norm());
        let e1 = n1.min(n2);
        let e2 = known_saddle.map(|s| pair.r1.distance(s).min(pair.r2.distance(s)));
        let energy_r1 = pes.energy(&pair.r1)?;
        let energy_r2 = pes.energy(&pair.r2)?;
        trace.push(CycleRecord {
            cycle_index: cycle,
            drift_steps_taken: steps,
            e1,
            e2,
            energy_r1,
            energy_r2,
            positions: cfg
                .record_positions
                .then(|| (pair.r1.clone(), pair.r2.clone())),
        });

        if e1 < cfg.eps2 {
            let (position, energy) = if n1 <= n2 {
                (pair.r1.clone(), energy_r1)
            } else {
                (pair.r2.clone(), energy_r2)
            };
            let mode = last_direction
                .clone()
                .expect("direction recorded every cycle");
            let curvature = directional_curvature(pes, &position, &mode, cfg.curvature_step)?;
            return Ok(SaddleResult {
                status: RunStatus::Converged,
                position,
                energy,
                unstable_mode: mode,
                residual_e1: e1,
                cycles_used: cycle + 1,
                verified_index1: curvature < F::zero(),
                mode_curvature: curvature,
                trace,
            });
        }
    }

    // Out of cycles: report the best particle of the final pair.
    let raw_f1 = pes.force(&pair.r1)?;
    let raw_f2 = pes.force(&pair.r2)?;
    let (n1, n2) = (raw_f1.norm(), raw_f2.norm());
    let (position, energy) = if n1 <= n2 {
        (pair.r1.clone(), pes.energy(&pair.r1)?)
    } else {
        (pair.r2.clone(), pes.energy(&pair.r2)?)
    };
    let mode = last_direction.unwrap_or_else(|| {
        let mut v = StateVector::zeros(position.dim());
        v.as_mut_slice()[0] = F::one();
        v
    });
    let curvature = directional_curvature(pes, &position, &mode, cfg.curvature_step)?;
    Ok(SaddleResult {
        status: RunStatus::MaxCyclesExceeded,
        position,
        energy,
        unstable_mode: mode,
        residual_e1: n1.min(n2),
        cycles_used: cfg.max_cycles,
        verified_index1: curvature < F::zero(),
        mode_curvature: curvature,
        trace,
    })
}

fn reperturb<F: Scalar>(pair: &SpringPair<F>, rng: &mut ChaCha8Rng) -> SpringPair<F> {
    let dim = pair.r1.dim();
    let u = random_unit_vector(dim, rng);
    SpringPair {
        r1: pair.r1.clone(),
        r2: pair.r1.add_scaled(pair.natural_length, &u),
        natural_length: pair.natural_length,
    }
}

/// Random unit vector from seeded standard normals.
pub fn random_unit_vector<F: Scalar>(dim: usize, rng: &mut ChaCha8Rng) -> StateVector<F> {
    loop {
        let v = StateVector::from_fn(dim, |_| cast::<F>(rng.sample::<f64, _>(StandardNormal)));
        if let Some(u) = v.normalized() {
            return u;
        }
    }
}
