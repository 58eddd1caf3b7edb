//! Materialization of a validated [`RunConfig`]: the surface, the initial
//! walker state, the optional preconditioner, and the problem-appropriate
//! state-vector file format.

use std::path::Path;

use anyhow::{bail, Context, Result};

use spm_core::io;
use spm_core::landscape::{gradient_descent_traced, DescentParams};
use spm_core::potentials::{pentagonal_bipyramid, LJCluster, LpSurface, V1Surface, V2Surface};
use spm_core::spm::{ChaCha8Rng, SeedableRng};
use spm_core::{
    IdentityPreconditioner, PotentialSurface, Preconditioner, SpringPair, StateVector,
};

use crate::config::{
    ClusterStart, FieldBackground, FieldSeed, InitialSpec, ProblemKind, RunConfig,
};

pub enum Problem {
    V1(V1Surface),
    V2(V2Surface),
    Lj(LJCluster),
    Lp(LpSurface<f64>),
}

impl Problem {
    pub fn build(cfg: &RunConfig) -> Self {
        match cfg.problem {
            ProblemKind::V1 => Problem::V1(V1Surface),
            ProblemKind::V2 => Problem::V2(V2Surface),
            ProblemKind::Lj => Problem::Lj(LJCluster::new(cfg.lj_particles)),
            ProblemKind::Lp => Problem::Lp(LpSurface::new(
                cfg.lp.grid_size,
                cfg.lp.domain_length,
                cfg.lp.epsilon,
                cfg.lp.alpha,
                cfg.lp.q1,
                cfg.lp.q2,
            )),
        }
    }

    pub fn pes(&self) -> &dyn PotentialSurface<f64> {
        match self {
            Problem::V1(p) => p,
            Problem::V2(p) => p,
            Problem::Lj(p) => p,
            Problem::Lp(p) => p,
        }
    }

    pub fn preconditioner(&self, enabled: bool) -> Box<dyn Preconditioner<f64>> {
        match (self, enabled) {
            (Problem::Lp(p), true) => Box::new(p.preconditioner()),
            _ => Box::new(IdentityPreconditioner),
        }
    }

    /// File extension for state dumps of this problem.
    pub fn state_extension(&self) -> &'static str {
        match self {
            Problem::V1(_) | Problem::V2(_) => "csv",
            Problem::Lj(_) => "xyz",
            Problem::Lp(_) => "f64",
        }
    }

    /// Writes a state vector in the problem-appropriate format, returning the
    /// file name used.
    pub fn write_state(&self, dir: &Path, stem: &str, v: &StateVector<f64>) -> Result<String> {
        let name = format!("{stem}.{}", self.state_extension());
        let path = dir.join(&name);
        match self {
            Problem::V1(_) | Problem::V2(_) => io::write_vector_csv(&path, v)?,
            Problem::Lj(_) => io::write_xyz(&path, stem, v)?,
            Problem::Lp(p) => io::write_field(
                &path,
                v,
                &io::FieldSidecar {
                    domain_length: p.domain_length(),
                    grid_size: p.grid_size(),
                    epsilon: p.epsilon(),
                    alpha: p.alpha(),
                    q1: p.q1(),
                    q2: p.q2(),
                },
            )?,
        }
        Ok(name)
    }

    pub fn read_state(&self, path: &Path) -> Result<StateVector<f64>> {
        let v = match self {
            Problem::V1(_) | Problem::V2(_) => io::read_vector_csv(path)?,
            Problem::Lj(_) => io::read_xyz(path)?.1,
            Problem::Lp(_) => io::read_field(path)?.0,
        };
        if v.dim() != self.pes().dimension() {
            bail!(
                "state in {} has dimension {}, problem expects {}",
                path.display(),
                v.dim(),
                self.pes().dimension()
            );
        }
        Ok(v)
    }
}

/// The initial walker state: the spring pair plus the orientation handed to
/// the baseline walkers (dimer orientation, GAD mode).
pub struct InitialState {
    pub pair: SpringPair<f64>,
    pub direction: StateVector<f64>,
}

pub fn build_initial(problem: &Problem, cfg: &RunConfig) -> Result<InitialState> {
    match (&cfg.initial, problem) {
        (
            InitialSpec::Point {
                start,
                relax_start,
                direction,
                size,
            },
            _,
        ) => {
            let mut r1 = StateVector::new(vec![start[0], start[1]]).context("start point")?;
            if *relax_start {
                let (minimum, _) = gradient_descent_traced(
                    problem.pes(),
                    &r1,
                    &DescentParams {
                        step: 1e-2,
                        force_tol: 1e-12,
                        max_iters: 2_000_000,
                        record_every: usize::MAX,
                    },
                    &IdentityPreconditioner,
                )
                .context("relaxing the start point")?;
                r1 = minimum.position;
            }
            let dir = StateVector::new(vec![direction[0], direction[1]])
                .context("perturbation direction")?;
            let unit = dir
                .normalized()
                .context("perturbation direction must be nonzero")?;
            let pair = SpringPair::from_perturbation(r1, &unit, *size, cfg.spm.natural_length)?;
            Ok(InitialState {
                pair,
                direction: unit,
            })
        }
        (
            InitialSpec::Cluster {
                structure,
                relax_start,
                direction_seed,
                size,
            },
            Problem::Lj(_),
        ) => {
            let mut r1 = match structure {
                ClusterStart::PentagonalBipyramid => pentagonal_bipyramid::<f64>(),
                ClusterStart::XyzFile(path) => problem.read_state(path)?,
            };
            if *relax_start {
                let (minimum, _) = gradient_descent_traced(
                    problem.pes(),
                    &r1,
                    &DescentParams {
                        step: 1e-3,
                        force_tol: 1e-10,
                        max_iters: 5_000_000,
                        record_every: usize::MAX,
                    },
                    &IdentityPreconditioner,
                )
                .context("relaxing the start structure")?;
                r1 = minimum.position;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*direction_seed);
            let unit = spm_core::spm::random_unit_vector::<f64>(r1.dim(), &mut rng);
            let pair = SpringPair::from_perturbation(r1, &unit, *size, cfg.spm.natural_length)?;
            Ok(InitialState {
                pair,
                direction: unit,
            })
        }
        (
            InitialSpec::Field {
                background,
                seed_kind,
                sigma_frac,
                peak,
                size,
            },
            Problem::Lp(lp),
        ) => {
            let background = match background {
                FieldBackground::Zero => StateVector::zeros(lp.grid_size() * lp.grid_size()),
                FieldBackground::RelaxedQuasicrystal { amplitude } => {
                    let seed = lp.twelve_beam_seed(*amplitude);
                    let precond = lp.preconditioner();
                    let (minimum, _) = gradient_descent_traced(
                        problem.pes(),
                        &seed,
                        &DescentParams {
                            step: 0.1,
                            force_tol: 1e-9,
                            max_iters: 500_000,
                            record_every: usize::MAX,
                        },
                        &precond,
                    )
                    .context("relaxing the quasicrystal background")?;
                    minimum.position
                }
                FieldBackground::File(path) => problem.read_state(path)?,
            };
            let patch = match seed_kind {
                FieldSeed::TwelveBeamDroplet => lp.localized_twelve_beam(*sigma_frac, *peak),
                FieldSeed::Stripes => lp.localized_stripes(*sigma_frac, *peak, lp.q2()),
                FieldSeed::Random { seed, k_cut } => {
                    let f = lp.random_zero_mean_field(*seed, 1.0, *k_cut);
                    let max = f.max_abs();
                    f.scaled(*peak / max)
                }
            };
            let unit = patch
                .normalized()
                .context("seed patch must be nonzero")?;
            let r1 = &background + &patch;
            let r2 = r1.add_scaled(*size, &unit);
            let pair = SpringPair::new(r1, r2, cfg.spm.natural_length)?;
            Ok(InitialState {
                pair,
                direction: unit,
            })
        }
        _ => bail!("initial block does not match the problem kind"),
    }
}
