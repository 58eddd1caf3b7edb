//! Landscape enumeration: minima discovery by gradient descent, saddle
//! enumeration by repeated spring-pair runs from each minimum, minimum
//! energy path reconstruction by unstable-mode descent, and barrier-graph
//! assembly.
//!
//! The exploration is breadth-first: every saddle found from a minimum is
//! descended on both sides of its unstable mode; new endpoint minima join
//! the frontier until no new minima appear. Minima and saddles are
//! deduplicated by energy, which also merges copies equivalent up to
//! translation, rotation, and particle permutation on cluster surfaces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::num::{cast, Scalar};
use crate::pes::{IdentityPreconditioner, PesError, PotentialSurface, Preconditioner};
use crate::spm::{
    random_unit_vector, run_preconditioned, RunStatus, SaddleResult, SpmConfig, SpmError,
};
use crate::pair::SpringPair;
use crate::vector::StateVector;

#[derive(Debug, Error)]
pub enum LandscapeError {
    #[error("gradient descent did not reach tolerance in {iters} iterations (|∇E| = {residual:e})")]
    MaxItersExceeded { iters: usize, residual: f64 },
    #[error("minima frontier exceeded the budget of {budget}")]
    FrontierBudgetExceeded { budget: usize },
    #[error("saddle must be verified index-1 before path reconstruction")]
    UnverifiedSaddle,
    #[error(transparent)]
    Pes(#[from] PesError),
    #[error(transparent)]
    Spm(#[from] SpmError),
}

/// A relaxed local minimum.
#[derive(Clone, Debug)]
pub struct Minimum<F> {
    pub position: StateVector<F>,
    pub energy: F,
    pub label: String,
}

/// Gradient-descent settings.
#[derive(Clone, Debug)]
pub struct DescentParams<F> {
    /// Forward-Euler step size.
    pub step: F,
    /// Convergence threshold on |∇E|.
    pub force_tol: F,
    pub max_iters: usize,
    /// Record every k-th point when tracing a path.
    pub record_every: usize,
}

impl<F: Scalar> Default for DescentParams<F> {
    fn default() -> Self {
        Self {
            step: cast(1e-3),
            force_tol: cast(1e-8),
            max_iters: 2_000_000,
            record_every: 10,
        }
    }
}

/// Forward-Euler gradient descent `x ← x − step ∇E` until `|∇E| < force_tol`.
pub fn gradient_descent<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    x0: &StateVector<F>,
    params: &DescentParams<F>,
) -> Result<Minimum<F>, LandscapeError> {
    let (minimum, _) = descend(pes, x0, params, &IdentityPreconditioner, false)?;
    Ok(minimum)
}

/// Gradient descent that also records the trajectory (subsampled by
/// `record_every`, endpoints always included).
pub fn gradient_descent_traced<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    x0: &StateVector<F>,
    params: &DescentParams<F>,
    precond: &dyn Preconditioner<F>,
) -> Result<(Minimum<F>, Vec<StateVector<F>>), LandscapeError> {
    descend(pes, x0, params, precond, true)
}

fn descend<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    x0: &StateVector<F>,
    params: &DescentParams<F>,
    precond: &dyn Preconditioner<F>,
    trace: bool,
) -> Result<(Minimum<F>, Vec<StateVector<F>>), LandscapeError> {
    assert!(params.step > F::zero(), "descent step must be > 0");
    let mut x = x0.clone();
    let mut path = Vec::new();
    if trace {
        path.push(x.clone());
    }
    let every = params.record_every.max(1);
    for iter in 0..params.max_iters {
        let grad = pes.gradient(&x)?;
        let residual = grad.norm();
        if residual < params.force_tol {
            if trace && path.last().map(|p| p != &x).unwrap_or(true) {
                path.push(x.clone());
            }
            let energy = pes.energy(&x)?;
            return Ok((
                Minimum {
                    position: x,
                    energy,
                    label: String::new(),
                },
                path,
            ));
        }
        let update = precond.apply(&grad.scaled(-F::one()));
        x.add_scaled_assign(params.step, &update);
        if trace && (iter + 1) % every == 0 {
            path.push(x.clone());
        }
    }
    let residual = pes.gradient(&x)?.norm();
    Err(LandscapeError::MaxItersExceeded {
        iters: params.max_iters,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Knobs for saddle enumeration around a minimum.
#[derive(Clone, Debug)]
pub struct SearchParams<F> {
    /// Random spring-pair starts per minimum.
    pub n_trials: usize,
    /// Separation of the perturbed second particle.
    pub perturbation_size: F,
    /// Base seed; trial k from minimum m uses stream m·10⁶ + k.
    pub seed: u64,
    /// Saddles within this energy window are the same saddle.
    pub dedup_energy_tol: F,
    /// And within this position distance (checked when energies collide).
    pub dedup_position_tol: F,
    /// Ignore positions and deduplicate by energy alone. The right policy for
    /// cluster surfaces, where configurations equivalent up to translation,
    /// rotation, and particle permutation are the same saddle at far-apart
    /// coordinates.
    pub dedup_by_energy_only: bool,
    /// Reject "saddles" whose mode curvature is not clearly negative;
    /// filters walkers that settled on a minimum along a flat mode.
    pub curvature_cutoff: F,
}

impl<F: Scalar> Default for SearchParams<F> {
    fn default() -> Self {
        Self {
            n_trials: 200,
            perturbation_size: cast(0.1),
            seed: 0,
            dedup_energy_tol: cast(1e-6),
            dedup_position_tol: cast(1e-4),
            dedup_by_energy_only: false,
            curvature_cutoff: cast(-1e-4),
        }
    }
}

/// Outcome of [`find_saddles_from_minimum`].
#[derive(Debug)]
pub struct SearchOutcome<F> {
    /// Distinct converged index-1 saddles, sorted by energy.
    pub saddles: Vec<SaddleResult<F>>,
    /// Trials that did not produce an accepted saddle.
    pub rejected_trials: usize,
}

/// Launches `n_trials` spring-pair runs from a minimum with seeded random
/// perturbation directions, deduplicates the converged saddles by energy
/// (and position within equal-energy groups), and returns them sorted by
/// energy.
pub fn find_saddles_from_minimum<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    minimum: &Minimum<F>,
    cfg: &SpmConfig<F>,
    params: &SearchParams<F>,
) -> Result<SearchOutcome<F>, LandscapeError> {
    find_saddles_streamed(pes, minimum, cfg, params, 0, &IdentityPreconditioner)
}

fn find_saddles_streamed<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    minimum: &Minimum<F>,
    cfg: &SpmConfig<F>,
    params: &SearchParams<F>,
    stream_base: u64,
    precond: &dyn Preconditioner<F>,
) -> Result<SearchOutcome<F>, LandscapeError> {
    assert!(params.n_trials >= 1, "n_trials must be >= 1");
    let dim = minimum.position.dim();
    let mut saddles: Vec<SaddleResult<F>> = Vec::new();
    let mut rejected = 0;

    for trial in 0..params.n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(stream_base.wrapping_mul(1_000_000).wrapping_add(trial as u64));
        let direction = random_unit_vector::<F>(dim, &mut rng);
        let pair = SpringPair {
            r1: minimum.position.clone(),
            r2: minimum
                .position
                .add_scaled(params.perturbation_size, &direction),
            natural_length: cfg.natural_length,
        };
        let result = match run_preconditioned(pes, pair, cfg, None, precond) {
            Ok(r) => r,
            Err(SpmError::NonFiniteState { .. }) | Err(SpmError::TooManyCollapses(_)) => {
                rejected += 1;
                continue;
            }
            Err(SpmError::Pes(PesError::SingularPoint { .. }))
            | Err(SpmError::Pes(PesError::OverlappingParticles { .. })) => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if result.status != RunStatus::Converged
            || !result.verified_index1
            || result.mode_curvature > params.curvature_cutoff
        {
            rejected += 1;
            continue;
        }
        let duplicate = saddles.iter().any(|s| {
            (s.energy - result.energy).abs() < params.dedup_energy_tol
                && (params.dedup_by_energy_only
                    || s.position.distance(&result.position) < params.dedup_position_tol)
        });
        if !duplicate {
            saddles.push(result);
        }
    }

    saddles.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    Ok(SearchOutcome {
        saddles,
        rejected_trials: rejected,
    })
}

/// A reconstructed minimum energy path through a saddle.
#[derive(Clone, Debug)]
pub struct MepPath<F> {
    /// Reversed minus-branch, the saddle, then the plus-branch.
    pub points: Vec<StateVector<F>>,
    /// Index of the saddle row within `points`.
    pub saddle_index: usize,
    /// Minimum reached along −unstable_mode.
    pub minimum_a: Minimum<F>,
    /// Minimum reached along +unstable_mode.
    pub minimum_b: Minimum<F>,
}

/// Perturbs a verified saddle by ±delta along its unstable mode, descends
/// both branches, and stitches the trajectories into one path.
pub fn reconstruct_mep<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    saddle: &SaddleResult<F>,
    delta: F,
    descent: &DescentParams<F>,
) -> Result<MepPath<F>, LandscapeError> {
    reconstruct_mep_preconditioned(pes, saddle, delta, descent, &IdentityPreconditioner)
}

/// [`reconstruct_mep`] with a metric preconditioner on the descent flow.
pub fn reconstruct_mep_preconditioned<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    saddle: &SaddleResult<F>,
    delta: F,
    descent: &DescentParams<F>,
    precond: &dyn Preconditioner<F>,
) -> Result<MepPath<F>, LandscapeError> {
    assert!(delta > F::zero(), "perturbation delta must be > 0");
    if !saddle.verified_index1 {
        return Err(LandscapeError::UnverifiedSaddle);
    }
    let minus_start = saddle.position.add_scaled(-delta, &saddle.unstable_mode);
    let plus_start = saddle.position.add_scaled(delta, &saddle.unstable_mode);
    let (min_a, path_a) = gradient_descent_traced(pes, &minus_start, descent, precond)?;
    let (min_b, path_b) = gradient_descent_traced(pes, &plus_start, descent, precond)?;

    let mut points: Vec<StateVector<F>> = path_a.into_iter().rev().collect();
    let saddle_index = points.len();
    points.push(saddle.position.clone());
    points.extend(path_b);

    Ok(MepPath {
        points,
        saddle_index,
        minimum_a: min_a,
        minimum_b: min_b,
    })
}

/// A saddle connecting two minima, with forward and backward barriers.
#[derive(Clone, Debug)]
pub struct SaddleEdge<F> {
    pub saddle: SaddleResult<F>,
    pub minimum_a: String,
    pub minimum_b: String,
    /// saddle energy − energy(minimum_a).
    pub barrier_from_a: F,
    /// saddle energy − energy(minimum_b).
    pub barrier_from_b: F,
}

/// Minima nodes and saddle edges of an explored landscape.
#[derive(Clone, Debug, Default)]
pub struct LandscapeGraph<F> {
    pub minima: Vec<Minimum<F>>,
    pub edges: Vec<SaddleEdge<F>>,
}

impl<F: Scalar> LandscapeGraph<F> {
    pub fn minimum(&self, label: &str) -> Option<&Minimum<F>> {
        self.minima.iter().find(|m| m.label == label)
    }

    /// Edges whose two endpoints are different minima, sorted by saddle energy.
    pub fn inter_minima_edges(&self) -> Vec<&SaddleEdge<F>> {
        let mut edges: Vec<&SaddleEdge<F>> = self
            .edges
            .iter()
            .filter(|e| e.minimum_a != e.minimum_b)
            .collect();
        edges.sort_by(|a, b| a.saddle.energy.partial_cmp(&b.saddle.energy).unwrap());
        edges
    }
}

/// Exploration budget and policies for [`build_graph`].
#[derive(Clone, Debug)]
pub struct EnumerationParams<F> {
    pub search: SearchParams<F>,
    pub descent: DescentParams<F>,
    /// Unstable-mode perturbation used for path reconstruction.
    pub mep_delta: F,
    /// Abort when more distinct minima than this are discovered.
    pub max_minima: usize,
}

impl<F: Scalar> Default for EnumerationParams<F> {
    fn default() -> Self {
        Self {
            search: SearchParams::default(),
            descent: DescentParams::default(),
            mep_delta: cast(0.1),
            max_minima: 64,
        }
    }
}

/// Breadth-first landscape exploration from one relaxed minimum.
///
/// Finds saddles from each frontier minimum, descends each saddle's unstable
/// mode to discover endpoint minima, adds unseen minima to the frontier, and
/// stops when the frontier drains. Minima are labeled `M1, M2, ...` in
/// ascending energy order on return; edges are sorted by saddle energy.
pub fn build_graph<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    seed_minimum: &Minimum<F>,
    cfg: &SpmConfig<F>,
    params: &EnumerationParams<F>,
) -> Result<LandscapeGraph<F>, LandscapeError> {
    struct Node<F> {
        minimum: Minimum<F>,
    }
    struct Edge<F> {
        saddle: SaddleResult<F>,
        a: usize,
        b: usize,
    }

    let mut nodes: Vec<Node<F>> = vec![Node {
        minimum: seed_minimum.clone(),
    }];
    let mut edges: Vec<Edge<F>> = Vec::new();
    let mut frontier: std::collections::VecDeque<usize> = [0].into();

    // Matches a relaxed minimum against the known set by energy.
    let match_minimum = |nodes: &[Node<F>], m: &Minimum<F>| -> Option<usize> {
        nodes
            .iter()
            .position(|n| (n.minimum.energy - m.energy).abs() < params.search.dedup_energy_tol)
    };

    while let Some(node_idx) = frontier.pop_front() {
        let outcome = find_saddles_streamed(
            pes,
            &nodes[node_idx].minimum,
            cfg,
            &params.search,
            node_idx as u64 + 1,
            &IdentityPreconditioner,
        )?;
        for saddle in outcome.saddles {
            // Skip saddles already present as edges.
            if edges
                .iter()
                .any(|e| (e.saddle.energy - saddle.energy).abs() < params.search.dedup_energy_tol)
            {
                continue;
            }
            let mep = reconstruct_mep(pes, &saddle, params.mep_delta, &params.descent)?;
            let mut endpoint_idx = |m: Minimum<F>| -> Result<usize, LandscapeError> {
                if let Some(i) = match_minimum(&nodes, &m) {
                    return Ok(i);
                }
                if nodes.len() >= params.max_minima {
                    return Err(LandscapeError::FrontierBudgetExceeded {
                        budget: params.max_minima,
                    });
                }
                nodes.push(Node { minimum: m });
                frontier.push_back(nodes.len() - 1);
                Ok(nodes.len() - 1)
            };
            let a = endpoint_idx(mep.minimum_a)?;
            let b = endpoint_idx(mep.minimum_b)?;
            edges.push(Edge { saddle, a, b });
        }
    }

    // Label minima by ascending energy: M1 is the global minimum found.
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&i, &j| {
        nodes[i]
            .minimum
            .energy
            .partial_cmp(&nodes[j].minimum.energy)
            .unwrap()
    });
    let mut rank = vec![0usize; nodes.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let minima: Vec<Minimum<F>> = order
        .iter()
        .map(|&i| {
            let mut m = nodes[i].minimum.clone();
            m.label = format!("M{}", rank[i] + 1);
            m
        })
        .collect();

    let mut out_edges: Vec<SaddleEdge<F>> = edges
        .into_iter()
        .map(|e| {
            let ea = nodes[e.a].minimum.energy;
            let eb = nodes[e.b].minimum.energy;
            SaddleEdge {
                barrier_from_a: e.saddle.energy - ea,
                barrier_from_b: e.saddle.energy - eb,
                minimum_a: format!("M{}", rank[e.a] + 1),
                minimum_b: format!("M{}", rank[e.b] + 1),
                saddle: e.saddle,
            }
        })
        .collect();
    out_edges.sort_by(|a, b| a.saddle.energy.partial_cmp(&b.saddle.energy).unwrap());

    Ok(LandscapeGraph {
        minima,
        edges: out_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::V1Surface;
    use crate::spm::run;
    use crate::vector::vec2;

    #[test]
    fn descent_reaches_v1_upper_minimum() {
        let m = gradient_descent(
            &V1Surface,
            &vec2(0.1f64, 0.9),
            &DescentParams {
                step: 1e-2,
                force_tol: 1e-9,
                ..DescentParams::default()
            },
        )
        .unwrap();
        assert!(m.position.distance(&vec2(0.0, 1.0)) < 1e-5);
        assert!(m.energy.abs() < 1e-12);
    }

    #[test]
    fn descent_quadratic_bowl_hits_origin() {
        struct Bowl;
        impl PotentialSurface<f64> for Bowl {
            fn dimension(&self) -> usize {
                2
            }
            fn energy(&self, x: &StateVector<f64>) -> Result<f64, PesError> {
                Ok(0.5 * x.norm_squared())
            }
            fn gradient(&self, x: &StateVector<f64>) -> Result<StateVector<f64>, PesError> {
                Ok(x.clone())
            }
        }
        let m = gradient_descent(
            &Bowl,
            &vec2(2.0f64, -1.5),
            &DescentParams {
                step: 0.1,
                force_tol: 1e-10,
                ..DescentParams::default()
            },
        )
        .unwrap();
        assert!(m.position.norm() < 1e-9);
    }

    #[test]
    fn descent_budget_error() {
        let err = gradient_descent(
            &V1Surface,
            &vec2(0.1f64, 0.9),
            &DescentParams {
                step: 1e-6,
                force_tol: 1e-12,
                max_iters: 10,
                ..DescentParams::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, LandscapeError::MaxItersExceeded { .. }));
    }

    #[test]
    fn v1_enumeration_finds_both_saddles() {
        let minimum = Minimum {
            position: vec2(0.0f64, -1.0),
            energy: 0.0,
            label: "M1".into(),
        };
        let cfg = SpmConfig::default();
        let params = SearchParams {
            n_trials: 12,
            perturbation_size: 0.3,
            seed: 7,
            ..SearchParams::default()
        };
        let outcome = find_saddles_from_minimum(&V1Surface, &minimum, &cfg, &params).unwrap();
        // (1,0) and (-1,0) have equal energy; the position check inside the
        // equal-energy group keeps them distinct.
        assert_eq!(
            outcome.saddles.len(),
            2,
            "saddles {:?}, rejected {}",
            outcome.saddles.iter().map(|s| &s.position).collect::<Vec<_>>(),
            outcome.rejected_trials
        );
        for s in &outcome.saddles {
            assert!((s.energy - 1.0).abs() < 1e-6);
            assert!((s.position.norm() - 1.0).abs() < 1e-5);
        }
        assert!(outcome.saddles[0].position.distance(&outcome.saddles[1].position) > 1.0);
    }

    #[test]
    fn v1_mep_endpoints_and_profile() {
        let cfg = SpmConfig::default();
        let pair = SpringPair::from_perturbation(vec2(0.0f64, -1.0), &vec2(0.4, 1.0), 0.3, 1e-2)
            .unwrap();
        let saddle = run(&V1Surface, pair, &cfg, None).unwrap();
        let path = reconstruct_mep(
            &V1Surface,
            &saddle,
            0.1,
            &DescentParams {
                step: 1e-2,
                force_tol: 1e-9,
                record_every: 5,
                ..DescentParams::default()
            },
        )
        .unwrap();
        let first = path.points.first().unwrap();
        let last = path.points.last().unwrap();
        let d_upper = first.distance(&vec2(0.0, 1.0)).min(last.distance(&vec2(0.0, 1.0)));
        let d_lower = first.distance(&vec2(0.0, -1.0)).min(last.distance(&vec2(0.0, -1.0)));
        assert!(d_upper < 1e-4, "upper endpoint off by {d_upper:e}");
        assert!(d_lower < 1e-4, "lower endpoint off by {d_lower:e}");
        // Interior points ride the circle.
        for p in &path.points {
            assert!((p.norm() - 1.0).abs() < 1e-2);
        }
        // Profile maximum sits at the saddle row.
        let energies: Vec<f64> = path
            .points
            .iter()
            .map(|p| V1Surface.energy(p).unwrap())
            .collect();
        let argmax = energies
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(argmax, path.saddle_index);
    }

    #[test]
    fn graph_dedup_is_seed_order_independent() {
        // Rebuilding with a different trial seed must yield the same minima
        // and edge energy multisets under the dedup tolerances.
        let minimum = Minimum {
            position: vec2(0.0f64, -1.0),
            energy: 0.0,
            label: String::new(),
        };
        let cfg = SpmConfig::default();
        let build = |seed: u64| {
            let params = EnumerationParams {
                search: SearchParams {
                    n_trials: 10,
                    perturbation_size: 0.3,
                    seed,
                    dedup_by_energy_only: true,
                    ..SearchParams::default()
                },
                descent: DescentParams {
                    step: 1e-2,
                    force_tol: 1e-9,
                    record_every: 50,
                    ..DescentParams::default()
                },
                mep_delta: 0.1,
                max_minima: 8,
            };
            build_graph(&V1Surface, &minimum, &cfg, &params).unwrap()
        };
        let a = build(3);
        let b = build(1234);
        let energies = |g: &LandscapeGraph<f64>| {
            let mut m: Vec<i64> = g
                .minima
                .iter()
                .map(|x| (x.energy / 1e-6).round() as i64)
                .collect();
            m.sort();
            let mut e: Vec<i64> = g
                .edges
                .iter()
                .map(|x| (x.saddle.energy / 1e-6).round() as i64)
                .collect();
            e.sort();
            (m, e)
        };
        assert_eq!(energies(&a), energies(&b));
    }

    #[test]
    fn unverified_saddle_rejected() {
        let cfg = SpmConfig::default();
        let pair = SpringPair::from_perturbation(vec2(0.0f64, -1.0), &vec2(0.4, 1.0), 0.3, 1e-2)
            .unwrap();
        let mut saddle = run(&V1Surface, pair, &cfg, None).unwrap();
        saddle.verified_index1 = false;
        let err =
            reconstruct_mep(&V1Surface, &saddle, 0.1, &DescentParams::default()).unwrap_err();
        assert!(matches!(err, LandscapeError::UnverifiedSaddle));
    }
}
