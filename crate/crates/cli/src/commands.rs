//! Subcommand implementations: `run`, `landscape`, `mep`, `compare`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use spm_core::baselines::{dimer_run, gad_run, path_max_energy, DimerState, GadState};
use spm_core::io;
use spm_core::landscape::{build_graph, reconstruct_mep_preconditioned, Minimum};
use spm_core::spm::{run_preconditioned, RunStatus, SaddleResult};
use spm_core::StateVector;

use crate::config::{MethodKind, ProblemKind, RunConfig};
use crate::problem::{build_initial, Problem};

/// Process exit codes: 0 success, 1 configuration or I/O error (raised as
/// `Err` upstream), 2 a walker or exploration that did not converge.
pub const EXIT_NOT_CONVERGED: u8 = 2;

fn ensure_out_dir(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create output directory {}", cfg.out_dir.display()))
}

fn known_saddle_vec(cfg: &RunConfig) -> Option<StateVector<f64>> {
    cfg.known_saddle
        .as_ref()
        .map(|v| StateVector::new(v.clone()).expect("validated known saddle"))
}

/// Executes one walker run and writes the trace, result document, and
/// position/mode dumps. Returns the suggested process exit code.
pub fn cmd_run(cfg: &RunConfig) -> Result<u8> {
    ensure_out_dir(cfg)?;
    let problem = Problem::build(cfg);
    let initial = build_initial(&problem, cfg)?;
    let result = execute_method(&problem, cfg, &initial.pair, &initial.direction)?;
    write_run_outputs(&problem, cfg, &result, "result")?;
    println!(
        "{}: status={} energy={} e1={:e} cycles={} verified_index1={}",
        method_name(cfg.method),
        io::status_str(result.status),
        result.energy,
        result.residual_e1,
        result.cycles_used,
        result.verified_index1
    );
    Ok(if result.status == RunStatus::Converged {
        0
    } else {
        EXIT_NOT_CONVERGED
    })
}

pub fn method_name(method: MethodKind) -> &'static str {
    match method {
        MethodKind::Spm => "spm",
        MethodKind::Dimer => "dimer",
        MethodKind::Gad => "gad",
    }
}

fn execute_method(
    problem: &Problem,
    cfg: &RunConfig,
    pair: &spm_core::SpringPair<f64>,
    direction: &StateVector<f64>,
) -> Result<SaddleResult<f64>> {
    let known = known_saddle_vec(cfg);
    match cfg.method {
        MethodKind::Spm => {
            let precond = problem.preconditioner(cfg.precondition);
            Ok(run_preconditioned(
                problem.pes(),
                pair.clone(),
                &cfg.spm,
                known.as_ref(),
                precond.as_ref(),
            )?)
        }
        MethodKind::Dimer => {
            let state = DimerState::new(
                pair.r2.clone(),
                direction.clone(),
                cfg.dimer_half_length,
            )?;
            Ok(dimer_run(problem.pes(), state, &cfg.baseline)?)
        }
        MethodKind::Gad => {
            let state = GadState::new(pair.r2.clone(), direction.clone())?;
            Ok(gad_run(problem.pes(), state, &cfg.baseline)?)
        }
    }
}

fn write_run_outputs(
    problem: &Problem,
    cfg: &RunConfig,
    result: &SaddleResult<f64>,
    stem: &str,
) -> Result<()> {
    io::write_trace_csv(&cfg.out_dir.join(format!("{stem}_trace.csv")), &result.trace)?;
    let position_file = problem.write_state(&cfg.out_dir, &format!("{stem}_position"), &result.position)?;
    let mode_file = problem.write_state(&cfg.out_dir, &format!("{stem}_mode"), &result.unstable_mode)?;
    let doc = io::ResultDocument::new(result, position_file, mode_file);
    io::write_result_json(&cfg.out_dir.join(format!("{stem}.json")), &doc)?;
    Ok(())
}

/// Landscape enumeration: explores from the configured start minimum, writes
/// the graph JSON plus configuration dumps, and prints minima/edge tables.
pub fn cmd_landscape(cfg: &RunConfig) -> Result<u8> {
    if cfg.problem != ProblemKind::Lj {
        bail!("landscape exploration is defined for the lj problem");
    }
    ensure_out_dir(cfg)?;
    let problem = Problem::build(cfg);
    let initial = build_initial(&problem, cfg)?;
    let seed_minimum = Minimum {
        energy: problem.pes().energy(&initial.pair.r1)?,
        position: initial.pair.r1.clone(),
        label: "M1".into(),
    };
    let graph = match build_graph(problem.pes(), &seed_minimum, &cfg.spm, &cfg.enumeration) {
        Ok(g) => g,
        Err(spm_core::landscape::LandscapeError::FrontierBudgetExceeded { budget }) => {
            eprintln!("exploration stopped: minima frontier exceeded the budget of {budget}");
            return Ok(EXIT_NOT_CONVERGED);
        }
        Err(e) => return Err(e.into()),
    };

    let doc = io::GraphDocument::from_graph(&graph);
    for (m, entry) in graph.minima.iter().zip(&doc.minima) {
        io::write_xyz(
            &cfg.out_dir.join(&entry.xyz_file),
            &format!("{} energy {}", m.label, m.energy),
            &m.position,
        )?;
    }
    for (e, entry) in graph.edges.iter().zip(&doc.edges) {
        io::write_xyz(
            &cfg.out_dir.join(&entry.xyz_file),
            &format!("saddle {}-{} energy {}", e.minimum_a, e.minimum_b, e.saddle.energy),
            &e.saddle.position,
        )?;
    }
    io::write_graph_json(&cfg.out_dir.join("graph.json"), &doc)?;

    println!("Minima");
    println!("{:<6} {:>12}", "label", "energy");
    for m in &graph.minima {
        println!("{:<6} {:>12.4}", m.label, m.energy);
    }
    println!();
    println!("Saddle points");
    println!(
        "{:<8} {:<10} {:>12} {:>14}",
        "saddle", "connects", "energy", "barrier"
    );
    for (k, e) in graph.edges.iter().enumerate() {
        // Barrier quoted from the higher-energy minimum, the crossing that
        // controls the escape from the shallower basin.
        let barrier = e.barrier_from_a.min(e.barrier_from_b);
        println!(
            "({:<2})     {:<10} {:>12.4} {:>14.4}",
            (b'a' + k as u8) as char,
            format!("{}-{}", e.minimum_a, e.minimum_b),
            e.saddle.energy,
            barrier
        );
    }
    Ok(0)
}

/// Reconstructs the minimum energy path through a previously computed saddle.
pub fn cmd_mep(cfg: &RunConfig, saddle_json: &Path) -> Result<u8> {
    ensure_out_dir(cfg)?;
    let problem = Problem::build(cfg);
    let doc = io::read_result_json(saddle_json)
        .with_context(|| format!("reading saddle result {}", saddle_json.display()))?;
    if !doc.verified_index1 {
        bail!(
            "saddle in {} is not verified index-1; refusing to reconstruct a path",
            saddle_json.display()
        );
    }
    let base = saddle_json.parent().unwrap_or(Path::new("."));
    let position = problem.read_state(&base.join(&doc.position_file))?;
    let mode = problem.read_state(&base.join(&doc.mode_file))?;
    let saddle = SaddleResult {
        status: RunStatus::Converged,
        energy: doc.energy,
        residual_e1: doc.e1,
        cycles_used: doc.cycles,
        verified_index1: doc.verified_index1,
        mode_curvature: doc.mode_curvature,
        unstable_mode: mode
            .normalized()
            .context("stored mode must be nonzero")?,
        position,
        trace: Vec::new(),
    };

    let precond = problem.preconditioner(cfg.precondition);
    let path = reconstruct_mep_preconditioned(
        problem.pes(),
        &saddle,
        cfg.mep_delta,
        &cfg.mep_descent,
        precond.as_ref(),
    )?;

    // Energy profile over arclength, maximum at the saddle row.
    let mut profile = std::io::BufWriter::new(fs::File::create(cfg.out_dir.join("profile.csv"))?);
    use std::io::Write;
    writeln!(profile, "arclength,energy")?;
    let mut arclength = 0.0;
    let mut previous: Option<&StateVector<f64>> = None;
    for p in &path.points {
        if let Some(prev) = previous {
            arclength += prev.distance(p);
        }
        writeln!(profile, "{},{}", arclength, problem.pes().energy(p)?)?;
        previous = Some(p);
    }
    drop(profile);

    match &problem {
        Problem::V1(_) | Problem::V2(_) => {
            let mut w = std::io::BufWriter::new(fs::File::create(cfg.out_dir.join("path.csv"))?);
            writeln!(w, "x1,x2")?;
            for p in &path.points {
                writeln!(w, "{},{}", p[0], p[1])?;
            }
        }
        Problem::Lj(_) | Problem::Lp(_) => {
            let digits = path.points.len().to_string().len().max(3);
            for (i, p) in path.points.iter().enumerate() {
                problem.write_state(&cfg.out_dir, &format!("path_{i:0digits$}"), p)?;
            }
        }
    }

    println!(
        "path: {} points, saddle row {}, endpoints E = {} and {}",
        path.points.len(),
        path.saddle_index,
        path.minimum_a.energy,
        path.minimum_b.energy
    );
    Ok(0)
}

/// Runs all three walkers from the same start and writes a side-by-side CSV.
pub fn cmd_compare(cfg: &RunConfig) -> Result<u8> {
    ensure_out_dir(cfg)?;
    let problem = Problem::build(cfg);
    let initial = build_initial(&problem, cfg)?;
    let known = known_saddle_vec(cfg);

    let mut rows = Vec::new();
    for method in [MethodKind::Spm, MethodKind::Dimer, MethodKind::Gad] {
        let mut sub = cfg.clone();
        sub.method = method;
        let result = execute_method(&problem, &sub, &initial.pair, &initial.direction)?;
        write_run_outputs(&problem, cfg, &result, method_name(method))?;

        let positions: Vec<StateVector<f64>> = result
            .trace
            .iter()
            .filter_map(|c| c.positions.as_ref())
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        let max_energy = if positions.is_empty() {
            result.energy
        } else {
            path_max_energy(&positions, problem.pes())?.1
        };
        let saddle_distance = known
            .as_ref()
            .map(|s| result.position.distance(s).to_string())
            .unwrap_or_default();
        rows.push(format!(
            "{},{},{},{},{},{},{}",
            method_name(method),
            io::status_str(result.status),
            result.cycles_used,
            result.energy,
            result.residual_e1,
            max_energy,
            saddle_distance
        ));
    }

    let csv_path = cfg.out_dir.join("compare.csv");
    let mut w = std::io::BufWriter::new(fs::File::create(&csv_path)?);
    use std::io::Write;
    writeln!(
        w,
        "method,status,iterations,energy,final_force,max_path_energy,known_saddle_distance"
    )?;
    for row in &rows {
        writeln!(w, "{row}")?;
    }
    println!("wrote {}", csv_path.display());
    Ok(0)
}
