//! Run configuration: a flat key-value text format with `[section]` headers,
//! preset defaults, and validation against the selected problem and method.
//!
//! Grammar (UTF-8):
//!
//! ```text
//! # comment                 comments and blank lines are ignored
//! [section]                 section header
//! key = value               entries belong to the last opened section
//! ```
//!
//! Recognized sections: `[problem]`, `[method]`, `[spm]`, `[baseline]`,
//! `[initial]`, `[landscape]`, `[mep]`, `[run]`, `[output]`. Unknown keys are
//! errors, reported with the offending line.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use spm_core::baselines::BaselineParams;
use spm_core::landscape::{DescentParams, EnumerationParams, SearchParams};
use spm_core::SpmConfig;

#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: {}", self.path, self.line, self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(path: &str, line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

/// A parsed config file: `(section, key) -> (value, line)`.
#[derive(Debug)]
pub struct RawConfig {
    path: String,
    entries: HashMap<(String, String), (String, usize)>,
}

impl RawConfig {
    pub fn parse_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(&path.display().to_string(), 0, format!("cannot read: {e}")))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        let mut entries = HashMap::new();
        let mut section = String::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(path, line_no, "unterminated section header"))?;
                section = name.trim().to_string();
                if section.is_empty() {
                    return Err(err(path, line_no, "empty section name"));
                }
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(path, line_no, format!("expected `key = value`, got {line:?}")));
            };
            if section.is_empty() {
                return Err(err(path, line_no, "entry before any [section] header"));
            }
            entries.insert(
                (section.clone(), key.trim().to_string()),
                (value.trim().to_string(), line_no),
            );
        }
        Ok(Self {
            path: path.to_string(),
            entries,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    V1,
    V2,
    Lj,
    Lp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodKind {
    Spm,
    Dimer,
    Gad,
}

/// How the initial state is produced.
#[derive(Clone, Debug)]
pub enum InitialSpec {
    /// Explicit 2D start plus an inline perturbation direction.
    Point {
        start: [f64; 2],
        relax_start: bool,
        direction: [f64; 2],
        size: f64,
    },
    /// Cluster start (builtin structure or XYZ file), relaxed on request,
    /// perturbed along a seeded random unit direction.
    Cluster {
        structure: ClusterStart,
        relax_start: bool,
        direction_seed: u64,
        size: f64,
    },
    /// Field start: a background plus a localized seed patch; the pair is
    /// separated by `size` along the patch direction.
    Field {
        background: FieldBackground,
        seed_kind: FieldSeed,
        sigma_frac: f64,
        peak: f64,
        size: f64,
    },
}

#[derive(Clone, Debug)]
pub enum ClusterStart {
    PentagonalBipyramid,
    XyzFile(PathBuf),
}

#[derive(Clone, Debug)]
pub enum FieldBackground {
    Zero,
    RelaxedQuasicrystal { amplitude: f64 },
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub enum FieldSeed {
    TwelveBeamDroplet,
    Stripes,
    Random { seed: u64, k_cut: f64 },
}

/// Lifshitz-Petrich problem parameters.
#[derive(Clone, Debug)]
pub struct LpParams {
    pub grid_size: usize,
    pub domain_length: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub q1: f64,
    pub q2: f64,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub method: MethodKind,
    pub lj_particles: usize,
    pub lp: LpParams,
    pub spm: SpmConfig<f64>,
    /// Apply the spectral metric preconditioner (field problems).
    pub precondition: bool,
    pub baseline: BaselineParams<f64>,
    pub dimer_half_length: f64,
    pub initial: InitialSpec,
    pub known_saddle: Option<Vec<f64>>,
    pub enumeration: EnumerationParams<f64>,
    pub mep_delta: f64,
    pub mep_descent: DescentParams<f64>,
    pub out_dir: PathBuf,
}

pub fn q2_dodecagonal() -> f64 {
    2.0 * (std::f64::consts::PI / 12.0).cos()
}

impl RunConfig {
    /// The v1 reference configuration.
    pub fn preset_v1() -> Self {
        Self {
            problem: ProblemKind::V1,
            method: MethodKind::Spm,
            lj_particles: 7,
            lp: Self::lp_defaults(),
            spm: SpmConfig::default(),
            precondition: false,
            baseline: BaselineParams::default(),
            dimer_half_length: 5e-3,
            initial: InitialSpec::Point {
                start: [0.0, -1.0],
                relax_start: false,
                direction: [0.4, 1.0],
                size: 0.3,
            },
            known_saddle: Some(vec![1.0, 0.0]),
            enumeration: EnumerationParams {
                search: SearchParams {
                    n_trials: 12,
                    perturbation_size: 0.3,
                    seed: 7,
                    ..SearchParams::default()
                },
                descent: DescentParams {
                    step: 1e-2,
                    force_tol: 1e-9,
                    record_every: 5,
                    ..DescentParams::default()
                },
                mep_delta: 0.1,
                max_minima: 8,
            },
            mep_delta: 0.1,
            mep_descent: DescentParams {
                step: 1e-2,
                force_tol: 1e-9,
                record_every: 5,
                ..DescentParams::default()
            },
            out_dir: PathBuf::from("out"),
        }
    }

    pub fn preset_v2() -> Self {
        let mut cfg = Self::preset_v1();
        cfg.problem = ProblemKind::V2;
        cfg.initial = InitialSpec::Point {
            start: [3.0, 0.0],
            relax_start: true,
            direction: [1.0, 1.0],
            size: 0.5,
        };
        cfg.known_saddle = Some(vec![0.0, 0.0]);
        cfg.mep_descent.step = 5e-3;
        cfg
    }

    pub fn preset_lj7() -> Self {
        let mut cfg = Self::preset_v1();
        cfg.problem = ProblemKind::Lj;
        cfg.lj_particles = 7;
        cfg.spm = SpmConfig {
            natural_length: 5e-2,
            alpha1: 5e-3,
            alpha2: 0.25,
            alpha3: 5e-3,
            eps1: 1e-2,
            eps2: 1e-6,
            max_drift_steps: 200,
            max_cycles: 50_000,
            record_positions: false,
            ..SpmConfig::default()
        };
        cfg.initial = InitialSpec::Cluster {
            structure: ClusterStart::PentagonalBipyramid,
            relax_start: true,
            direction_seed: 1,
            size: 0.4,
        };
        cfg.known_saddle = None;
        cfg.enumeration = EnumerationParams {
            search: SearchParams {
                n_trials: 100,
                perturbation_size: 0.4,
                seed: 2024,
                dedup_by_energy_only: true,
                ..SearchParams::default()
            },
            descent: DescentParams {
                step: 1e-3,
                force_tol: 1e-9,
                record_every: 100,
                ..DescentParams::default()
            },
            mep_delta: 0.1,
            max_minima: 16,
        };
        cfg.mep_delta = 0.1;
        cfg.mep_descent = DescentParams {
            step: 1e-3,
            force_tol: 1e-9,
            record_every: 100,
            ..DescentParams::default()
        };
        cfg
    }

    pub fn preset_lp_dis_ddqc() -> Self {
        let mut cfg = Self::preset_v1();
        cfg.problem = ProblemKind::Lp;
        cfg.lp = Self::lp_defaults();
        cfg.spm = SpmConfig {
            natural_length: 0.5,
            alpha1: 0.1,
            alpha2: 0.25,
            alpha3: 0.1,
            eps1: 0.5,
            eps2: 1e-6,
            max_drift_steps: 200,
            max_cycles: 20_000,
            curvature_step: 1e-2,
            record_positions: false,
            ..SpmConfig::default()
        };
        cfg.precondition = true;
        cfg.initial = InitialSpec::Field {
            background: FieldBackground::Zero,
            seed_kind: FieldSeed::TwelveBeamDroplet,
            sigma_frac: 0.12,
            peak: 1.0,
            size: 0.5,
        };
        cfg.known_saddle = None;
        cfg.mep_descent = DescentParams {
            step: 0.1,
            force_tol: 2e-6,
            max_iters: 200_000,
            record_every: 200,
        };
        cfg.mep_delta = 1.0;
        cfg
    }

    pub fn preset_lp_ddqc_lq() -> Self {
        let mut cfg = Self::preset_lp_dis_ddqc();
        cfg.lp = LpParams {
            grid_size: 256,
            domain_length: 56.0 * std::f64::consts::PI,
            epsilon: 0.05,
            alpha: 1.0,
            q1: 1.0,
            q2: q2_dodecagonal(),
        };
        cfg.initial = InitialSpec::Field {
            background: FieldBackground::RelaxedQuasicrystal { amplitude: 0.08 },
            seed_kind: FieldSeed::Stripes,
            sigma_frac: 0.1,
            peak: 0.3,
            size: 0.5,
        };
        cfg
    }

    fn lp_defaults() -> LpParams {
        LpParams {
            grid_size: 256,
            domain_length: 60.0 * std::f64::consts::PI,
            epsilon: -0.01,
            alpha: 1.0,
            q1: 1.0,
            q2: q2_dodecagonal(),
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "v1" => Some(Self::preset_v1()),
            "v2" => Some(Self::preset_v2()),
            "lj7" => Some(Self::preset_lj7()),
            "lp-dis-ddqc" => Some(Self::preset_lp_dis_ddqc()),
            "lp-ddqc-lq" => Some(Self::preset_lp_ddqc_lq()),
            _ => None,
        }
    }

    /// Scales field presets up to the full published resolution.
    pub fn apply_full_resolution(&mut self) {
        if self.problem == ProblemKind::Lp {
            if (self.lp.epsilon + 0.01).abs() < 1e-12 {
                self.lp.grid_size = 512;
            } else {
                self.lp.grid_size = 1024;
                self.lp.domain_length = 224.0 * std::f64::consts::PI;
            }
        }
    }

    /// Overlays a parsed config file onto this configuration, consuming every
    /// entry; leftover keys are errors.
    pub fn apply(&mut self, raw: &RawConfig) -> Result<(), ConfigError> {
        let mut unused: HashMap<&(String, String), usize> = raw
            .entries
            .iter()
            .map(|(k, (_, line))| (k, *line))
            .collect();
        let path = raw.path.clone();

        macro_rules! take {
            ($section:literal, $key:literal, $parse:expr) => {{
                let lookup = ($section.to_string(), $key.to_string());
                match raw.entries.get(&lookup) {
                    Some((value, line)) => {
                        unused.remove(&lookup);
                        let parsed = $parse(value.as_str()).map_err(|m: String| {
                            err(&path, *line, format!("{}.{}: {}", $section, $key, m))
                        })?;
                        Some(parsed)
                    }
                    None => None,
                }
            }};
        }

        let parse_f64 = |v: &str| -> Result<f64, String> {
            v.parse().map_err(|_| format!("expected a number, got {v:?}"))
        };
        let parse_usize = |v: &str| -> Result<usize, String> {
            v.parse().map_err(|_| format!("expected an integer, got {v:?}"))
        };
        let parse_u64 = |v: &str| -> Result<u64, String> {
            v.parse().map_err(|_| format!("expected an integer, got {v:?}"))
        };
        let parse_bool = |v: &str| -> Result<bool, String> {
            match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(format!("expected true/false, got {v:?}")),
            }
        };
        let parse_pair = |v: &str| -> Result<[f64; 2], String> {
            let parts: Vec<&str> = v.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(format!("expected `x,y`, got {v:?}"));
            }
            Ok([
                parts[0].parse().map_err(|_| format!("bad number {:?}", parts[0]))?,
                parts[1].parse().map_err(|_| format!("bad number {:?}", parts[1]))?,
            ])
        };
        let parse_vec = |v: &str| -> Result<Vec<f64>, String> {
            v.split(',')
                .map(|p| p.trim().parse().map_err(|_| format!("bad number {p:?}")))
                .collect()
        };

        if let Some(kind) = take!("problem", "kind", |v: &str| match v {
            "v1" => Ok(ProblemKind::V1),
            "v2" => Ok(ProblemKind::V2),
            "lj" => Ok(ProblemKind::Lj),
            "lp" => Ok(ProblemKind::Lp),
            _ => Err(format!("unknown problem kind {v:?} (v1|v2|lj|lp)")),
        }) {
            self.problem = kind;
        }
        if let Some(n) = take!("problem", "n", parse_usize) {
            self.lj_particles = n;
        }
        if let Some(v) = take!("problem", "grid_size", parse_usize) {
            self.lp.grid_size = v;
        }
        if let Some(v) = take!("problem", "domain_length", parse_f64) {
            self.lp.domain_length = v;
        }
        if let Some(v) = take!("problem", "epsilon", parse_f64) {
            self.lp.epsilon = v;
        }
        if let Some(v) = take!("problem", "alpha", parse_f64) {
            self.lp.alpha = v;
        }
        if let Some(v) = take!("problem", "q1", parse_f64) {
            self.lp.q1 = v;
        }
        if let Some(v) = take!("problem", "q2", parse_f64) {
            self.lp.q2 = v;
        }

        if let Some(kind) = take!("method", "kind", |v: &str| match v {
            "spm" => Ok(MethodKind::Spm),
            "dimer" => Ok(MethodKind::Dimer),
            "gad" => Ok(MethodKind::Gad),
            _ => Err(format!("unknown method kind {v:?} (spm|dimer|gad)")),
        }) {
            self.method = kind;
        }

        if let Some(v) = take!("spm", "l_s", parse_f64) {
            self.spm.natural_length = v;
        }
        if let Some(v) = take!("spm", "alpha1", parse_f64) {
            self.spm.alpha1 = v;
        }
        if let Some(v) = take!("spm", "alpha2", parse_f64) {
            self.spm.alpha2 = v;
        }
        if let Some(v) = take!("spm", "alpha3", parse_f64) {
            self.spm.alpha3 = v;
        }
        if let Some(v) = take!("spm", "eps1", parse_f64) {
            self.spm.eps1 = v;
        }
        if let Some(v) = take!("spm", "eps2", parse_f64) {
            self.spm.eps2 = v;
        }
        if let Some(v) = take!("spm", "max_drift_steps", parse_usize) {
            self.spm.max_drift_steps = v;
        }
        if let Some(v) = take!("spm", "max_cycles", parse_usize) {
            self.spm.max_cycles = v;
        }
        if let Some(v) = take!("spm", "climb_steps", parse_usize) {
            self.spm.climb_steps_per_cycle = v;
        }
        if let Some(v) = take!("spm", "curvature_step", parse_f64) {
            self.spm.curvature_step = v;
        }
        if let Some(v) = take!("spm", "seed", parse_u64) {
            self.spm.reperturb_seed = v;
        }
        if let Some(v) = take!("spm", "record_positions", parse_bool) {
            self.spm.record_positions = v;
        }
        if let Some(v) = take!("spm", "precondition", parse_bool) {
            self.precondition = v;
        }

        if let Some(v) = take!("baseline", "step", parse_f64) {
            self.baseline.step = v;
        }
        if let Some(v) = take!("baseline", "max_displacement", parse_f64) {
            self.baseline.max_displacement = v;
        }
        if let Some(v) = take!("baseline", "force_tol", parse_f64) {
            self.baseline.force_tol = v;
        }
        if let Some(v) = take!("baseline", "max_steps", parse_usize) {
            self.baseline.max_steps = v;
        }
        if let Some(v) = take!("baseline", "rotations_per_step", parse_usize) {
            self.baseline.rotations_per_step = v;
        }
        if let Some(v) = take!("baseline", "rotation_tol", parse_f64) {
            self.baseline.rotation_tol = v;
        }
        if let Some(v) = take!("baseline", "mode_relax", parse_f64) {
            self.baseline.mode_relax = v;
        }
        if let Some(v) = take!("baseline", "mode_fd_step", parse_f64) {
            self.baseline.mode_fd_step = v;
        }
        if let Some(v) = take!("baseline", "stagnation_window", parse_usize) {
            self.baseline.stagnation_window = v;
        }
        if let Some(v) = take!("baseline", "stagnation_rtol", parse_f64) {
            self.baseline.stagnation_rtol = v;
        }
        if let Some(v) = take!("baseline", "half_length", parse_f64) {
            self.dimer_half_length = v;
        }

        // Initial-condition block: interpreted against the problem kind.
        let start = take!("initial", "start", parse_pair);
        let relax_start = take!("initial", "relax_start", parse_bool);
        let direction = take!("initial", "direction", parse_pair);
        let size = take!("initial", "size", parse_f64);
        let structure = take!("initial", "structure", |v: &str| match v {
            "pentagonal_bipyramid" => Ok(ClusterStart::PentagonalBipyramid),
            _ => Err(format!("unknown structure {v:?}")),
        });
        let start_xyz = take!("initial", "start_xyz", |v: &str| Ok::<_, String>(
            PathBuf::from(v)
        ));
        let direction_seed = take!("initial", "direction_seed", parse_u64);
        let seed_kind = take!("initial", "seed_kind", |v: &str| match v {
            "twelve-beam-droplet" => Ok("twelve-beam-droplet"),
            "stripes" => Ok("stripes"),
            "random" => Ok("random"),
            _ => Err(format!("unknown seed kind {v:?}")),
        });
        let sigma_frac = take!("initial", "sigma_frac", parse_f64);
        let peak = take!("initial", "peak", parse_f64);
        let random_seed = take!("initial", "random_seed", parse_u64);
        let k_cut = take!("initial", "k_cut", parse_f64);
        let background = take!("initial", "background", |v: &str| match v {
            "zero" => Ok("zero"),
            "relaxed-quasicrystal" => Ok("relaxed-quasicrystal"),
            _ => Err(format!("unknown background {v:?} (zero|relaxed-quasicrystal)")),
        });
        let background_amplitude = take!("initial", "background_amplitude", parse_f64);
        let background_field = take!("initial", "background_field", |v: &str| Ok::<_, String>(
            PathBuf::from(v)
        ));

        match self.problem {
            ProblemKind::V1 | ProblemKind::V2 => {
                if let InitialSpec::Point {
                    start: s,
                    relax_start: r,
                    direction: d,
                    size: sz,
                } = &mut self.initial
                {
                    if let Some(v) = start {
                        *s = v;
                    }
                    if let Some(v) = relax_start {
                        *r = v;
                    }
                    if let Some(v) = direction {
                        *d = v;
                    }
                    if let Some(v) = size {
                        *sz = v;
                    }
                } else {
                    self.initial = InitialSpec::Point {
                        start: start.unwrap_or([0.0, -1.0]),
                        relax_start: relax_start.unwrap_or(false),
                        direction: direction.unwrap_or([0.4, 1.0]),
                        size: size.unwrap_or(0.3),
                    };
                }
            }
            ProblemKind::Lj => {
                let mut spec = match &self.initial {
                    InitialSpec::Cluster {
                        structure,
                        relax_start,
                        direction_seed,
                        size,
                    } => InitialSpec::Cluster {
                        structure: structure.clone(),
                        relax_start: *relax_start,
                        direction_seed: *direction_seed,
                        size: *size,
                    },
                    _ => InitialSpec::Cluster {
                        structure: ClusterStart::PentagonalBipyramid,
                        relax_start: true,
                        direction_seed: 1,
                        size: 0.4,
                    },
                };
                if let InitialSpec::Cluster {
                    structure: st,
                    relax_start: r,
                    direction_seed: ds,
                    size: sz,
                } = &mut spec
                {
                    if let Some(v) = structure {
                        *st = v;
                    }
                    if let Some(v) = start_xyz {
                        *st = ClusterStart::XyzFile(v);
                    }
                    if let Some(v) = relax_start {
                        *r = v;
                    }
                    if let Some(v) = direction_seed {
                        *ds = v;
                    }
                    if let Some(v) = size {
                        *sz = v;
                    }
                }
                self.initial = spec;
            }
            ProblemKind::Lp => {
                let mut spec = match &self.initial {
                    InitialSpec::Field { .. } => self.initial.clone(),
                    _ => InitialSpec::Field {
                        background: FieldBackground::Zero,
                        seed_kind: FieldSeed::TwelveBeamDroplet,
                        sigma_frac: 0.12,
                        peak: 1.0,
                        size: 0.5,
                    },
                };
                if let InitialSpec::Field {
                    background: bg,
                    seed_kind: sk,
                    sigma_frac: sf,
                    peak: pk,
                    size: sz,
                } = &mut spec
                {
                    match background {
                        Some("zero") => *bg = FieldBackground::Zero,
                        Some("relaxed-quasicrystal") => {
                            *bg = FieldBackground::RelaxedQuasicrystal {
                                amplitude: background_amplitude.unwrap_or(0.08),
                            }
                        }
                        _ => {
                            if let Some(a) = background_amplitude {
                                if let FieldBackground::RelaxedQuasicrystal { amplitude } = bg {
                                    *amplitude = a;
                                }
                            }
                        }
                    }
                    if let Some(p) = background_field {
                        *bg = FieldBackground::File(p);
                    }
                    match seed_kind {
                        Some("twelve-beam-droplet") => *sk = FieldSeed::TwelveBeamDroplet,
                        Some("stripes") => *sk = FieldSeed::Stripes,
                        Some("random") => {
                            *sk = FieldSeed::Random {
                                seed: random_seed.unwrap_or(11),
                                k_cut: k_cut.unwrap_or(2.2),
                            }
                        }
                        _ => {
                            if let FieldSeed::Random { seed, k_cut: kc } = sk {
                                if let Some(v) = random_seed {
                                    *seed = v;
                                }
                                if let Some(v) = k_cut {
                                    *kc = v;
                                }
                            }
                        }
                    }
                    if let Some(v) = sigma_frac {
                        *sf = v;
                    }
                    if let Some(v) = peak {
                        *pk = v;
                    }
                    if let Some(v) = size {
                        *sz = v;
                    }
                }
                self.initial = spec;
            }
        }

        if let Some(v) = take!("run", "known_saddle", parse_vec) {
            self.known_saddle = Some(v);
        }
        if let Some(v) = take!("run", "no_known_saddle", parse_bool) {
            if v {
                self.known_saddle = None;
            }
        }

        if let Some(v) = take!("landscape", "n_trials", parse_usize) {
            self.enumeration.search.n_trials = v;
        }
        if let Some(v) = take!("landscape", "perturbation_size", parse_f64) {
            self.enumeration.search.perturbation_size = v;
        }
        if let Some(v) = take!("landscape", "seed", parse_u64) {
            self.enumeration.search.seed = v;
        }
        if let Some(v) = take!("landscape", "dedup_energy_tol", parse_f64) {
            self.enumeration.search.dedup_energy_tol = v;
        }
        if let Some(v) = take!("landscape", "dedup_position_tol", parse_f64) {
            self.enumeration.search.dedup_position_tol = v;
        }
        if let Some(v) = take!("landscape", "dedup_by_energy_only", parse_bool) {
            self.enumeration.search.dedup_by_energy_only = v;
        }
        if let Some(v) = take!("landscape", "curvature_cutoff", parse_f64) {
            self.enumeration.search.curvature_cutoff = v;
        }
        if let Some(v) = take!("landscape", "mep_delta", parse_f64) {
            self.enumeration.mep_delta = v;
        }
        if let Some(v) = take!("landscape", "max_minima", parse_usize) {
            self.enumeration.max_minima = v;
        }
        if let Some(v) = take!("landscape", "descent_step", parse_f64) {
            self.enumeration.descent.step = v;
        }
        if let Some(v) = take!("landscape", "descent_tol", parse_f64) {
            self.enumeration.descent.force_tol = v;
        }
        if let Some(v) = take!("landscape", "descent_max_iters", parse_usize) {
            self.enumeration.descent.max_iters = v;
        }

        if let Some(v) = take!("mep", "delta", parse_f64) {
            self.mep_delta = v;
        }
        if let Some(v) = take!("mep", "descent_step", parse_f64) {
            self.mep_descent.step = v;
        }
        if let Some(v) = take!("mep", "descent_tol", parse_f64) {
            self.mep_descent.force_tol = v;
        }
        if let Some(v) = take!("mep", "descent_max_iters", parse_usize) {
            self.mep_descent.max_iters = v;
        }
        if let Some(v) = take!("mep", "record_every", parse_usize) {
            self.mep_descent.record_every = v;
        }

        if let Some(v) = take!("output", "dir", |v: &str| Ok::<_, String>(PathBuf::from(v))) {
            self.out_dir = v;
        }

        if let Some((key, line)) = unused.into_iter().next() {
            return Err(err(
                &path,
                line,
                format!("unknown or inapplicable entry `{}.{}`", key.0, key.1),
            ));
        }
        Ok(())
    }

    /// Cross-field validation after preset + file merging.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| err("config", 0, m);
        if self.spm.natural_length <= 0.0
            || self.spm.alpha1 <= 0.0
            || self.spm.alpha2 <= 0.0
            || self.spm.alpha3 <= 0.0
            || self.spm.eps1 <= 0.0
            || self.spm.eps2 <= 0.0
        {
            return Err(fail("spm relaxation constants and thresholds must be > 0".into()));
        }
        if self.spm.max_drift_steps == 0 || self.spm.max_cycles == 0 {
            return Err(fail("spm step and cycle caps must be >= 1".into()));
        }
        match self.problem {
            ProblemKind::Lj => {
                if self.lj_particles < 2 {
                    return Err(fail("lj needs at least 2 particles".into()));
                }
                if !matches!(self.initial, InitialSpec::Cluster { .. }) {
                    return Err(fail("lj runs need a cluster initial block".into()));
                }
            }
            ProblemKind::Lp => {
                if !self.lp.grid_size.is_power_of_two() || self.lp.grid_size < 4 {
                    return Err(fail("lp grid_size must be a power of two >= 4".into()));
                }
                if self.lp.domain_length <= 0.0 || self.lp.q1 <= 0.0 || self.lp.q2 <= 0.0 {
                    return Err(fail("lp domain and length scales must be > 0".into()));
                }
                if !matches!(self.initial, InitialSpec::Field { .. }) {
                    return Err(fail("lp runs need a field initial block".into()));
                }
            }
            ProblemKind::V1 | ProblemKind::V2 => {
                if !matches!(self.initial, InitialSpec::Point { .. }) {
                    return Err(fail("2d runs need a point initial block".into()));
                }
                if let Some(s) = &self.known_saddle {
                    if s.len() != 2 {
                        return Err(fail("known_saddle must have dimension 2".into()));
                    }
                }
            }
        }
        match &self.initial {
            InitialSpec::Point { size, .. }
            | InitialSpec::Cluster { size, .. }
            | InitialSpec::Field { size, .. } => {
                if *size <= 0.0 {
                    return Err(fail("initial perturbation size must be > 0".into()));
                }
            }
        }
        Ok(())
    }
}
