//! Command execution and artifact writing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hyperam_core::activations::{check_b_function, ActivationFn, ActivationKind};
use hyperam_core::algebra::{check_re_ahn, check_reverse_involution, AlgebraSpec, Involution};
use hyperam_core::dynamics::{
    attractor_csv, build_graph, classify, export_dot, labels_of, EdgeSet,
};
use hyperam_core::imaging::{
    recall_csv, recall_experiment, synthetic_images, GrayImage, RecallConfig,
};
use hyperam_core::presets::random_instance;
use hyperam_core::rcnn::{energy_csv, Network, NetworkConfig, RunResult, RunStatus, UpdateMode};

use crate::error::{CliError, Result};
use crate::experiment::{
    Body, DynamicsSource, DynamicsSpec, EnergySource, EnergySpec, Experiment, ImageSource,
    RecallSpec, VerifySpec,
};

/// Energy steps may rise by at most this much before counting as an increase.
pub const ENERGY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    /// False when an asserted property failed.
    pub passed: bool,
    /// Human-readable summary.
    pub report: String,
    pub artifacts: Vec<PathBuf>,
}

struct Writer<'a> {
    dir: &'a Path,
    artifacts: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, file: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(file);
        std::fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.artifacts.push(path);
        Ok(())
    }
}

/// Runs `exp`, writing artifacts into `out` (created if missing).
pub fn execute(exp: &Experiment, out: &Path) -> Result<Outcome> {
    std::fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let mut w = Writer {
        dir: out,
        artifacts: Vec::new(),
    };
    let (passed, report) = match &exp.body {
        Body::Dynamics(spec) => dynamics(exp, spec, &mut w)?,
        Body::EnergyTrace(spec) => energy_trace(exp, spec, &mut w)?,
        Body::ImageRecall(spec) => image_recall(exp, spec, &mut w)?,
        Body::Verify(spec) => {
            let (passed, report) = verify(exp.seed, spec)?;
            w.write(&format!("{}_report.txt", exp.name), &report)?;
            (passed, report)
        }
    };
    Ok(Outcome {
        passed,
        report,
        artifacts: w.artifacts,
    })
}

/// Resolved settings followed by the original config file.
fn meta(exp: &Experiment, network: Option<&NetworkConfig<f64>>, extra: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command = {}", exp.command);
    let _ = writeln!(s, "name = {}", exp.name);
    let _ = writeln!(s, "seed = {}", exp.seed);
    s.push_str(extra);
    if let Some(cfg) = network {
        s.push_str("\n[resolved network]\n");
        s.push_str(&cfg.describe());
    }
    s.push_str("\n[config file]\n");
    s.push_str(&exp.source);
    if !exp.source.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn dynamics(exp: &Experiment, spec: &DynamicsSpec, w: &mut Writer) -> Result<(bool, String)> {
    let nets: Vec<(String, String, Network<f64>)> = match &spec.source {
        DynamicsSource::Preset { example, readings } => readings
            .iter()
            .map(|&r| {
                let (alpha, beta) = example.parameters(r);
                let extra = format!(
                    "preset = {example}\nreading = {}\nalpha = {alpha}\nbeta = {beta}\n",
                    r.name()
                );
                (
                    format!("{}_{}", exp.name, r.name()),
                    extra,
                    example.network::<f64>(r),
                )
            })
            .collect(),
        DynamicsSource::Custom { config, memories } => vec![(
            exp.name.clone(),
            String::new(),
            Network::new(config.clone(), memories.clone())?,
        )],
    };
    let mut report = String::new();
    for (label, extra, net) in nets {
        let graph = build_graph(&net)?;
        let classes = classify(&graph);
        let echo = meta(exp, Some(net.config()), &extra);
        for edges in [EdgeSet::Sync, EdgeSet::Async] {
            let dot = export_dot(&graph, edges, None, &echo);
            w.write(&format!("{label}_{}.dot", edges.label()), &dot)?;
        }
        w.write(&format!("{label}_attractors.csv"), &attractor_csv(&classes))?;
        w.write(&format!("{label}.meta.txt"), &echo)?;
        let cycles = |c: &[Vec<usize>]| c.iter().map(|v| labels_of(v)).collect::<Vec<_>>();
        let _ = writeln!(
            report,
            "{label}: {} states, memories {:?}, fixed points {:?}, spurious {:?}, sync cycles {:?}, async cycles {:?}",
            graph.len(),
            labels_of(&graph.memory_indices),
            labels_of(&classes.fixed_points),
            labels_of(&classes.spurious),
            cycles(&classes.sync_cycles),
            cycles(&classes.async_cycles),
        );
    }
    Ok((true, report))
}

fn energy_trace(exp: &Experiment, spec: &EnergySpec, w: &mut Writer) -> Result<(bool, String)> {
    let base = match &spec.source {
        EnergySource::Preset(p) => p.config::<f64>(spec.n, spec.a)?,
        EnergySource::Custom(cfg) => cfg.clone(),
    };
    let mut base = base.with_max_sweeps(spec.max_sweeps);
    if let Some(t) = spec.change_tol {
        base = base.with_change_tol(t);
    }
    let mut summary = String::from(
        "seed,mode,status,sweeps_used,equilibrium_time,initial_energy,final_energy,energy_decreasing\n",
    );
    let mut converged = 0;
    let mut monotone = 0;
    let mut runs_total = 0;
    let mut async_earlier = 0;
    let mut compared = 0;
    for &seed in &spec.seeds {
        let (memories, x0) = random_instance(&base, spec.n, spec.p, seed)?;
        let mut runs: Vec<(UpdateMode, RunResult<f64>)> = Vec::new();
        for &mode in &spec.modes {
            let net = Network::new(base.clone().with_mode(mode), memories.clone())?;
            runs.push((mode, net.run(&x0)?));
        }
        for (mode, r) in &runs {
            runs_total += 1;
            converged += usize::from(r.status == RunStatus::Converged);
            let dec = r.energy_decreasing(ENERGY_TOL);
            monotone += usize::from(dec);
            let first = r.energy_trace.first().map_or(f64::NAN, |p| p.1);
            let last = r.energy_trace.last().map_or(f64::NAN, |p| p.1);
            let _ = writeln!(
                summary,
                "{seed},{mode},{},{},{},{first},{last},{dec}",
                r.status, r.sweeps_used, r.equilibrium_time
            );
        }
        let time = |m| {
            runs.iter()
                .find(|(k, _)| *k == m)
                .map(|(_, r)| r.equilibrium_time)
        };
        if let (Some(s), Some(a)) = (
            time(UpdateMode::Synchronous),
            time(UpdateMode::Asynchronous),
        ) {
            compared += 1;
            async_earlier += usize::from(a < s);
        }
        let pairs: Vec<_> = runs.iter().map(|(m, r)| (*m, r)).collect();
        w.write(&format!("{}_seed{seed}.csv", exp.name), &energy_csv(&pairs))?;
    }
    w.write(&format!("{}_summary.csv", exp.name), &summary)?;
    let extra = format!(
        "n = {}\np = {}\na = {}\nseeds = {:?}\nmodes = {:?}\n",
        spec.n,
        spec.p,
        spec.a,
        spec.seeds,
        spec.modes.iter().map(|m| m.label()).collect::<Vec<_>>()
    );
    w.write(
        &format!("{}.meta.txt", exp.name),
        &meta(exp, Some(&base), &extra),
    )?;

    let mut report = format!(
        "{}: {converged}/{runs_total} runs converged, {monotone}/{runs_total} with decreasing energy",
        exp.name
    );
    if compared > 0 {
        let _ = write!(
            report,
            ", async settled earlier in {async_earlier}/{compared} seeds"
        );
    }
    report.push('\n');
    let passed = match spec.expected_convergent() {
        Some(true) => converged == runs_total && monotone == runs_total,
        _ => true,
    };
    Ok((passed, report))
}

fn load_images(spec: &RecallSpec, seed: u64) -> Result<Vec<GrayImage>> {
    match &spec.source {
        ImageSource::Synthetic {
            count,
            width,
            height,
        } => Ok(synthetic_images(*count, *width, *height, seed)?),
        ImageSource::Directory(dir) => {
            let io = |source| CliError::Io {
                path: dir.clone(),
                source,
            };
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
                .map_err(io)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
                .collect();
            paths.sort();
            if paths.is_empty() {
                return Err(CliError::Config(format!(
                    "no .pgm files in {}",
                    dir.display()
                )));
            }
            paths.iter().map(|p| Ok(GrayImage::read_pgm(p)?)).collect()
        }
    }
}

fn image_recall(exp: &Experiment, spec: &RecallSpec, w: &mut Writer) -> Result<(bool, String)> {
    let images = load_images(spec, exp.seed)?;
    let mut rows = Vec::new();
    for &codec in &spec.codecs {
        let cfg = RecallConfig {
            codec,
            a: spec.a,
            modes: spec.modes.clone(),
            noise_levels: spec.noise.clone(),
            trials: spec.trials,
            seed: exp.seed,
            max_sweeps: spec.max_sweeps,
        };
        rows.extend(recall_experiment::<f64>(&cfg, &images)?);
    }
    w.write(&format!("{}.csv", exp.name), &recall_csv(&rows))?;
    let extra = format!(
        "images = {}\ncodecs = {:?}\nnoise = {:?}\ntrials = {}\na = {}\nmax_sweeps = {}\n",
        images.len(),
        spec.codecs.iter().map(|c| c.name()).collect::<Vec<_>>(),
        spec.noise,
        spec.trials,
        spec.a,
        spec.max_sweeps
    );
    w.write(&format!("{}.meta.txt", exp.name), &meta(exp, None, &extra))?;
    let mut report = String::new();
    for r in &rows {
        let _ = writeln!(
            report,
            "{} {} noise {}: {}/{}",
            r.codec, r.mode, r.noise_stdev, r.successes, r.trials
        );
    }
    Ok((true, report))
}

/// A named property check and whether it is expected to hold.
pub struct Check {
    pub name: &'static str,
    pub expect_pass: bool,
    run: fn(usize, u64) -> Result<(bool, String)>,
}

fn involution_check(
    spec: AlgebraSpec<f64>,
    inv: Involution,
    n: usize,
    seed: u64,
) -> (bool, String) {
    let r = check_reverse_involution(&spec, inv, n, seed);
    (
        r.holds(1e-10),
        format!(
            "max deviations: involution {:.2e}, anti-homomorphism {:.2e}, linearity {:.2e}",
            r.max_involution, r.max_anti_homomorphism, r.max_linearity
        ),
    )
}

fn re_ahn(spec: AlgebraSpec<f64>, n: usize, seed: u64) -> (bool, String) {
    let r = check_re_ahn(&spec, Involution::Natural, n, seed);
    (
        r.max_violation <= 1e-10,
        format!("max violation {:.2e}", r.max_violation),
    )
}

fn b_check(
    kind: ActivationKind,
    spec: AlgebraSpec<f64>,
    n: usize,
    seed: u64,
) -> Result<(bool, String)> {
    let phi = ActivationFn::new(kind)?;
    let r = check_b_function(&phi, &spec, Involution::Natural, n, seed)?;
    let detail = match &r.counterexample {
        None => format!("{} samples, worst margin {:.3e}", r.samples, r.worst_margin),
        Some(c) => format!(
            "counterexample q = {}, phi(q) = {}, rival = {}, margin {:.3e}",
            c.q, c.image, c.rival, c.margin
        ),
    };
    Ok((r.passed(), detail))
}

macro_rules! b_check {
    ($name:literal, $pass:expr, $kind:expr, $alg:ident) => {
        Check {
            name: $name,
            expect_pass: $pass,
            run: |n, s| b_check($kind, AlgebraSpec::$alg(), n, s),
        }
    };
}

macro_rules! simple_check {
    ($name:literal, $body:expr) => {
        Check {
            name: $name,
            expect_pass: true,
            run: |n, s| Ok($body(n, s)),
        }
    };
}

pub fn checks() -> Vec<Check> {
    use ActivationKind as K;
    vec![
        simple_check!("involution_reals", |n, s| involution_check(
            AlgebraSpec::reals(),
            Involution::Trivial,
            n,
            s
        )),
        simple_check!("involution_complex", |n, s| involution_check(
            AlgebraSpec::complex(),
            Involution::Natural,
            n,
            s
        )),
        simple_check!("involution_hyperbolic", |n, s| involution_check(
            AlgebraSpec::hyperbolic(),
            Involution::Natural,
            n,
            s
        )),
        simple_check!("involution_quaternion", |n, s| involution_check(
            AlgebraSpec::quaternion(),
            Involution::Natural,
            n,
            s
        )),
        simple_check!("involution_tessarine", |n, s| involution_check(
            AlgebraSpec::tessarine(),
            Involution::Trivial,
            n,
            s
        )),
        simple_check!("involution_octonion", |n, s| involution_check(
            AlgebraSpec::octonion(),
            Involution::Natural,
            n,
            s
        )),
        simple_check!("re_ahn_complex", |n, s| re_ahn(
            AlgebraSpec::complex(),
            n,
            s
        )),
        simple_check!("re_ahn_quaternion", |n, s| re_ahn(
            AlgebraSpec::quaternion(),
            n,
            s
        )),
        simple_check!("re_ahn_octonion", |n, s| re_ahn(
            AlgebraSpec::octonion(),
            n,
            s
        )),
        simple_check!("cayley_dickson_tables", |_, _| {
            let q = AlgebraSpec::<f64>::complex().cayley_dickson_double();
            let o = q.as_ref().ok().and_then(|q| q.cayley_dickson_double().ok());
            let ok = q.is_ok_and(|q| q.table() == AlgebraSpec::<f64>::quaternion().table())
                && o.is_some_and(|o| o.table() == AlgebraSpec::<f64>::octonion().table());
            (
                ok,
                "doubled complex and quaternion tables against the built-in ones".to_string(),
            )
        }),
        Check {
            name: "involution_tessarine_natural",
            expect_pass: false,
            run: |n, s| {
                Ok(involution_check(
                    AlgebraSpec::tessarine(),
                    Involution::Natural,
                    n,
                    s,
                ))
            },
        },
        b_check!("b_bipolar_reals", true, K::BipolarSign, reals),
        b_check!("b_csgn8_complex", true, K::Csgn { k: 8 }, complex),
        b_check!("b_csgn256_complex", true, K::Csgn { k: 256 }, complex),
        b_check!(
            "b_csgn_conjugated4_hyperbolic",
            true,
            K::CsgnConjugated { k: 4 },
            hyperbolic
        ),
        b_check!(
            "b_twin4_quaternion",
            true,
            K::TwinMultistate { k: 4 },
            quaternion
        ),
        b_check!(
            "b_twin16_quaternion",
            true,
            K::TwinMultistate { k: 16 },
            quaternion
        ),
        b_check!("b_sigma_complex", true, K::ContinuousSigma, complex),
        b_check!("b_sigma_quaternion", true, K::ContinuousSigma, quaternion),
        b_check!("b_sigma_octonion", true, K::ContinuousSigma, octonion),
        b_check!("b_split_octonion", true, K::SplitSign, octonion),
        b_check!("b_csgn4_hyperbolic", false, K::Csgn { k: 4 }, hyperbolic),
        b_check!("b_sigma_hyperbolic", false, K::ContinuousSigma, hyperbolic),
    ]
}

/// Runs the selected checks (all when `spec.checks` is empty). Passes when
/// every check matches its expectation.
pub fn verify(seed: u64, spec: &VerifySpec) -> Result<(bool, String)> {
    let all = checks();
    if let Some(bad) = spec
        .checks
        .iter()
        .find(|c| !all.iter().any(|k| k.name == c.as_str()))
    {
        return Err(CliError::Usage(format!("unknown check `{bad}`")));
    }
    let mut report = String::new();
    let mut ok = true;
    for check in all
        .iter()
        .filter(|c| spec.checks.is_empty() || spec.checks.iter().any(|s| s == c.name))
    {
        let (held, detail) = (check.run)(spec.samples, seed)?;
        let tag = match (check.expect_pass, held) {
            (true, true) => "PASS",
            (true, false) => "FAIL",
            (false, false) => "XFAIL",
            (false, true) => "XPASS",
        };
        ok &= held == check.expect_pass;
        let _ = writeln!(report, "{tag} {}: {detail}", check.name);
    }
    let _ = writeln!(
        report,
        "{}",
        if ok { "verify: ok" } else { "verify: FAILED" }
    );
    Ok((ok, report))
}
