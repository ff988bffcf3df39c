//! `qubitgeo` command-line interface. [`run`] is the whole program; `main`
//! only wires it to the process streams.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qubitgeo_core::{
    apply_sequence, bloch_scene, density_from_statepoint, maximally_entangled, measurement_probs,
    mix, params_from_state, parse_sequence, reduced_state, state_from_params,
    statepoint_from_density, toroid::toroid_scene_with_samples, verify, Angle, BasisAxis,
    BlochPoint, DensityMatrix, GeoError, ParamsOrKnot, Qubit, Surface, ToroidConfig, TwoQubit,
};

use format::{num, tuple};

pub const CONFIG_ENV: &str = "QUBITGEO_CONFIG";
/// Inputs whose norm is further than this from 1 are normalized with a warning.
pub const NORM_WARNING: f64 = 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::VerifyFailed => EXIT_VERIFY_FAILED,
        }
    }
}

impl From<GeoError> for CliError {
    fn from(e: GeoError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qubitgeo", version, about = "Geometry of real one- and two-qubit states")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Everything derived from one two-qubit state.
    Eval(EvalArgs),
    /// (s, θ₁, θ₂) or a knot (surface, ξ) to the state vector.
    Map(MapArgs),
    /// State vector to (s, θ₁, θ₂), or to a knot.
    Invmap(StateArg),
    /// Apply a comma-separated gate sequence, e.g. H1,CNOT12.
    Gate(GateArgs),
    /// Weighted mixture of one-qubit statepoints.
    Mix(MixArgs),
    /// Emit Scene JSON for the toroid or one Bloch Circle.
    Scene(SceneArgs),
    /// Run every property suite on seeded random samples.
    Verify(VerifyArgs),
    /// Start the session service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct StateArg {
    /// Amplitudes α,β,γ,δ of |00⟩,|01⟩,|10⟩,|11⟩.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    pub state: Vec4,
}

#[derive(Debug, Clone, Copy)]
pub struct Vec4(pub [f64; 4]);

fn parse_vector(text: &str) -> Result<Vec4, String> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let v: [f64; 4] = parts
        .as_slice()
        .try_into()
        .map_err(|_| format!("expected 4 comma-separated amplitudes, got {}", parts.len()))?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err("amplitudes must be finite".into());
    }
    Ok(Vec4(v))
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector, conflicts_with_all = ["s", "theta1", "theta2"])]
    pub state: Option<Vec4>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Measurement axis angle for qubit 1.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub basis1: f64,
    /// Measurement axis angle for qubit 2.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub basis2: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SurfaceArg {
    Outer,
    Inner,
}

impl From<SurfaceArg> for Surface {
    fn from(s: SurfaceArg) -> Self {
        match s {
            SurfaceArg::Outer => Surface::Outer,
            SurfaceArg::Inner => Surface::Inner,
        }
    }
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Knot surface; use with --xi instead of --s/--theta1/--theta2.
    #[arg(long, requires = "xi", conflicts_with_all = ["s", "theta1", "theta2"])]
    pub surface: Option<SurfaceArg>,
    #[arg(long, allow_hyphen_values = true, requires = "surface")]
    pub xi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector, default_value = "1,0,0,0")]
    pub state: Vec4,
    /// Gate tokens applied left to right: X1 X2 Z1 Z2 H1 H2 CNOT12 CNOT21 CZ SWAP.
    #[arg(long)]
    pub seq: String,
}

#[derive(Debug, Args)]
pub struct MixArgs {
    /// `r,theta,weight` for one component; repeat for each.
    #[arg(long = "component", required = true, allow_hyphen_values = true, value_parser = parse_component)]
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, Copy)]
pub struct Component {
    pub r: f64,
    pub theta: f64,
    pub weight: f64,
}

fn parse_component(text: &str) -> Result<Component, String> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [r, theta, weight] => Ok(Component { r, theta, weight }),
        _ => Err(format!("expected r,theta,weight, got {} values", parts.len())),
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum View {
    Toroid,
    Bloch1,
    Bloch2,
}

#[derive(Debug, Args)]
pub struct SceneArgs {
    #[arg(long, value_enum, default_value_t = View::Toroid)]
    pub view: View,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector, default_value = "1,0,0,0")]
    pub state: Vec4,
    /// Measurement axis angle for the Bloch views.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub basis: f64,
    /// Points per knot curve.
    #[arg(long, default_value_t = qubitgeo_core::toroid::DEFAULT_KNOT_SAMPLES)]
    pub samples: usize,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
}

/// Parses `argv` (including the program name) and runs it. Returns the exit
/// code; nothing is printed to the process streams directly.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed) {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Eval(a) => eval(a, cli.json, out, err),
        Command::Map(a) => map(a, cli.json, out),
        Command::Invmap(a) => {
            let chi = read_state(a.state, err)?;
            emit(out, cli.json, &Placement::of(&chi))
        }
        Command::Gate(a) => gate(a, cli.json, out, err),
        Command::Mix(a) => mix_cmd(a, cli.json, out),
        Command::Scene(a) => scene(a, out, err),
        Command::Verify(a) => verify_cmd(a, cli.json, out),
        Command::Serve(a) => serve(a, err),
    }
}

/// Text output is `key=value` lines in field order; JSON is the same struct.
trait Report: Serialize {
    fn lines(&self) -> Vec<(&'static str, String)>;
}

fn emit<R: Report>(out: &mut dyn Write, json: bool, report: &R) -> CliResult {
    if json {
        writeln!(out, "{}", format::json(report, false))?;
    } else {
        for (k, v) in report.lines() {
            writeln!(out, "{k}={v}")?;
        }
    }
    Ok(())
}

/// Normalizes hand-typed input, warning when it was noticeably off.
pub fn read_state(v: Vec4, err: &mut dyn Write) -> CliResult<TwoQubit> {
    let norm = v.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < qubitgeo_core::states::ZERO_EPS {
        return Err(CliError::Usage("state vector must be nonzero".into()));
    }
    if (norm - 1.0).abs() > NORM_WARNING {
        writeln!(err, "warning: input norm is {}; normalizing", num(norm))?;
    }
    Ok(TwoQubit::normalized(v.0)?)
}

/// Reads the toroid configuration from `$QUBITGEO_CONFIG`, or the default.
pub fn load_config() -> CliResult<ToroidConfig> {
    let Some(path) = std::env::var_os(CONFIG_ENV) else {
        return Ok(ToroidConfig::default());
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("{CONFIG_ENV}={}: {e}", path.to_string_lossy())))?;
    let cfg: ToroidConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{CONFIG_ENV}: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

fn params_arg(p: &ParamArgs) -> CliResult<Option<TwoQubit>> {
    match (p.s, p.theta1, p.theta2) {
        (None, None, None) => Ok(None),
        (Some(s), Some(t1), Some(t2)) => {
            if !(t1.is_finite() && t2.is_finite()) {
                return Err(CliError::Usage("angles must be finite".into()));
            }
            Ok(Some(state_from_params(s, Angle::new(t1), Angle::new(t2))?))
        }
        _ => Err(CliError::Usage("--s, --theta1 and --theta2 go together".into())),
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Placement {
    Params { s: f64, r: f64, theta1: f64, theta2: f64 },
    Knot { s: f64, surface: Surface, xi: f64 },
}

impl Placement {
    fn of(chi: &TwoQubit) -> Self {
        Self::from_mapping(params_from_state(chi))
    }

    fn from_mapping(p: ParamsOrKnot) -> Self {
        match p {
            ParamsOrKnot::Params(p) => Placement::Params {
                s: p.s,
                r: p.r,
                theta1: p.theta1.radians(),
                theta2: p.theta2.radians(),
            },
            ParamsOrKnot::Knot(k) => Placement::Knot {
                s: 0.5 * k.surface.sign(),
                surface: k.surface,
                xi: k.xi.radians(),
            },
        }
    }

    fn lines(&self) -> Vec<(&'static str, String)> {
        match *self {
            Placement::Params { s, r, theta1, theta2 } => vec![
                ("type", "params".into()),
                ("s", num(s)),
                ("r", num(r)),
                ("theta1", num(theta1)),
                ("theta2", num(theta2)),
            ],
            Placement::Knot { s, surface, xi } => vec![
                ("type", "knot".into()),
                ("s", num(s)),
                ("surface", surface_name(surface).into()),
                ("xi", num(xi)),
            ],
        }
    }
}

fn surface_name(s: Surface) -> &'static str {
    match s {
        Surface::Outer => "outer",
        Surface::Inner => "inner",
    }
}

#[derive(Serialize)]
struct StateReport {
    state: [f64; 4],
}

impl Report for StateReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        vec![("state", tuple(&self.state))]
    }
}

impl Report for Placement {
    fn lines(&self) -> Vec<(&'static str, String)> {
        Placement::lines(self)
    }
}

fn map(a: &MapArgs, json: bool, out: &mut dyn Write) -> CliResult {
    let chi = match (a.surface, a.xi, params_arg(&a.params)?) {
        (Some(surface), Some(xi), None) => {
            if !xi.is_finite() {
                return Err(CliError::Usage("xi must be finite".into()));
            }
            maximally_entangled(surface.into(), Angle::new(xi))
        }
        (None, None, Some(chi)) => chi,
        _ => {
            return Err(CliError::Usage(
                "give --s, --theta1, --theta2, or --surface with --xi".into(),
            ))
        }
    };
    emit(out, json, &StateReport { state: chi.to_array() })
}

#[derive(Serialize)]
struct GateReport {
    gates: Vec<String>,
    state: [f64; 4],
    #[serde(flatten)]
    placement: Placement,
}

impl Report for GateReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        let mut lines = vec![("gates", self.gates.join(",")), ("state", tuple(&self.state))];
        lines.extend(self.placement.lines());
        lines
    }
}

fn gate(a: &GateArgs, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let chi = read_state(a.state, err)?;
    let seq = parse_sequence(&a.seq)?;
    let end = apply_sequence(&chi, &seq);
    let report = GateReport {
        gates: seq.iter().map(|g| g.token()).collect(),
        state: end.to_array(),
        placement: Placement::of(&end),
    };
    emit(out, json, &report)
}

#[derive(Serialize)]
struct QubitReport {
    rho: [f64; 3],
    r: f64,
    theta: f64,
    basis: f64,
    probabilities: [f64; 2],
}

#[derive(Serialize)]
struct EvalReport {
    state: [f64; 4],
    #[serde(flatten)]
    placement: Placement,
    qubit1: QubitReport,
    qubit2: QubitReport,
    position: Option<[f64; 3]>,
}

impl Report for EvalReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        let mut lines = vec![("state", tuple(&self.state))];
        lines.extend(self.placement.lines());
        for (names, q) in [
            (["rho1", "theta_1", "basis1", "p1"], &self.qubit1),
            (["rho2", "theta_2", "basis2", "p2"], &self.qubit2),
        ] {
            lines.push((names[0], tuple(&q.rho)));
            lines.push((names[1], num(q.theta)));
            lines.push((names[2], num(q.basis)));
            lines.push((names[3], tuple(&q.probabilities)));
        }
        if let Some(p) = self.position {
            lines.push(("position", tuple(&p)));
        }
        lines
    }
}

fn eval(a: &EvalArgs, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let chi = match (a.state, params_arg(&a.params)?) {
        (Some(v), None) => read_state(v, err)?,
        (None, Some(chi)) => chi,
        _ => return Err(CliError::Usage("give --state or --s/--theta1/--theta2".into())),
    };
    if !(a.basis1.is_finite() && a.basis2.is_finite()) {
        return Err(CliError::Usage("basis angles must be finite".into()));
    }
    let cfg = load_config()?;
    let qubit = |q: Qubit, basis: f64| {
        let rho = reduced_state(&chi, q);
        let point = statepoint_from_density(&rho);
        let (p0, p1) = measurement_probs(&rho, &BasisAxis::new(Angle::new(basis)));
        QubitReport {
            rho: rho.to_array(),
            r: point.r,
            theta: point.theta.radians(),
            basis: Angle::new(basis).radians(),
            probabilities: [p0, p1],
        }
    };
    let placement = params_from_state(&chi);
    let position = match placement {
        ParamsOrKnot::Params(_) => Some(qubitgeo_core::statepoint_3d(&placement, &cfg)?),
        ParamsOrKnot::Knot(_) => None,
    };
    let report = EvalReport {
        state: chi.to_array(),
        placement: Placement::from_mapping(placement),
        qubit1: qubit(Qubit::One, a.basis1),
        qubit2: qubit(Qubit::Two, a.basis2),
        position,
    };
    emit(out, json, &report)
}

#[derive(Serialize)]
struct MixReport {
    rho: [f64; 3],
    r: f64,
    theta: f64,
}

impl Report for MixReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("rho", tuple(&self.rho)),
            ("r", num(self.r)),
            ("theta", num(self.theta)),
        ]
    }
}

fn mix_cmd(a: &MixArgs, json: bool, out: &mut dyn Write) -> CliResult {
    let components = a
        .components
        .iter()
        .map(|c| {
            if !c.theta.is_finite() {
                return Err(CliError::Usage("theta must be finite".into()));
            }
            let point = BlochPoint::new(c.r, Angle::new(c.theta))?;
            Ok((density_from_statepoint(&point), c.weight))
        })
        .collect::<CliResult<Vec<(DensityMatrix, f64)>>>()?;
    let rho = mix(&components)?;
    let point = statepoint_from_density(&rho);
    emit(
        out,
        json,
        &MixReport {
            rho: rho.to_array(),
            r: point.r,
            theta: point.theta.radians(),
        },
    )
}

fn scene(a: &SceneArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let chi = read_state(a.state, err)?;
    if !a.basis.is_finite() {
        return Err(CliError::Usage("basis angle must be finite".into()));
    }
    let basis = BasisAxis::new(Angle::new(a.basis));
    let scene = match a.view {
        View::Toroid => {
            if a.samples < qubitgeo_core::toroid::MIN_KNOT_SAMPLES {
                return Err(GeoError::TooFewSteps(a.samples).into());
            }
            toroid_scene_with_samples(&chi, &load_config()?, a.samples)
        }
        View::Bloch1 => bloch_scene(&reduced_state(&chi, Qubit::One), &basis).to_scene("q1."),
        View::Bloch2 => bloch_scene(&reduced_state(&chi, Qubit::Two), &basis).to_scene("q2."),
    };
    let text = format::json(&scene, a.pretty);
    match &a.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn verify_cmd(a: &VerifyArgs, json: bool, out: &mut dyn Write) -> CliResult {
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let report = verify::run_all(a.samples, a.seed);
    if json {
        writeln!(out, "{}", format::json(&report, false))?;
    } else {
        writeln!(out, "seed={} samples={}", report.seed, report.samples)?;
        let width = report.suites.iter().map(|s| s.name.len()).max().unwrap_or(0);
        for s in &report.suites {
            writeln!(
                out,
                "{} {:width$} samples={} max_error={} tolerance={}",
                if s.passed { "PASS" } else { "FAIL" },
                s.name,
                s.samples,
                num(s.max_error),
                num(s.tolerance),
            )?;
        }
        let failed = report.suites.iter().filter(|s| !s.passed).count();
        writeln!(out, "{} suites, {failed} failed", report.suites.len())?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn serve(a: &ServeArgs, err: &mut dyn Write) -> CliResult {
    let cfg = load_config()?;
    let _ = tracing_subscriber::fmt().with_writer(std::io::stderr).try_init();
    let frame = qubitgeo_session::Frame {
        toroid: cfg,
        ..Default::default()
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let (addr, server) = qubitgeo_session::bind(a.addr, qubitgeo_session::AppState::with_initial(frame)).await?;
        writeln!(err, "listening on http://{addr}")?;
        server.await
    })?;
    Ok(())
}
