//! Commands over files and the manifest runner.
//!
//! Every command produces an [`Outcome`]: text plus a [`Status`] whose code
//! is the process exit code (0 success, 1 property violation, 2 bad input).
//!
//! A manifest lists one job per line, `#` starting a comment:
//!
//! ```text
//! run spectral complex=circle_z.fc class=circle_z.cl expect=golden/circle_z.spectral
//! check duality complex=circle_q.fc
//! check oracle random=200 ring=F3 generators=8 seed=7
//! ```
//!
//! `run` jobs execute a [`Command`]; `expect=<file>` compares the output with
//! the file byte for byte. `check` jobs run a property from [`crate::props`].
//! Paths are relative to the manifest. Jobs run in parallel and their output
//! is emitted in manifest order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coeff::{parse_rational, BaseRing, Coefficient, Rational};
use crate::complex::{ComplexError, FilteredComplex, Window};
use crate::format::{self, FormatError};
use crate::homology;
use crate::models::{self, ModuleActionData, RandomSpec};
use crate::props::{self, Labeled, PropertyReport, PropsError};
use crate::spectral::{self, oracle, Method, SpectralEngine, SpectralError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Ok,
    Violation,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::InputError => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { status: Status::Ok, stdout, stderr: String::new() }
    }

    fn input_error(message: impl Into<String>) -> Self {
        Outcome { status: Status::InputError, stdout: String::new(), stderr: message.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Validate,
    Homology,
    Spectrum,
    Spectral,
    Dualize,
    Tensor,
    Lift,
    Oracle,
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "validate" => Command::Validate,
            "homology" => Command::Homology,
            "spectrum" => Command::Spectrum,
            "spectral" => Command::Spectral,
            "dualize" => Command::Dualize,
            "tensor" => Command::Tensor,
            "lift" => Command::Lift,
            "oracle" => Command::Oracle,
            other => return Err(format!("unknown command `{other}`")),
        })
    }
}

/// Inputs shared by all commands; each command reads the fields it needs.
#[derive(Clone, Debug, Default)]
pub struct Request {
    pub complexes: Vec<PathBuf>,
    pub classes: Vec<PathBuf>,
    pub degree: Option<i64>,
    /// Base ring every loaded complex is moved to before use.
    pub ring_override: Option<String>,
    pub window: Option<Window>,
    pub period_degree: Option<i64>,
    pub period_action: Option<Rational>,
}

/// Input problem, reported with exit status 2.
#[derive(Debug)]
struct InputError(String);

impl From<FormatError> for InputError {
    fn from(e: FormatError) -> Self {
        InputError(e.to_string())
    }
}

impl From<ComplexError> for InputError {
    fn from(e: ComplexError) -> Self {
        InputError(e.to_string())
    }
}

impl From<SpectralError> for InputError {
    fn from(e: SpectralError) -> Self {
        InputError(e.to_string())
    }
}

impl From<PropsError> for InputError {
    fn from(e: PropsError) -> Self {
        InputError(e.to_string())
    }
}

fn override_ring(c: FilteredComplex, ring: Option<&str>) -> Result<FilteredComplex, InputError> {
    let Some(text) = ring else { return Ok(c) };
    let base: BaseRing = text.parse().map_err(|e: crate::coeff::CoeffError| InputError(e.to_string()))?;
    Ok(c.change_ring(&base)?)
}

fn load(path: &Path, ring: Option<&str>) -> Result<FilteredComplex, InputError> {
    override_ring(format::load_complex(path)?, ring)
}

fn exactly_one<'a>(paths: &'a [PathBuf], what: &str) -> Result<&'a Path, InputError> {
    match paths {
        [p] => Ok(p),
        _ => Err(InputError(format!("expected exactly one {what}, got {}", paths.len()))),
    }
}

fn classes_of(c: &FilteredComplex, paths: &[PathBuf]) -> Result<Vec<Labeled>, InputError> {
    if paths.is_empty() {
        return Err(InputError("expected at least one class file".into()));
    }
    let mut out = Vec::new();
    for p in paths {
        out.extend(format::load_classes(c, p)?);
    }
    Ok(out)
}

pub fn run_command(command: Command, req: &Request) -> Outcome {
    let ring = req.ring_override.as_deref();
    let result = match command {
        Command::Validate => return validate(req),
        Command::Homology => homology_text(req),
        Command::Spectrum => exactly_one(&req.complexes, "complex").and_then(|p| load(p, ring)).map(|c| {
            let mut out = String::new();
            if let Some(period) = c.ring().period() {
                let _ = writeln!(out, "period {}", period.action);
            }
            for v in spectral::action_spectrum(&c).values() {
                let _ = writeln!(out, "{v}");
            }
            out
        }),
        Command::Spectral | Command::Oracle => values_text(command, req),
        Command::Dualize => exactly_one(&req.complexes, "complex")
            .and_then(|p| load(p, ring))
            .map(|c| format::emit_complex(&c.dualize())),
        Command::Tensor => tensor_text(req),
        Command::Lift => lift_text(req),
    };
    match result {
        Ok(text) => Outcome::ok(text),
        Err(InputError(message)) => Outcome::input_error(message),
    }
}

fn validate(req: &Request) -> Outcome {
    if req.complexes.is_empty() {
        return Outcome::input_error("expected at least one complex");
    }
    let mut out = Outcome::ok(String::new());
    for path in &req.complexes {
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        let loaded = format::load_complex(path).map_err(|e| match e {
            FormatError::Invalid(ComplexError::Invalid(report)) => Ok(report),
            other => Err(InputError::from(other)),
        });
        match loaded.map(|c| override_ring(c, req.ring_override.as_deref())) {
            Ok(Ok(c)) => {
                let _ = writeln!(
                    out.stdout,
                    "{name}: ok ring={} generators={} entries={}",
                    c.ring(),
                    c.len(),
                    c.entries().len()
                );
            }
            Err(Ok(report)) => {
                let _ = writeln!(out.stdout, "{name}: invalid\n{report}");
                out.status = out.status.max(Status::Violation);
            }
            Ok(Err(InputError(e))) | Err(Err(InputError(e))) => {
                let _ = writeln!(out.stderr, "{name}: {e}");
                out.status = Status::InputError;
            }
        }
    }
    out
}

fn homology_text(req: &Request) -> Result<String, InputError> {
    let c = load(exactly_one(&req.complexes, "complex")?, req.ring_override.as_deref())?;
    let degrees = match req.degree {
        Some(k) => vec![k],
        None => c.degrees(),
    };
    let mut out = String::new();
    for k in degrees {
        let h = homology::homology(&c, k)?;
        let torsion: Vec<String> = h.torsion_part.iter().map(|(_, d)| d.to_string()).collect();
        let torsion = if torsion.is_empty() { "none".to_string() } else { torsion.join(",") };
        let _ = writeln!(out, "# H_{k} rank {} torsion {torsion}", h.rank());
        let mut labeled: Vec<Labeled> =
            h.free_part.iter().enumerate().map(|(j, z)| (format!("H{k}.{j}"), z.clone())).collect();
        labeled.extend(h.torsion_part.iter().enumerate().map(|(j, (z, _))| (format!("H{k}.t{j}"), z.clone())));
        out.push_str(&format::emit_classes(&c, &labeled));
    }
    Ok(out)
}

fn values_text(command: Command, req: &Request) -> Result<String, InputError> {
    let c = load(exactly_one(&req.complexes, "complex")?, req.ring_override.as_deref())?;
    let classes = classes_of(&c, &req.classes)?;
    let engine = SpectralEngine::new(&c);
    let mut out = String::new();
    for (_, class) in &classes {
        let v = match command {
            Command::Oracle => oracle::brute_force_invariant(&c, class)?,
            _ => engine.evaluate(class, Method::Auto)?.value,
        };
        let _ = writeln!(out, "{v}");
    }
    Ok(out)
}

fn tensor_text(req: &Request) -> Result<String, InputError> {
    let [a, b] = req.complexes.as_slice() else {
        return Err(InputError(format!("expected two complexes, got {}", req.complexes.len())));
    };
    let ring = req.ring_override.as_deref();
    Ok(format::emit_complex(&load(a, ring)?.tensor(&load(b, ring)?)?))
}

fn lift_text(req: &Request) -> Result<String, InputError> {
    let c = load(exactly_one(&req.complexes, "complex")?, req.ring_override.as_deref())?;
    let (Some(n), Some(a)) = (req.period_degree, req.period_action.as_ref()) else {
        return Err(InputError("lift needs a period degree and a period action".into()));
    };
    let window = req.window.unwrap_or_else(Window::zero);
    Ok(format::emit_complex(&c.novikov_lift(n, a, window)?))
}

/// One line of a manifest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub line: usize,
    pub kind: JobKind,
    /// Key to values, in order of appearance; paths already resolved.
    pub params: BTreeMap<String, Vec<String>>,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JobKind {
    Run(Command),
    Check(Property),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Finiteness,
    Spectrality,
    Continuation,
    Triangle,
    Module,
    Duality,
    Novikov,
    Tensor,
    Diagonal,
    Conjugation,
    GroundRing,
    Shift,
    Oracle,
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "finiteness" => Property::Finiteness,
            "spectrality" => Property::Spectrality,
            "continuation" => Property::Continuation,
            "triangle" => Property::Triangle,
            "module" => Property::Module,
            "duality" => Property::Duality,
            "novikov" => Property::Novikov,
            "tensor" => Property::Tensor,
            "diagonal" => Property::Diagonal,
            "conjugation" => Property::Conjugation,
            "ground-ring" => Property::GroundRing,
            "shift" => Property::Shift,
            "oracle" => Property::Oracle,
            other => return Err(format!("unknown property `{other}`")),
        })
    }
}

const PATH_KEYS: &[&str] = &[
    "complex",
    "class",
    "expect",
    "left",
    "right",
    "target",
    "product",
    "left-class",
    "right-class",
    "source",
    "map",
    "ambient",
    "module",
    "ambient-class",
    "module-class",
    "f",
    "g",
    "h",
    "k",
];

const VALUE_KEYS: &[&str] = &[
    "degree",
    "ring",
    "window",
    "period-degree",
    "period-action",
    "random",
    "generators",
    "seed",
    "powers",
    "scalars",
    "shifts",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub jobs: Vec<Job>,
}

/// Parses a manifest, resolving paths against `base` and checking that
/// they exist. Errors name the offending line.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Manifest, String> {
    let mut jobs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let code = raw.split_once('#').map_or(raw, |(c, _)| c).trim();
        if code.is_empty() {
            continue;
        }
        let mut words = code.split_whitespace();
        let verb = words.next().unwrap_or_default();
        let name =
            words.next().ok_or_else(|| format!("line {line}: expected `run <command>` or `check <property>`"))?;
        let kind = match verb {
            "run" => JobKind::Run(name.parse().map_err(|e| format!("line {line}: {e}"))?),
            "check" => JobKind::Check(name.parse().map_err(|e| format!("line {line}: {e}"))?),
            other => return Err(format!("line {line}: unknown job verb `{other}`")),
        };
        let mut params: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for word in words {
            let (key, value) =
                word.split_once('=').ok_or_else(|| format!("line {line}: expected key=value, found `{word}`"))?;
            let value = if PATH_KEYS.contains(&key) {
                let path = base.join(value);
                if !path.is_file() {
                    return Err(format!("line {line}: no such file `{}`", path.display()));
                }
                path.display().to_string()
            } else if VALUE_KEYS.contains(&key) {
                value.to_string()
            } else {
                return Err(format!("line {line}: unknown key `{key}`"));
            };
            params.entry(key.to_string()).or_default().push(value);
        }
        jobs.push(Job { line, kind, params, text: code.to_string() });
    }
    Ok(Manifest { jobs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobResult {
    pub status: Status,
    pub text: String,
}

struct Params<'a> {
    map: &'a BTreeMap<String, Vec<String>>,
    default_seed: u64,
}

impl Params<'_> {
    fn all(&self, key: &str) -> &[String] {
        self.map.get(key).map_or(&[], Vec::as_slice)
    }

    fn one(&self, key: &str) -> Result<Option<&str>, InputError> {
        match self.all(key) {
            [] => Ok(None),
            [v] => Ok(Some(v)),
            _ => Err(InputError(format!("`{key}` given more than once"))),
        }
    }

    fn required(&self, key: &str) -> Result<&str, InputError> {
        self.one(key)?.ok_or_else(|| InputError(format!("missing `{key}=`")))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, InputError> {
        self.one(key)?.map(|v| v.parse().map_err(|_| InputError(format!("malformed `{key}={v}`")))).transpose()
    }

    fn paths(&self, key: &str) -> Vec<PathBuf> {
        self.all(key).iter().map(PathBuf::from).collect()
    }

    fn complex(&self, key: &str) -> Result<Arc<FilteredComplex>, InputError> {
        Ok(Arc::new(load(Path::new(self.required(key)?), self.one("ring")?)?))
    }

    /// Classes from the files under `key`, or the homology basis of `c`.
    fn classes(&self, key: &str, c: &FilteredComplex) -> Result<Vec<Labeled>, InputError> {
        let paths = self.paths(key);
        if paths.is_empty() {
            Ok(props::basis_classes(c)?)
        } else {
            classes_of(c, &paths)
        }
    }

    fn list<T>(&self, key: &str, default: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, InputError> {
        let text = self.one(key)?.unwrap_or(default);
        text.split(',').map(|t| parse(t).ok_or_else(|| InputError(format!("malformed `{key}` entry `{t}`")))).collect()
    }

    fn seed(&self) -> Result<u64, InputError> {
        Ok(self.parsed("seed")?.unwrap_or(self.default_seed))
    }
}

fn finish(out: &mut String, report: &PropertyReport) -> Status {
    let _ = writeln!(out, "{report}");
    if report.passed() {
        Status::Ok
    } else {
        Status::Violation
    }
}

/// Runs one job; the result text has no header.
pub fn run_job(job: &Job, default_seed: u64) -> JobResult {
    let p = Params { map: &job.params, default_seed };
    let result = match job.kind {
        JobKind::Run(command) => run_job_command(command, &p),
        JobKind::Check(property) => run_check(property, &p).map(|report| {
            let mut text = String::new();
            let status = finish(&mut text, &report);
            JobResult { status, text }
        }),
    };
    result.unwrap_or_else(|InputError(message)| JobResult {
        status: Status::InputError,
        text: format!("error: {message}\n"),
    })
}

fn run_job_command(command: Command, p: &Params<'_>) -> Result<JobResult, InputError> {
    let req = Request {
        complexes: p.paths("complex"),
        classes: p.paths("class"),
        degree: p.parsed("degree")?,
        ring_override: p.one("ring")?.map(str::to_string),
        window: p
            .one("window")?
            .map(|w| format::parse_window(w).ok_or_else(|| InputError(format!("malformed window `{w}`"))))
            .transpose()?,
        period_degree: p.parsed("period-degree")?,
        period_action: p
            .one("period-action")?
            .map(|a| parse_rational(a).ok_or_else(|| InputError(format!("malformed rational `{a}`"))))
            .transpose()?,
    };
    let outcome = run_command(command, &req);
    let mut text = outcome.stdout;
    if !outcome.stderr.is_empty() {
        let _ = write!(text, "error: {}", outcome.stderr);
        if !text.ends_with('\n') {
            text.push('\n');
        }
    }
    let mut status = outcome.status;
    if let (Some(expect), Status::Ok) = (p.one("expect")?, status) {
        let golden = std::fs::read_to_string(expect).map_err(|e| InputError(format!("{expect}: {e}")))?;
        if golden == text {
            text.push_str("expect: match\n");
        } else {
            text.push_str("expect: MISMATCH\n");
            status = Status::Violation;
        }
    }
    Ok(JobResult { status, text })
}

/// Random base-ring complexes with their basis classes plus random cycles.
fn random_instances(p: &Params<'_>, count: usize) -> Result<Vec<(FilteredComplex, Vec<Labeled>)>, InputError> {
    let ring: BaseRing =
        p.required("ring")?.parse().map_err(|e: crate::coeff::CoeffError| InputError(e.to_string()))?;
    let generators = p.parsed("generators")?.unwrap_or(8);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed()?);
    let spec = RandomSpec::new(ring, generators);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let c = models::random_complex(&mut rng, &spec);
        let mut classes = props::basis_classes(&c)?;
        for (j, z) in models::random_classes(&mut rng, &c, 3).into_iter().enumerate() {
            classes.push((format!("random{j}"), z));
        }
        for (name, _) in classes.iter_mut() {
            *name = format!("#{i} {name}");
        }
        out.push((c, classes));
    }
    Ok(out)
}

/// Complexes named by `complex=`, or random ones when `random=` is given.
fn instances(
    p: &Params<'_>,
    class_key: &str,
    dual_classes: bool,
) -> Result<Vec<(FilteredComplex, Vec<Labeled>)>, InputError> {
    if let Some(count) = p.parsed::<usize>("random")? {
        let mut out = random_instances(p, count)?;
        if dual_classes {
            for (c, classes) in out.iter_mut() {
                *classes = props::basis_classes(&c.dualize())?;
            }
        }
        return Ok(out);
    }
    let paths = p.paths("complex");
    if paths.is_empty() {
        return Err(InputError("expected `complex=` or `random=`".into()));
    }
    if paths.len() > 1 && !p.all(class_key).is_empty() {
        return Err(InputError(format!("`{class_key}=` needs a single complex")));
    }
    let mut out = Vec::new();
    for path in paths {
        let c = load(&path, p.one("ring")?)?;
        let classes = if dual_classes { p.classes(class_key, &c.dualize())? } else { p.classes(class_key, &c)? };
        out.push((c, classes));
    }
    Ok(out)
}

fn run_check(property: Property, p: &Params<'_>) -> Result<PropertyReport, InputError> {
    let mut report = PropertyReport::new(property_name(property));
    match property {
        Property::Continuation => {
            let (source, target) = (p.complex("source")?, p.complex("target")?);
            let f = format::load_map(source.clone(), target, Path::new(p.required("map")?))?;
            return Ok(props::check_continuation(&f, &p.classes("class", &source)?)?);
        }
        Property::Triangle => {
            let (left, right, target) = match p.one("complex")? {
                Some(_) => {
                    let c = p.complex("complex")?;
                    (c.clone(), c.clone(), c)
                }
                None => (p.complex("left")?, p.complex("right")?, p.complex("target")?),
            };
            let prod = format::load_product(left.clone(), right.clone(), target, Path::new(p.required("product")?))?;
            let (a, b) = (p.classes("left-class", &left)?, p.classes("right-class", &right)?);
            return Ok(props::check_triangle(&prod, &a, &b)?);
        }
        Property::Module => {
            let (ambient, module) = (p.complex("ambient")?, p.complex("module")?);
            let data = format::load_product(
                ambient.clone(),
                module.clone(),
                module.clone(),
                Path::new(p.required("product")?),
            )?;
            let (a, b) = (p.classes("ambient-class", &ambient)?, p.classes("module-class", &module)?);
            return Ok(props::check_module_structure(&ModuleActionData { data }, &a, &b)?);
        }
        Property::Conjugation => {
            let (source, target) = (p.complex("source")?, p.complex("target")?);
            let f = format::load_map(source.clone(), target.clone(), Path::new(p.required("f")?))?;
            let g = format::load_map(target.clone(), source.clone(), Path::new(p.required("g")?))?;
            let h = format::load_homotopy(&source, Path::new(p.required("h")?))?;
            let k = format::load_homotopy(&target, Path::new(p.required("k")?))?;
            return Ok(props::check_conjugation_stability(&f, &g, &h, &k, &p.classes("class", &source)?)?);
        }
        Property::Tensor => {
            if p.parsed::<usize>("random")?.is_some() {
                let all = random_instances(p, 2 * p.parsed::<usize>("random")?.unwrap_or(0))?;
                for pair in all.chunks(2) {
                    let [(c1, l), (c2, r)] = pair else { continue };
                    report.merge(props::check_tensor(c1, c2, l, r)?);
                }
                return Ok(report);
            }
            let (left, right) = match p.one("complex")? {
                Some(_) => (p.complex("complex")?, p.complex("complex")?),
                None => (p.complex("left")?, p.complex("right")?),
            };
            let (a, b) = (p.classes("left-class", &left)?, p.classes("right-class", &right)?);
            return Ok(props::check_tensor(&left, &right, &a, &b)?);
        }
        _ => {}
    }
    let dual = property == Property::Duality;
    for (c, classes) in instances(p, "class", dual)? {
        let r = match property {
            Property::Finiteness => props::check_finiteness(&c, &classes)?,
            Property::Spectrality => props::check_spectrality(&c, &classes)?,
            Property::Duality => props::check_duality(&c, &classes)?,
            Property::Diagonal => props::check_diagonal(&c)?,
            Property::Oracle => props::check_oracle(&c, &classes)?,
            Property::Novikov => {
                let powers = p.list("powers", "-2,-1,0,1,2", |t| t.trim().parse().ok())?;
                props::check_novikov_action(&c, &classes, &powers)?
            }
            Property::GroundRing => {
                let ring = c.ring().clone();
                let scalars: Vec<Coefficient> =
                    p.list("scalars", "-1,0,1,2,3", |t| ring.parse_coefficient(t.trim()).ok())?;
                props::check_ground_ring_action(&c, &classes, &scalars)?
            }
            Property::Shift => {
                let shifts = p.list("shifts", "1,-1/2", parse_rational)?;
                props::check_shift(&c, &classes, &shifts)?
            }
            _ => unreachable!("handled above"),
        };
        report.merge(r);
    }
    Ok(report)
}

pub fn property_name(p: Property) -> &'static str {
    match p {
        Property::Finiteness => "finiteness",
        Property::Spectrality => "spectrality",
        Property::Continuation => "continuation",
        Property::Triangle => "triangle",
        Property::Module => "module-structure",
        Property::Duality => "duality",
        Property::Novikov => "novikov-action",
        Property::Tensor => "tensor",
        Property::Diagonal => "diagonal",
        Property::Conjugation => "conjugation-stability",
        Property::GroundRing => "ground-ring-action",
        Property::Shift => "shift",
        Property::Oracle => "oracle",
    }
}

/// Runs every job in parallel and renders the results in manifest order,
/// followed by a summary line. The status is the worst job status.
pub fn run_manifest(manifest: &Manifest, default_seed: u64) -> Outcome {
    let results: Vec<JobResult> = manifest.jobs.par_iter().map(|job| run_job(job, default_seed)).collect();
    let mut out = String::new();
    let mut counts = [0usize; 3];
    for (job, result) in manifest.jobs.iter().zip(&results) {
        let _ = writeln!(out, "[line {}] {}", job.line, job.text);
        out.push_str(&result.text);
        counts[result.status.code() as usize] += 1;
    }
    let _ =
        writeln!(out, "jobs {}: {} ok, {} violations, {} input errors", results.len(), counts[0], counts[1], counts[2]);
    let status = results.iter().map(|r| r.status).max().unwrap_or(Status::Ok);
    Outcome { status, stdout: out, stderr: String::new() }
}

pub fn verify(manifest_path: &Path, default_seed: u64) -> Outcome {
    let text = match std::fs::read_to_string(manifest_path) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("{}: {e}", manifest_path.display())),
    };
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    match parse_manifest(&text, base) {
        Ok(m) => run_manifest(&m, default_seed),
        Err(e) => Outcome::input_error(format!("{}: {e}", manifest_path.display())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str, files: &[(&str, &str)]) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("filtra-runner-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        for (f, text) in files {
            std::fs::write(dir.join(f), text).unwrap();
        }
        dir
    }

    const CIRCLE: &str = "ring Z\ngen min deg=0 action=0\ngen max deg=1 action=1\n";

    #[test]
    fn spectral_command_prints_values() {
        let dir = scratch("spectral", &[("c.fc", CIRCLE), ("max.cl", "cls max deg=1\nterm max 1\ncls zero deg=0\n")]);
        let req =
            Request { complexes: vec![dir.join("c.fc")], classes: vec![dir.join("max.cl")], ..Request::default() };
        let out = run_command(Command::Spectral, &req);
        assert_eq!(out.status, Status::Ok);
        assert_eq!(out.stdout, "1\n-inf\n");
        let over_f2 = Request { ring_override: Some("F2".into()), ..req.clone() };
        assert_eq!(run_command(Command::Oracle, &over_f2).stdout, "1\n-inf\n");
        assert_eq!(run_command(Command::Oracle, &req).status, Status::InputError);
    }

    #[test]
    fn validate_distinguishes_violations_from_parse_errors() {
        let bad = "ring Z\ngen min deg=0 action=0\ngen max deg=1 action=0\nbnd max min 1\n";
        let dir = scratch("validate", &[("ok.fc", CIRCLE), ("bad.fc", bad), ("broken.fc", "ring Z\ngen a\n")]);
        let run =
            |f: &str| run_command(Command::Validate, &Request { complexes: vec![dir.join(f)], ..Request::default() });
        assert_eq!(run("ok.fc").status, Status::Ok);
        assert_eq!(run("bad.fc").status, Status::Violation);
        assert_eq!(run("broken.fc").status, Status::InputError);
        assert_eq!(run("missing.fc").status, Status::InputError);
    }

    #[test]
    fn homology_output_is_a_class_file() {
        let rp2 = "ring Z\ngen c0 deg=0 action=0\ngen c1 deg=1 action=1\ngen c2 deg=2 action=2\nbnd c2 c1 2\n";
        let dir = scratch("homology", &[("rp2.fc", rp2)]);
        let req = Request { complexes: vec![dir.join("rp2.fc")], ..Request::default() };
        let out = run_command(Command::Homology, &req);
        assert_eq!(
            out.stdout,
            "# H_0 rank 1 torsion none\ncls H0.0 deg=0\nterm c0 1\n# H_1 rank 0 torsion 2\ncls H1.t0 deg=1\nterm c1 1\n# H_2 rank 0 torsion none\n"
        );
        let c = format::load_complex(&dir.join("rp2.fc")).unwrap();
        assert_eq!(format::parse_classes(&c, &out.stdout).unwrap().len(), 2);
    }

    #[test]
    fn manifest_parsing_reports_lines() {
        let dir = scratch("manifest", &[("c.fc", CIRCLE)]);
        assert!(parse_manifest("run spectral complex=c.fc\n", &dir).is_ok());
        assert!(parse_manifest("\nrun frobnicate\n", &dir).unwrap_err().starts_with("line 2"));
        assert!(parse_manifest("check duality complex=nope.fc\n", &dir).unwrap_err().contains("no such file"));
        assert!(parse_manifest("check duality colour=red\n", &dir).unwrap_err().contains("unknown key"));
    }

    #[test]
    fn manifest_runs_in_order_with_expectations() {
        let dir = scratch(
            "run",
            &[("c.fc", CIRCLE), ("max.cl", "cls max deg=1\nterm max 1\n"), ("good.out", "1\n"), ("bad.out", "2\n")],
        );
        let text = "run spectral complex=c.fc class=max.cl expect=good.out\ncheck duality complex=c.fc ring=Q\n\
                    check oracle random=5 ring=F2 generators=5\nrun spectral complex=c.fc class=max.cl expect=bad.out\n";
        let m = parse_manifest(text, &dir).unwrap();
        let first = run_manifest(&m, 0);
        assert_eq!(first.status, Status::Violation);
        assert!(first.stdout.contains("expect: match"));
        assert!(first.stdout.contains("expect: MISMATCH"));
        assert!(first.stdout.ends_with("jobs 4: 3 ok, 1 violations, 0 input errors\n"));
        assert_eq!(run_manifest(&m, 0), first);
    }
}
