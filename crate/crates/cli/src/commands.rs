use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use clap::Parser;

use wlc_core::anomaly::{anomaly_report, Condition, Verdict, DEFAULT_TOL};
use wlc_core::generators::{catalog, CatalogKey, SubalgebraSpec};
use wlc_core::phasespace::{AccelerationLaw, Kinematics, PhasePoint, SamplingDomain};
use wlc_core::solutions::{make_family, FamilyId, FamilyParams};
use wlc_core::worldline::{covariance_residual, integrate, transform_trimmed};

use crate::config::{parse_floats, Cli, Command, RunArgs, RunConfig};
use crate::element::parse_element;
use crate::report::{
    to_json, AnomalyJson, CatalogEntry, CovarianceJson, CovarianceWitness, Header, PairEntry, SCHEMA, TOOL, VERSION,
};
use crate::{CliError, Exit};

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
pub const COVARIANCE_TOL: f64 = 1e-4;
pub const COVARIANCE_WITNESS: f64 = 1e-2;
pub const DEFAULT_T_END: f64 = 2.0;
pub const DEFAULT_DT: f64 = 1e-3;

/// Parse `args`, run the command, and return the exit status. Reports go to
/// `stdout` or the configured file; diagnostics go to `stderr`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Pass };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Exit::Usage
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Exit, CliError> {
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let name = cli.command.name();
    match &cli.command {
        Command::Catalog { beta, json } => catalog_cmd(*beta, *json, stdout),
        Command::Check(a) => anomaly_cmd(name, resolve(base, a)?, false, stdout, stderr),
        Command::Conditions(a) => anomaly_cmd(name, resolve(base, a)?, true, stdout, stderr),
        Command::Covariance(a) => covariance_cmd(name, resolve(base, a)?, stdout, stderr),
        Command::Integrate(a) => integrate_cmd(resolve(base, a)?, stdout),
    }
}

fn resolve(base: RunConfig, a: &RunArgs) -> Result<RunConfig, CliError> {
    let mut c = base.merge(a)?;
    c.samples.get_or_insert(DEFAULT_SAMPLES);
    c.seed.get_or_insert(DEFAULT_SEED);
    c.no_timing.get_or_insert(false);
    Ok(c)
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
        }
        None => {
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "standard output".into(), source })
        }
    }
}

fn group(cfg: &RunConfig) -> Result<Option<SubalgebraSpec>, CliError> {
    let Some(key) = &cfg.group else { return Ok(None) };
    let key: CatalogKey = key.parse()?;
    // A family's beta doubles as the group's when only one is given.
    let beta = cfg.beta.or_else(|| cfg.params.get("beta").copied());
    Ok(Some(catalog(key, beta)?))
}

fn law(cfg: &RunConfig) -> Result<AccelerationLaw, CliError> {
    let given = [cfg.family.is_some(), cfg.law.is_some(), cfg.law2.is_some()].iter().filter(|b| **b).count();
    if given != 1 {
        return Err(CliError::Usage("give exactly one of --family, --law, --law2".into()));
    }
    if let Some(text) = cfg.law.as_ref().or(cfg.law2.as_ref()) {
        let law = AccelerationLaw::parse(text, SamplingDomain::galilean())?;
        let expected = if cfg.law.is_some() { 1 } else { 2 };
        if law.particles() != expected {
            let flag = if expected == 1 { "--law" } else { "--law2" };
            return Err(CliError::Usage(format!(
                "{flag} expects {expected} particle(s), `{text}` has {}",
                law.particles()
            )));
        }
        return Ok(law);
    }
    let id: FamilyId = cfg.family.as_deref().unwrap_or_default().parse()?;
    let mut params = FamilyParams::new();
    for (k, v) in &cfg.params {
        params = match k.as_str() {
            "beta" => params.beta(*v),
            "g" => params.g(*v),
            other => return Err(CliError::Usage(format!("unknown family parameter `{other}` (expected beta or g)"))),
        };
    }
    if params.beta.is_none() {
        if let Some(b) = cfg.beta {
            params = params.beta(b);
        }
    }
    for p in &cfg.profiles {
        params = params.profile_text(p)?;
    }
    Ok(make_family(id, &params)?)
}

/// The law's own domain with the configured overrides applied.
fn domain(cfg: &RunConfig, law: &AccelerationLaw, kinematics: Kinematics) -> SamplingDomain {
    let mut d = law.domain().clone();
    if kinematics == Kinematics::Poincare && !d.is_relativistic() {
        d = SamplingDomain { v3_poles: d.v3_poles, pole_margin: d.pole_margin, ..SamplingDomain::relativistic() };
    }
    if let Some(b) = cfg.position_box {
        d.position_box = b;
    }
    if let Some(b) = cfg.velocity_box {
        d.velocity_box = b;
    }
    if cfg.speed_cap.is_some() {
        d.speed_cap = cfg.speed_cap;
    }
    if cfg.lorentz_margin.is_some() {
        d.lorentz_margin = cfg.lorentz_margin;
    }
    if let Some(m) = cfg.pole_margin {
        d.pole_margin = m;
    }
    d.with_seed(cfg.seed.unwrap_or(DEFAULT_SEED))
}

fn header(command: &'static str, cfg: &RunConfig, domain: &SamplingDomain) -> Header {
    Header { schema: SCHEMA, tool: TOOL, version: VERSION, command, config: cfg.clone(), domain: domain.clone() }
}

fn elapsed(cfg: &RunConfig, start: Instant) -> Option<f64> {
    (!cfg.no_timing.unwrap_or(false)).then(|| start.elapsed().as_secs_f64())
}

fn anomaly_cmd(
    command: &'static str,
    mut cfg: RunConfig,
    conditions_only: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Exit, CliError> {
    let start = Instant::now();
    let tol = *cfg.tol.get_or_insert(DEFAULT_TOL);
    let law = Arc::new(law(&cfg)?);
    let spec = match group(&cfg)? {
        Some(s) => s,
        None if conditions_only => {
            let key = match law.kinematics() {
                Some(Kinematics::Poincare) => CatalogKey::FullPoincare,
                _ => CatalogKey::FullGalilei,
            };
            cfg.group = Some(key.as_str().to_string());
            catalog(key, None)?
        }
        None => return Err(CliError::Usage("--group is required".into())),
    };
    if let Some(w) = spec.kinematics_warning(&law) {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let dom = domain(&cfg, &law, spec.kinematics);
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let r = anomaly_report(&spec, &law, &dom, samples, tol)?;
    let required = Condition::required(spec.kinematics);
    let (verdict, witness, pairs) = if conditions_only {
        let (v, w) = r.condition_verdict(required);
        (v, w, Vec::new())
    } else {
        (r.verdict, r.witness.clone(), r.pairs.iter().map(PairEntry::from).collect())
    };
    let conditions: BTreeMap<String, f64> =
        r.conditions.iter().map(|c| (c.condition.to_string(), c.sup_residual)).collect();
    let report = AnomalyJson {
        header: header(command, &cfg, &dom),
        group: spec.name().to_string(),
        law: law.descriptor().to_string(),
        samples: r.samples,
        seed: r.seed,
        rejected_samples: r.rejected_samples,
        wall_time_s: elapsed(&cfg, start),
        pairs,
        conditions,
        required_conditions: required.iter().map(|c| c.to_string()).collect(),
        verdict,
        witness,
    };
    emit(&cfg, &to_json(&report), stdout)?;
    Ok(exit_for(verdict))
}

fn exit_for(v: Verdict) -> Exit {
    match v {
        Verdict::Pass => Exit::Pass,
        Verdict::Fail | Verdict::Inconclusive => Exit::Fail,
    }
}

/// `"a,b,c"` or `"a,b,c;d,e,f"`, one triple per particle.
fn triples(flag: &str, text: &str) -> Result<Vec<[f64; 3]>, CliError> {
    text.split(';')
        .map(|t| {
            parse_floats(flag, t)?
                .try_into()
                .map_err(|_| CliError::Usage(format!("--{flag}: `{t}` must have three components")))
        })
        .collect()
}

fn initial_point(cfg: &RunConfig, particles: usize) -> Result<PhasePoint, CliError> {
    let (x0, v0) = match particles {
        1 => ("0,0,0", "0.3,0.1,-0.2"),
        _ => ("0,0,0;1,0.2,0", "0.1,0,0;-0.1,0.2,0.05"),
    };
    let x = triples("x0", cfg.x0.as_deref().unwrap_or(x0))?;
    let v = triples("v0", cfg.v0.as_deref().unwrap_or(v0))?;
    if x.len() != particles || v.len() != particles {
        return Err(CliError::Usage(format!("initial data must describe {particles} particle(s)")));
    }
    Ok(PhasePoint::new(x, v)?)
}

fn span(cfg: &mut RunConfig) -> Result<(f64, f64), CliError> {
    let t_end = *cfg.t_end.get_or_insert(DEFAULT_T_END);
    let dt = *cfg.dt.get_or_insert(DEFAULT_DT);
    if !(t_end > 0.0 && dt > 0.0 && dt < t_end) {
        return Err(CliError::Usage(format!("need 0 < dt < t-end, got dt={dt}, t-end={t_end}")));
    }
    Ok((t_end, dt))
}

fn covariance_cmd(
    command: &'static str,
    mut cfg: RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Exit, CliError> {
    let start = Instant::now();
    let tol = *cfg.tol.get_or_insert(COVARIANCE_TOL);
    let threshold = *cfg.witness.get_or_insert(COVARIANCE_WITNESS);
    let element_text = cfg.element.clone().ok_or_else(|| CliError::Usage("--element is required".into()))?;
    let element = parse_element(&element_text)?;
    let (t_end, dt) = span(&mut cfg)?;
    let law = law(&cfg)?;
    let kinematics = law.kinematics().unwrap_or(Kinematics::Galilean);
    if let (Some(Kinematics::Galilean), wlc_core::worldline::GroupElement::LorentzBoost { .. }) =
        (law.kinematics(), &element)
    {
        let _ = writeln!(
            stderr,
            "warning: law `{}` is declared galilean but the element is a Lorentz boost",
            law.descriptor()
        );
    }
    let dom = domain(&cfg, &law, kinematics);
    let p0 = initial_point(&cfg, law.particles())?;
    let traj = integrate(&law, &p0, (0.0, t_end), dt)?;
    let (_, trimmed) = transform_trimmed(&traj, &element)?;
    let residual = covariance_residual(&law, &traj, &element)?;
    let verdict = if residual <= tol {
        Verdict::Pass
    } else if residual > threshold {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let report = CovarianceJson {
        header: header(command, &cfg, &dom),
        law: law.descriptor().to_string(),
        element,
        initial: p0,
        steps: traj.len() - 1,
        wall_time_s: elapsed(&cfg, start),
        residual,
        trimmed_fraction: trimmed,
        tol,
        witness_threshold: threshold,
        verdict,
        witness: (verdict == Verdict::Fail).then_some(CovarianceWitness { residual, element: element_text }),
    };
    emit(&cfg, &to_json(&report), stdout)?;
    Ok(exit_for(verdict))
}

fn integrate_cmd(mut cfg: RunConfig, stdout: &mut dyn Write) -> Result<Exit, CliError> {
    let (t_end, dt) = span(&mut cfg)?;
    let law = law(&cfg)?;
    let p0 = initial_point(&cfg, law.particles())?;
    let traj = integrate(&law, &p0, (0.0, t_end), dt)?;
    emit(&cfg, &traj.to_csv(), stdout)?;
    Ok(Exit::Pass)
}

fn catalog_cmd(beta: Option<f64>, json: bool, stdout: &mut dyn Write) -> Result<Exit, CliError> {
    let entries: Vec<CatalogEntry> = CatalogKey::ALL
        .into_iter()
        .map(|key| {
            let built = if key.needs_beta() { beta.map(|b| catalog(key, Some(b))) } else { Some(catalog(key, None)) };
            let dim = match built {
                Some(Ok(s)) => Some(s.dim()),
                Some(Err(_)) => None,
                None => Some(key.symbolic_basis().len()),
            };
            CatalogEntry {
                key: key.as_str().to_string(),
                dim,
                kinematics: key.kinematics().to_string(),
                params: if key.needs_beta() { vec!["beta"] } else { vec![] },
                basis: key.symbolic_basis(),
            }
        })
        .collect();
    let text = if json {
        to_json(&entries)
    } else {
        let mut s = String::new();
        for e in &entries {
            let dim = e.dim.map_or("-".to_string(), |d| d.to_string());
            let params = if e.params.is_empty() { String::new() } else { format!(" [{}]", e.params.join(",")) };
            s.push_str(&format!(
                "{:<24} dim {:>2}  {:<9}{}  {{{}}}\n",
                e.key,
                dim,
                e.kinematics,
                params,
                e.basis.join(", ")
            ));
        }
        s
    };
    stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "standard output".into(), source })?;
    Ok(Exit::Pass)
}
