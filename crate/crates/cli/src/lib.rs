//! The `weylhull` command line. [`run`] parses arguments, dispatches, and
//! returns the process exit code: 0 on success, 1 on a runtime or
//! verification failure, 2 on a usage error.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::{CommandFactory, Parser};
use serde::Serialize;
use weylhull::absorption::{
    absorption_probability, absorption_probability_float, AbsorptionReport, RationalJson, WalkFamily, WalkKind,
};
use weylhull::arrangement::{
    count_regions_meeting_subspace, enumerate_regions, intersected_region_count, reflection_characteristic_polynomial,
    whitney_characteristic_polynomial, zaslavsky_region_count, Arrangement, CharacteristicPolynomial, MeetMode,
    ReflectionType, Subspace, WHITNEY_CAP,
};
use weylhull::asymptotics::{clt_table, fixed_dimension_table, large_deviation_table, LdPrefactor};
use weylhull::combinatorics::{row_truncated, Family};
use weylhull::conic::{
    crofton_mc_estimate, schlafli_expected_volumes, steiner_mc, steiner_tail_cdf, weyl_intrinsic_volumes, WeylChamber,
};
use weylhull::sampling::{stream_rng, DEFAULT_SEED};
use weylhull::scalar::ratio_to_f64;
use weylhull::simulate::{estimate_absorption, IncrementModel, SimulationReport};
use weylhull::verify::{run_suite, Suite, VerifyConfig};
use weylhull::{Error, ExactRational, ExactVolumes};

use args::*;
use report::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
enum Failure {
    /// Bad input; reported with the synopsis of the subcommand at `path`.
    Usage { msg: String, path: Vec<&'static str> },
    Runtime(String),
}

type CmdResult = Result<u8, Failure>;

fn usage(path: &[&'static str], msg: impl Into<String>) -> Failure {
    Failure::Usage { msg: msg.into(), path: path.to_vec() }
}

/// Input-shaped core errors are usage errors; the rest are runtime failures.
fn core_failure(path: &[&'static str], e: Error) -> Failure {
    match e {
        Error::InvalidArgument(_)
        | Error::ExactCapExceeded { .. }
        | Error::CapExceeded { .. }
        | Error::DegenerateBasis { .. }
        | Error::Parse { .. }
        | Error::EmptyInput
        | Error::NotBridgeable(_) => usage(path, e.to_string()),
        _ => Failure::Runtime(e.to_string()),
    }
}

/// Parses `argv` (program name first), runs the command, and writes its
/// output to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    // Output is buffered so the command can run inside a sized worker pool.
    let mut buf = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(usage(&[], "--threads must be at least 1")),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut buf)),
            Err(e) => Err(Failure::Runtime(format!("cannot start {t} worker threads: {e}"))),
        },
        None => dispatch(&cli, &mut buf),
    };
    if let Err(e) = out.write_all(&buf) {
        let _ = writeln!(err, "error: write failed: {e}");
        return EXIT_FAILURE;
    }
    match result {
        Ok(code) => code,
        Err(Failure::Usage { msg, path }) => {
            let mut cmd = Cli::command();
            cmd.build();
            let mut sub = &mut cmd;
            for name in &path {
                sub = sub.find_subcommand_mut(name).expect("known subcommand");
            }
            let _ = writeln!(err, "error: {msg}\n\n{}", sub.render_usage());
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> CmdResult {
    let fmt = cli.format;
    match &cli.command {
        Command::Exact(a) => exact(a, fmt, out),
        Command::Coeffs(a) => coeffs(a, fmt, out),
        Command::Simulate(a) => simulate(a, fmt, out),
        Command::Arrangement(c) => arrangement(c, fmt, out),
        Command::Cone(c) => cone(c, fmt, out),
        Command::Asympt(a) => asympt(a, fmt, out),
        Command::Verify(a) => verify(a, fmt, out),
    }
}

fn pick_format(path: &[&'static str], requested: Option<Format>, allowed: &[Format]) -> Result<Format, Failure> {
    match requested {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(usage(path, format!("--format {f:?} is not available here").to_lowercase())),
    }
}

fn config(command: &str, entries: &[(&str, String)]) -> RunConfig {
    let mut c = RunConfig::new();
    c.insert("command".into(), command.into());
    for (k, v) in entries {
        c.insert((*k).into(), v.clone());
    }
    c
}

fn header(cfg: &RunConfig) -> String {
    let mut s = String::from("# weylhull");
    for (k, v) in cfg {
        let _ = write!(s, " {k}={v}");
    }
    s.push('\n');
    s
}

fn write_out(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Runtime(format!("write failed: {e}")))?;
    Ok(EXIT_OK)
}

fn write_json<T: Serialize>(out: &mut dyn Write, config: RunConfig, result: T) -> CmdResult {
    let doc = Output { config, result };
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Runtime(e.to_string()))?;
    write_out(out, &(text + "\n"))
}

fn resolve_seed(path: &[&'static str], arg: &SeedArg) -> Result<u64, Failure> {
    match arg.seed.as_deref() {
        None => Ok(DEFAULT_SEED),
        Some("random") => Ok(rand::random()),
        Some(s) => {
            let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
                Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
                None => s.replace('_', "").parse(),
            };
            parsed.map_err(|_| usage(path, format!("invalid value `{s}` for --seed: expected an integer or `random`")))
        }
    }
}

fn read_file(path: &[&'static str], file: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(file).map_err(|e| usage(path, format!("cannot read {}: {e}", file.display())))
}

fn family_from(path: &[&'static str], a: &FamilyArgs) -> Result<WalkFamily, Failure> {
    let kind: WalkKind = a.family.parse().map_err(|e| core_failure(path, e))?;
    let steps = match (kind, a.steps.as_slice()) {
        (_, []) => return Err(usage(path, "--steps is required")),
        (WalkKind::Wendel, [r]) => vec![1; *r],
        (WalkKind::Wendel, _) => return Err(usage(path, "wendel takes a single --steps value, the number of walks")),
        (_, s) => s.to_vec(),
    };
    WalkFamily::new(kind, steps, a.dim).map_err(|e| core_failure(path, e))
}

fn family_config(f: &WalkFamily) -> Vec<(&'static str, String)> {
    let steps = f.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
    let steps = if f.kind == WalkKind::Wendel { f.steps.len().to_string() } else { steps };
    vec![("family", f.kind.to_string()), ("steps", steps), ("dim", f.d.to_string())]
}

fn rational_text(r: &RationalJson) -> String {
    format!("{}/{} ({})", r.num, r.den, r.float)
}

fn exact(a: &ExactArgs, fmt: Option<Format>, out: &mut dyn Write) -> CmdResult {
    const P: &[&str] = &["exact"];
    let format = pick_format(P, fmt, &[Format::Json, Format::Plain])?;
    let family = family_from(P, &a.family)?;
    let mut entries = family_config(&family);
    entries.push(("mode", if a.float { "float" } else { "exact" }.into()));
    let cfg = config("exact", &entries);
    if a.float {
        let p = absorption_probability_float(&family).map_err(|e| core_failure(P, e))?;
        let r = FloatReport {
            family: family.kind,
            n: family.n(),
            d: family.d,
            absorb: p.absorb,
            non_absorb: p.non_absorb,
            within_hypotheses: family.within_hypotheses(),
        };
        return match format {
            Format::Json => write_json(out, cfg, r),
            _ => write_out(out, &format!("{}absorb: {}\nnon_absorb: {}\n", header(&cfg), r.absorb, r.non_absorb)),
        };
    }
    let res = absorption_probability(&family).map_err(|e| core_failure(P, e))?;
    let r = AbsorptionReport::from(&res);
    match format {
        Format::Json => write_json(out, cfg, r),
        _ => write_out(
            out,
            &format!("{}absorb: {}\nnon_absorb: {}\n", header(&cfg), rational_text(&r.absorb), rational_text(&r.non_absorb)),
        ),
    }
}

fn coeffs(a: &CoeffsArgs, fmt: Option<Format>, out: &mut dyn Write) -> CmdResult {
    const P: &[&str] = &["coeffs"];
    let format = pick_format(P, fmt, &[Format::Json, Format::Plain])?;
    let (family, name) = match a.family {
        RowFamily::Stirling => (Family::Stirling, "stirling"),
        RowFamily::B => (Family::B, "b"),
        RowFamily::D => (Family::D, "d"),
    };
    let max_degree = a.max_degree.unwrap_or(a.n).min(a.n);
    let row = row_truncated(family, a.n, max_degree).map_err(|e| core_failure(P, e))?;
    let cfg = config("coeffs", &[("family", name.into()), ("n", a.n.to_string()), ("max_degree", max_degree.to_string())]);
    let r = CoeffsReport {
        family: name.into(),
        n: a.n,
        coefficients: row.decimal_strings(),
        total: family.row_total(a.n).to_string(),
    };
    match format {
        Format::Json => write_json(out, cfg, r),
        _ => write_out(out, &format!("{}{}\n", header(&cfg), r.coefficients.join(" "))),
    }
}

fn simulate(a: &SimulateArgs, fmt: Option<Format>, out: &mut dyn Write) -> CmdResult {
    const P: &[&str] = &["simulate"];
    let format = pick_format(P, fmt, &[Format::Csv, Format::Json])?;
    let family = family_from(P, &a.family)?;
    let seed = resolve_seed(P, &a.seed)?;
    let model = match (a.model.as_str(), &a.matrix_file) {
        ("matrix", Some(file)) => IncrementModel::parse_matrix(&read_file(P, file)?).map_err(|e| core_failure(P, e))?,
        ("matrix", None) => return Err(usage(P, "--model matrix needs --matrix-file")),
        (_, Some(_)) => return Err(usage(P, "--matrix-file only applies to --model matrix")),
        (name, None) => IncrementModel::from_name(name, family.d).map_err(|e| core_failure(P, e))?,
    };
    let estimate = estimate_absorption(&model, &family, a.samples, seed, a.tol).map_err(|e| core_failure(P, e))?;
    let exact = absorption_probability_float(&family).map_err(|e| core_failure(P, e))?.absorb;
    let mut entries = family_config(&family);
    entries.extend([
        ("model", model.name().to_string()),
        ("samples", a.samples.to_string()),
        ("seed", seed.to_string()),
        ("tol", format!("{:e}", a.tol)),
    ]);
    if let Some(file) = &a.matrix_file {
        entries.push(("matrix_file", file.display().to_string()));
    }
    let cfg = config("simulate", &entries);
    let r = SimulationReport {
        family: family.kind,
        n: family.n(),
        d: family.d,
        model: model.name().into(),
        z_score: estimate.z_score(exact),
        estimate,
        exact,
    };
    match format {
        Format::Json => write_json(out, cfg, r),
        _ => write_out(out, &format!("{}{}\n{}\n", header(&cfg), SimulationReport::CSV_HEADER, r.csv_row())),
    }
}

fn parse_reflection(path: &[&'static str], label: &str) -> Result<(ReflectionType, usize), Failure> {
    let bad = || usage(path, format!("invalid value `{label}` for --reflection: expected a type and rank such as B3"));
    let kind: ReflectionType = label.get(..1).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let n: usize = label[1..].parse().map_err(|_| bad())?;
    Ok((kind, n))
}

/// The arrangement, its characteristic polynomial, and a description for the header.
fn load_arrangement(
    path: &[&'static str],
    src: &ArrangementSource,
) -> Result<(Arrangement, CharacteristicPolynomial, (&'static str, String)), Failure> {
    let ce = |e| core_failure(path, e);
    match (&src.file, &src.reflection) {
        (Some(file), None) => {
            let arr = Arrangement::parse(&read_file(path, file)?).map_err(ce)?;
            if arr.len() > WHITNEY_CAP {
                return Err(usage(path, format!("{} hyperplanes exceed the cap of {WHITNEY_CAP}", arr.len())));
            }
            let chi = whitney_characteristic_polynomial(&arr).map_err(ce)?;
            Ok((arr, chi, ("file", file.display().to_string())))
        }
        (None, Some(label)) => {
            let (kind, n) = parse_reflection(path, label)?;
            let arr = Arrangement::reflection(kind, n).map_err(ce)?;
            let chi = reflection_characteristic_polynomial(kind, n).map_err(ce)?;
            Ok((arr, chi, ("reflection", format!("{kind:?}{n}"))))
        }
        _ => Err(usage(path, "give exactly one of --file and --reflection")),
    }
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn arrangement(c: &ArrangementCommand, fmt: Option<Format>, out: &mut dyn Write) -> CmdResult {
    match c {
        ArrangementCommand::Charpoly(src) => {
            const P: &[&str] = &["arrangement", "charpoly"];
            let format = pick_format(P, fmt, &[Format::Plain, Format::Json])?;
            let (arr, chi, source) = load_arrangement(P, src)?;
            let cfg = config("arrangement charpoly", &[source]);
            let r = CharpolyReport {
                dim: arr.dim(),
                hyperplanes: arr.len(),
                a: strings(chi.coefficients()),
                regions: zaslavsky_region_count(&chi).to_string(),
            };
            match format {
                Format::Json => write_json(out, cfg, r),
                _ => write_out(out, &format!("{}a: [{}]\nregions: {}\n", header(&cfg), r.a.join(", "), r.regions)),
            }
        }
        ArrangementCommand::Regions { source, list } => {
            const P: &[&str] = &["arrangement", "regions"];
            let format = pick_format(P, fmt, &[Format::Plain, Format::Json])?;
            let (arr, chi, src) = load_arrangement(P, source)?;
            let regions = enumerate_regions(&arr).map_err(|e| core_failure(P, e))?;
            let cfg = config("arrangement regions", &[src, ("list", list.to_string())]);
            let signs = |s: &Vec<bool>| s.iter().map(|&b| if b { '+' } else { '-' }).collect::<String>();
            let r = RegionsReport {
                dim: arr.dim(),
                hyperplanes: arr.len(),
                regions: regions.len(),
                zaslavsky: zaslavsky_region_count(&chi).to_string(),
                sign_vectors: list.then(|| regions.iter().map(signs).collect()),
            };
            match format {
                Format::Json => write_json(out, cfg, r),
                _ => {
                    let mut s = format!("{}regions: {}\nzaslavsky: {}\n", header(&cfg), r.regions, r.zaslavsky);
                    for v in r.sign_vectors.iter().flatten() {
                        s.push_str(v);
                        s.push('\n');
                    }
                    write_out(out, &s)
                }
            }
        }
        ArrangementCommand::Intersect { source, codim, basis, mode, seed } => {
            const P: &[&str] = &["arrangement", "intersect"];
            let format = pick_format(P, fmt, &[Format::Plain, Format::Json])?;
            let (arr, chi, src) = load_arrangement(P, source)?;
            let n = arr.dim();
            let mut entries = vec![src, ("mode", format!("{mode:?}").to_lowercase())];
            let l = match (codim, basis) {
                (Some(d), None) => {
                    if *d == 0 || *d >= n {
                        return Err(usage(P, format!("--codim must lie in 1..={}", n.saturating_sub(1))));
                    }
                    let seed = resolve_seed(P, seed)?;
                    entries.extend([("codim", d.to_string()), ("seed", seed.to_string())]);
                    Subspace::random_gaussian(&mut stream_rng(seed, 0), n, n - d).map_err(|e| core_failure(P, e))?
                }
                (None, Some(text)) => {
                    let rows = parse_basis(text).ok_or_else(|| usage(P, format!("invalid value `{text}` for --basis")))?;
                    entries.push(("basis", text.clone()));
                    Subspace::from_i64(n, &rows).map_err(|e| core_failure(P, e))?
                }
                _ => return Err(usage(P, "give exactly one of --codim and --basis")),
            };
            let meet = match mode {
                Mode::Open => MeetMode::Open,
                Mode::Closed => MeetMode::Closed,
            };
            let count = count_regions_meeting_subspace(&arr, &l, meet).map_err(|e| core_failure(P, e))?;
            let predicted = intersected_region_count(&chi, l.codim()).map_err(|e| core_failure(P, e))?;
            let cfg = config("arrangement intersect", &entries);
            let r = IntersectReport {
                dim: n,
                codim: l.codim(),
                mode: format!("{mode:?}").to_lowercase(),
                count: count.count,
                predicted: predicted.to_string(),
                general_position: count.general_position,
                basis: l.basis().iter().map(|b| strings(b)).collect(),
            };
            match format {
                Format::Json => write_json(out, cfg, r),
                _ => write_out(
                    out,
                    &format!(
                        "{}count: {}\npredicted: {}\ngeneral_position: {}\n",
                        header(&cfg),
                        r.count,
                        r.predicted,
                        r.general_position
                    ),
                ),
            }
        }
    }
}

fn parse_basis(text: &str) -> Option<Vec<Vec<i64>>> {
    text.split(';')
        .map(|row| row.split(',').map(|x| x.trim().parse().ok()).collect::<Option<Vec<i64>>>())
        .collect()
}

fn group(kind: GroupType) -> ReflectionType {
    match kind {
        GroupType::A => ReflectionType::A,
        GroupType::B => ReflectionType::B,
        GroupType::D => ReflectionType::D,
    }
}

fn volumes_report(cone: String, v: &ExactVolumes) -> VolumesReport {
    let half = |k: usize| v.half_tail(k).map(|h| h.value).unwrap_or_else(|_| ExactRational::from_integer(0.into()));
    VolumesReport {
        cone,
        n: v.n,
        volumes: v.v.iter().map(RationalJson::from).collect(),
        sum: (&v.sum()).into(),
        half_tails: vec![(&half(0)).into(), (&half(1)).into()],
    }
}

fn cone(c: &ConeCommand, fmt: Option<Format>, out: &mut dyn Write) -> CmdResult {
    match c {
        ConeCommand::Volumes { kind, n, halfspaces } => {
            const P: &[&str] = &["cone", "volumes"];
            let format = pick_format(P, fmt, &[Format::Json, Format::Plain])?;
            let (name, v) = match (kind, halfspaces) {
                (Some(k), None) => {
                    let kind = group(*k);
                    (format!("{kind:?}{n}"), weyl_intrinsic_volumes::<ExactRational>(kind, *n))
                }
                (None, Some(m)) => (format!("random-{m}-halfspaces"), schlafli_expected_volumes(*m, *n)),
                _ => return Err(usage(P, "give exactly one of --type and --halfspaces")),
            };
            let v = v.map_err(|e| core_failure(P, e))?;
            let cfg = config("cone volumes", &[("cone", name.clone()), ("n", n.to_string())]);
            let r = volumes_report(name, &v);
            match format {
                Format::Json => write_json(out, cfg, r),
                _ => {
                    let mut s = header(&cfg);
                    for (k, x) in r.volumes.iter().enumerate() {
                        let _ = writeln!(s, "v_{k}: {}", rational_text(x));
                    }
                    write_out(out, &s)
                }
            }
        }
        ConeCommand::Steiner { chamber, samples, seed, lambda } => {
            const P: &[&str] = &["cone", "steiner"];
            let format = pick_format(P, fmt, &[Format::Json, Format::Plain])?;
            let seed = resolve_seed(P, seed)?;
            let kind = group(chamber.kind);
            let ch = WeylChamber::new(kind, chamber.n).map_err(|e| core_failure(P, e))?;
            let check = steiner_mc(&ch, *samples, seed).map_err(|e| core_failure(P, e))?;
            let v = weyl_intrinsic_volumes::<f64>(kind, chamber.n).map_err(|e| core_failure(P, e))?;
            let cdf = lambda
                .iter()
                .map(|&l| steiner_tail_cdf(&v, l).map(|value| CdfPoint { lambda: l, value }))
                .collect::<weylhull::Result<Vec<_>>>()
                .map_err(|e| core_failure(P, e))?;
            let mut entries = vec![
                ("type", format!("{kind:?}")),
                ("n", chamber.n.to_string()),
                ("samples", samples.to_string()),
                ("seed", seed.to_string()),
            ];
            if !lambda.is_empty() {
                entries.push(("lambda", strings(lambda).join(",")));
            }
            let cfg = config("cone steiner", &entries);
            let r = SteinerReport { check, cdf };
            match format {
                Format::Json => write_json(out, cfg, r),
                _ => {
                    let mut s = format!("{}ks_distance: {}\n", header(&cfg), r.check.ks_distance);
                    for p in &r.cdf {
                        let _ = writeln!(s, "cdf({}): {}", p.lambda, p.value);
                    }
                    write_out(out, &s)
                }
            }
        }
        ConeCommand::Crofton { chamber, codim, samples, seed } => {
            const P: &[&str] = &["cone", "crofton"];
            let format = pick_format(P, fmt, &[Format::Json, Format::Plain])?;
            let seed = resolve_seed(P, seed)?;
            let kind = group(chamber.kind);
            let ch = WeylChamber::new(kind, chamber.n).map_err(|e| core_failure(P, e))?;
            let estimate = crofton_mc_estimate(&ch, *codim, *samples, seed).map_err(|e| core_failure(P, e))?;
            let v = weyl_intrinsic_volumes::<ExactRational>(kind, chamber.n).map_err(|e| core_failure(P, e))?;
            let exact = v.half_tail(codim + 1).map_err(|e| core_failure(P, e))?.value;
            let cfg = config(
                "cone crofton",
                &[
                    ("type", format!("{kind:?}")),
                    ("n", chamber.n.to_string()),
                    ("codim", codim.to_string()),
                    ("samples", samples.to_string()),
                    ("seed", seed.to_string()),
                ],
            );
            let r = CroftonReport {
                kind,
                n: chamber.n,
                codim: *codim,
                z_score: estimate.z_score(ratio_to_f64(&exact)),
                estimate,
                exact: (&exact).into(),
            };
            match format {
                Format::Json => write_json(out, cfg, r),
                _ => write_out(
                    out,
                    &format!(
                        "{}estimate: {} (stderr {})\nexact: {}\nz_score: {}\n",
                        header(&cfg),
                        r.estimate.p_hat,
                        r.estimate.stderr,
                        rational_text(&r.exact),
                        r.z_score
                    ),
                ),
            }
        }
    }
}

fn asympt(a: &AsymptArgs, fmt: Option<Format>, out: &mut dyn Write) -> CmdResult {
    const P: &[&str] = &["asympt"];
    let format = pick_format(P, fmt, &[Format::Csv, Format::Json])?;
    let kind = group(a.kind);
    let (regime, param) = match a.regime {
        Regime::Fixed => ("fixed", ("dim", a.dim.to_string())),
        Regime::Clt => ("clt", ("a", a.a.to_string())),
        Regime::Ld => ("ld", ("x", a.x.to_string())),
    };
    let prefactor = match a.prefactor {
        Prefactor::Corrected => LdPrefactor::Corrected,
        Prefactor::AsPrinted => LdPrefactor::AsPrinted,
    };
    let rows = match a.regime {
        Regime::Fixed => fixed_dimension_table(kind, a.dim, &a.ns),
        Regime::Clt => clt_table(kind, a.a, &a.ns),
        Regime::Ld => large_deviation_table(kind, a.x, &a.ns, prefactor),
    }
    .map_err(|e| core_failure(P, e))?;
    let mut entries = vec![("regime", regime.to_string()), ("type", format!("{kind:?}")), param, ("ns", strings(&a.ns).join(","))];
    if a.regime == Regime::Ld {
        entries.push(("prefactor", format!("{:?}", a.prefactor).to_lowercase()));
    }
    let cfg = config("asympt", &entries);
    match format {
        Format::Json => write_json(out, cfg, AsymptReport { regime: regime.into(), kind, rows }),
        _ => {
            let mut s = header(&cfg) + "n,d,exact,asymptotic,ratio\n";
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.n, r.d, r.exact, r.asymptotic, r.ratio);
            }
            write_out(out, &s)
        }
    }
}

fn verify(a: &VerifyArgs, fmt: Option<Format>, out: &mut dyn Write) -> CmdResult {
    const P: &[&str] = &["verify"];
    let format = pick_format(P, fmt, &[Format::Plain, Format::Json])?;
    let suite: Suite = a.suite.parse().map_err(|e| core_failure(P, e))?;
    let cfg = VerifyConfig { samples: a.samples, seed: resolve_seed(P, &a.seed)? };
    let report = run_suite(suite, &cfg);
    let run_cfg =
        config("verify", &[("suite", suite.to_string()), ("samples", cfg.samples.to_string()), ("seed", cfg.seed.to_string())]);
    let passed = report.passed();
    match format {
        Format::Json => write_json(out, run_cfg, &report)?,
        _ => {
            let mut s = header(&run_cfg);
            for c in &report.checks {
                let _ = writeln!(s, "{c}");
            }
            let failed = report.failures().count();
            let _ = writeln!(s, "verify {suite}: {} checks, {failed} failed", report.checks.len());
            write_out(out, &s)?
        }
    };
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}
