//! Run configuration, snapshots and run manifests.
//!
//! Configuration files are plain `key = value` lines; `#` starts a
//! comment. Command-line overrides use the same `key=value` syntax and
//! take precedence over the file. Unknown keys are rejected.
//!
//! Snapshots hold cell-grid data in CSV (header `x,y,field…`, every value
//! with 17 significant digits) or legacy ASCII VTK `STRUCTURED_POINTS`.
//! CSV snapshots include the conserved averages, so reloading one
//! reproduces the averages bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::coe::{CoeParams, DEFAULT_C0};
use crate::error::{Error, Result};
use crate::indicator::IndicatorMode;
use crate::mesh::{DofField, Mesh};
use crate::problems::ProblemSpec;
use crate::scheme::{Diagnostics, SchemeOptions, Solver, StepLog, ThetaUpdate, PP_CFL_LIMIT};
use crate::state::{ConservedState, GasParams, Primitive, QForm};

/// Keys accepted in configuration files and overrides.
pub const KEYS: &[&str] = &[
    "problem",
    "nx",
    "ny",
    "cfl",
    "t_end",
    "gamma",
    "rho_ref",
    "c0",
    "q_form",
    "ddf",
    "pp",
    "coe",
    "indicator",
    "delta",
    "theta_update",
    "quad_points",
    "max_steps",
    "output_times",
    "output_fields",
    "output_formats",
    "output_dir",
];

/// Cell-grid quantities that can be written to a snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SnapshotField {
    Rho,
    Velocity,
    Magnetic,
    Pressure,
    Mach,
    MagneticPressure,
    Troubled,
    ThetaOe,
    DivB,
}

impl SnapshotField {
    pub const ALL: [SnapshotField; 9] = [
        SnapshotField::Rho,
        SnapshotField::Velocity,
        SnapshotField::Magnetic,
        SnapshotField::Pressure,
        SnapshotField::Mach,
        SnapshotField::MagneticPressure,
        SnapshotField::Troubled,
        SnapshotField::ThetaOe,
        SnapshotField::DivB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SnapshotField::Rho => "rho",
            SnapshotField::Velocity => "v",
            SnapshotField::Magnetic => "B",
            SnapshotField::Pressure => "p",
            SnapshotField::Mach => "mach",
            SnapshotField::MagneticPressure => "pmag",
            SnapshotField::Troubled => "troubled",
            SnapshotField::ThetaOe => "theta_oe",
            SnapshotField::DivB => "divb",
        }
    }

    fn is_vector(self) -> bool {
        matches!(self, SnapshotField::Velocity | SnapshotField::Magnetic)
    }
}

impl std::str::FromStr for SnapshotField {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SnapshotField::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::Config(format!("unknown snapshot field '{s}'")))
    }
}

/// Snapshot file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Vtk,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "vtk" => Ok(Format::Vtk),
            _ => Err(Error::Config(format!("unknown output format '{s}', expected csv or vtk"))),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub nx: usize,
    pub ny: usize,
    pub t_end: f64,
    pub q_form: QForm,
    pub opts: SchemeOptions,
    pub max_steps: Option<usize>,
    pub output_times: Vec<f64>,
    pub output_fields: Vec<SnapshotField>,
    pub output_formats: Vec<Format>,
    pub output_dir: String,
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got '{v}'"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn parse_list<T>(v: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

/// Parse `key = value` lines into a map, rejecting unknown and repeated
/// keys.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_pair(line).map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        if out.insert(k.clone(), v).is_some() {
            return Err(Error::Config(format!("line {}: key '{k}' given twice", n + 1)));
        }
    }
    Ok(out)
}

fn split_pair(s: &str) -> Result<(String, String)> {
    let (k, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got '{s}'")))?;
    let (k, v) = (k.trim(), v.trim());
    if !KEYS.contains(&k) {
        return Err(Error::Config(format!("unknown key '{k}'")));
    }
    Ok((k.to_string(), v.to_string()))
}

impl RunConfig {
    /// Resolve a configuration from file text plus `key=value` overrides.
    pub fn parse(text: &str, overrides: &[String]) -> Result<RunConfig> {
        let mut map = parse_pairs(text)?;
        for o in overrides {
            let (k, v) = split_pair(o)?;
            map.insert(k, v);
        }
        RunConfig::from_map(&map)
    }

    pub fn from_map(map: &BTreeMap<String, String>) -> Result<RunConfig> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let name = get("problem").ok_or_else(|| Error::Config("missing required key 'problem'".into()))?;
        let mut problem = ProblemSpec::by_name(name)?;
        if let Some(v) = get("gamma") {
            problem.gamma = parse_num("gamma", v)?;
        }
        if let Some(v) = get("rho_ref") {
            problem.rho_ref = parse_num("rho_ref", v)?;
        }
        let (dnx, dny) = problem.default_mesh;
        let nx = get("nx").map_or(Ok(dnx), |v| parse_num("nx", v))?;
        let ny = get("ny").map_or(Ok(if get("nx").is_some() && dnx == dny { nx } else { dny }), |v| parse_num("ny", v))?;
        let t_end = get("t_end").map_or(Ok(problem.t_end), |v| parse_num("t_end", v))?;
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
        }
        let q_form = get("q_form").map_or(Ok(QForm::Softplus), str::parse)?;
        let mut opts = SchemeOptions::default();
        if let Some(v) = get("cfl") {
            opts.cfl = parse_num("cfl", v)?;
            if opts.cfl >= PP_CFL_LIMIT {
                return Err(Error::Config(format!("cfl = {} violates the positivity bound cfl < 1/6", opts.cfl)));
            }
        }
        for (k, slot) in [("ddf", &mut opts.ddf), ("pp", &mut opts.pp), ("coe", &mut opts.coe)] {
            if let Some(v) = get(k) {
                *slot = parse_bool(k, v)?;
            }
        }
        if let Some(v) = get("indicator") {
            opts.indicator = v.parse::<IndicatorMode>()?;
        }
        if let Some(v) = get("delta") {
            opts.delta = parse_num("delta", v)?;
        }
        opts.coe_params = CoeParams {
            c0: get("c0").map_or(Ok(DEFAULT_C0), |v| parse_num("c0", v))?,
            quad_points: get("quad_points").map_or(Ok(opts.coe_params.quad_points), |v| parse_num("quad_points", v))?,
        };
        if let Some(v) = get("theta_update") {
            opts.theta_update = match v {
                "every_stage" => ThetaUpdate::EveryStage,
                "once_per_step" => ThetaUpdate::OncePerStep,
                _ => return Err(Error::Config(format!("theta_update: expected every_stage or once_per_step, got '{v}'"))),
            };
        }
        opts.validate()?;
        let max_steps = get("max_steps").map(|v| parse_num("max_steps", v)).transpose()?;
        let mut output_times = get("output_times").map_or(Ok(Vec::new()), |v| parse_list(v, |s| parse_num("output_times", s)))?;
        if output_times.iter().any(|&t: &f64| !(0.0..=t_end).contains(&t)) {
            return Err(Error::Config(format!("output_times must lie in [0, t_end = {t_end}]")));
        }
        output_times.sort_by(f64::total_cmp);
        let output_fields = get("output_fields").map_or(Ok(SnapshotField::ALL.to_vec()), |v| parse_list(v, str::parse))?;
        let output_formats = get("output_formats").map_or(Ok(vec![Format::Csv]), |v| parse_list(v, str::parse))?;
        let output_dir = get("output_dir").unwrap_or("out").to_string();
        let cfg = RunConfig { problem, nx, ny, t_end, q_form, opts, max_steps, output_times, output_fields, output_formats, output_dir };
        cfg.mesh()?;
        cfg.gas()?;
        Ok(cfg)
    }

    pub fn mesh(&self) -> Result<Mesh> {
        self.problem.mesh(self.nx, self.ny)
    }

    pub fn gas(&self) -> Result<GasParams> {
        self.problem.gas(self.q_form)
    }

    /// Every key with its resolved value, in the input syntax.
    pub fn echo(&self) -> String {
        let o = &self.opts;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("problem", self.problem.name.clone());
        kv("nx", self.nx.to_string());
        kv("ny", self.ny.to_string());
        kv("cfl", format!("{:?}", o.cfl));
        kv("t_end", format!("{:?}", self.t_end));
        kv("gamma", format!("{:?}", self.problem.gamma));
        kv("rho_ref", format!("{:?}", self.problem.rho_ref));
        kv("c0", format!("{:?}", o.coe_params.c0));
        kv("quad_points", o.coe_params.quad_points.to_string());
        kv(
            "q_form",
            match self.q_form {
                QForm::Softplus => "softplus".into(),
                QForm::Rational => "rational".into(),
            },
        );
        kv("ddf", o.ddf.to_string());
        kv("pp", o.pp.to_string());
        kv("coe", o.coe.to_string());
        kv(
            "indicator",
            match o.indicator {
                IndicatorMode::TwoSpeed => "two".into(),
                IndicatorMode::ThreeSpeed => "three".into(),
                IndicatorMode::Off => "off".into(),
            },
        );
        kv("delta", format!("{:?}", o.delta));
        kv(
            "theta_update",
            match o.theta_update {
                ThetaUpdate::EveryStage => "every_stage".into(),
                ThetaUpdate::OncePerStep => "once_per_step".into(),
            },
        );
        if let Some(m) = self.max_steps {
            kv("max_steps", m.to_string());
        }
        kv("output_times", self.output_times.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>().join(","));
        kv("output_fields", self.output_fields.iter().map(|f| f.name()).collect::<Vec<_>>().join(","));
        kv(
            "output_formats",
            self.output_formats
                .iter()
                .map(|f| match f {
                    Format::Csv => "csv",
                    Format::Vtk => "vtk",
                })
                .collect::<Vec<_>>()
                .join(","),
        );
        kv("output_dir", self.output_dir.clone());
        s
    }

    /// Warnings for ablation settings that void the positivity guarantee
    /// or change the scheme.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.opts.ddf {
            w.push("WARNING: DDF projection disabled (ablation mode); the discrete divergence-free property does not hold".into());
        }
        if !self.opts.pp {
            w.push("WARNING: positivity limiter disabled (ablation mode); positivity is NOT guaranteed".into());
        }
        if !self.opts.coe {
            w.push("WARNING: COE disabled (ablation mode); oscillations near shocks are not damped".into());
        }
        w
    }
}

/// Per-cell derived quantities in the order of `fields`, vectors
/// expanded into three components.
fn cell_values(u: &ConservedState, k: usize, g: &GasParams, diag: Option<&Diagnostics>, fields: &[SnapshotField]) -> Vec<f64> {
    let p = Primitive::from_conserved(u, g.gamma);
    let mut out = Vec::new();
    for f in fields {
        match f {
            SnapshotField::Rho => out.push(p.rho),
            SnapshotField::Velocity => out.extend_from_slice(&p.v),
            SnapshotField::Magnetic => out.extend_from_slice(&p.b),
            SnapshotField::Pressure => out.push(p.p),
            SnapshotField::Mach => {
                let v = (p.v[0] * p.v[0] + p.v[1] * p.v[1] + p.v[2] * p.v[2]).sqrt();
                out.push(v / (g.gamma * p.p / p.rho).sqrt());
            }
            SnapshotField::MagneticPressure => out.push(u.magnetic_energy()),
            SnapshotField::Troubled => out.push(diag.map_or(f64::NAN, |d| if d.mask.flags[k] { 1.0 } else { 0.0 })),
            SnapshotField::ThetaOe => out.push(diag.map_or(f64::NAN, |d| d.theta_oe[k])),
            SnapshotField::DivB => out.push(diag.map_or(f64::NAN, |d| d.divergence[k])),
        }
    }
    out
}

fn column_names(fields: &[SnapshotField]) -> Vec<String> {
    let mut out = Vec::new();
    for f in fields {
        if f.is_vector() {
            for c in 1..=3 {
                out.push(format!("{}{c}", f.name()));
            }
        } else {
            out.push(f.name().to_string());
        }
    }
    out
}

/// Conserved columns always present in CSV snapshots.
pub const CONSERVED_COLUMNS: [&str; 8] = ["avg_rho", "avg_m1", "avg_m2", "avg_m3", "avg_B1", "avg_B2", "avg_B3", "avg_E"];

/// CSV snapshot text: `x,y`, the conserved averages, then `fields`.
pub fn snapshot_csv(field: &DofField, mesh: &Mesh, g: &GasParams, diag: Option<&Diagnostics>, fields: &[SnapshotField]) -> String {
    let mut s = String::from("x,y");
    for c in CONSERVED_COLUMNS.iter().map(|c| c.to_string()).chain(column_names(fields)) {
        s.push(',');
        s.push_str(&c);
    }
    s.push('\n');
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            let k = j * mesh.nx + i;
            let (x, y) = mesh.cell_center(i, j);
            let u = field.avg[k];
            let _ = write!(s, "{x:.16e},{y:.16e}");
            for v in u.0.iter().chain(cell_values(&u, k, g, diag, fields).iter()) {
                let _ = write!(s, ",{v:.16e}");
            }
            s.push('\n');
        }
    }
    s
}

/// Cell averages from a CSV snapshot written by [`snapshot_csv`].
pub fn read_csv_averages(text: &str, mesh: &Mesh) -> Result<Vec<ConservedState>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| Error::Config("empty snapshot".into()))?.split(',').collect();
    let cols: Vec<usize> = CONSERVED_COLUMNS
        .iter()
        .map(|c| header.iter().position(|h| h == c).ok_or_else(|| Error::Config(format!("snapshot lacks column {c}"))))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(mesh.nx * mesh.ny);
    for (n, line) in lines.enumerate() {
        let vals: Vec<&str> = line.split(',').collect();
        let mut u = ConservedState::ZERO;
        for (slot, &c) in cols.iter().enumerate() {
            let v = vals.get(c).ok_or_else(|| Error::Config(format!("row {}: missing column {c}", n + 1)))?;
            u[slot] = parse_num(CONSERVED_COLUMNS[slot], v)?;
        }
        out.push(u);
    }
    if out.len() != mesh.nx * mesh.ny {
        return Err(Error::Config(format!("snapshot has {} rows, mesh has {} cells", out.len(), mesh.nx * mesh.ny)));
    }
    Ok(out)
}

/// Legacy ASCII VTK `STRUCTURED_POINTS` snapshot on cell centers.
pub fn snapshot_vtk(
    field: &DofField,
    mesh: &Mesh,
    g: &GasParams,
    diag: Option<&Diagnostics>,
    fields: &[SnapshotField],
    title: &str,
) -> String {
    let (nx, ny) = (mesh.nx, mesh.ny);
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "{}", title.replace('\n', " "));
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {nx} {ny} 1");
    let (x0, y0) = mesh.cell_center(0, 0);
    let _ = writeln!(s, "ORIGIN {x0:.16e} {y0:.16e} 0");
    let _ = writeln!(s, "SPACING {:.16e} {:.16e} 1", mesh.dx, mesh.dy);
    let _ = writeln!(s, "POINT_DATA {}", nx * ny);
    let rows: Vec<Vec<f64>> = (0..nx * ny).map(|k| cell_values(&field.avg[k], k, g, diag, fields)).collect();
    let mut col = 0;
    for f in fields {
        if f.is_vector() {
            let _ = writeln!(s, "VECTORS {} double", f.name());
            for r in &rows {
                let _ = writeln!(s, "{:.16e} {:.16e} {:.16e}", r[col], r[col + 1], r[col + 2]);
            }
            col += 3;
        } else {
            let _ = writeln!(s, "SCALARS {} double 1", f.name());
            let _ = writeln!(s, "LOOKUP_TABLE default");
            for r in &rows {
                let _ = writeln!(s, "{:.16e}", r[col]);
            }
            col += 1;
        }
    }
    s
}

/// Write one snapshot per requested format into `dir` as
/// `<stem>.csv` / `<stem>.vtk`. Returns the written paths.
#[allow(clippy::too_many_arguments)]
pub fn write_snapshot(
    dir: &Path,
    stem: &str,
    field: &DofField,
    mesh: &Mesh,
    g: &GasParams,
    diag: Option<&Diagnostics>,
    fields: &[SnapshotField],
    formats: &[Format],
) -> Result<Vec<std::path::PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for f in formats {
        let (path, text) = match f {
            Format::Csv => (dir.join(format!("{stem}.csv")), snapshot_csv(field, mesh, g, diag, fields)),
            Format::Vtk => (dir.join(format!("{stem}.vtk")), snapshot_vtk(field, mesh, g, diag, fields, stem)),
        };
        fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Run manifest: the configuration echo, warnings, and the step log as
/// CSV after a `# steps` marker.
pub fn manifest(cfg: &RunConfig, logs: &[StepLog], status: &str) -> String {
    let mut s = String::from("# run configuration\n");
    s.push_str(&cfg.echo());
    for w in cfg.warnings() {
        let _ = writeln!(s, "# {w}");
    }
    let _ = writeln!(s, "# status: {status}");
    s.push_str("# steps\n");
    s.push_str(StepLog::HEADER);
    s.push('\n');
    for l in logs {
        s.push_str(&l.csv_line());
        s.push('\n');
    }
    s
}

/// Outcome of [`execute`].
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub steps: usize,
    pub t: f64,
    pub snapshots: Vec<std::path::PathBuf>,
    pub manifest: std::path::PathBuf,
}

/// Run a configuration to its end time, writing snapshots at the
/// requested times (and at the end) plus a manifest into the output
/// directory. A failed step still writes the manifest, with the error as
/// its status, before the error is returned.
pub fn execute(cfg: &RunConfig, mut progress: impl FnMut(&StepLog)) -> Result<RunSummary> {
    let mesh = cfg.mesh()?;
    let g = cfg.gas()?;
    let field = cfg.problem.init_field(&mesh, &g)?;
    let mut solver = Solver::new(mesh.clone(), g, cfg.opts, field)?;
    let dir = Path::new(&cfg.output_dir);
    fs::create_dir_all(dir)?;
    let manifest_path = dir.join(format!("{}_manifest.txt", cfg.problem.name));
    let mut logs = Vec::new();
    let mut snapshots = Vec::new();
    let mut targets = cfg.output_times.clone();
    if targets.last().is_none_or(|&t| t < cfg.t_end) {
        targets.push(cfg.t_end);
    }
    let snap = |solver: &Solver, snapshots: &mut Vec<_>| -> Result<()> {
        let diag = solver.diagnostics(solver.stable_dt()?)?;
        let stem = format!("{}_t{:.6e}", cfg.problem.name, solver.t);
        snapshots.extend(write_snapshot(dir, &stem, &solver.field, &mesh, &g, Some(&diag), &cfg.output_fields, &cfg.output_formats)?);
        Ok(())
    };
    let mut status = Ok(());
    for t in targets {
        let remaining = cfg.max_steps.map(|m| m.saturating_sub(logs.len()));
        if remaining == Some(0) {
            break;
        }
        match solver.run_until(t, remaining, |_, l| progress(l)) {
            Ok(mut l) => logs.append(&mut l),
            Err(e) => {
                status = Err(e);
                break;
            }
        }
        if let Err(e) = snap(&solver, &mut snapshots) {
            status = Err(e);
            break;
        }
    }
    let text = match &status {
        Ok(()) => manifest(cfg, &logs, "ok"),
        Err(e) => manifest(cfg, &logs, &format!("aborted at t = {:e}: {e}", solver.t)),
    };
    fs::write(&manifest_path, text)?;
    status?;
    Ok(RunSummary { steps: logs.len(), t: solver.t, snapshots, manifest: manifest_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<RunConfig> {
        RunConfig::parse(text, &[])
    }

    #[test]
    fn orszag_tang_paper_mesh_is_valid() {
        let c = cfg("problem = orszag_tang\nnx = 400\nny = 400\nt_end = 3\n").unwrap();
        assert_eq!((c.nx, c.ny, c.t_end), (400, 400, 3.0));
        assert_eq!(c.opts.cfl, 0.1);
        assert_eq!(c.opts.coe_params.c0, 43.0);
    }

    #[test]
    fn cfl_at_or_above_one_sixth_is_rejected() {
        assert!(matches!(cfg("problem = blast1\ncfl = 0.2"), Err(Error::Config(_))));
        assert!(cfg("problem = blast1\ncfl = 0.16").is_ok());
    }

    #[test]
    fn unknown_missing_and_repeated_keys_are_rejected() {
        assert!(matches!(cfg("problem = rotor\nresolution = 3"), Err(Error::Config(_))));
        assert!(matches!(cfg("nx = 10"), Err(Error::Config(_))));
        assert!(matches!(cfg("problem = rotor\nnx = 10\nnx = 20"), Err(Error::Config(_))));
        assert!(matches!(cfg("problem = rotor\nq_form = cubic"), Err(Error::Config(_))));
        assert!(matches!(cfg("problem = rotor\noutput_times = 5"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("problem = rotor", &["bogus=1".into()]), Err(Error::Config(_))));
    }

    #[test]
    fn overrides_win_and_comments_are_ignored() {
        let c = RunConfig::parse("problem = rotor # comment\nnx = 50\n# full comment\n", &["nx=60".into(), "pp=false".into()]).unwrap();
        assert_eq!((c.nx, c.ny), (60, 60));
        assert!(!c.opts.pp);
        assert!(c.warnings().iter().any(|w| w.contains("positivity")));
    }

    #[test]
    fn ddf_ablation_runs_with_warning() {
        let c = cfg("problem = blast1\nddf = off").unwrap();
        assert!(!c.opts.ddf);
        assert!(c.warnings()[0].starts_with("WARNING"));
    }

    #[test]
    fn echo_round_trips() {
        let c = cfg("problem = jet800\nindicator = three\ndelta = 0.05\noutput_times = 0.001,0.0005\noutput_formats = csv,vtk\n").unwrap();
        assert_eq!(c.output_times, vec![0.0005, 0.001]);
        let again = cfg(&c.echo()).unwrap();
        assert_eq!(again, c);
    }

    fn small_field() -> (DofField, Mesh, GasParams) {
        let spec = ProblemSpec::by_name("orszag_tang").unwrap();
        let mesh = spec.mesh(3, 3).unwrap();
        let g = spec.gas(QForm::Softplus).unwrap();
        (spec.init_field(&mesh, &g).unwrap(), mesh, g)
    }

    #[test]
    fn csv_has_header_and_one_row_per_cell() {
        let spec = ProblemSpec::by_name("rotor").unwrap();
        let mesh = Mesh::new(3, 3, (0.0, 1.0), (0.0, 1.0), spec.bc).unwrap();
        let g = spec.gas(QForm::Softplus).unwrap();
        let f = spec.init_field(&mesh, &g).unwrap();
        let text = snapshot_csv(&f, &mesh, &g, None, &SnapshotField::ALL);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert!(lines[0].starts_with("x,y,avg_rho"));
        assert!(lines[0].ends_with("v1,v2,v3,B1,B2,B3,p,mach,pmag,troubled,theta_oe,divb"));
        // 17 significant digits: one leading digit and 16 decimals.
        let first = lines[1].split(',').next().unwrap();
        assert_eq!(first.split('e').next().unwrap().len(), 18);
    }

    #[test]
    fn csv_reload_is_bitwise() {
        let (f, mesh, g) = small_field();
        let text = snapshot_csv(&f, &mesh, &g, None, &[SnapshotField::Rho]);
        let back = read_csv_averages(&text, &mesh).unwrap();
        for (a, b) in f.avg.iter().zip(&back) {
            for k in 0..8 {
                assert_eq!(a[k].to_bits(), b[k].to_bits());
            }
        }
    }

    #[test]
    fn vtk_header() {
        let (f, mesh, g) = small_field();
        let text = snapshot_vtk(&f, &mesh, &g, None, &[SnapshotField::Rho, SnapshotField::Velocity], "t");
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# vtk DataFile Version 3.0");
        assert!(lines.contains(&"DATASET STRUCTURED_POINTS"));
        assert!(lines.contains(&"SCALARS rho double 1"));
        assert!(lines.contains(&"VECTORS v double"));
        assert_eq!(lines.len(), 8 + 2 + 9 + 1 + 9);
    }

    #[test]
    fn snapshots_are_written_to_disk() {
        let (f, mesh, g) = small_field();
        let dir = std::env::temp_dir().join(format!("pampa-io-test-{}", std::process::id()));
        let paths = write_snapshot(&dir, "snap", &f, &mesh, &g, None, &SnapshotField::ALL, &[Format::Csv, Format::Vtk]).unwrap();
        assert_eq!(paths.len(), 2);
        let back = read_csv_averages(&fs::read_to_string(&paths[0]).unwrap(), &mesh).unwrap();
        assert_eq!(back, f.avg);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn execute_writes_snapshots_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let text = format!(
            "problem = orszag_tang\nnx = 8\nt_end = 0.02\noutput_times = 0, 0.01\noutput_formats = csv, vtk\noutput_dir = {}\n",
            dir.path().display()
        );
        let c = cfg(&text).unwrap();
        let mut seen = 0;
        let s = execute(&c, |_| seen += 1).unwrap();
        assert_eq!(s.steps, seen);
        assert!((s.t - 0.02).abs() < 1e-12);
        assert_eq!(s.snapshots.len(), 6);
        let m = fs::read_to_string(&s.manifest).unwrap();
        assert!(m.contains("# status: ok"));
        assert_eq!(m.lines().filter(|l| l.starts_with(char::is_numeric)).count(), s.steps);
    }

    #[test]
    fn manifest_echoes_config_and_steps() {
        let c = cfg("problem = alfven\npp = off").unwrap();
        let log = StepLog {
            step: 1,
            t: 0.1,
            dt: 0.1,
            alpha: (1.0, 1.0),
            min_rho: 1.0,
            min_internal_energy: 0.1,
            max_div: 0.0,
            troubled: 0,
            min_theta_oe: 1.0,
        };
        let m = manifest(&c, &[log], "ok");
        assert!(m.contains("problem = alfven"));
        assert!(m.contains("positivity is NOT guaranteed"));
        assert!(m.contains(StepLog::HEADER));
        assert_eq!(m.lines().last().unwrap(), log.csv_line());
    }
}
