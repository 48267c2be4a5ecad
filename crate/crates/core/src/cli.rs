//! The `hcm` command line.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 numeric failure,
//! 4 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::catalog::{
    self, format_number, load_catalog_with_warnings, resolve_catalog_dir, save_catalog, Catalog,
    MaterialRecord, Record, RecordKind,
};
use crate::elastica::{DisplacementModel, MaterialSpec, RibbonGeometry, ShearFormula};
use crate::error::{Error, Result};
use crate::metrics::{three_significant, DesignReport, ServoSpec};
use crate::oracle;
use crate::search::{
    self, CellOutcome, DesignPoint, GeometryGrid, Objective, SearchConstraints, SweepAxis,
    SweepParam, SweepSpec,
};
use crate::table::{design_row, OutputTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

const DEFAULT_H: f64 = 15.0;
const DEFAULT_L1: f64 = 12.5;
const DEFAULT_THETA_DEG: f64 = 10.0;
const MAX_SWEEP_AXES: usize = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hcm",
    version,
    about = "Design toolkit for bistable hair-clip ribbon actuators",
    allow_negative_numbers = true
)]
struct Cli {
    /// Directory holding materials.csv and servos.csv (else $HCM_CATALOG_DIR, else the seed catalog)
    #[arg(long, global = true, value_name = "DIR")]
    catalog_dir: Option<PathBuf>,

    /// Print every defaulted or assumed value used in the run
    #[arg(long, global = true)]
    assumptions: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one design
    Analyze(AnalyzeArgs),
    /// Evaluate a grid over one or two parameters
    Sweep(SweepArgs),
    /// Search servo x material x geometry for feasible designs
    Search(SearchArgs),
    /// Inspect or edit the material and servo catalog
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Check the closed-form solution against independent numerics
    Verify,
}

#[derive(Debug, Args)]
struct DesignArgs {
    /// Material name from the catalog
    #[arg(long)]
    material: Option<String>,
    /// Thickness, mm
    #[arg(long)]
    t: Option<f64>,
    /// Ribbon height, mm [default: 15]
    #[arg(long)]
    h: Option<f64>,
    /// Half-width between clamps, mm [default: 12.5]
    #[arg(long = "L1")]
    l1: Option<f64>,
    /// Span ratio L2/L1
    #[arg(long, conflicts_with = "l")]
    gamma: Option<f64>,
    /// Half-length l = L1 + L2, mm
    #[arg(long)]
    l: Option<f64>,
    /// Pre-bend angle, degrees [default: 10]
    #[arg(long)]
    theta_deg: Option<f64>,
    /// Prestressing distance, mm (otherwise derived from gamma and theta)
    #[arg(long = "D")]
    d: Option<f64>,
    /// Servo name from the catalog
    #[arg(long)]
    servo: Option<String>,
    #[arg(long, value_enum)]
    shear_formula: Option<ShearArg>,
    #[arg(long, value_enum)]
    displacement: Option<DisplacementArg>,
    /// Start from a built prototype (pink, coral, black); flags override
    #[arg(long)]
    prototype: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShearArg {
    /// G = E/(2(1 - nu))
    Paper,
    /// G = E/(2(1 + nu))
    Standard,
}

impl From<ShearArg> for ShearFormula {
    fn from(a: ShearArg) -> Self {
        match a {
            ShearArg::Paper => ShearFormula::Paper,
            ShearArg::Standard => ShearFormula::Standard,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DisplacementArg {
    /// u integrates the bending angle
    Bending,
    /// u integrates the twist angle
    Twist,
}

impl From<DisplacementArg> for DisplacementModel {
    fn from(a: DisplacementArg) -> Self {
        match a {
            DisplacementArg::Bending => DisplacementModel::Bending,
            DisplacementArg::Twist => DisplacementModel::Twist,
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    design: DesignArgs,
    /// Also write a one-row table
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    design: DesignArgs,
    /// Axis as name=min:max:count with name in l, D, t, h, L1, theta (degrees)
    #[arg(long = "param", value_name = "SPEC", required = true)]
    params: Vec<String>,
    /// Output file (default: standard output)
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    MaxFreq,
    Target,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha_min: f64,
    #[arg(long, value_enum, default_value = "max-freq")]
    objective: ObjectiveArg,
    /// Required design frequency for --objective target, Hz
    #[arg(long, required_if_eq("objective", "target"))]
    target_freq: Option<f64>,
    /// Heaviest admissible servo, g
    #[arg(long)]
    max_servo_weight: Option<f64>,
    #[arg(long, default_value_t = 20)]
    top_k: usize,
    /// Half-length grid min:max:count, mm [default: 60:160:21]
    #[arg(long, value_name = "RANGE")]
    l_grid: Option<String>,
    /// Prestressing distance grid min:max:count, mm [default: 5:30:26]
    #[arg(long = "D-grid", value_name = "RANGE")]
    d_grid: Option<String>,
    /// Heights, mm [default: 10,15]
    #[arg(long, value_delimiter = ',')]
    h_values: Option<Vec<f64>>,
    /// Half-widths, mm [default: 12.5]
    #[arg(long = "L1-values", value_delimiter = ',')]
    l1_values: Option<Vec<f64>>,
    /// Pre-bend angles, degrees [default: 10]
    #[arg(long, value_delimiter = ',')]
    theta_deg_values: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    shear_formula: Option<ShearArg>,
    #[arg(long, value_enum)]
    displacement: Option<DisplacementArg>,
    /// Also write the ranked table
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// List all materials and servos
    List,
    /// Show one record
    Show { name: String },
    /// Add or replace a record
    #[command(subcommand)]
    Add(AddRecord),
    /// Remove a record
    Remove {
        #[arg(value_enum)]
        kind: KindArg,
        name: String,
    },
    /// Write the seed catalog into the catalog directory
    Init {
        /// Overwrite existing files
        #[arg(long)]
        force: bool,
    },
}

#[derive(Debug, Subcommand)]
enum AddRecord {
    Material {
        #[arg(long)]
        name: String,
        /// Young's modulus, MPa
        #[arg(long = "E")]
        e: f64,
        #[arg(long)]
        nu: f64,
        /// Density, t/mm^3
        #[arg(long)]
        rho: f64,
        /// Available thicknesses, mm
        #[arg(long, value_delimiter = ',', required = true)]
        thicknesses: Vec<f64>,
    },
    Servo {
        #[arg(long)]
        name: String,
        /// Stall torque, mm*N
        #[arg(long)]
        torque: f64,
        /// No-load speed, rad/s
        #[arg(long)]
        speed: f64,
        /// Mass, g
        #[arg(long)]
        weight: f64,
        /// Horn length, mm
        #[arg(long)]
        horn: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Material,
    Servo,
}

impl From<KindArg> for RecordKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Material => RecordKind::Material,
            KindArg::Servo => RecordKind::Servo,
        }
    }
}

struct Context<'a> {
    catalog_dir: Option<PathBuf>,
    show_assumptions: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        reason: e.to_string(),
    }
}

impl Context<'_> {
    fn say(&mut self, text: &str) -> Result<()> {
        self.out.write_all(text.as_bytes()).map_err(io_err)
    }

    fn warn(&mut self, text: &str) -> Result<()> {
        writeln!(self.err, "warning: {text}").map_err(io_err)
    }

    fn catalog(&mut self) -> Result<Catalog> {
        match resolve_catalog_dir(self.catalog_dir.as_deref()) {
            None => Ok(Catalog::seed()),
            Some(dir) => {
                let (cat, warnings) = load_catalog_with_warnings(&dir)?;
                for w in warnings {
                    self.warn(&w)?;
                }
                Ok(cat)
            }
        }
    }

    fn assumptions(&mut self, lines: &[String], to_err: bool) -> Result<()> {
        if !self.show_assumptions {
            return Ok(());
        }
        let text: String = lines.iter().map(|l| format!("assumption: {l}\n")).collect();
        if to_err {
            self.err.write_all(text.as_bytes()).map_err(io_err)
        } else {
            self.say(&text)
        }
    }
}

/// Runs the CLI with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let subcommand = match &cli.command {
        Command::Analyze(_) => "analyze",
        Command::Sweep(_) => "sweep",
        Command::Search(_) => "search",
        Command::Catalog(_) => "catalog",
        Command::Verify => "verify",
    };
    let mut ctx = Context {
        catalog_dir: cli.catalog_dir,
        show_assumptions: cli.assumptions,
        out,
        err,
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&mut ctx, a),
        Command::Sweep(a) => sweep(&mut ctx, a),
        Command::Search(a) => search(&mut ctx, a),
        Command::Catalog(c) => catalog_command(&mut ctx, c),
        Command::Verify => verify(&mut ctx),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            if let Error::Validation { record, .. } = &e {
                if record == "arguments" {
                    let mut cmd = Cli::command();
                    cmd.build();
                    if let Some(sub) = cmd.find_subcommand_mut(subcommand) {
                        let _ = writeln!(ctx.err, "\n{}", sub.render_usage());
                    }
                }
            }
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn missing(flag: &str) -> Error {
    Error::invalid("arguments", format!("missing required flag {flag}"))
}

/// Design flags resolved against defaults and an optional prototype.
struct Resolved {
    material: String,
    t: Option<f64>,
    h: f64,
    l1: f64,
    l: Option<f64>,
    gamma: Option<f64>,
    theta: f64,
    d: Option<f64>,
    servo: Option<String>,
    shear: ShearFormula,
    displacement: DisplacementModel,
    assumptions: Vec<String>,
}

fn resolve(args: &DesignArgs, cat: &Catalog) -> Result<Resolved> {
    let proto = args.prototype.as_deref().map(catalog::prototype).transpose()?;
    let mut assumptions = Vec::new();
    let material = args
        .material
        .clone()
        .or_else(|| proto.as_ref().map(|p| p.material.clone()))
        .ok_or_else(|| missing("--material"))?;
    let h = match (args.h, &proto) {
        (Some(h), _) => h,
        (None, Some(p)) => {
            assumptions.push(format!("h = {} mm (prototype {})", p.h, p.name));
            p.h
        }
        (None, None) => {
            assumptions.push(format!("h = {DEFAULT_H} mm (default)"));
            DEFAULT_H
        }
    };
    let l1 = match (args.l1, &proto) {
        (Some(v), _) => v,
        (None, Some(p)) => {
            assumptions.push(format!("L1 = {} mm (prototype {})", p.l1, p.name));
            p.l1
        }
        (None, None) => {
            assumptions.push(format!("L1 = {DEFAULT_L1} mm (default)"));
            DEFAULT_L1
        }
    };
    let theta_deg = args.theta_deg.unwrap_or_else(|| {
        assumptions.push(format!("theta = {DEFAULT_THETA_DEG} deg (default)"));
        DEFAULT_THETA_DEG
    });
    let from_proto = args.gamma.is_none() && args.l.is_none();
    let l = args.l.or(proto.as_ref().filter(|_| from_proto).map(|p| p.l));
    let d = args.d.or(proto.as_ref().filter(|_| args.d.is_none()).map(|p| p.d));
    let servo = args.servo.clone().or_else(|| proto.as_ref().map(|p| p.servo.clone()));
    if let (Some(p), None) = (&proto, &args.servo) {
        assumptions.push(format!("servo = {} (prototype {})", p.servo, p.name));
    }
    let shear = args.shear_formula.map(ShearFormula::from).unwrap_or_else(|| {
        assumptions.push("shear formula = paper, G = E/(2(1 - nu)) (default)".into());
        ShearFormula::Paper
    });
    let displacement = args.displacement.map(DisplacementModel::from).unwrap_or_else(|| {
        assumptions.push("displacement model = bending, u = integral of psi (default)".into());
        DisplacementModel::Bending
    });
    if let Ok(m) = cat.material(&material) {
        assumptions.push(format!("nu = {} for {} (catalog value)", m.spec.nu, m.spec.name));
    }
    Ok(Resolved {
        material,
        t: args.t.or(proto.as_ref().map(|p| p.t)),
        h,
        l1,
        l,
        gamma: args.gamma,
        theta: theta_deg.to_radians(),
        d,
        servo,
        shear,
        displacement,
        assumptions,
    })
}

impl Resolved {
    /// The design point; swept parameters may stand in for missing flags.
    fn point(&self, fallback: &[SweepAxis]) -> Result<DesignPoint> {
        let axis = |p: SweepParam| fallback.iter().find(|a| a.param == p).map(|a| a.min);
        let t = self
            .t
            .or_else(|| axis(SweepParam::Thickness))
            .ok_or_else(|| missing("--t"))?;
        let l = match (self.l, self.gamma) {
            (Some(l), _) => l,
            (None, Some(g)) => self.l1 * (1.0 + g),
            (None, None) => axis(SweepParam::HalfLength).ok_or_else(|| missing("--gamma or --l"))?,
        };
        let d = self.d.or_else(|| axis(SweepParam::Prestress));
        Ok(DesignPoint {
            geometry: RibbonGeometry {
                l1: self.l1,
                l2: l - self.l1,
                h: self.h,
                t,
                theta: self.theta,
                d_override: d,
            },
            material: self.material.clone(),
            servo: self.servo.clone(),
            shear: self.shear,
            displacement: self.displacement,
        })
    }
}

fn human_report(point: &DesignPoint, r: &DesignReport) -> String {
    let mut s = format!("design      {point}\n");
    let mut line = |label: &str, value: Option<f64>, unit: &str| {
        if let Some(v) = value {
            let text = format!("{label:<12}{} {unit}", three_significant(v));
            s.push_str(text.trim_end());
            s.push('\n');
        }
    };
    line("P_cr", Some(r.p_cr), "N");
    line("D", Some(r.d), "mm");
    line("A1", Some(r.a1), "mm^-1/2");
    line("u(L1)", Some(r.u_l1), "mm");
    line("U_barr", Some(r.u_barr), "mm*N");
    line("T_act", r.t_act, "mm*N");
    line("t*", Some(r.t_star), "s");
    line("f_m,HCM", Some(r.f_m_hcm), "Hz");
    line("f_m,servo", r.f_m_servo, "Hz");
    line("f_design", r.f_design, "Hz");
    line("alpha", r.alpha, "");
    if let Some(why) = &r.infeasible {
        s.push_str(&format!("infeasible design: {why}\n"));
    } else if let Some(a) = r.alpha {
        let verdict = if a >= 1.0 { "servo can snap the ribbon" } else { "servo too weak (alpha < 1)" };
        s.push_str(&format!("verdict     {verdict}\n"));
    }
    for note in &r.provenance.notes {
        s.push_str(&format!("note: {note}\n"));
    }
    s
}

fn analyze(ctx: &mut Context, args: AnalyzeArgs) -> Result<i32> {
    let cat = ctx.catalog()?;
    let resolved = resolve(&args.design, &cat)?;
    let point = resolved.point(&[])?;
    point.geometry.validate()?;
    let report = search::evaluate_design(&point, &cat)?;
    ctx.assumptions(&resolved.assumptions, false)?;
    for w in &report.warnings {
        ctx.warn(w)?;
    }
    ctx.say(&human_report(&point, &report))?;
    if let Some(path) = &args.csv {
        let mut table = OutputTable::designs(&[]);
        table.push(design_row(&point, Ok(&report)))?;
        table.write(path)?;
    }
    Ok(EXIT_OK)
}

fn parse_range(text: &str, what: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::invalid("arguments", format!("{what} '{text}' is not min:max:count"));
    let parts: Vec<&str> = text.split(':').collect();
    let [min, max, count] = parts[..] else {
        return Err(bad());
    };
    Ok((
        min.trim().parse().map_err(|_| bad())?,
        max.trim().parse().map_err(|_| bad())?,
        count.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_axis(text: &str) -> Result<SweepAxis> {
    let (name, range) = text.split_once('=').ok_or_else(|| {
        Error::invalid("arguments", format!("--param '{text}' is not name=min:max:count"))
    })?;
    let param: SweepParam = name.trim().parse()?;
    let (mut min, mut max, count) = parse_range(range, "--param range")?;
    if param == SweepParam::Theta {
        min = min.to_radians();
        max = max.to_radians();
    }
    SweepAxis::new(param, min, max, count)
}

fn sweep(ctx: &mut Context, args: SweepArgs) -> Result<i32> {
    if args.params.len() > MAX_SWEEP_AXES {
        return Err(Error::invalid(
            "arguments",
            format!("at most {MAX_SWEEP_AXES} --param axes, got {}", args.params.len()),
        ));
    }
    let axes = args.params.iter().map(|p| parse_axis(p)).collect::<Result<Vec<_>>>()?;
    let cat = ctx.catalog()?;
    let resolved = resolve(&args.design, &cat)?;
    let base = resolved.point(&axes)?;
    ctx.assumptions(&resolved.assumptions, args.output.is_none())?;
    let grid = search::sweep(&SweepSpec { base, axes }, &cat)?;
    let mut table = OutputTable::designs(&[]);
    for cell in &grid.cells {
        let row = match &cell.outcome {
            CellOutcome::Report(r) => design_row(&cell.point, Ok(r)),
            CellOutcome::Infeasible(why) => design_row(&cell.point, Err(why)),
        };
        table.push(row)?;
    }
    match &args.output {
        Some(path) => {
            table.write(path)?;
            ctx.say(&format!("wrote {} rows to {}\n", table.rows().len(), path.display()))?;
        }
        None => ctx.say(&table.to_csv())?,
    }
    Ok(EXIT_OK)
}

fn range_values(text: &str, what: &str) -> Result<Vec<f64>> {
    let (min, max, count) = parse_range(text, what)?;
    let axis = SweepAxis::new(SweepParam::HalfLength, min, max, count)
        .map_err(|_| Error::invalid("arguments", format!("{what} '{text}' needs min <= max and count >= 1")))?;
    Ok(axis.values())
}

fn search(ctx: &mut Context, args: SearchArgs) -> Result<i32> {
    let cat = ctx.catalog()?;
    let mut assumptions = Vec::new();
    let defaults = GeometryGrid::default();
    let grid = GeometryGrid {
        l: args.l_grid.as_deref().map(|r| range_values(r, "--l-grid")).transpose()?.unwrap_or(defaults.l),
        d: args.d_grid.as_deref().map(|r| range_values(r, "--D-grid")).transpose()?.unwrap_or(defaults.d),
        h: args.h_values.clone().unwrap_or(defaults.h),
        l1: args.l1_values.clone().unwrap_or(defaults.l1),
        theta: args
            .theta_deg_values
            .as_ref()
            .map(|v| v.iter().map(|d| d.to_radians()).collect())
            .unwrap_or(defaults.theta),
    };
    if args.l_grid.is_none() {
        assumptions.push("l grid = 60..160 mm step 5 (default)".to_string());
    }
    if args.d_grid.is_none() {
        assumptions.push("D grid = 5..30 mm step 1 (default)".to_string());
    }
    if args.h_values.is_none() {
        assumptions.push("h grid = {10, 15} mm (default)".to_string());
    }
    if args.l1_values.is_none() {
        assumptions.push("L1 grid = {12.5} mm (default)".to_string());
    }
    if args.theta_deg_values.is_none() {
        assumptions.push("theta grid = {10} deg (default)".to_string());
    }
    let shear = args.shear_formula.map(ShearFormula::from).unwrap_or_else(|| {
        assumptions.push("shear formula = paper, G = E/(2(1 - nu)) (default)".into());
        ShearFormula::Paper
    });
    let displacement = args.displacement.map(DisplacementModel::from).unwrap_or_else(|| {
        assumptions.push("displacement model = bending, u = integral of psi (default)".into());
        DisplacementModel::Bending
    });
    for m in &cat.materials {
        assumptions.push(format!("nu = {} for {} (catalog value)", m.spec.nu, m.spec.name));
    }
    let objective = match args.objective {
        ObjectiveArg::MaxFreq => Objective::MaxFrequency,
        ObjectiveArg::Target => Objective::TargetFrequency(args.target_freq.ok_or_else(|| missing("--target-freq"))?),
    };
    let constraints = SearchConstraints {
        alpha_min: args.alpha_min,
        objective,
        max_servo_weight: args.max_servo_weight,
        grid,
        top_k: args.top_k,
        shear,
        displacement,
    };
    let outcome = search::find_designs(&constraints, &cat)?;
    ctx.assumptions(&assumptions, false)?;
    let s = outcome.stats;
    let mut text = format!(
        "candidates {}: accepted {}, failed alpha {}, failed frequency {}, failed servo weight {}, infeasible {}\n",
        s.candidates, s.accepted, s.failed_alpha, s.failed_frequency, s.failed_weight, s.infeasible
    );
    if outcome.designs.is_empty() {
        let binding = s.binding_constraint().unwrap_or("none");
        text.push_str(&format!("no design satisfies the constraints; binding constraint: {binding}\n"));
    }
    let mut table = OutputTable::designs(&["rank"]);
    for (i, d) in outcome.designs.iter().enumerate() {
        let r = &d.report;
        text.push_str(&format!(
            "{:>3}. f_design {} Hz, alpha {}, T_act {} mm*N | {}\n",
            i + 1,
            three_significant(r.f_design.unwrap_or(f64::NAN)),
            three_significant(r.alpha.unwrap_or(f64::NAN)),
            three_significant(r.t_act.unwrap_or(f64::NAN)),
            d.point
        ));
        let mut row = vec![(i + 1).to_string()];
        row.extend(design_row(&d.point, Ok(r)));
        table.push(row)?;
    }
    ctx.say(&text)?;
    if let Some(path) = &args.csv {
        table.write(path)?;
    }
    Ok(EXIT_OK)
}

fn material_line(m: &MaterialRecord) -> String {
    let ts: Vec<String> = m.thicknesses.iter().map(|t| format_number(*t)).collect();
    let listed = m
        .listed_specific_modulus
        .map(|x| format!(" (listed {})", format_number(x)))
        .unwrap_or_default();
    format!(
        "{:<10} E {} MPa, nu {}, rho {} t/mm^3, E/rho {:.3e}{listed} mm^2/s^2, t {} mm",
        m.spec.name,
        format_number(m.spec.e),
        format_number(m.spec.nu),
        format_number(m.spec.rho),
        m.spec.specific_modulus(),
        ts.join(", ")
    )
}

fn servo_line(s: &ServoSpec) -> String {
    let listed = s
        .listed_frequency
        .map(|f| format!(", listed f_m,servo {} Hz", format_number(f)))
        .unwrap_or_default();
    format!(
        "{:<10} T {} mm*N, speed {} rad/s, {} g, horn {} mm{listed}",
        s.name,
        format_number(s.stall_torque),
        format_number(s.speed),
        format_number(s.weight),
        format_number(s.horn_length)
    )
}

fn writable_dir(ctx: &Context) -> Result<PathBuf> {
    resolve_catalog_dir(ctx.catalog_dir.as_deref()).ok_or_else(|| {
        Error::invalid(
            "arguments",
            format!("editing needs --catalog-dir or {}", catalog::CATALOG_DIR_ENV),
        )
    })
}

fn catalog_files_exist(dir: &Path) -> bool {
    dir.join(catalog::MATERIALS_FILE).exists() || dir.join(catalog::SERVOS_FILE).exists()
}

fn catalog_command(ctx: &mut Context, cmd: CatalogCommand) -> Result<i32> {
    match cmd {
        CatalogCommand::List => {
            let cat = ctx.catalog()?;
            let mut s = format!("materials ({}):\n", cat.materials.len());
            for m in &cat.materials {
                s.push_str(&format!("  {}\n", material_line(m)));
            }
            s.push_str(&format!("servos ({}):\n", cat.servos.len()));
            for sv in &cat.servos {
                s.push_str(&format!("  {}\n", servo_line(sv)));
            }
            ctx.say(&s)?;
        }
        CatalogCommand::Show { name } => {
            let cat = ctx.catalog()?;
            let line = match cat.lookup(RecordKind::Material, &name) {
                Ok(Record::Material(m)) => format!("material {}", material_line(m)),
                _ => match cat.lookup(RecordKind::Servo, &name) {
                    Ok(Record::Servo(s)) => format!("servo    {}", servo_line(s)),
                    _ => {
                        let names = cat
                            .materials
                            .iter()
                            .map(|m| m.spec.name.as_str())
                            .chain(cat.servos.iter().map(|s| s.name.as_str()));
                        return Err(Error::NotFound {
                            kind: "record",
                            suggestions: catalog::nearest_names(&name, names),
                            name,
                        });
                    }
                },
            };
            ctx.say(&format!("{line}\n"))?;
        }
        CatalogCommand::Add(record) => {
            let dir = writable_dir(ctx)?;
            let mut cat = ctx.catalog()?;
            match record {
                AddRecord::Material { name, e, nu, rho, thicknesses } => {
                    let spec = MaterialSpec::new(name, e, nu, rho)?;
                    cat.upsert_material(MaterialRecord {
                        spec,
                        thicknesses,
                        listed_specific_modulus: None,
                    })?;
                }
                AddRecord::Servo { name, torque, speed, weight, horn } => {
                    cat.upsert_servo(ServoSpec::new(name, torque, speed, weight, horn)?)?;
                }
            }
            save_catalog(&cat, &dir)?;
        }
        CatalogCommand::Remove { kind, name } => {
            let dir = writable_dir(ctx)?;
            let mut cat = ctx.catalog()?;
            cat.remove(kind.into(), &name)?;
            save_catalog(&cat, &dir)?;
        }
        CatalogCommand::Init { force } => {
            let dir = writable_dir(ctx)?;
            if catalog_files_exist(&dir) && !force {
                return Err(Error::invalid(
                    "catalog directory",
                    format!("catalog files already exist in {} (use --force)", dir.display()),
                ));
            }
            save_catalog(&Catalog::seed(), &dir)?;
            ctx.say(&format!("wrote seed catalog to {}\n", dir.display()))?;
        }
    }
    Ok(EXIT_OK)
}

fn verify(ctx: &mut Context) -> Result<i32> {
    let cat = ctx.catalog()?;
    let checks = oracle::verify_suite(&cat)?;
    let mut text = String::new();
    let mut failed = 0;
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!c.passed());
        text.push_str(&format!("{status} {}: {:.3e} (limit {:.0e})\n", c.name, c.value, c.threshold));
    }
    text.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    ctx.say(&text)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}
