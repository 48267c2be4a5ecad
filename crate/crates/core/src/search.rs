//! Design evaluation, parameter sweeps and exhaustive design search.
//!
//! Every evaluation is a pure function of its inputs, so cells and
//! candidates are computed in parallel and collected back in enumeration
//! order; results never depend on the thread count.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::catalog::Catalog;
use crate::elastica::{self, DisplacementModel, RibbonGeometry, ShearFormula};
use crate::error::{Error, Result};
use crate::metrics::{design_report, DesignReport};

/// One fully specified design: ribbon, material, optional servo, model flags.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignPoint {
    pub geometry: RibbonGeometry,
    pub material: String,
    pub servo: Option<String>,
    pub shear: ShearFormula,
    pub displacement: DisplacementModel,
}

impl DesignPoint {
    pub fn new(geometry: RibbonGeometry, material: impl Into<String>, servo: Option<String>) -> Self {
        DesignPoint {
            geometry,
            material: material.into(),
            servo,
            shear: ShearFormula::default(),
            displacement: DisplacementModel::default(),
        }
    }

    /// Total order used to break ranking ties.
    pub fn lexicographic_cmp(&self, other: &Self) -> Ordering {
        let g = &self.geometry;
        let o = &other.geometry;
        self.material
            .to_ascii_lowercase()
            .cmp(&other.material.to_ascii_lowercase())
            .then_with(|| {
                let a = self.servo.as_deref().map(str::to_ascii_lowercase);
                let b = other.servo.as_deref().map(str::to_ascii_lowercase);
                a.cmp(&b)
            })
            .then_with(|| g.t.total_cmp(&o.t))
            .then_with(|| g.l1.total_cmp(&o.l1))
            .then_with(|| g.half_length().total_cmp(&o.half_length()))
            .then_with(|| g.h.total_cmp(&o.h))
            .then_with(|| g.theta.total_cmp(&o.theta))
            .then_with(|| {
                let a = g.d_override.unwrap_or(f64::NAN);
                let b = o.d_override.unwrap_or(f64::NAN);
                a.total_cmp(&b)
            })
    }
}

impl fmt::Display for DesignPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.geometry;
        write!(
            f,
            "{} t={} l={} h={} L1={} theta={}deg",
            self.material,
            g.t,
            g.half_length(),
            g.h,
            g.l1,
            g.theta.to_degrees()
        )?;
        if let Some(d) = g.d_override {
            write!(f, " D={d}")?;
        }
        if let Some(s) = &self.servo {
            write!(f, " servo={s}")?;
        }
        Ok(())
    }
}

fn tag(point: &DesignPoint, err: Error) -> Error {
    match err {
        Error::NoConvergence(m) => Error::NoConvergence(format!("[{point}] {m}")),
        Error::DegenerateGeometry(m) => Error::DegenerateGeometry(format!("[{point}] {m}")),
        Error::Domain(m) => Error::Domain(format!("[{point}] {m}")),
        other => other,
    }
}

/// Runs the ribbon solve and the metrics for one design.
///
/// A design with no snap stroke (D = 0) yields a report marked infeasible,
/// not an error.
pub fn evaluate_design(point: &DesignPoint, cat: &Catalog) -> Result<DesignReport> {
    let material = cat.material(&point.material)?;
    let servo = point.servo.as_deref().map(|s| cat.servo(s)).transpose()?;
    if !material.has_thickness(point.geometry.t) {
        return Err(Error::invalid(
            format!("design {point}"),
            format!(
                "thickness {} is not available for {} (available: {:?})",
                point.geometry.t, material.spec.name, material.thicknesses
            ),
        ));
    }
    let sol = elastica::solve(&point.geometry, &material.spec, point.shear, point.displacement)
        .map_err(|e| tag(point, e))?;
    Ok(design_report(&sol, &material.spec, servo, point.shear))
}

/// A sweepable design parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    /// Half-length l (L2 follows as l − L1).
    HalfLength,
    /// Prestressing distance D.
    Prestress,
    Thickness,
    Height,
    /// Half-width L1 (l held fixed).
    HalfWidth,
    /// Pre-bend angle θ, radians.
    Theta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::HalfLength => "l",
            SweepParam::Prestress => "D",
            SweepParam::Thickness => "t",
            SweepParam::Height => "h",
            SweepParam::HalfWidth => "L1",
            SweepParam::Theta => "theta",
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l" => Ok(SweepParam::HalfLength),
            "D" | "d" => Ok(SweepParam::Prestress),
            "t" => Ok(SweepParam::Thickness),
            "h" => Ok(SweepParam::Height),
            "L1" => Ok(SweepParam::HalfWidth),
            "theta" => Ok(SweepParam::Theta),
            other => Err(Error::domain(format!(
                "unknown sweep parameter '{other}' (expected l, D, t, h, L1 or theta)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn new(param: SweepParam, min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = SweepAxis { param, min, max, count };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::invalid(format!("axis {}", self.param.name()), "count must be >= 1"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(Error::invalid(
                format!("axis {}", self.param.name()),
                format!("need finite min <= max, got {}..{}", self.min, self.max),
            ));
        }
        Ok(())
    }

    /// Evenly spaced values, endpoints included; a single value is `min`.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + step * i as f64 })
            .collect()
    }
}

/// Axes over a base design; axis values override the base parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: DesignPoint,
    pub axes: Vec<SweepAxis>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    Report(Box<DesignReport>),
    /// The cell could not be evaluated; the reason is kept for output.
    Infeasible(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    /// Axis values, in axis order.
    pub coords: Vec<f64>,
    /// The design at this cell; its geometry may be invalid.
    pub point: DesignPoint,
    pub outcome: CellOutcome,
}

/// Dense row-major grid of sweep results (first axis varies slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axes: Vec<SweepAxis>,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    pub fn cell(&self, index: &[usize]) -> Option<&SweepCell> {
        if index.len() != self.axes.len() {
            return None;
        }
        let mut flat = 0;
        for (i, axis) in index.iter().zip(&self.axes) {
            if *i >= axis.count {
                return None;
            }
            flat = flat * axis.count + i;
        }
        self.cells.get(flat)
    }
}

fn apply_axes(base: &DesignPoint, axes: &[SweepAxis], coords: &[f64]) -> DesignPoint {
    let g = &base.geometry;
    let (mut l, mut l1, mut h, mut t, mut theta, mut d) =
        (g.half_length(), g.l1, g.h, g.t, g.theta, g.d_override);
    for (axis, &value) in axes.iter().zip(coords) {
        match axis.param {
            SweepParam::HalfLength => l = value,
            SweepParam::Prestress => d = Some(value),
            SweepParam::Thickness => t = value,
            SweepParam::Height => h = value,
            SweepParam::HalfWidth => l1 = value,
            SweepParam::Theta => theta = value,
        }
    }
    let geometry = RibbonGeometry {
        l1,
        l2: l - l1,
        h,
        t,
        theta,
        d_override: d,
    };
    DesignPoint {
        geometry,
        ..base.clone()
    }
}

fn cell_coords(axes: &[SweepAxis], values: &[Vec<f64>], mut flat: usize) -> Vec<f64> {
    let mut coords = vec![0.0; axes.len()];
    for k in (0..axes.len()).rev() {
        let n = axes[k].count;
        coords[k] = values[k][flat % n];
        flat /= n;
    }
    coords
}

/// Evaluates every cell of the grid. Fails only for an invalid spec.
pub fn sweep(spec: &SweepSpec, cat: &Catalog) -> Result<SweepGrid> {
    for (i, axis) in spec.axes.iter().enumerate() {
        axis.validate()?;
        if spec.axes[..i].iter().any(|a| a.param == axis.param) {
            return Err(Error::invalid("sweep", format!("axis {} repeated", axis.param.name())));
        }
    }
    cat.material(&spec.base.material)?;
    if let Some(s) = &spec.base.servo {
        cat.servo(s)?;
    }
    let values: Vec<Vec<f64>> = spec.axes.iter().map(SweepAxis::values).collect();
    let total: usize = spec.axes.iter().map(|a| a.count).product();
    let cells = (0..total)
        .into_par_iter()
        .map(|flat| {
            let coords = cell_coords(&spec.axes, &values, flat);
            let point = apply_axes(&spec.base, &spec.axes, &coords);
            let outcome = match point.geometry.validate().and_then(|_| evaluate_design(&point, cat)) {
                Ok(r) => CellOutcome::Report(Box::new(r)),
                Err(e) => CellOutcome::Infeasible(e.to_string()),
            };
            SweepCell { coords, point, outcome }
        })
        .collect();
    Ok(SweepGrid {
        axes: spec.axes.clone(),
        cells,
    })
}

/// Candidate values of the free geometry parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryGrid {
    pub l: Vec<f64>,
    pub d: Vec<f64>,
    pub h: Vec<f64>,
    pub l1: Vec<f64>,
    /// Radians.
    pub theta: Vec<f64>,
}

impl Default for GeometryGrid {
    /// l 60–160 mm step 5, D 5–30 mm step 1, h {10, 15}, L1 {12.5}, θ {10°}.
    fn default() -> Self {
        GeometryGrid {
            l: (0..=20).map(|i| 60.0 + 5.0 * i as f64).collect(),
            d: (0..=25).map(|i| 5.0 + i as f64).collect(),
            h: vec![10.0, 15.0],
            l1: vec![12.5],
            theta: vec![10f64.to_radians()],
        }
    }
}

impl GeometryGrid {
    pub fn len(&self) -> usize {
        self.l.len() * self.d.len() * self.h.len() * self.l1.len() * self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn combinations(&self) -> Vec<(f64, f64, f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.l {
            for &d in &self.d {
                for &h in &self.h {
                    for &l1 in &self.l1 {
                        for &theta in &self.theta {
                            out.push((l, d, h, l1, theta));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Highest design frequency first.
    MaxFrequency,
    /// Designs reaching at least this frequency (Hz), closest first.
    TargetFrequency(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConstraints {
    pub alpha_min: f64,
    pub objective: Objective,
    /// Grams.
    pub max_servo_weight: Option<f64>,
    pub grid: GeometryGrid,
    pub top_k: usize,
    pub shear: ShearFormula,
    pub displacement: DisplacementModel,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        SearchConstraints {
            alpha_min: 1.0,
            objective: Objective::MaxFrequency,
            max_servo_weight: None,
            grid: GeometryGrid::default(),
            top_k: 20,
            shear: ShearFormula::default(),
            displacement: DisplacementModel::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDesign {
    pub point: DesignPoint,
    pub report: DesignReport,
    pub servo_weight: f64,
}

/// How many candidates were rejected, by first failing check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub candidates: usize,
    /// Invalid geometry, failed solve, or no snap stroke.
    pub infeasible: usize,
    pub failed_weight: usize,
    pub failed_alpha: usize,
    pub failed_frequency: usize,
    pub accepted: usize,
}

impl SearchStats {
    /// The check that rejected the most candidates, if any were rejected.
    pub fn binding_constraint(&self) -> Option<&'static str> {
        [
            (self.failed_alpha, "alpha"),
            (self.failed_frequency, "frequency"),
            (self.failed_weight, "servo weight"),
            (self.infeasible, "feasibility"),
        ]
        .into_iter()
        .filter(|(n, _)| *n > 0)
        .max_by_key(|(n, _)| *n)
        .map(|(_, name)| name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub designs: Vec<RankedDesign>,
    pub stats: SearchStats,
}

enum Verdict {
    Infeasible,
    Weight,
    Alpha,
    Frequency,
    Accepted(Box<RankedDesign>),
}

fn judge(constraints: &SearchConstraints, point: DesignPoint, report: DesignReport, weight: f64) -> Verdict {
    if !report.is_feasible() {
        return Verdict::Infeasible;
    }
    if constraints.max_servo_weight.is_some_and(|w| weight > w) {
        return Verdict::Weight;
    }
    let (Some(alpha), Some(f)) = (report.alpha, report.f_design) else {
        return Verdict::Infeasible;
    };
    if alpha < constraints.alpha_min {
        return Verdict::Alpha;
    }
    if let Objective::TargetFrequency(target) = constraints.objective {
        if f < target {
            return Verdict::Frequency;
        }
    }
    Verdict::Accepted(Box::new(RankedDesign {
        point,
        report,
        servo_weight: weight,
    }))
}

/// Ranking order for accepted designs under `objective`.
pub fn rank_cmp(objective: Objective, a: &RankedDesign, b: &RankedDesign) -> Ordering {
    let fa = a.report.f_design.unwrap_or(f64::NAN);
    let fb = b.report.f_design.unwrap_or(f64::NAN);
    let primary = match objective {
        Objective::MaxFrequency => fb.total_cmp(&fa),
        Objective::TargetFrequency(t) => (fa - t).total_cmp(&(fb - t)),
    };
    primary
        .then_with(|| a.servo_weight.total_cmp(&b.servo_weight))
        .then_with(|| a.point.lexicographic_cmp(&b.point))
}

/// Enumerates servo × material × thickness × geometry grid, filters by the
/// constraints and returns the best `top_k` designs.
pub fn find_designs(constraints: &SearchConstraints, cat: &Catalog) -> Result<SearchOutcome> {
    if !(constraints.alpha_min > 0.0) {
        return Err(Error::invalid("search constraints", "alpha_min must be > 0"));
    }
    if cat.materials.is_empty() || cat.servos.is_empty() {
        return Err(Error::invalid(
            "search",
            "catalog needs at least one material and one servo",
        ));
    }
    let mut ribbons = Vec::new();
    for material in &cat.materials {
        for &t in &material.thicknesses {
            for combo in constraints.grid.combinations() {
                ribbons.push((material, t, combo));
            }
        }
    }
    let verdicts: Vec<Vec<Verdict>> = ribbons
        .par_iter()
        .map(|&(material, t, (l, d, h, l1, theta))| {
            let geometry = RibbonGeometry {
                l1,
                l2: l - l1,
                h,
                t,
                theta,
                d_override: Some(d),
            };
            let solved = geometry
                .validate()
                .and_then(|_| elastica::solve(&geometry, &material.spec, constraints.shear, constraints.displacement));
            cat.servos
                .iter()
                .map(|servo| {
                    let Ok(sol) = &solved else {
                        return Verdict::Infeasible;
                    };
                    let point = DesignPoint {
                        geometry: geometry.clone(),
                        material: material.spec.name.clone(),
                        servo: Some(servo.name.clone()),
                        shear: constraints.shear,
                        displacement: constraints.displacement,
                    };
                    let report = design_report(sol, &material.spec, Some(servo), constraints.shear);
                    judge(constraints, point, report, servo.weight)
                })
                .collect()
        })
        .collect();

    let mut stats = SearchStats::default();
    let mut accepted = Vec::new();
    for verdict in verdicts.into_iter().flatten() {
        stats.candidates += 1;
        match verdict {
            Verdict::Infeasible => stats.infeasible += 1,
            Verdict::Weight => stats.failed_weight += 1,
            Verdict::Alpha => stats.failed_alpha += 1,
            Verdict::Frequency => stats.failed_frequency += 1,
            Verdict::Accepted(d) => {
                stats.accepted += 1;
                accepted.push(*d);
            }
        }
    }
    accepted.sort_by(|a, b| rank_cmp(constraints.objective, a, b));
    accepted.truncate(constraints.top_k);
    Ok(SearchOutcome {
        designs: accepted,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coral_point() -> DesignPoint {
        let geom = RibbonGeometry::from_half_length(12.5, 87.0, 15.0, 0.762, 10f64.to_radians())
            .unwrap()
            .with_prestress_distance(11.75);
        DesignPoint::new(geom, "PETG", Some("MG90S".into()))
    }

    #[test]
    fn evaluate_coral_is_consistent() {
        let cat = Catalog::seed();
        let r = evaluate_design(&coral_point(), &cat).unwrap();
        assert!(r.is_feasible());
        let t_act = r.t_act.unwrap();
        assert!((r.alpha.unwrap() - 245.0 / t_act).abs() < 1e-12);
        assert_eq!(r.f_design.unwrap(), r.f_m_hcm.min(r.f_m_servo.unwrap()));
        assert!((r.u_barr - 42.72).abs() < 0.01);
        assert!(!r.warnings.is_empty(), "quoted D differs from the geometric one");
    }

    #[test]
    fn zero_prestress_is_infeasible_not_error() {
        let mut p = coral_point();
        p.geometry.d_override = Some(0.0);
        let r = evaluate_design(&p, &Catalog::seed()).unwrap();
        assert!(!r.is_feasible());
        assert_eq!(r.u_barr, 0.0);
        assert!(r.t_act.is_none() && r.alpha.is_none());
    }

    #[test]
    fn evaluate_rejects_bad_references() {
        let cat = Catalog::seed();
        let mut p = coral_point();
        p.servo = Some("MG90".into());
        assert!(matches!(evaluate_design(&p, &cat), Err(Error::NotFound { .. })));
        let mut p = coral_point();
        p.geometry.t = 0.5;
        assert!(matches!(evaluate_design(&p, &cat), Err(Error::Validation { .. })));
    }

    #[test]
    fn axis_values() {
        let a = SweepAxis::new(SweepParam::HalfLength, 60.0, 160.0, 21).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 21);
        assert_eq!((v[0], v[5], v[20]), (60.0, 85.0, 160.0));
        assert_eq!(SweepAxis::new(SweepParam::Prestress, 3.0, 9.0, 1).unwrap().values(), vec![3.0]);
        assert!(SweepAxis::new(SweepParam::Prestress, 3.0, 1.0, 2).is_err());
        assert!(SweepAxis::new(SweepParam::Prestress, 1.0, 3.0, 0).is_err());
    }

    #[test]
    fn single_cell_sweep_equals_evaluation() {
        let cat = Catalog::seed();
        let spec = SweepSpec {
            base: coral_point(),
            axes: vec![SweepAxis::new(SweepParam::HalfLength, 87.0, 87.0, 1).unwrap()],
        };
        let grid = sweep(&spec, &cat).unwrap();
        assert_eq!(grid.cells.len(), 1);
        let direct = evaluate_design(&coral_point(), &cat).unwrap();
        assert_eq!(grid.cells[0].outcome, CellOutcome::Report(Box::new(direct)));
    }

    #[test]
    fn sweep_is_row_major_with_markers() {
        let cat = Catalog::seed();
        let spec = SweepSpec {
            base: coral_point(),
            axes: vec![
                SweepAxis::new(SweepParam::HalfLength, 20.0, 100.0, 3).unwrap(),
                SweepAxis::new(SweepParam::Prestress, 0.0, 10.0, 2).unwrap(),
            ],
        };
        let grid = sweep(&spec, &cat).unwrap();
        assert_eq!(grid.shape(), vec![3, 2]);
        let coords: Vec<Vec<f64>> = grid.cells.iter().map(|c| c.coords.clone()).collect();
        assert_eq!(coords[1], vec![20.0, 10.0]);
        assert_eq!(coords[2], vec![60.0, 0.0]);
        // D = 0 is a report without a snap stroke
        match &grid.cell(&[2, 0]).unwrap().outcome {
            CellOutcome::Report(r) => assert!(!r.is_feasible()),
            other => panic!("{other:?}"),
        }
        // l below L1 makes an invalid geometry
        let spec = SweepSpec {
            base: coral_point(),
            axes: vec![SweepAxis::new(SweepParam::HalfLength, 10.0, 10.0, 1).unwrap()],
        };
        let grid = sweep(&spec, &cat).unwrap();
        assert!(matches!(grid.cells[0].outcome, CellOutcome::Infeasible(_)));
        assert_eq!(grid.cells[0].point.geometry.half_length(), 10.0);
    }

    #[test]
    fn sweep_rejects_repeated_axes() {
        let spec = SweepSpec {
            base: coral_point(),
            axes: vec![
                SweepAxis::new(SweepParam::Height, 10.0, 15.0, 2).unwrap(),
                SweepAxis::new(SweepParam::Height, 10.0, 15.0, 2).unwrap(),
            ],
        };
        assert!(sweep(&spec, &Catalog::seed()).is_err());
    }

    #[test]
    fn pure_prestress_axis_is_linear_and_increasing() {
        let cat = Catalog::seed();
        let spec = SweepSpec {
            base: coral_point(),
            axes: vec![SweepAxis::new(SweepParam::Prestress, 5.0, 30.0, 6).unwrap()],
        };
        let grid = sweep(&spec, &cat).unwrap();
        let reports: Vec<&DesignReport> = grid
            .cells
            .iter()
            .map(|c| match &c.outcome {
                CellOutcome::Report(r) => r.as_ref(),
                other => panic!("{other:?}"),
            })
            .collect();
        for (cell, r) in grid.cells.iter().zip(&reports) {
            let per_d = r.u_barr / cell.coords[0];
            assert!(((per_d - reports[0].u_barr / 5.0) / per_d).abs() < 1e-12);
        }
        assert!(reports.windows(2).all(|w| w[1].t_act.unwrap() > w[0].t_act.unwrap()));
    }

    fn tiny_catalog() -> Catalog {
        let seed = Catalog::seed();
        Catalog::new(
            vec![seed.material("CFRP").unwrap().clone()],
            vec![seed.servo("A66BHLW").unwrap().clone()],
        )
        .unwrap()
    }

    fn point_grid(l: f64, d: f64, h: f64) -> GeometryGrid {
        GeometryGrid {
            l: vec![l],
            d: vec![d],
            h: vec![h],
            l1: vec![12.5],
            theta: vec![10f64.to_radians()],
        }
    }

    #[test]
    fn one_point_search() {
        let cat = tiny_catalog();
        let constraints = SearchConstraints {
            grid: point_grid(137.0, 10.0, 10.0),
            ..SearchConstraints::default()
        };
        let out = find_designs(&constraints, &cat).unwrap();
        // two CFRP thicknesses, one servo
        assert_eq!(out.stats.candidates, 2);
        for d in &out.designs {
            assert!(d.report.alpha.unwrap() >= 1.0);
        }
        assert_eq!(out.stats.accepted, out.designs.len());
    }

    #[test]
    fn impossible_alpha_names_binding_constraint() {
        let constraints = SearchConstraints {
            alpha_min: 1e9,
            grid: point_grid(137.0, 10.0, 10.0),
            ..SearchConstraints::default()
        };
        let out = find_designs(&constraints, &Catalog::seed()).unwrap();
        assert!(out.designs.is_empty());
        assert_eq!(out.stats.binding_constraint(), Some("alpha"));
        assert_eq!(out.stats.failed_alpha, out.stats.candidates);
    }

    #[test]
    fn search_rejects_empty_catalog() {
        let cat = Catalog::default();
        assert!(find_designs(&SearchConstraints::default(), &cat).is_err());
    }

    #[test]
    fn ranking_soundness_against_full_enumeration() {
        let cat = Catalog::seed();
        let grid = GeometryGrid {
            l: vec![60.0, 100.0, 140.0],
            d: vec![5.0, 20.0],
            h: vec![10.0],
            l1: vec![12.5],
            theta: vec![10f64.to_radians()],
        };
        for objective in [Objective::MaxFrequency, Objective::TargetFrequency(20.0)] {
            let constraints = SearchConstraints {
                grid: grid.clone(),
                top_k: 5,
                objective,
                max_servo_weight: Some(60.0),
                ..SearchConstraints::default()
            };
            let out = find_designs(&constraints, &cat).unwrap();
            let all = find_designs(&SearchConstraints { top_k: usize::MAX, ..constraints.clone() }, &cat).unwrap();
            assert_eq!(out.stats, all.stats);
            assert_eq!(out.designs[..], all.designs[..out.designs.len()]);
            assert!(all.designs.windows(2).all(|w| rank_cmp(objective, &w[0], &w[1]) != Ordering::Greater));
            for d in &all.designs {
                assert!(d.report.alpha.unwrap() >= 1.0);
                assert!(d.servo_weight <= 60.0);
                if let Objective::TargetFrequency(f) = objective {
                    assert!(d.report.f_design.unwrap() >= f);
                }
            }
            let s = all.stats;
            assert_eq!(s.candidates, s.infeasible + s.failed_weight + s.failed_alpha + s.failed_frequency + s.accepted);
        }
    }
}
