//! Closed-form small-deflection solution of the prestressed ribbon.
//!
//! Half of the assembled ribbon is modelled as a cantilever of length
//! `l = L1 + L2` clamped at `z = 0` and loaded at its free end by the
//! prestress load `P`. Lateral-torsional buckling gives the twist
//!
//! ```text
//! φ(z) = A1 · √(l − z) · J_{1/4}(z0 · ((l − z)/l)²)
//! ```
//!
//! where `z0` is the first zero of `J_{1/4}`. That zero fixes the critical
//! load `P_cr = 2·z0/l² · √(EI_η·C)`. The amplitude `A1` follows from equating
//! the strain energy with the work `P_cr·D` of the prestress load.
//!
//! All quantities are in the toolkit's canonical units: N, mm, s, tonne, MPa.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, gauss8};
use crate::specfun::{bessel_j, bessel_j_scaled, quarter_order_zero, BesselOrder};

/// Number of samples in the stored profiles (1024 uniform intervals).
pub const PROFILE_POINTS: usize = 1025;

const ENERGY_REL_TOL: f64 = 1e-11;
const ENERGY_PANELS: usize = 48;
const AMPLITUDE_REL_TOL: f64 = 1e-10;
const INITIAL_AMPLITUDE_BRACKET: f64 = 0.01;
const MAX_AMPLITUDE: f64 = 10.0;
const PRESTRESS_MISMATCH: f64 = 0.01;

/// Relation used to derive the shear modulus from E and ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum ShearFormula {
    /// G = E / (2(1 − ν)), as printed alongside the ribbon theory.
    #[default]
    Paper,
    /// G = E / (2(1 + ν)), the isotropic relation.
    Standard,
}

impl ShearFormula {
    pub fn shear_modulus(self, e: f64, nu: f64) -> f64 {
        match self {
            ShearFormula::Paper => e / (2.0 * (1.0 - nu)),
            ShearFormula::Standard => e / (2.0 * (1.0 + nu)),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ShearFormula::Paper => "paper",
            ShearFormula::Standard => "standard",
        }
    }
}

impl fmt::Display for ShearFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ShearFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(ShearFormula::Paper),
            "standard" => Ok(ShearFormula::Standard),
            other => Err(Error::domain(format!(
                "unknown shear formula '{other}' (expected paper or standard)"
            ))),
        }
    }
}

/// Which integral defines the out-of-plane displacement u(z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum DisplacementModel {
    /// u(z) = ∫₀^z ψ ds, consistent with ψ ≈ du/dz.
    #[default]
    Bending,
    /// u(z) = ∫₀^z φ ds, the twist integral.
    Twist,
}

impl DisplacementModel {
    pub fn as_str(self) -> &'static str {
        match self {
            DisplacementModel::Bending => "bending",
            DisplacementModel::Twist => "twist",
        }
    }
}

impl fmt::Display for DisplacementModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DisplacementModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bending" => Ok(DisplacementModel::Bending),
            "twist" => Ok(DisplacementModel::Twist),
            other => Err(Error::domain(format!(
                "unknown displacement model '{other}' (expected bending or twist)"
            ))),
        }
    }
}

/// Dimensions of the ribbon strip, in mm and radians.
#[derive(Debug, Clone, PartialEq)]
pub struct RibbonGeometry {
    /// Half-width segment L1.
    pub l1: f64,
    /// Angled segment L2.
    pub l2: f64,
    /// Ribbon height (strip width in its own plane).
    pub h: f64,
    /// Ribbon thickness.
    pub t: f64,
    /// Pre-bend angle θ.
    pub theta: f64,
    /// Prestressing distance quoted directly; wins over the geometric value.
    pub d_override: Option<f64>,
}

impl RibbonGeometry {
    pub fn new(l1: f64, l2: f64, h: f64, t: f64, theta: f64) -> Result<Self> {
        let geom = RibbonGeometry {
            l1,
            l2,
            h,
            t,
            theta,
            d_override: None,
        };
        geom.validate()?;
        Ok(geom)
    }

    /// Geometry from the half-length `l` instead of L2.
    pub fn from_half_length(l1: f64, l: f64, h: f64, t: f64, theta: f64) -> Result<Self> {
        Self::new(l1, l - l1, h, t, theta)
    }

    pub fn with_prestress_distance(mut self, d: f64) -> Self {
        self.d_override = Some(d);
        self
    }

    /// Half-length l = L1 + L2.
    pub fn half_length(&self) -> f64 {
        self.l1 + self.l2
    }

    /// γ_s = L2 / L1.
    pub fn span_ratio(&self) -> f64 {
        self.l2 / self.l1
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [("L1", self.l1), ("L2", self.l2), ("h", self.h), ("t", self.t)];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid("geometry", format!("{name} = {value} must be > 0")));
            }
        }
        if self.t >= self.h {
            return Err(Error::invalid(
                "geometry",
                format!("thickness {} must be below height {}", self.t, self.h),
            ));
        }
        if !self.theta.is_finite() {
            return Err(Error::invalid("geometry", "theta must be finite"));
        }
        match self.d_override {
            Some(d) if !(d.is_finite() && d >= 0.0) => Err(Error::invalid(
                "geometry",
                format!("prestressing distance {d} must be >= 0"),
            )),
            Some(_) => Ok(()),
            None if self.span_ratio() < 1.0 => Err(Error::invalid(
                "geometry",
                format!("L2/L1 = {} must be >= 1", self.span_ratio()),
            )),
            None => Ok(()),
        }
    }
}

/// Elastic and inertial properties of a ribbon material.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpec {
    pub name: String,
    /// Tensile modulus, MPa.
    pub e: f64,
    /// Poisson ratio.
    pub nu: f64,
    /// Density, t/mm³.
    pub rho: f64,
}

impl MaterialSpec {
    pub fn new(name: impl Into<String>, e: f64, nu: f64, rho: f64) -> Result<Self> {
        let mat = MaterialSpec {
            name: name.into(),
            e,
            nu,
            rho,
        };
        mat.validate()?;
        Ok(mat)
    }

    pub fn validate(&self) -> Result<()> {
        let record = format!("material '{}'", self.name);
        if self.name.trim().is_empty() {
            return Err(Error::invalid("material", "name must not be empty"));
        }
        if !(self.e.is_finite() && self.e > 0.0) {
            return Err(Error::invalid(record, format!("E = {} must be > 0", self.e)));
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(Error::invalid(record, format!("nu = {} must lie in (0, 0.5)", self.nu)));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(Error::invalid(record, format!("rho = {} must be > 0", self.rho)));
        }
        Ok(())
    }

    /// E/ρ in mm²/s² (numerically mJ/t).
    pub fn specific_modulus(&self) -> f64 {
        self.e / self.rho
    }
}

/// Rigidities of the thin rectangular section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionProps {
    /// In-plane flexural rigidity E·t·h³/12, N·mm².
    pub ei_xi: f64,
    /// Out-of-plane flexural rigidity E·h·t³/12, N·mm².
    pub ei_eta: f64,
    /// Torsional rigidity G·h·t³/3, N·mm².
    pub c: f64,
    /// Shear modulus, MPa.
    pub g: f64,
}

pub fn section_properties(
    geom: &RibbonGeometry,
    mat: &MaterialSpec,
    shear: ShearFormula,
) -> SectionProps {
    let (h, t, e) = (geom.h, geom.t, mat.e);
    let g = shear.shear_modulus(e, mat.nu);
    SectionProps {
        ei_xi: e * t * h.powi(3) / 12.0,
        ei_eta: e * h * t.powi(3) / 12.0,
        c: g * h * t.powi(3) / 3.0,
        g,
    }
}

/// P_cr = 2·z0/l² · √(EI_η·C), with z0 the first zero of J_{1/4}.
pub fn critical_load(section: &SectionProps, l: f64) -> f64 {
    2.0 * quarter_order_zero() / (l * l) * (section.ei_eta * section.c).sqrt()
}

/// D = L2·(asin(1/γ_s) + θ), ignoring any override.
pub fn geometric_prestress_distance(geom: &RibbonGeometry) -> Result<f64> {
    let gamma = geom.span_ratio();
    if !(gamma >= 1.0) {
        return Err(Error::domain(format!(
            "L2/L1 = {gamma} < 1: prestressing distance needs asin(1/gamma)"
        )));
    }
    Ok(geom.l2 * ((1.0 / gamma).asin() + geom.theta))
}

/// The override when present, otherwise the geometric prestressing distance.
pub fn prestress_distance(geom: &RibbonGeometry) -> Result<f64> {
    match geom.d_override {
        Some(d) => Ok(d),
        None => geometric_prestress_distance(geom),
    }
}

/// Warning text when a quoted D disagrees with the geometric one by more than 1%.
pub fn prestress_mismatch(geom: &RibbonGeometry) -> Option<String> {
    let quoted = geom.d_override?;
    let geometric = geometric_prestress_distance(geom).ok()?;
    if geometric > 0.0 && ((quoted - geometric) / geometric).abs() > PRESTRESS_MISMATCH {
        Some(format!(
            "quoted D = {quoted} mm differs from geometric D = {geometric:.4} mm by more than 1%"
        ))
    } else {
        None
    }
}

/// Unit-amplitude twist shape of a ribbon with half-length `l`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TwistShape {
    l: f64,
    z0: f64,
    kappa_quarter: f64,
}

impl TwistShape {
    pub(crate) fn new(l: f64) -> Self {
        let z0 = quarter_order_zero();
        TwistShape {
            l,
            z0,
            kappa_quarter: (z0 / (2.0 * l * l)).powf(0.25),
        }
    }

    fn argument(&self, z: f64) -> f64 {
        let s = (self.l - z).max(0.0) / self.l;
        self.z0 * s * s
    }

    /// √(l − z)·J_{1/4}(z0((l − z)/l)²).
    pub(crate) fn value(&self, z: f64) -> f64 {
        let s = (self.l - z).max(0.0);
        s.sqrt() * bessel_j(BesselOrder::QUARTER, self.argument(z)).unwrap_or(0.0)
    }

    /// d/dz of `value`, from the scaled series of J_{1/4} and J_{5/4}.
    pub(crate) fn slope(&self, z: f64) -> f64 {
        let x = self.argument(z);
        let j14 = bessel_j_scaled(BesselOrder::QUARTER, x).unwrap_or(0.0);
        let j54 = bessel_j_scaled(BesselOrder::QUARTER.succ(), x).unwrap_or(0.0);
        -self.kappa_quarter * (j14 - x * x * j54)
    }
}

/// Total strain energy U(A1) with bending and torsion terms, by adaptive Simpson.
pub fn strain_energy(section: &SectionProps, l: f64, p_cr: f64, a1: f64) -> f64 {
    if a1 == 0.0 {
        return 0.0;
    }
    let shape = TwistShape::new(l);
    let (c, k) = (section.c, p_cr * p_cr / section.ei_eta);
    0.5 * adaptive_simpson(
        |z| {
            let lever = l - z;
            let s = (a1 * shape.value(z)).sin();
            let d = a1 * shape.slope(z);
            k * lever * lever * s * s + c * d * d
        },
        0.0,
        l,
        ENERGY_REL_TOL,
    )
}

/// The strain energy integrand tabulated on composite Gauss nodes, so that
/// U(A) costs one pass over the table during the amplitude solve.
struct EnergyTable {
    torsion: f64,
    nodes: Vec<(f64, f64)>,
}

impl EnergyTable {
    fn new(section: &SectionProps, shape: &TwistShape, p_cr: f64) -> Self {
        let l = shape.l;
        let k = p_cr * p_cr / section.ei_eta;
        let rule = gauss8();
        let width = l / ENERGY_PANELS as f64;
        let mut torsion = 0.0;
        let mut nodes = Vec::with_capacity(ENERGY_PANELS * rule.nodes.len());
        for p in 0..ENERGY_PANELS {
            let mid = width * (p as f64 + 0.5);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let z = mid + 0.5 * width * x;
                let weight = 0.5 * width * w;
                let slope = shape.slope(z);
                torsion += weight * section.c * slope * slope;
                let lever = l - z;
                nodes.push((weight * k * lever * lever, shape.value(z)));
            }
        }
        EnergyTable {
            torsion: 0.5 * torsion,
            nodes,
        }
    }

    fn energy(&self, a: f64) -> f64 {
        let bending: f64 = self
            .nodes
            .iter()
            .map(|&(w, g)| {
                let s = (a * g).sin();
                w * s * s
            })
            .sum();
        self.torsion * a * a + 0.5 * bending
    }
}

/// Solved state of one ribbon: loads, amplitude and sampled profiles.
///
/// Immutable once built; profiles are signed (φ ≥ 0, ψ and u ≤ 0 under the
/// bending model). Metrics consume magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticaSolution {
    geometry: RibbonGeometry,
    section: SectionProps,
    p_cr: f64,
    d: f64,
    a1: f64,
    displacement: DisplacementModel,
    energy_residual: f64,
    z: Vec<f64>,
    phi: Vec<f64>,
    psi: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    // cumulative ∫φ, ∫(l−s)φ, ∫s(l−s)φ at the grid points
    int_phi: Vec<f64>,
    int_lever: Vec<f64>,
    int_moment: Vec<f64>,
    u_l1: f64,
    u_1: f64,
}

/// Solves U(A1) = P_cr·D for A1 and samples the profiles, bending displacement model.
pub fn solve_amplitude(
    geom: &RibbonGeometry,
    section: &SectionProps,
    p_cr: f64,
    d: f64,
) -> Result<ElasticaSolution> {
    solve_amplitude_with(geom, section, p_cr, d, DisplacementModel::Bending)
}

pub fn solve_amplitude_with(
    geom: &RibbonGeometry,
    section: &SectionProps,
    p_cr: f64,
    d: f64,
    displacement: DisplacementModel,
) -> Result<ElasticaSolution> {
    if !(p_cr > 0.0 && p_cr.is_finite()) {
        return Err(Error::domain(format!("critical load {p_cr} must be > 0")));
    }
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("prestressing distance {d} must be >= 0")));
    }
    let l = geom.half_length();
    let shape = TwistShape::new(l);
    let work = p_cr * d;
    let (a1, energy_residual) = if d == 0.0 {
        (0.0, 0.0)
    } else {
        let table = EnergyTable::new(section, &shape, p_cr);
        let energy = |a: f64| table.energy(a);
        let a1 = bisect_amplitude(&energy, work)?;
        (a1, (energy(a1) / work - 1.0).abs())
    };
    Ok(build_solution(
        geom.clone(),
        *section,
        p_cr,
        d,
        a1,
        displacement,
        energy_residual,
        &shape,
    ))
}

fn bisect_amplitude(energy: &dyn Fn(f64) -> f64, work: f64) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = INITIAL_AMPLITUDE_BRACKET;
    while energy(hi) < work {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_AMPLITUDE {
            return Err(Error::NoConvergence(format!(
                "strain energy never reaches the prestress work {work} for A1 <= {MAX_AMPLITUDE}"
            )));
        }
    }
    while hi - lo > AMPLITUDE_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if energy(mid) < work {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[allow(clippy::too_many_arguments)]
fn build_solution(
    geometry: RibbonGeometry,
    section: SectionProps,
    p_cr: f64,
    d: f64,
    a1: f64,
    displacement: DisplacementModel,
    energy_residual: f64,
    shape: &TwistShape,
) -> ElasticaSolution {
    let l = geometry.half_length();
    let n = PROFILE_POINTS;
    let step = l / (n - 1) as f64;
    let z: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { l } else { step * i as f64 })
        .collect();
    let phi_at = |s: f64| a1 * shape.value(s);

    let mut int_phi = vec![0.0; n];
    let mut int_lever = vec![0.0; n];
    let mut int_moment = vec![0.0; n];
    if a1 != 0.0 {
        let rule = gauss8();
        for i in 1..n {
            let (a, b) = (z[i - 1], z[i]);
            let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
            let (mut i0, mut i1, mut i2) = (0.0, 0.0, 0.0);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = mid + half * x;
                let f = w * phi_at(s);
                i0 += f;
                i1 += (l - s) * f;
                i2 += s * (l - s) * f;
            }
            int_phi[i] = int_phi[i - 1] + half * i0;
            int_lever[i] = int_lever[i - 1] + half * i1;
            int_moment[i] = int_moment[i - 1] + half * i2;
        }
    }

    let curvature = p_cr / section.ei_eta;
    let phi: Vec<f64> = z.iter().map(|&s| phi_at(s)).collect();
    let psi: Vec<f64> = int_lever.iter().map(|&i1| -curvature * i1).collect();
    let u: Vec<f64> = (0..n)
        .map(|i| displacement_from(displacement, curvature, z[i], int_phi[i], int_lever[i], int_moment[i]))
        .collect();
    let v: Vec<f64> = z
        .iter()
        .map(|&s| cantilever_deflection(section.ei_xi, p_cr, l, s))
        .collect();

    let mut sol = ElasticaSolution {
        geometry,
        section,
        p_cr,
        d,
        a1,
        displacement,
        energy_residual,
        u_1: u[n - 1],
        z,
        phi,
        psi,
        u,
        v,
        int_phi,
        int_lever,
        int_moment,
        u_l1: 0.0,
    };
    sol.u_l1 = sol.deflection_at(sol.geometry.l1);
    sol
}

fn displacement_from(
    model: DisplacementModel,
    curvature: f64,
    z: f64,
    int_phi: f64,
    int_lever: f64,
    int_moment: f64,
) -> f64 {
    match model {
        // ∫₀^z ψ = −(P/EI)∫₀^z (z − s)(l − s)φ ds
        DisplacementModel::Bending => -curvature * (z * int_lever - int_moment),
        DisplacementModel::Twist => int_phi,
    }
}

fn cantilever_deflection(ei_xi: f64, p: f64, l: f64, z: f64) -> f64 {
    -(p / ei_xi) * (l * z * z / 2.0 - z * z * z / 6.0)
}

impl ElasticaSolution {
    pub fn geometry(&self) -> &RibbonGeometry {
        &self.geometry
    }

    pub fn section(&self) -> &SectionProps {
        &self.section
    }

    pub fn half_length(&self) -> f64 {
        self.geometry.half_length()
    }

    pub fn critical_load(&self) -> f64 {
        self.p_cr
    }

    pub fn prestress_distance(&self) -> f64 {
        self.d
    }

    /// Twist amplitude A1, mm^(-1/2).
    pub fn amplitude(&self) -> f64 {
        self.a1
    }

    pub fn displacement_model(&self) -> DisplacementModel {
        self.displacement
    }

    /// |U(A1)/V − 1| measured at the accepted root (0 when D = 0).
    pub fn energy_residual(&self) -> f64 {
        self.energy_residual
    }

    pub fn grid(&self) -> &[f64] {
        &self.z
    }

    pub fn twist_samples(&self) -> &[f64] {
        &self.phi
    }

    pub fn bending_samples(&self) -> &[f64] {
        &self.psi
    }

    pub fn deflection_samples(&self) -> &[f64] {
        &self.u
    }

    pub fn in_plane_samples(&self) -> &[f64] {
        &self.v
    }

    /// u at z = L1 (signed).
    pub fn u_l1(&self) -> f64 {
        self.u_l1
    }

    /// u at z = l (signed).
    pub fn u_1(&self) -> f64 {
        self.u_1
    }

    /// External work V = P_cr·D.
    pub fn external_work(&self) -> f64 {
        self.p_cr * self.d
    }

    /// U(A1) recomputed by adaptive Simpson.
    pub fn strain_energy(&self) -> f64 {
        strain_energy(&self.section, self.half_length(), self.p_cr, self.a1)
    }

    fn check_z(&self, z: f64) -> Result<()> {
        let l = self.half_length();
        if !(0.0..=l).contains(&z) {
            return Err(Error::domain(format!("z = {z} outside [0, {l}]")));
        }
        Ok(())
    }

    fn shape(&self) -> TwistShape {
        TwistShape::new(self.half_length())
    }

    fn twist_at(&self, z: f64) -> f64 {
        self.a1 * self.shape().value(z)
    }

    /// dφ/dz at z.
    pub fn twist_slope(&self, z: f64) -> Result<f64> {
        self.check_z(z)?;
        Ok(self.a1 * self.shape().slope(z))
    }

    // Cumulative integrals at arbitrary z: grid value plus a Gauss panel.
    fn integrals_at(&self, z: f64) -> (f64, f64, f64) {
        let l = self.half_length();
        let step = l / (PROFILE_POINTS - 1) as f64;
        let i = ((z / step).floor() as usize).min(PROFILE_POINTS - 1);
        let zi = self.z[i];
        if z == zi || self.a1 == 0.0 {
            return (self.int_phi[i], self.int_lever[i], self.int_moment[i]);
        }
        let shape = self.shape();
        let a1 = self.a1;
        let phi = |s: f64| a1 * shape.value(s);
        let rule = gauss8();
        (
            self.int_phi[i] + rule.integrate(phi, zi, z),
            self.int_lever[i] + rule.integrate(|s| (l - s) * phi(s), zi, z),
            self.int_moment[i] + rule.integrate(|s| s * (l - s) * phi(s), zi, z),
        )
    }

    fn bending_at(&self, z: f64) -> f64 {
        let (_, lever, _) = self.integrals_at(z);
        -self.p_cr / self.section.ei_eta * lever
    }

    fn deflection_at(&self, z: f64) -> f64 {
        let (phi, lever, moment) = self.integrals_at(z);
        displacement_from(
            self.displacement,
            self.p_cr / self.section.ei_eta,
            z,
            phi,
            lever,
            moment,
        )
    }
}

/// φ(z) = A1·√(l − z)·J_{1/4}(z0((l − z)/l)²).
pub fn twist_profile(sol: &ElasticaSolution, z: f64) -> Result<f64> {
    sol.check_z(z)?;
    Ok(sol.twist_at(z))
}

/// Unit-amplitude twist √(l − z)·J_{1/4}(z0((l − z)/l)²) for 0 ≤ z ≤ l.
pub fn twist_shape_value(l: f64, z: f64) -> f64 {
    TwistShape::new(l).value(z)
}

/// ψ(z) = −(P_cr/EI_η)·∫₀^z φ(s)(l − s) ds.
pub fn bending_angle(sol: &ElasticaSolution, z: f64) -> Result<f64> {
    sol.check_z(z)?;
    Ok(sol.bending_at(z))
}

/// u(z) under the solution's displacement model.
pub fn deflection(sol: &ElasticaSolution, z: f64) -> Result<f64> {
    sol.check_z(z)?;
    Ok(sol.deflection_at(z))
}

/// In-plane cantilever deflection v(z) = −(P/EI_ξ)(l·z²/2 − z³/6).
pub fn in_plane_deflection(section: &SectionProps, p: f64, l: f64, z: f64) -> Result<f64> {
    if !(0.0..=l).contains(&z) {
        return Err(Error::domain(format!("z = {z} outside [0, {l}]")));
    }
    Ok(cantilever_deflection(section.ei_xi, p, l, z))
}

/// Full pipeline: section, critical load, prestressing distance, amplitude.
pub fn solve(
    geom: &RibbonGeometry,
    mat: &MaterialSpec,
    shear: ShearFormula,
    displacement: DisplacementModel,
) -> Result<ElasticaSolution> {
    geom.validate()?;
    mat.validate()?;
    let section = section_properties(geom, mat, shear);
    let p_cr = critical_load(&section, geom.half_length());
    let d = prestress_distance(geom)?;
    solve_amplitude_with(geom, &section, p_cr, d, displacement)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petg() -> MaterialSpec {
        MaterialSpec::new("PETG", 1700.0, 0.35, 1.25e-9).unwrap()
    }

    fn fig2_geometry() -> RibbonGeometry {
        RibbonGeometry::new(12.5, 75.0, 15.0, 0.381, 10f64.to_radians()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn section_example() {
        let geom = RibbonGeometry::new(12.5, 74.5, 15.0, 0.762, 0.0).unwrap();
        let s = section_properties(&geom, &petg(), ShearFormula::Paper);
        assert!((s.ei_eta - 940.2).abs() < 0.05, "{}", s.ei_eta);
        assert!((s.g - 1307.7).abs() < 0.05, "{}", s.g);
        assert!((s.c - 2893.0).abs() < 0.1, "{}", s.c);
        assert!(rel(s.ei_xi, 1700.0 * 0.762 * 3375.0 / 12.0) < 1e-15);
    }

    #[test]
    fn section_thickness_scaling() {
        let thin = RibbonGeometry::new(12.5, 75.0, 15.0, 0.381, 0.0).unwrap();
        let thick = RibbonGeometry { t: 0.762, ..thin.clone() };
        let a = section_properties(&thin, &petg(), ShearFormula::Paper);
        let b = section_properties(&thick, &petg(), ShearFormula::Paper);
        assert!(rel(b.ei_eta, 8.0 * a.ei_eta) < 1e-15);
        assert!(rel(b.c, 8.0 * a.c) < 1e-15);
        assert!(rel(b.ei_xi, 2.0 * a.ei_xi) < 1e-15);
    }

    #[test]
    fn shear_formulas_agree_without_poisson_effect() {
        assert_eq!(
            ShearFormula::Paper.shear_modulus(1700.0, 0.0),
            ShearFormula::Standard.shear_modulus(1700.0, 0.0)
        );
        assert!(rel(ShearFormula::Standard.shear_modulus(1700.0, 0.35), 629.6296296) < 1e-9);
    }

    #[test]
    fn critical_load_example() {
        let s = SectionProps { ei_xi: 1.0, ei_eta: 940.2, c: 2893.0, g: 1.0 };
        let p = critical_load(&s, 87.0);
        assert!((p - 1.212).abs() < 5e-4, "{p}");
        assert!(rel(critical_load(&s, 174.0), p / 4.0) < 1e-15);
        let coefficient = p * 87.0 * 87.0 / (940.2f64 * 2893.0).sqrt();
        assert!((coefficient - 5.5618).abs() < 2e-4);
    }

    #[test]
    fn prestress_distance_cases() {
        let d = prestress_distance(&fig2_geometry()).unwrap();
        assert!((d - 25.65).abs() < 0.01, "{d}");
        let square = RibbonGeometry::new(10.0, 10.0, 15.0, 0.5, 0.0).unwrap();
        assert!(rel(prestress_distance(&square).unwrap(), 10.0 * std::f64::consts::FRAC_PI_2) < 1e-15);
        let long = RibbonGeometry::new(1.0, 1e4, 15.0, 0.5, 0.0).unwrap();
        assert!(rel(prestress_distance(&long).unwrap(), 1.0) < 1e-8);
        let quoted = fig2_geometry().with_prestress_distance(11.75);
        assert_eq!(prestress_distance(&quoted).unwrap(), 11.75);
        assert!(prestress_mismatch(&quoted).is_some());
        assert!(prestress_mismatch(&fig2_geometry().with_prestress_distance(d)).is_none());
    }

    #[test]
    fn short_span_needs_override() {
        let geom = RibbonGeometry {
            l1: 20.0,
            l2: 10.0,
            h: 15.0,
            t: 0.5,
            theta: 0.0,
            d_override: None,
        };
        assert!(geom.validate().is_err());
        assert!(geometric_prestress_distance(&geom).is_err());
        assert!(geom.with_prestress_distance(5.0).validate().is_ok());
    }

    #[test]
    fn geometry_and_material_validation() {
        assert!(RibbonGeometry::new(12.5, 75.0, 0.3, 0.381, 0.0).is_err());
        assert!(RibbonGeometry::new(-1.0, 75.0, 15.0, 0.381, 0.0).is_err());
        assert!(MaterialSpec::new("x", 1.0, 0.5, 1.0).is_err());
        assert!(MaterialSpec::new("x", 0.0, 0.3, 1.0).is_err());
        assert!(MaterialSpec::new("", 1.0, 0.3, 1.0).is_err());
    }

    #[test]
    fn zero_prestress_gives_flat_solution() {
        let geom = fig2_geometry().with_prestress_distance(0.0);
        let sol = solve(&geom, &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        assert_eq!(sol.amplitude(), 0.0);
        assert!(sol.twist_samples().iter().all(|&p| p == 0.0));
        assert!(sol.deflection_samples().iter().all(|&u| u == 0.0));
        assert_eq!(sol.u_l1(), 0.0);
    }

    #[test]
    fn boundary_conditions() {
        let sol = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        let l = sol.half_length();
        assert_eq!(twist_profile(&sol, l).unwrap(), 0.0);
        assert!(twist_profile(&sol, 0.0).unwrap().abs() <= 1e-9 * sol.amplitude() * l.sqrt());
        assert_eq!(bending_angle(&sol, 0.0).unwrap(), 0.0);
        assert_eq!(deflection(&sol, 0.0).unwrap(), 0.0);
        assert_eq!(sol.in_plane_samples()[0], 0.0);
        assert!(twist_profile(&sol, l + 1e-9).is_err());
        assert!(bending_angle(&sol, -1e-9).is_err());
    }

    #[test]
    fn midspan_twist() {
        let sol = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        let l = sol.half_length();
        let mid = twist_profile(&sol, l / 2.0).unwrap() / (sol.amplitude() * l.sqrt());
        assert!((mid - 0.542_645_396_286_641_7).abs() < 1e-12, "{mid}");
    }

    #[test]
    fn slope_matches_finite_difference() {
        let shape = TwistShape::new(87.5);
        for z in [0.0f64, 1.0, 20.0, 43.75, 80.0, 87.4, 87.5] {
            let h = 1e-5;
            let (a, b) = ((z - h).max(0.0), (z + h).min(87.5));
            let fd = (shape.value(b) - shape.value(a)) / (b - a);
            assert!((fd - shape.slope(z)).abs() < 1e-6, "z={z}: {fd} vs {}", shape.slope(z));
        }
    }

    #[test]
    fn twist_positive_inside() {
        let sol = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        let n = sol.grid().len();
        assert!(sol.twist_samples()[1..n - 1].iter().all(|&p| p > 0.0));
    }

    #[test]
    fn energy_balance_at_root() {
        let sol = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        assert!(sol.energy_residual() <= 1e-8);
        assert!(rel(sol.strain_energy(), sol.external_work()) <= 1e-8);
    }

    #[test]
    fn tabulated_energy_matches_adaptive_simpson() {
        let geom = fig2_geometry();
        let section = section_properties(&geom, &petg(), ShearFormula::Paper);
        let l = geom.half_length();
        let p = critical_load(&section, l);
        let table = EnergyTable::new(&section, &TwistShape::new(l), p);
        for a in [0.01, 0.08, 0.3] {
            assert!(rel(table.energy(a), strain_energy(&section, l, p, a)) < 1e-10);
        }
    }

    #[test]
    fn frozen_amplitudes() {
        // scipy quad + brentq reference, independent of this module
        let paper = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        let standard = solve(&fig2_geometry(), &petg(), ShearFormula::Standard, DisplacementModel::Bending).unwrap();
        assert!(rel(paper.amplitude(), 0.077_930_7) < 1e-5, "{}", paper.amplitude());
        assert!(rel(standard.amplitude(), 0.094_031_4) < 1e-5, "{}", standard.amplitude());
    }

    #[test]
    fn bending_angle_and_deflection_consistency() {
        let sol = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        let l = sol.half_length();
        let z = l / 2.0;
        let delta = l * 1e-4;
        let fd = (deflection(&sol, z + delta).unwrap() - deflection(&sol, z - delta).unwrap()) / (2.0 * delta);
        let psi = bending_angle(&sol, z).unwrap();
        assert!(rel(fd, psi) < 1e-4, "{fd} vs {psi}");
        // grid samples agree with point evaluation
        let i = 300;
        assert!(rel(bending_angle(&sol, sol.grid()[i]).unwrap(), sol.bending_samples()[i]) < 1e-12);
        assert!(rel(deflection(&sol, sol.grid()[i]).unwrap(), sol.deflection_samples()[i]) < 1e-12);
    }

    #[test]
    fn bending_angle_monotone() {
        let sol = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        let psi = sol.bending_samples();
        assert!(psi.windows(2).all(|w| w[1].abs() >= w[0].abs()));
        let u = sol.deflection_samples();
        assert!(u.windows(2).all(|w| w[1].abs() >= w[0].abs()));
        assert!(sol.u_1().abs() >= sol.u_l1().abs() && sol.u_l1().abs() > 0.0);
    }

    #[test]
    fn twist_displacement_model() {
        let sol = solve(&fig2_geometry(), &petg(), ShearFormula::Paper, DisplacementModel::Twist).unwrap();
        let z = 30.0;
        let delta = 1e-3;
        let fd = (deflection(&sol, z + delta).unwrap() - deflection(&sol, z - delta).unwrap()) / (2.0 * delta);
        assert!(rel(fd, twist_profile(&sol, z).unwrap()) < 1e-6);
        assert!(sol.u_l1() > 0.0);
    }

    #[test]
    fn in_plane_deflection_cases() {
        let s = SectionProps { ei_xi: 5000.0, ei_eta: 1.0, c: 1.0, g: 1.0 };
        assert_eq!(in_plane_deflection(&s, 1.212, 87.0, 0.0).unwrap(), 0.0);
        let tip = in_plane_deflection(&s, 1.212, 87.0, 87.0).unwrap();
        assert!(rel(tip.abs(), 1.212 * 87f64.powi(3) / (3.0 * 5000.0)) < 1e-14);
        // double quadrature of the curvature −P(l − z)/EI
        let z = 50.0;
        let slope = |x: f64| crate::quadrature::gauss8().integrate(|s| -1.212 * (87.0 - s) / 5000.0, 0.0, x);
        let v = crate::quadrature::gauss8().composite(slope, 0.0, z, 4);
        assert!(rel(in_plane_deflection(&s, 1.212, 87.0, z).unwrap(), v) < 1e-12);
        assert!(in_plane_deflection(&s, 1.0, 87.0, 90.0).is_err());
    }

    #[test]
    fn identical_sections_identical_solutions() {
        let geom = fig2_geometry();
        let a = MaterialSpec::new("a", 2000.0, 0.3, 1e-9).unwrap();
        let b = MaterialSpec::new("b", 2000.0, 0.3, 5e-9).unwrap();
        let sa = solve(&geom, &a, ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        let sb = solve(&geom, &b, ShearFormula::Paper, DisplacementModel::Bending).unwrap();
        assert_eq!(sa, sb);
    }
}
