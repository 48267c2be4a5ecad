//! Independent checks of the closed-form solution.
//!
//! The buckling load is recovered by shooting on the twist equation
//! `C·φ″ + P²s²/EI_η·φ = 0` (s measured from the loaded end) with an
//! adaptive Dormand–Prince integrator, and the solution's energies and
//! profiles are recomputed by adaptive Simpson quadrature, which shares no
//! code with the Gauss–Legendre tables used by the solver.

use crate::catalog::Catalog;
use crate::elastica::{
    self, critical_load, strain_energy, twist_profile, DisplacementModel, ElasticaSolution,
    RibbonGeometry, SectionProps, ShearFormula,
};
use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Local error tolerance of the integrator.
pub const ODE_TOL: f64 = 1e-10;
/// Relative bracket width at which eigenload bisection may stop.
pub const EIGENLOAD_REL_TOL: f64 = 1e-8;
/// Allowed |φ(l)| relative to max|φ| at the returned eigenload.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Start of integration as a fraction of l.
const START_FRACTION: f64 = 1e-6;
const MODE_SAMPLES: usize = 101;
const MAX_STEPS: usize = 100_000;
const SCAN_POINTS: usize = 400;
const CROSSCHECK_POINTS: usize = 101;
const CROSSCHECK_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    /// Eigenload, N.
    pub eigenload: f64,
    /// Distance from the loaded end, mm (101 uniform samples on [0, l]).
    pub s: Vec<f64>,
    /// Mode shape normalised to max|φ| = 1 and positive near s = 0.
    pub phi: Vec<f64>,
    /// |φ(l)| / max|φ|.
    pub residual: f64,
    /// Accepted integrator steps in the final shot.
    pub steps: usize,
}

impl ShootingResult {
    /// Sign changes of the mode shape strictly inside (0, l).
    pub fn interior_roots(&self) -> usize {
        let inner = &self.phi[1..self.phi.len() - 1];
        inner.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State = [f64; 2];

/// Integrates y′ = f(x, y) from x0 to x1, adapting the step `h` in place.
fn dopri5<F: Fn(f64, &State) -> State>(
    f: &F,
    x0: f64,
    x1: f64,
    y: &mut State,
    h: &mut f64,
    steps: &mut usize,
) -> Result<()> {
    let mut x = x0;
    let mut k = [[0.0; 2]; 7];
    while x < x1 {
        if *steps >= MAX_STEPS {
            return Err(Error::NoConvergence(format!(
                "integrator exceeded {MAX_STEPS} steps"
            )));
        }
        let last = x + *h >= x1;
        let step = if last { x1 - x } else { *h };
        for i in 0..7 {
            let mut yi = *y;
            for (j, kj) in k.iter().enumerate().take(i) {
                yi[0] += step * A[i][j] * kj[0];
                yi[1] += step * A[i][j] * kj[1];
            }
            k[i] = f(x + C[i] * step, &yi);
        }
        let mut y5 = *y;
        let mut err = 0.0;
        for c in 0..2 {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for i in 0..7 {
                d5 += B5[i] * k[i][c];
                d4 += B4[i] * k[i][c];
            }
            y5[c] += step * d5;
            let scale = ODE_TOL + ODE_TOL * y[c].abs().max(y5[c].abs());
            let e = step * (d5 - d4) / scale;
            err += e * e;
        }
        let err = (err / 2.0).sqrt();
        if err <= 1.0 {
            x = if last { x1 } else { x + step };
            *y = y5;
            *steps += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if !last || err > 1.0 {
            *h = step * factor;
        }
    }
    Ok(())
}

struct Shot {
    /// φ at the sample points σ_i = i/100 (σ = s/l), unnormalised.
    phi: Vec<f64>,
    steps: usize,
}

// In σ = s/l the equation is φ″ = −λσ²φ with λ = P²l⁴/(EI_η·C).
fn shoot(lambda: f64) -> Result<Shot> {
    let rhs = |x: f64, y: &State| [y[1], -lambda * x * x * y[0]];
    let mut y = [START_FRACTION, 1.0];
    let mut h = 1e-3;
    let mut steps = 0;
    let mut phi = Vec::with_capacity(MODE_SAMPLES);
    phi.push(0.0);
    let mut x = START_FRACTION;
    for i in 1..MODE_SAMPLES {
        let target = i as f64 / (MODE_SAMPLES - 1) as f64;
        dopri5(&rhs, x, target, &mut y, &mut h, &mut steps)?;
        x = target;
        phi.push(y[0]);
    }
    Ok(Shot { phi, steps })
}

fn end_value(lambda: f64) -> Result<f64> {
    Ok(*shoot(lambda)?.phi.last().unwrap())
}

fn check_inputs(section: &SectionProps, l: f64) -> Result<f64> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::domain(format!("half-length must be > 0, got {l}")));
    }
    if !(section.ei_eta > 0.0 && section.c > 0.0) {
        return Err(Error::domain("section rigidities must be > 0"));
    }
    Ok(l.powi(4) / (section.ei_eta * section.c))
}

fn refine(section: &SectionProps, l: f64, mut lo: f64, mut hi: f64) -> Result<ShootingResult> {
    let k = check_inputs(section, l)?;
    let lambda = |p: f64| p * p * k;
    let mut f_lo = end_value(lambda(lo))?;
    loop {
        let mid = 0.5 * (lo + hi);
        let shot = shoot(lambda(mid))?;
        let max = shot.phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let end = *shot.phi.last().unwrap();
        let residual = end.abs() / max;
        let collapsed = mid <= lo || mid >= hi;
        if ((hi - lo) / mid <= EIGENLOAD_REL_TOL && residual <= RESIDUAL_TOL) || collapsed {
            if residual > RESIDUAL_TOL {
                return Err(Error::NoConvergence(format!(
                    "shooting residual {residual:e} above {RESIDUAL_TOL:e}"
                )));
            }
            return Ok(ShootingResult {
                eigenload: mid,
                s: (0..MODE_SAMPLES)
                    .map(|i| l * i as f64 / (MODE_SAMPLES - 1) as f64)
                    .collect(),
                phi: shot.phi.iter().map(|v| v / max).collect(),
                residual,
                steps: shot.steps,
            });
        }
        if (end > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = end;
        } else {
            hi = mid;
        }
    }
}

/// Smallest buckling load, bracketed at the closed-form estimate ± 50%.
pub fn shooting_eigenload(section: &SectionProps, l: f64) -> Result<ShootingResult> {
    let k = check_inputs(section, l)?;
    let estimate = critical_load(section, l);
    let (lo, hi) = (0.5 * estimate, 1.5 * estimate);
    let (a, b) = (end_value(lo * lo * k)?, end_value(hi * hi * k)?);
    if a * b > 0.0 {
        return shooting_eigenload_scan(section, l);
    }
    refine(section, l, lo, hi)
}

/// Slow variant that scans [0.01, 100]× the estimate for the first sign change.
pub fn shooting_eigenload_scan(section: &SectionProps, l: f64) -> Result<ShootingResult> {
    let k = check_inputs(section, l)?;
    let estimate = critical_load(section, l);
    let (lo, hi) = (0.01 * estimate, 100.0 * estimate);
    let ratio = (hi / lo).powf(1.0 / SCAN_POINTS as f64);
    let mut p = lo;
    let mut prev = end_value(p * p * k)?;
    for _ in 0..SCAN_POINTS {
        let next = p * ratio;
        let value = end_value(next * next * k)?;
        if prev * value <= 0.0 {
            return refine(section, l, p, next);
        }
        p = next;
        prev = value;
    }
    Err(Error::NoConvergence(format!(
        "no eigenload in [{lo:e}, {hi:e}] N"
    )))
}

/// Max |a − b| over the closed-form twist normalised like the shooting mode.
pub fn mode_shape_deviation(result: &ShootingResult, sol: &ElasticaSolution) -> Result<f64> {
    let l = sol.half_length();
    let closed: Vec<f64> = result
        .s
        .iter()
        .map(|&s| elastica::twist_shape_value(l, (l - s).max(0.0)))
        .collect();
    let max = closed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(closed
        .iter()
        .zip(&result.phi)
        .fold(0.0f64, |m, (c, p)| m.max((c / max - p).abs())))
}

/// Relative deviations between the solution and independent recomputation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CrosscheckReport {
    /// |U − V|/V with U by adaptive Simpson.
    pub energy_residual: f64,
    /// max |ψ − ψ_ref| / max|ψ_ref|.
    pub psi_deviation: f64,
    /// max |u − u_ref| / max|u_ref|.
    pub u_deviation: f64,
    /// Central differences of u against its integrand (ψ, or φ under the
    /// twist model), relative to the integrand's maximum.
    pub slope_deviation: f64,
    /// Central differences of φ against the analytic dφ/dz.
    pub twist_slope_deviation: f64,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn relative_sup(a: &[f64], b: &[f64]) -> f64 {
    let scale = max_abs(b);
    if scale == 0.0 {
        return max_abs(a);
    }
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Recomputes U, ψ and u and finite-difference slopes for `sol`.
pub fn quadrature_crosscheck(sol: &ElasticaSolution) -> Result<CrosscheckReport> {
    if sol.amplitude() == 0.0 {
        return Ok(CrosscheckReport::default());
    }
    let l = sol.half_length();
    let p = sol.critical_load();
    let section = sol.section();
    let k = p / section.ei_eta;
    let phi = |s: f64| twist_profile(sol, s).unwrap();

    let work = sol.external_work();
    let energy = strain_energy(section, l, p, sol.amplitude());
    let energy_residual = ((energy - work) / work).abs();

    let zs: Vec<f64> = (0..CROSSCHECK_POINTS)
        .map(|i| (l * i as f64 / (CROSSCHECK_POINTS - 1) as f64).min(l))
        .collect();
    let psi_ref: Vec<f64> = zs
        .iter()
        .map(|&z| -k * adaptive_simpson(|s| phi(s) * (l - s), 0.0, z, CROSSCHECK_TOL))
        .collect();
    let u_ref: Vec<f64> = zs
        .iter()
        .map(|&z| match sol.displacement_model() {
            DisplacementModel::Bending => {
                -k * adaptive_simpson(|s| (z - s) * (l - s) * phi(s), 0.0, z, CROSSCHECK_TOL)
            }
            DisplacementModel::Twist => adaptive_simpson(phi, 0.0, z, CROSSCHECK_TOL),
        })
        .collect();
    let psi: Vec<f64> = zs
        .iter()
        .map(|&z| elastica::bending_angle(sol, z))
        .collect::<Result<_>>()?;
    let u: Vec<f64> = zs
        .iter()
        .map(|&z| elastica::deflection(sol, z))
        .collect::<Result<_>>()?;

    let h = 1e-4 * l;
    let interior = &zs[1..zs.len() - 1];
    let mut fd_u = Vec::with_capacity(interior.len());
    let mut integrand = Vec::with_capacity(interior.len());
    let mut fd_phi = Vec::with_capacity(interior.len());
    let mut dphi = Vec::with_capacity(interior.len());
    for &z in interior {
        fd_u.push((elastica::deflection(sol, z + h)? - elastica::deflection(sol, z - h)?) / (2.0 * h));
        integrand.push(match sol.displacement_model() {
            DisplacementModel::Bending => elastica::bending_angle(sol, z)?,
            DisplacementModel::Twist => phi(z),
        });
        fd_phi.push((phi(z + h) - phi(z - h)) / (2.0 * h));
        dphi.push(sol.twist_slope(z)?);
    }

    Ok(CrosscheckReport {
        energy_residual,
        psi_deviation: relative_sup(&psi, &psi_ref),
        u_deviation: relative_sup(&u, &u_ref),
        slope_deviation: relative_sup(&fd_u, &integrand),
        twist_slope_deviation: relative_sup(&fd_phi, &dphi),
    })
}

/// θ = 10°, L2/L1 = 6, h = 15 mm, L1 = 12.5 mm, t = 0.381 mm.
pub fn reference_geometry() -> RibbonGeometry {
    RibbonGeometry::new(12.5, 75.0, 15.0, 0.381, 10f64.to_radians())
        .expect("reference geometry is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    fn new(name: String, value: f64, threshold: f64) -> Self {
        Check { name, value, threshold }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

/// Every material in `cat` at the reference geometry (using its first
/// thickness when 0.381 mm is not listed), under both shear formulas.
pub fn verify_suite(cat: &Catalog) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for material in &cat.materials {
        let mut geom = reference_geometry();
        if !material.has_thickness(geom.t) {
            geom.t = material.thicknesses[0];
        }
        for shear in [ShearFormula::Paper, ShearFormula::Standard] {
            let sol = elastica::solve(&geom, &material.spec, shear, DisplacementModel::Bending)?;
            let tag = format!("{} t={} {}", material.spec.name, geom.t, shear);
            let shot = shooting_eigenload(sol.section(), sol.half_length())?;
            let p = sol.critical_load();
            checks.push(Check::new(
                format!("{tag}: eigenload vs P_cr"),
                ((shot.eigenload - p) / p).abs(),
                1e-3,
            ));
            checks.push(Check::new(
                format!("{tag}: mode shape sup-norm"),
                mode_shape_deviation(&shot, &sol)?,
                1e-4,
            ));
            checks.push(Check::new(
                format!("{tag}: interior roots of mode"),
                shot.interior_roots() as f64,
                0.0,
            ));
            let x = quadrature_crosscheck(&sol)?;
            checks.push(Check::new(format!("{tag}: |U - V|/V"), x.energy_residual, 1e-6));
            checks.push(Check::new(format!("{tag}: psi deviation"), x.psi_deviation, 1e-6));
            checks.push(Check::new(format!("{tag}: u deviation"), x.u_deviation, 1e-6));
            checks.push(Check::new(format!("{tag}: du/dz finite difference"), x.slope_deviation, 1e-4));
            checks.push(Check::new(
                format!("{tag}: dphi/dz finite difference"),
                x.twist_slope_deviation,
                1e-4,
            ));
        }
    }
    Ok(checks)
}
