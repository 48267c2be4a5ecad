//! Design quantities derived from a solved ribbon and an actuator:
//! energy barrier, actuation torque, snap timescale, operating frequencies
//! and the design factor.

use crate::elastica::{DisplacementModel, ElasticaSolution, MaterialSpec, ShearFormula};
use crate::error::{Error, Result};

/// Note attached to every report about how the servo frequency is formed.
pub const SERVO_FREQUENCY_NOTE: &str =
    "f_m_servo = speed * L_horn / (4 * |u(L1)|): horn-tip linear speed over the snap stroke";

/// Actuator record. Torque in mm·N, speed in rad/s, mass in g, horn in mm.
#[derive(Debug, Clone, PartialEq)]
pub struct ServoSpec {
    pub name: String,
    pub stall_torque: f64,
    pub speed: f64,
    pub weight: f64,
    pub horn_length: f64,
    /// Maximum frequency as listed by the catalog source, Hz. Reference
    /// only; design frequencies are computed from the snap stroke.
    pub listed_frequency: Option<f64>,
}

impl ServoSpec {
    pub fn new(
        name: impl Into<String>,
        stall_torque: f64,
        speed: f64,
        weight: f64,
        horn_length: f64,
    ) -> Result<Self> {
        let servo = ServoSpec {
            name: name.into(),
            stall_torque,
            speed,
            weight,
            horn_length,
            listed_frequency: None,
        };
        servo.validate()?;
        Ok(servo)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::invalid("servo", "name must not be empty"));
        }
        let fields = [
            ("T_servo", self.stall_torque),
            ("speed", self.speed),
            ("weight", self.weight),
            ("L_horn", self.horn_length),
            ("listed frequency", self.listed_frequency.unwrap_or(1.0)),
        ];
        for (field, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    format!("servo '{}'", self.name),
                    format!("{field} = {value} must be > 0"),
                ));
            }
        }
        Ok(())
    }
}

/// U_barr = 3·P_cr·D, mm·N.
pub fn energy_barrier(p_cr: f64, d: f64) -> f64 {
    3.0 * p_cr * d
}

/// T_act = 2·U_barr·L_horn / (2·u(L1)), mm·N. `u_l1` is taken by magnitude.
pub fn actuation_torque(u_barr: f64, horn_length: f64, u_l1: f64) -> Result<f64> {
    let stroke = u_l1.abs();
    if stroke == 0.0 {
        return Err(Error::DegenerateGeometry(
            "u(L1) = 0: no snap displacement, actuation torque undefined".into(),
        ));
    }
    Ok(2.0 * u_barr * horn_length / (2.0 * stroke))
}

/// t* = (2l)² / (t·√(E/ρ)), s.
pub fn snap_timescale(l: f64, t: f64, e: f64, rho: f64) -> f64 {
    (2.0 * l).powi(2) / (t * (e / rho).sqrt())
}

/// f_m,HCM = 1/(2t*).
pub fn hcm_frequency(t_star: f64) -> f64 {
    1.0 / (2.0 * t_star)
}

/// f_m,servo = speed·L_horn / (4·|u(L1)|).
pub fn servo_frequency(servo: &ServoSpec, u_l1: f64) -> Result<f64> {
    let stroke = u_l1.abs();
    if stroke == 0.0 {
        return Err(Error::DegenerateGeometry(
            "u(L1) = 0: servo stroke frequency undefined".into(),
        ));
    }
    Ok(servo.speed * servo.horn_length / (4.0 * stroke))
}

pub fn design_frequency(f_hcm: f64, f_servo: f64) -> f64 {
    f_hcm.min(f_servo)
}

/// α = T_servo / T_act.
pub fn design_factor(stall_torque: f64, t_act: f64) -> Result<f64> {
    if t_act == 0.0 {
        return Err(Error::DegenerateGeometry("required torque is zero".into()));
    }
    Ok(stall_torque / t_act)
}

/// What went into a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub material: MaterialSpec,
    pub servo: Option<ServoSpec>,
    pub shear: ShearFormula,
    pub displacement: DisplacementModel,
    pub notes: Vec<String>,
}

/// Derived design metrics of one ribbon + servo combination.
///
/// Servo-dependent fields are `None` when no servo was given or when the
/// design is degenerate (no snap stroke).
#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub p_cr: f64,
    pub d: f64,
    pub a1: f64,
    pub u_l1: f64,
    pub u_barr: f64,
    pub t_act: Option<f64>,
    pub t_star: f64,
    pub f_m_hcm: f64,
    pub f_m_servo: Option<f64>,
    pub f_design: Option<f64>,
    pub alpha: Option<f64>,
    /// Why the design cannot be actuated, if it cannot.
    pub infeasible: Option<String>,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}

impl DesignReport {
    pub fn is_feasible(&self) -> bool {
        self.infeasible.is_none()
    }
}

/// Composes all metrics for a solved ribbon.
pub fn design_report(
    sol: &ElasticaSolution,
    material: &MaterialSpec,
    servo: Option<&ServoSpec>,
    shear: ShearFormula,
) -> DesignReport {
    let geom = sol.geometry();
    let p_cr = sol.critical_load();
    let d = sol.prestress_distance();
    let u_barr = energy_barrier(p_cr, d);
    let t_star = snap_timescale(sol.half_length(), geom.t, material.e, material.rho);
    let f_m_hcm = hcm_frequency(t_star);
    let mut warnings = Vec::new();
    if let Some(w) = crate::elastica::prestress_mismatch(geom) {
        warnings.push(w);
    }
    let mut report = DesignReport {
        p_cr,
        d,
        a1: sol.amplitude(),
        u_l1: sol.u_l1(),
        u_barr,
        t_act: None,
        t_star,
        f_m_hcm,
        f_m_servo: None,
        f_design: None,
        alpha: None,
        infeasible: None,
        warnings,
        provenance: Provenance {
            material: material.clone(),
            servo: servo.cloned(),
            shear,
            displacement: sol.displacement_model(),
            notes: vec![SERVO_FREQUENCY_NOTE.to_string()],
        },
    };
    if u_barr == 0.0 {
        report.infeasible = Some("zero energy barrier (D = 0): nothing to snap".into());
        return report;
    }
    let Some(servo) = servo else {
        return report;
    };
    let servo_part = actuation_torque(u_barr, servo.horn_length, sol.u_l1()).and_then(|t_act| {
        let f_servo = servo_frequency(servo, sol.u_l1())?;
        Ok((t_act, f_servo, design_factor(servo.stall_torque, t_act)?))
    });
    match servo_part {
        Ok((t_act, f_servo, alpha)) => {
            report.t_act = Some(t_act);
            report.f_m_servo = Some(f_servo);
            report.f_design = Some(design_frequency(f_m_hcm, f_servo));
            report.alpha = Some(alpha);
        }
        Err(e) => report.infeasible = Some(e.to_string()),
    }
    report
}

/// Rounds to three significant figures for display.
pub fn three_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = x.abs().log10().floor() as i32;
    let decimals = (2 - digits).max(0) as usize;
    let scale = 10f64.powi(2 - digits);
    format!("{:.*}", decimals, (x * scale).round() / scale)
}
