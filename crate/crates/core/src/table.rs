//! Delimited output tables with units in the header.
//!
//! Numbers are written in canonical units with round-trip precision; rows
//! end in LF so repeated runs compare byte for byte.

use std::path::Path;

use crate::catalog::format_number;
use crate::error::{Error, Result};
use crate::metrics::DesignReport;
use crate::search::DesignPoint;

/// Columns shared by every design row.
pub const DESIGN_COLUMNS: [&str; 22] = [
    "material",
    "t [mm]",
    "h [mm]",
    "L1 [mm]",
    "L2 [mm]",
    "l [mm]",
    "theta [deg]",
    "D [mm]",
    "servo",
    "shear_formula",
    "displacement_model",
    "P_cr [N]",
    "A1 [mm^-1/2]",
    "u_L1 [mm]",
    "U_barr [mm*N]",
    "T_act [mm*N]",
    "t_star [s]",
    "f_m_hcm [Hz]",
    "f_m_servo [Hz]",
    "f_design [Hz]",
    "alpha [-]",
    "status",
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Result<Self> {
        let header: Vec<String> = header.into_iter().map(Into::into).collect();
        for (i, h) in header.iter().enumerate() {
            if header[..i].contains(h) {
                return Err(Error::invalid("table header", format!("duplicate column '{h}'")));
            }
        }
        Ok(OutputTable {
            header,
            rows: Vec::new(),
        })
    }

    /// A table with the design columns, optionally after `leading` columns.
    pub fn designs(leading: &[&str]) -> Self {
        Self::new(leading.iter().copied().chain(DESIGN_COLUMNS)).expect("design columns are unique")
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::invalid(
                "table row",
                format!("{} fields for {} columns", row.len(), self.header.len()),
            ));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for row in &self.rows {
            w.write_record(row).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }
}

fn num(x: f64) -> String {
    format_number(x)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Design columns for one point and its outcome (`Err` holds the reason
/// the point could not be evaluated).
pub fn design_row(point: &DesignPoint, outcome: std::result::Result<&DesignReport, &str>) -> Vec<String> {
    let g = &point.geometry;
    let mut row = vec![
        point.material.clone(),
        num(g.t),
        num(g.h),
        num(g.l1),
        num(g.l2),
        num(g.half_length()),
        num(g.theta.to_degrees()),
    ];
    match outcome {
        Ok(r) => {
            row.push(num(r.d));
            row.extend([
                point.servo.clone().unwrap_or_default(),
                point.shear.to_string(),
                point.displacement.to_string(),
                num(r.p_cr),
                num(r.a1),
                num(r.u_l1),
                num(r.u_barr),
                opt(r.t_act),
                num(r.t_star),
                num(r.f_m_hcm),
                opt(r.f_m_servo),
                opt(r.f_design),
                opt(r.alpha),
                r.infeasible.clone().map_or("ok".to_string(), |why| format!("infeasible: {why}")),
            ]);
        }
        Err(reason) => {
            row.push(opt(g.d_override));
            row.extend([
                point.servo.clone().unwrap_or_default(),
                point.shear.to_string(),
                point.displacement.to_string(),
            ]);
            row.extend(std::iter::repeat_n(String::new(), 10));
            row.push(format!("infeasible: {reason}"));
        }
    }
    row
}
