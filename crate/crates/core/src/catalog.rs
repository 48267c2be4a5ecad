//! Material and servo databases stored as hand-editable delimited text.
//!
//! Each file has a header row, one record per line and `#` comment lines.
//! Columns are matched by header name; unknown columns are ignored with a
//! warning. Materials carry their available sheet thicknesses as a
//! `;`-separated list.

use std::fs;
use std::path::{Path, PathBuf};

use crate::elastica::MaterialSpec;
use crate::error::{Error, Result};
use crate::metrics::ServoSpec;

pub const MATERIALS_FILE: &str = "materials.csv";
pub const SERVOS_FILE: &str = "servos.csv";
pub const PROTOTYPES_FILE: &str = "prototypes.csv";
/// Environment variable naming the catalog directory.
pub const CATALOG_DIR_ENV: &str = "HCM_CATALOG_DIR";

pub const SEED_MATERIALS: &str = include_str!("../data/materials.csv");
pub const SEED_SERVOS: &str = include_str!("../data/servos.csv");
pub const SEED_PROTOTYPES: &str = include_str!("../data/prototypes.csv");

// The last column of each is optional reference data.
const MATERIAL_COLUMNS: [&str; 6] = [
    "name",
    "E_MPa",
    "nu",
    "rho_t_per_mm3",
    "thicknesses_mm",
    "E_over_rho_listed_mm2_per_s2",
];
const SERVO_COLUMNS: [&str; 6] = [
    "name",
    "T_servo_mmN",
    "speed_rad_s",
    "weight_g",
    "L_horn_mm",
    "f_m_servo_listed_Hz",
];
const PROTOTYPE_COLUMNS: [&str; 9] = [
    "name",
    "material",
    "t_mm",
    "h_mm",
    "L1_mm",
    "l_mm",
    "D_mm",
    "servo",
    "T_act_reported_mmN",
];

/// A material together with the sheet thicknesses it is sold in.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRecord {
    pub spec: MaterialSpec,
    pub thicknesses: Vec<f64>,
    /// E/ρ as listed by the catalog source, mm²/s². Reference only;
    /// computations use [`MaterialSpec::specific_modulus`].
    pub listed_specific_modulus: Option<f64>,
}

impl MaterialRecord {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.thicknesses.is_empty() {
            return Err(Error::invalid(
                format!("material '{}'", self.spec.name),
                "at least one thickness is required",
            ));
        }
        if let Some(t) = self.thicknesses.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::invalid(
                format!("material '{}'", self.spec.name),
                format!("thickness {t} must be > 0"),
            ));
        }
        if let Some(x) = self.listed_specific_modulus.filter(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::invalid(
                format!("material '{}'", self.spec.name),
                format!("listed E/rho {x} must be > 0"),
            ));
        }
        Ok(())
    }

    pub fn has_thickness(&self, t: f64) -> bool {
        self.thicknesses.iter().any(|&x| (x - t).abs() <= 1e-9 * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Material,
    Servo,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Material => "material",
            RecordKind::Servo => "servo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Record<'a> {
    Material(&'a MaterialRecord),
    Servo(&'a ServoSpec),
}

/// Materials and servos, each uniquely named (case-insensitively).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    pub materials: Vec<MaterialRecord>,
    pub servos: Vec<ServoSpec>,
}

impl Catalog {
    pub fn new(materials: Vec<MaterialRecord>, servos: Vec<ServoSpec>) -> Result<Self> {
        let cat = Catalog { materials, servos };
        cat.validate()?;
        Ok(cat)
    }

    /// The built-in seed catalog.
    pub fn seed() -> Self {
        let (materials, _) = parse_materials(SEED_MATERIALS, "seed materials").expect("seed materials parse");
        let (servos, _) = parse_servos(SEED_SERVOS, "seed servos").expect("seed servos parse");
        Catalog::new(materials, servos).expect("seed catalog is valid")
    }

    pub fn validate(&self) -> Result<()> {
        for m in &self.materials {
            m.validate()?;
        }
        for s in &self.servos {
            s.validate()?;
        }
        check_unique("material", self.materials.iter().map(|m| m.spec.name.as_str()))?;
        check_unique("servo", self.servos.iter().map(|s| s.name.as_str()))
    }

    pub fn material(&self, name: &str) -> Result<&MaterialRecord> {
        self.materials
            .iter()
            .find(|m| m.spec.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| not_found("material", name, self.materials.iter().map(|m| m.spec.name.as_str())))
    }

    pub fn servo(&self, name: &str) -> Result<&ServoSpec> {
        self.servos
            .iter()
            .find(|s| s.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| not_found("servo", name, self.servos.iter().map(|s| s.name.as_str())))
    }

    pub fn lookup(&self, kind: RecordKind, name: &str) -> Result<Record<'_>> {
        match kind {
            RecordKind::Material => self.material(name).map(Record::Material),
            RecordKind::Servo => self.servo(name).map(Record::Servo),
        }
    }

    /// Inserts or replaces (by case-insensitive name) a material.
    pub fn upsert_material(&mut self, record: MaterialRecord) -> Result<()> {
        record.validate()?;
        match self
            .materials
            .iter_mut()
            .find(|m| m.spec.name.eq_ignore_ascii_case(&record.spec.name))
        {
            Some(slot) => *slot = record,
            None => self.materials.push(record),
        }
        Ok(())
    }

    pub fn upsert_servo(&mut self, servo: ServoSpec) -> Result<()> {
        servo.validate()?;
        match self.servos.iter_mut().find(|s| s.name.eq_ignore_ascii_case(&servo.name)) {
            Some(slot) => *slot = servo,
            None => self.servos.push(servo),
        }
        Ok(())
    }

    pub fn remove(&mut self, kind: RecordKind, name: &str) -> Result<()> {
        match kind {
            RecordKind::Material => {
                self.material(name)?;
                self.materials.retain(|m| !m.spec.name.eq_ignore_ascii_case(name));
            }
            RecordKind::Servo => {
                self.servo(name)?;
                self.servos.retain(|s| !s.name.eq_ignore_ascii_case(name));
            }
        }
        Ok(())
    }
}

fn check_unique<'a>(kind: &str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen: Vec<String> = Vec::new();
    for name in names {
        let key = name.to_ascii_lowercase();
        if seen.contains(&key) {
            return Err(Error::invalid(
                format!("{kind} '{name}'"),
                "name is not unique (case-insensitive)",
            ));
        }
        seen.push(key);
    }
    Ok(())
}

fn not_found<'a>(kind: &'static str, name: &str, names: impl Iterator<Item = &'a str>) -> Error {
    Error::NotFound {
        kind,
        name: name.to_string(),
        suggestions: nearest_names(name, names),
    }
}

/// Up to three names closest to `name` by edit distance.
pub fn nearest_names<'a>(name: &str, names: impl Iterator<Item = &'a str>) -> Vec<String> {
    let wanted = name.to_ascii_lowercase();
    let limit = (wanted.len() / 3).max(2);
    let mut scored: Vec<(usize, &str)> = names
        .filter_map(|candidate| {
            let lower = candidate.to_ascii_lowercase();
            let distance = strsim::levenshtein(&wanted, &lower);
            let related = lower.starts_with(&wanted) || wanted.starts_with(&lower);
            (distance <= limit || related).then_some((distance, candidate))
        })
        .collect();
    scored.sort();
    scored.into_iter().take(3).map(|(_, n)| n.to_string()).collect()
}

/// A parsed delimited table: column lookup plus rows with their line numbers.
struct Table {
    file: String,
    columns: Vec<Option<usize>>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    /// Columns of `known` past `required` may be absent.
    fn parse(
        text: &str,
        file: &str,
        known: &[&str],
        required: usize,
        warnings: &mut Vec<String>,
    ) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let parse_err = |e: csv::Error| Error::Parse {
            file: file.to_string(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            reason: e.to_string(),
        };
        let header = reader.headers().map_err(parse_err)?.clone();
        if header.is_empty() {
            return Ok(Table {
                file: file.to_string(),
                columns: vec![None; known.len()],
                rows: Vec::new(),
            });
        }
        let header_line = reader.position().line().saturating_sub(1).max(1);
        let columns: Vec<Option<usize>> = known
            .iter()
            .map(|k| header.iter().position(|h| h.eq_ignore_ascii_case(k)))
            .collect();
        for (k, col) in known.iter().zip(&columns).take(required) {
            if col.is_none() {
                return Err(Error::Parse {
                    file: file.to_string(),
                    line: header_line,
                    reason: format!("missing column '{k}'"),
                });
            }
        }
        for h in header.iter() {
            if !known.iter().any(|k| k.eq_ignore_ascii_case(h)) {
                warnings.push(format!("{file}: ignoring unknown column '{h}'"));
            }
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(parse_err)?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            rows.push((line, record));
        }
        Ok(Table {
            file: file.to_string(),
            columns,
            rows,
        })
    }

    fn text<'r>(&self, row: &'r csv::StringRecord, column: usize) -> &'r str {
        self.columns[column].and_then(|i| row.get(i)).unwrap_or("")
    }

    fn number(&self, line: u64, row: &csv::StringRecord, column: usize, name: &str) -> Result<f64> {
        parse_number(self.text(row, column)).ok_or_else(|| Error::Parse {
            file: self.file.clone(),
            line,
            reason: format!("column '{name}': '{}' is not a number", self.text(row, column)),
        })
    }

    fn optional_number(&self, line: u64, row: &csv::StringRecord, column: usize, name: &str) -> Result<Option<f64>> {
        if self.text(row, column).is_empty() {
            Ok(None)
        } else {
            self.number(line, row, column, name).map(Some)
        }
    }
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parses a materials table. Returns the records and any warnings.
pub fn parse_materials(text: &str, file: &str) -> Result<(Vec<MaterialRecord>, Vec<String>)> {
    let mut warnings = Vec::new();
    let table = Table::parse(text, file, &MATERIAL_COLUMNS, 5, &mut warnings)?;
    let mut out = Vec::with_capacity(table.rows.len());
    for (line, row) in &table.rows {
        let name = table.text(row, 0).to_string();
        let field = |i: usize| table.number(*line, row, i, MATERIAL_COLUMNS[i]);
        let (e, nu, rho) = (field(1)?, field(2)?, field(3)?);
        let thicknesses = table
            .text(row, 4)
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                parse_number(s).ok_or_else(|| Error::Parse {
                    file: file.to_string(),
                    line: *line,
                    reason: format!("thickness '{s}' is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let record = MaterialRecord {
            spec: MaterialSpec { name, e, nu, rho },
            thicknesses,
            listed_specific_modulus: table.optional_number(*line, row, 5, MATERIAL_COLUMNS[5])?,
        };
        record.validate()?;
        out.push(record);
    }
    check_unique("material", out.iter().map(|m| m.spec.name.as_str()))?;
    Ok((out, warnings))
}

/// Parses a servos table. Returns the records and any warnings.
pub fn parse_servos(text: &str, file: &str) -> Result<(Vec<ServoSpec>, Vec<String>)> {
    let mut warnings = Vec::new();
    let table = Table::parse(text, file, &SERVO_COLUMNS, 5, &mut warnings)?;
    let mut out = Vec::with_capacity(table.rows.len());
    for (line, row) in &table.rows {
        let field = |i: usize| table.number(*line, row, i, SERVO_COLUMNS[i]);
        let servo = ServoSpec {
            name: table.text(row, 0).to_string(),
            stall_torque: field(1)?,
            speed: field(2)?,
            weight: field(3)?,
            horn_length: field(4)?,
            listed_frequency: table.optional_number(*line, row, 5, SERVO_COLUMNS[5])?,
        };
        servo.validate()?;
        out.push(servo);
    }
    check_unique("servo", out.iter().map(|s| s.name.as_str()))?;
    Ok((out, warnings))
}

/// Full-precision decimal text that re-reads to the identical f64.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e7).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn write_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("write to memory");
    for row in rows {
        writer.write_record(&row).expect("write to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("utf-8 output")
}

pub fn format_materials(materials: &[MaterialRecord]) -> String {
    let rows = materials
        .iter()
        .map(|m| {
            vec![
                m.spec.name.clone(),
                format_number(m.spec.e),
                format_number(m.spec.nu),
                format_number(m.spec.rho),
                m.thicknesses.iter().map(|&t| format_number(t)).collect::<Vec<_>>().join(";"),
                m.listed_specific_modulus.map(format_number).unwrap_or_default(),
            ]
        })
        .collect();
    write_table(&MATERIAL_COLUMNS, rows)
}

pub fn format_servos(servos: &[ServoSpec]) -> String {
    let rows = servos
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                format_number(s.stall_torque),
                format_number(s.speed),
                format_number(s.weight),
                format_number(s.horn_length),
                s.listed_frequency.map(format_number).unwrap_or_default(),
            ]
        })
        .collect();
    write_table(&SERVO_COLUMNS, rows)
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Loads `materials.csv` and `servos.csv` from `dir`, returning load warnings.
pub fn load_catalog_with_warnings(dir: &Path) -> Result<(Catalog, Vec<String>)> {
    let mpath = dir.join(MATERIALS_FILE);
    let spath = dir.join(SERVOS_FILE);
    let (materials, mut warnings) = parse_materials(&read_file(&mpath)?, &mpath.display().to_string())?;
    let (servos, w) = parse_servos(&read_file(&spath)?, &spath.display().to_string())?;
    warnings.extend(w);
    Ok((Catalog::new(materials, servos)?, warnings))
}

pub fn load_catalog(dir: &Path) -> Result<Catalog> {
    load_catalog_with_warnings(dir).map(|(cat, _)| cat)
}

/// Writes both catalog files into `dir`, replacing them whole.
pub fn save_catalog(cat: &Catalog, dir: &Path) -> Result<()> {
    cat.validate()?;
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        reason: e.to_string(),
    })?;
    write_file(&dir.join(MATERIALS_FILE), &format_materials(&cat.materials))?;
    write_file(&dir.join(SERVOS_FILE), &format_servos(&cat.servos))
}

/// Catalog directory from an explicit flag, else from `HCM_CATALOG_DIR`.
pub fn resolve_catalog_dir(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| {
        std::env::var_os(CATALOG_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

/// A built ribbon with the torque reported for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Prototype {
    pub name: String,
    pub material: String,
    pub t: f64,
    pub h: f64,
    pub l1: f64,
    pub l: f64,
    pub d: f64,
    pub servo: String,
    pub reported_torque: f64,
}

pub fn parse_prototypes(text: &str, file: &str) -> Result<Vec<Prototype>> {
    let mut warnings = Vec::new();
    let table = Table::parse(text, file, &PROTOTYPE_COLUMNS, PROTOTYPE_COLUMNS.len(), &mut warnings)?;
    table
        .rows
        .iter()
        .map(|(line, row)| {
            let field = |i: usize| table.number(*line, row, i, PROTOTYPE_COLUMNS[i]);
            Ok(Prototype {
                name: table.text(row, 0).to_string(),
                material: table.text(row, 1).to_string(),
                t: field(2)?,
                h: field(3)?,
                l1: field(4)?,
                l: field(5)?,
                d: field(6)?,
                servo: table.text(row, 7).to_string(),
                reported_torque: field(8)?,
            })
        })
        .collect()
}

/// The shipped prototype assumptions.
pub fn seed_prototypes() -> Vec<Prototype> {
    parse_prototypes(SEED_PROTOTYPES, "seed prototypes").expect("seed prototypes parse")
}

pub fn prototype(name: &str) -> Result<Prototype> {
    let all = seed_prototypes();
    all.iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .cloned()
        .ok_or_else(|| not_found("prototype", name, all.iter().map(|p| p.name.as_str())))
}
