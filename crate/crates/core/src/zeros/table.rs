use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Where a table's ordinates came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Ingested(String),
}

impl Provenance {
    fn label(&self) -> String {
        match self {
            Provenance::Computed => "computed".into(),
            Provenance::Ingested(id) => format!("ingested:{id}"),
        }
    }

    fn parse(s: &str) -> Provenance {
        match s.strip_prefix("ingested:") {
            Some(id) => Provenance::Ingested(id.to_string()),
            None => Provenance::Computed,
        }
    }
}

/// Ascending zero ordinates with certified coverage of `(lower, height]`.
///
/// A table starting from the first zero has `lower == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    lower: f64,
    height: f64,
    precision: f64,
    provenance: Provenance,
}

impl ZeroTable {
    /// Validate and wrap ordinates. They must be strictly ascending, lie
    /// in `(lower, height]`, and be separated by more than twice the
    /// precision.
    pub fn new(ordinates: Vec<f64>, lower: f64, height: f64, precision: f64, provenance: Provenance) -> Result<Self> {
        if !(precision > 0.0) || !(height > lower) || !(lower >= 0.0) {
            return Err(Error::Parameter(format!(
                "zero table needs 0 <= lower < height and precision > 0, got lower={lower} height={height} precision={precision}"
            )));
        }
        for w in ordinates.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Parameter(format!("ordinates not ascending at {} -> {}", w[0], w[1])));
            }
            if w[1] - w[0] <= 2.0 * precision {
                return Err(Error::Duplicate { value: w[1] });
            }
        }
        if let (Some(&first), Some(&last)) = (ordinates.first(), ordinates.last()) {
            if first <= lower || last > height {
                return Err(Error::Parameter(format!(
                    "ordinates [{first}, {last}] outside declared coverage ({lower}, {height}]"
                )));
            }
        }
        Ok(Self { ordinates, lower, height, precision, provenance })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Ordinates in the closed range `[a, b]`.
    pub fn range(&self, a: f64, b: f64) -> &[f64] {
        let lo = self.ordinates.partition_point(|&g| g < a);
        let hi = self.ordinates.partition_point(|&g| g <= b);
        &self.ordinates[lo..hi.max(lo)]
    }

    /// Fail unless `[a, b]` lies within the certified coverage.
    pub fn require(&self, a: f64, b: f64) -> Result<()> {
        let lower_ok = self.lower == 0.0 || a > self.lower;
        if !lower_ok || b > self.height {
            return Err(Error::Coverage { required: b, lower: self.lower, height: self.height });
        }
        Ok(())
    }

    /// Split at `h` into tables covering `(lower, h]` and `(h, height]`.
    pub fn split_at(&self, h: f64) -> Result<(ZeroTable, ZeroTable)> {
        if !(h > self.lower && h < self.height) {
            return Err(Error::Parameter(format!("split point {h} outside ({}, {})", self.lower, self.height)));
        }
        let k = self.ordinates.partition_point(|&g| g <= h);
        let left = ZeroTable { ordinates: self.ordinates[..k].to_vec(), height: h, ..self.clone() };
        let right = ZeroTable { ordinates: self.ordinates[k..].to_vec(), lower: h, ..self.clone() };
        Ok((left, right))
    }
}

/// Write a table in the text format read by [`load_zero_table`].
pub fn save_zero_table(table: &ZeroTable, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(24 * table.len() + 128);
    let _ = writeln!(out, "# height={}", table.height);
    let _ = writeln!(out, "# precision={}", table.precision);
    if table.lower > 0.0 {
        let _ = writeln!(out, "# lower={}", table.lower);
    }
    let _ = writeln!(out, "# provenance={}", table.provenance.label());
    for g in &table.ordinates {
        let _ = writeln!(out, "{g}");
    }
    // write beside the target and rename, so an interrupted save never
    // leaves a file whose header promises more zeros than it holds
    let tmp = path.with_extension("partial");
    fs::write(&tmp, out).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Read a zero table: `#` lines carry `key=value` metadata (`height`,
/// `precision`, `lower`, `provenance`) or comments, every other non-blank
/// line is one decimal ordinate.
///
/// Declared values override the file's metadata. Without either, the
/// height defaults to the last ordinate and the precision to half a unit
/// in the last printed decimal place.
pub fn load_zero_table(
    path: &Path,
    declared_height: Option<f64>,
    declared_precision: Option<f64>,
) -> Result<ZeroTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path.display().to_string();
    let parse_err = |line: usize, message: String| Error::Parse { path: name.clone(), line, message };

    let mut height = None;
    let mut precision = None;
    let mut lower = 0.0;
    let mut provenance = None;
    let mut ordinates: Vec<f64> = Vec::new();
    let mut decimals = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((key, value)) = meta.trim().split_once('=') {
                let value = value.trim();
                let number =
                    || value.parse::<f64>().map_err(|_| parse_err(lineno, format!("bad {key} value {value:?}")));
                match key.trim() {
                    "height" => height = Some(number()?),
                    "precision" => precision = Some(number()?),
                    "lower" => lower = number()?,
                    "provenance" => provenance = Some(Provenance::parse(value)),
                    _ => {}
                }
            }
            continue;
        }
        let g: f64 = line.parse().map_err(|_| parse_err(lineno, format!("not a number: {line:?}")))?;
        if !g.is_finite() || g <= 0.0 {
            return Err(parse_err(lineno, format!("ordinate must be positive and finite, got {line}")));
        }
        if let Some(&prev) = ordinates.last() {
            if g <= prev {
                return Err(parse_err(lineno, format!("ordinate {line} not above previous {prev}")));
            }
        }
        decimals = decimals.max(line.split_once('.').map_or(0, |(_, frac)| frac.len()));
        ordinates.push(g);
    }
    let height = declared_height
        .or(height)
        .or_else(|| ordinates.last().copied())
        .ok_or_else(|| parse_err(0, "empty table without a declared height".into()))?;
    let precision = declared_precision.or(precision).unwrap_or(0.5 * 10f64.powi(-(decimals as i32)));
    let provenance = provenance.unwrap_or_else(|| {
        Provenance::Ingested(path.file_name().map_or_else(|| name.clone(), |f| f.to_string_lossy().into_owned()))
    });
    ZeroTable::new(ordinates, lower, height, precision, provenance)
}
