//! File formats: spectrum CSV/JSON, run manifests, plain series.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ringspec::{Engine, LabeledLevel, Spectrum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SPECTRUM_HEADER: [&str; 7] = [
    "index",
    "energy",
    "label1",
    "label2",
    "s",
    "multiplicity",
    "engine",
];

/// Written next to (CSV) or inside (JSON) every output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub versions: Value,
    /// Seconds since the Unix epoch; the only field that differs between
    /// identical runs.
    pub timestamp: u64,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_hit: Option<bool>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_string(),
            parameters,
            versions: serde_json::json!({ "ringspec": ringspec::VERSION, "cli": env!("CARGO_PKG_VERSION") }),
            timestamp,
            inputs: Vec::new(),
            outputs: Vec::new(),
            cache_hit: None,
        }
    }
}

/// One CSV/JSON row per level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub index: usize,
    pub energy: f64,
    pub label1: Option<i64>,
    pub label2: Option<i64>,
    pub s: Option<u8>,
    pub multiplicity: u32,
    pub engine: String,
}

impl LevelRow {
    fn from_level(index: usize, level: &LabeledLevel) -> Self {
        Self {
            index,
            energy: level.energy,
            label1: level.labels.map(|l| l.0),
            label2: level.labels.map(|l| l.1),
            s: level.s,
            multiplicity: level.multiplicity,
            engine: level.engine.name().to_string(),
        }
    }

    fn to_level(&self) -> Result<LabeledLevel, String> {
        let engine = Engine::parse(&self.engine)
            .ok_or_else(|| format!("unknown engine '{}'", self.engine))?;
        let labels = match (self.label1, self.label2) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => {
                return Err(format!(
                    "row {}: labels must be both present or both empty",
                    self.index
                ))
            }
        };
        Ok(LabeledLevel {
            energy: self.energy,
            labels,
            s: self.s,
            multiplicity: self.multiplicity.max(1),
            engine,
        })
    }
}

pub fn rows(spectrum: &Spectrum) -> Vec<LevelRow> {
    spectrum
        .levels()
        .iter()
        .enumerate()
        .map(|(i, l)| LevelRow::from_level(i + 1, l))
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub manifest: RunManifest,
    pub levels: Vec<LevelRow>,
}

/// Energies print with `{:?}`, the shortest representation that round-trips.
pub fn spectrum_csv(spectrum: &Spectrum) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SPECTRUM_HEADER).map_err(|e| e.to_string())?;
    for r in rows(spectrum) {
        let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            r.index.to_string(),
            format!("{:?}", r.energy),
            opt(r.label1),
            opt(r.label2),
            r.s.map(|s| s.to_string()).unwrap_or_default(),
            r.multiplicity.to_string(),
            r.engine,
        ])
        .map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

pub fn spectrum_json(spectrum: &Spectrum, manifest: &RunManifest) -> Result<Vec<u8>, String> {
    let doc = SpectrumDocument {
        manifest: manifest.clone(),
        levels: rows(spectrum),
    };
    let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| e.to_string())?;
    out.push(b'\n');
    Ok(out)
}

/// Reads a spectrum written by this tool (CSV or JSON), or a plain list of
/// energies, one per line. Multiplicities are kept.
pub fn read_spectrum(path: &Path) -> Result<Spectrum, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let doc: SpectrumDocument =
            serde_json::from_str(trimmed).map_err(|e| format!("{}: {e}", path.display()))?;
        return doc
            .levels
            .iter()
            .map(LevelRow::to_level)
            .collect::<Result<Vec<_>, _>>()
            .map(Spectrum::new);
    }
    let first = trimmed.lines().next().unwrap_or("");
    if first
        .split(',')
        .next()
        .is_some_and(|f| f.trim().parse::<f64>().is_ok())
    {
        let mut levels = Vec::new();
        for (n, line) in trimmed.lines().enumerate() {
            let field = line.split(',').next().unwrap_or("").trim();
            if field.is_empty() || field.starts_with('#') {
                continue;
            }
            let e: f64 = field
                .parse()
                .map_err(|_| format!("{}:{}: not a number: {field}", path.display(), n + 1))?;
            levels.push(LabeledLevel::unlabeled(e, Engine::Ccm));
        }
        return Ok(Spectrum::new(levels));
    }
    let mut reader = csv::Reader::from_reader(trimmed.as_bytes());
    let mut levels = Vec::new();
    for row in reader.deserialize::<LevelRow>() {
        let row = row.map_err(|e| format!("{}: {e}", path.display()))?;
        levels.push(row.to_level()?);
    }
    Ok(Spectrum::new(levels))
}

/// Plain numeric table with a header line.
pub fn series_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Vec<u8> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

/// Like [`series_csv`] with an integer first column.
pub fn indexed_csv(header: &[&str], rows: impl IntoIterator<Item = (usize, Vec<f64>)>) -> Vec<u8> {
    let mut out = header.join(",");
    out.push('\n');
    for (i, row) in rows {
        out.push_str(&i.to_string());
        for v in row {
            out.push_str(&format!(",{v:?}"));
        }
        out.push('\n');
    }
    out.into_bytes()
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn of(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}
