//! File access and run manifests.
//!
//! Every file a command writes gets a sidecar `<file>.manifest.json` with the
//! command line, seeds, tool version, input digests and a timestamp. The
//! outputs themselves carry no timestamp, so reruns are byte-identical.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use kleinforge::space::SpaceFile;
use kleinforge::{KleinSpace, KleinSpec};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a [String],
    seeds: &'a BTreeMap<String, u64>,
    inputs: &'a [InputDigest],
    outputs: &'a [String],
    timestamp: String,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// The sidecar's file name, as embedded in JSON outputs.
pub fn manifest_ref(out: &Path) -> String {
    manifest_path(out)
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub struct Run {
    command: Vec<String>,
    seeds: BTreeMap<String, u64>,
    inputs: Vec<InputDigest>,
    outputs: Vec<PathBuf>,
}

impl Run {
    pub fn new(command: Vec<String>) -> Self {
        Run {
            command,
            seeds: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.to_string(), value);
    }

    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(bytes)
    }

    pub fn read_json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn read_space(&mut self, path: &Path) -> Result<KleinSpace> {
        let file: SpaceFile = self.read_json(path)?;
        Ok(KleinSpec::try_from(file)?.validate()?)
    }

    /// Numeric CSV rows. Blank lines and `#` comments are skipped, and a
    /// first line that does not parse is taken as a header.
    pub fn read_rows(&mut self, path: &Path) -> Result<Vec<Vec<f64>>> {
        let bytes = self.read(path)?;
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::Invalid(format!("{}: not UTF-8 text", path.display())))?;
        let mut rows = Vec::new();
        let mut first = true;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|c| c.trim().parse::<f64>()).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if first => {}
                Err(_) => {
                    return Err(CliError::Invalid(format!(
                        "{}:{}: not a row of numbers: {line}",
                        path.display(),
                        n + 1
                    )))
                }
            }
            first = false;
        }
        Ok(rows)
    }

    /// One value per row, e.g. an interval sequence.
    pub fn read_column(&mut self, path: &Path) -> Result<Vec<f64>> {
        let rows = self.read_rows(path)?;
        rows.into_iter()
            .enumerate()
            .map(|(i, r)| match r.as_slice() {
                [v] => Ok(*v),
                _ => Err(CliError::Invalid(format!(
                    "{}: row {} has {} values, expected 1",
                    path.display(),
                    i + 1,
                    r.len()
                ))),
            })
            .collect()
    }

    pub fn create(&mut self, path: &Path) -> Result<Output> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        self.outputs.push(path.to_path_buf());
        Ok(Output {
            path: path.to_path_buf(),
            inner: BufWriter::new(file),
        })
    }

    pub fn write(&mut self, path: &Path, contents: &[u8]) -> Result<()> {
        let mut out = self.create(path)?;
        out.write(contents)?;
        out.finish()
    }

    /// Pretty JSON with a leading `"manifest"` field naming the sidecar.
    /// `value` must serialize as an object.
    pub fn write_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<()> {
        #[derive(Serialize)]
        struct WithManifest<'a, T> {
            manifest: String,
            #[serde(flatten)]
            value: &'a T,
        }
        let tagged = WithManifest {
            manifest: manifest_ref(path),
            value,
        };
        let mut text = serde_json::to_string_pretty(&tagged).map_err(|e| CliError::Invalid(e.to_string()))?;
        text.push('\n');
        self.write(path, text.as_bytes())
    }

    /// Write one manifest per output file.
    pub fn finish(self) -> Result<()> {
        let outputs: Vec<String> = self.outputs.iter().map(|p| p.display().to_string()).collect();
        let manifest = Manifest {
            tool: "kleinforge",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.command,
            seeds: &self.seeds,
            inputs: &self.inputs,
            outputs: &outputs,
            timestamp: humantime::format_rfc3339_seconds(SystemTime::now()).to_string(),
        };
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Invalid(e.to_string()))?;
        text.push('\n');
        for out in &self.outputs {
            let path = manifest_path(out);
            std::fs::write(&path, &text).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }
}

pub struct Output {
    path: PathBuf,
    inner: BufWriter<File>,
}

impl Output {
    pub fn write(&mut self, bytes: &[u8]) -> Result<()> {
        self.inner.write_all(bytes).map_err(|e| CliError::io(&self.path, e))
    }

    pub fn line(&mut self, line: &str) -> Result<()> {
        self.write(line.as_bytes())?;
        self.write(b"\n")
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

/// Comma-joined shortest round-trip decimal forms.
pub fn join(values: &[f64]) -> String {
    values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",")
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        v.to_string()
    }
}

/// `x1,..,xk1,y1,..,yk2`
pub fn coord_header(k1: usize, k2: usize) -> Vec<String> {
    (1..=k1).map(|i| format!("x{i}")).chain((1..=k2).map(|j| format!("y{j}"))).collect()
}
