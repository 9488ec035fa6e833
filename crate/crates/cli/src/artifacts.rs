//! Files written by `ttp-edo run`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use ttp_edo::{EdoConfig, Entropies, RobustnessReport};

pub const TRAJECTORY: &str = "trajectory.csv";
pub const POPULATION: &str = "population.jsonl";
pub const SUMMARY: &str = "summary.json";
pub const ROBUSTNESS: &str = "robustness.json";
pub const MANIFEST: &str = "manifest.json";

/// Final state of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    #[serde(flatten)]
    pub entropies: Entropies,
    pub min_z: f64,
    pub max_z: f64,
    pub z_min: f64,
    pub iterations: u64,
    pub accepted: u64,
}

/// Artifact file names, relative to the manifest's directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactPaths {
    pub trajectory: String,
    pub population: String,
    pub summary: String,
    pub robustness: String,
}

impl Default for ArtifactPaths {
    fn default() -> Self {
        Self {
            trajectory: TRAJECTORY.into(),
            population: POPULATION.into(),
            summary: SUMMARY.into(),
            robustness: ROBUSTNESS.into(),
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub instance: PathBuf,
    pub seed_solution: PathBuf,
    pub config: EdoConfig,
    pub artifacts: ArtifactPaths,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}

/// Artifacts held in memory until the run has finished, so that a failed
/// run leaves nothing behind.
pub struct RunOutput {
    pub trajectory_csv: Vec<u8>,
    pub population_jsonl: Vec<u8>,
    pub summary: Summary,
    pub robustness: RobustnessReport,
}

fn pretty(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes `bytes` to `dir/name` through a temporary file in the same
/// directory and an atomic rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    let target = dir.join(name);
    tmp.persist(&target)
        .with_context(|| format!("writing {}", target.display()))?;
    Ok(())
}

impl RunOutput {
    /// Writes every artifact, then the manifest.
    pub fn write(&self, dir: &Path, manifest: &RunManifest) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let a = &manifest.artifacts;
        write_atomic(dir, &a.trajectory, &self.trajectory_csv)?;
        write_atomic(dir, &a.population, &self.population_jsonl)?;
        write_atomic(dir, &a.summary, &pretty(&self.summary)?)?;
        write_atomic(dir, &a.robustness, &pretty(&self.robustness)?)?;
        write_atomic(dir, MANIFEST, &pretty(manifest)?)
    }
}
