//! Batch production of benchmark sets.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::density::PenaltyTable;
use crate::error::BatchError;
use crate::format::serialize_instance;
use crate::generator::{generate, GenerationSpec};
use crate::network::StreetNetwork;

pub const INSTANCE_EXTENSION: &str = "vrpb";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// Ten sets of ten instances with 1000, 2000, ..., 10000 deliveries.
    Paper,
    Custom { sizes: Vec<usize>, per_size: usize },
}

impl Preset {
    pub fn sizes(&self) -> Vec<usize> {
        match self {
            Preset::Paper => (1..=10).map(|i| i * 1000).collect(),
            Preset::Custom { sizes, .. } => sizes.clone(),
        }
    }

    pub fn per_size(&self) -> usize {
        match self {
            Preset::Paper => 10,
            Preset::Custom { per_size, .. } => *per_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchConfig {
    pub preset: Preset,
    pub base_seed: u64,
    /// Fleet size for every instance; `None` uses one vehicle per hundred
    /// deliveries (at least one).
    pub vehicles: Option<usize>,
    pub max_route_length: Option<f64>,
    /// Worker threads; 0 uses the available parallelism.
    pub threads: usize,
}

impl BatchConfig {
    pub fn new(preset: Preset, base_seed: u64) -> Self {
        BatchConfig {
            preset,
            base_seed,
            vehicles: None,
            max_route_length: None,
            threads: 0,
        }
    }
}

/// One planned instance of a batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchEntry {
    pub file_name: String,
    pub size: usize,
    /// 1-based position of the size in the preset.
    pub set: usize,
    /// 1-based index within the set.
    pub index: usize,
    pub seed: u64,
    pub vehicles: usize,
}

/// Lists the instances of a batch without generating them. Seeds are
/// `base_seed + set * 100 + index`, so any single file can be rebuilt alone.
pub fn plan(config: &BatchConfig) -> Result<Vec<BatchEntry>, BatchError> {
    let sizes = config.preset.sizes();
    let per_size = config.preset.per_size();
    if sizes.is_empty() || per_size == 0 {
        return Err(BatchError::Config("batch would be empty".into()));
    }
    if let Some(&bad) = sizes.iter().find(|&&s| s == 0) {
        return Err(BatchError::Config(format!("instance size must be positive, got {bad}")));
    }
    if config.vehicles == Some(0) {
        return Err(BatchError::Config("fleet size must be at least 1".into()));
    }
    let mut entries = Vec::with_capacity(sizes.len() * per_size);
    for (s, &size) in sizes.iter().enumerate() {
        let set = s + 1;
        for index in 1..=per_size {
            let seed = config
                .base_seed
                .wrapping_add(set as u64 * 100)
                .wrapping_add(index as u64);
            entries.push(BatchEntry {
                file_name: format!("an-{size}-{index:02}.{INSTANCE_EXTENSION}"),
                size,
                set,
                index,
                seed,
                vehicles: config.vehicles.unwrap_or((size / 100).max(1)),
            });
        }
    }
    Ok(entries)
}

fn build(
    network: &StreetNetwork,
    table: &PenaltyTable,
    config: &BatchConfig,
    entry: &BatchEntry,
    out_dir: &Path,
) -> Result<PathBuf, BatchError> {
    let mut spec = GenerationSpec::new(entry.size, entry.seed, entry.vehicles);
    spec.name = format!("an-{}-{:02}", entry.size, entry.index);
    spec.max_route_length = config.max_route_length;
    let instance = generate(network, table, &spec)?;
    let path = out_dir.join(&entry.file_name);
    std::fs::write(&path, serialize_instance(&instance)).map_err(|source| BatchError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Generates and writes every instance of the batch into `out_dir`,
/// returning the written paths in plan order.
pub fn batch_generate(
    network: &StreetNetwork,
    table: &PenaltyTable,
    config: &BatchConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, BatchError> {
    let entries = plan(config)?;
    std::fs::create_dir_all(out_dir).map_err(|source| BatchError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let threads = match config.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .min(entries.len());

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<PathBuf, BatchError>>>> =
        Mutex::new((0..entries.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= entries.len() {
                    break;
                }
                let outcome = build(network, table, config, &entries[i], out_dir);
                let failed = outcome.is_err();
                results.lock().expect("no worker panics")[i] = Some(outcome);
                if failed {
                    next.store(entries.len(), Ordering::Relaxed);
                }
            });
        }
    });

    let mut paths = Vec::with_capacity(entries.len());
    for outcome in results.into_inner().expect("no worker panics").into_iter().flatten() {
        paths.push(outcome?);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{generate_grid_network, GridStyle};

    #[test]
    fn paper_plan() {
        let entries = plan(&BatchConfig::new(Preset::Paper, 0)).unwrap();
        assert_eq!(entries.len(), 100);
        assert_eq!(entries[0].file_name, "an-1000-01.vrpb");
        assert_eq!(entries[0].seed, 101);
        assert_eq!(entries[99].file_name, "an-10000-10.vrpb");
        assert_eq!(entries[99].seed, 1010);
        assert_eq!(entries[99].vehicles, 100);
        for size in (1..=10).map(|i| i * 1000) {
            assert_eq!(entries.iter().filter(|e| e.size == size).count(), 10);
        }
    }

    #[test]
    fn single_custom_file() {
        let net = generate_grid_network(3, 3, 100.0, GridStyle::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let config = BatchConfig::new(
            Preset::Custom {
                sizes: vec![10],
                per_size: 1,
            },
            5,
        );
        let paths = batch_generate(&net, &PenaltyTable::DEFAULT, &config, dir.path()).unwrap();
        assert_eq!(paths, vec![dir.path().join("an-10-01.vrpb")]);
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let instance = crate::format::parse_instance(&text).unwrap();
        assert_eq!(instance.customers.len(), 10);
        assert_eq!(instance.seed, Some(106));
    }

    #[test]
    fn empty_batch_is_rejected() {
        let config = BatchConfig::new(
            Preset::Custom {
                sizes: vec![],
                per_size: 3,
            },
            0,
        );
        assert!(matches!(plan(&config), Err(BatchError::Config(_))));
    }

    #[test]
    fn io_errors_name_the_path() {
        let net = generate_grid_network(2, 2, 100.0, GridStyle::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let config = BatchConfig::new(
            Preset::Custom {
                sizes: vec![3],
                per_size: 1,
            },
            0,
        );
        let err = batch_generate(&net, &PenaltyTable::DEFAULT, &config, &blocker).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
