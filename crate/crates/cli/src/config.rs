//! Optional `key=value` defaults. Blank lines and `#` comments are skipped.
//! Command-line flags take precedence over anything set here.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use capcon_core::dc_search::DcSearch;

use crate::args::{Cli, Format};
use crate::error::{invalid, CliResult};

const KEYS: [&str; 7] = [
    "seed",
    "jobs",
    "format",
    "resolution",
    "restarts",
    "max_evals",
    "refine_iters",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileConfig {
    entries: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("config line {}: expected key=value", no + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(invalid(format!("config line {}: unknown key `{k}`", no + 1)));
            }
            entries.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| invalid(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }
}

/// Everything a command needs beyond its own arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub jobs: usize,
    pub format: Option<Format>,
    pub resolution: Option<usize>,
    pub search: DcSearch,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> CliResult<Self> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let seed = match cli.seed {
            Some(s) => s,
            None => file.get("seed")?.unwrap_or(42),
        };
        let jobs = match cli.jobs {
            Some(j) => j,
            None => file.get("jobs")?.unwrap_or(1),
        };
        if jobs == 0 {
            return Err(invalid("--jobs must be at least 1"));
        }
        let format = match cli.format {
            Some(f) => Some(f),
            None => match file.get::<String>("format")?.as_deref() {
                None => None,
                Some("csv") => Some(Format::Csv),
                Some("json") => Some(Format::Json),
                Some(other) => return Err(invalid(format!("config format `{other}` is not csv or json"))),
            },
        };
        let base = DcSearch::default();
        let search = DcSearch {
            seed,
            restarts: file.get("restarts")?.unwrap_or(base.restarts),
            max_evals: file.get("max_evals")?.unwrap_or(base.max_evals),
            refine_iters: file.get("refine_iters")?.unwrap_or(base.refine_iters),
        };
        if search.restarts == 0 || search.max_evals == 0 {
            return Err(invalid("restarts and max_evals must be positive"));
        }
        Ok(Self {
            seed,
            jobs,
            format,
            resolution: file.get("resolution")?,
            search,
        })
    }

    pub fn pool(&self) -> CliResult<rayon::ThreadPool> {
        Ok(rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build()?)
    }
}
