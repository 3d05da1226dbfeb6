//! On-disk session layout.
//!
//! ```text
//! <dir>/manifest                      public parameters, `key value` lines
//! <dir>/secure/participant-<j>.pres   long-term presentation of P_j
//! <dir>/open/participant-<j>.bundle   share bundle for P_j
//! <dir>/transcripts/                  secure-sum logs
//! ```
//!
//! `secure/` stands in for the private channel and `open/` for the public
//! one; an eavesdropper is anything that reads only `open/` and
//! `transcripts/`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use groupshare::field::PrimeModulus;
use groupshare::scheme::{parse_bundle, SessionConfig, WordColumn, WordParams};
use groupshare::smallcancel::{parse_lambda, PlatformParams, DEFAULT_BUDGET};
use groupshare::Presentation;
use sha2::{Digest, Sha256};

/// Commitment to the dealing seed, so a later audit can confirm which seed
/// produced a session. Small seeds can be recovered by trying them all; it
/// binds, it does not hide.
pub fn seed_commitment(seed: u64) -> String {
    let digest = Sha256::digest(format!("groupshare-seed:{seed}").as_bytes());
    format!("sha256:{}", hex::encode(digest))
}

pub struct Manifest {
    pub config: SessionConfig,
    pub seed_commitment: String,
}

impl Manifest {
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let p = c.p.map_or_else(|| "none".to_string(), |p| p.to_string());
        let pairs: Vec<(&str, String)> = vec![
            ("mode", c.mode.to_string()),
            ("n", c.n.to_string()),
            ("t", c.t.to_string()),
            ("p", p),
            ("k", c.k.to_string()),
            ("rank", c.platform.rank.to_string()),
            ("relators", c.platform.relator_count.to_string()),
            ("relator-length", c.platform.relator_length.to_string()),
            ("lambda", c.platform.lambda.to_string()),
            ("factor-count", c.words.factor_count.to_string()),
            ("conj-length", c.words.conj_length.to_string()),
            ("seed-commitment", self.seed_commitment.clone()),
        ];
        pairs
            .into_iter()
            .map(|(k, v)| format!("{k} {v}\n"))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(char::is_whitespace)
                .with_context(|| format!("manifest line {}: expected `key value`", i + 1))?;
            kv.insert(k, v.trim());
        }
        let get = |key: &str| -> Result<&str> {
            kv.get(key)
                .copied()
                .with_context(|| format!("manifest is missing `{key}`"))
        };
        let num = |key: &str| -> Result<usize> {
            get(key)?
                .parse()
                .with_context(|| format!("manifest `{key}` is not a number"))
        };
        let n = num("n")?;
        let t = num("t")?;
        let config = match get("mode")? {
            "nn" => SessionConfig::nn(n, num("k")?)?,
            "tn" => {
                let p: u64 = get("p")?.parse().context("manifest `p` is not a number")?;
                SessionConfig::tn(n, t, PrimeModulus::new(p)?)?
            }
            other => bail!("manifest names unknown mode `{other}`"),
        };
        if config.t != t || config.k != num("k")? {
            bail!("manifest threshold or width is inconsistent with its mode");
        }
        let platform = PlatformParams {
            rank: num("rank")?,
            relator_count: num("relators")?,
            relator_length: num("relator-length")?,
            lambda: parse_lambda(get("lambda")?)?,
            max_attempts: DEFAULT_BUDGET,
        };
        let words = WordParams {
            factor_count: num("factor-count")?,
            conj_length: num("conj-length")?,
        };
        Ok(Self {
            config: config.with_platform(platform)?.with_words(words),
            seed_commitment: get("seed-commitment")?.to_string(),
        })
    }
}

pub struct SessionStore {
    root: PathBuf,
}

impl SessionStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.root.join("manifest")
    }

    pub fn presentation_path(&self, j: usize) -> PathBuf {
        self.root
            .join("secure")
            .join(format!("participant-{j}.pres"))
    }

    pub fn bundle_path(&self, j: usize) -> PathBuf {
        self.root
            .join("open")
            .join(format!("participant-{j}.bundle"))
    }

    pub fn transcript_path(&self, name: &str) -> PathBuf {
        self.root.join("transcripts").join(name)
    }

    pub fn create(&self) -> Result<()> {
        for sub in ["secure", "open", "transcripts"] {
            let dir = self.root.join(sub);
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        Ok(())
    }

    pub fn read_manifest(&self) -> Result<Manifest> {
        Manifest::parse(&read(&self.manifest_path())?)
    }

    pub fn read_presentation(&self, j: usize) -> Result<Presentation> {
        let path = self.presentation_path(j);
        read(&path)?
            .parse()
            .with_context(|| format!("parsing {}", path.display()))
    }

    pub fn read_bundle(&self, j: usize) -> Result<WordColumn> {
        let path = self.bundle_path(j);
        parse_bundle(&read(&path)?).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
