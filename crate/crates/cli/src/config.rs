//! `key = value` configuration file; command-line flags take precedence.

use std::path::Path;

use blender_core::certifier::CertifyConfig;
use blender_core::geometry::ConeConfig;
use blender_core::interval::ProverConfig;

use crate::args::GlobalOpts;
use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub theta: Option<f64>,
    pub vartheta: Option<f64>,
    pub max_depth: Option<u32>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut c = FileConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |e: &dyn std::fmt::Display| format!("line {}: {k}: {e}", n + 1);
            match k.replace('-', "_").as_str() {
                "theta" => c.theta = Some(v.parse().map_err(|e| bad(&e))?),
                "vartheta" => c.vartheta = Some(v.parse().map_err(|e| bad(&e))?),
                "max_depth" => c.max_depth = Some(v.parse().map_err(|e| bad(&e))?),
                "workers" => c.workers = Some(v.parse().map_err(|e| bad(&e))?),
                "seed" => c.seed = Some(v.parse().map_err(|e| bad(&e))?),
                _ => return Err(format!("line {}: unknown key {k:?}", n + 1)),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Settings after merging defaults, the config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub certify: CertifyConfig,
    pub workers: Option<usize>,
}

impl Settings {
    pub fn resolve(flags: &GlobalOpts) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let dc = ConeConfig::default();
        let dp = ProverConfig::default();
        let cone = ConeConfig {
            theta: flags.theta.or(file.theta).unwrap_or(dc.theta),
            vartheta: flags.vartheta.or(file.vartheta).unwrap_or(dc.vartheta),
        };
        cone.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let prover = ProverConfig {
            max_depth: flags.max_depth.or(file.max_depth).unwrap_or(dp.max_depth),
            ..dp
        };
        let workers = flags.workers.or(file.workers);
        if workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        Ok(Self {
            certify: CertifyConfig {
                cone,
                prover,
                seed: flags.seed.or(file.seed).unwrap_or(0),
                ..CertifyConfig::default()
            },
            workers,
        })
    }

    /// Runs `f` on a pool of the configured size, or the global pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
        match self.workers {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = FileConfig::parse("# cone\ntheta = 0.4\nvartheta=0.2 # aperture\n\nmax-depth = 12\nworkers = 3\nseed = 9\n").unwrap();
        assert_eq!(c.theta, Some(0.4));
        assert_eq!(c.vartheta, Some(0.2));
        assert_eq!(c.max_depth, Some(12));
        assert_eq!(c.workers, Some(3));
        assert_eq!(c.seed, Some(9));
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(FileConfig::parse("colour = red").is_err());
        assert!(FileConfig::parse("theta").is_err());
        assert!(FileConfig::parse("theta = wide").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        std::fs::write(&path, "theta = 0.4\nseed = 3\n").unwrap();
        let flags = GlobalOpts {
            theta: Some(0.45),
            config: Some(path),
            ..GlobalOpts::default()
        };
        let s = Settings::resolve(&flags).unwrap();
        assert_eq!(s.certify.cone.theta, 0.45);
        assert_eq!(s.certify.seed, 3);
        assert_eq!(s.certify.cone.vartheta, 0.1);
    }

    #[test]
    fn invalid_cone_is_a_usage_error() {
        let flags = GlobalOpts {
            vartheta: Some(5.0),
            ..GlobalOpts::default()
        };
        assert!(matches!(Settings::resolve(&flags), Err(CliError::Usage(_))));
    }
}
