//! Run configuration: built-in defaults, then `MAHLER_PREC`, then a `key=value`
//! file given with `--config`, then command-line flags.

use std::path::{Path, PathBuf};

use mahler_core::MIN_PREC;

use crate::error::{CliError, CliResult};

pub const DEFAULT_PREC: u32 = mahler_core::DEFAULT_PREC;
pub const DEFAULT_K_OSC: usize = 8;
pub const PREC_ENV: &str = "MAHLER_PREC";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "human" => Ok(Format::Human),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Usage(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub prec_bits: u32,
    pub k_osc: usize,
    pub cache_path: Option<PathBuf>,
    pub format: Format,
    /// Adds full-precision columns to table output.
    pub full: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prec_bits: DEFAULT_PREC,
            k_osc: DEFAULT_K_OSC,
            cache_path: None,
            format: Format::Human,
            full: false,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layers in place.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prec_bits: Option<u32>,
    pub k_osc: Option<usize>,
    pub cache_path: Option<PathBuf>,
    pub no_cache: bool,
    pub format: Option<Format>,
    pub full: bool,
    pub config: Option<PathBuf>,
}

fn parse_prec(s: &str, origin: &str) -> CliResult<u32> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{origin}: precision must be an integer, got {s:?}")))
}

impl RunConfig {
    /// Layers the sources in order of increasing priority and validates the result.
    pub fn resolve(flags: &Overrides, env_prec: Option<&str>) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        if let Some(p) = env_prec {
            cfg.prec_bits = parse_prec(p, PREC_ENV)?;
        }
        if let Some(path) = &flags.config {
            cfg.apply_file(path)?;
        }
        if let Some(p) = flags.prec_bits {
            cfg.prec_bits = p;
        }
        if let Some(k) = flags.k_osc {
            cfg.k_osc = k;
        }
        if let Some(c) = &flags.cache_path {
            cfg.cache_path = Some(c.clone());
        }
        if flags.no_cache {
            cfg.cache_path = None;
        }
        if let Some(f) = flags.format {
            cfg.format = f;
        }
        cfg.full |= flags.full;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let origin = format!("{}:{}", path.display(), no + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{origin}: expected key=value")))?;
            let value = value.trim();
            match key.trim() {
                "prec" | "prec_bits" => self.prec_bits = parse_prec(value, &origin)?,
                "k_osc" | "terms" => {
                    self.k_osc = value.parse().map_err(|_| {
                        CliError::Usage(format!("{origin}: k_osc must be an integer"))
                    })?
                }
                "cache" | "cache_path" => self.cache_path = Some(PathBuf::from(value)),
                "format" => self.format = value.parse()?,
                "full" => {
                    self.full = value.parse().map_err(|_| {
                        CliError::Usage(format!("{origin}: full must be true or false"))
                    })?
                }
                other => return Err(CliError::Usage(format!("{origin}: unknown key {other:?}"))),
            }
        }
        Ok(())
    }

    fn validate(&self) -> CliResult<()> {
        if self.prec_bits < MIN_PREC {
            return Err(CliError::Usage(format!(
                "precision must be at least {MIN_PREC} bits, got {}",
                self.prec_bits
            )));
        }
        if self.k_osc == 0 {
            return Err(CliError::Usage("k_osc must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn layering() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nprec = 300\nformat=csv\nk_osc=4").unwrap();
        let flags = Overrides {
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&flags, Some("128")).unwrap();
        assert_eq!(
            (cfg.prec_bits, cfg.format, cfg.k_osc),
            (300, Format::Csv, 4)
        );

        let flags = Overrides {
            prec_bits: Some(96),
            ..flags
        };
        assert_eq!(RunConfig::resolve(&flags, None).unwrap().prec_bits, 96);
        assert_eq!(
            RunConfig::resolve(&Overrides::default(), Some("100"))
                .unwrap()
                .prec_bits,
            100
        );
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::resolve(&Overrides::default(), Some("abc")).is_err());
        let low = Overrides {
            prec_bits: Some(32),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&low, None).is_err());
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "colour=blue").unwrap();
        let flags = Overrides {
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&flags, None).is_err());
    }
}
