//! Run configuration: a `key = value` file with command-line overrides.

use std::path::{Path, PathBuf};

use qho_phase::evolution::StateSpec;
use qho_phase::fock::OscParams;
use qho_phase::phase1d::EdgeMode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    Line {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    #[error("field '{field}': {detail}")]
    Field { field: &'static str, detail: String },
}

fn field_err(field: &'static str, detail: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        detail: detail.into(),
    }
}

/// Unvalidated settings; every field may come from the file or a flag.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub n_max: Option<u32>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub mode: Option<EdgeMode>,
    pub state: Option<String>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub out: Option<PathBuf>,
    pub n_max_list: Option<Vec<u32>>,
}

impl ConfigOverrides {
    /// Fields set in `other` win.
    pub fn merge(self, other: ConfigOverrides) -> Self {
        Self {
            n_max: other.n_max.or(self.n_max),
            mass: other.mass.or(self.mass),
            omega: other.omega.or(self.omega),
            mode: other.mode.or(self.mode),
            state: other.state.or(self.state),
            t_max: other.t_max.or(self.t_max),
            dt: other.dt.or(self.dt),
            out: other.out.or(self.out),
            n_max_list: other.n_max_list.or(self.n_max_list),
        }
    }
}

pub fn parse_n_max_list(s: &str) -> Result<Vec<u32>, String> {
    let list: Result<Vec<u32>, _> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| format!("'{}' is not a non-negative integer", x.trim()))
        })
        .collect();
    let list = list?;
    if list.is_empty() {
        return Err("list is empty".into());
    }
    Ok(list)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str, path: &Path) -> Result<ConfigOverrides, ConfigError> {
    let mut cfg = ConfigOverrides::default();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |detail: String| ConfigError::Line {
            path: path.to_path_buf(),
            line,
            detail,
        };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', found '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| err(format!("{key}: '{v}' is not a number")))
        };
        match key {
            "n_max" => {
                cfg.n_max =
                    Some(value.parse().map_err(|_| {
                        err(format!("n_max: '{value}' is not a non-negative integer"))
                    })?)
            }
            "mass" => cfg.mass = Some(num(value)?),
            "omega" => cfg.omega = Some(num(value)?),
            "mode" => cfg.mode = Some(value.parse().map_err(|e| err(format!("mode: {e}")))?),
            "state" => cfg.state = Some(value.to_string()),
            "t_max" => cfg.t_max = Some(num(value)?),
            "dt" => cfg.dt = Some(num(value)?),
            "out" => cfg.out = Some(PathBuf::from(value)),
            "n_max_list" => {
                cfg.n_max_list =
                    Some(parse_n_max_list(value).map_err(|e| err(format!("n_max_list: {e}")))?)
            }
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    Ok(cfg)
}

pub fn load_config_file(path: &Path) -> Result<ConfigOverrides, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(&text, path)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n_max: u32,
    pub params: OscParams,
    pub mode: EdgeMode,
    /// `None` selects the default two-level state in `H₊`.
    pub state: Option<StateSpec>,
    pub t_max: f64,
    pub dt: f64,
    pub out: Option<PathBuf>,
    pub n_max_list: Vec<u32>,
}

pub const DEFAULT_N_MAX: u32 = 8;
pub const DEFAULT_T_MAX: f64 = 10.0;
pub const DEFAULT_DT: f64 = 0.01;

impl RunConfig {
    pub fn resolve(o: ConfigOverrides) -> Result<Self, ConfigError> {
        let n_max = o.n_max.unwrap_or(DEFAULT_N_MAX);
        let mass = o.mass.unwrap_or(1.0);
        let omega = o.omega.unwrap_or(1.0);
        let params =
            OscParams::new(mass, omega).map_err(|e| field_err("mass/omega", e.to_string()))?;
        let t_max = o.t_max.unwrap_or(DEFAULT_T_MAX);
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(field_err(
                "t_max",
                format!("must be finite and >= 0, got {t_max}"),
            ));
        }
        let dt = o.dt.unwrap_or(DEFAULT_DT);
        if !(dt.is_finite() && dt > 0.0) {
            return Err(field_err("dt", format!("must be finite and > 0, got {dt}")));
        }
        let state = match &o.state {
            Some(s) => {
                let spec: StateSpec =
                    s.parse()
                        .map_err(|e: qho_phase::evolution::EvolutionError| {
                            field_err("state", e.to_string())
                        })?;
                spec.check_window(n_max as i64)
                    .map_err(|e| field_err("state", e.to_string()))?;
                Some(spec)
            }
            None => None,
        };
        let n_max_list = o.n_max_list.unwrap_or_else(|| vec![n_max]);
        if n_max_list.is_empty() {
            return Err(field_err("n_max_list", "list is empty"));
        }
        Ok(Self {
            n_max,
            params,
            mode: o.mode.unwrap_or_default(),
            state,
            t_max,
            dt,
            out: o.out,
            n_max_list,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_errors_name_the_line() {
        let p = Path::new("run.cfg");
        let err = parse_config_text("n_max = 4\n# note\nomega = fast\n", p).unwrap_err();
        assert_eq!(err.to_string(), "run.cfg:3: omega: 'fast' is not a number");
        let err = parse_config_text("colour = red", p).unwrap_err();
        assert!(matches!(err, ConfigError::Line { line: 1, .. }));
        assert!(parse_config_text("n_max 4", p).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config_text("n_max = 4\nmode = cyclic\ndt = 0.5", Path::new("x")).unwrap();
        let flags = ConfigOverrides {
            n_max: Some(6),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(file.merge(flags)).unwrap();
        assert_eq!(cfg.n_max, 6);
        assert_eq!(cfg.mode, EdgeMode::Cyclic);
        assert_eq!(cfg.dt, 0.5);
        assert_eq!(cfg.t_max, DEFAULT_T_MAX);
    }

    #[test]
    fn invalid_fields() {
        let bad = |o: ConfigOverrides| RunConfig::resolve(o).unwrap_err();
        assert!(matches!(
            bad(ConfigOverrides {
                dt: Some(0.0),
                ..Default::default()
            }),
            ConfigError::Field { field: "dt", .. }
        ));
        assert!(matches!(
            bad(ConfigOverrides {
                t_max: Some(-1.0),
                ..Default::default()
            }),
            ConfigError::Field { field: "t_max", .. }
        ));
        assert!(matches!(
            bad(ConfigOverrides {
                omega: Some(0.0),
                ..Default::default()
            }),
            ConfigError::Field { .. }
        ));
        let outside = ConfigOverrides {
            n_max: Some(2),
            state: Some("1,1,0,+".into()),
            ..Default::default()
        };
        assert!(matches!(
            bad(outside),
            ConfigError::Field { field: "state", .. }
        ));
    }

    #[test]
    fn n_max_lists() {
        assert_eq!(parse_n_max_list("2, 4,6").unwrap(), vec![2, 4, 6]);
        assert!(parse_n_max_list("2,x").is_err());
    }
}
