//! Resolution of flags and config-file entries into a [`RunConfig`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use metalfluct_core::materials::{MaterialModel, ModelTag};
use metalfluct_core::quadrature::{MatsubaraConfig, QuadratureConfig};
use serde::Serialize;

use crate::args::{CommandArgs, KEYS};
use crate::{parse, Failure};

pub const OUT_DIR_ENV: &str = "METALFLUCT_OUT_DIR";
pub const DEFAULT_MATERIAL: &str = "drude:11.5eV,0.05eV";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    HeatTransfer,
    Casimir,
    Spectrum,
    Correlations,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::HeatTransfer => "heat-transfer",
            Command::Casimir => "casimir",
            Command::Spectrum => "spectrum",
            Command::Correlations => "correlations",
            Command::Sweep => "sweep",
        }
    }

    /// Stem of the main output file.
    pub fn file_stem(self) -> &'static str {
        match self {
            Command::HeatTransfer => "heat_transfer",
            Command::Casimir => "casimir",
            Command::Spectrum => "spectrum",
            Command::Correlations => "correlations",
            Command::Sweep => "sweep",
        }
    }

    fn from_args(args: &CommandArgs) -> Self {
        match args {
            CommandArgs::HeatTransfer(_) => Command::HeatTransfer,
            CommandArgs::Casimir(_) => Command::Casimir,
            CommandArgs::Spectrum(_) => Command::Spectrum,
            CommandArgs::Correlations(_) => Command::Correlations,
            CommandArgs::Sweep(_) => Command::Sweep,
        }
    }

    /// Keys the command reads, with their defaults where one exists.
    fn keys(self) -> &'static [(&'static str, Option<&'static str>)] {
        const CAVITY: [(&str, Option<&str>); 9] = [
            ("gap", None),
            ("material", None),
            ("material1", None),
            ("material2", None),
            ("model", Some("both")),
            ("rel-tol", Some("1e-6")),
            ("abs-floor", Some("1e-30")),
            ("max-subdivisions", Some("60")),
            ("format", Some("csv")),
        ];
        match self {
            Command::HeatTransfer => {
                const K: [(&str, Option<&str>); 11] = concat(CAVITY, [("T1", Some("323")), ("T2", Some("300"))]);
                &K
            }
            Command::Casimir => {
                const K: [(&str, Option<&str>); 12] = concat(
                    CAVITY,
                    [("T", Some("300")), ("tail-rel-tol", Some("1e-8")), ("max-terms", Some("1000000"))],
                );
                &K
            }
            Command::Spectrum => {
                const K: [(&str, Option<&str>); 13] = concat(
                    CAVITY,
                    [
                        ("T1", Some("323")),
                        ("T2", Some("300")),
                        ("band", Some("1e8:1e16")),
                        ("points-per-decade", Some("60")),
                    ],
                );
                &K
            }
            Command::Correlations => &[
                ("material", None),
                ("T", Some("300")),
                ("omega", None),
                ("kperp", None),
                ("format", Some("csv")),
            ],
            Command::Sweep => &[],
        }
    }
}

const fn concat<const A: usize, const B: usize, const N: usize>(
    a: [(&'static str, Option<&'static str>); A],
    b: [(&'static str, Option<&'static str>); B],
) -> [(&'static str, Option<&'static str>); N] {
    let mut out = [("", None); N];
    let mut i = 0;
    while i < A {
        out[i] = a[i];
        i += 1;
    }
    while i < N {
        out[i] = b[i - A];
        i += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A fully resolved run. Lengths in cm, temperatures in K, frequencies in
/// rad/s, wavenumbers in 1/cm.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// The computation performed; differs from `command` only for sweeps.
    pub task: Command,
    /// Two mirrors for cavity commands, one surface for correlations.
    pub materials: Vec<MaterialModel>,
    pub gaps: Vec<f64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub temperature: Option<f64>,
    pub models: Vec<ModelTag>,
    pub quadrature: Option<QuadratureConfig>,
    pub matsubara: Option<MatsubaraConfig>,
    pub band: Option<(f64, f64)>,
    pub points_per_decade: Option<usize>,
    pub omegas: Vec<f64>,
    pub kperps: Vec<f64>,
    pub format: Format,
    pub out_dir: PathBuf,
    /// Effective settings after defaults, as `key = value` strings. Feeding
    /// these back through `--config` reproduces the run.
    pub settings: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn settings_text(&self) -> String {
        let mut s = format!("# metalfluct {}\n", self.command.name());
        for (k, v) in &self.settings {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }
}

/// A config file as read from disk.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigFile {
    pub path: PathBuf,
    pub contents: String,
}

pub fn read_config_file(path: &Path) -> Result<ConfigFile, Failure> {
    let contents = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("config: cannot read {}: {e}", path.display())))?;
    Ok(ConfigFile {
        path: path.to_path_buf(),
        contents,
    })
}

/// Parses a flat `key = value` file. `#` starts a comment at the beginning
/// of a line or after whitespace.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, Failure> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = match raw.find(" #").or_else(|| raw.find("\t#")) {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Failure::usage("config", format!("line {}: expected `key = value`", n + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Failure::usage(key, format!("unknown key on config line {}", n + 1)));
        }
        let value = value.trim().trim_matches('"');
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Failure::usage(key, format!("repeated on config line {}", n + 1)));
        }
    }
    Ok(out)
}

/// Merges file entries and flags (flags win) and resolves them.
pub fn resolve(args: &CommandArgs, file: Option<&ConfigFile>) -> Result<RunConfig, Failure> {
    let mut raw = match file {
        Some(f) => parse_config_text(&f.contents)?,
        None => BTreeMap::new(),
    };
    for (k, v) in args.options().given() {
        raw.insert(k.to_string(), v);
    }
    resolve_settings(Command::from_args(args), raw, std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
}

pub fn resolve_settings(
    command: Command,
    mut raw: BTreeMap<String, String>,
    env_out: Option<PathBuf>,
) -> Result<RunConfig, Failure> {
    let task = if command == Command::Sweep {
        let swept = raw
            .get("command")
            .ok_or_else(|| Failure::usage("command", "sweep needs --command heat-transfer or casimir".into()))?;
        match swept.as_str() {
            "heat-transfer" => Command::HeatTransfer,
            "casimir" => Command::Casimir,
            other => {
                return Err(Failure::usage(
                    "command",
                    format!("'{other}' cannot be swept; use heat-transfer or casimir"),
                ))
            }
        }
    } else {
        command
    };

    let out_dir = raw
        .remove("out")
        .map(PathBuf::from)
        .or(env_out)
        .unwrap_or_else(|| PathBuf::from("."));

    let keys = task.keys();
    for key in raw.keys() {
        let used = keys.iter().any(|(k, _)| k == key) || (key == "command" && command == Command::Sweep);
        if !used {
            return Err(Failure::usage(key, format!("not used by {}", command.name())));
        }
    }

    // a shared material expands into both mirrors
    let cavity = task != Command::Correlations;
    if cavity {
        let shared = raw.remove("material").unwrap_or_else(|| DEFAULT_MATERIAL.to_string());
        raw.entry("material1".into()).or_insert_with(|| shared.clone());
        raw.entry("material2".into()).or_insert(shared);
    } else {
        raw.entry("material".into()).or_insert_with(|| DEFAULT_MATERIAL.to_string());
    }
    for (k, default) in keys {
        if let Some(d) = default {
            raw.entry(k.to_string()).or_insert_with(|| d.to_string());
        }
    }

    let get = |k: &str| raw.get(k).map(String::as_str);
    let required = |k: &'static str| get(k).ok_or_else(|| Failure::usage(k, "required".into()));

    let materials = if cavity {
        vec![
            parse::material("material1", required("material1")?)?,
            parse::material("material2", required("material2")?)?,
        ]
    } else {
        vec![parse::material("material", required("material")?)?]
    };

    let gaps = if cavity {
        parse::range("gap", required("gap")?, parse::length)?
    } else {
        Vec::new()
    };
    if task == Command::Spectrum && gaps.len() != 1 {
        return Err(Failure::usage("gap", "spectrum takes a single gap".into()));
    }

    let temp = |k: &'static str, allow_zero: bool| -> Result<Option<f64>, Failure> {
        get(k)
            .map(|s| if allow_zero { parse::non_negative(k, s) } else { parse::positive(k, s) })
            .transpose()
    };
    let t1 = temp("T1", false)?;
    let t2 = temp("T2", false)?;
    let temperature = temp("T", task == Command::Casimir)?;

    let models = match get("model") {
        Some(s) => parse::models("model", s)?,
        None => Vec::new(),
    };

    let quadrature = if cavity {
        let q = QuadratureConfig {
            rel_tol: parse::positive("rel-tol", required("rel-tol")?)?,
            abs_floor: parse::non_negative("abs-floor", required("abs-floor")?)?,
            max_subdivisions: parse::count("max-subdivisions", required("max-subdivisions")?)?,
        };
        q.validate().map_err(|e| Failure::usage("rel-tol/abs-floor/max-subdivisions", e.to_string()))?;
        Some(q)
    } else {
        None
    };
    let matsubara = if task == Command::Casimir {
        let m = MatsubaraConfig {
            tail_rel_tol: parse::positive("tail-rel-tol", required("tail-rel-tol")?)?,
            max_terms: parse::count("max-terms", required("max-terms")?)?,
        };
        m.validate().map_err(|e| Failure::usage("tail-rel-tol/max-terms", e.to_string()))?;
        Some(m)
    } else {
        None
    };

    let band = get("band").map(|s| parse::band("band", s)).transpose()?;
    let points_per_decade = get("points-per-decade")
        .map(|s| parse::count("points-per-decade", s))
        .transpose()?;

    let (omegas, kperps) = if task == Command::Correlations {
        (
            parse::range("omega", required("omega")?, parse::positive)?,
            parse::range("kperp", required("kperp")?, parse::non_negative)?,
        )
    } else {
        (Vec::new(), Vec::new())
    };

    let format = match required("format")? {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(Failure::usage("format", format!("'{other}' is not csv or json"))),
    };

    Ok(RunConfig {
        command,
        task,
        materials,
        gaps,
        t1,
        t2,
        temperature,
        models,
        quadrature,
        matsubara,
        band,
        points_per_decade,
        omegas,
        kperps,
        format,
        out_dir,
        settings: raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use metalfluct_core::materials::DrudeParams;

    fn settings(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn resolve(command: Command, pairs: &[(&str, &str)]) -> Result<RunConfig, Failure> {
        resolve_settings(command, settings(pairs), None)
    }

    #[test]
    fn heat_defaults() {
        let cfg = resolve(Command::HeatTransfer, &[("gap", "0.3um"), ("model", "both")]).unwrap();
        let al = MaterialModel::DrudeImpedance(DrudeParams::aluminium());
        assert_eq!(cfg.materials, vec![al.clone(), al]);
        assert_eq!((cfg.t1, cfg.t2), (Some(323.0), Some(300.0)));
        assert_eq!(cfg.models.len(), 2);
        assert_eq!(cfg.gaps, vec![3e-5]);
        assert_eq!(cfg.settings["material1"], DEFAULT_MATERIAL);
        assert!(!cfg.settings.contains_key("material"));
    }

    #[test]
    fn settings_round_trip() {
        let cfg = resolve(
            Command::Casimir,
            &[("gap", "1um"), ("T", "300"), ("material", "drude:11.5eV,0.05eV"), ("model", "impedance")],
        )
        .unwrap();
        let again = resolve_settings(Command::Casimir, parse_config_text(&cfg.settings_text()).unwrap(), None).unwrap();
        assert_eq!(again.settings, cfg.settings);
        assert_eq!(again.materials, cfg.materials);
        assert_eq!(again.quadrature, cfg.quadrature);
    }

    #[test]
    fn usage_errors_name_the_field() {
        let field = |r: Result<RunConfig, Failure>| match r {
            Err(Failure::Usage { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(field(resolve(Command::HeatTransfer, &[("gap", "0")])), "gap");
        assert_eq!(field(resolve(Command::HeatTransfer, &[])), "gap");
        assert_eq!(field(resolve(Command::HeatTransfer, &[("gap", "1"), ("material", "gold")])), "material1");
        assert_eq!(field(resolve(Command::HeatTransfer, &[("gap", "1"), ("T", "300")])), "T");
        assert_eq!(field(resolve(Command::Casimir, &[("gap", "1"), ("band", "1e8:1e9")])), "band");
        assert_eq!(field(resolve(Command::Sweep, &[("gap", "1")])), "command");
        assert_eq!(field(resolve(Command::Sweep, &[("gap", "1"), ("command", "spectrum")])), "command");
        assert_eq!(field(resolve(Command::Spectrum, &[("gap", "1:2:3log")])), "gap");
        assert_eq!(field(resolve(Command::Casimir, &[("gap", "1"), ("rel-tol", "0.5")])), "rel-tol/abs-floor/max-subdivisions");
        assert_eq!(field(resolve(Command::Correlations, &[("omega", "1e14")])), "kperp");
    }

    #[test]
    fn per_mirror_material_wins() {
        let cfg = resolve(
            Command::Casimir,
            &[("gap", "1"), ("material", "ideal"), ("material2", "impedance:1e-5")],
        )
        .unwrap();
        assert_eq!(cfg.materials[0], MaterialModel::Ideal);
        assert_eq!(cfg.materials[1], MaterialModel::ConstantImpedance(1e-5));
    }

    #[test]
    fn casimir_accepts_zero_temperature() {
        let cfg = resolve(Command::Casimir, &[("gap", "1"), ("T", "0")]).unwrap();
        assert_eq!(cfg.temperature, Some(0.0));
        assert!(resolve(Command::Correlations, &[("omega", "1e14"), ("kperp", "0"), ("T", "0")]).is_err());
    }

    #[test]
    fn out_dir_precedence() {
        let cfg = resolve_settings(
            Command::Casimir,
            settings(&[("gap", "1")]),
            Some(PathBuf::from("/env")),
        )
        .unwrap();
        assert_eq!(cfg.out_dir, PathBuf::from("/env"));
        let cfg = resolve_settings(
            Command::Casimir,
            settings(&[("gap", "1"), ("out", "/flag")]),
            Some(PathBuf::from("/env")),
        )
        .unwrap();
        assert_eq!(cfg.out_dir, PathBuf::from("/flag"));
        assert!(!cfg.settings.contains_key("out"));
    }

    #[test]
    fn config_text_parsing() {
        let m = parse_config_text("# comment\ngap = 0.3um  # inline\n\nmodel=\"both\"\n").unwrap();
        assert_eq!(m["gap"], "0.3um");
        assert_eq!(m["model"], "both");
        assert!(parse_config_text("gap 0.3").is_err());
        assert!(parse_config_text("colour = red").is_err());
        assert!(parse_config_text("gap = 1\ngap = 2").is_err());
    }
}
