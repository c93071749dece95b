use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "metalfluct", version, about = "Casimir force and radiative heat transfer between metallic mirrors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Net radiative power between two plates at T1 and T2.
    HeatTransfer(Options),
    /// Casimir pressure at a common temperature.
    Casimir(Options),
    /// Spectral density of the transferred power over a frequency band.
    Spectrum(Options),
    /// Surface-current amplitude densities of one plate on an (omega, kperp) grid.
    Correlations(Options),
    /// Gap sweep of heat-transfer or casimir.
    Sweep(Options),
}

impl CommandArgs {
    pub fn name(&self) -> &'static str {
        match self {
            CommandArgs::HeatTransfer(_) => "heat-transfer",
            CommandArgs::Casimir(_) => "casimir",
            CommandArgs::Spectrum(_) => "spectrum",
            CommandArgs::Correlations(_) => "correlations",
            CommandArgs::Sweep(_) => "sweep",
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            CommandArgs::HeatTransfer(o)
            | CommandArgs::Casimir(o)
            | CommandArgs::Spectrum(o)
            | CommandArgs::Correlations(o)
            | CommandArgs::Sweep(o) => o,
        }
    }
}

/// Every flag is also a config-file key of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Gap: 0.3um, 300nm, 3e-5cm (bare numbers are µm) or a range a:b:N{log|lin}.
    #[arg(long)]
    pub gap: Option<String>,
    /// Common temperature in K (casimir, correlations).
    #[arg(long = "T", value_name = "K")]
    pub t: Option<String>,
    /// Temperature of mirror 1 in K.
    #[arg(long = "T1", value_name = "K")]
    pub t1: Option<String>,
    /// Temperature of mirror 2 in K.
    #[arg(long = "T2", value_name = "K")]
    pub t2: Option<String>,
    /// Both mirrors: drude:<Op>,<gamma> (eV or rad/s), ideal, impedance:<zeta>, table:<path>.
    #[arg(long)]
    pub material: Option<String>,
    #[arg(long)]
    pub material1: Option<String>,
    #[arg(long)]
    pub material2: Option<String>,
    /// impedance, lifshitz-dielectric or both.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long = "rel-tol")]
    pub rel_tol: Option<String>,
    #[arg(long = "abs-floor")]
    pub abs_floor: Option<String>,
    #[arg(long = "max-subdivisions")]
    pub max_subdivisions: Option<String>,
    #[arg(long = "tail-rel-tol")]
    pub tail_rel_tol: Option<String>,
    #[arg(long = "max-terms")]
    pub max_terms: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Output directory; defaults to $METALFLUCT_OUT_DIR, then the working directory.
    #[arg(long)]
    pub out: Option<String>,
    /// Frequency band lo:hi in rad/s.
    #[arg(long)]
    pub band: Option<String>,
    #[arg(long = "points-per-decade")]
    pub points_per_decade: Option<String>,
    /// Frequency in rad/s, or a range a:b:N{log|lin}.
    #[arg(long)]
    pub omega: Option<String>,
    /// Transverse wavenumber in 1/cm, or a range a:b:N{log|lin}.
    #[arg(long)]
    pub kperp: Option<String>,
    /// Command swept by `sweep`: heat-transfer or casimir.
    #[arg(long)]
    pub command: Option<String>,
}

impl Options {
    /// The flags that were given, keyed by their config-file names.
    pub fn given(&self) -> Vec<(&'static str, String)> {
        [
            ("gap", &self.gap),
            ("T", &self.t),
            ("T1", &self.t1),
            ("T2", &self.t2),
            ("material", &self.material),
            ("material1", &self.material1),
            ("material2", &self.material2),
            ("model", &self.model),
            ("rel-tol", &self.rel_tol),
            ("abs-floor", &self.abs_floor),
            ("max-subdivisions", &self.max_subdivisions),
            ("tail-rel-tol", &self.tail_rel_tol),
            ("max-terms", &self.max_terms),
            ("format", &self.format),
            ("out", &self.out),
            ("band", &self.band),
            ("points-per-decade", &self.points_per_decade),
            ("omega", &self.omega),
            ("kperp", &self.kperp),
            ("command", &self.command),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect()
    }
}

pub const KEYS: [&str; 20] = [
    "gap",
    "T",
    "T1",
    "T2",
    "material",
    "material1",
    "material2",
    "model",
    "rel-tol",
    "abs-floor",
    "max-subdivisions",
    "tail-rel-tol",
    "max-terms",
    "format",
    "out",
    "band",
    "points-per-decade",
    "omega",
    "kperp",
    "command",
];
