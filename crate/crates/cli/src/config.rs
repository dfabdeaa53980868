//! Run configuration: a flat `name = value` file merged with command-line
//! flags.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, Command};
use nlkg_core::record::Record;

use crate::CliError;

/// Output directory used when neither `NLKG_OUT` nor `--out` is given.
pub const DEFAULT_OUT: &str = "nlkg-out";

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub help: &'static str,
    /// Flag may be given bare, meaning `true`.
    pub switch: bool,
}

const fn key(name: &'static str, help: &'static str) -> KeySpec {
    KeySpec {
        name,
        help,
        switch: false,
    }
}

const fn switch(name: &'static str, help: &'static str) -> KeySpec {
    KeySpec {
        name,
        help,
        switch: true,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [KeySpec],
}

const PARAM_FILE: KeySpec = key("params", "model parameter record written by `nlkg solve`");
const CLASS: KeySpec = key("class", "model class: complex | real1 | real2");
const ALPHA: KeySpec = key("alpha", "power of the field in the kinetic term");
const Q: KeySpec = key("q", "deformation parameter (complex class)");
const A1: KeySpec = key("a1", "gradient-coupling coefficient (complex class, default 0)");
const THETA: KeySpec = key("theta", "profile exponent (real Case II)");
const B: KeySpec = key("b", "profile frequency (real classes)");
const C: KeySpec = key("c", "amplitude constant (default 1)");
const NU: KeySpec = key("nu", "space-time dimension (default 4)");
const M: KeySpec = key("m", "mass (default 1)");
const K: KeySpec = key("k", "comma-separated wave vector");
const OMEGA: KeySpec = key("omega", "frequency (default on shell)");
const BRANCH: KeySpec = key("branch", "real profile branch: cos | sin (default cos)");

pub const SOLVE: CommandSpec = CommandSpec {
    name: "solve",
    about: "Solve the parameter constraints of a model class and print the record",
    keys: &[CLASS, ALPHA, Q, A1, THETA, B, C, NU, M],
};

pub const VERIFY: CommandSpec = CommandSpec {
    name: "verify",
    about: "Check closed-form solutions against the field equation",
    keys: &[
        PARAM_FILE,
        CLASS,
        ALPHA,
        Q,
        A1,
        THETA,
        B,
        C,
        NU,
        M,
        K,
        OMEGA,
        BRANCH,
        key("points", "number of sample points (default 50)"),
        key("h", "finite-difference step (default from the wave scales)"),
        key("kappa1", "first auxiliary coefficient, complex class (default 1)"),
        key("kappa2", "second auxiliary coefficient, complex class (default 1)"),
        key("chi1", "first auxiliary coefficient, real Case II (default 1)"),
        key("chi2", "second auxiliary coefficient, real Case II (default 1)"),
        key("fd_tol", "finite-difference threshold (default 1e-6)"),
        key("exact_tol", "exact-derivative threshold (default 1e-10)"),
    ],
};

pub const SIMULATE: CommandSpec = CommandSpec {
    name: "simulate",
    about: "Evolve the real Case I travelling wave on a 1D lattice and measure convergence",
    keys: &[
        PARAM_FILE,
        CLASS,
        ALPHA,
        B,
        C,
        NU,
        M,
        K,
        OMEGA,
        key("x0", "left end of the domain (default -0.3)"),
        key("x1", "right end of the domain (default 0.3)"),
        key("t0", "start time (default -0.8)"),
        key("t_end", "end time (default 0.8)"),
        key("courant", "dt/dx (default 0.5)"),
        key("resolutions", "comma-separated grid spacings (default 4e-3,2e-3,1e-3)"),
        key("scheme", "time discretization: product | lagged (default product)"),
        key(
            "drift_bound",
            "bound on the finest relative energy drift (default 1e-4)",
        ),
        key("order_min", "lower end of the accepted order band (default 1.8)"),
        key("order_max", "upper end of the accepted order band (default 2.2)"),
    ],
};

pub const SOLITON: CommandSpec = CommandSpec {
    name: "soliton",
    about: "Lorentzian soliton energy, density profile and plot",
    keys: &[
        ALPHA,
        Q,
        OMEGA,
        key("k", "wave number (default 1)"),
        M,
        NU,
        key("c1", "amplitude of the first field (default 1)"),
        key("c2", "amplitude of the auxiliary field (default 1)"),
        key("kappa1", "coefficient of the cancelled sector (default 1)"),
        key("zmin", "left end of the profile window (default -5)"),
        key("zmax", "right end of the profile window (default 5)"),
        key("points", "profile samples (default 401)"),
        key("times", "comma-separated times for peak tracking"),
        key("energy_tol", "relative energy tolerance (default 1e-6)"),
        switch("plot", "also write the profile as SVG"),
    ],
};

pub const SWEEP: CommandSpec = CommandSpec {
    name: "sweep",
    about: "Grid sweep of a model class with residual summary per point",
    keys: &[
        CLASS,
        key("alpha", "value, list or start:end:count"),
        key("q", "value, list or start:end:count"),
        key("a1", "value, list or start:end:count"),
        key("theta", "value, list or start:end:count"),
        key("b", "value, list or start:end:count"),
        key("c", "value, list or start:end:count"),
        key("m", "value, list or start:end:count"),
        NU,
        K,
        OMEGA,
        BRANCH,
        key("points", "sample points per set (default 50)"),
        key("h", "finite-difference step (default from the wave scales)"),
    ],
};

pub const COMMANDS: [CommandSpec; 5] = [SOLVE, VERIFY, SIMULATE, SOLITON, SWEEP];

fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

impl CommandSpec {
    pub fn allows(&self, name: &str) -> bool {
        self.keys.iter().any(|k| k.name == name)
    }

    fn command(&self) -> Command {
        let mut cmd = Command::new(self.name).about(self.about).args([
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("flat `name = value` file; flags override its entries"),
            Arg::new("out")
                .long("out")
                .value_name("DIR")
                .help("output directory (NLKG_OUT takes precedence)"),
        ]);
        for k in self.keys {
            let mut arg = Arg::new(k.name)
                .long(flag_name(k.name))
                .value_name("VALUE")
                .help(k.help)
                .action(ArgAction::Set);
            arg = if k.switch {
                arg.num_args(0..=1).default_missing_value("true")
            } else {
                arg.allow_hyphen_values(true)
            };
            cmd = cmd.arg(arg);
        }
        cmd
    }
}

pub fn cli() -> Command {
    Command::new("nlkg")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Nonlinear Klein-Gordon workbench")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommands(COMMANDS.iter().map(CommandSpec::command))
}

/// Merged configuration of one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: CommandSpec,
    pub values: Record,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Configuration from explicit entries, rejecting keys the command
    /// does not know.
    pub fn new(spec: CommandSpec, values: Record, out_dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        if let Some(k) = values.keys().find(|k| !spec.allows(k)) {
            return Err(CliError::Usage(format!("`{}` does not take key `{k}`", spec.name)));
        }
        Ok(Self {
            spec,
            values,
            out_dir: out_dir.into(),
        })
    }

    /// Configuration from `name = value` pairs.
    pub fn from_pairs(spec: CommandSpec, pairs: &[(&str, &str)]) -> Result<Self, CliError> {
        let mut values = Record::new();
        for (k, v) in pairs {
            values.set(k, v);
        }
        Self::new(spec, values, DEFAULT_OUT)
    }

    /// Configuration from parsed arguments. `env_out` is the value of
    /// `NLKG_OUT`, which wins over `--out` and the config file.
    pub fn from_matches(spec: CommandSpec, m: &ArgMatches, env_out: Option<OsString>) -> Result<Self, CliError> {
        let mut values = match m.get_one::<String>("config") {
            Some(path) => Record::parse(&read_file(Path::new(path))?)?,
            None => Record::new(),
        };
        let file_out = values.get("out").map(PathBuf::from);
        if file_out.is_some() {
            let mut rest = Record::new();
            for k in values.keys().filter(|k| *k != "out") {
                rest.set(k, values.get(k).unwrap_or_default());
            }
            values = rest;
        }
        for k in spec.keys {
            if m.value_source(k.name) == Some(ValueSource::CommandLine) {
                if let Some(v) = m.get_one::<String>(k.name) {
                    values.set(k.name, v);
                }
            }
        }
        let out_dir = env_out
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or_else(|| m.get_one::<String>("out").map(PathBuf::from))
            .or(file_out)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        Self::new(spec, values, out_dir)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.get(key).is_some()
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        self.get(key)
            .map(|v| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|e| CliError::Usage(format!("`{key}`: {e}")))
            })
            .transpose()
            .map(|v| v.unwrap_or(default))
    }

    pub fn u32_or(&self, key: &str, default: u32) -> Result<u32, CliError> {
        self.get(key)
            .map(|v| {
                v.trim()
                    .parse::<u32>()
                    .map_err(|e| CliError::Usage(format!("`{key}`: {e}")))
            })
            .transpose()
            .map(|v| v.unwrap_or(default))
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.get(key).map(|v| v.trim().to_ascii_lowercase()) {
            None => Ok(default),
            Some(v) => match v.as_str() {
                "true" | "yes" | "1" | "on" => Ok(true),
                "false" | "no" | "0" | "off" => Ok(false),
                _ => Err(CliError::Usage(format!("`{key}`: expected a boolean, got `{v}`"))),
            },
        }
    }

    /// Comma-separated list, or `default` when absent.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => parse_list(key, v),
        }
    }
}

pub fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    v.trim()
        .parse::<f64>()
        .map_err(|e| CliError::Usage(format!("`{key}`: {e} (`{v}`)")))
}

pub fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    let out = v.split(',').map(|s| parse_f64(key, s)).collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err(CliError::Usage(format!("`{key}` is empty")));
    }
    Ok(out)
}

/// `value`, `v1,v2,...` or `start:end:count`, the last expanded to evenly
/// spaced values with both ends included.
pub fn parse_range(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    if v.contains(',') {
        return parse_list(key, v);
    }
    let parts: Vec<&str> = v.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![parse_f64(key, single)?]),
        [start, end, count] => {
            let (a, b) = (parse_f64(key, start)?, parse_f64(key, end)?);
            let n: usize = count
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("`{key}` count: {e}")))?;
            match n {
                0 => Err(CliError::Usage(format!("`{key}` range has zero points"))),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err(CliError::Usage(format!(
            "`{key}`: expected value, list or start:end:count, got `{v}`"
        ))),
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
