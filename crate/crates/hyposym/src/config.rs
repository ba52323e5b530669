//! Run configuration: TOML in, validated [`RunConfig`] out, and a canonical
//! emitter with `parse(emit(c)) == c`.

use std::fmt;

use hyposym_core::catalog;
use hyposym_core::solver::EpsPolicy;
use hyposym_core::symbol::MAX_M;
use hyposym_core::{Poly, SystemSymbol};
use toml::{Table, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Reduce,
    VerifyQs,
    Conditions,
    Solve,
    Growth,
    Report,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Reduce,
        Command::VerifyQs,
        Command::Conditions,
        Command::Solve,
        Command::Growth,
        Command::Report,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Reduce => "reduce",
            Command::VerifyQs => "verify-qs",
            Command::Conditions => "conditions",
            Command::Solve => "solve",
            Command::Growth => "growth",
            Command::Report => "report",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Example(String),
    Explicit {
        m: usize,
        n: usize,
        horizon: f64,
        /// [direction][row][col] ascending coefficients, trailing zeros trimmed.
        coefficients: Vec<Vec<Vec<Vec<f64>>>>,
    },
}

impl SystemSpec {
    pub fn to_symbol(&self) -> hyposym_core::Result<SystemSymbol> {
        match self {
            SystemSpec::Example(name) => catalog::by_name(name),
            SystemSpec::Explicit {
                m,
                n,
                horizon,
                coefficients,
            } => {
                let polys = coefficients
                    .iter()
                    .map(|dir| dir.iter().flatten().map(|c| Poly::new(c.clone())).collect())
                    .collect();
                SystemSymbol::new(*m, *n, polys, *horizon)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub t_points: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_points: usize,
    pub directions: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            t_points: 201,
            xi_min: 1.0,
            xi_max: 1e4,
            xi_points: 32,
            directions: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSection {
    pub step: Option<f64>,
    pub cfl: f64,
    pub eps_policy: EpsPolicy,
    /// Regularity parameter used for the expected integral exponent.
    pub k: f64,
    /// Frequencies |xi| of the energy traces.
    pub xi: Vec<f64>,
    /// u_hat(0) as (re, im) pairs; empty means (1, i, 0, ...).
    pub initial: Vec<(f64, f64)>,
    pub eps_sweep: Vec<f64>,
    pub sweep_xi: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            step: None,
            cfl: 0.05,
            eps_policy: EpsPolicy::Balanced { k: 2.0 },
            k: 2.0,
            xi: vec![10.0, 100.0, 1000.0],
            initial: Vec::new(),
            eps_sweep: vec![1e-1, 1e-2, 1e-3],
            sweep_xi: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSection {
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_points: usize,
}

impl Default for GrowthSection {
    fn default() -> Self {
        Self {
            xi_min: 10.0,
            xi_max: 1e4,
            xi_points: 13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Gaussian,
    Sine,
    Bump,
}

impl Profile {
    pub fn as_str(&self) -> &'static str {
        match self {
            Profile::Gaussian => "gaussian",
            Profile::Sine => "sine",
            Profile::Bump => "bump",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Profile::Gaussian, Profile::Sine, Profile::Bump]
            .into_iter()
            .find(|p| p.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchySection {
    pub points: usize,
    pub profile: Profile,
    pub snapshots: Vec<f64>,
}

impl Default for CauchySection {
    fn default() -> Self {
        Self {
            points: 1024,
            profile: Profile::Gaussian,
            snapshots: vec![0.5, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QsSection {
    pub samples: usize,
    pub eps: Vec<f64>,
    pub big_m: f64,
    pub near_diagonal_samples: usize,
}

impl Default for QsSection {
    fn default() -> Self {
        Self {
            samples: 200,
            eps: vec![1.0, 0.1, 0.01],
            big_m: 10.0,
            near_diagonal_samples: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub dir: String,
    pub seed: u64,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub system: SystemSpec,
    pub grid: GridConfig,
    pub solver: SolverSection,
    pub growth: GrowthSection,
    pub cauchy: CauchySection,
    pub qs: QsSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn for_example(name: &str) -> Self {
        Self {
            command: None,
            system: SystemSpec::Example(name.into()),
            grid: GridConfig::default(),
            solver: SolverSection::default(),
            growth: GrowthSection::default(),
            cauchy: CauchySection::default(),
            qs: QsSection::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax { line: usize, column: usize },
    Schema,
    Capability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub kind: ErrorKind,
    /// Dotted key path, empty for syntax errors.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ErrorKind::Syntax { line, column } => {
                write!(f, "syntax error at {line}:{column}: {}", self.message)
            }
            ErrorKind::Schema => write!(f, "{}: {}", self.path, self.message),
            ErrorKind::Capability => write!(f, "{}: capability error: {}", self.path, self.message),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Reader {
    errors: Vec<ConfigError>,
}

impl Reader {
    fn schema(&mut self, path: &str, message: impl Into<String>) {
        self.errors.push(ConfigError {
            kind: ErrorKind::Schema,
            path: path.into(),
            message: message.into(),
        });
    }

    fn reject_unknown(&mut self, table: &Table, prefix: &str, known: &[&str]) {
        for key in table.keys() {
            if !known.contains(&key.as_str()) {
                self.schema(&join(prefix, key), "unknown key");
            }
        }
    }

    fn section<'a>(&mut self, root: &'a Table, key: &str) -> Option<&'a Table> {
        match root.get(key) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => {
                self.schema(key, "expected a table");
                None
            }
        }
    }

    fn float(&mut self, t: &Table, prefix: &str, key: &str, default: f64) -> f64 {
        let path = join(prefix, key);
        match t.get(key) {
            None => default,
            Some(v) => match as_f64(v) {
                Some(x) if x.is_finite() => x,
                Some(_) => {
                    self.schema(&path, "must be finite");
                    default
                }
                None => {
                    self.schema(&path, "expected a number");
                    default
                }
            },
        }
    }

    fn positive(&mut self, t: &Table, prefix: &str, key: &str, default: f64) -> f64 {
        let x = self.float(t, prefix, key, default);
        if !(x > 0.0) {
            self.schema(&join(prefix, key), "must be positive");
        }
        x
    }

    fn count(&mut self, t: &Table, prefix: &str, key: &str, default: usize, min: usize) -> usize {
        let path = join(prefix, key);
        match t.get(key) {
            None => default,
            Some(Value::Integer(i)) if *i >= min as i64 => *i as usize,
            Some(Value::Integer(_)) => {
                self.schema(&path, format!("must be at least {min}"));
                default
            }
            Some(_) => {
                self.schema(&path, "expected an integer");
                default
            }
        }
    }

    fn string<'a>(&mut self, t: &'a Table, prefix: &str, key: &str) -> Option<&'a str> {
        match t.get(key) {
            None => None,
            Some(Value::String(s)) => Some(s),
            Some(_) => {
                self.schema(&join(prefix, key), "expected a string");
                None
            }
        }
    }

    fn floats(&mut self, t: &Table, prefix: &str, key: &str, default: Vec<f64>) -> Vec<f64> {
        let path = join(prefix, key);
        match t.get(key) {
            None => default,
            Some(Value::Array(a)) => {
                let mut out = Vec::with_capacity(a.len());
                for (i, v) in a.iter().enumerate() {
                    match as_f64(v) {
                        Some(x) if x.is_finite() => out.push(x),
                        _ => self.schema(&format!("{path}[{i}]"), "expected a finite number"),
                    }
                }
                out
            }
            Some(_) => {
                self.schema(&path, "expected an array of numbers");
                default
            }
        }
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn trim(mut c: Vec<f64>) -> Vec<f64> {
    while c.last() == Some(&0.0) {
        c.pop();
    }
    c
}

/// Parses and validates; on failure returns every error found.
pub fn parse_config(text: &str) -> Result<RunConfig, Vec<ConfigError>> {
    let root: Table = match text.parse() {
        Ok(t) => t,
        Err(e) => {
            let e: toml::de::Error = e;
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            return Err(vec![ConfigError {
                kind: ErrorKind::Syntax { line, column },
                path: String::new(),
                message: e.message().to_string(),
            }]);
        }
    };
    let mut r = Reader { errors: Vec::new() };
    r.reject_unknown(
        &root,
        "",
        &[
            "command", "system", "grid", "solver", "growth", "cauchy", "qs", "output",
        ],
    );

    let command = match r.string(&root, "", "command") {
        None => None,
        Some(s) => match Command::parse(s) {
            Some(c) => Some(c),
            None => {
                let names: Vec<&str> = Command::ALL.iter().map(|c| c.as_str()).collect();
                r.schema(
                    "command",
                    format!(
                        "unknown command `{s}`; expected one of {}",
                        names.join(", ")
                    ),
                );
                None
            }
        },
    };

    let system = match r.section(&root, "system") {
        None => {
            r.schema("system", "missing required section");
            None
        }
        Some(t) => read_system(&mut r, t),
    };

    let empty = Table::new();
    let g = r.section(&root, "grid").unwrap_or(&empty);
    r.reject_unknown(
        g,
        "grid",
        &["t_points", "xi_min", "xi_max", "xi_points", "directions"],
    );
    let d = GridConfig::default();
    let grid = GridConfig {
        t_points: r.count(g, "grid", "t_points", d.t_points, 1),
        xi_min: r.positive(g, "grid", "xi_min", d.xi_min),
        xi_max: r.positive(g, "grid", "xi_max", d.xi_max),
        xi_points: r.count(g, "grid", "xi_points", d.xi_points, 1),
        directions: r.count(g, "grid", "directions", d.directions, 1),
    };
    if grid.xi_max < grid.xi_min {
        r.schema("grid.xi_max", "must not be below grid.xi_min");
    }

    let st = r.section(&root, "solver").unwrap_or(&empty);
    let solver = read_solver(&mut r, st);

    let gt = r.section(&root, "growth").unwrap_or(&empty);
    r.reject_unknown(gt, "growth", &["xi_min", "xi_max", "xi_points"]);
    let d = GrowthSection::default();
    let growth = GrowthSection {
        xi_min: r.positive(gt, "growth", "xi_min", d.xi_min),
        xi_max: r.positive(gt, "growth", "xi_max", d.xi_max),
        xi_points: r.count(gt, "growth", "xi_points", d.xi_points, 3),
    };
    if growth.xi_max < 100.0 * growth.xi_min * (1.0 - 1e-12) {
        r.schema(
            "growth.xi_max",
            "the growth grid must span at least two decades",
        );
    }

    let ct = r.section(&root, "cauchy").unwrap_or(&empty);
    r.reject_unknown(ct, "cauchy", &["points", "profile", "snapshots"]);
    let d = CauchySection::default();
    let points = r.count(ct, "cauchy", "points", d.points, 8);
    if !points.is_power_of_two() {
        r.schema("cauchy.points", "must be a power of two");
    }
    let profile = match r.string(ct, "cauchy", "profile") {
        None => d.profile,
        Some(p) => Profile::parse(p).unwrap_or_else(|| {
            r.schema(
                "cauchy.profile",
                format!("unknown profile `{p}`; expected gaussian, sine or bump"),
            );
            d.profile
        }),
    };
    let snapshots = r.floats(ct, "cauchy", "snapshots", d.snapshots);
    if snapshots.iter().any(|&t| t < 0.0) {
        r.schema("cauchy.snapshots", "times must be nonnegative");
    }
    let cauchy = CauchySection {
        points,
        profile,
        snapshots,
    };

    let qt = r.section(&root, "qs").unwrap_or(&empty);
    r.reject_unknown(
        qt,
        "qs",
        &["samples", "eps", "big_m", "near_diagonal_samples"],
    );
    let d = QsSection::default();
    let qs = QsSection {
        samples: r.count(qt, "qs", "samples", d.samples, 1),
        eps: r.floats(qt, "qs", "eps", d.eps),
        big_m: r.positive(qt, "qs", "big_m", d.big_m),
        near_diagonal_samples: r.count(
            qt,
            "qs",
            "near_diagonal_samples",
            d.near_diagonal_samples,
            1,
        ),
    };
    if qs.eps.is_empty() || qs.eps.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        r.schema("qs.eps", "values must lie in (0, 1]");
    }

    let ot = r.section(&root, "output").unwrap_or(&empty);
    r.reject_unknown(ot, "output", &["dir", "seed"]);
    let d = OutputSection::default();
    let dir = r
        .string(ot, "output", "dir")
        .map(str::to_string)
        .unwrap_or(d.dir);
    let seed = match ot.get("seed") {
        None => d.seed,
        Some(Value::Integer(i)) if *i >= 0 => *i as u64,
        Some(_) => {
            r.schema("output.seed", "expected a nonnegative integer");
            d.seed
        }
    };
    let output = OutputSection { dir, seed };

    if !r.errors.is_empty() {
        return Err(r.errors);
    }
    Ok(RunConfig {
        command,
        system: system.expect("system is present when no errors were recorded"),
        grid,
        solver,
        growth,
        cauchy,
        qs,
        output,
    })
}

fn read_system(r: &mut Reader, t: &Table) -> Option<SystemSpec> {
    r.reject_unknown(
        t,
        "system",
        &["example", "m", "n", "horizon", "coefficients", "entry"],
    );
    if let Some(name) = r.string(t, "system", "example") {
        for k in ["m", "n", "horizon", "coefficients", "entry"] {
            if t.contains_key(k) {
                r.schema(
                    &join("system", k),
                    "not allowed together with system.example",
                );
            }
        }
        if !catalog::NAMES.contains(&name) {
            r.schema(
                "system.example",
                format!(
                    "unknown example `{name}`; known: {}",
                    catalog::NAMES.join(", ")
                ),
            );
            return None;
        }
        return Some(SystemSpec::Example(name.to_string()));
    }
    let m = match t.get("m") {
        None => {
            r.schema("system.m", "missing required key (or give system.example)");
            return None;
        }
        Some(Value::Integer(i)) if *i >= 1 => *i as usize,
        Some(_) => {
            r.schema("system.m", "expected a positive integer");
            return None;
        }
    };
    if m > MAX_M {
        r.errors.push(ConfigError {
            kind: ErrorKind::Capability,
            path: "system.m".into(),
            message: format!("m = {m} exceeds the supported maximum {MAX_M}"),
        });
        return None;
    }
    let n = r.count(t, "system", "n", 1, 1);
    let horizon = r.positive(t, "system", "horizon", 1.0);
    let mut coefficients = vec![vec![vec![Vec::new(); m]; m]; n];
    match (t.get("coefficients"), t.get("entry")) {
        (Some(_), Some(_)) => {
            r.schema(
                "system.entry",
                "give either system.coefficients or system.entry, not both",
            );
            return None;
        }
        (None, None) => {
            r.schema(
                "system.coefficients",
                "missing required key (or system.entry)",
            );
            return None;
        }
        (Some(v), None) => {
            let before = r.errors.len();
            let dirs = v.as_array().filter(|a| a.len() == n);
            match dirs {
                None => r.schema(
                    "system.coefficients",
                    format!("expected an array of {n} direction blocks"),
                ),
                Some(dirs) => {
                    for (d, block) in dirs.iter().enumerate() {
                        let rows = block.as_array().filter(|a| a.len() == m);
                        let Some(rows) = rows else {
                            r.schema(
                                &format!("system.coefficients[{d}]"),
                                format!("expected {m} rows"),
                            );
                            continue;
                        };
                        for (i, row) in rows.iter().enumerate() {
                            let Some(cols) = row.as_array().filter(|a| a.len() == m) else {
                                r.schema(
                                    &format!("system.coefficients[{d}][{i}]"),
                                    format!("expected {m} entries"),
                                );
                                continue;
                            };
                            for (j, entry) in cols.iter().enumerate() {
                                let path = format!("system.coefficients[{d}][{i}][{j}]");
                                match poly_from(entry) {
                                    Some(c) => coefficients[d][i][j] = trim(c),
                                    None => r.schema(&path, "expected an array of finite numbers"),
                                }
                            }
                        }
                    }
                }
            }
            if r.errors.len() > before {
                return None;
            }
        }
        (None, Some(v)) => {
            let Some(entries) = v.as_array() else {
                r.schema("system.entry", "expected an array of tables");
                return None;
            };
            let before = r.errors.len();
            for (k, e) in entries.iter().enumerate() {
                let path = format!("system.entry[{k}]");
                let Some(et) = e.as_table() else {
                    r.schema(&path, "expected a table");
                    continue;
                };
                r.reject_unknown(et, &path, &["dir", "row", "col", "coeffs"]);
                let dir = r.count(et, &path, "dir", 1, 1);
                let row = r.count(et, &path, "row", 0, 1);
                let col = r.count(et, &path, "col", 0, 1);
                if row == 0 || col == 0 {
                    r.schema(&path, "row and col are required (1-based)");
                    continue;
                }
                if dir > n || row > m || col > m {
                    r.schema(&path, format!("index out of range for m = {m}, n = {n}"));
                    continue;
                }
                let Some(c) = et.get("coeffs").and_then(poly_from) else {
                    r.schema(
                        &join(&path, "coeffs"),
                        "expected an array of finite numbers",
                    );
                    continue;
                };
                if !coefficients[dir - 1][row - 1][col - 1].is_empty() {
                    r.schema(&path, "duplicate entry");
                }
                coefficients[dir - 1][row - 1][col - 1] = trim(c);
            }
            if r.errors.len() > before {
                return None;
            }
        }
    }
    Some(SystemSpec::Explicit {
        m,
        n,
        horizon,
        coefficients,
    })
}

fn poly_from(v: &Value) -> Option<Vec<f64>> {
    v.as_array()?
        .iter()
        .map(|x| as_f64(x).filter(|y| y.is_finite()))
        .collect()
}

fn read_solver(r: &mut Reader, t: &Table) -> SolverSection {
    r.reject_unknown(
        t,
        "solver",
        &[
            "step",
            "cfl",
            "eps_policy",
            "eps",
            "k",
            "xi",
            "initial",
            "eps_sweep",
            "sweep_xi",
        ],
    );
    let d = SolverSection::default();
    let step = t.get("step").map(|_| r.positive(t, "solver", "step", 1e-3));
    let cfl = r.positive(t, "solver", "cfl", d.cfl);
    let k = r.positive(t, "solver", "k", d.k);
    let eps_policy = match r.string(t, "solver", "eps_policy").unwrap_or("balanced") {
        "balanced" => {
            if t.contains_key("eps") {
                r.schema("solver.eps", "only used with eps_policy = \"fixed\"");
            }
            EpsPolicy::Balanced { k }
        }
        "inverse-bracket" => {
            if t.contains_key("eps") {
                r.schema("solver.eps", "only used with eps_policy = \"fixed\"");
            }
            EpsPolicy::InverseBracket
        }
        "fixed" => {
            let e = r.float(t, "solver", "eps", f64::NAN);
            if !(e > 0.0 && e <= 1.0) {
                r.schema("solver.eps", "fixed policy needs eps in (0, 1]");
            }
            EpsPolicy::Fixed(e)
        }
        other => {
            r.schema(
                "solver.eps_policy",
                format!("unknown policy `{other}`; expected balanced, inverse-bracket or fixed"),
            );
            d.eps_policy
        }
    };
    let xi = r.floats(t, "solver", "xi", d.xi);
    if xi.is_empty() {
        r.schema("solver.xi", "needs at least one frequency");
    }
    let initial = match t.get("initial") {
        None => Vec::new(),
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                match v
                    .as_array()
                    .map(|p| p.iter().map(as_f64).collect::<Vec<_>>())
                {
                    Some(p) if p.len() == 2 && p.iter().all(|x| x.is_some_and(f64::is_finite)) => {
                        Some((p[0].unwrap(), p[1].unwrap()))
                    }
                    _ => {
                        r.schema(&format!("solver.initial[{i}]"), "expected a [re, im] pair");
                        None
                    }
                }
            })
            .collect(),
        Some(_) => {
            r.schema("solver.initial", "expected an array of [re, im] pairs");
            Vec::new()
        }
    };
    let eps_sweep = r.floats(t, "solver", "eps_sweep", d.eps_sweep);
    if eps_sweep.len() < 2 || eps_sweep.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        r.schema("solver.eps_sweep", "needs at least two values in (0, 1]");
    }
    let sweep_xi = r.positive(t, "solver", "sweep_xi", d.sweep_xi);
    SolverSection {
        step,
        cfl,
        eps_policy,
        k,
        xi,
        initial,
        eps_sweep,
        sweep_xi,
    }
}

fn fnum(x: f64) -> String {
    format!("{x:?}")
}

fn flist(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| fnum(x)).collect();
    format!("[{}]", items.join(", "))
}

fn quote(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

/// Canonical TOML with every field spelled out.
pub fn emit_config(c: &RunConfig) -> String {
    let mut out = String::new();
    if let Some(cmd) = c.command {
        out += &format!("command = {}\n\n", quote(cmd.as_str()));
    }
    out += "[system]\n";
    match &c.system {
        SystemSpec::Example(name) => out += &format!("example = {}\n", quote(name)),
        SystemSpec::Explicit {
            m,
            n,
            horizon,
            coefficients,
        } => {
            out += &format!("m = {m}\nn = {n}\nhorizon = {}\n", fnum(*horizon));
            for (d, block) in coefficients.iter().enumerate() {
                for (i, row) in block.iter().enumerate() {
                    for (j, coeffs) in row.iter().enumerate() {
                        if coeffs.is_empty() {
                            continue;
                        }
                        out += &format!(
                            "\n[[system.entry]]\ndir = {}\nrow = {}\ncol = {}\ncoeffs = {}\n",
                            d + 1,
                            i + 1,
                            j + 1,
                            flist(coeffs)
                        );
                    }
                }
            }
        }
    }
    let g = &c.grid;
    out += &format!(
        "\n[grid]\nt_points = {}\nxi_min = {}\nxi_max = {}\nxi_points = {}\ndirections = {}\n",
        g.t_points,
        fnum(g.xi_min),
        fnum(g.xi_max),
        g.xi_points,
        g.directions
    );
    let s = &c.solver;
    out += "\n[solver]\n";
    if let Some(h) = s.step {
        out += &format!("step = {}\n", fnum(h));
    }
    out += &format!("cfl = {}\n", fnum(s.cfl));
    match s.eps_policy {
        EpsPolicy::Balanced { .. } => out += "eps_policy = \"balanced\"\n",
        EpsPolicy::InverseBracket => out += "eps_policy = \"inverse-bracket\"\n",
        EpsPolicy::Fixed(e) => out += &format!("eps_policy = \"fixed\"\neps = {}\n", fnum(e)),
    }
    let init: Vec<String> = s
        .initial
        .iter()
        .map(|(a, b)| format!("[{}, {}]", fnum(*a), fnum(*b)))
        .collect();
    out += &format!(
        "k = {}\nxi = {}\ninitial = [{}]\neps_sweep = {}\nsweep_xi = {}\n",
        fnum(s.k),
        flist(&s.xi),
        init.join(", "),
        flist(&s.eps_sweep),
        fnum(s.sweep_xi)
    );
    let gr = &c.growth;
    out += &format!(
        "\n[growth]\nxi_min = {}\nxi_max = {}\nxi_points = {}\n",
        fnum(gr.xi_min),
        fnum(gr.xi_max),
        gr.xi_points
    );
    let ca = &c.cauchy;
    out += &format!(
        "\n[cauchy]\npoints = {}\nprofile = {}\nsnapshots = {}\n",
        ca.points,
        quote(ca.profile.as_str()),
        flist(&ca.snapshots)
    );
    let q = &c.qs;
    out += &format!(
        "\n[qs]\nsamples = {}\neps = {}\nbig_m = {}\nnear_diagonal_samples = {}\n",
        q.samples,
        flist(&q.eps),
        fnum(q.big_m),
        q.near_diagonal_samples
    );
    out += &format!(
        "\n[output]\ndir = {}\nseed = {}\n",
        quote(&c.output.dir),
        c.output.seed
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GLAESER: &str = r#"
[system]
m = 2
horizon = 1.0

[[system.entry]]
row = 1
col = 2
coeffs = [1]

[[system.entry]]
row = 2
col = 1
coeffs = [0, 0, 1]
"#;

    #[test]
    fn minimal_explicit_config() {
        let c = parse_config(GLAESER).unwrap();
        assert_eq!(c.system.to_symbol().unwrap(), catalog::m2_glaeser());
        assert_eq!(c.grid, GridConfig::default());
        let again = parse_config(&emit_config(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn dense_coefficients() {
        let text = "[system]\nm = 2\ncoefficients = [[[[0], [1]], [[0, 0, 1], [0.0]]]]\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.system.to_symbol().unwrap(), catalog::m2_glaeser());
    }

    #[test]
    fn missing_m_is_named() {
        let errs = parse_config("[system]\nhorizon = 1.0\ncoefficients = []\n").unwrap_err();
        assert!(errs
            .iter()
            .any(|e| e.path == "system.m" && e.kind == ErrorKind::Schema));
    }

    #[test]
    fn m7_is_a_capability_error() {
        let errs = parse_config("[system]\nm = 7\ncoefficients = []\n").unwrap_err();
        assert_eq!(errs[0].kind, ErrorKind::Capability);
    }

    #[test]
    fn syntax_error_has_position() {
        let errs = parse_config("[system]\nexample = \"m2-glaeser\"\n[grid\n").unwrap_err();
        assert_eq!(errs.len(), 1);
        match errs[0].kind {
            ErrorKind::Syntax { line, .. } => assert_eq!(line, 3),
            ref k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn all_errors_are_collected() {
        let text = "bogus = 1\n[system]\nexample = \"m2-glaeser\"\n[grid]\nt_points = \"x\"\nfoo = 2\n[cauchy]\npoints = 1000\n";
        let errs = parse_config(text).unwrap_err();
        let paths: Vec<&str> = errs.iter().map(|e| e.path.as_str()).collect();
        assert!(paths.contains(&"bogus"));
        assert!(paths.contains(&"grid.t_points"));
        assert!(paths.contains(&"grid.foo"));
        assert!(paths.contains(&"cauchy.points"));
    }

    #[test]
    fn round_trip_with_every_section() {
        let mut c = RunConfig::for_example("m3-tracezero");
        c.command = Some(Command::Growth);
        c.solver.step = Some(2.5e-4);
        c.solver.eps_policy = EpsPolicy::Fixed(0.1);
        c.solver.initial = vec![(1.0, -0.5), (0.0, 1e-7), (3.0, 0.0)];
        c.output.seed = 12345;
        c.cauchy.profile = Profile::Bump;
        let again = parse_config(&emit_config(&c)).unwrap();
        assert_eq!(again, c);
    }
}
