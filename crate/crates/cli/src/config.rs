//! Validated configuration: chart, frame, connection and run settings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use parstruct_core::expr::{compile, CompiledExpr, ExprError};
use parstruct_core::frame::idx3;
use parstruct_core::zoo::{RelativeStructure, VectorOperatorField};
use parstruct_core::{Chart, Connection, FormField, FramePair, GeomError, ScalarField, VectorField};

use crate::reader::{self, Document, Pos, Spanned, Table, Value};
use crate::suites::Suite;

#[derive(Debug)]
pub enum ConfigError {
    Io {
        file: String,
        source: std::io::Error,
    },
    Syntax {
        file: String,
        pos: Pos,
        message: String,
    },
    Semantic {
        file: String,
        pos: Option<Pos>,
        message: String,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { file, source } => write!(f, "{file}: {source}"),
            ConfigError::Syntax { file, pos, message } => write!(f, "{file}:{pos}: syntax error: {message}"),
            ConfigError::Semantic {
                file,
                pos: Some(pos),
                message,
            } => write!(f, "{file}:{pos}: {message}"),
            ConfigError::Semantic {
                file,
                pos: None,
                message,
            } => write!(f, "{file}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            ConfigError::Io { .. } => None,
            ConfigError::Syntax { pos, .. } => Some(*pos),
            ConfigError::Semantic { pos, .. } => *pos,
        }
    }
}

/// Second frame and box for the jacobian suite.
#[derive(Clone)]
pub struct Overlap {
    pub chart: Chart,
    pub frame: FramePair,
}

#[derive(Clone)]
pub struct SpecConfig {
    pub name: String,
    pub chart: Chart,
    pub frame: FramePair,
    pub connection: Connection,
    pub relative: bool,
    /// Coefficient entries written in the file, by (σ, μ, ν), 0-based.
    pub coefficients: BTreeMap<(usize, usize, usize), String>,
    pub deformation: Option<VectorOperatorField>,
    pub overlap: Option<Overlap>,
    pub samples: usize,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub expected_asymmetric: bool,
    pub tolerances: BTreeMap<Suite, f64>,
}

impl SpecConfig {
    pub fn tolerance(&self, suite: Suite) -> f64 {
        self.tolerances
            .get(&suite)
            .copied()
            .unwrap_or(suite.default_tolerance())
    }

    /// Parses a point like `"1.0, 0.5"` and checks it against the domain box.
    pub fn point(&self, text: &str) -> Result<Vec<f64>, String> {
        let p: Vec<f64> = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad coordinate '{}'", s.trim()))
            })
            .collect::<Result<_, _>>()?;
        if p.len() != self.chart.dim() {
            return Err(format!("point needs {} coordinates, got {}", self.chart.dim(), p.len()));
        }
        if !self.chart.contains(&p) {
            return Err(format!(
                "point {p:?} lies outside the domain box {:?}",
                self.chart.domain()
            ));
        }
        Ok(p)
    }
}

pub fn load_config(path: &Path) -> Result<SpecConfig, ConfigError> {
    let file = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        file: file.clone(),
        source,
    })?;
    parse_config(&src, &file)
}

pub fn parse_config(src: &str, file: &str) -> Result<SpecConfig, ConfigError> {
    let doc = reader::parse(src).map_err(|e| ConfigError::Syntax {
        file: file.to_string(),
        pos: e.pos,
        message: e.message,
    })?;
    Builder { file, doc: &doc }.build()
}

struct Builder<'a> {
    file: &'a str,
    doc: &'a Document,
}

type Res<T> = Result<T, ConfigError>;

/// Coefficient source text and compiled field, keyed by 0-based `(σ, μ, ν)`.
type Coefficients = BTreeMap<(usize, usize, usize), (String, ScalarField)>;

const TABLES: [(&str, &[&str]); 8] = [
    ("", &["name"]),
    ("chart", &["dim", "coords", "domain"]),
    ("frame", &["vectors", "coframe"]),
    ("connection", &["relative"]),
    ("deformation", &["lambda"]),
    ("overlap", &["domain", "vectors"]),
    ("verify", &["samples", "seed", "suites", "expected_asymmetric"]),
    ("tolerances", &[]),
];

impl Builder<'_> {
    fn err<T>(&self, pos: Option<Pos>, message: impl Into<String>) -> Res<T> {
        Err(ConfigError::Semantic {
            file: self.file.to_string(),
            pos,
            message: message.into(),
        })
    }

    fn table(&self, name: &str) -> Option<&Table> {
        self.doc.table(name)
    }

    fn get(&self, table: &str, key: &str) -> Option<&Spanned> {
        self.table(table).and_then(|t| t.entries.get(key)).map(|(_, v)| v)
    }

    fn check_keys(&self) -> Res<()> {
        for (name, table) in &self.doc.tables {
            let Some((_, known)) = TABLES.iter().find(|(t, _)| t == name) else {
                return self.err(table.pos, format!("unknown table [{name}]"));
            };
            for (key, (pos, _)) in &table.entries {
                let ok = known.contains(&key.as_str())
                    || (name == "connection" && key.starts_with("G^"))
                    || name == "tolerances";
                if !ok {
                    let place = if name.is_empty() {
                        "top level".to_string()
                    } else {
                        format!("[{name}]")
                    };
                    return self.err(Some(*pos), format!("unknown key '{key}' in {place}"));
                }
            }
        }
        Ok(())
    }

    fn string<'v>(&self, v: &'v Spanned, what: &str) -> Res<&'v str> {
        match &v.value {
            Value::String(s) => Ok(s),
            other => self.err(
                Some(v.pos),
                format!("{what} must be a string, found {}", other.type_name()),
            ),
        }
    }

    fn number(&self, v: &Spanned, what: &str) -> Res<f64> {
        match v.value {
            Value::Integer(i) => Ok(i as f64),
            Value::Float(x) => Ok(x),
            ref other => self.err(
                Some(v.pos),
                format!("{what} must be a number, found {}", other.type_name()),
            ),
        }
    }

    fn array<'v>(&self, v: &'v Spanned, what: &str) -> Res<&'v [Spanned]> {
        match &v.value {
            Value::Array(items) => Ok(items),
            other => self.err(
                Some(v.pos),
                format!("{what} must be an array, found {}", other.type_name()),
            ),
        }
    }

    fn bool(&self, v: &Spanned, what: &str) -> Res<bool> {
        match v.value {
            Value::Bool(b) => Ok(b),
            ref other => self.err(
                Some(v.pos),
                format!("{what} must be a boolean, found {}", other.type_name()),
            ),
        }
    }

    fn geom<T>(&self, pos: Option<Pos>, r: parstruct_core::Result<T>) -> Res<T> {
        r.or_else(|e| self.err(pos, e.to_string()))
    }

    /// Compiles an expression entry; numbers are accepted as constants.
    fn expr(&self, v: &Spanned, names: &[String], label: &str) -> Res<ScalarField> {
        let src = match &v.value {
            Value::String(s) => s.clone(),
            Value::Integer(i) => i.to_string(),
            Value::Float(x) => format!("{x:?}"),
            other => {
                return self.err(
                    Some(v.pos),
                    format!("{label} must be an expression string, found {}", other.type_name()),
                )
            }
        };
        let compiled = compile(&src, names).or_else(|e| {
            let pos = match e.offset() {
                Some(off) => Pos {
                    line: v.pos.line,
                    col: v.pos.col + 1 + src[..off.min(src.len())].chars().count(),
                },
                None => v.pos,
            };
            self.err(Some(pos), format!("in {label} = \"{src}\": {e}"))
        })?;
        Ok(labelled(compiled, format!("{label} = \"{src}\"")))
    }

    fn box_(&self, v: &Spanned, dim: Option<usize>, what: &str) -> Res<Vec<(f64, f64)>> {
        let rows = self.array(v, what)?;
        if let Some(n) = dim {
            if rows.len() != n {
                return self.err(Some(v.pos), format!("{what} needs {n} intervals, got {}", rows.len()));
            }
        }
        rows.iter()
            .map(|r| {
                let pair = self.array(r, "a domain interval")?;
                if pair.len() != 2 {
                    return self.err(Some(r.pos), "a domain interval is [lo, hi]");
                }
                let (lo, hi) = (self.number(&pair[0], "lo")?, self.number(&pair[1], "hi")?);
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return self.err(Some(r.pos), format!("empty or unbounded interval [{lo}, {hi}]"));
                }
                Ok((lo, hi))
            })
            .collect()
    }

    fn matrix(&self, v: &Spanned, names: &[String], what: &str) -> Res<Vec<Vec<ScalarField>>> {
        let n = names.len();
        let rows = self.array(v, what)?;
        if rows.len() != n {
            return self.err(Some(v.pos), format!("{what} must be {n}×{n}, got {} rows", rows.len()));
        }
        rows.iter()
            .enumerate()
            .map(|(i, r)| {
                let row = self.array(r, what)?;
                if row.len() != n {
                    return self.err(
                        Some(r.pos),
                        format!("{what} must be {n}×{n}, row {} has {} entries", i + 1, row.len()),
                    );
                }
                row.iter()
                    .enumerate()
                    .map(|(j, e)| self.expr(e, names, &format!("{what}[{}][{}]", i + 1, j + 1)))
                    .collect()
            })
            .collect()
    }

    fn chart(&self) -> Res<Chart> {
        let Some(table) = self.table("chart") else {
            return self.err(None, "missing [chart] table");
        };
        let Some(coords) = self.get("chart", "coords") else {
            return self.err(table.pos, "[chart] needs coords");
        };
        let names: Vec<String> = self
            .array(coords, "coords")?
            .iter()
            .map(|c| {
                let s = self.string(c, "a coordinate name")?;
                let valid = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !valid || parstruct_core::expr::Func::from_name(s).is_some() {
                    return self.err(Some(c.pos), format!("'{s}' is not usable as a coordinate name"));
                }
                Ok(s.to_string())
            })
            .collect::<Res<_>>()?;
        if let Some(d) = self.get("chart", "dim") {
            match d.value {
                Value::Integer(k) if k as usize == names.len() && k > 0 => {}
                Value::Integer(k) => {
                    return self.err(
                        Some(d.pos),
                        format!("dim = {k} but {} coordinates are named", names.len()),
                    )
                }
                _ => return self.err(Some(d.pos), "dim must be an integer"),
            }
        }
        let Some(domain) = self.get("chart", "domain") else {
            return self.err(table.pos, "[chart] needs domain");
        };
        let domain = self.box_(domain, Some(names.len()), "domain")?;
        self.geom(Some(coords.pos), Chart::new(names, domain))
    }

    fn frame(&self, chart: &Chart) -> Res<FramePair> {
        let Some(table) = self.table("frame") else {
            return Ok(FramePair::coordinate(chart.dim()));
        };
        let Some(v) = self.get("frame", "vectors") else {
            return self.err(table.pos, "[frame] needs vectors");
        };
        let b = vectors(self.matrix(v, chart.names(), "vectors")?);
        let frame = match self.get("frame", "coframe") {
            None => FramePair::from_vectors(chart, b),
            Some(c) => {
                let beta = self
                    .matrix(c, chart.names(), "coframe")?
                    .into_iter()
                    .map(FormField::from_components)
                    .collect();
                FramePair::from_pair(chart, b, beta)
            }
        };
        self.geom(Some(v.pos), frame)
    }

    fn coefficients(&self, chart: &Chart) -> Res<Coefficients> {
        let n = chart.dim();
        let mut out = BTreeMap::new();
        let Some(table) = self.table("connection") else {
            return Ok(out);
        };
        for (key, (pos, v)) in table.entries.iter().filter(|(k, _)| k.starts_with("G^")) {
            let (s, m, nu) = match parse_index_key(key) {
                Some(idx) => idx,
                None => {
                    return self.err(
                        Some(*pos),
                        format!("malformed coefficient key '{key}'; expected G^s_mn"),
                    )
                }
            };
            if let Some(bad) = [s, m, nu].into_iter().find(|i| *i == 0 || *i > n) {
                return self.err(
                    Some(*pos),
                    format!("index {bad} in '{key}' is out of range 1..{n} for a {n}-dimensional chart"),
                );
            }
            let field = self.expr(v, chart.names(), key)?;
            if let Some(e) = chart.validation_points().iter().find_map(|p| field.at(p).err()) {
                return self.err(Some(v.pos), e.to_string());
            }
            let src = match &v.value {
                Value::String(s) => s.clone(),
                other => format!("{other:?}"),
            };
            out.insert((s - 1, m - 1, nu - 1), (src, field));
        }
        Ok(out)
    }

    fn overlap(&self, chart: &Chart) -> Res<Option<Overlap>> {
        if self.table("overlap").is_none() {
            return Ok(None);
        }
        let sub = match self.get("overlap", "domain") {
            Some(d) => {
                let b = self.box_(d, Some(chart.dim()), "overlap domain")?;
                let inside = b
                    .iter()
                    .zip(chart.domain())
                    .all(|((lo, hi), (clo, chi))| lo >= clo && hi <= chi);
                if !inside {
                    return self.err(Some(d.pos), "overlap domain must lie inside the chart domain");
                }
                self.geom(Some(d.pos), chart.restrict(b))?
            }
            None => chart.clone(),
        };
        let frame = match self.get("overlap", "vectors") {
            Some(v) => {
                let b = vectors(self.matrix(v, chart.names(), "overlap vectors")?);
                self.geom(Some(v.pos), FramePair::from_vectors(&sub, b))?
            }
            None => FramePair::coordinate(chart.dim()),
        };
        Ok(Some(Overlap { chart: sub, frame }))
    }

    fn suites(&self) -> Res<Vec<Suite>> {
        let Some(v) = self.get("verify", "suites") else {
            return Ok(Suite::ALL.to_vec());
        };
        let names: Vec<&Spanned> = match &v.value {
            Value::String(_) => vec![v],
            Value::Array(items) => items.iter().collect(),
            other => {
                return self.err(
                    Some(v.pos),
                    format!("suites must be a list, found {}", other.type_name()),
                )
            }
        };
        let mut out = Vec::new();
        for item in names {
            let s = self.string(item, "a suite name")?;
            if s == "all" {
                return Ok(Suite::ALL.to_vec());
            }
            match Suite::from_name(s) {
                Some(suite) if !out.contains(&suite) => out.push(suite),
                Some(_) => {}
                None => return self.err(Some(item.pos), format!("unknown suite '{s}'")),
            }
        }
        Ok(out)
    }

    fn build(&self) -> Res<SpecConfig> {
        self.check_keys()?;
        let name = match self.get("", "name") {
            Some(v) => self.string(v, "name")?.to_string(),
            None => String::new(),
        };
        let chart = self.chart()?;
        let frame = self.frame(&chart)?;
        let n = chart.dim();

        let relative = match self.get("connection", "relative") {
            Some(v) => self.bool(v, "relative")?,
            None => false,
        };
        let coefs = self.coefficients(&chart)?;
        if relative && !coefs.is_empty() {
            let pos = self.table("connection").and_then(|t| t.pos);
            return self.err(
                pos,
                "relative = true induces the connection from the frame; remove the G^s_mn entries",
            );
        }
        let connection = if relative {
            RelativeStructure::new(frame.clone()).connection().clone()
        } else {
            let mut fields: Vec<ScalarField> = (0..n * n * n).map(|_| ScalarField::constant(0.0)).collect();
            for (&(s, m, nu), (_, f)) in &coefs {
                fields[idx3(n, s, m, nu)] = f.clone();
            }
            self.geom(None, Connection::from_fields(frame.clone(), fields))?
        };

        let deformation = match self.get("deformation", "lambda") {
            Some(v) => {
                let op = self.geom(
                    Some(v.pos),
                    VectorOperatorField::from_fields(self.matrix(v, chart.names(), "lambda")?),
                )?;
                self.geom(Some(v.pos), op.validate_invertible(&chart))?;
                Some(op)
            }
            None => None,
        };
        let overlap = self.overlap(&chart)?;

        let samples = match self.get("verify", "samples") {
            Some(v) => match v.value {
                Value::Integer(k) if (1..=1_000_000).contains(&k) => k as usize,
                _ => return self.err(Some(v.pos), "samples must be an integer in 1..=1000000"),
            },
            None => 100,
        };
        let seed = match self.get("verify", "seed") {
            Some(v) => match v.value {
                Value::Integer(k) if k >= 0 => k as u64,
                _ => return self.err(Some(v.pos), "seed must be a non-negative integer"),
            },
            None => 0,
        };
        let expected_asymmetric = match self.get("verify", "expected_asymmetric") {
            Some(v) => self.bool(v, "expected_asymmetric")?,
            None => false,
        };
        let mut tolerances = BTreeMap::new();
        if let Some(t) = self.table("tolerances") {
            for (key, (pos, v)) in &t.entries {
                let Some(suite) = Suite::from_name(key) else {
                    return self.err(Some(*pos), format!("unknown suite '{key}' in [tolerances]"));
                };
                let tol = self.number(v, "a tolerance")?;
                if !(tol.is_finite() && tol > 0.0) {
                    return self.err(Some(v.pos), "a tolerance must be positive");
                }
                tolerances.insert(suite, tol);
            }
        }

        Ok(SpecConfig {
            name,
            chart,
            frame,
            connection,
            relative,
            coefficients: coefs.into_iter().map(|(k, (src, _))| (k, src)).collect(),
            deformation,
            overlap,
            samples,
            seed,
            suites: self.suites()?,
            expected_asymmetric,
            tolerances,
        })
    }
}

fn vectors(rows: Vec<Vec<ScalarField>>) -> Vec<VectorField> {
    rows.into_iter().map(VectorField::from_components).collect()
}

/// Expression field whose evaluation errors name the config entry.
fn labelled(expr: CompiledExpr, label: String) -> ScalarField {
    ScalarField::new(move |x| {
        expr.eval(x).map_err(|e: ExprError| GeomError::Eval {
            message: format!("{label}: {e}"),
            point: Vec::new(),
        })
    })
}

/// `G^s_mn` with single digits, or `G^s_m,n`.
fn parse_index_key(key: &str) -> Option<(usize, usize, usize)> {
    let rest = key.strip_prefix("G^")?;
    let (s, lower) = rest.split_once('_')?;
    let s = s.parse().ok()?;
    let (m, n) = match lower.split_once(',') {
        Some((m, n)) => (m.parse().ok()?, n.parse().ok()?),
        None if lower.len() == 2 && lower.bytes().all(|b| b.is_ascii_digit()) => {
            let b = lower.as_bytes();
            (usize::from(b[0] - b'0'), usize::from(b[1] - b'0'))
        }
        None => return None,
    };
    Some((s, m, n))
}
