//! Job configuration: TOML in, validated [`JobConfig`] out.

use std::fmt;
use std::path::{Path, PathBuf};

use blocklie::block::BlockParams;
use blocklie::highest_weight::{labels_from_quasipolynomial, qp_annihilator, QuasiPolynomial, Weight};
use blocklie::intermediate::IntermediateKind;
use blocklie::lie::{Element, Window};
use blocklie::scalar::{parse_rational, Poly, Rational, SymbolTable};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("missing field `{field}` required by job `{job}`")]
    Missing { field: &'static str, job: JobKind },
    #[error("field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error(transparent)]
    Semantic(#[from] blocklie::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobKind {
    Axioms,
    Affinize,
    Blockcheck,
    Classify,
    Singular,
    Crosscheck,
    Closure,
    Modcheck,
}

impl JobKind {
    pub fn name(self) -> &'static str {
        match self {
            JobKind::Axioms => "axioms",
            JobKind::Affinize => "affinize",
            JobKind::Blockcheck => "blockcheck",
            JobKind::Classify => "classify",
            JobKind::Singular => "singular",
            JobKind::Crosscheck => "crosscheck",
            JobKind::Closure => "closure",
            JobKind::Modcheck => "modcheck",
        }
    }
}

impl fmt::Display for JobKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A number written as an integer or as a string such as `"-3/4"`; the
/// string form may also be a polynomial in declared symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Text(String);

impl<'de> Deserialize<'de> for Text {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Text;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string such as \"3/2\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }
            fn visit_f64<E: de::Error>(self, _: f64) -> Result<Text, E> {
                Err(E::custom("floats are not exact; write the rational as a string such as \"3/2\""))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    grade_min: i64,
    grade_max: i64,
    level_max: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    size: Option<usize>,
    start: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQpTerm {
    poly: Vec<Text>,
    base: Text,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeight {
    labels: Option<Vec<Text>>,
    qp: Option<Vec<RawQpTerm>>,
    central: Option<Text>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum RawModuleKind {
    Aab,
    Aa,
    Ba,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    kind: RawModuleKind,
    a: Option<Text>,
    b: Option<Text>,
    weights: Option<[i64; 2]>,
    central: Option<Text>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Novikov,
    Lie,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    job: JobKind,
    seed: Option<u64>,
    output: Option<PathBuf>,
    symbols: Option<Vec<String>>,
    p: Option<Text>,
    q: Option<Text>,
    mu: Option<Text>,
    theta: Option<i64>,
    s: Option<Text>,
    structure: Option<Structure>,
    mutations: Option<usize>,
    grid: Option<RawGrid>,
    window: Option<RawWindow>,
    horizon: Option<usize>,
    degree: Option<usize>,
    conditions: Option<usize>,
    weight: Option<RawWeight>,
    generators: Option<Vec<String>>,
    members: Option<Vec<String>>,
    module: Option<RawModule>,
}

/// Consecutive integers `start, start+1, ...` used for every grid symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub start: i64,
    pub size: usize,
}

impl GridSpec {
    pub fn grid(&self) -> blocklie::lie::Grid {
        blocklie::lie::Grid::integers(self.start, self.size)
    }

    fn echo(&self) -> Value {
        json!({ "start": self.start, "size": self.size })
    }
}

#[derive(Debug, Clone)]
pub struct WeightSpec {
    pub weight: Weight,
    /// Generating quasipolynomial when the weight was given that way.
    pub qp: Option<QuasiPolynomial>,
    pub singular_indices: Vec<usize>,
    echo: Value,
}

#[derive(Debug, Clone)]
pub enum JobSpec {
    Axioms {
        structure: Structure,
        p: Poly,
        q: Option<Poly>,
        mu: Poly,
        theta: i64,
        grid: GridSpec,
    },
    Affinize {
        p: Poly,
        q: Poly,
        mu: Poly,
        theta: i64,
        grid: GridSpec,
        mutations: usize,
        seed: Option<u64>,
        s: Option<Rational>,
        window: Window,
    },
    Blockcheck {
        params: BlockParams,
        grid: GridSpec,
        window: Window,
    },
    Classify {
        params: BlockParams,
        weight: WeightSpec,
        horizon: usize,
    },
    Singular {
        params: BlockParams,
        weight: WeightSpec,
        degree: usize,
        conditions: usize,
    },
    Crosscheck {
        params: BlockParams,
        weight: WeightSpec,
        degree: usize,
        conditions: usize,
    },
    Closure {
        params: BlockParams,
        generators: Vec<Element>,
        members: Vec<Element>,
        window: Window,
    },
    Modcheck {
        params: BlockParams,
        kind: IntermediateKind,
        weights: (i64, i64),
        central: Rational,
        window: Window,
    },
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub kind: JobKind,
    pub output: Option<PathBuf>,
    pub spec: JobSpec,
    echo: Value,
}

impl JobConfig {
    /// Every resolved setting, defaults included, in a fixed order.
    pub fn echo(&self) -> &Value {
        &self.echo
    }
}

pub fn load_config(path: &Path, seed_override: Option<u64>) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, seed_override)
}

pub fn parse_config(text: &str, seed_override: Option<u64>) -> Result<JobConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    Resolver::new(raw, seed_override)?.resolve()
}

struct Resolver {
    raw: RawConfig,
    table: std::sync::Arc<SymbolTable>,
    seed: Option<u64>,
}

fn rational(field: &'static str, t: &Text) -> Result<Rational, ConfigError> {
    parse_rational(&t.0).map_err(|e| ConfigError::Invalid {
        field,
        reason: e.to_string(),
    })
}

fn rationals(field: &'static str, ts: &[Text]) -> Result<Vec<Rational>, ConfigError> {
    ts.iter().map(|t| rational(field, t)).collect()
}

fn strings<T: fmt::Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn window_echo(w: &Window) -> Value {
    json!({ "grade_min": w.grade_min, "grade_max": w.grade_max, "level_max": w.level_max })
}

impl Resolver {
    fn new(raw: RawConfig, seed_override: Option<u64>) -> Result<Self, ConfigError> {
        let names = raw.symbols.clone().unwrap_or_default();
        let table = SymbolTable::new(&names).map_err(|e| ConfigError::Invalid {
            field: "symbols",
            reason: e.to_string(),
        })?;
        let seed = seed_override.or(raw.seed);
        Ok(Resolver { raw, table, seed })
    }

    fn job(&self) -> JobKind {
        self.raw.job
    }

    fn scalar(&self, field: &'static str, t: &Text) -> Result<Poly, ConfigError> {
        Poly::parse(&t.0, &self.table).map_err(|e| ConfigError::Invalid {
            field,
            reason: e.to_string(),
        })
    }

    fn required(&self, field: &'static str, t: &Option<Text>) -> Result<Poly, ConfigError> {
        match t {
            Some(t) => self.scalar(field, t),
            None => Err(ConfigError::Missing { field, job: self.job() }),
        }
    }

    fn optional(&self, field: &'static str, t: &Option<Text>) -> Result<Poly, ConfigError> {
        match t {
            Some(t) => self.scalar(field, t),
            None => Ok(Poly::zero()),
        }
    }

    fn params(&self) -> Result<BlockParams, ConfigError> {
        let p = self.required("p", &self.raw.p)?;
        let q = self.required("q", &self.raw.q)?;
        Ok(BlockParams::new(p, q)?)
    }

    fn window(&self, default: (i64, i64, i64)) -> Result<Window, ConfigError> {
        let (lo, hi, lv) = match &self.raw.window {
            Some(w) => (w.grade_min, w.grade_max, w.level_max),
            None => default,
        };
        Ok(Window::new(lo, hi, lv)?)
    }

    /// Defaults to `size` values centered at 0.
    fn grid(&self, default_size: usize) -> GridSpec {
        let size = self.raw.grid.as_ref().and_then(|g| g.size).unwrap_or(default_size);
        let start = self
            .raw
            .grid
            .as_ref()
            .and_then(|g| g.start)
            .unwrap_or(-((size as i64 - 1) / 2));
        GridSpec { start, size }
    }

    fn weight(&self, params: &BlockParams, horizon_hint: Option<usize>) -> Result<(WeightSpec, usize), ConfigError> {
        let raw = self.raw.weight.as_ref().ok_or(ConfigError::Missing {
            field: "weight",
            job: self.job(),
        })?;
        let central = match &raw.central {
            Some(c) => rational("weight.central", c)?,
            None => Rational::from_integer(0.into()),
        };
        match (&raw.labels, &raw.qp) {
            (Some(labels), None) => {
                let labels = rationals("weight.labels", labels)?;
                if labels.is_empty() {
                    return Err(ConfigError::Invalid {
                        field: "weight.labels",
                        reason: "at least one label is required".into(),
                    });
                }
                let horizon = horizon_hint.unwrap_or(labels.len() - 1);
                let echo = json!({ "labels": strings(&labels), "central": central.to_string() });
                let weight = Weight::explicit(labels).with_central_label(central);
                Ok((
                    WeightSpec {
                        weight,
                        qp: None,
                        singular_indices: Vec::new(),
                        echo,
                    },
                    horizon,
                ))
            }
            (None, Some(terms)) => {
                let mut parsed = Vec::with_capacity(terms.len());
                let mut echo_terms = Vec::new();
                for t in terms {
                    let poly = rationals("weight.qp.poly", &t.poly)?;
                    let base = rational("weight.qp.base", &t.base)?;
                    echo_terms.push(json!({ "poly": strings(&poly), "base": base.to_string() }));
                    parsed.push((poly, base));
                }
                let qp = QuasiPolynomial::new(parsed);
                let horizon = match horizon_hint {
                    Some(k) => k,
                    None if qp.is_zero() => 4,
                    None => 2 * qp_annihilator(&qp)?.degree() + 4,
                };
                let (weight, singular_indices) = labels_from_quasipolynomial(&qp, params, horizon)?;
                let echo = json!({ "qp": echo_terms, "central": central.to_string() });
                Ok((
                    WeightSpec {
                        weight: weight.with_central_label(central),
                        qp: Some(qp),
                        singular_indices,
                        echo,
                    },
                    horizon,
                ))
            }
            (Some(_), Some(_)) => Err(ConfigError::Invalid {
                field: "weight",
                reason: "give either `labels` or `qp`, not both".into(),
            }),
            (None, None) => Err(ConfigError::Missing {
                field: "weight.labels",
                job: self.job(),
            }),
        }
    }

    fn elements(&self, field: &'static str, xs: &[String]) -> Result<Vec<Element>, ConfigError> {
        xs.iter()
            .map(|x| {
                Element::parse(x).map_err(|e| ConfigError::Invalid {
                    field,
                    reason: e.to_string(),
                })
            })
            .collect()
    }

    fn resolve(self) -> Result<JobConfig, ConfigError> {
        let kind = self.job();
        let r = &self.raw;
        let mut echo = serde_json::Map::new();
        echo.insert("job".into(), json!(kind.name()));
        echo.insert("symbols".into(), strings(self.table.symbols()));
        let spec = match kind {
            JobKind::Axioms => {
                let structure = r.structure.unwrap_or(Structure::Novikov);
                let p = self.required("p", &r.p)?;
                let q = match structure {
                    Structure::Lie => {
                        let q = self.required("q", &r.q)?;
                        if q.is_zero() {
                            return Err(blocklie::Error::ZeroQ.into());
                        }
                        Some(q)
                    }
                    Structure::Novikov => None,
                };
                let mu = self.optional("mu", &r.mu)?;
                let theta = r.theta.unwrap_or(0);
                let grid = self.grid(3);
                echo.insert("structure".into(), json!(match structure {
                    Structure::Novikov => "novikov",
                    Structure::Lie => "lie",
                }));
                echo.insert("p".into(), json!(p.to_string()));
                echo.insert("q".into(), q.as_ref().map_or(Value::Null, |q| json!(q.to_string())));
                echo.insert("mu".into(), json!(mu.to_string()));
                echo.insert("theta".into(), json!(theta));
                echo.insert("grid".into(), grid.echo());
                JobSpec::Axioms {
                    structure,
                    p,
                    q,
                    mu,
                    theta,
                    grid,
                }
            }
            JobKind::Affinize => {
                let p = self.required("p", &r.p)?;
                let q = self.required("q", &r.q)?;
                let mu = self.optional("mu", &r.mu)?;
                let theta = r.theta.unwrap_or(0);
                let grid = self.grid(3);
                let mutations = r.mutations.unwrap_or(0);
                if mutations > 0 && self.seed.is_none() {
                    return Err(ConfigError::Missing { field: "seed", job: kind });
                }
                let s = r.s.as_ref().map(|s| rational("s", s)).transpose()?;
                let window = self.window((-3, 3, 3))?;
                echo.insert("p".into(), json!(p.to_string()));
                echo.insert("q".into(), json!(q.to_string()));
                echo.insert("mu".into(), json!(mu.to_string()));
                echo.insert("theta".into(), json!(theta));
                echo.insert("grid".into(), grid.echo());
                echo.insert("mutations".into(), json!(mutations));
                echo.insert("seed".into(), self.seed.map_or(Value::Null, |s| json!(s)));
                echo.insert("s".into(), s.as_ref().map_or(Value::Null, |s| json!(s.to_string())));
                echo.insert("window".into(), window_echo(&window));
                JobSpec::Affinize {
                    p,
                    q,
                    mu,
                    theta,
                    grid,
                    mutations,
                    seed: self.seed,
                    s,
                    window,
                }
            }
            JobKind::Blockcheck => {
                let params = self.params()?;
                let grid = self.grid(5);
                let window = self.window((-4, 4, 3))?;
                self.echo_params(&mut echo, &params);
                echo.insert("grid".into(), grid.echo());
                echo.insert("window".into(), window_echo(&window));
                JobSpec::Blockcheck { params, grid, window }
            }
            JobKind::Classify => {
                let params = self.params()?;
                let (weight, horizon) = self.weight(&params, r.horizon)?;
                self.echo_params(&mut echo, &params);
                echo.insert("weight".into(), weight.echo.clone());
                echo.insert("horizon".into(), json!(horizon));
                JobSpec::Classify { params, weight, horizon }
            }
            JobKind::Singular | JobKind::Crosscheck => {
                let params = self.params()?;
                let degree = r.degree.unwrap_or(1);
                let conditions = r.conditions.unwrap_or(6);
                let (weight, _) = self.weight(&params, Some(degree + conditions))?;
                self.echo_params(&mut echo, &params);
                echo.insert("weight".into(), weight.echo.clone());
                echo.insert("degree".into(), json!(degree));
                echo.insert("conditions".into(), json!(conditions));
                if kind == JobKind::Singular {
                    JobSpec::Singular {
                        params,
                        weight,
                        degree,
                        conditions,
                    }
                } else {
                    JobSpec::Crosscheck {
                        params,
                        weight,
                        degree,
                        conditions,
                    }
                }
            }
            JobKind::Closure => {
                let params = self.params()?;
                let gens = r.generators.as_ref().ok_or(ConfigError::Missing {
                    field: "generators",
                    job: kind,
                })?;
                let generators = self.elements("generators", gens)?;
                let members = self.elements("members", r.members.as_deref().unwrap_or(&[]))?;
                let window = self.window((-3, 3, 2))?;
                self.echo_params(&mut echo, &params);
                echo.insert("generators".into(), strings(&generators));
                echo.insert("members".into(), strings(&members));
                echo.insert("window".into(), window_echo(&window));
                JobSpec::Closure {
                    params,
                    generators,
                    members,
                    window,
                }
            }
            JobKind::Modcheck => {
                let params = self.params()?;
                let m = r.module.as_ref().ok_or(ConfigError::Missing { field: "module", job: kind })?;
                let need = |field: &'static str, t: &Option<Text>| match t {
                    Some(t) => rational(field, t),
                    None => Err(ConfigError::Missing { field, job: kind }),
                };
                let kind_v = match m.kind {
                    RawModuleKind::Aab => IntermediateKind::Aab {
                        a: need("module.a", &m.a)?,
                        b: need("module.b", &m.b)?,
                    },
                    RawModuleKind::Aa => IntermediateKind::Aa { a: need("module.a", &m.a)? },
                    RawModuleKind::Ba => IntermediateKind::Ba { a: need("module.a", &m.a)? },
                };
                let weights = m.weights.map_or((-6, 6), |[lo, hi]| (lo, hi));
                if weights.0 > weights.1 {
                    return Err(ConfigError::Invalid {
                        field: "module.weights",
                        reason: format!("empty range [{}, {}]", weights.0, weights.1),
                    });
                }
                let central = match &m.central {
                    Some(c) => rational("module.central", c)?,
                    None => Rational::from_integer(0.into()),
                };
                let window = self.window((-3, 3, 2))?;
                self.echo_params(&mut echo, &params);
                let (a, b) = match &kind_v {
                    IntermediateKind::Aab { a, b } => (a.to_string(), Value::String(b.to_string())),
                    IntermediateKind::Aa { a } | IntermediateKind::Ba { a } => (a.to_string(), Value::Null),
                };
                echo.insert(
                    "module".into(),
                    json!({
                        "kind": kind_v.name(),
                        "a": a,
                        "b": b,
                        "weights": [weights.0, weights.1],
                        "central": central.to_string(),
                    }),
                );
                echo.insert("window".into(), window_echo(&window));
                JobSpec::Modcheck {
                    params,
                    kind: kind_v,
                    weights,
                    central,
                    window,
                }
            }
        };
        let output = r.output.clone();
        echo.insert(
            "output".into(),
            output.as_ref().map_or(Value::Null, |o| json!(o.display().to_string())),
        );
        Ok(JobConfig {
            kind,
            output,
            spec,
            echo: Value::Object(echo),
        })
    }

    fn echo_params(&self, echo: &mut serde_json::Map<String, Value>, params: &BlockParams) {
        echo.insert("p".into(), json!(params.p.to_string()));
        echo.insert("q".into(), json!(params.q.to_string()));
    }
}
