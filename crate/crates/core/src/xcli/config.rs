//! Experiment configuration: schema, parsing from TOML or JSON, and
//! validation with issue lists.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::group::Group;
use crate::sdq::admissible_m;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Axioms,
    HolonomyRefine,
    GaugeCheck,
    GlueCheck,
    ProductCheck,
    MeasureConsistency,
    Density,
    DiracSweep,
    NormContinuity,
    EmbedSmear,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Axioms,
        Experiment::HolonomyRefine,
        Experiment::GaugeCheck,
        Experiment::GlueCheck,
        Experiment::ProductCheck,
        Experiment::MeasureConsistency,
        Experiment::Density,
        Experiment::DiracSweep,
        Experiment::NormContinuity,
        Experiment::EmbedSmear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Axioms => "axioms",
            Experiment::HolonomyRefine => "holonomy-refine",
            Experiment::GaugeCheck => "gauge-check",
            Experiment::GlueCheck => "glue-check",
            Experiment::ProductCheck => "product-check",
            Experiment::MeasureConsistency => "measure-consistency",
            Experiment::Density => "density",
            Experiment::DiracSweep => "dirac-sweep",
            Experiment::NormContinuity => "norm-continuity",
            Experiment::EmbedSmear => "embed-smear",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::Axioms => "groupoid laws on random composable triples of all four groupoids",
            Experiment::HolonomyRefine => "midpoint-rule convergence and refinement composition of holonomies",
            Experiment::GaugeCheck => "gauge compatibility of q-connections and gauge invariance of kernel traces",
            Experiment::GlueCheck => "gluing law of exact-holonomy q-connections over an hbar sweep",
            Experiment::ProductCheck => "hbar-derivative of a product family against the sum connection",
            Experiment::MeasureConsistency => "Haar integrals of cylinder functions against their pullbacks",
            Experiment::Density => "random holonomy targets realized by smooth connections",
            Experiment::DiracSweep => "Dirac-condition defect of quantized symbol pairs",
            Experiment::NormContinuity => "operator norms of quantized symbols against their sup norms",
            Experiment::EmbedSmear => "smeared q-connection graphs: normalization and gauge equivariance",
        }
    }

    /// Keys that must be present besides `experiment`.
    pub fn required(self) -> &'static [&'static str] {
        match self {
            Experiment::Axioms => &["samples"],
            Experiment::HolonomyRefine => &["group", "dimension", "band", "samples"],
            Experiment::GaugeCheck => &["group", "dimension", "band", "samples"],
            Experiment::GlueCheck => &["group", "dimension", "band", "hbars", "samples"],
            Experiment::ProductCheck => &["group", "dimension", "band", "samples"],
            Experiment::MeasureConsistency => &["samples"],
            Experiment::Density => &["group", "dimension", "samples"],
            Experiment::DiracSweep => &["dimension", "grid", "hbars"],
            Experiment::NormContinuity => &["dimension", "grid", "hbars"],
            Experiment::EmbedSmear => &["dimension", "grid", "band", "hbars"],
        }
    }

    /// Whether the hbar values are quantization parameters on the grid.
    pub fn quantizes(self) -> bool {
        matches!(self, Experiment::DiracSweep | Experiment::NormContinuity)
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::ConfigInvalid(format!(
                    "unknown experiment {s:?}; did you mean one of: {}",
                    suggestions(s).join(", ")
                ))
            })
    }
}

/// Known experiment names ordered by edit distance to `s`.
pub fn suggestions(s: &str) -> Vec<&'static str> {
    let mut names: Vec<(usize, &'static str)> = Experiment::ALL
        .iter()
        .map(|e| (strsim::levenshtein(s, e.name()), e.name()))
        .collect();
    names.sort();
    let close: Vec<&'static str> = names.iter().filter(|(d, _)| *d <= 4).map(|(_, n)| *n).collect();
    if close.is_empty() {
        names.into_iter().map(|(_, n)| n).collect()
    } else {
        close
    }
}

/// Every key the schema knows.
pub const KNOWN_KEYS: [&str; 13] = [
    "experiment",
    "group",
    "dimension",
    "grid",
    "band",
    "hbars",
    "samples",
    "seed",
    "output_dir",
    "level",
    "group_grid",
    "width",
    "amplitude",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub group: Option<Group>,
    pub dimension: Option<usize>,
    pub grid: Option<usize>,
    pub band: Option<usize>,
    pub hbars: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    /// Refinement level for the density experiment.
    pub level: Option<usize>,
    /// Points on the circle-group grid for smearing.
    pub group_grid: Option<usize>,
    /// Mollifier width for smearing.
    pub width: Option<f64>,
    /// Amplitude of random connections.
    pub amplitude: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    UnknownKey,
    MissingKey,
    InvalidValue,
    InadmissibleHbar,
    UnknownExperiment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn issue(kind: IssueKind, field: &str, message: impl Into<String>) -> Issue {
    Issue {
        kind,
        field: field.to_string(),
        message: message.into(),
    }
}

/// Parse the file as JSON when its extension is `.json` and as TOML otherwise.
pub fn read_value(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::FileUnreadable {
        path: path.display().to_string(),
        source,
    })?;
    parse_value(&text, path.extension().is_some_and(|e| e == "json"))
}

pub fn parse_value(text: &str, json: bool) -> Result<Value> {
    if json {
        serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(format!("malformed JSON: {e}")))
    } else {
        let t: toml::Table = toml::from_str(text).map_err(|e| Error::ConfigInvalid(format!("malformed TOML: {e}")))?;
        Ok(serde_json::to_value(t)?)
    }
}

/// `0.125`, `"1/8"` or `"0.125"`.
fn parse_hbar(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.split_once('/') {
            Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
            None => s.trim().parse().ok(),
        },
        _ => None,
    }
}

fn count(obj: &Map<String, Value>, key: &str, issues: &mut Vec<Issue>) -> Option<usize> {
    let v = obj.get(key)?;
    match v.as_u64() {
        Some(n) => Some(n as usize),
        None => {
            issues.push(issue(IssueKind::InvalidValue, key, format!("expected a non-negative integer, got {v}")));
            None
        }
    }
}

fn real(obj: &Map<String, Value>, key: &str, issues: &mut Vec<Issue>) -> Option<f64> {
    let v = obj.get(key)?;
    match v.as_f64() {
        Some(x) if x.is_finite() => Some(x),
        _ => {
            issues.push(issue(IssueKind::InvalidValue, key, format!("expected a number, got {v}")));
            None
        }
    }
}

/// Check a parsed document against the schema. Returns the typed config when
/// there are no issues.
pub fn check(value: &Value) -> (Option<ExperimentConfig>, Vec<Issue>) {
    let mut issues = Vec::new();
    let Some(obj) = value.as_object() else {
        issues.push(issue(IssueKind::InvalidValue, "<root>", "configuration must be a table"));
        return (None, issues);
    };
    for key in obj.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            let near = KNOWN_KEYS
                .iter()
                .min_by_key(|k| strsim::levenshtein(key, k))
                .expect("non-empty key list");
            issues.push(issue(
                IssueKind::UnknownKey,
                key,
                format!("unknown key (closest known key: {near})"),
            ));
        }
    }
    let experiment = match obj.get("experiment") {
        None => {
            issues.push(issue(IssueKind::MissingKey, "experiment", "required key is missing"));
            None
        }
        Some(Value::String(s)) => match s.parse::<Experiment>() {
            Ok(e) => Some(e),
            Err(_) => {
                issues.push(issue(
                    IssueKind::UnknownExperiment,
                    "experiment",
                    format!("unknown experiment {s:?}; did you mean one of: {}", suggestions(s).join(", ")),
                ));
                None
            }
        },
        Some(v) => {
            issues.push(issue(IssueKind::InvalidValue, "experiment", format!("expected a string, got {v}")));
            None
        }
    };
    let group = match obj.get("group") {
        None => None,
        Some(v) => match v.as_str().map(Group::from_str) {
            Some(Ok(g)) => Some(g),
            _ => {
                issues.push(issue(IssueKind::InvalidValue, "group", format!("expected \"U1\" or \"SU2\", got {v}")));
                None
            }
        },
    };
    let dimension = count(obj, "dimension", &mut issues);
    if let Some(d) = dimension {
        if !(d == 1 || d == 2) {
            issues.push(issue(IssueKind::InvalidValue, "dimension", format!("must be 1 or 2, got {d}")));
        }
    }
    let grid = count(obj, "grid", &mut issues);
    if grid == Some(0) {
        issues.push(issue(IssueKind::InvalidValue, "grid", "must be positive"));
    }
    let band = count(obj, "band", &mut issues);
    let samples = count(obj, "samples", &mut issues);
    let level = count(obj, "level", &mut issues);
    let group_grid = count(obj, "group_grid", &mut issues);
    let width = real(obj, "width", &mut issues);
    let amplitude = real(obj, "amplitude", &mut issues);
    let seed = match obj.get("seed") {
        None => 0,
        Some(v) => v.as_u64().unwrap_or_else(|| {
            issues.push(issue(IssueKind::InvalidValue, "seed", format!("expected a non-negative integer, got {v}")));
            0
        }),
    };
    let output_dir = match obj.get("output_dir") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(v) => {
            issues.push(issue(IssueKind::InvalidValue, "output_dir", format!("expected a path string, got {v}")));
            None
        }
    };
    let hbars = match obj.get("hbars") {
        None => None,
        Some(Value::Array(items)) if !items.is_empty() => {
            let mut out = Vec::new();
            for v in items {
                match parse_hbar(v) {
                    Some(h) if h > 0.0 && h <= 1.0 => out.push(h),
                    _ => issues.push(issue(IssueKind::InvalidValue, "hbars", format!("{v} is not a number in (0, 1]"))),
                }
            }
            Some(out)
        }
        Some(v) => {
            issues.push(issue(IssueKind::InvalidValue, "hbars", format!("expected a non-empty list, got {v}")));
            None
        }
    };
    if let Some(e) = experiment {
        for key in e.required() {
            if !obj.contains_key(*key) {
                issues.push(issue(
                    IssueKind::MissingKey,
                    key,
                    format!("required by experiment {e}"),
                ));
            }
        }
        if e.quantizes() {
            if let (Some(hs), Some(n)) = (&hbars, grid) {
                for &h in hs {
                    if admissible_m(h, n).is_err() {
                        issues.push(issue(
                            IssueKind::InadmissibleHbar,
                            "hbars",
                            format!("hbar = {h} is not 1/m with integer 1 <= m <= {}", n / 2),
                        ));
                    }
                }
            }
        }
        if e == Experiment::EmbedSmear && group == Some(Group::SU2) {
            issues.push(issue(IssueKind::InvalidValue, "group", "smearing is implemented for U1 only"));
        }
        if e == Experiment::GaugeCheck && grid.is_some_and(|n| n > 64) {
            issues.push(issue(IssueKind::InvalidValue, "grid", "kernel grids above 64 points per side are not supported here"));
        }
    }
    if !issues.is_empty() {
        return (None, issues);
    }
    let config = ExperimentConfig {
        experiment: experiment.expect("present when no issues"),
        group,
        dimension,
        grid,
        band,
        hbars,
        samples,
        seed,
        output_dir,
        level,
        group_grid,
        width,
        amplitude,
    };
    (Some(config), issues)
}

/// All issues in the file at `path`; an unreadable file is an error.
pub fn validate(path: &Path) -> Result<Vec<Issue>> {
    match read_value(path) {
        Ok(v) => Ok(check(&v).1),
        Err(Error::ConfigInvalid(msg)) => Ok(vec![issue(IssueKind::InvalidValue, "<file>", msg)]),
        Err(e) => Err(e),
    }
}

/// Load and validate, turning the first issues into `ConfigInvalid`.
pub fn load(path: &Path) -> Result<ExperimentConfig> {
    from_value(&read_value(path)?)
}

pub fn from_value(value: &Value) -> Result<ExperimentConfig> {
    match check(value) {
        (Some(c), _) => Ok(c),
        (None, issues) => Err(Error::ConfigInvalid(
            issues.iter().map(Issue::to_string).collect::<Vec<_>>().join("; "),
        )),
    }
}

impl ExperimentConfig {
    pub fn group(&self) -> Group {
        self.group.unwrap_or(Group::SU2)
    }

    pub fn dimension(&self) -> usize {
        self.dimension.unwrap_or(1)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(10)
    }

    pub fn band(&self) -> usize {
        self.band.unwrap_or(1)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude.unwrap_or(1.0)
    }

    pub fn hbars(&self) -> Vec<f64> {
        self.hbars.clone().unwrap_or_default()
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("results").join(self.experiment.name()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toml(s: &str) -> Value {
        parse_value(s, false).unwrap()
    }

    #[test]
    fn well_formed_config_has_no_issues() {
        let v = toml(
            r#"
            experiment = "dirac-sweep"
            dimension = 1
            grid = 256
            hbars = ["1/8", 0.0625, "1/32", 0.015625]
            seed = 3
            "#,
        );
        let (c, issues) = check(&v);
        assert!(issues.is_empty(), "{issues:?}");
        let c = c.unwrap();
        assert_eq!(c.hbars.unwrap(), vec![0.125, 0.0625, 0.03125, 0.015625]);
        assert_eq!(c.seed, 3);
    }

    #[test]
    fn missing_hbars_is_named() {
        let v = toml("experiment = \"dirac-sweep\"\ndimension = 1\ngrid = 64\n");
        let err = from_value(&v).unwrap_err().to_string();
        assert!(err.contains("hbars"), "{err}");
    }

    #[test]
    fn inadmissible_hbar() {
        let v = toml("experiment = \"dirac-sweep\"\ndimension = 1\ngrid = 64\nhbars = [0.3]\n");
        let (_, issues) = check(&v);
        assert!(issues.iter().any(|i| i.kind == IssueKind::InadmissibleHbar));
    }

    #[test]
    fn unknown_keys_and_experiments() {
        let v = toml("experiment = \"dirac-swep\"\nsamplez = 3\n");
        let (_, issues) = check(&v);
        let unknown = issues.iter().find(|i| i.kind == IssueKind::UnknownKey).unwrap();
        assert!(unknown.message.contains("samples"));
        let exp = issues.iter().find(|i| i.kind == IssueKind::UnknownExperiment).unwrap();
        assert!(exp.message.contains("dirac-sweep"));
        assert_eq!(suggestions("zzzzzzzzzzzzzzzzzzzzzzz").len(), Experiment::ALL.len());
    }

    #[test]
    fn json_is_the_same_schema() {
        let v = parse_value(r#"{"experiment": "axioms", "samples": 10}"#, true).unwrap();
        assert_eq!(from_value(&v).unwrap().experiment, Experiment::Axioms);
    }
}
