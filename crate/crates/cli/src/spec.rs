//! Channel and input-state specifications.
//!
//! A channel is given as `builtin:<name>[:<x>]`, as inline JSON, or as the
//! path of a JSON file. The JSON forms are
//!
//! ```json
//! {"builtin": "depolarizing", "dim": 2, "param": 0.1}
//! {"kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}
//! ```
//!
//! where each Kraus matrix is a list of rows and each entry an `[re, im]`
//! pair. In the short form `x` is the dimension for `identity` and
//! `complete_dephasing` and the noise parameter for `dephasing` and
//! `depolarizing`.

use std::fs;

use qchancap_core::{Complex64, ComplexMatrix, DensityMatrix, QuantumChannel};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    Identity,
    CompleteDephasing,
    Dephasing,
    Depolarizing,
}

impl Builtin {
    fn parse(name: &str) -> CliResult<Self> {
        match name.replace('-', "_").as_str() {
            "identity" => Ok(Builtin::Identity),
            "complete_dephasing" => Ok(Builtin::CompleteDephasing),
            "dephasing" => Ok(Builtin::Dephasing),
            "depolarizing" => Ok(Builtin::Depolarizing),
            _ => Err(CliError::usage(format!(
                "builtin: unknown channel `{name}` (expected identity, complete_dephasing, dephasing or depolarizing)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Identity => "identity",
            Builtin::CompleteDephasing => "complete_dephasing",
            Builtin::Dephasing => "dephasing",
            Builtin::Depolarizing => "depolarizing",
        }
    }

    /// Whether the family carries a noise parameter rather than a dimension.
    pub fn is_parametric(self) -> bool {
        matches!(self, Builtin::Dephasing | Builtin::Depolarizing)
    }
}

/// `[re, im]` rows of a complex matrix.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Builtin {
        builtin: Builtin,
        dim: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        param: Option<f64>,
    },
    Kraus {
        kraus: Vec<JsonMatrix>,
    },
}

impl ChannelSpec {
    pub fn builtin(kind: Builtin, param: f64) -> Self {
        if kind.is_parametric() {
            ChannelSpec::Builtin {
                builtin: kind,
                dim: 2,
                param: Some(param),
            }
        } else {
            ChannelSpec::Builtin {
                builtin: kind,
                dim: param as usize,
                param: None,
            }
        }
    }

    /// Parses the short form, inline JSON, or a JSON file path.
    pub fn parse(text: &str) -> CliResult<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("builtin:") {
            return Self::parse_short(rest);
        }
        let json = if text.starts_with('{') {
            text.to_owned()
        } else {
            fs::read_to_string(text)
                .map_err(|e| CliError::usage(format!("channel: cannot read `{text}`: {e}")))?
        };
        let value: Value = serde_json::from_str(&json)
            .map_err(|e| CliError::usage(format!("channel: malformed JSON: {e}")))?;
        Self::from_json(&value)
    }

    fn parse_short(rest: &str) -> CliResult<Self> {
        let mut parts = rest.splitn(2, ':');
        let kind = Builtin::parse(parts.next().unwrap_or(""))?;
        let arg = parts.next();
        if kind.is_parametric() {
            let arg = arg.ok_or_else(|| {
                CliError::usage(format!("param: `builtin:{}` needs a noise parameter", kind.name()))
            })?;
            let param = arg
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("param: `{arg}` is not a number")))?;
            Ok(Self::builtin(kind, param))
        } else {
            let dim = match arg {
                None => 2,
                Some(a) => a
                    .parse::<usize>()
                    .map_err(|_| CliError::usage(format!("dim: `{a}` is not a positive integer")))?,
            };
            Ok(ChannelSpec::Builtin {
                builtin: kind,
                dim,
                param: None,
            })
        }
    }

    pub fn from_json(value: &Value) -> CliResult<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::usage("channel: expected a JSON object"))?;
        if let Some(name) = obj.get("builtin") {
            let name = name
                .as_str()
                .ok_or_else(|| CliError::usage("builtin: expected a string"))?;
            let kind = Builtin::parse(name)?;
            let dim = match obj.get("dim") {
                None => 2,
                Some(d) => d
                    .as_u64()
                    .ok_or_else(|| CliError::usage("dim: expected a non-negative integer"))?
                    as usize,
            };
            let param = match obj.get("param") {
                None | Some(Value::Null) => None,
                Some(p) => Some(p.as_f64().ok_or_else(|| CliError::usage("param: expected a number"))?),
            };
            if kind.is_parametric() && param.is_none() {
                return Err(CliError::usage(format!("param: `{}` needs a noise parameter", kind.name())));
            }
            return Ok(ChannelSpec::Builtin {
                builtin: kind,
                dim,
                param: if kind.is_parametric() { param } else { None },
            });
        }
        if let Some(kraus) = obj.get("kraus") {
            let list = kraus
                .as_array()
                .ok_or_else(|| CliError::usage("kraus: expected a list of matrices"))?;
            let mats = list
                .iter()
                .enumerate()
                .map(|(i, m)| parse_json_matrix(m, &format!("kraus[{i}]")))
                .collect::<CliResult<Vec<_>>>()?;
            return Ok(ChannelSpec::Kraus { kraus: mats });
        }
        Err(CliError::usage("channel: expected a `builtin` or `kraus` field"))
    }

    pub fn to_channel(&self) -> CliResult<QuantumChannel> {
        match self {
            ChannelSpec::Builtin { builtin, dim, param } => {
                if builtin.is_parametric() && *dim != 2 {
                    return Err(CliError::Validation(format!(
                        "dim: `{}` is a qubit channel, got dim {dim}",
                        builtin.name()
                    )));
                }
                let p = param.unwrap_or(0.0);
                Ok(match builtin {
                    Builtin::Identity => QuantumChannel::identity(*dim)?,
                    Builtin::CompleteDephasing => QuantumChannel::complete_dephasing(*dim)?,
                    Builtin::Dephasing => QuantumChannel::dephasing(p)?,
                    Builtin::Depolarizing => QuantumChannel::depolarizing(p)?,
                })
            }
            ChannelSpec::Kraus { kraus } => {
                let mats = kraus
                    .iter()
                    .enumerate()
                    .map(|(i, m)| to_matrix(m, &format!("kraus[{i}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(QuantumChannel::new(mats)?)
            }
        }
    }
}

/// Reads a rows-of-`[re, im]` matrix, naming `field` in any error.
pub fn parse_json_matrix(value: &Value, field: &str) -> CliResult<JsonMatrix> {
    let rows = value
        .as_array()
        .ok_or_else(|| CliError::usage(format!("{field}: expected a list of rows")))?;
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            let entries = row
                .as_array()
                .ok_or_else(|| CliError::usage(format!("{field}[{r}]: expected a list of entries")))?;
            entries
                .iter()
                .enumerate()
                .map(|(c, e)| {
                    let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        CliError::usage(format!("{field}[{r}][{c}]: expected an [re, im] pair"))
                    })?;
                    let re = pair[0].as_f64();
                    let im = pair[1].as_f64();
                    match (re, im) {
                        (Some(re), Some(im)) => Ok([re, im]),
                        _ => Err(CliError::usage(format!("{field}[{r}][{c}]: entries must be numbers"))),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn to_matrix(m: &JsonMatrix, field: &str) -> CliResult<ComplexMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(CliError::usage(format!("{field}: empty matrix")));
    }
    if m.iter().any(|r| r.len() != cols) {
        return Err(CliError::usage(format!("{field}: rows have different lengths")));
    }
    let data = m
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    Ok(ComplexMatrix::new(rows, cols, data)?)
}

pub fn from_matrix(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Source state: the maximally mixed state of the channel input, or an
/// explicit density matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Named(MaximallyMixed),
    Matrix(JsonMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaximallyMixed {
    MaximallyMixed,
}

impl InputSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let text = text.trim();
        if text == "maximally-mixed" {
            return Ok(InputSpec::Named(MaximallyMixed::MaximallyMixed));
        }
        let json = if text.starts_with('[') {
            text.to_owned()
        } else {
            fs::read_to_string(text).map_err(|e| {
                CliError::usage(format!(
                    "input: `{text}` is neither `maximally-mixed` nor a readable file: {e}"
                ))
            })?
        };
        let value: Value = serde_json::from_str(&json)
            .map_err(|e| CliError::usage(format!("input: malformed JSON: {e}")))?;
        Ok(InputSpec::Matrix(parse_json_matrix(&value, "input")?))
    }

    pub fn to_state(&self, dim: usize) -> CliResult<DensityMatrix> {
        match self {
            InputSpec::Named(_) => Ok(DensityMatrix::maximally_mixed(dim)),
            InputSpec::Matrix(m) => Ok(DensityMatrix::new(to_matrix(m, "input")?)?),
        }
    }
}
