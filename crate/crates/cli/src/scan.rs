//! Parameter scans over a templated state document.
//!
//! A template is a state document in which any number may be replaced by a
//! string expression in one scalar parameter, e.g.
//! `[["exp(2*r)", 0], [0, "exp(-2*r)"]]`. Expressions use `evalexpr` syntax
//! (`^` is power, integer literals divide as integers) plus the shorthands
//! `exp`, `ln`, `sqrt`, `cosh`, `sinh`, `tanh`, `cos`, `sin`.

use evalexpr::{
    eval_number_with_context, ContextWithMutableFunctions, ContextWithMutableVariables,
    DefaultNumericTypes, Function, HashMapContext, Value,
};
use serde_json::Value as Json;

use crate::document::StateDocument;
use crate::error::CliError;

/// `start:end:count` with `count ≥ 1`; a single point uses `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl ScanRange {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || CliError::Parse(format!("range must be start:end:count, got {text:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !start.is_finite() || !end.is_finite() {
            return Err(bad());
        }
        if count == 0 {
            return Err(CliError::Domain("empty range".into()));
        }
        Ok(Self { start, end, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.end
                } else {
                    self.start + step * k as f64
                }
            })
            .collect()
    }
}

fn context(param: &str, value: f64) -> Result<HashMapContext<DefaultNumericTypes>, CliError> {
    let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
    let fail = |e: evalexpr::EvalexprError<DefaultNumericTypes>| CliError::Parse(e.to_string());
    ctx.set_value(param.to_string(), Value::Float(value))
        .map_err(fail)?;
    let unary: [(&str, fn(f64) -> f64); 8] = [
        ("exp", f64::exp),
        ("ln", f64::ln),
        ("sqrt", f64::sqrt),
        ("cosh", f64::cosh),
        ("sinh", f64::sinh),
        ("tanh", f64::tanh),
        ("cos", f64::cos),
        ("sin", f64::sin),
    ];
    for (name, f) in unary {
        ctx.set_function(
            name.to_string(),
            Function::new(move |arg| Ok(Value::Float(f(arg.as_number()?)))),
        )
        .map_err(fail)?;
    }
    Ok(ctx)
}

fn substitute(node: &Json, ctx: &HashMapContext<DefaultNumericTypes>) -> Result<Json, CliError> {
    Ok(match node {
        Json::String(expr) => {
            let x = eval_number_with_context(expr, ctx)
                .map_err(|e| CliError::Parse(format!("cannot evaluate {expr:?}: {e}")))?;
            let n = serde_json::Number::from_f64(x)
                .ok_or_else(|| CliError::Domain(format!("{expr:?} evaluates to {x}")))?;
            Json::Number(n)
        }
        Json::Array(items) => Json::Array(
            items
                .iter()
                .map(|v| substitute(v, ctx))
                .collect::<Result<_, _>>()?,
        ),
        other => other.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct Template {
    raw: Json,
}

impl Template {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: Json = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("malformed template: {e}")))?;
        if !raw.is_object() {
            return Err(CliError::Parse("template must be a JSON object".into()));
        }
        Ok(Self { raw })
    }

    /// Document with every expression evaluated at `param = value`.
    pub fn instantiate(&self, param: &str, value: f64) -> Result<StateDocument, CliError> {
        let ctx = context(param, value)?;
        let mut doc = self.raw.clone();
        for key in ["covariance", "mean"] {
            if let Some(node) = doc.get_mut(key) {
                *node = substitute(node, &ctx)?;
            }
        }
        StateDocument::parse(&doc.to_string())
    }
}
