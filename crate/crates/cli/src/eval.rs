//! Evaluation of JSON expression trees.
//!
//! A node is either a literal or an object with a single operator key:
//!
//! ```text
//! {"wedge": [x, y, ...]}            {"walker": [x, y, ...]}
//! {"add": [x, y, ...]}              {"scale": {"by": "p/q", "arg": x}}
//! {"star": x}                       {"trace": x}       {"phi": x}
//! {"E": x}                          {"En": {"arg": x, "n": n}}
//! {"iota": {"arg": x, "n": n}}      {"inner_right": [x, y]}
//! {"inner_left": [x, y]}            {"fuse": [x, y, ...]}
//! {"F": {"morphism": m, "arg": x}}  {"dot_shift": {"arg": x, "steps": k}}
//! {"conjugate": x}
//! ```
//!
//! Literals are element objects (with `terms`), scalar objects (with
//! `scalar`), `{"p": n}` for the projection `p_n` and `{"lit": x}`.

use gjs_core::bimodule::CornerElement;
use gjs_core::error::Error;
use gjs_core::gjs::{GradedElement, Gjs};
use gjs_core::json::{corner_to_json, element_from_json, element_to_json, morphism_from_json, scalar_to_json};
use gjs_core::scalar::{parse_scalar, Scalar};
use serde_json::Value;

#[derive(Clone, Debug)]
pub enum EvalValue {
    Scalar(Scalar),
    Element {
        element: GradedElement,
        shape: Option<(usize, usize)>,
    },
}

impl EvalValue {
    fn element(element: GradedElement) -> Self {
        EvalValue::Element { element, shape: None }
    }

    fn corner(c: CornerElement) -> Self {
        let shape = Some(c.shape());
        EvalValue::Element {
            element: c.into_payload(),
            shape,
        }
    }

    pub fn to_json(&self, gjs: &Gjs) -> Value {
        match self {
            EvalValue::Scalar(x) => scalar_to_json(x, gjs.delta()),
            EvalValue::Element { element, shape: None } => element_to_json(element, gjs.delta()),
            EvalValue::Element { element, shape: Some((l, r)) } => {
                let c = CornerElement::new(*l, *r, element.clone()).expect("shape was checked when the value was built");
                corner_to_json(&c, gjs.delta())
            }
        }
    }
}

/// An evaluation failure with the path of the node that caused it.
#[derive(Debug)]
pub struct EvalError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at {}: {}", self.path, self.message)
    }
}

type EvalResult<T> = std::result::Result<T, EvalError>;

struct Evaluator<'a> {
    gjs: &'a Gjs,
}

fn fail<T>(path: &str, message: impl ToString) -> EvalResult<T> {
    Err(EvalError {
        path: path.to_string(),
        message: message.to_string(),
    })
}

fn at(path: &str) -> impl Fn(Error) -> EvalError + '_ {
    move |e| EvalError {
        path: path.to_string(),
        message: e.to_string(),
    }
}

pub fn evaluate(gjs: &Gjs, expr: &Value) -> EvalResult<EvalValue> {
    Evaluator { gjs }.eval(expr, "$")
}

impl Evaluator<'_> {
    fn eval(&self, node: &Value, path: &str) -> EvalResult<EvalValue> {
        let Some(obj) = node.as_object() else {
            return fail(path, "expected an object");
        };
        if obj.contains_key("terms") {
            return self.literal(node, path);
        }
        if let Some(s) = obj.get("scalar") {
            let text = s.as_str().ok_or_else(|| at(path)(Error::Json("scalar must be a string".into())))?;
            self.check_delta(obj.get("delta"), path)?;
            return parse_scalar(text).map(EvalValue::Scalar).map_err(at(path));
        }
        if obj.len() != 1 {
            return fail(path, format!("expected exactly one operator key, found {}", obj.len()));
        }
        let (op, arg) = obj.iter().next().unwrap();
        let here = format!("{path}.{op}");
        let p = here.as_str();
        let g = self.gjs;
        match op.as_str() {
            "lit" => self.literal(arg, p),
            "p" => {
                let n = self.uint(arg, p)?;
                Ok(EvalValue::element(GradedElement::projection(n)))
            }
            "wedge" | "walker" | "add" => {
                let items = self.list(arg, p)?;
                if items.is_empty() {
                    return fail(p, "needs at least one operand");
                }
                let mut acc = self.element(&items[0], &format!("{p}[0]"))?;
                for (i, item) in items.iter().enumerate().skip(1) {
                    let next = self.element(item, &format!("{p}[{i}]"))?;
                    acc = match op.as_str() {
                        "wedge" => g.wedge(&acc, &next),
                        "walker" => g.walker(&acc, &next),
                        _ => &acc + &next,
                    };
                }
                Ok(EvalValue::element(acc))
            }
            "scale" => {
                let by = self.field(arg, "by", p)?;
                let c = by.as_str().ok_or_else(|| at(p)(Error::Json("`by` must be a string".into()))).and_then(|s| parse_scalar(s).map_err(at(p)))?;
                let inner = self.field(arg, "arg", p)?;
                match self.eval(inner, &format!("{p}.arg"))? {
                    EvalValue::Scalar(x) => Ok(EvalValue::Scalar(x * c)),
                    EvalValue::Element { element, shape } => Ok(EvalValue::Element {
                        element: element.scale(&c),
                        shape,
                    }),
                }
            }
            "star" => match self.eval(arg, p)? {
                EvalValue::Scalar(x) => Ok(EvalValue::Scalar(x)),
                EvalValue::Element { element, shape } => Ok(EvalValue::Element {
                    element: element.star(),
                    shape: shape.map(|(l, r)| (r, l)),
                }),
            },
            "trace" => Ok(EvalValue::Scalar(g.voiculescu_trace(&self.element(arg, p)?))),
            "phi" => g.weight_phi(&self.element(arg, p)?).map(EvalValue::Scalar).map_err(at(p)),
            "E" => Ok(EvalValue::element(g.expectation_onto_a(&self.element(arg, p)?))),
            "En" | "iota" => {
                let x = self.element(self.field(arg, "arg", p)?, &format!("{p}.arg"))?;
                let n = self.uint(self.field(arg, "n", p)?, &format!("{p}.n"))?;
                let out = if op == "En" { g.expectation_en(&x, n) } else { g.iota(&x, n) };
                out.map(EvalValue::element).map_err(at(p))
            }
            "inner_right" | "inner_left" => {
                let items = self.list(arg, p)?;
                if items.len() != 2 {
                    return fail(p, format!("expected two operands, found {}", items.len()));
                }
                let xi = self.corner(&items[0], &format!("{p}[0]"))?;
                let eta = self.corner(&items[1], &format!("{p}[1]"))?;
                let out = if op == "inner_right" { g.right_inner(&xi, &eta) } else { g.left_inner(&xi, &eta) };
                out.map(EvalValue::corner).map_err(at(p))
            }
            "fuse" => {
                let items = self.list(arg, p)?;
                let word = items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.corner(x, &format!("{p}[{i}]")))
                    .collect::<EvalResult<Vec<_>>>()?;
                g.fuse(&word).map(EvalValue::corner).map_err(at(p))
            }
            "F" => {
                let m = morphism_from_json(self.field(arg, "morphism", p)?).map_err(at(&format!("{p}.morphism")))?;
                let xi = self.corner(self.field(arg, "arg", p)?, &format!("{p}.arg"))?;
                g.functor_on_morphism(&m, &xi).map(EvalValue::corner).map_err(at(p))
            }
            "dot_shift" => {
                let xi = self.corner(self.field(arg, "arg", p)?, &format!("{p}.arg"))?;
                let steps = self.field(arg, "steps", p)?;
                let Some(steps) = steps.as_i64() else {
                    return fail(&format!("{p}.steps"), "expected an integer");
                };
                xi.dot_shift(steps as isize).map(EvalValue::corner).map_err(at(p))
            }
            "conjugate" => self.corner(arg, p)?.conjugate().map(EvalValue::corner).map_err(at(p)),
            other => fail(path, format!("unknown operator {other:?}")),
        }
    }

    fn literal(&self, v: &Value, path: &str) -> EvalResult<EvalValue> {
        if v.get("terms").is_none() {
            return self.eval(v, path);
        }
        let parsed = element_from_json(v).map_err(at(path))?;
        if let Some(d) = &parsed.delta {
            if d != self.gjs.delta() {
                return fail(path, format!("literal is tagged with delta {d} but evaluation uses {}", self.gjs.delta()));
            }
        }
        Ok(EvalValue::Element {
            element: parsed.element,
            shape: parsed.shape,
        })
    }

    fn check_delta(&self, tag: Option<&Value>, path: &str) -> EvalResult<()> {
        match tag.and_then(Value::as_str) {
            Some(d) => {
                let d = gjs_core::scalar::LoopParameter::parse(d).map_err(at(path))?;
                if &d != self.gjs.delta() {
                    return fail(path, format!("literal is tagged with delta {d} but evaluation uses {}", self.gjs.delta()));
                }
                Ok(())
            }
            None => Ok(()),
        }
    }

    fn element(&self, node: &Value, path: &str) -> EvalResult<GradedElement> {
        match self.eval(node, path)? {
            EvalValue::Element { element, .. } => Ok(element),
            EvalValue::Scalar(_) => fail(path, "expected an element, found a scalar"),
        }
    }

    fn corner(&self, node: &Value, path: &str) -> EvalResult<CornerElement> {
        let (element, shape) = match self.eval(node, path)? {
            EvalValue::Element { element, shape } => (element, shape),
            EvalValue::Scalar(_) => return fail(path, "expected a corner element, found a scalar"),
        };
        let Some((l, r)) = shape.or_else(|| element.corner_shape()) else {
            return fail(path, format!("expected a corner element, found {}", element.describe_shape()));
        };
        CornerElement::new(l, r, element).map_err(at(path))
    }

    fn list<'v>(&self, v: &'v Value, path: &str) -> EvalResult<&'v Vec<Value>> {
        v.as_array().ok_or_else(|| EvalError {
            path: path.to_string(),
            message: "expected a list of operands".into(),
        })
    }

    fn field<'v>(&self, v: &'v Value, key: &str, path: &str) -> EvalResult<&'v Value> {
        v.get(key).ok_or_else(|| EvalError {
            path: path.to_string(),
            message: format!("missing field {key:?}"),
        })
    }

    fn uint(&self, v: &Value, path: &str) -> EvalResult<usize> {
        match v.as_u64() {
            Some(n) => Ok(n as usize),
            None => fail(path, "expected a non-negative integer"),
        }
    }
}
