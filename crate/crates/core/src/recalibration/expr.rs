use std::fmt;

use evalexpr::{
    build_operator_tree, ContextWithMutableFunctions, ContextWithMutableVariables, DefaultNumericTypes,
    Function, HashMapContext, Node, Value,
};

use crate::error::{Error, Result};

/// User-supplied closed-form map of the score variable `x`, e.g. `2*x + 1`
/// or `ln(x + 1)`. `exp`, `ln`, `log10`, `sqrt`, `tanh`, `atan` and `cbrt`
/// are available without the `math::` prefix.
#[derive(Clone)]
pub struct ScoreExpression {
    source: String,
    tree: Node<DefaultNumericTypes>,
}

impl fmt::Debug for ScoreExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ScoreExpression").field(&self.source).finish()
    }
}

impl PartialEq for ScoreExpression {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

fn unary(f: fn(f64) -> f64) -> Function<DefaultNumericTypes> {
    Function::new(move |arg: &Value<DefaultNumericTypes>| Ok(Value::Float(f(arg.as_number()?))))
}

impl ScoreExpression {
    pub fn parse(source: &str) -> Result<Self> {
        let tree = build_operator_tree::<DefaultNumericTypes>(source).map_err(|e| Error::Expression(e.to_string()))?;
        let expr = ScoreExpression { source: source.to_string(), tree };
        expr.eval(1.0)?;
        Ok(expr)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        let err = |e: evalexpr::EvalexprError<DefaultNumericTypes>| Error::Expression(e.to_string());
        ctx.set_value("x".into(), Value::Float(x)).map_err(err)?;
        let functions: [(&str, fn(f64) -> f64); 7] = [
            ("exp", f64::exp),
            ("ln", f64::ln),
            ("log10", f64::log10),
            ("sqrt", f64::sqrt),
            ("tanh", f64::tanh),
            ("atan", f64::atan),
            ("cbrt", f64::cbrt),
        ];
        for (name, f) in functions {
            ctx.set_function(name.into(), unary(f)).map_err(err)?;
        }
        let y = self.tree.eval_number_with_context(&ctx).map_err(err)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::DomainViolation { value: x })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_common_forms() {
        assert_eq!(ScoreExpression::parse("2*x+1").unwrap().eval(3.0).unwrap(), 7.0);
        assert!((ScoreExpression::parse("exp(x)").unwrap().eval(1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(ScoreExpression::parse("x/2").unwrap().eval(3.0).unwrap(), 1.5);
    }

    #[test]
    fn domain_and_syntax_errors() {
        let ln = ScoreExpression::parse("ln(x)").unwrap();
        assert!(matches!(ln.eval(-1.0), Err(Error::DomainViolation { .. })));
        assert!(ScoreExpression::parse("2*(x").is_err());
        assert!(ScoreExpression::parse("y+1").is_err());
    }
}
