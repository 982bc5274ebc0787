use std::collections::BTreeMap;

use super::{BinOp, Context, Expression, Func, Node};
use crate::error::{DomainError, DomainReason, ExprError};
use crate::jet::Jet2;

// Integer exponents up to this magnitude go through repeated products.
const MAX_INT_EXPONENT: f64 = 2147483648.0;

struct Eval<'a> {
    ctx: &'a Context,
    values: &'a [f64],
    /// Jet slot of each context variable, if active.
    slots: Vec<Option<usize>>,
    m: usize,
}

impl Expression {
    /// Plain evaluation; `values` follow the context's variable order.
    pub fn eval(&self, values: &[f64]) -> Result<f64, DomainError> {
        self.jet(values, &[]).map(|j| j.value())
    }

    /// Order-2 jet with respect to the context variables listed in `active`.
    pub fn jet(&self, values: &[f64], active: &[usize]) -> Result<Jet2, DomainError> {
        let ctx = self.context();
        assert_eq!(
            values.len(),
            ctx.vars().len(),
            "expected one value per context variable"
        );
        let mut slots = vec![None; values.len()];
        for (slot, &v) in active.iter().enumerate() {
            slots[v] = Some(slot);
        }
        let ev = Eval {
            ctx,
            values,
            slots,
            m: active.len(),
        };
        ev.node(self.root())
    }
}

/// Jet of `expr` at `bindings`, differentiated with respect to `active`
/// (in that order).
pub fn eval_jet2(
    expr: &Expression,
    bindings: &BTreeMap<String, f64>,
    active: &[&str],
) -> Result<Jet2, crate::error::Error> {
    let vars = expr.vars();
    let mut values = vec![0.0; vars.len()];
    for (i, name) in vars.iter().enumerate() {
        match bindings.get(name) {
            Some(&v) => values[i] = v,
            None if expr.used_vars().contains(&i) => return Err(ExprError::Unbound(name.clone()).into()),
            None => {}
        }
    }
    let mut idx = Vec::with_capacity(active.len());
    for a in active {
        match expr.context().var_index(a) {
            Some(i) if bindings.contains_key(*a) => idx.push(i),
            _ => return Err(ExprError::Unbound(a.to_string()).into()),
        }
    }
    Ok(expr.jet(&values, &idx)?)
}

impl Eval<'_> {
    fn fail(&self, node: &Node, reason: DomainReason) -> DomainError {
        let mut s = String::new();
        let _ = super::write_node(&mut s, node, self.ctx, 0);
        DomainError { subexpr: s, reason }
    }

    fn check(&self, node: &Node, j: Jet2) -> Result<Jet2, DomainError> {
        if j.value().is_finite() {
            Ok(j)
        } else {
            Err(self.fail(node, DomainReason::NonFinite))
        }
    }

    fn node(&self, node: &Node) -> Result<Jet2, DomainError> {
        match node {
            Node::Num(v) => Ok(Jet2::constant(*v, self.m)),
            Node::Const(c) => Ok(Jet2::constant(c.value(), self.m)),
            Node::Var(i) => Ok(match self.slots[*i] {
                Some(slot) => Jet2::variable(self.values[*i], slot, self.m),
                None => Jet2::constant(self.values[*i], self.m),
            }),
            Node::Neg(a) => Ok(-&self.node(a)?),
            Node::Bin(op, a, b) => {
                let r = match op {
                    BinOp::Add => &self.node(a)? + &self.node(b)?,
                    BinOp::Sub => &self.node(a)? - &self.node(b)?,
                    BinOp::Mul => &self.node(a)? * &self.node(b)?,
                    BinOp::Div => {
                        let num = self.node(a)?;
                        let den = self.node(b)?;
                        if den.value() == 0.0 {
                            return Err(self.fail(node, DomainReason::DivisionByZero));
                        }
                        num.div(&den)
                    }
                    BinOp::Pow => self.pow(node, a, b)?,
                };
                self.check(node, r)
            }
            Node::Call(func, a) => {
                let x = self.node(a)?;
                let r = self.call(node, *func, &x)?;
                self.check(node, r)
            }
            Node::Ext(i, a) => {
                let x = self.node(a)?;
                let g = self.ctx.externs[*i]
                    .eval3(x.value())
                    .map_err(|msg| self.fail(node, DomainReason::External(msg)))?;
                self.check(node, x.chain(g))
            }
        }
    }

    fn pow(&self, node: &Node, base: &Node, exp: &Node) -> Result<Jet2, DomainError> {
        let b = self.node(base)?;
        if exp.is_constant() {
            let k = self.node(exp)?.value();
            if k.fract() == 0.0 && k.abs() <= MAX_INT_EXPONENT {
                let p = b.powu(k.abs() as u64);
                if k >= 0.0 {
                    return Ok(p);
                }
                if p.value() == 0.0 {
                    return Err(self.fail(node, DomainReason::DivisionByZero));
                }
                return Ok(Jet2::constant(1.0, self.m).div(&p));
            }
            let x = b.value();
            if x <= 0.0 {
                return Err(self.fail(node, DomainReason::NonPositiveBase));
            }
            return Ok(b.chain([x.powf(k), k * x.powf(k - 1.0), k * (k - 1.0) * x.powf(k - 2.0)]));
        }
        let x = b.value();
        if x <= 0.0 {
            return Err(self.fail(node, DomainReason::NonPositiveBase));
        }
        let e = self.node(exp)?;
        let w = &e * &b.chain([x.ln(), 1.0 / x, -1.0 / (x * x)]);
        let ew = w.value().exp();
        Ok(w.chain([ew, ew, ew]))
    }

    fn call(&self, node: &Node, func: Func, x: &Jet2) -> Result<Jet2, DomainError> {
        let v = x.value();
        let g = match func {
            Func::Sin => [v.sin(), v.cos(), -v.sin()],
            Func::Cos => [v.cos(), -v.sin(), -v.cos()],
            Func::Tan => {
                if v.cos() == 0.0 {
                    return Err(self.fail(node, DomainReason::DivisionByZero));
                }
                let t = v.tan();
                let s = 1.0 + t * t;
                [t, s, 2.0 * t * s]
            }
            Func::Sinh => [v.sinh(), v.cosh(), v.sinh()],
            Func::Cosh => [v.cosh(), v.sinh(), v.cosh()],
            Func::Tanh => {
                let t = v.tanh();
                let s = 1.0 - t * t;
                [t, s, -2.0 * t * s]
            }
            Func::Exp => {
                let e = v.exp();
                [e, e, e]
            }
            Func::Log => {
                if v <= 0.0 {
                    return Err(self.fail(node, DomainReason::LogNonPositive));
                }
                [v.ln(), 1.0 / v, -1.0 / (v * v)]
            }
            Func::Sqrt => {
                if v < 0.0 {
                    return Err(self.fail(node, DomainReason::SqrtNegative));
                }
                if v == 0.0 {
                    if !x.is_flat() {
                        return Err(self.fail(node, DomainReason::SqrtKink));
                    }
                    return Ok(Jet2::constant(0.0, self.m));
                }
                let s = v.sqrt();
                [s, 0.5 / s, -0.25 / (s * v)]
            }
            Func::Abs => {
                if v == 0.0 {
                    if !x.is_flat() {
                        return Err(self.fail(node, DomainReason::AbsKink));
                    }
                    return Ok(Jet2::constant(0.0, self.m));
                }
                [v.abs(), v.signum(), 0.0]
            }
        };
        Ok(x.chain(g))
    }
}
