//! Scalar expressions over named chart variables.
//!
//! Expressions are parsed once against a [`Context`] that fixes the variable
//! order and any extra unary functions, then evaluated either as plain
//! `f64` or as an order-2 [`Jet2`](crate::jet::Jet2).
//!
//! Grammar (whitespace is insignificant, implicit multiplication is rejected):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;          (* right associative *)
//! primary = number | constant | variable
//!         | function "(" expr ")" | "(" expr ")" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//!         | "." digits [ exponent ] ;
//! constant = "pi" | "e" ;
//! function = "sin" | "cos" | "tan" | "sinh" | "cosh" | "tanh"
//!          | "exp" | "log" | "sqrt" | "abs" | <registered extern> ;
//! ```

mod eval;
mod parse;

use std::fmt;
use std::sync::Arc;

pub use eval::eval_jet2;
pub use parse::parse;

use crate::error::ExprError;

/// A unary function supplied from outside the grammar, e.g. a profile
/// curve obtained by quadrature. Must report its first two derivatives so
/// jets stay exact.
pub trait ScalarFn: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    /// `[g(x), g'(x), g''(x)]`.
    fn eval3(&self, x: f64) -> Result<[f64; 3], String>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }

    fn from_name(name: &str) -> Option<Constant> {
        match name {
            "pi" => Some(Constant::Pi),
            "e" => Some(Constant::E),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Expression tree. `Var` and `Ext` index into the owning [`Context`].
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Const(Constant),
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
    Ext(usize, Box<Node>),
}

impl Node {
    /// True when the subtree depends on no variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Node::Num(_) | Node::Const(_) => true,
            Node::Var(_) => false,
            Node::Neg(a) | Node::Call(_, a) | Node::Ext(_, a) => a.is_constant(),
            Node::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }
}

/// Variable names and extern functions an expression is parsed against.
#[derive(Clone, Debug, Default)]
pub struct Context {
    vars: Vec<String>,
    externs: Vec<Arc<dyn ScalarFn>>,
}

const RESERVED: [&str; 2] = ["pi", "e"];

impl Context {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Self, ExprError> {
        let mut ctx = Context::default();
        for v in vars {
            let v = v.as_ref();
            if !is_identifier(v) {
                return Err(ExprError::InvalidName(v.to_string()));
            }
            if RESERVED.contains(&v) || Func::from_name(v).is_some() {
                return Err(ExprError::ReservedName(v.to_string()));
            }
            if ctx.vars.iter().any(|w| w == v) {
                return Err(ExprError::DuplicateName(v.to_string()));
            }
            ctx.vars.push(v.to_string());
        }
        Ok(ctx)
    }

    pub fn with_function(mut self, f: Arc<dyn ScalarFn>) -> Result<Self, ExprError> {
        let name = f.name().to_string();
        if !is_identifier(&name) {
            return Err(ExprError::InvalidName(name));
        }
        if RESERVED.contains(&name.as_str())
            || Func::from_name(&name).is_some()
            || self.vars.contains(&name)
            || self.externs.iter().any(|g| g.name() == name)
        {
            return Err(ExprError::ReservedName(name));
        }
        self.externs.push(f);
        Ok(self)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn extern_index(&self, name: &str) -> Option<usize> {
        self.externs.iter().position(|f| f.name() == name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A parsed expression together with the context it was parsed against.
#[derive(Clone, Debug)]
pub struct Expression {
    root: Node,
    ctx: Arc<Context>,
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.ctx.vars == other.ctx.vars
    }
}

impl Expression {
    /// Parse `text` with the given variable names and no extern functions.
    pub fn parse<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Self, ExprError> {
        let ctx = Context::new(vars)?;
        parse(text, &Arc::new(ctx))
    }

    pub(crate) fn from_parts(root: Node, ctx: Arc<Context>) -> Self {
        Expression { root, ctx }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn vars(&self) -> &[String] {
        &self.ctx.vars
    }

    /// Indices of the context variables that actually occur in the tree.
    pub fn used_vars(&self) -> Vec<usize> {
        fn walk(n: &Node, out: &mut Vec<usize>) {
            match n {
                Node::Var(i) => {
                    if !out.contains(i) {
                        out.push(*i)
                    }
                }
                Node::Num(_) | Node::Const(_) => {}
                Node::Neg(a) | Node::Call(_, a) | Node::Ext(_, a) => walk(a, out),
                Node::Bin(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out.sort_unstable();
        out
    }

    /// Render a subtree with this expression's names.
    pub fn render(&self, node: &Node) -> String {
        let mut s = String::new();
        write_node(&mut s, node, &self.ctx, 0).expect("writing to a String cannot fail");
        s
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, &self.ctx, 0)
    }
}

// Binding strength used by the printer. Parentheses are emitted exactly when
// re-parsing would otherwise produce a different tree.
const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POWER: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => PREC_UNARY,
        Node::Num(_) | Node::Const(_) | Node::Var(_) | Node::Call(..) | Node::Ext(..) => PREC_ATOM,
        Node::Neg(_) => PREC_UNARY,
        Node::Bin(BinOp::Add | BinOp::Sub, ..) => PREC_SUM,
        Node::Bin(BinOp::Mul | BinOp::Div, ..) => PREC_PRODUCT,
        Node::Bin(BinOp::Pow, ..) => PREC_POWER,
    }
}

fn write_node<W: fmt::Write>(w: &mut W, node: &Node, ctx: &Context, min_prec: u8) -> fmt::Result {
    let prec = precedence(node);
    let paren = prec < min_prec;
    if paren {
        w.write_char('(')?;
    }
    match node {
        Node::Num(v) => {
            if v.is_sign_negative() {
                w.write_char('-')?;
            }
            write!(w, "{:?}", v.abs())?;
        }
        Node::Const(c) => w.write_str(c.name())?,
        Node::Var(i) => w.write_str(&ctx.vars[*i])?,
        Node::Neg(a) => {
            w.write_char('-')?;
            write_node(w, a, ctx, PREC_UNARY)?;
        }
        Node::Bin(op, a, b) => {
            let (sym, lhs, rhs) = match op {
                BinOp::Add => ('+', PREC_SUM, PREC_PRODUCT),
                BinOp::Sub => ('-', PREC_SUM, PREC_PRODUCT),
                BinOp::Mul => ('*', PREC_PRODUCT, PREC_UNARY),
                BinOp::Div => ('/', PREC_PRODUCT, PREC_UNARY),
                BinOp::Pow => ('^', PREC_ATOM, PREC_UNARY),
            };
            write_node(w, a, ctx, lhs)?;
            w.write_char(sym)?;
            write_node(w, b, ctx, rhs)?;
        }
        Node::Call(func, a) => {
            w.write_str(func.name())?;
            w.write_char('(')?;
            write_node(w, a, ctx, 0)?;
            w.write_char(')')?;
        }
        Node::Ext(i, a) => {
            w.write_str(ctx.externs[*i].name())?;
            w.write_char('(')?;
            write_node(w, a, ctx, 0)?;
            w.write_char(')')?;
        }
    }
    if paren {
        w.write_char(')')?;
    }
    Ok(())
}
