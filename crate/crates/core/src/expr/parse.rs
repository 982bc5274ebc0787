use std::sync::Arc;

use super::{BinOp, Constant, Context, Expression, Func, Node};
use crate::error::ExprError;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the token and the byte offset it starts at.
    fn next(&mut self) -> Result<(Tok<'a>, usize), ExprError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => return self.number(start).map(|n| (Tok::Num(n), start)),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = start + 1;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                self.pos = end;
                return Ok((Tok::Ident(&self.src[start..end]), start));
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<f64, ExprError> {
        let bytes = self.src.as_bytes();
        let mut end = start;
        let digits = |end: &mut usize| {
            let s = *end;
            while *end < bytes.len() && bytes[*end].is_ascii_digit() {
                *end += 1;
            }
            *end - s
        };
        let int_digits = digits(&mut end);
        let mut frac_digits = 0;
        if end < bytes.len() && bytes[end] == b'.' {
            end += 1;
            frac_digits = digits(&mut end);
        }
        if int_digits + frac_digits == 0 {
            return Err(ExprError::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            // Only treat as exponent when digits follow; "2e" stays an error
            // further up (implicit multiplication with the constant e).
            let mut probe = end + 1;
            if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                probe += 1;
            }
            if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                end = probe;
                digits(&mut end);
            }
        }
        self.pos = end;
        self.src[start..end].parse::<f64>().map_err(|_| ExprError::Syntax {
            offset: start,
            message: "malformed number".into(),
        })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok<'a>,
    at: usize,
    ctx: &'a Context,
    depth: usize,
}

// Bounds recursion on adversarial input such as "((((((...".
const MAX_DEPTH: usize = 256;

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ExprError> {
        let (tok, at) = self.lex.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn unexpected(&self, wanted: &str) -> ExprError {
        let found = match self.tok {
            Tok::Num(_) => "number".to_string(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::End => "end of input".to_string(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        };
        ExprError::Syntax {
            offset: self.at,
            message: format!("expected {wanted}, found {found}"),
        }
    }

    fn enter(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ExprError::Syntax {
                offset: self.at,
                message: "expression nested too deeply".into(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        self.enter()?;
        let node = if self.tok == Tok::Minus {
            self.bump()?;
            Node::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(node)
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if self.tok == Tok::Caret {
            self.bump()?;
            let exp = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        match self.tok {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Node::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                if let Some(func) = Func::from_name(name) {
                    let arg = self.call_arg()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                if let Some(i) = self.ctx.extern_index(name) {
                    let arg = self.call_arg()?;
                    return Ok(Node::Ext(i, Box::new(arg)));
                }
                if let Some(i) = self.ctx.var_index(name) {
                    return Ok(Node::Var(i));
                }
                if let Some(c) = Constant::from_name(name) {
                    return Ok(Node::Const(c));
                }
                Err(ExprError::UnknownIdentifier {
                    name: name.to_string(),
                    offset: at,
                })
            }
            _ => Err(self.unexpected("a number, identifier or '('")),
        }
    }

    fn call_arg(&mut self) -> Result<Node, ExprError> {
        if self.tok != Tok::LParen {
            return Err(self.unexpected("'(' after function name"));
        }
        self.bump()?;
        let arg = self.expr()?;
        if self.tok != Tok::RParen {
            return Err(self.unexpected("')'"));
        }
        self.bump()?;
        Ok(arg)
    }
}

/// Parse `text` against `ctx`.
///
/// Errors carry the byte offset of the offending token.
pub fn parse(text: &str, ctx: &Arc<Context>) -> Result<Expression, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Empty);
    }
    let mut p = Parser {
        lex: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        at: 0,
        ctx,
        depth: 0,
    };
    p.bump()?;
    let root = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(Expression::from_parts(root, Arc::clone(ctx)))
}
