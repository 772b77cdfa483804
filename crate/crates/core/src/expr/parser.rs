//! Precedence-climbing recursive descent.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;
//! primary = number | ident | func "(" expr { "," expr } ")" | "(" expr ")" ;
//! ```

use super::ast::{BinOp, Expr, Func};
use super::lexer::{tokenize, Token, TokenKind};
use super::ExprError;

pub fn parse(tokens: &[Token]) -> Result<Expr, ExprError> {
    let end = tokens.last().map(|t| t.offset + t.lexeme.len()).unwrap_or(0);
    let mut p = Parser { tokens, pos: 0, end };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        let message = if t.kind == TokenKind::RParen {
            "unmatched ')'".to_string()
        } else {
            format!("expected operator or end of input, found '{}'", t.lexeme)
        };
        return Err(ExprError::Syntax {
            offset: t.offset,
            message,
        });
    }
    Ok(e)
}

/// Tokenizes and parses in one step.
pub fn parse_str(source: &str) -> Result<Expr, ExprError> {
    parse(&tokenize(source)?)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek().is_some_and(|t| t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn offset(&self) -> usize {
        self.peek().map(|t| t.offset).unwrap_or(self.end)
    }

    fn expected(&self, what: &str) -> ExprError {
        let message = match self.peek() {
            Some(t) => format!("expected {what}, found '{}'", t.lexeme),
            None => format!("expected {what}, found end of input"),
        };
        ExprError::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(TokenKind::Plus) {
                BinOp::Add
            } else if self.eat(TokenKind::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(TokenKind::Star) {
                BinOp::Mul
            } else if self.eat(TokenKind::Slash) {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(TokenKind::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.eat(TokenKind::Caret) {
            // right operand re-enters at unary level: 2^3^2 = 2^(3^2), 2^-1 allowed
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let Some(tok) = self.peek() else {
            return Err(self.expected("an operand"));
        };
        match tok.kind {
            TokenKind::Number(v) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            TokenKind::Ident => {
                self.pos += 1;
                match Func::from_name(&tok.lexeme) {
                    Some(func) => self.call(func, tok),
                    None => {
                        if self.peek().is_some_and(|t| t.kind == TokenKind::LParen) {
                            return Err(ExprError::Syntax {
                                offset: tok.offset,
                                message: format!("unknown function '{}'", tok.lexeme),
                            });
                        }
                        Ok(Expr::Var(tok.lexeme.clone()))
                    }
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(TokenKind::RParen) {
                    return Err(self.unclosed(tok));
                }
                Ok(inner)
            }
            _ => Err(self.expected("an operand")),
        }
    }

    fn call(&mut self, func: Func, name: &Token) -> Result<Expr, ExprError> {
        let Some(open) = self.peek().filter(|t| t.kind == TokenKind::LParen) else {
            return Err(ExprError::Syntax {
                offset: self.offset(),
                message: format!("expected '(' after function '{}'", func.name()),
            });
        };
        self.pos += 1;
        let mut args = vec![self.expr()?];
        while self.eat(TokenKind::Comma) {
            args.push(self.expr()?);
        }
        if !self.eat(TokenKind::RParen) {
            return Err(self.unclosed(open));
        }
        if args.len() != func.arity() {
            return Err(ExprError::Syntax {
                offset: name.offset,
                message: format!(
                    "function '{}' takes {} argument(s), got {}",
                    func.name(),
                    func.arity(),
                    args.len()
                ),
            });
        }
        Ok(Expr::Call(func, args))
    }

    fn unclosed(&self, open: &Token) -> ExprError {
        match self.peek() {
            None => ExprError::Syntax {
                offset: open.offset,
                message: "unclosed parenthesis".to_string(),
            },
            Some(_) => self.expected("')'"),
        }
    }
}
