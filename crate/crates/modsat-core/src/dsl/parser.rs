//! Recursive-descent parser for the heuristic DSL.
//!
//! Grammar (statements):
//!   program   := stmt*
//!   stmt      := "let" IDENT "=" expr ";"
//!              | IDENT "=" expr ";"
//!              | IDENT "(" args ")" ";"
//!              | "if" "(" expr ")" block ("else" (block | if-stmt))?
//!              | "return" expr? ";"
//!              | "for_each_var" "(" IDENT ")" block
//!   block     := "{" stmt* "}"
//!
//! Expressions use C precedence: `||`, `&&`, equality, comparison,
//! additive, multiplicative, unary (`!`, `-`), primary.

use crate::dsl::ast::{BinOp, Call, Expr, Stmt, UnOp};
use crate::dsl::lexer::{Tok, Token};
use crate::dsl::{DiagCode, Diagnostic};

pub struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    pub fn new(tokens: &'a [Token]) -> Parser<'a> {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek2(&self) -> &Token {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn error_here(&self, message: String) -> Diagnostic {
        Diagnostic::new(DiagCode::SyntaxError, message, self.peek().span)
    }

    pub fn parse_program(&mut self) -> Result<Vec<Stmt>, Vec<Diagnostic>> {
        let mut stmts = Vec::new();
        while self.peek().tok != Tok::Eof {
            match self.parse_stmt() {
                Ok(s) => stmts.push(s),
                // One diagnostic per parse: recovery would need sync points
                // and the repair loop only consumes the first error anyway.
                Err(d) => return Err(vec![d]),
            }
        }
        Ok(stmts)
    }

    fn parse_stmt(&mut self) -> PResult<Stmt> {
        let span = self.peek().span;
        match self.peek().tok.clone() {
            Tok::Let => {
                self.advance();
                let name = self.expect_ident("local name after `let`")?;
                self.expect(Tok::Assign, "`=`")?;
                let value = self.parse_expr()?;
                self.expect(Tok::Semi, "`;`")?;
                Ok(Stmt::Let { name, value, span })
            }
            Tok::Return => {
                self.advance();
                if self.peek().tok == Tok::Semi {
                    self.advance();
                    Ok(Stmt::Return { value: None, span })
                } else {
                    let value = self.parse_expr()?;
                    self.expect(Tok::Semi, "`;`")?;
                    Ok(Stmt::Return {
                        value: Some(value),
                        span,
                    })
                }
            }
            Tok::If => self.parse_if(),
            Tok::ForEachVar => {
                self.advance();
                self.expect(Tok::LParen, "`(`")?;
                let name = self.expect_ident("loop variable")?;
                self.expect(Tok::RParen, "`)`")?;
                let body = self.parse_block()?;
                Ok(Stmt::ForEachVar { name, body, span })
            }
            Tok::Ident(name) => {
                if self.peek2().tok == Tok::Assign {
                    self.advance();
                    self.advance();
                    let value = self.parse_expr()?;
                    self.expect(Tok::Semi, "`;`")?;
                    Ok(Stmt::Assign { name, value, span })
                } else if self.peek2().tok == Tok::LParen {
                    self.advance();
                    let call = self.parse_call_args(name)?;
                    self.expect(Tok::Semi, "`;`")?;
                    Ok(Stmt::Call { call, span })
                } else {
                    self.advance();
                    Err(self.error_here(format!("expected `=` or `(` after identifier `{name}`")))
                }
            }
            _ => Err(self.error_here("expected statement".into())),
        }
    }

    fn parse_if(&mut self) -> PResult<Stmt> {
        let span = self.peek().span;
        self.expect(Tok::If, "`if`")?;
        self.expect(Tok::LParen, "`(`")?;
        let cond = self.parse_expr()?;
        self.expect(Tok::RParen, "`)`")?;
        let then_branch = self.parse_block()?;
        let else_branch = if self.peek().tok == Tok::Else {
            self.advance();
            if self.peek().tok == Tok::If {
                vec![self.parse_if()?]
            } else {
                self.parse_block()?
            }
        } else {
            Vec::new()
        };
        Ok(Stmt::If {
            cond,
            then_branch,
            else_branch,
            span,
        })
    }

    fn parse_block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut stmts = Vec::new();
        while self.peek().tok != Tok::RBrace {
            if self.peek().tok == Tok::Eof {
                return Err(self.error_here("unterminated block, expected `}`".into()));
            }
            stmts.push(self.parse_stmt()?);
        }
        self.advance();
        Ok(stmts)
    }

    fn expect_ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    fn parse_call_args(&mut self, name: String) -> PResult<Call> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.peek().tok != Tok::RParen {
            loop {
                args.push(self.parse_expr()?);
                if self.peek().tok == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(Call { name, args })
    }

    pub fn parse_expr(&mut self) -> PResult<Expr> {
        self.parse_or()
    }

    fn parse_or(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_and()?;
        while self.peek().tok == Tok::OrOr {
            let span = self.advance().span;
            let rhs = self.parse_and()?;
            lhs = Expr::Binary(BinOp::Or, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_equality()?;
        while self.peek().tok == Tok::AndAnd {
            let span = self.advance().span;
            let rhs = self.parse_equality()?;
            lhs = Expr::Binary(BinOp::And, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn parse_equality(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_comparison()?;
        loop {
            let op = match self.peek().tok {
                Tok::EqEq => BinOp::Eq,
                Tok::Ne => BinOp::Ne,
                _ => break,
            };
            let span = self.advance().span;
            let rhs = self.parse_comparison()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn parse_comparison(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_additive()?;
        loop {
            let op = match self.peek().tok {
                Tok::Lt => BinOp::Lt,
                Tok::Le => BinOp::Le,
                Tok::Gt => BinOp::Gt,
                Tok::Ge => BinOp::Ge,
                _ => break,
            };
            let span = self.advance().span;
            let rhs = self.parse_additive()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn parse_additive(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_multiplicative()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let span = self.advance().span;
            let rhs = self.parse_multiplicative()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn parse_multiplicative(&mut self) -> PResult<Expr> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Percent => BinOp::Rem,
                _ => break,
            };
            let span = self.advance().span;
            let rhs = self.parse_unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        let span = self.peek().span;
        match self.peek().tok {
            Tok::Bang => {
                self.advance();
                let e = self.parse_unary()?;
                Ok(Expr::Unary(UnOp::Not, Box::new(e), span))
            }
            Tok::Minus => {
                self.advance();
                let e = self.parse_unary()?;
                Ok(Expr::Unary(UnOp::Neg, Box::new(e), span))
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> PResult<Expr> {
        let span = self.peek().span;
        match self.peek().tok.clone() {
            Tok::Int(v) => {
                self.advance();
                Ok(Expr::Int(v, span))
            }
            Tok::Real(v) => {
                self.advance();
                Ok(Expr::Real(v, span))
            }
            Tok::True => {
                self.advance();
                Ok(Expr::Bool(true, span))
            }
            Tok::False => {
                self.advance();
                Ok(Expr::Bool(false, span))
            }
            Tok::LParen => {
                self.advance();
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.advance();
                if self.peek().tok == Tok::LParen {
                    let call = self.parse_call_args(name)?;
                    Ok(Expr::Call(call, span))
                } else {
                    Ok(Expr::Ident(name, span))
                }
            }
            _ => Err(self.error_here("expected expression".into())),
        }
    }
}
