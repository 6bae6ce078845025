//! Lexer for the heuristic DSL.

use crate::dsl::ast::Span;
use crate::dsl::{DiagCode, Diagnostic};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Int(i64),
    Real(f64),
    Ident(String),
    If,
    Else,
    Return,
    Let,
    ForEachVar,
    True,
    False,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    AndAnd,
    OrOr,
    Bang,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(source: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! push {
        ($tok:expr, $span:expr) => {
            tokens.push(Token {
                tok: $tok,
                span: $span,
            })
        };
    }

    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                col += 2;
                loop {
                    if i + 1 >= chars.len() {
                        diags.push(Diagnostic::new(
                            DiagCode::LexError,
                            "unterminated block comment".into(),
                            span,
                        ));
                        i = chars.len();
                        break;
                    }
                    if chars[i] == '*' && chars[i + 1] == '/' {
                        i += 2;
                        col += 2;
                        break;
                    }
                    if chars[i] == '\n' {
                        line += 1;
                        col = 1;
                    } else {
                        col += 1;
                    }
                    i += 1;
                }
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut is_real = false;
                if i < chars.len()
                    && chars[i] == '.'
                    && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())
                {
                    is_real = true;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        is_real = true;
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                col += (i - start) as u32;
                if is_real {
                    match text.parse::<f64>() {
                        Ok(v) => push!(Tok::Real(v), span),
                        Err(_) => diags.push(Diagnostic::new(
                            DiagCode::LexError,
                            format!("bad real literal `{text}`"),
                            span,
                        )),
                    }
                } else {
                    match text.parse::<i64>() {
                        Ok(v) => push!(Tok::Int(v), span),
                        Err(_) => diags.push(Diagnostic::new(
                            DiagCode::LexError,
                            format!("integer literal `{text}` out of range"),
                            span,
                        )),
                    }
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += (i - start) as u32;
                let tok = match text.as_str() {
                    "if" => Tok::If,
                    "else" => Tok::Else,
                    "return" => Tok::Return,
                    "let" => Tok::Let,
                    "for_each_var" => Tok::ForEachVar,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(text),
                };
                push!(tok, span);
            }
            _ => {
                let pair = match (c, chars.get(i + 1)) {
                    ('<', Some('=')) => Some(Tok::Le),
                    ('>', Some('=')) => Some(Tok::Ge),
                    ('=', Some('=')) => Some(Tok::EqEq),
                    ('!', Some('=')) => Some(Tok::Ne),
                    ('&', Some('&')) => Some(Tok::AndAnd),
                    ('|', Some('|')) => Some(Tok::OrOr),
                    _ => None,
                };
                let advance = if let Some(tok) = pair {
                    push!(tok, span);
                    2
                } else {
                    let tok = match c {
                        '(' => Some(Tok::LParen),
                        ')' => Some(Tok::RParen),
                        '{' => Some(Tok::LBrace),
                        '}' => Some(Tok::RBrace),
                        ',' => Some(Tok::Comma),
                        ';' => Some(Tok::Semi),
                        '=' => Some(Tok::Assign),
                        '+' => Some(Tok::Plus),
                        '-' => Some(Tok::Minus),
                        '*' => Some(Tok::Star),
                        '/' => Some(Tok::Slash),
                        '%' => Some(Tok::Percent),
                        '<' => Some(Tok::Lt),
                        '>' => Some(Tok::Gt),
                        '!' => Some(Tok::Bang),
                        _ => None,
                    };
                    match tok {
                        Some(t) => push!(t, span),
                        None => diags.push(Diagnostic::new(
                            DiagCode::LexError,
                            format!("unexpected character `{c}`"),
                            span,
                        )),
                    }
                    1
                };
                i += advance;
                col += advance as u32;
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: Span::new(line, col),
    });
    if diags.is_empty() {
        Ok(tokens)
    } else {
        Err(diags)
    }
}
