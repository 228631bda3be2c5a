use crate::model::Role;

use super::{ParseError, Position};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    Eq,
    Semi,
    Comma,
    Colon,
    At,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Role(Role),
    /// `<*>`
    Coop,
    /// `()`
    Empty,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(v) => format!("number `{v}`"),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::At => "`@`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Role(r) => format!("`{}`", r.operator()),
            Tok::Coop => "`<*>`".into(),
            Tok::Empty => "`()`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Position,
}

struct Cursor<'a> {
    src: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek_str(&self, s: &str) -> bool {
        self.src[self.offset..].starts_with(s)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
            offset: self.offset,
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        src,
        offset: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        // whitespace and comments
        loop {
            match cur.peek() {
                Some(c) if c.is_whitespace() => {
                    cur.bump();
                }
                Some('/') if cur.peek_str("//") => {
                    while let Some(c) = cur.peek() {
                        if c == '\n' {
                            break;
                        }
                        cur.bump();
                    }
                }
                _ => break,
            }
        }
        let pos = cur.pos();
        let Some(c) = cur.peek() else {
            out.push(Token { tok: Tok::Eof, pos });
            return Ok(out);
        };
        let fixed: &[(&str, Tok)] = &[
            ("(+)", Tok::Role(Role::Activator)),
            ("(-)", Tok::Role(Role::Inhibitor)),
            ("(.)", Tok::Role(Role::GenericModifier)),
            ("()", Tok::Empty),
            ("<*>", Tok::Coop),
            ("<<", Tok::Role(Role::Reactant)),
            (">>", Tok::Role(Role::Product)),
        ];
        if let Some((text, tok)) = fixed.iter().find(|(text, _)| cur.peek_str(text)) {
            for _ in 0..text.len() {
                cur.bump();
            }
            out.push(Token { tok: tok.clone(), pos });
            continue;
        }
        let tok = match c {
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = cur.offset;
                while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    cur.bump();
                }
                Tok::Ident(src[start..cur.offset].to_string())
            }
            c if c.is_ascii_digit() => lex_number(&mut cur)?,
            _ => {
                cur.bump();
                match c {
                    '=' => Tok::Eq,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '@' => Tok::At,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    other => {
                        return Err(ParseError::at(pos, format!("unexpected character `{other}`")));
                    }
                }
            }
        };
        out.push(Token { tok, pos });
    }
}

fn lex_number(cur: &mut Cursor<'_>) -> Result<Tok, ParseError> {
    let pos = cur.pos();
    let start = cur.offset;
    let digits = |cur: &mut Cursor<'_>| {
        let mut n = 0;
        while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            cur.bump();
            n += 1;
        }
        n
    };
    digits(cur);
    if cur.peek() == Some('.') {
        cur.bump();
        digits(cur);
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let rest = &cur.src[cur.offset + 1..];
        let signed = rest.starts_with('+') || rest.starts_with('-');
        let after = if signed { &rest[1..] } else { rest };
        if after.starts_with(|c: char| c.is_ascii_digit()) {
            cur.bump();
            if signed {
                cur.bump();
            }
            digits(cur);
        }
    }
    let text = &cur.src[start..cur.offset];
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Tok::Number(v)),
        _ => Err(ParseError::at(pos, format!("invalid number `{text}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn role_operators_are_single_tokens() {
        assert_eq!(
            kinds("<< >> (+) (-) (.) <*> ()"),
            vec![
                Tok::Role(Role::Reactant),
                Tok::Role(Role::Product),
                Tok::Role(Role::Activator),
                Tok::Role(Role::Inhibitor),
                Tok::Role(Role::GenericModifier),
                Tok::Coop,
                Tok::Empty,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn parenthesised_negation_is_not_an_inhibitor() {
        assert_eq!(kinds("(-x)")[..3], [Tok::LParen, Tok::Minus, Tok::Ident("x".into())]);
    }

    #[test]
    fn numbers_and_comments() {
        assert_eq!(
            kinds("1.5e-3 // trailing\n42"),
            vec![Tok::Number(1.5e-3), Tok::Number(42.0), Tok::Eof]
        );
        // `2e` is the number 2 followed by identifier `e`
        assert_eq!(kinds("2e")[..2], [Tok::Number(2.0), Tok::Ident("e".into())]);
    }

    #[test]
    fn positions_are_one_based_and_crlf_safe() {
        let toks = tokenize("a\r\n  b").unwrap();
        assert_eq!((toks[1].pos.line, toks[1].pos.column), (2, 3));
    }
}
