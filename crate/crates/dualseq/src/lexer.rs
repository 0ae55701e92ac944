//! Tokens of the document format, with line and column positions.

use num_bigint::BigInt;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    Arrow,
    Slash,
    NegInf,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Comma => f.write_str("','"),
            Tok::Colon => f.write_str("':'"),
            Tok::Equals => f.write_str("'='"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::NegInf => f.write_str("'-inf'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

pub fn lex(src: &str) -> Result<Vec<Token>, CliError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| CliError::Parse { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut push = |tok, len: usize| {
            out.push(Token { tok, pos });
            len
        };
        let len = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '[' => push(Tok::LBracket, 1),
            ']' => push(Tok::RBracket, 1),
            '{' => push(Tok::LBrace, 1),
            '}' => push(Tok::RBrace, 1),
            ',' => push(Tok::Comma, 1),
            ':' => push(Tok::Colon, 1),
            '=' => push(Tok::Equals, 1),
            '/' => push(Tok::Slash, 1),
            c if is_minus(c) && chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2),
            c if is_minus(c) || c == '+' || c.is_ascii_digit() => {
                let neg = is_minus(c);
                let start = if c.is_ascii_digit() { i } else { i + 1 };
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    let word: String = chars[start..].iter().take_while(|c| c.is_ascii_alphabetic()).collect();
                    if word == "inf" {
                        let tok = if neg { Tok::NegInf } else { Tok::Ident("inf".into()) };
                        push(tok, 4)
                    } else {
                        return Err(err(line, col, format!("expected a number after '{c}'")));
                    }
                } else {
                    let digits: String = chars[start..j].iter().collect();
                    let mut n: BigInt = digits.parse().expect("ascii digits");
                    if neg {
                        n = -n;
                    }
                    push(Tok::Int(n), j - i)
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                push(Tok::Ident(chars[i..j].iter().collect()), j - i)
            }
            other => return Err(err(line, col, format!("unexpected character '{other}'"))),
        };
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
