use std::fmt;

use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Const,
    Range,
    Set,
    Property,
    Progress,
    When,
    If,
    Then,
    Else,
    Stop,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    DotDot,
    Colon,
    Arrow,
    Bar,
    BarBar,
    Assign,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    Bang,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Backslash,
    ShiftLeft,
    ShiftRight,
    At,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Int(n) => return write!(f, "integer `{n}`"),
            Tok::Const => "`const`",
            Tok::Range => "`range`",
            Tok::Set => "`set`",
            Tok::Property => "`property`",
            Tok::Progress => "`progress`",
            Tok::When => "`when`",
            Tok::If => "`if`",
            Tok::Then => "`then`",
            Tok::Else => "`else`",
            Tok::Stop => "`STOP`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::DotDot => "`..`",
            Tok::Colon => "`:`",
            Tok::Arrow => "`->`",
            Tok::Bar => "`|`",
            Tok::BarBar => "`||`",
            Tok::Assign => "`=`",
            Tok::EqEq => "`==`",
            Tok::NotEq => "`!=`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Gt => "`>`",
            Tok::Ge => "`>=`",
            Tok::AndAnd => "`&&`",
            Tok::Bang => "`!`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Slash => "`/`",
            Tok::Percent => "`%`",
            Tok::Backslash => "`\\`",
            Tok::ShiftLeft => "`<<`",
            Tok::ShiftRight => "`>>`",
            Tok::At => "`@`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Tokenizes FSP source. `//` and `/* */` comments are dropped, and so is
/// any line whose first non-blank characters are `---` (listing separators).
pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    let mut line_blank = true;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
                line_blank = true;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        let pos = Pos { line, col };
        let next = chars.get(i + 1).copied();

        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '/' && next == Some('*') {
            bump!();
            bump!();
            loop {
                if i >= chars.len() {
                    return Err(SyntaxError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: "unterminated block comment".into(),
                    });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
            continue;
        }
        if c == '-' && line_blank && next == Some('-') && chars.get(i + 2) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        line_blank = false;

        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "const" => Tok::Const,
                "range" => Tok::Range,
                "set" => Tok::Set,
                "property" => Tok::Property,
                "progress" => Tok::Progress,
                "when" => Tok::When,
                "if" => Tok::If,
                "then" => Tok::Then,
                "else" => Tok::Else,
                "STOP" => Tok::Stop,
                _ => Tok::Ident(word),
            };
            tokens.push(Token { tok, pos });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<i64>().map_err(|_| SyntaxError::Syntax {
                line: pos.line,
                col: pos.col,
                msg: format!("integer literal `{digits}` out of range"),
            })?;
            tokens.push(Token {
                tok: Tok::Int(value),
                pos,
            });
            continue;
        }

        let two = |a: char, b: char| c == a && next == Some(b);
        let (tok, len) = if two('.', '.') {
            (Tok::DotDot, 2)
        } else if two('-', '>') {
            (Tok::Arrow, 2)
        } else if two('|', '|') {
            (Tok::BarBar, 2)
        } else if two('=', '=') {
            (Tok::EqEq, 2)
        } else if two('!', '=') {
            (Tok::NotEq, 2)
        } else if two('<', '=') {
            (Tok::Le, 2)
        } else if two('>', '=') {
            (Tok::Ge, 2)
        } else if two('&', '&') {
            (Tok::AndAnd, 2)
        } else if two('<', '<') {
            (Tok::ShiftLeft, 2)
        } else if two('>', '>') {
            (Tok::ShiftRight, 2)
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                '|' => Tok::Bar,
                '=' => Tok::Assign,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '!' => Tok::Bang,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '%' => Tok::Percent,
                '\\' => Tok::Backslash,
                '@' => Tok::At,
                other => {
                    return Err(SyntaxError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            };
            (tok, 1)
        };
        for _ in 0..len {
            bump!();
        }
        tokens.push(Token { tok, pos });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(tokens)
}
