use super::{Pos, SmvErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Colon,
    Semi,
    Assign,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    DotDot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Assign => ":=",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::DotDot => "..",
            Tok::Not => "!",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug)]
pub struct Lexed {
    pub toks: Vec<(Tok, Pos)>,
    /// `-- @halt: name` pragma, if any.
    pub halt_pragma: Option<(String, Pos)>,
}

pub fn lex(src: &str) -> Result<Lexed, (SmvErrorKind, Pos)> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut halt_pragma = None;
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            let start = i + 2;
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            let body: String = chars[start..i].iter().collect();
            if let Some(rest) = body.trim().strip_prefix("@halt:") {
                halt_pragma = Some((rest.trim().to_string(), pos));
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '$' | '#')) {
                bump!();
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<i64>()
                .map_err(|_| (SmvErrorKind::Lex(format!("integer literal `{text}` too large")), pos))?;
            toks.push((Tok::Int(n), pos));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let next2 = chars.get(i + 2).copied();
        let (tok, len) = match (c, next, next2) {
            (':', Some('='), _) => (Tok::Assign, 2),
            (':', _, _) => (Tok::Colon, 1),
            (';', _, _) => (Tok::Semi, 1),
            ('(', _, _) => (Tok::LParen, 1),
            (')', _, _) => (Tok::RParen, 1),
            ('{', _, _) => (Tok::LBrace, 1),
            ('}', _, _) => (Tok::RBrace, 1),
            (',', _, _) => (Tok::Comma, 1),
            ('.', Some('.'), _) => (Tok::DotDot, 2),
            ('!', Some('='), _) => (Tok::Ne, 2),
            ('!', _, _) => (Tok::Not, 1),
            ('&', _, _) => (Tok::And, 1),
            ('|', _, _) => (Tok::Or, 1),
            ('-', Some('>'), _) => (Tok::Implies, 2),
            ('-', _, _) => (Tok::Minus, 1),
            ('<', Some('-'), Some('>')) => (Tok::Iff, 3),
            ('<', Some('='), _) => (Tok::Le, 2),
            ('<', _, _) => (Tok::Lt, 1),
            ('>', Some('='), _) => (Tok::Ge, 2),
            ('>', _, _) => (Tok::Gt, 1),
            ('=', _, _) => (Tok::Eq, 1),
            ('+', _, _) => (Tok::Plus, 1),
            _ => return Err((SmvErrorKind::Lex(format!("unexpected character `{c}`")), pos)),
        };
        for _ in 0..len {
            bump!();
        }
        toks.push((tok, pos));
    }
    toks.push((Tok::Eof, Pos { line, col }));
    Ok(Lexed { toks, halt_pragma })
}
