use std::collections::HashSet;

use super::ast::*;
use super::{HqError, HqErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Dot,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Star,
    Eq,
    Ne,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Minus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Dot => "`.`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn err<T>(loc: Loc, msg: impl Into<String>) -> Result<T, HqError> {
    Err(HqError { loc, kind: HqErrorKind::Syntax(msg.into()) })
}

fn lex(src: &str) -> Result<Vec<(Tok, Loc)>, HqError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut line, &mut col, 1);
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), loc));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col, 1);
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse() {
                Ok(n) => out.push((Tok::Int(n), loc)),
                Err(_) => return err(loc, format!("integer literal `{text}` too large")),
            }
            continue;
        }
        let peek = |o: usize| chars.get(i + o).copied();
        let (tok, n) = match c {
            '.' => (Tok::Dot, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '*' => (Tok::Star, 1),
            '=' => (Tok::Eq, 1),
            '!' if peek(1) == Some('=') => (Tok::Ne, 2),
            '!' | '¬' => (Tok::Not, 1),
            '/' if peek(1) == Some('\\') => (Tok::And, 2),
            '\\' if peek(1) == Some('/') => (Tok::Or, 2),
            '∧' | '&' => (Tok::And, 1),
            '∨' | '|' => (Tok::Or, 1),
            '-' if peek(1) == Some('>') => (Tok::Implies, 2),
            '-' => (Tok::Minus, 1),
            '→' => (Tok::Implies, 1),
            '<' if peek(1) == Some('-') && peek(2) == Some('>') => (Tok::Iff, 3),
            '↔' => (Tok::Iff, 1),
            _ => return err(loc, format!("unexpected character `{c}`")),
        };
        advance(&mut i, &mut line, &mut col, n);
        out.push((tok, loc));
    }
    out.push((Tok::Eof, Loc { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    at: usize,
}

pub fn parse(src: &str) -> Result<HyperFormula, HqError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let f = p.statement()?;
    if p.peek() != &Tok::Eof {
        return p.unexpected("end of formula");
    }
    if f.prefix.is_empty() {
        return err(Loc { line: 1, col: 1 }, "formula has no quantifier prefix");
    }
    let mut seen = HashSet::new();
    for (_, t) in &f.prefix {
        if !seen.insert(t.tid.clone()) {
            return Err(HqError { loc: Loc::default(), kind: HqErrorKind::DuplicateTid(t.tid.clone()) });
        }
    }
    check_closed(&f.body, &seen)?;
    Ok(f)
}

fn check_closed(e: &LtlExpr, bound: &HashSet<String>) -> Result<(), HqError> {
    let unbound = |tid: &str, loc: Loc| -> Result<(), HqError> {
        if bound.contains(tid) {
            Ok(())
        } else {
            Err(HqError { loc, kind: HqErrorKind::UnboundTid(tid.to_string()) })
        }
    };
    match e {
        LtlExpr::Prop { tid, loc, .. } => unbound(tid, *loc),
        LtlExpr::Cmp { lhs, rhs, loc, .. } => {
            for o in [lhs, rhs] {
                if let Operand::Var { tid, .. } = o {
                    unbound(tid, *loc)?;
                }
            }
            Ok(())
        }
        e => e.children().into_iter().try_for_each(|c| check_closed(c, bound)),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, off: usize) -> &Tok {
        &self.toks[(self.at + off).min(self.toks.len() - 1)].0
    }

    fn loc(&self) -> Loc {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, HqError> {
        err(self.loc(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, t: Tok) -> Result<(), HqError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&t.describe())
        }
    }

    fn is_quant(&self, off: usize) -> Option<Quant> {
        match self.peek_at(off) {
            Tok::Ident(s) if s == "forall" => Some(Quant::Forall),
            Tok::Ident(s) if s == "exists" => Some(Quant::Exists),
            _ => None,
        }
    }

    fn statement(&mut self) -> Result<HyperFormula, HqError> {
        if let Some(q) = self.is_quant(0) {
            self.bump();
            let tid = match self.bump() {
                Tok::Ident(s) => s,
                _ => {
                    self.at -= 1;
                    return self.unexpected("trace variable");
                }
            };
            self.expect(Tok::Dot)?;
            let mut inner = self.statement()?;
            inner.prefix.insert(0, (q, TraceVar { tid, position: 0 }));
            for (i, (_, t)) in inner.prefix.iter_mut().enumerate() {
                t.position = i;
            }
            return Ok(inner);
        }
        if *self.peek() == Tok::LParen && self.is_quant(1).is_some() {
            self.bump();
            let inner = self.statement()?;
            self.expect(Tok::RParen)?;
            return Ok(inner);
        }
        Ok(HyperFormula { prefix: Vec::new(), body: self.iff()? })
    }

    fn iff(&mut self) -> Result<LtlExpr, HqError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            lhs = LtlExpr::Iff(Box::new(lhs), Box::new(self.implies()?));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<LtlExpr, HqError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            return Ok(LtlExpr::Implies(Box::new(lhs), Box::new(self.implies()?)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<LtlExpr, HqError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = LtlExpr::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<LtlExpr, HqError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = LtlExpr::and(lhs, self.binary_temporal()?);
        }
        Ok(lhs)
    }

    /// `U` is an operator unless it is used as a variable name (`U[A]`).
    fn temporal_keyword(&self, names: &[&str]) -> Option<String> {
        match self.peek() {
            Tok::Ident(s) if names.contains(&s.as_str()) && *self.peek_at(1) != Tok::LBrack => Some(s.clone()),
            _ => None,
        }
    }

    fn binary_temporal(&mut self) -> Result<LtlExpr, HqError> {
        let lhs = self.unary()?;
        if let Some(op) = self.temporal_keyword(&["U", "R"]) {
            self.bump();
            let rhs = self.binary_temporal()?;
            return Ok(if op == "U" { LtlExpr::until(lhs, rhs) } else { LtlExpr::release(lhs, rhs) });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<LtlExpr, HqError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(LtlExpr::not(self.unary()?));
        }
        if let Some(op) = self.temporal_keyword(&["X", "F", "G"]) {
            self.bump();
            let inner = Box::new(self.unary()?);
            return Ok(match op.as_str() {
                "X" => LtlExpr::Next(inner),
                "F" => LtlExpr::Finally(inner),
                _ => LtlExpr::Globally(inner),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<LtlExpr, HqError> {
        let loc = self.loc();
        match self.peek().clone() {
            Tok::LParen => {
                if self.is_quant(1).is_some() {
                    return err(self.toks[self.at + 1].1, "quantifiers must form a prefix of the formula");
                }
                self.bump();
                let e = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Star => {
                self.bump();
                let lhs = self.operand()?;
                let op = match self.bump() {
                    Tok::Eq => CmpOp::Eq,
                    Tok::Ne => CmpOp::Ne,
                    _ => {
                        self.at -= 1;
                        return self.unexpected("`=` or `!=`");
                    }
                };
                let rhs = self.operand()?;
                self.expect(Tok::Star)?;
                Ok(LtlExpr::Cmp { op, lhs, rhs, loc })
            }
            Tok::Ident(s) if *self.peek_at(1) != Tok::LBrack && matches!(s.as_str(), "TRUE" | "true") => {
                self.bump();
                Ok(LtlExpr::True)
            }
            Tok::Ident(s) if *self.peek_at(1) != Tok::LBrack && matches!(s.as_str(), "FALSE" | "false") => {
                self.bump();
                Ok(LtlExpr::False)
            }
            Tok::Ident(_) => {
                let (var, tid) = self.indexed()?;
                Ok(LtlExpr::Prop { var, tid, loc })
            }
            _ => self.unexpected("formula"),
        }
    }

    fn indexed(&mut self) -> Result<(String, String), HqError> {
        let var = match self.bump() {
            Tok::Ident(s) => s,
            _ => {
                self.at -= 1;
                return self.unexpected("variable");
            }
        };
        self.expect(Tok::LBrack)?;
        let tid = match self.bump() {
            Tok::Ident(s) => s,
            _ => {
                self.at -= 1;
                return self.unexpected("trace variable");
            }
        };
        self.expect(Tok::RBrack)?;
        Ok((var, tid))
    }

    fn operand(&mut self) -> Result<Operand, HqError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Operand::Const(n))
            }
            Tok::Minus => {
                self.bump();
                match self.bump() {
                    Tok::Int(n) => Ok(Operand::Const(-n)),
                    _ => {
                        self.at -= 1;
                        self.unexpected("integer")
                    }
                }
            }
            Tok::Ident(_) => {
                let (var, tid) = self.indexed()?;
                Ok(Operand::Var { var, tid })
            }
            _ => self.unexpected("`var[tid]` or integer"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gni_from_grammar_section() {
        let f = parse("forall A. forall B. exists C. X(high[A] <-> high[C]) /\\ G(low[B] <-> low[C])").unwrap();
        assert_eq!(f.quantifiers(), [Quant::Forall, Quant::Forall, Quant::Exists]);
        assert_eq!(f.tids().collect::<Vec<_>>(), ["A", "B", "C"]);
        assert_eq!(f.prefix[2].1.position, 2);
        let want = LtlExpr::and(
            LtlExpr::next(LtlExpr::iff(LtlExpr::prop("high", "A"), LtlExpr::prop("high", "C"))),
            LtlExpr::Globally(Box::new(LtlExpr::iff(LtlExpr::prop("low", "B"), LtlExpr::prop("low", "C")))),
        );
        assert_eq!(f.body, want);
    }

    #[test]
    fn single_quantifier() {
        let f = parse("exists A. G halt[A]").unwrap();
        assert_eq!(f.quantifiers(), [Quant::Exists]);
        assert_eq!(f.body, LtlExpr::Globally(Box::new(LtlExpr::prop("halt", "A"))));
    }

    #[test]
    fn precedence_and_keywords() {
        let f = parse("forall A. a[A] U b[A] /\\ !c[A] -> X U[A]").unwrap();
        assert_eq!(f.body.to_string(), "(((a[A] U b[A]) /\\ !c[A]) -> X U[A])");
        let f = parse("forall A. a[A] U b[A] U c[A]").unwrap();
        assert_eq!(f.body.to_string(), "(a[A] U (b[A] U c[A]))");
        let f = parse("forall A. a[A] <-> b[A] -> c[A] \\/ d[A]").unwrap();
        assert_eq!(f.body.to_string(), "(a[A] <-> (b[A] -> (c[A] \\/ d[A])))");
    }

    #[test]
    fn unicode_and_comments() {
        let f = parse("// comment\nforall A. (PC[A] ∧ halt[A]) → ¬x[A]").unwrap();
        assert_eq!(f.body.to_string(), "((PC[A] /\\ halt[A]) -> !x[A])");
    }

    #[test]
    fn comparisons_with_literals() {
        let f = parse("forall A. exists B. (*PC[A] = 10*) /\\ *3 != PC[B]*").unwrap();
        assert_eq!(f.body.to_string(), "(*PC[A] = 10* /\\ *3 != PC[B]*)");
    }

    #[test]
    fn parenthesised_statement() {
        let f = parse("forall A. (exists B. (a[A] <-> a[B]))").unwrap();
        assert_eq!(f.quantifiers(), [Quant::Forall, Quant::Exists]);
    }

    #[test]
    fn display_round_trips() {
        let src = "forall A. exists B. G(*x[A] != x[B]* -> (a[A] R F !b[B])) \\/ TRUE";
        let f = parse(src).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn errors() {
        let e = parse("forall A. a[B]").unwrap_err();
        assert!(matches!(e.kind, HqErrorKind::UnboundTid(ref t) if t == "B"));
        assert!(matches!(parse("forall A. forall A. a[A]").unwrap_err().kind, HqErrorKind::DuplicateTid(_)));
        assert!(matches!(parse("a[A]").unwrap_err().kind, HqErrorKind::Syntax(_)));
        let e = parse("forall A.\n  a[A] /\\").unwrap_err();
        assert_eq!((e.loc.line, e.loc.col), (2, 10));
        assert!(parse("forall A. a[A] /\\ (exists B. b[B])").is_err());
        assert!(parse("forall A. *a[A] < 3*").is_err());
    }
}
