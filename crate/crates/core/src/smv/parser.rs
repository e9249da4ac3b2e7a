use super::ast::*;
use super::lexer::{lex, Tok};
use super::{Pos, SmvErrorKind};

const KEYWORDS: &[&str] =
    &["MODULE", "main", "VAR", "ASSIGN", "INIT", "TRANS", "boolean", "init", "next", "case", "esac", "TRUE", "FALSE"];

type PResult<T> = Result<T, (SmvErrorKind, Pos)>;

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

pub fn parse(src: &str) -> PResult<SmvModule> {
    let lexed = lex(src)?;
    let mut p = Parser { toks: lexed.toks, at: 0 };
    let mut module = p.module()?;
    module.halt_pragma = lexed.halt_pragma;
    Ok(module)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err((SmvErrorKind::Syntax(format!("expected {wanted}, found {}", self.peek().describe())), self.pos()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Pos> {
        if self.is_kw(kw) {
            Ok(self.advance().1)
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let pos = self.advance().1;
                Ok((s, pos))
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = if *self.peek() == Tok::Minus {
            self.advance();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(if neg { -n } else { n })
            }
            _ => self.unexpected("integer"),
        }
    }

    fn at_section_start(&self) -> bool {
        ["VAR", "ASSIGN", "INIT", "TRANS"].iter().any(|k| self.is_kw(k)) || *self.peek() == Tok::Eof
    }

    fn module(&mut self) -> PResult<SmvModule> {
        self.expect_kw("MODULE")?;
        self.expect_kw("main")?;
        let mut m = SmvModule::default();
        if *self.peek() == Tok::Eof {
            return self.unexpected("a section (VAR, ASSIGN, INIT or TRANS)");
        }
        while *self.peek() != Tok::Eof {
            if self.is_kw("VAR") {
                self.advance();
                loop {
                    m.vars.push(self.var_decl()?);
                    if self.at_section_start() {
                        break;
                    }
                }
            } else if self.is_kw("ASSIGN") {
                self.advance();
                loop {
                    m.assigns.push(self.assign()?);
                    if self.at_section_start() {
                        break;
                    }
                }
            } else if self.is_kw("INIT") {
                self.advance();
                m.inits.push(self.expr()?);
                self.expect(Tok::Semi)?;
            } else if self.is_kw("TRANS") {
                self.advance();
                m.transes.push(self.expr()?);
                self.expect(Tok::Semi)?;
            } else {
                return self.unexpected("a section (VAR, ASSIGN, INIT or TRANS)");
            }
        }
        Ok(m)
    }

    fn var_decl(&mut self) -> PResult<VarSpec> {
        let (name, pos) = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = if self.is_kw("boolean") {
            self.advance();
            TypeSpec::Boolean
        } else {
            let lo = self.int()?;
            self.expect(Tok::DotDot)?;
            let hi = self.int()?;
            TypeSpec::Range(lo, hi)
        };
        self.expect(Tok::Semi)?;
        Ok(VarSpec { name, ty, pos })
    }

    fn assign(&mut self) -> PResult<Assign> {
        let pos = self.pos();
        let kind = if self.is_kw("init") {
            AssignKind::Init
        } else if self.is_kw("next") {
            AssignKind::Next
        } else {
            return self.unexpected("`init(` or `next(`");
        };
        self.advance();
        self.expect(Tok::LParen)?;
        let (target, _) = self.ident()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Assign)?;
        let rhs = self.rhs()?;
        self.expect(Tok::Semi)?;
        Ok(Assign { kind, target, rhs, pos })
    }

    fn rhs(&mut self) -> PResult<Rhs> {
        let pos = self.pos();
        if *self.peek() == Tok::LBrace {
            self.advance();
            let mut items = vec![self.expr()?];
            while *self.peek() == Tok::Comma {
                self.advance();
                items.push(self.expr()?);
            }
            self.expect(Tok::RBrace)?;
            Ok(Rhs::Set(items, pos))
        } else if self.is_kw("case") {
            self.advance();
            let mut arms = Vec::new();
            while !self.is_kw("esac") {
                if *self.peek() == Tok::Eof {
                    return self.unexpected("`esac`");
                }
                let guard = self.expr()?;
                self.expect(Tok::Colon)?;
                let body = self.rhs()?;
                self.expect(Tok::Semi)?;
                arms.push((guard, body));
            }
            if arms.is_empty() {
                return self.unexpected("a case arm");
            }
            self.advance();
            Ok(Rhs::Case(arms, pos))
        } else {
            Ok(Rhs::Expr(self.expr()?))
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.iff()
    }

    fn bin(lhs: Expr, op: BinOp, rhs: Expr) -> Expr {
        let pos = lhs.pos;
        Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos }
    }

    fn iff(&mut self) -> PResult<Expr> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.advance();
            let rhs = self.implies()?;
            lhs = Self::bin(lhs, BinOp::Iff, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> PResult<Expr> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.advance();
            let rhs = self.implies()?;
            return Ok(Self::bin(lhs, BinOp::Implies, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Expr> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.and()?;
            lhs = Self::bin(lhs, BinOp::Or, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Expr> {
        let mut lhs = self.cmp()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.cmp()?;
            lhs = Self::bin(lhs, BinOp::And, rhs);
        }
        Ok(lhs)
    }

    fn cmp(&mut self) -> PResult<Expr> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            Tok::Eq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(lhs),
        };
        self.advance();
        let rhs = self.additive()?;
        Ok(Self::bin(lhs, op, rhs))
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Self::bin(lhs, op, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek() {
            Tok::Not => {
                self.advance();
                let inner = self.unary()?;
                Ok(Expr { kind: ExprKind::Not(Box::new(inner)), pos })
            }
            Tok::Minus => Ok(Expr { kind: ExprKind::Int(self.int()?), pos }),
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                ExprKind::Int(n)
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Tok::Ident(s) if s == "TRUE" || s == "FALSE" => {
                self.advance();
                ExprKind::Bool(s == "TRUE")
            }
            Tok::Ident(s) if s == "next" => {
                self.advance();
                self.expect(Tok::LParen)?;
                let (name, _) = self.ident()?;
                self.expect(Tok::RParen)?;
                ExprKind::Next(name)
            }
            Tok::Ident(_) => ExprKind::Var(self.ident()?.0),
            _ => return self.unexpected("expression"),
        };
        Ok(Expr { kind, pos })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(src: &str) -> Expr {
        let full = format!("MODULE main VAR x: boolean; INIT {src};");
        parse(&full).unwrap().inits.remove(0)
    }

    fn shape(e: &Expr) -> String {
        match &e.kind {
            ExprKind::Bool(b) => b.to_string(),
            ExprKind::Int(n) => n.to_string(),
            ExprKind::Var(v) => v.clone(),
            ExprKind::Next(v) => format!("next({v})"),
            ExprKind::Not(x) => format!("!{}", shape(x)),
            ExprKind::Bin(op, a, b) => format!("({} {} {})", shape(a), op.symbol(), shape(b)),
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(shape(&e("a & b | c")), "((a & b) | c)");
        assert_eq!(shape(&e("!a & b")), "(!a & b)");
        assert_eq!(shape(&e("a -> b -> c")), "(a -> (b -> c))");
        assert_eq!(shape(&e("a -> b <-> c")), "((a -> b) <-> c)");
        assert_eq!(shape(&e("x + 1 = y & z < 3")), "(((x + 1) = y) & (z < 3))");
        assert_eq!(shape(&e("next(pc) = pc - 1")), "(next(pc) = (pc - 1))");
    }

    #[test]
    fn sections_and_assigns() {
        let m = parse(
            "MODULE main\nVAR b: boolean; n: 0..3;\nASSIGN init(b) := FALSE;\n next(n) := case b : 1; TRUE : {2, 3}; esac;\nTRANS TRUE;",
        )
        .unwrap();
        assert_eq!(m.vars.len(), 2);
        assert_eq!(m.vars[1].ty, TypeSpec::Range(0, 3));
        assert_eq!(m.assigns.len(), 2);
        assert!(matches!(&m.assigns[1].rhs, Rhs::Case(arms, _) if arms.len() == 2));
        assert_eq!(m.transes.len(), 1);
    }

    #[test]
    fn syntax_error_position() {
        let (kind, pos) = parse("MODULE main\nVAR b boolean;").unwrap_err();
        assert!(matches!(kind, SmvErrorKind::Syntax(_)));
        assert_eq!(pos, Pos { line: 2, col: 7 });
    }

    #[test]
    fn missing_header_rejected() {
        assert!(parse("VAR b: boolean;").is_err());
        assert!(parse("MODULE main").is_err());
    }
}
