use super::Pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
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
    Add,
    Sub,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Implies => "->",
            BinOp::Iff => "<->",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Bool(bool),
    Int(i64),
    Var(String),
    Next(String),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

/// Right-hand side of an assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rhs {
    Expr(Expr),
    Set(Vec<Expr>, Pos),
    Case(Vec<(Expr, Rhs)>, Pos),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeSpec {
    Boolean,
    Range(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub ty: TypeSpec,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssignKind {
    Init,
    Next,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assign {
    pub kind: AssignKind,
    pub target: String,
    pub rhs: Rhs,
    pub pos: Pos,
}

/// A parsed `MODULE main`, sections merged in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmvModule {
    pub vars: Vec<VarSpec>,
    pub assigns: Vec<Assign>,
    pub inits: Vec<Expr>,
    pub transes: Vec<Expr>,
    pub halt_pragma: Option<(String, Pos)>,
}
