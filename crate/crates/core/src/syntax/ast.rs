use indexmap::IndexMap;

/// A parsed and resolved FSP compilation unit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpecAst {
    pub consts: IndexMap<String, Expr>,
    pub ranges: IndexMap<String, RangeDecl>,
    pub sets: IndexMap<String, Vec<LabelTemplate>>,
    /// Primitive processes and properties, in declaration order.
    pub processes: Vec<ProcessDecl>,
    pub progress: IndexMap<String, Vec<LabelTemplate>>,
    pub composites: IndexMap<String, Vec<ProcRef>>,
    pub(crate) values: IndexMap<String, i64>,
}

impl SpecAst {
    /// Evaluated value of a constant.
    pub fn const_value(&self, name: &str) -> Option<i64> {
        self.values.get(name).copied()
    }

    pub fn const_values(&self) -> &IndexMap<String, i64> {
        &self.values
    }

    pub fn process(&self, name: &str) -> Option<&ProcessDecl> {
        self.processes.iter().find(|p| p.name == name)
    }

    pub fn properties(&self) -> impl Iterator<Item = &ProcessDecl> {
        self.processes.iter().filter(|p| p.is_property)
    }

    /// Evaluated bounds of a named range.
    pub fn range_bounds(&self, name: &str) -> Option<(i64, i64)> {
        let decl = self.ranges.get(name)?;
        let lo = super::eval::eval_int(&decl.lo, &self.values).ok()?;
        let hi = super::eval::eval_int(&decl.hi, &self.values).ok()?;
        Some((lo, hi))
    }

    /// True if `name` is declared at top level in any namespace.
    pub fn is_declared(&self, name: &str) -> bool {
        self.consts.contains_key(name)
            || self.ranges.contains_key(name)
            || self.sets.contains_key(name)
            || self.progress.contains_key(name)
            || self.composites.contains_key(name)
            || self.process(name).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeDecl {
    pub lo: Expr,
    pub hi: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessDecl {
    pub name: String,
    pub locals: Vec<LocalDef>,
    pub alphabet_extension: Vec<LabelTemplate>,
    pub is_property: bool,
}

impl ProcessDecl {
    /// Local definition by name and index count; `P` and `P[i:R]` are distinct.
    pub fn local(&self, name: &str, arity: usize) -> Option<(usize, &LocalDef)> {
        self.locals
            .iter()
            .enumerate()
            .find(|(_, l)| l.name == name && l.params.len() == arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDef {
    pub name: String,
    pub params: Vec<Binder>,
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// A declared range or set.
    Named(String),
    /// An inline `lo..hi`.
    Span(Expr, Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Stop,
    Ref(ProcRef),
    Choice(Vec<Guarded>),
    If {
        cond: Expr,
        then: Box<Body>,
        otherwise: Option<Box<Body>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guarded {
    pub guard: Option<Expr>,
    pub label: LabelTemplate,
    pub next: Body,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcRef {
    pub name: String,
    pub args: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTemplate {
    pub parts: Vec<PartTemplate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartTemplate {
    pub name: String,
    pub indices: Vec<IndexTemplate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexTemplate {
    Expr(Expr),
    Span(Expr, Expr),
    Binder(Binder),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Mod => "%",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne => 3,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul | BinaryOp::Div | BinaryOp::Mod => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Ident(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Identifiers referenced anywhere in the expression.
    pub fn idents<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Int(_) => {}
            Expr::Ident(name) => out.push(name),
            Expr::Unary(_, e) => e.idents(out),
            Expr::Binary(_, a, b) => {
                a.idents(out);
                b.idents(out);
            }
            Expr::If(c, t, e) => {
                c.idents(out);
                t.idents(out);
                e.idents(out);
            }
        }
    }
}
