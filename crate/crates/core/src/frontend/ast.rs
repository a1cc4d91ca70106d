use serde::{Deserialize, Serialize};

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeExpr {
    Int,
    Bool,
    /// `str[N]`, or bare `str` when `None`.
    Str(Option<u32>),
    /// `T[N]`, or dynamic `T[]` when `None`.
    Array(Box<TypeExpr>, Option<u32>),
    /// Reference to an object of the named class.
    Class(String),
}

impl std::fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TypeExpr::Int => f.write_str("int"),
            TypeExpr::Bool => f.write_str("bool"),
            TypeExpr::Str(None) => f.write_str("str"),
            TypeExpr::Str(Some(n)) => write!(f, "str[{n}]"),
            TypeExpr::Array(elem, None) => write!(f, "{elem}[]"),
            TypeExpr::Array(elem, Some(n)) => write!(f, "{elem}[{n}]"),
            TypeExpr::Class(name) => f.write_str(name),
        }
    }
}

impl TypeExpr {
    pub fn is_dynamic(&self) -> bool {
        match self {
            TypeExpr::Array(_, None) => true,
            TypeExpr::Array(elem, Some(_)) => elem.is_dynamic(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub classes: Vec<ClassDecl>,
    pub main: Block,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassDecl {
    pub name: String,
    pub span: Span,
    pub fields: Vec<Field>,
    pub methods: Vec<Method>,
}

impl ClassDecl {
    pub fn method(&self, name: &str) -> Option<&Method> {
        self.methods.iter().find(|m| m.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub name: String,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Method {
    pub name: String,
    pub span: Span,
    pub params: Vec<Param>,
    /// Message name for the returned value, when the signature names it.
    pub ret_name: Option<String>,
    pub ret: TypeExpr,
    pub body: Block,
}

pub type Block = Vec<Stmt>;

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Let { name: String, ty: Option<TypeExpr>, value: Expr, span: Span },
    Assign { name: String, value: Expr, span: Span },
    Expr(Expr),
    Return(Option<Expr>, Span),
    If { cond: Expr, then: Block, otherwise: Block, span: Span },
    While { cond: Expr, body: Block, span: Span },
    For { var: String, iter: Expr, body: Block, span: Span },
    Spawn(Block, Span),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64, Span),
    Bool(bool, Span),
    Str(String, Span),
    Array(Vec<Expr>, Span),
    Var(String, Span),
    SelfRef(Span),
    Field(Box<Expr>, String, Span),
    Call { recv: Box<Expr>, method: String, args: Vec<Expr>, span: Span },
    New { class: String, args: Vec<Expr>, span: Span },
    Index(Box<Expr>, Box<Expr>, Span),
    Unary(String, Box<Expr>, Span),
    Binary(String, Box<Expr>, Box<Expr>, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Int(_, s)
            | Expr::Bool(_, s)
            | Expr::Str(_, s)
            | Expr::Array(_, s)
            | Expr::Var(_, s)
            | Expr::SelfRef(s)
            | Expr::Field(_, _, s)
            | Expr::Index(_, _, s)
            | Expr::Unary(_, _, s)
            | Expr::Binary(_, _, _, s) => *s,
            Expr::Call { span, .. } | Expr::New { span, .. } => *span,
        }
    }

    /// Visit this expression and every subexpression, outermost first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Array(items, _) => items.iter().for_each(|e| e.walk(f)),
            Expr::Field(e, _, _) | Expr::Unary(_, e, _) => e.walk(f),
            Expr::Index(a, b, _) | Expr::Binary(_, a, b, _) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::Call { recv, args, .. } => {
                recv.walk(f);
                args.iter().for_each(|e| e.walk(f));
            }
            Expr::New { args, .. } => args.iter().for_each(|e| e.walk(f)),
            _ => {}
        }
    }
}
