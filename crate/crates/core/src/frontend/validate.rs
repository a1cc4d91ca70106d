use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::graph::ObjectGraph;
use super::parser::parse_ast;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DynamicLength,
    DynamicAppend,
    Concurrency,
    UnsupportedConstruct,
    NonSequentialCall,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::DynamicLength => "dynamic-length",
            ViolationKind::DynamicAppend => "dynamic-append",
            ViolationKind::Concurrency => "concurrency",
            ViolationKind::UnsupportedConstruct => "unsupported-construct",
            ViolationKind::NonSequentialCall => "non-sequential-call",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub span: Span,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.span.line, self.span.col, self.kind, self.message)
    }
}

const GROWING_METHODS: [&str; 6] = ["append", "push", "extend", "insert", "pop", "remove"];

/// Admissibility check. Returns the violations sorted by position; an empty
/// list means the program can be mapped to sequential hardware.
pub fn validate_constraints(graph: &ObjectGraph, source: &str) -> Vec<ConstraintViolation> {
    let mut found = BTreeSet::new();
    let mut add = |span: Span, kind: ViolationKind, message: String| {
        found.insert(ConstraintViolation { span, kind, message });
    };

    if let Ok(program) = parse_ast(source) {
        for class in &program.classes {
            for field in &class.fields {
                check_type(&field.ty, field.span, &format!("field `{}.{}`", class.name, field.name), &mut add);
            }
            for m in &class.methods {
                for p in &m.params {
                    check_type(&p.ty, p.span, &format!("parameter `{}` of `{}.{}`", p.name, class.name, m.name), &mut add);
                }
                check_type(&m.ret, m.span, &format!("return type of `{}.{}`", class.name, m.name), &mut add);
                let mut walker = Walker { graph, class: Some(class), add: &mut add };
                walker.block(&m.body);
            }
        }
        let mut walker = Walker { graph, class: None, add: &mut add };
        walker.block(&program.main);
    }

    for edge in &graph.edges {
        let what = format!("call `{}.{}` from `{}`", edge.callee, edge.method, edge.caller);
        if edge.conditional {
            add(edge.span, ViolationKind::NonSequentialCall, format!("{what} is issued conditionally"));
        }
        if edge.in_loop {
            add(edge.span, ViolationKind::UnsupportedConstruct, format!("{what} is issued inside a loop"));
        }
        let carries_object = edge.params.iter().map(|(_, t)| t).chain([&edge.ret]).any(mentions_class);
        if carries_object {
            add(edge.span, ViolationKind::UnsupportedConstruct, format!("{what} transmits an object reference"));
        }
    }
    for (span, target) in &graph.recursive_calls {
        add(*span, ViolationKind::UnsupportedConstruct, format!("recursive call to `{target}`"));
    }
    found.into_iter().collect()
}

fn mentions_class(ty: &TypeExpr) -> bool {
    match ty {
        TypeExpr::Class(_) => true,
        TypeExpr::Array(elem, _) => mentions_class(elem),
        _ => false,
    }
}

fn check_type(ty: &TypeExpr, span: Span, what: &str, add: &mut impl FnMut(Span, ViolationKind, String)) {
    if ty.is_dynamic() {
        add(span, ViolationKind::DynamicLength, format!("{what} has variable-length type `{ty}`"));
    }
}

struct Walker<'a, F> {
    graph: &'a ObjectGraph,
    class: Option<&'a ClassDecl>,
    add: &'a mut F,
}

impl<F: FnMut(Span, ViolationKind, String)> Walker<'_, F> {
    fn block(&mut self, block: &Block) {
        let mut in_spawn_run = false;
        for stmt in block {
            let is_spawn = matches!(stmt, Stmt::Spawn(..));
            if is_spawn && !in_spawn_run {
                (self.add)(stmt_span(stmt), ViolationKind::Concurrency, "concurrent method calls".to_string());
            }
            in_spawn_run = is_spawn;
            match stmt {
                Stmt::Let { name, ty, value, span } => {
                    if let Some(ty) = ty {
                        check_type(ty, *span, &format!("local `{name}`"), self.add);
                    }
                    self.expr(value);
                }
                Stmt::Assign { value, .. } | Stmt::Expr(value) => self.expr(value),
                Stmt::Return(value, _) => {
                    if let Some(v) = value {
                        self.expr(v);
                    }
                }
                Stmt::If { cond, then, otherwise, .. } => {
                    self.expr(cond);
                    self.block(then);
                    self.block(otherwise);
                }
                Stmt::While { cond, body, .. } => {
                    self.expr(cond);
                    self.block(body);
                }
                Stmt::For { iter, body, .. } => {
                    self.expr(iter);
                    self.block(body);
                }
                Stmt::Spawn(body, _) => self.block(body),
            }
        }
    }

    fn expr(&mut self, e: &Expr) {
        let mut growing = Vec::new();
        e.walk(&mut |sub| {
            if let Expr::Call { recv, method, span, .. } = sub {
                if GROWING_METHODS.contains(&method.as_str()) {
                    growing.push((recv, method, *span));
                }
            }
        });
        for (recv, method, span) in growing {
            if !self.is_object(recv) {
                (self.add)(span, ViolationKind::DynamicAppend, format!("`{method}` changes the length of a value"));
            }
        }
    }

    fn is_object(&self, recv: &Expr) -> bool {
        match recv {
            Expr::SelfRef(_) => true,
            Expr::Var(name, _) => self.graph.object(name).is_some(),
            Expr::Field(inner, field, _) => {
                matches!(**inner, Expr::SelfRef(_))
                    && self
                        .class
                        .and_then(|c| c.fields.iter().find(|f| &f.name == field))
                        .is_some_and(|f| matches!(f.ty, TypeExpr::Class(_)))
            }
            _ => false,
        }
    }
}

fn stmt_span(stmt: &Stmt) -> Span {
    match stmt {
        Stmt::Let { span, .. }
        | Stmt::Assign { span, .. }
        | Stmt::If { span, .. }
        | Stmt::While { span, .. }
        | Stmt::For { span, .. } => *span,
        Stmt::Return(_, span) | Stmt::Spawn(_, span) => *span,
        Stmt::Expr(e) => e.span(),
    }
}
