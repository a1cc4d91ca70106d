use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::parser::parse_ast;
use super::FrontendError;

/// Object-typed field and the object it was bound to at construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldBinding {
    pub name: String,
    pub ty: TypeExpr,
    pub object: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSig {
    pub name: String,
    pub params: Vec<(String, TypeExpr)>,
    pub ret_name: Option<String>,
    pub ret: TypeExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectDecl {
    pub name: String,
    pub class: String,
    pub fields: Vec<FieldBinding>,
    pub methods: Vec<MethodSig>,
}

/// One object-to-object method invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallEdge {
    pub caller: String,
    pub callee: String,
    pub method: String,
    pub params: Vec<(String, TypeExpr)>,
    pub ret_name: Option<String>,
    pub ret: TypeExpr,
    pub order: usize,
    pub span: Span,
    /// Issued under an `if`/`else` arm.
    pub conditional: bool,
    /// Issued inside a loop body.
    pub in_loop: bool,
}

/// Request or response of an edge, in execution order. A response follows
/// every call the callee makes while serving the request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallEvent {
    pub edge: usize,
    pub response: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectGraph {
    pub objects: Vec<ObjectDecl>,
    pub edges: Vec<CallEdge>,
    pub events: Vec<CallEvent>,
    /// Characters in the longest string literal; bounds bare `str` values.
    pub max_literal_chars: u32,
    /// Calls that re-entered a method already on the static call stack.
    pub recursive_calls: Vec<(Span, String)>,
}

impl ObjectGraph {
    pub fn object(&self, name: &str) -> Option<&ObjectDecl> {
        self.objects.iter().find(|o| o.name == name)
    }

    /// Edges between `caller` and `callee`, in program order.
    pub fn edges_between<'a>(&'a self, caller: &'a str, callee: &'a str) -> impl Iterator<Item = &'a CallEdge> + 'a {
        self.edges.iter().filter(move |e| e.caller == caller && e.callee == callee)
    }
}

/// Parse a program and statically execute its entry block to collect the
/// object graph.
pub fn parse_program(source: &str) -> Result<ObjectGraph, FrontendError> {
    let program = parse_ast(source)?;
    build_graph(&program)
}

#[derive(Clone, Copy, Default)]
struct Context {
    branch: usize,
    looping: usize,
}

struct Builder<'p> {
    classes: HashMap<&'p str, &'p ClassDecl>,
    graph: ObjectGraph,
    stack: Vec<(String, String)>,
}

/// Local variables of one frame; `Some(obj)` for object references.
type Env = HashMap<String, Option<String>>;

pub(crate) fn build_graph(program: &Program) -> Result<ObjectGraph, FrontendError> {
    let mut classes = HashMap::new();
    for class in &program.classes {
        if classes.insert(class.name.as_str(), class).is_some() {
            return Err(dup(&class.name, class.span));
        }
        let mut seen = BTreeMap::new();
        for m in &class.methods {
            if seen.insert(m.name.as_str(), ()).is_some() {
                return Err(dup(&m.name, m.span));
            }
        }
    }
    let mut b = Builder { classes, graph: ObjectGraph::default(), stack: Vec::new() };
    b.graph.max_literal_chars = longest_literal(program);
    let mut env = Env::new();
    b.block(&program.main, None, &mut env, Context::default())?;
    Ok(b.graph)
}

fn dup(name: &str, span: Span) -> FrontendError {
    FrontendError::Duplicate { name: name.to_string(), line: span.line, col: span.col }
}

fn longest_literal(program: &Program) -> u32 {
    let mut longest = 0;
    let mut visit = |e: &Expr| {
        if let Expr::Str(s, _) = e {
            longest = longest.max(s.chars().count() as u32);
        }
    };
    let mut blocks: Vec<&Block> = vec![&program.main];
    blocks.extend(program.classes.iter().flat_map(|c| c.methods.iter().map(|m| &m.body)));
    while let Some(block) = blocks.pop() {
        for stmt in block {
            match stmt {
                Stmt::Let { value, .. } | Stmt::Assign { value, .. } | Stmt::Expr(value) => value.walk(&mut visit),
                Stmt::Return(value, _) => {
                    if let Some(v) = value {
                        v.walk(&mut visit);
                    }
                }
                Stmt::If { cond, then, otherwise, .. } => {
                    cond.walk(&mut visit);
                    blocks.push(then);
                    blocks.push(otherwise);
                }
                Stmt::While { cond, body, .. } => {
                    cond.walk(&mut visit);
                    blocks.push(body);
                }
                Stmt::For { iter, body, .. } => {
                    iter.walk(&mut visit);
                    blocks.push(body);
                }
                Stmt::Spawn(body, _) => blocks.push(body),
            }
        }
    }
    longest
}

impl<'p> Builder<'p> {
    /// `me` is the object whose method is executing, `None` in the entry block.
    fn block(&mut self, block: &'p Block, me: Option<&str>, env: &mut Env, ctx: Context) -> Result<(), FrontendError> {
        for stmt in block {
            match stmt {
                Stmt::Let { name, value, span, .. } => {
                    if me.is_none() {
                        if let Expr::New { class, args, span: new_span } = value {
                            self.instantiate(name, class, args, *span, *new_span, env, ctx)?;
                            continue;
                        }
                    }
                    let v = self.expr(value, me, env, ctx)?;
                    env.insert(name.clone(), v);
                }
                Stmt::Assign { name, value, .. } => {
                    let v = self.expr(value, me, env, ctx)?;
                    env.insert(name.clone(), v);
                }
                Stmt::Expr(e) => {
                    self.expr(e, me, env, ctx)?;
                }
                Stmt::Return(value, _) => {
                    if let Some(v) = value {
                        self.expr(v, me, env, ctx)?;
                    }
                }
                Stmt::If { cond, then, otherwise, .. } => {
                    self.expr(cond, me, env, ctx)?;
                    let inner = Context { branch: ctx.branch + 1, ..ctx };
                    self.block(then, me, &mut env.clone(), inner)?;
                    self.block(otherwise, me, &mut env.clone(), inner)?;
                }
                Stmt::While { cond, body, .. } => {
                    let inner = Context { looping: ctx.looping + 1, ..ctx };
                    self.expr(cond, me, env, inner)?;
                    self.block(body, me, &mut env.clone(), inner)?;
                }
                Stmt::For { var, iter, body, .. } => {
                    self.expr(iter, me, env, ctx)?;
                    let inner = Context { looping: ctx.looping + 1, ..ctx };
                    let mut scope = env.clone();
                    scope.insert(var.clone(), None);
                    self.block(body, me, &mut scope, inner)?;
                }
                Stmt::Spawn(body, _) => self.block(body, me, &mut env.clone(), ctx)?,
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn instantiate(
        &mut self,
        name: &str,
        class: &str,
        args: &'p [Expr],
        span: Span,
        new_span: Span,
        env: &mut Env,
        ctx: Context,
    ) -> Result<(), FrontendError> {
        let decl = *self.classes.get(class).ok_or_else(|| FrontendError::UnknownClass {
            name: class.to_string(),
            line: new_span.line,
            col: new_span.col,
        })?;
        if self.graph.object(name).is_some() {
            return Err(dup(name, span));
        }
        let mut bound = Vec::new();
        for arg in args {
            if let Some(obj) = self.expr(arg, None, env, ctx)? {
                bound.push(obj);
            }
        }
        let mut bound = bound.into_iter();
        let fields = decl
            .fields
            .iter()
            .filter(|f| matches!(f.ty, TypeExpr::Class(_)))
            .map(|f| FieldBinding { name: f.name.clone(), ty: f.ty.clone(), object: bound.next() })
            .collect();
        let methods = decl
            .methods
            .iter()
            .map(|m| MethodSig {
                name: m.name.clone(),
                params: m.params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect(),
                ret_name: m.ret_name.clone(),
                ret: m.ret.clone(),
            })
            .collect();
        self.graph.objects.push(ObjectDecl { name: name.to_string(), class: class.to_string(), fields, methods });
        env.insert(name.to_string(), Some(name.to_string()));
        Ok(())
    }

    /// Evaluate an expression for its effects; yields the object it refers
    /// to, if any.
    fn expr(&mut self, e: &'p Expr, me: Option<&str>, env: &mut Env, ctx: Context) -> Result<Option<String>, FrontendError> {
        match e {
            Expr::Int(..) | Expr::Bool(..) | Expr::Str(..) => Ok(None),
            Expr::Array(items, _) => {
                for item in items {
                    self.expr(item, me, env, ctx)?;
                }
                Ok(None)
            }
            Expr::Var(name, span) => match env.get(name) {
                Some(v) => Ok(v.clone()),
                None => Err(FrontendError::UnknownObject { name: name.clone(), line: span.line, col: span.col }),
            },
            Expr::SelfRef(span) => match me {
                Some(obj) => Ok(Some(obj.to_string())),
                None => Err(FrontendError::syntax(*span, "`self` outside of a method")),
            },
            Expr::Field(recv, field, span) => {
                let Some(obj) = self.expr(recv, me, env, ctx)? else {
                    return Ok(None);
                };
                let decl = self.graph.object(&obj).expect("objects are registered before use");
                match decl.fields.iter().find(|f| &f.name == field) {
                    Some(binding) => match &binding.object {
                        Some(target) => Ok(Some(target.clone())),
                        None => Err(FrontendError::UnknownObject {
                            name: format!("{obj}.{field}"),
                            line: span.line,
                            col: span.col,
                        }),
                    },
                    None => Ok(None),
                }
            }
            Expr::Index(a, b, _) | Expr::Binary(_, a, b, _) => {
                self.expr(a, me, env, ctx)?;
                self.expr(b, me, env, ctx)?;
                Ok(None)
            }
            Expr::Unary(_, a, _) => {
                self.expr(a, me, env, ctx)?;
                Ok(None)
            }
            Expr::New { span, .. } => Err(FrontendError::syntax(*span, "objects may only be created in the entry block")),
            Expr::Call { recv, method, args, span } => {
                let target = self.expr(recv, me, env, ctx)?;
                for arg in args {
                    self.expr(arg, me, env, ctx)?;
                }
                match target {
                    Some(target) => self.call(me, &target, method, *span, ctx),
                    // Method on a plain value, e.g. an array builtin.
                    None => Ok(None),
                }
            }
        }
    }

    fn call(&mut self, me: Option<&str>, target: &str, method: &str, span: Span, ctx: Context) -> Result<Option<String>, FrontendError> {
        let class_name = self.graph.object(target).expect("registered").class.clone();
        let class = self.classes[class_name.as_str()];
        let Some(m) = class.method(method) else {
            return Err(FrontendError::UnknownMethod {
                object: target.to_string(),
                class: class_name,
                method: method.to_string(),
                line: span.line,
                col: span.col,
            });
        };
        let mut edge = None;
        if let Some(caller) = me.filter(|c| *c != target) {
            let order = self.graph.edges.len();
            edge = Some(order);
            self.graph.events.push(CallEvent { edge: order, response: false });
            self.graph.edges.push(CallEdge {
                caller: caller.to_string(),
                callee: target.to_string(),
                method: method.to_string(),
                params: m.params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect(),
                ret_name: m.ret_name.clone(),
                ret: m.ret.clone(),
                order,
                span,
                conditional: ctx.branch > 0,
                in_loop: ctx.looping > 0,
            });
        }
        let frame = (target.to_string(), method.to_string());
        if self.stack.contains(&frame) {
            self.graph.recursive_calls.push((span, format!("{target}.{method}")));
        } else {
            self.stack.push(frame);
            let mut env: Env = m.params.iter().map(|p| (p.name.clone(), None)).collect();
            let result = self.block(&m.body, Some(target), &mut env, ctx);
            self.stack.pop();
            result?;
        }
        if let Some(edge) = edge {
            self.graph.events.push(CallEvent { edge, response: true });
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_calls_do_not_create_edges() {
        let g = parse_program(
            "class A { def helper(x: int) -> int { return x; } def go(x: int) -> int { return self.helper(x); } }
             main { let a = new A(); a.go(1); }",
        )
        .unwrap();
        assert_eq!(g.objects.len(), 1);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn unknown_method_is_reported_with_position() {
        let err = parse_program("class A { }\nmain { let a = new A();\n  a.nope(); }").unwrap_err();
        assert!(matches!(err, FrontendError::UnknownMethod { line: 3, col: 5, .. }), "{err:?}");
    }

    #[test]
    fn unknown_class_and_object() {
        assert!(matches!(parse_program("main { let a = new A(); }"), Err(FrontendError::UnknownClass { .. })));
        assert!(matches!(parse_program("main { b.go(); }"), Err(FrontendError::UnknownObject { .. })));
    }

    #[test]
    fn recursion_is_recorded_not_followed() {
        let g = parse_program(
            "class B { a: A; def ping() -> int { return self.a.pong(); } }
             class A { b: B; def pong() -> int { return 1; } }
             class R { def f(n: int) -> int { return self.f(n); } }
             main { let r = new R(); r.f(3); }",
        )
        .unwrap();
        assert_eq!(g.recursive_calls.len(), 1);
    }

    #[test]
    fn syntax_error_position() {
        match parse_program("main {\n  let x = ;\n}") {
            Err(FrontendError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 11)),
            other => panic!("{other:?}"),
        }
    }
}
