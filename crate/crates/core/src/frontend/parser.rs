//! Recursive-descent parser for the restricted object language.

use super::ast::*;
use super::lexer::{lex, Lexed, Token};
use super::FrontendError;

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|l| &l.token)
    }

    fn peek_at(&self, n: usize) -> Option<&Token> {
        self.toks.get(self.pos + n).map(|l| &l.token)
    }

    fn span(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(l) => l.span,
            None => self.toks.last().map(|l| Span { line: l.span.line, col: l.span.col + 1 }).unwrap_or(Span { line: 1, col: 1 }),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FrontendError> {
        Err(FrontendError::syntax(self.span(), msg))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Token::Sym(x)) if *x == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token::Ident(x)) if x == kw)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), FrontendError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), FrontendError> {
        if self.is_kw(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn ident(&mut self) -> Result<String, FrontendError> {
        match self.peek() {
            Some(Token::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn size(&mut self) -> Result<u32, FrontendError> {
        match self.peek() {
            Some(Token::Int(n)) if *n > 0 && *n <= u32::MAX as i64 => {
                let n = *n as u32;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected positive size"),
        }
    }

    fn program(&mut self) -> Result<Program, FrontendError> {
        let mut classes = Vec::new();
        while self.is_kw("class") {
            classes.push(self.class()?);
        }
        self.expect_kw("main")?;
        let main = self.block()?;
        if self.peek().is_some() {
            return self.err("unexpected input after main block");
        }
        Ok(Program { classes, main })
    }

    fn class(&mut self) -> Result<ClassDecl, FrontendError> {
        let span = self.span();
        self.expect_kw("class")?;
        let name = self.ident()?;
        self.expect_sym("{")?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.eat_sym("}") {
            if self.is_kw("def") {
                methods.push(self.method()?);
            } else if matches!(self.peek(), Some(Token::Ident(_))) {
                let span = self.span();
                let name = self.ident()?;
                self.expect_sym(":")?;
                let ty = self.ty()?;
                self.expect_sym(";")?;
                fields.push(Field { name, ty, span });
            } else {
                return self.err("expected field or method");
            }
        }
        Ok(ClassDecl { name, span, fields, methods })
    }

    fn method(&mut self) -> Result<Method, FrontendError> {
        let span = self.span();
        self.expect_kw("def")?;
        let name = self.ident()?;
        self.expect_sym("(")?;
        let mut params = Vec::new();
        if !self.eat_sym(")") {
            loop {
                let span = self.span();
                let pname = self.ident()?;
                self.expect_sym(":")?;
                params.push(Param { name: pname, ty: self.ty()?, span });
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        self.expect_sym("->")?;
        let ret_name = match (self.peek(), self.peek_at(1)) {
            (Some(Token::Ident(_)), Some(Token::Sym(":"))) => {
                let n = self.ident()?;
                self.pos += 1;
                Some(n)
            }
            _ => None,
        };
        let ret = self.ty()?;
        let body = self.block()?;
        Ok(Method { name, span, params, ret_name, ret, body })
    }

    fn ty(&mut self) -> Result<TypeExpr, FrontendError> {
        let base = self.ident()?;
        let mut ty = match base.as_str() {
            "int" => TypeExpr::Int,
            "bool" => TypeExpr::Bool,
            "str" => {
                if self.is_sym("[") && matches!(self.peek_at(1), Some(Token::Int(_))) {
                    self.pos += 1;
                    let n = self.size()?;
                    self.expect_sym("]")?;
                    TypeExpr::Str(Some(n))
                } else {
                    TypeExpr::Str(None)
                }
            }
            _ => TypeExpr::Class(base),
        };
        while self.eat_sym("[") {
            if self.eat_sym("]") {
                ty = TypeExpr::Array(Box::new(ty), None);
            } else {
                let n = self.size()?;
                self.expect_sym("]")?;
                ty = TypeExpr::Array(Box::new(ty), Some(n));
            }
        }
        Ok(ty)
    }

    fn block(&mut self) -> Result<Block, FrontendError> {
        self.expect_sym("{")?;
        let mut stmts = Vec::new();
        while !self.eat_sym("}") {
            if self.peek().is_none() {
                return self.err("unterminated block");
            }
            stmts.push(self.stmt()?);
        }
        Ok(stmts)
    }

    fn stmt(&mut self) -> Result<Stmt, FrontendError> {
        let span = self.span();
        if self.is_kw("let") {
            self.pos += 1;
            let name = self.ident()?;
            let ty = if self.eat_sym(":") { Some(self.ty()?) } else { None };
            self.expect_sym("=")?;
            let value = self.expr()?;
            self.expect_sym(";")?;
            return Ok(Stmt::Let { name, ty, value, span });
        }
        if self.is_kw("return") {
            self.pos += 1;
            let value = if self.is_sym(";") { None } else { Some(self.expr()?) };
            self.expect_sym(";")?;
            return Ok(Stmt::Return(value, span));
        }
        if self.is_kw("if") {
            return self.if_stmt();
        }
        if self.is_kw("while") {
            self.pos += 1;
            self.expect_sym("(")?;
            let cond = self.expr()?;
            self.expect_sym(")")?;
            let body = self.block()?;
            return Ok(Stmt::While { cond, body, span });
        }
        if self.is_kw("for") {
            self.pos += 1;
            let var = self.ident()?;
            self.expect_kw("in")?;
            let iter = self.expr()?;
            let body = self.block()?;
            return Ok(Stmt::For { var, iter, body, span });
        }
        if self.is_kw("spawn") {
            self.pos += 1;
            return Ok(Stmt::Spawn(self.block()?, span));
        }
        if let (Some(Token::Ident(_)), Some(Token::Sym("="))) = (self.peek(), self.peek_at(1)) {
            let name = self.ident()?;
            self.pos += 1;
            let value = self.expr()?;
            self.expect_sym(";")?;
            return Ok(Stmt::Assign { name, value, span });
        }
        let e = self.expr()?;
        self.expect_sym(";")?;
        Ok(Stmt::Expr(e))
    }

    fn if_stmt(&mut self) -> Result<Stmt, FrontendError> {
        let span = self.span();
        self.expect_kw("if")?;
        self.expect_sym("(")?;
        let cond = self.expr()?;
        self.expect_sym(")")?;
        let then = self.block()?;
        let otherwise = if self.is_kw("else") {
            self.pos += 1;
            if self.is_kw("if") {
                vec![self.if_stmt()?]
            } else {
                self.block()?
            }
        } else {
            Vec::new()
        };
        Ok(Stmt::If { cond, then, otherwise, span })
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        self.binary(0)
    }

    fn binary(&mut self, level: usize) -> Result<Expr, FrontendError> {
        const LEVELS: [&[&str]; 5] = [&["||"], &["&&"], &["==", "!=", "<", ">", "<=", ">="], &["+", "-"], &["*", "/", "%"]];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        loop {
            let span = self.span();
            let op = match self.peek() {
                Some(Token::Sym(s)) if LEVELS[level].contains(s) => *s,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.binary(level + 1)?;
            lhs = Expr::Binary(op.to_string(), Box::new(lhs), Box::new(rhs), span);
        }
    }

    fn unary(&mut self) -> Result<Expr, FrontendError> {
        let span = self.span();
        for op in ["-", "!"] {
            if self.eat_sym(op) {
                return Ok(Expr::Unary(op.to_string(), Box::new(self.unary()?), span));
            }
        }
        self.postfix()
    }

    fn args(&mut self) -> Result<Vec<Expr>, FrontendError> {
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if self.eat_sym(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_sym(")") {
                return Ok(args);
            }
            self.expect_sym(",")?;
        }
    }

    fn postfix(&mut self) -> Result<Expr, FrontendError> {
        let mut e = self.primary()?;
        loop {
            if self.eat_sym(".") {
                let span = self.span();
                let name = self.ident()?;
                if self.is_sym("(") {
                    let args = self.args()?;
                    e = Expr::Call { recv: Box::new(e), method: name, args, span };
                } else {
                    e = Expr::Field(Box::new(e), name, span);
                }
            } else if self.is_sym("[") {
                let span = self.span();
                self.pos += 1;
                let idx = self.expr()?;
                self.expect_sym("]")?;
                e = Expr::Index(Box::new(e), Box::new(idx), span);
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, FrontendError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n, span))
            }
            Some(Token::Str(s)) => {
                self.pos += 1;
                Ok(Expr::Str(s, span))
            }
            Some(Token::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Some(Token::Sym("[")) => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat_sym("]") {
                    loop {
                        items.push(self.expr()?);
                        if self.eat_sym("]") {
                            break;
                        }
                        self.expect_sym(",")?;
                    }
                }
                Ok(Expr::Array(items, span))
            }
            Some(Token::Ident(word)) => {
                self.pos += 1;
                match word.as_str() {
                    "true" => Ok(Expr::Bool(true, span)),
                    "false" => Ok(Expr::Bool(false, span)),
                    "self" => Ok(Expr::SelfRef(span)),
                    "new" => {
                        let class = self.ident()?;
                        let args = self.args()?;
                        Ok(Expr::New { class, args, span })
                    }
                    _ => Ok(Expr::Var(word, span)),
                }
            }
            _ => self.err("expected expression"),
        }
    }
}

/// Parse source text into an AST without resolving names.
pub fn parse_ast(source: &str) -> Result<Program, FrontendError> {
    let mut p = Parser { toks: lex(source)?, pos: 0 };
    p.program()
}
