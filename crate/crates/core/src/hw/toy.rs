//! Line-oriented toy HDL for writing FSMs by hand.
//!
//! ```text
//! ip adder
//! in a 8
//! out sum 8
//! reset S0
//! state S0 { if (a.valid) goto S1 }
//! state S1 { sum.valid = 1; sum.data = total; goto S0 }
//! ```

use super::{Arm, BranchKind, FsmState, HwError, HwFsm, Port, PortDir};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u32),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, HwError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split("//").next().unwrap_or("");
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Ident(word), line: lineno + 1, col });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits.parse().map_err(|_| HwError::Syntax {
                    line: lineno + 1,
                    col,
                    message: format!("number `{digits}` out of range"),
                })?;
                out.push(Spanned { tok: Tok::Num(n), line: lineno + 1, col });
            } else if "{}();:=.|".contains(c) {
                out.push(Spanned { tok: Tok::Punct(c), line: lineno + 1, col });
                i += 1;
            } else {
                return Err(HwError::Syntax { line: lineno + 1, col, message: format!("unexpected character `{c}`") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    ports: Vec<Port>,
}

const NON_FSM: [&str; 8] = ["module", "always", "assign", "wire", "reg", "initial", "function", "task"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, HwError> {
        let (line, col) = self.here();
        Err(HwError::Syntax { line, col, message: message.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn ident(&mut self) -> Result<String, HwError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn number(&mut self) -> Result<u32, HwError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected number"),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), HwError> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), HwError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn use_port(&mut self, name: &str, dir: PortDir) {
        if !self.ports.iter().any(|p| p.name == name) {
            self.ports.push(Port { name: name.to_string(), dir, width: 1 });
        }
    }

    fn port_field(&mut self, field: &str) -> Result<String, HwError> {
        let port = self.ident()?;
        self.punct('.')?;
        self.keyword(field)?;
        Ok(port)
    }

    fn state_body(&mut self, state: &mut FsmState) -> Result<(), HwError> {
        self.punct('{')?;
        loop {
            while self.eat_punct(';') {}
            match self.peek().cloned() {
                Some(Tok::Punct('}')) => {
                    self.pos += 1;
                    return Ok(());
                }
                Some(Tok::Ident(word)) => match word.as_str() {
                    "goto" => {
                        self.pos += 1;
                        state.next = Some(self.ident()?);
                    }
                    "if" => {
                        self.pos += 1;
                        self.punct('(')?;
                        let port = self.port_field("valid")?;
                        self.punct(')')?;
                        self.keyword("goto")?;
                        state.next = Some(self.ident()?);
                        self.use_port(&port, PortDir::In);
                        state.guard_valid.push(port);
                    }
                    "case" => {
                        self.pos += 1;
                        self.punct('(')?;
                        let port = self.port_field("data")?;
                        self.punct(')')?;
                        self.punct('{')?;
                        while !self.eat_punct('}') {
                            let label = self.ident()?;
                            self.punct(':')?;
                            self.keyword("goto")?;
                            let next = self.ident()?;
                            state.arms.push(Arm { cond_label: label, next });
                            while self.eat_punct(';') {}
                        }
                        self.use_port(&port, PortDir::In);
                        state.branch = BranchKind::InputData;
                        state.port = Some(port);
                    }
                    "branch" => {
                        self.pos += 1;
                        self.punct('{')?;
                        loop {
                            self.keyword("goto")?;
                            let next = self.ident()?;
                            state.arms.push(Arm { cond_label: next.clone(), next });
                            if !self.eat_punct('|') {
                                break;
                            }
                        }
                        self.punct('}')?;
                        state.branch = BranchKind::Internal;
                    }
                    w if NON_FSM.contains(&w) => {
                        return Err(HwError::NonFsmConstruct(w.to_string()));
                    }
                    _ => {
                        let port = self.ident()?;
                        self.punct('.')?;
                        let field = self.ident()?;
                        self.punct('=')?;
                        match field.as_str() {
                            "valid" => {
                                if self.number()? != 1 {
                                    return self.err("only `valid = 1` is a handshake");
                                }
                                self.use_port(&port, PortDir::Out);
                                state.assert.push(port);
                            }
                            "data" => {
                                state.message = Some(self.ident()?);
                                self.use_port(&port, PortDir::Out);
                            }
                            other => return Err(HwError::NonFsmConstruct(format!("{port}.{other}"))),
                        }
                    }
                },
                Some(_) => return self.err("expected statement"),
                None => return self.err("unterminated state block"),
            }
        }
    }
}

/// Parse the toy HDL-FSM text form into the same [`HwFsm`] the interchange
/// format produces.
pub fn parse_toy_hdl(text: &str) -> Result<HwFsm, HwError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, ports: Vec::new() };
    let mut ip = None;
    let mut reset = None;
    let mut states = Vec::new();
    while let Some(tok) = p.next() {
        let Tok::Ident(word) = tok else {
            p.pos -= 1;
            return p.err("expected declaration");
        };
        match word.as_str() {
            "ip" => ip = Some(p.ident()?),
            "reset" => reset = Some(p.ident()?),
            "in" | "out" | "input" | "output" => {
                let name = p.ident()?;
                let width = p.number()?;
                let dir = if word.starts_with("in") { PortDir::In } else { PortDir::Out };
                if p.ports.iter().any(|q| q.name == name) {
                    return p.err(format!("port `{name}` declared twice"));
                }
                p.ports.push(Port { name, dir, width });
            }
            "state" => {
                let mut state = FsmState { id: p.ident()?, ..FsmState::default() };
                p.state_body(&mut state)?;
                states.push(state);
            }
            w if NON_FSM.contains(&w) => return Err(HwError::NonFsmConstruct(w.to_string())),
            _ => {
                p.pos -= 1;
                return p.err(format!("unexpected `{word}`"));
            }
        }
        while p.eat_punct(';') {}
    }
    let Some(first) = states.first() else {
        return Err(HwError::Schema("no states".to_string()));
    };
    let fsm = HwFsm {
        ip: ip.unwrap_or_else(|| "toy".to_string()),
        reset: reset.unwrap_or_else(|| first.id.clone()),
        ports: p.ports,
        states,
    };
    fsm.validate()?;
    Ok(fsm)
}
