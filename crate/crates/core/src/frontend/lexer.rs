use super::ast::Span;
use super::FrontendError;

#[derive(Clone, Debug, PartialEq)]
pub enum Token {
    Ident(String),
    Int(i64),
    Str(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
pub struct Lexed {
    pub token: Token,
    pub span: Span,
}

const SYMBOLS: [&str; 26] = [
    "->", "<=", ">=", "==", "!=", "&&", "||", "{", "}", "(", ")", "[", "]", ";", ":", ",", ".", "=", "+", "-", "*", "/",
    "%", "<", ">", "!",
];

pub fn lex(source: &str) -> Result<Vec<Lexed>, FrontendError> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') || c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Lexed { token: Token::Ident(chars[start..i].iter().collect()), span });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let text: String = chars[start..i].iter().collect();
            let n = text.parse().map_err(|_| FrontendError::syntax(span, format!("integer `{text}` out of range")))?;
            out.push(Lexed { token: Token::Int(n), span });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(FrontendError::syntax(span, "unterminated string literal"));
            }
            let text: String = chars[start..i].iter().collect();
            i += 1;
            col += text.chars().count() + 2;
            out.push(Lexed { token: Token::Str(text), span });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                i += sym.len();
                col += sym.len();
                out.push(Lexed { token: Token::Sym(sym), span });
            }
            None => return Err(FrontendError::syntax(span, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}
