//! Hand-rolled lexer and recursive-descent parser for PHL theory files.

use crate::ids::SortId;
use crate::theory::Diagnostic;

use super::{FuncId, PhlAtom, PhlSequent, PhlTerm, PhlTheory, PredDecl, PredId, FuncDecl};

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Wildcard,
    Semi,
    Colon,
    Star,
    Arrow,   // ->
    Implies, // =>
    Eq,
    Amp,
    Bang,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Wildcard => "`_`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Star => "`*`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let lineno = lineno + 1;
        let bytes: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let col = i + 1;
            match c {
                c if c.is_whitespace() => {
                    i += 1;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                        i += 1;
                    }
                    let word: String = bytes[start..i].iter().collect();
                    let tok = if word == "_" { Tok::Wildcard } else { Tok::Ident(word) };
                    out.push(Token { tok, line: lineno, col });
                }
                ';' => {
                    out.push(Token { tok: Tok::Semi, line: lineno, col });
                    i += 1;
                }
                ':' => {
                    out.push(Token { tok: Tok::Colon, line: lineno, col });
                    i += 1;
                }
                '*' => {
                    out.push(Token { tok: Tok::Star, line: lineno, col });
                    i += 1;
                }
                '&' => {
                    out.push(Token { tok: Tok::Amp, line: lineno, col });
                    i += 1;
                }
                '!' => {
                    out.push(Token { tok: Tok::Bang, line: lineno, col });
                    i += 1;
                }
                '(' => {
                    out.push(Token { tok: Tok::LParen, line: lineno, col });
                    i += 1;
                }
                ')' => {
                    out.push(Token { tok: Tok::RParen, line: lineno, col });
                    i += 1;
                }
                ',' => {
                    out.push(Token { tok: Tok::Comma, line: lineno, col });
                    i += 1;
                }
                '-' if bytes.get(i + 1) == Some(&'>') => {
                    out.push(Token { tok: Tok::Arrow, line: lineno, col });
                    i += 2;
                }
                '=' if bytes.get(i + 1) == Some(&'>') => {
                    out.push(Token { tok: Tok::Implies, line: lineno, col });
                    i += 2;
                }
                '=' => {
                    out.push(Token { tok: Tok::Eq, line: lineno, col });
                    i += 1;
                }
                other => {
                    return Err(Diagnostic::at(
                        format!("unexpected character `{}`", other),
                        lineno,
                        col,
                    ));
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    theory: PhlTheory,
    wildcards: usize,
}

const KEYWORDS: &[&str] = &["sort", "pred", "func", "axiom"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn error(&self, message: impl Into<String>) -> Diagnostic {
        let (line, col) = self.here();
        Diagnostic::at(message, line, col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {}, found {}", want.describe(), t.describe()))),
            None => Err(self.error(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(t) => Err(self.error(format!("expected {}, found {}", what, t.describe()))),
            None => Err(self.error(format!("expected {}, found end of input", what))),
        }
    }

    fn check_fresh_name(&self, name: &str) -> Result<(), Diagnostic> {
        if KEYWORDS.contains(&name) {
            return Err(self.error(format!("`{}` is a keyword", name)));
        }
        let taken = self.theory.sorts.iter().any(|s| s == name)
            || self.theory.preds.iter().any(|p| p.name == name)
            || self.theory.funcs.iter().any(|f| f.name == name);
        if taken {
            return Err(self.error(format!("symbol `{}` is already declared", name)));
        }
        Ok(())
    }

    fn sort(&mut self) -> Result<SortId, Diagnostic> {
        let name = self.expect_ident("a sort name")?;
        self.theory
            .sort_by_name(&name)
            .ok_or_else(|| self.error(format!("unknown sort `{}`", name)))
    }

    fn pred_by_name(&self, name: &str) -> Option<PredId> {
        self.theory
            .preds
            .iter()
            .position(|p| p.name == name)
            .map(|i| PredId(i as u32))
    }

    fn func_by_name(&self, name: &str) -> Option<FuncId> {
        self.theory
            .funcs
            .iter()
            .position(|f| f.name == name)
            .map(|i| FuncId(i as u32))
    }

    fn sort_list(&mut self) -> Result<Vec<SortId>, Diagnostic> {
        let mut sorts = vec![self.sort()?];
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            sorts.push(self.sort()?);
        }
        Ok(sorts)
    }

    fn declaration(&mut self) -> Result<(), Diagnostic> {
        let word = self.expect_ident("a declaration (`sort`, `pred`, `func`, `axiom`)")?;
        match word.as_str() {
            "sort" => {
                let name = self.expect_ident("a sort name")?;
                self.check_fresh_name(&name)?;
                self.theory.sorts.push(name);
            }
            "pred" => {
                let name = self.expect_ident("a predicate name")?;
                self.check_fresh_name(&name)?;
                let arity = if self.peek() == Some(&Tok::Colon) {
                    self.pos += 1;
                    self.sort_list()?
                } else {
                    Vec::new()
                };
                self.theory.preds.push(PredDecl { name, arity });
            }
            "func" => {
                let name = self.expect_ident("a function name")?;
                self.check_fresh_name(&name)?;
                self.expect(Tok::Colon)?;
                let dom = if self.peek() == Some(&Tok::Arrow) {
                    Vec::new()
                } else {
                    self.sort_list()?
                };
                self.expect(Tok::Arrow)?;
                let cod = self.sort()?;
                self.theory.funcs.push(FuncDecl { name, dom, cod });
            }
            "axiom" => {
                let line = self
                    .tokens
                    .get(self.pos.saturating_sub(1))
                    .map(|t| t.line)
                    .unwrap_or(1);
                let premise = if self.peek() == Some(&Tok::Implies) {
                    Vec::new()
                } else {
                    self.formula()?
                };
                self.expect(Tok::Implies)?;
                let conclusion = self.formula()?;
                self.theory.sequents.push(PhlSequent {
                    premise,
                    conclusion,
                    line,
                });
            }
            other => {
                return Err(self.error(format!(
                    "expected `sort`, `pred`, `func` or `axiom`, found `{}`",
                    other
                )));
            }
        }
        self.expect(Tok::Semi)
    }

    fn formula(&mut self) -> Result<Vec<PhlAtom>, Diagnostic> {
        let mut atoms = vec![self.atom()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            atoms.push(self.atom()?);
        }
        Ok(atoms)
    }

    fn atom(&mut self) -> Result<PhlAtom, Diagnostic> {
        // `v : S` sort quantification.
        if let (Some(Tok::Ident(_)), Some(Tok::Colon)) = (self.peek(), self.peek2()) {
            let name = self.expect_ident("a variable")?;
            if self.pred_by_name(&name).is_some() || self.func_by_name(&name).is_some() {
                return Err(self.error(format!("`{}` is a declared symbol, not a variable", name)));
            }
            self.pos += 1; // colon
            let sort = self.sort()?;
            return Ok(PhlAtom::SortOf(name, sort));
        }
        // Predicate application.
        if let (Some(Tok::Ident(name)), Some(Tok::LParen)) = (self.peek(), self.peek2()) {
            if let Some(pred) = self.pred_by_name(name) {
                self.pos += 2;
                let args = self.term_list()?;
                let want = self.theory.preds[pred.index()].arity.len();
                if args.len() != want {
                    return Err(self.error(format!(
                        "predicate `{}` expects {} arguments, got {}",
                        self.theory.preds[pred.index()].name,
                        want,
                        args.len()
                    )));
                }
                return Ok(PhlAtom::Pred { pred, args });
            }
        }
        let term = self.term()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                let rhs = self.term()?;
                Ok(PhlAtom::TermEqual(term, rhs))
            }
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(PhlAtom::Defined(term))
            }
            _ => Err(self.error("expected `=`, `!` or `:` to complete the atom".to_string())),
        }
    }

    fn term_list(&mut self) -> Result<Vec<PhlTerm>, Diagnostic> {
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => return Ok(args),
                Some(t) => {
                    return Err(self.error(format!("expected `,` or `)`, found {}", t.describe())))
                }
                None => return Err(self.error("expected `,` or `)`, found end of input")),
            }
        }
    }

    fn term(&mut self) -> Result<PhlTerm, Diagnostic> {
        match self.peek().cloned() {
            Some(Tok::Wildcard) => {
                self.pos += 1;
                let name = format!("_%{}", self.wildcards);
                self.wildcards += 1;
                Ok(PhlTerm::Var(name))
            }
            Some(Tok::Ident(name)) => {
                if let Some(func) = self.func_by_name(&name) {
                    self.pos += 1;
                    self.expect(Tok::LParen).map_err(|_| {
                        self.error(format!(
                            "function `{}` must be applied: write `{}(...)`",
                            name, name
                        ))
                    })?;
                    let args = self.term_list()?;
                    let want = self.theory.funcs[func.index()].dom.len();
                    if args.len() != want {
                        return Err(self.error(format!(
                            "function `{}` expects {} arguments, got {}",
                            name,
                            want,
                            args.len()
                        )));
                    }
                    return Ok(PhlTerm::App(func, args));
                }
                if self.pred_by_name(&name).is_some() {
                    return Err(self.error(format!("predicate `{}` used as a term", name)));
                }
                if self.theory.sorts.iter().any(|s| *s == name) {
                    return Err(self.error(format!("sort `{}` used as a term", name)));
                }
                self.pos += 1;
                Ok(PhlTerm::Var(name))
            }
            Some(t) => Err(self.error(format!("expected a term, found {}", t.describe()))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }
}

/// Parse a PHL theory file. Wildcards are desugared to uniquely named
/// variables (`_%N`), so downstream passes see plain variables.
pub fn parse_phl(text: &str) -> Result<PhlTheory, Diagnostic> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        theory: PhlTheory::default(),
        wildcards: 0,
    };
    while parser.peek().is_some() {
        parser.declaration()?;
    }
    Ok(parser.theory)
}
