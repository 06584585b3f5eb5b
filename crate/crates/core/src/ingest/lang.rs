//! Guarded-command module language: lexer, parser and printer.
//!
//! The grammar is documented in `docs/lang.md`.

use std::fmt;

use super::IngestError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Float(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Float(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

// longest symbols first
const SYMBOLS: &[&str] = &[
    "<=>", "..", "->", "=>", "<=", ">=", "!=", "[", "]", "(", ")", ";", ":", "'", "=", "<", ">",
    "+", "-", "*", "&", "|", "!", "?",
];

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, IngestError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| IngestError::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
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
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            // `1..3` is a range, `0.5` a probability
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(char::is_ascii_digit) {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Float(chars[start..i].iter().collect()), pos));
            } else {
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse()
                    .map_err(|_| err(line, col, format!("integer literal {text} out of range")))?;
                out.push((Tok::Int(value), pos));
            }
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(err(line, col, "unterminated string".into()));
            }
            out.push((Tok::Str(chars[start + 1..i].iter().collect()), pos));
            i += 1;
        } else {
            let rest: String = chars[i..(i + 3).min(chars.len())].iter().collect();
            let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(err(line, col, format!("unexpected character `{c}`")));
            };
            i += sym.chars().count();
            out.push((Tok::Sym(sym), pos));
        }
        col += i - start;
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnOp {
    Not,
    Neg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Iff,
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Iff => "<=>",
            BinOp::Implies => "=>",
            BinOp::Or => "|",
            BinOp::And => "&",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Ident(String),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Ite(Box<Expr>, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(i) => write!(f, "{i}"),
            ExprKind::Bool(b) => write!(f, "{b}"),
            ExprKind::Ident(s) => f.write_str(s),
            ExprKind::Unary(UnOp::Not, e) => write!(f, "!({e})"),
            ExprKind::Unary(UnOp::Neg, e) => write!(f, "-({e})"),
            ExprKind::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            ExprKind::Ite(c, a, b) => write!(f, "({c} ? {a} : {b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstType {
    Int,
    Bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstDecl {
    pub name: String,
    pub ty: ConstType,
    pub value: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormulaDecl {
    pub name: String,
    pub body: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum VarType {
    Bool,
    Range(Expr, Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarDecl {
    pub name: String,
    pub ty: VarType,
    pub init: Option<Expr>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub action: Option<String>,
    pub guard: Expr,
    /// `(variable, right-hand side)`; empty for `true`.
    pub updates: Vec<(String, Expr)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleDecl {
    pub name: String,
    pub vars: Vec<VarDecl>,
    pub owner: Option<Expr>,
    pub commands: Vec<Command>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelDecl {
    pub name: String,
    pub body: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModuleLangProgram {
    pub constants: Vec<ConstDecl>,
    pub formulas: Vec<FormulaDecl>,
    pub modules: Vec<ModuleDecl>,
    pub labels: Vec<LabelDecl>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

const KEYWORDS: &[&str] = &[
    "module",
    "endmodule",
    "const",
    "int",
    "bool",
    "formula",
    "label",
    "init",
    "true",
    "false",
    "owner",
    "mdp",
    "nondeterministic",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, IngestError> {
        let pos = self.pos();
        Err(IngestError::Syntax {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, IngestError> {
        match self.peek() {
            Tok::Float(x) => {
                self.error(format!("probabilistic choice not supported (found `{x}`)"))
            }
            t => self.error(format!("expected {wanted}, found {t}")),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), IngestError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.unexpected(&format!("`{s}`"))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), IngestError> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{k}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), IngestError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let pos = self.bump().1;
                Ok((s, pos))
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn program(&mut self) -> Result<ModuleLangProgram, IngestError> {
        let mut prog = ModuleLangProgram::default();
        if self.is_kw("mdp") || self.is_kw("nondeterministic") {
            self.bump();
        }
        loop {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Eof => return Ok(prog),
                Tok::Ident(k) if k == "const" => {
                    self.bump();
                    let ty = if self.is_kw("bool") {
                        self.bump();
                        ConstType::Bool
                    } else {
                        if self.is_kw("int") {
                            self.bump();
                        }
                        ConstType::Int
                    };
                    let (name, _) = self.ident()?;
                    if !self.is_sym("=") {
                        return self.error(format!("constant {name} needs a value"));
                    }
                    self.bump();
                    let value = self.expr()?;
                    self.expect_sym(";")?;
                    prog.constants.push(ConstDecl {
                        name,
                        ty,
                        value,
                        pos,
                    });
                }
                Tok::Ident(k) if k == "formula" => {
                    self.bump();
                    let (name, _) = self.ident()?;
                    self.expect_sym("=")?;
                    let body = self.expr()?;
                    self.expect_sym(";")?;
                    prog.formulas.push(FormulaDecl { name, body, pos });
                }
                Tok::Ident(k) if k == "label" => {
                    self.bump();
                    let Tok::Str(name) = self.peek().clone() else {
                        return self.unexpected("a quoted label name");
                    };
                    self.bump();
                    self.expect_sym("=")?;
                    let body = self.expr()?;
                    self.expect_sym(";")?;
                    prog.labels.push(LabelDecl { name, body, pos });
                }
                Tok::Ident(k) if k == "module" => prog.modules.push(self.module()?),
                _ => return self.unexpected("`const`, `formula`, `label` or `module`"),
            }
        }
    }

    fn module(&mut self) -> Result<ModuleDecl, IngestError> {
        let pos = self.pos();
        self.expect_kw("module")?;
        let (name, _) = self.ident()?;
        if self.is_sym("=") {
            return self.error("module renaming is not supported");
        }
        let mut m = ModuleDecl {
            name,
            vars: Vec::new(),
            owner: None,
            commands: Vec::new(),
            pos,
        };
        loop {
            let pos = self.pos();
            if self.is_kw("endmodule") {
                self.bump();
                return Ok(m);
            }
            if self.is_kw("owner") {
                self.bump();
                if m.owner.is_some() {
                    return self.error(format!("module {} declares two owners", m.name));
                }
                m.owner = Some(self.expr()?);
                self.expect_sym(";")?;
            } else if self.is_sym("[") {
                m.commands.push(self.command()?);
            } else if matches!(self.peek(), Tok::Ident(_)) {
                let (name, _) = self.ident()?;
                self.expect_sym(":")?;
                let ty = if self.is_kw("bool") {
                    self.bump();
                    VarType::Bool
                } else {
                    self.expect_sym("[")?;
                    let lo = self.expr()?;
                    self.expect_sym("..")?;
                    let hi = self.expr()?;
                    self.expect_sym("]")?;
                    VarType::Range(lo, hi)
                };
                let init = if self.is_kw("init") {
                    self.bump();
                    Some(self.expr()?)
                } else {
                    None
                };
                self.expect_sym(";")?;
                m.vars.push(VarDecl {
                    name,
                    ty,
                    init,
                    pos,
                });
            } else {
                return self.unexpected("a variable, command, `owner` or `endmodule`");
            }
        }
    }

    fn command(&mut self) -> Result<Command, IngestError> {
        let pos = self.pos();
        self.expect_sym("[")?;
        let action = if self.is_sym("]") {
            None
        } else {
            Some(self.ident()?.0)
        };
        self.expect_sym("]")?;
        let guard = self.expr()?;
        self.expect_sym("->")?;
        let mut updates = Vec::new();
        if self.is_kw("true") {
            self.bump();
        } else {
            loop {
                self.expect_sym("(")?;
                let (var, _) = self.ident()?;
                self.expect_sym("'")?;
                self.expect_sym("=")?;
                let rhs = self.expr()?;
                self.expect_sym(")")?;
                updates.push((var, rhs));
                if !self.eat_sym("&") {
                    break;
                }
            }
        }
        if self.is_sym(":") || self.is_sym("+") {
            return self.error("probabilistic choice not supported");
        }
        self.expect_sym(";")?;
        Ok(Command {
            action,
            guard,
            updates,
            pos,
        })
    }

    fn expr(&mut self) -> Result<Expr, IngestError> {
        let cond = self.binary(0)?;
        if self.is_sym("?") {
            let pos = self.bump().1;
            let a = self.expr()?;
            self.expect_sym(":")?;
            let b = self.expr()?;
            return Ok(Expr {
                kind: ExprKind::Ite(Box::new(cond), Box::new(a), Box::new(b)),
                pos,
            });
        }
        Ok(cond)
    }

    /// Precedence climbing; levels from loosest to tightest.
    fn binary(&mut self, level: usize) -> Result<Expr, IngestError> {
        const LEVELS: &[&[(&str, BinOp)]] = &[
            &[("<=>", BinOp::Iff)],
            &[("=>", BinOp::Implies)],
            &[("|", BinOp::Or)],
            &[("&", BinOp::And)],
            &[
                ("=", BinOp::Eq),
                ("!=", BinOp::Ne),
                ("<=", BinOp::Le),
                (">=", BinOp::Ge),
                ("<", BinOp::Lt),
                (">", BinOp::Gt),
            ],
            &[("+", BinOp::Add), ("-", BinOp::Sub)],
            &[("*", BinOp::Mul)],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        loop {
            let Some(&(_, op)) = LEVELS[level].iter().find(|(s, _)| self.is_sym(s)) else {
                return Ok(lhs);
            };
            let pos = self.bump().1;
            // implication is right-associative, everything else left
            let rhs = if op == BinOp::Implies {
                self.binary(level)?
            } else {
                self.binary(level + 1)?
            };
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, IngestError> {
        let pos = self.pos();
        if self.eat_sym("!") {
            let e = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Unary(UnOp::Not, Box::new(e)),
                pos,
            });
        }
        if self.eat_sym("-") {
            let e = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Unary(UnOp::Neg, Box::new(e)),
                pos,
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, IngestError> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                ExprKind::Int(i)
            }
            Tok::Ident(k) if k == "true" || k == "false" => {
                self.bump();
                ExprKind::Bool(k == "true")
            }
            Tok::Ident(_) => ExprKind::Ident(self.ident()?.0),
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                return Ok(e);
            }
            _ => return self.unexpected("an expression"),
        };
        Ok(Expr { kind, pos })
    }
}

pub fn parse_program(src: &str) -> Result<ModuleLangProgram, IngestError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    p.program()
}

impl fmt::Display for ModuleLangProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mdp")?;
        for c in &self.constants {
            let ty = match c.ty {
                ConstType::Int => "int",
                ConstType::Bool => "bool",
            };
            writeln!(f, "const {ty} {} = {};", c.name, c.value)?;
        }
        for d in &self.formulas {
            writeln!(f, "formula {} = {};", d.name, d.body)?;
        }
        for m in &self.modules {
            writeln!(f, "\nmodule {}", m.name)?;
            for v in &m.vars {
                match &v.ty {
                    VarType::Bool => write!(f, "  {} : bool", v.name)?,
                    VarType::Range(lo, hi) => write!(f, "  {} : [{lo}..{hi}]", v.name)?,
                }
                if let Some(init) = &v.init {
                    write!(f, " init {init}")?;
                }
                writeln!(f, ";")?;
            }
            if let Some(owner) = &m.owner {
                writeln!(f, "  owner {owner};")?;
            }
            for c in &m.commands {
                write!(
                    f,
                    "  [{}] {} -> ",
                    c.action.as_deref().unwrap_or(""),
                    c.guard
                )?;
                if c.updates.is_empty() {
                    write!(f, "true")?;
                }
                for (k, (var, rhs)) in c.updates.iter().enumerate() {
                    if k > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "({var}'={rhs})")?;
                }
                writeln!(f, ";")?;
            }
            writeln!(f, "endmodule")?;
        }
        if !self.labels.is_empty() {
            writeln!(f)?;
        }
        for l in &self.labels {
            writeln!(f, "label \"{}\" = {};", l.name, l.body)?;
        }
        Ok(())
    }
}
