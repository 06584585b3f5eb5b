//! Breadth-first state-space construction for module-language programs.

use std::collections::HashMap;

use indexmap::IndexMap;

use super::lang::{BinOp, ConstType, ExprKind, ModuleLangProgram, Pos, UnOp, VarType};
use super::{lang::Expr, IngestError, LoadedModel};
use crate::model::{StateId, StateSet, TransitionSystem};

pub const DEFAULT_STATE_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
}

impl Ty {
    fn name(self) -> &'static str {
        match self {
            Ty::Int => "int",
            Ty::Bool => "bool",
        }
    }
}

/// Booleans are 0/1.
#[derive(Clone, Debug)]
enum Code {
    Const(i64),
    Var(usize),
    Not(Box<Code>),
    Neg(Box<Code>),
    Bin(BinOp, Box<Code>, Box<Code>),
    Ite(Box<Code>, Box<Code>, Box<Code>),
}

impl Code {
    /// `None` on arithmetic overflow.
    fn eval(&self, vals: &[i64]) -> Option<i64> {
        Some(match self {
            Code::Const(c) => *c,
            Code::Var(v) => vals[*v],
            Code::Not(e) => 1 - e.eval(vals)?,
            Code::Neg(e) => e.eval(vals)?.checked_neg()?,
            Code::Ite(c, a, b) => {
                if c.eval(vals)? != 0 {
                    a.eval(vals)?
                } else {
                    b.eval(vals)?
                }
            }
            Code::Bin(op, a, b) => {
                let x = a.eval(vals)?;
                // short-circuit the connectives
                match op {
                    BinOp::And if x == 0 => return Some(0),
                    BinOp::Or if x != 0 => return Some(1),
                    BinOp::Implies if x == 0 => return Some(1),
                    _ => {}
                }
                let y = b.eval(vals)?;
                match op {
                    BinOp::Add => x.checked_add(y)?,
                    BinOp::Sub => x.checked_sub(y)?,
                    BinOp::Mul => x.checked_mul(y)?,
                    BinOp::And | BinOp::Or | BinOp::Implies => y,
                    BinOp::Iff => i64::from(x == y),
                    BinOp::Eq => i64::from(x == y),
                    BinOp::Ne => i64::from(x != y),
                    BinOp::Lt => i64::from(x < y),
                    BinOp::Le => i64::from(x <= y),
                    BinOp::Gt => i64::from(x > y),
                    BinOp::Ge => i64::from(x >= y),
                }
            }
        })
    }
}

struct Var {
    name: String,
    module: usize,
    lo: i64,
    hi: i64,
    ty: Ty,
}

struct Cmd {
    module: usize,
    guard: Code,
    updates: Vec<(usize, Code)>,
    pos: Pos,
}

struct Compiler<'p> {
    consts: HashMap<&'p str, (i64, Ty)>,
    vars: Vec<Var>,
    var_index: HashMap<&'p str, usize>,
    formulas: HashMap<&'p str, &'p Expr>,
    /// Formulas being inlined, to reject recursion.
    expanding: Vec<&'p str>,
}

fn semantic<T>(pos: Pos, message: impl Into<String>) -> Result<T, IngestError> {
    Err(IngestError::Semantic {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    })
}

impl<'p> Compiler<'p> {
    fn compile(&mut self, e: &'p Expr) -> Result<(Code, Ty), IngestError> {
        Ok(match &e.kind {
            ExprKind::Int(i) => (Code::Const(*i), Ty::Int),
            ExprKind::Bool(b) => (Code::Const(i64::from(*b)), Ty::Bool),
            ExprKind::Ident(name) => {
                if let Some(&(v, ty)) = self.consts.get(name.as_str()) {
                    (Code::Const(v), ty)
                } else if let Some(&i) = self.var_index.get(name.as_str()) {
                    (Code::Var(i), self.vars[i].ty)
                } else if let Some(&body) = self.formulas.get(name.as_str()) {
                    if self.expanding.contains(&name.as_str()) {
                        return semantic(e.pos, format!("formula {name} refers to itself"));
                    }
                    self.expanding.push(name);
                    let out = self.compile(body)?;
                    self.expanding.pop();
                    out
                } else {
                    return semantic(e.pos, format!("unknown identifier {name}"));
                }
            }
            ExprKind::Unary(op, inner) => {
                let (c, ty) = self.compile(inner)?;
                match op {
                    UnOp::Not => {
                        self.want(inner, ty, Ty::Bool)?;
                        (Code::Not(Box::new(c)), Ty::Bool)
                    }
                    UnOp::Neg => {
                        self.want(inner, ty, Ty::Int)?;
                        (Code::Neg(Box::new(c)), Ty::Int)
                    }
                }
            }
            ExprKind::Binary(op, a, b) => {
                let (ca, ta) = self.compile(a)?;
                let (cb, tb) = self.compile(b)?;
                let ty = match op {
                    BinOp::Iff | BinOp::Implies | BinOp::Or | BinOp::And => {
                        self.want(a, ta, Ty::Bool)?;
                        self.want(b, tb, Ty::Bool)?;
                        Ty::Bool
                    }
                    BinOp::Eq | BinOp::Ne => {
                        self.want(b, tb, ta)?;
                        Ty::Bool
                    }
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        self.want(a, ta, Ty::Int)?;
                        self.want(b, tb, Ty::Int)?;
                        Ty::Bool
                    }
                    BinOp::Add | BinOp::Sub | BinOp::Mul => {
                        self.want(a, ta, Ty::Int)?;
                        self.want(b, tb, Ty::Int)?;
                        Ty::Int
                    }
                };
                (Code::Bin(*op, Box::new(ca), Box::new(cb)), ty)
            }
            ExprKind::Ite(c, a, b) => {
                let (cc, tc) = self.compile(c)?;
                self.want(c, tc, Ty::Bool)?;
                let (ca, ta) = self.compile(a)?;
                let (cb, tb) = self.compile(b)?;
                self.want(b, tb, ta)?;
                (Code::Ite(Box::new(cc), Box::new(ca), Box::new(cb)), ta)
            }
        })
    }

    fn want(&self, e: &Expr, found: Ty, wanted: Ty) -> Result<(), IngestError> {
        if found == wanted {
            Ok(())
        } else {
            semantic(
                e.pos,
                format!(
                    "expected {} expression, found {} `{e}`",
                    wanted.name(),
                    found.name()
                ),
            )
        }
    }

    fn typed(&mut self, e: &'p Expr, ty: Ty) -> Result<Code, IngestError> {
        let (c, found) = self.compile(e)?;
        self.want(e, found, ty)?;
        Ok(c)
    }

    /// Evaluates an expression that may only mention constants.
    fn constant(&mut self, e: &'p Expr, ty: Ty) -> Result<i64, IngestError> {
        let saved = std::mem::take(&mut self.var_index);
        let code = self.typed(e, ty);
        self.var_index = saved;
        match code?.eval(&[]) {
            Some(v) => Ok(v),
            None => semantic(e.pos, "arithmetic overflow"),
        }
    }

    fn declare(
        &self,
        seen: &mut HashMap<&'p str, Pos>,
        name: &'p str,
        pos: Pos,
    ) -> Result<(), IngestError> {
        if let Some(first) = seen.insert(name, pos) {
            return semantic(pos, format!("{name} already declared at {first}"));
        }
        Ok(())
    }
}

fn overflow(pos: Pos) -> IngestError {
    IngestError::Semantic {
        line: pos.line,
        column: pos.column,
        message: "arithmetic overflow".into(),
    }
}

/// Builds the reachable state space. States are numbered in breadth-first
/// discovery order and named `var=value,...` in declaration order.
pub fn expand_program(
    prog: &ModuleLangProgram,
    max_states: usize,
) -> Result<LoadedModel, IngestError> {
    let mut c = Compiler {
        consts: HashMap::new(),
        vars: Vec::new(),
        var_index: HashMap::new(),
        formulas: HashMap::new(),
        expanding: Vec::new(),
    };
    let mut seen = HashMap::new();
    for k in &prog.constants {
        c.declare(&mut seen, &k.name, k.pos)?;
        let ty = match k.ty {
            ConstType::Int => Ty::Int,
            ConstType::Bool => Ty::Bool,
        };
        let v = c.constant(&k.value, ty)?;
        c.consts.insert(&k.name, (v, ty));
    }
    for f in &prog.formulas {
        c.declare(&mut seen, &f.name, f.pos)?;
        c.formulas.insert(&f.name, &f.body);
    }
    let mut init = Vec::new();
    for (m, module) in prog.modules.iter().enumerate() {
        for v in &module.vars {
            c.declare(&mut seen, &v.name, v.pos)?;
            let (lo, hi, ty) = match &v.ty {
                VarType::Bool => (0, 1, Ty::Bool),
                VarType::Range(lo, hi) => {
                    (c.constant(lo, Ty::Int)?, c.constant(hi, Ty::Int)?, Ty::Int)
                }
            };
            if lo > hi {
                return semantic(
                    v.pos,
                    format!("variable {} has empty range [{lo}..{hi}]", v.name),
                );
            }
            let start = match &v.init {
                Some(e) => c.constant(e, ty)?,
                None => lo,
            };
            if start < lo || start > hi {
                return semantic(
                    v.pos,
                    format!("initial value {start} of {} outside [{lo}..{hi}]", v.name),
                );
            }
            init.push(start);
            c.vars.push(Var {
                name: v.name.clone(),
                module: m,
                lo,
                hi,
                ty,
            });
        }
    }
    for (i, v) in prog.modules.iter().flat_map(|m| &m.vars).enumerate() {
        c.var_index.insert(&v.name, i);
    }
    if c.vars.is_empty() {
        return semantic(Pos::default(), "program declares no variables");
    }

    let mut local = Vec::new();
    let mut actions: IndexMap<&str, Vec<Vec<Cmd>>> = IndexMap::new();
    for (m, module) in prog.modules.iter().enumerate() {
        for cmd in &module.commands {
            let guard = c.typed(&cmd.guard, Ty::Bool)?;
            let mut updates = Vec::new();
            for (name, rhs) in &cmd.updates {
                let Some(&v) = c.var_index.get(name.as_str()) else {
                    return semantic(cmd.pos, format!("update of unknown variable {name}"));
                };
                if c.vars[v].module != m {
                    return semantic(
                        cmd.pos,
                        format!(
                            "module {} updates {name}, which belongs to module {}",
                            module.name, prog.modules[c.vars[v].module].name
                        ),
                    );
                }
                if updates.iter().any(|(u, _)| *u == v) {
                    return semantic(cmd.pos, format!("{name} updated twice"));
                }
                updates.push((v, c.typed(rhs, c.vars[v].ty)?));
            }
            let compiled = Cmd {
                module: m,
                guard,
                updates,
                pos: cmd.pos,
            };
            match &cmd.action {
                None => local.push(compiled),
                Some(a) => {
                    let per_module = actions
                        .entry(a.as_str())
                        .or_insert_with(|| (0..prog.modules.len()).map(|_| Vec::new()).collect());
                    per_module[m].push(compiled);
                }
            }
        }
    }
    // modules without any command for an action do not take part in it
    let actions: Vec<Vec<Vec<Cmd>>> = actions
        .into_values()
        .map(|per_module| per_module.into_iter().filter(|v| !v.is_empty()).collect())
        .collect();

    let name_of = |vals: &[i64]| -> String {
        c.vars
            .iter()
            .zip(vals)
            .map(|(v, &x)| match v.ty {
                Ty::Bool => format!("{}={}", v.name, x != 0),
                Ty::Int => format!("{}={x}", v.name),
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    let apply = |vals: &[i64], cmds: &[&Cmd], next: &mut Vec<i64>| -> Result<(), IngestError> {
        next.clear();
        next.extend_from_slice(vals);
        for cmd in cmds {
            for (v, rhs) in &cmd.updates {
                let x = rhs.eval(vals).ok_or_else(|| overflow(cmd.pos))?;
                let var = &c.vars[*v];
                if x < var.lo || x > var.hi {
                    return Err(IngestError::OutOfBounds {
                        line: cmd.pos.line,
                        column: cmd.pos.column,
                        module: prog.modules[cmd.module].name.clone(),
                        var: var.name.clone(),
                        value: x,
                        state: name_of(vals),
                    });
                }
                next[*v] = x;
            }
        }
        Ok(())
    };
    let enabled = |cmd: &Cmd, vals: &[i64]| -> Result<bool, IngestError> {
        Ok(cmd.guard.eval(vals).ok_or_else(|| overflow(cmd.pos))? != 0)
    };

    let mut index: HashMap<Vec<i64>, u32> = HashMap::new();
    let mut states: Vec<Vec<i64>> = vec![init.clone()];
    index.insert(init, 0);
    let mut edges = Vec::new();
    let mut next = Vec::with_capacity(c.vars.len());
    let mut targets: Vec<Vec<i64>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let vals = states[i].clone();
        targets.clear();
        for cmd in &local {
            if enabled(cmd, &vals)? {
                apply(&vals, &[cmd], &mut next)?;
                targets.push(next.clone());
            }
        }
        for per_module in &actions {
            let mut choices: Vec<Vec<&Cmd>> = Vec::with_capacity(per_module.len());
            for cmds in per_module {
                let mut on = Vec::new();
                for cmd in cmds {
                    if enabled(cmd, &vals)? {
                        on.push(cmd);
                    }
                }
                choices.push(on);
            }
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            // every combination of one enabled command per participating module
            let mut pick = vec![0usize; choices.len()];
            'combos: loop {
                let combo: Vec<&Cmd> = pick.iter().zip(&choices).map(|(&k, ch)| ch[k]).collect();
                apply(&vals, &combo, &mut next)?;
                targets.push(next.clone());
                let mut d = choices.len();
                loop {
                    if d == 0 {
                        break 'combos;
                    }
                    d -= 1;
                    pick[d] += 1;
                    if pick[d] < choices[d].len() {
                        break;
                    }
                    pick[d] = 0;
                }
            }
        }
        if targets.is_empty() {
            return Err(IngestError::DeadlockState(name_of(&vals)));
        }
        for t in targets.drain(..) {
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if states.len() >= max_states {
                        return Err(IngestError::StateCap { cap: max_states });
                    }
                    let id = states.len() as u32;
                    index.insert(t.clone(), id);
                    states.push(t);
                    id
                }
            };
            edges.push((StateId::from(i), StateId(id)));
        }
        i += 1;
    }
    drop(index);

    let names: Vec<String> = states.iter().map(|v| name_of(v)).collect();
    let ts = TransitionSystem::new(names, StateId(0), edges)?;
    let set_where = |code: &Code, pos: Pos| -> Result<StateSet, IngestError> {
        let mut set = ts.empty_set();
        for (s, vals) in states.iter().enumerate() {
            if code.eval(vals).ok_or_else(|| overflow(pos))? != 0 {
                set.insert(s);
            }
        }
        Ok(set)
    };
    let mut labels = IndexMap::new();
    for l in &prog.labels {
        let code = c.typed(&l.body, Ty::Bool)?;
        if labels
            .insert(l.name.clone(), set_where(&code, l.pos)?)
            .is_some()
        {
            return semantic(l.pos, format!("label {} declared twice", l.name));
        }
    }
    let mut owners = Vec::new();
    for m in &prog.modules {
        if let Some(owner) = &m.owner {
            let code = c.typed(owner, Ty::Bool)?;
            owners.push((m.name.clone(), set_where(&code, owner.pos)?));
        }
    }
    let mut int_formulas = IndexMap::new();
    for f in &prog.formulas {
        let (code, ty) = c.compile(&f.body)?;
        if ty == Ty::Int {
            let values = states
                .iter()
                .map(|vals| code.eval(vals).ok_or_else(|| overflow(f.pos)))
                .collect::<Result<Vec<_>, _>>()?;
            int_formulas.insert(f.name.clone(), values);
        }
    }
    Ok(LoadedModel {
        ts,
        objective: None,
        run: None,
        groups: None,
        labels,
        owners: (!owners.is_empty()).then_some(owners),
        int_formulas,
    })
}
