//! Analysis AST for the supported C99 subset.
//!
//! Guard expressions of `if`/`while` are checked for well-formedness by
//! the parser but contribute no fields here: the calculus bounds are
//! guard-insensitive. Binary expressions are restricted to atomic
//! operands; the parser rejects anything deeper.

use std::fmt;
use std::fmt::Write as _;

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Loc {
    pub line: u32,
    pub col: u32,
}

impl Loc {
    pub fn new(line: u32, col: u32) -> Loc {
        Loc { line, col }
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub functions: Vec<FunctionDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub name_loc: Loc,
    /// Parameters in declaration order.
    pub params: Vec<(String, Loc)>,
    /// Locals in source (first-occurrence) order.
    pub declared_vars: Vec<(String, Loc)>,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOpKind {
    Add,
    Sub,
    Mul,
}

impl BinOpKind {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOpKind::Add => "+",
            BinOpKind::Sub => "-",
            BinOpKind::Mul => "*",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Var { name: String, loc: Loc },
    Const { value: i64, loc: Loc },
}

impl Atom {
    pub fn loc(&self) -> Loc {
        match self {
            Atom::Var { loc, .. } | Atom::Const { loc, .. } => *loc,
        }
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            Atom::Var { name, .. } => Some(name),
            Atom::Const { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom),
    BinOp {
        op: BinOpKind,
        left: Atom,
        right: Atom,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Assign {
        target: String,
        expr: Expr,
        loc: Loc,
    },
    If {
        then_branch: Vec<Stmt>,
        else_branch: Vec<Stmt>,
        loc: Loc,
    },
    While {
        body: Vec<Stmt>,
        loc: Loc,
    },
    Skip {
        loc: Loc,
    },
}

impl Stmt {
    pub fn loc(&self) -> Loc {
        match self {
            Stmt::Assign { loc, .. }
            | Stmt::If { loc, .. }
            | Stmt::While { loc, .. }
            | Stmt::Skip { loc } => *loc,
        }
    }
}

impl Program {
    /// Structural equality modulo source locations.
    pub fn structurally_eq(&self, other: &Program) -> bool {
        self.functions.len() == other.functions.len()
            && self
                .functions
                .iter()
                .zip(&other.functions)
                .all(|(a, b)| a.structurally_eq(b))
    }

    /// Renders the AST back to compilable subset C. Guards are not
    /// retained, so conditions print as the placeholder `1`.
    pub fn to_c(&self) -> String {
        let mut out = String::new();
        for f in &self.functions {
            let params = f
                .params
                .iter()
                .map(|(p, _)| format!("int {p}"))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "int {}({}) {{", f.name, params);
            for (v, _) in &f.declared_vars {
                let _ = writeln!(out, "    int {v};");
            }
            write_stmts(&mut out, &f.body, 1);
            out.push_str("}\n");
        }
        out
    }
}

impl FunctionDef {
    pub fn structurally_eq(&self, other: &FunctionDef) -> bool {
        self.name == other.name
            && names(&self.params) == names(&other.params)
            && names(&self.declared_vars) == names(&other.declared_vars)
            && stmts_eq(&self.body, &other.body)
    }
}

fn names(list: &[(String, Loc)]) -> Vec<&str> {
    list.iter().map(|(n, _)| n.as_str()).collect()
}

fn stmts_eq(a: &[Stmt], b: &[Stmt]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| stmt_eq(x, y))
}

fn stmt_eq(a: &Stmt, b: &Stmt) -> bool {
    match (a, b) {
        (
            Stmt::Assign {
                target: t1,
                expr: e1,
                ..
            },
            Stmt::Assign {
                target: t2,
                expr: e2,
                ..
            },
        ) => t1 == t2 && expr_eq(e1, e2),
        (
            Stmt::If {
                then_branch: ta,
                else_branch: ea,
                ..
            },
            Stmt::If {
                then_branch: tb,
                else_branch: eb,
                ..
            },
        ) => stmts_eq(ta, tb) && stmts_eq(ea, eb),
        (Stmt::While { body: ba, .. }, Stmt::While { body: bb, .. }) => stmts_eq(ba, bb),
        (Stmt::Skip { .. }, Stmt::Skip { .. }) => true,
        _ => false,
    }
}

fn expr_eq(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Atom(x), Expr::Atom(y)) => atom_eq(x, y),
        (
            Expr::BinOp {
                op: o1,
                left: l1,
                right: r1,
            },
            Expr::BinOp {
                op: o2,
                left: l2,
                right: r2,
            },
        ) => o1 == o2 && atom_eq(l1, l2) && atom_eq(r1, r2),
        _ => false,
    }
}

fn atom_eq(a: &Atom, b: &Atom) -> bool {
    match (a, b) {
        (Atom::Var { name: n1, .. }, Atom::Var { name: n2, .. }) => n1 == n2,
        (Atom::Const { value: v1, .. }, Atom::Const { value: v2, .. }) => v1 == v2,
        _ => false,
    }
}

fn write_stmts(out: &mut String, stmts: &[Stmt], depth: usize) {
    let pad = "    ".repeat(depth);
    for s in stmts {
        match s {
            Stmt::Assign { target, expr, .. } => {
                let _ = writeln!(out, "{pad}{target} = {};", render_expr(expr));
            }
            Stmt::If {
                then_branch,
                else_branch,
                ..
            } => {
                let _ = writeln!(out, "{pad}if (1) {{");
                write_stmts(out, then_branch, depth + 1);
                if else_branch.is_empty() {
                    let _ = writeln!(out, "{pad}}}");
                } else {
                    let _ = writeln!(out, "{pad}}} else {{");
                    write_stmts(out, else_branch, depth + 1);
                    let _ = writeln!(out, "{pad}}}");
                }
            }
            Stmt::While { body, .. } => {
                let _ = writeln!(out, "{pad}while (1) {{");
                write_stmts(out, body, depth + 1);
                let _ = writeln!(out, "{pad}}}");
            }
            Stmt::Skip { .. } => {
                let _ = writeln!(out, "{pad};");
            }
        }
    }
}

fn render_expr(expr: &Expr) -> String {
    match expr {
        Expr::Atom(a) => render_atom(a),
        Expr::BinOp { op, left, right } => format!(
            "{} {} {}",
            render_atom(left),
            op.symbol(),
            render_atom(right)
        ),
    }
}

fn render_atom(atom: &Atom) -> String {
    match atom {
        Atom::Var { name, .. } => name.clone(),
        Atom::Const { value, .. } => value.to_string(),
    }
}
