//! Applies the flow calculus over the AST: assigns derivation-point
//! indices, derives one relation per function, and evaluates which
//! choices keep every flow polynomially bounded.
//!
//! All non-determinism lives in binary-operation assignments: each such
//! statement consumes one derivation point with three alternatives.
//! Additive operations over *distinct* operands spread `{w, m/p, p/m}`
//! over the alternatives; a variable multiplied (or added to itself)
//! grows polynomially no matter the choice and contributes an unguarded
//! `p`, which is what lets loop correction catch exponential updates.

use std::collections::BTreeMap;

use crate::delta_graph::{ChoiceSet, DeltaGraph};
use crate::frontend::ast::{Atom, BinOpKind, Expr, FunctionDef, Loc, Program, Stmt};
use crate::frontend::{collect_variables, Diagnostic};
use crate::matrix::FlowMatrix;
use crate::monomial::{Delta, Monomial};
use crate::polynomial::Polynomial;
use crate::relation::{Relation, RelationList};
use crate::semiring::Coefficient;

/// Issues derivation-point indices and remembers the source site of
/// each one.
#[derive(Debug, Clone, Default)]
pub struct DerivationContext {
    next_index: usize,
    index_sites: BTreeMap<usize, Loc>,
}

impl DerivationContext {
    pub fn new() -> DerivationContext {
        DerivationContext::default()
    }

    pub fn fresh(&mut self, site: Loc) -> usize {
        let index = self.next_index;
        self.next_index += 1;
        self.index_sites.insert(index, site);
        index
    }

    pub fn num_indices(&self) -> usize {
        self.next_index
    }

    pub fn site(&self, index: usize) -> Option<Loc> {
        self.index_sites.get(&index).copied()
    }

    pub fn sites(&self) -> &BTreeMap<usize, Loc> {
        &self.index_sites
    }
}

/// Everything the analysis produces for one function.
#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub relation: Relation,
    pub num_indices: usize,
    pub passing: ChoiceSet,
    /// Variables whose column carries ∞ under *every* assignment.
    pub infinite_vars: Vec<String>,
}

/// One entry of the per-function analysis map.
#[derive(Debug, Clone)]
pub struct FunctionAnalysis {
    pub name: String,
    pub result: Result<AnalysisResult, Diagnostic>,
}

fn left_operand_poly(k: usize) -> Polynomial {
    Polynomial::from_monomials(vec![
        Monomial::new(Coefficient::W, vec![Delta::new(0, k)]),
        Monomial::new(Coefficient::M, vec![Delta::new(1, k)]),
        Monomial::new(Coefficient::P, vec![Delta::new(2, k)]),
    ])
}

fn right_operand_poly(k: usize) -> Polynomial {
    Polynomial::from_monomials(vec![
        Monomial::new(Coefficient::W, vec![Delta::new(0, k)]),
        Monomial::new(Coefficient::P, vec![Delta::new(1, k)]),
        Monomial::new(Coefficient::M, vec![Delta::new(2, k)]),
    ])
}

fn polynomial_poly() -> Polynomial {
    Polynomial::from_monomial(Monomial::new(Coefficient::P, Vec::new()))
}

/// The relation of a single assignment: identity everywhere except the
/// target's column, which becomes the expression's dependency vector.
///
/// * plain copy `x = y`: `m` at row y, no derivation point consumed;
/// * constant: empty column (the old value is overwritten, nothing
///   flows in);
/// * binary operation with at least one variable operand: one fresh
///   derivation point; additive ops with distinct operands get the
///   three-way alternative split, multiplicative ops and self-referent
///   additions get an unguarded `p`.
pub fn assign_vector(
    target: &str,
    expr: &Expr,
    ctx: &mut DerivationContext,
    vars: &[String],
    site: Loc,
) -> Relation {
    let dim = vars.len();
    let col = vars
        .iter()
        .position(|v| v == target)
        .expect("assignment target must be in the variable list");
    let row_of = |name: &str| {
        vars.iter()
            .position(|v| v == name)
            .expect("operand must be in the variable list")
    };
    let mut matrix = FlowMatrix::identity(dim);
    for row in 0..dim {
        matrix.set(row, col, Polynomial::zero());
    }
    match expr {
        Expr::Atom(Atom::Var { name, .. }) => {
            matrix.set(row_of(name), col, Polynomial::unit());
        }
        Expr::Atom(Atom::Const { .. }) => {}
        Expr::BinOp { op, left, right } => {
            let left_var = left.var_name();
            let right_var = right.var_name();
            if left_var.is_none() && right_var.is_none() {
                // constant fold target: no dependencies, no choice
                return Relation::new(vars.to_vec(), matrix);
            }
            let k = ctx.fresh(site);
            match op {
                BinOpKind::Mul => {
                    if let Some(v) = left_var {
                        matrix.set(row_of(v), col, polynomial_poly());
                    }
                    if let Some(v) = right_var {
                        matrix.set(row_of(v), col, polynomial_poly());
                    }
                }
                BinOpKind::Add | BinOpKind::Sub => match (left_var, right_var) {
                    (Some(l), Some(r)) if l == r => {
                        // x + x doubles: polynomial under every choice
                        matrix.set(row_of(l), col, polynomial_poly());
                    }
                    _ => {
                        if let Some(l) = left_var {
                            matrix.set(row_of(l), col, left_operand_poly(k));
                        }
                        if let Some(r) = right_var {
                            matrix.set(row_of(r), col, right_operand_poly(k));
                        }
                    }
                },
            }
        }
    }
    Relation::new(vars.to_vec(), matrix)
}

/// Recursively derives the relation of a statement sequence:
/// sequencing composes, `if` joins its branches, `while` closes its
/// body with the local ∞ correction.
pub fn compute_relation(
    stmts: &[Stmt],
    ctx: &mut DerivationContext,
    vars: &[String],
) -> Relation {
    let mut list = RelationList::new(Relation::identity(vars.to_vec()));
    for stmt in stmts {
        let r = match stmt {
            Stmt::Skip { .. } => Relation::identity(vars.to_vec()),
            Stmt::Assign { target, expr, loc } => assign_vector(target, expr, ctx, vars, *loc),
            Stmt::If {
                then_branch,
                else_branch,
                ..
            } => {
                let then_rel = compute_relation(then_branch, ctx, vars);
                let else_rel = compute_relation(else_branch, ctx, vars);
                then_rel.sum(&else_rel)
            }
            Stmt::While { body, .. } => compute_relation(body, ctx, vars).while_close(),
        };
        list.push(r);
    }
    list.compose_all()
}

/// Computes the passing-choice set and the per-variable verdicts from
/// the ∞ guards of the final relation. Works on the delta graph, never
/// by enumerating `3^num_indices` assignments, but agrees exactly with
/// that enumeration.
pub fn evaluate(relation: &Relation, num_indices: usize) -> (ChoiceSet, Vec<String>) {
    let mut graph = DeltaGraph::from_inf_guards(relation.matrix().entries());
    graph.fusion();
    let passing = graph.passing_assignments(num_indices);
    let mut infinite_vars = Vec::new();
    for (col, var) in relation.variables().iter().enumerate() {
        let mut column_graph =
            DeltaGraph::from_inf_guards(relation.matrix().column(col).map(|(_, p)| p));
        column_graph.fusion();
        if column_graph.passing_assignments(num_indices).is_empty() {
            infinite_vars.push(var.clone());
        }
    }
    (passing, infinite_vars)
}

/// Variable collection and relation derivation for one function,
/// without evaluation.
pub fn function_relation(
    f: &FunctionDef,
) -> Result<(Relation, DerivationContext), Diagnostic> {
    let vars = collect_variables(f)?;
    let mut ctx = DerivationContext::new();
    let relation = compute_relation(&f.body, &mut ctx, &vars);
    Ok((relation, ctx))
}

pub fn analyze_function(f: &FunctionDef) -> Result<AnalysisResult, Diagnostic> {
    let (relation, ctx) = function_relation(f)?;
    let num_indices = ctx.num_indices();
    let (passing, infinite_vars) = evaluate(&relation, num_indices);
    Ok(AnalysisResult {
        relation,
        num_indices,
        passing,
        infinite_vars,
    })
}

/// Per-function pipeline over a whole translation unit. A function that
/// fails its frontend checks carries its diagnostic; the remaining
/// functions are still analyzed.
pub fn analyze(program: &Program) -> Vec<FunctionAnalysis> {
    program
        .functions
        .iter()
        .map(|f| FunctionAnalysis {
            name: f.name.clone(),
            result: analyze_function(f),
        })
        .collect()
}
