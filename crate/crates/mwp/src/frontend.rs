//! Frontend: parsing the C99 subset into the analysis AST, with
//! per-function variable collection and located diagnostics.

pub mod ast;
pub mod diag;
mod lexer;
mod parser;

pub use ast::{Atom, BinOpKind, Expr, FunctionDef, Loc, Program, Stmt};
pub use diag::Diagnostic;
pub use parser::parse;

/// The ordered variable universe of a function: parameters first (in
/// declaration order), then locals in first-occurrence order. Checks
/// that names are distinct and that every used variable is declared.
pub fn collect_variables(f: &FunctionDef) -> Result<Vec<String>, Diagnostic> {
    let mut vars: Vec<String> = Vec::new();
    for (name, loc) in f.params.iter().chain(f.declared_vars.iter()) {
        if vars.iter().any(|v| v == name) {
            return Err(Diagnostic::DuplicateDeclaration {
                loc: *loc,
                name: name.clone(),
            });
        }
        vars.push(name.clone());
    }
    check_uses(&f.body, &vars)?;
    Ok(vars)
}

fn check_uses(stmts: &[Stmt], vars: &[String]) -> Result<(), Diagnostic> {
    let declared = |name: &str| vars.iter().any(|v| v == name);
    for stmt in stmts {
        match stmt {
            Stmt::Assign { target, expr, loc } => {
                if !declared(target) {
                    return Err(Diagnostic::UndeclaredVariable {
                        loc: *loc,
                        name: target.clone(),
                    });
                }
                let atoms: Vec<&Atom> = match expr {
                    Expr::Atom(a) => vec![a],
                    Expr::BinOp { left, right, .. } => vec![left, right],
                };
                for atom in atoms {
                    if let Atom::Var { name, loc } = atom {
                        if !declared(name) {
                            return Err(Diagnostic::UndeclaredVariable {
                                loc: *loc,
                                name: name.clone(),
                            });
                        }
                    }
                }
            }
            Stmt::If {
                then_branch,
                else_branch,
                ..
            } => {
                check_uses(then_branch, vars)?;
                check_uses(else_branch, vars)?;
            }
            Stmt::While { body, .. } => check_uses(body, vars)?,
            Stmt::Skip { .. } => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_one(src: &str) -> FunctionDef {
        let mut p = parse(src).unwrap();
        assert_eq!(p.functions.len(), 1);
        p.functions.remove(0)
    }

    #[test]
    fn minimal_accept() {
        let f = parse_one("int f(int x){ x = x + 1; }");
        assert_eq!(f.name, "f");
        assert_eq!(f.params.len(), 1);
        assert_eq!(f.body.len(), 1);
        match &f.body[0] {
            Stmt::Assign { target, expr, .. } => {
                assert_eq!(target, "x");
                match expr {
                    Expr::BinOp { op, left, right } => {
                        assert_eq!(*op, BinOpKind::Add);
                        assert_eq!(left.var_name(), Some("x"));
                        assert!(matches!(right, Atom::Const { value: 1, .. }));
                    }
                    other => panic!("expected binop, got {other:?}"),
                }
            }
            other => panic!("expected assignment, got {other:?}"),
        }
    }

    #[test]
    fn pointer_parameter_is_unsupported() {
        let err = parse("int f(int *x){ ; }").unwrap_err();
        match err {
            Diagnostic::Unsupported { construct, .. } => {
                assert_eq!(construct, "pointer declarator")
            }
            other => panic!("expected unsupported construct, got {other:?}"),
        }
    }

    #[test]
    fn nary_expression_is_rejected_with_hint() {
        let err = parse("int f(int x, int y, int z, int w){ x = y + z + w; }").unwrap_err();
        match err {
            Diagnostic::Unsupported {
                construct, hint, ..
            } => {
                assert_eq!(construct, "n-ary expression");
                assert_eq!(hint, Some("split into multiple statements"));
            }
            other => panic!("expected unsupported construct, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_statements_are_named() {
        let cases = [
            ("int f(int x){ for(;;) ; }", "for loop"),
            ("int f(int x){ return; }", "return statement"),
            ("int f(int x){ g(x); }", "function call"),
            ("int f(int x){ x = x / 2; }", "operator '/'"),
            ("int f(int x){ float y; }", "non-integer type 'float'"),
            ("int f(int x){ int a[3]; }", "array declarator"),
            ("int f(int x){ x += 1; }", "compound assignment"),
            ("int f(int x){ x++; }", "increment operator"),
            ("int f(int x){ x = (x + 1); }", "parenthesized expression"),
            ("int f(int x){ x = -x; }", "unary minus on a variable"),
        ];
        for (src, expected) in cases {
            match parse(src).unwrap_err() {
                Diagnostic::Unsupported { construct, .. } => {
                    assert_eq!(construct, expected, "for {src}")
                }
                other => panic!("expected unsupported construct for {src}, got {other:?}"),
            }
        }
    }

    #[test]
    fn declarations_with_initializers_become_assignments() {
        let f = parse_one("int f(int x){ int y = x, z; z = 3; }");
        assert_eq!(
            f.declared_vars.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
            ["y", "z"]
        );
        assert_eq!(f.body.len(), 2);
        assert!(matches!(&f.body[0], Stmt::Assign { target, .. } if target == "y"));
    }

    #[test]
    fn collect_variables_orders_params_then_locals() {
        let f = parse_one("int f(int x, int y){ int z; z = x; if (x < y) { int q; q = z; } }");
        assert_eq!(collect_variables(&f).unwrap(), ["x", "y", "z", "q"]);
    }

    #[test]
    fn collect_variables_params_only() {
        let f = parse_one("int f(int a, int b){ a = b; }");
        assert_eq!(collect_variables(&f).unwrap(), ["a", "b"]);
    }

    #[test]
    fn duplicate_declaration_is_reported() {
        let f = parse_one("int f(int x){ int x; }");
        assert!(matches!(
            collect_variables(&f),
            Err(Diagnostic::DuplicateDeclaration { name, .. }) if name == "x"
        ));
        let f = parse_one("int f(int x){ if (x) { int y; } else { int y; } }");
        assert!(matches!(
            collect_variables(&f),
            Err(Diagnostic::DuplicateDeclaration { name, .. }) if name == "y"
        ));
    }

    #[test]
    fn undeclared_variable_is_reported() {
        let f = parse_one("int f(int x){ x = y; }");
        match collect_variables(&f) {
            Err(Diagnostic::UndeclaredVariable { name, loc }) => {
                assert_eq!(name, "y");
                assert_eq!(loc, Loc::new(1, 19));
            }
            other => panic!("expected undeclared variable, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_function_names_are_rejected() {
        assert!(matches!(
            parse("int f(int x){ ; } int f(int y){ ; }"),
            Err(Diagnostic::DuplicateDeclaration { .. })
        ));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse(""), Err(Diagnostic::Syntax { .. })));
        assert!(matches!(parse("  \n// nothing\n"), Err(Diagnostic::Syntax { .. })));
    }

    #[test]
    fn guards_parse_but_leave_no_trace() {
        let f = parse_one(
            "int f(int x, int y){ while (x < y && !(x == 0) || y >= x + 1) { x = x + 1; } }",
        );
        assert!(matches!(&f.body[0], Stmt::While { body, .. } if body.len() == 1));
    }

    #[test]
    fn assignment_in_guard_gets_a_hint() {
        let err = parse("int f(int x){ while (x = 1) { ; } }").unwrap_err();
        match err {
            Diagnostic::Syntax { message, .. } => {
                assert!(message.contains("did you mean '=='"), "{message}")
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn if_else_and_nesting() {
        let f = parse_one(
            "int f(int x, int y){ if (x) { x = y; } else if (y) { y = x; } else { ; } }",
        );
        match &f.body[0] {
            Stmt::If {
                then_branch,
                else_branch,
                ..
            } => {
                assert_eq!(then_branch.len(), 1);
                assert_eq!(else_branch.len(), 1);
                assert!(matches!(&else_branch[0], Stmt::If { .. }));
            }
            other => panic!("expected if, got {other:?}"),
        }
    }

    #[test]
    fn void_parameter_list_is_empty() {
        let f = parse_one("int f(void){ ; }");
        assert!(f.params.is_empty());
    }

    #[test]
    fn negative_constants_are_atoms() {
        let f = parse_one("int f(int x){ x = -3; }");
        assert!(matches!(
            &f.body[0],
            Stmt::Assign {
                expr: Expr::Atom(Atom::Const { value: -3, .. }),
                ..
            }
        ));
    }

    #[test]
    fn pretty_print_round_trips() {
        let src = "int f(int x, int y){ int z = 0; while (x < y) { if (z) { z = z + x; } else { ; } x = x - 1; } }\nint g(void){ int a; a = -5; }";
        let program = parse(src).unwrap();
        let printed = program.to_c();
        let reparsed = parse(&printed).unwrap_or_else(|e| panic!("reparse failed: {e}\n{printed}"));
        assert!(
            program.structurally_eq(&reparsed),
            "round trip changed the AST:\n{printed}"
        );
    }

    #[test]
    fn block_statements_flatten() {
        let f = parse_one("int f(int x){ { x = 1; { x = 2; } } x = 3; }");
        assert_eq!(f.body.len(), 3);
    }
}
