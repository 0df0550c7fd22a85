//! Recursive-descent parser for the supported C99 subset.
//!
//! Accepted translation units: one or more function definitions with
//! `int` parameters and locals; statements limited to declarations,
//! assignments of atoms or binary operations over atoms, `if`/`else`,
//! `while`, empty statements, and braced blocks. Everything else is a
//! located error. Nested expressions are rejected, never silently
//! decomposed: auto-flattening would change the derivation-point count
//! behind the user's back.

use super::ast::{Atom, BinOpKind, Expr, FunctionDef, Loc, Program, Stmt};
use super::diag::Diagnostic;
use super::lexer::{lex, Token, TokenKind};

const SPLIT_HINT: &str = "split into multiple statements";

/// Parses a translation unit. Every failure is a located diagnostic;
/// the parser never panics on any input.
pub fn parse(source: &str) -> Result<Program, Diagnostic> {
    let tokens = lex(source)?;
    Parser { tokens, pos: 0 }.program()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek_at(&self, offset: usize) -> &Token {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().kind == *kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, Diagnostic> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            let t = self.peek();
            Err(Diagnostic::syntax(
                t.loc,
                format!("expected {what}, found {}", t.kind.describe()),
            ))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Loc), Diagnostic> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Ident(name) => {
                self.advance();
                Ok((name, t.loc))
            }
            _ => Err(Diagnostic::syntax(
                t.loc,
                format!("expected {what}, found {}", t.kind.describe()),
            )),
        }
    }

    fn program(&mut self) -> Result<Program, Diagnostic> {
        let mut functions: Vec<FunctionDef> = Vec::new();
        while self.peek().kind != TokenKind::Eof {
            let f = self.function()?;
            if functions.iter().any(|g| g.name == f.name) {
                return Err(Diagnostic::DuplicateDeclaration {
                    loc: f.name_loc,
                    name: f.name,
                });
            }
            functions.push(f);
        }
        if functions.is_empty() {
            return Err(Diagnostic::syntax(
                self.peek().loc,
                "expected at least one function definition",
            ));
        }
        Ok(Program { functions })
    }

    fn function(&mut self) -> Result<FunctionDef, Diagnostic> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::KwInt | TokenKind::KwVoid => {
                self.advance();
            }
            TokenKind::Reserved(k) if is_type_keyword(k) => {
                return Err(Diagnostic::unsupported(
                    t.loc,
                    format!("non-integer type '{k}'"),
                ));
            }
            _ => {
                return Err(Diagnostic::syntax(
                    t.loc,
                    format!("expected a function definition, found {}", t.kind.describe()),
                ));
            }
        }
        if self.peek().kind == TokenKind::Star {
            return Err(Diagnostic::unsupported(self.peek().loc, "pointer declarator"));
        }
        let (name, name_loc) = self.expect_ident("function name")?;
        self.expect(TokenKind::LParen, "'(' after function name")?;
        let params = self.params()?;
        self.expect(TokenKind::RParen, "')' after parameters")?;
        self.expect(TokenKind::LBrace, "'{' to start the function body")?;
        let mut declared_vars = Vec::new();
        let body = self.block(&mut declared_vars)?;
        Ok(FunctionDef {
            name,
            name_loc,
            params,
            declared_vars,
            body,
        })
    }

    fn params(&mut self) -> Result<Vec<(String, Loc)>, Diagnostic> {
        if self.peek().kind == TokenKind::RParen {
            return Ok(Vec::new());
        }
        // `f(void)` declares no parameters
        if self.peek().kind == TokenKind::KwVoid && self.peek_at(1).kind == TokenKind::RParen {
            self.advance();
            return Ok(Vec::new());
        }
        let mut params = Vec::new();
        loop {
            let t = self.peek().clone();
            match t.kind {
                TokenKind::KwInt => {
                    self.advance();
                }
                TokenKind::Reserved(k) if is_type_keyword(k) => {
                    return Err(Diagnostic::unsupported(
                        t.loc,
                        format!("non-integer type '{k}'"),
                    ));
                }
                _ => {
                    return Err(Diagnostic::syntax(
                        t.loc,
                        format!("expected parameter type, found {}", t.kind.describe()),
                    ));
                }
            }
            if self.peek().kind == TokenKind::Star {
                return Err(Diagnostic::unsupported(self.peek().loc, "pointer declarator"));
            }
            let (name, loc) = self.expect_ident("parameter name")?;
            if self.peek().kind == TokenKind::LBracket {
                return Err(Diagnostic::unsupported(self.peek().loc, "array declarator"));
            }
            params.push((name, loc));
            if !self.eat(&TokenKind::Comma) {
                return Ok(params);
            }
        }
    }

    /// Consumes statements up to and including the closing brace.
    fn block(&mut self, declared: &mut Vec<(String, Loc)>) -> Result<Vec<Stmt>, Diagnostic> {
        let mut stmts = Vec::new();
        loop {
            match self.peek().kind {
                TokenKind::RBrace => {
                    self.advance();
                    return Ok(stmts);
                }
                TokenKind::Eof => {
                    return Err(Diagnostic::syntax(
                        self.peek().loc,
                        "unexpected end of file, missing '}'",
                    ));
                }
                _ => stmts.extend(self.block_item(declared)?),
            }
        }
    }

    fn block_item(&mut self, declared: &mut Vec<(String, Loc)>) -> Result<Vec<Stmt>, Diagnostic> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::KwInt => self.declaration(declared),
            TokenKind::KwIf => self.if_stmt(declared).map(|s| vec![s]),
            TokenKind::KwWhile => self.while_stmt(declared).map(|s| vec![s]),
            TokenKind::Semi => {
                self.advance();
                Ok(vec![Stmt::Skip { loc: t.loc }])
            }
            TokenKind::LBrace => {
                self.advance();
                self.block(declared)
            }
            TokenKind::Ident(name) => {
                self.advance();
                self.assignment(name, t.loc).map(|s| vec![s])
            }
            TokenKind::Reserved(k) => Err(reserved_statement(k, t.loc)),
            TokenKind::Star => Err(Diagnostic::unsupported(t.loc, "pointer dereference")),
            TokenKind::Amp => Err(Diagnostic::unsupported(t.loc, "address-of operator")),
            TokenKind::PlusPlus => Err(Diagnostic::unsupported(t.loc, "increment operator")),
            TokenKind::MinusMinus => Err(Diagnostic::unsupported(t.loc, "decrement operator")),
            _ => Err(Diagnostic::syntax(
                t.loc,
                format!("expected a statement, found {}", t.kind.describe()),
            )),
        }
    }

    fn declaration(&mut self, declared: &mut Vec<(String, Loc)>) -> Result<Vec<Stmt>, Diagnostic> {
        self.advance(); // 'int'
        let mut stmts = Vec::new();
        loop {
            if self.peek().kind == TokenKind::Star {
                return Err(Diagnostic::unsupported(self.peek().loc, "pointer declarator"));
            }
            let (name, loc) = self.expect_ident("variable name")?;
            if self.peek().kind == TokenKind::LBracket {
                return Err(Diagnostic::unsupported(self.peek().loc, "array declarator"));
            }
            declared.push((name.clone(), loc));
            if self.eat(&TokenKind::Assign) {
                let expr = self.expr()?;
                stmts.push(Stmt::Assign {
                    target: name,
                    expr,
                    loc,
                });
            }
            if self.eat(&TokenKind::Comma) {
                continue;
            }
            self.expect(TokenKind::Semi, "';' after declaration")?;
            return Ok(stmts);
        }
    }

    fn if_stmt(&mut self, declared: &mut Vec<(String, Loc)>) -> Result<Stmt, Diagnostic> {
        let loc = self.advance().loc; // 'if'
        self.expect(TokenKind::LParen, "'(' after 'if'")?;
        self.guard()?;
        self.expect(TokenKind::RParen, "')' after condition")?;
        let then_branch = self.branch_body(declared)?;
        let else_branch = if self.eat(&TokenKind::KwElse) {
            if self.peek().kind == TokenKind::KwIf {
                // else-if chains nest as a single-statement else branch
                vec![self.if_stmt(declared)?]
            } else {
                self.branch_body(declared)?
            }
        } else {
            Vec::new()
        };
        Ok(Stmt::If {
            then_branch,
            else_branch,
            loc,
        })
    }

    fn while_stmt(&mut self, declared: &mut Vec<(String, Loc)>) -> Result<Stmt, Diagnostic> {
        let loc = self.advance().loc; // 'while'
        self.expect(TokenKind::LParen, "'(' after 'while'")?;
        self.guard()?;
        self.expect(TokenKind::RParen, "')' after condition")?;
        let body = self.branch_body(declared)?;
        Ok(Stmt::While { body, loc })
    }

    /// A braced block or a single statement. C99 does not allow a bare
    /// declaration as the body of a condition or loop.
    fn branch_body(&mut self, declared: &mut Vec<(String, Loc)>) -> Result<Vec<Stmt>, Diagnostic> {
        if self.eat(&TokenKind::LBrace) {
            return self.block(declared);
        }
        if self.peek().kind == TokenKind::KwInt {
            return Err(Diagnostic::syntax(
                self.peek().loc,
                "a declaration cannot be the body of a condition or loop; use braces",
            ));
        }
        self.block_item(declared)
    }

    fn assignment(&mut self, target: String, loc: Loc) -> Result<Stmt, Diagnostic> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Assign => {
                self.advance();
                let expr = self.expr()?;
                self.expect(TokenKind::Semi, "';' after assignment")?;
                Ok(Stmt::Assign { target, expr, loc })
            }
            TokenKind::LParen => Err(Diagnostic::unsupported(t.loc, "function call")),
            TokenKind::LBracket => Err(Diagnostic::unsupported(t.loc, "array subscript")),
            TokenKind::PlusPlus => Err(Diagnostic::unsupported(t.loc, "increment operator")),
            TokenKind::MinusMinus => Err(Diagnostic::unsupported(t.loc, "decrement operator")),
            TokenKind::PlusEq | TokenKind::MinusEq | TokenKind::StarEq | TokenKind::SlashEq => {
                Err(Diagnostic::unsupported(t.loc, "compound assignment"))
            }
            _ => Err(Diagnostic::syntax(
                t.loc,
                format!("expected '=' after '{target}', found {}", t.kind.describe()),
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let left = self.atom()?;
        let t = self.peek().clone();
        let op = match t.kind {
            TokenKind::Plus => BinOpKind::Add,
            TokenKind::Minus => BinOpKind::Sub,
            TokenKind::Star => BinOpKind::Mul,
            TokenKind::Slash => return Err(Diagnostic::unsupported(t.loc, "operator '/'")),
            TokenKind::Percent => return Err(Diagnostic::unsupported(t.loc, "operator '%'")),
            TokenKind::Lt
            | TokenKind::Le
            | TokenKind::Gt
            | TokenKind::Ge
            | TokenKind::EqEq
            | TokenKind::Ne
            | TokenKind::AndAnd
            | TokenKind::OrOr => {
                return Err(Diagnostic::unsupported(
                    t.loc,
                    "comparison or logical operator in assignment",
                ))
            }
            _ => return Ok(Expr::Atom(left)),
        };
        self.advance();
        let right = self.atom()?;
        let next = self.peek().clone();
        match next.kind {
            TokenKind::Plus
            | TokenKind::Minus
            | TokenKind::Star
            | TokenKind::Slash
            | TokenKind::Percent => Err(Diagnostic::unsupported_with_hint(
                next.loc,
                "n-ary expression",
                SPLIT_HINT,
            )),
            _ => Ok(Expr::BinOp { op, left, right }),
        }
    }

    fn atom(&mut self) -> Result<Atom, Diagnostic> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Ident(name) => {
                self.advance();
                match self.peek().kind {
                    TokenKind::LParen => {
                        Err(Diagnostic::unsupported(self.peek().loc, "function call"))
                    }
                    TokenKind::LBracket => {
                        Err(Diagnostic::unsupported(self.peek().loc, "array subscript"))
                    }
                    _ => Ok(Atom::Var { name, loc: t.loc }),
                }
            }
            TokenKind::Int(value) => {
                self.advance();
                Ok(Atom::Const { value, loc: t.loc })
            }
            TokenKind::Minus => {
                self.advance();
                let n = self.peek().clone();
                match n.kind {
                    TokenKind::Int(value) => {
                        self.advance();
                        Ok(Atom::Const {
                            value: -value,
                            loc: t.loc,
                        })
                    }
                    TokenKind::Ident(_) => {
                        Err(Diagnostic::unsupported(t.loc, "unary minus on a variable"))
                    }
                    _ => Err(Diagnostic::syntax(
                        n.loc,
                        format!("expected integer after '-', found {}", n.kind.describe()),
                    )),
                }
            }
            TokenKind::LParen => Err(Diagnostic::unsupported_with_hint(
                t.loc,
                "parenthesized expression",
                SPLIT_HINT,
            )),
            TokenKind::Amp => Err(Diagnostic::unsupported(t.loc, "address-of operator")),
            TokenKind::Star => Err(Diagnostic::unsupported(t.loc, "pointer dereference")),
            TokenKind::PlusPlus => Err(Diagnostic::unsupported(t.loc, "increment operator")),
            TokenKind::MinusMinus => Err(Diagnostic::unsupported(t.loc, "decrement operator")),
            _ => Err(Diagnostic::syntax(
                t.loc,
                format!(
                    "expected a variable or integer constant, found {}",
                    t.kind.describe()
                ),
            )),
        }
    }

    // ---- guards: parsed for well-formedness only, no AST output ----

    fn guard(&mut self) -> Result<(), Diagnostic> {
        self.guard_and()?;
        while self.eat(&TokenKind::OrOr) {
            self.guard_and()?;
        }
        Ok(())
    }

    fn guard_and(&mut self) -> Result<(), Diagnostic> {
        self.guard_unary()?;
        while self.eat(&TokenKind::AndAnd) {
            self.guard_unary()?;
        }
        Ok(())
    }

    fn guard_unary(&mut self) -> Result<(), Diagnostic> {
        if self.eat(&TokenKind::Not) {
            return self.guard_unary();
        }
        if self.eat(&TokenKind::LParen) {
            self.guard()?;
            return self.expect(TokenKind::RParen, "')' in condition").map(|_| ());
        }
        self.guard_relational()
    }

    fn guard_relational(&mut self) -> Result<(), Diagnostic> {
        self.guard_arith()?;
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Lt
            | TokenKind::Le
            | TokenKind::Gt
            | TokenKind::Ge
            | TokenKind::EqEq
            | TokenKind::Ne => {
                self.advance();
                self.guard_arith()
            }
            TokenKind::Assign => Err(Diagnostic::syntax(
                t.loc,
                "unexpected '=' in condition (did you mean '=='?)",
            )),
            _ => Ok(()),
        }
    }

    fn guard_arith(&mut self) -> Result<(), Diagnostic> {
        self.guard_atom()?;
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Plus | TokenKind::Minus | TokenKind::Star => {
                self.advance();
                self.guard_atom()?;
                let next = self.peek().clone();
                match next.kind {
                    TokenKind::Plus
                    | TokenKind::Minus
                    | TokenKind::Star
                    | TokenKind::Slash
                    | TokenKind::Percent => Err(Diagnostic::unsupported_with_hint(
                        next.loc,
                        "n-ary expression",
                        SPLIT_HINT,
                    )),
                    _ => Ok(()),
                }
            }
            TokenKind::Slash => Err(Diagnostic::unsupported(t.loc, "operator '/'")),
            TokenKind::Percent => Err(Diagnostic::unsupported(t.loc, "operator '%'")),
            _ => Ok(()),
        }
    }

    fn guard_atom(&mut self) -> Result<(), Diagnostic> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Ident(_) => {
                self.advance();
                match self.peek().kind {
                    TokenKind::LParen => {
                        Err(Diagnostic::unsupported(self.peek().loc, "function call"))
                    }
                    TokenKind::LBracket => {
                        Err(Diagnostic::unsupported(self.peek().loc, "array subscript"))
                    }
                    _ => Ok(()),
                }
            }
            TokenKind::Int(_) => {
                self.advance();
                Ok(())
            }
            TokenKind::Minus => {
                self.advance();
                let n = self.peek().clone();
                match n.kind {
                    TokenKind::Int(_) => {
                        self.advance();
                        Ok(())
                    }
                    _ => Err(Diagnostic::syntax(
                        n.loc,
                        format!("expected integer after '-', found {}", n.kind.describe()),
                    )),
                }
            }
            _ => Err(Diagnostic::syntax(
                t.loc,
                format!(
                    "expected a condition operand, found {}",
                    t.kind.describe()
                ),
            )),
        }
    }
}

fn is_type_keyword(k: &str) -> bool {
    matches!(
        k,
        "float"
            | "double"
            | "char"
            | "long"
            | "short"
            | "unsigned"
            | "signed"
            | "_Bool"
            | "_Complex"
            | "_Imaginary"
    )
}

fn reserved_statement(k: &'static str, loc: Loc) -> Diagnostic {
    if is_type_keyword(k) {
        return Diagnostic::unsupported(loc, format!("non-integer type '{k}'"));
    }
    let construct = match k {
        "for" => "for loop".to_string(),
        "do" => "do-while loop".to_string(),
        "return" => "return statement".to_string(),
        "switch" => "switch statement".to_string(),
        "break" => "break statement".to_string(),
        "continue" => "continue statement".to_string(),
        "goto" => "goto statement".to_string(),
        "sizeof" => "sizeof operator".to_string(),
        "struct" | "union" | "enum" | "typedef" => format!("'{k}' declaration"),
        other => format!("declaration qualifier '{other}'"),
    };
    Diagnostic::unsupported(loc, construct)
}
