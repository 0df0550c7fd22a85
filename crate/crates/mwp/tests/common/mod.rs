//! Shared test support: brute-force oracles that enumerate the whole
//! `{0,1,2}^k` choice space, kept independent of the delta-graph
//! elimination they are used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use mwp::analysis::{analyze, FunctionAnalysis};
use mwp::delta_graph::ChoiceSet;
use mwp::frontend::parse;
use mwp::monomial::{Assignment, ALTERNATIVES};
use mwp::relation::Relation;
use mwp::semiring::Coefficient;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn corpus_file(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

pub fn analyze_file(path: &Path) -> Vec<FunctionAnalysis> {
    let source = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    let program =
        parse(&source).unwrap_or_else(|e| panic!("cannot parse {}: {e}", path.display()));
    analyze(&program)
}

/// Analyzes an inline source string and returns the first function's
/// result, panicking on any diagnostic.
pub fn analyze_file_src(source: &str) -> mwp::analysis::AnalysisResult {
    let program = parse(source).unwrap();
    mwp::analysis::analyze_function(&program.functions[0]).unwrap()
}

/// Every file directly under tests/corpus (the analyzable set).
pub fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension().is_some_and(|x| x == "c")).then_some(p)
        })
        .collect();
    files.sort();
    files
}

/// All 3^k total assignments, lexicographically.
pub fn all_assignments(k: usize) -> Vec<Assignment> {
    let total = (ALTERNATIVES as usize).pow(k as u32);
    (0..total)
        .map(|mut n| {
            let mut v = vec![0u8; k];
            for slot in v.iter_mut().rev() {
                *slot = (n % ALTERNATIVES as usize) as u8;
                n /= ALTERNATIVES as usize;
            }
            Assignment::new(v)
        })
        .collect()
}

/// Assignments under which no matrix entry evaluates to ∞.
pub fn brute_passing(relation: &Relation, num_indices: usize) -> BTreeSet<Vec<u8>> {
    all_assignments(num_indices)
        .into_iter()
        .filter(|sigma| {
            relation
                .matrix()
                .entries()
                .all(|p| p.eval(sigma) != Coefficient::Inf)
        })
        .map(|a| a.as_slice().to_vec())
        .collect()
}

/// Variables whose column reaches ∞ under every assignment.
pub fn brute_infinite_vars(relation: &Relation, num_indices: usize) -> Vec<String> {
    let sigmas = all_assignments(num_indices);
    relation
        .variables()
        .iter()
        .enumerate()
        .filter(|(col, _)| {
            sigmas.iter().all(|sigma| {
                relation
                    .matrix()
                    .column(*col)
                    .any(|(_, p)| p.eval(sigma) == Coefficient::Inf)
            })
        })
        .map(|(_, v)| v.clone())
        .collect()
}

pub fn choice_set_to_btree(set: &ChoiceSet) -> BTreeSet<Vec<u8>> {
    set.expand()
        .into_iter()
        .map(|a| a.as_slice().to_vec())
        .collect()
}
