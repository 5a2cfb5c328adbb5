use crate::{Formula, FormulaError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Axiom,
    ExcludedMiddle,
    Expansion(usize),
    Contraction(usize),
    Association(usize),
    Cut(usize, usize),
}

impl Rule {
    pub fn premises(&self) -> Vec<usize> {
        match *self {
            Rule::Axiom | Rule::ExcludedMiddle => vec![],
            Rule::Expansion(i) | Rule::Contraction(i) | Rule::Association(i) => vec![i],
            Rule::Cut(i, j) => vec![i, j],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::ExcludedMiddle => "em",
            Rule::Expansion(_) => "expand",
            Rule::Contraction(_) => "contract",
            Rule::Association(_) => "assoc",
            Rule::Cut(..) => "cut",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for p in self.premises() {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofLine {
    pub formula: Formula,
    pub rule: Rule,
}

/// Lines are numbered from 1; premises refer to earlier line numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FregeProof {
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Rejection {
    #[error("not an axiom of the instance")]
    NotAnAxiom,
    #[error("does not match the {0} schema")]
    BadSchema(String),
    #[error("depth {depth} exceeds the limit {limit}")]
    DepthOverflow { depth: usize, limit: usize },
    #[error("premise {premise} is not an earlier line")]
    DanglingPremise { premise: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("line {line}: {reason}")]
pub struct ProofError {
    pub line: usize,
    pub reason: Rejection,
}

impl FregeProof {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a line and returns its number.
    pub fn push(&mut self, formula: Formula, rule: Rule) -> usize {
        self.lines.push(ProofLine { formula, rule });
        self.lines.len()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn line(&self, number: usize) -> Option<&ProofLine> {
        number.checked_sub(1).and_then(|i| self.lines.get(i))
    }

    /// One line per proof line: `N rule premises : formula`.
    pub fn to_text(&self) -> String {
        self.lines.iter().enumerate().map(|(i, l)| format!("{} {} : {}\n", i + 1, l.rule, l.formula)).collect()
    }

    /// Parses the text format. `assume : F` lines declare axioms and
    /// `depth D` sets a limit; both are returned alongside the proof.
    pub fn parse(text: &str) -> Result<ProofFile, FormulaError> {
        let mut file = ProofFile::default();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| FormulaError::ProofSyntax { line: lineno, msg };
            if let Some(d) = line.strip_prefix("depth") {
                file.depth = Some(d.trim().parse().map_err(|_| err(format!("bad depth {d:?}")))?);
                continue;
            }
            let (head, body) = line.split_once(':').ok_or_else(|| err("missing ':'".into()))?;
            let formula: Formula = body.trim().parse().map_err(|e| err(format!("{e}")))?;
            let words: Vec<&str> = head.split_whitespace().collect();
            if words == ["assume"] {
                file.axioms.insert(formula);
                continue;
            }
            let nums = |ws: &[&str]| -> Result<Vec<usize>, FormulaError> {
                ws.iter().map(|w| w.parse().map_err(|_| err(format!("bad number {w:?}")))).collect()
            };
            let (number, rest) = words.split_first().ok_or_else(|| err("empty line head".into()))?;
            let number = nums(&[number])?[0];
            if number != file.proof.len() + 1 {
                return Err(err(format!("expected line number {}", file.proof.len() + 1)));
            }
            let (name, args) = rest.split_first().ok_or_else(|| err("missing rule".into()))?;
            let args = nums(args)?;
            let rule = match (*name, args.as_slice()) {
                ("axiom", []) => Rule::Axiom,
                ("em", []) => Rule::ExcludedMiddle,
                ("expand", [i]) => Rule::Expansion(*i),
                ("contract", [i]) => Rule::Contraction(*i),
                ("assoc", [i]) => Rule::Association(*i),
                ("cut", [i, j]) => Rule::Cut(*i, *j),
                _ => return Err(err(format!("unknown rule {name} with {} premises", args.len()))),
            };
            file.proof.push(formula, rule);
        }
        Ok(file)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofFile {
    pub proof: FregeProof,
    pub axioms: BTreeSet<Formula>,
    pub depth: Option<usize>,
}

fn or_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Or(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Checks one schema instance given the premise formulas.
pub fn rule_applies(rule: Rule, conclusion: &Formula, premises: &[&Formula], axioms: &BTreeSet<Formula>) -> bool {
    match rule {
        Rule::Axiom => axioms.contains(conclusion),
        Rule::ExcludedMiddle => {
            matches!(or_parts(conclusion), Some((p, Formula::Not(np))) if **np == *p)
        }
        Rule::Expansion(_) => matches!(or_parts(conclusion), Some((p, _)) if p == premises[0]),
        Rule::Contraction(_) => matches!(or_parts(premises[0]), Some((p, q)) if p == q && p == conclusion),
        Rule::Association(_) => {
            let Some((p, qr)) = or_parts(premises[0]) else { return false };
            let Some((q, r)) = or_parts(qr) else { return false };
            let Some((pq, r2)) = or_parts(conclusion) else { return false };
            let Some((p2, q2)) = or_parts(pq) else { return false };
            p == p2 && q == q2 && r == r2
        }
        Rule::Cut(..) => {
            let Some((p, q)) = or_parts(premises[0]) else { return false };
            let Some((np, r)) = or_parts(premises[1]) else { return false };
            let Some((q2, r2)) = or_parts(conclusion) else { return false };
            matches!(np, Formula::Not(inner) if **inner == *p) && q == q2 && r == r2
        }
    }
}

/// Accepts iff every line is an axiom or a schema instance over earlier
/// lines and every line has depth at most `d`. Reports the first failure.
pub fn check_proof(proof: &FregeProof, axioms: &BTreeSet<Formula>, d: usize) -> Result<(), ProofError> {
    for (idx, line) in proof.lines.iter().enumerate() {
        let number = idx + 1;
        let fail = |reason| Err(ProofError { line: number, reason });
        let depth = line.formula.depth();
        if depth > d {
            return fail(Rejection::DepthOverflow { depth, limit: d });
        }
        let mut premises = Vec::new();
        for p in line.rule.premises() {
            if p == 0 || p >= number {
                return fail(Rejection::DanglingPremise { premise: p });
            }
            premises.push(&proof.lines[p - 1].formula);
        }
        if !rule_applies(line.rule, &line.formula, &premises, axioms) {
            return fail(match line.rule {
                Rule::Axiom => Rejection::NotAnAxiom,
                r => Rejection::BadSchema(r.name().into()),
            });
        }
    }
    Ok(())
}
