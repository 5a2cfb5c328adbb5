use crate::FormulaError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Variable name, shared between formulas.
pub type Var = Arc<str>;

/// Formula over `¬` and `∨` with constants. Children are shared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const(bool),
    Var(Var),
    Not(Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn literal(name: &str, positive: bool) -> Formula {
        let v = Formula::var(name);
        if positive {
            v
        } else {
            Formula::not(v)
        }
    }

    /// Right-nested disjunction `a ∨ (b ∨ (...))`; the empty disjunction is 0.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let parts: Vec<Formula> = parts.into_iter().collect();
        let mut it = parts.into_iter().rev();
        match it.next() {
            None => Formula::Const(false),
            Some(last) => it.fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    /// `¬(¬a ∨ ¬b ∨ ...)`; the empty conjunction is 1.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let parts: Vec<Formula> = parts.into_iter().collect();
        if parts.is_empty() {
            return Formula::Const(true);
        }
        Formula::not(Formula::disjunction(parts.into_iter().map(Formula::not)))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Const(_) | Formula::Var(_))
    }

    /// An atom or a negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(inner) => inner.is_atom(),
            f => f.is_atom(),
        }
    }

    /// Number of alternating `¬`/`∨` blocks on the deepest path, with
    /// literals absorbed into the block above them: atoms, literals and
    /// clauses have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(inner) => match &**inner {
                f if f.is_atom() => 1,
                Formula::Not(_) => inner.depth(),
                _ => inner.depth() + 1,
            },
            Formula::Or(a, b) => a.or_block_depth().max(b.or_block_depth()),
        }
    }

    fn or_block_depth(&self) -> usize {
        match self {
            Formula::Or(..) => self.depth(),
            f if f.is_literal() => 1,
            f => f.depth() + 1,
        }
    }

    /// All sub-formulas, the formula itself included, without duplicates.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if !out.insert(f.clone()) {
                continue;
            }
            match &f {
                Formula::Not(a) => stack.push((**a).clone()),
                Formula::Or(a, b) => {
                    stack.push((**a).clone());
                    stack.push((**b).clone());
                }
                _ => {}
            }
        }
        out
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Not(a) => a.collect_vars(out),
            Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Truth value under `assignment`; `None` if a variable is unassigned.
    pub fn eval(&self, assignment: &BTreeMap<Var, bool>) -> Option<bool> {
        match self {
            Formula::Const(b) => Some(*b),
            Formula::Var(v) => assignment.get(v).copied(),
            Formula::Not(a) => a.eval(assignment).map(|x| !x),
            Formula::Or(a, b) => Some(a.eval(assignment)? || b.eval(assignment)?),
        }
    }

    /// Top-level disjuncts of a right- or left-nested disjunction.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Or(a, b) => {
                let mut v = a.disjuncts();
                v.extend(b.disjuncts());
                v
            }
            f => vec![f],
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => write!(f, "{}", u8::from(*b)),
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(a) => write!(f, "~ {a}"),
            Formula::Or(a, b) => write!(f, "| {a} {b}"),
        }
    }
}

fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        let ident = ch.is_ascii_alphanumeric() || ch == '_';
        if ident {
            start.get_or_insert(i);
            continue;
        }
        if let Some(s) = start.take() {
            out.push((s, &text[s..i]));
        }
        if !ch.is_whitespace() {
            out.push((i, &text[i..i + ch.len_utf8()]));
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_prefix(toks: &mut std::slice::Iter<'_, (usize, &str)>, end: usize) -> Result<Formula, FormulaError> {
    let &(pos, tok) = toks.next().ok_or(FormulaError::Parse { pos: end, msg: "unexpected end of formula".into() })?;
    Ok(match tok {
        "~" => Formula::not(parse_prefix(toks, end)?),
        "|" => {
            let a = parse_prefix(toks, end)?;
            Formula::or(a, parse_prefix(toks, end)?)
        }
        "0" => Formula::Const(false),
        "1" => Formula::Const(true),
        t if t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => Formula::var(t),
        t => return Err(FormulaError::Parse { pos, msg: format!("unexpected token {t:?}") }),
    })
}

impl FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokens(s);
        let mut it = toks.iter();
        let f = parse_prefix(&mut it, s.len())?;
        if let Some(&(pos, t)) = it.next() {
            return Err(FormulaError::Parse { pos, msg: format!("trailing token {t:?}") });
        }
        Ok(f)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff every assignment satisfying all `premises` satisfies `goal`.
/// Brute force over the union of their variables (at most 20).
pub fn entails(premises: &[Formula], goal: &Formula) -> bool {
    let mut vars = goal.variables();
    for p in premises {
        vars.extend(p.variables());
    }
    let vars: Vec<Var> = vars.into_iter().collect();
    assert!(vars.len() <= 20, "truth table over {} variables", vars.len());
    (0u32..1 << vars.len()).all(|mask| {
        let a: BTreeMap<Var, bool> = vars.iter().enumerate().map(|(i, v)| (v.clone(), mask >> i & 1 == 1)).collect();
        !premises.iter().all(|p| p.eval(&a) == Some(true)) || goal.eval(&a) == Some(true)
    })
}
