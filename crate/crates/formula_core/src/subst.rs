use crate::{Formula, FormulaError, Var};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: impl Into<String>, positive: bool) -> Self {
        Literal { var: var.into(), positive }
    }

    pub fn formula(&self) -> Formula {
        Formula::literal(&self.var, self.positive)
    }
}

/// What a variable is replaced by: a constant, a literal, or a disjunction
/// of at most three literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Replacement {
    Const(bool),
    Lit(Literal),
    Or(Vec<Literal>),
}

impl Replacement {
    pub fn formula(&self) -> Formula {
        match self {
            Replacement::Const(b) => Formula::Const(*b),
            Replacement::Lit(l) => l.formula(),
            Replacement::Or(ls) => Formula::disjunction(ls.iter().map(Literal::formula)),
        }
    }

    pub fn is_well_formed(&self) -> bool {
        match self {
            Replacement::Or(ls) => (1..=3).contains(&ls.len()),
            _ => true,
        }
    }

    pub fn depth(&self) -> usize {
        self.formula().depth()
    }
}

pub type SubstitutionMap = BTreeMap<Var, Replacement>;

fn simplify_not(a: Formula) -> Formula {
    match a {
        Formula::Const(b) => Formula::Const(!b),
        a => Formula::not(a),
    }
}

fn simplify_or(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::Const(true), _) | (_, Formula::Const(true)) => Formula::Const(true),
        (Formula::Const(false), g) | (g, Formula::Const(false)) => g,
        (a, b) => Formula::or(a, b),
    }
}

/// Substitutes through `lookup` and folds constants.
pub fn apply_with<F>(f: &Formula, lookup: &F) -> Result<Formula, FormulaError>
where
    F: Fn(&Var) -> Option<Formula>,
{
    Ok(match f {
        Formula::Const(b) => Formula::Const(*b),
        Formula::Var(v) => lookup(v).ok_or_else(|| FormulaError::Unmapped(v.to_string()))?,
        Formula::Not(a) => simplify_not(apply_with(a, lookup)?),
        Formula::Or(a, b) => simplify_or(apply_with(a, lookup)?, apply_with(b, lookup)?),
    })
}

pub fn apply_substitution(f: &Formula, sub: &SubstitutionMap) -> Result<Formula, FormulaError> {
    if let Some((v, r)) = sub.iter().find(|(_, r)| !r.is_well_formed()) {
        let len = match r {
            Replacement::Or(ls) => ls.len(),
            _ => 1,
        };
        return Err(FormulaError::TooWide { var: v.to_string(), len });
    }
    apply_with(f, &|v: &Var| sub.get(v).map(Replacement::formula))
}
