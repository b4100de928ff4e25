use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::FuzzyError;
use crate::variable::{FuzzyValue, LinguisticVariable};

/// `<variable> is <term>`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub variable: String,
    pub term: String,
}

impl Clause {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            term: term.into(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is {}", self.variable, self.term)
    }
}

/// `if a is x and b is y then c is z`
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedents: Vec<Clause>,
    pub consequent: Clause,
}

impl Rule {
    pub fn new(antecedents: Vec<Clause>, consequent: Clause) -> Self {
        Self {
            antecedents,
            consequent,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "if ")?;
        for (i, clause) in self.antecedents.iter().enumerate() {
            if i > 0 {
                write!(f, " and ")?;
            }
            write!(f, "{clause}")?;
        }
        write!(f, " then {}", self.consequent)
    }
}

/// A validated set of rules mapping a fixed list of input variables to one
/// output variable.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    name: String,
    inputs: Vec<String>,
    output: String,
    output_terms: Vec<String>,
    complete: bool,
    rules: Vec<Rule>,
}

impl RuleBase {
    /// Validates every rule against `variables`. When `complete` is set the
    /// base must hold exactly one rule per combination of input terms.
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<String>,
        output: &str,
        complete: bool,
        rules: Vec<Rule>,
        variables: &[LinguisticVariable],
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        let lookup = |v: &str| {
            variables
                .iter()
                .find(|var| var.name() == v)
                .ok_or_else(|| FuzzyError::UnknownVariable(v.to_string()))
        };
        let invalid = |reason: String| FuzzyError::InvalidRule {
            rulebase: name.clone(),
            reason,
        };

        if inputs.is_empty() {
            return Err(invalid("no input variables".into()));
        }
        let mut seen = HashSet::new();
        for input in &inputs {
            lookup(input)?;
            if !seen.insert(input.as_str()) {
                return Err(invalid(format!("input `{input}` listed twice")));
            }
        }
        let output_var = lookup(output)?;
        if seen.contains(output) {
            return Err(invalid(format!("`{output}` is both input and output")));
        }

        for rule in &rules {
            if rule.antecedents.is_empty() {
                return Err(invalid(format!("rule `{rule}` has no antecedent")));
            }
            let mut used = HashSet::new();
            for clause in &rule.antecedents {
                let var = lookup(&clause.variable)?;
                if !seen.contains(clause.variable.as_str()) {
                    return Err(invalid(format!(
                        "`{}` is not an input of this rule base",
                        clause.variable
                    )));
                }
                if !used.insert(clause.variable.as_str()) {
                    return Err(invalid(format!(
                        "rule `{rule}` tests `{}` twice",
                        clause.variable
                    )));
                }
                check_term(var, &clause.term)?;
            }
            if rule.consequent.variable != output {
                return Err(invalid(format!(
                    "rule `{rule}` concludes `{}` instead of `{output}`",
                    rule.consequent.variable
                )));
            }
            check_term(output_var, &rule.consequent.term)?;
        }

        let base = Self {
            name,
            inputs,
            output: output.to_string(),
            output_terms: output_var.term_names().map(str::to_string).collect(),
            complete,
            rules,
        };
        if complete {
            base.check_complete(variables)?;
        }
        Ok(base)
    }

    fn check_complete(&self, variables: &[LinguisticVariable]) -> Result<(), FuzzyError> {
        let mut table: HashMap<Vec<&str>, usize> = HashMap::new();
        for rule in &self.rules {
            let mut key = Vec::with_capacity(self.inputs.len());
            for input in &self.inputs {
                match rule.antecedents.iter().find(|c| c.variable == *input) {
                    Some(c) => key.push(c.term.as_str()),
                    None => {
                        return Err(FuzzyError::InvalidRule {
                            rulebase: self.name.clone(),
                            reason: format!("rule `{rule}` does not test `{input}`"),
                        })
                    }
                }
            }
            *table.entry(key).or_default() += 1;
        }

        let term_lists: Vec<Vec<&str>> = self
            .inputs
            .iter()
            .map(|input| {
                variables
                    .iter()
                    .find(|v| v.name() == input)
                    .map(|v| v.term_names().collect())
                    .unwrap_or_default()
            })
            .collect();
        for combination in cartesian(&term_lists) {
            let describe = || {
                self.inputs
                    .iter()
                    .zip(&combination)
                    .map(|(v, t)| format!("{v} is {t}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            match table.get(&combination) {
                None => {
                    return Err(FuzzyError::IncompleteRuleBase {
                        rulebase: self.name.clone(),
                        missing: describe(),
                    })
                }
                Some(n) if *n > 1 => {
                    return Err(FuzzyError::DuplicateCombination {
                        rulebase: self.name.clone(),
                        combination: describe(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn output(&self) -> &str {
        &self.output
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Min/max evaluation: each rule fires at the minimum degree of its
    /// antecedents and each output term takes the maximum firing strength of
    /// the rules concluding it. Terms no rule concludes stay at 0.
    pub fn evaluate(&self, inputs: &HashMap<String, FuzzyValue>) -> Result<FuzzyValue, FuzzyError> {
        for input in &self.inputs {
            if !inputs.contains_key(input) {
                return Err(FuzzyError::MissingInput {
                    rulebase: self.name.clone(),
                    variable: input.clone(),
                });
            }
        }
        let mut out = FuzzyValue::new(self.output_terms.iter().map(|t| (t.as_str(), 0.0)))
            .expect("zero degrees are valid");
        for rule in &self.rules {
            let strength = rule
                .antecedents
                .iter()
                .map(|c| inputs[&c.variable].degree(&c.term))
                .fold(1.0, f64::min);
            out.raise(&rule.consequent.term, strength);
        }
        Ok(out)
    }

    /// The consequent term of the rule whose antecedents match `terms`
    /// (given in input order), if any.
    pub fn lookup(&self, terms: &[&str]) -> Option<&str> {
        self.rules
            .iter()
            .find(|rule| {
                rule.antecedents.len() == self.inputs.len()
                    && self.inputs.iter().zip(terms).all(|(input, term)| {
                        rule.antecedents
                            .iter()
                            .any(|c| c.variable == *input && c.term == *term)
                    })
            })
            .map(|rule| rule.consequent.term.as_str())
    }
}

fn check_term(var: &LinguisticVariable, term: &str) -> Result<(), FuzzyError> {
    if var.has_term(term) {
        Ok(())
    } else {
        Err(FuzzyError::UnknownTerm {
            variable: var.name().to_string(),
            term: term.to_string(),
        })
    }
}

fn cartesian<'a>(lists: &[Vec<&'a str>]) -> Vec<Vec<&'a str>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |t| {
                    let mut next = prefix.clone();
                    next.push(*t);
                    next
                })
            })
            .collect()
    })
}
