//! Line-oriented loader for variable and rule-base definitions.
//!
//! ```text
//! # comment
//! variable <name> range <lo> <hi>
//!   term <name> <a> <b> <c> <d>          # `shoulder` allowed for a or d
//! rulebase <name> inputs <v1> [<v2> ...] output <v> [complete]
//!   if <v1> is <t1> [and <v2> is <t2> ...] then <v> is <t>
//! ```
//!
//! `term` lines attach to the closest preceding `variable`, `if` lines to the
//! closest preceding `rulebase`. Indentation is cosmetic.

use std::fmt::Write as _;

use crate::error::FuzzyError;
use crate::membership::PiecewiseLinearMF;
use crate::rules::{Clause, Rule, RuleBase};
use crate::variable::{LinguisticVariable, Term};

/// Configuration shipped with the crate: the humidity, temperature and
/// action variables together with the apparent-temperature and action rule
/// tables.
pub const BUNDLED_CONFIG: &str = include_str!("../config/climate.fz");

/// Validated set of variables and rule bases.
#[derive(Debug, Clone, PartialEq)]
pub struct Registry {
    variables: Vec<LinguisticVariable>,
    rulebases: Vec<RuleBase>,
}

impl Registry {
    pub fn new(
        variables: Vec<LinguisticVariable>,
        rulebases: Vec<RuleBase>,
    ) -> Result<Self, FuzzyError> {
        if variables.is_empty() {
            return Err(FuzzyError::NoVariables);
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].iter().any(|w| w.name() == v.name()) {
                return Err(FuzzyError::DuplicateVariable(v.name().to_string()));
            }
        }
        for (i, rb) in rulebases.iter().enumerate() {
            if rulebases[..i].iter().any(|r| r.name() == rb.name()) {
                return Err(FuzzyError::DuplicateRuleBase(rb.name().to_string()));
            }
        }
        Ok(Self {
            variables,
            rulebases,
        })
    }

    pub fn bundled() -> Self {
        parse_config(BUNDLED_CONFIG).expect("bundled configuration is valid")
    }

    pub fn variables(&self) -> &[LinguisticVariable] {
        &self.variables
    }

    pub fn rulebases(&self) -> &[RuleBase] {
        &self.rulebases
    }

    pub fn variable(&self, name: &str) -> Result<&LinguisticVariable, FuzzyError> {
        self.variables
            .iter()
            .find(|v| v.name() == name)
            .ok_or_else(|| FuzzyError::UnknownVariable(name.to_string()))
    }

    pub fn rulebase(&self, name: &str) -> Result<&RuleBase, FuzzyError> {
        self.rulebases
            .iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| FuzzyError::UnknownRuleBase(name.to_string()))
    }

    /// Renders the registry in the configuration grammar. Parsing the output
    /// yields an equal registry.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for var in &self.variables {
            let (lo, hi) = var.universe();
            let _ = writeln!(out, "variable {} range {} {}", var.name(), lo, hi);
            for term in var.terms() {
                let [a, b, c, d] = term.mf.breakpoints();
                let a = if a == lo && b == lo {
                    "shoulder".to_string()
                } else {
                    a.to_string()
                };
                let d = if c == hi && d == hi {
                    "shoulder".to_string()
                } else {
                    d.to_string()
                };
                let _ = writeln!(out, "  term {} {} {} {} {}", term.name, a, b, c, d);
            }
            out.push('\n');
        }
        for rb in &self.rulebases {
            let _ = write!(
                out,
                "rulebase {} inputs {} output {}",
                rb.name(),
                rb.inputs().join(" "),
                rb.output()
            );
            if rb.is_complete() {
                out.push_str(" complete");
            }
            out.push('\n');
            for rule in rb.rules() {
                let _ = writeln!(out, "  {rule}");
            }
            out.push('\n');
        }
        out
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct PendingVariable {
    line: usize,
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<(usize, String, [Bound; 4])>,
}

#[derive(Clone, Copy)]
enum Bound {
    Value(f64),
    Shoulder,
}

struct PendingRuleBase {
    line: usize,
    name: String,
    inputs: Vec<String>,
    output: String,
    complete: bool,
    rules: Vec<(usize, Rule)>,
}

enum Block {
    None,
    Variable,
    RuleBase,
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<Registry, FuzzyError> {
    let mut variables: Vec<PendingVariable> = Vec::new();
    let mut rulebases: Vec<PendingRuleBase> = Vec::new();
    let mut block = Block::None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(head) = tokens.first() else { continue };
        let syntax = |column: usize, message: String| FuzzyError::Syntax {
            line,
            column,
            message,
        };

        match head.text {
            "variable" => {
                expect_len(&tokens, 5, line, "variable <name> range <lo> <hi>")?;
                let name = identifier(&tokens[1], line)?;
                keyword(&tokens[2], "range", line)?;
                let lo = number(&tokens[3], line)?;
                let hi = number(&tokens[4], line)?;
                variables.push(PendingVariable {
                    line,
                    name,
                    lo,
                    hi,
                    terms: Vec::new(),
                });
                block = Block::Variable;
            }
            "term" => {
                let Block::Variable = block else {
                    return Err(syntax(head.column, "`term` outside a variable block".into()));
                };
                expect_len(&tokens, 6, line, "term <name> <a> <b> <c> <d>")?;
                let name = identifier(&tokens[1], line)?;
                let a = bound(&tokens[2], true, line)?;
                let b = bound(&tokens[3], false, line)?;
                let c = bound(&tokens[4], false, line)?;
                let d = bound(&tokens[5], true, line)?;
                let var = variables.last_mut().expect("inside a variable block");
                var.terms.push((line, name, [a, b, c, d]));
            }
            "rulebase" => {
                rulebases.push(parse_rulebase_header(&tokens, line)?);
                block = Block::RuleBase;
            }
            "if" => {
                let Block::RuleBase = block else {
                    return Err(syntax(head.column, "rule outside a rulebase block".into()));
                };
                let rule = parse_rule(&tokens, line)?;
                let rb = rulebases.last_mut().expect("inside a rulebase block");
                rb.rules.push((line, rule));
            }
            other => {
                return Err(syntax(head.column, format!("unexpected `{other}`")));
            }
        }
    }

    if variables.is_empty() {
        return Err(FuzzyError::NoVariables);
    }

    let mut built = Vec::with_capacity(variables.len());
    for pv in variables {
        if built.iter().any(|v: &LinguisticVariable| v.name() == pv.name) {
            return Err(FuzzyError::DuplicateVariable(pv.name).at_line(pv.line));
        }
        let mut terms = Vec::with_capacity(pv.terms.len());
        for (line, name, [a, b, c, d]) in pv.terms {
            let resolve = |bd: Bound, shoulder: f64| match bd {
                Bound::Value(v) => v,
                Bound::Shoulder => shoulder,
            };
            let mf = PiecewiseLinearMF::new(
                resolve(a, pv.lo),
                resolve(b, pv.lo),
                resolve(c, pv.hi),
                resolve(d, pv.hi),
            )
            .map_err(|e| e.at_line(line))?;
            if terms.iter().any(|t: &Term| t.name == name) {
                return Err(FuzzyError::DuplicateTerm {
                    variable: pv.name,
                    term: name,
                }
                .at_line(line));
            }
            terms.push(Term { name, mf });
        }
        let var =
            LinguisticVariable::new(pv.name, pv.lo, pv.hi, terms).map_err(|e| e.at_line(pv.line))?;
        built.push(var);
    }

    let mut bases = Vec::with_capacity(rulebases.len());
    for prb in rulebases {
        // Resolve references rule by rule so errors carry the rule's line.
        for (line, rule) in &prb.rules {
            for clause in rule.antecedents.iter().chain([&rule.consequent]) {
                let var = built
                    .iter()
                    .find(|v| v.name() == clause.variable)
                    .ok_or_else(|| FuzzyError::UnknownVariable(clause.variable.clone()).at_line(*line))?;
                if !var.has_term(&clause.term) {
                    return Err(FuzzyError::UnknownTerm {
                        variable: clause.variable.clone(),
                        term: clause.term.clone(),
                    }
                    .at_line(*line));
                }
            }
        }
        if bases.iter().any(|b: &RuleBase| b.name() == prb.name) {
            return Err(FuzzyError::DuplicateRuleBase(prb.name).at_line(prb.line));
        }
        let rb = RuleBase::new(
            prb.name,
            prb.inputs,
            &prb.output,
            prb.complete,
            prb.rules.into_iter().map(|(_, r)| r).collect(),
            &built,
        )
        .map_err(|e| e.at_line(prb.line))?;
        bases.push(rb);
    }

    Registry::new(built, bases)
}

fn parse_rulebase_header(tokens: &[Token<'_>], line: usize) -> Result<PendingRuleBase, FuzzyError> {
    let usage = "rulebase <name> inputs <v1> [<v2> ...] output <v> [complete]";
    if tokens.len() < 6 {
        return Err(syntax_at(tokens, line, format!("expected `{usage}`")));
    }
    let name = identifier(&tokens[1], line)?;
    keyword(&tokens[2], "inputs", line)?;
    let output_at = tokens
        .iter()
        .position(|t| t.text == "output")
        .ok_or_else(|| syntax_at(tokens, line, "missing `output`".into()))?;
    if output_at < 4 {
        return Err(FuzzyError::Syntax {
            line,
            column: tokens[output_at].column,
            message: "rulebase needs at least one input".into(),
        });
    }
    let inputs = tokens[3..output_at]
        .iter()
        .map(|t| identifier(t, line))
        .collect::<Result<Vec<_>, _>>()?;
    let rest = &tokens[output_at + 1..];
    let (output, complete) = match rest {
        [out] => (identifier(out, line)?, false),
        [out, flag] => {
            keyword(flag, "complete", line)?;
            (identifier(out, line)?, true)
        }
        [] => return Err(syntax_at(tokens, line, "missing output variable".into())),
        [_, _, extra, ..] => {
            return Err(FuzzyError::Syntax {
                line,
                column: extra.column,
                message: format!("unexpected `{}`", extra.text),
            })
        }
    };
    Ok(PendingRuleBase {
        line,
        name,
        inputs,
        output,
        complete,
        rules: Vec::new(),
    })
}

fn parse_rule(tokens: &[Token<'_>], line: usize) -> Result<Rule, FuzzyError> {
    // if v is t (and v is t)* then v is t
    let mut antecedents = Vec::new();
    let mut i = 1;
    loop {
        antecedents.push(parse_clause(tokens, i, line)?);
        i += 3;
        match tokens.get(i) {
            Some(t) if t.text == "and" => i += 1,
            Some(t) if t.text == "then" => {
                i += 1;
                break;
            }
            Some(t) => {
                return Err(FuzzyError::Syntax {
                    line,
                    column: t.column,
                    message: format!("expected `and` or `then`, found `{}`", t.text),
                })
            }
            None => return Err(syntax_at(tokens, line, "missing `then`".into())),
        }
    }
    let consequent = parse_clause(tokens, i, line)?;
    if let Some(extra) = tokens.get(i + 3) {
        return Err(FuzzyError::Syntax {
            line,
            column: extra.column,
            message: format!("unexpected `{}`", extra.text),
        });
    }
    Ok(Rule::new(antecedents, consequent))
}

fn parse_clause(tokens: &[Token<'_>], at: usize, line: usize) -> Result<Clause, FuzzyError> {
    let (Some(v), Some(is), Some(t)) = (tokens.get(at), tokens.get(at + 1), tokens.get(at + 2))
    else {
        return Err(syntax_at(tokens, line, "incomplete `<variable> is <term>`".into()));
    };
    keyword(is, "is", line)?;
    Ok(Clause::new(identifier(v, line)?, identifier(t, line)?))
}

fn tokenize(content: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in content.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (true, Some((b, c))) => {
                tokens.push(Token {
                    text: &content[b..byte],
                    column: c,
                });
                start = None;
            }
            (false, None) => start = Some((byte, col + 1)),
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &content[b..],
            column: c,
        });
    }
    tokens
}

fn syntax_at(tokens: &[Token<'_>], line: usize, message: String) -> FuzzyError {
    let column = tokens
        .last()
        .map_or(1, |t| t.column + t.text.chars().count());
    FuzzyError::Syntax {
        line,
        column,
        message,
    }
}

fn expect_len(tokens: &[Token<'_>], n: usize, line: usize, usage: &str) -> Result<(), FuzzyError> {
    match tokens.len() {
        len if len == n => Ok(()),
        len if len < n => Err(syntax_at(tokens, line, format!("expected `{usage}`"))),
        _ => Err(FuzzyError::Syntax {
            line,
            column: tokens[n].column,
            message: format!("unexpected `{}`", tokens[n].text),
        }),
    }
}

fn keyword(token: &Token<'_>, expected: &str, line: usize) -> Result<(), FuzzyError> {
    if token.text == expected {
        Ok(())
    } else {
        Err(FuzzyError::Syntax {
            line,
            column: token.column,
            message: format!("expected `{expected}`, found `{}`", token.text),
        })
    }
}

fn identifier(token: &Token<'_>, line: usize) -> Result<String, FuzzyError> {
    let mut chars = token.text.chars();
    let valid = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if valid {
        Ok(token.text.to_string())
    } else {
        Err(FuzzyError::Syntax {
            line,
            column: token.column,
            message: format!("invalid identifier `{}`", token.text),
        })
    }
}

fn number(token: &Token<'_>, line: usize) -> Result<f64, FuzzyError> {
    match token.text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(FuzzyError::Syntax {
            line,
            column: token.column,
            message: format!("expected a number, found `{}`", token.text),
        }),
    }
}

fn bound(token: &Token<'_>, shoulder_ok: bool, line: usize) -> Result<Bound, FuzzyError> {
    if token.text == "shoulder" {
        if shoulder_ok {
            Ok(Bound::Shoulder)
        } else {
            Err(FuzzyError::Syntax {
                line,
                column: token.column,
                message: "`shoulder` is only allowed for the outer breakpoints".into(),
            })
        }
    } else {
        number(token, line).map(Bound::Value)
    }
}
