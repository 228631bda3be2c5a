//! Text dialect for models.
//!
//! ```text
//! model NAME;                                             (optional, first)
//! location NAME [in PARENT] : size = EXPR, type = compartment|membrane;
//! NAME = NUMBER;                                          parameter
//! NAME = EXPR;                                            functional rate if NAME is an action,
//!                                                         otherwise a constant parameter
//! NAME = PREFIX (+ PREFIX)*;                              species component
//! NAME = ();                                              species component with no actions
//! event NAME at NUMBER { TARGET = EXPR (, TARGET = EXPR)* }
//! COMP (<*> COMP)*   |   ()                               system equation, last statement
//!
//! PREFIX := (ACTION, K) OP NAME[@LOCATION]
//! OP     := <<  reactant   >>  product   (+)  activator   (-)  inhibitor   (.)  modifier
//! COMP   := NAME[@LOCATION][[AMOUNT]]
//! ```
//!
//! Expressions use `+ - * / ^` and parentheses; `^` binds tighter than unary
//! minus, which binds tighter than `*` and `/`. `//` starts a comment.

mod lexer;
mod render;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::model::{
    Assignment, Event, Expr, FunctionalRate, Location, LocationKind, Model, Parameter, Prefix, SpeciesComponent,
    SpeciesInstance, DEFAULT_MODEL_NAME,
};
use lexer::{tokenize, Tok, Token};

pub use render::render_model;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
    /// Byte offset into the source.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub message: String,
    pub expected: Option<String>,
    /// Second position involved, e.g. the first definition of a duplicate.
    pub related: Option<(usize, usize)>,
}

impl ParseError {
    pub(crate) fn at(pos: Position, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            column: pos.column,
            offset: pos.offset,
            message: message.into(),
            expected: None,
            related: None,
        }
    }

    fn expected(pos: Position, expected: impl Into<String>, found: &Tok) -> Self {
        let expected = expected.into();
        ParseError {
            expected: Some(expected.clone()),
            ..ParseError::at(pos, format!("expected {expected}, found {}", found.describe()))
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if let Some((l, c)) = self.related {
            write!(f, " (see {l}:{c})")?;
        }
        Ok(())
    }
}

/// Parses a complete model.
pub fn parse_model(source: &str) -> Result<Model, ParseError> {
    let tokens = tokenize(source)?;
    let mut p = Parser { tokens, idx: 0 };
    let raw = p.statements()?;
    raw.build()
}

/// Parses a single expression; the whole input must be consumed.
pub fn parse_expr(source: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(source)?;
    let mut p = Parser { tokens, idx: 0 };
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::Eof {
        return Err(ParseError::expected(t.pos, "end of input", &t.tok));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
}

#[derive(Default)]
struct RawModel {
    name: Option<(String, Position)>,
    locations: Vec<(Location, Position)>,
    assignments: Vec<(String, Expr, Position)>,
    components: Vec<(SpeciesComponent, Position, Vec<Position>)>,
    events: Vec<(Event, Position)>,
    system: Vec<(SpeciesInstance, Position)>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.idx]
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.idx + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.idx].clone();
        if self.idx < self.tokens.len() - 1 {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Position, ParseError> {
        let t = self.peek();
        if t.tok == tok {
            Ok(self.next().pos)
        } else {
            Err(ParseError::expected(t.pos, tok.describe(), &t.tok))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Position), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) => {
                self.next();
                Ok((s, t.pos))
            }
            other => Err(ParseError::expected(t.pos, "identifier", &other)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            other => Err(ParseError::expected(t.pos, format!("`{kw}`"), other)),
        }
    }

    fn number(&mut self) -> Result<(f64, Position), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(v) => {
                self.next();
                Ok((v, t.pos))
            }
            other => Err(ParseError::expected(t.pos, "number", &other)),
        }
    }

    fn statements(&mut self) -> Result<RawModel, ParseError> {
        let mut raw = RawModel::default();
        let mut first = true;
        loop {
            let t = self.peek().clone();
            match (&t.tok, self.peek_at(1), self.peek_at(2)) {
                (Tok::Eof, _, _) => break,
                (Tok::Ident(kw), Tok::Ident(_), Tok::Semi) if kw == "model" => {
                    if !first {
                        return Err(ParseError::at(t.pos, "`model` must be the first statement"));
                    }
                    self.next();
                    let (name, pos) = self.ident()?;
                    self.expect(Tok::Semi)?;
                    raw.name = Some((name, pos));
                }
                (Tok::Ident(kw), Tok::Ident(_), _) if kw == "location" => {
                    self.next();
                    raw.locations.push(self.location()?);
                }
                (Tok::Ident(kw), Tok::Ident(_), Tok::Ident(at)) if kw == "event" && at == "at" => {
                    self.next();
                    raw.events.push(self.event()?);
                }
                (Tok::Ident(_), Tok::Eq, _) => self.assignment(&mut raw)?,
                (Tok::Ident(_) | Tok::Empty, _, _) => {
                    raw.system = self.system_equation()?;
                    let t = self.peek();
                    if t.tok != Tok::Eof {
                        return Err(ParseError::at(t.pos, "the system equation must be the last statement"));
                    }
                    break;
                }
                (tok, _, _) => return Err(ParseError::expected(t.pos, "statement", tok)),
            }
            first = false;
        }
        Ok(raw)
    }

    fn location(&mut self) -> Result<(Location, Position), ParseError> {
        let (name, pos) = self.ident()?;
        let parent = if matches!(&self.peek().tok, Tok::Ident(s) if s == "in") {
            self.next();
            Some(self.ident()?.0)
        } else {
            None
        };
        self.expect(Tok::Colon)?;
        let mut size = None;
        let mut kind = None;
        loop {
            let (key, kpos) = self.ident()?;
            self.expect(Tok::Eq)?;
            match key.as_str() {
                "size" if size.is_none() => size = Some(self.expr()?),
                "type" if kind.is_none() => {
                    let (k, p) = self.ident()?;
                    kind = Some(match k.as_str() {
                        "compartment" => LocationKind::Compartment,
                        "membrane" => LocationKind::Membrane,
                        _ => {
                            return Err(ParseError {
                                expected: Some("`compartment` or `membrane`".into()),
                                ..ParseError::at(p, format!("unknown location type `{k}`"))
                            })
                        }
                    });
                }
                _ => {
                    return Err(ParseError {
                        expected: Some("`size` or `type`".into()),
                        ..ParseError::at(kpos, format!("unexpected location attribute `{key}`"))
                    })
                }
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        let end = self.expect(Tok::Semi)?;
        let missing = |what: &str| ParseError::at(end, format!("location `{name}` is missing `{what}`"));
        let size = size.ok_or_else(|| missing("size"))?;
        let kind = kind.ok_or_else(|| missing("type"))?;
        Ok((
            Location {
                name,
                parent,
                size,
                kind,
            },
            pos,
        ))
    }

    fn event(&mut self) -> Result<(Event, Position), ParseError> {
        let (name, pos) = self.ident()?;
        self.keyword("at")?;
        let (trigger_time, _) = self.number()?;
        self.expect(Tok::LBrace)?;
        let mut assignments = Vec::new();
        loop {
            let (target, _) = self.ident()?;
            self.expect(Tok::Eq)?;
            let value = self.expr()?;
            assignments.push(Assignment { target, value });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        self.eat(&Tok::Semi);
        Ok((
            Event {
                name,
                trigger_time,
                assignments,
            },
            pos,
        ))
    }

    fn assignment(&mut self, raw: &mut RawModel) -> Result<(), ParseError> {
        let (name, pos) = self.ident()?;
        self.expect(Tok::Eq)?;
        let is_component = matches!(
            (self.peek_at(0), self.peek_at(1), self.peek_at(2)),
            (Tok::LParen, Tok::Ident(_), Tok::Comma)
        );
        if is_component {
            let mut prefixes = Vec::new();
            let mut positions = Vec::new();
            loop {
                let (prefix, p) = self.prefix(&name)?;
                prefixes.push(prefix);
                positions.push(p);
                if !self.eat(&Tok::Plus) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
            raw.components
                .push((SpeciesComponent { name, prefixes }, pos, positions));
        } else if self.eat(&Tok::Empty) {
            self.expect(Tok::Semi)?;
            raw.components.push((
                SpeciesComponent {
                    name,
                    prefixes: Vec::new(),
                },
                pos,
                Vec::new(),
            ));
        } else {
            let e = self.expr()?;
            self.expect(Tok::Semi)?;
            raw.assignments.push((name, e, pos));
        }
        Ok(())
    }

    fn prefix(&mut self, component: &str) -> Result<(Prefix, Position), ParseError> {
        let open = self.expect(Tok::LParen)?;
        let (action, _) = self.ident()?;
        self.expect(Tok::Comma)?;
        let (k, kpos) = self.number()?;
        if self.peek().tok != Tok::RParen {
            let t = self.peek();
            return Err(ParseError {
                expected: Some("`)`".into()),
                related: Some((t.pos.line, t.pos.column)),
                ..ParseError::at(open, format!("unclosed `(`: expected `)`, found {}", t.tok.describe()))
            });
        }
        self.next();
        if k < 1.0 || k.fract() != 0.0 || k > f64::from(u32::MAX) {
            return Err(ParseError::at(kpos, "stoichiometry must be a positive integer"));
        }
        let t = self.next();
        let Tok::Role(role) = t.tok else {
            return Err(ParseError::expected(
                t.pos,
                "role operator (<<, >>, (+), (-), (.))",
                &t.tok,
            ));
        };
        let (target, tpos) = self.ident()?;
        if target != component {
            return Err(ParseError::at(
                tpos,
                format!("prefix target `{target}` must be the component being defined (`{component}`)"),
            ));
        }
        let location = if self.eat(&Tok::At) {
            Some(self.ident()?.0)
        } else {
            None
        };
        Ok((
            Prefix {
                action,
                stoichiometry: k as u32,
                role,
                location,
            },
            open,
        ))
    }

    fn system_equation(&mut self) -> Result<Vec<(SpeciesInstance, Position)>, ParseError> {
        let mut out = Vec::new();
        if self.eat(&Tok::Empty) {
            self.eat(&Tok::Semi);
            return Ok(out);
        }
        loop {
            let (species, pos) = self.ident()?;
            let location = if self.eat(&Tok::At) {
                Some(self.ident()?.0)
            } else {
                None
            };
            let initial_amount = if self.eat(&Tok::LBracket) {
                let (v, _) = self.number()?;
                self.expect(Tok::RBracket)?;
                Some(v)
            } else {
                None
            };
            out.push((
                SpeciesInstance {
                    species,
                    location,
                    initial_amount,
                    step_size: 1.0,
                    levels: 1,
                },
                pos,
            ));
            if !self.eat(&Tok::Coop) {
                break;
            }
        }
        self.eat(&Tok::Semi);
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => Expr::add,
                Tok::Minus => Expr::sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = op(lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => Expr::mul,
                Tok::Slash => Expr::div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = op(lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::neg(self.unary()?));
        }
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let exponent = self.unary()?;
            return Ok(Expr::pow(base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(v) => {
                self.next();
                Ok(Expr::Number(v))
            }
            Tok::Ident(s) => {
                self.next();
                Ok(Expr::Symbol(s))
            }
            Tok::LParen => {
                self.next();
                if self.peek().tok == Tok::Eof {
                    return Err(ParseError {
                        expected: Some("expression".into()),
                        ..ParseError::at(t.pos, "unclosed `(`")
                    });
                }
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    let found = self.peek();
                    return Err(ParseError {
                        expected: Some("`)`".into()),
                        related: Some((found.pos.line, found.pos.column)),
                        ..ParseError::at(
                            t.pos,
                            format!("unclosed `(`: expected `)`, found {}", found.tok.describe()),
                        )
                    });
                }
                self.next();
                Ok(inner)
            }
            other => Err(ParseError::expected(t.pos, "expression", &other)),
        }
    }
}

fn duplicate(name: &str, what: &str, pos: Position, first: Position) -> ParseError {
    ParseError {
        related: Some((first.line, first.column)),
        ..ParseError::at(
            pos,
            format!(
                "duplicate {what} `{name}` (first defined at {}:{})",
                first.line, first.column
            ),
        )
    }
}

fn check_unique<'a>(
    items: impl IntoIterator<Item = (&'a str, Position)>,
    what: &str,
    seen: &mut HashMap<String, Position>,
) -> Result<(), ParseError> {
    for (name, pos) in items {
        if let Some(first) = seen.get(name) {
            return Err(duplicate(name, what, pos, *first));
        }
        seen.insert(name.to_string(), pos);
    }
    Ok(())
}

impl RawModel {
    fn build(self) -> Result<Model, ParseError> {
        check_unique(
            self.locations.iter().map(|(l, p)| (l.name.as_str(), *p)),
            "location",
            &mut HashMap::new(),
        )?;
        check_unique(
            self.components.iter().map(|(c, p, _)| (c.name.as_str(), *p)),
            "species component",
            &mut HashMap::new(),
        )?;
        check_unique(
            self.events.iter().map(|(e, p)| (e.name.as_str(), *p)),
            "event",
            &mut HashMap::new(),
        )?;
        // parameters and functional rates share one namespace
        check_unique(
            self.assignments.iter().map(|(n, _, p)| (n.as_str(), *p)),
            "definition",
            &mut HashMap::new(),
        )?;
        let ids: Vec<(String, Position)> = self.system.iter().map(|(i, p)| (i.global_id(), *p)).collect();
        check_unique(
            ids.iter().map(|(n, p)| (n.as_str(), *p)),
            "species instance",
            &mut HashMap::new(),
        )?;
        for (comp, _, positions) in &self.components {
            let mut seen: HashMap<(&str, Option<&str>), Position> = HashMap::new();
            for (prefix, pos) in comp.prefixes.iter().zip(positions) {
                let key = (prefix.action.as_str(), prefix.location.as_deref());
                if let Some(first) = seen.get(&key) {
                    return Err(duplicate(&prefix.action, "action in this component", *pos, *first));
                }
                seen.insert(key, *pos);
            }
        }

        let actions: HashSet<&str> = self
            .components
            .iter()
            .flat_map(|(c, _, _)| c.prefixes.iter().map(|p| p.action.as_str()))
            .collect();

        let mut functional_rates = Vec::new();
        // (name, value) in source order; derived ones are filled in below
        let mut params: Vec<PendingParam> = Vec::new();
        for (name, expr, pos) in self.assignments {
            if actions.contains(name.as_str()) {
                functional_rates.push(FunctionalRate {
                    action: name,
                    law: expr,
                });
            } else if let Expr::Number(v) = expr {
                params.push((name, Some(v), None));
            } else {
                params.push((name, None, Some((expr, pos))));
            }
        }
        resolve_derived(&mut params)?;

        Ok(Model {
            name: self.name.map_or_else(|| DEFAULT_MODEL_NAME.to_string(), |(n, _)| n),
            locations: self.locations.into_iter().map(|(l, _)| l).collect(),
            parameters: params
                .into_iter()
                .map(|(name, v, _)| Parameter::global(name, v.expect("resolved")))
                .collect(),
            functional_rates,
            species: self.components.into_iter().map(|(c, _, _)| c).collect(),
            system: self.system.into_iter().map(|(i, _)| i).collect(),
            events: self.events.into_iter().map(|(e, _)| e).collect(),
        })
    }
}

/// Name, value once known, and the defining expression if not a literal.
type PendingParam = (String, Option<f64>, Option<(Expr, Position)>);

/// Evaluates constant-expression parameters in dependency order.
fn resolve_derived(params: &mut [PendingParam]) -> Result<(), ParseError> {
    loop {
        let mut progressed = false;
        let mut pending = None;
        for i in 0..params.len() {
            if params[i].1.is_some() {
                continue;
            }
            let (expr, pos) = params[i].2.clone().expect("derived parameter keeps its expression");
            let lookup = |s: &str| params.iter().find(|(n, _, _)| n == s).and_then(|(_, v, _)| *v);
            match expr.eval_with(&lookup) {
                Ok(v) => {
                    params[i].1 = Some(v);
                    progressed = true;
                }
                Err(e) => pending = Some((params[i].0.clone(), pos, e)),
            }
        }
        match pending {
            None => return Ok(()),
            Some(_) if progressed => continue,
            Some((name, pos, err)) => {
                return Err(ParseError::at(
                    pos,
                    format!(
                        "`{name}` is not used as an action, so it must be a constant expression over parameters ({err})"
                    ),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BinOp, Role};

    #[test]
    fn location_statement() {
        let m = parse_model("location Age1 in world : size = sizeAge, type = compartment;").unwrap();
        assert_eq!(
            m.locations,
            vec![Location {
                name: "Age1".into(),
                parent: Some("world".into()),
                size: Expr::sym("sizeAge"),
                kind: LocationKind::Compartment,
            }]
        );
    }

    #[test]
    fn functional_rate_is_recognised_by_action_use() {
        let m = parse_model("Exposition = lambda * S * I;\nS = (Exposition,1) << S;\nS[1]").unwrap();
        assert_eq!(m.functional_rates.len(), 1);
        assert_eq!(m.functional_rates[0].action, "Exposition");
        assert_eq!(
            m.functional_rates[0].law,
            Expr::mul(Expr::mul(Expr::sym("lambda"), Expr::sym("S")), Expr::sym("I"))
        );
        assert!(m.parameters.is_empty());
    }

    #[test]
    fn species_component_with_two_reactant_prefixes() {
        let m = parse_model("S = (Exposition,1) << S + (Vaccination_1,1) << S;").unwrap();
        let c = &m.species[0];
        assert_eq!(c.name, "S");
        assert_eq!(c.prefixes.len(), 2);
        assert!(c
            .prefixes
            .iter()
            .all(|p| p.role == Role::Reactant && p.stoichiometry == 1));
        assert_eq!(c.prefixes[1].action, "Vaccination_1");
    }

    #[test]
    fn unbalanced_parenthesis_in_prefix() {
        let src = "S = (Exposition,1 << S;";
        let err = parse_model(src).unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        assert_eq!(&src[err.offset..err.offset + 1], "(");
        assert_eq!(err.expected.as_deref(), Some("`)`"));
    }

    #[test]
    fn expression_precedence() {
        assert_eq!(
            parse_expr("W * VP").unwrap(),
            Expr::mul(Expr::sym("W"), Expr::sym("VP"))
        );
        let e = parse_expr("2 + 3 * 4").unwrap();
        assert_eq!(e, Expr::add(Expr::num(2.0), Expr::mul(Expr::num(3.0), Expr::num(4.0))));
        assert_eq!(e.eval(&HashMap::new()).unwrap(), 14.0);
        // ^ binds tighter than unary minus and is right-associative
        assert_eq!(parse_expr("-2 ^ 2").unwrap().eval(&HashMap::new()).unwrap(), -4.0);
        let e = parse_expr("a ^ b ^ c").unwrap();
        assert!(matches!(e, Expr::Binary { op: BinOp::Pow, ref lhs, .. } if **lhs == Expr::sym("a")));
        assert_eq!(parse_expr("8 / 4 / 2").unwrap().eval(&HashMap::new()).unwrap(), 1.0);
        assert_eq!(parse_expr("2 ^ -1").unwrap().eval(&HashMap::new()).unwrap(), 0.5);
    }

    #[test]
    fn lone_parenthesis_fails_at_column_one() {
        let err = parse_expr("(").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn numeric_and_derived_parameters() {
        let m = parse_model("b = 2 * a;\na = 3;\nc = -a;").unwrap();
        let vals: Vec<_> = m.parameters.iter().map(|p| (p.name.as_str(), p.value)).collect();
        assert_eq!(vals, [("b", 6.0), ("a", 3.0), ("c", -3.0)]);
    }

    #[test]
    fn unresolvable_derived_parameter_is_an_error() {
        let err = parse_model("x = S * 2;").unwrap_err();
        assert!(err.message.contains("constant expression"), "{}", err.message);
    }

    #[test]
    fn duplicates_carry_both_positions() {
        let err = parse_model("k = 1;\nk = 2;").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        assert_eq!(err.related, Some((1, 1)));
    }

    #[test]
    fn system_equation_and_events() {
        let src = "model sir;\nevent lockdown at 10 { beta = 0.5 * beta, I = 0 }\nS@A[990] <*> I@A <*> R";
        let m = parse_model(src).unwrap();
        assert_eq!(m.name, "sir");
        assert_eq!(m.system.len(), 3);
        assert_eq!(m.system[0].global_id(), "S_A");
        assert_eq!(m.system[0].initial_amount, Some(990.0));
        assert_eq!(m.system[1].initial_amount, None);
        assert_eq!(m.system[2].location, None);
        assert_eq!(m.events[0].trigger_time, 10.0);
        assert_eq!(m.events[0].assignments.len(), 2);
    }

    #[test]
    fn system_equation_must_be_last() {
        let err = parse_model("S[1]\nk = 1;").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn empty_input_and_empty_marker() {
        assert_eq!(parse_model("").unwrap(), Model::default());
        assert_eq!(parse_model("// nothing\n()").unwrap(), Model::default());
    }

    #[test]
    fn crlf_and_lf_parse_identically() {
        let lf = "k = 1;\nS = (r,1) << S;\nr = k * S;\nS[4]";
        let crlf = lf.replace('\n', "\r\n");
        assert_eq!(parse_model(lf).unwrap(), parse_model(&crlf).unwrap());
    }

    #[test]
    fn prefix_target_must_match_component() {
        assert!(parse_model("S = (r,1) << I;").is_err());
        assert!(parse_model("S = (r,0) << S;").is_err());
    }

    #[test]
    fn located_prefixes() {
        let m = parse_model("S = (r1,1) << S@A1 + (r2,2) >> S@A2;").unwrap();
        assert_eq!(m.species[0].prefixes[1].location.as_deref(), Some("A2"));
        assert_eq!(m.species[0].prefixes[1].stoichiometry, 2);
        assert!(parse_model("S = (r1,1) << S@A1 + (r1,1) << S@A1;").is_err());
    }
}
