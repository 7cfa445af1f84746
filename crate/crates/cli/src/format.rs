//! Line-oriented text formats for automata, grammars and client-server specs.
//!
//! Automaton files:
//!
//! ```text
//! kind: omega            # or finite; omega when absent
//! states: A U B
//! initial: A
//! accepting: A
//! input: a
//! stack: α β
//! pricing: α=0 β=3
//! lc: a=1/2
//! buchi: A               # weighted systems only
//! trans:
//!   A a _ -> U α         # _ is the bottom marker
//!   B a β -> B -         # - pushes nothing
//!   U a α -> U α α @ -2  # @ gives a transition weight
//! ```
//!
//! Grammar files have `start:`, optional `lc:` and `rules:` with lines such as
//! `S -> a S b | -`. Client-server files have `initial:` and `trans:` with
//! lines `q r|g|# zero|nonzero|any -> q'`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use stackavg::art::{ClientServerSpec, Guard, Label};
use stackavg::grammar::{Cfg, GSym, Production};
use stackavg::{parse_rational, LetterCost, Pda, StackPricing, StateId, SymbolId, Top, Transition, Wps};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// Splits a line into whitespace-separated tokens with 1-based columns.
fn tokenize(line: &str, number: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    let mut start_col = 0;
    for (i, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    line: number,
                    column: start_col,
                });
            }
        } else if start.is_none() {
            start = Some(i);
            start_col = col;
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            line: number,
            column: start_col,
        });
    }
    out
}

/// Tokens of every line, grouped under the section header that precedes
/// them. A `#` token starts a comment, except where `keep_hash` allows it.
struct Sections<'a> {
    sections: Vec<(Token<'a>, Vec<Vec<Token<'a>>>)>,
}

impl<'a> Sections<'a> {
    fn parse(text: &'a str, known: &[&str], keep_hash: impl Fn(&[Token<'a>]) -> bool) -> Result<Self, ParseError> {
        let mut sections: Vec<(Token<'a>, Vec<Vec<Token<'a>>>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let mut tokens = Vec::new();
            for t in tokenize(raw, i + 1) {
                if t.text.starts_with('#') && !keep_hash(&tokens) {
                    break;
                }
                tokens.push(t);
            }
            let Some(first) = tokens.first() else { continue };
            if let Some(name) = first.text.strip_suffix(':') {
                if !known.contains(&name) {
                    return Err(first.error(format!("unknown section '{name}'")));
                }
                if sections.iter().any(|(h, _)| h.text == first.text) {
                    return Err(first.error(format!("duplicate section '{name}'")));
                }
                let header = first.clone();
                let rest = tokens[1..].to_vec();
                let mut lines = Vec::new();
                if !rest.is_empty() {
                    lines.push(rest);
                }
                sections.push((header, lines));
            } else {
                match sections.last_mut() {
                    Some((_, lines)) => lines.push(tokens),
                    None => return Err(first.error("expected a section header such as 'states:'")),
                }
            }
        }
        Ok(Sections { sections })
    }

    fn has(&self, name: &str) -> bool {
        self.lines(name).is_some()
    }

    fn lines(&self, name: &str) -> Option<&[Vec<Token<'a>>]> {
        self.sections
            .iter()
            .find(|(h, _)| h.text.strip_suffix(':') == Some(name))
            .map(|(_, l)| l.as_slice())
    }

    fn items(&self, name: &str) -> Vec<&Token<'a>> {
        self.lines(name).unwrap_or_default().iter().flatten().collect()
    }

    fn header(&self, name: &str) -> Option<&Token<'a>> {
        self.sections
            .iter()
            .map(|(h, _)| h)
            .find(|h| h.text.strip_suffix(':') == Some(name))
    }
}

/// Names declared in one section, in order.
struct Table {
    kind: &'static str,
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Table {
    fn declare(kind: &'static str, tokens: &[&Token<'_>]) -> Result<Self, ParseError> {
        let mut t = Table {
            kind,
            names: Vec::new(),
            ids: HashMap::new(),
        };
        for tok in tokens {
            if t.ids.contains_key(tok.text) {
                return Err(tok.error(format!("duplicate {kind} '{}'", tok.text)));
            }
            t.ids.insert(tok.text.to_string(), t.names.len() as u32);
            t.names.push(tok.text.to_string());
        }
        Ok(t)
    }

    fn get(&self, tok: &Token<'_>) -> Result<u32, ParseError> {
        self.ids
            .get(tok.text)
            .copied()
            .ok_or_else(|| tok.error(format!("undeclared {} '{}' on line {}", self.kind, tok.text, tok.line)))
    }
}

/// An automaton file with whichever annotations it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonFile {
    pub pda: Pda,
    pub pricing: Option<StackPricing>,
    pub lc: Option<LetterCost>,
    /// One weight per transition when the file describes a weighted system.
    pub weights: Option<Vec<BigInt>>,
    pub buchi: Option<BTreeSet<StateId>>,
}

impl AutomatonFile {
    pub fn new(pda: Pda) -> Self {
        AutomatonFile {
            pda,
            pricing: None,
            lc: None,
            weights: None,
            buchi: None,
        }
    }

    /// The weighted pushdown system described by the file.
    pub fn wps(&self) -> Result<Wps, String> {
        let weights = self.weights.clone().ok_or("transitions carry no '@ weight'")?;
        Wps::new(self.pda.clone(), weights, self.buchi.clone().unwrap_or_default()).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarFile {
    pub cfg: Cfg,
    pub lc: Option<LetterCost>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Automaton(AutomatonFile),
    Grammar(GrammarFile),
    ClientServer(ClientServerSpec),
}

const AUTOMATON_SECTIONS: &[&str] = &[
    "kind", "states", "initial", "accepting", "input", "stack", "pricing", "lc", "buchi", "trans",
];
const GRAMMAR_SECTIONS: &[&str] = &["start", "lc", "rules"];
const SERVER_SECTIONS: &[&str] = &["initial", "trans"];

/// Parses any of the three formats: a `rules:` section marks a grammar, a
/// `states:` section an automaton, and anything else a client-server spec.
pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    let headers: Vec<String> = text
        .lines()
        .filter_map(|l| l.split_whitespace().next())
        .filter_map(|t| t.strip_suffix(':'))
        .map(str::to_string)
        .collect();
    if headers.iter().any(|h| h == "rules") {
        parse_grammar(text).map(Model::Grammar)
    } else if headers.iter().any(|h| h == "states") {
        parse_automaton(text).map(Model::Automaton)
    } else {
        parse_client_server(text).map(Model::ClientServer)
    }
}

fn pair<'a>(tok: &Token<'a>) -> Result<(Token<'a>, &'a str), ParseError> {
    let (name, value) = tok
        .text
        .split_once('=')
        .ok_or_else(|| tok.error(format!("expected name=value, found '{}'", tok.text)))?;
    let name_tok = Token {
        text: name,
        line: tok.line,
        column: tok.column,
    };
    Ok((name_tok, value))
}

fn parse_lc(s: &Sections<'_>, letters: Option<&Table>) -> Result<Option<LetterCost>, ParseError> {
    if !s.has("lc") {
        return Ok(None);
    }
    let mut lc = LetterCost::new();
    let mut seen = BTreeSet::new();
    for tok in s.items("lc") {
        let (name, value) = pair(tok)?;
        if let Some(t) = letters {
            t.get(&name)?;
        }
        if !seen.insert(name.text) {
            return Err(tok.error(format!("duplicate letter cost for '{}'", name.text)));
        }
        let v = parse_rational(value).ok_or_else(|| tok.error(format!("'{value}' is not a rational number")))?;
        lc.set(name.text, v);
    }
    Ok(Some(lc))
}

pub fn parse_automaton(text: &str) -> Result<AutomatonFile, ParseError> {
    let s = Sections::parse(text, AUTOMATON_SECTIONS, |_| false)?;
    let omega = match s.items("kind").as_slice() {
        [] => true,
        [t] if t.text == "omega" => true,
        [t] if t.text == "finite" => false,
        [t, ..] => return Err(t.error("kind must be 'omega' or 'finite'")),
    };
    let states = Table::declare("state", &s.items("states"))?;
    let letters = Table::declare("letter", &s.items("input"))?;
    let symbols = Table::declare("stack symbol", &s.items("stack"))?;
    let state_set = |name: &str| -> Result<BTreeSet<StateId>, ParseError> {
        s.items(name).into_iter().map(|t| states.get(t).map(StateId)).collect()
    };
    let initial = state_set("initial")?;
    let accepting = state_set("accepting")?;
    let buchi = if s.has("buchi") { Some(state_set("buchi")?) } else { None };

    let pricing = if s.has("pricing") {
        let mut costs = vec![None; symbols.names.len()];
        for tok in s.items("pricing") {
            let (name, value) = pair(tok)?;
            let id = symbols.get(&name)? as usize;
            if costs[id].is_some() {
                return Err(tok.error(format!("duplicate price for '{}'", name.text)));
            }
            let v: u64 = value
                .parse()
                .map_err(|_| tok.error(format!("price '{value}' is not a natural number")))?;
            costs[id] = Some(v);
        }
        Some(StackPricing::new(costs))
    } else {
        None
    };
    let lc = parse_lc(&s, Some(&letters))?;

    let mut transitions = Vec::new();
    let mut weights: Vec<Option<BigInt>> = Vec::new();
    for line in s.lines("trans").unwrap_or_default() {
        let (t, w) = parse_transition(line, &states, &letters, &symbols)?;
        transitions.push(t);
        weights.push(w);
    }
    let weights = if weights.iter().all(Option::is_none) {
        None
    } else if let Some(i) = weights.iter().position(Option::is_none) {
        let line = &s.lines("trans").unwrap_or_default()[i];
        return Err(line[0].error("every transition needs a weight once one has '@ weight'"));
    } else {
        Some(weights.into_iter().flatten().collect())
    };
    let pda = Pda::from_parts(
        states.names,
        letters.names,
        symbols.names,
        initial,
        accepting,
        transitions,
        omega,
    );
    Ok(AutomatonFile {
        pda,
        pricing,
        lc,
        weights,
        buchi,
    })
}

fn parse_transition(
    line: &[Token<'_>],
    states: &Table,
    letters: &Table,
    symbols: &Table,
) -> Result<(Transition, Option<BigInt>), ParseError> {
    let first = &line[0];
    let shape = "expected 'q a x -> q' push [@ weight]'";
    if line.len() < 5 || line[3].text != "->" {
        return Err(first.error(shape));
    }
    let from = StateId(states.get(&line[0])?);
    let letter = stackavg::LetterId(letters.get(&line[1])?);
    let top = match line[2].text {
        "_" => Top::Bottom,
        _ => Top::Symbol(SymbolId(symbols.get(&line[2])?)),
    };
    let to = StateId(states.get(&line[4])?);
    let mut rest = &line[5..];
    let mut weight = None;
    if let Some(at) = rest.iter().position(|t| t.text == "@") {
        let w = rest.get(at + 1).ok_or_else(|| rest[at].error("missing weight after '@'"))?;
        if rest.len() > at + 2 {
            return Err(rest[at + 2].error("unexpected token after the weight"));
        }
        weight = Some(
            w.text
                .parse::<BigInt>()
                .map_err(|_| w.error(format!("weight '{}' is not an integer", w.text)))?,
        );
        rest = &rest[..at];
    }
    let push = match rest {
        [] => return Err(first.error(format!("{shape}; use '-' for an empty push"))),
        [t] if t.text == "-" => Vec::new(),
        _ => rest
            .iter()
            .map(|t| symbols.get(t).map(SymbolId))
            .collect::<Result<_, _>>()?,
    };
    Ok((
        Transition {
            from,
            letter,
            top,
            to,
            push,
        },
        weight,
    ))
}

pub fn parse_grammar(text: &str) -> Result<GrammarFile, ParseError> {
    let s = Sections::parse(text, GRAMMAR_SECTIONS, |_| false)?;
    let start = match s.items("start").as_slice() {
        [t] => t.text.to_string(),
        [_, t, ..] => return Err(t.error("a grammar has exactly one start symbol")),
        [] => {
            let at = s.header("rules").map_or((1, 1), |h| (h.line, h.column));
            return Err(ParseError {
                line: at.0,
                column: at.1,
                message: "missing 'start:' section".into(),
            });
        }
    };
    let rules = s.lines("rules").unwrap_or_default();
    let mut nonterminals = vec![start.clone()];
    for line in rules {
        if line.len() < 2 || line[1].text != "->" {
            return Err(line[0].error("expected 'A -> body | body ...'"));
        }
        if !nonterminals.iter().any(|n| n == line[0].text) {
            nonterminals.push(line[0].text.to_string());
        }
    }
    let mut terminals: Vec<String> = Vec::new();
    let mut productions = Vec::new();
    for line in rules {
        let head = nonterminals.iter().position(|n| n == line[0].text).unwrap();
        for alt in line[2..].split(|t| t.text == "|") {
            let body = match alt {
                [] => return Err(line[1].error("empty alternative; write '-' for ε")),
                [t] if t.text == "-" => Vec::new(),
                _ => alt
                    .iter()
                    .map(|t| {
                        if t.text == "-" {
                            return Err(t.error("'-' must stand alone"));
                        }
                        Ok(match nonterminals.iter().position(|n| n == t.text) {
                            Some(i) => GSym::N(i),
                            None => GSym::T(match terminals.iter().position(|x| x == t.text) {
                                Some(i) => i,
                                None => {
                                    terminals.push(t.text.to_string());
                                    terminals.len() - 1
                                }
                            }),
                        })
                    })
                    .collect::<Result<_, _>>()?,
            };
            productions.push(Production { head, body });
        }
    }
    let lc = parse_lc(&s, None)?;
    if let Some(lc) = &lc {
        for tok in s.items("lc") {
            let name = tok.text.split('=').next().unwrap_or_default();
            if !terminals.iter().any(|t| t == name) {
                return Err(tok.error(format!("undeclared terminal '{name}' on line {}", tok.line)));
            }
        }
        debug_assert!(lc.len() <= terminals.len());
    }
    let cfg = Cfg::new(terminals, nonterminals, 0, productions).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(GrammarFile { cfg, lc })
}

pub fn parse_client_server(text: &str) -> Result<ClientServerSpec, ParseError> {
    // The label `#` sits in the second column of a transition line.
    let s = Sections::parse(text, SERVER_SECTIONS, |before| before.len() == 1 && before[0].text != "trans:")?;
    let initial = match s.items("initial").as_slice() {
        [t] => t.text.to_string(),
        [_, t, ..] => return Err(t.error("exactly one initial state")),
        [] => {
            return Err(ParseError {
                line: 1,
                column: 1,
                message: "missing 'initial:' section".into(),
            })
        }
    };
    let mut spec = ClientServerSpec::new(&initial);
    for line in s.lines("trans").unwrap_or_default() {
        if line.len() != 5 || line[3].text != "->" {
            return Err(line[0].error("expected 'q r|g|# zero|nonzero|any -> q''"));
        }
        let label = Label::parse(line[1].text).ok_or_else(|| line[1].error("label must be r, g or #"))?;
        let guard =
            Guard::parse(line[2].text).ok_or_else(|| line[2].error("guard must be zero, nonzero or any"))?;
        spec.add(line[0].text, label, guard, line[4].text);
    }
    spec.validate().map_err(|e| {
        let i = spec
            .transitions
            .iter()
            .position(|t| t.label == Label::Grant && t.guard != Guard::NonZero)
            .unwrap_or(0);
        let tok = &s.lines("trans").unwrap_or_default()[i][0];
        tok.error(e.to_string())
    })?;
    Ok(spec)
}

fn join<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    items.into_iter().collect::<Vec<_>>().join(" ")
}

pub fn serialize_automaton(f: &AutomatonFile) -> String {
    let a = &f.pda;
    let mut out = String::new();
    let names = |set: &BTreeSet<StateId>| join(set.iter().map(|&q| a.state_name(q)));
    writeln!(out, "kind: {}", if a.is_omega() { "omega" } else { "finite" }).unwrap();
    writeln!(out, "states: {}", join(a.states().iter().map(String::as_str))).unwrap();
    writeln!(out, "initial: {}", names(a.initial())).unwrap();
    writeln!(out, "accepting: {}", names(a.accepting())).unwrap();
    writeln!(out, "input: {}", join(a.letters().iter().map(String::as_str))).unwrap();
    writeln!(out, "stack: {}", join(a.symbols().iter().map(String::as_str))).unwrap();
    if let Some(c) = &f.pricing {
        let items: Vec<String> = c
            .costs()
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| format!("{}={v}", a.symbols()[i])))
            .collect();
        writeln!(out, "pricing: {}", items.join(" ")).unwrap();
    }
    if let Some(lc) = &f.lc {
        let items: Vec<String> = lc.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "lc: {}", items.join(" ")).unwrap();
    }
    if let Some(b) = &f.buchi {
        writeln!(out, "buchi: {}", names(b)).unwrap();
    }
    writeln!(out, "trans:").unwrap();
    for (i, t) in a.transitions().iter().enumerate() {
        let top = match t.top {
            Top::Bottom => "_",
            Top::Symbol(x) => a.symbol_name(x),
        };
        let push = if t.push.is_empty() {
            "-".to_string()
        } else {
            join(t.push.iter().map(|&x| a.symbol_name(x)))
        };
        write!(
            out,
            "  {} {} {} -> {} {}",
            a.state_name(t.from),
            a.letter_name(t.letter),
            top,
            a.state_name(t.to),
            push
        )
        .unwrap();
        if let Some(w) = &f.weights {
            write!(out, " @ {}", w[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn serialize_grammar(f: &GrammarFile) -> String {
    let g = &f.cfg;
    let mut out = String::new();
    writeln!(out, "start: {}", g.nonterminals()[g.start()]).unwrap();
    if let Some(lc) = &f.lc {
        let items: Vec<String> = lc.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "lc: {}", items.join(" ")).unwrap();
    }
    writeln!(out, "rules:").unwrap();
    // Heads in nonterminal order so that ids survive a round trip.
    for (h, name) in g.nonterminals().iter().enumerate() {
        let bodies: Vec<String> = g
            .productions()
            .iter()
            .filter(|p| p.head == h)
            .map(|p| {
                if p.body.is_empty() {
                    "-".to_string()
                } else {
                    join(p.body.iter().map(|s| match *s {
                        GSym::T(a) => g.terminals()[a].as_str(),
                        GSym::N(b) => g.nonterminals()[b].as_str(),
                    }))
                }
            })
            .collect();
        if !bodies.is_empty() {
            writeln!(out, "  {name} -> {}", bodies.join(" | ")).unwrap();
        }
    }
    out
}

pub fn serialize_client_server(spec: &ClientServerSpec) -> String {
    let mut out = format!("initial: {}\ntrans:\n", spec.initial);
    for t in &spec.transitions {
        writeln!(out, "  {} {} {} -> {}", t.from, t.label, t.guard.keyword(), t.to).unwrap();
    }
    out
}
