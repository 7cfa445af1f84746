//! Context-free grammars and the transformations used by the decision
//! procedures: conversion from pushdown automata, Chomsky normal form,
//! pruning, ε- and unit-rule elimination, and pump grammars.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::model::{ModelError, Pda, Top};
use crate::saturation::{Body, Nt, Saturation};

/// A grammar symbol: terminal or nonterminal index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GSym {
    T(usize),
    N(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Production {
    pub head: usize,
    pub body: Vec<GSym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    start: usize,
    productions: Vec<Production>,
    is_cnf: bool,
    is_pruned: bool,
}

impl Cfg {
    /// Assembles a grammar, dropping duplicate productions.
    pub fn new(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        start: usize,
        productions: Vec<Production>,
    ) -> Result<Self, ModelError> {
        if start >= nonterminals.len() {
            return Err(ModelError::Invalid("start symbol is not a nonterminal".into()));
        }
        for p in &productions {
            if p.head >= nonterminals.len() {
                return Err(ModelError::Invalid(format!("production head #{} undeclared", p.head)));
            }
            for s in &p.body {
                let ok = match *s {
                    GSym::T(a) => a < terminals.len(),
                    GSym::N(b) => b < nonterminals.len(),
                };
                if !ok {
                    return Err(ModelError::Invalid(format!("undeclared symbol {s:?} in a body")));
                }
            }
        }
        Ok(Self::raw(terminals, nonterminals, start, productions))
    }

    fn raw(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        start: usize,
        productions: Vec<Production>,
    ) -> Self {
        let mut seen = HashSet::new();
        let productions: Vec<Production> = productions
            .into_iter()
            .filter(|p| seen.insert(p.clone()))
            .collect();
        let mut g = Cfg {
            terminals,
            nonterminals,
            start,
            productions,
            is_cnf: false,
            is_pruned: false,
        };
        g.is_cnf = g.check_cnf();
        g
    }

    /// Builds a grammar from rules written as `(head, "X Y z")`. Every head
    /// and the start symbol are nonterminals; any other body token is a
    /// terminal. An empty body is an ε-rule.
    pub fn from_rules(start: &str, rules: &[(&str, &str)]) -> Self {
        let mut nonterminals: Vec<String> = vec![start.to_string()];
        for (h, _) in rules {
            if !nonterminals.iter().any(|n| n == h) {
                nonterminals.push(h.to_string());
            }
        }
        let mut terminals: Vec<String> = Vec::new();
        let mut productions = Vec::new();
        for (h, body) in rules {
            let head = nonterminals.iter().position(|n| n == h).unwrap();
            let body = body
                .split_whitespace()
                .map(|tok| match nonterminals.iter().position(|n| n == tok) {
                    Some(i) => GSym::N(i),
                    None => GSym::T(intern(&mut terminals, tok)),
                })
                .collect();
            productions.push(Production { head, body });
        }
        Self::raw(terminals, nonterminals, 0, productions)
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }
    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }
    pub fn start(&self) -> usize {
        self.start
    }
    pub fn productions(&self) -> &[Production] {
        &self.productions
    }
    pub fn is_cnf(&self) -> bool {
        self.is_cnf
    }
    pub fn is_pruned(&self) -> bool {
        self.is_pruned
    }

    pub fn nonterminal_id(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub fn terminal_id(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|n| n == name)
    }

    /// Same grammar with terminal indices remapped onto `alphabet`, which
    /// must contain every terminal. Used to align grammars over one alphabet.
    pub fn with_alphabet(&self, alphabet: &[String]) -> Result<Self, ModelError> {
        let map: Vec<usize> = self
            .terminals
            .iter()
            .map(|t| {
                alphabet.iter().position(|a| a == t).ok_or_else(|| ModelError::Unknown {
                    kind: "letter",
                    name: t.clone(),
                })
            })
            .collect::<Result<_, _>>()?;
        let productions = self
            .productions
            .iter()
            .map(|p| Production {
                head: p.head,
                body: p
                    .body
                    .iter()
                    .map(|s| match *s {
                        GSym::T(a) => GSym::T(map[a]),
                        n => n,
                    })
                    .collect(),
            })
            .collect();
        let mut g = Self::raw(alphabet.to_vec(), self.nonterminals.clone(), self.start, productions);
        g.is_pruned = self.is_pruned;
        Ok(g)
    }

    fn check_cnf(&self) -> bool {
        let start_in_body = self
            .productions
            .iter()
            .any(|p| p.body.contains(&GSym::N(self.start)));
        self.productions.iter().all(|p| match p.body.as_slice() {
            [GSym::T(_)] => true,
            [GSym::N(_), GSym::N(_)] => true,
            [] => p.head == self.start && !start_in_body,
            _ => false,
        })
    }

    /// Nonterminals that derive ε.
    pub fn nullable(&self) -> Vec<bool> {
        let mut null = vec![false; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if !null[p.head]
                    && p.body.iter().all(|s| matches!(*s, GSym::N(b) if null[b]))
                {
                    null[p.head] = true;
                    changed = true;
                }
            }
            if !changed {
                return null;
            }
        }
    }

    /// Nonterminals that derive at least one terminal word.
    pub fn productive(&self) -> Vec<bool> {
        let mut prod = vec![false; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if !prod[p.head]
                    && p.body.iter().all(|s| match *s {
                        GSym::T(_) => true,
                        GSym::N(b) => prod[b],
                    })
                {
                    prod[p.head] = true;
                    changed = true;
                }
            }
            if !changed {
                return prod;
            }
        }
    }

    /// Whether some terminal word, possibly ε, is derivable from the start.
    pub fn nonempty(&self) -> bool {
        self.productive()[self.start]
    }

    /// Whether ε is in the language.
    pub fn derives_epsilon(&self) -> bool {
        self.nullable()[self.start]
    }

    /// Keeps the nonterminals listed in `keep` (plus the start) and the
    /// productions that mention only kept nonterminals.
    fn restrict(&self, keep: &[bool]) -> Cfg {
        let mut map = vec![usize::MAX; self.nonterminals.len()];
        let mut names = Vec::new();
        for (i, name) in self.nonterminals.iter().enumerate() {
            if keep[i] || i == self.start {
                map[i] = names.len();
                names.push(name.clone());
            }
        }
        let productions = self
            .productions
            .iter()
            .filter(|p| {
                keep[p.head] && p.body.iter().all(|s| matches!(*s, GSym::T(_)) || matches!(*s, GSym::N(b) if keep[b]))
            })
            .map(|p| Production {
                head: map[p.head],
                body: p
                    .body
                    .iter()
                    .map(|s| match *s {
                        GSym::N(b) => GSym::N(map[b]),
                        t => t,
                    })
                    .collect(),
            })
            .collect();
        Self::raw(self.terminals.clone(), names, map[self.start], productions)
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.nonterminals[self.start])?;
        for p in &self.productions {
            let body: Vec<&str> = p
                .body
                .iter()
                .map(|s| match *s {
                    GSym::T(a) => self.terminals[a].as_str(),
                    GSym::N(b) => self.nonterminals[b].as_str(),
                })
                .collect();
            let body = if body.is_empty() { "ε".to_string() } else { body.join(" ") };
            writeln!(f, "{} -> {}", self.nonterminals[p.head], body)?;
        }
        Ok(())
    }
}

fn intern(table: &mut Vec<String>, name: &str) -> usize {
    match table.iter().position(|s| s == name) {
        Some(i) => i,
        None => {
            table.push(name.to_string());
            table.len() - 1
        }
    }
}

/// Hands out nonterminal names that do not clash with existing ones.
struct Names {
    used: HashSet<String>,
}

impl Names {
    fn of(g: &Cfg) -> Self {
        Names {
            used: g.nonterminals.iter().cloned().collect(),
        }
    }

    fn fresh(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 1;
        while self.used.contains(&name) {
            k += 1;
            name = format!("{base}#{k}");
        }
        self.used.insert(name.clone());
        name
    }
}

/// Removes nonterminals that derive no word or cannot be reached from the
/// start symbol. The language is unchanged; an empty language leaves only the
/// start symbol and no productions.
pub fn prune(cfg: &Cfg) -> Cfg {
    let productive = cfg.productive();
    let g = cfg.restrict(&productive);
    let mut reach = vec![false; g.nonterminals.len()];
    if productive[cfg.start] {
        reach[g.start] = true;
        let mut work = vec![g.start];
        while let Some(a) = work.pop() {
            for p in g.productions.iter().filter(|p| p.head == a) {
                for s in &p.body {
                    if let GSym::N(b) = *s {
                        if !reach[b] {
                            reach[b] = true;
                            work.push(b);
                        }
                    }
                }
            }
        }
    }
    let mut out = g.restrict(&reach);
    out.is_pruned = true;
    out
}

/// Whether the language is nonempty. ε counts as a word.
pub fn cfg_nonempty(cfg: &Cfg) -> bool {
    cfg.nonempty()
}

/// A grammar for `L(cfg) \ {ε}` without ε-rules.
pub fn eliminate_epsilon(cfg: &Cfg) -> Cfg {
    let null = cfg.nullable();
    let mut productions = Vec::new();
    for p in &cfg.productions {
        let slots: Vec<usize> = p
            .body
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(**s, GSym::N(b) if null[b]))
            .map(|(i, _)| i)
            .collect();
        // Every subset of nullable occurrences may vanish.
        for mask in 0u64..(1u64 << slots.len()) {
            let body: Vec<GSym> = p
                .body
                .iter()
                .enumerate()
                .filter(|(i, _)| match slots.iter().position(|s| s == i) {
                    Some(k) => mask & (1 << k) == 0,
                    None => true,
                })
                .map(|(_, s)| *s)
                .collect();
            if !body.is_empty() {
                productions.push(Production { head: p.head, body });
            }
        }
    }
    Cfg::raw(cfg.terminals.clone(), cfg.nonterminals.clone(), cfg.start, productions)
}

/// Replaces unit rules `A → B` by the non-unit rules of everything `A`
/// reaches through unit rules. The language is unchanged.
pub fn eliminate_units(cfg: &Cfg) -> Cfg {
    let n = cfg.nonterminals.len();
    let mut unit: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in &cfg.productions {
        if let [GSym::N(b)] = p.body.as_slice() {
            unit[p.head].push(*b);
        }
    }
    let mut productions = Vec::new();
    for a in 0..n {
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut work = vec![a];
        let mut closure = Vec::new();
        while let Some(b) = work.pop() {
            closure.push(b);
            for &c in &unit[b] {
                if !seen[c] {
                    seen[c] = true;
                    work.push(c);
                }
            }
        }
        closure.sort_unstable();
        for b in closure {
            for p in cfg.productions.iter().filter(|p| p.head == b) {
                if !matches!(p.body.as_slice(), [GSym::N(_)]) {
                    productions.push(Production {
                        head: a,
                        body: p.body.clone(),
                    });
                }
            }
        }
    }
    Cfg::raw(cfg.terminals.clone(), cfg.nonterminals.clone(), cfg.start, productions)
}

/// Chomsky normal form: a fresh start symbol, terminals isolated in long
/// bodies, bodies binarized, ε-rules and unit rules removed, then pruned.
/// Terminal indices and names are kept as they are.
pub fn to_cnf(cfg: &Cfg) -> Cfg {
    let mut names = Names::of(cfg);
    let mut nonterminals = cfg.nonterminals.clone();
    let mut productions: Vec<Production> = Vec::new();

    // START
    let start = nonterminals.len();
    nonterminals.push(names.fresh(&format!("{}0", cfg.nonterminals[cfg.start])));
    productions.push(Production {
        head: start,
        body: vec![GSym::N(cfg.start)],
    });

    // TERM
    let mut term_nt: HashMap<usize, usize> = HashMap::new();
    for p in &cfg.productions {
        let mut body = p.body.clone();
        if body.len() >= 2 {
            for s in body.iter_mut() {
                if let GSym::T(a) = *s {
                    let id = *term_nt.entry(a).or_insert_with(|| {
                        nonterminals.push(names.fresh(&format!("T_{}", cfg.terminals[a])));
                        nonterminals.len() - 1
                    });
                    *s = GSym::N(id);
                }
            }
        }
        productions.push(Production { head: p.head, body });
    }
    let mut term_rules: Vec<(usize, usize)> = term_nt.into_iter().collect();
    term_rules.sort_unstable();
    for (a, id) in term_rules {
        productions.push(Production {
            head: id,
            body: vec![GSym::T(a)],
        });
    }

    // BIN
    let mut binary = Vec::new();
    for p in productions {
        if p.body.len() <= 2 {
            binary.push(p);
            continue;
        }
        let base = nonterminals[p.head].clone();
        let mut head = p.head;
        let n = p.body.len();
        for i in 0..n - 2 {
            let next = nonterminals.len();
            nonterminals.push(names.fresh(&format!("{base}_{}", i + 1)));
            binary.push(Production {
                head,
                body: vec![p.body[i], GSym::N(next)],
            });
            head = next;
        }
        binary.push(Production {
            head,
            body: vec![p.body[n - 2], p.body[n - 1]],
        });
    }

    let staged = Cfg::raw(cfg.terminals.clone(), nonterminals, start, binary);

    // DEL: the fresh start never occurs in a body, so ε can be reinstated on
    // it alone.
    let had_epsilon = staged.derives_epsilon();
    let mut del = eliminate_epsilon(&staged);
    if had_epsilon {
        del.productions.push(Production {
            head: start,
            body: Vec::new(),
        });
    }

    // UNIT
    let unit = eliminate_units(&del);
    let mut out = prune(&unit);
    out.is_cnf = out.check_cnf();
    debug_assert!(out.is_cnf, "CNF conversion produced\n{out}");
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PumpKind {
    Pair,
    Left,
}

fn pump_grammar(cfg: &Cfg, a: usize, kind: PumpKind) -> Result<Cfg, ModelError> {
    if a >= cfg.nonterminals.len() {
        return Err(ModelError::Unknown {
            kind: "nonterminal",
            name: format!("#{a}"),
        });
    }
    let n = cfg.nonterminals.len();
    let mut names = Names::of(cfg);
    let mut nonterminals = cfg.nonterminals.clone();
    for name in &cfg.nonterminals {
        nonterminals.push(names.fresh(&format!("Z[{name}]")));
    }
    let start = nonterminals.len();
    nonterminals.push(names.fresh(&format!("Pump[{}]", cfg.nonterminals[a])));
    let z = |b: usize| n + b;

    let spine = |p: &Production, j: usize, c: usize| -> Vec<GSym> {
        let mut body: Vec<GSym> = p.body[..j].to_vec();
        body.push(GSym::N(z(c)));
        if kind == PumpKind::Pair {
            body.extend_from_slice(&p.body[j + 1..]);
        }
        body
    };

    let mut productions = cfg.productions.clone();
    for p in &cfg.productions {
        for (j, s) in p.body.iter().enumerate() {
            if let GSym::N(c) = *s {
                let body = spine(p, j, c);
                if p.head == a {
                    productions.push(Production {
                        head: start,
                        body: body.clone(),
                    });
                }
                productions.push(Production { head: z(p.head), body });
            }
        }
    }
    productions.push(Production {
        head: z(a),
        body: Vec::new(),
    });
    let g = Cfg::raw(cfg.terminals.clone(), nonterminals, start, productions);
    Ok(prune(&eliminate_units(&eliminate_epsilon(&g))))
}

/// Grammar for `{ u_L u_R ≠ ε : A ⇒⁺ u_L A u_R }`.
pub fn pump_grammar_pair(cfg: &Cfg, a: usize) -> Result<Cfg, ModelError> {
    pump_grammar(cfg, a, PumpKind::Pair)
}

/// Grammar for `{ u_L ≠ ε : A ⇒⁺ u_L A u_R for some u_R }`.
pub fn pump_grammar_left(cfg: &Cfg, a: usize) -> Result<Cfg, ModelError> {
    pump_grammar(cfg, a, PumpKind::Left)
}

/// Grammar for the finite-word language of `pda`: words with a run from an
/// initial state to an accepting state, any stack content allowed at the end.
///
/// Runs are split at the stack cells that are never popped again; the
/// nonterminal `R[q,X]` derives the rest of a run whose current never-popped
/// top cell holds `X` in state `q`.
pub fn pda_to_cfg(pda: &Pda) -> Result<Cfg, ModelError> {
    if pda.is_omega() {
        return Err(ModelError::WrongSemantics { expected: "finite-word" });
    }
    let sat = Saturation::build(pda, false);
    let mut nonterminals: Vec<String> = vec!["S".to_string()];
    let offset = 1;
    for nt in &sat.nts {
        nonterminals.push(match *nt {
            Nt::Summary { p, x, s, .. } => format!(
                "S[{},{},{}]",
                pda.state_name(p),
                pda.symbol_name(x),
                pda.state_name(s)
            ),
            Nt::Partial { t, i, r, .. } => format!("P[{t},{i},{}]", pda.state_name(r)),
        });
    }
    let heads = nonterminals.len();
    for v in 0..sat.num_heads {
        let q = sat.head_state(v);
        let top = match v % sat.width {
            0 => Top::Bottom,
            k => Top::Symbol(crate::model::SymbolId(k as u32 - 1)),
        };
        nonterminals.push(format!("R[{},{}]", pda.state_name(q), pda.format_top(top)));
    }
    let mut productions = Vec::new();
    for r in &sat.rules {
        let body = match r.body {
            Body::Letter(a) => vec![GSym::T(a.index())],
            Body::Pair(x, y) => vec![GSym::N(offset + x as usize), GSym::N(offset + y as usize)],
        };
        productions.push(Production {
            head: offset + r.head as usize,
            body,
        });
    }
    for e in &sat.edges {
        productions.push(Production {
            head: heads + e.from,
            body: vec![GSym::N(offset + e.label as usize), GSym::N(heads + e.to)],
        });
    }
    for v in 0..sat.num_heads {
        if pda.is_accepting(sat.head_state(v)) {
            productions.push(Production {
                head: heads + v,
                body: Vec::new(),
            });
        }
    }
    for &q in pda.initial() {
        productions.push(Production {
            head: 0,
            body: vec![GSym::N(heads + sat.head(q, Top::Bottom))],
        });
    }
    let g = Cfg::raw(pda.letters().to_vec(), nonterminals, 0, productions);
    Ok(prune(&g))
}

/// Terminals that occur in some production.
pub fn used_terminals(cfg: &Cfg) -> BTreeSet<usize> {
    cfg.productions
        .iter()
        .flat_map(|p| p.body.iter())
        .filter_map(|s| match *s {
            GSym::T(a) => Some(a),
            _ => None,
        })
        .collect()
}
