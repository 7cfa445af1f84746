//! Pushdown automata over finite and infinite words, their runs, stack
//! pricings, letter costs, thresholds and decisions.
//!
//! Stacks are stored bottom-to-top without the bottom marker: the last
//! element of a stack vector is its top, and an empty vector is the bare
//! bottom marker. Push strings use the same orientation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

/// Exact rational number used for every cost and threshold.
pub type Rational = num_rational::BigRational;

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Index of a state in [`Pda::states`].
    StateId
);
id_type!(
    /// Index of an input letter in [`Pda::letters`].
    LetterId
);
id_type!(
    /// Index of a stack symbol in [`Pda::symbols`]. The bottom marker has no id.
    SymbolId
);

/// What a transition expects on top of the stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Top {
    /// The stack is empty; only the bottom marker is visible.
    Bottom,
    Symbol(SymbolId),
}

impl Top {
    pub fn symbol(self) -> Option<SymbolId> {
        match self {
            Top::Bottom => None,
            Top::Symbol(s) => Some(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub letter: LetterId,
    pub top: Top,
    pub to: StateId,
    /// Replacement for the top symbol, bottom-to-top. For `Top::Bottom` the
    /// marker stays in place and `push` lands above it.
    pub push: Vec<SymbolId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("transition {index} is not applicable: {reason}")]
    Inapplicable { index: usize, reason: String },
    #[error("transition is not part of the automaton")]
    ForeignTransition { index: usize },
    #[error("state {state} is not initial")]
    NotInitial { state: String },
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("stack symbol {symbol} has no price")]
    PricingMismatch { symbol: String },
    #[error("letter {letter} has no cost")]
    MissingLetterCost { letter: String },
    #[error("prefix length {k} out of range for a run of {len} configurations")]
    PrefixRange { k: usize, len: usize },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("no word to average: {0}")]
    EmptyLanguage(String),
    #[error("expected {expected} semantics")]
    WrongSemantics { expected: &'static str },
    #[error("{0}")]
    Invalid(String),
}

/// A pushdown automaton. With `omega` set it reads infinite words and accepts
/// by the Büchi condition; otherwise it accepts finite words ending in an
/// accepting state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pda {
    states: Vec<String>,
    letters: Vec<String>,
    symbols: Vec<String>,
    initial: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
    transitions: Vec<Transition>,
    omega: bool,
}

impl Pda {
    /// Assembles an automaton from raw parts without any checking. Use
    /// [`validate`] to inspect the result.
    pub fn from_parts(
        states: Vec<String>,
        letters: Vec<String>,
        symbols: Vec<String>,
        initial: BTreeSet<StateId>,
        accepting: BTreeSet<StateId>,
        transitions: Vec<Transition>,
        omega: bool,
    ) -> Self {
        Pda {
            states,
            letters,
            symbols,
            initial,
            accepting,
            transitions,
            omega,
        }
    }

    pub fn builder(omega: bool) -> PdaBuilder {
        PdaBuilder::new(omega)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }
    pub fn letters(&self) -> &[String] {
        &self.letters
    }
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }
    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }
    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }
    pub fn is_omega(&self) -> bool {
        self.omega
    }
    pub fn num_states(&self) -> usize {
        self.states.len()
    }
    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.contains(&q)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u32))
    }
    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|s| s == name).map(|i| LetterId(i as u32))
    }
    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s == name).map(|i| SymbolId(i as u32))
    }
    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }
    pub fn letter_name(&self, a: LetterId) -> &str {
        &self.letters[a.index()]
    }
    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.symbols[s.index()]
    }

    /// The same automaton with the other acceptance semantics.
    pub fn with_omega(mut self, omega: bool) -> Self {
        self.omega = omega;
        self
    }

    /// The same automaton with a different accepting set.
    pub fn with_accepting(mut self, accepting: BTreeSet<StateId>) -> Self {
        self.accepting = accepting;
        self
    }

    /// True when no transition ever places a symbol on the stack, so every
    /// run keeps the stack empty.
    pub fn is_stackless(&self) -> bool {
        self.transitions.iter().all(|t| t.push.is_empty())
    }

    /// Initial configuration of the lowest-numbered initial state.
    pub fn initial_configuration(&self) -> Result<Configuration, ModelError> {
        let q = *self.initial.iter().next().ok_or(ModelError::NoInitialState)?;
        Ok(Configuration::new(q))
    }

    pub fn format_top(&self, top: Top) -> String {
        match top {
            Top::Bottom => "⊥".to_string(),
            Top::Symbol(s) => self.symbol_name(s).to_string(),
        }
    }

    pub fn format_transition(&self, t: &Transition) -> String {
        let push = if t.push.is_empty() {
            "ε".to_string()
        } else {
            t.push.iter().map(|&s| self.symbol_name(s)).collect::<Vec<_>>().join("")
        };
        format!(
            "δ({}, {}, {}, {}, {})",
            self.state_name(t.from),
            self.letter_name(t.letter),
            self.format_top(t.top),
            self.state_name(t.to),
            push
        )
    }
}

/// Name-based construction. Names are interned on first use.
#[derive(Clone, Debug, Default)]
pub struct PdaBuilder {
    states: Interner,
    letters: Interner,
    symbols: Interner,
    initial: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
    transitions: Vec<Transition>,
    omega: bool,
}

#[derive(Clone, Debug, Default)]
struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.ids.get(name) {
            return i;
        }
        let i = self.names.len() as u32;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), i);
        i
    }
}

impl PdaBuilder {
    pub fn new(omega: bool) -> Self {
        PdaBuilder {
            omega,
            ..Default::default()
        }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        StateId(self.states.intern(name))
    }
    pub fn letter(&mut self, name: &str) -> LetterId {
        LetterId(self.letters.intern(name))
    }
    pub fn symbol(&mut self, name: &str) -> SymbolId {
        SymbolId(self.symbols.intern(name))
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.initial.insert(q);
        self
    }

    pub fn accepting(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.accepting.insert(q);
        self
    }

    /// Adds `δ(from, letter, top, to, push)`; `top = None` stands for the
    /// bottom marker and `push` is listed bottom-to-top.
    pub fn transition(
        &mut self,
        from: &str,
        letter: &str,
        top: Option<&str>,
        to: &str,
        push: &[&str],
    ) -> &mut Self {
        let t = Transition {
            from: self.state(from),
            letter: self.letter(letter),
            top: match top {
                None => Top::Bottom,
                Some(s) => Top::Symbol(self.symbol(s)),
            },
            to: self.state(to),
            push: push.iter().map(|s| self.symbol(s)).collect(),
        };
        self.transitions.push(t);
        self
    }

    pub fn push_transition(&mut self, t: Transition) -> &mut Self {
        self.transitions.push(t);
        self
    }

    pub fn build(&self) -> Pda {
        Pda {
            states: self.states.names.clone(),
            letters: self.letters.names.clone(),
            symbols: self.symbols.names.clone(),
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
            transitions: self.transitions.clone(),
            omega: self.omega,
        }
    }
}

/// A configuration `(q, a, u)`: state, stack above the bottom marker, and the
/// letter read by the step that produced it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<SymbolId>,
    pub last_letter: Option<LetterId>,
}

impl Configuration {
    pub fn new(state: StateId) -> Self {
        Configuration {
            state,
            stack: Vec::new(),
            last_letter: None,
        }
    }

    pub fn top(&self) -> Top {
        match self.stack.last() {
            Some(&s) => Top::Symbol(s),
            None => Top::Bottom,
        }
    }
}

/// Applies one transition.
pub fn step(config: &Configuration, t: &Transition) -> Result<Configuration, ModelError> {
    if t.from != config.state {
        return Err(ModelError::Inapplicable {
            index: 0,
            reason: format!("expects state {}, found {}", t.from.0, config.state.0),
        });
    }
    if t.top != config.top() {
        return Err(ModelError::Inapplicable {
            index: 0,
            reason: "top of stack does not match".to_string(),
        });
    }
    let mut stack = config.stack.clone();
    if t.top != Top::Bottom {
        stack.pop();
    }
    stack.extend_from_slice(&t.push);
    Ok(Configuration {
        state: t.to,
        stack,
        last_letter: Some(t.letter),
    })
}

/// Replays a transition sequence from the initial configuration of its first
/// source state, returning every configuration along the way.
pub fn simulate(pda: &Pda, ts: &[Transition]) -> Result<Vec<Configuration>, ModelError> {
    let start = match ts.first() {
        Some(t) => {
            if !pda.initial.contains(&t.from) {
                return Err(ModelError::NotInitial {
                    state: pda.state_name(t.from).to_string(),
                });
            }
            Configuration::new(t.from)
        }
        None => pda.initial_configuration()?,
    };
    let mut run = Vec::with_capacity(ts.len() + 1);
    run.push(start);
    for (index, t) in ts.iter().enumerate() {
        if !pda.transitions.contains(t) {
            return Err(ModelError::ForeignTransition { index });
        }
        let next = step(run.last().unwrap(), t).map_err(|e| match e {
            ModelError::Inapplicable { reason, .. } => ModelError::Inapplicable { index, reason },
            other => other,
        })?;
        run.push(next);
    }
    Ok(run)
}

/// Cost of each stack symbol. The bottom marker is free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackPricing {
    costs: Vec<Option<u64>>,
}

impl StackPricing {
    pub fn new(costs: Vec<Option<u64>>) -> Self {
        StackPricing { costs }
    }

    /// A pricing that covers every symbol of `pda`.
    pub fn total(costs: Vec<u64>) -> Self {
        StackPricing {
            costs: costs.into_iter().map(Some).collect(),
        }
    }

    pub fn zero(pda: &Pda) -> Self {
        Self::total(vec![0; pda.symbols().len()])
    }

    pub fn from_names(pda: &Pda, prices: &[(&str, u64)]) -> Result<Self, ModelError> {
        let mut costs = vec![None; pda.symbols().len()];
        for &(name, c) in prices {
            let s = pda.symbol_id(name).ok_or_else(|| ModelError::Unknown {
                kind: "stack symbol",
                name: name.to_string(),
            })?;
            costs[s.index()] = Some(c);
        }
        Ok(StackPricing { costs })
    }

    pub fn get(&self, s: SymbolId) -> Option<u64> {
        self.costs.get(s.index()).copied().flatten()
    }

    pub fn costs(&self) -> &[Option<u64>] {
        &self.costs
    }

    /// Largest price, 0 for an empty pricing.
    pub fn max_cost(&self) -> u64 {
        self.costs.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Checks that every symbol of `pda` has a price.
    pub fn covers(&self, pda: &Pda) -> Result<(), ModelError> {
        for (i, name) in pda.symbols().iter().enumerate() {
            if self.get(SymbolId(i as u32)).is_none() {
                return Err(ModelError::PricingMismatch {
                    symbol: name.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn cost_of(&self, symbols: &[SymbolId]) -> Result<u64, ModelError> {
        symbols.iter().try_fold(0u64, |acc, &s| {
            let c = self.get(s).ok_or_else(|| ModelError::PricingMismatch {
                symbol: format!("#{}", s.0),
            })?;
            Ok(acc + c)
        })
    }

    pub fn scaled(&self, k: u64) -> Self {
        StackPricing {
            costs: self.costs.iter().map(|c| c.map(|c| c * k)).collect(),
        }
    }
}

/// Stack cost of a configuration: the sum of its symbol prices.
pub fn stack_cost(c: &StackPricing, config: &Configuration) -> Result<u64, ModelError> {
    c.cost_of(&config.stack)
}

/// Average stack cost over the first `k` configurations of a run.
pub fn asc_prefix(run: &[Configuration], c: &StackPricing, k: usize) -> Result<Rational, ModelError> {
    if k == 0 || k > run.len() {
        return Err(ModelError::PrefixRange { k, len: run.len() });
    }
    let mut total = 0u64;
    for config in &run[..k] {
        total += stack_cost(c, config)?;
    }
    Ok(Rational::new(BigInt::from(total), BigInt::from(k)))
}

/// Cost of each input letter, keyed by letter name so that it applies to
/// grammar terminals and automaton letters alike.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LetterCost {
    costs: BTreeMap<String, Rational>,
}

impl LetterCost {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, Rational)>) -> Self {
        LetterCost {
            costs: pairs
                .into_iter()
                .map(|(k, v)| (k.as_ref().to_string(), v))
                .collect(),
        }
    }

    pub fn from_integers(pairs: &[(&str, i64)]) -> Self {
        Self::from_pairs(pairs.iter().map(|&(k, v)| (k, Rational::from_integer(v.into()))))
    }

    pub fn set(&mut self, letter: &str, cost: Rational) {
        self.costs.insert(letter.to_string(), cost);
    }

    pub fn get(&self, letter: &str) -> Option<&Rational> {
        self.costs.get(letter)
    }

    pub fn require(&self, letter: &str) -> Result<&Rational, ModelError> {
        self.get(letter).ok_or_else(|| ModelError::MissingLetterCost {
            letter: letter.to_string(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.costs.iter()
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    /// Cost of a word given as letter names.
    pub fn word_cost<S: AsRef<str>>(&self, word: &[S]) -> Result<Rational, ModelError> {
        word.iter().try_fold(Rational::zero(), |acc, a| Ok(acc + self.require(a.as_ref())?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `<`
    Strict,
    /// `≤`
    NonStrict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Threshold {
    pub relation: Relation,
    pub bound: Rational,
}

impl Threshold {
    pub fn new(relation: Relation, bound: Rational) -> Self {
        Threshold { relation, bound }
    }

    pub fn lt(bound: Rational) -> Self {
        Self::new(Relation::Strict, bound)
    }

    pub fn le(bound: Rational) -> Self {
        Self::new(Relation::NonStrict, bound)
    }

    pub fn lt_int(bound: i64) -> Self {
        Self::lt(Rational::from_integer(bound.into()))
    }

    pub fn le_int(bound: i64) -> Self {
        Self::le(Rational::from_integer(bound.into()))
    }

    pub fn holds(&self, value: &Rational) -> bool {
        match self.relation {
            Relation::Strict => value < &self.bound,
            Relation::NonStrict => value <= &self.bound,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.relation == Relation::Strict
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Strict => "<",
            Relation::NonStrict => "<=",
        };
        write!(f, "{} {}", op, self.bound)
    }
}

/// Limit of prefix averages: liminf or limsup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Inf,
    Sup,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Inf => "inf",
            Mode::Sup => "sup",
        })
    }
}

/// Which decision problem produced a [`Decision`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    Iasc,
    Sasc,
    AvgLc,
    AvgInfLc,
    AvgSupLc,
    WpsGame,
    Art,
    Oracle,
}

impl Problem {
    pub fn tag(self) -> &'static str {
        match self {
            Problem::Iasc => "iasc",
            Problem::Sasc => "sasc",
            Problem::AvgLc => "avglc",
            Problem::AvgInfLc => "avginf-lc",
            Problem::AvgSupLc => "avgsup-lc",
            Problem::WpsGame => "wps-game",
            Problem::Art => "art",
            Problem::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: bool,
    pub problem: Problem,
    /// Echo of the inputs that determined the answer.
    pub inputs: Vec<(String, String)>,
    /// Lasso description when an oracle produced the answer.
    pub witness: Option<String>,
}

impl Decision {
    pub fn new(problem: Problem, answer: bool) -> Self {
        Decision {
            answer,
            problem,
            inputs: Vec::new(),
            witness: None,
        }
    }

    pub fn with_input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.push((key.to_string(), value.to_string()));
        self
    }
}

/// A weighted pushdown system: a singleton-alphabet automaton whose states
/// are all accepting, integer transition weights, and a Büchi set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wps {
    pda: Pda,
    weights: Vec<BigInt>,
    buchi: BTreeSet<StateId>,
}

impl Wps {
    pub fn new(pda: Pda, weights: Vec<BigInt>, buchi: BTreeSet<StateId>) -> Result<Self, ModelError> {
        if pda.letters().len() != 1 {
            return Err(ModelError::Invalid(format!(
                "a weighted pushdown system reads a single letter, found {}",
                pda.letters().len()
            )));
        }
        if weights.len() != pda.transitions().len() {
            return Err(ModelError::Invalid(format!(
                "{} weights for {} transitions",
                weights.len(),
                pda.transitions().len()
            )));
        }
        if let Some(q) = buchi.iter().find(|q| q.index() >= pda.num_states()) {
            return Err(ModelError::Invalid(format!("Büchi state #{} is undeclared", q.0)));
        }
        let all: BTreeSet<StateId> = (0..pda.num_states() as u32).map(StateId).collect();
        Ok(Wps {
            pda: pda.with_accepting(all),
            weights,
            buchi,
        })
    }

    pub fn pda(&self) -> &Pda {
        &self.pda
    }
    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }
    pub fn buchi(&self) -> &BTreeSet<StateId> {
        &self.buchi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message,
        }
    }
}

/// Structural checks. Unreachable accepting states are reported as warnings;
/// everything else is an error.
pub fn validate(pda: &Pda) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let nq = pda.states.len();
    let na = pda.letters.len();
    let ns = pda.symbols.len();
    if pda.initial.is_empty() {
        out.push(Diagnostic::error("no initial state".to_string()));
    }
    for q in pda.initial.iter().chain(pda.accepting.iter()) {
        if q.index() >= nq {
            out.push(Diagnostic::error(format!("undeclared state #{}", q.0)));
        }
    }
    for (i, t) in pda.transitions.iter().enumerate() {
        if t.from.index() >= nq || t.to.index() >= nq {
            out.push(Diagnostic::error(format!("transition {i}: undeclared state")));
        }
        if t.letter.index() >= na {
            out.push(Diagnostic::error(format!("transition {i}: undeclared letter")));
        }
        if let Top::Symbol(s) = t.top {
            if s.index() >= ns {
                out.push(Diagnostic::error(format!(
                    "transition {i}: unknown stack symbol #{}",
                    s.0
                )));
            }
        }
        if let Some(s) = t.push.iter().find(|s| s.index() >= ns) {
            // An out-of-range id in a push string is how a bottom marker
            // sneaks in through raw construction.
            out.push(Diagnostic::error(format!(
                "transition {i}: pushes unknown stack symbol #{}",
                s.0
            )));
        }
    }
    if out.iter().any(|d| d.severity == Severity::Error) {
        return out;
    }
    // Control-flow reachability over-approximates configuration reachability.
    let mut seen = vec![false; nq];
    let mut work: Vec<StateId> = pda.initial.iter().copied().collect();
    for q in &work {
        seen[q.index()] = true;
    }
    while let Some(q) = work.pop() {
        for t in pda.transitions.iter().filter(|t| t.from == q) {
            if !seen[t.to.index()] {
                seen[t.to.index()] = true;
                work.push(t.to);
            }
        }
    }
    for q in &pda.accepting {
        if !seen[q.index()] {
            out.push(Diagnostic {
                severity: Severity::Warning,
                message: format!("accepting state {} is unreachable", pda.state_name(*q)),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::e1;

    fn tr(pda: &Pda, from: &str, top: Option<&str>, to: &str, push: &[&str]) -> Transition {
        let t = Transition {
            from: pda.state_id(from).unwrap(),
            letter: pda.letter_id("a").unwrap(),
            top: top.map_or(Top::Bottom, |s| Top::Symbol(pda.symbol_id(s).unwrap())),
            to: pda.state_id(to).unwrap(),
            push: push.iter().map(|s| pda.symbol_id(s).unwrap()).collect(),
        };
        assert!(pda.transitions().contains(&t));
        t
    }

    #[test]
    fn step_from_bottom_keeps_marker() {
        let (a, _) = e1();
        let c0 = Configuration::new(a.state_id("A").unwrap());
        let c1 = step(&c0, &tr(&a, "A", None, "U", &["α"])).unwrap();
        assert_eq!(a.state_name(c1.state), "U");
        assert_eq!(c1.stack, vec![a.symbol_id("α").unwrap()]);
        assert_eq!(c1.last_letter, a.letter_id("a"));
        let c2 = step(&c1, &tr(&a, "U", Some("α"), "U", &["α", "α"])).unwrap();
        assert_eq!(c2.stack.len(), 2);
    }

    #[test]
    fn step_rejects_wrong_top() {
        let (a, _) = e1();
        let c0 = Configuration::new(a.state_id("U").unwrap());
        let err = step(&c0, &tr(&a, "U", Some("α"), "U", &["α", "α"])).unwrap_err();
        assert!(matches!(err, ModelError::Inapplicable { .. }));
    }

    #[test]
    fn self_replacement_keeps_stack() {
        let t = Transition {
            from: StateId(0),
            letter: LetterId(0),
            top: Top::Symbol(SymbolId(1)),
            to: StateId(0),
            push: vec![SymbolId(1)],
        };
        let c = Configuration {
            state: StateId(0),
            stack: vec![SymbolId(0), SymbolId(1)],
            last_letter: None,
        };
        assert_eq!(step(&c, &t).unwrap().stack, c.stack);
    }

    #[test]
    fn simulate_e1_prefix() {
        let (a, c) = e1();
        let ts = [
            tr(&a, "A", None, "U", &["α"]),
            tr(&a, "U", Some("α"), "B", &["β"]),
            tr(&a, "B", Some("β"), "A", &[]),
        ];
        let run = simulate(&a, &ts).unwrap();
        let names: Vec<_> = run.iter().map(|k| a.state_name(k.state)).collect();
        assert_eq!(names, ["A", "U", "B", "A"]);
        let costs: Vec<u64> = run.iter().map(|k| stack_cost(&c, k).unwrap()).collect();
        assert_eq!(costs, [0, 0, 3, 0]);
        assert_eq!(asc_prefix(&run, &c, 3).unwrap(), Rational::from_integer(1.into()));
        assert!(matches!(
            asc_prefix(&run, &c, 0),
            Err(ModelError::PrefixRange { .. })
        ));
        assert!(asc_prefix(&run, &c, 5).is_err());
    }

    #[test]
    fn simulate_reports_position() {
        let (a, _) = e1();
        let ts = [
            tr(&a, "A", None, "U", &["α"]),
            tr(&a, "B", Some("β"), "A", &[]),
        ];
        match simulate(&a, &ts) {
            Err(ModelError::Inapplicable { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_simulation_is_initial() {
        let (a, _) = e1();
        let run = simulate(&a, &[]).unwrap();
        assert_eq!(run, vec![Configuration::new(a.state_id("A").unwrap())]);
    }

    #[test]
    fn stack_cost_examples() {
        let (a, c) = e1();
        let al = a.symbol_id("α").unwrap();
        let be = a.symbol_id("β").unwrap();
        let k = Configuration {
            state: StateId(0),
            stack: vec![al, al, be],
            last_letter: None,
        };
        assert_eq!(stack_cost(&c, &k).unwrap(), 3);
        assert_eq!(stack_cost(&c, &Configuration::new(StateId(0))).unwrap(), 0);
        let partial = StackPricing::new(vec![Some(0), None]);
        assert!(matches!(
            stack_cost(&partial, &k),
            Err(ModelError::PricingMismatch { .. })
        ));
    }

    #[test]
    fn validate_e1_clean() {
        let (a, _) = e1();
        assert!(validate(&a).is_empty());
    }

    #[test]
    fn validate_reports_problems() {
        let (a, _) = e1();
        let no_init = Pda::from_parts(
            a.states().to_vec(),
            a.letters().to_vec(),
            a.symbols().to_vec(),
            BTreeSet::new(),
            a.accepting().clone(),
            a.transitions().to_vec(),
            true,
        );
        let d = validate(&no_init);
        assert!(d.iter().any(|d| d.message == "no initial state"));

        let mut ts = a.transitions().to_vec();
        ts[1].top = Top::Symbol(SymbolId(9));
        let bad = Pda::from_parts(
            a.states().to_vec(),
            a.letters().to_vec(),
            a.symbols().to_vec(),
            a.initial().clone(),
            a.accepting().clone(),
            ts,
            true,
        );
        assert!(validate(&bad)
            .iter()
            .any(|d| d.severity == Severity::Error && d.message.contains("unknown stack symbol")));
    }

    #[test]
    fn validate_warns_on_unreachable_accepting() {
        let mut b = Pda::builder(true);
        b.initial("p").accepting("z");
        b.transition("p", "a", None, "p", &[]);
        b.state("z");
        let d = validate(&b.build());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
    }
}
