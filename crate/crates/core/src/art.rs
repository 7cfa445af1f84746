//! Average response time of first-come-first-served client-server systems.
//!
//! The server is a finite control that can test whether the number of
//! pending requests is zero. Pending requests become a unary stack of `P`s
//! priced 1, so the stack cost at a position is the number of pending
//! requests there. Summed up to the `n`-th grant, pending counts equal the
//! total waiting time of the first `n` requests. Adding `λ` to the cost of
//! every position that is not a grant turns "average waiting time per request
//! `⋈ λ`" into "average cost per position `⋈ λ`", which the average stack
//! cost machinery decides.

use std::fmt;

use num_traits::{Signed, ToPrimitive};

use crate::asc::meta_automaton;
use crate::model::{Decision, LetterCost, ModelError, Mode, Pda, PdaBuilder, Problem, Rational, StackPricing, Threshold};
use crate::omega::OmegaAnalysis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `r`
    Request,
    /// `g`
    Grant,
    /// `#`
    Null,
}

impl Label {
    pub fn letter(self) -> &'static str {
        match self {
            Label::Request => "r",
            Label::Grant => "g",
            Label::Null => "#",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "r" => Some(Label::Request),
            "g" => Some(Label::Grant),
            "#" => Some(Label::Null),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Test on the number of pending requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Guard {
    Any,
    Zero,
    NonZero,
}

impl Guard {
    pub fn keyword(self) -> &'static str {
        match self {
            Guard::Any => "any",
            Guard::Zero => "zero",
            Guard::NonZero => "nonzero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "any" => Some(Guard::Any),
            "zero" => Some(Guard::Zero),
            "nonzero" => Some(Guard::NonZero),
            _ => None,
        }
    }

    fn admits(self, pending: u64) -> bool {
        match self {
            Guard::Any => true,
            Guard::Zero => pending == 0,
            Guard::NonZero => pending > 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsTransition {
    pub from: String,
    pub label: Label,
    pub guard: Guard,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientServerSpec {
    pub initial: String,
    pub transitions: Vec<CsTransition>,
}

impl ClientServerSpec {
    pub fn new(initial: &str) -> Self {
        ClientServerSpec {
            initial: initial.to_string(),
            transitions: Vec::new(),
        }
    }

    pub fn add(&mut self, from: &str, label: Label, guard: Guard, to: &str) -> &mut Self {
        self.transitions.push(CsTransition {
            from: from.to_string(),
            label,
            guard,
            to: to.to_string(),
        });
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for t in &self.transitions {
            if t.label == Label::Grant && t.guard != Guard::NonZero {
                return Err(ModelError::Invalid(format!(
                    "grant from {} to {} must be guarded by a nonzero test",
                    t.from, t.to
                )));
            }
        }
        Ok(())
    }

    /// Transitions enabled in `state` with `pending` open requests.
    pub fn enabled<'a>(&'a self, state: &'a str, pending: u64) -> impl Iterator<Item = &'a CsTransition> + 'a {
        self.transitions
            .iter()
            .filter(move |t| t.from == state && t.guard.admits(pending))
    }
}

/// Fairness monitor phase: waiting for a request, waiting for a grant, or
/// having just seen a grant that answered an observed request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    WaitR,
    WaitG,
    Seen,
}

impl Phase {
    fn name(self) -> &'static str {
        match self {
            Phase::WaitR => "R",
            Phase::WaitG => "G",
            Phase::Seen => "S",
        }
    }

    fn next(self, l: Label) -> Phase {
        match (self, l) {
            (Phase::WaitG, Label::Grant) => Phase::Seen,
            (Phase::WaitG, _) => Phase::WaitG,
            (_, Label::Request) => Phase::WaitG,
            _ => Phase::WaitR,
        }
    }
}

/// The ω-automaton of a spec: pending requests on a stack of `P`s priced 1,
/// and a monitor that accepts exactly the runs with infinitely many requests
/// and infinitely many grants.
pub fn build_client_server(spec: &ClientServerSpec) -> Result<(Pda, StackPricing), ModelError> {
    spec.validate()?;
    let mut b = PdaBuilder::new(true);
    for l in [Label::Request, Label::Grant, Label::Null] {
        b.letter(l.letter());
    }
    b.symbol("P");
    let st = |s: &str, p: Phase| format!("{s}/{}", p.name());
    let phases = [Phase::WaitR, Phase::WaitG, Phase::Seen];
    b.initial(&st(&spec.initial, Phase::WaitR));
    for t in &spec.transitions {
        for p in phases {
            let from = st(&t.from, p);
            let to = st(&t.to, p.next(t.label));
            let letter = t.label.letter();
            let zero = matches!(t.guard, Guard::Any | Guard::Zero);
            let nonzero = matches!(t.guard, Guard::Any | Guard::NonZero);
            match t.label {
                Label::Request => {
                    if zero {
                        b.transition(&from, letter, None, &to, &["P"]);
                    }
                    if nonzero {
                        b.transition(&from, letter, Some("P"), &to, &["P", "P"]);
                    }
                }
                Label::Grant => {
                    b.transition(&from, letter, Some("P"), &to, &[]);
                }
                Label::Null => {
                    if zero {
                        b.transition(&from, letter, None, &to, &[]);
                    }
                    if nonzero {
                        b.transition(&from, letter, Some("P"), &to, &["P"]);
                    }
                }
            }
        }
    }
    let mut states: Vec<String> = Vec::new();
    for t in &spec.transitions {
        for s in [&t.from, &t.to] {
            if !states.contains(s) {
                states.push(s.clone());
            }
        }
    }
    for s in &states {
        for p in phases {
            b.state(&st(s, p));
        }
        b.accepting(&st(s, Phase::Seen));
    }
    let pda = b.build();
    let pricing = StackPricing::from_names(&pda, &[("P", 1)])?;
    Ok((pda, pricing))
}

/// Stack cost bound for the response-time reduction. It is the average stack
/// cost bound for the automaton extended with one extra symbol priced
/// `⌈λ⌉ + 1` and a copy of every transition, which is how the shifted
/// position costs would be realised as a pricing.
pub fn art_bound(a: &Pda, lambda: &Rational) -> Result<u64, ModelError> {
    let ceil = if lambda.is_positive() {
        lambda.ceil().to_integer().to_u64()
    } else {
        Some(0)
    };
    let too_large = || ModelError::Invalid("response-time bound is too large".into());
    let ceil = ceil.ok_or_else(too_large)?;
    let maxc = (ceil + 1).max(1);
    let n = maxc
        .checked_mul(3 * a.num_states() as u64)
        .and_then(|v| v.checked_mul(a.symbols().len() as u64 + 1))
        .and_then(|v| v.checked_mul(2 * a.transitions().len() as u64))
        .and_then(|v| v.checked_add(ceil))
        .ok_or_else(too_large)?;
    Ok(n)
}

/// Is there a computation with infinitely many requests and grants whose
/// liminf average response time satisfies the threshold?
pub fn decide_art(spec: &ClientServerSpec, th: &Threshold) -> Result<Decision, ModelError> {
    let (a, c) = build_client_server(spec)?;
    if th.bound.is_negative() {
        return Ok(Decision::new(Problem::Art, false).with_input("threshold", th));
    }
    let bound = art_bound(&a, &th.bound)?;
    let meta = meta_automaton(&a, &c, bound)?;
    let mut lc = LetterCost::new();
    for l in &meta.letters {
        let t = &a.transitions()[l.transition];
        let mut cost = Rational::from_integer(l.cost.into());
        if a.letter_name(t.letter) != Label::Grant.letter() {
            cost += &th.bound;
        }
        lc.set(&l.name(), cost);
    }
    let answer = OmegaAnalysis::new(&meta.pda)?.decide(&lc, th, Mode::Inf)?;
    Ok(Decision::new(Problem::Art, answer)
        .with_input("threshold", th)
        .with_input("bound", bound))
}

/// Pending-request count after each position of a trace.
pub fn pending_counts(trace: &[Label]) -> Option<Vec<u64>> {
    let mut pending = 0u64;
    let mut out = Vec::with_capacity(trace.len());
    for &l in trace {
        match l {
            Label::Request => pending += 1,
            Label::Grant => pending = pending.checked_sub(1)?,
            Label::Null => {}
        }
        out.push(pending);
    }
    Some(out)
}

/// Response time of each granted request under first-come-first-served
/// service, in grant order. Positions are counted from 1.
pub fn response_times(trace: &[Label]) -> Option<Vec<u64>> {
    let mut queue = std::collections::VecDeque::new();
    let mut out = Vec::new();
    for (i, &l) in trace.iter().enumerate() {
        let pos = i as u64 + 1;
        match l {
            Label::Request => queue.push_back(pos),
            Label::Grant => out.push(pos - queue.pop_front()?),
            Label::Null => {}
        }
    }
    Some(out)
}

/// Shifted position costs: the pending count, plus `λ` at non-grant positions.
pub fn shifted_position_costs(trace: &[Label], lambda: &Rational) -> Option<Vec<Rational>> {
    let counts = pending_counts(trace)?;
    Some(
        trace
            .iter()
            .zip(counts)
            .map(|(&l, c)| {
                let c = Rational::from_integer(c.into());
                if l == Label::Grant {
                    c
                } else {
                    c + lambda
                }
            })
            .collect(),
    )
}

/// Checks a trace step by step against a spec from its initial state.
pub fn is_trace(spec: &ClientServerSpec, trace: &[Label]) -> bool {
    let mut states = vec![spec.initial.clone()];
    let mut pending = 0u64;
    for &l in trace {
        let next: Vec<String> = states
            .iter()
            .flat_map(|s| spec.enabled(s, pending).filter(|t| t.label == l).map(|t| t.to.clone()))
            .collect();
        if next.is_empty() {
            return false;
        }
        states = next;
        states.sort();
        states.dedup();
        pending = match l {
            Label::Request => pending + 1,
            Label::Grant => pending - 1,
            Label::Null => pending,
        };
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simulate, stack_cost, Transition};
    use crate::samples::{batch_grant, immediate_grant, lazy_grant, never_grant};

    fn trace(s: &str) -> Vec<Label> {
        s.chars().map(|c| Label::parse(&c.to_string()).unwrap()).collect()
    }

    #[test]
    fn immediate_grant_heights() {
        let (a, c) = build_client_server(&immediate_grant()).unwrap();
        // Follow r, g, r, g from the initial state.
        let mut config = a.initial_configuration().unwrap();
        let mut heights = vec![0];
        let mut ts: Vec<Transition> = Vec::new();
        for l in trace("rgrg") {
            let t = a
                .transitions()
                .iter()
                .find(|t| t.from == config.state && a.letter_name(t.letter) == l.letter() && t.top == config.top())
                .unwrap()
                .clone();
            config = crate::model::step(&config, &t).unwrap();
            heights.push(stack_cost(&c, &config).unwrap());
            ts.push(t);
        }
        assert_eq!(heights, [0, 1, 0, 1, 0]);
        assert!(simulate(&a, &ts).is_ok());
    }

    #[test]
    fn grants_need_nonzero_guard() {
        let mut s = ClientServerSpec::new("s");
        s.add("s", Label::Grant, Guard::Any, "s");
        assert!(build_client_server(&s).is_err());
    }

    #[test]
    fn fcfs_bookkeeping() {
        let t = trace("rrgg");
        assert_eq!(pending_counts(&t).unwrap(), [1, 2, 1, 0]);
        assert_eq!(response_times(&t).unwrap(), [2, 2]);
        assert_eq!(response_times(&trace("g")), None);
        assert!(is_trace(&batch_grant(), &trace("rrggrrgg")));
        assert!(!is_trace(&batch_grant(), &trace("rg")));
    }

    #[test]
    fn decisions() {
        let cases = [(immediate_grant(), 1), (batch_grant(), 2), (lazy_grant(), 1)];
        for (spec, lam) in cases {
            assert!(decide_art(&spec, &Threshold::le_int(lam)).unwrap().answer);
            assert!(!decide_art(&spec, &Threshold::lt_int(lam)).unwrap().answer);
        }
        assert!(!decide_art(&never_grant(), &Threshold::le_int(100)).unwrap().answer);
        assert!(!decide_art(&immediate_grant(), &Threshold::le_int(-1)).unwrap().answer);
    }
}
