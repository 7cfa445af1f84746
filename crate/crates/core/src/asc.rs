//! Average stack cost decisions.
//!
//! If some accepting run has average stack cost `⋈ λ`, then one does whose
//! stack cost never exceeds [`cost_bound`]. Runs of bounded stack cost are
//! the words of a *meta-automaton* that tracks the current stack cost in its
//! state and writes it into each letter, so the average stack cost of a run
//! is the average letter cost of its meta-word.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::model::{
    Decision, LetterCost, ModelError, Mode, Pda, PdaBuilder, Problem, Rational, StackPricing,
    StateId, Threshold, Top, Transition,
};
use crate::omega::OmegaAnalysis;

/// Letter of the meta-automaton: a source transition and the stack cost of
/// the configuration it enters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MetaLetter {
    pub transition: usize,
    pub cost: u64,
}

impl MetaLetter {
    pub fn name(&self) -> String {
        format!("{}:{}", self.transition, self.cost)
    }
}

#[derive(Debug, Clone)]
pub struct MetaAutomaton {
    pub pda: Pda,
    pub lc: LetterCost,
    pub bound: u64,
    /// Meta-state `i` is `states[i]`: a source state and the current stack cost.
    pub states: Vec<(StateId, u64)>,
    /// Meta-letter `i` is `letters[i]`.
    pub letters: Vec<MetaLetter>,
}

impl MetaAutomaton {
    /// The meta-word of a run of the source automaton, or `None` when the run
    /// is not a run or its stack cost exceeds the bound.
    pub fn translate(&self, source: &Pda, c: &StackPricing, ts: &[Transition]) -> Option<Vec<String>> {
        let mut stack = Vec::new();
        let mut cost = 0u64;
        let mut out = Vec::with_capacity(ts.len());
        for t in ts {
            let index = source.transitions().iter().position(|u| u == t)?;
            match t.top {
                Top::Bottom if stack.is_empty() => {}
                Top::Symbol(x) if stack.last() == Some(&x) => {
                    stack.pop();
                    cost -= c.get(x)?;
                }
                _ => return None,
            }
            stack.extend_from_slice(&t.push);
            cost += c.cost_of(&t.push).ok()?;
            if cost > self.bound {
                return None;
            }
            out.push(MetaLetter { transition: index, cost }.name());
        }
        Some(out)
    }
}

/// `maxc · 3·|Q|·|Γ|·|δ| + ⌈λ⌉`, where `maxc` is the largest price.
pub fn cost_bound(a: &Pda, c: &StackPricing, lambda: &Rational) -> Result<u64, ModelError> {
    let ceil = if lambda.is_positive() {
        lambda.ceil().to_integer()
    } else {
        Zero::zero()
    };
    let base = (c.max_cost() as u128)
        * 3
        * a.num_states() as u128
        * a.symbols().len() as u128
        * a.transitions().len() as u128;
    let total = ceil + num_bigint::BigInt::from(base);
    total
        .to_u64()
        .ok_or_else(|| ModelError::Invalid(format!("stack cost bound {total} is too large")))
}

/// Builds the meta-automaton for stack cost bound `n`, exploring only
/// reachable meta-states.
pub fn meta_automaton(a: &Pda, c: &StackPricing, n: u64) -> Result<MetaAutomaton, ModelError> {
    c.covers(a)?;
    let mut b = PdaBuilder::new(true);
    for s in a.symbols() {
        b.symbol(s);
    }
    let mut ids: HashMap<(StateId, u64), usize> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    let name = |p: StateId, x: u64| format!("{}@{}", a.state_name(p), x);
    let mut visit = |p: StateId, x: u64, states: &mut Vec<(StateId, u64)>, queue: &mut VecDeque<(StateId, u64)>, b: &mut PdaBuilder| {
        if let std::collections::hash_map::Entry::Vacant(e) = ids.entry((p, x)) {
            e.insert(states.len());
            states.push((p, x));
            queue.push_back((p, x));
            b.state(&name(p, x));
            if a.is_accepting(p) {
                b.accepting(&name(p, x));
            }
        }
    };
    for &q in a.initial() {
        visit(q, 0, &mut states, &mut queue, &mut b);
        b.initial(&name(q, 0));
    }
    let push_costs: Vec<u64> = a
        .transitions()
        .iter()
        .map(|t| c.cost_of(&t.push))
        .collect::<Result<_, _>>()?;
    let mut letters: Vec<MetaLetter> = Vec::new();
    let mut letter_ids: HashMap<MetaLetter, usize> = HashMap::new();
    while let Some((p, x)) = queue.pop_front() {
        for (ti, t) in a.transitions().iter().enumerate().filter(|(_, t)| t.from == p) {
            let popped = match t.top {
                Top::Bottom if x == 0 => 0,
                Top::Bottom => continue,
                Top::Symbol(s) => match c.get(s) {
                    Some(cs) if cs <= x => cs,
                    _ => continue,
                },
            };
            let next = x - popped + push_costs[ti];
            if next > n {
                continue;
            }
            let letter = MetaLetter {
                transition: ti,
                cost: next,
            };
            letter_ids.entry(letter).or_insert_with(|| {
                letters.push(letter);
                letters.len() - 1
            });
            visit(t.to, next, &mut states, &mut queue, &mut b);
            let push: Vec<&str> = t.push.iter().map(|&s| a.symbol_name(s)).collect();
            let top = t.top.symbol().map(|s| a.symbol_name(s));
            b.transition(&name(p, x), &letter.name(), top, &name(t.to, next), &push);
        }
    }
    let lc = LetterCost::from_pairs(
        letters
            .iter()
            .map(|l| (l.name(), Rational::from_integer(l.cost.into()))),
    );
    log::debug!(
        "meta-automaton: bound {n}, {} states, {} letters",
        states.len(),
        letters.len()
    );
    Ok(MetaAutomaton {
        pda: b.build(),
        lc,
        bound: n,
        states,
        letters,
    })
}

fn check(a: &Pda, c: &StackPricing) -> Result<(), ModelError> {
    if !a.is_omega() {
        return Err(ModelError::WrongSemantics { expected: "infinite-word" });
    }
    c.covers(a)
}

/// Decision with an explicit stack cost bound instead of [`cost_bound`].
pub fn decide_asc_with_bound(
    a: &Pda,
    c: &StackPricing,
    th: &Threshold,
    mode: Mode,
    bound: u64,
) -> Result<Decision, ModelError> {
    check(a, c)?;
    let problem = match mode {
        Mode::Inf => Problem::Iasc,
        Mode::Sup => Problem::Sasc,
    };
    let answer = if th.bound.is_negative() {
        false
    } else {
        let meta = meta_automaton(a, c, bound)?;
        OmegaAnalysis::new(&meta.pda)?.decide(&meta.lc, th, mode)?
    };
    Ok(Decision::new(problem, answer)
        .with_input("threshold", th)
        .with_input("bound", bound))
}

/// Is there an accepting run whose average stack cost, in the limit given by
/// `mode`, satisfies the threshold?
pub fn decide_asc(a: &Pda, c: &StackPricing, th: &Threshold, mode: Mode) -> Result<Decision, ModelError> {
    check(a, c)?;
    if th.bound.is_negative() {
        let problem = if mode == Mode::Inf { Problem::Iasc } else { Problem::Sasc };
        return Ok(Decision::new(problem, false).with_input("threshold", th));
    }
    let bound = cost_bound(a, c, &th.bound)?;
    decide_asc_with_bound(a, c, th, mode, bound)
}

/// Is there an accepting run with `IASC(π, c) ⋈ λ`?
pub fn decide_iasc(a: &Pda, c: &StackPricing, th: &Threshold) -> Result<Decision, ModelError> {
    decide_asc(a, c, th, Mode::Inf)
}

/// Is there an accepting run with `SASC(π, c) ⋈ λ`?
pub fn decide_sasc(a: &Pda, c: &StackPricing, th: &Threshold) -> Result<Decision, ModelError> {
    decide_asc(a, c, th, Mode::Sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simulate, stack_cost};
    use crate::samples::e1;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn bound_formula() {
        let (a, c) = e1();
        assert_eq!(cost_bound(&a, &c, &q(1, 1)).unwrap(), 325);
        assert_eq!(cost_bound(&a, &c, &q(3, 2)).unwrap(), 326);
        assert_eq!(cost_bound(&a, &StackPricing::zero(&a), &q(0, 1)).unwrap(), 0);
    }

    #[test]
    fn e1_meta_state_costs() {
        let (a, c) = e1();
        let m = meta_automaton(&a, &c, 325).unwrap();
        // Costs only ever move by multiples of c(β) = 3, and U never holds β.
        assert!(m.states.iter().all(|&(_, x)| x % 3 == 0 && x <= 325));
        let u = a.state_id("U").unwrap();
        assert!(m.states.contains(&(u, 0)));
        assert!(!m.states.iter().any(|&(p, x)| p == u && x > 0));
        assert_eq!(m.pda.initial().len(), 1);
    }

    #[test]
    fn e1_meta_word_costs() {
        let (a, c) = e1();
        let m = meta_automaton(&a, &c, 325).unwrap();
        let ts: Vec<Transition> = [0usize, 2, 4].iter().map(|&i| a.transitions()[i].clone()).collect();
        let word = m.translate(&a, &c, &ts).unwrap();
        let costs: Vec<&Rational> = word.iter().map(|l| m.lc.get(l).unwrap()).collect();
        assert_eq!(costs, [&q(0, 1), &q(3, 1), &q(0, 1)]);
        let run = simulate(&a, &ts).unwrap();
        for (i, l) in word.iter().enumerate() {
            let expect = stack_cost(&c, &run[i + 1]).unwrap();
            assert_eq!(m.lc.get(l).unwrap(), &q(expect as i64, 1));
        }
    }

    #[test]
    fn escaping_cost_empties_meta_language() {
        let mut b = Pda::builder(true);
        b.initial("p").accepting("p");
        b.transition("p", "a", None, "p", &["X"]).transition("p", "a", Some("X"), "p", &["X", "X"]);
        let a = b.build();
        let c = StackPricing::from_names(&a, &[("X", 1)]).unwrap();
        let m = meta_automaton(&a, &c, 2).unwrap();
        assert!(!OmegaAnalysis::new(&m.pda).unwrap().has_accepting_run());
    }

    #[test]
    fn zero_pricing_meta_mirrors_source() {
        let (a, _) = e1();
        let z = StackPricing::zero(&a);
        let m = meta_automaton(&a, &z, 0).unwrap();
        assert_eq!(m.pda.transitions().len(), a.transitions().len());
        assert!(m.lc.iter().all(|(_, v)| v.is_zero()));
        assert!(decide_iasc(&a, &z, &Threshold::le_int(0)).unwrap().answer);
    }

    #[test]
    fn e1_decisions() {
        let (a, c) = e1();
        assert!(decide_sasc(&a, &c, &Threshold::le_int(1)).unwrap().answer);
        assert!(!decide_sasc(&a, &c, &Threshold::lt_int(1)).unwrap().answer);
        assert!(!decide_sasc(&a, &c, &Threshold::le_int(0)).unwrap().answer);
        assert!(decide_iasc(&a, &c, &Threshold::le_int(0)).unwrap().answer);
        assert!(!decide_iasc(&a, &c, &Threshold::lt_int(0)).unwrap().answer);
        assert!(!decide_iasc(&a, &c, &Threshold::le_int(-1)).unwrap().answer);
    }
}
