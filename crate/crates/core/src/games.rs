//! One-player games on weighted pushdown systems with a mean-payoff
//! objective and a Büchi objective.
//!
//! Making every transition its own letter turns the weight sequence of a run
//! into the letter-cost sequence of a word, so the game reduces to the
//! infinite-word average letter cost problems.

use std::collections::BTreeSet;

use crate::model::{Decision, LetterCost, ModelError, Mode, Pda, PdaBuilder, Problem, Rational, StateId, Threshold, Wps};
use crate::omega::OmegaAnalysis;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameObjective {
    pub mode: Mode,
    pub threshold: Threshold,
    pub buchi: BTreeSet<StateId>,
}

/// Letter name of transition `i` in [`wps_to_letter`].
pub fn transition_letter(i: usize) -> String {
    format!("t{i}")
}

/// The ω-automaton whose letters are the transitions of `w`, accepting in
/// `buchi`, with each letter costing its transition's weight.
pub fn wps_to_letter(w: &Wps, buchi: &BTreeSet<StateId>) -> (Pda, LetterCost) {
    let src = w.pda();
    let mut b = PdaBuilder::new(true);
    for s in src.states() {
        b.state(s);
    }
    for s in src.symbols() {
        b.symbol(s);
    }
    for &q in src.initial() {
        b.initial(src.state_name(q));
    }
    for &q in buchi {
        b.accepting(src.state_name(q));
    }
    let mut lc = LetterCost::new();
    for (i, t) in src.transitions().iter().enumerate() {
        let letter = transition_letter(i);
        let push: Vec<&str> = t.push.iter().map(|&s| src.symbol_name(s)).collect();
        b.transition(
            src.state_name(t.from),
            &letter,
            t.top.symbol().map(|s| src.symbol_name(s)),
            src.state_name(t.to),
            &push,
        );
        lc.set(&letter, Rational::from_integer(w.weights()[i].clone()));
    }
    (b.build(), lc)
}

/// Can the player build a run that visits `buchi` infinitely often and whose
/// mean payoff, in the limit given by the objective's mode, satisfies the
/// threshold?
pub fn solve_wps_game(w: &Wps, obj: &GameObjective) -> Result<Decision, ModelError> {
    if let Some(q) = obj.buchi.iter().find(|q| q.index() >= w.pda().num_states()) {
        return Err(ModelError::Invalid(format!("Büchi state #{} is undeclared", q.0)));
    }
    let (a, lc) = wps_to_letter(w, &obj.buchi);
    let answer = OmegaAnalysis::new(&a)?.decide(&lc, &obj.threshold, obj.mode)?;
    Ok(Decision::new(Problem::WpsGame, answer)
        .with_input("mode", obj.mode)
        .with_input("threshold", &obj.threshold)
        .with_input("buchi", obj.buchi.len()))
}
