//! Seeded generators for random instances shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stackavg::grammar::{prune, Cfg, GSym, Production};
use num_bigint::BigInt;
use stackavg::{LetterCost, Pda, Rational, StackPricing, Threshold, Wps};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Seven thresholds around the small integers where random means cluster.
pub fn grid() -> Vec<Rational> {
    vec![q(-2, 1), q(-1, 1), q(-1, 3), q(0, 1), q(1, 2), q(1, 1), q(2, 1)]
}

/// Seven nonnegative thresholds for stack costs.
pub fn stack_grid() -> Vec<Rational> {
    vec![q(0, 1), q(1, 3), q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(3, 1)]
}

pub fn thresholds(lambda: &Rational) -> [Threshold; 2] {
    [Threshold::lt(lambda.clone()), Threshold::le(lambda.clone())]
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// An ω-automaton that never pushes: at most 6 states and 10 transitions,
/// every transition reading on the empty stack.
pub fn no_push(r: &mut ChaCha8Rng) -> (Pda, LetterCost) {
    let n = r.gen_range(1..=6);
    let letters = r.gen_range(1..=3);
    let states = names("s", n);
    let sigma = names("l", letters);
    let mut b = Pda::builder(true);
    for s in &states {
        b.state(s);
    }
    for l in &sigma {
        b.letter(l);
    }
    b.initial(&states[0]);
    for s in &states {
        if r.gen_bool(0.4) {
            b.accepting(s);
        }
    }
    for _ in 0..r.gen_range(1..=10) {
        let from = states.choose(r).unwrap();
        let to = states.choose(r).unwrap();
        let l = sigma.choose(r).unwrap();
        b.transition(from, l, None, to, &[]);
    }
    let lc = LetterCost::from_pairs(sigma.iter().map(|l| (l.clone(), q(r.gen_range(-5..=5), 1))));
    (b.build(), lc)
}

/// A pushdown ω-automaton with at most 4 states and 2 stack symbols, letter
/// costs in [-5, 5] and prices in [0, 3].
pub fn pushdown(r: &mut ChaCha8Rng) -> (Pda, LetterCost, StackPricing) {
    pushdown_with(r, |r| r.gen_bool(0.4), 0, 2)
}

/// Like [`pushdown`] with every state accepting.
pub fn all_accepting(r: &mut ChaCha8Rng) -> (Pda, LetterCost, StackPricing) {
    pushdown_with(r, |_| true, 0, 2)
}

/// Like [`pushdown`] with every price at least 1.
pub fn positive_pricing(r: &mut ChaCha8Rng) -> (Pda, LetterCost, StackPricing) {
    pushdown_with(r, |r| r.gen_bool(0.4), 1, 2)
}

fn pushdown_with(
    r: &mut ChaCha8Rng,
    mut accept: impl FnMut(&mut ChaCha8Rng) -> bool,
    min_price: u64,
    max_letters: usize,
) -> (Pda, LetterCost, StackPricing) {
    let n = r.gen_range(1..=4);
    let k = r.gen_range(1..=2);
    let states = names("s", n);
    let symbols = names("X", k);
    let sigma = names("l", r.gen_range(1..=max_letters));
    let mut b = Pda::builder(true);
    for s in &states {
        b.state(s);
    }
    for x in &symbols {
        b.symbol(x);
    }
    for l in &sigma {
        b.letter(l);
    }
    b.initial(&states[0]);
    for s in &states {
        if accept(r) {
            b.accepting(s);
        }
    }
    for _ in 0..r.gen_range(1..=8) {
        let from = states.choose(r).unwrap();
        let to = states.choose(r).unwrap();
        let l = sigma.choose(r).unwrap();
        let top = if r.gen_bool(0.35) {
            None
        } else {
            Some(symbols.choose(r).unwrap().as_str())
        };
        let len = r.gen_range(0..=2);
        let push: Vec<&str> = (0..len).map(|_| symbols.choose(r).unwrap().as_str()).collect();
        b.transition(from, l, top, to, &push);
    }
    let pda = b.build();
    let lc = LetterCost::from_pairs(sigma.iter().map(|l| (l.clone(), q(r.gen_range(-5..=5), 1))));
    let prices: Vec<u64> = (0..k).map(|_| r.gen_range(min_price..=3)).collect();
    (pda, lc, StackPricing::total(prices))
}

/// A weighted pushdown system with weights in [-5, 5], and its Büchi states.
pub fn wps(r: &mut ChaCha8Rng) -> Wps {
    let (a, _, _) = pushdown_with(r, |r| r.gen_bool(0.4), 0, 1);
    let weights = (0..a.transitions().len()).map(|_| BigInt::from(r.gen_range(-5..=5))).collect();
    let buchi = a.accepting().clone();
    Wps::new(a, weights, buchi).unwrap()
}

/// A finite-word automaton over {a, b}: at most 3 states, 2 stack symbols and
/// 6 transitions.
pub fn finite_pda(r: &mut ChaCha8Rng) -> Pda {
    let n = r.gen_range(1..=3);
    let states = names("s", n);
    let symbols = ["X", "Y"];
    let mut b = Pda::builder(false);
    for s in &states {
        b.state(s);
    }
    b.letter("a");
    b.letter("b");
    b.symbol("X");
    b.symbol("Y");
    b.initial(&states[0]);
    for s in &states {
        if r.gen_bool(0.4) {
            b.accepting(s);
        }
    }
    for _ in 0..r.gen_range(1..=6) {
        let from = states.choose(r).unwrap();
        let to = states.choose(r).unwrap();
        let l = if r.gen_bool(0.5) { "a" } else { "b" };
        let top = if r.gen_bool(0.4) { None } else { Some(*symbols.choose(r).unwrap()) };
        let len = r.gen_range(0..=2);
        let push: Vec<&str> = (0..len).map(|_| *symbols.choose(r).unwrap()).collect();
        b.transition(from, l, top, to, &push);
    }
    b.build()
}

/// A grammar over {a, b} with at most 3 nonterminals and bodies of length at
/// most 3, ε-rules and unit rules included.
pub fn grammar(r: &mut ChaCha8Rng) -> Cfg {
    let k = r.gen_range(1..=3);
    let nts = names("N", k);
    let mut productions = Vec::new();
    for _ in 0..r.gen_range(1..=6) {
        let head = r.gen_range(0..k);
        let len = r.gen_range(0..=3);
        let body = (0..len)
            .map(|_| {
                if r.gen_bool(0.5) {
                    GSym::T(r.gen_range(0..2))
                } else {
                    GSym::N(r.gen_range(0..k))
                }
            })
            .collect();
        productions.push(Production { head, body });
    }
    Cfg::new(vec!["a".into(), "b".into()], nts, 0, productions).unwrap()
}

/// A pruned grammar in Chomsky normal form with at most 3 nonterminals.
/// The start symbol may derive ε when it occurs in no body.
pub fn cnf_grammar(r: &mut ChaCha8Rng) -> Option<Cfg> {
    let k = r.gen_range(1..=3);
    let nts = names("N", k);
    let mut productions = Vec::new();
    for _ in 0..r.gen_range(1..=7) {
        let head = r.gen_range(0..k);
        let body = if r.gen_bool(0.4) {
            vec![GSym::T(r.gen_range(0..2))]
        } else {
            vec![GSym::N(r.gen_range(0..k)), GSym::N(r.gen_range(0..k))]
        };
        productions.push(Production { head, body });
    }
    let start_in_body = productions.iter().any(|p| p.body.contains(&GSym::N(0)));
    if !start_in_body && r.gen_bool(0.3) {
        productions.push(Production { head: 0, body: Vec::new() });
    }
    let g = prune(&Cfg::new(vec!["a".into(), "b".into()], nts, 0, productions).unwrap());
    (g.is_cnf() && !g.productions().is_empty()).then_some(g)
}

pub fn ab_costs(r: &mut ChaCha8Rng) -> LetterCost {
    LetterCost::from_integers(&[("a", r.gen_range(-5..=5)), ("b", r.gen_range(-5..=5))])
}

/// Every word over {a, b} of length at most `n`.
pub fn all_words(n: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for l in ["a", "b"] {
                let mut v = w.clone();
                v.push(l.to_string());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn scale_lc(lc: &LetterCost, k: i64) -> LetterCost {
    LetterCost::from_pairs(lc.iter().map(|(l, v)| (l.clone(), v * Rational::from_integer(k.into()))))
}
