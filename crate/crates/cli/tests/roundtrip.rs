//! Serializing a random model and parsing it back gives the same model.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stackavg::art::{ClientServerSpec, Guard, Label};
use stackavg::grammar::{used_terminals, Cfg, GSym, Production};
use stackavg::{LetterCost, Pda, Rational, StackPricing, StateId};
use stackavg_cli::format::{
    parse_automaton, parse_client_server, parse_grammar, serialize_automaton, serialize_client_server,
    serialize_grammar, AutomatonFile, GrammarFile,
};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn rational(r: &mut ChaCha8Rng) -> Rational {
    Rational::new(r.gen_range(-9..=9).into(), r.gen_range(1..=4).into())
}

fn automaton(r: &mut ChaCha8Rng) -> AutomatonFile {
    let states = names("q", r.gen_range(1..=4));
    let letters = names("a", r.gen_range(1..=3));
    let symbols = names("X", r.gen_range(0..=3));
    let mut b = Pda::builder(r.gen_bool(0.5));
    states.iter().for_each(|s| { b.state(s); });
    letters.iter().for_each(|l| { b.letter(l); });
    symbols.iter().for_each(|x| { b.symbol(x); });
    b.initial(&states[0]);
    for s in &states {
        if r.gen_bool(0.5) {
            b.accepting(s);
        }
    }
    for _ in 0..r.gen_range(0..=8) {
        let top = if symbols.is_empty() || r.gen_bool(0.3) { None } else { symbols.choose(r).map(String::as_str) };
        let push: Vec<&str> = if symbols.is_empty() {
            Vec::new()
        } else {
            (0..r.gen_range(0..=3)).map(|_| symbols.choose(r).unwrap().as_str()).collect()
        };
        b.transition(states.choose(r).unwrap(), letters.choose(r).unwrap(), top, states.choose(r).unwrap(), &push);
    }
    let pda = b.build();
    let mut f = AutomatonFile::new(pda);
    if r.gen_bool(0.5) {
        f.pricing = Some(StackPricing::new(
            (0..symbols.len()).map(|_| r.gen_bool(0.8).then(|| r.gen_range(0..=5))).collect(),
        ));
    }
    if r.gen_bool(0.5) {
        f.lc = Some(LetterCost::from_pairs(letters.iter().map(|l| (l.clone(), rational(r)))));
    }
    if r.gen_bool(0.3) && !f.pda.transitions().is_empty() {
        f.weights = Some(f.pda.transitions().iter().map(|_| BigInt::from(r.gen_range(-20..=20))).collect());
    }
    if r.gen_bool(0.3) {
        let buchi: BTreeSet<StateId> = (0..states.len() as u32).filter(|_| r.gen_bool(0.5)).map(StateId).collect();
        f.buchi = Some(buchi);
    }
    f
}

fn grammar(r: &mut ChaCha8Rng) -> GrammarFile {
    let k = r.gen_range(1..=3);
    let mut productions: Vec<Production> = (0..r.gen_range(1..=6))
        .map(|_| Production {
            head: r.gen_range(0..k),
            body: (0..r.gen_range(0..=3))
                .map(|_| if r.gen_bool(0.5) { GSym::T(r.gen_range(0..2)) } else { GSym::N(r.gen_range(0..k)) })
                .collect(),
        })
        .collect();
    productions.sort_by_key(|p| p.head);
    let cfg = Cfg::new(vec!["a".into(), "b".into()], names("N", k), 0, productions).unwrap();
    // The format only accepts costs for letters that occur in a rule.
    let used = used_terminals(&cfg);
    let lc = r
        .gen_bool(0.5)
        .then(|| LetterCost::from_pairs(used.iter().map(|&a| (cfg.terminals()[a].clone(), rational(r)))));
    GrammarFile { cfg, lc }
}

fn client_server(r: &mut ChaCha8Rng) -> ClientServerSpec {
    let states = names("s", r.gen_range(1..=3));
    let mut spec = ClientServerSpec::new(&states[0]);
    for _ in 0..r.gen_range(0..=6) {
        let label = *[Label::Request, Label::Grant, Label::Null].choose(r).unwrap();
        let guard = if label == Label::Grant {
            Guard::NonZero
        } else {
            *[Guard::Any, Guard::Zero, Guard::NonZero].choose(r).unwrap()
        };
        spec.add(states.choose(r).unwrap(), label, guard, states.choose(r).unwrap());
    }
    spec
}

#[test]
fn automata_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let f = automaton(&mut r);
        let text = serialize_automaton(&f);
        let back = parse_automaton(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back, f, "{text}");
    }
}

#[test]
fn grammars_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let f = grammar(&mut r);
        let text = serialize_grammar(&f);
        let back = parse_grammar(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back.lc, f.lc, "{text}");
        assert_eq!(serialize_grammar(&back), text);
        let rules = |g: &Cfg| -> BTreeSet<(String, Vec<String>)> {
            g.productions()
                .iter()
                .map(|p| {
                    let body = p.body.iter().map(|s| match *s {
                        GSym::T(a) => g.terminals()[a].clone(),
                        GSym::N(b) => g.nonterminals()[b].clone(),
                    });
                    (g.nonterminals()[p.head].clone(), body.collect())
                })
                .collect()
        };
        assert_eq!(rules(&back.cfg), rules(&f.cfg), "{text}");
        assert_eq!(back.cfg.nonterminals()[back.cfg.start()], f.cfg.nonterminals()[f.cfg.start()]);
    }
}

#[test]
fn client_server_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let spec = client_server(&mut r);
        let text = serialize_client_server(&spec);
        let back = parse_client_server(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back, spec, "{text}");
    }
}
