//! Average letter cost over infinite words accepted by a Büchi pushdown
//! automaton.
//!
//! Every accepting run settles on stack cells that are never popped again.
//! Grouping those cells by state and symbol splits the language into
//! components `V_{q,γ} (U_{q,γ})^ω`: `V` reaches state `q` with `γ` on top,
//! and `U` runs from there back to state `q` with `γ` on top again, never
//! popping the starting cell and entering an accepting state on the way.
//! [`factorize`] builds these recognizers explicitly and
//! [`decide_by_components`] decides each component through grammars.
//!
//! [`decide_avgsup_lc`] and [`decide_avginf_lc`] reach the same answers
//! without building one grammar per component: the `U` words of a component
//! are the closed walks through `(q, γ)` in the head graph of the summary
//! grammar, so the per-component conditions become cycle conditions on the
//! strongly connected parts of that graph plus pump conditions on the
//! nonterminals labelling their edges.

use num_traits::Zero;

use crate::avglc;
use crate::grammar::{cfg_nonempty, pda_to_cfg, pump_grammar_left, to_cnf};
use crate::graph::{cycle_info, reachable, tarjan, WEdge};
use crate::model::{
    Decision, LetterCost, ModelError, Mode, Pda, PdaBuilder, Problem, Rational, Relation, StateId,
    SymbolId, Threshold, Top,
};
use crate::saturation::{Body, Saturation};
use crate::spine::{Item, Rules, Structure};
use crate::weight::{with_fallback, Ext, Overflow, Scaled, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub state: StateId,
    pub top: Top,
    /// Finite-word recognizer of `V_{q,γ}`.
    pub v_rec: Pda,
    /// Finite-word recognizer of `U_{q,γ}`.
    pub u_rec: Pda,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub components: Vec<Component>,
}

const NO_BELOW: &str = "▽";

fn top_name(a: &Pda, top: Top) -> String {
    a.format_top(top)
}

fn cell(a: &Pda, x: SymbolId, below: &str) -> String {
    format!("{}/{}", a.symbol_name(x), below)
}

/// Cells for the push string `y` placed over a cell whose symbol is `below`.
fn cells(a: &Pda, y: &[SymbolId], below: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(y.len());
    let mut under = below.to_string();
    for &s in y {
        out.push(cell(a, s, &under));
        under = a.symbol_name(s).to_string();
    }
    out
}

fn new_builder(a: &Pda) -> PdaBuilder {
    let mut b = Pda::builder(false);
    for l in a.letters() {
        b.letter(l);
    }
    b
}

fn add(b: &mut PdaBuilder, from: &str, letter: &str, top: Option<&str>, to: &str, push: &[String]) {
    let push: Vec<&str> = push.iter().map(String::as_str).collect();
    b.transition(from, letter, top, to, &push);
}

/// Tops below a symbol cell: the bottom marker or any symbol.
fn belows(a: &Pda) -> Vec<String> {
    std::iter::once("⊥".to_string())
        .chain(a.symbols().iter().cloned())
        .collect()
}

fn v_recognizer(a: &Pda, q: StateId, gamma: Top) -> Pda {
    let mut b = new_builder(a);
    let st = |p: StateId, top: &str| format!("{}|{}", a.state_name(p), top);
    for &q0 in a.initial() {
        b.initial(&st(q0, "⊥"));
    }
    b.accepting(&st(q, &top_name(a, gamma)));
    for t in a.transitions() {
        let letter = a.letter_name(t.letter);
        match t.top {
            Top::Bottom => {
                let new_top = t.push.last().map_or("⊥".to_string(), |&s| a.symbol_name(s).to_string());
                add(&mut b, &st(t.from, "⊥"), letter, None, &st(t.to, &new_top), &cells(a, &t.push, "⊥"));
            }
            Top::Symbol(x) => {
                for below in belows(a) {
                    let new_top = t.push.last().map_or(below.clone(), |&s| a.symbol_name(s).to_string());
                    add(
                        &mut b,
                        &st(t.from, a.symbol_name(x)),
                        letter,
                        Some(&cell(a, x, &below)),
                        &st(t.to, &new_top),
                        &cells(a, &t.push, &below),
                    );
                }
            }
        }
    }
    b.build()
}

fn u_recognizer(a: &Pda, q: StateId, gamma: Top) -> Pda {
    let mut b = new_builder(a);
    let st = |p: StateId, top: &str, f: bool| format!("{}|{}|{}", a.state_name(p), top, u8::from(f));
    let acc = |p: StateId| a.is_accepting(p);
    b.accepting(&st(q, &top_name(a, gamma), true));
    // Symbols that may sit below a cell: with a protected symbol cell the
    // lowest cell has the no-pop marker instead of the bottom marker.
    let mut unders: Vec<String> = a.symbols().to_vec();
    match gamma {
        Top::Bottom => {
            b.initial(&st(q, "⊥", false));
            unders.insert(0, "⊥".to_string());
        }
        Top::Symbol(g) => {
            b.initial("init");
            unders.insert(0, NO_BELOW.to_string());
            for t in a.transitions().iter().filter(|t| t.from == q && t.top == Top::Symbol(g)) {
                if let Some(&last) = t.push.last() {
                    add(
                        &mut b,
                        "init",
                        a.letter_name(t.letter),
                        None,
                        &st(t.to, a.symbol_name(last), acc(t.to)),
                        &cells(a, &t.push, NO_BELOW),
                    );
                }
            }
        }
    }
    for t in a.transitions() {
        let letter = a.letter_name(t.letter);
        for f in [false, true] {
            let g = f || acc(t.to);
            match t.top {
                Top::Bottom => {
                    if gamma != Top::Bottom {
                        continue;
                    }
                    let new_top = t.push.last().map_or("⊥".to_string(), |&s| a.symbol_name(s).to_string());
                    add(&mut b, &st(t.from, "⊥", f), letter, None, &st(t.to, &new_top, g), &cells(a, &t.push, "⊥"));
                }
                Top::Symbol(x) => {
                    for under in &unders {
                        let new_top = match t.push.last() {
                            Some(&s) => a.symbol_name(s).to_string(),
                            None if under == NO_BELOW => continue,
                            None => under.clone(),
                        };
                        add(
                            &mut b,
                            &st(t.from, a.symbol_name(x), f),
                            letter,
                            Some(&cell(a, x, under)),
                            &st(t.to, &new_top, g),
                            &cells(a, &t.push, under),
                        );
                    }
                }
            }
        }
    }
    b.build()
}

/// Splits `L(a)` into components `V_{q,γ} (U_{q,γ})^ω`, keeping those whose
/// two languages are both nonempty.
pub fn factorize(a: &Pda) -> Result<Factorization, ModelError> {
    if !a.is_omega() {
        return Err(ModelError::WrongSemantics { expected: "infinite-word" });
    }
    let mut components = Vec::new();
    for qi in 0..a.num_states() {
        let q = StateId(qi as u32);
        let tops = std::iter::once(Top::Bottom)
            .chain((0..a.symbols().len()).map(|s| Top::Symbol(SymbolId(s as u32))));
        for gamma in tops {
            let v_rec = v_recognizer(a, q, gamma);
            if !cfg_nonempty(&pda_to_cfg(&v_rec)?) {
                continue;
            }
            let u_rec = u_recognizer(a, q, gamma);
            if !cfg_nonempty(&pda_to_cfg(&u_rec)?) {
                continue;
            }
            components.push(Component {
                state: q,
                top: gamma,
                v_rec,
                u_rec,
            });
        }
    }
    Ok(Factorization { components })
}

/// Decides each component through the grammar of its `U` language. Exact
/// but expensive; meant for small automata and for cross-checking.
pub fn decide_by_components(
    a: &Pda,
    lc: &LetterCost,
    th: &Threshold,
    mode: Mode,
) -> Result<bool, ModelError> {
    for c in factorize(a)?.components {
        let g = to_cnf(&pda_to_cfg(&c.u_rec)?);
        if avglc::holds(&g, lc, th)? {
            return Ok(true);
        }
        if mode == Mode::Inf {
            for n in 0..g.nonterminals().len() {
                let left = pump_grammar_left(&g, n)?;
                if cfg_nonempty(&left) && avglc::holds(&left, lc, th)? {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Answers for both limits and both relations at one threshold value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Verdicts {
    pub sup_strict: bool,
    pub sup_nonstrict: bool,
    pub inf_strict: bool,
    pub inf_nonstrict: bool,
}

impl Verdicts {
    pub fn get(&self, mode: Mode, relation: Relation) -> bool {
        match (mode, relation) {
            (Mode::Sup, Relation::Strict) => self.sup_strict,
            (Mode::Sup, Relation::NonStrict) => self.sup_nonstrict,
            (Mode::Inf, Relation::Strict) => self.inf_strict,
            (Mode::Inf, Relation::NonStrict) => self.inf_nonstrict,
        }
    }
}

/// Part of a head-graph component that can host the loop of an accepting run.
#[derive(Debug, Clone)]
struct Loop {
    size: usize,
    /// Internal edges as (local from, local to, label).
    edges: Vec<(usize, usize, u32)>,
}

/// The threshold-independent part of the infinite-word decisions.
#[derive(Debug, Clone)]
pub struct OmegaAnalysis {
    letters: Vec<String>,
    used_letters: Vec<bool>,
    structure: Structure,
    loops: Vec<Loop>,
}

impl OmegaAnalysis {
    pub fn new(a: &Pda) -> Result<Self, ModelError> {
        if !a.is_omega() {
            return Err(ModelError::WrongSemantics { expected: "infinite-word" });
        }
        let sat = Saturation::build(a, true);
        let mut used_letters = vec![false; a.letters().len()];
        for t in a.transitions() {
            used_letters[t.letter.index()] = true;
        }
        let structure = Structure::new(Rules {
            num_nts: sat.nts.len(),
            heads: sat.rules.iter().map(|r| r.head as usize).collect(),
            bodies: sat
                .rules
                .iter()
                .map(|r| match r.body {
                    Body::Letter(l) => vec![Item::Letter(l.index())],
                    Body::Pair(x, y) => vec![Item::Nt(x as usize), Item::Nt(y as usize)],
                })
                .collect(),
        });
        let adj = sat.head_adjacency();
        let live = reachable(&adj, a.initial().iter().map(|&q| sat.head(q, Top::Bottom)));
        let (comp, comps) = tarjan(&adj);
        let mut pos = vec![0; sat.num_heads];
        for members in &comps {
            for (i, &m) in members.iter().enumerate() {
                pos[m] = i;
            }
        }
        let mut loops: Vec<Loop> = comps
            .iter()
            .map(|m| Loop {
                size: m.len(),
                edges: Vec::new(),
            })
            .collect();
        let mut accepting = vec![false; comps.len()];
        for e in &sat.edges {
            if live[e.from] && comp[e.from] == comp[e.to] {
                let c = comp[e.from];
                loops[c].edges.push((pos[e.from], pos[e.to], e.label));
                accepting[c] |= e.accepting;
            }
        }
        let loops = loops
            .into_iter()
            .zip(accepting)
            .filter(|(_, acc)| *acc)
            .map(|(l, _)| l)
            .collect::<Vec<_>>();
        log::debug!("omega analysis: {} candidate loops", loops.len());
        Ok(OmegaAnalysis {
            letters: a.letters().to_vec(),
            used_letters,
            structure,
            loops,
        })
    }

    /// Whether the automaton has an accepting run at all.
    pub fn has_accepting_run(&self) -> bool {
        !self.loops.is_empty()
    }

    pub fn verdicts(&self, lc: &LetterCost, lambda: &Rational) -> Result<Verdicts, ModelError> {
        let costs: Vec<Rational> = self
            .letters
            .iter()
            .zip(&self.used_letters)
            .map(|(l, &used)| {
                if used {
                    lc.require(l).cloned()
                } else {
                    Ok(Rational::zero())
                }
            })
            .collect::<Result<_, _>>()?;
        let scaled = Scaled::shifted(&costs, lambda);
        Ok(with_fallback(
            || self.verdicts_with::<i128>(&scaled.convert()?),
            || {
                self.verdicts_with(&scaled.values)
                    .expect("big integers do not overflow")
            },
        ))
    }

    fn verdicts_with<W: Weight>(&self, letters: &[W]) -> Result<Verdicts, Overflow> {
        let an = self.structure.analyze(letters)?;
        let mut v = Verdicts::default();
        for lp in &self.loops {
            let edges: Vec<WEdge<W>> = lp
                .edges
                .iter()
                .map(|&(from, to, label)| WEdge {
                    from,
                    to,
                    weight: an.values[label as usize].clone(),
                    bearing: true,
                })
                .collect();
            debug_assert!(edges.iter().all(|e| e.weight != Ext::PosInf));
            let cycles = cycle_info(lp.size, &edges)?;
            let mut pair_nonpos = false;
            let mut left_neg = false;
            let mut left_nonpos = false;
            for &(_, _, label) in &lp.edges {
                let f = an.reach[label as usize];
                pair_nonpos |= f.pair_nonpos;
                left_neg |= f.left_neg;
                left_nonpos |= f.left_nonpos;
            }
            let sup_strict = cycles.negative;
            let sup_nonstrict = cycles.nonpositive || pair_nonpos;
            v.sup_strict |= sup_strict;
            v.sup_nonstrict |= sup_nonstrict;
            v.inf_strict |= sup_strict || left_neg;
            v.inf_nonstrict |= sup_nonstrict || left_nonpos;
        }
        Ok(v)
    }

    pub fn decide(&self, lc: &LetterCost, th: &Threshold, mode: Mode) -> Result<bool, ModelError> {
        Ok(self.verdicts(lc, &th.bound)?.get(mode, th.relation))
    }
}

fn decide(a: &Pda, lc: &LetterCost, th: &Threshold, mode: Mode) -> Result<Decision, ModelError> {
    let answer = OmegaAnalysis::new(a)?.decide(lc, th, mode)?;
    let problem = match mode {
        Mode::Inf => Problem::AvgInfLc,
        Mode::Sup => Problem::AvgSupLc,
    };
    Ok(Decision::new(problem, answer)
        .with_input("threshold", th)
        .with_input("states", a.num_states())
        .with_input("transitions", a.transitions().len()))
}

/// Is there an accepting infinite word whose limsup of prefix averages of
/// letter costs satisfies the threshold?
pub fn decide_avgsup_lc(a: &Pda, lc: &LetterCost, th: &Threshold) -> Result<Decision, ModelError> {
    decide(a, lc, th, Mode::Sup)
}

/// Is there an accepting infinite word whose liminf of prefix averages of
/// letter costs satisfies the threshold?
pub fn decide_avginf_lc(a: &Pda, lc: &LetterCost, th: &Threshold) -> Result<Decision, ModelError> {
    decide(a, lc, th, Mode::Inf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simulate, Configuration, Transition};
    use crate::oracle::enumerate_pda;
    use crate::samples::{e1, zeros_twos};

    fn all(a: &Pda, lc: &LetterCost, lambda: i64) -> Verdicts {
        OmegaAnalysis::new(a)
            .unwrap()
            .verdicts(lc, &Rational::from_integer(lambda.into()))
            .unwrap()
    }

    #[test]
    fn zeros_twos_separation() {
        let (a, lc) = zeros_twos();
        let at1 = all(&a, &lc, 1);
        assert!(at1.sup_nonstrict && !at1.sup_strict);
        let at0 = all(&a, &lc, 0);
        assert!(at0.inf_nonstrict && !at0.inf_strict && !at0.sup_nonstrict);
        for mode in [Mode::Inf, Mode::Sup] {
            for (lam, rel) in [(0, Relation::NonStrict), (0, Relation::Strict), (1, Relation::NonStrict), (1, Relation::Strict)] {
                let th = Threshold::new(rel, Rational::from_integer(lam.into()));
                let lit = decide_by_components(&a, &lc, &th, mode).unwrap();
                assert_eq!(lit, all(&a, &lc, lam).get(mode, rel), "{mode} {th}");
            }
        }
    }

    #[test]
    fn zero_costs() {
        let (a, _) = zeros_twos();
        let lc = LetterCost::from_integers(&[("0", 0), ("2", 0)]);
        assert!(decide_avgsup_lc(&a, &lc, &Threshold::le_int(0)).unwrap().answer);
        assert!(!decide_avgsup_lc(&a, &lc, &Threshold::lt_int(0)).unwrap().answer);
    }

    #[test]
    fn unreachable_acceptance() {
        let mut b = Pda::builder(true);
        b.initial("p").accepting("z");
        b.transition("p", "a", None, "p", &["X"]).transition("p", "a", Some("X"), "p", &["X"]);
        b.transition("z", "a", None, "z", &[]);
        let a = b.build();
        assert!(factorize(&a).unwrap().components.is_empty());
        let lc = LetterCost::from_integers(&[("a", -5)]);
        assert!(!decide_avginf_lc(&a, &lc, &Threshold::le_int(0)).unwrap().answer);
    }

    #[test]
    fn e1_bottom_component_loops_through_a() {
        let (a, _) = e1();
        let f = factorize(&a).unwrap();
        let c = f
            .components
            .iter()
            .find(|c| c.state == a.state_id("A").unwrap() && c.top == Top::Bottom)
            .expect("component (A, ⊥)");
        // a·a·a: A pushes α, U trades it for β, B pops back to A.
        let words = enumerate_pda(&c.u_rec, 4);
        assert!(words.contains(&vec!["a".to_string(); 3]));
        // Replaying the same transitions on E1 returns to A with an empty stack.
        let ts: Vec<Transition> = [0usize, 2, 4].iter().map(|&i| a.transitions()[i].clone()).collect();
        let run = simulate(&a, &ts).unwrap();
        assert_eq!(run.last().unwrap(), &Configuration { last_letter: a.letter_id("a"), ..Configuration::new(a.state_id("A").unwrap()) });
    }

    #[test]
    fn growing_stack_is_covered() {
        // Pushes forever; the loop lives on ever-higher cells.
        let mut b = Pda::builder(true);
        b.initial("p").accepting("p");
        b.transition("p", "a", None, "p", &["X"]).transition("p", "a", Some("X"), "p", &["X", "X"]);
        let a = b.build();
        assert!(!factorize(&a).unwrap().components.is_empty());
        let lc = LetterCost::from_integers(&[("a", 2)]);
        assert!(decide_avgsup_lc(&a, &lc, &Threshold::le_int(2)).unwrap().answer);
        assert!(!decide_avgsup_lc(&a, &lc, &Threshold::lt_int(2)).unwrap().answer);
        assert!(decide_by_components(&a, &lc, &Threshold::le_int(2), Mode::Sup).unwrap());
    }

    #[test]
    fn finite_word_automaton_rejected() {
        let (a, lc) = zeros_twos();
        let a = a.with_omega(false);
        assert!(matches!(
            decide_avginf_lc(&a, &lc, &Threshold::le_int(0)),
            Err(ModelError::WrongSemantics { .. })
        ));
    }
}
