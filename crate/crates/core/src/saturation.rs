//! Summary grammar of a pushdown automaton.
//!
//! A *summary* `Summary(p, X, s, f)` derives the words read from state `p`
//! with `X` on top until that stack cell is first popped, ending in state `s`.
//! A *partial* `Partial(t, i, r, f)` derives the words read by transition `t`
//! followed by runs that pop the pushed cells `Y_k … Y_{i+1}`, ending in state
//! `r` with `Y_i` on top. In both, `f` records whether an accepting state was
//! entered. Only productive nonterminals are ever created, and every rule is
//! either a single letter or a pair `Partial · Summary`.
//!
//! The *head graph* has a vertex per (state, top) pair. An edge labelled
//! `Partial(t, j, s, f)` with `j ≥ 1` leads from `(t.from, t.top)` to
//! `(s, Y_j)`: the run takes `t`, clears the cells above `Y_j`, and never pops
//! `Y_j` again. From a bottom-marker head there is also an edge labelled
//! `Partial(t, 0, s, f)` back to `(s, ⊥)`. Every run decomposes into a path of
//! this graph, which is what both the finite-word grammar conversion and the
//! infinite-word decisions rely on.

use std::collections::HashMap;

use crate::model::{LetterId, Pda, StateId, SymbolId, Top};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Nt {
    Summary {
        p: StateId,
        x: SymbolId,
        s: StateId,
        f: bool,
    },
    Partial {
        t: u32,
        i: u32,
        r: StateId,
        f: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Body {
    Letter(LetterId),
    Pair(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Rule {
    pub head: u32,
    pub body: Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct HeadEdge {
    pub from: usize,
    pub to: usize,
    pub label: u32,
    pub accepting: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Saturation {
    pub nts: Vec<Nt>,
    pub rules: Vec<Rule>,
    /// Number of symbols plus one; head vertex of `(q, top)` is
    /// `q * width + top_index` with the bottom marker at index 0.
    pub width: usize,
    pub num_heads: usize,
    pub edges: Vec<HeadEdge>,
}

impl Saturation {
    /// Builds the summary grammar. With `flags` unset every flag is false,
    /// which keeps the grammar smaller when acceptance is irrelevant.
    pub fn build(pda: &Pda, flags: bool) -> Self {
        let mut b = Builder {
            pda,
            flags,
            ids: HashMap::new(),
            nts: Vec::new(),
            rules: Vec::new(),
            work: Vec::new(),
            summaries: HashMap::new(),
            waiting: HashMap::new(),
        };
        for (ti, t) in pda.transitions().iter().enumerate() {
            let k = t.push.len() as u32;
            let f = b.flag(t.to);
            let head = b.target(ti, k, t.to, f);
            b.rules.push(Rule {
                head,
                body: Body::Letter(t.letter),
            });
        }
        while let Some(n) = b.work.pop() {
            b.process(n);
        }
        let width = pda.symbols().len() + 1;
        let num_heads = pda.num_states() * width;
        let mut edges = Vec::new();
        for (id, nt) in b.nts.iter().enumerate() {
            if let Nt::Partial { t, i, r, f } = *nt {
                let tr = &pda.transitions()[t as usize];
                let from = head_index(width, tr.from, tr.top);
                let to = if i >= 1 {
                    head_index(width, r, Top::Symbol(tr.push[i as usize - 1]))
                } else {
                    debug_assert_eq!(tr.top, Top::Bottom);
                    head_index(width, r, Top::Bottom)
                };
                edges.push(HeadEdge {
                    from,
                    to,
                    label: id as u32,
                    accepting: f,
                });
            }
        }
        log::debug!(
            "saturation: {} nonterminals, {} rules, {} head edges",
            b.nts.len(),
            b.rules.len(),
            edges.len()
        );
        Saturation {
            nts: b.nts,
            rules: b.rules,
            width,
            num_heads,
            edges,
        }
    }

    pub fn head(&self, q: StateId, top: Top) -> usize {
        head_index(self.width, q, top)
    }

    pub fn head_state(&self, v: usize) -> StateId {
        StateId((v / self.width) as u32)
    }

    pub fn head_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_heads];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        adj
    }
}

pub(crate) fn head_index(width: usize, q: StateId, top: Top) -> usize {
    q.index() * width
        + match top {
            Top::Bottom => 0,
            Top::Symbol(s) => s.index() + 1,
        }
}

struct Builder<'a> {
    pda: &'a Pda,
    flags: bool,
    ids: HashMap<Nt, u32>,
    nts: Vec<Nt>,
    rules: Vec<Rule>,
    work: Vec<u32>,
    /// Summaries found so far, keyed by the state and popped symbol.
    summaries: HashMap<(StateId, SymbolId), Vec<u32>>,
    /// Partials `Partial(t, i, r, f)` with `i ≥ 1`, keyed by `(r, Y_i)`.
    waiting: HashMap<(StateId, SymbolId), Vec<u32>>,
}

impl Builder<'_> {
    fn flag(&self, q: StateId) -> bool {
        self.flags && self.pda.is_accepting(q)
    }

    fn intern(&mut self, nt: Nt) -> u32 {
        if let Some(&id) = self.ids.get(&nt) {
            return id;
        }
        let id = self.nts.len() as u32;
        self.nts.push(nt);
        self.ids.insert(nt, id);
        self.work.push(id);
        id
    }

    fn target(&mut self, ti: usize, i: u32, s: StateId, f: bool) -> u32 {
        let t = &self.pda.transitions()[ti];
        let nt = match (i, t.top) {
            (0, Top::Symbol(x)) => Nt::Summary { p: t.from, x, s, f },
            _ => Nt::Partial {
                t: ti as u32,
                i,
                r: s,
                f,
            },
        };
        self.intern(nt)
    }

    fn combine(&mut self, partial: u32, summary: u32) {
        let (Nt::Partial { t, i, f, .. }, Nt::Summary { s, f: g, .. }) =
            (self.nts[partial as usize], self.nts[summary as usize])
        else {
            unreachable!()
        };
        let head = self.target(t as usize, i - 1, s, f || g);
        self.rules.push(Rule {
            head,
            body: Body::Pair(partial, summary),
        });
    }

    fn process(&mut self, n: u32) {
        match self.nts[n as usize] {
            Nt::Partial { t, i, r, .. } if i >= 1 => {
                let y = self.pda.transitions()[t as usize].push[i as usize - 1];
                self.waiting.entry((r, y)).or_default().push(n);
                let known = self.summaries.get(&(r, y)).cloned().unwrap_or_default();
                for s in known {
                    self.combine(n, s);
                }
            }
            Nt::Partial { .. } => {}
            Nt::Summary { p, x, .. } => {
                self.summaries.entry((p, x)).or_default().push(n);
                let waiting = self.waiting.get(&(p, x)).cloned().unwrap_or_default();
                for w in waiting {
                    self.combine(w, n);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{e1, zeros_twos};

    #[test]
    fn e1_summaries() {
        let (a, _) = e1();
        let sat = Saturation::build(&a, true);
        let st = |n: &str| a.state_id(n).unwrap();
        let sym = |n: &str| a.symbol_id(n).unwrap();
        // β popped from B returns to A (accepting) or stays in B.
        assert!(sat.nts.contains(&Nt::Summary {
            p: st("B"),
            x: sym("β"),
            s: st("A"),
            f: true
        }));
        assert!(sat.nts.contains(&Nt::Summary {
            p: st("B"),
            x: sym("β"),
            s: st("B"),
            f: false
        }));
        // α popped from U: replace by β, then pop β.
        assert!(sat.nts.contains(&Nt::Summary {
            p: st("U"),
            x: sym("α"),
            s: st("A"),
            f: true
        }));
        // Only A carries a bottom-marker head loop.
        let bottom_loops: Vec<_> = sat
            .edges
            .iter()
            .filter(|e| e.from == e.to && e.from == sat.head(st("A"), Top::Bottom))
            .collect();
        assert!(bottom_loops.iter().any(|e| e.accepting));
    }

    #[test]
    fn flagless_has_no_flags() {
        let (a, _) = zeros_twos();
        let sat = Saturation::build(&a, false);
        assert!(sat.edges.iter().all(|e| !e.accepting));
        assert!(sat.nts.iter().all(|n| match n {
            Nt::Summary { f, .. } | Nt::Partial { f, .. } => !f,
        }));
    }
}
