//! Brute-force reference procedures.
//!
//! Nothing here shares code with the decision procedures: words are
//! enumerated by direct simulation or by a length-indexed fixpoint over the
//! grammar, and thresholds are checked on the finite graph of configurations
//! whose stack height is bounded.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;
use petgraph::Direction;

use crate::grammar::{Cfg, GSym};
use crate::mincost::ExtendedRational;
use crate::model::{LetterCost, ModelError, Pda, Rational, StackPricing, StateId, SymbolId, Threshold, Top};

/// Every word of length at most `n` derived from the start symbol.
pub fn enumerate_cfg(g: &Cfg, n: usize) -> BTreeSet<Vec<String>> {
    // lang[A][l]: words of length l derived from A.
    let mut lang: Vec<Vec<BTreeSet<Vec<usize>>>> = vec![vec![BTreeSet::new(); n + 1]; g.nonterminals().len()];
    loop {
        let mut changed = false;
        for p in g.productions() {
            for l in 0..=n {
                for w in concat(&p.body, l, &lang) {
                    changed |= lang[p.head][l].insert(w);
                }
            }
        }
        if !changed {
            break;
        }
    }
    lang[g.start()]
        .iter()
        .flatten()
        .map(|w| w.iter().map(|&a| g.terminals()[a].clone()).collect())
        .collect()
}

/// Words of length exactly `l` derived from `body`.
fn concat(body: &[GSym], l: usize, lang: &[Vec<BTreeSet<Vec<usize>>>]) -> Vec<Vec<usize>> {
    let Some((first, rest)) = body.split_first() else {
        return if l == 0 { vec![Vec::new()] } else { Vec::new() };
    };
    let mut out = Vec::new();
    for k in 0..=l {
        let heads: Vec<Vec<usize>> = match *first {
            GSym::T(a) if k == 1 => vec![vec![a]],
            GSym::T(_) => continue,
            GSym::N(b) => lang[b][k].iter().cloned().collect(),
        };
        if heads.is_empty() {
            continue;
        }
        let tails = concat(rest, l - k, lang);
        for h in &heads {
            for t in &tails {
                let mut w = h.clone();
                w.extend_from_slice(t);
                out.push(w);
            }
        }
    }
    out
}

/// CYK membership test for a grammar in Chomsky normal form.
pub fn cyk(g: &Cfg, word: &[&str]) -> Result<bool, ModelError> {
    if !g.is_cnf() {
        return Err(ModelError::Invalid("CYK needs a grammar in Chomsky normal form".into()));
    }
    let n = word.len();
    if n == 0 {
        return Ok(g
            .productions()
            .iter()
            .any(|p| p.head == g.start() && p.body.is_empty()));
    }
    let k = g.nonterminals().len();
    // table[i][l - 1][A]: A derives word[i..i + l].
    let mut table = vec![vec![vec![false; k]; n]; n];
    for (i, &a) in word.iter().enumerate() {
        for p in g.productions() {
            if let [GSym::T(t)] = p.body[..] {
                if g.terminals()[t] == a {
                    table[i][0][p.head] = true;
                }
            }
        }
    }
    for l in 2..=n {
        for i in 0..=n - l {
            for split in 1..l {
                for p in g.productions() {
                    if let [GSym::N(b), GSym::N(c)] = p.body[..] {
                        if table[i][split - 1][b] && table[i + split][l - split - 1][c] {
                            table[i][l - 1][p.head] = true;
                        }
                    }
                }
            }
        }
    }
    Ok(table[0][n - 1][g.start()])
}

/// Every word of length at most `n` with a run from an initial state to an
/// accepting state, with any stack content at the end.
pub fn enumerate_pda(a: &Pda, n: usize) -> BTreeSet<Vec<String>> {
    type Config = (StateId, Vec<SymbolId>);
    let mut frontier: HashMap<Vec<usize>, HashSet<Config>> = HashMap::new();
    frontier.insert(Vec::new(), a.initial().iter().map(|&q| (q, Vec::new())).collect());
    let mut out = BTreeSet::new();
    for len in 0..=n {
        for (w, configs) in &frontier {
            if configs.iter().any(|(q, _)| a.is_accepting(*q)) {
                out.insert(w.iter().map(|&l| a.letters()[l].clone()).collect());
            }
        }
        if len == n {
            break;
        }
        let mut next: HashMap<Vec<usize>, HashSet<Config>> = HashMap::new();
        for (w, configs) in &frontier {
            for (q, stack) in configs {
                let top = stack.last().map_or(Top::Bottom, |&s| Top::Symbol(s));
                for t in a.transitions().iter().filter(|t| t.from == *q && t.top == top) {
                    let mut s = stack.clone();
                    if top != Top::Bottom {
                        s.pop();
                    }
                    s.extend_from_slice(&t.push);
                    let mut w2 = w.clone();
                    w2.push(t.letter.index());
                    next.entry(w2).or_default().insert((t.to, s));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Words of length at most `max_len` accepted by a finite-word automaton,
/// with letters written next to each other.
pub fn enumerate_words(a: &Pda, max_len: usize) -> BTreeSet<String> {
    enumerate_pda(a, max_len).into_iter().map(|w| w.concat()).collect()
}

/// How edges of the configuration graph are weighted.
#[derive(Clone, Copy, Debug)]
pub enum CostRule<'a> {
    /// The cost of the letter read.
    Letter(&'a LetterCost),
    /// The stack cost of the configuration entered.
    Stack(&'a StackPricing),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConfigNode {
    pub state: StateId,
    pub stack: Vec<SymbolId>,
}

/// Configurations of stack height at most `H` reachable from the initial
/// configurations without exceeding the height.
#[derive(Clone, Debug)]
pub struct ConfigGraph {
    pub graph: DiGraph<ConfigNode, Rational>,
    pub initial: Vec<NodeIndex>,
    pub height: usize,
}

impl ConfigGraph {
    pub fn find(&self, state: StateId, stack: &[SymbolId]) -> Option<NodeIndex> {
        self.graph
            .node_indices()
            .find(|&i| self.graph[i].state == state && self.graph[i].stack == stack)
    }
}

pub fn bounded_config_graph(a: &Pda, rule: CostRule<'_>, height: usize) -> Result<ConfigGraph, ModelError> {
    if let CostRule::Stack(c) = rule {
        c.covers(a)?;
    }
    let mut graph = DiGraph::new();
    let mut ids: HashMap<ConfigNode, NodeIndex> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::new();
    for &q in a.initial() {
        let node = ConfigNode { state: q, stack: Vec::new() };
        let i = graph.add_node(node.clone());
        ids.insert(node.clone(), i);
        queue.push_back(node);
        initial.push(i);
    }
    while let Some(node) = queue.pop_front() {
        let from = ids[&node];
        let top = node.stack.last().map_or(Top::Bottom, |&s| Top::Symbol(s));
        for t in a.transitions().iter().filter(|t| t.from == node.state && t.top == top) {
            let mut stack = node.stack.clone();
            if top != Top::Bottom {
                stack.pop();
            }
            stack.extend_from_slice(&t.push);
            if stack.len() > height {
                continue;
            }
            let weight = match rule {
                CostRule::Letter(lc) => lc.require(a.letter_name(t.letter))?.clone(),
                CostRule::Stack(c) => Rational::from_integer(c.cost_of(&stack)?.into()),
            };
            let target = ConfigNode { state: t.to, stack };
            let to = match ids.get(&target) {
                Some(&i) => i,
                None => {
                    let i = graph.add_node(target.clone());
                    ids.insert(target.clone(), i);
                    queue.push_back(target);
                    i
                }
            };
            graph.add_edge(from, to, weight);
        }
    }
    Ok(ConfigGraph { graph, initial, height })
}

/// Minimum cycle mean over the strongly connected components reachable from
/// `roots` that contain a vertex satisfying `accepting` and at least one edge.
/// `+inf` when there is none.
pub fn min_mean_buchi<N>(
    graph: &DiGraph<N, Rational>,
    roots: &[NodeIndex],
    accepting: impl Fn(NodeIndex) -> bool,
) -> ExtendedRational {
    let mut seen = vec![false; graph.node_count()];
    let mut stack: Vec<NodeIndex> = roots.to_vec();
    for r in roots {
        seen[r.index()] = true;
    }
    while let Some(v) = stack.pop() {
        for w in graph.neighbors_directed(v, Direction::Outgoing) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                stack.push(w);
            }
        }
    }
    let mut best: Option<Rational> = None;
    for scc in tarjan_scc(graph) {
        if !seen[scc[0].index()] || !scc.iter().any(|&v| accepting(v)) {
            continue;
        }
        if let Some(mu) = karp(graph, &scc) {
            if best.as_ref().is_none_or(|b| &mu < b) {
                best = Some(mu);
            }
        }
    }
    best.map_or(ExtendedRational::PosInf, ExtendedRational::Finite)
}

/// Karp's minimum mean cycle on one strongly connected component.
fn karp<N>(graph: &DiGraph<N, Rational>, scc: &[NodeIndex]) -> Option<Rational> {
    let k = scc.len();
    let local: HashMap<NodeIndex, usize> = scc.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(usize, usize, &Rational)> = scc
        .iter()
        .flat_map(|&v| graph.edges_directed(v, Direction::Outgoing))
        .filter_map(|e| Some((local[&e.source()], *local.get(&e.target())?, e.weight())))
        .collect();
    if edges.is_empty() {
        return None;
    }
    // d[j][v]: least weight of a walk of exactly j edges from vertex 0 to v.
    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; k]; k + 1];
    d[0][0] = Some(Rational::from_integer(0.into()));
    for j in 1..=k {
        for &(u, v, w) in &edges {
            if let Some(du) = &d[j - 1][u] {
                let cand = du + w;
                if d[j][v].as_ref().is_none_or(|dv| &cand < dv) {
                    d[j][v] = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..k {
        let Some(dk) = &d[k][v] else { continue };
        let mut worst: Option<Rational> = None;
        for (j, dj) in d.iter().enumerate().take(k) {
            if let Some(dj) = &dj[v] {
                let m = (dk - dj) / Rational::from_integer(((k - j) as i64).into());
                if worst.as_ref().is_none_or(|x| &m > x) {
                    worst = Some(m);
                }
            }
        }
        if let Some(m) = worst {
            if best.as_ref().is_none_or(|b| &m < b) {
                best = Some(m);
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for OracleAnswer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleAnswer::Yes => "YES",
            OracleAnswer::No => "NO",
            OracleAnswer::Unknown => "UNKNOWN",
        })
    }
}

/// Checks the threshold on runs of stack height at most `height`. A run of
/// bounded height witnesses a YES for both limit modes. A failure is only
/// conclusive when the automaton never pushes.
pub fn oracle_decide(a: &Pda, rule: CostRule<'_>, th: &Threshold, height: usize) -> Result<OracleAnswer, ModelError> {
    let g = bounded_config_graph(a, rule, height)?;
    let value = min_mean_buchi(&g.graph, &g.initial, |v| a.is_accepting(g.graph[v].state));
    let yes = match &value {
        ExtendedRational::Finite(m) => th.holds(m),
        ExtendedRational::NegInf => true,
        ExtendedRational::PosInf => false,
    };
    Ok(if yes {
        OracleAnswer::Yes
    } else if a.is_stackless() {
        OracleAnswer::No
    } else {
        OracleAnswer::Unknown
    })
}
