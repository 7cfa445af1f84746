//! Strongly connected components and cycle-sign queries on weighted graphs.

use std::collections::VecDeque;

use crate::weight::{Ext, Overflow, Weight};

/// Tarjan's algorithm without recursion. Returns the component index of each
/// vertex and the components themselves. Components come out in reverse
/// topological order: every edge leads to a component with an index no larger
/// than its source's.
pub(crate) fn tarjan(adj: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = comps.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = id;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(members);
            }
        }
    }
    (comp, comps)
}

/// Vertices reachable from `roots`.
pub(crate) fn reachable(adj: &[Vec<usize>], roots: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut work: Vec<usize> = Vec::new();
    for r in roots {
        if !seen[r] {
            seen[r] = true;
            work.push(r);
        }
    }
    while let Some(v) = work.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                work.push(w);
            }
        }
    }
    seen
}

/// Edge of a strongly connected graph given in local vertex numbers.
#[derive(Debug, Clone)]
pub(crate) struct WEdge<W> {
    pub from: usize,
    pub to: usize,
    pub weight: Ext<W>,
    /// Whether a cycle through this edge counts for the nonpositive query.
    pub bearing: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct CycleInfo {
    pub negative: bool,
    /// Some cycle of weight at most zero uses a bearing edge.
    pub nonpositive: bool,
}

/// Cycle signs of a strongly connected graph on `n` vertices. Edges of weight
/// `+∞` are ignored; an edge of weight `-∞` makes every cycle through it as
/// negative as desired.
pub(crate) fn cycle_info<W: Weight>(n: usize, edges: &[WEdge<W>]) -> Result<CycleInfo, Overflow> {
    let edges: Vec<&WEdge<W>> = edges.iter().filter(|e| e.weight != Ext::PosInf).collect();
    if edges.is_empty() {
        return Ok(CycleInfo::default());
    }
    let any_bearing = edges.iter().any(|e| e.bearing);
    if edges.iter().any(|e| e.weight == Ext::NegInf) {
        return Ok(CycleInfo {
            negative: true,
            nonpositive: any_bearing,
        });
    }
    let weight = |e: &WEdge<W>| match &e.weight {
        Ext::Fin(w) => w.clone(),
        _ => unreachable!(),
    };
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        out[e.from].push(i);
    }
    // Queue-based Bellman-Ford from a virtual source joined to every vertex.
    let mut dist = vec![W::zero(); n];
    let mut hops = vec![0usize; n];
    let mut queued = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        for &i in &out[u] {
            let e = edges[i];
            let cand = dist[u].checked_add(&weight(e))?;
            if cand < dist[e.to] {
                dist[e.to] = cand;
                hops[e.to] = hops[u] + 1;
                if hops[e.to] >= n {
                    return Ok(CycleInfo {
                        negative: true,
                        nonpositive: any_bearing,
                    });
                }
                if !queued[e.to] {
                    queued[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }
    }
    // With potentials `dist` every reduced weight is nonnegative, and a cycle
    // has weight zero exactly when all of its reduced weights vanish.
    let mut tight: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut tight_edges = Vec::new();
    for e in &edges {
        let reduced_zero = dist[e.from].checked_add(&weight(e))? == dist[e.to];
        if reduced_zero {
            tight[e.from].push(e.to);
            tight_edges.push(*e);
        }
    }
    let (comp, _) = tarjan(&tight);
    let nonpositive = tight_edges
        .iter()
        .any(|e| e.bearing && comp[e.from] == comp[e.to]);
    Ok(CycleInfo {
        negative: false,
        nonpositive,
    })
}
