//! Minimum costs and pump cycles of an ε-free grammar.
//!
//! A *spine edge* `A → X_j` comes from a rule `A → X_1 … X_n`; walking spine
//! edges from `A` back to `A` spells a derivation `A ⇒⁺ u_L A u_R`. Its *pair
//! weight* is the cheapest cost of the siblings `X_i` with `i ≠ j` and its
//! *left weight* that of the siblings with `i < j`. Cycles of spine edges are
//! therefore pumps, and the sign of their cheapest weight is what the average
//! cost conditions test.

use crate::graph::{cycle_info, tarjan, WEdge};
use crate::weight::{Ext, Overflow, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Item {
    Letter(usize),
    Nt(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct Rules {
    pub num_nts: usize,
    pub heads: Vec<usize>,
    pub bodies: Vec<Vec<Item>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct PumpFlags {
    /// A pump with `lc(u_L u_R) ≤ 0` and `u_L u_R ≠ ε`.
    pub pair_nonpos: bool,
    /// A pump with `lc(u_L) < 0`.
    pub left_neg: bool,
    /// A pump with `lc(u_L) ≤ 0` and `u_L ≠ ε`.
    pub left_nonpos: bool,
}

impl PumpFlags {
    fn or(self, o: Self) -> Self {
        PumpFlags {
            pair_nonpos: self.pair_nonpos || o.pair_nonpos,
            left_neg: self.left_neg || o.left_neg,
            left_nonpos: self.left_nonpos || o.left_nonpos,
        }
    }
}

/// Structure of the rules that does not depend on letter costs.
#[derive(Debug, Clone)]
pub(crate) struct Structure {
    rules: Rules,
    comp: Vec<usize>,
    comps: Vec<Vec<usize>>,
    by_head: Vec<Vec<usize>>,
    comp_children: Vec<Vec<usize>>,
    /// Position of each nonterminal inside its component.
    pos: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Analysis<W> {
    pub values: Vec<Ext<W>>,
    /// Pump flags of everything reachable from each nonterminal, itself included.
    pub reach: Vec<PumpFlags>,
}

impl Structure {
    /// Every nonterminal is expected to be productive.
    pub fn new(rules: Rules) -> Self {
        let n = rules.num_nts;
        let mut adj = vec![Vec::new(); n];
        let mut by_head = vec![Vec::new(); n];
        for (r, (&h, body)) in rules.heads.iter().zip(&rules.bodies).enumerate() {
            by_head[h].push(r);
            for it in body {
                if let Item::Nt(b) = *it {
                    adj[h].push(b);
                }
            }
        }
        let (comp, comps) = tarjan(&adj);
        let mut comp_children = vec![Vec::new(); comps.len()];
        for (h, succ) in adj.iter().enumerate() {
            for &b in succ {
                if comp[b] != comp[h] {
                    comp_children[comp[h]].push(comp[b]);
                }
            }
        }
        for c in comp_children.iter_mut() {
            c.sort_unstable();
            c.dedup();
        }
        let mut pos = vec![0; n];
        for members in &comps {
            for (i, &m) in members.iter().enumerate() {
                pos[m] = i;
            }
        }
        Structure {
            pos,
            rules,
            comp,
            comps,
            by_head,
            comp_children,
        }
    }

    fn body_value<W: Weight>(&self, body: &[Item], values: &[Ext<W>], letters: &[W], skip: Option<usize>, upto: usize) -> Result<Ext<W>, Overflow> {
        let mut acc = Ext::Fin(W::zero());
        for (i, it) in body.iter().enumerate().take(upto) {
            if Some(i) == skip {
                continue;
            }
            let v = match *it {
                Item::Letter(a) => Ext::Fin(letters[a].clone()),
                Item::Nt(b) => values[b].clone(),
            };
            acc = acc.plus(&v)?;
        }
        Ok(acc)
    }

    /// Values and pump flags under the letter weights `letters`.
    pub fn analyze<W: Weight>(&self, letters: &[W]) -> Result<Analysis<W>, Overflow> {
        let n = self.rules.num_nts;
        let mut values: Vec<Ext<W>> = vec![Ext::PosInf; n];
        let mut comp_flags = vec![PumpFlags::default(); self.comps.len()];
        for (ci, members) in self.comps.iter().enumerate() {
            // Inside one component a cheapest finite derivation repeats no
            // member along a path, so |C| rounds settle every finite value
            // and one more round proves it.
            let mut stable = false;
            for _ in 0..=members.len() {
                let mut changed = false;
                for &h in members {
                    for &r in &self.by_head[h] {
                        let body = &self.rules.bodies[r];
                        let v = self.body_value(body, &values, letters, None, body.len())?;
                        if v < values[h] {
                            values[h] = v;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    stable = true;
                    break;
                }
            }
            if !stable {
                for &h in members {
                    values[h] = Ext::NegInf;
                }
            }

            let local = self.local_flags(ci, members, &values, letters)?;
            comp_flags[ci] = self.comp_children[ci]
                .iter()
                .fold(local, |acc, &c| acc.or(comp_flags[c]));
        }
        let reach = (0..n).map(|a| comp_flags[self.comp[a]]).collect();
        Ok(Analysis { values, reach })
    }

    fn local_flags<W: Weight>(
        &self,
        ci: usize,
        members: &[usize],
        values: &[Ext<W>], letters: &[W]) -> Result<PumpFlags, Overflow> {
        let mut pair_edges = Vec::new();
        let mut left_edges = Vec::new();
        for &h in members {
            for &r in &self.by_head[h] {
                let body = &self.rules.bodies[r];
                for (j, it) in body.iter().enumerate() {
                    let Item::Nt(b) = *it else { continue };
                    if self.comp[b] != ci {
                        continue;
                    }
                    let to = self.pos[b];
                    pair_edges.push(WEdge {
                        from: self.pos[h],
                        to,
                        weight: self.body_value(body, values, letters, Some(j), body.len())?,
                        bearing: body.len() >= 2,
                    });
                    left_edges.push(WEdge {
                        from: self.pos[h],
                        to,
                        weight: self.body_value(body, values, letters, None, j)?,
                        bearing: j >= 1,
                    });
                }
            }
        }
        if pair_edges.is_empty() {
            return Ok(PumpFlags::default());
        }
        let pair = cycle_info(members.len(), &pair_edges)?;
        let left = cycle_info(members.len(), &left_edges)?;
        Ok(PumpFlags {
            pair_nonpos: pair.nonpositive,
            left_neg: left.negative,
            left_nonpos: left.nonpositive,
        })
    }
}
