//! Minimum letter cost over the words of a grammar.

use std::fmt;

use num_bigint::BigInt;

use crate::grammar::{prune, Cfg, GSym};
use crate::model::{LetterCost, ModelError, Rational};
use crate::weight::{with_fallback, Ext, Overflow, Scaled, Weight};

/// A rational extended with `-∞` and `+∞`, ordered `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedRational {
    NegInf,
    Finite(Rational),
    /// No word at all.
    PosInf,
}

impl ExtendedRational {
    pub fn is_negative(&self) -> bool {
        match self {
            ExtendedRational::NegInf => true,
            ExtendedRational::Finite(r) => r < &Rational::from_integer(0.into()),
            ExtendedRational::PosInf => false,
        }
    }

    pub fn is_nonpositive(&self) -> bool {
        match self {
            ExtendedRational::NegInf => true,
            ExtendedRational::Finite(r) => r <= &Rational::from_integer(0.into()),
            ExtendedRational::PosInf => false,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::NegInf => write!(f, "-inf"),
            ExtendedRational::Finite(r) => write!(f, "{r}"),
            ExtendedRational::PosInf => write!(f, "+inf"),
        }
    }
}

/// `lc^λ(a) = lc(a) − λ` for every letter.
pub fn shifted_cost(lc: &LetterCost, lambda: &Rational) -> LetterCost {
    LetterCost::from_pairs(lc.iter().map(|(a, c)| (a.clone(), c - lambda)))
}

/// Letter costs of the grammar's terminals, in terminal order. Terminals that
/// occur in no production may be missing from `lc`; they get cost 0.
pub(crate) fn terminal_costs(cfg: &Cfg, lc: &LetterCost) -> Result<Vec<Rational>, ModelError> {
    let used = crate::grammar::used_terminals(cfg);
    cfg.terminals()
        .iter()
        .enumerate()
        .map(|(i, a)| match lc.get(a) {
            Some(c) => Ok(c.clone()),
            None if !used.contains(&i) => Ok(Rational::from_integer(0.into())),
            None => Err(ModelError::MissingLetterCost { letter: a.clone() }),
        })
        .collect()
}

/// `inf { lc(w) : w ∈ L(cfg) }`: `+∞` for an empty language, `-∞` when
/// some pump lowers the cost without bound.
///
/// Values start from the all-terminal bodies and are relaxed in production
/// order for `N + 1` rounds, `N` being the number of nonterminals. A change in
/// the last round can only come from a cost-decreasing pump.
pub fn min_letter_cost(cfg: &Cfg, lc: &LetterCost) -> Result<ExtendedRational, ModelError> {
    let pruned;
    let g = if cfg.is_pruned() {
        cfg
    } else {
        pruned = prune(cfg);
        &pruned
    };
    let costs = terminal_costs(g, lc)?;
    if !g.nonempty() {
        return Ok(ExtendedRational::PosInf);
    }
    let scaled = Scaled::shifted(&costs, &Rational::from_integer(0.into()));
    let result = with_fallback(
        || relax::<i128>(g, &scaled.convert()?).map(|e| e.map(|w| w.to_big())),
        || relax::<BigInt>(g, &scaled.values).expect("big integers do not overflow"),
    );
    Ok(match result {
        Ext::NegInf => ExtendedRational::NegInf,
        Ext::Fin(w) => ExtendedRational::Finite(scaled.to_rational(&w)),
        Ext::PosInf => {
            debug_assert!(false, "pruned nonempty grammar without a finite value");
            ExtendedRational::PosInf
        }
    })
}

trait MapFin<W> {
    fn map<V>(self, f: impl Fn(W) -> V) -> Ext<V>;
}

impl<W> MapFin<W> for Ext<W> {
    fn map<V>(self, f: impl Fn(W) -> V) -> Ext<V> {
        match self {
            Ext::NegInf => Ext::NegInf,
            Ext::Fin(w) => Ext::Fin(f(w)),
            Ext::PosInf => Ext::PosInf,
        }
    }
}

fn body_value<W: Weight>(body: &[GSym], values: &[Ext<W>], costs: &[W]) -> Result<Ext<W>, Overflow> {
    let mut acc = Ext::Fin(W::zero());
    for s in body {
        let v = match *s {
            GSym::T(a) => Ext::Fin(costs[a].clone()),
            GSym::N(b) => values[b].clone(),
        };
        acc = acc.plus(&v)?;
    }
    Ok(acc)
}

fn relax<W: Weight>(g: &Cfg, costs: &[W]) -> Result<Ext<W>, Overflow> {
    let n = g.nonterminals().len();
    let mut values: Vec<Ext<W>> = vec![Ext::PosInf; n];
    for p in g.productions() {
        if p.body.iter().all(|s| matches!(s, GSym::T(_))) {
            let v = body_value(&p.body, &values, costs)?;
            if v < values[p.head] {
                values[p.head] = v;
            }
        }
    }
    for _round in 0..=n {
        let mut changed = false;
        for p in g.productions() {
            let v = body_value(&p.body, &values, costs)?;
            if v < values[p.head] {
                values[p.head] = v;
                changed = true;
            }
        }
        if !changed {
            return Ok(values[g.start()].clone());
        }
    }
    Ok(Ext::NegInf)
}
