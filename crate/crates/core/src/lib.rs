//! Average stack cost and average letter cost decisions for pushdown
//! automata over finite and infinite words.
//!
//! The entry points are [`asc::decide_iasc`] and [`asc::decide_sasc`] for
//! stack costs, [`avglc::decide_avg_lc`] for finite words,
//! [`omega::decide_avginf_lc`] and [`omega::decide_avgsup_lc`] for infinite
//! words, [`games::solve_wps_game`] for one-player weighted pushdown games and
//! [`art::decide_art`] for average response time. The [`oracle`] module holds
//! brute-force checks that do not share code with the decision procedures.

pub mod art;
pub mod asc;
pub mod avglc;
pub mod games;
pub mod grammar;
mod graph;
pub mod mincost;
pub mod model;
pub mod omega;
pub mod oracle;
pub mod samples;
mod saturation;
mod spine;
mod weight;

pub use mincost::ExtendedRational;
pub use model::{
    Configuration, Decision, LetterCost, ModelError, Mode, Pda, PdaBuilder, Problem, Rational,
    Relation, StackPricing, StateId, SymbolId, LetterId, Threshold, Top, Transition, Wps,
};

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-1.25"` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let mut den = BigInt::one();
    for _ in 0..frac.len() {
        den *= 10;
    }
    let r = Rational::new(num, den);
    Some(if neg { -r } else { r })
}
