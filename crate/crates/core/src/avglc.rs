//! Average letter cost over finite words: is `inf { avg lc(w) : w ∈ L }`
//! below (or at most) a threshold?
//!
//! With `lc^λ = lc − λ`, `avg lc(w) ⋈ λ` iff `lc^λ(w) ⋈ 0`. A strict
//! threshold holds iff some word has negative shifted cost. A non-strict one
//! holds iff some word has shifted cost at most 0, or some nonterminal has a
//! pump `A ⇒⁺ u_L A u_R` with `lc^λ(u_L u_R) ≤ 0`: repeating such a pump
//! drives the average down to at most `λ` even when no word attains it.

use crate::grammar::{cfg_nonempty, eliminate_epsilon, prune, pump_grammar_pair, to_cnf, Cfg};
use crate::mincost::{min_letter_cost, shifted_cost};
use crate::model::{Decision, LetterCost, ModelError, Problem, Relation, Threshold};

/// Decides `inf_{w ∈ L(cfg), w ≠ ε} avg lc(w) ⋈ λ`. The empty word has no
/// average and is ignored.
pub fn decide_avg_lc(cfg: &Cfg, lc: &LetterCost, th: &Threshold) -> Result<Decision, ModelError> {
    let answer = holds(cfg, lc, th)?;
    Ok(Decision::new(Problem::AvgLc, answer)
        .with_input("threshold", th)
        .with_input("nonterminals", cfg.nonterminals().len())
        .with_input("productions", cfg.productions().len()))
}

pub(crate) fn holds(cfg: &Cfg, lc: &LetterCost, th: &Threshold) -> Result<bool, ModelError> {
    let g = prune(&eliminate_epsilon(cfg));
    if !cfg_nonempty(&g) {
        return Err(ModelError::EmptyLanguage("the grammar derives no nonempty word".into()));
    }
    let shifted = shifted_cost(lc, &th.bound);
    let min = min_letter_cost(&g, &shifted)?;
    match th.relation {
        Relation::Strict => Ok(min.is_negative()),
        Relation::NonStrict => {
            if min.is_nonpositive() {
                return Ok(true);
            }
            let cnf = to_cnf(&g);
            for a in 0..cnf.nonterminals().len() {
                let pump = pump_grammar_pair(&cnf, a)?;
                if cfg_nonempty(&pump) && min_letter_cost(&pump, &shifted)?.is_nonpositive() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rational;

    #[test]
    fn finite_language() {
        let g = Cfg::from_rules("S", &[("S", "a"), ("S", "b b")]);
        let lc = LetterCost::from_integers(&[("a", 3), ("b", 1)]);
        assert!(decide_avg_lc(&g, &lc, &Threshold::le_int(1)).unwrap().answer);
        assert!(!decide_avg_lc(&g, &lc, &Threshold::lt_int(1)).unwrap().answer);
    }

    #[test]
    fn infimum_reached_only_in_the_limit() {
        let g = Cfg::from_rules("S", &[("S", "a"), ("S", "S b")]);
        let lc = LetterCost::from_integers(&[("a", 10), ("b", 1)]);
        assert!(decide_avg_lc(&g, &lc, &Threshold::le_int(1)).unwrap().answer);
        assert!(!decide_avg_lc(&g, &lc, &Threshold::lt_int(1)).unwrap().answer);
        assert!(decide_avg_lc(&g, &lc, &Threshold::lt(Rational::new(11.into(), 10.into())))
            .unwrap()
            .answer);
    }

    #[test]
    fn constant_costs() {
        let g = Cfg::from_rules("S", &[("S", "a S b"), ("S", "c")]);
        let lam = Rational::new(7.into(), 3.into());
        let lc = LetterCost::from_pairs([("a", lam.clone()), ("b", lam.clone()), ("c", lam.clone())]);
        assert!(decide_avg_lc(&g, &lc, &Threshold::le(lam.clone())).unwrap().answer);
        assert!(!decide_avg_lc(&g, &lc, &Threshold::lt(lam)).unwrap().answer);
    }

    #[test]
    fn epsilon_only_is_an_error() {
        let g = Cfg::from_rules("S", &[("S", "")]);
        let lc = LetterCost::new();
        assert!(matches!(
            decide_avg_lc(&g, &lc, &Threshold::le_int(0)),
            Err(ModelError::EmptyLanguage(_))
        ));
    }
}
