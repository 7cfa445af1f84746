//! Small reference instances with known answers.

use crate::art::{ClientServerSpec, Guard, Label};
use crate::model::{LetterCost, Pda, StackPricing};

/// An automaton whose cheapest accepting runs have infimum average stack
/// cost 0 and supremum average stack cost 1.
///
/// From `A` it pushes `α`, grows a tower of `α`s in `U`, trades the top for a
/// single expensive `β`, and unwinds in `B` back to `A`.
pub fn e1() -> (Pda, StackPricing) {
    let mut b = Pda::builder(true);
    b.initial("A").accepting("A");
    b.state("U");
    b.state("B");
    b.transition("A", "a", None, "U", &["α"])
        .transition("U", "a", Some("α"), "U", &["α", "α"])
        .transition("U", "a", Some("α"), "B", &["β"])
        .transition("B", "a", Some("β"), "B", &[])
        .transition("B", "a", Some("β"), "A", &[])
        .transition("B", "a", Some("α"), "B", &["β"]);
    let pda = b.build();
    let pricing = StackPricing::from_names(&pda, &[("α", 0), ("β", 3)]).unwrap();
    (pda, pricing)
}

/// Automaton for `(0ⁿ2ⁿ)^ω` with `n ≥ 1`, and the cost map `lc(x) = x`.
pub fn zeros_twos() -> (Pda, LetterCost) {
    let mut b = Pda::builder(true);
    b.initial("f").accepting("f");
    b.transition("f", "0", None, "p", &["Y"])
        .transition("p", "0", Some("Y"), "p", &["Y", "Z"])
        .transition("p", "0", Some("Z"), "p", &["Z", "Z"])
        .transition("p", "2", Some("Z"), "q", &[])
        .transition("p", "2", Some("Y"), "f", &[])
        .transition("q", "2", Some("Z"), "q", &[])
        .transition("q", "2", Some("Y"), "f", &[]);
    (b.build(), LetterCost::from_integers(&[("0", 0), ("2", 2)]))
}

/// A server that answers every request on the next step.
pub fn immediate_grant() -> ClientServerSpec {
    let mut s = ClientServerSpec::new("s0");
    s.add("s0", Label::Request, Guard::Any, "s1");
    s.add("s1", Label::Grant, Guard::NonZero, "s0");
    s
}

/// A server that takes two requests and then grants both.
pub fn batch_grant() -> ClientServerSpec {
    let mut s = ClientServerSpec::new("s0");
    s.add("s0", Label::Request, Guard::Any, "s1");
    s.add("s1", Label::Request, Guard::Any, "s2");
    s.add("s2", Label::Grant, Guard::NonZero, "s3");
    s.add("s3", Label::Grant, Guard::NonZero, "s0");
    s
}

/// A server that either grants at once or lets requests pile up.
pub fn lazy_grant() -> ClientServerSpec {
    let mut s = ClientServerSpec::new("s0");
    s.add("s0", Label::Request, Guard::Any, "s1");
    s.add("s1", Label::Grant, Guard::NonZero, "s0");
    s.add("s1", Label::Request, Guard::Any, "s1");
    s.add("s1", Label::Null, Guard::Any, "s1");
    s
}

/// A server that accepts requests and never grants.
pub fn never_grant() -> ClientServerSpec {
    let mut s = ClientServerSpec::new("s0");
    s.add("s0", Label::Request, Guard::Any, "s0");
    s.add("s0", Label::Null, Guard::Any, "s0");
    s
}
