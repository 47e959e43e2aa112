#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wfltl::ltl::LtlFormula as F;

/// Random formula over `props` with operator nesting at most `depth`.
pub fn random_formula(rng: &mut ChaCha8Rng, props: &[&str], depth: usize) -> F {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => F::True,
            1 => F::False,
            _ => F::prop(*props.choose(rng).unwrap()),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, props, depth - 1);
    match rng.gen_range(0..13) {
        0 => F::not(sub(rng)),
        1 => F::and(sub(rng), sub(rng)),
        2 => F::or(sub(rng), sub(rng)),
        3 => F::implies(sub(rng), sub(rng)),
        4 => F::iff(sub(rng), sub(rng)),
        5 => F::next(sub(rng)),
        6 => F::prev(sub(rng)),
        7 => F::until(sub(rng), sub(rng)),
        8 => F::since(sub(rng), sub(rng)),
        9 => F::release(sub(rng), sub(rng)),
        10 => F::trigger(sub(rng), sub(rng)),
        11 => F::eventually(sub(rng)),
        _ => F::globally(sub(rng)),
    }
}

/// The proposition names `p`, `q`, `r` cut to `n`.
pub fn props(n: usize) -> Vec<&'static str> {
    ["p", "q", "r"][..n].to_vec()
}

/// Random lasso over `props` with the given maximal prefix and loop sizes.
pub fn random_trace(
    rng: &mut ChaCha8Rng,
    props: &[&str],
    max_prefix: usize,
    max_loop: usize,
) -> wfltl::ltl::LassoTrace {
    let row = |rng: &mut ChaCha8Rng| -> std::collections::BTreeSet<String> {
        props
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|p| p.to_string())
            .collect()
    };
    let n_prefix = rng.gen_range(0..=max_prefix);
    let n_loop = rng.gen_range(1..=max_loop);
    let prefix = (0..n_prefix).map(|_| row(rng)).collect();
    let cycle = (0..n_loop).map(|_| row(rng)).collect();
    wfltl::ltl::LassoTrace::new(prefix, cycle).unwrap()
}
