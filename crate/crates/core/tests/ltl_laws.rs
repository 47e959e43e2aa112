mod common;

use common::{props, random_formula, random_trace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wfltl::ltl::{evaluate, evaluate_all, parse_formula, to_nnf, LassoTrace, LtlFormula as F};

fn equivalent_on(a: &F, b: &F, t: &LassoTrace, positions: usize) -> bool {
    let (va, vb) = (evaluate_all(a, t), evaluate_all(b, t));
    (0..positions).all(|i| va.get(i) == vb.get(i))
}

#[test]
fn nnf_preserves_meaning() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ps = props(3);
    for _ in 0..1000 {
        let f = random_formula(&mut rng, &ps, 4);
        let g = to_nnf(&f).to_formula();
        for _ in 0..100 {
            let t = random_trace(&mut rng, &ps, 4, 4);
            assert!(equivalent_on(&f, &g, &t, 11), "{f} vs {g} on {}", t.to_json());
        }
    }
}

#[test]
fn duality_and_expansion_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ps = props(3);
    for _ in 0..300 {
        let a = random_formula(&mut rng, &ps, 2);
        let b = random_formula(&mut rng, &ps, 2);
        let laws = [
            (
                F::not(F::until(a.clone(), b.clone())),
                F::release(F::not(a.clone()), F::not(b.clone())),
            ),
            (
                F::not(F::since(a.clone(), b.clone())),
                F::trigger(F::not(a.clone()), F::not(b.clone())),
            ),
            (F::eventually(a.clone()), F::until(F::True, a.clone())),
            (F::globally(a.clone()), F::release(F::False, a.clone())),
            (
                F::until(a.clone(), b.clone()),
                F::or(b.clone(), F::and(a.clone(), F::next(F::until(a.clone(), b.clone())))),
            ),
            (
                F::since(a.clone(), b.clone()),
                F::or(b.clone(), F::and(a.clone(), F::prev(F::since(a.clone(), b.clone())))),
            ),
        ];
        for _ in 0..20 {
            let t = random_trace(&mut rng, &ps, 4, 4);
            for (l, r) in &laws {
                assert!(equivalent_on(l, r, &t, 12), "{l} vs {r} on {}", t.to_json());
            }
            assert!(!evaluate(&F::prev(a.clone()), &t, 0));
        }
    }
}

#[test]
fn values_repeat_with_the_loop_after_enough_passes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ps = props(2);
    for _ in 0..500 {
        let f = random_formula(&mut rng, &ps, 4);
        let t = random_trace(&mut rng, &ps, 3, 4);
        let v = evaluate_all(&f, &t);
        let start = t.prefix_len() + t.loop_len() * f.depth();
        for i in start..start + 2 * t.loop_len() {
            assert_eq!(v.get(i), v.get(i + t.loop_len()), "{f} at {i} on {}", t.to_json());
        }
    }
}

#[test]
fn printing_then_parsing_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ps = props(3);
    for _ in 0..2000 {
        let f = random_formula(&mut rng, &ps, 5);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{f}");
    }
}

#[test]
fn golden_pretty_printing() {
    let text = include_str!("data/formulas.golden");
    let mut count = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let (input, expected) = line.split_once("==>").expect("`input ==> output`");
        let f = parse_formula(input.trim()).unwrap();
        assert_eq!(f.to_string(), expected.trim(), "pretty({})", input.trim());
        count += 1;
    }
    assert_eq!(count, 20);
}
