use proptest::prelude::*;
use wfltl::workflow::{
    parse_workflow, validate, ExceptionDuration, ExceptionOrigin, ExceptionRole, PlaceKind,
    StructuralViolation, Workflow, WorkflowParseError,
};

fn case_study() -> Workflow {
    parse_workflow(include_str!("../data/order.wf")).unwrap()
}

fn names(set: &std::collections::BTreeSet<String>) -> Vec<&str> {
    set.iter().map(String::as_str).collect()
}

#[test]
fn case_study_declares_the_expected_roles() {
    let w = case_study();
    assert!(validate(&w).is_empty());
    assert_eq!(w.activities().count(), 10);
    assert_eq!(names(w.throw_set("ICC")), ["hf", "sf"]);
    assert_eq!(names(w.throw_set("Ship")), ["tf"]);
    assert_eq!(names(w.catch_set("Recovery")), ["sf"]);
    assert_eq!(names(w.catch_set("Reject2")), ["tf"]);
    assert_eq!(names(w.probe_set("Bill")), ["hf", "sf", "tf"]);
    assert_eq!(names(w.probe_set("Ship")), ["hf"]);
    let dur = |e: &str| w.exception(e).unwrap().duration;
    assert_eq!(dur("hf"), ExceptionDuration::Permanent);
    assert_eq!(dur("sf"), ExceptionDuration::Permanent);
    assert_eq!(dur("tf"), ExceptionDuration::Punctual);
    for e in ["hf", "sf", "tf"] {
        assert_eq!(w.origin(e), ExceptionOrigin::Internal);
    }
}

#[test]
fn case_study_gateways_sit_where_the_fragment_needs_them() {
    let w = case_study();
    let kind = |p: &str| w.place(p).unwrap().kind;
    assert_eq!(kind("avail"), PlaceKind::Conditional);
    assert_eq!(kind("split"), PlaceKind::SplitJoin);
    assert_eq!(kind("join"), PlaceKind::SplitJoin);
    let ids = |ts: Vec<&wfltl::workflow::Transition>| -> Vec<String> {
        ts.iter().map(|t| t.id.to_string()).collect()
    };
    assert_eq!(ids(w.out_set("avail").unwrap()), ["t_yes", "t_no"]);
    assert_eq!(ids(w.in_set("split").unwrap()), ["t_yes"]);
    assert_eq!(ids(w.out_set("split").unwrap()), ["t1", "t2"]);
    assert_eq!(ids(w.in_set("Bill").unwrap()), ["t1"]);
    assert_eq!(ids(w.out_set("Bill").unwrap()), ["t3"]);
}

#[test]
fn smallest_workflow() {
    let w = parse_workflow("start start\nactivity A\nend end\ntrans t : start -> A\ntrans u : A -> end\n")
        .unwrap();
    assert_eq!(w.places().len(), 3);
    assert_eq!(w.transitions().len(), 2);
    assert!(validate(&w).is_empty());
}

#[test]
fn transition_named_after_a_place_is_rejected() {
    let err = parse_workflow("start s\nactivity A\nend e\ntrans A : s -> A\ntrans u : A -> e\n")
        .unwrap_err();
    assert!(matches!(err, WorkflowParseError::Duplicate { ref name, .. } if name == "A"), "{err}");
}

#[test]
fn end_with_outgoing_transition_is_one_violation() {
    let w = parse_workflow(
        "start s\nactivity A\nend e\ntrans a : s -> A\ntrans b : A -> e\ntrans c : e -> A\n",
    )
    .unwrap();
    assert_eq!(validate(&w), [StructuralViolation::EndHasOutgoing("e".into())]);
}

#[test]
fn in_and_out_sets_partition_the_transitions() {
    let w = case_study();
    for t in w.transitions() {
        let outs = w.places().iter().filter(|p| w.out_set(p.id.as_str()).unwrap().contains(&t)).count();
        let ins = w.places().iter().filter(|p| w.in_set(p.id.as_str()).unwrap().contains(&t)).count();
        assert_eq!((outs, ins), (1, 1), "{}", t.id);
    }
}

const KINDS: [PlaceKind; 5] = [
    PlaceKind::Activity,
    PlaceKind::Conditional,
    PlaceKind::SplitJoin,
    PlaceKind::Start,
    PlaceKind::End,
];

prop_compose! {
    fn arbitrary_workflow()(
        kinds in prop::collection::vec(0usize..5, 1..8),
        edges in prop::collection::vec((0usize..8, 0usize..8), 0..12),
        excs in prop::collection::vec(any::<bool>(), 0..4),
        roles in prop::collection::vec((0usize..3, 0usize..8, 0usize..4), 0..8),
    ) -> Workflow {
        let mut b = Workflow::builder();
        for (i, k) in kinds.iter().enumerate() {
            b = b.place(&format!("P{i}"), KINDS[*k]);
        }
        for (i, (s, t)) in edges.iter().enumerate() {
            b = b.transition(&format!("t{i}"), &format!("P{}", s % kinds.len()), &format!("P{}", t % kinds.len()));
        }
        for (i, permanent) in excs.iter().enumerate() {
            let d = if *permanent { ExceptionDuration::Permanent } else { ExceptionDuration::Punctual };
            b = b.exception(&format!("e{i}"), d);
        }
        if !excs.is_empty() {
            for (r, p, e) in roles {
                let name = format!("e{}", e % excs.len());
                b = b.role(ExceptionRole::ALL[r], &format!("P{}", p % kinds.len()), &[name.as_str()]);
            }
        }
        b.build().unwrap()
    }
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(w in arbitrary_workflow()) {
        let text = w.to_string();
        prop_assert_eq!(parse_workflow(&text).unwrap(), w);
    }
}
