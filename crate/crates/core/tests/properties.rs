mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use common::contexts;
use tpc_core::category::meet_context;
use tpc_core::combinators::{flatten, load};
use tpc_core::context::{Assignment, Context, Entry, LabelPermutation};
use tpc_core::kernel::{check_classifier, parse_expr, Expr, Label, Sort, Substitution};

fn signature() -> Context {
    Context::new(vec![
        Entry::new("U", Expr::Universe),
        Entry::new("*", parse_expr("(U,U) -> U").unwrap()),
        Entry::new("e", parse_expr("U").unwrap()),
        Entry::new("f", parse_expr("U -> U").unwrap()),
    ])
    .unwrap()
}

fn term(bound: usize, size: u32) -> BoxedStrategy<Expr> {
    let mut leaves: Vec<Expr> = vec![Expr::label("e")];
    leaves.extend((0..bound).map(Expr::Bound));
    let leaf = proptest::sample::select(leaves).boxed();
    if size == 0 {
        return leaf;
    }
    let sub = term(bound, size - 1);
    prop_oneof![
        2 => leaf,
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Expr::infix("*", a, b)),
        1 => sub.prop_map(|a| Expr::apply(Expr::label("f"), vec![a])),
    ]
    .boxed()
}

fn prop_expr(bound: usize, size: u32) -> BoxedStrategy<Expr> {
    let eq = (term(bound, 2), term(bound, 2)).prop_map(|(a, b)| Expr::eq(a, b)).boxed();
    if size == 0 {
        return eq;
    }
    let sub = prop_expr(bound, size - 1);
    let bin = |k: u8| {
        (sub.clone(), sub.clone()).prop_map(move |(a, b)| match k {
            0 => Expr::And(Box::new(a), Box::new(b)),
            1 => Expr::Or(Box::new(a), Box::new(b)),
            _ => Expr::Implies(Box::new(a), Box::new(b)),
        })
    };
    prop_oneof![
        2 => eq,
        1 => bin(0),
        1 => bin(1),
        1 => bin(2),
        1 => sub.clone().prop_map(|a| Expr::Not(Box::new(a))),
        2 => (prop_expr(bound + 1, size - 1), proptest::sample::select(vec!["x", "y", "z"]))
            .prop_map(|(body, n)| Expr::forall(n, Expr::label("U"), body)),
    ]
    .boxed()
}

fn closed_prop() -> BoxedStrategy<Expr> {
    prop_expr(0, 3)
}

const POOL: [&str; 6] = ["A", "B", "c", "d", "p", "q"];

fn permutation() -> impl Strategy<Value = LabelPermutation> {
    Just(POOL.to_vec()).prop_shuffle().prop_map(|shuffled| {
        LabelPermutation::complete(POOL.iter().zip(shuffled).map(|(a, b)| (Label::new(a), Label::new(b)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_round_trips(p in closed_prop()) {
        let printed = p.to_string();
        prop_assert_eq!(parse_expr(&printed).unwrap(), p.clone(), "{}", printed);
        prop_assert_eq!(check_classifier(&signature(), &p), Ok(Sort::Prop));
    }

    #[test]
    fn substitution_avoids_capture(p in closed_prop(), name in proptest::sample::select(vec!["x", "y", "x'"])) {
        let mut s = Substitution::new();
        s.insert(Label::new("e"), Expr::label(name));
        let q = p.substitute(&s);
        prop_assert_eq!(parse_expr(&q.to_string()).unwrap(), q.clone());
        prop_assert!(!q.mentions(&Label::new("e")));
        prop_assert_eq!(q.substitute(&Substitution::new()), q);
    }

    #[test]
    fn renamings_are_reversible(p in closed_prop()) {
        let pi = LabelPermutation::swap(Label::new("*"), Label::new("+"));
        let renamed = pi.act(&p);
        prop_assert_eq!(pi.inverse().act(&renamed), p.clone());
        prop_assert_eq!(parse_expr(&renamed.to_string()).unwrap(), renamed);
    }

    #[test]
    fn completed_permutations_are_bijections(
        pairs in proptest::collection::vec((proptest::sample::select(POOL.to_vec()), proptest::sample::select(POOL.to_vec())), 0..4)
    ) {
        let pairs: Vec<(Label, Label)> = pairs.into_iter().map(|(a, b)| (Label::new(a), Label::new(b))).collect();
        if let Ok(pi) = LabelPermutation::complete(pairs.clone()) {
            for (a, b) in &pairs {
                prop_assert_eq!(&pi.apply(a), b);
            }
            let images: BTreeSet<Label> = POOL.iter().map(|l| pi.apply(&Label::new(l))).collect();
            prop_assert_eq!(images.len(), POOL.len());
            prop_assert!(pi.inverse().then_after(&pi).is_identity());
        }
    }

    #[test]
    fn permuted_contexts_stay_well_formed(i in 0usize..200, pi in permutation()) {
        let all = contexts(4);
        let ctx = all[i % all.len()].clone();
        let moved = ctx.permute(&pi);
        prop_assert!(Context::new(moved.entries().to_vec()).is_ok());
        let r = Assignment::renaming(&pi, ctx.clone());
        prop_assert!(r.validate().is_ok());
        prop_assert_eq!(moved.permute(&pi.inverse()), (*ctx).clone());
    }

    #[test]
    fn meet_is_a_semilattice(i in 0usize..400, j in 0usize..400) {
        let all = contexts(4);
        let (a, b) = (&all[i % all.len()], &all[j % all.len()]);
        let ab = meet_context(a, b);
        let ba = meet_context(b, a);
        let set = |c: &Context| c.entries().iter().map(|e| format!("{}:{}", e.label, e.classifier)).collect::<BTreeSet<_>>();
        prop_assert_eq!(set(&ab), set(&ba));
        prop_assert_eq!(meet_context(a, a), (**a).clone());
        prop_assert_eq!(meet_context(a, &ab), ab.clone());
    }

    #[test]
    fn flattened_theories_reload(axioms in proptest::collection::vec(closed_prop(), 0..4)) {
        let mut src = String::from("T := Theory { U:type; *:(U,U) -> U; e:U; f:U -> U");
        for (k, a) in axioms.iter().enumerate() {
            src.push_str(&format!("; axiom a{k}: {a}"));
        }
        src.push_str(" }\nS := T extended by { g:U }");
        let loaded = load(&src);
        prop_assert!(loaded.diagnostics.is_empty(), "{:?}", loaded.diagnostics);
        for name in ["T", "S"] {
            let again = load(&flatten(&loaded.env, name).unwrap());
            prop_assert_eq!(
                again.env.get(name).map(|d| Arc::clone(&d.sem.context)),
                loaded.env.get(name).map(|d| Arc::clone(&d.sem.context))
            );
        }
    }
}
