mod common;

use common::laws::{category_laws, decomposition_law, enumeration_agrees, pullback_law};
use common::{contexts, shapes, Arrows};
use tpc_core::category::{cartesian_lift, meet_context, normalize_initial_segment, ExtSquare, GeneralExtension};
use tpc_core::context::{Assignment, AssignmentClass, Context};

#[test]
fn shape_counts() {
    // 1 empty, 2 singletons, 6 of length two, 16 of length three.
    assert_eq!(shapes(3).len(), 25);
    assert_eq!(shapes(0).len(), 1);
    for c in contexts(4) {
        assert!(Context::new(c.entries().to_vec()).is_ok());
    }
}

#[test]
fn checker_matches_oracle() {
    let o = enumeration_agrees(3);
    assert!(o.passed(), "{}", o.summary());
}

#[test]
fn category_laws_up_to_three_entries() {
    let arrows = Arrows::enumerate(3);
    assert!(arrows.count() > 100);
    let o = category_laws(&arrows);
    assert!(o.passed(), "{}", o.summary());
}

#[test]
fn decomposition_up_to_four_entries() {
    let arrows = Arrows::enumerate(4);
    let o = decomposition_law(&arrows);
    assert!(o.checked > 1000, "{}", o.summary());
    assert!(o.passed(), "{}", o.summary());
}

#[test]
fn lifts_are_pullbacks() {
    let arrows = Arrows::enumerate(3);
    let (o, stats) = pullback_law(&arrows, 7, 25);
    assert!(o.passed(), "{}", o.summary());
    assert!(stats.with_new_entries > 0 && stats.with_fresh_labels > 0, "{stats:?}");
    assert!(stats.competitors > 100, "{stats:?}");
}

#[test]
fn normalization_is_an_isomorphism() {
    let arrows = Arrows::enumerate(4);
    for (_, _, a) in arrows.all() {
        if !a.is_extension() {
            continue;
        }
        let (normal, iso) = normalize_initial_segment(a).unwrap();
        assert!(Context::new(normal.entries().to_vec()).is_ok());
        assert!(a.target().entries() == &normal.entries()[..a.target().len()]);
        let inv = iso.inverse().expect("isomorphism");
        assert_eq!(iso.compose(&inv).unwrap(), Assignment::identity(a.source().clone()));
        assert_eq!(inv.compose(&iso).unwrap(), Assignment::identity(normal.clone()));
    }
}

#[test]
fn meet_is_greatest_common_sub_context() {
    let all = contexts(3);
    for a in &all {
        for b in &all {
            let m = meet_context(a, b);
            assert!(m.is_sub_context_of(a) && m.is_sub_context_of(b));
            for c in &all {
                if c.is_sub_context_of(a) && c.is_sub_context_of(b) {
                    assert!(c.is_sub_context_of(&m), "{c} is below {a} and {b} but not {m}");
                }
            }
        }
    }
}

#[test]
fn cod_is_a_functor() {
    let arrows = Arrows::enumerate(2);
    let exts: Vec<GeneralExtension> = arrows.general_extensions().collect();
    for a in &exts {
        let id = ExtSquare::identity(a);
        assert_eq!(*id.cod(), Assignment::identity(a.cod().clone()));
        for (_, u) in arrows
            .all()
            .filter(|(_, j, _)| arrows.contexts[*j] == *a.cod())
            .map(|(i, _, u)| (i, u))
        {
            let first = cartesian_lift(u, a).unwrap();
            for (_, v) in arrows
                .all()
                .filter(|(_, j, _)| *arrows.contexts[*j] == **u.source())
                .map(|(i, _, v)| (i, v))
            {
                let second = cartesian_lift(v, &first.lifted).unwrap();
                let both = first.square().compose(&second.square()).unwrap();
                assert!(both.commutes());
                assert_eq!(*both.cod(), u.compose(v).unwrap());
            }
        }
    }
}

#[test]
fn lifting_along_general_extensions_stays_in_e() {
    let arrows = Arrows::enumerate(3);
    let exts: Vec<GeneralExtension> = arrows.general_extensions().collect();
    let mut checked = 0;
    for a in exts.iter().filter(|a| !a.cod().is_empty()) {
        for u in exts.iter().filter(|u| u.cod() == a.cod()) {
            let lift = cartesian_lift(u, a).unwrap();
            assert!(lift.top.is_general_extension(), "{u:?} over {a:?}");
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn classification_is_consistent() {
    let arrows = Arrows::enumerate(3);
    for (i, j, a) in arrows.all() {
        let class = a.classify();
        assert_eq!(class.is_general_extension(), a.is_general_extension());
        assert_eq!(class == AssignmentClass::Diagonal, i == j && a.is_diagonal());
        if class == AssignmentClass::Renaming {
            assert!(a.is_isomorphism());
        }
        if a.is_isomorphism() {
            assert_eq!(arrows.contexts[i].len(), arrows.contexts[j].len());
        }
    }
}
