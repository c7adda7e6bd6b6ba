//! Exhaustive and randomized checks of the categorical laws, shared by the
//! property tests and the acceptance suite. Each returns the number of cases
//! checked and a description of every violation.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tpc_core::category::{cartesian_lift, decompose, is_pullback_square, ExtSquare, GeneralExtension};
use tpc_core::context::{Assignment, AssignmentClass, LabelPermutation};
use tpc_core::kernel::Label;

use super::{nominal_arrows, oracle_accepts, shapes, to_context, Arrows, Shape};

#[derive(Debug, Default)]
pub struct Outcome {
    pub checked: usize,
    pub violations: usize,
    pub examples: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < 10 {
                self.examples.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} checks, {} violations", self.checked, self.violations);
        if !self.examples.is_empty() {
            s.push_str(": ");
            s.push_str(&self.examples.join("; "));
        }
        s
    }
}

fn is_sub_shape(inner: &Shape, outer: &Shape) -> bool {
    inner.iter().all(|e| outer.contains(e))
}

/// The library's checker agrees with the oracle on every label choice.
pub fn enumeration_agrees(max: usize) -> Outcome {
    let mut out = Outcome::default();
    let all = shapes(max);
    for s in &all {
        let src = to_context(s);
        for t in &all {
            let tgt = to_context(t);
            let labels: Vec<&'static str> = s.iter().map(|(l, _)| *l).collect();
            let mut idx = vec![0usize; t.len()];
            if !t.is_empty() && labels.is_empty() {
                out.check(nominal_arrows(&src, &tgt).is_empty(), || "arrow out of the empty context".into());
                continue;
            }
            loop {
                let choice: Vec<&'static str> = idx.iter().map(|&i| labels[i]).collect();
                let lib = Assignment::nominal(
                    src.clone(),
                    tgt.clone(),
                    &choice.iter().map(Label::new).collect::<Vec<_>>(),
                )
                .is_ok();
                out.check(lib == oracle_accepts(s, t, &choice), || {
                    format!("checker and oracle disagree on {choice:?} : {src} → {tgt}")
                });
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < labels.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
    }
    out
}

/// Associativity, identities, invertible renamings and unique extensions.
pub fn category_laws(arrows: &Arrows) -> Outcome {
    let mut out = Outcome::default();
    let n = arrows.contexts.len();
    for (i, j, f) in arrows.all() {
        let left = Assignment::identity(arrows.contexts[j].clone()).compose(f);
        let right = f.compose(&Assignment::identity(arrows.contexts[i].clone()));
        out.check(left.as_ref() == Ok(f) && right.as_ref() == Ok(f), || format!("identity law fails for {f}"));
    }
    // h ∘ (g ∘ f) = (h ∘ g) ∘ f over all composable triples.
    for (_, j, f) in arrows.all() {
        for (k, g) in arrows.from(j) {
            let gf = g.compose(f).expect("composable");
            out.check(gf.validate().is_ok(), || format!("composite {g} ∘ {f} is ill-typed"));
            for (_, h) in arrows.from(k) {
                let a = h.compose(&gf).expect("composable");
                let b = h.compose(g).expect("composable").compose(f).expect("composable");
                out.check(a == b, || format!("associativity fails for {h}, {g}, {f}"));
            }
        }
    }
    for (_, _, f) in arrows.all() {
        if f.classify() != AssignmentClass::Renaming {
            continue;
        }
        let ok = f.inverse().is_some_and(|g| {
            f.compose(&g).ok() == Some(Assignment::identity(f.target().clone()))
                && g.compose(f).ok() == Some(Assignment::identity(f.source().clone()))
        });
        out.check(ok, || format!("renaming {f} has no inverse"));
    }
    let labels = ["A", "B", "c", "d"];
    for ctx in &arrows.contexts {
        for a in labels {
            for b in labels {
                let pi = LabelPermutation::swap(Label::new(a), Label::new(b));
                let r = Assignment::renaming(&pi, ctx.clone());
                let back = Assignment::renaming(&pi.inverse(), r.source().clone());
                let ok = r.validate().is_ok()
                    && r.is_renaming()
                    && r.compose(&back).ok() == Some(Assignment::identity(ctx.clone()))
                    && back.compose(&r).ok() == Some(Assignment::identity(r.source().clone()));
                out.check(ok, || format!("I_{pi}({ctx}) is not invertible"));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let count = arrows.hom[&(i, j)].iter().filter(|a| a.is_extension()).count();
            let expected = usize::from(is_sub_shape(&arrows.shapes[j], &arrows.shapes[i]));
            out.check(count == expected, || {
                format!(
                    "{count} extensions {} → {}, expected {expected}",
                    arrows.contexts[i], arrows.contexts[j]
                )
            });
        }
    }
    out
}

/// `ren ∘ ext = a`, `ext` an extension and `ren` a renaming, for every
/// general extension.
pub fn decomposition_law(arrows: &Arrows) -> Outcome {
    let mut out = Outcome::default();
    for a in arrows.general_extensions() {
        match decompose(&a) {
            Ok((ext, ren)) => {
                let ok = ren.compose(&ext).as_ref() == Ok(a.assignment())
                    && ext.is_diagonal()
                    && ext.is_extension()
                    && ren.is_renaming()
                    && ext.validate().is_ok()
                    && ren.validate().is_ok();
                out.check(ok, || format!("bad decomposition of {a:?}: {ext} then {ren}"));
            }
            Err(e) => out.check(false, || format!("decompose({a:?}) failed: {e}")),
        }
    }
    out
}

#[derive(Debug, Default)]
pub struct PullbackStats {
    pub cospans: usize,
    pub with_new_entries: usize,
    pub with_fresh_labels: usize,
    pub competitors: usize,
}

/// Random cospans `Γ −u→ Δ ←a− Δ⁺`: the canonical lift is a pullback, and
/// every commuting cone from a small context factors through it uniquely.
pub fn pullback_law(arrows: &Arrows, seed: u64, cospans: usize) -> (Outcome, PullbackStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Outcome::default();
    let mut stats = PullbackStats::default();
    let exts: Vec<GeneralExtension> = arrows.general_extensions().filter(|a| a.dom().len() > a.cod().len()).collect();
    let cones_from: Vec<usize> = (0..arrows.contexts.len()).collect();
    while stats.cospans < cospans {
        let a = exts.choose(&mut rng).expect("some proper general extensions").clone();
        let j = arrows.contexts.iter().position(|c| c == a.cod()).expect("enumerated");
        let into: Vec<&Assignment> = arrows
            .all()
            .filter(|&(_, t, _)| t == j)
            .map(|(_, _, u)| u)
            .collect();
        let u = (*into.choose(&mut rng).expect("identity at least")).clone();
        stats.cospans += 1;
        let lift = match cartesian_lift(&u, &a) {
            Ok(l) => l,
            Err(e) => {
                out.check(false, || format!("lift of {a:?} along {u} failed: {e}"));
                continue;
            }
        };
        if !lift.tail().is_empty() {
            stats.with_new_entries += 1;
        }
        if lift.tail().iter().any(|(new, old)| new != old) {
            stats.with_fresh_labels += 1;
        }
        out.check(lift.square().commutes() && is_pullback_square(&lift.square()), || {
            format!("canonical square for {a:?} along {u} rejected")
        });
        if u.is_general_extension() {
            out.check(lift.top.is_general_extension(), || {
                format!("top of the lift along the general extension {u} is not one")
            });
        }
        let gamma = u.source().clone();
        let delta_plus = a.dom().clone();
        let mut seen = BTreeSet::new();
        for &p in &cones_from {
            let pctx = &arrows.contexts[p];
            let to_apex = nominal_arrows(pctx, &lift.apex);
            for p1 in nominal_arrows(pctx, &gamma) {
                for p2 in nominal_arrows(pctx, &delta_plus) {
                    if u.compose(&p1).ok() != a.compose(&p2).ok() {
                        continue;
                    }
                    stats.competitors += 1;
                    let med = lift.mediate(&p1, &p2);
                    let factoring: Vec<&Assignment> = to_apex
                        .iter()
                        .filter(|m| {
                            lift.lifted.compose(m).ok().as_ref() == Some(&p1)
                                && lift.top.compose(m).ok().as_ref() == Some(&p2)
                        })
                        .collect();
                    let ok = match &med {
                        Ok(m) => factoring.len() == 1 && factoring[0] == m,
                        Err(_) => false,
                    };
                    out.check(ok, || {
                        format!(
                            "cone {p1} / {p2} from {pctx}: mediator {:?}, {} factorizations",
                            med.as_ref().map(ToString::to_string),
                            factoring.len()
                        )
                    });
                    // The same cone seen as an arrow of general extensions.
                    if let (Ok(m), Ok(x)) = (&med, GeneralExtension::try_from(p1.clone())) {
                        if seen.insert((p, p1.to_string(), p2.to_string())) {
                            let v = Assignment::identity(gamma.clone());
                            let g = ExtSquare::new(p2.clone(), u.clone(), x.clone(), a.clone());
                            let via_e = g.and_then(|g| lift.mediating_arrow(x.assignment(), &g, &v));
                            out.check(via_e.as_ref() == Ok(m), || {
                                format!("mediating arrow for {x:?} disagrees with the cone mediator")
                            });
                        }
                    }
                }
            }
        }
    }
    (out, stats)
}
