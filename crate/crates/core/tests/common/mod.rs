//! Shared fixtures: a small signature whose contexts and nominal assignments
//! can be listed exhaustively, with a typing check written independently of
//! the library's checker.

#![allow(dead_code)]

pub mod laws;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use tpc_core::category::GeneralExtension;
use tpc_core::context::{Assignment, Context, Entry};
use tpc_core::kernel::{Expr, Label};

pub const TYPES: [&str; 2] = ["A", "B"];
pub const CONSTANTS: [&str; 2] = ["c", "d"];

/// A context as `(label, classifier)` where the classifier is `None` for
/// `type` and `Some(T)` for a constant of type `T`.
pub type Shape = Vec<(&'static str, Option<&'static str>)>;

/// Every well-formed shape with at most `max` entries over two type labels
/// and two constant labels.
pub fn shapes(max: usize) -> Vec<Shape> {
    fn go(max: usize, cur: &mut Shape, out: &mut Vec<Shape>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        let used = |l: &str, cur: &Shape| cur.iter().any(|(x, _)| *x == l);
        for t in TYPES {
            if !used(t, cur) {
                cur.push((t, None));
                go(max, cur, out);
                cur.pop();
            }
        }
        for c in CONSTANTS {
            if used(c, cur) {
                continue;
            }
            let declared: Vec<&'static str> = cur.iter().filter(|(_, k)| k.is_none()).map(|(l, _)| *l).collect();
            for t in declared {
                cur.push((c, Some(t)));
                go(max, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(max, &mut Vec::new(), &mut out);
    out
}

pub fn to_context(shape: &Shape) -> Arc<Context> {
    let entries = shape
        .iter()
        .map(|(l, k)| {
            let classifier = match k {
                None => Expr::Universe,
                Some(t) => Expr::label(t),
            };
            Entry::new(*l, classifier)
        })
        .collect();
    Arc::new(Context::new(entries).expect("enumerated shapes are well-formed"))
}

pub fn contexts(max: usize) -> Vec<Arc<Context>> {
    shapes(max).iter().map(to_context).collect()
}

/// Independent oracle: is `choice` (one source label per target entry) a
/// well-typed nominal assignment `source → target`?
pub fn oracle_accepts(source: &Shape, target: &Shape, choice: &[&'static str]) -> bool {
    let src: BTreeMap<&str, Option<&str>> = source.iter().copied().collect();
    let mut image: BTreeMap<&str, &str> = BTreeMap::new();
    for ((y, k), x) in target.iter().zip(choice) {
        let Some(&xk) = src.get(x) else { return false };
        let ok = match (k, xk) {
            (None, None) => true,
            (Some(t), Some(xt)) => image.get(t) == Some(&xt),
            _ => false,
        };
        if !ok {
            return false;
        }
        image.insert(y, x);
    }
    true
}

/// All label choices the oracle accepts.
pub fn oracle_choices(source: &Shape, target: &Shape) -> Vec<Vec<&'static str>> {
    let labels: Vec<&'static str> = source.iter().map(|(l, _)| *l).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        i: usize,
        source: &Shape,
        target: &Shape,
        labels: &[&'static str],
        cur: &mut Vec<&'static str>,
        out: &mut Vec<Vec<&'static str>>,
    ) {
        if i == target.len() {
            if oracle_accepts(source, target, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for l in labels {
            cur.push(l);
            go(i + 1, source, target, labels, cur, out);
            cur.pop();
        }
    }
    go(0, source, target, &labels, &mut cur, &mut out);
    out
}

pub fn assignment(source: &Arc<Context>, target: &Arc<Context>, choice: &[&str]) -> Assignment {
    let labels: Vec<Label> = choice.iter().map(Label::new).collect();
    Assignment::nominal(source.clone(), target.clone(), &labels).expect("oracle-approved choice")
}

/// Every nominal assignment between contexts of at most `max` entries,
/// grouped by (source index, target index).
pub struct Arrows {
    pub shapes: Vec<Shape>,
    pub contexts: Vec<Arc<Context>>,
    pub hom: BTreeMap<(usize, usize), Vec<Assignment>>,
}

impl Arrows {
    pub fn enumerate(max: usize) -> Self {
        let shapes = shapes(max);
        let contexts: Vec<Arc<Context>> = shapes.iter().map(to_context).collect();
        let mut hom = BTreeMap::new();
        for (i, s) in shapes.iter().enumerate() {
            for (j, t) in shapes.iter().enumerate() {
                let arrows = oracle_choices(s, t)
                    .iter()
                    .map(|c| assignment(&contexts[i], &contexts[j], c))
                    .collect();
                hom.insert((i, j), arrows);
            }
        }
        Arrows { shapes, contexts, hom }
    }

    pub fn all(&self) -> impl Iterator<Item = (usize, usize, &Assignment)> + '_ {
        self.hom
            .iter()
            .flat_map(|(&(i, j), v)| v.iter().map(move |a| (i, j, a)))
    }

    pub fn from(&self, i: usize) -> impl Iterator<Item = (usize, &Assignment)> + '_ {
        self.hom
            .range((i, 0)..(i, usize::MAX))
            .flat_map(|(&(_, j), v)| v.iter().map(move |a| (j, a)))
    }

    pub fn general_extensions(&self) -> impl Iterator<Item = GeneralExtension> + '_ {
        self.all().filter_map(|(_, _, a)| GeneralExtension::try_from(a.clone()).ok())
    }

    pub fn count(&self) -> usize {
        self.hom.values().map(Vec::len).sum()
    }
}

/// Every nominal assignment `source → target`, by brute force over labels.
pub fn nominal_arrows(source: &Arc<Context>, target: &Arc<Context>) -> Vec<Assignment> {
    let labels: Vec<Label> = source.labels().cloned().collect();
    let n = target.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    if n > 0 && labels.is_empty() {
        return out;
    }
    loop {
        let choice: Vec<Label> = idx.iter().map(|&i| labels[i].clone()).collect();
        if let Ok(a) = Assignment::nominal(source.clone(), target.clone(), &choice) {
            out.push(a);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < labels.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_file(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

/// The well-formed corpus files.
pub const CORPUS: [&str; 4] = ["algebra.tpc", "hierarchy.tpc", "ring.tpc", "compat.tpc"];

pub fn strip_whitespace(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}
