//! Reference implementations shared by the integration tests.

use workbench::ltl::{Formula, LassoModel};

/// Truth of `φ` at every position `0..len`, computed on the unrolled trace.
/// Positions past the prefix fold back into the loop; `len` must be at least
/// `|prefix| + |loop|`.
pub fn oracle_truth(m: &LassoModel, phi: &Formula, len: usize) -> Vec<bool> {
    let p = m.prefix().len();
    let q = m.cycle().len();
    let fold = |k: usize| if k < p { k } else { p + (k - p) % q };
    let val = |k: usize| {
        let k = fold(k);
        if k < p {
            m.prefix()[k]
        } else {
            m.cycle()[k - p]
        }
    };
    let rec = |f: &Formula| oracle_truth(m, f, len);
    match phi {
        Formula::Atom(a) => {
            let i = m.atom_index(a).expect("declared");
            (0..len).map(|k| val(k) >> i & 1 == 1).collect()
        }
        Formula::Not(a) => rec(a).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => rec(a).iter().zip(rec(b)).map(|(x, y)| *x && y).collect(),
        Formula::Or(a, b) => rec(a).iter().zip(rec(b)).map(|(x, y)| *x || y).collect(),
        Formula::Implies(a, b) => rec(a).iter().zip(rec(b)).map(|(x, y)| !*x || y).collect(),
        Formula::Iff(a, b) => rec(a).iter().zip(rec(b)).map(|(x, y)| *x == y).collect(),
        Formula::Next(a) => {
            let va = rec(a);
            (0..len).map(|k| va[fold(k + 1)]).collect()
        }
        Formula::Always(a) => {
            let va = rec(a);
            let on_loop = (p..p + q).all(|k| va[k]);
            let mut out = vec![on_loop; len];
            for k in (0..p).rev() {
                out[k] = va[k] && if k + 1 < p { out[k + 1] } else { on_loop };
            }
            out
        }
    }
}
