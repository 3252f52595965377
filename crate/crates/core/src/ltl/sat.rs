use serde::{Deserialize, Serialize};

use super::formula::{AtomName, Formula};
use super::model::{LassoModel, Valuation};
use super::semantics::truth_vector;
use super::LtlError;

/// Largest number of atoms a bounded search accepts.
pub const SAT_MAX_ATOMS: usize = 3;
/// Largest `max_prefix + max_loop` a bounded search accepts.
pub const SAT_MAX_LENGTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SatResult {
    /// The formula holds in `model` at `position`.
    Witness { model: LassoModel, position: usize },
    /// No lasso within the bounds satisfies the formula at position 0.
    Unsat {
        prefix_bound: usize,
        loop_bound: usize,
        models_checked: u64,
    },
}

impl SatResult {
    pub fn is_unsat(&self) -> bool {
        matches!(self, SatResult::Unsat { .. })
    }
}

/// Lasso shapes `(|prefix|, |loop|)` in search order: increasing total
/// length, then increasing prefix length.
fn shapes(max_prefix: usize, max_loop: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=max_prefix + max_loop).flat_map(move |total| {
        (0..=max_prefix.min(total - 1))
            .map(move |p| (p, total - p))
            .filter(move |&(_, q)| q <= max_loop)
    })
}

/// Every lasso of one shape, lexicographically by valuation sequence.
fn lassos_of_shape(atoms: Vec<AtomName>, p: usize, q: usize) -> impl Iterator<Item = LassoModel> {
    let len = p + q;
    let digits = 1u64 << atoms.len();
    let count = digits.pow(len as u32);
    (0..count).map(move |code| {
        // first position is the most significant digit
        let mut vals: Vec<Valuation> = (0..len)
            .map(|j| ((code / digits.pow((len - 1 - j) as u32)) % digits) as Valuation)
            .collect();
        let cycle = vals.split_off(p);
        LassoModel::new(atoms.clone(), vals, cycle).expect("enumerated lasso is well formed")
    })
}

/// All lasso models over `atoms` with `|prefix| <= max_prefix` and
/// `1 <= |loop| <= max_loop`, by increasing `|prefix| + |loop|`, then
/// increasing `|prefix|`, then lexicographically by valuation sequence.
pub fn lassos(
    atoms: Vec<AtomName>,
    max_prefix: usize,
    max_loop: usize,
) -> impl Iterator<Item = LassoModel> {
    shapes(max_prefix, max_loop).flat_map(move |(p, q)| lassos_of_shape(atoms.clone(), p, q))
}

fn check_bounds(atoms: usize, max_prefix: usize, max_loop: usize) -> Result<(), LtlError> {
    if max_prefix == 0 || max_loop == 0 {
        return Err(LtlError::Bounds("bounds must be at least 1".into()));
    }
    if atoms > SAT_MAX_ATOMS {
        return Err(LtlError::Bounds(format!(
            "{atoms} atoms exceeds the limit of {SAT_MAX_ATOMS}"
        )));
    }
    if max_prefix + max_loop > SAT_MAX_LENGTH {
        return Err(LtlError::Bounds(format!(
            "max_prefix + max_loop = {} exceeds {SAT_MAX_LENGTH}",
            max_prefix + max_loop
        )));
    }
    Ok(())
}

/// Exhaustive search for a lasso satisfying `φ` at position 0.
///
/// Shapes are spread over worker threads; each reports its own first
/// witness and the smallest shape's witness wins, so the answer does not
/// depend on scheduling.
pub fn satisfiable_bounded(phi: &Formula, max_prefix: usize, max_loop: usize) -> Result<SatResult, LtlError> {
    let atoms = phi.atoms();
    check_bounds(atoms.len(), max_prefix, max_loop)?;
    let shapes: Vec<_> = shapes(max_prefix, max_loop).collect();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(shapes.len());
    type ShapeOutcome = Result<(Option<LassoModel>, u64), LtlError>;
    let mut outcomes: Vec<Option<ShapeOutcome>> = vec![None; shapes.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let shapes = &shapes;
                let atoms = &atoms;
                s.spawn(move || {
                    let mut mine = Vec::new();
                    for (i, &(p, q)) in shapes.iter().enumerate().skip(w).step_by(workers) {
                        let mut checked = 0u64;
                        let mut found = None;
                        for model in lassos_of_shape(atoms.clone(), p, q) {
                            checked += 1;
                            match truth_vector(&model, phi) {
                                Ok(v) if v[0] => {
                                    found = Some(model);
                                    break;
                                }
                                Ok(_) => {}
                                Err(e) => {
                                    mine.push((i, Err(e)));
                                    return mine;
                                }
                            }
                        }
                        mine.push((i, Ok((found, checked))));
                    }
                    mine
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("search worker panicked") {
                outcomes[i] = Some(r);
            }
        }
    });
    let mut checked = 0u64;
    for outcome in outcomes {
        let (found, n) = outcome.expect("every shape searched")?;
        checked += n;
        if let Some(model) = found {
            return Ok(SatResult::Witness { model, position: 0 });
        }
    }
    Ok(SatResult::Unsat {
        prefix_bound: max_prefix,
        loop_bound: max_loop,
        models_checked: checked,
    })
}

pub(crate) fn validate_bounds(atoms: usize, max_prefix: usize, max_loop: usize) -> Result<(), LtlError> {
    check_bounds(atoms, max_prefix, max_loop)
}
