use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::formula::AtomName;
use super::LtlError;

/// Atoms true at one position, as a bitmask over the model's atom list.
pub type Valuation = u32;

/// Most atoms a model may declare.
pub const MAX_ATOMS: usize = 32;

/// An ultimately periodic trace: `prefix` once, then `loop` forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ModelCells", try_from = "ModelCells")]
pub struct LassoModel {
    atoms: Vec<AtomName>,
    prefix: Vec<Valuation>,
    cycle: Vec<Valuation>,
}

/// Serialized form: each position lists the atoms true there.
#[derive(Serialize, Deserialize)]
struct ModelCells {
    atoms: Vec<AtomName>,
    prefix: Vec<Vec<AtomName>>,
    #[serde(rename = "loop")]
    cycle: Vec<Vec<AtomName>>,
}

impl From<LassoModel> for ModelCells {
    fn from(m: LassoModel) -> Self {
        let cells = |vs: &[Valuation]| -> Vec<Vec<AtomName>> {
            vs.iter()
                .map(|&v| {
                    m.atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| v >> i & 1 == 1)
                        .map(|(_, a)| a.clone())
                        .collect()
                })
                .collect()
        };
        ModelCells {
            prefix: cells(&m.prefix),
            cycle: cells(&m.cycle),
            atoms: m.atoms,
        }
    }
}

impl TryFrom<ModelCells> for LassoModel {
    type Error = LtlError;

    fn try_from(c: ModelCells) -> Result<Self, Self::Error> {
        let val = |cell: &Vec<AtomName>| -> Result<Valuation, LtlError> {
            cell.iter().try_fold(0, |v, a| {
                let i = c
                    .atoms
                    .iter()
                    .position(|b| b == a)
                    .ok_or_else(|| LtlError::UndeclaredAtom(a.to_string()))?;
                Ok(v | 1 << i)
            })
        };
        let prefix = c.prefix.iter().map(val).collect::<Result<_, _>>()?;
        let cycle = c.cycle.iter().map(val).collect::<Result<_, _>>()?;
        LassoModel::new(c.atoms.clone(), prefix, cycle)
    }
}

impl LassoModel {
    pub fn new(
        atoms: Vec<AtomName>,
        prefix: Vec<Valuation>,
        cycle: Vec<Valuation>,
    ) -> Result<Self, LtlError> {
        if atoms.len() > MAX_ATOMS {
            return Err(LtlError::Model(format!("at most {MAX_ATOMS} atoms")));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(LtlError::Model(format!("atom `{a}` declared twice")));
            }
        }
        if cycle.is_empty() {
            return Err(LtlError::Model("loop must be nonempty".into()));
        }
        let mask = if atoms.len() == MAX_ATOMS {
            u32::MAX
        } else {
            (1u32 << atoms.len()) - 1
        };
        if prefix.iter().chain(&cycle).any(|v| v & !mask != 0) {
            return Err(LtlError::Model("valuation mentions an undeclared atom".into()));
        }
        Ok(Self {
            atoms,
            prefix,
            cycle,
        })
    }

    pub fn atoms(&self) -> &[AtomName] {
        &self.atoms
    }

    pub fn prefix(&self) -> &[Valuation] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Valuation] {
        &self.cycle
    }

    pub fn atom_index(&self, name: &AtomName) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// Number of distinct positions, `|prefix| + |loop|`.
    pub fn period_end(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Maps any position to its representative in `0..period_end()`.
    pub fn normalize(&self, n: usize) -> usize {
        let p = self.prefix.len();
        if n < p {
            n
        } else {
            p + (n - p) % self.cycle.len()
        }
    }

    pub fn valuation(&self, n: usize) -> Valuation {
        let k = self.normalize(n);
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.cycle[k - self.prefix.len()]
        }
    }

    /// Parses
    ///
    /// ```text
    /// atoms: y z
    /// prefix: y|
    /// loop: |y z
    /// ```
    ///
    /// Cells are separated by `|` and list the atoms true there; `-` also
    /// denotes an empty cell. An empty `prefix:` line is the empty prefix and
    /// an empty `loop:` line is a single empty valuation.
    pub fn parse(text: &str) -> Result<Self, LtlError> {
        let mut atoms = None;
        let mut prefix_text = None;
        let mut loop_text = None;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| LtlError::Model(format!("expected `key: value`, got `{line}`")))?;
            let slot = match key.trim() {
                "atoms" => &mut atoms,
                "prefix" => &mut prefix_text,
                "loop" => &mut loop_text,
                other => return Err(LtlError::Model(format!("unknown key `{other}`"))),
            };
            if slot.replace(rest.trim().to_string()).is_some() {
                return Err(LtlError::Model(format!("duplicate `{}` line", key.trim())));
            }
        }
        let atoms: Vec<AtomName> = atoms
            .ok_or_else(|| LtlError::Model("missing `atoms:` line".into()))?
            .split_whitespace()
            .map(AtomName::new)
            .collect::<Result<_, _>>()?;
        let cells = |text: &str| -> Result<Vec<Valuation>, LtlError> {
            text.split('|')
                .map(|cell| {
                    cell.split_whitespace()
                        .filter(|w| *w != "-")
                        .try_fold(0, |v, w| {
                            let name = AtomName::new(w)?;
                            let i = atoms
                                .iter()
                                .position(|a| *a == name)
                                .ok_or(LtlError::UndeclaredAtom(w.to_string()))?;
                            Ok(v | 1 << i)
                        })
                })
                .collect()
        };
        let prefix_text = prefix_text.unwrap_or_default();
        let prefix = if prefix_text.is_empty() {
            Vec::new()
        } else {
            cells(&prefix_text)?
        };
        let cycle = cells(&loop_text.ok_or_else(|| LtlError::Model("missing `loop:` line".into()))?)?;
        Self::new(atoms, prefix, cycle)
    }

    /// Inverse of [`LassoModel::parse`].
    pub fn to_text(&self) -> String {
        let cell = |v: Valuation| {
            self.atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| v >> i & 1 == 1)
                .map(|(_, a)| a.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let row = |vs: &[Valuation]| match vs {
            [] => String::new(),
            [0] => " -".to_string(),
            _ => format!(" {}", vs.iter().map(|&v| cell(v)).collect::<Vec<_>>().join("|")),
        };
        let mut out = String::new();
        let names: Vec<&str> = self.atoms.iter().map(AtomName::as_str).collect();
        let _ = writeln!(out, "atoms: {}", names.join(" "));
        let _ = writeln!(out, "prefix:{}", row(&self.prefix));
        let _ = writeln!(out, "loop:{}", row(&self.cycle));
        out
    }
}
