//! Finite polygraphs (computads).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::freecat::nf::CellForms;

/// Highest cell dimension the structural code stores.
pub const MAX_DIM: usize = 4;

/// Index of a cell inside its polygraph. Ordered by declaration.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CellId(pub u32);

impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub dim: usize,
    /// `(source, target)`; `None` exactly for 0-cells.
    pub boundary: Option<(Expr, Expr)>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PolygraphError {
    #[error("duplicate cell name `{0}`")]
    DuplicateName(String),
}

/// An immutable finite polygraph.
///
/// Cells are stored in declaration order; boundaries only mention earlier
/// cells when the polygraph is valid (see [`crate::validate`]).
#[derive(Clone)]
pub struct Polygraph {
    cells: Vec<Cell>,
    index: HashMap<String, CellId>,
    pub(crate) forms: OnceLock<Arc<CellForms>>,
}

impl fmt::Debug for Polygraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polygraph").field("cells", &self.cells).finish()
    }
}

impl PartialEq for Polygraph {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Polygraph {}

impl Polygraph {
    pub fn empty() -> Polygraph {
        Polygraph::from_cells(Vec::new()).expect("empty polygraph")
    }

    pub fn from_cells(cells: Vec<Cell>) -> Result<Polygraph, PolygraphError> {
        let mut index = HashMap::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if index.insert(c.name.clone(), CellId(i as u32)).is_some() {
                return Err(PolygraphError::DuplicateName(c.name.clone()));
            }
        }
        Ok(Polygraph { cells, index, forms: OnceLock::new() })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len() as u32).map(CellId)
    }

    pub fn cell(&self, c: CellId) -> &Cell {
        &self.cells[c.index()]
    }

    pub fn contains(&self, c: CellId) -> bool {
        c.index() < self.cells.len()
    }

    pub fn dim(&self, c: CellId) -> usize {
        self.cells[c.index()].dim
    }

    pub fn name(&self, c: CellId) -> &str {
        &self.cells[c.index()].name
    }

    pub fn lookup(&self, name: &str) -> Option<CellId> {
        self.index.get(name).copied()
    }

    pub fn src(&self, c: CellId) -> Option<&Expr> {
        self.cells[c.index()].boundary.as_ref().map(|b| &b.0)
    }

    pub fn tgt(&self, c: CellId) -> Option<&Expr> {
        self.cells[c.index()].boundary.as_ref().map(|b| &b.1)
    }

    /// Largest cell dimension, or `None` for the empty polygraph.
    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<CellId> {
        self.ids().filter(|&c| self.dim(c) == d).collect()
    }

    /// Number of cells in each dimension `0..=max_dim`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut v = vec![0; self.max_dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            v[c.dim] += 1;
        }
        v
    }

    /// The cell together with every cell its boundaries mention, recursively.
    pub fn cell_closure(&self, c: CellId, out: &mut BTreeSet<CellId>) {
        if !out.insert(c) {
            return;
        }
        if let Some((s, t)) = &self.cells[c.index()].boundary {
            for g in s.generators().into_iter().chain(t.generators()) {
                if self.contains(g) {
                    self.cell_closure(g, out);
                }
            }
        }
    }

    /// The sub-polygraph on `keep` (which must be closed under boundaries)
    /// and the inclusion map as a list of original ids.
    pub fn restrict(&self, keep: &BTreeSet<CellId>) -> (Polygraph, Vec<CellId>) {
        let kept: Vec<CellId> = keep.iter().copied().collect();
        let mut renum = HashMap::new();
        for (i, &c) in kept.iter().enumerate() {
            renum.insert(c, CellId(i as u32));
        }
        let cells = kept
            .iter()
            .map(|&c| {
                let cell = self.cell(c);
                let f = |x: CellId| renum[&x];
                Cell {
                    name: cell.name.clone(),
                    dim: cell.dim,
                    boundary: cell.boundary.as_ref().map(|(s, t)| (s.map_cells(&f), t.map_cells(&f))),
                }
            })
            .collect();
        (Polygraph::from_cells(cells).expect("names stay unique"), kept)
    }

    /// Renumbers cells according to `order` (a permutation of all ids).
    pub fn reorder(&self, order: &[CellId]) -> (Polygraph, Vec<CellId>) {
        let mut renum = vec![CellId(0); self.len()];
        for (i, &c) in order.iter().enumerate() {
            renum[c.index()] = CellId(i as u32);
        }
        let f = |x: CellId| renum[x.index()];
        let cells = order
            .iter()
            .map(|&c| {
                let cell = self.cell(c);
                Cell {
                    name: cell.name.clone(),
                    dim: cell.dim,
                    boundary: cell.boundary.as_ref().map(|(s, t)| (s.map_cells(&f), t.map_cells(&f))),
                }
            })
            .collect();
        (Polygraph::from_cells(cells).expect("names stay unique"), renum)
    }

    pub fn with_names(&self, names: impl Fn(CellId) -> String) -> Result<Polygraph, PolygraphError> {
        let cells = self.ids().map(|c| Cell { name: names(c), ..self.cell(c).clone() }).collect();
        Polygraph::from_cells(cells)
    }
}

/// Incremental construction of a polygraph.
#[derive(Default)]
pub struct PolygraphBuilder {
    cells: Vec<Cell>,
    index: HashMap<String, CellId>,
}

impl PolygraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn try_add(
        &mut self,
        name: &str,
        dim: usize,
        boundary: Option<(Expr, Expr)>,
    ) -> Result<CellId, PolygraphError> {
        if self.index.contains_key(name) {
            return Err(PolygraphError::DuplicateName(name.to_string()));
        }
        let id = CellId(self.cells.len() as u32);
        self.index.insert(name.to_string(), id);
        self.cells.push(Cell { name: name.to_string(), dim, boundary });
        Ok(id)
    }

    /// Adds a 0-cell. Panics on a duplicate name.
    pub fn point(&mut self, name: &str) -> CellId {
        self.try_add(name, 0, None).expect("fresh name")
    }

    /// Adds a cell of dimension `dim >= 1`. Panics on a duplicate name.
    pub fn cell(&mut self, name: &str, dim: usize, src: Expr, tgt: Expr) -> CellId {
        self.try_add(name, dim, Some((src, tgt))).expect("fresh name")
    }

    pub fn lookup(&self, name: &str) -> Option<CellId> {
        self.index.get(name).copied()
    }

    pub fn build(self) -> Polygraph {
        Polygraph::from_cells(self.cells).expect("builder keeps names unique")
    }
}
