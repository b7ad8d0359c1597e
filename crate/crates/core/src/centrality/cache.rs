use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Correction diagonal `D_kk = 1 / V_kk` with `V = (I - W)^-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionDiagonal {
    pub values: Vec<f64>,
    /// `V_kk` for nodes on a cycle; `None` where `D_kk` defaulted to exactly 1.
    pub resolvent_diagonal: Vec<Option<f64>>,
}

impl CorrectionDiagonal {
    pub fn is_exact(&self, k: usize) -> bool {
        self.resolvent_diagonal[k].is_some()
    }
}

/// Nonzero entries `(row, value)` of one column of `V`, ascending by row.
pub type ResolventColumn = Arc<Vec<(usize, f64)>>;

/// Derived operators shared by every measure computed on one graph and solver config.
///
/// Readers proceed concurrently; inserts take the write lock briefly.
#[derive(Debug, Default)]
pub struct OperatorCache {
    correction: OnceLock<CorrectionDiagonal>,
    columns: RwLock<HashMap<usize, ResolventColumn>>,
}

impl OperatorCache {
    pub fn correction(&self) -> Option<&CorrectionDiagonal> {
        self.correction.get()
    }

    pub(crate) fn correction_or_insert(&self, value: CorrectionDiagonal) -> &CorrectionDiagonal {
        // A racing insert computed the same diagonal; either copy is fine.
        let _ = self.correction.set(value);
        self.correction.get().expect("correction diagonal just set")
    }

    pub fn column(&self, k: usize) -> Option<ResolventColumn> {
        self.columns.read().expect("cache lock poisoned").get(&k).cloned()
    }

    pub(crate) fn insert_column(&self, k: usize, column: Vec<(usize, f64)>) -> ResolventColumn {
        let mut guard = self.columns.write().expect("cache lock poisoned");
        guard.entry(k).or_insert_with(|| Arc::new(column)).clone()
    }

    pub fn cached_columns(&self) -> usize {
        self.columns.read().expect("cache lock poisoned").len()
    }
}
