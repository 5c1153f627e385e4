use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{i_m_quadrature, QuadratureSpec};
use crate::point::KernelParams;

/// Depth used when a cache is asked for a table without a stated need.
pub const DEFAULT_IM_DEPTH: usize = 64;

/// The normalizing integrals `I_m(s)` for `m = 0..=M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImTable {
    n: usize,
    s: f64,
    values: Vec<f64>,
}

impl ImTable {
    pub fn from_values(params: &KernelParams, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("an I_m table needs at least I_0"));
        }
        if let Some((m, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::domain(format!("I_{m} = {v} is not a positive number")));
        }
        Ok(Self {
            n: params.n,
            s: params.s,
            values,
        })
    }

    /// Every entry equal to `value`; `value = 1` gives the Hardy space.
    pub fn constant(params: &KernelParams, value: f64, max_degree: usize) -> Result<Self> {
        Self::from_values(params, vec![value; max_degree + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, m: usize) -> Option<f64> {
        self.values.get(m).copied()
    }

    pub(crate) fn check_dimension(&self, params: &KernelParams) -> Result<()> {
        if self.n != params.n {
            return Err(Error::domain(format!(
                "I_m table was built for n = {} but the kernel has n = {}",
                self.n, params.n
            )));
        }
        Ok(())
    }
}

/// `I_0(s), …, I_M(s)` by Gauss–Jacobi quadrature.
pub fn compute_im_table(params: &KernelParams, max_degree: usize, spec: &QuadratureSpec) -> Result<ImTable> {
    let values = (0..=max_degree)
        .into_par_iter()
        .map(|m| i_m_quadrature(m, params, spec))
        .collect::<Result<Vec<f64>>>()?;
    ImTable::from_values(params, values)
}

/// Shared tables keyed by `(n, s)`. A request deeper than the cached table
/// computes a new table and replaces the entry; tables already handed out
/// are never modified.
#[derive(Debug)]
pub struct ImTableCache {
    spec: QuadratureSpec,
    tables: Mutex<HashMap<(usize, u64), Arc<ImTable>>>,
}

impl ImTableCache {
    pub fn new(spec: QuadratureSpec) -> Self {
        Self {
            spec,
            tables: Mutex::new(HashMap::new()),
        }
    }

    /// A table for `params` with `max_degree() ≥ min_depth`.
    pub fn get(&self, params: &KernelParams, min_depth: usize) -> Result<Arc<ImTable>> {
        let key = (params.n, params.s.to_bits());
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            if t.max_degree() >= min_depth {
                return Ok(Arc::clone(t));
            }
        }
        // computed outside the lock; concurrent requests may duplicate work
        let table = Arc::new(compute_im_table(params, min_depth, &self.spec)?);
        let mut tables = self.tables.lock().unwrap();
        let entry = tables.entry(key).or_insert_with(|| Arc::clone(&table));
        if entry.max_degree() < table.max_degree() {
            *entry = Arc::clone(&table);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn table_basics() {
        let p = KernelParams::new(4, 0.0).unwrap();
        let t = compute_im_table(&p, 6, &QuadratureSpec::default()).unwrap();
        assert_eq!(t.max_degree(), 6);
        assert_relative_eq!(t.get(0).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(t.get(1).unwrap(), 0.85, max_relative = 1e-13);
        assert!(t.values().iter().all(|v| *v > 0.0));
    }

    #[test]
    fn rejects_non_positive_entries() {
        let p = KernelParams::new(3, 0.0).unwrap();
        assert!(ImTable::from_values(&p, vec![1.0, 0.0]).is_err());
        assert!(ImTable::from_values(&p, vec![]).is_err());
        assert!(ImTable::constant(&p, -1.0, 3).is_err());
    }

    #[test]
    fn cache_extends_without_mutation() {
        let p = KernelParams::new(3, 1.0).unwrap();
        let cache = ImTableCache::new(QuadratureSpec::default());
        let shallow = cache.get(&p, 4).unwrap();
        let again = cache.get(&p, 3).unwrap();
        assert!(Arc::ptr_eq(&shallow, &again));
        let deep = cache.get(&p, 10).unwrap();
        assert_eq!(shallow.max_degree(), 4);
        assert_eq!(deep.max_degree(), 10);
        assert_eq!(&deep.values()[..5], shallow.values());
        // reference values from 25-digit quadrature
        assert_relative_eq!(deep.values()[1], 0.585_436_359_096_703_5, max_relative = 1e-11);
    }
}
