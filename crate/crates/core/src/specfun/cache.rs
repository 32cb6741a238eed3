//! Process-wide memoisation of the expensive special-function calls.
//!
//! Keys are the exact bit patterns of every parameter, so only calls with
//! identical inputs share an entry. Errors are never cached.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::Result;

use super::hyper::{tricomi_u, tricomi_u_da, tricomi_u_db};
use super::meijer::{meijer_g, meijer_g2, Estimate, MeijerG2Spec, MeijerGSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    G,
    G2,
    U,
    UDa,
    UDb,
}

type Key = (Kind, Vec<u64>);

const CAPACITY: usize = 200_000;

fn table() -> &'static Mutex<HashMap<Key, Estimate>> {
    static TABLE: OnceLock<Mutex<HashMap<Key, Estimate>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn lookup(key: Key, compute: impl FnOnce() -> Result<Estimate>) -> Result<Estimate> {
    if let Some(v) = table().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(*v);
    }
    // computed outside the lock; a concurrent duplicate is harmless
    let v = compute()?;
    let mut t = table().lock().unwrap_or_else(|e| e.into_inner());
    if t.len() >= CAPACITY {
        t.clear();
    }
    t.insert(key, v);
    Ok(v)
}

pub fn meijer_g_cached(spec: &MeijerGSpec) -> Result<Estimate> {
    lookup((Kind::G, spec.cache_key()), || meijer_g(spec))
}

pub fn meijer_g2_cached(spec: &MeijerG2Spec) -> Result<Estimate> {
    lookup((Kind::G2, spec.cache_key()), || meijer_g2(spec))
}

fn bits3(a: f64, b: f64, z: f64) -> Vec<u64> {
    vec![a.to_bits(), b.to_bits(), z.to_bits()]
}

fn exact(v: f64) -> Estimate {
    Estimate { value: v, error: 0.0 }
}

pub fn tricomi_u_cached(a: f64, b: f64, z: f64) -> Result<f64> {
    lookup((Kind::U, bits3(a, b, z)), || tricomi_u(a, b, z).map(exact)).map(|e| e.value)
}

pub fn tricomi_u_da_cached(a: f64, b: f64, z: f64) -> Result<f64> {
    lookup((Kind::UDa, bits3(a, b, z)), || tricomi_u_da(a, b, z).map(exact)).map(|e| e.value)
}

pub fn tricomi_u_db_cached(a: f64, b: f64, z: f64) -> Result<f64> {
    lookup((Kind::UDb, bits3(a, b, z)), || tricomi_u_db(a, b, z).map(exact)).map(|e| e.value)
}

/// Number of memoised entries (for diagnostics).
pub fn cache_len() -> usize {
    table().lock().unwrap_or_else(|e| e.into_inner()).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_calls_hit_the_same_entry() {
        let spec = MeijerGSpec::new(1, 1, vec![-2.0], vec![0.0], 0.37).unwrap();
        let a = meijer_g_cached(&spec).unwrap();
        let n = cache_len();
        let b = meijer_g_cached(&spec).unwrap();
        assert_eq!(a, b);
        assert!(cache_len() <= n.max(1));
    }
}
