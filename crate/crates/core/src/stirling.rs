//! Stirling-Carlitz numbers of the second kind,
//! `e_C(z)^m / Pi(m) = sum_n {n brace m} z^n / Pi(n)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::carlitz::CarlitzCache;
use crate::ratfunc::RatFunc;
use crate::Series;

/// Memoized table of `{n brace m}` for one field.
///
/// Each column m keeps the expansion of `e_C(z)^m`, computed through the q-adic digits of m
/// as a product of Frobenius powers of `e_C`, and is widened when a larger n is requested.
pub struct StirlingTable {
    carlitz: Arc<CarlitzCache>,
    columns: RwLock<HashMap<u64, Arc<Series>>>,
    values: RwLock<HashMap<(u64, u64), RatFunc>>,
}

impl StirlingTable {
    pub fn new(carlitz: Arc<CarlitzCache>) -> Self {
        StirlingTable { carlitz, columns: RwLock::new(HashMap::new()), values: RwLock::new(HashMap::new()) }
    }

    pub fn carlitz(&self) -> &Arc<CarlitzCache> {
        &self.carlitz
    }

    /// λ(n), the q-adic digit sum.
    pub fn digit_sum(&self, n: u64) -> u64 {
        self.carlitz.digit_sum(n)
    }

    /// `e_C(z)^m` to order at least `n`.
    fn column(&self, m: u64, n: u64) -> Arc<Series> {
        if let Some(c) = self.columns.read().unwrap().get(&m) {
            if c.order() as u64 >= n {
                return Arc::clone(c);
            }
        }
        let order = {
            let cols = self.columns.read().unwrap();
            let old = cols.get(&m).map_or(0, |c| c.order() as u64);
            n.max(2 * old) as usize
        };
        let col = Arc::new(self.carlitz.exp_series(order).pow_digits(m));
        let mut cols = self.columns.write().unwrap();
        let slot = cols.entry(m).or_insert_with(|| Arc::clone(&col));
        if slot.order() < col.order() {
            *slot = Arc::clone(&col);
        }
        Arc::clone(slot)
    }

    /// `{n brace m} = Pi(n) / Pi(m) * [z^n] e_C(z)^m`.
    pub fn get(&self, n: u64, m: u64) -> RatFunc {
        if let Some(v) = self.values.read().unwrap().get(&(n, m)) {
            return v.clone();
        }
        let field = self.carlitz.field();
        let v = if n < m {
            // e_C(z)^m starts at z^m
            RatFunc::zero(field)
        } else {
            let c = self.column(m, n).coeff(n as usize).expect("column order covers n").clone();
            if c.is_zero() {
                c
            } else {
                &(&c * &self.carlitz.factorial_rat(n)) / &self.carlitz.factorial_rat(m)
            }
        };
        self.values.write().unwrap().insert((n, m), v.clone());
        v
    }

    /// Fills the columns for every `m` in `ms` up to order `n`.
    pub fn prefetch(&self, ms: impl IntoIterator<Item = u64>, n: u64) {
        for m in ms {
            self.column(m, n);
        }
    }
}
