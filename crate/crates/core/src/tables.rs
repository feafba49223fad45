//! Capped subset-counting tables shared by the exact engine and the
//! manipulation scans.
//!
//! Only weights strictly below the quota are tracked: criticality of a
//! player depends solely on whether `w(S) < q` and `w(S) ≥ q − w_i`, and
//! every count below the cap is an exact subset count. That exactness is what
//! makes [`WeightTable::remove`] and [`SizedTable::remove`] (polynomial
//! division by `1 + x^w`) valid.

use alloc::vec;
use alloc::vec::Vec;

use crate::count::Count;

/// `counts[W]` = number of subsets of the added players with weight `W < cap`.
#[derive(Debug, Clone)]
pub(crate) struct WeightTable<C> {
    counts: Vec<C>,
}

impl<C: Count> WeightTable<C> {
    pub(crate) fn new(cap: u64) -> Self {
        let mut counts = vec![C::zero(); cap as usize];
        if let Some(c) = counts.first_mut() {
            *c = C::one();
        }
        WeightTable { counts }
    }

    pub(crate) fn from_weights(cap: u64, weights: impl IntoIterator<Item = u64>) -> Self {
        let mut t = Self::new(cap);
        for w in weights {
            t.add(w);
        }
        t
    }

    pub(crate) fn add(&mut self, w: u64) {
        let cap = self.counts.len();
        let Ok(w) = usize::try_from(w) else { return };
        if w >= cap {
            return;
        }
        for x in (w..cap).rev() {
            let (lo, hi) = self.counts.split_at_mut(x);
            hi[0].add(&lo[x - w]);
        }
    }

    /// Inverse of [`add`](Self::add) for a weight previously added.
    pub(crate) fn remove(&mut self, w: u64) {
        let cap = self.counts.len();
        let Ok(w) = usize::try_from(w) else { return };
        if w >= cap {
            return;
        }
        for x in w..cap {
            let (lo, hi) = self.counts.split_at_mut(x);
            hi[0].sub(&lo[x - w]);
        }
    }

    /// Number of subsets a player of weight `w` is critical for:
    /// Σ counts[W] over `quota − w ≤ W ≤ quota − 1`.
    pub(crate) fn critical_count(&self, w: u64) -> C {
        let cap = self.counts.len() as u64;
        let lo = cap.saturating_sub(w) as usize;
        let mut acc = C::zero();
        for c in &self.counts[lo..] {
            acc.add(c);
        }
        acc
    }
}

/// `rows[k][W]` = number of `k`-subsets of the added players with weight `W < cap`.
#[derive(Debug, Clone)]
pub(crate) struct SizedTable<C> {
    cap: usize,
    rows: Vec<Vec<C>>,
}

impl<C: Count> SizedTable<C> {
    pub(crate) fn new(cap: u64) -> Self {
        let cap = cap as usize;
        let mut row = vec![C::zero(); cap];
        if let Some(c) = row.first_mut() {
            *c = C::one();
        }
        SizedTable {
            cap,
            rows: vec![row],
        }
    }

    pub(crate) fn from_weights(cap: u64, weights: impl IntoIterator<Item = u64>) -> Self {
        let mut t = Self::new(cap);
        for w in weights {
            t.add(w);
        }
        t
    }

    #[cfg(test)]
    /// Number of players currently in the table.
    pub(crate) fn players(&self) -> usize {
        self.rows.len() - 1
    }

    pub(crate) fn add(&mut self, w: u64) {
        self.rows.push(vec![C::zero(); self.cap]);
        let Ok(w) = usize::try_from(w) else { return };
        if w >= self.cap {
            return;
        }
        for k in (1..self.rows.len()).rev() {
            let (lo, hi) = self.rows.split_at_mut(k);
            let (prev, cur) = (&lo[k - 1], &mut hi[0]);
            for x in w..self.cap {
                cur[x].add(&prev[x - w]);
            }
        }
    }

    /// Inverse of [`add`](Self::add) for a weight previously added.
    pub(crate) fn remove(&mut self, w: u64) {
        if let Ok(w) = usize::try_from(w) {
            if w < self.cap {
                for k in 1..self.rows.len() {
                    let (lo, hi) = self.rows.split_at_mut(k);
                    let (prev, cur) = (&lo[k - 1], &mut hi[0]);
                    for x in w..self.cap {
                        cur[x].sub(&prev[x - w]);
                    }
                }
            }
        }
        self.rows.pop();
    }

    /// `pivots[k]` = number of `k`-subsets a player of weight `w` is critical for.
    pub(crate) fn pivot_counts(&self, w: u64) -> Vec<C> {
        let lo = (self.cap as u64).saturating_sub(w) as usize;
        self.rows
            .iter()
            .map(|row| {
                let mut acc = C::zero();
                for c in &row[lo..] {
                    acc.add(c);
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_table_counts_subsets() {
        // subsets of {1, 2, 3} by weight: 0,1,2,3,3,4,5,6
        let t = WeightTable::<u128>::from_weights(7, [1, 2, 3]);
        assert_eq!(t.counts, vec![1, 1, 1, 2, 1, 1, 1]);
        let t = WeightTable::<u128>::from_weights(4, [1, 2, 3]);
        assert_eq!(t.counts, vec![1, 1, 1, 2]);
    }

    #[test]
    fn removal_inverts_addition() {
        let mut t = WeightTable::<u128>::from_weights(9, [4, 1, 3, 3, 7]);
        t.remove(3);
        t.remove(7);
        assert_eq!(
            t.counts,
            WeightTable::<u128>::from_weights(9, [4, 1, 3]).counts
        );

        let mut s = SizedTable::<u128>::from_weights(9, [4, 1, 3, 3, 12]);
        s.remove(3);
        s.remove(12);
        let want = SizedTable::<u128>::from_weights(9, [4, 1, 3]);
        assert_eq!(s.rows, want.rows);
        assert_eq!(s.players(), 3);
    }

    #[test]
    fn sized_rows_sum_to_weight_table() {
        let s = SizedTable::<u128>::from_weights(10, [2, 5, 1, 1, 3]);
        let t = WeightTable::<u128>::from_weights(10, [2, 5, 1, 1, 3]);
        for x in 0..10 {
            let total: u128 = s.rows.iter().map(|r| r[x]).sum();
            assert_eq!(total, t.counts[x]);
        }
    }
}
