//! Compensated summation.
//!
//! All distribution sums, weighted errors, and normalization factors in
//! this crate go through [`CompensatedSum`] (Neumaier's variant of Kahan
//! summation). The accumulated error stays at the level of one rounding
//! of the exact sum for the magnitudes that occur here, which keeps the
//! algebraic identities the engine asserts tight, and makes sums of the
//! same multiset agree bitwise even when accumulated in different orders.

/// Running compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Fold another accumulator in, keeping its compensation term.
    #[inline]
    pub fn merge(mut self, other: CompensatedSum) -> CompensatedSum {
        self.add(other.sum);
        self.comp += other.comp;
        self
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator of terms, in iteration order.
pub fn csum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}
