//! Compensated (Neumaier) summation.

/// Running sum with a first-order error compensation term.
///
/// The Neumaier variant also handles the case where the incoming term is
/// larger in magnitude than the running sum, which happens routinely in the
/// conditionally convergent series summed by the oracle.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_lost_by_naive_sum() {
        // 1 + 1e100 - 1e100 + ... pattern where naive summation loses the ones
        let mut k = KahanSum::new();
        for _ in 0..10 {
            k.add(1.0);
            k.add(1e100);
            k.add(-1e100);
        }
        assert_eq!(k.value(), 10.0);
    }

    #[test]
    fn matches_exact_sum_of_reciprocals() {
        let k: KahanSum = (1..=100_000).map(|n| 1.0 / n as f64).collect();
        // reference computed in extended precision
        assert!((k.value() - 12.090_146_129_863_427).abs() < 1e-12);
    }
}
