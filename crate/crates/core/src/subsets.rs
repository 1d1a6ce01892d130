//! Combination enumeration and binomial helpers.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let num = (n - i) as u128;
        acc = match acc.checked_mul(num) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `Σ_{1≤i≤k} C(n, i)`, saturating.
pub fn subsets_up_to(n: u64, k: u64) -> u128 {
    (1..=k.min(n)).fold(0u128, |acc, i| acc.saturating_add(binomial(n, i)))
}

/// Lexicographic k-combinations of `0..n`, reusing one buffer.
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, current: (0..k).collect(), started: false, done: k > n }
    }

    /// Advances to the next combination; returns `None` when exhausted.
    pub fn next_combination(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return Some(&self.current);
            }
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(60, 5), 5_461_512);
        assert_eq!(binomial_big(100, 50).to_string(), "100891344545564193334812497256");
        assert_eq!(subsets_up_to(4, 4), 15);
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let mut c = Combinations::new(5, 3);
        let mut all = Vec::new();
        while let Some(s) = c.next_combination() {
            all.push(s.to_vec());
        }
        assert_eq!(all.len(), 10);
        assert_eq!(all.first().unwrap(), &vec![0, 1, 2]);
        assert_eq!(all.last().unwrap(), &vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let mut empty = Combinations::new(3, 0);
        assert_eq!(empty.next_combination(), Some(&[][..]));
        assert_eq!(empty.next_combination(), None);
        assert_eq!(Combinations::new(2, 3).next_combination(), None);
    }
}
