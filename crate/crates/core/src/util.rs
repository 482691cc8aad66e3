//! Small enumeration helpers shared across modules.

/// Binomial coefficient in u128 with saturation; large enough for every cap
/// comparison we make.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Lexicographic k-combinations of {0, ..., n-1}.
pub struct Combinations {
    n: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let state = if k <= n { Some((0..k).collect()) } else { None };
        Self { n, k, state }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.state.clone()?;
        // advance to the next combination, or finish
        let state = self.state.as_mut().unwrap();
        if self.k == 0 {
            self.state = None;
            return Some(current);
        }
        let mut i = self.k;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if state[i] < self.n - self.k + i {
                state[i] += 1;
                for j in i + 1..self.k {
                    state[j] = state[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}

/// All sign vectors in {-1, +1}^k, in binary counting order with +1 first.
pub fn sign_vectors(k: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..(1usize << k)).map(move |mask| {
        (0..k)
            .map(|j| if mask >> j & 1 == 0 { 1.0 } else { -1.0 })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(64, 4), 635_376);
    }

    #[test]
    fn combinations_lex_order() {
        let got: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            got,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(10, 4).count(), 210);
    }

    #[test]
    fn sign_vector_count() {
        assert_eq!(sign_vectors(3).count(), 8);
        assert_eq!(sign_vectors(0).count(), 1);
    }
}
