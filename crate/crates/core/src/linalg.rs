//! Exact solution of square linear systems by fraction-free elimination.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Solves `a · x = b` exactly; `None` when `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|row| row.len() == n), "system must be square");
    // Clear denominators row by row so elimination runs on integers.
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let lcm = row.iter().chain(std::iter::once(rhs)).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().chain(std::iter::once(rhs)).map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = Rational::from_integer(m[k][n].clone());
        for j in k + 1..n {
            acc -= Rational::from_integer(m[k][j].clone()) * &x[j];
        }
        x[k] = acc / Rational::from_integer(m[k][k].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
    }

    #[test]
    fn needs_pivoting() {
        let a = vec![vec![int(0), int(1)], vec![ratio(1, 2), int(0)]];
        assert_eq!(solve(&a, &[int(2), int(1)]).unwrap(), vec![int(2), int(2)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(&a, &[int(1), int(1)]).is_none());
    }

    proptest! {
        #[test]
        fn solution_satisfies_system(entries in proptest::collection::vec((-9i64..10, 1i64..5), 16),
                                     rhs in proptest::collection::vec(-9i64..10, 4)) {
            let a: Vec<Vec<Rational>> = entries.chunks(4)
                .map(|row| row.iter().map(|&(p, q)| ratio(p, q)).collect())
                .collect();
            let b: Vec<Rational> = rhs.iter().map(|&v| int(v)).collect();
            if let Some(x) = solve(&a, &b) {
                for (row, rhs) in a.iter().zip(&b) {
                    let lhs: Rational = row.iter().zip(&x).map(|(c, v)| c * v).sum();
                    prop_assert_eq!(&lhs, rhs);
                }
            }
        }
    }
}
