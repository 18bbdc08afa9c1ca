//! The finite abelian groups the sieve works in.

use std::fmt::Debug;
use std::hash::Hash;

pub trait FiniteGroup {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    /// `n * a` by double-and-add.
    fn times(&self, n: u64, a: &Self::Elem) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.op(&base, &base);
            }
        }
        acc
    }

    /// Order of `a`, given a multiple `n` of it and the factorization of `n`.
    fn order_dividing(&self, a: &Self::Elem, n: u64, factors: &[(u64, u32)]) -> u64 {
        let id = self.identity();
        let mut m = n;
        for &(q, _) in factors {
            while m % q == 0 && self.times(m / q, a) == id {
                m /= q;
            }
        }
        m
    }
}
