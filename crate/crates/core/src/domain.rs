//! A set of permutations of fixed degree, stored as an `n!`-bit membership
//! set indexed by lexicographic rank. This is the universal in-memory
//! representation of a Condorcet domain.

use std::cmp::Ordering;

use crate::perm::{factorial, PermTable, Permutation};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Domain {
    degree: u8,
    bits: Vec<u64>,
}

pub fn word_count(degree: usize) -> usize {
    (factorial(degree) + 63) / 64
}

impl Domain {
    pub fn empty(degree: usize) -> Domain {
        Domain {
            degree: degree as u8,
            bits: vec![0; word_count(degree)],
        }
    }

    pub fn full(degree: usize) -> Domain {
        let mut d = Domain::empty(degree);
        let fact = factorial(degree);
        for r in 0..fact {
            d.bits[r / 64] |= 1 << (r % 64);
        }
        d
    }

    pub fn from_ranks(degree: usize, ranks: impl IntoIterator<Item = u16>) -> Domain {
        let mut d = Domain::empty(degree);
        for r in ranks {
            d.insert(r);
        }
        d
    }

    pub fn from_perms<'a>(degree: usize, perms: impl IntoIterator<Item = &'a Permutation>) -> Domain {
        Domain::from_ranks(degree, perms.into_iter().map(|p| p.rank()))
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn insert(&mut self, rank: u16) {
        self.bits[rank as usize / 64] |= 1 << (rank % 64);
    }

    pub fn remove(&mut self, rank: u16) {
        self.bits[rank as usize / 64] &= !(1 << (rank % 64));
    }

    pub fn contains(&self, rank: u16) -> bool {
        self.bits[rank as usize / 64] >> (rank % 64) & 1 != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// True iff the identity permutation (rank 0) is a member.
    pub fn is_unitary(&self) -> bool {
        self.bits[0] & 1 != 0
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.bits
    }

    pub fn intersect_with(&mut self, other: &Domain) {
        for (w, o) in self.bits.iter_mut().zip(&other.bits) {
            *w &= o;
        }
    }

    pub fn union_with(&mut self, other: &Domain) {
        for (w, o) in self.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
    }

    pub fn intersection(&self, other: &Domain) -> Domain {
        let mut d = self.clone();
        d.intersect_with(other);
        d
    }

    pub fn is_subset_of(&self, other: &Domain) -> bool {
        self.bits.iter().zip(&other.bits).all(|(w, o)| w & !o == 0)
    }

    pub fn intersects(&self, other: &Domain) -> bool {
        self.bits.iter().zip(&other.bits).any(|(w, o)| w & o != 0)
    }

    /// Member ranks in increasing order.
    pub fn ranks(&self) -> impl Iterator<Item = u16> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * 64) as u16 + b as u16)
            })
        })
    }

    pub fn perms(&self) -> Vec<Permutation> {
        let table = PermTable::get(self.degree());
        self.ranks().map(|r| table.perm(r)).collect()
    }

    /// Total order matching lexicographic comparison of the sorted rank
    /// sequences: the set whose smallest non-shared rank is larger compares
    /// greater.
    pub fn cmp_sorted_ranks(&self, other: &Domain) -> Ordering {
        debug_assert_eq!(self.degree, other.degree);
        for (w, o) in self.bits.iter().zip(&other.bits) {
            if w != o {
                let low = (w ^ o).trailing_zeros();
                return if w >> low & 1 != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Domain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Domain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.cmp_sorted_ranks(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_domain_counts_and_membership() {
        let d = Domain::full(4);
        assert_eq!(d.len(), 24);
        assert!(d.is_unitary());
        assert!(d.contains(23));
    }

    #[test]
    fn rank_iteration_is_sorted() {
        let d = Domain::from_ranks(5, [7u16, 3, 100, 0]);
        assert_eq!(d.ranks().collect::<Vec<_>>(), vec![0, 3, 7, 100]);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn sorted_rank_comparison_matches_sequence_order() {
        let a = Domain::from_ranks(4, [0u16, 3]);
        let b = Domain::from_ranks(4, [0u16, 5]);
        let c = Domain::from_ranks(4, [1u16, 2]);
        // (0,3) < (0,5) and (0,3) < (1,2)
        assert_eq!(a.cmp_sorted_ranks(&b), Ordering::Less);
        assert_eq!(a.cmp_sorted_ranks(&c), Ordering::Less);
        assert_eq!(b.cmp_sorted_ranks(&c), Ordering::Less);
        assert_eq!(a.cmp_sorted_ranks(&a), Ordering::Equal);
    }
}
