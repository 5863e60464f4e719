//! Permutations of `{1..n}` seen as linear orders, their dense lexicographic
//! ranking, inversion sets, and the cover relation of the weak Bruhat order.
//!
//! A permutation is stored as its slot sequence: `slots[j]` is the alternative
//! in position `j + 1`, position 1 being the most preferred. Lexicographic
//! ranking makes the natural order rank 0 and the full reversal rank `n! - 1`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::domain::Domain;
use crate::error::{Error, Result};

/// Largest degree with precomputed permutation tables (7! = 5040).
pub const MAX_DEGREE: usize = 7;

const FACTORIALS: [usize; 9] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320];

pub fn factorial(n: usize) -> usize {
    FACTORIALS[n]
}

/// Dense index of the alternative pair `(a, b)`, `1 <= a < b <= n`.
pub fn pair_index(a: u8, b: u8) -> usize {
    debug_assert!(a < b);
    let (a, b) = (a as usize, b as usize);
    (b - 2) * (b - 1) / 2 + (a - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// A linear order on the alternatives `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    slots: Vec<u8>,
}

impl Permutation {
    pub fn from_slots(slots: Vec<u8>) -> Result<Self> {
        let n = slots.len();
        if n < 2 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        let mut seen = [false; MAX_DEGREE + 1];
        for &s in &slots {
            if s == 0 || s as usize > n || seen[s as usize] {
                return Err(Error::InvalidPermutation(format!("{slots:?}")));
            }
            seen[s as usize] = true;
        }
        Ok(Permutation { slots })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            slots: (1..=n as u8).collect(),
        }
    }

    /// The reverse ordering `n < n-1 < ... < 1`, denoted `u`.
    pub fn reversal(n: usize) -> Self {
        Permutation {
            slots: (1..=n as u8).rev().collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[u8] {
        &self.slots
    }

    /// The order read back to front.
    pub fn reverse(&self) -> Permutation {
        let mut slots = self.slots.clone();
        slots.reverse();
        Permutation { slots }
    }

    /// As a map `alternative -> position` (both 1-based).
    pub fn inverse(&self) -> Permutation {
        let mut slots = vec![0u8; self.slots.len()];
        for (j, &a) in self.slots.iter().enumerate() {
            slots[a as usize - 1] = j as u8 + 1;
        }
        Permutation { slots }
    }

    /// Position (1-based) of each alternative, `pos[a-1]`.
    pub fn positions(&self) -> Vec<u8> {
        self.inverse().slots
    }

    pub fn rank(&self) -> u16 {
        rank_slots(&self.slots)
    }

    pub fn unrank(rank: usize, n: usize) -> Result<Permutation> {
        if n < 2 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        if rank >= factorial(n) {
            return Err(Error::RankOutOfRange { rank, degree: n });
        }
        Ok(Permutation {
            slots: unrank_slots(rank, n),
        })
    }

    pub fn inversions(&self) -> InversionSet {
        let n = self.degree();
        let pos = self.positions();
        let mut bits = 0u32;
        for b in 2..=n as u8 {
            for a in 1..b {
                if pos[b as usize - 1] < pos[a as usize - 1] {
                    bits |= 1 << pair_index(a, b);
                }
            }
        }
        InversionSet {
            degree: n as u8,
            bits,
        }
    }

    /// The members of `alts` in the relative order they occupy here.
    pub fn restrict(&self, alts: &[u8]) -> Result<Vec<u8>> {
        if alts.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(self
            .slots
            .iter()
            .copied()
            .filter(|a| alts.contains(a))
            .collect())
    }

    /// Relabels every alternative `a` by `g(a)`.
    pub fn relabel(&self, g: &Permutation) -> Permutation {
        Permutation {
            slots: self
                .slots
                .iter()
                .map(|&a| g.slots[a as usize - 1])
                .collect(),
        }
    }
}

fn rank_slots(slots: &[u8]) -> u16 {
    let n = slots.len();
    let mut rank = 0usize;
    for i in 0..n {
        let smaller_right = slots[i + 1..].iter().filter(|&&s| s < slots[i]).count();
        rank += smaller_right * factorial(n - 1 - i);
    }
    rank as u16
}

fn unrank_slots(mut rank: usize, n: usize) -> Vec<u8> {
    let mut avail: Vec<u8> = (1..=n as u8).collect();
    let mut slots = Vec::with_capacity(n);
    for i in 0..n {
        let f = factorial(n - 1 - i);
        let idx = rank / f;
        rank %= f;
        slots.push(avail.remove(idx));
    }
    slots
}

/// Inversions as alternative pairs `(a, b)`, `a < b`, with `b` preferred to `a`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct InversionSet {
    degree: u8,
    bits: u32,
}

impl InversionSet {
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn contains(&self, a: u8, b: u8) -> bool {
        self.bits >> pair_index(a, b) & 1 != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(&self, other: &InversionSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn complement(&self) -> InversionSet {
        let all = (1u32 << pair_count(self.degree as usize)) - 1;
        InversionSet {
            degree: self.degree,
            bits: all & !self.bits,
        }
    }

    pub fn symmetric_difference_len(&self, other: &InversionSet) -> usize {
        (self.bits ^ other.bits).count_ones() as usize
    }
}

/// True iff `hi` covers `lo` in the weak Bruhat order: `Inv(lo) ⊂ Inv(hi)`
/// with exactly one new inversion.
pub fn covers(lo: &Permutation, hi: &Permutation) -> bool {
    if lo.degree() != hi.degree() {
        return false;
    }
    let il = lo.inversions();
    let ih = hi.inversions();
    il.is_subset_of(&ih) && il.symmetric_difference_len(&ih) == 1
}

/// Applies the relabeling `g` to every member of `d`.
pub fn act(d: &Domain, g: &Permutation) -> Result<Domain> {
    if d.degree() != g.degree() {
        return Err(Error::DegreeMismatch(d.degree(), g.degree()));
    }
    let table = PermTable::get(d.degree());
    let g_rank = g.rank();
    let mut out = Domain::empty(d.degree());
    for r in d.ranks() {
        out.insert(table.relabel_rank(g_rank, r));
    }
    Ok(out)
}

/// Precomputed per-degree permutation tables shared by the whole crate.
pub struct PermTable {
    degree: usize,
    fact: usize,
    slots: Vec<u8>,
    inv: Vec<u16>,
    rev: Vec<u16>,
    adj: Vec<u16>,
    relabel: OnceLock<Vec<u16>>,
}

impl PermTable {
    pub fn get(degree: usize) -> &'static PermTable {
        assert!(
            (2..=MAX_DEGREE).contains(&degree),
            "degree {degree} out of table range"
        );
        static CACHE: OnceLock<Mutex<HashMap<usize, &'static PermTable>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry(degree)
            .or_insert_with(|| Box::leak(Box::new(PermTable::build(degree))))
    }

    fn build(degree: usize) -> PermTable {
        let fact = factorial(degree);
        let mut slots = Vec::with_capacity(fact * degree);
        let mut cur: Vec<u8> = (1..=degree as u8).collect();
        loop {
            slots.extend_from_slice(&cur);
            if !next_permutation(&mut cur) {
                break;
            }
        }
        debug_assert_eq!(slots.len(), fact * degree);

        let perm_at = |r: usize| &slots[r * degree..(r + 1) * degree];
        let mut inv = vec![0u16; fact];
        let mut rev = vec![0u16; fact];
        let mut adj = vec![0u16; fact * (degree - 1)];
        let mut buf = vec![0u8; degree];
        for r in 0..fact {
            let p = perm_at(r);
            for (j, &a) in p.iter().enumerate() {
                buf[a as usize - 1] = j as u8 + 1;
            }
            inv[r] = rank_slots(&buf);
            buf.copy_from_slice(p);
            buf.reverse();
            rev[r] = rank_slots(&buf);
            for pos in 0..degree - 1 {
                buf.copy_from_slice(p);
                buf.swap(pos, pos + 1);
                adj[r * (degree - 1) + pos] = rank_slots(&buf);
            }
        }
        PermTable {
            degree,
            fact,
            slots,
            inv,
            rev,
            adj,
            relabel: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn fact(&self) -> usize {
        self.fact
    }

    pub fn slots_of(&self, r: u16) -> &[u8] {
        let r = r as usize;
        &self.slots[r * self.degree..(r + 1) * self.degree]
    }

    pub fn perm(&self, r: u16) -> Permutation {
        Permutation {
            slots: self.slots_of(r).to_vec(),
        }
    }

    pub fn rank_of_slots(&self, slots: &[u8]) -> u16 {
        rank_slots(slots)
    }

    pub fn inverse_rank(&self, r: u16) -> u16 {
        self.inv[r as usize]
    }

    pub fn reverse_rank(&self, r: u16) -> u16 {
        self.rev[r as usize]
    }

    /// Rank after swapping positions `pos` and `pos + 1` (0-based).
    pub fn adjacent_rank(&self, r: u16, pos: usize) -> u16 {
        self.adj[r as usize * (self.degree - 1) + pos]
    }

    /// Rank of the member `s` relabeled by the permutation of rank `g`.
    pub fn relabel_rank(&self, g: u16, s: u16) -> u16 {
        let table = self.relabel.get_or_init(|| self.build_relabel());
        table[g as usize * self.fact + s as usize]
    }

    fn build_relabel(&self) -> Vec<u16> {
        let mut out = vec![0u16; self.fact * self.fact];
        let mut buf = vec![0u8; self.degree];
        for g in 0..self.fact {
            let gs = &self.slots[g * self.degree..(g + 1) * self.degree];
            for s in 0..self.fact {
                let p = &self.slots[s * self.degree..(s + 1) * self.degree];
                for (j, &a) in p.iter().enumerate() {
                    buf[j] = gs[a as usize - 1];
                }
                out[g * self.fact + s] = rank_slots(&buf);
            }
        }
        out
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_rank_zero() {
        assert_eq!(Permutation::identity(4).rank(), 0);
        assert_eq!(Permutation::reversal(4).rank(), 23);
    }

    #[test]
    fn rank_unrank_roundtrip_degree_4() {
        for r in 0..24 {
            let p = Permutation::unrank(r, 4).unwrap();
            assert_eq!(p.rank() as usize, r);
        }
    }

    #[test]
    fn degree_5_has_120_ranks() {
        let seen: std::collections::HashSet<u16> = (0..120)
            .map(|r| Permutation::unrank(r, 5).unwrap().rank())
            .collect();
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn out_of_range_rank_rejected() {
        assert!(Permutation::unrank(24, 4).is_err());
        assert!(Permutation::from_slots(vec![1, 2, 2, 4]).is_err());
    }

    #[test]
    fn reverse_is_involution() {
        let p = Permutation::from_slots(vec![1, 2, 3, 4, 5]).unwrap();
        assert_eq!(p.reverse().slots(), &[5, 4, 3, 2, 1]);
        assert_eq!(Permutation::reversal(5).reverse(), Permutation::identity(5));
        let q = Permutation::from_slots(vec![3, 1, 4, 2]).unwrap();
        assert_eq!(q.reverse().reverse(), q);
    }

    #[test]
    fn inversion_examples() {
        assert!(Permutation::identity(4).inversions().is_empty());
        assert_eq!(Permutation::reversal(4).inversions().len(), 6);
        let p = Permutation::from_slots(vec![2, 1, 3]).unwrap();
        let inv = p.inversions();
        assert_eq!(inv.len(), 1);
        assert!(inv.contains(1, 2));
    }

    #[test]
    fn reverse_complements_inversions_over_s4() {
        for r in 0..24 {
            let p = Permutation::unrank(r, 4).unwrap();
            assert_eq!(p.reverse().inversions(), p.inversions().complement());
        }
    }

    #[test]
    fn cover_examples() {
        let a = Permutation::from_slots(vec![1, 2, 3]).unwrap();
        let b = Permutation::from_slots(vec![2, 1, 3]).unwrap();
        let c = Permutation::from_slots(vec![3, 2, 1]).unwrap();
        assert!(covers(&a, &b));
        assert!(!covers(&a, &c));
        assert!(!covers(&b, &a));
    }

    #[test]
    fn s4_hasse_diagram_has_36_edges() {
        let mut edges = 0;
        for r in 0..24u16 {
            for s in 0..24u16 {
                let lo = Permutation::unrank(r as usize, 4).unwrap();
                let hi = Permutation::unrank(s as usize, 4).unwrap();
                if covers(&lo, &hi) {
                    edges += 1;
                }
            }
        }
        assert_eq!(edges, 36);
    }

    #[test]
    fn restrict_reads_off_relative_order() {
        let p = Permutation::from_slots(vec![4, 1, 3, 2, 5]).unwrap();
        assert_eq!(p.restrict(&[1, 2, 4]).unwrap(), vec![4, 1, 2]);
        assert_eq!(p.restrict(&[1, 2, 3, 4, 5]).unwrap(), p.slots().to_vec());
        assert!(p.restrict(&[]).is_err());
    }

    #[test]
    fn inversion_count_complementation_up_to_degree_5() {
        for n in 2..=5 {
            for r in 0..factorial(n) {
                let p = Permutation::unrank(r, n).unwrap();
                let total = p.inversions().len() + p.reverse().inversions().len();
                assert_eq!(total, pair_count(n));
            }
        }
    }

    #[test]
    fn relabel_by_inverse_of_member_yields_identity() {
        let g = Permutation::from_slots(vec![3, 1, 4, 2]).unwrap();
        assert_eq!(g.relabel(&g.inverse()), Permutation::identity(4));
    }

    #[test]
    fn table_agrees_with_direct_arithmetic() {
        let t = PermTable::get(5);
        for r in 0..t.fact() as u16 {
            let p = t.perm(r);
            assert_eq!(p.rank(), r);
            assert_eq!(t.inverse_rank(r), p.inverse().rank());
            assert_eq!(t.reverse_rank(r), p.reverse().rank());
        }
    }
}
