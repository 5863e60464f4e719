//! Never conditions (laws), principal closed permutation sets, and the
//! Galois closure operators between permutation sets and law sets.
//!
//! For a triple `a < b < c` the law `xNi` forbids `x` from position `i` in
//! the restriction of any member to `{a, b, c}`. The search only branches on
//! the six laws compatible with the natural order (`aN1`, `bN2`, `cN3` are
//! violated by the identity); classification quantifies over all nine forms.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::perm::{factorial, PermTable};

/// Fixed within-triple order of the six identity-compatible laws,
/// as `(x, pos)` with `x` indexing `(a, b, c)`.
pub const SEARCH_LAWS: [(u8, u8); 6] = [(0, 2), (0, 3), (1, 1), (1, 3), (2, 1), (2, 2)];

/// Nine-law index (`x * 3 + pos - 1`) of each search ordinal.
const SEARCH_IDX9: [u8; 6] = [1, 2, 3, 5, 6, 7];

/// Search ordinal of each nine-law index, 0xff for the identity-incompatible ones.
const ORDINAL_OF_IDX9: [u8; 9] = [0xff, 0, 1, 2, 0xff, 3, 4, 5, 0xff];

/// Restriction patterns as x-index sequences, in lexicographic code order.
const PATTERNS: [[u8; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// A never condition on one alternative triple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Law {
    /// Index of the triple in the fixed lexicographic triple order.
    pub triple: u16,
    /// Which member of the triple: 0 = a, 1 = b, 2 = c.
    pub x: u8,
    /// Forbidden position, 1..=3.
    pub pos: u8,
}

impl Law {
    fn idx9(&self) -> usize {
        (self.x * 3 + self.pos - 1) as usize
    }

    /// Position in the fixed within-triple order of the six
    /// identity-compatible laws, if this is one of them.
    pub fn search_ordinal(&self) -> Option<u8> {
        match ORDINAL_OF_IDX9[self.idx9()] {
            0xff => None,
            o => Some(o),
        }
    }

    pub fn from_ordinal(triple: u16, ordinal: u8) -> Law {
        let (x, pos) = SEARCH_LAWS[ordinal as usize];
        Law { triple, x, pos }
    }
}

pub fn triple_count(n: usize) -> usize {
    n * (n - 1) * (n - 2) / 6
}

/// All triples `a < b < c` of `{1..n}` in lexicographic order.
pub fn triples(n: usize) -> Vec<[u8; 3]> {
    let n = n as u8;
    let mut out = Vec::new();
    for a in 1..=n - 2 {
        for b in a + 1..=n - 1 {
            for c in b + 1..=n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// The fixed total order on identity-compatible laws used by the search.
pub fn law_order(n: usize) -> Vec<Law> {
    let mut out = Vec::with_capacity(triple_count(n) * 6);
    for t in 0..triple_count(n) as u16 {
        for o in 0..6 {
            out.push(Law::from_ordinal(t, o));
        }
    }
    out
}

/// Identifier of the triple/law ordering, embedded in file headers.
pub const LAW_ORDER_ID: &str = "lex-triples/aN2aN3bN1bN3cN1cN2";

fn viol9(code: u8) -> u16 {
    let p = PATTERNS[code as usize];
    1 << (p[0] * 3) | 1 << (p[1] * 3 + 1) | 1 << (p[2] * 3 + 2)
}

fn viol6(code: u8) -> u8 {
    let mut m = 0u8;
    for idx9 in 0..9 {
        if viol9(code) >> idx9 & 1 != 0 {
            let o = ORDINAL_OF_IDX9[idx9];
            if o != 0xff {
                m |= 1 << o;
            }
        }
    }
    m
}

/// Per-degree law tables: restriction-pattern partitions, principal closed
/// permutation sets, and cached unions of principal sets keyed by satisfied-law
/// bitmask (all precomputed as bit-strings, shared read-only).
pub struct LawTables {
    degree: usize,
    fact: usize,
    triples: Vec<[u8; 3]>,
    /// Pattern code of permutation `r` on triple `t`: `pat_code[t * fact + r]`.
    pat_code: Vec<u8>,
    /// `pattern_sets[t * 6 + code]`: members with that restriction pattern.
    pattern_sets: Vec<Domain>,
    /// `principal9[t * 9 + idx9]`: the principal closed set of one law.
    principal9: Vec<Domain>,
    /// `m_union[t * 64 + mask]`: union of the principal sets of the search
    /// laws in `mask`.
    m_union: Vec<Domain>,
    viol6: [u8; 6],
    viol9: [u16; 6],
    /// `forb6[o]`: the two restriction patterns violating search law `o`.
    forb6: [u8; 6],
}

impl LawTables {
    pub fn get(degree: usize) -> &'static LawTables {
        assert!((3..=crate::perm::MAX_DEGREE).contains(&degree));
        static CACHE: OnceLock<Mutex<HashMap<usize, &'static LawTables>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry(degree)
            .or_insert_with(|| Box::leak(Box::new(LawTables::build(degree))))
    }

    fn build(degree: usize) -> LawTables {
        let fact = factorial(degree);
        let perm_table = PermTable::get(degree);
        let trips = triples(degree);
        let nt = trips.len();

        let mut pat_code = vec![0u8; nt * fact];
        let mut pattern_sets = vec![Domain::empty(degree); nt * 6];
        for r in 0..fact as u16 {
            let slots = perm_table.slots_of(r);
            for (t, trip) in trips.iter().enumerate() {
                let mut seq = [0u8; 3];
                let mut k = 0;
                for &alt in slots {
                    if let Some(x) = trip.iter().position(|&m| m == alt) {
                        seq[k] = x as u8;
                        k += 1;
                    }
                }
                let code = PATTERNS.iter().position(|p| *p == seq).unwrap() as u8;
                pat_code[t * fact + r as usize] = code;
                pattern_sets[t * 6 + code as usize].insert(r);
            }
        }

        let viol9_tab: [u16; 6] = std::array::from_fn(|c| viol9(c as u8));
        let viol6_tab: [u8; 6] = std::array::from_fn(|c| viol6(c as u8));

        let mut principal9 = vec![Domain::empty(degree); nt * 9];
        for t in 0..nt {
            for idx9 in 0..9 {
                let d = &mut principal9[t * 9 + idx9];
                for code in 0..6 {
                    if viol9_tab[code] >> idx9 & 1 == 0 {
                        d.union_with(&pattern_sets[t * 6 + code]);
                    }
                }
            }
        }

        let mut m_union = vec![Domain::empty(degree); nt * 64];
        for t in 0..nt {
            for mask in 1usize..64 {
                let mut d = Domain::empty(degree);
                for o in 0..6 {
                    if mask >> o & 1 != 0 {
                        d.union_with(&principal9[t * 9 + SEARCH_IDX9[o] as usize]);
                    }
                }
                m_union[t * 64 + mask] = d;
            }
        }

        let mut forb6 = [0u8; 6];
        for code in 0..6 {
            for o in 0..6 {
                if viol6_tab[code] >> o & 1 != 0 {
                    forb6[o] |= 1 << code;
                }
            }
        }

        LawTables {
            degree,
            fact,
            triples: trips,
            pat_code,
            pattern_sets,
            principal9,
            m_union,
            viol6: viol6_tab,
            viol9: viol9_tab,
            forb6,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn triple(&self, t: usize) -> [u8; 3] {
        self.triples[t]
    }

    pub fn pattern_code(&self, t: usize, rank: u16) -> u8 {
        self.pat_code[t * self.fact + rank as usize]
    }

    pub fn pattern_set(&self, t: usize, code: u8) -> &Domain {
        &self.pattern_sets[t * 6 + code as usize]
    }

    /// The permutations of `S_n` obeying `law`; always of cardinality `2n!/3`.
    pub fn principal_set(&self, law: Law) -> &Domain {
        &self.principal9[law.triple as usize * 9 + law.idx9()]
    }

    pub fn principal_by_ordinal(&self, t: usize, ordinal: u8) -> &Domain {
        &self.principal9[t * 9 + SEARCH_IDX9[ordinal as usize] as usize]
    }

    /// Union of the principal sets of the search laws in `mask`.
    pub fn m_union(&self, t: usize, mask: u8) -> &Domain {
        &self.m_union[t * 64 + mask as usize]
    }

    /// Bitmask of restriction patterns of `d` present on triple `t`, testing
    /// only patterns in `candidates`.
    pub fn present_patterns(&self, d: &Domain, t: usize, candidates: u8) -> u8 {
        let mut present = 0u8;
        for code in 0..6 {
            if candidates >> code & 1 != 0 && d.intersects(&self.pattern_sets[t * 6 + code as usize])
            {
                present |= 1 << code;
            }
        }
        present
    }

    /// The restriction patterns whose presence violates search law `ordinal`.
    pub fn forbidden_patterns(&self, ordinal: u8) -> u8 {
        self.forb6[ordinal as usize]
    }

    /// Satisfied search laws given the present-pattern mask.
    pub fn sat_from_present(&self, present: u8) -> u8 {
        let mut sat = 0x3f;
        for code in 0..6 {
            if present >> code & 1 != 0 {
                sat &= !self.viol6[code as usize];
            }
        }
        sat
    }

    /// Bitmask over the six identity-compatible laws satisfied by `d` on `t`.
    pub fn sat6(&self, d: &Domain, t: usize) -> u8 {
        self.sat_from_present(self.present_patterns(d, t, 0x3f))
    }

    /// Bitmask over all nine law forms satisfied by `d` on `t`.
    pub fn sat9(&self, d: &Domain, t: usize) -> u16 {
        let mut sat = 0x1ff;
        for code in 0..6 {
            if sat == 0 {
                break;
            }
            if d.intersects(&self.pattern_sets[t * 6 + code as usize]) {
                sat &= !self.viol9[code as usize];
            }
        }
        sat
    }

    /// Every law whose principal set contains `d` on triple `t`. Unitary
    /// domains are tested against the six identity-compatible laws only;
    /// others against all nine forms.
    pub fn satisfied_laws(&self, d: &Domain, t: usize) -> Result<Vec<Law>> {
        if d.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let triple = t as u16;
        if d.is_unitary() {
            let sat = self.sat6(d, t);
            Ok((0..6)
                .filter(|o| sat >> o & 1 != 0)
                .map(|o| Law::from_ordinal(triple, o))
                .collect())
        } else {
            let sat = self.sat9(d, t);
            Ok((0..9u8)
                .filter(|i| sat >> i & 1 != 0)
                .map(|i| Law {
                    triple,
                    x: i / 3,
                    pos: i % 3 + 1,
                })
                .collect())
        }
    }

    /// Intersection of the principal sets; the empty law set closes to `S_n`.
    pub fn closure_of_laws(&self, laws: &[Law]) -> Domain {
        let mut d = Domain::full(self.degree);
        for &law in laws {
            d.intersect_with(self.principal_set(law));
        }
        d
    }

    /// The permutations obeying every law (all nine forms) that every member
    /// of `d` obeys. Extensive, monotone, and idempotent.
    pub fn closure_of_set(&self, d: &Domain) -> Result<Domain> {
        if d.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let mut out = Domain::full(self.degree);
        for t in 0..self.triple_count() {
            let sat = self.sat9(d, t);
            for idx9 in 0..9 {
                if sat >> idx9 & 1 != 0 {
                    out.intersect_with(&self.principal9[t * 9 + idx9]);
                }
            }
        }
        Ok(out)
    }

    /// Sen's criterion: a Condorcet domain satisfies at least one of the nine
    /// laws on every triple.
    pub fn is_cd(&self, d: &Domain) -> bool {
        (0..self.triple_count()).all(|t| self.sat9(d, t) != 0)
    }

    /// True iff `d` is a CD and no further permutation can be added without
    /// breaking the CD property.
    pub fn is_maximal_cd(&self, d: &Domain) -> bool {
        if !self.is_cd(d) {
            return false;
        }
        let mut probe = d.clone();
        for r in 0..self.fact as u16 {
            if d.contains(r) {
                continue;
            }
            probe.insert(r);
            if self.is_cd(&probe) {
                return false;
            }
            probe.remove(r);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn law_order_counts() {
        assert_eq!(law_order(4).len(), 24);
        assert_eq!(triple_count(7), 35);
        assert_eq!(law_order(7).len(), 210);
        let first = law_order(5)[0];
        assert_eq!(first.triple, 0);
        assert_eq!((first.x, first.pos), (0, 2)); // 1N2 on (1,2,3)
    }

    #[test]
    fn principal_sets_have_cardinality_two_thirds() {
        for n in 3..=6 {
            let t = LawTables::get(n);
            for law in law_order(n) {
                assert_eq!(t.principal_set(law).len(), 2 * factorial(n) / 3);
            }
        }
    }

    #[test]
    fn principal_set_2n2_on_s3() {
        let t = LawTables::get(3);
        // 2N2 = middle alternative never in the middle position.
        let law = Law { triple: 0, x: 1, pos: 2 };
        let expect: Vec<Vec<u8>> = vec![
            vec![1, 3, 2],
            vec![2, 1, 3],
            vec![2, 3, 1],
            vec![3, 1, 2],
        ];
        let got: Vec<Vec<u8>> = t
            .principal_set(law)
            .perms()
            .iter()
            .map(|p| p.slots().to_vec())
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn identity_in_every_identity_compatible_principal_set() {
        let t = LawTables::get(5);
        for law in law_order(5) {
            assert!(t.principal_set(law).is_unitary());
        }
    }

    #[test]
    fn full_sn_satisfies_no_law() {
        let t = LawTables::get(4);
        let full = Domain::full(4);
        for tr in 0..t.triple_count() {
            assert!(t.satisfied_laws(&full, tr).unwrap().is_empty());
        }
    }

    #[test]
    fn singleton_identity_satisfies_all_six() {
        let t = LawTables::get(3);
        let d = Domain::from_ranks(3, [0u16]);
        assert_eq!(t.satisfied_laws(&d, 0).unwrap().len(), 6);
    }

    #[test]
    fn empty_law_set_closes_to_full_sn() {
        let t = LawTables::get(4);
        assert_eq!(t.closure_of_laws(&[]).len(), 24);
    }

    #[test]
    fn all_six_laws_on_s3_close_to_identity_and_reversal() {
        let t = LawTables::get(3);
        // 1 never mid/last, 2 never first/last, 3 never first/mid: only 123.
        let d = t.closure_of_laws(&law_order(3));
        let ranks: Vec<u16> = d.ranks().collect();
        assert_eq!(ranks, vec![0]);
    }

    #[test]
    fn closure_of_identity_singleton_is_itself() {
        let t = LawTables::get(3);
        let d = Domain::from_ranks(3, [0u16]);
        assert_eq!(t.closure_of_set(&d).unwrap(), d);
    }

    #[test]
    fn condorcet_cycle_is_not_a_cd() {
        let t = LawTables::get(3);
        let cycle = Domain::from_perms(
            3,
            &[
                Permutation::from_slots(vec![1, 2, 3]).unwrap(),
                Permutation::from_slots(vec![2, 3, 1]).unwrap(),
                Permutation::from_slots(vec![3, 1, 2]).unwrap(),
            ],
        );
        assert!(!t.is_cd(&cycle));
    }

    #[test]
    fn single_orders_are_cds() {
        let t = LawTables::get(5);
        for r in [0u16, 17, 119] {
            assert!(t.is_cd(&Domain::from_ranks(5, [r])));
        }
    }
}
