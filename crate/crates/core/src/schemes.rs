//! Constructive domain generators: the alternating scheme, the replacement
//! composition, and Black's single-peaked domain.

use crate::canon::dual;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::laws::{triples, Law, LawTables};
use crate::perm::{factorial, PermTable, MAX_DEGREE};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlternatingVariant {
    A,
    B,
}

/// The alternating scheme: on each triple a < b < c impose bN1 if b is even
/// and bN3 if b is odd. The B variant is the dual of the A variant.
pub fn alternating(n: usize, variant: AlternatingVariant) -> Domain {
    let tables = LawTables::get(n);
    let laws: Vec<Law> = triples(n)
        .iter()
        .enumerate()
        .map(|(t, &[_, b, _])| Law {
            triple: t as u16,
            x: 1,
            pos: if b % 2 == 0 { 1 } else { 3 },
        })
        .collect();
    let a = tables.closure_of_laws(&laws);
    match variant {
        AlternatingVariant::A => a,
        AlternatingVariant::B => dual(&a),
    }
}

/// Closed-form size of the alternating scheme.
pub fn alternating_size(n: usize) -> usize {
    let pow = 1usize << (n - 3);
    if n % 2 == 0 {
        // The binomial is a central coefficient, hence even; the product
        // with the half-integer (2n-3)/2 stays integral.
        pow * (n + 3) - binomial(n - 2, n / 2 - 1) * (2 * n - 3) / 2
    } else {
        pow * (n + 3) - binomial(n - 1, (n - 1) / 2) * (n - 1) / 2
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let mut v = 1usize;
    for i in 0..k {
        v = v * (n - i) / (i + 1);
    }
    v
}

/// Replacement composition: substitute the largest alternative of `a`
/// (degree k+1) by whole members of `b` (degree l, relabeled to
/// {k+1, ..., k+l}), yielding a domain of degree k+l and size |a|·|b|.
pub fn replacement(a: &Domain, b: &Domain) -> Result<Domain> {
    let k = a.degree() - 1;
    let l = b.degree();
    let n = k + l;
    if !(3..=MAX_DEGREE).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let table = PermTable::get(n);
    let hole = (k + 1) as u8;
    let mut out = Domain::empty(n);
    let mut slots = Vec::with_capacity(n);
    for alpha in a.perms() {
        for beta in b.perms() {
            slots.clear();
            for &s in alpha.slots() {
                if s == hole {
                    slots.extend(beta.slots().iter().map(|&t| t + k as u8));
                } else {
                    slots.push(s);
                }
            }
            out.insert(table.rank_of_slots(&slots));
        }
    }
    Ok(out)
}

/// Black's single-peaked domain on the axis 1 < 2 < ... < n: the orders
/// whose every top-k prefix is an interval of the axis. Size 2^{n-1}.
pub fn black_single_peaked(n: usize) -> Domain {
    let table = PermTable::get(n);
    let mut out = Domain::empty(n);
    'perm: for r in 0..factorial(n) as u16 {
        let slots = table.slots_of(r);
        let (mut lo, mut hi) = (slots[0], slots[0]);
        // A prefix of length k is an axis interval iff hi - lo = k - 1.
        for (k, &s) in slots.iter().enumerate().skip(1) {
            lo = lo.min(s);
            hi = hi.max(s);
            if (hi - lo) as usize != k {
                continue 'perm;
            }
        }
        out.insert(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphic;
    use crate::oracle;

    #[test]
    fn alternating_sizes_match_formula() {
        for n in 3..=7 {
            assert_eq!(
                alternating(n, AlternatingVariant::A).len(),
                alternating_size(n),
                "degree {n}"
            );
        }
    }

    #[test]
    fn alternating_size_values() {
        assert_eq!(
            (3..=7).map(alternating_size).collect::<Vec<_>>(),
            vec![4, 9, 20, 45, 100]
        );
    }

    #[test]
    fn a_and_b_variants_are_flip_equivalent() {
        // For even degree the two variants are isomorphic (the class is
        // self-dual); for odd degree they are distinct flip twins.
        for n in [4, 6] {
            let a = alternating(n, AlternatingVariant::A);
            let b = alternating(n, AlternatingVariant::B);
            assert!(isomorphic(&a, &b).unwrap(), "degree {n}");
        }
        let a = alternating(5, AlternatingVariant::A);
        let b = alternating(5, AlternatingVariant::B);
        assert!(!isomorphic(&a, &b).unwrap());
        let ka = crate::canon::ClassKey::of(&a).unwrap();
        let kb = crate::canon::ClassKey::of(&b).unwrap();
        assert_eq!(ka.flip_canonical, kb.flip_canonical);
        assert_ne!(ka.canonical, kb.canonical);
    }

    #[test]
    fn alternating_is_unitary_and_maximal() {
        for n in 3..=5 {
            let a = alternating(n, AlternatingVariant::A);
            assert!(a.is_unitary());
            assert!(LawTables::get(n).is_maximal_cd(&a));
        }
    }

    #[test]
    fn degree_3_alternating_is_the_2n1_closure() {
        let a = alternating(3, AlternatingVariant::A);
        let tables = LawTables::get(3);
        let l = Law {
            triple: 0,
            x: 1,
            pos: 1,
        };
        assert_eq!(a, tables.closure_of_laws(&[l]));
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn replacement_multiplies_sizes_and_stays_a_cd() {
        let a = alternating(4, AlternatingVariant::A);
        let b = alternating(3, AlternatingVariant::A);
        let c = replacement(&a, &b).unwrap();
        assert_eq!(c.degree(), 6);
        assert_eq!(c.len(), a.len() * b.len());
        assert!(c.is_unitary());
        assert!(LawTables::get(6).is_cd(&c));
    }

    #[test]
    fn replacement_of_pairs_gives_the_1n2_domain() {
        // Two 2-member factors: {12, 21} composed with {34, 43} relabeled.
        let a = Domain::from_ranks(3, [0u16, 4]); // 123 and 231: 3 replaced
        let b = Domain::from_ranks(2, [0u16, 1]);
        let c = replacement(&a, &b).unwrap();
        assert_eq!(c.degree(), 4);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn replacement_of_maximal_factors_is_maximal() {
        let a = alternating(3, AlternatingVariant::A);
        let b = alternating(3, AlternatingVariant::A);
        let c = replacement(&a, &b).unwrap();
        assert_eq!(c.degree(), 5);
        assert_eq!(c.len(), 16);
        assert!(oracle::is_cd(&c));
        assert!(LawTables::get(5).is_maximal_cd(&c));
    }

    #[test]
    fn black_sizes_and_membership() {
        for n in 2..=7 {
            let d = black_single_peaked(n);
            assert_eq!(d.len(), 1 << (n - 1), "degree {n}");
            assert!(d.is_unitary());
        }
        let d3 = black_single_peaked(3);
        // {123, 213, 231, 321}
        assert_eq!(d3.ranks().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
    }

    #[test]
    fn black_is_a_maximal_cd_at_small_degrees() {
        for n in 3..=5 {
            let d = black_single_peaked(n);
            assert!(oracle::is_cd(&d));
            assert!(LawTables::get(n).is_maximal_cd(&d));
        }
    }
}
