//! Brute-force reference implementations used to validate the law machinery
//! and the tree search. Everything here works from first principles on raw
//! permutations: a set is a Condorcet domain iff no three members restrict
//! to a Latin square on some triple of alternatives.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::perm::{factorial, PermTable};

/// Restriction pattern of `slots` to alternatives `a < b < c`, coded as the
/// lexicographic index of the induced order (abc=0, acb=1, ..., cba=5).
fn pattern(slots: &[u8], a: u8, b: u8, c: u8) -> u8 {
    let mut digits = [0u8; 3];
    let mut k = 0;
    for &s in slots {
        if s == a || s == b || s == c {
            digits[k] = if s == a {
                0
            } else if s == b {
                1
            } else {
                2
            };
            k += 1;
        }
    }
    digits[0] * 2 + u8::from(digits[1] > digits[2])
}

/// True iff the three orders restrict to a Latin square on some alternative
/// triple, i.e. their patterns there form one of the two cyclic orbits.
fn bad_triple(p: &[u8], q: &[u8], r: &[u8], degree: usize) -> bool {
    for a in 1..=degree as u8 {
        for b in a + 1..=degree as u8 {
            for c in b + 1..=degree as u8 {
                let mut mask = 0u8;
                mask |= 1 << pattern(p, a, b, c);
                mask |= 1 << pattern(q, a, b, c);
                mask |= 1 << pattern(r, a, b, c);
                // {abc, bca, cab} = bits {0,3,4}; {acb, bac, cba} = {1,2,5}
                if mask == 0b011001 || mask == 0b100110 {
                    return true;
                }
            }
        }
    }
    false
}

/// Condorcet-domain test by exhaustive member-triple inspection.
pub fn is_cd(d: &Domain) -> bool {
    let table = PermTable::get(d.degree());
    let ranks: Vec<u16> = d.ranks().collect();
    for i in 0..ranks.len() {
        for j in i + 1..ranks.len() {
            for k in j + 1..ranks.len() {
                if bad_triple(
                    table.slots_of(ranks[i]),
                    table.slots_of(ranks[j]),
                    table.slots_of(ranks[k]),
                    d.degree(),
                ) {
                    return false;
                }
            }
        }
    }
    true
}

/// Maximality probe: a Condorcet domain no proper superset extends.
pub fn is_maximal_cd(d: &Domain) -> bool {
    if !is_cd(d) {
        return false;
    }
    let fact = factorial(d.degree());
    let mut probe = d.clone();
    for r in 0..fact as u16 {
        if d.contains(r) {
            continue;
        }
        probe.insert(r);
        let extendable = is_cd(&probe);
        probe.remove(r);
        if extendable {
            return false;
        }
    }
    true
}

/// Every maximal Condorcet domain of the given degree, by recursive
/// enumeration of maximal bad-triple-free sets. Exponential; degree <= 4.
pub fn maximal_cds(degree: usize) -> Result<Vec<Domain>> {
    if !(3..=4).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    let fact = factorial(degree);
    let table = PermTable::get(degree);

    // badmask[p][q] has bit r set iff {p, q, r} contains a Latin triple.
    let mut badmask = vec![vec![0u32; fact]; fact];
    for p in 0..fact {
        for q in p + 1..fact {
            for r in q + 1..fact {
                if bad_triple(
                    table.slots_of(p as u16),
                    table.slots_of(q as u16),
                    table.slots_of(r as u16),
                    degree,
                ) {
                    badmask[p][q] |= 1 << r;
                    badmask[p][r] |= 1 << q;
                    badmask[q][r] |= 1 << p;
                    badmask[q][p] |= 1 << r;
                    badmask[r][p] |= 1 << q;
                    badmask[r][q] |= 1 << p;
                }
            }
        }
    }

    struct Rec<'a> {
        fact: usize,
        badmask: &'a [Vec<u32>],
        chosen: Vec<usize>,
        out: Vec<Domain>,
        degree: usize,
    }
    impl Rec<'_> {
        // `blocked`: ranks whose addition to `chosen` creates a bad triple.
        // `skipped`: ranks passed over while still addable; the leaf is a
        // maximal set iff every skipped rank has since become blocked.
        fn go(&mut self, idx: usize, blocked: u32, skipped: u32) {
            if idx == self.fact {
                if skipped & !blocked == 0 {
                    self.out.push(Domain::from_ranks(
                        self.degree,
                        self.chosen.iter().map(|&r| r as u16),
                    ));
                }
                return;
            }
            let addable = blocked >> idx & 1 == 0;
            if addable {
                let mut nb = blocked;
                for &p in &self.chosen {
                    nb |= self.badmask[p.min(idx)][p.max(idx)];
                }
                self.chosen.push(idx);
                self.go(idx + 1, nb, skipped);
                self.chosen.pop();
                self.go(idx + 1, blocked, skipped | 1 << idx);
            } else {
                self.go(idx + 1, blocked, skipped);
            }
        }
    }
    let mut rec = Rec {
        fact,
        badmask: &badmask,
        chosen: Vec::new(),
        out: Vec::new(),
        degree,
    };
    rec.go(0, 0, 0);
    Ok(rec.out)
}

/// The unitary maximal Condorcet domains, as a sorted set.
pub fn maximal_unitary_cds(degree: usize) -> Result<std::collections::BTreeSet<Domain>> {
    Ok(maximal_cds(degree)?
        .into_iter()
        .filter(Domain::is_unitary)
        .collect())
}
