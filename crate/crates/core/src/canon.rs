//! Isomorphism testing, canonical forms, duals, cores, and stream
//! deduplication of enumerated domains into isomorphism and flip classes.
//!
//! Two domains are isomorphic iff one is a relabeling of the other. The
//! canonical form of a class is the maximal unitarized candidate
//! `{A g^{-1} : g in A}` under sorted-rank-sequence comparison, so equality
//! of canonical forms decides isomorphism.

use std::collections::{BTreeSet, HashSet};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::perm::{act, PermTable, Permutation};

/// Comparator identifier embedded in file headers.
pub const COMPARATOR_ID: &str = "sorted-ranks-lexmax";

/// One isomorphism class together with its flip (isometry) data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassKey {
    pub canonical: Domain,
    pub flip_canonical: Domain,
    pub reflexive: bool,
}

impl ClassKey {
    pub fn of(d: &Domain) -> Result<ClassKey> {
        let canonical = canonical_form(d)?;
        let conj_canonical = canonical_form(&conjugate(&canonical))?;
        let reflexive = canonical == conj_canonical;
        let flip_canonical = canonical.clone().max(conj_canonical);
        Ok(ClassKey {
            canonical,
            flip_canonical,
            reflexive,
        })
    }

    pub fn size(&self) -> usize {
        self.canonical.len()
    }
}

/// The class representative: maximal over the unitarized candidates.
pub fn canonical_form(d: &Domain) -> Result<Domain> {
    if d.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let table = PermTable::get(d.degree());
    let ranks: Vec<u16> = d.ranks().collect();
    let mut best = Domain::empty(d.degree());
    let mut first = true;
    let mut cand = Domain::empty(d.degree());
    for &g in &ranks {
        let gi = table.inverse_rank(g);
        cand.words_mut().fill(0);
        for &s in &ranks {
            cand.insert(table.relabel_rank(gi, s));
        }
        if first || cand.cmp_sorted_ranks(&best) == std::cmp::Ordering::Greater {
            std::mem::swap(&mut best, &mut cand);
            first = false;
        }
    }
    Ok(best)
}

/// Number of distinct unitarized candidates, `|A| / |core(A)|`.
pub fn candidate_count(d: &Domain) -> Result<usize> {
    let table = PermTable::get(d.degree());
    let ranks: Vec<u16> = d.ranks().collect();
    let mut seen = HashSet::new();
    let mut cand = Domain::empty(d.degree());
    for &g in &ranks {
        let gi = table.inverse_rank(g);
        cand.words_mut().fill(0);
        for &s in &ranks {
            cand.insert(table.relabel_rank(gi, s));
        }
        seen.insert(cand.clone());
    }
    Ok(seen.len())
}

pub fn isomorphic(a: &Domain, b: &Domain) -> Result<bool> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    let table = PermTable::get(a.degree());
    let a1 = unitarize(a);
    let b1 = unitarize(b);
    let a_ranks: Vec<u16> = a1.ranks().collect();
    let mut cand = Domain::empty(a.degree());
    // {g^{-1} A1 : g in A1} is exactly the set of unitary isomorphs of A1.
    for &g in &a_ranks {
        let gi = table.inverse_rank(g);
        cand.words_mut().fill(0);
        for &s in &a_ranks {
            cand.insert(table.relabel_rank(gi, s));
        }
        if cand == b1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Relabels by the inverse of the first member, yielding a unitary isomorph.
pub fn unitarize(d: &Domain) -> Domain {
    if d.is_unitary() {
        return d.clone();
    }
    let table = PermTable::get(d.degree());
    let g = d.ranks().next().expect("nonempty domain");
    let gi = table.inverse_rank(g);
    let mut out = Domain::empty(d.degree());
    for s in d.ranks() {
        out.insert(table.relabel_rank(gi, s));
    }
    out
}

/// Every member read back to front: `uA`.
pub fn dual(d: &Domain) -> Domain {
    let table = PermTable::get(d.degree());
    let mut out = Domain::empty(d.degree());
    for r in d.ranks() {
        out.insert(table.reverse_rank(r));
    }
    out
}

/// The unitary relabeled dual `A^u = uAu`.
pub fn conjugate(d: &Domain) -> Domain {
    let u = Permutation::reversal(d.degree());
    act(&dual(d), &u).expect("equal degrees")
}

/// The subgroup `{g in A : Ag = A}` of a unitary domain.
pub fn core(d: &Domain) -> Result<Domain> {
    if !d.is_unitary() {
        return Err(Error::NotUnitary);
    }
    let table = PermTable::get(d.degree());
    let ranks: Vec<u16> = d.ranks().collect();
    let mut out = Domain::empty(d.degree());
    let mut cand = Domain::empty(d.degree());
    for &g in &ranks {
        cand.words_mut().fill(0);
        for &s in &ranks {
            cand.insert(table.relabel_rank(g, s));
        }
        if cand == *d {
            out.insert(g);
        }
    }
    Ok(out)
}

/// Deduplicated canonical forms of a leaf stream, sorted ascending.
pub fn dedup(leaves: impl IntoIterator<Item = Domain>) -> Result<BTreeSet<Domain>> {
    let mut degree = None;
    let mut out = BTreeSet::new();
    let mut seen: HashSet<Domain> = HashSet::new();
    for leaf in leaves {
        match degree {
            None => degree = Some(leaf.degree()),
            Some(n) if n != leaf.degree() => {
                return Err(Error::DegreeMismatch(n, leaf.degree()))
            }
            _ => {}
        }
        if seen.insert(leaf.clone()) {
            out.insert(canonical_form(&leaf)?);
        }
    }
    Ok(out)
}

/// Class keys (including flip data) for a set of canonical forms.
pub fn class_keys(classes: &BTreeSet<Domain>) -> Result<Vec<ClassKey>> {
    classes.iter().map(ClassKey::of).collect()
}

/// Number of flip (isometry) classes among the given class keys.
pub fn flip_class_count(keys: &[ClassKey]) -> usize {
    let set: BTreeSet<&Domain> = keys.iter().map(|k| &k.flip_canonical).collect();
    set.len()
}
