//! The reduced Condorcet tree search: branch on the six identity-compatible
//! laws per triple, force a single descendant when a triple already has an
//! implied law, abandon branches whose applied-law string is dominated by an
//! implied law, and cut nodes that are not maximal among the sets satisfying
//! a law on every visited triple.
//!
//! The engine emits raw maximal leaves; isomorphism reduction is downstream.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::canon::canonical_form;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::laws::{Law, LawTables};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Skip branches whose applied law removes exactly the same members as a
    /// later law on the triple (the identical child is expanded once, under
    /// the lexicographically last of the equivalent laws).
    pub precedence_prune: bool,
    /// Depth at which to split work across workers; `None` picks the
    /// smallest depth yielding at least `8 * jobs` frontier nodes.
    pub frontier_depth: Option<usize>,
    /// Worker count; 0 uses all available threads.
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            precedence_prune: true,
            frontier_depth: None,
            jobs: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub forced_steps: u64,
    pub pruned_precedence: u64,
    pub cut_non_maximal: u64,
    pub leaves: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: SearchStats) {
        self.nodes += o.nodes;
        self.forced_steps += o.forced_steps;
        self.pruned_precedence += o.pruned_precedence;
        self.cut_non_maximal += o.cut_non_maximal;
        self.leaves += o.leaves;
    }
}

/// A vertex of the reduced Condorcet tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchNode {
    pub degree: usize,
    pub depth: usize,
    pub current: Domain,
    /// Within-triple law ordinal applied at each visited triple.
    pub applied: Vec<u8>,
    /// Bit per visited triple marking forced (single-descendant) steps.
    pub forced: u64,
}

impl SearchNode {
    pub fn root(degree: usize) -> SearchNode {
        SearchNode {
            degree,
            depth: 0,
            current: Domain::full(degree),
            applied: Vec::new(),
            forced: 0,
        }
    }

    /// Rebuilds a node from its applied-law string.
    pub fn from_path(degree: usize, applied: &[u8], forced: u64) -> Result<SearchNode> {
        let tables = LawTables::get(degree);
        if applied.len() > tables.triple_count() {
            return Err(Error::Invariant(format!(
                "path of length {} exceeds {} triples",
                applied.len(),
                tables.triple_count()
            )));
        }
        let mut node = SearchNode::root(degree);
        for (t, &o) in applied.iter().enumerate() {
            if o > 5 {
                return Err(Error::Invariant(format!("law ordinal {o} out of range")));
            }
            node = node.descend(Law::from_ordinal(t as u16, o))?;
        }
        node.forced = forced;
        Ok(node)
    }

    /// Child obtained by intersecting with the law's principal set. The
    /// forced bit is set when the law was already implied.
    pub fn descend(&self, law: Law) -> Result<SearchNode> {
        if law.triple as usize != self.depth {
            return Err(Error::Invariant(format!(
                "law on triple {} applied at depth {}",
                law.triple, self.depth
            )));
        }
        let ordinal = law
            .search_ordinal()
            .ok_or_else(|| Error::Invariant("law not identity-compatible".into()))?;
        let tables = LawTables::get(self.degree);
        let principal = tables.principal_set(law);
        let mut current = self.current.clone();
        current.intersect_with(principal);
        let mut forced = self.forced;
        if self.current.is_subset_of(principal) {
            forced |= 1 << self.depth;
        }
        let mut applied = self.applied.clone();
        applied.push(ordinal);
        Ok(SearchNode {
            degree: self.degree,
            depth: self.depth + 1,
            current,
            applied,
            forced,
        })
    }

    /// The minimum law already implied on the next triple, if any.
    pub fn forced_law(&self) -> Option<Law> {
        let tables = LawTables::get(self.degree);
        if self.depth >= tables.triple_count() {
            return None;
        }
        let sat = tables.sat6(&self.current, self.depth);
        if sat == 0 {
            None
        } else {
            Some(Law::from_ordinal(
                self.depth as u16,
                sat.trailing_zeros() as u8,
            ))
        }
    }

    /// Maximality among the sets satisfying a law on every visited triple:
    /// the intersection of the per-triple unions of satisfied principal sets
    /// must equal the current set.
    pub fn is_t_mucd(&self) -> bool {
        let tables = LawTables::get(self.degree);
        let mut b = Domain::full(self.degree);
        for s in 0..self.depth {
            let sat = tables.sat6(&self.current, s);
            b.intersect_with(tables.m_union(s, sat));
        }
        b == self.current
    }
}

/// True iff the branch applying `ordinal` to a set with the given
/// present-pattern mask is redundant: some later law removes exactly the same
/// members, so the identical child is expanded under that law instead. Two
/// laws act identically on the set iff no present pattern separates their
/// forbidden-pattern pairs.
pub fn redundant_law(tables: &LawTables, present: u8, ordinal: u8) -> bool {
    let f = tables.forbidden_patterns(ordinal);
    (ordinal + 1..6).any(|o| present & (f ^ tables.forbidden_patterns(o)) == 0)
}

struct Walker<'a> {
    tables: &'a LawTables,
    prune: bool,
    nt: usize,
    words: usize,
    stats: SearchStats,
    applied: Vec<u8>,
    forced: u64,
    /// Per-depth current sets; `currents[d]` is the set at depth `d`.
    currents: Vec<Domain>,
    /// `presents[d][s]` for `s <= d`: present-pattern mask of `currents[d]`
    /// on triple `s`.
    presents: Vec<Vec<u8>>,
    b_buf: Vec<u64>,
    stop_depth: Option<usize>,
    frontier: Vec<SearchNode>,
}

impl<'a> Walker<'a> {
    fn new(tables: &'a LawTables, prune: bool, stop_depth: Option<usize>) -> Walker<'a> {
        let nt = tables.triple_count();
        let degree = tables.degree();
        let words = crate::domain::word_count(degree);
        Walker {
            tables,
            prune,
            nt,
            words,
            stats: SearchStats::default(),
            applied: vec![0; nt],
            forced: 0,
            currents: vec![Domain::empty(degree); nt + 1],
            presents: (0..=nt).map(|d| vec![0u8; d + 1]).collect(),
            b_buf: vec![0u64; words],
            stop_depth,
            frontier: Vec::new(),
        }
    }

    fn start(&mut self, node: &SearchNode, sink: &mut dyn FnMut(&Domain)) {
        let depth = node.depth;
        self.currents[depth] = node.current.clone();
        self.applied[..depth].copy_from_slice(&node.applied);
        self.forced = node.forced;
        for s in 0..depth {
            self.presents[depth][s] = self.tables.present_patterns(&node.current, s, 0x3f);
        }
        self.walk(depth, sink);
    }

    fn walk(&mut self, depth: usize, sink: &mut dyn FnMut(&Domain)) {
        self.stats.nodes += 1;
        if self.stop_depth == Some(depth) {
            self.frontier.push(SearchNode {
                degree: self.tables.degree(),
                depth,
                current: self.currents[depth].clone(),
                applied: self.applied[..depth].to_vec(),
                forced: self.forced & ((1u64 << depth) - 1),
            });
            return;
        }
        if depth == self.nt {
            self.stats.leaves += 1;
            sink(&self.currents[depth]);
            return;
        }

        let pres_t = self
            .tables
            .present_patterns(&self.currents[depth], depth, 0x3f);
        self.presents[depth][depth] = pres_t;
        let sat_t = self.tables.sat_from_present(pres_t);

        if sat_t != 0 {
            // Implied law: single forced descendant, current unchanged.
            self.stats.forced_steps += 1;
            self.applied[depth] = sat_t.trailing_zeros() as u8;
            self.forced |= 1 << depth;
            self.currents[depth + 1] = self.currents[depth].clone();
            let (head, tail) = self.presents.split_at_mut(depth + 1);
            tail[0][..=depth].copy_from_slice(&head[depth][..=depth]);
            self.walk(depth + 1, sink);
            self.forced &= !(1 << depth);
            return;
        }

        for ordinal in 0..6u8 {
            if self.prune && redundant_law(self.tables, pres_t, ordinal) {
                self.stats.pruned_precedence += 1;
                continue;
            }
            let principal = self.tables.principal_by_ordinal(depth, ordinal);
            {
                let (head, tail) = self.currents.split_at_mut(depth + 1);
                let child = &mut tail[0];
                child.words_mut().copy_from_slice(head[depth].words());
                child.intersect_with(principal);
            }
            self.applied[depth] = ordinal;

            // Recheck every visited triple on the shrunken set for the
            // maximality intersection.
            self.b_buf.fill(!0u64);
            for s in 0..=depth {
                let prev = if s == depth {
                    pres_t
                } else {
                    self.presents[depth][s]
                };
                let cp = self
                    .tables
                    .present_patterns(&self.currents[depth + 1], s, prev);
                self.presents[depth + 1][s] = cp;
                let sat = self.tables.sat_from_present(cp);
                for (b, m) in self
                    .b_buf
                    .iter_mut()
                    .zip(self.tables.m_union(s, sat).words())
                {
                    *b &= m;
                }
            }
            if self.b_buf[..self.words] == *self.currents[depth + 1].words() {
                self.walk(depth + 1, sink);
            } else {
                self.stats.cut_non_maximal += 1;
            }
        }
    }
}

/// Runs the search below `node`, passing every surviving leaf to `sink`.
pub fn resume_with_sink(
    node: &SearchNode,
    cfg: &SearchConfig,
    sink: &mut dyn FnMut(&Domain),
) -> SearchStats {
    let tables = LawTables::get(node.degree);
    let mut walker = Walker::new(tables, cfg.precedence_prune, None);
    walker.start(node, sink);
    walker.stats
}

/// Raw leaves of the subtree below `node` (duplicates across classes allowed).
pub fn resume(node: &SearchNode, cfg: &SearchConfig) -> (Vec<Domain>, SearchStats) {
    let mut leaves = Vec::new();
    let stats = resume_with_sink(node, cfg, &mut |d| leaves.push(d.clone()));
    (leaves, stats)
}

/// Deduplicated canonical classes of the subtree below `node`.
pub fn resume_classes(node: &SearchNode, cfg: &SearchConfig) -> (BTreeSet<Domain>, SearchStats) {
    let mut seen: HashSet<Domain> = HashSet::new();
    let mut classes = BTreeSet::new();
    let stats = resume_with_sink(node, cfg, &mut |leaf| {
        if seen.insert(leaf.clone()) {
            classes.insert(canonical_form(leaf).expect("nonempty leaf"));
        }
    });
    (classes, stats)
}

/// All surviving vertices at the given depth.
pub fn split_frontier(degree: usize, depth: usize) -> Result<Vec<SearchNode>> {
    let tables = LawTables::get(degree);
    if depth >= tables.triple_count() {
        return Err(Error::Invariant(format!(
            "frontier depth {depth} must be below {}",
            tables.triple_count()
        )));
    }
    let mut walker = Walker::new(tables, true, Some(depth));
    walker.start(&SearchNode::root(degree), &mut |_| {});
    Ok(walker.frontier)
}

/// Raw leaf multiset of a full single-threaded run (test instrumentation).
pub fn raw_leaves(degree: usize, cfg: &SearchConfig) -> (Vec<Domain>, SearchStats) {
    resume(&SearchNode::root(degree), cfg)
}

pub struct EnumerationOutcome {
    pub classes: BTreeSet<Domain>,
    pub stats: SearchStats,
    pub frontier_depth: usize,
}

fn effective_jobs(cfg: &SearchConfig) -> usize {
    if cfg.jobs == 0 {
        rayon::current_num_threads()
    } else {
        cfg.jobs
    }
}

fn pick_frontier_depth(degree: usize, jobs: usize) -> Result<(usize, Vec<SearchNode>)> {
    let nt = LawTables::get(degree).triple_count();
    let want = 8 * jobs;
    let mut depth = 1;
    loop {
        let frontier = split_frontier(degree, depth)?;
        if frontier.len() >= want || depth + 1 >= nt {
            return Ok((depth, frontier));
        }
        depth += 1;
    }
}

/// Enumerates every maximal unitary Condorcet domain of the given degree and
/// reduces the leaf stream to canonical isomorphism classes.
pub fn enumerate_mucds(degree: usize, cfg: &SearchConfig) -> Result<EnumerationOutcome> {
    if !(3..=crate::perm::MAX_DEGREE).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    let jobs = effective_jobs(cfg);
    if jobs <= 1 && cfg.frontier_depth.is_none() {
        let (classes, stats) = resume_classes(&SearchNode::root(degree), cfg);
        return Ok(EnumerationOutcome {
            classes,
            stats,
            frontier_depth: 0,
        });
    }
    let (frontier_depth, frontier) = match cfg.frontier_depth {
        Some(d) if d == 0 => {
            let (classes, stats) = resume_classes(&SearchNode::root(degree), cfg);
            return Ok(EnumerationOutcome {
                classes,
                stats,
                frontier_depth: 0,
            });
        }
        Some(d) => (d, split_frontier(degree, d)?),
        None => pick_frontier_depth(degree, jobs)?,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invariant(e.to_string()))?;
    let (classes, stats) = pool.install(|| {
        frontier
            .par_iter()
            .map(|node| resume_classes(node, cfg))
            .reduce(
                || (BTreeSet::new(), SearchStats::default()),
                |(mut c1, mut s1), (c2, s2)| {
                    c1.extend(c2);
                    s1 += s2;
                    (c1, s1)
                },
            )
    });
    Ok(EnumerationOutcome {
        classes,
        stats,
        frontier_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::law_order;

    #[test]
    fn root_has_no_forced_law() {
        for n in 3..=5 {
            assert!(SearchNode::root(n).forced_law().is_none());
        }
    }

    #[test]
    fn descend_from_root_gives_principal_cardinality() {
        let root = SearchNode::root(4);
        let child = root.descend(law_order(4)[0]).unwrap();
        assert_eq!(child.current.len(), 16);
        assert_eq!(child.depth, 1);
        assert!(child.forced == 0);
    }

    #[test]
    fn descend_with_satisfied_law_is_forced_and_unchanging() {
        let root = SearchNode::root(4);
        let child = root.descend(law_order(4)[0]).unwrap();
        // Re-applying the same law on the same triple is rejected by depth.
        assert!(child.descend(law_order(4)[0]).is_err());
    }

    #[test]
    fn first_law_applied_is_never_pruned() {
        let root = SearchNode::root(4);
        let tables = LawTables::get(4);
        // All six patterns are present in S_n, so no two laws coincide and
        // nothing is redundant at the root.
        for o in 0..6 {
            assert!(!redundant_law(tables, 0x3f, o));
        }
        let child = root.descend(law_order(4)[0]).unwrap();
        assert!(child.is_t_mucd());
    }

    #[test]
    fn laws_collapsing_to_one_child_are_pruned_to_the_last() {
        let tables = LawTables::get(4);
        for o in 0..6u8 {
            // With no patterns present every law acts identically; only the
            // last survives.
            assert_eq!(redundant_law(tables, 0, o), o != 5);
            let f = tables.forbidden_patterns(o);
            assert_eq!(f.count_ones(), 2);
            // With all patterns outside the forbidden pair present, only a
            // law with the same forbidden pair could be equivalent.
            assert!(!redundant_law(tables, !f & 0x3f, o));
        }
    }

    #[test]
    fn degree_3_has_three_classes() {
        let out = enumerate_mucds(3, &SearchConfig::default()).unwrap();
        assert_eq!(out.classes.len(), 3);
        for c in &out.classes {
            assert_eq!(c.len(), 4);
        }
    }

    #[test]
    fn degree_4_has_31_classes() {
        let out = enumerate_mucds(4, &SearchConfig::default()).unwrap();
        assert_eq!(out.classes.len(), 31);
    }

    #[test]
    fn pruning_is_soundness_preserving_at_degree_4() {
        let pruned = raw_leaves(4, &SearchConfig::default());
        let unpruned = raw_leaves(
            4,
            &SearchConfig {
                precedence_prune: false,
                ..SearchConfig::default()
            },
        );
        let a = crate::canon::dedup(pruned.0).unwrap();
        let b = crate::canon::dedup(unpruned.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 31);
        assert!(pruned.1.nodes <= unpruned.1.nodes);
    }

    #[test]
    fn frontier_nodes_have_distinct_paths() {
        let frontier = split_frontier(4, 2).unwrap();
        let paths: std::collections::HashSet<Vec<u8>> =
            frontier.iter().map(|n| n.applied.clone()).collect();
        assert_eq!(paths.len(), frontier.len());
    }

    #[test]
    fn frontier_union_equals_monolithic_run_at_degree_4() {
        let mono = enumerate_mucds(4, &SearchConfig::default()).unwrap();
        let frontier = split_frontier(4, 2).unwrap();
        let mut classes = BTreeSet::new();
        for node in &frontier {
            let (c, _) = resume_classes(node, &SearchConfig::default());
            classes.extend(c);
        }
        assert_eq!(classes, mono.classes);
    }

    #[test]
    fn node_roundtrip_through_path() {
        let frontier = split_frontier(4, 3).unwrap();
        for node in &frontier {
            let rebuilt = SearchNode::from_path(4, &node.applied, node.forced).unwrap();
            assert_eq!(&rebuilt.current, &node.current);
            assert_eq!(rebuilt.applied, node.applied);
        }
    }

    #[test]
    fn every_degree_4_leaf_is_a_maximal_unitary_cd() {
        let tables = LawTables::get(4);
        let (leaves, stats) = raw_leaves(4, &SearchConfig::default());
        assert!(stats.leaves >= 31);
        for leaf in &leaves {
            assert!(leaf.is_unitary());
            assert!(tables.is_maximal_cd(leaf));
        }
    }

    #[test]
    fn forced_steps_occur_at_degree_4() {
        let (_, stats) = raw_leaves(4, &SearchConfig::default());
        assert!(stats.forced_steps > 0);
        assert!(stats.cut_non_maximal > 0);
    }

    #[test]
    fn two_member_chain_forces_every_remaining_triple() {
        // {identity, 2134}: two orders satisfy at least one law per triple.
        let d = Domain::from_ranks(4, [0u16, 6]);
        let tables = LawTables::get(4);
        for t in 0..tables.triple_count() {
            assert!(tables.sat6(&d, t) != 0);
        }
    }
}
