//! Structural classification of maximal unitary Condorcet domains:
//! connectivity, peak-pit form, normality and duality data, richness
//! (copious/ample), fixing and reducibility, and the single-peakedness
//! family, plus per-degree aggregation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::canon::{canonical_form, conjugate, core, dual, ClassKey};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::laws::LawTables;
use crate::perm::{pair_count, pair_index, PermTable, MAX_DEGREE};

/// Bits of `sat9` whose law has position 1 or 3 (idx9 = x*3 + pos - 1).
const POS13_MASK: u16 = 0b101_101_101;
/// Bits of `sat9` whose law has position 3.
const POS3_MASK: u16 = 0b100_100_100;

/// Weak connectivity in the permutohedron: members adjacent when they
/// differ by one adjacent transposition.
pub fn connected(d: &Domain) -> bool {
    let table = PermTable::get(d.degree());
    let start = match d.ranks().next() {
        Some(r) => r,
        None => return false,
    };
    let mut seen = Domain::empty(d.degree());
    seen.insert(start);
    let mut queue = vec![start];
    let mut count = 1;
    while let Some(r) = queue.pop() {
        for pos in 0..d.degree() - 1 {
            let s = table.adjacent_rank(r, pos);
            if d.contains(s) && !seen.contains(s) {
                seen.insert(s);
                count += 1;
                queue.push(s);
            }
        }
    }
    count == d.len()
}

/// Every triple satisfies a law in position 1 or 3 (all nine forms count).
pub fn peak_pit(d: &Domain) -> bool {
    let tables = LawTables::get(d.degree());
    (0..tables.triple_count()).all(|t| tables.sat9(d, t) & POS13_MASK != 0)
}

/// Every triple satisfies a never-last law.
pub fn arrow_sp(d: &Domain) -> bool {
    let tables = LawTables::get(d.degree());
    (0..tables.triple_count()).all(|t| tables.sat9(d, t) & POS3_MASK != 0)
}

/// `|A ∩ uA|` where `uA` reverses every member.
pub fn dual_intersection(d: &Domain) -> usize {
    d.intersection(&dual(d)).len()
}

pub fn normal(d: &Domain) -> bool {
    d.intersects(&dual(d))
}

pub fn symmetric(d: &Domain) -> bool {
    dual(d) == *d
}

pub fn self_dual(d: &Domain) -> Result<bool> {
    Ok(canonical_form(d)? == canonical_form(&conjugate(d))?)
}

/// Every triple restriction shows all 4 possible orders.
pub fn copious(d: &Domain) -> bool {
    let tables = LawTables::get(d.degree());
    (0..tables.triple_count()).all(|t| tables.present_patterns(d, t, 0x3f).count_ones() == 4)
}

/// Every pair restriction shows both orders.
pub fn ample(d: &Domain) -> bool {
    let n = d.degree();
    let table = PermTable::get(n);
    let mut fwd = vec![false; pair_count(n)];
    let mut bwd = vec![false; pair_count(n)];
    for r in d.ranks() {
        let slots = table.slots_of(r);
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (slots[i], slots[j]);
                if a < b {
                    fwd[pair_index(a, b)] = true;
                } else {
                    bwd[pair_index(b, a)] = true;
                }
            }
        }
    }
    fwd.iter().zip(&bwd).all(|(&f, &b)| f && b)
}

/// Some alternative occupies the same position in every member.
pub fn fixing(d: &Domain) -> bool {
    let n = d.degree();
    let table = PermTable::get(n);
    let mut fixed_pos = vec![None::<u8>; n + 1];
    let mut alive = vec![true; n + 1];
    for r in d.ranks() {
        let slots = table.slots_of(r);
        for (p, &a) in slots.iter().enumerate() {
            let a = a as usize;
            if !alive[a] {
                continue;
            }
            match fixed_pos[a] {
                None => fixed_pos[a] = Some(p as u8),
                Some(q) if q as usize == p => {}
                Some(_) => alive[a] = false,
            }
        }
    }
    (1..=n).any(|a| alive[a])
}

/// Some alternative subset of size 2..n-1 is consecutive in every member.
pub fn reducible(d: &Domain) -> bool {
    let n = d.degree();
    let table = PermTable::get(n);
    'subset: for mask in 1u32..(1 << n) - 1 {
        let k = mask.count_ones() as usize;
        if k < 2 || k > n - 1 {
            continue;
        }
        for r in d.ranks() {
            let slots = table.slots_of(r);
            let (mut lo, mut hi) = (n, 0usize);
            for (p, &a) in slots.iter().enumerate() {
                if mask >> (a - 1) & 1 != 0 {
                    lo = lo.min(p);
                    hi = hi.max(p);
                }
            }
            if hi - lo + 1 != k {
                continue 'subset;
            }
        }
        return true;
    }
    false
}

/// Unique second place: some alternative that is ranked first in at least
/// one member has the same runner-up in all members ranking it first.
pub fn usp(d: &Domain) -> bool {
    let n = d.degree();
    let table = PermTable::get(n);
    let mut second = vec![None::<u8>; n + 1];
    let mut consistent = vec![true; n + 1];
    for r in d.ranks() {
        let slots = table.slots_of(r);
        let a = slots[0] as usize;
        match second[a] {
            None => second[a] = Some(slots[1]),
            Some(b) if b == slots[1] => {}
            Some(_) => consistent[a] = false,
        }
    }
    (1..=n).any(|a| consistent[a] && second[a].is_some())
}

pub fn nuspd(d: &Domain) -> bool {
    !usp(d) && !usp(&dual(d))
}

/// Between-relation bitmask: bit `(y-1)*pair_count + pair_index(x,z)` set
/// iff `y` is an internal vertex of the tree path between `x` and `z`.
type TreeMask = [u64; 4];

struct TreeTables {
    masks: Vec<TreeMask>,
    star: Vec<bool>,
}

impl TreeTables {
    fn get(degree: usize) -> &'static TreeTables {
        static CACHE: OnceLock<[OnceLock<TreeTables>; MAX_DEGREE + 1]> = OnceLock::new();
        let slots = CACHE.get_or_init(Default::default);
        slots[degree].get_or_init(|| TreeTables::build(degree))
    }

    fn build(degree: usize) -> TreeTables {
        let n = degree;
        let mut masks = Vec::new();
        let mut star = Vec::new();
        let count = n.pow(n as u32 - 2); // Prüfer sequences
        let mut seq = vec![0usize; n - 2];
        for code in 0..count {
            let mut c = code;
            for s in seq.iter_mut() {
                *s = c % n;
                c /= n;
            }
            let adj = prufer_to_adjacency(n, &seq);
            masks.push(between_mask(n, &adj));
            let max_deg = adj.iter().map(Vec::len).max().unwrap();
            star.push(n <= 3 || max_deg == n - 1);
        }
        TreeTables { masks, star }
    }
}

/// Decodes a Prüfer sequence (entries 0..n-1) into adjacency lists.
fn prufer_to_adjacency(n: usize, seq: &[usize]) -> Vec<Vec<usize>> {
    let mut deg = vec![1usize; n];
    for &s in seq {
        deg[s] += 1;
    }
    let mut adj = vec![Vec::new(); n];
    let add = |adj: &mut Vec<Vec<usize>>, a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
    };
    let mut deg2 = deg.clone();
    for &s in seq {
        let leaf = (0..n).find(|&v| deg2[v] == 1).unwrap();
        add(&mut adj, leaf, s);
        deg2[leaf] = 0;
        deg2[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| deg2[v] == 1).collect();
    add(&mut adj, rest[0], rest[1]);
    adj
}

fn between_mask(n: usize, adj: &[Vec<usize>]) -> TreeMask {
    let pc = pair_count(n);
    let mut mask = [0u64; 4];
    let mut comp = vec![usize::MAX; n];
    for y in 0..n {
        // Components of the tree with y removed.
        comp.iter_mut().for_each(|c| *c = usize::MAX);
        let mut id = 0;
        for start in 0..n {
            if start == y || comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if w != y && comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            id += 1;
        }
        for x in 0..n {
            for z in x + 1..n {
                if x == y || z == y || comp[x] == comp[z] {
                    continue;
                }
                let bit = y * pc + pair_index(x as u8 + 1, z as u8 + 1);
                mask[bit / 64] |= 1 << (bit % 64);
            }
        }
    }
    mask
}

/// Bitmask of triples (y; {x, z}) where some member ranks y below both x
/// and z; single-peakedness on an axis forbids exactly these when y is
/// between x and z on the axis.
fn middle_last_mask(d: &Domain) -> TreeMask {
    let n = d.degree();
    let pc = pair_count(n);
    let table = PermTable::get(n);
    let mut mask = [0u64; 4];
    for r in d.ranks() {
        let slots = table.slots_of(r);
        for py in 0..n {
            let y = slots[py] as usize - 1;
            for px in 0..py {
                for pz in 0..px {
                    let (x, z) = (slots[px], slots[pz]);
                    let bit = y * pc + pair_index(x.min(z), x.max(z));
                    mask[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
    }
    mask
}

fn tree_search(d: &Domain, stars_only: bool) -> bool {
    let n = d.degree();
    if n <= 2 {
        return true;
    }
    let bad = middle_last_mask(d);
    let trees = TreeTables::get(n);
    trees
        .masks
        .iter()
        .zip(&trees.star)
        .filter(|&(_, &s)| s || !stars_only)
        .any(|(m, _)| m.iter().zip(&bad).all(|(a, b)| a & b == 0))
}

/// Single-peaked on some alternative-labeled tree.
pub fn sp_on_tree(d: &Domain) -> bool {
    tree_search(d, false)
}

/// Single-peaked on some star tree.
pub fn sp_on_star(d: &Domain) -> bool {
    tree_search(d, true)
}

/// All tabulated properties of one class.
#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub class_key: ClassKey,
    pub size: usize,
    pub core_order: usize,
    pub connected: bool,
    pub peak_pit: bool,
    pub normal: bool,
    pub symmetric: bool,
    pub self_dual: bool,
    pub copious: bool,
    pub ample: bool,
    pub fixing: bool,
    pub reducible: bool,
    pub arrow_sp: bool,
    pub usp: bool,
    pub nuspd: bool,
    pub sp_tree: bool,
    pub sp_star: bool,
    pub dual_intersection: usize,
}

impl ClassRecord {
    pub fn of(d: &Domain) -> Result<ClassRecord> {
        let class_key = ClassKey::of(d)?;
        let di = dual_intersection(d);
        Ok(ClassRecord {
            size: d.len(),
            core_order: core(d)?.len(),
            connected: connected(d),
            peak_pit: peak_pit(d),
            normal: di > 0,
            symmetric: symmetric(d),
            self_dual: class_key.reflexive,
            copious: copious(d),
            ample: ample(d),
            fixing: fixing(d),
            reducible: reducible(d),
            arrow_sp: arrow_sp(d),
            usp: usp(d),
            nuspd: nuspd(d),
            sp_tree: sp_on_tree(d),
            sp_star: sp_on_star(d),
            dual_intersection: di,
            class_key,
        })
    }
}

/// One row of the per-size property table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SizeRow {
    pub total: usize,
    pub connected: usize,
    pub normal: usize,
    pub self_dual: usize,
    pub symmetric: usize,
    pub non_ample: usize,
    pub reducible: usize,
    pub copious: usize,
    pub usp: usize,
    pub nuspd: usize,
    pub sp_tree: usize,
    pub sp_star: usize,
}

#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub degree: usize,
    pub total: usize,
    pub flip_total: usize,
    pub rows: BTreeMap<usize, SizeRow>,
    /// (size, |A ∩ uA|) -> class count.
    pub dual_intersections: BTreeMap<(usize, usize), usize>,
    pub arrow_sp_total: usize,
    pub fixing_by_size: BTreeMap<usize, usize>,
    pub max_size: usize,
    pub mean_size: f64,
    pub variance_size: f64,
    pub skewness_size: f64,
}

#[derive(Default)]
struct Acc {
    rows: BTreeMap<usize, SizeRow>,
    di: BTreeMap<(usize, usize), usize>,
    flips: BTreeSet<Domain>,
    arrow: usize,
    fixing: BTreeMap<usize, usize>,
    n: u64,
    s1: f64,
    s2: f64,
    s3: f64,
}

impl Acc {
    fn push(&mut self, rec: ClassRecord, check_peak_pit: bool) -> Result<()> {
        // Structural theorems; a violation invalidates the whole build.
        if rec.copious && !rec.ample {
            return Err(Error::Invariant("copious class is not ample".into()));
        }
        if check_peak_pit && rec.peak_pit != rec.connected {
            return Err(Error::Invariant(
                "peak-pit and connectivity disagree".into(),
            ));
        }
        let di = rec.dual_intersection;
        if di != 0 && (di % 2 != 0 || !di.is_power_of_two()) {
            return Err(Error::Invariant(format!(
                "dual intersection {di} is neither 0 nor an even power of 2"
            )));
        }
        if rec.symmetric != (di == rec.size) {
            return Err(Error::Invariant("symmetry/intersection mismatch".into()));
        }
        let row = self.rows.entry(rec.size).or_default();
        row.total += 1;
        row.connected += rec.connected as usize;
        row.normal += rec.normal as usize;
        row.self_dual += rec.self_dual as usize;
        row.symmetric += rec.symmetric as usize;
        row.non_ample += !rec.ample as usize;
        row.reducible += rec.reducible as usize;
        row.copious += rec.copious as usize;
        row.usp += rec.usp as usize;
        row.nuspd += rec.nuspd as usize;
        row.sp_tree += rec.sp_tree as usize;
        row.sp_star += rec.sp_star as usize;
        *self.di.entry((rec.size, di)).or_default() += 1;
        self.arrow += rec.arrow_sp as usize;
        if rec.fixing {
            *self.fixing.entry(rec.size).or_default() += 1;
        }
        self.flips.insert(rec.class_key.flip_canonical);
        self.n += 1;
        let s = rec.size as f64;
        self.s1 += s;
        self.s2 += s * s;
        self.s3 += s * s * s;
        Ok(())
    }

    fn merge(mut self, other: Acc) -> Acc {
        for (size, r) in other.rows {
            let row = self.rows.entry(size).or_default();
            row.total += r.total;
            row.connected += r.connected;
            row.normal += r.normal;
            row.self_dual += r.self_dual;
            row.symmetric += r.symmetric;
            row.non_ample += r.non_ample;
            row.reducible += r.reducible;
            row.copious += r.copious;
            row.usp += r.usp;
            row.nuspd += r.nuspd;
            row.sp_tree += r.sp_tree;
            row.sp_star += r.sp_star;
        }
        for (k, v) in other.di {
            *self.di.entry(k).or_default() += v;
        }
        self.flips.extend(other.flips);
        self.arrow += other.arrow;
        for (k, v) in other.fixing {
            *self.fixing.entry(k).or_default() += v;
        }
        self.n += other.n;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s3 += other.s3;
        self
    }
}

/// Classifies every class of one degree and aggregates the per-size counts,
/// the dual-intersection distribution, and the size moments (uniform over
/// classes).
pub fn classify_all<'a, I>(degree: usize, classes: I) -> Result<DegreeReport>
where
    I: IntoParallelIterator<Item = &'a Domain>,
{
    let acc = classes
        .into_par_iter()
        .try_fold(Acc::default, |mut acc, d| {
            if d.degree() != degree {
                return Err(Error::DegreeMismatch(degree, d.degree()));
            }
            // Peak-pit <=> connected is a theorem only through degree 6.
            acc.push(ClassRecord::of(d)?, degree <= 6)?;
            Ok(acc)
        })
        .try_reduce(Acc::default, |a, b| Ok(a.merge(b)))?;
    if acc.n == 0 {
        return Err(Error::EmptyDomain);
    }
    let n = acc.n as f64;
    let mean = acc.s1 / n;
    let variance = acc.s2 / n - mean * mean;
    let m3 = acc.s3 / n - 3.0 * mean * variance - mean * mean * mean;
    let skewness = if variance > 0.0 {
        m3 / variance.powf(1.5)
    } else {
        0.0
    };
    Ok(DegreeReport {
        degree,
        total: acc.n as usize,
        flip_total: acc.flips.len(),
        max_size: acc.rows.keys().max().copied().unwrap_or(0),
        rows: acc.rows,
        dual_intersections: acc.di,
        arrow_sp_total: acc.arrow,
        fixing_by_size: acc.fixing,
        mean_size: mean,
        variance_size: variance,
        skewness_size: skewness,
    })
}
