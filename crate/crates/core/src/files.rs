//! On-disk interchange formats: the plain-text class file (with a binary
//! sidecar at scale), the checksummed frontier/checkpoint file, and the CSV
//! reports, plus checkpointed enumeration built on top of them.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::canon::COMPARATOR_ID;
use crate::classify::DegreeReport;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::laws::LAW_ORDER_ID;
use crate::perm::{Permutation, MAX_DEGREE};
use crate::search::{resume_classes, split_frontier, SearchConfig, SearchNode, SearchStats};

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

/// Renders a class file: `#` header, then one block per domain with one
/// space-separated permutation per line, blocks separated by blank lines.
pub fn render_class_file(degree: usize, classes: &BTreeSet<Domain>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# degree={degree} classes={} law_order={LAW_ORDER_ID} comparator={COMPARATOR_ID}",
        classes.len()
    )
    .unwrap();
    for (i, class) in classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for p in class.perms() {
            let words: Vec<String> = p.slots().iter().map(|a| a.to_string()).collect();
            writeln!(out, "{}", words.join(" ")).unwrap();
        }
    }
    out
}

pub fn write_class_file(path: &Path, degree: usize, classes: &BTreeSet<Domain>) -> Result<()> {
    fs::write(path, render_class_file(degree, classes))?;
    if degree >= 6 {
        write_binary_sidecar(&path.with_extension("bin"), degree, classes)?;
    }
    Ok(())
}

/// Binary sidecar: magic, degree, class count, then per class a u32 length
/// prefix followed by that many u16 member ranks. Little-endian throughout.
pub fn write_binary_sidecar(
    path: &Path,
    degree: usize,
    classes: &BTreeSet<Domain>,
) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(b"MUCD")?;
    w.write_all(&[degree as u8])?;
    w.write_all(&(classes.len() as u64).to_le_bytes())?;
    for class in classes {
        let ranks: Vec<u16> = class.ranks().collect();
        w.write_all(&(ranks.len() as u32).to_le_bytes())?;
        for r in ranks {
            w.write_all(&r.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn parse_class_file(text: &str) -> Result<(usize, Vec<Domain>)> {
    let mut degree: Option<usize> = None;
    let mut declared: Option<usize> = None;
    let mut domains = Vec::new();
    let mut block: Vec<Permutation> = Vec::new();
    let close =
        |block: &mut Vec<Permutation>, domains: &mut Vec<Domain>, degree: usize| {
            if !block.is_empty() {
                domains.push(Domain::from_perms(degree, block.iter()));
                block.clear();
            }
        };
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.starts_with('#') {
            for token in line.trim_start_matches('#').split_whitespace() {
                match token.split_once('=') {
                    Some(("degree", v)) => {
                        degree = Some(v.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad degree value {v:?}"),
                        })?)
                    }
                    Some(("classes", v)) => {
                        declared = Some(v.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad class count {v:?}"),
                        })?)
                    }
                    _ => {}
                }
            }
            continue;
        }
        let degree = degree.ok_or(Error::Parse {
            line: lineno,
            msg: "permutation before `# degree=` header".into(),
        })?;
        if line.is_empty() {
            close(&mut block, &mut domains, degree);
            continue;
        }
        let slots: Vec<u8> = line
            .split_whitespace()
            .map(|w| {
                w.parse::<u8>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad alternative {w:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if slots.len() != degree {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {degree} alternatives, found {}", slots.len()),
            });
        }
        block.push(Permutation::from_slots(slots).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?);
    }
    let degree = degree.ok_or(Error::Parse {
        line: 0,
        msg: "missing `# degree=` header".into(),
    })?;
    close(&mut block, &mut domains, degree);
    if let Some(count) = declared {
        if count != domains.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {count} classes, file has {}", domains.len()),
            });
        }
    }
    if domains.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok((degree, domains))
}

pub fn read_class_file(path: &Path) -> Result<(usize, Vec<Domain>)> {
    parse_class_file(&fs::read_to_string(path)?)
}

/// Frontier/checkpoint file: one node per line as `depth o1 .. ok mask`,
/// `mask` a bit string over visited triples (`-` at depth 0), closed by a
/// SHA-256 line over everything above it.
pub fn render_frontier_file(degree: usize, nodes: &[SearchNode]) -> String {
    let mut out = String::new();
    writeln!(out, "# degree={degree} law_order={LAW_ORDER_ID}").unwrap();
    for node in nodes {
        let mut line = node.depth.to_string();
        for &o in &node.applied {
            write!(line, " {o}").unwrap();
        }
        line.push(' ');
        if node.depth == 0 {
            line.push('-');
        } else {
            for t in 0..node.depth {
                line.push(if node.forced >> t & 1 != 0 { '1' } else { '0' });
            }
        }
        writeln!(out, "{line}").unwrap();
    }
    let digest = Sha256::digest(out.as_bytes());
    writeln!(out, "# sha256={}", hex(&digest)).unwrap();
    out
}

pub fn write_frontier_file(path: &Path, degree: usize, nodes: &[SearchNode]) -> Result<()> {
    fs::write(path, render_frontier_file(degree, nodes))?;
    Ok(())
}

pub fn parse_frontier_file(text: &str) -> Result<(usize, Vec<SearchNode>)> {
    let mut degree: Option<usize> = None;
    let mut nodes = Vec::new();
    let mut hashed_len: Option<usize> = None;
    let mut offset = 0usize;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let raw_len = line.len() + 1; // lines() strips the newline
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            for token in rest.split_whitespace() {
                match token.split_once('=') {
                    Some(("degree", v)) => {
                        degree = Some(v.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad degree value {v:?}"),
                        })?)
                    }
                    Some(("sha256", v)) => {
                        let digest = Sha256::digest(&text.as_bytes()[..offset]);
                        if hex(&digest) != v {
                            return Err(Error::ChecksumMismatch);
                        }
                        hashed_len = Some(offset);
                    }
                    _ => {}
                }
            }
            offset += raw_len;
            continue;
        }
        offset += raw_len;
        if line.is_empty() {
            continue;
        }
        let degree = degree.ok_or(Error::Parse {
            line: lineno,
            msg: "node before `# degree=` header".into(),
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |msg: String| Error::Parse { line: lineno, msg };
        let depth: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("bad depth {:?}", fields[0])))?;
        if fields.len() != depth + 2 {
            return Err(parse_err(format!(
                "expected {} fields for depth {depth}, found {}",
                depth + 2,
                fields.len()
            )));
        }
        let applied: Vec<u8> = fields[1..=depth]
            .iter()
            .map(|w| {
                w.parse::<u8>()
                    .map_err(|_| parse_err(format!("bad law ordinal {w:?}")))
            })
            .collect::<Result<_>>()?;
        let mask_str = fields[depth + 1];
        let mut forced = 0u64;
        if depth > 0 {
            if mask_str.len() != depth {
                return Err(parse_err("forced mask length mismatch".into()));
            }
            for (t, c) in mask_str.chars().enumerate() {
                match c {
                    '1' => forced |= 1 << t,
                    '0' => {}
                    _ => return Err(parse_err(format!("bad mask character {c:?}"))),
                }
            }
        }
        nodes.push(SearchNode::from_path(degree, &applied, forced).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?);
    }
    if hashed_len.is_none() {
        return Err(Error::ChecksumMismatch);
    }
    let degree = degree.ok_or(Error::Parse {
        line: 0,
        msg: "missing `# degree=` header".into(),
    })?;
    Ok((degree, nodes))
}

pub fn read_frontier_file(path: &Path) -> Result<(usize, Vec<SearchNode>)> {
    parse_frontier_file(&fs::read_to_string(path)?)
}

/// CSV report paths produced by `write_reports`.
pub struct ReportPaths {
    pub properties: PathBuf,
    pub dual_intersections: PathBuf,
}

/// Writes the per-size property CSV and the dual-intersection CSV.
pub fn write_reports(prefix: &Path, report: &DegreeReport) -> Result<ReportPaths> {
    let properties = prefix.with_extension("properties.csv");
    let mut out = String::from(
        "degree,size,total,connected,normal,self_dual,symmetric,non_ample,reducible,copious,usp,nuspd,sp_tree,sp_star\n",
    );
    for (&size, row) in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.degree,
            size,
            row.total,
            row.connected,
            row.normal,
            row.self_dual,
            row.symmetric,
            row.non_ample,
            row.reducible,
            row.copious,
            row.usp,
            row.nuspd,
            row.sp_tree,
            row.sp_star
        )
        .unwrap();
    }
    fs::write(&properties, out)?;

    let dual_intersections = prefix.with_extension("dual_intersections.csv");
    let mut out = String::from("degree,size,dual_intersection,count\n");
    for (&(size, di), &count) in &report.dual_intersections {
        writeln!(out, "{},{},{},{}", report.degree, size, di, count).unwrap();
    }
    fs::write(&dual_intersections, out)?;
    Ok(ReportPaths {
        properties,
        dual_intersections,
    })
}

/// Checkpointed enumeration: persists the frontier, then completes one
/// frontier node at a time, each into its own class file inside `dir`
/// (atomically via rename). Already-finished nodes are skipped on resume.
/// Returns `None` when `max_nodes` ran out before the frontier was drained.
pub fn enumerate_checkpointed(
    degree: usize,
    cfg: &SearchConfig,
    dir: &Path,
    max_nodes: Option<usize>,
) -> Result<Option<(BTreeSet<Domain>, SearchStats)>> {
    if !(3..=MAX_DEGREE).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    fs::create_dir_all(dir)?;
    let frontier_path = dir.join("frontier.txt");
    let nodes = if frontier_path.exists() {
        let (d, nodes) = read_frontier_file(&frontier_path)?;
        if d != degree {
            return Err(Error::DegreeMismatch(degree, d));
        }
        nodes
    } else {
        let depth = cfg.frontier_depth.unwrap_or(3);
        let nodes = split_frontier(degree, depth)?;
        write_frontier_file(&frontier_path, degree, &nodes)?;
        nodes
    };

    let mut budget = max_nodes.unwrap_or(usize::MAX);
    let mut done = true;
    for (i, node) in nodes.iter().enumerate() {
        let part = dir.join(format!("node_{i:07}.txt"));
        if part.exists() {
            continue;
        }
        if budget == 0 {
            done = false;
            break;
        }
        budget -= 1;
        let (classes, _) = resume_classes(node, cfg);
        let tmp = dir.join(format!("node_{i:07}.tmp"));
        fs::write(&tmp, render_class_file(degree, &classes))?;
        fs::rename(&tmp, &part)?;
    }
    if !done {
        return Ok(None);
    }
    let mut classes = BTreeSet::new();
    for i in 0..nodes.len() {
        let (d, part) = read_class_file(&dir.join(format!("node_{i:07}.txt")))?;
        if d != degree {
            return Err(Error::DegreeMismatch(degree, d));
        }
        classes.extend(part);
    }
    Ok(Some((classes, SearchStats::default())))
}
