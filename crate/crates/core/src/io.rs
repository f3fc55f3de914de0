//! Text and JSON formats: DIMACS-like graphs, cut trees, approximate
//! structures, newick representing trees and cut reports.
//!
//! Capacities are always decimal strings, nodes are 1-indexed in text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::approx::{ApproxMinCutDS, FlowEmulator};
use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::graph::{hex_prefix, NodeId, WeightedGraph};
use crate::tree::{CutTree, TreeEdge, TreeKind};
use crate::ultrametric::{RepresentingTree, TreeNode};

pub const GRAPH_FORMAT: &str = "cutree-graph";
pub const TREE_FORMAT: &str = "cut-tree";
pub const DS_FORMAT: &str = "cutree-approx-ds";
pub const FORMAT_VERSION: u32 = 1;

/// Identifies a serialized artifact and the body it covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatHeader {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub m: usize,
    pub scale_exponent: u32,
    pub hash: String,
}

impl FormatHeader {
    pub fn check(&self, format: &str) -> Result<()> {
        if self.format != format {
            return Err(Error::InvalidInput(format!(
                "expected a {format} file, found {}",
                self.format
            )));
        }
        if self.version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                expected: FORMAT_VERSION,
                found: self.version,
            });
        }
        Ok(())
    }
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))
}

fn parse_node(line: usize, tok: &str, n: usize) -> Result<NodeId> {
    let v: usize = parse_num(line, tok, "node")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("node {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Parses `p <n> <m>`, an optional `s <scale>` line and `m` edge lines
/// `e <u> <v> <cap>`. DIMACS `p max <n> <m>` and `a` arc lines are read
/// the same way, arcs as undirected edges. Lines starting with `c` are
/// comments, except a `c cutree-graph <version> <hash>` line, whose hash
/// is verified.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut scale = 0u32;
    let mut stamp: Option<(usize, u32, String)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tok = tokens(raw);
        match tok.first().copied() {
            None => continue,
            Some("c") => {
                if tok.get(1) == Some(&GRAPH_FORMAT) {
                    if tok.len() != 4 {
                        return Err(Error::parse(line, "format stamp needs a version and a hash"));
                    }
                    stamp = Some((line, parse_num(line, tok[2], "version")?, tok[3].to_string()));
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "second problem line"));
                }
                // DIMACS writes a problem word, as in `p max <n> <m>`
                let nums = match tok.len() {
                    3 => &tok[1..],
                    4 if tok[1].parse::<usize>().is_err() => &tok[2..],
                    _ => return Err(Error::parse(line, "expected `p <n> <m>`")),
                };
                header = Some((parse_num(line, nums[0], "node count")?, parse_num(line, nums[1], "edge count")?));
            }
            Some("s") => {
                if tok.len() != 2 || header.is_none() || !edges.is_empty() {
                    return Err(Error::parse(line, "`s <scale>` must follow the problem line"));
                }
                scale = parse_num(line, tok[1], "scale exponent")?;
            }
            Some("e" | "a") => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "edge before problem line"))?;
                if tok.len() != 4 {
                    return Err(Error::parse(line, "expected `e <u> <v> <cap>`"));
                }
                let u = parse_node(line, tok[1], n)?;
                let v = parse_node(line, tok[2], n)?;
                if u == v {
                    return Err(Error::parse(line, "self-loop"));
                }
                let cap: Capacity = parse_num(line, tok[3], "capacity")?;
                if cap.is_zero() {
                    return Err(Error::parse(line, "zero capacity"));
                }
                edges.push((u, v, cap));
            }
            Some(other) => return Err(Error::parse(line, format!("unknown line type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    if edges.len() != m {
        return Err(Error::parse(0, format!("header promises {m} edges, found {}", edges.len())));
    }
    let g = WeightedGraph::normalized(n, edges, scale)?;
    g.check_connected()?;
    if let Some((line, version, hash)) = stamp {
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                expected: FORMAT_VERSION,
                found: version,
            });
        }
        if hash != g.content_hash() {
            return Err(Error::parse(line, "content hash does not match the edges"));
        }
    }
    Ok(g)
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "c {GRAPH_FORMAT} {FORMAT_VERSION} {}", g.content_hash()).unwrap();
    writeln!(out, "p {} {}", g.n(), g.m()).unwrap();
    if g.scale_exponent() != 0 {
        writeln!(out, "s {}", g.scale_exponent()).unwrap();
    }
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.cap).unwrap();
    }
    out
}

/// A tree plus the hash of the graph it was built from, if known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeFile {
    pub tree: CutTree,
    pub source_hash: Option<String>,
}

/// `h cut-tree <version> <kind> <n> <hash|->` then `t <u> <v> <weight>`.
pub fn write_tree(t: &CutTree, source_hash: Option<&str>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "h {TREE_FORMAT} {FORMAT_VERSION} {} {} {}",
        t.kind().as_str(),
        t.n(),
        source_hash.unwrap_or("-")
    )
    .unwrap();
    for e in t.edges() {
        writeln!(out, "t {} {} {}", e.u + 1, e.v + 1, e.weight).unwrap();
    }
    out
}

pub fn parse_tree(text: &str) -> Result<TreeFile> {
    let mut header: Option<(TreeKind, usize, Option<String>)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tok = tokens(raw);
        match tok.first().copied() {
            None | Some("c") => continue,
            Some("h") => {
                if header.is_some() || tok.len() != 6 || tok[1] != TREE_FORMAT {
                    return Err(Error::parse(line, "expected `h cut-tree <version> <kind> <n> <hash>`"));
                }
                let version: u32 = parse_num(line, tok[2], "version")?;
                if version != FORMAT_VERSION {
                    return Err(Error::VersionMismatch {
                        expected: FORMAT_VERSION,
                        found: version,
                    });
                }
                let kind: TreeKind = tok[3].parse().map_err(|_| Error::parse(line, "unknown tree kind"))?;
                let n = parse_num(line, tok[4], "node count")?;
                let hash = (tok[5] != "-").then(|| tok[5].to_string());
                header = Some((kind, n, hash));
            }
            Some("t") => {
                let (_, n, _) = header.as_ref().ok_or_else(|| Error::parse(line, "edge before header"))?;
                if tok.len() != 4 {
                    return Err(Error::parse(line, "expected `t <u> <v> <weight>`"));
                }
                edges.push(TreeEdge {
                    u: parse_node(line, tok[1], *n)?,
                    v: parse_node(line, tok[2], *n)?,
                    weight: parse_num(line, tok[3], "weight")?,
                });
            }
            Some(other) => return Err(Error::parse(line, format!("unknown line type {other:?}"))),
        }
    }
    let (kind, n, source_hash) = header.ok_or_else(|| Error::parse(0, "missing tree header"))?;
    if edges.len() + 1 != n {
        return Err(Error::InvalidTree(format!("{} edges for {n} nodes", edges.len())));
    }
    Ok(TreeFile {
        tree: CutTree::new(n, edges, kind)?,
        source_hash,
    })
}

/// JSON envelope for an approximate structure and its emulator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxDsFile {
    pub header: FormatHeader,
    pub ds: ApproxMinCutDS,
    pub emulator: FlowEmulator,
}

fn body_hash(ds: &ApproxMinCutDS, emulator: &FlowEmulator) -> Result<String> {
    let body = serde_json::to_vec(&(ds, emulator)).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(hex_prefix(&Sha256::digest(&body), 16))
}

pub fn write_approx_ds(g: &WeightedGraph, ds: &ApproxMinCutDS, emulator: &FlowEmulator) -> Result<String> {
    let file = ApproxDsFile {
        header: FormatHeader {
            format: DS_FORMAT.into(),
            version: FORMAT_VERSION,
            n: ds.n,
            m: g.m(),
            scale_exponent: g.scale_exponent(),
            hash: body_hash(ds, emulator)?,
        },
        ds: ds.clone(),
        emulator: emulator.clone(),
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn parse_approx_ds(text: &str) -> Result<ApproxDsFile> {
    let file: ApproxDsFile = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    file.header.check(DS_FORMAT)?;
    if file.header.hash != body_hash(&file.ds, &file.emulator)? {
        return Err(Error::InvalidInput("approximate structure hash mismatch".into()));
    }
    if file.header.n != file.ds.n || file.emulator.n != file.ds.n {
        return Err(Error::InvalidInput("node counts disagree".into()));
    }
    Ok(file)
}

/// Newick-like text: leaves are 1-indexed points, internal nodes carry
/// their label after the closing parenthesis, e.g. `((1,2)1,3)2;`.
pub fn write_newick(t: &RepresentingTree) -> String {
    let mut out = String::new();
    // (node, next child index)
    let mut stack = vec![(t.root(), 0)];
    while let Some((x, next)) = stack.pop() {
        let node = &t.nodes()[x];
        if node.children.is_empty() {
            write!(out, "{}", x + 1).unwrap();
            continue;
        }
        if next == node.children.len() {
            write!(out, "){}", node.label.as_ref().expect("internal")).unwrap();
            continue;
        }
        out.push(if next == 0 { '(' } else { ',' });
        stack.push((x, next + 1));
        stack.push((node.children[next], 0));
    }
    out.push(';');
    out
}

pub fn parse_newick(text: &str) -> Result<RepresentingTree> {
    let text = text.trim();
    let body = text
        .strip_suffix(';')
        .ok_or_else(|| Error::parse(1, "newick text must end with `;`"))?;
    let bytes = body.as_bytes();
    let err = |pos: usize, msg: &str| Error::parse(1, format!("column {}: {msg}", pos + 1));
    let read_number = |pos: &mut usize| -> Option<&str> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| &body[start..*pos])
    };

    // child references are `Ok(leaf)` or `Err(internal index)`
    type Child = std::result::Result<usize, usize>;
    let mut leaves = Vec::new();
    let mut internal: Vec<(Vec<Child>, Capacity)> = Vec::new();
    let mut groups: Vec<Vec<Child>> = Vec::new();
    let mut root = None;
    let mut pos = 0;
    while pos < bytes.len() {
        match bytes[pos] {
            b'(' => {
                groups.push(Vec::new());
                pos += 1;
            }
            b',' => pos += 1,
            b')' => {
                pos += 1;
                let children = groups.pop().ok_or_else(|| err(pos - 1, "unbalanced `)`"))?;
                let label = read_number(&mut pos).ok_or_else(|| err(pos, "internal node needs a label"))?;
                let label: Capacity = label.parse().map_err(|_| err(pos, "bad label"))?;
                internal.push((children, label));
                let id = internal.len() - 1;
                match groups.last_mut() {
                    Some(parent) => parent.push(Err(id)),
                    None => root = Some(Err(id)),
                }
            }
            b'0'..=b'9' => {
                let num = read_number(&mut pos).expect("digit present");
                let v: usize = num.parse().map_err(|_| err(pos, "bad leaf"))?;
                if v == 0 {
                    return Err(err(pos, "leaves are 1-indexed"));
                }
                leaves.push(v - 1);
                match groups.last_mut() {
                    Some(parent) => parent.push(Ok(v - 1)),
                    None => root = Some(Ok(v - 1)),
                }
            }
            _ => return Err(err(pos, "unexpected character")),
        }
        if root.is_some() && pos < bytes.len() {
            return Err(err(pos, "text after the root"));
        }
    }
    if !groups.is_empty() {
        return Err(err(bytes.len(), "unbalanced `(`"));
    }
    let root = root.ok_or_else(|| err(0, "empty tree"))?;
    let n = leaves.len();
    let mut sorted = leaves.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::parse(1, format!("leaves must be exactly 1..={n}")));
    }
    let resolve = |c: Child| match c {
        Ok(leaf) => leaf,
        Err(i) => n + i,
    };
    let mut nodes: Vec<TreeNode> = (0..n + internal.len())
        .map(|_| TreeNode {
            parent: None,
            children: Vec::new(),
            label: None,
        })
        .collect();
    for (i, (children, label)) in internal.into_iter().enumerate() {
        let id = n + i;
        nodes[id].label = Some(label);
        for c in children {
            let c = resolve(c);
            nodes[c].parent = Some(id);
            nodes[id].children.push(c);
        }
    }
    RepresentingTree::from_parts(n, nodes, resolve(root))
}

/// Serializes any audit or report value as pretty JSON.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_connected;
    use crate::graph::perturb;
    use crate::ultrametric::synthesize_ultrametric;

    #[test]
    fn minimal_graph() {
        let g = parse_graph("p 2 1\ne 1 2 7\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.edge(0).cap, 7u64.into());
    }

    #[test]
    fn dimacs_max_flow_lines() {
        let g = parse_graph("c from a solver\np max 3 2\na 1 2 4\na 3 2 1\n").unwrap();
        assert_eq!(g, parse_graph("p 3 2\ne 1 2 4\ne 2 3 1\n").unwrap());
        assert!(parse_graph("p max x 3 2\n").is_err());
    }

    #[test]
    fn duplicate_edges_merge() {
        let g = parse_graph("c hi\np 2 2\ne 1 2 3\ne 2 1 4\n").unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edge(0).cap, 7u64.into());
    }

    #[test]
    fn graph_errors_carry_lines() {
        assert_eq!(
            parse_graph("p 2 1\ne 1 3 7\n"),
            Err(Error::parse(2, "node 3 outside 1..=2"))
        );
        assert!(matches!(parse_graph("p 3 1\ne 1 2 1\n"), Err(Error::Disconnected { .. })));
        assert!(matches!(parse_graph("p 2 1\nx\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn graph_round_trip_with_scale() {
        let g = perturb(&random_connected(8, 14, 20, 3).unwrap(), 3).unwrap();
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_graph(&back), text);
        let tampered = text.replace("p 8 14", "p 8 14\nc noise");
        assert_eq!(parse_graph(&tampered).unwrap(), g);
        let bumped = text.replacen(&format!("{GRAPH_FORMAT} 1"), &format!("{GRAPH_FORMAT} 2"), 1);
        assert!(matches!(parse_graph(&bumped), Err(Error::VersionMismatch { .. })));
    }

    #[test]
    fn tree_round_trip() {
        let t = CutTree::new(
            2,
            vec![TreeEdge {
                u: 0,
                v: 1,
                weight: 9u64.into(),
            }],
            TreeKind::FlowEquivalent,
        )
        .unwrap();
        let text = write_tree(&t, Some("abc"));
        let back = parse_tree(&text).unwrap();
        assert_eq!(back.tree, t);
        assert_eq!(back.tree.kind(), TreeKind::FlowEquivalent);
        assert_eq!(back.source_hash.as_deref(), Some("abc"));
        let short = "h cut-tree 1 cut_equivalent 3 -\nt 1 2 4\n";
        assert!(matches!(parse_tree(short), Err(Error::InvalidTree(_))));
    }

    #[test]
    fn approx_ds_round_trip() {
        let g = random_connected(9, 16, 12, 4).unwrap();
        let eps = crate::capacity::Epsilon::new(1, 4).unwrap();
        let oracle = crate::oracle::make_noisy_oracle(&g, eps, 2);
        let (ds, h) = crate::approx::build_approx_ds(&g, &oracle, eps, 3).unwrap();
        let text = write_approx_ds(&g, &ds, &h).unwrap();
        let back = parse_approx_ds(&text).unwrap();
        assert_eq!((back.ds, back.emulator), (ds, h));
        let tampered = text.replacen("\"seed\": 3", "\"seed\": 4", 1);
        assert_ne!(tampered, text);
        assert!(parse_approx_ds(&tampered).is_err());
    }

    #[test]
    fn newick_round_trip() {
        for seed in 0..5 {
            let t = synthesize_ultrametric(12, seed).unwrap();
            let text = write_newick(&t);
            let back = parse_newick(&text).unwrap();
            assert_eq!(write_newick(&back), text);
            for u in 0..12 {
                for v in u + 1..12 {
                    assert_eq!(back.lca_label(u, v).unwrap(), t.lca_label(u, v).unwrap());
                }
            }
        }
        assert!(parse_newick("((1,2)1,3)2").is_err());
        assert!(parse_newick("((1,2)1,4)2;").is_err());
    }
}
