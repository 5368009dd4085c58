//! Explanation trees: binary splits chosen to minimize the size-weighted
//! standard deviation of the children's distances to heaven.
//!
//! Trees render as a two-column listing (`win`, `n`) with `|  ` per level
//! of indentation and a trailing ` ;` on leaves:
//!
//! ```text
//!  win    n
//! ---- ----
//!    6   32
//!   12   30  STOR <= 5
//!   13   28  |  TEAM <= 5
//!  -79    2  STOR >  5 ;
//! ```
//!
//! [`Tree::parse`] reads the same format back.
use crate::data::{median, Cell, Dataset, GoalStats};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Eq => "=",
            Op::Ne => "!=",
        }
    }

    pub fn negate(self) -> Op {
        match self {
            Op::Le => Op::Gt,
            Op::Gt => Op::Le,
            Op::Eq => Op::Ne,
            Op::Ne => Op::Eq,
        }
    }

    fn parse(s: &str) -> Option<Op> {
        Some(match s {
            "<=" => Op::Le,
            ">" => Op::Gt,
            "=" | "==" => Op::Eq,
            "!=" => Op::Ne,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Threshold {
    Num(f64),
    Sym(String),
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Num(x) => write!(f, "{}", x),
            Threshold::Sym(s) => write!(f, "'{}'", s),
        }
    }
}

/// A test on one column, e.g. `ACAP > 4` or `origin = '3'`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub feature: usize,
    pub op: Op,
    pub value: Threshold,
}

impl Condition {
    /// Whether `cell` passes; `None` when the cell is missing or of the
    /// wrong kind.
    pub fn matches(&self, cell: &Cell) -> Option<bool> {
        match (cell, &self.value) {
            (Cell::Num(x), Threshold::Num(t)) => match self.op {
                Op::Le => Some(x <= t),
                Op::Gt => Some(x > t),
                Op::Eq => Some(x == t),
                Op::Ne => Some(x != t),
            },
            (Cell::Sym(s), Threshold::Sym(t)) => match self.op {
                Op::Eq => Some(s == t),
                Op::Ne => Some(s != t),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn negate(&self) -> Condition {
        Condition {
            op: self.op.negate(),
            ..self.clone()
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        format!("{} {:<2} {}", names[self.feature], self.op.symbol(), self.value)
    }
}

/// A binary split: `feature <= t` / `feature > t` for numbers,
/// `feature = v` / `feature != v` for symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: Threshold,
}

impl Split {
    pub fn conditions(&self) -> [Condition; 2] {
        let (a, b) = match self.threshold {
            Threshold::Num(_) => (Op::Le, Op::Gt),
            Threshold::Sym(_) => (Op::Eq, Op::Ne),
        };
        [a, b].map(|op| Condition {
            feature: self.feature,
            op,
            value: self.threshold.clone(),
        })
    }
}

/// A row index paired with its (revealed) distance to heaven.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Labeled {
    pub row: usize,
    pub d2h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub parent: Option<usize>,
    /// The test a row passed to get here; `None` at the root.
    pub condition: Option<Condition>,
    pub depth: usize,
    pub n: usize,
    pub win: f64,
    /// Standard deviation of the members' distances. Unknown for trees
    /// read back from text.
    pub impurity: Option<f64>,
    pub median_d2h: Option<f64>,
    pub members: Vec<Labeled>,
    pub children: Vec<usize>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Node arena; index 0 is the root and nodes appear in pre-order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: Vec<Node>,
    /// Column names, indexed by column position.
    pub names: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeConfig {
    pub min_leaf: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig { min_leaf: 2 }
    }
}

/// Sample standard deviation (0 below two values).
pub fn sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mu = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mu) * (v - mu)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Size-weighted mean of the children's standard deviations.
pub fn weighted_impurity(children: &[&[f64]]) -> f64 {
    let total: usize = children.iter().map(|c| c.len()).sum();
    children.iter().map(|c| c.len() as f64 / total as f64 * sd(c)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub split: Split,
    pub weighted_impurity: f64,
}

fn d2hs(rows: &[Labeled]) -> Vec<f64> {
    rows.iter().map(|r| r.d2h).collect()
}

/// The best split of `rows` on one column, or `None` when no candidate
/// leaves at least `min_leaf` rows on each side. Rows missing the column
/// take no part.
pub fn best_split(data: &Dataset, rows: &[Labeled], feature: usize, min_leaf: usize) -> Option<SplitCandidate> {
    let present: Vec<(&Cell, f64)> = rows
        .iter()
        .map(|r| (&data.rows[r.row].cells[feature], r.d2h))
        .filter(|(c, _)| !c.is_missing())
        .collect();
    let min_leaf = min_leaf.max(1);
    if present.len() < 2 * min_leaf {
        return None;
    }
    let mut best: Option<SplitCandidate> = None;
    let mut consider = |split: Split, left: Vec<f64>, right: Vec<f64>| {
        if left.len() < min_leaf || right.len() < min_leaf {
            return;
        }
        let w = weighted_impurity(&[&left, &right]);
        if best.as_ref().is_none_or(|b| w < b.weighted_impurity) {
            best = Some(SplitCandidate {
                split,
                weighted_impurity: w,
            });
        }
    };
    if present.iter().all(|(c, _)| matches!(c, Cell::Num(_))) {
        let mut v: Vec<(f64, f64)> = present.iter().map(|(c, y)| (c.as_num().unwrap(), *y)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        for i in 1..v.len() {
            if v[i - 1].0 < v[i].0 {
                let t = (v[i - 1].0 + v[i].0) / 2.0;
                let left = v[..i].iter().map(|p| p.1).collect();
                let right = v[i..].iter().map(|p| p.1).collect();
                consider(
                    Split {
                        feature,
                        threshold: Threshold::Num(t),
                    },
                    left,
                    right,
                );
            }
        }
    } else {
        let mut symbols: Vec<&str> = present
            .iter()
            .filter_map(|(c, _)| match c {
                Cell::Sym(s) => Some(s.as_str()),
                _ => None,
            })
            .collect();
        symbols.sort_unstable();
        symbols.dedup();
        for s in symbols {
            let (l, r): (Vec<&(&Cell, f64)>, Vec<_>) =
                present.iter().partition(|(c, _)| matches!(c, Cell::Sym(x) if x == s));
            consider(
                Split {
                    feature,
                    threshold: Threshold::Sym(s.to_string()),
                },
                l.iter().map(|p| p.1).collect(),
                r.iter().map(|p| p.1).collect(),
            );
        }
    }
    best
}

/// Best split over every independent column; ties go to the lowest column.
pub fn best_split_any(data: &Dataset, rows: &[Labeled], min_leaf: usize) -> Option<SplitCandidate> {
    let mut best: Option<SplitCandidate> = None;
    for &f in &data.x {
        if let Some(c) = best_split(data, rows, f, min_leaf) {
            if best.as_ref().is_none_or(|b| c.weighted_impurity < b.weighted_impurity) {
                best = Some(c);
            }
        }
    }
    best
}

/// Grows a tree over labeled rows. Node win scores use `stats`, so they
/// are comparable across the whole tree.
pub fn grow_tree(data: &Dataset, rows: &[Labeled], stats: &GoalStats, cfg: TreeConfig) -> Result<Tree> {
    if rows.is_empty() {
        return Err(Error::Invalid("cannot grow a tree over zero rows".into()));
    }
    let mut tree = Tree {
        nodes: Vec::new(),
        names: data.columns.iter().map(|c| c.name.clone()).collect(),
    };
    grow(&mut tree, data, rows.to_vec(), None, None, 0, stats, cfg)?;
    Ok(tree)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    tree: &mut Tree,
    data: &Dataset,
    rows: Vec<Labeled>,
    parent: Option<usize>,
    condition: Option<Condition>,
    depth: usize,
    stats: &GoalStats,
    cfg: TreeConfig,
) -> Result<usize> {
    let ys = d2hs(&rows);
    let impurity = sd(&ys);
    let mid = median(&ys).unwrap_or(f64::NAN);
    let id = tree.nodes.len();
    tree.nodes.push(Node {
        parent,
        condition,
        depth,
        n: rows.len(),
        win: stats.win(mid)?,
        impurity: Some(impurity),
        median_d2h: Some(mid),
        members: rows,
        children: Vec::new(),
    });
    if tree.nodes[id].n < 2 * cfg.min_leaf {
        return Ok(id);
    }
    let Some(cand) = best_split_any(data, &tree.nodes[id].members, cfg.min_leaf) else {
        return Ok(id);
    };
    if cand.weighted_impurity >= impurity {
        return Ok(id);
    }
    let conds = cand.split.conditions();
    let mut parts: Vec<(Condition, Vec<Labeled>, f64)> = conds
        .into_iter()
        .map(|c| {
            let members: Vec<Labeled> = tree.nodes[id]
                .members
                .iter()
                .copied()
                .filter(|r| c.matches(&data.rows[r.row].cells[c.feature]) == Some(true))
                .collect();
            let w = stats
                .win(median(&d2hs(&members)).unwrap_or(f64::NAN))
                .unwrap_or(f64::NAN);
            (c, members, w)
        })
        .collect();
    // better child first
    parts.sort_by(|a, b| b.2.total_cmp(&a.2));
    for (c, members, _) in parts {
        let child = grow(tree, data, members, Some(id), Some(c), depth + 1, stats, cfg)?;
        tree.nodes[id].children.push(child);
    }
    Ok(id)
}

/// One step of a root-to-leaf descent.
#[derive(Debug, Clone, PartialEq)]
pub struct PathStep {
    pub node: usize,
    pub condition: Condition,
    pub n: usize,
    pub win: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionPath {
    pub steps: Vec<PathStep>,
    /// Where descent stopped: a leaf, or an inner node whose split column
    /// is missing in the routed row.
    pub leaf: usize,
}

impl DecisionPath {
    /// Nodes visited, root included.
    pub fn nodes(&self) -> Vec<usize> {
        std::iter::once(0).chain(self.steps.iter().map(|s| s.node)).collect()
    }
}

impl Tree {
    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_leaf())
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Node ids from the root down to `node`, inclusive.
    pub fn ancestry(&self, node: usize) -> Vec<usize> {
        let mut out = vec![node];
        let mut at = node;
        while let Some(p) = self.nodes[at].parent {
            out.push(p);
            at = p;
        }
        out.reverse();
        out
    }

    /// Conditions from the root down to `node`.
    pub fn conditions_to(&self, node: usize) -> Vec<Condition> {
        self.ancestry(node)
            .into_iter()
            .filter_map(|i| self.nodes[i].condition.clone())
            .collect()
    }

    /// The split applied at an inner node.
    pub fn split_of(&self, node: usize) -> Option<&Condition> {
        self.nodes[node]
            .children
            .first()
            .and_then(|&c| self.nodes[c].condition.as_ref())
    }

    /// Routes a row from the root. Descent stops at a leaf, or where the
    /// row is missing the split column.
    pub fn route(&self, cells: &[Cell]) -> DecisionPath {
        let mut steps = Vec::new();
        let mut at = 0;
        'descend: loop {
            for &c in &self.nodes[at].children {
                let cond = self.nodes[c].condition.as_ref().expect("non-root node has a condition");
                match cond.matches(&cells[cond.feature]) {
                    Some(true) => {
                        steps.push(PathStep {
                            node: c,
                            condition: cond.clone(),
                            n: self.nodes[c].n,
                            win: self.nodes[c].win,
                        });
                        at = c;
                        continue 'descend;
                    }
                    Some(false) => {}
                    None => break 'descend,
                }
            }
            break;
        }
        DecisionPath { steps, leaf: at }
    }

    fn line(&self, id: usize) -> String {
        let node = &self.nodes[id];
        let mut s = format!("{:>4} {:>4}", node.win.round() as i64, node.n);
        if let Some(c) = &node.condition {
            s += "  ";
            s += &"|  ".repeat(node.depth - 1);
            s += &c.render(&self.names);
            if node.is_leaf() {
                s += " ;";
            }
        }
        s
    }

    const HEADER: &'static str = " win    n\n---- ----\n";

    /// The full listing, nodes in pre-order.
    pub fn render(&self) -> String {
        let mut out = String::from(Self::HEADER);
        for id in 0..self.nodes.len() {
            out += &self.line(id);
            out.push('\n');
        }
        out
    }

    /// Only the root and the nodes on `path`.
    pub fn render_path(&self, path: &DecisionPath) -> String {
        let mut out = String::from(Self::HEADER);
        for id in path.nodes() {
            out += &self.line(id);
            out.push('\n');
        }
        out
    }

    /// Reads a rendered listing back. `names` resolves column names to
    /// positions; member rows and impurities are not recoverable.
    pub fn parse(text: &str, names: &[String]) -> Result<Tree> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut leaf_marks: Vec<bool> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: &str| Error::TreeSyntax {
                line: line_no,
                msg: msg.to_string(),
            };
            let line = raw.replace("(leaf)", "");
            let trimmed = line.trim();
            if trimmed.is_empty()
                || trimmed.starts_with("win")
                || trimmed.chars().all(|c| c == '-' || c.is_whitespace())
            {
                continue;
            }
            let (win_tok, after) = split_token(trimmed);
            let (n_tok, body) = split_token(after);
            let win: f64 = win_tok.parse().map_err(|_| err("bad win"))?;
            let n: usize = n_tok.parse().map_err(|_| err("bad n"))?;
            let depth = body.matches('|').count() + 1;
            let cond_text = body.replace('|', "");
            let leaf = cond_text.contains(';');
            let cond_text = cond_text.replace(';', "");
            let cond_text = cond_text.trim();

            let (condition, depth) = if cond_text.is_empty() {
                if !nodes.is_empty() {
                    return Err(err("only the first node may lack a condition"));
                }
                (None, 0)
            } else {
                (Some(parse_condition(cond_text, names).map_err(|m| err(&m))?), depth)
            };
            if nodes.is_empty() && condition.is_some() {
                return Err(err("listing must start with the root"));
            }
            stack.truncate(depth);
            let parent = stack.last().copied();
            if depth > 0 && stack.len() != depth {
                return Err(err("indentation skips a level"));
            }
            let id = nodes.len();
            if let Some(p) = parent {
                nodes[p].children.push(id);
            }
            nodes.push(Node {
                parent,
                condition,
                depth,
                n,
                win,
                impurity: None,
                median_d2h: None,
                members: Vec::new(),
                children: Vec::new(),
            });
            leaf_marks.push(leaf);
            stack.push(id);
        }
        if nodes.is_empty() {
            return Err(Error::TreeSyntax {
                line: 0,
                msg: "no nodes".into(),
            });
        }
        for (id, node) in nodes.iter().enumerate() {
            if id > 0 && leaf_marks[id] != node.is_leaf() {
                return Err(Error::TreeSyntax {
                    line: 0,
                    msg: format!("node {} leaf marker disagrees with its children", id),
                });
            }
        }
        Ok(Tree {
            nodes,
            names: names.to_vec(),
        })
    }

    /// One flat record per node, in pre-order.
    pub fn records(&self) -> Vec<NodeRecord> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(id, n)| NodeRecord {
                id,
                parent: n.parent,
                feature: n.condition.as_ref().map(|c| self.names[c.feature].clone()),
                op: n.condition.as_ref().map(|c| c.op),
                value: n.condition.as_ref().map(|c| c.value.clone()),
                n: n.n,
                win: n.win,
                impurity: n.impurity,
            })
            .collect()
    }

    /// Rebuilds a tree from [`Tree::records`] output.
    pub fn from_records(records: &[NodeRecord], names: &[String]) -> Result<Tree> {
        let mut nodes: Vec<Node> = Vec::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if r.id != i {
                return Err(Error::Invalid(format!("record {} has id {}", i, r.id)));
            }
            let condition = match (&r.feature, r.op, &r.value) {
                (Some(f), Some(op), Some(v)) => Some(Condition {
                    feature: names
                        .iter()
                        .position(|x| x == f)
                        .ok_or_else(|| Error::UnknownColumn(f.clone()))?,
                    op,
                    value: v.clone(),
                }),
                (None, None, None) => None,
                _ => return Err(Error::Invalid(format!("record {} has a partial condition", i))),
            };
            let depth = match r.parent {
                Some(p) if p < i => nodes[p].depth + 1,
                Some(_) => return Err(Error::Invalid(format!("record {} precedes its parent", i))),
                None => 0,
            };
            if let Some(p) = r.parent {
                nodes[p].children.push(i);
            }
            nodes.push(Node {
                parent: r.parent,
                condition,
                depth,
                n: r.n,
                win: r.win,
                impurity: r.impurity,
                median_d2h: None,
                members: Vec::new(),
                children: Vec::new(),
            });
        }
        Ok(Tree {
            nodes,
            names: names.to_vec(),
        })
    }
}

fn split_token(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(k) => (&s[..k], &s[k..]),
        None => (s, ""),
    }
}

fn parse_condition(text: &str, names: &[String]) -> std::result::Result<Condition, String> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() < 3 {
        return Err(format!("cannot read condition {:?}", text));
    }
    let feature = names
        .iter()
        .position(|n| n == toks[0])
        .ok_or_else(|| format!("unknown column {:?}", toks[0]))?;
    let op = Op::parse(toks[1]).ok_or_else(|| format!("unknown relation {:?}", toks[1]))?;
    let raw = toks[2..].join(" ");
    let value = if let Some(s) = raw.strip_prefix('\'').and_then(|s| s.strip_suffix('\'')) {
        Threshold::Sym(s.to_string())
    } else {
        Threshold::Num(raw.parse().map_err(|_| format!("bad threshold {:?}", raw))?)
    };
    Ok(Condition { feature, op, value })
}

/// Flat, serializable view of one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub feature: Option<String>,
    pub op: Option<Op>,
    pub value: Option<Threshold>,
    pub n: usize,
    pub win: f64,
    pub impurity: Option<f64>,
}
