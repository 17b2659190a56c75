use std::collections::{BTreeMap, VecDeque};

use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::Cells;
use crate::coxeter::{ElemId, Element};
use crate::error::Result;
use crate::hecke::CProducts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Left,
    Right,
    TwoSided,
}

/// Elementary-edge graph of a cell preorder restricted to a ball. An edge
/// `w → y` means `C_y` occurs in `C_s C_w` (left), `C_w C_s` (right) or
/// either (two-sided), so `y ≼ w`.
#[derive(Clone, Debug)]
pub struct CellGraph {
    pub flavor: Flavor,
    pub radius: usize,
    pub adjacency: Vec<Vec<ElemId>>,
    /// Strongly connected components, each sorted, ordered by first member.
    pub sccs: Vec<Vec<ElemId>>,
    pub scc_of: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictedClass {
    pub key: String,
    pub members: Vec<Element>,
    /// All members lie in one SCC, which proves they share a cell.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub flavor: Flavor,
    pub radius: usize,
    pub classes: Vec<PredictedClass>,
    pub certified: usize,
    /// SCCs meeting more than one predicted class (none if the prediction holds).
    pub mixed_sccs: Vec<Vec<Element>>,
}

impl PartitionReport {
    pub fn consistent(&self) -> bool {
        self.mixed_sccs.is_empty()
    }
}

pub fn cell_graph(products: &CProducts, r: usize, flavor: Flavor) -> Result<CellGraph> {
    let sys = products.table().system();
    let ball = sys.ball_ids(r)?;
    let n = ball.end as usize;
    let mut adjacency: Vec<Vec<ElemId>> = vec![Vec::new(); n];
    for w in ball.clone() {
        let mut targets = Vec::new();
        for s in 0..sys.rank() {
            if flavor != Flavor::Right {
                targets.extend(products.left_gen_row(s, w)?.support());
            }
            if flavor != Flavor::Left {
                // C_w C_s is the image of C_s C_{w⁻¹} under inversion
                let row = products.left_gen_row(s, sys.inverse_id(w))?;
                targets.extend(row.support().map(|z| sys.inverse_id(z)));
            }
        }
        targets.retain(|&y| (y as usize) < n && y != w);
        targets.sort_unstable();
        targets.dedup();
        adjacency[w as usize] = targets;
    }
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for (w, ys) in adjacency.iter().enumerate() {
        for &y in ys {
            g.add_edge(nodes[w], nodes[y as usize], ());
        }
    }
    let mut sccs: Vec<Vec<ElemId>> = petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<ElemId> = c.into_iter().map(|i| i.index() as ElemId).collect();
            v.sort_unstable();
            v
        })
        .collect();
    sccs.sort_unstable_by_key(|c| c[0]);
    let mut scc_of = vec![0; n];
    for (i, c) in sccs.iter().enumerate() {
        for &w in c {
            scc_of[w as usize] = i;
        }
    }
    Ok(CellGraph { flavor, radius: r, adjacency, sccs, scc_of })
}

impl CellGraph {
    /// Every `y` with `y ≼ w` certified inside the ball.
    pub fn below(&self, w: ElemId) -> Vec<bool> {
        let mut seen = vec![false; self.adjacency.len()];
        seen[w as usize] = true;
        let mut queue = VecDeque::from([w]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn same_class(&self, x: ElemId, y: ElemId) -> bool {
        self.scc_of[x as usize] == self.scc_of[y as usize]
    }

    /// Compares the SCCs with the predicted partition: the sets `b·d·U_d`
    /// (right), their inverses (left), or the levels `Ω_N` (two-sided).
    pub fn compare(&self, cells: &Cells) -> Result<PartitionReport> {
        let sys = cells.system();
        let mut key_of: Vec<String> = Vec::with_capacity(self.adjacency.len());
        for w in 0..self.adjacency.len() as ElemId {
            let key = match self.flavor {
                Flavor::Right => {
                    let dec = cells.decompose(w)?;
                    format!("{}.{}", sys.element(dec.b), sys.element(dec.d))
                }
                Flavor::Left => {
                    let dec = cells.decompose(sys.inverse_id(w))?;
                    format!("{}.{}", sys.element(dec.d), sys.inverse(sys.element(dec.b))?)
                }
                Flavor::TwoSided => format!("N={}", cells.a_pred(w)?),
            };
            key_of.push(key);
        }
        let mut groups: BTreeMap<&str, Vec<ElemId>> = BTreeMap::new();
        for (w, k) in key_of.iter().enumerate() {
            groups.entry(k.as_str()).or_default().push(w as ElemId);
        }
        let mut classes: Vec<PredictedClass> = groups
            .into_iter()
            .map(|(k, members)| PredictedClass {
                key: k.to_string(),
                certified: members.iter().all(|&m| self.same_class(m, members[0])),
                members: members.into_iter().map(|m| sys.element(m).clone()).collect(),
            })
            .collect();
        classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
        let mixed_sccs = self
            .sccs
            .iter()
            .filter(|c| c.iter().any(|&w| key_of[w as usize] != key_of[c[0] as usize]))
            .map(|c| c.iter().map(|&w| sys.element(w).clone()).collect())
            .collect();
        Ok(PartitionReport {
            flavor: self.flavor,
            radius: self.radius,
            certified: classes.iter().filter(|c| c.certified).count(),
            classes,
            mixed_sccs,
        })
    }
}
