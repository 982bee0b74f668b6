//! Elementary circuit enumeration (Johnson's algorithm).

use crate::error::{Error, Result};

use super::digraph::TensorDigraph;

pub const DEFAULT_CIRCUIT_CAP: usize = 100_000;

/// An elementary circuit `v_1 -> ... -> v_l -> v_1` with distinct 0-based
/// vertices, stored with its smallest vertex first. A self-loop has `l = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circuit {
    pub vertices: Vec<usize>,
}

impl Circuit {
    /// Rotates `vertices` so the smallest comes first.
    pub fn canonical(mut vertices: Vec<usize>) -> Self {
        if let Some(pos) = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
        {
            vertices.rotate_left(pos);
        }
        Circuit { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v + 1).collect()
    }
}

struct Search<'a> {
    g: &'a TensorDigraph,
    start: usize,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    path: Vec<usize>,
    out: Vec<Circuit>,
    cap: usize,
}

impl Search<'_> {
    fn unblock(&mut self, u: usize) {
        let mut todo = vec![u];
        while let Some(v) = todo.pop() {
            if !self.blocked[v] {
                continue;
            }
            self.blocked[v] = false;
            todo.append(&mut self.blocked_by[v]);
        }
    }

    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut found = false;
        self.path.push(v);
        self.blocked[v] = true;
        let succ: Vec<usize> = self.g.successors(v).filter(|&w| w >= self.start).collect();
        for &w in &succ {
            if w == self.start {
                if self.out.len() == self.cap {
                    return Err(Error::CircuitCapExceeded { cap: self.cap });
                }
                self.out.push(Circuit {
                    vertices: self.path.clone(),
                });
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &succ {
                if !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.path.pop();
        Ok(found)
    }
}

/// All elementary circuits, each once, smallest vertex first, sorted.
/// Fails once more than `cap` circuits have been found.
pub fn enumerate_circuits(g: &TensorDigraph, cap: usize) -> Result<Vec<Circuit>> {
    if cap == 0 {
        return Err(Error::Unsupported("circuit cap must be positive".into()));
    }
    let n = g.vertex_count();
    let mut search = Search {
        g,
        start: 0,
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        path: Vec::new(),
        out: Vec::new(),
        cap,
    };
    for s in 0..n {
        search.start = s;
        for v in s..n {
            search.blocked[v] = false;
            search.blocked_by[v].clear();
        }
        search.circuit(s)?;
    }
    let mut out = search.out;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute_force(g: &TensorDigraph) -> BTreeSet<Circuit> {
        fn extend(g: &TensorDigraph, path: &mut Vec<usize>, out: &mut BTreeSet<Circuit>) {
            let last = *path.last().unwrap();
            for w in g.successors(last) {
                if w == path[0] {
                    out.insert(Circuit::canonical(path.clone()));
                } else if w > path[0] && !path.contains(&w) {
                    path.push(w);
                    extend(g, path, out);
                    path.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        for s in 0..g.vertex_count() {
            extend(g, &mut vec![s], &mut out);
        }
        out
    }

    #[test]
    fn small_cases() {
        let two = TensorDigraph::from_arcs(2, [(0, 1), (1, 0)]);
        assert_eq!(
            enumerate_circuits(&two, 10).unwrap(),
            vec![Circuit {
                vertices: vec![0, 1]
            }]
        );
        let full = TensorDigraph::from_arcs(2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        let c: Vec<Vec<usize>> = enumerate_circuits(&full, 10)
            .unwrap()
            .into_iter()
            .map(|c| c.vertices)
            .collect();
        assert_eq!(c, vec![vec![0], vec![0, 1], vec![1]]);
        assert!(enumerate_circuits(&TensorDigraph::empty(4), 10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let complete =
            TensorDigraph::from_arcs(5, (0..5).flat_map(|i| (0..5).map(move |j| (i, j))));
        assert_eq!(
            enumerate_circuits(&complete, 10),
            Err(Error::CircuitCapExceeded { cap: 10 })
        );
        // 5 loops + 10 + 20 + 30 + 24 longer circuits.
        assert_eq!(enumerate_circuits(&complete, 1000).unwrap().len(), 89);
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(Circuit::canonical(vec![3, 1, 2]).vertices, vec![1, 2, 3]);
        assert_eq!(Circuit::canonical(vec![2, 0, 1]).one_based(), vec![1, 2, 3]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(arcs in prop::collection::vec((0usize..6, 0usize..6), 0..18)) {
            let g = TensorDigraph::from_arcs(6, arcs);
            let found = enumerate_circuits(&g, DEFAULT_CIRCUIT_CAP).unwrap();
            let unique: BTreeSet<Circuit> = found.iter().cloned().collect();
            prop_assert_eq!(unique.len(), found.len());
            for c in &found {
                prop_assert_eq!(c, &Circuit::canonical(c.vertices.clone()));
                for k in 0..c.len() {
                    prop_assert!(g.has_arc(c.vertices[k], c.vertices[(k + 1) % c.len()]));
                }
            }
            prop_assert_eq!(unique, brute_force(&g));
        }
    }
}
