//! The digraph of a tensor, its strongly connected components, and the two
//! irreducibility predicates.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::product::{general_product_with_cap, ProductShape};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Largest dimension accepted by [`weakly_irreducible_paper`], which checks
/// every index subset.
pub const SUBSET_SEARCH_LIMIT: usize = 20;

/// Arc `(i, j)` is present iff some nonzero entry of row `i` has `j` among
/// its trailing indices and those indices are not all equal to `i`.
/// Vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorDigraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl TensorDigraph {
    pub fn empty(n: usize) -> Self {
        TensorDigraph {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (i, j) in arcs {
            g.add_arc(i, j);
        }
        g
    }

    pub fn add_arc(&mut self, i: usize, j: usize) {
        self.adj[i][j] = true;
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i]
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(j, _)| j)
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| self.successors(i).map(move |j| (i, j)))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().flatten().filter(|&&a| a).count()
    }

    /// Component id of every vertex; ids are in reverse topological order.
    pub fn strongly_connected_components(&self) -> Vec<usize> {
        tarjan(self)
    }

    /// First vertex (0-based) that lies on no circuit.
    pub fn first_uncovered_vertex(&self) -> Option<usize> {
        let comp = self.strongly_connected_components();
        let mut size = vec![0usize; self.n];
        for &c in &comp {
            size[c] += 1;
        }
        (0..self.n).find(|&i| !self.adj[i][i] && size[comp[i]] < 2)
    }

    pub fn is_strongly_connected(&self) -> bool {
        let comp = self.strongly_connected_components();
        comp.iter().all(|&c| c == comp[0])
    }
}

fn tarjan(g: &TensorDigraph) -> Vec<usize> {
    let mut pg = DiGraph::<(), ()>::with_capacity(g.n, g.arc_count());
    let nodes: Vec<_> = (0..g.n).map(|_| pg.add_node(())).collect();
    for (i, j) in g.arcs() {
        pg.add_edge(nodes[i], nodes[j], ());
    }
    let mut comp = vec![0; g.n];
    for (c, members) in tarjan_scc(&pg).into_iter().enumerate() {
        for v in members {
            comp[v.index()] = c;
        }
    }
    comp
}

/// The digraph of a tensor, read directly off its nonzero entries.
pub fn build_digraph<T: Scalar>(t: &Tensor<T>) -> TensorDigraph {
    let mut g = TensorDigraph::empty(t.dim());
    t.for_each_nonzero(|idx, _| {
        let i = idx[0];
        let tail = &idx[1..];
        if tail.iter().all(|&j| j == i) {
            return;
        }
        for &j in tail {
            g.adj[i][j] = true;
        }
    });
    g
}

/// The digraph of `AB` together with whether it is known to be exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDigraph {
    pub digraph: TensorDigraph,
    /// `false` when the arcs are a superset estimate that ignores possible
    /// cancellation between terms.
    pub exact: bool,
}

/// The digraph of `AB`.
///
/// For nonnegative factors no cancellation can occur, so the pattern is read
/// from the nonzero structure of `A` and of the rows of `B` without forming
/// the product. Otherwise the product is materialized when at most
/// `entry_cap` entries are involved, and the pattern-based superset is
/// returned, flagged inexact, when it is not.
pub fn product_digraph<T: Scalar>(
    a: &Tensor<T>,
    b: &Tensor<T>,
    entry_cap: usize,
) -> Result<ProductDigraph> {
    ProductShape::of(a, b)?;
    if a.is_nonneg() && b.is_nonneg() {
        return Ok(ProductDigraph {
            digraph: pattern_digraph(a, b),
            exact: true,
        });
    }
    match general_product_with_cap(a, b, entry_cap) {
        Ok(c) => Ok(ProductDigraph {
            digraph: build_digraph(&c),
            exact: true,
        }),
        Err(Error::EntryCapExceeded { .. }) | Err(Error::DenseTooLarge { .. }) => {
            Ok(ProductDigraph {
                digraph: pattern_digraph(a, b),
                exact: false,
            })
        }
        Err(e) => Err(e),
    }
}

/// Nonzero structure of the rows of `B`, summarized per vertex.
struct RowPattern {
    /// Number of distinct nonzero tails in the row.
    tails: usize,
    /// `appears[j]`: some nonzero tail contains `j`.
    appears: Vec<bool>,
    /// `constant[j]`: the tail `(j, ..., j)` is nonzero.
    constant: Vec<bool>,
    /// `mixed[j]`: some nonzero tail contains `j` and another index.
    mixed: Vec<bool>,
}

fn pattern_digraph<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> TensorDigraph {
    let n = a.dim();
    let mut g = TensorDigraph::empty(n);
    if b.order() == 1 {
        // AB is a vector; its tails are empty.
        return g;
    }
    let mut rows: Vec<RowPattern> = (0..n)
        .map(|_| RowPattern {
            tails: 0,
            appears: vec![false; n],
            constant: vec![false; n],
            mixed: vec![false; n],
        })
        .collect();
    b.for_each_nonzero(|idx, _| {
        let row = &mut rows[idx[0]];
        let tail = &idx[1..];
        row.tails += 1;
        let first = tail[0];
        let is_constant = tail.iter().all(|&j| j == first);
        for &j in tail {
            row.appears[j] = true;
            if !is_constant {
                row.mixed[j] = true;
            }
        }
        if is_constant {
            row.constant[first] = true;
        }
    });

    a.for_each_nonzero(|idx, _| {
        let i = idx[0];
        let slots = &idx[1..];
        if slots.iter().any(|&r| rows[r].tails == 0) {
            return;
        }
        for &r in slots {
            for j in 0..n {
                if j != i && rows[r].appears[j] {
                    g.adj[i][j] = true;
                }
            }
        }
        if g.adj[i][i] {
            return;
        }
        // Self-loop: some slot contributes `i` while the concatenated tail
        // is not constant.
        let non_constant = |r: usize| rows[r].tails > usize::from(rows[r].constant[i]);
        let self_loop = slots.iter().any(|&r| rows[r].mixed[i])
            || slots.iter().enumerate().any(|(s, &r)| {
                rows[r].appears[i]
                    && slots
                        .iter()
                        .enumerate()
                        .any(|(t, &q)| t != s && non_constant(q))
            });
        if self_loop {
            g.adj[i][i] = true;
        }
    });
    g
}

/// Strong connectivity of the representation digraph: arc `(i, j)`, `j != i`,
/// when some nonzero entry of row `i` has `j` among its trailing indices.
pub fn weakly_irreducible_standard<T: Scalar>(a: &Tensor<T>) -> bool {
    let n = a.dim();
    let mut g = TensorDigraph::empty(n);
    a.for_each_nonzero(|idx, _| {
        for &j in &idx[1..] {
            if j != idx[0] {
                g.adj[idx[0]][j] = true;
            }
        }
    });
    g.is_strongly_connected()
}

/// The stronger subset form: for every nonempty proper `I`, some nonzero
/// entry has its first index in `I` and every trailing index outside `I`.
/// Checked over all subsets, so `n` is limited to [`SUBSET_SEARCH_LIMIT`].
pub fn weakly_irreducible_paper<T: Scalar>(a: &Tensor<T>) -> Result<bool> {
    let n = a.dim();
    if n > SUBSET_SEARCH_LIMIT {
        return Err(Error::Unsupported(format!(
            "subset search supports n <= {SUBSET_SEARCH_LIMIT}, got {n}"
        )));
    }
    // Per first index, the distinct masks of trailing indices.
    let mut masks: Vec<Vec<u32>> = vec![Vec::new(); n];
    a.for_each_nonzero(|idx, _| {
        let mask = idx[1..].iter().fold(0u32, |acc, &j| acc | (1 << j));
        masks[idx[0]].push(mask);
    });
    for m in &mut masks {
        m.sort_unstable();
        m.dedup();
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for subset in 1..full {
        let escapes = (0..n)
            .filter(|&i| subset & (1 << i) != 0)
            .any(|i| masks[i].iter().any(|&m| m & subset == 0));
        if !escapes {
            return Ok(false);
        }
    }
    Ok(true)
}
