//! Edge-space indexing of the complete graph `K_n` and brute-force
//! enumeration oracles for T-joins, T-cuts, and perfect matchings.
//!
//! Nodes are labelled `1..=n`. Edges are unordered pairs `{u, v}` indexed
//! lexicographically on `(min, max)`; that bijection is the coordinate
//! order of `R^{E_n}` everywhere in the toolkit.

use crate::error::{Error, Result};
use crate::num::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Hard cap on brute-force subset enumeration (2^21 subsets at n = 7).
pub const BRUTE_FORCE_NODE_CAP: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsetKind {
    TJoin,
    TCut,
    Matching,
    Generic,
}

/// A subset of edge indices with a tag recalling what it was enumerated as.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSubset {
    edges: Vec<usize>,
    kind: SubsetKind,
}

impl EdgeSubset {
    pub fn new(mut edges: Vec<usize>, kind: SubsetKind) -> Self {
        edges.sort_unstable();
        edges.dedup();
        EdgeSubset { edges, kind }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn kind(&self) -> SubsetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn intersection_size(&self, other: &EdgeSubset) -> usize {
        self.edges.iter().filter(|e| other.contains(**e)).count()
    }
}

/// A node subset inducing the cut `delta(S)`. Canonical representative
/// contains node 1, since `delta(S) = delta(V \ S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSpec {
    s: BTreeSet<usize>,
}

impl CutSpec {
    pub fn canonical(n: usize, s: impl IntoIterator<Item = usize>) -> Self {
        let s: BTreeSet<usize> = s.into_iter().collect();
        if s.contains(&1) {
            CutSpec { s }
        } else {
            CutSpec { s: (1..=n).filter(|v| !s.contains(v)).collect() }
        }
    }

    pub fn nodes(&self) -> &BTreeSet<usize> {
        &self.s
    }
}

/// Indexing of `E_n` together with the terminal set `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpace {
    n: usize,
    terminals: BTreeSet<usize>,
    edges: Vec<(usize, usize)>,
}

impl EdgeSpace {
    pub fn new(n: usize, terminals: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("need n >= 2 nodes, got {n}")));
        }
        let terminals: BTreeSet<usize> = terminals.into_iter().collect();
        if let Some(&bad) = terminals.iter().find(|&&t| t < 1 || t > n) {
            return Err(Error::Domain(format!("terminal {bad} outside 1..={n}")));
        }
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for u in 1..=n {
            for v in (u + 1)..=n {
                edges.push((u, v));
            }
        }
        Ok(EdgeSpace { n, terminals, edges })
    }

    /// All of `V_n` as terminals.
    pub fn odd_everything(n: usize) -> Result<Self> {
        EdgeSpace::new(n, 1..=n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terminals(&self) -> &BTreeSet<usize> {
        &self.terminals
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Result<usize> {
        if u == v || u < 1 || v < 1 || u > self.n || v > self.n {
            return Err(Error::Malformed(format!("no edge {{{u},{v}}} in K_{}", self.n)));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        // Lexicographic position of (a, b) among all ordered pairs a < b.
        let before_a: usize = (1..a).map(|i| self.n - i).sum();
        Ok(before_a + (b - a - 1))
    }

    /// A different terminal set over the same node set.
    pub fn with_terminals(&self, terminals: impl IntoIterator<Item = usize>) -> Result<EdgeSpace> {
        EdgeSpace::new(self.n, terminals)
    }

    fn require_even_terminals(&self) -> Result<()> {
        if !self.terminals.len().is_multiple_of(2) {
            return Err(Error::Parity(format!(
                "|T| = {} is odd; no T-join exists",
                self.terminals.len()
            )));
        }
        Ok(())
    }

    fn require_brute_force_scale(&self) -> Result<()> {
        if self.n > BRUTE_FORCE_NODE_CAP {
            return Err(Error::BruteForceCap { n: self.n, cap: BRUTE_FORCE_NODE_CAP });
        }
        Ok(())
    }

    /// The cut `delta(S)` as an edge subset.
    pub fn cut_edges(&self, spec: &CutSpec) -> EdgeSubset {
        let s = spec.nodes();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| s.contains(u) != s.contains(v))
            .map(|(e, _)| e)
            .collect();
        EdgeSubset::new(edges, SubsetKind::TCut)
    }

    /// All distinct T-cuts, complement-deduplicated via canonical `CutSpec`.
    pub fn enumerate_tcuts(&self) -> Result<Vec<EdgeSubset>> {
        self.require_even_terminals()?;
        self.require_brute_force_scale()?;
        if self.n < 2 {
            return Err(Error::Domain("need n >= 2".to_string()));
        }
        let mut cuts = Vec::new();
        let mut seen = BTreeSet::new();
        // Subsets containing node 1 are exactly the canonical representatives.
        let rest: Vec<usize> = (2..=self.n).collect();
        for mask in 0..(1u64 << rest.len()) {
            let mut s = vec![1usize];
            for (i, &v) in rest.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s.push(v);
                }
            }
            let odd = s.iter().filter(|v| self.terminals.contains(v)).count() % 2 == 1;
            if !odd {
                continue;
            }
            let cut = self.cut_edges(&CutSpec::canonical(self.n, s));
            if seen.insert(cut.edges().to_vec()) {
                cuts.push(cut);
            }
        }
        cuts.sort_by(|a, b| a.edges().cmp(b.edges()));
        Ok(cuts)
    }

    pub fn is_tjoin(&self, subset: &EdgeSubset) -> bool {
        let mut deg = vec![0usize; self.n + 1];
        for &e in subset.edges() {
            let (u, v) = self.edges[e];
            deg[u] += 1;
            deg[v] += 1;
        }
        (1..=self.n).all(|v| (deg[v] % 2 == 1) == self.terminals.contains(&v))
    }

    fn is_acyclic(&self, subset: &EdgeSubset) -> bool {
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &e in subset.edges() {
            let (u, v) = self.edges[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }

    /// Inclusion-minimal T-joins are exactly the parity-correct acyclic edge
    /// sets; they are the vertices of the T-join dominant.
    pub fn is_minimal_tjoin(&self, subset: &EdgeSubset) -> bool {
        self.is_tjoin(subset) && self.is_acyclic(subset)
    }

    /// All minimal T-joins by brute force over `2^{E_n}`.
    pub fn enumerate_minimal_tjoins(&self) -> Result<Vec<EdgeSubset>> {
        self.require_even_terminals()?;
        self.require_brute_force_scale()?;
        let m = self.num_edges();
        let mut out = Vec::new();
        for mask in 0..(1u64 << m) {
            let edges: Vec<usize> = (0..m).filter(|e| mask & (1 << e) != 0).collect();
            let subset = EdgeSubset::new(edges, SubsetKind::TJoin);
            if self.is_minimal_tjoin(&subset) {
                out.push(subset);
            }
        }
        out.sort_by(|a, b| (a.len(), a.edges()).cmp(&(b.len(), b.edges())));
        Ok(out)
    }

    /// All T-joins (not necessarily minimal), brute force.
    pub fn enumerate_tjoins(&self) -> Result<Vec<EdgeSubset>> {
        self.require_even_terminals()?;
        self.require_brute_force_scale()?;
        let m = self.num_edges();
        let mut out = Vec::new();
        for mask in 0..(1u64 << m) {
            let edges: Vec<usize> = (0..m).filter(|e| mask & (1 << e) != 0).collect();
            let subset = EdgeSubset::new(edges, SubsetKind::TJoin);
            if self.is_tjoin(&subset) {
                out.push(subset);
            }
        }
        out.sort_by(|a, b| (a.len(), a.edges()).cmp(&(b.len(), b.edges())));
        Ok(out)
    }

    /// All perfect matchings of `K_n`, by recursive pairing.
    pub fn enumerate_perfect_matchings(&self) -> Result<Vec<EdgeSubset>> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::Parity(format!(
                "K_{} has no perfect matching: odd node count",
                self.n
            )));
        }
        self.require_brute_force_scale()?;
        let mut out = Vec::new();
        let mut current = Vec::new();
        let all: BTreeSet<usize> = (1..=self.n).collect();
        self.pair_recursively(&all, &mut current, &mut out)?;
        out.sort_by(|a, b| a.edges().cmp(b.edges()));
        Ok(out)
    }

    fn pair_recursively(
        &self,
        remaining: &BTreeSet<usize>,
        current: &mut Vec<usize>,
        out: &mut Vec<EdgeSubset>,
    ) -> Result<()> {
        let Some(&first) = remaining.iter().next() else {
            out.push(EdgeSubset::new(current.clone(), SubsetKind::Matching));
            return Ok(());
        };
        for &mate in remaining.iter().skip(1) {
            let e = self.edge_index(first, mate)?;
            let mut rest = remaining.clone();
            rest.remove(&first);
            rest.remove(&mate);
            current.push(e);
            self.pair_recursively(&rest, current, out)?;
            current.pop();
        }
        Ok(())
    }

    /// 0/1 characteristic vector of an edge subset over `R^{E_n}`.
    pub fn characteristic_vector(&self, subset: &EdgeSubset) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.num_edges()];
        for &e in subset.edges() {
            x[e] = Rat::one();
        }
        x
    }
}
