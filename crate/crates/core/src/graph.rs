//! Small directed graphs: `l`-acyclicity, sinks and 3-sinks.
//!
//! A graph is `l`-acyclic when it has no directed cycle of length `>= l`.
//! A 3-sink is a vertex whose out-set is empty or a single vertex that
//! also points back.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiGraph {
    nvertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// Vertex found by a walk together with the number of vertices visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Walk {
    pub vertex: usize,
    pub visits: usize,
}

impl DiGraph {
    pub fn new(nvertices: usize) -> DiGraph {
        DiGraph { nvertices, edges: BTreeSet::new() }
    }

    pub fn from_edges(nvertices: usize, edges: &[(usize, usize)]) -> Result<DiGraph> {
        let mut g = DiGraph::new(nvertices);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if u >= self.nvertices || v >= self.nvertices {
            return Err(Error::InvalidArgument(format!("edge {u} -> {v} outside 0..{}", self.nvertices)));
        }
        Ok(self.edges.insert((u, v)))
    }

    pub fn nvertices(&self) -> usize {
        self.nvertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Out-neighbours in increasing order.
    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v)
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_neighbors(u).count()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_degree(v) == 0
    }

    /// Checks the 3-sink definition directly on the out-set.
    pub fn is_3_sink(&self, v: usize) -> bool {
        let outs: Vec<usize> = self.out_neighbors(v).collect();
        match outs.as_slice() {
            [] => true,
            [w] => self.has_edge(*w, v),
            _ => false,
        }
    }

    pub fn is_l_acyclic(&self, l: usize) -> Result<bool> {
        match l {
            0 | 1 => Err(Error::InvalidArgument(format!("l must be at least 2, got {l}"))),
            2 => Ok(self.topological_order().is_some()),
            3 => Ok(self.only_two_cycles()),
            _ => Ok(self.longest_simple_cycle_at_least(l).is_none()),
        }
    }

    /// Kahn's algorithm; `None` when a cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.nvertices];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..self.nvertices).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.nvertices);
        while let Some(u) = ready.pop_first() {
            order.push(u);
            for v in self.out_neighbors(u) {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        (order.len() == self.nvertices).then_some(order)
    }

    /// Strongly connected components, as a component id per vertex.
    pub fn scc_ids(&self) -> Vec<usize> {
        // iterative Tarjan
        const UNSEEN: usize = usize::MAX;
        let n = self.nvertices;
        let adj: Vec<Vec<usize>> = (0..n).map(|u| self.out_neighbors(u).collect()).collect();
        let (mut index, mut low, mut comp) = (vec![UNSEEN; n], vec![0; n], vec![UNSEEN; n]);
        let mut on_stack = vec![false; n];
        let (mut stack, mut next_index, mut next_comp) = (Vec::new(), 0, 0);
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (u, ref mut pos)) = call.last_mut() {
                if let Some(&v) = adj[u].get(*pos) {
                    *pos += 1;
                    if index[v] == UNSEEN {
                        index[v] = next_index;
                        low[v] = next_index;
                        next_index += 1;
                        stack.push(v);
                        on_stack[v] = true;
                        call.push((v, 0));
                    } else if on_stack[v] {
                        low[u] = low[u].min(index[v]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == u {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
        comp
    }

    /// No cycle of length >= 3 iff inside every strongly connected component
    /// all edges come in opposite pairs and those pairs form a tree.
    fn only_two_cycles(&self) -> bool {
        let comp = self.scc_ids();
        let mut sizes = vec![0usize; self.nvertices];
        for &c in &comp {
            sizes[c] += 1;
        }
        let mut pairs = vec![0usize; self.nvertices];
        for &(u, v) in &self.edges {
            if comp[u] != comp[v] {
                continue;
            }
            if !self.has_edge(v, u) {
                return false;
            }
            if u < v {
                pairs[comp[u]] += 1;
            }
        }
        // a connected component with exactly size-1 undirected edges is a tree
        (0..self.nvertices).all(|c| sizes[c] == 0 || pairs[c] == sizes[c] - 1)
    }

    /// Length of some simple cycle of length `>= l`, by exhaustive search.
    /// Exponential; meant for small graphs and as a reference.
    pub fn longest_simple_cycle_at_least(&self, l: usize) -> Option<usize> {
        let n = self.nvertices;
        let adj: Vec<Vec<usize>> = (0..n).map(|u| self.out_neighbors(u).collect()).collect();
        // cycles are enumerated from their smallest vertex
        fn dfs(adj: &[Vec<usize>], start: usize, u: usize, depth: usize, l: usize, on_path: &mut [bool]) -> Option<usize> {
            for &v in &adj[u] {
                if v == start && depth >= l {
                    return Some(depth);
                }
                if v > start && !on_path[v] {
                    on_path[v] = true;
                    let found = dfs(adj, start, v, depth + 1, l, on_path);
                    on_path[v] = false;
                    if found.is_some() {
                        return found;
                    }
                }
            }
            None
        }
        let mut on_path = vec![false; n];
        (0..n).find_map(|s| {
            on_path[s] = true;
            let r = dfs(&adj, s, s, 1, l, &mut on_path);
            on_path[s] = false;
            r
        })
    }

    /// Follows the smallest out-edge from vertex 0 until a sink is reached.
    pub fn find_sink(&self) -> Result<usize> {
        Ok(self.sink_walk()?.vertex)
    }

    pub fn sink_walk(&self) -> Result<Walk> {
        self.require_vertices()?;
        if !self.is_l_acyclic(2)? {
            return Err(Error::CyclicGraph(2));
        }
        let (mut cur, mut visits) = (0, 1);
        while let Some(next) = self.out_neighbors(cur).next() {
            cur = next;
            visits += 1;
        }
        Ok(Walk { vertex: cur, visits })
    }

    /// Like [`DiGraph::find_sink`] but never steps straight back to the
    /// previous vertex.
    pub fn find_3_sink(&self) -> Result<usize> {
        Ok(self.three_sink_walk()?.vertex)
    }

    pub fn three_sink_walk(&self) -> Result<Walk> {
        self.require_vertices()?;
        if !self.is_l_acyclic(3)? {
            return Err(Error::CyclicGraph(3));
        }
        let (mut cur, mut prev, mut visits) = (0, None, 1);
        loop {
            let Some(next) = self.out_neighbors(cur).find(|&v| Some(v) != prev) else {
                return Ok(Walk { vertex: cur, visits });
            };
            prev = Some(cur);
            cur = next;
            visits += 1;
            if visits > 2 * self.nvertices {
                // unreachable on 3-acyclic input
                return Err(Error::CyclicGraph(3));
            }
        }
    }

    fn require_vertices(&self) -> Result<()> {
        if self.nvertices == 0 {
            return Err(Error::InvalidArgument("graph has no vertices".into()));
        }
        Ok(())
    }

    /// One `u -> v` line per edge, a bare `u` line for each isolated vertex.
    pub fn to_edge_list(&self) -> String {
        let mut touched = vec![false; self.nvertices];
        for &(u, v) in &self.edges {
            touched[u] = true;
            touched[v] = true;
        }
        let mut out = String::new();
        for (v, _) in touched.iter().enumerate().filter(|(_, t)| !**t) {
            writeln!(out, "{v}").expect("string write");
        }
        for &(u, v) in &self.edges {
            writeln!(out, "{u} -> {v}").expect("string write");
        }
        out
    }

    /// Inverse of [`DiGraph::to_edge_list`]; the vertex count is one more
    /// than the largest id mentioned.
    pub fn parse_edge_list(text: &str) -> Result<DiGraph> {
        let mut edges = Vec::new();
        let mut nvertices = 0;
        let id = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex id {s:?}")));
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            match line.split_once("->") {
                Some((a, b)) => {
                    let (u, v) = (id(a)?, id(b)?);
                    nvertices = nvertices.max(u + 1).max(v + 1);
                    edges.push((u, v));
                }
                None => nvertices = nvertices.max(id(line)? + 1),
            }
        }
        DiGraph::from_edges(nvertices, &edges)
    }

    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let mut out = String::from("digraph G {\n");
        for v in 0..self.nvertices {
            match labels.and_then(|l| l.get(v)) {
                Some(label) => writeln!(out, "  {v} [label=\"{label}\"];"),
                None => writeln!(out, "  {v};"),
            }
            .expect("string write");
        }
        for &(u, v) in &self.edges {
            writeln!(out, "  {u} -> {v};").expect("string write");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> DiGraph {
        DiGraph::from_edges(n, e).unwrap()
    }

    #[test]
    fn acyclicity_examples() {
        let two_cycle = g(2, &[(0, 1), (1, 0)]);
        assert!(two_cycle.is_l_acyclic(3).unwrap());
        assert!(!two_cycle.is_l_acyclic(2).unwrap());
        let triangle = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(!triangle.is_l_acyclic(3).unwrap());
        assert!(triangle.is_l_acyclic(4).unwrap());
        assert!(g(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).is_l_acyclic(2).unwrap());
        assert!(two_cycle.is_l_acyclic(1).is_err());
    }

    #[test]
    fn bidirectional_triangle_is_not_3_acyclic() {
        let t = g(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]);
        assert!(!t.is_l_acyclic(3).unwrap());
        let path = g(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert!(path.is_l_acyclic(3).unwrap());
    }

    #[test]
    fn self_loops_are_rejected() {
        assert_eq!(DiGraph::from_edges(2, &[(1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn sinks() {
        assert_eq!(g(3, &[(0, 1), (1, 2)]).find_sink().unwrap(), 2);
        assert_eq!(g(1, &[]).find_sink().unwrap(), 0);
        assert_eq!(g(3, &[(0, 1), (1, 2), (2, 0)]).find_sink(), Err(Error::CyclicGraph(2)));
    }

    #[test]
    fn three_sinks() {
        let two_cycle = g(2, &[(0, 1), (1, 0)]);
        assert!(two_cycle.is_3_sink(two_cycle.find_3_sink().unwrap()));
        assert_eq!(g(3, &[(0, 1), (1, 2)]).find_3_sink().unwrap(), 2);
        assert_eq!(g(3, &[(0, 1), (1, 2), (2, 0)]).find_3_sink(), Err(Error::CyclicGraph(3)));
        // 0 <-> 1 -> 2 <-> 3: the walk must not bounce between 0 and 1
        let h = g(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]);
        let v = h.find_3_sink().unwrap();
        assert!(h.is_3_sink(v));
        assert_eq!(v, 3);
    }

    #[test]
    fn edge_list_round_trip() {
        let h = g(5, &[(0, 1), (1, 0), (3, 2)]);
        let text = h.to_edge_list();
        assert_eq!(text, "4\n0 -> 1\n1 -> 0\n3 -> 2\n");
        assert_eq!(DiGraph::parse_edge_list(&text).unwrap(), h);
        assert!(DiGraph::parse_edge_list("0 -> x").is_err());
    }

    #[test]
    fn dot_output() {
        let dot = g(2, &[(0, 1)]).to_dot(Some(&["a".into(), "b".into()]));
        assert_eq!(dot, "digraph G {\n  0 [label=\"a\"];\n  1 [label=\"b\"];\n  0 -> 1;\n}\n");
    }
}
