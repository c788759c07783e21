use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`. Edge order is significant:
/// matrices indexed by edges follow it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.n, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n, edges: g.edges }
    }
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut incident = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (k, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Structure(format!("edge {k} = ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::Structure(format!("edge {k} is a loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Structure(format!("edge {k} = ({u}, {v}) is repeated")));
            }
            incident[u].push(k);
            incident[v].push(k);
        }
        Ok(Self { n, edges, incident })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, edges).expect("valid")
    }

    /// `K_{m,n}` with parts `u_i = i` and `v_j = m + j`; edge `u_i v_j` has index `i·n + j`.
    pub fn complete_bipartite(m: usize, n: usize) -> Self {
        let edges = (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect();
        Self::new(m + n, edges).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Edge indices incident to `v`, in edge order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.incident.get(u)?.iter().copied().find(|&e| {
            let (a, b) = self.edges[e];
            (a == u && b == v) || (a == v && b == u)
        })
    }

    pub fn touches(&self, e: usize, v: usize) -> bool {
        let (a, b) = self.edges[e];
        a == v || b == v
    }

    /// Distinct edges without a common endpoint.
    pub fn independent(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.edges[e];
        e != f && !self.touches(f, a) && !self.touches(f, b)
    }

    /// All independent pairs `(e, f)` with `e < f`, in lexicographic order.
    pub fn independent_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.edges.len();
        (0..m)
            .flat_map(|e| (e + 1..m).map(move |f| (e, f)))
            .filter(|&(e, f)| self.independent(e, f))
            .collect()
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v].iter().map(move |&e| {
            let (a, b) = self.edges[e];
            if a == v {
                b
            } else {
                a
            }
        })
    }

    /// Disjoint union of the two graphs; vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        Graph::new(self.n + other.n, edges).expect("union of simple graphs is simple")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

fn parse_pair(line: &str, ln: usize, what: [&str; 2]) -> Result<(usize, usize)> {
    let mut toks = line.split_whitespace();
    let mut next = |name: &str| -> Result<usize> {
        let tok = toks
            .next()
            .ok_or_else(|| Error::parse(ln, line.len() + 1, format!("missing {name}")))?;
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        tok.parse().map_err(|_| Error::parse(ln, col, format!("invalid {name} {tok:?}")))
    };
    let a = next(what[0])?;
    let b = next(what[1])?;
    if let Some(tok) = toks.next() {
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        return Err(Error::parse(ln, col, "unexpected extra token"));
    }
    Ok((a, b))
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty graph file"))?;
        let (n, m) = parse_pair(header, ln, ["vertex count", "edge count"])?;
        let mut edges = Vec::with_capacity(m);
        for k in 0..m {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(ln + k + 1, 1, format!("expected {m} edges, found {k}")))?;
            let (u, v) = parse_pair(line, ln, ["endpoint", "endpoint"])?;
            if u >= n || v >= n || u == v {
                return Err(Error::parse(ln, 1, format!("invalid edge ({u}, {v}) for {n} vertices")));
            }
            edges.push((u, v));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, 1, "trailing content after edge list"));
        }
        Graph::new(n, edges).map_err(|e| Error::parse(ln, 1, e.to_string()))
    }
}

/// Rooted spanning forest built by depth-first search.
///
/// For a non-tree edge that avoids a root, its fundamental cycle avoids that
/// root as well: DFS trees have no cross edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningForest {
    /// Parent vertex and the tree edge leading to it; `None` at roots.
    pub parent: Vec<Option<(usize, usize)>>,
    pub roots: Vec<usize>,
    /// Vertices in DFS preorder.
    pub order: Vec<usize>,
}

impl SpanningForest {
    /// DFS from `preferred` roots first, then from the smallest unvisited vertex.
    /// Neighbours are explored in edge order.
    pub fn dfs(g: &Graph, preferred: &[usize]) -> Result<Self> {
        let n = g.vertex_count();
        if let Some(&r) = preferred.iter().find(|&&r| r >= n) {
            return Err(Error::Structure(format!("root {r} out of range")));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut roots = Vec::new();
        let mut order = Vec::with_capacity(n);
        for r in preferred.iter().copied().chain(0..n) {
            if seen[r] {
                continue;
            }
            roots.push(r);
            seen[r] = true;
            order.push(r);
            let mut stack: Vec<(usize, usize)> = vec![(r, 0)];
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let inc = g.incident(v);
                if *next == inc.len() {
                    stack.pop();
                    continue;
                }
                let e = inc[*next];
                *next += 1;
                let (a, b) = g.edge(e);
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    order.push(w);
                    stack.push((w, 0));
                }
            }
        }
        Ok(Self { parent, roots, order })
    }

    /// Forest made of the given edges, which must be acyclic and connect every
    /// component of `g`. Each tree is rooted at its smallest vertex.
    pub fn from_edges(g: &Graph, tree_edges: &[usize]) -> Result<Self> {
        let n = g.vertex_count();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for &e in tree_edges {
            if e >= g.edge_count() {
                return Err(Error::Structure(format!("edge {e} out of range")));
            }
            let (u, v) = g.edge(e);
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut roots = Vec::new();
        let mut order = Vec::with_capacity(n);
        for r in 0..n {
            if seen[r] {
                continue;
            }
            roots.push(r);
            seen[r] = true;
            order.push(r);
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                for &(w, e) in &adj[v] {
                    if parent[v].is_some_and(|(_, pe)| pe == e) {
                        continue;
                    }
                    if seen[w] {
                        return Err(Error::Structure(format!("forest edges contain a cycle through edge {e}")));
                    }
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    order.push(w);
                    stack.push(w);
                }
            }
        }
        let forest = Self { parent, roots, order };
        let components = SpanningForest::dfs(g, &[])?.roots.len();
        if forest.roots.len() != components {
            return Err(Error::Structure(format!(
                "forest has {} trees but the graph has {components} components",
                forest.roots.len()
            )));
        }
        Ok(forest)
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.parent.iter().any(|p| p.is_some_and(|(_, pe)| pe == e))
    }

    /// Tree edges as `(parent, child, edge)` in DFS preorder of the child.
    pub fn tree_edges(&self) -> Vec<(usize, usize, usize)> {
        self.order
            .iter()
            .filter_map(|&v| self.parent[v].map(|(p, e)| (p, v, e)))
            .collect()
    }

    /// Vertices of the subtree hanging from `v`, `v` included.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.parent.len()];
        for (w, p) in self.parent.iter().enumerate() {
            if let Some((u, _)) = p {
                children[*u].push(w);
            }
        }
        let mut out = vec![v];
        let mut k = 0;
        while k < out.len() {
            out.extend_from_slice(&children[out[k]]);
            k += 1;
        }
        out
    }

    pub fn spans(&self, g: &Graph) -> bool {
        self.parent.len() == g.vertex_count()
            && self
                .parent
                .iter()
                .all(|p| p.is_none_or(|(u, e)| e < g.edge_count() && u < g.vertex_count()))
    }
}
