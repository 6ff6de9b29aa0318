//! Plumbing graphs: decorated trees with Euler numbers.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: Option<String>,
    ids: Vec<String>,
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    euler: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    vertices: Vec<VertexDoc>,
    edges: Vec<(String, String)>,
}

/// Result of [`Graph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    pub tree: bool,
    pub connected: bool,
    pub negative_definite: bool,
    pub det_abs: BigInt,
    pub leading_minors: Vec<BigInt>,
}

/// A connected component of the graph with some vertices removed.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: Graph,
    /// `map[i]` is the index in the parent graph of vertex `i` of `graph`.
    pub map: Vec<usize>,
}

impl Graph {
    /// Builds a graph from ids/eulers and id pairs, checking the tree shape.
    pub fn new<S: AsRef<str>>(
        name: Option<String>,
        vertices: &[(S, i64)],
        edges: &[(S, S)],
    ) -> Result<Graph> {
        let mut index = HashMap::new();
        let mut ids = Vec::with_capacity(vertices.len());
        let mut euler = Vec::with_capacity(vertices.len());
        for (id, e) in vertices {
            let id = id.as_ref();
            if id.is_empty() {
                return Err(Error::Malformed("empty vertex id".into()));
            }
            if index.insert(id.to_string(), ids.len()).is_some() {
                return Err(Error::DuplicateId(id.to_string()));
            }
            ids.push(id.to_string());
            euler.push(*e);
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let find = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::Malformed(format!("edge endpoint `{s}` is not a vertex")))
            };
            idx_edges.push((find(a.as_ref())?, find(b.as_ref())?));
        }
        Graph::from_indexed(name, ids, euler, idx_edges)
    }

    pub(crate) fn from_indexed(
        name: Option<String>,
        ids: Vec<String>,
        euler: Vec<i64>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Graph> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Malformed("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::NotATree(format!("loop at `{}`", ids[a])));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::NotATree(format!("repeated edge `{}`-`{}`", ids[a], ids[b])));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} vertices but {} edges",
                n,
                edges.len()
            )));
        }
        if count_reachable(&adj, 0) != n {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(Graph { name, ids, euler, edges, adj })
    }

    pub fn parse_json(text: &str) -> Result<Graph> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let vs: Vec<(String, i64)> = doc.vertices.into_iter().map(|v| (v.id, v.euler)).collect();
        Graph::new(doc.name, &vs, &doc.edges)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = GraphDoc {
            name: self.name.clone(),
            vertices: self
                .ids
                .iter()
                .zip(&self.euler)
                .map(|(id, &euler)| VertexDoc { id: id.clone(), euler })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
        };
        serde_json::to_value(doc).expect("graph serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph serializes")
    }

    /// Short hex digest of the canonical serialization.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_string(&self.to_json_value()).unwrap().as_bytes());
        h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = Some(name.into());
        self
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    pub fn eulers(&self) -> &[i64] {
        &self.euler
    }

    pub fn euler(&self, v: usize) -> i64 {
        self.euler[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertices of valency at least 3.
    pub fn nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.valency(v) >= 3).collect()
    }

    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut m = vec![vec![0i64; n]; n];
        for v in 0..n {
            m[v][v] = self.euler[v];
        }
        for &(a, b) in &self.edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        m
    }

    pub fn validate(&self) -> Diagnostics {
        let m = self.intersection_matrix();
        let minors = linalg::leading_minors(&m);
        let negative_definite = minors.iter().enumerate().all(|(k, d)| {
            // (-1)^(k+1) det_(k+1) > 0
            if k % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        });
        let det_abs = minors.last().map(|d| d.abs()).unwrap_or_default();
        Diagnostics {
            tree: self.edges.len() + 1 == self.len(),
            connected: count_reachable(&self.adj, 0) == self.len(),
            negative_definite,
            det_abs,
            leading_minors: minors,
        }
    }

    pub fn is_negative_definite(&self) -> bool {
        self.validate().negative_definite
    }

    fn fresh_id(&self, base: &str) -> String {
        if !self.ids.iter().any(|x| x == base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|c| !self.ids.iter().any(|x| x == c))
            .unwrap()
    }

    fn attach(&mut self, to: usize, id: String, euler: i64) -> usize {
        let n = self.ids.len();
        self.ids.push(id);
        self.euler.push(euler);
        self.adj.push(vec![to]);
        self.adj[to].push(n);
        self.edges.push((to, n));
        n
    }

    /// Blows up a generic point of `E_v`: a new `-1` leaf, `e_v` drops by one.
    pub fn blow_up_vertex(&self, v: &str) -> Result<(Graph, String)> {
        self.blow_up_leg(v, 1)
    }

    /// Attaches a chain `(-2, ..., -2, -1)` of length `s` to `v` and lowers
    /// `e_v` by one. Returns the new graph and the id of the `-1` end.
    pub fn blow_up_leg(&self, v: &str, s: usize) -> Result<(Graph, String)> {
        let vi = self.index_of(v)?;
        if s == 0 {
            return Err(Error::InvalidArgument("leg length must be positive".into()));
        }
        let mut g = self.clone();
        g.euler[vi] -= 1;
        let mut prev = vi;
        let mut last = String::new();
        for k in 1..=s {
            let id = g.fresh_id(&format!("{v}_b{k}"));
            let e = if k == s { -1 } else { -2 };
            prev = g.attach(prev, id.clone(), e);
            last = id;
        }
        Ok((g, last))
    }

    /// Connected components after deleting `removed`, in order of their
    /// lowest vertex.
    pub fn split_at(&self, removed: &[usize]) -> Vec<Component> {
        if removed.is_empty() {
            return vec![Component { graph: self.clone(), map: (0..self.len()).collect() }];
        }
        let gone: HashSet<usize> = removed.iter().copied().collect();
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if gone.contains(&start) || comp[start] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = c;
            while let Some(x) = stack.pop() {
                members.push(x);
                for &y in &self.adj[x] {
                    if !gone.contains(&y) && comp[y] == usize::MAX {
                        comp[y] = c;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(self.induced(&members));
        }
        out
    }

    /// Full subgraph on `members` (assumed connected, sorted).
    pub fn induced(&self, members: &[usize]) -> Component {
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let ids = members.iter().map(|&v| self.ids[v].clone()).collect();
        let euler = members.iter().map(|&v| self.euler[v]).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((*local.get(&a)?, *local.get(&b)?)))
            .collect();
        let graph = Graph::from_indexed(None, ids, euler, edges)
            .expect("connected full subgraph of a tree is a tree");
        Component { graph, map: members.to_vec() }
    }

    /// Vertices of the branch at `v` that contains the neighbour `u`.
    pub fn branch(&self, v: usize, u: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[v] = true;
        seen[u] = true;
        let mut stack = vec![u];
        let mut out = vec![];
        while let Some(x) = stack.pop() {
            out.push(x);
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Glues two graphs by identifying vertex `a` of `self` with vertex `b`
    /// of `other`; the merged vertex keeps the id of `a` and gets `euler`.
    /// Ids of `other` are suffixed to stay unique.
    pub fn glue(&self, a: &str, other: &Graph, b: &str, euler: i64, suffix: &str) -> Result<Graph> {
        let ai = self.index_of(a)?;
        let bi = other.index_of(b)?;
        let mut ids = self.ids.clone();
        let mut eul = self.euler.clone();
        eul[ai] = euler;
        let mut edges = self.edges.clone();
        let mut map = vec![usize::MAX; other.len()];
        map[bi] = ai;
        for v in 0..other.len() {
            if v != bi {
                map[v] = ids.len();
                ids.push(format!("{}{}", other.ids[v], suffix));
                eul.push(other.euler[v]);
            }
        }
        for &(x, y) in &other.edges {
            edges.push((map[x], map[y]));
        }
        let set: HashSet<&String> = ids.iter().collect();
        if set.len() != ids.len() {
            return Err(Error::DuplicateId(format!("gluing suffix `{suffix}` collides")));
        }
        Graph::from_indexed(self.name.clone(), ids, eul, edges)
    }
}

fn count_reachable(adj: &[Vec<usize>], start: usize) -> usize {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 0;
    while let Some(x) = stack.pop() {
        count += 1;
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    count
}

impl Diagnostics {
    pub fn det_is_zero(&self) -> bool {
        self.det_abs.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G1: &str = r#"{"name":"G1","vertices":[{"id":"v","euler":-2}],"edges":[]}"#;
    const G2: &str =
        r#"{"vertices":[{"id":"v","euler":-3},{"id":"w","euler":-1}],"edges":[["v","w"]]}"#;

    #[test]
    fn parses_small_graphs() {
        let g = Graph::parse_json(G1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.euler(0), -2);
        assert_eq!(g.valency(0), 0);
        let g = Graph::parse_json(G2).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!((g.valency(0), g.valency(1)), (1, 1));
    }

    #[test]
    fn rejects_bad_documents() {
        let cyc = r#"{"vertices":[{"id":"a","euler":-2},{"id":"b","euler":-2},{"id":"c","euler":-2}],
                     "edges":[["a","b"],["b","c"],["c","a"]]}"#;
        assert!(matches!(Graph::parse_json(cyc), Err(Error::NotATree(_))));
        let dup = r#"{"vertices":[{"id":"a","euler":-2},{"id":"a","euler":-2}],"edges":[["a","a"]]}"#;
        assert!(matches!(Graph::parse_json(dup), Err(Error::DuplicateId(_))));
        assert!(matches!(Graph::parse_json("{"), Err(Error::Malformed(_))));
        let unk = r#"{"vertices":[{"id":"a","euler":-2}],"edges":[["a","z"]]}"#;
        assert!(matches!(Graph::parse_json(unk), Err(Error::Malformed(_))));
        let disc = r#"{"vertices":[{"id":"a","euler":-2},{"id":"b","euler":-2}],"edges":[]}"#;
        assert!(matches!(Graph::parse_json(disc), Err(Error::NotATree(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::parse_json(G2).unwrap();
        let h = Graph::parse_json(&g.to_json()).unwrap();
        assert_eq!(g, h);
        assert_eq!(g.fingerprint(), h.fingerprint());
    }

    #[test]
    fn validate_small_graphs() {
        let d = Graph::parse_json(G1).unwrap().validate();
        assert!(d.negative_definite && d.tree && d.connected);
        assert_eq!(d.det_abs, BigInt::from(2));
        let d = Graph::parse_json(G2).unwrap().validate();
        assert!(d.negative_definite);
        assert_eq!(d.det_abs, BigInt::from(2));
        let bad = Graph::new(None, &[("a", -1), ("b", -1)], &[("a", "b")]).unwrap();
        assert!(!bad.validate().negative_definite);
    }

    #[test]
    fn blow_ups() {
        let g1 = Graph::parse_json(G1).unwrap();
        let (g2, w) = g1.blow_up_vertex("v").unwrap();
        assert_eq!(g2.eulers(), &[-3, -1]);
        assert_eq!(g2.neighbors(g2.index_of(&w).unwrap()), &[0]);
        let (g, end) = g1.blow_up_leg("v", 2).unwrap();
        assert_eq!(g.eulers(), &[-3, -2, -1]);
        assert_eq!(g.index_of(&end).unwrap(), 2);
        assert_eq!(g.neighbors(1).len(), 2);
        for s in 1..=5 {
            assert!(g1.blow_up_leg("v", s).unwrap().0.is_negative_definite());
        }
        assert!(matches!(g1.blow_up_vertex("q"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn split_components() {
        let g2 = Graph::parse_json(G2).unwrap();
        let parts = g2.split_at(&[0]);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].graph.ids(), &["w".to_string()]);
        assert_eq!(parts[0].map, vec![1]);
        assert_eq!(g2.split_at(&[]).len(), 1);
        assert!(g2.split_at(&[0, 1]).is_empty());
    }
}
