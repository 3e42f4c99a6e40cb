//! Immutable undirected simple graph with CSR adjacency.
//!
//! Nodes carry the original input labels; internally they are remapped to
//! dense ids assigned in sorted label order (numeric order when every label
//! parses as an integer, lexicographic otherwise), which makes traversal
//! order deterministic for a given input. Neighbor lists are sorted
//! ascending so set operations run as linear merges.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Dense node index in `[0, n)`.
pub type NodeId = usize;

/// Counts of input lines dropped during ingestion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

/// Immutable undirected simple graph.
///
/// Invariants: no self-loops, no duplicate edges, symmetric adjacency,
/// neighbor lists sorted ascending, `sum(degree) == 2 * edge_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
    row_ptr: Vec<usize>,
    adj: Vec<NodeId>,
    /// Canonical `(min, max)` pairs in first-occurrence input order.
    edges: Vec<(NodeId, NodeId)>,
    /// Per-edge epoch, parallel to `edges`; present iff every input line had one.
    timestamps: Option<Vec<i64>>,
}

/// Streaming graph ingestion: labels are interned as records arrive, so
/// large edge lists never sit in memory as raw strings.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    label_ids: HashMap<String, u32>,
    names: Vec<String>,
    raw_edges: Vec<(u32, u32)>,
    raw_ts: Vec<i64>,
    records_with_ts: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.label_ids.get(label) {
            return id;
        }
        let id = self.names.len() as u32;
        self.label_ids.insert(label.to_owned(), id);
        self.names.push(label.to_owned());
        id
    }

    pub fn add(&mut self, a: &str, b: &str, ts: Option<i64>) {
        let ia = self.intern(a);
        let ib = self.intern(b);
        self.raw_edges.push((ia, ib));
        if let Some(ts) = ts {
            self.raw_ts.push(ts);
            self.records_with_ts += 1;
        }
    }

    pub fn finish(self) -> Result<(Graph, BuildReport)> {
        if self.raw_edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if self.records_with_ts != 0 && self.records_with_ts != self.raw_edges.len() {
            return Err(Error::MixedTimestamps);
        }
        let timestamped = self.records_with_ts == self.raw_edges.len();
        let names = self.names;

        // Dense ids follow sorted label order: numeric when every label is an
        // integer (so e.g. node "2" precedes "10"), lexicographic otherwise.
        let n = names.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        let numeric: Option<Vec<i128>> = names
            .iter()
            .map(|s| s.parse::<i128>().ok())
            .collect::<Option<Vec<_>>>();
        match &numeric {
            Some(keys) => order.sort_by(|&a, &b| {
                keys[a as usize]
                    .cmp(&keys[b as usize])
                    .then_with(|| names[a as usize].cmp(&names[b as usize]))
            }),
            None => order.sort_by(|&a, &b| names[a as usize].cmp(&names[b as usize])),
        }
        let mut remap = vec![0u32; n];
        for (dense, &first_seen) in order.iter().enumerate() {
            remap[first_seen as usize] = dense as u32;
        }
        let labels: Vec<String> = order.iter().map(|&i| names[i as usize].clone()).collect();

        // Canonicalize, drop self-loops, dedup keeping first occurrence.
        let mut report = BuildReport::default();
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        let mut timestamps: Vec<i64> = Vec::new();
        let mut edge_slot: HashMap<(u32, u32), u32> = HashMap::new();
        for (idx, &(ia, ib)) in self.raw_edges.iter().enumerate() {
            let (u, v) = (remap[ia as usize], remap[ib as usize]);
            if u == v {
                report.self_loops += 1;
                continue;
            }
            let key = (u.min(v), u.max(v));
            match edge_slot.get(&key) {
                Some(&slot) => {
                    report.duplicate_edges += 1;
                    if timestamped && self.raw_ts[idx] < timestamps[slot as usize] {
                        timestamps[slot as usize] = self.raw_ts[idx];
                    }
                }
                None => {
                    edge_slot.insert(key, edges.len() as u32);
                    edges.push((key.0 as NodeId, key.1 as NodeId));
                    if timestamped {
                        timestamps.push(self.raw_ts[idx]);
                    }
                }
            }
        }
        drop(edge_slot);

        let graph = Graph::from_parts(labels, edges, timestamped.then_some(timestamps))?;
        Ok((graph, report))
    }
}

impl Graph {
    /// Builds a graph from labeled edge records, symmetrizing directed input.
    ///
    /// Self-loops and duplicate edges (in either direction) are dropped and
    /// counted in the [`BuildReport`]. A duplicate keeps the earliest
    /// timestamp seen for that edge. Records must either all carry a
    /// timestamp or none of them.
    pub fn build<S: AsRef<str>>(records: &[(S, S, Option<i64>)]) -> Result<(Self, BuildReport)> {
        let mut builder = GraphBuilder::new();
        for (a, b, ts) in records {
            builder.add(a.as_ref(), b.as_ref(), *ts);
        }
        builder.finish()
    }

    /// Assembles a graph from already-dense parts. Edges must reference ids
    /// below `labels.len()` and contain no self-loops or duplicates; they are
    /// canonicalized to `(min, max)` but kept in the given order.
    pub fn from_parts(
        labels: Vec<String>,
        edges: Vec<(NodeId, NodeId)>,
        timestamps: Option<Vec<i64>>,
    ) -> Result<Self> {
        let n = labels.len();
        if let Some(ts) = &timestamps {
            if ts.len() != edges.len() {
                return Err(Error::InvalidParameter(
                    "timestamp list length must match edge list".into(),
                ));
            }
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange {
                    id: u.max(v),
                    count: n,
                });
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop on node {u}")));
            }
            canon.push((u.min(v), u.max(v)));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &canon {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0usize);
        for d in &degree {
            row_ptr.push(row_ptr.last().unwrap() + d);
        }
        let mut adj = vec![0usize; 2 * canon.len()];
        let mut cursor = row_ptr[..n].to_vec();
        for &(u, v) in &canon {
            adj[cursor[u]] = v;
            cursor[u] += 1;
            adj[cursor[v]] = u;
            cursor[v] += 1;
        }
        for i in 0..n {
            adj[row_ptr[i]..row_ptr[i + 1]].sort_unstable();
            let run = &adj[row_ptr[i]..row_ptr[i + 1]];
            if run.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge incident to node {i}"
                )));
            }
        }

        let mut label_index = HashMap::with_capacity(n);
        for (id, name) in labels.iter().enumerate() {
            if label_index.insert(name.clone(), id).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate label '{name}'")));
            }
        }

        Ok(Self {
            labels,
            label_index,
            row_ptr,
            adj,
            edges: canon,
            timestamps,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(min, max)` edge pairs in first-occurrence input order.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Per-edge timestamps parallel to [`edges`](Self::edges), when ingested.
    pub fn timestamps(&self) -> Option<&[i64]> {
        self.timestamps.as_deref()
    }

    pub fn has_timestamps(&self) -> bool {
        self.timestamps.is_some()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    pub fn check_node(&self, id: NodeId) -> Result<()> {
        if id < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                id,
                count: self.node_count(),
            })
        }
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.row_ptr[id + 1] - self.row_ptr[id]
    }

    /// Neighbors of `id`, sorted ascending.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adj[self.row_ptr[id]..self.row_ptr[id + 1]]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Sorted common neighbors of two distinct nodes (never contains `u` or
    /// `v`: the graph has no self-loops).
    pub fn common_neighbors(&self, u: NodeId, v: NodeId) -> Result<Vec<NodeId>> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::InvalidParameter(
                "common_neighbors requires distinct nodes".into(),
            ));
        }
        let mut out = Vec::new();
        merge_intersection(self.neighbors(u), self.neighbors(v), |z| out.push(z));
        Ok(out)
    }

    /// `|Γ(u) ∩ Γ(v)|` without allocating.
    pub fn common_neighbor_count(&self, u: NodeId, v: NodeId) -> usize {
        let mut count = 0;
        merge_intersection(self.neighbors(u), self.neighbors(v), |_| count += 1);
        count
    }

    /// Number of edges among the neighbors of `id` (the `e_i` of the local
    /// clustering coefficient). Each such edge contributes twice to the sum
    /// of per-neighbor intersections, hence the halving.
    pub fn edges_among_neighbors(&self, id: NodeId) -> usize {
        let own = self.neighbors(id);
        let total: usize = own
            .iter()
            .map(|&z| {
                let mut c = 0;
                merge_intersection(own, self.neighbors(z), |_| c += 1);
                c
            })
            .sum();
        total / 2
    }

    /// Local clustering coefficient `2 e_i / (k_i (k_i - 1))`; defined as 0
    /// for nodes of degree < 2.
    pub fn local_clustering(&self, id: NodeId) -> Result<f64> {
        self.check_node(id)?;
        let k = self.degree(id);
        if k < 2 {
            return Ok(0.0);
        }
        let e = self.edges_among_neighbors(id);
        Ok(2.0 * e as f64 / (k as f64 * (k - 1) as f64))
    }

    /// Breadth-first sample: collects the first `max_nodes` nodes discovered
    /// from `start` (FIFO, neighbors visited in ascending id order) and
    /// returns the induced subgraph on them. Labels and edge timestamps are
    /// preserved; ids are re-densified in the parent's id order.
    pub fn bfs_sample(&self, start: NodeId, max_nodes: usize) -> Result<Graph> {
        self.check_node(start)?;
        if max_nodes == 0 {
            return Err(Error::InvalidParameter("max_nodes must be >= 1".into()));
        }
        let mut collected: Vec<NodeId> = Vec::with_capacity(max_nodes.min(self.node_count()));
        let mut visited = vec![false; self.node_count()];
        let mut queue = VecDeque::new();
        visited[start] = true;
        collected.push(start);
        queue.push_back(start);
        'outer: while collected.len() < max_nodes {
            let Some(u) = queue.pop_front() else { break };
            for &v in self.neighbors(u) {
                if !visited[v] {
                    visited[v] = true;
                    collected.push(v);
                    queue.push_back(v);
                    if collected.len() == max_nodes {
                        break 'outer;
                    }
                }
            }
        }

        collected.sort_unstable();
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (fresh, &old) in collected.iter().enumerate() {
            new_id[old] = fresh;
        }
        let labels = collected.iter().map(|&i| self.labels[i].clone()).collect();
        let mut edges = Vec::new();
        let mut timestamps = self.timestamps.as_ref().map(|_| Vec::new());
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            if new_id[u] != usize::MAX && new_id[v] != usize::MAX {
                edges.push((new_id[u], new_id[v]));
                if let (Some(out), Some(ts)) = (timestamps.as_mut(), self.timestamps.as_ref()) {
                    out.push(ts[idx]);
                }
            }
        }
        Graph::from_parts(labels, edges, timestamps)
    }
}

/// Visits each element of the sorted-slice intersection in ascending order.
pub(crate) fn merge_intersection(a: &[NodeId], b: &[NodeId], mut visit: impl FnMut(NodeId)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                visit(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}
