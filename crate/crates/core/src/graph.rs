//! Labeled asynchronous transition graphs and the SCC machinery on top of them.
//!
//! An edge `a → b` labeled `v` exists iff stepping every component of `a` by
//! `Φ^v` yields `b`. Fairness lives on labels: a run is progressive iff the
//! labels it uses infinitely often cover every coordinate. Any infinite run
//! eventually stays in one SCC, and a closed walk in a strongly connected
//! multigraph can traverse all of its internal edges, so a fair run exists
//! iff a reachable SCC has internal labels covering `(1,…,1)`.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::HashMap;

use crate::boolean::{full_mask, CoordinateSet, FireVector, StateVector, TransitionFunction};
use crate::error::{Error, Result};

/// Node budget for explored product graphs.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: u32,
    pub target: u32,
}

/// Explicit graph over keys `K`; node ids are positions in ascending key order.
#[derive(Clone, Debug)]
pub struct LabeledGraph<K> {
    arity: u8,
    keys: Vec<K>,
    index: HashMap<K, u32>,
    edges: Vec<Vec<Edge>>,
    zero_labels: bool,
}

impl<K: Clone + Ord + Hash> LabeledGraph<K> {
    /// Explores everything reachable from `starts`. `succ(k, v)` returns the
    /// `v`-successor of `k`, or `None` to drop the edge. Labels are tried in
    /// increasing order; the zero label is skipped unless `zero_labels`.
    pub fn explore(
        arity: u8,
        starts: &[K],
        zero_labels: bool,
        budget: u64,
        mut succ: impl FnMut(&K, u32) -> Option<K>,
    ) -> Result<Self> {
        let mut keys: Vec<K> = Vec::new();
        let mut index: HashMap<K, u32> = HashMap::new();
        let mut raw: Vec<Vec<(u32, u32)>> = Vec::new();
        for s in starts {
            if !index.contains_key(s) {
                index.insert(s.clone(), keys.len() as u32);
                keys.push(s.clone());
            }
        }
        let first_label = if zero_labels { 0 } else { 1 };
        let mut head = 0;
        while head < keys.len() {
            let mut out = Vec::new();
            for v in first_label..=full_mask(arity) {
                if let Some(t) = succ(&keys[head], v) {
                    let id = match index.get(&t) {
                        Some(&id) => id,
                        None => {
                            if keys.len() as u64 >= budget {
                                return Err(Error::Budget { attempted: keys.len() as u64 + 1, limit: budget });
                            }
                            let id = keys.len() as u32;
                            index.insert(t.clone(), id);
                            keys.push(t);
                            id
                        }
                    };
                    out.push((v, id));
                }
            }
            raw.push(out);
            head += 1;
        }
        drop(index);
        Ok(Self::assemble(arity, keys, raw, zero_labels))
    }

    /// Renumbers in key order; `raw[i]` lists `(label, old target id)`.
    fn assemble(arity: u8, keys: Vec<K>, raw: Vec<Vec<(u32, u32)>>, zero_labels: bool) -> Self {
        let mut order: Vec<u32> = (0..keys.len() as u32).collect();
        order.sort_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]));
        let mut rank = vec![0u32; keys.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old as usize] = new as u32;
        }
        let mut slots: Vec<Option<K>> = keys.into_iter().map(Some).collect();
        let sorted: Vec<K> = order.iter().map(|&i| slots[i as usize].take().unwrap()).collect();
        let index: HashMap<K, u32> = sorted.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();
        let edges = order
            .iter()
            .map(|&old| raw[old as usize].iter().map(|&(label, t)| Edge { label, target: rank[t as usize] }).collect())
            .collect();
        Self { arity, keys: sorted, index, edges, zero_labels }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn has_zero_labels(&self) -> bool {
        self.zero_labels
    }

    pub fn key(&self, id: u32) -> &K {
        &self.keys[id as usize]
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn id(&self, key: &K) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Outgoing edges of `id`, ascending by label.
    pub fn edges(&self, id: u32) -> &[Edge] {
        &self.edges[id as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Labels of all edges `a → b`.
    pub fn edge_labels(&self, a: &K, b: &K) -> Vec<FireVector> {
        match (self.id(a), self.id(b)) {
            (Some(a), Some(b)) => self.edges[a as usize]
                .iter()
                .filter(|e| e.target == b)
                .map(|e| FireVector::from_raw(self.arity, e.label))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Nodes reachable from `from` through nodes allowed by `allow`.
    pub fn reachable(&self, from: u32, allow: impl Fn(u32) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if !allow(from) {
            return seen;
        }
        seen[from as usize] = true;
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            for e in &self.edges[x as usize] {
                if !seen[e.target as usize] && allow(e.target) {
                    seen[e.target as usize] = true;
                    stack.push(e.target);
                }
            }
        }
        seen
    }

    /// Strongly connected components of the subgraph induced by `include`.
    pub fn condense(&self, include: &[bool]) -> Condensation {
        Condensation::compute(self, include)
    }

    /// Breadth-first path from `from` to the first node satisfying `goal`,
    /// staying inside `allow`. Neighbours are expanded in label order, so the
    /// path is shortest and then lexicographically least by labels.
    pub fn shortest_path(
        &self,
        from: u32,
        allow: impl Fn(u32) -> bool,
        goal: impl Fn(u32) -> bool,
    ) -> Option<(Vec<u32>, u32)> {
        if goal(from) {
            return Some((Vec::new(), from));
        }
        let mut parent: HashMap<u32, (u32, u32)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        parent.insert(from, (u32::MAX, 0));
        while let Some(x) = queue.pop_front() {
            for e in &self.edges[x as usize] {
                if e.label == 0 || parent.contains_key(&e.target) || !allow(e.target) {
                    continue;
                }
                parent.insert(e.target, (x, e.label));
                if goal(e.target) {
                    let mut labels = Vec::new();
                    let mut cur = e.target;
                    while cur != from {
                        let (p, l) = parent[&cur];
                        labels.push(l);
                        cur = p;
                    }
                    labels.reverse();
                    return Some((labels, e.target));
                }
                queue.push_back(e.target);
            }
        }
        None
    }
}

/// SCC partition, numbered in topological order (edges go from lower to
/// higher component ids).
#[derive(Clone, Debug)]
pub struct Condensation {
    component: Vec<u32>,
    members: Vec<Vec<u32>>,
    internal: Vec<u32>,
    successors: Vec<Vec<u32>>,
    arity: u8,
}

pub const EXCLUDED: u32 = u32::MAX;

impl Condensation {
    fn compute<K: Clone + Ord + Hash>(g: &LabeledGraph<K>, include: &[bool]) -> Self {
        let n = g.len();
        let mut index = vec![u32::MAX; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut comp = vec![EXCLUDED; n];
        let mut found: Vec<Vec<u32>> = Vec::new();
        let mut next = 0u32;
        let mut call: Vec<(u32, usize)> = Vec::new();

        for root in 0..n as u32 {
            if !include[root as usize] || index[root as usize] != u32::MAX {
                continue;
            }
            call.push((root, 0));
            index[root as usize] = next;
            low[root as usize] = next;
            next += 1;
            stack.push(root);
            on_stack[root as usize] = true;
            while let Some(&mut (v, ref mut ei)) = call.last_mut() {
                let edges = g.edges(v);
                if *ei < edges.len() {
                    let w = edges[*ei].target;
                    *ei += 1;
                    if !include[w as usize] {
                        continue;
                    }
                    if index[w as usize] == u32::MAX {
                        index[w as usize] = next;
                        low[w as usize] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w as usize] = true;
                        call.push((w, 0));
                    } else if on_stack[w as usize] {
                        low[v as usize] = low[v as usize].min(index[w as usize]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent as usize] = low[parent as usize].min(low[v as usize]);
                    }
                    if low[v as usize] == index[v as usize] {
                        let mut members = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w as usize] = false;
                            members.push(w);
                            if w == v {
                                break;
                            }
                        }
                        members.sort_unstable();
                        found.push(members);
                    }
                }
            }
        }

        // Tarjan emits sinks first; reverse for topological numbering.
        found.reverse();
        for (c, members) in found.iter().enumerate() {
            for &m in members {
                comp[m as usize] = c as u32;
            }
        }
        let mut internal = vec![0u32; found.len()];
        let mut successors = vec![Vec::new(); found.len()];
        for (c, members) in found.iter().enumerate() {
            for &m in members {
                for e in g.edges(m) {
                    let tc = comp[e.target as usize];
                    if tc == EXCLUDED {
                        continue;
                    }
                    if tc == c as u32 {
                        internal[c] |= e.label;
                    } else {
                        successors[c].push(tc);
                    }
                }
            }
            successors[c].sort_unstable();
            successors[c].dedup();
        }
        Self { component: comp, members: found, internal, successors, arity: g.arity() }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Component of `node`, or [`EXCLUDED`].
    pub fn component_of(&self, node: u32) -> u32 {
        self.component[node as usize]
    }

    pub fn members(&self, c: u32) -> &[u32] {
        &self.members[c as usize]
    }

    /// Union of labels on edges with both endpoints in `c`.
    pub fn internal_labels(&self, c: u32) -> CoordinateSet {
        CoordinateSet::from_raw(self.arity, self.internal[c as usize])
    }

    pub fn is_fair(&self, c: u32) -> bool {
        self.internal[c as usize] == full_mask(self.arity)
    }

    /// Direct successors in the condensation DAG.
    pub fn successors(&self, c: u32) -> &[u32] {
        &self.successors[c as usize]
    }

    /// Whether `to` is reachable from `from` (reflexive).
    pub fn reaches(&self, from: u32, to: u32) -> bool {
        if from == to {
            return true;
        }
        if from > to {
            return false;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        while let Some(c) = stack.pop() {
            for &d in &self.successors[c as usize] {
                if d == to {
                    return true;
                }
                if d < to && !seen[d as usize] {
                    seen[d as usize] = true;
                    stack.push(d);
                }
            }
        }
        false
    }

    /// Whether the listed components are pairwise comparable.
    pub fn is_chain(&self, comps: &[u32]) -> bool {
        let mut sorted = comps.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.windows(2).all(|w| self.reaches(w[0], w[1]))
    }
}

/// Outcome of a fair-SCC search: the SCC and the node where a shortest path
/// from the start first enters it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FairScc {
    pub component: u32,
    pub entry: u32,
}

/// Searches for a reachable SCC (within `allow`) whose internal labels cover
/// every coordinate and which satisfies `accept`.
pub fn find_fair_scc<K: Clone + Ord + Hash>(
    g: &LabeledGraph<K>,
    from: u32,
    allow: impl Fn(u32) -> bool + Copy,
    accept: impl Fn(u32) -> bool,
) -> Option<(Condensation, FairScc)> {
    let reach = g.reachable(from, allow);
    let cond = g.condense(&reach);
    let target = (0..cond.len() as u32).find(|&c| cond.is_fair(c) && cond.members(c).iter().any(|&m| accept(m)))?;
    let (_, entry) = g.shortest_path(from, allow, |x| cond.component_of(x) == target)?;
    Some((cond, FairScc { component: target, entry }))
}

/// True iff an infinite progressive run from `from` avoids every node in `avoid`.
pub fn exists_fair_run<K: Clone + Ord + Hash>(g: &LabeledGraph<K>, from: u32, avoid: &[u32]) -> bool {
    if avoid.contains(&from) {
        return false;
    }
    find_fair_scc(g, from, |x| !avoid.contains(&x), |_| true).is_some()
}

/// A fair lasso `(prefix, period)` of labels witnessing [`exists_fair_run`].
pub fn fair_run_witness<K: Clone + Ord + Hash>(
    g: &LabeledGraph<K>,
    from: u32,
    allow: impl Fn(u32) -> bool + Copy,
    accept: impl Fn(u32) -> bool,
) -> Option<(Vec<u32>, Vec<u32>)> {
    if !allow(from) {
        return None;
    }
    let (cond, fair) = find_fair_scc(g, from, allow, accept)?;
    let (prefix, entry) = g.shortest_path(from, allow, |x| x == fair.entry)?;
    let period = covering_cycle(g, &cond, fair.component, entry);
    Some((prefix, period))
}

/// Closed walk from `entry` inside component `c` whose labels cover every
/// coordinate. Requires `c` fair.
pub(crate) fn covering_cycle<K: Clone + Ord + Hash>(
    g: &LabeledGraph<K>,
    cond: &Condensation,
    c: u32,
    entry: u32,
) -> Vec<u32> {
    let full = full_mask(g.arity());
    let inside = |x: u32| cond.component_of(x) == c;
    let mut walk = Vec::new();
    let mut covered = 0u32;
    let mut cur = entry;
    while covered != full {
        // nearest node with an internal edge firing something new
        let needs = |x: u32| g.edges(x).iter().any(|e| inside(e.target) && e.label & !covered != 0);
        let (path, at) = g.shortest_path(cur, inside, needs).expect("component is strongly connected");
        let e = *g.edges(at).iter().find(|e| inside(e.target) && e.label & !covered != 0).unwrap();
        for &l in &path {
            covered |= l;
        }
        walk.extend(path);
        walk.push(e.label);
        covered |= e.label;
        cur = e.target;
    }
    if cur != entry {
        let (back, _) = g.shortest_path(cur, inside, |x| x == entry).unwrap();
        walk.extend(back);
    }
    walk
}

/// True iff one walk from `from` visits every node in `targets`.
pub fn covering_walk_exists<K: Clone + Ord + Hash>(g: &LabeledGraph<K>, from: u32, targets: &[u32]) -> bool {
    let reach = g.reachable(from, |_| true);
    if targets.iter().any(|&t| !reach[t as usize]) {
        return false;
    }
    let cond = g.condense(&reach);
    let comps: Vec<u32> = targets.iter().chain(core::iter::once(&from)).map(|&t| cond.component_of(t)).collect();
    cond.is_chain(&comps)
}

/// Labels of a walk from `from` visiting every target, if one exists.
pub fn covering_walk<K: Clone + Ord + Hash>(
    g: &LabeledGraph<K>,
    from: u32,
    targets: &[u32],
    allow: impl Fn(u32) -> bool + Copy,
) -> Option<(Vec<u32>, u32)> {
    let reach = g.reachable(from, allow);
    if targets.iter().any(|&t| !reach[t as usize]) {
        return None;
    }
    let cond = g.condense(&reach);
    let mut order: Vec<u32> = targets.to_vec();
    order.sort_by_key(|&t| (cond.component_of(t), t));
    let mut comps: Vec<u32> = order.iter().map(|&t| cond.component_of(t)).collect();
    comps.push(cond.component_of(from));
    if !cond.is_chain(&comps) {
        return None;
    }
    let mut visited = vec![false; g.len()];
    let mut cur = from;
    visited[from as usize] = true;
    let mut walk = Vec::new();
    for t in order {
        if visited[t as usize] {
            continue;
        }
        let (path, _) = g.shortest_path(cur, allow, |x| x == t)?;
        for &l in &path {
            cur = g.edges(cur).iter().find(|e| e.label == l && allow(e.target)).map(|e| e.target).unwrap();
            visited[cur as usize] = true;
        }
        walk.extend(path);
    }
    Some((walk, cur))
}

/// The asynchronous transition graph of `Φ`, optionally restricted to a set.
///
/// Nodes are all states (or `restrict_to`); every label `v`, including the
/// zero label, contributes an edge `a → Φ^v(a)` kept only when the target is
/// a node.
pub fn build_graph(phi: &TransitionFunction, restrict_to: Option<&[StateVector]>) -> Result<LabeledGraph<StateVector>> {
    let n = phi.arity();
    let mut nodes: Vec<StateVector> = match restrict_to {
        Some(set) => {
            if let Some(s) = set.iter().find(|s| s.arity() != n) {
                return Err(Error::ArityMismatch { expected: n, found: s.arity() });
            }
            set.to_vec()
        }
        None => phi.states().collect(),
    };
    nodes.sort_unstable();
    nodes.dedup();
    let mut pos = vec![u32::MAX; 1 << n];
    for (i, s) in nodes.iter().enumerate() {
        pos[s.bits() as usize] = i as u32;
    }
    let raw = nodes
        .iter()
        .map(|a| {
            (0..=full_mask(n))
                .filter_map(|v| {
                    let t = phi.step_bits(v, a.bits());
                    let id = pos[t as usize];
                    (id != u32::MAX).then_some((v, id))
                })
                .collect()
        })
        .collect();
    Ok(LabeledGraph::assemble(n, nodes, raw, true))
}

/// Node of an `m`-component product, optionally tracking fired coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductNode<const M: usize> {
    pub states: [u32; M],
    pub fired: Option<u32>,
}

/// Product graph in which all components are stepped by the same label.
///
/// With `track_coverage` the node carries `F`, the union of labels fired so
/// far. With `diagonal_forbidden_when_covered`, nodes with `F = (1,…,1)` and
/// two unequal components are omitted.
pub fn product_graph<const M: usize>(
    phi: &TransitionFunction,
    starts: [StateVector; M],
    track_coverage: bool,
    diagonal_forbidden_when_covered: bool,
    budget: u64,
) -> Result<LabeledGraph<ProductNode<M>>> {
    assert!(M >= 2, "a product needs at least two components");
    let n = phi.arity();
    if let Some(s) = starts.iter().find(|s| s.arity() != n) {
        return Err(Error::ArityMismatch { expected: n, found: s.arity() });
    }
    let states_space = (1u64 << n).checked_pow(M as u32).unwrap_or(u64::MAX);
    let space = if track_coverage { states_space.saturating_mul(1 << n) } else { states_space };
    if space > budget {
        return Err(Error::Budget { attempted: space, limit: budget });
    }
    let full = full_mask(n);
    let forbidden = |node: &ProductNode<M>| {
        diagonal_forbidden_when_covered && node.fired == Some(full) && node.states.iter().any(|&x| x != node.states[0])
    };
    let start = ProductNode { states: starts.map(|s| s.bits()), fired: track_coverage.then_some(0) };
    let starts_vec: Vec<_> = if forbidden(&start) { Vec::new() } else { vec![start] };
    LabeledGraph::explore(n, &starts_vec, true, budget, |node, v| {
        let next = ProductNode { states: node.states.map(|x| phi.step_bits(v, x)), fired: node.fired.map(|f| f | v) };
        (!forbidden(&next)).then_some(next)
    })
}

/// Dense search space of pairs `(a, b, F)` for the coverage-tracked product.
///
/// Node index is `a | b << n | F << 2n`; labels are expanded in increasing
/// order and the zero label is skipped (it is a self-loop).
pub(crate) struct PairSpace<'a> {
    phi: &'a TransitionFunction,
    n: u32,
}

impl<'a> PairSpace<'a> {
    pub const MAX_ARITY: u8 = 8;

    pub fn new(phi: &'a TransitionFunction) -> Result<Self> {
        let n = phi.arity();
        if n > Self::MAX_ARITY {
            let attempted = 1u64 << (3 * n as u64).min(63);
            return Err(Error::Budget { attempted, limit: 1 << (3 * Self::MAX_ARITY as u64) });
        }
        Ok(Self { phi, n: n as u32 })
    }

    pub fn encode(&self, a: u32, b: u32, f: u32) -> usize {
        (a | b << self.n | f << (2 * self.n)) as usize
    }

    pub fn decode(&self, idx: usize) -> (u32, u32, u32) {
        let m = (1u32 << self.n) - 1;
        let i = idx as u32;
        (i & m, i >> self.n & m, i >> (2 * self.n) & m)
    }

    /// BFS over `(a, b, F[, flag])`; `extra` carries one bit of user state.
    ///
    /// Returns the label word reaching the first goal node.
    pub fn search(
        &self,
        start: (u32, u32),
        blocked: impl Fn(u32, u32, u32) -> bool,
        flag: impl Fn(bool, u32, u32, u32) -> bool,
        goal: impl Fn(bool, u32, u32, u32) -> bool,
    ) -> Option<Vec<u32>> {
        let (a0, b0) = start;
        if blocked(a0, b0, 0) {
            return None;
        }
        let fl0 = flag(false, a0, b0, 0);
        if goal(fl0, a0, b0, 0) {
            return Some(Vec::new());
        }
        let encode = |fl: bool, a, b, f| (self.encode(a, b, f) << 1 | fl as usize) as u32;
        let s = encode(fl0, a0, b0, 0);
        // node -> (parent, label)
        let mut parent: HashMap<u32, (u32, u32)> = HashMap::new();
        parent.insert(s, (s, 0));
        let mut queue = VecDeque::from([s]);
        let full = (1u32 << self.n) - 1;
        while let Some(x) = queue.pop_front() {
            let fl = x & 1 == 1;
            let (a, b, f) = self.decode((x >> 1) as usize);
            for v in 1..=full {
                let (na, nb, nf) = (self.phi.step_bits(v, a), self.phi.step_bits(v, b), f | v);
                if blocked(na, nb, nf) {
                    continue;
                }
                let nfl = flag(fl, na, nb, nf);
                let y = encode(nfl, na, nb, nf);
                if parent.contains_key(&y) {
                    continue;
                }
                parent.insert(y, (x, v));
                if goal(nfl, na, nb, nf) {
                    let mut word = Vec::new();
                    let mut cur = y;
                    while cur != s {
                        let (p, l) = parent[&cur];
                        word.push(l);
                        cur = p;
                    }
                    word.reverse();
                    return Some(word);
                }
                queue.push_back(y);
            }
        }
        None
    }
}

/// Keys for the visited-set pair search `(a, b, V, W)` used by atemporal
/// separation; `V`, `W` are bitsets over states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitPairNode {
    pub a: u32,
    pub b: u32,
    pub visited_a: u64,
    pub visited_b: u64,
}

/// Keys for the shared-schedule product over a set `A`: component states and
/// per-component visited masks over positions in `A`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetProductNode {
    pub data: Box<[u32]>,
}
