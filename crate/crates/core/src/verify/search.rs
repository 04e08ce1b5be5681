//! Path and cycle extraction shared by the witness builders.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use super::certificate::{Lasso, Path, Step};
use crate::composition::{Composition, Edge};
use crate::fsa::{EventId, Fsa, StateId};

/// Vertex, tag, next edge index and the entering edge.
type Frame = (u32, u64, usize, Option<(u32, usize)>);

/// A walk through the composition: start vertex and `(source, edge)` pairs.
pub(crate) struct Walk {
    pub start: u32,
    pub edges: Vec<(u32, usize)>,
    /// Tag after each prefix; `tags[0]` belongs to `start`.
    pub tags: Vec<u64>,
}

impl Walk {
    pub fn end(&self, c: &Composition) -> u32 {
        self.edges.last().map_or(self.start, |&(_, e)| c.edge(e).target)
    }

    pub fn vertex(&self, c: &Composition, i: usize) -> u32 {
        if i == 0 {
            self.start
        } else {
            c.edge(self.edges[i - 1].1).target
        }
    }
}

pub(crate) fn to_path(c: &Composition, start: u32, edges: &[(u32, usize)]) -> Path {
    Path {
        start: c.state(start).to_vec(),
        steps: edges
            .iter()
            .map(|&(src, e)| {
                let edge = c.edge(e);
                Step {
                    source: c.state(src).to_vec(),
                    moves: edge.moves.to_vec(),
                    target: c.state(edge.target).to_vec(),
                }
            })
            .collect(),
    }
}

/// First accepting node in depth-first order over `(vertex, tag)` pairs.
///
/// Starts are tried in the given order and successors in edge order, with a
/// global visited set, so the result is deterministic.
pub(crate) fn dfs<N, A>(c: &Composition, starts: &[(u32, u64)], next: N, accept: A) -> Option<Walk>
where
    N: Fn(u32, u64, Edge<'_>) -> Option<u64>,
    A: Fn(u32, u64) -> bool,
{
    let mut visited: FxHashSet<(u32, u64)> = FxHashSet::default();
    for &(v0, t0) in starts {
        if !visited.insert((v0, t0)) {
            continue;
        }
        if accept(v0, t0) {
            return Some(Walk { start: v0, edges: vec![], tags: vec![t0] });
        }
        let mut stack: Vec<Frame> = vec![(v0, t0, c.edge_range(v0).start, None)];
        while let Some(top) = stack.last_mut() {
            let (u, tag, cursor) = (top.0, top.1, top.2);
            if cursor >= c.edge_range(u).end {
                stack.pop();
                continue;
            }
            top.2 += 1;
            let edge = c.edge(cursor);
            let Some(nt) = next(u, tag, edge) else { continue };
            let w = edge.target;
            if !visited.insert((w, nt)) {
                continue;
            }
            stack.push((w, nt, c.edge_range(w).start, Some((u, cursor))));
            if accept(w, nt) {
                let edges = stack.iter().filter_map(|f| f.3).collect();
                let tags = stack.iter().map(|f| f.1).collect();
                return Some(Walk { start: v0, edges, tags });
            }
        }
    }
    None
}

/// Shortest closed walk through `v` inside the vertex set `member` that uses an edge
/// satisfying `good`. Returns the `(source, edge)` sequence.
pub(crate) fn shortest_good_cycle(
    c: &Composition,
    v: u32,
    member: impl Fn(u32) -> bool,
    good: impl Fn(u32, Edge<'_>) -> bool,
) -> Option<Vec<(u32, usize)>> {
    // Forward distances from v.
    let mut fwd: FxHashMap<u32, (usize, Option<(u32, usize)>)> = FxHashMap::default();
    let mut order = vec![v];
    fwd.insert(v, (0, None));
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let d = fwd[&u].0;
        for e in c.edges(u) {
            if member(e.target) && !fwd.contains_key(&e.target) {
                fwd.insert(e.target, (d + 1, Some((u, e.id))));
                order.push(e.target);
                queue.push_back(e.target);
            }
        }
    }
    // Backward distances to v over the same vertex set.
    let mut rev: FxHashMap<u32, Vec<(u32, usize)>> = FxHashMap::default();
    for &u in &order {
        for e in c.edges(u) {
            if fwd.contains_key(&e.target) {
                rev.entry(e.target).or_default().push((u, e.id));
            }
        }
    }
    let mut bwd: FxHashMap<u32, (usize, Option<(u32, usize)>)> = FxHashMap::default();
    bwd.insert(v, (0, None));
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let d = bwd[&u].0;
        for &(p, e) in rev.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if let std::collections::hash_map::Entry::Vacant(slot) = bwd.entry(p) {
                slot.insert((d + 1, Some((u, e))));
                queue.push_back(p);
            }
        }
    }
    let mut best: Option<(usize, u32, usize)> = None;
    let mut sorted = order.clone();
    sorted.sort_unstable();
    for &p in &sorted {
        let dp = fwd[&p].0;
        for e in c.edges(p) {
            let Some(&(dq, _)) = bwd.get(&e.target) else { continue };
            if !good(p, e) {
                continue;
            }
            let len = dp + 1 + dq;
            if best.is_none_or(|(b, _, _)| len < b) {
                best = Some((len, p, e.id));
            }
        }
    }
    let (_, p, e) = best?;
    let mut head = Vec::new();
    let mut cur = p;
    while let Some((_, Some((prev, edge)))) = fwd.get(&cur).copied() {
        head.push((prev, edge));
        cur = prev;
    }
    head.reverse();
    head.push((p, e));
    let mut cur = c.edge(e).target;
    while let Some((_, Some((nxt, edge)))) = bwd.get(&cur).copied() {
        head.push((cur, edge));
        cur = nxt;
    }
    Some(head)
}

/// Nearest cycle reachable from `from` using only allowed events: BFS to the
/// closest state on such a cycle, then the shortest cycle through it.
pub(crate) fn lasso(s: &Fsa, from: StateId, allow: impl Fn(EventId) -> bool) -> Option<Lasso> {
    let n = s.num_states();
    let succ = |x: usize| -> Vec<usize> {
        s.successors(StateId(x as u32)).iter().filter(|&&(e, _)| allow(e)).map(|&(_, y)| y.index()).collect()
    };
    let scc = crate::graph::tarjan(n, |x| succ(x).into_iter());
    let cyclic = scc.cyclic_vertices(succ);

    let mut parent: Vec<Option<(usize, EventId)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from.index()]);
    let mut hub = None;
    while let Some(x) = queue.pop_front() {
        if cyclic[x] {
            hub = Some(x);
            break;
        }
        for &(e, y) in s.successors(StateId(x as u32)) {
            if allow(e) && !seen[y.index()] {
                seen[y.index()] = true;
                parent[y.index()] = Some((x, e));
                queue.push_back(y.index());
            }
        }
    }
    let hub = hub?;
    let mut tail = Vec::new();
    let mut cur = hub;
    while cur != from.index() {
        let (p, e) = parent[cur].expect("BFS parent");
        tail.push((e, StateId(cur as u32)));
        cur = p;
    }
    tail.reverse();
    let cycle = shortest_cycle_at(s, StateId(hub as u32), &allow)?;
    Some(Lasso { start: from, tail, cycle })
}

fn shortest_cycle_at(s: &Fsa, z: StateId, allow: &impl Fn(EventId) -> bool) -> Option<Vec<(EventId, StateId)>> {
    let n = s.num_states();
    let mut parent: Vec<Option<(usize, EventId)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[z.index()] = true;
    let mut queue = VecDeque::from([z.index()]);
    while let Some(x) = queue.pop_front() {
        for &(e, y) in s.successors(StateId(x as u32)) {
            if !allow(e) {
                continue;
            }
            if y == z {
                let mut cycle = vec![(e, z)];
                let mut cur = x;
                while cur != z.index() {
                    let (p, pe) = parent[cur].expect("BFS parent");
                    cycle.push((pe, StateId(cur as u32)));
                    cur = p;
                }
                cycle.reverse();
                return Some(cycle);
            }
            if !seen[y.index()] {
                seen[y.index()] = true;
                parent[y.index()] = Some((x, e));
                queue.push_back(y.index());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn lasso_to_self_loop() {
        let s = catalog::branching().fsa;
        let l = lasso(&s, s.state_id("x0").unwrap(), |_| true).unwrap();
        assert_eq!(l.tail.len(), 1);
        assert_eq!(l.cycle.len(), 1);
        assert_eq!(l.cycle[0].1, l.cycle_start());
    }

    #[test]
    fn no_lasso_without_cycles() {
        let s = catalog::fault_or_silent(false).fsa;
        assert!(lasso(&s, s.state_id("x0").unwrap(), |_| true).is_none());
    }
}
