//! Graph utilities over dense vertex indices.

use std::collections::VecDeque;

/// Strongly connected components, numbered in reverse topological order.
#[derive(Debug, Clone)]
pub struct Sccs {
    pub component: Vec<usize>,
    pub count: usize,
    pub sizes: Vec<usize>,
}

impl Sccs {
    /// Vertices lying on some cycle of length ≥ 1.
    pub fn cyclic_vertices<I>(&self, succ: impl Fn(usize) -> I) -> Vec<bool>
    where
        I: IntoIterator<Item = usize>,
    {
        let n = self.component.len();
        let mut cyclic = vec![false; n];
        for (v, flag) in cyclic.iter_mut().enumerate() {
            *flag = self.sizes[self.component[v]] > 1 || succ(v).into_iter().any(|w| w == v);
        }
        cyclic
    }
}

/// Iterative Tarjan.
pub fn tarjan<I>(n: usize, succ: impl Fn(usize) -> I) -> Sccs
where
    I: Iterator<Item = usize>,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut sizes = Vec::new();
    let mut next = 0;
    let mut call: Vec<(usize, I)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root)));
        while let Some((v, it)) = call.last_mut() {
            let v = *v;
            if let Some(w) = it.next() {
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w)));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some((parent, _)) = call.last() {
                let p = *parent;
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                let c = sizes.len();
                let mut size = 0;
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component[w] = c;
                    size += 1;
                    if w == v {
                        break;
                    }
                }
                sizes.push(size);
            }
        }
    }
    Sccs { count: sizes.len(), component, sizes }
}

/// Vertices from which some seed is reachable (seeds included).
pub fn backward_closure<I>(n: usize, seeds: &[bool], succ: impl Fn(usize) -> I) -> Vec<bool>
where
    I: IntoIterator<Item = usize>,
{
    let mut preds = vec![Vec::new(); n];
    for v in 0..n {
        for w in succ(v) {
            preds[w].push(v);
        }
    }
    let mut seen = seeds.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| seeds[v]).collect();
    while let Some(w) = queue.pop_front() {
        for &v in &preds[w] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Vertices reachable from some seed (seeds included).
pub fn forward_closure<I>(n: usize, seeds: &[bool], succ: impl Fn(usize) -> I) -> Vec<bool>
where
    I: IntoIterator<Item = usize>,
{
    let mut seen = seeds.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| seeds[v]).collect();
    while let Some(v) = queue.pop_front() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path from `from` to any vertex satisfying `goal`, restricted to `allowed`.
///
/// Returns the vertex sequence including both ends. Ties are broken by the
/// iteration order of `succ`.
pub fn bfs_path<I>(
    n: usize,
    from: usize,
    allowed: impl Fn(usize) -> bool,
    goal: impl Fn(usize) -> bool,
    succ: impl Fn(usize) -> I,
) -> Option<Vec<usize>>
where
    I: IntoIterator<Item = usize>,
{
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for w in succ(v) {
            if allowed(w) && !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn adj(edges: &[(usize, usize)], n: usize) -> Vec<Vec<usize>> {
        let mut a = vec![Vec::new(); n];
        for &(u, v) in edges {
            a[u].push(v);
        }
        a
    }

    #[test]
    fn two_cycles_and_a_bridge() {
        let a = adj(&[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (4, 4)], 6);
        let s = tarjan(6, |v| a[v].clone().into_iter());
        assert_eq!(s.component[0], s.component[1]);
        assert_eq!(s.component[2], s.component[3]);
        assert_ne!(s.component[0], s.component[2]);
        assert!(s.component[2] < s.component[0], "reverse topological numbering");
        let cyc = s.cyclic_vertices(|v| a[v].clone());
        assert_eq!(cyc, [true, true, true, true, true, false]);
    }

    #[test]
    fn bfs_finds_shortest() {
        let a = adj(&[(0, 1), (1, 2), (0, 2), (2, 3)], 4);
        let p = bfs_path(4, 0, |_| true, |v| v == 3, |v| a[v].clone()).unwrap();
        assert_eq!(p, [0, 2, 3]);
        assert!(bfs_path(4, 3, |_| true, |v| v == 0, |v| a[v].clone()).is_none());
    }

    fn reach(a: &[Vec<usize>], from: usize) -> Vec<bool> {
        let mut seeds = vec![false; a.len()];
        seeds[from] = true;
        forward_closure(a.len(), &seeds, |v| a[v].clone())
    }

    proptest! {
        #[test]
        fn scc_matches_mutual_reachability(n in 1usize..9, edges in prop::collection::vec((0usize..9, 0usize..9), 0..25)) {
            let edges: Vec<_> = edges.into_iter().filter(|&(u, v)| u < n && v < n).collect();
            let a = adj(&edges, n);
            let s = tarjan(n, |v| a[v].clone().into_iter());
            let r: Vec<Vec<bool>> = (0..n).map(|v| reach(&a, v)).collect();
            for u in 0..n {
                for v in 0..n {
                    prop_assert_eq!(s.component[u] == s.component[v], r[u][v] && r[v][u]);
                }
            }
            for &(u, v) in &edges {
                prop_assert!(s.component[u] >= s.component[v]);
            }
        }

        #[test]
        fn backward_is_dual_of_forward(n in 1usize..8, edges in prop::collection::vec((0usize..8, 0usize..8), 0..20), t in 0usize..8) {
            let edges: Vec<_> = edges.into_iter().filter(|&(u, v)| u < n && v < n).collect();
            let a = adj(&edges, n);
            let t = t % n;
            let mut seeds = vec![false; n];
            seeds[t] = true;
            let back = backward_closure(n, &seeds, |v| a[v].clone());
            for v in 0..n {
                prop_assert_eq!(back[v], reach(&a, v)[t]);
            }
        }
    }
}
