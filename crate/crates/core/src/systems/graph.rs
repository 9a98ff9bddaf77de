//! Small directed-graph toolkit over adjacency lists indexed `0..n`.

use std::collections::VecDeque;

use num_integer::Integer;

pub type Adjacency = Vec<Vec<usize>>;

/// Strongly connected components (iterative Tarjan). Returns the component id
/// of every vertex and the number of components.
pub fn strongly_connected_components(adj: &Adjacency) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut comps = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, position in its successor list)
        let mut work = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = comps;
                        if w == v {
                            break;
                        }
                    }
                    comps += 1;
                }
            }
        }
    }
    (comp, comps)
}

/// Vertices reachable from `start` by paths of length zero or more.
pub fn reachable(adj: &Adjacency, start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path with at least one edge from `from` to `to`, as the full
/// vertex sequence (so `from == to` yields a shortest cycle).
pub fn shortest_nonempty_path(adj: &Adjacency, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &w in &adj[from] {
        if !seen[w] {
            seen[w] = true;
            parent[w] = from;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            loop {
                let p = parent[cur];
                path.push(p);
                if p == from && path.len() >= 2 {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// BFS distances (in edges) from `start`; `usize::MAX` when unreachable.
pub fn bfs_levels(adj: &Adjacency, start: usize) -> Vec<usize> {
    let mut level = vec![usize::MAX; adj.len()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    level
}

/// Period (gcd of cycle lengths) of a strongly connected graph, computed
/// from BFS levels: gcd over edges of `level(u) + 1 - level(v)`.
pub fn period_of_irreducible(adj: &Adjacency) -> usize {
    let level = bfs_levels(adj, 0);
    let mut g = 0usize;
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            let diff = (level[u] + 1).abs_diff(level[v]);
            g = g.gcd(&diff);
        }
    }
    g
}

/// Boolean matrix product.
pub fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_splits_a_chain() {
        let adj = vec![vec![0, 1], vec![1, 2], vec![2]];
        let (comp, count) = strongly_connected_components(&adj);
        assert_eq!(count, 3);
        assert!(comp[0] != comp[1] && comp[1] != comp[2]);
    }

    #[test]
    fn scc_of_a_cycle_is_one() {
        let adj = vec![vec![1], vec![2], vec![0]];
        assert_eq!(strongly_connected_components(&adj).1, 1);
        assert_eq!(period_of_irreducible(&adj), 3);
    }

    #[test]
    fn golden_mean_period_is_one() {
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(period_of_irreducible(&adj), 1);
        assert_eq!(shortest_nonempty_path(&adj, 1, 1), Some(vec![1, 0, 1]));
        assert_eq!(shortest_nonempty_path(&adj, 0, 0), Some(vec![0, 0]));
    }

    #[test]
    fn path_absent_when_unreachable() {
        let adj = vec![vec![1], vec![1]];
        assert_eq!(shortest_nonempty_path(&adj, 1, 0), None);
        assert_eq!(shortest_nonempty_path(&adj, 0, 0), None);
    }
}
