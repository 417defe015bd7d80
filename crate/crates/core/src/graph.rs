//! Plain directed-graph utilities over adjacency lists.

use std::collections::VecDeque;

pub const UNREACHED: usize = usize::MAX;

/// Strongly connected components of the part of a graph reachable from `roots`.
#[derive(Debug, Clone)]
pub struct Sccs {
    /// Component index of every node, [`UNREACHED`] for nodes not visited.
    pub component: Vec<usize>,
    /// Members of each component, in reverse topological order.
    pub members: Vec<Vec<usize>>,
}

impl Sccs {
    /// Whether the component contains a cycle (more than one node or a self-loop).
    pub fn is_nontrivial(&self, adj: &[Vec<usize>], c: usize) -> bool {
        let m = &self.members[c];
        m.len() > 1 || adj[m[0]].contains(&m[0])
    }
}

/// Iterative Tarjan.
pub fn tarjan(adj: &[Vec<usize>], roots: impl IntoIterator<Item = usize>) -> Sccs {
    let n = adj.len();
    let mut index = vec![UNREACHED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNREACHED; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    // (node, next edge position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in roots {
        if index[root] != UNREACHED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNREACHED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let c = members.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        component[w] = c;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    members.push(comp);
                }
            }
        }
    }
    Sccs { component, members }
}

pub fn reachable(adj: &[Vec<usize>], roots: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for r in roots {
        if !seen[r] {
            seen[r] = true;
            queue.push_back(r);
        }
    }
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

/// Whether some node satisfying `marked` lies on a cycle reachable from `roots`.
pub fn has_reachable_cycle_through(
    adj: &[Vec<usize>],
    roots: impl IntoIterator<Item = usize>,
    marked: impl Fn(usize) -> bool,
) -> bool {
    let sccs = tarjan(adj, roots);
    (0..sccs.members.len()).any(|c| sccs.is_nontrivial(adj, c) && sccs.members[c].iter().any(|&v| marked(v)))
}

/// Whether a cycle made only of nodes satisfying `allowed` is reachable from `roots`.
pub fn has_reachable_cycle_within(
    adj: &[Vec<usize>],
    roots: impl IntoIterator<Item = usize>,
    allowed: impl Fn(usize) -> bool,
) -> bool {
    let seen = reachable(adj, roots);
    let restricted: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, succ)| {
            if seen[v] && allowed(v) {
                succ.iter().copied().filter(|&w| allowed(w)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let roots: Vec<usize> = (0..adj.len()).filter(|&v| seen[v] && allowed(v)).collect();
    let sccs = tarjan(&restricted, roots);
    (0..sccs.members.len()).any(|c| sccs.is_nontrivial(&restricted, c))
}
