//! Strongly connected components (iterative Tarjan).

/// Component assignment for a graph on `0..n`.
///
/// Components are numbered in the order Tarjan's algorithm completes them,
/// which is a reverse topological order: every edge goes from a component
/// to one with an equal or smaller index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sccs {
    pub component: Vec<usize>,
    pub count: usize,
    /// A component is nontrivial when it contains a cycle (size > 1 or a self-loop).
    pub nontrivial: Vec<bool>,
}

impl Sccs {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (q, &c) in self.component.iter().enumerate() {
            out[c].push(q);
        }
        out
    }
}

pub fn tarjan<F, I>(n: usize, mut succ: F) -> Sccs
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut count = 0usize;
    let mut next_index = 0usize;
    let mut self_loop = vec![false; n];

    // explicit DFS frames: (node, successors, cursor)
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let succs: Vec<usize> = succ(root).into_iter().collect();
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, succs, 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if w == v {
                    self_loop[v] = true;
                }
                if index[w] == UNSEEN {
                    let succs: Vec<usize> = succ(w).into_iter().collect();
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, succs, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component[w] = count;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
    }

    let mut sizes = vec![0usize; count];
    for &c in &component {
        sizes[c] += 1;
    }
    let mut nontrivial: Vec<bool> = sizes.iter().map(|&s| s > 1).collect();
    for q in 0..n {
        if self_loop[q] {
            nontrivial[component[q]] = true;
        }
    }
    Sccs {
        component,
        count,
        nontrivial,
    }
}
