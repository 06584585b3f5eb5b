//! Reachability helpers shared by run search and ordering code.

use std::collections::VecDeque;

use crate::model::{StateId, StateSet, TransitionSystem};

/// Successor access, so helpers work on both systems and game arenas.
pub trait Successors {
    fn num_states(&self) -> usize;
    fn succ(&self, s: StateId) -> &[StateId];
}

impl Successors for TransitionSystem {
    fn num_states(&self) -> usize {
        TransitionSystem::num_states(self)
    }
    fn succ(&self, s: StateId) -> &[StateId] {
        self.successors(s)
    }
}

/// States reachable from `sources` (inclusive) using only `allowed` states.
pub fn reachable<G: Successors>(
    g: &G,
    sources: impl IntoIterator<Item = StateId>,
    allowed: Option<&StateSet>,
) -> StateSet {
    let mut seen = StateSet::with_capacity(g.num_states());
    let mut queue = VecDeque::new();
    for s in sources {
        if allowed.is_none_or(|a| a.contains(s.index())) && !seen.put(s.index()) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for &t in g.succ(s) {
            if allowed.is_none_or(|a| a.contains(t.index())) && !seen.put(t.index()) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Shortest path from `source` to the first state satisfying `goal`, visiting
/// successors in index order. Includes both endpoints.
pub fn shortest_path<G: Successors>(
    g: &G,
    source: StateId,
    allowed: Option<&StateSet>,
    goal: impl Fn(StateId) -> bool,
) -> Option<Vec<StateId>> {
    if allowed.is_some_and(|a| !a.contains(source.index())) {
        return None;
    }
    let n = g.num_states();
    let mut parent: Vec<Option<StateId>> = vec![None; n];
    let mut seen = StateSet::with_capacity(n);
    seen.insert(source.index());
    let mut queue = VecDeque::from([source]);
    while let Some(s) = queue.pop_front() {
        if goal(s) {
            let mut path = vec![s];
            let mut cur = s;
            while let Some(p) = parent[cur.index()] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &t in g.succ(s) {
            if allowed.is_none_or(|a| a.contains(t.index())) && !seen.put(t.index()) {
                parent[t.index()] = Some(s);
                queue.push_back(t);
            }
        }
    }
    None
}

/// Shortest simple cycle through `w` inside `allowed`, as `[w, ..]`.
pub fn cycle_through<G: Successors>(g: &G, w: StateId, allowed: &StateSet) -> Option<Vec<StateId>> {
    if g.succ(w).contains(&w) {
        return Some(vec![w]);
    }
    let n = g.num_states();
    let mut parent: Vec<Option<StateId>> = vec![None; n];
    let mut seen = StateSet::with_capacity(n);
    seen.insert(w.index());
    let mut queue = VecDeque::from([w]);
    while let Some(s) = queue.pop_front() {
        for &t in g.succ(s) {
            if t == w {
                let mut cycle = vec![s];
                let mut cur = s;
                while let Some(p) = parent[cur.index()] {
                    cycle.push(p);
                    cur = p;
                }
                cycle.reverse();
                return Some(cycle);
            }
            if allowed.contains(t.index()) && !seen.put(t.index()) {
                parent[t.index()] = Some(s);
                queue.push_back(t);
            }
        }
    }
    None
}

/// States of `allowed` lying on some cycle that stays inside `allowed`
/// (iterative Tarjan).
pub fn on_cycle<G: Successors>(g: &G, allowed: &StateSet) -> StateSet {
    let n = g.num_states();
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = StateSet::with_capacity(n);
    let mut stack: Vec<usize> = Vec::new();
    let mut result = StateSet::with_capacity(n);
    let mut next = 0u32;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in allowed.ones() {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack.insert(root);
        while let Some(top) = call.last_mut() {
            let v = top.0;
            let succ = g.succ(StateId::from(v));
            if top.1 < succ.len() {
                let w = succ[top.1].index();
                top.1 += 1;
                if !allowed.contains(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack.insert(w);
                    call.push((w, 0));
                } else if on_stack.contains(w) {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack.set(w, false);
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                let cyclic = comp.len() > 1 || g.succ(StateId::from(v)).contains(&StateId::from(v));
                if cyclic {
                    for w in comp {
                        result.insert(w);
                    }
                }
            }
        }
    }
    result
}
