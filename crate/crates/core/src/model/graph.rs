//! Cycle detection and reachability over small directed graphs keyed by
//! identifier. Both ontology loaders use these for their hierarchies.

use std::collections::{BTreeMap, BTreeSet};

/// Return one cycle (as a node path whose last element repeats the first)
/// if the graph has any. Iterative DFS with three colours; nodes are visited
/// in key order so the reported cycle is stable.
pub fn find_cycle<K: Ord + Clone>(edges: &BTreeMap<K, Vec<K>>) -> Option<Vec<K>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        Grey,
        Black,
    }
    let mut colour: BTreeMap<&K, Colour> = BTreeMap::new();
    let empty: Vec<K> = Vec::new();

    for start in edges.keys() {
        if colour.contains_key(start) {
            continue;
        }
        // stack of (node, index of next edge to follow)
        let mut stack: Vec<(&K, usize)> = vec![(start, 0)];
        colour.insert(start, Colour::Grey);
        while let Some(&(node, next)) = stack.last() {
            let succ = edges.get(node).unwrap_or(&empty);
            if next < succ.len() {
                let m = &succ[next];
                if let Some(top) = stack.last_mut() {
                    top.1 += 1;
                }
                match colour.get(m) {
                    Some(Colour::Grey) => {
                        let from = stack.iter().position(|(n, _)| *n == m).unwrap_or(0);
                        let mut cycle: Vec<K> = stack[from..].iter().map(|(n, _)| (*n).clone()).collect();
                        cycle.push(m.clone());
                        return Some(cycle);
                    }
                    Some(Colour::Black) => {}
                    None => {
                        colour.insert(m, Colour::Grey);
                        stack.push((m, 0));
                    }
                }
            } else {
                colour.insert(node, Colour::Black);
                stack.pop();
            }
        }
    }
    None
}

/// Reflexive-transitive closure of `start` along `edges`.
pub fn reach<K: Ord + Clone>(edges: &BTreeMap<K, Vec<K>>, start: &K) -> BTreeSet<K> {
    let mut seen = BTreeSet::new();
    let mut todo = vec![start.clone()];
    while let Some(n) = todo.pop() {
        if !seen.insert(n.clone()) {
            continue;
        }
        if let Some(next) = edges.get(&n) {
            todo.extend(next.iter().filter(|m| !seen.contains(*m)).cloned());
        }
    }
    seen
}
