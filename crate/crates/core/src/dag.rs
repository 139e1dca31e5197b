//! Cycle detection shared by the terminology and ontology loaders.

use std::collections::{BTreeMap, BTreeSet};

/// Returns one directed cycle (first node repeated at the end) if the
/// adjacency map contains any. Nodes are explored in ascending order so the
/// reported cycle is stable across runs.
pub(crate) fn find_cycle<N>(edges: &BTreeMap<N, Vec<N>>) -> Option<Vec<N>>
where
    N: Ord + Clone,
{
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }

    let mut marks: BTreeMap<N, Mark> = BTreeMap::new();
    let empty = Vec::new();

    for root in edges.keys() {
        if marks.contains_key(root) {
            continue;
        }
        // (node, index of next child to visit)
        let mut stack: Vec<(N, usize)> = vec![(root.clone(), 0)];
        marks.insert(root.clone(), Mark::Active);

        while let Some((node, next)) = stack.last().cloned() {
            let children = edges.get(&node).unwrap_or(&empty);
            if next < children.len() {
                stack.last_mut().expect("non-empty").1 += 1;
                let child = &children[next];
                match marks.get(child) {
                    Some(Mark::Active) => {
                        let start = stack
                            .iter()
                            .position(|(n, _)| n == child)
                            .expect("active node is on the stack");
                        let mut cycle: Vec<N> = stack[start..].iter().map(|(n, _)| n.clone()).collect();
                        cycle.push(child.clone());
                        return Some(cycle);
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child.clone(), Mark::Active);
                        stack.push((child.clone(), 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
                stack.pop();
            }
        }
    }
    None
}

/// Reflexive-transitive reachability along `edges` starting at `from`.
pub(crate) fn reaches<N>(edges: &BTreeMap<N, Vec<N>>, from: &N, target: &N) -> bool
where
    N: Ord + Clone,
{
    if from == target {
        return true;
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![from.clone()];
    while let Some(node) = stack.pop() {
        if let Some(next) = edges.get(&node) {
            for n in next {
                if n == target {
                    return true;
                }
                if seen.insert(n.clone()) {
                    stack.push(n.clone());
                }
            }
        }
    }
    false
}
