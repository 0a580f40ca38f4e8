//! Exhaustive vertex enumeration of the transportation polytope.
//!
//! Every vertex has a support that is a forest in the complete bipartite
//! graph between the two supports, and every such forest extends to a
//! spanning tree. Enumerating spanning trees and solving each for its unique
//! flow by leaf elimination therefore visits every vertex; the minimum cost
//! over the feasible ones is the optimum. Shares no code with the simplex.

use super::scalar::Scalar;

/// Largest support on either side the enumeration accepts.
pub const ORACLE_SUPPORT_LIMIT: usize = 5;

const FLOAT_SCREEN: f64 = 1e-9;

pub(crate) fn enumerate_min<T: Scalar>(supply: &[T], demand: &[T], cost: &[T]) -> T {
    let m = supply.len();
    let n = demand.len();
    let edges: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect();
    let mut best: Option<T> = None;
    let mut chosen = Vec::with_capacity(m + n - 1);
    let mut parent: Vec<usize> = (0..m + n).collect();
    let mut search = Search { m, n, supply, demand, cost, edges: &edges, best: &mut best };
    search.recurse(0, &mut chosen, &mut parent);
    best.expect("a balanced transportation problem has a feasible vertex")
}

struct Search<'a, T> {
    m: usize,
    n: usize,
    supply: &'a [T],
    demand: &'a [T],
    cost: &'a [T],
    edges: &'a [(usize, usize)],
    best: &'a mut Option<T>,
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

impl<T: Scalar> Search<'_, T> {
    fn recurse(&mut self, next: usize, chosen: &mut Vec<usize>, parent: &mut Vec<usize>) {
        let need = self.m + self.n - 1;
        if chosen.len() == need {
            self.evaluate(chosen);
            return;
        }
        if self.edges.len() - next < need - chosen.len() {
            return;
        }
        let (a, b) = self.edges[next];
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let saved = parent.clone();
            parent[ra] = rb;
            chosen.push(next);
            self.recurse(next + 1, chosen, parent);
            chosen.pop();
            *parent = saved;
        }
        self.recurse(next + 1, chosen, parent);
    }

    /// Leaf elimination on a spanning tree; skips trees whose flow goes negative.
    fn evaluate(&mut self, tree: &[usize]) {
        let order = self.elimination_order(tree);
        // cheap float screen; flows are at most one, so rounding stays far below the margin
        let mut approx: Vec<f64> = self.supply.iter().chain(self.demand).map(Scalar::to_f64).collect();
        for &(leaf, other, _) in &order {
            let flow = approx[leaf];
            if flow < -FLOAT_SCREEN {
                return;
            }
            approx[other] -= flow;
        }
        let mut rest: Vec<T> = self.supply.iter().chain(self.demand).cloned().collect();
        let mut total = T::zero();
        let floor = -T::feasibility_tolerance();
        for &(leaf, other, cell) in &order {
            let flow = std::mem::replace(&mut rest[leaf], T::zero());
            if flow < floor {
                return;
            }
            rest[other] = rest[other].clone() - flow.clone();
            total = total + flow * self.cost[cell].clone();
        }
        if self.best.as_ref().is_none_or(|b| total < *b) {
            *self.best = Some(total);
        }
    }

    /// `(leaf, neighbor, cost cell)` in the order leaves are removed.
    fn elimination_order(&self, tree: &[usize]) -> Vec<(usize, usize, usize)> {
        let mut degree = vec![0usize; self.m + self.n];
        for &e in tree {
            let (a, b) = self.edges[e];
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut alive = vec![true; tree.len()];
        let mut order = Vec::with_capacity(tree.len());
        for _ in 0..tree.len() {
            let (slot, leaf) = tree
                .iter()
                .enumerate()
                .filter(|(k, _)| alive[*k])
                .find_map(|(k, &e)| {
                    let (a, b) = self.edges[e];
                    if degree[a] == 1 {
                        Some((k, a))
                    } else if degree[b] == 1 {
                        Some((k, b))
                    } else {
                        None
                    }
                })
                .expect("a tree always has a leaf");
            let (a, b) = self.edges[tree[slot]];
            degree[a] -= 1;
            degree[b] -= 1;
            alive[slot] = false;
            order.push((leaf, if leaf == a { b } else { a }, a * self.n + (b - self.m)));
        }
        order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_line() {
        let v = enumerate_min(&[1.0], &[0.5, 0.5], &[1.0, 2.0]);
        assert_eq!(v, 1.5);
    }

    #[test]
    fn two_by_two_identity() {
        let v = enumerate_min(&[0.5, 0.5], &[0.5, 0.5], &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(v, 0.0);
    }
}
