//! Primal network simplex for the balanced transportation problem.
//!
//! Sources `0..m`, sinks `m..m+n`, and an artificial root `m+n` joined to
//! every node by a big-M arc. The initial basis is the star of artificial
//! arcs, which is strongly feasible; the leaving arc is chosen by the
//! last-blocking-arc rule, which keeps the basis strongly feasible and rules
//! out cycling under degenerate pivots. Entering arcs are priced in blocks of
//! about `sqrt(m n)` arcs.

use super::scalar::Scalar;

const NONE: usize = usize::MAX;

pub(crate) struct TransportProblem<T> {
    pub supply: Vec<T>,
    pub demand: Vec<T>,
    /// Row-major `supply.len() x demand.len()`.
    pub cost: Vec<T>,
}

pub(crate) struct TransportSolution<T> {
    /// Row-major flows on the real arcs.
    pub flow: Vec<T>,
    /// Source potentials; `u[i] - v[j] <= cost[i][j]`, tight on basic arcs.
    pub u: Vec<T>,
    /// Sink potentials.
    pub v: Vec<T>,
    pub pivots: usize,
}

struct Simplex<'a, T> {
    p: &'a TransportProblem<T>,
    m: usize,
    n: usize,
    real: usize,
    root: usize,
    art_cost: T,
    flow: Vec<T>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    up: Vec<bool>,
    depth: Vec<usize>,
    pi: Vec<T>,
    tree: Vec<Vec<usize>>,
    next_arc: usize,
    block: usize,
    tol: T,
}

impl<'a, T: Scalar> Simplex<'a, T> {
    fn new(p: &'a TransportProblem<T>) -> Self {
        let m = p.supply.len();
        let n = p.demand.len();
        let real = m * n;
        let root = m + n;
        let mut max_cost = T::zero();
        for c in &p.cost {
            if *c > max_cost {
                max_cost = c.clone();
            }
        }
        let art_cost = (max_cost.clone() + T::from_usize(1)) * T::from_usize(m + n);
        let tol = T::pricing_tolerance(&max_cost);

        let nodes = m + n + 1;
        let mut flow = vec![T::zero(); real + m + n];
        let mut parent = vec![root; nodes];
        let mut pred = vec![NONE; nodes];
        let mut up = vec![false; nodes];
        let mut depth = vec![1; nodes];
        let mut pi = vec![T::zero(); nodes];
        let mut tree = vec![Vec::new(); nodes];
        parent[root] = NONE;
        depth[root] = 0;
        for v in 0..m + n {
            let arc = real + v;
            pred[v] = arc;
            tree[v].push(arc);
            tree[root].push(arc);
            if v < m {
                flow[arc] = p.supply[v].clone();
                up[v] = true;
                pi[v] = -art_cost.clone();
            } else {
                flow[arc] = p.demand[v - m].clone();
                pi[v] = art_cost.clone();
            }
        }
        let block = ((real as f64).sqrt().ceil() as usize).max(10).min(real.max(1));
        Simplex { p, m, n, real, root, art_cost, flow, parent, pred, up, depth, pi, tree, next_arc: 0, block, tol }
    }

    #[inline]
    fn ends(&self, arc: usize) -> (usize, usize) {
        if arc < self.real {
            (arc / self.n, self.m + arc % self.n)
        } else {
            let v = arc - self.real;
            if v < self.m {
                (v, self.root)
            } else {
                (self.root, v)
            }
        }
    }

    #[inline]
    fn cost(&self, arc: usize) -> T {
        if arc < self.real {
            self.p.cost[arc].clone()
        } else {
            self.art_cost.clone()
        }
    }

    #[inline]
    fn reduced_cost(&self, arc: usize) -> T {
        let (s, t) = self.ends(arc);
        self.p.cost[arc].clone() + self.pi[s].clone() - self.pi[t].clone()
    }

    /// Block pricing over the real arcs; `None` once every reduced cost is
    /// nonnegative up to tolerance.
    fn find_entering(&mut self) -> Option<usize> {
        let threshold = -self.tol.clone();
        let mut best: Option<(usize, T)> = None;
        let mut left = self.block;
        for step in 0..self.real {
            let arc = (self.next_arc + step) % self.real;
            let rc = self.reduced_cost(arc);
            if rc < threshold && best.as_ref().is_none_or(|(_, b)| rc < *b) {
                best = Some((arc, rc));
            }
            left -= 1;
            if left == 0 {
                if let Some((arc_in, _)) = best {
                    self.next_arc = (arc + 1) % self.real;
                    return Some(arc_in);
                }
                left = self.block;
            }
        }
        best.map(|(arc, _)| {
            self.next_arc = (arc + 1) % self.real;
            arc
        })
    }

    fn join(&self, mut a: usize, mut b: usize) -> usize {
        while a != b {
            if self.depth[a] > self.depth[b] {
                a = self.parent[a];
            } else if self.depth[b] > self.depth[a] {
                b = self.parent[b];
            } else {
                a = self.parent[a];
                b = self.parent[b];
            }
        }
        a
    }

    fn pivot(&mut self, arc_in: usize) {
        let (first, second) = self.ends(arc_in);
        let join = self.join(first, second);

        // Flow runs first -> second on the entering arc, then up to the join
        // and back down to first. Among blocking arcs take the last one met
        // in that orientation starting from the join.
        let mut delta: Option<T> = None;
        let mut u_out = NONE;
        let mut out_on_first = true;
        let mut u = first;
        while u != join {
            if self.up[u] {
                let d = &self.flow[self.pred[u]];
                if delta.as_ref().is_none_or(|x| d < x) {
                    delta = Some(d.clone());
                    u_out = u;
                }
            }
            u = self.parent[u];
        }
        let mut u = second;
        while u != join {
            if !self.up[u] {
                let d = &self.flow[self.pred[u]];
                if delta.as_ref().is_none_or(|x| d <= x) {
                    delta = Some(d.clone());
                    u_out = u;
                    out_on_first = false;
                }
            }
            u = self.parent[u];
        }
        let delta = delta.expect("uncapacitated transportation cycles are always blocked");

        if delta > T::zero() {
            self.flow[arc_in] = self.flow[arc_in].clone() + delta.clone();
            let mut u = first;
            while u != join {
                let e = self.pred[u];
                self.flow[e] = if self.up[u] {
                    self.flow[e].clone() - delta.clone()
                } else {
                    self.flow[e].clone() + delta.clone()
                };
                u = self.parent[u];
            }
            let mut u = second;
            while u != join {
                let e = self.pred[u];
                self.flow[e] = if self.up[u] {
                    self.flow[e].clone() + delta.clone()
                } else {
                    self.flow[e].clone() - delta.clone()
                };
                u = self.parent[u];
            }
        }

        let arc_out = self.pred[u_out];
        self.flow[arc_out] = T::zero();
        let old_parent = self.parent[u_out];
        self.tree[u_out].retain(|&e| e != arc_out);
        self.tree[old_parent].retain(|&e| e != arc_out);
        self.tree[first].push(arc_in);
        self.tree[second].push(arc_in);

        let (sub_root, new_parent) = if out_on_first { (first, second) } else { (second, first) };
        self.attach(sub_root, new_parent, arc_in);
        let mut stack = vec![sub_root];
        while let Some(w) = stack.pop() {
            for i in 0..self.tree[w].len() {
                let e = self.tree[w][i];
                if e == self.pred[w] {
                    continue;
                }
                let (s, t) = self.ends(e);
                let c = if s == w { t } else { s };
                self.attach(c, w, e);
                stack.push(c);
            }
        }
    }

    fn attach(&mut self, child: usize, parent: usize, arc: usize) {
        let (s, _) = self.ends(arc);
        self.parent[child] = parent;
        self.pred[child] = arc;
        self.up[child] = s == child;
        self.depth[child] = self.depth[parent] + 1;
        let c = self.cost(arc);
        self.pi[child] = if self.up[child] { self.pi[parent].clone() - c } else { self.pi[parent].clone() + c };
    }

    /// Potentials recomputed over the real tree arcs only, so the big-M
    /// constant does not leak into the returned duals.
    fn clean_potentials(&self) -> Vec<T> {
        let count = self.m + self.n;
        let mut pot: Vec<Option<T>> = vec![None; count];
        for start in 0..count {
            if pot[start].is_some() {
                continue;
            }
            let base = if start == 0 { T::zero() } else { self.pi[start].clone() - self.pi[0].clone() };
            pot[start] = Some(base);
            let mut stack = vec![start];
            while let Some(w) = stack.pop() {
                let pw = pot[w].clone().unwrap();
                for &e in &self.tree[w] {
                    if e >= self.real {
                        continue;
                    }
                    let (s, t) = self.ends(e);
                    let other = if s == w { t } else { s };
                    if pot[other].is_some() {
                        continue;
                    }
                    let c = self.p.cost[e].clone();
                    pot[other] = Some(if s == w { pw.clone() + c } else { pw.clone() - c });
                    stack.push(other);
                }
            }
        }
        pot.into_iter().map(Option::unwrap).collect()
    }
}

pub(crate) fn network_simplex<T: Scalar>(p: &TransportProblem<T>) -> TransportSolution<T> {
    let m = p.supply.len();
    let n = p.demand.len();
    assert!(m > 0 && n > 0, "empty transportation problem");
    assert_eq!(p.cost.len(), m * n);
    let mut s = Simplex::new(p);
    let mut pivots = 0;
    while let Some(arc) = s.find_entering() {
        s.pivot(arc);
        pivots += 1;
    }
    let residual =
        T::feasibility_tolerance() * (p.supply.iter().fold(T::zero(), |acc, x| acc + x.clone()) + T::from_usize(1));
    for v in 0..m + n {
        let f = &s.flow[s.real + v];
        assert!(*f <= residual, "artificial arc {v} still carries flow {f:?}");
    }
    let pot = s.clean_potentials();
    let u = pot[..m].iter().map(|x| -x.clone()).collect();
    let v = pot[m..].iter().map(|x| -x.clone()).collect();
    let mut flow = s.flow;
    flow.truncate(s.real);
    TransportSolution { flow, u, v, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn three_point_line_float() {
        // line {0,1,2}: mass 1 at 0 against 1/2 at 1 and 1/2 at 2
        let p = TransportProblem { supply: vec![1.0], demand: vec![0.5, 0.5], cost: vec![1.0, 2.0] };
        let s = network_simplex(&p);
        assert_eq!(s.flow, vec![0.5, 0.5]);
        for (j, c) in [1.0, 2.0].iter().enumerate() {
            assert!(s.u[0] - s.v[j] <= c + 1e-12);
        }
    }

    #[test]
    fn exact_square_instance() {
        let p = TransportProblem {
            supply: vec![r(1, 2), r(1, 2)],
            demand: vec![r(1, 4), r(3, 4)],
            cost: vec![r(0, 1), r(1, 1), r(1, 1), r(0, 1)],
        };
        let s = network_simplex(&p);
        let value: BigRational = s.flow.iter().zip(&p.cost).map(|(f, c)| f * c).sum();
        assert_eq!(value, r(1, 4));
        let dual: BigRational = s.u.iter().zip(&p.supply).map(|(u, a)| u * a).sum::<BigRational>()
            - s.v.iter().zip(&p.demand).map(|(v, b)| v * b).sum::<BigRational>();
        assert_eq!(dual, value);
    }

    #[test]
    fn degenerate_identity_terminates() {
        let n = 6;
        let w = vec![r(1, 6); n];
        let cost = (0..n * n).map(|k| r(((k / n) as i64 - (k % n) as i64).abs(), 1)).collect();
        let s = network_simplex(&TransportProblem { supply: w.clone(), demand: w, cost });
        for i in 0..n {
            assert_eq!(s.flow[i * n + i], r(1, 6));
        }
    }
}
