//! Correlation clustering with cannot-link constraints: greedy additive edge
//! contraction followed by single-node moves.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use super::graph::{Arc, ConflictGraph, OUTPUT};

/// Cluster label per node; every label is the smallest node id in its
/// cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Link {
    weight: f64,
    hard: bool,
}

#[derive(PartialEq)]
struct Candidate {
    weight: f64,
    pair: Reverse<(usize, usize)>,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.total_cmp(&other.weight).then_with(|| self.pair.cmp(&other.pair))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn adjacency(g: &ConflictGraph) -> Vec<BTreeMap<usize, Link>> {
    let mut adj: Vec<BTreeMap<usize, Link>> = vec![BTreeMap::new(); g.node_count()];
    for a in &g.arcs {
        if a.a == a.b {
            continue;
        }
        for (x, y) in [(a.a, a.b), (a.b, a.a)] {
            let l = adj[x].entry(y).or_default();
            l.weight += a.weight;
            l.hard |= a.hard;
        }
    }
    adj
}

/// Repeatedly merges the two clusters joined by the largest positive total
/// weight, never merging across a hard arc. Ties go to the smallest ids.
fn contract(g: &ConflictGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut adj = adjacency(g);
    let mut alive = vec![true; n];
    let mut merged_into: Vec<usize> = (0..n).collect();
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Candidate>, a: usize, b: usize, l: &Link| {
        if !l.hard && l.weight > 0.0 {
            heap.push(Candidate {
                weight: l.weight,
                pair: Reverse((a.min(b), a.max(b))),
            });
        }
    };
    for (a, links) in adj.iter().enumerate() {
        for (&b, l) in links.range(a + 1..) {
            push(&mut heap, a, b, l);
        }
    }
    while let Some(c) = heap.pop() {
        let Reverse((a, b)) = c.pair;
        // an entry is current when the link still carries exactly its weight
        let current = alive[a]
            && alive[b]
            && adj[a].get(&b).is_some_and(|l| !l.hard && l.weight.to_bits() == c.weight.to_bits());
        if !current {
            continue;
        }
        // merge b into a (a < b keeps the label the smallest id)
        alive[b] = false;
        merged_into[b] = a;
        let links_b = std::mem::take(&mut adj[b]);
        adj[a].remove(&b);
        for (x, l) in links_b {
            if x == a {
                continue;
            }
            adj[x].remove(&b);
            let e = adj[a].entry(x).or_default();
            e.weight += l.weight;
            e.hard |= l.hard;
            let merged = *e;
            adj[x].insert(a, merged);
            push(&mut heap, a, x, &merged);
        }
    }
    (0..n)
        .map(|v| {
            let mut r = v;
            while merged_into[r] != r {
                r = merged_into[r];
            }
            r
        })
        .collect()
}

/// Longest tentative move sequence explored by one improvement pass.
const MAX_SEQUENCE: usize = 64;

/// Relocation of `node` into `target`; the members of `target` that have a
/// hard arc to `node` are ejected into singletons of their own.
#[derive(Debug, Clone)]
struct Move {
    gain: f64,
    node: usize,
    target: usize,
    eject: Vec<usize>,
}

struct Moves<'a> {
    nbrs: &'a [Vec<(usize, f64, bool)>],
    labels: Vec<usize>,
    size: Vec<usize>,
    fresh: usize,
}

impl<'a> Moves<'a> {
    /// `labels` must be normalized, so every label is below the node count.
    fn new(nbrs: &'a [Vec<(usize, f64, bool)>], labels: &[usize]) -> Self {
        let n = labels.len();
        let mut size = vec![0usize; n];
        for &l in labels {
            size[l] += 1;
        }
        Moves {
            nbrs,
            labels: labels.to_vec(),
            size,
            fresh: n,
        }
    }

    /// Weight lost when the nodes in `eject` leave cluster `l` for
    /// singletons.
    fn ejection_loss(&self, eject: &[usize], l: usize) -> f64 {
        let mut loss = 0.0;
        for &e in eject {
            for &(u, w, _) in &self.nbrs[e] {
                if self.labels[u] == l {
                    // arcs inside the ejected set are seen from both ends
                    loss += if eject.contains(&u) { w / 2.0 } else { w };
                }
            }
        }
        loss
    }

    /// Every relocation of `v` that touches no node in `moved`. A target
    /// equal to `self.fresh` stands for a new singleton.
    fn moves(&self, v: usize, moved: &[bool]) -> Vec<Move> {
        let own = self.labels[v];
        let mut to: BTreeMap<usize, (f64, Vec<usize>)> = BTreeMap::new();
        for &(u, w, h) in &self.nbrs[v] {
            let e = to.entry(self.labels[u]).or_insert((0.0, Vec::new()));
            e.0 += w;
            if h {
                e.1.push(u);
            }
        }
        let stay = to.get(&own).map_or(0.0, |e| e.0);
        let mut out = Vec::new();
        for (&l, (w, hard)) in &to {
            if l == own {
                continue;
            }
            if hard.is_empty() {
                out.push(Move { gain: w - stay, node: v, target: l, eject: Vec::new() });
            } else if hard.iter().all(|&e| !moved[e]) && hard.len() < self.size[l] {
                let mut eject = hard.clone();
                eject.sort_unstable();
                eject.dedup();
                let kept: f64 = self.nbrs[v]
                    .iter()
                    .filter(|&&(u, _, _)| self.labels[u] == l && !eject.contains(&u))
                    .map(|&(_, w, _)| w)
                    .sum();
                let gain = kept - stay - self.ejection_loss(&eject, l);
                out.push(Move { gain, node: v, target: l, eject });
            }
        }
        if self.size[own] > 1 {
            out.push(Move { gain: -stay, node: v, target: self.fresh, eject: Vec::new() });
        }
        out
    }

    /// Highest-gain move of `v`; ties go to the smallest label.
    fn best(&self, v: usize, moved: &[bool]) -> Option<Move> {
        let mut best: Option<Move> = None;
        for m in self.moves(v, moved) {
            if best.as_ref().is_none_or(|b| m.gain > b.gain) {
                best = Some(m);
            }
        }
        best
    }

    /// Steepest ascent over nodes outside `tabu` until no move improves;
    /// returns the total gain.
    fn greedy(&mut self, tabu: &[bool]) -> f64 {
        let mut total = 0.0;
        loop {
            let mut pick: Option<Move> = None;
            for v in (0..self.labels.len()).filter(|&v| !tabu[v]) {
                if let Some(m) = self.best(v, tabu) {
                    if m.gain > 1e-12 && pick.as_ref().is_none_or(|p| m.gain > p.gain) {
                        pick = Some(m);
                    }
                }
            }
            let Some(m) = pick else { return total };
            self.apply(&m);
            total += m.gain;
        }
    }

    fn relabel(&mut self, v: usize, l: usize) {
        self.size[self.labels[v]] -= 1;
        self.size[l] += 1;
        self.labels[v] = l;
    }

    fn singleton(&mut self) -> usize {
        self.fresh += 1;
        self.size.push(0);
        self.fresh - 1
    }

    fn apply(&mut self, m: &Move) {
        for &e in &m.eject {
            let l = self.singleton();
            self.relabel(e, l);
        }
        let target = if m.target == self.fresh { self.singleton() } else { m.target };
        self.relabel(m.node, target);
    }
}

/// Kernighan-Lin style improvement: each pass tentatively applies the best
/// available move (losses allowed, each node moved at most once) and keeps
/// the prefix of the sequence with the largest total gain.
fn local_moves(g: &ConflictGraph, labels: &mut Vec<usize>) {
    let n = g.node_count();
    let mut nbrs: Vec<Vec<(usize, f64, bool)>> = vec![Vec::new(); n];
    for a in &g.arcs {
        if a.a != a.b {
            nbrs[a.a].push((a.b, a.weight, a.hard));
            nbrs[a.b].push((a.a, a.weight, a.hard));
        }
    }
    loop {
        normalize(labels);
        let mut m = Moves::new(&nbrs, labels);
        let mut moved = vec![false; n];
        let mut seq: Vec<Move> = Vec::new();
        let (mut total, mut best_total, mut best_len) = (0.0, 0.0, 0);
        while seq.len() < MAX_SEQUENCE.min(n) {
            let mut pick: Option<Move> = None;
            for v in (0..n).filter(|&v| !moved[v]) {
                if let Some(c) = m.best(v, &moved) {
                    if pick.as_ref().is_none_or(|p| c.gain > p.gain) {
                        pick = Some(c);
                    }
                }
            }
            let Some(mv) = pick else { break };
            m.apply(&mv);
            moved[mv.node] = true;
            for &e in &mv.eject {
                moved[e] = true;
            }
            total += mv.gain;
            seq.push(mv);
            if total > best_total + 1e-12 {
                best_total = total;
                best_len = seq.len();
            }
        }
        if best_len == 0 {
            return;
        }
        let mut keep = Moves::new(&nbrs, labels);
        for mv in &seq[..best_len] {
            keep.apply(mv);
        }
        *labels = keep.labels;
    }
}

/// Graphs up to this many nodes also get the lookahead search.
const LOOKAHEAD_NODES: usize = 128;

/// One-move lookahead: tries every single move (improving or not) followed
/// by greedy improvement, and applies the best combination while it raises
/// the objective.
fn lookahead(g: &ConflictGraph, labels: &mut Vec<usize>) {
    let n = g.node_count();
    let mut nbrs: Vec<Vec<(usize, f64, bool)>> = vec![Vec::new(); n];
    for a in &g.arcs {
        if a.a != a.b {
            nbrs[a.a].push((a.b, a.weight, a.hard));
            nbrs[a.b].push((a.a, a.weight, a.hard));
        }
    }
    let none = vec![false; n];
    loop {
        normalize(labels);
        let base = Moves::new(&nbrs, labels);
        let mut best: Option<(f64, Vec<usize>)> = None;
        for v in 0..n {
            for mv in base.moves(v, &none) {
                let mut trial = Moves::new(&nbrs, labels);
                trial.apply(&mv);
                // lock the cluster the moved node joined
                let joined = trial.labels[mv.node];
                let tabu: Vec<bool> = trial.labels.iter().map(|&l| l == joined).collect();
                let gain = mv.gain + trial.greedy(&tabu);
                if gain > 1e-12 && best.as_ref().is_none_or(|(b, _)| gain > b + 1e-12) {
                    best = Some((gain, trial.labels));
                }
            }
        }
        let current = g.objective(labels);
        for (la, lb, eject) in cluster_joins(g, labels) {
            let mut trial = Moves::new(&nbrs, labels);
            for &e in &eject {
                let l = trial.singleton();
                trial.relabel(e, l);
            }
            for v in 0..n {
                if trial.labels[v] == lb {
                    trial.relabel(v, la);
                }
            }
            let tabu: Vec<bool> = trial.labels.iter().map(|&l| l == la).collect();
            trial.greedy(&tabu);
            let gain = g.objective(&trial.labels) - current;
            if gain > 1e-12 && best.as_ref().is_none_or(|(b, _)| gain > b + 1e-12) {
                best = Some((gain, trial.labels));
            }
        }
        match best {
            Some((_, l)) => *labels = l,
            None => return,
        }
    }
}

/// Largest set of conflicting nodes for which cluster joins enumerate
/// every ejection choice.
const JOIN_CONFLICT_NODES: usize = 12;

/// Candidate merges of two clusters joined by a positive arc: the labels
/// and the nodes to eject so that no hard arc ends up inside the union.
/// The ejected set is the vertex cover of the hard arcs between the two
/// clusters that leaves the highest objective.
fn cluster_joins(g: &ConflictGraph, labels: &[usize]) -> Vec<(usize, usize, Vec<usize>)> {
    let mut pairs: BTreeMap<(usize, usize), (f64, Vec<(usize, usize)>)> = BTreeMap::new();
    for a in &g.arcs {
        let (la, lb) = (labels[a.a], labels[a.b]);
        if la == lb {
            continue;
        }
        let e = pairs.entry((la.min(lb), la.max(lb))).or_insert((0.0, Vec::new()));
        if a.hard {
            e.1.push((a.a, a.b));
        } else {
            e.0 += a.weight.max(0.0);
        }
    }
    let mut out = Vec::new();
    for ((la, lb), (positive, hard)) in pairs {
        if positive <= 0.0 {
            continue;
        }
        let mut h: Vec<usize> = hard.iter().flat_map(|&(a, b)| [a, b]).collect();
        h.sort_unstable();
        h.dedup();
        if h.len() > JOIN_CONFLICT_NODES {
            continue;
        }
        let mut best: Option<(f64, Vec<usize>)> = None;
        for mask in 0usize..1 << h.len() {
            let inside = |v: usize| h.binary_search(&v).is_ok_and(|i| mask >> i & 1 == 1);
            if !hard.iter().all(|&(a, b)| inside(a) || inside(b)) {
                continue;
            }
            let mut trial = labels.to_vec();
            let mut fresh = labels.len();
            for (i, &v) in h.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    trial[v] = fresh;
                    fresh += 1;
                }
            }
            for l in trial.iter_mut() {
                if *l == lb {
                    *l = la;
                }
            }
            let value = g.objective(&trial);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                let eject = h.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                best = Some((value, eject));
            }
        }
        if let Some((_, eject)) = best {
            out.push((la, lb, eject));
        }
    }
    out
}

fn normalize(labels: &mut [usize]) {
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    for (v, &l) in labels.iter().enumerate() {
        first.entry(l).or_insert(v);
    }
    for l in labels.iter_mut() {
        *l = first[l];
    }
}

fn improve(g: &ConflictGraph, mut labels: Vec<usize>) -> Vec<usize> {
    local_moves(g, &mut labels);
    if g.node_count() <= LOOKAHEAD_NODES {
        lookahead(g, &mut labels);
    }
    normalize(&mut labels);
    labels
}

/// Graphs up to this many nodes are also solved from one seeded start per
/// node.
const MULTI_START_NODES: usize = 24;

/// Contraction after first merging `seed` into the output node.
fn seeded_start(g: &ConflictGraph, seed: usize) -> Option<Vec<usize>> {
    if g.arcs.iter().any(|a| a.hard && (a.a, a.b) == (OUTPUT, seed)) {
        return None;
    }
    let mut forced = g.clone();
    let bonus = 1.0 + g.arcs.iter().map(|a| a.weight.abs()).sum::<f64>();
    forced.arcs.push(Arc { a: OUTPUT, b: seed, weight: bonus, hard: false });
    Some(contract(&forced))
}

pub fn solve_clustering(g: &ConflictGraph) -> ClusterPartition {
    let n = g.node_count();
    let mut labels = improve(g, contract(g));
    // further starts on small graphs; a start replaces the incumbent only
    // if strictly better
    let mut starts: Vec<Vec<usize>> = Vec::new();
    if n <= LOOKAHEAD_NODES {
        starts.push((0..n).collect());
    }
    if n <= MULTI_START_NODES {
        starts.extend((1..n).filter_map(|u| seeded_start(g, u)));
    }
    for start in starts {
        let alt = improve(g, start);
        if g.objective(&alt) > g.objective(&labels) + 1e-12 {
            labels = alt;
        }
    }
    debug_assert!(g.feasible(&labels));
    ClusterPartition { labels }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, arcs: &[(usize, usize, f64)]) -> ConflictGraph {
        ConflictGraph {
            triangles: (0..n - 1).collect(),
            arcs: arcs
                .iter()
                .map(|&(a, b, w)| Arc {
                    a,
                    b,
                    weight: w,
                    hard: w <= -30.0,
                })
                .collect(),
        }
    }

    /// Exact optimum over all feasible partitions, by dynamic programming
    /// over node subsets (each block contains the lowest remaining node).
    pub(crate) fn brute_optimum(g: &ConflictGraph) -> f64 {
        let n = g.node_count();
        assert!(n <= 16);
        let full = (1usize << n) - 1;
        let mut block = vec![0.0f64; 1 << n];
        let mut ok = vec![true; 1 << n];
        for s in 1..=full {
            for a in &g.arcs {
                if s >> a.a & 1 == 1 && s >> a.b & 1 == 1 && a.a != a.b {
                    block[s] += a.weight;
                    if a.hard {
                        ok[s] = false;
                    }
                }
            }
        }
        let mut best = vec![f64::NEG_INFINITY; 1 << n];
        best[0] = 0.0;
        for s in 1..=full {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            // enumerate subsets of `rest`, each joined with `low`
            let mut sub = rest;
            loop {
                let t = sub | low;
                if ok[t] {
                    let v = block[t] + best[s ^ t];
                    if v > best[s] {
                        best[s] = v;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        best[full]
    }

    /// Literal enumeration of set partitions, for tiny graphs.
    fn enumerate(n: usize) -> Vec<Vec<usize>> {
        fn rec(i: usize, n: usize, cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if i == n {
                out.push(cur.clone());
                return;
            }
            for l in 0..=k {
                cur.push(l);
                rec(i + 1, n, cur, k.max(l + 1), out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, &mut Vec::new(), 0, &mut out);
        out
    }

    #[test]
    fn worked_three_node_example() {
        let g = graph(3, &[(1, 2, -30.0), (0, 1, 5.0), (0, 2, 2.0)]);
        let p = solve_clustering(&g);
        assert_eq!(p.labels[1], p.labels[OUTPUT]);
        assert_ne!(p.labels[2], p.labels[OUTPUT]);
        assert_eq!(g.objective(&p.labels), 5.0);
        let best = enumerate(3)
            .into_iter()
            .filter(|l| g.feasible(l))
            .map(|l| g.objective(&l))
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best, 5.0);
        assert_eq!(brute_optimum(&g), 5.0);
    }

    #[test]
    fn all_positive_gives_one_cluster() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (0, 3, 1.0)]);
        let p = solve_clustering(&g);
        assert!(p.labels.iter().all(|&l| l == 0));
    }

    #[test]
    fn symmetric_chain_keeps_lower_node() {
        let g = graph(3, &[(0, 1, 3.0), (1, 2, -30.0), (0, 2, 3.0)]);
        let p = solve_clustering(&g);
        let feasible: Vec<Vec<usize>> = enumerate(3).into_iter().filter(|l| g.feasible(l)).collect();
        assert_eq!(feasible.len(), 3);
        assert_eq!(p.labels, vec![0, 0, 2]);
        assert_eq!(g.objective(&p.labels), 3.0);
    }

    #[test]
    fn dp_oracle_agrees_with_enumeration() {
        let g = graph(
            6,
            &[(0, 1, 2.0), (0, 2, 1.5), (1, 2, -30.0), (2, 3, 1.0), (3, 4, 1.0), (0, 4, 0.5), (4, 5, -30.0), (0, 5, 3.0), (1, 3, 1.0)],
        );
        let e = enumerate(6)
            .into_iter()
            .filter(|l| g.feasible(l))
            .map(|l| g.objective(&l))
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(brute_optimum(&g), e);
    }

    /// Random graphs shaped like conflict graphs: positive output arcs, +1
    /// adjacency arcs and hard -30 arcs.
    pub(crate) fn arb_graph() -> impl Strategy<Value = ConflictGraph> {
        (2usize..=12).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0.0f64..5.0, n - 1),
                prop::collection::vec(0u8..10, n * (n - 1) / 2),
            )
                .prop_map(|(n, out, kinds)| {
                    let mut arcs = Vec::new();
                    for (i, w) in out.into_iter().enumerate() {
                        arcs.push(Arc {
                            a: 0,
                            b: i + 1,
                            weight: w,
                            hard: false,
                        });
                    }
                    let mut k = 0;
                    for a in 1..n {
                        for b in a + 1..n {
                            match kinds[k] {
                                0..=2 => arcs.push(Arc { a, b, weight: 1.0, hard: false }),
                                3 | 4 => arcs.push(Arc { a, b, weight: -30.0, hard: true }),
                                _ => {}
                            }
                            k += 1;
                        }
                    }
                    ConflictGraph {
                        triangles: (0..n - 1).collect(),
                        arcs,
                    }
                })
        })
    }

    proptest! {
        #[test]
        fn near_optimal_and_feasible(g in arb_graph()) {
            let p = solve_clustering(&g);
            prop_assert!(g.feasible(&p.labels));
            let opt = brute_optimum(&g);
            prop_assert!(g.objective(&p.labels) >= 0.95 * opt - 1e-9, "got {} opt {} labels {:?}", g.objective(&p.labels), opt, p.labels);
        }
    }
}
