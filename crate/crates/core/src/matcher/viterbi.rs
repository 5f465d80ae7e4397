//! Max-product chain assignment.

use rayon::prelude::*;

use super::{CandidateSet, ChainSet, Match, MatchTable, VertexRef};
use crate::scoring::Side;

/// Best state sequence through a trellis in the log domain.
///
/// `emissions[i][a]` scores state `a` at step `i`; `transition(i, a, b)`
/// scores moving from state `a` at step `i` to state `b` at step `i + 1`.
/// Ties go to the lowest state index at every step. Returns `None` if any
/// step has no states.
pub fn best_path<T>(emissions: &[Vec<f64>], transition: T) -> Option<(Vec<usize>, f64)>
where
    T: Fn(usize, usize, usize) -> f64,
{
    if emissions.is_empty() || emissions.iter().any(Vec::is_empty) {
        return None;
    }
    let n = emissions.len();
    let mut score = emissions[0].clone();
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let next = &emissions[i + 1];
        let mut ns = Vec::with_capacity(next.len());
        let mut bk = Vec::with_capacity(next.len());
        for (b, e) in next.iter().enumerate() {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for (a, s) in score.iter().enumerate() {
                let v = s + transition(i, a, b);
                if v > best {
                    best = v;
                    arg = a;
                }
            }
            ns.push(best + e);
            bk.push(arg);
        }
        score = ns;
        back.push(bk);
    }
    let mut arg = 0;
    for (a, s) in score.iter().enumerate() {
        if *s > score[arg] {
            arg = a;
        }
    }
    let total = score[arg];
    let mut path = vec![0; n];
    path[n - 1] = arg;
    for i in (0..n - 1).rev() {
        path[i] = back[i][path[i + 1]];
    }
    Some((path, total))
}

/// Maximal runs of consecutive vertices with usable candidates; a cyclic
/// chain is rotated so runs may wrap around its start.
fn segments(present: &[bool], cyclic: bool) -> Vec<Vec<usize>> {
    let n = present.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let start = if cyclic {
        match present.iter().position(|p| !p) {
            None => {
                out.push((0..n).collect());
                return out;
            }
            Some(k) => k + 1,
        }
    } else {
        0
    };
    let mut cur = Vec::new();
    for step in 0..n {
        let i = (start + step) % n;
        if present[i] {
            cur.push(i);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Optimal `side` matches for one chain. Vertices with no usable candidate
/// split the chain and stay unmatched. Returns the matches and the chain's
/// total log score.
pub fn viterbi_chain(chains: &ChainSet, chain: usize, side: Side, candidates: &CandidateSet) -> (Vec<Option<Match>>, f64) {
    let ch = &chains.chains[chain];
    let n = ch.len();
    let mut options: Vec<Vec<(VertexRef, f64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let p = VertexRef::new(chain, i);
        options.push(
            candidates
                .get(chains, p, side)
                .iter()
                .filter_map(|&q| chains.emission(p, q, side).map(|e| (q, e)))
                .collect(),
        );
    }
    let present: Vec<bool> = options.iter().map(|o| !o.is_empty()).collect();
    let mut out = vec![None; n];
    let mut total = 0.0;
    for seg in segments(&present, ch.cyclic) {
        let emissions: Vec<Vec<f64>> = seg.iter().map(|&i| options[i].iter().map(|o| o.1).collect()).collect();
        let (path, score) = best_path(&emissions, |k, a, b| {
            let (i, j) = (seg[k], seg[k + 1]);
            chains.transition(
                VertexRef::new(chain, i),
                VertexRef::new(chain, j),
                options[i][a].0,
                options[j][b].0,
            )
        })
        .expect("segments are non-empty");
        total += score;
        for (k, &i) in seg.iter().enumerate() {
            let (target, log_score) = options[i][path[k]];
            out[i] = Some(Match { target, log_score });
        }
    }
    (out, total)
}

/// Runs the chain optimisation for every chain and each of `sides`.
pub fn run_matching(chains: &ChainSet, candidates: &CandidateSet, sides: &[Side]) -> MatchTable {
    let jobs: Vec<(usize, Side)> = (0..chains.chains.len())
        .flat_map(|c| sides.iter().map(move |&s| (c, s)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(c, s)| viterbi_chain(chains, c, s, candidates))
        .collect();
    let mut table = MatchTable::empty(chains);
    for ((c, s), (matches, score)) in jobs.into_iter().zip(results) {
        table.chain_scores[c][s.index()] = score;
        for (i, m) in matches.into_iter().enumerate() {
            table.entries[chains.flat(VertexRef::new(c, i))][s.index()] = m;
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::geom::Vec3;
    use crate::matcher::baseline_candidates;
    use crate::stroke::{Drawing, Stroke};
    use proptest::prelude::*;

    /// Enumerates every assignment.
    fn brute(em: &[Vec<f64>], tr: &dyn Fn(usize, usize, usize) -> f64) -> f64 {
        fn rec(em: &[Vec<f64>], tr: &dyn Fn(usize, usize, usize) -> f64, i: usize, prev: usize, acc: f64) -> f64 {
            if i == em.len() {
                return acc;
            }
            (0..em[i].len())
                .map(|a| {
                    let t = if i == 0 { 0.0 } else { tr(i - 1, prev, a) };
                    rec(em, tr, i + 1, a, acc + t + em[i][a])
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }
        rec(em, tr, 0, 0, 0.0)
    }

    #[test]
    fn single_step_argmax() {
        let (p, s) = best_path(&[vec![0.4f64.ln(), 0.6f64.ln()]], |_, _, _| 0.0).unwrap();
        assert_eq!(p, vec![1]);
        assert!((s - 0.6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn joint_beats_greedy() {
        // greedy picks state 0 at both steps, but 0 -> 0 is penalised
        let em = vec![vec![-0.1, -0.2], vec![-0.1, -0.3]];
        let tr = |_: usize, a: usize, b: usize| if a == 0 && b == 0 { -5.0 } else { 0.0 };
        let (p, s) = best_path(&em, tr).unwrap();
        assert_eq!(p, vec![1, 0]);
        assert!((s - brute(&em, &tr)).abs() < 1e-12);
    }

    #[test]
    fn ties_go_to_lowest_state() {
        let (p, _) = best_path(&[vec![-1.0, -1.0], vec![-1.0, -1.0]], |_, _, _| 0.0).unwrap();
        assert_eq!(p, vec![0, 0]);
    }

    #[test]
    fn empty_steps() {
        assert!(best_path(&[vec![-1.0], vec![]], |_, _, _| 0.0).is_none());
    }

    #[test]
    fn segment_splitting() {
        assert_eq!(segments(&[true, false, true, true], false), vec![vec![0], vec![2, 3]]);
        assert_eq!(segments(&[true, false, true, true], true), vec![vec![2, 3, 0]]);
        assert_eq!(segments(&[true, true], true), vec![vec![0, 1]]);
        assert!(segments(&[false, false], false).is_empty());
    }

    #[test]
    fn matches_are_candidates_and_flip_swaps_sides() {
        let cfg = Config::default();
        let mk = |flip: bool| {
            let strokes: Vec<Stroke> = (0..3)
                .map(|k| {
                    let ps: Vec<Vec3> = (0..8).map(|i| Vec3::new(k as f64 * 0.4, i as f64 * 0.2, 0.02 * (i * k) as f64)).collect();
                    let n = if flip { -Vec3::z() } else { Vec3::z() };
                    Stroke::from_parts(&ps, &vec![n; 8], &vec![0.5; 8], [1.0; 3])
                })
                .collect();
            let d = Drawing::new(strokes).unwrap();
            let cs = crate::matcher::ChainSet::from_drawing(&d, &cfg);
            let c = baseline_candidates(&cs, &cfg, false);
            let t = run_matching(&cs, &c, &Side::BOTH);
            (cs, c, t)
        };
        let (cs, c, t) = mk(false);
        assert!(t.match_count() > 0);
        for (r, s, m) in t.iter(&cs) {
            assert!(c.get(&cs, r, s).contains(&m.target));
        }
        let (_, _, tf) = mk(true);
        for k in 0..t.entries.len() {
            assert_eq!(t.entries[k][0], tf.entries[k][1]);
            assert_eq!(t.entries[k][1], tf.entries[k][0]);
        }
        assert_eq!(t, mk(false).2);
    }

    proptest! {
        #[test]
        fn viterbi_equals_enumeration(
            em in prop::collection::vec(prop::collection::vec(-10.0f64..0.0, 1..=4), 1..=6),
            tr_table in prop::collection::vec(-10.0f64..0.0, 6 * 16),
        ) {
            let tr = |i: usize, a: usize, b: usize| tr_table[i * 16 + a * 4 + b];
            let (path, s) = best_path(&em, tr).unwrap();
            prop_assert!((s - brute(&em, &tr)).abs() < 1e-9);
            // the returned path achieves the returned score
            let mut acc = em[0][path[0]];
            for i in 1..em.len() {
                acc += tr(i - 1, path[i - 1], path[i]) + em[i][path[i]];
            }
            prop_assert!((acc - s).abs() < 1e-9);
        }
    }
}
