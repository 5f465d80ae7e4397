//! Matching frequencies between strokes and dominant-neighbour selection.

use std::collections::BTreeMap;

use super::{ChainSet, MatchTable, VertexRef};
use crate::config::Config;
use crate::scoring::Side;

/// `F_ST` per chain and side, keyed by target chain.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Frequencies {
    pub per_chain: Vec<[BTreeMap<usize, f64>; 2]>,
}

impl Frequencies {
    pub fn get(&self, chain: usize, side: Side, target: usize) -> f64 {
        self.per_chain[chain][side.index()].get(&target).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub target: usize,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NeighborMap {
    pub per_chain: Vec<[Option<Neighbor>; 2]>,
}

impl NeighborMap {
    pub fn get(&self, chain: usize, side: Side) -> Option<Neighbor> {
        self.per_chain.get(chain).and_then(|n| n[side.index()])
    }
}

/// Share of a chain's vertices whose `side` match lies on each target chain.
/// The denominator is the full vertex count of the chain.
pub fn matching_frequencies(chains: &ChainSet, table: &MatchTable) -> Frequencies {
    let per_chain = chains
        .chains
        .iter()
        .enumerate()
        .map(|(c, ch)| {
            let mut out: [BTreeMap<usize, f64>; 2] = [BTreeMap::new(), BTreeMap::new()];
            for side in Side::BOTH {
                let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                for i in 0..ch.len() {
                    if let Some(m) = table.get(chains, VertexRef::new(c, i), side) {
                        *counts.entry(m.target.chain as usize).or_default() += 1;
                    }
                }
                out[side.index()] = counts.into_iter().map(|(t, k)| (t, k as f64 / ch.len() as f64)).collect();
            }
            out
        })
        .collect();
    Frequencies { per_chain }
}

/// Does some consecutive vertex pair of `chain` match a consecutive pair of
/// `target`, in either order?
fn has_consecutive_pair(chains: &ChainSet, table: &MatchTable, chain: usize, side: Side, target: usize) -> bool {
    let n = chains.chains[chain].len();
    (0..n.saturating_sub(1)).any(|i| {
        let a = table.get(chains, VertexRef::new(chain, i), side);
        let b = table.get(chains, VertexRef::new(chain, i + 1), side);
        match (a, b) {
            (Some(a), Some(b)) if a.target.chain as usize == target && b.target.chain as usize == target => {
                chains.adjacent(a.target, b.target)
            }
            _ => false,
        }
    })
}

/// The dominant other chain per chain and side: the strict maximum of
/// `F_ST` (ties to the lower id), at least `dominant_freq`, with at least one
/// consecutive matched pair.
pub fn dominant_neighbors(chains: &ChainSet, table: &MatchTable, freqs: &Frequencies, config: &Config) -> NeighborMap {
    let per_chain = (0..chains.chains.len())
        .map(|c| {
            let mut out = [None, None];
            for side in Side::BOTH {
                let mut best: Option<(usize, f64)> = None;
                for (&t, &f) in &freqs.per_chain[c][side.index()] {
                    if t == c {
                        continue;
                    }
                    if best.is_none_or(|(_, bf)| f > bf) {
                        best = Some((t, f));
                    }
                }
                out[side.index()] = best
                    .filter(|&(t, f)| f >= config.dominant_freq && has_consecutive_pair(chains, table, c, side, t))
                    .map(|(target, frequency)| Neighbor { target, frequency });
            }
            out
        })
        .collect();
    NeighborMap { per_chain }
}
