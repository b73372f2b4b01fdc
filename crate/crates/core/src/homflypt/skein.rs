use std::collections::HashMap;

use super::laurent::LaurentPoly2;
use super::pd::{Crossing, PdDiagram};

/// How the descending recursion picks component order and basepoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Heuristic {
    /// Components by least arc label, each starting at its least arc.
    #[default]
    FirstFound,
    /// Basepoints and order chosen greedily to minimise the crossings to switch.
    Greedy,
}

/// Default bound on memo entries.
pub const DEFAULT_CACHE_LIMIT: usize = 200_000;

/// HOMFLYPT evaluator for `t P(L+) + t^-1 P(L-) = z P(L0)`, `P(unknot) = 1`.
#[derive(Debug, Clone)]
pub struct SkeinEngine {
    heuristic: Heuristic,
    limit: usize,
    memo: HashMap<Vec<Crossing>, LaurentPoly2>,
}

impl Default for SkeinEngine {
    fn default() -> Self {
        Self::new(Heuristic::default(), DEFAULT_CACHE_LIMIT)
    }
}

impl SkeinEngine {
    pub fn new(heuristic: Heuristic, limit: usize) -> Self {
        SkeinEngine {
            heuristic,
            limit,
            memo: HashMap::new(),
        }
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    /// Polynomial of an arbitrary diagram, split pieces and free loops included.
    pub fn evaluate(&mut self, d: &PdDiagram) -> LaurentPoly2 {
        let d = d.simplified();
        let pieces = d.split();
        let count = pieces.len() + d.free_loops;
        let mut out = LaurentPoly2::delta().pow(count.saturating_sub(1));
        for p in &pieces {
            out = out.mul(&self.connected(p));
        }
        out
    }

    fn connected(&mut self, d: &PdDiagram) -> LaurentPoly2 {
        let key = canonical_key(d);
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let p = self.descend(d);
        if self.memo.len() >= self.limit {
            self.memo.clear();
        }
        self.memo.insert(key, p.clone());
        p
    }

    /// Switches the crossings first met from below until the diagram is descending.
    fn descend(&mut self, d: &PdDiagram) -> LaurentPoly2 {
        let (order, bad) = match self.heuristic {
            Heuristic::FirstFound => first_found(d),
            Heuristic::Greedy => greedy(d),
        };
        let mut cur = d.clone();
        let mut weight = LaurentPoly2::one();
        let mut out = LaurentPoly2::zero();
        let last = bad.len();
        for (n, i) in bad.into_iter().enumerate() {
            let sign = cur.crossings[i].sign as i32;
            // P(L±) = t^∓1 z P(L0) - t^∓2 P(L∓)
            let smooth = self.evaluate(&cur.smooth(i));
            out = out.add(&weight.mul(&smooth).shift(1, -sign, 1));
            weight = weight.shift(-1, -2 * sign, 0);
            cur = cur.switch(i);
            // A switch that opens up a reduction hands over to a smaller diagram.
            if n + 1 < last && (cur.remove_kink().is_some() || cur.remove_bigon().is_some()) {
                return out.add(&weight.mul(&self.evaluate(&cur)));
            }
        }
        let unlink = LaurentPoly2::delta().pow(order.saturating_sub(1));
        out.add(&weight.mul(&unlink))
    }
}

/// Walks the components from their basepoints; returns the crossings whose
/// first visit is along the under-strand, in the order met.
fn bad_crossings(d: &PdDiagram, starts: &[u32]) -> Vec<usize> {
    let idx = d.arc_index();
    let mut seen = vec![false; d.crossings.len()];
    let mut bad = Vec::new();
    for &s in starts {
        let mut e = s;
        loop {
            let (i, slot) = idx.head[&e];
            if !seen[i] {
                seen[i] = true;
                if slot == 0 {
                    bad.push(i);
                }
            }
            e = d.next_arc(&idx, e);
            if e == s {
                break;
            }
        }
    }
    bad
}

fn first_found(d: &PdDiagram) -> (usize, Vec<usize>) {
    let comps = d.components();
    let starts: Vec<u32> = comps.iter().map(|c| c[0]).collect();
    (comps.len(), bad_crossings(d, &starts))
}

fn greedy(d: &PdDiagram) -> (usize, Vec<usize>) {
    let comps = d.components();
    let mut comp_of: HashMap<u32, usize> = HashMap::new();
    for (c, arcs) in comps.iter().enumerate() {
        for &a in arcs {
            comp_of.insert(a, c);
        }
    }
    let is_self = |x: &Crossing| {
        let c = comp_of[&x.slots[0]];
        x.slots.iter().all(|a| comp_of[a] == c)
    };
    // Basepoint per component minimising bad self-crossings.
    let starts: Vec<u32> = comps
        .iter()
        .map(|arcs| {
            *arcs
                .iter()
                .min_by_key(|&&a| {
                    let n = bad_crossings(d, &[a])
                        .into_iter()
                        .filter(|&i| is_self(&d.crossings[i]))
                        .count();
                    (n, a)
                })
                .expect("components are nonempty")
        })
        .collect();
    // Components go on top in order of how often they pass over the others.
    let mut over_count = vec![vec![0usize; comps.len()]; comps.len()];
    for x in &d.crossings {
        let [u, o] = x.incoming();
        let (cu, co) = (comp_of[&x.slots[u]], comp_of[&x.slots[o]]);
        if cu != co {
            over_count[co][cu] += 1;
        }
    }
    let mut left: Vec<usize> = (0..comps.len()).collect();
    let mut order = Vec::new();
    while !left.is_empty() {
        let pos = (0..left.len())
            .min_by_key(|&p| {
                let c = left[p];
                let under: usize = left.iter().map(|&o| over_count[o][c]).sum();
                (under, c)
            })
            .expect("nonempty");
        order.push(left.remove(pos));
    }
    let ordered: Vec<u32> = order.iter().map(|&c| starts[c]).collect();
    (comps.len(), bad_crossings(d, &ordered))
}

/// Relabels arcs by a traversal from `start`, sorting the resulting crossings.
fn code_from(d: &PdDiagram, idx: &super::pd::ArcIndex, start: u32) -> Vec<Crossing> {
    let mut label: HashMap<u32, u32> = HashMap::with_capacity(2 * d.crossings.len());
    let mut order: Vec<u32> = Vec::new();
    let walk = |s: u32, label: &mut HashMap<u32, u32>, order: &mut Vec<u32>| {
        let mut e = s;
        while !label.contains_key(&e) {
            label.insert(e, label.len() as u32 + 1);
            order.push(e);
            e = d.next_arc(idx, e);
        }
    };
    walk(start, &mut label, &mut order);
    let mut k = 0;
    while k < order.len() {
        let (i, _) = idx.head[&order[k]];
        for a in d.crossings[i].slots {
            if !label.contains_key(&a) {
                walk(a, &mut label, &mut order);
            }
        }
        k += 1;
    }
    let mut code: Vec<Crossing> = d
        .crossings
        .iter()
        .map(|x| Crossing::new(x.slots.map(|a| label[&a]), x.sign))
        .collect();
    code.sort_unstable();
    code
}

/// Relabeling-invariant code of a connected diagram.
pub fn canonical_key(d: &PdDiagram) -> Vec<Crossing> {
    let idx = d.arc_index();
    let mut arcs: Vec<u32> = idx.head.keys().copied().collect();
    arcs.sort_unstable();
    arcs.into_iter()
        .map(|a| code_from(d, &idx, a))
        .min()
        .unwrap_or_default()
}

/// HOMFLYPT polynomial with a fresh engine.
pub fn homfly(d: &PdDiagram) -> LaurentPoly2 {
    SkeinEngine::default().evaluate(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homflypt::pd::braid_closure;
    use crate::words::BraidWord;

    fn closure(s: &str, n: usize) -> PdDiagram {
        braid_closure(&BraidWord::parse(s, n).unwrap())
    }

    #[test]
    fn basic_values() {
        assert_eq!(homfly(&PdDiagram::unknot()), LaurentPoly2::one());
        assert_eq!(homfly(&closure("", 2)), LaurentPoly2::delta());
        assert_eq!(homfly(&closure("s1", 2)), LaurentPoly2::one());
        let hopf = LaurentPoly2::monomial(1, -1, 1)
            .sub(&LaurentPoly2::monomial(1, -1, -1))
            .sub(&LaurentPoly2::monomial(1, -3, -1));
        assert_eq!(homfly(&closure("s1 s1", 2)), hopf);
    }

    #[test]
    fn heuristics_agree() {
        for (s, n) in [("s1 s1 s1", 2), ("s1^-1 s2 s1^-1 s2 s1^-1 s2", 3), ("s1 s2^-1 s1 s2^-1", 3)] {
            let d = closure(s, n);
            let a = SkeinEngine::new(Heuristic::FirstFound, 10).evaluate(&d);
            let b = SkeinEngine::new(Heuristic::Greedy, 10).evaluate(&d);
            assert_eq!(a, b, "{s}");
        }
    }

    #[test]
    fn canonical_key_ignores_labels() {
        let d = closure("s1 s2^-1 s1 s2^-1", 3);
        let shifted = PdDiagram {
            crossings: d
                .crossings
                .iter()
                .rev()
                .map(|x| Crossing::new(x.slots.map(|a| a * 7 + 3), x.sign))
                .collect(),
            free_loops: 0,
        };
        assert_eq!(canonical_key(&d), canonical_key(&shifted));
    }
}
