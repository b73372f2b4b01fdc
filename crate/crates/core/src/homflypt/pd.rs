use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::BraidWord;

/// A crossing `X[a,b,c,d;±]`.
///
/// Slots run counterclockwise from the incoming under-strand `a`; `c` is the
/// outgoing under-strand. On a positive crossing the over-strand runs from
/// `d` to `b`, on a negative one from `b` to `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Crossing {
    pub slots: [u32; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn new(slots: [u32; 4], sign: i8) -> Self {
        Crossing { slots, sign }
    }

    /// Slot indices of the two incoming arcs: under, then over.
    pub fn incoming(&self) -> [usize; 2] {
        if self.sign > 0 {
            [0, 3]
        } else {
            [0, 1]
        }
    }

    /// Slot indices of the two outgoing arcs: under, then over.
    pub fn outgoing(&self) -> [usize; 2] {
        if self.sign > 0 {
            [2, 1]
        } else {
            [2, 3]
        }
    }

    /// Slot reached by going straight through from incoming slot `s`.
    pub fn through(&self, s: usize) -> usize {
        (s + 2) % 4
    }

    pub fn is_incoming(&self, s: usize) -> bool {
        self.incoming().contains(&s)
    }

    /// The same crossing with over and under exchanged.
    pub fn switched(&self) -> Crossing {
        let [a, b, c, d] = self.slots;
        if self.sign > 0 {
            Crossing::new([d, a, b, c], -1)
        } else {
            Crossing::new([b, c, d, a], 1)
        }
    }

    /// Pairs `(incoming, outgoing)` joined by the oriented smoothing.
    pub fn smoothing_pairs(&self) -> [(u32, u32); 2] {
        let [a, b, c, d] = self.slots;
        if self.sign > 0 {
            [(a, b), (d, c)]
        } else {
            [(a, d), (b, c)]
        }
    }

    /// Mirror image in the projection plane.
    pub fn reflected(&self) -> Crossing {
        let [a, b, c, d] = self.slots;
        Crossing::new([a, d, c, b], -self.sign)
    }
}

/// An oriented link diagram given by crossings plus crossing-free loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct PdDiagram {
    pub crossings: Vec<Crossing>,
    pub free_loops: usize,
}

/// Where an arc starts and ends: `(crossing, slot)` pairs.
#[derive(Debug, Clone)]
pub struct ArcIndex {
    pub head: HashMap<u32, (usize, usize)>,
    pub tail: HashMap<u32, (usize, usize)>,
}

impl PdDiagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let d = PdDiagram {
            crossings,
            free_loops,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn unknot() -> Self {
        PdDiagram {
            crossings: Vec::new(),
            free_loops: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Checks that every arc has one head and one tail.
    pub fn validate(&self) -> Result<()> {
        let mut head: HashMap<u32, usize> = HashMap::new();
        let mut tail: HashMap<u32, usize> = HashMap::new();
        for x in &self.crossings {
            if x.sign != 1 && x.sign != -1 {
                return Err(Error::InvalidInput(format!("crossing sign {} is not ±1", x.sign)));
            }
            for s in x.incoming() {
                *head.entry(x.slots[s]).or_default() += 1;
            }
            for s in x.outgoing() {
                *tail.entry(x.slots[s]).or_default() += 1;
            }
        }
        for (arc, n) in &head {
            if *n != 1 || tail.get(arc) != Some(&1) {
                return Err(Error::InvalidInput(format!(
                    "arc {arc} does not have exactly one head and one tail"
                )));
            }
        }
        if head.len() != tail.len() {
            return Err(Error::InvalidInput("arc ends are unbalanced".into()));
        }
        Ok(())
    }

    pub fn arc_index(&self) -> ArcIndex {
        let mut head = HashMap::with_capacity(2 * self.crossings.len());
        let mut tail = HashMap::with_capacity(2 * self.crossings.len());
        for (i, x) in self.crossings.iter().enumerate() {
            for s in x.incoming() {
                head.insert(x.slots[s], (i, s));
            }
            for s in x.outgoing() {
                tail.insert(x.slots[s], (i, s));
            }
        }
        ArcIndex { head, tail }
    }

    /// Arc following `e` along the orientation.
    pub fn next_arc(&self, idx: &ArcIndex, e: u32) -> u32 {
        let (i, s) = idx.head[&e];
        let x = &self.crossings[i];
        x.slots[x.through(s)]
    }

    /// Components as cyclic arc sequences, each starting at its least arc.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let idx = self.arc_index();
        let mut arcs: Vec<u32> = idx.head.keys().copied().collect();
        arcs.sort_unstable();
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for &a in &arcs {
            if seen.contains(&a) {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = a;
            loop {
                seen.insert(e);
                comp.push(e);
                e = self.next_arc(&idx, e);
                if e == a {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }

    /// Number of link components, free loops included.
    pub fn component_count(&self) -> usize {
        self.components().len() + self.free_loops
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    pub fn switch(&self, i: usize) -> PdDiagram {
        let mut d = self.clone();
        d.crossings[i] = d.crossings[i].switched();
        d
    }

    /// Oriented smoothing of crossing `i`.
    pub fn smooth(&self, i: usize) -> PdDiagram {
        let pairs = self.crossings[i].smoothing_pairs();
        let mut d = self.clone();
        d.crossings.remove(i);
        d.join(pairs);
        d
    }

    /// Joins each `(in, out)` pair of dangling arc ends into one arc.
    fn join(&mut self, pairs: [(u32, u32); 2]) {
        let mut pairs = pairs;
        for k in 0..2 {
            let (a, b) = pairs[k];
            if a == b {
                self.free_loops += 1;
                continue;
            }
            for x in &mut self.crossings {
                for s in &mut x.slots {
                    if *s == b {
                        *s = a;
                    }
                }
            }
            for p in pairs.iter_mut().skip(k + 1) {
                if p.0 == b {
                    p.0 = a;
                }
                if p.1 == b {
                    p.1 = a;
                }
            }
        }
    }

    /// Removes one Reidemeister I kink if there is one.
    pub fn remove_kink(&self) -> Option<PdDiagram> {
        for (i, x) in self.crossings.iter().enumerate() {
            for s in x.outgoing() {
                let e = x.slots[s];
                let Some(t) = x.incoming().into_iter().find(|&t| x.slots[t] == e) else {
                    continue;
                };
                let other_in = x.incoming().into_iter().find(|&u| u != t)?;
                let other_out = x.outgoing().into_iter().find(|&u| u != s)?;
                let pair = (x.slots[other_in], x.slots[other_out]);
                let mut d = self.clone();
                d.crossings.remove(i);
                d.join([pair, (e, e)]);
                // The loop arc itself was not a separate component.
                d.free_loops -= 1;
                return Some(d);
            }
        }
        None
    }

    /// Removes one Reidemeister II bigon if there is one.
    pub fn remove_bigon(&self) -> Option<PdDiagram> {
        let mut ends: HashMap<u32, [(usize, usize); 2]> = HashMap::new();
        for (i, x) in self.crossings.iter().enumerate() {
            for (s, &a) in x.slots.iter().enumerate() {
                ends.entry(a).and_modify(|e| e[1] = (i, s)).or_insert([(i, s); 2]);
            }
        }
        let other = |a: u32, at: (usize, usize)| {
            let e = ends[&a];
            if e[0] == at {
                e[1]
            } else {
                e[0]
            }
        };
        let over = |c: usize, s: usize| {
            let x = &self.crossings[c];
            x.incoming()[1] == s || x.outgoing()[1] == s
        };
        for (i, x) in self.crossings.iter().enumerate() {
            for s in 0..4 {
                // Face corners: (i, s) --e--> (j, t), then (j, t+1) --f--> (i, s-1).
                let e = x.slots[s];
                let (j, t) = other(e, (i, s));
                if j == i {
                    continue;
                }
                let y = &self.crossings[j];
                let f = y.slots[(t + 1) % 4];
                if f == e || other(f, (j, (t + 1) % 4)) != (i, (s + 3) % 4) {
                    continue;
                }
                if over(i, s) != over(j, t) {
                    continue;
                }
                let (e_i, e_j) = (x.slots[(s + 2) % 4], y.slots[(t + 2) % 4]);
                let (f_i, f_j) = (x.slots[(s + 1) % 4], y.slots[(t + 3) % 4]);
                if [e_i, e_j, f_i, f_j].iter().any(|&a| a == e || a == f) {
                    continue;
                }
                let pe = if y.is_incoming(t) { (e_i, e_j) } else { (e_j, e_i) };
                let pf = if x.is_incoming((s + 3) % 4) { (f_j, f_i) } else { (f_i, f_j) };
                let mut d = self.clone();
                d.crossings.remove(i.max(j));
                d.crossings.remove(i.min(j));
                d.join([pe, pf]);
                return Some(d);
            }
        }
        None
    }

    /// Applies Reidemeister I and II reductions until none is left.
    pub fn simplified(&self) -> PdDiagram {
        let mut d = self.clone();
        loop {
            if let Some(r) = d.remove_kink().or_else(|| d.remove_bigon()) {
                d = r;
            } else {
                return d;
            }
        }
    }

    /// Mirror image obtained by reflecting the projection plane.
    pub fn reflected(&self) -> PdDiagram {
        PdDiagram {
            crossings: self.crossings.iter().map(Crossing::reflected).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Mirror image obtained by switching every crossing.
    pub fn all_switched(&self) -> PdDiagram {
        PdDiagram {
            crossings: self.crossings.iter().map(Crossing::switched).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Splits off the parts whose crossings are not connected to each other.
    pub fn split(&self) -> Vec<PdDiagram> {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut j = i;
            while p[j] != r {
                let nx = p[j];
                p[j] = r;
                j = nx;
            }
            r
        }
        let mut first: HashMap<u32, usize> = HashMap::new();
        for (i, x) in self.crossings.iter().enumerate() {
            for &e in &x.slots {
                if let Some(&j) = first.get(&e) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                } else {
                    first.insert(e, i);
                }
            }
        }
        let mut groups: Vec<(usize, Vec<Crossing>)> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            let g = *slot.entry(r).or_insert_with(|| {
                groups.push((r, Vec::new()));
                groups.len() - 1
            });
            groups[g].1.push(self.crossings[i]);
        }
        groups
            .into_iter()
            .map(|(_, cs)| PdDiagram {
                crossings: cs,
                free_loops: 0,
            })
            .collect()
    }

    /// Relabels arcs by first appearance, giving labels `1..=2n`.
    pub fn normalized(&self) -> PdDiagram {
        let mut map: HashMap<u32, u32> = HashMap::new();
        let mut next = 1u32;
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let mut slots = x.slots;
                for s in &mut slots {
                    *s = *map.entry(*s).or_insert_with(|| {
                        next += 1;
                        next - 1
                    });
                }
                Crossing::new(slots, x.sign)
            })
            .collect();
        PdDiagram {
            crossings,
            free_loops: self.free_loops,
        }
    }

    /// Parses `X[1,2,3,4;+] X[...] O` where each `O` is a free loop.
    pub fn parse(text: &str) -> Result<PdDiagram> {
        let mut crossings = Vec::new();
        let mut loops = 0;
        let mut rest = text.trim();
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('O') {
                loops += 1;
                rest = r.trim_start();
                continue;
            }
            let body = rest
                .strip_prefix("X[")
                .ok_or_else(|| Error::Parse(format!("expected X[ at {rest:?}")))?;
            let end = body
                .find(']')
                .ok_or_else(|| Error::Parse("unterminated crossing".into()))?;
            let inner = &body[..end];
            let (arcs, sign) = inner
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("missing sign in X[{inner}]")))?;
            let sign = match sign.trim() {
                "+" => 1,
                "-" => -1,
                s => return Err(Error::Parse(format!("bad sign {s:?}"))),
            };
            let nums: Vec<u32> = arcs
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad arc label in X[{inner}]")))?;
            let slots: [u32; 4] = nums
                .try_into()
                .map_err(|_| Error::Parse(format!("X[{inner}] needs four arcs")))?;
            crossings.push(Crossing::new(slots, sign));
            rest = body[end + 1..].trim_start();
        }
        PdDiagram::new(crossings, loops)
    }
}

impl fmt::Display for PdDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.slots;
                let s = if x.sign > 0 { '+' } else { '-' };
                format!("X[{a},{b},{c},{d};{s}]")
            })
            .collect();
        parts.extend(std::iter::repeat("O".to_string()).take(self.free_loops));
        write!(f, "{}", parts.join(" "))
    }
}

/// Crossing sign assigned to the braid letter `σ_i`.
pub const SIGMA_SIGN: i8 = 1;

struct Builder {
    next: u32,
    crossings: Vec<Crossing>,
}

impl Builder {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    /// Runs the braid downward from the top arcs `top`; returns the bottom arcs.
    fn braid(&mut self, b: &BraidWord, top: &[u32]) -> Vec<u32> {
        let mut cur = top.to_vec();
        for &(i, e) in b.letters() {
            let (l, r) = (cur[i - 1], cur[i]);
            let out_l = self.fresh();
            let out_r = self.fresh();
            // out_l continues the left strand, now at position i + 1.
            let sign = e * SIGMA_SIGN;
            let x = if sign > 0 {
                Crossing::new([l, out_r, out_l, r], 1)
            } else {
                Crossing::new([r, l, out_r, out_l], -1)
            };
            self.crossings.push(x);
            cur[i - 1] = out_r;
            cur[i] = out_l;
        }
        cur
    }
}

/// Closure of a braid, strands running downward and returning on the right.
pub fn braid_closure(b: &BraidWord) -> PdDiagram {
    let n = b.strands();
    let mut bld = Builder {
        next: 0,
        crossings: Vec::new(),
    };
    let top: Vec<u32> = (0..n).map(|_| bld.fresh()).collect();
    let bottom = bld.braid(b, &top);
    // Follow the closure permutation: the bottom arc at p is the top arc at p.
    let mut rename: HashMap<u32, u32> = HashMap::new();
    for p in 0..n {
        rename.insert(bottom[p], top[p]);
    }
    let resolve = |mut e: u32| {
        let mut guard = 0;
        while let Some(&t) = rename.get(&e) {
            if t == e || guard > n {
                break;
            }
            e = t;
            guard += 1;
        }
        e
    };
    let mut crossings = bld.crossings;
    for x in &mut crossings {
        for s in &mut x.slots {
            *s = resolve(*s);
        }
    }
    let used: std::collections::HashSet<u32> =
        crossings.iter().flat_map(|x| x.slots).collect();
    // A strand with no crossings anywhere on its cycle is a free loop.
    let mut loops = 0;
    let perm = b.permutation();
    let mut seen = vec![false; n];
    for p in 0..n {
        if seen[p] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = p;
        while !seen[j] {
            seen[j] = true;
            cycle.push(j);
            j = perm[j];
        }
        if cycle.iter().all(|&j| !used.contains(&resolve(top[j]))) {
            loops += 1;
        }
    }
    PdDiagram {
        crossings,
        free_loops: loops,
    }
    .normalized()
}

/// Keeps only the strands marked in `keep` of a pure braid.
pub fn restrict_braid(b: &BraidWord, keep: &[bool]) -> BraidWord {
    let n = b.strands();
    let mut at: Vec<usize> = (0..n).collect();
    let mut letters = Vec::new();
    for &(i, e) in b.letters() {
        let (l, r) = (at[i - 1], at[i]);
        if keep[l] && keep[r] {
            let p = (0..i - 1).filter(|&k| keep[at[k]]).count();
            letters.push((p + 1, e));
        }
        at.swap(i - 1, i);
    }
    let kept = keep.iter().filter(|&&k| k).count();
    BraidWord::new(kept.max(1), letters)
        .expect("restricted letters stay in range")
        .reduced()
}

/// Positive permutation braid carrying the strand at top position `a` to bottom position `target[a]`.
pub fn permutation_braid(target: &[usize]) -> BraidWord {
    let n = target.len();
    let mut cur = target.to_vec();
    let mut letters = Vec::new();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if cur[i] > cur[i + 1] {
                cur.swap(i, i + 1);
                letters.push((i + 1, 1));
            }
        }
    }
    BraidWord::new(n.max(1), letters).expect("letters in range")
}

/// Cabled braid: strand `i` becomes `r[i]` parallel strands.
pub fn cable_braid(b: &BraidWord, r: &[usize]) -> Result<BraidWord> {
    let n = b.strands();
    if r.len() != n {
        return Err(Error::RankMismatch {
            left: n,
            right: r.len(),
        });
    }
    if !b.is_pure() {
        return Err(Error::NotPure);
    }
    let total: usize = r.iter().sum();
    let mut at: Vec<usize> = (0..n).collect();
    let mut letters = Vec::new();
    for &(i, e) in b.letters() {
        let (sa, sb) = (at[i - 1], at[i]);
        let base: usize = at[..i - 1].iter().map(|&s| r[s]).sum();
        let (ra, rb) = (r[sa], r[sb]);
        for a in (0..ra).rev() {
            for k in 0..rb {
                letters.push((base + a + k + 1, e));
            }
        }
        at.swap(i - 1, i);
    }
    BraidWord::new(total.max(1), letters)
}

/// Knot obtained by fusing the strands of a pure braid listed in `order`.
///
/// The kept strands are conjugated into `order` from left to right; then the
/// top end of each strand is joined to the start of the next by a short
/// arc, and the last back to the first by a long arc passing over the others.
pub fn fused_closure(b: &BraidWord, order: &[usize]) -> Result<PdDiagram> {
    let n = b.strands();
    if order.is_empty() {
        return Err(Error::InvalidInput("nothing to fuse".into()));
    }
    let mut keep = vec![false; n];
    for &p in order {
        if p >= n || keep[p] {
            return Err(Error::InvalidInput(format!("bad fusion order {order:?}")));
        }
        keep[p] = true;
    }
    if !b.is_pure() {
        return Err(Error::NotPure);
    }
    let s = order.len();
    let restricted = restrict_braid(b, &keep);
    let rank_of = |p: usize| (0..p).filter(|&k| keep[k]).count();
    let target: Vec<usize> = order.iter().map(|&p| rank_of(p)).collect();
    let delta = permutation_braid(&target);
    let conj = delta
        .concat(&restricted)?
        .concat(&delta.inverse())?
        .reduced();
    if s == 1 {
        return Ok(braid_closure(&conj));
    }
    let mut bld = Builder {
        next: 0,
        crossings: Vec::new(),
    };
    let top: Vec<u32> = (0..s).map(|_| bld.fresh()).collect();
    let bottom = bld.braid(&conj, &top);
    // The long arc runs from the last strand's end across every short arc.
    let mut long_in = bottom[s - 1];
    for c in (0..s - 1).rev() {
        let long_out = if c == 0 { top[0] } else { bld.fresh() };
        bld.crossings.push(Crossing::new([bottom[c], long_out, top[c + 1], long_in], 1));
        long_in = long_out;
    }
    Ok(PdDiagram {
        crossings: bld.crossings,
        free_loops: 0,
    }
    .normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_counts() {
        let d = braid_closure(&BraidWord::trivial(3));
        assert_eq!(d.free_loops, 3);
        assert!(d.crossings.is_empty());
        let d = braid_closure(&BraidWord::parse("s1", 2).unwrap());
        assert_eq!(d.len(), 1);
        assert_eq!(d.component_count(), 1);
        let d = braid_closure(&BraidWord::parse("s1 s1 s1", 2).unwrap());
        d.validate().unwrap();
        assert_eq!(d.component_count(), 1);
        let d = braid_closure(&BraidWord::parse("s1^-1 s2 s1^-1 s2 s1^-1 s2", 3).unwrap());
        assert_eq!(d.component_count(), 3);
    }

    #[test]
    fn switch_and_smooth() {
        let d = braid_closure(&BraidWord::parse("s1 s1", 2).unwrap());
        let s = d.switch(0);
        s.validate().unwrap();
        assert_eq!(s.writhe(), 0);
        let z = d.smooth(0);
        z.validate().unwrap();
        assert_eq!(z.component_count(), 1);
    }

    #[test]
    fn kink_removal() {
        let d = braid_closure(&BraidWord::parse("s1", 2).unwrap());
        let r = d.remove_kink().unwrap();
        assert!(r.crossings.is_empty());
        assert_eq!(r.free_loops, 1);
    }

    #[test]
    fn bigon_removal() {
        let d = braid_closure(&BraidWord::parse("s1 s2 s2^-1 s1 s1", 3).unwrap());
        let r = d.remove_bigon().unwrap();
        r.validate().unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.component_count(), d.component_count());
        let s = braid_closure(&BraidWord::parse("s1 s1^-1", 2).unwrap()).simplified();
        assert!(s.is_empty());
        assert_eq!(s.free_loops, 2);
        // Same strand under, then over: not a bigon move.
        assert!(braid_closure(&BraidWord::parse("s1 s1", 2).unwrap()).remove_bigon().is_none());
    }

    #[test]
    fn cabling_and_restriction() {
        let b = BraidWord::parse("s1 s1", 2).unwrap();
        let c = cable_braid(&b, &[2, 1]).unwrap();
        assert_eq!(c.strands(), 3);
        assert_eq!(c.len(), 4);
        assert!(c.is_pure());
        let r = restrict_braid(&c, &[true, false, true]);
        assert_eq!(r, BraidWord::parse("s1 s1", 2).unwrap());
        let r = restrict_braid(&c, &[true, true, false]);
        assert!(r.is_empty());
    }

    #[test]
    fn fusion_is_a_knot() {
        let b = BraidWord::parse("s1^-1 s2 s1^-1 s2 s1^-1 s2", 3).unwrap();
        for order in [vec![0, 1, 2], vec![2, 0, 1], vec![1, 0], vec![2]] {
            let d = fused_closure(&b, &order).unwrap();
            d.validate().unwrap();
            assert_eq!(d.component_count(), 1, "{order:?}");
        }
    }

    #[test]
    fn parse_round_trip() {
        let d = braid_closure(&BraidWord::parse("s1 s1 s1", 2).unwrap());
        assert_eq!(PdDiagram::parse(&d.to_string()).unwrap(), d);
        assert!(PdDiagram::parse("X[1,2,3;+]").is_err());
    }
}
