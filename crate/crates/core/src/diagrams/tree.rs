//! Jacobi trees with cyclically oriented trivalent vertices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::magnus::{lie_bracket, lyndon_words, standard_factorization, LieElement};
use crate::nilpotent::{bracket_map, SlotLie};
use crate::rational::{fmt_q, Q};

/// Planar rooted binary tree. `Node(l, r)` reached from its parent `p` has
/// cyclic order `(p, l, r)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(u8),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn leaf(i: u8) -> Tree {
        Tree::Leaf(i)
    }

    pub fn node(l: Tree, r: Tree) -> Tree {
        Tree::Node(Box::new(l), Box::new(r))
    }

    /// Standard bracketing of a Lyndon word.
    pub fn lyndon(w: &[u8]) -> Tree {
        if w.len() == 1 {
            return Tree::Leaf(w[0]);
        }
        let (u, v) = standard_factorization(w);
        Tree::node(Tree::lyndon(u), Tree::lyndon(v))
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn labels(&self) -> Vec<u8> {
        match self {
            Tree::Leaf(i) => vec![*i],
            Tree::Node(l, r) => {
                let mut v = l.labels();
                v.extend(r.labels());
                v
            }
        }
    }

    /// Children sorted at every vertex; `None` when two siblings coincide,
    /// which makes the tree vanish by antisymmetry.
    fn canonical(&self) -> Option<(Tree, bool)> {
        match self {
            Tree::Leaf(_) => Some((self.clone(), false)),
            Tree::Node(l, r) => {
                let (l, sl) = l.canonical()?;
                let (r, sr) = r.canonical()?;
                match l.cmp(&r) {
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Less => Some((Tree::node(l, r), sl ^ sr)),
                    std::cmp::Ordering::Greater => Some((Tree::node(r, l), !(sl ^ sr))),
                }
            }
        }
    }

    /// Every planar rooted tree with `n` leaves labelled from `1..=q`.
    pub fn enumerate(q: usize, n: usize) -> Vec<Tree> {
        if n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return (1..=q as u8).map(Tree::Leaf).collect();
        }
        let mut out = Vec::new();
        for a in 1..n {
            let left = Tree::enumerate(q, a);
            let right = Tree::enumerate(q, n - a);
            for l in &left {
                for r in &right {
                    out.push(Tree::node(l.clone(), r.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(i) => write!(f, "{i}"),
            Tree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

struct TreeParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at offset {}", c as char, self.pos)))
        }
    }

    fn number(&mut self) -> Result<u8> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<u8>().ok())
            .filter(|&i| i > 0)
            .ok_or_else(|| Error::Parse(format!("expected a positive label at offset {start}")))
    }

    fn tree(&mut self) -> Result<Tree> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&b'(') {
            self.pos += 1;
            let l = self.tree()?;
            self.expect(b',')?;
            let r = self.tree()?;
            self.expect(b')')?;
            Ok(Tree::node(l, r))
        } else {
            Ok(Tree::Leaf(self.number()?))
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.s.len() {
            Ok(())
        } else {
            Err(Error::Parse(format!("trailing input at offset {}", self.pos)))
        }
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        let mut p = TreeParser { s: s.as_bytes(), pos: 0 };
        let t = p.tree()?;
        p.finish()?;
        Ok(t)
    }
}

/// `[X_a, X_b]`-style iterated bracket of a rooted tree.
pub fn comm(t: &Tree, q: usize) -> Result<LieElement> {
    match t {
        Tree::Leaf(i) => {
            let i = *i as usize;
            if i == 0 || i > q {
                return Err(Error::IndexOutOfRange { index: i, rank: q });
            }
            Ok(LieElement::generator(q, i))
        }
        Tree::Node(l, r) => lie_bracket(&comm(l, q)?, &comm(r, q)?, t.leaves() + 1),
    }
}

/// Unrooted Jacobi tree: the leaf `root` glued to the root of `body`.
///
/// Degree is the number of leaves of `body`. A body that is a single leaf is a strut.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JacobiTree {
    pub root: u8,
    pub body: Tree,
}

enum Vertex {
    Leaf(u8, usize),
    Tri([usize; 3]),
}

/// Adjacency form with the cyclic order stored at each trivalent vertex.
struct Graph {
    vertices: Vec<Vertex>,
}

impl Graph {
    fn of(j: &JacobiTree) -> Graph {
        let mut g = Graph { vertices: Vec::new() };
        g.vertices.push(Vertex::Leaf(j.root, usize::MAX));
        let top = g.attach(&j.body, 0);
        g.vertices[0] = Vertex::Leaf(j.root, top);
        g
    }

    fn attach(&mut self, t: &Tree, parent: usize) -> usize {
        let id = self.vertices.len();
        match t {
            Tree::Leaf(i) => self.vertices.push(Vertex::Leaf(*i, parent)),
            Tree::Node(l, r) => {
                self.vertices.push(Vertex::Tri([parent, usize::MAX, usize::MAX]));
                let a = self.attach(l, id);
                let b = self.attach(r, id);
                self.vertices[id] = Vertex::Tri([parent, a, b]);
            }
        }
        id
    }

    /// Subtree hanging off `to`, seen from its neighbour `from`.
    fn branch(&self, to: usize, from: usize) -> Tree {
        match &self.vertices[to] {
            Vertex::Leaf(i, _) => Tree::Leaf(*i),
            Vertex::Tri(n) => {
                let p = n.iter().position(|&x| x == from).expect("adjacent");
                Tree::node(self.branch(n[(p + 1) % 3], to), self.branch(n[(p + 2) % 3], to))
            }
        }
    }

    fn leaves(&self) -> impl Iterator<Item = (usize, u8, usize)> + '_ {
        self.vertices.iter().enumerate().filter_map(|(v, x)| match x {
            Vertex::Leaf(i, n) => Some((v, *i, *n)),
            Vertex::Tri(_) => None,
        })
    }

    fn trivalent(&self) -> impl Iterator<Item = (usize, [usize; 3])> + '_ {
        self.vertices.iter().enumerate().filter_map(|(v, x)| match x {
            Vertex::Tri(n) => Some((v, *n)),
            Vertex::Leaf(..) => None,
        })
    }
}

impl JacobiTree {
    pub fn new(root: u8, body: Tree) -> Self {
        JacobiTree { root, body }
    }

    pub fn tripod(a: u8, b: u8, c: u8) -> Self {
        JacobiTree::new(a, Tree::node(Tree::Leaf(b), Tree::Leaf(c)))
    }

    pub fn degree(&self) -> usize {
        self.body.leaves()
    }

    pub fn labels(&self) -> Vec<u8> {
        let mut v = vec![self.root];
        v.extend(self.body.labels());
        v
    }

    /// The same oriented tree read from each of its leaves: `(label, body)`.
    pub fn rootings(&self) -> Vec<(u8, Tree)> {
        let g = Graph::of(self);
        g.leaves().map(|(v, i, n)| (i, g.branch(n, v))).collect()
    }

    /// The tree with the cyclic order reversed at the top vertex.
    pub fn flipped(&self) -> JacobiTree {
        match &self.body {
            Tree::Leaf(_) => self.clone(),
            Tree::Node(l, r) => JacobiTree::new(self.root, Tree::Node(r.clone(), l.clone())),
        }
    }

    /// AS normal form: the least `(root, body)` over all rootings with sorted
    /// children, with the sign relating it to `self`. `None` when the tree is 0.
    pub fn normal_form(&self) -> Option<(bool, JacobiTree)> {
        let mut best: Option<(JacobiTree, bool)> = None;
        let mut both_signs = false;
        for (i, body) in self.rootings() {
            let (body, neg) = body.canonical()?;
            let cand = JacobiTree::new(i, body);
            match &best {
                Some((b, s)) if *b == cand => both_signs |= *s != neg,
                Some((b, _)) if *b < cand => {}
                _ => {
                    best = Some((cand, neg));
                    both_signs = false;
                }
            }
        }
        if both_signs {
            return None;
        }
        best.map(|(t, neg)| (neg, t))
    }

    /// `Σ_v x_{label(v)} ⊗ comm(tree rooted at v)`, checked to lie in the bracket kernel.
    pub fn eta(&self, q: usize) -> Result<SlotLie> {
        let mut z = SlotLie::zero(q);
        for (i, body) in self.rootings() {
            z = z.add(&SlotLie::single(i as usize, comm(&body, q)?)?);
        }
        let j = self.degree();
        if !bracket_map(&z, j, j + 1)?.is_zero() {
            return Err(Error::Consistency(format!("eta({self}) is not in the bracket kernel")));
        }
        Ok(z)
    }

    /// Comm values of the three branches at each trivalent vertex, in cyclic order.
    pub fn vertex_branches(&self) -> Vec<[Tree; 3]> {
        let g = Graph::of(self);
        g.trivalent()
            .map(|(v, n)| [g.branch(n[0], v), g.branch(n[1], v), g.branch(n[2], v)])
            .collect()
    }

    /// Rooted tree from the leaf labelled `marker`, which must occur exactly once.
    pub fn rooted_at_marker(&self, marker: u8) -> Result<Tree> {
        let hits: Vec<Tree> = self
            .rootings()
            .into_iter()
            .filter(|(i, _)| *i == marker)
            .map(|(_, b)| b)
            .collect();
        match hits.len() {
            1 => Ok(hits.into_iter().next().expect("one")),
            n => Err(Error::InvalidInput(format!(
                "expected exactly one root leaf {marker}, found {n}"
            ))),
        }
    }
}

/// `comm` of a tree with one leaf marked `q + 1` as the root.
pub fn comm_marked(t: &JacobiTree, q: usize) -> Result<LieElement> {
    comm(&t.rooted_at_marker(q as u8 + 1)?, q)
}

impl fmt::Display for JacobiTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Tree::Node(l, r) if l.leaves() == 1 && r.leaves() == 1 => {
                write!(f, "tripod[{},{l},{r}]", self.root)
            }
            _ => write!(f, "({},{})", self.root, self.body),
        }
    }
}

impl FromStr for JacobiTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<JacobiTree> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("tripod[") {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated tripod: {s}")))?;
            let labels: Vec<u8> = inner
                .split(',')
                .map(|x| x.trim().parse::<u8>().ok().filter(|&i| i > 0))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad tripod labels: {s}")))?;
            if labels.len() != 3 {
                return Err(Error::Parse(format!("tripod needs three labels: {s}")));
            }
            return Ok(JacobiTree::tripod(labels[0], labels[1], labels[2]));
        }
        match s.parse::<Tree>()? {
            Tree::Node(l, r) => match *l {
                Tree::Leaf(i) => Ok(JacobiTree::new(i, *r)),
                _ => Err(Error::Parse(format!("first entry must be a leaf: {s}"))),
            },
            Tree::Leaf(_) => Err(Error::Parse(format!("a single leaf is not a Jacobi tree: {s}"))),
        }
    }
}

impl Serialize for JacobiTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Formal rational combination of Jacobi trees in AS normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeCombination {
    terms: BTreeMap<JacobiTree, Q>,
}

impl TreeCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(t: &JacobiTree) -> Self {
        let mut c = Self::new();
        c.add_tree(t, &Q::one());
        c
    }

    pub fn add_tree(&mut self, t: &JacobiTree, c: &Q) {
        if c.is_zero() {
            return;
        }
        let Some((neg, t)) = t.normal_form() else {
            return;
        };
        let c = if neg { -c.clone() } else { c.clone() };
        let e = self.terms.entry(t.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, other: &TreeCombination) -> TreeCombination {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_tree(t, c);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> TreeCombination {
        let mut out = Self::new();
        for (t, x) in &self.terms {
            out.add_tree(t, &(x * c));
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<JacobiTree, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn homogeneous(&self, j: usize) -> TreeCombination {
        TreeCombination {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.degree() == j)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eta(&self, q: usize) -> Result<SlotLie> {
        let mut z = SlotLie::zero(q);
        for (t, c) in &self.terms {
            z.add_scaled(&t.eta(q)?, c);
        }
        Ok(z)
    }
}

impl fmt::Display for TreeCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("{} {t}", fmt_q(c))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for TreeCombination {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (t, c) in &self.terms {
            m.serialize_entry(&t.to_string(), &fmt_q(c))?;
        }
        m.end()
    }
}

/// Every degree-`j` tree on labels `1..=q` up to AS, one normal form each.
pub fn enumerate_trees(q: usize, j: usize) -> Vec<JacobiTree> {
    let mut seen = std::collections::BTreeSet::new();
    for root in 1..=q as u8 {
        for body in Tree::enumerate(q, j) {
            if let Some((_, t)) = JacobiTree::new(root, body).normal_form() {
                seen.insert(t);
            }
        }
    }
    seen.into_iter().collect()
}

/// Spanning trees `(i, P_w)` and their η images as coordinate columns.
struct EtaSystem {
    trees: Vec<JacobiTree>,
    rows: Vec<(usize, Vec<u8>)>,
    matrix: QMatrix,
}

fn eta_system(q: usize, j: usize) -> Result<Arc<EtaSystem>> {
    type Cache = RwLock<HashMap<(usize, usize), Arc<EtaSystem>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.read().expect("cache poisoned").get(&(q, j)) {
        return Ok(s.clone());
    }
    let words = lyndon_words(q, j);
    let rows: Vec<(usize, Vec<u8>)> = (1..=q)
        .flat_map(|l| words.iter().map(move |w| (l, w.clone())))
        .collect();
    let trees: Vec<JacobiTree> = (1..=q as u8)
        .flat_map(|i| words.iter().map(move |w| JacobiTree::new(i, Tree::lyndon(w))))
        .collect();
    let columns = trees
        .iter()
        .map(|t| {
            let z = t.eta(q)?;
            Ok(rows.iter().map(|(l, w)| z.part(*l).coord(w)).collect())
        })
        .collect::<Result<Vec<Vec<Q>>>>()?;
    let sys = Arc::new(EtaSystem {
        matrix: QMatrix::from_columns(rows.len(), &columns),
        trees,
        rows,
    });
    cache.write().expect("cache poisoned").insert((q, j), sys.clone());
    Ok(sys)
}

/// Rank of η on degree-`j` trees.
pub fn eta_rank(q: usize, j: usize) -> Result<usize> {
    Ok(eta_system(q, j)?.matrix.rank())
}

/// A tree combination `c` of degree `j` with `η(c) = z`.
pub fn eta_inverse(z: &SlotLie, j: usize) -> Result<TreeCombination> {
    let q = z.rank();
    if z.is_zero() {
        return Ok(TreeCombination::new());
    }
    if z.min_degree() != Some(j) || z.max_degree() != Some(j) {
        return Err(Error::InvalidInput(format!("element is not homogeneous of degree {j}")));
    }
    if !bracket_map(z, j, j + 1)?.is_zero() {
        return Err(Error::InvalidInput("element is not in the bracket kernel".into()));
    }
    let sys = eta_system(q, j)?;
    let b: Vec<Q> = sys.rows.iter().map(|(l, w)| z.part(*l).coord(w)).collect();
    let x = sys
        .matrix
        .solve(&b)
        .ok_or_else(|| Error::Consistency("eta is not onto the bracket kernel".into()))?;
    let mut out = TreeCombination::new();
    for (t, c) in sys.trees.iter().zip(&x) {
        out.add_tree(t, c);
    }
    if out.eta(q)? != *z {
        return Err(Error::Consistency("eta_inverse round trip failed".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q as qq;

    #[test]
    fn figure_comm() {
        let t: Tree = "(1,((2,3),4))".parse().unwrap();
        let want = {
            let g = |i| LieElement::generator(4, i);
            let b23 = lie_bracket(&g(2), &g(3), 9).unwrap();
            let inner = lie_bracket(&b23, &g(4), 9).unwrap();
            lie_bracket(&g(1), &inner, 9).unwrap()
        };
        assert_eq!(comm(&t, 4).unwrap(), want);
        let j: JacobiTree = "(5,(1,((2,3),4)))".parse().unwrap();
        assert_eq!(comm_marked(&j, 4).unwrap(), want);
        assert!(comm_marked(&JacobiTree::tripod(1, 2, 3), 4).is_err());
    }

    #[test]
    fn tripod_eta() {
        let z = JacobiTree::tripod(1, 2, 3).eta(3).unwrap();
        let b = |i, j| lie_bracket(&LieElement::generator(3, i), &LieElement::generator(3, j), 3).unwrap();
        assert_eq!(z.part(1), &b(2, 3));
        assert_eq!(z.part(2), &b(3, 1));
        assert_eq!(z.part(3), &b(1, 2));
        let flipped = JacobiTree::tripod(1, 2, 3).flipped().eta(3).unwrap();
        assert_eq!(flipped, z.scale(&qq(-1)));
        // Two equal leaves at one vertex: zero by AS, and the q = 2 kernel is 0 in degree 2.
        assert!(JacobiTree::tripod(1, 1, 2).eta(2).unwrap().is_zero());
        assert!(JacobiTree::tripod(1, 1, 2).normal_form().is_none());
    }

    #[test]
    fn normal_forms() {
        assert!(JacobiTree::tripod(1, 2, 2).normal_form().is_none());
        let (neg, t) = JacobiTree::tripod(3, 2, 1).normal_form().unwrap();
        assert_eq!(t, JacobiTree::tripod(1, 2, 3));
        assert!(neg);
        let j: JacobiTree = "tripod[1,2,3]".parse().unwrap();
        assert_eq!(j.to_string(), "tripod[1,2,3]");
        let j: JacobiTree = "(1,((2,3),4))".parse().unwrap();
        assert_eq!(j.to_string(), "(1,((2,3),4))");
    }

    #[test]
    fn inverse_round_trip() {
        let z = JacobiTree::tripod(1, 2, 3).eta(3).unwrap();
        let c = eta_inverse(&z, 2).unwrap();
        assert_eq!(c, TreeCombination::single(&JacobiTree::tripod(1, 2, 3)));
        assert!(eta_inverse(&SlotLie::zero(3), 2).unwrap().is_zero());
    }
}
