//! Finite root data in an ambient lattice, Weyl groups realised as integer
//! matrices, lengths, canonical reduced words and Bruhat order.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Integer vector in the ambient lattice.
pub type Weight = Vec<i64>;

const MAX_GROUP_ORDER: usize = 20_000;

pub fn neg(v: &[i64]) -> Weight {
    v.iter().map(|x| -x).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn is_zero(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Square integer matrix acting on column vectors of the ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    dim: usize,
    entries: Vec<i64>,
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = 1;
        }
        WeylElement { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        WeylElement { dim, entries: rows.iter().flatten().copied().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Weight {
        (0..self.dim).map(|r| (0..self.dim).map(|c| self.entry(r, c) * v[c]).sum()).collect()
    }

    /// Image of the `k`-th basis vector, i.e. the `k`-th column.
    pub fn column(&self, k: usize) -> Weight {
        (0..self.dim).map(|r| self.entry(r, k)).collect()
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entry(r, k);
                if a != 0 {
                    for c in 0..n {
                        entries[r * n + c] += a * other.entry(k, c);
                    }
                }
            }
        }
        WeylElement { dim: n, entries }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanFamily {
    A,
    B,
    C,
    D,
    G,
    F,
}

/// Parses labels such as `A2`, `B3`, `G2`, `F4`.
pub fn parse_cartan_label(label: &str) -> Result<(CartanFamily, usize)> {
    let bad = || Error::InvalidRootDatum(format!("unknown Cartan label {label:?}"));
    let mut chars = label.trim().chars();
    let fam = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
        'A' => CartanFamily::A,
        'B' => CartanFamily::B,
        'C' => CartanFamily::C,
        'D' => CartanFamily::D,
        'G' => CartanFamily::G,
        'F' => CartanFamily::F,
        _ => return Err(bad()),
    };
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    let ok = match fam {
        CartanFamily::A | CartanFamily::B | CartanFamily::C => (1..=4).contains(&n),
        CartanFamily::D => (2..=4).contains(&n),
        CartanFamily::G => n == 2,
        CartanFamily::F => n == 4,
    };
    if !ok {
        return Err(bad());
    }
    Ok((fam, n))
}

/// Cartan matrix with `a[i][j] = <alpha_j, alpha_i^vee>`.
///
/// Nodes of the non-simply-laced families are numbered from the multiple
/// bond: in `B_n` and `G_2` the first simple root is short, in `C_n` it is long.
pub fn cartan_matrix(fam: CartanFamily, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match fam {
        CartanFamily::A => (0..n.saturating_sub(1)).for_each(|i| link(i, i + 1, -1, -1)),
        CartanFamily::B | CartanFamily::C => {
            if n >= 2 {
                if fam == CartanFamily::B {
                    link(0, 1, -2, -1);
                } else {
                    link(0, 1, -1, -2);
                }
            }
            (1..n.saturating_sub(1)).for_each(|i| link(i, i + 1, -1, -1));
        }
        CartanFamily::D => {
            if n >= 3 {
                (0..n - 3).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 3, n - 2, -1, -1);
                link(n - 3, n - 1, -1, -1);
            }
        }
        CartanFamily::G => link(0, 1, -3, -1),
        CartanFamily::F => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
    }
    a
}

/// A finite reduced root system in `Z^N` with simple roots and simple coroots.
#[derive(Clone, Debug)]
pub struct RootDatum {
    label: String,
    ambient: usize,
    simple: Vec<Weight>,
    coroots: Vec<Vec<Q>>,
    roots: Vec<Weight>,
    positive: Vec<bool>,
    simple_index: Vec<usize>,
    index: HashMap<Weight, usize>,
    reflections: Vec<WeylElement>,
}

impl RootDatum {
    /// Root datum of a Cartan type in simple-root coordinates.
    pub fn from_label(label: &str) -> Result<Self> {
        let (fam, n) = parse_cartan_label(label)?;
        let a = cartan_matrix(fam, n);
        let simple = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let coroots = a.iter().map(|row| row.iter().map(|&x| q(x)).collect()).collect();
        Self::from_simple(label.trim().to_ascii_uppercase(), n, simple, coroots)
    }

    /// `GL_d`: roots `e_a - e_b` in `Z^d`, self-dual coroots.
    pub fn gl(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidRootDatum("GL needs d >= 1".into()));
        }
        let simple: Vec<Weight> = (0..d.saturating_sub(1))
            .map(|a| {
                let mut v = vec![0; d];
                v[a] = 1;
                v[a + 1] = -1;
                v
            })
            .collect();
        let coroots = simple.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
        Self::from_simple(format!("GL{d}"), d, simple, coroots)
    }

    /// Builds the root system generated by the given simple roots and coroots.
    pub fn from_simple(label: String, ambient: usize, simple: Vec<Weight>, coroots: Vec<Vec<Q>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidRootDatum(m));
        if simple.len() != coroots.len() {
            return bad("simple roots and coroots differ in number".into());
        }
        if simple.iter().any(|v| v.len() != ambient) || coroots.iter().any(|v| v.len() != ambient) {
            return bad("vector length differs from ambient rank".into());
        }
        let simple_q: Vec<Vec<Q>> = simple.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
        if rank(&simple_q) != simple.len() {
            return bad("simple roots are linearly dependent".into());
        }
        for (i, c) in coroots.iter().enumerate() {
            if pair(&simple[i], c) != q(2) {
                return bad(format!("<alpha_{i}, alpha_{i}^vee> != 2"));
            }
            if solve_in_span(&simple_q, c).is_none() {
                return bad(format!("coroot {i} is not in the span of the roots"));
            }
        }
        let mut simple_refl = Vec::new();
        for (a, c) in simple.iter().zip(&coroots) {
            let mut rows = vec![vec![0i64; ambient]; ambient];
            for (r, row) in rows.iter_mut().enumerate() {
                for (k, x) in row.iter_mut().enumerate() {
                    let v = q(i64::from(r == k)) - q(a[r]) * &c[k];
                    if !v.is_integer() {
                        return bad("simple reflection is not integral".into());
                    }
                    *x = crate::rational::to_i64(&v).unwrap();
                }
            }
            simple_refl.push(WeylElement::from_rows(&rows));
        }
        let mut seen: HashMap<Weight, ()> = HashMap::new();
        let mut queue: VecDeque<Weight> = simple.iter().cloned().collect();
        for v in &simple {
            seen.insert(v.clone(), ());
        }
        while let Some(v) = queue.pop_front() {
            for s in &simple_refl {
                let w = s.apply(&v);
                if !seen.contains_key(&w) {
                    if seen.len() > 4 * MAX_GROUP_ORDER {
                        return bad("root system is not finite".into());
                    }
                    seen.insert(w.clone(), ());
                    queue.push_back(w);
                }
            }
        }
        let mut roots: Vec<Weight> = seen.into_keys().collect();
        roots.sort();
        let mut positive = Vec::with_capacity(roots.len());
        for r in &roots {
            let rq: Vec<Q> = r.iter().map(|&x| q(x)).collect();
            let coeffs =
                solve_in_span(&simple_q, &rq).ok_or_else(|| Error::InvalidRootDatum("root outside span".into()))?;
            if coeffs.iter().any(|c| !c.is_integer()) {
                return bad("root is not an integral combination of simple roots".into());
            }
            let pos = coeffs.iter().all(|c| !c.is_negative());
            let negc = coeffs.iter().all(|c| !c.is_positive());
            if !pos && !negc {
                return bad("root has mixed-sign simple coordinates".into());
            }
            positive.push(pos);
        }
        let index: HashMap<Weight, usize> = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let simple_index = simple.iter().map(|s| index[s]).collect();
        Ok(RootDatum {
            label,
            ambient,
            simple,
            coroots,
            roots,
            positive,
            simple_index,
            index,
            reflections: simple_refl,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// All roots in lexicographic order.
    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn positive_roots(&self) -> Vec<Weight> {
        self.roots.iter().zip(&self.positive).filter(|(_, &p)| p).map(|(r, _)| r.clone()).collect()
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple
    }

    pub fn simple_coroots(&self) -> &[Vec<Q>] {
        &self.coroots
    }

    pub fn simple_root_index(&self, s: usize) -> usize {
        self.simple_index[s]
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_positive_index(&self, r: usize) -> bool {
        self.positive[r]
    }

    /// Sign of a root: `Some(true)` for positive, `None` if not a root.
    pub fn sign(&self, v: &[i64]) -> Option<bool> {
        self.root_index(v).map(|r| self.positive[r])
    }

    pub fn simple_reflection(&self, s: usize) -> &WeylElement {
        &self.reflections[s]
    }

    pub fn cartan_entry(&self, i: usize, j: usize) -> Q {
        pair(&self.simple[j], &self.coroots[i])
    }
}

/// `<v, c>` as the ambient dot product.
pub fn pair(v: &[i64], c: &[Q]) -> Q {
    v.iter().zip(c).fold(Q::zero(), |acc, (x, y)| acc + q(*x) * y)
}

fn rank(vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Q>> = vectors.to_vec();
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Coefficients `x` with `sum x_i cols_i = v`, if `v` lies in the span.
pub fn solve_in_span(cols: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let n = cols.len();
    let dim = v.len();
    let mut m: Vec<Vec<Q>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..dim).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::from_integer(1.into()) / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..dim {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, c) in pivots {
        x[c] = m[row][n].clone();
    }
    Some(x)
}

/// The Weyl group of a root datum with every element enumerated in canonical
/// order: by length, then lexicographically by canonical reduced word.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: RootDatum,
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
    words: Vec<Vec<usize>>,
    lengths: Vec<usize>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    root_perm: Vec<Vec<usize>>,
    reflection_of_root: Vec<usize>,
}

impl WeylGroup {
    pub fn new(datum: RootDatum) -> Result<Self> {
        let n = datum.ambient_rank();
        let r = datum.rank();
        let id = WeylElement::identity(n);
        let mut mats = vec![id.clone()];
        let mut idx: HashMap<WeylElement, usize> = HashMap::from([(id, 0)]);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &w in &frontier {
                for s in 0..r {
                    let ws = mats[w].compose(datum.simple_reflection(s));
                    if !idx.contains_key(&ws) {
                        if mats.len() >= MAX_GROUP_ORDER {
                            return Err(Error::InvalidRootDatum("Weyl group too large".into()));
                        }
                        idx.insert(ws.clone(), mats.len());
                        next.push(mats.len());
                        mats.push(ws);
                    }
                }
            }
            frontier = next;
        }
        let root_perm_of = |m: &WeylElement| -> Vec<usize> {
            datum.roots().iter().map(|v| datum.root_index(&m.apply(v)).unwrap()).collect()
        };
        let perms: Vec<Vec<usize>> = mats.iter().map(root_perm_of).collect();
        let lengths: Vec<usize> = perms
            .iter()
            .map(|p| (0..p.len()).filter(|&k| datum.is_positive_index(k) && !datum.is_positive_index(p[k])).count())
            .collect();
        let right_raw: Vec<Vec<usize>> =
            mats.iter().map(|m| (0..r).map(|s| idx[&m.compose(datum.simple_reflection(s))]).collect()).collect();
        let mut order: Vec<usize> = (0..mats.len()).collect();
        order.sort_by_key(|&w| lengths[w]);
        let mut words_raw: Vec<Vec<usize>> = vec![Vec::new(); mats.len()];
        for &w in &order {
            if lengths[w] == 0 {
                continue;
            }
            let s = (0..r)
                .find(|&s| !datum.is_positive_index(perms[w][datum.simple_root_index(s)]))
                .expect("nontrivial element has a right descent");
            let mut word = words_raw[right_raw[w][s]].clone();
            word.push(s);
            words_raw[w] = word;
        }
        order.sort_by(|&a, &b| (lengths[a], &words_raw[a]).cmp(&(lengths[b], &words_raw[b])));
        let mut new_of_old = vec![0; mats.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let elements: Vec<WeylElement> = order.iter().map(|&o| mats[o].clone()).collect();
        let index: HashMap<WeylElement, usize> = elements.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let words: Vec<Vec<usize>> = order.iter().map(|&o| words_raw[o].clone()).collect();
        let lengths: Vec<usize> = order.iter().map(|&o| lengths[o]).collect();
        let root_perm: Vec<Vec<usize>> = order.iter().map(|&o| perms[o].clone()).collect();
        let right: Vec<Vec<usize>> =
            order.iter().map(|&o| right_raw[o].iter().map(|&x| new_of_old[x]).collect()).collect();
        let left: Vec<Vec<usize>> =
            (0..r).map(|s| elements.iter().map(|m| index[&datum.simple_reflection(s).compose(m)]).collect()).collect();
        let mut group = WeylGroup {
            datum,
            elements,
            index,
            words,
            lengths,
            right,
            left,
            inverse: Vec::new(),
            root_perm,
            reflection_of_root: Vec::new(),
        };
        group.inverse = (0..group.order())
            .map(|w| {
                let mut u = 0;
                for &s in group.words[w].iter().rev() {
                    u = group.right[u][s];
                }
                u
            })
            .collect();
        let nroots = group.datum.roots().len();
        let mut refl = vec![usize::MAX; nroots];
        for w in 0..group.order() {
            for s in 0..r {
                let b = group.root_perm[w][group.datum.simple_root_index(s)];
                if refl[b] == usize::MAX {
                    let ws = group.right[w][s];
                    refl[b] = group.mul(ws, group.inverse[w]);
                }
            }
        }
        group.reflection_of_root = refl;
        Ok(group)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, w: usize) -> &WeylElement {
        &self.elements[w]
    }

    pub fn index_of(&self, m: &WeylElement) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w]
    }

    /// Canonical reduced word: peel the smallest right descent repeatedly.
    pub fn reduced_word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn simple(&self, s: usize) -> usize {
        self.right[0][s]
    }

    pub fn mul_simple_right(&self, w: usize, s: usize) -> usize {
        self.right[w][s]
    }

    pub fn mul_simple_left(&self, s: usize, w: usize) -> usize {
        self.left[s][w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.words[b].iter().fold(a, |u, &s| self.right[u][s])
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |u, &s| self.right[u][s])
    }

    /// Index of `w(root r)`.
    pub fn act_root(&self, w: usize, r: usize) -> usize {
        self.root_perm[w][r]
    }

    pub fn act(&self, w: usize, v: &[i64]) -> Weight {
        self.elements[w].apply(v)
    }

    /// The reflection `s_beta` for the root with index `r`.
    pub fn reflection(&self, r: usize) -> usize {
        self.reflection_of_root[r]
    }

    pub fn is_right_descent(&self, w: usize, s: usize) -> bool {
        !self.datum.is_positive_index(self.root_perm[w][self.datum.simple_root_index(s)])
    }

    pub fn is_left_descent(&self, w: usize, s: usize) -> bool {
        self.is_right_descent(self.inverse[w], s)
    }

    /// Bruhat order `u <= w`.
    pub fn bruhat_le(&self, mut u: usize, mut w: usize) -> bool {
        loop {
            if self.lengths[u] > self.lengths[w] {
                return false;
            }
            if w == 0 {
                return u == 0;
            }
            let s = (0..self.rank()).find(|&s| self.is_right_descent(w, s)).unwrap();
            if self.is_right_descent(u, s) {
                u = self.right[u][s];
            }
            w = self.right[w][s];
        }
    }

    /// Order of `s t`.
    pub fn braid_order(&self, s: usize, t: usize) -> usize {
        let st = self.mul(self.simple(s), self.simple(t));
        let mut x = st;
        let mut m = 1;
        while x != 0 {
            x = self.mul(x, st);
            m += 1;
        }
        m
    }

    /// Alternating word `s t s ...` of length `len`.
    pub fn alternating(&self, s: usize, t: usize, len: usize) -> Vec<usize> {
        (0..len).map(|k| if k % 2 == 0 { s } else { t }).collect()
    }

    /// Longest element.
    pub fn longest(&self) -> usize {
        self.order() - 1
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}
