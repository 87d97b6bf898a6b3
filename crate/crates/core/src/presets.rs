//! Ready-made configurations (nil-Hecke, skew group ring, quiver Hecke) and
//! an independent quiver-combinatorial model used to cross-check the
//! quiver Hecke case.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{monomials, Model};
use crate::config::{Config, GroupSpec, NamedSet, Options, RatStr, SpringerSpec, TorusSpec, WeightSet};
use crate::error::{Error, Result};
use crate::poly::{LinearProduct, Poly, RatFun};
use crate::rational::q;
use crate::report::Check;
use crate::rootcore::{RootDatum, Weight, WeylElement};
use crate::subgroup::ConstraintKind;

/// Largest total dimension accepted by the quiver preset.
pub const MAX_QUIVER_DIM: usize = 6;

/// Quiver with dimension vector. Loops are arrows with equal ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String)>,
    pub dims: Vec<usize>,
}

impl QuiverSpec {
    pub fn new(vertices: &[&str], arrows: &[(&str, &str)], dims: &[usize]) -> Self {
        QuiverSpec {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            arrows: arrows.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            dims: dims.to_vec(),
        }
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Config(format!("unknown quiver vertex {name:?}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.len() != self.vertices.len() {
            return Err(Error::Config("one dimension per vertex is required".into()));
        }
        for (k, v) in self.vertices.iter().enumerate() {
            if self.vertices[..k].contains(v) {
                return Err(Error::Config(format!("duplicate vertex {v:?}")));
            }
        }
        for (a, b) in &self.arrows {
            self.vertex_index(a)?;
            self.vertex_index(b)?;
        }
        let d = self.total_dim();
        if d == 0 || d > MAX_QUIVER_DIM {
            return Err(Error::UnsupportedDimension(d));
        }
        Ok(())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Vertex of each position, positions sorted by vertex.
    pub fn positions(&self) -> Vec<usize> {
        self.dims.iter().enumerate().flat_map(|(q, &n)| std::iter::repeat_n(q, n)).collect()
    }

    /// Arrows `p -> q`, loops included when `p == q`.
    pub fn arrow_count(&self, p: usize, q: usize) -> usize {
        self.arrows
            .iter()
            .filter(|(a, b)| self.vertex_index(a).ok() == Some(p) && self.vertex_index(b).ok() == Some(q))
            .count()
    }
}

fn label_config(label: &str, springer: SpringerSpec) -> Result<Config> {
    let datum = RootDatum::from_label(label)?;
    Ok(Config {
        group: GroupSpec::Label(datum.label().to_string()),
        torus: Vec::new(),
        springer,
        quiver: None,
        options: Options::default(),
    })
}

/// No copies: `σ(s)` is the divided difference.
pub fn nilhecke(label: &str) -> Result<Config> {
    label_config(label, SpringerSpec::default())
}

/// One copy of the adjoint weights: `σ(s) = s - 1`.
pub fn skew(label: &str) -> Result<Config> {
    label_config(
        label,
        SpringerSpec {
            r: 1,
            u_sets: vec![WeightSet::Named(NamedSet::PositiveRoots)],
            v_sets: vec![WeightSet::Named(NamedSet::AllRoots)],
        },
    )
}

fn unit_root(d: usize, b: usize, c: usize) -> Weight {
    let mut v = vec![0; d];
    v[b] = 1;
    v[c] = -1;
    v
}

/// `GL_d` with the block-diagonal subsystem of the dimension vector. An arrow
/// `p -> q` contributes `e_b - e_c` with `b` at `p` and `c` at `q`; a loop at
/// `p` contributes every `e_b - e_c` with `b != c` both at `p`.
pub fn klr(quiver: &QuiverSpec) -> Result<Config> {
    quiver.validate()?;
    let d = quiver.total_dim();
    let pos = quiver.positions();
    let mut v_sets = Vec::new();
    for (a, b) in &quiver.arrows {
        let (p, q) = (quiver.vertex_index(a)?, quiver.vertex_index(b)?);
        let mut ws = Vec::new();
        for b in 0..d {
            for c in 0..d {
                if b != c && pos[b] == p && pos[c] == q {
                    ws.push(unit_root(d, b, c));
                }
            }
        }
        v_sets.push(WeightSet::Explicit(ws));
    }
    let r = v_sets.len();
    Ok(Config {
        group: GroupSpec::Gl(d),
        torus: vec![TorusSpec {
            kind: ConstraintKind::Generic,
            values: pos.iter().map(|&p| RatStr(q(p as i64))).collect(),
        }],
        springer: SpringerSpec { r, u_sets: vec![WeightSet::Named(NamedSet::PositiveRoots); r], v_sets },
        quiver: Some(quiver.clone()),
        options: Options::default(),
    })
}

type Perm = Vec<usize>;

fn compose(p: &[usize], r: &[usize]) -> Perm {
    r.iter().map(|&a| p[a]).collect()
}

fn swap(d: usize, k: usize) -> Perm {
    let mut p: Perm = (0..d).collect();
    p.swap(k, k + 1);
    p
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|a| (a + 1..p.len()).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count()
}

/// Substitution `y_a -> y_{p(a)}`.
fn perm_matrix(p: &[usize]) -> WeylElement {
    let d = p.len();
    let mut rows = vec![vec![0; d]; d];
    for (a, &b) in p.iter().enumerate() {
        rows[b][a] = 1;
    }
    WeylElement::from_rows(&rows)
}

/// Operator on `⊕_ν k[y]`: term `(ν, c, p)` sends `f` in slot `ν·p` to
/// `c · p(f)` in slot `ν`, where `(ν·p)_a = ν_{p(a)}`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct OracleOp(BTreeMap<(usize, Perm), RatFun>);

impl OracleOp {
    fn add(&mut self, nu: usize, p: Perm, c: RatFun) {
        if c.is_zero() {
            return;
        }
        let key = (nu, p);
        let v = match self.0.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.0.insert(key, v);
        }
    }

    fn sub(&self, o: &OracleOp) -> OracleOp {
        let mut out = self.clone();
        for ((nu, p), c) in &o.0 {
            out.add(*nu, p.clone(), -c);
        }
        out
    }

    fn left_scale(&self, c: &RatFun) -> OracleOp {
        let mut out = OracleOp::default();
        for ((nu, p), v) in &self.0 {
            out.add(*nu, p.clone(), c * v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Quiver Hecke polynomial representation built from vertex sequences.
#[derive(Clone, Debug)]
pub struct KlrOracle {
    d: usize,
    seqs: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    arrows: Vec<Vec<usize>>,
}

impl KlrOracle {
    pub fn new(quiver: &QuiverSpec) -> Result<Self> {
        quiver.validate()?;
        let d = quiver.total_dim();
        let mut seqs = Vec::new();
        let mut cur = Vec::new();
        let mut left = quiver.dims.clone();
        fn rec(cur: &mut Vec<usize>, left: &mut [usize], d: usize, out: &mut Vec<Vec<usize>>) {
            if cur.len() == d {
                out.push(cur.clone());
                return;
            }
            for q in 0..left.len() {
                if left[q] > 0 {
                    left[q] -= 1;
                    cur.push(q);
                    rec(cur, left, d, out);
                    cur.pop();
                    left[q] += 1;
                }
            }
        }
        rec(&mut cur, &mut left, d, &mut seqs);
        let index = seqs.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
        let nv = quiver.vertices.len();
        let arrows = (0..nv).map(|p| (0..nv).map(|q| quiver.arrow_count(p, q)).collect()).collect();
        Ok(KlrOracle { d, seqs, index, arrows })
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn sequence(&self, nu: usize) -> &[usize] {
        &self.seqs[nu]
    }

    pub fn index_of(&self, seq: &[usize]) -> Option<usize> {
        self.index.get(seq).copied()
    }

    fn act(&self, nu: usize, p: &[usize]) -> usize {
        let s: Vec<usize> = p.iter().map(|&a| self.seqs[nu][a]).collect();
        self.index[&s]
    }

    fn id(&self) -> Perm {
        (0..self.d).collect()
    }

    fn beta(&self, k: usize) -> LinearProduct {
        LinearProduct::weight(&unit_root(self.d, k, k + 1)).unwrap()
    }

    /// Exponent of the crossing at positions `k, k+1` landing in `ν`.
    pub fn exponent(&self, nu: usize, k: usize) -> usize {
        let s = &self.seqs[nu];
        self.arrows[s[k]][s[k + 1]]
    }

    pub fn unit(&self, nu: usize) -> OracleOp {
        let mut op = OracleOp::default();
        op.add(nu, self.id(), RatFun::one(self.d));
        op
    }

    pub fn y(&self, nu: usize, a: usize) -> OracleOp {
        let mut op = OracleOp::default();
        op.add(nu, self.id(), RatFun::from_poly(Poly::var(self.d, a)));
        op
    }

    /// Crossing into `ν`: `β^L (f - s f)/(y_{k+1} - y_k)` on equal neighbours,
    /// otherwise `β^A s f`, where `β = y_k - y_{k+1}`.
    pub fn tau(&self, nu: usize, k: usize) -> OracleOp {
        let s = &self.seqs[nu];
        let b = self.beta(k);
        let e = self.exponent(nu, k) as i32;
        let mut op = OracleOp::default();
        if s[k] == s[k + 1] {
            let c = b.pow(e - 1).unwrap().to_ratfun();
            op.add(nu, swap(self.d, k), c.clone());
            op.add(nu, self.id(), -&c);
        } else {
            op.add(nu, swap(self.d, k), b.pow(e).unwrap().to_ratfun());
        }
        op
    }

    pub fn mul(&self, a: &OracleOp, b: &OracleOp) -> OracleOp {
        let mut out = OracleOp::default();
        for ((nu, p), c) in &a.0 {
            let src = self.act(*nu, p);
            let m = perm_matrix(p);
            for ((mu, r), c2) in &b.0 {
                if *mu == src {
                    out.add(*nu, compose(p, r), c * &c2.substitute(&m));
                }
            }
        }
        out
    }

    /// `τ_ν(k_1) τ_{ν s_{k_1}}(k_2) ⋯`.
    pub fn tau_word(&self, nu: usize, word: &[usize]) -> OracleOp {
        let mut op = self.unit(nu);
        let mut cur = nu;
        for &k in word {
            op = self.mul(&op, &self.tau(cur, k));
            cur = self.act(cur, &swap(self.d, k));
        }
        op
    }

    pub fn apply(&self, op: &OracleOp, slots: &[Poly]) -> Vec<RatFun> {
        let mut out = vec![RatFun::zero(self.d); self.len()];
        for ((nu, p), c) in &op.0 {
            let f = &slots[self.act(*nu, p)];
            if !f.is_zero() {
                out[*nu] = &out[*nu] + &(c * &RatFun::from_poly(f.substitute_linear(&perm_matrix(p))));
            }
        }
        out
    }

    /// `τ_ν(k) τ_{ν s_k}(k)`.
    pub fn quadratic(&self, nu: usize, k: usize) -> OracleOp {
        self.tau_word(nu, &[k, k])
    }

    /// Expected quadratic value from the arrow and loop counts.
    pub fn quadratic_expected(&self, nu: usize, k: usize) -> OracleOp {
        let s = &self.seqs[nu];
        let b = self.beta(k);
        let a = self.arrows[s[k]][s[k + 1]] as i32;
        if s[k] == s[k + 1] {
            if a % 2 == 0 {
                OracleOp::default()
            } else {
                self.tau(nu, k).left_scale(&b.pow(a - 1).unwrap().to_ratfun().scale(&q(-2)))
            }
        } else {
            let back = self.arrows[s[k + 1]][s[k]] as i32;
            let sign = if back % 2 == 0 { 1 } else { -1 };
            self.unit(nu).left_scale(&b.pow(a + back).unwrap().to_ratfun().scale(&q(sign)))
        }
    }

    /// Scalar `c` with `τ τ = c τ` (equal neighbours) or `τ τ = c 1`.
    pub fn quadratic_value(&self, nu: usize, k: usize) -> Option<RatFun> {
        let prod = self.quadratic(nu, k);
        let s = &self.seqs[nu];
        let base = if s[k] == s[k + 1] { self.tau(nu, k) } else { self.unit(nu) };
        quadratic_ratio(
            &prod,
            &base,
            |op, key| op.0.get(key).cloned(),
            |op, c| op.left_scale(c),
            &(nu, swap_or_id(s, k, self.d)),
        )
    }

    /// Braid defect `τ(k l k) - τ(l k l)` at `ν` expanded over shorter words.
    pub fn braid_defect(&self, nu: usize, k: usize, l: usize) -> Result<BTreeMap<Vec<usize>, RatFun>> {
        let delta = self.tau_word(nu, &[k, l, k]).sub(&self.tau_word(nu, &[l, k, l]));
        let words: Vec<Vec<usize>> = vec![vec![], vec![k], vec![l], vec![k, l], vec![l, k]];
        let mut by_perm: BTreeMap<Perm, Vec<usize>> = BTreeMap::new();
        for w in &words {
            let p = w.iter().fold(self.id(), |acc, &j| compose(&acc, &swap(self.d, j)));
            by_perm.insert(p, w.clone());
        }
        let mut found: BTreeMap<Vec<usize>, RatFun> = words.iter().map(|w| (w.clone(), RatFun::zero(self.d))).collect();
        let mut rem = delta;
        while let Some(((mu, p), c)) = rem.0.iter().max_by_key(|((_, p), _)| (inversions(p), p.clone())) {
            let word = by_perm
                .get(p)
                .ok_or_else(|| Error::ExtractionStuck { element: 0, reason: format!("permutation {p:?}") })?;
            if *mu != nu || !found[word].is_zero() {
                return Err(Error::ExtractionStuck { element: 0, reason: format!("term at {p:?} did not clear") });
            }
            let basis = self.tau_word(nu, word);
            let lead = basis.0.get(&(nu, p.clone())).expect("leading term present");
            let qv = c * &lead_inverse(lead)?;
            rem = rem.sub(&basis.left_scale(&qv));
            found.insert(word.clone(), qv);
        }
        Ok(found)
    }

    /// The oracle's own relation checks.
    pub fn relation_checks(&self, degree_bound: u32) -> Vec<Check> {
        let d = self.d;
        let n = self.len();
        let mut out = Vec::new();
        let mut fails = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { self.unit(a) } else { OracleOp::default() };
                if self.mul(&self.unit(a), &self.unit(b)) != want {
                    fails.push(format!("e({a}) e({b})"));
                }
            }
        }
        out.push(Check::from_failures("oracle-idempotents", n * n, fails));

        let mut fails = Vec::new();
        for nu in 0..n {
            for a in 0..d {
                for b in 0..d {
                    if self.mul(&self.y(nu, a), &self.y(nu, b)) != self.mul(&self.y(nu, b), &self.y(nu, a)) {
                        fails.push(format!("y{a} y{b} at {nu}"));
                    }
                }
            }
        }
        out.push(Check::from_failures("oracle-commuting-variables", n * d * d, fails));

        let mut fails = Vec::new();
        for nu in 0..n {
            for k in 0..d - 1 {
                if self.quadratic(nu, k) != self.quadratic_expected(nu, k) {
                    fails.push(format!("quadratic at sequence {:?}, k={k}", self.seqs[nu]));
                }
            }
        }
        out.push(Check::from_failures("oracle-quadratic", n * (d - 1), fails));

        let mut fails = Vec::new();
        let mut count = 0;
        let monos = monomials(d, degree_bound);
        for nu in 0..n {
            for k in 0..d - 1 {
                let src = self.act(nu, &swap(d, k));
                let tau = self.tau(nu, k);
                for a in 0..d {
                    count += 1;
                    let sa = swap(d, k)[a];
                    let diff = self.mul(&tau, &self.y(src, a)).sub(&self.mul(&self.y(nu, sa), &tau));
                    let equal = self.seqs[nu][k] == self.seqs[nu][k + 1];
                    let ok = if equal {
                        diff.0.keys().all(|(_, p)| *p == self.id()) && diff.0.values().all(|c| c.is_polynomial())
                    } else {
                        diff.is_zero()
                    };
                    if !ok {
                        fails.push(format!("straightening at {:?}, k={k}, y{a}", self.seqs[nu]));
                    }
                }
                for m in &monos {
                    count += 1;
                    let mut slots = vec![Poly::zero(d); n];
                    slots[src] = Poly::monomial(m.clone(), q(1));
                    if !self.apply(&tau, &slots).iter().all(|r| r.is_polynomial()) {
                        fails.push(format!("τ not integral on {m:?} at {:?}, k={k}", self.seqs[nu]));
                    }
                }
            }
        }
        out.push(Check::from_failures("oracle-straightening", count, fails));

        let mut fails = Vec::new();
        let mut count = 0;
        for nu in 0..n {
            for k in 0..d - 1 {
                for l in 0..d - 1 {
                    count += 1;
                    if k.abs_diff(l) >= 2 {
                        if self.tau_word(nu, &[k, l]) != self.tau_word(nu, &[l, k]) {
                            fails.push(format!("commuting crossings {k},{l} at {:?}", self.seqs[nu]));
                        }
                    } else if k.abs_diff(l) == 1 {
                        match self.braid_defect(nu, k, l) {
                            Ok(qs) if qs.values().all(|c| c.is_polynomial()) => {}
                            Ok(_) => fails.push(format!("non-polynomial braid defect {k},{l} at {:?}", self.seqs[nu])),
                            Err(e) => fails.push(format!("braid {k},{l} at {:?}: {e}", self.seqs[nu])),
                        }
                    }
                }
            }
        }
        out.push(Check::from_failures("oracle-braid", count, fails));
        out
    }
}

fn swap_or_id(s: &[usize], k: usize, d: usize) -> Perm {
    if s[k] == s[k + 1] {
        swap(d, k)
    } else {
        (0..d).collect()
    }
}

fn lead_inverse(c: &RatFun) -> Result<RatFun> {
    let num = c.numerator();
    let lp =
        num.as_constant().map(|k| LinearProduct::constant(c.nvars(), k)).or_else(|| factor_linear(num)).ok_or_else(
            || Error::InternalDivisibilityFailure("leading coefficient is not a product of linear forms".into()),
        )?;
    let mut den = LinearProduct::one(c.nvars());
    for (l, e) in c.denominator_factors() {
        den = den.mul(&LinearProduct::weight(l.coeffs()).unwrap().pow(e as i32).unwrap());
    }
    Ok(den.mul(&lp.inv()?).to_ratfun())
}

/// Splits a product of linear forms `y_a - y_b`.
fn factor_linear(p: &Poly) -> Option<LinearProduct> {
    let d = p.nvars();
    let mut rest = p.clone();
    let mut out = LinearProduct::one(d);
    'outer: loop {
        if let Some(c) = rest.as_constant() {
            return Some(out.mul(&LinearProduct::constant(d, c)));
        }
        for a in 0..d {
            for b in 0..d {
                if a == b {
                    continue;
                }
                let w = unit_root(d, a, b);
                let (_, lf) = crate::poly::LinForm::normalize(&w)?;
                if let Some(quot) = rest.div_linear(&lf) {
                    out = out.mul(&LinearProduct::weight(lf.coeffs()).unwrap());
                    rest = quot;
                    continue 'outer;
                }
            }
        }
        return None;
    }
}

/// `c` with `prod = c ⋄ base`, read off at `key`.
fn quadratic_ratio<T, K>(
    prod: &T,
    base: &T,
    get: impl Fn(&T, &K) -> Option<RatFun>,
    scale: impl Fn(&T, &RatFun) -> T,
    key: &K,
) -> Option<RatFun>
where
    T: PartialEq,
{
    let top = get(base, key)?;
    let c = match get(prod, key) {
        Some(v) => &v * &lead_inverse(&top).ok()?,
        None => RatFun::zero(top.nvars()),
    };
    (scale(base, &c) == *prod).then_some(c)
}

/// Vertex sequence of each coset: `ν_a = v(x_i(a))`.
pub fn model_sequences(model: &Model, quiver: &QuiverSpec) -> Vec<Vec<usize>> {
    let pos = quiver.positions();
    let g = model.group();
    (0..model.ncomponents())
        .map(|i| {
            let x = g.element(model.table().rep(i));
            (0..pos.len()).map(|a| pos[x.column(a).iter().position(|&v| v == 1).unwrap()]).collect()
        })
        .collect()
}

fn model_quadratic_value(model: &Model, i: usize, s: usize) -> Option<RatFun> {
    let prod = model.mul(&model.sigma(i, s), &model.sigma(model.table().act_simple(i, s), s));
    let stab = model.stabilizes(i, s);
    let base = if stab { model.sigma(i, s) } else { model.unit(i) };
    let w = if stab { model.group().simple(s) } else { 0 };
    quadratic_ratio(&prod, &base, |op, &(i, w)| op.get(i, w).cloned(), |op, c| op.left_mul(i, c), &(i, w))
}

/// Cross-checks the root-system construction of a quiver preset against the
/// sequence model: relations in both, h-counts, quadratic values,
/// straightening polynomials and braid defects.
pub fn klr_oracle_check(quiver: &QuiverSpec) -> Result<Vec<Check>> {
    let model = klr(quiver)?.to_model()?;
    let oracle = KlrOracle::new(quiver)?;
    let d = quiver.total_dim();
    let mut out: Vec<Check> = model
        .check_relations()
        .into_iter()
        .map(|mut c| {
            c.name = format!("model-{}", c.name);
            c
        })
        .collect();
    out.extend(oracle.relation_checks(2));

    let seqs = model_sequences(&model, quiver);
    let map: Vec<Option<usize>> = seqs.iter().map(|s| oracle.index_of(s)).collect();
    let mut uniq = map.clone();
    uniq.sort();
    uniq.dedup();
    if map.iter().any(|m| m.is_none()) || uniq.len() != oracle.len() || map.len() != oracle.len() {
        out.push(Check::fail(
            "klr-idempotents",
            json!({"model": seqs.len(), "oracle": oracle.len()}),
            "no bijection between cosets and vertex sequences",
        ));
        return Ok(out);
    }
    out.push(Check::pass("klr-idempotents", json!({"count": map.len(), "sequences": seqs})));
    let map: Vec<usize> = map.into_iter().map(Option::unwrap).collect();
    let g = model.group();

    let mut fails = Vec::new();
    let mut split_fails = Vec::new();
    let mut quad_fails = Vec::new();
    let mut straight_fails = Vec::new();
    let mut count = 0;
    for (i, &nu) in map.iter().enumerate() {
        for s in 0..d - 1 {
            count += 1;
            let stab = model.stabilizes(i, s);
            let e = oracle.exponent(nu, s);
            if model.h(i, s) != e {
                fails.push(format!("h at {:?}, s={s}: {} vs {e}", seqs[i], model.h(i, s)));
            }
            let (arrows, loops) = model.data().h_split(g, model.sub(), model.table(), i, s);
            let want = if stab { (0, e) } else { (e, 0) };
            if (arrows, loops) != want {
                split_fails.push(format!("split at {:?}, s={s}: {:?} vs {want:?}", seqs[i], (arrows, loops)));
            }
            match (model_quadratic_value(&model, i, s), oracle.quadratic_value(nu, s)) {
                (Some(a), Some(b)) if a == b => {}
                (a, b) => quad_fails.push(format!("quadratic at {:?}, s={s}: {a:?} vs {b:?}", seqs[i])),
            }
            let src = model.table().act_simple(i, s);
            let osrc = oracle.index_of(&seqs[src]).unwrap();
            for t in 0..d {
                let f = crate::algebra::ModuleElement::single(model.ncomponents(), src, Poly::var(d, t));
                let mine = model.apply(&model.sigma(i, s), &f).map(|m| m.component(i).clone());
                let mut slots = vec![Poly::zero(d); oracle.len()];
                slots[osrc] = Poly::var(d, t);
                let theirs = oracle.apply(&oracle.tau(nu, s), &slots)[nu].to_poly();
                if mine.ok() != theirs {
                    straight_fails.push(format!("straightening at {:?}, s={s}, t={t}", seqs[i]));
                }
            }
        }
    }
    out.push(Check::from_failures("klr-h-counts", count, fails));
    out.push(Check::from_failures("klr-arrow-loop-split", count, split_fails));
    out.push(Check::from_failures("klr-quadratic-values", count, quad_fails));
    out.push(Check::from_failures("klr-straightening", count * d, straight_fails));

    let mut fails = Vec::new();
    let mut count = 0;
    for (i, &nu) in map.iter().enumerate() {
        for s in 0..d.saturating_sub(2) {
            let t = s + 1;
            count += 1;
            let mine = model.braid_defect(i, s, t);
            let theirs = oracle.braid_defect(nu, s, t);
            match (mine, theirs) {
                (Ok(bd), Ok(qs)) => {
                    for c in &bd.coefficients {
                        if qs.get(&c.word) != Some(&c.value) {
                            fails.push(format!(
                                "Q_{:?} at {:?}, s={s}: {} vs {:?}",
                                c.word,
                                seqs[i],
                                c.value,
                                qs.get(&c.word)
                            ));
                        }
                    }
                    if bd.coefficients.len() != qs.len() {
                        fails.push(format!("word sets differ at {:?}, s={s}", seqs[i]));
                    }
                }
                (a, b) => fails.push(format!("extraction at {:?}, s={s}: {:?} / {:?}", seqs[i], a.err(), b.err())),
            }
        }
    }
    out.push(Check::from_failures("klr-braid-defects", count, fails));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow(d1: usize, d2: usize) -> QuiverSpec {
        QuiverSpec::new(&["1", "2"], &[("1", "2")], &[d1, d2])
    }

    fn jordan(d: usize) -> QuiverSpec {
        QuiverSpec::new(&["1"], &[("1", "1")], &[d])
    }

    #[test]
    fn arrow_quiver_counts() {
        let m = klr(&arrow(1, 1)).unwrap().to_model().unwrap();
        assert_eq!(m.ncomponents(), 2);
        assert_eq!(m.group().order(), 2);
        assert_eq!(m.sub().order(), 1);
        assert_eq!((m.h(0, 0), m.h(1, 0)), (1, 0));
        let prod = m.mul(&m.sigma(0, 0), &m.sigma(1, 0));
        let want = m.diag(0, RatFun::from_poly(Poly::linear(&[1, -1])));
        assert_eq!(prod, want);
    }

    #[test]
    fn jordan_quiver_is_skew() {
        let m = klr(&jordan(2)).unwrap().to_model().unwrap();
        assert_eq!(m.ncomponents(), 1);
        assert_eq!(m.h(0, 0), 1);
        let mut want = crate::algebra::TwistedOperator::term(0, 1, RatFun::one(2));
        want.add_term(0, 0, RatFun::constant(2, q(-1)));
        assert_eq!(m.sigma(0, 0), want);
    }

    #[test]
    fn three_sequences_for_112() {
        let m = klr(&arrow(2, 1)).unwrap().to_model().unwrap();
        assert_eq!(m.ncomponents(), 3);
        assert_eq!(m.sub().order(), 2);
        assert_eq!(KlrOracle::new(&arrow(2, 1)).unwrap().len(), 3);
    }

    #[test]
    fn dimension_limit() {
        assert!(matches!(klr(&jordan(7)), Err(Error::UnsupportedDimension(7))));
        assert!(matches!(klr(&jordan(0)), Err(Error::UnsupportedDimension(0))));
    }

    #[test]
    fn oracle_agrees() {
        for quiver in [arrow(1, 1), arrow(2, 1), jordan(2), jordan(3), arrow(2, 2)] {
            for c in klr_oracle_check(&quiver).unwrap() {
                assert!(c.passed, "{:?} {}: {:?}", quiver.dims, c.name, c.counterexample);
            }
        }
    }

    #[test]
    fn presets_round_trip() {
        for c in [nilhecke("G2").unwrap(), skew("B2").unwrap(), klr(&arrow(2, 1)).unwrap()] {
            let text = c.to_json();
            let back = Config::parse(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_json(), text);
        }
    }
}
