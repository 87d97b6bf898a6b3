//! Weight-level representation data: `r` copies of a Borel-stable weight set
//! `U_k` inside a `G`-stable weight set `V_k`, with the counts, Euler
//! factors and fibre weights derived from them.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::error::{Error, Result};
use crate::poly::LinearProduct;
use crate::report::Check;
use crate::rootcore::{add, is_zero, neg, Weight, WeylGroup};
use crate::subgroup::{CosetTable, SubSystem};

/// Finite multiset of weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multiset(BTreeMap<Weight, usize>);

impl Multiset {
    pub fn new() -> Self {
        Multiset::default()
    }

    pub fn insert(&mut self, w: Weight, mult: usize) {
        if mult > 0 {
            *self.0.entry(w).or_insert(0) += mult;
        }
    }

    pub fn extend(&mut self, other: &Multiset) {
        for (w, &m) in &other.0 {
            self.insert(w.clone(), m);
        }
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn from_weights<'a>(ws: impl IntoIterator<Item = &'a Weight>) -> Multiset {
        let mut m = Multiset::new();
        for w in ws {
            m.insert(w.clone(), 1);
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, usize)> {
        self.0.iter().map(|(w, &m)| (w, m))
    }

    pub fn multiplicity(&self, w: &[i64]) -> usize {
        self.0.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Negated weights.
    pub fn dual(&self) -> Multiset {
        Multiset(self.0.iter().map(|(w, &m)| (neg(w), m)).collect())
    }

    /// Product of the weights with multiplicity; `1` for the empty multiset.
    pub fn eu(&self, nvars: usize) -> Result<LinearProduct> {
        let mut out = LinearProduct::one(nvars);
        for (w, &m) in &self.0 {
            out = out.mul(&LinearProduct::weight(w)?.pow(m as i32)?);
        }
        Ok(out)
    }
}

/// `r` pairs `(U_k, V_k)` of weight sets inside the ambient roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpringerData {
    u_sets: Vec<BTreeSet<Weight>>,
    v_sets: Vec<BTreeSet<Weight>>,
    borel: bool,
}

impl SpringerData {
    pub fn new(group: &WeylGroup, u_sets: Vec<BTreeSet<Weight>>, v_sets: Vec<BTreeSet<Weight>>) -> Result<Self> {
        if u_sets.len() != v_sets.len() {
            return Err(Error::UnsuitableData("U and V copies differ in number".into()));
        }
        let pos: BTreeSet<Weight> = group.datum().positive_roots().into_iter().collect();
        let borel = u_sets.iter().all(|u| *u == pos);
        Ok(SpringerData { u_sets, v_sets, borel })
    }

    /// No copies: the nil-Hecke case.
    pub fn empty() -> Self {
        SpringerData { u_sets: Vec::new(), v_sets: Vec::new(), borel: true }
    }

    /// Every `U_k` is the full positive system.
    pub fn borel(group: &WeylGroup, v_sets: Vec<BTreeSet<Weight>>) -> Self {
        let pos: BTreeSet<Weight> = group.datum().positive_roots().into_iter().collect();
        SpringerData { u_sets: vec![pos; v_sets.len()], v_sets, borel: true }
    }

    pub fn copies(&self) -> usize {
        self.v_sets.len()
    }

    pub fn u_set(&self, k: usize) -> &BTreeSet<Weight> {
        &self.u_sets[k]
    }

    pub fn v_set(&self, k: usize) -> &BTreeSet<Weight> {
        &self.v_sets[k]
    }

    pub fn is_borel(&self) -> bool {
        self.borel
    }

    /// Weight-level suitability. In lenient mode only membership in the
    /// ambient roots and `W`-stability of each `V_k` are fatal.
    pub fn suitability(&self, group: &WeylGroup, sub: &SubSystem, strict: bool) -> Check {
        let datum = group.datum();
        let roots: BTreeSet<&Weight> = datum.roots().iter().collect();
        let positive = datum.positive_roots();
        let phi: Vec<&Weight> = sub.roots().iter().map(|&r| &datum.roots()[r]).collect();
        let mut fatal = Vec::new();
        let mut soft = Vec::new();
        let closed_under = |set: &BTreeSet<Weight>, by: &[&Weight]| -> Option<String> {
            for a in set {
                for b in by {
                    let c = add(a, b);
                    if roots.contains(&c) && !set.contains(&c) {
                        return Some(format!("{a:?} + {b:?} = {c:?} missing"));
                    }
                }
            }
            None
        };
        let pos_refs: Vec<&Weight> = positive.iter().collect();
        for k in 0..self.copies() {
            for w in self.u_sets[k].iter().chain(&self.v_sets[k]) {
                if is_zero(w) || !roots.contains(w) {
                    fatal.push(format!("copy {k}: weight {w:?} is not a root"));
                }
            }
            for &b in sub.simple() {
                let sb = group.reflection(b);
                if self.v_sets[k].iter().any(|v| !self.v_sets[k].contains(&group.act(sb, v))) {
                    fatal.push(format!("copy {k}: V is not W-stable"));
                    break;
                }
            }
            if let Some(e) = closed_under(&self.u_sets[k], &pos_refs) {
                soft.push(format!("copy {k}: U not Borel-stable: {e}"));
            }
            for s in 0..group.rank() {
                let m = group.element(group.simple(s));
                let inter: BTreeSet<Weight> =
                    self.u_sets[k].iter().filter(|a| self.u_sets[k].contains(&m.apply(a))).cloned().collect();
                if let Some(e) = closed_under(&inter, &pos_refs) {
                    soft.push(format!("copy {k}: U ∩ s{s}(U) not Borel-stable: {e}"));
                }
            }
            if let Some(e) = closed_under(&self.v_sets[k], &phi) {
                soft.push(format!("copy {k}: V not stable under Phi: {e}"));
            }
        }
        let failures: Vec<String> = if strict { fatal.iter().chain(&soft).cloned().collect() } else { fatal.clone() };
        let mut c = Check::from_failures("suitability", self.copies(), failures);
        c.details["strict"] = json!(strict);
        c.details["warnings"] = json!(if strict { Vec::new() } else { soft });
        c
    }

    /// `h_i(s)`: number of copies whose `V_k` contains `x_i(alpha_s)`.
    pub fn h_count(&self, group: &WeylGroup, table: &CosetTable, i: usize, s: usize) -> usize {
        let beta = group.act(table.rep(i), &group.datum().simple_roots()[s]);
        self.v_sets.iter().filter(|v| v.contains(&beta)).count()
    }

    /// `h_i(s)` split into copies where `x_i(alpha_s)` lies outside `Phi`
    /// (arrows) and inside `Phi` (loops).
    pub fn h_split(
        &self,
        group: &WeylGroup,
        sub: &SubSystem,
        table: &CosetTable,
        i: usize,
        s: usize,
    ) -> (usize, usize) {
        let beta = group.act(table.rep(i), &group.datum().simple_roots()[s]);
        let in_phi = group.datum().root_index(&beta).is_some_and(|r| sub.contains_root(r));
        let h = self.v_sets.iter().filter(|v| v.contains(&beta)).count();
        if in_phi {
            (0, h)
        } else {
            (h, 0)
        }
    }

    /// `q_i(s)` as a product of roots.
    pub fn q_factor(&self, group: &WeylGroup, table: &CosetTable, i: usize, s: usize) -> LinearProduct {
        let n = group.datum().ambient_rank();
        let sm = group.element(group.simple(s));
        let x = group.element(table.rep(i));
        let mut out = LinearProduct::one(n);
        for k in 0..self.copies() {
            for a in &self.u_sets[k] {
                if !self.u_sets[k].contains(&sm.apply(a)) && self.v_sets[k].contains(&x.apply(a)) {
                    out = out.mul(&LinearProduct::weight(a).expect("roots are nonzero"));
                }
            }
        }
        out
    }

    /// `F_w`: weights of `V_k ∩ w(U_k)` over all copies.
    pub fn fiber(&self, group: &WeylGroup, w: usize) -> Multiset {
        let m = group.element(w);
        let mut out = Multiset::new();
        for k in 0..self.copies() {
            for a in &self.u_sets[k] {
                let b = m.apply(a);
                if self.v_sets[k].contains(&b) {
                    out.insert(b, 1);
                }
            }
        }
        out
    }

    /// `F_{x,y}`: weights of `V_k ∩ x(U_k) ∩ y(U_k)` over all copies.
    pub fn fiber_pair(&self, group: &WeylGroup, x: usize, y: usize) -> Multiset {
        let xm = group.element(x);
        let yinv = group.element(group.inverse(y));
        let mut out = Multiset::new();
        for k in 0..self.copies() {
            for a in &self.u_sets[k] {
                let b = xm.apply(a);
                if self.v_sets[k].contains(&b) && self.u_sets[k].contains(&yinv.apply(&b)) {
                    out.insert(b, 1);
                }
            }
        }
        out
    }

    /// `F_{x_i} = F_{x_i, x_i s} ⊔ {x_i(alpha_s)}^{h_i(s)}` for Borel data.
    pub fn fiber_split_check(&self, group: &WeylGroup, table: &CosetTable) -> Check {
        let mut failures = Vec::new();
        let mut checked = 0;
        if self.borel {
            for i in 0..table.len() {
                let x = table.rep(i);
                for s in 0..group.rank() {
                    checked += 1;
                    let mut rhs = self.fiber_pair(group, x, group.mul_simple_right(x, s));
                    rhs.insert(group.act(x, &group.datum().simple_roots()[s]), self.h_count(group, table, i, s));
                    if self.fiber(group, x) != rhs {
                        failures.push(format!("fibre split fails at i={i}, s={s}"));
                    }
                }
            }
        }
        Check::from_failures("fiber-split", checked, failures)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};
    use crate::rootcore::RootDatum;
    use crate::subgroup::{ConstraintKind, TorusConstraint};

    fn a2_half() -> (WeylGroup, SubSystem, CosetTable) {
        let g = WeylGroup::new(RootDatum::from_label("A2").unwrap()).unwrap();
        let c = TorusConstraint { kind: ConstraintKind::Torsion, values: vec![q_frac(1, 2), q(0)] };
        let s = SubSystem::new(&g, &[c]).unwrap();
        let t = CosetTable::new(&g, &s).unwrap();
        (g, s, t)
    }

    #[test]
    fn arrow_type_counts() {
        let (g, s, t) = a2_half();
        let v: BTreeSet<Weight> = [vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]].into_iter().collect();
        let d = SpringerData::borel(&g, vec![v]);
        assert!(d.suitability(&g, &s, true).passed);
        for i in 0..t.len() {
            for sr in 0..2 {
                let h = d.h_count(&g, &t, i, sr);
                let (a, l) = d.h_split(&g, &s, &t, i, sr);
                assert_eq!(a + l, h);
                if t.stabilizes(i, sr) {
                    assert_eq!((a, l), (0, 0));
                } else {
                    assert_eq!(h, 1);
                }
                let qf = d.q_factor(&g, &t, i, sr);
                let expect = LinearProduct::weight(&g.datum().simple_roots()[sr]).unwrap().pow(h as i32).unwrap();
                assert_eq!(qf, expect);
            }
        }
        assert!(d.fiber_split_check(&g, &t).passed);
    }

    #[test]
    fn unstable_v_is_rejected() {
        let (g, s, _) = a2_half();
        let v: BTreeSet<Weight> = [vec![1, 0]].into_iter().collect();
        let d = SpringerData::borel(&g, vec![v]);
        assert!(!d.suitability(&g, &s, false).passed);
    }

    #[test]
    fn non_borel_q_factor() {
        let (g, s, t) = a2_half();
        let all: BTreeSet<Weight> = g.datum().roots().iter().cloned().collect();
        let u: BTreeSet<Weight> = [vec![1, 1]].into_iter().collect();
        let d = SpringerData::new(&g, vec![u], vec![all]).unwrap();
        assert!(!d.is_borel());
        assert!(d.suitability(&g, &s, true).passed);
        let qf = d.q_factor(&g, &t, 0, 0);
        assert_eq!(qf, LinearProduct::weight(&[1, 1]).unwrap());
    }

    #[test]
    fn multiset_eu() {
        let mut m = Multiset::new();
        m.insert(vec![1, -1], 2);
        m.insert(vec![0, 2], 1);
        let e = m.eu(2).unwrap();
        assert_eq!(e.degree(), 3);
        assert_eq!(m.dual().eu(2).unwrap(), e.neg());
        assert_eq!(Multiset::new().eu(2).unwrap(), LinearProduct::one(2));
        let mut z = Multiset::new();
        z.insert(vec![0, 0], 1);
        assert_eq!(z.eu(2), Err(Error::ZeroWeight));
    }
}
