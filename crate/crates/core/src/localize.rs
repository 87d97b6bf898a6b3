//! Fixed-point localization: Euler classes, the map `Θ`, the fixed-point
//! convolution algebra and consistency checks against the twisted operators.

use std::collections::BTreeMap;

use serde_json::json;

use crate::algebra::{monomials, Model, ModuleElement, TwistedOperator};
use crate::error::Result;
use crate::poly::{LinearProduct, Poly, RatFun};
use crate::rational::q;
use crate::repdata::Multiset;
use crate::report::Check;
use crate::rootcore::{neg, WeylGroup};
use crate::subgroup::SubSystem;

/// `𝔫_w`: roots of `Phi` in `w(Phi_big^-)`.
pub fn tangent_n(group: &WeylGroup, sub: &SubSystem, w: usize) -> Multiset {
    let datum = group.datum();
    let winv = group.inverse(w);
    let mut out = Multiset::new();
    for &r in sub.roots() {
        if !datum.is_positive_index(group.act_root(winv, r)) {
            out.insert(datum.roots()[r].clone(), 1);
        }
    }
    out
}

/// `𝔪_{x,y}`: weights of `𝔫_y` not in `𝔫_x`, the tangent direction along
/// the fibre at the point `y`.
pub fn tangent_m(group: &WeylGroup, sub: &SubSystem, x: usize, y: usize) -> Multiset {
    let nx = tangent_n(group, sub, x);
    let mut out = Multiset::new();
    for (w, m) in tangent_n(group, sub, y).iter() {
        if nx.multiplicity(w) == 0 {
            out.insert(w.clone(), m);
        }
    }
    out
}

/// Coefficients of `ψ_w`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FixedPointVector(pub BTreeMap<usize, RatFun>);

/// Coefficients of `ψ_{x,y}`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FixedPointMatrix(pub BTreeMap<(usize, usize), RatFun>);

impl FixedPointVector {
    pub fn add_entry(&mut self, w: usize, c: RatFun) {
        add_entry(&mut self.0, w, c);
    }
}

impl FixedPointMatrix {
    pub fn add_entry(&mut self, x: usize, y: usize, c: RatFun) {
        add_entry(&mut self.0, (x, y), c);
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&RatFun> {
        self.0.get(&(x, y))
    }
}

fn add_entry<K: Ord>(map: &mut BTreeMap<K, RatFun>, k: K, c: RatFun) {
    if c.is_zero() {
        return;
    }
    match map.remove(&k) {
        None => {
            map.insert(k, c);
        }
        Some(old) => {
            let s = &old + &c;
            if !s.is_zero() {
                map.insert(k, s);
            }
        }
    }
}

/// Localization data for a model: `Λ_w` for every group element.
#[derive(Clone, Debug)]
pub struct Localizer<'a> {
    model: &'a Model,
    lambda: Vec<LinearProduct>,
}

impl<'a> Localizer<'a> {
    pub fn new(model: &'a Model) -> Result<Self> {
        let g = model.group();
        let lambda = (0..g.order())
            .map(|w| {
                let ms = model.data().fiber(g, w).union(&tangent_n(g, model.sub(), w));
                ms.eu(model.nvars())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Localizer { model, lambda })
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    /// `Λ_w = eu(F_w ⊔ 𝔫_w)`.
    pub fn lambda(&self, w: usize) -> &LinearProduct {
        &self.lambda[w]
    }

    fn n(&self) -> usize {
        self.model.nvars()
    }

    fn group(&self) -> &WeylGroup {
        self.model.group()
    }

    /// `Q_x(s) = eu(F_x / F_{x,xs})`.
    pub fn q_x(&self, x: usize, s: usize) -> Result<LinearProduct> {
        let g = self.group();
        let d = self.model.data();
        let fx = d.fiber(g, x);
        let fxs = d.fiber_pair(g, x, g.mul_simple_right(x, s));
        let mut diff = Multiset::new();
        for (w, m) in fx.iter() {
            diff.insert(w.clone(), m - fxs.multiplicity(w));
        }
        diff.eu(self.n())
    }

    /// `eu(Z̄^w, φ_{x,xw}) = eu(F_{x,xw} ⊔ 𝔫_x ⊔ 𝔪_{x,xw})`.
    pub fn eu_zbar_w(&self, x: usize, w: usize) -> Result<LinearProduct> {
        let g = self.group();
        let xw = g.mul(x, w);
        let ms = self.model.data().fiber_pair(g, x, xw).union(&tangent_n(g, self.model.sub(), x)).union(&tangent_m(
            g,
            self.model.sub(),
            x,
            xw,
        ));
        ms.eu(self.n())
    }

    /// Euler classes at `φ_{x,xs}` and, when `x s x^{-1} ∈ W`, at `φ_{x,x}`,
    /// from tangent weights.
    pub fn eu_zbar_s(&self, x: usize, s: usize) -> Result<(LinearProduct, Option<LinearProduct>)> {
        let g = self.group();
        let xs = g.mul_simple_right(x, s);
        let off = self.eu_zbar_w(x, g.simple(s))?;
        if !self.inner(x, s) {
            return Ok((off, None));
        }
        let sub = self.model.sub();
        let ms = self.model.data().fiber_pair(g, x, xs).union(&tangent_n(g, sub, x)).union(&tangent_m(g, sub, xs, x));
        Ok((off, Some(ms.eu(self.n())?)))
    }

    /// Closed forms: `x(α_s) Λ_x / Q_x(s)` and its negative, or `Λ_x / Q_x(s)`.
    pub fn eu_zbar_s_closed(&self, x: usize, s: usize) -> Result<(LinearProduct, Option<LinearProduct>)> {
        let base = self.lambda[x].mul(&self.q_x(x, s)?.inv()?);
        if self.inner(x, s) {
            let xa = LinearProduct::weight(&self.group().act(x, self.model.simple_root(s)))?;
            let v = xa.mul(&base);
            Ok((v.clone(), Some(v.neg())))
        } else {
            Ok((base, None))
        }
    }

    /// `x s x^{-1} ∈ W`, equivalently `x(α_s) ∈ Phi`.
    pub fn inner(&self, x: usize, s: usize) -> bool {
        let g = self.group();
        let r = g.act_root(x, g.datum().simple_root_index(s));
        self.model.sub().contains_root(r)
    }

    /// `Θ(c) = Σ_i Σ_{w ∈ W x_i} w(c_i) Λ_w^{-1} ψ_w`.
    pub fn theta(&self, c: &ModuleElement) -> Result<FixedPointVector> {
        let g = self.group();
        let mut out = FixedPointVector::default();
        for i in 0..self.model.ncomponents() {
            let ci = c.component(i);
            if ci.is_zero() {
                continue;
            }
            for &w in self.model.table().members(i) {
                let img = RatFun::from_poly(ci.substitute_linear(g.element(w)));
                out.add_entry(w, img.mul_lp(&self.lambda[w].inv()?));
            }
        }
        Ok(out)
    }

    /// `(AB)_{x,y} = Σ_w A_{x,w} Λ_w B_{w,y}`.
    pub fn fp_mul(&self, a: &FixedPointMatrix, b: &FixedPointMatrix) -> FixedPointMatrix {
        let mut rows: BTreeMap<usize, Vec<(usize, &RatFun)>> = BTreeMap::new();
        for (&(w, y), c) in &b.0 {
            rows.entry(w).or_default().push((y, c));
        }
        let mut out = FixedPointMatrix::default();
        for (&(x, w), c) in &a.0 {
            if let Some(list) = rows.get(&w) {
                let cl = c.mul_lp(&self.lambda[w]);
                for &(y, c2) in list {
                    out.add_entry(x, y, &cl * c2);
                }
            }
        }
        out
    }

    /// `(Av)_x = Σ_w A_{x,w} Λ_w v_w`.
    pub fn fp_apply(&self, a: &FixedPointMatrix, v: &FixedPointVector) -> FixedPointVector {
        let mut out = FixedPointVector::default();
        for (&(x, w), c) in &a.0 {
            if let Some(vw) = v.0.get(&w) {
                out.add_entry(x, &c.mul_lp(&self.lambda[w]) * vw);
            }
        }
        out
    }

    /// `Σ_x Λ_x^{-1} ψ_{x,x}`.
    pub fn fp_unit(&self) -> Result<FixedPointMatrix> {
        let mut out = FixedPointMatrix::default();
        for (x, l) in self.lambda.iter().enumerate() {
            out.add_entry(x, x, l.inv()?.to_ratfun());
        }
        Ok(out)
    }

    /// Localized `σ_i(s)` from the tangent-weight Euler classes.
    pub fn localize_sigma(&self, i: usize, s: usize) -> Result<FixedPointMatrix> {
        let g = self.group();
        let mut out = FixedPointMatrix::default();
        for &y in self.model.table().members(i) {
            let (off, diag) = self.eu_zbar_s(y, s)?;
            out.add_entry(y, g.mul_simple_right(y, s), off.inv()?.to_ratfun());
            if self.model.stabilizes(i, s) {
                let d = diag.expect("stabilized coset has an inner reflection");
                out.add_entry(y, y, d.inv()?.to_ratfun());
            }
        }
        Ok(out)
    }

    /// Localized twisted operator: term `(i, c, w)` gives `u(c) / Λ_u` at
    /// `(u, uw)` for every `u ∈ W x_i`.
    pub fn localize_op(&self, op: &TwistedOperator) -> Result<FixedPointMatrix> {
        let g = self.group();
        let mut out = FixedPointMatrix::default();
        for (&(i, w), c) in op.terms() {
            for &u in self.model.table().members(i) {
                let uc = self.model.substitute(u, c).mul_lp(&self.lambda[u].inv()?);
                out.add_entry(u, g.mul(u, w), uc);
            }
        }
        Ok(out)
    }

    /// Tangent-weight and closed-form Euler classes agree, and the localized
    /// generators match the twisted operators entry by entry.
    pub fn sigma_localization_check(&self) -> Check {
        let mut fails = Vec::new();
        let mut count = 0;
        let m = self.model;
        for w in 0..self.group().order() {
            for s in 0..m.rank() {
                count += 1;
                match (self.eu_zbar_s(w, s), self.eu_zbar_s_closed(w, s)) {
                    (Ok(a), Ok(b)) if a == b => {}
                    (a, b) => fails.push(format!("Euler classes at x=w{w}, s={s}: {a:?} vs {b:?}")),
                }
            }
        }
        for i in 0..m.ncomponents() {
            for s in 0..m.rank() {
                count += 1;
                let a = self.localize_sigma(i, s);
                let b = self.localize_op(&m.sigma(i, s));
                match (a, b) {
                    (Ok(a), Ok(b)) if a == b => {}
                    _ => fails.push(format!("localized σ_{i}({s}) differs from the multiplicity formula")),
                }
            }
        }
        Check::from_failures("sigma-localization", count, fails)
    }

    /// `Loc(σ_i(s)) Θ(f) = Θ(σ_i(s) f)` and likewise for `z_i(t)`, `1_i`.
    pub fn intertwining_check(&self, degree_bound: u32) -> Check {
        let m = self.model;
        let n = m.nvars();
        let nc = m.ncomponents();
        let monos = monomials(n, degree_bound);
        let mut fails = Vec::new();
        let mut count = 0;
        let mut gens: Vec<(String, usize, TwistedOperator, Option<FixedPointMatrix>)> = Vec::new();
        for i in 0..nc {
            for s in 0..m.rank() {
                let loc = self.localize_sigma(i, s).ok();
                gens.push((format!("σ_{i}({s})"), m.table().act_simple(i, s), m.sigma(i, s), loc));
            }
            for t in 0..n {
                gens.push((format!("z_{i}({t})"), i, m.var(i, t), None));
            }
            gens.push((format!("1_{i}"), i, m.unit(i), None));
        }
        for (name, src, op, loc) in gens {
            let loc = match loc.map(Ok).unwrap_or_else(|| self.localize_op(&op)) {
                Ok(l) => l,
                Err(e) => {
                    fails.push(format!("{name}: {e}"));
                    continue;
                }
            };
            for mono in &monos {
                count += 1;
                let f = ModuleElement::single(nc, src, Poly::monomial(mono.clone(), q(1)));
                let lhs = self.theta(&f).map(|v| self.fp_apply(&loc, &v));
                let rhs = m.apply(&op, &f).and_then(|r| self.theta(&r));
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) if a == b => {}
                    _ => fails.push(format!("{name} on monomial {mono:?}")),
                }
            }
        }
        Check::from_failures("intertwining", count, fails)
    }

    /// Sign law and power forms for Borel data.
    pub fn sign_and_power_check(&self) -> Check {
        let m = self.model;
        let g = self.group();
        let mut fails = Vec::new();
        let mut count = 0;
        for x in 0..g.order() {
            let i = m.table().coset_of(x);
            for s in 0..m.rank() {
                count += 1;
                let h = m.h(i, s) as i32;
                let xs = g.mul_simple_right(x, s);
                let xa = LinearProduct::weight(&g.act(x, m.simple_root(s))).unwrap();
                if self.inner(x, s) {
                    let sign = if h % 2 == 0 { -1 } else { 1 };
                    let want = self.lambda[xs].mul(&LinearProduct::constant(m.nvars(), q(sign)));
                    if self.lambda[x] != want {
                        fails.push(format!("sign law at x=w{x}, s={s}"));
                    }
                }
                if !m.data().is_borel() {
                    continue;
                }
                let exp = if self.inner(x, s) { 1 - h } else { -h };
                let want = xa.pow(exp).unwrap().mul(&self.lambda[x]);
                match self.eu_zbar_s(x, s) {
                    Ok((got, _)) if got == want => {}
                    _ => fails.push(format!("power form at x=w{x}, s={s}")),
                }
                match self.q_x(x, s) {
                    Ok(qx) if qx == m.q_factor(i, s).substitute(g.element(x)) => {}
                    _ => fails.push(format!("Q_x(s) != x(q_i(s)) at x=w{x}, s={s}")),
                }
            }
        }
        Check::from_failures("sign-and-power", count, fails)
    }

    /// `[Z̄^s] * [Z̄^w]` and `[Z̄^{sw}]` agree at every `(u, u·sw)` when
    /// `l(sw) = l(w) + 1`.
    pub fn leading_term_check(&self) -> Check {
        let g = self.group();
        let mut fails = Vec::new();
        let mut count = 0;
        for w in 0..g.order() {
            for s in 0..g.rank() {
                let sw = g.mul_simple_left(s, w);
                if g.length(sw) != g.length(w) + 1 {
                    continue;
                }
                for u in 0..g.order() {
                    count += 1;
                    let us = g.mul_simple_right(u, s);
                    let lhs = self.eu_zbar_w(u, g.simple(s)).and_then(|a| Ok(a.mul(&self.eu_zbar_w(us, w)?)));
                    let rhs = self.eu_zbar_w(u, sw).map(|c| c.mul(&self.lambda[us]));
                    match (lhs, rhs) {
                        (Ok(a), Ok(b)) if a == b => {}
                        _ => fails.push(format!("leading term at u=w{u}, s={s}, w=w{w}")),
                    }
                }
            }
        }
        Check::from_failures("leading-terms", count, fails)
    }

    /// `Θ(w·c)` at `ψ_x` matches `Θ(c)` at `ψ_{xw}` after `Λ`-normalization.
    pub fn theta_equivariance_check(&self, degree_bound: u32) -> Check {
        let m = self.model;
        let g = self.group();
        let nc = m.ncomponents();
        let mut fails = Vec::new();
        let mut count = 0;
        for mono in monomials(m.nvars(), degree_bound) {
            let f = Poly::monomial(mono.clone(), q(1));
            for i in 0..nc {
                let theta_c = match self.theta(&ModuleElement::single(nc, i, f.clone())) {
                    Ok(v) => v,
                    Err(e) => return Check::fail("theta-equivariance", json!({}), e.to_string()),
                };
                for w in 0..g.order() {
                    count += 1;
                    let j = m.act(i, g.inverse(w));
                    let wc = ModuleElement::single(nc, j, f.substitute_linear(g.element(w)));
                    let theta_wc = self.theta(&wc).unwrap();
                    for &x in m.table().members(j) {
                        let xw = g.mul(x, w);
                        let a = theta_wc.0.get(&x).map(|c| c.mul_lp(&self.lambda[x]));
                        let b = theta_c.0.get(&xw).map(|c| c.mul_lp(&self.lambda[xw]));
                        if m.table().coset_of(xw) != i || a != b {
                            fails.push(format!("monomial {mono:?}, i={i}, w=w{w}, x=w{x}"));
                        }
                    }
                }
            }
        }
        Check::from_failures("theta-equivariance", count, fails)
    }
}

/// `Phi_F(y) = Phi_F \ (Phi_F ∩ y Phi_F)` for `F` the positive or negative roots.
fn phi_f(group: &WeylGroup, positive: bool, y: usize) -> Multiset {
    let datum = group.datum();
    let mut out = Multiset::new();
    let yinv = group.inverse(y);
    for (r, v) in datum.roots().iter().enumerate() {
        if datum.is_positive_index(r) == positive && datum.is_positive_index(group.act_root(yinv, r)) != positive {
            out.insert(v.clone(), 1);
        }
    }
    out
}

fn translate(group: &WeylGroup, x: usize, ms: &Multiset) -> Multiset {
    let mut out = Multiset::new();
    for (w, m) in ms.iter() {
        out.insert(group.act(x, w), m);
    }
    out
}

/// `x Phi_F(sw) = x(s Phi_F(w) ⊔ Phi_F(s))` whenever `l(sw) = l(w) + 1`.
pub fn lemma18_check(group: &WeylGroup, sub: &SubSystem, positive: bool) -> Check {
    let mut fails = Vec::new();
    let mut count = 0;
    for w in 0..group.order() {
        for s in 0..group.rank() {
            let sw = group.mul_simple_left(s, w);
            if group.length(sw) != group.length(w) + 1 {
                continue;
            }
            let lhs = phi_f(group, positive, sw);
            let rhs = translate(group, group.simple(s), &phi_f(group, positive, w)).union(&phi_f(
                group,
                positive,
                group.simple(s),
            ));
            for &x in sub.elements() {
                count += 1;
                if translate(group, x, &lhs) != translate(group, x, &rhs) {
                    fails.push(format!("F={} at s={s}, w=w{w}, x=w{x}", if positive { "+" } else { "-" }));
                }
            }
        }
    }
    Check::from_failures(if positive { "lemma18-positive" } else { "lemma18-negative" }, count, fails)
}

/// `eu(M*) = (-1)^{|M|} eu(M)`.
pub fn dual_euler_holds(ms: &Multiset, nvars: usize) -> Result<bool> {
    let sign = if ms.total().is_multiple_of(2) { 1 } else { -1 };
    Ok(ms.dual().eu(nvars)? == ms.eu(nvars)?.mul(&LinearProduct::constant(nvars, q(sign))))
}

/// Negative of a weight multiset's weights, exposed for reporting.
pub fn negate(ms: &Multiset) -> Multiset {
    let mut out = Multiset::new();
    for (w, m) in ms.iter() {
        out.insert(neg(w), m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use crate::repdata::SpringerData;
    use crate::rootcore::{RootDatum, Weight};
    use crate::subgroup::{ConstraintKind, TorusConstraint};
    use std::collections::BTreeSet;

    fn model(label: &str, copies: usize, cons: Vec<TorusConstraint>) -> Model {
        let g = WeylGroup::new(RootDatum::from_label(label).unwrap()).unwrap();
        let all: BTreeSet<Weight> = g.datum().roots().iter().cloned().collect();
        let d = SpringerData::borel(&g, vec![all; copies]);
        Model::new(g, &cons, d).unwrap()
    }

    #[test]
    fn rank_one_values() {
        let m = model("A1", 0, vec![]);
        let l = Localizer::new(&m).unwrap();
        let a = LinearProduct::weight(&[1]).unwrap();
        assert_eq!(l.lambda(0), &a.neg());
        assert_eq!(l.lambda(1), &a);
        let (off, diag) = l.eu_zbar_s(0, 0).unwrap();
        assert_eq!(off, a.pow(2).unwrap().neg());
        assert_eq!(diag.unwrap(), a.pow(2).unwrap());
        let sk = model("A1", 1, vec![]);
        let l = Localizer::new(&sk).unwrap();
        assert_eq!(l.eu_zbar_s(0, 0).unwrap().0, *l.lambda(0));
    }

    #[test]
    fn tangent_weights_across_a_wall() {
        let m = model("B2", 0, vec![]);
        let g = m.group();
        for x in 0..g.order() {
            for s in 0..2 {
                let xs = g.mul_simple_right(x, s);
                let xa = LinearProduct::weight(&g.act(x, m.simple_root(s))).unwrap();
                assert_eq!(tangent_m(g, m.sub(), x, xs).eu(2).unwrap(), xa);
                assert_eq!(tangent_m(g, m.sub(), xs, x).eu(2).unwrap(), xa.neg());
            }
        }
    }

    #[test]
    fn checks_pass_on_small_models() {
        let half = TorusConstraint { kind: ConstraintKind::Torsion, values: vec![q_frac(1, 2), q(0)] };
        for m in [model("A2", 0, vec![]), model("B2", 1, vec![]), model("A2", 1, vec![half])] {
            let l = Localizer::new(&m).unwrap();
            for c in [
                l.sigma_localization_check(),
                l.intertwining_check(2),
                l.sign_and_power_check(),
                l.leading_term_check(),
                l.theta_equivariance_check(1),
            ] {
                assert!(c.passed, "{}: {:?}", c.name, c.counterexample);
            }
            assert!(lemma18_check(m.group(), m.sub(), true).passed);
            assert!(lemma18_check(m.group(), m.sub(), false).passed);
        }
    }

    #[test]
    fn unit_is_neutral() {
        let m = model("A2", 1, vec![]);
        let l = Localizer::new(&m).unwrap();
        let a = l.localize_sigma(0, 1).unwrap();
        let u = l.fp_unit().unwrap();
        assert_eq!(l.fp_mul(&u, &a), a);
        assert_eq!(l.fp_mul(&a, &u), a);
        let sq = l.fp_mul(&a, &a);
        let want = l.localize_op(&m.mul(&m.sigma(0, 1), &m.sigma(0, 1))).unwrap();
        assert_eq!(sq, want);
    }

    #[test]
    fn dual_euler() {
        let mut ms = Multiset::new();
        ms.insert(vec![1, 2], 3);
        assert!(dual_euler_holds(&ms, 2).unwrap());
        assert_eq!(negate(&ms), ms.dual());
    }
}
