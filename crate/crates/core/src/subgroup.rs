//! Torus-fixed subsystems, their Weyl groups, canonical coset
//! representatives and the combinatorial comparisons with the ambient group.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::report::Check;
use crate::rootcore::{neg, pair, WeylGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    /// Keeps roots with `<alpha, lambda>` integral.
    Torsion,
    /// Keeps roots with `<alpha, lambda> = 0`.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusConstraint {
    pub kind: ConstraintKind,
    pub values: Vec<Q>,
}

impl TorusConstraint {
    pub fn admits(&self, root: &[i64]) -> bool {
        let p = pair(root, &self.values);
        match self.kind {
            ConstraintKind::Torsion => p.is_integer(),
            ConstraintKind::Generic => p.is_zero(),
        }
    }
}

/// Closed subsystem `Phi` cut out by torus constraints, with its Weyl group `W`.
#[derive(Clone, Debug)]
pub struct SubSystem {
    in_phi: Vec<bool>,
    roots: Vec<usize>,
    positive: Vec<usize>,
    simple: Vec<usize>,
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl SubSystem {
    pub fn new(group: &WeylGroup, constraints: &[TorusConstraint]) -> Result<Self> {
        let datum = group.datum();
        for c in constraints {
            if c.values.len() != datum.ambient_rank() {
                return Err(Error::Config("torus constraint length differs from ambient rank".into()));
            }
        }
        let in_phi: Vec<bool> = datum.roots().iter().map(|r| constraints.iter().all(|c| c.admits(r))).collect();
        let roots: Vec<usize> = (0..in_phi.len()).filter(|&r| in_phi[r]).collect();
        let positive: Vec<usize> = roots.iter().copied().filter(|&r| datum.is_positive_index(r)).collect();
        let pos_set: BTreeSet<usize> = positive.iter().copied().collect();
        let mut decomposable = BTreeSet::new();
        for &a in &positive {
            for &b in &positive {
                let sum = crate::rootcore::add(&datum.roots()[a], &datum.roots()[b]);
                if let Some(c) = datum.root_index(&sum) {
                    if pos_set.contains(&c) {
                        decomposable.insert(c);
                    }
                }
            }
        }
        let simple: Vec<usize> = positive.iter().copied().filter(|r| !decomposable.contains(r)).collect();
        let mut member = vec![false; group.order()];
        member[0] = true;
        let mut stack = vec![0usize];
        while let Some(w) = stack.pop() {
            for &b in &simple {
                let u = group.mul(group.reflection(b), w);
                if !member[u] {
                    member[u] = true;
                    stack.push(u);
                }
            }
        }
        let elements = (0..group.order()).filter(|&w| member[w]).collect();
        Ok(SubSystem { in_phi, roots, positive, simple, elements, member })
    }

    /// Root indices of `Phi`.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn positive(&self) -> &[usize] {
        &self.positive
    }

    /// Root indices of the simple system of `Phi`.
    pub fn simple(&self) -> &[usize] {
        &self.simple
    }

    pub fn contains_root(&self, r: usize) -> bool {
        self.in_phi[r]
    }

    /// Elements of `W` in canonical group order.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, w: usize) -> bool {
        self.member[w]
    }

    /// Membership by descent: strip simple reflections of `W` while they
    /// shorten `w`; `w` lies in `W` iff this reaches the identity.
    pub fn member_by_descent(&self, group: &WeylGroup, mut w: usize) -> bool {
        let datum = group.datum();
        loop {
            if w == 0 {
                return true;
            }
            let step = self.simple.iter().find(|&&b| !datum.is_positive_index(group.act_root(w, b)));
            match step {
                Some(&b) => w = group.mul(w, group.reflection(b)),
                None => return false,
            }
        }
    }

    /// Length of `w in W` relative to the simple system of `Phi`.
    pub fn length(&self, group: &WeylGroup, w: usize) -> usize {
        let datum = group.datum();
        self.positive.iter().filter(|&&b| !datum.is_positive_index(group.act_root(w, b))).count()
    }

    /// Simple reflections of `W` as group elements.
    pub fn simple_reflections(&self, group: &WeylGroup) -> Vec<usize> {
        self.simple.iter().map(|&b| group.reflection(b)).collect()
    }
}

/// Right cosets `W x` with canonical representatives satisfying
/// `Phi ∩ x(Phi_big^+) = Phi^+`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    reps: Vec<usize>,
    coset_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    simple_action: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn new(group: &WeylGroup, sub: &SubSystem) -> Result<Self> {
        let mut rep_of = Vec::with_capacity(group.order());
        for w in 0..group.order() {
            rep_of.push(canonical_rep(group, sub, w)?);
        }
        let reps: Vec<usize> = rep_of.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let coset_of: Vec<usize> = rep_of.iter().map(|x| pos[x]).collect();
        let mut members = vec![Vec::new(); reps.len()];
        for (w, &i) in coset_of.iter().enumerate() {
            members[i].push(w);
        }
        let simple_action =
            reps.iter().map(|&x| (0..group.rank()).map(|s| coset_of[group.mul_simple_right(x, s)]).collect()).collect();
        Ok(CosetTable { reps, coset_of, members, simple_action })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: usize) -> usize {
        self.reps[i]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn coset_of(&self, w: usize) -> usize {
        self.coset_of[w]
    }

    /// Elements of `W x_i` in canonical group order.
    pub fn members(&self, i: usize) -> &[usize] {
        &self.members[i]
    }

    /// `i · s` for a simple reflection.
    pub fn act_simple(&self, i: usize, s: usize) -> usize {
        self.simple_action[i][s]
    }

    /// `i · w` for any group element.
    pub fn act(&self, group: &WeylGroup, i: usize, w: usize) -> usize {
        group.reduced_word(w).iter().fold(i, |j, &s| self.simple_action[j][s])
    }

    pub fn stabilizes(&self, i: usize, s: usize) -> bool {
        self.act_simple(i, s) == i
    }
}

/// Canonical representative of the coset `W y`.
pub fn canonical_rep(group: &WeylGroup, sub: &SubSystem, y: usize) -> Result<usize> {
    let datum = group.datum();
    let yinv = group.inverse(y);
    let mut p: BTreeSet<usize> =
        sub.roots().iter().copied().filter(|&r| datum.is_positive_index(group.act_root(yinv, r))).collect();
    let mut y = y;
    let mut steps = 0;
    loop {
        let bad = sub.simple().iter().copied().find(|&b| {
            let nb = datum.root_index(&neg(&datum.roots()[b])).unwrap();
            p.contains(&nb)
        });
        let Some(b) = bad else { return Ok(y) };
        steps += 1;
        if steps > sub.positive().len() {
            return Err(Error::NonCanonicalizable(y));
        }
        let sb = group.reflection(b);
        y = group.mul(sb, y);
        p = p.iter().map(|&r| group.act_root(sb, r)).collect();
    }
}

/// `Phi ∩ x(Phi_big^+) = Phi^+`.
pub fn is_canonical(group: &WeylGroup, sub: &SubSystem, x: usize) -> bool {
    let datum = group.datum();
    let xinv = group.inverse(x);
    sub.roots().iter().all(|&r| datum.is_positive_index(group.act_root(xinv, r)) == datum.is_positive_index(r))
}

pub fn canonical_reps_check(group: &WeylGroup, sub: &SubSystem, table: &CosetTable) -> Check {
    let mut failures = Vec::new();
    for i in 0..table.len() {
        let canon: Vec<usize> = table.members(i).iter().copied().filter(|&w| is_canonical(group, sub, w)).collect();
        if canon != [table.rep(i)] {
            failures.push(format!("coset {i}: canonical members {canon:?}"));
        }
        if table.members(i).len() != sub.order() {
            failures.push(format!("coset {i} has {} elements", table.members(i).len()));
        }
    }
    if table.len() * sub.order() != group.order() {
        failures.push("cosets do not partition the group".into());
    }
    Check::from_failures("canonical-reps", table.len(), failures)
}

pub fn wall_crossing_check(group: &WeylGroup, table: &CosetTable) -> Check {
    let mut failures = Vec::new();
    let mut checked = 0;
    for i in 0..table.len() {
        for s in 0..group.rank() {
            let j = table.act_simple(i, s);
            if j != i {
                checked += 1;
                if table.rep(j) != group.mul_simple_right(table.rep(i), s) {
                    failures.push(format!("x_(i s) != x_i s at i={i}, s={s}"));
                }
            }
        }
    }
    Check::from_failures("wall-crossing-reps", checked, failures)
}

/// `l_S <= l` on `W`, and every simple reflection of the ambient group lying
/// in `W` is simple for `W`.
pub fn length_comparison_check(group: &WeylGroup, sub: &SubSystem) -> Check {
    let mut failures = Vec::new();
    for &w in sub.elements() {
        if sub.length(group, w) > group.length(w) {
            failures.push(format!("l_S(w) > l(w) at element {w}"));
        }
    }
    let simple_refl: BTreeSet<usize> = sub.simple_reflections(group).into_iter().collect();
    for s in 0..group.rank() {
        let g = group.simple(s);
        if sub.contains(g) && !simple_refl.contains(&g) {
            failures.push(format!("simple reflection {s} lies in W but is not simple there"));
        }
    }
    Check::from_failures("length-comparison", sub.order(), failures)
}

/// Whether every reduced word of every simple reflection of `W` lies
/// entirely inside or entirely outside `J`.
pub fn s_adapted(group: &WeylGroup, sub: &SubSystem, j: &BTreeSet<usize>) -> bool {
    let mut memo: HashMap<usize, u8> = HashMap::new();
    sub.simple_reflections(group).into_iter().all(|g| letter_flags(group, j, g, &mut memo) & (1 << 3) == 0)
}

/// Bitset over flag states `{has J letter, has other letter}` reachable by
/// reduced words of `w`.
fn letter_flags(group: &WeylGroup, j: &BTreeSet<usize>, w: usize, memo: &mut HashMap<usize, u8>) -> u8 {
    if w == 0 {
        return 1;
    }
    if let Some(&f) = memo.get(&w) {
        return f;
    }
    let mut out = 0u8;
    for s in 0..group.rank() {
        if group.is_right_descent(w, s) {
            let prev = letter_flags(group, j, group.mul_simple_right(w, s), memo);
            let bit = if j.contains(&s) { 1 } else { 2 };
            for state in 0..4 {
                if prev >> state & 1 == 1 {
                    out |= 1 << (state | bit);
                }
            }
        }
    }
    memo.insert(w, out);
    out
}

fn support(group: &WeylGroup, w: usize) -> BTreeSet<usize> {
    group.reduced_word(w).iter().copied().collect()
}

fn in_parabolic(group: &WeylGroup, j: &BTreeSet<usize>, w: usize) -> bool {
    support(group, w).is_subset(j)
}

fn min_coset_rep(group: &WeylGroup, j: &BTreeSet<usize>, mut w: usize) -> usize {
    while let Some(&s) = j.iter().find(|&&s| group.is_right_descent(w, s)) {
        w = group.mul_simple_right(w, s);
    }
    w
}

fn in_min_reps(group: &WeylGroup, j: &BTreeSet<usize>, w: usize) -> bool {
    j.iter().all(|&s| !group.is_right_descent(w, s))
}

fn in_sub_min_reps(group: &WeylGroup, l: &[usize], w: usize) -> bool {
    l.iter().all(|&b| group.datum().is_positive_index(group.act_root(w, b)))
}

/// Parabolic factorization and double-coset comparison for `S`-adapted `J`, `K`.
pub fn factorization_check(group: &WeylGroup, sub: &SubSystem, j: &BTreeSet<usize>, k: &BTreeSet<usize>) -> Check {
    let mut failures = Vec::new();
    let simple_of = |set: &BTreeSet<usize>| -> Vec<usize> {
        sub.simple().iter().copied().filter(|&b| in_parabolic(group, set, group.reflection(b))).collect()
    };
    let l = simple_of(j);
    let m = simple_of(k);
    for &w in sub.elements() {
        let wj = min_coset_rep(group, j, w);
        let w_j = group.mul(group.inverse(wj), w);
        if !sub.contains(wj) || !sub.contains(w_j) {
            failures.push(format!("factor of {w} leaves W"));
        }
        if in_min_reps(group, j, w) != in_sub_min_reps(group, &l, w) {
            failures.push(format!("W^L and W ∩ W_big^J differ at {w}"));
        }
        let big = in_min_reps(group, j, group.inverse(w)) && in_min_reps(group, k, w);
        let small = in_sub_min_reps(group, &l, group.inverse(w)) && in_sub_min_reps(group, &m, w);
        if big != small {
            failures.push(format!("double coset representatives differ at {w}"));
        }
    }
    let mut c = Check::from_failures("factorization", sub.order(), failures);
    c.details["J"] = json!(j);
    c.details["K"] = json!(k);
    c
}

/// Runs the factorization check over every pair of `S`-adapted subsets.
pub fn factorization_check_all(group: &WeylGroup, sub: &SubSystem) -> Check {
    let r = group.rank();
    let adapted: Vec<BTreeSet<usize>> = (0u32..1 << r)
        .map(|mask| (0..r).filter(|s| mask >> s & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|j| s_adapted(group, sub, j))
        .collect();
    let mut failures = Vec::new();
    for j in &adapted {
        for k in &adapted {
            let c = factorization_check(group, sub, j, k);
            if let Some(ce) = c.counterexample {
                failures.push(format!("J={j:?} K={k:?}: {ce}"));
            }
        }
    }
    let mut c = Check::from_failures("factorization", adapted.len() * adapted.len(), failures);
    c.details["adapted_subsets"] = json!(adapted.len());
    c
}
