//! Acceptance suite: one pass/fail line per criterion.

use std::time::{Duration, Instant};

use quiverhecke::algebra::{closed_forms, monomials};
use quiverhecke::localize::lemma18_check;
use quiverhecke::poly::demazure;
use quiverhecke::rational::q;
use quiverhecke::subgroup::{
    canonical_reps_check, factorization_check_all, length_comparison_check, wall_crossing_check,
};
use quiverhecke::{
    klr, klr_oracle_check, nilhecke, skew, Check, Config, Localizer, Model, ModuleElement, Poly, QuiverSpec, RatFun,
    TwistedOperator,
};

struct Named {
    name: String,
    model: Model,
}

fn named(name: &str, config: Config) -> Named {
    let model = config.to_model().unwrap_or_else(|e| panic!("{name}: {e}"));
    Named { name: name.to_string(), model }
}

fn arrow(d1: usize, d2: usize) -> QuiverSpec {
    QuiverSpec::new(&["1", "2"], &[("1", "2")], &[d1, d2])
}

fn jordan(d: usize) -> QuiverSpec {
    QuiverSpec::new(&["1"], &[("1", "1")], &[d])
}

const A2_HALF: &str = r#"{
    "group": {"label": "A2"},
    "torus": [{"kind": "torsion", "values": ["1/2", "0"]}],
    "springer": {"r": 1, "u_sets": ["positive_roots"], "v_sets": [[[1, 0], [-1, 0], [1, 1], [-1, -1]]]}
}"#;

const B2_TWO_COPIES: &str = r#"{
    "group": {"label": "B2"},
    "springer": {"r": 2, "u_sets": ["positive_roots", "positive_roots"], "v_sets": ["all_roots", "all_roots"]}
}"#;

const B2_HALF: &str = r#"{
    "group": {"label": "B2"},
    "torus": [{"kind": "torsion", "values": ["1/2", "0"]}],
    "springer": {"r": 1, "u_sets": ["positive_roots"], "v_sets": [[[1, 0], [-1, 0], [1, 1], [-1, -1]]]}
}"#;

/// Every configuration with at most 48 group elements used by the suite.
fn suite_configs() -> Vec<Named> {
    let mut out = Vec::new();
    for l in ["A1", "A2", "A3", "B2", "G2", "B3", "C3"] {
        out.push(named(&format!("nilhecke {l}"), nilhecke(l).unwrap()));
    }
    for l in ["A2", "B2", "G2"] {
        out.push(named(&format!("skew {l}"), skew(l).unwrap()));
    }
    for (name, q) in [
        ("klr 1->2 (1,1)", arrow(1, 1)),
        ("klr 1->2 (2,1)", arrow(2, 1)),
        ("klr 1->2 (2,2)", arrow(2, 2)),
        ("klr loop (2)", jordan(2)),
        ("klr loop (3)", jordan(3)),
        ("klr loop (4)", jordan(4)),
        ("klr 1->2 + loop at 1 (2,1)", QuiverSpec::new(&["1", "2"], &[("1", "2"), ("1", "1")], &[2, 1])),
        ("klr 1<->2 (1,2)", QuiverSpec::new(&["1", "2"], &[("1", "2"), ("2", "1")], &[1, 2])),
    ] {
        out.push(named(name, klr(&q).unwrap()));
    }
    out.push(named("A2 half-integral", Config::parse(A2_HALF).unwrap()));
    out.push(named("B2 half-integral", Config::parse(B2_HALF).unwrap()));
    out.push(named("B2 two copies", Config::parse(B2_TWO_COPIES).unwrap()));
    for n in &out {
        assert!(n.model.group().order() <= 48, "{} exceeds the size bound", n.name);
    }
    out
}

struct Line {
    failures: Vec<String>,
    checked: usize,
    limit: Option<Duration>,
    start: Instant,
}

impl Line {
    fn new(limit: Option<Duration>) -> Self {
        Line { failures: Vec::new(), checked: 0, limit, start: Instant::now() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn checks(&mut self, cfg: &str, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.expect(c.passed, || format!("{cfg}: {} ({})", c.name, c.counterexample.clone().unwrap_or_default()));
        }
    }

    fn finish(self, n: usize, title: &str) -> bool {
        let elapsed = self.start.elapsed();
        let mut failures = self.failures;
        if let Some(limit) = self.limit {
            if elapsed > limit {
                failures.push(format!("took {:.2?}, limit {:.0?}", elapsed, limit));
            }
        }
        let ok = failures.is_empty();
        println!(
            "criterion {n} {:<24} {}  ({} checks, {:.2?}){}",
            title,
            if ok { "PASS" } else { "FAIL" },
            self.checked,
            elapsed,
            failures.first().map(|f| format!("  first failure: {f}")).unwrap_or_default()
        );
        ok
    }
}

fn alt(s: usize, t: usize, len: usize) -> Vec<usize> {
    (0..len).map(|k| if k % 2 == 0 { s } else { t }).collect()
}

fn monomial(m: &[u32]) -> Poly {
    Poly::monomial(m.to_vec(), q(1))
}

fn nilhecke_suite() -> bool {
    let mut line = Line::new(None);
    for l in ["A2", "B2", "G2"] {
        let start = Instant::now();
        let m = nilhecke(l).unwrap().to_model().unwrap();
        let g = m.group();
        let monos = monomials(m.nvars(), 4);
        for s in 0..m.rank() {
            let sq = m.mul(&m.sigma(0, s), &m.sigma(0, s));
            line.expect(sq.is_zero(), || format!("{l}: σ({s})² = {sq}"));
            let sm = g.element(g.simple(s));
            for mono in &monos {
                let f = monomial(mono);
                let got = m.apply(&m.sigma(0, s), &ModuleElement::single(1, 0, f.clone())).unwrap();
                let want = demazure(&f, sm, m.simple_root(s)).unwrap();
                line.expect(got.component(0) == &want, || format!("{l}: σ({s}) differs from ∂ on {mono:?}"));
            }
            for t in s + 1..m.rank() {
                let mm = g.braid_order(s, t);
                let lhs = m.sigma_word(0, &alt(s, t, mm));
                let rhs = m.sigma_word(0, &alt(t, s, mm));
                line.expect(lhs == rhs, || format!("{l}: braid ({s},{t}) fails"));
                let d = m.braid_defect(0, s, t).unwrap();
                line.expect(d.is_zero(), || format!("{l}: nonzero braid defect at ({s},{t})"));
            }
        }
        let took = start.elapsed();
        line.expect(took < Duration::from_secs(10), || format!("{l}: took {took:.2?}"));
    }
    line.finish(1, "nil-Hecke")
}

fn skew_suite() -> bool {
    let mut line = Line::new(Some(Duration::from_secs(30)));
    for l in ["A2", "B2"] {
        let m = skew(l).unwrap().to_model().unwrap();
        let g = m.group();
        let monos = monomials(m.nvars(), 4);
        let one = m.identity();
        for s in 0..m.rank() {
            let sig = m.sigma_total(s);
            let sq = m.mul(&sig, &sig);
            line.expect(sq == sig.scale(&q(-2)), || format!("{l}: σ({s})² != -2σ({s})"));
            let shifted = &sig + &one;
            for mono in &monos {
                let f = monomial(mono);
                let got = m.apply(&shifted, &ModuleElement::single(1, 0, f.clone())).unwrap();
                let want = f.substitute_linear(g.element(g.simple(s)));
                line.expect(got.component(0) == &want, || format!("{l}: σ({s})+1 is not s on {mono:?}"));
            }
        }
        for s in 0..m.rank() {
            for t in s + 1..m.rank() {
                let pair = m.mul(&(&m.sigma_total(s) + &one), &(&m.sigma_total(t) + &one));
                let mut op = one.clone();
                for _ in 0..g.braid_order(s, t) {
                    op = m.mul(&op, &pair);
                }
                for mono in &monos {
                    let f = monomial(mono);
                    let got = m.apply(&op, &ModuleElement::single(1, 0, f.clone())).unwrap();
                    line.expect(got.component(0) == &f, || format!("{l}: ((σ+1)(σ+1))^m moves {mono:?}"));
                }
            }
        }
    }
    line.finish(2, "skew group ring")
}

fn relation_suite(configs: &[Named]) -> bool {
    let mut line = Line::new(Some(Duration::from_secs(120)));
    for c in configs {
        let checks = c.model.check_relations();
        for ch in &checks {
            if ch.name == "quadratic" {
                line.expect(ch.details.get("skipped").is_none(), || {
                    format!("{}: quadratic closed form skipped", c.name)
                });
            }
        }
        line.checks(&c.name, checks);
        let m = &c.model;
        for i in 0..m.ncomponents() {
            for s in 0..m.rank() {
                let is = m.table().act_simple(i, s);
                let prod = m.mul(&m.sigma(i, s), &m.sigma(is, s));
                line.expect(prod == m.quadratic_closed_form(i, s), || format!("{}: quadratic at i={i}, s={s}", c.name));
            }
        }
    }
    line.finish(3, "relations")
}

fn braid_suite(configs: &[Named]) -> bool {
    let mut line = Line::new(None);
    let mut seen = [0usize; 7];
    for c in configs {
        let m = &c.model;
        let g = m.group();
        for s in 0..m.rank() {
            for t in s + 1..m.rank() {
                let mm = g.braid_order(s, t);
                if mm < 3 {
                    continue;
                }
                seen[mm] += 1;
                for i in 0..m.ncomponents() {
                    let d = match m.braid_defect(i, s, t) {
                        Ok(d) => d,
                        Err(e) => {
                            line.expect(false, || format!("{}: extraction at i={i}, ({s},{t}): {e}", c.name));
                            continue;
                        }
                    };
                    let delta = &m.sigma_word(i, &alt(s, t, mm)) - &m.sigma_word(i, &alt(t, s, mm));
                    let rebuilt = d.coefficients.iter().fold(TwistedOperator::zero(m.nvars()), |acc, q| {
                        &acc + &m.sigma_word(i, &q.word).left_mul(i, &q.value)
                    });
                    line.expect(rebuilt == delta, || format!("{}: nonzero remainder at i={i}, ({s},{t})", c.name));
                    if d.assumption_holds {
                        line.expect(d.all_polynomial, || format!("{}: rational Q_w at i={i}, ({s},{t})", c.name));
                    }
                    if !(m.stabilizes(i, s) && m.stabilizes(i, t)) {
                        continue;
                    }
                    let (hs, ht) = (m.h(i, s), m.h(i, t));
                    if mm == 3 && hs == ht {
                        let (qs, qt) = closed_forms::a1(m, s, t, hs);
                        let ok = d.coefficient(&[s]) == Some(&RatFun::from_poly(qs))
                            && d.coefficient(&[t]) == Some(&RatFun::from_poly(qt));
                        line.expect(ok, || format!("{}: A1 closed form at i={i}, ({s},{t})", c.name));
                    }
                    if mm == 4 {
                        let want = RatFun::from_poly(closed_forms::b1(m, s, t, hs, ht));
                        let ok = d.coefficient(&[s, t]) == Some(&want) && d.coefficient(&[t, s]) == Some(&-&want);
                        line.expect(ok, || format!("{}: B1 closed form at i={i}, ({s},{t})", c.name));
                    }
                }
            }
        }
    }
    for mm in [3, 4, 6] {
        line.expect(seen[mm] > 0, || format!("no pair with m = {mm} in the suite"));
    }
    let m = skew("A2").unwrap().to_model().unwrap();
    let d = m.braid_defect(0, 0, 1).unwrap();
    let ok = d.coefficient(&[0]) == Some(&RatFun::constant(2, q(1)))
        && d.coefficient(&[1]) == Some(&RatFun::constant(2, q(-1)));
    line.expect(ok, || "skew A2: expected Q_s = 1, Q_t = -1".into());
    line.finish(4, "braid defects")
}

fn localization_suite(configs: &[Named]) -> bool {
    let mut line = Line::new(Some(Duration::from_secs(120)));
    for c in configs {
        let l = Localizer::new(&c.model).unwrap();
        line.checks(&c.name, [l.sigma_localization_check(), l.intertwining_check(3)]);
        for i in 0..c.model.ncomponents() {
            for t in 0..c.model.nvars() {
                let op = c.model.var(i, t);
                let a = l.localize_op(&op).unwrap();
                let b = l.localize_op(&c.model.mul(&op, &c.model.unit(i))).unwrap();
                line.expect(a == b, || format!("{}: z localization at i={i}", c.name));
            }
        }
    }
    line.finish(5, "localization")
}

fn euler_suite(configs: &[Named]) -> bool {
    let mut line = Line::new(None);
    for c in configs {
        let m = &c.model;
        let l = Localizer::new(m).unwrap();
        line.checks(
            &c.name,
            [
                l.sign_and_power_check(),
                l.leading_term_check(),
                lemma18_check(m.group(), m.sub(), true),
                lemma18_check(m.group(), m.sub(), false),
            ],
        );
    }
    line.finish(6, "Euler identities")
}

fn oracle_suite() -> bool {
    let mut line = Line::new(None);
    for (name, q) in [("1->2 (1,1)", arrow(1, 1)), ("1->2 (2,1)", arrow(2, 1)), ("loop (2)", jordan(2))] {
        match klr_oracle_check(&q) {
            Ok(checks) => line.checks(name, checks),
            Err(e) => line.expect(false, || format!("{name}: {e}")),
        }
    }
    line.finish(7, "quiver Hecke oracle")
}

fn combinatorics_suite(configs: &[Named]) -> bool {
    let mut line = Line::new(None);
    let mut extra = Vec::new();
    for (label, values) in [
        ("G2", r#"["1/3", "0"]"#),
        ("G2", r#"["1/2", "0"]"#),
        ("B3", r#"["1/2", "0", "0"]"#),
        ("B3", r#"["0", "0", "1/2"]"#),
        ("C3", r#"["0", "0", "1/2"]"#),
        ("A3", r#"["1/2", "0", "1/2"]"#),
        ("A3", r#"["1/3", "1/3", "0"]"#),
    ] {
        let text =
            format!(r#"{{"group": {{"label": "{label}"}}, "torus": [{{"kind": "torsion", "values": {values}}}]}}"#);
        extra.push(named(&format!("{label} torsion {values}"), Config::parse(&text).unwrap()));
    }
    for c in configs.iter().chain(&extra) {
        let m = &c.model;
        let (g, sub, table) = (m.group(), m.sub(), m.table());
        line.checks(
            &c.name,
            [
                canonical_reps_check(g, sub, table),
                wall_crossing_check(g, table),
                length_comparison_check(g, sub),
                factorization_check_all(g, sub),
            ],
        );
        let d = g.datum();
        for i in 0..table.len() {
            let canonical: Vec<usize> = table
                .members(i)
                .iter()
                .copied()
                .filter(|&x| {
                    let xi = g.inverse(x);
                    sub.roots().iter().all(|&r| d.is_positive_index(r) == d.is_positive_index(g.act_root(xi, r)))
                })
                .collect();
            line.expect(canonical == vec![table.rep(i)], || {
                format!("{}: coset {i} canonical set {canonical:?}", c.name)
            });
            for s in 0..g.rank() {
                let is = table.act_simple(i, s);
                if is != i {
                    let xs = g.mul_simple_right(table.rep(i), s);
                    line.expect(table.rep(is) == xs, || format!("{}: x_(is) != x_i s at i={i}, s={s}", c.name));
                }
            }
        }
        let w_simple = sub.simple_reflections(g);
        for s in 0..g.rank() {
            if sub.contains(g.simple(s)) {
                line.expect(w_simple.contains(&g.simple(s)), || format!("{}: s{s} in W but not simple", c.name));
            }
        }
    }
    line.finish(8, "combinatorics")
}

fn grading_suite(configs: &[Named]) -> bool {
    let mut line = Line::new(None);
    for c in configs {
        let m = &c.model;
        line.checks(&c.name, [m.grading_check()]);
        for i in 0..m.ncomponents() {
            line.expect(m.operator_degree(&m.unit(i)) == Some(0), || format!("{}: deg 1_{i}", c.name));
            for t in 0..m.nvars() {
                line.expect(m.operator_degree(&m.var(i, t)) == Some(2), || format!("{}: deg z_{i}({t})", c.name));
            }
            for s in 0..m.rank() {
                let h = m.h(i, s) as i64;
                let want = if m.stabilizes(i, s) { 2 * h - 2 } else { 2 * h };
                let got = m.operator_degree(&m.sigma(i, s));
                line.expect(got == Some(want), || format!("{}: deg σ_{i}({s}) = {got:?}, want {want}", c.name));
            }
        }
    }
    line.finish(9, "grading")
}

fn main() {
    let configs = suite_configs();
    let results = [
        nilhecke_suite(),
        skew_suite(),
        relation_suite(&configs),
        braid_suite(&configs),
        localization_suite(&configs),
        euler_suite(&configs),
        oracle_suite(),
        combinatorics_suite(&configs),
        grading_suite(&configs),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
