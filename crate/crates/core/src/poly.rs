//! Polynomials over exact rationals, linear forms, Laurent products of linear
//! forms and rational functions whose denominators are such products.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::rootcore::WeylElement;

pub type Monomial = Vec<u32>;

/// Polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// The coordinate function of index `k` (0-based).
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut m = vec![0; nvars];
        m[k] = 1;
        Poly::monomial(m, Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero(m.len());
        p.add_term(m, c);
        p
    }

    /// The linear form with the given coefficient vector.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut m = vec![0; n];
                m[k] = 1;
                p.add_term(m, q(c));
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Constant value when the polynomial has degree at most zero.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Largest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Common total degree of all terms; `None` if zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Terms sorted by descending total degree, then descending lexicographic exponent.
    pub fn graded_terms(&self) -> Vec<(Monomial, Q)> {
        let mut v: Vec<(Monomial, Q)> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    /// Ring map sending the coordinate `k` to the `k`-th column of `w`.
    pub fn substitute_linear(&self, w: &WeylElement) -> Self {
        let n = self.nvars;
        assert_eq!(w.dim(), n);
        let cols: Vec<Vec<i64>> = (0..n).map(|k| w.column(k)).collect();
        let signed_perm: Option<Vec<(usize, i64)>> = cols
            .iter()
            .map(|c| {
                let nz: Vec<usize> = (0..n).filter(|&j| c[j] != 0).collect();
                (nz.len() == 1 && c[nz[0]].abs() == 1).then(|| (nz[0], c[nz[0]]))
            })
            .collect();
        if let Some(perm) = signed_perm {
            let mut out = Poly::zero(n);
            for (m, c) in &self.terms {
                let mut nm = vec![0; n];
                let mut sign = 1i64;
                for (k, &e) in m.iter().enumerate() {
                    let (j, sg) = perm[k];
                    nm[j] += e;
                    if sg < 0 && e % 2 == 1 {
                        sign = -sign;
                    }
                }
                out.add_term(nm, if sign < 0 { -c.clone() } else { c.clone() });
            }
            return out;
        }
        let images: Vec<Poly> = cols.iter().map(|c| Poly::linear(c)).collect();
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(n), p.clone()]).collect();
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (k, &e) in m.iter().enumerate() {
                let e = e as usize;
                while powers[k].len() <= e {
                    let next = powers[k].last().unwrap() * &images[k];
                    powers[k].push(next);
                }
                if e > 0 {
                    t = &t * &powers[k][e];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient by a linear form, or `None` if it does not divide.
    pub fn div_linear(&self, l: &LinForm) -> Option<Poly> {
        let j = l.lead();
        let cj = q(l.coeffs[j]);
        let mut f = self.clone();
        let mut quo = Poly::zero(self.nvars);
        while let Some((m, c)) = f.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if m[j] == 0 {
                return None;
            }
            let mut mq = m.clone();
            mq[j] -= 1;
            let a = &c / &cj;
            for (k, &lk) in l.coeffs.iter().enumerate() {
                if lk != 0 {
                    let mut mk = mq.clone();
                    mk[k] += 1;
                    f.add_term(mk, -(&a * q(lk)));
                }
            }
            quo.add_term(mq, a);
        }
        Some(quo)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc + t
        })
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(Poly);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.graded_terms().iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("e{}", i + 1) } else { format!("e{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Nonzero primitive integer linear form whose first nonzero coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinForm {
    coeffs: Vec<i64>,
}

impl LinForm {
    /// Splits `v` as `c * form`; `None` for the zero vector.
    pub fn normalize(v: &[i64]) -> Option<(i64, LinForm)> {
        let j = v.iter().position(|&x| x != 0)?;
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        let c = if v[j] < 0 { -g } else { g };
        Some((c, LinForm { coeffs: v.iter().map(|x| x / c).collect() }))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn lead(&self) -> usize {
        self.coeffs.iter().position(|&x| x != 0).unwrap()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(&self.coeffs)
    }
}

/// `scalar * prod form^exp` with integer (possibly negative) exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearProduct {
    nvars: usize,
    scalar: Q,
    factors: BTreeMap<LinForm, i32>,
}

impl LinearProduct {
    pub fn constant(nvars: usize, c: Q) -> Self {
        LinearProduct { nvars, scalar: c, factors: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        LinearProduct::constant(nvars, Q::one())
    }

    /// The linear form of a weight.
    pub fn weight(v: &[i64]) -> Result<Self> {
        let (c, f) = LinForm::normalize(v).ok_or(Error::ZeroWeight)?;
        Ok(LinearProduct { nvars: v.len(), scalar: q(c), factors: BTreeMap::from([(f, 1)]) })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn scalar(&self) -> &Q {
        &self.scalar
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LinForm, i32)> {
        self.factors.iter().map(|(f, &e)| (f, e))
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Sum of exponents, i.e. polynomial degree of numerator minus denominator.
    pub fn degree(&self) -> i32 {
        self.factors.values().sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.values().all(|&e| e >= 0)
    }

    pub fn mul(&self, o: &LinearProduct) -> LinearProduct {
        let mut out = self.clone();
        out.scalar *= &o.scalar;
        if out.scalar.is_zero() {
            out.factors.clear();
            return out;
        }
        for (f, &e) in &o.factors {
            let x = out.factors.entry(f.clone()).or_insert(0);
            *x += e;
            if *x == 0 {
                out.factors.remove(f);
            }
        }
        out
    }

    pub fn neg(&self) -> LinearProduct {
        let mut out = self.clone();
        out.scalar = -out.scalar;
        out
    }

    pub fn inv(&self) -> Result<LinearProduct> {
        if self.is_zero() {
            return Err(Error::ZeroEulerClass);
        }
        Ok(LinearProduct {
            nvars: self.nvars,
            scalar: Q::one() / &self.scalar,
            factors: self.factors.iter().map(|(f, &e)| (f.clone(), -e)).collect(),
        })
    }

    pub fn pow(&self, e: i32) -> Result<LinearProduct> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = LinearProduct::one(self.nvars);
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn substitute(&self, w: &WeylElement) -> LinearProduct {
        let mut out = LinearProduct::constant(self.nvars, self.scalar.clone());
        for (f, &e) in &self.factors {
            let (c, g) = LinForm::normalize(&w.apply(&f.coeffs)).expect("invertible map");
            let cq = q(c);
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    out.scalar *= &cq;
                } else {
                    out.scalar /= &cq;
                }
            }
            *out.factors.entry(g).or_insert(0) += e;
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    pub fn to_ratfun(&self) -> RatFun {
        let mut num = Poly::constant(self.nvars, self.scalar.clone());
        let mut den = BTreeMap::new();
        for (f, &e) in &self.factors {
            if e > 0 {
                num = &num * &f.to_poly().pow(e as u32);
            } else {
                den.insert(f.clone(), e.unsigned_abs());
            }
        }
        RatFun { num, den }
    }

    pub fn to_poly(&self) -> Option<Poly> {
        self.is_polynomial().then(|| self.to_ratfun().num)
    }
}

/// Polynomial numerator over a product of linear forms, kept reduced:
/// no denominator factor divides the numerator.
#[derive(Clone, Debug, Eq)]
pub struct RatFun {
    num: Poly,
    den: BTreeMap<LinForm, u32>,
}

impl RatFun {
    pub fn zero(nvars: usize) -> Self {
        RatFun::from_poly(Poly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        RatFun::from_poly(Poly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        RatFun::from_poly(Poly::constant(nvars, c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: BTreeMap::new() }
    }

    /// `num / den`; the denominator must be a nonzero product of linear forms.
    pub fn new(num: Poly, den: &LinearProduct) -> Result<Self> {
        Ok(RatFun::from_poly(num).mul_lp(&den.inv().map_err(|_| Error::DivisionByZeroDenominator)?))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::one(self.nvars()), |acc, (f, &e)| &acc * &f.to_poly().pow(e))
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&LinForm, u32)> {
        self.den.iter().map(|(f, &e)| (f, e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn to_poly(&self) -> Option<Poly> {
        self.is_polynomial().then(|| self.num.clone())
    }

    /// Degree of a homogeneous rational function.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let d = self.num.homogeneous_degree()? as i64;
        Some(d - self.den.values().map(|&e| e as i64).sum::<i64>())
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<LinForm> = self.den.keys().cloned().collect();
        for f in keys {
            let e = self.den.get_mut(&f).unwrap();
            while *e > 0 {
                match self.num.div_linear(&f) {
                    Some(qt) => {
                        self.num = qt;
                        *e -= 1;
                    }
                    None => break,
                }
            }
            if *e == 0 {
                self.den.remove(&f);
            }
        }
        self
    }

    pub fn scale(&self, c: &Q) -> Self {
        RatFun { num: self.num.scale(c), den: if c.is_zero() { BTreeMap::new() } else { self.den.clone() } }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        RatFun { num: &self.num * p, den: self.den.clone() }.reduce()
    }

    pub fn mul_lp(&self, lp: &LinearProduct) -> Self {
        let mut num = self.num.scale(&lp.scalar);
        let mut den = self.den.clone();
        for (f, &e) in &lp.factors {
            if e < 0 {
                *den.entry(f.clone()).or_insert(0) += e.unsigned_abs();
            } else {
                let mut k = e as u32;
                if let Some(d) = den.get_mut(f) {
                    let c = k.min(*d);
                    *d -= c;
                    k -= c;
                    if *d == 0 {
                        den.remove(f);
                    }
                }
                if k > 0 {
                    num = &num * &f.to_poly().pow(k);
                }
            }
        }
        RatFun { num, den }.reduce()
    }

    pub fn substitute(&self, w: &WeylElement) -> Self {
        let mut num = self.num.substitute_linear(w);
        let mut den = BTreeMap::new();
        for (f, &e) in &self.den {
            let (c, g) = LinForm::normalize(&w.apply(&f.coeffs)).expect("invertible map");
            num = num.scale(&(Q::one() / q(c).pow(e as i32)));
            *den.entry(g).or_insert(0) += e;
        }
        RatFun { num, den }
    }

    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let d = self.denominator().eval(point);
        (!d.is_zero()).then(|| self.num.eval(point) / d)
    }
}

impl PartialEq for RatFun {
    fn eq(&self, o: &RatFun) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.denominator() == &o.num * &self.denominator()
    }
}

fn lcm_den(a: &BTreeMap<LinForm, u32>, b: &BTreeMap<LinForm, u32>) -> BTreeMap<LinForm, u32> {
    let mut out = a.clone();
    for (f, &e) in b {
        let x = out.entry(f.clone()).or_insert(0);
        *x = (*x).max(e);
    }
    out
}

fn lift(r: &RatFun, target: &BTreeMap<LinForm, u32>) -> Poly {
    let mut num = r.num.clone();
    for (f, &e) in target {
        let have = r.den.get(f).copied().unwrap_or(0);
        if e > have {
            num = &num * &f.to_poly().pow(e - have);
        }
    }
    num
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let den = lcm_den(&self.den, &o.den);
        let num = &lift(self, &den) + &lift(o, &den);
        RatFun { num, den }.reduce()
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (f, &e) in &o.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RatFun { num: &self.num * &o.num, den }.reduce()
    }
}

owned_ops!(RatFun);

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        for (k, (g, e)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            write!(f, "({})", g.to_poly())?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for LinearProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratfun())
    }
}

/// `(s(f) - f) / alpha` for a reflection `s` and its root `alpha`.
pub fn demazure(f: &Poly, s: &WeylElement, alpha: &[i64]) -> Result<Poly> {
    let (c, l) = LinForm::normalize(alpha).ok_or(Error::ZeroWeight)?;
    let diff = &f.substitute_linear(s) - f;
    diff.div_linear(&l)
        .map(|p| p.scale(&(Q::one() / q(c))))
        .ok_or_else(|| Error::InternalDivisibilityFailure(format!("{diff} by {alpha:?}")))
}

/// Grading convention: linear forms sit in degree 2.
pub fn artifact_degree(poly_degree: i64) -> i64 {
    2 * poly_degree
}
