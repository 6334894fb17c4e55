//! Formal group laws over small exact coefficient rings: truncated power
//! series, p-series, torsion counting and cyclotomic unit certificates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::is_prime;

/// Exact coefficient rings. Cyclotomic rings are `R[z]/Φ_p(z)` with
/// elements stored in the basis `1, z, …, z^{p-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "ring")]
pub enum CoefficientRing {
    Integers,
    Rationals,
    /// `Z/p^prec`, a precision-`prec` model of `Z_p`.
    PAdic { p: u64, prec: u32 },
    CyclotomicIntegers { p: u64 },
    CyclotomicRationals { p: u64 },
}

/// Element of a [`CoefficientRing`]; always normalised by its ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElem(Vec<BigRational>);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn p_valuation(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    Some(v)
}

/// `v_p` of a nonzero rational.
fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    let num = p_valuation(x.numer(), p)? as i64;
    let den = p_valuation(x.denom(), p).unwrap_or(0) as i64;
    Some(num - den)
}

fn solve(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let inv = m[col][col].recip();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

impl CoefficientRing {
    pub fn parse(name: &str, p: u64, prec: u32) -> Result<Self> {
        let ring = match name {
            "integers" | "Z" => CoefficientRing::Integers,
            "rationals" | "Q" => CoefficientRing::Rationals,
            "padic" => CoefficientRing::PAdic { p, prec },
            "cyclotomic" | "cyclotomic-integers" => CoefficientRing::CyclotomicIntegers { p },
            "cyclotomic-rationals" => CoefficientRing::CyclotomicRationals { p },
            _ => return Err(Error::domain("ring", format!("unknown ring '{name}'"))),
        };
        ring.validate()?;
        Ok(ring)
    }

    pub fn validate(self) -> Result<()> {
        match self {
            CoefficientRing::PAdic { p, prec } if !is_prime(p) || prec == 0 => {
                Err(Error::domain("ring", "p-adic precision model needs a prime p and precision >= 1"))
            }
            CoefficientRing::CyclotomicIntegers { p } | CoefficientRing::CyclotomicRationals { p } if !is_prime(p) => {
                Err(Error::domain("ring", format!("cyclotomic ring needs a prime, got {p}")))
            }
            _ => Ok(()),
        }
    }

    fn width(self) -> usize {
        match self {
            CoefficientRing::CyclotomicIntegers { p } | CoefficientRing::CyclotomicRationals { p } => (p - 1) as usize,
            _ => 1,
        }
    }

    fn modulus(self) -> Option<BigInt> {
        match self {
            CoefficientRing::PAdic { p, prec } => Some(num_traits::pow(BigInt::from(p), prec as usize)),
            _ => None,
        }
    }

    fn is_integral(self) -> bool {
        matches!(self, CoefficientRing::Integers | CoefficientRing::PAdic { .. } | CoefficientRing::CyclotomicIntegers { .. })
    }

    /// Reduces a polynomial in `z` into the ring. Fails on denominators the
    /// ring cannot hold.
    pub fn element(self, poly: Vec<BigRational>) -> Result<RingElem> {
        let mut c = poly;
        let w = self.width();
        if let CoefficientRing::CyclotomicIntegers { p } | CoefficientRing::CyclotomicRationals { p } = self {
            // z^{p-1} = -(1 + z + … + z^{p-2})
            let p = p as usize;
            while c.len() > p - 1 {
                let top = c.pop().unwrap();
                let k = c.len() - (p - 1);
                for j in 0..p - 1 {
                    c[k + j] -= &top;
                }
            }
        }
        c.resize(w, BigRational::zero());
        if let Some(m) = self.modulus() {
            let mut out = Vec::with_capacity(w);
            for x in c {
                let den = x.denom().mod_floor(&m);
                let inv = mod_inverse(&den, &m).ok_or_else(|| Error::domain("ring", format!("{x} is not p-integral")))?;
                out.push(BigRational::from_integer((x.numer() * inv).mod_floor(&m)));
            }
            return Ok(RingElem(out));
        }
        if self.is_integral() && c.iter().any(|x| !x.is_integer()) {
            return Err(Error::domain("ring", "non-integral element in an integral ring"));
        }
        Ok(RingElem(c))
    }

    pub fn from_int(self, n: i64) -> RingElem {
        self.element(vec![q(n)]).expect("integers embed in every ring")
    }

    pub fn zero(self) -> RingElem {
        self.from_int(0)
    }

    pub fn one(self) -> RingElem {
        self.from_int(1)
    }

    /// `z^k`; only in cyclotomic rings.
    pub fn z_pow(self, k: u64) -> Result<RingElem> {
        let p = self.cyclotomic_prime().ok_or_else(|| Error::domain("ring", "z only exists in cyclotomic rings"))?;
        let mut v = vec![BigRational::zero(); (k % p) as usize + 1];
        v[(k % p) as usize] = q(1);
        self.element(v)
    }

    pub fn cyclotomic_prime(self) -> Option<u64> {
        match self {
            CoefficientRing::CyclotomicIntegers { p } | CoefficientRing::CyclotomicRationals { p } => Some(p),
            _ => None,
        }
    }

    pub fn add(self, a: &RingElem, b: &RingElem) -> RingElem {
        let v = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.element(v).expect("closed under addition")
    }

    pub fn sub(self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(self, a: &RingElem) -> RingElem {
        self.element(a.0.iter().map(|x| -x).collect()).expect("closed under negation")
    }

    pub fn mul(self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut v = vec![BigRational::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        self.element(v).expect("closed under multiplication")
    }

    pub fn is_zero(self, a: &RingElem) -> bool {
        a.0.iter().all(Zero::is_zero)
    }

    /// Inverse, checked by multiplying back.
    pub fn inverse(self, a: &RingElem) -> Result<RingElem> {
        let not_unit = || Error::domain("ring", format!("{} is not a unit", self.format(a)));
        if self.is_zero(a) {
            return Err(not_unit());
        }
        let inv = match self {
            CoefficientRing::PAdic { .. } => {
                let m = self.modulus().unwrap();
                let x = mod_inverse(a.0[0].numer(), &m).ok_or_else(not_unit)?;
                RingElem(vec![BigRational::from_integer(x)])
            }
            CoefficientRing::Integers | CoefficientRing::Rationals => {
                let r = a.0[0].recip();
                self.element(vec![r]).map_err(|_| not_unit())?
            }
            CoefficientRing::CyclotomicIntegers { .. } | CoefficientRing::CyclotomicRationals { .. } => {
                let n = self.width();
                let cols: Vec<RingElem> = (0..n as u64).map(|k| self.mul(a, &self.z_pow(k).unwrap())).collect();
                let m: Vec<Vec<BigRational>> = (0..n).map(|r| cols.iter().map(|c| c.0[r].clone()).collect()).collect();
                let mut e = vec![BigRational::zero(); n];
                e[0] = q(1);
                let x = solve(m, e).ok_or_else(not_unit)?;
                self.element(x).map_err(|_| not_unit())?
            }
        };
        if self.mul(a, &inv) != self.one() {
            return Err(not_unit());
        }
        Ok(inv)
    }

    /// Whether `a` is a unit in the local ring at the prime above `p`
    /// (for cyclotomic rings the prime `(1 - z)`, read off via `z ↦ 1`).
    pub fn is_unit_at(self, a: &RingElem, p: u64) -> Result<bool> {
        match self {
            CoefficientRing::PAdic { p: pp, .. } => {
                if pp != p {
                    return Err(Error::domain("p", format!("ring is {pp}-adic, asked about {p}")));
                }
                Ok(!(a.0[0].numer() % BigInt::from(p)).is_zero())
            }
            CoefficientRing::CyclotomicIntegers { p: pp } | CoefficientRing::CyclotomicRationals { p: pp } => {
                if pp != p {
                    return Err(Error::domain("p", format!("ring is built on Φ_{pp}, asked about {p}")));
                }
                let at_one: BigRational = a.0.iter().sum();
                Ok(rational_valuation(&at_one, p) == Some(0))
            }
            CoefficientRing::Integers | CoefficientRing::Rationals => Ok(rational_valuation(&a.0[0], p) == Some(0)),
        }
    }

    /// Is every coordinate of `a` free of `p` in its denominator?
    pub fn is_p_integral(self, a: &RingElem, p: u64) -> bool {
        a.0.iter().all(|x| rational_valuation(x, p).map_or(true, |v| v >= 0))
    }

    pub fn format(self, a: &RingElem) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{sign} {body}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ")
        }
    }

    pub fn name(self) -> String {
        match self {
            CoefficientRing::Integers => "Z".into(),
            CoefficientRing::Rationals => "Q".into(),
            CoefficientRing::PAdic { p, prec } => format!("Z/{p}^{prec}"),
            CoefficientRing::CyclotomicIntegers { p } => format!("Z[z]/Φ_{p}"),
            CoefficientRing::CyclotomicRationals { p } => format!("Q[z]/Φ_{p}"),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Power series in `nvars` variables, truncated at total degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: CoefficientRing,
    nvars: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, RingElem>,
}

impl TruncatedSeries {
    pub fn zero(ring: CoefficientRing, nvars: usize, order: u32) -> Self {
        TruncatedSeries { ring, nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(ring: CoefficientRing, nvars: usize, order: u32, c: RingElem) -> Self {
        let mut s = Self::zero(ring, nvars, order);
        s.add_term(vec![0; nvars], c);
        s
    }

    /// The `i`-th coordinate variable.
    pub fn var(ring: CoefficientRing, nvars: usize, order: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut s = Self::zero(ring, nvars, order);
        s.add_term(e, ring.one());
        s
    }

    /// One-variable series from integer coefficients `c_0, c_1, …`.
    pub fn from_coeffs(ring: CoefficientRing, order: u32, coeffs: &[i64]) -> Self {
        let mut s = Self::zero(ring, 1, order);
        for (k, &c) in coeffs.iter().enumerate() {
            s.add_term(vec![k as u32], ring.from_int(c));
        }
        s
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RingElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> RingElem {
        self.terms.get(exp).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: RingElem) {
        assert_eq!(exp.len(), self.nvars, "exponent arity");
        if exp.iter().sum::<u32>() >= self.order || self.ring.is_zero(&c) {
            return;
        }
        let ring = self.ring;
        let next = match self.terms.get(&exp) {
            Some(old) => ring.add(old, &c),
            None => c,
        };
        if ring.is_zero(&next) {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, next);
        }
    }

    /// Re-truncates at a lower order.
    pub fn truncate(&self, order: u32) -> Self {
        let mut out = Self::zero(self.ring, self.nvars, order.min(self.order));
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn compatible(&self, other: &Self) -> Result<u32> {
        if self.ring != other.ring || self.nvars != other.nvars {
            return Err(Error::domain("series", "series over different rings or variable sets"));
        }
        Ok(self.order.min(other.order))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.truncate(self.compatible(other)?);
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&self.ring.from_int(-1)))
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        let mut out = Self::zero(self.ring, self.nvars, self.order);
        for (e, x) in self.terms() {
            out.add_term(e.clone(), self.ring.mul(c, x));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let order = self.compatible(other)?;
        let mut out = Self::zero(self.ring, self.nvars, order);
        for (e1, c1) in self.terms() {
            let d1: u32 = e1.iter().sum();
            for (e2, c2) in other.terms() {
                if d1 + e2.iter().sum::<u32>() >= order {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, self.ring.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::constant(self.ring, self.nvars, self.order, self.ring.one());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn constant_term(&self) -> RingElem {
        self.coeff(&vec![0; self.nvars])
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.ring, self.nvars, self.order);
        for (e, c) in self.terms().filter(|(e, _)| e.iter().sum::<u32>() == d) {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Total degree of the highest surviving term, if any.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Substitutes `args[i]` for variable `i`. Arguments with nonzero
    /// constant term are only allowed when `exact` says the truncation of
    /// `self` loses nothing.
    pub fn substitute(&self, args: &[TruncatedSeries], exact: bool) -> Result<Self> {
        if args.len() != self.nvars {
            return Err(Error::domain("series", "wrong number of substitution arguments"));
        }
        let first = args.first().ok_or_else(|| Error::domain("series", "nothing to substitute"))?;
        let mut order = self.order;
        for a in args {
            if a.ring != self.ring || a.nvars != first.nvars {
                return Err(Error::domain("series", "substitution arguments disagree"));
            }
            order = order.min(a.order);
            if !exact && !self.ring.is_zero(&a.constant_term()) {
                return Err(Error::domain("series", "substituting a series with nonzero constant term"));
            }
        }
        let mut powers: Vec<Vec<TruncatedSeries>> = Vec::new();
        for (i, a) in args.iter().enumerate() {
            let top = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let a = a.truncate(order);
            let mut list = vec![TruncatedSeries::constant(self.ring, first.nvars, order, self.ring.one())];
            for k in 1..=top as usize {
                let next = list[k - 1].mul(&a)?;
                list.push(next);
            }
            powers.push(list);
        }
        let mut out = TruncatedSeries::zero(self.ring, first.nvars, order);
        for (e, c) in self.terms() {
            let mut term = TruncatedSeries::constant(self.ring, first.nvars, order, c.clone());
            for (i, &k) in e.iter().enumerate() {
                term = term.mul(&powers[i][k as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Exact evaluation of a polynomial (every term must fit the truncation).
    pub fn eval_polynomial(&self, point: &[RingElem]) -> RingElem {
        let ring = self.ring;
        let mut acc = ring.zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = ring.mul(&t, x);
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> =
            self.terms().map(|(e, c)| serde_json::json!({"exp": e, "c": self.ring.format(c)})).collect();
        serde_json::json!({"order": self.order, "terms": terms})
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "w"];
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let v = names.get(i).map(|s| s.to_string()).unwrap_or(format!("x{i}"));
                    if k == 1 {
                        v
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            let coef = self.ring.format(c);
            parts.push(match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => mono.join(""),
                (false, _) => format!("({coef}){}", mono.join("")),
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        write!(f, "{} + O({})", parts.join(" + "), self.order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    Additive,
    Multiplicative,
    Honda { p: u64, height: u32 },
}

impl LawKind {
    pub fn parse(name: &str, p: u64, height: u32) -> Result<Self> {
        match name {
            "additive" => Ok(LawKind::Additive),
            "multiplicative" => Ok(LawKind::Multiplicative),
            "honda" => Ok(LawKind::Honda { p, height }),
            _ => Err(Error::domain("law", format!("unknown formal group law '{name}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupLaw {
    kind: LawKind,
    f: TruncatedSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub left_unit: bool,
    pub right_unit: bool,
    pub commutative: bool,
    pub associative: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.left_unit && self.right_unit && self.commutative && self.associative
    }
}

impl FormalGroupLaw {
    pub fn new(kind: LawKind, ring: CoefficientRing, order: u32) -> Result<Self> {
        ring.validate()?;
        let x = TruncatedSeries::var(ring, 2, order, 0);
        let y = TruncatedSeries::var(ring, 2, order, 1);
        let f = match kind {
            LawKind::Additive => x.add(&y)?,
            LawKind::Multiplicative => x.add(&y)?.sub(&x.mul(&y)?)?,
            LawKind::Honda { p, height } => honda_law(ring, p, height, order)?,
        };
        Ok(FormalGroupLaw { kind, f })
    }

    pub fn additive(ring: CoefficientRing, order: u32) -> Self {
        Self::new(LawKind::Additive, ring, order).expect("additive law exists over every ring")
    }

    /// `x + y - xy`.
    pub fn multiplicative(ring: CoefficientRing, order: u32) -> Self {
        Self::new(LawKind::Multiplicative, ring, order).expect("multiplicative law exists over every ring")
    }

    /// Height-`h` law with logarithm `Σ_k x^{p^{hk}}/p^k`.
    pub fn honda(ring: CoefficientRing, p: u64, height: u32, order: u32) -> Result<Self> {
        Self::new(LawKind::Honda { p, height }, ring, order)
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.f
    }

    pub fn ring(&self) -> CoefficientRing {
        self.f.ring
    }

    pub fn order(&self) -> u32 {
        self.f.order
    }

    fn is_polynomial(&self) -> bool {
        matches!(self.kind, LawKind::Additive | LawKind::Multiplicative)
    }

    /// `u +_F v`.
    pub fn apply(&self, u: &TruncatedSeries, v: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.f.substitute(&[u.clone(), v.clone()], self.is_polynomial())
    }

    pub fn check_axioms(&self) -> Result<AxiomReport> {
        let ring = self.ring();
        let n = self.order();
        let x2 = TruncatedSeries::var(ring, 2, n, 0);
        let y2 = TruncatedSeries::var(ring, 2, n, 1);
        let zero2 = TruncatedSeries::zero(ring, 2, n);
        let left_unit = self.apply(&x2, &zero2)? == x2;
        let right_unit = self.apply(&zero2, &y2)? == y2;
        let commutative = self.apply(&y2, &x2)? == self.f;
        let x3 = TruncatedSeries::var(ring, 3, n, 0);
        let y3 = TruncatedSeries::var(ring, 3, n, 1);
        let z3 = TruncatedSeries::var(ring, 3, n, 2);
        let lhs = self.apply(&self.apply(&x3, &y3)?, &z3)?;
        let rhs = self.apply(&x3, &self.apply(&y3, &z3)?)?;
        Ok(AxiomReport { left_unit, right_unit, commutative, associative: lhs == rhs })
    }

    /// `[m]x`, the `m`-fold F-sum of `x`.
    pub fn p_series(&self, m: u64) -> TruncatedSeries {
        let ring = self.ring();
        let x = TruncatedSeries::var(ring, 1, self.order(), 0);
        let mut acc = TruncatedSeries::zero(ring, 1, self.order());
        for _ in 0..m {
            acc = self.apply(&acc, &x).expect("one-variable arguments without constant term");
        }
        acc
    }

    /// Index of the first coefficient of `[p]x` that is a unit at `p`.
    pub fn weierstrass_degree(&self, p: u64) -> Result<Option<u32>> {
        let s = self.p_series(p);
        for k in 1..s.order {
            if s.ring.is_unit_at(&s.coeff(&[k]), p)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Height read off from the Weierstrass degree of `[p]x`.
    pub fn height(&self, p: u64) -> Result<Option<u32>> {
        let Some(d) = self.weierstrass_degree(p)? else { return Ok(None) };
        let mut h = 0;
        let mut x = 1u64;
        while x < d as u64 {
            x *= p;
            h += 1;
        }
        Ok((x == d as u64).then_some(h))
    }
}

fn honda_law(ring: CoefficientRing, p: u64, height: u32, order: u32) -> Result<TruncatedSeries> {
    if !is_prime(p) || height == 0 {
        return Err(Error::domain("law", "the height model needs a prime p and height >= 1"));
    }
    if ring != CoefficientRing::Rationals {
        let over_q = honda_law(CoefficientRing::Rationals, p, height, order)?;
        let mut out = TruncatedSeries::zero(ring, 2, order);
        for (e, c) in over_q.terms() {
            let c = ring
                .element(c.0.clone())
                .map_err(|_| Error::unsupported("ring", format!("height model coefficient {} does not live in {}", CoefficientRing::Rationals.format(c), ring.name())))?;
            out.add_term(e.clone(), c);
        }
        return Ok(out);
    }
    let step = p.checked_pow(height).ok_or_else(|| Error::resource("order", "p^h overflows"))?;
    let mut log = TruncatedSeries::zero(ring, 1, order);
    let (mut deg, mut den) = (1u64, BigInt::one());
    while deg < order as u64 {
        log.add_term(vec![deg as u32], RingElem(vec![BigRational::new(BigInt::one(), den.clone())]));
        deg = match deg.checked_mul(step) {
            Some(d) => d,
            None => break,
        };
        den *= BigInt::from(p);
    }
    // exp = compositional inverse of log, one degree per pass
    let x = TruncatedSeries::var(ring, 1, order, 0);
    let mut exp = x.clone();
    for _ in 0..order {
        let err = log.substitute(&[exp.clone()], false)?.sub(&x)?;
        exp = exp.sub(&err)?;
    }
    let x2 = TruncatedSeries::var(ring, 2, order, 0);
    let y2 = TruncatedSeries::var(ring, 2, order, 1);
    let sum = log.substitute(&[x2], false)?.add(&log.substitute(&[y2], false)?)?;
    exp.substitute(&[sum], false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionCount {
    pub count: u64,
    pub weierstrass_degree: Option<u32>,
    /// Explicit roots when `[p]x` is a polynomial that was factored.
    pub roots: Option<Vec<RingElem>>,
}

/// `p`-th roots of unity available in `ring`.
fn roots_of_unity(ring: CoefficientRing, p: u64) -> Vec<RingElem> {
    match ring.cyclotomic_prime() {
        Some(q) if q == p => (0..p).map(|k| ring.z_pow(k).unwrap()).collect(),
        _ if p == 2 => vec![ring.one(), ring.from_int(-1)],
        _ => vec![ring.one()],
    }
}

/// Number of `p`-torsion points of `F`. Polynomial laws are factored into
/// explicit linear factors times a verified unit; other laws report their
/// Weierstrass degree.
pub fn torsion_count(law: &FormalGroupLaw, p: u64) -> Result<TorsionCount> {
    if p < 2 {
        return Err(Error::domain("p", "torsion needs p >= 2"));
    }
    let ring = law.ring();
    let wdeg = law.weierstrass_degree(p)?;
    if !law.is_polynomial() {
        let d = wdeg.ok_or_else(|| Error::unsupported("order", "no unit coefficient of [p]x within the truncation"))?;
        if law.p_series(p).order() <= d {
            return Err(Error::unsupported("order", "truncation too low to certify the Weierstrass degree"));
        }
        return Ok(TorsionCount { count: d as u64, weierstrass_degree: Some(d), roots: None });
    }
    let series = law.p_series(p);
    if series.order() <= p as u32 {
        return Err(Error::domain("order", format!("order must exceed {p} to hold [p]x exactly")));
    }
    let mut roots: Vec<RingElem> = Vec::new();
    for zeta in roots_of_unity(ring, p) {
        let r = ring.sub(&ring.one(), &zeta);
        if !roots.contains(&r) && ring.is_zero(&series.eval_polynomial(std::slice::from_ref(&r))) {
            roots.push(r);
        }
    }
    // [p]x = u·Π(x - r) with u a unit
    let mut rest: Vec<RingElem> = (0..series.order()).map(|k| series.coeff(&[k])).collect();
    while rest.len() > 1 && ring.is_zero(rest.last().unwrap()) {
        rest.pop();
    }
    for r in &roots {
        rest = synthetic_division(ring, &rest, r)
            .ok_or_else(|| Error::unsupported("ring", "linear factor does not divide [p]x"))?;
    }
    let splits = rest.len() == 1 && ring.inverse(&rest[0]).is_ok();
    if !splits {
        return Err(Error::unsupported("ring", format!("[{p}]x does not split over {}", ring.name())));
    }
    if let Some(d) = wdeg {
        if d as usize != roots.len() {
            return Err(Error::unsupported("ring", "root count disagrees with the Weierstrass degree"));
        }
    }
    Ok(TorsionCount { count: roots.len() as u64, weierstrass_degree: wdeg, roots: Some(roots) })
}

/// Divides `c_0 + c_1 x + …` by `x - r`; `None` if the remainder is nonzero.
fn synthetic_division(ring: CoefficientRing, coeffs: &[RingElem], r: &RingElem) -> Option<Vec<RingElem>> {
    let n = coeffs.len();
    if n < 2 {
        return None;
    }
    let mut out = vec![ring.zero(); n - 1];
    let mut carry = ring.zero();
    for k in (1..n).rev() {
        carry = ring.add(&coeffs[k], &ring.mul(&carry, r));
        out[k - 1] = carry.clone();
    }
    let rem = ring.add(&coeffs[0], &ring.mul(&carry, r));
    ring.is_zero(&rem).then_some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicCertificate {
    pub p: u64,
    pub ring: CoefficientRing,
    /// `(k, (1 - z^k)^{-1})` in `Z[1/p][z]/Φ_p`.
    pub inverses: Vec<(u64, RingElem)>,
    pub product: RingElem,
    pub verified: bool,
}

/// `Z[z]/Φ_p` with `1 - z^k` inverted after `1/p`, and `Π_k (1 - z^k) = p`.
pub fn cyclotomic_ring_k(p: u64) -> Result<CyclotomicCertificate> {
    let ring = CoefficientRing::CyclotomicIntegers { p };
    ring.validate()?;
    let field = CoefficientRing::CyclotomicRationals { p };
    let mut inverses = Vec::new();
    let mut product = ring.one();
    let mut verified = true;
    for k in 1..p {
        let u = ring.sub(&ring.one(), &ring.z_pow(k)?);
        product = ring.mul(&product, &u);
        let uf = field.element(u.0.clone())?;
        let inv = field.inverse(&uf)?;
        let only_p_denominators = inv.0.iter().all(|c| {
            let mut d = c.denom().clone();
            while (&d % BigInt::from(p)).is_zero() {
                d /= BigInt::from(p);
            }
            d.is_one()
        });
        verified &= only_p_denominators && field.mul(&uf, &inv) == field.one();
        inverses.push((k, inv));
    }
    verified &= product == ring.from_int(p as i64);
    Ok(CyclotomicCertificate { p, ring, inverses, product, verified })
}

/// `F(u, v)` for first Chern classes `u`, `v` (zero constant terms).
pub fn c1_tensor(law: &FormalGroupLaw, u: &TruncatedSeries, v: &TruncatedSeries) -> Result<TruncatedSeries> {
    let ring = law.ring();
    if !ring.is_zero(&u.constant_term()) || !ring.is_zero(&v.constant_term()) {
        return Err(Error::domain("series", "first Chern classes have zero constant term"));
    }
    let out = law.apply(u, v)?;
    debug_assert_eq!(out.homogeneous_part(1), u.add(v)?.homogeneous_part(1));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomEnumeration {
    pub count: u128,
    /// Each homomorphism as an `n × m` matrix: row `i` is the image of the
    /// `i`-th generator in `Z/d_1 × ⋯ × Z/d_m`.
    pub homs: Vec<Vec<Vec<u64>>>,
}

/// `|Hom((Z/p)^n, G)| = |G[p]|^n` without listing.
pub fn count_hom(p: u64, n: u32, invariant_factors: &[u64]) -> Result<u128> {
    let torsion = p_torsion_size(p, invariant_factors)?;
    torsion.checked_pow(n).ok_or_else(|| Error::resource("n", "homomorphism count overflows"))
}

fn p_torsion_size(p: u64, invariant_factors: &[u64]) -> Result<u128> {
    if p < 2 {
        return Err(Error::domain("p", "p must be at least 2"));
    }
    if invariant_factors.iter().any(|&d| d == 0) {
        return Err(Error::domain("group", "invariant factors must be positive"));
    }
    Ok(invariant_factors.iter().map(|&d| d.gcd(&p) as u128).product())
}

pub const MAX_HOM_LISTING: u128 = 100_000;

/// Lists all homomorphisms `(Z/p)^n → G`, `G = ⊕ Z/d_j`.
pub fn enumerate_hom(p: u64, n: u32, invariant_factors: &[u64]) -> Result<HomEnumeration> {
    let count = count_hom(p, n, invariant_factors)?;
    if count > MAX_HOM_LISTING {
        return Err(Error::resource("n", format!("{count} homomorphisms exceed the listing cap")));
    }
    // p-torsion of Z/d is generated by d / gcd(d, p)
    let mut torsion: Vec<Vec<u64>> = vec![vec![]];
    for &d in invariant_factors {
        let g = d.gcd(&p);
        let gen = d / g;
        torsion = torsion
            .into_iter()
            .flat_map(|v| {
                (0..g).map(move |k| {
                    let mut v = v.clone();
                    v.push(k * gen);
                    v
                })
            })
            .collect();
    }
    let mut homs: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for _ in 0..n {
        homs = homs
            .into_iter()
            .flat_map(|m| {
                torsion.iter().map(move |row| {
                    let mut m = m.clone();
                    m.push(row.clone());
                    m
                })
            })
            .collect();
    }
    debug_assert_eq!(homs.len() as u128, count);
    Ok(HomEnumeration { count, homs })
}

/// Integer value of a scalar ring element, when it has one.
pub fn as_integer(a: &RingElem) -> Option<i64> {
    if a.0.iter().skip(1).any(|c| !c.is_zero()) || !a.0[0].is_integer() {
        return None;
    }
    a.0[0].to_integer().to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: CoefficientRing = CoefficientRing::Rationals;

    fn cyc(p: u64) -> CoefficientRing {
        CoefficientRing::CyclotomicRationals { p }
    }

    #[test]
    fn ring_arithmetic() {
        let r = CoefficientRing::CyclotomicIntegers { p: 3 };
        let z = r.z_pow(1).unwrap();
        let z2 = r.mul(&z, &z);
        assert_eq!(r.format(&z2), "-1 - z");
        assert_eq!(r.mul(&z2, &z), r.one());
        assert!(r.inverse(&r.from_int(3)).is_err());
        assert_eq!(r.inverse(&z).unwrap(), z2);
        let pad = CoefficientRing::PAdic { p: 3, prec: 2 };
        assert_eq!(pad.mul(&pad.inverse(&pad.from_int(2)).unwrap(), &pad.from_int(2)), pad.one());
        assert_eq!(pad.from_int(-1), pad.from_int(8));
        assert!(pad.inverse(&pad.from_int(6)).is_err());
        let two = CoefficientRing::CyclotomicIntegers { p: 2 };
        assert_eq!(two.z_pow(1).unwrap(), two.from_int(-1));
    }

    #[test]
    fn p_series_examples() {
        for p in 1..6 {
            let add = FormalGroupLaw::additive(Q, 8).p_series(p);
            assert_eq!(add, TruncatedSeries::from_coeffs(Q, 8, &[0, p as i64]));
        }
        let m = FormalGroupLaw::multiplicative(CoefficientRing::Integers, 10);
        assert_eq!(m.p_series(3), TruncatedSeries::from_coeffs(CoefficientRing::Integers, 10, &[0, 3, -3, 1]));
        assert_eq!(m.p_series(1), TruncatedSeries::var(CoefficientRing::Integers, 1, 10, 0));
        let m8 = FormalGroupLaw::multiplicative(Q, 8);
        let two = m8.p_series(2);
        assert_eq!(two.substitute(&[two.clone()], false).unwrap(), m8.p_series(4));
    }

    #[test]
    fn axioms_hold() {
        for law in [
            FormalGroupLaw::additive(Q, 10),
            FormalGroupLaw::multiplicative(CoefficientRing::Integers, 10),
            FormalGroupLaw::honda(Q, 2, 2, 10).unwrap(),
            FormalGroupLaw::honda(Q, 3, 1, 10).unwrap(),
        ] {
            assert!(law.check_axioms().unwrap().all(), "{:?}", law.kind());
        }
        let broken = FormalGroupLaw { kind: LawKind::Additive, f: TruncatedSeries::var(Q, 2, 6, 0) };
        let report = broken.check_axioms().unwrap();
        assert!(!report.right_unit && !report.commutative);
    }

    #[test]
    fn honda_model_height_and_integrality() {
        for (p, h) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let law = FormalGroupLaw::honda(Q, p, h, 10).unwrap();
            assert!(law.series().terms().all(|(_, c)| Q.is_p_integral(c, p)));
            assert_eq!(law.height(p).unwrap(), Some(h), "p={p} h={h}");
            let s = law.p_series(p);
            assert_eq!(s.coeff(&[1]), Q.from_int(p as i64));
        }
        let padic = FormalGroupLaw::honda(CoefficientRing::PAdic { p: 2, prec: 6 }, 2, 2, 10).unwrap();
        assert!(padic.check_axioms().unwrap().all());
        assert_eq!(torsion_count(&padic, 2).unwrap().count, 4);
    }

    #[test]
    fn torsion_examples() {
        let t = torsion_count(&FormalGroupLaw::multiplicative(cyc(3), 10), 3).unwrap();
        assert_eq!(t.count, 3);
        let r = cyc(3);
        let expected = [r.zero(), r.sub(&r.one(), &r.z_pow(1).unwrap()), r.sub(&r.one(), &r.z_pow(2).unwrap())];
        assert_eq!(t.roots.unwrap(), expected);
        assert_eq!(torsion_count(&FormalGroupLaw::additive(Q, 6), 5).unwrap().count, 1);
        let q2 = torsion_count(&FormalGroupLaw::multiplicative(Q, 6), 2).unwrap();
        assert_eq!(q2.roots.unwrap(), vec![Q.zero(), Q.from_int(2)]);
        assert!(matches!(torsion_count(&FormalGroupLaw::multiplicative(Q, 6), 3), Err(Error::Unsupported { .. })));
        assert!(matches!(torsion_count(&FormalGroupLaw::additive(CoefficientRing::Integers, 6), 3), Err(Error::Unsupported { .. })));
        for p in [2, 3, 5] {
            assert_eq!(torsion_count(&FormalGroupLaw::multiplicative(cyc(p), 10), p).unwrap().count, p);
        }
    }

    #[test]
    fn cyclotomic_certificates() {
        for p in [2, 3, 5, 7] {
            let c = cyclotomic_ring_k(p).unwrap();
            assert!(c.verified);
            assert_eq!(c.product, c.ring.from_int(p as i64));
            assert_eq!(c.inverses.len() as u64, p - 1);
        }
        let c2 = cyclotomic_ring_k(2).unwrap();
        let half = CoefficientRing::CyclotomicRationals { p: 2 }.element(vec![BigRational::new(1.into(), 2.into())]).unwrap();
        assert_eq!(c2.inverses[0].1, half);
        assert!(cyclotomic_ring_k(4).is_err());
    }

    #[test]
    fn c1_tensor_examples() {
        let m = FormalGroupLaw::multiplicative(Q, 6);
        let x = TruncatedSeries::var(Q, 2, 6, 0);
        let y = TruncatedSeries::var(Q, 2, 6, 1);
        let zero = TruncatedSeries::zero(Q, 2, 6);
        assert_eq!(c1_tensor(&m, &x, &zero).unwrap(), x);
        assert_eq!(c1_tensor(&m, &x, &y).unwrap(), *m.series());
        let one = TruncatedSeries::constant(Q, 2, 6, Q.one());
        assert!(matches!(c1_tensor(&m, &one, &y), Err(Error::Domain { .. })));
        let h = FormalGroupLaw::honda(Q, 2, 2, 8).unwrap();
        let sq = x.mul(&x).unwrap().add(&x).unwrap();
        let out = c1_tensor(&h, &sq, &y).unwrap();
        assert_eq!(out.homogeneous_part(1), x.add(&y).unwrap());
    }

    #[test]
    fn localized_leading_term_is_invertible() {
        // u = 1 - z is a unit after inverting p; v is nilpotent (a variable)
        let r = cyc(3);
        let n = 4;
        let m = FormalGroupLaw::multiplicative(r, n);
        let u_elem = r.sub(&r.one(), &r.z_pow(1).unwrap());
        let u = TruncatedSeries::constant(r, 1, n, u_elem.clone());
        let v = TruncatedSeries::var(r, 1, n, 0);
        let f = m.apply(&u, &v).unwrap();
        let normalized = f.scale(&r.inverse(&u_elem).unwrap());
        assert_eq!(normalized.constant_term(), r.one());
        // inverse of 1 + a·v is Σ (-a v)^k
        let a = normalized.sub(&TruncatedSeries::constant(r, 1, n, r.one())).unwrap();
        let mut inv = TruncatedSeries::constant(r, 1, n, r.one());
        let mut pow = inv.clone();
        let neg_a = a.scale(&r.from_int(-1));
        for _ in 1..n {
            pow = pow.mul(&neg_a).unwrap();
            inv = inv.add(&pow).unwrap();
        }
        assert_eq!(normalized.mul(&inv).unwrap(), TruncatedSeries::constant(r, 1, n, r.one()));
    }

    #[test]
    fn hom_examples() {
        assert_eq!(enumerate_hom(3, 1, &[3]).unwrap().count, 3);
        assert_eq!(enumerate_hom(3, 2, &[3]).unwrap().count, 9);
        let e = enumerate_hom(2, 1, &[4]).unwrap();
        assert_eq!(e.homs, vec![vec![vec![0]], vec![vec![2]]]);
        assert_eq!(count_hom(2, 3, &[4, 6, 5]).unwrap(), 64);
        assert_eq!(enumerate_hom(5, 2, &[7]).unwrap().count, 1);
    }

    #[test]
    fn json_shape() {
        let s = FormalGroupLaw::multiplicative(Q, 5).p_series(2);
        assert_eq!(s.to_json_value().to_string(), r#"{"order":5,"terms":[{"c":"2","exp":[1]},{"c":"-1","exp":[2]}]}"#);
    }
}
