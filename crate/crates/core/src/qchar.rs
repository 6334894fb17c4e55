//! ε,t-characters: Laurent polynomials in `t` over monomials in `V_{i,a}`,
//! `W_{i,a}`, with the collapse map Π to `Z[X]`, the hat-twist, a guarded
//! Frenkel–Mukhin expansion and the level-`n` assembly.
//!
//! Spectral parameters live either in a free lattice `Z^d` (for expansion,
//! where shifts must not collide) or in `(Z/p)^n`. Both are written
//! additively; the ε-shift is a fixed group element.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weightlat::{Character, RootSystem, WeightVector};

/// A spectral parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Param(pub Vec<i64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ParamGroup {
    Generic { dim: usize },
    Finite { p: u64, n: usize },
}

impl ParamGroup {
    pub fn dim(self) -> usize {
        match self {
            ParamGroup::Generic { dim } => dim,
            ParamGroup::Finite { n, .. } => n,
        }
    }

    fn normalize(self, a: &[i64]) -> Param {
        match self {
            ParamGroup::Generic { .. } => Param(a.to_vec()),
            ParamGroup::Finite { p, .. } => Param(a.iter().map(|x| x.rem_euclid(p as i64)).collect()),
        }
    }

    fn contains(self, a: &Param) -> bool {
        a.0.len() == self.dim()
            && match self {
                ParamGroup::Generic { .. } => true,
                ParamGroup::Finite { p, .. } => a.0.iter().all(|&x| (0..p as i64).contains(&x)),
            }
    }

    /// `a + k·ε`.
    pub fn shift(self, a: &Param, eps: &Param, k: i64) -> Param {
        let raw: Vec<i64> = a.0.iter().zip(&eps.0).map(|(x, e)| x + k * e).collect();
        self.normalize(&raw)
    }

    /// The first basis vector, or the empty parameter at level 0.
    pub fn default_eps(self) -> Param {
        let d = self.dim();
        Param((0..d).map(|k| i64::from(k == 0)).collect())
    }
}

/// `Π V_{i,a}^{v} Π W_{i,a}^{w}`; zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub v: BTreeMap<(usize, Param), u32>,
    pub w: BTreeMap<(usize, Param), u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_w(vars: impl IntoIterator<Item = (usize, Param)>) -> Self {
        let mut m = Monomial::one();
        for key in vars {
            *m.w.entry(key).or_insert(0) += 1;
        }
        m
    }

    pub fn times_v(&self, node: usize, a: Param, e: u32) -> Monomial {
        let mut m = self.clone();
        if e > 0 {
            *m.v.entry((node, a)).or_insert(0) += e;
        }
        m
    }

    pub fn v_degree(&self) -> u32 {
        self.v.values().sum()
    }

    fn params(&self) -> impl Iterator<Item = &Param> {
        self.v.keys().chain(self.w.keys()).map(|(_, a)| a)
    }

    fn map_params(&self, f: impl Fn(&Param) -> Vec<Param>) -> Monomial {
        let mut out = Monomial::one();
        for ((i, a), &e) in &self.v {
            for b in f(a) {
                *out.v.entry((*i, b)).or_insert(0) += e;
            }
        }
        for ((i, a), &e) in &self.w {
            for b in f(a) {
                *out.w.entry((*i, b)).or_insert(0) += e;
            }
        }
        out
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (k, &e) in &rhs.v {
            *out.v.entry(k.clone()).or_insert(0) += e;
        }
        for (k, &e) in &rhs.w {
            *out.w.entry(k.clone()).or_insert(0) += e;
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_empty() && self.w.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        for (name, map) in [("W", &self.w), ("V", &self.v)] {
            for ((i, a), &e) in map {
                let exp = if e == 1 { String::new() } else { format!("^{e}") };
                parts.push(format!("{name}_{{{},{:?}}}{exp}", i + 1, a.0));
            }
        }
        f.write_str(&parts.join(""))
    }
}

/// Element of `Z[t^±, V_{i,a}, W_{i,a}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsTChar {
    group: ParamGroup,
    terms: BTreeMap<(i64, Monomial), i64>,
}

impl EpsTChar {
    pub fn zero(group: ParamGroup) -> Self {
        EpsTChar { group, terms: BTreeMap::new() }
    }

    pub fn one(group: ParamGroup) -> Self {
        Self::monomial(group, 0, Monomial::one(), 1).expect("the unit has no parameters")
    }

    pub fn monomial(group: ParamGroup, t: i64, m: Monomial, c: i64) -> Result<Self> {
        if let Some(a) = m.params().find(|a| !group.contains(a)) {
            return Err(Error::domain("param", format!("{:?} is not in {group:?}", a.0)));
        }
        let mut out = Self::zero(group);
        out.add_term(t, m, c);
        Ok(out)
    }

    pub fn group(&self) -> ParamGroup {
        self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Monomial, i64)> {
        self.terms.iter().map(|((t, m), &c)| (*t, m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: i64, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let key = (t, m);
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    fn same_group(&self, other: &EpsTChar) -> Result<()> {
        if self.group != other.group {
            return Err(Error::domain("group", format!("{:?} vs {:?}", self.group, other.group)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &EpsTChar) -> Result<EpsTChar> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (t, m, c) in other.terms() {
            out.add_term(t, m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &EpsTChar) -> Result<EpsTChar> {
        self.same_group(other)?;
        let mut out = EpsTChar::zero(self.group);
        for (t1, m1, c1) in self.terms() {
            for (t2, m2, c2) in other.terms() {
                out.add_term(t1 + t2, m1 * m2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let (p, n) = match self.group {
            ParamGroup::Generic { dim } => (serde_json::Value::Null, dim),
            ParamGroup::Finite { p, n } => (p.into(), n),
        };
        let vars = |map: &BTreeMap<(usize, Param), u32>| -> Vec<serde_json::Value> {
            map.iter().map(|((i, a), e)| serde_json::json!([[i + 1, a.0], e])).collect()
        };
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(t, m, c)| serde_json::json!({"t": t, "V": vars(&m.v), "W": vars(&m.w), "c": c}))
            .collect();
        serde_json::json!({"p": p, "n": n, "terms": terms})
    }
}

impl Add for &EpsTChar {
    type Output = EpsTChar;
    fn add(self, rhs: &EpsTChar) -> EpsTChar {
        self.try_add(rhs).expect("adding characters over different parameter groups")
    }
}

impl Mul for &EpsTChar {
    type Output = EpsTChar;
    fn mul(self, rhs: &EpsTChar) -> EpsTChar {
        self.try_mul(rhs).expect("multiplying characters over different parameter groups")
    }
}

impl fmt::Display for EpsTChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(t, m, c)| {
                let tt = if t == 0 { String::new() } else { format!("t^{t}·") };
                format!("{c}·{tt}{m}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn check_simply_laced(root: &RootSystem) -> Result<()> {
    if !root.is_simply_laced() {
        return Err(Error::unsupported("type", format!("Π needs a simply-laced type, got {}", root.label())));
    }
    Ok(())
}

/// `Σ_a u_{i,a}` for one monomial, summing the u-formula over every
/// parameter it touches.
fn collapse_monomial(root: &RootSystem, group: ParamGroup, eps: &Param, m: &Monomial) -> WeightVector {
    let r = root.rank();
    let c = root.cartan();
    let mut touched: BTreeSet<Param> = BTreeSet::new();
    for ((_, a), _) in m.w.iter() {
        touched.insert(a.clone());
    }
    for ((_, a), _) in m.v.iter() {
        touched.insert(a.clone());
        touched.insert(group.shift(a, eps, 1));
        touched.insert(group.shift(a, eps, -1));
    }
    let get = |map: &BTreeMap<(usize, Param), u32>, i: usize, a: &Param| -> i64 {
        map.get(&(i, a.clone())).copied().unwrap_or(0) as i64
    };
    let mut mu = vec![0i64; r];
    for a in &touched {
        for (i, slot) in mu.iter_mut().enumerate() {
            let mut u = get(&m.w, i, a) - get(&m.v, i, &group.shift(a, eps, -1)) - get(&m.v, i, &group.shift(a, eps, 1));
            for j in 0..r {
                if c[j][i] == -1 {
                    u += get(&m.v, j, a);
                }
            }
            *slot += u;
        }
    }
    WeightVector(mu)
}

/// Π: `t ↦ 1`, `Π V^v W^w ↦ Π y_i^{Σ_a u_{i,a}}`.
pub fn pi_collapse(xi: &EpsTChar, root: &RootSystem, eps: &Param) -> Result<Character> {
    check_simply_laced(root)?;
    if eps.0.len() != xi.group.dim() {
        return Err(Error::domain("eps", "ε-shift has the wrong dimension"));
    }
    let mut out = Character::zero();
    for (_, m, c) in xi.terms() {
        if let Some(&(i, _)) = m.v.keys().chain(m.w.keys()).find(|(i, _)| *i >= root.rank()) {
            return Err(Error::domain("node", format!("node {} out of range for {}", i + 1, root.label())));
        }
        out.add_term(collapse_monomial(root, xi.group, eps, m), c);
    }
    Ok(out)
}

/// Π with the default ε-shift of the character's group.
pub fn pi(xi: &EpsTChar, root: &RootSystem) -> Result<Character> {
    pi_collapse(xi, root, &xi.group.default_eps())
}

/// `ξ̂ ↦ ξ̂^{[t]}`: each `b` becomes the coset `{(b, ξ) : ξ ∈ (Z/p)^t}`.
pub fn twist_hat(xi: &EpsTChar, t: usize) -> Result<EpsTChar> {
    let ParamGroup::Finite { p, n } = xi.group else {
        return Err(Error::domain("group", "the twist is defined on (Z/p)^n parameters"));
    };
    let cosets = coset_suffixes(p, t);
    let group = ParamGroup::Finite { p, n: n + t };
    let mut out = EpsTChar::zero(group);
    for (te, m, c) in xi.terms() {
        let mapped = m.map_params(|b| {
            cosets
                .iter()
                .map(|s| {
                    let mut v = b.0.clone();
                    v.extend_from_slice(s);
                    Param(v)
                })
                .collect()
        });
        out.add_term(te, mapped, c);
    }
    Ok(out)
}

/// Twists a level-`m` character up to level `n`.
pub fn twist_to_level(xi: &EpsTChar, n: usize) -> Result<EpsTChar> {
    let m = xi.group.dim();
    if m > n {
        return Err(Error::domain("level", format!("cannot twist level {m} down to level {n}")));
    }
    twist_hat(xi, n - m)
}

fn coset_suffixes(p: u64, t: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..t {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p as i64).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Reduces a generic-lattice character into `(Z/p)^d`.
pub fn reduce_mod(xi: &EpsTChar, p: u64) -> Result<EpsTChar> {
    let ParamGroup::Generic { dim } = xi.group else {
        return Err(Error::domain("group", "only generic parameters can be reduced"));
    };
    let group = ParamGroup::Finite { p, n: dim };
    let mut out = EpsTChar::zero(group);
    for (t, m, c) in xi.terms() {
        out.add_term(t, m.map_params(|a| vec![group.normalize(&a.0)]), c);
    }
    Ok(out)
}

/// Embeds `(Z/p)^m` into `(Z/p)^n` by appending zeros.
pub fn pad_to_level(xi: &EpsTChar, n: usize) -> Result<EpsTChar> {
    let ParamGroup::Finite { p, n: m } = xi.group else {
        return Err(Error::domain("group", "only finite parameter groups can be padded"));
    };
    if m > n {
        return Err(Error::domain("level", format!("cannot pad level {m} to level {n}")));
    }
    let mut out = EpsTChar::zero(ParamGroup::Finite { p, n });
    for (t, mono, c) in xi.terms() {
        out.add_term(
            t,
            mono.map_params(|a| {
                let mut v = a.0.clone();
                v.resize(n, 0);
                vec![Param(v)]
            }),
            c,
        );
    }
    Ok(out)
}

pub const DEFAULT_FM_STEP_CAP: usize = 10_000;

/// Frenkel–Mukhin expansion over a generic lattice, restricted to the cases
/// where it is known to produce the q-character: a single string
/// `W_{1,b} W_{1,b+2ε} ⋯` in type `A1`, and a single fundamental `W_{i,a}` in
/// type `A_n`. `V_{i,c}` plays the role of `A^{-1}_{i,c}`.
pub fn fm_expand(root: &RootSystem, highest: &Monomial, dim: usize, eps: &Param, step_cap: usize) -> Result<EpsTChar> {
    check_simply_laced(root)?;
    let group = ParamGroup::Generic { dim };
    if !highest.v.is_empty() {
        return Err(Error::domain("highest", "the highest monomial must only involve W variables"));
    }
    if eps.0.len() != dim || eps.0.iter().all(|&e| e == 0) {
        return Err(Error::domain("eps", "ε-shift must be a nonzero vector of the lattice dimension"));
    }
    check_whitelist(root, highest, group, eps)?;
    if let Some(a) = highest.params().find(|a| !group.contains(a)) {
        return Err(Error::domain("param", format!("{:?} is not in Z^{dim}", a.0)));
    }

    let r = root.rank();
    let mut coeff: BTreeMap<Monomial, i64> = BTreeMap::new();
    let mut coloured: BTreeMap<Monomial, Vec<i64>> = BTreeMap::new();
    coeff.insert(highest.clone(), 1);
    coloured.insert(highest.clone(), vec![0; r]);
    let mut steps = 0usize;
    let mut depth = 0u32;
    loop {
        let layer: Vec<Monomial> = coloured.keys().filter(|m| m.v_degree() == depth).cloned().collect();
        if layer.is_empty() && coloured.keys().all(|m| m.v_degree() < depth) {
            break;
        }
        for m in layer {
            steps += 1;
            if steps > step_cap {
                return Err(Error::resource("steps", format!("expansion exceeded {step_cap} steps")));
            }
            let u = y_exponents(root, group, eps, &m);
            let dominant_nodes: Vec<usize> = (0..r).filter(|&i| u.iter().all(|((j, _), &e)| *j != i || e >= 0)).collect();
            let col = coloured[&m].clone();
            let s = if depth == 0 {
                1
            } else {
                let lowered: Vec<i64> = (0..r).filter(|i| !dominant_nodes.contains(i)).map(|i| col[i]).collect();
                if lowered.is_empty() {
                    return Err(Error::unsupported("highest", "expansion reached a second dominant monomial"));
                }
                if lowered.iter().any(|&x| x != lowered[0]) {
                    return Err(Error::unsupported("highest", "coloured coefficients disagree"));
                }
                lowered[0]
            };
            if s == 0 {
                coloured.remove(&m);
                continue;
            }
            coeff.insert(m.clone(), s);
            for &i in &dominant_nodes {
                let extra = s - col[i];
                if extra == 0 {
                    continue;
                }
                let ys: Vec<(Param, i64)> =
                    u.iter().filter(|((j, _), &e)| *j == i && e > 0).map(|((_, a), &e)| (a.clone(), e)).collect();
                for (lowering, c) in sl2_lowerings(i, &ys, group, eps) {
                    if lowering.v.is_empty() {
                        continue;
                    }
                    let next = &m * &lowering;
                    let entry = coloured.entry(next).or_insert_with(|| vec![0; r]);
                    entry[i] += extra * c;
                }
            }
        }
        depth += 1;
    }
    let mut out = EpsTChar::zero(group);
    for (m, c) in coeff {
        out.add_term(0, m, c);
    }
    Ok(out)
}

fn check_whitelist(root: &RootSystem, highest: &Monomial, group: ParamGroup, eps: &Param) -> Result<()> {
    let type_a = root.label().starts_with('A');
    if !type_a {
        return Err(Error::unsupported("type", "the expansion is only enabled in type A"));
    }
    if highest.w.is_empty() {
        return Ok(());
    }
    if root.rank() == 1 {
        let mut ys: Vec<(Param, i64)> = highest.w.iter().map(|((_, a), &e)| (a.clone(), e as i64)).collect();
        ys.sort();
        let strings = decompose_strings(&ys, group, eps);
        if strings.len() == 1 {
            return Ok(());
        }
        return Err(Error::unsupported("highest", "only a single q-string is supported in type A1"));
    }
    let single = highest.w.len() == 1 && highest.w.values().all(|&e| e == 1);
    if single {
        Ok(())
    } else {
        Err(Error::unsupported("highest", "only fundamental modules are supported in rank >= 2"))
    }
}

/// Exponents of `Y_{i,a}` for a monomial, i.e. the u-formula per parameter.
fn y_exponents(root: &RootSystem, group: ParamGroup, eps: &Param, m: &Monomial) -> BTreeMap<(usize, Param), i64> {
    let r = root.rank();
    let c = root.cartan();
    let mut y: BTreeMap<(usize, Param), i64> = BTreeMap::new();
    for ((i, a), &e) in &m.w {
        *y.entry((*i, a.clone())).or_insert(0) += e as i64;
    }
    for ((i, a), &e) in &m.v {
        let e = e as i64;
        *y.entry((*i, group.shift(a, eps, -1))).or_insert(0) -= e;
        *y.entry((*i, group.shift(a, eps, 1))).or_insert(0) -= e;
        for j in 0..r {
            if c[*i][j] == -1 {
                *y.entry((j, a.clone())).or_insert(0) += e;
            }
        }
    }
    y.retain(|_, e| *e != 0);
    y
}

/// Splits positive `Y` exponents into strings `b, b+2ε, …`, greedily from
/// the smallest parameter.
fn decompose_strings(ys: &[(Param, i64)], group: ParamGroup, eps: &Param) -> Vec<(Param, usize)> {
    let mut pool: BTreeMap<Param, i64> = ys.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some(start) = pool.keys().find(|a| !pool.contains_key(&group.shift(a, eps, -2))).cloned() {
        let mut len = 0;
        let mut cur = start.clone();
        while let Some(e) = pool.get_mut(&cur) {
            *e -= 1;
            if *e == 0 {
                pool.remove(&cur);
            }
            len += 1;
            cur = group.shift(&cur, eps, 2);
        }
        out.push((start, len));
    }
    out
}

/// `L(m_i)/m_i` for the sl2 q-character of node `i`, as a sum of monomials
/// in `V_{i,·}`.
fn sl2_lowerings(i: usize, ys: &[(Param, i64)], group: ParamGroup, eps: &Param) -> Vec<(Monomial, i64)> {
    let mut acc: BTreeMap<Monomial, i64> = BTreeMap::from([(Monomial::one(), 1)]);
    for (b, k) in decompose_strings(ys, group, eps) {
        let k = k as i64;
        let mut factor = vec![(Monomial::one(), 1i64)];
        let mut m = Monomial::one();
        for l in 0..k {
            m = m.times_v(i, group.shift(&b, eps, 2 * k - 1 - 2 * l), 1);
            factor.push((m.clone(), 1));
        }
        let mut next = BTreeMap::new();
        for (a, ca) in &acc {
            for (f, cf) in &factor {
                *next.entry(a * f).or_insert(0) += ca * cf;
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// `Ê¹` for `sl2` and a restricted digit `a`: the string given by the
/// Drinfeld exponents `c^+_{1,j}`, expanded and reduced to `(Z/p)^1`.
pub fn sl2_e1_hat(p: u64, a: i64) -> Result<EpsTChar> {
    let root = RootSystem::parse("A1")?;
    if !(0..p as i64).contains(&a) {
        return Err(Error::domain("weight", format!("{a} is not restricted for p = {p}")));
    }
    let exps = crate::drinfeld::c_exponents(1, &WeightVector(vec![a]), crate::drinfeld::Sign::Plus)?;
    let highest = Monomial::from_w(exps[0].iter().map(|&c| (0usize, Param(vec![c]))));
    let generic = fm_expand(&root, &highest, 1, &Param(vec![1]), DEFAULT_FM_STEP_CAP)?;
    reduce_mod(&generic, p)
}

/// `E⁰_w` as a level-0 ε,t-character: each term `e^μ` becomes
/// `W^{w} V^{v}` with `w - Cv = μ`, all at the single level-0 parameter.
pub fn weyl_as_eps_t(root: &RootSystem, w: &WeightVector, chi: &Character, p: u64) -> Result<EpsTChar> {
    let group = ParamGroup::Finite { p, n: 0 };
    let base = Param(vec![]);
    let mut out = EpsTChar::zero(group);
    for (mu, c) in chi.terms() {
        let coords = root.root_coordinates(&(w - mu));
        if coords.iter().any(|x| !x.is_integer() || *x < 0.into()) {
            return Err(Error::domain("character", format!("{mu} is not below {w}")));
        }
        let mut m = Monomial::one();
        for (i, &wi) in w.0.iter().enumerate() {
            if wi > 0 {
                m.w.insert((i, base.clone()), wi as u32);
            }
        }
        for (i, x) in coords.iter().enumerate() {
            m = m.times_v(i, base.clone(), x.to_integer() as u32);
        }
        out.add_term(0, m, c);
    }
    Ok(out)
}

/// `(E⁰_{w'})^{[n]} Π_{i<n} (Ê¹_{w^{(i)}})^{[i]}` at level `n`. Each `Ê¹`
/// factor is given at level 1 and padded to level `n - i` before twisting.
pub fn assemble_ch_et(
    root: &RootSystem,
    p: u64,
    digits: &[WeightVector],
    tail: &WeightVector,
    chi_tail: &Character,
    e1_hat: impl Fn(&WeightVector) -> Result<EpsTChar>,
) -> Result<EpsTChar> {
    let n = digits.len();
    for d in digits {
        root.check_dominant(d)?;
        if !d.is_restricted(p) {
            return Err(Error::domain("digit", format!("{d} is not restricted for p = {p}")));
        }
    }
    let group = ParamGroup::Finite { p, n };
    let mut acc = twist_to_level(&weyl_as_eps_t(root, tail, chi_tail, p)?, n)?;
    for (i, d) in digits.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let factor = e1_hat(d)?;
        if factor.group() != (ParamGroup::Finite { p, n: 1 }) {
            return Err(Error::domain("e1_hat", "Ê¹ factors must live on (Z/p)^1"));
        }
        let lifted = twist_hat(&pad_to_level(&factor, n - i)?, i)?;
        acc = acc.try_mul(&lifted)?;
    }
    debug_assert_eq!(acc.group(), group);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylchar::weyl_character;

    fn a1() -> RootSystem {
        RootSystem::parse("A1").unwrap()
    }

    fn w(v: &[i64]) -> WeightVector {
        WeightVector(v.to_vec())
    }

    fn fin(p: u64, n: usize) -> ParamGroup {
        ParamGroup::Finite { p, n }
    }

    fn chi(label: &str, v: &[i64]) -> Character {
        weyl_character(&RootSystem::parse(label).unwrap(), &w(v)).unwrap()
    }

    #[test]
    fn pi_examples() {
        let g = fin(3, 1);
        let a = Param(vec![0]);
        let wa = Monomial::from_w([(0, a.clone())]);
        let xi = &EpsTChar::monomial(g, 0, wa.clone(), 1).unwrap()
            + &EpsTChar::monomial(g, 0, wa.times_v(0, Param(vec![1]), 1), 1).unwrap();
        assert_eq!(pi(&xi, &a1()).unwrap(), chi("A1", &[1]));
        assert_eq!(pi(&EpsTChar::one(g), &a1()).unwrap(), Character::one(1));
        let two = EpsTChar::monomial(g, 0, Monomial::from_w([(0, a), (0, Param(vec![2]))]), 1).unwrap();
        assert_eq!(pi(&two, &a1()).unwrap(), Character::monomial(w(&[2]), 1));
        let b2 = RootSystem::parse("B2").unwrap();
        assert!(matches!(pi(&EpsTChar::one(fin(3, 1)), &b2), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn pi_is_independent_of_eps() {
        let g = fin(5, 2);
        let m = Monomial::from_w([(0, Param(vec![1, 2])), (1, Param(vec![0, 0]))])
            .times_v(0, Param(vec![3, 4]), 2)
            .times_v(1, Param(vec![1, 1]), 1);
        let xi = EpsTChar::monomial(g, 2, m, -3).unwrap();
        let a2 = RootSystem::parse("A2").unwrap();
        let base = pi_collapse(&xi, &a2, &Param(vec![1, 0])).unwrap();
        assert_eq!(base, pi_collapse(&xi, &a2, &Param(vec![0, 1])).unwrap());
        assert_eq!(base, pi_collapse(&xi, &a2, &Param(vec![2, 3])).unwrap());
        // μ = w - Cv = (1,1) - (2·2 - 1, -2 + 2) = (-2, 1)
        assert_eq!(base, Character::monomial(w(&[-2, 1]), -3));
    }

    #[test]
    fn twist_examples() {
        let b = Param(vec![1]);
        let xi = EpsTChar::monomial(fin(2, 1), 0, Monomial::from_w([(0, b)]), 1).unwrap();
        let tw = twist_hat(&xi, 1).unwrap();
        let expected = Monomial::from_w([(0, Param(vec![1, 0])), (0, Param(vec![1, 1]))]);
        assert_eq!(tw, EpsTChar::monomial(fin(2, 2), 0, expected, 1).unwrap());
        assert_eq!(twist_hat(&EpsTChar::one(fin(3, 0)), 2).unwrap(), EpsTChar::one(fin(3, 2)));
        assert!(twist_to_level(&EpsTChar::one(fin(3, 2)), 1).is_err());
    }

    #[test]
    fn twist_commutes_with_pi_on_witness() {
        let g = fin(3, 1);
        let b = Param(vec![2]);
        let wb = Monomial::from_w([(0, b)]);
        let xi = &EpsTChar::monomial(g, 0, wb.clone(), 1).unwrap()
            + &EpsTChar::monomial(g, 0, wb.times_v(0, Param(vec![0]), 1), 1).unwrap();
        let left = pi(&twist_hat(&xi, 1).unwrap(), &a1()).unwrap();
        let right = pi(&xi, &a1()).unwrap().frobenius_twist(1, 3);
        assert_eq!(left, right);
    }

    #[test]
    fn fm_examples() {
        let eps = Param(vec![1]);
        let wa = Monomial::from_w([(0, Param(vec![0]))]);
        let out = fm_expand(&a1(), &wa, 1, &eps, 100).unwrap();
        let expected = &EpsTChar::monomial(ParamGroup::Generic { dim: 1 }, 0, wa.clone(), 1).unwrap()
            + &EpsTChar::monomial(ParamGroup::Generic { dim: 1 }, 0, wa.times_v(0, Param(vec![1]), 1), 1).unwrap();
        assert_eq!(out, expected);
        let empty = fm_expand(&a1(), &Monomial::one(), 1, &eps, 100).unwrap();
        assert_eq!(empty, EpsTChar::one(ParamGroup::Generic { dim: 1 }));
        let a2 = RootSystem::parse("A2").unwrap();
        let v = fm_expand(&a2, &Monomial::from_w([(0, Param(vec![0]))]), 1, &eps, 100).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(pi(&v, &a2).unwrap(), chi("A2", &[1, 0]));
    }

    #[test]
    fn fm_fundamentals_of_type_a() {
        let eps = Param(vec![1]);
        for n in 2..=4 {
            let root = RootSystem::parse(&format!("A{n}")).unwrap();
            for i in 0..n {
                let out = fm_expand(&root, &Monomial::from_w([(i, Param(vec![5]))]), 1, &eps, 1000).unwrap();
                let mut lam = vec![0; n];
                lam[i] = 1;
                assert_eq!(pi(&out, &root).unwrap(), chi(&format!("A{n}"), &lam), "A{n} node {}", i + 1);
            }
        }
    }

    #[test]
    fn fm_strings_give_sl2_characters() {
        let eps = Param(vec![1]);
        for k in 0..6i64 {
            let highest = Monomial::from_w((0..k).map(|j| (0usize, Param(vec![2 * j - 3]))));
            let out = fm_expand(&a1(), &highest, 1, &eps, 1000).unwrap();
            assert_eq!(out.len() as i64, k + 1);
            assert_eq!(pi(&out, &a1()).unwrap(), chi("A1", &[k]));
        }
    }

    #[test]
    fn fm_guards() {
        let eps = Param(vec![1]);
        let gap = Monomial::from_w([(0, Param(vec![0])), (0, Param(vec![5]))]);
        assert!(matches!(fm_expand(&a1(), &gap, 1, &eps, 100), Err(Error::Unsupported { .. })));
        let a2 = RootSystem::parse("A2").unwrap();
        let two = Monomial::from_w([(0, Param(vec![0])), (1, Param(vec![0]))]);
        assert!(matches!(fm_expand(&a2, &two, 1, &eps, 100), Err(Error::Unsupported { .. })));
        let d4 = RootSystem::parse("D4").unwrap();
        assert!(matches!(fm_expand(&d4, &Monomial::from_w([(0, Param(vec![0]))]), 1, &eps, 100), Err(Error::Unsupported { .. })));
        let long = Monomial::from_w((0..6).map(|j| (0usize, Param(vec![2 * j]))));
        assert!(matches!(fm_expand(&a1(), &long, 1, &eps, 3), Err(Error::Resource { .. })));
    }

    #[test]
    fn sl2_e1_hat_collapses_to_weyl() {
        for p in [2u64, 3, 5] {
            for a in 0..p as i64 {
                let e = sl2_e1_hat(p, a).unwrap();
                assert_eq!(e.group(), fin(p, 1));
                assert_eq!(pi(&e, &a1()).unwrap(), chi("A1", &[a]));
            }
        }
    }

    #[test]
    fn assemble_examples() {
        let root = a1();
        let e1 = |d: &WeightVector| sl2_e1_hat(2, d.0[0]);
        let one = assemble_ch_et(&root, 2, &[w(&[0])], &w(&[0]), &Character::one(1), e1).unwrap();
        assert_eq!(one, EpsTChar::one(fin(2, 1)));
        // w = 2 at p = 2: digit 0, tail 1.
        let x = assemble_ch_et(&root, 2, &[w(&[0])], &w(&[1]), &chi("A1", &[1]), e1).unwrap();
        assert_eq!(pi(&x, &root).unwrap(), Character::from_terms([(w(&[2]), 1), (w(&[-2]), 1)]));
        // w = 3: digits (1), tail 1.
        let y = assemble_ch_et(&root, 2, &[w(&[1])], &w(&[1]), &chi("A1", &[1]), e1).unwrap();
        assert_eq!(pi(&y, &root).unwrap(), &chi("A1", &[1]) * &chi("A1", &[1]).frobenius_twist(1, 2));
        assert!(matches!(
            assemble_ch_et(&root, 2, &[w(&[2])], &w(&[0]), &Character::one(1), e1),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let m = Monomial::from_w([(0, Param(vec![1]))]).times_v(0, Param(vec![0]), 2);
        let xi = EpsTChar::monomial(fin(3, 1), 1, m, 4).unwrap();
        let text = xi.to_json_value().to_string();
        assert_eq!(text, r#"{"n":1,"p":3,"terms":[{"V":[[[1,[0]],2]],"W":[[[1,[1]],1]],"c":4,"t":1}]}"#);
    }
}
