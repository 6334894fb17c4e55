//! Coxeter groups given by a Coxeter matrix: ShortLex normal forms, Bruhat
//! order and Kazhdan–Lusztig polynomials.
//!
//! Elements are manipulated through an integral geometric representation
//! built from a generalized Cartan matrix realising the Coxeter matrix. A
//! generator `t` is a left descent of `w` exactly when `w^{-1}(α_t)` is a
//! negative root.

pub mod cache;
pub mod oracle;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::weightlat::{RootSystem, WeightVector};

/// Entry of a Coxeter matrix; `None` stands for `∞`.
pub type CoxeterOrder = Option<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterPresentation {
    name: String,
    labels: Vec<String>,
    coxeter: Vec<Vec<CoxeterOrder>>,
    gcm: Vec<Vec<i64>>,
}

fn order_from_product(prod: i64) -> CoxeterOrder {
    match prod {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

impl CoxeterPresentation {
    /// Builds a presentation from a Coxeter matrix with entries in `{2,3,4,6,∞}`.
    pub fn from_coxeter_matrix(name: &str, coxeter: Vec<Vec<CoxeterOrder>>) -> Result<Self> {
        let n = coxeter.len();
        let mut gcm = vec![vec![0i64; n]; n];
        for i in 0..n {
            if coxeter[i].len() != n {
                return Err(Error::domain("coxeter", "matrix is not square"));
            }
            if coxeter[i][i] != Some(1) {
                return Err(Error::domain("coxeter", "diagonal entries must be 1"));
            }
            gcm[i][i] = 2;
            for j in 0..n {
                if i == j {
                    continue;
                }
                if coxeter[i][j] != coxeter[j][i] {
                    return Err(Error::domain("coxeter", "matrix is not symmetric"));
                }
                let (a, b) = match coxeter[i][j] {
                    Some(2) => (0, 0),
                    Some(3) => (-1, -1),
                    Some(4) => (-1, -2),
                    Some(6) => (-1, -3),
                    None => (-2, -2),
                    Some(m) => {
                        return Err(Error::unsupported("coxeter", format!("m = {m} has no integral realisation here")))
                    }
                };
                // Lower index carries the -1.
                if i < j {
                    gcm[i][j] = a;
                    gcm[j][i] = b;
                }
            }
        }
        let labels = (1..=n).map(|i| i.to_string()).collect();
        Ok(CoxeterPresentation { name: name.to_string(), labels, coxeter, gcm })
    }

    fn from_gcm(name: String, labels: Vec<String>, gcm: Vec<Vec<i64>>) -> Self {
        let n = gcm.len();
        let coxeter = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Some(1) } else { order_from_product(gcm[i][j] * gcm[j][i]) }).collect())
            .collect();
        CoxeterPresentation { name, labels, coxeter, gcm }
    }

    /// The finite Weyl group of a root system; generator `i` is `s_{i+1}`.
    pub fn finite(root: &RootSystem) -> Self {
        let labels = (1..=root.rank()).map(|i| i.to_string()).collect();
        Self::from_gcm(root.label(), labels, root.cartan().to_vec())
    }

    /// The affine Weyl group generated by the finite reflections and the
    /// reflection in the highest short root. The affine generator is last
    /// and labelled `"0"`.
    pub fn affine(root: &RootSystem) -> Self {
        let r = root.rank();
        let theta = root.highest_short_root().to_vec();
        let theta_weight: WeightVector =
            WeightVector((0..r).map(|i| (0..r).map(|j| root.cartan()[i][j] * theta[j]).sum()).collect());
        let mut gcm = vec![vec![0i64; r + 1]; r + 1];
        for i in 0..r {
            for j in 0..r {
                gcm[i][j] = root.cartan()[i][j];
            }
            // <-θ, α_i^∨> and <α_i, -θ^∨>
            gcm[i][r] = -theta_weight.0[i];
            gcm[r][i] = -root.coroot_pairing(&root.simple_root(i), &theta);
        }
        gcm[r][r] = 2;
        let mut labels: Vec<String> = (1..=r).map(|i| i.to_string()).collect();
        labels.push("0".to_string());
        Self::from_gcm(format!("~{}", root.label()), labels, gcm)
    }

    /// Parses `"A3"` (finite) or `"~A2"` (affine).
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(rest) = name.strip_prefix('~') {
            Ok(Self::affine(&RootSystem::parse(rest)?))
        } else {
            Ok(Self::finite(&RootSystem::parse(name)?))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gcm.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coxeter_matrix(&self) -> &[Vec<CoxeterOrder>] {
        &self.coxeter
    }

    pub fn gcm(&self) -> &[Vec<i64>] {
        &self.gcm
    }

    /// Generator index for a label such as `"2"` or `"0"`.
    pub fn generator(&self, label: &str) -> Result<u8> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u8)
            .ok_or_else(|| Error::domain("generator", format!("unknown generator `{label}` for {}", self.name)))
    }

    /// Parses a space- or comma-separated word of generator labels.
    pub fn parse_word(&self, text: &str) -> Result<Vec<u8>> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| self.generator(t))
            .collect()
    }

    pub fn format_word(&self, word: &[u8]) -> String {
        word.iter().map(|&s| self.labels[s as usize].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// First eight bytes of SHA-256 over the matrix entries.
    pub fn hash(&self) -> u64 {
        let mut h = Sha256::new();
        h.update((self.rank() as u32).to_le_bytes());
        for row in &self.gcm {
            for &a in row {
                h.update(a.to_le_bytes());
            }
        }
        let digest = h.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
    }

    /// Matrix of a word acting on root coordinates.
    pub fn word_matrix(&self, word: &[u8]) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for &t in word {
            self.right_mult_reflection(&mut m, t as usize);
        }
        m
    }

    /// `m ← m · S_t`, where `S_t(e_u) = e_u - A_{tu} e_t`.
    fn right_mult_reflection(&self, m: &mut [Vec<i64>], t: usize) {
        for row in m.iter_mut() {
            let rt = row[t];
            if rt != 0 {
                for (u, x) in row.iter_mut().enumerate() {
                    *x -= rt * self.gcm[t][u];
                }
            }
        }
    }

    /// ShortLex normal form of the product of `word`.
    pub fn normal_form(&self, word: &[u8]) -> Vec<u8> {
        // inv = matrix of w^{-1}; peel off the smallest left descent each step.
        let mut inv = self.word_matrix(&word.iter().rev().copied().collect::<Vec<_>>());
        let n = self.rank();
        let mut out = Vec::with_capacity(word.len());
        loop {
            let descent = (0..n).find(|&t| inv.iter().any(|row| row[t] < 0));
            match descent {
                Some(t) => {
                    out.push(t as u8);
                    self.right_mult_reflection(&mut inv, t);
                }
                None => return out,
            }
        }
    }

    pub fn element(&self, word: &[u8]) -> Result<CoxeterElement> {
        if let Some(&bad) = word.iter().find(|&&s| s as usize >= self.rank()) {
            return Err(Error::domain("word", format!("generator index {bad} out of range")));
        }
        Ok(CoxeterElement { word: self.normal_form(word) })
    }

    pub fn identity(&self) -> CoxeterElement {
        CoxeterElement { word: vec![] }
    }

    /// `x · s` in normal form.
    pub fn multiply(&self, x: &CoxeterElement, s: u8) -> CoxeterElement {
        let mut w = x.word.clone();
        w.push(s);
        CoxeterElement { word: self.normal_form(&w) }
    }

    /// `ℓ(xs) < ℓ(x)`.
    pub fn is_right_descent(&self, x: &CoxeterElement, s: u8) -> bool {
        self.word_matrix(&x.word).iter().any(|row| row[s as usize] < 0)
    }

    /// All elements of length at most `max_len`, by length then ShortLex.
    pub fn elements_up_to(&self, max_len: usize) -> Vec<CoxeterElement> {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut layer = vec![self.identity()];
        seen.insert(vec![]);
        let mut all = layer.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for x in &layer {
                for s in 0..self.rank() as u8 {
                    let y = self.multiply(x, s);
                    if y.len() > x.len() && seen.insert(y.word.clone()) {
                        next.push(y);
                    }
                }
            }
            next.sort();
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }
}

/// Element of a Coxeter group stored as its ShortLex normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoxeterElement {
    word: Vec<u8>,
}

impl CoxeterElement {
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl Ord for CoxeterElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for CoxeterElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KLPolynomial {
    coeffs: Vec<i64>,
}

impl KLPolynomial {
    pub fn zero() -> Self {
        KLPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        KLPolynomial { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        KLPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    fn add_shifted(&mut self, other: &KLPolynomial, shift: usize, factor: i64) {
        if factor == 0 || other.is_zero() {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, 0);
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k + shift] += factor * c;
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl fmt::Display for KLPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match k {
                0 => c.to_string(),
                1 if c == 1 => "q".to_string(),
                1 => format!("{c}q"),
                _ if c == 1 => format!("q^{k}"),
                _ => format!("{c}q^{k}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Default)]
struct State {
    words: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    right: HashMap<(usize, u8), usize>,
    lower: HashMap<usize, HashSet<usize>>,
    kl: HashMap<(usize, usize), KLPolynomial>,
}

/// Memoised KL polynomials for one presentation.
pub struct KlEngine {
    pres: CoxeterPresentation,
    max_length: usize,
    state: RwLock<State>,
}

pub const DEFAULT_MAX_LENGTH: usize = 14;

impl KlEngine {
    pub fn new(pres: CoxeterPresentation) -> Self {
        Self::with_max_length(pres, DEFAULT_MAX_LENGTH)
    }

    pub fn with_max_length(pres: CoxeterPresentation, max_length: usize) -> Self {
        KlEngine { pres, max_length, state: RwLock::new(State::default()) }
    }

    pub fn presentation(&self) -> &CoxeterPresentation {
        &self.pres
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    fn check_cap(&self, w: &CoxeterElement) -> Result<()> {
        if w.len() > self.max_length {
            return Err(Error::resource(
                "length",
                format!("element of length {} exceeds the KL cap {}", w.len(), self.max_length),
            ));
        }
        Ok(())
    }

    /// `x ≤ w` in Bruhat order.
    pub fn bruhat_leq(&self, x: &CoxeterElement, w: &CoxeterElement) -> Result<bool> {
        if x.len() > w.len() {
            return Ok(false);
        }
        self.check_cap(w)?;
        let mut st = self.state.write().expect("KL lock poisoned");
        let xi = self.intern(&mut st, &x.word);
        let wi = self.intern(&mut st, &w.word);
        self.lower_ideal(&mut st, wi);
        Ok(st.lower[&wi].contains(&xi))
    }

    /// `P_{x,w}`.
    pub fn kl_polynomial(&self, x: &CoxeterElement, w: &CoxeterElement) -> Result<KLPolynomial> {
        self.check_cap(w)?;
        {
            let st = self.state.read().expect("KL lock poisoned");
            if let (Some(&xi), Some(&wi)) = (st.index.get(&x.word), st.index.get(&w.word)) {
                if let Some(p) = st.kl.get(&(xi, wi)) {
                    return Ok(p.clone());
                }
            }
        }
        let mut st = self.state.write().expect("KL lock poisoned");
        let xi = self.intern(&mut st, &x.word);
        let wi = self.intern(&mut st, &w.word);
        Ok(self.kl(&mut st, xi, wi))
    }

    /// Elements `z ≤ w`, in length-then-ShortLex order.
    pub fn lower_interval(&self, w: &CoxeterElement) -> Result<Vec<CoxeterElement>> {
        self.check_cap(w)?;
        let mut st = self.state.write().expect("KL lock poisoned");
        let wi = self.intern(&mut st, &w.word);
        self.lower_ideal(&mut st, wi);
        let mut out: Vec<CoxeterElement> =
            st.lower[&wi].iter().map(|&i| CoxeterElement { word: st.words[i].clone() }).collect();
        out.sort();
        Ok(out)
    }

    /// Memoised pairs, keyed by normal-form words.
    pub fn entries(&self) -> Vec<(CoxeterElement, CoxeterElement, KLPolynomial)> {
        let st = self.state.read().expect("KL lock poisoned");
        let mut out: Vec<_> = st
            .kl
            .iter()
            .map(|(&(x, w), p)| {
                (CoxeterElement { word: st.words[x].clone() }, CoxeterElement { word: st.words[w].clone() }, p.clone())
            })
            .collect();
        out.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
        out
    }

    /// Seeds the memo with externally computed values.
    pub fn insert(&self, x: &CoxeterElement, w: &CoxeterElement, p: KLPolynomial) {
        let mut st = self.state.write().expect("KL lock poisoned");
        let xi = self.intern(&mut st, &x.word);
        let wi = self.intern(&mut st, &w.word);
        st.kl.insert((xi, wi), p);
    }

    fn intern(&self, st: &mut State, word: &[u8]) -> usize {
        if let Some(&i) = st.index.get(word) {
            return i;
        }
        let i = st.words.len();
        st.words.push(word.to_vec());
        st.index.insert(word.to_vec(), i);
        i
    }

    fn right_mult(&self, st: &mut State, x: usize, s: u8) -> usize {
        if let Some(&y) = st.right.get(&(x, s)) {
            return y;
        }
        let mut w = st.words[x].clone();
        if w.last() == Some(&s) {
            w.pop();
        } else {
            w.push(s);
            w = self.pres.normal_form(&w);
        }
        let y = self.intern(st, &w);
        st.right.insert((x, s), y);
        st.right.insert((y, s), x);
        y
    }

    fn lower_ideal(&self, st: &mut State, w: usize) {
        if st.lower.contains_key(&w) {
            return;
        }
        let word = st.words[w].clone();
        let Some((&s, prefix)) = word.split_last() else {
            st.lower.insert(w, HashSet::from([w]));
            return;
        };
        // Everything below us is below u or of the form ys with y ≤ u.
        let u = self.intern(st, prefix);
        self.lower_ideal(st, u);
        let below_u: Vec<usize> = st.lower[&u].iter().copied().collect();
        let mut set: HashSet<usize> = below_u.iter().copied().collect();
        for y in below_u {
            let ys = self.right_mult(st, y, s);
            set.insert(ys);
        }
        st.lower.insert(w, set);
    }

    fn is_below(&self, st: &mut State, x: usize, w: usize) -> bool {
        self.lower_ideal(st, w);
        st.lower[&w].contains(&x)
    }

    fn mu(&self, st: &mut State, z: usize, v: usize) -> i64 {
        let d = st.words[v].len() - st.words[z].len();
        if d % 2 == 0 {
            return 0;
        }
        self.kl(st, z, v).coeff((d - 1) / 2)
    }

    fn kl(&self, st: &mut State, x: usize, w: usize) -> KLPolynomial {
        if let Some(p) = st.kl.get(&(x, w)) {
            return p.clone();
        }
        let p = if x == w {
            KLPolynomial::one()
        } else if !self.is_below(st, x, w) {
            KLPolynomial::zero()
        } else {
            let word = st.words[w].clone();
            let s = *word.last().expect("w > x so w is not the identity");
            let v = self.intern(st, &word[..word.len() - 1]);
            let xs = self.right_mult(st, x, s);
            let c = usize::from(st.words[xs].len() < st.words[x].len());
            let mut p = KLPolynomial::zero();
            let a = self.kl(st, xs, v);
            p.add_shifted(&a, 1 - c, 1);
            let b = self.kl(st, x, v);
            p.add_shifted(&b, c, 1);
            let mut zs: Vec<usize> = st.lower[&v].iter().copied().filter(|&z| z != v).collect();
            zs.sort_unstable();
            let lw = word.len();
            for z in zs {
                let zs_ = self.right_mult(st, z, s);
                if st.words[zs_].len() > st.words[z].len() || !self.is_below(st, x, z) {
                    continue;
                }
                let m = self.mu(st, z, v);
                if m != 0 {
                    let pxz = self.kl(st, x, z);
                    p.add_shifted(&pxz, (lw - st.words[z].len()) / 2, -m);
                }
            }
            p
        };
        st.kl.insert((x, w), p.clone());
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> CoxeterPresentation {
        CoxeterPresentation::parse(&format!("A{n}")).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let p = a(2);
        let e = p.identity();
        let s1 = p.multiply(&e, 0);
        assert_eq!(s1.word(), &[0]);
        assert!(p.multiply(&s1, 0).is_identity());
        let x = p.element(&[0, 1, 0]).unwrap();
        let y = p.multiply(&x, 1);
        assert_eq!(y.word(), &[1, 0]);
        assert_eq!(p.word_matrix(y.word()), p.word_matrix(&[0, 1, 0, 1]));
    }

    #[test]
    fn coxeter_orders_from_root_data() {
        let g2 = CoxeterPresentation::parse("G2").unwrap();
        assert_eq!(g2.coxeter_matrix()[0][1], Some(6));
        let aff = CoxeterPresentation::parse("~A1").unwrap();
        assert_eq!(aff.coxeter_matrix()[0][1], None);
        assert_eq!(aff.labels(), &["1".to_string(), "0".to_string()]);
        let b2 = CoxeterPresentation::parse("~B2").unwrap();
        assert_eq!(b2.coxeter_matrix()[0][2], Some(4));
        assert_eq!(b2.coxeter_matrix()[1][2], Some(2));
        let a2 = CoxeterPresentation::parse("~A2").unwrap();
        assert!(a2.coxeter_matrix().iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &m)| i == j || m == Some(3))));
    }

    #[test]
    fn finite_group_sizes() {
        assert_eq!(a(2).elements_up_to(10).len(), 6);
        assert_eq!(a(3).elements_up_to(20).len(), 24);
        assert_eq!(CoxeterPresentation::parse("B3").unwrap().elements_up_to(20).len(), 48);
        // Affine A1: two elements of each positive length.
        let aff = CoxeterPresentation::parse("~A1").unwrap();
        assert_eq!(aff.elements_up_to(6).len(), 13);
    }

    #[test]
    fn bruhat_examples() {
        let p = a(2);
        let eng = KlEngine::new(p.clone());
        let el = |w: &[u8]| p.element(w).unwrap();
        assert!(eng.bruhat_leq(&el(&[]), &el(&[0, 1])).unwrap());
        assert!(!eng.bruhat_leq(&el(&[0]), &el(&[1])).unwrap());
        assert!(eng.bruhat_leq(&el(&[0, 1]), &el(&[0, 1, 0])).unwrap());
    }

    #[test]
    fn smallest_nontrivial_kl_polynomial() {
        let p = a(3);
        let eng = KlEngine::new(p.clone());
        let x = p.element(&[1]).unwrap();
        let w = p.element(&[1, 0, 2, 1]).unwrap();
        assert_eq!(eng.kl_polynomial(&x, &w).unwrap().coeffs(), &[1, 1]);
        assert_eq!(eng.kl_polynomial(&w, &w).unwrap(), KLPolynomial::one());
    }

    #[test]
    fn length_cap_is_enforced() {
        let p = CoxeterPresentation::parse("~A1").unwrap();
        let eng = KlEngine::with_max_length(p.clone(), 4);
        let w = p.element(&[0, 1, 0, 1, 0]).unwrap();
        assert!(matches!(eng.kl_polynomial(&p.identity(), &w), Err(Error::Resource { .. })));
    }

    #[test]
    fn word_parsing() {
        let p = a(3);
        assert_eq!(p.parse_word("2 1 3 2").unwrap(), vec![1, 0, 2, 1]);
        assert_eq!(p.format_word(&[1, 0, 2, 1]), "2 1 3 2");
        assert!(p.parse_word("4").is_err());
        assert!(p.element(&[7]).is_err());
    }

    #[test]
    fn display_polynomial() {
        assert_eq!(KLPolynomial::from_coeffs(vec![1, 2, 0, 1, 0]).to_string(), "1 + 2q + q^3");
        assert_eq!(KLPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn bad_coxeter_matrices() {
        let m = vec![vec![Some(1), Some(5)], vec![Some(5), Some(1)]];
        assert!(matches!(CoxeterPresentation::from_coxeter_matrix("H2", m), Err(Error::Unsupported { .. })));
        let m = vec![vec![Some(1), Some(3)], vec![Some(2), Some(1)]];
        assert!(CoxeterPresentation::from_coxeter_matrix("X", m).is_err());
        let m = vec![vec![Some(1), None], vec![None, Some(1)]];
        let p = CoxeterPresentation::from_coxeter_matrix("I2(inf)", m).unwrap();
        assert_eq!(p.element(&[0, 1, 0, 1, 0, 1]).unwrap().len(), 6);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normal_form_preserves_matrix(
            name in prop::sample::select(vec!["A3", "B3", "G2", "~A2", "~B2", "~G2"]),
            raw in proptest::collection::vec(0u8..4, 0..14),
        ) {
            let p = CoxeterPresentation::parse(name).unwrap();
            let word: Vec<u8> = raw.into_iter().map(|s| s % p.rank() as u8).collect();
            let nf = p.normal_form(&word);
            prop_assert_eq!(p.word_matrix(&nf), p.word_matrix(&word));
            prop_assert!(nf.len() <= word.len());
            prop_assert_eq!(nf.len() % 2, word.len() % 2);
            prop_assert_eq!(p.normal_form(&nf), nf.clone());
        }

        #[test]
        fn multiply_changes_length_by_one(
            raw in proptest::collection::vec(0u8..3, 0..12),
            s in 0u8..3,
        ) {
            let p = CoxeterPresentation::parse("~A2").unwrap();
            let x = p.element(&raw).unwrap();
            let y = p.multiply(&x, s);
            prop_assert_eq!((y.len() as i64 - x.len() as i64).abs(), 1);
            prop_assert_eq!(y.len() < x.len(), p.is_right_descent(&x, s));
        }
    }
}
