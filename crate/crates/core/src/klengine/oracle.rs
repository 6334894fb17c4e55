//! Brute-force reference route: Bruhat order by subword enumeration,
//! R-polynomials, and `P_{x,w}` from the inversion formula
//! `P_{x,w} = -trunc_{≤(ℓ(w)-ℓ(x)-1)/2} Σ_{x<y≤w} R_{x,y} P_{y,w}`.
//!
//! Deliberately shares nothing with [`super::KlEngine`] beyond normal forms.

use std::collections::{HashMap, HashSet};

use super::{CoxeterElement, CoxeterPresentation, KLPolynomial};

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &mut Vec<i64>, b: &[i64], factor: i64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, y) in b.iter().enumerate() {
        a[i] += factor * y;
    }
}

pub struct Oracle<'a> {
    pres: &'a CoxeterPresentation,
    below: HashMap<Vec<u8>, HashSet<Vec<u8>>>,
    r: HashMap<(Vec<u8>, Vec<u8>), Vec<i64>>,
}

impl<'a> Oracle<'a> {
    pub fn new(pres: &'a CoxeterPresentation) -> Self {
        Oracle { pres, below: HashMap::new(), r: HashMap::new() }
    }

    /// Normal forms of all subword products of `w`'s reduced word.
    pub fn subword_ideal(&mut self, w: &CoxeterElement) -> &HashSet<Vec<u8>> {
        let key = w.word().to_vec();
        if !self.below.contains_key(&key) {
            let word = w.word();
            let mut set = HashSet::new();
            for mask in 0u64..(1u64 << word.len()) {
                let sub: Vec<u8> = word.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
                set.insert(self.pres.normal_form(&sub));
            }
            self.below.insert(key.clone(), set);
        }
        &self.below[&key]
    }

    pub fn bruhat_leq(&mut self, x: &CoxeterElement, w: &CoxeterElement) -> bool {
        x.len() <= w.len() && self.subword_ideal(w).contains(x.word())
    }

    fn mult(&self, x: &[u8], s: u8) -> Vec<u8> {
        let mut v = x.to_vec();
        v.push(s);
        self.pres.normal_form(&v)
    }

    /// `R_{x,w}`.
    pub fn r_polynomial(&mut self, x: &[u8], w: &[u8]) -> Vec<i64> {
        if let Some(r) = self.r.get(&(x.to_vec(), w.to_vec())) {
            return r.clone();
        }
        let value = if x == w {
            vec![1]
        } else if x.len() >= w.len() {
            vec![]
        } else {
            let s = *w.last().unwrap();
            let ws = &w[..w.len() - 1];
            let xs = self.mult(x, s);
            if xs.len() < x.len() {
                self.r_polynomial(&xs, ws)
            } else {
                // (q - 1) R_{x,ws} + q R_{xs,ws}
                let mut out = poly_mul(&[-1, 1], &self.r_polynomial(x, ws));
                let b = self.r_polynomial(&xs, ws);
                poly_add(&mut out, &poly_mul(&[0, 1], &b), 1);
                out
            }
        };
        self.r.insert((x.to_vec(), w.to_vec()), value.clone());
        value
    }

    /// `P_{x,w}` for every `x ≤ w`.
    pub fn kl_column(&mut self, w: &CoxeterElement) -> HashMap<Vec<u8>, KLPolynomial> {
        let mut interval: Vec<Vec<u8>> = self.subword_ideal(w).iter().cloned().collect();
        interval.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut col: HashMap<Vec<u8>, KLPolynomial> = HashMap::new();
        for x in &interval {
            if x.as_slice() == w.word() {
                col.insert(x.clone(), KLPolynomial::one());
                continue;
            }
            let d = w.len() - x.len();
            let mut sum: Vec<i64> = vec![];
            for y in &interval {
                if y.len() <= x.len() {
                    continue;
                }
                let r = self.r_polynomial(x, y);
                if r.is_empty() {
                    continue;
                }
                poly_add(&mut sum, &poly_mul(&r, col[y].coeffs()), 1);
            }
            let keep = (d - 1) / 2 + 1;
            let truncated: Vec<i64> = sum.iter().take(keep).map(|c| -c).collect();
            col.insert(x.clone(), KLPolynomial::from_coeffs(truncated));
        }
        col
    }
}

/// All `P_{x,w}` with `ℓ(w) ≤ max_len`, including zero entries.
pub fn kl_table(pres: &CoxeterPresentation, max_len: usize) -> Vec<(CoxeterElement, CoxeterElement, KLPolynomial)> {
    let elements = pres.elements_up_to(max_len);
    let mut oracle = Oracle::new(pres);
    let mut out = Vec::new();
    for w in &elements {
        let col = oracle.kl_column(w);
        for x in &elements {
            let p = col.get(x.word()).cloned().unwrap_or_else(KLPolynomial::zero);
            out.push((x.clone(), w.clone(), p));
        }
    }
    out
}
