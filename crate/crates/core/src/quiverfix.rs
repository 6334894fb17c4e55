//! Fixed-point components of `T*Gr(w)` under a `Z/p` grading of the
//! framing, their Poincaré polynomials and weight bookkeeping (type A1).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weightlat::{Character, RootSystem, WeightVector};

/// One fixed component: framings `w_s` and dimension labels `v_s` per
/// eigenvalue `ζ^s`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FixedComponentDescriptor {
    pub p: u64,
    pub w: Vec<u64>,
    pub v: Vec<u64>,
}

impl FixedComponentDescriptor {
    pub fn new(p: u64, w: Vec<u64>, v: Vec<u64>) -> Result<Self> {
        if p == 0 || w.len() != p as usize || v.len() != p as usize {
            return Err(Error::domain("v", "need exactly p framings and p labels"));
        }
        if let Some(s) = (0..w.len()).find(|&s| v[s] > w[s]) {
            return Err(Error::domain("v", format!("v_{s} = {} exceeds w_{s} = {}", v[s], w[s])));
        }
        Ok(FixedComponentDescriptor { p, w, v })
    }

    pub fn is_even(&self) -> bool {
        self.v.windows(2).all(|x| x[0] == x[1])
    }

    /// `Σ_s (w_s - v_s)·v_{s-1}`, indices mod p.
    pub fn fiber_rank(&self) -> u64 {
        let p = self.v.len();
        (0..p).map(|s| (self.w[s] - self.v[s]) * self.v[(s + p - 1) % p]).sum()
    }

    /// `Σ_s v_s (w_s - v_s)`, the dimension of the Grassmannian base.
    pub fn base_dim(&self) -> u64 {
        self.w.iter().zip(&self.v).map(|(w, v)| v * (w - v)).sum()
    }

    pub fn total_v(&self) -> u64 {
        self.v.iter().sum()
    }

    pub fn rotate(&self) -> Self {
        let mut v = self.v.clone();
        v.rotate_right(1);
        let mut w = self.w.clone();
        w.rotate_right(1);
        FixedComponentDescriptor { p: self.p, w, v }
    }
}

fn check_divisible(w: u64, p: u64) -> Result<()> {
    if p == 0 || w % p != 0 {
        return Err(Error::domain("w", format!("p = {p} does not divide w = {w}")));
    }
    Ok(())
}

/// All labels `0 ≤ v_s ≤ w/p`, in lexicographic order.
pub fn enumerate_components(w: u64, p: u64) -> Result<Vec<FixedComponentDescriptor>> {
    check_divisible(w, p)?;
    let m = w / p;
    let mut labels: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..p {
        labels = labels
            .into_iter()
            .flat_map(|l| {
                (0..=m).map(move |x| {
                    let mut l = l.clone();
                    l.push(x);
                    l
                })
            })
            .collect();
    }
    Ok(labels.into_iter().map(|v| FixedComponentDescriptor { p, w: vec![m; p as usize], v }).collect())
}

/// Gaussian binomial `[n choose k]_q` as coefficients in `q`.
pub fn gaussian_binomial(n: u64, k: u64) -> Vec<i64> {
    if k > n {
        return vec![];
    }
    // rows[j] = [i choose j]_q for the current i
    let mut rows: Vec<Vec<i64>> = vec![vec![1]];
    for i in 1..=n {
        let mut next = vec![vec![1]];
        for j in 1..=i.min(k) as usize {
            let a = rows.get(j - 1).cloned().unwrap_or_default();
            let b = rows.get(j).cloned().unwrap_or_default();
            let mut c = vec![0; a.len().max(b.len() + j)];
            for (d, x) in a.iter().enumerate() {
                c[d] += x;
            }
            for (d, x) in b.iter().enumerate() {
                c[d + j] += x;
            }
            while c.len() > 1 && c.last() == Some(&0) {
                c.pop();
            }
            next.push(c);
        }
        rows = next;
    }
    rows.swap_remove(k as usize)
}

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

fn in_t_squared(q_poly: &[i64]) -> Vec<i64> {
    let mut out = vec![0; (2 * q_poly.len()).saturating_sub(1)];
    for (d, c) in q_poly.iter().enumerate() {
        out[2 * d] = *c;
    }
    out
}

/// `Π_s [w_s choose v_s](t²)` as coefficients in `t`.
pub fn poincare_polynomial(d: &FixedComponentDescriptor) -> Vec<i64> {
    d.w.iter().zip(&d.v).fold(vec![1], |acc, (&w, &v)| poly_mul(&acc, &in_t_squared(&gaussian_binomial(w, v))))
}

/// Poincaré polynomial of `T*Gr(v, w)`, i.e. of `Gr(v, w)`.
pub fn grassmannian_poincare(v: u64, w: u64) -> Vec<i64> {
    in_t_squared(&gaussian_binomial(w, v))
}

pub fn eval_at_one(poly: &[i64]) -> i64 {
    poly.iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenMatch {
    pub v: u64,
    pub component: FixedComponentDescriptor,
    pub fixed_poincare: Vec<i64>,
    pub product_poincare: Vec<i64>,
    pub fixed_fiber_rank: u64,
    pub product_fiber_rank: u64,
    /// Degree shift between the two sides coming from the fibers.
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenIsoReport {
    pub w: u64,
    pub p: u64,
    pub holds: bool,
    pub constant_shift: bool,
    pub pairs: Vec<EvenMatch>,
}

/// Matches the even components against `Π_p T*Gr(v, w/p)`: bases,
/// fiber ranks and Poincaré polynomials. The product side is computed
/// from `p` separate Grassmannian factors, each with its cotangent fiber.
pub fn verify_a1_even_iso(w: u64, p: u64) -> Result<EvenIsoReport> {
    check_divisible(w, p)?;
    let m = w / p;
    let mut pairs = Vec::new();
    for d in enumerate_components(w, p)?.into_iter().filter(FixedComponentDescriptor::is_even) {
        let v = d.v[0];
        let factor = grassmannian_poincare(v, m);
        let product_poincare = (0..p).fold(vec![1], |acc, _| poly_mul(&acc, &factor));
        let product_fiber_rank = p * v * (m - v);
        let fixed_fiber_rank = d.fiber_rank();
        pairs.push(EvenMatch {
            v,
            fixed_poincare: poincare_polynomial(&d),
            component: d,
            product_poincare,
            fixed_fiber_rank,
            product_fiber_rank,
            shift: 2 * (fixed_fiber_rank as i64 - product_fiber_rank as i64),
        });
    }
    let constant_shift = pairs.windows(2).all(|x| x[0].shift == x[1].shift);
    let holds = constant_shift
        && pairs.iter().all(|m| {
            m.fixed_poincare == m.product_poincare
                && m.fixed_fiber_rank == m.product_fiber_rank
                && m.component.base_dim() == p * m.v * (w / p - m.v)
        });
    Ok(EvenIsoReport { w, p, holds, constant_shift, pairs })
}

/// `μ(v, w) = Σ w_k ϖ_k - Σ v_k α_k` in fundamental coordinates.
pub fn weight_of_component(root: &RootSystem, v: &[i64], w: &[i64]) -> Result<WeightVector> {
    let r = root.rank();
    if v.len() != r || w.len() != r {
        return Err(Error::domain("v", format!("need vectors of length {r}")));
    }
    let mut mu = w.to_vec();
    for (j, &vj) in v.iter().enumerate() {
        let alpha = root.simple_root(j);
        for (i, slot) in mu.iter_mut().enumerate() {
            *slot -= vj * alpha.0[i];
        }
    }
    Ok(WeightVector(mu))
}

/// `Σ_v Betti(T*Gr(v,w))·e^{μ(v,w)}` for `sl2`.
pub fn weight_generating_function(w: u64) -> Character {
    let root = RootSystem::parse("A1").expect("A1 is valid");
    let mut out = Character::zero();
    for v in 0..=w {
        let mu = weight_of_component(&root, &[v as i64], &[w as i64]).expect("rank 1 vectors");
        out.add_term(mu, eval_at_one(&grassmannian_poincare(v, w)));
    }
    out
}

/// Orbits of the uneven labels under cyclic rotation.
pub fn uneven_orbits(w: u64, p: u64) -> Result<Vec<Vec<FixedComponentDescriptor>>> {
    let mut seen: BTreeSet<FixedComponentDescriptor> = BTreeSet::new();
    let mut orbits = Vec::new();
    for d in enumerate_components(w, p)? {
        if d.is_even() || seen.contains(&d) {
            continue;
        }
        let mut orbit = vec![d.clone()];
        let mut cur = d.rotate();
        while cur != d {
            orbit.push(cur.clone());
            cur = cur.rotate();
        }
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylchar::weyl_character;

    #[test]
    fn enumeration_examples() {
        let c = enumerate_components(2, 2).unwrap();
        assert_eq!(c.len(), 4);
        let even: Vec<_> = c.iter().filter(|d| d.is_even()).map(|d| d.v.clone()).collect();
        assert_eq!(even, vec![vec![0, 0], vec![1, 1]]);
        let c = enumerate_components(4, 2).unwrap();
        assert_eq!((c.len(), c.iter().filter(|d| d.is_even()).count()), (9, 3));
        let single = enumerate_components(3, 3).unwrap();
        assert!(single[0].is_even() && single[0].v == vec![0, 0, 0]);
        assert!(matches!(enumerate_components(5, 2), Err(Error::Domain { .. })));
        assert!(FixedComponentDescriptor::new(2, vec![1, 1], vec![2, 0]).is_err());
    }

    #[test]
    fn fiber_rank_formula() {
        let d = FixedComponentDescriptor::new(3, vec![2, 2, 2], vec![1, 0, 2]).unwrap();
        // (2-1)·2 + (2-0)·1 + (2-2)·0
        assert_eq!(d.fiber_rank(), 4);
        assert_eq!(d.base_dim(), 1);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1), vec![1, 1]);
        assert_eq!(gaussian_binomial(4, 2), vec![1, 1, 2, 1, 1]);
        assert_eq!(gaussian_binomial(5, 0), vec![1]);
        assert_eq!(gaussian_binomial(5, 5), vec![1]);
        assert!(gaussian_binomial(2, 3).is_empty());
    }

    #[test]
    fn poincare_examples() {
        assert_eq!(grassmannian_poincare(1, 2), vec![1, 0, 1]);
        let pt = FixedComponentDescriptor::new(2, vec![2, 2], vec![0, 0]).unwrap();
        assert_eq!(poincare_polynomial(&pt), vec![1]);
        let d = FixedComponentDescriptor::new(2, vec![2, 2], vec![1, 1]).unwrap();
        assert_eq!(poincare_polynomial(&d), vec![1, 0, 2, 0, 1]);
    }

    #[test]
    fn even_iso_examples() {
        let r = verify_a1_even_iso(2, 2).unwrap();
        assert!(r.holds);
        assert_eq!(r.pairs.iter().map(|m| m.v).collect::<Vec<_>>(), vec![0, 1]);
        assert!(verify_a1_even_iso(3, 3).unwrap().holds);
        let r = verify_a1_even_iso(6, 3).unwrap();
        assert!(r.holds && r.pairs.len() == 3);
    }

    #[test]
    fn weight_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(weight_of_component(&a1, &[0], &[3]).unwrap(), WeightVector(vec![3]));
        assert_eq!(weight_of_component(&a1, &[1], &[3]).unwrap(), WeightVector(vec![1]));
        let a2 = RootSystem::parse("A2").unwrap();
        assert_eq!(weight_of_component(&a2, &[1, 0], &[1, 1]).unwrap(), WeightVector(vec![-1, 2]));
    }

    #[test]
    fn generating_function_is_a_tensor_power() {
        let chi1 = weyl_character(&RootSystem::parse("A1").unwrap(), &WeightVector(vec![1])).unwrap();
        let mut power = Character::one(1);
        for w in 0..=8 {
            assert_eq!(weight_generating_function(w), power, "w = {w}");
            power = &power * &chi1;
        }
    }

    #[test]
    fn uneven_orbits_are_free() {
        let orbits = uneven_orbits(4, 2).unwrap();
        assert_eq!(orbits.len(), 3);
        assert!(orbits.iter().all(|o| o.len() == 2));
    }
}
