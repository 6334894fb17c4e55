//! Weyl characters `χ_λ = E⁰_λ`, with Freudenthal multiplicities and
//! tensor-product decomposition as independent oracles.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::weightlat::{weyl_group_elements, Character, Limits, RootSystem, WeightVector, Q};

/// Divides `f` by `1 - e^{-α}` where `alpha` is in weight coordinates.
fn divide_by_root_factor(f: &Character, alpha: &WeightVector) -> Result<Character> {
    // Strings are the cosets μ + Zα; key each by a representative.
    let j = alpha.0.iter().position(|&c| c != 0).expect("roots are nonzero");
    let aj = alpha.0[j];
    let mut strings: HashMap<WeightVector, BTreeMap<i64, i64>> = HashMap::new();
    for (mu, c) in f.terms() {
        let k = Integer::div_floor(&mu.0[j], &aj);
        let rep = mu - &alpha.scale(k);
        strings.entry(rep).or_default().insert(k, c);
    }
    let mut out = Character::zero();
    for (rep, ks) in strings {
        // g(μ) = Σ_{k≥0} f(μ + kα), walking each string downward.
        let top = *ks.keys().next_back().unwrap();
        let bottom = *ks.keys().next().unwrap();
        let mut running = 0i64;
        for k in (bottom..=top).rev() {
            running += ks.get(&k).copied().unwrap_or(0);
            out.add_term(&rep + &alpha.scale(k), running);
        }
        if running != 0 {
            return Err(Error::domain("character", "alternating sum is not divisible by the Weyl denominator"));
        }
    }
    Ok(out)
}

/// `χ_λ` by the alternating-sum formula, evaluated by exact Laurent division.
pub fn weyl_character(root: &RootSystem, lambda: &WeightVector) -> Result<Character> {
    weyl_character_with(root, lambda, &Limits::default())
}

pub fn weyl_character_with(root: &RootSystem, lambda: &WeightVector, limits: &Limits) -> Result<Character> {
    root.check_dominant(lambda)?;
    let group = weyl_group_elements(root, limits)?;
    let shifted = lambda + &root.rho();
    let mut numerator = Character::from_terms(group.iter().map(|w| (w.apply(&shifted), w.sign())));
    // Σ_w (-1)^ℓ(w) e^{wρ} = e^ρ Π_{α>0} (1 - e^{-α})
    for alpha in root.positive_root_weights() {
        numerator = divide_by_root_factor(&numerator, alpha)?;
    }
    let rho = root.rho();
    Ok(Character::from_terms(numerator.terms().map(|(mu, c)| (mu - &rho, c))))
}

/// Weight multiplicities of the simple module `L(λ)` by Freudenthal's recursion.
pub fn freudenthal_multiplicities(root: &RootSystem, lambda: &WeightVector) -> Result<BTreeMap<WeightVector, i64>> {
    root.check_dominant(lambda)?;
    let n = root.rank();
    let lowest = -&root.dominant_conjugate(&-lambda);
    let span: Vec<i64> = root
        .root_coordinates(&(lambda - &lowest))
        .iter()
        .map(|x| x.to_integer())
        .collect();

    // Candidate weights λ - Σ c_i α_i with 0 ≤ c ≤ span, filtered by dominance.
    let simple: Vec<WeightVector> = (0..n).map(|j| root.simple_root(j)).collect();
    let mut weights: Vec<(i64, WeightVector)> = Vec::new();
    let mut c = vec![0i64; n];
    loop {
        let mut mu = lambda.clone();
        for j in 0..n {
            mu = &mu - &simple[j].scale(c[j]);
        }
        if root.dominates(lambda, &root.dominant_conjugate(&mu)) {
            weights.push((c.iter().sum(), mu));
        }
        let mut j = 0;
        while j < n {
            c[j] += 1;
            if c[j] <= span[j] {
                break;
            }
            c[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    weights.sort();

    let rho = root.rho();
    let top = lambda + &rho;
    let top_norm = root.inner_product(&top, &top);
    let mut mult: HashMap<WeightVector, i64> = HashMap::new();
    for (depth, mu) in weights {
        if depth == 0 {
            mult.insert(mu, 1);
            continue;
        }
        let mut rhs = Q::zero();
        for alpha in root.positive_root_weights() {
            let mut nu = &mu + alpha;
            while let Some(&m) = mult.get(&nu) {
                rhs += root.inner_product(&nu, alpha) * Q::from_integer(m);
                nu = &nu + alpha;
            }
        }
        let shifted = &mu + &rho;
        let denom = top_norm - root.inner_product(&shifted, &shifted);
        let value = rhs * Q::from_integer(2) / denom;
        if !value.is_integer() || value.is_negative() {
            return Err(Error::domain("weight", format!("non-integral multiplicity at {mu}")));
        }
        let value = value.to_integer();
        if value != 0 {
            mult.insert(mu, value);
        }
    }
    Ok(mult.into_iter().collect())
}

/// The character assembled from [`freudenthal_multiplicities`].
pub fn freudenthal_character(root: &RootSystem, lambda: &WeightVector) -> Result<Character> {
    Ok(Character::from_terms(freudenthal_multiplicities(root, lambda)?))
}

/// `dim L(λ) = Π_{α>0} <λ+ρ, α^∨> / <ρ, α^∨>`.
pub fn weyl_dimension(root: &RootSystem, lambda: &WeightVector) -> Result<i64> {
    root.check_dominant(lambda)?;
    let rho = root.rho();
    let shifted = lambda + &rho;
    let mut d = Q::one();
    for beta in root.positive_roots() {
        d *= Q::new(root.coroot_pairing(&shifted, beta), root.coroot_pairing(&rho, beta));
    }
    Ok(d.to_integer())
}

/// Decomposes `a · b` into irreducible characters by highest-term extraction.
pub fn tensor_decompose(root: &RootSystem, a: &Character, b: &Character) -> Result<BTreeMap<WeightVector, i64>> {
    for (name, ch) in [("left", a), ("right", b)] {
        if !ch.is_weyl_invariant(root) {
            return Err(Error::domain(name, "character is not Weyl-invariant"));
        }
    }
    decompose(root, &(a * b))
}

/// Writes a Weyl-invariant character as `Σ m_ν χ_ν`, requiring `m_ν ≥ 0`.
pub fn decompose(root: &RootSystem, ch: &Character) -> Result<BTreeMap<WeightVector, i64>> {
    let mut rest = ch.clone();
    let mut out = BTreeMap::new();
    while let Some((nu, c)) = rest.highest_dominant_term(root) {
        if c < 0 {
            return Err(Error::domain("character", format!("negative multiplicity {c} at {nu}")));
        }
        let chi = weyl_character(root, &nu)?;
        rest = &rest - &chi.scale(c);
        out.insert(nu, c);
    }
    if !rest.is_empty() {
        return Err(Error::domain("character", "character is not Weyl-invariant"));
    }
    Ok(out)
}

/// Shared memo of Weyl characters keyed by root system label and weight.
#[derive(Default)]
pub struct WeylCache {
    table: RwLock<HashMap<(String, WeightVector), Character>>,
}

impl WeylCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, root: &RootSystem, lambda: &WeightVector) -> Result<Character> {
        let key = (root.label(), lambda.clone());
        if let Some(hit) = self.table.read().expect("cache lock poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let ch = weyl_character(root, lambda)?;
        self.table.write().expect("cache lock poisoned").insert(key, ch.clone());
        Ok(ch)
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Characters indexed by dominant highest weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantCharacterTable {
    root: RootSystem,
    entries: BTreeMap<WeightVector, Character>,
}

impl DominantCharacterTable {
    pub fn new(root: RootSystem) -> Self {
        DominantCharacterTable { root, entries: BTreeMap::new() }
    }

    pub fn root(&self) -> &RootSystem {
        &self.root
    }

    /// Inserts after checking Weyl invariance and a leading `e^λ` with coefficient 1.
    pub fn insert(&mut self, lambda: WeightVector, ch: Character) -> Result<()> {
        self.root.check_dominant(&lambda)?;
        if !ch.is_weyl_invariant(&self.root) {
            return Err(Error::domain("table", format!("entry {lambda} is not Weyl-invariant")));
        }
        if ch.coeff(&lambda) != 1 || ch.terms().any(|(mu, _)| !self.root.dominates(&lambda, mu)) {
            return Err(Error::domain("table", format!("entry {lambda} does not have leading term e^{lambda}")));
        }
        self.entries.insert(lambda, ch);
        Ok(())
    }

    pub fn get(&self, lambda: &WeightVector) -> Option<&Character> {
        self.entries.get(lambda)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&WeightVector, &Character)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> WeightVector {
        WeightVector(v.to_vec())
    }

    /// Multiplicities of `L(a)` for sl2, written out by hand.
    fn sl2_oracle(a: i64) -> Character {
        Character::from_terms((0..=a).map(|k| (w(&[a - 2 * k]), 1)))
    }

    #[test]
    fn sl2_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        let chi2 = weyl_character(&a1, &w(&[2])).unwrap();
        assert_eq!(chi2, Character::from_terms([(w(&[2]), 1), (w(&[0]), 1), (w(&[-2]), 1)]));
        for a in 0..12 {
            assert_eq!(weyl_character(&a1, &w(&[a])).unwrap(), sl2_oracle(a));
            assert_eq!(freudenthal_character(&a1, &w(&[a])).unwrap(), sl2_oracle(a));
        }
        let m = freudenthal_multiplicities(&a1, &w(&[0])).unwrap();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(w(&[0]), 1)]);
    }

    #[test]
    fn trivial_module_is_one() {
        for label in ["A1", "A2", "B2", "G2", "A3"] {
            let r = RootSystem::parse(label).unwrap();
            assert_eq!(weyl_character(&r, &WeightVector::zero(r.rank())).unwrap(), Character::one(r.rank()));
        }
    }

    #[test]
    fn adjoint_of_sl3() {
        let a2 = RootSystem::parse("A2").unwrap();
        let ch = weyl_character(&a2, &w(&[1, 1])).unwrap();
        assert_eq!(ch.dim(), 8);
        assert_eq!(ch.coeff(&w(&[0, 0])), 2);
        let f = freudenthal_multiplicities(&a2, &w(&[1, 0])).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.values().all(|&m| m == 1));
    }

    #[test]
    fn g2_small_modules() {
        // α1 short: L(ϖ1) is 7-dimensional, L(ϖ2) is the 14-dimensional adjoint.
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(weyl_character(&g2, &w(&[1, 0])).unwrap().dim(), 7);
        assert_eq!(weyl_character(&g2, &w(&[0, 1])).unwrap().dim(), 14);
        assert_eq!(weyl_character(&g2, &w(&[0, 1])).unwrap(), freudenthal_character(&g2, &w(&[0, 1])).unwrap());
    }

    #[test]
    fn tensor_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        let chi1 = weyl_character(&a1, &w(&[1])).unwrap();
        let m = tensor_decompose(&a1, &chi1, &chi1).unwrap();
        assert_eq!(m, BTreeMap::from([(w(&[0]), 1), (w(&[2]), 1)]));

        let a2 = RootSystem::parse("A2").unwrap();
        let v = weyl_character(&a2, &w(&[1, 0])).unwrap();
        let vd = weyl_character(&a2, &w(&[0, 1])).unwrap();
        let m = tensor_decompose(&a2, &v, &vd).unwrap();
        assert_eq!(m, BTreeMap::from([(w(&[0, 0]), 1), (w(&[1, 1]), 1)]));

        let one = Character::one(2);
        let chi = weyl_character(&a2, &w(&[2, 1])).unwrap();
        assert_eq!(tensor_decompose(&a2, &one, &chi).unwrap(), BTreeMap::from([(w(&[2, 1]), 1)]));

        let bad = Character::monomial(w(&[1, 0]), 1);
        assert!(matches!(tensor_decompose(&a2, &bad, &one), Err(Error::Domain { .. })));
    }

    #[test]
    fn rejects_non_dominant() {
        let a2 = RootSystem::parse("A2").unwrap();
        assert!(matches!(weyl_character(&a2, &w(&[-1, 0])), Err(Error::Domain { .. })));
        assert!(matches!(freudenthal_multiplicities(&a2, &w(&[0, -2])), Err(Error::Domain { .. })));
    }

    #[test]
    fn cache_is_transparent() {
        let cache = WeylCache::new();
        let b2 = RootSystem::parse("B2").unwrap();
        let lam = w(&[2, 1]);
        let cold = cache.get(&b2, &lam).unwrap();
        let warm = cache.get(&b2, &lam).unwrap();
        assert_eq!(cold, warm);
        assert_eq!(cold, weyl_character(&b2, &lam).unwrap());
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn table_rejects_bad_entries() {
        let a1 = RootSystem::parse("A1").unwrap();
        let mut t = DominantCharacterTable::new(a1.clone());
        t.insert(w(&[2]), weyl_character(&a1, &w(&[2])).unwrap()).unwrap();
        assert!(t.insert(w(&[1]), Character::monomial(w(&[1]), 1)).is_err());
        assert!(t.insert(w(&[1]), weyl_character(&a1, &w(&[3])).unwrap()).is_err());
        assert_eq!(t.len(), 1);
    }

    fn weight_in(rank: usize, max: i64) -> impl Strategy<Value = WeightVector> {
        proptest::collection::vec(0..=max, rank).prop_map(WeightVector)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn weyl_matches_freudenthal(label in prop::sample::select(vec!["A1", "A2", "B2", "A3"]), raw in weight_in(3, 3)) {
            let r = RootSystem::parse(label).unwrap();
            let lam = WeightVector(raw.0[..r.rank()].to_vec());
            let ch = weyl_character(&r, &lam).unwrap();
            prop_assert_eq!(&ch, &freudenthal_character(&r, &lam).unwrap());
            prop_assert_eq!(ch.dim(), weyl_dimension(&r, &lam).unwrap());
            prop_assert!(ch.is_weyl_invariant(&r));
            prop_assert_eq!(ch.coeff(&lam), 1);
        }

        #[test]
        fn tensor_is_symmetric_and_dimension_preserving(a in weight_in(2, 2), b in weight_in(2, 2)) {
            let r = RootSystem::parse("A2").unwrap();
            let ca = weyl_character(&r, &a).unwrap();
            let cb = weyl_character(&r, &b).unwrap();
            let ab = tensor_decompose(&r, &ca, &cb).unwrap();
            let ba = tensor_decompose(&r, &cb, &ca).unwrap();
            prop_assert_eq!(&ab, &ba);
            let total: i64 = ab.iter().map(|(nu, m)| m * weyl_dimension(&r, nu).unwrap()).sum();
            prop_assert_eq!(total, ca.dim() * cb.dim());
        }
    }
}
