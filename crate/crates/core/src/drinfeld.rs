//! Type-A Drinfeld polynomial data for evaluation modules of the small
//! quantum loop algebra of `sl_{n+1}` at an `l`-th root of unity `ε`.
//!
//! Polynomials are kept as root exponents: node `i` carries
//! `P_i = Π_j (t - a^{-1} ε^{c_{i,j}})`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::is_prime;
use crate::weightlat::{WeightVector, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::domain("sign", format!("expected + or -, got `{s}`"))),
        }
    }

    fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// How `λ_{ϖ_i}` is read off from `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaVarpi {
    /// `Σ_j λ_j (ϖ_i, ϖ_i)`.
    #[default]
    AsPrinted,
    /// `Σ_j λ_j (ϖ_j, ϖ_i)`.
    Paired,
}

/// Base point of the evaluation: the unit or a formal unit `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasePoint {
    One,
    Formal,
}

fn check_node(n: usize, i: usize) -> Result<()> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::domain("node", format!("node {i} out of range 1..={n}")));
    }
    Ok(())
}

/// `ϖ_i` of `sl_{n+1}` in simple-root coordinates.
pub fn fundamental_weight_vector(n: usize, i: usize) -> Result<Vec<Q>> {
    check_node(n, i)?;
    let (n, i) = (n as i64, i as i64);
    Ok((1..=n)
        .map(|k| if k <= i { Q::new((n - i + 1) * k, n + 1) } else { Q::new(i * (n - k + 1), n + 1) })
        .collect())
}

/// `(ϖ_i, ϖ_j)` in type `A_n`.
pub fn fundamental_pairing(n: usize, i: usize, j: usize) -> Result<Q> {
    check_node(n, i)?;
    check_node(n, j)?;
    let (lo, hi) = (i.min(j) as i64, i.max(j) as i64);
    Ok(Q::new(lo * (n as i64 + 1 - hi), n as i64 + 1))
}

fn check_lambda(n: usize, lambda: &WeightVector) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n", "rank must be at least 1"));
    }
    if lambda.rank() != n {
        return Err(Error::domain("weight", format!("expected {n} coordinates, got {}", lambda.rank())));
    }
    if !lambda.is_dominant() {
        return Err(Error::domain("weight", format!("{lambda} is not dominant")));
    }
    Ok(())
}

/// The exponents `c^±_{i,j}`, `j = 1..λ_i`, for every node.
pub fn c_exponents(n: usize, lambda: &WeightVector, sign: Sign) -> Result<Vec<Vec<i64>>> {
    check_lambda(n, lambda)?;
    let l = &lambda.0;
    Ok((0..n)
        .map(|i| {
            let bracket = bracket(l, i);
            (1..=l[i]).map(|j| sign.factor() * bracket + l[i] - 2 * j + 1).collect()
        })
        .collect())
}

/// `Σ_{k<i} λ_k - Σ_{k>i} λ_k + i` for the 0-based node `i`.
fn bracket(l: &[i64], i: usize) -> i64 {
    l[..i].iter().sum::<i64>() - l[i + 1..].iter().sum::<i64>() + i as i64 + 1
}

/// `λ_{ϖ_i}` under the chosen reading.
pub fn lambda_varpi(n: usize, lambda: &WeightVector, i: usize, reading: LambdaVarpi) -> Result<Q> {
    check_lambda(n, lambda)?;
    let mut s = Q::zero();
    for j in 1..=n {
        let pairing = match reading {
            LambdaVarpi::AsPrinted => fundamental_pairing(n, i, i)?,
            LambdaVarpi::Paired => fundamental_pairing(n, j, i)?,
        };
        s += Q::from_integer(lambda.0[j - 1]) * pairing;
    }
    Ok(s)
}

/// `sign · a^{base} · ε^{exponent}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicMonomial {
    pub sign: i64,
    pub base: BasePoint,
    pub exponent: Q,
}

impl CyclotomicMonomial {
    /// Exponent as a residue mod `p`, reading `1/(n+1)` as an inverse mod `p`.
    pub fn exponent_mod(&self, p: u64) -> Result<u64> {
        let p = p as i64;
        let den = *self.exponent.denom();
        let inv = mod_inverse(den.rem_euclid(p), p)
            .ok_or_else(|| Error::domain("p", format!("{den} is not invertible mod {p}")))?;
        Ok((self.exponent.numer().rem_euclid(p) * inv).rem_euclid(p) as u64)
    }
}

impl fmt::Display for CyclotomicMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        let base = match self.base {
            BasePoint::One => "",
            BasePoint::Formal => "a·",
        };
        write!(f, "{sign}{base}ε^({})", self.exponent)
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let g = a.extended_gcd(&m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

/// `a^λ_±`.
pub fn eval_point(n: usize, lambda: &WeightVector, base: BasePoint, sign: Sign, reading: LambdaVarpi) -> Result<CyclotomicMonomial> {
    let first = lambda_varpi(n, lambda, 1, reading)?;
    let last = lambda_varpi(n, lambda, n, reading)?;
    let n_q = Q::from_integer(n as i64);
    Ok(match sign {
        Sign::Plus => CyclotomicMonomial { sign: 1, base, exponent: -first + last + n_q },
        Sign::Minus => CyclotomicMonomial {
            sign: if (n + 1) % 2 == 0 { 1 } else { -1 },
            base,
            exponent: first - last + n_q * Q::from_integer(2) + Q::one(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrinfeldPolynomialSet {
    pub n: usize,
    pub lambda: WeightVector,
    pub sign: Sign,
    pub base: BasePoint,
    /// `exponents[i]` lists `c_{i+1, j}`.
    pub exponents: Vec<Vec<i64>>,
}

impl DrinfeldPolynomialSet {
    pub fn new(n: usize, lambda: &WeightVector, sign: Sign, base: BasePoint) -> Result<Self> {
        let exponents = c_exponents(n, lambda, sign)?;
        Ok(DrinfeldPolynomialSet { n, lambda: lambda.clone(), sign, base, exponents })
    }

    pub fn degree(&self, node: usize) -> usize {
        self.exponents[node - 1].len()
    }

    /// Product form of `P_i`, for display.
    pub fn display_polynomial(&self, node: usize) -> String {
        let inv = match self.base {
            BasePoint::One => "",
            BasePoint::Formal => "a^-1·",
        };
        let factors: Vec<String> = self.exponents[node - 1].iter().map(|c| format!("(t - {inv}ε^{c})")).collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("")
        }
    }
}

/// Specialisation data `q ↦ t`, `z^{(i)}_j ↦ t^{n^{(i)}_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaData {
    pub p: u64,
    pub exponents: Vec<Vec<u64>>,
    pub q_exponent: u64,
}

/// Enforces `p` prime with `gcd(p, n+1) = 1`.
pub fn check_root_of_unity(n: usize, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::domain("p", format!("{p} is not a prime")));
    }
    if (n as u64 + 1).gcd(&p) != 1 {
        return Err(Error::domain("p", format!("gcd({p}, {}) must be 1", n + 1)));
    }
    Ok(())
}

/// Reduces the c-exponents mod `p`; the base point must be 1.
pub fn gamma_from_drinfeld(d: &DrinfeldPolynomialSet, p: u64) -> Result<GammaData> {
    if d.base != BasePoint::One {
        return Err(Error::unsupported("base", "the specialisation is only defined for base point a = 1"));
    }
    check_root_of_unity(d.n, p)?;
    let exponents = d
        .exponents
        .iter()
        .map(|row| row.iter().map(|c| c.rem_euclid(p as i64) as u64).collect())
        .collect();
    Ok(GammaData { p, exponents, q_exponent: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weightlat::RootSystem;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> WeightVector {
        WeightVector(v.to_vec())
    }

    #[test]
    fn fundamental_weight_examples() {
        assert_eq!(fundamental_weight_vector(1, 1).unwrap(), vec![Q::new(1, 2)]);
        assert_eq!(fundamental_weight_vector(2, 1).unwrap(), vec![Q::new(2, 3), Q::new(1, 3)]);
        let mut rev = fundamental_weight_vector(2, 2).unwrap();
        rev.reverse();
        assert_eq!(rev, fundamental_weight_vector(2, 1).unwrap());
        assert!(fundamental_weight_vector(2, 3).is_err());
        assert!(fundamental_weight_vector(2, 0).is_err());
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        for n in 1..=5 {
            let root = RootSystem::parse(&format!("A{n}")).unwrap();
            for i in 1..=n {
                let v = fundamental_weight_vector(n, i).unwrap();
                for j in 0..n {
                    let pairing: Q = (0..n).map(|k| v[k] * Q::from_integer(root.cartan()[j][k])).sum();
                    assert_eq!(pairing, Q::from_integer(i64::from(j + 1 == i)));
                }
            }
        }
    }

    #[test]
    fn c_exponent_examples() {
        assert_eq!(c_exponents(1, &w(&[2]), Sign::Plus).unwrap(), vec![vec![2, 0]]);
        assert!(c_exponents(3, &w(&[0, 0, 0]), Sign::Minus).unwrap().iter().all(Vec::is_empty));
        assert_eq!(c_exponents(2, &w(&[1, 0]), Sign::Plus).unwrap(), vec![vec![1], vec![]]);
        assert!(c_exponents(2, &w(&[1, -1]), Sign::Plus).is_err());
    }

    #[test]
    fn eval_point_examples() {
        for n in 1..=4 {
            let zero = WeightVector::zero(n);
            for reading in [LambdaVarpi::AsPrinted, LambdaVarpi::Paired] {
                let plus = eval_point(n, &zero, BasePoint::Formal, Sign::Plus, reading).unwrap();
                assert_eq!(plus, CyclotomicMonomial { sign: 1, base: BasePoint::Formal, exponent: Q::from_integer(n as i64) });
                let minus = eval_point(n, &zero, BasePoint::Formal, Sign::Minus, reading).unwrap();
                let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(minus.sign, sign);
                assert_eq!(minus.exponent, Q::from_integer(2 * n as i64 + 1));
            }
        }
    }

    #[test]
    fn eval_point_ratio_is_base_independent() {
        let lam = w(&[2, 1, 0]);
        let ratio = |base| {
            let p = eval_point(3, &lam, base, Sign::Plus, LambdaVarpi::Paired).unwrap();
            let m = eval_point(3, &lam, base, Sign::Minus, LambdaVarpi::Paired).unwrap();
            (p.sign * m.sign, p.exponent - m.exponent)
        };
        assert_eq!(ratio(BasePoint::One), ratio(BasePoint::Formal));
    }

    #[test]
    fn readings_differ_only_off_the_diagonal() {
        // For sl2 there is one node, so both readings agree.
        let a = lambda_varpi(1, &w(&[3]), 1, LambdaVarpi::AsPrinted).unwrap();
        let b = lambda_varpi(1, &w(&[3]), 1, LambdaVarpi::Paired).unwrap();
        assert_eq!(a, b);
        let a = lambda_varpi(2, &w(&[1, 0]), 2, LambdaVarpi::AsPrinted).unwrap();
        let b = lambda_varpi(2, &w(&[1, 0]), 2, LambdaVarpi::Paired).unwrap();
        assert_eq!((a, b), (Q::new(2, 3), Q::new(1, 3)));
    }

    #[test]
    fn exponents_mod_p() {
        let m = CyclotomicMonomial { sign: 1, base: BasePoint::One, exponent: Q::new(1, 3) };
        // 1/3 ≡ 2 mod 5
        assert_eq!(m.exponent_mod(5).unwrap(), 2);
        assert!(m.exponent_mod(3).is_err());
    }

    #[test]
    fn gamma_examples() {
        let d = DrinfeldPolynomialSet::new(1, &w(&[2]), Sign::Plus, BasePoint::One).unwrap();
        assert_eq!(gamma_from_drinfeld(&d, 3).unwrap().exponents, vec![vec![2, 0]]);
        let d0 = DrinfeldPolynomialSet::new(2, &w(&[0, 0]), Sign::Plus, BasePoint::One).unwrap();
        assert!(gamma_from_drinfeld(&d0, 5).unwrap().exponents.iter().all(Vec::is_empty));
        let d = DrinfeldPolynomialSet::new(2, &w(&[1, 0]), Sign::Plus, BasePoint::One).unwrap();
        assert_eq!(gamma_from_drinfeld(&d, 5).unwrap().exponents, vec![vec![1], vec![]]);
        assert!(matches!(gamma_from_drinfeld(&d, 3), Err(Error::Domain { .. })));
        let formal = DrinfeldPolynomialSet::new(1, &w(&[2]), Sign::Plus, BasePoint::Formal).unwrap();
        assert!(matches!(gamma_from_drinfeld(&formal, 3), Err(Error::Unsupported { .. })));
        assert_eq!(formal.display_polynomial(1), "(t - a^-1·ε^2)(t - a^-1·ε^0)");
    }

    fn lambda_strategy() -> impl Strategy<Value = (usize, WeightVector)> {
        (1usize..=3).prop_flat_map(|n| (Just(n), proptest::collection::vec(0i64..8, n).prop_map(WeightVector)))
    }

    proptest! {
        #[test]
        fn strings_have_degree_and_step_two((n, lam) in lambda_strategy(), plus in any::<bool>()) {
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            let d = DrinfeldPolynomialSet::new(n, &lam, sign, BasePoint::One).unwrap();
            for i in 1..=n {
                prop_assert_eq!(d.degree(i) as i64, lam.0[i - 1]);
                prop_assert!(d.exponents[i - 1].windows(2).all(|p| p[0] - p[1] == 2));
            }
        }

        #[test]
        fn signs_agree_exactly_when_bracket_vanishes((n, lam) in lambda_strategy()) {
            let plus = c_exponents(n, &lam, Sign::Plus).unwrap();
            let minus = c_exponents(n, &lam, Sign::Minus).unwrap();
            for i in 0..n {
                if lam.0[i] > 0 {
                    prop_assert_eq!(plus[i] == minus[i], bracket(&lam.0, i) == 0);
                }
            }
        }

        #[test]
        fn gamma_ignores_shifts_by_p((n, lam) in lambda_strategy(), shift in -3i64..3) {
            let p = [2u64, 3, 5, 7].into_iter().find(|&p| (n as u64 + 1) % p != 0).unwrap();
            let d = DrinfeldPolynomialSet::new(n, &lam, Sign::Plus, BasePoint::One).unwrap();
            let mut shifted = d.clone();
            for row in shifted.exponents.iter_mut() {
                for c in row.iter_mut() {
                    *c += shift * p as i64;
                }
            }
            prop_assert_eq!(gamma_from_drinfeld(&d, p).unwrap(), gamma_from_drinfeld(&shifted, p).unwrap());
        }
    }
}
