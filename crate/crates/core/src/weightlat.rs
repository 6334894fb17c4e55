//! Root data, the weight lattice in fundamental-weight coordinates, finite
//! Weyl groups and the character ring `Z[X]`.
//!
//! Cartan convention: `C[i][j] = <α_j, α_i^∨>`. A weight `λ = Σ λ_i ϖ_i` is
//! stored as its coordinate vector, so `<λ, α_i^∨> = λ_i` and the simple root
//! `α_j` is column `j` of the Cartan matrix.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::is_prime;

pub type Q = Ratio<i64>;

/// Integer weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn new(coords: Vec<i64>) -> Self {
        WeightVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        WeightVector(vec![0; rank])
    }

    /// Weight with every coordinate equal to one.
    pub fn rho(rank: usize) -> Self {
        WeightVector(vec![1; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Every pairing with a simple coroot lies in `[0, p)`.
    pub fn is_restricted(&self, p: u64) -> bool {
        self.0.iter().all(|&c| c >= 0 && (c as u64) < p)
    }

    pub fn scale(&self, k: i64) -> Self {
        WeightVector(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &WeightVector {
    type Output = WeightVector;
    fn add(self, rhs: &WeightVector) -> WeightVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        WeightVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &WeightVector {
    type Output = WeightVector;
    fn sub(self, rhs: &WeightVector) -> WeightVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        WeightVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        WeightVector(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for WeightVector {
    fn from(v: Vec<i64>) -> Self {
        WeightVector(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl RootType {
    fn letter(self) -> char {
        match self {
            RootType::A => 'A',
            RootType::B => 'B',
            RootType::C => 'C',
            RootType::D => 'D',
            RootType::E => 'E',
            RootType::F => 'F',
            RootType::G => 'G',
        }
    }
}

/// Explicit caps for the enumerations that grow with rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_rank: usize,
    pub max_weyl_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_rank: 4, max_weyl_order: 200_000 }
    }
}

/// A finite-type root system together with precomputed root data.
#[derive(Clone)]
pub struct RootSystem {
    root_type: RootType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// `d_i = (α_i, α_i) / 2`, normalised so short roots have `d_i = 1`.
    symmetrizer: Vec<Q>,
    cartan_inverse: Vec<Vec<Q>>,
    /// Positive roots in simple-root coordinates, sorted by height then lex.
    positive_roots: Vec<Vec<i64>>,
    /// The same roots in fundamental-weight coordinates.
    positive_root_weights: Vec<WeightVector>,
    /// Integer functional that is positive on every positive root.
    height_functional: Vec<i64>,
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.cartan == other.cartan
    }
}

impl Eq for RootSystem {}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({})", self.label())
    }
}

fn cartan_matrix(ty: RootType, n: usize) -> Result<Vec<Vec<i64>>> {
    let bad = |msg: &str| Err(Error::domain("type", msg.to_string()));
    if n == 0 {
        return bad("rank must be at least 1");
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match ty {
        RootType::A => {
            for i in 0..n.saturating_sub(1) {
                link(&mut c, i, i + 1);
            }
        }
        RootType::B | RootType::C => {
            if n < 2 {
                return bad("types B and C need rank >= 2");
            }
            for i in 0..n - 1 {
                link(&mut c, i, i + 1);
            }
            // B: last root short; C: last root long.
            if ty == RootType::B {
                c[n - 1][n - 2] = -2;
            } else {
                c[n - 2][n - 1] = -2;
            }
        }
        RootType::D => {
            if n < 4 {
                return bad("type D needs rank >= 4");
            }
            for i in 0..n - 2 {
                link(&mut c, i, i + 1);
            }
            link(&mut c, n - 3, n - 1);
        }
        RootType::E => {
            if !(6..=8).contains(&n) {
                return bad("type E needs rank 6, 7 or 8");
            }
            // Bourbaki: 1-3-4-5-6-..., 2 attached to 4.
            link(&mut c, 0, 2);
            link(&mut c, 1, 3);
            for i in 2..n - 1 {
                link(&mut c, i, i + 1);
            }
        }
        RootType::F => {
            if n != 4 {
                return bad("type F only exists in rank 4");
            }
            link(&mut c, 0, 1);
            link(&mut c, 1, 2);
            link(&mut c, 2, 3);
            c[2][1] = -2;
        }
        RootType::G => {
            if n != 2 {
                return bad("type G only exists in rank 2");
            }
            // α_1 short, α_2 long.
            c[0][1] = -3;
            c[1][0] = -1;
        }
    }
    Ok(c)
}

/// Exact inverse over `Q` by Gauss–Jordan elimination.
pub(crate) fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|&x| Q::from_integer(x)).collect();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col];
                for k in 0..2 * n {
                    let v = a[col][k];
                    a[r][k] -= factor * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn leading_minors_positive(m: &[Vec<Q>]) -> bool {
    let n = m.len();
    for k in 1..=n {
        let mut a: Vec<Vec<Q>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let mut det = Q::one();
        for col in 0..k {
            let Some(pivot) = (col..k).find(|&r| !a[r][col].is_zero()) else {
                return false;
            };
            if pivot != col {
                a.swap(col, pivot);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..k {
                let factor = a[r][col] / a[col][col];
                for c in col..k {
                    let v = a[col][c];
                    a[r][c] -= factor * v;
                }
            }
        }
        if det <= Q::zero() {
            return false;
        }
    }
    true
}

impl RootSystem {
    pub fn new(root_type: RootType, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(root_type, rank)?;
        Self::build(root_type, cartan)
    }

    /// Parses labels such as `"A1"`, `"B2"`, `"G2"`.
    pub fn parse(label: &str) -> Result<Self> {
        let label = label.trim();
        let mut chars = label.chars();
        let letter = chars.next().ok_or_else(|| Error::domain("type", "empty root system label"))?;
        let ty = match letter.to_ascii_uppercase() {
            'A' => RootType::A,
            'B' => RootType::B,
            'C' => RootType::C,
            'D' => RootType::D,
            'E' => RootType::E,
            'F' => RootType::F,
            'G' => RootType::G,
            _ => return Err(Error::domain("type", format!("unknown root system `{label}`"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::domain("type", format!("bad rank in `{label}`")))?;
        Self::new(ty, rank)
    }

    fn build(root_type: RootType, cartan: Vec<Vec<i64>>) -> Result<Self> {
        let rank = cartan.len();
        validate_cartan(&cartan)?;
        let symmetrizer = symmetrizer(&cartan)?;
        let sym: Vec<Vec<Q>> = (0..rank)
            .map(|i| (0..rank).map(|j| symmetrizer[i] * Q::from_integer(cartan[i][j])).collect())
            .collect();
        if !leading_minors_positive(&sym) {
            return Err(Error::domain("cartan", "matrix is not of finite type"));
        }
        let cartan_inverse = rational_inverse(&cartan)
            .ok_or_else(|| Error::domain("cartan", "matrix is singular"))?;

        // Positive roots: orbit of the simple roots, in simple-root coordinates.
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..rank {
            let mut e = vec![0; rank];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..rank {
                let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[i][j]).sum();
                let mut next = beta.clone();
                next[i] -= pairing;
                if !seen.contains_key(&next) {
                    if seen.len() > 10_000 {
                        return Err(Error::resource("roots", "root orbit too large"));
                    }
                    seen.insert(next.clone(), ());
                    queue.push_back(next);
                }
            }
        }
        let mut positive_roots: Vec<Vec<i64>> =
            seen.into_keys().filter(|b| b.iter().all(|&x| x >= 0)).collect();
        positive_roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        let positive_root_weights = positive_roots
            .iter()
            .map(|beta| {
                WeightVector((0..rank).map(|i| (0..rank).map(|j| cartan[i][j] * beta[j]).sum()).collect())
            })
            .collect();

        // h = det(C) * (1^T C^{-1}), scaled to be integral.
        let mut denom_lcm: i64 = 1;
        for row in &cartan_inverse {
            for x in row {
                denom_lcm = num_integer::lcm(denom_lcm, *x.denom());
            }
        }
        let height_functional = (0..rank)
            .map(|j| {
                let s: Q = (0..rank).map(|i| cartan_inverse[i][j]).sum();
                (s * Q::from_integer(denom_lcm)).to_integer()
            })
            .collect();

        Ok(RootSystem {
            root_type,
            rank,
            cartan,
            symmetrizer,
            cartan_inverse,
            positive_roots,
            positive_root_weights,
            height_functional,
        })
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.root_type.letter(), self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn is_simply_laced(&self) -> bool {
        self.cartan.iter().flatten().all(|&c| c == 2 || c == 0 || c == -1)
    }

    /// Simple root `α_j` in fundamental-weight coordinates.
    pub fn simple_root(&self, j: usize) -> WeightVector {
        WeightVector((0..self.rank).map(|i| self.cartan[i][j]).collect())
    }

    pub fn rho(&self) -> WeightVector {
        WeightVector::rho(self.rank)
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn positive_root_weights(&self) -> &[WeightVector] {
        &self.positive_root_weights
    }

    /// The highest root, in simple-root coordinates.
    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("root systems are nonempty")
    }

    /// Coxeter number `h = ht(θ) + 1`.
    pub fn coxeter_number(&self) -> i64 {
        self.highest_root().iter().sum::<i64>() + 1
    }

    /// `(α_i, α_j)` for simple roots.
    fn simple_form(&self, i: usize, j: usize) -> Q {
        self.symmetrizer[i] * Q::from_integer(self.cartan[i][j])
    }

    /// `(β, β) / 2` for a root given in simple-root coordinates.
    fn half_norm(&self, beta: &[i64]) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += Q::from_integer(beta[i] * beta[j]) * self.simple_form(i, j);
            }
        }
        s / Q::from_integer(2)
    }

    /// `<λ, β^∨>` for a root `β` given in simple-root coordinates.
    pub fn coroot_pairing(&self, weight: &WeightVector, beta: &[i64]) -> i64 {
        let mut s = Q::zero();
        for j in 0..self.rank {
            s += Q::from_integer(beta[j] * weight.0[j]) * self.symmetrizer[j];
        }
        let q = s / self.half_norm(beta);
        debug_assert!(q.is_integer());
        q.to_integer()
    }

    /// The positive root whose coroot is the highest coroot (the highest
    /// short root). Equals the highest root in simply-laced types.
    pub fn highest_short_root(&self) -> &[i64] {
        let rho = self.rho();
        self.positive_roots
            .iter()
            .max_by_key(|b| (self.coroot_pairing(&rho, b), b.iter().sum::<i64>()))
            .expect("nonempty")
    }

    /// `max_{β>0} <λ, β^∨>`, attained at the highest coroot.
    pub fn highest_coroot_pairing(&self, weight: &WeightVector) -> i64 {
        self.coroot_pairing(weight, self.highest_short_root())
    }

    /// Invariant bilinear form on weights, normalised by `(α, α) = 2` for
    /// short roots.
    pub fn inner_product(&self, a: &WeightVector, b: &WeightVector) -> Q {
        // (α_k, ϖ_j) = d_k δ_kj
        let ra = self.root_coordinates(a);
        let mut s = Q::zero();
        for k in 0..self.rank {
            s += ra[k] * self.symmetrizer[k] * Q::from_integer(b.0[k]);
        }
        s
    }

    /// Coordinates of a weight in the basis of simple roots.
    pub fn root_coordinates(&self, weight: &WeightVector) -> Vec<Q> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.cartan_inverse[i][j] * Q::from_integer(weight.0[j])).sum())
            .collect()
    }

    /// `λ - μ` lies in the `N`-span of the simple roots.
    pub fn dominates(&self, lambda: &WeightVector, mu: &WeightVector) -> bool {
        self.root_coordinates(&(lambda - mu))
            .iter()
            .all(|x| x.is_integer() && !x.is_negative())
    }

    /// Integer height-like functional: strictly larger on `μ + α` than on
    /// `μ` for any positive root `α`.
    pub fn height(&self, weight: &WeightVector) -> i64 {
        self.height_functional.iter().zip(&weight.0).map(|(h, c)| h * c).sum()
    }

    /// Simple reflection `s_i` on a weight.
    pub fn reflect(&self, i: usize, weight: &WeightVector) -> WeightVector {
        let c = weight.0[i];
        WeightVector((0..self.rank).map(|k| weight.0[k] - c * self.cartan[k][i]).collect())
    }

    /// The unique dominant weight in the Weyl orbit of `weight`.
    pub fn dominant_conjugate(&self, weight: &WeightVector) -> WeightVector {
        let mut w = weight.clone();
        while let Some(i) = w.0.iter().position(|&c| c < 0) {
            w = self.reflect(i, &w);
        }
        w
    }

    pub fn check_weight(&self, weight: &WeightVector) -> Result<()> {
        if weight.rank() != self.rank {
            return Err(Error::domain(
                "weight",
                format!("expected {} coordinates for {}, got {}", self.rank, self.label(), weight.rank()),
            ));
        }
        Ok(())
    }

    pub fn check_dominant(&self, weight: &WeightVector) -> Result<()> {
        self.check_weight(weight)?;
        if !weight.is_dominant() {
            return Err(Error::domain("weight", format!("{weight} is not dominant")));
        }
        Ok(())
    }
}

fn validate_cartan(c: &[Vec<i64>]) -> Result<()> {
    let n = c.len();
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(Error::domain("cartan", "matrix is not square"));
        }
        if row[i] != 2 {
            return Err(Error::domain("cartan", "diagonal entries must be 2"));
        }
        for j in 0..n {
            if i != j {
                if c[i][j] > 0 {
                    return Err(Error::domain("cartan", "off-diagonal entries must be <= 0"));
                }
                if (c[i][j] == 0) != (c[j][i] == 0) {
                    return Err(Error::domain("cartan", "zero pattern must be symmetric"));
                }
            }
        }
    }
    Ok(())
}

fn symmetrizer(c: &[Vec<i64>]) -> Result<Vec<Q>> {
    let n = c.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].unwrap();
            for j in 0..n {
                if i != j && c[i][j] != 0 {
                    // d_i c_ij = d_j c_ji
                    let dj = di * Q::new(c[i][j], c[j][i]);
                    match d[j] {
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                        Some(existing) if existing != dj => {
                            return Err(Error::domain("cartan", "matrix is not symmetrizable"));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|x| x.unwrap()).collect();
    // Normalise so the smallest entry is 1.
    let min = d.iter().copied().fold(None, |m: Option<Q>, x| Some(m.map_or(x, |m| m.min(x)))).unwrap();
    Ok(d.into_iter().map(|x| x / min).collect())
}

/// A Weyl group element acting on fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Row-major action matrix: `(wλ)_k = Σ_j matrix[k][j] λ_j`.
    pub matrix: Vec<Vec<i64>>,
    pub length: usize,
    /// A reduced word; the element is `s_{word[0]} ⋯ s_{word[last]}`.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn apply(&self, weight: &WeightVector) -> WeightVector {
        WeightVector(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(&weight.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn sign(&self) -> i64 {
        if self.length % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Enumerates the finite Weyl group, identity first, in order of length.
pub fn weyl_group_elements(root: &RootSystem, limits: &Limits) -> Result<Vec<WeylElement>> {
    if root.rank() > limits.max_rank {
        return Err(Error::resource(
            "rank",
            format!("rank {} exceeds the configured cap {}", root.rank(), limits.max_rank),
        ));
    }
    let n = root.rank();
    let rho = root.rho();
    let identity: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut elements = vec![WeylElement { matrix: identity, length: 0, word: vec![] }];
    let mut index: HashMap<WeightVector, usize> = HashMap::new();
    index.insert(rho.clone(), 0);
    let mut cursor = 0;
    while cursor < elements.len() {
        let current = elements[cursor].clone();
        cursor += 1;
        for s in 0..n {
            // s * current: apply s after current.
            let matrix: Vec<Vec<i64>> = (0..n)
                .map(|k| (0..n).map(|j| current.matrix[k][j] - root.cartan[k][s] * current.matrix[s][j]).collect())
                .collect();
            let next = WeylElement {
                matrix,
                length: current.length + 1,
                word: std::iter::once(s).chain(current.word.iter().copied()).collect(),
            };
            let image = next.apply(&rho);
            if !index.contains_key(&image) {
                if elements.len() >= limits.max_weyl_order {
                    return Err(Error::resource(
                        "weyl_order",
                        format!("Weyl group of {} exceeds {} elements", root.label(), limits.max_weyl_order),
                    ));
                }
                index.insert(image, elements.len());
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// Writes `λ = Σ p^i λ_i` with every `λ_i` restricted; trailing zeros dropped.
pub fn p_adic_decompose(lambda: &WeightVector, p: u64) -> Result<Vec<WeightVector>> {
    if p < 2 || !is_prime(p) {
        return Err(Error::domain("p", format!("{p} is not a prime")));
    }
    if !lambda.is_dominant() {
        return Err(Error::domain("weight", format!("{lambda} is not dominant")));
    }
    let p = p as i64;
    let mut rest = lambda.clone();
    let mut digits = Vec::new();
    while !rest.is_zero() {
        digits.push(WeightVector(rest.0.iter().map(|c| c % p).collect()));
        rest = WeightVector(rest.0.iter().map(|c| c / p).collect());
    }
    Ok(digits)
}

/// Element of `Z[X]`: a finitely supported integer function on weights.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Character {
    terms: BTreeMap<WeightVector, i64>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, v)| (k, v))).finish()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(mu, c)| format!("{c}e^{mu}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Character {
    pub fn zero() -> Self {
        Character::default()
    }

    /// The unit `e^0` of the given rank.
    pub fn one(rank: usize) -> Self {
        Character::monomial(WeightVector::zero(rank), 1)
    }

    pub fn monomial(mu: WeightVector, c: i64) -> Self {
        let mut ch = Character::zero();
        ch.add_term(mu, c);
        ch
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (WeightVector, i64)>) -> Self {
        let mut ch = Character::zero();
        for (mu, c) in terms {
            ch.add_term(mu, c);
        }
        ch
    }

    pub fn add_term(&mut self, mu: WeightVector, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeightVector, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mu: &WeightVector) -> i64 {
        self.terms.get(mu).copied().unwrap_or(0)
    }

    /// Sum of coefficients: the dimension when the character is genuine.
    pub fn dim(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn scale(&self, k: i64) -> Character {
        if k == 0 {
            return Character::zero();
        }
        Character { terms: self.terms.iter().map(|(mu, c)| (mu.clone(), c * k)).collect() }
    }

    /// `ξ^{[t]} = Σ c_μ e^{p^t μ}`.
    pub fn frobenius_twist(&self, t: u32, p: u64) -> Character {
        let factor = (p as i64).pow(t);
        Character { terms: self.terms.iter().map(|(mu, &c)| (mu.scale(factor), c)).collect() }
    }

    pub fn is_weyl_invariant(&self, root: &RootSystem) -> bool {
        (0..root.rank()).all(|i| self.terms.iter().all(|(mu, &c)| self.coeff(&root.reflect(i, mu)) == c))
    }

    /// Highest-height dominant term, if any.
    pub fn highest_dominant_term(&self, root: &RootSystem) -> Option<(WeightVector, i64)> {
        self.terms
            .iter()
            .filter(|(mu, _)| mu.is_dominant())
            .max_by(|a, b| root.height(a.0).cmp(&root.height(b.0)).then_with(|| a.0.cmp(b.0)))
            .map(|(mu, &c)| (mu.clone(), c))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(CharacterJson::from(self)).expect("character serialization is infallible")
    }
}

impl Add for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        let mut out = self.clone();
        for (mu, &c) in &rhs.terms {
            out.add_term(mu.clone(), c);
        }
        out
    }
}

impl Sub for &Character {
    type Output = Character;
    fn sub(self, rhs: &Character) -> Character {
        let mut out = self.clone();
        for (mu, &c) in &rhs.terms {
            out.add_term(mu.clone(), -c);
        }
        out
    }
}

impl Mul for &Character {
    type Output = Character;
    fn mul(self, rhs: &Character) -> Character {
        let mut acc: HashMap<WeightVector, i64> = HashMap::with_capacity(self.len() * rhs.len());
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                *acc.entry(a + b).or_insert(0) += ca * cb;
            }
        }
        Character { terms: acc.into_iter().filter(|(_, c)| *c != 0).collect() }
    }
}

/// Free-function form of [`Character::frobenius_twist`].
pub fn frobenius_twist(xi: &Character, t: u32, p: u64) -> Character {
    xi.frobenius_twist(t, p)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    mu: Vec<i64>,
    c: i64,
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    terms: Vec<TermJson>,
}

impl From<&Character> for CharacterJson {
    fn from(ch: &Character) -> Self {
        CharacterJson { terms: ch.terms.iter().map(|(mu, &c)| TermJson { mu: mu.0.clone(), c }).collect() }
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for t in raw.terms {
            if t.c == 0 {
                return Err(serde::de::Error::custom("zero coefficient stored"));
            }
            if terms.insert(WeightVector(t.mu), t.c).is_some() {
                return Err(serde::de::Error::custom("duplicate weight"));
            }
        }
        Ok(Character { terms })
    }
}
