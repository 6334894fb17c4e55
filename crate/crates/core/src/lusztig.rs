//! The level-`n` characters `E^n_λ`.
//!
//! `E¹` on restricted weights comes from an [`E1Source`]; everything else is
//! assembled from p-adic digits, Weyl characters and Frobenius twists:
//! `E^n_λ = E¹_{λ_0} (E¹_{λ_1})^{[1]} ⋯ (E¹_{λ_{n-1}})^{[n-1]} (E⁰_{Σ_{j≥n} p^{j-n} λ_j})^{[n]}`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::is_prime;
use crate::klengine::{CoxeterElement, CoxeterPresentation, KlEngine};
use crate::weightlat::{p_adic_decompose, Character, RootSystem, RootType, WeightVector};
use crate::weylchar::{DominantCharacterTable, WeylCache};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum E1Mode {
    Sl2ClosedForm,
    LowestAlcove,
    KlEngine,
    UserTable,
}

impl E1Mode {
    pub fn name(self) -> &'static str {
        match self {
            E1Mode::Sl2ClosedForm => "sl2",
            E1Mode::LowestAlcove => "lowest-alcove",
            E1Mode::KlEngine => "kl",
            E1Mode::UserTable => "table",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sl2" | "sl2_closed_form" => Ok(E1Mode::Sl2ClosedForm),
            "lowest-alcove" | "lowest_alcove" => Ok(E1Mode::LowestAlcove),
            "kl" | "kl_engine" => Ok(E1Mode::KlEngine),
            "table" | "user_table" => Ok(E1Mode::UserTable),
            _ => Err(Error::domain("e1_source", format!("unknown E1 source `{s}`"))),
        }
    }
}

impl fmt::Display for E1Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// KL polynomials of the affine Weyl group can reach this length in rank 2.
const AFFINE_KL_CAP: usize = 24;

/// Supplier of `E¹_λ` for restricted `λ`.
pub struct E1Source {
    root: RootSystem,
    p: u64,
    mode: E1Mode,
    table: Option<DominantCharacterTable>,
    weyl: Arc<WeylCache>,
    kl: Option<Arc<KlEngine>>,
    memo: RwLock<HashMap<WeightVector, Character>>,
}

impl fmt::Debug for E1Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("E1Source").field("root", &self.root).field("p", &self.p).field("mode", &self.mode).finish()
    }
}

impl E1Source {
    pub fn new(root: RootSystem, p: u64, mode: E1Mode) -> Result<Self> {
        Self::with_cache(root, p, mode, Arc::new(WeylCache::new()))
    }

    pub fn with_cache(root: RootSystem, p: u64, mode: E1Mode, weyl: Arc<WeylCache>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain("p", format!("{p} is not a prime")));
        }
        match mode {
            E1Mode::Sl2ClosedForm if !(root.root_type() == RootType::A && root.rank() == 1) => {
                return Err(Error::unsupported("e1_source", "the sl2 closed form needs type A1"));
            }
            E1Mode::UserTable => {
                return Err(Error::unsupported("e1_source", "table mode needs a table; use E1Source::from_table"));
            }
            _ => {}
        }
        let kl = (mode == E1Mode::KlEngine)
            .then(|| Arc::new(KlEngine::with_max_length(CoxeterPresentation::affine(&root), AFFINE_KL_CAP)));
        Ok(E1Source { root, p, mode, table: None, weyl, kl, memo: RwLock::new(HashMap::new()) })
    }

    /// Table mode; every entry must be restricted.
    pub fn from_table(table: DominantCharacterTable, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain("p", format!("{p} is not a prime")));
        }
        if let Some((lam, _)) = table.entries().find(|(lam, _)| !lam.is_restricted(p)) {
            return Err(Error::domain("table", format!("entry {lam} is outside the restricted region")));
        }
        Ok(E1Source {
            root: table.root().clone(),
            p,
            mode: E1Mode::UserTable,
            table: Some(table),
            weyl: Arc::new(WeylCache::new()),
            kl: None,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn root(&self) -> &RootSystem {
        &self.root
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn mode(&self) -> E1Mode {
        self.mode
    }

    pub fn weyl_cache(&self) -> &Arc<WeylCache> {
        &self.weyl
    }

    pub fn chi(&self, lambda: &WeightVector) -> Result<Character> {
        self.weyl.get(&self.root, lambda)
    }

    /// `E¹_λ` for `λ` in the restricted region.
    pub fn e1_reduced(&self, lambda: &WeightVector) -> Result<Character> {
        self.root.check_dominant(lambda)?;
        if !lambda.is_restricted(self.p) {
            return Err(Error::domain("weight", format!("{lambda} is not restricted for p = {}", self.p)));
        }
        if lambda.is_zero() {
            return Ok(Character::one(self.root.rank()));
        }
        if let Some(hit) = self.memo.read().expect("memo lock poisoned").get(lambda) {
            return Ok(hit.clone());
        }
        let ch = match self.mode {
            E1Mode::Sl2ClosedForm => self.chi(lambda)?,
            E1Mode::LowestAlcove => {
                let top = self.root.highest_coroot_pairing(&(lambda + &self.root.rho()));
                if top > self.p as i64 {
                    return Err(Error::unsupported(
                        "weight",
                        format!("{lambda} is not in the lowest alcove for p = {} (pairing {top})", self.p),
                    ));
                }
                self.chi(lambda)?
            }
            E1Mode::KlEngine => self.kl_character(lambda)?,
            E1Mode::UserTable => self
                .table
                .as_ref()
                .and_then(|t| t.get(lambda))
                .cloned()
                .ok_or_else(|| Error::unsupported("table", format!("no table entry for {lambda}")))?,
        };
        self.memo.write().expect("memo lock poisoned").insert(lambda.clone(), ch.clone());
        Ok(ch)
    }

    fn kl_character(&self, lambda: &WeightVector) -> Result<Character> {
        let root = &self.root;
        if root.rank() > 2 {
            return Err(Error::unsupported("type", "the KL route is limited to rank <= 2"));
        }
        let h = root.coxeter_number();
        if (self.p as i64) < h {
            return Err(Error::unsupported("p", format!("the KL route needs p >= h = {h}")));
        }
        let alc = Alcoves::new(root, self.p);
        let x = lambda + &root.rho();
        if !alc.is_regular(&x) {
            return Err(Error::unsupported("weight", format!("{lambda} is singular for the p-dilated dot action")));
        }
        let engine = self.kl.as_ref().expect("KL mode always builds an engine");
        let pres = engine.presentation();

        // λ = w·λ_C with λ_C in the fundamental alcove.
        let (word, lowest) = alc.to_fundamental(&x);
        let w = pres.element(&word)?;
        let w0 = longest_finite(pres, root.rank());
        let w0w = concat(pres, &w0, &w);

        // Dominant alcoves y·C with ℓ(y) ≤ ℓ(w).
        let mut seen: HashSet<CoxeterElement> = HashSet::from([pres.identity()]);
        let mut queue = VecDeque::from([pres.identity()]);
        let mut out = Character::zero();
        while let Some(y) = queue.pop_front() {
            let y_lambda = alc.apply(y.word(), &lowest);
            let pyw = engine.kl_polynomial(&concat(pres, &w0, &y), &w0w)?;
            if !pyw.is_zero() {
                let sign = if (w.len() - y.len()) % 2 == 0 { 1 } else { -1 };
                let mu = &y_lambda - &root.rho();
                out = &out + &self.chi(&mu)?.scale(sign * pyw.eval_one());
            }
            if y.len() >= w.len() {
                continue;
            }
            for s in 0..pres.rank() as u8 {
                let ys = pres.multiply(&y, s);
                if ys.len() > y.len() && alc.apply(ys.word(), &lowest).0.iter().all(|&c| c > 0) && seen.insert(ys.clone())
                {
                    queue.push_back(ys);
                }
            }
        }
        Ok(out)
    }
}

fn concat(pres: &CoxeterPresentation, a: &CoxeterElement, b: &CoxeterElement) -> CoxeterElement {
    let mut word = a.word().to_vec();
    word.extend_from_slice(b.word());
    pres.element(&word).expect("generators come from the same presentation")
}

/// Longest element of the finite parabolic subgroup on generators `0..r`.
fn longest_finite(pres: &CoxeterPresentation, r: usize) -> CoxeterElement {
    let mut x = pres.identity();
    'grow: loop {
        for s in 0..r as u8 {
            let y = pres.multiply(&x, s);
            if y.len() > x.len() {
                x = y;
                continue 'grow;
            }
        }
        return x;
    }
}

/// The p-dilated affine Weyl group acting on `ρ`-shifted weights `x = μ + ρ`.
/// Generator `i < r` is the finite reflection `s_i`; generator `r` is the
/// reflection in `<x, α_0^∨> = p` for the highest short root `α_0`.
pub struct Alcoves<'a> {
    root: &'a RootSystem,
    p: i64,
    alpha0: Vec<i64>,
    alpha0_weight: WeightVector,
}

impl<'a> Alcoves<'a> {
    pub fn new(root: &'a RootSystem, p: u64) -> Self {
        let alpha0 = root.highest_short_root().to_vec();
        let r = root.rank();
        let alpha0_weight = WeightVector((0..r).map(|i| (0..r).map(|j| root.cartan()[i][j] * alpha0[j]).sum()).collect());
        Alcoves { root, p: p as i64, alpha0, alpha0_weight }
    }

    pub fn reflect(&self, s: u8, x: &WeightVector) -> WeightVector {
        let s = s as usize;
        if s < self.root.rank() {
            self.root.reflect(s, x)
        } else {
            let k = self.root.coroot_pairing(x, &self.alpha0) - self.p;
            x - &self.alpha0_weight.scale(k)
        }
    }

    /// `y·x` for a word `y = g_1 ⋯ g_k`, acting right to left.
    pub fn apply(&self, word: &[u8], x: &WeightVector) -> WeightVector {
        word.iter().rev().fold(x.clone(), |acc, &s| self.reflect(s, &acc))
    }

    /// No coroot pairing is divisible by `p`.
    pub fn is_regular(&self, x: &WeightVector) -> bool {
        self.root.positive_roots().iter().all(|b| self.root.coroot_pairing(x, b) % self.p != 0)
    }

    /// Returns `(word, x_C)` with `x = word·x_C` and `x_C` in the fundamental alcove.
    pub fn to_fundamental(&self, x: &WeightVector) -> (Vec<u8>, WeightVector) {
        let r = self.root.rank();
        let mut cur = x.clone();
        let mut word = Vec::new();
        loop {
            if let Some(i) = cur.0.iter().position(|&c| c < 0) {
                cur = self.root.reflect(i, &cur);
                word.push(i as u8);
            } else if self.root.coroot_pairing(&cur, &self.alpha0) > self.p {
                cur = self.reflect(r as u8, &cur);
                word.push(r as u8);
            } else {
                return (word, cur);
            }
        }
    }
}

/// `E^n_λ` together with its labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCharacter {
    pub lambda: WeightVector,
    pub n: u32,
    pub p: u64,
    pub character: Character,
}

/// `E¹_λ = E¹_{λ_0} (E⁰_{(λ-λ_0)/p})^{[1]}`.
pub fn e1_full(src: &E1Source, lambda: &WeightVector) -> Result<Character> {
    Ok(e_n(src, lambda, 1)?.character)
}

/// `E^n_λ`; level 0 is the Weyl character.
pub fn e_n(src: &E1Source, lambda: &WeightVector, n: u32) -> Result<LevelCharacter> {
    let root = src.root();
    root.check_dominant(lambda)?;
    let p = src.p();
    let character = if n == 0 {
        src.chi(lambda)?
    } else {
        let digits = p_adic_decompose(lambda, p)?;
        let mut acc = Character::one(root.rank());
        for (i, digit) in digits.iter().enumerate().take(n as usize) {
            if !digit.is_zero() {
                acc = &acc * &src.e1_reduced(digit)?.frobenius_twist(i as u32, p);
            }
        }
        // Σ_{j≥n} p^{j-n} λ_j
        let mut tail = WeightVector::zero(root.rank());
        for digit in digits.iter().skip(n as usize).rev() {
            tail = &tail.scale(p as i64) + digit;
        }
        if !tail.is_zero() {
            acc = &acc * &src.chi(&tail)?.frobenius_twist(n, p);
        }
        acc
    };
    Ok(LevelCharacter { lambda: lambda.clone(), n, p, character })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinbergReport {
    pub passed: bool,
    pub restricted_part: WeightVector,
    pub twisted_part: WeightVector,
    /// `E^n_w` assembled directly.
    pub direct: Character,
    /// `E^n_{w'} · (E^{n-1}_{w''})^{[1]}`.
    pub factored: Character,
}

/// Compares `E^n_w` with `E^n_{w'} (E^{n-1}_{w''})^{[1]}` for `w = w' + p w''`.
pub fn steinberg_check(src: &E1Source, w: &WeightVector, n: u32) -> Result<SteinbergReport> {
    if n == 0 {
        return Err(Error::domain("level", "the Steinberg check needs level n >= 1"));
    }
    src.root().check_dominant(w)?;
    let p = src.p() as i64;
    let restricted = WeightVector(w.0.iter().map(|c| c % p).collect());
    let twisted = WeightVector(w.0.iter().map(|c| c / p).collect());
    let direct = e_n(src, w, n)?.character;
    let left = e_n(src, &restricted, n)?.character;
    let right = e_n(src, &twisted, n - 1)?.character.frobenius_twist(1, src.p());
    let factored = &left * &right;
    Ok(SteinbergReport { passed: direct == factored, restricted_part: restricted, twisted_part: twisted, direct, factored })
}

/// `E¹_λ = E²_λ = ⋯ = E^{n_max}_λ` for restricted `λ`.
pub fn stabilization_check(src: &E1Source, lambda: &WeightVector, n_max: u32) -> Result<bool> {
    src.root().check_dominant(lambda)?;
    if !lambda.is_restricted(src.p()) {
        return Err(Error::domain("weight", format!("{lambda} is not restricted for p = {}", src.p())));
    }
    let first = e_n(src, lambda, 1)?.character;
    for n in 2..=n_max {
        if e_n(src, lambda, n)?.character != first {
            return Ok(false);
        }
    }
    Ok(true)
}
