//! Truncated models of a regular local ring.
//!
//! Two concrete models cover the examples:
//!
//! * equicharacteristic: polynomials in `s_1..s_n` over a prime field or the
//!   rationals, truncated at total degree `D`;
//! * mixed characteristic: `s_1` is identified with a prime `p`, the
//!   remaining variables `s_2..s_n` are formal, and the coefficient of a
//!   degree-`d` monomial is an integer known modulo `p^(D+1-d)`.
//!
//! In both models the maximal ideal is generated by `s_1..s_n` and a product
//! `s_i * r` vanishing at cap `D` forces `r` to vanish at cap `D-1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("a model needs at least one maximal-ideal generator")]
    NoVariables,
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("no generator named `{0}`")]
    UnknownGenerator(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

/// Exponent vector over the model's free variables.
type Monomial = Vec<u16>;

/// A truncated element: a canonical, zero-free map from monomials to scalars.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Coefficient {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Coefficient {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientModel {
    Equicharacteristic {
        base: BaseField,
        vars: Vec<String>,
        deg_cap: usize,
    },
    MixedCharacteristic {
        prime: u64,
        /// `vars[0]` names the generator identified with the prime.
        vars: Vec<String>,
        deg_cap: usize,
    },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoefficientModel {
    pub fn equicharacteristic(
        characteristic: u64,
        vars: Vec<String>,
        deg_cap: usize,
    ) -> Result<Self, ModelError> {
        let base = if characteristic == 0 {
            BaseField::Rationals
        } else if is_prime(characteristic) {
            BaseField::Prime(characteristic)
        } else {
            return Err(ModelError::NotPrime(characteristic));
        };
        Self::check_names(&vars)?;
        Ok(CoefficientModel::Equicharacteristic { base, vars, deg_cap })
    }

    pub fn mixed(prime: u64, vars: Vec<String>, deg_cap: usize) -> Result<Self, ModelError> {
        if !is_prime(prime) {
            return Err(ModelError::NotPrime(prime));
        }
        Self::check_names(&vars)?;
        Ok(CoefficientModel::MixedCharacteristic { prime, vars, deg_cap })
    }

    fn check_names(vars: &[String]) -> Result<(), ModelError> {
        if vars.is_empty() {
            return Err(ModelError::NoVariables);
        }
        for (i, n) in vars.iter().enumerate() {
            if vars[..i].contains(n) {
                return Err(ModelError::DuplicateName(n.clone()));
            }
        }
        Ok(())
    }

    /// The Krull dimension: the number of maximal-ideal generators.
    pub fn dimension(&self) -> usize {
        match self {
            CoefficientModel::Equicharacteristic { vars, .. } => vars.len(),
            CoefficientModel::MixedCharacteristic { vars, .. } => vars.len(),
        }
    }

    pub fn deg_cap(&self) -> usize {
        match self {
            CoefficientModel::Equicharacteristic { deg_cap, .. } => *deg_cap,
            CoefficientModel::MixedCharacteristic { deg_cap, .. } => *deg_cap,
        }
    }

    pub fn var_names(&self) -> &[String] {
        match self {
            CoefficientModel::Equicharacteristic { vars, .. } => vars,
            CoefficientModel::MixedCharacteristic { vars, .. } => vars,
        }
    }

    /// 1-based generator index by name.
    pub fn generator_index(&self, name: &str) -> Result<usize, ModelError> {
        self.var_names()
            .iter()
            .position(|n| n == name)
            .map(|i| i + 1)
            .ok_or_else(|| ModelError::UnknownGenerator(name.to_string()))
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, CoefficientModel::MixedCharacteristic { .. })
    }

    fn free_var_count(&self) -> usize {
        match self {
            CoefficientModel::Equicharacteristic { vars, .. } => vars.len(),
            CoefficientModel::MixedCharacteristic { vars, .. } => vars.len() - 1,
        }
    }

    /// Maps the 1-based generator index to a free-variable slot; `None` means
    /// the mixed model's prime.
    fn free_index(&self, i: usize) -> Option<usize> {
        debug_assert!(i >= 1 && i <= self.dimension());
        match self {
            CoefficientModel::Equicharacteristic { .. } => Some(i - 1),
            CoefficientModel::MixedCharacteristic { .. } => {
                if i == 1 {
                    None
                } else {
                    Some(i - 2)
                }
            }
        }
    }

    pub fn zero(&self) -> Coefficient {
        Coefficient::default()
    }

    pub fn one(&self) -> Coefficient {
        self.from_int(1)
    }

    pub fn from_int(&self, value: i64) -> Coefficient {
        let mut c = Coefficient::default();
        c.terms.insert(
            vec![0; self.free_var_count()],
            BigRational::from_integer(BigInt::from(value)),
        );
        self.normalized(c)
    }

    /// The generator `s_i` raised to the k-th power as an element.
    pub fn s_power(&self, i: usize, k: usize) -> Coefficient {
        let mut c = Coefficient::default();
        match self.free_index(i) {
            Some(fi) => {
                let mut mono = vec![0u16; self.free_var_count()];
                mono[fi] = k as u16;
                c.terms.insert(mono, BigRational::one());
            }
            None => {
                let CoefficientModel::MixedCharacteristic { prime, .. } = self else {
                    unreachable!()
                };
                let value = BigInt::from(*prime).pow(k as u32);
                c.terms
                    .insert(vec![0; self.free_var_count()], BigRational::from_integer(value));
            }
        }
        self.normalized(c)
    }

    fn reduce_scalar(&self, degree: usize, scalar: &BigRational) -> BigRational {
        match self {
            CoefficientModel::Equicharacteristic { base, .. } => match base {
                BaseField::Rationals => scalar.clone(),
                BaseField::Prime(p) => {
                    // denominators stay trivial in prime-field models
                    debug_assert!(scalar.denom().is_one() || scalar.denom() == &BigInt::from(-1));
                    let p = BigInt::from(*p);
                    let num = scalar.numer() * if scalar.denom().is_negative() { -1 } else { 1 };
                    let r = ((num % &p) + &p) % &p;
                    BigRational::from_integer(r)
                }
            },
            CoefficientModel::MixedCharacteristic { prime, deg_cap, .. } => {
                debug_assert!(scalar.denom().is_one() || scalar.denom() == &BigInt::from(-1));
                let exp = (deg_cap + 1).saturating_sub(degree) as u32;
                let m = BigInt::from(*prime).pow(exp);
                let num = scalar.numer() * if scalar.denom().is_negative() { -1 } else { 1 };
                let r = ((num % &m) + &m) % &m;
                BigRational::from_integer(r)
            }
        }
    }

    fn normalized(&self, c: Coefficient) -> Coefficient {
        let cap = self.deg_cap();
        let mut out = Coefficient::default();
        for (mono, scalar) in c.terms {
            let degree: usize = mono.iter().map(|e| *e as usize).sum();
            if degree > cap {
                continue;
            }
            let reduced = self.reduce_scalar(degree, &scalar);
            if !reduced.is_zero() {
                out.terms.insert(mono, reduced);
            }
        }
        out
    }

    pub fn add(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        let mut terms = a.terms.clone();
        for (mono, scalar) in &b.terms {
            let entry = terms.entry(mono.clone()).or_insert_with(BigRational::zero);
            *entry += scalar;
        }
        self.normalized(Coefficient { terms })
    }

    pub fn neg(&self, a: &Coefficient) -> Coefficient {
        let terms = a
            .terms
            .iter()
            .map(|(m, s)| (m.clone(), -s.clone()))
            .collect();
        self.normalized(Coefficient { terms })
    }

    pub fn sub(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, sa) in &a.terms {
            for (mb, sb) in &b.terms {
                let mono: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(mono).or_insert_with(BigRational::zero);
                *entry += sa * sb;
            }
        }
        self.normalized(Coefficient { terms })
    }

    /// Removes the `s_j`-divisible part. In the mixed model with `j = 1` the
    /// scalars are reduced modulo the prime; otherwise monomials containing
    /// the variable are dropped.
    pub fn drop_divisible(&self, c: &Coefficient, j: usize) -> Coefficient {
        match self.free_index(j) {
            Some(fj) => {
                let terms = c
                    .terms
                    .iter()
                    .filter(|(m, _)| m[fj] == 0)
                    .map(|(m, s)| (m.clone(), s.clone()))
                    .collect();
                self.normalized(Coefficient { terms })
            }
            None => {
                let CoefficientModel::MixedCharacteristic { prime, .. } = self else {
                    unreachable!()
                };
                let p = BigInt::from(*prime);
                let terms = c
                    .terms
                    .iter()
                    .map(|(m, s)| {
                        let r = ((s.numer() % &p) + &p) % &p;
                        (m.clone(), BigRational::from_integer(r))
                    })
                    .collect();
                self.normalized(Coefficient { terms })
            }
        }
    }

    /// Splits `c = kept + s_i * quotient` with `kept` free of `s_i` (kept
    /// scalars lie in `0..p` for the mixed model with `i = 1`).
    pub fn split_var(&self, c: &Coefficient, i: usize) -> (Coefficient, Coefficient) {
        match self.free_index(i) {
            Some(fi) => {
                let mut kept = Coefficient::default();
                let mut quot = Coefficient::default();
                for (m, s) in &c.terms {
                    if m[fi] == 0 {
                        kept.terms.insert(m.clone(), s.clone());
                    } else {
                        let mut lowered = m.clone();
                        lowered[fi] -= 1;
                        quot.terms.insert(lowered, s.clone());
                    }
                }
                (self.normalized(kept), self.normalized(quot))
            }
            None => {
                let CoefficientModel::MixedCharacteristic { prime, .. } = self else {
                    unreachable!()
                };
                let p = BigInt::from(*prime);
                let mut kept = Coefficient::default();
                let mut quot = Coefficient::default();
                for (m, s) in &c.terms {
                    let value = s.numer().clone();
                    let low = ((&value % &p) + &p) % &p;
                    let high = (&value - &low) / &p;
                    kept.terms.insert(m.clone(), BigRational::from_integer(low));
                    quot.terms.insert(m.clone(), BigRational::from_integer(high));
                }
                (self.normalized(kept), self.normalized(quot))
            }
        }
    }

    /// The image in the residue field: the constant monomial's scalar,
    /// reduced modulo the prime in the mixed model.
    pub fn residue(&self, c: &Coefficient) -> Coefficient {
        let constant = vec![0u16; self.free_var_count()];
        let mut out = Coefficient::default();
        if let Some(s) = c.terms.get(&constant) {
            let reduced = match self {
                CoefficientModel::MixedCharacteristic { prime, .. } => {
                    let p = BigInt::from(*prime);
                    BigRational::from_integer(((s.numer() % &p) + &p) % &p)
                }
                CoefficientModel::Equicharacteristic { .. } => s.clone(),
            };
            if !reduced.is_zero() {
                out.terms.insert(constant, reduced);
            }
        }
        out
    }

    /// The residue as a rational number, for linear algebra over k.
    pub fn residue_scalar(&self, c: &Coefficient) -> BigRational {
        let r = self.residue(c);
        r.terms.into_values().next().unwrap_or_else(BigRational::zero)
    }

    /// Whether `c` consists of a constant-monomial residue only.
    pub fn is_residue_constant(&self, c: &Coefficient) -> bool {
        self.residue(c) == *c
    }

    /// Re-truncates at a lower degree cap (scalars of the mixed model are
    /// reduced to the smaller modulus).
    pub fn truncate_at(&self, c: &Coefficient, cap: usize) -> Coefficient {
        let lowered = match self {
            CoefficientModel::Equicharacteristic { base, vars, .. } => {
                CoefficientModel::Equicharacteristic {
                    base: base.clone(),
                    vars: vars.clone(),
                    deg_cap: cap,
                }
            }
            CoefficientModel::MixedCharacteristic { prime, vars, .. } => {
                CoefficientModel::MixedCharacteristic {
                    prime: *prime,
                    vars: vars.clone(),
                    deg_cap: cap,
                }
            }
        };
        lowered.normalized(c.clone())
    }

    pub fn render(&self, c: &Coefficient) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        let names: Vec<&str> = match self {
            CoefficientModel::Equicharacteristic { vars, .. } => {
                vars.iter().map(String::as_str).collect()
            }
            CoefficientModel::MixedCharacteristic { vars, .. } => {
                vars[1..].iter().map(String::as_str).collect()
            }
        };
        let mut parts = Vec::new();
        for (mono, scalar) in &c.terms {
            let mut factors = Vec::new();
            let degree: usize = mono.iter().map(|e| *e as usize).sum();
            if !scalar.is_one() || degree == 0 {
                factors.push(if scalar.denom().is_one() {
                    scalar.numer().to_string()
                } else {
                    scalar.to_string()
                });
            }
            for (fi, exp) in mono.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => factors.push(names[fi].to_string()),
                    _ => factors.push(format!("{}^{}", names[fi], exp)),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    /// A compact u64 view of a residue scalar in a prime-field or mixed
    /// model, used by test oracles.
    pub fn residue_u64(&self, c: &Coefficient) -> Option<u64> {
        let r = self.residue_scalar(c);
        r.numer().to_u64()
    }
}
