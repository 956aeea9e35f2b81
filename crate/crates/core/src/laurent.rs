//! Nested truncated Laurent series ("series towers") with exact rational
//! coefficients.
//!
//! The semantic regime is |Z_r| << |Z_{r-1}| << ... << |Z_1|: the variable
//! with the largest index is the innermost (smallest). A tower stores the
//! monomials of the joint expansion of a function in that regime, together
//! with a per-variable cap window. The box semantics: every true monomial of
//! the expanded function whose exponents are componentwise <= the caps is
//! present with its exact coefficient. Degrees above a cap are dropped at
//! every level and never silently extended; floors (pole orders) are always
//! kept in full.
//!
//! Iterated residues are then coefficient extractions: the residue against an
//! ordered basis is the coefficient of Z_1^{-1} ... Z_r^{-1}, innermost
//! variable first.

use crate::numkernel::{rat_int, ExactScalar, LinearForm};
use crate::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

/// Sentinel for "no truncation in this variable".
pub const CAP_UNBOUNDED: i64 = i64::MAX / 4;

fn cap_add(cap: i64, floor: i64) -> i64 {
    if cap >= CAP_UNBOUNDED {
        CAP_UNBOUNDED
    } else {
        (cap + floor).min(CAP_UNBOUNDED)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SeriesTower {
    rank: usize,
    caps: Vec<i64>,
    terms: BTreeMap<Vec<i64>, ExactScalar>,
}

impl SeriesTower {
    pub fn zero(rank: usize) -> Self {
        SeriesTower {
            rank,
            caps: vec![CAP_UNBOUNDED; rank],
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: ExactScalar) -> Self {
        let mut t = SeriesTower::zero(rank);
        if !c.is_zero() {
            t.terms.insert(vec![0; rank], c);
        }
        t
    }

    pub fn monomial(rank: usize, exps: Vec<i64>, c: ExactScalar) -> Self {
        assert_eq!(exps.len(), rank);
        let mut t = SeriesTower::zero(rank);
        if !c.is_zero() {
            t.terms.insert(exps, c);
        }
        t
    }

    /// Degree-1 polynomial tower of a linear form (exact).
    pub fn from_linear_form(form: &LinearForm) -> Self {
        let rank = form.rank();
        let mut t = SeriesTower::zero(rank);
        for (j, c) in form.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0i64; rank];
                e[j] = 1;
                t.terms.insert(e, c.clone());
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn caps(&self) -> &[i64] {
        &self.caps
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, ExactScalar> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimal exponent of variable `k` in the stored terms (0 when empty).
    pub fn floor(&self, k: usize) -> i64 {
        self.terms.keys().map(|e| e[k]).min().unwrap_or(0)
    }

    pub fn coeff(&self, exps: &[i64]) -> ExactScalar {
        self.terms.get(exps).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Drop all terms outside the cap box.
    fn prune(mut self) -> Self {
        let caps = self.caps.clone();
        self.terms
            .retain(|e, _| e.iter().zip(&caps).all(|(x, c)| x <= c));
        self
    }

    pub fn truncate_to(mut self, caps: &[i64]) -> Self {
        assert_eq!(caps.len(), self.rank);
        for k in 0..self.rank {
            self.caps[k] = self.caps[k].min(caps[k]);
        }
        self.prune()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return SeriesTower::zero(self.rank);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::precondition(
                "series tower addition: mismatched variable orderings",
            ));
        }
        let caps: Vec<i64> = self
            .caps
            .iter()
            .zip(&other.caps)
            .map(|(a, b)| *a.min(b))
            .collect();
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(ExactScalar::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Ok(SeriesTower {
            rank: self.rank,
            caps,
            terms,
        }
        .prune())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Truncated product. The result window is min(cap_a + floor_b,
    /// cap_b + floor_a) per variable, so retained coefficients are exact.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::precondition(
                "series tower multiplication: mismatched variable orderings",
            ));
        }
        // Exact zero (empty with unbounded caps) annihilates.
        let caps: Vec<i64> = (0..self.rank)
            .map(|k| {
                if self.terms.is_empty() && self.caps[k] >= CAP_UNBOUNDED {
                    CAP_UNBOUNDED
                } else if other.terms.is_empty() && other.caps[k] >= CAP_UNBOUNDED {
                    CAP_UNBOUNDED
                } else if self.terms.is_empty() || other.terms.is_empty() {
                    self.caps[k].min(other.caps[k])
                } else {
                    cap_add(self.caps[k], other.floor(k))
                        .min(cap_add(other.caps[k], self.floor(k)))
                }
            })
            .collect();
        let mut terms: BTreeMap<Vec<i64>, ExactScalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if e.iter().zip(&caps).any(|(x, c)| x > c) {
                    continue;
                }
                let p = ca * cb;
                let entry = terms.entry(e.clone()).or_insert_with(ExactScalar::zero);
                *entry += p;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        Ok(SeriesTower {
            rank: self.rank,
            caps,
            terms,
        })
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = SeriesTower::constant(self.rank, ExactScalar::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Coefficient of Z_{k+1}^e as a tower in the remaining variables.
    /// Errors if the window does not cover exponent `e` in that variable.
    pub fn extract(&self, k: usize, e: i64) -> Result<SeriesTower> {
        if self.caps[k] < e {
            return Err(Error::computation(format!(
                "truncation window (cap {}) does not cover exponent {e} of Z{}",
                self.caps[k],
                k + 1
            )));
        }
        let mut caps = self.caps.clone();
        caps.remove(k);
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            if exps[k] == e {
                let mut rest = exps.clone();
                rest.remove(k);
                terms.insert(rest, c.clone());
            }
        }
        Ok(SeriesTower {
            rank: self.rank - 1,
            caps,
            terms,
        })
    }

    /// The joint coefficient of Z_1^{-1} ... Z_r^{-1} (the iterated residue
    /// of the expansion, innermost variable first).
    pub fn residue_coeff(&self) -> Result<ExactScalar> {
        for k in 0..self.rank {
            if self.caps[k] < -1 {
                return Err(Error::computation(format!(
                    "truncation window (cap {}) does not cover Z{}^-1",
                    self.caps[k],
                    k + 1
                )));
            }
        }
        Ok(self.coeff(&vec![-1; self.rank]))
    }

    /// Numeric evaluation at a complex point (for the consistency oracle).
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.rank);
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, c) in &self.terms {
            let mut m = Complex64::new(crate::numkernel::to_f64(c), 0.0);
            for (j, &e) in exps.iter().enumerate() {
                m *= z[j].powi(e as i32);
            }
            acc += m;
        }
        acc
    }

    /// 1/L expanded in the regime |Z_r| << ... << |Z_1|. Writing
    /// L = c_k Z_k + L' with Z_k the innermost variable L depends on:
    /// a plain monomial when L' = 0, otherwise the geometric series
    /// (1/L') sum_j (-c_k Z_k / L')^j with 1/L' expanded recursively.
    pub fn inv_linear_form(form: &LinearForm, caps: &[i64]) -> Result<Self> {
        let rank = form.rank();
        assert_eq!(caps.len(), rank);
        let idx = form
            .innermost_nonzero()
            .ok_or_else(|| Error::precondition("cannot invert the zero form"))?;
        let c = form.coeff(idx).clone();
        let mut rest_coeffs: Vec<ExactScalar> = form.coeffs().to_vec();
        rest_coeffs[idx] = ExactScalar::zero();
        let rest = LinearForm::new(rest_coeffs);

        if rest.is_zero() {
            let mut e = vec![0i64; rank];
            e[idx] = -1;
            return Ok(SeriesTower::monomial(rank, e, ExactScalar::one() / c));
        }
        assert!(caps[idx] >= 0, "expansion caps must be non-negative");
        let inv_rest = SeriesTower::inv_linear_form(&rest, caps)?;
        let mut acc = SeriesTower::zero(rank);
        // power = (1/L')^{j+1}
        let mut power = inv_rest.clone();
        let mut coeff = ExactScalar::one(); // (-c)^j
        for j in 0..=caps[idx] {
            let mut e = vec![0i64; rank];
            e[idx] = j;
            let term = power.mul(&SeriesTower::monomial(rank, e, coeff.clone()))?;
            acc = acc.add(&term)?;
            coeff *= -c.clone();
            power = power.mul(&inv_rest)?;
        }
        // The geometric truncation is exact up to caps[idx] in Z_idx.
        acc.caps[idx] = acc.caps[idx].min(caps[idx]);
        Ok(acc.truncate_to(caps))
    }

    /// exp(l) = sum_j l^j / j!, truncated to the caps.
    pub fn exp_linear(form: &LinearForm, caps: &[i64]) -> Result<Self> {
        let rank = form.rank();
        assert_eq!(caps.len(), rank);
        let base = SeriesTower::from_linear_form(form).truncate_to(caps);
        let mut acc = SeriesTower::constant(rank, ExactScalar::one()).truncate_to(caps);
        let mut power = SeriesTower::constant(rank, ExactScalar::one()).truncate_to(caps);
        let mut factorial = ExactScalar::one();
        let degree_budget: i64 = caps.iter().map(|&c| c.max(0)).sum::<i64>() + 1;
        for j in 1..=degree_budget {
            power = power.mul(&base)?;
            if power.is_empty() {
                break;
            }
            factorial *= rat_int(j);
            acc = acc.add(&power.scale(&(ExactScalar::one() / factorial.clone())))?;
        }
        Ok(acc)
    }

    /// 1/(1 - e^beta) = -(1/beta) * sum_j (B_j / j!) beta^j, the Bernoulli
    /// generating expansion composed with the linear form beta.
    pub fn inv_one_minus_exp(form: &LinearForm, caps: &[i64]) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::precondition(
                "1/(1 - exp(beta)) requires a nonzero form",
            ));
        }
        let rank = form.rank();
        let inv_beta = SeriesTower::inv_linear_form(form, caps)?;
        let beta = SeriesTower::from_linear_form(form).truncate_to(caps);
        // j = 0 term: -(1/beta)
        let mut acc = inv_beta.neg();
        let mut power = SeriesTower::constant(rank, ExactScalar::one()).truncate_to(caps); // beta^{j-1}
        let mut factorial = ExactScalar::one();
        let degree_budget: i64 = caps.iter().map(|&c| c.max(0)).sum::<i64>() + 2;
        for j in 1..=degree_budget {
            factorial *= rat_int(j);
            let b = bernoulli(j as usize);
            if !b.is_zero() {
                let coeff = -(b / factorial.clone());
                acc = acc.add(&power.scale(&coeff))?;
            }
            power = power.mul(&beta)?;
            if power.is_empty() && j > 1 {
                break;
            }
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for SeriesTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SeriesTower(caps {:?}) {{ ", self.caps)?;
        for (e, c) in &self.terms {
            write!(f, "{:?}: {} ", e, crate::numkernel::format_exact(c))?;
        }
        write!(f, "}}")
    }
}

/// Bernoulli numbers B_j (B_1 = -1/2 convention), computed once by the
/// recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0 and cached.
pub fn bernoulli(n: usize) -> ExactScalar {
    static CACHE: OnceLock<Mutex<Vec<ExactScalar>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![ExactScalar::one()]));
    let mut cache = cache.lock().expect("bernoulli cache poisoned");
    while cache.len() <= n {
        let m = cache.len();
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = ExactScalar::zero();
        let mut binom = ExactScalar::one(); // C(m+1, j)
        for (j, bj) in cache.iter().enumerate() {
            acc += &binom * bj;
            // C(m+1, j+1) = C(m+1, j) * (m+1-j)/(j+1)
            binom *= rat_int((m + 1 - j) as i64) / rat_int((j + 1) as i64);
        }
        let bm = -acc / rat_int((m + 1) as i64);
        cache.push(bm);
    }
    cache[n].clone()
}
