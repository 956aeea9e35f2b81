//! The meromorphic function class of the residue formulas: finite sums of
//! terms g(X) e^{l(X)} / (prod alpha_i(X)^{k_i} * prod (1 - e^{beta_j(X)}))
//! with g a polynomial with exact rational coefficients.

use crate::laurent::SeriesTower;
use crate::numkernel::{ExactScalar, LinearForm, MatQ};
use crate::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Multivariate polynomial with exact coefficients, exponents >= 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    rank: usize,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl Poly {
    pub fn zero(rank: usize) -> Self {
        Poly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: ExactScalar) -> Self {
        let mut p = Poly::zero(rank);
        if !c.is_zero() {
            p.terms.insert(vec![0; rank], c);
        }
        p
    }

    pub fn one(rank: usize) -> Self {
        Poly::constant(rank, ExactScalar::one())
    }

    pub fn from_linear_form(form: &LinearForm) -> Self {
        let rank = form.rank();
        let mut p = Poly::zero(rank);
        for (j, c) in form.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; rank];
                e[j] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.rank, other.rank);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(ExactScalar::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Poly {
            rank: self.rank,
            terms,
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.rank, other.rank);
        let mut terms: BTreeMap<Vec<u32>, ExactScalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let p = ca * cb;
                let entry = terms.entry(e.clone()).or_insert_with(ExactScalar::zero);
                *entry += p;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        Poly {
            rank: self.rank,
            terms,
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.rank);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= s;
        }
        out
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m *= &point[j];
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = Complex64::new(crate::numkernel::to_f64(c), 0.0);
            for (j, &k) in e.iter().enumerate() {
                m *= point[j].powi(k as i32);
            }
            acc += m;
        }
        acc
    }

    /// Substitute Y_i = sum_j m[i][j] Z_j (an exact linear change of
    /// variables given by the rows of `m`).
    pub fn substitute_linear(&self, m: &MatQ) -> Poly {
        assert_eq!(m.nrows(), self.rank);
        let new_rank = m.ncols();
        let images: Vec<Poly> = (0..self.rank)
            .map(|i| {
                Poly::from_linear_form(&LinearForm::new(m.row(i).to_vec()))
            })
            .collect();
        let mut acc = Poly::zero(new_rank);
        for (e, c) in &self.terms {
            let mut mono = Poly::constant(new_rank, c.clone());
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    mono = mono.mul(&images[j]);
                }
            }
            acc = acc.add(&mono);
        }
        acc
    }

    pub fn to_tower(&self) -> SeriesTower {
        let mut t = SeriesTower::zero(self.rank);
        for (e, c) in &self.terms {
            let exps: Vec<i64> = e.iter().map(|&x| x as i64).collect();
            t = t
                .add(&SeriesTower::monomial(self.rank, exps, c.clone()))
                .expect("rank fixed");
        }
        t
    }
}

/// One term of the meromorphic class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeroTerm {
    rank: usize,
    /// Polynomial numerator g(X).
    pub numerator: Poly,
    /// Exponent form l in e^{l(X)} (zero form means no exponential).
    pub exp_form: LinearForm,
    /// Linear denominator factors alpha(X)^k as (form, multiplicity).
    pub linear_denoms: Vec<(LinearForm, u32)>,
    /// Factors (1 - e^{beta(X)}).
    pub expden_factors: Vec<LinearForm>,
}

impl MeroTerm {
    pub fn new(
        numerator: Poly,
        exp_form: LinearForm,
        linear_denoms: Vec<(LinearForm, u32)>,
        expden_factors: Vec<LinearForm>,
    ) -> Result<Self> {
        let rank = numerator.rank();
        if exp_form.rank() != rank
            || linear_denoms.iter().any(|(f, _)| f.rank() != rank)
            || expden_factors.iter().any(|f| f.rank() != rank)
        {
            return Err(Error::precondition("mero term: mixed ranks"));
        }
        if linear_denoms.iter().any(|(f, _)| f.is_zero())
            || expden_factors.iter().any(|f| f.is_zero())
        {
            return Err(Error::precondition(
                "mero term: zero form in a denominator",
            ));
        }
        let mut t = MeroTerm {
            rank,
            numerator,
            exp_form,
            linear_denoms,
            expden_factors,
        };
        t.canonicalize();
        Ok(t)
    }

    /// Constant term c (no denominators, no exponential).
    pub fn constant(rank: usize, c: ExactScalar) -> Self {
        MeroTerm {
            rank,
            numerator: Poly::constant(rank, c),
            exp_form: LinearForm::zero(rank),
            linear_denoms: Vec::new(),
            expden_factors: Vec::new(),
        }
    }

    fn canonicalize(&mut self) {
        // merge equal linear denominators, sort everything
        let mut merged: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (f, k) in self.linear_denoms.drain(..) {
            *merged.entry(f).or_insert(0) += k;
        }
        self.linear_denoms = merged.into_iter().filter(|(_, k)| *k > 0).collect();
        self.expden_factors.sort();
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Total pole order at the origin flag: linear multiplicities plus one
    /// per (1 - e^beta) factor.
    pub fn pole_order(&self) -> i64 {
        self.linear_denoms
            .iter()
            .map(|(_, k)| *k as i64)
            .sum::<i64>()
            + self.expden_factors.len() as i64
    }

    pub fn is_pure_rational(&self) -> bool {
        self.exp_form.is_zero() && self.expden_factors.is_empty()
    }

    /// Degree excess of the rational part: (sum of linear denominator
    /// multiplicities) - (numerator total degree).
    pub fn rational_decay_excess(&self) -> i64 {
        let den: i64 = self.linear_denoms.iter().map(|(_, k)| *k as i64).sum();
        den - self.numerator.total_degree() as i64
    }

    pub fn mul(&self, other: &MeroTerm) -> MeroTerm {
        assert_eq!(self.rank, other.rank);
        let mut linear_denoms = self.linear_denoms.clone();
        linear_denoms.extend(other.linear_denoms.iter().cloned());
        let mut expden = self.expden_factors.clone();
        expden.extend(other.expden_factors.iter().cloned());
        let mut t = MeroTerm {
            rank: self.rank,
            numerator: self.numerator.mul(&other.numerator),
            exp_form: self.exp_form.add(&other.exp_form),
            linear_denoms,
            expden_factors: expden,
        };
        t.canonicalize();
        t
    }

    pub fn scale(&self, s: &ExactScalar) -> MeroTerm {
        MeroTerm {
            rank: self.rank,
            numerator: self.numerator.scale(s),
            exp_form: self.exp_form.clone(),
            linear_denoms: self.linear_denoms.clone(),
            expden_factors: self.expden_factors.clone(),
        }
    }

    /// Exact transport along an invertible substitution X -> M X (forms pick
    /// up M^T, the numerator is substituted).
    pub fn transport(&self, m: &MatQ) -> MeroTerm {
        let mt = m.transpose();
        let tf = |f: &LinearForm| LinearForm::new(mt.mul_vec(f.coeffs()));
        let mut t = MeroTerm {
            rank: self.rank,
            numerator: self.numerator.substitute_linear(m),
            exp_form: tf(&self.exp_form),
            linear_denoms: self
                .linear_denoms
                .iter()
                .map(|(f, k)| (tf(f), *k))
                .collect(),
            expden_factors: self.expden_factors.iter().map(tf).collect(),
        };
        t.canonicalize();
        t
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut v = self.numerator.eval_complex(point);
        if !self.exp_form.is_zero() {
            v *= self.exp_form.apply_complex(point).exp();
        }
        for (f, k) in &self.linear_denoms {
            v /= f.apply_complex(point).powi(*k as i32);
        }
        for f in &self.expden_factors {
            v /= Complex64::new(1.0, 0.0) - f.apply_complex(point).exp();
        }
        v
    }

    pub fn eval_rational(&self, point: &[ExactScalar]) -> Result<ExactScalar> {
        if !self.is_pure_rational() {
            return Err(Error::precondition(
                "exact evaluation requires a pure rational term",
            ));
        }
        let mut v = self.numerator.eval(point);
        for (f, k) in &self.linear_denoms {
            let d = f.apply(point);
            if d.is_zero() {
                return Err(Error::computation(
                    "evaluation point lies on a pole hyperplane",
                ));
            }
            for _ in 0..*k {
                v /= &d;
            }
        }
        Ok(v)
    }
}

/// A finite sum of meromorphic terms; the empty sum denotes zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeroFunction {
    rank: usize,
    pub terms: Vec<MeroTerm>,
}

impl MeroFunction {
    pub fn zero(rank: usize) -> Self {
        MeroFunction {
            rank,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(rank: usize, terms: Vec<MeroTerm>) -> Result<Self> {
        if terms.iter().any(|t| t.rank() != rank) {
            return Err(Error::precondition("mero function: mixed ranks"));
        }
        Ok(MeroFunction { rank, terms })
    }

    pub fn from_term(term: MeroTerm) -> Self {
        MeroFunction {
            rank: term.rank(),
            terms: vec![term],
        }
    }

    /// 1 / prod(forms) with multiplicity one each: the simple-fraction shape.
    pub fn simple_fraction(rank: usize, forms: Vec<LinearForm>) -> Result<Self> {
        let term = MeroTerm::new(
            Poly::one(rank),
            LinearForm::zero(rank),
            forms.into_iter().map(|f| (f, 1)).collect(),
            Vec::new(),
        )?;
        Ok(MeroFunction::from_term(term))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero_sum(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MeroFunction) -> MeroFunction {
        assert_eq!(self.rank, other.rank);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        MeroFunction {
            rank: self.rank,
            terms,
        }
    }

    pub fn neg(&self) -> MeroFunction {
        self.scale(&-ExactScalar::one())
    }

    pub fn scale(&self, s: &ExactScalar) -> MeroFunction {
        MeroFunction {
            rank: self.rank,
            terms: self.terms.iter().map(|t| t.scale(s)).collect(),
        }
    }

    pub fn mul(&self, other: &MeroFunction) -> MeroFunction {
        assert_eq!(self.rank, other.rank);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        MeroFunction {
            rank: self.rank,
            terms,
        }
    }

    pub fn transport(&self, m: &MatQ) -> MeroFunction {
        MeroFunction {
            rank: self.rank,
            terms: self.terms.iter().map(|t| t.transport(m)).collect(),
        }
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|t| t.eval_complex(point)).sum()
    }

    pub fn eval_rational(&self, point: &[ExactScalar]) -> Result<ExactScalar> {
        let mut acc = ExactScalar::zero();
        for t in &self.terms {
            acc += t.eval_rational(point)?;
        }
        Ok(acc)
    }

    pub fn is_pure_rational(&self) -> bool {
        self.terms.iter().all(|t| t.is_pure_rational())
    }

    pub fn has_expden(&self) -> bool {
        self.terms.iter().any(|t| !t.expden_factors.is_empty())
    }

    /// Minimum rational decay excess over the terms (i64::MAX for the zero
    /// function).
    pub fn decay_excess(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.rational_decay_excess())
            .min()
            .unwrap_or(i64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{rat, rat_int};

    #[test]
    fn poly_substitution() {
        // p = Y1*Y2, substitute Y1 = Z1, Y2 = Z2 - Z1: p = Z1 Z2 - Z1^2
        let p = Poly::from_linear_form(&LinearForm::from_i64(&[1, 0]))
            .mul(&Poly::from_linear_form(&LinearForm::from_i64(&[0, 1])));
        let m = MatQ::from_i64_rows(&[&[1, 0], &[-1, 1]]);
        let q = p.substitute_linear(&m);
        assert_eq!(q.terms().get(&vec![1, 1]), Some(&rat_int(1)));
        assert_eq!(q.terms().get(&vec![2, 0]), Some(&rat_int(-1)));
        assert_eq!(q.terms().len(), 2);
    }

    #[test]
    fn term_merges_equal_denominators() {
        let rank = 1;
        let f = LinearForm::from_i64(&[1]);
        let t = MeroTerm::new(
            Poly::one(rank),
            LinearForm::zero(rank),
            vec![(f.clone(), 1), (f.clone(), 2)],
            vec![],
        )
        .unwrap();
        assert_eq!(t.linear_denoms, vec![(f, 3)]);
        assert_eq!(t.pole_order(), 3);
    }

    #[test]
    fn rational_evaluation() {
        // 1/(Y2*(Y1+Y2)) at (1/2, 1/3)
        let f = MeroFunction::simple_fraction(
            2,
            vec![LinearForm::from_i64(&[0, 1]), LinearForm::from_i64(&[1, 1])],
        )
        .unwrap();
        let v = f.eval_rational(&[rat(1, 2), rat(1, 3)]).unwrap();
        // 1/((1/3)*(5/6)) = 18/5
        assert_eq!(v, rat(18, 5));
        // pole detection
        assert!(f.eval_rational(&[rat(1, 2), rat_int(0)]).is_err());
    }

    #[test]
    fn complex_evaluation_with_exponentials() {
        // exp(-Y/2) / (Y^2 (e^{-Y} - 1)) = -exp(-Y/2) / (Y^2 (1 - e^{-Y}))
        let term = MeroTerm::new(
            Poly::constant(1, rat_int(-1)),
            LinearForm::new(vec![rat(-1, 2)]),
            vec![(LinearForm::from_i64(&[1]), 2)],
            vec![LinearForm::from_i64(&[-1])],
        )
        .unwrap();
        let y = Complex64::new(0.3, 0.0);
        let direct = (-y / 2.0).exp() / (y * y * ((-y).exp() - 1.0));
        let got = term.eval_complex(&[y]);
        assert!((got - direct).norm() < 1e-12);
    }

    #[test]
    fn decay_excess_reporting() {
        let f = MeroFunction::simple_fraction(
            1,
            vec![LinearForm::from_i64(&[1]), LinearForm::from_i64(&[1])],
        )
        .unwrap();
        assert_eq!(f.decay_excess(), 2);
    }
}
