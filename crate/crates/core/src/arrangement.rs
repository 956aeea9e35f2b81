//! Hyperplane-arrangement combinatorics: bases, circuits, broken circuits,
//! no-broken-circuit (NBC) / diagonal bases, simple fractions, and the
//! rank-extension of diagonal bases by an extra covector.
//!
//! A diagonal basis is a set of ordered bases whose simple fractions pair to
//! the identity under iterated residues. The construction used here is the
//! classical one: the NBC bases of the arrangement under a chosen total
//! order. Correctness is enforced post hoc: the residue certificate is
//! recomputed and must equal the identity matrix exactly, otherwise
//! construction fails loudly.

use crate::numkernel::{ExactScalar, LinearForm, MatQ};
use crate::residue::{res_tau, MeroFunction, ResOptions};
use crate::{Error, Result};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A finite collection of nonzero covectors with a total order.
/// `order` lists the form indices from smallest to largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    rank: usize,
    forms: Vec<LinearForm>,
    order: Vec<usize>,
}

impl Arrangement {
    pub fn new(rank: usize, forms: Vec<LinearForm>, order: Option<Vec<usize>>) -> Result<Self> {
        if forms.iter().any(|f| f.rank() != rank) {
            return Err(Error::precondition("arrangement: mixed form ranks"));
        }
        if forms.iter().any(|f| f.is_zero()) {
            return Err(Error::precondition("arrangement: zero covector rejected"));
        }
        for i in 0..forms.len() {
            for j in 0..i {
                if forms[i] == forms[j] {
                    return Err(Error::precondition(format!(
                        "arrangement: duplicate covector at indices {j} and {i}"
                    )));
                }
            }
        }
        let order = match order {
            Some(ord) => {
                let mut seen = vec![false; forms.len()];
                if ord.len() != forms.len() {
                    return Err(Error::precondition("order must list every form once"));
                }
                for &i in &ord {
                    if i >= forms.len() || seen[i] {
                        return Err(Error::precondition("order is not a permutation"));
                    }
                    seen[i] = true;
                }
                ord
            }
            None => (0..forms.len()).collect(),
        };
        Ok(Arrangement { rank, forms, order })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &LinearForm {
        &self.forms[i]
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of form `i` in the total order (0 = smallest).
    pub fn order_position(&self, i: usize) -> usize {
        self.order.iter().position(|&j| j == i).expect("valid index")
    }

    /// Pairs of proportional (same hyperplane, different covector) members.
    /// They are permitted but flagged in reports.
    pub fn proportional_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.forms.len() {
            for j in 0..i {
                if self.forms[j].proportional_to(&self.forms[i]) {
                    out.push((j, i));
                }
            }
        }
        out
    }

    fn independent(&self, indices: &[usize]) -> bool {
        let m = MatQ::from_rows(
            indices
                .iter()
                .map(|&i| self.forms[i].coeffs().to_vec())
                .collect(),
        );
        m.rank() == indices.len()
    }

    /// All r-subsets of forms that span, each ordered increasingly by the
    /// arrangement order.
    pub fn enumerate_bases(&self) -> Vec<OrderedBasis> {
        let mut out = Vec::new();
        let n = self.forms.len();
        let r = self.rank;
        if r == 0 {
            return vec![OrderedBasis { indices: vec![] }];
        }
        if n < r {
            return out;
        }
        let mut combo: Vec<usize> = (0..r).collect();
        loop {
            // combo holds positions into the order; map to form indices
            let indices: Vec<usize> = combo.iter().map(|&p| self.order[p]).collect();
            if self.independent(&indices) {
                out.push(OrderedBasis { indices });
            }
            // next combination of positions
            let mut i = r;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                if combo[i] != i + n - r {
                    break;
                }
                if i == 0 {
                    done = true;
                    break;
                }
            }
            if done {
                return out;
            }
            combo[i] += 1;
            for j in i + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }

    /// All minimal linearly dependent subsets, as sorted index sets.
    pub fn circuits(&self) -> Vec<Vec<usize>> {
        let n = self.forms.len();
        let mut circuits: Vec<Vec<usize>> = Vec::new();
        // subsets by increasing size, up to rank+1
        for size in 1..=(self.rank + 1).min(n) {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                let subset: Vec<usize> = combo.clone();
                let minimal_dependent = !self.independent(&subset)
                    && !circuits.iter().any(|c| c.iter().all(|x| subset.contains(x)));
                if minimal_dependent {
                    circuits.push(subset);
                }
                let mut i = size;
                let mut done = false;
                loop {
                    if i == 0 {
                        done = true;
                        break;
                    }
                    i -= 1;
                    if combo[i] != i + n - size {
                        break;
                    }
                    if i == 0 {
                        done = true;
                        break;
                    }
                }
                if done {
                    break;
                }
                combo[i] += 1;
                for j in i + 1..size {
                    combo[j] = combo[j - 1] + 1;
                }
            }
        }
        circuits
    }

    /// Broken circuits: C minus its order-minimal element, for each circuit C.
    pub fn broken_circuits(&self) -> Vec<Vec<usize>> {
        self.circuits()
            .iter()
            .map(|c| {
                let min = c
                    .iter()
                    .min_by_key(|&&i| self.order_position(i))
                    .copied()
                    .expect("circuits are nonempty");
                c.iter().copied().filter(|&i| i != min).collect()
            })
            .collect()
    }

    /// The NBC bases: spanning r-subsets containing no broken circuit.
    pub fn nbc_bases(&self) -> Vec<OrderedBasis> {
        let broken = self.broken_circuits();
        self.enumerate_bases()
            .into_iter()
            .filter(|b| {
                !broken
                    .iter()
                    .any(|bc| bc.iter().all(|x| b.indices.contains(x)))
            })
            .collect()
    }

    /// The simple fraction 1/prod(alpha in sigma).
    pub fn simple_fraction(&self, sigma: &OrderedBasis) -> MeroFunction {
        MeroFunction::simple_fraction(
            self.rank,
            sigma.indices.iter().map(|&i| self.forms[i].clone()).collect(),
        )
        .expect("basis forms are nonzero")
    }

    pub fn basis_forms(&self, sigma: &OrderedBasis) -> Vec<LinearForm> {
        sigma.indices.iter().map(|&i| self.forms[i].clone()).collect()
    }

    /// The residue pairing matrix Res^tau(phi_sigma), rows tau, columns sigma.
    pub fn certificate(&self, members: &[OrderedBasis], opts: &ResOptions) -> Result<MatQ> {
        let n = members.len();
        let mut cert = MatQ::zeros(n, n);
        for (row, tau) in members.iter().enumerate() {
            let tau_forms = self.basis_forms(tau);
            for (col, sigma) in members.iter().enumerate() {
                cert[(row, col)] = res_tau(&tau_forms, &self.simple_fraction(sigma), opts)?;
            }
        }
        Ok(cert)
    }

    /// The diagonal basis induced by the stored total order: the NBC bases,
    /// validated by the residue certificate (which must be the identity).
    pub fn diagonal_basis(&self, opts: &ResOptions) -> Result<DiagonalBasis> {
        if self.rank > 0 {
            let span = MatQ::from_rows(self.forms.iter().map(|f| f.coeffs().to_vec()).collect());
            if span.rank() < self.rank {
                return Err(Error::precondition(
                    "arrangement does not span the ambient space",
                ));
            }
        }
        let members = self.nbc_bases();
        let certificate = self.certificate(&members, opts)?;
        if !certificate.is_identity() {
            return Err(Error::computation(format!(
                "diagonal basis certificate is not the identity: {certificate:?}"
            )));
        }
        Ok(DiagonalBasis {
            members,
            certificate,
        })
    }

    /// A random rational point off all hyperplanes, with small coordinates.
    pub fn random_regular_rational_point(&self, rng: &mut ChaCha8Rng) -> Vec<ExactScalar> {
        loop {
            let point: Vec<ExactScalar> = (0..self.rank)
                .map(|_| {
                    let num = rng.gen_range(-20i64..=20);
                    let den = rng.gen_range(1i64..=7);
                    crate::numkernel::rat(num, den)
                })
                .collect();
            if self.forms.iter().all(|f| !f.apply(&point).is_zero()) {
                return point;
            }
        }
    }

    /// Check the spanning property of a diagonal basis: for every basis
    /// sigma, phi_sigma - sum_tau Res^tau(phi_sigma) phi_tau vanishes exactly
    /// at `npoints` seeded random regular rational points.
    pub fn spanning_identity_check(
        &self,
        ob: &DiagonalBasis,
        seed: u64,
        npoints: usize,
        opts: &ResOptions,
    ) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sigma in self.enumerate_bases() {
            let phi = self.simple_fraction(&sigma);
            let coeffs: Vec<ExactScalar> = ob
                .members
                .iter()
                .map(|tau| res_tau(&self.basis_forms(tau), &phi, opts))
                .collect::<Result<_>>()?;
            for p in 0..npoints {
                let point = self.random_regular_rational_point(&mut rng);
                let lhs = phi.eval_rational(&point)?;
                let mut rhs = ExactScalar::zero();
                for (c, tau) in coeffs.iter().zip(&ob.members) {
                    if !c.is_zero() {
                        rhs += c * self.simple_fraction(tau).eval_rational(&point)?;
                    }
                }
                if lhs != rhs {
                    return Err(Error::Verification(format!(
                        "spanning identity fails for sigma {:?} at point #{p}",
                        sigma.indices
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A sequence of r distinct form indices whose forms are linearly
/// independent; the sequence order is the residue order (last = innermost).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedBasis {
    pub indices: Vec<usize>,
}

impl OrderedBasis {
    pub fn new(indices: Vec<usize>) -> Self {
        OrderedBasis { indices }
    }
}

/// A validated diagonal basis: members plus the identity certificate.
#[derive(Clone, Debug)]
pub struct DiagonalBasis {
    pub members: Vec<OrderedBasis>,
    pub certificate: MatQ,
}

/// Extend a diagonal basis over a rank r-1 quotient space to rank r by
/// adjoining `e1_hat` as the last (innermost) element of every member.
/// Quotient forms are lifted by appending a zero coefficient. Returns the
/// extended arrangement (quotient forms first, then e1_hat) and its
/// recomputed, re-validated diagonal basis.
pub fn extend_diagonal_basis(
    quotient_arr: &Arrangement,
    quotient_ob: &DiagonalBasis,
    e1_hat: &LinearForm,
    opts: &ResOptions,
) -> Result<(Arrangement, DiagonalBasis)> {
    let rank = quotient_arr.rank() + 1;
    if e1_hat.rank() != rank {
        return Err(Error::precondition(format!(
            "e1_hat must have rank {rank} (quotient rank + 1)"
        )));
    }
    let mut forms: Vec<LinearForm> = quotient_arr
        .forms()
        .iter()
        .map(|f| {
            let mut coeffs = f.coeffs().to_vec();
            coeffs.push(ExactScalar::zero());
            LinearForm::new(coeffs)
        })
        .collect();
    let e1_index = forms.len();
    forms.push(e1_hat.clone());
    let arr = Arrangement::new(rank, forms, None)?;

    let members: Vec<OrderedBasis> = quotient_ob
        .members
        .iter()
        .map(|m| {
            let mut indices = m.indices.clone();
            indices.push(e1_index);
            OrderedBasis { indices }
        })
        .collect();
    for m in &members {
        if !arr.independent(&m.indices) {
            return Err(Error::precondition(
                "extension is not a basis: e1_hat is degenerate for some member",
            ));
        }
    }
    let certificate = arr.certificate(&members, opts)?;
    if !certificate.is_identity() {
        return Err(Error::computation(
            "extended diagonal basis certificate is not the identity",
        ));
    }
    Ok((
        arr,
        DiagonalBasis {
            members,
            certificate,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rat_int;

    fn lf(coeffs: &[i64]) -> LinearForm {
        LinearForm::from_i64(coeffs)
    }

    /// Positive roots of su(3) as covectors: gamma12 = Y1, gamma23 = Y2,
    /// gamma13 = Y1 + Y2, in the default order.
    fn su3_roots() -> Arrangement {
        Arrangement::new(2, vec![lf(&[1, 0]), lf(&[0, 1]), lf(&[1, 1])], None).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Arrangement::new(1, vec![LinearForm::zero(1)], None).is_err());
        assert!(Arrangement::new(1, vec![lf(&[1]), lf(&[1])], None).is_err());
        // proportional forms are permitted but flagged
        let arr = Arrangement::new(1, vec![lf(&[1]), lf(&[2])], None).unwrap();
        assert_eq!(arr.proportional_pairs(), vec![(0, 1)]);
    }

    #[test]
    fn su2_single_basis() {
        let arr = Arrangement::new(1, vec![lf(&[1])], None).unwrap();
        assert_eq!(arr.enumerate_bases().len(), 1);
    }

    #[test]
    fn su3_bases_and_circuits() {
        let arr = su3_roots();
        let bases = arr.enumerate_bases();
        assert_eq!(bases.len(), 3);
        assert_eq!(arr.circuits(), vec![vec![0, 1, 2]]);
        assert_eq!(arr.broken_circuits(), vec![vec![1, 2]]);
    }

    #[test]
    fn concurrent_lines_with_scaled_duplicate() {
        // three rank-2 covectors with one repeated direction scaled by 2:
        // the proportional pair is excluded from the bases
        let arr =
            Arrangement::new(2, vec![lf(&[1, 0]), lf(&[2, 0]), lf(&[0, 1])], None).unwrap();
        let bases = arr.enumerate_bases();
        let sets: Vec<Vec<usize>> = bases.iter().map(|b| b.indices.clone()).collect();
        assert!(sets.contains(&vec![0, 2]));
        assert!(sets.contains(&vec![1, 2]));
        assert!(!sets.contains(&vec![0, 1]));
        // the proportional pair is the rank-1-style circuit
        assert_eq!(arr.circuits(), vec![vec![0, 1]]);
    }

    #[test]
    fn independent_set_has_no_circuits() {
        let arr = Arrangement::new(2, vec![lf(&[1, 0]), lf(&[0, 1])], None).unwrap();
        assert!(arr.circuits().is_empty());
    }

    #[test]
    fn su3_diagonal_basis() {
        let arr = su3_roots();
        let ob = arr.diagonal_basis(&ResOptions::default()).unwrap();
        let sets: Vec<Vec<usize>> = ob.members.iter().map(|m| m.indices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1], vec![0, 2]]);
        assert!(ob.certificate.is_identity());
    }

    #[test]
    fn su3_member_count_is_order_independent() {
        // all 6 total orders give 2 members
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for perm in perms {
            let arr = Arrangement::new(
                2,
                vec![lf(&[1, 0]), lf(&[0, 1]), lf(&[1, 1])],
                Some(perm.to_vec()),
            )
            .unwrap();
            let ob = arr.diagonal_basis(&ResOptions::default()).unwrap();
            assert_eq!(ob.members.len(), 2, "order {perm:?}");
        }
    }

    #[test]
    fn rank_one_diagonal_basis() {
        let arr = Arrangement::new(1, vec![lf(&[1])], None).unwrap();
        let ob = arr.diagonal_basis(&ResOptions::default()).unwrap();
        assert_eq!(ob.members.len(), 1);
        assert_eq!(ob.certificate[(0, 0)], rat_int(1));
    }

    #[test]
    fn product_arrangement_diagonal_basis() {
        // su2 x su2: independent forms, no circuits, single member
        let arr = Arrangement::new(2, vec![lf(&[1, 0]), lf(&[0, 1])], None).unwrap();
        let ob = arr.diagonal_basis(&ResOptions::default()).unwrap();
        assert_eq!(ob.members.len(), 1);
        assert_eq!(ob.members[0].indices, vec![0, 1]);
    }

    #[test]
    fn su3_simple_fractions() {
        let arr = su3_roots();
        let phi = arr.simple_fraction(&OrderedBasis::new(vec![0, 1]));
        assert_eq!(
            phi.eval_rational(&[rat_int(1), rat_int(2)]).unwrap(),
            crate::numkernel::rat(1, 2)
        );
    }

    #[test]
    fn su3_hand_partial_fractions() {
        // phi_(gamma23,gamma13) = 1*phi_(gamma12,gamma23) - 1*phi_(gamma12,gamma13)
        let arr = su3_roots();
        let opts = ResOptions::default();
        let phi = arr.simple_fraction(&OrderedBasis::new(vec![1, 2]));
        let c1 = res_tau(&arr.basis_forms(&OrderedBasis::new(vec![0, 1])), &phi, &opts).unwrap();
        let c2 = res_tau(&arr.basis_forms(&OrderedBasis::new(vec![0, 2])), &phi, &opts).unwrap();
        assert_eq!(c1, rat_int(1));
        assert_eq!(c2, rat_int(-1));
    }

    #[test]
    fn su3_spanning_identity() {
        let arr = su3_roots();
        let opts = ResOptions::default();
        let ob = arr.diagonal_basis(&opts).unwrap();
        arr.spanning_identity_check(&ob, 7, 20, &opts).unwrap();
    }

    #[test]
    fn extend_rank_one() {
        // OB' = {(alpha')} rank 1, e1_hat independent -> {(alpha', e1)}
        let quotient = Arrangement::new(1, vec![lf(&[1])], None).unwrap();
        let opts = ResOptions::default();
        let qob = quotient.diagonal_basis(&opts).unwrap();
        let (arr, ob) = extend_diagonal_basis(&quotient, &qob, &lf(&[0, 1]), &opts).unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(ob.members.len(), 1);
        assert_eq!(ob.members[0].indices, vec![0, 1]);
        assert!(ob.certificate.is_identity());
    }

    #[test]
    fn extend_su3_quotient() {
        let quotient = su3_roots();
        let opts = ResOptions::default();
        let qob = quotient.diagonal_basis(&opts).unwrap();
        // e1_hat involving all three coordinates still certifies
        let (_, ob) = extend_diagonal_basis(&quotient, &qob, &lf(&[1, -2, 3]), &opts).unwrap();
        assert_eq!(ob.members.len(), 2);
        assert!(ob.certificate.is_identity());
    }

    #[test]
    fn extend_empty_quotient() {
        // empty quotient arrangement (rank 1 total) -> {(e1_hat)}
        let quotient = Arrangement::new(0, vec![], None).unwrap();
        let opts = ResOptions::default();
        let qob = quotient.diagonal_basis(&opts).unwrap();
        assert_eq!(qob.members.len(), 1);
        assert!(qob.members[0].indices.is_empty());
        let (arr, ob) = extend_diagonal_basis(&quotient, &qob, &lf(&[2]), &opts).unwrap();
        assert_eq!(arr.len(), 1);
        assert_eq!(ob.members[0].indices, vec![0]);
        assert!(ob.certificate.is_identity());
    }
}
