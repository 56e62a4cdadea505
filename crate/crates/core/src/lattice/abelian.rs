//! Finitely generated abelian groups presented as lattice quotients.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::smith::smith_normal_form;
use crate::lattice::IntMatrix;

/// Default bound on `|G|` for subgroup enumeration.
pub const DEFAULT_SUBGROUP_BOUND: usize = 64;

/// Element of a [`FiniteAbelianGroup`]: residues, one per invariant factor.
pub type GroupElement = Vec<BigInt>;

/// `⊕ Z/d_i` with `1 < d_1 | d_2 | ...`, together with a surjection from an
/// ambient lattice `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
    /// `k x n`; row `i` is reduced mod `invariant_factors[i]`.
    projection: IntMatrix,
    /// `n x k`; column `i` is a lattice vector mapping to the `i`-th generator.
    lift: IntMatrix,
}

impl FiniteAbelianGroup {
    pub fn trivial(ambient: usize) -> Self {
        Self {
            invariant_factors: Vec::new(),
            projection: IntMatrix::zeros(0, ambient),
            lift: IntMatrix::zeros(ambient, 0),
        }
    }

    /// Abstract `⊕ Z/d_i` with the identity presentation on `Z^k`. The factors
    /// must already form a divisibility chain of integers > 1.
    pub fn from_factors(factors: &[i64]) -> Self {
        let k = factors.len();
        assert!(factors.iter().all(|&d| d > 1), "factors must exceed 1");
        assert!(
            factors.windows(2).all(|w| w[1] % w[0] == 0),
            "factors must form a divisibility chain"
        );
        Self {
            invariant_factors: factors.iter().map(|&d| BigInt::from(d)).collect(),
            projection: IntMatrix::identity(k),
            lift: IntMatrix::identity(k),
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Invariant factors as machine integers (all groups in practice).
    pub fn factors_u64(&self) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .collect()
    }

    pub fn ambient_rank(&self) -> usize {
        self.projection.cols()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        vec![BigInt::zero(); self.invariant_factors.len()]
    }

    pub fn reduce(&self, mut e: GroupElement) -> GroupElement {
        for (x, d) in e.iter_mut().zip(&self.invariant_factors) {
            *x = x.mod_floor(d);
        }
        e
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> GroupElement {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &[BigInt]) -> GroupElement {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &[BigInt], k: &BigInt) -> GroupElement {
        self.reduce(a.iter().map(|x| x * k).collect())
    }

    /// Class of an ambient lattice vector.
    pub fn project(&self, x: &[BigInt]) -> GroupElement {
        self.reduce(self.projection.mul_vec(x))
    }

    pub fn project_i64(&self, x: &[i64]) -> GroupElement {
        self.reduce(self.projection.mul_vec_i64(x))
    }

    /// A lattice representative of `e`.
    pub fn lift(&self, e: &[BigInt]) -> Vec<BigInt> {
        self.lift.mul_vec(e)
    }

    pub fn projection_matrix(&self) -> &IntMatrix {
        &self.projection
    }

    pub fn element_order(&self, e: &[BigInt]) -> BigInt {
        e.iter()
            .zip(&self.invariant_factors)
            .fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / x.gcd(d))))
    }

    /// All elements in lexicographic residue order.
    pub fn elements(&self, bound: usize) -> Result<Vec<GroupElement>> {
        let order = self.order();
        if order > BigInt::from(bound) {
            return Err(Error::TooLarge {
                order: order.to_string(),
                bound,
            });
        }
        let mut out = vec![Vec::new()];
        for d in &self.invariant_factors {
            let d = d.to_u64().unwrap();
            out = out
                .into_iter()
                .flat_map(|prefix: GroupElement| {
                    (0..d).map(move |r| {
                        let mut e = prefix.clone();
                        e.push(BigInt::from(r));
                        e
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Elements of the subgroup generated by `gens`.
    pub fn span(&self, gens: &[GroupElement]) -> BTreeSet<GroupElement> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.zero()]);
        seen.insert(self.zero());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Invariant factors of the subgroup generated by `gens`.
    ///
    /// With `G = Z^k / D Z^k`, the subgroup is `Z^m / K` where `K` is the
    /// kernel of `c ↦ Σ c_j g_j mod D`; `K` is read off the Smith form of
    /// `[g_1 .. g_m | D]`.
    pub fn subgroup_type(&self, gens: &[GroupElement]) -> Vec<BigInt> {
        let k = self.invariant_factors.len();
        let m = gens.len();
        if m == 0 || k == 0 {
            return Vec::new();
        }
        let g = IntMatrix::from_columns(k, gens);
        let mut dmat = IntMatrix::zeros(k, k);
        for (i, d) in self.invariant_factors.iter().enumerate() {
            dmat[(i, i)] = d.clone();
        }
        let stacked = g.hstack(&dmat);
        let snf = smith_normal_form(&stacked);
        let r = snf.rank();
        let kernel_cols: Vec<usize> = (r..m + k).collect();
        let kernel = snf.v.select_columns(&kernel_cols);
        let first_m: Vec<usize> = (0..m).collect();
        let relations = kernel.select_rows(&first_m);
        let coker = cokernel(&relations);
        debug_assert_eq!(coker.free_rank, 0);
        coker.torsion.invariant_factors
    }

    /// Every subgroup, each given by a generating set, ordered by size and then
    /// by element list.
    pub fn enumerate_subgroups(&self, bound: usize) -> Result<Vec<Subgroup>> {
        let all = self.elements(bound)?;
        let trivial: BTreeSet<GroupElement> = [self.zero()].into();
        let mut seen: HashSet<Vec<GroupElement>> = HashSet::new();
        let mut found = vec![Subgroup {
            generators: Vec::new(),
            elements: trivial.iter().cloned().collect(),
        }];
        seen.insert(found[0].elements.clone());
        let mut frontier = 0;
        while frontier < found.len() {
            let base = found[frontier].clone();
            frontier += 1;
            let members: BTreeSet<_> = base.elements.iter().cloned().collect();
            for x in &all {
                if members.contains(x) {
                    continue;
                }
                let mut gens = base.generators.clone();
                gens.push(x.clone());
                let span: Vec<_> = self.span(&gens).into_iter().collect();
                if seen.insert(span.clone()) {
                    found.push(Subgroup {
                        generators: gens,
                        elements: span,
                    });
                }
            }
        }
        found.sort_by(|a, b| {
            a.elements
                .len()
                .cmp(&b.elements.len())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        Ok(found)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<GroupElement>,
    /// Sorted.
    pub elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }
}

/// `Z^n / L` for a sublattice `L`: torsion part plus free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub torsion: FiniteAbelianGroup,
    pub free_rank: usize,
    /// `free_rank x n`; coordinates of the image in the free quotient
    /// `(Z^n / L) / torsion`.
    pub free_projection: IntMatrix,
    /// `n x free_rank`; a section of `free_projection`.
    pub free_lift: IntMatrix,
}

impl Cokernel {
    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

/// Quotient of `Z^rows` by the column span of `a`.
pub fn cokernel(a: &IntMatrix) -> Cokernel {
    let n = a.rows();
    let snf = smith_normal_form(a);
    let u_inv = snf
        .u
        .unimodular_inverse()
        .expect("Smith transform is unimodular");
    let mut torsion_rows = Vec::new();
    let mut factors = Vec::new();
    let mut free_rows = Vec::new();
    for i in 0..n {
        let d = snf.factors.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_rows.push(i);
        } else if !d.is_one() {
            torsion_rows.push(i);
            factors.push(d);
        }
    }
    Cokernel {
        torsion: FiniteAbelianGroup {
            invariant_factors: factors,
            projection: snf.u.select_rows(&torsion_rows),
            lift: u_inv.select_columns(&torsion_rows),
        },
        free_rank: free_rows.len(),
        free_projection: snf.u.select_rows(&free_rows),
        free_lift: u_inv.select_columns(&free_rows),
    }
}

/// `L_g = L / (g - 1) L` for an automorphism `g` of `Z^n`.
pub fn coinvariants(g: &IntMatrix) -> Result<Cokernel> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch {
            expected: g.rows(),
            found: g.cols(),
        });
    }
    let det = g.det();
    if !num_traits::Signed::abs(&det).is_one() {
        return Err(Error::NonUnimodular {
            det: det.to_string(),
        });
    }
    Ok(cokernel(&(g - &IntMatrix::identity(g.rows()))))
}

/// Torsion subgroup of a finitely generated abelian group.
pub fn torsion_part(g: &Cokernel) -> FiniteAbelianGroup {
    g.torsion.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn fac(g: &FiniteAbelianGroup) -> Vec<u64> {
        g.factors_u64()
    }

    #[test]
    fn cokernel_of_twice_identity() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let c = cokernel(&a);
        assert_eq!(fac(&c.torsion), vec![2, 2]);
        assert_eq!(c.free_rank, 0);
    }

    #[test]
    fn cokernel_of_a2_root_lattice() {
        // Simple roots of A2 in the fundamental weight basis.
        let a = IntMatrix::from_columns(2, &[vec![2, -1], vec![-1, 2]]);
        let c = cokernel(&a);
        assert_eq!(fac(&c.torsion), vec![3]);
        // alpha_1 maps to zero, the first fundamental weight generates.
        assert_eq!(c.torsion.project_i64(&[2, -1]), vec![b(0)]);
        assert_ne!(c.torsion.project_i64(&[1, 0]), vec![b(0)]);
    }

    #[test]
    fn cokernel_without_columns() {
        let c = cokernel(&IntMatrix::zeros(1, 0));
        assert_eq!(c.free_rank, 1);
        assert!(c.torsion.is_trivial());
    }

    #[test]
    fn lift_then_project_is_identity() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let c = cokernel(&a);
        for e in c.torsion.elements(1000).unwrap() {
            assert_eq!(c.torsion.project(&c.torsion.lift(&e)), e);
        }
    }

    #[test]
    fn coinvariants_examples() {
        let id = IntMatrix::identity(2);
        let c = coinvariants(&id).unwrap();
        assert_eq!((c.free_rank, c.torsion.is_trivial()), (2, true));

        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let c = coinvariants(&swap).unwrap();
        assert_eq!((c.free_rank, c.torsion.is_trivial()), (1, true));

        let neg = IntMatrix::from_rows(&[vec![-1]]);
        let c = coinvariants(&neg).unwrap();
        assert_eq!(fac(&c.torsion), vec![2]);
        assert_eq!(c.free_rank, 0);

        let bad = IntMatrix::from_rows(&[vec![2]]);
        assert!(matches!(coinvariants(&bad), Err(Error::NonUnimodular { .. })));
    }

    #[test]
    fn a3_weight_lattice_involution_coinvariants() {
        // Diagram flip of A3 on the fundamental weight basis swaps w1 and w3.
        // (sigma - 1) has the single nonzero column pattern (-1,0,1), so the
        // quotient is Z^2 with no torsion.
        let sigma = IntMatrix::from_rows(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        let c = coinvariants(&sigma).unwrap();
        assert_eq!(c.free_rank, 2);
        assert!(torsion_part(&c).is_trivial());
    }

    #[test]
    fn torsion_of_mixed_group() {
        let a = IntMatrix::from_rows(&[vec![2], vec![0]]);
        let c = cokernel(&a);
        assert_eq!(c.free_rank, 1);
        assert_eq!(fac(&torsion_part(&c)), vec![2]);
    }

    #[test]
    fn subgroup_counts() {
        let trivial = FiniteAbelianGroup::from_factors(&[]);
        assert_eq!(trivial.enumerate_subgroups(64).unwrap().len(), 1);
        let z4 = FiniteAbelianGroup::from_factors(&[4]);
        let subs = z4.enumerate_subgroups(64).unwrap();
        assert_eq!(
            subs.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![1, 2, 4]
        );
        let v4 = FiniteAbelianGroup::from_factors(&[2, 2]);
        assert_eq!(v4.enumerate_subgroups(64).unwrap().len(), 5);
        let big = FiniteAbelianGroup::from_factors(&[65]);
        assert!(matches!(
            big.enumerate_subgroups(64),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn subgroup_types() {
        let g = FiniteAbelianGroup::from_factors(&[2, 4]);
        assert_eq!(g.subgroup_type(&[vec![b(0), b(2)]]), vec![b(2)]);
        assert_eq!(g.subgroup_type(&[vec![b(1), b(1)]]), vec![b(4)]);
        assert_eq!(
            g.subgroup_type(&[vec![b(1), b(0)], vec![b(0), b(2)]]),
            vec![b(2), b(2)]
        );
        assert_eq!(g.subgroup_type(&[g.zero()]), Vec::<BigInt>::new());
    }
}
