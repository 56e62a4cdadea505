use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational::{int, lattice_membership};
use crate::lattice::{FiniteAbelianGroup, GroupElement, RationalVector};
use crate::rootdata::BasedRootDatum;
use crate::weyl::affine::{AffineMap, AffineMapJson};
use crate::weyl::alcove::Alcove;
use crate::weyl::group::{walk_weyl, WeylElement};

/// Bound on `|X/Q|` when listing its elements.
const QUOTIENT_BOUND: usize = 1 << 16;

/// The stabilizer `Ω` of the alcove in `W ⋉ X`, with its identification
/// `ι: Ω → X/Q`.
#[derive(Clone, Debug)]
pub struct OmegaGroup {
    pub alcove: Alcove,
    /// Sorted by `iota_images`; element 0 is the identity.
    pub elements: Vec<AffineMap>,
    /// `table[i][j]` is the index of `elements[i] ∘ elements[j]`.
    pub table: Vec<Vec<usize>>,
    pub iota_images: Vec<GroupElement>,
    /// `X/Q` (torsion of the cokernel of the root lattice).
    pub quotient: FiniteAbelianGroup,
}

impl OmegaGroup {
    fn assemble(alcove: Alcove, elements: Vec<AffineMap>) -> Result<Self> {
        let quotient = alcove.datum().fundamental_group().torsion;
        let mut tagged: Vec<(GroupElement, AffineMap)> = elements
            .into_iter()
            .map(|e| (project_translation(&quotient, &e), e))
            .collect();
        tagged.sort_by(|a, b| a.0.cmp(&b.0));
        let (iota_images, elements): (Vec<_>, Vec<_>) = tagged.into_iter().unzip();
        let key = |m: &AffineMap| (m.linear.matrix.clone(), m.translation.clone());
        let index: HashMap<_, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (key(e), i))
            .collect();
        if index.len() != elements.len() {
            return Err(Error::InvalidDatum("repeated element of Omega".into()));
        }
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                table[i][j] = *index.get(&key(&a.compose(b))).ok_or_else(|| {
                    Error::InvalidDatum("Omega is not closed under composition".into())
                })?;
            }
        }
        Ok(Self {
            alcove,
            elements,
            table,
            iota_images,
            quotient,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn c0(&self) -> &RationalVector {
        self.alcove.barycenter()
    }

    pub fn identity_index(&self) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.linear.is_identity() && e.translation.is_zero())
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        let id = self.identity_index().expect("identity present");
        (0..self.order())
            .find(|&j| self.table[i][j] == id)
            .expect("group has inverses")
    }

    /// Invariant factors of `Ω`, read off from its `ι`-image.
    pub fn iso_type(&self) -> Vec<BigInt> {
        self.quotient.subgroup_type(&self.iota_images)
    }

    /// `ι(w̃) = (w⁻¹ - 1) c0 + Q`.
    pub fn iota_barycenter(&self, i: usize) -> Result<GroupElement> {
        let c0 = self.c0();
        let winv = self.elements[i].linear.inverse();
        let v = &RationalVector::apply(&winv.matrix, c0) - c0;
        let coords = v
            .to_integers()
            .ok_or_else(|| Error::InvalidDatum("(w^-1 - 1) c0 is not in X".into()))?;
        Ok(self.quotient.project(&coords))
    }

    /// `ι` through `W̃ → W̃ / W̃° = X / Q`: the class of the translation part.
    pub fn iota_coset(&self, i: usize) -> GroupElement {
        project_translation(&self.quotient, &self.elements[i])
    }

    /// Element whose `ι`-image is `class`.
    pub fn element_for_class(&self, class: &[BigInt]) -> Option<usize> {
        let c = self.quotient.reduce(class.to_vec());
        self.iota_images.iter().position(|e| *e == c)
    }

    /// Checks the group axioms, the vertex permutation, that both formulas for
    /// `ι` agree, and that `ι` is a bijective homomorphism onto `X/Q`.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidDatum(m.to_string()));
        if self.identity_index().is_none() {
            return fail("identity missing");
        }
        let verts = self.alcove.vertices();
        for e in &self.elements {
            let mut hit = vec![false; verts.len()];
            for v in &verts {
                let img = e.act(v)?;
                match verts.iter().position(|u| *u == img) {
                    Some(k) if !hit[k] => hit[k] = true,
                    _ => return fail("element does not permute the alcove vertices"),
                }
            }
            if e.act(self.c0())? != *self.c0() {
                return fail("element does not fix c0");
            }
        }
        for i in 0..self.order() {
            if self.iota_barycenter(i)? != self.iota_coset(i) {
                return fail("the two formulas for iota disagree");
            }
            for j in 0..self.order() {
                let lhs = &self.iota_images[self.table[i][j]];
                let rhs = self.quotient.add(&self.iota_images[i], &self.iota_images[j]);
                if *lhs != rhs {
                    return fail("iota is not a homomorphism");
                }
            }
        }
        let order = self.quotient.order().to_usize().unwrap_or(usize::MAX);
        let mut images = self.iota_images.clone();
        images.dedup();
        if images.len() != self.order() || self.order() != order {
            return fail("iota is not bijective");
        }
        Ok(())
    }

    /// Element-wise agreement with another construction of the same group.
    pub fn agrees_with(&self, other: &OmegaGroup) -> bool {
        self.order() == other.order()
            && self
                .elements
                .iter()
                .zip(&other.elements)
                .all(|(a, b)| a.same_map(b))
            && self.iota_images == other.iota_images
    }

    pub fn to_json(&self) -> OmegaJson {
        OmegaJson {
            order: self.order(),
            factors: self.iso_type().iter().map(|f| f.to_u64().unwrap()).collect(),
            c0: self.c0().clone(),
            elements: self.elements.iter().map(AffineMap::to_json).collect(),
            table: self.table.clone(),
            iota_images: self
                .iota_images
                .iter()
                .map(|e| e.iter().map(|x| x.to_u64().unwrap()).collect())
                .collect(),
            quotient_factors: self.quotient.factors_u64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaJson {
    pub order: usize,
    pub factors: Vec<u64>,
    pub c0: RationalVector,
    pub elements: Vec<AffineMapJson>,
    pub table: Vec<Vec<usize>>,
    /// Residue tuples in `X/Q` with the moduli in `quotient_factors`.
    pub iota_images: Vec<Vec<u64>>,
    pub quotient_factors: Vec<u64>,
}

fn project_translation(quotient: &FiniteAbelianGroup, e: &AffineMap) -> GroupElement {
    let t = e
        .translation
        .to_integers()
        .expect("elements of Omega have integral translation");
    quotient.project(&t)
}

/// `Ω = { x ↦ w(x - c0) + c0 : (1 - w) c0 ∈ X }`, scanning `W` through the
/// orbit of the integral vector `D·c0`.
pub fn omega_by_barycenter(datum: &BasedRootDatum, cap: usize) -> Result<OmegaGroup> {
    let alcove = Alcove::new(datum)?;
    let c0 = alcove.barycenter().clone();
    let den = c0.common_denominator();
    let d = den
        .to_i64()
        .ok_or_else(|| Error::InvalidDatum("barycenter denominator overflow".into()))?;
    let rho: Vec<i64> = c0
        .scale(&int(den.clone()))
        .to_integers()
        .expect("scaled to integers")
        .iter()
        .map(|x| x.to_i64().unwrap())
        .collect();
    // (1 - w) c0 ∈ X  iff  rho - w rho ≡ 0 mod D.
    let mut words = Vec::new();
    walk_weyl(datum, &rho, cap, |word, wrho| {
        if rho.iter().zip(wrho).all(|(a, b)| (a - b) % d == 0) {
            words.push(word.to_vec());
        }
    })?;
    let basis: Vec<RationalVector> = (0..datum.rank())
        .map(|i| {
            let mut e = vec![0; datum.rank()];
            e[i] = 1;
            RationalVector::from_ints(&e)
        })
        .collect();
    let mut elements = Vec::with_capacity(words.len());
    for word in words {
        let w = WeylElement::from_word(datum, &word);
        let m = AffineMap::fixing(w, &c0);
        if lattice_membership(&m.translation, &basis)?.is_none() {
            return Err(Error::InvalidDatum("translation is not in X".into()));
        }
        elements.push(m);
    }
    OmegaGroup::assemble(alcove, elements)
}

/// `Ω` from the cosets of `W̃°`: for each class of `X/Q`, translate a generic
/// interior point by a representative and reduce it back to the alcove.
pub fn omega_by_cosets(datum: &BasedRootDatum) -> Result<OmegaGroup> {
    let alcove = Alcove::new(datum)?;
    let quotient = datum.fundamental_group().torsion;
    let p = alcove.centroid();
    let mut elements = Vec::new();
    for class in quotient.elements(QUOTIENT_BOUND)? {
        let x = RationalVector::from_bigints(&quotient.lift(&class));
        let tx = AffineMap::translation(x);
        let (p0, g) = alcove.reduce(&tx.act(&p)?)?;
        if !alcove.contains_interior(&p0) {
            return Err(Error::InvalidDatum("reduced point is on a wall".into()));
        }
        elements.push(g.compose(&tx).normalize_word(datum));
    }
    OmegaGroup::assemble(alcove, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_datum, Isogeny};
    use crate::weyl::group::DEFAULT_WEYL_CAP;

    fn sc(label: &str) -> BasedRootDatum {
        build_datum(&label.parse().unwrap(), Isogeny::SimplyConnected).unwrap()
    }

    fn factors(o: &OmegaGroup) -> Vec<u64> {
        o.iso_type().iter().map(|f| f.to_u64().unwrap()).collect()
    }

    #[test]
    fn a1_has_order_two() {
        let o = omega_by_barycenter(&sc("A1"), DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(o.order(), 2);
        o.verify().unwrap();
    }

    #[test]
    fn adjoint_is_trivial() {
        let d = build_datum(&"A2".parse().unwrap(), Isogeny::Adjoint).unwrap();
        let o = omega_by_barycenter(&d, DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(o.order(), 1);
        assert_eq!(omega_by_cosets(&d).unwrap().order(), 1);
    }

    #[test]
    fn e6_has_order_three() {
        let o = omega_by_barycenter(&sc("E6"), DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(factors(&o), vec![3]);
        o.verify().unwrap();
    }

    #[test]
    fn a3_is_cyclic_of_order_four() {
        let o = omega_by_cosets(&sc("A3")).unwrap();
        assert_eq!(factors(&o), vec![4]);
        o.verify().unwrap();
    }

    #[test]
    fn d4_is_klein_four() {
        let o = omega_by_cosets(&sc("D4")).unwrap();
        assert_eq!(factors(&o), vec![2, 2]);
        o.verify().unwrap();
    }

    #[test]
    fn constructions_agree() {
        for label in ["A2", "A4", "B3", "C3", "D5", "G2", "F4"] {
            let d = sc(label);
            let a = omega_by_barycenter(&d, DEFAULT_WEYL_CAP).unwrap();
            let b = omega_by_cosets(&d).unwrap();
            a.verify().unwrap();
            b.verify().unwrap();
            assert!(a.agrees_with(&b), "{label}");
        }
    }

    #[test]
    fn reducible_datum_is_a_product() {
        let d = BasedRootDatum::direct_sum(&[sc("A1"), sc("A2")]);
        let a = omega_by_barycenter(&d, DEFAULT_WEYL_CAP).unwrap();
        let b = omega_by_cosets(&d).unwrap();
        a.verify().unwrap();
        assert!(a.agrees_with(&b));
        assert_eq!(factors(&a), vec![6]);
    }

    #[test]
    fn json_lists_residues() {
        let o = omega_by_cosets(&sc("A3")).unwrap();
        let j = o.to_json();
        assert_eq!(j.order, 4);
        assert_eq!(j.factors, vec![4]);
        assert_eq!(j.iota_images, vec![vec![0], vec![1], vec![2], vec![3]]);
    }
}
