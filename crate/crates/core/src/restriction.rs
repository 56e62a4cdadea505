//! Folding a based root datum along a finite group of automorphisms.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational::{solve_unique, to_rational_rows, Rational};
use crate::lattice::{cokernel, smith_normal_form, IntMatrix};
use crate::rootdata::{
    build_datum, diagram_automorphism, BasedRootDatum, CartanType, DatumAutomorphism, DatumJson,
    IntVector, Isogeny,
};
use crate::weyl::{generate_weyl, omega_by_cosets, OmegaGroup};

/// Largest automorphism group accepted by [`restrict_datum`].
pub const GROUP_ORDER_CAP: usize = 6;

/// The folded datum together with the maps relating it to the original.
#[derive(Clone, Debug)]
pub struct RestrictionResult {
    pub folded: BasedRootDatum,
    /// Matrices on `X` of every element of the group generated by the input.
    pub group: Vec<IntMatrix>,
    /// `r x n`: `X → X̲ = X_θ / torsion`.
    pub projection: IntMatrix,
    /// `n x r`: basis of `X̌^θ`, dual to the projection under the pairing.
    pub inclusion: IntMatrix,
    /// `fibers[k]`: indices of the roots of `Ψ` restricting to folded root `k`.
    pub fibers: Vec<Vec<usize>>,
    /// `doubled[k]`: whether twice folded root `k` is a root.
    pub doubled: Vec<bool>,
}

impl RestrictionResult {
    pub fn project(&self, x: &[i64]) -> IntVector {
        to_i64(&self.projection.mul_vec_i64(x))
    }

    pub fn include(&self, y: &[i64]) -> IntVector {
        to_i64(&self.inclusion.mul_vec_i64(y))
    }

    pub fn to_json(&self) -> Result<RestrictionJson> {
        let rows = |m: &IntMatrix| {
            m.to_i64_rows()
                .ok_or_else(|| Error::InvalidDatum("matrix entry overflow".into()))
        };
        Ok(RestrictionJson {
            folded: self.folded.to_json(),
            folded_type: self
                .folded
                .identify_type()
                .map(|ts| ts.iter().map(ToString::to_string).collect())
                .unwrap_or_default(),
            group_order: self.group.len(),
            projection: rows(&self.projection)?,
            inclusion: rows(&self.inclusion)?,
            fibers: self.fibers.clone(),
            doubled: self.doubled.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionJson {
    pub folded: DatumJson,
    pub folded_type: Vec<String>,
    pub group_order: usize,
    pub projection: Vec<Vec<i64>>,
    pub inclusion: Vec<Vec<i64>>,
    pub fibers: Vec<Vec<usize>>,
    pub doubled: Vec<bool>,
}

fn to_i64(v: &[BigInt]) -> IntVector {
    v.iter()
        .map(|x| x.to_i64().expect("coordinate fits in i64"))
        .collect()
}

/// Split datum of the underlying type together with the diagram automorphism
/// of a twisted label (the identity for untwisted labels).
pub fn twisted_pair(t: &CartanType, isogeny: Isogeny) -> Result<(BasedRootDatum, DatumAutomorphism)> {
    let datum = build_datum(&t.untwisted(), isogeny)?;
    let aut = if t.is_twisted() {
        diagram_automorphism(&datum, &t.twist_permutation()?)?
    } else {
        DatumAutomorphism::identity(&datum)
    };
    Ok((datum, aut))
}

/// Closes a set of automorphism matrices under multiplication.
fn group_closure(n: usize, gens: &[IntMatrix]) -> Result<Vec<IntMatrix>> {
    let mut elems = vec![IntMatrix::identity(n)];
    let mut seen: HashSet<IntMatrix> = elems.iter().cloned().collect();
    let mut k = 0;
    while k < elems.len() {
        for g in gens {
            let p = &elems[k] * g;
            if seen.insert(p.clone()) {
                elems.push(p);
                if elems.len() > GROUP_ORDER_CAP {
                    return Err(Error::TooLarge {
                        order: format!(">{GROUP_ORDER_CAP}"),
                        bound: GROUP_ORDER_CAP,
                    });
                }
            }
        }
        k += 1;
    }
    Ok(elems)
}

/// Folds a reduced datum along the group generated by `generators`.
///
/// `X̲` is the free part of the coinvariants, `X̲̌` the invariants in `X̌`,
/// rebased so the pairing becomes the dot product. Coroots of the folded
/// datum are fiber sums of coroots, doubled when twice the root is a root.
pub fn restrict_datum(datum: &BasedRootDatum, generators: &[DatumAutomorphism]) -> Result<RestrictionResult> {
    if !datum.is_reduced() {
        return Err(Error::NotReduced);
    }
    let n = datum.rank();
    for g in generators {
        if g.matrix.rows() != n || !g.matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.matrix.rows(),
            });
        }
        g.check(datum)?;
    }
    let gens: Vec<IntMatrix> = generators.iter().map(|g| g.matrix.clone()).collect();
    let group = group_closure(n, &gens)?;
    let id = IntMatrix::identity(n);

    // X_θ / torsion.
    let moved = gens
        .iter()
        .fold(IntMatrix::zeros(n, 0), |acc, g| acc.hstack(&(g - &id)));
    let coinv = cokernel(&moved);
    let projection = coinv.free_projection.clone();
    let lift = coinv.free_lift.clone();
    let r = coinv.free_rank;

    // X̌^θ as the kernel of the stacked (θ̌ - 1).
    let dual_moved = generators
        .iter()
        .fold(IntMatrix::zeros(0, n), |acc, g| acc.vstack(&(&g.dual_matrix() - &id)));
    let snf = smith_normal_form(&dual_moved);
    let kernel_cols: Vec<usize> = (snf.rank()..n).collect();
    let invariants = snf.v.select_columns(&kernel_cols);
    if invariants.cols() != r {
        return Err(Error::InvalidDatum(format!(
            "coinvariant rank {r} differs from invariant rank {}",
            invariants.cols()
        )));
    }
    // <x, J y> = (P x)^T G y with G = L^T J; rebase J so G becomes the identity.
    let gram = &lift.transpose() * &invariants;
    let gram_inv = gram
        .unimodular_inverse()
        .map_err(|_| Error::InvalidDatum("restricted pairing is not perfect".into()))?;
    let inclusion = &invariants * &gram_inv;

    // Fibers by equality of restrictions.
    let mut keys: Vec<IntVector> = Vec::new();
    let mut fibers: Vec<Vec<usize>> = Vec::new();
    let mut position: HashMap<IntVector, usize> = HashMap::new();
    for (i, a) in datum.roots().iter().enumerate() {
        let key = to_i64(&projection.mul_vec_i64(a));
        if key.iter().all(|&c| c == 0) {
            return Err(Error::InvalidDatum(format!("root {i} restricts to zero")));
        }
        match position.get(&key) {
            Some(&k) => fibers[k].push(i),
            None => {
                position.insert(key.clone(), keys.len());
                keys.push(key);
                fibers.push(vec![i]);
            }
        }
    }
    let doubled: Vec<bool> = keys
        .iter()
        .map(|k| position.contains_key(&k.iter().map(|c| 2 * c).collect::<IntVector>()))
        .collect();

    let incl_rows = to_rational_rows(&inclusion);
    let mut coroots = Vec::with_capacity(keys.len());
    for (fiber, &dbl) in fibers.iter().zip(&doubled) {
        let mut sum = vec![0i64; n];
        for &i in fiber {
            for (s, c) in sum.iter_mut().zip(&datum.coroots()[i]) {
                *s += c;
            }
        }
        if dbl {
            sum.iter_mut().for_each(|s| *s *= 2);
        }
        let rhs: Vec<Rational> = sum.iter().map(|&c| Rational::from_integer(c.into())).collect();
        let y = solve_unique(&incl_rows, &rhs)
            .filter(|y| y.iter().all(Rational::is_integer))
            .ok_or_else(|| Error::InvalidDatum("coroot sum is not invariant".into()))?;
        coroots.push(
            y.iter()
                .map(|q| q.to_integer().to_i64().expect("small coordinate"))
                .collect::<IntVector>(),
        );
    }

    let mut simple = Vec::new();
    for &s in datum.simple_indices() {
        let k = position[&to_i64(&projection.mul_vec_i64(&datum.roots()[s]))];
        if !simple.contains(&k) {
            simple.push(k);
        }
    }
    let reduced = !doubled.iter().any(|&d| d);
    let folded = BasedRootDatum::new(r, keys, coroots, simple, reduced);
    Ok(RestrictionResult {
        folded,
        group,
        projection,
        inclusion,
        fibers,
        doubled,
    })
}

/// Outcome of checking that folding yields a root datum whose Weyl group is
/// the restriction of the `θ`-fixed Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YuReport {
    pub folded_type: Vec<String>,
    pub folded_valid: bool,
    pub violation: Option<String>,
    pub weyl_order: usize,
    pub fixed_order: usize,
    pub folded_weyl_order: usize,
    pub injective: bool,
    pub generators_contained: bool,
    pub image_equal: bool,
}

impl YuReport {
    pub fn passed(&self) -> bool {
        self.folded_valid && self.injective && self.generators_contained && self.image_equal
    }
}

/// Checks the folded datum against the root datum axioms and compares
/// `{w|X̲̌ : w ∈ W^θ}` with `W(Ψ̲)` acting on `X̲̌`.
pub fn verify_theorem_yu(datum: &BasedRootDatum, generators: &[DatumAutomorphism], cap: usize) -> Result<YuReport> {
    let res = restrict_datum(datum, generators)?;
    let violation = res.folded.validate().err().map(|v| v.to_string());
    let n = datum.rank();
    let r = res.folded.rank();

    let weyl = generate_weyl(datum, cap)?;
    let gens: Vec<Vec<i64>> = generators.iter().map(|g| flat(&g.matrix)).collect();
    let fixed: Vec<Vec<i64>> = weyl
        .iter()
        .map(|w| flat(&w.matrix))
        .filter(|w| gens.iter().all(|g| mul(w, g, n) == mul(g, w, n)))
        .collect();

    // Dual action w^{-T} restricted to X̲̌: solve J y' = w^{-T} J y column by column.
    let incl = res.inclusion.to_i64_rows().expect("small entries");
    let incl_rows = to_rational_rows(&res.inclusion);
    let mut restricted: HashSet<Vec<i64>> = HashSet::new();
    for w in &fixed {
        let winv_t = transpose(&invert(w, n)?, n);
        let mut m = vec![0i64; r * r];
        for j in 0..r {
            let col: Vec<i64> = (0..n).map(|i| incl[i][j]).collect();
            let img = apply(&winv_t, &col, n);
            let rhs: Vec<Rational> = img.iter().map(|&c| Rational::from_integer(c.into())).collect();
            let y = solve_unique(&incl_rows, &rhs)
                .filter(|y| y.iter().all(Rational::is_integer))
                .ok_or_else(|| Error::InvalidDatum("fixed Weyl element leaves the invariants".into()))?;
            for (i, q) in y.iter().enumerate() {
                m[i * r + j] = q.to_integer().to_i64().unwrap();
            }
        }
        restricted.insert(m);
    }
    let injective = restricted.len() == fixed.len();

    let folded_weyl = generate_weyl(&res.folded, cap)?;
    let folded_dual: HashSet<Vec<i64>> = folded_weyl
        .iter()
        .map(|w| Ok(transpose(&invert(&flat(&w.matrix), r)?, r)))
        .collect::<Result<_>>()?;
    let generators_contained = (0..res.folded.num_simple()).all(|i| {
        let s = flat(&res.folded.simple_reflection_matrix(i));
        restricted.contains(&transpose(&invert(&s, r).unwrap(), r))
    });
    Ok(YuReport {
        folded_type: res
            .folded
            .identify_type()
            .map(|ts| ts.iter().map(ToString::to_string).collect())
            .unwrap_or_default(),
        folded_valid: violation.is_none(),
        violation,
        weyl_order: weyl.len(),
        fixed_order: fixed.len(),
        folded_weyl_order: folded_weyl.len(),
        injective,
        generators_contained,
        image_equal: restricted == folded_dual,
    })
}

/// `Ω̲` of the folded datum.
pub fn folded_omega(datum: &BasedRootDatum, generators: &[DatumAutomorphism]) -> Result<OmegaGroup> {
    let res = restrict_datum(datum, generators)?;
    omega_by_cosets(&res.folded)
}

fn flat(m: &IntMatrix) -> Vec<i64> {
    m.to_i64_rows().expect("small entries").concat()
}

fn mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    out[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    out
}

fn apply(m: &[i64], v: &[i64], n: usize) -> Vec<i64> {
    (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
}

fn transpose(m: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = m[i * n + j];
        }
    }
    out
}

fn invert(m: &[i64], n: usize) -> Result<Vec<i64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let rows: Vec<Vec<i64>> = m.chunks(n).map(<[i64]>::to_vec).collect();
    Ok(flat(&IntMatrix::from_rows(&rows).unimodular_inverse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::pair;
    use crate::weyl::DEFAULT_WEYL_CAP;

    fn fold(label: &str) -> (BasedRootDatum, DatumAutomorphism, RestrictionResult) {
        let (d, aut) = twisted_pair(&label.parse().unwrap(), Isogeny::SimplyConnected).unwrap();
        let res = restrict_datum(&d, std::slice::from_ref(&aut)).unwrap();
        (d, aut, res)
    }

    fn folded_type(res: &RestrictionResult) -> Vec<String> {
        res.folded
            .identify_type()
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn trivial_group_is_identity() {
        let d = build_datum(&"B3".parse().unwrap(), Isogeny::SimplyConnected).unwrap();
        let res = restrict_datum(&d, &[]).unwrap();
        assert_eq!(res.folded.rank(), 3);
        assert_eq!(res.fibers.len(), d.roots().len());
        assert!(res.fibers.iter().all(|f| f.len() == 1));
        assert_eq!(&res.projection * &res.inclusion, IntMatrix::identity(3));
        assert_eq!(res.folded.cartan_matrix(), d.cartan_matrix());
        assert_eq!(folded_type(&res), vec!["B3"]);
    }

    #[test]
    fn a3_folds_to_c2() {
        let (_, _, res) = fold("2A3");
        assert_eq!(folded_type(&res), vec!["C2"]);
        res.folded.validate().unwrap();
    }

    #[test]
    fn a2_folds_to_bc1() {
        let (_, _, res) = fold("2A2");
        assert_eq!(folded_type(&res), vec!["BC1"]);
        assert!(res.doubled.iter().any(|&d| d));
        assert!(!res.folded.is_reduced());
        res.folded.validate().unwrap();
        let mut roots = res.folded.roots().to_vec();
        roots.sort();
        assert_eq!(roots, vec![vec![-2], vec![-1], vec![1], vec![2]]);
        for (a, c) in res.folded.roots().iter().zip(res.folded.coroots()) {
            assert_eq!(pair(a, c), 2);
        }
    }

    #[test]
    fn triality_folds_to_g2() {
        let (_, _, res) = fold("3D4");
        assert_eq!(res.group.len(), 3);
        assert_eq!(folded_type(&res), vec!["G2"]);
    }

    #[test]
    fn e6_folds_to_f4() {
        let (_, _, res) = fold("2E6");
        assert_eq!(folded_type(&res), vec!["F4"]);
    }

    #[test]
    fn fibers_partition_roots() {
        for label in ["2A4", "2A5", "2D5", "3D4", "2E6"] {
            let (d, _, res) = fold(label);
            let mut all: Vec<usize> = res.fibers.concat();
            all.sort_unstable();
            assert_eq!(all, (0..d.roots().len()).collect::<Vec<_>>(), "{label}");
        }
    }

    #[test]
    fn pairing_is_preserved() {
        let (d, _, res) = fold("2D5");
        for x in d.roots() {
            for j in 0..res.folded.rank() {
                let mut y = vec![0; res.folded.rank()];
                y[j] = 1;
                assert_eq!(pair(&res.project(x), &y), pair(x, &res.include(&y)));
            }
        }
    }

    #[test]
    fn yu_small_cases() {
        for (label, fixed) in [("2A3", 8), ("3D4", 12), ("2A2", 2)] {
            let (d, aut, _) = fold(label);
            let rep = verify_theorem_yu(&d, &[aut], DEFAULT_WEYL_CAP).unwrap();
            assert!(rep.passed(), "{label}: {rep:?}");
            assert_eq!(rep.fixed_order, fixed, "{label}");
            assert_eq!(rep.folded_weyl_order, fixed, "{label}");
        }
    }

    #[test]
    fn folded_omega_orders() {
        for (label, factors) in [("2A5", vec![2u64]), ("2D5", vec![2]), ("2A2", vec![])] {
            let (d, aut) = twisted_pair(&label.parse().unwrap(), Isogeny::SimplyConnected).unwrap();
            let o = folded_omega(&d, &[aut]).unwrap();
            o.verify().unwrap();
            let got: Vec<u64> = o.iso_type().iter().map(|f| f.to_u64().unwrap()).collect();
            assert_eq!(got, factors, "{label}");
        }
    }

    #[test]
    fn rejects_non_reduced_input() {
        let (_, _, res) = fold("2A2");
        assert!(matches!(restrict_datum(&res.folded, &[]), Err(Error::NotReduced)));
    }

    #[test]
    fn group_cap() {
        let d = build_datum(&"D4".parse().unwrap(), Isogeny::SimplyConnected).unwrap();
        let tri = diagram_automorphism(&d, &[2, 1, 3, 0]).unwrap();
        let flip = diagram_automorphism(&d, &[0, 1, 3, 2]).unwrap();
        let res = restrict_datum(&d, &[tri, flip]).unwrap();
        assert_eq!(res.group.len(), 6);
        assert_eq!(folded_type(&res), vec!["G2"]);
    }
}
