use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational::{int, solve_unique, Rational};
use crate::lattice::IntMatrix;
use crate::rootdata::datum::{BasedRootDatum, IntVector};

/// Automorphism of a based root datum, given by its matrix on `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumAutomorphism {
    pub matrix: IntMatrix,
    /// `simple_permutation[i] = j` when the `i`-th simple root maps to the `j`-th.
    pub simple_permutation: Vec<usize>,
    pub order: u32,
}

impl DatumAutomorphism {
    pub fn identity(datum: &BasedRootDatum) -> Self {
        Self {
            matrix: IntMatrix::identity(datum.rank()),
            simple_permutation: (0..datum.num_simple()).collect(),
            order: 1,
        }
    }

    /// Action on `X̌` making the pairing invariant: the inverse transpose.
    pub fn dual_matrix(&self) -> IntMatrix {
        self.matrix
            .unimodular_inverse()
            .expect("automorphism matrix is unimodular")
            .transpose()
    }

    pub fn apply(&self, x: &[i64]) -> IntVector {
        to_i64(&self.matrix.mul_vec_i64(x))
    }

    pub fn apply_dual(&self, y: &[i64]) -> IntVector {
        to_i64(&self.dual_matrix().mul_vec_i64(y))
    }

    /// Induced permutation of root indices; errors if `R` or `Ř` is not preserved
    /// compatibly.
    pub fn root_permutation(&self, datum: &BasedRootDatum) -> Result<Vec<usize>> {
        let dual = self.dual_matrix();
        datum
            .roots()
            .iter()
            .zip(datum.coroots())
            .map(|(r, c)| {
                let img = self.apply(r);
                let j = datum
                    .root_index(&img)
                    .ok_or_else(|| Error::NotAnAutomorphism("root image is not a root".into()))?;
                let cimg = to_i64(&dual.mul_vec_i64(c));
                if datum.coroots()[j] != cimg {
                    return Err(Error::NotAnAutomorphism(
                        "coroot image does not match the root image".into(),
                    ));
                }
                Ok(j)
            })
            .collect()
    }

    /// Checks that `Δ` and `Δ̌` are preserved and the stated order is exact.
    pub fn check(&self, datum: &BasedRootDatum) -> Result<()> {
        let perm = self.root_permutation(datum)?;
        let simple = datum.simple_indices();
        for (i, &s) in simple.iter().enumerate() {
            let target = simple
                .iter()
                .position(|&t| t == perm[s])
                .ok_or_else(|| Error::NotAnAutomorphism("simple root not preserved".into()))?;
            if target != self.simple_permutation[i] {
                return Err(Error::NotAnAutomorphism(
                    "stated simple permutation is wrong".into(),
                ));
            }
        }
        if !self.matrix.pow(self.order).is_identity() {
            return Err(Error::NotAnAutomorphism("matrix^order != 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn to_i64(v: &[num_bigint::BigInt]) -> IntVector {
    use num_traits::ToPrimitive;
    v.iter()
        .map(|x| x.to_i64().expect("coordinate fits in i64"))
        .collect()
}

/// The automorphism of a semisimple datum fixing the based structure and
/// permuting the simple roots by `perm`.
///
/// Solves `M α_i = α_perm(i)` exactly over Q and checks that `M` is integral,
/// unimodular and carries `α̌_i` to `α̌_perm(i)` under the inverse transpose.
pub fn diagram_automorphism(datum: &BasedRootDatum, perm: &[usize]) -> Result<DatumAutomorphism> {
    let l = datum.num_simple();
    if perm.len() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            found: perm.len(),
        });
    }
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..l).collect::<Vec<_>>() {
        return Err(Error::NotAnAutomorphism("not a permutation".into()));
    }
    if !datum.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    let a = datum.cartan_matrix();
    for i in 0..l {
        for j in 0..l {
            if a[perm[i]][perm[j]] != a[i][j] {
                return Err(Error::NotAnAutomorphism(format!(
                    "Cartan entry ({i},{j}) not preserved"
                )));
            }
        }
    }
    let n = datum.rank();
    // Row k of M solves  (simple roots)^T m_k = (permuted simple roots)_k.
    let sr = datum.simple_roots();
    let system: Vec<Vec<Rational>> = (0..l)
        .map(|i| (0..n).map(|c| int(sr[i][c])).collect())
        .collect();
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let rhs: Vec<Rational> = (0..l).map(|i| int(sr[perm[i]][k])).collect();
        let sol = solve_unique(&system, &rhs)
            .ok_or_else(|| Error::NotAnAutomorphism("no unique linear solution".into()))?;
        if !sol.iter().all(Rational::is_integer) {
            return Err(Error::NotAnAutomorphism(
                "permutation does not lift to X".into(),
            ));
        }
        rows.push(sol.into_iter().map(|q| q.to_integer()).collect::<Vec<_>>());
    }
    let matrix = IntMatrix::from_rows(&rows);
    if !matrix.is_unimodular() {
        return Err(Error::NotAnAutomorphism("lift is not unimodular".into()));
    }
    let mut order = 1u32;
    let mut power = matrix.clone();
    while !power.is_identity() {
        power = &power * &matrix;
        order += 1;
        if order > 64 {
            return Err(Error::NotAnAutomorphism("infinite order".into()));
        }
    }
    let aut = DatumAutomorphism {
        matrix,
        simple_permutation: perm.to_vec(),
        order,
    };
    aut.check(datum)?;
    Ok(aut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_datum, CartanType, Isogeny};

    fn sc(label: &str) -> BasedRootDatum {
        build_datum(&label.parse().unwrap(), Isogeny::SimplyConnected).unwrap()
    }

    #[test]
    fn identity_permutation() {
        let d = sc("B3");
        let aut = diagram_automorphism(&d, &[0, 1, 2]).unwrap();
        assert!(aut.matrix.is_identity());
        assert_eq!(aut.order, 1);
    }

    #[test]
    fn a3_flip_on_weight_lattice() {
        let d = sc("A3");
        let aut = diagram_automorphism(&d, &[2, 1, 0]).unwrap();
        assert_eq!(aut.order, 2);
        // Permutes the fundamental weights w1 <-> w3.
        let expected = IntMatrix::from_rows(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(aut.matrix, expected);
    }

    #[test]
    fn d4_triality() {
        let d = sc("D4");
        let t: CartanType = "3D4".parse().unwrap();
        let aut = diagram_automorphism(&d, &t.twist_permutation().unwrap()).unwrap();
        assert_eq!(aut.order, 3);
        // theta * (root matrix) = (root matrix) * (permutation)
        let perm = aut.root_permutation(&d).unwrap();
        for (i, r) in d.roots().iter().enumerate() {
            assert_eq!(&aut.apply(r), &d.roots()[perm[i]]);
        }
    }

    #[test]
    fn adjoint_flip() {
        let d = build_datum(&"E6".parse().unwrap(), Isogeny::Adjoint).unwrap();
        let t: CartanType = "2E6".parse().unwrap();
        let aut = diagram_automorphism(&d, &t.twist_permutation().unwrap()).unwrap();
        assert_eq!(aut.order, 2);
    }

    #[test]
    fn rejects_non_automorphism() {
        let d = sc("B3");
        assert!(matches!(
            diagram_automorphism(&d, &[2, 1, 0]),
            Err(Error::NotAnAutomorphism(_))
        ));
    }
}
