use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, RationalVector};
use crate::rootdata::BasedRootDatum;
use crate::weyl::group::WeylElement;

/// `x ↦ linear·x + translation` on `X ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub linear: WeylElement,
    pub translation: RationalVector,
}

impl AffineMap {
    pub fn identity(rank: usize) -> Self {
        Self {
            linear: WeylElement::identity(rank),
            translation: RationalVector::zeros(rank),
        }
    }

    pub fn translation(t: RationalVector) -> Self {
        Self {
            linear: WeylElement::identity(t.dim()),
            translation: t,
        }
    }

    /// The affine map fixing `center` with tangent part `w`:
    /// `x ↦ w(x - center) + center`.
    pub fn fixing(w: WeylElement, center: &RationalVector) -> Self {
        let moved = RationalVector::apply(&w.matrix, center);
        Self {
            translation: center - &moved,
            linear: w,
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.linear.matrix
    }

    /// `(w1, t1)·(w2, t2) = (w1 w2, t1 + w1 t2)`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            linear: self.linear.compose(&other.linear),
            translation: &self.translation
                + &RationalVector::apply(&self.linear.matrix, &other.translation),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.linear.inverse();
        let t = RationalVector::apply(&inv.matrix, &self.translation);
        Self {
            linear: inv,
            translation: -&t,
        }
    }

    /// Same map, ignoring the recorded words.
    pub fn same_map(&self, other: &Self) -> bool {
        self.linear.matrix == other.linear.matrix && self.translation == other.translation
    }

    /// Whether the map lies in `W ⋉ X` (integral translation).
    pub fn is_integral(&self) -> bool {
        self.translation.is_integral()
    }

    pub fn act(&self, x: &RationalVector) -> Result<RationalVector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(&RationalVector::apply(&self.linear.matrix, x) + &self.translation)
    }

    /// Re-derives the word of the linear part from its matrix.
    pub fn normalize_word(mut self, datum: &BasedRootDatum) -> Self {
        self.linear = WeylElement::from_matrix(datum, self.linear.matrix);
        self
    }

    pub fn to_json(&self) -> AffineMapJson {
        AffineMapJson {
            matrix: self.linear.matrix.to_i64_rows().expect("small entries"),
            word: self.linear.word.clone(),
            translation: self.translation.clone(),
        }
    }
}

/// Wire form: `{matrix: [[int]], translation: ["p/q"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMapJson {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default)]
    pub word: Vec<usize>,
    pub translation: RationalVector,
}

impl AffineMapJson {
    pub fn into_map(self) -> Result<AffineMap> {
        let n = self.translation.dim();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.matrix.len(),
            });
        }
        let matrix = if n == 0 {
            IntMatrix::zeros(0, 0)
        } else {
            IntMatrix::from_rows(&self.matrix)
        };
        Ok(AffineMap {
            linear: WeylElement {
                matrix,
                word: self.word,
            },
            translation: self.translation,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rat;
    use crate::rootdata::{build_datum, Isogeny};

    #[test]
    fn identity_acts_trivially() {
        let x = RationalVector::new(vec![rat(1, 3), rat(-2, 5)]);
        assert_eq!(AffineMap::identity(2).act(&x).unwrap(), x);
        assert!(matches!(
            AffineMap::identity(3).act(&x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn composition_and_inverse() {
        let d = build_datum(&"A2".parse().unwrap(), Isogeny::SimplyConnected).unwrap();
        let w1 = WeylElement::from_word(&d, &[0, 1]);
        let w2 = WeylElement::from_word(&d, &[1]);
        let m1 = AffineMap {
            linear: w1,
            translation: RationalVector::new(vec![rat(1, 2), rat(0, 1)]),
        };
        let m2 = AffineMap {
            linear: w2,
            translation: RationalVector::new(vec![rat(-1, 3), rat(2, 1)]),
        };
        let x = RationalVector::new(vec![rat(5, 7), rat(-1, 4)]);
        let lhs = m1.compose(&m2).act(&x).unwrap();
        let rhs = m1.act(&m2.act(&x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let back = m1.inverse().act(&m1.act(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn fixing_map_fixes_its_center() {
        let d = build_datum(&"B2".parse().unwrap(), Isogeny::SimplyConnected).unwrap();
        let c = RationalVector::new(vec![rat(1, 4), rat(1, 4)]);
        let m = AffineMap::fixing(WeylElement::from_word(&d, &[0, 1, 0]), &c);
        assert_eq!(m.act(&c).unwrap(), c);
    }

    #[test]
    fn json_shape() {
        let m = AffineMap::translation(RationalVector::new(vec![rat(1, 2)]));
        let s = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(s, r#"{"matrix":[[1]],"word":[],"translation":["1/2"]}"#);
        let back: AffineMapJson = serde_json::from_str(&s).unwrap();
        assert!(back.into_map().unwrap().same_map(&m));
    }
}
