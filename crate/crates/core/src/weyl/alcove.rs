use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::rational::{int, solve_unique, Rational};
use crate::lattice::{IntMatrix, RationalVector};
use crate::rootdata::{pair, BasedRootDatum, IntVector};
use crate::weyl::affine::AffineMap;
use crate::weyl::group::WeylElement;

/// Iteration guard for [`Alcove::reduce`].
pub const REDUCTION_STEP_CAP: usize = 1_000_000;

/// Affine functional `f(x) = constant + <x, linear>` bounding the alcove.
/// Reflection in its zero set is `x ↦ x - f(x)·root`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub linear: IntVector,
    pub constant: i64,
    pub root: IntVector,
    pub component: usize,
}

impl Wall {
    pub fn eval(&self, x: &RationalVector) -> Rational {
        int(self.constant) + x.pair(&self.linear)
    }
}

/// Fundamental alcove of `W ⋉ Q`, one simplex factor per irreducible component.
///
/// Wall order: one affine wall `1 - β̌` per component first, then the simple
/// coroots in datum order. For an irreducible datum wall `0` is `α̌_0` and wall
/// `j` is `α̌_j` (1-based).
#[derive(Clone, Debug)]
pub struct Alcove {
    datum: BasedRootDatum,
    components: Vec<Vec<usize>>,
    walls: Vec<Wall>,
    marks: Vec<Vec<Rational>>,
    coxeter: Vec<Rational>,
    c0: RationalVector,
}

impl Alcove {
    pub fn new(datum: &BasedRootDatum) -> Result<Self> {
        if !datum.is_semisimple() || datum.rank() == 0 {
            return Err(Error::NotSemisimple);
        }
        let components = datum.components();
        let l = datum.num_simple();
        let mut walls = Vec::with_capacity(l + components.len());
        let mut marks = Vec::new();
        let mut coxeter = Vec::new();
        for (k, comp) in components.iter().enumerate() {
            let (idx, m) = component_highest_coroot(datum, comp)?;
            let h = Rational::one() + m.iter().sum::<Rational>();
            let beta = &datum.roots()[idx];
            walls.push(Wall {
                linear: datum.coroots()[idx].iter().map(|c| -c).collect(),
                constant: 1,
                root: beta.iter().map(|c| -c).collect(),
                component: k,
            });
            marks.push(m);
            coxeter.push(h);
        }
        let comp_of: Vec<usize> = (0..l)
            .map(|i| components.iter().position(|c| c.contains(&i)).unwrap())
            .collect();
        for i in 0..l {
            walls.push(Wall {
                linear: datum.simple_coroot(i).clone(),
                constant: 0,
                root: datum.simple_root(i).clone(),
                component: comp_of[i],
            });
        }
        let values: Vec<Rational> = (0..l)
            .map(|i| coxeter[comp_of[i]].recip())
            .collect();
        let c0 = point_from_simple_values(datum, &values)?;
        let alcove = Self {
            datum: datum.clone(),
            components,
            walls,
            marks,
            coxeter,
            c0,
        };
        // Every functional, α̌_0 included, takes the value 1/h at c0.
        for w in &alcove.walls {
            if w.eval(&alcove.c0) != alcove.coxeter[w.component].recip() {
                return Err(Error::InvalidDatum(
                    "barycenter equations are inconsistent".into(),
                ));
            }
        }
        Ok(alcove)
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Marks `n_i` of the highest coroot of component `k`.
    pub fn marks(&self, k: usize) -> &[Rational] {
        &self.marks[k]
    }

    pub fn coxeter_number(&self, k: usize) -> &Rational {
        &self.coxeter[k]
    }

    /// Weighted barycenter: every wall functional equals `1/h` there.
    pub fn barycenter(&self) -> &RationalVector {
        &self.c0
    }

    pub fn wall_values(&self, x: &RationalVector) -> Vec<Rational> {
        self.walls.iter().map(|w| w.eval(x)).collect()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        x.dim() == self.rank() && self.walls.iter().all(|w| !w.eval(x).is_negative())
    }

    pub fn contains_interior(&self, x: &RationalVector) -> bool {
        x.dim() == self.rank() && self.walls.iter().all(|w| w.eval(x).is_positive())
    }

    /// Vertices of the closed alcove (products of the component simplices).
    pub fn vertices(&self) -> Vec<RationalVector> {
        let l = self.datum.num_simple();
        // Per component, the list of simple-coroot value assignments.
        let choices: Vec<Vec<Vec<(usize, Rational)>>> = self
            .components
            .iter()
            .zip(&self.marks)
            .map(|(comp, marks)| {
                let mut opts = vec![Vec::new()];
                for (pos, &i) in comp.iter().enumerate() {
                    opts.push(vec![(i, marks[pos].recip())]);
                }
                opts
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let mut values = vec![Rational::zero(); l];
            for (k, &c) in idx.iter().enumerate() {
                for (i, v) in &choices[k][c] {
                    values[*i] = v.clone();
                }
            }
            out.push(point_from_simple_values(&self.datum, &values).expect("semisimple"));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Ordinary centroid of the vertices; interior but not `c0` in general.
    pub fn centroid(&self) -> RationalVector {
        let verts = self.vertices();
        let n = Rational::from_integer(BigInt::from(verts.len()));
        let sum = verts
            .iter()
            .fold(RationalVector::zeros(self.rank()), |acc, v| &acc + v);
        sum.scale(&n.recip())
    }

    /// Barycenter of the vertices lying on every wall in `active`.
    pub fn face_point(&self, active: &[usize]) -> Result<RationalVector> {
        if let Some(&bad) = active.iter().find(|&&i| i >= self.walls.len()) {
            return Err(Error::DimensionMismatch {
                expected: self.walls.len(),
                found: bad + 1,
            });
        }
        let verts: Vec<RationalVector> = self
            .vertices()
            .into_iter()
            .filter(|v| active.iter().all(|&i| self.walls[i].eval(v).is_zero()))
            .collect();
        if verts.is_empty() {
            return Err(Error::PointOutsideAlcove);
        }
        let n = Rational::from_integer(BigInt::from(verts.len()));
        let sum = verts
            .iter()
            .fold(RationalVector::zeros(self.rank()), |acc, v| &acc + v);
        Ok(sum.scale(&n.recip()))
    }

    /// The unique point of `C̄` in the `W ⋉ Q`-orbit of `x`, with a witness
    /// `g` satisfying `g·x = x0`.
    ///
    /// Repeatedly reflects in the most violated wall; ties go to the lowest
    /// wall index.
    pub fn reduce(&self, x: &RationalVector) -> Result<(RationalVector, AffineMap)> {
        let (x0, w) = self.reduce_inner(x, true)?;
        Ok((x0, w.expect("witness requested")))
    }

    /// [`Alcove::reduce`] without building the witness.
    pub fn reduce_point(&self, x: &RationalVector) -> Result<RationalVector> {
        Ok(self.reduce_inner(x, false)?.0)
    }

    fn reduce_inner(
        &self,
        x: &RationalVector,
        with_witness: bool,
    ) -> Result<(RationalVector, Option<AffineMap>)> {
        let n = self.rank();
        if x.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.dim(),
            });
        }
        let den = x.common_denominator();
        let den128 = den.to_i128().ok_or(Error::InvalidDatum("denominator overflow".into()))?;
        let mut y: Vec<i128> = x
            .coords()
            .iter()
            .map(|q| {
                (q.numer() * (&den / q.denom()))
                    .to_i128()
                    .ok_or(Error::InvalidDatum("coordinate overflow".into()))
            })
            .collect::<Result<_>>()?;
        let mut m: Vec<i64> = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        let mut t: Vec<i64> = vec![0; n];
        let overflow = || Error::InvalidDatum("coordinate overflow".into());
        for _ in 0..REDUCTION_STEP_CAP {
            let mut worst: Option<(usize, i128)> = None;
            for (k, w) in self.walls.iter().enumerate() {
                let mut f = i128::from(w.constant)
                    .checked_mul(den128)
                    .ok_or_else(overflow)?;
                for (a, b) in y.iter().zip(&w.linear) {
                    f = a
                        .checked_mul(i128::from(*b))
                        .and_then(|p| f.checked_add(p))
                        .ok_or_else(overflow)?;
                }
                if f < 0 && worst.is_none_or(|(_, g)| f < g) {
                    worst = Some((k, f));
                }
            }
            let Some((k, f)) = worst else {
                let coords = y
                    .iter()
                    .map(|&v| Rational::new(BigInt::from(v), den.clone()))
                    .collect();
                let witness = with_witness.then(|| AffineMap {
                    linear: WeylElement::from_matrix(&self.datum, unflat(&m, n)),
                    translation: RationalVector::from_ints(&t),
                });
                return Ok((RationalVector::new(coords), witness));
            };
            let w = &self.walls[k];
            for (yi, r) in y.iter_mut().zip(&w.root) {
                *yi = f
                    .checked_mul(i128::from(*r))
                    .and_then(|p| yi.checked_sub(p))
                    .ok_or_else(overflow)?;
            }
            if !with_witness {
                continue;
            }
            // New witness: s ∘ (m, t) where s(z) = z - (c + <z, v>) r.
            for j in 0..n {
                let col_pair: i64 = (0..n).map(|i| w.linear[i] * m[i * n + j]).sum();
                for i in 0..n {
                    m[i * n + j] -= col_pair * w.root[i];
                }
            }
            let tp = w.constant + pair(&t, &w.linear);
            for (ti, r) in t.iter_mut().zip(&w.root) {
                *ti -= tp * r;
            }
        }
        Err(Error::NonTermination(REDUCTION_STEP_CAP))
    }
}

/// The point with prescribed values `<x, α̌_i>` on the simple coroots.
pub fn point_from_simple_values(datum: &BasedRootDatum, values: &[Rational]) -> Result<RationalVector> {
    let system: Vec<Vec<Rational>> = (0..datum.num_simple())
        .map(|i| datum.simple_coroot(i).iter().map(|&c| int(c)).collect())
        .collect();
    solve_unique(&system, values)
        .map(RationalVector::new)
        .ok_or(Error::NotSemisimple)
}

/// Highest coroot among those supported on one component, with its marks.
fn component_highest_coroot(datum: &BasedRootDatum, comp: &[usize]) -> Result<(usize, Vec<Rational>)> {
    let mut best: Option<(usize, Vec<Rational>, Rational)> = None;
    let mut candidates = Vec::new();
    for (idx, c) in datum.coroots().iter().enumerate() {
        let coords = datum
            .coroot_coordinates(c)
            .ok_or_else(|| Error::InvalidDatum("coroot outside the simple coroot span".into()))?;
        let supported = coords
            .iter()
            .enumerate()
            .all(|(i, q)| q.is_zero() || comp.contains(&i));
        if !supported {
            continue;
        }
        let local: Vec<Rational> = comp.iter().map(|&i| coords[i].clone()).collect();
        let height: Rational = local.iter().sum();
        if best.as_ref().is_none_or(|(_, _, h)| height > *h) {
            best = Some((idx, local.clone(), height));
        }
        candidates.push(local);
    }
    let (idx, marks, _) = best.ok_or(Error::NotIrreducible)?;
    let dominant = candidates
        .iter()
        .all(|c| c.iter().zip(&marks).all(|(x, top)| x <= top));
    if !dominant {
        return Err(Error::InvalidDatum("coroot system has no highest element".into()));
    }
    Ok((idx, marks))
}

fn unflat(m: &[i64], n: usize) -> IntMatrix {
    if n == 0 {
        return IntMatrix::zeros(0, 0);
    }
    let rows: Vec<Vec<i64>> = m.chunks(n).map(<[i64]>::to_vec).collect();
    IntMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rat;
    use crate::rootdata::{build_datum, Isogeny};

    fn alcove(label: &str, iso: Isogeny) -> Alcove {
        Alcove::new(&build_datum(&label.parse().unwrap(), iso).unwrap()).unwrap()
    }

    #[test]
    fn a1_barycenter_is_midpoint() {
        let a = alcove("A1", Isogeny::SimplyConnected);
        assert_eq!(a.coxeter_number(0), &int(2));
        // Simple coroot pairs as the identity, so <c0, α̌> = 1/2.
        assert_eq!(a.barycenter(), &RationalVector::new(vec![rat(1, 2)]));
        assert_eq!(a.vertices().len(), 2);
    }

    #[test]
    fn a2_barycenter_values() {
        let a = alcove("A2", Isogeny::SimplyConnected);
        for v in a.wall_values(a.barycenter()) {
            assert_eq!(v, rat(1, 3));
        }
    }

    #[test]
    fn c2_values_match_coxeter_number() {
        let a = alcove("C2", Isogeny::Adjoint);
        assert_eq!(a.coxeter_number(0), &int(4));
        for v in a.wall_values(a.barycenter()) {
            assert_eq!(v, rat(1, 4));
        }
    }

    #[test]
    fn vertices_sit_on_all_but_one_wall() {
        let a = alcove("E6", Isogeny::SimplyConnected);
        let verts = a.vertices();
        assert_eq!(verts.len(), 7);
        for v in &verts {
            let nonzero = a.wall_values(v).iter().filter(|q| !q.is_zero()).count();
            assert_eq!(nonzero, 1);
        }
        assert!(a.contains_interior(&a.centroid()));
    }

    #[test]
    fn reduce_fixes_alcove_points() {
        let a = alcove("B3", Isogeny::SimplyConnected);
        let c0 = a.barycenter().clone();
        let (x0, g) = a.reduce(&c0).unwrap();
        assert_eq!(x0, c0);
        assert!(g.linear.is_identity() && g.translation.is_zero());
    }

    #[test]
    fn reduce_undoes_root_translation() {
        let a = alcove("G2", Isogeny::SimplyConnected);
        let d = a.datum().clone();
        let q: IntVector = d
            .simple_root(0)
            .iter()
            .zip(d.simple_root(1))
            .map(|(x, y)| 3 * x - 2 * y)
            .collect();
        let x = a.barycenter() + &RationalVector::from_ints(&q);
        let (x0, g) = a.reduce(&x).unwrap();
        assert_eq!(&x0, a.barycenter());
        assert!(g.linear.is_identity());
        assert_eq!(g.translation, -&RationalVector::from_ints(&q));
    }

    #[test]
    fn reduce_witness_maps_input_to_output() {
        let a = alcove("A3", Isogeny::SimplyConnected);
        let x = RationalVector::new(vec![rat(17, 5), rat(-9, 7), rat(4, 3)]);
        let (x0, g) = a.reduce(&x).unwrap();
        assert!(a.contains(&x0));
        assert_eq!(g.act(&x).unwrap(), x0);
        assert!(g.is_integral());
        assert_eq!(WeylElement::from_word(a.datum(), &g.linear.word).matrix, g.linear.matrix);
    }

    #[test]
    fn reducible_alcove_is_a_product() {
        let a1 = build_datum(&"A1".parse().unwrap(), Isogeny::SimplyConnected).unwrap();
        let a2 = build_datum(&"A2".parse().unwrap(), Isogeny::SimplyConnected).unwrap();
        let al = Alcove::new(&BasedRootDatum::direct_sum(&[a1, a2])).unwrap();
        assert_eq!(al.num_components(), 2);
        assert_eq!(al.vertices().len(), 6);
        assert_eq!(
            al.barycenter(),
            &RationalVector::new(vec![rat(1, 2), rat(1, 3), rat(1, 3)])
        );
    }

    #[test]
    fn face_points() {
        let a = alcove("A2", Isogeny::SimplyConnected);
        assert_eq!(a.face_point(&[1, 2]).unwrap(), RationalVector::zeros(2));
        let edge = a.face_point(&[0]).unwrap();
        assert_eq!(edge, RationalVector::new(vec![rat(1, 2), rat(1, 2)]));
        assert!(matches!(a.face_point(&[0, 1, 2]), Err(Error::PointOutsideAlcove)));
    }

    #[test]
    fn torus_is_rejected() {
        assert!(matches!(
            Alcove::new(&BasedRootDatum::torus(2)),
            Err(Error::NotSemisimple)
        ));
    }
}
